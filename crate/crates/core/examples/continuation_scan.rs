//! Moving u- along the Hugoniot curve with warm-started solves.

use shockbeta::beta::compute_beta;
use shockbeta::model::FluxModel;
use shockbeta::numerics::QuadratureRule;
use shockbeta::profile::Grid;
use shockbeta::ytilde::{continuation_scan, CoupledOptions};

fn main() -> shockbeta::Result<()> {
    let flux = FluxModel::sine_transverse(4.0 * std::f64::consts::PI);
    let grid = Grid::new(20.0, 4000)?;
    let values: Vec<f64> = (0..=10).map(|k| 1.0 + 0.05 * k as f64).collect();
    let out = continuation_scan(&flux, -1.0, 1.0, &values, &grid, &CoupledOptions::default());
    for p in &out.points {
        let s = &p.solution;
        let b = compute_beta(
            &p.cfg,
            &p.freq,
            &s.profile,
            &s.ytilde,
            QuadratureRule::Trapezoid,
        )?;
        println!(
            "u- = {:.2}  Newton {}  Re beta = {:+.6}",
            p.u_minus, s.diagnostics.newton_iters, b.beta.re
        );
    }
    if let Some(e) = out.stall {
        println!("stopped: {e}");
    }
    Ok(())
}
