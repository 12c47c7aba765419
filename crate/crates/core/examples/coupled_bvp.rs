//! Profile and ytilde as one folded boundary value problem.

use shockbeta::model::{FluxModel, ShockConfig};
use shockbeta::profile::Grid;
use shockbeta::ytilde::{solve_coupled, CoupledOptions};

fn main() -> shockbeta::Result<()> {
    let flux = FluxModel::sine_transverse(4.0 * std::f64::consts::PI);
    let cfg = ShockConfig::from_end_states(&flux, 1.2, -1.0)?;
    let freq = cfg.neutral_zero(1.0)?;
    let grid = Grid::new(20.0, 4000)?;
    let sol = solve_coupled(&cfg, &freq, &grid, &CoupledOptions::default())?;
    let d = &sol.diagnostics;
    println!(
        "Newton {}  residual {:.2e}  mesh points {}  refinements {}",
        d.newton_iters, d.residual_norm, d.mesh_points, d.refinements
    );
    for x in [-10.0, -2.0, 0.0, 2.0, 10.0] {
        let k = ((x + 20.0) / grid.step()).round() as usize;
        println!(
            "x = {x:+5.1}  ubar {:+.6}  w {:+.6}  v {:+.6}",
            sol.profile.ubar[k], sol.ytilde.w[k], sol.ytilde.v[k]
        );
    }
    Ok(())
}
