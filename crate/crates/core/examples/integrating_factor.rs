//! ytilde by quadrature, with the step-doubling error estimate.

use shockbeta::model::{FluxModel, ShockConfig};
use shockbeta::numerics::QuadratureRule;
use shockbeta::profile::{solve_profile, Grid};
use shockbeta::ytilde::{exact_ytilde, solve_ytilde_if, IfOptions};

fn main() -> shockbeta::Result<()> {
    let cfg = ShockConfig::from_end_states(&FluxModel::quadratic_transverse(), 1.0, -1.0)?;
    let freq = cfg.neutral_zero(1.0)?;
    for rule in [QuadratureRule::Trapezoid, QuadratureRule::Simpson] {
        for n in [1000, 2000, 4000] {
            let grid = Grid::new(20.0, n)?;
            let profile = solve_profile(&cfg, &grid)?;
            let opts = IfOptions {
                rule,
                ..Default::default()
            };
            let (y, diag) = solve_ytilde_if(&cfg, &freq, &profile, &opts)?;
            let exact = exact_ytilde(&grid, freq);
            let err =
                y.v.iter()
                    .zip(&exact.v)
                    .map(|(a, b)| (a - b).abs())
                    .fold(0.0, f64::max);
            println!(
                "{:<9} N = {n:>5}  max |v error| {err:.3e}  estimate {:.3e}",
                rule.as_str(),
                diag.quadrature_estimate
            );
        }
    }
    Ok(())
}
