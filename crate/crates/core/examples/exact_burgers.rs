//! Numerical Burgers profile against -tanh(x/2).

use shockbeta::model::{FluxModel, ShockConfig};
use shockbeta::profile::{exact_burgers_profile, solve_profile, Grid};

fn main() -> shockbeta::Result<()> {
    let cfg = ShockConfig::from_end_states(&FluxModel::burgers(), 1.0, -1.0)?;
    for n in [500, 1000, 4000] {
        let grid = Grid::new(20.0, n)?;
        let numeric = solve_profile(&cfg, &grid)?;
        let exact = exact_burgers_profile(&grid);
        println!(
            "N = {n:>5}  max error {:.3e}  tail residual {:.3e}",
            numeric.max_abs_diff(&exact)?,
            numeric.tail_residual(&cfg)
        );
    }
    Ok(())
}
