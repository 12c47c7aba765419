//! beta for the closed-form example on three domain sizes, both methods.

use shockbeta::beta::{beta_convergence_study, BetaOptions};
use shockbeta::model::{FluxModel, ShockConfig};
use shockbeta::ytilde::Method;

fn main() -> shockbeta::Result<()> {
    let cfg = ShockConfig::from_end_states(&FluxModel::quadratic_transverse(), 1.0, -1.0)?;
    let freq = cfg.neutral_zero(1.0)?;
    let ls = [10.0, 20.0, 30.0];
    println!("{:<10}{:>12}{:>12}{:>12}", "method", "L=10", "L=20", "L=30");
    for m in [Method::Coupled, Method::IntegratingFactor] {
        let study = beta_convergence_study(&cfg, &freq, &ls, 100.0, m, &BetaOptions::default());
        print!("{:<10}", m.as_str());
        for r in study.results() {
            print!("{:>12.4}", r.beta.re);
        }
        println!("   sign stable: {}", study.sign_stable());
    }
    Ok(())
}
