//! Shock validation and the neutral zero of the Lopatinskiĭ determinant.

use num_complex::Complex64;
use shockbeta::model::{FluxModel, ShockConfig};

fn main() -> shockbeta::Result<()> {
    let flux = FluxModel::sine_transverse(4.0 * std::f64::consts::PI);
    for u_minus in [1.0, 1.25, 1.5] {
        let cfg = ShockConfig::from_end_states(&flux, u_minus, -1.0)?;
        let freq = cfg.neutral_zero(1.0)?;
        let d = cfg.lopatinskii(freq.lambda(), freq.xi0);
        println!(
            "u- = {u_minus:<5} s = {:+.4}  tau0 = {:+.6}  |Delta(i tau0, xi0)| = {:.1e}",
            cfg.s,
            freq.tau0,
            d.norm()
        );
    }
    let cfg = ShockConfig::from_end_states(&flux, 1.0, -1.0)?;
    let lam = Complex64::new(0.3, -0.2);
    println!("Delta(0.3 - 0.2i, 0.5) = {}", cfg.lopatinskii(lam, 0.5));

    match ShockConfig::from_end_states(&flux, -1.0, 1.0) {
        Err(e) => println!("rejected: {e}"),
        Ok(_) => unreachable!(),
    }
    Ok(())
}
