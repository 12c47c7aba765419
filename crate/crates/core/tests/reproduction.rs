//! Published reference values for the closed-form example.

use shockbeta::beta::{beta_convergence_study, BetaOptions};
use shockbeta::model::{FluxModel, ShockConfig};
use shockbeta::profile::Grid;
use shockbeta::ytilde::{exact_ytilde, solve_coupled, CoupledOptions, Method};

fn exact_case() -> (ShockConfig, shockbeta::model::NeutralFrequency) {
    let cfg = ShockConfig::from_end_states(&FluxModel::quadratic_transverse(), 1.0, -1.0).unwrap();
    let freq = cfg.neutral_zero(1.0).unwrap();
    (cfg, freq)
}

fn norm2(a: &[f64], b: &[f64]) -> f64 {
    a.iter()
        .zip(b)
        .map(|(p, q)| (p - q).powi(2))
        .sum::<f64>()
        .sqrt()
}

/// Re beta published to four decimals; both methods round to the same
/// figures at L = 10 and agree to within one unit in the last place above.
#[test]
fn beta_table_four_decimals() {
    let (cfg, freq) = exact_case();
    let published = [
        (Method::Coupled, [9.9918, 10.0000, 10.0000]),
        (Method::IntegratingFactor, [9.9919, 10.0001, 10.0001]),
    ];
    for (method, row) in published {
        let study = beta_convergence_study(
            &cfg,
            &freq,
            &[10.0, 20.0, 30.0],
            100.0,
            method,
            &BetaOptions::default(),
        );
        assert!(study.sign_stable());
        for (r, expected) in study.results().zip(row) {
            assert!(
                (r.beta.re - expected).abs() <= 1.5e-4,
                "{} L={}: {} vs {expected}",
                method.as_str(),
                r.half_width,
                r.beta.re
            );
            assert!(r.beta.im.abs() <= 1e-8);
            assert_eq!(r.sign_re_beta, 1);
        }
    }
}

/// Coupled errors are at or below the published 2-norms.
#[test]
fn coupled_errors_at_most_published() {
    let (cfg, freq) = exact_case();
    let grid = Grid::new(20.0, 4000).unwrap();
    let sol = solve_coupled(&cfg, &freq, &grid, &CoupledOptions::default()).unwrap();
    let exact = exact_ytilde(&grid, freq);
    let ubar: Vec<f64> = grid.x.iter().map(|x| -(0.5 * x).tanh()).collect();
    assert!(norm2(&sol.profile.ubar, &ubar) <= 1.0470e-7);
    assert!(norm2(&sol.ytilde.v, &exact.v) <= 4.42128e-7);
    assert_eq!(norm2(&sol.ytilde.w, &exact.w), 0.0);
}
