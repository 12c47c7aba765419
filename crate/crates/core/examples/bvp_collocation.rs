//! The Lobatto IIIA solver on Bratu's problem and a boundary layer.

use shockbeta::numerics::{bvp_solve, BvpOptions, BvpProblem, FnSystem, LobattoScheme};

fn bratu() -> impl shockbeta::numerics::BvpSystem {
    FnSystem {
        dim: 2,
        rhs: |_x: f64, y: &[f64], dy: &mut [f64]| {
            dy[0] = y[1];
            dy[1] = -y[0].exp();
        },
        bc: |ya: &[f64], yb: &[f64]| vec![ya[0], yb[0]],
    }
}

fn main() -> shockbeta::Result<()> {
    let mesh: Vec<f64> = (0..=10).map(|k| k as f64 / 10.0).collect();
    for scheme in [LobattoScheme::ThreeStage, LobattoScheme::FourStage] {
        let opts = BvpOptions {
            scheme,
            ..Default::default()
        };
        let p = BvpProblem::with_guess_fn(bratu(), mesh.clone(), |_| vec![0.0, 0.0])?.options(opts);
        let sol = bvp_solve(&p)?;
        println!(
            "Bratu, {scheme:?}: y'(0) = {:.10}, {} intervals, {} Newton steps",
            sol.eval(0.0)[1],
            sol.intervals(),
            sol.newton_iters
        );
    }

    let eps = 1e-3;
    let layer = FnSystem {
        dim: 2,
        rhs: move |_x: f64, y: &[f64], dy: &mut [f64]| {
            dy[0] = y[1];
            dy[1] = -y[1] / eps;
        },
        bc: |ya: &[f64], yb: &[f64]| vec![ya[0], yb[0] - 1.0],
    };
    let p = BvpProblem::with_guess_fn(layer, mesh, |x| vec![x, 1.0])?;
    let sol = bvp_solve(&p)?;
    println!(
        "boundary layer eps = {eps}: {} intervals after {} refinements, y(0.01) = {:.6}",
        sol.intervals(),
        sol.refinements,
        sol.eval(0.01)[0]
    );
    Ok(())
}
