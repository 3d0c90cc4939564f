//! First-order rotation for slightly elliptic waist motion and its residual
//! as the ellipticity is halved.

use hulahoop::perturb::{max_residual, FirstOrderSolution};
use std::f64::consts::PI;

fn main() -> hulahoop::Result<()> {
    let (gamma, mu) = (0.2, 0.3);
    let base = FirstOrderSolution::new(gamma, 0.0, mu)?;
    println!(
        "gamma = {gamma}, mu = {mu}: phi0 = {:.6}, C = {:.6}, D = {:.6}",
        base.phi0, base.c, base.d
    );
    let mut previous: Option<f64> = None;
    for eps in [0.08, 0.04, 0.02, 0.01] {
        let sol = FirstOrderSolution::new(gamma, eps, mu)?;
        let r = max_residual(&sol, 0.0, 40.0 * PI, 40_001);
        match previous {
            Some(p) => println!(
                "eps = {eps:<5} max residual = {r:.3e}  ratio = {:.3}",
                p / r
            ),
            None => println!("eps = {eps:<5} max residual = {r:.3e}"),
        }
        previous = Some(r);
    }
    Ok(())
}
