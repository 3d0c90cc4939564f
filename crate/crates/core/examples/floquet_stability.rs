//! Floquet analysis of the first-order rotation: multipliers across the
//! ellipticity and a numeric search for the stability boundary.

use hulahoop::perturb::stability_bound_eps;
use hulahoop::stability::{floquet, numeric_eps_critical};

fn main() -> hulahoop::Result<()> {
    let (gamma, mu) = (0.2, 0.3);
    println!(
        "gamma = {gamma}, mu = {mu}, det should be exp(-gamma pi) = {:.8}",
        (-gamma * std::f64::consts::PI).exp()
    );
    for eps in [0.0, 0.1, 0.4, 1.0, 1.6, 2.0] {
        let r = floquet(gamma, mu, eps)?;
        println!(
            "eps = {eps:<4} |lambda| = {:.6}, {:.6}  det = {:.8}  {}",
            r.multipliers[0].norm(),
            r.multipliers[1].norm(),
            r.determinant,
            r.verdict
        );
    }
    let analytic = stability_bound_eps(gamma, mu)?;
    match numeric_eps_critical(gamma, mu, 1e-4) {
        Ok(numeric) => println!("analytic bound {analytic:.5}, numeric boundary {numeric:.5}"),
        Err(e) => println!("analytic bound {analytic:.5}, numeric search: {e}"),
    }
    Ok(())
}
