//! Twirlability limits: largest ellipticity for stability and for contact,
//! tabulated over damping at fixed mean amplitude.

use hulahoop::perturb::{
    contact_bound_eps, small_amp_contact_bound, stability_bound_eps, Rotation,
};

fn main() -> hulahoop::Result<()> {
    let mu = 0.3;
    println!("mu = {mu}");
    println!("{:>6} {:>12} {:>12}", "gamma", "eps_stab", "eps_contact");
    for i in 0..6 {
        let gamma = 0.05 * i as f64;
        println!(
            "{gamma:>6.2} {:>12.6} {:>12.6}",
            stability_bound_eps(gamma, mu)?,
            contact_bound_eps(gamma, mu)?
        );
    }

    let (gamma, eps, mu) = (0.02, 0.03125, 0.15625);
    for rot in [Rotation::Clockwise, Rotation::Counterclockwise] {
        let check = small_amp_contact_bound(rot, gamma, eps, mu);
        println!(
            "small amplitude {rot:?}: contact value {:.4} vs bound {:.4} -> {}",
            check.value,
            check.bound,
            if check.ok { "ok" } else { "lost" }
        );
    }
    Ok(())
}
