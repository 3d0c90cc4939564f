//! Normal and friction forces along a simulated rotation, in physical units,
//! and detection of the first loss of contact when the waist swings too far.

use hulahoop::model::{dimensional_forces, nondimensionalize, DimensionalParams, Params, State};
use hulahoop::perturb::Rotation;
use hulahoop::sim::{first_contact_loss, integrate, integrate_strided, seed_state};

fn main() -> hulahoop::Result<()> {
    let dims = DimensionalParams {
        m: 0.5,
        big_r: 0.45,
        r: 0.12,
        k: 0.02,
        a: 0.04,
        b: 0.03,
        omega: 6.0,
    };
    let p = nondimensionalize(&dims)?;
    let t = integrate_strided(&p, &seed_state(Rotation::Clockwise, &p), 200.0, 1e-3, 1000)?;
    for s in t.samples.iter().rev().take(5).rev() {
        let t_phys = s.tau / dims.omega;
        let physical = State::new(s.phi, s.phi_dot * dims.omega);
        let f = dimensional_forces(t_phys, &physical, &dims)?;
        println!(
            "t = {:6.3} s  N = {:8.4} N  F = {:8.4} N  theta' = {:8.4} rad/s  margin = {:.4}",
            t_phys, f.normal, f.friction, f.theta_dot, s.margin
        );
    }

    let violent = Params::new(0.01, 0.8, 0.8);
    let t = integrate(&violent, &State::new(0.0, 2.0), 20.0, 1e-3)?;
    match first_contact_loss(&t) {
        Some(tau) => println!("alpha = beta = 0.8: contact first lost at tau = {tau:.8}"),
        None => println!("alpha = beta = 0.8: contact kept"),
    }
    Ok(())
}
