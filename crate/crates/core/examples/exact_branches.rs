//! Exact rotating solutions for circular waist motion (alpha == beta).
//!
//! `cargo run --example exact_branches -- 0.1 0.2`

use hulahoop::exact::{exact_contact_ok, exact_phases, exact_stability};

fn main() -> hulahoop::Result<()> {
    let args: Vec<f64> = std::env::args()
        .skip(1)
        .map(|a| a.parse().expect("numeric argument"))
        .collect();
    let (gamma, alpha) = match args.as_slice() {
        [g, a] => (*g, *a),
        _ => (0.1, 0.2),
    };
    let phases = exact_phases(gamma, alpha)?;
    println!("gamma = {gamma}, alpha = {alpha}");
    for b in [phases.stable, phases.unstable] {
        let spectrum = exact_stability(gamma, alpha, b.psi)?;
        let (ok, margin) = exact_contact_ok(alpha, b.psi);
        println!(
            "{:?}: psi = {:+.6}  eigenvalues = {:.4}, {:.4}  verdict = {}  contact margin = {:.4} ({})",
            b.branch,
            b.psi,
            spectrum.eigenvalues[0],
            spectrum.eigenvalues[1],
            spectrum.verdict,
            margin,
            if ok { "kept" } else { "lost" }
        );
    }
    Ok(())
}
