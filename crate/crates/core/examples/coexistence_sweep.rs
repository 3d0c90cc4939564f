//! Regime map over damping: clockwise and counterclockwise twirling coexist
//! while the damping stays below the ellipticity.

use hulahoop::model::{ParamName, Params};
use hulahoop::sim::{sweep, SweepAxis, SweepProtocol};

fn main() -> hulahoop::Result<()> {
    let base = Params::new(0.02, 0.1875, 0.125);
    let gamma = SweepAxis::linspace(ParamName::Gamma, 0.016, 0.048, 9)?;
    let alpha = SweepAxis {
        name: ParamName::Alpha,
        values: vec![base.alpha],
    };
    let map = sweep(&base, &gamma, &alpha, &SweepProtocol::default())?;
    println!("eps = {}", base.eps());
    for c in &map.cells {
        println!("gamma = {:.3}: {}", c.axis1, c.verdict);
    }
    Ok(())
}
