//! The inversion formula pairing each θ-block with the block of `θθ₀`,
//! checked for `π`, `π′` and `ι`.

use std::sync::Arc;

use coxcanon::coxeter::CoxeterSystem;
use coxcanon::group::CoxeterGroup;
use coxcanon::ivmodules::checks::inversion_check;
use coxcanon::ivmodules::Which;

fn main() -> coxcanon::Result<()> {
    for name in ["A1", "A2", "B2", "A3", "B3", "I2(5)"] {
        let group = Arc::new(CoxeterGroup::finite(&CoxeterSystem::parse(name)?, 64)?);
        for which in Which::ALL {
            let out = inversion_check(which, &group)?;
            println!("{name:<6} {:<9} {} of {} entries exact", which.label().as_str(), out.checked - out.failed, out.checked);
        }
    }
    Ok(())
}
