//! Kazhdan–Lusztig table of a finite Coxeter group, printed as `P_{x,w}(q)`.
//!
//! ```text
//! cargo run --example kl_polynomials -- B3
//! ```

use coxcanon::coxeter::CoxeterSystem;
use coxcanon::group::CoxeterGroup;
use coxcanon::hecke::{word_label, HeckeAlgebra, ParamMode};

fn main() -> coxcanon::Result<()> {
    let name = std::env::args().nth(1).unwrap_or_else(|| "A3".to_string());
    let group = CoxeterGroup::finite(&CoxeterSystem::parse(&name)?, 64)?;
    let table = HeckeAlgebra::new(&group, ParamMode::V)?.kl_table()?;
    println!("{name}: {} elements", group.len());
    for w in 0..group.len() {
        for (x, h) in table.column(w).iter() {
            // h_{x,w} = v^{ℓ(x)-ℓ(w)} P_{x,w}(v²)
            let shift = group.length(w) as i32 - group.length(x) as i32;
            let p = h.shift(shift).unsquare_v().expect("even");
            if p.terms().len() > 1 {
                println!("P({}, {}) = {}", word_label(group.word(x)), word_label(group.word(w)), p.to_string().replace('v', "q"));
            }
        }
    }
    Ok(())
}
