//! Twisted involutions of each diagram automorphism, with their ρ-grading
//! and the twisted action `s ⋉ x`.

use coxcanon::coxeter::CoxeterSystem;
use coxcanon::group::CoxeterGroup;
use coxcanon::twisted::InvolutionBlock;

fn main() -> coxcanon::Result<()> {
    let name = std::env::args().nth(1).unwrap_or_else(|| "A3".to_string());
    let sys = CoxeterSystem::parse(&name)?;
    let group = CoxeterGroup::finite(&sys, 64)?;
    for theta in sys.involutive_automorphisms() {
        let block = InvolutionBlock::new(&group, &theta)?;
        println!("theta {theta}: {} twisted involutions", block.len());
        for i in 0..block.len() {
            let x = block.group_index(i);
            let steps: Vec<String> = (0..sys.rank())
                .map(|s| {
                    let kind = if block.is_commuting(s, i) { "s.x" } else { "s.x.θ(s)" };
                    format!("{s}:{kind}")
                })
                .collect();
            println!("  {:<12} rho={} {}", format!("{:?}", group.word(x)), block.rho(i), steps.join(" "));
        }
    }
    Ok(())
}
