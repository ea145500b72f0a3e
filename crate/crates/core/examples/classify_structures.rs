//! Search the generic structures on `W` and `I` for pre-canonical ones and
//! group the survivors into isomorphism classes.

use coxcanon::classify::{classification_run, default_systems, enumerate_candidates, representation_survivors, CandidateCase, Suite};
use coxcanon::ivmodules::AlgebraMode;

fn main() -> coxcanon::Result<()> {
    let systems = default_systems();
    let suite = Suite::new(AlgebraMode::HOnI, &systems)?;
    for case in [CandidateCase::BothZero, CandidateCase::LeftNonzero, CandidateCase::RightNonzero] {
        let all = enumerate_candidates(case);
        let ok = representation_survivors(&suite, &all);
        println!("{case:?}: {} candidates, {} representations", all.len(), ok.len());
    }
    for mode in [AlgebraMode::HOnW, AlgebraMode::HOnI, AlgebraMode::H2OnI] {
        let r = classification_run(mode, &systems)?;
        println!("{}: {} candidates, {} pre-canonical, classes {:?}", mode.as_str(), r.candidates, r.survivors.len(), r.class_names());
    }
    Ok(())
}
