//! The three canonical tables on one θ-block of twisted involutions:
//! `π` (module `L`), `π′` (module `L′`) and `ι` (module `I`).

use std::sync::Arc;

use coxcanon::coxeter::CoxeterSystem;
use coxcanon::export::{Format, TableExport};
use coxcanon::group::CoxeterGroup;
use coxcanon::ivmodules::{canonical_table, ModuleBasis, Which};

fn main() -> coxcanon::Result<()> {
    let mut args = std::env::args().skip(1);
    let name = args.next().unwrap_or_else(|| "B2".to_string());
    let theta = args.next().unwrap_or_else(|| "id".to_string());
    let sys = CoxeterSystem::parse(&name)?;
    let theta = sys.parse_automorphism(&theta)?;
    let group = Arc::new(CoxeterGroup::finite(&sys, 64)?);
    let basis = ModuleBasis::involutions(group, &theta)?;
    for which in Which::ALL {
        let table = canonical_table(&basis, which)?;
        print!("{}", TableExport::new(&basis, &table).render(Format::Text)?);
    }
    Ok(())
}
