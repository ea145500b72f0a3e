//! From the bar involution of `H` to its P-kernel (the R-polynomials) and
//! back, and the KLS function of that kernel.

use coxcanon::coxeter::CoxeterSystem;
use coxcanon::group::CoxeterGroup;
use coxcanon::hecke::{HeckeAlgebra, ParamMode};
use coxcanon::ivmodules::ModuleBasis;
use coxcanon::pkernel::{bar_from_kernel, is_totally_acceptable, kernel_from_bar, kls_function, Grading};
use std::sync::Arc;

fn main() -> coxcanon::Result<()> {
    let name = std::env::args().nth(1).unwrap_or_else(|| "B2".to_string());
    let group = Arc::new(CoxeterGroup::finite(&CoxeterSystem::parse(&name)?, 64)?);
    let basis = ModuleBasis::regular(group.clone())?;
    let r = Grading::length(&basis);
    let bar = HeckeAlgebra::new(&group, ParamMode::V)?.bar_matrix();
    let kernel = kernel_from_bar(&bar, basis.poset(), &r)?;
    assert_eq!(bar_from_kernel(&kernel, &r)?, bar);
    let gamma = kls_function(&kernel, &r)?;
    println!("R-polynomials (in q):");
    for ((x, y), k) in kernel.iter().filter(|&((x, y), _)| x != y) {
        println!("  R({}, {}) = {}", basis.label(x), basis.label(y), k.to_string().replace('v', "q"));
    }
    println!("KLS function totally acceptable: {}", is_totally_acceptable(&kernel, &gamma, &r)?);
    for ((x, y), g) in gamma.iter().filter(|(_, g)| !g.is_one()) {
        println!("gamma({}, {}) = {}", basis.label(x), basis.label(y), g.to_string().replace('v', "q"));
    }
    Ok(())
}
