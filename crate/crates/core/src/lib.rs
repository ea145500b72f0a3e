//! Exact Kazhdan–Lusztig style canonical bases over `Z[v, v⁻¹]`.
//!
//! Finite Coxeter groups are built as tables ([`group`]). Their Hecke
//! algebras ([`hecke`]) carry the usual KL basis. The modules spanned by
//! twisted involutions ([`twisted`], [`ivmodules`]) carry the `π`, `π′` and `ι`
//! bases. [`classify`] searches generic module structures, and [`pkernel`]
//! translates bar involutions to incidence-algebra kernels.
//!
//! ```
//! use coxcanon::coxeter::CoxeterSystem;
//! use coxcanon::group::CoxeterGroup;
//! use coxcanon::hecke::{HeckeAlgebra, ParamMode};
//!
//! let g = CoxeterGroup::finite(&CoxeterSystem::parse("A3")?, 64)?;
//! let kl = HeckeAlgebra::new(&g, ParamMode::V)?.kl_table()?;
//! let x = g.index_of_word(&[1])?;
//! let w = g.index_of_word(&[1, 0, 2, 1])?;
//! assert_eq!(kl.get(x, w).to_string(), "v^-3 + v^-1");
//! # Ok::<(), coxcanon::Error>(())
//! ```

pub mod classify;
pub mod cli;
pub mod coxeter;
pub mod error;
pub mod export;
pub mod group;
pub mod hecke;
pub mod ivmodules;
pub mod laurent;
pub mod pkernel;
pub mod poset;
pub mod sparse;
pub mod twisted;

pub use error::{Error, Result};
