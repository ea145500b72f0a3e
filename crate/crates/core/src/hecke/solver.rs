//! Unitriangular bar matrices and the canonical basis they determine.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::laurent::LaurentPoly;
use crate::poset::Poset;
use crate::sparse::SparseVec;

/// Matrix of an antilinear involution `ψ` in a standard basis: column `w`
/// holds the coefficients of `ψ(a_w)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BarMatrix {
    cols: Vec<SparseVec>,
}

impl BarMatrix {
    pub fn new(cols: Vec<SparseVec>) -> Result<Self> {
        for (w, c) in cols.iter().enumerate() {
            if !c.get(w).is_one() {
                return Err(Error::NotPreCanonical(format!("diagonal entry at {w} is {}", c.get(w))));
            }
            if c.max_index() != Some(w) {
                return Err(Error::NotPreCanonical(format!("column {w} has entries above the diagonal")));
            }
        }
        Ok(Self { cols })
    }

    pub fn len(&self) -> usize {
        self.cols.len()
    }

    pub fn is_empty(&self) -> bool {
        self.cols.is_empty()
    }

    pub fn column(&self, w: usize) -> &SparseVec {
        &self.cols[w]
    }

    pub fn columns(&self) -> &[SparseVec] {
        &self.cols
    }

    pub fn entry(&self, x: usize, w: usize) -> LaurentPoly {
        self.cols[w].get(x)
    }

    /// `ψ(Σ c_y a_y) = Σ bar(c_y) ψ(a_y)`
    pub fn apply(&self, m: &SparseVec) -> SparseVec {
        let mut out = SparseVec::new();
        for (y, c) in m.iter() {
            out.add_scaled(&self.cols[y], &c.bar());
        }
        out
    }

    /// Entry `(x,w)` nonzero only if `x ≤ w` in `order`.
    pub fn check_unitriangular(&self, order: &Poset) -> Result<()> {
        for (w, c) in self.cols.iter().enumerate() {
            if let Some(x) = c.support().find(|&x| !order.leq(x, w)) {
                return Err(Error::NotPreCanonical(format!(
                    "entry ({}, {}) is nonzero but not below the diagonal",
                    order.label(x),
                    order.label(w)
                )));
            }
        }
        Ok(())
    }

    /// `ψ² = 1`, first failing column as the error.
    pub fn check_involution(&self) -> std::result::Result<(), usize> {
        for w in 0..self.len() {
            if self.apply(&self.cols[w]) != SparseVec::basis(w) {
                return Err(w);
            }
        }
        Ok(())
    }

    /// `(ε₁, ε₂)`-transport: entry `(x,w) ↦ d_x d_w ε(entry)`.
    pub fn transport(&self, signs: &[i64], negate_v: bool) -> BarMatrix {
        let cols = self
            .cols
            .iter()
            .enumerate()
            .map(|(w, c)| {
                SparseVec::from_terms(c.iter().map(|(x, p)| {
                    let p = if negate_v { p.substitute(crate::laurent::Substitution::NegateV) } else { p.clone() };
                    (x, p.scale(signs[x] * signs[w]))
                }))
            })
            .collect();
        BarMatrix { cols }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum TableLabel {
    H,
    Pi,
    PiPrime,
    Iota,
    Generic,
}

impl TableLabel {
    pub fn as_str(&self) -> &'static str {
        match self {
            TableLabel::H => "h",
            TableLabel::Pi => "pi",
            TableLabel::PiPrime => "pi_prime",
            TableLabel::Iota => "iota",
            TableLabel::Generic => "generic",
        }
    }
}

impl std::str::FromStr for TableLabel {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "h" | "kl" => Ok(TableLabel::H),
            "pi" => Ok(TableLabel::Pi),
            "pi_prime" | "pi'" => Ok(TableLabel::PiPrime),
            "iota" => Ok(TableLabel::Iota),
            "generic" => Ok(TableLabel::Generic),
            _ => Err(Error::Parse(format!("unknown basis label {s:?}"))),
        }
    }
}

/// Column `w` holds the coefficients of the canonical element `b_w` in the
/// standard basis.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CanonicalTable {
    pub label: TableLabel,
    cols: Vec<SparseVec>,
}

impl CanonicalTable {
    pub fn from_columns(label: TableLabel, cols: Vec<SparseVec>) -> Self {
        Self { label, cols }
    }

    pub fn len(&self) -> usize {
        self.cols.len()
    }

    pub fn is_empty(&self) -> bool {
        self.cols.is_empty()
    }

    pub fn get(&self, x: usize, w: usize) -> LaurentPoly {
        self.cols[w].get(x)
    }

    pub fn column(&self, w: usize) -> &SparseVec {
        &self.cols[w]
    }

    pub fn columns(&self) -> &[SparseVec] {
        &self.cols
    }

    /// Coefficient of `v⁻¹` in entry `(x,w)`.
    pub fn mu(&self, x: usize, w: usize) -> i64 {
        if x == w {
            0
        } else {
            self.get(x, w).coeff(-1)
        }
    }

    /// Diagonal 1 and off-diagonal entries in `v⁻¹Z[v⁻¹]`.
    pub fn check_normalized(&self) -> Result<()> {
        for (w, c) in self.cols.iter().enumerate() {
            for (x, p) in c.iter() {
                let ok = if x == w { p.is_one() } else { x < w && p.in_vinv_z_vinv() };
                if !ok {
                    return Err(Error::Internal(format!("entry ({x},{w}) = {p} violates normalization")));
                }
            }
            if !c.get(w).is_one() {
                return Err(Error::Internal(format!("diagonal entry at {w} is not 1")));
            }
        }
        Ok(())
    }

    /// `ψ(b_w) = b_w` expanded through the bar matrix.
    pub fn check_bar_invariant(&self, bar: &BarMatrix) -> Result<()> {
        for (w, c) in self.cols.iter().enumerate() {
            if &bar.apply(c) != c {
                return Err(Error::Internal(format!("canonical element {w} is not bar-invariant")));
            }
        }
        Ok(())
    }

    pub fn transport(&self, signs: &[i64], negate_v: bool) -> CanonicalTable {
        let cols = self
            .cols
            .iter()
            .enumerate()
            .map(|(w, c)| {
                SparseVec::from_terms(c.iter().map(|(x, p)| {
                    let p = if negate_v { p.substitute(crate::laurent::Substitution::NegateV) } else { p.clone() };
                    (x, p.scale(signs[x] * signs[w]))
                }))
            })
            .collect();
        CanonicalTable { label: self.label, cols }
    }
}

/// Which maximal element of `support(ψ(b) − b)` is corrected first.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum TieBreak {
    /// The largest index; maximal because indices extend the order.
    #[default]
    LargestIndex,
    /// The smallest index among the maximal elements.
    SmallestMaximal,
}

pub fn solve_canonical(order: &Poset, bar: &BarMatrix, label: TableLabel) -> Result<CanonicalTable> {
    solve_canonical_with(order, bar, label, TieBreak::LargestIndex)
}

/// Starting from `b = a_w`, repeatedly cancel the top term of
/// `d = ψ(b) − b` with `b += μ·b_x`, where `μ − bar(μ) = d_x`. The update
/// of `d` is incremental: `d += (bar(μ) − μ)·b_x`.
pub fn solve_canonical_with(order: &Poset, bar: &BarMatrix, label: TableLabel, tie: TieBreak) -> Result<CanonicalTable> {
    if order.len() != bar.len() {
        return Err(Error::Internal("order and bar matrix sizes differ".into()));
    }
    let mut cols: Vec<SparseVec> = Vec::with_capacity(bar.len());
    for w in 0..bar.len() {
        let mut b = SparseVec::basis(w);
        let mut d = bar.column(w).sub(&b);
        let mut guard = 0usize;
        while !d.is_zero() {
            guard += 1;
            if guard > order.len() + 1 {
                return Err(Error::NotPreCanonical(format!("correction loop at {} does not terminate", order.label(w))));
            }
            let x = match tie {
                TieBreak::LargestIndex => d.max_index().expect("nonzero"),
                TieBreak::SmallestMaximal => {
                    let supp: Vec<usize> = d.support().collect();
                    *supp
                        .iter()
                        .find(|&&x| !supp.iter().any(|&y| order.lt(x, y)))
                        .expect("finite support has a maximal element")
                }
            };
            if x >= w || !order.lt(x, w) {
                return Err(Error::NotPreCanonical(format!(
                    "ψ(b) − b has a term at {} outside the lower interval of {}",
                    order.label(x),
                    order.label(w)
                )));
            }
            let c = d.get(x);
            let mu = c.split_antisymmetric().map_err(|_| {
                Error::NotPreCanonical(format!("coefficient {c} at ({}, {}) is not antisymmetric", order.label(x), order.label(w)))
            })?;
            b.add_scaled(&cols[x], &mu);
            d.add_scaled(&cols[x], &(mu.bar() - &mu));
        }
        cols.push(b);
    }
    Ok(CanonicalTable { label, cols })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(s: &str) -> LaurentPoly {
        s.parse().unwrap()
    }

    /// `A1` Hecke algebra: `ψ(H_s) = H_s + (v⁻¹ − v)H_1`.
    fn a1() -> (Poset, BarMatrix) {
        let order = Poset::chain(2);
        let bar = BarMatrix::new(vec![SparseVec::basis(0), SparseVec::from_terms([(0, p("v^-1 - v")), (1, p("1"))])]).unwrap();
        (order, bar)
    }

    #[test]
    fn a1_canonical_basis() {
        let (order, bar) = a1();
        assert!(bar.check_involution().is_ok());
        bar.check_unitriangular(&order).unwrap();
        let t = solve_canonical(&order, &bar, TableLabel::H).unwrap();
        assert_eq!(t.get(0, 1), p("v^-1"));
        assert_eq!(t.get(0, 0), p("1"));
        assert_eq!(t.mu(0, 1), 1);
        t.check_normalized().unwrap();
        t.check_bar_invariant(&bar).unwrap();
    }

    #[test]
    fn rank_zero_is_unchanged() {
        let order = Poset::chain(1);
        let bar = BarMatrix::new(vec![SparseVec::basis(0)]).unwrap();
        let t = solve_canonical(&order, &bar, TableLabel::Generic).unwrap();
        assert_eq!(t.column(0), &SparseVec::basis(0));
    }

    #[test]
    fn rejects_non_antisymmetric_correction() {
        let order = Poset::chain(2);
        let bar = BarMatrix::new(vec![SparseVec::basis(0), SparseVec::from_terms([(0, p("v")), (1, p("1"))])]).unwrap();
        assert!(matches!(solve_canonical(&order, &bar, TableLabel::Generic), Err(Error::NotPreCanonical(_))));
        assert!(BarMatrix::new(vec![SparseVec::from_terms([(0, p("v"))])]).is_err());
    }

    #[test]
    fn transport_of_a1() {
        let (order, bar) = a1();
        let t = solve_canonical(&order, &bar, TableLabel::Iota).unwrap();
        let moved = t.transport(&[1, -1], false);
        assert_eq!(moved.get(0, 1), p("-v^-1"));
        assert_eq!(t.transport(&[1, 1], false), t);
        let moved_bar = bar.transport(&[1, -1], false);
        assert_eq!(solve_canonical(&order, &moved_bar, TableLabel::Iota).unwrap(), moved);
    }
}
