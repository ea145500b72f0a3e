//! Finitely supported vectors `Σ c_i a_i` over `A` indexed by basis positions.

use std::collections::BTreeMap;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::laurent::LaurentPoly;

#[derive(Clone, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct SparseVec(BTreeMap<usize, LaurentPoly>);

impl SparseVec {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn basis(i: usize) -> Self {
        Self(BTreeMap::from([(i, LaurentPoly::one())]))
    }

    pub fn from_terms<I: IntoIterator<Item = (usize, LaurentPoly)>>(terms: I) -> Self {
        let mut out = Self::new();
        for (i, c) in terms {
            out.add_term(i, &c);
        }
        out
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_empty()
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn get(&self, i: usize) -> LaurentPoly {
        self.0.get(&i).cloned().unwrap_or_default()
    }

    pub fn iter(&self) -> impl DoubleEndedIterator<Item = (usize, &LaurentPoly)> + '_ {
        self.0.iter().map(|(&i, c)| (i, c))
    }

    pub fn support(&self) -> impl DoubleEndedIterator<Item = usize> + '_ {
        self.0.keys().copied()
    }

    pub fn max_index(&self) -> Option<usize> {
        self.0.keys().next_back().copied()
    }

    pub fn add_term(&mut self, i: usize, c: &LaurentPoly) {
        if c.is_zero() {
            return;
        }
        match self.0.get_mut(&i) {
            Some(e) => {
                *e += c;
                if e.is_zero() {
                    self.0.remove(&i);
                }
            }
            None => {
                self.0.insert(i, c.clone());
            }
        }
    }

    /// `self += c·other`
    pub fn add_scaled(&mut self, other: &SparseVec, c: &LaurentPoly) {
        if c.is_zero() {
            return;
        }
        for (i, x) in other.iter() {
            self.add_term(i, &(c * x));
        }
    }

    pub fn scaled(&self, c: &LaurentPoly) -> SparseVec {
        let mut out = SparseVec::new();
        out.add_scaled(self, c);
        out
    }

    pub fn neg(&self) -> SparseVec {
        self.scaled(&LaurentPoly::constant(-1))
    }

    pub fn sub(&self, other: &SparseVec) -> SparseVec {
        let mut out = self.clone();
        out.add_scaled(other, &LaurentPoly::constant(-1));
        out
    }

    pub fn add(&self, other: &SparseVec) -> SparseVec {
        let mut out = self.clone();
        out.add_scaled(other, &LaurentPoly::one());
        out
    }

    pub fn map_coeffs(&self, f: impl Fn(&LaurentPoly) -> LaurentPoly) -> SparseVec {
        SparseVec::from_terms(self.iter().map(|(i, c)| (i, f(c))))
    }

    pub fn remap(&self, f: impl Fn(usize) -> usize) -> SparseVec {
        SparseVec::from_terms(self.iter().map(|(i, c)| (f(i), c.clone())))
    }
}

impl fmt::Debug for SparseVec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_map().entries(self.0.iter().map(|(i, c)| (i, c.to_string()))).finish()
    }
}

impl FromIterator<(usize, LaurentPoly)> for SparseVec {
    fn from_iter<T: IntoIterator<Item = (usize, LaurentPoly)>>(iter: T) -> Self {
        Self::from_terms(iter)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn cancellation_removes_entries() {
        let v = LaurentPoly::v_pow(1);
        let mut a = SparseVec::basis(3);
        a.add_term(1, &v);
        a.add_term(1, &-&v);
        assert_eq!(a, SparseVec::basis(3));
        assert!(a.sub(&SparseVec::basis(3)).is_zero());
        assert_eq!(a.scaled(&v).get(3), v);
    }
}
