//! Finite posets whose index order is a linear extension of the partial order.

use bitvec::prelude::*;
use serde::ser::SerializeStruct;
use serde::{Deserialize, Serialize, Serializer};

use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Poset {
    labels: Vec<String>,
    /// `below[j][i]` iff `i ≤ j`.
    below: Vec<BitVec>,
}

impl Poset {
    pub fn new(labels: Vec<String>, below: Vec<BitVec>) -> Result<Self> {
        let n = labels.len();
        if below.len() != n || below.iter().any(|b| b.len() != n) {
            return Err(Error::InvalidSystem("order matrix has the wrong shape".into()));
        }
        for (j, b) in below.iter().enumerate() {
            if !b[j] {
                return Err(Error::InvalidSystem(format!("order is not reflexive at {j}")));
            }
            if let Some(i) = b.iter_ones().find(|&i| i > j) {
                return Err(Error::InvalidSystem(format!(
                    "index order is not a linear extension: {i} ≤ {j}"
                )));
            }
        }
        Ok(Self { labels, below })
    }

    /// Build from a predicate `leq(i, j)`.
    pub fn from_fn(labels: Vec<String>, leq: impl Fn(usize, usize) -> bool) -> Result<Self> {
        let n = labels.len();
        let below = (0..n).map(|j| (0..n).map(|i| leq(i, j)).collect()).collect();
        Self::new(labels, below)
    }

    pub fn chain(n: usize) -> Self {
        Self::from_fn((0..n).map(|i| i.to_string()).collect(), |i, j| i <= j).expect("chain")
    }

    pub fn len(&self) -> usize {
        self.labels.len()
    }

    pub fn is_empty(&self) -> bool {
        self.labels.is_empty()
    }

    pub fn label(&self, i: usize) -> &str {
        &self.labels[i]
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn leq(&self, i: usize, j: usize) -> bool {
        self.below[j][i]
    }

    pub fn lt(&self, i: usize, j: usize) -> bool {
        i != j && self.below[j][i]
    }

    /// Elements `≤ j`, in increasing index order.
    pub fn lower(&self, j: usize) -> impl Iterator<Item = usize> + '_ {
        self.below[j].iter_ones()
    }

    pub fn interval(&self, i: usize, j: usize) -> impl Iterator<Item = usize> + '_ {
        self.below[j].iter_ones().filter(move |&t| self.leq(i, t))
    }

    pub fn restrict(&self, keep: &[usize]) -> Poset {
        let labels = keep.iter().map(|&i| self.labels[i].clone()).collect();
        Poset::from_fn(labels, |a, b| self.leq(keep[a], keep[b])).expect("restriction of a poset")
    }
}

impl Serialize for Poset {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        let n = self.len();
        let leq: Vec<Vec<bool>> = (0..n).map(|i| (0..n).map(|j| self.leq(i, j)).collect()).collect();
        let mut st = serializer.serialize_struct("Poset", 2)?;
        st.serialize_field("elements", &self.labels)?;
        st.serialize_field("leq", &leq)?;
        st.end()
    }
}

impl<'de> Deserialize<'de> for Poset {
    fn deserialize<D: serde::Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        #[derive(Deserialize)]
        struct Raw {
            elements: Vec<String>,
            leq: Vec<Vec<bool>>,
        }
        let raw = Raw::deserialize(deserializer)?;
        let n = raw.elements.len();
        if raw.leq.len() != n || raw.leq.iter().any(|r| r.len() != n) {
            return Err(serde::de::Error::custom("leq matrix has the wrong shape"));
        }
        Poset::from_fn(raw.elements, |i, j| raw.leq[i][j]).map_err(serde::de::Error::custom)
    }
}
