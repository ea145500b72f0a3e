//! The extended group `W⁺ = W ⋊ Aut(W,S)`, twisted involutions, the
//! `s ⋉ w` operation and the rank function `ρ`.
//!
//! The word-level API works directly on a [`CoxeterSystem`]. [`InvolutionBlock`]
//! is the indexed form used by the module computations. It holds one
//! `θ`-component of `I` over a finite [`CoxeterGroup`] table.

use std::collections::{HashMap, VecDeque};

use bitvec::prelude::*;
use serde::{Deserialize, Serialize};

use crate::coxeter::{CoxeterSystem, DiagramAutomorphism, Element};
use crate::error::{Error, Result};
use crate::group::CoxeterGroup;

#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct ExtendedElement {
    pub x: Element,
    pub theta: DiagramAutomorphism,
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct TwistedInvolution {
    pub x: Element,
    pub theta: DiagramAutomorphism,
    pub rho: usize,
}

impl TwistedInvolution {
    pub fn identity(theta: DiagramAutomorphism) -> Self {
        Self {
            x: Element::identity(),
            theta,
            rho: 0,
        }
    }

    pub fn extended(&self) -> ExtendedElement {
        ExtendedElement {
            x: self.x.clone(),
            theta: self.theta.clone(),
        }
    }
}

/// `(x,α)(y,β) = (x·α(y), αβ)`
pub fn mult_plus(sys: &CoxeterSystem, a: &ExtendedElement, b: &ExtendedElement) -> Result<ExtendedElement> {
    let ay = sys.apply(&a.theta, &b.x)?;
    Ok(ExtendedElement {
        x: sys.multiply(&a.x, &ay)?,
        theta: a.theta.compose(&b.theta),
    })
}

/// `(x,θ)⁻¹ = (θ⁻¹(x⁻¹), θ⁻¹)`
pub fn inverse_plus(sys: &CoxeterSystem, a: &ExtendedElement) -> Result<ExtendedElement> {
    let ti = a.theta.inverse();
    Ok(ExtendedElement {
        x: sys.apply(&ti, &sys.inverse(&a.x)?)?,
        theta: ti,
    })
}

pub fn is_twisted_involution(sys: &CoxeterSystem, x: &Element, theta: &DiagramAutomorphism) -> Result<bool> {
    Ok(theta.is_involution() && sys.apply(theta, x)? == sys.inverse(x)?)
}

/// `s ⋉ w`: `s·x·θ(s)` when `s·x ≠ x·θ(s)`, otherwise `s·x`.
pub fn kappa(sys: &CoxeterSystem, s: usize, w: &TwistedInvolution) -> Result<TwistedInvolution> {
    let g = sys.generator(s)?;
    let gt = sys.generator(w.theta.image(s))?;
    let sx = sys.multiply(&g, &w.x)?;
    let xt = sys.multiply(&w.x, &gt)?;
    let x = if sx == xt { sx.clone() } else { sys.multiply(&sx, &gt)? };
    let down = sx.length() < w.x.length();
    Ok(TwistedInvolution {
        x,
        theta: w.theta.clone(),
        rho: if down { w.rho - 1 } else { w.rho + 1 },
    })
}

/// Twisted involutions with the given `θ` and `ρ ≤ max_rank`, by
/// breadth-first search from `(1, θ)`; sorted by `(ℓ, word)`.
pub fn enumerate_i(sys: &CoxeterSystem, theta: &DiagramAutomorphism, max_rank: usize) -> Result<Vec<TwistedInvolution>> {
    if !theta.is_involution() {
        return Err(Error::InvalidAutomorphism(format!("{theta} is not an involution")));
    }
    let start = TwistedInvolution::identity(theta.clone());
    let mut seen: HashMap<Element, usize> = HashMap::from([(start.x.clone(), 0)]);
    let mut out = vec![start.clone()];
    let mut queue = VecDeque::from([start]);
    while let Some(w) = queue.pop_front() {
        if w.rho == max_rank {
            continue;
        }
        for s in 0..sys.rank() {
            let next = kappa(sys, s, &w)?;
            if !seen.contains_key(&next.x) {
                seen.insert(next.x.clone(), next.rho);
                out.push(next.clone());
                queue.push_back(next);
            }
        }
    }
    out.sort_by(|a, b| (a.x.length(), a.x.word()).cmp(&(b.x.length(), b.x.word())));
    Ok(out)
}

pub fn bruhat_leq_i(sys: &CoxeterSystem, a: &TwistedInvolution, b: &TwistedInvolution) -> Result<bool> {
    Ok(a.theta == b.theta && sys.bruhat_leq(&a.x, &b.x)?)
}

/// One `θ`-component of `I`, indexed by position in `(ℓ, ShortLex)` order.
#[derive(Debug, Clone)]
pub struct InvolutionBlock {
    theta: DiagramAutomorphism,
    x: Vec<usize>,
    pos: HashMap<usize, usize>,
    rho: Vec<usize>,
    kappa: Vec<Vec<usize>>,
    commuting: Vec<Vec<bool>>,
    descent: Vec<Vec<bool>>,
}

impl InvolutionBlock {
    pub fn new(group: &CoxeterGroup, theta: &DiagramAutomorphism) -> Result<Self> {
        if !theta.is_involution() {
            return Err(Error::InvalidAutomorphism(format!("{theta} is not an involution")));
        }
        if !group.is_complete() {
            return Err(Error::Truncated);
        }
        let n = group.rank();
        let mut dist: HashMap<usize, usize> = HashMap::from([(0, 0)]);
        let mut queue = VecDeque::from([0usize]);
        while let Some(x) = queue.pop_front() {
            let d = dist[&x];
            for s in 0..n {
                let (y, _) = Self::kappa_index(group, theta, s, x)?;
                if let std::collections::hash_map::Entry::Vacant(e) = dist.entry(y) {
                    e.insert(d + 1);
                    queue.push_back(y);
                }
            }
        }
        let mut xs: Vec<usize> = dist.keys().copied().collect();
        xs.sort_unstable();
        let pos: HashMap<usize, usize> = xs.iter().enumerate().map(|(i, &x)| (x, i)).collect();
        let mut kappa = Vec::with_capacity(xs.len());
        let mut commuting = Vec::with_capacity(xs.len());
        let mut descent = Vec::with_capacity(xs.len());
        for &x in &xs {
            let mut k = Vec::with_capacity(n);
            let mut c = Vec::with_capacity(n);
            let mut d = Vec::with_capacity(n);
            for s in 0..n {
                let (y, comm) = Self::kappa_index(group, theta, s, x)?;
                k.push(pos[&y]);
                c.push(comm);
                d.push(group.is_left_descent(s, x));
            }
            kappa.push(k);
            commuting.push(c);
            descent.push(d);
        }
        Ok(Self {
            theta: theta.clone(),
            rho: xs.iter().map(|x| dist[x]).collect(),
            x: xs,
            pos,
            kappa,
            commuting,
            descent,
        })
    }

    fn kappa_index(group: &CoxeterGroup, theta: &DiagramAutomorphism, s: usize, x: usize) -> Result<(usize, bool)> {
        let sx = group.mul_left(s, x).ok_or(Error::Truncated)?;
        let xt = group.mul_right(x, theta.image(s)).ok_or(Error::Truncated)?;
        if sx == xt {
            Ok((sx, true))
        } else {
            Ok((group.mul_right(sx, theta.image(s)).ok_or(Error::Truncated)?, false))
        }
    }

    pub fn theta(&self) -> &DiagramAutomorphism {
        &self.theta
    }

    pub fn len(&self) -> usize {
        self.x.len()
    }

    pub fn is_empty(&self) -> bool {
        self.x.is_empty()
    }

    /// Group index of the `W`-component of block element `i`.
    pub fn group_index(&self, i: usize) -> usize {
        self.x[i]
    }

    pub fn position(&self, group_index: usize) -> Option<usize> {
        self.pos.get(&group_index).copied()
    }

    pub fn rho(&self, i: usize) -> usize {
        self.rho[i]
    }

    /// Block index of `s ⋉ w`.
    pub fn kappa(&self, s: usize, i: usize) -> usize {
        self.kappa[i][s]
    }

    /// Whether `sw = ws` in `W⁺`, i.e. `s ⋉ w = sw`.
    pub fn is_commuting(&self, s: usize, i: usize) -> bool {
        self.commuting[i][s]
    }

    /// Whether `ℓ(sx) < ℓ(x)`, equivalently `s ⋉ w < w`.
    pub fn is_descent(&self, s: usize, i: usize) -> bool {
        self.descent[i][s]
    }

    pub fn twisted_involution(&self, group: &CoxeterGroup, i: usize) -> TwistedInvolution {
        TwistedInvolution {
            x: group.element(self.x[i]),
            theta: self.theta.clone(),
            rho: self.rho[i],
        }
    }

    pub fn leq(&self, group: &CoxeterGroup, i: usize, j: usize) -> bool {
        group.bruhat_leq(self.x[i], self.x[j])
    }

    pub fn order_matrix(&self, group: &CoxeterGroup) -> Vec<BitVec> {
        (0..self.len())
            .map(|j| (0..self.len()).map(|i| self.leq(group, i, j)).collect())
            .collect()
    }

    /// `ρ` recomputed through descents only: `ρ(w) = ρ(s ⋉ w) + 1` for any
    /// `s` with `ℓ(sx) < ℓ(x)`.
    pub fn rho_by_descent(&self, i: usize) -> usize {
        let mut cur = i;
        let mut r = 0;
        while let Some(s) = (0..self.descent[cur].len()).find(|&s| self.descent[cur][s]) {
            cur = self.kappa[cur][s];
            r += 1;
        }
        r
    }
}
