//! Indexed element tables for finite (or length-truncated) Coxeter groups.
//!
//! Tables are built one length layer at a time. For `u = w·s` with `s` an
//! ascent of `w`, a generator `t ≠ s` is a right descent of `u` exactly when
//! stripping alternating `s, t, s, ...` right descents from `u` succeeds
//! `m(s,t)` times. This is the decomposition `u = u^J · u_J` for the rank-two
//! parabolic `J = {s, t}`. Each new element is keyed by its largest right
//! descent `t*` together with `u·t*`, which is computed from earlier layers.
//! That identifies equal products without ever rewriting words.

use std::collections::HashMap;
use std::sync::OnceLock;

use bitvec::prelude::*;

use crate::coxeter::{CoxeterSystem, DiagramAutomorphism, Element};
use crate::error::{Error, Result};

/// Upper bound on table size unless the caller raises it.
pub const DEFAULT_MAX_ELEMENTS: usize = 200_000;

pub struct CoxeterGroup {
    sys: CoxeterSystem,
    words: Vec<Vec<usize>>,
    lengths: Vec<usize>,
    right: Vec<Vec<Option<usize>>>,
    left: Vec<Vec<Option<usize>>>,
    inverse: Vec<Option<usize>>,
    complete: bool,
    max_length: usize,
    index: HashMap<Vec<usize>, usize>,
    bruhat: OnceLock<Vec<BitVec>>,
}

impl std::fmt::Debug for CoxeterGroup {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("CoxeterGroup")
            .field("system", &self.sys.name())
            .field("size", &self.words.len())
            .field("complete", &self.complete)
            .finish()
    }
}

struct Builder<'a> {
    sys: &'a CoxeterSystem,
    len: Vec<usize>,
    desc: Vec<Vec<bool>>,
    right: Vec<Vec<Option<usize>>>,
    parent: Vec<Option<(usize, usize)>>,
    keys: HashMap<(usize, usize), usize>,
}

impl Builder<'_> {
    /// Right descents of `w·s` and, for the largest one `t*`, the element
    /// `w·s·t*`.
    fn descents_of_product(&self, w: usize, s: usize) -> (Vec<bool>, usize, usize) {
        let n = self.sys.rank();
        let mut d = vec![false; n];
        d[s] = true;
        let mut top = s;
        let mut top_parabolic = None;
        for t in 0..n {
            if t == s {
                continue;
            }
            let m = self.sys.m(s, t) as usize;
            if m == 0 {
                continue;
            }
            // One strip (of s) already gives w.
            let (mut cur, mut count) = (w, 1usize);
            while count < m {
                let letter = if count % 2 == 1 { t } else { s };
                if !self.desc[cur][letter] {
                    break;
                }
                cur = self.right[cur][letter].expect("descent product recorded");
                count += 1;
            }
            if count == m {
                d[t] = true;
                if t > top {
                    top = t;
                    top_parabolic = Some((cur, m));
                }
            }
        }
        let reduced = match top_parabolic {
            None => w,
            Some((base, m)) => {
                // u·t* = u^J · (alternating word of length m-1 ending in s).
                let mut letters: Vec<usize> = (0..m - 1).map(|k| if k % 2 == 0 { s } else { top }).collect();
                letters.reverse();
                letters.iter().fold(base, |x, &l| self.right[x][l].expect("ascent in earlier layer"))
            }
        };
        (d, top, reduced)
    }
}

impl CoxeterGroup {
    /// The whole group; fails if it has elements longer than `max_length` or
    /// more than [`DEFAULT_MAX_ELEMENTS`] elements.
    pub fn finite(sys: &CoxeterSystem, max_length: usize) -> Result<Self> {
        let g = Self::truncated(sys, max_length, DEFAULT_MAX_ELEMENTS)?;
        if !g.complete {
            return Err(Error::InfiniteOrTooLarge { cap: max_length });
        }
        Ok(g)
    }

    /// All elements of length at most `max_length`.
    pub fn truncated(sys: &CoxeterSystem, max_length: usize, max_elements: usize) -> Result<Self> {
        let n = sys.rank();
        let mut b = Builder {
            sys,
            len: vec![0],
            desc: vec![vec![false; n]],
            right: vec![vec![None; n]],
            parent: vec![None],
            keys: HashMap::new(),
        };
        let mut layer = vec![0usize];
        let mut complete = false;
        for k in 0..=max_length {
            if k == max_length {
                complete = layer.iter().all(|&w| b.desc[w].iter().all(|&d| d));
                break;
            }
            let mut next = Vec::new();
            for &w in &layer {
                for s in 0..n {
                    if b.desc[w][s] || b.right[w][s].is_some() {
                        continue;
                    }
                    let (d, top, reduced) = b.descents_of_product(w, s);
                    let u = match b.keys.get(&(reduced, top)) {
                        Some(&u) => u,
                        None => {
                            let u = b.len.len();
                            if u >= max_elements {
                                return Err(Error::InfiniteOrTooLarge { cap: max_length });
                            }
                            b.len.push(k + 1);
                            b.desc.push(d);
                            b.right.push(vec![None; n]);
                            b.parent.push(Some((reduced, top)));
                            b.keys.insert((reduced, top), u);
                            next.push(u);
                            u
                        }
                    };
                    b.right[w][s] = Some(u);
                    b.right[u][s] = Some(w);
                }
            }
            if next.is_empty() {
                complete = true;
                break;
            }
            layer = next;
        }
        Ok(Self::finish(sys, b, complete, max_length))
    }

    fn finish(sys: &CoxeterSystem, b: Builder<'_>, complete: bool, max_length: usize) -> Self {
        let n = sys.rank();
        let size = b.len.len();
        // Creation order is by length, so every parent precedes its child.
        let mut left = vec![vec![None; n]; size];
        for s in 0..n {
            left[0][s] = b.right[0][s];
        }
        for u in 1..size {
            let (p, t) = b.parent[u].unwrap();
            for s in 0..n {
                left[u][s] = left[p][s].and_then(|sp: usize| b.right[sp][t]);
            }
        }
        let mut inverse = vec![None; size];
        inverse[0] = Some(0);
        for u in 1..size {
            let (p, t) = b.parent[u].unwrap();
            inverse[u] = inverse[p].and_then(|ip: usize| left[ip][t]);
        }
        let mut nf: Vec<Vec<usize>> = vec![Vec::new(); size];
        for u in 1..size {
            let a = (0..n)
                .find(|&s| matches!(left[u][s], Some(x) if b.len[x] < b.len[u]))
                .expect("nonidentity element has a left descent");
            let rest = left[u][a].unwrap();
            let mut w = vec![a];
            w.extend_from_slice(&nf[rest]);
            nf[u] = w;
        }
        let mut order: Vec<usize> = (0..size).collect();
        order.sort_by(|&x, &y| (b.len[x], &nf[x]).cmp(&(b.len[y], &nf[y])));
        let mut pos = vec![0; size];
        for (new, &old) in order.iter().enumerate() {
            pos[old] = new;
        }
        let remap = |o: Option<usize>| o.map(|x| pos[x]);
        let words: Vec<Vec<usize>> = order.iter().map(|&o| nf[o].clone()).collect();
        let index = words.iter().enumerate().map(|(i, w)| (w.clone(), i)).collect();
        Self {
            sys: sys.clone(),
            lengths: order.iter().map(|&o| b.len[o]).collect(),
            right: order.iter().map(|&o| b.right[o].iter().map(|&x| remap(x)).collect()).collect(),
            left: order.iter().map(|&o| left[o].iter().map(|&x| remap(x)).collect()).collect(),
            inverse: order.iter().map(|&o| remap(inverse[o])).collect(),
            words,
            complete,
            max_length,
            index,
            bruhat: OnceLock::new(),
        }
    }

    pub fn system(&self) -> &CoxeterSystem {
        &self.sys
    }

    pub fn rank(&self) -> usize {
        self.sys.rank()
    }

    pub fn len(&self) -> usize {
        self.words.len()
    }

    pub fn is_empty(&self) -> bool {
        self.words.is_empty()
    }

    /// True when the table holds the whole group.
    pub fn is_complete(&self) -> bool {
        self.complete
    }

    pub fn max_length(&self) -> usize {
        self.max_length
    }

    pub fn length(&self, i: usize) -> usize {
        self.lengths[i]
    }

    pub fn sign(&self, i: usize) -> i64 {
        if self.lengths[i] % 2 == 0 {
            1
        } else {
            -1
        }
    }

    /// ShortLex normal form of element `i`.
    pub fn word(&self, i: usize) -> &[usize] {
        &self.words[i]
    }

    pub fn element(&self, i: usize) -> Element {
        Element::from_normal_form(self.words[i].clone())
    }

    pub fn index_of(&self, e: &Element) -> Result<usize> {
        self.index.get(e.word()).copied().ok_or(Error::Truncated)
    }

    /// Index of the element represented by an arbitrary word.
    pub fn index_of_word(&self, word: &[usize]) -> Result<usize> {
        let mut cur = 0;
        for &s in word {
            if s >= self.rank() {
                return Err(Error::InvalidGenerator { index: s, rank: self.rank() });
            }
            cur = self.right[cur][s].ok_or(Error::Truncated)?;
        }
        Ok(cur)
    }

    pub fn identity(&self) -> usize {
        0
    }

    /// `w·s`
    pub fn mul_right(&self, w: usize, s: usize) -> Option<usize> {
        self.right[w][s]
    }

    /// `s·w`
    pub fn mul_left(&self, s: usize, w: usize) -> Option<usize> {
        self.left[w][s]
    }

    pub fn mul(&self, a: usize, b: usize) -> Option<usize> {
        self.words[b].iter().try_fold(a, |cur, &s| self.right[cur][s])
    }

    pub fn inverse(&self, w: usize) -> Option<usize> {
        self.inverse[w]
    }

    pub fn is_left_descent(&self, s: usize, w: usize) -> bool {
        matches!(self.left[w][s], Some(x) if self.lengths[x] < self.lengths[w])
    }

    pub fn is_right_descent(&self, w: usize, s: usize) -> bool {
        matches!(self.right[w][s], Some(x) if self.lengths[x] < self.lengths[w])
    }

    pub fn longest(&self) -> Option<usize> {
        if self.complete {
            Some(self.len() - 1)
        } else {
            None
        }
    }

    /// `θ(w)`, relabelling a reduced word letterwise.
    pub fn apply_automorphism(&self, theta: &DiagramAutomorphism, w: usize) -> Option<usize> {
        self.index_of_word(&theta.apply_word(&self.words[w])).ok()
    }

    fn bruhat_rows(&self) -> &Vec<BitVec> {
        self.bruhat.get_or_init(|| self.bruhat_prefix(self.len()))
    }

    /// Bruhat rows of the first `m` elements, restricted to them. Only
    /// meaningful when the first `m` elements form a lower ideal, e.g. all
    /// elements up to some length.
    pub fn bruhat_prefix(&self, m: usize) -> Vec<BitVec> {
        let mut rows: Vec<BitVec> = Vec::with_capacity(m);
        for w in 0..m {
            let mut row = bitvec![0; m];
            if w == 0 {
                row.set(0, true);
                rows.push(row);
                continue;
            }
            let s = self.words[w][0];
            let sw = self.left[w][s].expect("left descent inside table");
            let lw = self.lengths[w];
            for x in 0..m {
                if self.lengths[x] > lw {
                    break;
                }
                let below = if x == w {
                    true
                } else {
                    match self.left[x][s] {
                        Some(sx) if self.lengths[sx] < self.lengths[x] => rows[sw][sx],
                        _ => rows[sw][x],
                    }
                };
                row.set(x, below);
            }
            rows.push(row);
        }
        rows
    }

    pub fn bruhat_leq(&self, x: usize, w: usize) -> bool {
        self.bruhat_rows()[w][x]
    }

    /// Elements `x ≤ w`, in table order.
    pub fn lower_interval(&self, w: usize) -> Vec<usize> {
        self.bruhat_rows()[w].iter_ones().collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn group(name: &str) -> CoxeterGroup {
        CoxeterGroup::finite(&CoxeterSystem::parse(name).unwrap(), 64).unwrap()
    }

    #[test]
    fn orders() {
        for (name, order) in [
            ("A1", 2),
            ("A2", 6),
            ("A3", 24),
            ("B3", 48),
            ("D4", 192),
            ("H3", 120),
            ("F4", 1152),
            ("I2(8)", 16),
            ("A2xA2", 36),
            ("H4", 14400),
        ] {
            let g = group(name);
            assert_eq!(g.len(), order, "{name}");
            assert!(g.is_complete());
        }
    }

    #[test]
    fn agrees_with_tits_rewriting() {
        for name in ["A3", "B3", "H3", "D4", "I2(5)"] {
            let sys = CoxeterSystem::parse(name).unwrap();
            let g = CoxeterGroup::finite(&sys, 64).unwrap();
            let elems = sys.enumerate(64).unwrap();
            assert_eq!(elems.len(), g.len());
            for (i, e) in elems.iter().enumerate() {
                assert_eq!(g.word(i), e.word(), "{name}");
                for s in 0..sys.rank() {
                    let ws = sys.multiply(e, &sys.generator(s).unwrap()).unwrap();
                    assert_eq!(g.mul_right(i, s), Some(g.index_of(&ws).unwrap()));
                    let sw = sys.multiply(&sys.generator(s).unwrap(), e).unwrap();
                    assert_eq!(g.mul_left(s, i), Some(g.index_of(&sw).unwrap()));
                }
                let inv = sys.inverse(e).unwrap();
                assert_eq!(g.inverse(i), Some(g.index_of(&inv).unwrap()));
            }
        }
    }

    #[test]
    fn bruhat_agrees_with_word_recursion() {
        for name in ["A3", "B3", "I2(6)"] {
            let sys = CoxeterSystem::parse(name).unwrap();
            let g = CoxeterGroup::finite(&sys, 64).unwrap();
            for x in 0..g.len() {
                for w in 0..g.len() {
                    assert_eq!(g.bruhat_leq(x, w), sys.bruhat_leq(&g.element(x), &g.element(w)).unwrap());
                }
            }
        }
    }

    #[test]
    fn longest_has_all_descents() {
        for name in ["A3", "H3", "B2"] {
            let g = group(name);
            let w0 = g.longest().unwrap();
            assert!((0..g.rank()).all(|s| g.is_left_descent(s, w0) && g.is_right_descent(w0, s)));
            assert_eq!(g.inverse(w0), Some(w0));
        }
    }

    #[test]
    fn truncation() {
        let sys = CoxeterSystem::parse("I2(0)").unwrap();
        let g = CoxeterGroup::truncated(&sys, 5, 1000).unwrap();
        assert!(!g.is_complete());
        assert_eq!(g.len(), 11);
        let top = g.index_of_word(&[0, 1, 0, 1, 0]).unwrap();
        assert_eq!(g.mul_right(top, 1), None);
        assert!(matches!(g.index_of_word(&[0, 1, 0, 1, 0, 1]), Err(Error::Truncated)));
        assert!(CoxeterGroup::finite(&sys, 5).is_err());
        let a3 = CoxeterGroup::truncated(&CoxeterSystem::parse("A3").unwrap(), 2, 1000).unwrap();
        assert_eq!(a3.len(), 1 + 3 + 5);
    }
}
