//! Coxeter systems given by a Coxeter matrix, with word arithmetic by Tits
//! rewriting.
//!
//! Elements are stored as ShortLex-least reduced words. `reduce` closes a word
//! under braid moves and cancels adjacent equal letters, which solves the word
//! problem for every Coxeter matrix without any geometric model. Results are
//! memoized; the caches sit behind mutexes so a system can be shared freely.

use std::collections::{HashMap, HashSet, VecDeque};
use std::fmt;
use std::sync::Mutex;

use itertools::Itertools;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Default bound on the length of words accepted by [`CoxeterSystem::reduce`].
pub const DEFAULT_WORD_CAP: usize = 64;
/// Default number of memoized reductions kept before the cache is flushed.
pub const DEFAULT_CACHE_LIMIT: usize = 1 << 20;

/// `m(s,t)` bond labels; `0` encodes `m = infinity`.
pub type CoxeterMatrix = Vec<Vec<u32>>;

#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Element {
    word: Vec<usize>,
}

impl Element {
    pub fn identity() -> Self {
        Self { word: Vec::new() }
    }

    /// Wraps a word already known to be the ShortLex normal form.
    pub(crate) fn from_normal_form(word: Vec<usize>) -> Self {
        Self { word }
    }

    pub fn word(&self) -> &[usize] {
        &self.word
    }

    pub fn length(&self) -> usize {
        self.word.len()
    }

    pub fn is_identity(&self) -> bool {
        self.word.is_empty()
    }
}

impl fmt::Display for Element {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.word.is_empty() {
            return write!(f, "e");
        }
        write!(f, "{}", self.word.iter().join("."))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Side {
    Left,
    Right,
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct DiagramAutomorphism {
    perm: Vec<usize>,
}

impl DiagramAutomorphism {
    pub fn identity(rank: usize) -> Self {
        Self { perm: (0..rank).collect() }
    }

    /// Validates that `perm` is a permutation preserving the Coxeter matrix.
    pub fn new(sys: &CoxeterSystem, perm: Vec<usize>) -> Result<Self> {
        let n = sys.rank();
        if perm.len() != n {
            return Err(Error::InvalidAutomorphism(format!(
                "expected {n} entries, got {}",
                perm.len()
            )));
        }
        let mut seen = vec![false; n];
        for &p in &perm {
            if p >= n || seen[p] {
                return Err(Error::InvalidAutomorphism(format!("{perm:?} is not a permutation")));
            }
            seen[p] = true;
        }
        for s in 0..n {
            for t in 0..n {
                if sys.m(perm[s], perm[t]) != sys.m(s, t) {
                    return Err(Error::InvalidAutomorphism(format!(
                        "{perm:?} does not preserve m({s},{t})"
                    )));
                }
            }
        }
        Ok(Self { perm })
    }

    pub fn perm(&self) -> &[usize] {
        &self.perm
    }

    pub fn image(&self, s: usize) -> usize {
        self.perm[s]
    }

    pub fn is_identity(&self) -> bool {
        self.perm.iter().enumerate().all(|(i, &p)| i == p)
    }

    /// `self ∘ other`
    pub fn compose(&self, other: &Self) -> Self {
        Self {
            perm: other.perm.iter().map(|&s| self.perm[s]).collect(),
        }
    }

    pub fn inverse(&self) -> Self {
        let mut inv = vec![0; self.perm.len()];
        for (i, &p) in self.perm.iter().enumerate() {
            inv[p] = i;
        }
        Self { perm: inv }
    }

    pub fn is_involution(&self) -> bool {
        self.compose(self).is_identity()
    }

    pub fn apply_word(&self, word: &[usize]) -> Vec<usize> {
        word.iter().map(|&s| self.perm[s]).collect()
    }
}

impl fmt::Display for DiagramAutomorphism {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_identity() {
            write!(f, "id")
        } else {
            write!(f, "[{}]", self.perm.iter().join(","))
        }
    }
}

#[derive(Serialize, Deserialize)]
struct ExplicitSpec {
    rank: usize,
    matrix: CoxeterMatrix,
    #[serde(default)]
    name: Option<String>,
}

pub struct CoxeterSystem {
    matrix: CoxeterMatrix,
    name: Option<String>,
    word_cap: usize,
    cache_limit: usize,
    reduce_cache: Mutex<HashMap<Vec<usize>, Vec<usize>>>,
    bruhat_cache: Mutex<HashMap<(Vec<usize>, Vec<usize>), bool>>,
}

impl Clone for CoxeterSystem {
    fn clone(&self) -> Self {
        Self {
            matrix: self.matrix.clone(),
            name: self.name.clone(),
            word_cap: self.word_cap,
            cache_limit: self.cache_limit,
            reduce_cache: Mutex::new(HashMap::new()),
            bruhat_cache: Mutex::new(HashMap::new()),
        }
    }
}

impl fmt::Debug for CoxeterSystem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("CoxeterSystem")
            .field("name", &self.name)
            .field("matrix", &self.matrix)
            .finish()
    }
}

impl PartialEq for CoxeterSystem {
    fn eq(&self, other: &Self) -> bool {
        self.matrix == other.matrix
    }
}

impl Eq for CoxeterSystem {}

impl CoxeterSystem {
    pub fn new(matrix: CoxeterMatrix, name: Option<String>) -> Result<Self> {
        let n = matrix.len();
        for (i, row) in matrix.iter().enumerate() {
            if row.len() != n {
                return Err(Error::InvalidSystem(format!("row {i} has length {}", row.len())));
            }
            for (j, &m) in row.iter().enumerate() {
                if matrix[j][i] != m {
                    return Err(Error::InvalidSystem(format!("matrix not symmetric at ({i},{j})")));
                }
                if i == j && m != 1 {
                    return Err(Error::InvalidSystem(format!("diagonal entry ({i},{i}) must be 1")));
                }
                if i != j && m == 1 {
                    return Err(Error::InvalidSystem(format!("entry ({i},{j}) must be >= 2 or 0 for infinity")));
                }
            }
        }
        Ok(Self {
            matrix,
            name,
            word_cap: DEFAULT_WORD_CAP,
            cache_limit: DEFAULT_CACHE_LIMIT,
            reduce_cache: Mutex::new(HashMap::new()),
            bruhat_cache: Mutex::new(HashMap::new()),
        })
    }

    pub fn with_word_cap(mut self, cap: usize) -> Self {
        self.word_cap = cap;
        self
    }

    pub fn with_cache_limit(mut self, limit: usize) -> Self {
        self.cache_limit = limit.max(1);
        self
    }

    pub fn rank(&self) -> usize {
        self.matrix.len()
    }

    pub fn matrix(&self) -> &CoxeterMatrix {
        &self.matrix
    }

    /// Bond label `m(s,t)`, with `0` standing for infinity.
    pub fn m(&self, s: usize, t: usize) -> u32 {
        self.matrix[s][t]
    }

    pub fn name(&self) -> String {
        self.name.clone().unwrap_or_else(|| {
            serde_json::to_string(&ExplicitSpec {
                rank: self.rank(),
                matrix: self.matrix.clone(),
                name: None,
            })
            .expect("matrix serializes")
        })
    }

    pub fn word_cap(&self) -> usize {
        self.word_cap
    }

    /// Parses a system spec: a named type (`A3`, `B3`, `D4`, `E6`, `F4`, `G2`,
    /// `H3`, `I2(7)`), a product of named types (`A2xA2`), or explicit JSON
    /// `{"rank": n, "matrix": [[...]]}` with infinity encoded as `0`.
    pub fn parse(spec: &str) -> Result<Self> {
        let spec = spec.trim();
        if spec.starts_with('{') {
            let e: ExplicitSpec =
                serde_json::from_str(spec).map_err(|e| Error::Parse(format!("system JSON: {e}")))?;
            if e.matrix.len() != e.rank {
                return Err(Error::InvalidSystem(format!(
                    "rank {} does not match matrix size {}",
                    e.rank,
                    e.matrix.len()
                )));
            }
            return Self::new(e.matrix, e.name);
        }
        let factors: Vec<&str> = spec.split(['x', '*']).map(str::trim).collect();
        let mut blocks = Vec::new();
        for f in &factors {
            blocks.push(named_matrix(f)?);
        }
        let matrix = block_diagonal(&blocks);
        let name = factors.iter().map(|f| f.to_ascii_uppercase()).join("x");
        Self::new(matrix, Some(name))
    }

    /// The direct product `self × other` with the generators of `other`
    /// numbered after those of `self`.
    pub fn product(&self, other: &Self) -> Self {
        let matrix = block_diagonal(&[self.matrix.clone(), other.matrix.clone()]);
        Self::new(matrix, Some(format!("{}x{}", self.name(), other.name()))).expect("product of valid systems")
    }

    fn check_word(&self, word: &[usize]) -> Result<()> {
        if word.len() > self.word_cap {
            return Err(Error::WordTooLong {
                len: word.len(),
                cap: self.word_cap,
            });
        }
        if let Some(&s) = word.iter().find(|&&s| s >= self.rank()) {
            return Err(Error::InvalidGenerator {
                index: s,
                rank: self.rank(),
            });
        }
        Ok(())
    }

    pub fn generator(&self, s: usize) -> Result<Element> {
        self.check_word(&[s])?;
        Ok(Element { word: vec![s] })
    }

    /// ShortLex-least reduced word for the element represented by `word`.
    pub fn reduce(&self, word: &[usize]) -> Result<Element> {
        self.check_word(word)?;
        if let Some(hit) = self.reduce_cache.lock().unwrap().get(word) {
            return Ok(Element { word: hit.clone() });
        }
        // Letters are appended one at a time to an already reduced prefix, so
        // each braid class explored is that of a reduced word plus one letter.
        let mut current: Vec<usize> = Vec::new();
        for (i, &s) in word.iter().enumerate() {
            let prefix = &word[..=i];
            if let Some(hit) = self.reduce_cache.lock().unwrap().get(prefix) {
                current = hit.clone();
                continue;
            }
            current.push(s);
            current = self.tits_normal_form(current);
            self.remember(prefix.to_vec(), current.clone());
        }
        Ok(Element { word: current })
    }

    fn remember(&self, key: Vec<usize>, value: Vec<usize>) {
        let mut cache = self.reduce_cache.lock().unwrap();
        if cache.len() >= self.cache_limit {
            cache.clear();
        }
        cache.insert(key, value);
    }

    /// Braid-closure search: cancel an adjacent equal pair if any word in the
    /// class has one, otherwise return the least word of the class.
    fn tits_normal_form(&self, mut word: Vec<usize>) -> Vec<usize> {
        'outer: loop {
            let mut seen: HashSet<Vec<usize>> = HashSet::new();
            let mut queue = VecDeque::new();
            seen.insert(word.clone());
            queue.push_back(word.clone());
            while let Some(w) = queue.pop_front() {
                if let Some(i) = (0..w.len().saturating_sub(1)).find(|&i| w[i] == w[i + 1]) {
                    let mut shorter = w[..i].to_vec();
                    shorter.extend_from_slice(&w[i + 2..]);
                    word = shorter;
                    continue 'outer;
                }
                for next in self.braid_neighbours(&w) {
                    if seen.insert(next.clone()) {
                        queue.push_back(next);
                    }
                }
            }
            return seen.into_iter().min().unwrap_or_default();
        }
    }

    fn braid_neighbours(&self, w: &[usize]) -> Vec<Vec<usize>> {
        let mut out = Vec::new();
        for i in 0..w.len() {
            let s = w[i];
            if i + 1 >= w.len() {
                break;
            }
            let t = w[i + 1];
            if s == t {
                continue;
            }
            let m = self.m(s, t) as usize;
            if m == 0 || i + m > w.len() {
                continue;
            }
            let alternating = (0..m).all(|k| w[i + k] == if k % 2 == 0 { s } else { t });
            if alternating {
                let mut next = w.to_vec();
                for k in 0..m {
                    next[i + k] = if k % 2 == 0 { t } else { s };
                }
                out.push(next);
            }
        }
        out
    }

    pub fn multiply(&self, a: &Element, b: &Element) -> Result<Element> {
        let mut w = a.word.clone();
        w.extend_from_slice(&b.word);
        self.reduce(&w)
    }

    pub fn inverse(&self, a: &Element) -> Result<Element> {
        let w: Vec<usize> = a.word.iter().rev().copied().collect();
        self.reduce(&w)
    }

    pub fn length(&self, a: &Element) -> usize {
        a.length()
    }

    pub fn descent(&self, s: usize, a: &Element, side: Side) -> Result<bool> {
        let g = self.generator(s)?;
        let p = match side {
            Side::Left => self.multiply(&g, a)?,
            Side::Right => self.multiply(a, &g)?,
        };
        Ok(p.length() < a.length())
    }

    /// Bruhat order by the lifting recursion on a left descent of `w`.
    pub fn bruhat_leq(&self, x: &Element, w: &Element) -> Result<bool> {
        if x.is_identity() {
            return Ok(true);
        }
        if x.length() > w.length() {
            return Ok(false);
        }
        if x.length() == w.length() {
            return Ok(x == w);
        }
        let key = (x.word.clone(), w.word.clone());
        if let Some(&hit) = self.bruhat_cache.lock().unwrap().get(&key) {
            return Ok(hit);
        }
        let s = w.word[0];
        let sw = Element {
            word: w.word[1..].to_vec(),
        };
        let sx = self.multiply(&self.generator(s)?, x)?;
        let result = if sx.length() < x.length() {
            self.bruhat_leq(&sx, &sw)?
        } else {
            self.bruhat_leq(x, &sw)?
        };
        let mut cache = self.bruhat_cache.lock().unwrap();
        if cache.len() >= self.cache_limit {
            cache.clear();
        }
        cache.insert(key, result);
        Ok(result)
    }

    /// Breadth-first enumeration by right multiplication, sorted by
    /// `(length, word)`. Fails with `InfiniteOrTooLarge` if elements of length
    /// `max_length + 1` exist, i.e. the enumeration did not saturate.
    pub fn enumerate(&self, max_length: usize) -> Result<Vec<Element>> {
        let (elements, saturated) = self.enumerate_truncated(max_length)?;
        if !saturated {
            return Err(Error::InfiniteOrTooLarge { cap: max_length });
        }
        Ok(elements)
    }

    /// All elements of length at most `max_length`, plus whether the group was
    /// exhausted within that bound.
    pub fn enumerate_truncated(&self, max_length: usize) -> Result<(Vec<Element>, bool)> {
        let mut all = vec![Element::identity()];
        let mut layer = vec![Element::identity()];
        let mut seen: HashSet<Element> = layer.iter().cloned().collect();
        for len in 0..=max_length {
            let mut next = Vec::new();
            for w in &layer {
                for s in 0..self.rank() {
                    if w.length() + 1 > self.word_cap {
                        return Err(Error::WordTooLong {
                            len: w.length() + 1,
                            cap: self.word_cap,
                        });
                    }
                    let ws = self.multiply(w, &Element { word: vec![s] })?;
                    if ws.length() == len + 1 && seen.insert(ws.clone()) {
                        next.push(ws);
                    }
                }
            }
            if next.is_empty() {
                all.sort_by(|a, b| (a.length(), &a.word).cmp(&(b.length(), &b.word)));
                return Ok((all, true));
            }
            if len == max_length {
                break;
            }
            next.sort();
            all.extend(next.iter().cloned());
            layer = next;
        }
        all.sort_by(|a, b| (a.length(), &a.word).cmp(&(b.length(), &b.word)));
        Ok((all, false))
    }

    pub fn longest_element(&self, max_length: usize) -> Result<Element> {
        let elements = self.enumerate(max_length)?;
        Ok(elements.last().cloned().unwrap_or_else(Element::identity))
    }

    /// Every permutation of the generators preserving the Coxeter matrix,
    /// identity first.
    pub fn automorphisms(&self) -> Vec<DiagramAutomorphism> {
        let n = self.rank();
        (0..n)
            .permutations(n)
            .filter(|p| (0..n).all(|s| (0..n).all(|t| self.m(p[s], p[t]) == self.m(s, t))))
            .map(|perm| DiagramAutomorphism { perm })
            .sorted()
            .collect()
    }

    pub fn involutive_automorphisms(&self) -> Vec<DiagramAutomorphism> {
        self.automorphisms().into_iter().filter(|a| a.is_involution()).collect()
    }

    pub fn apply(&self, theta: &DiagramAutomorphism, a: &Element) -> Result<Element> {
        self.reduce(&theta.apply_word(&a.word))
    }

    /// Parses an automorphism as `id` or a comma-separated permutation.
    pub fn parse_automorphism(&self, spec: &str) -> Result<DiagramAutomorphism> {
        let spec = spec.trim();
        if spec.eq_ignore_ascii_case("id") || spec.is_empty() {
            return Ok(DiagramAutomorphism::identity(self.rank()));
        }
        let perm = spec
            .trim_matches(|c| c == '[' || c == ']')
            .split(',')
            .map(|p| p.trim().parse::<usize>().map_err(|e| Error::Parse(format!("theta `{spec}`: {e}"))))
            .collect::<Result<Vec<_>>>()?;
        DiagramAutomorphism::new(self, perm)
    }
}

fn block_diagonal(blocks: &[CoxeterMatrix]) -> CoxeterMatrix {
    let n: usize = blocks.iter().map(Vec::len).sum();
    let mut m = vec![vec![2u32; n]; n];
    let mut off = 0;
    for b in blocks {
        for i in 0..b.len() {
            for j in 0..b.len() {
                m[off + i][off + j] = b[i][j];
            }
        }
        off += b.len();
    }
    for (i, row) in m.iter_mut().enumerate() {
        row[i] = 1;
    }
    m
}

fn chain(n: usize, bonds: &[(usize, usize, u32)]) -> CoxeterMatrix {
    let mut m = vec![vec![2u32; n]; n];
    for (i, row) in m.iter_mut().enumerate() {
        row[i] = 1;
    }
    for &(i, j, b) in bonds {
        m[i][j] = b;
        m[j][i] = b;
    }
    m
}

fn named_matrix(name: &str) -> Result<CoxeterMatrix> {
    let bad = || Error::Parse(format!("unknown Coxeter type `{name}`"));
    let upper = name.trim().to_ascii_uppercase();
    if let Some(rest) = upper.strip_prefix("I2(") {
        let m: u32 = rest.strip_suffix(')').ok_or_else(bad)?.parse().map_err(|_| bad())?;
        if m == 1 {
            return Err(Error::InvalidSystem("I2(m) needs m >= 2 or 0 for infinity".into()));
        }
        return Ok(chain(2, &[(0, 1, m)]));
    }
    let (letter, digits) = upper.split_at(1);
    let n: usize = digits.parse().map_err(|_| bad())?;
    if n == 0 {
        return Err(bad());
    }
    let path = |n: usize| (0..n.saturating_sub(1)).map(|i| (i, i + 1, 3)).collect::<Vec<_>>();
    let m = match letter {
        "A" => chain(n, &path(n)),
        "B" | "C" if n >= 2 => {
            let mut bonds = path(n);
            bonds[0].2 = 4;
            chain(n, &bonds)
        }
        "D" if n >= 4 => {
            let mut bonds = path(n - 1);
            bonds.push((n - 3, n - 1, 3));
            chain(n, &bonds)
        }
        "E" if (6..=8).contains(&n) => {
            let mut bonds = vec![(0, 2, 3), (1, 3, 3)];
            bonds.extend((2..n - 1).map(|i| (i, i + 1, 3)));
            chain(n, &bonds)
        }
        "F" if n == 4 => chain(4, &[(0, 1, 3), (1, 2, 4), (2, 3, 3)]),
        "G" if n == 2 => chain(2, &[(0, 1, 6)]),
        "H" if n == 3 || n == 4 => {
            let mut bonds = path(n);
            bonds[0].2 = 5;
            chain(n, &bonds)
        }
        _ => return Err(bad()),
    };
    Ok(m)
}
