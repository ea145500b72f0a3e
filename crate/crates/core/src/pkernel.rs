//! Incidence algebras `I(P; Z[q])`, `P`-kernels and their KLS functions, and
//! the passage to bar involutions with `q = v²`:
//! `ψ_K(a_y) = Σ_x v^{r(x,y)}·bar(K(x,y))·a_x`.

use std::collections::BTreeMap;

use serde::ser::SerializeStruct;
use serde::{Serialize, Serializer};

use crate::error::{Error, Result};
use crate::hecke::{solve_canonical, BarMatrix, TableLabel};
use crate::ivmodules::{bar_module, ModuleBasis, Which};
use crate::laurent::{LaurentPoly, Substitution};
use crate::poset::Poset;
use crate::sparse::SparseVec;

/// `r : P → Z`, strictly increasing along the order.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Grading(Vec<i32>);

impl Grading {
    pub fn new(poset: &Poset, values: Vec<i32>) -> Result<Self> {
        if values.len() != poset.len() {
            return Err(Error::InvalidSystem("grading has the wrong length".into()));
        }
        for y in 0..poset.len() {
            if let Some(x) = poset.lower(y).find(|&x| x != y && values[x] >= values[y]) {
                return Err(Error::InvalidSystem(format!("grading does not increase from {x} to {y}")));
            }
        }
        Ok(Self(values))
    }

    /// `r = ℓ` (the length of the `W`-component).
    pub fn length(basis: &ModuleBasis) -> Self {
        Self::new(basis.poset(), (0..basis.len()).map(|i| basis.length(i) as i32).collect()).expect("length is strictly monotone")
    }

    /// `r = ρ`.
    pub fn rho(basis: &ModuleBasis) -> Self {
        Self::new(basis.poset(), (0..basis.len()).map(|i| basis.grade(i) as i32).collect()).expect("rho is strictly monotone")
    }

    pub fn get(&self, x: usize) -> i32 {
        self.0[x]
    }

    /// `r(x,y) = r(y) − r(x)`
    pub fn between(&self, x: usize, y: usize) -> i32 {
        self.0[y] - self.0[x]
    }
}

/// A function on the intervals of a poset with values in `Z[q]` (stored
/// with exponents counting powers of `q`); zero off the order.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IncidenceFunction {
    poset: Poset,
    values: BTreeMap<(usize, usize), LaurentPoly>,
}

impl IncidenceFunction {
    pub fn zero(poset: Poset) -> Self {
        Self { poset, values: BTreeMap::new() }
    }

    /// `δ_P`
    pub fn delta(poset: Poset) -> Self {
        let values = (0..poset.len()).map(|x| ((x, x), LaurentPoly::one())).collect();
        Self { poset, values }
    }

    pub fn new(poset: Poset, values: BTreeMap<(usize, usize), LaurentPoly>) -> Result<Self> {
        if let Some(&(x, y)) = values.keys().find(|&&(x, y)| x >= poset.len() || y >= poset.len() || !poset.leq(x, y)) {
            return Err(Error::InvalidSystem(format!("value at ({x}, {y}) off the order")));
        }
        let values = values.into_iter().filter(|(_, p)| !p.is_zero()).collect();
        Ok(Self { poset, values })
    }

    pub fn from_fn(poset: Poset, f: impl Fn(usize, usize) -> LaurentPoly) -> Self {
        let mut values = BTreeMap::new();
        for y in 0..poset.len() {
            for x in poset.lower(y) {
                let p = f(x, y);
                if !p.is_zero() {
                    values.insert((x, y), p);
                }
            }
        }
        Self { poset, values }
    }

    pub fn poset(&self) -> &Poset {
        &self.poset
    }

    pub fn get(&self, x: usize, y: usize) -> LaurentPoly {
        self.values.get(&(x, y)).cloned().unwrap_or_default()
    }

    /// Nonzero values, ordered by `(x, y)`.
    pub fn iter(&self) -> impl Iterator<Item = ((usize, usize), &LaurentPoly)> + '_ {
        self.values.iter().map(|(&k, p)| (k, p))
    }

    /// `(fg)(x,y) = Σ_{x ≤ t ≤ y} f(x,t) g(t,y)`
    pub fn convolve(&self, other: &Self) -> Result<Self> {
        if self.poset != other.poset {
            return Err(Error::InvalidSystem("incidence functions on different posets".into()));
        }
        let p = &self.poset;
        Ok(Self::from_fn(p.clone(), |x, y| {
            let mut acc = LaurentPoly::zero();
            for t in p.interval(x, y) {
                acc += &self.get(x, t) * &other.get(t, y);
            }
            acc
        }))
    }

    /// Invertible iff every diagonal value is `±1`.
    pub fn is_invertible(&self) -> bool {
        (0..self.poset.len()).all(|x| {
            let d = self.get(x, x);
            d.is_one() || d == LaurentPoly::constant(-1)
        })
    }
}

fn q_text(p: &LaurentPoly) -> String {
    p.to_string().replace('v', "q")
}

impl Serialize for IncidenceFunction {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        #[derive(Serialize)]
        struct Entry<'a> {
            x: &'a str,
            y: &'a str,
            poly: String,
        }
        let entries: Vec<Entry<'_>> = self
            .values
            .iter()
            .map(|(&(x, y), p)| Entry { x: self.poset.label(x), y: self.poset.label(y), poly: q_text(p) })
            .collect();
        let mut st = serializer.serialize_struct("IncidenceFunction", 2)?;
        st.serialize_field("poset", &self.poset)?;
        st.serialize_field("values", &entries)?;
        st.end()
    }
}

/// `ψ_K`. Requires `K(x,x) = 1`.
pub fn bar_from_kernel(k: &IncidenceFunction, r: &Grading) -> Result<BarMatrix> {
    let n = k.poset.len();
    let mut cols = vec![SparseVec::new(); n];
    for ((x, y), p) in k.iter() {
        let e = p.bar().substitute(Substitution::SquareV).shift(r.between(x, y));
        cols[y].add_term(x, &e);
    }
    BarMatrix::new(cols).map_err(|_| Error::InvalidSystem("kernel must be 1 on the diagonal".into()))
}

/// The inverse of `K ↦ ψ_K`: `K(x,y) = bar(v^{−r(x,y)}·ψ_{x,y})` read in
/// `q = v²`, defined only when that lies in `Z[v⁻²]`.
pub fn kernel_from_bar(bar: &BarMatrix, poset: &Poset, r: &Grading) -> Result<IncidenceFunction> {
    let mut values = BTreeMap::new();
    for y in 0..bar.len() {
        for (x, c) in bar.column(y).iter() {
            if !poset.leq(x, y) {
                return Err(Error::NotParityCompatible { x, y });
            }
            let t = c.shift(-r.between(x, y)).bar();
            if t.min_exp().is_some_and(|e| e < 0) {
                return Err(Error::NotParityCompatible { x, y });
            }
            let k = t.unsquare_v().ok_or(Error::NotParityCompatible { x, y })?;
            values.insert((x, y), k);
        }
    }
    IncidenceFunction::new(poset.clone(), values)
}

/// `K(x,x) = 1` and `ψ_K² = 1`.
pub fn is_p_kernel(k: &IncidenceFunction, r: &Grading) -> bool {
    bar_from_kernel(k, r).is_ok_and(|b| b.check_involution().is_ok())
}

/// `(Kf)(x,y) = q^{r(x,y)}·bar(f(x,y))` for all `x ≤ y`.
pub fn is_totally_acceptable(k: &IncidenceFunction, f: &IncidenceFunction, r: &Grading) -> Result<bool> {
    let kf = k.convolve(f)?;
    let p = &k.poset;
    Ok((0..p.len()).all(|y| p.lower(y).all(|x| kf.get(x, y) == f.get(x, y).bar().shift(r.between(x, y)))))
}

/// The KLS function: `γ(x,y) = v^{r(x,y)}·b_{x,y}` for the canonical basis of
/// `ψ_K`, with `γ(x,x) = 1` and `deg_q γ(x,y) < r(x,y)/2` enforced.
pub fn kls_function(k: &IncidenceFunction, r: &Grading) -> Result<IncidenceFunction> {
    let bar = bar_from_kernel(k, r)?;
    let table = solve_canonical(&k.poset, &bar, TableLabel::Generic)?;
    let mut values = BTreeMap::new();
    for y in 0..table.len() {
        for (x, c) in table.column(y).iter() {
            let rr = r.between(x, y);
            let g = c
                .shift(rr)
                .unsquare_v()
                .filter(|g| g.min_exp().is_none_or(|e| e >= 0))
                .ok_or_else(|| Error::Internal(format!("KLS value at ({x}, {y}) is not in Z[q]")))?;
            let ok = if x == y { g.is_one() } else { g.max_exp().is_none_or(|d| 2 * d < rr) };
            if !ok {
                return Err(Error::Internal(format!("KLS degree bound fails at ({x}, {y})")));
            }
            values.insert((x, y), g);
        }
    }
    IncidenceFunction::new(k.poset.clone(), values)
}

/// The two natural gradings of a module basis.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum GradingKind {
    Length,
    Rho,
}

impl GradingKind {
    pub fn of(self, basis: &ModuleBasis) -> Grading {
        match self {
            GradingKind::Length => Grading::length(basis),
            GradingKind::Rho => Grading::rho(basis),
        }
    }
}

impl std::str::FromStr for GradingKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "l" | "length" => Ok(GradingKind::Length),
            "rho" => Ok(GradingKind::Rho),
            _ => Err(Error::Parse(format!("unknown grading {s:?}"))),
        }
    }
}

/// Kernels of a named module on every `θ`-block; the module has a kernel
/// only if every block does.
pub fn module_kernels(blocks: &[ModuleBasis], which: Which, kind: GradingKind) -> Result<Vec<IncidenceFunction>> {
    blocks
        .iter()
        .map(|b| kernel_from_bar(&bar_module(b, which)?, b.poset(), &kind.of(b)))
        .collect()
}
