//! The Iwahori–Hecke algebras `H` (parameter `v`) and `H₂` (parameter `v²`)
//! of a finite Coxeter group, in the standard basis `H_w` (resp. `K_w`).

pub mod classical;
pub mod solver;

use std::sync::OnceLock;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::group::CoxeterGroup;
use crate::laurent::{LaurentPoly, Substitution};
use crate::poset::Poset;
use crate::sparse::SparseVec;

pub use solver::{solve_canonical, solve_canonical_with, BarMatrix, CanonicalTable, TableLabel, TieBreak};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ParamMode {
    V,
    VSquared,
}

impl ParamMode {
    /// `v − v⁻¹`, resp. `v² − v⁻²`.
    pub fn q(self) -> LaurentPoly {
        match self {
            ParamMode::V => LaurentPoly::u(),
            ParamMode::VSquared => LaurentPoly::from_terms([(-2, -1), (2, 1)]),
        }
    }

    /// The two eigenvalues of a generator: `v, −v⁻¹`, resp. `v², −v⁻²`.
    pub fn roots(self) -> (LaurentPoly, LaurentPoly) {
        match self {
            ParamMode::V => (LaurentPoly::v_pow(1), LaurentPoly::monomial(-1, -1)),
            ParamMode::VSquared => (LaurentPoly::v_pow(2), LaurentPoly::monomial(-1, -2)),
        }
    }
}

#[derive(Clone, PartialEq, Eq, Debug)]
pub struct HeckeElt {
    mode: ParamMode,
    support: SparseVec,
}

impl HeckeElt {
    pub fn zero(mode: ParamMode) -> Self {
        Self { mode, support: SparseVec::new() }
    }

    pub fn standard(mode: ParamMode, w: usize) -> Self {
        Self { mode, support: SparseVec::basis(w) }
    }

    pub fn from_vec(mode: ParamMode, support: SparseVec) -> Self {
        Self { mode, support }
    }

    pub fn mode(&self) -> ParamMode {
        self.mode
    }

    pub fn support(&self) -> &SparseVec {
        &self.support
    }

    pub fn coeff(&self, w: usize) -> LaurentPoly {
        self.support.get(w)
    }

    pub fn is_zero(&self) -> bool {
        self.support.is_zero()
    }

    pub fn add(&self, other: &HeckeElt) -> Result<HeckeElt> {
        same_mode(self, other)?;
        Ok(Self { mode: self.mode, support: self.support.add(&other.support) })
    }

    pub fn sub(&self, other: &HeckeElt) -> Result<HeckeElt> {
        same_mode(self, other)?;
        Ok(Self { mode: self.mode, support: self.support.sub(&other.support) })
    }

    pub fn scale(&self, c: &LaurentPoly) -> HeckeElt {
        Self { mode: self.mode, support: self.support.scaled(c) }
    }
}

fn same_mode(a: &HeckeElt, b: &HeckeElt) -> Result<()> {
    if a.mode == b.mode {
        Ok(())
    } else {
        Err(Error::ModeMismatch)
    }
}

/// `H` or `H₂` over a finite group table.
#[derive(Debug)]
pub struct HeckeAlgebra<'g> {
    group: &'g CoxeterGroup,
    mode: ParamMode,
    bars: OnceLock<Vec<SparseVec>>,
}

impl<'g> HeckeAlgebra<'g> {
    pub fn new(group: &'g CoxeterGroup, mode: ParamMode) -> Result<Self> {
        if !group.is_complete() {
            return Err(Error::Truncated);
        }
        Ok(Self { group, mode, bars: OnceLock::new() })
    }

    pub fn group(&self) -> &'g CoxeterGroup {
        self.group
    }

    pub fn mode(&self) -> ParamMode {
        self.mode
    }

    fn check(&self, h: &HeckeElt) -> Result<()> {
        if h.mode == self.mode {
            Ok(())
        } else {
            Err(Error::ModeMismatch)
        }
    }

    pub fn one(&self) -> HeckeElt {
        HeckeElt::standard(self.mode, self.group.identity())
    }

    pub fn standard(&self, w: usize) -> HeckeElt {
        HeckeElt::standard(self.mode, w)
    }

    pub fn generator(&self, s: usize) -> HeckeElt {
        self.standard(self.group.mul_left(s, self.group.identity()).expect("generator"))
    }

    fn left_gen(&self, s: usize, h: &SparseVec) -> SparseVec {
        let q = self.mode.q();
        let mut out = SparseVec::new();
        for (w, c) in h.iter() {
            let sw = self.group.mul_left(s, w).expect("complete group");
            out.add_term(sw, c);
            if self.group.is_left_descent(s, w) {
                out.add_term(w, &(&q * c));
            }
        }
        out
    }

    fn right_gen(&self, h: &SparseVec, s: usize) -> SparseVec {
        let q = self.mode.q();
        let mut out = SparseVec::new();
        for (w, c) in h.iter() {
            let ws = self.group.mul_right(w, s).expect("complete group");
            out.add_term(ws, c);
            if self.group.is_right_descent(w, s) {
                out.add_term(w, &(&q * c));
            }
        }
        out
    }

    /// `H_s · h`
    pub fn mult_gen(&self, s: usize, h: &HeckeElt) -> Result<HeckeElt> {
        self.check(h)?;
        Ok(HeckeElt::from_vec(self.mode, self.left_gen(s, &h.support)))
    }

    /// `h · H_s`
    pub fn mult_gen_right(&self, h: &HeckeElt, s: usize) -> Result<HeckeElt> {
        self.check(h)?;
        Ok(HeckeElt::from_vec(self.mode, self.right_gen(&h.support, s)))
    }

    /// `H_w · m` letterwise, rightmost letter first.
    fn left_word(&self, w: usize, m: &SparseVec) -> SparseVec {
        self.group.word(w).iter().rev().fold(m.clone(), |acc, &s| self.left_gen(s, &acc))
    }

    pub fn mult(&self, a: &HeckeElt, b: &HeckeElt) -> Result<HeckeElt> {
        self.check(a)?;
        self.check(b)?;
        let mut out = SparseVec::new();
        for (w, c) in a.support.iter() {
            out.add_scaled(&self.left_word(w, &b.support), c);
        }
        Ok(HeckeElt::from_vec(self.mode, out))
    }

    /// `bar(H_w)` for every `w`, via `bar(H_w) = (H_s − q)·bar(H_{sw})`.
    fn bar_columns(&self) -> &[SparseVec] {
        self.bars.get_or_init(|| {
            let neg_q = -self.mode.q();
            let mut cols: Vec<SparseVec> = Vec::with_capacity(self.group.len());
            for w in 0..self.group.len() {
                let col = match self.group.word(w).first() {
                    None => SparseVec::basis(w),
                    Some(&s) => {
                        let prev = &cols[self.group.mul_left(s, w).expect("complete group")];
                        let mut c = self.left_gen(s, prev);
                        c.add_scaled(prev, &neg_q);
                        c
                    }
                };
                cols.push(col);
            }
            cols
        })
    }

    pub fn bar(&self, h: &HeckeElt) -> Result<HeckeElt> {
        self.check(h)?;
        let cols = self.bar_columns();
        let mut out = SparseVec::new();
        for (w, c) in h.support.iter() {
            out.add_scaled(&cols[w], &c.bar());
        }
        Ok(HeckeElt::from_vec(self.mode, out))
    }

    /// `bar(H_w)` recomputed letterwise without the cache.
    pub fn bar_standard_letterwise(&self, w: usize) -> HeckeElt {
        let neg_q = -self.mode.q();
        let mut acc = SparseVec::basis(self.group.identity());
        for &s in self.group.word(w).iter().rev() {
            let mut next = self.left_gen(s, &acc);
            next.add_scaled(&acc, &neg_q);
            acc = next;
        }
        HeckeElt::from_vec(self.mode, acc)
    }

    pub fn bar_matrix(&self) -> BarMatrix {
        BarMatrix::new(self.bar_columns().to_vec()).expect("bar(H_w) is unitriangular")
    }

    pub fn bruhat_poset(&self) -> Poset {
        group_poset(self.group)
    }

    /// Kazhdan–Lusztig table `h_{y,w}` (the same table serves `H₂` through `Φ`).
    pub fn kl_table(&self) -> Result<CanonicalTable> {
        let bar = match self.mode {
            ParamMode::V => self.bar_matrix(),
            ParamMode::VSquared => HeckeAlgebra::new(self.group, ParamMode::V)?.bar_matrix(),
        };
        let table = solve_canonical(&self.bruhat_poset(), &bar, TableLabel::H)?;
        match self.mode {
            ParamMode::V => Ok(table),
            ParamMode::VSquared => Ok(CanonicalTable::from_columns(
                TableLabel::H,
                table.columns().iter().map(|c| c.map_coeffs(|p| p.substitute(Substitution::SquareV))).collect(),
            )),
        }
    }

    /// Columns of the KL table for the elements of length at most
    /// `max_length`. These form a lower ideal, so only their bar columns
    /// are needed.
    pub fn kl_table_upto(&self, max_length: usize) -> Result<CanonicalTable> {
        let m = (0..self.group.len()).take_while(|&w| self.group.length(w) <= max_length).count();
        let labels = (0..m).map(|w| word_label(self.group.word(w))).collect();
        let rows = self.group.bruhat_prefix(m);
        let order = Poset::from_fn(labels, |x, w| rows[w][x])?;
        let v = HeckeAlgebra::new(self.group, ParamMode::V)?;
        let bar = BarMatrix::new((0..m).map(|w| v.bar_standard_letterwise(w).support).collect())?;
        let table = solve_canonical(&order, &bar, TableLabel::H)?;
        match self.mode {
            ParamMode::V => Ok(table),
            ParamMode::VSquared => Ok(CanonicalTable::from_columns(
                TableLabel::H,
                table.columns().iter().map(|c| c.map_coeffs(|p| p.substitute(Substitution::SquareV))).collect(),
            )),
        }
    }

    /// `underline H_w` (or `underline K_w`) as an algebra element.
    pub fn canonical_element(&self, table: &CanonicalTable, w: usize) -> HeckeElt {
        HeckeElt::from_vec(self.mode, table.column(w).clone())
    }

    /// `Φ(v^n H_w) = v^{2n} K_w`
    pub fn phi(&self, h: &HeckeElt) -> Result<HeckeElt> {
        if h.mode != ParamMode::V {
            return Err(Error::ModeMismatch);
        }
        Ok(HeckeElt::from_vec(
            ParamMode::VSquared,
            h.support.map_coeffs(|p| p.substitute(Substitution::SquareV)),
        ))
    }

    /// The automorphism with `Θ(H_s) = −H_s + v − v⁻¹`.
    pub fn theta_auto(&self, h: &HeckeElt) -> Result<HeckeElt> {
        if self.mode != ParamMode::V {
            return Err(Error::ModeMismatch);
        }
        self.check(h)?;
        let q = self.mode.q();
        let mut out = SparseVec::new();
        for (w, c) in h.support.iter() {
            let mut acc = SparseVec::basis(self.group.identity());
            for &s in self.group.word(w).iter().rev() {
                let mut next = self.left_gen(s, &acc).neg();
                next.add_scaled(&acc, &q);
                acc = next;
            }
            out.add_scaled(&acc, c);
        }
        Ok(HeckeElt::from_vec(self.mode, out))
    }
}

/// Bruhat order on a group table, labelled by reduced words.
pub fn group_poset(group: &CoxeterGroup) -> Poset {
    let labels = (0..group.len()).map(|w| word_label(group.word(w))).collect();
    Poset::from_fn(labels, |x, w| group.bruhat_leq(x, w)).expect("Bruhat order extends length order")
}

pub fn word_label(word: &[usize]) -> String {
    if word.is_empty() {
        "e".to_string()
    } else {
        word.iter().map(|s| s.to_string()).collect::<Vec<_>>().join(".")
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::coxeter::CoxeterSystem;
    use proptest::prelude::*;

    fn p(s: &str) -> LaurentPoly {
        s.parse().unwrap()
    }

    fn group(name: &str) -> CoxeterGroup {
        CoxeterGroup::finite(&CoxeterSystem::parse(name).unwrap(), 64).unwrap()
    }

    #[test]
    fn bounded_table_is_a_prefix() {
        let g = group("B3");
        for mode in [ParamMode::V, ParamMode::VSquared] {
            let h = HeckeAlgebra::new(&g, mode).unwrap();
            let full = h.kl_table().unwrap();
            let part = h.kl_table_upto(3).unwrap();
            assert_eq!(part.len(), (0..g.len()).filter(|&w| g.length(w) <= 3).count());
            assert_eq!(part.columns(), &full.columns()[..part.len()]);
        }
    }

    fn idx(g: &CoxeterGroup, w: &[usize]) -> usize {
        g.index_of_word(w).unwrap()
    }

    #[test]
    fn generator_products() {
        let g = group("A2");
        let h = HeckeAlgebra::new(&g, ParamMode::V).unwrap();
        let hs = h.generator(0);
        let sq = h.mult(&hs, &hs).unwrap();
        assert_eq!(sq, h.one().add(&hs.scale(&p("v - v^-1"))).unwrap());
        let st = h.mult(&hs, &h.generator(1)).unwrap();
        assert_eq!(st, h.standard(idx(&g, &[0, 1])));
        let h2 = HeckeAlgebra::new(&g, ParamMode::VSquared).unwrap();
        let ks = h2.generator(0);
        assert_eq!(h2.mult(&ks, &ks).unwrap(), h2.one().add(&ks.scale(&p("v^2 - v^-2"))).unwrap());
        assert_eq!(h.mult(&hs, &ks), Err(Error::ModeMismatch));
    }

    #[test]
    fn bar_examples() {
        let g = group("A2");
        let h = HeckeAlgebra::new(&g, ParamMode::V).unwrap();
        let s = idx(&g, &[0]);
        assert_eq!(
            h.bar(&h.standard(s)).unwrap(),
            HeckeElt::from_vec(ParamMode::V, SparseVec::from_terms([(s, p("1")), (0, p("v^-1 - v"))]))
        );
        assert_eq!(h.bar(&h.one().scale(&p("v"))).unwrap(), h.one().scale(&p("v^-1")));
        let st = h.standard(idx(&g, &[0, 1]));
        assert_eq!(h.bar(&h.bar(&st).unwrap()).unwrap(), st);
        for w in 0..g.len() {
            assert_eq!(h.bar(&h.standard(w)).unwrap(), h.bar_standard_letterwise(w));
        }
        assert!(h.bar_matrix().check_involution().is_ok());
    }

    #[test]
    fn kl_examples() {
        for name in ["A1", "A2", "B2", "A3", "I2(5)"] {
            let g = group(name);
            let h = HeckeAlgebra::new(&g, ParamMode::V).unwrap();
            let t = h.kl_table().unwrap();
            for s in 0..g.rank() {
                let ws = idx(&g, &[s]);
                assert_eq!(t.column(ws), &SparseVec::from_terms([(ws, p("1")), (0, p("v^-1"))]));
            }
        }
        let g = group("A2");
        let h = HeckeAlgebra::new(&g, ParamMode::V).unwrap();
        let t = h.kl_table().unwrap();
        let sts = idx(&g, &[0, 1, 0]);
        assert_eq!(t.get(0, sts), p("v^-3"));
        assert_eq!(t.get(idx(&g, &[0]), sts), p("v^-2"));
        assert_eq!(t.get(idx(&g, &[1]), sts), p("v^-2"));
        assert_eq!(t.get(idx(&g, &[0, 1]), sts), p("v^-1"));
        assert_eq!(t.get(idx(&g, &[1, 0]), sts), p("v^-1"));
    }

    /// Bar-invariance checked through algebra multiplication, not the bar matrix.
    #[test]
    fn kl_elements_are_bar_invariant() {
        for name in ["A2", "B2", "A3"] {
            let g = group(name);
            let h = HeckeAlgebra::new(&g, ParamMode::V).unwrap();
            let t = h.kl_table().unwrap();
            for w in 0..g.len() {
                let b = h.canonical_element(&t, w);
                let mut barred = HeckeElt::zero(ParamMode::V);
                for (x, c) in b.support().iter() {
                    barred = barred.add(&h.bar_standard_letterwise(x).scale(&c.bar())).unwrap();
                }
                assert_eq!(barred, b, "{name} {w}");
            }
            t.check_normalized().unwrap();
        }
    }

    #[test]
    fn kl_polynomials_have_parity_and_positivity() {
        for name in ["A3", "B3", "H3"] {
            let g = group(name);
            let t = HeckeAlgebra::new(&g, ParamMode::V).unwrap().kl_table().unwrap();
            for w in 0..g.len() {
                for (y, c) in t.column(w).iter() {
                    assert!(c.in_z_vinv() && c.is_nonnegative());
                    let d = (g.length(w) - g.length(y)) as i32;
                    assert!(c.shift(d).in_one_plus_v2_z_v2(), "{name} {y} {w}");
                }
            }
        }
    }

    #[test]
    fn phi_and_theta() {
        let g = group("A2");
        let h = HeckeAlgebra::new(&g, ParamMode::V).unwrap();
        let h2 = HeckeAlgebra::new(&g, ParamMode::VSquared).unwrap();
        let s = idx(&g, &[0]);
        assert_eq!(h.phi(&h.standard(s).scale(&p("v^-1"))).unwrap(), h2.standard(s).scale(&p("v^-2")));
        assert_eq!(h.phi(&h.one()).unwrap(), h2.one());
        let t = h.kl_table().unwrap();
        let t2 = h2.kl_table().unwrap();
        for w in 0..g.len() {
            assert_eq!(h.phi(&h.canonical_element(&t, w)).unwrap(), h2.canonical_element(&t2, w));
        }
        assert_eq!(
            h.theta_auto(&h.standard(s)).unwrap(),
            h.standard(s).scale(&p("-1")).add(&h.one().scale(&p("v - v^-1"))).unwrap()
        );
        assert_eq!(h.theta_auto(&h.one()).unwrap(), h.one());
        for w in 0..g.len() {
            let lhs = h.theta_auto(&h.standard(w)).unwrap();
            let rhs = h.bar(&h.standard(w)).unwrap().scale(&LaurentPoly::constant(g.sign(w)));
            assert_eq!(lhs, rhs);
        }
        assert!(h2.theta_auto(&h2.one()).is_err());
    }

    fn arb_elt(n: usize) -> impl Strategy<Value = SparseVec> {
        prop::collection::vec((0..n, -2i32..=2, -3i64..=3), 0..5)
            .prop_map(|ts| SparseVec::from_terms(ts.into_iter().map(|(w, e, c)| (w, LaurentPoly::monomial(c, e)))))
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(48))]

        #[test]
        fn bar_is_a_ring_involution_on_a3(a in arb_elt(24), b in arb_elt(24)) {
            let g = group("A3");
            let h = HeckeAlgebra::new(&g, ParamMode::V).unwrap();
            let a = HeckeElt::from_vec(ParamMode::V, a);
            let b = HeckeElt::from_vec(ParamMode::V, b);
            let ab = h.mult(&a, &b).unwrap();
            prop_assert_eq!(h.bar(&ab).unwrap(), h.mult(&h.bar(&a).unwrap(), &h.bar(&b).unwrap()).unwrap());
            prop_assert_eq!(h.bar(&h.bar(&a).unwrap()).unwrap(), a.clone());
            let phi_ab = h.phi(&ab).unwrap();
            let h2 = HeckeAlgebra::new(&g, ParamMode::VSquared).unwrap();
            prop_assert_eq!(phi_ab, h2.mult(&h.phi(&a).unwrap(), &h.phi(&b).unwrap()).unwrap());
        }
    }
}
