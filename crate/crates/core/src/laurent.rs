//! Exact arithmetic in the ring of integer Laurent polynomials `Z[v, v^-1]`.
//!
//! Polynomials are stored sparsely as exponent-sorted `(exponent, coefficient)`
//! pairs with no zero coefficients, so structural equality is ring equality.
//! Coefficients are `i64` with checked arithmetic: the `checked_*` methods
//! report [`Error::Overflow`], and the operator impls panic rather than wrap.

use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, AddAssign, Mul, Neg, Sub, SubAssign};
use std::str::FromStr;

use serde::de::{self, Deserializer, MapAccess, Visitor};
use serde::ser::{SerializeMap, Serializer};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Clone, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct LaurentPoly {
    terms: Vec<(i32, i64)>,
}

/// Ring endomorphisms of `Z[v, v^-1]` used by the toolkit.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Substitution {
    /// `v -> -v`
    NegateV,
    /// `v -> v^2`
    SquareV,
}

impl LaurentPoly {
    pub fn zero() -> Self {
        Self { terms: Vec::new() }
    }

    pub fn one() -> Self {
        Self::constant(1)
    }

    pub fn constant(c: i64) -> Self {
        Self::monomial(c, 0)
    }

    /// `c * v^e`
    pub fn monomial(c: i64, e: i32) -> Self {
        if c == 0 {
            Self::zero()
        } else {
            Self { terms: vec![(e, c)] }
        }
    }

    /// `v^e`
    pub fn v_pow(e: i32) -> Self {
        Self::monomial(1, e)
    }

    /// `v - v^-1`
    pub fn u() -> Self {
        Self::from_terms([(1, 1), (-1, -1)])
    }

    /// `v + v^-1`
    pub fn v_plus_vinv() -> Self {
        Self::from_terms([(1, 1), (-1, 1)])
    }

    /// Builds a polynomial from arbitrary `(exponent, coefficient)` pairs,
    /// summing repeated exponents. Panics on overflow.
    pub fn from_terms<I: IntoIterator<Item = (i32, i64)>>(terms: I) -> Self {
        let mut map: BTreeMap<i32, i64> = BTreeMap::new();
        for (e, c) in terms {
            let slot = map.entry(e).or_insert(0);
            *slot = slot.checked_add(c).expect("Laurent coefficient overflow");
        }
        Self {
            terms: map.into_iter().filter(|&(_, c)| c != 0).collect(),
        }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.terms == [(0, 1)]
    }

    /// Exponent-sorted nonzero terms.
    pub fn terms(&self) -> &[(i32, i64)] {
        &self.terms
    }

    pub fn coeff(&self, e: i32) -> i64 {
        match self.terms.binary_search_by_key(&e, |&(x, _)| x) {
            Ok(i) => self.terms[i].1,
            Err(_) => 0,
        }
    }

    pub fn min_exp(&self) -> Option<i32> {
        self.terms.first().map(|t| t.0)
    }

    pub fn max_exp(&self) -> Option<i32> {
        self.terms.last().map(|t| t.0)
    }

    pub fn checked_add(&self, other: &Self) -> Result<Self> {
        self.merge(other, 1)
    }

    pub fn checked_sub(&self, other: &Self) -> Result<Self> {
        self.merge(other, -1)
    }

    fn merge(&self, other: &Self, sign: i64) -> Result<Self> {
        let (a, b) = (&self.terms, &other.terms);
        let mut out = Vec::with_capacity(a.len() + b.len());
        let (mut i, mut j) = (0, 0);
        while i < a.len() || j < b.len() {
            let take_a = j == b.len() || (i < a.len() && a[i].0 < b[j].0);
            let take_b = i == a.len() || (j < b.len() && b[j].0 < a[i].0);
            if take_a {
                out.push(a[i]);
                i += 1;
            } else if take_b {
                let c = b[j].1.checked_mul(sign).ok_or(Error::Overflow)?;
                out.push((b[j].0, c));
                j += 1;
            } else {
                let c = b[j]
                    .1
                    .checked_mul(sign)
                    .and_then(|c| a[i].1.checked_add(c))
                    .ok_or(Error::Overflow)?;
                if c != 0 {
                    out.push((a[i].0, c));
                }
                i += 1;
                j += 1;
            }
        }
        Ok(Self { terms: out })
    }

    pub fn checked_mul(&self, other: &Self) -> Result<Self> {
        if self.is_zero() || other.is_zero() {
            return Ok(Self::zero());
        }
        if other.terms.len() == 1 {
            let (e, c) = other.terms[0];
            return self.checked_scale_shift(c, e);
        }
        if self.terms.len() == 1 {
            let (e, c) = self.terms[0];
            return other.checked_scale_shift(c, e);
        }
        let lo = self.terms[0].0 + other.terms[0].0;
        let hi = self.terms.last().unwrap().0 + other.terms.last().unwrap().0;
        let mut dense = vec![0i64; (hi - lo + 1) as usize];
        for &(ea, ca) in &self.terms {
            for &(eb, cb) in &other.terms {
                let slot = &mut dense[(ea + eb - lo) as usize];
                let prod = ca.checked_mul(cb).ok_or(Error::Overflow)?;
                *slot = slot.checked_add(prod).ok_or(Error::Overflow)?;
            }
        }
        Ok(Self {
            terms: dense
                .into_iter()
                .enumerate()
                .filter(|&(_, c)| c != 0)
                .map(|(k, c)| (lo + k as i32, c))
                .collect(),
        })
    }

    /// `c * v^e * self`
    pub fn checked_scale_shift(&self, c: i64, e: i32) -> Result<Self> {
        if c == 0 {
            return Ok(Self::zero());
        }
        let terms = self
            .terms
            .iter()
            .map(|&(x, k)| k.checked_mul(c).map(|k| (x + e, k)).ok_or(Error::Overflow))
            .collect::<Result<Vec<_>>>()?;
        Ok(Self { terms })
    }

    /// Multiplies by `v^e`.
    pub fn shift(&self, e: i32) -> Self {
        Self {
            terms: self.terms.iter().map(|&(x, c)| (x + e, c)).collect(),
        }
    }

    pub fn scale(&self, c: i64) -> Self {
        self.checked_scale_shift(c, 0)
            .expect("Laurent coefficient overflow")
    }

    /// The bar involution `v -> v^-1`.
    pub fn bar(&self) -> Self {
        Self {
            terms: self.terms.iter().rev().map(|&(e, c)| (-e, c)).collect(),
        }
    }

    pub fn substitute(&self, kind: Substitution) -> Self {
        match kind {
            Substitution::NegateV => Self {
                terms: self
                    .terms
                    .iter()
                    .map(|&(e, c)| (e, if e.rem_euclid(2) == 1 { -c } else { c }))
                    .collect(),
            },
            Substitution::SquareV => Self {
                terms: self.terms.iter().map(|&(e, c)| (2 * e, c)).collect(),
            },
        }
    }

    /// Inverse of [`Substitution::SquareV`]: halves every exponent, or `None`
    /// when an odd exponent is present.
    pub fn unsquare_v(&self) -> Option<Self> {
        if self.terms.iter().any(|&(e, _)| e.rem_euclid(2) != 0) {
            return None;
        }
        Some(Self {
            terms: self.terms.iter().map(|&(e, c)| (e / 2, c)).collect(),
        })
    }

    /// Exact quotient `self / divisor` in `Z[v, v^-1]`.
    pub fn exact_div(&self, divisor: &Self) -> Result<Self> {
        if divisor.is_zero() {
            return Err(Error::DivisionByZero);
        }
        if self.is_zero() {
            return Ok(Self::zero());
        }
        // Normalise both sides to ordinary polynomials with nonzero constant
        // term; the quotient is then a polynomial times a power of v.
        let a_lo = self.terms[0].0;
        let b_lo = divisor.terms[0].0;
        let to_dense = |p: &Self, lo: i32| -> Vec<i64> {
            let hi = p.terms.last().unwrap().0;
            let mut d = vec![0i64; (hi - lo + 1) as usize];
            for &(e, c) in &p.terms {
                d[(e - lo) as usize] = c;
            }
            d
        };
        let mut rem = to_dense(self, a_lo);
        let div = to_dense(divisor, b_lo);
        if rem.len() < div.len() {
            return Err(Error::NotDivisible);
        }
        let lead = *div.last().unwrap();
        let qlen = rem.len() - div.len() + 1;
        let mut quot = vec![0i64; qlen];
        for k in (0..qlen).rev() {
            let top = rem[k + div.len() - 1];
            if top == 0 {
                continue;
            }
            if top % lead != 0 {
                return Err(Error::NotDivisible);
            }
            let q = top / lead;
            quot[k] = q;
            for (j, &d) in div.iter().enumerate() {
                let prod = q.checked_mul(d).ok_or(Error::Overflow)?;
                rem[k + j] = rem[k + j].checked_sub(prod).ok_or(Error::Overflow)?;
            }
        }
        if rem.iter().any(|&c| c != 0) {
            return Err(Error::NotDivisible);
        }
        Ok(Self {
            terms: quot
                .into_iter()
                .enumerate()
                .filter(|&(_, c)| c != 0)
                .map(|(k, c)| (k as i32 + a_lo - b_lo, c))
                .collect(),
        })
    }

    /// For `d` with `bar(d) = -d`, returns the strictly negative-exponent part
    /// `mu`, which satisfies `mu - bar(mu) = d`.
    pub fn split_antisymmetric(&self) -> Result<Self> {
        if self.bar() != -self {
            return Err(Error::NotAntisymmetric);
        }
        Ok(Self {
            terms: self.terms.iter().copied().filter(|&(e, _)| e < 0).collect(),
        })
    }

    /// Membership in `Z[v^-1]`.
    pub fn in_z_vinv(&self) -> bool {
        self.terms.iter().all(|&(e, _)| e <= 0)
    }

    /// Membership in `v^-1 Z[v^-1]`.
    pub fn in_vinv_z_vinv(&self) -> bool {
        self.terms.iter().all(|&(e, _)| e < 0)
    }

    /// Membership in `1 + v^2 Z[v^2]`.
    pub fn in_one_plus_v2_z_v2(&self) -> bool {
        self.coeff(0) == 1 && self.terms.iter().all(|&(e, _)| e == 0 || (e > 0 && e % 2 == 0))
    }

    /// Membership in `1 + v Z[v]`.
    pub fn in_one_plus_v_z_v(&self) -> bool {
        self.coeff(0) == 1 && self.terms.iter().all(|&(e, _)| e >= 0)
    }

    /// Membership in `Z[v + v^-1]`, i.e. bar invariance.
    pub fn is_bar_invariant(&self) -> bool {
        self.bar() == *self
    }

    pub fn is_nonnegative(&self) -> bool {
        self.terms.iter().all(|&(_, c)| c > 0)
    }

    /// `self - other` lies in `2 Z[v, v^-1]`.
    pub fn mod2_equal(&self, other: &Self) -> bool {
        match self.checked_sub(other) {
            Ok(d) => d.terms.iter().all(|&(_, c)| c % 2 == 0),
            // The difference of two i64 values is even iff their parities agree.
            Err(_) => {
                let exps: std::collections::BTreeSet<i32> = self
                    .terms
                    .iter()
                    .chain(other.terms.iter())
                    .map(|t| t.0)
                    .collect();
                exps.into_iter()
                    .all(|e| (self.coeff(e) & 1) == (other.coeff(e) & 1))
            }
        }
    }

    /// Exact halving; `None` if some coefficient is odd.
    pub fn halve(&self) -> Option<Self> {
        if self.terms.iter().any(|&(_, c)| c % 2 != 0) {
            return None;
        }
        Some(Self {
            terms: self.terms.iter().map(|&(e, c)| (e, c / 2)).collect(),
        })
    }
}

impl fmt::Display for LaurentPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        for (k, &(e, c)) in self.terms.iter().enumerate() {
            let mag = c.unsigned_abs();
            if k == 0 {
                if c < 0 {
                    write!(f, "-")?;
                }
            } else if c < 0 {
                write!(f, " - ")?;
            } else {
                write!(f, " + ")?;
            }
            match (e, mag) {
                (0, m) => write!(f, "{m}")?,
                (1, 1) => write!(f, "v")?,
                (1, m) => write!(f, "{m}*v")?,
                (e, 1) => write!(f, "v^{e}")?,
                (e, m) => write!(f, "{m}*v^{e}")?,
            }
        }
        Ok(())
    }
}

impl fmt::Debug for LaurentPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "LaurentPoly({self})")
    }
}

impl FromStr for LaurentPoly {
    type Err = Error;

    /// Parses the canonical text form (`"-v^-2 + 1 + 2*v^3"`); terms may
    /// appear in any order and repeat.
    fn from_str(s: &str) -> Result<Self> {
        let chars: Vec<char> = s.chars().filter(|c| !c.is_whitespace()).collect();
        if chars.is_empty() {
            return Err(Error::Parse("empty polynomial".into()));
        }
        let err = || Error::Parse(format!("malformed polynomial `{s}`"));
        let mut terms = Vec::new();
        let mut i = 0;
        let read_int = |i: &mut usize| -> Option<i64> {
            let start = *i;
            while *i < chars.len() && chars[*i].is_ascii_digit() {
                *i += 1;
            }
            if start == *i {
                None
            } else {
                chars[start..*i].iter().collect::<String>().parse().ok()
            }
        };
        while i < chars.len() {
            let mut sign = 1i64;
            while i < chars.len() && (chars[i] == '+' || chars[i] == '-') {
                if chars[i] == '-' {
                    sign = -sign;
                }
                i += 1;
            }
            let coeff = read_int(&mut i);
            let mut exp = 0i32;
            let mut has_v = false;
            if i < chars.len() && chars[i] == '*' {
                i += 1;
            }
            if i < chars.len() && chars[i] == 'v' {
                has_v = true;
                i += 1;
                exp = 1;
                if i < chars.len() && chars[i] == '^' {
                    i += 1;
                    let mut esign = 1;
                    if i < chars.len() && chars[i] == '-' {
                        esign = -1;
                        i += 1;
                    }
                    exp = esign * read_int(&mut i).ok_or_else(err)? as i32;
                }
            }
            if coeff.is_none() && !has_v {
                return Err(err());
            }
            let c = coeff.unwrap_or(1).checked_mul(sign).ok_or(Error::Overflow)?;
            terms.push((exp, c));
        }
        Ok(Self::from_terms(terms))
    }
}

impl Serialize for LaurentPoly {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        let mut map = serializer.serialize_map(Some(self.terms.len()))?;
        for (e, c) in &self.terms {
            map.serialize_entry(&e.to_string(), c)?;
        }
        map.end()
    }
}

impl<'de> Deserialize<'de> for LaurentPoly {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        struct PolyVisitor;
        impl<'de> Visitor<'de> for PolyVisitor {
            type Value = LaurentPoly;
            fn expecting(&self, f: &mut fmt::Formatter) -> fmt::Result {
                f.write_str("a map from exponent strings to integer coefficients")
            }
            fn visit_map<M: MapAccess<'de>>(self, mut access: M) -> std::result::Result<LaurentPoly, M::Error> {
                let mut terms = Vec::new();
                while let Some((k, c)) = access.next_entry::<String, i64>()? {
                    let e: i32 = k.parse().map_err(de::Error::custom)?;
                    terms.push((e, c));
                }
                Ok(LaurentPoly::from_terms(terms))
            }
        }
        deserializer.deserialize_map(PolyVisitor)
    }
}

impl From<i64> for LaurentPoly {
    fn from(c: i64) -> Self {
        Self::constant(c)
    }
}

macro_rules! forward_binop {
    ($tr:ident, $method:ident, $checked:ident) => {
        impl $tr<&LaurentPoly> for &LaurentPoly {
            type Output = LaurentPoly;
            fn $method(self, rhs: &LaurentPoly) -> LaurentPoly {
                self.$checked(rhs).expect("Laurent coefficient overflow")
            }
        }
        impl $tr<LaurentPoly> for LaurentPoly {
            type Output = LaurentPoly;
            fn $method(self, rhs: LaurentPoly) -> LaurentPoly {
                (&self).$method(&rhs)
            }
        }
        impl $tr<&LaurentPoly> for LaurentPoly {
            type Output = LaurentPoly;
            fn $method(self, rhs: &LaurentPoly) -> LaurentPoly {
                (&self).$method(rhs)
            }
        }
        impl $tr<LaurentPoly> for &LaurentPoly {
            type Output = LaurentPoly;
            fn $method(self, rhs: LaurentPoly) -> LaurentPoly {
                self.$method(&rhs)
            }
        }
    };
}

forward_binop!(Add, add, checked_add);
forward_binop!(Sub, sub, checked_sub);
forward_binop!(Mul, mul, checked_mul);

impl AddAssign<&LaurentPoly> for LaurentPoly {
    fn add_assign(&mut self, rhs: &LaurentPoly) {
        *self = &*self + rhs;
    }
}

impl AddAssign<LaurentPoly> for LaurentPoly {
    fn add_assign(&mut self, rhs: LaurentPoly) {
        *self = &*self + &rhs;
    }
}

impl SubAssign<&LaurentPoly> for LaurentPoly {
    fn sub_assign(&mut self, rhs: &LaurentPoly) {
        *self = &*self - rhs;
    }
}

impl Neg for &LaurentPoly {
    type Output = LaurentPoly;
    fn neg(self) -> LaurentPoly {
        self.scale(-1)
    }
}

impl Neg for LaurentPoly {
    type Output = LaurentPoly;
    fn neg(self) -> LaurentPoly {
        -&self
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn p(s: &str) -> LaurentPoly {
        s.parse().unwrap()
    }

    #[test]
    fn arithmetic_examples() {
        assert_eq!(p("v - v^-1") * p("v + v^-1"), p("v^2 - v^-2"));
        assert_eq!(p("v + v^-1") * LaurentPoly::zero(), LaurentPoly::zero());
        let u = LaurentPoly::u();
        assert_eq!(&u * &u, p("v^2 - 2 + v^-2"));
    }

    #[test]
    fn bar_examples() {
        assert_eq!(p("v + 2").bar(), p("v^-1 + 2"));
        assert_eq!(p("v - v^-1").bar(), p("v^-1 - v"));
        assert_eq!(LaurentPoly::zero().bar(), LaurentPoly::zero());
    }

    #[test]
    fn substitution_examples() {
        assert_eq!(p("v - v^-1").substitute(Substitution::NegateV), p("-v + v^-1"));
        assert_eq!(p("v - v^-1").substitute(Substitution::SquareV), p("v^2 - v^-2"));
        assert_eq!(LaurentPoly::one().substitute(Substitution::SquareV), LaurentPoly::one());
    }

    #[test]
    fn exact_division_examples() {
        assert_eq!(p("v^2 - v^-2").exact_div(&p("v + v^-1")), Ok(p("v - v^-1")));
        assert_eq!(LaurentPoly::one().exact_div(&p("v + v^-1")), Err(Error::NotDivisible));
        assert_eq!(p("v^2 - 2 + v^-2").exact_div(&p("v + v^-1")), Err(Error::NotDivisible));
        assert_eq!(p("v^2 - 2 + v^-2").exact_div(&p("v - v^-1")), Ok(p("v - v^-1")));
        assert_eq!(p("3*v^5").exact_div(&p("-v^2")), Ok(p("-3*v^3")));
        assert_eq!(p("v").exact_div(&LaurentPoly::zero()), Err(Error::DivisionByZero));
    }

    #[test]
    fn split_examples() {
        assert_eq!(p("v^-1 - v").split_antisymmetric(), Ok(p("v^-1")));
        assert_eq!(p("3*v^-2 - 3*v^2").split_antisymmetric(), Ok(p("3*v^-2")));
        assert_eq!(p("v + v^-1").split_antisymmetric(), Err(Error::NotAntisymmetric));
    }

    #[test]
    fn predicate_examples() {
        assert!(p("1 + v^2 + v^6").in_one_plus_v2_z_v2());
        assert!(!p("1 + v^3").in_one_plus_v2_z_v2());
        assert!(!p("v - v^-1").is_bar_invariant());
        assert!(p("v + v^-1").is_bar_invariant());
        assert!(p("1 + 2*v^-1 + v^-2").mod2_equal(&p("1 + v^-2 + 2*v^-3")));
        assert!(!p("v^-1").mod2_equal(&LaurentPoly::zero()));
        assert!(p("v^-1 + 3*v^-4").in_vinv_z_vinv());
        assert!(!p("1 + v^-1").in_vinv_z_vinv());
        assert!(p("1 + v^-1").in_z_vinv());
        assert!(p("1 - v + v^4").in_one_plus_v_z_v());
        assert!(!p("1 - v^-1").is_nonnegative());
    }

    #[test]
    fn overflow_is_reported() {
        let big = LaurentPoly::constant(i64::MAX);
        assert_eq!(big.checked_add(&LaurentPoly::one()), Err(Error::Overflow));
        assert_eq!(big.checked_mul(&LaurentPoly::constant(2)), Err(Error::Overflow));
        assert!(big.mod2_equal(&LaurentPoly::constant(-1)));
    }

    #[test]
    #[should_panic(expected = "overflow")]
    fn operator_overflow_panics() {
        let _ = LaurentPoly::constant(i64::MIN) - LaurentPoly::one();
    }

    #[test]
    fn text_form() {
        let q = LaurentPoly::from_terms([(-2, -1), (0, 1), (3, 2)]);
        assert_eq!(q.to_string(), "-v^-2 + 1 + 2*v^3");
        assert_eq!(p("-v^-2 + 1 + 2*v^3"), q);
        assert_eq!(p("-v + 1").to_string(), "1 - v");
        assert_eq!(LaurentPoly::zero().to_string(), "0");
        assert!("v^".parse::<LaurentPoly>().is_err());
    }

    #[test]
    fn json_form() {
        let q = p("v^-1 + 2");
        assert_eq!(serde_json::to_string(&q).unwrap(), r#"{"-1":1,"0":2}"#);
        let back: LaurentPoly = serde_json::from_str(r#"{"-1": 1, "0": 2}"#).unwrap();
        assert_eq!(back, q);
    }

    fn arb_poly() -> impl Strategy<Value = LaurentPoly> {
        proptest::collection::vec((-6i32..=6, -20i64..=20), 0..6).prop_map(LaurentPoly::from_terms)
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(1000))]

        #[test]
        fn bar_is_involutive(a in arb_poly()) {
            prop_assert_eq!(a.bar().bar(), a);
        }

        #[test]
        fn split_recovers_antisymmetric(a in arb_poly()) {
            let d = &a - a.bar();
            let mu = d.split_antisymmetric().unwrap();
            prop_assert_eq!(&mu - mu.bar(), d);
            prop_assert!(mu.in_vinv_z_vinv());
        }

        #[test]
        fn exact_div_inverts_mul(a in arb_poly(), b in arb_poly()) {
            prop_assume!(!b.is_zero());
            prop_assert_eq!((&a * &b).exact_div(&b).unwrap(), a);
        }

        #[test]
        fn square_v_is_multiplicative(a in arb_poly(), b in arb_poly()) {
            let sq = |x: &LaurentPoly| x.substitute(Substitution::SquareV);
            prop_assert_eq!(sq(&(&a * &b)), sq(&a) * sq(&b));
            prop_assert_eq!(sq(&(&a + &b)), sq(&a) + sq(&b));
        }

        #[test]
        fn text_form_roundtrips(a in arb_poly()) {
            prop_assert_eq!(a.to_string().parse::<LaurentPoly>().unwrap(), a);
        }
    }
}
