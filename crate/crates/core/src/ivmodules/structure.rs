//! Structure matrices: the coefficients of the four-case (or two-case)
//! generator action on a module with basis `I` (or `W`).

use std::fmt;

use serde::ser::SerializeStruct;
use serde::{Serialize, Serializer};

use crate::error::{Error, Result};
use crate::hecke::ParamMode;
use crate::laurent::{LaurentPoly, Substitution};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, serde::Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum AlgebraMode {
    /// `H` acting on `A·I`.
    HOnI,
    /// `H₂` acting on `A·I`.
    H2OnI,
    /// `H` acting on `A·W`.
    HOnW,
}

impl AlgebraMode {
    pub fn param(self) -> ParamMode {
        match self {
            AlgebraMode::H2OnI => ParamMode::VSquared,
            _ => ParamMode::V,
        }
    }

    pub fn rows(self) -> usize {
        match self {
            AlgebraMode::HOnW => 2,
            _ => 4,
        }
    }

    pub fn on_involutions(self) -> bool {
        self != AlgebraMode::HOnW
    }

    pub fn as_str(self) -> &'static str {
        match self {
            AlgebraMode::HOnI => "hi",
            AlgebraMode::H2OnI => "h2i",
            AlgebraMode::HOnW => "hw",
        }
    }
}

impl std::str::FromStr for AlgebraMode {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "hi" | "h_on_i" => Ok(AlgebraMode::HOnI),
            "h2i" | "h2_on_i" => Ok(AlgebraMode::H2OnI),
            "hw" | "h_on_w" => Ok(AlgebraMode::HOnW),
            _ => Err(Error::Parse(format!("unknown algebra mode {s:?}"))),
        }
    }
}

/// Rows are indexed by the case of `(s, w)`: on `I`, row `0` is `s⋉w = sws`
/// with `s` an ascent, `1` is `sws` with a descent, `2` is `sw` ascent and `3`
/// is `sw` descent. On `W`, row `0` is ascent and `1` descent. An entry pair
/// `(a, b)` means `s·w = a·(s⋉w) + b·w`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct StructureMatrix {
    mode: AlgebraMode,
    rows: Vec<[LaurentPoly; 2]>,
}

fn lp(terms: &[(i32, i64)]) -> LaurentPoly {
    LaurentPoly::from_terms(terms.iter().copied())
}

impl StructureMatrix {
    pub fn new(mode: AlgebraMode, rows: Vec<[LaurentPoly; 2]>) -> Result<Self> {
        if rows.len() != mode.rows() {
            return Err(Error::InvalidSystem(format!(
                "structure for {} needs {} rows, got {}",
                mode.as_str(),
                mode.rows(),
                rows.len()
            )));
        }
        Ok(Self { mode, rows })
    }

    fn of(mode: AlgebraMode, rows: [[&[(i32, i64)]; 2]; 4]) -> Self {
        Self::new(mode, rows.iter().map(|[a, b]| [lp(a), lp(b)]).collect()).expect("shape")
    }

    pub fn mode(&self) -> AlgebraMode {
        self.mode
    }

    pub fn rows(&self) -> &[[LaurentPoly; 2]] {
        &self.rows
    }

    pub fn get(&self, row: usize, col: usize) -> &LaurentPoly {
        &self.rows[row][col]
    }

    pub fn gamma() -> Self {
        let u: &[(i32, i64)] = &[(-1, -1), (1, 1)];
        Self::of(AlgebraMode::HOnI, [[&[(0, 1)], &[]], [&[(0, 1)], u], [&[(0, 1)], &[(0, 1)]], [u, &[(-1, -1), (0, -1), (1, 1)]]])
    }

    pub fn gamma_prime() -> Self {
        let u: &[(i32, i64)] = &[(-1, -1), (1, 1)];
        Self::of(AlgebraMode::HOnI, [[&[(0, 1)], u], [&[(0, 1)], &[]], [&[(0, 1)], &[(-1, -1), (0, -1), (1, 1)]], [u, &[(0, 1)]]])
    }

    pub fn gamma_double_prime() -> Self {
        let u: &[(i32, i64)] = &[(-1, -1), (1, 1)];
        Self::of(
            AlgebraMode::HOnI,
            [[&[(0, 1)], &[]], [&[(0, 1)], u], [&[(0, 1)], &[(0, -1)]], [&[(-1, 1), (1, -1)], &[(-1, -1), (0, 1), (1, 1)]]],
        )
    }

    pub fn gamma_triple_prime() -> Self {
        let u: &[(i32, i64)] = &[(-1, -1), (1, 1)];
        Self::of(
            AlgebraMode::HOnI,
            [[&[(0, 1)], u], [&[(0, 1)], &[]], [&[(0, 1)], &[(-1, -1), (0, 1), (1, 1)]], [&[(-1, 1), (1, -1)], &[(0, -1)]]],
        )
    }

    pub fn delta() -> Self {
        Self::of(
            AlgebraMode::H2OnI,
            [
                [&[(0, 1)], &[]],
                [&[(0, 1)], &[(-2, -1), (2, 1)]],
                [&[(-1, 1), (1, 1)], &[(0, 1)]],
                [&[(-1, -1), (1, 1)], &[(-2, -1), (0, -1), (2, 1)]],
            ],
        )
    }

    pub fn delta_prime() -> Self {
        Self::of(
            AlgebraMode::H2OnI,
            [
                [&[(0, 1)], &[]],
                [&[(0, 1)], &[(-2, -1), (2, 1)]],
                [&[(-1, 1), (1, 1)], &[(0, -1)]],
                [&[(-1, 1), (1, -1)], &[(-2, -1), (0, 1), (2, 1)]],
            ],
        )
    }

    pub fn delta_double_prime() -> Self {
        Self::gamma().square()
    }

    pub fn delta_triple_prime() -> Self {
        Self::gamma_double_prime().square()
    }

    /// The regular representation of `H` on itself.
    pub fn kl() -> Self {
        Self::new(AlgebraMode::HOnW, vec![[LaurentPoly::one(), LaurentPoly::zero()], [LaurentPoly::one(), LaurentPoly::u()]])
            .expect("shape")
    }

    /// First column zero, second column constant at an eigenvalue.
    pub fn trivial(mode: AlgebraMode, positive: bool) -> Self {
        let (a, b) = mode.param().roots();
        let e = if positive { a } else { b };
        Self::new(mode, vec![[LaurentPoly::zero(), e]; mode.rows()]).expect("shape")
    }

    pub fn is_trivial(&self) -> bool {
        let (a, b) = self.mode.param().roots();
        let e = &self.rows[0][1];
        (e == &a || e == &b) && self.rows.iter().all(|r| r[0].is_zero() && &r[1] == e)
    }

    /// `[γ]₂`: substitute `v ↦ v²` in every entry, turning an `H`-structure
    /// on `I` into an `H₂`-structure.
    pub fn square(&self) -> Self {
        let mode = match self.mode {
            AlgebraMode::HOnI => AlgebraMode::H2OnI,
            m => m,
        };
        Self {
            mode,
            rows: self
                .rows
                .iter()
                .map(|[a, b]| [a.substitute(Substitution::SquareV), b.substitute(Substitution::SquareV)])
                .collect(),
        }
    }

    /// `γ[α,β] = (A/α, B; Cα, D; E/β, F; Gβ, H)`; on `W` only `α` is used.
    /// Division must be exact.
    pub fn diagonal_equivalent(&self, alpha: &LaurentPoly, beta: &LaurentPoly) -> Result<Self> {
        let mut rows = self.rows.clone();
        rows[0][0] = rows[0][0].exact_div(alpha)?;
        rows[1][0] = &rows[1][0] * alpha;
        if self.mode.on_involutions() {
            rows[2][0] = rows[2][0].exact_div(beta)?;
            rows[3][0] = &rows[3][0] * beta;
        }
        Ok(Self { mode: self.mode, rows })
    }

    /// `γ[α,β]` for `α = an/ad`, `β = bn/bd` in `Q(v)`; every rescaled entry
    /// must lie in `A`.
    pub fn diagonal_equivalent_frac(&self, alpha: (&LaurentPoly, &LaurentPoly), beta: (&LaurentPoly, &LaurentPoly)) -> Result<Self> {
        let (an, ad) = alpha;
        let (bn, bd) = beta;
        let mut rows = self.rows.clone();
        rows[0][0] = (&rows[0][0] * ad).exact_div(an)?;
        rows[1][0] = (&rows[1][0] * an).exact_div(ad)?;
        if self.mode.on_involutions() {
            rows[2][0] = (&rows[2][0] * bd).exact_div(bn)?;
            rows[3][0] = (&rows[3][0] * bn).exact_div(bd)?;
        }
        Ok(Self { mode: self.mode, rows })
    }

    /// `Θ(γ)`: first column `a ↦ −a`, second column `b ↦ q − b` where `q` is
    /// `v − v⁻¹` (resp. `v² − v⁻²`). This mirrors `Θ(H_s) = −H_s + q`.
    pub fn theta_twist(&self) -> Self {
        let q = self.mode.param().q();
        Self {
            mode: self.mode,
            rows: self.rows.iter().map(|[a, b]| [-a, &q - b]).collect(),
        }
    }

    pub fn substitute(&self, kind: Substitution) -> Self {
        Self {
            mode: self.mode,
            rows: self.rows.iter().map(|[a, b]| [a.substitute(kind), b.substitute(kind)]).collect(),
        }
    }
}

impl fmt::Display for StructureMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[")?;
        for (i, [a, b]) in self.rows.iter().enumerate() {
            if i > 0 {
                write!(f, "; ")?;
            }
            write!(f, "{a}, {b}")?;
        }
        write!(f, "]")
    }
}

impl Serialize for StructureMatrix {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        let rows: Vec<[String; 2]> = self.rows.iter().map(|[a, b]| [a.to_string(), b.to_string()]).collect();
        let mut st = serializer.serialize_struct("StructureMatrix", 2)?;
        st.serialize_field("mode", &self.mode)?;
        st.serialize_field("rows", &rows)?;
        st.end()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(s: &str) -> LaurentPoly {
        s.parse().unwrap()
    }

    #[test]
    fn named_constants() {
        assert_eq!(StructureMatrix::gamma().to_string(), "[1, 0; 1, -v^-1 + v; 1, 1; -v^-1 + v, -v^-1 - 1 + v]");
        assert_eq!(StructureMatrix::gamma_triple_prime().get(3, 0), &p("v^-1 - v"));
        assert_eq!(StructureMatrix::delta().get(3, 1), &p("v^2 - 1 - v^-2"));
        assert_eq!(StructureMatrix::delta_prime().get(2, 0), &p("v^-1 + v"));
        assert_eq!(StructureMatrix::delta_double_prime().get(3, 0), &p("v^2 - v^-2"));
        assert_eq!(StructureMatrix::delta_double_prime().mode(), AlgebraMode::H2OnI);
        assert!(StructureMatrix::trivial(AlgebraMode::HOnI, true).is_trivial());
        assert!(!StructureMatrix::gamma().is_trivial());
    }

    #[test]
    fn theta_twist_relates_the_gammas() {
        let m1 = LaurentPoly::constant(-1);
        let g = StructureMatrix::gamma();
        assert_eq!(g.theta_twist().theta_twist(), g);
        assert_eq!(g.theta_twist(), StructureMatrix::gamma_prime().diagonal_equivalent(&m1, &m1).unwrap());
        assert_eq!(
            StructureMatrix::gamma_double_prime().theta_twist(),
            StructureMatrix::gamma_triple_prime().diagonal_equivalent(&m1, &m1).unwrap()
        );
        let d = StructureMatrix::delta();
        assert_eq!(d.theta_twist().theta_twist(), d);
    }

    #[test]
    fn diagonal_equivalence_is_exact() {
        let g = StructureMatrix::gamma();
        let v = LaurentPoly::v_pow(1);
        let e = g.diagonal_equivalent(&v, &LaurentPoly::one()).unwrap();
        assert_eq!(e.get(0, 0), &p("v^-1"));
        assert_eq!(e.get(1, 0), &p("v"));
        assert!(g.diagonal_equivalent(&p("v + 1"), &LaurentPoly::one()).is_err());
        assert!(StructureMatrix::new(AlgebraMode::HOnW, vec![]).is_err());
    }
}
