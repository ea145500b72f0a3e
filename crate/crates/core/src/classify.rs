//! Search for generic structures: enumerate candidate structure matrices,
//! test them on a suite of finite Coxeter systems, and group the
//! pre-canonical survivors into isomorphism classes.

use std::collections::{BTreeMap, VecDeque};
use std::sync::Arc;

use rayon::prelude::*;
use serde::Serialize;

use crate::coxeter::{CoxeterSystem, DiagramAutomorphism, DEFAULT_WORD_CAP};
use crate::error::Result;
use crate::group::CoxeterGroup;
use crate::hecke::{solve_canonical, BarMatrix, CanonicalTable, TableLabel};
use crate::ivmodules::{all_blocks, AlgebraMode, ModuleBasis, Representation, StructureMatrix, Witness};
use crate::laurent::LaurentPoly;

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Candidate {
    pub gamma: StructureMatrix,
    pub provenance: String,
}

impl Candidate {
    pub fn new(gamma: StructureMatrix, provenance: impl Into<String>) -> Self {
        Self { gamma, provenance: provenance.into() }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum CandidateCase {
    /// `AC = EG = 0`.
    BothZero,
    /// `AC ≠ 0`, `EG = 0`.
    LeftNonzero,
    /// `AC = 0`, `EG ≠ 0`.
    RightNonzero,
    /// `Γ…Γ‴`, their squares and `Δ`, `Δ′`.
    ClassifiedFamilies,
}

fn lp(s: &str) -> LaurentPoly {
    s.parse().expect("literal")
}

fn hi(rows: [[LaurentPoly; 2]; 4]) -> StructureMatrix {
    StructureMatrix::new(AlgebraMode::HOnI, rows.to_vec()).expect("shape")
}

fn eigen() -> [LaurentPoly; 2] {
    [lp("v"), lp("-v^-1")]
}

/// The 144 matrices with `A,C,E,G ∈ {0,1}`, `AC = EG = 0` and
/// `B,D,F,H ∈ {−v⁻¹, v}`.
fn both_zero() -> Vec<Candidate> {
    let pairs = [(0, 0), (1, 0), (0, 1)];
    let mut out = Vec::with_capacity(144);
    for &(a, c) in &pairs {
        for &(e, g) in &pairs {
            for bits in 0..16u32 {
                let pick = |k: u32| eigen()[((bits >> k) & 1) as usize].clone();
                let k = |x: i64| LaurentPoly::constant(x);
                let gamma = hi([[k(a), pick(0)], [k(c), pick(1)], [k(e), pick(2)], [k(g), pick(3)]]);
                out.push(Candidate::new(gamma, format!("both zero #{}", out.len())));
            }
        }
    }
    out
}

/// One of the 8 parameter choices `(B, D, F, H)` of the case `AC ≠ 0`,
/// `EG = 0`: `F, H ∈ {−v⁻¹, v}`, `D ∈ {H ± 1}`, `B = v − v⁻¹ − D`, with
/// `A = 1` and `C = −(D−v)(D+v⁻¹)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LeftChoice {
    pub a: LaurentPoly,
    pub b: LaurentPoly,
    pub c: LaurentPoly,
    pub d: LaurentPoly,
    pub f: LaurentPoly,
    pub h: LaurentPoly,
}

pub fn left_nonzero_choices() -> Vec<LeftChoice> {
    let mut out = Vec::new();
    for f in eigen() {
        for h in eigen() {
            for sign in [1i64, -1] {
                let d = &h + &LaurentPoly::constant(sign);
                let b = &LaurentPoly::u() - &d;
                let c = -(&(&d - &lp("v")) * &(&d + &lp("v^-1")));
                out.push(LeftChoice { a: LaurentPoly::one(), b, c, d, f: f.clone(), h: h.clone() });
            }
        }
    }
    out
}

/// Each choice crossed with the normalizations `(E,G) ∈ {(0,0),(1,0),(0,1)}`.
fn left_nonzero() -> Vec<Candidate> {
    let mut out = Vec::new();
    for (i, ch) in left_nonzero_choices().into_iter().enumerate() {
        for (e, g) in [(0, 0), (1, 0), (0, 1)] {
            let gamma = hi([
                [ch.a.clone(), ch.b.clone()],
                [ch.c.clone(), ch.d.clone()],
                [LaurentPoly::constant(e), ch.f.clone()],
                [LaurentPoly::constant(g), ch.h.clone()],
            ]);
            out.push(Candidate::new(gamma, format!("left nonzero #{i} (E,G)=({e},{g})")));
        }
    }
    out
}

/// The mirror case with the roles of the row pairs exchanged.
fn right_nonzero() -> Vec<Candidate> {
    let mut out = Vec::new();
    for (i, ch) in left_nonzero_choices().into_iter().enumerate() {
        for (a, c) in [(0, 0), (1, 0), (0, 1)] {
            let gamma = hi([
                [LaurentPoly::constant(a), ch.f.clone()],
                [LaurentPoly::constant(c), ch.h.clone()],
                [ch.a.clone(), ch.b.clone()],
                [ch.c.clone(), ch.d.clone()],
            ]);
            out.push(Candidate::new(gamma, format!("right nonzero #{i} (A,C)=({a},{c})")));
        }
    }
    out
}

fn named_h() -> Vec<Candidate> {
    vec![
        Candidate::new(StructureMatrix::gamma(), "Γ"),
        Candidate::new(StructureMatrix::gamma_prime(), "Γ′"),
        Candidate::new(StructureMatrix::gamma_double_prime(), "Γ″"),
        Candidate::new(StructureMatrix::gamma_triple_prime(), "Γ‴"),
    ]
}

fn named_h2() -> Vec<Candidate> {
    vec![
        Candidate::new(StructureMatrix::delta(), "Δ"),
        Candidate::new(StructureMatrix::delta_prime(), "Δ′"),
        Candidate::new(StructureMatrix::delta_double_prime(), "Δ″"),
        Candidate::new(StructureMatrix::delta_triple_prime(), "Δ‴"),
    ]
}

pub fn enumerate_candidates(case: CandidateCase) -> Vec<Candidate> {
    match case {
        CandidateCase::BothZero => both_zero(),
        CandidateCase::LeftNonzero => left_nonzero(),
        CandidateCase::RightNonzero => right_nonzero(),
        CandidateCase::ClassifiedFamilies => {
            let mut out = named_h();
            out.extend(named_h().into_iter().map(|c| Candidate::new(c.gamma.square(), format!("[{}]₂", c.provenance))));
            out.push(Candidate::new(StructureMatrix::delta(), "Δ"));
            out.push(Candidate::new(StructureMatrix::delta_prime(), "Δ′"));
            out
        }
    }
}

/// Units `±vⁿ` with `|n| ≤ span`, `1` first.
fn units(span: i32) -> Vec<LaurentPoly> {
    let mut out = vec![LaurentPoly::one(), LaurentPoly::constant(-1)];
    for n in 1..=span {
        for e in [n, -n] {
            out.push(LaurentPoly::v_pow(e));
            out.push(LaurentPoly::monomial(-1, e));
        }
    }
    out
}

const UNIT_SPAN: i32 = 2;

/// Candidate values of `γ₃₁` relative to a base with `γ₃₁ = 1`.
fn third_row_factors(mode: AlgebraMode) -> Vec<LaurentPoly> {
    let mut base = vec![LaurentPoly::one(), LaurentPoly::v_plus_vinv(), LaurentPoly::u()];
    if mode == AlgebraMode::H2OnI {
        base.push(lp("v^2 - v^-2"));
    }
    let mut out = Vec::new();
    for c in base {
        for u in units(UNIT_SPAN) {
            out.push(&c * &u);
        }
    }
    out
}

fn push_unique(out: &mut Vec<Candidate>, c: Candidate) {
    if !c.gamma.is_trivial() && !out.iter().any(|o| o.gamma == c.gamma) {
        out.push(c);
    }
}

/// The families searched by a classification run: named structures first,
/// then diagonal rescalings by units (and, on `I`, by the admissible
/// values of `γ₃₁`), then `Θ`-twists, without duplicates.
pub fn classification_candidates(mode: AlgebraMode) -> Vec<Candidate> {
    let mut out = Vec::new();
    match mode {
        AlgebraMode::HOnW => {
            let forms = [
                ("[[α,0],[α⁻¹,u]]", LaurentPoly::zero(), LaurentPoly::u()),
                ("[[α,u],[α⁻¹,0]]", LaurentPoly::u(), LaurentPoly::zero()),
            ];
            push_unique(&mut out, Candidate::new(StructureMatrix::kl(), "KL"));
            for (tag, b, d) in forms {
                let base = StructureMatrix::new(mode, vec![[LaurentPoly::one(), b], [LaurentPoly::one(), d]]).expect("shape");
                for a in units(UNIT_SPAN) {
                    let g = base.diagonal_equivalent(&a, &LaurentPoly::one()).expect("unit");
                    push_unique(&mut out, Candidate::new(g, format!("{tag} α={a}")));
                }
            }
        }
        AlgebraMode::HOnI | AlgebraMode::H2OnI => {
            let (named, bases): (Vec<Candidate>, Vec<Candidate>) = if mode == AlgebraMode::HOnI {
                (named_h(), named_h())
            } else {
                let sq = named_h().into_iter().map(|c| Candidate::new(c.gamma.square(), format!("[{}]₂", c.provenance)));
                (named_h2(), sq.collect())
            };
            for c in named {
                push_unique(&mut out, c);
            }
            let one = LaurentPoly::one();
            for base in &bases {
                for a in units(UNIT_SPAN) {
                    for e in third_row_factors(mode) {
                        if let Ok(g) = base.gamma.diagonal_equivalent_frac((&a, &one), (&one, &e)) {
                            push_unique(&mut out, Candidate::new(g, format!("{}[α={a}, γ₃₁={e}]", base.provenance)));
                        }
                    }
                }
            }
            let twisted: Vec<Candidate> =
                out.iter().map(|c| Candidate::new(c.gamma.theta_twist(), format!("Θ({})", c.provenance))).collect();
            for c in twisted {
                push_unique(&mut out, c);
            }
        }
    }
    out
}

/// The systems used by the classification: `I2(2..6)`, `A3`, `B3`, `H3`.
pub fn default_systems() -> Vec<CoxeterSystem> {
    ["I2(2)", "I2(3)", "I2(4)", "I2(5)", "I2(6)", "A3", "B3", "H3"]
        .iter()
        .map(|s| CoxeterSystem::parse(s).expect("builtin system"))
        .collect()
}

/// Prebuilt bases for one algebra mode: every `θ`-block of `I` (or the
/// regular basis of `W`) of every system.
#[derive(Debug, Clone)]
pub struct Suite {
    mode: AlgebraMode,
    systems: Vec<String>,
    bases: Vec<ModuleBasis>,
}

impl Suite {
    pub fn new(mode: AlgebraMode, systems: &[CoxeterSystem]) -> Result<Self> {
        let mut bases = Vec::new();
        for sys in systems {
            let group = Arc::new(CoxeterGroup::finite(sys, DEFAULT_WORD_CAP)?);
            if mode.on_involutions() {
                bases.extend(all_blocks(&group)?);
            } else {
                bases.push(ModuleBasis::regular(group)?);
            }
        }
        Ok(Self { mode, systems: systems.iter().map(|s| s.name()).collect(), bases })
    }

    pub fn mode(&self) -> AlgebraMode {
        self.mode
    }

    pub fn systems(&self) -> &[String] {
        &self.systems
    }

    pub fn bases(&self) -> &[ModuleBasis] {
        &self.bases
    }

    /// Quadratic and braid relations on every basis.
    pub fn check_representation(&self, gamma: &StructureMatrix) -> std::result::Result<(), Witness> {
        for b in &self.bases {
            check_representation(gamma, b)?;
        }
        Ok(())
    }

    /// The bar matrix on every basis, in suite order.
    pub fn precanonical(&self, gamma: &StructureMatrix) -> std::result::Result<Vec<BarMatrix>, Witness> {
        self.bases.iter().map(|b| precanonical_test(gamma, b)).collect()
    }
}

fn mode_witness(basis: &ModuleBasis, gamma: &StructureMatrix) -> Witness {
    Witness {
        system: basis.system_name(),
        theta: basis.theta().map_or("-".to_string(), |t| t.to_string()),
        check: format!("mode {} does not match the basis", gamma.mode().as_str()),
        generator: None,
        element: String::new(),
    }
}

pub fn check_representation(gamma: &StructureMatrix, basis: &ModuleBasis) -> std::result::Result<(), Witness> {
    let rep = Representation::new(basis, gamma).map_err(|_| mode_witness(basis, gamma))?;
    rep.check_representation()
}

/// Representation check followed by the construction of `ψ`.
pub fn precanonical_test(gamma: &StructureMatrix, basis: &ModuleBasis) -> std::result::Result<BarMatrix, Witness> {
    let rep = Representation::new(basis, gamma).map_err(|_| mode_witness(basis, gamma))?;
    rep.check_representation()?;
    rep.precanonical_test()
}

/// `ε ∈ {id, v ↦ −v}`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Epsilon {
    Identity,
    NegateV,
}

impl Epsilon {
    pub const ALL: [Epsilon; 2] = [Epsilon::Identity, Epsilon::NegateV];

    fn negates(self) -> bool {
        self == Epsilon::NegateV
    }
}

/// Diagonal scaling of the standard basis.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Scaling {
    Identity,
    /// `w ↦ (−1)^{ρ(w)} w`.
    RhoParity,
    Signs(Vec<i64>),
}

impl Scaling {
    pub fn signs(&self, basis: &ModuleBasis) -> Vec<i64> {
        match self {
            Scaling::Identity => vec![1; basis.len()],
            Scaling::RhoParity => (0..basis.len()).map(|i| if basis.grade(i) % 2 == 0 { 1 } else { -1 }).collect(),
            Scaling::Signs(s) => s.clone(),
        }
    }
}

/// Entry `(x,w)` of the image is `d_x d_w ε(entry)`.
pub fn transport_basis(table: &CanonicalTable, basis: &ModuleBasis, d: &Scaling, eps: Epsilon) -> CanonicalTable {
    table.transport(&d.signs(basis), eps.negates())
}

/// Signs `d` with `target_{x,y} = d_x d_y ε(source_{x,y})` for every entry,
/// found by propagating along nonzero off-diagonal entries.
pub fn relating_signs(source: &BarMatrix, target: &BarMatrix, eps: Epsilon) -> Option<Vec<i64>> {
    let n = source.len();
    if target.len() != n {
        return None;
    }
    let src = source.transport(&vec![1; n], eps.negates());
    let mut adj: Vec<Vec<(usize, i64)>> = vec![Vec::new(); n];
    for y in 0..n {
        let (a, b) = (src.column(y), target.column(y));
        if a.support().ne(b.support()) {
            return None;
        }
        for (x, c) in a.iter() {
            if x == y {
                continue;
            }
            let t = b.get(x);
            let r = if &t == c {
                1
            } else if t == -c {
                -1
            } else {
                return None;
            };
            adj[x].push((y, r));
            adj[y].push((x, r));
        }
    }
    let mut d = vec![0i64; n];
    for root in 0..n {
        if d[root] != 0 {
            continue;
        }
        d[root] = 1;
        let mut queue = VecDeque::from([root]);
        while let Some(x) = queue.pop_front() {
            for &(y, r) in &adj[x] {
                let want = d[x] * r;
                if d[y] == 0 {
                    d[y] = want;
                    queue.push_back(y);
                } else if d[y] != want {
                    return None;
                }
            }
        }
    }
    (src.transport(&d, false) == *target).then_some(d)
}

/// A way to relate two survivors on every basis of a suite.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Relation {
    pub epsilon: Epsilon,
    pub signs: Vec<Vec<i64>>,
}

/// Bars and canonical tables of one survivor across the suite.
#[derive(Debug, Clone)]
pub struct SurvivorData {
    pub bars: Vec<BarMatrix>,
    pub tables: Vec<CanonicalTable>,
}

impl SurvivorData {
    pub fn new(suite: &Suite, bars: Vec<BarMatrix>) -> Result<Self> {
        let tables = suite
            .bases()
            .iter()
            .zip(&bars)
            .map(|(b, bar)| solve_canonical(b.poset(), bar, TableLabel::Generic))
            .collect::<Result<_>>()?;
        Ok(Self { bars, tables })
    }
}

/// An isomorphism on every basis: bar matrices related by `d_x d_y ε(·)`,
/// and canonical tables related by the same transport.
pub fn isomorphism(a: &SurvivorData, b: &SurvivorData) -> Option<Relation> {
    'eps: for eps in Epsilon::ALL {
        let mut signs = Vec::with_capacity(a.bars.len());
        for k in 0..a.bars.len() {
            let Some(d) = relating_signs(&a.bars[k], &b.bars[k], eps) else { continue 'eps };
            if a.tables[k].transport(&d, eps.negates()).columns() != b.tables[k].columns() {
                continue 'eps;
            }
            signs.push(d);
        }
        return Some(Relation { epsilon: eps, signs });
    }
    None
}

#[derive(Debug, Clone, Serialize)]
pub struct Failure {
    pub candidate: Candidate,
    pub witness: Witness,
}

#[derive(Debug, Clone, Serialize)]
pub struct IsoClass {
    pub representative: Candidate,
    /// Provenance of each member and the `ε` relating it to the representative.
    pub members: Vec<(String, Epsilon)>,
}

#[derive(Debug, Clone, Serialize)]
pub struct ClassReport {
    pub mode: AlgebraMode,
    pub systems: Vec<String>,
    pub candidates: usize,
    pub survivors: Vec<Candidate>,
    pub failures: Vec<Failure>,
    pub classes: Vec<IsoClass>,
}

impl ClassReport {
    pub fn class_names(&self) -> Vec<&str> {
        self.classes.iter().map(|c| c.representative.provenance.as_str()).collect()
    }
}

/// Test every candidate on the suite (in parallel), then group the survivors
/// greedily: each joins the first class whose representative it is
/// isomorphic to.
pub fn run_candidates(suite: &Suite, candidates: Vec<Candidate>) -> Result<ClassReport> {
    let outcomes: Vec<std::result::Result<Vec<BarMatrix>, Witness>> =
        candidates.par_iter().map(|c| suite.precanonical(&c.gamma)).collect();
    let mut survivors = Vec::new();
    let mut bars = Vec::new();
    let mut failures = Vec::new();
    for (c, o) in candidates.iter().zip(outcomes) {
        match o {
            Ok(b) => {
                survivors.push(c.clone());
                bars.push(b);
            }
            Err(witness) => failures.push(Failure { candidate: c.clone(), witness }),
        }
    }
    let data: Vec<SurvivorData> = bars.into_par_iter().map(|b| SurvivorData::new(suite, b)).collect::<Result<_>>()?;
    let mut reps: Vec<usize> = Vec::new();
    let mut members: BTreeMap<usize, Vec<(String, Epsilon)>> = BTreeMap::new();
    for (i, d) in data.iter().enumerate() {
        match reps.iter().find_map(|&r| isomorphism(&data[r], d).map(|rel| (r, rel.epsilon))) {
            Some((r, eps)) => members.entry(r).or_default().push((survivors[i].provenance.clone(), eps)),
            None => {
                reps.push(i);
                members.entry(i).or_default().push((survivors[i].provenance.clone(), Epsilon::Identity));
            }
        }
    }
    let classes = reps
        .iter()
        .map(|&r| IsoClass { representative: survivors[r].clone(), members: members.remove(&r).unwrap_or_default() })
        .collect();
    Ok(ClassReport {
        mode: suite.mode(),
        systems: suite.systems().to_vec(),
        candidates: candidates.len(),
        survivors,
        failures,
        classes,
    })
}

pub fn classification_run(mode: AlgebraMode, systems: &[CoxeterSystem]) -> Result<ClassReport> {
    let suite = Suite::new(mode, systems)?;
    run_candidates(&suite, classification_candidates(mode))
}

/// Survivors of a raw enumeration case under the representation check alone.
pub fn representation_survivors(suite: &Suite, candidates: &[Candidate]) -> Vec<Candidate> {
    candidates.par_iter().filter(|c| suite.check_representation(&c.gamma).is_ok()).cloned().collect()
}

/// The identities forced on a structure `(A,B; C,D; E,F; G,H)` on `I` by
/// the quadratic and braid relations, with `(a, b)` the two eigenvalues:
/// `(B−a)(B−b) = (D−a)(D−b) = −AC`, the same for `F, H` with `−EG`;
/// if `A` or `C ≠ 0` then `B+D = a+b` and `D−H = ±1`; if `E` or `G ≠ 0`
/// then `F+H = a+b` and `B−F = ±1`; if all four are nonzero then
/// `B ∈ {0, a+b}`. Returns the first identity that fails.
pub fn structure_identities(gamma: &StructureMatrix) -> std::result::Result<(), &'static str> {
    if !gamma.mode().on_involutions() {
        return Ok(());
    }
    let (ra, rb) = gamma.mode().param().roots();
    let g = |r: usize, c: usize| gamma.get(r, c).clone();
    let (a, b, c, d, e, f, gg, h) = (g(0, 0), g(0, 1), g(1, 0), g(1, 1), g(2, 0), g(2, 1), g(3, 0), g(3, 1));
    let quad = |x: &LaurentPoly| &(x - &ra) * &(x - &rb);
    let sum = &ra + &rb;
    let unit_gap = |x: &LaurentPoly, y: &LaurentPoly| {
        let t = x - y;
        t == LaurentPoly::one() || t == LaurentPoly::constant(-1)
    };
    let ac = -(&a * &c);
    let eg = -(&e * &gg);
    if quad(&b) != ac || quad(&d) != ac {
        return Err("(B-a)(B-b) = (D-a)(D-b) = -AC");
    }
    if quad(&f) != eg || quad(&h) != eg {
        return Err("(F-a)(F-b) = (H-a)(H-b) = -EG");
    }
    let left = !a.is_zero() || !c.is_zero();
    let right = !e.is_zero() || !gg.is_zero();
    if left && (&b + &d != sum || !unit_gap(&d, &h)) {
        return Err("B+D = a+b and D-H = ±1");
    }
    if right && (&f + &h != sum || !unit_gap(&b, &f)) {
        return Err("F+H = a+b and B-F = ±1");
    }
    if [&a, &c, &e, &gg].iter().all(|x| !x.is_zero()) && !(b.is_zero() || b == sum) {
        return Err("B ∈ {0, a+b}");
    }
    Ok(())
}

/// Theta-block automorphisms present in a suite, for reporting.
pub fn suite_thetas(suite: &Suite) -> Vec<(String, Option<DiagramAutomorphism>)> {
    suite.bases().iter().map(|b| (b.system_name(), b.theta().cloned())).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ivmodules::{bar_module, canonical_table, Which};
    use proptest::prelude::*;
    use std::sync::OnceLock;

    fn suite(mode: AlgebraMode) -> &'static Suite {
        static HI: OnceLock<Suite> = OnceLock::new();
        static H2I: OnceLock<Suite> = OnceLock::new();
        static HW: OnceLock<Suite> = OnceLock::new();
        let cell = match mode {
            AlgebraMode::HOnI => &HI,
            AlgebraMode::H2OnI => &H2I,
            AlgebraMode::HOnW => &HW,
        };
        cell.get_or_init(|| Suite::new(mode, &default_systems()).unwrap())
    }

    fn small(name: &str) -> Vec<ModuleBasis> {
        let g = Arc::new(CoxeterGroup::finite(&CoxeterSystem::parse(name).unwrap(), 64).unwrap());
        all_blocks(&g).unwrap()
    }

    #[test]
    fn enumeration_counts() {
        assert_eq!(enumerate_candidates(CandidateCase::BothZero).len(), 144);
        assert_eq!(left_nonzero_choices().len(), 8);
        assert!(left_nonzero_choices().iter().all(|c| !c.c.is_zero()));
        assert_eq!(enumerate_candidates(CandidateCase::LeftNonzero).len(), 24);
        assert_eq!(enumerate_candidates(CandidateCase::RightNonzero).len(), 24);
        let fam = enumerate_candidates(CandidateCase::ClassifiedFamilies);
        assert!(fam.iter().any(|c| c.gamma == StructureMatrix::gamma().square()));
        assert!(fam.iter().any(|c| c.gamma == StructureMatrix::delta()));
    }

    #[test]
    fn spot_checks_on_a2() {
        let blocks = small("A2");
        let id = &blocks[0];
        assert!(check_representation(&StructureMatrix::gamma(), id).is_ok());
        assert!(check_representation(&StructureMatrix::trivial(AlgebraMode::HOnI, true), id).is_ok());
        let v = lp("v");
        let bad = hi([[lp("1"), v.clone()], [lp("0"), v.clone()], [lp("1"), v.clone()], [lp("0"), v]]);
        assert!(blocks.iter().any(|b| check_representation(&bad, b).is_err()));
        assert_eq!(precanonical_test(&StructureMatrix::gamma(), id).unwrap(), bar_module(id, Which::I).unwrap());
        assert_eq!(precanonical_test(&StructureMatrix::delta(), id).unwrap(), bar_module(id, Which::L).unwrap());
    }

    #[test]
    fn both_zero_leaves_only_trivial() {
        let s = suite(AlgebraMode::HOnI);
        let surv = representation_survivors(s, &enumerate_candidates(CandidateCase::BothZero));
        assert_eq!(surv.len(), 2);
        assert!(surv.iter().all(|c| c.gamma.is_trivial()));
        for c in &surv {
            assert_eq!(structure_identities(&c.gamma), Ok(()));
        }
    }

    #[test]
    fn mixed_cases_have_no_survivors() {
        let s = suite(AlgebraMode::HOnI);
        assert!(representation_survivors(s, &enumerate_candidates(CandidateCase::LeftNonzero)).is_empty());
        assert!(representation_survivors(s, &enumerate_candidates(CandidateCase::RightNonzero)).is_empty());
    }

    #[test]
    fn sixteen_in_one_class() {
        let r = run_candidates(suite(AlgebraMode::HOnI), classification_candidates(AlgebraMode::HOnI)).unwrap();
        assert_eq!(r.survivors.len(), 16, "{:?}", r.survivors);
        assert_eq!(r.class_names(), ["Γ"]);
        for c in named_h() {
            assert!(r.survivors.contains(&c));
        }
        for c in &r.survivors {
            assert_eq!(structure_identities(&c.gamma), Ok(()));
        }
    }

    #[test]
    fn thirty_two_in_four_classes() {
        let r = run_candidates(suite(AlgebraMode::H2OnI), classification_candidates(AlgebraMode::H2OnI)).unwrap();
        assert_eq!(r.survivors.len(), 32);
        assert_eq!(r.class_names(), ["Δ", "Δ′", "Δ″", "Δ‴"]);
        assert!(r.classes.iter().all(|c| c.members.len() == 8));
        for c in &r.survivors {
            assert!(r.survivors.iter().any(|o| o.gamma == c.gamma.theta_twist()));
        }
        for f in &r.failures {
            assert!(r.failures.iter().any(|o| o.candidate.gamma == f.candidate.gamma.theta_twist()));
        }
        for c in &r.survivors {
            assert_eq!(structure_identities(&c.gamma), Ok(()));
        }
    }

    #[test]
    fn four_on_w() {
        let r = run_candidates(suite(AlgebraMode::HOnW), classification_candidates(AlgebraMode::HOnW)).unwrap();
        assert_eq!(r.survivors.len(), 4);
        assert_eq!(r.class_names(), ["KL"]);
    }

    #[test]
    fn diagonal_sign_flip_is_rho_parity_transport() {
        let m = LaurentPoly::constant(-1);
        for name in ["A2", "B2", "A3"] {
            for b in small(name) {
                for g in [StructureMatrix::gamma(), StructureMatrix::gamma_double_prime(), StructureMatrix::delta()] {
                    let flipped = g.diagonal_equivalent(&m, &m).unwrap();
                    let t = solve_canonical(b.poset(), &precanonical_test(&g, &b).unwrap(), TableLabel::Generic).unwrap();
                    let tf = solve_canonical(b.poset(), &precanonical_test(&flipped, &b).unwrap(), TableLabel::Generic).unwrap();
                    assert_eq!(transport_basis(&t, &b, &Scaling::RhoParity, Epsilon::Identity).columns(), tf.columns());
                }
            }
        }
    }

    #[test]
    fn theta_twist_keeps_the_bar_involution() {
        for b in small("B3") {
            for g in [StructureMatrix::gamma(), StructureMatrix::delta(), StructureMatrix::delta_prime()] {
                assert_eq!(precanonical_test(&g, &b).unwrap(), precanonical_test(&g.theta_twist(), &b).unwrap());
            }
        }
    }

    #[test]
    fn iota_table_sign_rule_on_a1() {
        let b = small("A1").remove(0);
        let t = canonical_table(&b, Which::I).unwrap();
        assert_eq!(transport_basis(&t, &b, &Scaling::Identity, Epsilon::Identity).columns(), t.columns());
        let moved = transport_basis(&t, &b, &Scaling::RhoParity, Epsilon::Identity);
        assert_eq!(moved.get(0, 1), lp("-v^-1"));
    }

    #[test]
    fn delta_double_and_triple_prime_unrelated_on_b3() {
        for b in small("B3") {
            let t2 = SurvivorData::new(
                &Suite { mode: AlgebraMode::H2OnI, systems: vec![], bases: vec![b.clone()] },
                vec![precanonical_test(&StructureMatrix::delta_double_prime(), &b).unwrap()],
            )
            .unwrap();
            let t3 = SurvivorData::new(
                &Suite { mode: AlgebraMode::H2OnI, systems: vec![], bases: vec![b.clone()] },
                vec![precanonical_test(&StructureMatrix::delta_triple_prime(), &b).unwrap()],
            )
            .unwrap();
            assert!(isomorphism(&t2, &t3).is_none());
        }
    }

    proptest! {
        #[test]
        fn theta_is_an_involution(idx in 0usize..200, mode in prop_oneof![Just(AlgebraMode::HOnI), Just(AlgebraMode::H2OnI), Just(AlgebraMode::HOnW)]) {
            let all = classification_candidates(mode);
            let c = &all[idx % all.len()];
            prop_assert_eq!(c.gamma.theta_twist().theta_twist(), c.gamma.clone());
        }
    }
}
