//! Oracle checks on the canonical tables: μ-data and recurrences, degree
//! bounds and congruences, the inversion formula and the embedding of `H`.

use std::collections::BTreeMap;
use std::sync::Arc;

use serde::Serialize;

use super::{all_blocks, canonical_table, ModuleBasis, ModuleElt, Representation, StructureMatrix, Which};
use crate::coxeter::{CoxeterSystem, DiagramAutomorphism};
use crate::error::{Error, Result};
use crate::group::CoxeterGroup;
use crate::hecke::{solve_canonical, solve_canonical_with, BarMatrix, CanonicalTable, HeckeAlgebra, ParamMode, TableLabel, TieBreak};
use crate::laurent::LaurentPoly;

/// Coefficients of `v⁻¹` (and for `π′` the auxiliary `μ″`) of a table.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct MuData {
    pub mu: BTreeMap<(usize, usize), i64>,
    pub mu2: BTreeMap<(usize, usize), LaurentPoly>,
}

impl MuData {
    pub fn mu(&self, y: usize, w: usize) -> i64 {
        self.mu.get(&(y, w)).copied().unwrap_or(0)
    }

    pub fn mu2(&self, y: usize, w: usize) -> LaurentPoly {
        self.mu2.get(&(y, w)).cloned().unwrap_or_default()
    }
}

/// `μ(y,w)` = coefficient of `v⁻¹`; `μ″(y,w)` = coefficient of `v⁻²` plus
/// `(v+v⁻¹)μ(y,w)`.
pub fn mu_data(table: &CanonicalTable) -> MuData {
    let mut out = MuData::default();
    let vv = LaurentPoly::v_plus_vinv();
    for w in 0..table.len() {
        for (y, p) in table.column(w).iter() {
            if y == w {
                continue;
            }
            let m = p.coeff(-1);
            if m != 0 {
                out.mu.insert((y, w), m);
            }
            let m2 = LaurentPoly::constant(p.coeff(-2)) + vv.scale(m);
            if !m2.is_zero() {
                out.mu2.insert((y, w), m2);
            }
        }
    }
    out
}

/// One named check: how many instances were examined, how many failed and
/// the first few failing instances.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CheckOutcome {
    pub name: String,
    pub checked: usize,
    pub failed: usize,
    pub witnesses: Vec<String>,
}

const MAX_WITNESSES: usize = 16;

impl CheckOutcome {
    pub fn new(name: impl Into<String>) -> Self {
        Self { name: name.into(), checked: 0, failed: 0, witnesses: Vec::new() }
    }

    pub fn record(&mut self, ok: bool, witness: impl FnOnce() -> String) {
        self.checked += 1;
        if !ok {
            self.failed += 1;
            if self.witnesses.len() < MAX_WITNESSES {
                self.witnesses.push(witness());
            }
        }
    }

    pub fn merge(&mut self, other: CheckOutcome) {
        self.checked += other.checked;
        self.failed += other.failed;
        for w in other.witnesses {
            if self.witnesses.len() < MAX_WITNESSES {
                self.witnesses.push(w);
            }
        }
    }

    pub fn passed(&self) -> bool {
        self.failed == 0
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Report {
    pub system: String,
    pub theta: String,
    pub checks: Vec<CheckOutcome>,
    /// Observations that are reported but not asserted.
    pub observations: Vec<CheckOutcome>,
}

impl Report {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(CheckOutcome::passed)
    }

    pub fn check(&self, name: &str) -> Option<&CheckOutcome> {
        self.checks.iter().find(|c| c.name == name)
    }
}

fn theta_label(basis: &ModuleBasis) -> String {
    basis.theta().map_or("-".to_string(), |t| t.to_string())
}

/// Properties every computed structure must have: `ψ² = 1`, compatibility
/// with the action, unitriangularity, a normalized bar-invariant table, and
/// agreement of the solver under two different tie-breaks.
pub fn structural_suite(basis: &ModuleBasis, gamma: &StructureMatrix, bar: &BarMatrix, label: TableLabel) -> Result<Report> {
    let rep = Representation::new(basis, gamma)?;
    let mut inv = CheckOutcome::new("psi^2 = 1");
    let involution = bar.check_involution();
    inv.record(involution.is_ok(), || format!("column {}", basis.label(involution.unwrap_err())));
    let mut compat = CheckOutcome::new("compatibility");
    for i in 0..basis.len() {
        for s in 0..basis.rank() {
            let ok = bar.apply(&rep.act_basis(s, i)) == rep.bar_op(s, bar.column(i));
            compat.record(ok, || format!("s = {s}, element {}", basis.label(i)));
        }
    }
    let mut tri = CheckOutcome::new("unitriangularity");
    let t = bar.check_unitriangular(basis.poset());
    tri.record(t.is_ok(), || format!("{t:?}"));
    let table = solve_canonical(basis.poset(), bar, label)?;
    let mut canon = CheckOutcome::new("canonical table");
    let c = table.check_normalized().and_then(|_| table.check_bar_invariant(bar));
    canon.record(c.is_ok(), || format!("{c:?}"));
    let mut order = CheckOutcome::new("solver order independence");
    let other = solve_canonical_with(basis.poset(), bar, label, TieBreak::SmallestMaximal)?;
    for w in 0..basis.len() {
        order.record(other.column(w) == table.column(w), || format!("column {}", basis.label(w)));
    }
    Ok(Report {
        system: basis.system_name(),
        theta: theta_label(basis),
        checks: vec![inv, compat, tri, canon, order],
        observations: Vec::new(),
    })
}

/// `μ′(s,y,w)` for the `L′` table.
fn mu_prime_s(basis: &ModuleBasis, md: &MuData, s: usize, y: usize, w: usize) -> LaurentPoly {
    let mut out = LaurentPoly::zero();
    if basis.is_descent(s, y) {
        out += md.mu2(y, w);
    }
    if basis.is_commuting(s, y) {
        let sy = basis.step(s, y);
        let dl = basis.length(y) as i64 - basis.length(sy) as i64;
        out += LaurentPoly::constant(dl * md.mu(sy, w));
    }
    let mut sum = 0i64;
    for z in 0..basis.len() {
        if basis.is_descent(s, z) && basis.poset().lt(y, z) && basis.poset().lt(z, w) {
            sum += md.mu(y, z) * md.mu(z, w);
        }
    }
    out - LaurentPoly::constant(sum)
}

/// `ν(s,y,w)` for the `ι` table.
fn nu(basis: &ModuleBasis, md: &MuData, s: usize, y: usize, w: usize) -> i64 {
    if basis.is_descent(s, y) {
        md.mu(y, w)
    } else if basis.is_commuting(s, y) {
        md.mu(basis.step(s, y), w)
    } else {
        0
    }
}

/// Expands `underline K_s · underline L′_w`, `underline H_s · underline I_w`
/// and `underline K_s · underline L_w` with the module action and compares them with
/// the recurrence right-hand sides built from μ-data.
pub fn recurrence_check(basis: &ModuleBasis) -> Result<Report> {
    let mut checks = Vec::new();
    let v_m2 = LaurentPoly::v_pow(-2);
    let v_m1 = LaurentPoly::v_pow(-1);

    let pp = canonical_table(basis, Which::LPrime)?;
    let md = mu_data(&pp);
    let dp = Which::LPrime.structure();
    let rep = Representation::new(basis, &dp)?;
    let mut out = CheckOutcome::new("L' recurrence");
    for w in 0..basis.len() {
        for s in (0..basis.rank()).filter(|&s| !basis.is_descent(s, w)) {
            let mut lhs = rep.act_gen(s, pp.column(w));
            lhs.add_scaled(pp.column(w), &v_m2);
            let top = basis.step(s, w);
            let mut rhs = ModuleElt::new();
            if basis.is_commuting(s, w) {
                rhs.add_scaled(pp.column(top), &LaurentPoly::v_plus_vinv());
                rhs.add_scaled(pp.column(w), &LaurentPoly::constant(-1));
                for y in (0..basis.len()).filter(|&y| basis.poset().lt(y, top)) {
                    let c = mu_prime_s(basis, &md, s, y, w) - LaurentPoly::constant(md.mu(y, top));
                    rhs.add_scaled(pp.column(y), &c);
                }
            } else {
                rhs.add_scaled(pp.column(top), &LaurentPoly::one());
                for y in (0..basis.len()).filter(|&y| basis.poset().lt(y, top)) {
                    rhs.add_scaled(pp.column(y), &mu_prime_s(basis, &md, s, y, w));
                }
            }
            out.record(lhs == rhs, || format!("s={s}, w={}", basis.label(w)));
        }
    }
    checks.push(out);

    let it = canonical_table(basis, Which::I)?;
    let md = mu_data(&it);
    let g = Which::I.structure();
    let rep = Representation::new(basis, &g)?;
    let mut out = CheckOutcome::new("iota recurrence");
    for w in 0..basis.len() {
        for s in (0..basis.rank()).filter(|&s| !basis.is_descent(s, w)) {
            let mut lhs = rep.act_gen(s, it.column(w));
            lhs.add_scaled(it.column(w), &v_m1);
            let mut rhs = it.column(basis.step(s, w)).clone();
            if basis.is_commuting(s, w) {
                rhs.add_scaled(it.column(w), &LaurentPoly::one());
            }
            for y in (0..basis.len()).filter(|&y| basis.poset().lt(y, w)) {
                rhs.add_scaled(it.column(y), &LaurentPoly::constant(nu(basis, &md, s, y, w)));
            }
            out.record(lhs == rhs, || format!("s={s}, w={}", basis.label(w)));
        }
    }
    checks.push(out);

    let pt = canonical_table(basis, Which::L)?;
    let d = Which::L.structure();
    let rep = Representation::new(basis, &d)?;
    let eig = LaurentPoly::from_terms([(-2, 1), (2, 1)]);
    let mut out = CheckOutcome::new("L eigenvalue");
    for w in 0..basis.len() {
        for s in (0..basis.rank()).filter(|&s| basis.is_descent(s, w)) {
            let mut lhs = rep.act_gen(s, pt.column(w));
            lhs.add_scaled(pt.column(w), &v_m2);
            out.record(lhs == pt.column(w).scaled(&eig), || format!("s={s}, w={}", basis.label(w)));
        }
    }
    checks.push(out);

    Ok(Report {
        system: basis.system_name(),
        theta: theta_label(basis),
        checks,
        observations: Vec::new(),
    })
}

/// Canonical tables `h` (on `W`), `π`, `π′`, `ι` for one block, computed once.
pub struct BlockTables {
    pub basis: ModuleBasis,
    pub h: CanonicalTable,
    pub pi: CanonicalTable,
    pub pi_prime: CanonicalTable,
    pub iota: CanonicalTable,
}

impl BlockTables {
    pub fn new(basis: ModuleBasis, kl: &CanonicalTable) -> Result<Self> {
        Ok(Self {
            pi: canonical_table(&basis, Which::L)?,
            pi_prime: canonical_table(&basis, Which::LPrime)?,
            iota: canonical_table(&basis, Which::I)?,
            h: kl.clone(),
            basis,
        })
    }

    /// `h_{y,w}` for `y, w ∈ I`: the KL polynomial of the `W`-components.
    pub fn h(&self, y: usize, w: usize) -> LaurentPoly {
        self.h.get(self.basis.group_index(y), self.basis.group_index(w))
    }
}

fn halves_in_z_vinv(a: &LaurentPoly, b: &LaurentPoly) -> (bool, bool) {
    let plus = (a + b).halve();
    let minus = (a - b).halve();
    let ok = |h: &Option<LaurentPoly>| h.as_ref().is_some_and(|p| p.in_z_vinv());
    let nonneg = plus.as_ref().is_some_and(|p| p.is_nonnegative()) && minus.as_ref().is_some_and(|p| p.is_nonnegative());
    (ok(&plus) && ok(&minus), nonneg)
}

const DIHEDRAL_IOTA: [&[(i32, i64)]; 5] = [&[], &[(0, 1)], &[(0, 1), (1, 1)], &[(0, 1), (1, -1)], &[(0, 1), (2, -1)]];

/// Degree bounds, congruences and half-sum integrality for every pair of the
/// block. For rank-two systems also the dihedral value sets.
pub fn invariant_suite(t: &BlockTables) -> Report {
    let b = &t.basis;
    let g = b.group();
    let n = b.len();
    let mut deg_h = CheckOutcome::new("h degree bound");
    let mut deg_pi = CheckOutcome::new("pi degree bound");
    let mut deg_pp = CheckOutcome::new("pi' degree bound");
    let mut deg_iota = CheckOutcome::new("iota degree bound");
    let mut congr = CheckOutcome::new("mod 2 congruence");
    let mut half_h_pi = CheckOutcome::new("(h+-pi)/2 integral");
    let mut half_h_pp = CheckOutcome::new("(h+-pi')/2 integral");
    let mut half_pi_pp = CheckOutcome::new("(pi+-pi')/2 integral");
    let mut dihedral = CheckOutcome::new("dihedral values");
    let mut nonneg_h_pi = CheckOutcome::new("(h+-pi)/2 nonnegative");
    let mut nonneg_h_pp = CheckOutcome::new("(h+-pi')/2 nonnegative");
    let mut nonneg_pi_pp = CheckOutcome::new("(pi+-pi')/2 nonnegative");

    for w in 0..g.len() {
        for (y, p) in t.h.column(w).iter() {
            let d = (g.length(w) - g.length(y)) as i32;
            deg_h.record(p.shift(d).in_one_plus_v2_z_v2(), || format!("y={}, w={}", g.word(y).len(), w));
        }
    }
    let rank_two = g.rank() == 2;
    let iota_values: Vec<LaurentPoly> = DIHEDRAL_IOTA.iter().map(|ts| LaurentPoly::from_terms(ts.iter().copied())).collect();
    for w in 0..n {
        for y in 0..n {
            let lbl = || format!("y={}, w={}", b.label(y), b.label(w));
            let (h, pi, pp, io) = (t.h(y, w), t.pi.get(y, w), t.pi_prime.get(y, w), t.iota.get(y, w));
            if b.poset().leq(y, w) {
                let dl = (b.length(w) - b.length(y)) as i32;
                let dr = (b.grade(w) - b.grade(y)) as i32;
                deg_pi.record(pi.shift(dl).in_one_plus_v2_z_v2(), lbl);
                deg_pp.record(pp.shift(dl).in_one_plus_v2_z_v2(), lbl);
                deg_iota.record(io.shift(dr).in_one_plus_v_z_v(), lbl);
                if rank_two {
                    let zero_one = |p: &LaurentPoly| p.is_zero() || p.is_one();
                    dihedral.record(zero_one(&h.shift(dl)) && zero_one(&pi.shift(dl)), lbl);
                    dihedral.record(iota_values.contains(&io.shift(dr)), lbl);
                }
            }
            congr.record(pp.mod2_equal(&pi) && pi.mod2_equal(&h), lbl);
            let (ok, nn) = halves_in_z_vinv(&h, &pi);
            half_h_pi.record(ok, lbl);
            nonneg_h_pi.record(nn, lbl);
            let (ok, nn) = halves_in_z_vinv(&h, &pp);
            half_h_pp.record(ok, lbl);
            nonneg_h_pp.record(nn, lbl);
            let (ok, nn) = halves_in_z_vinv(&pi, &pp);
            half_pi_pp.record(ok, lbl);
            nonneg_pi_pp.record(nn, lbl);
        }
    }
    let mut checks = vec![deg_h, deg_pi, deg_pp, deg_iota, congr, half_h_pi, half_h_pp, half_pi_pp];
    if rank_two {
        checks.push(dihedral);
    }
    Report {
        system: b.system_name(),
        theta: theta_label(b),
        checks,
        observations: vec![nonneg_h_pi, nonneg_h_pp, nonneg_pi_pp],
    }
}

/// Tables for every `θ`-block of `I` together with the KL table of `W`.
pub fn block_tables(group: &Arc<CoxeterGroup>) -> Result<Vec<BlockTables>> {
    let kl = HeckeAlgebra::new(group, ParamMode::V)?.kl_table()?;
    all_blocks(group)?.into_iter().map(|b| BlockTables::new(b, &kl)).collect()
}

/// `Σ_w (−1)^{ρ(x)+ρ(w)} F_{x,w} F_{yw₀⁺, ww₀⁺} = δ_{x,y}` over all of `I`,
/// where `(x,θ)·w₀⁺ = (x·w₀, θθ₀)`.
pub fn inversion_check(which: Which, group: &Arc<CoxeterGroup>) -> Result<CheckOutcome> {
    let w0 = group.longest().ok_or(Error::Truncated)?;
    let sys = group.system();
    let theta0 = DiagramAutomorphism::new(
        sys,
        (0..sys.rank())
            .map(|s| {
                let c = group.mul(group.mul(w0, group.mul_left(s, 0).expect("generator")).expect("complete"), w0);
                let c = c.expect("complete");
                group.word(c)[0]
            })
            .collect(),
    )?;
    let blocks = all_blocks(group)?;
    let tables: Vec<CanonicalTable> = blocks.iter().map(|b| canonical_table(b, which)).collect::<Result<_>>()?;
    let thetas: Vec<&DiagramAutomorphism> = blocks.iter().map(|b| b.theta().expect("block")).collect();
    let mut out = CheckOutcome::new(format!("inversion {which:?}"));
    for (bi, basis) in blocks.iter().enumerate() {
        let target = thetas[bi].compose(&theta0);
        let bj = thetas.iter().position(|t| **t == target).ok_or_else(|| Error::Internal("θθ₀ is not involutive".into()))?;
        let other = &blocks[bj];
        // `w ↦ w·w₀⁺` as a map from block `bi` to block `bj`.
        let shift: Vec<usize> = (0..basis.len())
            .map(|w| other.position(group.mul(basis.group_index(w), w0).expect("complete")).expect("x·w₀ is twisted"))
            .collect();
        let f = &tables[bi];
        let fo = &tables[bj];
        for x in 0..basis.len() {
            for y in 0..basis.len() {
                let mut acc = LaurentPoly::zero();
                for w in (0..basis.len()).filter(|&w| basis.poset().leq(x, w)) {
                    let c = f.get(x, w);
                    let sign = if (basis.grade(x) + basis.grade(w)) % 2 == 0 { 1 } else { -1 };
                    acc += (&c * &fo.get(shift[y], shift[w])).scale(sign);
                }
                let expected = if x == y { LaurentPoly::one() } else { LaurentPoly::zero() };
                out.record(acc == expected, || format!("{} theta {}: x={}, y={}", sys.name(), thetas[bi], basis.label(x), basis.label(y)));
            }
        }
    }
    Ok(out)
}

/// `H(W′) → I(W′×W′, swap)`, `H_w ↦ I_((w,w⁻¹),θ)`, sends `underline H_w`
/// to `underline I_((w,w⁻¹),θ)`.
pub fn embedding_check(sys_prime: &CoxeterSystem) -> Result<CheckOutcome> {
    let gp = CoxeterGroup::finite(sys_prime, crate::coxeter::DEFAULT_WORD_CAP)?;
    let kl = HeckeAlgebra::new(&gp, ParamMode::V)?.kl_table()?;
    let r = sys_prime.rank();
    let sys = sys_prime.product(sys_prime);
    let swap = DiagramAutomorphism::new(&sys, (0..2 * r).map(|i| (i + r) % (2 * r)).collect())?;
    let group = Arc::new(CoxeterGroup::finite(&sys, crate::coxeter::DEFAULT_WORD_CAP)?);
    let basis = ModuleBasis::involutions(group.clone(), &swap)?;
    let iota = canonical_table(&basis, Which::I)?;
    let embed = |w: usize| -> Result<usize> {
        let inv = gp.inverse(w).expect("complete");
        let word: Vec<usize> = gp.word(w).iter().copied().chain(gp.word(inv).iter().map(|s| s + r)).collect();
        let gi = group.index_of_word(&word)?;
        basis.position(gi).ok_or_else(|| Error::Internal("(w,w⁻¹) is not a twisted involution".into()))
    };
    let mut out = CheckOutcome::new(format!("embedding of {}", sys_prime.name()));
    for w in 0..gp.len() {
        let image = ModuleElt::from_terms(kl.column(w).iter().map(|(x, c)| Ok((embed(x)?, c.clone()))).collect::<Result<Vec<_>>>()?);
        let target = embed(w)?;
        out.record(&image == iota.column(target), || format!("w={}", crate::hecke::word_label(gp.word(w))));
    }
    Ok(out)
}
