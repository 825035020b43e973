//! The reproduction suite: worked examples from the scenario corpus plus
//! numerical cases that back the cells of the verdict table.

use std::fmt::Write as _;

use num_complex::Complex64;
use rand::Rng;
use rand_chacha::ChaCha8Rng;

use crate::algebra::OperatorExpr;
use crate::classify::{
    is_entangled_iv, is_separable_i, is_separable_ii, is_separable_iii, is_separable_v, qfi_phase, reduced_x1, schmidt_rank, Definition,
};
use crate::correlations::{
    check_sep2, factorization_gap, mode_local_sweep, separable_i_counterexample, separable_ii_counterexample, ExplicitDecomposition,
};
use crate::firstq::{effective_distinguish, sym_operator, sym_single, FirstQTensor, SingleParticleBasis};
use crate::fock::{ModeCatalog, StateVector, Statistics};
use crate::harness::scenario::{parse_scenario, Check};
use crate::harness::{case_rng, fmt_f64};
use crate::linalg::{
    basis_vector, c, diag, hermitian_eigen, kron, max_abs_diff, pauli_x, pauli_z, projector, r, random_hermitian, random_matrix, random_state,
    singular_values, unitary_exp, CVec, Mat, ONE, ZERO,
};
use crate::{Error, Result, EPS_TOL};

/// Scenario files shipped with the crate.
pub const CORPUS: &[(&str, &str)] = &[
    ("bell_pair.scn", include_str!("../../scenarios/bell_pair.scn")),
    ("bell_observables.scn", include_str!("../../scenarios/bell_observables.scn")),
    ("delocalized.scn", include_str!("../../scenarios/delocalized.scn")),
    ("effdist_phi1.scn", include_str!("../../scenarios/effdist_phi1.scn")),
    ("effdist_phi2.scn", include_str!("../../scenarios/effdist_phi2.scn")),
    ("entangled_iv_pair.scn", include_str!("../../scenarios/entangled_iv_pair.scn")),
    ("hybrid_loc.scn", include_str!("../../scenarios/hybrid_loc.scn")),
    ("hybrid_plus_up.scn", include_str!("../../scenarios/hybrid_plus_up.scn")),
    ("hybrid_plus_plus.scn", include_str!("../../scenarios/hybrid_plus_plus.scn")),
    ("metrology_fock.scn", include_str!("../../scenarios/metrology_fock.scn")),
    ("metrology_product.scn", include_str!("../../scenarios/metrology_product.scn")),
    ("mode_product.scn", include_str!("../../scenarios/mode_product.scn")),
    ("mode_same_region.scn", include_str!("../../scenarios/mode_same_region.scn")),
    ("perm_det.scn", include_str!("../../scenarios/perm_det.scn")),
    ("two_level.scn", include_str!("../../scenarios/two_level.scn")),
    ("uu_image.scn", include_str!("../../scenarios/uu_image.scn")),
    ("zeta_minus_after.scn", include_str!("../../scenarios/zeta_minus_after.scn")),
    ("zeta_minus_before.scn", include_str!("../../scenarios/zeta_minus_before.scn")),
];

/// Columns of the verdict table.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Criterion {
    LocalOperators,
    EffectiveDistinguishability,
    InformationResources,
}

impl Criterion {
    pub const ALL: [Criterion; 3] = [Criterion::LocalOperators, Criterion::EffectiveDistinguishability, Criterion::InformationResources];

    pub fn as_str(self) -> &'static str {
        match self {
            Criterion::LocalOperators => "local operators",
            Criterion::EffectiveDistinguishability => "effective distinguishability",
            Criterion::InformationResources => "information resources",
        }
    }
}

/// What a case says about one (definition, criterion) pair.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Finding {
    /// A concrete state or operation breaks the criterion.
    Violation,
    /// Every tested instance complies, and the test covers the criterion.
    Consistent,
    /// No violation found, but the evidence does not settle the question.
    Inconclusive,
}

impl Finding {
    pub fn as_str(self) -> &'static str {
        match self {
            Finding::Violation => "violation",
            Finding::Consistent => "consistent",
            Finding::Inconclusive => "inconclusive",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Backing {
    pub definition: Definition,
    pub criterion: Criterion,
    pub finding: Finding,
}

#[derive(Debug, Clone, PartialEq)]
pub struct CaseReport {
    pub id: String,
    pub title: String,
    pub checks: Vec<Check>,
    pub backing: Vec<Backing>,
}

impl CaseReport {
    fn new(id: &str, title: &str) -> Self {
        CaseReport { id: id.to_string(), title: title.to_string(), checks: Vec::new(), backing: Vec::new() }
    }

    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.pass)
    }

    fn push(&mut self, check: Check) {
        self.checks.push(check);
    }

    fn back(&mut self, definition: Definition, criterion: Criterion, finding: Finding) {
        self.backing.push(Backing { definition, criterion, finding });
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ReproReport {
    pub seed: u64,
    pub cases: Vec<CaseReport>,
}

impl ReproReport {
    pub fn passed(&self) -> bool {
        self.cases.iter().all(CaseReport::passed)
    }

    pub fn case(&self, id: &str) -> Option<&CaseReport> {
        self.cases.iter().find(|c| c.id == id)
    }

    pub fn num_checks(&self) -> usize {
        self.cases.iter().map(|c| c.checks.len()).sum()
    }

    pub fn num_failed(&self) -> usize {
        self.cases.iter().flat_map(|c| &c.checks).filter(|c| !c.pass).count()
    }

    pub fn to_csv(&self) -> String {
        let mut out = String::from("case,check,expected,actual,status\n");
        for case in &self.cases {
            for ch in &case.checks {
                let _ = writeln!(
                    out,
                    "{},{},{},{},{}",
                    csv_field(&case.id),
                    csv_field(&ch.name),
                    csv_field(&ch.expected),
                    csv_field(&ch.actual),
                    if ch.pass { "pass" } else { "FAIL" }
                );
            }
        }
        out
    }

    pub fn to_markdown(&self) -> String {
        let mut out = format!(
            "# Reproduction report\n\nseed: {}; {} cases, {} checks, {} failed\n",
            self.seed,
            self.cases.len(),
            self.num_checks(),
            self.num_failed()
        );
        for case in &self.cases {
            let _ = write!(out, "\n## {} ({})\n\n{}\n\n", case.id, if case.passed() { "pass" } else { "FAIL" }, case.title);
            out.push_str("| check | expected | actual | status |\n|---|---|---|---|\n");
            for ch in &case.checks {
                let _ = writeln!(
                    out,
                    "| {} | {} | {} | {} |",
                    md_cell(&ch.name),
                    md_cell(&ch.expected),
                    md_cell(&ch.actual),
                    if ch.pass { "pass" } else { "FAIL" }
                );
            }
            if !case.backing.is_empty() {
                out.push_str("\nbacks:\n");
                for b in &case.backing {
                    let _ = writeln!(out, "- {} / {}: {}", b.definition, b.criterion.as_str(), b.finding.as_str());
                }
            }
        }
        out
    }
}

fn csv_field(s: &str) -> String {
    if s.contains([',', '"', '\n']) {
        format!("\"{}\"", s.replace('"', "\"\""))
    } else {
        s.to_string()
    }
}

fn md_cell(s: &str) -> String {
    s.replace('|', "\\|")
}

type CaseFn = fn(&mut CaseReport, &mut ChaCha8Rng) -> Result<()>;

const CASES: &[(&str, &str, CaseFn)] = &[
    ("appB.hybrid_loc", "Localized probes on separable-IV states do not factorize", case_hybrid_loc),
    ("bell.observables", "Bell pair: particle-local projectors versus global observables", case_bell),
    ("counter.fact_id_fact_ent", "Separable-I states with non-factorizing particle-local probes", case_counter_i),
    ("counter.fact_id_perm_ent", "Separable-II states with non-factorizing particle-local probes", case_counter_ii),
    ("effdist.bridge", "Effectively distinguished states reproduce distinguishable-particle expectations", case_bridge),
    ("effdist.sweep", "Verdicts on effectively distinguished states versus the distinguishable classification", case_effdist_sweep),
    ("effdist.uu", "U(x)U maps a distinguishable product onto an entangled-I state", case_uu),
    ("freeze.zeta", "Freezing by measuring: P(P_L(x)1, P_R(x)1) on zeta states", case_freeze),
    ("metrology.resources", "Phase-estimation QFI of separable states", case_metrology),
    ("modes.local_sweep", "Separable-V iff all mode-local probe gaps vanish", case_mode_sweep),
    ("modes.resources", "Mode entanglement as the resource for phase estimation", case_mode_resources),
    ("paradox.measurement", "A local measurement creates entanglement-IV", case_paradox),
    ("sectors.local", "Sector-local probes on separable-III states", case_sectors_local),
    ("sep2.decomposition", "Factorization for an explicit two-term decomposition", case_sep2),
];

/// Runs the whole suite. Cases and scenarios are reported in id order.
pub fn run_repro_suite(seed: u64) -> ReproReport {
    let mut cases = Vec::new();
    for (id, title, f) in CASES {
        let mut report = CaseReport::new(id, title);
        let mut rng = case_rng(seed, id);
        if let Err(e) = f(&mut report, &mut rng) {
            report.push(Check::new("run", "ok", format!("error: {e}"), false));
        }
        cases.push(report);
    }
    for (file, text) in CORPUS {
        cases.push(run_scenario_text(file, text));
    }
    cases.sort_by(|a, b| a.id.cmp(&b.id));
    ReproReport { seed, cases }
}

/// Runs one scenario file as a case.
pub fn run_scenario_text(file: &str, text: &str) -> CaseReport {
    match parse_scenario(text) {
        Ok(s) => {
            let mut report = CaseReport::new(&s.id, &format!("scenario {file}"));
            match s.check() {
                Ok(checks) => report.checks = checks,
                Err(e) => report.push(Check::new("evaluate", "ok", format!("error: {e}"), false)),
            }
            report
        }
        Err(e) => {
            let mut report = CaseReport::new(file, "unparsable scenario");
            report.push(Check::new("parse", "ok", format!("error: {e}"), false));
            report
        }
    }
}

// Single-particle space {L,R} x {up,dn}: L↑ = 0, L↓ = 1, R↑ = 2, R↓ = 3.

const L: usize = 0;
const R: usize = 1;

fn spin(up: Complex64, dn: Complex64) -> CVec {
    CVec::from_vec(vec![up, dn])
}

fn up() -> CVec {
    spin(ONE, ZERO)
}

fn dn() -> CVec {
    spin(ZERO, ONE)
}

fn plus() -> CVec {
    spin(r(0.5f64.sqrt()), r(0.5f64.sqrt()))
}

fn place(ext: &CVec, int: &CVec) -> CVec {
    SingleParticleBasis::left_right_spin().product_vector(ext, int).expect("2 x 2 factors")
}

fn at(region: usize, int: &CVec) -> CVec {
    place(&basis_vector(2, region), int)
}

/// `P_region ⊗ op` on the four-dimensional space.
fn local(region: usize, op: &Mat) -> Mat {
    kron(&projector(&basis_vector(2, region)), op)
}

/// Normalized `𝔖[a ⊗ b]`.
fn pair(stats: Statistics, a: &CVec, b: &CVec) -> Result<FirstQTensor> {
    FirstQTensor::product(&[a.clone(), b.clone()])?.symmetrize(stats).normalized()
}

/// Normalized `Σ c_{στ} √2 𝔖[|L,σ⟩ ⊗ |R,τ⟩]`.
fn lr_state(stats: Statistics, coeffs: &Mat) -> Result<FirstQTensor> {
    let mut t = FirstQTensor::zeros(4, 2)?;
    for s in 0..2 {
        for u in 0..2 {
            let term = FirstQTensor::product(&[at(L, &basis_vector(2, s)), at(R, &basis_vector(2, u))])?;
            t = t.try_add(&term.scale(coeffs[(s, u)]))?;
        }
    }
    t.symmetrize(stats).normalized()
}

fn region_vectors(region: usize) -> Vec<CVec> {
    vec![at(region, &up()), at(region, &dn())]
}

fn lr_catalog(stats: Statistics) -> ModeCatalog {
    SingleParticleBasis::left_right_spin().catalog(stats)
}

fn count_check(name: &str, expected: usize, actual: usize) -> Check {
    Check::new(name, expected.to_string(), actual.to_string(), expected == actual)
}

fn max_check(name: &str, value: f64, tol: f64) -> Check {
    Check::new(name, format!("<= {tol:e}"), format!("{value:.3e}"), value <= tol)
}

fn case_bell(rep: &mut CaseReport, rng: &mut ChaCha8Rng) -> Result<()> {
    let s = r(0.5f64.sqrt());
    let qubits = |v: [Complex64; 4]| FirstQTensor::from_vector(2, 2, &CVec::from_vec(v.to_vec()));
    let psi_p = qubits([ZERO, s, s, ZERO])?;
    let psi_m = qubits([ZERO, s, -s, ZERO])?;
    let id = Mat::identity(2, 2);
    let p1 = kron(&projector(&up()), &id);
    let p2 = kron(&id, &projector(&dn()));
    let g = factorization_gap(&psi_p, &p1, &p2)?;
    rep.push(Check::value("<P1 P2>", 0.5, g.lhs.re, EPS_TOL));
    rep.push(Check::value("<P1><P2>", 0.25, g.rhs.re, EPS_TOL));
    rep.push(Check::value("gap(P1,P2)", 0.25, g.gap.re, EPS_TOL));
    // With the aligned pair (|up,up> + |dn,dn>)/√2 the same projectors never fire together.
    let aligned = qubits([s, ZERO, ZERO, s])?;
    let ga = factorization_gap(&aligned, &p1, &p2)?;
    rep.push(Check::value("<P1 P2> on (|up,up>+|dn,dn>)/sqrt2", 0.0, ga.lhs.re, EPS_TOL));

    let proj_p = projector(&psi_p.as_vector());
    let proj_m = projector(&psi_m.as_vector());
    let id4 = Mat::identity(4, 4);
    let mut max_gap = 0.0f64;
    let mut max_formula = 0.0f64;
    for _ in 0..20 {
        let [ap, bp, am, bm]: [f64; 4] = std::array::from_fn(|_| rng.gen_range(-2.0..2.0));
        let op = &id4 * r(ap) + &proj_p * r(bp);
        let om = &id4 * r(am) + &proj_m * r(bm);
        let g = factorization_gap(&psi_p, &op, &om)?;
        max_gap = max_gap.max(g.gap.norm());
        max_formula = max_formula.max((g.lhs - r(am * (ap + bp))).norm());
    }
    rep.push(max_check("max |gap(O+,O-)| over 20 draws", max_gap, EPS_TOL));
    rep.push(max_check("max |<O+ O-> - a-(a+ + b+)| over 20 draws", max_formula, EPS_TOL));
    Ok(())
}

fn random_diag<R: Rng + ?Sized>(rng: &mut R) -> Mat {
    let v: Vec<f64> = (0..3).map(|_| rng.gen_range(-1.0..1.0)).collect();
    diag(&v)
}

fn case_counter_i(rep: &mut CaseReport, rng: &mut ChaCha8Rng) -> Result<()> {
    let mut max_dev = 0.0f64;
    let mut sep_i = 0;
    let mut sep_iv = 0;
    let mut broken = 0;
    for _ in 0..20 {
        let (o1, o2) = (random_diag(rng), random_diag(rng));
        let cx = separable_i_counterexample(&o1, &o2)?;
        let g = factorization_gap(&cx.state, &cx.a, &cx.b)?;
        let [(l1, l2), (k1, k2)] = cx.values;
        max_dev = max_dev.max((g.gap - r(0.5 * (l1 - k1) * (l2 - k2))).norm());
        if is_separable_i(&cx.state)?.separable {
            sep_i += 1;
        }
        // Any two-dimensional 𝒦 drawn at random.
        let q = crate::linalg::random_unitary(3, rng);
        let k = vec![q.column(0).into_owned(), q.column(1).into_owned()];
        if is_entangled_iv(&cx.state, &k)?.separable {
            sep_iv += 1;
        }
        if !g.factorizes {
            broken += 1;
        }
    }
    rep.push(max_check("max |gap - (o1_l - o1_k)(o2_l - o2_k)/2|", max_dev, EPS_TOL));
    rep.push(count_check("psi(x)psi classified separable-I", 20, sep_i));
    rep.push(count_check("psi(x)psi separable-IV for a random K", 20, sep_iv));
    rep.push(count_check("pairs with nonzero gap", 20, broken));
    let finding = |n: usize| if n > 0 && broken > 0 { Finding::Violation } else { Finding::Inconclusive };
    rep.back(Definition::I, Criterion::LocalOperators, finding(sep_i));
    rep.back(Definition::IV, Criterion::LocalOperators, finding(sep_iv));
    Ok(())
}

fn case_counter_ii(rep: &mut CaseReport, rng: &mut ChaCha8Rng) -> Result<()> {
    let mut violation = false;
    for stats in [Statistics::Bose, Statistics::Fermi] {
        let mut max_dev = 0.0f64;
        let mut sep = 0;
        let mut broken = 0;
        for _ in 0..20 {
            let (o1, o2) = (random_diag(rng), random_diag(rng));
            let cx = separable_ii_counterexample(&o1, &o2, stats)?;
            let g = factorization_gap(&cx.state, &cx.a, &cx.b)?;
            let [(l1, l2), (k1, k2)] = cx.values;
            max_dev = max_dev.max((g.gap - r(0.25 * (l1 - k1) * (l2 - k2))).norm());
            let v = is_separable_ii(&cx.state)?;
            if v.separable {
                sep += 1;
            }
            if !g.factorizes {
                broken += 1;
            }
            violation |= v.separable && !g.factorizes;
        }
        let name = stats.name();
        rep.push(max_check(&format!("{name}: max |gap - (o1_l - o1_k)(o2_l - o2_k)/4|"), max_dev, EPS_TOL));
        rep.push(count_check(&format!("{name}: states classified separable-II"), 20, sep));
        rep.push(count_check(&format!("{name}: pairs with nonzero gap"), 20, broken));
    }
    rep.back(Definition::II, Criterion::LocalOperators, if violation { Finding::Violation } else { Finding::Inconclusive });
    Ok(())
}

fn case_bridge(rep: &mut CaseReport, rng: &mut ChaCha8Rng) -> Result<()> {
    let s = 0.5f64.sqrt();
    let mut bell = Mat::zeros(2, 2);
    bell[(0, 1)] = r(s);
    bell[(1, 0)] = r(s);
    let mut prod = Mat::zeros(2, 2);
    prod[(0, 1)] = ONE;
    for stats in [Statistics::Bose, Statistics::Fermi] {
        let mut worst = 0.0f64;
        for coeffs in [&prod, &bell] {
            let id_state = lr_state(stats, coeffs)?;
            let mut dist = FirstQTensor::zeros(4, 2)?;
            for a in 0..2 {
                for b in 0..2 {
                    let t = FirstQTensor::product(&[at(L, &basis_vector(2, a)), at(R, &basis_vector(2, b))])?;
                    dist = dist.try_add(&t.scale(coeffs[(a, b)]))?;
                }
            }
            for _ in 0..50 {
                let s1 = random_hermitian(2, rng);
                let s2 = random_hermitian(2, rng);
                let o1 = local(L, &s1);
                let o2 = local(R, &s2);
                let lhs = id_state.inner(&id_state.apply(&sym_operator(&[o1.clone(), o2.clone()])?)?)?;
                let rhs = dist.inner(&dist.apply(&kron(&o1, &o2))?)?;
                worst = worst.max((lhs - rhs).norm());
            }
        }
        rep.push(max_check(
            &format!("{}: max |<P(P_L S1, P_R S2)>_id - <(P_L S1)(x)(P_R S2)>_dist| (phi1, phi2; 50 draws each)", stats.name()),
            worst,
            EPS_TOL,
        ));
    }
    Ok(())
}

fn random_coeffs<R: Rng + ?Sized>(product: bool, rng: &mut R) -> Mat {
    if product {
        let u = random_state(2, rng);
        let v = random_state(2, rng);
        &u * v.transpose()
    } else {
        random_matrix(2, rng)
    }
}

fn case_effdist_sweep(rep: &mut CaseReport, rng: &mut ChaCha8Rng) -> Result<()> {
    let basis = SingleParticleBasis::left_right_spin();
    let externals = [basis_vector(2, L), basis_vector(2, R)];
    let v1 = region_vectors(L);
    let v2 = region_vectors(R);
    let mut agree = [0usize; 5];
    let mut total = 0;
    let mut product_entangled_i = 0;
    let mut products = 0;
    let mut image_mismatch = 0;
    for stats in [Statistics::Bose, Statistics::Fermi] {
        let cat = lr_catalog(stats);
        for k in 0..20 {
            let coeffs = random_coeffs(k % 2 == 0, rng);
            // Oracle: the distinguishable state Σ c |σ⟩⊗|τ⟩ is a product iff rank(c) = 1.
            let expected = schmidt_rank(&normalize(&singular_values(&coeffs)), EPS_TOL) == 1;
            let t = lr_state(stats, &coeffs)?;
            let image = effective_distinguish(&t, &basis, &externals)?;
            let image_sep = schmidt_rank(&normalize(&singular_values(&image.split_matrix(1))), EPS_TOL) == 1;
            if image_sep != expected {
                image_mismatch += 1;
            }
            let fock = t.to_fock(&cat)?;
            let verdicts = [
                is_separable_i(&t)?.separable,
                is_separable_ii(&t)?.separable,
                is_separable_iii(&t, &v1, &v2)?.separable,
                is_entangled_iv(&t, &v1)?.separable,
                is_separable_v(&fock, &[0, 1], &[2, 3])?.separable,
            ];
            for (a, v) in agree.iter_mut().zip(verdicts) {
                if v == expected {
                    *a += 1;
                }
            }
            if expected {
                products += 1;
                if !verdicts[0] {
                    product_entangled_i += 1;
                }
            }
            total += 1;
        }
    }
    rep.push(count_check("distinguished images whose product form matches rank(c) = 1", 0, image_mismatch));
    rep.push(count_check("distinguishable products classified entangled-I", products, product_entangled_i));
    for (d, a) in Definition::ALL.iter().zip(agree).skip(1) {
        rep.push(count_check(&format!("{d} agrees with the distinguishable verdict"), total, a));
    }
    rep.back(Definition::I, Criterion::EffectiveDistinguishability, if product_entangled_i > 0 { Finding::Violation } else { Finding::Inconclusive });
    for (d, a) in [(Definition::III, agree[2]), (Definition::IV, agree[3]), (Definition::V, agree[4])] {
        rep.back(d, Criterion::EffectiveDistinguishability, if a == total { Finding::Consistent } else { Finding::Violation });
    }
    Ok(())
}

fn normalize(v: &[f64]) -> Vec<f64> {
    let n = v.iter().map(|x| x * x).sum::<f64>().sqrt();
    if n == 0.0 {
        return v.to_vec();
    }
    v.iter().map(|x| x / n).collect()
}

fn uu_matrix() -> Mat {
    let (lu, ld, ru, rd) = (at(L, &up()), at(L, &dn()), at(R, &up()), at(R, &dn()));
    &lu * lu.adjoint() + &ru * ru.adjoint() + &rd * ld.adjoint() + &ld * rd.adjoint()
}

fn case_uu(rep: &mut CaseReport, rng: &mut ChaCha8Rng) -> Result<()> {
    let u = uu_matrix();
    let unitarity = max_abs_diff(&(u.adjoint() * &u), &Mat::identity(4, 4));
    rep.push(max_check("|U^dagger U - 1|", unitarity, EPS_TOL));
    let mut violation = true;
    for stats in [Statistics::Bose, Statistics::Fermi] {
        let name = stats.name();
        let phi1 = pair(stats, &at(L, &up()), &at(R, &dn()))?;
        let moved = phi1.apply_collective(&u)?;
        let target = pair(stats, &at(L, &up()), &at(L, &dn()))?;
        rep.push(max_check(&format!("{name}: |U(x)U phi1 - sqrt2 S[L,up (x) L,dn]|"), moved.max_abs_diff(&target)?, EPS_TOL));
        let image = effective_distinguish(&phi1, &SingleParticleBasis::left_right_spin(), &[basis_vector(2, L), basis_vector(2, R)])?;
        let image_rank = schmidt_rank(&normalize(&singular_values(&image.split_matrix(1))), EPS_TOL);
        rep.push(count_check(&format!("{name}: Schmidt rank of phi1 once distinguished"), 1, image_rank));
        let v_before = is_separable_i(&phi1)?;
        let v_after = is_separable_i(&moved)?;
        rep.push(Check::verdict(format!("{name}: phi1 under I"), false, &Ok(v_before.clone())));
        rep.push(Check::verdict(format!("{name}: U(x)U phi1 under I"), false, &Ok(v_after)));
        violation &= image_rank == 1 && !v_before.separable;
    }
    // U⊗U keeps ψ⊗ψ of that form.
    let mut kept = 0;
    for _ in 0..10 {
        let psi = random_state(4, rng);
        let t = FirstQTensor::product(&[psi.clone(), psi])?.apply_collective(&u)?;
        if is_separable_i(&t)?.separable {
            kept += 1;
        }
    }
    rep.push(count_check("U(x)U (psi(x)psi) still separable-I", 10, kept));
    rep.back(Definition::I, Criterion::EffectiveDistinguishability, if violation { Finding::Violation } else { Finding::Inconclusive });
    Ok(())
}

fn case_freeze(rep: &mut CaseReport, _rng: &mut ChaCha8Rng) -> Result<()> {
    let spatial_plus = spin(r(0.5f64.sqrt()), r(0.5f64.sqrt()));
    let spatial_minus = spin(r(0.5f64.sqrt()), r(-(0.5f64.sqrt())));
    let p = sym_operator(&[local(L, &Mat::identity(2, 2)), local(R, &Mat::identity(2, 2))])?;
    let mut violation = false;
    for (label, overlap) in [("0", 0.0f64), ("1/2", 0.5), ("1", 1.0)] {
        let sigma = up();
        let sigma_p = spin(r(overlap), r((1.0 - overlap * overlap).sqrt()));
        let variants: [(&str, Statistics, &CVec); 3] = [
            ("bose zeta+", Statistics::Bose, &spatial_plus),
            ("bose zeta-", Statistics::Bose, &spatial_minus),
            ("fermi zeta-", Statistics::Fermi, &spatial_minus),
        ];
        for (name, stats, second) in variants {
            let a = place(&spatial_plus, &sigma);
            let b = place(second, &sigma_p);
            let raw = FirstQTensor::product(&[a, b])?.symmetrize(stats);
            let tag = format!("{name}, <s|s'> = {label}");
            if raw.norm() < EPS_TOL {
                rep.push(Check::new(format!("{tag}: state"), "vanishes", "vanishes", true));
                continue;
            }
            let before = is_separable_ii(&raw.normalized()?)?;
            // separable-II before: zeta- always, zeta+ for orthogonal or equal spins.
            let expect_before = name.ends_with('-') || overlap != 0.5;
            rep.push(Check::verdict(format!("{tag}: before"), expect_before, &Ok(before.clone())));
            let projected = raw.apply(&p)?;
            if projected.norm() < EPS_TOL {
                // S[Lσ Rσ − Lσ Rσ] for bosons with equal spins.
                let expected_zero = name == "bose zeta-" && overlap == 1.0;
                rep.push(Check::new(format!("{tag}: after"), if expected_zero { "zero vector" } else { "nonzero" }, "zero vector", expected_zero));
                continue;
            }
            let after = is_separable_ii(&projected.normalized()?)?;
            rep.push(Check::verdict(format!("{tag}: after"), overlap == 1.0, &Ok(after.clone())));
            if name == "bose zeta-" && before.separable && !after.separable {
                violation = true;
            }
        }
    }
    rep.back(Definition::II, Criterion::EffectiveDistinguishability, if violation { Finding::Violation } else { Finding::Inconclusive });
    Ok(())
}

fn fock_two_level(occ: &[u8]) -> Result<FirstQTensor> {
    let cat = ModeCatalog::numbered(2, Statistics::Bose);
    FirstQTensor::from_fock(&StateVector::basis(&cat, crate::fock::Occupation::new(occ.to_vec()))?)
}

fn case_metrology(rep: &mut CaseReport, rng: &mut ChaCha8Rng) -> Result<()> {
    let half = r(0.5);
    let v1 = [basis_vector(2, 0)];
    let v2 = [basis_vector(2, 1)];

    // √2 𝔖[|0⟩⊗|1⟩] under J_x.
    let jx2 = sym_single(&(pauli_x() * half), 2)?;
    let s01 = fock_two_level(&[1, 1])?;
    let q01 = qfi_phase(&s01, &jx2)?;
    rep.push(Check::value("QFI(sqrt2 S[0(x)1], J_x)", 4.0, q01, EPS_TOL));
    let ii = is_separable_ii(&s01)?;
    let iii = is_separable_iii(&s01, &v1, &v2)?;
    rep.push(Check::verdict("sqrt2 S[0(x)1] under II", true, &Ok(ii.clone())));
    rep.push(Check::verdict("sqrt2 S[0(x)1] under III", true, &Ok(iii.clone())));
    let q00 = qfi_phase(&FirstQTensor::product(&[basis_vector(2, 0), basis_vector(2, 0)])?, &jx2)?;
    rep.push(Check::value("QFI(|0>(x)|0>, J_x) = N", 2.0, q00, EPS_TOL));

    // perm-det with N = 3, k = 1: QFI = n0(n1+1) + n1(n0+1) for a Fock state.
    let jx3 = sym_single(&(pauli_x() * half), 3)?;
    let s12 = fock_two_level(&[1, 2])?;
    let q12 = qfi_phase(&s12, &jx3)?;
    rep.push(Check::value("QFI(|1,2>, J_x)", 7.0, q12, EPS_TOL));
    let iii12 = is_separable_iii(&s12, &v1, &v2)?;
    rep.push(Check::verdict("|1,2> under III", true, &Ok(iii12.clone())));

    // Two populated sectors: (|2,0> + |0,2>)/√2 with J_z.
    let jz2 = sym_single(&(pauli_z() * half), 2)?;
    let noon = fock_two_level(&[2, 0])?.try_add(&fock_two_level(&[0, 2])?)?.normalized()?;
    let qn = qfi_phase(&noon, &jz2)?;
    rep.push(Check::value("QFI((|2,0>+|0,2>)/sqrt2, J_z)", 4.0, qn, EPS_TOL));
    let iiin = is_separable_iii(&noon, &v1, &v2)?;
    rep.push(Check::verdict("(|2,0>+|0,2>)/sqrt2 under III", true, &Ok(iiin.clone())));

    // Separable-I states never beat N = 2 here.
    let mut max_q = 0.0f64;
    for _ in 0..30 {
        let psi = random_state(2, rng);
        let t = FirstQTensor::product(&[psi.clone(), psi])?;
        max_q = max_q.max(qfi_phase(&t, &jx2)?);
    }
    rep.push(Check::new("max QFI(psi(x)psi, J_x) over 30 draws", "<= 2", fmt_f64(max_q), max_q <= 2.0 + EPS_TOL));

    let beats = |q: f64, n: f64| q > n + EPS_TOL;
    rep.back(Definition::I, Criterion::InformationResources, Finding::Inconclusive);
    rep.back(
        Definition::II,
        Criterion::InformationResources,
        if ii.separable && beats(q01, 2.0) { Finding::Violation } else { Finding::Inconclusive },
    );
    let iii_violation = (iii.separable && beats(q01, 2.0)) || (iii12.separable && beats(q12, 3.0)) || (iiin.separable && beats(qn, 2.0));
    rep.back(Definition::III, Criterion::InformationResources, if iii_violation { Finding::Violation } else { Finding::Inconclusive });
    Ok(())
}

pub(crate) fn random_polynomial_state<R: Rng + ?Sized>(cat: &ModeCatalog, left: &[usize], right: &[usize], rng: &mut R) -> Result<StateVector> {
    // P(a†_left) Q(a†_right)|vac⟩ with P, Q of degree ≤ 2.
    let poly = |modes: &[usize], rng: &mut R| -> Result<OperatorExpr> {
        let mut p = OperatorExpr::scalar(cat, crate::linalg::random_complex(rng));
        for &m in modes {
            p = p.try_add(&OperatorExpr::create(cat, m)?.scale(crate::linalg::random_complex(rng)))?;
        }
        for (i, &m) in modes.iter().enumerate() {
            for &n in &modes[i..] {
                let w = OperatorExpr::word(cat, &[(m, true), (n, true)], crate::linalg::random_complex(rng))?;
                p = p.try_add(&w)?;
            }
        }
        Ok(p)
    };
    let p = poly(left, rng)?;
    let q = poly(right, rng)?;
    p.multiply(&q)?.apply(&StateVector::vacuum(cat))?.normalized()
}

pub(crate) fn random_sector_state<R: Rng + ?Sized>(cat: &ModeCatalog, n: usize, rng: &mut R) -> Result<StateVector> {
    let terms: Vec<_> = cat.sector_basis(n).into_iter().map(|o| (o, crate::linalg::random_complex(rng))).collect();
    StateVector::from_terms(cat, terms)?.normalized()
}

fn case_mode_sweep(rep: &mut CaseReport, rng: &mut ChaCha8Rng) -> Result<()> {
    let (left, right) = ([0usize, 1], [2usize, 3]);
    let mut consistent = true;
    for stats in [Statistics::Bose, Statistics::Fermi] {
        let cat = lr_catalog(stats);
        let mut agree = 0;
        let mut separable = 0;
        let mut max_sep_gap = 0.0f64;
        for k in 0..50 {
            let s = if k % 2 == 0 { random_polynomial_state(&cat, &left, &right, rng)? } else { random_sector_state(&cat, 2, rng)? };
            let v = is_separable_v(&s, &left, &right)?;
            let sweep = mode_local_sweep(&s, &left, &right, 100, 1e-7, rng)?;
            if v.separable {
                separable += 1;
                max_sep_gap = max_sep_gap.max(sweep.max_gap);
            }
            if v.separable == (sweep.violations == 0) {
                agree += 1;
            }
        }
        let name = stats.name();
        rep.push(count_check(&format!("{name}: rank-1 verdict <=> all 100 gaps < 1e-7"), 50, agree));
        rep.push(count_check(&format!("{name}: separable-V states in the sample"), 25, separable));
        rep.push(max_check(&format!("{name}: max gap on separable-V states"), max_sep_gap, 1e-7));
        consistent &= agree == 50;
    }
    rep.back(Definition::V, Criterion::LocalOperators, if consistent { Finding::Consistent } else { Finding::Violation });
    Ok(())
}

fn case_mode_resources(rep: &mut CaseReport, rng: &mut ChaCha8Rng) -> Result<()> {
    let cat = lr_catalog(Statistics::Bose);
    let (left, right) = ([0usize, 1], [2usize, 3]);
    let jz = OperatorExpr::number_on(&cat, &left)?.try_sub(&OperatorExpr::number_on(&cat, &right)?)?.scale(r(0.5));
    // Fixed-N products P(a†_L) Q(a†_R)|vac⟩: homogeneous P, Q.
    let mut max_q = 0.0f64;
    let mut sep = 0;
    for k in 0..20 {
        let nl = k % 3;
        let lv = random_state(2, rng);
        let rv = random_state(2, rng);
        let cl = OperatorExpr::create_state(&place(&basis_vector(2, L), &lv), &cat)?;
        let cr = OperatorExpr::create_state(&place(&basis_vector(2, R), &rv), &cat)?;
        let mut s = StateVector::vacuum(&cat);
        for _ in 0..nl {
            s = cl.apply(&s)?;
        }
        for _ in nl..2 {
            s = cr.apply(&s)?;
        }
        let s = s.normalized()?;
        if is_separable_v(&s, &left, &right)?.separable {
            sep += 1;
        }
        max_q = max_q.max(qfi_phase(&s, &jz)?);
    }
    rep.push(count_check("fixed-N products classified separable-V", 20, sep));
    rep.push(max_check("max QFI(J_z) on fixed-N separable-V states", max_q, EPS_TOL));

    // |1,1⟩ through a balanced beam splitter exp(iπ/2 J_x).
    let two = ModeCatalog::numbered(2, Statistics::Bose);
    let jz2 = OperatorExpr::number(&two, 0)?.try_sub(&OperatorExpr::number(&two, 1)?)?.scale(r(0.5));
    let s11 = StateVector::basis(&two, crate::fock::Occupation::new(vec![1, 1]))?;
    let q_in = qfi_phase(&s11, &jz2)?;
    let v_in = is_separable_v(&s11, &[0], &[1])?;
    let bs = unitary_exp(&(pauli_x() * r(0.5)), std::f64::consts::FRAC_PI_2);
    let out = FirstQTensor::from_fock(&s11)?.apply_collective(&bs)?.to_fock(&two)?;
    let q_out = qfi_phase(&out, &jz2)?;
    let v_out = is_separable_v(&out, &[0], &[1])?;
    rep.push(Check::verdict("|1,1> under V", true, &Ok(v_in.clone())));
    rep.push(Check::value("QFI(|1,1>, J_z)", 0.0, q_in, EPS_TOL));
    rep.push(Check::verdict("beam-splitter output under V", false, &Ok(v_out.clone())));
    rep.push(Check::value("QFI(beam-splitter output, J_z)", 4.0, q_out, EPS_TOL));
    let consistent = sep == 20 && max_q <= EPS_TOL && v_in.separable && q_in <= 2.0 && !v_out.separable && q_out > 2.0;
    rep.back(Definition::V, Criterion::InformationResources, if consistent { Finding::Consistent } else { Finding::Inconclusive });
    Ok(())
}

fn case_hybrid_loc(rep: &mut CaseReport, _rng: &mut ChaCha8Rng) -> Result<()> {
    let k = region_vectors(L);
    let perp = |a: &CVec| spin(-a[1].conj(), a[0].conj());
    let mut violation = false;
    // (state spin ψ, probe spin α): lhs 2|⟨α|ψ⟩⟨α⊥|ψ⟩|², rhs 4|⟨α|ψ⟩⟨α⊥|ψ⟩|².
    for (name, psi, alpha) in [("|L,up>^2, alpha = +", up(), plus()), ("|L,+>^2, alpha = up", plus(), up()), ("|L,+>^2, alpha = +", plus(), plus())] {
        let v = at(L, &psi);
        let t = FirstQTensor::product(&[v.clone(), v])?;
        let a1 = sym_single(&projector(&at(L, &alpha)), 2)?;
        let a2 = sym_single(&projector(&at(L, &perp(&alpha))), 2)?;
        let g = factorization_gap(&t, &a1, &a2)?;
        let x = (alpha.dotc(&psi) * perp(&alpha).dotc(&psi)).norm_sqr();
        rep.push(Check::value(format!("{name}: lhs"), 2.0 * x, g.lhs.re, EPS_TOL));
        rep.push(Check::value(format!("{name}: rhs"), 4.0 * x, g.rhs.re, EPS_TOL));
        let iv = is_entangled_iv(&t, &k)?;
        rep.push(Check::verdict(format!("{name}: state under IV"), true, &Ok(iv.clone())));
        violation |= iv.separable && !g.factorizes;
    }
    // Delocalized ((|L,α⟩+|R,α⟩)/√2)^⊗2 with σ_z probes on each side.
    let sz = pauli_z();
    let half = r(0.5f64.sqrt());
    let alpha = up();
    let psi = (at(L, &alpha) + at(R, &alpha)) * half;
    let t = FirstQTensor::product(&[psi.clone(), psi])?;
    let g = factorization_gap(&t, &sym_single(&local(L, &sz), 2)?, &sym_single(&local(R, &sz), 2)?)?;
    let m = alpha.dotc(&(&sz * &alpha)).re;
    rep.push(Check::value("delocalized, alpha = up: lhs", 0.5 * m * m, g.lhs.re, EPS_TOL));
    rep.push(Check::value("delocalized, alpha = up: rhs", m * m, g.rhs.re, EPS_TOL));
    let iv = is_entangled_iv(&t, &k)?;
    rep.push(Check::verdict("delocalized state under IV", true, &Ok(iv.clone())));
    violation |= iv.separable && !g.factorizes;
    rep.back(Definition::IV, Criterion::LocalOperators, if violation { Finding::Violation } else { Finding::Inconclusive });
    Ok(())
}

fn case_paradox(rep: &mut CaseReport, _rng: &mut ChaCha8Rng) -> Result<()> {
    let m = sym_single(&local(L, &pauli_z()), 2)?;
    let (values, vectors) = hermitian_eigen(&m);
    let mut violation = true;
    for (region, name) in [(L, "L"), (R, "R")] {
        let v = pair(Statistics::Bose, &at(region, &up()), &at(region, &dn()))?.as_vector();
        let lambda = v.dotc(&(&m * &v));
        let residual = (&m * &v - &v * lambda).norm();
        rep.push(max_check(&format!("sqrt2 S[{name},up (x) {name},dn] is an eigenvector"), residual, EPS_TOL));
        let t = FirstQTensor::from_vector(4, 2, &v)?;
        let x = reduced_x1(&t, &region_vectors(region))?;
        rep.push(Check::value(format!("S(X1) of sqrt2 S[{name},up (x) {name},dn]"), 2f64.ln(), x.entropy, 1e-7));
    }
    let lp = at(L, &plus());
    let start = FirstQTensor::product(&[lp.clone(), lp])?;
    let k = region_vectors(L);
    let before = is_entangled_iv(&start, &k)?;
    rep.push(Check::verdict("|L,+>(x)|L,+> under IV", true, &Ok(before.clone())));
    // Spectral projector of the outcome 0.
    let mut proj = Mat::zeros(16, 16);
    for (j, &val) in values.iter().enumerate() {
        if val.abs() < 1e-9 {
            let col = vectors.column(j).into_owned();
            proj += &col * col.adjoint();
        }
    }
    let post = &proj * start.as_vector();
    let prob = post.norm_squared();
    rep.push(Check::value("probability of outcome 0", 0.5, prob, EPS_TOL));
    let post = FirstQTensor::from_vector(4, 2, &(post / c(prob.sqrt(), 0.0)))?;
    let target = pair(Statistics::Bose, &at(L, &up()), &at(L, &dn()))?;
    let overlap = post.inner(&target)?.norm();
    rep.push(Check::value("|<post|sqrt2 S[L,up (x) L,dn]>|", 1.0, overlap, EPS_TOL));
    let after = is_entangled_iv(&post, &k)?;
    rep.push(Check::verdict("post-measurement state under IV", false, &Ok(after.clone())));
    violation &= before.separable && !after.separable;
    rep.back(Definition::IV, Criterion::InformationResources, if violation { Finding::Violation } else { Finding::Inconclusive });
    Ok(())
}

fn embed(region: usize, op: &Mat) -> Mat {
    local(region, op)
}

/// A normalized two-particle state inside one region.
fn random_in_region<R: Rng + ?Sized>(stats: Statistics, region: usize, rng: &mut R) -> Result<FirstQTensor> {
    let mut t = FirstQTensor::zeros(4, 2)?;
    for a in 0..2 {
        for b in 0..2 {
            let term = FirstQTensor::product(&[at(region, &basis_vector(2, a)), at(region, &basis_vector(2, b))])?;
            t = t.try_add(&term.scale(crate::linalg::random_complex(rng)))?;
        }
    }
    t.symmetrize(stats).normalized()
}

fn case_sectors_local(rep: &mut CaseReport, rng: &mut ChaCha8Rng) -> Result<()> {
    let v1 = region_vectors(L);
    let v2 = region_vectors(R);
    let pl = local(L, &Mat::identity(2, 2));
    let pr = local(R, &Mat::identity(2, 2));
    let sectors = [kron(&pl, &pl), kron(&pl, &pr) + kron(&pr, &pl), kron(&pr, &pr)];
    let mut consistent = true;
    for stats in [Statistics::Bose, Statistics::Fermi] {
        let mut sep = 0;
        let mut worst = 0.0f64;
        let mut detected = 0;
        for k in 0..30 {
            let entangled = k % 3 == 2;
            let c11 = random_coeffs(!entangled, rng);
            let mut t = lr_state(stats, &c11)?.scale(crate::linalg::random_complex(rng));
            t = t.try_add(&random_in_region(stats, L, rng)?.scale(crate::linalg::random_complex(rng)))?;
            t = t.try_add(&random_in_region(stats, R, rng)?.scale(crate::linalg::random_complex(rng)))?;
            let t = t.normalized()?;
            let v = is_separable_iii(&t, &v1, &v2)?;
            let mut deviation = 0.0f64;
            for _ in 0..10 {
                let a = sym_single(&embed(L, &random_hermitian(2, rng)), 2)?;
                let b = sym_single(&embed(R, &random_hermitian(2, rng)), 2)?;
                let lhs = factorization_gap(&t, &a, &b)?.lhs;
                let mut rhs = ZERO;
                for p in &sectors {
                    let part = t.apply(p)?;
                    let w = part.norm().powi(2);
                    if w <= EPS_TOL {
                        continue;
                    }
                    let part = part.normalized()?;
                    rhs += factorization_gap(&part, &a, &b)?.rhs * w;
                }
                deviation = deviation.max((lhs - rhs).norm());
            }
            if v.separable {
                sep += 1;
                worst = worst.max(deviation);
            } else if deviation > EPS_TOL {
                detected += 1;
            }
        }
        let name = stats.name();
        rep.push(count_check(&format!("{name}: separable-III states in the sample"), 20, sep));
        rep.push(max_check(&format!("{name}: max |<AB> - sum_p p <A><B>| on separable-III states"), worst, EPS_TOL));
        rep.push(count_check(&format!("{name}: entangled-III states with a nonzero deviation"), 10, detected));
        consistent &= sep == 20 && worst <= EPS_TOL && detected == 10;
    }
    rep.back(Definition::III, Criterion::LocalOperators, if consistent { Finding::Consistent } else { Finding::Inconclusive });
    Ok(())
}

fn case_sep2(rep: &mut CaseReport, _rng: &mut ChaCha8Rng) -> Result<()> {
    // ρ = ½|L↑,R↓⟩⟨·| + ½|L↓,R↑⟩⟨·| for distinguishable particles.
    let w1 = FirstQTensor::product(&[at(L, &up()), at(R, &dn())])?;
    let w2 = FirstQTensor::product(&[at(L, &dn()), at(R, &up())])?;
    let decomp = ExplicitDecomposition::new(vec![(0.5, w1), (0.5, w2)])?;
    let id = Mat::identity(4, 4);
    let a = kron(&local(L, &pauli_z()), &id);
    let b = kron(&id, &local(R, &pauli_z()));
    let rep2 = check_sep2(&decomp, &a, &b)?;
    rep.push(Check::value("Tr(rho AB)", -1.0, rep2.lhs.re, EPS_TOL));
    rep.push(Check::value("sum_j p_j <A>_j <B>_j", -1.0, rep2.rhs.re, EPS_TOL));
    rep.push(Check::flag("factorizes", true, rep2.factorizes));
    if ExplicitDecomposition::<FirstQTensor>::new(vec![]).is_ok() {
        return Err(Error::InvalidDecomposition("empty decomposition accepted".into()));
    }
    Ok(())
}
