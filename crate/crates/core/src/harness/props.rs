//! Randomized property sweeps: ladder relations, projector identities and
//! the agreement between classifiers and their oracles.

use std::fmt::Write as _;

use rand::Rng;
use rand_chacha::ChaCha8Rng;

use crate::classify::{is_separable_i, is_separable_ii, is_separable_v, reduced_x1};
use crate::correlations::mode_local_sweep;
use crate::firstq::{sym_operator, symmetrizer, FirstQTensor};
use crate::fock::{ModeCatalog, StateVector, Statistics};
use crate::harness::case_rng;
use crate::harness::repro::{random_polynomial_state, random_sector_state};
use crate::linalg::{kron, max_abs_diff, random_complex, random_matrix, random_state, random_unitary, CVec, Mat};
use crate::{Result, EPS_TOL};

/// Probe pairs drawn per state in the zero-gap sweep.
pub const PROBES_PER_STATE: usize = 100;

#[derive(Debug, Clone, PartialEq)]
pub struct PropertyResult {
    pub name: String,
    pub samples: usize,
    /// Largest residual, or the number of disagreements for counting properties.
    pub residual: f64,
    pub tolerance: f64,
}

impl PropertyResult {
    pub fn passed(&self) -> bool {
        self.residual <= self.tolerance
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct PropsReport {
    pub seed: u64,
    pub samples: usize,
    pub results: Vec<PropertyResult>,
}

impl PropsReport {
    pub fn passed(&self) -> bool {
        self.results.iter().all(PropertyResult::passed)
    }

    pub fn get(&self, name: &str) -> Option<&PropertyResult> {
        self.results.iter().find(|r| r.name == name)
    }

    pub fn to_csv(&self) -> String {
        let mut out = String::from("property,samples,residual,tolerance,status\n");
        for r in &self.results {
            let _ = writeln!(out, "{},{},{},{:.0e},{}", r.name, r.samples, sci(r.residual), r.tolerance, if r.passed() { "pass" } else { "FAIL" });
        }
        out
    }

    pub fn to_markdown(&self) -> String {
        let mut out = format!(
            "seed: {}; samples: {}\n\n| property | samples | residual | tolerance | status |\n|---|---|---|---|---|\n",
            self.seed, self.samples
        );
        for r in &self.results {
            let _ = writeln!(
                out,
                "| {} | {} | {} | {:.0e} | {} |",
                r.name,
                r.samples,
                sci(r.residual),
                r.tolerance,
                if r.passed() { "pass" } else { "FAIL" }
            );
        }
        out
    }
}

fn sci(x: f64) -> String {
    // Adding zero folds -0 to +0.
    format!("{:.3e}", x + 0.0)
}

/// Runs every sweep with `samples` draws each. The zero-gap sweep uses
/// `samples.min(50)` states since each state costs [`PROBES_PER_STATE`]
/// probe pairs.
pub fn run_props(seed: u64, samples: usize) -> Result<PropsReport> {
    let samples = samples.max(1);
    let results = vec![
        ladder_relations(seed, samples)?,
        projector_identities(seed, samples)?,
        loc_op2(seed, samples)?,
        symmetrize_idempotent(seed, samples)?,
        x1_invariance(seed, samples)?,
        implication_i_ii(seed, samples)?,
        v_zero_gap(seed, samples.min(50))?,
    ];
    Ok(PropsReport { seed, samples, results })
}

fn ladder_state<R: Rng + ?Sized>(cat: &ModeCatalog, rng: &mut R) -> Result<StateVector> {
    let mut s = StateVector::zero(cat);
    for n in 0..=2 {
        s = s.try_add(&random_sector_state(cat, n, rng)?)?;
    }
    s.normalized()
}

/// `a_i a†_j ∓ a†_j a_i = δ_ij` and `a_i a_j ∓ a_j a_i = 0` on random
/// states with up to two particles in four modes.
pub fn ladder_relations(seed: u64, samples: usize) -> Result<PropertyResult> {
    let mut rng = case_rng(seed, "props.ladder");
    let mut worst = 0.0f64;
    for k in 0..samples {
        let stats = if k % 2 == 0 { Statistics::Bose } else { Statistics::Fermi };
        let sign = -stats.exchange_sign();
        let cat = ModeCatalog::numbered(4, stats);
        let s = ladder_state(&cat, &mut rng)?;
        let (i, j) = (rng.gen_range(0..4), rng.gen_range(0..4));
        let lhs = s.apply_create(j)?.apply_annihilate(i)?;
        let rhs = s.apply_annihilate(i)?.apply_create(j)?.scale(crate::linalg::r(sign));
        let mut res = lhs.try_add(&rhs)?;
        if i == j {
            res = res.try_sub(&s)?;
        }
        worst = worst.max(res.norm());
        let aa = s.apply_annihilate(j)?.apply_annihilate(i)?;
        let bb = s.apply_annihilate(i)?.apply_annihilate(j)?.scale(crate::linalg::r(sign));
        worst = worst.max(aa.try_add(&bb)?.norm());
    }
    Ok(PropertyResult { name: "ladder relations".into(), samples, residual: worst, tolerance: 1e-10 })
}

/// `𝒮² = 𝒮`, `𝒜² = 𝒜` and `𝒮𝒜 = 0` for `N = 2`, `d = 4`.
pub fn projector_identities(_seed: u64, _samples: usize) -> Result<PropertyResult> {
    let s = symmetrizer(4, 2, Statistics::Bose)?;
    let a = symmetrizer(4, 2, Statistics::Fermi)?;
    let zero = Mat::zeros(16, 16);
    let worst = max_abs_diff(&(&s * &s), &s).max(max_abs_diff(&(&a * &a), &a)).max(max_abs_diff(&(&s * &a), &zero));
    Ok(PropertyResult { name: "projector identities".into(), samples: 1, residual: worst, tolerance: EPS_TOL })
}

/// `𝒫(O₁, O₂) = 2𝒮(O₁⊗O₂)𝒮 + 2𝒜(O₁⊗O₂)𝒜` for random `O₁, O₂` on `d = 4`.
pub fn loc_op2(seed: u64, samples: usize) -> Result<PropertyResult> {
    let mut rng = case_rng(seed, "props.loc_op2");
    let s = symmetrizer(4, 2, Statistics::Bose)?;
    let a = symmetrizer(4, 2, Statistics::Fermi)?;
    let two = crate::linalg::r(2.0);
    let mut worst = 0.0f64;
    for _ in 0..samples {
        let o1 = random_matrix(4, &mut rng);
        let o2 = random_matrix(4, &mut rng);
        let p = sym_operator(&[o1.clone(), o2.clone()])?;
        let t = kron(&o1, &o2);
        let rhs = (&s * &t * &s) * two + (&a * &t * &a) * two;
        worst = worst.max(max_abs_diff(&p, &rhs));
    }
    Ok(PropertyResult { name: "P(O1,O2) = 2S(O1xO2)S + 2A(O1xO2)A".into(), samples, residual: worst, tolerance: EPS_TOL })
}

/// `𝒮(𝒮 t) = 𝒮 t` and `𝒜(𝒜 t) = 𝒜 t` on random three-particle tensors.
pub fn symmetrize_idempotent(seed: u64, samples: usize) -> Result<PropertyResult> {
    let mut rng = case_rng(seed, "props.idempotent");
    let mut worst = 0.0f64;
    for k in 0..samples {
        let stats = if k % 2 == 0 { Statistics::Bose } else { Statistics::Fermi };
        let amps = (0..27).map(|_| random_complex(&mut rng)).collect();
        let once = FirstQTensor::new(3, 3, amps)?.symmetrize(stats);
        worst = worst.max(once.symmetrize(stats).max_abs_diff(&once)?);
    }
    Ok(PropertyResult { name: "symmetrize idempotent".into(), samples, residual: worst, tolerance: EPS_TOL })
}

fn random_two_particle<R: Rng + ?Sized>(stats: Statistics, d: usize, rng: &mut R) -> Result<FirstQTensor> {
    let amps = (0..d * d).map(|_| random_complex(rng)).collect();
    FirstQTensor::new(d, 2, amps)?.symmetrize(stats).normalized()
}

/// `X₁` is unchanged entrywise when the basis of `𝒦` is rotated.
pub fn x1_invariance(seed: u64, samples: usize) -> Result<PropertyResult> {
    let mut rng = case_rng(seed, "props.x1");
    let mut worst = 0.0f64;
    for k in 0..samples {
        let stats = if k % 2 == 0 { Statistics::Bose } else { Statistics::Fermi };
        let t = random_two_particle(stats, 4, &mut rng)?;
        let frame = random_unitary(4, &mut rng);
        let kb: Vec<CVec> = (0..2).map(|j| frame.column(j).into_owned()).collect();
        let u = random_unitary(2, &mut rng);
        let rotated: Vec<CVec> = (0..2).map(|j| &kb[0] * u[(0, j)] + &kb[1] * u[(1, j)]).collect();
        let x = reduced_x1(&t, &kb)?;
        let y = reduced_x1(&t, &rotated)?;
        worst = worst.max(max_abs_diff(&x.matrix, &y.matrix));
    }
    Ok(PropertyResult { name: "X1 invariant under K rotations".into(), samples, residual: worst, tolerance: EPS_TOL })
}

/// Every separable-I two-boson state is separable-II. Half of the draws
/// are products `ψ⊗ψ`, the rest generic symmetric states. Counts
/// violations of the implication and misclassified products.
pub fn implication_i_ii(seed: u64, samples: usize) -> Result<PropertyResult> {
    let mut rng = case_rng(seed, "props.implication");
    let mut bad = 0usize;
    for k in 0..samples {
        let (t, product) = if k % 2 == 0 {
            let psi = random_state(3, &mut rng);
            (FirstQTensor::product(&[psi.clone(), psi])?, true)
        } else {
            (random_two_particle(Statistics::Bose, 3, &mut rng)?, false)
        };
        let i = is_separable_i(&t)?.separable;
        let ii = is_separable_ii(&t)?.separable;
        if (i && !ii) || (product && !i) {
            bad += 1;
        }
    }
    Ok(PropertyResult { name: "separable-I implies separable-II".into(), samples, residual: bad as f64, tolerance: 0.0 })
}

/// Rank-one separable-V verdict iff all sampled mode-local gaps vanish.
/// Counts disagreements.
pub fn v_zero_gap(seed: u64, samples: usize) -> Result<PropertyResult> {
    let mut rng: ChaCha8Rng = case_rng(seed, "props.v_zero_gap");
    let (left, right) = ([0usize, 1], [2usize, 3]);
    let mut bad = 0usize;
    for k in 0..samples {
        let stats = if k % 2 == 0 { Statistics::Bose } else { Statistics::Fermi };
        let cat = ModeCatalog::numbered(4, stats);
        let s = if (k / 2) % 2 == 0 { random_polynomial_state(&cat, &left, &right, &mut rng)? } else { random_sector_state(&cat, 2, &mut rng)? };
        let v = is_separable_v(&s, &left, &right)?;
        let sweep = mode_local_sweep(&s, &left, &right, PROBES_PER_STATE, 1e-7, &mut rng)?;
        if v.separable != (sweep.violations == 0) {
            bad += 1;
        }
    }
    Ok(PropertyResult { name: "separable-V iff zero mode-local gaps".into(), samples, residual: bad as f64, tolerance: 0.0 })
}

/// Single-line summary used by the CLI.
pub fn summary(report: &PropsReport) -> String {
    let failed = report.results.iter().filter(|r| !r.passed()).count();
    format!("{} properties, {} failed (seed {})", report.results.len(), failed, report.seed)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::harness::fmt_f64;

    #[test]
    fn small_sweep_passes() {
        let rep = run_props(7, 6).unwrap();
        for r in &rep.results {
            assert!(r.passed(), "{}: {}", r.name, fmt_f64(r.residual));
        }
        assert!(rep.to_csv().starts_with("property,samples,"));
    }

    #[test]
    fn reports_are_seed_stable() {
        assert_eq!(run_props(3, 4).unwrap().to_csv(), run_props(3, 4).unwrap().to_csv());
    }
}
