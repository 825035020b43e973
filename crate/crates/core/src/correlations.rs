//! Two-point correlation probes: the gap `⟨AB⟩ − ⟨A⟩⟨B⟩` for pure states
//! and the mixed-state factorization check for explicitly supplied
//! decompositions.

use num_complex::Complex64;
use rand::Rng;

use crate::algebra::{random_mode_local, OperatorExpr, ProbeBody};
use crate::firstq::{sym_single, FirstQTensor};
use crate::fock::StateVector;
use crate::linalg::{hermitian_eigen, operator_norm, CVec, Mat};
use crate::{Error, Result, EPS_TOL};

/// A pure state that can be probed with observables of type `Op`.
pub trait ProbeState<Op> {
    /// `⟨s|op|s⟩ / ⟨s|s⟩`.
    fn expect(&self, op: &Op) -> Result<Complex64>;
    /// `⟨s|ab|s⟩ / ⟨s|s⟩`.
    fn expect_product(&self, a: &Op, b: &Op) -> Result<Complex64>;
    /// Size of `[a, b]` where it matters for this state.
    fn commutator_size(&self, a: &Op, b: &Op) -> Result<f64>;
}

impl ProbeState<OperatorExpr> for StateVector {
    fn expect(&self, op: &OperatorExpr) -> Result<Complex64> {
        op.expectation(self)
    }

    fn expect_product(&self, a: &OperatorExpr, b: &OperatorExpr) -> Result<Complex64> {
        let n2 = self.norm_sqr();
        if n2 < EPS_TOL {
            return Err(Error::ZeroState);
        }
        Ok(self.inner(&a.apply(&b.apply(self)?)?)? / n2)
    }

    fn commutator_size(&self, a: &OperatorExpr, b: &OperatorExpr) -> Result<f64> {
        self.particle_sectors().into_iter().try_fold(0.0f64, |m, n| Ok(m.max(a.commutator_norm(b, n)?)))
    }
}

impl ProbeState<Mat> for FirstQTensor {
    fn expect(&self, op: &Mat) -> Result<Complex64> {
        let n2 = self.norm().powi(2);
        if n2 < EPS_TOL {
            return Err(Error::ZeroState);
        }
        Ok(self.inner(&self.apply(op)?)? / n2)
    }

    fn expect_product(&self, a: &Mat, b: &Mat) -> Result<Complex64> {
        let n2 = self.norm().powi(2);
        if n2 < EPS_TOL {
            return Err(Error::ZeroState);
        }
        Ok(self.inner(&self.apply(b)?.apply(a)?)? / n2)
    }

    fn commutator_size(&self, a: &Mat, b: &Mat) -> Result<f64> {
        if a.shape() != b.shape() {
            return Err(Error::DimensionMismatch { expected: a.nrows(), got: b.nrows() });
        }
        Ok(operator_norm(&(a * b - b * a)))
    }
}

/// Outcome of a factorization test.
#[derive(Debug, Clone, PartialEq)]
pub struct FactorizationReport {
    pub lhs: Complex64,
    pub rhs: Complex64,
    pub gap: Complex64,
    pub factorizes: bool,
    /// Norm of `[A, B]`; nonzero values are logged, not rejected.
    pub commutator_norm: f64,
}

impl FactorizationReport {
    fn new(lhs: Complex64, rhs: Complex64, commutator_norm: f64) -> Self {
        let gap = lhs - rhs;
        FactorizationReport { lhs, rhs, gap, factorizes: gap.norm() < EPS_TOL, commutator_norm }
    }
}

fn commutator_check<S: ProbeState<Op>, Op>(s: &S, a: &Op, b: &Op) -> Result<f64> {
    let c = s.commutator_size(a, b)?;
    if c >= EPS_TOL {
        log::warn!("probe pair does not commute (norm {c:.3e}); gap computed anyway");
    }
    Ok(c)
}

/// `⟨AB⟩ − ⟨A⟩⟨B⟩` on a pure state.
pub fn factorization_gap<S: ProbeState<Op>, Op>(s: &S, a: &Op, b: &Op) -> Result<FactorizationReport> {
    let comm = commutator_check(s, a, b)?;
    let lhs = s.expect_product(a, b)?;
    let rhs = s.expect(a)? * s.expect(b)?;
    Ok(FactorizationReport::new(lhs, rhs, comm))
}

/// A mixture `Σ_j p_j |w_j⟩⟨w_j|` whose components are claimed to be
/// product states across the partition under test.
///
/// Each component is a joint pure state; its marginal expectations are
/// `⟨w_j|A|w_j⟩` and `⟨w_j|B|w_j⟩`.
#[derive(Debug, Clone)]
pub struct ExplicitDecomposition<S> {
    components: Vec<(f64, S)>,
}

impl<S> ExplicitDecomposition<S> {
    pub fn new(components: Vec<(f64, S)>) -> Result<Self> {
        if components.is_empty() {
            return Err(Error::InvalidDecomposition("no components".into()));
        }
        if let Some((p, _)) = components.iter().find(|(p, _)| !p.is_finite() || *p < 0.0) {
            return Err(Error::InvalidDecomposition(format!("weight {p} is not a probability")));
        }
        let total: f64 = components.iter().map(|(p, _)| p).sum();
        if (total - 1.0).abs() > EPS_TOL {
            return Err(Error::InvalidDecomposition(format!("weights sum to {total}")));
        }
        Ok(ExplicitDecomposition { components })
    }

    pub fn components(&self) -> &[(f64, S)] {
        &self.components
    }
}

/// Compares `Tr(ρAB)` with `Σ_j p_j Tr(ρ_j^{(1)}A) Tr(ρ_j^{(2)}B)`.
pub fn check_sep2<S: ProbeState<Op>, Op>(decomp: &ExplicitDecomposition<S>, a: &Op, b: &Op) -> Result<FactorizationReport> {
    let mut lhs = Complex64::new(0.0, 0.0);
    let mut rhs = Complex64::new(0.0, 0.0);
    let mut comm = 0.0f64;
    for (p, w) in decomp.components() {
        comm = comm.max(commutator_check(w, a, b)?);
        lhs += w.expect_product(a, b)? * *p;
        rhs += w.expect(a)? * w.expect(b)? * *p;
    }
    Ok(FactorizationReport::new(lhs, rhs, comm))
}

/// Result of a random mode-local probe sweep.
#[derive(Debug, Clone, PartialEq)]
pub struct SweepSummary {
    pub samples: usize,
    pub max_gap: f64,
    pub violations: usize,
}

/// Draws `samples` random pairs `A ∈ 𝒜(left)`, `B ∈ 𝒜(right)`, half
/// one-body and half two-body, and records the largest gap.
pub fn mode_local_sweep<R: Rng + ?Sized>(
    s: &StateVector,
    left: &[usize],
    right: &[usize],
    samples: usize,
    tol: f64,
    rng: &mut R,
) -> Result<SweepSummary> {
    let cat = s.catalog();
    let mut max_gap = 0.0f64;
    let mut violations = 0;
    for k in 0..samples {
        let body = if k % 2 == 0 { ProbeBody::One } else { ProbeBody::Two };
        let a = random_mode_local(cat, left, body, rng)?;
        let b = random_mode_local(cat, right, body, rng)?;
        let lhs = s.expect_product(&a, &b)?;
        let rhs = s.expect(&a)? * s.expect(&b)?;
        let gap = (lhs - rhs).norm();
        max_gap = max_gap.max(gap);
        if gap >= tol {
            violations += 1;
        }
    }
    Ok(SweepSummary { samples, max_gap, violations })
}

/// A separable-I state with a nonzero correlation gap for a nontrivial
/// particle-local pair, built from two common eigenvectors.
#[derive(Debug, Clone)]
pub struct LocalityCounterexample {
    /// `ψ ⊗ ψ` (or the two-orbital state for the separable-II variant).
    pub state: FirstQTensor,
    pub a: Mat,
    pub b: Mat,
    /// Common eigenvectors `e_λ`, `e_κ` used in the superposition.
    pub lambda: CVec,
    pub kappa: CVec,
    /// Eigenvalue pairs `(o¹, o²)` at `λ` and `κ`.
    pub values: [(f64, f64); 2],
}

/// Orthonormal common eigenvectors of two commuting Hermitian matrices,
/// with their eigenvalue pairs.
pub fn common_eigenbasis(o1: &Mat, o2: &Mat) -> Result<Vec<(CVec, f64, f64)>> {
    for t in [0.618_033_988_7, 1.324_717_957_2, 2.236_067_977_5, 0.377_964_473_0] {
        let mix = o1 + o2 * Complex64::new(t, 0.0);
        let (_, vecs) = hermitian_eigen(&mix);
        let mut out = Vec::with_capacity(vecs.ncols());
        let mut ok = true;
        for k in 0..vecs.ncols() {
            let v = vecs.column(k).into_owned();
            let e1 = v.dotc(&(o1 * &v)).re;
            let e2 = v.dotc(&(o2 * &v)).re;
            let r1 = (o1 * &v - &v * Complex64::new(e1, 0.0)).norm();
            let r2 = (o2 * &v - &v * Complex64::new(e2, 0.0)).norm();
            if r1 > 1e-8 || r2 > 1e-8 {
                ok = false;
                break;
            }
            out.push((v, e1, e2));
        }
        if ok {
            return Ok(out);
        }
    }
    Err(Error::NonCommuting(operator_norm(&(o1 * o2 - o2 * o1))))
}

fn pick_pair(basis: &[(CVec, f64, f64)]) -> Option<(usize, usize)> {
    for i in 0..basis.len() {
        for j in i + 1..basis.len() {
            if (basis[i].1 - basis[j].1).abs() > EPS_TOL && (basis[i].2 - basis[j].2).abs() > EPS_TOL {
                return Some((i, j));
            }
        }
    }
    None
}

/// `ψ ⊗ ψ` with `ψ = (e_λ + e_κ)/√2`, probed by `𝒫(O_1, 𝟙)` and
/// `𝒫(O_2, 𝟙)`. Requires neither operator to be a multiple of the
/// identity.
pub fn separable_i_counterexample(o1: &Mat, o2: &Mat) -> Result<LocalityCounterexample> {
    let basis = common_eigenbasis(o1, o2)?;
    let (l, k) = pick_pair(&basis).ok_or_else(|| Error::Unsupported("one of the operators is proportional to the identity".into()))?;
    let psi = (&basis[l].0 + &basis[k].0) * Complex64::new(0.5f64.sqrt(), 0.0);
    let state = FirstQTensor::product(&[psi.clone(), psi])?;
    Ok(LocalityCounterexample {
        state,
        a: sym_single(o1, 2)?,
        b: sym_single(o2, 2)?,
        lambda: basis[l].0.clone(),
        kappa: basis[k].0.clone(),
        values: [(basis[l].1, basis[l].2), (basis[k].1, basis[k].2)],
    })
}

/// `√2 𝔖[ψ_1 ⊗ ψ_2]` with `ψ_1 = (e_λ + e_κ)/√2` and `ψ_2 = e_μ` a third
/// common eigenvector; separable-II but not separable-I.
pub fn separable_ii_counterexample(o1: &Mat, o2: &Mat, stats: crate::fock::Statistics) -> Result<LocalityCounterexample> {
    let basis = common_eigenbasis(o1, o2)?;
    if basis.len() < 3 {
        return Err(Error::Unsupported("needs a single-particle space of dimension at least 3".into()));
    }
    let (l, k) = pick_pair(&basis).ok_or_else(|| Error::Unsupported("one of the operators is proportional to the identity".into()))?;
    let m = (0..basis.len()).find(|&i| i != l && i != k).expect("three eigenvectors");
    let psi1 = (&basis[l].0 + &basis[k].0) * Complex64::new(0.5f64.sqrt(), 0.0);
    let state = FirstQTensor::product(&[psi1, basis[m].0.clone()])?.symmetrize(stats).scale(Complex64::new(2f64.sqrt(), 0.0));
    Ok(LocalityCounterexample {
        state,
        a: sym_single(o1, 2)?,
        b: sym_single(o2, 2)?,
        lambda: basis[l].0.clone(),
        kappa: basis[k].0.clone(),
        values: [(basis[l].1, basis[l].2), (basis[k].1, basis[k].2)],
    })
}
