//! Decision procedures for the five separability notions on pure states,
//! the reduced single-particle matrix `X₁` and the phase QFI.
//!
//! * I: all particles in the same single-particle state (`ψ^⊗N`).
//! * II: a symmetrized product of pairwise orthogonal or equal states.
//! * III: every populated `(n₁, n₂)` sector of an orthogonal splitting
//!   `V₁ ⊕ V₂` is a product after the effective-distinguishability map.
//! * IV: zero entropy of `X₁` for a chosen subspace `𝒦`.
//! * V: a product `P(a†_left) Q(a†_right)|vac⟩` across a mode
//!   bipartition.

use std::fmt;
use std::str::FromStr;

use num_complex::Complex64;

use crate::algebra::{OperatorExpr, SubalgebraSpec};
use crate::correlations::ProbeState;
use crate::firstq::{FirstQTensor, Symmetry};
use crate::fock::{ModeCatalog, Occupation, StateVector, Statistics};
use crate::linalg::{entropy, hermitian_eigen, hermiticity_deviation, orthonormality_deviation, singular_values, CVec, Mat};
use crate::{Error, Result, EPS_ENTROPY, EPS_TOL};

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Definition {
    I,
    II,
    III,
    IV,
    V,
}

impl Definition {
    pub const ALL: [Definition; 5] = [Definition::I, Definition::II, Definition::III, Definition::IV, Definition::V];

    pub fn as_str(self) -> &'static str {
        match self {
            Definition::I => "I",
            Definition::II => "II",
            Definition::III => "III",
            Definition::IV => "IV",
            Definition::V => "V",
        }
    }
}

impl fmt::Display for Definition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Definition {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Definition::ALL
            .into_iter()
            .find(|d| d.as_str().eq_ignore_ascii_case(s.trim()))
            .ok_or_else(|| Error::Unsupported(format!("unknown definition {s:?}")))
    }
}

/// Schmidt data of one `(n₁, n₂)` sector.
#[derive(Debug, Clone, PartialEq)]
pub struct SectorWitness {
    pub n1: usize,
    pub n2: usize,
    pub weight: f64,
    pub rank: usize,
    /// Normalized Schmidt coefficients, non-increasing.
    pub schmidt: Vec<f64>,
}

/// Evidence behind a verdict.
#[derive(Debug, Clone, PartialEq)]
pub enum Witness {
    /// `tr ρ₁²` of the single-particle marginal.
    Purity(f64),
    /// Antisymmetric states of two or more particles are never products.
    Antisymmetric,
    /// Takagi values of the symmetric coefficient matrix.
    Takagi(Vec<f64>),
    /// Singular values of the antisymmetric coefficient matrix.
    Slater(Vec<f64>),
    Sectors(Vec<SectorWitness>),
    Entropy {
        entropy: f64,
        eigenvalues: Vec<f64>,
    },
    /// Schmidt coefficients across the mode bipartition.
    Schmidt(Vec<f64>),
}

impl fmt::Display for Witness {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let list = |v: &[f64]| v.iter().map(|x| crate::harness::fmt_f64(*x)).collect::<Vec<_>>().join(" ");
        match self {
            Witness::Purity(p) => write!(f, "purity={}", crate::harness::fmt_f64(*p)),
            Witness::Antisymmetric => f.write_str("antisymmetric"),
            Witness::Takagi(v) => write!(f, "takagi=[{}]", list(v)),
            Witness::Slater(v) => write!(f, "slater=[{}]", list(v)),
            Witness::Sectors(s) => {
                let parts: Vec<String> =
                    s.iter().map(|w| format!("({},{}):p={},rank={}", w.n1, w.n2, crate::harness::fmt_f64(w.weight), w.rank)).collect();
                write!(f, "sectors=[{}]", parts.join(" "))
            }
            Witness::Entropy { entropy, .. } => write!(f, "S={}", crate::harness::fmt_f64(*entropy)),
            Witness::Schmidt(v) => write!(f, "schmidt=[{}]", list(v)),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Verdict {
    pub definition: Definition,
    pub separable: bool,
    pub witness: Witness,
    pub tolerance: f64,
}

impl Verdict {
    fn new(definition: Definition, separable: bool, witness: Witness, tolerance: f64) -> Self {
        Verdict { definition, separable, witness, tolerance }
    }

    pub fn label(&self) -> &'static str {
        if self.separable {
            "separable"
        } else {
            "entangled"
        }
    }
}

/// Statistics implied by a tensor's symmetry, or an error for tensors
/// that are neither symmetric nor antisymmetric.
pub fn tensor_statistics(t: &FirstQTensor) -> Result<Statistics> {
    if t.particles() <= 1 {
        return Ok(match t.symmetry() {
            Symmetry::Antisymmetric => Statistics::Fermi,
            _ => Statistics::Bose,
        });
    }
    t.detect_symmetry().statistics().ok_or(Error::SymmetryMismatch { expected: "bose or fermi" })
}

/// Mass of `values` (squared, normalized) beyond the first `keep` entries.
fn residual_mass(values: &[f64], keep: usize) -> f64 {
    let total: f64 = values.iter().map(|s| s * s).sum();
    if total == 0.0 {
        return 0.0;
    }
    values.iter().skip(keep).map(|s| s * s).sum::<f64>() / total
}

/// Smallest `r` whose residual Schmidt mass is below `tol`.
pub fn schmidt_rank(values: &[f64], tol: f64) -> usize {
    (1..=values.len()).find(|&r| residual_mass(values, r) < tol).unwrap_or(values.len())
}

fn normalized_values(m: &Mat) -> Vec<f64> {
    let s = singular_values(m);
    let n = s.iter().map(|x| x * x).sum::<f64>().sqrt();
    if n == 0.0 {
        return s;
    }
    s.into_iter().map(|x| x / n).collect()
}

/// Separable-I: `ψ^⊗N` for bosons, decided by the purity of the
/// single-particle marginal. Antisymmetric states of `N ≥ 2` particles
/// are always entangled.
pub fn is_separable_i(t: &FirstQTensor) -> Result<Verdict> {
    let stats = tensor_statistics(t)?;
    if stats == Statistics::Fermi && t.particles() >= 2 {
        return Ok(Verdict::new(Definition::I, false, Witness::Antisymmetric, EPS_TOL));
    }
    let rho = t.reduced_single_particle()?;
    let purity = (&rho * &rho).trace().re;
    Ok(Verdict::new(Definition::I, purity >= 1.0 - EPS_TOL, Witness::Purity(purity), EPS_TOL))
}

/// Separable-II for two particles.
///
/// Bosons: the symmetric coefficient matrix has Takagi rank one
/// (`ψ ⊗ ψ`), or rank two with equal Takagi values (`√2 𝔖[ψ₁⊗ψ₂]`,
/// `ψ₁ ⟂ ψ₂`). The Takagi values of a complex symmetric matrix are its
/// singular values. Fermions: the antisymmetric matrix has Slater rank one.
pub fn is_separable_ii(t: &FirstQTensor) -> Result<Verdict> {
    if t.particles() != 2 {
        return Err(Error::Unsupported(format!("separable-II is decided for N = 2 only, got N = {}", t.particles())));
    }
    let stats = tensor_statistics(t)?;
    let c = t.normalized()?.coefficient_matrix()?;
    let s = normalized_values(&c);
    Ok(match stats {
        Statistics::Bose => {
            let rank_one = residual_mass(&s, 1) < EPS_TOL;
            let equal_pair = residual_mass(&s, 2) < EPS_TOL && s.len() >= 2 && (s[0] - s[1]).abs() < EPS_TOL;
            Verdict::new(Definition::II, rank_one || equal_pair, Witness::Takagi(s), EPS_TOL)
        }
        Statistics::Fermi => {
            let sep = residual_mass(&s, 2) < EPS_TOL;
            Verdict::new(Definition::II, sep, Witness::Slater(s), EPS_TOL)
        }
    })
}

/// Change of basis to `(V₁, V₂)`: row `k` is the conjugate of the `k`-th
/// basis vector.
fn rotation(v1: &[CVec], v2: &[CVec]) -> Mat {
    let all: Vec<&CVec> = v1.iter().chain(v2).collect();
    let d = all[0].len();
    Mat::from_fn(all.len(), d, |k, j| all[k][j].conj())
}

fn binomial(n: usize, k: usize) -> f64 {
    (0..k).fold(1.0, |acc, i| acc * (n - i) as f64 / (i + 1) as f64)
}

/// Separable-III across the orthogonal splitting `V₁ ⊕ V₂`.
pub fn is_separable_iii(t: &FirstQTensor, v1: &[CVec], v2: &[CVec]) -> Result<Verdict> {
    SubalgebraSpec::sector_local(v1.to_vec(), v2.to_vec())?;
    if v1[0].len() != t.dim() {
        return Err(Error::DimensionMismatch { expected: t.dim(), got: v1[0].len() });
    }
    tensor_statistics(t)?;
    let n = t.particles();
    let d1 = v1.len();
    let d2 = v2.len();
    let rotated = t.normalized()?.apply_collective(&rotation(v1, v2))?;
    let d = t.dim();
    let mut sectors = Vec::new();
    for n1 in (0..=n).rev() {
        let n2 = n - n1;
        // Slots 0..n1 in V₁, slots n1..n in V₂.
        let rows = d1.pow(n1 as u32);
        let cols = d2.pow(n2 as u32);
        let mut block = Mat::zeros(rows, cols);
        for r in 0..rows {
            for c in 0..cols {
                let mut flat = 0;
                let mut rr = r;
                let mut digits = vec![0; n];
                for slot in (0..n1).rev() {
                    digits[slot] = rr % d1;
                    rr /= d1;
                }
                let mut cc = c;
                for slot in (n1..n).rev() {
                    digits[slot] = d1 + cc % d2;
                    cc /= d2;
                }
                for &x in &digits {
                    flat = flat * d + x;
                }
                block[(r, c)] = rotated.amps()[flat];
            }
        }
        let weight = binomial(n, n1) * block.iter().map(|z| z.norm_sqr()).sum::<f64>();
        if weight <= EPS_TOL {
            continue;
        }
        let schmidt = normalized_values(&block);
        let rank = schmidt_rank(&schmidt, EPS_TOL);
        sectors.push(SectorWitness { n1, n2, weight, rank, schmidt });
    }
    let separable = sectors.iter().all(|s| s.rank == 1);
    Ok(Verdict::new(Definition::III, separable, Witness::Sectors(sectors), EPS_TOL))
}

/// `X₁ = Σ_k a_{ψ_k}|ψ⟩⟨ψ|a†_{ψ_k} / Σ_k ‖a_{ψ_k}ψ‖²` with its entropy.
#[derive(Debug, Clone, PartialEq)]
pub struct ReducedX1 {
    pub matrix: Mat,
    pub entropy: f64,
    /// Eigenvalues, ascending.
    pub eigenvalues: Vec<f64>,
    /// `Σ_k ‖a_{ψ_k}ψ‖²` before normalization.
    pub support: f64,
}

/// The reduced single-particle matrix for a two-particle state and an
/// orthonormal basis of `𝒦`.
pub fn reduced_x1(t: &FirstQTensor, k_basis: &[CVec]) -> Result<ReducedX1> {
    if t.particles() != 2 {
        return Err(Error::Unsupported(format!("X1 is defined for N = 2, got N = {}", t.particles())));
    }
    let d = t.dim();
    if k_basis.is_empty() {
        return Err(Error::NoSupport);
    }
    if let Some(v) = k_basis.iter().find(|v| v.len() != d) {
        return Err(Error::DimensionMismatch { expected: d, got: v.len() });
    }
    let dev = orthonormality_deviation(k_basis);
    if dev > EPS_TOL {
        return Err(Error::NotOrthonormal(dev));
    }
    let stats = tensor_statistics(t)?;
    let catalog = ModeCatalog::numbered(d, stats);
    let state = t.normalized()?.to_fock(&catalog)?;
    let mut x = Mat::zeros(d, d);
    let mut support = 0.0;
    for psi in k_basis {
        let out = OperatorExpr::annihilate_state(psi, &catalog)?.apply(&state)?;
        let v = CVec::from_fn(d, |j, _| {
            let mut occ = vec![0u8; d];
            occ[j] = 1;
            out.amplitude(&Occupation::new(occ))
        });
        support += v.norm_squared();
        x += &v * v.adjoint();
    }
    if support < EPS_TOL {
        return Err(Error::NoSupport);
    }
    x /= Complex64::new(support, 0.0);
    let (eigenvalues, _) = hermitian_eigen(&x);
    let entropy = entropy(&eigenvalues);
    Ok(ReducedX1 { matrix: x, entropy, eigenvalues, support })
}

/// Entanglement-IV: entangled iff `S(X₁) > 1e-7`.
pub fn is_entangled_iv(t: &FirstQTensor, k_basis: &[CVec]) -> Result<Verdict> {
    let x = reduced_x1(t, k_basis)?;
    Ok(Verdict::new(Definition::IV, x.entropy <= EPS_ENTROPY, Witness::Entropy { entropy: x.entropy, eigenvalues: x.eigenvalues }, EPS_ENTROPY))
}

/// Separable-V across the mode bipartition `(left, right)`.
///
/// Each basis term `a†_{i_1}⋯a†_{i_k}|vac⟩` (ascending catalog order) is
/// rewritten with the left modes first; for fermions this costs one sign
/// per occupied (right, left) pair with the right mode earlier in the
/// catalog. The amplitudes then form a matrix indexed by left and right
/// occupations whose rank decides separability.
pub fn is_separable_v(s: &StateVector, left: &[usize], right: &[usize]) -> Result<Verdict> {
    SubalgebraSpec::mode_bipartition(s.catalog(), left.to_vec(), right.to_vec())?;
    let s = s.normalized()?;
    let fermi = s.statistics() == Statistics::Fermi;
    let mut is_left = vec![false; s.catalog().len()];
    for &l in left {
        is_left[l] = true;
    }
    let mut lefts: Vec<Vec<u8>> = Vec::new();
    let mut rights: Vec<Vec<u8>> = Vec::new();
    let mut entries = Vec::new();
    for (occ, &amp) in s.terms() {
        let o = occ.as_slice();
        let lk: Vec<u8> = left.iter().map(|&m| o[m]).collect();
        let rk: Vec<u8> = right.iter().map(|&m| o[m]).collect();
        let mut sign = 1.0;
        if fermi {
            let mut right_seen = 0usize;
            for (m, &n) in o.iter().enumerate() {
                if n == 0 {
                    continue;
                }
                if is_left[m] {
                    if right_seen % 2 == 1 {
                        sign = -sign;
                    }
                } else {
                    right_seen += 1;
                }
            }
        }
        let li = position_or_push(&mut lefts, lk);
        let ri = position_or_push(&mut rights, rk);
        entries.push((li, ri, amp * sign));
    }
    let mut m = Mat::zeros(lefts.len(), rights.len());
    for (li, ri, a) in entries {
        m[(li, ri)] += a;
    }
    let schmidt = normalized_values(&m);
    let separable = schmidt_rank(&schmidt, EPS_TOL) == 1;
    Ok(Verdict::new(Definition::V, separable, Witness::Schmidt(schmidt), EPS_TOL))
}

fn position_or_push(v: &mut Vec<Vec<u8>>, key: Vec<u8>) -> usize {
    match v.iter().position(|k| *k == key) {
        Some(i) => i,
        None => {
            v.push(key);
            v.len() - 1
        }
    }
}

/// Observables whose Hermiticity can be checked.
pub trait Observable {
    fn hermiticity_deviation(&self) -> f64;
}

impl Observable for OperatorExpr {
    fn hermiticity_deviation(&self) -> f64 {
        OperatorExpr::hermiticity_deviation(self)
    }
}

impl Observable for Mat {
    fn hermiticity_deviation(&self) -> f64 {
        hermiticity_deviation(self)
    }
}

/// Quantum Fisher information `4(⟨G²⟩ − ⟨G⟩²)` of a pure state for
/// phase shifts generated by `G`.
pub fn qfi_phase<S: ProbeState<G>, G: Observable>(s: &S, g: &G) -> Result<f64> {
    let dev = g.hermiticity_deviation();
    if dev >= EPS_TOL {
        return Err(Error::NotHermitian(dev));
    }
    let mean = s.expect(g)?;
    let second = s.expect_product(g, g)?;
    Ok(4.0 * (second.re - mean.re * mean.re))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::firstq::{sym_single, SingleParticleBasis};
    use crate::linalg::{basis_vector, c, pauli_x, pauli_z, r, random_state, random_unitary};
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn e(d: usize, i: usize) -> CVec {
        basis_vector(d, i)
    }

    fn pair(stats: Statistics, a: &CVec, b: &CVec) -> FirstQTensor {
        FirstQTensor::product(&[a.clone(), b.clone()]).unwrap().symmetrize(stats).normalized().unwrap()
    }

    #[test]
    fn product_of_equal_states_is_separable_i() {
        let mut rng = ChaCha8Rng::seed_from_u64(21);
        let psi = random_state(4, &mut rng);
        let t = FirstQTensor::product(&[psi.clone(), psi.clone(), psi]).unwrap();
        assert!(is_separable_i(&t).unwrap().separable);
    }

    #[test]
    fn distinct_orbitals_are_entangled_i() {
        let t = pair(Statistics::Bose, &e(4, 0), &e(4, 3));
        assert!(!is_separable_i(&t).unwrap().separable);
        let f = pair(Statistics::Fermi, &e(4, 0), &e(4, 3));
        assert_eq!(is_separable_i(&f).unwrap().witness, Witness::Antisymmetric);
    }

    #[test]
    fn separable_ii_examples() {
        let mut rng = ChaCha8Rng::seed_from_u64(22);
        let u = random_unitary(3, &mut rng);
        let (a, b) = (u.column(0).into_owned(), u.column(1).into_owned());
        for stats in [Statistics::Bose, Statistics::Fermi] {
            assert!(is_separable_ii(&pair(stats, &a, &b)).unwrap().separable, "{stats}");
        }
        // ⟨ψ₁|ψ₂⟩ = 1/2
        let half = (&a * r(0.5)) + (&b * r(0.75f64.sqrt()));
        assert!(!is_separable_ii(&pair(Statistics::Bose, &a, &half)).unwrap().separable);
        let t = FirstQTensor::product(&[a.clone(), a.clone()]).unwrap();
        assert!(is_separable_ii(&t).unwrap().separable);
        let three = FirstQTensor::product(&[a.clone(), a.clone(), a]).unwrap();
        assert!(matches!(is_separable_ii(&three), Err(Error::Unsupported(_))));
    }

    #[test]
    fn separable_iii_examples() {
        let basis = SingleParticleBasis::left_right_spin();
        let l = e(2, 0);
        let rr = e(2, 1);
        let lu = basis.product_vector(&l, &e(2, 0)).unwrap();
        let ld = basis.product_vector(&l, &e(2, 1)).unwrap();
        let ru = basis.product_vector(&rr, &e(2, 0)).unwrap();
        let rd = basis.product_vector(&rr, &e(2, 1)).unwrap();
        let v1 = vec![lu.clone(), ld.clone()];
        let v2 = vec![ru.clone(), rd.clone()];
        let phi2 = pair(Statistics::Bose, &lu, &rd).try_add(&pair(Statistics::Bose, &ld, &ru)).unwrap().normalized().unwrap();
        let v = is_separable_iii(&phi2, &v1, &v2).unwrap();
        assert!(!v.separable);
        let phi1 = pair(Statistics::Bose, &lu, &rd);
        assert!(is_separable_iii(&phi1, &v1, &v2).unwrap().separable);
    }

    #[test]
    fn dicke_states_are_separable_iii() {
        let zero = e(2, 0);
        let one = e(2, 1);
        for k in 0..=3 {
            let mut factors = vec![zero.clone(); k];
            factors.extend(vec![one.clone(); 3 - k]);
            let t = FirstQTensor::product(&factors).unwrap().symmetrize(Statistics::Bose).normalized().unwrap();
            let v = is_separable_iii(&t, std::slice::from_ref(&zero), std::slice::from_ref(&one)).unwrap();
            assert!(v.separable);
            let Witness::Sectors(s) = v.witness else { panic!() };
            assert_eq!(s.len(), 1);
            assert!((s[0].weight - 1.0).abs() < 1e-12);
        }
    }

    #[test]
    fn x1_of_two_local_spins() {
        let basis = SingleParticleBasis::left_right_spin();
        let l = e(2, 0);
        let lu = basis.product_vector(&l, &e(2, 0)).unwrap();
        let ld = basis.product_vector(&l, &e(2, 1)).unwrap();
        let k = vec![lu.clone(), ld.clone()];
        for stats in [Statistics::Bose, Statistics::Fermi] {
            let x = reduced_x1(&pair(stats, &lu, &ld), &k).unwrap();
            assert!((x.entropy - 2f64.ln()).abs() < 1e-12);
            assert!((x.matrix[(0, 0)] - r(0.5)).norm() < 1e-12);
            assert!((x.matrix[(1, 1)] - r(0.5)).norm() < 1e-12);
        }
        let same = FirstQTensor::product(&[lu.clone(), lu.clone()]).unwrap();
        let x = reduced_x1(&same, &k).unwrap();
        assert!(x.entropy.abs() < 1e-12);
        assert!((x.matrix[(0, 0)] - r(1.0)).norm() < 1e-12);
    }

    #[test]
    fn x1_without_support_is_an_error() {
        let t = FirstQTensor::product(&[e(3, 0), e(3, 0)]).unwrap();
        assert!(matches!(reduced_x1(&t, &[e(3, 1)]), Err(Error::NoSupport)));
    }

    #[test]
    fn separable_v_examples() {
        for stats in [Statistics::Bose, Statistics::Fermi] {
            let cat = ModeCatalog::new(["L,up", "L,dn", "R,up", "R,dn"], stats).unwrap();
            let vac = StateVector::vacuum(&cat);
            let a = vac.apply_create(3).unwrap().apply_create(0).unwrap();
            let b = vac.apply_create(2).unwrap().apply_create(1).unwrap();
            assert!(is_separable_v(&a, &[0, 1], &[2, 3]).unwrap().separable);
            let ent = a.try_add(&b).unwrap();
            let v = is_separable_v(&ent, &[0, 1], &[2, 3]).unwrap();
            assert!(!v.separable);
            let Witness::Schmidt(s) = v.witness else { panic!() };
            assert!((s[0] - 0.5f64.sqrt()).abs() < 1e-12 && (s[1] - 0.5f64.sqrt()).abs() < 1e-12);
            let same = vac.apply_create(0).unwrap().apply_create(1).unwrap();
            assert!(is_separable_v(&same, &[0, 1], &[2, 3]).unwrap().separable);
        }
    }

    #[test]
    fn fermionic_reordering_sign_matters() {
        // Interleaved bipartition {0,2} | {1,3}: the product
        // (a†0 + a†2)(a†1 + a†3)|vac⟩ contains a†2 a†1 = -a†1 a†2, so its
        // catalog-ordered amplitudes only form a rank-1 matrix once the
        // reordering sign is applied.
        let cat = ModeCatalog::numbered(4, Statistics::Fermi);
        let vac = StateVector::vacuum(&cat);
        let t1 = vac.apply_create(1).unwrap().apply_create(0).unwrap(); // a†0 a†1
        let t2 = vac.apply_create(3).unwrap().apply_create(2).unwrap(); // a†2 a†3
        let t3 = vac.apply_create(3).unwrap().apply_create(0).unwrap(); // a†0 a†3
        let t4 = vac.apply_create(2).unwrap().apply_create(1).unwrap(); // a†1 a†2
                                                                        // (a†0 + a†2)(a†1 + a†3) = a†0a†1 + a†0a†3 + a†2a†1 + a†2a†3
        let product = [&t1, &t3, &t2].iter().fold(t4.scale(c(-1.0, 0.0)), |acc, s| acc.try_add(s).unwrap());
        assert!(is_separable_v(&product, &[0, 2], &[1, 3]).unwrap().separable);
        let flipped = [&t1, &t3, &t2].iter().fold(t4.clone(), |acc, s| acc.try_add(s).unwrap());
        assert!(!is_separable_v(&flipped, &[0, 2], &[1, 3]).unwrap().separable);
    }

    #[test]
    fn qfi_examples() {
        let jx = sym_single(&(pauli_x() * r(0.5)), 2).unwrap();
        let t = pair(Statistics::Bose, &e(2, 0), &e(2, 1));
        assert!((qfi_phase(&t, &jx).unwrap() - 4.0).abs() < 1e-12);
        let zz = FirstQTensor::product(&[e(2, 0), e(2, 0)]).unwrap();
        assert!((qfi_phase(&zz, &jx).unwrap() - 2.0).abs() < 1e-12);
        // (|0⟩+|1⟩)/√2 is an eigenvector of σ_x, so the variance vanishes.
        let plus = (e(2, 0) + e(2, 1)) * r(0.5f64.sqrt());
        let pp = FirstQTensor::product(&[plus.clone(), plus]).unwrap();
        assert!(qfi_phase(&pp, &jx).unwrap().abs() < 1e-12);
        let nh = sym_single(&(pauli_z() + crate::linalg::pauli_y() * c(0.0, 1.0)), 2).unwrap();
        assert!(matches!(qfi_phase(&pp, &nh), Err(Error::NotHermitian(_))));
    }

    #[test]
    fn definition_parsing() {
        assert_eq!("iv".parse::<Definition>().unwrap(), Definition::IV);
        assert!("VI".parse::<Definition>().is_err());
    }
}
