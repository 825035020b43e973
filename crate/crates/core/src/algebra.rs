//! Observables as finite sums of normally ordered ladder monomials,
//! realized as matrices on particle-number sectors on demand.
//!
//! A monomial `(c, a)` stands for `a†_{c_0} a†_{c_1} ⋯ a_{a_0} a_{a_1} ⋯`
//! with both index lists sorted ascending. Products are brought back to
//! this form by repeated use of the (anti)commutation relations.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use num_complex::Complex64;
use rand::Rng;

use crate::fock::{ModeCatalog, Occupation, StateVector, Statistics};
use crate::linalg::{operator_norm, random_complex, CVec, Mat, ONE, ZERO};
use crate::{Error, Result, EPS_DROP, EPS_TOL};

/// Creation and annihilation index lists of a normally ordered monomial.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Monomial {
    pub create: Vec<usize>,
    pub annihilate: Vec<usize>,
}

impl Monomial {
    pub fn identity() -> Self {
        Monomial { create: Vec::new(), annihilate: Vec::new() }
    }

    pub fn degree(&self) -> usize {
        self.create.len() + self.annihilate.len()
    }

    /// Change in particle number.
    pub fn particle_change(&self) -> isize {
        self.create.len() as isize - self.annihilate.len() as isize
    }
}

/// A single ladder operator inside an unordered word.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Ladder {
    Create(usize),
    Annihilate(usize),
}

#[derive(Clone, PartialEq)]
pub struct OperatorExpr {
    catalog: ModeCatalog,
    terms: BTreeMap<Monomial, Complex64>,
}

impl OperatorExpr {
    pub fn zero(catalog: &ModeCatalog) -> Self {
        OperatorExpr { catalog: catalog.clone(), terms: BTreeMap::new() }
    }

    pub fn identity(catalog: &ModeCatalog) -> Self {
        Self::scalar(catalog, ONE)
    }

    pub fn scalar(catalog: &ModeCatalog, value: Complex64) -> Self {
        let mut op = Self::zero(catalog);
        op.push(Monomial::identity(), value);
        op
    }

    pub fn create(catalog: &ModeCatalog, mode: usize) -> Result<Self> {
        Self::word(catalog, &[(mode, true)], ONE)
    }

    pub fn annihilate(catalog: &ModeCatalog, mode: usize) -> Result<Self> {
        Self::word(catalog, &[(mode, false)], ONE)
    }

    pub fn number(catalog: &ModeCatalog, mode: usize) -> Result<Self> {
        Self::word(catalog, &[(mode, true), (mode, false)], ONE)
    }

    /// Total number operator `Σ_i a†_i a_i`.
    pub fn total_number(catalog: &ModeCatalog) -> Self {
        let mut op = Self::zero(catalog);
        for i in 0..catalog.len() {
            op.push(Monomial { create: vec![i], annihilate: vec![i] }, ONE);
        }
        op
    }

    /// Number operator restricted to a subset of modes.
    pub fn number_on(catalog: &ModeCatalog, modes: &[usize]) -> Result<Self> {
        let mut op = Self::zero(catalog);
        for &m in modes {
            catalog.check_mode(m)?;
            op.push(Monomial { create: vec![m], annihilate: vec![m] }, ONE);
        }
        Ok(op)
    }

    /// `coeff · o_0 o_1 ⋯` for a word of ladder operators given as
    /// `(mode, is_creation)` pairs, normally ordered.
    pub fn word(catalog: &ModeCatalog, word: &[(usize, bool)], coeff: Complex64) -> Result<Self> {
        for &(m, _) in word {
            catalog.check_mode(m)?;
        }
        let w = word.iter().map(|&(m, dag)| if dag { Ladder::Create(m) } else { Ladder::Annihilate(m) }).collect();
        let mut op = Self::zero(catalog);
        normal_order(catalog.statistics(), w, coeff, &mut op);
        op.prune();
        Ok(op)
    }

    /// `Σ_ij O_ij a†_i a_j`; on each `N`-particle sector this is the
    /// matrix of `𝒫(O, 𝟙, …, 𝟙)`.
    pub fn lift_single_particle(op: &Mat, catalog: &ModeCatalog) -> Result<Self> {
        let d = catalog.len();
        if op.nrows() != d || op.ncols() != d {
            return Err(Error::DimensionMismatch { expected: d, got: op.nrows().max(op.ncols()) });
        }
        let mut out = Self::zero(catalog);
        for i in 0..d {
            for j in 0..d {
                out.push(Monomial { create: vec![i], annihilate: vec![j] }, op[(i, j)]);
            }
        }
        out.prune();
        Ok(out)
    }

    /// Annihilator of the single-particle state `ψ`: `a_ψ = Σ_j ψ_j^* a_j`.
    pub fn annihilate_state(psi: &CVec, catalog: &ModeCatalog) -> Result<Self> {
        if psi.len() != catalog.len() {
            return Err(Error::DimensionMismatch { expected: catalog.len(), got: psi.len() });
        }
        let mut out = Self::zero(catalog);
        for (j, v) in psi.iter().enumerate() {
            out.push(Monomial { create: vec![], annihilate: vec![j] }, v.conj());
        }
        out.prune();
        Ok(out)
    }

    /// Creator of the single-particle state `ψ`: `a†_ψ = Σ_j ψ_j a†_j`.
    pub fn create_state(psi: &CVec, catalog: &ModeCatalog) -> Result<Self> {
        Ok(Self::annihilate_state(psi, catalog)?.adjoint())
    }

    pub fn catalog(&self) -> &ModeCatalog {
        &self.catalog
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Monomial, &Complex64)> {
        self.terms.iter()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// Modes touched by any term.
    pub fn support(&self) -> BTreeSet<usize> {
        self.terms.keys().flat_map(|m| m.create.iter().chain(&m.annihilate).copied()).collect()
    }

    /// Every term has even total degree.
    pub fn is_even(&self) -> bool {
        self.terms.keys().all(|m| m.degree() % 2 == 0)
    }

    pub fn conserves_number(&self) -> bool {
        self.terms.keys().all(|m| m.particle_change() == 0)
    }

    fn push(&mut self, m: Monomial, c: Complex64) {
        *self.terms.entry(m).or_insert(ZERO) += c;
    }

    fn prune(&mut self) {
        self.terms.retain(|_, c| c.norm() >= EPS_DROP);
    }

    fn check_catalog(&self, other: &ModeCatalog) -> Result<()> {
        if &self.catalog != other {
            return Err(Error::CatalogMismatch);
        }
        Ok(())
    }

    pub fn try_add(&self, other: &OperatorExpr) -> Result<Self> {
        self.check_catalog(&other.catalog)?;
        let mut out = self.clone();
        for (m, c) in &other.terms {
            out.push(m.clone(), *c);
        }
        out.prune();
        Ok(out)
    }

    pub fn try_sub(&self, other: &OperatorExpr) -> Result<Self> {
        self.try_add(&other.scale(-ONE))
    }

    pub fn scale(&self, factor: Complex64) -> Self {
        let mut out = self.clone();
        for c in out.terms.values_mut() {
            *c *= factor;
        }
        out.prune();
        out
    }

    /// Normally ordered product `self · other`.
    pub fn multiply(&self, other: &OperatorExpr) -> Result<Self> {
        self.check_catalog(&other.catalog)?;
        let stats = self.catalog.statistics();
        let mut out = Self::zero(&self.catalog);
        for (m1, c1) in &self.terms {
            for (m2, c2) in &other.terms {
                let mut w = to_word(m1);
                w.extend(to_word(m2));
                normal_order(stats, w, c1 * c2, &mut out);
            }
        }
        out.prune();
        Ok(out)
    }

    pub fn commutator(&self, other: &OperatorExpr) -> Result<Self> {
        self.multiply(other)?.try_sub(&other.multiply(self)?)
    }

    pub fn adjoint(&self) -> Self {
        let stats = self.catalog.statistics();
        let mut out = Self::zero(&self.catalog);
        for (m, c) in &self.terms {
            let w = to_word(m)
                .into_iter()
                .rev()
                .map(|l| match l {
                    Ladder::Create(i) => Ladder::Annihilate(i),
                    Ladder::Annihilate(i) => Ladder::Create(i),
                })
                .collect();
            normal_order(stats, w, c.conj(), &mut out);
        }
        out.prune();
        out
    }

    /// Largest coefficient of `self − self†`.
    pub fn hermiticity_deviation(&self) -> f64 {
        let diff = self.try_sub(&self.adjoint()).expect("same catalog");
        diff.terms.values().fold(0.0, |m, c| m.max(c.norm()))
    }

    pub fn is_hermitian(&self) -> bool {
        self.hermiticity_deviation() < EPS_TOL
    }

    /// Largest coefficient difference between two expressions.
    pub fn distance_max(&self, other: &OperatorExpr) -> Result<f64> {
        let diff = self.try_sub(other)?;
        Ok(diff.terms.values().fold(0.0, |m, c| m.max(c.norm())))
    }

    pub fn apply(&self, s: &StateVector) -> Result<StateVector> {
        self.check_catalog(s.catalog())?;
        let mut acc = StateVector::zero(&self.catalog);
        for (m, c) in &self.terms {
            let mut v = s.clone();
            for &j in m.annihilate.iter().rev() {
                v = v.apply_annihilate(j)?;
                if v.is_zero() {
                    break;
                }
            }
            if v.is_zero() {
                continue;
            }
            for &i in m.create.iter().rev() {
                v = v.apply_create(i)?;
            }
            acc = acc.try_add(&v.scale(*c))?;
        }
        Ok(acc)
    }

    /// `⟨s|op|s⟩ / ⟨s|s⟩`; warns when `s` is not normalized.
    pub fn expectation(&self, s: &StateVector) -> Result<Complex64> {
        let n2 = s.norm_sqr();
        if n2 < EPS_TOL {
            return Err(Error::ZeroState);
        }
        if (n2 - 1.0).abs() > EPS_TOL {
            log::warn!("expectation on a state with squared norm {n2}");
        }
        Ok(s.inner(&self.apply(s)?)? / n2)
    }

    /// Matrix of the operator from the `n`-particle sector into the
    /// sector it maps to, in `ModeCatalog::sector_basis` order. Terms
    /// that change particle number by a different amount are dropped.
    pub fn sector_matrix(&self, n: usize) -> Result<Mat> {
        let basis = self.catalog.sector_basis(n);
        let index: BTreeMap<&Occupation, usize> = basis.iter().enumerate().map(|(k, o)| (o, k)).collect();
        let mut m = Mat::zeros(basis.len(), basis.len());
        for (col, occ) in basis.iter().enumerate() {
            let v = self.apply(&StateVector::basis(&self.catalog, occ.clone())?)?;
            for (o, a) in v.terms() {
                if let Some(&row) = index.get(o) {
                    m[(row, col)] = *a;
                }
            }
        }
        Ok(m)
    }

    /// Operator norm of `[self, other]` restricted to inputs from the
    /// `n`-particle sector. Outputs may leave the sector.
    pub fn commutator_norm(&self, other: &OperatorExpr, n: usize) -> Result<f64> {
        let comm = self.commutator(other)?;
        if comm.is_zero() {
            return Ok(0.0);
        }
        let basis = self.catalog.sector_basis(n);
        let columns: Vec<StateVector> = basis.iter().map(|o| comm.apply(&StateVector::basis(&self.catalog, o.clone())?)).collect::<Result<_>>()?;
        let rows: BTreeSet<&Occupation> = columns.iter().flat_map(|v| v.terms().map(|(o, _)| o)).collect();
        if rows.is_empty() {
            return Ok(0.0);
        }
        let row_index: BTreeMap<&Occupation, usize> = rows.iter().enumerate().map(|(k, o)| (*o, k)).collect();
        let mut m = Mat::zeros(rows.len(), basis.len());
        for (col, v) in columns.iter().enumerate() {
            for (o, a) in v.terms() {
                m[(row_index[o], col)] = *a;
            }
        }
        Ok(operator_norm(&m))
    }
}

fn to_word(m: &Monomial) -> Vec<Ladder> {
    m.create.iter().map(|&i| Ladder::Create(i)).chain(m.annihilate.iter().map(|&j| Ladder::Annihilate(j))).collect()
}

/// Sorts a run of same-kind operators, returning the permutation sign,
/// or `None` when a fermionic mode repeats.
fn sort_run(run: &mut [usize], stats: Statistics) -> Option<f64> {
    let mut sign = 1.0;
    for i in 1..run.len() {
        let mut j = i;
        while j > 0 && run[j - 1] > run[j] {
            run.swap(j - 1, j);
            sign *= stats.exchange_sign();
            j -= 1;
        }
    }
    if stats == Statistics::Fermi && run.windows(2).any(|w| w[0] == w[1]) {
        return None;
    }
    Some(sign)
}

fn normal_order(stats: Statistics, word: Vec<Ladder>, coeff: Complex64, out: &mut OperatorExpr) {
    let mut work = vec![(word, coeff)];
    while let Some((w, c)) = work.pop() {
        if c.norm() < EPS_DROP * 1e-3 {
            continue;
        }
        let swap_at = w.windows(2).position(|p| matches!((p[0], p[1]), (Ladder::Annihilate(_), Ladder::Create(_))));
        match swap_at {
            Some(k) => {
                let (Ladder::Annihilate(i), Ladder::Create(j)) = (w[k], w[k + 1]) else { unreachable!() };
                // a_i a†_j = δ_ij ± a†_j a_i
                let mut swapped = w.clone();
                swapped.swap(k, k + 1);
                work.push((swapped, c * stats.exchange_sign()));
                if i == j {
                    let mut contracted = w;
                    contracted.drain(k..k + 2);
                    work.push((contracted, c));
                }
            }
            None => {
                let mut create = Vec::new();
                let mut annihilate = Vec::new();
                for l in w {
                    match l {
                        Ladder::Create(i) => create.push(i),
                        Ladder::Annihilate(j) => annihilate.push(j),
                    }
                }
                let (Some(s1), Some(s2)) = (sort_run(&mut create, stats), sort_run(&mut annihilate, stats)) else {
                    continue;
                };
                out.push(Monomial { create, annihilate }, c * s1 * s2);
            }
        }
    }
}

impl fmt::Debug for OperatorExpr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return f.write_str("0");
        }
        for (k, (m, c)) in self.terms.iter().enumerate() {
            if k > 0 {
                f.write_str(" + ")?;
            }
            write!(f, "({:.6}{:+.6}i)", c.re, c.im)?;
            for &i in &m.create {
                write!(f, " a†[{}]", self.catalog.label(i).unwrap_or("?"))?;
            }
            for &j in &m.annihilate {
                write!(f, " a[{}]", self.catalog.label(j).unwrap_or("?"))?;
            }
        }
        Ok(())
    }
}

/// The two commuting subalgebras defining a locality notion.
#[derive(Debug, Clone)]
pub enum SubalgebraSpec {
    /// Symmetrized single-particle operators `𝒫(O_1, 𝟙)` and `𝒫(O_2, 𝟙)`
    /// with `[O_1, O_2] = 0`.
    ParticleLocalPair { o1: Mat, o2: Mat },
    /// Polynomials in the ladder operators of two disjoint mode sets.
    ModeBipartition { left: Vec<usize>, right: Vec<usize> },
    /// Orthogonal single-particle subspaces `V_1 ⟂ V_2`.
    SectorLocal { v1: Vec<CVec>, v2: Vec<CVec> },
}

impl SubalgebraSpec {
    pub fn particle_local(o1: Mat, o2: Mat) -> Result<Self> {
        if o1.shape() != o2.shape() || o1.nrows() != o1.ncols() {
            return Err(Error::DimensionMismatch { expected: o1.nrows(), got: o2.nrows() });
        }
        let dev = operator_norm(&(&o1 * &o2 - &o2 * &o1));
        if dev >= EPS_TOL {
            return Err(Error::NonCommuting(dev));
        }
        Ok(SubalgebraSpec::ParticleLocalPair { o1, o2 })
    }

    pub fn mode_bipartition(catalog: &ModeCatalog, left: Vec<usize>, right: Vec<usize>) -> Result<Self> {
        let mut seen = vec![false; catalog.len()];
        for &m in left.iter().chain(&right) {
            catalog.check_mode(m)?;
            if seen[m] {
                return Err(Error::InvalidPartition(format!("mode {m} appears twice")));
            }
            seen[m] = true;
        }
        if let Some(m) = seen.iter().position(|s| !s) {
            return Err(Error::InvalidPartition(format!("mode {m} is in neither part")));
        }
        Ok(SubalgebraSpec::ModeBipartition { left, right })
    }

    /// Bipartition from mode labels.
    pub fn mode_bipartition_labels<S: AsRef<str>>(catalog: &ModeCatalog, left: &[S], right: &[S]) -> Result<Self> {
        let l = left.iter().map(|s| catalog.index_of(s.as_ref())).collect::<Result<_>>()?;
        let r = right.iter().map(|s| catalog.index_of(s.as_ref())).collect::<Result<_>>()?;
        Self::mode_bipartition(catalog, l, r)
    }

    pub fn sector_local(v1: Vec<CVec>, v2: Vec<CVec>) -> Result<Self> {
        let d = v1.first().or(v2.first()).map(|v| v.len()).ok_or_else(|| Error::InvalidPartition("empty subspaces".into()))?;
        if v1.is_empty() || v2.is_empty() {
            return Err(Error::InvalidPartition("both subspaces must be non-empty".into()));
        }
        if v1.len() + v2.len() != d {
            return Err(Error::InvalidPartition(format!("subspace dimensions {} + {} do not add up to {d}", v1.len(), v2.len())));
        }
        let all: Vec<CVec> = v1.iter().chain(&v2).cloned().collect();
        if all.iter().any(|v| v.len() != d) {
            return Err(Error::DimensionMismatch { expected: d, got: all.iter().map(|v| v.len()).find(|&n| n != d).unwrap_or(d) });
        }
        let dev = crate::linalg::orthonormality_deviation(&all);
        if dev > EPS_TOL {
            return Err(Error::NotOrthonormal(dev));
        }
        Ok(SubalgebraSpec::SectorLocal { v1, v2 })
    }
}

/// Kind of random mode-local probe.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ProbeBody {
    One,
    Two,
}

/// A random Hermitian element of the algebra generated by the ladder
/// operators of `modes`.
///
/// One-body probes combine `a†_i a_j + h.c.` terms (plus `a†_i + h.c.` for
/// bosons); two-body probes add pair creation `a†_i a†_j + h.c.` and
/// density-density `a†_i a†_j a_k a_l + h.c.` terms. Fermionic probes stay
/// even so that probes on disjoint mode sets commute.
pub fn random_mode_local<R: Rng + ?Sized>(catalog: &ModeCatalog, modes: &[usize], body: ProbeBody, rng: &mut R) -> Result<OperatorExpr> {
    if modes.is_empty() {
        return Err(Error::InvalidPartition("probe on an empty mode set".into()));
    }
    for &m in modes {
        catalog.check_mode(m)?;
    }
    let bose = catalog.statistics() == Statistics::Bose;
    let pick = |rng: &mut R| modes[rng.gen_range(0..modes.len())];
    let mut op = OperatorExpr::zero(catalog);
    let add = |op: &mut OperatorExpr, word: &[(usize, bool)], c: Complex64| -> Result<()> {
        let t = OperatorExpr::word(catalog, word, c)?;
        *op = op.try_add(&t.try_add(&t.adjoint())?)?;
        Ok(())
    };
    for _ in 0..3 {
        let (i, j) = (pick(rng), pick(rng));
        add(&mut op, &[(i, true), (j, false)], random_complex(rng))?;
    }
    if bose {
        let i = pick(rng);
        add(&mut op, &[(i, true)], random_complex(rng))?;
    }
    if body == ProbeBody::Two {
        let (i, j) = (pick(rng), pick(rng));
        add(&mut op, &[(i, true), (j, true)], random_complex(rng))?;
        let (i, j, k, l) = (pick(rng), pick(rng), pick(rng), pick(rng));
        add(&mut op, &[(i, true), (j, true), (k, false), (l, false)], random_complex(rng))?;
    }
    Ok(op)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::firstq::{sym_single, FirstQTensor};
    use crate::linalg::{max_abs_diff, random_matrix, random_state};
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn random_sector_state(cat: &ModeCatalog, n: usize, rng: &mut ChaCha8Rng) -> StateVector {
        let terms: Vec<_> = cat.sector_basis(n).into_iter().map(|o| (o, random_complex(rng))).collect();
        StateVector::from_terms(cat, terms).unwrap()
    }

    #[test]
    fn bose_contraction() {
        let cat = ModeCatalog::numbered(2, Statistics::Bose);
        let prod = OperatorExpr::annihilate(&cat, 0).unwrap().multiply(&OperatorExpr::create(&cat, 0).unwrap()).unwrap();
        let expected = OperatorExpr::identity(&cat).try_add(&OperatorExpr::number(&cat, 0).unwrap()).unwrap();
        assert!(prod.distance_max(&expected).unwrap() < 1e-15);
    }

    #[test]
    fn fermi_contraction() {
        let cat = ModeCatalog::numbered(2, Statistics::Fermi);
        let prod = OperatorExpr::annihilate(&cat, 0).unwrap().multiply(&OperatorExpr::create(&cat, 0).unwrap()).unwrap();
        let expected = OperatorExpr::identity(&cat).try_sub(&OperatorExpr::number(&cat, 0).unwrap()).unwrap();
        assert!(prod.distance_max(&expected).unwrap() < 1e-15);
    }

    #[test]
    fn fermi_repeated_creation_vanishes() {
        let cat = ModeCatalog::numbered(2, Statistics::Fermi);
        let op = OperatorExpr::word(&cat, &[(1, true), (1, true)], ONE).unwrap();
        assert!(op.is_zero());
    }

    #[test]
    fn product_acts_sequentially() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for stats in [Statistics::Bose, Statistics::Fermi] {
            let cat = ModeCatalog::numbered(4, stats);
            for _ in 0..10 {
                let a = random_mode_local(&cat, &[0, 1, 2], ProbeBody::Two, &mut rng).unwrap();
                let b = random_mode_local(&cat, &[1, 2, 3], ProbeBody::Two, &mut rng).unwrap();
                let s = random_sector_state(&cat, 2, &mut rng);
                let lhs = a.multiply(&b).unwrap().apply(&s).unwrap();
                let rhs = a.apply(&b.apply(&s).unwrap()).unwrap();
                assert!(lhs.distance_max(&rhs).unwrap() < 1e-10, "{stats}");
            }
        }
    }

    #[test]
    fn adjoint_is_involution_and_matches_inner_product() {
        let mut rng = ChaCha8Rng::seed_from_u64(12);
        for stats in [Statistics::Bose, Statistics::Fermi] {
            let cat = ModeCatalog::numbered(3, stats);
            let w = OperatorExpr::word(&cat, &[(0, true), (2, false), (1, true)], random_complex(&mut rng)).unwrap();
            assert!(w.adjoint().adjoint().distance_max(&w).unwrap() < 1e-15);
            let u = random_sector_state(&cat, 1, &mut rng);
            let v = random_sector_state(&cat, 1, &mut rng);
            let lhs = w.adjoint().apply(&u).unwrap().inner(&v).unwrap();
            let rhs = u.inner(&w.apply(&v).unwrap()).unwrap();
            assert!((lhs - rhs).norm() < 1e-12);
        }
    }

    #[test]
    fn lift_identity_is_number_operator() {
        let cat = ModeCatalog::numbered(3, Statistics::Bose);
        let lifted = OperatorExpr::lift_single_particle(&Mat::identity(3, 3), &cat).unwrap();
        assert!(lifted.distance_max(&OperatorExpr::total_number(&cat)).unwrap() < 1e-15);
    }

    #[test]
    fn lifted_operator_matches_symmetrized_matrix() {
        let mut rng = ChaCha8Rng::seed_from_u64(13);
        for stats in [Statistics::Bose, Statistics::Fermi] {
            let cat = ModeCatalog::numbered(3, stats);
            let o = random_matrix(3, &mut rng);
            let lifted = OperatorExpr::lift_single_particle(&o, &cat).unwrap();
            let p = sym_single(&o, 2).unwrap();
            for _ in 0..5 {
                let v = random_state(9, &mut rng);
                let t = FirstQTensor::from_vector(3, 2, &v).unwrap().symmetrize(stats);
                let via_fock = lifted.apply(&t.to_fock(&cat).unwrap()).unwrap();
                let via_tensor = t.apply(&p).unwrap().to_fock(&cat).unwrap();
                assert!(via_fock.distance_max(&via_tensor).unwrap() < 1e-12);
            }
        }
    }

    #[test]
    fn commuting_and_noncommuting_hopping() {
        let cat = ModeCatalog::numbered(2, Statistics::Bose);
        let h12 = OperatorExpr::word(&cat, &[(0, true), (1, false)], ONE).unwrap();
        let h21 = h12.adjoint();
        assert!(h12.commutator_norm(&h21, 1).unwrap() > 0.5);
        let n0 = OperatorExpr::number(&cat, 0).unwrap();
        let n1 = OperatorExpr::number(&cat, 1).unwrap();
        assert_eq!(n0.commutator_norm(&n1, 2).unwrap(), 0.0);
    }

    #[test]
    fn sector_matrix_of_lifted_operator() {
        let mut rng = ChaCha8Rng::seed_from_u64(14);
        let cat = ModeCatalog::numbered(2, Statistics::Bose);
        let o = random_matrix(2, &mut rng);
        let m = OperatorExpr::lift_single_particle(&o, &cat).unwrap().sector_matrix(1).unwrap();
        // The one-particle sector basis is |0,1⟩, |1,0⟩.
        let basis = cat.sector_basis(1);
        let idx = |o: &Occupation| if o.get(0) == 1 { 0 } else { 1 };
        for (r, ro) in basis.iter().enumerate() {
            for (c, co) in basis.iter().enumerate() {
                assert!((m[(r, c)] - o[(idx(ro), idx(co))]).norm() < 1e-15);
            }
        }
        assert!(max_abs_diff(&m, &m) == 0.0);
    }

    #[test]
    fn random_probes_are_hermitian_and_local() {
        let mut rng = ChaCha8Rng::seed_from_u64(15);
        for stats in [Statistics::Bose, Statistics::Fermi] {
            let cat = ModeCatalog::numbered(4, stats);
            for body in [ProbeBody::One, ProbeBody::Two] {
                let a = random_mode_local(&cat, &[0, 1], body, &mut rng).unwrap();
                let b = random_mode_local(&cat, &[2, 3], body, &mut rng).unwrap();
                assert!(a.is_hermitian());
                assert!(a.support().iter().all(|&m| m < 2));
                assert!(a.commutator(&b).unwrap().is_zero(), "{stats} {body:?}");
                if stats == Statistics::Fermi {
                    assert!(a.is_even());
                }
            }
        }
    }

    #[test]
    fn subalgebra_validation() {
        let cat = ModeCatalog::numbered(4, Statistics::Bose);
        assert!(SubalgebraSpec::mode_bipartition(&cat, vec![0, 1], vec![2, 3]).is_ok());
        assert!(SubalgebraSpec::mode_bipartition(&cat, vec![0, 1], vec![1, 2, 3]).is_err());
        assert!(SubalgebraSpec::mode_bipartition(&cat, vec![0], vec![2, 3]).is_err());
        let x = crate::linalg::pauli_x();
        let z = crate::linalg::pauli_z();
        assert!(matches!(SubalgebraSpec::particle_local(x.clone(), z), Err(Error::NonCommuting(_))));
        assert!(SubalgebraSpec::particle_local(x.clone(), x).is_ok());
    }
}
