//! Occupation-number representation of multi-mode Fock states.
//!
//! Fermionic signs follow the Jordan–Wigner string relative to the fixed
//! catalog order: `a†_m` and `a_m` pick up `(-1)^(n_0 + … + n_{m-1})`.
//! Every sign-sensitive conversion in the crate relies on this one
//! convention. In particular the basis vector with occupied modes
//! `i_1 < … < i_k` equals `a†_{i_1} ⋯ a†_{i_k} |vac⟩` with a plus sign.

use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::sync::Arc;

use num_complex::Complex64;

use crate::linalg::{ONE, ZERO};
use crate::{Error, Result, EPS_DROP, EPS_TOL};

/// Exchange statistics of the particles populating a catalog.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Statistics {
    Bose,
    Fermi,
}

impl Statistics {
    /// `+1` for bosons, `-1` for fermions.
    pub fn exchange_sign(self) -> f64 {
        match self {
            Statistics::Bose => 1.0,
            Statistics::Fermi => -1.0,
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            Statistics::Bose => "bose",
            Statistics::Fermi => "fermi",
        }
    }
}

impl fmt::Display for Statistics {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Debug, PartialEq, Eq)]
struct CatalogInner {
    labels: Vec<String>,
    statistics: Statistics,
}

/// An ordered list of distinct mode labels with fixed statistics.
///
/// Cloning is cheap; the label list is shared.
#[derive(Clone, PartialEq, Eq)]
pub struct ModeCatalog(Arc<CatalogInner>);

impl ModeCatalog {
    pub fn new<I, S>(labels: I, statistics: Statistics) -> Result<Self>
    where
        I: IntoIterator<Item = S>,
        S: Into<String>,
    {
        let labels: Vec<String> = labels.into_iter().map(Into::into).collect();
        for (i, l) in labels.iter().enumerate() {
            if labels[..i].contains(l) {
                return Err(Error::DuplicateMode(l.clone()));
            }
        }
        Ok(ModeCatalog(Arc::new(CatalogInner { labels, statistics })))
    }

    /// Catalog with labels `"0"`, `"1"`, ….
    pub fn numbered(modes: usize, statistics: Statistics) -> Self {
        Self::new((0..modes).map(|i| i.to_string()), statistics).expect("numbered labels are distinct")
    }

    pub fn len(&self) -> usize {
        self.0.labels.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.labels.is_empty()
    }

    pub fn statistics(&self) -> Statistics {
        self.0.statistics
    }

    pub fn labels(&self) -> &[String] {
        &self.0.labels
    }

    pub fn label(&self, index: usize) -> Option<&str> {
        self.0.labels.get(index).map(String::as_str)
    }

    pub fn index_of(&self, label: &str) -> Result<usize> {
        self.0.labels.iter().position(|l| l == label).ok_or_else(|| Error::UnknownMode(label.to_string()))
    }

    pub fn check_mode(&self, index: usize) -> Result<()> {
        if index < self.len() {
            Ok(())
        } else {
            Err(Error::InvalidMode { index, len: self.len() })
        }
    }

    /// Same labels, other statistics.
    pub fn with_statistics(&self, statistics: Statistics) -> Self {
        ModeCatalog(Arc::new(CatalogInner { labels: self.0.labels.clone(), statistics }))
    }

    /// All occupations with exactly `particles` quanta, in lexicographic
    /// order of the occupation tuple.
    pub fn sector_basis(&self, particles: usize) -> Vec<Occupation> {
        let cap = match self.statistics() {
            Statistics::Bose => particles,
            Statistics::Fermi => 1,
        };
        let mut out = Vec::new();
        let mut cur = vec![0u8; self.len()];
        fill_sector(&mut cur, 0, particles, cap, &mut out);
        out.sort();
        out
    }
}

fn fill_sector(cur: &mut Vec<u8>, mode: usize, left: usize, cap: usize, out: &mut Vec<Occupation>) {
    if mode == cur.len() {
        if left == 0 {
            out.push(Occupation(cur.clone()));
        }
        return;
    }
    for n in 0..=left.min(cap) {
        cur[mode] = n as u8;
        fill_sector(cur, mode + 1, left - n, cap, out);
    }
    cur[mode] = 0;
}

impl fmt::Debug for ModeCatalog {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "ModeCatalog({}, {:?})", self.statistics(), self.labels())
    }
}

/// Per-mode occupation numbers; the Fock basis label.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Occupation(Vec<u8>);

impl Occupation {
    pub fn new(occ: Vec<u8>) -> Self {
        Occupation(occ)
    }

    pub fn empty(modes: usize) -> Self {
        Occupation(vec![0; modes])
    }

    pub fn as_slice(&self) -> &[u8] {
        &self.0
    }

    pub fn get(&self, mode: usize) -> u8 {
        self.0[mode]
    }

    pub fn total(&self) -> usize {
        self.0.iter().map(|&n| n as usize).sum()
    }

    /// Number of quanta strictly below `mode` in catalog order.
    pub fn count_below(&self, mode: usize) -> usize {
        self.0[..mode].iter().map(|&n| n as usize).sum()
    }

    fn validate(&self, catalog: &ModeCatalog) -> Result<()> {
        if self.0.len() != catalog.len() {
            return Err(Error::InvalidOccupation { occ: self.0.clone(), reason: "length differs from catalog size" });
        }
        if catalog.statistics() == Statistics::Fermi && self.0.iter().any(|&n| n > 1) {
            return Err(Error::InvalidOccupation { occ: self.0.clone(), reason: "fermionic occupancy above 1" });
        }
        Ok(())
    }
}

impl fmt::Debug for Occupation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("|")?;
        for (i, n) in self.0.iter().enumerate() {
            if i > 0 {
                f.write_str(",")?;
            }
            write!(f, "{n}")?;
        }
        f.write_str(">")
    }
}

/// Sparse superposition of occupation states over one catalog.
///
/// Amplitudes smaller than [`EPS_DROP`] are never stored. The state may
/// span several particle-number sectors.
#[derive(Clone, PartialEq)]
pub struct StateVector {
    catalog: ModeCatalog,
    amps: BTreeMap<Occupation, Complex64>,
}

impl StateVector {
    pub fn vacuum(catalog: &ModeCatalog) -> Self {
        Self::basis(catalog, Occupation::empty(catalog.len())).expect("vacuum is always valid")
    }

    /// The zero vector.
    pub fn zero(catalog: &ModeCatalog) -> Self {
        StateVector { catalog: catalog.clone(), amps: BTreeMap::new() }
    }

    pub fn basis(catalog: &ModeCatalog, occ: Occupation) -> Result<Self> {
        Self::from_terms(catalog, [(occ, ONE)])
    }

    /// Sums repeated occupations and drops negligible amplitudes.
    pub fn from_terms<I>(catalog: &ModeCatalog, terms: I) -> Result<Self>
    where
        I: IntoIterator<Item = (Occupation, Complex64)>,
    {
        let mut amps = BTreeMap::new();
        for (occ, a) in terms {
            occ.validate(catalog)?;
            *amps.entry(occ).or_insert(ZERO) += a;
        }
        let mut s = StateVector { catalog: catalog.clone(), amps };
        s.prune();
        Ok(s)
    }

    fn prune(&mut self) {
        self.amps.retain(|_, a| a.norm() >= EPS_DROP);
    }

    pub fn catalog(&self) -> &ModeCatalog {
        &self.catalog
    }

    pub fn statistics(&self) -> Statistics {
        self.catalog.statistics()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Occupation, &Complex64)> {
        self.amps.iter()
    }

    pub fn amplitude(&self, occ: &Occupation) -> Complex64 {
        self.amps.get(occ).copied().unwrap_or(ZERO)
    }

    pub fn is_zero(&self) -> bool {
        self.amps.is_empty()
    }

    pub fn num_terms(&self) -> usize {
        self.amps.len()
    }

    fn check_catalog(&self, other: &StateVector) -> Result<()> {
        if self.catalog == other.catalog {
            Ok(())
        } else {
            Err(Error::CatalogMismatch)
        }
    }

    /// `a†_mode |self⟩`.
    pub fn apply_create(&self, mode: usize) -> Result<Self> {
        self.catalog.check_mode(mode)?;
        let fermi = self.statistics() == Statistics::Fermi;
        let mut out = BTreeMap::new();
        for (occ, &a) in &self.amps {
            let n = occ.get(mode);
            let factor = if fermi {
                if n == 1 {
                    continue;
                }
                if occ.count_below(mode) % 2 == 1 {
                    -1.0
                } else {
                    1.0
                }
            } else {
                ((n as f64) + 1.0).sqrt()
            };
            let mut next = occ.0.clone();
            next[mode] += 1;
            *out.entry(Occupation(next)).or_insert(ZERO) += a * factor;
        }
        let mut s = StateVector { catalog: self.catalog.clone(), amps: out };
        s.prune();
        Ok(s)
    }

    /// `a_mode |self⟩`.
    pub fn apply_annihilate(&self, mode: usize) -> Result<Self> {
        self.catalog.check_mode(mode)?;
        let fermi = self.statistics() == Statistics::Fermi;
        let mut out = BTreeMap::new();
        for (occ, &a) in &self.amps {
            let n = occ.get(mode);
            if n == 0 {
                continue;
            }
            let factor = if fermi {
                if occ.count_below(mode) % 2 == 1 {
                    -1.0
                } else {
                    1.0
                }
            } else {
                (n as f64).sqrt()
            };
            let mut next = occ.0.clone();
            next[mode] -= 1;
            *out.entry(Occupation(next)).or_insert(ZERO) += a * factor;
        }
        let mut s = StateVector { catalog: self.catalog.clone(), amps: out };
        s.prune();
        Ok(s)
    }

    /// `⟨self|other⟩`, conjugate-linear in `self`.
    pub fn inner(&self, other: &StateVector) -> Result<Complex64> {
        self.check_catalog(other)?;
        let (small, large, conj_small) = if self.amps.len() <= other.amps.len() { (self, other, true) } else { (other, self, false) };
        let mut acc = ZERO;
        for (occ, a) in &small.amps {
            if let Some(b) = large.amps.get(occ) {
                acc += if conj_small { a.conj() * b } else { b.conj() * a };
            }
        }
        Ok(acc)
    }

    pub fn norm_sqr(&self) -> f64 {
        self.amps.values().fold(0.0, |acc, a| acc + a.norm_sqr())
    }

    pub fn norm(&self) -> f64 {
        self.norm_sqr().sqrt()
    }

    pub fn scale(&self, factor: Complex64) -> Self {
        let mut s = StateVector { catalog: self.catalog.clone(), amps: self.amps.iter().map(|(o, a)| (o.clone(), a * factor)).collect() };
        s.prune();
        s
    }

    pub fn normalized(&self) -> Result<Self> {
        let n = self.norm();
        if n < EPS_TOL {
            return Err(Error::ZeroState);
        }
        Ok(self.scale(Complex64::new(1.0 / n, 0.0)))
    }

    pub fn try_add(&self, other: &StateVector) -> Result<Self> {
        self.check_catalog(other)?;
        let mut amps = self.amps.clone();
        for (o, a) in &other.amps {
            *amps.entry(o.clone()).or_insert(ZERO) += a;
        }
        let mut s = StateVector { catalog: self.catalog.clone(), amps };
        s.prune();
        Ok(s)
    }

    pub fn try_sub(&self, other: &StateVector) -> Result<Self> {
        self.try_add(&other.scale(-ONE))
    }

    /// Distinct total particle numbers present, ascending.
    pub fn particle_sectors(&self) -> Vec<usize> {
        let mut s: Vec<usize> = self.amps.keys().map(Occupation::total).collect();
        s.sort_unstable();
        s.dedup();
        s
    }

    /// The particle number when the state lies in a single sector.
    pub fn particle_number(&self) -> Result<usize> {
        match self.particle_sectors().as_slice() {
            [n] => Ok(*n),
            [] => Err(Error::ZeroState),
            other => Err(Error::IndefiniteParticleNumber(other.to_vec())),
        }
    }

    /// Component in the `n`-particle sector.
    pub fn sector(&self, n: usize) -> Self {
        StateVector { catalog: self.catalog.clone(), amps: self.amps.iter().filter(|(o, _)| o.total() == n).map(|(o, a)| (o.clone(), *a)).collect() }
    }

    /// Largest amplitude difference against `other`.
    pub fn distance_max(&self, other: &StateVector) -> Result<f64> {
        Ok(self.try_sub(other)?.amps.values().fold(0.0, |m, a| m.max(a.norm())))
    }

    /// Same amplitudes relabelled onto a catalog with identical size and
    /// statistics.
    pub fn with_catalog(&self, catalog: &ModeCatalog) -> Result<Self> {
        if catalog.len() != self.catalog.len() || catalog.statistics() != self.statistics() {
            return Err(Error::CatalogMismatch);
        }
        Ok(StateVector { catalog: catalog.clone(), amps: self.amps.clone() })
    }
}

impl fmt::Debug for StateVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.amps.is_empty() {
            return f.write_str("0");
        }
        for (i, (o, a)) in self.amps.iter().enumerate() {
            if i > 0 {
                f.write_str(" + ")?;
            }
            write!(f, "({:.6}{:+.6}i){:?}", a.re, a.im, o)?;
        }
        Ok(())
    }
}

impl Add for &StateVector {
    type Output = StateVector;

    /// Panics on catalog mismatch; use [`StateVector::try_add`] otherwise.
    fn add(self, rhs: &StateVector) -> StateVector {
        self.try_add(rhs).expect("adding states over different catalogs")
    }
}

impl Sub for &StateVector {
    type Output = StateVector;

    fn sub(self, rhs: &StateVector) -> StateVector {
        self.try_sub(rhs).expect("subtracting states over different catalogs")
    }
}

impl Mul<Complex64> for &StateVector {
    type Output = StateVector;

    fn mul(self, rhs: Complex64) -> StateVector {
        self.scale(rhs)
    }
}

impl Neg for &StateVector {
    type Output = StateVector;

    fn neg(self) -> StateVector {
        self.scale(-ONE)
    }
}


#[cfg(test)]
mod proptests {
    use super::*;
    use proptest::prelude::*;

    proptest! {
        #[test]
        fn bosonic_number_relations(occ in prop::collection::vec(0u8..4, 4), mode in 0usize..4) {
            let cat = ModeCatalog::numbered(4, Statistics::Bose);
            let n = StateVector::basis(&cat, Occupation::new(occ.clone())).unwrap();
            let up_down = n.apply_create(mode).unwrap().apply_annihilate(mode).unwrap();
            let down_up = n.apply_annihilate(mode).unwrap().apply_create(mode).unwrap();
            let k = occ[mode] as f64;
            prop_assert!(up_down.distance_max(&n.scale(Complex64::new(k + 1.0, 0.0))).unwrap() < 1e-12);
            prop_assert!(down_up.distance_max(&n.scale(Complex64::new(k, 0.0))).unwrap() < 1e-12);
        }

        #[test]
        fn fermionic_creations_anticommute(occ in prop::collection::vec(0u8..2, 5), i in 0usize..5, j in 0usize..5) {
            let cat = ModeCatalog::numbered(5, Statistics::Fermi);
            let s = StateVector::basis(&cat, Occupation::new(occ)).unwrap();
            let ij = s.apply_create(j).unwrap().apply_create(i).unwrap();
            let ji = s.apply_create(i).unwrap().apply_create(j).unwrap();
            prop_assert!(ij.try_add(&ji).unwrap().norm() < 1e-12);
        }

        #[test]
        fn ladder_operators_are_adjoint(seed in any::<u64>(), i in 0usize..3, fermi in any::<bool>()) {
            use rand::SeedableRng;
            let stats = if fermi { Statistics::Fermi } else { Statistics::Bose };
            let cat = ModeCatalog::numbered(3, stats);
            let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
            let rand_state = |n: usize, rng: &mut rand_chacha::ChaCha8Rng| {
                let terms: Vec<_> = cat.sector_basis(n).into_iter().map(|o| (o, crate::linalg::random_complex(rng))).collect();
                StateVector::from_terms(&cat, terms).unwrap()
            };
            let u = rand_state(2, &mut rng);
            let v = rand_state(1, &mut rng);
            // ⟨u|a†_i v⟩ = ⟨a_i u|v⟩
            let lhs = u.inner(&v.apply_create(i).unwrap()).unwrap();
            let rhs = u.apply_annihilate(i).unwrap().inner(&v).unwrap();
            prop_assert!((lhs - rhs).norm() < 1e-12);
        }
    }
}
