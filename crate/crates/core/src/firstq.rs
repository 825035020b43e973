//! First quantization: dense rank-N tensors over a `d`-dimensional
//! single-particle space, permutation operators, the (anti)symmetrizing
//! projectors and symmetrized product operators.
//!
//! Slot 0 is the most significant index of the flat amplitude vector, so
//! a product `ψ_0 ⊗ ψ_1 ⊗ …` is stored as the Kronecker product in that
//! order. `permute(π, t)` moves the content of slot `π(j)` into slot `j`,
//! which gives `permute(σ, permute(π, t)) = permute(π∘σ, t)`.
//!
//! The bridge to the Fock representation identifies
//! `√N! 𝔖[e_{i_1} ⊗ … ⊗ e_{i_N}]` with `a†_{i_1} ⋯ a†_{i_N} |vac⟩`.

use std::fmt;

use num_complex::Complex64;

use crate::fock::{ModeCatalog, StateVector, Statistics};
use crate::linalg::{kron, r, CVec, Mat, ONE, ZERO};
use crate::{Error, Result, EPS_TOL, MAX_MODES, MAX_PARTICLES};

/// Largest `d^N` for which dense operator matrices are built.
pub const MAX_DENSE_OPERATOR_DIM: usize = 4096;

/// Exchange symmetry carried by a tensor.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Symmetry {
    Symmetric,
    Antisymmetric,
    None,
}

impl Symmetry {
    pub fn of(stats: Statistics) -> Self {
        match stats {
            Statistics::Bose => Symmetry::Symmetric,
            Statistics::Fermi => Symmetry::Antisymmetric,
        }
    }

    pub fn statistics(self) -> Option<Statistics> {
        match self {
            Symmetry::Symmetric => Some(Statistics::Bose),
            Symmetry::Antisymmetric => Some(Statistics::Fermi),
            Symmetry::None => None,
        }
    }
}

/// All permutations of `0..n` in lexicographic order.
pub fn permutations(n: usize) -> Vec<Vec<usize>> {
    fn rec(cur: &mut Vec<usize>, used: &mut Vec<bool>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == used.len() {
            out.push(cur.clone());
            return;
        }
        for i in 0..used.len() {
            if !used[i] {
                used[i] = true;
                cur.push(i);
                rec(cur, used, out);
                cur.pop();
                used[i] = false;
            }
        }
    }
    let mut out = Vec::new();
    rec(&mut Vec::with_capacity(n), &mut vec![false; n], &mut out);
    out
}

/// `+1` for even permutations, `-1` for odd ones.
pub fn parity(perm: &[usize]) -> f64 {
    let mut inversions = 0usize;
    for i in 0..perm.len() {
        for j in i + 1..perm.len() {
            if perm[i] > perm[j] {
                inversions += 1;
            }
        }
    }
    if inversions.is_multiple_of(2) {
        1.0
    } else {
        -1.0
    }
}

fn check_permutation(perm: &[usize], n: usize) -> Result<()> {
    let mut seen = vec![false; n];
    if perm.len() != n {
        return Err(Error::NotPermutation { perm: perm.to_vec(), n });
    }
    for &p in perm {
        if p >= n || seen[p] {
            return Err(Error::NotPermutation { perm: perm.to_vec(), n });
        }
        seen[p] = true;
    }
    Ok(())
}

fn factorial(n: usize) -> f64 {
    (1..=n).map(|k| k as f64).product()
}

/// Single-particle space, optionally factored as external ⊗ internal.
#[derive(Debug, Clone, PartialEq)]
pub struct SingleParticleBasis {
    dim: usize,
    factors: Option<(Vec<String>, Vec<String>)>,
}

impl SingleParticleBasis {
    pub fn flat(dim: usize) -> Self {
        SingleParticleBasis { dim, factors: None }
    }

    /// Flat index is `ext * d_int + int`.
    pub fn factored<E, I>(external: E, internal: I) -> Self
    where
        E: IntoIterator,
        E::Item: Into<String>,
        I: IntoIterator,
        I::Item: Into<String>,
    {
        let ext: Vec<String> = external.into_iter().map(Into::into).collect();
        let int: Vec<String> = internal.into_iter().map(Into::into).collect();
        SingleParticleBasis { dim: ext.len() * int.len(), factors: Some((ext, int)) }
    }

    /// The `{L,R} × {up,dn}` space used throughout the examples.
    pub fn left_right_spin() -> Self {
        Self::factored(["L", "R"], ["up", "dn"])
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn external_dim(&self) -> Option<usize> {
        self.factors.as_ref().map(|(e, _)| e.len())
    }

    pub fn internal_dim(&self) -> Option<usize> {
        self.factors.as_ref().map(|(_, i)| i.len())
    }

    pub fn index(&self, ext: usize, int: usize) -> Option<usize> {
        let (e, i) = self.factors.as_ref()?;
        (ext < e.len() && int < i.len()).then(|| ext * i.len() + int)
    }

    pub fn split(&self, flat: usize) -> Option<(usize, usize)> {
        let (_, i) = self.factors.as_ref()?;
        (flat < self.dim).then(|| (flat / i.len(), flat % i.len()))
    }

    /// Mode labels; factored bases use `"ext,int"`.
    pub fn labels(&self) -> Vec<String> {
        match &self.factors {
            Some((e, i)) => e.iter().flat_map(|x| i.iter().map(move |y| format!("{x},{y}"))).collect(),
            None => (0..self.dim).map(|k| k.to_string()).collect(),
        }
    }

    pub fn catalog(&self, statistics: Statistics) -> ModeCatalog {
        ModeCatalog::new(self.labels(), statistics).expect("basis labels are distinct")
    }

    /// `|ext⟩ ⊗ |int⟩` from factor vectors.
    pub fn product_vector(&self, ext: &CVec, int: &CVec) -> Result<CVec> {
        let (de, di) = match (self.external_dim(), self.internal_dim()) {
            (Some(a), Some(b)) => (a, b),
            _ => return Err(Error::Unsupported("basis is not factored".into())),
        };
        if ext.len() != de {
            return Err(Error::DimensionMismatch { expected: de, got: ext.len() });
        }
        if int.len() != di {
            return Err(Error::DimensionMismatch { expected: di, got: int.len() });
        }
        Ok(crate::linalg::kron_vec(ext, int))
    }

    /// `|ext⟩⟨ext| ⊗ op`.
    pub fn local_operator(&self, ext: &CVec, op: &Mat) -> Result<Mat> {
        let de = self.external_dim().ok_or_else(|| Error::Unsupported("basis is not factored".into()))?;
        if ext.len() != de {
            return Err(Error::DimensionMismatch { expected: de, got: ext.len() });
        }
        Ok(kron(&crate::linalg::projector(ext), op))
    }
}

/// A rank-N tensor over a `d`-dimensional single-particle space.
#[derive(Clone, PartialEq)]
pub struct FirstQTensor {
    dim: usize,
    particles: usize,
    amps: Vec<Complex64>,
    symmetry: Symmetry,
}

impl FirstQTensor {
    pub fn new(dim: usize, particles: usize, amps: Vec<Complex64>) -> Result<Self> {
        check_size(dim, particles)?;
        let len = dim.pow(particles as u32);
        if amps.len() != len {
            return Err(Error::DimensionMismatch { expected: len, got: amps.len() });
        }
        Ok(FirstQTensor { dim, particles, amps, symmetry: Symmetry::None })
    }

    pub fn zeros(dim: usize, particles: usize) -> Result<Self> {
        check_size(dim, particles)?;
        Self::new(dim, particles, vec![ZERO; dim.pow(particles as u32)])
    }

    /// `v_0 ⊗ v_1 ⊗ …`.
    pub fn product(vectors: &[CVec]) -> Result<Self> {
        let dim = vectors.first().map(|v| v.len()).ok_or(Error::ZeroState)?;
        check_size(dim, vectors.len())?;
        let mut amps = vec![ONE];
        for v in vectors {
            if v.len() != dim {
                return Err(Error::DimensionMismatch { expected: dim, got: v.len() });
            }
            amps = amps.iter().flat_map(|a| v.iter().map(move |b| a * b)).collect();
        }
        Self::new(dim, vectors.len(), amps)
    }

    pub fn single(v: &CVec) -> Result<Self> {
        Self::product(std::slice::from_ref(v))
    }

    pub fn from_vector(dim: usize, particles: usize, v: &CVec) -> Result<Self> {
        Self::new(dim, particles, v.iter().copied().collect())
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn particles(&self) -> usize {
        self.particles
    }

    pub fn amps(&self) -> &[Complex64] {
        &self.amps
    }

    pub fn symmetry(&self) -> Symmetry {
        self.symmetry
    }

    pub fn as_vector(&self) -> CVec {
        CVec::from_column_slice(&self.amps)
    }

    fn flat_index(&self, idx: &[usize]) -> usize {
        idx.iter().fold(0, |acc, &i| acc * self.dim + i)
    }

    fn multi_index(&self, mut flat: usize, out: &mut [usize]) {
        for slot in (0..self.particles).rev() {
            out[slot] = flat % self.dim;
            flat /= self.dim;
        }
    }

    pub fn get(&self, idx: &[usize]) -> Complex64 {
        self.amps[self.flat_index(idx)]
    }

    /// Attaches a symmetry tag after checking it against every adjacent
    /// transposition.
    pub fn with_symmetry(mut self, tag: Symmetry) -> Result<Self> {
        if tag != Symmetry::None && !self.has_symmetry(tag) {
            return Err(Error::SymmetryMismatch { expected: tag.statistics().map(Statistics::name).unwrap_or("none") });
        }
        self.symmetry = tag;
        Ok(self)
    }

    fn has_symmetry(&self, tag: Symmetry) -> bool {
        let sign = match tag {
            Symmetry::Symmetric => 1.0,
            Symmetry::Antisymmetric => -1.0,
            Symmetry::None => return true,
        };
        let scale = self.norm().max(1.0);
        (0..self.particles.saturating_sub(1)).all(|k| {
            let mut swap: Vec<usize> = (0..self.particles).collect();
            swap.swap(k, k + 1);
            let p = self.permute(&swap).expect("adjacent swap is a permutation");
            p.amps.iter().zip(&self.amps).all(|(a, b)| (a - b * sign).norm() <= EPS_TOL * scale)
        })
    }

    /// The tag if set, otherwise the symmetry detected numerically.
    /// A tensor that is both (only the zero tensor or `N ≤ 1`) reports
    /// `Symmetric`.
    pub fn detect_symmetry(&self) -> Symmetry {
        if self.symmetry != Symmetry::None {
            return self.symmetry;
        }
        if self.has_symmetry(Symmetry::Symmetric) {
            Symmetry::Symmetric
        } else if self.has_symmetry(Symmetry::Antisymmetric) {
            Symmetry::Antisymmetric
        } else {
            Symmetry::None
        }
    }

    /// Whether the tensor is a valid state for `stats`.
    pub fn matches_statistics(&self, stats: Statistics) -> bool {
        if self.particles <= 1 {
            return true;
        }
        match self.symmetry {
            Symmetry::None => self.has_symmetry(Symmetry::of(stats)),
            tag => tag == Symmetry::of(stats),
        }
    }

    /// Moves the content of slot `perm[j]` into slot `j`.
    pub fn permute(&self, perm: &[usize]) -> Result<Self> {
        check_permutation(perm, self.particles)?;
        let mut out = vec![ZERO; self.amps.len()];
        let mut idx = vec![0; self.particles];
        let mut src = vec![0; self.particles];
        for (flat, slot) in out.iter_mut().enumerate() {
            self.multi_index(flat, &mut idx);
            for (j, &p) in perm.iter().enumerate() {
                src[p] = idx[j];
            }
            *slot = self.amps[self.flat_index(&src)];
        }
        let symmetry = match self.symmetry {
            Symmetry::Antisymmetric if parity(perm) < 0.0 => Symmetry::Antisymmetric,
            s => s,
        };
        Ok(FirstQTensor { dim: self.dim, particles: self.particles, amps: out, symmetry })
    }

    /// `(1/N!) Σ_π x_π Π_π t` with `x_π = 1` (Bose) or the sign of `π`
    /// (Fermi).
    pub fn symmetrize(&self, stats: Statistics) -> Self {
        let perms = permutations(self.particles);
        let mut out = vec![ZERO; self.amps.len()];
        for p in &perms {
            let sign = match stats {
                Statistics::Bose => 1.0,
                Statistics::Fermi => parity(p),
            };
            let t = self.permute(p).expect("generated permutations are valid");
            for (o, a) in out.iter_mut().zip(&t.amps) {
                *o += a * sign;
            }
        }
        let inv = 1.0 / perms.len() as f64;
        for o in &mut out {
            *o *= inv;
        }
        FirstQTensor { dim: self.dim, particles: self.particles, amps: out, symmetry: Symmetry::of(stats) }
    }

    pub fn tensor(&self, other: &FirstQTensor) -> Result<Self> {
        if other.dim != self.dim {
            return Err(Error::DimensionMismatch { expected: self.dim, got: other.dim });
        }
        check_size(self.dim, self.particles + other.particles)?;
        let amps = self.amps.iter().flat_map(|a| other.amps.iter().map(move |b| a * b)).collect();
        Self::new(self.dim, self.particles + other.particles, amps)
    }

    fn check_same_shape(&self, other: &FirstQTensor) -> Result<()> {
        if self.dim != other.dim {
            return Err(Error::DimensionMismatch { expected: self.dim, got: other.dim });
        }
        if self.particles != other.particles {
            return Err(Error::DimensionMismatch { expected: self.particles, got: other.particles });
        }
        Ok(())
    }

    pub fn try_add(&self, other: &FirstQTensor) -> Result<Self> {
        self.check_same_shape(other)?;
        let amps = self.amps.iter().zip(&other.amps).map(|(a, b)| a + b).collect();
        let symmetry = if self.symmetry == other.symmetry { self.symmetry } else { Symmetry::None };
        Ok(FirstQTensor { dim: self.dim, particles: self.particles, amps, symmetry })
    }

    pub fn scale(&self, factor: Complex64) -> Self {
        FirstQTensor { dim: self.dim, particles: self.particles, amps: self.amps.iter().map(|a| a * factor).collect(), symmetry: self.symmetry }
    }

    pub fn inner(&self, other: &FirstQTensor) -> Result<Complex64> {
        self.check_same_shape(other)?;
        Ok(self.amps.iter().zip(&other.amps).map(|(a, b)| a.conj() * b).sum())
    }

    pub fn norm(&self) -> f64 {
        self.amps.iter().map(|a| a.norm_sqr()).sum::<f64>().sqrt()
    }

    pub fn normalized(&self) -> Result<Self> {
        let n = self.norm();
        if n < EPS_TOL {
            return Err(Error::ZeroState);
        }
        Ok(self.scale(r(1.0 / n)))
    }

    pub fn max_abs_diff(&self, other: &FirstQTensor) -> Result<f64> {
        self.check_same_shape(other)?;
        Ok(self.amps.iter().zip(&other.amps).fold(0.0, |m, (a, b)| m.max((a - b).norm())))
    }

    /// `O|t⟩` for a matrix on the full `d^N` space.
    pub fn apply(&self, op: &Mat) -> Result<Self> {
        if op.ncols() != self.amps.len() || op.nrows() != self.amps.len() {
            return Err(Error::DimensionMismatch { expected: self.amps.len(), got: op.ncols() });
        }
        let v = op * self.as_vector();
        Self::new(self.dim, self.particles, v.iter().copied().collect())
    }

    /// `O_0 ⊗ O_1 ⊗ … |t⟩` slot by slot, without forming the Kronecker
    /// product.
    pub fn apply_local(&self, ops: &[Mat]) -> Result<Self> {
        if ops.len() != self.particles {
            return Err(Error::DimensionMismatch { expected: self.particles, got: ops.len() });
        }
        let mut cur = self.amps.clone();
        let mut idx = vec![0; self.particles];
        for (slot, op) in ops.iter().enumerate() {
            if op.nrows() != self.dim || op.ncols() != self.dim {
                return Err(Error::DimensionMismatch { expected: self.dim, got: op.nrows() });
            }
            let stride = self.dim.pow((self.particles - 1 - slot) as u32);
            let mut next = vec![ZERO; cur.len()];
            for (flat, out) in next.iter_mut().enumerate() {
                self.multi_index(flat, &mut idx);
                let base = flat - idx[slot] * stride;
                *out = (0..self.dim).map(|k| op[(idx[slot], k)] * cur[base + k * stride]).sum();
            }
            cur = next;
        }
        Ok(FirstQTensor { dim: self.dim, particles: self.particles, amps: cur, symmetry: Symmetry::None })
    }

    /// `U^{⊗N} |t⟩`; collective operations keep the exchange symmetry.
    pub fn apply_collective(&self, u: &Mat) -> Result<Self> {
        let mut t = self.apply_local(&vec![u.clone(); self.particles])?;
        t.symmetry = self.symmetry;
        Ok(t)
    }

    /// Matrix with rows indexed by the first `left` slots and columns by
    /// the rest.
    pub fn split_matrix(&self, left: usize) -> Mat {
        let rows = self.dim.pow(left.min(self.particles) as u32);
        let cols = self.amps.len() / rows;
        Mat::from_row_slice(rows, cols, &self.amps)
    }

    /// Two-particle coefficient matrix `C` with `t = Σ C_ij e_i ⊗ e_j`.
    pub fn coefficient_matrix(&self) -> Result<Mat> {
        if self.particles != 2 {
            return Err(Error::Unsupported(format!("coefficient matrix needs N = 2, got {}", self.particles)));
        }
        Ok(self.split_matrix(1))
    }

    /// Single-particle marginal `tr_{2..N} |t⟩⟨t|` of the normalized state.
    pub fn reduced_single_particle(&self) -> Result<Mat> {
        let t = self.normalized()?;
        let m = t.split_matrix(1);
        Ok(&m * m.adjoint())
    }

    /// The unique Fock vector of equal norm.
    pub fn to_fock(&self, catalog: &ModeCatalog) -> Result<StateVector> {
        if catalog.len() != self.dim {
            return Err(Error::DimensionMismatch { expected: catalog.len(), got: self.dim });
        }
        let stats = catalog.statistics();
        if !self.matches_statistics(stats) {
            return Err(Error::SymmetryMismatch { expected: stats.name() });
        }
        let n = self.particles;
        let nf = factorial(n);
        let mut terms = Vec::new();
        for occ in catalog.sector_basis(n) {
            let idx: Vec<usize> = occ.as_slice().iter().enumerate().flat_map(|(m, &k)| std::iter::repeat_n(m, k as usize)).collect();
            let denom: f64 = occ.as_slice().iter().map(|&k| factorial(k as usize)).product();
            let amp = self.get(&idx) * (nf / denom).sqrt();
            terms.push((occ, amp));
        }
        StateVector::from_terms(catalog, terms)
    }

    /// Inverse of [`FirstQTensor::to_fock`] for a state with a definite
    /// particle number.
    pub fn from_fock(state: &StateVector) -> Result<Self> {
        let n = state.particle_number()?;
        let d = state.catalog().len();
        let stats = state.statistics();
        let mut t = FirstQTensor::zeros(d, n)?;
        let nf = factorial(n);
        let perms = permutations(n);
        for (occ, &amp) in state.terms() {
            let idx: Vec<usize> = occ.as_slice().iter().enumerate().flat_map(|(m, &k)| std::iter::repeat_n(m, k as usize)).collect();
            let denom: f64 = occ.as_slice().iter().map(|&k| factorial(k as usize)).product();
            let base = amp / (nf / denom).sqrt();
            let mut arr = vec![0; n];
            for p in &perms {
                for (j, &pj) in p.iter().enumerate() {
                    arr[j] = idx[pj];
                }
                let sign = match stats {
                    Statistics::Bose => 1.0,
                    Statistics::Fermi => parity(p),
                };
                let flat = t.flat_index(&arr);
                t.amps[flat] = base * sign;
            }
        }
        t.symmetry = Symmetry::of(stats);
        Ok(t)
    }
}

impl fmt::Debug for FirstQTensor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "FirstQTensor(d={}, N={}, {:?}) [", self.dim, self.particles, self.symmetry)?;
        let mut idx = vec![0; self.particles];
        let mut first = true;
        for (flat, a) in self.amps.iter().enumerate() {
            if a.norm() < 1e-12 {
                continue;
            }
            self.multi_index(flat, &mut idx);
            if !first {
                f.write_str(", ")?;
            }
            first = false;
            write!(f, "{idx:?}: {:.6}{:+.6}i", a.re, a.im)?;
        }
        f.write_str("]")
    }
}

fn check_size(dim: usize, particles: usize) -> Result<()> {
    if dim == 0 || dim > MAX_MODES {
        return Err(Error::TooLarge(format!("single-particle dimension {dim} not in 1..={MAX_MODES}")));
    }
    if particles > MAX_PARTICLES {
        return Err(Error::TooLarge(format!("{particles} particles exceeds {MAX_PARTICLES}")));
    }
    Ok(())
}

fn check_dense(dim: usize, particles: usize) -> Result<usize> {
    check_size(dim, particles)?;
    let total = dim.pow(particles as u32);
    if total > MAX_DENSE_OPERATOR_DIM {
        return Err(Error::TooLarge(format!("dense operator on {total} dimensions")));
    }
    Ok(total)
}

/// Matrix of `Π_π` on `(ℂ^d)^{⊗N}`.
pub fn permutation_matrix(dim: usize, perm: &[usize]) -> Result<Mat> {
    let n = perm.len();
    let total = check_dense(dim, n)?;
    check_permutation(perm, n)?;
    let mut m = Mat::zeros(total, total);
    let mut idx = vec![0; n];
    let mut src = vec![0; n];
    for row in 0..total {
        let mut f = row;
        for slot in (0..n).rev() {
            idx[slot] = f % dim;
            f /= dim;
        }
        for (j, &p) in perm.iter().enumerate() {
            src[p] = idx[j];
        }
        let col = src.iter().fold(0, |acc, &i| acc * dim + i);
        m[(row, col)] = ONE;
    }
    Ok(m)
}

/// The projector `𝒮` or `𝒜` as a matrix on `(ℂ^d)^{⊗N}`.
pub fn symmetrizer(dim: usize, particles: usize, stats: Statistics) -> Result<Mat> {
    let total = check_dense(dim, particles)?;
    let perms = permutations(particles);
    let mut m = Mat::zeros(total, total);
    for p in &perms {
        let sign = match stats {
            Statistics::Bose => 1.0,
            Statistics::Fermi => parity(p),
        };
        m += permutation_matrix(dim, p)? * r(sign);
    }
    Ok(m * r(1.0 / perms.len() as f64))
}

/// `𝒫(O_1, …, O_N) = Σ_π ⊗_j O_{π(j)}`.
pub fn sym_operator(ops: &[Mat]) -> Result<Mat> {
    let first = ops.first().ok_or_else(|| Error::Unsupported("no operators given".into()))?;
    let d = first.nrows();
    for o in ops {
        if o.nrows() != d || o.ncols() != d {
            return Err(Error::DimensionMismatch { expected: d, got: o.nrows().max(o.ncols()) });
        }
    }
    let total = check_dense(d, ops.len())?;
    let mut acc = Mat::zeros(total, total);
    for p in permutations(ops.len()) {
        let mut term = ops[p[0]].clone();
        for &k in &p[1..] {
            term = kron(&term, &ops[k]);
        }
        acc += term;
    }
    Ok(acc)
}

/// The one-body sum `Σ_j O^{(j)}` on `N` particles; `𝒫(O, 𝟙)` for two.
pub fn sym_single(op: &Mat, particles: usize) -> Result<Mat> {
    if op.nrows() != op.ncols() {
        return Err(Error::DimensionMismatch { expected: op.nrows(), got: op.ncols() });
    }
    let d = op.nrows();
    let total = check_dense(d, particles)?;
    let mut acc = Mat::zeros(total, total);
    for slot in 0..particles {
        let before = Mat::identity(d.pow(slot as u32), d.pow(slot as u32));
        let rest = d.pow((particles - slot - 1) as u32);
        let after = Mat::identity(rest, rest);
        acc += kron(&kron(&before, op), &after);
    }
    Ok(acc)
}

/// Maps a state of identical particles, one in each of the orthonormal
/// external states `external[j]`, onto the tensor product of internal
/// spaces: `√N! 𝔖 ⊗_j |ψ_j, σ_j⟩ ↦ ⊗_j |σ_j⟩`.
///
/// Fails when the input carries weight outside the image of the
/// symmetrized projector `𝒫(P_1⊗𝟙, …, P_N⊗𝟙)`.
pub fn effective_distinguish(t: &FirstQTensor, basis: &SingleParticleBasis, external: &[CVec]) -> Result<FirstQTensor> {
    let (de, di) = match (basis.external_dim(), basis.internal_dim()) {
        (Some(a), Some(b)) => (a, b),
        _ => return Err(Error::Unsupported("effective distinguishability needs a factored basis".into())),
    };
    if t.dim() != basis.dim() {
        return Err(Error::DimensionMismatch { expected: basis.dim(), got: t.dim() });
    }
    let n = t.particles();
    if external.len() != n {
        return Err(Error::DimensionMismatch { expected: n, got: external.len() });
    }
    for e in external {
        if e.len() != de {
            return Err(Error::DimensionMismatch { expected: de, got: e.len() });
        }
    }
    let dev = crate::linalg::orthonormality_deviation(external);
    if dev > EPS_TOL {
        return Err(Error::NotOrthonormal(dev));
    }
    if t.detect_symmetry() == Symmetry::None && n > 1 {
        return Err(Error::SymmetryMismatch { expected: "bose or fermi" });
    }
    // Contract each slot's external factor with the conjugate of its
    // designated external state.
    let bras: Vec<Mat> = external
        .iter()
        .map(|e| {
            let mut m = Mat::zeros(di, de * di);
            for x in 0..de {
                for s in 0..di {
                    m[(s, x * di + s)] = e[x].conj();
                }
            }
            m
        })
        .collect();
    let mut cur = t.amps().to_vec();
    let mut dims = vec![de * di; n];
    for slot in 0..n {
        let inner: usize = dims[slot + 1..].iter().product();
        let outer: usize = dims[..slot].iter().product();
        let d_in = dims[slot];
        let mut next = vec![ZERO; outer * di * inner];
        for o in 0..outer {
            for s in 0..di {
                for k in 0..d_in {
                    let w = bras[slot][(s, k)];
                    if w == ZERO {
                        continue;
                    }
                    for i in 0..inner {
                        next[(o * di + s) * inner + i] += w * cur[(o * d_in + k) * inner + i];
                    }
                }
            }
        }
        cur = next;
        dims[slot] = di;
    }
    let scale = factorial(n).sqrt();
    let out = FirstQTensor::new(di, n, cur.into_iter().map(|a| a * scale).collect())?;
    let weight = t.norm().powi(2) - out.norm().powi(2);
    if weight > EPS_TOL {
        return Err(Error::OutsideDomain { weight });
    }
    Ok(out)
}
