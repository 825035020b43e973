//! Dense complex linear algebra helpers shared by the first-quantization
//! and classification code.

use nalgebra::{DMatrix, DVector, SymmetricEigen};
use num_complex::Complex64;
use rand::Rng;
use rand_distr::StandardNormal;

pub type Mat = DMatrix<Complex64>;
pub type CVec = DVector<Complex64>;

pub const ZERO: Complex64 = Complex64::new(0.0, 0.0);
pub const ONE: Complex64 = Complex64::new(1.0, 0.0);
pub const I: Complex64 = Complex64::new(0.0, 1.0);

#[inline]
pub fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

#[inline]
pub fn r(re: f64) -> Complex64 {
    Complex64::new(re, 0.0)
}

pub fn identity(n: usize) -> Mat {
    Mat::identity(n, n)
}

/// Kronecker product `a ⊗ b` with `a` on the most significant index.
pub fn kron(a: &Mat, b: &Mat) -> Mat {
    let (ar, ac) = a.shape();
    let (br, bc) = b.shape();
    Mat::from_fn(ar * br, ac * bc, |i, j| a[(i / br, j / bc)] * b[(i % br, j % bc)])
}

pub fn kron_vec(a: &CVec, b: &CVec) -> CVec {
    CVec::from_fn(a.len() * b.len(), |i, _| a[i / b.len()] * b[i % b.len()])
}

pub fn basis_vector(dim: usize, index: usize) -> CVec {
    let mut v = CVec::zeros(dim);
    v[index] = ONE;
    v
}

pub fn projector(v: &CVec) -> Mat {
    v * v.adjoint()
}

pub fn diag(values: &[f64]) -> Mat {
    Mat::from_fn(values.len(), values.len(), |i, j| if i == j { r(values[i]) } else { ZERO })
}

pub fn pauli_x() -> Mat {
    Mat::from_row_slice(2, 2, &[ZERO, ONE, ONE, ZERO])
}

pub fn pauli_y() -> Mat {
    Mat::from_row_slice(2, 2, &[ZERO, -I, I, ZERO])
}

pub fn pauli_z() -> Mat {
    Mat::from_row_slice(2, 2, &[ONE, ZERO, ZERO, -ONE])
}

/// Singular values in non-increasing order.
pub fn singular_values(m: &Mat) -> Vec<f64> {
    if m.nrows() == 0 || m.ncols() == 0 {
        return Vec::new();
    }
    let mut s: Vec<f64> = m.clone().svd(false, false).singular_values.iter().copied().collect();
    s.sort_by(|a, b| b.total_cmp(a));
    s
}

pub fn operator_norm(m: &Mat) -> f64 {
    singular_values(m).first().copied().unwrap_or(0.0)
}

pub fn numerical_rank(singular_values: &[f64], tol: f64) -> usize {
    singular_values.iter().filter(|&&s| s > tol).count()
}

/// Largest entry of `m - m†` in absolute value.
pub fn hermiticity_deviation(m: &Mat) -> f64 {
    (m - m.adjoint()).iter().fold(0.0, |acc, z| acc.max(z.norm()))
}

pub fn max_abs_diff(a: &Mat, b: &Mat) -> f64 {
    (a - b).iter().fold(0.0, |acc, z| acc.max(z.norm()))
}

/// Eigen-decomposition of a Hermitian matrix, eigenvalues ascending with
/// eigenvectors as matching columns.
pub fn hermitian_eigen(m: &Mat) -> (Vec<f64>, Mat) {
    let h = (m + m.adjoint()) * r(0.5);
    let eig = SymmetricEigen::new(h);
    let mut order: Vec<usize> = (0..eig.eigenvalues.len()).collect();
    order.sort_by(|&a, &b| eig.eigenvalues[a].total_cmp(&eig.eigenvalues[b]));
    let values = order.iter().map(|&k| eig.eigenvalues[k]).collect();
    let vectors = Mat::from_fn(m.nrows(), order.len(), |i, j| eig.eigenvectors[(i, order[j])]);
    (values, vectors)
}

/// Von Neumann entropy (natural log) of a spectrum; non-positive entries
/// contribute nothing.
pub fn entropy(eigenvalues: &[f64]) -> f64 {
    eigenvalues.iter().filter(|&&p| p > 0.0).map(|&p| -p * p.ln()).sum::<f64>().max(0.0)
}

pub fn random_complex<R: Rng + ?Sized>(rng: &mut R) -> Complex64 {
    c(rng.sample(StandardNormal), rng.sample(StandardNormal))
}

/// Haar-random unit vector.
pub fn random_state<R: Rng + ?Sized>(dim: usize, rng: &mut R) -> CVec {
    let v = CVec::from_fn(dim, |_, _| random_complex(rng));
    let n = v.norm();
    v / r(n)
}

pub fn random_matrix<R: Rng + ?Sized>(dim: usize, rng: &mut R) -> Mat {
    Mat::from_fn(dim, dim, |_, _| random_complex(rng))
}

pub fn random_hermitian<R: Rng + ?Sized>(dim: usize, rng: &mut R) -> Mat {
    let a = random_matrix(dim, rng);
    (&a + a.adjoint()) * r(0.5)
}

/// Haar-random unitary from the QR decomposition of a Ginibre matrix,
/// with the phases of `R`'s diagonal absorbed into `Q`.
pub fn random_unitary<R: Rng + ?Sized>(dim: usize, rng: &mut R) -> Mat {
    let qr = random_matrix(dim, rng).qr();
    let (mut q, rr) = (qr.q(), qr.r());
    for j in 0..dim {
        let d = rr[(j, j)];
        let phase = if d.norm() > 0.0 { d / r(d.norm()) } else { ONE };
        for i in 0..dim {
            q[(i, j)] *= phase;
        }
    }
    q
}

/// Matrix exponential `exp(i θ H)` of a Hermitian `H` via its spectrum.
pub fn unitary_exp(h: &Mat, theta: f64) -> Mat {
    let (vals, vecs) = hermitian_eigen(h);
    let phases = Mat::from_fn(vals.len(), vals.len(), |i, j| if i == j { Complex64::from_polar(1.0, theta * vals[i]) } else { ZERO });
    &vecs * phases * vecs.adjoint()
}

/// Checks that the columns of `vectors` are orthonormal; returns the
/// largest deviation of the Gram matrix from the identity.
pub fn orthonormality_deviation(vectors: &[CVec]) -> f64 {
    let mut dev: f64 = 0.0;
    for (i, a) in vectors.iter().enumerate() {
        for (j, b) in vectors.iter().enumerate() {
            let target = if i == j { ONE } else { ZERO };
            dev = dev.max((a.dotc(b) - target).norm());
        }
    }
    dev
}
