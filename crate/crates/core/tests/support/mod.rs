//! Shared helpers for the integration tests, including a brute-force
//! separable-II oracle that knows nothing about Takagi or Slater ranks.

#![allow(dead_code)]

use entwb::algebra::OperatorExpr;
use entwb::firstq::{FirstQTensor, SingleParticleBasis};
use entwb::fock::{ModeCatalog, StateVector, Statistics};
use entwb::linalg::{basis_vector, random_complex, random_state, random_unitary, unitary_exp, CVec, Mat};
use entwb::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// `|region, spin⟩` in the four-dimensional left/right-spin space.
pub fn at(region: usize, spin: &CVec) -> CVec {
    SingleParticleBasis::left_right_spin().product_vector(&basis_vector(2, region), spin).unwrap()
}

fn unit(v: CVec) -> CVec {
    let n = v.norm();
    v / Complex64::new(n, 0.0)
}

/// Hermitian basis of `d × d` matrices.
fn generators(d: usize) -> Vec<Mat> {
    let mut out = Vec::new();
    for i in 0..d {
        for j in i..d {
            let mut re = Mat::zeros(d, d);
            re[(i, j)] = Complex64::new(1.0, 0.0);
            re[(j, i)] = Complex64::new(1.0, 0.0);
            out.push(re);
            if i != j {
                let mut im = Mat::zeros(d, d);
                im[(i, j)] = Complex64::new(0.0, 1.0);
                im[(j, i)] = Complex64::new(0.0, -1.0);
                out.push(im);
            }
        }
    }
    out
}

type Fixed<const D: usize> = nalgebra::SMatrix<Complex64, D, D>;

fn fixed<const D: usize>(m: &Mat) -> Fixed<D> {
    Fixed::<D>::from_fn(|i, j| m[(i, j)])
}

/// Moves `exp(±isG)` for each generator, with `s` halving from 1/2 to 1e-7.
fn move_ladder<const D: usize>() -> Vec<Vec<Fixed<D>>> {
    let gens = generators(D);
    let mut out = Vec::new();
    let mut step = 0.5;
    while step > 1e-7 {
        out.push(gens.iter().flat_map(|g| [unitary_exp(g, step), unitary_exp(g, -step)]).map(|m| fixed(&m)).collect());
        step *= 0.5;
    }
    out
}

/// Compass search over `U(d)` from `u`: right-multiply by the moves of
/// each rung while some move improves `f`, then go one rung finer.
fn climb<const D: usize>(u: Fixed<D>, ladder: &[Vec<Fixed<D>>], f: &dyn Fn(&Fixed<D>) -> f64) -> f64 {
    let mut u = u;
    let mut best = f(&u);
    for moves in ladder {
        let mut improved = true;
        let mut sweeps = 0;
        while improved && sweeps < 20 {
            improved = false;
            sweeps += 1;
            for m in moves {
                let cand = u * m;
                let val = f(&cand);
                if val > best {
                    best = val;
                    u = cand;
                    improved = true;
                }
            }
        }
    }
    best
}

/// Largest fidelity of the state with a normalized `√2 𝔖[φ⊗χ]`, `φ ⟂ χ`,
/// or (bosons) with `φ⊗φ`. Both families are columns of a unitary `U`:
/// with `M = Uᵀ C̄ U` the fidelities are `2|M₀₁|²` and `|M₀₀|²`. Each is
/// maximized by compass search from `restarts` random unitaries.
pub fn sep_ii_fidelity<R: Rng>(t: &FirstQTensor, stats: Statistics, restarts: usize, rng: &mut R) -> f64 {
    let c = t.normalized().unwrap().coefficient_matrix().unwrap();
    match c.nrows() {
        2 => fidelity_fixed::<2, R>(&c, stats, restarts, rng),
        3 => fidelity_fixed::<3, R>(&c, stats, restarts, rng),
        4 => fidelity_fixed::<4, R>(&c, stats, restarts, rng),
        d => panic!("oracle supports d = 2..4, got {d}"),
    }
}

fn fidelity_fixed<const D: usize, R: Rng>(c: &Mat, stats: Statistics, restarts: usize, rng: &mut R) -> f64 {
    let cc: Fixed<D> = fixed(&c.map(|z| z.conj()));
    let ladder = move_ladder::<D>();
    let orth = |u: &Fixed<D>| {
        let m = u.transpose() * cc * u;
        2.0 * m[(0, 1)].norm_sqr()
    };
    let equal = |u: &Fixed<D>| {
        let m = u.transpose() * cc * u;
        m[(0, 0)].norm_sqr()
    };
    let mut best = 0.0f64;
    for _ in 0..restarts {
        best = best.max(climb(fixed(&random_unitary(D, rng)), &ladder, &orth));
        if stats == Statistics::Bose {
            best = best.max(climb(fixed(&random_unitary(D, rng)), &ladder, &equal));
        }
        if best > 1.0 - 1e-12 {
            break;
        }
    }
    best
}

/// Oracle verdict: some `𝔖[φ⊗χ]` reproduces the state.
pub fn sep_ii_oracle<R: Rng>(t: &FirstQTensor, stats: Statistics, rng: &mut R) -> bool {
    sep_ii_fidelity(t, stats, 200, rng) > 1.0 - 1e-8
}

pub fn random_two_particle<R: Rng>(stats: Statistics, d: usize, rng: &mut R) -> FirstQTensor {
    let amps = (0..d * d).map(|_| random_complex(rng)).collect();
    FirstQTensor::new(d, 2, amps).unwrap().symmetrize(stats).normalized().unwrap()
}

/// `𝔖[a⊗b]` for random unit `a`, `b`; `relation` picks `b = a`
/// (`Equal`), `b ⟂ a` (`Orthogonal`) or an independent draw.
pub fn random_orbital_pair<R: Rng>(stats: Statistics, d: usize, relation: Pair, rng: &mut R) -> FirstQTensor {
    let q = random_unitary(d, rng);
    let a: CVec = q.column(0).into_owned();
    let b = match relation {
        Pair::Equal => a.clone(),
        Pair::Orthogonal => q.column(1).into_owned(),
        Pair::Generic => random_state(d, rng),
    };
    FirstQTensor::product(&[a, b]).unwrap().symmetrize(stats).normalized().unwrap()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Pair {
    Equal,
    Orthogonal,
    Generic,
}

/// `P(a†_left) Q(a†_right)|vac⟩` with random polynomials of degree ≤ 2.
pub fn random_mode_product<R: Rng>(cat: &ModeCatalog, left: &[usize], right: &[usize], rng: &mut R) -> StateVector {
    let mut poly = |modes: &[usize]| {
        let mut p = OperatorExpr::scalar(cat, random_complex(rng));
        for &m in modes {
            p = p.try_add(&OperatorExpr::create(cat, m).unwrap().scale(random_complex(rng))).unwrap();
        }
        if let [m, n] = modes {
            p = p.try_add(&OperatorExpr::word(cat, &[(*m, true), (*n, true)], random_complex(rng)).unwrap()).unwrap();
        }
        p
    };
    let p = poly(left);
    let q = poly(right);
    p.multiply(&q).unwrap().apply(&StateVector::vacuum(cat)).unwrap().normalized().unwrap()
}

pub fn random_sector<R: Rng>(cat: &ModeCatalog, n: usize, rng: &mut R) -> StateVector {
    let terms: Vec<_> = cat.sector_basis(n).into_iter().map(|o| (o, random_complex(rng))).collect();
    StateVector::from_terms(cat, terms).unwrap().normalized().unwrap()
}
