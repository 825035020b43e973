//! Reduced single-particle matrix X1 relative to a subspace K and its entropy.

use entwb::classify::reduced_x1;
use entwb::firstq::FirstQTensor;
use entwb::fock::Statistics;
use entwb::linalg::{basis_vector, random_state, random_unitary, CVec};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn main() -> entwb::Result<()> {
    let e = |i| basis_vector(4, i);
    let k = vec![e(0), e(1)];

    let t = FirstQTensor::product(&[e(0), e(1)])?.symmetrize(Statistics::Bose).normalized()?;
    let x = reduced_x1(&t, &k)?;
    println!("S[L up (x) L dn]: S(X1) = {:.6} (log 2 = {:.6})", x.entropy, 2f64.ln());

    let mut rng = ChaCha8Rng::seed_from_u64(1);
    let psi = random_state(4, &mut rng);
    let t = FirstQTensor::product(&[psi.clone(), psi])?;
    println!("psi (x) psi: S(X1) = {:.2e}", reduced_x1(&t, &k)?.entropy);

    // A different orthonormal basis of the same K gives the same X1.
    let u = random_unitary(2, &mut rng);
    let rotated: Vec<CVec> = (0..2).map(|j| &k[0] * u[(0, j)] + &k[1] * u[(1, j)]).collect();
    let t = FirstQTensor::product(&[e(0), e(2)])?.symmetrize(Statistics::Fermi).normalized()?;
    let a = reduced_x1(&t, &k)?;
    let b = reduced_x1(&t, &rotated)?;
    println!("basis change moves X1 by {:.1e}", entwb::linalg::max_abs_diff(&a.matrix, &b.matrix));
    Ok(())
}
