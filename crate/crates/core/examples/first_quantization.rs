//! Symmetrized tensors and the map between first and second quantization.

use entwb::firstq::{sym_operator, FirstQTensor, SingleParticleBasis};
use entwb::fock::Statistics;
use entwb::linalg::{basis_vector, pauli_z};

fn main() -> entwb::Result<()> {
    let basis = SingleParticleBasis::left_right_spin();
    println!("single-particle labels: {:?}", basis.labels());
    let l_up = basis_vector(4, 0);
    let r_dn = basis_vector(4, 3);

    for stats in [Statistics::Bose, Statistics::Fermi] {
        let t = FirstQTensor::product(&[l_up.clone(), r_dn.clone()])?.symmetrize(stats);
        println!("[{}] norm of S[L,up (x) R,dn] = {:.6}", stats.name(), t.norm());
        let t = t.normalized()?;
        let cat = basis.catalog(stats);
        let fock = t.to_fock(&cat)?;
        println!("[{}] in Fock space: {fock:?}", stats.name());
        let back = FirstQTensor::from_fock(&fock)?;
        println!("[{}] round trip deviation {:.2e}", stats.name(), back.max_abs_diff(&t)?);
    }

    // P(O1, O2) on two particles, here a spin observable on each side.
    let o = sym_operator(&[pauli_z().clone(), nalgebra::DMatrix::identity(2, 2)])?;
    println!("\nP(sigma_z, 1) =\n{o}");
    Ok(())
}
