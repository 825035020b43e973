//! Phase sensitivity 4 Var(G) of two-level states against the shot-noise
//! value N.

use entwb::classify::{is_separable_ii, qfi_phase};
use entwb::firstq::{sym_single, FirstQTensor};
use entwb::fock::{ModeCatalog, Occupation, StateVector, Statistics};
use entwb::linalg::{basis_vector, pauli_x, r};

fn fock(occ: &[u8]) -> entwb::Result<FirstQTensor> {
    let cat = ModeCatalog::numbered(2, Statistics::Bose);
    FirstQTensor::from_fock(&StateVector::basis(&cat, Occupation::new(occ.to_vec()))?)
}

fn main() -> entwb::Result<()> {
    for (n, occ) in [(2, [1u8, 1]), (3, [1, 2]), (4, [2, 2])] {
        let jx = sym_single(&(pauli_x() * r(0.5)), n)?;
        let t = fock(&occ)?;
        println!("|{},{}>: QFI = {:.4} against N = {n}", occ[0], occ[1], qfi_phase(&t, &jx)?);
    }
    let jx = sym_single(&(pauli_x() * r(0.5)), 2)?;
    let t = fock(&[1, 1])?;
    println!("|1,1> separable-II: {}", is_separable_ii(&t)?.separable);
    let prod = FirstQTensor::product(&[basis_vector(2, 0), basis_vector(2, 0)])?;
    println!("|0>(x)|0>: QFI = {:.4}", qfi_phase(&prod, &jx)?);
    Ok(())
}
