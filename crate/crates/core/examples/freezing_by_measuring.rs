//! Two particles spread over both regions with spins σ and σ'. Finding one
//! particle on each side leaves a state whose classification under
//! definition II depends on the overlap of the spins.

use entwb::classify::is_separable_ii;
use entwb::firstq::{sym_operator, FirstQTensor, SingleParticleBasis};
use entwb::fock::Statistics;
use entwb::linalg::{basis_vector, kron, projector, r, CVec, Mat};

fn main() -> entwb::Result<()> {
    let basis = SingleParticleBasis::left_right_spin();
    let h = r(0.5f64.sqrt());
    let plus = CVec::from_vec(vec![h, h]);
    let minus = CVec::from_vec(vec![h, -h]);
    let up = basis_vector(2, 0);
    let region = |k| kron(&projector(&basis_vector(2, k)), &Mat::identity(2, 2));
    let one_each = sym_operator(&[region(0), region(1)])?;

    for overlap in [0.0, 1.0] {
        let sigma_p = CVec::from_vec(vec![r(overlap), r((1.0 - overlap * overlap).sqrt())]);
        for stats in [Statistics::Bose, Statistics::Fermi] {
            let a = basis.product_vector(&plus, &up)?;
            let b = basis.product_vector(&minus, &sigma_p)?;
            let zeta = FirstQTensor::product(&[a, b])?.symmetrize(stats).normalized()?;
            let before = is_separable_ii(&zeta)?;
            let after = zeta.apply(&one_each)?;
            let verdict =
                if after.norm() < entwb::EPS_TOL { "zero vector".to_string() } else { is_separable_ii(&after.normalized()?)?.label().to_string() };
            println!("<s|s'> = {overlap}, {}: before {}, after {verdict}", stats.name(), before.label());
        }
    }
    Ok(())
}
