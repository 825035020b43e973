//! Correlations of a Bell pair seen through two different pairs of
//! observables: the gap depends on the probes, not just the state.

use entwb::correlations::factorization_gap;
use entwb::firstq::FirstQTensor;
use entwb::linalg::{basis_vector, kron, projector, r, CVec, Mat};

fn main() -> entwb::Result<()> {
    let s = r(0.5f64.sqrt());
    let z = r(0.0);
    let psi_p = FirstQTensor::from_vector(2, 2, &CVec::from_vec(vec![z, s, s, z]))?;
    let psi_m = FirstQTensor::from_vector(2, 2, &CVec::from_vec(vec![z, s, -s, z]))?;
    let id = Mat::identity(2, 2);

    let p1 = kron(&projector(&basis_vector(2, 0)), &id);
    let p2 = kron(&id, &projector(&basis_vector(2, 1)));
    let g = factorization_gap(&psi_p, &p1, &p2)?;
    println!("spin projectors: <P1 P2> = {:.4}, <P1><P2> = {:.4}, gap = {:.4}", g.lhs.re, g.rhs.re, g.gap.re);

    // Functions of the Bell projectors commute on Psi+ and factorize there.
    let (ap, bp, am, bm) = (0.3, 1.2, -0.7, 2.0);
    let id4 = Mat::identity(4, 4);
    let op = &id4 * r(ap) + projector(&psi_p.as_vector()) * r(bp);
    let om = &id4 * r(am) + projector(&psi_m.as_vector()) * r(bm);
    let g = factorization_gap(&psi_p, &op, &om)?;
    println!("Bell projectors: <O+ O-> = {:.4} (a-(a+ + b+) = {:.4}), gap = {:.1e}", g.lhs.re, am * (ap + bp), g.gap.norm());
    Ok(())
}
