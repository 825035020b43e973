//! Occupation-number states, ladder operators and Jordan-Wigner signs.

use entwb::algebra::OperatorExpr;
use entwb::fock::{ModeCatalog, StateVector, Statistics};

fn main() -> entwb::Result<()> {
    for stats in [Statistics::Bose, Statistics::Fermi] {
        let cat = ModeCatalog::new(["a", "b", "c"], stats)?;
        let vac = StateVector::vacuum(&cat);

        // a†_c a†_a |vac⟩ picks up a sign for fermions, since mode a sits below c.
        let ca = vac.apply_create(0)?.apply_create(2)?;
        println!("[{}] a+_c a+_a |vac> = {ca:?}", stats.name());

        let twice = vac.apply_create(0)?.apply_create(0)?;
        println!("[{}] (a+_a)^2 |vac> has norm {:.6}", stats.name(), twice.norm());

        // {a_a, a†_a} for fermions, [a_a, a†_a] for bosons, on a two-particle state.
        let s = vac.apply_create(0)?.apply_create(1)?;
        let a = OperatorExpr::annihilate(&cat, 0)?;
        let ad = OperatorExpr::create(&cat, 0)?;
        let sign = entwb::Complex64::new(-stats.exchange_sign(), 0.0);
        let rel = a.multiply(&ad)?.try_add(&ad.multiply(&a)?.scale(sign))?;
        let out = rel.apply(&s)?;
        println!("[{}] relation residual {:.2e}", stats.name(), out.try_sub(&s)?.norm());

        let n_total = OperatorExpr::total_number(&cat);
        println!("[{}] <N> = {:.6}\n", stats.name(), n_total.expectation(&s.normalized()?)?.re);
    }
    Ok(())
}
