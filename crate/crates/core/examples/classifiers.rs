//! The five separability notions side by side on a handful of two-particle
//! states of the left/right-spin system.

use entwb::classify::{is_entangled_iv, is_separable_i, is_separable_ii, is_separable_iii, is_separable_v, Verdict};
use entwb::firstq::{FirstQTensor, SingleParticleBasis};
use entwb::fock::Statistics;
use entwb::linalg::{basis_vector, r, CVec};

fn show(name: &str, v: entwb::Result<Verdict>) {
    match v {
        Ok(v) => println!("  {name:>3}: {:<9} {}", v.label(), v.witness),
        Err(e) => println!("  {name:>3}: n/a ({e})"),
    }
}

fn main() -> entwb::Result<()> {
    let basis = SingleParticleBasis::left_right_spin();
    let e = |i| basis_vector(4, i);
    let left = [e(0), e(1)];
    let right = [e(2), e(3)];
    let h = r(0.5f64.sqrt());
    let l_plus = CVec::from_vec(vec![h, h, r(0.0), r(0.0)]);

    let states: Vec<(&str, Statistics, Vec<CVec>)> = vec![
        ("bosons, L up (x) L up", Statistics::Bose, vec![e(0), e(0)]),
        ("bosons, S[L up (x) R dn]", Statistics::Bose, vec![e(0), e(3)]),
        ("bosons, S[L up (x) L dn]", Statistics::Bose, vec![e(0), e(1)]),
        ("fermions, A[L+ (x) R up]", Statistics::Fermi, vec![l_plus, e(2)]),
    ];
    for (name, stats, parts) in states {
        let t = FirstQTensor::product(&parts)?.symmetrize(stats).normalized()?;
        let fock = t.to_fock(&basis.catalog(stats))?;
        println!("{name}");
        show("I", is_separable_i(&t));
        show("II", is_separable_ii(&t));
        show("III", is_separable_iii(&t, &left, &right));
        show("IV", is_entangled_iv(&t, &left));
        show("V", is_separable_v(&fock, &[0, 1], &[2, 3]));
    }
    Ok(())
}
