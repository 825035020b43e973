//! The same physics computed in first and second quantization.

mod support;

use entwb::algebra::OperatorExpr;
use entwb::classify::{is_separable_iii, is_separable_v, qfi_phase};
use entwb::correlations::factorization_gap;
use entwb::firstq::{sym_single, FirstQTensor};
use entwb::fock::{ModeCatalog, Statistics};
use entwb::harness::repro::run_repro_suite;
use entwb::harness::table::VerdictTable;
use entwb::linalg::{basis_vector, random_hermitian};
use support::{random_two_particle, rng};

#[test]
fn gaps_agree_between_representations() {
    let mut rng = rng(21);
    for stats in [Statistics::Bose, Statistics::Fermi] {
        let cat = ModeCatalog::numbered(4, stats);
        for _ in 0..20 {
            let t = random_two_particle(stats, 4, &mut rng);
            let (o1, o2) = (random_hermitian(4, &mut rng), random_hermitian(4, &mut rng));
            let first = factorization_gap(&t, &sym_single(&o1, 2).unwrap(), &sym_single(&o2, 2).unwrap()).unwrap();
            let s = t.to_fock(&cat).unwrap();
            let a = OperatorExpr::lift_single_particle(&o1, &cat).unwrap();
            let b = OperatorExpr::lift_single_particle(&o2, &cat).unwrap();
            let second = factorization_gap(&s, &a, &b).unwrap();
            assert!((first.gap - second.gap).norm() < 1e-10);

            let q1 = qfi_phase(&t, &sym_single(&o1, 2).unwrap()).unwrap();
            let q2 = qfi_phase(&s, &a).unwrap();
            assert!((q1 - q2).abs() < 1e-9);
        }
    }
}

#[test]
fn sector_and_mode_splittings_agree_on_one_particle_per_side() {
    // With exactly one particle on each side, III across span{0,1} ⊕ span{2,3}
    // and V across modes {0,1} | {2,3} test the same Schmidt rank.
    let mut rng = rng(22);
    let v1 = [basis_vector(4, 0), basis_vector(4, 1)];
    let v2 = [basis_vector(4, 2), basis_vector(4, 3)];
    for stats in [Statistics::Bose, Statistics::Fermi] {
        let cat = ModeCatalog::numbered(4, stats);
        for k in 0..20 {
            let c = if k % 2 == 0 {
                let (a, b) = (entwb::linalg::random_state(2, &mut rng), entwb::linalg::random_state(2, &mut rng));
                entwb::linalg::kron_vec(&a, &b)
            } else {
                entwb::linalg::random_state(4, &mut rng)
            };
            let mut t = FirstQTensor::zeros(4, 2).unwrap();
            for s in 0..2 {
                for u in 0..2 {
                    let term = FirstQTensor::product(&[basis_vector(4, s), basis_vector(4, 2 + u)]).unwrap();
                    t = t.try_add(&term.scale(c[2 * s + u])).unwrap();
                }
            }
            let t = t.symmetrize(stats).normalized().unwrap();
            let iii = is_separable_iii(&t, &v1, &v2).unwrap().separable;
            let v = is_separable_v(&t.to_fock(&cat).unwrap(), &[0, 1], &[2, 3]).unwrap().separable;
            assert_eq!(iii, v);
            assert_eq!(iii, k % 2 == 0);
        }
    }
}

#[test]
fn repro_report_is_green_and_backs_every_cell() {
    let report = run_repro_suite(entwb::harness::DEFAULT_SEED);
    assert!(report.passed(), "{}", report.to_csv());
    let ids: Vec<&str> = report.cases.iter().map(|c| c.id.as_str()).collect();
    let mut sorted = ids.clone();
    sorted.sort();
    assert_eq!(ids, sorted);
    assert!(report.to_csv().starts_with("case,check,expected,actual,status\n"));

    let table = VerdictTable::from_report(&report).unwrap();
    for d in entwb::classify::Definition::ALL {
        for k in entwb::harness::repro::Criterion::ALL {
            let e = table.get(d, k);
            assert!(!e.backing.is_empty());
            for id in &e.backing {
                assert!(report.case(id).unwrap().passed());
            }
        }
    }
}
