//! Classification results across fields and degrees, checked through the
//! public API.

use carlitz_hw::bpoly::{b_poly, u_degree, Mode};
use carlitz_hw::poly::necklace_count;
use carlitz_hw::powersums::Budget;
use carlitz_hw::scan::ScanMode;
use carlitz_hw::{hasse_witt, irreducible_enumerate, make_field, scan_degree, ScanOptions};

#[test]
fn non_prime_field_classification() {
    // q = 4, 8, 9: ordinary only in degree 1, K_m^+ ordinary only up to degree 2
    for (p, e, dmax) in [(2u64, 2u32, 3u32), (2, 3, 2), (3, 2, 2)] {
        let f = make_field(p, e, None).unwrap();
        for d in 1..=dmax {
            let recs = scan_degree(&f, d, &ScanOptions::default()).unwrap();
            assert_eq!(recs.len() as u128, necklace_count(f.q(), d));
            for r in &recs {
                assert_eq!(r.ordinary, d == 1, "q={} {}", f.q(), r.m);
                assert_eq!(r.ordinary_plus, d <= 2, "q={} {}", f.q(), r.m);
            }
        }
    }
}

#[test]
fn quadratics_and_cubics_at_larger_primes() {
    for p in [7u64, 11] {
        let f = make_field(p, 1, None).unwrap();
        for m in irreducible_enumerate(&f, 2).unwrap().iter().take(6) {
            let r = hasse_witt(m).unwrap();
            assert!(r.ordinary && r.ordinary_plus, "p={p} {}", r.m);
        }
    }
    let f5 = make_field(5, 1, None).unwrap();
    for m in irreducible_enumerate(&f5, 3).unwrap().iter().step_by(5) {
        assert!(hasse_witt(m).unwrap().ordinary_plus, "{}", m.to_text());
    }
}

#[test]
fn ordinary_fields_have_unreduced_degrees() {
    let budget = Budget::default();
    for (p, d) in [(3u64, 2u32), (5, 2), (2, 3)] {
        let f = make_field(p, 1, None).unwrap();
        for m in irreducible_enumerate(&f, d).unwrap() {
            let r = hasse_witt(&m).unwrap();
            if !r.ordinary {
                continue;
            }
            for n in 1..m.group_order() {
                let reduced = u_degree(&b_poly(n, Mode::Residue(&m)).unwrap());
                let exact = u_degree(&b_poly(n, Mode::Exact { field: &f, d, budget }).unwrap());
                assert_eq!(reduced, exact, "p={p} {} n={n}", r.m);
            }
        }
    }
}

#[test]
fn witness_mode_agrees_with_full() {
    let f = make_field(3, 1, None).unwrap();
    let full = scan_degree(&f, 3, &ScanOptions { workers: 2, ..ScanOptions::default() }).unwrap();
    let quick = scan_degree(&f, 3, &ScanOptions { mode: ScanMode::Witness, workers: 2, ..ScanOptions::default() }).unwrap();
    for (a, b) in full.iter().zip(&quick) {
        assert_eq!((a.ordinary, a.ordinary_plus, a.first_defect_n), (b.ordinary, b.ordinary_plus, b.first_defect_n));
        if b.lambda.is_some() {
            assert_eq!(a.lambda, b.lambda);
        }
    }
}
