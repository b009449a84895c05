//! Brute-force filtrations against discriminants from characters.

use ramify::classfield::characters::{cyclotomic_discriminant, quadratic_discriminant, subfield_discriminant};
use ramify::herbrand::Filtration;
use ramify::ramgroups::{
    cyclotomic_subfield_filtration, default_catalog, different_valuation, filtration_monogenic, filtration_zbasis,
    GlobalExtensionAtPrime, MonogenicLocalExtension,
};

fn hilbert(f: &Filtration) -> u64 {
    f.orders().iter().map(|g| g - 1).sum()
}

#[test]
fn quadratic_fields_at_two_and_odd_primes() {
    for d in [-1i64, 2, -2, 3, -3, 5, -5, 6, -6, 7, -7, 10, -11] {
        let disc = if d.rem_euclid(4) == 1 { d } else { 4 * d };
        let (_, expected) = quadratic_discriminant(disc).unwrap();
        for q in [2u64, 3, 5, 7, 11] {
            let ext = GlobalExtensionAtPrime::quadratic(d, q).unwrap();
            let (e, f, _) = ext.efr();
            let got = if e == 1 { 0 } else { f as u64 * hilbert(&filtration_zbasis(&ext).unwrap()) };
            assert_eq!(got, expected.get(&q).copied().unwrap_or(0), "d = {d}, q = {q}");
        }
    }
}

#[test]
fn cyclotomic_fields() {
    for (p, n) in [(2u64, 2u32), (2, 3), (2, 4), (3, 1), (3, 2), (3, 3), (5, 1), (5, 2)] {
        let ext = MonogenicLocalExtension::cyclotomic(p, n, 0).unwrap();
        let filt = filtration_monogenic(&ext).unwrap();
        let (_, disc) = cyclotomic_discriminant(p.pow(n)).unwrap();
        assert_eq!(hilbert(&filt), disc[&p], "ζ_{p}^{n}");
        assert_eq!(different_valuation(&filt), disc[&p]);
    }
}

#[test]
fn subfields_of_cyclotomic_fields() {
    // each H given by membership; the fixed field is totally ramified at p
    let cases: Vec<(u64, u32, Vec<u64>)> = vec![
        (3, 2, vec![1, 8]),
        (3, 3, vec![1, 26]),
        (3, 3, vec![1, 10, 19]),
        (2, 4, vec![1, 15]),
        (2, 4, vec![1, 7]),
        (2, 4, vec![1, 9]),
        (5, 2, vec![1, 24]),
        (5, 2, vec![1, 7, 18, 24]),
    ];
    for (p, n, h) in cases {
        let filt = cyclotomic_subfield_filtration(p, n, &|a| h.contains(&a)).unwrap();
        let m = p.pow(n);
        let (_, disc) = subfield_discriminant(m, |a| h.contains(&a)).unwrap();
        assert_eq!(hilbert(&filt), disc.get(&p).copied().unwrap_or(0), "{m}, H = {h:?}");
    }
}

#[test]
fn oracles_agree_on_ramified_quadratics() {
    for d in [-1i64, 3, 2, -2, 6, -6] {
        let z = filtration_zbasis(&GlobalExtensionAtPrime::quadratic(d, 2).unwrap()).unwrap();
        let m = filtration_monogenic(&MonogenicLocalExtension::quadratic_over_q2(d).unwrap()).unwrap();
        assert_eq!(z, m, "d = {d}");
    }
}

#[test]
fn bundled_catalog_builds() {
    let cat = default_catalog();
    assert!(cat.len() >= 20);
    for entry in &cat {
        let f = entry.extension.filtration().unwrap_or_else(|e| panic!("{}: {e}", entry.name));
        assert!(f.inertia() >= 1);
    }
    let named = |s: &str| cat.iter().find(|c| c.name == s).unwrap().extension.filtration().unwrap();
    assert_eq!(named("Q3(zeta9)/Q3").orders(), &[6, 3, 3]);
    assert_eq!(named("Q3(zeta9)/Q3(zeta3)").orders(), &[3, 3, 3]);
    assert_eq!(named("Q(sqrt-7)/Q at 2").orders(), &[1]);
}
