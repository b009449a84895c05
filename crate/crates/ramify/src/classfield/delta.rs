//! The p-rank of Δ_{S,ν}: elements x with (x) a p-th power of an ideal,
//! locally in K_P^{×p}·U_P^{(ν_P)} at every P ∈ S, modulo K^{×p}.
//!
//! Δ_∅/K^{×p} is spanned by a generator of the roots of unity (when p | w)
//! and by generators of 𝔮^p for primes 𝔮 whose classes form a basis of
//! Cl[p]. Choosing each 𝔮 prime to S makes every generator a unit at S,
//! so the local conditions become p-th power tests in (O_P/P^b)^×.

use std::collections::HashSet;

use super::primes::{Base, IndexedSet, PrimeIdeal};
use super::quadratic::{prime_power, QuadraticElement, QuadraticFieldData};
use crate::arith::is_prime;
use crate::error::{domain, internal, invalid};
use crate::localfields::LocalElement;
use crate::ramgroups::DepthIndex;
use crate::Result;

/// Generators of Δ_∅/K^{×p}, each prime to the rational primes in `avoid`.
pub fn delta_generators(base: &Base, p: u64, avoid: &HashSet<u64>) -> Result<Vec<QuadraticElement>> {
    let mut gens = Vec::new();
    if base.unit_count() as u64 % p == 0 {
        gens.push(base.unit_generator());
    }
    if let Some(field) = base.field() {
        for (g, &d) in field.generators.iter().zip(field.structure.invariants()) {
            if d % p != 0 {
                continue;
            }
            let target = g.pow(d / p);
            let (l, s) = super::rayclass::prime_in_class(field.disc, &target, avoid)?;
            let alpha = prime_power(field.disc, l, s, p)
                .generator()
                .ok_or_else(|| internal("a p-torsion class has non-principal p-th power"))?;
            gens.push(alpha);
        }
    }
    Ok(gens)
}

/// Precision at which membership in K_P^{×p}U^{(ν)} is decided for units:
/// ⌈ν⌉ capped by the exponent past which U^{(b)} ⊂ U^p.
pub fn test_precision(prime: &PrimeIdeal, nu: DepthIndex, p: u64) -> u32 {
    let cap = prime.ring().power_test_bound(p);
    match nu.ceil() {
        None => cap,
        Some(b) => (b as u32).min(cap),
    }
}

pub fn delta_rank(base: &Base, set: &IndexedSet, p: u64) -> Result<usize> {
    if !is_prime(p) {
        return Err(invalid(format!("{p} is not prime")));
    }
    let avoid: HashSet<u64> = set.entries().iter().map(|(pr, _)| pr.q()).collect();
    let gens = delta_generators(base, p, &avoid)?;
    let k = gens.len();

    // per prime: images of the generators and the set of p-th powers
    struct Test {
        b: u32,
        ring: crate::localfields::LocalRing,
        images: Vec<LocalElement>,
        powers: HashSet<LocalElement>,
    }
    let mut tests = Vec::new();
    for (pr, nu) in set.entries() {
        let b = test_precision(pr, *nu, p);
        if b == 0 {
            continue;
        }
        let ring = pr.ring();
        let images: Vec<LocalElement> = gens.iter().map(|g| pr.image(g, b)).collect();
        if images.iter().any(|x| !ring.is_unit(x, b)) {
            return Err(internal(format!("a generator of Δ is not a unit at {pr}")));
        }
        let powers = ring.unit_powers(p as u128, b)?;
        tests.push(Test { b, ring, images, powers });
    }

    let total = (p as usize).pow(k as u32);
    let mut passing = 0usize;
    for idx in 0..total {
        let mut exps = Vec::with_capacity(k);
        let mut r = idx;
        for _ in 0..k {
            exps.push((r % p as usize) as u128);
            r /= p as usize;
        }
        let ok = tests.iter().all(|t| {
            let x = t
                .images
                .iter()
                .zip(&exps)
                .fold(t.ring.one(t.b), |acc, (img, &e)| t.ring.mul(&acc, &t.ring.pow(img, e, t.b), t.b));
            t.powers.contains(&x)
        });
        passing += ok as usize;
    }
    let mut rank = 0;
    let mut n = passing;
    while n > 1 && n % p as usize == 0 {
        n /= p as usize;
        rank += 1;
    }
    if n != 1 {
        return Err(internal(format!("{passing} passing classes is not a power of {p}")));
    }
    Ok(rank)
}

/// 2-rank of Δ_{S,ν} for an imaginary quadratic field.
pub fn delta_rank_quadratic_p2(field: &QuadraticFieldData, set: &IndexedSet) -> Result<usize> {
    let base = Base::Quadratic(std::sync::Arc::new(field.clone()));
    for (pr, _) in set.entries() {
        if !matches!(pr, PrimeIdeal::Quadratic { disc, .. } if *disc == field.disc) {
            return Err(domain(format!("{pr} is not a prime of ℚ(√{})", field.d)));
        }
    }
    delta_rank(&base, set, 2)
}
