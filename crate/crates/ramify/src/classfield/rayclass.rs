//! Ray class groups Cl_m from the exact sequence
//! 1 → (O/m)^×/im(units) → Cl_m → Cl_K → 1,
//! presented by generators and relations and reduced to invariant factors.

use std::collections::{BTreeMap, HashSet};

use serde::{Deserialize, Serialize};

use super::primes::{Base, IndexedSet, PrimeIdeal};
use super::quadratic::{prime_power, splitting_types, QuadraticElement, Splitting};
use crate::abelian::{present, AbelianGroupStructure, Decomposition};
use crate::arith::is_prime;
use crate::error::{domain, internal, invalid, Error};
use crate::localfields::LocalRing;
use crate::ramgroups::DepthIndex;
use crate::{check_guard, Result};

/// (O_P/P^b)^× with discrete logarithms.
pub struct LocalUnits {
    pub prime: PrimeIdeal,
    pub b: u32,
    ring: LocalRing,
    decomposition: Decomposition,
    coords: std::collections::HashMap<u64, Vec<i128>>,
}

impl LocalUnits {
    pub fn new(prime: PrimeIdeal, b: u32) -> Result<LocalUnits> {
        let ring = prime.ring();
        let units: Vec<u64> = ring
            .elements(b)?
            .filter(|x| ring.is_unit(x, b))
            .map(|x| ring.encode(&x, b))
            .collect();
        let one = ring.encode(&ring.one(b), b);
        let pres = present(units, one, |x, y| {
            ring.encode(&ring.mul(&ring.decode(*x, b), &ring.decode(*y, b), b), b)
        });
        let decomposition = Decomposition::new(&pres.relations, pres.generators.len())?;
        if decomposition.structure.order() != ring.unit_count(b) {
            return Err(internal(format!("(O/P^{b})^× at {prime} has the wrong order")));
        }
        Ok(LocalUnits {
            prime,
            b,
            ring,
            decomposition,
            coords: pres.coords,
        })
    }

    pub fn structure(&self) -> &AbelianGroupStructure {
        &self.decomposition.structure
    }

    /// Coordinates of a global element prime to P.
    pub fn log(&self, a: &QuadraticElement) -> Result<Vec<i128>> {
        let img = self.prime.image(a, self.b);
        let word = self
            .coords
            .get(&self.ring.encode(&img, self.b))
            .ok_or_else(|| invalid(format!("element is not a unit at {}", self.prime)))?;
        Ok(self.decomposition.dlog(word))
    }
}

/// Cl_m with the ingredients of its order formula.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct RayClassResult {
    pub base: String,
    /// Prime → exponent, primes written `q` or `q@r` for (q, ω − r).
    pub modulus: BTreeMap<String, u32>,
    pub class_number: u64,
    /// |(O/m)^×|.
    pub local_units_order: u128,
    /// |image of the global units in (O/m)^×|.
    pub unit_image_order: u64,
    pub invariants: AbelianGroupStructure,
    pub p: u64,
    pub p_part: AbelianGroupStructure,
    pub p_rank: usize,
}

/// m = ∏ P^{⌈ν_P⌉}; ∞ is rejected.
pub fn modulus_of(set: &IndexedSet) -> Result<Vec<(PrimeIdeal, u32)>> {
    set.entries()
        .iter()
        .map(|(p, nu)| match nu.ceil() {
            Some(b) => Ok((*p, b as u32)),
            None => Err(domain(format!("infinite depth at {p} has no finite conductor"))),
        })
        .collect()
}

/// Finds a prime ideal of degree one, prime to `avoid`, in the class of
/// the reduced form `target`.
pub fn prime_in_class(
    disc: i64,
    target: &super::forms::BinaryQuadraticForm,
    avoid: &HashSet<u64>,
) -> Result<(u64, Splitting)> {
    const SEARCH_LIMIT: u64 = 2_000_000;
    (2..SEARCH_LIMIT)
        .filter(|&l| is_prime(l) && !avoid.contains(&l))
        .find_map(|l| {
            splitting_types(disc, l)
                .into_iter()
                .filter(|s| *s != Splitting::Inert)
                .find(|&s| super::quadratic::prime_ideal(disc, l, s).form() == *target)
                .map(|s| (l, s))
        })
        .ok_or_else(|| Error::Guard {
            what: "prime search for a class representative".into(),
            size: SEARCH_LIMIT as u128,
            limit: SEARCH_LIMIT as u128,
        })
}

pub fn ray_class_group(base: &Base, modulus: &[(PrimeIdeal, u32)], p: u64) -> Result<RayClassResult> {
    if !is_prime(p) {
        return Err(invalid(format!("{p} is not prime")));
    }
    let mut seen = HashSet::new();
    for (pr, _) in modulus {
        if !seen.insert(*pr) {
            return Err(invalid(format!("{pr} occurs twice in the modulus")));
        }
        if !base.primes_above(pr.q())?.contains(pr) {
            return Err(invalid(format!("{pr} is not a prime of the base")));
        }
    }
    let norm: u128 = modulus
        .iter()
        .map(|(pr, b)| (pr.norm() as u128).saturating_pow(*b))
        .fold(1u128, |a, x| a.saturating_mul(x));
    check_guard("modulus norm", norm)?;

    let locals: Vec<LocalUnits> = modulus
        .iter()
        .filter(|(_, b)| *b > 0)
        .map(|(pr, b)| LocalUnits::new(*pr, *b))
        .collect::<Result<_>>()?;
    let local_units_order: u128 = locals.iter().map(|l| l.structure().order()).product();

    // generator columns: local invariant-factor generators, then class lifts
    let mut offsets = Vec::new();
    let mut n_local = 0;
    for l in &locals {
        offsets.push(n_local);
        n_local += l.structure().invariants().len();
    }
    let log_global = |a: &QuadraticElement| -> Result<Vec<i128>> {
        let mut v = vec![0i128; n_local];
        for (l, &off) in locals.iter().zip(&offsets) {
            for (k, c) in l.log(a)?.into_iter().enumerate() {
                v[off + k] = c;
            }
        }
        Ok(v)
    };

    let class_gens = base.field().map(|f| f.generators.clone()).unwrap_or_default();
    let class_orders: Vec<u64> = base
        .field()
        .map(|f| f.structure.invariants().to_vec())
        .unwrap_or_default();
    let ngens = n_local + class_gens.len();
    let mut relations: Vec<Vec<i128>> = Vec::new();

    for (l, &off) in locals.iter().zip(&offsets) {
        for (k, &d) in l.structure().invariants().iter().enumerate() {
            let mut r = vec![0i128; ngens];
            r[off + k] = d as i128;
            relations.push(r);
        }
    }

    let mut unit_images = HashSet::new();
    for z in base.roots_of_unity() {
        unit_images.insert(log_global(&z)?);
    }
    let mut r = log_global(&base.unit_generator())?;
    r.resize(ngens, 0);
    relations.push(r);

    if let Some(field) = base.field() {
        let avoid: HashSet<u64> = modulus.iter().map(|(pr, _)| pr.q()).collect();
        for (j, (g, &d)) in class_gens.iter().zip(&class_orders).enumerate() {
            let (l, s) = prime_in_class(field.disc, g, &avoid)?;
            let alpha = prime_power(field.disc, l, s, d)
                .generator()
                .ok_or_else(|| internal(format!("a class of order {d} has non-principal {d}-th power")))?;
            let mut r: Vec<i128> = log_global(&alpha)?.into_iter().map(|c| -c).collect();
            r.resize(ngens, 0);
            r[n_local + j] = d as i128;
            relations.push(r);
        }
    }

    let dec = Decomposition::new(&relations, ngens)?;
    let h = base.field().map_or(1, |f| f.class_number() as u64);
    let expected = h as u128 * local_units_order / unit_images.len() as u128;
    if dec.structure.order() != expected
        || h as u128 * local_units_order % unit_images.len() as u128 != 0
    {
        return Err(internal(format!(
            "ray class group has order {}, the order formula gives {expected}",
            dec.structure.order()
        )));
    }
    Ok(RayClassResult {
        base: base.name(),
        modulus: modulus.iter().map(|(pr, b)| (pr.to_string(), *b)).collect(),
        class_number: h,
        local_units_order,
        unit_image_order: unit_images.len() as u64,
        p,
        p_part: dec.structure.p_part(p),
        p_rank: dec.structure.p_rank(p),
        invariants: dec.structure,
    })
}

/// ray_class_group for m = ∏ P^{⌈ν_P⌉}.
pub fn ray_class_group_for(base: &Base, set: &IndexedSet, p: u64) -> Result<RayClassResult> {
    ray_class_group(base, &modulus_of(set)?, p)
}

/// The exponent at which ⌈ν⌉ = ∞ may be replaced without changing p-ranks:
/// U^{(b)} ⊂ U^p from b = ⌊ep/(p−1)⌋ + 1 on (1 at tame primes).
pub fn stable_exponent(prime: &PrimeIdeal, p: u64) -> u32 {
    prime.ring().power_test_bound(p)
}

/// Replaces infinite depths by `stable_exponent`.
pub fn truncate_infinite(set: &IndexedSet, p: u64) -> Result<IndexedSet> {
    IndexedSet::new(
        set.entries()
            .iter()
            .map(|(pr, nu)| match nu {
                DepthIndex::Infinite => (*pr, DepthIndex::int(stable_exponent(pr, p) as u64)),
                n => (*pr, *n),
            })
            .collect(),
    )
}
