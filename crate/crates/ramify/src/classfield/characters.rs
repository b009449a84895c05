//! Dirichlet characters and the conductor-discriminant formula: the
//! discriminant of an abelian field over ℚ is the product of the
//! conductors of its characters.

use std::collections::{BTreeMap, HashMap};

use num_integer::Integer;

use crate::abelian::{present, AbelianGroupStructure, Decomposition};
use crate::arith::{divisors, factor, kronecker};
use crate::error::invalid;
use crate::{check_guard, Result};

/// (ℤ/m)^× with discrete logarithms in an invariant-factor basis.
#[derive(Clone, Debug)]
pub struct DirichletGroup {
    m: u64,
    units: Vec<u64>,
    logs: HashMap<u64, Vec<i128>>,
    structure: AbelianGroupStructure,
}

/// A character as exponents against the invariant-factor basis:
/// χ(g_i) = exp(2πi·k_i/d_i).
pub type Character = Vec<i128>;

impl DirichletGroup {
    pub fn new(m: u64) -> Result<DirichletGroup> {
        if m == 0 {
            return Err(invalid("modulus must be positive"));
        }
        check_guard("Dirichlet group", m as u128)?;
        let units: Vec<u64> = (1..=m).filter(|x| x.gcd(&m) == 1).map(|x| x % m).collect();
        let mm = m as u128;
        let pres = present(units.iter().copied(), 1 % m, |a, b| (*a as u128 * *b as u128 % mm) as u64);
        let dec = Decomposition::new(&pres.relations, pres.generators.len())?;
        let logs = pres.coords.iter().map(|(x, c)| (*x, dec.dlog(c))).collect();
        Ok(DirichletGroup {
            m,
            units,
            logs,
            structure: dec.structure,
        })
    }

    pub fn modulus(&self) -> u64 {
        self.m
    }

    pub fn structure(&self) -> &AbelianGroupStructure {
        &self.structure
    }

    pub fn log(&self, x: i64) -> Option<&Vec<i128>> {
        self.logs.get(&(x.rem_euclid(self.m as i64) as u64))
    }

    /// All characters, in lexicographic order of exponents.
    pub fn characters(&self) -> Vec<Character> {
        let inv = self.structure.invariants();
        let mut out = vec![Vec::new()];
        for &d in inv {
            out = out
                .into_iter()
                .flat_map(|c: Vec<i128>| {
                    (0..d as i128).map(move |k| {
                        let mut c = c.clone();
                        c.push(k);
                        c
                    })
                })
                .collect();
        }
        out
    }

    /// χ(x) as t/L with L the group exponent; None if gcd(x, m) > 1.
    pub fn value(&self, chi: &[i128], x: i64) -> Option<i128> {
        let l = self.structure.exponent() as i128;
        let y = self.log(x)?;
        let t: i128 = self
            .structure
            .invariants()
            .iter()
            .zip(chi.iter().zip(y))
            .map(|(&d, (k, y))| k * y * (l / d as i128))
            .sum();
        Some(t.rem_euclid(l))
    }

    pub fn order(&self, chi: &[i128]) -> u64 {
        self.structure
            .invariants()
            .iter()
            .zip(chi)
            .map(|(&d, &k)| d / (k as u64).gcd(&d))
            .fold(1, |a, b| a.lcm(&b))
    }

    /// Smallest f | m such that χ is trivial on units ≡ 1 mod f.
    pub fn conductor(&self, chi: &[i128]) -> u64 {
        divisors(self.m)
            .into_iter()
            .find(|&f| {
                self.units
                    .iter()
                    .filter(|&&x| x % f == 1 % f)
                    .all(|&x| self.value(chi, x as i64) == Some(0))
            })
            .expect("m itself is a conductor")
    }
}

/// |disc| of the abelian field cut out by the characters selected by
/// `keep`, as a factorization, together with the field degree.
pub fn discriminant_where<F>(m: u64, keep: F) -> Result<(u64, BTreeMap<u64, u64>)>
where
    F: Fn(&DirichletGroup, &Character) -> bool,
{
    let g = DirichletGroup::new(m)?;
    let mut degree = 0;
    let mut disc: BTreeMap<u64, u64> = BTreeMap::new();
    for chi in g.characters() {
        if !keep(&g, &chi) {
            continue;
        }
        degree += 1;
        for (q, k) in factor(g.conductor(&chi)) {
            *disc.entry(q).or_default() += k as u64;
        }
    }
    Ok((degree, disc))
}

/// |disc ℚ(ζ_m)|.
pub fn cyclotomic_discriminant(m: u64) -> Result<(u64, BTreeMap<u64, u64>)> {
    discriminant_where(m, |_, _| true)
}

/// |disc| of the fixed field of H ⊂ (ℤ/m)^×, given by membership.
pub fn subfield_discriminant<H>(m: u64, in_h: H) -> Result<(u64, BTreeMap<u64, u64>)>
where
    H: Fn(u64) -> bool,
{
    let units: Vec<u64> = (1..=m).filter(|x| x.gcd(&m) == 1).map(|x| x % m).filter(|&x| in_h(x)).collect();
    discriminant_where(m, |g, chi| units.iter().all(|&h| g.value(chi, h as i64) == Some(0)))
}

/// |disc ℚ(√D)| through the character x ↦ (D/x).
pub fn quadratic_discriminant(disc: i64) -> Result<(u64, BTreeMap<u64, u64>)> {
    subfield_discriminant(disc.unsigned_abs(), |x| kronecker(disc, x as i64) == 1)
}

/// The largest real subfield of the ray class field of ℚ modulo q^k of
/// p-power degree: characters even and of p-power order.
pub fn ray_layer_discriminant(q: u64, k: u32, p: u64) -> Result<(u64, BTreeMap<u64, u64>)> {
    let m = q.checked_pow(k).ok_or_else(|| invalid("modulus overflow"))?;
    discriminant_where(m, |g, chi| {
        let mut o = g.order(chi);
        while o % p == 0 {
            o /= p;
        }
        o == 1 && g.value(chi, -1) == Some(0)
    })
}
