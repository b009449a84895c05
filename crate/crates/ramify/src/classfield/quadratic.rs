//! Imaginary quadratic fields: elements x + yω, ideals as Hermite-normal-form
//! lattices, class groups realized by reduced forms, and principal
//! generators found by lattice reduction.
//!
//! Throughout, ω = (δ + √D)/2 with δ = D mod 2, so O = ℤ[ω] and
//! ω² = δω − (δ − D)/4. The square root √D is taken with positive imaginary
//! part.

use std::collections::HashMap;
use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use super::forms::{reduced_forms, BinaryQuadraticForm};
use crate::abelian::{present, AbelianGroupStructure, Decomposition};
use crate::arith::{hensel_root, is_fundamental_discriminant, is_prime, kronecker};
use crate::error::{domain, internal, invalid, Error};
use crate::Result;

/// x + yω in the ring of integers of ℚ(√D).
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct QuadraticElement {
    disc: i64,
    pub x: BigInt,
    pub y: BigInt,
}

impl fmt::Debug for QuadraticElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let (u, v) = self.half_coords();
        write!(f, "({u} + {v}√{})/2", self.disc)
    }
}

impl QuadraticElement {
    pub fn new(disc: i64, x: impl Into<BigInt>, y: impl Into<BigInt>) -> Self {
        QuadraticElement {
            disc,
            x: x.into(),
            y: y.into(),
        }
    }

    pub fn int(disc: i64, n: impl Into<BigInt>) -> Self {
        Self::new(disc, n, 0)
    }

    pub fn omega(disc: i64) -> Self {
        Self::new(disc, 0, 1)
    }

    /// Element (u + v√D)/2; None if it is not integral.
    pub fn from_half(disc: i64, u: impl Into<BigInt>, v: impl Into<BigInt>) -> Option<Self> {
        let (u, v) = (u.into(), v.into());
        let delta = BigInt::from(disc.rem_euclid(2));
        let t: BigInt = &u - &delta * &v;
        t.is_even().then(|| Self::new(disc, t / 2, v))
    }

    pub fn disc(&self) -> i64 {
        self.disc
    }

    fn delta(&self) -> BigInt {
        BigInt::from(self.disc.rem_euclid(2))
    }

    /// (u, v) with self = (u + v√D)/2.
    pub fn half_coords(&self) -> (BigInt, BigInt) {
        (BigInt::from(2) * &self.x + self.delta() * &self.y, self.y.clone())
    }

    /// (u, v) with self = u + v√d when D = 4d, or (u + v√d)/2 when D = d.
    pub fn sqrt_d_coords(&self) -> (BigInt, BigInt) {
        let (u, v) = self.half_coords();
        if self.disc.rem_euclid(4) == 0 {
            (u / 2, v)
        } else {
            (u, v)
        }
    }

    pub fn norm(&self) -> BigInt {
        let c = (self.delta() - BigInt::from(self.disc)) / 4;
        &self.x * &self.x + self.delta() * &self.x * &self.y + c * &self.y * &self.y
    }

    pub fn trace(&self) -> BigInt {
        BigInt::from(2) * &self.x + self.delta() * &self.y
    }

    pub fn conj(&self) -> Self {
        Self::new(self.disc, &self.x + self.delta() * &self.y, -&self.y)
    }

    pub fn mul(&self, o: &Self) -> Self {
        debug_assert_eq!(self.disc, o.disc);
        let c = (self.delta() - BigInt::from(self.disc)) / 4;
        let yy = &self.y * &o.y;
        let x = &self.x * &o.x - &c * &yy;
        let y = &self.x * &o.y + &o.x * &self.y + self.delta() * &yy;
        Self::new(self.disc, x, y)
    }

    pub fn sub(&self, o: &Self) -> Self {
        Self::new(self.disc, &self.x - &o.x, &self.y - &o.y)
    }

    pub fn neg(&self) -> Self {
        Self::new(self.disc, -&self.x, -&self.y)
    }

    pub fn scale(&self, k: &BigInt) -> Self {
        Self::new(self.disc, &self.x * k, &self.y * k)
    }

    pub fn pow(&self, mut n: u64) -> Self {
        let mut acc = Self::int(self.disc, 1);
        let mut base = self.clone();
        while n > 0 {
            if n & 1 == 1 {
                acc = acc.mul(&base);
            }
            base = base.mul(&base);
            n >>= 1;
        }
        acc
    }

    pub fn is_zero(&self) -> bool {
        self.x.is_zero() && self.y.is_zero()
    }
}

/// The roots of unity of O, as elements.
pub fn roots_of_unity(disc: i64) -> Vec<QuadraticElement> {
    let gen = match disc {
        -4 | -3 => QuadraticElement::omega(disc),
        _ => QuadraticElement::int(disc, -1),
    };
    let w = match disc {
        -4 => 4,
        -3 => 6,
        _ => 2,
    };
    (0..w).map(|k| gen.pow(k)).collect()
}

/// Ideal aℤ + (b + cω)ℤ in Hermite normal form: a, c > 0, 0 ≤ b < a.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Ideal {
    disc: i64,
    pub a: BigInt,
    pub b: BigInt,
    pub c: BigInt,
}

impl fmt::Debug for Ideal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{}, {} + {}ω]", self.a, self.b, self.c)
    }
}

impl Ideal {
    pub fn unit(disc: i64) -> Ideal {
        Ideal {
            disc,
            a: BigInt::one(),
            b: BigInt::zero(),
            c: BigInt::one(),
        }
    }

    /// Ideal generated (as an O-module) by the given elements.
    pub fn generated_by(disc: i64, gens: &[QuadraticElement]) -> Result<Ideal> {
        let w = QuadraticElement::omega(disc);
        let mut vecs: Vec<(BigInt, BigInt)> = Vec::new();
        for g in gens {
            vecs.push((g.x.clone(), g.y.clone()));
            let gw = g.mul(&w);
            vecs.push((gw.x, gw.y));
        }
        Self::from_lattice(disc, vecs)
    }

    fn from_lattice(disc: i64, vecs: Vec<(BigInt, BigInt)>) -> Result<Ideal> {
        let mut pivot: Option<(BigInt, BigInt)> = None;
        let mut a = BigInt::zero();
        for mut v in vecs {
            if let Some(p) = pivot.as_mut() {
                // Euclid on the ω-coordinates
                while !v.1.is_zero() {
                    let q = p.1.div_floor(&v.1);
                    p.0 -= &q * &v.0;
                    p.1 -= &q * &v.1;
                    std::mem::swap(p, &mut v);
                }
                a = a.gcd(&v.0);
            } else if !v.1.is_zero() {
                pivot = Some(v);
            } else {
                a = a.gcd(&v.0);
            }
        }
        let (mut b, mut c) = pivot.ok_or_else(|| invalid("lattice is not of full rank"))?;
        if a.is_zero() {
            return Err(invalid("lattice is not of full rank"));
        }
        if c.is_negative() {
            b = -b;
            c = -c;
        }
        b = b.mod_floor(&a);
        Ok(Ideal { disc, a, b, c })
    }

    pub fn disc(&self) -> i64 {
        self.disc
    }

    pub fn norm(&self) -> BigInt {
        &self.a * &self.c
    }

    pub fn contains(&self, x: &QuadraticElement) -> bool {
        if !x.y.is_multiple_of(&self.c) {
            return false;
        }
        let t = &x.y / &self.c;
        (&x.x - t * &self.b).is_multiple_of(&self.a)
    }

    pub fn basis(&self) -> [QuadraticElement; 2] {
        [
            QuadraticElement::int(self.disc, self.a.clone()),
            QuadraticElement::new(self.disc, self.b.clone(), self.c.clone()),
        ]
    }

    pub fn mul(&self, o: &Ideal) -> Ideal {
        let mut gens = Vec::new();
        for x in self.basis() {
            for y in o.basis() {
                gens.push(x.mul(&y));
            }
        }
        Self::generated_by(self.disc, &gens).expect("product of nonzero ideals")
    }

    pub fn pow(&self, mut n: u64) -> Ideal {
        let mut acc = Ideal::unit(self.disc);
        let mut base = self.clone();
        while n > 0 {
            if n & 1 == 1 {
                acc = acc.mul(&base);
            }
            base = base.mul(&base);
            n >>= 1;
        }
        acc
    }

    /// Reduced form of the ideal class. The form (a, b, c) corresponds to
    /// the ideal aℤ + ((−b + √D)/2)ℤ.
    pub fn form(&self) -> BinaryQuadraticForm {
        let a = (&self.a / &self.c).to_i64().expect("ideal too large for a form");
        let b0 = (&self.b / &self.c).to_i64().expect("ideal too large for a form");
        let delta = self.disc.rem_euclid(2);
        let b = -2 * b0 - delta;
        BinaryQuadraticForm::from_ab(a, b, self.disc)
            .expect("ideal lattice yields an integral form")
            .reduce()
    }

    /// Ideal of a form, inverse to `form` on classes.
    pub fn of_form(f: &BinaryQuadraticForm) -> Ideal {
        let disc = f.discriminant();
        let delta = disc.rem_euclid(2);
        let b0 = -(f.b + delta) / 2;
        Ideal {
            disc,
            a: BigInt::from(f.a),
            b: BigInt::from(b0).mod_floor(&BigInt::from(f.a)),
            c: BigInt::one(),
        }
    }

    /// A generator if the ideal is principal: the shortest lattice vector
    /// (Lagrange reduction for the norm form) generates iff its norm equals
    /// the ideal norm.
    pub fn generator(&self) -> Option<QuadraticElement> {
        let [mut u, mut v] = self.basis();
        let round_div = |n: &BigInt, d: &BigInt| -> BigInt {
            // nearest integer to n/d, d > 0
            (BigInt::from(2) * n + d).div_floor(&(BigInt::from(2) * d))
        };
        loop {
            if u.norm() > v.norm() {
                std::mem::swap(&mut u, &mut v);
            }
            let mu = round_div(&v.mul(&u.conj()).trace(), &(BigInt::from(2) * u.norm()));
            if mu.is_zero() {
                break;
            }
            v = v.sub(&u.scale(&mu));
        }
        (u.norm() == self.norm()).then_some(u)
    }
}

/// How a rational prime decomposes, with the residue r of ω fixing
/// 𝔭 = (q, ω − r) where that is meaningful.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase", tag = "type", content = "root")]
pub enum Splitting {
    Split(i64),
    Ramified(i64),
    Inert,
}

/// Roots of ω's minimal polynomial modulo q, ascending.
pub fn omega_roots_mod(disc: i64, q: u64) -> Vec<i64> {
    let q = q as i64;
    let delta = disc.rem_euclid(2) as i128;
    let c = (delta - disc as i128) / 4;
    (0..q)
        .filter(|&r| {
            let r = r as i128;
            (r * r - delta * r + c).rem_euclid(q as i128) == 0
        })
        .collect()
}

pub fn splitting_types(disc: i64, q: u64) -> Vec<Splitting> {
    match kronecker(disc, q as i64) {
        0 => vec![Splitting::Ramified(omega_roots_mod(disc, q)[0])],
        1 => omega_roots_mod(disc, q).into_iter().map(Splitting::Split).collect(),
        _ => vec![Splitting::Inert],
    }
}

/// Prime ideal 𝔭 = (q, ω − r) or qO.
pub fn prime_ideal(disc: i64, q: u64, s: Splitting) -> Ideal {
    let qq = QuadraticElement::int(disc, q);
    match s {
        Splitting::Inert => Ideal::generated_by(disc, &[qq]).unwrap(),
        Splitting::Split(r) | Splitting::Ramified(r) => {
            let g = QuadraticElement::new(disc, -r, 1);
            Ideal::generated_by(disc, &[qq, g]).unwrap()
        }
    }
}

/// 𝔭^n for 𝔭 = (q, ω − r); split primes use a Hensel lift directly.
pub fn prime_power(disc: i64, q: u64, s: Splitting, n: u64) -> Ideal {
    match s {
        Splitting::Split(r) if n > 0 => {
            let qn = BigInt::from(q).pow(n as u32);
            let root = hensel_root(disc, r, q, n as u32);
            Ideal {
                disc,
                a: qn.clone(),
                b: (-root).mod_floor(&qn),
                c: BigInt::one(),
            }
        }
        _ => prime_ideal(disc, q, s).pow(n),
    }
}

/// An imaginary quadratic field with its class group.
#[derive(Clone, Debug)]
pub struct QuadraticFieldData {
    pub disc: i64,
    /// Squarefree d with K = ℚ(√d).
    pub d: i64,
    pub w: u32,
    pub forms: Vec<BinaryQuadraticForm>,
    pub structure: AbelianGroupStructure,
    /// Forms generating the invariant factors, aligned with `structure`.
    pub generators: Vec<BinaryQuadraticForm>,
    decomposition: Decomposition,
    coords: HashMap<BinaryQuadraticForm, Vec<i128>>,
}

impl QuadraticFieldData {
    pub fn class_number(&self) -> usize {
        self.forms.len()
    }

    /// Coordinates of a class in the invariant-factor basis.
    pub fn class_log(&self, f: &BinaryQuadraticForm) -> Vec<i128> {
        self.decomposition.dlog(&self.coords[&f.reduce()])
    }

    pub fn delta(&self) -> i64 {
        self.disc.rem_euclid(2)
    }
}

pub fn class_group(disc: i64) -> Result<QuadraticFieldData> {
    if disc >= 0 {
        return Err(domain("only imaginary quadratic fields are supported"));
    }
    if !is_fundamental_discriminant(disc) {
        return Err(invalid(format!("{disc} is not a fundamental discriminant")));
    }
    if disc < -1_000_000 {
        return Err(Error::Guard {
            what: "discriminant".into(),
            size: disc.unsigned_abs() as u128,
            limit: 1_000_000,
        });
    }
    let forms = reduced_forms(disc);
    let id = BinaryQuadraticForm::identity(disc);
    let pres = present(forms.iter().copied(), id, |f, g| f.compose(g));
    if pres.coords.len() != forms.len() {
        return Err(internal("forms do not close under composition"));
    }
    let decomposition = Decomposition::new(&pres.relations, pres.generators.len())?;
    if decomposition.structure.order() != forms.len() as u128 {
        return Err(internal("class group order differs from the form count"));
    }
    let generators = decomposition
        .basis_words()
        .iter()
        .map(|word| {
            pres.generators
                .iter()
                .zip(word)
                .fold(id, |acc, (g, &e)| acc.compose(&g.zpow(e)))
        })
        .collect();
    let d = if disc % 4 == 0 { disc / 4 } else { disc };
    let w = match disc {
        -3 => 6,
        -4 => 4,
        _ => 2,
    };
    Ok(QuadraticFieldData {
        disc,
        d,
        w,
        structure: decomposition.structure.clone(),
        forms,
        generators,
        decomposition,
        coords: pres.coords,
    })
}

/// The prime above q used throughout: (q, ω − r) with the least root r.
pub fn canonical_prime(field: &QuadraticFieldData, q: u64) -> Result<Splitting> {
    if !is_prime(q) {
        return Err(invalid(format!("{q} is not prime")));
    }
    match splitting_types(field.disc, q)[0] {
        Splitting::Inert => Err(domain(format!("{q} is inert in ℚ(√{})", field.d))),
        s => Ok(s),
    }
}

/// Order of the class of the canonical prime above q.
pub fn prime_class_order(field: &QuadraticFieldData, q: u64) -> Result<u64> {
    let s = canonical_prime(field, q)?;
    Ok(prime_ideal(field.disc, q, s).form().order())
}

/// Normalizes a generator up to units: prefer v > 0 (or v = 0, u > 0),
/// then the largest u.
fn normalize_generator(alpha: QuadraticElement) -> QuadraticElement {
    let disc = alpha.disc();
    roots_of_unity(disc)
        .iter()
        .map(|z| alpha.mul(z))
        .filter(|a| {
            let (u, v) = a.half_coords();
            v.is_positive() || (v.is_zero() && u.is_positive())
        })
        .max_by(|a, b| a.half_coords().0.cmp(&b.half_coords().0))
        .expect("some unit multiple is normalized")
}

/// α with (α) = 𝔭ⁿ for the canonical prime 𝔭 above q.
pub fn principal_generator(field: &QuadraticFieldData, q: u64, n: u64) -> Result<QuadraticElement> {
    let s = canonical_prime(field, q)?;
    let ideal = prime_power(field.disc, q, s, n);
    let alpha = ideal.generator().ok_or_else(|| {
        Error::NotFound(format!(
            "the prime above {q} has class order not dividing {n} in ℚ(√{})",
            field.d
        ))
    })?;
    let alpha = normalize_generator(alpha);
    debug_assert!(ideal.contains(&alpha));
    Ok(alpha)
}

/// Exhaustive search over |v| ≤ 2·q^{n/2}/√|D| + 1; slow, used as an
/// independent check of the lattice method.
pub fn principal_generator_search(
    field: &QuadraticFieldData,
    q: u64,
    n: u64,
) -> Result<QuadraticElement> {
    let s = canonical_prime(field, q)?;
    let ideal = prime_power(field.disc, q, s, n);
    let target = (q as f64).powi(n as i32);
    if target > 1e30 {
        return Err(Error::Guard {
            what: "norm search".into(),
            size: target as u128,
            limit: 1u128 << 100,
        });
    }
    let qn = BigInt::from(q).pow(n as u32);
    let dabs = field.disc.unsigned_abs() as f64;
    let bound = (2.0 * target.sqrt() / dabs.sqrt()).floor() as i64 + 1;
    for v in 0..=bound {
        // u² = 4qⁿ + D v²
        let rhs = BigInt::from(4) * &qn + BigInt::from(field.disc) * BigInt::from(v) * BigInt::from(v);
        if rhs.is_negative() {
            break;
        }
        let u = rhs.sqrt();
        if &u * &u != rhs {
            continue;
        }
        for u in [u.clone(), -u] {
            if let Some(a) = QuadraticElement::from_half(field.disc, u, v) {
                if ideal.contains(&a) {
                    return Ok(normalize_generator(a));
                }
            }
        }
    }
    Err(Error::NotFound(format!("no generator of norm {q}^{n} within |v| ≤ {bound}")))
}
