//! Primes of the base field (ℚ or an imaginary quadratic field), their
//! completions as finite local rings, and indexed sets (S, ν).

use std::fmt;
use std::str::FromStr;
use std::sync::Arc;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::ToPrimitive;
use serde::{Deserialize, Serialize};

use super::quadratic::{
    class_group, prime_ideal, roots_of_unity, splitting_types, Ideal, QuadraticElement,
    QuadraticFieldData, Splitting,
};
use crate::arith::{hensel_root, is_prime};
use crate::error::{invalid, Error};
use crate::localfields::{LocalElement, LocalRing};
use crate::ramgroups::DepthIndex;
use crate::Result;

/// ℚ, or an imaginary quadratic field with its class group.
#[derive(Clone, Debug)]
pub enum Base {
    Rationals,
    Quadratic(Arc<QuadraticFieldData>),
}

impl Base {
    pub fn quadratic(disc: i64) -> Result<Base> {
        Ok(Base::Quadratic(Arc::new(class_group(disc)?)))
    }

    /// ℚ(ζ₃) = ℚ(√−3).
    pub fn eisenstein() -> Base {
        Base::quadratic(-3).expect("−3 is fundamental")
    }

    /// Discriminant; 1 for ℚ.
    pub fn disc(&self) -> i64 {
        match self {
            Base::Rationals => 1,
            Base::Quadratic(f) => f.disc,
        }
    }

    pub fn degree(&self) -> u32 {
        match self {
            Base::Rationals => 1,
            Base::Quadratic(_) => 2,
        }
    }

    pub fn field(&self) -> Option<&QuadraticFieldData> {
        match self {
            Base::Rationals => None,
            Base::Quadratic(f) => Some(f),
        }
    }

    /// Roots of unity as elements x + yω (y = 0 over ℚ).
    pub fn roots_of_unity(&self) -> Vec<QuadraticElement> {
        match self {
            Base::Rationals => vec![QuadraticElement::int(1, 1), QuadraticElement::int(1, -1)],
            Base::Quadratic(f) => roots_of_unity(f.disc),
        }
    }

    /// A generator of the roots of unity.
    pub fn unit_generator(&self) -> QuadraticElement {
        match self {
            Base::Rationals => QuadraticElement::int(1, -1),
            Base::Quadratic(f) => match f.disc {
                -3 | -4 => QuadraticElement::omega(f.disc),
                d => QuadraticElement::int(d, -1),
            },
        }
    }

    pub fn unit_count(&self) -> u32 {
        match self {
            Base::Rationals => 2,
            Base::Quadratic(f) => f.w,
        }
    }

    pub fn primes_above(&self, q: u64) -> Result<Vec<PrimeIdeal>> {
        if !is_prime(q) {
            return Err(invalid(format!("{q} is not prime")));
        }
        Ok(match self {
            Base::Rationals => vec![PrimeIdeal::Rational(q)],
            Base::Quadratic(f) => splitting_types(f.disc, q)
                .into_iter()
                .map(|s| PrimeIdeal::Quadratic {
                    disc: f.disc,
                    q,
                    splitting: s,
                })
                .collect(),
        })
    }

    /// Parses "Q", "zeta3", or a negative fundamental discriminant.
    pub fn parse(s: &str) -> Result<Base> {
        match s.trim() {
            "Q" | "q" | "QQ" => Ok(Base::Rationals),
            "zeta3" | "Q(zeta3)" | "eisenstein" => Ok(Base::eisenstein()),
            t => {
                let d: i64 = t
                    .parse()
                    .map_err(|_| invalid(format!("base {t:?}: expected Q, zeta3, or a discriminant")))?;
                Base::quadratic(d)
            }
        }
    }

    pub fn name(&self) -> String {
        match self {
            Base::Rationals => "Q".into(),
            Base::Quadratic(f) => f.disc.to_string(),
        }
    }
}

/// A nonzero prime of the base field.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum PrimeIdeal {
    Rational(u64),
    Quadratic { disc: i64, q: u64, splitting: Splitting },
}

impl PrimeIdeal {
    /// The rational prime below.
    pub fn q(&self) -> u64 {
        match *self {
            PrimeIdeal::Rational(q) | PrimeIdeal::Quadratic { q, .. } => q,
        }
    }

    /// Ramification index over ℚ.
    pub fn e(&self) -> u32 {
        match self {
            PrimeIdeal::Quadratic {
                splitting: Splitting::Ramified(_),
                ..
            } => 2,
            _ => 1,
        }
    }

    /// Residue degree over ℚ.
    pub fn f(&self) -> u32 {
        match self {
            PrimeIdeal::Quadratic {
                splitting: Splitting::Inert,
                ..
            } => 2,
            _ => 1,
        }
    }

    /// Local degree [K_P : ℚ_q].
    pub fn local_degree(&self) -> u32 {
        self.e() * self.f()
    }

    pub fn norm(&self) -> u64 {
        self.q().pow(self.f())
    }

    /// The ideal as a lattice (quadratic bases only).
    pub fn ideal(&self) -> Option<Ideal> {
        match *self {
            PrimeIdeal::Rational(_) => None,
            PrimeIdeal::Quadratic { disc, q, splitting } => Some(prime_ideal(disc, q, splitting)),
        }
    }

    /// The completion's valuation ring, in a model where the global
    /// elements have an explicit image (see `image`).
    pub fn ring(&self) -> LocalRing {
        match *self {
            PrimeIdeal::Rational(q)
            | PrimeIdeal::Quadratic {
                q,
                splitting: Splitting::Split(_),
                ..
            } => LocalRing::zp(q),
            PrimeIdeal::Quadratic {
                disc,
                q,
                splitting: Splitting::Inert,
            } => {
                let (delta, c) = omega_poly(disc);
                LocalRing::unramified(q, vec![c, -delta, 1]).expect("ω is inert")
            }
            PrimeIdeal::Quadratic {
                disc,
                q,
                splitting: Splitting::Ramified(r),
            } => {
                // minimal polynomial of ω − r, Eisenstein since ω − r is a uniformizer
                let (delta, c) = omega_poly(disc);
                let g = vec![r * r - delta * r + c, 2 * r - delta, 1];
                LocalRing::eisenstein(q, g).expect("ω − r is a uniformizer")
            }
        }
    }

    /// Image of x + yω in O_P/P^b.
    pub fn image(&self, a: &QuadraticElement, b: u32) -> LocalElement {
        let ring = self.ring();
        let m = BigInt::from(self.q()).pow(b.div_ceil(self.e()));
        let red = |z: &BigInt| z.mod_floor(&m).to_i128().expect("reduced below q^b");
        match *self {
            PrimeIdeal::Rational(_) => ring.reduce(&[red(&a.x)], b),
            PrimeIdeal::Quadratic {
                disc,
                q,
                splitting: Splitting::Split(r),
            } => {
                let root = hensel_root(disc, r, q, b.max(1));
                ring.reduce(&[red(&(&a.x + &a.y * root))], b)
            }
            PrimeIdeal::Quadratic {
                splitting: Splitting::Inert,
                ..
            } => ring.reduce(&[red(&a.x), red(&a.y)], b),
            PrimeIdeal::Quadratic {
                splitting: Splitting::Ramified(r),
                ..
            } => ring.reduce(&[red(&(&a.x + &a.y * r)), red(&a.y)], b),
        }
    }

    /// v_P of a nonzero integral element.
    pub fn valuation(&self, a: &QuadraticElement) -> u32 {
        match self {
            PrimeIdeal::Rational(q) => crate::arith::vp_big(&a.x, *q),
            _ => {
                let ideal = self.ideal().unwrap();
                let mut k = 0;
                let mut power = ideal.clone();
                while power.contains(a) {
                    k += 1;
                    power = power.mul(&ideal);
                }
                k
            }
        }
    }

    /// 1 iff the completion contains a primitive p-th root of unity.
    pub fn delta(&self, p: u64) -> u32 {
        let q = self.q();
        if q != p {
            return ((self.norm() - 1) % p == 0) as u32;
        }
        match (p, self) {
            (2, _) => 1,
            // only ℚ₃(√−3) among quadratic extensions of ℚ₃
            (
                3,
                PrimeIdeal::Quadratic {
                    disc,
                    splitting: Splitting::Ramified(_),
                    ..
                },
            ) => {
                let d = if disc % 4 == 0 { disc / 4 } else { *disc };
                ((-d / 3).rem_euclid(3) == 1) as u32
            }
            _ => 0,
        }
    }

    /// Whether q is the residue characteristic p.
    pub fn is_wild(&self, p: u64) -> bool {
        self.q() == p
    }
}

fn omega_poly(disc: i64) -> (i64, i64) {
    let delta = disc.rem_euclid(2);
    (delta, (delta - disc) / 4)
}

impl fmt::Display for PrimeIdeal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            PrimeIdeal::Quadratic {
                q,
                splitting: Splitting::Split(r),
                ..
            } => write!(f, "{q}@{r}"),
            p => write!(f, "{}", p.q()),
        }
    }
}

/// (S, ν): distinct primes, each with a depth.
#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct IndexedSet {
    entries: Vec<(PrimeIdeal, DepthIndex)>,
}

/// One member of an indexed set, as it appears in JSON.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct IndexedPrime {
    pub prime: String,
    pub nu: DepthIndex,
}

impl IndexedSet {
    pub fn new(mut entries: Vec<(PrimeIdeal, DepthIndex)>) -> Result<IndexedSet> {
        entries.sort_by_key(|e| e.0);
        if entries.windows(2).any(|w| w[0].0 == w[1].0) {
            return Err(invalid("a prime occurs twice in the indexed set"));
        }
        Ok(IndexedSet { entries })
    }

    pub fn empty() -> IndexedSet {
        IndexedSet::default()
    }

    pub fn entries(&self) -> &[(PrimeIdeal, DepthIndex)] {
        &self.entries
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn is_finitely_indexed(&self) -> bool {
        self.entries.iter().all(|(_, nu)| !nu.is_infinite())
    }

    /// Every prime above q, all at depth ν.
    pub fn above(base: &Base, q: u64, nu: DepthIndex) -> Result<IndexedSet> {
        IndexedSet::new(base.primes_above(q)?.into_iter().map(|p| (p, nu)).collect())
    }

    /// Comma-separated tokens `q[@r][:ν]`; a bare `q` stands for every
    /// prime above q, `q@r` for (q, ω − r). Depth defaults to ∞.
    pub fn parse(base: &Base, s: &str) -> Result<IndexedSet> {
        let mut entries = Vec::new();
        for token in s.split(',').map(str::trim).filter(|t| !t.is_empty()) {
            let (prime, nu) = match token.split_once(':') {
                Some((a, b)) => (a, b.parse::<DepthIndex>()?),
                None => (token, DepthIndex::Infinite),
            };
            let (q, root) = match prime.split_once('@') {
                Some((q, r)) => (q, Some(r)),
                None => (prime, None),
            };
            let q: u64 = q
                .trim()
                .parse()
                .map_err(|_| invalid(format!("prime {q:?} is not a positive integer")))?;
            let above = base.primes_above(q)?;
            match root {
                None => entries.extend(above.into_iter().map(|p| (p, nu))),
                Some(r) => {
                    let r: i64 = r
                        .trim()
                        .parse()
                        .map_err(|_| invalid(format!("root {r:?} is not an integer")))?;
                    let p = above
                        .into_iter()
                        .find(|p| {
                            matches!(p, PrimeIdeal::Quadratic { splitting: Splitting::Split(s) | Splitting::Ramified(s), .. } if *s == r)
                        })
                        .ok_or_else(|| invalid(format!("no prime ({q}, ω − {r}) in this field")))?;
                    entries.push((p, nu));
                }
            }
        }
        IndexedSet::new(entries)
    }

    pub fn to_json(&self) -> Vec<IndexedPrime> {
        self.entries
            .iter()
            .map(|(p, nu)| IndexedPrime {
                prime: p.to_string(),
                nu: *nu,
            })
            .collect()
    }
}

impl fmt::Display for IndexedSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.entries.iter().map(|(p, nu)| format!("{p}:{nu}")).collect();
        f.write_str(&parts.join(","))
    }
}

impl FromStr for Base {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        Base::parse(s)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn primes_above_two_in_q_sqrt_minus_7() {
        let k = Base::quadratic(-7).unwrap();
        let ps = k.primes_above(2).unwrap();
        assert_eq!(ps.len(), 2);
        assert!(ps.iter().all(|p| p.norm() == 2 && p.e() == 1));
        assert_eq!(k.primes_above(3).unwrap()[0].norm(), 9);
        assert_eq!(k.primes_above(7).unwrap()[0].e(), 2);
    }

    #[test]
    fn images_are_ring_homomorphisms() {
        for (d, q) in [(-7i64, 2u64), (-7, 3), (-7, 7), (-3, 3), (-4, 2), (-23, 5), (-84, 3)] {
            let k = Base::quadratic(d).unwrap();
            for p in k.primes_above(q).unwrap() {
                let ring = p.ring();
                for b in 1..5 {
                    for (x1, y1, x2, y2) in [(3, 5, -2, 7), (1, 1, 1, -1), (10, -3, 4, 4)] {
                        let a1 = QuadraticElement::new(d, x1, y1);
                        let a2 = QuadraticElement::new(d, x2, y2);
                        let lhs = p.image(&a1.mul(&a2), b);
                        let rhs = ring.mul(&p.image(&a1, b), &p.image(&a2, b), b);
                        assert_eq!(lhs, rhs, "D = {d}, {p}, b = {b}");
                    }
                    // elements of P map into the maximal ideal
                    let [g1, g2] = p.ideal().unwrap().basis();
                    assert!(!ring.is_unit(&p.image(&g1, b), b));
                    assert!(!ring.is_unit(&p.image(&g2, b), b));
                }
            }
        }
    }

    #[test]
    fn valuations() {
        let k = Base::quadratic(-7).unwrap();
        let p = k.primes_above(2).unwrap()[0];
        let w = QuadraticElement::omega(-7);
        let vals: Vec<u32> = k.primes_above(2).unwrap().iter().map(|p| p.valuation(&w)).collect();
        assert_eq!(vals.iter().sum::<u32>(), 1);
        assert_eq!(p.valuation(&QuadraticElement::int(-7, 8)), 3);
    }

    #[test]
    fn roots_of_unity_in_completions() {
        let k3 = Base::eisenstein();
        assert_eq!(k3.primes_above(3).unwrap()[0].delta(3), 1);
        // ℚ₃(√−21) = ℚ₃(√−3) as 7 is a square in ℚ₃, while 2 is not
        let k = Base::quadratic(-84).unwrap();
        assert_eq!(k.primes_above(3).unwrap()[0].delta(3), 1);
        let k = Base::quadratic(-24).unwrap();
        assert_eq!(k.primes_above(3).unwrap()[0].delta(3), 0);
        assert_eq!(Base::Rationals.primes_above(7).unwrap()[0].delta(3), 1);
        assert_eq!(Base::Rationals.primes_above(5).unwrap()[0].delta(3), 0);
        assert_eq!(Base::Rationals.primes_above(3).unwrap()[0].delta(3), 0);
    }

    #[test]
    fn indexed_set_parsing() {
        let k = Base::quadratic(-7).unwrap();
        let s = IndexedSet::parse(&k, "2:4").unwrap();
        assert_eq!(s.entries().len(), 2);
        assert_eq!(s.to_string(), "2@0:4,2@1:4");
        let s = IndexedSet::parse(&k, "2@1:5/2,3").unwrap();
        assert_eq!(s.to_string(), "2@1:5/2,3:inf");
        assert!(IndexedSet::parse(&k, "2@5:1").is_err());
        assert!(IndexedSet::parse(&k, "2:1,2@0:3").is_err());
        assert!(IndexedSet::parse(&k, "4:1").is_err());
        assert!(IndexedSet::parse(&Base::Rationals, "3:-1").is_err());
    }
}
