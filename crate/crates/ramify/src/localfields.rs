//! Finite quotients O/P^b of a small catalog of p-adic fields, and the
//! unit-filtration invariants computed from them by enumeration.

use std::collections::HashSet;

use serde::{Deserialize, Serialize};

use crate::abelian::{structure_of, AbelianGroupStructure};
use crate::arith::{is_prime, is_squarefree, kronecker};
use crate::error::{internal, invalid, Error};
use crate::ramgroups::DepthIndex;
use crate::{check_guard, Result};

/// ℤ_p[t]/(g) with g monic, in one of two shapes: g Eisenstein (totally
/// ramified, e = deg g) or g irreducible mod p (unramified, f = deg g).
/// Elements modulo P^b are coefficient vectors in canonical form.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LocalRing {
    p: u64,
    modulus: Vec<i64>,
    e: u32,
    f: u32,
}

pub type LocalElement = Vec<i64>;

impl LocalRing {
    pub fn zp(p: u64) -> LocalRing {
        LocalRing {
            p,
            modulus: vec![0, 1],
            e: 1,
            f: 1,
        }
    }

    /// Totally ramified ring defined by an Eisenstein polynomial in t.
    pub fn eisenstein(p: u64, g: Vec<i64>) -> Result<LocalRing> {
        let big = crate::arith::big_poly(&g);
        if !crate::arith::is_eisenstein(&big, p) {
            return Err(invalid(format!("{g:?} is not Eisenstein at {p}")));
        }
        let e = (g.len() - 1) as u32;
        Ok(LocalRing {
            p,
            modulus: g,
            e,
            f: 1,
        })
    }

    /// Unramified ring; `g` must be irreducible modulo p (checked for
    /// degree 2 only, which is all the catalog needs).
    pub fn unramified(p: u64, g: Vec<i64>) -> Result<LocalRing> {
        let f = (g.len() - 1) as u32;
        if f == 2 {
            let q = p as i64;
            let has_root = (0..q).any(|x| (g[0] + g[1] * x + x * x).rem_euclid(q) == 0);
            if has_root {
                return Err(invalid(format!("{g:?} is reducible mod {p}")));
            }
        } else if f != 1 {
            return Err(invalid("unramified models are restricted to degree ≤ 2"));
        }
        Ok(LocalRing {
            p,
            modulus: g,
            e: 1,
            f,
        })
    }

    pub fn p(&self) -> u64 {
        self.p
    }

    pub fn e(&self) -> u32 {
        self.e
    }

    pub fn f(&self) -> u32 {
        self.f
    }

    pub fn dim(&self) -> usize {
        self.modulus.len() - 1
    }

    /// Modulus for coordinate j at precision b.
    fn coord_modulus(&self, j: usize, b: u32) -> i128 {
        let k = if self.e == 1 {
            b as i64
        } else {
            (b as i64 - j as i64 + self.e as i64 - 1).div_euclid(self.e as i64)
        };
        (self.p as i128).pow(k.max(0) as u32)
    }

    /// |O/P^b| = p^{f·b}.
    pub fn size(&self, b: u32) -> u128 {
        (self.p as u128).pow(self.f * b)
    }

    /// Canonical representative of Σ c_j t^j modulo P^b.
    pub fn reduce(&self, c: &[i128], b: u32) -> LocalElement {
        let n = self.dim();
        let big_m = (self.p as i128).pow(b.div_ceil(self.e));
        let mut r: Vec<i128> = c.iter().map(|x| x.rem_euclid(big_m)).collect();
        while r.len() > n {
            let lead = r.pop().unwrap();
            if lead == 0 {
                continue;
            }
            let shift = r.len() - n;
            for k in 0..n {
                r[shift + k] = (r[shift + k] - lead * self.modulus[k] as i128).rem_euclid(big_m);
            }
        }
        r.resize(n, 0);
        r.iter()
            .enumerate()
            .map(|(j, &x)| x.rem_euclid(self.coord_modulus(j, b)) as i64)
            .collect()
    }

    pub fn from_int(&self, x: i128, b: u32) -> LocalElement {
        self.reduce(&[x], b)
    }

    pub fn one(&self, b: u32) -> LocalElement {
        self.from_int(1, b)
    }

    pub fn mul(&self, x: &[i64], y: &[i64], b: u32) -> LocalElement {
        let mut prod = vec![0i128; x.len() + y.len() - 1];
        for (i, &a) in x.iter().enumerate() {
            for (j, &c) in y.iter().enumerate() {
                prod[i + j] += a as i128 * c as i128;
            }
        }
        self.reduce(&prod, b)
    }

    pub fn pow(&self, x: &[i64], mut k: u128, b: u32) -> LocalElement {
        let mut base = x.to_vec();
        let mut acc = self.one(b);
        while k > 0 {
            if k & 1 == 1 {
                acc = self.mul(&acc, &base, b);
            }
            base = self.mul(&base, &base, b);
            k >>= 1;
        }
        acc
    }

    /// v_P(x), capped at b for elements that vanish modulo P^b.
    pub fn valuation(&self, x: &[i64], b: u32) -> u32 {
        x.iter()
            .enumerate()
            .filter(|(_, &c)| c != 0)
            .map(|(j, &c)| self.e * crate::arith::vp(c as i128, self.p) + if self.e == 1 { 0 } else { j as u32 })
            .min()
            .unwrap_or(b)
            .min(b)
    }

    pub fn is_unit(&self, x: &[i64], b: u32) -> bool {
        b == 0 || self.valuation(x, b) == 0
    }

    /// |(O/P^b)^×|.
    pub fn unit_count(&self, b: u32) -> u128 {
        if b == 0 {
            return 1;
        }
        let q = (self.p as u128).pow(self.f);
        (q - 1) * q.pow(b - 1)
    }

    pub fn unit_inverse(&self, x: &[i64], b: u32) -> LocalElement {
        debug_assert!(self.is_unit(x, b));
        self.pow(x, self.unit_count(b) - 1, b)
    }

    /// Index of a canonical element in 0..size(b).
    pub fn encode(&self, x: &[i64], b: u32) -> u64 {
        let mut idx = 0u128;
        for j in (0..self.dim()).rev() {
            idx = idx * self.coord_modulus(j, b) as u128 + x[j] as u128;
        }
        idx as u64
    }

    pub fn decode(&self, mut idx: u64, b: u32) -> LocalElement {
        (0..self.dim())
            .map(|j| {
                let m = self.coord_modulus(j, b) as u64;
                let c = idx % m;
                idx /= m;
                c as i64
            })
            .collect()
    }

    pub fn elements(&self, b: u32) -> Result<impl Iterator<Item = LocalElement> + '_> {
        let size = self.size(b);
        check_guard("local residue ring", size)?;
        Ok((0..size as u64).map(move |i| self.decode(i, b)))
    }

    /// {u^p : u ∈ (O/P^b)^×}.
    pub fn unit_powers(&self, k: u128, b: u32) -> Result<HashSet<LocalElement>> {
        Ok(self
            .elements(b)?
            .filter(|x| self.is_unit(x, b))
            .map(|x| self.pow(&x, k, b))
            .collect())
    }

    /// Largest exponent worth testing p-th powers at: U^{(n)} ⊂ U^p for
    /// n ≥ ⌊ep/(p−1)⌋ + 1, and U^{(1)} ⊂ U^p when p differs from the residue
    /// characteristic.
    pub fn power_test_bound(&self, p: u64) -> u32 {
        if p != self.p {
            1
        } else {
            (self.e as u64 * p / (p - 1)) as u32 + 1
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum LocalTag {
    Qp,
    UnramifiedQuadratic,
    RamifiedQuadraticOver2,
    CyclotomicLocal,
}

/// A p-adic field from the closed catalog.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct LocalFieldSpec {
    pub tag: LocalTag,
    pub p: u64,
    /// d for ℚ₂(√d), n for ℚ_p(ζ_{p^n}); absent otherwise.
    #[serde(default)]
    pub param: Option<i64>,
}

/// Ramified quadratic extensions of ℚ₂, one per isomorphism class.
pub const RAMIFIED_Q2_PARAMS: [i64; 6] = [-1, 3, 2, -2, 6, -6];

impl LocalFieldSpec {
    pub fn qp(p: u64) -> Self {
        LocalFieldSpec {
            tag: LocalTag::Qp,
            p,
            param: None,
        }
    }

    pub fn unramified_quadratic(p: u64) -> Self {
        LocalFieldSpec {
            tag: LocalTag::UnramifiedQuadratic,
            p,
            param: None,
        }
    }

    pub fn ramified_quadratic_over_2(d: i64) -> Self {
        LocalFieldSpec {
            tag: LocalTag::RamifiedQuadraticOver2,
            p: 2,
            param: Some(d),
        }
    }

    pub fn cyclotomic(p: u64, n: u32) -> Self {
        LocalFieldSpec {
            tag: LocalTag::CyclotomicLocal,
            p,
            param: Some(n as i64),
        }
    }

    pub fn validate(&self) -> Result<()> {
        let p = self.p;
        if !is_prime(p) {
            return Err(invalid(format!("{p} is not prime")));
        }
        match (self.tag, self.param) {
            (LocalTag::Qp | LocalTag::UnramifiedQuadratic, None) => Ok(()),
            (LocalTag::RamifiedQuadraticOver2, Some(d)) => {
                if p != 2 || !RAMIFIED_Q2_PARAMS.contains(&d) {
                    return Err(Error::Catalog(format!(
                        "ramified quadratic over ℚ₂ needs p = 2 and d ∈ {RAMIFIED_Q2_PARAMS:?}"
                    )));
                }
                debug_assert!(is_squarefree(d));
                Ok(())
            }
            (LocalTag::CyclotomicLocal, Some(n)) => {
                let ok = [2, 3, 5].contains(&p)
                    && n >= 1
                    && !(p == 2 && n == 1)
                    && (p as i128).pow(n.min(10) as u32) <= 243;
                if ok {
                    Ok(())
                } else {
                    Err(Error::Catalog(format!(
                        "ℚ_{p}(ζ_{p}^{n}) outside p ∈ {{2,3,5}}, p^n ≤ 243 (ℚ₂(ζ₂) = ℚ₂ is listed as Qp)"
                    )))
                }
            }
            _ => Err(invalid(format!("parameter {:?} does not fit tag {:?}", self.param, self.tag))),
        }
    }

    /// (e, f) over ℚ_p.
    pub fn ef(&self) -> Result<(u32, u32)> {
        self.validate()?;
        Ok(match self.tag {
            LocalTag::Qp => (1, 1),
            LocalTag::UnramifiedQuadratic => (1, 2),
            LocalTag::RamifiedQuadraticOver2 => (2, 1),
            LocalTag::CyclotomicLocal => {
                let n = self.param.unwrap() as u32;
                ((self.p - 1) as u32 * (self.p as u32).pow(n - 1), 1)
            }
        })
    }

    pub fn degree(&self) -> Result<u32> {
        let (e, f) = self.ef()?;
        Ok(e * f)
    }

    pub fn ring(&self) -> Result<LocalRing> {
        self.validate()?;
        let p = self.p;
        match self.tag {
            LocalTag::Qp => Ok(LocalRing::zp(p)),
            LocalTag::UnramifiedQuadratic => {
                if p == 2 {
                    LocalRing::unramified(2, vec![1, 1, 1])
                } else {
                    let n = (2..p as i64).find(|&a| kronecker(a, p as i64) == -1).unwrap();
                    LocalRing::unramified(p, vec![-n, 0, 1])
                }
            }
            LocalTag::RamifiedQuadraticOver2 => {
                let d = self.param.unwrap();
                // √d itself if d is even, √d − 1 if d ≡ 3 mod 4
                let g = if d % 2 == 0 { vec![-d, 0, 1] } else { vec![1 - d, 2, 1] };
                LocalRing::eisenstein(2, g)
            }
            LocalTag::CyclotomicLocal => {
                let n = self.param.unwrap() as u32;
                let step = p.pow(n - 1) as usize;
                let mut phi = vec![0i64; (p as usize - 1) * step + 1];
                for j in 0..p as usize {
                    phi[j * step] = 1;
                }
                let shifted = crate::arith::taylor_shift(&crate::arith::big_poly(&phi), 1);
                let g = shifted
                    .iter()
                    .map(|c| i64::try_from(c).map_err(|_| invalid("coefficient overflow")))
                    .collect::<Result<Vec<_>>>()?;
                LocalRing::eisenstein(p, g)
            }
        }
    }
}

/// U^{(a)}/U^{(b)} with its invariant factors.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct UnitQuotient {
    pub spec: LocalFieldSpec,
    pub a: u32,
    pub b: u32,
    pub structure: AbelianGroupStructure,
}

/// Structure of U^{(a)}/U^{(b)} in a given ring, by enumeration inside
/// (O/P^b)^×.
pub fn unit_quotient_in(ring: &LocalRing, a: u32, b: u32) -> Result<AbelianGroupStructure> {
    if a > b {
        return Err(invalid(format!("need a ≤ b, got {a} > {b}")));
    }
    if a == b {
        return Ok(AbelianGroupStructure::trivial());
    }
    let one = ring.one(b);
    let members: Vec<u64> = ring
        .elements(b)?
        .filter(|x| {
            if a == 0 {
                ring.is_unit(x, b)
            } else {
                let d: Vec<i64> = x.iter().zip(&one).map(|(u, v)| u - v).collect();
                ring.valuation(&ring.reduce(&d.iter().map(|&c| c as i128).collect::<Vec<_>>(), b), b) >= a
            }
        })
        .map(|x| ring.encode(&x, b))
        .collect();
    let expected = if a == 0 {
        ring.unit_count(b)
    } else {
        (ring.p as u128).pow(ring.f * (b - a))
    };
    if members.len() as u128 != expected {
        return Err(internal(format!(
            "U^({a})/U^({b}) has {} elements, expected {expected}",
            members.len()
        )));
    }
    let structure = structure_of(members, ring.encode(&one, b), |x, y| {
        ring.encode(&ring.mul(&ring.decode(*x, b), &ring.decode(*y, b), b), b)
    })?;
    if structure.order() != expected {
        return Err(internal("enumerated group order mismatch"));
    }
    Ok(structure)
}

pub fn unit_quotient(spec: &LocalFieldSpec, a: u32, b: u32) -> Result<UnitQuotient> {
    let ring = spec.ring()?;
    Ok(UnitQuotient {
        spec: *spec,
        a,
        b,
        structure: unit_quotient_in(&ring, a, b)?,
    })
}

/// p-rank of U^{(1)}/U^{(⌈ν⌉)}; for ν = ∞ the rank of U^{(1)} itself,
/// [K_p:ℚ_p] + δ_p.
pub fn prank_u1_mod_unu(spec: &LocalFieldSpec, nu: DepthIndex) -> Result<usize> {
    match nu.ceil() {
        None => Ok((spec.degree()? + delta_p(spec)?) as usize),
        Some(b) if b <= 1 => {
            spec.validate()?;
            Ok(0)
        }
        Some(b) => Ok(unit_quotient(spec, 1, b as u32)?.structure.p_rank(spec.p)),
    }
}

/// 1 iff the field contains a primitive p-th root of unity.
pub fn delta_p(spec: &LocalFieldSpec) -> Result<u32> {
    let (e, _) = spec.ef()?;
    let p = spec.p;
    let by_tag = match spec.tag {
        LocalTag::Qp | LocalTag::UnramifiedQuadratic => p == 2,
        LocalTag::RamifiedQuadraticOver2 | LocalTag::CyclotomicLocal => true,
    };
    // for odd p, ζ_p generates a totally ramified extension of degree p − 1
    if by_tag && p != 2 && e as u64 % (p - 1) != 0 {
        return Err(internal("root of unity claimed without (p − 1) | e"));
    }
    Ok(by_tag as u32)
}

/// 1 iff ζ_p ∈ U^{(ν)}, i.e. δ_p = 1 and e/(p−1) = v(ζ_p − 1) ≥ ⌈ν⌉.
pub fn delta_p_nu(spec: &LocalFieldSpec, nu: DepthIndex) -> Result<u32> {
    if delta_p(spec)? == 0 {
        return Ok(0);
    }
    let (e, _) = spec.ef()?;
    Ok(match nu.ceil() {
        None => 0,
        Some(b) => (e as u64 / (spec.p - 1) >= b) as u32,
    })
}

/// Every field of the catalog that is small enough to enumerate at the
/// stabilisation exponent.
pub fn catalog_fields() -> Vec<LocalFieldSpec> {
    let mut v = vec![
        LocalFieldSpec::qp(2),
        LocalFieldSpec::qp(3),
        LocalFieldSpec::qp(5),
        LocalFieldSpec::unramified_quadratic(2),
        LocalFieldSpec::unramified_quadratic(3),
        LocalFieldSpec::unramified_quadratic(5),
    ];
    v.extend(RAMIFIED_Q2_PARAMS.iter().map(|&d| LocalFieldSpec::ramified_quadratic_over_2(d)));
    for (p, n) in [(2, 2), (2, 3), (2, 4), (3, 1), (3, 2), (5, 1)] {
        v.push(LocalFieldSpec::cyclotomic(p, n));
    }
    v
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::Rational;

    fn inv(s: &AbelianGroupStructure) -> Vec<u64> {
        s.invariants().to_vec()
    }

    #[test]
    fn small_quotients() {
        let q2 = LocalFieldSpec::qp(2);
        assert_eq!(inv(&unit_quotient(&q2, 1, 3).unwrap().structure), vec![2, 2]);
        let q3 = LocalFieldSpec::qp(3);
        assert_eq!(inv(&unit_quotient(&q3, 1, 2).unwrap().structure), vec![3]);
        assert!(unit_quotient(&q3, 2, 2).unwrap().structure.is_trivial());
        assert!(unit_quotient(&q3, 3, 2).is_err());
        assert_eq!(inv(&unit_quotient(&q3, 0, 2).unwrap().structure), vec![6]);
    }

    #[test]
    fn q2_principal_units() {
        let q2 = LocalFieldSpec::qp(2);
        for b in 3..=12u32 {
            let s = unit_quotient(&q2, 1, b).unwrap().structure;
            assert_eq!(inv(&s), vec![2, 1 << (b - 2)], "b = {b}");
        }
    }

    #[test]
    fn graded_pieces_have_residue_field_size() {
        for spec in catalog_fields() {
            let ring = spec.ring().unwrap();
            let q = (spec.p as u128).pow(ring.f());
            for a in 1..=3u32 {
                for b in a..=a + 2 {
                    if ring.size(b) > 200_000 {
                        continue;
                    }
                    let s = unit_quotient_in(&ring, a, b).unwrap();
                    assert_eq!(s.order(), q.pow(b - a), "{spec:?} {a} {b}");
                }
            }
        }
    }

    #[test]
    fn ranks_for_q2() {
        let q2 = LocalFieldSpec::qp(2);
        let got: Vec<usize> = (1..=6)
            .map(|k| prank_u1_mod_unu(&q2, DepthIndex::int(k)).unwrap())
            .collect();
        assert_eq!(got, vec![0, 1, 2, 2, 2, 2]);
        assert_eq!(prank_u1_mod_unu(&q2, DepthIndex::Infinite).unwrap(), 2);
        assert_eq!(prank_u1_mod_unu(&q2, DepthIndex::Finite(Rational::new(1, 2))).unwrap(), 0);
        // ⌈5/2⌉ = 3
        assert_eq!(prank_u1_mod_unu(&q2, DepthIndex::Finite(Rational::new(5, 2))).unwrap(), 2);
    }

    #[test]
    fn stabilisation_on_catalog() {
        for spec in catalog_fields() {
            let ring = spec.ring().unwrap();
            let bound = ring.power_test_bound(spec.p);
            if ring.size(bound) > 2_000_000 {
                continue;
            }
            let stable = prank_u1_mod_unu(&spec, DepthIndex::Infinite).unwrap();
            let mut prev = 0;
            for b in 1..=bound + 1 {
                let r = prank_u1_mod_unu(&spec, DepthIndex::int(b as u64)).unwrap();
                assert!(r >= prev, "{spec:?} not monotone");
                prev = r;
            }
            assert_eq!(prev, stable, "{spec:?}");
        }
    }

    #[test]
    fn roots_of_unity() {
        assert_eq!(delta_p(&LocalFieldSpec::qp(2)).unwrap(), 1);
        assert_eq!(delta_p(&LocalFieldSpec::qp(3)).unwrap(), 0);
        assert_eq!(delta_p(&LocalFieldSpec::cyclotomic(3, 1)).unwrap(), 1);
        assert_eq!(delta_p(&LocalFieldSpec::unramified_quadratic(3)).unwrap(), 0);
        let q2 = LocalFieldSpec::qp(2);
        assert_eq!(delta_p_nu(&q2, DepthIndex::int(1)).unwrap(), 1);
        assert_eq!(delta_p_nu(&q2, DepthIndex::int(2)).unwrap(), 0);
        assert_eq!(delta_p_nu(&q2, DepthIndex::Infinite).unwrap(), 0);
        assert_eq!(delta_p_nu(&LocalFieldSpec::qp(3), DepthIndex::int(1)).unwrap(), 0);
        // ℚ₂(ζ₈): v(−1 − 1) = 4
        let z8 = LocalFieldSpec::cyclotomic(2, 3);
        assert_eq!(delta_p_nu(&z8, DepthIndex::int(4)).unwrap(), 1);
        assert_eq!(delta_p_nu(&z8, DepthIndex::int(5)).unwrap(), 0);
    }

    #[test]
    fn delta_nu_monotone() {
        for spec in catalog_fields() {
            for k in 0..12u64 {
                let here = delta_p_nu(&spec, DepthIndex::int(k)).unwrap();
                if here == 1 {
                    assert_eq!(delta_p(&spec).unwrap(), 1);
                    for j in 0..k {
                        assert_eq!(delta_p_nu(&spec, DepthIndex::int(j)).unwrap(), 1);
                    }
                }
            }
        }
    }

    #[test]
    fn zeta_p_is_where_it_should_be() {
        // −1 ≡ ζ₂ lies in U^{(e)} but not U^{(e+1)} for every 2-adic catalog field
        for spec in catalog_fields().into_iter().filter(|s| s.p == 2) {
            let ring = spec.ring().unwrap();
            let e = ring.e();
            let b = e + 2;
            let m1 = ring.from_int(-1, b);
            let d: Vec<i128> = m1.iter().zip(ring.one(b)).map(|(x, y)| (*x - y) as i128).collect();
            assert_eq!(ring.valuation(&ring.reduce(&d, b), b), e, "{spec:?}");
        }
    }

    #[test]
    fn spec_validation_and_json() {
        assert!(LocalFieldSpec::ramified_quadratic_over_2(5).validate().is_err());
        assert!(LocalFieldSpec::cyclotomic(7, 1).validate().is_err());
        assert!(LocalFieldSpec::cyclotomic(3, 6).validate().is_err());
        assert!(LocalFieldSpec::cyclotomic(2, 1).validate().is_err());
        let s = LocalFieldSpec::cyclotomic(3, 2);
        let j = serde_json::to_string(&s).unwrap();
        assert_eq!(j, r#"{"tag":"CyclotomicLocal","p":3,"param":2}"#);
        assert_eq!(serde_json::from_str::<LocalFieldSpec>(&j).unwrap(), s);
        assert_eq!(s.ef().unwrap(), (6, 1));
    }

    #[test]
    fn encode_roundtrip() {
        let ring = LocalFieldSpec::cyclotomic(3, 1).ring().unwrap();
        for b in 0..5 {
            for (i, x) in ring.elements(b).unwrap().enumerate() {
                assert_eq!(ring.encode(&x, b), i as u64);
                assert_eq!(ring.reduce(&x.iter().map(|&c| c as i128).collect::<Vec<_>>(), b), x);
            }
        }
    }
}
