//! For a prime ℓ ≡ 7 (mod 8), K = ℚ(√−ℓ) and 2O_K = 𝔭𝔮 with
//! 𝔭 = (2, (1 + √−ℓ)/2): whether some quadratic extension of K unramified
//! outside 𝔭 splits 𝔮 completely. The test computes a generator
//! α = (a + b√−ℓ)/2 of a suitable power 𝔭ⁿ and asks whether a² ≡ 1 (mod 16);
//! the answer is expected to coincide with ℓ ≡ 15 (mod 16), which the scan
//! reports as an independent column.

use num_bigint::BigInt;
use num_integer::Integer;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::quadratic::{class_group, prime_class_order, principal_generator, splitting_types, Splitting};
use crate::arith::{is_prime, kronecker};
use crate::error::{domain, internal};
use crate::Result;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CriterionRow {
    pub ell: u64,
    pub class_number: u64,
    /// Order of the class of 𝔭.
    pub prime_order: u64,
    /// The exponent n with 𝔭ⁿ = (α).
    pub exponent: u64,
    /// α^τ = (a − b√−ℓ)/2.
    pub a: String,
    pub b: String,
    /// a² ≡ 1 (mod 16).
    pub generator_test: bool,
    /// ℓ ≡ 15 (mod 16).
    pub congruence_test: bool,
    pub agree: bool,
}

pub fn criterion_report(ell: u64) -> Result<CriterionRow> {
    if !is_prime(ell) || ell % 8 != 7 {
        return Err(domain(format!("{ell} is not a prime ≡ 7 (mod 8)")));
    }
    let disc = -(ell as i64);
    if kronecker(disc, 2) != 1 {
        return Err(internal(format!("2 does not split in ℚ(√−{ell})")));
    }
    let field = class_group(disc)?;
    let h = field.class_number() as u64;
    if h % 2 == 0 {
        return Err(internal(format!("h(−{ell}) = {h} is even")));
    }
    if splitting_types(disc, 2)[0] != Splitting::Split(0) {
        return Err(internal("the chosen prime above 2 is not (2, ω)"));
    }
    let n = prime_class_order(&field, 2)?;
    // n is odd; the mod-16 argument needs 2^{n+2} ≡ 0 (mod 32), so the
    // trivial class (ℓ = 7) is treated through 𝔭³
    let exponent = if n >= 3 { n } else { 3 * n };
    let alpha = principal_generator(&field, 2, exponent)?;
    let (u, v) = alpha.conj().half_coords();
    let (a, b) = (u, -v);
    if !a.is_odd() || !b.is_odd() {
        return Err(internal(format!("generator of 𝔭^{exponent} has even coordinates")));
    }
    if &a * &a + BigInt::from(ell) * &b * &b != BigInt::from(2u8).pow(exponent as u32 + 2) {
        return Err(internal("generator has the wrong norm"));
    }
    let generator_test = (&a * &a).mod_floor(&BigInt::from(16)) == BigInt::from(1);
    let congruence_test = ell % 16 == 15;
    Ok(CriterionRow {
        ell,
        class_number: h,
        prime_order: n,
        exponent,
        a: a.to_string(),
        b: b.to_string(),
        generator_test,
        congruence_test,
        agree: generator_test == congruence_test,
    })
}

/// The generator-based test alone.
pub fn quadratic_splitting_criterion(ell: u64) -> Result<bool> {
    Ok(criterion_report(ell)?.generator_test)
}

/// Every prime ℓ ≡ 7 (mod 8) in [min, max], ascending.
pub fn criterion_scan(min: u64, max: u64) -> Result<Vec<CriterionRow>> {
    let ells: Vec<u64> = (min..=max).filter(|&l| l % 8 == 7 && is_prime(l)).collect();
    ells.par_iter().map(|&l| criterion_report(l)).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn small_cases() {
        assert!(!quadratic_splitting_criterion(7).unwrap());
        assert!(quadratic_splitting_criterion(31).unwrap());
        assert!(!quadratic_splitting_criterion(23).unwrap());
        assert!(quadratic_splitting_criterion(11).is_err());
        assert!(quadratic_splitting_criterion(15).is_err());
    }

    #[test]
    fn scan_to_200() {
        let rows = criterion_scan(7, 200).unwrap();
        let ells: Vec<u64> = rows.iter().map(|r| r.ell).collect();
        assert_eq!(ells, vec![7, 23, 31, 47, 71, 79, 103, 127, 151, 167, 191, 199]);
        assert!(rows.iter().all(|r| r.agree));
    }
}
