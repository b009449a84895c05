//! Closed-form bounds: root-discriminant bounds for extensions with bounded
//! ramification depth, the growth of v(different)/e along cyclotomic
//! towers, both sides of the generator-rank formula, and the relation-rank
//! and Euler-characteristic evaluators.
//!
//! Powers are kept exact as ∏ qᵢ^{eᵢ} with rational eᵢ; decimals are
//! rendered from the exact form.

use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigInt;
use num_traits::{One, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::arith::{factor, is_prime};
use crate::classfield::characters::{cyclotomic_discriminant, ray_layer_discriminant, DirichletGroup};
use crate::classfield::delta::delta_rank;
use crate::classfield::primes::{Base, IndexedSet};
use crate::classfield::rayclass::{ray_class_group_for, truncate_infinite};
use crate::error::{domain, internal, invalid};
use crate::herbrand::{psi_from_filtration, upper_jumps, Filtration};
use crate::localfields::unit_quotient_in;
use crate::ramgroups::{
    cyclotomic_subfield_filtration, different_valuation, filtration_monogenic, DepthIndex,
    MonogenicLocalExtension,
};
use crate::{Rational, Result};

pub const DEFAULT_PRECISION: usize = 12;

/// ∏ q^{e_q} over primes q with nonzero rational exponents.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct FactoredPower {
    factors: BTreeMap<u64, Rational>,
}

impl FactoredPower {
    pub fn one() -> Self {
        FactoredPower::default()
    }

    pub fn prime_power(q: u64, e: Rational) -> Self {
        FactoredPower::one().times_prime(q, e)
    }

    /// n^e for a positive integer n.
    pub fn integer_power(n: u64, e: Rational) -> Self {
        factor(n)
            .into_iter()
            .fold(FactoredPower::one(), |acc, (q, k)| acc.times_prime(q, e * Rational::from(k as i128)))
    }

    pub fn from_factorization(f: &BTreeMap<u64, u64>, e: Rational) -> Self {
        f.iter()
            .fold(FactoredPower::one(), |acc, (&q, &k)| acc.times_prime(q, e * Rational::from(k as i128)))
    }

    fn times_prime(mut self, q: u64, e: Rational) -> Self {
        let x = self.factors.get(&q).copied().unwrap_or_else(Rational::zero) + e;
        if x == Rational::zero() {
            self.factors.remove(&q);
        } else {
            self.factors.insert(q, x);
        }
        self
    }

    pub fn mul(&self, o: &FactoredPower) -> FactoredPower {
        o.factors
            .iter()
            .fold(self.clone(), |acc, (&q, &e)| acc.times_prime(q, e))
    }

    pub fn pow(&self, e: Rational) -> FactoredPower {
        FactoredPower {
            factors: self
                .factors
                .iter()
                .filter(|(_, &x)| x * e != Rational::zero())
                .map(|(&q, &x)| (q, x * e))
                .collect(),
        }
    }

    pub fn recip(&self) -> FactoredPower {
        self.pow(Rational::from(-1i128))
    }

    pub fn factors(&self) -> &BTreeMap<u64, Rational> {
        &self.factors
    }

    /// Exact comparison of self·scale_num/scale_den with 1, where the scale
    /// is a positive rational given as big integers.
    fn cmp_scaled(&self, num: &BigInt, den: &BigInt) -> Ordering {
        let l = self
            .factors
            .values()
            .fold(1i128, |acc, e| num_integer::lcm(acc, e.denom()));
        let mut lhs = num.pow(l as u32);
        let mut rhs = den.pow(l as u32);
        for (&q, e) in &self.factors {
            let k = e.numer() * (l / e.denom());
            let qq = BigInt::from(q).pow(k.unsigned_abs() as u32);
            if k > 0 {
                lhs *= qq;
            } else {
                rhs *= qq;
            }
        }
        lhs.cmp(&rhs)
    }

    /// Exact comparison of the two real numbers.
    pub fn cmp_value(&self, o: &FactoredPower) -> Ordering {
        self.mul(&o.recip()).cmp_scaled(&BigInt::one(), &BigInt::one())
    }

    /// Compares the value with 10^k.
    fn cmp_pow10(&self, k: i64) -> Ordering {
        if k >= 0 {
            self.cmp_scaled(&BigInt::one(), &pow10(k))
        } else {
            self.cmp_scaled(&pow10(-k), &BigInt::one())
        }
    }

    pub fn to_f64(&self) -> f64 {
        self.factors
            .iter()
            .map(|(&q, e)| (q as f64).powf(e.to_f64()))
            .product()
    }

    /// Decimal rendering correctly rounded to `digits` significant digits
    /// (ties away from zero), trailing zeros removed.
    pub fn decimal(&self, digits: usize) -> String {
        let digits = digits.max(1);
        // exponent E with 10^E ≤ value < 10^{E+1}, fixed exactly from an estimate
        let mut e10 = self.to_f64().log10().floor() as i64;
        loop {
            if self.cmp_pow10(e10).is_lt() {
                e10 -= 1;
            } else if !self.cmp_pow10(e10 + 1).is_lt() {
                e10 += 1;
            } else {
                break;
            }
        }
        let shift = digits as i64 - 1 - e10;
        // n = round(value·10^shift): largest n with value·10^shift ≥ n − 1/2
        let (sn, sd) = if shift >= 0 {
            (pow10(shift), BigInt::one())
        } else {
            (BigInt::one(), pow10(-shift))
        };
        let estimate = (self.to_f64() * 10f64.powi(shift as i32)).round();
        let mut n = BigInt::from(estimate.max(1.0) as u128);
        let at_least = |n: &BigInt| {
            // value·10^shift ≥ n − 1/2  ⇔  2·value·sn ≥ (2n − 1)·sd
            let two_n_minus_one: BigInt = BigInt::from(2) * n - 1;
            !self
                .cmp_scaled(&(BigInt::from(2) * &sn), &(two_n_minus_one * &sd))
                .is_lt()
        };
        while !at_least(&n) {
            n -= 1;
        }
        while at_least(&(&n + 1)) {
            n += 1;
        }
        render(&n, shift)
    }
}

fn pow10(k: i64) -> BigInt {
    debug_assert!(k >= 0);
    BigInt::from(10).pow(k as u32)
}

/// n·10^{−shift} as a plain decimal.
fn render(n: &BigInt, shift: i64) -> String {
    if shift <= 0 {
        return (n * BigInt::from(10).pow((-shift) as u32)).to_string();
    }
    let s = n.to_string();
    let shift = shift as usize;
    let (int, frac) = if s.len() > shift {
        (s[..s.len() - shift].to_string(), s[s.len() - shift..].to_string())
    } else {
        ("0".to_string(), format!("{}{}", "0".repeat(shift - s.len()), s))
    };
    let frac = frac.trim_end_matches('0');
    if frac.is_empty() {
        int
    } else {
        format!("{int}.{frac}")
    }
}

impl fmt::Display for FactoredPower {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.factors.is_empty() {
            return f.write_str("1");
        }
        let parts: Vec<String> = self
            .factors
            .iter()
            .map(|(q, e)| if *e == Rational::one() { q.to_string() } else { format!("{q}^({e})") })
            .collect();
        f.write_str(&parts.join("·"))
    }
}

/// One factor q^e of a report.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PowerFactor {
    pub base: u64,
    pub exp: Rational,
}

/// An exact power product with its decimal rendering.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct BoundReport {
    pub exact: Vec<PowerFactor>,
    pub decimal: String,
}

impl BoundReport {
    pub fn new(value: &FactoredPower, digits: usize) -> BoundReport {
        BoundReport {
            exact: value
                .factors()
                .iter()
                .map(|(&base, &exp)| PowerFactor { base, exp })
                .collect(),
            decimal: value.decimal(digits),
        }
    }

    pub fn value(&self) -> FactoredPower {
        self.exact
            .iter()
            .fold(FactoredPower::one(), |acc, f| acc.times_prime(f.base, f.exp))
    }
}

/// What the bounds need to know about the base field K at the prime p.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct BaseFieldSummary {
    pub degree: u32,
    /// Factorization of |disc_K|.
    pub disc: BTreeMap<u64, u64>,
    /// Number of complex places.
    pub r2: u32,
    pub p: u64,
    /// p-rank of the unit group.
    pub unit_prank: u32,
    /// 1 iff K contains a primitive p-th root of unity.
    pub delta: u32,
}

impl BaseFieldSummary {
    pub fn of(base: &Base, p: u64) -> Result<BaseFieldSummary> {
        if !is_prime(p) {
            return Err(invalid(format!("{p} is not prime")));
        }
        let w = base.unit_count() as u64;
        // K is ℚ or imaginary quadratic: the unit group is μ_w
        let unit_prank = (w % p == 0) as u32;
        Ok(BaseFieldSummary {
            degree: base.degree(),
            disc: factor(base.disc().unsigned_abs()).into_iter().map(|(q, k)| (q, k as u64)).collect(),
            r2: base.degree() / 2,
            p,
            unit_prank,
            delta: unit_prank,
        })
    }

    pub fn root_discriminant(&self) -> FactoredPower {
        FactoredPower::from_factorization(&self.disc, Rational::new(1, self.degree as i128))
    }

    /// θ_S: 1 only when ζ_p ∈ K and S is empty.
    pub fn theta(&self, set: &IndexedSet) -> u32 {
        (self.delta == 1 && set.is_empty()) as u32
    }
}

/// |disc|^{1/degree}.
pub fn root_discriminant(disc: &BTreeMap<u64, u64>, degree: u32) -> Result<FactoredPower> {
    if degree == 0 {
        return Err(invalid("degree must be positive"));
    }
    Ok(FactoredPower::from_factorization(disc, Rational::new(1, degree as i128)))
}

fn norm_power(base: &BaseFieldSummary, q: u64, f: u32, e: Rational) -> FactoredPower {
    FactoredPower::prime_power(q, e * Rational::new(f as i128, base.degree as i128))
}

/// rd_K ∏_{tame} N𝔭^{1/n} ∏_{wild} N𝔭^{(ν+1)/n}: bound on rd_L for L inside
/// the maximal p-extension with ramification depth < ν at S.
pub fn rd_bound_depth(base: &BaseFieldSummary, set: &IndexedSet) -> Result<FactoredPower> {
    let mut acc = base.root_discriminant();
    for (pr, nu) in set.entries() {
        let e = if pr.is_wild(base.p) {
            match nu {
                DepthIndex::Finite(v) => *v + Rational::one(),
                DepthIndex::Infinite => {
                    return Err(domain(format!("the bound is undefined for infinite depth at {pr}")))
                }
            }
        } else {
            Rational::one()
        };
        acc = acc.mul(&norm_power(base, pr.q(), pr.f(), e));
    }
    Ok(acc)
}

/// rd_K ∏_{S} N𝔭^{⌈ν⌉/n}, the conductor-exponent form of the bound.
pub fn rd_bound_conductor(base: &BaseFieldSummary, set: &IndexedSet) -> Result<FactoredPower> {
    let mut acc = base.root_discriminant();
    for (pr, nu) in set.entries() {
        let c = nu
            .ceil()
            .ok_or_else(|| domain(format!("the bound is undefined for infinite depth at {pr}")))?;
        acc = acc.mul(&norm_power(base, pr.q(), pr.f(), Rational::from(c as i128)));
    }
    Ok(acc)
}

/// v(different)/e.
pub fn tau(filt: &Filtration, e: u64) -> Result<Rational> {
    if e != filt.inertia() {
        return Err(invalid(format!("e = {e} differs from the inertia order {}", filt.inertia())));
    }
    Ok(Rational::new(different_valuation(filt) as i128, e as i128))
}

/// For a totally ramified layer with D^ν trivial: with n = ψ(ν), the
/// different exponent equals g₀(ν + 1) − (n + 1), which is at most
/// (e − 1)(ν + 1). Returns that value after checking both facts.
pub fn different_from_depth(filt: &Filtration, nu: Rational) -> Result<Rational> {
    let jumps = upper_jumps(filt);
    if let Some(&last) = jumps.last() {
        if nu < last {
            return Err(domain(format!("D^{nu} is not trivial (last upper jump {last})")));
        }
    }
    let n = psi_from_filtration(filt).evaluate(nu)?;
    let g0 = Rational::from(filt.inertia() as i128);
    let value = g0 * (nu + Rational::one()) - (n + Rational::one());
    let hilbert = Rational::from(different_valuation(filt) as i128);
    if value != hilbert {
        return Err(internal(format!("depth identity gives {value}, Hilbert's formula {hilbert}")));
    }
    if value > (g0 - Rational::one()) * (nu + Rational::one()) {
        return Err(internal("different exponent exceeds (e − 1)(ν + 1)"));
    }
    Ok(value)
}

/// The identity at the last upper jump (the smallest admissible ν).
pub fn check_depth_identity(filt: &Filtration) -> Result<()> {
    match upper_jumps(filt).last() {
        Some(&u) => different_from_depth(filt, u).map(|_| ()),
        None => Ok(()),
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TowerRow {
    pub n: u32,
    pub filtration: Filtration,
    pub tau: Rational,
    /// rd of ℚ(ζ_{p^n}) = p^τ.
    pub rd: BoundReport,
}

/// τ_n and rd along ℚ(ζ_{p^n}), n = 1..=N, from brute-force filtrations,
/// each cross-checked against the conductor-discriminant formula.
pub fn tower_rd_growth(p: u64, levels: u32, digits: usize) -> Result<Vec<TowerRow>> {
    if ![2, 3, 5].contains(&p) || levels == 0 || levels > 6 {
        return Err(crate::Error::Catalog(format!("tower (p = {p}, N = {levels}) outside p ∈ {{2,3,5}}, 1 ≤ N ≤ 6")));
    }
    let mut rows: Vec<TowerRow> = Vec::new();
    for n in 1..=levels {
        let filt = filtration_monogenic(&MonogenicLocalExtension::cyclotomic(p, n, 0)?)?;
        let t = tau(&filt, filt.inertia())?;
        let (deg, disc) = cyclotomic_discriminant(p.pow(n))?;
        let v = disc.get(&p).copied().unwrap_or(0);
        if Rational::new(v as i128, deg as i128) != t {
            return Err(internal(format!("τ at level {n} disagrees with the discriminant")));
        }
        if let Some(prev) = rows.last() {
            if prev.tau >= t {
                return Err(internal("τ failed to increase"));
            }
        }
        check_depth_identity(&filt)?;
        rows.push(TowerRow {
            n,
            rd: BoundReport::new(&FactoredPower::prime_power(p, t), digits),
            filtration: filt,
            tau: t,
        });
    }
    Ok(rows)
}

/// Generator rank from the ray class side: p-rank of Cl_m, m = ∏ P^{⌈ν⌉}.
pub fn generator_rank_rayclass(base: &Base, set: &IndexedSet, p: u64) -> Result<usize> {
    Ok(ray_class_group_for(base, set, p)?.p_rank)
}

/// The same with infinite depths replaced by an exponent past which the
/// p-rank no longer changes (the unrestricted-ramification rank).
pub fn generator_rank_rayclass_stable(base: &Base, set: &IndexedSet, p: u64) -> Result<usize> {
    generator_rank_rayclass(base, &truncate_infinite(set, p)?, p)
}

/// Inputs of the idelic side of the generator-rank formula.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct IdelicIngredients {
    pub delta_rank: u32,
    pub unit_prank: u32,
    /// δ_𝔭 at primes of S not above p (0 where ⌈ν⌉ = 0).
    pub tame_deltas: Vec<u32>,
    /// p-rank of U^{(1)}/U^{(ν)} at primes above p; [K_𝔭:ℚ_p] + δ_𝔭 for ν = ∞.
    pub wild_unit_ranks: Vec<u32>,
}

/// p-rk Δ − p-rk E + Σ δ_𝔭 + Σ p-rk U^{(1)}/U^{(ν)}.
pub fn generator_rank_idelic(delta_rank: u32, unit_prank: u32, tame_deltas: &[u32], wild_unit_ranks: &[u32]) -> i64 {
    delta_rank as i64 - unit_prank as i64
        + tame_deltas.iter().map(|&d| d as i64).sum::<i64>()
        + wild_unit_ranks.iter().map(|&r| r as i64).sum::<i64>()
}

pub fn idelic_ingredients(base: &Base, set: &IndexedSet, p: u64) -> Result<IdelicIngredients> {
    let summary = BaseFieldSummary::of(base, p)?;
    let mut tame_deltas = Vec::new();
    let mut wild_unit_ranks = Vec::new();
    for (pr, nu) in set.entries() {
        if pr.is_wild(p) {
            let r = match nu.ceil() {
                None => pr.local_degree() + pr.delta(p),
                Some(b) if b <= 1 => 0,
                Some(b) => unit_quotient_in(&pr.ring(), 1, b as u32)?.p_rank(p) as u32,
            };
            wild_unit_ranks.push(r);
        } else {
            tame_deltas.push(if nu.ceil() == Some(0) { 0 } else { pr.delta(p) });
        }
    }
    Ok(IdelicIngredients {
        delta_rank: delta_rank(base, set, p)? as u32,
        unit_prank: summary.unit_prank,
        tame_deltas,
        wild_unit_ranks,
    })
}

impl IdelicIngredients {
    pub fn value(&self) -> i64 {
        generator_rank_idelic(self.delta_rank, self.unit_prank, &self.tame_deltas, &self.wild_unit_ranks)
    }
}

/// Both sides of the generator-rank formula for one instance.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct GeneratorRankComparison {
    pub rayclass: usize,
    pub idelic: i64,
    pub ingredients: IdelicIngredients,
    pub agree: bool,
}

pub fn compare_generator_ranks(base: &Base, set: &IndexedSet, p: u64) -> Result<GeneratorRankComparison> {
    let rayclass = generator_rank_rayclass_stable(base, set, p)?;
    let ingredients = idelic_ingredients(base, set, p)?;
    let idelic = ingredients.value();
    Ok(GeneratorRankComparison {
        rayclass,
        idelic,
        agree: rayclass as i64 == idelic,
        ingredients,
    })
}

/// r_S − d_S ≤ p-rk E − δ_K + θ_S − Σ_{𝔭 | p} [K_𝔭:ℚ_p].
pub fn shafarevich_bound(unit_prank: u32, delta_k: u32, theta_s: u32, wild_degrees: &[u32]) -> Result<i64> {
    check_bits(&[delta_k, theta_s])?;
    Ok(unit_prank as i64 - delta_k as i64 + theta_s as i64
        - wild_degrees.iter().map(|&d| d as i64).sum::<i64>())
}

/// r_{S,ν} ≤ p-rk B + θ_S − δ_K + Σ δ_𝔭, with p-rk B supplied by the caller.
pub fn relation_rank_bound(b_rank: u32, theta_s: u32, delta_k: u32, local_deltas: &[u32]) -> Result<i64> {
    check_bits(&[delta_k, theta_s])?;
    check_bits(local_deltas)?;
    Ok(b_rank as i64 + theta_s as i64 - delta_k as i64 + local_deltas.iter().map(|&d| d as i64).sum::<i64>())
}

/// Upper bound for the p-rank of the kernel of the localization map:
/// p-rk E + d + Σ_{finite wild}([K_𝔭:ℚ_p] + δ(𝔭, ν)) − Σ δ_𝔭 − Σ p-rk U^{(1)}/U^{(ν)}.
pub fn kernel_rank_bound(
    unit_prank: u32,
    generator_rank: u32,
    wild_finite: &[(u32, u32)],
    tame_deltas: &[u32],
    wild_unit_ranks: &[u32],
) -> Result<i64> {
    check_bits(&wild_finite.iter().map(|w| w.1).collect::<Vec<_>>())?;
    check_bits(tame_deltas)?;
    Ok(unit_prank as i64
        + generator_rank as i64
        + wild_finite.iter().map(|&(d, e)| (d + e) as i64).sum::<i64>()
        - tame_deltas.iter().map(|&d| d as i64).sum::<i64>()
        - wild_unit_ranks.iter().map(|&r| r as i64).sum::<i64>())
}

/// r_S − d_S = −(r₂ + 1) when S contains every prime above p.
pub fn euler_characteristic_full(r2: u32) -> i64 {
    -(r2 as i64 + 1)
}

fn check_bits(xs: &[u32]) -> Result<()> {
    if xs.iter().any(|&x| x > 1) {
        return Err(invalid("δ and θ values must be 0 or 1"));
    }
    Ok(())
}

/// The maximal real p-power layer of the ray class field of ℚ modulo
/// p^{⌈ν⌉}, compared with the depth bound.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct LayerCheck {
    pub p: u64,
    pub nu: Rational,
    pub degree: u64,
    pub disc_exponent: u64,
    pub filtration: Filtration,
    pub rd: BoundReport,
    pub bound: BoundReport,
    pub within_bound: bool,
}

pub fn rational_layer_check(p: u64, nu: Rational, digits: usize) -> Result<LayerCheck> {
    let k = nu.ceil();
    if k < 1 {
        return Err(domain("ν must be positive"));
    }
    let k = k as u32;
    let (degree, disc) = ray_layer_discriminant(p, k, p)?;
    let v = disc.get(&p).copied().unwrap_or(0);
    if disc.keys().any(|&q| q != p) {
        return Err(internal("layer ramified outside p"));
    }
    // the layer is fixed by the common kernel of its characters
    let m = p.pow(k);
    let g = DirichletGroup::new(m)?;
    let kept: Vec<Vec<i128>> = g
        .characters()
        .into_iter()
        .filter(|chi| {
            let mut o = g.order(chi);
            while o % p == 0 {
                o /= p;
            }
            o == 1 && g.value(chi, -1) == Some(0)
        })
        .collect();
    let in_h = |a: u64| kept.iter().all(|chi| g.value(chi, a as i64) == Some(0));
    let filtration = if degree == 1 {
        Filtration::trivial()
    } else {
        cyclotomic_subfield_filtration(p, k, &in_h)?
    };
    // totally ramified at p, so the discriminant exponent is the different's
    if different_valuation(&filtration) != v || filtration.inertia() != degree {
        return Err(internal(format!(
            "layer filtration {filtration:?} disagrees with discriminant exponent {v}"
        )));
    }
    if degree > 1 {
        different_from_depth(&filtration, nu)?;
        check_depth_identity(&filtration)?;
    }
    let rd = FactoredPower::prime_power(p, Rational::new(v as i128, degree as i128));
    let summary = BaseFieldSummary::of(&Base::Rationals, p)?;
    let set = IndexedSet::new(vec![(Base::Rationals.primes_above(p)?[0], DepthIndex::finite(nu)?)])?;
    let bound = rd_bound_depth(&summary, &set)?;
    Ok(LayerCheck {
        p,
        nu,
        degree,
        disc_exponent: v,
        within_bound: rd.cmp_value(&bound).is_le(),
        rd: BoundReport::new(&rd, digits),
        bound: BoundReport::new(&bound, digits),
        filtration,
    })
}

/// Nonnegative value as an exact integer if it is one.
pub fn as_integer(x: &FactoredPower) -> Option<BigInt> {
    let mut acc = BigInt::one();
    for (&q, e) in x.factors() {
        if !e.is_integer() || e.is_negative() {
            return None;
        }
        acc *= BigInt::from(q).pow(e.numer().to_u32()?);
    }
    Some(acc).filter(|a| !a.is_zero())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn r(n: i128, d: i128) -> Rational {
        Rational::new(n, d)
    }

    #[test]
    fn decimals() {
        assert_eq!(FactoredPower::prime_power(2, r(3, 2)).decimal(4), "2.828");
        assert_eq!(FactoredPower::prime_power(3, r(4, 3)).decimal(4), "4.327");
        assert_eq!(FactoredPower::prime_power(3, r(3, 1)).decimal(12), "27");
        assert_eq!(FactoredPower::one().decimal(12), "1");
        assert_eq!(FactoredPower::prime_power(2, r(-3, 1)).decimal(12), "0.125");
        assert_eq!(FactoredPower::prime_power(2, r(1, 2)).decimal(12), "1.41421356237");
        assert_eq!(FactoredPower::prime_power(10, r(20, 1)).decimal(3), "100000000000000000000");
        // 0.95 is exactly between 0.9 and 1.0 at one digit: rounds up
        let x = FactoredPower::integer_power(19, r(1, 1)).mul(&FactoredPower::integer_power(20, r(-1, 1)));
        assert_eq!(x.decimal(1), "1");
        assert_eq!(x.decimal(2), "0.95");
    }

    #[test]
    fn exact_comparison() {
        let a = FactoredPower::prime_power(3, r(4, 3));
        let b = FactoredPower::prime_power(3, r(3, 1));
        assert!(a.cmp_value(&b).is_lt());
        let c = FactoredPower::integer_power(8, r(1, 2));
        assert_eq!(c.cmp_value(&FactoredPower::prime_power(2, r(3, 2))), Ordering::Equal);
        // 2^{1/2} vs 3^{1/3}: 2³ = 8 < 9 = 3²
        assert!(FactoredPower::prime_power(2, r(1, 2)).cmp_value(&FactoredPower::prime_power(3, r(1, 3))).is_lt());
    }

    #[test]
    fn root_discriminants() {
        let rd = root_discriminant(&BTreeMap::from([(2, 3)]), 2).unwrap();
        assert_eq!(rd.decimal(4), "2.828");
        assert_eq!(root_discriminant(&BTreeMap::new(), 5).unwrap(), FactoredPower::one());
        let rd = root_discriminant(&BTreeMap::from([(3, 9)]), 6).unwrap();
        assert_eq!(rd, FactoredPower::prime_power(3, r(3, 2)));
        assert_eq!(rd.decimal(4), "5.196");
    }

    #[test]
    fn depth_bounds_over_q() {
        let q = Base::Rationals;
        let s3 = BaseFieldSummary::of(&q, 3).unwrap();
        let set = IndexedSet::parse(&q, "3:2").unwrap();
        assert_eq!(rd_bound_depth(&s3, &set).unwrap().decimal(12), "27");
        assert_eq!(rd_bound_conductor(&s3, &set).unwrap().decimal(12), "9");
        let set = IndexedSet::parse(&q, "3:5/2").unwrap();
        assert_eq!(rd_bound_conductor(&s3, &set).unwrap().decimal(12), "27");
        let set = IndexedSet::parse(&q, "5:1").unwrap();
        assert_eq!(rd_bound_depth(&s3, &set).unwrap().decimal(12), "5");
        assert_eq!(rd_bound_depth(&s3, &IndexedSet::empty()).unwrap(), FactoredPower::one());
        assert!(rd_bound_depth(&s3, &IndexedSet::parse(&q, "3:inf").unwrap()).is_err());
        assert!(rd_bound_conductor(&s3, &IndexedSet::parse(&q, "5:inf").unwrap()).is_err());
        // tame at ν = ∞ is fine for the depth bound
        assert_eq!(rd_bound_depth(&s3, &IndexedSet::parse(&q, "5:inf").unwrap()).unwrap().decimal(3), "5");
    }

    #[test]
    fn bounds_over_quadratic_base() {
        let k = Base::quadratic(-7).unwrap();
        let s = BaseFieldSummary::of(&k, 2).unwrap();
        assert_eq!(s.unit_prank, 1);
        assert_eq!(s.r2, 1);
        let set = IndexedSet::parse(&k, "2:2").unwrap();
        // √7 · 2^{3/2} · 2^{3/2}
        let b = rd_bound_depth(&s, &set).unwrap();
        assert_eq!(b.factors().get(&2), Some(&r(3, 1)));
        assert_eq!(b.factors().get(&7), Some(&r(1, 2)));
    }

    #[test]
    fn tau_values() {
        assert_eq!(tau(&Filtration::trivial(), 1).unwrap(), r(0, 1));
        assert_eq!(tau(&Filtration::new(vec![2, 2, 2]).unwrap(), 2).unwrap(), r(3, 2));
        assert_eq!(tau(&Filtration::new(vec![6, 3, 3]).unwrap(), 6).unwrap(), r(3, 2));
        assert!(tau(&Filtration::new(vec![6, 3, 3]).unwrap(), 3).is_err());
    }

    #[test]
    fn tower_growth() {
        let rows = tower_rd_growth(3, 5, 12).unwrap();
        let taus: Vec<Rational> = rows.iter().map(|r| r.tau).collect();
        assert_eq!(taus, vec![r(1, 2), r(3, 2), r(5, 2), r(7, 2), r(9, 2)]);
        let rows = tower_rd_growth(2, 3, 12).unwrap();
        assert_eq!(rows[1].rd.decimal, "2");
        assert_eq!(rows[2].rd.value(), FactoredPower::prime_power(2, r(2, 1)));
        assert!(tower_rd_growth(7, 2, 12).is_err());
        assert!(tower_rd_growth(5, 4, 12).is_err());
    }

    #[test]
    fn depth_identity() {
        let f = Filtration::new(vec![2, 2, 2]).unwrap();
        for nu in [r(2, 1), r(5, 2), r(3, 1), r(7, 1)] {
            assert_eq!(different_from_depth(&f, nu).unwrap(), r(3, 1));
        }
        assert!(different_from_depth(&f, r(1, 1)).is_err());
        for orders in [vec![6, 3, 3], vec![4, 4, 2, 2], vec![3, 3], vec![4, 2, 2, 2, 2]] {
            check_depth_identity(&Filtration::new(orders).unwrap()).unwrap();
        }
    }

    #[test]
    fn generator_rank_sides() {
        let q = Base::Rationals;
        let set = IndexedSet::parse(&q, "3:2").unwrap();
        assert_eq!(generator_rank_rayclass(&q, &set, 3).unwrap(), 1);
        let c = compare_generator_ranks(&q, &set, 3).unwrap();
        assert!(c.agree, "{c:?}");
        let k = Base::quadratic(-7).unwrap();
        let set = IndexedSet::parse(&k, "2:4").unwrap();
        let c = compare_generator_ranks(&k, &set, 2).unwrap();
        assert_eq!((c.rayclass, c.idelic), (3, 3));
        assert_eq!(generator_rank_idelic(0, 0, &[], &[]), 0);
    }

    #[test]
    fn evaluators() {
        assert_eq!(shafarevich_bound(0, 0, 0, &[1]).unwrap(), -1);
        assert_eq!(shafarevich_bound(0, 0, 0, &[]).unwrap(), 0);
        assert_eq!(shafarevich_bound(1, 1, 0, &[1, 1]).unwrap(), -2);
        assert_eq!(relation_rank_bound(0, 0, 0, &[]).unwrap(), 0);
        assert_eq!(relation_rank_bound(2, 0, 1, &[1, 1]).unwrap(), 3);
        assert!(relation_rank_bound(2, 2, 1, &[]).is_err());
        assert_eq!(kernel_rank_bound(0, 0, &[], &[], &[]).unwrap(), 0);
        // ℚ, S = {2}, ν = 3, p = 2 with d = 1 and U^{(1)}/U^{(3)} of rank 2
        assert_eq!(kernel_rank_bound(0, 1, &[(1, 0)], &[], &[2]).unwrap(), 0);
        assert_eq!(kernel_rank_bound(1, 1, &[(1, 0)], &[], &[2]).unwrap(), 1);
        assert_eq!(euler_characteristic_full(0), -1);
        assert_eq!(euler_characteristic_full(1), -2);
        assert_eq!(euler_characteristic_full(3), -4);
    }

    #[test]
    fn layers_over_q() {
        let c = rational_layer_check(3, r(2, 1), 12).unwrap();
        assert_eq!((c.degree, c.disc_exponent), (3, 4));
        assert_eq!(c.bound.decimal, "27");
        assert_eq!(c.rd.decimal, "4.32674871092");
        assert!(c.within_bound);
        for (p, nu) in [(2, 3), (3, 3), (5, 2)] {
            assert!(rational_layer_check(p, r(nu, 1), 12).unwrap().within_bound);
        }
    }

    #[test]
    fn report_json() {
        let b = BoundReport::new(&FactoredPower::prime_power(2, r(3, 2)), 12);
        let j = serde_json::to_string(&b).unwrap();
        assert_eq!(j, r#"{"exact":[{"base":2,"exp":"3/2"}],"decimal":"2.82842712475"}"#);
        let back: BoundReport = serde_json::from_str(&j).unwrap();
        assert_eq!(back, b);
        assert_eq!(as_integer(&FactoredPower::prime_power(3, r(3, 1))), Some(BigInt::from(27)));
    }
}
