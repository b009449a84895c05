//! Lower-numbering ramification filtrations of explicit extensions, computed
//! by brute force over the Galois group, plus Hilbert's different formula and
//! the depth predicates built on the Herbrand functions.
//!
//! Two valuation oracles are available: a monogenic local model, where
//! i(σ) = v(σx − x) for the generator x, and a global ℤ-basis model where
//! v_P(x) = v_ℓ(N(x)) is valid because P is the only prime above ℓ and has
//! residue degree 1.

use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_traits::{One, Zero};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::arith::{
    big_poly, det_big, is_eisenstein, kronecker, poly_compose_mod, poly_is_zero, poly_mulmod,
    rational_inverse, taylor_shift, vp_big, BigPoly,
};
use crate::error::{domain, invalid, Error};
use crate::herbrand::{group_order_at_upper, psi_from_filtration, Filtration};
use crate::{Rational, Result};

/// A depth ν ∈ ℚ≥0 ∪ {∞}.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum DepthIndex {
    Finite(Rational),
    Infinite,
}

impl DepthIndex {
    pub fn finite(r: Rational) -> Result<DepthIndex> {
        if r.is_negative() {
            return Err(domain(format!("depth {r} is negative")));
        }
        Ok(DepthIndex::Finite(r))
    }

    pub fn int(n: u64) -> DepthIndex {
        DepthIndex::Finite(Rational::from(n))
    }

    /// ⌈ν⌉, or None for ∞.
    pub fn ceil(&self) -> Option<u64> {
        match self {
            DepthIndex::Finite(r) => Some(r.ceil() as u64),
            DepthIndex::Infinite => None,
        }
    }

    pub fn is_infinite(&self) -> bool {
        matches!(self, DepthIndex::Infinite)
    }
}

impl fmt::Display for DepthIndex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            DepthIndex::Finite(r) => write!(f, "{r}"),
            DepthIndex::Infinite => f.write_str("inf"),
        }
    }
}

impl FromStr for DepthIndex {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s.trim() {
            "inf" | "infinity" | "∞" => Ok(DepthIndex::Infinite),
            t => DepthIndex::finite(t.parse()?),
        }
    }
}

impl Serialize for DepthIndex {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        match self {
            DepthIndex::Finite(r) => s.collect_str(&r.fraction()),
            DepthIndex::Infinite => s.collect_str("inf"),
        }
    }
}

impl<'de> Deserialize<'de> for DepthIndex {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        String::deserialize(d)?
            .parse()
            .map_err(serde::de::Error::custom)
    }
}

/// How v_P is computed on polynomials in the generator.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case", tag = "rule")]
pub enum ValuationRule {
    /// The minimal polynomial of (generator − shift) is Eisenstein over ℤ_p,
    /// so in the shifted basis v(Σ b_j t^j) = min(N·v_p(b_j) + j).
    Eisenstein { shift: i64 },
    /// The top field is unramified and ℤ_p[x] is its valuation ring.
    Unramified,
}

/// A local extension with a single ring generator x and explicit
/// automorphisms σ(x) given as polynomials in x.
#[derive(Clone, Debug)]
pub struct MonogenicLocalExtension {
    p: u64,
    modulus: BigPoly,
    automorphisms: Vec<BigPoly>,
    e: u32,
    f: u32,
    rule: ValuationRule,
}

impl MonogenicLocalExtension {
    /// `modulus` is the monic minimal polynomial of the generator over ℚ
    /// (low degree first); `automorphisms` the images of the generator.
    pub fn new(
        p: u64,
        modulus: &[i64],
        automorphisms: &[Vec<i64>],
        e: u32,
        f: u32,
        rule: ValuationRule,
    ) -> Result<Self> {
        Self::build(p, modulus, automorphisms, e, f, rule, true)
    }

    /// `check_group` verifies that the images are roots of the modulus and
    /// closed under composition; constructors whose automorphisms are
    /// correct by construction skip that (cubic in the degree) work.
    fn build(
        p: u64,
        modulus: &[i64],
        automorphisms: &[Vec<i64>],
        e: u32,
        f: u32,
        rule: ValuationRule,
        check_group: bool,
    ) -> Result<Self> {
        let modulus = big_poly(modulus);
        let deg = modulus.len().saturating_sub(1);
        if deg == 0 || !modulus[deg].is_one() {
            return Err(invalid("modulus must be monic of positive degree"));
        }
        let n = automorphisms.len();
        if (e * f) as usize != n {
            return Err(invalid(format!("e·f = {} but {} automorphisms", e * f, n)));
        }
        match rule {
            ValuationRule::Eisenstein { shift } => {
                if !is_eisenstein(&taylor_shift(&modulus, shift), p) {
                    return Err(invalid("shifted modulus is not Eisenstein"));
                }
                if f != 1 {
                    return Err(invalid("Eisenstein model must be totally ramified"));
                }
            }
            ValuationRule::Unramified => {
                if e != 1 {
                    return Err(invalid("unramified model must have e = 1"));
                }
            }
        }
        let reduce = |a: &Vec<i64>| -> Result<BigPoly> {
            if a.len() > deg {
                return Err(invalid("automorphism image has degree ≥ modulus degree"));
            }
            let mut v = big_poly(a);
            v.resize(deg, BigInt::zero());
            Ok(v)
        };
        let auts: Vec<BigPoly> = automorphisms.iter().map(reduce).collect::<Result<_>>()?;
        let mut x = vec![BigInt::zero(); deg];
        if deg > 1 {
            x[1] = BigInt::one();
        } else {
            // degree one: the generator is the rational −modulus[0]
            x[0] = -modulus[0].clone();
        }
        if !auts.contains(&x) {
            return Err(invalid("automorphism list lacks the identity"));
        }
        for s in auts.iter().filter(|_| check_group) {
            // σ must send x to another root of the modulus
            if !poly_is_zero(&poly_compose_mod(&modulus, s, &modulus)) {
                return Err(invalid("automorphism image is not a root of the modulus"));
            }
            for t in &auts {
                if !auts.contains(&poly_compose_mod(t, s, &modulus)) {
                    return Err(invalid("automorphisms are not closed under composition"));
                }
            }
        }
        let ext = MonogenicLocalExtension {
            p,
            modulus,
            automorphisms: auts,
            e,
            f,
            rule,
        };
        Ok(ext)
    }

    /// ℚ_p(ζ_{p^n}) over ℚ_p(ζ_{p^k}), generator ζ, σ_a: ζ ↦ ζ^a for
    /// a ≡ 1 mod p^k.
    pub fn cyclotomic(p: u64, n: u32, over: u32) -> Result<Self> {
        check_cyclotomic_scope(p, n)?;
        if over > n {
            return Err(invalid("base level exceeds top level"));
        }
        let pn = p.pow(n) as i64;
        let step = p.pow(n.saturating_sub(1)) as usize;
        let mut modulus = vec![0i64; (p as usize - 1) * step + 1];
        for j in 0..p as usize {
            modulus[j * step] = 1;
        }
        let big_mod = big_poly(&modulus);
        let pk = p.pow(over) as i64;
        let mut auts = Vec::new();
        for a in 1..pn {
            if a % p as i64 == 0 || (a - 1) % pk != 0 {
                continue;
            }
            let mut mono = vec![BigInt::zero(); a as usize + 1];
            mono[a as usize] = BigInt::one();
            let img = crate::arith::poly_rem_monic(&mono, &big_mod);
            auts.push(img.iter().map(|c| i64::try_from(c).unwrap()).collect::<Vec<_>>());
        }
        let n_aut = auts.len() as u32;
        // ζ ↦ ζ^a for a ≡ 1 mod p^over: the Galois group over ℚ_p(ζ_{p^over})
        Self::build(p, &modulus, &auts, n_aut, 1, ValuationRule::Eisenstein { shift: 1 }, pn <= 27)
    }

    /// ℚ₂(√d)/ℚ₂ for a squarefree integer d that is not a 2-adic square.
    pub fn quadratic_over_q2(d: i64) -> Result<Self> {
        if !crate::arith::is_squarefree(d) || d == 1 {
            return Err(invalid(format!("d = {d} must be squarefree and ≠ 1")));
        }
        match d.rem_euclid(8) {
            1 => Err(Error::Catalog(format!("ℚ₂(√{d}) = ℚ₂ is not a quadratic extension"))),
            5 => Self::new(
                2,
                &[(1 - d) / 4, -1, 1],
                &[vec![0, 1], vec![1, -1]],
                1,
                2,
                ValuationRule::Unramified,
            ),
            r => {
                let shift = if r % 2 == 0 { 0 } else { 1 };
                Self::new(
                    2,
                    &[-d, 0, 1],
                    &[vec![0, 1], vec![0, -1]],
                    2,
                    1,
                    ValuationRule::Eisenstein { shift },
                )
            }
        }
    }

    /// ℚ₂(√3)(√2)/ℚ₂(√3), generated by x = (√2 + √6)/2 with minimal
    /// polynomial x⁴ − 4x² + 1; the nontrivial automorphism is x ↦ −x.
    pub fn sqrt2_over_q2_sqrt3() -> Self {
        Self::new(
            2,
            &[1, 0, -4, 0, 1],
            &[vec![0, 1], vec![0, -1]],
            2,
            1,
            ValuationRule::Eisenstein { shift: 1 },
        )
        .expect("valid model")
    }

    pub fn p(&self) -> u64 {
        self.p
    }

    pub fn degree(&self) -> usize {
        self.automorphisms.len()
    }

    /// Relative ramification index and residue degree.
    pub fn ef(&self) -> (u32, u32) {
        (self.e, self.f)
    }

    /// v_P of a nonzero element given in the generator's power basis.
    pub fn valuation(&self, y: &[BigInt]) -> Option<u64> {
        if poly_is_zero(y) {
            return None;
        }
        match self.rule {
            ValuationRule::Eisenstein { shift } => {
                let n = (self.modulus.len() - 1) as u64;
                let b = taylor_shift(y, shift);
                b.iter()
                    .enumerate()
                    .filter(|(_, c)| !c.is_zero())
                    .map(|(j, c)| n * vp_big(c, self.p) as u64 + j as u64)
                    .min()
            }
            ValuationRule::Unramified => y
                .iter()
                .filter(|c| !c.is_zero())
                .map(|c| vp_big(c, self.p) as u64)
                .min(),
        }
    }

    fn generator(&self) -> BigPoly {
        let deg = self.modulus.len() - 1;
        let mut x = vec![BigInt::zero(); deg];
        if deg > 1 {
            x[1] = BigInt::one();
        } else {
            x[0] = -self.modulus[0].clone();
        }
        x
    }

    /// i(σ) = v(σx − x) for each automorphism; None for the identity.
    pub fn lower_indices(&self) -> Vec<Option<u64>> {
        let x = self.generator();
        self.automorphisms
            .iter()
            .map(|s| {
                let d: BigPoly = s.iter().zip(&x).map(|(a, b)| a - b).collect();
                self.valuation(&d)
            })
            .collect()
    }

    /// Multiplies two elements of ℤ[x]/(modulus).
    pub fn mul(&self, a: &[BigInt], b: &[BigInt]) -> BigPoly {
        poly_mulmod(a, b, &self.modulus)
    }
}

fn check_cyclotomic_scope(p: u64, n: u32) -> Result<()> {
    if ![2, 3, 5].contains(&p) || n == 0 || p.checked_pow(n).is_none_or(|q| q > 243) {
        return Err(Error::Catalog(format!(
            "cyclotomic level p = {p}, n = {n} (need p ∈ {{2,3,5}}, 1 ≤ n, p^n ≤ 243)"
        )));
    }
    Ok(())
}

/// Turns the multiset of i(σ) (None for the identity) into g₀, g₁, ….
fn filtration_from_indices(indices: &[Option<u64>]) -> Result<Filtration> {
    let max = indices.iter().flatten().copied().max().unwrap_or(0);
    let mut orders = Vec::new();
    for i in 0..max.max(1) {
        let count = indices
            .iter()
            .filter(|v| v.is_none_or(|v| v > i))
            .count();
        orders.push(count as u64);
    }
    Filtration::new(orders)
        .map_err(|e| invalid(format!("brute-force orders break the subgroup chain: {e}")))
}

pub fn filtration_monogenic(ext: &MonogenicLocalExtension) -> Result<Filtration> {
    let idx = ext.lower_indices();
    if idx.iter().filter(|v| v.is_none()).count() != 1 {
        return Err(invalid("an automorphism other than the identity fixes the generator"));
    }
    let filt = filtration_from_indices(&idx)?;
    if filt.inertia() != ext.e as u64 {
        return Err(invalid(format!(
            "inertia order {} disagrees with declared e = {}",
            filt.inertia(),
            ext.e
        )));
    }
    Ok(filt)
}

/// A number field with an integral ℤ-basis, viewed at one rational prime.
#[derive(Clone, Debug)]
pub struct GlobalExtensionAtPrime {
    prime: u64,
    e: u32,
    f: u32,
    r: u32,
    /// mult[i][j] = coordinates of b_i·b_j
    mult: Vec<Vec<Vec<i64>>>,
    /// automorphisms[k][j] = coordinates of σ_k(b_j)
    automorphisms: Vec<Vec<Vec<i64>>>,
}

impl GlobalExtensionAtPrime {
    pub fn new(
        prime: u64,
        (e, f, r): (u32, u32, u32),
        mult: Vec<Vec<Vec<i64>>>,
        automorphisms: Vec<Vec<Vec<i64>>>,
    ) -> Result<Self> {
        let n = mult.len();
        if (e * f * r) as usize != n {
            return Err(invalid(format!("e·f·r = {} but degree {}", e * f * r, n)));
        }
        if mult.iter().any(|row| row.len() != n || row.iter().any(|c| c.len() != n)) {
            return Err(invalid("multiplication table has wrong shape"));
        }
        if automorphisms.len() != n {
            return Err(invalid("need exactly [L:ℚ] automorphisms"));
        }
        let ext = GlobalExtensionAtPrime {
            prime,
            e,
            f,
            r,
            mult,
            automorphisms,
        };
        let id: Vec<Vec<i64>> = (0..n)
            .map(|j| (0..n).map(|i| i64::from(i == j)).collect())
            .collect();
        if !ext.automorphisms.contains(&id) {
            return Err(invalid("automorphism list lacks the identity"));
        }
        for s in 0..n {
            for i in 0..n {
                for j in 0..n {
                    let lhs = ext.apply(s, &ext.mult[i][j]);
                    let rhs = ext.mul(&ext.automorphisms[s][i], &ext.automorphisms[s][j]);
                    if lhs != rhs {
                        return Err(invalid("automorphism does not respect multiplication"));
                    }
                }
            }
            for t in 0..n {
                let comp: Vec<Vec<i64>> = (0..n)
                    .map(|j| ext.apply(s, &ext.automorphisms[t][j]))
                    .collect();
                if !ext.automorphisms.contains(&comp) {
                    return Err(invalid("automorphisms are not closed under composition"));
                }
            }
        }
        Ok(ext)
    }

    /// ℚ(√d) with basis {1, ω}, ω = √d or (1 + √d)/2.
    pub fn quadratic(d: i64, prime: u64) -> Result<Self> {
        if !crate::arith::is_squarefree(d) || d == 1 {
            return Err(invalid(format!("d = {d} must be squarefree and ≠ 1")));
        }
        let disc = if d.rem_euclid(4) == 1 { d } else { 4 * d };
        let (efr, delta) = (
            match kronecker(disc, prime as i64) {
                0 => (2, 1, 1),
                1 => (1, 1, 2),
                _ => (1, 2, 1),
            },
            disc.rem_euclid(2),
        );
        // ω² = δω + (D − δ)/4
        let w2 = vec![(disc - delta) / 4, delta];
        let mult = vec![vec![vec![1, 0], vec![0, 1]], vec![vec![0, 1], w2]];
        let auts = vec![
            vec![vec![1, 0], vec![0, 1]],
            vec![vec![1, 0], vec![delta, -1]],
        ];
        Self::new(prime, efr, mult, auts)
    }

    /// Builds the table from a power-basis description: `minpoly` of a
    /// generator α, the ℤ-basis as rational polynomials in α, and the
    /// automorphisms as integer polynomials in α.
    pub fn from_power_basis(
        prime: u64,
        efr: (u32, u32, u32),
        minpoly: &[i64],
        basis: &[Vec<Rational>],
        automorphisms: &[Vec<i64>],
    ) -> Result<Self> {
        let n = minpoly.len() - 1;
        let m = big_poly(minpoly);
        let cols: Vec<Vec<Rational>> = basis
            .iter()
            .map(|b| {
                let mut b = b.clone();
                b.resize(n, Rational::zero());
                b
            })
            .collect();
        // B has the basis vectors as columns
        let bmat: Vec<Vec<Rational>> = (0..n).map(|i| cols.iter().map(|c| c[i]).collect()).collect();
        let binv = rational_inverse(&bmat).ok_or_else(|| invalid("basis is singular"))?;
        let den: i128 = cols
            .iter()
            .flatten()
            .fold(1, |acc, r| num_integer::lcm(acc, r.denom()));
        // denominators cleared: work with den·b
        let scaled: Vec<BigPoly> = cols
            .iter()
            .map(|c| c.iter().map(|r| BigInt::from((*r * Rational::from_int(den)).numer())).collect())
            .collect();
        let to_coords = |p: &BigPoly, scale: i128| -> Result<Vec<i64>> {
            (0..n)
                .map(|i| {
                    let mut s = Rational::zero();
                    for (k, c) in p.iter().enumerate() {
                        let c = i128::try_from(c).map_err(|_| invalid("coefficient overflow"))?;
                        s = s + binv[i][k] * Rational::new(c, scale);
                    }
                    if !s.is_integer() {
                        return Err(invalid("basis is not closed under the ring operations"));
                    }
                    Ok(s.numer() as i64)
                })
                .collect()
        };
        let mut mult = vec![vec![Vec::new(); n]; n];
        for i in 0..n {
            for j in 0..n {
                mult[i][j] = to_coords(&poly_mulmod(&scaled[i], &scaled[j], &m), den * den)?;
            }
        }
        let mut auts = Vec::new();
        for a in automorphisms {
            let img = big_poly(a);
            let mat = scaled
                .iter()
                .map(|b| to_coords(&poly_compose_mod(b, &img, &m), den))
                .collect::<Result<Vec<_>>>()?;
            auts.push(mat);
        }
        Self::new(prime, efr, mult, auts)
    }

    /// ℚ(√2, √3) at 2 with ℤ-basis {1, √2, √3, (√2 + √6)/2}. The
    /// automorphisms are listed as id, (√2 ↦ −√2), (√3 ↦ −√3), both.
    pub fn biquadratic_sqrt2_sqrt3() -> Self {
        let r = |v: &[i128]| v.iter().map(|&x| Rational::from_int(x)).collect::<Vec<_>>();
        // α = (√2 + √6)/2: √2 = α³ − 3α, √3 = α² − 2
        let basis = vec![r(&[1]), r(&[0, -3, 0, 1]), r(&[-2, 0, 1]), r(&[0, 1])];
        let auts = vec![vec![0, 1], vec![0, -1], vec![0, -4, 0, 1], vec![0, 4, 0, -1]];
        Self::from_power_basis(2, (4, 1, 1), &[1, 0, -4, 0, 1], &basis, &auts)
            .expect("valid biquadratic model")
    }

    pub fn degree(&self) -> usize {
        self.mult.len()
    }

    pub fn prime(&self) -> u64 {
        self.prime
    }

    pub fn efr(&self) -> (u32, u32, u32) {
        (self.e, self.f, self.r)
    }

    fn apply(&self, s: usize, x: &[i64]) -> Vec<i64> {
        let n = self.degree();
        let mut out = vec![0i64; n];
        for (j, &c) in x.iter().enumerate() {
            for i in 0..n {
                out[i] += c * self.automorphisms[s][j][i];
            }
        }
        out
    }

    fn mul(&self, x: &[i64], y: &[i64]) -> Vec<i64> {
        let n = self.degree();
        let mut out = vec![0i64; n];
        for i in 0..n {
            for j in 0..n {
                let c = x[i] * y[j];
                if c != 0 {
                    for k in 0..n {
                        out[k] += c * self.mult[i][j][k];
                    }
                }
            }
        }
        out
    }

    /// N_{L/ℚ}(x) as the determinant of multiplication by x.
    pub fn norm(&self, x: &[i64]) -> BigInt {
        let n = self.degree();
        let cols: Vec<Vec<i64>> = (0..n)
            .map(|j| {
                let mut b = vec![0; n];
                b[j] = 1;
                self.mul(x, &b)
            })
            .collect();
        let m: Vec<Vec<BigInt>> = (0..n)
            .map(|i| (0..n).map(|j| BigInt::from(cols[j][i])).collect())
            .collect();
        det_big(&m)
    }

    /// i(σ) = min_j v_P(σb_j − b_j) for each automorphism index in `group`.
    fn lower_indices(&self, group: &[usize]) -> Result<Vec<Option<u64>>> {
        if self.r != 1 || self.f != 1 {
            return Err(domain(
                "norm valuation needs a unique prime of residue degree 1",
            ));
        }
        let n = self.degree();
        let e = self.e as u64;
        group
            .iter()
            .map(|&s| {
                let mut best: Option<u64> = None;
                for j in 0..n {
                    let mut d = self.automorphisms[s][j].clone();
                    d[j] -= 1;
                    if d.iter().all(|&c| c == 0) {
                        continue;
                    }
                    let nm = self.norm(&d);
                    if nm.is_zero() {
                        return Err(invalid("nonzero element of zero norm"));
                    }
                    // v_P(x) = v_ℓ(N x) since f = 1 and P is alone above ℓ
                    let v = vp_big(&nm, self.prime) as u64;
                    best = Some(best.map_or(v, |b| b.min(v)));
                }
                debug_assert!(best.is_none_or(|_| e > 0));
                Ok(best)
            })
            .collect()
    }

    /// Filtration of L/K where K is the fixed field of the automorphisms
    /// with the given indices (which must form a subgroup).
    pub fn filtration_over(&self, subgroup: &[usize]) -> Result<Filtration> {
        let n = self.degree();
        for &s in subgroup {
            for &t in subgroup {
                let comp: Vec<Vec<i64>> = (0..n)
                    .map(|j| self.apply(s, &self.automorphisms[t][j]))
                    .collect();
                let k = self.automorphisms.iter().position(|a| *a == comp).unwrap();
                if !subgroup.contains(&k) {
                    return Err(invalid("automorphism indices do not form a subgroup"));
                }
            }
        }
        let idx = self.lower_indices(subgroup)?;
        if idx.iter().filter(|v| v.is_none()).count() != 1 {
            return Err(invalid("degenerate input: a nontrivial automorphism acts trivially"));
        }
        filtration_from_indices(&idx)
    }
}

pub fn filtration_zbasis(ext: &GlobalExtensionAtPrime) -> Result<Filtration> {
    let all: Vec<usize> = (0..ext.degree()).collect();
    let filt = ext.filtration_over(&all)?;
    if filt.inertia() != ext.e as u64 {
        return Err(invalid("inertia order disagrees with declared e"));
    }
    Ok(filt)
}

/// Catalog entry as read from a fixture file.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum CatalogExtension {
    /// ℚ(√d)/ℚ at a rational prime.
    Quadratic { d: i64, prime: u64 },
    /// ℚ_p(ζ_{p^n})/ℚ_p(ζ_{p^over}).
    Cyclotomic {
        p: u64,
        n: u32,
        #[serde(default)]
        over: u32,
    },
    /// Explicit monogenic model.
    LocalMonogenic {
        p: u64,
        modulus: Vec<i64>,
        automorphisms: Vec<Vec<i64>>,
        e: u32,
        f: u32,
        /// Eisenstein shift; absent for an unramified model.
        #[serde(default)]
        shift: Option<i64>,
    },
    /// ℚ(√2,√3) at 2, over ℚ or over the quadratic subfield ℚ(√fixing).
    Biquadratic {
        #[serde(default)]
        fixing: Option<i64>,
    },
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CatalogEntry {
    pub name: String,
    #[serde(flatten)]
    pub extension: CatalogExtension,
}

impl CatalogExtension {
    pub fn filtration(&self) -> Result<Filtration> {
        match self {
            CatalogExtension::Quadratic { d, prime } => {
                let g = GlobalExtensionAtPrime::quadratic(*d, *prime)?;
                if g.efr().0 == 1 {
                    // D₀ is the inertia group
                    return Ok(Filtration::trivial());
                }
                filtration_zbasis(&g)
            }
            CatalogExtension::Cyclotomic { p, n, over } => {
                filtration_monogenic(&MonogenicLocalExtension::cyclotomic(*p, *n, *over)?)
            }
            CatalogExtension::LocalMonogenic {
                p,
                modulus,
                automorphisms,
                e,
                f,
                shift,
            } => {
                let rule = match shift {
                    Some(c) => ValuationRule::Eisenstein { shift: *c },
                    None => ValuationRule::Unramified,
                };
                let ext = MonogenicLocalExtension::new(*p, modulus, automorphisms, *e, *f, rule)?;
                filtration_monogenic(&ext)
            }
            CatalogExtension::Biquadratic { fixing } => {
                let g = GlobalExtensionAtPrime::biquadratic_sqrt2_sqrt3();
                let sub: Vec<usize> = match fixing {
                    None => vec![0, 1, 2, 3],
                    Some(2) => vec![0, 2],
                    Some(3) => vec![0, 1],
                    Some(6) => vec![0, 3],
                    Some(d) => {
                        return Err(Error::Catalog(format!("ℚ(√{d}) is not a subfield of ℚ(√2,√3)")))
                    }
                };
                g.filtration_over(&sub)
            }
        }
    }

    /// Whether the extension is abelian (every catalog entry except an
    /// arbitrary user model is).
    pub fn is_abelian(&self) -> bool {
        !matches!(self, CatalogExtension::LocalMonogenic { .. })
    }
}

/// The bundled catalog of named extensions.
pub const DEFAULT_CATALOG: &str = include_str!("../fixtures/catalog.json");

pub fn default_catalog() -> Vec<CatalogEntry> {
    load_catalog(DEFAULT_CATALOG).expect("bundled catalog parses")
}

pub fn load_catalog(json: &str) -> Result<Vec<CatalogEntry>> {
    serde_json::from_str(json).map_err(|e| invalid(format!("catalog: {e}")))
}

/// Hilbert's formula: v_P(different) = Σ (g_i − 1).
pub fn different_valuation(filt: &Filtration) -> u64 {
    filt.orders().iter().map(|g| g - 1).sum()
}

/// D^y = 1, with D^∞ = 1 by convention.
pub fn is_depth_at_most(filt: &Filtration, y: DepthIndex) -> bool {
    match y {
        DepthIndex::Infinite => true,
        DepthIndex::Finite(y) => group_order_at_upper(filt, y).expect("y ≥ 0") == 1,
    }
}

/// ν ↦ ψ(ν) along the extension with filtration `filt`.
pub fn lift_depth(filt: &Filtration, nu: DepthIndex) -> DepthIndex {
    match nu {
        DepthIndex::Infinite => DepthIndex::Infinite,
        DepthIndex::Finite(y) => {
            DepthIndex::Finite(psi_from_filtration(filt).evaluate(y).expect("y ≥ 0"))
        }
    }
}

/// For a p-extension: depth at most y ≤ 1 forces the extension to be
/// unramified. Returns whether that implication holds on this instance.
pub fn wild_vanishing_check(filt: &Filtration, p: u64, y: Rational) -> Result<bool> {
    if filt.orders().iter().any(|&g| !is_power_of(g, p)) {
        return Err(domain(format!("{filt:?} is not the filtration of a {p}-extension")));
    }
    let y = DepthIndex::finite(y)?;
    let premise = is_depth_at_most(filt, y) && y <= DepthIndex::int(1);
    Ok(!premise || filt.is_unramified())
}

/// Filtration of the subfield of ℚ_p(ζ_{p^n}) fixed by H ⊂ (ℤ/p^n)^×, by
/// Herbrand's quotient rule i_{G/H}(σH) = (1/|H|) Σ_{τ ∈ σH} i_G(τ).
pub fn cyclotomic_subfield_filtration(p: u64, n: u32, in_h: &dyn Fn(u64) -> bool) -> Result<Filtration> {
    let ext = MonogenicLocalExtension::cyclotomic(p, n, 0)?;
    let m = p.pow(n);
    // automorphisms are listed by ascending a, σ_a(ζ) = ζ^a
    let labels: Vec<u64> = (1..m.max(2)).filter(|a| a % p != 0).collect();
    let idx = ext.lower_indices();
    if labels.len() != idx.len() {
        return Err(crate::error::internal("automorphism labels out of step"));
    }
    let index_of: std::collections::HashMap<u64, Option<u64>> =
        labels.iter().copied().zip(idx.iter().copied()).collect();
    let h: Vec<u64> = labels.iter().copied().filter(|&a| in_h(a)).collect();
    if !h.contains(&(1 % m)) || h.iter().any(|&x| h.iter().any(|&y| !in_h(x * y % m))) {
        return Err(invalid("H is not a subgroup"));
    }
    let mut seen = std::collections::HashSet::new();
    let mut quotient = Vec::new();
    for &s in &labels {
        if seen.contains(&s) {
            continue;
        }
        let coset: Vec<u64> = h.iter().map(|&x| s * x % m).collect();
        seen.extend(coset.iter().copied());
        if in_h(s) {
            quotient.push(None);
            continue;
        }
        let total: u64 = coset
            .iter()
            .map(|a| index_of[a].ok_or_else(|| crate::error::internal("identity outside H")))
            .sum::<Result<u64>>()?;
        if total % h.len() as u64 != 0 {
            return Err(crate::error::internal("quotient index is not integral"));
        }
        quotient.push(Some(total / h.len() as u64));
    }
    filtration_from_indices(&quotient)
}

fn is_power_of(mut g: u64, p: u64) -> bool {
    while g % p == 0 {
        g /= p;
    }
    g == 1
}

/// The two readings of the "naive lift" example for ℚ(√2) and ℚ(√3) at 2,
/// compared at depth 3.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct NaiveLiftReport {
    pub depth: Rational,
    /// ℚ(√2)/ℚ at 2.
    pub sqrt2_over_q: Filtration,
    pub sqrt2_over_q_depth_holds: bool,
    /// Literal reading: ℚ(√3)/ℚ at 2.
    pub sqrt3_over_q: Filtration,
    pub sqrt3_over_q_depth_holds: bool,
    /// Compositum reading: ℚ₂(√3)(√2)/ℚ₂(√3), monogenic model.
    pub lifted: Filtration,
    /// The same extension by the ℤ-basis oracle.
    pub lifted_zbasis: Filtration,
    pub lifted_depth_holds: bool,
    /// ℚ(√2,√3)/ℚ at 2.
    pub compositum_over_q: Filtration,
    pub compositum_over_q_depth_holds: bool,
    /// ψ_{ℚ(√3)/ℚ}(depth): the depth the base bound lifts to.
    pub lifted_index: DepthIndex,
    pub lifted_depth_holds_at_lifted_index: bool,
}

pub fn naive_lift_readings() -> Result<NaiveLiftReport> {
    let depth = Rational::from_int(3);
    let y = DepthIndex::Finite(depth);
    let sqrt2 = filtration_zbasis(&GlobalExtensionAtPrime::quadratic(2, 2)?)?;
    let sqrt3 = filtration_zbasis(&GlobalExtensionAtPrime::quadratic(3, 2)?)?;
    let lifted = filtration_monogenic(&MonogenicLocalExtension::sqrt2_over_q2_sqrt3())?;
    let bq = GlobalExtensionAtPrime::biquadratic_sqrt2_sqrt3();
    let lifted_zbasis = bq.filtration_over(&[0, 1])?;
    if lifted_zbasis != lifted {
        return Err(crate::error::internal("monogenic and ℤ-basis oracles disagree"));
    }
    let full = filtration_zbasis(&bq)?;
    let lifted_index = lift_depth(&sqrt3, y);
    Ok(NaiveLiftReport {
        depth,
        sqrt2_over_q_depth_holds: is_depth_at_most(&sqrt2, y),
        sqrt2_over_q: sqrt2,
        sqrt3_over_q_depth_holds: is_depth_at_most(&sqrt3, y),
        sqrt3_over_q: sqrt3,
        lifted_depth_holds: is_depth_at_most(&lifted, y),
        lifted_depth_holds_at_lifted_index: is_depth_at_most(&lifted, lifted_index),
        lifted,
        lifted_zbasis,
        compositum_over_q_depth_holds: is_depth_at_most(&full, y),
        compositum_over_q: full,
        lifted_index,
    })
}
