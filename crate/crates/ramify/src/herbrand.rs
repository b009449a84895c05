//! Ramification filtrations and the Herbrand functions φ and ψ as exact
//! piecewise-linear maps on [−1, ∞).
//!
//! Real lower indices follow the convention D_x = D_⌈x⌉, so a group order
//! at a non-integer index is read off at the next integer.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{domain, invalid};
use crate::{Rational, Result};

/// Orders g₀ ≥ g₁ ≥ … ≥ g_m of the lower-numbering ramification groups.
/// Beyond the stored list every group is trivial.
#[derive(Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "Vec<u64>", into = "Vec<u64>")]
pub struct Filtration {
    orders: Vec<u64>,
}

impl Filtration {
    /// Validates the divisibility chain and trims trailing 1s.
    pub fn new(orders: Vec<u64>) -> Result<Filtration> {
        if orders.is_empty() {
            return Err(invalid("empty filtration"));
        }
        if orders.contains(&0) {
            return Err(invalid("group orders must be positive"));
        }
        for w in orders.windows(2) {
            if w[1] > w[0] || w[0] % w[1] != 0 {
                return Err(invalid(format!(
                    "orders {:?} do not form a divisibility chain",
                    orders
                )));
            }
        }
        let mut orders = orders;
        while orders.len() > 1 && *orders.last().unwrap() == 1 {
            orders.pop();
        }
        Ok(Filtration { orders })
    }

    pub fn trivial() -> Filtration {
        Filtration { orders: vec![1] }
    }

    pub fn orders(&self) -> &[u64] {
        &self.orders
    }

    /// |D_i|; 1 past the end of the list. Negative indices are not tracked.
    pub fn g(&self, i: i128) -> u64 {
        assert!(i >= 0, "lower index below 0");
        self.orders.get(i as usize).copied().unwrap_or(1)
    }

    /// Inertia order g₀.
    pub fn inertia(&self) -> u64 {
        self.orders[0]
    }

    /// Index m of the last nontrivial group, or None if D₀ = 1.
    pub fn last_nontrivial(&self) -> Option<usize> {
        (self.orders[0] > 1).then(|| self.orders.len() - 1)
    }

    pub fn is_unramified(&self) -> bool {
        self.orders == [1]
    }

    /// Lower indices b with g_b > g_{b+1}.
    pub fn lower_jumps(&self) -> Vec<u64> {
        (0..self.orders.len())
            .filter(|&i| self.g(i as i128) > self.g(i as i128 + 1))
            .map(|i| i as u64)
            .collect()
    }
}

impl TryFrom<Vec<u64>> for Filtration {
    type Error = crate::Error;
    fn try_from(v: Vec<u64>) -> Result<Self> {
        Filtration::new(v)
    }
}

impl From<Filtration> for Vec<u64> {
    fn from(f: Filtration) -> Self {
        f.orders
    }
}

impl fmt::Debug for Filtration {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?}", self.orders)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum MapKind {
    /// Lower → upper; concave.
    Phi,
    /// Upper → lower; convex.
    Psi,
}

impl MapKind {
    fn flip(self) -> MapKind {
        match self {
            MapKind::Phi => MapKind::Psi,
            MapKind::Psi => MapKind::Phi,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Segment {
    pub start: Rational,
    pub slope: Rational,
}

/// Continuous, strictly increasing piecewise-linear map on [−1, ∞) with
/// f(0) = 0. The first two breakpoints are always −1 and 0 (slope 1 on
/// [−1, 0]); after 0, consecutive equal slopes are merged, so two maps are
/// equal exactly when their segment lists are.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct HerbrandMap {
    kind: MapKind,
    segments: Vec<Segment>,
}

fn seg(start: Rational, slope: Rational) -> Segment {
    Segment { start, slope }
}

impl HerbrandMap {
    pub fn identity(kind: MapKind) -> HerbrandMap {
        HerbrandMap {
            kind,
            segments: vec![
                seg(Rational::from_int(-1), Rational::one()),
                seg(Rational::zero(), Rational::one()),
            ],
        }
    }

    /// Builds a map from raw segments, merging equal slopes after 0 and
    /// checking every structural invariant.
    pub fn from_segments(kind: MapKind, segments: Vec<Segment>) -> Result<HerbrandMap> {
        if segments.len() < 2
            || segments[0].start != Rational::from_int(-1)
            || segments[0].slope != Rational::one()
            || segments[1].start != Rational::zero()
        {
            return Err(invalid("map must start with slope 1 on [-1, 0]"));
        }
        let mut merged: Vec<Segment> = segments[..2].to_vec();
        for s in &segments[2..] {
            let last = merged.last().unwrap();
            if s.start <= last.start {
                return Err(invalid("breakpoints must be strictly increasing"));
            }
            if s.slope != last.slope {
                merged.push(*s);
            }
        }
        if merged.iter().any(|s| !s.slope.is_positive()) {
            return Err(invalid("slopes must be positive"));
        }
        for w in merged[1..].windows(2) {
            let ok = match kind {
                MapKind::Phi => w[1].slope <= w[0].slope,
                MapKind::Psi => w[1].slope >= w[0].slope,
            };
            if !ok {
                return Err(invalid(format!("slopes violate {kind:?} convexity")));
            }
        }
        Ok(HerbrandMap {
            kind,
            segments: merged,
        })
    }

    pub fn kind(&self) -> MapKind {
        self.kind
    }

    pub fn segments(&self) -> &[Segment] {
        &self.segments
    }

    /// Values at each breakpoint.
    fn knots(&self) -> Vec<Rational> {
        let mut vals = Vec::with_capacity(self.segments.len());
        let mut v = Rational::from_int(-1);
        vals.push(v);
        for w in self.segments.windows(2) {
            v = v + w[0].slope * (w[1].start - w[0].start);
            vals.push(v);
        }
        vals
    }

    fn piece(&self, x: Rational) -> usize {
        // last segment with start ≤ x
        self.segments.partition_point(|s| s.start <= x) - 1
    }

    pub fn evaluate(&self, x: Rational) -> Result<Rational> {
        if x < Rational::from_int(-1) {
            return Err(domain(format!("{x} is below the domain start -1")));
        }
        let i = self.piece(x);
        let base = self.knots()[i];
        let s = self.segments[i];
        Ok(base + s.slope * (x - s.start))
    }

    /// Slope of the piece containing x (right derivative).
    pub fn slope_at(&self, x: Rational) -> Rational {
        self.segments[self.piece(x)].slope
    }

    pub fn invert(&self) -> HerbrandMap {
        let knots = self.knots();
        let segments = self
            .segments
            .iter()
            .zip(knots)
            .map(|(s, v)| seg(v, s.slope.recip()))
            .collect();
        HerbrandMap {
            kind: self.kind.flip(),
            segments,
        }
    }
}

impl Serialize for HerbrandMap {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        self.segments.serialize(s)
    }
}

/// Serialized form carries no tag; the kind is recovered from convexity
/// (a map with a single slope after 0 is read as φ).
impl<'de> Deserialize<'de> for HerbrandMap {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let segs = Vec::<Segment>::deserialize(d)?;
        HerbrandMap::from_segments(MapKind::Phi, segs.clone())
            .or_else(|_| HerbrandMap::from_segments(MapKind::Psi, segs))
            .map_err(serde::de::Error::custom)
    }
}

/// φ of a filtration: slope g_{i+1}/g₀ on [i, i+1], 1/g₀ past the last jump.
pub fn phi_from_filtration(filt: &Filtration) -> HerbrandMap {
    let g0 = filt.inertia() as i128;
    let mut segments = vec![seg(Rational::from_int(-1), Rational::one())];
    for i in 0..filt.orders().len() {
        let next = filt.g(i as i128 + 1) as i128;
        segments.push(seg(Rational::from_int(i as i128), Rational::new(next, g0)));
    }
    HerbrandMap::from_segments(MapKind::Phi, segments).expect("filtration yields a valid φ")
}

pub fn psi_from_filtration(filt: &Filtration) -> HerbrandMap {
    phi_from_filtration(filt).invert()
}

pub fn invert(map: &HerbrandMap) -> HerbrandMap {
    map.invert()
}

pub fn evaluate(map: &HerbrandMap, x: Rational) -> Result<Rational> {
    map.evaluate(x)
}

/// outer ∘ inner. Both maps must carry the same kind (φ∘φ or ψ∘ψ).
pub fn compose(outer: &HerbrandMap, inner: &HerbrandMap) -> Result<HerbrandMap> {
    if outer.kind != inner.kind {
        return Err(invalid("cannot compose maps of different kinds"));
    }
    let inv = inner.invert();
    let mut breaks: Vec<Rational> = inner.segments.iter().map(|s| s.start).collect();
    for s in &outer.segments {
        // outer breakpoints ≥ −1 all lie in the image of inner
        breaks.push(inv.evaluate(s.start)?);
    }
    breaks.sort();
    breaks.dedup();
    let mut segments = Vec::with_capacity(breaks.len());
    for x in breaks {
        let y = inner.evaluate(x)?;
        segments.push(seg(x, inner.slope_at(x) * outer.slope_at(y)));
    }
    HerbrandMap::from_segments(outer.kind, segments)
}

/// Upper-numbering jumps: φ at each lower jump.
pub fn upper_jumps(filt: &Filtration) -> Vec<Rational> {
    if filt.is_unramified() {
        return Vec::new();
    }
    let phi = phi_from_filtration(filt);
    filt.lower_jumps()
        .into_iter()
        .map(|b| phi.evaluate(Rational::from(b)).expect("in domain"))
        .collect()
}

/// |D^y| = g_⌈ψ(y)⌉ for y ≥ 0.
pub fn group_order_at_upper(filt: &Filtration, y: Rational) -> Result<u64> {
    if y.is_negative() {
        return Err(domain("upper index must be nonnegative"));
    }
    let x = psi_from_filtration(filt).evaluate(y)?;
    Ok(filt.g(x.ceil()))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn r(n: i128, d: i128) -> Rational {
        Rational::new(n, d)
    }

    fn filt(v: &[u64]) -> Filtration {
        Filtration::new(v.to_vec()).unwrap()
    }

    #[test]
    fn filtration_canonical_form() {
        assert_eq!(filt(&[2, 1, 1]).orders(), &[2]);
        assert_eq!(filt(&[1, 1]).orders(), &[1]);
        assert!(Filtration::new(vec![]).is_err());
        assert!(Filtration::new(vec![4, 3]).is_err());
        assert!(Filtration::new(vec![2, 4]).is_err());
        // non-prime-power chains are fine
        assert!(Filtration::new(vec![12, 6, 3]).is_ok());
    }

    #[test]
    fn phi_examples() {
        let id = phi_from_filtration(&filt(&[1]));
        assert_eq!(id, HerbrandMap::identity(MapKind::Phi));
        let phi = phi_from_filtration(&filt(&[2, 2, 2]));
        assert_eq!(phi.evaluate(r(1, 1)).unwrap(), r(1, 1));
        assert_eq!(phi.evaluate(r(2, 1)).unwrap(), r(2, 1));
        assert_eq!(phi.evaluate(r(3, 1)).unwrap(), r(5, 2));
        let tame = phi_from_filtration(&filt(&[5]));
        assert_eq!(tame.evaluate(r(1, 1)).unwrap(), r(1, 5));
        let phi = phi_from_filtration(&filt(&[4, 2, 2]));
        assert_eq!(phi.evaluate(r(2, 1)).unwrap(), r(1, 1));
    }

    #[test]
    fn psi_examples() {
        let psi = psi_from_filtration(&filt(&[2, 2, 2]));
        assert_eq!(psi.kind(), MapKind::Psi);
        assert_eq!(psi.evaluate(r(2, 1)).unwrap(), r(2, 1));
        assert_eq!(psi.evaluate(r(5, 2)).unwrap(), r(3, 1));
        assert_eq!(psi.invert(), phi_from_filtration(&filt(&[2, 2, 2])));
        let id = HerbrandMap::identity(MapKind::Phi);
        assert_eq!(id.invert(), HerbrandMap::identity(MapKind::Psi));
    }

    #[test]
    fn evaluate_domain() {
        let id = HerbrandMap::identity(MapKind::Phi);
        assert_eq!(id.evaluate(r(7, 2)).unwrap(), r(7, 2));
        assert_eq!(id.evaluate(r(-1, 1)).unwrap(), r(-1, 1));
        assert!(id.evaluate(r(-3, 2)).is_err());
    }

    #[test]
    fn jumps_and_upper_orders() {
        assert!(upper_jumps(&filt(&[1])).is_empty());
        assert_eq!(upper_jumps(&filt(&[2, 2, 2])), vec![r(2, 1)]);
        assert_eq!(upper_jumps(&filt(&[4, 2, 2])), vec![r(0, 1), r(1, 1)]);
        let f = filt(&[2, 2, 2]);
        assert_eq!(group_order_at_upper(&f, r(2, 1)).unwrap(), 2);
        assert_eq!(group_order_at_upper(&f, r(3, 1)).unwrap(), 1);
        assert_eq!(group_order_at_upper(&f, r(0, 1)).unwrap(), 2);
        assert!(group_order_at_upper(&f, r(-1, 2)).is_err());
        // non-integer lower index rounds up: ψ(9/4) = 5/2 → D_3
        assert_eq!(group_order_at_upper(&f, r(9, 4)).unwrap(), 1);
        assert_eq!(group_order_at_upper(&f, r(3, 2)).unwrap(), 2);
    }

    #[test]
    fn compose_identity_and_kinds() {
        let phi = phi_from_filtration(&filt(&[4, 2, 2]));
        let id = HerbrandMap::identity(MapKind::Phi);
        assert_eq!(compose(&id, &phi).unwrap(), phi);
        assert_eq!(compose(&phi, &id).unwrap(), phi);
        assert!(compose(&phi, &phi.invert()).is_err());
    }

    #[test]
    fn tame_then_wild_tower() {
        // φ for ℚ₃(ζ₉)/ℚ₃ is φ(ζ₃/ℚ₃) ∘ φ(ζ₉/ζ₃)
        let whole = phi_from_filtration(&filt(&[6, 3, 3]));
        let bottom = phi_from_filtration(&filt(&[2]));
        let top = phi_from_filtration(&filt(&[3, 3, 3]));
        assert_eq!(compose(&bottom, &top).unwrap(), whole);
        let psi = compose(&top.invert(), &bottom.invert()).unwrap();
        assert_eq!(psi, whole.invert());
    }

    #[test]
    fn invalid_maps_rejected() {
        let bad = vec![
            seg(r(-1, 1), r(1, 1)),
            seg(r(0, 1), r(1, 2)),
            seg(r(1, 1), r(1, 1)),
        ];
        assert!(HerbrandMap::from_segments(MapKind::Phi, bad.clone()).is_err());
        assert!(HerbrandMap::from_segments(MapKind::Psi, bad).is_ok());
        let no_zero = vec![seg(r(-1, 1), r(1, 1)), seg(r(1, 1), r(1, 2))];
        assert!(HerbrandMap::from_segments(MapKind::Phi, no_zero).is_err());
    }

    #[test]
    fn json_shape() {
        let phi = phi_from_filtration(&filt(&[2, 2, 2]));
        let j = serde_json::to_string(&phi).unwrap();
        assert_eq!(
            j,
            r#"[{"start":"-1/1","slope":"1/1"},{"start":"0/1","slope":"1/1"},{"start":"2/1","slope":"1/2"}]"#
        );
        let back: HerbrandMap = serde_json::from_str(&j).unwrap();
        assert_eq!(back, phi);
        let f: Filtration = serde_json::from_str("[4,2,2]").unwrap();
        assert_eq!(f.orders(), &[4, 2, 2]);
        assert!(serde_json::from_str::<Filtration>("[3,2]").is_err());
    }
}
