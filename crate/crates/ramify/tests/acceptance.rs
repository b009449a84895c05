//! Acceptance run: one PASS/FAIL line per criterion.
//!
//! Every check compares library output against a value computed here by an
//! independent route (closed formulas, direct integration, naive counting).
//! The run exits 0 even when a criterion fails so that the workspace test
//! suite stays usable; set `RAMIFY_ACCEPTANCE_STRICT=1` to turn failures into
//! a nonzero exit status.

use std::collections::BTreeMap;
use std::time::{Duration, Instant};

use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};

use ramify::arith::is_prime;
use ramify::bounds::{
    compare_generator_ranks, euler_characteristic_full, generator_rank_rayclass, rational_layer_check,
    root_discriminant, shafarevich_bound, tower_rd_growth, FactoredPower,
};
use ramify::classfield::{criterion_scan, ray_class_group_for, Base, IndexedSet};
use ramify::herbrand::{compose, phi_from_filtration, psi_from_filtration, Filtration, HerbrandMap};
use ramify::localfields::{catalog_fields, prank_u1_mod_unu, LocalFieldSpec, LocalTag};
use ramify::ramgroups::{
    filtration_monogenic, filtration_zbasis, naive_lift_readings, DepthIndex, GlobalExtensionAtPrime,
    MonogenicLocalExtension,
};
use ramify::Rational;

type Outcome = std::result::Result<String, String>;
type Criterion = (&'static str, fn() -> Outcome);

fn r(n: i128, d: i128) -> Rational {
    Rational::new(n, d)
}

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> std::result::Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn lib<T>(x: ramify::Result<T>) -> std::result::Result<T, String> {
    x.map_err(|e| e.to_string())
}

/// φ(x) = ∫₀ˣ dt / [D₀ : D_t], integrated piece by piece.
fn phi_oracle(orders: &[u64], x: Rational) -> Rational {
    if x <= Rational::zero() {
        return x;
    }
    let g0 = orders[0] as i128;
    let g = |i: i128| orders.get(i as usize).copied().unwrap_or(1) as i128;
    let mut acc = Rational::zero();
    let mut i = 0i128;
    while Rational::from_int(i) < x {
        let hi = if Rational::from_int(i + 1) < x { Rational::from_int(i + 1) } else { x };
        acc = acc + (hi - Rational::from_int(i)) * r(g(i + 1), g0);
        i += 1;
    }
    acc
}

fn random_filtration(rng: &mut StdRng) -> Filtration {
    let len = rng.gen_range(1..=12);
    let mut g = rng.gen_range(1..=1024u64);
    let mut orders = Vec::with_capacity(len);
    for _ in 0..len {
        orders.push(g);
        let divs: Vec<u64> = (1..=g).filter(|d| g % d == 0).collect();
        // bias towards keeping the order so that long plateaus occur
        if rng.gen_bool(0.4) {
            g = divs[rng.gen_range(0..divs.len())];
        }
    }
    Filtration::new(orders).expect("divisibility chain by construction")
}

fn slopes(m: &HerbrandMap) -> Vec<Rational> {
    m.segments().iter().map(|s| s.slope).collect()
}

fn herbrand_properties() -> Outcome {
    let started = Instant::now();
    let mut rng = StdRng::seed_from_u64(0x5eed);
    let n = 10_000;
    for k in 0..n {
        let f = random_filtration(&mut rng);
        let phi = phi_from_filtration(&f);
        let psi = psi_from_filtration(&f);
        let s = slopes(&phi);
        ensure(s.windows(2).all(|w| w[0] >= w[1]), || format!("φ not concave for {f:?}"))?;
        let s = slopes(&psi);
        ensure(s.windows(2).all(|w| w[0] <= w[1]), || format!("ψ not convex for {f:?}"))?;
        let top = f.orders().len() as i128 + 3;
        let mut points: Vec<Rational> = (-1..=top).map(Rational::from_int).collect();
        for _ in 0..4 {
            points.push(r(rng.gen_range(-6..=6 * top), 6));
        }
        for x in points {
            let y = lib(phi.evaluate(x))?;
            ensure(y == phi_oracle(f.orders(), x), || format!("φ({x}) mismatch for {f:?}"))?;
            ensure(y <= x, || format!("φ({x}) > {x} for {f:?}"))?;
            ensure(lib(psi.evaluate(y))? == x, || format!("ψ(φ({x})) ≠ {x} for {f:?}"))?;
            ensure(lib(phi.evaluate(lib(psi.evaluate(x))?))? == x, || format!("φ(ψ({x})) ≠ {x}"))?;
            if x.is_integer() {
                ensure(lib(psi.evaluate(x))?.is_integer(), || format!("ψ({x}) ∉ ℤ for {f:?}"))?;
            }
        }
        if k % 97 == 0 {
            ensure(phi.invert() == psi && psi.invert() == phi, || format!("inverse mismatch for {f:?}"))?;
        }
    }
    let t = started.elapsed();
    ensure(t < Duration::from_secs(10), || format!("took {t:?}"))?;
    Ok(format!("{n} random filtrations"))
}

fn transitivity() -> Outcome {
    for (p, top, mid) in [(3u64, 2u32, 1u32), (2, 3, 2)] {
        let whole = lib(filtration_monogenic(&lib(MonogenicLocalExtension::cyclotomic(p, top, 0))?))?;
        let upper = lib(filtration_monogenic(&lib(MonogenicLocalExtension::cyclotomic(p, top, mid))?))?;
        let lower = lib(filtration_monogenic(&lib(MonogenicLocalExtension::cyclotomic(p, mid, 0))?))?;
        let phi = lib(compose(&phi_from_filtration(&lower), &phi_from_filtration(&upper)))?;
        ensure(phi == phi_from_filtration(&whole), || format!("φ tower p = {p}: {phi:?}"))?;
        let psi = lib(compose(&psi_from_filtration(&upper), &psi_from_filtration(&lower)))?;
        ensure(psi == psi_from_filtration(&whole), || format!("ψ tower p = {p}: {psi:?}"))?;
    }
    Ok("Q3(zeta9)/Q3(zeta3)/Q3 and Q2(zeta8)/Q2(zeta4)/Q2".into())
}

/// f · Σ_{i≥0} (g_i − 1).
fn hilbert(f: &Filtration, residue_degree: u64) -> u64 {
    residue_degree * f.orders().iter().map(|g| g - 1).sum::<u64>()
}

fn hilbert_formula() -> Outcome {
    let mut seen = Vec::new();
    for d in [-1i64, 2, -2, 3, -7] {
        let ext = lib(GlobalExtensionAtPrime::quadratic(d, 2))?;
        let (e, f, _) = ext.efr();
        // an unramified prime has nothing to enumerate
        let filt = if e == 1 { Filtration::trivial() } else { lib(filtration_zbasis(&ext))? };
        // v₂ of the field discriminant: 0, 2 or 3 by the residue of d
        let expected = match d.rem_euclid(4) {
            1 => 0,
            3 => 2,
            _ => 3,
        };
        let got = hilbert(&filt, f as u64);
        ensure(got == expected, || format!("Q(sqrt{d}): {got} vs {expected}"))?;
        seen.push(format!("{d}:{got}"));
    }
    for (p, n) in [(2u64, 2u32), (2, 3), (3, 1), (3, 2)] {
        let filt = lib(filtration_monogenic(&lib(MonogenicLocalExtension::cyclotomic(p, n, 0))?))?;
        let expected = p.pow(n - 1) * (p * n as u64 - n as u64 - 1);
        let got = hilbert(&filt, 1);
        ensure(got == expected, || format!("zeta_{p}^{n}: {got} vs {expected}"))?;
        seen.push(format!("{p}^{n}:{got}"));
    }
    Ok(seen.join(" "))
}

fn naive_lift() -> Outcome {
    let rep = lib(naive_lift_readings())?;
    ensure(rep.sqrt2_over_q_depth_holds, || "depth 3 fails for Q(sqrt2)/Q".into())?;
    ensure(!rep.lifted_depth_holds, || "depth 3 holds for the lift".into())?;
    ensure(rep.lifted == rep.lifted_zbasis, || "oracles disagree".into())?;
    Ok(format!(
        "Q(sqrt2): {:?} holds; lift: {:?} fails; Q(sqrt3)/Q literal reading holds = {}",
        rep.sqrt2_over_q.orders(),
        rep.lifted.orders(),
        rep.sqrt3_over_q_depth_holds
    ))
}

fn layer_bounds() -> Outcome {
    let c = lib(rational_layer_check(3, r(2, 1), 12))?;
    ensure(c.bound.decimal == "27", || format!("bound {}", c.bound.decimal))?;
    // rd = 81^{1/3}
    let rd = FactoredPower::integer_power(81, r(1, 3));
    ensure(c.rd.value() == rd, || format!("rd {:?}", c.rd))?;
    ensure(c.rd.decimal.starts_with("4.3267"), || c.rd.decimal.clone())?;
    ensure(rd.cmp_value(&FactoredPower::integer_power(27, r(1, 1))).is_le(), || "81^{1/3} > 27".into())?;
    let mut parts = vec![format!("(3,2): {} <= {}", c.rd.decimal, c.bound.decimal)];
    for (p, nu) in [(2u64, 3i128), (3, 3), (5, 2)] {
        let c = lib(rational_layer_check(p, r(nu, 1), 12))?;
        ensure(c.within_bound, || format!("({p},{nu}) exceeds bound"))?;
        ensure(c.rd.value().cmp_value(&c.bound.value()).is_le(), || format!("({p},{nu})"))?;
        parts.push(format!("({p},{nu}): {} <= {}", c.rd.decimal, c.bound.decimal));
    }
    Ok(parts.join("; "))
}

/// Lower ramification orders of ℚ_p(ζ_{p^n})/ℚ_p: φ(p^n) at 0, then
/// p^{n−k} on [p^{k−1}, p^k − 1].
fn cyclotomic_orders(p: u64, n: u32) -> Vec<u64> {
    let mut v = vec![(p - 1) * p.pow(n - 1)];
    for k in 1..n {
        for _ in p.pow(k - 1)..p.pow(k) {
            v.push(p.pow(n - k));
        }
    }
    v
}

fn tower_growth() -> Outcome {
    let mut out = Vec::new();
    for (p, levels) in [(3u64, 5u32), (2, 6)] {
        let rows = lib(tower_rd_growth(p, levels, 12))?;
        ensure(rows.len() == levels as usize, || format!("{} rows", rows.len()))?;
        for row in &rows {
            let n = row.n;
            let expected = Filtration::new(cyclotomic_orders(p, n)).unwrap();
            ensure(row.filtration == expected, || format!("p = {p}, n = {n}: {:?}", row.filtration))?;
            let degree = (p - 1) * p.pow(n - 1);
            let v = hilbert(&expected, 1) as i128;
            let tau = r(v, degree as i128);
            ensure(row.tau == tau, || format!("p = {p}, n = {n}: τ {} vs {tau}", row.tau))?;
            let rd = lib(root_discriminant(&BTreeMap::from([(p, v as u64)]), degree as u32))?;
            ensure(row.rd.value() == rd, || format!("p = {p}, n = {n}: rd"))?;
        }
        ensure(rows.windows(2).all(|w| w[0].tau < w[1].tau), || format!("p = {p}: τ not increasing"))?;
        let taus: Vec<String> = rows.iter().map(|r| r.tau.to_string()).collect();
        out.push(format!("p = {p}: {}", taus.join(", ")));
    }
    let three: Vec<Rational> = lib(tower_rd_growth(3, 5, 12))?.iter().map(|r| r.tau).collect();
    ensure(three == vec![r(1, 2), r(3, 2), r(5, 2), r(7, 2), r(9, 2)], || format!("{three:?}"))?;
    Ok(out.join("; "))
}

fn rayclass_at_seven() -> Outcome {
    let started = Instant::now();
    let k = lib(Base::quadratic(-7))?;
    let mut got = Vec::new();
    for n in 2..=4 {
        let set = lib(IndexedSet::parse(&k, &format!("2:{n}")))?;
        let res = lib(ray_class_group_for(&k, &set, 2))?;
        let mut inv = res.p_part.invariants().to_vec();
        inv.sort_unstable_by(|a, b| b.cmp(a));
        got.push(inv);
    }
    let want = vec![vec![2], vec![2, 2, 2], vec![4, 4, 2]];
    ensure(got == want, || format!("{got:?}"))?;
    let t = started.elapsed();
    ensure(t < Duration::from_secs(60), || format!("took {t:?}"))?;
    Ok(format!("{got:?}"))
}

fn generator_counts() -> Outcome {
    let mut fails = Vec::new();
    let k = lib(Base::quadratic(-7))?;
    let mut seven = Vec::new();
    for n in 4..=8 {
        let d = lib(generator_rank_rayclass(&k, &lib(IndexedSet::parse(&k, &format!("2:{n}")))?, 2))?;
        if d != 3 {
            fails.push(format!("Q(sqrt-7) k = {n}: {d}"));
        }
        seven.push(d);
    }
    let e = Base::eisenstein();
    let mut three = Vec::new();
    for n in 3..=6 {
        let d = lib(generator_rank_rayclass(&e, &lib(IndexedSet::parse(&e, &format!("3:{n}")))?, 3))?;
        if d != 2 {
            fails.push(format!("Q(zeta3) k = {n}: {d}"));
        }
        three.push(d);
    }
    let detail = format!("Q(sqrt-7) k=4..8: {seven:?}; Q(zeta3) k=3..6: {three:?}");
    if fails.is_empty() {
        Ok(detail)
    } else {
        Err(format!(
            "{detail}; expected constant values, off at {} \
             ((O/P^3)^x modulo the sixth roots of unity has order 3, so rank 1 there)",
            fails.join(", ")
        ))
    }
}

fn splitting_scan() -> Outcome {
    let started = Instant::now();
    let rows = lib(criterion_scan(7, 5000))?;
    let primes: Vec<u64> = (7..5000).filter(|&l| l % 8 == 7 && is_prime(l)).collect();
    let ells: Vec<u64> = rows.iter().map(|r| r.ell).collect();
    ensure(ells == primes, || format!("scanned {} primes, expected {}", ells.len(), primes.len()))?;
    for row in &rows {
        // a² ≡ 1 (mod 16) straight from the reported coordinate
        let a: i128 = row.a.parse().map_err(|_| format!("ℓ = {}: a = {}", row.ell, row.a))?;
        let gen = (a * a - 1).rem_euclid(16) == 0;
        ensure(gen == row.generator_test, || format!("ℓ = {}: generator test", row.ell))?;
        ensure(gen == (row.ell % 16 == 15), || format!("ℓ = {} disagrees", row.ell))?;
    }
    let t = started.elapsed();
    ensure(t < Duration::from_secs(300), || format!("took {t:?}"))?;
    Ok(format!("{} primes, all agree", rows.len()))
}

fn rank_sides() -> Outcome {
    let cases: &[(&str, u64, &str)] = &[
        ("Q", 3, "3:2"),
        ("Q", 3, "3:3"),
        ("Q", 3, "3:4"),
        ("Q", 3, "3:inf"),
        ("Q", 2, "2:2"),
        ("Q", 2, "2:3"),
        ("Q", 2, "2:4"),
        ("Q", 2, "2:inf"),
        ("Q", 3, "3:2,7:1"),
        ("-7", 2, "2:2"),
        ("-7", 2, "2:3"),
        ("-7", 2, "2:4"),
        ("-7", 2, "2:inf"),
        ("-23", 2, "2:2"),
        ("-23", 2, "2:3"),
        ("-23", 3, "3:2"),
        ("-23", 3, "3:inf"),
        ("zeta3", 3, "3:2"),
        ("zeta3", 3, "3:3"),
        ("zeta3", 3, "3:4"),
        ("zeta3", 3, "3:inf"),
    ];
    let mut bad = Vec::new();
    for &(field, p, spec) in cases {
        let base = lib(Base::parse(field))?;
        let set = lib(IndexedSet::parse(&base, spec))?;
        let c = lib(compare_generator_ranks(&base, &set, p))?;
        if !c.agree || c.rayclass as i64 != c.idelic {
            bad.push(format!("{field} p={p} {spec}: {} vs {}", c.rayclass, c.idelic));
        }
    }
    ensure(bad.is_empty(), || bad.join("; "))?;
    Ok(format!("{} instances agree", cases.len()))
}

fn evaluator_spots() -> Outcome {
    // ℚ, S = {p} for odd p: no p-units, no ζ_p, one wild prime of local
    // degree 1, matching G_S ≅ ℤ_p with one generator and no relation
    let v = lib(shafarevich_bound(0, 0, 0, &[1]))?;
    ensure(v == -1, || format!("shafarevich {v}"))?;
    let e = euler_characteristic_full(1);
    ensure(e == -2, || format!("euler {e}"))?;
    Ok("shafarevich = -1, euler(1) = -2".into())
}

fn local_unit_ranks() -> Outcome {
    let q2 = LocalFieldSpec::qp(2);
    let got: Vec<usize> = (1..=4)
        .map(|n| prank_u1_mod_unu(&q2, DepthIndex::int(n)))
        .collect::<ramify::Result<_>>()
        .map_err(|e| e.to_string())?;
    // (ℤ/2^n)^× has 2-rank 0, 1, 2, 2 for n = 1..4
    let naive: Vec<usize> = (1..=4u32)
        .map(|n| {
            let m = 1u64 << n;
            (1..m).step_by(2).filter(|&x| x * x % m == 1).count().trailing_zeros() as usize
        })
        .collect();
    ensure(got == vec![0, 1, 2, 2] && got == naive, || format!("{got:?} / {naive:?}"))?;
    let fields = catalog_fields();
    for spec in &fields {
        let ring = lib(spec.ring())?;
        let b = ring.power_test_bound(spec.p);
        let stable = lib(prank_u1_mod_unu(spec, DepthIndex::int(b as u64 + 1)))?;
        let (e, f) = lib(spec.ef())?;
        let has_root = match spec.tag {
            LocalTag::Qp | LocalTag::UnramifiedQuadratic => spec.p == 2,
            _ => true,
        };
        let expected = (e * f) as usize + has_root as usize;
        ensure(stable == expected, || format!("{spec:?}: {stable} vs {expected}"))?;
        ensure(lib(prank_u1_mod_unu(spec, DepthIndex::Infinite))? == expected, || format!("{spec:?}: ∞"))?;
    }
    Ok(format!("Q2: {got:?}; {} catalog fields stabilise", fields.len()))
}

fn main() {
    let criteria: Vec<Criterion> = vec![
        ("herbrand properties", herbrand_properties),
        ("tower transitivity", transitivity),
        ("hilbert formula vs discriminants", hilbert_formula),
        ("naive lift depth", naive_lift),
        ("root discriminant bound on layers", layer_bounds),
        ("cyclotomic tower growth", tower_growth),
        ("ray class 2-parts at 7", rayclass_at_seven),
        ("generator counts", generator_counts),
        ("quadratic splitting scan", splitting_scan),
        ("generator rank cross-check", rank_sides),
        ("evaluator spot values", evaluator_spots),
        ("local unit ranks", local_unit_ranks),
    ];
    let mut failed = 0;
    for (i, (name, run)) in criteria.into_iter().enumerate() {
        let started = Instant::now();
        let outcome = std::panic::catch_unwind(run).unwrap_or_else(|_| Err("panicked".into()));
        let t = started.elapsed().as_secs_f64();
        match outcome {
            Ok(detail) => println!("criterion {:>2} PASS  {name} [{t:.2}s] {detail}", i + 1),
            Err(detail) => {
                failed += 1;
                println!("criterion {:>2} FAIL  {name} [{t:.2}s] {detail}", i + 1);
            }
        }
    }
    println!("{} of 12 criteria pass", 12 - failed);
    if failed > 0 && std::env::var("RAMIFY_ACCEPTANCE_STRICT").is_ok_and(|v| v == "1") {
        std::process::exit(1);
    }
}
