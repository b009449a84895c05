//! Command-line front end for `ramify`. `run` takes the argument vector and
//! returns the exit code together with what belongs on stdout and stderr, so
//! the binary is a thin wrapper and tests can drive commands in-process.
//!
//! Exit codes: 0 on success, 1 for bad input (including usage errors),
//! 2 when an internal consistency check fails.

pub mod render;
pub mod schema;

use std::collections::BTreeMap;
use std::ffi::OsString;
use std::panic::AssertUnwindSafe;

use clap::{Args, Parser, Subcommand};
use serde::Serialize;
use serde_json::{json, Value};

use ramify::bounds::{
    compare_generator_ranks, euler_characteristic_full, kernel_rank_bound, rd_bound_conductor, rd_bound_depth,
    relation_rank_bound, shafarevich_bound, tower_rd_growth, BaseFieldSummary, BoundReport, DEFAULT_PRECISION,
};
use ramify::classfield::{class_group, criterion_scan, ray_class_group_for, Base, IndexedSet};
use ramify::herbrand::{phi_from_filtration, psi_from_filtration, upper_jumps, Filtration};
use ramify::localfields::{delta_p, delta_p_nu, prank_u1_mod_unu, LocalFieldSpec};
use ramify::ramgroups::{
    default_catalog, different_valuation, is_depth_at_most, load_catalog, naive_lift_readings, CatalogEntry,
    CatalogExtension, DepthIndex,
};
use ramify::{Error, Rational};

use render::{render, Format};
use schema::*;

#[derive(Parser, Debug)]
#[command(name = "ramify", version, about = "Ramification filtrations, Herbrand functions and class-field ranks")]
pub struct Cli {
    /// Output format.
    #[arg(long, global = true, value_enum, default_value = "json")]
    pub format: Format,
    /// Significant digits for decimal fields.
    #[arg(long, global = true, default_value_t = DEFAULT_PRECISION, value_parser = parse_precision)]
    pub precision: usize,
    #[command(subcommand)]
    pub command: Command,
}

fn parse_precision(s: &str) -> Result<usize, String> {
    match s.parse::<usize>() {
        Ok(n) if (1..=200).contains(&n) => Ok(n),
        _ => Err(format!("precision must be an integer in 1..=200, got {s:?}")),
    }
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// φ and ψ of a filtration, its jumps, and optional evaluations.
    Herbrand {
        /// Lower ramification orders g₀,g₁,…
        #[arg(long, value_delimiter = ',', required = true)]
        orders: Vec<u64>,
        /// Points x at which to evaluate φ(x) and ψ(x).
        #[arg(long = "eval", value_delimiter = ',')]
        eval: Vec<Rational>,
    },
    /// Brute-force filtration of a catalog extension.
    Filtration(FiltrationArgs),
    /// p-rank of U¹/U^ν for a catalog local field.
    Localrank {
        /// qp:P, unram:P, ram2:D (ℚ₂(√D)) or zeta:P:N (ℚ_P(ζ_{P^N})).
        #[arg(long)]
        field: String,
        /// Depth indices; defaults to 1 up to the stabilization point, then inf.
        #[arg(long, value_delimiter = ',')]
        nu: Vec<DepthIndex>,
    },
    /// Class group of an imaginary quadratic discriminant.
    Classgroup {
        #[arg(long, allow_hyphen_values = true)]
        disc: i64,
    },
    /// Ray class group of a base field.
    Rayclass {
        /// Q, zeta3, or a negative fundamental discriminant.
        #[arg(long, allow_hyphen_values = true)]
        base: String,
        /// Modulus as q[@r]:exponent entries, e.g. 2:3,3:1.
        #[arg(long)]
        modulus: String,
        #[arg(long)]
        p: u64,
    },
    /// Generator rank from ray class groups and from local invariants.
    Dsnu {
        #[arg(long, allow_hyphen_values = true)]
        base: String,
        /// Indexed primes q[@r][:ν], e.g. 2:4 or 3:inf,7:1.
        #[arg(long)]
        set: String,
        #[arg(long)]
        p: u64,
    },
    /// Root discriminant bounds for a depth-bounded set of primes.
    Rdbound(RdBoundArgs),
    /// τ and root discriminants along ℚ(ζ_{p^n}).
    Towergrowth {
        #[arg(long)]
        p: u64,
        #[arg(long)]
        levels: u32,
    },
    /// The generator test against ℓ mod 16 for primes ℓ ≡ 7 (mod 8).
    CriterionScan {
        #[arg(long, default_value_t = 7)]
        min: u64,
        #[arg(long)]
        max: u64,
    },
    /// Closed-form rank evaluators on explicit inputs.
    Bounds {
        #[command(subcommand)]
        kind: BoundsKind,
    },
}

#[derive(Args, Debug)]
pub struct FiltrationArgs {
    /// Catalog entry name (see --list).
    #[arg(long, conflicts_with_all = ["quadratic", "cyclotomic", "naive_lift"])]
    pub name: Option<String>,
    /// Catalog JSON file to use instead of the bundled one.
    #[arg(long)]
    pub catalog: Option<std::path::PathBuf>,
    /// ℚ(√d)/ℚ, with --prime.
    #[arg(long, allow_hyphen_values = true, requires = "prime", conflicts_with = "cyclotomic")]
    pub quadratic: Option<i64>,
    #[arg(long)]
    pub prime: Option<u64>,
    /// ℚ_p(ζ_{p^level})/ℚ_p(ζ_{p^over}) as p,level[,over].
    #[arg(long, value_delimiter = ',', num_args = 1)]
    pub cyclotomic: Option<Vec<u32>>,
    /// Depth indices at which to test depth-at-most.
    #[arg(long, value_delimiter = ',')]
    pub depth: Vec<DepthIndex>,
    /// List the catalog.
    #[arg(long)]
    pub list: bool,
    /// Both readings of the lifted ℚ(√2) example at depth 3.
    #[arg(long)]
    pub naive_lift: bool,
}

#[derive(Args, Debug)]
pub struct RdBoundArgs {
    #[arg(long, allow_hyphen_values = true)]
    pub base: String,
    /// Indexed primes q[@r][:ν]; alternatively --prime with --nu.
    #[arg(long, conflicts_with_all = ["prime", "nu"])]
    pub set: Option<String>,
    #[arg(long, requires = "nu")]
    pub prime: Option<u64>,
    #[arg(long)]
    pub nu: Option<DepthIndex>,
    /// The p of the p-extension; defaults to --prime.
    #[arg(long)]
    pub p: Option<u64>,
}

#[derive(Subcommand, Debug)]
pub enum BoundsKind {
    /// Generator count of G_S from the global unit and local data.
    Shafarevich {
        #[arg(long, default_value_t = 0)]
        unit_prank: u32,
        /// 1 iff ζ_p ∈ K.
        #[arg(long, default_value_t = 0)]
        delta: u32,
        #[arg(long, default_value_t = 0)]
        theta: u32,
        /// Local degrees at the primes above p in S.
        #[arg(long, value_delimiter = ',')]
        wild_degrees: Vec<u32>,
    },
    /// Upper bound for the relation rank.
    Relation {
        #[arg(long)]
        b_rank: u32,
        #[arg(long, default_value_t = 0)]
        theta: u32,
        #[arg(long, default_value_t = 0)]
        delta: u32,
        #[arg(long, value_delimiter = ',')]
        local_deltas: Vec<u32>,
    },
    /// Upper bound for the kernel of the localization map.
    Kernel {
        #[arg(long, default_value_t = 0)]
        unit_prank: u32,
        #[arg(long)]
        generator_rank: u32,
        /// Wild primes as degree:δ(𝔭,ν) pairs.
        #[arg(long, value_delimiter = ',')]
        wild: Vec<String>,
        #[arg(long, value_delimiter = ',')]
        tame_deltas: Vec<u32>,
        #[arg(long, value_delimiter = ',')]
        wild_unit_ranks: Vec<u32>,
    },
    /// r − d when S holds every prime above p: −(r₂ + 1).
    Euler {
        #[arg(long)]
        r2: u32,
    },
}

/// Everything the process should emit.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Outcome {
    pub code: i32,
    pub stdout: String,
    pub stderr: String,
}

enum Failure {
    Input(String, String),
    Internal(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        if e.is_internal() {
            Failure::Internal(e.to_string())
        } else {
            Failure::Input(e.code().to_string(), e.to_string())
        }
    }
}

fn input(code: &str, msg: impl Into<String>) -> Failure {
    Failure::Input(code.to_string(), msg.into())
}

fn error_outcome(code: i32, err_code: &str, message: String) -> Outcome {
    let body = ErrorOutput {
        error: ErrorBody {
            code: err_code.to_string(),
            message,
        },
    };
    Outcome {
        code,
        stdout: String::new(),
        stderr: serde_json::to_string(&body).expect("error serializes") + "\n",
    }
}

pub fn run<I, T>(args: I) -> Outcome
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            use clap::error::ErrorKind;
            return match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => Outcome {
                    code: 0,
                    stdout: e.to_string(),
                    stderr: String::new(),
                },
                _ => error_outcome(1, "usage", e.to_string().trim_end().to_string()),
            };
        }
    };
    let result = std::panic::catch_unwind(AssertUnwindSafe(|| execute(&cli)));
    match result {
        Ok(Ok(value)) => Outcome {
            code: 0,
            stdout: render(&value, cli.format),
            stderr: String::new(),
        },
        Ok(Err(Failure::Input(code, msg))) => error_outcome(1, &code, msg),
        Ok(Err(Failure::Internal(msg))) => error_outcome(2, "internal", msg),
        Err(panic) => {
            let msg = panic
                .downcast_ref::<String>()
                .cloned()
                .or_else(|| panic.downcast_ref::<&str>().map(|s| s.to_string()))
                .unwrap_or_else(|| "panic".into());
            error_outcome(2, "internal", msg)
        }
    }
}

fn to_value<T: Serialize>(x: &T) -> Value {
    serde_json::to_value(x).expect("outputs serialize")
}

fn execute(cli: &Cli) -> Result<Value, Failure> {
    let digits = cli.precision;
    match &cli.command {
        Command::Herbrand { orders, eval } => herbrand(orders, eval),
        Command::Filtration(args) => filtration(args),
        Command::Localrank { field, nu } => localrank(field, nu),
        Command::Classgroup { disc } => {
            let k = class_group(*disc)?;
            Ok(to_value(&ClassGroupOutput {
                discriminant: k.disc,
                h: k.class_number(),
                class_group: k.structure.clone(),
                generators: k.generators.clone(),
                forms: k.forms.clone(),
            }))
        }
        Command::Rayclass { base, modulus, p } => {
            let base = Base::parse(base)?;
            let set = IndexedSet::parse(&base, modulus)?;
            let ray = ray_class_group_for(&base, &set, *p)?;
            let (discriminant, class_group) = match base.field() {
                Some(f) => (f.disc, f.structure.clone()),
                None => (1, Default::default()),
            };
            Ok(to_value(&RayClassOutput {
                discriminant,
                h: ray.class_number,
                class_group,
                ray_class: ray,
            }))
        }
        Command::Dsnu { base, set, p } => {
            let base = Base::parse(base)?;
            let set = IndexedSet::parse(&base, set)?;
            let comparison = compare_generator_ranks(&base, &set, *p)?;
            Ok(to_value(&GeneratorRankOutput {
                base: base.name(),
                set: set.to_json(),
                p: *p,
                comparison,
            }))
        }
        Command::Rdbound(args) => rdbound(args, digits),
        Command::Towergrowth { p, levels } => {
            let rows = tower_rd_growth(*p, *levels, digits)?;
            Ok(to_value(&TowerOutput {
                p: *p,
                levels: *levels,
                rows,
            }))
        }
        Command::CriterionScan { min, max } => {
            if min > max {
                return Err(input("invalid-input", format!("empty range {min}..{max}")));
            }
            let rows = criterion_scan(*min, *max)?;
            Ok(to_value(&ScanOutput {
                min: *min,
                max: *max,
                count: rows.len(),
                all_agree: rows.iter().all(|r| r.agree),
                rows,
            }))
        }
        Command::Bounds { kind } => bounds(kind),
    }
}

fn herbrand(orders: &[u64], eval: &[Rational]) -> Result<Value, Failure> {
    let filt = Filtration::new(orders.to_vec())?;
    let phi = phi_from_filtration(&filt);
    let psi = psi_from_filtration(&filt);
    let rows = eval
        .iter()
        .map(|&x| {
            Ok(Evaluation {
                x,
                phi: phi.evaluate(x)?,
                psi: psi.evaluate(x)?,
            })
        })
        .collect::<ramify::Result<Vec<_>>>()?;
    Ok(to_value(&HerbrandOutput {
        lower_jumps: filt.lower_jumps(),
        upper_jumps: upper_jumps(&filt),
        different_valuation: different_valuation(&filt),
        filtration: filt,
        phi,
        psi,
        rows,
    }))
}

fn catalog(args: &FiltrationArgs) -> Result<Vec<CatalogEntry>, Failure> {
    match &args.catalog {
        None => Ok(default_catalog()),
        Some(path) => {
            let text = std::fs::read_to_string(path)
                .map_err(|e| input("io", format!("cannot read {}: {e}", path.display())))?;
            Ok(load_catalog(&text)?)
        }
    }
}

fn filtration(args: &FiltrationArgs) -> Result<Value, Failure> {
    if args.list {
        return Ok(to_value(&CatalogListing { rows: catalog(args)? }));
    }
    if args.naive_lift {
        return Ok(to_value(&NaiveLiftOutput {
            report: naive_lift_readings()?,
        }));
    }
    let entry = if let Some(name) = &args.name {
        catalog(args)?
            .into_iter()
            .find(|c| &c.name == name)
            .ok_or_else(|| input("catalog-gap", format!("no catalog entry named {name:?}")))?
    } else if let Some(d) = args.quadratic {
        let prime = args.prime.expect("clap enforces --prime");
        CatalogEntry {
            name: format!("Q(sqrt{d})/Q at {prime}"),
            extension: CatalogExtension::Quadratic { d, prime },
        }
    } else if let Some(c) = &args.cyclotomic {
        let (p, n, over) = match c.as_slice() {
            [p, n] => (*p, *n, 0),
            [p, n, over] => (*p, *n, *over),
            _ => return Err(input("invalid-input", "--cyclotomic takes p,level[,over]")),
        };
        CatalogEntry {
            name: format!("Q{p}(zeta{})/Q{p}(zeta{})", (p as u64).pow(n), (p as u64).pow(over)),
            extension: CatalogExtension::Cyclotomic { p: p as u64, n, over },
        }
    } else {
        return Err(input(
            "invalid-input",
            "give --name, --quadratic with --prime, --cyclotomic, --list or --naive-lift",
        ));
    };
    let filt = entry.extension.filtration()?;
    let rows = args
        .depth
        .iter()
        .map(|&y| DepthVerdict {
            depth: y,
            holds: is_depth_at_most(&filt, y),
        })
        .collect();
    Ok(to_value(&FiltrationOutput {
        name: entry.name,
        inertia: filt.inertia(),
        different_valuation: different_valuation(&filt),
        lower_jumps: filt.lower_jumps(),
        upper_jumps: upper_jumps(&filt),
        orders: filt,
        rows,
    }))
}

fn parse_local_field(s: &str) -> Result<LocalFieldSpec, Failure> {
    let bad = || input("invalid-input", format!("cannot read local field {s:?}; expected qp:P, unram:P, ram2:D or zeta:P:N"));
    let parts: Vec<&str> = s.trim().split(':').collect();
    let num = |t: &str| t.trim().parse::<i64>().map_err(|_| bad());
    let spec = match parts.as_slice() {
        ["qp", p] => LocalFieldSpec::qp(num(p)?.try_into().map_err(|_| bad())?),
        ["unram", p] => LocalFieldSpec::unramified_quadratic(num(p)?.try_into().map_err(|_| bad())?),
        ["ram2", d] => LocalFieldSpec::ramified_quadratic_over_2(num(d)?),
        ["zeta", p, n] => {
            LocalFieldSpec::cyclotomic(num(p)?.try_into().map_err(|_| bad())?, num(n)?.try_into().map_err(|_| bad())?)
        }
        _ => return Err(bad()),
    };
    spec.validate()?;
    Ok(spec)
}

fn localrank(field: &str, nu: &[DepthIndex]) -> Result<Value, Failure> {
    let spec = parse_local_field(field)?;
    let nus: Vec<DepthIndex> = if nu.is_empty() {
        let bound = spec.ring()?.power_test_bound(spec.p) as u64;
        (1..=bound + 1).map(DepthIndex::int).chain([DepthIndex::Infinite]).collect()
    } else {
        nu.to_vec()
    };
    let rows = nus
        .into_iter()
        .map(|n| {
            Ok(LocalRankRow {
                nu: n,
                prank: prank_u1_mod_unu(&spec, n)?,
                delta_p_nu: delta_p_nu(&spec, n)?,
            })
        })
        .collect::<ramify::Result<Vec<_>>>()?;
    Ok(to_value(&LocalRankOutput {
        p: spec.p,
        degree: spec.degree()?,
        delta_p: delta_p(&spec)?,
        field: spec,
        rows,
    }))
}

fn rdbound(args: &RdBoundArgs, digits: usize) -> Result<Value, Failure> {
    let base = Base::parse(&args.base)?;
    let (set, p) = match (&args.set, args.prime, args.nu) {
        (Some(s), _, _) => {
            let p = args.p.ok_or_else(|| input("invalid-input", "--set needs --p"))?;
            (IndexedSet::parse(&base, s)?, p)
        }
        (None, Some(q), Some(nu)) => (IndexedSet::above(&base, q, nu)?, args.p.unwrap_or(q)),
        _ => return Err(input("invalid-input", "give --set with --p, or --prime with --nu")),
    };
    let summary = BaseFieldSummary::of(&base, p)?;
    let mut notes = Vec::new();
    let mut keep = |r: ramify::Result<_>, what: &str| match r {
        Ok(v) => Ok(Some(BoundReport::new(&v, digits))),
        Err(e) if e.is_internal() => Err(Failure::from(e)),
        Err(e) => {
            notes.push(format!("{what}: {e}"));
            Ok(None)
        }
    };
    let depth_bound = keep(rd_bound_depth(&summary, &set), "depth_bound")?;
    let conductor_bound = keep(rd_bound_conductor(&summary, &set), "conductor_bound")?;
    Ok(to_value(&RdBoundOutput {
        base: base.name(),
        set: set.to_json(),
        p,
        root_discriminant: BoundReport::new(&summary.root_discriminant(), digits),
        depth_bound,
        conductor_bound,
        notes,
    }))
}

fn bounds(kind: &BoundsKind) -> Result<Value, Failure> {
    let (name, inputs, value) = match kind {
        BoundsKind::Shafarevich {
            unit_prank,
            delta,
            theta,
            wild_degrees,
        } => (
            "shafarevich",
            json!({"unit_prank": unit_prank, "delta": delta, "theta": theta, "wild_degrees": wild_degrees}),
            shafarevich_bound(*unit_prank, *delta, *theta, wild_degrees)?,
        ),
        BoundsKind::Relation {
            b_rank,
            theta,
            delta,
            local_deltas,
        } => (
            "relation",
            json!({"b_rank": b_rank, "theta": theta, "delta": delta, "local_deltas": local_deltas}),
            relation_rank_bound(*b_rank, *theta, *delta, local_deltas)?,
        ),
        BoundsKind::Kernel {
            unit_prank,
            generator_rank,
            wild,
            tame_deltas,
            wild_unit_ranks,
        } => {
            let pairs = wild
                .iter()
                .map(|w| {
                    let (d, e) = w.split_once(':').ok_or(())?;
                    Ok((d.trim().parse().map_err(|_| ())?, e.trim().parse().map_err(|_| ())?))
                })
                .collect::<Result<Vec<(u32, u32)>, ()>>()
                .map_err(|_| input("invalid-input", "--wild takes degree:delta pairs"))?;
            (
                "kernel",
                json!({
                    "unit_prank": unit_prank,
                    "generator_rank": generator_rank,
                    "wild": pairs,
                    "tame_deltas": tame_deltas,
                    "wild_unit_ranks": wild_unit_ranks,
                }),
                kernel_rank_bound(*unit_prank, *generator_rank, &pairs, tame_deltas, wild_unit_ranks)?,
            )
        }
        BoundsKind::Euler { r2 } => ("euler", json!({"r2": r2}), euler_characteristic_full(*r2)),
    };
    let inputs: BTreeMap<String, Value> = match inputs {
        Value::Object(m) => m.into_iter().collect(),
        _ => unreachable!("inputs are built as objects"),
    };
    Ok(to_value(&BoundsOutput {
        kind: name.to_string(),
        inputs,
        value,
    }))
}
