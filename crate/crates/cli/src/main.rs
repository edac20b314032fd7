//! `f1curve`: place-to-point maps of the compactified arithmetic curve,
//! defect-sum scans, abc-triple reports, and exploration of the projective
//! line over cyclotomic coefficient monoids.
//!
//! Exit codes: 0 success, 2 user error (bad arguments, exceptional
//! numbers, invalid triples), 3 magnitude limit exceeded.

mod output;
mod scan;

use std::fs;
use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::{anyhow, bail, Context};
use clap::{Parser, Subcommand};
use num_bigint::BigUint;
use num_integer::Integer;
use num_traits::{One, Zero};

use f1curve_core::arith::{
    arch_ramification_literal, arch_sign_adjusted, defect_sum, map_degree, ramified_place, x_of,
    Place, Ramification, Rat,
};
use f1curve_core::cyclo::{CycloMonoid, GaloisLevel};
use f1curve_core::error::Error as CoreError;
use f1curve_core::factor::{factorize, is_prime};
use f1curve_core::ledger::DegreeLedger;
use f1curve_core::projline::{
    enumerate_points, fiber_phi, galois_quotient, point_degree, specializes,
    specializes_via_quotient, PointUniverse, ProjPoint,
};

use output::{json_to_string, sig12, Format, Rows};

#[derive(Parser)]
#[command(
    name = "f1curve",
    version,
    about = "Defect sums and projective lines over F1"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Per-rational report: images, ramification and defects of places.
    Map {
        /// The rational a/b (reduced automatically), e.g. 2/3 or -9/8.
        #[arg(allow_hyphen_values = true)]
        q: String,
        /// Also report every prime up to this bound.
        #[arg(long, default_value_t = 0)]
        primes: u64,
        #[arg(long, value_enum, default_value_t = Format::Table)]
        format: Format,
    },
    /// Scan all rationals in a height range, ranked by defect sum.
    Scan {
        #[arg(long)]
        min: u64,
        #[arg(long)]
        max: u64,
        /// How many top entries to keep.
        #[arg(long, default_value_t = 10)]
        top: usize,
        /// Worker threads (overridden by F1CURVE_THREADS).
        #[arg(long)]
        workers: Option<usize>,
        #[arg(long, value_enum, default_value_t = Format::Table)]
        format: Format,
        /// Resume file; written after every chunk of heights.
        #[arg(long)]
        checkpoint: Option<PathBuf>,
        /// Write the report here instead of stdout.
        #[arg(long)]
        output: Option<PathBuf>,
    },
    /// Defect data of the rational c/b of an abc triple, next to the
    /// classical quality log c / log rad(abc).
    Abc {
        a: String,
        b: String,
        c: String,
        #[arg(long, value_enum, default_value_t = Format::Table)]
        format: Format,
    },
    /// Explore the strong congruence space of the projective line.
    Projline {
        /// Coefficient level m (the monoid μ_m with zero).
        #[arg(long = "m", default_value_t = 1)]
        level: u64,
        /// Exponent bound for enumeration.
        #[arg(long, default_value_t = 10)]
        bound: u64,
        #[arg(long, value_enum, default_value_t = Format::Table)]
        format: Format,
        #[command(subcommand)]
        action: ProjlineAction,
    },
    /// Sections of the structure sheaf over a cofinite open set.
    Sections {
        /// Comma-separated excluded places, e.g. "2,3,arch".
        #[arg(long, default_value = "")]
        exclude: String,
        /// Height bound for the enumeration.
        #[arg(long, default_value_t = 10)]
        height: u64,
        #[arg(long, value_enum, default_value_t = Format::Table)]
        format: Format,
    },
}

#[derive(Subcommand)]
enum ProjlineAction {
    /// List every point with exponent up to the bound.
    Enumerate,
    /// The fiber of the level-change map over a point.
    Fibers { point: String },
    /// Quotient by a subgroup of units and audit the induced map.
    Quotient {
        /// The level modulus N.
        #[arg(long)]
        modulus: u64,
        /// Comma-separated unit residues generating the subgroup,
        /// e.g. "1,5".
        #[arg(long)]
        residues: String,
    },
    /// Which of two points lies in the closure of the other.
    Closure { x: String, y: String },
}

const LEVEL_LIMIT: u64 = 10_000;

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(err) => {
            eprintln!("error: {err:#}");
            let code = err
                .downcast_ref::<CoreError>()
                .map(|core| match core {
                    CoreError::MagnitudeLimit(_) => 3u8,
                    _ => 2u8,
                })
                .unwrap_or(2);
            ExitCode::from(code)
        }
    }
}

fn run(cli: Cli) -> anyhow::Result<()> {
    match cli.command {
        Command::Map { q, primes, format } => cmd_map(&q, primes, format),
        Command::Scan {
            min,
            max,
            top,
            workers,
            format,
            checkpoint,
            output,
        } => {
            let workers = worker_count(workers);
            let config = scan::ScanConfig {
                height_min: min,
                height_max: max,
                top_k: top,
                format,
                workers,
                output,
                checkpoint,
            };
            let outcome = scan::run_scan(&config)?;
            let rendered = scan::render(&outcome, &config);
            match &config.output {
                Some(path) => fs::write(path, rendered)
                    .with_context(|| format!("writing {}", path.display()))?,
                None => print!("{rendered}"),
            }
            Ok(())
        }
        Command::Abc { a, b, c, format } => cmd_abc(&a, &b, &c, format),
        Command::Projline {
            level,
            bound,
            format,
            action,
        } => cmd_projline(level, bound, format, action),
        Command::Sections {
            exclude,
            height,
            format,
        } => cmd_sections(&exclude, height, format),
    }
}

fn worker_count(flag: Option<usize>) -> usize {
    if let Ok(env) = std::env::var("F1CURVE_THREADS") {
        if let Ok(n) = env.parse::<usize>() {
            if n >= 1 {
                return n;
            }
        }
    }
    flag.unwrap_or_else(|| {
        std::thread::available_parallelism()
            .map(|n| n.get())
            .unwrap_or(1)
    })
    .max(1)
}

fn ledger_json(l: &DegreeLedger) -> serde_json::Value {
    serde_json::json!({ "ledger": l.to_string(), "value": sig12(l.value()) })
}

fn cmd_map(q: &str, prime_bound: u64, format: Format) -> anyhow::Result<()> {
    let q: Rat = q.parse::<Rat>().map_err(anyhow::Error::from)?;
    let mut places = x_of(&q).map_err(anyhow::Error::from)?;
    for p in 2..=prime_bound {
        if is_prime(p as u128) && !places.contains(&Place::Finite(p as u128)) {
            places.push(Place::Finite(p as u128));
        }
    }
    places.sort();

    let degree = map_degree(&q).map_err(anyhow::Error::from)?;
    let defect = defect_sum(&q).map_err(anyhow::Error::from)?;

    let mut rows = Rows::new(&["place", "image", "e", "deg", "defect"]);
    for place in &places {
        let rp = ramified_place(&q, place).map_err(anyhow::Error::from)?;
        let deg = place.degree().map_err(anyhow::Error::from)?;
        let defect_value = rp.defect_numerator.value() / degree.value();
        let e_text = match &rp.ram {
            Ramification::Finite(e) => e.to_string(),
            Ramification::Arch(l) => format!("{} = {}", l, sig12(l.value())),
        };
        rows.push(vec![
            place.to_string(),
            rp.image.to_string(),
            e_text,
            sig12(deg.value()),
            sig12(defect_value),
        ]);
    }

    let adjusted = arch_sign_adjusted(&q);
    let literal = arch_ramification_literal(&q).map_err(anyhow::Error::from)?;

    match format {
        Format::Table => {
            println!("q = {q}");
            println!("deg(phi_q) = {} = {}", degree, sig12(degree.value()));
            println!(
                "S(q) = {}  (numerator {} = {})",
                sig12(defect.value),
                defect.numerator,
                sig12(defect.numerator.value())
            );
            if adjusted {
                println!(
                    "note: |q| > 1, archimedean index uses |log|q||; literal -log|q| = {}",
                    sig12(literal.value())
                );
            }
            print!("{}", rows.to_table());
        }
        Format::Csv => print!("{}", rows.to_csv()),
        Format::Json => {
            let value = serde_json::json!({
                "q": q.to_string(),
                "degree": ledger_json(&degree),
                "defect_numerator": ledger_json(&defect.numerator),
                "s": sig12(defect.value),
                "arch_adjusted": adjusted,
                "arch_literal": ledger_json(&literal),
                "rows": rows.to_json_rows(),
            });
            print!("{}", json_to_string(&value));
        }
    }
    Ok(())
}

/// A valid abc triple: positive coprime integers with a + b = c and
/// a <= b.
struct AbcTriple {
    a: BigUint,
    b: BigUint,
    c: BigUint,
}

impl AbcTriple {
    fn new(a: BigUint, b: BigUint, c: BigUint) -> anyhow::Result<Self> {
        if a.is_zero() || b.is_zero() {
            bail!("triple entries must be positive");
        }
        if &a + &b != c {
            bail!("not a triple: {a} + {b} != {c}");
        }
        if a > b {
            bail!("triple must be ordered: {a} > {b}");
        }
        if a.gcd(&b) != BigUint::one() {
            bail!("triple must be coprime: gcd({a}, {b}) > 1");
        }
        Ok(AbcTriple { a, b, c })
    }

    /// `log c / log rad(abc)`, with both logs as exact ledgers first.
    fn quality(&self) -> anyhow::Result<(f64, DegreeLedger)> {
        let mut radical = DegreeLedger::zero();
        for part in [&self.a, &self.b, &self.c] {
            for (p, _) in factorize(part).map_err(anyhow::Error::from)? {
                if radical.prime_coeff(p) == 0.into() {
                    radical.add_prime(p, 1.into());
                }
            }
        }
        let log_c =
            DegreeLedger::from_factorization(&factorize(&self.c).map_err(anyhow::Error::from)?);
        Ok((log_c.value() / radical.value(), radical))
    }
}

fn cmd_abc(a: &str, b: &str, c: &str, format: Format) -> anyhow::Result<()> {
    let parse = |s: &str| -> anyhow::Result<BigUint> {
        s.parse()
            .map_err(|_| anyhow!("not a positive integer: `{s}`"))
    };
    let triple = AbcTriple::new(parse(a)?, parse(b)?, parse(c)?)?;
    let (quality, radical) = triple.quality()?;
    let q = Rat::new(triple.c.clone().into(), triple.b.clone().into())
        .map_err(anyhow::Error::from)?;
    let defect = defect_sum(&q).map_err(anyhow::Error::from)?;
    let degree = map_degree(&q).map_err(anyhow::Error::from)?;

    match format {
        Format::Table => {
            println!("triple: {} + {} = {}", triple.a, triple.b, triple.c);
            println!("rad(abc) ledger = {radical}");
            println!("quality = {}", sig12(quality));
            println!("q = c/b = {q}");
            println!("S(q) = {}", sig12(defect.value));
            println!("deg(phi_q) = {} = {}", degree, sig12(degree.value()));
        }
        Format::Csv => {
            let mut rows = Rows::new(&["a", "b", "c", "quality", "s", "degree"]);
            rows.push(vec![
                triple.a.to_string(),
                triple.b.to_string(),
                triple.c.to_string(),
                sig12(quality),
                sig12(defect.value),
                sig12(degree.value()),
            ]);
            print!("{}", rows.to_csv());
        }
        Format::Json => {
            let value = serde_json::json!({
                "a": triple.a.to_string(),
                "b": triple.b.to_string(),
                "c": triple.c.to_string(),
                "radical": radical.to_string(),
                "quality": sig12(quality),
                "q": q.to_string(),
                "s": sig12(defect.value),
                "defect_numerator": ledger_json(&defect.numerator),
                "degree": ledger_json(&degree),
            });
            print!("{}", json_to_string(&value));
        }
    }
    Ok(())
}

fn cmd_projline(
    level: u64,
    bound: u64,
    format: Format,
    action: ProjlineAction,
) -> anyhow::Result<()> {
    if level == 0 || level > LEVEL_LIMIT || bound > LEVEL_LIMIT {
        bail!("level and bound must lie in 1..={LEVEL_LIMIT}");
    }
    let monoid = CycloMonoid::finite(level).map_err(anyhow::Error::from)?;
    match action {
        ProjlineAction::Enumerate => {
            let universe = PointUniverse::new(monoid, bound).map_err(anyhow::Error::from)?;
            let points = enumerate_points(&universe).map_err(anyhow::Error::from)?;
            let mut rows = Rows::new(&["point", "in-p1"]);
            for p in &points {
                rows.push(vec![
                    p.to_string(),
                    f1curve_core::projline::null_ideal_point(p).to_string(),
                ]);
            }
            emit_rows(format, rows, || {
                serde_json::json!({
                    "level": level,
                    "bound": bound,
                    "count": points.len(),
                })
            });
        }
        ProjlineAction::Fibers { point } => {
            let target: ProjPoint = point.parse().map_err(anyhow::Error::from)?;
            let fiber = fiber_phi(&monoid, &target).map_err(anyhow::Error::from)?;
            let mut rows = Rows::new(&["member"]);
            for p in &fiber {
                let shown = match p {
                    ProjPoint::Pt { lambda, .. } => lambda.to_string(),
                    other => other.to_string(),
                };
                rows.push(vec![shown]);
            }
            if matches!(format, Format::Table) {
                let degree_note = point_degree(&target)
                    .map(|d| format!(", degree {}", sig12(d.value())))
                    .unwrap_or_default();
                println!("fiber over {target} (size {}{degree_note})", fiber.len());
            }
            emit_rows(format, rows, || {
                serde_json::json!({
                    "level": level,
                    "target": target.to_string(),
                })
            });
        }
        ProjlineAction::Quotient { modulus, residues } => {
            if modulus == 0 || modulus > LEVEL_LIMIT {
                bail!("modulus must lie in 1..={LEVEL_LIMIT}");
            }
            let members: Vec<u64> = residues
                .split(',')
                .filter(|s| !s.trim().is_empty())
                .map(|s| {
                    s.trim()
                        .parse::<u64>()
                        .map_err(|_| anyhow!("bad residue `{s}`"))
                })
                .collect::<anyhow::Result<_>>()?;
            let gamma = close_subgroup(modulus, members)?;
            let report = galois_quotient(&gamma, modulus).map_err(anyhow::Error::from)?;
            let mut rows = Rows::new(&["orbit", "image"]);
            for entry in &report.entries {
                rows.push(vec![
                    entry
                        .orbit
                        .iter()
                        .map(|p| p.to_string())
                        .collect::<Vec<_>>()
                        .join(" "),
                    entry.image.to_string(),
                ]);
            }
            if matches!(format, Format::Table) {
                println!(
                    "subgroup {:?} mod {modulus}; fixed level {}",
                    gamma.members(),
                    report.fixed.level().unwrap_or(0)
                );
                println!(
                    "injective: {}; surjective onto reachable: {}; bijection: {}",
                    report.is_injective(),
                    report.is_surjective(),
                    report.is_bijection()
                );
                for c in &report.collisions {
                    println!("collision at {c}");
                }
            }
            emit_rows(format, rows, || {
                serde_json::json!({
                    "modulus": modulus,
                    "members": gamma.members(),
                    "fixed_level": report.fixed.level(),
                    "injective": report.is_injective(),
                    "surjective": report.is_surjective(),
                    "bijection": report.is_bijection(),
                    "collisions": report.collisions.iter().map(|p| p.to_string()).collect::<Vec<_>>(),
                })
            });
        }
        ProjlineAction::Closure { x, y } => {
            let x: ProjPoint = x.parse().map_err(anyhow::Error::from)?;
            let y: ProjPoint = y.parse().map_err(anyhow::Error::from)?;
            let down = specializes(&monoid, &x, &y).map_err(anyhow::Error::from)?;
            let up = specializes(&monoid, &y, &x).map_err(anyhow::Error::from)?;
            let down_q = specializes_via_quotient(&monoid, &x, &y).map_err(anyhow::Error::from)?;
            let up_q = specializes_via_quotient(&monoid, &y, &x).map_err(anyhow::Error::from)?;
            if down != down_q || up != up_q {
                bail!("symbolic and finite-quotient closure checks disagree");
            }
            match format {
                Format::Json => {
                    let value = serde_json::json!({
                        "x": x.to_string(),
                        "y": y.to_string(),
                        "y_in_closure_of_x": down,
                        "x_in_closure_of_y": up,
                        "non_t1_witness": down ^ up,
                    });
                    print!("{}", json_to_string(&value));
                }
                _ => {
                    println!("{y} in closure of {x}: {down}");
                    println!("{x} in closure of {y}: {up}");
                    if down ^ up {
                        println!(
                            "exactly one direction holds: two distinct non-generic points are \
                             topologically inseparable, so the space is not T1"
                        );
                    }
                }
            }
        }
    }
    Ok(())
}

/// Builds the subgroup generated by the given residues (so callers can
/// pass generators rather than full member lists).
fn close_subgroup(modulus: u64, mut members: Vec<u64>) -> anyhow::Result<GaloisLevel> {
    members.push(1);
    let mut set: Vec<u64> = members
        .iter()
        .map(|&g| {
            let g = if modulus > 1 { g % modulus } else { 1 };
            if modulus > 1 && num_integer::gcd(g, modulus) != 1 {
                Err(anyhow!("{g} is not a unit mod {modulus}"))
            } else {
                Ok(g)
            }
        })
        .collect::<anyhow::Result<_>>()?;
    loop {
        let mut grew = false;
        let snapshot = set.clone();
        for &x in &snapshot {
            for &y in &snapshot {
                let z = if modulus > 1 {
                    (x as u128 * y as u128 % modulus as u128) as u64
                } else {
                    1
                };
                if !set.contains(&z) {
                    set.push(z);
                    grew = true;
                }
            }
        }
        if !grew {
            break;
        }
    }
    GaloisLevel::new(modulus, set).map_err(anyhow::Error::from)
}

fn emit_rows(format: Format, rows: Rows, meta: impl FnOnce() -> serde_json::Value) {
    match format {
        Format::Table => print!("{}", rows.to_table()),
        Format::Csv => print!("{}", rows.to_csv()),
        Format::Json => {
            let mut value = meta();
            value
                .as_object_mut()
                .expect("meta is an object")
                .insert("rows".into(), rows.to_json_rows());
            print!("{}", json_to_string(&value));
        }
    }
}

fn cmd_sections(exclude: &str, height: u64, format: Format) -> anyhow::Result<()> {
    let mut places = Vec::new();
    for token in exclude.split(',').map(str::trim).filter(|s| !s.is_empty()) {
        if token.eq_ignore_ascii_case("arch") {
            places.push(Place::Arch);
        } else {
            let p: u128 = token
                .parse()
                .map_err(|_| anyhow!("bad place `{token}`; expected a prime or `arch`"))?;
            places.push(Place::finite(p).map_err(anyhow::Error::from)?);
        }
    }
    let space = f1curve_core::arith::SectionSpace::new(&places).map_err(anyhow::Error::from)?;
    let sections = space.enumerate(height);
    let mut rows = Rows::new(&["section"]);
    for s in &sections {
        rows.push(vec![s.to_string()]);
    }
    if matches!(format, Format::Table) {
        println!(
            "sections over the complement of {{{}}} up to height {height}: {} elements",
            places
                .iter()
                .map(|p| p.to_string())
                .collect::<Vec<_>>()
                .join(", "),
            sections.len()
        );
    }
    emit_rows(format, rows, || {
        serde_json::json!({
            "excluded": places.iter().map(|p| p.to_string()).collect::<Vec<_>>(),
            "height": height,
            "count": sections.len(),
        })
    });
    Ok(())
}
