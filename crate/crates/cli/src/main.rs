mod cache;

use std::fmt::Display;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use serde_json::json;

use icosa_core::arrangement::{default_patch, render_affine};
use icosa_core::context::Context;
use icosa_core::picard::DivisorClass;
use icosa_core::report::VerificationReport;
use icosa_core::suites::{bounds_with, run_with, sandwich_table, Bounds, Suite};
use icosa_core::symbolic::{alpha_bounded, validate_certificate, AlphaCertificate, PointSet};
use icosa_core::{Error, HomogeneousPolynomial};

use cache::Cache;

const EXIT_FAIL: u8 = 1;
const EXIT_USAGE: u8 = 2;

#[derive(Parser)]
#[command(name = "icosa", version, about = "Exact computations for the icosahedral arrangement of 15 lines")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run a verification suite.
    Verify {
        /// group, arrangement, invariants, psi30, picard, descent, interpolation or all
        suite: Suite,
        /// Also write the report as JSON.
        #[arg(long)]
        json: Option<PathBuf>,
    },
    /// Initial degree of the m-th symbolic power of a point set.
    Alpha {
        /// all, double, triple or quintuple
        #[arg(long)]
        orbit: PointSet,
        #[arg(long)]
        m: u32,
        #[arg(long)]
        max_degree: Option<u32>,
        #[arg(long)]
        json: Option<PathBuf>,
    },
    /// Intersection number of two divisor classes.
    Intersect { a: DivisorClass, b: DivisorClass },
    /// Euler characteristic of a divisor class.
    Chi { class: DivisorClass },
    /// Certified lower bound and best upper evidence for a Waldschmidt constant.
    Bounds {
        #[arg(long)]
        orbit: PointSet,
        /// Rows of the sandwich table to print for the full set.
        #[arg(long, default_value_t = 10)]
        rows: i64,
    },
    /// Draw the arrangement in an affine chart as SVG.
    Render {
        /// Linear form that is nonzero on the chart (default `y - w*z`).
        #[arg(long)]
        patch: Option<HomogeneousPolynomial>,
        #[arg(long)]
        out: PathBuf,
        /// Also write the lines and points as JSON.
        #[arg(long)]
        incidence: Option<PathBuf>,
    },
    /// Run every suite and write a combined JSON report.
    Report {
        #[arg(long)]
        json: PathBuf,
    },
}

/// Failure of a command, carrying its exit code.
struct Failure {
    code: u8,
    message: String,
}

impl Failure {
    fn fail(msg: impl Display) -> Self {
        Failure { code: EXIT_FAIL, message: msg.to_string() }
    }
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let code = if matches!(e, Error::Parse(_)) { EXIT_USAGE } else { EXIT_FAIL };
        Failure { code, message: e.to_string() }
    }
}

impl From<std::io::Error> for Failure {
    fn from(e: std::io::Error) -> Self {
        Failure::fail(e)
    }
}

impl From<serde_json::Error> for Failure {
    fn from(e: serde_json::Error) -> Self {
        Failure::fail(e)
    }
}

type Outcome = Result<bool, Failure>;

fn write_json(path: &Path, value: &impl serde::Serialize) -> Result<(), Failure> {
    let mut text = serde_json::to_string_pretty(value)?;
    text.push('\n');
    std::fs::write(path, text)?;
    Ok(())
}

fn context() -> Result<&'static Context, Failure> {
    Ok(Context::shared()?)
}

fn alpha_key(set: PointSet, m: u32) -> String {
    format!("{set}-m{m}")
}

/// A certificate from the cache if it still validates, otherwise a fresh one.
fn cached_alpha(
    cache: &Cache,
    ctx: &Context,
    set: PointSet,
    m: u32,
    max_degree: Option<u32>,
) -> icosa_core::Result<(AlphaCertificate, bool)> {
    let key = alpha_key(set, m);
    if let Some((hash, bytes)) = cache.load("alpha", &key) {
        match serde_json::from_slice::<AlphaCertificate>(&bytes) {
            Ok(c) if c.orbit == set && c.m == m => match validate_certificate(&c, &ctx.arrangement) {
                Ok(()) => return Ok((c, true)),
                Err(e) => eprintln!("warning: cached certificate {hash} rejected: {e}"),
            },
            Ok(_) => eprintln!("warning: cached certificate {hash} is for another key"),
            Err(e) => eprintln!("warning: cached certificate {hash} unreadable: {e}"),
        }
    }
    let c = alpha_bounded(&ctx.arrangement, set, m, None, max_degree)?;
    match serde_json::to_vec(&c) {
        Ok(bytes) => {
            if let Err(e) = cache.store("alpha", &key, &bytes) {
                eprintln!("warning: could not write cache under {}: {e}", cache.root().display());
            }
        }
        Err(e) => eprintln!("warning: could not serialize certificate: {e}"),
    }
    Ok((c, false))
}

fn print_report(r: &VerificationReport) -> bool {
    print!("{r}");
    let passed = r.all_passed();
    let failed = r.claims.iter().filter(|c| !c.passed()).count();
    if passed {
        println!("overall: pass ({} claims)", r.claims.len());
    } else {
        println!("overall: fail ({failed} of {} claims not passed)", r.claims.len());
    }
    passed
}

fn verify(suite: Suite, json: Option<PathBuf>) -> Outcome {
    let ctx = context()?;
    let cache = Cache::from_env();
    let report = run_with(suite, ctx, &mut |s, m| cached_alpha(&cache, ctx, s, m, None).map(|(c, _)| c));
    if !report.ids_unique() {
        return Err(Failure::fail("duplicate claim ids in report"));
    }
    if let Some(path) = json {
        write_json(&path, &report)?;
    }
    Ok(print_report(&report))
}

fn alpha_cmd(set: PointSet, m: u32, max_degree: Option<u32>, json: Option<PathBuf>) -> Outcome {
    if m == 0 {
        return Err(Failure { code: EXIT_USAGE, message: "--m must be at least 1".into() });
    }
    let ctx = context()?;
    let cache = Cache::from_env();
    let (c, from_cache) = match cached_alpha(&cache, ctx, set, m, max_degree) {
        Ok(x) => x,
        Err(Error::Inconclusive(msg)) => {
            println!("inconclusive: {msg}");
            return Ok(false);
        }
        Err(e) => return Err(e.into()),
    };
    let w = &c.lower_witness;
    println!("alpha(I^({m})) for {set} = {}", c.alpha);
    println!("ratio alpha/m = {}", c.ratio());
    println!(
        "upper witness: form of degree {} with {} terms, multiplicity >= {m} at {} points",
        c.upper_witness.degree(),
        c.upper_witness.num_terms(),
        set.points(&ctx.arrangement).len()
    );
    println!(
        "lower witness: {} independent conditions in degree {} modulo {} (w -> {})",
        w.rows.len(),
        w.degree,
        w.prime,
        w.root
    );
    println!("certificate: {}", if from_cache { "cached, revalidated" } else { "computed" });
    if let Some(path) = json {
        let doc = json!({
            "orbit": set,
            "m": m,
            "alpha": c.alpha,
            "ratio": c.ratio().to_string(),
            "certificate": c,
        });
        write_json(&path, &doc)?;
    }
    Ok(true)
}

fn print_bounds(b: &Bounds) {
    println!("orbit {}", b.set);
    println!("lower {} ({})", b.lower, b.lower_source);
    match &b.upper {
        Some(u) => println!("upper {u} ({})", b.upper_source),
        None => println!("upper none"),
    }
    match (b.verdict(), &b.upper) {
        (Some(v), _) => println!("verdict {v}"),
        (None, Some(u)) => println!("verdict open: {} <= alpha-hat <= {u}", b.lower),
        (None, None) => println!("verdict open: {} <= alpha-hat", b.lower),
    }
}

fn bounds_cmd(set: PointSet, rows: i64) -> Outcome {
    let ctx = context()?;
    let cache = Cache::from_env();
    let b = bounds_with(ctx, set, &mut |s, m| cached_alpha(&cache, ctx, s, m, None).map(|(c, _)| c))?;
    print_bounds(&b);
    if set == PointSet::All {
        println!("sandwich (55k+2)/(10k):");
        for (k, v) in sandwich_table(rows.max(1)) {
            println!("  k = {k}: {v}");
        }
        println!("  <= lim (55k+2)/(10k) = 11/2");
    }
    Ok(b.upper.as_ref().is_none_or(|u| *u >= b.lower))
}

fn render_cmd(patch: Option<HomogeneousPolynomial>, out: PathBuf, incidence: Option<PathBuf>) -> Outcome {
    let ctx = context()?;
    let patch = patch.unwrap_or_else(default_patch);
    let r = render_affine(&ctx.arrangement, &patch)?;
    std::fs::write(&out, &r.svg)?;
    println!("chart {patch} != 0");
    println!("{} lines, {} finite points", r.lines_drawn, r.finite_points);
    println!("{} points at infinity", r.points_at_infinity.len());
    for s in &r.points_at_infinity {
        println!("  {} {}", s.orbit_id.name(), s.point);
    }
    println!("wrote {}", out.display());
    if let Some(path) = incidence {
        write_json(&path, &ctx.arrangement.dump())?;
        println!("wrote {}", path.display());
    }
    Ok(true)
}

fn report_cmd(path: PathBuf) -> Outcome {
    let ctx = context()?;
    let cache = Cache::from_env();
    let mut source = |s, m| cached_alpha(&cache, ctx, s, m, None).map(|(c, _)| c);
    let reports: Vec<VerificationReport> = Suite::EACH.into_iter().map(|s| run_with(s, ctx, &mut source)).collect();
    let mut bounds = Vec::new();
    for set in PointSet::ALL {
        let b = bounds_with(ctx, set, &mut source)?;
        bounds.push(json!({
            "orbit": set,
            "lower": b.lower.to_string(),
            "lower_source": b.lower_source,
            "upper": b.upper.as_ref().map(|u| u.to_string()),
            "upper_source": b.upper_source,
            "verdict": b.verdict().map(|v| v.to_string()),
        }));
    }
    let mut ok = true;
    for r in &reports {
        let passed = r.all_passed();
        ok &= passed;
        println!("{:<14} {:>3} claims  {:>7} ms  {}", r.suite, r.claims.len(), r.timing_ms, if passed { "pass" } else { "fail" });
    }
    let doc = json!({
        "version": concat!("icosa ", env!("CARGO_PKG_VERSION")),
        "reports": reports,
        "bounds": bounds,
    });
    write_json(&path, &doc)?;
    println!("wrote {}", path.display());
    Ok(ok)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let outcome = match cli.command {
        Command::Verify { suite, json } => verify(suite, json),
        Command::Alpha { orbit, m, max_degree, json } => alpha_cmd(orbit, m, max_degree, json),
        Command::Intersect { a, b } => {
            println!("{}", a.intersect(&b));
            Ok(true)
        }
        Command::Chi { class } => class.euler_char().map(|v| println!("{v}")).map(|_| true).map_err(Failure::from),
        Command::Bounds { orbit, rows } => bounds_cmd(orbit, rows),
        Command::Render { patch, out, incidence } => render_cmd(patch, out, incidence),
        Command::Report { json } => report_cmd(json),
    };
    match outcome {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(EXIT_FAIL),
        Err(f) => {
            eprintln!("error: {}", f.message);
            ExitCode::from(f.code)
        }
    }
}
