//! `gradlab`: compute, verify, compare and export the fine gradings of `o(8, C)`.
//!
//! Exit status is 0 only when every requested check passes, 1 when a check
//! fails and 2 on usage or runtime errors.

use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use gradlab_core::autos::Coordinate;
use gradlab_core::calibrate::{calibrate_root_basis, certify, CalibratedBasis};
use gradlab_core::catalog::{self, GradingSpec};
use gradlab_core::diag::LabeledDecomposition;
use gradlab_core::gradecheck::{encode_label, refines};
use gradlab_core::liealg::{pair_of, DIM};
use gradlab_core::pipeline::{self, format_label, GradingReport};
use gradlab_core::{export, selftest, FieldElement};

#[derive(Parser, Debug)]
#[command(name = "gradlab", version, about = "Exact fine gradings of o(8,C)")]
struct Cli {
    #[command(subcommand)]
    command: Command,
    /// Output format.
    #[arg(long, value_enum, global = true, default_value_t = Format::Text)]
    format: Format,
    /// Write output to this file instead of stdout.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    /// Calibration cache; searched and written when missing.
    #[arg(long, global = true)]
    calibration: Option<PathBuf>,
    /// Worker threads (defaults to the number of cores).
    #[arg(long, global = true)]
    jobs: Option<usize>,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Table of the fourteen gradings.
    List,
    /// Full labeled decomposition of one grading.
    Compute { id: String },
    /// Verify the given gradings.
    Verify {
        #[arg(required = true)]
        ids: Vec<String>,
    },
    /// Verify all fourteen gradings.
    VerifyAll,
    /// Refinement verdict between two gradings, in both directions.
    Compare { first: String, second: String },
    /// Run the root-basis calibration search and write the cache.
    Calibrate,
    /// Export one grading as JSON.
    Export { id: String },
    /// Run the arithmetic self-checks.
    Selftest {
        /// Random cases for the field suite.
        #[arg(long, default_value_t = 10_000)]
        cases: usize,
        #[arg(long, default_value_t = 1)]
        seed: u64,
    },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Format {
    Text,
    Json,
}

/// Rendered output plus whether every check passed.
struct Outcome {
    body: String,
    ok: bool,
}

type Failure = String;

struct Context {
    format: Format,
    calibration: Option<PathBuf>,
    basis: Option<CalibratedBasis>,
}

impl Context {
    fn basis(&mut self) -> Result<&CalibratedBasis, Failure> {
        if self.basis.is_none() {
            let b = pipeline::load_or_calibrate(self.calibration.as_deref())
                .map_err(|e| format!("calibration failed: {e}"))?;
            self.basis = Some(b);
        }
        Ok(self.basis.as_ref().expect("set above"))
    }

    fn basis_for(&mut self, spec: &GradingSpec) -> Result<Option<&CalibratedBasis>, Failure> {
        if spec.needs_calibration() {
            self.basis().map(Some)
        } else {
            Ok(None)
        }
    }
}

fn spec(id: &str) -> Result<GradingSpec, Failure> {
    catalog::get_spec(id).map_err(|e| e.to_string())
}

fn pretty(v: &Value) -> String {
    serde_json::to_string_pretty(v).expect("json values serialize")
}

fn group_json(g: &gradlab_core::gradecheck::GroupStructure) -> Value {
    json!({ "free_rank": g.free_rank, "invariant_factors": g.invariant_factors })
}

fn type_text(t: &[usize]) -> String {
    let parts: Vec<String> = t.iter().map(usize::to_string).collect();
    format!("({})", parts.join(","))
}

fn list(ctx: &Context) -> Result<Outcome, Failure> {
    let specs = catalog::all_specs().map_err(|e| e.to_string())?;
    let body = match ctx.format {
        Format::Json => pretty(&Value::Array(
            specs
                .iter()
                .map(|s| {
                    json!({
                        "id": s.id,
                        "group": group_json(&s.expected_group),
                        "type": s.expected_type,
                        "mad_label": s.mad_label,
                        "generators": s.generators.len(),
                    })
                })
                .collect(),
        )),
        Format::Text => {
            let mut out = format!("{:<5} {:<16} {:<14} {}\n", "id", "group", "type", "MAD");
            for s in &specs {
                out += &format!(
                    "{:<5} {:<16} {:<14} {}\n",
                    s.id,
                    s.expected_group.to_string(),
                    type_text(&s.expected_type),
                    s.mad_label.as_deref().unwrap_or("-")
                );
            }
            out
        }
    };
    Ok(Outcome { body, ok: true })
}

/// `c·b_ij + …` with unit coefficients abbreviated.
fn format_vector(v: &[FieldElement]) -> String {
    let mut out = String::new();
    for (k, c) in v.iter().enumerate().filter(|(_, c)| !c.is_zero()) {
        let (i, j) = pair_of(k);
        let name = format!("b{i}{j}");
        let one = FieldElement::one();
        let term = if *c == one {
            format!("+{name}")
        } else if *c == -&one {
            format!("-{name}")
        } else {
            format!("+({c})·{name}")
        };
        out += &term;
    }
    match out.strip_prefix('+') {
        Some(rest) => rest.to_string(),
        None if out.is_empty() => "0".into(),
        None => out,
    }
}

/// Additive degree of a label: exponents for free coordinates, residues modulo
/// the coordinate's order (`moduli`) for finite ones.
fn degree(label: &[FieldElement], coords: &[Coordinate], moduli: &[u32]) -> String {
    match encode_label(label, coords) {
        Ok(d) => {
            let parts: Vec<String> = d
                .iter()
                .zip(coords)
                .zip(moduli)
                .map(|((x, c), &m)| match c {
                    Coordinate::Free(_) => x.to_string(),
                    Coordinate::Finite => format!("{}̄", x * i64::from(m) / 12),
                })
                .collect();
            format!("({})", parts.join(","))
        }
        Err(_) => "?".into(),
    }
}

fn lcm(a: u32, b: u32) -> u32 {
    fn gcd(a: u32, b: u32) -> u32 {
        if b == 0 {
            a
        } else {
            gcd(b, a % b)
        }
    }
    a / gcd(a, b) * b
}

fn compute(ctx: &mut Context, id: &str) -> Result<Outcome, Failure> {
    let s = spec(id)?;
    let basis = ctx.basis_for(&s)?;
    let d = pipeline::compute(&s, basis).map_err(|e| e.to_string())?;
    let body = match ctx.format {
        Format::Json => export::to_json(&export::export(&s.id, &d).map_err(|e| e.to_string())?).map_err(|e| e.to_string())?,
        Format::Text => render_decomposition(&s, &d),
    };
    Ok(Outcome { body, ok: true })
}

fn render_decomposition(s: &GradingSpec, d: &LabeledDecomposition) -> String {
    let coords: Vec<Coordinate> = d.generators.iter().filter_map(|g| g.coordinate().ok()).collect();
    let gens: Vec<String> = d.generators.iter().map(ToString::to_string).collect();
    let moduli: Vec<u32> = (0..d.generators.len())
        .map(|j| d.parts.iter().filter_map(|p| p.label[j].root_of_unity_order()).fold(1, lcm))
        .collect();
    let mut out = format!("{}: {} components, generators {}\n", s.id, d.parts.len(), gens.join(", "));
    for p in &d.parts {
        let vectors: Vec<String> = p.space.basis().iter().map(|v| format_vector(v)).collect();
        let deg = if coords.len() == d.generators.len() { degree(&p.label, &coords, &moduli) } else { "?".into() };
        out += &format!("L{} [degree {deg}] = <{}>\n", format_label(&p.label), vectors.join(", "));
    }
    out
}

fn check(ok: bool) -> &'static str {
    if ok {
        "ok"
    } else {
        "FAIL"
    }
}

fn report_text(r: &GradingReport) -> String {
    let mut out = format!("{} {}\n", r.id, r.mad_label.as_deref().unwrap_or(""));
    out += &format!("  dimension: {} {}\n", r.dim_sum, check(r.dim_sum == DIM));
    out += &format!(
        "  type: {} expected {} {}\n",
        type_text(&r.grading_type),
        type_text(&r.expected_type),
        check(r.type_matches())
    );
    out += &format!("  group: {} expected {} {}\n", r.group, r.expected_group, check(r.group_matches()));
    out += &format!(
        "  closure: {} component pairs, {} violations {}\n",
        r.closure.pairs_checked,
        r.closure.violations.len(),
        check(r.closure.passed())
    );
    for v in r.closure.violations.iter().take(5) {
        out += &format!("    [{}, {}] escapes: {}\n", format_label(&v.left), format_label(&v.right), format_vector(&v.witness));
    }
    out += &format!("  golden: {}/{} {}\n", r.golden_matched, r.golden_total, check(r.golden_passed()));
    for f in &r.golden_failures {
        out += &format!("    {f}\n");
    }
    out += &format!("  status: {}\n", if r.passed() { "PASS" } else { "FAIL" });
    out
}

fn report_json(r: &GradingReport) -> Value {
    json!({
        "id": r.id,
        "mad_label": r.mad_label,
        "dimension": r.dim_sum,
        "type": r.grading_type,
        "expected_type": r.expected_type,
        "group": group_json(&r.group),
        "expected_group": group_json(&r.expected_group),
        "closure": {
            "pairs_checked": r.closure.pairs_checked,
            "violations": r.closure.violations.iter().map(|v| json!({
                "left": v.left, "right": v.right, "witness": v.witness,
            })).collect::<Vec<_>>(),
        },
        "golden": { "matched": r.golden_matched, "total": r.golden_total, "failures": r.golden_failures },
        "passed": r.passed(),
    })
}

fn verify(ctx: &mut Context, ids: &[String]) -> Result<Outcome, Failure> {
    let specs: Vec<GradingSpec> = ids.iter().map(|id| spec(id)).collect::<Result<_, _>>()?;
    let basis = if specs.iter().any(GradingSpec::needs_calibration) { Some(ctx.basis()?) } else { None };
    let canonical: Vec<String> = specs.iter().map(|s| s.id.clone()).collect();
    let results = pipeline::verify_many(&canonical, basis);
    let mut ok = true;
    let mut texts = Vec::new();
    let mut values = Vec::new();
    for (id, r) in canonical.iter().zip(results) {
        match r {
            Ok(r) => {
                ok &= r.passed();
                texts.push(report_text(&r));
                values.push(report_json(&r));
            }
            Err(e) => {
                ok = false;
                texts.push(format!("{id}\n  error: {e}\n  status: FAIL\n"));
                values.push(json!({ "id": id, "error": e.to_string(), "passed": false }));
            }
        }
    }
    let passed = values.iter().filter(|v| v["passed"] == true).count();
    let body = match ctx.format {
        Format::Json => pretty(&json!({ "reports": values, "passed": passed, "total": values.len() })),
        Format::Text => format!("{}{passed}/{} gradings passed\n", texts.join("\n"), values.len()),
    };
    Ok(Outcome { body, ok })
}

fn compare(ctx: &mut Context, first: &str, second: &str) -> Result<Outcome, Failure> {
    let (a, b) = (spec(first)?, spec(second)?);
    let da = {
        let basis = ctx.basis_for(&a)?;
        pipeline::compute(&a, basis).map_err(|e| e.to_string())?
    };
    let db = {
        let basis = ctx.basis_for(&b)?;
        pipeline::compute(&b, basis).map_err(|e| e.to_string())?
    };
    let (ab, ba) = (refines(&da, &db), refines(&db, &da));
    let verdict = match (ab, ba) {
        (true, true) => format!("{} and {} have the same components", a.id, b.id),
        (true, false) => format!("{} refines {}", a.id, b.id),
        (false, true) => format!("{} refines {}", b.id, a.id),
        (false, false) => "neither refines the other".to_string(),
    };
    let body = match ctx.format {
        Format::Json => pretty(&json!({
            "first": a.id, "second": b.id,
            "first_refines_second": ab, "second_refines_first": ba,
            "verdict": verdict,
        })),
        Format::Text => format!("{verdict}\n"),
    };
    Ok(Outcome { body, ok: true })
}

fn calibrate(ctx: &mut Context, out: Option<&Path>) -> Result<Outcome, Failure> {
    let (basis, summary) = calibrate_root_basis().map_err(|e| format!("calibration failed:\n{e}"))?;
    let report = certify(&basis).map_err(|e| e.to_string())?;
    let target = ctx.calibration.clone().or_else(|| out.map(Path::to_path_buf));
    // With --out and no --calibration the basis itself is the output.
    let basis_is_output = ctx.calibration.is_none() && out.is_some();
    if let Some(path) = &ctx.calibration {
        basis.save(path).map_err(|e| e.to_string())?;
    }
    let p = basis.provenance();
    let body = if basis_is_output {
        basis.to_json().map_err(|e| e.to_string())?
    } else {
        match ctx.format {
            Format::Json => pretty(&json!({
                "passed": report.passed(),
                "lattice_maps": summary.lattice_maps,
                "attempts": summary.attempts,
                "lattice_map_index": p.lattice_map_index,
                "h1_order": report.h1_order,
                "h2_order": report.h2_order,
                "cache": target.as_ref().map(|t| t.display().to_string()),
            })),
            Format::Text => {
                let mut s = format!(
                    "calibration {}: lattice map {} of {}, {} attempts\n",
                    if report.passed() { "certified" } else { "FAILED" },
                    p.lattice_map_index,
                    summary.lattice_maps,
                    summary.attempts
                );
                s += &format!("  H1 order {:?}, H2 order {:?}\n", report.h1_order, report.h2_order);
                if !report.passed() {
                    s += &report.describe_failures();
                }
                match &target {
                    Some(t) => s += &format!("  cache written to {}\n", t.display()),
                    None => s += "  no cache path given (use --calibration)\n",
                }
                s
            }
        }
    };
    let ok = report.passed();
    ctx.basis = Some(basis);
    Ok(Outcome { body, ok })
}

fn export_cmd(ctx: &mut Context, id: &str) -> Result<Outcome, Failure> {
    let s = spec(id)?;
    let basis = ctx.basis_for(&s)?;
    let d = pipeline::compute(&s, basis).map_err(|e| e.to_string())?;
    let e = export::export(&s.id, &d).map_err(|e| e.to_string())?;
    Ok(Outcome { body: export::to_json(&e).map_err(|e| e.to_string())?, ok: true })
}

fn selftest_cmd(ctx: &Context, cases: usize, seed: u64) -> Outcome {
    let results = selftest::run_all(cases, seed);
    let ok = results.iter().all(selftest::SuiteResult::passed);
    let body = match ctx.format {
        Format::Json => pretty(&Value::Array(
            results
                .iter()
                .map(|r| json!({ "suite": r.name, "cases": r.cases, "failures": r.failures }))
                .collect(),
        )),
        Format::Text => {
            let mut s = String::new();
            for r in &results {
                s += &format!("{:<20} {:>6} cases  {}\n", r.name, r.cases, if r.passed() { "ok" } else { "FAIL" });
                for f in r.failures.iter().take(5) {
                    s += &format!("    {f}\n");
                }
            }
            s
        }
    };
    Outcome { body, ok }
}

fn run(cli: &Cli) -> Result<Outcome, Failure> {
    if let Some(n) = cli.jobs {
        rayon::ThreadPoolBuilder::new()
            .num_threads(n.max(1))
            .build_global()
            .map_err(|e| e.to_string())?;
    }
    let mut ctx = Context { format: cli.format, calibration: cli.calibration.clone(), basis: None };
    match &cli.command {
        Command::List => list(&ctx),
        Command::Compute { id } => compute(&mut ctx, id),
        Command::Verify { ids } => verify(&mut ctx, ids),
        Command::VerifyAll => verify(&mut ctx, &catalog::ids()),
        Command::Compare { first, second } => compare(&mut ctx, first, second),
        Command::Calibrate => calibrate(&mut ctx, cli.out.as_deref()),
        Command::Export { id } => export_cmd(&mut ctx, id),
        Command::Selftest { cases, seed } => Ok(selftest_cmd(&ctx, *cases, *seed)),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(outcome) => {
            let mut body = outcome.body;
            if !body.ends_with('\n') {
                body.push('\n');
            }
            match &cli.out {
                Some(path) => {
                    if let Err(e) = fs::write(path, &body) {
                        eprintln!("error: cannot write {}: {e}", path.display());
                        return ExitCode::from(2);
                    }
                }
                None => print!("{body}"),
            }
            if outcome.ok {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(1)
            }
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}
