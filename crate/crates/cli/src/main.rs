use std::fmt::Display;
use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::{Instant, SystemTime, UNIX_EPOCH};

use clap::{Parser, Subcommand};
use num_bigint::BigInt;
use num_traits::One;
use serde_json::json;

use pib_core::families::{FamilyId, FamilyInstance};
use pib_core::pipeline::{self, ReduceReport, SearchBounds, SweepConfig, TOOL_VERSION};
use pib_core::{ElementTriple, Error, QuarticPoly, ReductionProblem};

const EXIT_USAGE: u8 = 2;
const EXIT_MISMATCH: u8 = 3;
const EXIT_IO: u8 = 4;

#[derive(Parser)]
#[command(name = "pib", version, about = "Generators of power integral bases in quartic fields")]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Print a family polynomial and its monogenicity condition.
    Generate {
        #[arg(long)]
        family: FamilyId,
        #[arg(long, allow_hyphen_values = true)]
        t: BigInt,
    },
    /// Run the full pipeline over a range of t and write a report.
    Sweep {
        #[arg(long)]
        family: FamilyId,
        #[arg(long, allow_hyphen_values = true)]
        t_min: i64,
        #[arg(long, allow_hyphen_values = true)]
        t_max: i64,
        /// Search box for equations without an exact method.
        #[arg(long, default_value_t = 100)]
        bound: u64,
        /// Separate box for the cubic resolvent equation (defaults to --bound).
        #[arg(long)]
        cubic_bound: Option<u64>,
        /// Report path; stdout when absent.
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long)]
        threads: Option<usize>,
    },
    /// Check one element against both index routes.
    Verify {
        #[arg(long)]
        family: FamilyId,
        #[arg(long, allow_hyphen_values = true)]
        t: BigInt,
        /// Coordinates `c1,c2,c3` of c1*xi + c2*xi^2 + c3*xi^3.
        #[arg(long, allow_hyphen_values = true, value_parser = parse_triple)]
        triple: ElementTriple,
    },
    /// Run the generic reduction on x^4 + a1 x^3 + a2 x^2 + a3 x + a4.
    Reduce {
        #[arg(allow_negative_numbers = true, num_args = 4, value_names = ["A1", "A2", "A3", "A4"])]
        coeffs: Vec<BigInt>,
        #[arg(long, default_value = "1")]
        m: BigInt,
        #[arg(long, default_value = "1")]
        d: BigInt,
        #[arg(long, default_value = "1")]
        n: BigInt,
        #[arg(long, default_value_t = 100)]
        bound: u64,
        /// Also write the JSON report here.
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

fn parse_triple(s: &str) -> Result<ElementTriple, String> {
    let parts: Vec<&str> = s.trim_matches(|c| c == '(' || c == ')').split(',').map(str::trim).collect();
    if parts.len() != 3 {
        return Err(format!("expected three comma-separated integers, got {s:?}"));
    }
    let mut c = parts.iter().map(|p| p.parse::<BigInt>().map_err(|e| format!("{p:?}: {e}")));
    Ok(ElementTriple::new(c.next().unwrap()?, c.next().unwrap()?, c.next().unwrap()?))
}

fn fail(code: u8, msg: impl Display) -> ExitCode {
    eprintln!("pib: {msg}");
    ExitCode::from(code)
}

fn exit_for(e: &Error) -> u8 {
    match e {
        Error::RouteDisagreement { .. } | Error::Internal(_) => EXIT_MISMATCH,
        _ => EXIT_USAGE,
    }
}

fn write_file(path: &Path, body: &str) -> Result<(), ExitCode> {
    fs::write(path, body).map_err(|e| fail(EXIT_IO, format!("cannot write {}: {e}", path.display())))
}

fn meta_path(out: &Path) -> PathBuf {
    let mut s = out.as_os_str().to_owned();
    s.push(".meta.json");
    PathBuf::from(s)
}

fn list<T: Display>(items: &[T]) -> String {
    let v: Vec<String> = items.iter().map(ToString::to_string).collect();
    format!("[{}]", v.join(", "))
}

fn cmd_generate(family: FamilyId, t: BigInt) -> ExitCode {
    let inst = FamilyInstance::new(family, t);
    println!("family {} ({}), t = {}", inst.id, inst.id.galois_group(), inst.t);
    println!("polynomial {}", inst.f);
    println!("coefficients {}", list(&inst.f.coeffs()));
    println!("witnesses {}", list(&inst.monogenicity.witnesses));
    if let Some(d) = &inst.monogenicity.diagnostic {
        println!("diagnostic {d}");
    }
    println!("monogenic {}", inst.monogenic());
    ExitCode::SUCCESS
}

fn cmd_sweep(cfg: SweepConfig, out: Option<PathBuf>) -> ExitCode {
    let started = SystemTime::now().duration_since(UNIX_EPOCH).map(|d| d.as_secs()).unwrap_or(0);
    let clock = Instant::now();
    let report = match pipeline::sweep(&cfg) {
        Ok(r) => r,
        Err(e) => return fail(exit_for(&e), e),
    };
    let body = report.to_json();
    match &out {
        Some(path) => {
            if let Err(code) = write_file(path, &body) {
                return code;
            }
            let meta = json!({
                "tool_version": TOOL_VERSION,
                "started_unix": started,
                "elapsed_seconds": clock.elapsed().as_secs_f64(),
                "threads": cfg.threads.unwrap_or_else(rayon::current_num_threads),
            });
            let meta = serde_json::to_string_pretty(&meta).expect("meta serializes") + "\n";
            if let Err(code) = write_file(&meta_path(path), &meta) {
                return code;
            }
        }
        None => print!("{body}"),
    }
    let s = report.summary;
    eprintln!(
        "{} t in [{}, {}]: {} instances, {} monogenic, {} matched, {} mismatched, {} errors, {} exhaustive",
        report.family, cfg.t_min, cfg.t_max, s.instances, s.monogenic, s.matched, s.mismatched, s.errors, s.exhaustive
    );
    for r in report.records.iter().filter(|r| !r.ok()) {
        match (&r.error, &r.catalog_match) {
            (Some(e), _) => eprintln!("  t = {}: {} ({})", r.t, e.message, e.kind),
            (None, Some(m)) => eprintln!("  t = {}: missing {}, unexpected {}", r.t, list(&m.missing), list(&m.unexpected)),
            (None, None) => {}
        }
    }
    if report.all_match() {
        ExitCode::SUCCESS
    } else {
        ExitCode::from(EXIT_MISMATCH)
    }
}

fn cmd_verify(family: FamilyId, t: BigInt, triple: ElementTriple) -> ExitCode {
    let inst = FamilyInstance::new(family, t);
    if !inst.f.is_irreducible() {
        return fail(EXIT_USAGE, format!("{} is reducible", inst.f));
    }
    let v = match pipeline::verify_triple(&inst, &triple) {
        Ok(v) => v,
        Err(e) => return fail(exit_for(&e), e),
    };
    println!("family {}, t = {}, monogenic {}", v.family, v.t, v.monogenic);
    println!("element {} (canonical {})", v.triple, v.canonical);
    println!("index form |F(Q1, Q2)| = {}", v.form_value);
    match &v.oracle_index {
        Some(i) => println!("discriminant ratio index = {i}"),
        None => println!("discriminant ratio: element does not generate the field"),
    }
    if !v.monogenic {
        println!("note: not monogenic, indices are relative to Z[xi]");
    }
    if !v.routes_agree {
        println!("routes disagree");
        return ExitCode::from(EXIT_MISMATCH);
    }
    println!("generator {}", v.generator());
    ExitCode::SUCCESS
}

fn print_reduce(rep: &ReduceReport) {
    println!("f = {}", rep.f);
    println!("m = {}, d = {}, n = {}, i_m = {}", rep.m, rep.d, rep.n, rep.i_m);
    println!("F(u, v) = {}", rep.resolvent);
    println!("Q1 = {}", rep.q1);
    println!("Q2 = {}", rep.q2);
    let cubic = &rep.cubic_solutions;
    let pairs: Vec<String> = cubic.solutions().iter().map(|(u, v)| format!("({u}, {v})")).collect();
    println!("F(u, v) = ±{}: {} [{}]", rep.i_m, list(&pairs), cubic.completeness());
    for b in &rep.branches {
        println!("branch (u, v) = ({}, {})", b.u, b.v);
        println!("  Q0 = {}", b.conic);
        println!("  zero {}", list(&b.conic_zero));
        for (name, f) in ["x", "y", "z"].iter().zip(&b.parametrization) {
            println!("  k{name} = {f}");
        }
        match &b.k_quotient {
            Some(k) => println!("  k divides {k}"),
            None => println!("  no integral k bound"),
        }
        println!("  F1 = {}", b.f1);
        println!("  F2 = {}", b.f2);
        let pairs: Vec<String> = b.solutions.pairs.iter().map(|(p, q)| format!("({p}, {q})")).collect();
        println!("  (p, q): {} [{}]", list(&pairs), b.solutions.completeness);
        println!("  triples {}", list(&b.triples));
    }
    for g in &rep.generators {
        let idx = g.oracle_index.as_ref().map_or("none".to_string(), ToString::to_string);
        println!(
            "element {}: |F(Q1, Q2)| = {}, discriminant ratio index {}, confirmed {}",
            g.triple, g.form_value, idx, g.oracle_confirmed
        );
    }
    println!("exhaustive {}", rep.exhaustive);
}

fn cmd_reduce(coeffs: Vec<BigInt>, m: BigInt, d: BigInt, n: BigInt, bound: u64, out: Option<PathBuf>) -> ExitCode {
    let [a1, a2, a3, a4]: [BigInt; 4] = match coeffs.try_into() {
        Ok(c) => c,
        Err(_) => return fail(EXIT_USAGE, "expected four coefficients"),
    };
    let f = QuarticPoly::new(a1, a2, a3, a4);
    let prob = match ReductionProblem::new(f, m, d, n) {
        Ok(p) => p,
        Err(e) => return fail(EXIT_USAGE, e),
    };
    let rep = match pipeline::reduce(&prob, SearchBounds::uniform(bound)) {
        Ok(r) => r,
        Err(e) => return fail(exit_for(&e), e),
    };
    print_reduce(&rep);
    if let Some(path) = out {
        if let Err(code) = write_file(&path, &rep.to_json()) {
            return code;
        }
    }
    if rep.generators.iter().all(|g| g.oracle_confirmed || !rep.i_m.is_one()) {
        ExitCode::SUCCESS
    } else {
        ExitCode::from(EXIT_MISMATCH)
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match cli.cmd {
        Cmd::Generate { family, t } => cmd_generate(family, t),
        Cmd::Sweep { family, t_min, t_max, bound, cubic_bound, out, threads } => {
            if t_min > t_max {
                return fail(EXIT_USAGE, format!("--t-min {t_min} exceeds --t-max {t_max}"));
            }
            let bounds = SearchBounds { cubic: cubic_bound.unwrap_or(bound), quartic: bound };
            cmd_sweep(SweepConfig { family, t_min, t_max, bounds, threads }, out)
        }
        Cmd::Verify { family, t, triple } => cmd_verify(family, t, triple),
        Cmd::Reduce { coeffs, m, d, n, bound, out } => cmd_reduce(coeffs, m, d, n, bound, out),
    }
}
