//! Batch CLI over the Chow form engine: degree and generic-locus reports,
//! symbolic or evaluated Chow forms, boundary analysis with
//! Hausdorff/properness verdicts, and the seeded verification suites.
//!
//! Exit codes: 0 success, 1 verification failure, 2 input error.

mod report;

use std::path::PathBuf;
use std::process::ExitCode;
use std::time::Instant;

use clap::{Parser, Subcommand};

use chow_core::check::run_checks;
use chow_core::derivation::AffinePoint;
use chow_core::error::Error;
use chow_core::gamma::{chow_form, chow_form_at};
use chow_core::limits::analyze;
use chow_core::poly::MultiPoly;
use chow_core::rational::parse_rational;
use chow_core::specfile::{bundled, load_path, load_str, Problem};

use report::{AnalyzeReport, CheckCliReport, ChowReport, DegreeReport, LocusGenerator};

const DEFAULT_SEED: u64 = 1;

#[derive(Parser)]
#[command(
    name = "chow",
    about = "Chow forms of additive-group orbit closures, in exact rational arithmetic",
    version
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Degree of the action and the generators of the generic locus
    Degree {
        spec: PathBuf,
        #[arg(long)]
        json: bool,
    },
    /// Chow form of the generic orbit closure, symbolic or at a point
    Chow {
        spec: PathBuf,
        /// Evaluate the coordinate coefficients at `r1,...,rn`
        #[arg(long)]
        at: Option<String>,
        /// Also print the dual-point expansion
        #[arg(long)]
        expand: bool,
        #[arg(long)]
        json: bool,
    },
    /// Restrict to strata, lift through charts, decompose limit cycles
    Analyze {
        spec: PathBuf,
        #[arg(long)]
        json: bool,
    },
    /// Run the verification suites
    Check {
        spec: PathBuf,
        #[arg(long, default_value_t = 100)]
        trials: usize,
        #[arg(long)]
        seed: Option<u64>,
        #[arg(long)]
        json: bool,
    },
    /// Run the bundled example suite end to end
    Examples {
        #[arg(long)]
        json: bool,
    },
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let start = Instant::now();
    let code = match run(cli) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            exit_code_for(&e)
        }
    };
    eprintln!("elapsed: {:.3}s", start.elapsed().as_secs_f64());
    code
}

fn exit_code_for(e: &Error) -> ExitCode {
    match e {
        Error::DecompositionFailed(_)
        | Error::ContentRemovalInsufficient
        | Error::ZeroLift
        | Error::NonDivisible
        | Error::NotInGammaRing(_) => ExitCode::from(1),
        _ => ExitCode::from(2),
    }
}

fn resolve_seed(flag: Option<u64>, spec_seed: Option<u64>) -> u64 {
    if let Ok(v) = std::env::var("CHOW_SEED") {
        if let Ok(parsed) = v.parse() {
            return parsed;
        }
    }
    flag.or(spec_seed).unwrap_or(DEFAULT_SEED)
}

fn run(cli: Cli) -> chow_core::Result<ExitCode> {
    match cli.command {
        Command::Degree { spec, json } => {
            let problem = load_path(&spec)?;
            let r = degree_report(&spec.display().to_string(), &problem);
            emit(&r, r.render(), json);
            Ok(ExitCode::SUCCESS)
        }
        Command::Chow {
            spec,
            at,
            expand,
            json,
        } => {
            let problem = load_path(&spec)?;
            let r = chow_report(&spec.display().to_string(), &problem, at.as_deref(), expand)?;
            emit(&r, r.render(), json);
            Ok(ExitCode::SUCCESS)
        }
        Command::Analyze { spec, json } => {
            let problem = load_path(&spec)?;
            if problem.strata.is_empty() && problem.charts.is_empty() {
                return Err(Error::InvalidSpec(
                    "analyze needs at least one stratum or chart".to_string(),
                ));
            }
            let seed = resolve_seed(None, problem.seed);
            let analysis = analyze(
                &problem.derivation,
                &problem.content_candidates,
                &problem.strata,
                &problem.charts,
                seed,
            )?;
            let r = AnalyzeReport::from_analysis(
                "analyze",
                &spec.display().to_string(),
                problem.derivation.degree(),
                &analysis,
            );
            emit(&r, r.render(), json);
            Ok(ExitCode::SUCCESS)
        }
        Command::Check {
            spec,
            trials,
            seed,
            json,
        } => {
            if trials == 0 {
                return Err(Error::InvalidSpec(
                    "--trials must be at least 1".to_string(),
                ));
            }
            let problem = load_path(&spec)?;
            let seed = resolve_seed(seed, problem.seed);
            let report = run_checks(&problem.derivation, trials, seed)?;
            let r = CheckCliReport::from_report(
                "check",
                &spec.display().to_string(),
                trials,
                seed,
                &report,
            );
            emit(&r, r.render(), json);
            if report.passed() {
                Ok(ExitCode::SUCCESS)
            } else {
                if let Some(first) = report.first_failure() {
                    eprintln!("first failing property: {}: {}", first.name, first.detail);
                }
                Ok(ExitCode::from(1))
            }
        }
        Command::Examples { json } => run_examples(json),
    }
}

fn emit<T: serde::Serialize>(value: &T, text: String, json: bool) {
    if json {
        println!(
            "{}",
            serde_json::to_string_pretty(value).expect("serializable report")
        );
    } else {
        print!("{text}");
    }
}

fn degree_report(spec: &str, problem: &Problem) -> DegreeReport {
    let d = &problem.derivation;
    let deg = d.degree();
    let generic_locus = (1..=d.n())
        .filter(|&j| !d.power(deg, j).is_zero())
        .map(|j| LocusGenerator {
            j,
            top_derivative: d.power(deg, j).canonical_string(),
        })
        .collect();
    DegreeReport {
        command: "degree".to_string(),
        spec: spec.to_string(),
        n: d.n(),
        degree: deg,
        generic_locus,
    }
}

fn chow_report(
    spec: &str,
    problem: &Problem,
    at: Option<&str>,
    expand: bool,
) -> chow_core::Result<ChowReport> {
    let d = &problem.derivation;
    let point = at.map(|text| parse_point(text, d.n())).transpose()?;
    let form = match &point {
        Some(p) => chow_form_at(d, p)?,
        None => chow_form(d)?,
    };
    let (reduced, removed) = if point.is_none() {
        let candidates: Vec<MultiPoly> = problem.content_candidates.clone();
        let (r, rm) = form.poly().content_trial_division(&candidates);
        (r, rm)
    } else {
        (form.poly().clone(), Vec::new())
    };
    let removed_strings: Vec<String> = removed
        .iter()
        .map(|(c, p)| {
            if *p == 1 {
                c.canonical_string()
            } else {
                format!("({})^{p}", c.canonical_string())
            }
        })
        .collect();
    let reduced_form = if removed_strings.is_empty() {
        None
    } else {
        Some(
            chow_core::GammaForm::from_poly(reduced)
                .expect("content removal preserves validity")
                .golden_string(),
        )
    };
    let expanded = if expand {
        Some(form.expand()?.golden_string())
    } else {
        None
    };
    Ok(ChowReport {
        command: "chow".to_string(),
        spec: spec.to_string(),
        degree: d.degree(),
        chow_form: form.golden_string(),
        content_removed: removed_strings,
        reduced_form,
        at: at.map(|s| s.to_string()),
        expanded,
    })
}

fn parse_point(text: &str, n: usize) -> chow_core::Result<AffinePoint> {
    let coords: Vec<_> = text.split(',').collect();
    if coords.len() != n {
        return Err(Error::InvalidSpec(format!(
            "--at expects {n} comma-separated rationals, got {}",
            coords.len()
        )));
    }
    let values = coords
        .iter()
        .map(|c| {
            parse_rational(c).ok_or_else(|| Error::InvalidSpec(format!("malformed rational `{c}`")))
        })
        .collect::<chow_core::Result<Vec<_>>>()?;
    Ok(AffinePoint(values))
}

/// Degree, verification and verdict expectations for the bundled actions.
fn run_examples(json: bool) -> chow_core::Result<ExitCode> {
    #[derive(serde::Serialize)]
    struct ExampleLine {
        name: String,
        passed: bool,
        detail: String,
    }
    let expectations: [(&str, &str, usize, Option<&str>); 4] = [
        ("quadratic_c3", bundled::QUADRATIC_C3, 2, Some("proper")),
        ("proper_c5", bundled::PROPER_C5, 2, Some("proper")),
        (
            "nonhausdorff_c4",
            bundled::NONHAUSDORFF_C4,
            2,
            Some("non-Hausdorff"),
        ),
        ("translation_c2", bundled::TRANSLATION_C2, 1, None),
    ];
    let mut lines = Vec::new();
    let mut all_ok = true;
    for (name, text, want_degree, want_verdict) in expectations {
        let mut pass = true;
        let mut notes = Vec::new();
        let problem = load_str(text)?;
        let d = problem.derivation.degree();
        if d != want_degree {
            pass = false;
            notes.push(format!("degree {d}, expected {want_degree}"));
        } else {
            notes.push(format!("degree {d}"));
        }
        let seed = resolve_seed(None, problem.seed);
        let checks = run_checks(&problem.derivation, 25, seed)?;
        if !checks.passed() {
            pass = false;
            let first = checks.first_failure().unwrap();
            notes.push(format!("check {} failed: {}", first.name, first.detail));
        } else {
            notes.push("all property suites pass".to_string());
        }
        if let Some(want) = want_verdict {
            let analysis = analyze(
                &problem.derivation,
                &problem.content_candidates,
                &problem.strata,
                &problem.charts,
                seed,
            )?;
            if analysis.verdict().starts_with(want) {
                notes.push(format!("verdict: {}", analysis.verdict()));
            } else {
                pass = false;
                notes.push(format!("verdict {}, expected {want}", analysis.verdict()));
            }
            if want == "non-Hausdorff" && analysis.witness_pairs.is_empty() {
                pass = false;
                notes.push("no non-separated pair found".to_string());
            } else {
                for (a, b) in &analysis.witness_pairs {
                    notes.push(format!("non-separated: {{{a}}} and {{{b}}}"));
                }
            }
        }
        all_ok &= pass;
        lines.push(ExampleLine {
            name: name.to_string(),
            passed: pass,
            detail: notes.join("; "),
        });
    }
    if json {
        println!(
            "{}",
            serde_json::to_string_pretty(&lines).expect("serializable")
        );
    } else {
        for l in &lines {
            let tag = if l.passed { "PASS" } else { "FAIL" };
            println!("[{tag}] {}: {}", l.name, l.detail);
        }
        println!("result: {}", if all_ok { "ok" } else { "failed" });
    }
    Ok(if all_ok {
        ExitCode::SUCCESS
    } else {
        ExitCode::from(1)
    })
}
