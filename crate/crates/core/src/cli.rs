//! Command-line front end: argument grammar, literal parsing and the
//! `eval` calculator. `main.rs` only dispatches.

use std::f64::consts::PI;
use std::fs;
use std::io::{self, Write};
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use rand::SeedableRng;

use crate::automorphisms::{fixed_points_affine, AffineAuto};
use crate::error::{Error, Result};
use crate::imaginaries::{
    class_invariant_x, class_invariant_y, ei_failure_certificate, CertificateConfig, Mutation,
    Window, XPair,
};
use crate::moebius::{parse_rational, ProjPoint};
use crate::pregeometry::extract_basis;
use crate::report::VerdictReport;
use crate::sampling;
use crate::structures::{iso_n_to_m, p0, p_m, p_n, MPoint, NPoint};
use crate::suites::{run_suite, Suite, SuiteConfig};

pub const EXIT_PASS: u8 = 0;
pub const EXIT_FAIL: u8 = 1;
pub const EXIT_USAGE: u8 = 2;

#[derive(Debug, Parser)]
#[command(name = "projective-ei", version)]
#[command(about = "Exact checks for the universal cover of (RP^1, P0) and its non-eliminable quotient")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Text,
    Json,
}

#[derive(Debug, Args)]
pub struct Budget {
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[arg(long, default_value_t = 10_000, value_parser = clap::value_parser!(u64).range(1..))]
    pub samples: u64,
}

#[derive(Debug, Subcommand)]
#[allow(clippy::large_enum_variant)]
pub enum Command {
    /// Run a verification suite and write a report.
    Verify {
        #[arg(value_parser = clap::builder::PossibleValuesParser::new(Suite::NAMES))]
        suite: String,
        #[command(flatten)]
        budget: Budget,
        #[arg(long, default_value_t = 1e-9, value_parser = parse_tolerance)]
        tolerance: f64,
        #[arg(long, value_enum, default_value_t = Format::Text)]
        format: Format,
        #[arg(long)]
        output: Option<PathBuf>,
        /// Sub-boxes per side for the openness probe.
        #[arg(long, default_value_t = 50, value_parser = clap::value_parser!(u32).range(2..))]
        grid: u32,
    },
    /// Evaluate a single predicate or invariant.
    Eval {
        #[arg(value_enum)]
        kind: EvalKind,
        #[arg(allow_negative_numbers = true)]
        args: Vec<String>,
        #[arg(long, default_value_t = 1e-9, value_parser = parse_tolerance)]
        tolerance: f64,
    },
    /// Write the non-elimination certificate as JSON.
    Certificate {
        #[command(flatten)]
        budget: Budget,
        #[arg(long)]
        output: Option<PathBuf>,
        /// Test hook: break one step of the argument on purpose.
        #[arg(long, hide = true)]
        mutate: Option<String>,
    },
    /// Basis extraction for imaginaries in the affine-span model.
    Q2 {
        #[command(subcommand)]
        action: Q2Action,
    },
    /// Probes of the quotient topology on X/~.
    Probe {
        #[command(subcommand)]
        target: ProbeTarget,
    },
}

#[derive(Debug, Subcommand)]
pub enum Q2Action {
    /// Extract a basis for a random instance and print the certificate.
    Demo {
        #[arg(long, default_value_t = 4, value_parser = clap::value_parser!(u64).range(1..=8))]
        generators: u64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
}

#[derive(Debug, Subcommand)]
pub enum ProbeTarget {
    Topology {
        #[arg(long, default_value_t = 50, value_parser = clap::value_parser!(u32).range(2..))]
        grid: u32,
        #[arg(long, default_value_t = 1000, value_parser = clap::value_parser!(u64).range(1..))]
        samples: u64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// `x_lo,x_hi,y_lo,y_hi` as rational literals.
        #[arg(long, value_parser = parse_window, allow_hyphen_values = true)]
        window: Option<Window>,
        #[arg(long, value_enum, default_value_t = Format::Text)]
        format: Format,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum EvalKind {
    /// P0 x y1 y2 y3 y4 on points of RP^1 (rationals or `inf`)
    #[value(name = "p0")]
    P0,
    /// P on M; points are `level,point`
    #[value(name = "pM")]
    PM,
    /// P' on N; reals, `pi` multiples allowed
    #[value(name = "pN")]
    PN,
    /// image of one real under N -> M
    #[value(name = "iso")]
    Iso,
    /// class of (x, y) in X, x < y
    #[value(name = "invariantX")]
    InvariantX,
    /// class of (a, b, c) in Y; points are `level,point`
    #[value(name = "invariantY")]
    InvariantY,
    /// fixed points of x -> a*x + b on M, a > 0
    #[value(name = "fixedpoints")]
    FixedPoints,
}

fn parse_tolerance(s: &str) -> std::result::Result<f64, String> {
    match s.parse::<f64>() {
        Ok(t) if t.is_finite() && t > 0.0 => Ok(t),
        _ => Err(format!("tolerance must be a positive number, got `{s}`")),
    }
}

fn parse_window(s: &str) -> std::result::Result<Window, String> {
    let parts: Vec<&str> = s.split(',').collect();
    let [a, b, c, d] = parts.as_slice() else {
        return Err("window needs four comma-separated values".into());
    };
    let q = |t: &str| parse_rational(t).map_err(|e| e.to_string());
    let w = Window::new(q(a)?, q(b)?, q(c)?, q(d)?);
    if w.x_lo >= w.x_hi || w.y_lo >= w.y_hi {
        return Err("window bounds must satisfy lo < hi".into());
    }
    Ok(w)
}

/// A real literal: a decimal, `p/q`, or a multiple of `pi` such as
/// `pi/4`, `-3pi/4` or `2*pi`.
pub fn parse_real(s: &str) -> Result<f64> {
    let t = s.trim();
    let bad = || Error::Parse(format!("invalid real literal `{s}`"));
    let (neg, body) = match t.strip_prefix('-') {
        Some(rest) => (true, rest),
        None => (false, t.strip_prefix('+').unwrap_or(t)),
    };
    let (head, den) = match body.split_once('/') {
        Some((h, d)) => (h, d.trim().parse::<f64>().map_err(|_| bad())?),
        None => (body, 1.0),
    };
    let value = match head.strip_suffix("pi") {
        Some(coef) => {
            let coef = coef.trim().trim_end_matches('*');
            let c = if coef.is_empty() {
                1.0
            } else {
                coef.parse::<f64>().map_err(|_| bad())?
            };
            c * PI
        }
        None => head.trim().parse::<f64>().map_err(|_| bad())?,
    };
    let v = value / den;
    if !v.is_finite() {
        return Err(bad());
    }
    Ok(if neg { -v } else { v })
}

fn arity(kind: EvalKind, args: &[String], n: usize) -> Result<()> {
    if args.len() == n {
        Ok(())
    } else {
        Err(Error::Parse(format!(
            "{kind:?} takes {n} arguments, got {}",
            args.len()
        )))
    }
}

fn four<T>(v: Vec<T>) -> [T; 4] {
    v.try_into().ok().expect("arity checked")
}

/// Evaluates one `eval` request and renders the result.
pub fn eval(kind: EvalKind, args: &[String], tolerance: f64) -> Result<String> {
    match kind {
        EvalKind::P0 => {
            arity(kind, args, 5)?;
            let pts = args
                .iter()
                .map(|a| a.parse::<ProjPoint>())
                .collect::<Result<Vec<_>>>()?;
            let x = pts[0].clone();
            Ok(p0(&x, &four(pts[1..].to_vec())).to_string())
        }
        EvalKind::PM => {
            arity(kind, args, 5)?;
            let pts = args
                .iter()
                .map(|a| a.parse::<MPoint>())
                .collect::<Result<Vec<_>>>()?;
            Ok(p_m(&pts[0], &four(pts[1..].to_vec())).to_string())
        }
        EvalKind::PN => {
            arity(kind, args, 5)?;
            let pts = args
                .iter()
                .map(|a| parse_real(a).map(|v| NPoint::new(v).expect("finite")))
                .collect::<Result<Vec<_>>>()?;
            let v = p_n(pts[0], &four(pts[1..].to_vec()), tolerance);
            Ok(format!("{v} (tolerance {tolerance:e})"))
        }
        EvalKind::Iso => {
            arity(kind, args, 1)?;
            let x = NPoint::new(parse_real(&args[0])?).expect("finite");
            let p = iso_n_to_m(x);
            Ok(match p.point {
                None => p.to_string(),
                Some(_) => format!("{p} (tolerance {tolerance:e})"),
            })
        }
        EvalKind::InvariantX => {
            arity(kind, args, 2)?;
            let pair = XPair::new(parse_rational(&args[0])?, parse_rational(&args[1])?)?;
            Ok(class_invariant_x(&pair).difference().to_string())
        }
        EvalKind::InvariantY => {
            arity(kind, args, 3)?;
            let pts = args
                .iter()
                .map(|a| a.parse::<MPoint>())
                .collect::<Result<Vec<_>>>()?;
            let inv = class_invariant_y(&pts[0], &pts[1], &pts[2])?;
            Ok(format!("{} {}", inv.base, inv.d))
        }
        EvalKind::FixedPoints => {
            arity(kind, args, 2)?;
            let t = AffineAuto::new(parse_rational(&args[0])?, parse_rational(&args[1])?)?;
            Ok(fixed_points_affine(&t).to_string())
        }
    }
}

fn emit(text: &str, output: Option<&Path>) -> io::Result<()> {
    match output {
        Some(path) => fs::write(path, text),
        None => io::stdout().lock().write_all(text.as_bytes()),
    }
}

fn render(report: &VerdictReport, format: Format) -> String {
    match format {
        Format::Text => report.to_text(),
        Format::Json => report.to_json(),
    }
}

fn verdict_code(pass: bool) -> u8 {
    if pass {
        EXIT_PASS
    } else {
        EXIT_FAIL
    }
}

fn io_failure(e: io::Error) -> u8 {
    eprintln!("error: {e}");
    EXIT_USAGE
}

/// Runs a parsed command; returns the process exit code.
pub fn run(cli: Cli) -> u8 {
    match cli.command {
        Command::Verify {
            suite,
            budget,
            tolerance,
            format,
            output,
            grid,
        } => {
            let suite: Suite = suite.parse().expect("clap restricts suite names");
            let cfg = SuiteConfig {
                seed: budget.seed,
                samples: budget.samples,
                tolerance,
                grid,
                ..SuiteConfig::default()
            };
            let report = run_suite(suite, &cfg);
            if let Err(e) = emit(&render(&report, format), output.as_deref()) {
                return io_failure(e);
            }
            verdict_code(report.all_pass())
        }
        Command::Eval {
            kind,
            args,
            tolerance,
        } => match eval(kind, &args, tolerance) {
            Ok(out) => {
                println!("{out}");
                EXIT_PASS
            }
            Err(e) => {
                eprintln!("error: {e}");
                EXIT_USAGE
            }
        },
        Command::Certificate {
            budget,
            output,
            mutate,
        } => {
            let mut cfg = CertificateConfig::new(budget.seed, budget.samples);
            if let Some(name) = mutate {
                match Mutation::from_name(&name) {
                    Some(m) => cfg = cfg.mutated(m),
                    None => {
                        eprintln!("error: unknown mutation `{name}`");
                        return EXIT_USAGE;
                    }
                }
            }
            let cert = ei_failure_certificate(&cfg);
            if let Err(e) = emit(&cert.to_json(), output.as_deref()) {
                return io_failure(e);
            }
            verdict_code(cert.valid)
        }
        Command::Q2 {
            action: Q2Action::Demo { generators, seed },
        } => q2_demo(generators as usize, seed),
        Command::Probe {
            target:
                ProbeTarget::Topology {
                    grid,
                    samples,
                    seed,
                    window,
                    format,
                },
        } => {
            let window = window.unwrap_or_default();
            let mut checks = crate::imaginaries::probe_quotient_openness(grid, &window).checks;
            checks.extend(crate::imaginaries::probe_hausdorff(samples, seed).checks);
            let report = VerdictReport::new("topology", seed, 0.0, checks);
            if let Err(e) = emit(&render(&report, format), None) {
                return io_failure(e);
            }
            verdict_code(report.all_pass())
        }
    }
}

fn q2_demo(generators: usize, seed: u64) -> u8 {
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
    let (x, e) = sampling::q2_instance(&mut rng, generators);
    println!("tuple x:");
    for (i, f) in x.iter().enumerate() {
        println!("  x[{i}] = {f}");
    }
    println!("imaginary e defined by:");
    for f in e.invariants() {
        println!("  {f}");
    }
    match extract_basis(&x, &e) {
        Ok(cert) => {
            println!(
                "{}",
                serde_json::to_string_pretty(&cert).expect("certificate serializes")
            );
            EXIT_PASS
        }
        Err(err) => {
            eprintln!("error: {err}");
            EXIT_FAIL
        }
    }
}
