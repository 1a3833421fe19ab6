//! Exit criteria. Each criterion runs at its stated budget and tolerance and
//! prints one PASS/FAIL line; the target exits nonzero if any criterion fails.

use std::process::Command;
use std::time::{Duration, Instant};

use projective_ei::imaginaries::{ei_failure_certificate, CertificateConfig, Mutation, Window};
use projective_ei::suites::{run_checks, run_suite, Suite, SuiteConfig};
use projective_ei::VerdictReport;

const SEED: u64 = 0;
const BASE_SAMPLES: u64 = 10_000;
const TOLERANCE: f64 = 1e-9;

struct Outcome {
    name: &'static str,
    pass: bool,
    detail: String,
}

fn config() -> SuiteConfig {
    SuiteConfig {
        seed: SEED,
        samples: BASE_SAMPLES,
        tolerance: TOLERANCE,
        grid: 50,
        window: Window::default(),
    }
}

/// Runs `ids`, requiring zero failures, the minimum sample count per id and
/// the wall-clock limit.
fn criterion(
    name: &'static str,
    ids: &[(&str, u64)],
    limit: Duration,
    cfg: &SuiteConfig,
) -> Outcome {
    let start = Instant::now();
    let report = run_checks(&ids.iter().map(|(id, _)| *id).collect::<Vec<_>>(), cfg);
    let elapsed = start.elapsed();
    let mut problems = Vec::new();
    for (id, min_samples) in ids {
        match report.check(id) {
            None => problems.push(format!("{id}: missing")),
            Some(c) if c.failures > 0 => {
                problems.push(format!("{id}: {} failures, e.g. {:?}", c.failures, c.witness))
            }
            Some(c) if c.samples < *min_samples => {
                problems.push(format!("{id}: {} samples < {min_samples}", c.samples))
            }
            Some(_) => {}
        }
    }
    if elapsed > limit {
        problems.push(format!("took {elapsed:?} > {limit:?}"));
    }
    Outcome {
        name,
        pass: problems.is_empty(),
        detail: if problems.is_empty() {
            format!("{} checks, {elapsed:.2?}", ids.len())
        } else {
            problems.join("; ")
        },
    }
}

fn certificate_criterion() -> Outcome {
    let start = Instant::now();
    let cert = ei_failure_certificate(&CertificateConfig::default());
    let mut problems = Vec::new();
    if !cert.valid {
        problems.push(format!("default certificate invalid: {:?}", cert.verdicts));
    }
    for m in Mutation::ALL {
        let mutated = ei_failure_certificate(&CertificateConfig::default().mutated(m));
        let exact = mutated.verdicts.iter().all(|v| v.holds == (v.id != m.target()));
        if mutated.valid || !exact {
            problems.push(format!("mutation {} did not falsify exactly {}", m.name(), m.target()));
        }
    }
    let elapsed = start.elapsed();
    if elapsed > Duration::from_secs(1) {
        problems.push(format!("took {elapsed:?} > 1s"));
    }
    Outcome {
        name: "AC6 non-elimination certificate and mutation suite",
        pass: problems.is_empty(),
        detail: if problems.is_empty() {
            format!("4 verdicts, 4 mutations, {elapsed:.2?}")
        } else {
            problems.join("; ")
        },
    }
}

fn cli_verify_all() -> Vec<u8> {
    let out = Command::new(env!("CARGO_BIN_EXE_projective-ei"))
        .args(["verify", "all", "--seed", "1", "--samples", "1000", "--format", "json"])
        .output()
        .expect("binary runs");
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stdout));
    out.stdout
}

fn determinism_criterion() -> Outcome {
    let first = cli_verify_all();
    let second = cli_verify_all();
    let cfg = SuiteConfig {
        seed: 1,
        samples: 1000,
        ..config()
    };
    let a: VerdictReport = run_suite(Suite::All, &cfg);
    let b: VerdictReport = run_suite(Suite::All, &cfg);
    let same_cli = first == second && !first.is_empty();
    let same_lib = a.to_json() == b.to_json();
    // the binary and the library render the same document
    let same_both = a.to_json().as_bytes() == first.as_slice();
    Outcome {
        name: "AC9 determinism of `verify all`",
        pass: same_cli && same_lib && same_both,
        detail: format!(
            "cli runs identical: {same_cli}, library runs identical: {same_lib}, cli == library: {same_both}"
        ),
    }
}

fn main() {
    let cfg = config();
    let n = BASE_SAMPLES;
    let outcomes = vec![
        criterion(
            "AC1 P0 is independent of the chosen transformation",
            &[("p0_well_defined", n)],
            Duration::from_secs(5),
            &cfg,
        ),
        criterion(
            "AC2 cot conjugation: exact identity and trig cross-check",
            &[("cot_conjugation_exact", n / 10), ("cot_conjugation_float", n / 100)],
            Duration::from_secs(5),
            &cfg,
        ),
        criterion(
            "AC3 N to M isomorphism transports order and predicate",
            &[("iso_order_transport", n / 10), ("iso_predicate_transport", n / 10)],
            Duration::from_secs(10),
            &cfg,
        ),
        criterion(
            "AC4 automorphism families preserve <, succ and the 5-ary predicate",
            &[
                ("proto_affine_affine_map", n),
                ("proto_affine_inversion", n),
                ("proto_affine_random_maps", n),
                ("affine_m_automorphism", n),
                ("translate_n_automorphism", n),
                ("transitive_n", n),
                ("tau_doubled_automorphism", n),
                ("fixed_point_containment", n),
                ("copy2_orbit_transitive", n / 10),
            ],
            Duration::from_secs(30),
            &cfg,
        ),
        criterion(
            "AC5 ~ is an equivalence with a complete, equivariant invariant",
            &[
                ("sim_equivalence_relation", n / 10),
                ("sim_matches_invariant", n),
                ("class_equivariance", n),
            ],
            Duration::from_secs(10),
            &cfg,
        ),
        certificate_criterion(),
        criterion(
            "AC7 basis extraction certificates, rank oracle, closure axioms",
            &[
                ("q2_certificates", n / 10),
                ("rank_matches_oracle", n / 10),
                ("closure_exchange", n / 10),
                ("closure_monotone", n / 10),
                ("closure_idempotent", n / 10),
            ],
            Duration::from_secs(30),
            &cfg,
        ),
        criterion(
            "AC8 quotient openness on a 50x50 grid and Hausdorff separation",
            &[("quotient_openness", 2500), ("hausdorff_separation", n / 20)],
            Duration::from_secs(10),
            &cfg,
        ),
        determinism_criterion(),
    ];

    for o in &outcomes {
        println!("[{}] {} ({})", if o.pass { "PASS" } else { "FAIL" }, o.name, o.detail);
    }
    let failed = outcomes.iter().filter(|o| !o.pass).count();
    println!("{}/{} criteria passed", outcomes.len() - failed, outcomes.len());
    if failed > 0 {
        std::process::exit(1);
    }
}
