//! Property suites behind `verify`. Every check draws from its own seeded
//! stream, so results do not depend on scheduling, and the report sorts
//! checks by id.
//!
//! Budgets scale from the base sample count `n`: most checks use `n`, the
//! heavier ones `n / 10`, and the floating-point trig cross-check `n / 100`.

use std::f64::consts::PI;
use std::fmt;
use std::str::FromStr;

use num_traits::{One, Zero};
use rand::Rng;
use rayon::prelude::*;

use crate::automorphisms::{
    apply_affine_m, apply_doubled, fixed_points_affine, p0_automorphism_check, tau_doubled,
    transitivity_shift, translate_n, AffineAuto,
};
use crate::imaginaries::{
    apply_tau_pair, approx_equiv_y, class_invariant_x, class_invariant_y, ei_failure_certificate,
    hausdorff_check, openness_check, sim_equiv, tau_action_on_class, CertificateConfig, Mutation,
    Window, XPair, YTriple,
};
use crate::moebius::{canonical_to_infinity, cot_conjugation_map, MoebiusMap, ProjPoint};
use crate::pregeometry::{
    certificate_postconditions, closure_member, extract_basis, rank, rank_oracle, AffineForm,
};
use crate::report::{Check, Tally, VerdictReport};
use crate::sampling::{self, scaled};
use crate::structures::{
    cot, embed, iso_m_to_n, iso_n_to_m, p0, p_m, p_m_approx, p_mm, p_n, point_above,
    solve_p0_fiber, CopyIndex, MMPoint, MPoint, NPoint,
};
use crate::{int, rat, Error, Rational};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Suite {
    All,
    Moebius,
    P0,
    Structures,
    Automorphisms,
    Imaginaries,
    Pregeometry,
    Topology,
}

impl Suite {
    pub const NAMES: [&'static str; 8] = [
        "all",
        "moebius",
        "p0",
        "structures",
        "automorphisms",
        "imaginaries",
        "pregeometry",
        "topology",
    ];

    pub fn name(self) -> &'static str {
        match self {
            Suite::All => "all",
            Suite::Moebius => "moebius",
            Suite::P0 => "p0",
            Suite::Structures => "structures",
            Suite::Automorphisms => "automorphisms",
            Suite::Imaginaries => "imaginaries",
            Suite::Pregeometry => "pregeometry",
            Suite::Topology => "topology",
        }
    }
}

impl fmt::Display for Suite {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Suite {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self, Error> {
        Ok(match s {
            "all" => Suite::All,
            "moebius" => Suite::Moebius,
            "p0" => Suite::P0,
            "structures" => Suite::Structures,
            "automorphisms" => Suite::Automorphisms,
            "imaginaries" => Suite::Imaginaries,
            "pregeometry" => Suite::Pregeometry,
            "topology" => Suite::Topology,
            other => return Err(Error::Parse(format!("unknown suite `{other}`"))),
        })
    }
}

#[derive(Debug, Clone)]
pub struct SuiteConfig {
    pub seed: u64,
    pub samples: u64,
    pub tolerance: f64,
    pub grid: u32,
    pub window: Window,
}

impl Default for SuiteConfig {
    fn default() -> Self {
        SuiteConfig {
            seed: 0,
            samples: 10_000,
            tolerance: 1e-9,
            grid: 50,
            window: Window::default(),
        }
    }
}

type CheckFn = fn(&SuiteConfig) -> Check;

/// Every check by suite and id.
const REGISTRY: &[(Suite, &str, CheckFn)] = &[
    (Suite::Moebius, "moebius_group_laws", moebius_group_laws),
    (Suite::Moebius, "moebius_action_compatibility", moebius_action_compatibility),
    (Suite::Moebius, "moebius_affine_stabilizer", moebius_affine_stabilizer),
    (Suite::Moebius, "moebius_canonical_scalar", moebius_canonical_scalar),
    (Suite::Moebius, "cot_conjugation_exact", cot_conjugation_exact),
    (Suite::Moebius, "cot_conjugation_float", cot_conjugation_float),
    (Suite::P0, "p0_well_defined", p0_well_defined),
    (Suite::P0, "p0_fiber_unique", p0_fiber_unique),
    (Suite::Structures, "m_succ_order_automorphism", m_succ_order_automorphism),
    (Suite::Structures, "iso_order_transport", iso_order_transport),
    (Suite::Structures, "iso_predicate_transport", iso_predicate_transport),
    (Suite::Structures, "embed_atomic", embed_atomic),
    (Suite::Automorphisms, "proto_affine_affine_map", proto_affine_affine_map),
    (Suite::Automorphisms, "proto_affine_inversion", proto_affine_inversion),
    (Suite::Automorphisms, "proto_affine_random_maps", proto_affine_random_maps),
    (Suite::Automorphisms, "affine_m_automorphism", affine_m_automorphism),
    (Suite::Automorphisms, "translate_n_automorphism", translate_n_automorphism),
    (Suite::Automorphisms, "transitive_n", transitive_n),
    (Suite::Automorphisms, "tau_doubled_automorphism", tau_doubled_automorphism),
    (Suite::Automorphisms, "fixed_point_containment", fixed_point_containment),
    (Suite::Automorphisms, "copy2_orbit_transitive", copy2_orbit_transitive),
    (Suite::Imaginaries, "sim_equivalence_relation", sim_equivalence_relation),
    (Suite::Imaginaries, "sim_matches_invariant", sim_matches_invariant),
    (Suite::Imaginaries, "class_equivariance", class_equivariance),
    (Suite::Imaginaries, "y_quotient_invariant", y_quotient_invariant),
    (Suite::Imaginaries, "ei_failure_certificate", ei_certificate_check),
    (Suite::Imaginaries, "ei_certificate_mutations", ei_certificate_mutations),
    (Suite::Pregeometry, "q2_certificates", q2_certificates),
    (Suite::Pregeometry, "rank_matches_oracle", rank_matches_oracle),
    (Suite::Pregeometry, "closure_exchange", closure_exchange),
    (Suite::Pregeometry, "closure_monotone", closure_monotone),
    (Suite::Pregeometry, "closure_idempotent", closure_idempotent),
    (Suite::Topology, "quotient_openness", quotient_openness),
    (Suite::Topology, "hausdorff_separation", hausdorff_separation),
];

/// Ids of the checks a suite runs.
pub fn check_ids(suite: Suite) -> Vec<&'static str> {
    REGISTRY
        .iter()
        .filter(|(s, _, _)| suite == Suite::All || *s == suite)
        .map(|(_, id, _)| *id)
        .collect()
}

fn run_ids(name: &str, ids: &[&str], cfg: &SuiteConfig) -> VerdictReport {
    let fns: Vec<CheckFn> = ids
        .iter()
        .filter_map(|id| REGISTRY.iter().find(|(_, r, _)| r == id).map(|(_, _, f)| *f))
        .collect();
    let checks: Vec<Check> = fns.par_iter().map(|f| f(cfg)).collect();
    VerdictReport::new(name, cfg.seed, cfg.tolerance, checks)
}

pub fn run_suite(suite: Suite, cfg: &SuiteConfig) -> VerdictReport {
    run_ids(suite.name(), &check_ids(suite), cfg)
}

/// Runs the named checks only; unknown ids are skipped.
pub fn run_checks(ids: &[&str], cfg: &SuiteConfig) -> VerdictReport {
    run_ids("custom", ids, cfg)
}

fn show4<T: fmt::Display>(v: &[T; 4]) -> String {
    format!("({}, {}, {}, {})", v[0], v[1], v[2], v[3])
}

// ---------------------------------------------------------------- moebius

fn moebius_group_laws(cfg: &SuiteConfig) -> Check {
    let id = "moebius_group_laws";
    let mut rng = sampling::rng_for(cfg.seed, id);
    let mut t = Tally::new(id, "def:moebius");
    let e = MoebiusMap::identity();
    for _ in 0..cfg.samples {
        let [a, b, c] = [0; 3].map(|_| sampling::moebius(&mut rng));
        let assoc = a.compose(&b).compose(&c) == a.compose(&b.compose(&c));
        let neutral = e.compose(&a) == a && a.compose(&e) == a;
        let inverse = a.compose(&a.inverse()) == e && a.inverse().compose(&a) == e;
        t.record(assoc && neutral && inverse, || format!("a={a} b={b} c={c}"));
    }
    t.finish()
}

fn moebius_action_compatibility(cfg: &SuiteConfig) -> Check {
    let id = "moebius_action_compatibility";
    let mut rng = sampling::rng_for(cfg.seed, id);
    let mut t = Tally::new(id, "def:moebius");
    for _ in 0..cfg.samples {
        let m1 = sampling::moebius(&mut rng);
        let m2 = sampling::moebius(&mut rng);
        let p = sampling::proj_point(&mut rng);
        let ok = m1.compose(&m2).apply(&p) == m1.apply(&m2.apply(&p));
        t.record(ok, || format!("m1={m1} m2={m2} p={p}"));
    }
    t.finish()
}

fn moebius_affine_stabilizer(cfg: &SuiteConfig) -> Check {
    let id = "moebius_affine_stabilizer";
    let mut rng = sampling::rng_for(cfg.seed, id);
    let mut t = Tally::new(id, "def:moebius");
    for _ in 0..cfg.samples {
        let m = if rng.gen_bool(0.5) {
            MoebiusMap::affine(sampling::nonzero_rational(&mut rng), sampling::rational(&mut rng))
                .expect("a != 0")
        } else {
            sampling::moebius(&mut rng)
        };
        let ok = m.is_affine() == (m.apply(&ProjPoint::Infinity) == ProjPoint::Infinity);
        t.record(ok, || format!("m={m}"));
    }
    t.finish()
}

fn moebius_canonical_scalar(cfg: &SuiteConfig) -> Check {
    let id = "moebius_canonical_scalar";
    let mut rng = sampling::rng_for(cfg.seed, id);
    let mut t = Tally::new(id, "def:moebius");
    for _ in 0..cfg.samples {
        let m = sampling::moebius(&mut rng);
        let s = sampling::nonzero_rational(&mut rng);
        let [a, b, c, d] = m.raw_scaled(&s);
        let scaled = MoebiusMap::new(a, b, c, d).expect("nonsingular");
        t.record(scaled == m, || format!("m={m} s={s}"));
    }
    t.finish()
}

/// With `c = cot(alpha)` and `u = -cot(x)`, the addition formula
/// `cot(x - alpha) = (cot x cot alpha + 1) / (cot alpha - cot x)` evaluated
/// directly must match the map, which must also factor as
/// `affine ∘ canonical_to_infinity(-c)`.
fn cot_conjugation_exact(cfg: &SuiteConfig) -> Check {
    let id = "cot_conjugation_exact";
    let mut rng = sampling::rng_for(cfg.seed, id);
    let mut t = Tally::new(id, "remark:cot");
    for _ in 0..scaled(cfg.samples, 10) {
        let c = sampling::rational(&mut rng);
        let u = sampling::proj_point(&mut rng);
        let g = cot_conjugation_map(&c);
        let minus_c = ProjPoint::Real(-c.clone());
        let expected = match &u {
            // x a multiple of pi: cot(x - alpha) = cot(-alpha) = -c
            ProjPoint::Infinity => ProjPoint::Real(-c.clone()),
            ProjPoint::Real(u) => {
                let cot_x = -u;
                let den = &c - &cot_x;
                if den.is_zero() {
                    ProjPoint::Infinity
                } else {
                    ProjPoint::Real((&cot_x * &c + Rational::one()) / den)
                }
            }
        };
        let pole = g.apply(&minus_c) == ProjPoint::Infinity;
        let factors = g.compose(&canonical_to_infinity(&minus_c).inverse()).is_affine();
        let ok = g.apply(&u) == expected && pole && factors;
        t.record(ok, || format!("c={c} u={u} got {} want {expected}", g.apply(&u)));
    }
    t.finish()
}

fn cot_conjugation_float(cfg: &SuiteConfig) -> Check {
    let id = "cot_conjugation_float";
    let mut rng = sampling::rng_for(cfg.seed, id);
    let mut t = Tally::new(id, "remark:cot");
    let mut done = 0;
    while done < scaled(cfg.samples, 100) {
        let alpha: f64 = rng.gen_range(-PI..PI);
        let x: f64 = rng.gen_range(-PI..PI);
        // stay clear of the poles of all three cotangents
        if [alpha, x, x - alpha].iter().any(|v| v.sin().abs() < 1e-3) {
            continue;
        }
        done += 1;
        let c = Rational::from_float(cot(alpha)).expect("finite");
        let g = cot_conjugation_map(&c);
        let want = cot(x - alpha);
        let got = g.apply_f64(Some(-cot(x))).unwrap_or(f64::INFINITY);
        let ok = (got - want).abs() <= cfg.tolerance * want.abs().max(1.0);
        t.record(ok, || format!("alpha={alpha} x={x} got={got} want={want}"));
    }
    t.finish()
}

// ---------------------------------------------------------------- p0

fn p0_well_defined(cfg: &SuiteConfig) -> Check {
    let id = "p0_well_defined";
    let mut rng = sampling::rng_for(cfg.seed, id);
    let mut t = Tally::new(id, "def:P0");
    for _ in 0..cfg.samples {
        let (x, ys) = sampling::p0_instance(&mut rng);
        let h = sampling::affine_auto(&mut rng).to_moebius();
        let hf = h.compose(&canonical_to_infinity(&x));
        let v = ys.each_ref().map(|y| hf.apply(y).as_real().cloned().expect("finite"));
        let through_h = !ys.contains(&x) && &v[0] - &v[1] == &v[2] - &v[3];
        let direct = p0(&x, &ys);
        t.record(direct == through_h, || format!("x={x} y={} h={h}", show4(&ys)));
    }
    t.finish()
}

fn p0_fiber_unique(cfg: &SuiteConfig) -> Check {
    let id = "p0_fiber_unique";
    let mut rng = sampling::rng_for(cfg.seed, id);
    let mut t = Tally::new(id, "lemma:proto-o-minimality");
    let deltas = [rat(1, 1), rat(-1, 1), rat(1, 7), rat(-1, 7)];
    let mut done = 0;
    while done < scaled(cfg.samples, 10) {
        let x = sampling::proj_point(&mut rng);
        let [y2, y3, y4] = [0; 3].map(|_| sampling::proj_point_except(&mut rng, &x));
        let y1 = match solve_p0_fiber(&x, &y2, &y3, &y4) {
            Ok(ProjPoint::Real(q)) => q,
            // a solution at infinity has no additive perturbation
            Ok(ProjPoint::Infinity) => continue,
            Err(e) => {
                done += 1;
                t.record(false, || format!("x={x}: {e}"));
                continue;
            }
        };
        done += 1;
        let holds = |q: &Rational| {
            p0(&x, &[ProjPoint::Real(q.clone()), y2.clone(), y3.clone(), y4.clone()])
        };
        let ok = holds(&y1) && deltas.iter().all(|d| !holds(&(&y1 + d)));
        t.record(ok, || format!("x={x} y1={y1} y2={y2} y3={y3} y4={y4}"));
    }
    t.finish()
}

// ---------------------------------------------------------------- structures

fn m_succ_order_automorphism(cfg: &SuiteConfig) -> Check {
    let id = "m_succ_order_automorphism";
    let mut rng = sampling::rng_for(cfg.seed, id);
    let mut t = Tally::new(id, "def:M");
    for _ in 0..cfg.samples {
        let p = sampling::mpoint(&mut rng);
        let q = sampling::mpoint(&mut rng);
        let (x, ys) = sampling::m_instance(&mut rng);
        let order = (p < q) == (p.succ() < q.succ()) && p.succ().pred() == p;
        let sx = x.succ();
        let sys = ys.each_ref().map(MPoint::succ);
        let between = |x: &MPoint, ys: &[MPoint; 4]| ys.iter().all(|y| x < y && y < &x.succ());
        let interval = between(&x, &ys) == between(&sx, &sys);
        let pred = p_m(&x, &ys) == p_m(&sx, &sys);
        t.record(order && interval && pred, || {
            format!("p={p} q={q} x={x} y={}", show4(&ys))
        });
    }
    t.finish()
}

fn iso_order_transport(cfg: &SuiteConfig) -> Check {
    let id = "iso_order_transport";
    let mut rng = sampling::rng_for(cfg.seed, id);
    let mut t = Tally::new(id, "remark:iso-N-M");
    for _ in 0..scaled(cfg.samples, 10) {
        let x = sampling::n_point(&mut rng);
        let y = sampling::n_point(&mut rng);
        let (ix, iy) = (iso_n_to_m(x), iso_n_to_m(y));
        let shifted = iso_n_to_m(x.succ());
        let succ = shifted.level == ix.succ().level && same_coordinate(shifted.point, ix.point, cfg.tolerance);
        let ok = (x.value() < y.value()) == ix.lt(&iy) && succ;
        t.record(ok, || format!("x={} y={} -> {ix} {iy}", x.value(), y.value()));
    }
    t.finish()
}

fn iso_predicate_transport(cfg: &SuiteConfig) -> Check {
    let id = "iso_predicate_transport";
    let mut rng = sampling::rng_for(cfg.seed, id);
    let mut t = Tally::new(id, "remark:iso-N-M");
    for _ in 0..scaled(cfg.samples, 10) {
        let (x, ys) = sampling::n_instance(&mut rng);
        let in_n = p_n(x, &ys, cfg.tolerance);
        let in_m = p_m_approx(&iso_n_to_m(x), &ys.map(iso_n_to_m), cfg.tolerance);
        t.record(in_n == in_m, || {
            format!(
                "x={} y={:?} N={in_n} M={in_m}",
                x.value(),
                ys.map(NPoint::value)
            )
        });
    }
    t.finish()
}

fn embed_atomic(cfg: &SuiteConfig) -> Check {
    let id = "embed_atomic";
    let mut rng = sampling::rng_for(cfg.seed, id);
    let mut t = Tally::new(id, "cor:doubled");
    for _ in 0..cfg.samples {
        let copy = if rng.gen_bool(0.5) {
            CopyIndex::First
        } else {
            CopyIndex::Second
        };
        let p = sampling::mpoint(&mut rng);
        let q = sampling::mpoint(&mut rng);
        let (x, ys) = sampling::m_instance(&mut rng);
        let e = |p: &MPoint| embed(copy, p.clone());
        let order = (p < q) == (e(&p) < e(&q)) && (p == q) == (e(&p) == e(&q));
        let succ = e(&p.succ()) == e(&p).succ();
        let pred = p_m(&x, &ys) == p_mm(&e(&x), &ys.each_ref().map(e));
        let cross = embed(CopyIndex::First, p.clone()) < embed(CopyIndex::Second, q.clone());
        let mut mixed = ys.each_ref().map(e);
        let other = match copy {
            CopyIndex::First => CopyIndex::Second,
            CopyIndex::Second => CopyIndex::First,
        };
        mixed[rng.gen_range(0..4)].copy = other;
        let mixed_false = !p_mm(&e(&x), &mixed);
        t.record(order && succ && pred && cross && mixed_false, || {
            format!("copy={copy:?} p={p} q={q} x={x} y={}", show4(&ys))
        });
    }
    t.finish()
}

// ---------------------------------------------------------------- automorphisms

fn proto_affine_affine_map(cfg: &SuiteConfig) -> Check {
    let g = MoebiusMap::affine(int(2), int(3)).expect("nonsingular");
    p0_automorphism_check("proto_affine_affine_map", &g, cfg.samples, cfg.seed)
}

fn proto_affine_inversion(cfg: &SuiteConfig) -> Check {
    let g = MoebiusMap::new(int(0), int(1), int(1), int(0)).expect("nonsingular");
    p0_automorphism_check("proto_affine_inversion", &g, cfg.samples, cfg.seed)
}

fn proto_affine_random_maps(cfg: &SuiteConfig) -> Check {
    let id = "proto_affine_random_maps";
    let mut rng = sampling::rng_for(cfg.seed, id);
    let mut t = Tally::new(id, "remark:proto-affine");
    for _ in 0..cfg.samples {
        let g = sampling::moebius(&mut rng);
        let (x, ys) = sampling::p0_instance(&mut rng);
        let ok = p0(&x, &ys) == p0(&g.apply(&x), &ys.each_ref().map(|y| g.apply(y)));
        t.record(ok, || format!("g={g} x={x} y={}", show4(&ys)));
    }
    t.finish()
}

fn affine_m_automorphism(cfg: &SuiteConfig) -> Check {
    let id = "affine_m_automorphism";
    let mut rng = sampling::rng_for(cfg.seed, id);
    let mut t = Tally::new(id, "remark:affine");
    for _ in 0..cfg.samples {
        let tau = sampling::affine_auto(&mut rng);
        let p = sampling::mpoint(&mut rng);
        let q = sampling::mpoint(&mut rng);
        let (x, ys) = sampling::m_instance(&mut rng);
        let f = |p: &MPoint| apply_affine_m(&tau, p);
        let order = (p < q) == (f(&p) < f(&q));
        let succ = f(&p.succ()) == f(&p).succ();
        let pred = p_m(&x, &ys) == p_m(&f(&x), &ys.each_ref().map(f));
        t.record(order && succ && pred, || {
            format!("{tau} p={p} q={q} x={x} y={}", show4(&ys))
        });
    }
    t.finish()
}

fn translate_n_automorphism(cfg: &SuiteConfig) -> Check {
    let id = "translate_n_automorphism";
    let mut rng = sampling::rng_for(cfg.seed, id);
    let mut t = Tally::new(id, "remark:transitive");
    for _ in 0..cfg.samples {
        let alpha: f64 = rng.gen_range(-10.0..10.0);
        let p = sampling::n_point(&mut rng);
        let q = sampling::n_point(&mut rng);
        let (x, ys) = sampling::n_instance(&mut rng);
        let f = |p: NPoint| translate_n(alpha, p);
        let order = (p.value() < q.value()) == (f(p).value() < f(q).value());
        let succ = (f(p.succ()).value() - f(p).succ().value()).abs()
            <= cfg.tolerance * p.value().abs().max(1.0);
        let pred = p_n(x, &ys, cfg.tolerance) == p_n(f(x), &ys.map(f), cfg.tolerance);
        t.record(order && succ && pred, || {
            format!("alpha={alpha} x={} y={:?}", x.value(), ys.map(NPoint::value))
        });
    }
    t.finish()
}

fn transitive_n(cfg: &SuiteConfig) -> Check {
    let id = "transitive_n";
    let mut rng = sampling::rng_for(cfg.seed, id);
    let mut t = Tally::new(id, "remark:transitive");
    for _ in 0..cfg.samples {
        let x = sampling::n_point(&mut rng);
        let y = sampling::n_point(&mut rng);
        let alpha = y.value() - x.value();
        let hits = (translate_n(alpha, x).value() - y.value()).abs()
            <= cfg.tolerance * y.value().abs().max(1.0);
        let (z, zs) = sampling::n_instance(&mut rng);
        let f = |p: NPoint| translate_n(alpha, p);
        let pred = p_n(z, &zs, cfg.tolerance) == p_n(f(z), &zs.map(f), cfg.tolerance);
        t.record(hits && pred, || format!("x={} y={}", x.value(), y.value()));
    }
    t.finish()
}

fn mm_instance<R: Rng>(rng: &mut R) -> (MMPoint, [MMPoint; 4]) {
    let copy = if rng.gen_bool(0.5) {
        CopyIndex::First
    } else {
        CopyIndex::Second
    };
    let (x, ys) = sampling::m_instance(rng);
    let mut ys = ys.map(|y| embed(copy, y));
    if rng.gen_ratio(1, 5) {
        let i = rng.gen_range(0..4);
        ys[i].copy = match copy {
            CopyIndex::First => CopyIndex::Second,
            CopyIndex::Second => CopyIndex::First,
        };
    }
    (embed(copy, x), ys)
}

fn mm_point<R: Rng>(rng: &mut R) -> MMPoint {
    let copy = if rng.gen_bool(0.5) {
        CopyIndex::First
    } else {
        CopyIndex::Second
    };
    embed(copy, sampling::mpoint(rng))
}

fn tau_doubled_automorphism(cfg: &SuiteConfig) -> Check {
    let id = "tau_doubled_automorphism";
    let mut rng = sampling::rng_for(cfg.seed, id);
    let mut t = Tally::new(id, "remark:independent");
    for _ in 0..cfg.samples {
        let t1 = sampling::affine_auto(&mut rng);
        let t2 = sampling::affine_auto(&mut rng);
        let p = mm_point(&mut rng);
        let q = mm_point(&mut rng);
        let (x, ys) = mm_instance(&mut rng);
        let mut ok = true;
        for f in [
            &(|p: &MMPoint| tau_doubled(&t1, p)) as &dyn Fn(&MMPoint) -> MMPoint,
            &|p: &MMPoint| apply_doubled(&t1, &t2, p),
        ] {
            ok &= (p < q) == (f(&p) < f(&q));
            ok &= f(&p.succ()) == f(&p).succ();
            ok &= p_mm(&x, &ys) == p_mm(&f(&x), &ys.each_ref().map(f));
        }
        ok &= p.copy == CopyIndex::First || tau_doubled(&t1, &p) == p;
        t.record(ok, || format!("t1={t1} t2={t2} p={:?} q={:?}", p, q));
    }
    t.finish()
}

fn fixed_point_containment(cfg: &SuiteConfig) -> Check {
    let id = "fixed_point_containment";
    let mut rng = sampling::rng_for(cfg.seed, id);
    let mut t = Tally::new(id, "sec:ei-failure");
    for _ in 0..cfg.samples {
        let b = sampling::nonzero_rational(&mut rng);
        let a = loop {
            let a = sampling::positive_rational(&mut rng);
            if !a.is_one() {
                break a;
            }
        };
        let shift = AffineAuto::new(Rational::one(), b).expect("a > 0");
        let scale = AffineAuto::new(a, Rational::zero()).expect("a > 0");
        let small = fixed_points_affine(&shift);
        let big = fixed_points_affine(&scale);
        let p = sampling::mpoint(&mut rng);
        let pointwise = apply_affine_m(&shift, &p) != p || apply_affine_m(&scale, &p) == p;
        t.record(small.is_subset_of(&big) && pointwise, || {
            format!("{shift}: {small}; {scale}: {big}; p={p}")
        });
    }
    t.finish()
}

/// For copy-2 points `p, q`, the map that is the identity on copy 1 and the
/// transported `N`-translation on copy 2 sends `p` to `q` and respects the
/// structure on copy 2. Copy 1 is untouched by construction.
fn copy2_orbit_transitive(cfg: &SuiteConfig) -> Check {
    let id = "copy2_orbit_transitive";
    let mut rng = sampling::rng_for(cfg.seed, id);
    let mut t = Tally::new(id, "remark:whatever");
    let tol = cfg.tolerance;
    for _ in 0..scaled(cfg.samples, 10) {
        let p = sampling::mpoint(&mut rng);
        let q = sampling::mpoint(&mut rng);
        let r = sampling::mpoint(&mut rng);
        let alpha = transitivity_shift(&p, &q);
        let on_copy2 = |m: &MPoint| {
            iso_n_to_m(translate_n(alpha, NPoint::new(iso_m_to_n(m)).expect("finite")))
        };
        let image = on_copy2(&p);
        let lands = image.level == q.level && same_coordinate(image.point, q.point.to_f64(), tol);
        let order = (p < r) == image.lt(&on_copy2(&r));
        let succ = on_copy2(&p.succ()).level == image.succ().level;
        let (z, zs) = sampling::n_instance(&mut rng);
        let f = |v: NPoint| translate_n(alpha, v);
        let pred = p_n(z, &zs, tol) == p_n(f(z), &zs.map(f), tol);
        t.record(lands && order && succ && pred, || format!("p={p} q={q} image={image}"));
    }
    t.finish()
}

// ---------------------------------------------------------------- imaginaries

fn x_pair<R: Rng>(rng: &mut R) -> XPair {
    let x = sampling::rational(rng);
    let y = &x + sampling::positive_rational(rng);
    XPair::new(x, y).expect("x < y")
}

/// A pair with the same difference as `p` half the time.
fn x_partner<R: Rng>(rng: &mut R, p: &XPair) -> XPair {
    if rng.gen_bool(0.5) {
        class_invariant_x(p).representative(sampling::rational(rng))
    } else {
        x_pair(rng)
    }
}

fn sim_equivalence_relation(cfg: &SuiteConfig) -> Check {
    let id = "sim_equivalence_relation";
    let mut rng = sampling::rng_for(cfg.seed, id);
    let mut t = Tally::new(id, "eq:needed");
    for _ in 0..scaled(cfg.samples, 10) {
        let p = x_pair(&mut rng);
        let q = x_partner(&mut rng, &p);
        let r = x_partner(&mut rng, &q);
        let refl = sim_equiv(&p, &p);
        let sym = sim_equiv(&p, &q) == sim_equiv(&q, &p);
        let trans = !(sim_equiv(&p, &q) && sim_equiv(&q, &r)) || sim_equiv(&p, &r);
        t.record(refl && sym && trans, || format!("p={p} q={q} r={r}"));
    }
    t.finish()
}

fn sim_matches_invariant(cfg: &SuiteConfig) -> Check {
    let id = "sim_matches_invariant";
    let mut rng = sampling::rng_for(cfg.seed, id);
    let mut t = Tally::new(id, "eq:needed");
    for _ in 0..cfg.samples {
        let p = x_pair(&mut rng);
        let q = x_partner(&mut rng, &p);
        let ok = sim_equiv(&p, &q) == (class_invariant_x(&p) == class_invariant_x(&q))
            && sim_equiv(&p, &q) == (p.x() - p.y() == q.x() - q.y());
        t.record(ok, || format!("p={p} q={q}"));
    }
    t.finish()
}

fn class_equivariance(cfg: &SuiteConfig) -> Check {
    let id = "class_equivariance";
    let mut rng = sampling::rng_for(cfg.seed, id);
    let mut t = Tally::new(id, "sec:ei-failure");
    for _ in 0..cfg.samples {
        let tau = sampling::affine_auto(&mut rng);
        let p = x_pair(&mut rng);
        let lhs = class_invariant_x(&apply_tau_pair(&tau, &p));
        let rhs = tau_action_on_class(&tau, &class_invariant_x(&p));
        t.record(lhs == rhs, || format!("{tau} p={p}"));
    }
    t.finish()
}

fn y_triple<R: Rng>(rng: &mut R, a: &MPoint) -> YTriple {
    loop {
        let b = point_above(a, sampling::proj_point_except(rng, &a.point)).expect("b != a");
        let c = point_above(a, sampling::proj_point_except(rng, &a.point)).expect("c != a");
        if let Ok(t) = YTriple::new(a.clone(), b.clone().min(c.clone()), b.max(c)) {
            return t;
        }
    }
}

/// A triple over the same base, equivalent to `p` when the solved point
/// lands in the right order.
fn y_partner<R: Rng>(rng: &mut R, p: &YTriple) -> YTriple {
    if rng.gen_bool(0.5) {
        let a = &p.a;
        let b2 = point_above(a, sampling::proj_point_except(rng, &a.point)).expect("b != a");
        // f(c2) = f(b2) - f(b) + f(c)
        if let Ok(c2) = solve_p0_fiber(&a.point, &p.c.point, &b2.point, &p.b.point) {
            if let Some(c2) = point_above(a, c2) {
                if let Ok(t) = YTriple::new(a.clone(), b2, c2) {
                    return t;
                }
            }
        }
    }
    y_triple(rng, &p.a)
}

fn y_quotient_invariant(cfg: &SuiteConfig) -> Check {
    let id = "y_quotient_invariant";
    let mut rng = sampling::rng_for(cfg.seed, id);
    let mut t = Tally::new(id, "remark:Y-quotient");
    for _ in 0..scaled(cfg.samples, 10) {
        let a = sampling::mpoint(&mut rng);
        let p = y_triple(&mut rng, &a);
        let q = y_partner(&mut rng, &p);
        let r = y_partner(&mut rng, &q);
        let other = y_triple(&mut rng, &a.succ());
        let inv = |t: &YTriple| class_invariant_y(&t.a, &t.b, &t.c).expect("in Y");
        let complete = approx_equiv_y(&p, &q) == (inv(&p) == inv(&q))
            && approx_equiv_y(&q, &r) == (inv(&q) == inv(&r));
        let relation = approx_equiv_y(&p, &p)
            && approx_equiv_y(&p, &q) == approx_equiv_y(&q, &p)
            && (!(approx_equiv_y(&p, &q) && approx_equiv_y(&q, &r)) || approx_equiv_y(&p, &r));
        let bases = !approx_equiv_y(&p, &other) && inv(&p) != inv(&other);
        t.record(complete && relation && bases, || {
            format!("a={a} p=({},{}) q=({},{})", p.b, p.c, q.b, q.c)
        });
    }
    t.finish()
}

fn ei_certificate_check(cfg: &SuiteConfig) -> Check {
    let cert = ei_failure_certificate(&CertificateConfig::new(cfg.seed, cfg.samples));
    let mut t = Tally::new("ei_failure_certificate", "sec:ei-failure");
    for v in &cert.verdicts {
        t.record(v.holds, || format!("{}: {}", v.id, v.witness));
    }
    t.finish()
}

fn ei_certificate_mutations(cfg: &SuiteConfig) -> Check {
    let mut t = Tally::new("ei_certificate_mutations", "sec:ei-failure");
    let budget = scaled(cfg.samples, 10);
    for m in Mutation::ALL {
        let cert = ei_failure_certificate(&CertificateConfig::new(cfg.seed, budget).mutated(m));
        let only_target = cert.verdicts.iter().all(|v| v.holds == (v.id != m.target()));
        t.record(!cert.valid && only_target, || {
            format!("mutation {} did not falsify exactly {}", m.name(), m.target())
        });
    }
    t.finish()
}

// ---------------------------------------------------------------- pregeometry

const Q2_GENERATORS: usize = 6;

fn q2_certificates(cfg: &SuiteConfig) -> Check {
    let id = "q2_certificates";
    let mut rng = sampling::rng_for(cfg.seed, id);
    let mut t = Tally::new(id, "lemma:q2");
    for _ in 0..scaled(cfg.samples, 10) {
        let (x, e) = sampling::q2_instance(&mut rng, Q2_GENERATORS);
        let ok = match extract_basis(&x, &e) {
            Ok(cert) => {
                let a: Vec<AffineForm> = cert.a_indices.iter().map(|&i| x[i].clone()).collect();
                // |A| = rank(A/e) <= rank(A/∅) <= |A|
                let chain = cert.rank_a_over_e == a.len()
                    && cert.rank_a_over_e <= cert.rank_a_over_empty
                    && cert.rank_a_over_empty <= a.len()
                    && rank(&x, e.invariants()) == a.len();
                let partition = {
                    let mut all: Vec<usize> =
                        cert.a_indices.iter().chain(&cert.c_indices).copied().collect();
                    all.sort_unstable();
                    all == (0..x.len()).collect::<Vec<_>>()
                };
                chain
                    && partition
                    && certificate_postconditions(&x, &e, &cert).iter().all(|(_, ok)| *ok)
            }
            Err(_) => false,
        };
        t.record(ok, || {
            let xs: Vec<String> = x.iter().map(ToString::to_string).collect();
            let es: Vec<String> = e.invariants().iter().map(ToString::to_string).collect();
            format!("x={xs:?} e={es:?}")
        });
    }
    t.finish()
}

fn forms<R: Rng>(rng: &mut R, n: usize) -> Vec<AffineForm> {
    (0..n).map(|_| sampling::affine_form(rng, Q2_GENERATORS)).collect()
}

fn rank_matches_oracle(cfg: &SuiteConfig) -> Check {
    let id = "rank_matches_oracle";
    let mut rng = sampling::rng_for(cfg.seed, id);
    let mut t = Tally::new(id, "lemma:q2");
    for _ in 0..scaled(cfg.samples, 10) {
        let n = rng.gen_range(0..=6);
        let c = rng.gen_range(0..=2);
        let tuple = forms(&mut rng, n);
        let context = forms(&mut rng, c);
        let fast = rank(&tuple, &context);
        let slow = rank_oracle(&tuple, &context);
        t.record(slow == Ok(fast), || format!("rank={fast} oracle={slow:?}"));
    }
    t.finish()
}

fn closure_exchange(cfg: &SuiteConfig) -> Check {
    let id = "closure_exchange";
    let mut rng = sampling::rng_for(cfg.seed, id);
    let mut t = Tally::new(id, "lemma:q2");
    for _ in 0..scaled(cfg.samples, 10) {
        let s_len = rng.gen_range(0..=3);
        let s = forms(&mut rng, s_len);
        let ctx_len = rng.gen_range(0..=1);
        let ctx = forms(&mut rng, ctx_len);
        let q = sampling::affine_form(&mut rng, Q2_GENERATORS);
        // make p depend on q half the time so the hypothesis is exercised
        let p = if rng.gen_bool(0.5) {
            let mut p = &q * &sampling::nonzero_rational(&mut rng);
            for f in &s {
                p = &p + &(f * &sampling::rational(&mut rng));
            }
            p
        } else {
            sampling::affine_form(&mut rng, Q2_GENERATORS)
        };
        let with = |extra: &AffineForm| {
            let mut v = s.clone();
            v.push(extra.clone());
            v
        };
        let hypothesis = !closure_member(&p, &s, &ctx) && closure_member(&p, &with(&q), &ctx);
        let ok = !hypothesis || closure_member(&q, &with(&p), &ctx);
        t.record(ok, || format!("p={p} q={q}"));
    }
    t.finish()
}

fn closure_monotone(cfg: &SuiteConfig) -> Check {
    let id = "closure_monotone";
    let mut rng = sampling::rng_for(cfg.seed, id);
    let mut t = Tally::new(id, "lemma:q2");
    for _ in 0..scaled(cfg.samples, 10) {
        let s_len = rng.gen_range(0..=3);
        let s = forms(&mut rng, s_len);
        let mut bigger = s.clone();
        let extra = rng.gen_range(0..=2);
        bigger.extend(forms(&mut rng, extra));
        let ctx_len = rng.gen_range(0..=1);
        let ctx = forms(&mut rng, ctx_len);
        let m = if rng.gen_bool(0.5) && !s.is_empty() {
            &s[rng.gen_range(0..s.len())] * &sampling::rational(&mut rng)
        } else {
            sampling::affine_form(&mut rng, Q2_GENERATORS)
        };
        let extensive = s.iter().all(|f| closure_member(f, &s, &ctx));
        let monotone = !closure_member(&m, &s, &ctx) || closure_member(&m, &bigger, &ctx);
        t.record(extensive && monotone, || format!("m={m}"));
    }
    t.finish()
}

fn closure_idempotent(cfg: &SuiteConfig) -> Check {
    let id = "closure_idempotent";
    let mut rng = sampling::rng_for(cfg.seed, id);
    let mut t = Tally::new(id, "lemma:q2");
    for _ in 0..scaled(cfg.samples, 10) {
        let s_len = rng.gen_range(1..=3);
        let s = forms(&mut rng, s_len);
        let ctx_len = rng.gen_range(0..=1);
        let ctx = forms(&mut rng, ctx_len);
        // elements of cl(S): combinations of S, the context and constants
        let combo = |rng: &mut rand_chacha::ChaCha8Rng| {
            let mut f = AffineForm::constant(sampling::rational(rng));
            for g in s.iter().chain(&ctx) {
                f = &f + &(g * &sampling::rational(rng));
            }
            f
        };
        let closure_elems: Vec<AffineForm> = (0..3).map(|_| combo(&mut rng)).collect();
        let mut enlarged = s.clone();
        enlarged.extend(closure_elems.iter().cloned());
        let m = if rng.gen_bool(0.5) {
            combo(&mut rng)
        } else {
            sampling::affine_form(&mut rng, Q2_GENERATORS)
        };
        let members = closure_elems.iter().all(|f| closure_member(f, &s, &ctx));
        let same = closure_member(&m, &enlarged, &ctx) == closure_member(&m, &s, &ctx);
        t.record(members && same, || format!("m={m}"));
    }
    t.finish()
}

// ---------------------------------------------------------------- topology

fn quotient_openness(cfg: &SuiteConfig) -> Check {
    openness_check(cfg.grid, &cfg.window)
}

fn hausdorff_separation(cfg: &SuiteConfig) -> Check {
    hausdorff_check(scaled(cfg.samples, 10), cfg.seed)
}

fn same_coordinate(a: Option<f64>, b: Option<f64>, tol: f64) -> bool {
    match (a, b) {
        (None, None) => true,
        (Some(a), Some(b)) => (a - b).abs() <= tol * a.abs().max(b.abs()).max(1.0),
        _ => false,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_traits::Signed;

    fn small() -> SuiteConfig {
        SuiteConfig {
            samples: 300,
            grid: 6,
            ..SuiteConfig::default()
        }
    }

    #[test]
    fn every_suite_passes_at_small_budget() {
        for name in Suite::NAMES {
            let suite: Suite = name.parse().unwrap();
            let report = run_suite(suite, &small());
            assert!(report.all_pass(), "{}", report.to_text());
        }
    }

    #[test]
    fn all_is_the_union_of_the_parts() {
        let total: usize = Suite::NAMES[1..]
            .iter()
            .map(|n| check_ids(n.parse().unwrap()).len())
            .sum();
        assert_eq!(check_ids(Suite::All).len(), total);
        let report = run_suite(Suite::All, &small());
        let mut ids: Vec<_> = report.checks.iter().map(|c| c.id.clone()).collect();
        ids.dedup();
        assert_eq!(ids.len(), total);
        // registry ids match the ids the checks report
        let mut registered = check_ids(Suite::All);
        registered.sort_unstable();
        assert_eq!(ids, registered);
    }

    #[test]
    fn unknown_suite_is_rejected() {
        assert!("everything".parse::<Suite>().is_err());
    }

    #[test]
    fn negative_scale_never_sampled() {
        let mut rng = sampling::rng_for(1, "t");
        for _ in 0..100 {
            assert!(sampling::affine_auto(&mut rng).scale().is_positive());
        }
    }
}
