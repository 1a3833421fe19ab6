//! The quotient `X/~` of pairs in `(alpha, succ alpha)` by equal
//! differences, its larger relative `Y/≈`, the action of the affine
//! automorphisms on classes, the certificate that no set of real elements
//! can code a class, and sampled probes of the quotient topology.

use std::fmt;

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use rand::Rng;
use serde::Serialize;

use crate::automorphisms::{apply_affine_m, fixed_points_affine, AffineAuto, FixedPointSet};
use crate::error::{Error, Result};
use crate::moebius::{canonical_to_infinity, ProjPoint};
use crate::report::{Tally, VerdictReport};
use crate::sampling;
use crate::structures::{p_m, MPoint};
use crate::{int, Rational};

/// The base point `alpha = (0, inf)`.
pub fn alpha() -> MPoint {
    MPoint::new(0, ProjPoint::Infinity)
}

/// A point of `X = {(x, y) : alpha < x < y < succ(alpha)}`, with the open
/// fiber `(alpha, succ alpha)` identified with the rationals.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct XPair {
    x: Rational,
    y: Rational,
}

impl XPair {
    pub fn new(x: Rational, y: Rational) -> Result<Self> {
        if x >= y {
            return Err(Error::NotInX {
                x: x.to_string(),
                y: y.to_string(),
            });
        }
        Ok(XPair { x, y })
    }

    pub fn x(&self) -> &Rational {
        &self.x
    }

    pub fn y(&self) -> &Rational {
        &self.y
    }

    pub fn to_mpoints(&self) -> [MPoint; 2] {
        [
            MPoint::new(0, ProjPoint::Real(self.x.clone())),
            MPoint::new(0, ProjPoint::Real(self.y.clone())),
        ]
    }
}

impl fmt::Display for XPair {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {})", self.x, self.y)
    }
}

/// `(x, y) ~ (x', y')` iff `P(alpha, x, y, x', y')` in `M`.
pub fn sim_equiv(p: &XPair, q: &XPair) -> bool {
    let [x, y] = p.to_mpoints();
    let [x2, y2] = q.to_mpoints();
    let via_predicate = p_m(&alpha(), &[x, y, x2, y2]);
    debug_assert_eq!(via_predicate, &p.x - &p.y == &q.x - &q.y);
    via_predicate
}

/// Code of a `~`-class: the difference `x - y < 0`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct XClass(Rational);

impl XClass {
    pub fn new(d: Rational) -> Option<Self> {
        d.is_negative().then_some(XClass(d))
    }

    pub fn difference(&self) -> &Rational {
        &self.0
    }

    /// A representative pair of the class with first coordinate `x`.
    pub fn representative(&self, x: Rational) -> XPair {
        let y = &x - &self.0;
        XPair::new(x, y).expect("d < 0")
    }
}

/// Code of a `≈`-class: the base point `a` and `f(b) - f(c)` where `f` sends
/// the projective coordinate of `a` to infinity.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct YClass {
    pub base: MPoint,
    pub d: Rational,
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum ClassInvariant {
    X(XClass),
    Y(YClass),
}

impl fmt::Display for ClassInvariant {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ClassInvariant::X(c) => write!(f, "{}", c.0),
            ClassInvariant::Y(c) => write!(f, "{} {}", c.base, c.d),
        }
    }
}

pub fn class_invariant_x(p: &XPair) -> XClass {
    XClass(&p.x - &p.y)
}

/// Applies an affine automorphism of `M` to both coordinates of a pair.
pub fn apply_tau_pair(t: &AffineAuto, p: &XPair) -> XPair {
    XPair::new(t.apply_rational(&p.x), t.apply_rational(&p.y)).expect("a > 0 preserves order")
}

/// The induced action on `X/~`: differences scale by `a`.
pub fn tau_action_on_class(t: &AffineAuto, inv: &XClass) -> XClass {
    XClass(t.scale() * &inv.0)
}

/// A point of `Y = {(a, b, c) : a < b < c < succ(a)}`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct YTriple {
    pub a: MPoint,
    pub b: MPoint,
    pub c: MPoint,
}

impl YTriple {
    pub fn new(a: MPoint, b: MPoint, c: MPoint) -> Result<Self> {
        if a < b && b < c && c < a.succ() {
            Ok(YTriple { a, b, c })
        } else {
            Err(Error::NotInY)
        }
    }
}

/// `(a, b, c) ≈ (a', b', c')` iff `a = a'` and `P(a, b, c, b', c')`.
pub fn approx_equiv_y(p: &YTriple, q: &YTriple) -> bool {
    p.a == q.a && p_m(&p.a, &[p.b.clone(), p.c.clone(), q.b.clone(), q.c.clone()])
}

pub fn class_invariant_y(a: &MPoint, b: &MPoint, c: &MPoint) -> Result<YClass> {
    let t = YTriple::new(a.clone(), b.clone(), c.clone())?;
    let f = canonical_to_infinity(&t.a.point);
    let fin = |p: &MPoint| {
        f.apply(&p.point)
            .as_real()
            .cloned()
            .expect("b, c differ from a in the projective coordinate")
    };
    Ok(YClass {
        d: fin(&t.b) - fin(&t.c),
        base: t.a,
    })
}

/// One named step of the non-elimination argument.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Verdict {
    pub id: String,
    pub holds: bool,
    pub samples: u64,
    pub witness: String,
}

/// A replacement that should break exactly one verdict of the certificate.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Mutation {
    /// The "acts trivially" family uses scale 2 instead of 1.
    TrivialAction,
    /// The separating automorphism `tau(2,0)` becomes `tau(1,2)`.
    Separator,
    /// The fixed-set probe `tau(1,1)` becomes the identity `tau(1,0)`.
    FixedProbe,
    /// The containment subject `tau(1,1)` becomes the identity `tau(1,0)`.
    Containment,
}

impl Mutation {
    pub const ALL: [Mutation; 4] = [
        Mutation::TrivialAction,
        Mutation::Separator,
        Mutation::FixedProbe,
        Mutation::Containment,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Mutation::TrivialAction => "trivial-action",
            Mutation::Separator => "separator",
            Mutation::FixedProbe => "fixed-probe",
            Mutation::Containment => "containment",
        }
    }

    pub fn from_name(s: &str) -> Option<Self> {
        Self::ALL.into_iter().find(|m| m.name() == s)
    }

    /// The verdict this mutation is designed to falsify.
    pub fn target(self) -> &'static str {
        match self {
            Mutation::TrivialAction => VERDICT_IDS[0],
            Mutation::Separator => VERDICT_IDS[1],
            Mutation::FixedProbe => VERDICT_IDS[2],
            Mutation::Containment => VERDICT_IDS[3],
        }
    }
}

pub const VERDICT_IDS: [&str; 4] = [
    "trivial_action_a1",
    "no_fixed_class_a_ne_1",
    "fix_tau11_is_infinity_fiber",
    "fix_tau11_subset_fix_tau20",
];

#[derive(Debug, Clone)]
pub struct CertificateConfig {
    pub seed: u64,
    pub budget: u64,
    trivial_scale: Rational,
    separator: AffineAuto,
    fixed_probe: AffineAuto,
    containment_subject: AffineAuto,
    mutation: Option<Mutation>,
}

impl CertificateConfig {
    pub fn new(seed: u64, budget: u64) -> Self {
        let tau = |a: i64, b: i64| AffineAuto::new(int(a), int(b)).expect("a > 0");
        CertificateConfig {
            seed,
            budget,
            trivial_scale: Rational::one(),
            separator: tau(2, 0),
            fixed_probe: tau(1, 1),
            containment_subject: tau(1, 1),
            mutation: None,
        }
    }

    pub fn mutated(mut self, m: Mutation) -> Self {
        let tau = |a: i64, b: i64| AffineAuto::new(int(a), int(b)).expect("a > 0");
        match m {
            Mutation::TrivialAction => self.trivial_scale = int(2),
            Mutation::Separator => self.separator = tau(1, 2),
            Mutation::FixedProbe => self.fixed_probe = tau(1, 0),
            Mutation::Containment => self.containment_subject = tau(1, 0),
        }
        self.mutation = Some(m);
        self
    }
}

impl Default for CertificateConfig {
    fn default() -> Self {
        Self::new(0, 10_000)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct EICertificate {
    pub seed: u64,
    pub budget: u64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub mutation: Option<String>,
    pub valid: bool,
    pub verdicts: Vec<Verdict>,
}

impl EICertificate {
    pub fn verdict(&self, id: &str) -> Option<&Verdict> {
        self.verdicts.iter().find(|v| v.id == id)
    }

    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("certificate serializes");
        s.push('\n');
        s
    }
}

fn negative_rational<R: Rng>(rng: &mut R) -> Rational {
    -sampling::positive_rational(rng)
}

/// Scale-1 maps fix every class, both through the induced action and
/// through representatives.
fn verdict_trivial_action(cfg: &CertificateConfig) -> Verdict {
    let mut rng = sampling::rng_for(cfg.seed, VERDICT_IDS[0]);
    let mut failures = 0u64;
    let mut first = None;
    for i in 0..cfg.budget {
        // always include tau(1,1) itself
        let b = if i == 0 { int(1) } else { sampling::rational(&mut rng) };
        let t = AffineAuto::new(cfg.trivial_scale.clone(), b).expect("scale > 0");
        let class = XClass(negative_rational(&mut rng));
        let rep = class.representative(sampling::rational(&mut rng));
        let via_action = tau_action_on_class(&t, &class);
        let via_rep = class_invariant_x(&apply_tau_pair(&t, &rep));
        if via_action != class || via_rep != class {
            failures += 1;
            first.get_or_insert_with(|| format!("{t} moves class {} to {}", class.0, via_rep.0));
        }
    }
    Verdict {
        id: VERDICT_IDS[0].into(),
        holds: failures == 0,
        samples: cfg.budget,
        witness: first.unwrap_or_else(|| {
            format!(
                "tau({},b) preserves x - y for every sampled b, b = 1 included",
                cfg.trivial_scale
            )
        }),
    }
}

/// Maps with scale `a != 1` fix no class: `a d = d` forces `d = 0`, and
/// every class has `d < 0`.
fn verdict_no_fixed_class(cfg: &CertificateConfig) -> Verdict {
    let mut rng = sampling::rng_for(cfg.seed, VERDICT_IDS[1]);
    let mut check_symbolic = |t: &AffineAuto| -> std::result::Result<(), String> {
        let a = t.scale();
        if a.is_one() {
            return Err(format!("{t} has scale 1 and fixes every class"));
        }
        // (a - 1) d = 0 with a != 1 has the single solution d = 0
        let d = XClass(negative_rational(&mut rng));
        if tau_action_on_class(t, &d) == d {
            return Err(format!("{t} fixes class {}", d.0));
        }
        Ok(())
    };
    let mut failures = 0u64;
    let mut first = None;
    let sep = cfg.separator.clone();
    if let Err(w) = check_symbolic(&sep) {
        failures += 1;
        first = Some(w);
    }
    let mut rng2 = sampling::rng_for(cfg.seed, "no_fixed_class_a_ne_1/scales");
    for _ in 1..cfg.budget {
        let a = loop {
            let a = sampling::positive_rational(&mut rng2);
            if !a.is_one() {
                break a;
            }
        };
        let t = AffineAuto::new(a, sampling::rational(&mut rng2)).expect("a > 0");
        if let Err(w) = check_symbolic(&t) {
            failures += 1;
            first.get_or_insert(w);
        }
    }
    Verdict {
        id: VERDICT_IDS[1].into(),
        holds: failures == 0,
        samples: cfg.budget.max(1),
        witness: first.unwrap_or_else(|| {
            format!(
                "separator {sep}: {} d = d only for d = 0, excluded since d < 0",
                sep.scale()
            )
        }),
    }
}

fn verdict_fixed_probe(cfg: &CertificateConfig) -> Verdict {
    let fix = fixed_points_affine(&cfg.fixed_probe);
    let mut rng = sampling::rng_for(cfg.seed, VERDICT_IDS[2]);
    let mut agrees = true;
    for _ in 0..cfg.budget {
        let p = sampling::mpoint(&mut rng);
        agrees &= fix.contains(&p) == (apply_affine_m(&cfg.fixed_probe, &p) == p);
    }
    let holds = fix == FixedPointSet::InfinityFiberOnly && agrees;
    Verdict {
        id: VERDICT_IDS[2].into(),
        holds,
        samples: cfg.budget,
        witness: format!("fix({}) = {fix}", cfg.fixed_probe),
    }
}

fn verdict_containment(cfg: &CertificateConfig) -> Verdict {
    let small = fixed_points_affine(&cfg.containment_subject);
    let big = fixed_points_affine(&cfg.separator);
    let mut rng = sampling::rng_for(cfg.seed, VERDICT_IDS[3]);
    let mut pointwise = true;
    for _ in 0..cfg.budget {
        let p = sampling::mpoint(&mut rng);
        if apply_affine_m(&cfg.containment_subject, &p) == p {
            pointwise &= apply_affine_m(&cfg.separator, &p) == p;
        }
    }
    Verdict {
        id: VERDICT_IDS[3].into(),
        holds: small.is_subset_of(&big) && pointwise,
        samples: cfg.budget,
        witness: format!(
            "fix({}) = {small}, fix({}) = {big}",
            cfg.containment_subject, cfg.separator
        ),
    }
}

/// Replays the argument that no set of real elements of the first copy can
/// be interdefinable with a class of `X/~` over the second copy and `alpha`:
/// `tau(1,b)` fixes every class, `tau(2,0)` fixes none, yet every point of
/// `M` fixed by `tau(1,1)` is also fixed by `tau(2,0)`.
pub fn ei_failure_certificate(cfg: &CertificateConfig) -> EICertificate {
    let verdicts = vec![
        verdict_trivial_action(cfg),
        verdict_no_fixed_class(cfg),
        verdict_fixed_probe(cfg),
        verdict_containment(cfg),
    ];
    EICertificate {
        seed: cfg.seed,
        budget: cfg.budget,
        mutation: cfg.mutation.map(|m| m.name().to_owned()),
        valid: verdicts.iter().all(|v| v.holds),
        verdicts,
    }
}

/// A rectangle `[x_lo, x_hi] x [y_lo, y_hi]` of pairs.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Window {
    pub x_lo: Rational,
    pub x_hi: Rational,
    pub y_lo: Rational,
    pub y_hi: Rational,
}

impl Window {
    pub fn new(x_lo: Rational, x_hi: Rational, y_lo: Rational, y_hi: Rational) -> Self {
        Window {
            x_lo,
            x_hi,
            y_lo,
            y_hi,
        }
    }
}

impl Default for Window {
    fn default() -> Self {
        Window::new(int(-5), int(5), int(-5), int(5))
    }
}

impl fmt::Display for Window {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "({}, {}) x ({}, {})",
            self.x_lo, self.x_hi, self.y_lo, self.y_hi
        )
    }
}

/// An interval of differences with explicit endpoint membership.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DiffInterval {
    pub lo: Rational,
    pub hi: Rational,
    pub lo_closed: bool,
    pub hi_closed: bool,
}

impl DiffInterval {
    pub fn is_open_in_negative_line(&self) -> bool {
        !self.lo_closed && !self.hi_closed && self.lo < self.hi && !self.hi.is_positive()
    }

    pub fn contains(&self, d: &Rational) -> bool {
        let above = if self.lo_closed { d >= &self.lo } else { d > &self.lo };
        let below = if self.hi_closed { d <= &self.hi } else { d < &self.hi };
        above && below
    }
}

/// Image of `d = x - y` over `B ∩ X` for the open box
/// `B = (x_lo, x_hi) x (y_lo, y_hi)`, by interval subtraction clipped to
/// `d < 0`. `None` when `B ∩ X` is empty.
pub fn difference_image(b: &Window) -> Option<DiffInterval> {
    if b.x_lo >= b.x_hi || b.y_lo >= b.y_hi || b.x_lo >= b.y_hi {
        return None;
    }
    let lo = &b.x_lo - &b.y_hi;
    let hi = (&b.x_hi - &b.y_lo).min(Rational::zero());
    Some(DiffInterval {
        lo,
        hi,
        lo_closed: false,
        hi_closed: false,
    })
}

type Vertex = (Rational, Rational);

/// Clips the closed box to the half-plane `x <= y` and returns the vertices.
fn clipped_polygon(b: &Window) -> Vec<Vertex> {
    let square = [
        (b.x_lo.clone(), b.y_lo.clone()),
        (b.x_hi.clone(), b.y_lo.clone()),
        (b.x_hi.clone(), b.y_hi.clone()),
        (b.x_lo.clone(), b.y_hi.clone()),
    ];
    let side = |v: &Vertex| &v.1 - &v.0; // >= 0 inside
    let mut out = Vec::new();
    for i in 0..4 {
        let p = &square[i];
        let q = &square[(i + 1) % 4];
        let (sp, sq) = (side(p), side(q));
        if !sp.is_negative() {
            out.push(p.clone());
        }
        if sp.is_negative() != sq.is_negative() && !(sp.is_zero() || sq.is_zero()) {
            let t = &sp / (&sp - &sq);
            out.push((&p.0 + (&q.0 - &p.0) * &t, &p.1 + (&q.1 - &p.1) * &t));
        }
    }
    out
}

fn twice_area(poly: &[Vertex]) -> Rational {
    let n = poly.len();
    (0..n)
        .map(|i| {
            let (a, b) = (&poly[i], &poly[(i + 1) % n]);
            &a.0 * &b.1 - &b.0 * &a.1
        })
        .fold(Rational::zero(), |acc, t| acc + t)
        .abs()
}

/// The same image computed from the vertices of the clipped polygon. The
/// closure of `B ∩ X` is that polygon, and a nonconstant linear function on
/// an open convex set attains neither its infimum nor its supremum.
pub fn difference_image_by_vertices(b: &Window) -> Option<DiffInterval> {
    let poly = clipped_polygon(b);
    if poly.len() < 3 || twice_area(&poly).is_zero() {
        return None;
    }
    let ds: Vec<Rational> = poly.iter().map(|(x, y)| x - y).collect();
    let lo = ds.iter().min().cloned().expect("nonempty");
    let hi = ds.iter().max().cloned().expect("nonempty");
    let degenerate = lo == hi;
    Some(DiffInterval {
        lo,
        hi,
        lo_closed: degenerate,
        hi_closed: degenerate,
    })
}

/// Splits `window` into `grid x grid` open sub-boxes and checks that the
/// class map sends each `B ∩ X` to an open subset of `(-inf, 0)`.
pub fn probe_quotient_openness(grid: u32, window: &Window) -> VerdictReport {
    let check = openness_check(grid, window);
    VerdictReport::new("topology", 0, 0.0, vec![check])
}

pub(crate) fn openness_check(grid: u32, window: &Window) -> crate::report::Check {
    let mut tally = Tally::new("quotient_openness", "thm:topologize");
    let n = BigInt::from(grid.max(1));
    let step_x = (&window.x_hi - &window.x_lo) / Rational::from_integer(n.clone());
    let step_y = (&window.y_hi - &window.y_lo) / Rational::from_integer(n);
    let at = |lo: &Rational, step: &Rational, k: u32| lo + step * int(i64::from(k));
    for i in 0..grid {
        for j in 0..grid {
            let b = Window::new(
                at(&window.x_lo, &step_x, i),
                at(&window.x_lo, &step_x, i + 1),
                at(&window.y_lo, &step_y, j),
                at(&window.y_lo, &step_y, j + 1),
            );
            let direct = difference_image(&b);
            let by_vertices = difference_image_by_vertices(&b);
            let ok = match (&direct, &by_vertices) {
                (None, None) => true,
                (Some(img), Some(v)) => {
                    // a point of B ∩ X
                    let x = (&b.x_lo + b.x_hi.clone().min(b.y_hi.clone())) / int(2);
                    let y = (x.clone().max(b.y_lo.clone()) + &b.y_hi) / int(2);
                    img == v && img.is_open_in_negative_line() && x < y && img.contains(&(&x - &y))
                }
                _ => false,
            };
            tally.record(ok, || format!("box {b}: interval {direct:?} vs vertices {by_vertices:?}"));
        }
    }
    tally.finish()
}

/// Disjoint open neighbourhoods of two distinct classes: radius
/// `|d1 - d2| / 3` around each difference, intersected with `(-inf, 0)`.
pub fn separating_neighbourhoods(d1: &XClass, d2: &XClass) -> Option<(DiffInterval, DiffInterval)> {
    if d1 == d2 {
        return None;
    }
    let r = (&d1.0 - &d2.0).abs() / int(3);
    let around = |d: &Rational| DiffInterval {
        lo: d - &r,
        hi: (d + &r).min(Rational::zero()),
        lo_closed: false,
        hi_closed: false,
    };
    Some((around(&d1.0), around(&d2.0)))
}

fn disjoint(a: &DiffInterval, b: &DiffInterval) -> bool {
    a.hi <= b.lo || b.hi <= a.lo
}

pub fn probe_hausdorff(samples: u64, seed: u64) -> VerdictReport {
    VerdictReport::new("topology", seed, 0.0, vec![hausdorff_check(samples, seed)])
}

pub(crate) fn hausdorff_check(samples: u64, seed: u64) -> crate::report::Check {
    let id = "hausdorff_separation";
    let mut rng = sampling::rng_for(seed, id);
    let mut tally = Tally::new(id, "thm:topologize");
    for _ in 0..samples {
        let d1 = XClass(negative_rational(&mut rng));
        let d2 = XClass(negative_rational(&mut rng));
        let Some((n1, n2)) = separating_neighbourhoods(&d1, &d2) else {
            continue;
        };
        // saturation: a representative's class decides membership
        let rep = d1.representative(sampling::rational(&mut rng));
        let rep_d = class_invariant_x(&rep).0;
        let ok = disjoint(&n1, &n2)
            && n1.contains(&d1.0)
            && n2.contains(&d2.0)
            && n1.is_open_in_negative_line()
            && n2.is_open_in_negative_line()
            && n1.contains(&rep_d)
            && !n2.contains(&rep_d);
        tally.record(ok, || format!("d1={} d2={}: {n1:?} {n2:?}", d1.0, d2.0));
    }
    tally.finish()
}
