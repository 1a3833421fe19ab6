//! Seeded generators for the verification suites and tests.
//!
//! Each check draws from its own ChaCha stream keyed by the check id, so a
//! check's samples do not depend on which other checks ran or in what order.

use std::f64::consts::PI;

use num_traits::Zero;
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::automorphisms::AffineAuto;
use crate::moebius::{MoebiusMap, ProjPoint};
use crate::pregeometry::{AffineForm, Imaginary};
use crate::structures::{point_above, solve_p0_fiber, MPoint, NPoint};
use crate::{rat, Rational};

/// Distance from the poles of `cot` kept by sampled `N` points.
pub const POLE_MARGIN: f64 = 1e-6;

fn fnv1a(s: &str) -> u64 {
    s.bytes().fold(0xcbf2_9ce4_8422_2325, |h, b| {
        (h ^ u64::from(b)).wrapping_mul(0x0000_0100_0000_01b3)
    })
}

pub fn rng_for(seed: u64, id: &str) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(fnv1a(id));
    rng
}

pub fn rational<R: Rng>(rng: &mut R) -> Rational {
    rat(rng.gen_range(-40..=40), rng.gen_range(1..=12))
}

pub fn nonzero_rational<R: Rng>(rng: &mut R) -> Rational {
    loop {
        let q = rational(rng);
        if !q.is_zero() {
            return q;
        }
    }
}

pub fn positive_rational<R: Rng>(rng: &mut R) -> Rational {
    rat(rng.gen_range(1..=40), rng.gen_range(1..=12))
}

/// A rational in the open interval `(lo, hi)`, `lo < hi`.
pub fn rational_between<R: Rng>(rng: &mut R, lo: &Rational, hi: &Rational) -> Rational {
    let t = rat(rng.gen_range(1..1000), 1000);
    lo + (hi - lo) * t
}

/// A projective point; infinity with probability 1/8.
pub fn proj_point<R: Rng>(rng: &mut R) -> ProjPoint {
    if rng.gen_ratio(1, 8) {
        ProjPoint::Infinity
    } else {
        ProjPoint::Real(rational(rng))
    }
}

pub fn proj_point_except<R: Rng>(rng: &mut R, avoid: &ProjPoint) -> ProjPoint {
    loop {
        let p = proj_point(rng);
        if &p != avoid {
            return p;
        }
    }
}

pub fn moebius<R: Rng>(rng: &mut R) -> MoebiusMap {
    loop {
        let e = [rational(rng), rational(rng), rational(rng), rational(rng)];
        let [a, b, c, d] = e;
        if let Ok(m) = MoebiusMap::new(a, b, c, d) {
            return m;
        }
    }
}

pub fn affine_auto<R: Rng>(rng: &mut R) -> AffineAuto {
    AffineAuto::new(positive_rational(rng), rational(rng)).expect("a > 0")
}

/// A `P0` instance `(x; y1..y4)` with every `yi != x`. With probability 1/2
/// `y1` is solved for so that the predicate holds.
pub fn p0_instance<R: Rng>(rng: &mut R) -> (ProjPoint, [ProjPoint; 4]) {
    let x = proj_point(rng);
    p0_instance_at(rng, x)
}

pub fn mpoint<R: Rng>(rng: &mut R) -> MPoint {
    MPoint::new(rng.gen_range(-3i64..=3), proj_point(rng))
}

/// An `M` instance `(x; y1..y4)`. Mostly the `yi` lie in `(x, succ x)` and
/// half of those satisfy the predicate; occasionally one `yi` is an
/// unconstrained point so that the interval clause gets exercised.
pub fn m_instance<R: Rng>(rng: &mut R) -> (MPoint, [MPoint; 4]) {
    let x = mpoint(rng);
    let (px, ys) = p0_instance_at(rng, x.point.clone());
    debug_assert_eq!(px, x.point);
    let mut ys = ys.map(|q| point_above(&x, q).expect("yi != x"));
    if rng.gen_ratio(1, 6) {
        let i = rng.gen_range(0..4);
        ys[i] = mpoint(rng);
    }
    (x, ys)
}

fn p0_instance_at<R: Rng>(rng: &mut R, x: ProjPoint) -> (ProjPoint, [ProjPoint; 4]) {
    let y2 = proj_point_except(rng, &x);
    let y3 = proj_point_except(rng, &x);
    let y4 = proj_point_except(rng, &x);
    let y1 = if rng.gen_bool(0.5) {
        solve_p0_fiber(&x, &y2, &y3, &y4).expect("y2..y4 avoid x")
    } else {
        proj_point_except(rng, &x)
    };
    (x, [y1, y2, y3, y4])
}

fn away_from_poles(v: f64) -> bool {
    let k = (v / PI).round();
    (v - k * PI).abs() > POLE_MARGIN
}

fn n_value<R: Rng>(rng: &mut R) -> f64 {
    loop {
        let v = rng.gen_range(-10.0..10.0);
        if away_from_poles(v) {
            return v;
        }
    }
}

/// An `N` instance with all five points at least [`POLE_MARGIN`] from a
/// multiple of pi. Half the instances satisfy the cot identity by
/// construction; the `yi` always lie in `(x, x + pi)`.
pub fn n_instance<R: Rng>(rng: &mut R) -> (NPoint, [NPoint; 4]) {
    loop {
        let x = n_value(rng);
        let mut u = [0.0; 4];
        for v in u.iter_mut() {
            *v = rng.gen_range(POLE_MARGIN..PI - POLE_MARGIN);
        }
        if rng.gen_bool(0.5) {
            let cot = |t: f64| t.cos() / t.sin();
            let target = cot(u[1]) - cot(u[2]) + cot(u[3]);
            u[0] = 1f64.atan2(target);
        }
        let ys = u.map(|t| x + t);
        let inside = ys.iter().all(|&y| x < y && y < x + PI);
        let margins = u.iter().all(|&t| t > POLE_MARGIN && t < PI - POLE_MARGIN);
        if inside && margins && ys.iter().all(|&y| away_from_poles(y)) {
            let np = |v: f64| NPoint::new(v).expect("finite");
            return (np(x), ys.map(np));
        }
    }
}

pub fn n_point<R: Rng>(rng: &mut R) -> NPoint {
    NPoint::new(n_value(rng)).expect("finite")
}

/// Sub-budget `base / divisor`, never zero.
pub fn scaled(base: u64, divisor: u64) -> u64 {
    (base / divisor).max(1)
}

fn small_coefficient<R: Rng>(rng: &mut R) -> Rational {
    rat(rng.gen_range(-3..=3), rng.gen_range(1..=2))
}

/// A random affine form in generators `0..generators`.
pub fn affine_form<R: Rng>(rng: &mut R, generators: usize) -> AffineForm {
    let mut terms = Vec::new();
    for i in 0..generators {
        if rng.gen_bool(0.5) {
            terms.push((i, small_coefficient(rng)));
        }
    }
    let constant = if rng.gen_bool(0.5) {
        small_coefficient(rng)
    } else {
        Rational::zero()
    };
    AffineForm::from_terms(constant, terms)
}

/// A tuple `x` of up to `max_generators` forms over at most that many
/// generators, and an imaginary whose invariants lie in the span of `x`.
pub fn q2_instance<R: Rng>(rng: &mut R, max_generators: usize) -> (Vec<AffineForm>, Imaginary) {
    let generators = rng.gen_range(1..=max_generators);
    let len = rng.gen_range(1..=max_generators);
    let x: Vec<AffineForm> = (0..len)
        .map(|i| {
            // keep a few coordinates generic so bases are not all tiny
            if i < generators && rng.gen_bool(0.4) {
                AffineForm::generator(i)
            } else {
                affine_form(rng, generators)
            }
        })
        .collect();
    let invariants = (0..rng.gen_range(1..=2))
        .map(|_| {
            let mut f = AffineForm::constant(small_coefficient(rng));
            for xi in &x {
                if rng.gen_bool(0.5) {
                    f = &f + &(xi * &small_coefficient(rng));
                }
            }
            f
        })
        .collect();
    (x, Imaginary::new(invariants).expect("nonempty"))
}
