//! Automorphisms of `(RP^1, P0)`, `M`, `N` and `M + M`, and the exact
//! fixed-point sets of the affine family on `M`.

use std::fmt;

use num_traits::{One, Signed, Zero};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::moebius::{MoebiusMap, ProjPoint};
use crate::report::{Check, Tally, VerdictReport};
use crate::sampling;
use crate::structures::{iso_m_to_n, CopyIndex, MMPoint, MPoint, NPoint};
use crate::Rational;

/// The map `(n, x) -> (n, a x + b)` on `M`, `a > 0`, fixing every `(n, inf)`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct AffineAuto {
    a: Rational,
    b: Rational,
}

impl AffineAuto {
    pub fn new(a: Rational, b: Rational) -> Result<Self> {
        if !a.is_positive() {
            return Err(Error::NonPositiveScale(a.to_string()));
        }
        Ok(AffineAuto { a, b })
    }

    pub fn identity() -> Self {
        AffineAuto {
            a: Rational::one(),
            b: Rational::zero(),
        }
    }

    pub fn scale(&self) -> &Rational {
        &self.a
    }

    pub fn shift(&self) -> &Rational {
        &self.b
    }

    pub fn to_moebius(&self) -> MoebiusMap {
        MoebiusMap::affine(self.a.clone(), self.b.clone()).expect("a > 0")
    }

    pub fn apply_rational(&self, q: &Rational) -> Rational {
        &self.a * q + &self.b
    }

    pub fn apply_point(&self, p: &ProjPoint) -> ProjPoint {
        match p {
            ProjPoint::Infinity => ProjPoint::Infinity,
            ProjPoint::Real(q) => ProjPoint::Real(self.apply_rational(q)),
        }
    }
}

impl fmt::Display for AffineAuto {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "tau({},{})", self.a, self.b)
    }
}

/// Fixed points of an affine automorphism of `M`, as a symbolic set. Every
/// `(n, inf)` is always fixed.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize)]
#[serde(tag = "kind", content = "point", rename_all = "kebab-case")]
pub enum FixedPointSet {
    AllPoints,
    InfinityFiberOnly,
    /// `{(n, inf)} ∪ {(n, q)}` over all levels `n`.
    InfinityFiberPlus(#[serde(serialize_with = "ser_display")] Rational),
}

fn ser_display<S: serde::Serializer>(q: &Rational, s: S) -> std::result::Result<S::Ok, S::Error> {
    s.serialize_str(&q.to_string())
}

impl FixedPointSet {
    pub fn contains(&self, p: &MPoint) -> bool {
        match (self, &p.point) {
            (FixedPointSet::AllPoints, _) | (_, ProjPoint::Infinity) => true,
            (FixedPointSet::InfinityFiberOnly, ProjPoint::Real(_)) => false,
            (FixedPointSet::InfinityFiberPlus(q), ProjPoint::Real(r)) => q == r,
        }
    }

    pub fn is_subset_of(&self, other: &FixedPointSet) -> bool {
        use FixedPointSet::*;
        match (self, other) {
            (_, AllPoints) | (InfinityFiberOnly, _) => true,
            (AllPoints, _) => false,
            (InfinityFiberPlus(p), InfinityFiberPlus(q)) => p == q,
            (InfinityFiberPlus(_), InfinityFiberOnly) => false,
        }
    }
}

impl fmt::Display for FixedPointSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            FixedPointSet::AllPoints => f.write_str("all-points"),
            FixedPointSet::InfinityFiberOnly => f.write_str("infinity-fiber-only"),
            FixedPointSet::InfinityFiberPlus(q) => write!(f, "infinity-fiber-plus {q}"),
        }
    }
}

/// Solves `a x + b = x` exactly.
pub fn fixed_points_affine(t: &AffineAuto) -> FixedPointSet {
    if t.a.is_one() {
        if t.b.is_zero() {
            FixedPointSet::AllPoints
        } else {
            FixedPointSet::InfinityFiberOnly
        }
    } else {
        FixedPointSet::InfinityFiberPlus(&t.b / (Rational::one() - &t.a))
    }
}

pub fn apply_affine_m(t: &AffineAuto, p: &MPoint) -> MPoint {
    MPoint {
        level: p.level.clone(),
        point: t.apply_point(&p.point),
    }
}

/// Acts by `first` on copy 1 and by `second` on copy 2 of `M + M`.
pub fn apply_doubled(first: &AffineAuto, second: &AffineAuto, p: &MMPoint) -> MMPoint {
    let t = match p.copy {
        CopyIndex::First => first,
        CopyIndex::Second => second,
    };
    MMPoint {
        copy: p.copy,
        point: apply_affine_m(t, &p.point),
    }
}

/// `tau_{a,b}`: `t` on the first copy, identity on the second.
pub fn tau_doubled(t: &AffineAuto, p: &MMPoint) -> MMPoint {
    match p.copy {
        CopyIndex::First => apply_doubled(t, &AffineAuto::identity(), p),
        CopyIndex::Second => p.clone(),
    }
}

pub fn translate_n(alpha: f64, x: NPoint) -> NPoint {
    NPoint::new(x.value() + alpha).expect("finite translation of a finite point")
}

/// The translation of `N` that, transported to `M`, sends `p` to `q`.
pub fn transitivity_shift(p: &MPoint, q: &MPoint) -> f64 {
    iso_m_to_n(q) - iso_m_to_n(p)
}

/// Samples `budget` instances `(x; y1..y4)` and checks that `g` preserves
/// `P0` on each one, exactly.
pub fn check_p0_automorphism(g: &MoebiusMap, budget: u64, seed: u64) -> VerdictReport {
    let check = p0_automorphism_check("p0_automorphism", g, budget, seed);
    VerdictReport::new("p0-automorphism", seed, 0.0, vec![check])
}

pub(crate) fn p0_automorphism_check(id: &str, g: &MoebiusMap, budget: u64, seed: u64) -> Check {
    use crate::structures::p0;

    let mut rng = sampling::rng_for(seed, id);
    let mut tally = Tally::new(id, "remark:proto-affine");
    for _ in 0..budget {
        let (x, ys) = sampling::p0_instance(&mut rng);
        let before = p0(&x, &ys);
        let after = p0(&g.apply(&x), &ys.each_ref().map(|y| g.apply(y)));
        tally.record(before == after, || {
            format!(
                "g={g} x={x} y=({}, {}, {}, {}) before={before} after={after}",
                ys[0], ys[1], ys[2], ys[3]
            )
        });
    }
    tally.finish()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::structures::{embed, iso_n_to_m};
    use crate::{int, rat};

    fn tau(a: i64, b: i64) -> AffineAuto {
        AffineAuto::new(int(a), int(b)).unwrap()
    }

    fn mp(n: i64, p: ProjPoint) -> MPoint {
        MPoint::new(n, p)
    }

    #[test]
    fn scale_must_be_positive() {
        assert!(AffineAuto::new(int(0), int(1)).is_err());
        assert!(AffineAuto::new(int(-2), int(1)).is_err());
    }

    #[test]
    fn apply_affine_examples() {
        let p = mp(3, ProjPoint::Real(int(5)));
        assert_eq!(apply_affine_m(&tau(1, 0), &p), p);
        assert_eq!(apply_affine_m(&tau(2, 0), &p), mp(3, ProjPoint::Real(int(10))));
        let inf = mp(0, ProjPoint::Infinity);
        assert_eq!(apply_affine_m(&tau(1, 1), &inf), inf);
    }

    #[test]
    fn tau_doubled_examples() {
        let q = embed(CopyIndex::Second, mp(4, ProjPoint::Real(rat(1, 3))));
        assert_eq!(tau_doubled(&tau(7, -2), &q), q);
        let p = embed(CopyIndex::First, mp(0, ProjPoint::Real(int(3))));
        assert_eq!(
            tau_doubled(&tau(2, 0), &p),
            embed(CopyIndex::First, mp(0, ProjPoint::Real(int(6))))
        );
        let inf = embed(CopyIndex::First, mp(0, ProjPoint::Infinity));
        assert_eq!(tau_doubled(&tau(1, 1), &inf), inf);
    }

    #[test]
    fn fixed_point_examples() {
        assert_eq!(fixed_points_affine(&tau(1, 1)), FixedPointSet::InfinityFiberOnly);
        assert_eq!(
            fixed_points_affine(&tau(2, 0)),
            FixedPointSet::InfinityFiberPlus(int(0))
        );
        assert_eq!(fixed_points_affine(&tau(1, 0)), FixedPointSet::AllPoints);
        // 3x + 4 = x  =>  x = -2
        assert_eq!(
            fixed_points_affine(&tau(3, 4)),
            FixedPointSet::InfinityFiberPlus(int(-2))
        );
        assert_eq!(fixed_points_affine(&tau(1, 1)).to_string(), "infinity-fiber-only");
    }

    #[test]
    fn fixed_sets_match_pointwise_behaviour() {
        let t = tau(3, 4);
        let fix = fixed_points_affine(&t);
        for q in [-2, 0, 5] {
            let p = mp(1, ProjPoint::Real(int(q)));
            assert_eq!(fix.contains(&p), apply_affine_m(&t, &p) == p);
        }
        assert!(fix.contains(&mp(-9, ProjPoint::Infinity)));
    }

    #[test]
    fn subset_relation() {
        use FixedPointSet::*;
        assert!(InfinityFiberOnly.is_subset_of(&InfinityFiberPlus(int(0))));
        assert!(InfinityFiberOnly.is_subset_of(&AllPoints));
        assert!(!AllPoints.is_subset_of(&InfinityFiberPlus(int(0))));
        assert!(!InfinityFiberPlus(int(1)).is_subset_of(&InfinityFiberPlus(int(0))));
        assert!(!InfinityFiberPlus(int(1)).is_subset_of(&InfinityFiberOnly));
    }

    #[test]
    fn translate_n_examples() {
        use std::f64::consts::{FRAC_PI_2, FRAC_PI_4, PI};
        let x = NPoint::new(1.25).unwrap();
        assert_eq!(translate_n(0.0, x), x);
        assert_eq!(translate_n(PI, x), x.succ());

        let np = |v: f64| NPoint::new(v).unwrap();
        let ys = [FRAC_PI_4, FRAC_PI_2, FRAC_PI_2, 3.0 * FRAC_PI_4].map(np);
        let before = crate::structures::p_n(np(0.0), &ys, 1e-9);
        let after = crate::structures::p_n(
            translate_n(1.0, np(0.0)),
            &ys.map(|y| translate_n(1.0, y)),
            1e-9,
        );
        assert!(before && after);
    }

    #[test]
    fn transitivity_shift_moves_p_to_q() {
        let p = mp(0, ProjPoint::Real(int(2)));
        let q = mp(-1, ProjPoint::Infinity);
        let alpha = transitivity_shift(&p, &q);
        let image = iso_n_to_m(translate_n(alpha, NPoint::new(iso_m_to_n(&p)).unwrap()));
        assert_eq!(image.level, q.level);
        assert_eq!(image.point, None);
    }

    #[test]
    fn p0_automorphism_examples() {
        let id = check_p0_automorphism(&MoebiusMap::identity(), 500, 1);
        assert!(id.all_pass());
        let affine = MoebiusMap::affine(int(2), int(3)).unwrap();
        assert!(check_p0_automorphism(&affine, 2000, 2).all_pass());
        let inv = MoebiusMap::new(int(0), int(1), int(1), int(0)).unwrap();
        assert!(check_p0_automorphism(&inv, 2000, 3).all_pass());
    }
}
