//! The predicate `P0` on the projective line and the three structures built
//! on top of it: `M = (Z x RP^1, <, succ, P)`, its trigonometric twin
//! `N = (R, <, x + pi, P')`, and the doubled structure `M + M`.

use std::cmp::Ordering;
use std::f64::consts::PI;
use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_traits::{FromPrimitive, One, ToPrimitive};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::moebius::{canonical_to_infinity, ProjPoint};

/// Distance to a multiple of pi below which `iso_n_to_m` reports the point
/// at infinity of the fiber.
pub const POLE_TOLERANCE: f64 = 1e-9;

/// `P0(x; y1, y2, y3, y4)`: `x` differs from every `yi`, and
/// `f(y1) - f(y2) = f(y3) - f(y4)` for a transformation `f` sending `x` to
/// infinity. Any such `f` gives the same answer; the canonical one is used.
pub fn p0(x: &ProjPoint, ys: &[ProjPoint; 4]) -> bool {
    if ys.contains(x) {
        return false;
    }
    let f = canonical_to_infinity(x);
    let v = ys.each_ref().map(|y| {
        f.apply(y)
            .as_real()
            .cloned()
            .expect("f(y) is finite for y != x")
    });
    &v[0] - &v[1] == &v[2] - &v[3]
}

/// The unique `y1` with `P0(x; y1, y2, y3, y4)`, namely
/// `f^-1(f(y2) + f(y3) - f(y4))`.
pub fn solve_p0_fiber(
    x: &ProjPoint,
    y2: &ProjPoint,
    y3: &ProjPoint,
    y4: &ProjPoint,
) -> Result<ProjPoint> {
    if x == y2 || x == y3 || x == y4 {
        return Err(Error::DegenerateFiber);
    }
    let f = canonical_to_infinity(x);
    let fin = |y: &ProjPoint| f.apply(y).as_real().cloned().expect("finite off x");
    let target = fin(y2) + fin(y3) - fin(y4);
    let y1 = f.inverse().apply(&ProjPoint::Real(target));
    if &y1 == x {
        return Err(Error::DegenerateFiber);
    }
    debug_assert!(p0(x, &[y1.clone(), y2.clone(), y3.clone(), y4.clone()]));
    Ok(y1)
}

/// A point `(n, p)` of `M`. The derived order is lexicographic, with the
/// point at infinity leftmost in each fiber.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct MPoint {
    pub level: BigInt,
    pub point: ProjPoint,
}

impl MPoint {
    pub fn new(level: impl Into<BigInt>, point: ProjPoint) -> Self {
        MPoint {
            level: level.into(),
            point,
        }
    }

    pub fn succ(&self) -> MPoint {
        MPoint {
            level: &self.level + BigInt::one(),
            point: self.point.clone(),
        }
    }

    pub fn pred(&self) -> MPoint {
        MPoint {
            level: &self.level - BigInt::one(),
            point: self.point.clone(),
        }
    }
}

impl fmt::Display for MPoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({},{})", self.level, self.point)
    }
}

/// Parses `n,p` or `(n,p)` where `p` is a rational literal or `inf`.
impl FromStr for MPoint {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let t = s.trim();
        let t = t
            .strip_prefix('(')
            .and_then(|t| t.strip_suffix(')'))
            .unwrap_or(t);
        let (n, p) = t
            .split_once(',')
            .ok_or_else(|| Error::Parse(format!("expected `level,point`, got `{s}`")))?;
        let level = n
            .trim()
            .parse::<BigInt>()
            .map_err(|_| Error::Parse(format!("invalid level `{n}`")))?;
        Ok(MPoint::new(level, p.parse()?))
    }
}

/// The unique point of the open interval `(x, succ x)` whose projective
/// coordinate is `q`. Returns `None` for `q == x.point`.
pub fn point_above(x: &MPoint, q: ProjPoint) -> Option<MPoint> {
    match q.cmp(&x.point) {
        Ordering::Equal => None,
        Ordering::Greater => Some(MPoint::new(x.level.clone(), q)),
        Ordering::Less => Some(MPoint::new(&x.level + BigInt::one(), q)),
    }
}

pub fn m_lt(p: &MPoint, q: &MPoint) -> bool {
    p < q
}

fn strictly_between(x: &MPoint, ys: &[MPoint; 4]) -> bool {
    let top = x.succ();
    ys.iter().all(|y| x < y && y < &top)
}

/// The 5-ary predicate of `M`.
pub fn p_m(x: &MPoint, ys: &[MPoint; 4]) -> bool {
    strictly_between(x, ys) && p0(&x.point, &ys.each_ref().map(|y| y.point.clone()))
}

/// A point of `N`, a finite real number.
#[derive(Debug, Clone, Copy, PartialEq, PartialOrd, Serialize)]
pub struct NPoint(f64);

impl NPoint {
    pub fn new(x: f64) -> Option<Self> {
        x.is_finite().then_some(NPoint(x))
    }

    pub fn value(self) -> f64 {
        self.0
    }

    /// `x + pi`.
    pub fn succ(self) -> NPoint {
        NPoint(self.0 + PI)
    }
}

pub fn cot(x: f64) -> f64 {
    x.cos() / x.sin()
}

/// `t1 - t2 == t3 - t4` up to `tol` relative to the magnitude of the terms.
pub fn balanced(t: [f64; 4], tol: f64) -> bool {
    let scale = t.iter().map(|v| v.abs()).sum::<f64>().max(1.0);
    ((t[0] - t[1]) - (t[2] - t[3])).abs() <= tol * scale
}

/// The 5-ary predicate of `N`, decided in floating point.
pub fn p_n(x: NPoint, ys: &[NPoint; 4], tol: f64) -> bool {
    let x = x.0;
    if !ys.iter().all(|y| x < y.0 && y.0 < x + PI) {
        return false;
    }
    balanced(ys.map(|y| cot(y.0 - x)), tol)
}

/// Image of an `N` point in `M`, with the projective coordinate carried in
/// floating point (`None` is infinity).
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ApproxMPoint {
    #[serde(serialize_with = "ser_bigint")]
    pub level: BigInt,
    pub point: Option<f64>,
}

fn ser_bigint<S: serde::Serializer>(n: &BigInt, s: S) -> std::result::Result<S::Ok, S::Error> {
    s.serialize_str(&n.to_string())
}

impl ApproxMPoint {
    pub fn succ(&self) -> ApproxMPoint {
        ApproxMPoint {
            level: &self.level + BigInt::one(),
            point: self.point,
        }
    }

    pub fn cmp_approx(&self, other: &ApproxMPoint) -> Ordering {
        self.level.cmp(&other.level).then_with(|| match (self.point, other.point) {
            (None, None) => Ordering::Equal,
            (None, Some(_)) => Ordering::Less,
            (Some(_), None) => Ordering::Greater,
            (Some(a), Some(b)) => a.partial_cmp(&b).unwrap_or(Ordering::Equal),
        })
    }

    pub fn lt(&self, other: &ApproxMPoint) -> bool {
        self.cmp_approx(other) == Ordering::Less
    }
}

impl fmt::Display for ApproxMPoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.point {
            None => write!(f, "({},inf)", self.level),
            Some(p) => write!(f, "({},{p})", self.level),
        }
    }
}

/// `x -> (floor(x / pi), -cot(x))`, sending points within
/// [`POLE_TOLERANCE`] of `k pi` to `(k, inf)`.
pub fn iso_n_to_m(x: NPoint) -> ApproxMPoint {
    let t = x.0 / PI;
    let k = t.round();
    if (x.0 - k * PI).abs() <= POLE_TOLERANCE {
        return ApproxMPoint {
            level: BigInt::from_f64(k).expect("finite"),
            point: None,
        };
    }
    ApproxMPoint {
        level: BigInt::from_f64(t.floor()).expect("finite"),
        point: Some(-cot(x.0)),
    }
}

/// Inverse of [`iso_n_to_m`] on points with an `f64`-representable level.
pub fn iso_m_to_n(p: &MPoint) -> f64 {
    let n = p.level.to_f64().unwrap_or(f64::NAN);
    match p.point.to_f64() {
        None => n * PI,
        // -cot(x) = r with x in (0, pi)  <=>  x = atan2(1, -r)
        Some(r) => n * PI + 1f64.atan2(-r),
    }
}

/// `P0` on floating-point projective coordinates.
pub fn p0_approx(x: Option<f64>, ys: &[Option<f64>; 4], tol: f64) -> bool {
    if ys.contains(&x) {
        return false;
    }
    let f = |y: Option<f64>| match (x, y) {
        (None, Some(y)) => y,
        (Some(_), None) => 0.0,
        (Some(x), Some(y)) => -1.0 / (y - x),
        (None, None) => unreachable!("excluded above"),
    };
    balanced(ys.map(f), tol)
}

/// The predicate of `M` evaluated on floating-point images.
pub fn p_m_approx(x: &ApproxMPoint, ys: &[ApproxMPoint; 4], tol: f64) -> bool {
    let top = x.succ();
    ys.iter().all(|y| x.lt(y) && y.lt(&top))
        && p0_approx(x.point, &ys.each_ref().map(|y| y.point), tol)
}

/// Which copy of `M` a point of `M + M` lives in.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub enum CopyIndex {
    First,
    Second,
}

impl CopyIndex {
    pub fn from_index(i: u8) -> Option<Self> {
        match i {
            1 => Some(CopyIndex::First),
            2 => Some(CopyIndex::Second),
            _ => None,
        }
    }
}

/// A point of `M + M`; ordered by copy, then by the point of `M`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct MMPoint {
    pub copy: CopyIndex,
    pub point: MPoint,
}

impl MMPoint {
    pub fn succ(&self) -> MMPoint {
        MMPoint {
            copy: self.copy,
            point: self.point.succ(),
        }
    }
}

pub fn embed(copy: CopyIndex, p: MPoint) -> MMPoint {
    MMPoint { copy, point: p }
}

pub fn mm_lt(p: &MMPoint, q: &MMPoint) -> bool {
    p < q
}

/// The predicate of `M + M`: the predicate of `M` when all five points sit in
/// the same copy, false otherwise.
pub fn p_mm(x: &MMPoint, ys: &[MMPoint; 4]) -> bool {
    ys.iter().all(|y| y.copy == x.copy) && p_m(&x.point, &ys.each_ref().map(|y| y.point.clone()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::{int, rat};
    use std::f64::consts::{FRAC_PI_2, FRAC_PI_4};

    fn r(n: i64) -> ProjPoint {
        ProjPoint::Real(int(n))
    }

    fn mp(n: i64, p: ProjPoint) -> MPoint {
        MPoint::new(n, p)
    }

    fn np(x: f64) -> NPoint {
        NPoint::new(x).unwrap()
    }

    #[test]
    fn p0_examples() {
        assert!(p0(&ProjPoint::Infinity, &[r(1), r(2), r(3), r(4)]));
        assert!(p0(&r(0), &[r(2), r(3), r(3), r(6)]));
        assert!(!p0(&r(0), &[r(1), r(2), r(3), r(4)]));
        assert!(!p0(&r(1), &[r(1), r(2), r(3), r(4)]));
        // f(inf) = 0 under z -> -1/(z - x)
        assert!(p0(&r(0), &[ProjPoint::Infinity, r(1), ProjPoint::Infinity, r(1)]));
    }

    #[test]
    fn fiber_examples() {
        let inf = ProjPoint::Infinity;
        assert_eq!(solve_p0_fiber(&inf, &r(2), &r(3), &r(4)).unwrap(), r(1));
        assert_eq!(solve_p0_fiber(&r(0), &r(3), &r(3), &r(6)).unwrap(), r(2));
        let y2 = ProjPoint::Real(rat(-7, 3));
        assert_eq!(solve_p0_fiber(&inf, &y2, &r(5), &r(5)).unwrap(), y2);
        assert_eq!(
            solve_p0_fiber(&r(2), &r(2), &r(3), &r(4)),
            Err(Error::DegenerateFiber)
        );
    }

    #[test]
    fn m_order_examples() {
        let inf = ProjPoint::Infinity;
        assert!(m_lt(&mp(0, inf.clone()), &mp(0, r(5))));
        assert!(m_lt(&mp(0, r(7)), &mp(1, inf)));
        assert!(!m_lt(&mp(0, r(3)), &mp(0, r(2))));
    }

    #[test]
    fn p_m_examples() {
        let inf = ProjPoint::Infinity;
        let ys = [1, 2, 3, 4].map(|i| mp(0, r(i)));
        assert!(p_m(&mp(0, inf), &ys));
        let ys = [2, 3, 3, 6].map(|i| mp(0, r(i)));
        assert!(p_m(&mp(0, r(0)), &ys));
        let ys = [mp(1, r(5)), mp(0, r(3)), mp(0, r(3)), mp(0, r(6))];
        assert!(!p_m(&mp(0, r(0)), &ys));
        // crossing into the next fiber below succ(x) is allowed
        let x = mp(0, r(0));
        let y1 = solve_p0_fiber(&r(0), &r(-1), &r(3), &r(6)).unwrap();
        let ys = [mp(1, y1.clone()), mp(1, r(-1)), mp(0, r(3)), mp(0, r(6))];
        assert!(y1 < r(0));
        assert!(p_m(&x, &ys));
    }

    #[test]
    fn p_n_examples() {
        let ys = [FRAC_PI_4, FRAC_PI_2, FRAC_PI_2, 3.0 * FRAC_PI_4].map(np);
        assert!(p_n(np(0.0), &ys, 1e-9));
        let ys = [FRAC_PI_4, FRAC_PI_2, FRAC_PI_2, FRAC_PI_2].map(np);
        assert!(!p_n(np(0.0), &ys, 1e-9));
        let ys = [0.0, FRAC_PI_2, FRAC_PI_2, FRAC_PI_2].map(np);
        assert!(!p_n(np(0.0), &ys, 1e-9));
        let ys = [-1.0, FRAC_PI_2, FRAC_PI_2, FRAC_PI_2].map(np);
        assert!(!p_n(np(0.0), &ys, 1e-9));
    }

    #[test]
    fn iso_examples() {
        let p = iso_n_to_m(np(0.0));
        assert_eq!(p.level, BigInt::from(0));
        assert_eq!(p.point, None);

        let p = iso_n_to_m(np(FRAC_PI_2));
        assert_eq!(p.level, BigInt::from(0));
        assert!(p.point.unwrap().abs() < 1e-9);

        let p = iso_n_to_m(np(-FRAC_PI_4));
        assert_eq!(p.level, BigInt::from(-1));
        assert!((p.point.unwrap() - 1.0).abs() < 1e-9);

        // a float just below 3 pi still lands at (3, inf)
        let p = iso_n_to_m(np(3.0 * PI - 1e-12));
        assert_eq!(p.level, BigInt::from(3));
        assert_eq!(p.point, None);
    }

    #[test]
    fn iso_inverse_round_trip() {
        for p in [mp(0, r(0)), mp(-2, r(5)), mp(3, ProjPoint::Infinity)] {
            let back = iso_n_to_m(np(iso_m_to_n(&p)));
            assert_eq!(back.level, p.level);
            match (back.point, p.point.to_f64()) {
                (None, None) => {}
                (Some(a), Some(b)) => assert!((a - b).abs() < 1e-9),
                other => panic!("mismatch {other:?}"),
            }
        }
    }

    #[test]
    fn doubled_examples() {
        let a = embed(CopyIndex::First, mp(0, r(3)));
        let b = embed(CopyIndex::Second, mp(-5, ProjPoint::Infinity));
        assert!(mm_lt(&a, &b));

        let x2 = embed(CopyIndex::Second, mp(0, r(0)));
        let ys2 = [2, 3, 3, 6].map(|i| embed(CopyIndex::Second, mp(0, r(i))));
        assert!(p_mm(&x2, &ys2));

        let mut mixed = ys2.clone();
        mixed[2].copy = CopyIndex::First;
        assert!(!p_mm(&x2, &mixed));
    }

    #[test]
    fn parse_mpoint() {
        assert_eq!("0,inf".parse::<MPoint>().unwrap(), mp(0, ProjPoint::Infinity));
        assert_eq!(
            "(-2, 3/4)".parse::<MPoint>().unwrap(),
            mp(-2, ProjPoint::Real(rat(3, 4)))
        );
        assert!("3".parse::<MPoint>().is_err());
    }
}
