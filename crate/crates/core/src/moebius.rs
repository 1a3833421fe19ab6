//! The real projective line over the rationals and the group of fractional
//! linear transformations acting on it.

use std::fmt;
use std::str::FromStr;

use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};
use crate::Rational;

/// A point of the projective line.
///
/// The derived order puts `Infinity` below every real point, which is the
/// identification of `RP^1` with `[-inf, +inf)`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum ProjPoint {
    Infinity,
    Real(Rational),
}

impl ProjPoint {
    pub fn real(q: Rational) -> Self {
        ProjPoint::Real(q)
    }

    pub fn is_infinity(&self) -> bool {
        matches!(self, ProjPoint::Infinity)
    }

    pub fn as_real(&self) -> Option<&Rational> {
        match self {
            ProjPoint::Real(q) => Some(q),
            ProjPoint::Infinity => None,
        }
    }

    /// Lossy view for floating-point cross-checks; `None` is infinity.
    pub fn to_f64(&self) -> Option<f64> {
        self.as_real().map(|q| q.to_f64().unwrap_or(f64::NAN))
    }
}

impl From<Rational> for ProjPoint {
    fn from(q: Rational) -> Self {
        ProjPoint::Real(q)
    }
}

impl fmt::Display for ProjPoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ProjPoint::Infinity => f.write_str("inf"),
            ProjPoint::Real(q) => write!(f, "{q}"),
        }
    }
}

/// Parses `p/q`, an integer, or `inf`.
pub fn parse_rational(s: &str) -> Result<Rational> {
    let s = s.trim();
    let bad = || Error::Parse(format!("invalid rational literal `{s}`"));
    let q = match s.split_once('/') {
        Some((n, d)) => {
            let n = n.trim().parse().map_err(|_| bad())?;
            let d: num_bigint::BigInt = d.trim().parse().map_err(|_| bad())?;
            if d.is_zero() {
                return Err(bad());
            }
            Rational::new(n, d)
        }
        None => Rational::from_integer(s.parse().map_err(|_| bad())?),
    };
    Ok(q)
}

impl FromStr for ProjPoint {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim() {
            "inf" | "∞" => Ok(ProjPoint::Infinity),
            other => parse_rational(other).map(ProjPoint::Real),
        }
    }
}

/// An invertible 2x2 rational matrix `(a b / c d)` acting by
/// `z -> (a z + b) / (c z + d)`, stored in canonical form.
///
/// The canonical form divides the matrix by its first nonzero entry, so two
/// matrices that differ by a nonzero scalar compare equal. Scaling by a real
/// scalar multiplies the determinant by a square, so the sign of the
/// determinant is an invariant of the map.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct MoebiusMap {
    m: [Rational; 4],
}

impl MoebiusMap {
    pub fn new(a: Rational, b: Rational, c: Rational, d: Rational) -> Result<Self> {
        if (&a * &d - &b * &c).is_zero() {
            return Err(Error::SingularMatrix);
        }
        Ok(Self::canonical([a, b, c, d]))
    }

    fn canonical(mut m: [Rational; 4]) -> Self {
        let lead = m
            .iter()
            .find(|e| !e.is_zero())
            .cloned()
            .expect("nonsingular matrix has a nonzero entry");
        if !lead.is_one() {
            for e in m.iter_mut() {
                *e = &*e / &lead;
            }
        }
        MoebiusMap { m }
    }

    pub fn identity() -> Self {
        MoebiusMap {
            m: [
                Rational::one(),
                Rational::zero(),
                Rational::zero(),
                Rational::one(),
            ],
        }
    }

    /// The affine map `z -> a z + b`.
    pub fn affine(a: Rational, b: Rational) -> Result<Self> {
        Self::new(a, b, Rational::zero(), Rational::one())
    }

    pub fn entries(&self) -> [&Rational; 4] {
        [&self.m[0], &self.m[1], &self.m[2], &self.m[3]]
    }

    pub fn determinant(&self) -> Rational {
        let [a, b, c, d] = &self.m;
        a * d - b * c
    }

    /// Affine maps are exactly the stabilizer of infinity.
    pub fn is_affine(&self) -> bool {
        self.m[2].is_zero()
    }

    pub fn apply(&self, p: &ProjPoint) -> ProjPoint {
        let [a, b, c, d] = &self.m;
        match p {
            ProjPoint::Real(q) => {
                let den = c * q + d;
                if den.is_zero() {
                    ProjPoint::Infinity
                } else {
                    ProjPoint::Real((a * q + b) / den)
                }
            }
            ProjPoint::Infinity => {
                if c.is_zero() {
                    ProjPoint::Infinity
                } else {
                    ProjPoint::Real(a / c)
                }
            }
        }
    }

    /// Floating-point action, `None` standing for infinity.
    pub fn apply_f64(&self, z: Option<f64>) -> Option<f64> {
        let [a, b, c, d] = self.m.each_ref().map(|e| e.to_f64().unwrap_or(f64::NAN));
        match z {
            Some(z) => {
                let den = c * z + d;
                if den == 0.0 {
                    None
                } else {
                    Some((a * z + b) / den)
                }
            }
            None if c == 0.0 => None,
            None => Some(a / c),
        }
    }

    /// `self ∘ other`: apply `other` first.
    pub fn compose(&self, other: &MoebiusMap) -> MoebiusMap {
        let [a, b, c, d] = &self.m;
        let [e, f, g, h] = &other.m;
        Self::canonical([
            a * e + b * g,
            a * f + b * h,
            c * e + d * g,
            c * f + d * h,
        ])
    }

    pub fn inverse(&self) -> MoebiusMap {
        let [a, b, c, d] = &self.m;
        Self::canonical([d.clone(), -b, -c, a.clone()])
    }

    /// Multiplies every entry by `s` without re-canonicalizing. Only useful
    /// for exercising scalar invariance.
    pub fn raw_scaled(&self, s: &Rational) -> [Rational; 4] {
        self.m.each_ref().map(|e| e * s)
    }

    /// True when the determinant is positive, i.e. the map preserves the
    /// cyclic orientation of the projective line.
    pub fn preserves_orientation(&self) -> bool {
        self.determinant().is_positive()
    }
}

impl fmt::Display for MoebiusMap {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let [a, b, c, d] = &self.m;
        write!(f, "[{a} {b}; {c} {d}]")
    }
}

/// The fixed transformation sending `x` to infinity: the identity when `x`
/// is already infinity, otherwise `z -> -1 / (z - x)`.
pub fn canonical_to_infinity(x: &ProjPoint) -> MoebiusMap {
    match x {
        ProjPoint::Infinity => MoebiusMap::identity(),
        ProjPoint::Real(x) => MoebiusMap::canonical([
            Rational::zero(),
            -Rational::one(),
            Rational::one(),
            -x.clone(),
        ]),
    }
}

/// With `c = cot(alpha)`, the map `u -> (1 - c u) / (u + c)` carries
/// `u = -cot(x)` to `cot(x - alpha)`. Its determinant is `-c^2 - 1`, so it is
/// never singular.
pub fn cot_conjugation_map(c: &Rational) -> MoebiusMap {
    MoebiusMap::canonical([-c.clone(), Rational::one(), Rational::one(), c.clone()])
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::{int, rat};

    fn m(a: i64, b: i64, c: i64, d: i64) -> MoebiusMap {
        MoebiusMap::new(int(a), int(b), int(c), int(d)).unwrap()
    }

    fn real(n: i64, d: i64) -> ProjPoint {
        ProjPoint::Real(rat(n, d))
    }

    #[test]
    fn construction_and_canonical_form() {
        assert_eq!(m(1, 0, 0, 1), MoebiusMap::identity());
        assert_eq!(m(2, 0, 0, 2), MoebiusMap::identity());
        assert_eq!(m(-3, 0, 0, -3), MoebiusMap::identity());
        assert_eq!(
            MoebiusMap::new(int(1), int(2), int(2), int(4)),
            Err(Error::SingularMatrix)
        );
    }

    #[test]
    fn apply_examples() {
        assert_eq!(
            MoebiusMap::identity().apply(&ProjPoint::Infinity),
            ProjPoint::Infinity
        );
        let g = m(0, -1, 1, -1);
        assert_eq!(g.apply(&real(3, 1)), real(-1, 2));
        assert_eq!(g.apply(&real(1, 1)), ProjPoint::Infinity);
        assert_eq!(g.apply(&ProjPoint::Infinity), real(0, 1));
    }

    #[test]
    fn compose_and_inverse_examples() {
        let g = m(0, -1, 1, -1);
        assert_eq!(MoebiusMap::identity().compose(&g), g);
        assert_eq!(g.compose(&g.inverse()), MoebiusMap::identity());
        assert_eq!(m(1, 1, 0, 1).compose(&m(2, 0, 0, 1)), m(2, 1, 0, 1));
        assert_eq!(MoebiusMap::identity().inverse(), MoebiusMap::identity());
        assert_eq!(m(1, 1, 0, 1).inverse(), m(1, -1, 0, 1));
        assert_eq!(m(2, 0, 0, 1).inverse(), m(1, 0, 0, 2));
        assert_eq!(m(2, 0, 0, 1).inverse().apply(&real(3, 1)), real(3, 2));
    }

    #[test]
    fn canonical_to_infinity_examples() {
        assert_eq!(
            canonical_to_infinity(&ProjPoint::Infinity),
            MoebiusMap::identity()
        );
        assert_eq!(canonical_to_infinity(&real(0, 1)), m(0, -1, 1, 0));
        let f = canonical_to_infinity(&real(5, 1));
        assert_eq!(f.apply(&real(5, 1)), ProjPoint::Infinity);
        assert_eq!(f.apply(&real(6, 1)), real(-1, 1));
    }

    #[test]
    fn cot_map_examples() {
        let g = cot_conjugation_map(&int(1));
        assert_eq!(g.apply(&real(-1, 1)), ProjPoint::Infinity);
        assert_eq!(g.apply(&real(0, 1)), real(1, 1));
        // alpha = pi/4, x = pi/2: cot(x - alpha) = 1 and -cot(x) = 0
        let alpha = std::f64::consts::FRAC_PI_4;
        let x = std::f64::consts::FRAC_PI_2;
        let lhs = 1.0 / (x - alpha).tan();
        let u = -1.0 / x.tan();
        let rhs = g.apply_f64(Some(u)).unwrap();
        assert!((lhs - rhs).abs() <= 1e-9 * lhs.abs().max(1.0));
        for c in [rat(0, 1), rat(3, 7), rat(-5, 2)] {
            let det = cot_conjugation_map(&c).determinant();
            assert!(det.is_negative());
        }
    }

    #[test]
    fn affine_is_stabilizer() {
        assert!(m(2, 3, 0, 1).is_affine());
        assert!(!m(0, 1, 1, 0).is_affine());
        assert_eq!(m(2, 3, 0, 1).apply(&ProjPoint::Infinity), ProjPoint::Infinity);
    }

    #[test]
    fn projective_order_puts_infinity_first() {
        assert!(ProjPoint::Infinity < real(-1000, 1));
        assert!(real(1, 3) < real(1, 2));
    }

    #[test]
    fn parse_points() {
        assert_eq!("inf".parse::<ProjPoint>().unwrap(), ProjPoint::Infinity);
        assert_eq!("-3/6".parse::<ProjPoint>().unwrap(), real(-1, 2));
        assert_eq!("7".parse::<ProjPoint>().unwrap(), real(7, 1));
        assert!("1/0".parse::<ProjPoint>().is_err());
        assert!("x".parse::<ProjPoint>().is_err());
    }
}
