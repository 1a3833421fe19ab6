//! Basis extraction for an imaginary over an affine-span pregeometry.
//!
//! Elements are rational affine forms in abstract generators. The closure of
//! a set `S` over a context `C` is the affine span of `S ∪ C`, i.e. the
//! linear span of `S ∪ C ∪ {1}`. An imaginary `e` contributes its defining
//! forms to the context, so "closure over `e`" is span with `e` added.

use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Sub};

use num_traits::{One, Signed, Zero};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::linalg::{Echelon, SparseVec};
use crate::Rational;

/// Largest tuple the brute-force subset oracle accepts.
pub const ORACLE_LIMIT: usize = 8;

/// `constant + sum coeffs[i] * g_i`, with zero coefficients never stored.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Default)]
pub struct AffineForm {
    constant: Rational,
    coeffs: BTreeMap<usize, Rational>,
}

impl AffineForm {
    pub fn generator(i: usize) -> Self {
        AffineForm {
            constant: Rational::zero(),
            coeffs: BTreeMap::from([(i, Rational::one())]),
        }
    }

    pub fn constant(q: Rational) -> Self {
        AffineForm {
            constant: q,
            coeffs: BTreeMap::new(),
        }
    }

    pub fn from_terms(constant: Rational, terms: impl IntoIterator<Item = (usize, Rational)>) -> Self {
        let mut f = AffineForm::constant(constant);
        for (i, q) in terms {
            f.add_term(i, &q);
        }
        f
    }

    fn add_term(&mut self, i: usize, q: &Rational) {
        let e = self.coeffs.entry(i).or_insert_with(Rational::zero);
        *e += q;
        if e.is_zero() {
            self.coeffs.remove(&i);
        }
    }

    pub fn constant_term(&self) -> &Rational {
        &self.constant
    }

    pub fn coefficient(&self, i: usize) -> Rational {
        self.coeffs.get(&i).cloned().unwrap_or_else(Rational::zero)
    }

    pub fn is_constant(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn generators(&self) -> impl Iterator<Item = usize> + '_ {
        self.coeffs.keys().copied()
    }

    /// Column 0 holds the constant, column `i + 1` the coefficient of `g_i`.
    pub(crate) fn to_vector(&self) -> SparseVec {
        let mut v: SparseVec = self.coeffs.iter().map(|(i, q)| (i + 1, q.clone())).collect();
        if !self.constant.is_zero() {
            v.insert(0, self.constant.clone());
        }
        v
    }

    fn from_vector(v: &SparseVec) -> Self {
        AffineForm::from_terms(
            v.get(&0).cloned().unwrap_or_else(Rational::zero),
            v.iter()
                .filter(|(c, _)| **c > 0)
                .map(|(c, q)| (c - 1, q.clone())),
        )
    }
}

impl Add for &AffineForm {
    type Output = AffineForm;
    fn add(self, rhs: &AffineForm) -> AffineForm {
        let mut out = self.clone();
        out.constant += &rhs.constant;
        for (i, q) in &rhs.coeffs {
            out.add_term(*i, q);
        }
        out
    }
}

impl Sub for &AffineForm {
    type Output = AffineForm;
    fn sub(self, rhs: &AffineForm) -> AffineForm {
        self + &(rhs * &-Rational::one())
    }
}

impl Mul<&Rational> for &AffineForm {
    type Output = AffineForm;
    fn mul(self, s: &Rational) -> AffineForm {
        if s.is_zero() {
            return AffineForm::default();
        }
        AffineForm {
            constant: &self.constant * s,
            coeffs: self.coeffs.iter().map(|(i, q)| (*i, q * s)).collect(),
        }
    }
}

impl fmt::Display for AffineForm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for (i, q) in &self.coeffs {
            let sign = if q.is_negative() { "-" } else { "+" };
            let mag = q.abs();
            if first {
                if q.is_negative() {
                    f.write_str("-")?;
                }
            } else {
                write!(f, " {sign} ")?;
            }
            if !mag.is_one() {
                write!(f, "{mag}*")?;
            }
            write!(f, "g{i}")?;
            first = false;
        }
        if first {
            write!(f, "{}", self.constant)
        } else if !self.constant.is_zero() {
            let sign = if self.constant.is_negative() { "-" } else { "+" };
            write!(f, " {sign} {}", self.constant.abs())
        } else {
            Ok(())
        }
    }
}

/// The class of an imaginary, recorded through affine forms that define it.
/// Forms are kept as the reduced echelon basis of their span (constant
/// column first), so equal spans compare equal.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Imaginary {
    invariants: Vec<AffineForm>,
}

impl Imaginary {
    pub fn new(forms: Vec<AffineForm>) -> Result<Self> {
        if forms.is_empty() {
            return Err(Error::EmptyImaginary);
        }
        let mut ech = Echelon::new();
        for f in &forms {
            ech.insert(f.to_vector());
        }
        let mut invariants: Vec<AffineForm> = ech.rows().map(AffineForm::from_vector).collect();
        if invariants.is_empty() {
            invariants.push(AffineForm::default());
        }
        Ok(Imaginary { invariants })
    }

    pub fn invariants(&self) -> &[AffineForm] {
        &self.invariants
    }
}

fn span_of<'a>(forms: impl IntoIterator<Item = &'a AffineForm>) -> Echelon {
    let mut ech = Echelon::new();
    ech.insert(AffineForm::constant(Rational::one()).to_vector());
    for f in forms {
        ech.insert(f.to_vector());
    }
    ech
}

/// `dim span(tuple ∪ context ∪ {1}) - dim span(context ∪ {1})`.
pub fn rank(tuple: &[AffineForm], context: &[AffineForm]) -> usize {
    let mut ech = span_of(context);
    let base = ech.rank();
    for f in tuple {
        ech.insert(f.to_vector());
    }
    ech.rank() - base
}

/// Whether `m` lies in the closure of `s` over `context`.
pub fn closure_member(m: &AffineForm, s: &[AffineForm], context: &[AffineForm]) -> bool {
    span_of(s.iter().chain(context)).contains(&m.to_vector())
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct RankCertificate {
    pub a_indices: Vec<usize>,
    pub c_indices: Vec<usize>,
    pub rank_a_over_empty: usize,
    pub rank_a_over_e: usize,
}

impl RankCertificate {
    pub fn basis_size(&self) -> usize {
        self.a_indices.len()
    }
}

/// Each named postcondition of a basis certificate with its outcome.
pub fn certificate_postconditions(
    x: &[AffineForm],
    e: &Imaginary,
    cert: &RankCertificate,
) -> [(&'static str, bool); 3] {
    let pick = |idx: &[usize]| idx.iter().map(|&i| x[i].clone()).collect::<Vec<_>>();
    let a = pick(&cert.a_indices);
    let c = pick(&cert.c_indices);
    let ac: Vec<AffineForm> = a.iter().chain(&c).cloned().collect();

    let e_in_ac = e.invariants().iter().all(|f| closure_member(f, &ac, &[]));
    let c_in_ae = c.iter().all(|f| closure_member(f, &a, e.invariants()));
    let ranks = cert.rank_a_over_empty == cert.basis_size()
        && cert.rank_a_over_e == cert.basis_size()
        && rank(&a, &[]) == cert.rank_a_over_empty
        && rank(&a, e.invariants()) == cert.rank_a_over_e;
    [
        ("e_definable_over_ac", e_in_ac),
        ("c_definable_over_ae", c_in_ae),
        ("rank_equality", ranks),
    ]
}

/// Splits `x` into a basis `A` over `e` and the remaining coordinates `c`,
/// choosing greedily from the left, and certifies the split.
pub fn extract_basis(x: &[AffineForm], e: &Imaginary) -> Result<RankCertificate> {
    let span_x = span_of(x);
    if let Some(i) = e
        .invariants()
        .iter()
        .position(|f| !span_x.contains(&f.to_vector()))
    {
        return Err(Error::InvariantNotDefinable(i));
    }

    let mut over_e = span_of(e.invariants());
    let mut a_indices = Vec::new();
    let mut c_indices = Vec::new();
    for (i, f) in x.iter().enumerate() {
        if over_e.insert(f.to_vector()) {
            a_indices.push(i);
        } else {
            c_indices.push(i);
        }
    }

    let a: Vec<AffineForm> = a_indices.iter().map(|&i| x[i].clone()).collect();
    let cert = RankCertificate {
        rank_a_over_empty: rank(&a, &[]),
        rank_a_over_e: rank(&a, e.invariants()),
        a_indices,
        c_indices,
    };
    if let Some((name, _)) = certificate_postconditions(x, e, &cert)
        .into_iter()
        .find(|(_, ok)| !ok)
    {
        return Err(Error::PostconditionFailed(name));
    }
    Ok(cert)
}

/// Rank by exhaustive search: the size of the largest subset of `tuple` in
/// which no element lies in the closure of the others over `context`.
pub fn rank_oracle(tuple: &[AffineForm], context: &[AffineForm]) -> Result<usize> {
    if tuple.len() > ORACLE_LIMIT {
        return Err(Error::TooLarge(tuple.len()));
    }
    let n = tuple.len();
    let mut best = 0;
    for mask in 0u32..(1 << n) {
        let size = mask.count_ones() as usize;
        if size <= best {
            continue;
        }
        let members: Vec<usize> = (0..n).filter(|i| mask & (1 << i) != 0).collect();
        let independent = members.iter().all(|&i| {
            let others: Vec<AffineForm> = members
                .iter()
                .filter(|&&j| j != i)
                .map(|&j| tuple[j].clone())
                .collect();
            !closure_member(&tuple[i], &others, context)
        });
        if independent {
            best = size;
        }
    }
    Ok(best)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::{int, rat};

    fn g(i: usize) -> AffineForm {
        AffineForm::generator(i)
    }

    fn k(n: i64, d: i64) -> AffineForm {
        AffineForm::constant(rat(n, d))
    }

    #[test]
    fn rank_examples() {
        assert_eq!(rank(&[g(1), g(2)], &[]), 2);
        assert_eq!(rank(&[g(1), g(2)], &[&g(1) - &g(2)]), 1);
        assert_eq!(rank(&[k(7, 1), k(3, 2)], &[]), 0);
        assert_eq!(rank(&[k(7, 1), k(3, 2)], &[g(4)]), 0);
    }

    #[test]
    fn oracle_examples() {
        assert_eq!(rank_oracle(&[g(1), g(2)], &[]).unwrap(), 2);
        assert_eq!(rank_oracle(&[g(1), g(2)], &[&g(1) - &g(2)]).unwrap(), 1);
        assert_eq!(rank_oracle(&[k(7, 1), k(3, 2)], &[]).unwrap(), 0);
        assert_eq!(rank_oracle(&[], &[]).unwrap(), 0);
        let gens: Vec<_> = (0..8).map(g).collect();
        assert_eq!(rank_oracle(&gens, &[]).unwrap(), 8);
        let nine: Vec<_> = (0..9).map(g).collect();
        assert_eq!(rank_oracle(&nine, &[]), Err(Error::TooLarge(9)));
    }

    #[test]
    fn closure_examples() {
        let ctx = [&g(1) - &g(2)];
        assert!(closure_member(&g(2), &[g(1)], &ctx));
        assert!(!closure_member(&g(3), &[g(1)], &ctx));
        assert!(closure_member(&k(-5, 3), &[], &[]));
    }

    #[test]
    fn extract_basis_examples() {
        let e = Imaginary::new(vec![&g(1) - &g(2)]).unwrap();
        let cert = extract_basis(&[g(1), g(2)], &e).unwrap();
        assert_eq!(cert.a_indices, vec![0]);
        assert_eq!(cert.c_indices, vec![1]);
        assert_eq!((cert.rank_a_over_empty, cert.rank_a_over_e), (1, 1));

        let consts = [k(5, 1), k(9, 1)];
        let e = Imaginary::new(vec![&consts[0] - &consts[1]]).unwrap();
        let cert = extract_basis(&consts, &e).unwrap();
        assert!(cert.a_indices.is_empty());
        assert_eq!(cert.c_indices, vec![0, 1]);
        assert_eq!((cert.rank_a_over_empty, cert.rank_a_over_e), (0, 0));

        let e = Imaginary::new(vec![&g(1) - &g(2)]).unwrap();
        let cert = extract_basis(&[g(1), g(2), g(3)], &e).unwrap();
        assert_eq!(cert.a_indices, vec![0, 2]);
        assert_eq!(cert.c_indices, vec![1]);
        assert_eq!((cert.rank_a_over_empty, cert.rank_a_over_e), (2, 2));
    }

    #[test]
    fn extract_basis_rejects_undefinable_invariant() {
        let e = Imaginary::new(vec![g(1), &g(1) + &g(7)]).unwrap();
        assert!(matches!(
            extract_basis(&[g(1), g(2)], &e),
            Err(Error::InvariantNotDefinable(_))
        ));
    }

    #[test]
    fn imaginary_is_canonical() {
        let a = Imaginary::new(vec![&g(1) - &g(2)]).unwrap();
        let b = Imaginary::new(vec![&(&g(2) - &g(1)) * &int(3)]).unwrap();
        assert_eq!(a, b);
        assert_eq!(Imaginary::new(vec![]), Err(Error::EmptyImaginary));
        let zero = Imaginary::new(vec![AffineForm::default()]).unwrap();
        assert_eq!(zero.invariants().len(), 1);
    }

    #[test]
    fn display_forms() {
        assert_eq!((&g(1) - &g(2)).to_string(), "g1 - g2");
        assert_eq!((&(&g(0) * &rat(-3, 2)) + &k(4, 1)).to_string(), "-3/2*g0 + 4");
        assert_eq!(k(-4, 1).to_string(), "-4");
    }
}
