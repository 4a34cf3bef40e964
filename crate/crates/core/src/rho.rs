//! The ordered ring `Z[ρ, ρ⁻¹]` of linear difference operators.
//!
//! [`RhoSpec`] fixes the order type of ρ (the cut it makes in the real line,
//! possibly infinitesimally shifted, or infinite). Every nonzero [`LinOp`] then
//! has a uniform sign on positive group elements, decided exactly by
//! [`RhoSpec::sign`].

use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use thiserror::Error;

use crate::upoly::{sign_i8, UPoly};

/// Outcome of the sign oracle.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug)]
pub enum Sign {
    Negative,
    Zero,
    Positive,
}

impl Sign {
    pub fn negate(self) -> Sign {
        match self {
            Sign::Negative => Sign::Positive,
            Sign::Zero => Sign::Zero,
            Sign::Positive => Sign::Negative,
        }
    }

    pub fn to_ordering(self) -> Ordering {
        match self {
            Sign::Negative => Ordering::Less,
            Sign::Zero => Ordering::Equal,
            Sign::Positive => Ordering::Greater,
        }
    }

    fn from_i8(s: i8) -> Sign {
        match s.signum() {
            -1 => Sign::Negative,
            0 => Sign::Zero,
            _ => Sign::Positive,
        }
    }

    pub fn times(self, other: Sign) -> Sign {
        match (self, other) {
            (Sign::Zero, _) | (_, Sign::Zero) => Sign::Zero,
            (a, b) if a == b => Sign::Positive,
            _ => Sign::Negative,
        }
    }
}

/// A Laurent polynomial `Σ cₑ ρᵉ` with integer coefficients.
///
/// The map from exponents to coefficients never stores a zero coefficient, so
/// derived equality is equality of Laurent polynomials.
#[derive(Clone, PartialEq, Eq, Hash, Debug, Default, PartialOrd, Ord)]
pub struct LinOp {
    terms: BTreeMap<i64, BigInt>,
}

impl LinOp {
    pub fn zero() -> Self {
        LinOp::default()
    }

    pub fn one() -> Self {
        Self::constant(1)
    }

    pub fn constant<T: Into<BigInt>>(c: T) -> Self {
        Self::monomial(c, 0)
    }

    /// The operator ρ.
    pub fn rho() -> Self {
        Self::monomial(1, 1)
    }

    pub fn monomial<T: Into<BigInt>>(c: T, exp: i64) -> Self {
        let c = c.into();
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert(exp, c);
        }
        LinOp { terms }
    }

    /// Builds from `(exponent, coefficient)` pairs, summing repeated exponents.
    pub fn from_terms<I, T>(pairs: I) -> Self
    where
        I: IntoIterator<Item = (i64, T)>,
        T: Into<BigInt>,
    {
        let mut terms: BTreeMap<i64, BigInt> = BTreeMap::new();
        for (e, c) in pairs {
            *terms.entry(e).or_default() += c.into();
        }
        terms.retain(|_, c| !c.is_zero());
        LinOp { terms }
    }

    /// Canonical `(exponent, coefficient)` list, exponents strictly increasing.
    pub fn terms(&self) -> impl DoubleEndedIterator<Item = (i64, &BigInt)> + '_ {
        self.terms.iter().map(|(e, c)| (*e, c))
    }

    pub fn coeff(&self, exp: i64) -> BigInt {
        self.terms.get(&exp).cloned().unwrap_or_default()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn min_exp(&self) -> Option<i64> {
        self.terms.keys().next().copied()
    }

    pub fn max_exp(&self) -> Option<i64> {
        self.terms.keys().next_back().copied()
    }

    pub fn leading_coeff(&self) -> BigInt {
        self.terms.values().next_back().cloned().unwrap_or_default()
    }

    /// `ρᵏ · self`.
    pub fn shift(&self, k: i64) -> Self {
        LinOp {
            terms: self.terms.iter().map(|(e, c)| (e + k, c.clone())).collect(),
        }
    }

    pub fn scale(&self, k: &BigInt) -> Self {
        if k.is_zero() {
            return LinOp::zero();
        }
        LinOp {
            terms: self.terms.iter().map(|(e, c)| (*e, c * k)).collect(),
        }
    }

    /// Exact division of every coefficient by `k`; the caller guarantees divisibility.
    pub(crate) fn div_exact(&self, k: &BigInt) -> Self {
        LinOp {
            terms: self.terms.iter().map(|(e, c)| (*e, c / k)).collect(),
        }
    }

    pub fn content(&self) -> BigInt {
        self.terms.values().fold(BigInt::zero(), |acc, c| acc.gcd(c))
    }

    pub fn pow(&self, n: u32) -> Self {
        (0..n).fold(LinOp::one(), |acc, _| &acc * self)
    }

    /// Splits `self = ρ^(-m) · f(ρ)` with `f` an ordinary polynomial and
    /// `m = max(0, -min_exp)`; returns `(m, f)`.
    pub fn clear_negative(&self) -> (i64, UPoly) {
        let m = self.min_exp().map_or(0, |e| (-e).max(0));
        let shifted = self.shift(m);
        let deg = shifted.max_exp().unwrap_or(0).max(0) as usize;
        let mut coeffs = vec![BigRational::zero(); deg + 1];
        for (e, c) in shifted.terms() {
            coeffs[e as usize] = BigRational::from_integer(c.clone());
        }
        (m, UPoly::new(coeffs))
    }

    /// Reads an integer-coefficient polynomial back as an operator.
    pub fn from_integer_upoly(p: &UPoly) -> Self {
        Self::from_terms(p.coeffs().iter().enumerate().map(|(i, c)| {
            debug_assert!(c.is_integer());
            (i as i64, c.to_integer())
        }))
    }

    pub fn eval_rational(&self, x: &BigRational) -> BigRational {
        self.terms.iter().fold(BigRational::zero(), |acc, (e, c)| {
            acc + BigRational::from_integer(c.clone()) * pow_rational(x, *e)
        })
    }
}

fn pow_rational(x: &BigRational, e: i64) -> BigRational {
    let p = num_traits::pow(x.clone(), e.unsigned_abs() as usize);
    if e < 0 {
        p.recip()
    } else {
        p
    }
}

impl Add for &LinOp {
    type Output = LinOp;
    fn add(self, rhs: &LinOp) -> LinOp {
        let mut terms = self.terms.clone();
        for (e, c) in &rhs.terms {
            *terms.entry(*e).or_default() += c;
        }
        terms.retain(|_, c| !c.is_zero());
        LinOp { terms }
    }
}

impl Sub for &LinOp {
    type Output = LinOp;
    fn sub(self, rhs: &LinOp) -> LinOp {
        self + &(-rhs)
    }
}

impl Neg for &LinOp {
    type Output = LinOp;
    fn neg(self) -> LinOp {
        LinOp {
            terms: self.terms.iter().map(|(e, c)| (*e, -c)).collect(),
        }
    }
}

impl Mul for &LinOp {
    type Output = LinOp;
    fn mul(self, rhs: &LinOp) -> LinOp {
        let mut terms: BTreeMap<i64, BigInt> = BTreeMap::new();
        for (e1, c1) in &self.terms {
            for (e2, c2) in &rhs.terms {
                *terms.entry(e1 + e2).or_default() += c1 * c2;
            }
        }
        terms.retain(|_, c| !c.is_zero());
        LinOp { terms }
    }
}

macro_rules! forward_owned {
    ($($tr:ident :: $m:ident),*) => {$(
        impl $tr for LinOp {
            type Output = LinOp;
            fn $m(self, rhs: LinOp) -> LinOp { (&self).$m(&rhs) }
        }
    )*};
}
forward_owned!(Add::add, Sub::sub, Mul::mul);

impl Neg for LinOp {
    type Output = LinOp;
    fn neg(self) -> LinOp {
        -&self
    }
}

impl fmt::Display for LinOp {
    /// Highest exponent first, in the symbol `r`: `3*r^2 + 4 - r^-1`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        for (i, (e, c)) in self.terms.iter().rev().enumerate() {
            let abs = c.abs();
            match (i, c.is_negative()) {
                (0, true) => write!(f, "-")?,
                (0, false) => {}
                (_, true) => write!(f, " - ")?,
                (_, false) => write!(f, " + ")?,
            }
            let mono = match e {
                0 => String::new(),
                1 => "r".to_string(),
                _ => format!("r^{e}"),
            };
            if *e == 0 {
                write!(f, "{abs}")?;
            } else if abs.is_one() {
                write!(f, "{mono}")?;
            } else {
                write!(f, "{abs}*{mono}")?;
            }
        }
        Ok(())
    }
}

/// `|I|_ρ = i₀ + i₁ρ + ⋯ + iₙρⁿ` for a multi-index `I`.
pub fn rho_length<T: Copy + Into<BigInt>>(index: &[T]) -> LinOp {
    LinOp::from_terms(index.iter().enumerate().map(|(j, i)| (j as i64, (*i).into())))
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum RhoError {
    #[error("rational rho must be at least 1, got {0}")]
    RationalBelowOne(BigRational),
    #[error("minimal polynomial must be nonconstant")]
    ConstantPolynomial,
    #[error("minimal polynomial must have positive leading coefficient")]
    NonPositiveLeading,
    #[error("minimal polynomial must be primitive (coefficient gcd 1)")]
    NotPrimitive,
    #[error("minimal polynomial must be squarefree")]
    NotSquarefree,
    #[error("minimal polynomial has the rational root {0}; pass the irreducible factor instead")]
    RationalRoot(BigRational),
    #[error("isolating interval [{lo}, {hi}] contains {count} roots, expected exactly one")]
    NotIsolating {
        lo: BigRational,
        hi: BigRational,
        count: usize,
    },
    #[error("the isolated root must be at least 1")]
    RootBelowOne,
    #[error("an infinitesimally lowered rho needs a base strictly greater than 1")]
    MinusEpsAtOne,
}

/// A real algebraic number ≥ 1 given by a minimal polynomial and an isolating
/// interval with rational endpoints.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct AlgebraicReal {
    minpoly: Vec<BigInt>,
    lo: BigRational,
    hi: BigRational,
    poly: UPoly,
    // Tight isolating interval computed once at construction; endpoints are
    // either equal (rational root) or both non-roots with opposite signs.
    iso_lo: BigRational,
    iso_hi: BigRational,
}

const REFINE_WIDTH_BITS: usize = 64;

impl AlgebraicReal {
    /// `coeffs` is constant-first.
    pub fn new(coeffs: Vec<BigInt>, lo: BigRational, hi: BigRational) -> Result<Self, RhoError> {
        let poly = UPoly::from_bigints(&coeffs);
        let mut coeffs = coeffs;
        while coeffs.last().is_some_and(|c| c.is_zero()) {
            coeffs.pop();
        }
        match poly.degree() {
            None | Some(0) => return Err(RhoError::ConstantPolynomial),
            _ => {}
        }
        if !coeffs.last().unwrap().is_positive() {
            return Err(RhoError::NonPositiveLeading);
        }
        if !coeffs.iter().fold(BigInt::zero(), |a, c| a.gcd(c)).is_one() {
            return Err(RhoError::NotPrimitive);
        }
        if !poly.is_squarefree() {
            return Err(RhoError::NotSquarefree);
        }
        if poly.degree() > Some(1) {
            if let Some(r) = rational_root(&coeffs) {
                return Err(RhoError::RationalRoot(r));
            }
        }
        let count = poly.count_roots_in(&lo, &hi);
        if count != 1 {
            return Err(RhoError::NotIsolating { lo, hi, count });
        }
        let (mut iso_lo, mut iso_hi) = refine(&poly, lo.clone(), hi.clone(), REFINE_WIDTH_BITS);
        let one = BigRational::one();
        if iso_lo == iso_hi {
            if iso_lo < one {
                return Err(RhoError::RootBelowOne);
            }
        } else if iso_hi <= one {
            return Err(RhoError::RootBelowOne);
        } else if iso_lo < one {
            let s_one = sign_i8(&poly.eval(&one));
            if s_one == 0 {
                iso_hi = one.clone();
                iso_lo = one;
            } else if s_one == sign_i8(&poly.eval(&iso_lo)) {
                iso_lo = one;
            } else {
                return Err(RhoError::RootBelowOne);
            }
        }
        Ok(AlgebraicReal {
            minpoly: coeffs,
            lo,
            hi,
            poly,
            iso_lo,
            iso_hi,
        })
    }

    /// The rational number `value` as a degree-one algebraic number.
    pub fn rational(value: &BigRational) -> Result<Self, RhoError> {
        let coeffs = vec![-value.numer().clone(), value.denom().clone()];
        Self::new(coeffs, value.clone(), value.clone())
    }

    pub fn minpoly_coeffs(&self) -> &[BigInt] {
        &self.minpoly
    }

    pub fn minpoly(&self) -> &UPoly {
        &self.poly
    }

    pub fn interval(&self) -> (&BigRational, &BigRational) {
        (&self.lo, &self.hi)
    }

    pub fn is_rational(&self) -> bool {
        self.iso_lo == self.iso_hi
    }

    /// An isolating interval of width at most `2^-bits` (exact endpoints).
    pub fn enclosure(&self, bits: usize) -> (BigRational, BigRational) {
        refine(&self.poly, self.iso_lo.clone(), self.iso_hi.clone(), bits)
    }

    /// Sign of the polynomial `f` evaluated at this number.
    pub fn sign_of(&self, f: &UPoly) -> Sign {
        let r = f.rem(&self.poly);
        if r.is_zero() {
            return Sign::Zero;
        }
        if self.is_rational() {
            return Sign::from_i8(sign_i8(&r.eval(&self.iso_lo)));
        }
        let g = r.gcd(&self.poly);
        if !g.is_constant() && g.count_roots_in(&self.iso_lo, &self.iso_hi) > 0 {
            return Sign::Zero;
        }
        let (mut lo, mut hi) = (self.iso_lo.clone(), self.iso_hi.clone());
        let s_lo = sign_i8(&self.poly.eval(&lo));
        // r(root) ≠ 0, so the interval image shrinks away from 0 eventually.
        loop {
            let (a, b) = interval_eval(&r, &lo, &hi);
            if a.is_positive() {
                return Sign::Positive;
            }
            if b.is_negative() {
                return Sign::Negative;
            }
            let mid = (&lo + &hi) / BigRational::from_integer(2.into());
            let s_mid = sign_i8(&self.poly.eval(&mid));
            if s_mid == 0 {
                return Sign::from_i8(sign_i8(&r.eval(&mid)));
            }
            if s_mid == s_lo {
                lo = mid;
            } else {
                hi = mid;
            }
        }
    }
}

/// Shrinks a sign-changing isolating interval by bisection.
fn refine(poly: &UPoly, mut lo: BigRational, mut hi: BigRational, bits: usize) -> (BigRational, BigRational) {
    if poly.eval(&lo).is_zero() {
        return (lo.clone(), lo);
    }
    if poly.eval(&hi).is_zero() {
        return (hi.clone(), hi);
    }
    let width = BigRational::new(BigInt::one(), BigInt::one() << bits);
    let s_lo = sign_i8(&poly.eval(&lo));
    let two = BigRational::from_integer(2.into());
    while &hi - &lo > width {
        let mid = (&lo + &hi) / &two;
        let s = sign_i8(&poly.eval(&mid));
        if s == 0 {
            return (mid.clone(), mid);
        }
        if s == s_lo {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    (lo, hi)
}

/// Exact interval Horner evaluation of `p` over `[lo, hi]`.
pub(crate) fn interval_eval(p: &UPoly, lo: &BigRational, hi: &BigRational) -> (BigRational, BigRational) {
    let mut a = BigRational::zero();
    let mut b = BigRational::zero();
    for c in p.coeffs().iter().rev() {
        let prods = [&a * lo, &a * hi, &b * lo, &b * hi];
        let mn = prods.iter().min().unwrap().clone();
        let mx = prods.iter().max().unwrap().clone();
        a = mn + c;
        b = mx + c;
    }
    (a, b)
}

fn rational_root(coeffs: &[BigInt]) -> Option<BigRational> {
    // x = 0 is a root iff the constant coefficient vanishes.
    if coeffs[0].is_zero() {
        return Some(BigRational::zero());
    }
    let poly = UPoly::from_bigints(coeffs);
    let ps = divisors(&coeffs[0].abs());
    let qs = divisors(&coeffs.last().unwrap().abs());
    for p in &ps {
        for q in &qs {
            for s in [1i32, -1] {
                let cand = BigRational::new(p * BigInt::from(s), q.clone());
                if poly.eval(&cand).is_zero() {
                    return Some(cand);
                }
            }
        }
    }
    None
}

fn divisors(n: &BigInt) -> Vec<BigInt> {
    // Trial division; minimal polynomials with huge coefficients are not a
    // practical input here.
    let mut out = Vec::new();
    let mut d = BigInt::one();
    while &d * &d <= *n {
        if (n % &d).is_zero() {
            out.push(d.clone());
            let q = n / &d;
            if q != d {
                out.push(q);
            }
        }
        d += 1;
    }
    out
}

/// The order type of ρ.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub enum RhoSpec {
    /// ρ = p/q ≥ 1.
    Rational(BigRational),
    AlgebraicReal(AlgebraicReal),
    /// ρ infinitesimally above the base.
    AlgebraicPlusEps(AlgebraicReal),
    /// ρ infinitesimally below the base (base > 1).
    AlgebraicMinusEps(AlgebraicReal),
    /// ρ larger than every integer.
    Infinite,
}

impl RhoSpec {
    pub fn rational<T: Into<BigInt>>(p: T, q: T) -> Result<Self, RhoError> {
        let v = BigRational::new(p.into(), q.into());
        if v < BigRational::one() {
            return Err(RhoError::RationalBelowOne(v));
        }
        Ok(RhoSpec::Rational(v))
    }

    /// ρ = 1, the isometric case.
    pub fn one() -> Self {
        RhoSpec::Rational(BigRational::one())
    }

    pub fn algebraic(coeffs: Vec<BigInt>, lo: BigRational, hi: BigRational) -> Result<Self, RhoError> {
        Ok(RhoSpec::AlgebraicReal(AlgebraicReal::new(coeffs, lo, hi)?))
    }

    pub fn plus_eps(base: AlgebraicReal) -> Self {
        RhoSpec::AlgebraicPlusEps(base)
    }

    pub fn minus_eps(base: AlgebraicReal) -> Result<Self, RhoError> {
        if base.is_rational() && base.iso_lo.is_one() {
            return Err(RhoError::MinusEpsAtOne);
        }
        Ok(RhoSpec::AlgebraicMinusEps(base))
    }

    /// ρ = √2, isolated in [1, 2].
    pub fn sqrt2() -> Self {
        Self::algebraic(
            vec![BigInt::from(-2), BigInt::zero(), BigInt::one()],
            BigRational::one(),
            BigRational::from_integer(2.into()),
        )
        .expect("x^2 - 2 isolates sqrt 2 in [1, 2]")
    }

    /// Minimal polynomial over the integers when ρ is algebraic (the kernel of
    /// the action of `Z[ρ]` is generated by it); `None` otherwise.
    pub fn minimal_polynomial(&self) -> Option<UPoly> {
        match self {
            RhoSpec::Rational(v) => Some(UPoly::from_bigints(&[-v.numer().clone(), v.denom().clone()])),
            RhoSpec::AlgebraicReal(a) => Some(a.poly.clone()),
            _ => None,
        }
    }

    /// True when ρ > 1 in this order type.
    pub fn exceeds_one(&self) -> bool {
        self.sign(&(&LinOp::rho() - &LinOp::one())) == Sign::Positive
    }

    /// The uniform sign of `l` on positive elements.
    pub fn sign(&self, l: &LinOp) -> Sign {
        if l.is_zero() {
            return Sign::Zero;
        }
        match self {
            RhoSpec::Rational(v) => Sign::from_i8(sign_i8(&l.eval_rational(v))),
            RhoSpec::AlgebraicReal(a) => a.sign_of(&l.clear_negative().1),
            RhoSpec::Infinite => {
                if l.leading_coeff().is_positive() {
                    Sign::Positive
                } else {
                    Sign::Negative
                }
            }
            RhoSpec::AlgebraicPlusEps(a) | RhoSpec::AlgebraicMinusEps(a) => {
                let below = matches!(self, RhoSpec::AlgebraicMinusEps(_));
                let mut f = l.clear_negative().1;
                let mut parity = Sign::Positive;
                loop {
                    let s = a.sign_of(&f);
                    if s != Sign::Zero {
                        return s.times(parity);
                    }
                    f = f.derivative();
                    // f ≠ 0 has a root of finite multiplicity at the base.
                    debug_assert!(!f.is_zero());
                    if below {
                        parity = parity.negate();
                    }
                }
            }
        }
    }

    pub fn compare(&self, a: &LinOp, b: &LinOp) -> Ordering {
        self.sign(&(a - b)).to_ordering()
    }

    /// Canonical representative of `l` in `Z[ρ]/Ker`, up to a positive unit.
    ///
    /// For algebraic ρ the result is `c·ρᵐ·l mod minpoly` with `c` the least
    /// positive integer clearing denominators; otherwise `l` itself.
    pub fn reduce(&self, l: &LinOp) -> LinOp {
        match self.minimal_polynomial() {
            None => l.clone(),
            Some(m) => {
                let r = l.clear_negative().1.rem(&m);
                let c = r.denominator_lcm();
                LinOp::from_integer_upoly(&r.scale(&BigRational::from_integer(c)))
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(n: i64, d: i64) -> BigRational {
        BigRational::new(n.into(), d.into())
    }

    fn lin(pairs: &[(i64, i64)]) -> LinOp {
        LinOp::from_terms(pairs.iter().copied())
    }

    #[test]
    fn sign_examples() {
        let two = RhoSpec::rational(2, 1).unwrap();
        assert_eq!(two.sign(&lin(&[(1, 1), (0, -2)])), Sign::Zero);
        let s2 = RhoSpec::sqrt2();
        assert_eq!(s2.sign(&lin(&[(2, 1), (0, -2)])), Sign::Zero);
        assert_eq!(s2.sign(&lin(&[(1, 3), (0, -4)])), Sign::Positive);
        assert_eq!(RhoSpec::Infinite.sign(&lin(&[(1, -1), (0, 1000)])), Sign::Negative);
        let base = AlgebraicReal::rational(&q(1, 1)).unwrap();
        let one_eps = RhoSpec::plus_eps(base);
        assert_eq!(one_eps.sign(&lin(&[(1, 1), (0, -1)])), Sign::Positive);
    }

    #[test]
    fn eps_uses_derivatives() {
        let base = AlgebraicReal::rational(&q(2, 1)).unwrap();
        let above = RhoSpec::plus_eps(base.clone());
        let below = RhoSpec::minus_eps(base).unwrap();
        // (ρ − 2)² is positive on both sides.
        let sq = lin(&[(2, 1), (1, -4), (0, 4)]);
        assert_eq!(above.sign(&sq), Sign::Positive);
        assert_eq!(below.sign(&sq), Sign::Positive);
        let l = lin(&[(1, 1), (0, -2)]);
        assert_eq!(above.sign(&l), Sign::Positive);
        assert_eq!(below.sign(&l), Sign::Negative);
        // negative exponents: ρ⁻¹ − 1/2 changes sign at 2.
        let inv = lin(&[(-1, 2), (0, -1)]);
        assert_eq!(above.sign(&inv), Sign::Negative);
        assert_eq!(below.sign(&inv), Sign::Positive);
    }

    #[test]
    fn ring_examples() {
        assert!((&LinOp::rho() + &(-&LinOp::rho())).is_zero());
        assert_eq!(&LinOp::monomial(1, -1) * &LinOp::rho(), LinOp::one());
        let a = lin(&[(1, 1), (0, 1)]);
        let b = lin(&[(1, 1), (0, -1)]);
        assert_eq!(&a * &b, lin(&[(2, 1), (0, -1)]));
    }

    #[test]
    fn reduce_examples() {
        let s2 = RhoSpec::sqrt2();
        assert!(s2.reduce(&lin(&[(2, 1), (0, -2)])).is_zero());
        assert_eq!(s2.reduce(&lin(&[(3, 1)])), lin(&[(1, 2)]));
        let l = lin(&[(1, 1), (0, 1)]);
        assert_eq!(RhoSpec::Infinite.reduce(&l), l);
        // ρ⁻¹ is cleared by the positive unit ρ.
        assert_eq!(s2.reduce(&lin(&[(-1, 1)])), LinOp::one());
        let r32 = RhoSpec::rational(3, 2).unwrap();
        assert_eq!(r32.reduce(&LinOp::rho()), LinOp::constant(3));
    }

    #[test]
    fn rho_length_examples() {
        assert_eq!(rho_length(&[0u32, 1]), LinOp::rho());
        assert_eq!(rho_length(&[2u32, 1]), lin(&[(0, 2), (1, 1)]));
        assert_eq!(rho_length(&[1u32, 0, 3]), lin(&[(0, 1), (2, 3)]));
    }

    #[test]
    fn compare_examples() {
        assert_eq!(RhoSpec::one().compare(&LinOp::rho(), &LinOp::one()), Ordering::Equal);
        assert_eq!(RhoSpec::sqrt2().compare(&LinOp::rho(), &LinOp::constant(2)), Ordering::Less);
        assert_eq!(
            RhoSpec::Infinite.compare(&LinOp::rho(), &LinOp::constant(1_000_000)),
            Ordering::Greater
        );
    }

    #[test]
    fn spec_validation() {
        assert!(RhoSpec::rational(1, 2).is_err());
        let c = |v: &[i64]| v.iter().map(|x| BigInt::from(*x)).collect::<Vec<_>>();
        // 1 − 2x² has its positive root 1/√2 < 1.
        assert_eq!(
            RhoSpec::algebraic(c(&[1, 0, -2]), q(0, 1), q(1, 1)),
            Err(RhoError::NonPositiveLeading)
        );
        assert_eq!(
            RhoSpec::algebraic(c(&[-1, 0, 2]), q(0, 1), q(1, 1)),
            Err(RhoError::RootBelowOne)
        );
        assert!(matches!(
            RhoSpec::algebraic(c(&[-2, 0, 1]), q(-2, 1), q(2, 1)),
            Err(RhoError::NotIsolating { count: 2, .. })
        ));
        assert!(matches!(
            RhoSpec::algebraic(c(&[2, -3, 1]), q(3, 2), q(3, 1)),
            Err(RhoError::RationalRoot(_))
        ));
        assert_eq!(
            RhoSpec::minus_eps(AlgebraicReal::rational(&q(1, 1)).unwrap()),
            Err(RhoError::MinusEpsAtOne)
        );
        // root exactly 1 with a loose interval
        assert!(RhoSpec::algebraic(c(&[-1, 1]), q(0, 1), q(2, 1)).is_ok());
    }
}
