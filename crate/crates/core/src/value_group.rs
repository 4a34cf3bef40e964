//! The prime divisible ordered `Z[ρ, ρ⁻¹]`-module: classes `[(g, L)]` of
//! operator fractions with `L > 0`, ordered through the sign oracle of ρ.
//!
//! Elements are kept in a normal form so that structural equality coincides
//! with equality in the group:
//!
//! * algebraic ρ (including rational ρ): the numerator is the reduced
//!   polynomial of degree below `deg minpoly`, the denominator a positive
//!   integer, and their common content is removed;
//! * transcendental order types: numerator and denominator are coprime, the
//!   denominator is an ordinary polynomial with nonzero constant term and
//!   positive sign, and the joint integer content is 1.

use std::cmp::Ordering;
use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::Zero;
use thiserror::Error;

use crate::rho::{LinOp, RhoSpec, Sign};
use crate::upoly::UPoly;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GammaError {
    #[error("denominator {0} is not positive")]
    NonPositiveDenominator(LinOp),
    #[error("operator {0} acts as zero")]
    ZeroOperator(LinOp),
}

/// A value-group element `[(num, den)]` in normal form.
#[derive(Clone, PartialEq, Eq, Hash, Debug, PartialOrd, Ord)]
pub struct Gamma {
    num: LinOp,
    den: LinOp,
}

impl Gamma {
    pub fn num(&self) -> &LinOp {
        &self.num
    }

    pub fn den(&self) -> &LinOp {
        &self.den
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }
}

impl fmt::Display for Gamma {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.num.is_zero() {
            write!(f, "0")
        } else {
            write!(f, "({})/({})", self.num, self.den)
        }
    }
}

/// A valuation: a group element or `∞` (the valuation of 0).
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub enum Val {
    Finite(Gamma),
    Infinity,
}

impl Val {
    pub fn is_infinite(&self) -> bool {
        matches!(self, Val::Infinity)
    }

    pub fn finite(&self) -> Option<&Gamma> {
        match self {
            Val::Finite(g) => Some(g),
            Val::Infinity => None,
        }
    }
}

impl From<Gamma> for Val {
    fn from(g: Gamma) -> Self {
        Val::Finite(g)
    }
}

impl fmt::Display for Val {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Val::Finite(g) => write!(f, "{g}"),
            Val::Infinity => write!(f, "inf"),
        }
    }
}

/// The value group attached to an order type of ρ.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct ValueGroup {
    rho: RhoSpec,
    minpoly: Option<UPoly>,
    // ρ⁻¹ modulo the minimal polynomial, when ρ is algebraic.
    rho_inv: Option<UPoly>,
}

impl ValueGroup {
    pub fn new(rho: RhoSpec) -> Self {
        let minpoly = rho.minimal_polynomial();
        let rho_inv = minpoly.as_ref().map(|m| invert_mod(&UPoly::x(), m));
        ValueGroup { rho, minpoly, rho_inv }
    }

    pub fn rho(&self) -> &RhoSpec {
        &self.rho
    }

    pub fn zero(&self) -> Gamma {
        Gamma {
            num: LinOp::zero(),
            den: LinOp::one(),
        }
    }

    pub fn one(&self) -> Gamma {
        self.from_linop(&LinOp::one())
    }

    pub fn from_int<T: Into<BigInt>>(&self, n: T) -> Gamma {
        self.from_linop(&LinOp::constant(n))
    }

    /// The class of `(g, 1)`.
    pub fn from_linop(&self, g: &LinOp) -> Gamma {
        self.normalize(g.clone(), LinOp::one())
    }

    /// The class `[(g, l)]`; requires `l > 0`.
    pub fn frac(&self, g: &LinOp, l: &LinOp) -> Result<Gamma, GammaError> {
        if self.rho.sign(l) != Sign::Positive {
            return Err(GammaError::NonPositiveDenominator(l.clone()));
        }
        Ok(self.normalize(g.clone(), l.clone()))
    }

    pub fn add(&self, a: &Gamma, b: &Gamma) -> Gamma {
        if a.is_zero() {
            return b.clone();
        }
        if b.is_zero() {
            return a.clone();
        }
        let num = &(&a.num * &b.den) + &(&b.num * &a.den);
        self.normalize(num, &a.den * &b.den)
    }

    pub fn neg(&self, a: &Gamma) -> Gamma {
        Gamma {
            num: -&a.num,
            den: a.den.clone(),
        }
    }

    pub fn sub(&self, a: &Gamma, b: &Gamma) -> Gamma {
        self.add(a, &self.neg(b))
    }

    pub fn sum<'a, I: IntoIterator<Item = &'a Gamma>>(&self, items: I) -> Gamma {
        items.into_iter().fold(self.zero(), |acc, g| self.add(&acc, g))
    }

    pub fn sign(&self, a: &Gamma) -> Sign {
        // den > 0
        self.rho.sign(&a.num)
    }

    pub fn compare(&self, a: &Gamma, b: &Gamma) -> Ordering {
        if a == b {
            return Ordering::Equal;
        }
        let diff = &(&a.num * &b.den) - &(&b.num * &a.den);
        self.rho.sign(&diff).to_ordering()
    }

    pub fn max<'a>(&self, a: &'a Gamma, b: &'a Gamma) -> &'a Gamma {
        if self.compare(a, b) == Ordering::Less {
            b
        } else {
            a
        }
    }

    pub fn min<'a>(&self, a: &'a Gamma, b: &'a Gamma) -> &'a Gamma {
        if self.compare(a, b) == Ordering::Greater {
            b
        } else {
            a
        }
    }

    /// Order on `Γ ∪ {∞}`.
    pub fn compare_val(&self, a: &Val, b: &Val) -> Ordering {
        match (a, b) {
            (Val::Infinity, Val::Infinity) => Ordering::Equal,
            (Val::Infinity, _) => Ordering::Greater,
            (_, Val::Infinity) => Ordering::Less,
            (Val::Finite(x), Val::Finite(y)) => self.compare(x, y),
        }
    }

    /// `a + b` with `∞` absorbing.
    pub fn add_val(&self, a: &Val, b: &Val) -> Val {
        match (a, b) {
            (Val::Finite(x), Val::Finite(y)) => Val::Finite(self.add(x, y)),
            _ => Val::Infinity,
        }
    }

    /// `L·v` with `L·∞ = ∞`.
    pub fn scalar_mul_val(&self, l: &LinOp, a: &Val) -> Val {
        match a {
            Val::Finite(x) => Val::Finite(self.scalar_mul(l, x)),
            Val::Infinity => Val::Infinity,
        }
    }

    /// The module action `L·γ`.
    pub fn scalar_mul(&self, l: &LinOp, a: &Gamma) -> Gamma {
        if l.is_zero() || a.is_zero() {
            return self.zero();
        }
        self.normalize(l * &a.num, a.den.clone())
    }

    pub fn int_mul<T: Into<BigInt>>(&self, n: T, a: &Gamma) -> Gamma {
        self.scalar_mul(&LinOp::constant(n), a)
    }

    /// The unique `δ` with `L·δ = γ`.
    pub fn divide(&self, a: &Gamma, l: &LinOp) -> Result<Gamma, GammaError> {
        if self.rho.sign(l) == Sign::Zero {
            return Err(GammaError::ZeroOperator(l.clone()));
        }
        if a.is_zero() {
            return Ok(self.zero());
        }
        Ok(self.normalize(a.num.clone(), &a.den * l))
    }

    /// `σ(γ) = ρ·γ`.
    pub fn sigma(&self, a: &Gamma) -> Gamma {
        self.scalar_mul(&LinOp::rho(), a)
    }

    pub fn sigma_inv(&self, a: &Gamma) -> Gamma {
        self.divide(a, &LinOp::rho()).expect("rho acts invertibly")
    }

    /// `ρᵏ·γ` for any integer `k`.
    pub fn sigma_pow(&self, a: &Gamma, k: i64) -> Gamma {
        self.scalar_mul(&LinOp::monomial(1, k), a)
    }

    /// Least `k ≥ 1` with `k·step > bound`, searching up to `2^max_bits`;
    /// `None` when `step ≤ 0` or the bound is out of archimedean reach.
    pub fn archimedean_multiple(&self, step: &Gamma, bound: &Gamma, max_bits: u32) -> Option<u64> {
        if self.sign(step) != Sign::Positive {
            return None;
        }
        let exceeds = |k: u64| self.compare(&self.int_mul(k, step), bound) == Ordering::Greater;
        if exceeds(1) {
            return Some(1);
        }
        let mut hi = 2u64;
        let mut bits = 1;
        while !exceeds(hi) {
            bits += 1;
            if bits > max_bits {
                return None;
            }
            hi *= 2;
        }
        let mut lo = hi / 2;
        while hi - lo > 1 {
            let mid = lo + (hi - lo) / 2;
            if exceeds(mid) {
                hi = mid;
            } else {
                lo = mid;
            }
        }
        Some(hi)
    }

    /// Brings `(num, den)` with `den` acting nonzero into normal form.
    fn normalize(&self, num: LinOp, den: LinOp) -> Gamma {
        debug_assert!(!den.is_zero());
        if num.is_zero() {
            return self.zero();
        }
        match (&self.minpoly, &self.rho_inv) {
            (Some(m), Some(rho_inv)) => normalize_algebraic(&num, &den, m, rho_inv),
            _ => self.normalize_transcendental(&num, &den),
        }
    }

    fn normalize_transcendental(&self, num: &LinOp, den: &LinOp) -> Gamma {
        let (mn, fnum) = num.clear_negative();
        let (md, fden) = den.clear_negative();
        // num/den = ρ^(md - mn) · fnum / fden; move x-powers of fden into the shift.
        let strip = fden.coeffs().iter().take_while(|c| c.is_zero()).count();
        let fden = UPoly::new(fden.coeffs()[strip..].to_vec());
        let shift = md - mn - strip as i64;
        let g = fnum.gcd(&fden);
        let fnum = fnum.div_rem(&g).0;
        let fden = fden.div_rem(&g).0;
        let lcm = fnum.denominator_lcm().lcm(&fden.denominator_lcm());
        let scale = BigRational::from_integer(lcm);
        let mut n = LinOp::from_integer_upoly(&fnum.scale(&scale)).shift(shift);
        let mut d = LinOp::from_integer_upoly(&fden.scale(&scale));
        let content = n.content().gcd(&d.content());
        n = n.div_exact(&content);
        d = d.div_exact(&content);
        if self.rho.sign(&d) == Sign::Negative {
            n = -n;
            d = -d;
        }
        Gamma { num: n, den: d }
    }
}

fn normalize_algebraic(num: &LinOp, den: &LinOp, m: &UPoly, rho_inv: &UPoly) -> Gamma {
    let to_field = |l: &LinOp| -> UPoly {
        let (k, f) = l.clear_negative();
        let mut acc = f.rem(m);
        for _ in 0..k {
            acc = (&acc * rho_inv).rem(m);
        }
        acc
    };
    let n = to_field(num);
    let d = to_field(den);
    let value = (&n * &invert_mod(&d, m)).rem(m);
    if value.is_zero() {
        return Gamma {
            num: LinOp::zero(),
            den: LinOp::one(),
        };
    }
    let l = value.denominator_lcm();
    let ints = value.scale(&BigRational::from_integer(l.clone()));
    let mut n = LinOp::from_integer_upoly(&ints);
    let g = n.content().gcd(&l);
    n = n.div_exact(&g);
    Gamma {
        num: n,
        den: LinOp::constant(l / g),
    }
}

/// Inverse of `a` modulo an irreducible `m`.
fn invert_mod(a: &UPoly, m: &UPoly) -> UPoly {
    let (g, s, _) = a.ext_gcd(m);
    assert!(
        g.is_constant() && !g.is_zero(),
        "minimal polynomial {m} is reducible: it shares the factor {g} with a nonvanishing operator"
    );
    s.rem(m)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rho::AlgebraicReal;
    use num_traits::One;

    fn lin(pairs: &[(i64, i64)]) -> LinOp {
        LinOp::from_terms(pairs.iter().copied())
    }

    fn groups() -> Vec<ValueGroup> {
        let q1 = BigRational::one();
        let s2 = match RhoSpec::sqrt2() {
            RhoSpec::AlgebraicReal(a) => a,
            _ => unreachable!(),
        };
        vec![
            ValueGroup::new(RhoSpec::one()),
            ValueGroup::new(RhoSpec::rational(3, 2).unwrap()),
            ValueGroup::new(RhoSpec::sqrt2()),
            ValueGroup::new(RhoSpec::plus_eps(s2.clone())),
            ValueGroup::new(RhoSpec::minus_eps(s2).unwrap()),
            ValueGroup::new(RhoSpec::plus_eps(AlgebraicReal::rational(&q1).unwrap())),
            ValueGroup::new(RhoSpec::Infinite),
        ]
    }

    #[test]
    fn frac_examples() {
        for g in groups() {
            assert_eq!(
                g.frac(&LinOp::constant(2), &LinOp::constant(2)).unwrap(),
                g.frac(&LinOp::one(), &LinOp::one()).unwrap()
            );
            assert!(g.frac(&LinOp::zero(), &LinOp::rho()).unwrap().is_zero());
            assert!(matches!(
                g.frac(&LinOp::one(), &LinOp::constant(-1)),
                Err(GammaError::NonPositiveDenominator(_))
            ));
        }
        let g = ValueGroup::new(RhoSpec::sqrt2());
        assert_eq!(
            g.frac(&LinOp::one(), &LinOp::rho()).unwrap(),
            g.frac(&LinOp::rho(), &LinOp::constant(2)).unwrap()
        );
    }

    #[test]
    fn add_examples() {
        for g in groups() {
            let one = g.one();
            assert!(g.add(&one, &g.neg(&one)).is_zero());
            let half = g.frac(&LinOp::one(), &LinOp::constant(2)).unwrap();
            assert_eq!(g.add(&half, &half), one);
            let a = g.frac(&LinOp::one(), &LinOp::rho()).unwrap();
            assert_eq!(g.add(&a, &a), g.frac(&LinOp::constant(2), &LinOp::rho()).unwrap());
        }
    }

    #[test]
    fn compare_examples() {
        let g = ValueGroup::new(RhoSpec::sqrt2());
        let r = g.from_linop(&LinOp::rho());
        let three_halves = g.frac(&LinOp::constant(3), &LinOp::constant(2)).unwrap();
        assert_eq!(g.compare(&r, &three_halves), Ordering::Less);
        assert_eq!(g.compare(&r, &r), Ordering::Equal);
        let inf = ValueGroup::new(RhoSpec::Infinite);
        assert_eq!(
            inf.compare(&inf.from_linop(&LinOp::rho()), &inf.one()),
            Ordering::Greater
        );
    }

    #[test]
    fn scalar_and_divide_examples() {
        let g = ValueGroup::new(RhoSpec::sqrt2());
        assert_eq!(g.scalar_mul(&LinOp::rho(), &g.one()), g.from_linop(&LinOp::rho()));
        assert!(g.scalar_mul(&LinOp::zero(), &g.one()).is_zero());
        assert_eq!(g.scalar_mul(&lin(&[(2, 1)]), &g.one()), g.from_int(2));
        assert_eq!(
            g.divide(&g.one(), &LinOp::rho()).unwrap(),
            g.frac(&LinOp::rho(), &LinOp::constant(2)).unwrap()
        );
        assert!(g.divide(&g.zero(), &LinOp::rho()).unwrap().is_zero());
        assert_eq!(g.divide(&g.from_linop(&LinOp::rho()), &LinOp::rho()).unwrap(), g.one());
        assert!(matches!(
            g.divide(&g.one(), &lin(&[(2, 1), (0, -2)])),
            Err(GammaError::ZeroOperator(_))
        ));
        // negative operators divide too
        let d = g.divide(&g.one(), &LinOp::constant(-2)).unwrap();
        assert_eq!(g.int_mul(-2, &d), g.one());
    }

    #[test]
    fn sigma_examples() {
        for g in groups() {
            let x = g.frac(&lin(&[(1, 3), (0, -1)]), &LinOp::constant(2)).unwrap();
            assert_eq!(g.sigma_inv(&g.sigma(&x)), x);
            let y = g.frac(&LinOp::constant(-1), &LinOp::rho()).unwrap();
            assert_eq!(g.sigma(&y), g.from_int(-1));
        }
        let iso = ValueGroup::new(RhoSpec::one());
        let x = iso.from_int(7);
        assert_eq!(iso.sigma(&x), x);
    }

    #[test]
    fn archimedean_multiple_behaviour() {
        let g = ValueGroup::new(RhoSpec::sqrt2());
        assert_eq!(g.archimedean_multiple(&g.one(), &g.from_int(3), 40), Some(4));
        let inf = ValueGroup::new(RhoSpec::Infinite);
        assert_eq!(inf.archimedean_multiple(&inf.one(), &inf.from_linop(&LinOp::rho()), 20), None);
    }

    #[test]
    fn transcendental_normal_form_is_canonical() {
        let g = ValueGroup::new(RhoSpec::Infinite);
        let a = g.frac(&lin(&[(2, 1), (0, -1)]), &lin(&[(1, 1), (0, 1)])).unwrap();
        assert_eq!(a, g.from_linop(&lin(&[(1, 1), (0, -1)])));
        let b = g.frac(&LinOp::rho(), &lin(&[(2, 2)])).unwrap();
        assert_eq!(b, g.frac(&LinOp::monomial(1, -1), &LinOp::constant(2)).unwrap());
    }
}
