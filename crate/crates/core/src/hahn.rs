//! Finite-support twisted Hahn series `k((t^Γ))`.
//!
//! A series is a finite sum `Σ c_γ t^γ` with exponents in the value group and
//! coefficients in the residue field. The automorphism acts by
//! `σ(Σ c t^γ) = Σ σ̄(c) t^(ρ·γ)`, so `v(σ(x)) = ρ·v(x)`.

use std::cmp::Ordering;
use std::collections::HashMap;

use num_bigint::BigInt;
use thiserror::Error;

use crate::residue::ResidueField;
use crate::rho::{RhoSpec, Sign};
use crate::value_group::{Gamma, Val, ValueGroup};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum HahnError {
    #[error("residue map applied to a series of negative valuation")]
    NegativeValuation,
    #[error("monomial with zero coefficient")]
    ZeroCoefficient,
    #[error("division by zero")]
    DivisionByZero,
    #[error("no multiple of the leading gap exceeds the cutoff {0}")]
    CutoffUnreachable(Gamma),
}

/// Terms sorted by strictly increasing exponent, no zero coefficients.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct HahnSeries<E> {
    terms: Vec<(Gamma, E)>,
}

impl<E> HahnSeries<E> {
    pub fn zero() -> Self {
        HahnSeries { terms: Vec::new() }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> &[(Gamma, E)] {
        &self.terms
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    /// `(v(x), leading coefficient)`, or `None` for zero.
    pub fn leading(&self) -> Option<(&Gamma, &E)> {
        self.terms.first().map(|(g, c)| (g, c))
    }

    pub fn valuation(&self) -> Val {
        match self.terms.first() {
            Some((g, _)) => Val::Finite(g.clone()),
            None => Val::Infinity,
        }
    }
}

/// The field `k((t^Γ))` for a chosen ρ and residue field.
#[derive(Clone, Debug)]
pub struct HahnField<F> {
    group: ValueGroup,
    residue: F,
}

impl<F: ResidueField> HahnField<F> {
    pub fn new(rho: RhoSpec, residue: F) -> Self {
        HahnField {
            group: ValueGroup::new(rho),
            residue,
        }
    }

    pub fn group(&self) -> &ValueGroup {
        &self.group
    }

    pub fn residue(&self) -> &F {
        &self.residue
    }

    pub fn rho(&self) -> &RhoSpec {
        self.group.rho()
    }

    pub fn zero(&self) -> HahnSeries<F::Elem> {
        HahnSeries::zero()
    }

    pub fn one(&self) -> HahnSeries<F::Elem> {
        self.constant(self.residue.one())
    }

    /// The residue element `c` embedded at exponent 0.
    pub fn constant(&self, c: F::Elem) -> HahnSeries<F::Elem> {
        self.single(c, self.group.zero())
    }

    pub fn from_int<T: Into<BigInt>>(&self, n: T) -> HahnSeries<F::Elem> {
        self.constant(self.residue.from_int(&n.into()))
    }

    /// `c·t^γ`; rejects `c = 0`.
    pub fn monomial(&self, c: F::Elem, gamma: Gamma) -> Result<HahnSeries<F::Elem>, HahnError> {
        if self.residue.is_zero(&c) {
            return Err(HahnError::ZeroCoefficient);
        }
        Ok(HahnSeries {
            terms: vec![(gamma, c)],
        })
    }

    /// `t^γ`.
    pub fn t_pow(&self, gamma: Gamma) -> HahnSeries<F::Elem> {
        HahnSeries {
            terms: vec![(gamma, self.residue.one())],
        }
    }

    fn single(&self, c: F::Elem, gamma: Gamma) -> HahnSeries<F::Elem> {
        if self.residue.is_zero(&c) {
            HahnSeries::zero()
        } else {
            HahnSeries {
                terms: vec![(gamma, c)],
            }
        }
    }

    /// Sums repeated exponents, drops zeros and sorts.
    pub fn from_terms(&self, pairs: impl IntoIterator<Item = (Gamma, F::Elem)>) -> HahnSeries<F::Elem> {
        let mut acc: HashMap<Gamma, F::Elem> = HashMap::new();
        for (g, c) in pairs {
            match acc.get_mut(&g) {
                Some(old) => *old = self.residue.add(old, &c),
                None => {
                    acc.insert(g, c);
                }
            }
        }
        let mut terms: Vec<(Gamma, F::Elem)> =
            acc.into_iter().filter(|(_, c)| !self.residue.is_zero(c)).collect();
        terms.sort_by(|a, b| self.group.compare(&a.0, &b.0));
        HahnSeries { terms }
    }

    pub fn valuation(&self, x: &HahnSeries<F::Elem>) -> Val {
        x.valuation()
    }

    pub fn compare_val(&self, a: &Val, b: &Val) -> Ordering {
        self.group.compare_val(a, b)
    }

    pub fn add(&self, x: &HahnSeries<F::Elem>, y: &HahnSeries<F::Elem>) -> HahnSeries<F::Elem> {
        let mut out = Vec::with_capacity(x.terms.len() + y.terms.len());
        let (mut i, mut j) = (0, 0);
        while i < x.terms.len() && j < y.terms.len() {
            let (gx, cx) = &x.terms[i];
            let (gy, cy) = &y.terms[j];
            match self.group.compare(gx, gy) {
                Ordering::Less => {
                    out.push((gx.clone(), cx.clone()));
                    i += 1;
                }
                Ordering::Greater => {
                    out.push((gy.clone(), cy.clone()));
                    j += 1;
                }
                Ordering::Equal => {
                    let c = self.residue.add(cx, cy);
                    if !self.residue.is_zero(&c) {
                        out.push((gx.clone(), c));
                    }
                    i += 1;
                    j += 1;
                }
            }
        }
        out.extend_from_slice(&x.terms[i..]);
        out.extend_from_slice(&y.terms[j..]);
        HahnSeries { terms: out }
    }

    pub fn neg(&self, x: &HahnSeries<F::Elem>) -> HahnSeries<F::Elem> {
        HahnSeries {
            terms: x.terms.iter().map(|(g, c)| (g.clone(), self.residue.neg(c))).collect(),
        }
    }

    pub fn sub(&self, x: &HahnSeries<F::Elem>, y: &HahnSeries<F::Elem>) -> HahnSeries<F::Elem> {
        self.add(x, &self.neg(y))
    }

    pub fn mul(&self, x: &HahnSeries<F::Elem>, y: &HahnSeries<F::Elem>) -> HahnSeries<F::Elem> {
        if x.is_zero() || y.is_zero() {
            return HahnSeries::zero();
        }
        if y.terms.len() == 1 {
            let (g, c) = &y.terms[0];
            return self.mul_monomial(x, c, g);
        }
        if x.terms.len() == 1 {
            let (g, c) = &x.terms[0];
            return self.mul_monomial(y, c, g);
        }
        self.from_terms(x.terms.iter().flat_map(|(gx, cx)| {
            y.terms
                .iter()
                .map(move |(gy, cy)| (self.group.add(gx, gy), self.residue.mul(cx, cy)))
        }))
    }

    /// `x · c·t^γ`; keeps the term order since translation is monotone.
    pub fn mul_monomial(&self, x: &HahnSeries<F::Elem>, c: &F::Elem, gamma: &Gamma) -> HahnSeries<F::Elem> {
        if self.residue.is_zero(c) {
            return HahnSeries::zero();
        }
        HahnSeries {
            terms: x
                .terms
                .iter()
                .map(|(g, d)| (self.group.add(g, gamma), self.residue.mul(d, c)))
                .collect(),
        }
    }

    pub fn scale(&self, x: &HahnSeries<F::Elem>, c: &F::Elem) -> HahnSeries<F::Elem> {
        self.mul_monomial(x, c, &self.group.zero())
    }

    pub fn pow(&self, x: &HahnSeries<F::Elem>, n: u32) -> HahnSeries<F::Elem> {
        let mut acc = self.one();
        for _ in 0..n {
            acc = self.mul(&acc, x);
        }
        acc
    }

    pub fn sigma(&self, x: &HahnSeries<F::Elem>) -> HahnSeries<F::Elem> {
        HahnSeries {
            terms: x
                .terms
                .iter()
                .map(|(g, c)| (self.group.sigma(g), self.residue.sigma(c)))
                .collect(),
        }
    }

    pub fn sigma_inv(&self, x: &HahnSeries<F::Elem>) -> HahnSeries<F::Elem> {
        HahnSeries {
            terms: x
                .terms
                .iter()
                .map(|(g, c)| (self.group.sigma_inv(g), self.residue.sigma_inv(c)))
                .collect(),
        }
    }

    /// `σᵏ(x)` for any integer `k`.
    pub fn sigma_pow(&self, x: &HahnSeries<F::Elem>, k: i64) -> HahnSeries<F::Elem> {
        HahnSeries {
            terms: x
                .terms
                .iter()
                .map(|(g, c)| (self.group.sigma_pow(g, k), self.residue.sigma_pow(c, k)))
                .collect(),
        }
    }

    /// The residue map `π` on the valuation ring.
    pub fn residue_pi(&self, x: &HahnSeries<F::Elem>) -> Result<F::Elem, HahnError> {
        match x.terms.first() {
            None => Ok(self.residue.zero()),
            Some((g, c)) => match self.group.sign(g) {
                Sign::Negative => Err(HahnError::NegativeValuation),
                Sign::Zero => Ok(c.clone()),
                Sign::Positive => Ok(self.residue.zero()),
            },
        }
    }

    /// Leading coefficient, zero for the zero series.
    pub fn leading_coeff(&self, x: &HahnSeries<F::Elem>) -> F::Elem {
        x.leading().map_or_else(|| self.residue.zero(), |(_, c)| c.clone())
    }

    /// Drops every term with exponent above `cutoff`.
    pub fn truncate(&self, x: &HahnSeries<F::Elem>, cutoff: &Val) -> HahnSeries<F::Elem> {
        let Val::Finite(cut) = cutoff else {
            return x.clone();
        };
        HahnSeries {
            terms: x
                .terms
                .iter()
                .take_while(|(g, _)| self.group.compare(g, cut) != Ordering::Greater)
                .cloned()
                .collect(),
        }
    }

    /// A finite `y` with `v(y) = −v(x)` and `v(x·y − 1) > cutoff`.
    pub fn invert(&self, x: &HahnSeries<F::Elem>, cutoff: &Gamma) -> Result<HahnSeries<F::Elem>, HahnError> {
        let Some((g0, c0)) = x.leading() else {
            return Err(HahnError::DivisionByZero);
        };
        let c_inv = self.residue.inv(c0);
        let g_inv = self.group.neg(g0);
        // x = c₀t^γ₀(1 + z) with v(z) > 0; y = c₀⁻¹t^(−γ₀) Σ (−z)ᵏ.
        let unit = self.mul_monomial(x, &c_inv, &g_inv);
        let minus_z = self.neg(&self.sub(&unit, &self.one()));
        let cut = Val::Finite(cutoff.clone());
        let mut sum = self.one();
        if let Some((gz, _)) = minus_z.leading() {
            if self.group.archimedean_multiple(gz, cutoff, 62).is_none() {
                return Err(HahnError::CutoffUnreachable(cutoff.clone()));
            }
            let mut power = self.one();
            loop {
                power = self.truncate(&self.mul(&power, &minus_z), &cut);
                if power.is_zero() {
                    break;
                }
                sum = self.add(&sum, &power);
            }
        }
        Ok(self.mul_monomial(&sum, &c_inv, &g_inv))
    }

    /// `Σ_{i} t^(γ_i)` convenience used by examples and tests.
    pub fn sum_of_monomials<'a, I: IntoIterator<Item = &'a Gamma>>(&self, exps: I) -> HahnSeries<F::Elem> {
        self.from_terms(exps.into_iter().map(|g| (g.clone(), self.residue.one())))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::residue::RationalIdentity;
    use crate::rho::LinOp;
    use num_rational::BigRational;

    fn field() -> HahnField<RationalIdentity> {
        HahnField::new(RhoSpec::sqrt2(), RationalIdentity)
    }

    fn q(n: i64) -> BigRational {
        BigRational::from_integer(n.into())
    }

    #[test]
    fn valuation_examples() {
        let k = field();
        let g = k.group().clone();
        let gamma = g.frac(&LinOp::constant(3), &LinOp::constant(2)).unwrap();
        assert_eq!(k.t_pow(gamma.clone()).valuation(), Val::Finite(gamma));
        assert_eq!(k.zero().valuation(), Val::Infinity);
        let m = g.frac(&LinOp::constant(-1), &LinOp::rho()).unwrap();
        let x = k.add(&k.monomial(q(2), m.clone()).unwrap(), &k.t_pow(g.one()));
        assert_eq!(x.valuation(), Val::Finite(m));
    }

    #[test]
    fn ring_examples() {
        let k = field();
        let g = k.group().clone();
        let t = k.t_pow(g.one());
        let a = k.add(&k.one(), &t);
        let b = k.sub(&k.one(), &t);
        assert_eq!(k.mul(&a, &b), k.sub(&k.one(), &k.t_pow(g.from_int(2))));
        assert!(k.add(&a, &k.neg(&a)).is_zero());
        let alpha = g.frac(&LinOp::one(), &LinOp::rho()).unwrap();
        let prod = k.mul(&k.t_pow(alpha.clone()), &k.t_pow(alpha));
        assert_eq!(prod, k.t_pow(g.from_linop(&LinOp::rho())));
    }

    #[test]
    fn sigma_examples() {
        let k = field();
        let g = k.group().clone();
        for i in 1..5 {
            let e = g.frac(&LinOp::constant(-1), &LinOp::monomial(1, i)).unwrap();
            let e_next = g.frac(&LinOp::constant(-1), &LinOp::monomial(1, i - 1)).unwrap();
            assert_eq!(k.sigma(&k.t_pow(e)), k.t_pow(e_next));
        }
        assert_eq!(k.sigma(&k.one()), k.one());
        let x = k.add(&k.t_pow(g.from_int(-2)), &k.from_int(5));
        assert_eq!(k.sigma_inv(&k.sigma(&x)), x);
    }

    #[test]
    fn residue_examples() {
        let k = field();
        let g = k.group().clone();
        let t = k.t_pow(g.one());
        assert_eq!(k.residue_pi(&k.add(&k.from_int(3), &t)), Ok(q(3)));
        assert_eq!(k.residue_pi(&t), Ok(q(0)));
        assert_eq!(k.residue_pi(&k.t_pow(g.from_int(-1))), Err(HahnError::NegativeValuation));
    }

    #[test]
    fn monomial_examples() {
        let k = field();
        let g = k.group().clone();
        assert_eq!(k.monomial(q(1), g.zero()).unwrap(), k.one());
        assert_eq!(k.monomial(q(0), g.one()), Err(HahnError::ZeroCoefficient));
        let gamma = g.frac(&LinOp::rho(), &LinOp::constant(3)).unwrap();
        let m = k.t_pow(gamma.clone());
        assert_eq!(k.sigma(&m), k.t_pow(g.sigma(&gamma)));
        assert_eq!(k.mul(&m, &k.t_pow(g.neg(&gamma))), k.one());
    }

    #[test]
    fn invert_examples() {
        let k = field();
        let g = k.group().clone();
        let t = k.t_pow(g.one());
        let x = k.sub(&k.one(), &t);
        let y = k.invert(&x, &g.from_int(3)).unwrap();
        let expect = k.sum_of_monomials(&[g.zero(), g.one(), g.from_int(2), g.from_int(3)]);
        assert_eq!(y, expect);
        let gamma = g.frac(&LinOp::rho(), &LinOp::constant(5)).unwrap();
        let m = k.t_pow(gamma.clone());
        let inv = k.invert(&m, &g.from_int(7)).unwrap();
        assert_eq!(inv, k.t_pow(g.neg(&gamma)));
        assert!(k.sub(&k.mul(&m, &inv), &k.one()).is_zero());
        assert_eq!(k.invert(&k.from_int(2), &g.zero()).unwrap(), k.constant(BigRational::new(1.into(), 2.into())));
        assert_eq!(k.invert(&k.zero(), &g.zero()), Err(HahnError::DivisionByZero));
    }

    #[test]
    fn invert_reports_unreachable_cutoff() {
        let k = HahnField::new(RhoSpec::Infinite, RationalIdentity);
        let g = k.group().clone();
        let x = k.add(&k.one(), &k.t_pow(g.one()));
        assert!(matches!(
            k.invert(&x, &g.from_linop(&LinOp::rho())),
            Err(HahnError::CutoffUnreachable(_))
        ));
        assert!(k.invert(&x, &g.from_int(4)).is_ok());
    }

    #[test]
    fn truncate_examples() {
        let k = field();
        let g = k.group().clone();
        let x = k.sum_of_monomials(&[g.zero(), g.one(), g.from_int(5)]);
        assert_eq!(k.truncate(&x, &Val::Finite(g.from_int(2))), k.sum_of_monomials(&[g.zero(), g.one()]));
        assert!(k.truncate(&k.zero(), &Val::Finite(g.one())).is_zero());
        assert_eq!(k.truncate(&x, &Val::Infinity), x);
    }
}
