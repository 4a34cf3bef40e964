//! Leading terms: `RV = K×/(1 + 𝔪)` realized as (valuation, leading
//! coefficient) pairs, plus the monomial cross-section `γ ↦ tᵞ`.

use std::cmp::Ordering;

use thiserror::Error;

use crate::hahn::{HahnField, HahnSeries};
use crate::residue::ResidueField;
use crate::rho::LinOp;
use crate::value_group::{Gamma, Val};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum RvError {
    #[error("infinity has no inverse")]
    InfinityInverse,
    #[error("a finite leading term needs a nonzero coefficient")]
    ZeroCoefficient,
    #[error("infinity does not decode to a (value, coefficient) pair")]
    InfinityDecode,
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum Rv<E> {
    Infinity,
    Finite { gamma: Gamma, lead: E },
}

impl<E> Rv<E> {
    pub fn valuation(&self) -> Val {
        match self {
            Rv::Infinity => Val::Infinity,
            Rv::Finite { gamma, .. } => Val::Finite(gamma.clone()),
        }
    }
}

pub fn rv<F: ResidueField>(_k: &HahnField<F>, x: &HahnSeries<F::Elem>) -> Rv<F::Elem> {
    match x.leading() {
        None => Rv::Infinity,
        Some((g, c)) => Rv::Finite {
            gamma: g.clone(),
            lead: c.clone(),
        },
    }
}

pub fn rv_mul<F: ResidueField>(k: &HahnField<F>, a: &Rv<F::Elem>, b: &Rv<F::Elem>) -> Rv<F::Elem> {
    match (a, b) {
        (Rv::Finite { gamma: g1, lead: c1 }, Rv::Finite { gamma: g2, lead: c2 }) => Rv::Finite {
            gamma: k.group().add(g1, g2),
            lead: k.residue().mul(c1, c2),
        },
        _ => Rv::Infinity,
    }
}

pub fn rv_inv<F: ResidueField>(k: &HahnField<F>, a: &Rv<F::Elem>) -> Result<Rv<F::Elem>, RvError> {
    match a {
        Rv::Infinity => Err(RvError::InfinityInverse),
        Rv::Finite { gamma, lead } => Ok(Rv::Finite {
            gamma: k.group().neg(gamma),
            lead: k.residue().inv(lead),
        }),
    }
}

/// The partial sum `⊕`: defined exactly when the leads of minimal valuation
/// do not cancel. An empty or all-infinite sum is `∞`.
pub fn rv_sum<F: ResidueField>(k: &HahnField<F>, rs: &[Rv<F::Elem>]) -> Option<Rv<F::Elem>> {
    let g = k.group();
    let r = k.residue();
    let mut best: Option<(Gamma, F::Elem)> = None;
    for item in rs {
        let Rv::Finite { gamma, lead } = item else { continue };
        best = match best {
            None => Some((gamma.clone(), lead.clone())),
            Some((bg, bl)) => match g.compare(gamma, &bg) {
                Ordering::Less => Some((gamma.clone(), lead.clone())),
                Ordering::Equal => Some((bg, r.add(&bl, lead))),
                Ordering::Greater => Some((bg, bl)),
            },
        };
    }
    match best {
        None => Some(Rv::Infinity),
        Some((_, lead)) if r.is_zero(&lead) => None,
        Some((gamma, lead)) => Some(Rv::Finite { gamma, lead }),
    }
}

/// `σ(rv(x)) = rv(σ(x))`: `(γ, c) ↦ (ρ·γ, σ̄(c))`.
pub fn rv_sigma<F: ResidueField>(k: &HahnField<F>, a: &Rv<F::Elem>) -> Rv<F::Elem> {
    match a {
        Rv::Infinity => Rv::Infinity,
        Rv::Finite { gamma, lead } => Rv::Finite {
            gamma: k.group().sigma(gamma),
            lead: k.residue().sigma(lead),
        },
    }
}

/// `s(γ) = tᵞ`.
pub fn cross_section<F: ResidueField>(k: &HahnField<F>, gamma: &Gamma) -> HahnSeries<F::Elem> {
    k.t_pow(gamma.clone())
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Axiom4Witness<E> {
    pub witness: HahnSeries<E>,
    /// False when ρ has no minimal polynomial.
    pub applicable: bool,
    /// `(P^σ)(witness) = 1`, checked by evaluation.
    pub verified: bool,
}

/// `(P^σ)(a) = Π σⁱ(a)^{pᵢ}` for an integer polynomial `P = Σ pᵢ xⁱ`.
pub fn apply_multiplicative<F: ResidueField>(
    k: &HahnField<F>,
    coeffs: &[num_bigint::BigInt],
    a: &HahnSeries<F::Elem>,
    inverse_cutoff: &Gamma,
) -> Result<HahnSeries<F::Elem>, crate::hahn::HahnError> {
    use num_traits::{Signed, ToPrimitive};
    let mut acc = k.one();
    let mut cur = a.clone();
    for (i, p) in coeffs.iter().enumerate() {
        if i > 0 {
            cur = k.sigma(&cur);
        }
        let e = p.abs().to_u32().expect("exponent fits in u32");
        let base = if p.is_negative() {
            k.invert(&cur, inverse_cutoff)?
        } else {
            cur.clone()
        };
        acc = k.mul(&acc, &k.pow(&base, e));
    }
    Ok(acc)
}

/// The monomial `tᵞ` with `(P^σ)(tᵞ) = t^{P(ρ)·γ} = 1` for the minimal polynomial `P` of ρ.
pub fn axiom4_witness<F: ResidueField>(k: &HahnField<F>, gamma: &Gamma) -> Axiom4Witness<F::Elem> {
    let witness = cross_section(k, gamma);
    let Some(minpoly) = k.rho().minimal_polynomial() else {
        return Axiom4Witness {
            witness,
            applicable: false,
            verified: false,
        };
    };
    let coeffs: Vec<num_bigint::BigInt> = minpoly.primitive_integer_coeffs();
    // monomials invert exactly, so the cutoff is irrelevant
    let value = apply_multiplicative(k, &coeffs, &witness, &k.group().zero());
    let verified = value.is_ok_and(|v| v == k.one());
    Axiom4Witness {
        witness,
        applicable: true,
        verified,
    }
}

/// `(γ, c) ↦ rv(s(γ)·c)`; the pair `(0, 0)` encodes `∞`.
pub fn rv_encode<F: ResidueField>(k: &HahnField<F>, gamma: &Gamma, c: &F::Elem) -> Result<Rv<F::Elem>, RvError> {
    if k.residue().is_zero(c) {
        return if gamma.is_zero() {
            Ok(Rv::Infinity)
        } else {
            Err(RvError::ZeroCoefficient)
        };
    }
    Ok(Rv::Finite {
        gamma: gamma.clone(),
        lead: c.clone(),
    })
}

pub fn rv_decode<E: Clone>(r: &Rv<E>) -> Result<(Gamma, E), RvError> {
    match r {
        Rv::Infinity => Err(RvError::InfinityDecode),
        Rv::Finite { gamma, lead } => Ok((gamma.clone(), lead.clone())),
    }
}

/// The series `s(γ)·c` representing a leading term.
pub fn rv_representative<F: ResidueField>(k: &HahnField<F>, r: &Rv<F::Elem>) -> HahnSeries<F::Elem> {
    match r {
        Rv::Infinity => k.zero(),
        Rv::Finite { gamma, lead } => k.mul_monomial(&k.constant(lead.clone()), &k.residue().one(), gamma),
    }
}

/// `τ(γ)` for an operator with nonnegative coefficients read as a multi-index.
pub fn operator_of_index(index: &crate::multi_index::MultiIndex) -> LinOp {
    index.rho_length()
}
