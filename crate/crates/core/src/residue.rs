//! Residue difference fields `(k, σ̄)`.
//!
//! [`ResidueField`] is the contract the Hahn field and the Hensel machinery
//! rely on. Solving linear σ̄-equations is explicitly partial: no computable
//! field certifies every instance of the linear difference closure scheme, so
//! callers must handle `None`.

use std::collections::BTreeMap;
use std::fmt;
use std::hash::Hash;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use thiserror::Error;

use crate::multi_index::MultiIndex;
use crate::upoly::UPoly;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ResidueError {
    #[error("every coefficient of the linear equation is zero")]
    AllZeroCoefficients,
    #[error("the zero polynomial has no nonvanishing point")]
    ZeroPolynomial,
}

/// Default number of test points tried by [`nonvanishing_point`].
pub const DEFAULT_BUDGET: usize = 1000;

pub trait ResidueField: Clone + fmt::Debug {
    type Elem: Clone + PartialEq + Eq + Hash + fmt::Debug;

    /// Short selector used on the command line.
    fn name(&self) -> &'static str;

    fn zero(&self) -> Self::Elem;
    fn one(&self) -> Self::Elem;
    fn from_int(&self, n: &BigInt) -> Self::Elem;
    fn is_zero(&self, a: &Self::Elem) -> bool;
    fn add(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    fn neg(&self, a: &Self::Elem) -> Self::Elem;
    fn mul(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    /// Multiplicative inverse; panics on zero.
    fn inv(&self, a: &Self::Elem) -> Self::Elem;
    fn sigma(&self, a: &Self::Elem) -> Self::Elem;
    fn sigma_inv(&self, a: &Self::Elem) -> Self::Elem;

    /// A solution `u` of `1 + Σ αᵢ σ̄ⁱ(u) = 0`, if this instance can find one.
    fn solve_linear(&self, alphas: &[Self::Elem]) -> Result<Option<Self::Elem>, ResidueError>;

    /// Some `y` with `σ̄ᵈ(y) ≠ y`.
    fn nonfixed_witness(&self, d: u32) -> Option<Self::Elem>;

    /// The `index`-th element of a fixed enumeration of test points.
    fn candidate(&self, index: usize) -> Self::Elem;

    fn sub(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem {
        self.add(a, &self.neg(b))
    }

    fn div(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem {
        self.mul(a, &self.inv(b))
    }

    fn pow(&self, a: &Self::Elem, n: u32) -> Self::Elem {
        (0..n).fold(self.one(), |acc, _| self.mul(&acc, a))
    }

    /// `σ̄ᵏ(a)` for any integer `k`.
    fn sigma_pow(&self, a: &Self::Elem, k: i64) -> Self::Elem {
        let mut out = a.clone();
        for _ in 0..k.unsigned_abs() {
            out = if k > 0 { self.sigma(&out) } else { self.sigma_inv(&out) };
        }
        out
    }

    /// `1 + Σ αᵢ σ̄ⁱ(u)`.
    fn linear_residual(&self, alphas: &[Self::Elem], u: &Self::Elem) -> Self::Elem {
        let mut acc = self.one();
        let mut s = u.clone();
        for (i, a) in alphas.iter().enumerate() {
            if i > 0 {
                s = self.sigma(&s);
            }
            acc = self.add(&acc, &self.mul(a, &s));
        }
        acc
    }
}

/// Ordinary polynomial over the residue field in variables `x₀, …, xₙ`,
/// evaluated along σ̄-orbits `(y, σ̄(y), …, σ̄ⁿ(y))`.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct ResiduePoly<E> {
    nvars: usize,
    terms: BTreeMap<MultiIndex, E>,
}

impl<E: Clone + PartialEq> ResiduePoly<E> {
    pub fn zero(nvars: usize) -> Self {
        ResiduePoly {
            nvars,
            terms: BTreeMap::new(),
        }
    }

    /// Builds from `(index, coefficient)` pairs, dropping zero coefficients.
    pub fn from_terms<F>(field: &F, nvars: usize, pairs: impl IntoIterator<Item = (MultiIndex, E)>) -> Self
    where
        F: ResidueField<Elem = E>,
    {
        let mut p = ResiduePoly::zero(nvars);
        for (i, c) in pairs {
            p.add_term(field, i.resized(nvars), c);
        }
        p
    }

    /// The polynomial `xᵢ`.
    pub fn var<F: ResidueField<Elem = E>>(field: &F, nvars: usize, i: usize) -> Self {
        Self::from_terms(field, nvars, [(MultiIndex::unit(nvars, i), field.one())])
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn terms(&self) -> impl Iterator<Item = (&MultiIndex, &E)> {
        self.terms.iter()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    fn add_term<F: ResidueField<Elem = E>>(&mut self, field: &F, index: MultiIndex, c: E) {
        let sum = match self.terms.get(&index) {
            Some(old) => field.add(old, &c),
            None => c,
        };
        if field.is_zero(&sum) {
            self.terms.remove(&index);
        } else {
            self.terms.insert(index, sum);
        }
    }

    pub fn add<F: ResidueField<Elem = E>>(&self, field: &F, other: &Self) -> Self {
        let n = self.nvars.max(other.nvars);
        let mut out = ResiduePoly::zero(n);
        for (i, c) in self.terms.iter().chain(other.terms.iter()) {
            out.add_term(field, i.resized(n), c.clone());
        }
        out
    }

    pub fn mul<F: ResidueField<Elem = E>>(&self, field: &F, other: &Self) -> Self {
        let n = self.nvars.max(other.nvars);
        let mut out = ResiduePoly::zero(n);
        for (i, a) in &self.terms {
            for (j, b) in &other.terms {
                out.add_term(field, i.add(j).resized(n), field.mul(a, b));
            }
        }
        out
    }

    /// `f(y, σ̄(y), …, σ̄ⁿ⁻¹(y))` for `n = nvars`.
    pub fn eval_orbit<F: ResidueField<Elem = E>>(&self, field: &F, y: &E) -> E {
        let mut orbit = Vec::with_capacity(self.nvars);
        let mut cur = y.clone();
        for i in 0..self.nvars {
            if i > 0 {
                cur = field.sigma(&cur);
            }
            orbit.push(cur.clone());
        }
        let mut acc = field.zero();
        for (idx, c) in &self.terms {
            let mut term = c.clone();
            for (j, &e) in idx.entries().iter().enumerate() {
                if e > 0 {
                    term = field.mul(&term, &field.pow(&orbit[j], e));
                }
            }
            acc = field.add(&acc, &term);
        }
        acc
    }
}

/// Searches the instance's test sequence for `y` with `f(σ̄⃗(y)) ≠ 0`.
pub fn nonvanishing_point<F: ResidueField>(
    field: &F,
    f: &ResiduePoly<F::Elem>,
    budget: usize,
) -> Result<Option<F::Elem>, ResidueError> {
    if f.is_zero() {
        return Err(ResidueError::ZeroPolynomial);
    }
    Ok((0..budget)
        .map(|i| field.candidate(i))
        .find(|y| !field.is_zero(&f.eval_orbit(field, y))))
}

fn check_not_all_zero<F: ResidueField>(field: &F, alphas: &[F::Elem]) -> Result<(), ResidueError> {
    if alphas.iter().all(|a| field.is_zero(a)) {
        Err(ResidueError::AllZeroCoefficients)
    } else {
        Ok(())
    }
}

/// Integer enumeration `0, 1, −1, 2, −2, …`.
fn nth_integer(index: usize) -> BigInt {
    let k = BigInt::from(index.div_ceil(2));
    if index % 2 == 1 {
        k
    } else {
        -k
    }
}

/// The rationals with the identity automorphism. Never satisfies the
/// nonfixed-point condition, so it exercises the failure paths.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct RationalIdentity;

impl ResidueField for RationalIdentity {
    type Elem = BigRational;

    fn name(&self) -> &'static str {
        "rational-id"
    }
    fn zero(&self) -> BigRational {
        BigRational::zero()
    }
    fn one(&self) -> BigRational {
        BigRational::one()
    }
    fn from_int(&self, n: &BigInt) -> BigRational {
        BigRational::from_integer(n.clone())
    }
    fn is_zero(&self, a: &BigRational) -> bool {
        a.is_zero()
    }
    fn add(&self, a: &BigRational, b: &BigRational) -> BigRational {
        a + b
    }
    fn neg(&self, a: &BigRational) -> BigRational {
        -a
    }
    fn mul(&self, a: &BigRational, b: &BigRational) -> BigRational {
        a * b
    }
    fn inv(&self, a: &BigRational) -> BigRational {
        a.recip()
    }
    fn sigma(&self, a: &BigRational) -> BigRational {
        a.clone()
    }
    fn sigma_inv(&self, a: &BigRational) -> BigRational {
        a.clone()
    }

    fn solve_linear(&self, alphas: &[BigRational]) -> Result<Option<BigRational>, ResidueError> {
        check_not_all_zero(self, alphas)?;
        // σ̄ = id collapses the equation to 1 + (Σ αᵢ) u = 0.
        let total: BigRational = alphas.iter().sum();
        if total.is_zero() {
            Ok(None)
        } else {
            Ok(Some(-total.recip()))
        }
    }

    fn nonfixed_witness(&self, _d: u32) -> Option<BigRational> {
        None
    }

    fn candidate(&self, index: usize) -> BigRational {
        BigRational::from_integer(nth_integer(index))
    }
}

/// A rational function `num/den` in the symbol `s`, with `den` monic and
/// coprime to `num`.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct RatFunc {
    num: UPoly,
    den: UPoly,
}

impl RatFunc {
    pub fn new(num: UPoly, den: UPoly) -> Self {
        assert!(!den.is_zero(), "rational function with zero denominator");
        if num.is_zero() {
            return RatFunc {
                num,
                den: UPoly::one(),
            };
        }
        let g = num.gcd(&den);
        let num = num.div_rem(&g).0;
        let den = den.div_rem(&g).0;
        let lead = den.leading();
        RatFunc {
            num: num.scale(&lead.recip()),
            den: den.monic(),
        }
    }

    pub fn poly(p: UPoly) -> Self {
        RatFunc { num: p, den: UPoly::one() }
    }

    pub fn constant(c: BigRational) -> Self {
        Self::poly(UPoly::constant(c))
    }

    /// The generator `s`.
    pub fn s() -> Self {
        Self::poly(UPoly::x())
    }

    pub fn num(&self) -> &UPoly {
        &self.num
    }

    pub fn den(&self) -> &UPoly {
        &self.den
    }

    pub fn is_polynomial(&self) -> bool {
        self.den.is_constant()
    }

    /// Larger of numerator and denominator degree.
    pub fn height(&self) -> usize {
        self.num.degree().unwrap_or(0).max(self.den.degree().unwrap_or(0))
    }

    fn shifted(&self, by: i64) -> Self {
        let b = BigRational::from_integer(by.into());
        RatFunc::new(self.num.shift(&b), self.den.shift(&b))
    }
}

impl fmt::Display for RatFunc {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({})/({})", self.num.display_in("s"), self.den.display_in("s"))
    }
}

/// Rational functions `ℚ(s)` with the shift `σ̄(s) = s + 1`.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct RationalFunctionShift;

/// Largest shift searched when bounding the dispersion of two polynomials.
const MAX_DISPERSION: i64 = 4096;

/// Cauchy bound `1 + max |cᵢ / c_d|` on the absolute value of the roots.
fn root_bound(p: &UPoly) -> BigRational {
    let lead = p.leading();
    p.coeffs()
        .iter()
        .map(|c| (c / &lead).abs())
        .fold(BigRational::zero(), |m, c| if c > m { c } else { m })
        + BigRational::one()
}

fn shifted_poly(p: &UPoly, by: i64) -> UPoly {
    p.shift(&BigRational::from_integer(by.into()))
}

impl RationalFunctionShift {
    /// Abramov's universal denominator for `Σ αᵢ σ̄ⁱ(u) = c`: every rational
    /// solution `u` has a denominator dividing the returned polynomial.
    fn universal_denominator(&self, alphas: &[RatFunc]) -> UPoly {
        let nonzero: Vec<usize> = (0..alphas.len()).filter(|&i| !self.is_zero(&alphas[i])).collect();
        let (Some(&lo), Some(&hi)) = (nonzero.first(), nonzero.last()) else {
            return UPoly::one();
        };
        // with v(s) = u(s + lo) the equation has trailing coefficient a_lo(s)
        // on v(s) and leading coefficient a_hi(s) on v(s + n)
        let n = (hi - lo) as i64;
        let mut a = shifted_poly(&alphas[hi].num, -n);
        let mut b = alphas[lo].num.clone();
        if a.is_constant() || b.is_constant() {
            return UPoly::one();
        }
        let bound = root_bound(&a) + root_bound(&b);
        let top = bound.ceil().to_integer().to_i64().unwrap_or(MAX_DISPERSION).min(MAX_DISPERSION);
        let mut u = UPoly::one();
        for h in (0..=top).rev() {
            let d = a.gcd(&shifted_poly(&b, h));
            if d.is_constant() {
                continue;
            }
            a = a.div_rem(&d).0;
            b = b.div_rem(&shifted_poly(&d, -h)).0;
            for i in 0..=h {
                u = &u * &shifted_poly(&d, -i);
            }
        }
        shifted_poly(&u, -(lo as i64))
    }

    /// Exact solution of `1 + Σ αᵢ σ̄ⁱ(u) = 0` among polynomials `u` of degree
    /// at most `bound`, by linear algebra on the coefficients of `u`.
    fn polynomial_ansatz(&self, alphas: &[RatFunc], bound: usize) -> Option<RatFunc> {
        let common = alphas
            .iter()
            .fold(UPoly::one(), |acc, a| {
                let g = acc.gcd(&a.den);
                (&acc * &a.den).div_rem(&g).0
            });
        // common + Σ βᵢ(s)·u(s+i) = 0 with βᵢ = αᵢ·common.
        let betas: Vec<UPoly> = alphas
            .iter()
            .map(|a| (&a.num * &common).div_rem(&a.den).0)
            .collect();
        let max_beta = betas.iter().filter_map(|b| b.degree()).max().unwrap_or(0);
        let rows = (max_beta + bound + 1).max(common.degree().unwrap_or(0) + 1);
        // column k: Σᵢ βᵢ(s)·(s+i)^k
        let columns: Vec<UPoly> = (0..=bound)
            .map(|k| {
                let sk = UPoly::monomial(BigRational::one(), k);
                betas.iter().enumerate().fold(UPoly::zero(), |acc, (i, b)| {
                    &acc + &(b * &sk.shift(&BigRational::from_integer((i as i64).into())))
                })
            })
            .collect();
        let matrix: Vec<Vec<BigRational>> = (0..rows)
            .map(|r| columns.iter().map(|c| c.coeff(r)).collect())
            .collect();
        let rhs: Vec<BigRational> = (0..rows).map(|r| -common.coeff(r)).collect();
        let sol = solve_rational_system(matrix, rhs)?;
        Some(RatFunc::poly(UPoly::new(sol)))
    }
}

/// Gaussian elimination over ℚ; returns one solution (free variables zero).
fn solve_rational_system(mut a: Vec<Vec<BigRational>>, mut b: Vec<BigRational>) -> Option<Vec<BigRational>> {
    let rows = a.len();
    let cols = a.first().map_or(0, |r| r.len());
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..cols {
        let Some(p) = (r..rows).find(|&i| !a[i][c].is_zero()) else {
            continue;
        };
        a.swap(r, p);
        b.swap(r, p);
        let inv = a[r][c].recip();
        for j in c..cols {
            a[r][j] = &a[r][j] * &inv;
        }
        b[r] = &b[r] * &inv;
        for i in 0..rows {
            if i != r && !a[i][c].is_zero() {
                let f = a[i][c].clone();
                for j in c..cols {
                    let t = &a[r][j] * &f;
                    a[i][j] -= t;
                }
                let t = &b[r] * &f;
                b[i] -= t;
            }
        }
        pivots.push(c);
        r += 1;
        if r == rows {
            break;
        }
    }
    if b[r..].iter().any(|x| !x.is_zero()) {
        return None;
    }
    let mut x = vec![BigRational::zero(); cols];
    for (i, &c) in pivots.iter().enumerate() {
        x[c] = b[i].clone();
    }
    Some(x)
}

impl ResidueField for RationalFunctionShift {
    type Elem = RatFunc;

    fn name(&self) -> &'static str {
        "rational-shift"
    }
    fn zero(&self) -> RatFunc {
        RatFunc::poly(UPoly::zero())
    }
    fn one(&self) -> RatFunc {
        RatFunc::poly(UPoly::one())
    }
    fn from_int(&self, n: &BigInt) -> RatFunc {
        RatFunc::constant(BigRational::from_integer(n.clone()))
    }
    fn is_zero(&self, a: &RatFunc) -> bool {
        a.num.is_zero()
    }
    fn add(&self, a: &RatFunc, b: &RatFunc) -> RatFunc {
        if a.den == b.den {
            return RatFunc::new(&a.num + &b.num, a.den.clone());
        }
        RatFunc::new(&(&a.num * &b.den) + &(&b.num * &a.den), &a.den * &b.den)
    }
    fn neg(&self, a: &RatFunc) -> RatFunc {
        RatFunc {
            num: -&a.num,
            den: a.den.clone(),
        }
    }
    fn mul(&self, a: &RatFunc, b: &RatFunc) -> RatFunc {
        RatFunc::new(&a.num * &b.num, &a.den * &b.den)
    }
    fn inv(&self, a: &RatFunc) -> RatFunc {
        assert!(!a.num.is_zero(), "inverse of zero");
        RatFunc::new(a.den.clone(), a.num.clone())
    }
    fn sigma(&self, a: &RatFunc) -> RatFunc {
        a.shifted(1)
    }
    fn sigma_inv(&self, a: &RatFunc) -> RatFunc {
        a.shifted(-1)
    }

    fn solve_linear(&self, alphas: &[RatFunc]) -> Result<Option<RatFunc>, ResidueError> {
        check_not_all_zero(self, alphas)?;
        let nonzero: Vec<usize> = (0..alphas.len()).filter(|&i| !self.is_zero(&alphas[i])).collect();
        if let [i] = nonzero[..] {
            // 1 + αᵢ σ̄ⁱ(u) = 0 ⟹ u = σ̄⁻ⁱ(−1/αᵢ)
            let v = self.neg(&self.inv(&alphas[i]));
            return Ok(Some(self.sigma_pow(&v, -(i as i64))));
        }
        // u = z / U with z polynomial: solve 1 + Σ (αᵢ / σ̄ⁱ(U)) σ̄ⁱ(z) = 0
        let den = self.universal_denominator(alphas);
        let scaled: Vec<RatFunc> = alphas
            .iter()
            .enumerate()
            .map(|(i, a)| self.mul(a, &RatFunc::new(UPoly::one(), shifted_poly(&den, i as i64))))
            .collect();
        let bound = alphas.iter().map(|a| a.height()).max().unwrap_or(0) * 2;
        let u = self
            .polynomial_ansatz(&scaled, bound.max(10) + den.degree().unwrap_or(0))
            .map(|z| RatFunc::new(z.num, den));
        debug_assert!(u.as_ref().is_none_or(|u| self.is_zero(&self.linear_residual(alphas, u))));
        Ok(u)
    }

    fn nonfixed_witness(&self, _d: u32) -> Option<RatFunc> {
        // σ̄ᵈ(s) = s + d ≠ s
        Some(RatFunc::s())
    }

    /// `0, 1, s, −1, s+1, 2, s², −2, s²+1, …`: integers interleaved with
    /// `s^m` and `s^m + 1`.
    fn candidate(&self, index: usize) -> RatFunc {
        if index == 0 || index % 2 == 1 {
            let k = if index == 0 { 0 } else { index.div_ceil(2) };
            return RatFunc::constant(BigRational::from_integer(nth_integer(k)));
        }
        let j = index / 2 - 1;
        let m = j / 2 + 1;
        let mut p = UPoly::monomial(BigRational::one(), m);
        if j % 2 == 1 {
            p = &p + &UPoly::one();
        }
        RatFunc::poly(p)
    }
}

/// Sign used when printing: a rational function is displayed negated when
/// its numerator's leading coefficient is negative.
pub fn ratfunc_is_negative(a: &RatFunc) -> bool {
    a.num.leading().is_negative()
}
