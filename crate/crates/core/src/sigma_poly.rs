//! σ-polynomials `P(x, σ(x), …, σⁿ(x))` over a Hahn field.
//!
//! Stored as a sparse table from multi-indices `I ∈ ℕⁿ⁺¹` to nonzero series
//! coefficients: `P = Σ b_I · σ⃗(x)^I`.

use std::cmp::Ordering;
use std::collections::{BTreeMap, BTreeSet, HashMap};

use thiserror::Error;

use crate::hahn::{HahnError, HahnField, HahnSeries};
use crate::multi_index::MultiIndex;
use crate::residue::{nonvanishing_point, ResidueError, ResidueField, ResiduePoly};
use crate::value_group::{Gamma, Val};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SigmaPolyError {
    #[error("the argument must be nonzero")]
    ZeroArgument,
    #[error("the sigma-polynomial must be nonzero")]
    ZeroPolynomial,
    #[error(transparent)]
    Residue(#[from] ResidueError),
    #[error(transparent)]
    Hahn(#[from] HahnError),
}

#[derive(Clone, PartialEq, Eq, Debug)]
pub struct SigmaPoly<E> {
    order_bound: usize,
    table: BTreeMap<MultiIndex, HahnSeries<E>>,
}

/// `(order, degree in x_order, total degree)`, `None` standing for `−∞`.
/// Compared lexicographically.
#[derive(Clone, Copy, PartialEq, Eq, Debug, PartialOrd, Ord)]
pub struct Complexity {
    pub order: Option<usize>,
    pub degree_in_order: Option<u32>,
    pub degree: Option<u32>,
}

impl<E: Clone + PartialEq> SigmaPoly<E> {
    pub fn zero(order_bound: usize) -> Self {
        SigmaPoly {
            order_bound,
            table: BTreeMap::new(),
        }
    }

    /// `n` in `P(x, …, σⁿ(x))`; multi-indices have length `n + 1`.
    pub fn order_bound(&self) -> usize {
        self.order_bound
    }

    pub fn nvars(&self) -> usize {
        self.order_bound + 1
    }

    pub fn terms(&self) -> impl Iterator<Item = (&MultiIndex, &HahnSeries<E>)> {
        self.table.iter()
    }

    pub fn coeff(&self, index: &MultiIndex) -> Option<&HahnSeries<E>> {
        self.table.get(index)
    }

    pub fn is_zero(&self) -> bool {
        self.table.is_empty()
    }

    /// True for elements of `K` (including 0).
    pub fn is_constant(&self) -> bool {
        self.table.keys().all(|i| i.is_zero())
    }

    /// Largest `d` with some stored `I` having `i_d > 0`.
    pub fn order(&self) -> Option<usize> {
        self.table
            .keys()
            .filter_map(|i| i.entries().iter().rposition(|&e| e > 0))
            .max()
    }

    pub fn degree(&self) -> Option<u32> {
        self.table.keys().map(|i| i.degree()).max()
    }

    pub fn complexity(&self) -> Complexity {
        if self.is_zero() {
            return Complexity {
                order: None,
                degree_in_order: None,
                degree: None,
            };
        }
        let order = self.order();
        let degree_in_order = match order {
            Some(d) => self.table.keys().map(|i| i.get(d)).max(),
            None => Some(0),
        };
        Complexity {
            order,
            degree_in_order,
            degree: self.degree(),
        }
    }

    /// Every `J ≠ 0⃗` with `P_(J) ≠ 0`: the nonzero multi-indices below some
    /// stored index.
    pub fn nonzero_taylor_indices(&self) -> Vec<MultiIndex> {
        let set: BTreeSet<MultiIndex> = self
            .table
            .keys()
            .flat_map(|k| k.box_below())
            .filter(|j| !j.is_zero())
            .collect();
        set.into_iter().collect()
    }

    /// Same polynomial viewed with a larger order bound.
    pub fn with_order_bound(&self, n: usize) -> Self {
        assert!(self.order().is_none_or(|d| d <= n), "order exceeds the requested bound");
        SigmaPoly {
            order_bound: n,
            table: self.table.iter().map(|(i, c)| (i.resized(n + 1), c.clone())).collect(),
        }
    }
}

impl<E: Clone + PartialEq + Eq + std::hash::Hash + std::fmt::Debug> SigmaPoly<E> {
    /// Builds from `(index, coefficient)` pairs, merging repeats and dropping zeros.
    pub fn from_terms<F>(k: &HahnField<F>, order_bound: usize, pairs: impl IntoIterator<Item = (MultiIndex, HahnSeries<E>)>) -> Self
    where
        F: ResidueField<Elem = E>,
    {
        let mut p = SigmaPoly::zero(order_bound);
        for (i, c) in pairs {
            p.add_term(k, i.resized(order_bound + 1), c);
        }
        p
    }

    /// The σ-polynomial `σʲ(x)` with order bound `n`.
    pub fn sigma_var<F: ResidueField<Elem = E>>(k: &HahnField<F>, j: usize, n: usize) -> Self {
        Self::from_terms(k, n, [(MultiIndex::unit(n + 1, j), k.one())])
    }

    pub fn constant<F: ResidueField<Elem = E>>(k: &HahnField<F>, c: HahnSeries<E>, n: usize) -> Self {
        Self::from_terms(k, n, [(MultiIndex::zeros(n + 1), c)])
    }

    fn add_term<F: ResidueField<Elem = E>>(&mut self, k: &HahnField<F>, index: MultiIndex, c: HahnSeries<E>) {
        let sum = match self.table.get(&index) {
            Some(old) => k.add(old, &c),
            None => c,
        };
        if sum.is_zero() {
            self.table.remove(&index);
        } else {
            self.table.insert(index, sum);
        }
    }

    pub fn add<F: ResidueField<Elem = E>>(&self, k: &HahnField<F>, other: &Self) -> Self {
        let n = self.order_bound.max(other.order_bound);
        let mut out = SigmaPoly::zero(n);
        for (i, c) in self.table.iter().chain(other.table.iter()) {
            out.add_term(k, i.resized(n + 1), c.clone());
        }
        out
    }

    pub fn neg<F: ResidueField<Elem = E>>(&self, k: &HahnField<F>) -> Self {
        SigmaPoly {
            order_bound: self.order_bound,
            table: self.table.iter().map(|(i, c)| (i.clone(), k.neg(c))).collect(),
        }
    }

    pub fn sub<F: ResidueField<Elem = E>>(&self, k: &HahnField<F>, other: &Self) -> Self {
        self.add(k, &other.neg(k))
    }

    pub fn mul<F: ResidueField<Elem = E>>(&self, k: &HahnField<F>, other: &Self) -> Self {
        let n = self.order_bound.max(other.order_bound);
        let mut out = SigmaPoly::zero(n);
        for (i, a) in &self.table {
            for (j, b) in &other.table {
                out.add_term(k, i.add(j).resized(n + 1), k.mul(a, b));
            }
        }
        out
    }

    pub fn scale<F: ResidueField<Elem = E>>(&self, k: &HahnField<F>, c: &HahnSeries<E>) -> Self {
        Self::from_terms(k, self.order_bound, self.table.iter().map(|(i, b)| (i.clone(), k.mul(b, c))))
    }

    /// `P(a) = Σ b_I · σ⃗(a)^I`.
    pub fn eval<F: ResidueField<Elem = E>>(&self, k: &HahnField<F>, a: &HahnSeries<E>) -> HahnSeries<E> {
        let orbit = sigma_orbit(k, a, self.order_bound);
        let mut powers = PowerCache::default();
        let mut acc = k.zero();
        for (idx, c) in &self.table {
            let m = powers.monomial(k, &orbit, idx);
            acc = k.add(&acc, &k.mul(c, &m));
        }
        acc
    }

    /// `P_(I) = ∂_I P / I!`.
    pub fn taylor_coeff<F: ResidueField<Elem = E>>(&self, k: &HahnField<F>, index: &MultiIndex) -> Self {
        let index = index.resized(self.nvars());
        Self::from_terms(
            k,
            self.order_bound,
            self.table.iter().filter_map(|(kk, c)| {
                let rest = kk.checked_sub(&index)?;
                let b = MultiIndex::binomial(kk, &index);
                Some((rest, k.scale(c, &k.residue().from_int(&b))))
            }),
        )
    }

    /// `P(x + a) = Σ_I P_(I)(a) · σ⃗(x)^I`.
    pub fn shift_by<F: ResidueField<Elem = E>>(&self, k: &HahnField<F>, a: &HahnSeries<E>) -> Self {
        let mut indices: BTreeSet<MultiIndex> = self.nonzero_taylor_indices().into_iter().collect();
        indices.insert(MultiIndex::zeros(self.nvars()));
        Self::from_terms(
            k,
            self.order_bound,
            indices
                .into_iter()
                .map(|j| {
                    let v = self.taylor_coeff(k, &j).eval(k, a);
                    (j, v)
                }),
        )
    }

    /// `min_I v(b_I) + |I|_ρ · γ`, the valuation `P(a)` has absent cancellation.
    pub fn naive_valuation<F: ResidueField<Elem = E>>(&self, k: &HahnField<F>, gamma: &Gamma) -> Val {
        let g = k.group();
        self.table
            .iter()
            .map(|(i, c)| g.add_val(&c.valuation(), &Val::Finite(g.scalar_mul(&i.rho_length(), gamma))))
            .min_by(|a, b| g.compare_val(a, b))
            .unwrap_or(Val::Infinity)
    }

    /// Whether `v(P(a))` equals the naive minimum over the monomials.
    pub fn is_generic_for<F: ResidueField<Elem = E>>(&self, k: &HahnField<F>, a: &HahnSeries<E>) -> Result<bool, SigmaPolyError> {
        let Val::Finite(gamma) = a.valuation() else {
            return Err(SigmaPolyError::ZeroArgument);
        };
        let expected = self.naive_valuation(k, &gamma);
        Ok(k.compare_val(&self.eval(k, a).valuation(), &expected) == Ordering::Equal)
    }

    /// The residue σ̄-polynomial `Q̄` with `P(a·x) = d·Q(x)`, `d = t^(min)`.
    pub fn residue_poly_for<F: ResidueField<Elem = E>>(
        &self,
        k: &HahnField<F>,
        a: &HahnSeries<E>,
    ) -> Result<ResiduePoly<E>, SigmaPolyError> {
        let Val::Finite(gamma) = a.valuation() else {
            return Err(SigmaPolyError::ZeroArgument);
        };
        if self.is_zero() {
            return Err(SigmaPolyError::ZeroPolynomial);
        }
        let Val::Finite(m) = self.naive_valuation(k, &gamma) else {
            unreachable!("nonzero polynomial has finite naive valuation");
        };
        let shift = k.group().neg(&m);
        let one = k.residue().one();
        let orbit = sigma_orbit(k, a, self.order_bound);
        let mut powers = PowerCache::default();
        let mut pairs = Vec::new();
        for (idx, c) in &self.table {
            let scaled = k.mul_monomial(&k.mul(c, &powers.monomial(k, &orbit, idx)), &one, &shift);
            pairs.push((idx.clone(), k.residue_pi(&scaled)?));
        }
        Ok(ResiduePoly::from_terms(k.residue(), self.nvars(), pairs))
    }
}

/// An `a` with `v(a) = γ` generic for every polynomial in `polys`, found by
/// a residue search; `None` if the residue search exhausts its budget.
pub fn make_generic<F: ResidueField>(
    k: &HahnField<F>,
    polys: &[SigmaPoly<F::Elem>],
    gamma: &Gamma,
    budget: usize,
) -> Result<Option<HahnSeries<F::Elem>>, SigmaPolyError> {
    if polys.iter().any(|p| p.is_zero()) {
        return Err(SigmaPolyError::ZeroPolynomial);
    }
    let nvars = polys.iter().map(|p| p.nvars()).max().unwrap_or(1);
    let base = k.t_pow(gamma.clone());
    // the factor x₀ keeps the residue point a unit
    let mut product = ResiduePoly::var(k.residue(), nvars, 0);
    for p in polys {
        product = product.mul(k.residue(), &p.residue_poly_for(k, &base)?);
    }
    let point = nonvanishing_point(k.residue(), &product, budget)?;
    Ok(point.map(|y| k.mul_monomial(&k.constant(y), &k.residue().one(), gamma)))
}

/// `(a, σ(a), …, σⁿ(a))`.
pub fn sigma_orbit<F: ResidueField>(k: &HahnField<F>, a: &HahnSeries<F::Elem>, n: usize) -> Vec<HahnSeries<F::Elem>> {
    let mut out = Vec::with_capacity(n + 1);
    let mut cur = a.clone();
    for i in 0..=n {
        if i > 0 {
            cur = k.sigma(&cur);
        }
        out.push(cur.clone());
    }
    out
}

struct PowerCache<E> {
    powers: HashMap<(usize, u32), HahnSeries<E>>,
}

impl<E> Default for PowerCache<E> {
    fn default() -> Self {
        PowerCache { powers: HashMap::new() }
    }
}

impl<E: Clone + PartialEq + Eq + std::hash::Hash + std::fmt::Debug> PowerCache<E> {
    fn power<F: ResidueField<Elem = E>>(&mut self, k: &HahnField<F>, orbit: &[HahnSeries<E>], j: usize, e: u32) -> HahnSeries<E> {
        if e == 0 {
            return k.one();
        }
        if let Some(p) = self.powers.get(&(j, e)) {
            return p.clone();
        }
        let prev = self.power(k, orbit, j, e - 1);
        let p = k.mul(&prev, &orbit[j]);
        self.powers.insert((j, e), p.clone());
        p
    }

    /// `σ⃗(a)^I`.
    fn monomial<F: ResidueField<Elem = E>>(&mut self, k: &HahnField<F>, orbit: &[HahnSeries<E>], idx: &MultiIndex) -> HahnSeries<E> {
        let mut acc = k.one();
        for (j, &e) in idx.entries().iter().enumerate() {
            if e > 0 {
                acc = k.mul(&acc, &self.power(k, orbit, j, e));
            }
        }
        acc
    }
}

/// `σ⃗(b)^I` for a single index.
pub fn sigma_monomial<F: ResidueField>(k: &HahnField<F>, b: &HahnSeries<F::Elem>, idx: &MultiIndex) -> HahnSeries<F::Elem> {
    let orbit = sigma_orbit(k, b, idx.len().saturating_sub(1));
    PowerCache::default().monomial(k, &orbit, idx)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::residue::{RationalFunctionShift, RationalIdentity, RatFunc};
    use crate::rho::{LinOp, RhoSpec};
    use num_bigint::BigInt;

    fn mi(v: &[u32]) -> MultiIndex {
        MultiIndex::new(v.to_vec())
    }

    /// σ(x) − x − t⁻¹
    fn example_poly<F: ResidueField>(k: &HahnField<F>) -> SigmaPoly<F::Elem> {
        let g = k.group();
        SigmaPoly::from_terms(
            k,
            1,
            [
                (mi(&[0, 1]), k.one()),
                (mi(&[1, 0]), k.from_int(-1)),
                (mi(&[0, 0]), k.neg(&k.t_pow(g.from_int(-1)))),
            ],
        )
    }

    fn example_prefix<F: ResidueField>(k: &HahnField<F>, n: i64) -> HahnSeries<F::Elem> {
        let g = k.group();
        let exps: Vec<Gamma> = (1..=n)
            .map(|i| g.frac(&LinOp::constant(-1), &LinOp::monomial(1, i)).unwrap())
            .collect();
        k.sum_of_monomials(&exps)
    }

    #[test]
    fn eval_examples() {
        let k = HahnField::new(RhoSpec::sqrt2(), RationalIdentity);
        let g = k.group().clone();
        let p = example_poly(&k);
        for n in 1..=5 {
            let a = example_prefix(&k, n);
            let want = k.t_pow(g.frac(&LinOp::constant(-1), &LinOp::monomial(1, n)).unwrap());
            assert_eq!(p.eval(&k, &a), k.neg(&want));
        }
        let x = SigmaPoly::sigma_var(&k, 0, 0);
        let a = example_prefix(&k, 3);
        assert_eq!(x.eval(&k, &a), a);
        let x_sx = SigmaPoly::from_terms(&k, 1, [(mi(&[1, 1]), k.one())]);
        let t = k.t_pow(g.one());
        assert_eq!(x_sx.eval(&k, &t), k.t_pow(g.from_linop(&LinOp::from_terms([(0, 1), (1, 1)]))));
    }

    #[test]
    fn taylor_examples() {
        let k = HahnField::new(RhoSpec::sqrt2(), RationalIdentity);
        let p = SigmaPoly::from_terms(&k, 1, [(mi(&[1, 1]), k.one())]);
        assert_eq!(p.taylor_coeff(&k, &mi(&[1, 0])), SigmaPoly::sigma_var(&k, 1, 1));
        assert_eq!(p.taylor_coeff(&k, &mi(&[0, 1])), SigmaPoly::sigma_var(&k, 0, 1));
        assert_eq!(p.taylor_coeff(&k, &mi(&[1, 1])), SigmaPoly::constant(&k, k.one(), 1));
        assert_eq!(p.taylor_coeff(&k, &mi(&[0, 0])), p);
        let cube = SigmaPoly::from_terms(&k, 0, [(mi(&[3]), k.one())]);
        let once_twice = cube.taylor_coeff(&k, &mi(&[1])).taylor_coeff(&k, &mi(&[1]));
        let six_x = SigmaPoly::from_terms(&k, 0, [(mi(&[1]), k.from_int(6))]);
        assert_eq!(once_twice, six_x);
        let two_f2 = cube.taylor_coeff(&k, &mi(&[2])).scale(&k, &k.from_int(2));
        assert_eq!(two_f2, six_x);
    }

    #[test]
    fn complexity_examples() {
        let k = HahnField::new(RhoSpec::sqrt2(), RationalIdentity);
        let c = example_poly(&k).complexity();
        assert_eq!((c.order, c.degree_in_order, c.degree), (Some(1), Some(1), Some(1)));
        let five = SigmaPoly::constant(&k, k.from_int(5), 0).complexity();
        assert_eq!((five.order, five.degree_in_order, five.degree), (None, Some(0), Some(0)));
        let zero = SigmaPoly::<num_rational::BigRational>::zero(0).complexity();
        assert_eq!((zero.order, zero.degree_in_order, zero.degree), (None, None, None));
        assert!(zero < five && five < c);
    }

    #[test]
    fn genericity_examples() {
        let k = HahnField::new(RhoSpec::sqrt2(), RationalIdentity);
        let g = k.group().clone();
        let p = SigmaPoly::sigma_var(&k, 1, 1).sub(&k, &SigmaPoly::sigma_var(&k, 0, 1));
        let t = k.t_pow(g.one());
        assert_eq!(p.is_generic_for(&k, &t), Ok(true));
        let iso = HahnField::new(RhoSpec::one(), RationalIdentity);
        let p_iso = SigmaPoly::sigma_var(&iso, 1, 1).sub(&iso, &SigmaPoly::sigma_var(&iso, 0, 1));
        assert_eq!(p_iso.is_generic_for(&iso, &iso.one()), Ok(false));
        let x = SigmaPoly::sigma_var(&k, 0, 0);
        assert_eq!(x.is_generic_for(&k, &example_prefix(&k, 4)), Ok(true));
        assert_eq!(x.is_generic_for(&k, &k.zero()), Err(SigmaPolyError::ZeroArgument));
    }

    #[test]
    fn residue_poly_examples() {
        let k = HahnField::new(RhoSpec::sqrt2(), RationalIdentity);
        let r = *k.residue();
        let g = k.group().clone();
        let t = k.t_pow(g.one());
        let p = SigmaPoly::sigma_var(&k, 1, 1).sub(&k, &SigmaPoly::sigma_var(&k, 0, 1));
        let q = p.residue_poly_for(&k, &t).unwrap();
        let minus_x0 = ResiduePoly::from_terms(&r, 2, [(mi(&[1, 0]), r.from_int(&BigInt::from(-1)))]);
        assert_eq!(q, minus_x0);
        let x = SigmaPoly::sigma_var(&k, 0, 0);
        assert_eq!(x.residue_poly_for(&k, &t).unwrap(), ResiduePoly::var(&r, 1, 0));
        let sum = SigmaPoly::sigma_var(&k, 1, 1).add(&k, &SigmaPoly::sigma_var(&k, 0, 1));
        let want = ResiduePoly::var(&r, 2, 0).add(&r, &ResiduePoly::var(&r, 2, 1));
        assert_eq!(sum.residue_poly_for(&k, &k.one()).unwrap(), want);
    }

    #[test]
    fn make_generic_examples() {
        let k = HahnField::new(RhoSpec::sqrt2(), RationalIdentity);
        let g = k.group().clone();
        let x = SigmaPoly::sigma_var(&k, 0, 0);
        let a = make_generic(&k, &[x], &g.one(), 1000).unwrap().unwrap();
        assert_eq!(a, k.t_pow(g.one()));

        let ks = HahnField::new(RhoSpec::sqrt2(), RationalFunctionShift);
        let p = SigmaPoly::sigma_var(&ks, 1, 1).sub(&ks, &SigmaPoly::sigma_var(&ks, 0, 1));
        let a = make_generic(&ks, std::slice::from_ref(&p), &ks.group().zero(), 1000).unwrap().unwrap();
        assert_eq!(a, ks.constant(RatFunc::s()));
        assert_eq!(p.is_generic_for(&ks, &a), Ok(true));

        let p_id = SigmaPoly::sigma_var(&k, 1, 1).sub(&k, &SigmaPoly::sigma_var(&k, 0, 1));
        assert_eq!(make_generic(&k, &[p_id], &g.zero(), 1000), Ok(None));
    }

    #[test]
    fn shift_by_matches_evaluation() {
        let k = HahnField::new(RhoSpec::sqrt2(), RationalIdentity);
        let g = k.group().clone();
        let p = example_poly(&k);
        let a = example_prefix(&k, 3);
        let shifted = p.shift_by(&k, &a);
        let b = k.add(&k.t_pow(g.one()), &k.from_int(2));
        assert_eq!(shifted.eval(&k, &b), p.eval(&k, &k.add(&a, &b)));
    }
}
