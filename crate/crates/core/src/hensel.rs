//! σ-Hensel configurations and Newton-style lifting, eventual ordering of
//! affine functions on Γ, and pseudo-convergence diagnostics.

use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt::Debug;

use thiserror::Error;

use crate::hahn::{HahnField, HahnSeries};
use crate::multi_index::MultiIndex;
use crate::residue::{ResidueError, ResidueField};
use crate::rho::{LinOp, Sign};
use crate::sigma_poly::SigmaPoly;
use crate::value_group::{Gamma, Val, ValueGroup};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum HenselError<E: Debug> {
    #[error("residue solver could not solve 1 + Σ αⱼ σ̄ʲ(x) = 0 with α = {alphas:?}")]
    SolverFailed { alphas: Vec<E> },
    #[error(transparent)]
    Residue(#[from] ResidueError),
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum KernelError {
    #[error("functions {0} and {1} have equal slopes")]
    DuplicateSlope(usize, usize),
    #[error("no nonzero Taylor coefficient of positive degree")]
    NoNonzeroTerm,
    #[error("sequence of length {len} is too short (need {min})")]
    TooShort { len: usize, min: usize },
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct HenselConfig {
    pub gamma: Gamma,
    /// Every `i` attaining `v(P(a)) = v(P_(i)(a)) + ρⁱ·γ`.
    pub minimizing_indices: Vec<usize>,
    pub strict: bool,
    pub i_value: Option<usize>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum LiftStatus<E> {
    RootFound,
    PrecisionReached,
    SolverFailed { alphas: Vec<E> },
    NotInConfiguration,
    MaxIterReached,
}

impl<E> LiftStatus<E> {
    pub fn name(&self) -> &'static str {
        match self {
            LiftStatus::RootFound => "RootFound",
            LiftStatus::PrecisionReached => "PrecisionReached",
            LiftStatus::SolverFailed { .. } => "SolverFailed",
            LiftStatus::NotInConfiguration => "NotInConfiguration",
            LiftStatus::MaxIterReached => "MaxIterReached",
        }
    }
}

/// One lifting iteration: the configuration `γ(P, a)` used, the resulting
/// `v(P(b))`, and `i(P, a)` when the configuration was strict.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TraceEntry {
    pub gamma: Gamma,
    pub value: Val,
    pub strict_index: Option<usize>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LiftReport<E> {
    pub result: HahnSeries<E>,
    pub status: LiftStatus<E>,
    pub trace: Vec<TraceEntry>,
}

fn rho_pow(i: usize) -> LinOp {
    LinOp::monomial(1, i as i64)
}

/// `v(P_(J)(a))` for every `J ≠ 0⃗` with `P_(J) ≠ 0`.
fn taylor_valuations<F: ResidueField>(
    k: &HahnField<F>,
    p: &SigmaPoly<F::Elem>,
    a: &HahnSeries<F::Elem>,
) -> BTreeMap<MultiIndex, Val> {
    p.nonzero_taylor_indices()
        .into_iter()
        .map(|j| {
            let v = p.taylor_coeff(k, &j).eval(k, a).valuation();
            (j, v)
        })
        .collect()
}

/// Detects whether `(P, a)` is in σ-Hensel configuration.
pub fn hensel_config<F: ResidueField>(
    k: &HahnField<F>,
    p: &SigmaPoly<F::Elem>,
    a: &HahnSeries<F::Elem>,
) -> Option<HenselConfig> {
    if p.is_constant() {
        return None;
    }
    let Val::Finite(vpa) = p.eval(k, a).valuation() else {
        return None;
    };
    let g = k.group();
    let vals = taylor_valuations(k, p, a);
    let mut finite: BTreeMap<MultiIndex, Gamma> = BTreeMap::new();
    for (j, v) in vals {
        match v {
            Val::Finite(v) => {
                finite.insert(j, v);
            }
            // a nonzero Taylor coefficient vanishing at a rules out (ii)
            Val::Infinity => return None,
        }
    }
    let n = p.order_bound();
    let unit_val = |i: usize| finite.get(&MultiIndex::unit(n + 1, i));
    let weighted = |v: &Gamma, l: &LinOp, gamma: &Gamma| g.add(v, &g.scalar_mul(l, gamma));

    let mut found: Option<HenselConfig> = None;
    for i in 0..=n {
        let Some(vi) = unit_val(i) else { continue };
        let Ok(gamma) = g.divide(&g.sub(&vpa, vi), &rho_pow(i)) else {
            continue;
        };
        let mut minimizers = Vec::new();
        let mut ok = true;
        for j in 0..=n {
            let Some(vj) = unit_val(j) else { continue };
            match g.compare(&weighted(vj, &rho_pow(j), &gamma), &vpa) {
                Ordering::Less => {
                    ok = false;
                    break;
                }
                Ordering::Equal => minimizers.push(j),
                Ordering::Greater => {}
            }
        }
        if !ok || !minimizers.contains(&i) {
            continue;
        }
        let entries: Vec<(&MultiIndex, Gamma)> = finite
            .iter()
            .map(|(j, v)| (j, weighted(v, &j.rho_length(), &gamma)))
            .collect();
        let cond_ii = entries.iter().all(|(j, wj)| {
            entries
                .iter()
                .filter(|(l, _)| j.strictly_below(l))
                .all(|(_, wl)| g.compare(wj, wl) == Ordering::Less)
        });
        if !cond_ii {
            continue;
        }
        match &found {
            Some(cfg) => assert_eq!(cfg.gamma, gamma, "two configurations with different gamma"),
            None => {
                let strict = minimizers.len() == 1;
                found = Some(HenselConfig {
                    gamma,
                    i_value: strict.then(|| minimizers[0]),
                    minimizing_indices: minimizers,
                    strict,
                });
            }
        }
    }
    found
}

/// The coefficients `c̄₀, …, c̄ₙ` of the residue equation `1 + Σ c̄ⱼ σ̄ʲ(x) = 0`.
pub fn residue_equation<F: ResidueField>(
    k: &HahnField<F>,
    p: &SigmaPoly<F::Elem>,
    a: &HahnSeries<F::Elem>,
    cfg: &HenselConfig,
) -> Vec<F::Elem> {
    let r = k.residue();
    let n = p.order_bound();
    let lc_pa = k.leading_coeff(&p.eval(k, a));
    (0..=n)
        .map(|j| {
            if cfg.minimizing_indices.contains(&j) {
                // σʲ(tᵞ) has coefficient 1, so only P_(j)(a) contributes
                let pj = p.taylor_coeff(k, &MultiIndex::unit(n + 1, j)).eval(k, a);
                r.div(&k.leading_coeff(&pj), &lc_pa)
            } else {
                r.zero()
            }
        })
        .collect()
}

/// One improvement step `b = a + tᵞ·ū`.
pub fn hensel_step<F: ResidueField>(
    k: &HahnField<F>,
    p: &SigmaPoly<F::Elem>,
    a: &HahnSeries<F::Elem>,
    cfg: &HenselConfig,
) -> Result<HahnSeries<F::Elem>, HenselError<F::Elem>> {
    let alphas = residue_equation(k, p, a, cfg);
    match k.residue().solve_linear(&alphas)? {
        Some(u) => Ok(k.add(a, &k.mul_monomial(&k.constant(u), &k.residue().one(), &cfg.gamma))),
        None => Err(HenselError::SolverFailed { alphas }),
    }
}

/// Iterates [`hensel_step`] until an exact root, `v(P(b)) > target`, a
/// failure, or `max_iter` steps.
pub fn hensel_lift<F: ResidueField>(
    k: &HahnField<F>,
    p: &SigmaPoly<F::Elem>,
    a: &HahnSeries<F::Elem>,
    target: &Gamma,
    max_iter: usize,
) -> LiftReport<F::Elem> {
    let g = k.group();
    let mut cur = a.clone();
    let mut trace = Vec::new();
    let status = loop {
        let value = p.eval(k, &cur).valuation();
        let Val::Finite(v) = value else {
            break LiftStatus::RootFound;
        };
        if g.compare(&v, target) == Ordering::Greater {
            break LiftStatus::PrecisionReached;
        }
        if trace.len() >= max_iter {
            break LiftStatus::MaxIterReached;
        }
        let Some(cfg) = hensel_config(k, p, &cur) else {
            break LiftStatus::NotInConfiguration;
        };
        match hensel_step(k, p, &cur, &cfg) {
            Ok(b) => {
                trace.push(TraceEntry {
                    gamma: cfg.gamma.clone(),
                    value: p.eval(k, &b).valuation(),
                    strict_index: cfg.i_value,
                });
                cur = b;
            }
            Err(HenselError::SolverFailed { alphas }) => break LiftStatus::SolverFailed { alphas },
            Err(_) => break LiftStatus::NotInConfiguration,
        }
    };
    LiftReport {
        result: cur,
        status,
        trace,
    }
}

/// Orders the affine maps `x ↦ cᵢ + nᵢ·x` for all `x` beyond the returned
/// threshold. The permutation lists function indices from smallest to largest.
pub fn eventual_order(
    g: &ValueGroup,
    fns: &[(Gamma, LinOp)],
) -> Result<(Vec<usize>, Gamma), KernelError> {
    let rho = g.rho();
    for i in 0..fns.len() {
        for j in i + 1..fns.len() {
            if rho.sign(&(&fns[i].1 - &fns[j].1)) == Sign::Zero {
                return Err(KernelError::DuplicateSlope(i, j));
            }
        }
    }
    let mut perm: Vec<usize> = (0..fns.len()).collect();
    perm.sort_by(|&i, &j| rho.compare(&fns[i].1, &fns[j].1));
    let mut threshold = g.zero();
    for i in 0..fns.len() {
        for j in i + 1..fns.len() {
            let diff = &fns[j].1 - &fns[i].1;
            let cross = g
                .divide(&g.sub(&fns[i].0, &fns[j].0), &diff)
                .expect("slopes differ");
            if g.compare(&cross, &threshold) == Ordering::Greater {
                threshold = cross;
            }
        }
    }
    Ok((perm, threshold))
}

/// The multi-indices `I`, `|I| ≥ 1`, minimizing `v(P_(I)(a)) + |I|_ρ·γ`.
pub fn dominant_index<F: ResidueField>(
    k: &HahnField<F>,
    p: &SigmaPoly<F::Elem>,
    a: &HahnSeries<F::Elem>,
    gamma: &Gamma,
) -> Result<Vec<MultiIndex>, KernelError> {
    let g = k.group();
    let mut best: Option<Gamma> = None;
    let mut out = Vec::new();
    for (j, v) in taylor_valuations(k, p, a) {
        let Val::Finite(v) = v else { continue };
        let w = g.add(&v, &g.scalar_mul(&j.rho_length(), gamma));
        let ord = best.as_ref().map_or(Ordering::Less, |b| g.compare(&w, b));
        match ord {
            Ordering::Less => {
                best = Some(w);
                out = vec![j];
            }
            Ordering::Equal => out.push(j),
            Ordering::Greater => {}
        }
    }
    if out.is_empty() {
        Err(KernelError::NoNonzeroTerm)
    } else {
        Ok(out)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum PcViolation {
    /// `a_{η+1} = a_η`.
    ZeroDifference(usize),
    /// `γ_{η+1} ≤ γ_η`.
    NotIncreasing(usize),
    /// `v(a_{η″} − a_η) ≠ γ_η` for the pair `(η, η″)`.
    PairMismatch(usize, usize),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PcReport {
    pub is_pc: bool,
    /// `γ_η = v(a_{η+1} − a_η)` for every consecutive pair.
    pub gammas: Vec<Val>,
    pub violations: Vec<PcViolation>,
}

/// Checks the pseudo-convergence condition on a finite prefix from `eta0`.
pub fn pc_check<F: ResidueField>(
    k: &HahnField<F>,
    seq: &[HahnSeries<F::Elem>],
    eta0: usize,
) -> Result<PcReport, KernelError> {
    if seq.len() < 3 {
        return Err(KernelError::TooShort { len: seq.len(), min: 3 });
    }
    let g = k.group();
    let diff = |i: usize, j: usize| k.sub(&seq[j], &seq[i]).valuation();
    let gammas: Vec<Val> = (0..seq.len() - 1).map(|i| diff(i, i + 1)).collect();
    let mut violations = Vec::new();
    for eta in eta0..gammas.len() {
        if gammas[eta].is_infinite() {
            violations.push(PcViolation::ZeroDifference(eta));
        }
        if eta + 1 < gammas.len() && g.compare_val(&gammas[eta + 1], &gammas[eta]) != Ordering::Greater {
            violations.push(PcViolation::NotIncreasing(eta));
        }
        for later in eta + 2..seq.len() {
            if g.compare_val(&diff(eta, later), &gammas[eta]) != Ordering::Equal {
                violations.push(PcViolation::PairMismatch(eta, later));
            }
        }
    }
    Ok(PcReport {
        is_pc: violations.is_empty() && eta0 + 1 < seq.len(),
        gammas,
        violations,
    })
}

/// Whether `v(a − a_η)` is strictly increasing for `η ≥ eta0`.
pub fn is_pseudo_limit<F: ResidueField>(
    k: &HahnField<F>,
    a: &HahnSeries<F::Elem>,
    seq: &[HahnSeries<F::Elem>],
    eta0: usize,
) -> Result<bool, KernelError> {
    if seq.len() < 2 {
        return Err(KernelError::TooShort { len: seq.len(), min: 2 });
    }
    let g = k.group();
    let vals: Vec<Val> = seq.iter().skip(eta0).map(|x| k.sub(a, x).valuation()).collect();
    Ok(vals.len() >= 2 && vals.windows(2).all(|w| g.compare_val(&w[1], &w[0]) == Ordering::Greater))
}
