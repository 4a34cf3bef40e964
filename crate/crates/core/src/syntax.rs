//! Text syntax for every object type: recursive-descent parsers with
//! positioned errors, and printers whose output parses back to the same value.
//!
//! Symbols: `r` is ρ in operators, `t` the series variable, `s` the
//! rational-function variable inside residue coefficients, `x` the
//! σ-polynomial variable and `s(…)`, `s^k(…)` its transforms.

use std::collections::BTreeSet;
use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use thiserror::Error;

use crate::hahn::{HahnField, HahnSeries};
use crate::leading_terms::Rv;
use crate::multi_index::MultiIndex;
use crate::residue::{RatFunc, RationalFunctionShift, RationalIdentity, ResidueField};
use crate::rho::{AlgebraicReal, LinOp, RhoError, RhoSpec};
use crate::sigma_poly::SigmaPoly;
use crate::upoly::UPoly;
use crate::value_group::{Gamma, Val, ValueGroup};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub struct ParseError {
    pub line: usize,
    pub column: usize,
    pub expected: Vec<String>,
    pub found: String,
    pub message: Option<String>,
}

impl fmt::Display for ParseError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "line {}, column {}: ", self.line, self.column)?;
        if let Some(m) = &self.message {
            return write!(f, "{m}");
        }
        write!(f, "expected {}; found {}", self.expected.join(", "), self.found)
    }
}

/// Character cursor with whitespace skipping and error bookkeeping.
pub struct Cursor {
    chars: Vec<char>,
    pos: usize,
    // furthest failure seen, kept for backtracking alternatives
    furthest: Option<(usize, BTreeSet<String>)>,
}

type PResult<T> = Result<T, ParseError>;

impl Cursor {
    pub fn new(text: &str) -> Self {
        Cursor {
            chars: text.chars().collect(),
            pos: 0,
            furthest: None,
        }
    }

    fn skip_ws(&mut self) {
        while self.chars.get(self.pos).is_some_and(|c| c.is_whitespace()) {
            self.pos += 1;
        }
    }

    pub fn peek(&mut self) -> Option<char> {
        self.skip_ws();
        self.chars.get(self.pos).copied()
    }

    fn peek_at(&mut self, offset: usize) -> Option<char> {
        self.skip_ws();
        self.chars.get(self.pos + offset).copied()
    }

    pub fn eat(&mut self, c: char) -> bool {
        if self.peek() == Some(c) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    pub fn expect(&mut self, c: char) -> PResult<()> {
        if self.eat(c) {
            Ok(())
        } else {
            Err(self.error(&[&format!("`{c}`")]))
        }
    }

    /// Eats `word` when it is not followed by another identifier character.
    pub fn eat_word(&mut self, word: &str) -> bool {
        self.skip_ws();
        let w: Vec<char> = word.chars().collect();
        let end = self.pos + w.len();
        if self.chars.get(self.pos..end) == Some(&w[..])
            && !self.chars.get(end).is_some_and(|c| c.is_alphanumeric() || *c == '_')
        {
            self.pos = end;
            true
        } else {
            false
        }
    }

    fn expect_word(&mut self, word: &str) -> PResult<()> {
        if self.eat_word(word) {
            Ok(())
        } else {
            Err(self.error(&[&format!("`{word}`")]))
        }
    }

    fn starts_digit(&mut self) -> bool {
        self.peek().is_some_and(|c| c.is_ascii_digit())
    }

    pub fn uint(&mut self) -> PResult<BigInt> {
        if !self.starts_digit() {
            return Err(self.error(&["integer"]));
        }
        let start = self.pos;
        while self.chars.get(self.pos).is_some_and(|c| c.is_ascii_digit()) {
            self.pos += 1;
        }
        let s: String = self.chars[start..self.pos].iter().collect();
        Ok(s.parse().expect("digits"))
    }

    fn small_uint(&mut self) -> PResult<u32> {
        let save = self.pos;
        let n = self.uint()?;
        u32::try_from(n).map_err(|_| {
            self.pos = save;
            self.message("exponent too large")
        })
    }

    fn signed_int(&mut self) -> PResult<BigInt> {
        let neg = self.eat('-');
        let n = self.uint()?;
        Ok(if neg { -n } else { n })
    }

    /// `int ['/' int]`, unsigned; the slash must be followed by a digit.
    pub fn unsigned_rational(&mut self) -> PResult<BigRational> {
        let n = self.uint()?;
        if self.peek() == Some('/') && self.peek_at(1).is_some_and(|c| c.is_ascii_digit() || c.is_whitespace()) {
            let save = self.pos;
            self.pos += 1;
            if self.starts_digit() {
                let d = self.uint()?;
                if d.is_zero() {
                    return Err(self.message("zero denominator"));
                }
                return Ok(BigRational::new(n, d));
            }
            self.pos = save;
        }
        Ok(BigRational::from_integer(n))
    }

    pub fn signed_rational(&mut self) -> PResult<BigRational> {
        let neg = self.eat('-');
        let v = self.unsigned_rational()?;
        Ok(if neg { -v } else { v })
    }

    fn position(&self, pos: usize) -> (usize, usize) {
        let mut line = 1;
        let mut col = 1;
        for c in &self.chars[..pos.min(self.chars.len())] {
            if *c == '\n' {
                line += 1;
                col = 1;
            } else {
                col += 1;
            }
        }
        (line, col)
    }

    fn found_at(&self, pos: usize) -> String {
        match self.chars.get(pos) {
            None => "end of input".to_string(),
            Some(c) => format!("`{c}`"),
        }
    }

    pub fn error(&mut self, expected: &[&str]) -> ParseError {
        self.skip_ws();
        let mut set: BTreeSet<String> = expected.iter().map(|s| s.to_string()).collect();
        let mut pos = self.pos;
        if let Some((fp, fset)) = &self.furthest {
            if *fp > pos {
                pos = *fp;
                set = fset.clone();
            } else if *fp == pos {
                set.extend(fset.iter().cloned());
            }
        }
        self.furthest = Some((pos, set.clone()));
        let (line, column) = self.position(pos);
        ParseError {
            line,
            column,
            expected: set.into_iter().collect(),
            found: self.found_at(pos),
            message: None,
        }
    }

    pub fn message(&mut self, msg: &str) -> ParseError {
        let (line, column) = self.position(self.pos);
        ParseError {
            line,
            column,
            expected: Vec::new(),
            found: self.found_at(self.pos),
            message: Some(msg.to_string()),
        }
    }

    pub fn finish(&mut self) -> PResult<()> {
        if self.peek().is_none() {
            Ok(())
        } else {
            Err(self.error(&["end of input"]))
        }
    }
}

fn whole<T>(text: &str, f: impl FnOnce(&mut Cursor) -> PResult<T>) -> PResult<T> {
    let mut c = Cursor::new(text);
    let v = f(&mut c)?;
    c.finish()?;
    Ok(v)
}

// ---------------------------------------------------------------- operators

fn r_power(c: &mut Cursor) -> PResult<i64> {
    if !c.eat('^') {
        return Ok(1);
    }
    let paren = c.eat('(');
    let save = c.pos;
    let e = c.signed_int()?;
    let e = i64::try_from(e).map_err(|_| {
        c.pos = save;
        c.message("exponent too large")
    })?;
    if paren {
        c.expect(')')?;
    }
    Ok(e)
}

fn linop_term(c: &mut Cursor) -> PResult<LinOp> {
    if c.starts_digit() {
        let n = c.uint()?;
        if c.eat('*') {
            c.expect_word("r")?;
            return Ok(LinOp::monomial(n, r_power(c)?));
        }
        return Ok(LinOp::constant(n));
    }
    if c.eat_word("r") {
        return Ok(LinOp::monomial(1, r_power(c)?));
    }
    Err(c.error(&["integer", "`r`"]))
}

pub fn linop(c: &mut Cursor) -> PResult<LinOp> {
    let mut neg = c.eat('-');
    if !neg {
        c.eat('+');
    }
    let mut acc = LinOp::zero();
    loop {
        let t = linop_term(c)?;
        acc = if neg { &acc - &t } else { &acc + &t };
        if c.eat('+') {
            neg = false;
        } else if c.eat('-') {
            neg = true;
        } else {
            return Ok(acc);
        }
    }
}

pub fn parse_linop(text: &str) -> PResult<LinOp> {
    whole(text, linop)
}

pub fn print_linop(l: &LinOp) -> String {
    l.to_string()
}

// ------------------------------------------------------------------- values

pub fn gamma(c: &mut Cursor, g: &ValueGroup) -> PResult<Gamma> {
    let start = c.pos;
    let (num, den) = if c.eat('(') {
        let num = linop(c)?;
        c.expect(')')?;
        let den = if c.eat('/') {
            c.expect('(')?;
            let d = linop(c)?;
            c.expect(')')?;
            d
        } else {
            LinOp::one()
        };
        (num, den)
    } else {
        (linop(c)?, LinOp::one())
    };
    let den_sign = g.rho().sign(&den);
    let (num, den) = match den_sign {
        crate::rho::Sign::Positive => (num, den),
        crate::rho::Sign::Negative => (-&num, -&den),
        crate::rho::Sign::Zero => {
            c.pos = start;
            return Err(c.message("denominator acts as zero for this rho"));
        }
    };
    Ok(g.frac(&num, &den).expect("denominator checked positive"))
}

pub fn parse_gamma(text: &str, g: &ValueGroup) -> PResult<Gamma> {
    whole(text, |c| gamma(c, g))
}

pub fn print_gamma(x: &Gamma) -> String {
    x.to_string()
}

pub fn val(c: &mut Cursor, g: &ValueGroup) -> PResult<Val> {
    if c.eat_word("inf") {
        Ok(Val::Infinity)
    } else {
        gamma(c, g).map(Val::Finite)
    }
}

pub fn parse_val(text: &str, g: &ValueGroup) -> PResult<Val> {
    whole(text, |c| val(c, g))
}

pub fn print_val(v: &Val) -> String {
    v.to_string()
}

// ------------------------------------------------------------ residue syntax

/// How a residue carrier reads and writes its elements.
pub trait CarrierSyntax: ResidueField {
    /// True when the next token can start an unsigned coefficient.
    fn starts_coeff(&self, c: &mut Cursor) -> bool;

    /// An unsigned coefficient.
    fn coeff(&self, c: &mut Cursor) -> PResult<Self::Elem>;

    /// `(negative, magnitude)` with the magnitude `None` when it is one.
    fn split(&self, e: &Self::Elem) -> (bool, Option<String>);

    fn print_elem(&self, e: &Self::Elem) -> String {
        let (neg, mag) = self.split(e);
        format!("{}{}", if neg { "-" } else { "" }, mag.unwrap_or_else(|| "1".to_string()))
    }

    fn elem(&self, c: &mut Cursor) -> PResult<Self::Elem> {
        let neg = c.eat('-');
        let v = self.coeff(c)?;
        Ok(if neg { self.neg(&v) } else { v })
    }

    fn parse_elem(&self, text: &str) -> PResult<Self::Elem> {
        whole(text, |c| self.elem(c))
    }
}

impl CarrierSyntax for RationalIdentity {
    fn starts_coeff(&self, c: &mut Cursor) -> bool {
        c.starts_digit()
    }

    fn coeff(&self, c: &mut Cursor) -> PResult<BigRational> {
        c.unsigned_rational()
    }

    fn split(&self, e: &BigRational) -> (bool, Option<String>) {
        let abs = e.abs();
        (e.is_negative(), (!abs.is_one()).then(|| abs.to_string()))
    }
}

fn s_term(c: &mut Cursor) -> PResult<UPoly> {
    if c.starts_digit() {
        let q = c.unsigned_rational()?;
        if c.eat('*') {
            c.expect_word("s")?;
            let e = if c.eat('^') { c.small_uint()? } else { 1 };
            return Ok(UPoly::monomial(q, e as usize));
        }
        return Ok(UPoly::constant(q));
    }
    if c.eat_word("s") {
        let e = if c.eat('^') { c.small_uint()? } else { 1 };
        return Ok(UPoly::monomial(BigRational::one(), e as usize));
    }
    Err(c.error(&["number", "`s`"]))
}

/// A polynomial in `s` with rational coefficients.
pub fn s_poly(c: &mut Cursor) -> PResult<UPoly> {
    let mut neg = c.eat('-');
    if !neg {
        c.eat('+');
    }
    let mut acc = UPoly::zero();
    loop {
        let t = s_term(c)?;
        acc = if neg { &acc - &t } else { &acc + &t };
        if c.eat('+') {
            neg = false;
        } else if c.eat('-') {
            neg = true;
        } else {
            return Ok(acc);
        }
    }
}

impl CarrierSyntax for RationalFunctionShift {
    fn starts_coeff(&self, c: &mut Cursor) -> bool {
        c.starts_digit() || c.peek() == Some('(')
    }

    fn coeff(&self, c: &mut Cursor) -> PResult<RatFunc> {
        if c.starts_digit() {
            return c.unsigned_rational().map(RatFunc::constant);
        }
        c.expect('(')?;
        let num = s_poly(c)?;
        c.expect(')')?;
        let den = if c.eat('/') {
            c.expect('(')?;
            let start = c.pos;
            let d = s_poly(c)?;
            if d.is_zero() {
                c.pos = start;
                return Err(c.message("zero denominator"));
            }
            c.expect(')')?;
            d
        } else {
            UPoly::one()
        };
        Ok(RatFunc::new(num, den))
    }

    fn split(&self, e: &RatFunc) -> (bool, Option<String>) {
        if self.is_zero(&self.sub(e, &self.one())) {
            (false, None)
        } else if self.is_zero(&self.add(e, &self.one())) {
            (true, None)
        } else {
            (false, Some(e.to_string()))
        }
    }
}

// ------------------------------------------------------------------- series

/// `t ['^' '(' γ ')']`, returning the exponent.
fn t_monomial<F: ResidueField>(c: &mut Cursor, k: &HahnField<F>) -> PResult<Option<Gamma>> {
    if !c.eat_word("t") {
        return Ok(None);
    }
    if !c.eat('^') {
        return Ok(Some(k.group().one()));
    }
    c.expect('(')?;
    let g = gamma(c, k.group())?;
    c.expect(')')?;
    Ok(Some(g))
}

fn series_term<F: CarrierSyntax>(c: &mut Cursor, k: &HahnField<F>) -> PResult<HahnSeries<F::Elem>> {
    let r = k.residue();
    if r.starts_coeff(c) {
        let coef = r.coeff(c)?;
        if c.eat('*') {
            let Some(g) = t_monomial(c, k)? else {
                return Err(c.error(&["`t`"]));
            };
            return Ok(k.mul_monomial(&k.constant(coef), &r.one(), &g));
        }
        return Ok(k.constant(coef));
    }
    match t_monomial(c, k)? {
        Some(g) => Ok(k.t_pow(g)),
        None => Err(c.error(&["coefficient", "`t`"])),
    }
}

pub fn series<F: CarrierSyntax>(c: &mut Cursor, k: &HahnField<F>) -> PResult<HahnSeries<F::Elem>> {
    let mut neg = c.eat('-');
    if !neg {
        c.eat('+');
    }
    let mut acc = k.zero();
    loop {
        let t = series_term(c, k)?;
        acc = if neg { k.sub(&acc, &t) } else { k.add(&acc, &t) };
        if c.eat('+') {
            neg = false;
        } else if c.eat('-') {
            neg = true;
        } else {
            return Ok(acc);
        }
    }
}

pub fn parse_series<F: CarrierSyntax>(text: &str, k: &HahnField<F>) -> PResult<HahnSeries<F::Elem>> {
    whole(text, |c| series(c, k))
}

/// `(negative, body)` for one term; `body` is `None` for the constant 1.
fn term_body<F: CarrierSyntax>(k: &HahnField<F>, g: &Gamma, coef: &F::Elem) -> (bool, Option<String>) {
    let (neg, mag) = k.residue().split(coef);
    let mono = (!g.is_zero()).then(|| format!("t^({g})"));
    let body = match (mag, mono) {
        (None, None) => None,
        (Some(m), None) | (None, Some(m)) => Some(m),
        (Some(m), Some(t)) => Some(format!("{m}*{t}")),
    };
    (neg, body)
}

fn join_signed(parts: impl IntoIterator<Item = (bool, String)>) -> String {
    let mut out = String::new();
    for (neg, body) in parts {
        if out.is_empty() {
            if neg {
                out.push('-');
            }
        } else {
            out.push_str(if neg { " - " } else { " + " });
        }
        out.push_str(&body);
    }
    if out.is_empty() {
        out.push('0');
    }
    out
}

pub fn print_series<F: CarrierSyntax>(k: &HahnField<F>, x: &HahnSeries<F::Elem>) -> String {
    join_signed(x.terms().iter().map(|(g, c)| {
        let (neg, body) = term_body(k, g, c);
        (neg, body.unwrap_or_else(|| "1".to_string()))
    }))
}

// --------------------------------------------------------- sigma-polynomials

fn small_power(c: &mut Cursor) -> PResult<u32> {
    if c.eat('^') {
        c.small_uint()
    } else {
        Ok(1)
    }
}

fn sigma_pow_poly<F: ResidueField>(k: &HahnField<F>, base: &SigmaPoly<F::Elem>, e: u32) -> SigmaPoly<F::Elem> {
    let mut acc = SigmaPoly::constant(k, k.one(), base.order_bound());
    for _ in 0..e {
        acc = acc.mul(k, base);
    }
    acc
}

fn sigma_factor<F: CarrierSyntax>(c: &mut Cursor, k: &HahnField<F>) -> PResult<SigmaPoly<F::Elem>> {
    if c.eat_word("x") {
        let e = small_power(c)?;
        return Ok(sigma_pow_poly(k, &SigmaPoly::sigma_var(k, 0, 0), e));
    }
    if c.eat_word("s") {
        let j = if c.eat('^') { c.small_uint()? } else { 1 };
        c.expect('(')?;
        c.expect_word("x")?;
        c.expect(')')?;
        let e = small_power(c)?;
        let j = j as usize;
        return Ok(sigma_pow_poly(k, &SigmaPoly::sigma_var(k, j, j), e));
    }
    if let Some(g) = t_monomial(c, k)? {
        return Ok(SigmaPoly::constant(k, k.t_pow(g), 0));
    }
    let r = k.residue();
    if c.peek() == Some('(') {
        let save = c.pos;
        if r.starts_coeff(c) {
            if let Ok(coef) = r.coeff(c) {
                return Ok(SigmaPoly::constant(k, k.constant(coef), 0));
            }
            c.pos = save;
        }
        c.expect('(')?;
        let inner = sigma_expr(c, k)?;
        c.expect(')')?;
        let e = small_power(c)?;
        return Ok(sigma_pow_poly(k, &inner, e));
    }
    if r.starts_coeff(c) {
        let coef = r.coeff(c)?;
        return Ok(SigmaPoly::constant(k, k.constant(coef), 0));
    }
    Err(c.error(&["`x`", "`s`", "`t`", "`(`", "coefficient"]))
}

fn sigma_term<F: CarrierSyntax>(c: &mut Cursor, k: &HahnField<F>) -> PResult<SigmaPoly<F::Elem>> {
    let mut acc = sigma_factor(c, k)?;
    while c.eat('*') {
        acc = acc.mul(k, &sigma_factor(c, k)?);
    }
    Ok(acc)
}

fn sigma_expr<F: CarrierSyntax>(c: &mut Cursor, k: &HahnField<F>) -> PResult<SigmaPoly<F::Elem>> {
    let mut neg = c.eat('-');
    if !neg {
        c.eat('+');
    }
    let mut acc = SigmaPoly::zero(0);
    loop {
        let t = sigma_term(c, k)?;
        acc = if neg { acc.sub(k, &t) } else { acc.add(k, &t) };
        if c.eat('+') {
            neg = false;
        } else if c.eat('-') {
            neg = true;
        } else {
            return Ok(acc);
        }
    }
}

/// Parses a σ-polynomial; the order bound is the order of the result (0 for
/// constants).
pub fn sigma_poly<F: CarrierSyntax>(c: &mut Cursor, k: &HahnField<F>) -> PResult<SigmaPoly<F::Elem>> {
    let p = sigma_expr(c, k)?;
    Ok(normalize_order(&p))
}

pub fn normalize_order<E: Clone + PartialEq>(p: &SigmaPoly<E>) -> SigmaPoly<E> {
    p.with_order_bound(p.order().unwrap_or(0))
}

pub fn parse_sigmapoly<F: CarrierSyntax>(text: &str, k: &HahnField<F>) -> PResult<SigmaPoly<F::Elem>> {
    whole(text, |c| sigma_poly(c, k))
}

fn sigma_monomial_text(idx: &MultiIndex) -> Option<String> {
    let parts: Vec<String> = idx
        .entries()
        .iter()
        .enumerate()
        .filter(|(_, &e)| e > 0)
        .map(|(j, &e)| {
            let base = match j {
                0 => "x".to_string(),
                1 => "s(x)".to_string(),
                _ => format!("s^{j}(x)"),
            };
            if e == 1 {
                base
            } else {
                format!("{base}^{e}")
            }
        })
        .collect();
    (!parts.is_empty()).then(|| parts.join("*"))
}

pub fn print_sigmapoly<F: CarrierSyntax>(k: &HahnField<F>, p: &SigmaPoly<F::Elem>) -> String {
    let terms: Vec<_> = p.terms().collect();
    join_signed(terms.into_iter().rev().map(|(idx, coef)| {
        let mono = sigma_monomial_text(idx);
        let (neg, cbody) = if coef.len() == 1 {
            let (g, c) = &coef.terms()[0];
            term_body(k, g, c)
        } else {
            (false, Some(format!("({})", print_series(k, coef))))
        };
        let body = match (cbody, mono) {
            (None, None) => "1".to_string(),
            (Some(b), None) | (None, Some(b)) => b,
            (Some(b), Some(m)) => format!("{b}*{m}"),
        };
        (neg, body)
    }))
}

// ----------------------------------------------------------------------- RV

pub fn rv_elem<F: CarrierSyntax>(c: &mut Cursor, k: &HahnField<F>) -> PResult<Rv<F::Elem>> {
    c.expect_word("rv")?;
    c.expect('(')?;
    if c.eat_word("inf") {
        c.expect(')')?;
        return Ok(Rv::Infinity);
    }
    c.expect_word("γ").or_else(|_| c.expect_word("gamma"))?;
    c.expect('=')?;
    let g = gamma(c, k.group())?;
    c.expect(',')?;
    c.expect_word("lc")?;
    c.expect('=')?;
    let start = c.pos;
    let lead = k.residue().elem(c)?;
    if k.residue().is_zero(&lead) {
        c.pos = start;
        return Err(c.message("leading coefficient must be nonzero"));
    }
    c.expect(')')?;
    Ok(Rv::Finite { gamma: g, lead })
}

pub fn parse_rv<F: CarrierSyntax>(text: &str, k: &HahnField<F>) -> PResult<Rv<F::Elem>> {
    whole(text, |c| rv_elem(c, k))
}

pub fn print_rv<F: CarrierSyntax>(k: &HahnField<F>, r: &Rv<F::Elem>) -> String {
    match r {
        Rv::Infinity => "rv(inf)".to_string(),
        Rv::Finite { gamma, lead } => format!("rv(γ={gamma}, lc={})", k.residue().print_elem(lead)),
    }
}

// ---------------------------------------------------------------------- rho

fn rho_error(c: &mut Cursor, start: usize, e: RhoError) -> ParseError {
    c.pos = start;
    c.message(&e.to_string())
}

pub fn rho_spec(c: &mut Cursor) -> PResult<RhoSpec> {
    let start = c.pos;
    if c.eat_word("infinite") {
        return Ok(RhoSpec::Infinite);
    }
    if c.eat_word("rational") {
        let v = c.signed_rational()?;
        return RhoSpec::rational(v.numer().clone(), v.denom().clone()).map_err(|e| rho_error(c, start, e));
    }
    if c.eat_word("algebraic") {
        c.expect('[')?;
        let mut coeffs = vec![c.signed_int()?];
        while c.eat(',') {
            coeffs.push(c.signed_int()?);
        }
        c.expect(']')?;
        c.expect_word("in")?;
        c.expect('(')?;
        let lo = c.signed_rational()?;
        c.expect(',')?;
        let hi = c.signed_rational()?;
        c.expect(')')?;
        let base = AlgebraicReal::new(coeffs, lo, hi).map_err(|e| rho_error(c, start, e))?;
        if c.eat_word("plus-eps") {
            return Ok(RhoSpec::plus_eps(base));
        }
        if c.eat_word("minus-eps") {
            return RhoSpec::minus_eps(base).map_err(|e| rho_error(c, start, e));
        }
        return Ok(RhoSpec::AlgebraicReal(base));
    }
    Err(c.error(&["`rational`", "`algebraic`", "`infinite`"]))
}

pub fn parse_rho(text: &str) -> PResult<RhoSpec> {
    whole(text, rho_spec)
}

pub fn print_rho(rho: &RhoSpec) -> String {
    fn alg(a: &AlgebraicReal) -> String {
        let cs: Vec<String> = a.minpoly_coeffs().iter().map(|c| c.to_string()).collect();
        let (lo, hi) = a.interval();
        format!("algebraic [{}] in ({lo},{hi})", cs.join(","))
    }
    match rho {
        RhoSpec::Rational(v) => format!("rational {v}"),
        RhoSpec::AlgebraicReal(a) => alg(a),
        RhoSpec::AlgebraicPlusEps(a) => format!("{} plus-eps", alg(a)),
        RhoSpec::AlgebraicMinusEps(a) => format!("{} minus-eps", alg(a)),
        RhoSpec::Infinite => "infinite".to_string(),
    }
}

// ------------------------------------------------------------------- config

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ResidueKind {
    RationalId,
    RationalShift,
}

impl ResidueKind {
    pub fn parse(text: &str) -> Option<Self> {
        match text.trim() {
            "rational-id" => Some(ResidueKind::RationalId),
            "rational-shift" => Some(ResidueKind::RationalShift),
            _ => None,
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            ResidueKind::RationalId => "rational-id",
            ResidueKind::RationalShift => "rational-shift",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct Config {
    pub rho: Option<RhoSpec>,
    pub residue: Option<ResidueKind>,
}

/// `key = value` lines with `#` comments; keys `rho` and `residue`.
pub fn parse_config(text: &str) -> PResult<Config> {
    let mut cfg = Config::default();
    for (n, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap_or("");
        if line.trim().is_empty() {
            continue;
        }
        let at = |column: usize, message: String| ParseError {
            line: n + 1,
            column,
            expected: Vec::new(),
            found: String::new(),
            message: Some(message),
        };
        let Some((key, value)) = line.split_once('=') else {
            return Err(at(1, "expected `key = value`".to_string()));
        };
        let value_col = key.chars().count() + 2;
        let value = value.trim().trim_matches('"');
        match key.trim() {
            "rho" => {
                cfg.rho = Some(parse_rho(value).map_err(|e| ParseError {
                    line: n + 1,
                    column: value_col + e.column - 1,
                    ..e
                })?)
            }
            "residue" => {
                cfg.residue = Some(
                    ResidueKind::parse(value)
                        .ok_or_else(|| at(value_col, format!("unknown residue field `{value}`")))?,
                )
            }
            other => return Err(at(1, format!("unknown key `{other}`"))),
        }
    }
    Ok(cfg)
}
