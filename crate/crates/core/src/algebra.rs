//! Exact arithmetic in the free commutative polynomial algebra `Q[g_1, ..., g_m]`.
//!
//! Channel coefficients and alphabet letters are elements of this algebra. The
//! generators stand for real numbers whose only assumed relations are the ones
//! written down explicitly, so exact equality of [`AlgebraElement`]s is exact
//! equality of the corresponding reals for every valuation.

use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigUint;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};

/// Exact rational number in canonical form (coprime, positive denominator).
pub type Rational = BigRational;

/// Default upper bound on the number of objects any enumeration may materialise.
pub const DEFAULT_ENUMERATION_CAP: usize = 10_000_000;

/// A power product `g_1^e_1 ... g_m^e_m`.
///
/// Monomials are totally ordered graded-lexicographically: lower total degree
/// first, and within one degree the monomial with the larger exponent on the
/// earliest generator first (`1 < g1 < g2 < g1^2 < g1 g2 < g2^2`).
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Monomial {
    exponents: Vec<u32>,
    degree: u32,
}

impl Monomial {
    pub fn one(nvars: usize) -> Self {
        Monomial {
            exponents: vec![0; nvars],
            degree: 0,
        }
    }

    pub fn variable(nvars: usize, index: usize) -> Self {
        assert!(index < nvars, "generator index {index} out of range for {nvars} generators");
        let mut exponents = vec![0; nvars];
        exponents[index] = 1;
        Monomial { exponents, degree: 1 }
    }

    pub fn from_exponents(exponents: Vec<u32>) -> Self {
        let degree = exponents.iter().sum();
        Monomial { exponents, degree }
    }

    pub fn exponents(&self) -> &[u32] {
        &self.exponents
    }

    pub fn nvars(&self) -> usize {
        self.exponents.len()
    }

    /// Total degree: the sum of all exponents.
    pub fn degree(&self) -> u32 {
        self.degree
    }

    pub fn is_one(&self) -> bool {
        self.degree == 0
    }

    pub fn mul(&self, other: &Monomial) -> Monomial {
        assert_eq!(self.nvars(), other.nvars());
        Monomial {
            exponents: self
                .exponents
                .iter()
                .zip(&other.exponents)
                .map(|(a, b)| a + b)
                .collect(),
            degree: self.degree + other.degree,
        }
    }

    /// Indices of generators with a nonzero exponent.
    pub fn support(&self) -> impl Iterator<Item = usize> + '_ {
        self.exponents
            .iter()
            .enumerate()
            .filter(|(_, &e)| e > 0)
            .map(|(i, _)| i)
    }

    fn evaluate(&self, values: &[f64]) -> f64 {
        self.exponents
            .iter()
            .zip(values)
            .filter(|(&e, _)| e > 0)
            .map(|(&e, &v)| v.powi(e as i32))
            .product()
    }
}

impl Ord for Monomial {
    fn cmp(&self, other: &Self) -> Ordering {
        self.degree
            .cmp(&other.degree)
            .then_with(|| other.exponents.cmp(&self.exponents))
    }
}

impl PartialOrd for Monomial {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// Number of monomials in `nvars` variables of total degree at most `degree`,
/// i.e. `C(nvars + degree, degree)`.
pub fn monomial_count(nvars: usize, degree: u32) -> BigUint {
    let mut count = BigUint::one();
    // C(m+d, d) = prod_{t=1..d} (m+t)/t, each partial product is itself a binomial.
    for t in 1..=degree as u64 {
        count = count * BigUint::from(nvars as u64 + t) / BigUint::from(t);
    }
    count
}

/// All monomials of degree at most `degree`, graded-lexicographically sorted,
/// the constant monomial first. Fails if there are more than `cap` of them.
pub fn enumerate_monomials_capped(nvars: usize, degree: u32, cap: usize) -> Result<Vec<Monomial>> {
    if nvars == 0 {
        return Err(Error::InvalidArgument("monomials need at least one variable".into()));
    }
    let count = monomial_count(nvars, degree);
    if count > BigUint::from(cap) {
        return Err(Error::cap(
            "monomial enumeration",
            count,
            cap,
            "lower the degree",
        ));
    }
    let mut out = Vec::with_capacity(count.to_usize().unwrap_or(0));
    let mut buf = vec![0u32; nvars];
    for d in 0..=degree {
        push_degree(&mut buf, 0, d, &mut out);
    }
    Ok(out)
}

/// [`enumerate_monomials_capped`] with [`DEFAULT_ENUMERATION_CAP`].
pub fn enumerate_monomials(nvars: usize, degree: u32) -> Result<Vec<Monomial>> {
    enumerate_monomials_capped(nvars, degree, DEFAULT_ENUMERATION_CAP)
}

fn push_degree(buf: &mut [u32], pos: usize, remaining: u32, out: &mut Vec<Monomial>) {
    if pos + 1 == buf.len() {
        buf[pos] = remaining;
        out.push(Monomial::from_exponents(buf.to_vec()));
        return;
    }
    for e in (0..=remaining).rev() {
        buf[pos] = e;
        push_degree(buf, pos + 1, remaining - e, out);
    }
    buf[pos] = 0;
}

/// Numeric values for named generators. Unset generators are `None`.
#[derive(Clone, Debug, PartialEq)]
pub struct Valuation {
    names: Vec<String>,
    values: Vec<Option<f64>>,
}

impl Valuation {
    pub fn new(names: Vec<String>) -> Self {
        let values = vec![None; names.len()];
        Valuation { names, values }
    }

    pub fn from_values(names: Vec<String>, values: Vec<Option<f64>>) -> Self {
        assert_eq!(names.len(), values.len());
        Valuation { names, values }
    }

    pub fn set(&mut self, index: usize, value: f64) {
        self.values[index] = Some(value);
    }

    pub fn get(&self, index: usize) -> Option<f64> {
        self.values[index]
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn values(&self) -> &[Option<f64>] {
        &self.values
    }

    pub fn len(&self) -> usize {
        self.names.len()
    }

    pub fn is_empty(&self) -> bool {
        self.names.is_empty()
    }
}

/// An element of `Q[g_1, ..., g_m]`, stored as a sparse map from monomials to
/// nonzero rational coefficients. Two elements are equal exactly when they are
/// equal as polynomials, and equal elements hash identically.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct AlgebraElement {
    nvars: usize,
    terms: BTreeMap<Monomial, Rational>,
}

impl AlgebraElement {
    pub fn zero(nvars: usize) -> Self {
        AlgebraElement {
            nvars,
            terms: BTreeMap::new(),
        }
    }

    pub fn one(nvars: usize) -> Self {
        Self::constant(nvars, Rational::one())
    }

    pub fn constant(nvars: usize, value: Rational) -> Self {
        Self::term(Monomial::one(nvars), value)
    }

    pub fn integer(nvars: usize, value: i64) -> Self {
        Self::constant(nvars, Rational::from_integer(value.into()))
    }

    pub fn generator(nvars: usize, index: usize) -> Self {
        Self::term(Monomial::variable(nvars, index), Rational::one())
    }

    pub fn term(monomial: Monomial, coefficient: Rational) -> Self {
        let nvars = monomial.nvars();
        let mut terms = BTreeMap::new();
        if !coefficient.is_zero() {
            terms.insert(monomial, coefficient);
        }
        AlgebraElement { nvars, terms }
    }

    /// Builds an element from arbitrary `(monomial, coefficient)` pairs,
    /// merging repeated monomials and dropping zeros.
    pub fn from_terms(nvars: usize, terms: impl IntoIterator<Item = (Monomial, Rational)>) -> Result<Self> {
        let mut out = AlgebraElement::zero(nvars);
        for (m, c) in terms {
            if m.nvars() != nvars {
                return Err(Error::GeneratorMismatch {
                    left: nvars,
                    right: m.nvars(),
                });
            }
            out.add_term(m, c);
        }
        Ok(out)
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> &BTreeMap<Monomial, Rational> {
        &self.terms
    }

    pub fn coefficient(&self, monomial: &Monomial) -> Option<&Rational> {
        self.terms.get(monomial)
    }

    pub fn monomials(&self) -> impl Iterator<Item = &Monomial> {
        self.terms.keys()
    }

    /// Largest total degree among the terms; `None` for zero.
    pub fn degree(&self) -> Option<u32> {
        self.terms.keys().map(Monomial::degree).max()
    }

    /// The value of a constant element, `None` if any generator occurs.
    pub fn as_constant(&self) -> Option<Rational> {
        match self.terms.len() {
            0 => Some(Rational::zero()),
            1 => {
                let (m, c) = self.terms.iter().next().unwrap();
                m.is_one().then(|| c.clone())
            }
            _ => None,
        }
    }

    fn add_term(&mut self, monomial: Monomial, coefficient: Rational) {
        if coefficient.is_zero() {
            return;
        }
        match self.terms.entry(monomial) {
            std::collections::btree_map::Entry::Vacant(v) => {
                v.insert(coefficient);
            }
            std::collections::btree_map::Entry::Occupied(mut o) => {
                *o.get_mut() += coefficient;
                if o.get().is_zero() {
                    o.remove();
                }
            }
        }
    }

    fn check_same(&self, other: &Self) -> Result<()> {
        if self.nvars == other.nvars {
            Ok(())
        } else {
            Err(Error::GeneratorMismatch {
                left: self.nvars,
                right: other.nvars,
            })
        }
    }

    pub fn try_add(&self, other: &Self) -> Result<Self> {
        self.check_same(other)?;
        let mut out = self.clone();
        out.add_assign_unchecked(other);
        Ok(out)
    }

    pub fn try_sub(&self, other: &Self) -> Result<Self> {
        self.check_same(other)?;
        let mut out = self.clone();
        for (m, c) in &other.terms {
            out.add_term(m.clone(), -c);
        }
        Ok(out)
    }

    pub fn try_mul(&self, other: &Self) -> Result<Self> {
        self.check_same(other)?;
        let mut out = AlgebraElement::zero(self.nvars);
        for (ma, ca) in &self.terms {
            for (mb, cb) in &other.terms {
                out.add_term(ma.mul(mb), ca * cb);
            }
        }
        Ok(out)
    }

    pub(crate) fn add_assign_unchecked(&mut self, other: &Self) {
        debug_assert_eq!(self.nvars, other.nvars);
        for (m, c) in &other.terms {
            self.add_term(m.clone(), c.clone());
        }
    }

    /// Multiplies every coefficient by `factor`.
    pub fn scale(&self, factor: &Rational) -> Self {
        if factor.is_zero() {
            return AlgebraElement::zero(self.nvars);
        }
        AlgebraElement {
            nvars: self.nvars,
            terms: self
                .terms
                .iter()
                .map(|(m, c)| (m.clone(), c * factor))
                .collect(),
        }
    }

    pub fn scale_integer(&self, factor: i64) -> Self {
        self.scale(&Rational::from_integer(factor.into()))
    }

    /// Floating-point value under `valuation`. Only generators that actually
    /// occur need a value.
    pub fn evaluate(&self, valuation: &Valuation) -> Result<f64> {
        if valuation.len() != self.nvars {
            return Err(Error::GeneratorMismatch {
                left: self.nvars,
                right: valuation.len(),
            });
        }
        let mut values = vec![0.0; self.nvars];
        for m in self.terms.keys() {
            for g in m.support() {
                values[g] = valuation
                    .get(g)
                    .ok_or_else(|| Error::MissingValuation(valuation.names()[g].clone()))?;
            }
        }
        Ok(self
            .terms
            .iter()
            .map(|(m, c)| c.to_f64().unwrap_or(f64::NAN) * m.evaluate(&values))
            .sum())
    }

    /// Human-readable form using the given generator names, e.g. `3/2*x^2 - y + 1`.
    /// The output parses back to the same element.
    pub fn display<'a>(&'a self, names: &'a [String]) -> impl fmt::Display + 'a {
        DisplayElement { element: self, names }
    }
}

struct DisplayElement<'a> {
    element: &'a AlgebraElement,
    names: &'a [String],
}

impl fmt::Display for DisplayElement<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.element.is_zero() {
            return f.write_str("0");
        }
        // Highest-order term first reads naturally.
        for (k, (m, c)) in self.element.terms.iter().rev().enumerate() {
            let negative = c.is_negative();
            let magnitude = c.abs();
            match (k, negative) {
                (0, true) => f.write_str("-")?,
                (0, false) => {}
                (_, true) => f.write_str(" - ")?,
                (_, false) => f.write_str(" + ")?,
            }
            let mut factors = Vec::new();
            if m.is_one() || !magnitude.is_one() {
                factors.push(magnitude.to_string());
            }
            for (g, &e) in m.exponents().iter().enumerate() {
                match e {
                    0 => {}
                    1 => factors.push(self.names[g].clone()),
                    _ => factors.push(format!("{}^{}", self.names[g], e)),
                }
            }
            f.write_str(&factors.join("*"))?;
        }
        Ok(())
    }
}

impl Add for &AlgebraElement {
    type Output = AlgebraElement;

    /// # Panics
    /// If the operands live over different generator sets; use
    /// [`AlgebraElement::try_add`] to get an error instead.
    fn add(self, rhs: Self) -> AlgebraElement {
        self.try_add(rhs).expect("generator set mismatch")
    }
}

impl Sub for &AlgebraElement {
    type Output = AlgebraElement;

    fn sub(self, rhs: Self) -> AlgebraElement {
        self.try_sub(rhs).expect("generator set mismatch")
    }
}

impl Mul for &AlgebraElement {
    type Output = AlgebraElement;

    fn mul(self, rhs: Self) -> AlgebraElement {
        self.try_mul(rhs).expect("generator set mismatch")
    }
}

impl Neg for &AlgebraElement {
    type Output = AlgebraElement;

    fn neg(self) -> AlgebraElement {
        AlgebraElement {
            nvars: self.nvars,
            terms: self.terms.iter().map(|(m, c)| (m.clone(), -c)).collect(),
        }
    }
}

/// Parses `"p/q"` or `"p"` (optionally signed) into a rational.
pub fn parse_rational(text: &str) -> Option<Rational> {
    let text = text.trim();
    if let Some(dot) = text.find('.') {
        // finite decimal, e.g. "-0.125"
        let (int_part, frac_part) = (&text[..dot], &text[dot + 1..]);
        if frac_part.is_empty() || !frac_part.bytes().all(|b| b.is_ascii_digit()) {
            return None;
        }
        let negative = int_part.starts_with('-');
        let digits = format!("{}{}", int_part.trim_start_matches(['-', '+']), frac_part);
        let numer: num_bigint::BigInt = digits.parse().ok()?;
        let denom = num_bigint::BigInt::from(10u32).pow(frac_part.len() as u32);
        let value = Rational::new(numer, denom);
        return Some(if negative { -value } else { value });
    }
    match text.split_once('/') {
        Some((p, q)) => {
            let p: num_bigint::BigInt = p.trim().parse().ok()?;
            let q: num_bigint::BigInt = q.trim().parse().ok()?;
            (!q.is_zero()).then(|| Rational::new(p, q))
        }
        None => Some(Rational::from_integer(text.parse().ok()?)),
    }
}

/// Always `p/q`, with `q = 1` for integers.
pub fn format_rational(value: &Rational) -> String {
    format!("{}/{}", value.numer(), value.denom())
}
