//! Truncated multivariate polynomials over the rationals.
//!
//! A polynomial carries its number of variables and an inclusive bound on
//! total degree. Terms above the bound are dropped as soon as they appear,
//! so products and powers behave like arithmetic in `Q[h]/(h)^{bound+1}`.

use std::collections::btree_map::Entry;
use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use thiserror::Error;

use crate::combinatorics::Rational;
use crate::lattice::{CohomologyClass, IntersectionForm, LatticeError};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum PolyError {
    #[error("variable counts differ: {0} vs {1}")]
    DimensionMismatch(usize, usize),
    #[error("exponential needs a vanishing constant term")]
    NonzeroConstantTerm,
    #[error("series inverse needs a nonzero constant term")]
    ZeroConstantTerm,
    #[error(transparent)]
    Lattice(#[from] LatticeError),
}

/// Exponent multi-index, one entry per variable.
pub type Monomial = Vec<u32>;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TruncatedPolynomial {
    nvars: usize,
    degree_bound: u32,
    terms: BTreeMap<Monomial, Rational>,
}

fn total_degree(m: &[u32]) -> u32 {
    m.iter().sum()
}

impl TruncatedPolynomial {
    pub fn zero(nvars: usize, degree_bound: u32) -> Self {
        Self {
            nvars,
            degree_bound,
            terms: BTreeMap::new(),
        }
    }

    pub fn constant(nvars: usize, degree_bound: u32, c: Rational) -> Self {
        let mut p = Self::zero(nvars, degree_bound);
        p.add_term(vec![0; nvars], c);
        p
    }

    pub fn one(nvars: usize, degree_bound: u32) -> Self {
        Self::constant(nvars, degree_bound, Rational::one())
    }

    /// The variable `h_{index+1}`.
    pub fn variable(nvars: usize, degree_bound: u32, index: usize) -> Self {
        let mut m = vec![0; nvars];
        m[index] = 1;
        let mut p = Self::zero(nvars, degree_bound);
        p.add_term(m, Rational::one());
        p
    }

    /// Builds a polynomial from `(exponents, coefficient)` pairs; repeated
    /// monomials are summed.
    pub fn from_terms(
        nvars: usize,
        degree_bound: u32,
        terms: impl IntoIterator<Item = (Monomial, Rational)>,
    ) -> Self {
        let mut p = Self::zero(nvars, degree_bound);
        for (m, c) in terms {
            assert_eq!(
                m.len(),
                nvars,
                "monomial length must equal the variable count"
            );
            p.add_term(m, c);
        }
        p
    }

    fn add_term(&mut self, m: Monomial, c: Rational) {
        if c.is_zero() || total_degree(&m) > self.degree_bound {
            return;
        }
        match self.terms.entry(m) {
            Entry::Vacant(slot) => {
                slot.insert(c);
            }
            Entry::Occupied(mut slot) => {
                *slot.get_mut() += c;
                if slot.get().is_zero() {
                    slot.remove();
                }
            }
        }
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn degree_bound(&self) -> u32 {
        self.degree_bound
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Monomial, &Rational)> {
        self.terms.iter()
    }

    pub fn coefficient(&self, m: &[u32]) -> Rational {
        self.terms.get(m).cloned().unwrap_or_else(Rational::zero)
    }

    pub fn constant_term(&self) -> Rational {
        self.coefficient(&vec![0; self.nvars])
    }

    /// Largest total degree of a stored term, `None` for zero.
    pub fn degree(&self) -> Option<u32> {
        self.terms.keys().map(|m| total_degree(m)).max()
    }

    pub fn with_bound(&self, degree_bound: u32) -> Self {
        let mut p = Self::zero(self.nvars, degree_bound);
        for (m, c) in &self.terms {
            p.add_term(m.clone(), c.clone());
        }
        p
    }

    fn compatible(&self, other: &Self) -> Result<u32, PolyError> {
        if self.nvars != other.nvars {
            return Err(PolyError::DimensionMismatch(self.nvars, other.nvars));
        }
        Ok(self.degree_bound.min(other.degree_bound))
    }

    pub fn add(&self, other: &Self) -> Result<Self, PolyError> {
        let bound = self.compatible(other)?;
        let mut p = self.with_bound(bound);
        for (m, c) in &other.terms {
            p.add_term(m.clone(), c.clone());
        }
        Ok(p)
    }

    pub fn sub(&self, other: &Self) -> Result<Self, PolyError> {
        self.add(&other.neg())
    }

    pub fn neg(&self) -> Self {
        self.scale(&-Rational::one())
    }

    pub fn scale(&self, factor: &Rational) -> Self {
        let mut p = Self::zero(self.nvars, self.degree_bound);
        if factor.is_zero() {
            return p;
        }
        p.terms = self
            .terms
            .iter()
            .map(|(m, c)| (m.clone(), c * factor))
            .collect();
        p
    }

    pub fn mul(&self, other: &Self) -> Result<Self, PolyError> {
        let bound = self.compatible(other)?;
        let mut acc: BTreeMap<Monomial, Rational> = BTreeMap::new();
        for (ma, ca) in &self.terms {
            let da = total_degree(ma);
            for (mb, cb) in &other.terms {
                if da + total_degree(mb) > bound {
                    continue;
                }
                let m: Monomial = ma.iter().zip(mb).map(|(x, y)| x + y).collect();
                *acc.entry(m).or_insert_with(Rational::zero) += ca * cb;
            }
        }
        acc.retain(|_, c| !c.is_zero());
        Ok(Self {
            nvars: self.nvars,
            degree_bound: bound,
            terms: acc,
        })
    }

    pub fn pow(&self, exp: u32) -> Self {
        let mut result = Self::one(self.nvars, self.degree_bound);
        for _ in 0..exp {
            result = result.mul(self).expect("same variable count");
            if result.is_zero() {
                break;
            }
        }
        result
    }

    /// `sum_k p^k / k!`, for `p` without constant term.
    pub fn exp_series(&self) -> Result<Self, PolyError> {
        if !self.constant_term().is_zero() {
            return Err(PolyError::NonzeroConstantTerm);
        }
        let mut total = Self::one(self.nvars, self.degree_bound);
        let mut power = total.clone();
        for k in 1..=self.degree_bound {
            power = power
                .mul(self)?
                .scale(&Rational::new(BigInt::one(), BigInt::from(k)));
            if power.is_zero() {
                break;
            }
            total = total.add(&power)?;
        }
        Ok(total)
    }

    /// `1/p` as a truncated series: `(1/c0) sum_k (-q)^k` with `p = c0 (1 + q)`.
    pub fn inverse_series(&self) -> Result<Self, PolyError> {
        let c0 = self.constant_term();
        if c0.is_zero() {
            return Err(PolyError::ZeroConstantTerm);
        }
        let inv_c0 = Rational::one() / &c0;
        let minus_q = self
            .scale(&inv_c0)
            .sub(&Self::one(self.nvars, self.degree_bound))?
            .neg();
        let mut total = Self::one(self.nvars, self.degree_bound);
        let mut power = total.clone();
        for _ in 1..=self.degree_bound {
            power = power.mul(&minus_q)?;
            if power.is_zero() {
                break;
            }
            total = total.add(&power)?;
        }
        Ok(total.scale(&inv_c0))
    }

    pub fn homogeneous_part(&self, degree: u32) -> Self {
        let mut p = Self::zero(self.nvars, self.degree_bound);
        p.terms = self
            .terms
            .iter()
            .filter(|(m, _)| total_degree(m) == degree)
            .map(|(m, c)| (m.clone(), c.clone()))
            .collect();
        p
    }

    /// Agreement of all homogeneous parts of degree below `degree`.
    pub fn congruent_mod_degree(&self, other: &Self, degree: u32) -> Result<bool, PolyError> {
        let diff = self.sub(other)?;
        Ok(diff.terms.keys().all(|m| total_degree(m) >= degree))
    }

    pub fn evaluate(&self, point: &[Rational]) -> Result<Rational, PolyError> {
        if point.len() != self.nvars {
            return Err(PolyError::DimensionMismatch(self.nvars, point.len()));
        }
        let mut total = Rational::zero();
        for (m, c) in &self.terms {
            let mut term = c.clone();
            for (x, &e) in point.iter().zip(m) {
                if e > 0 {
                    term *= num_traits::pow(x.clone(), e as usize);
                }
            }
            total += term;
        }
        Ok(total)
    }

    pub fn evaluate_integers(&self, point: &[i64]) -> Result<Rational, PolyError> {
        let point: Vec<Rational> = point
            .iter()
            .map(|&x| Rational::from_integer(BigInt::from(x)))
            .collect();
        self.evaluate(&point)
    }
}

/// `<K, h>` as a linear polynomial, where `h` is represented by its Poincare
/// dual `H` so that `<K, h> = K^T G H`.
pub fn linear_form(
    k: &CohomologyClass,
    form: &IntersectionForm,
    degree_bound: u32,
) -> Result<TruncatedPolynomial, PolyError> {
    let row = form.dual_row(k)?;
    let n = form.rank();
    Ok(TruncatedPolynomial::from_terms(
        n,
        degree_bound,
        row.iter().enumerate().map(|(i, &c)| {
            let mut m = vec![0; n];
            m[i] = 1;
            (m, Rational::from_integer(BigInt::from(c)))
        }),
    ))
}

/// `Q(h, h) = H^T G H`.
pub fn quadratic_form(form: &IntersectionForm, degree_bound: u32) -> TruncatedPolynomial {
    let n = form.rank();
    let mut terms = Vec::new();
    for (i, row) in form.gram().iter().enumerate() {
        for (j, &g) in row.iter().enumerate() {
            if g == 0 {
                continue;
            }
            let mut m = vec![0; n];
            m[i] += 1;
            m[j] += 1;
            terms.push((m, Rational::from_integer(BigInt::from(g))));
        }
    }
    TruncatedPolynomial::from_terms(n, degree_bound, terms)
}

fn fmt_rational(r: &Rational) -> String {
    if r.denom().is_one() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

impl fmt::Display for TruncatedPolynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        for (idx, (m, c)) in self.terms.iter().enumerate() {
            let monomial: Vec<String> = m
                .iter()
                .enumerate()
                .filter(|(_, &e)| e > 0)
                .map(|(i, &e)| {
                    if e == 1 {
                        format!("h{}", i + 1)
                    } else {
                        format!("h{}^{}", i + 1, e)
                    }
                })
                .collect();
            let magnitude = c.abs();
            let sign = if c.is_negative() { "-" } else { "+" };
            if idx == 0 {
                if c.is_negative() {
                    write!(f, "-")?;
                }
            } else {
                write!(f, " {sign} ")?;
            }
            if monomial.is_empty() {
                write!(f, "{}", fmt_rational(&magnitude))?;
            } else if magnitude.is_one() {
                write!(f, "{}", monomial.join("*"))?;
            } else {
                write!(f, "{}*{}", fmt_rational(&magnitude), monomial.join("*"))?;
            }
        }
        Ok(())
    }
}
