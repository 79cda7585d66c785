//! Donaldson invariants from Seiberg-Witten data through the first level of
//! the Uhlenbeck stratification, and the comparison with Witten's formula
//! modulo `h^{c+2}`.
//!
//! Polynomials in `h` use the convention of [`crate::polyring::linear_form`]:
//! `h` is represented by its Poincare dual, one variable per lattice
//! coordinate.

use std::fmt;

use num_bigint::BigInt;
use num_traits::One;
use serde::Serialize;
use thiserror::Error;

use crate::combinatorics::{jacobi_at_zero, JacobiParams, Rational};
use crate::lattice::{
    find_hyperbolic_pair, lambda_candidates, CohomologyClass, LatticeError, SearchConfig,
};
use crate::manifold::{sign_of, FourManifoldData, ManifoldError};
use crate::pairings::{
    closed_bracket, pow2, q, HContext, LevelOneCoefficients, PairingError, Slot,
};
use crate::polyring::{linear_form, quadratic_form, PolyError, TruncatedPolynomial};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum WittenError {
    #[error("sign exponent {what} = {value}/2 is not an integer")]
    NonIntegralSign { what: &'static str, value: i64 },
    #[error("exponent {what} = {value}/4 is not an integer")]
    NonIntegralExponent { what: &'static str, value: i64 },
    #[error("hypothesis violated: {0}")]
    HypothesisViolated(String),
    #[error("degree {bound} is beyond the level-one range (at most {max})")]
    BoundTooHigh { bound: i64, max: i64 },
    #[error("m = {m} exceeds delta/2 for delta = {delta}")]
    MTooLarge { delta: u32, m: u32 },
    #[error("w and w' are not congruent mod 2")]
    NotCongruent,
    #[error(transparent)]
    Manifold(#[from] ManifoldError),
    #[error(transparent)]
    Lattice(#[from] LatticeError),
    #[error(transparent)]
    Poly(#[from] PolyError),
    #[error(transparent)]
    Pairing(#[from] PairingError),
}

fn half(what: &'static str, value: i64) -> Result<i64, WittenError> {
    if value % 2 != 0 {
        return Err(WittenError::NonIntegralSign { what, value });
    }
    Ok(value / 2)
}

fn quarter(what: &'static str, value: i64) -> Result<i64, WittenError> {
    if value % 4 != 0 {
        return Err(WittenError::NonIntegralExponent { what, value });
    }
    Ok(value / 4)
}

fn violated(msg: impl Into<String>) -> WittenError {
    WittenError::HypothesisViolated(msg.into())
}

fn factorial(n: u32) -> BigInt {
    (1..=n).fold(BigInt::one(), |acc, k| acc * k)
}

fn degree_of(delta: u32, m: u32) -> Result<u32, WittenError> {
    delta
        .checked_sub(2 * m)
        .ok_or(WittenError::MTooLarge { delta, m })
}

/// `(-1)^{(v^2 + c1 . v)/2} SW(s)` for every basic class with nonzero
/// invariant.
fn signed_invariants(
    x: &FourManifoldData,
    v: &CohomologyClass,
) -> Result<Vec<(CohomologyClass, i64)>, WittenError> {
    let v2 = x.form.square(v)?;
    x.basic_classes
        .iter()
        .filter(|s| s.sw != 0)
        .map(|s| {
            let e = half("(v^2 + c1.v)", v2 + x.form.pair(&s.c1, v)?)?;
            Ok((s.c1.clone(), sign_of(e) * s.sw))
        })
        .collect()
}

/// `sum_s (-1)^{(w^2 + c1(s) . w)/2} SW(s) exp(<c1(s), h>)`, truncated above
/// `degree_bound`.
pub fn sw_series(
    x: &FourManifoldData,
    w: &CohomologyClass,
    degree_bound: u32,
) -> Result<TruncatedPolynomial, WittenError> {
    let mut total = TruncatedPolynomial::zero(x.rank(), degree_bound);
    for (c1, weight) in signed_invariants(x, w)? {
        let lin = linear_form(&c1, &x.form, degree_bound)?;
        total = total.add(&lin.exp_series()?.scale(&q(weight)))?;
    }
    Ok(total)
}

/// `sum_s (-1)^{(v^2 + c1(s) . v)/2} SW(s) <c1(s), h>^d`.
pub fn sw_power_sum(
    x: &FourManifoldData,
    v: &CohomologyClass,
    d: u32,
) -> Result<TruncatedPolynomial, WittenError> {
    let mut total = TruncatedPolynomial::zero(x.rank(), d);
    for (c1, weight) in signed_invariants(x, v)? {
        let lin = linear_form(&c1, &x.form, d)?;
        total = total.add(&lin.pow(d).scale(&q(weight)))?;
    }
    Ok(total)
}

/// Whether [`sw_power_sum`] vanishes identically. For characteristic `v`
/// this is expected when `d < c(X) - 2` or `d` and `c(X)` have opposite
/// parity; the actual answer is returned either way.
pub fn sw_vanishing_check(
    x: &FourManifoldData,
    v: &CohomologyClass,
    d: u32,
) -> Result<bool, WittenError> {
    Ok(sw_power_sum(x, v, d)?.is_zero())
}

fn require_characteristic_difference(
    x: &FourManifoldData,
    w: &CohomologyClass,
    lambda: &CohomologyClass,
) -> Result<(), WittenError> {
    if !x.form.is_characteristic(&(w - lambda))? {
        return Err(violated("w−Λ not characteristic"));
    }
    Ok(())
}

fn is_simple_type(x: &FourManifoldData) -> Result<bool, WittenError> {
    for s in x.basic_classes.iter().filter(|s| s.sw != 0) {
        if x.form.square(&s.c1)? != x.c1_squared() {
            return Ok(false);
        }
    }
    Ok(true)
}

fn orthogonal_to_basic_classes(
    x: &FourManifoldData,
    lambda: &CohomologyClass,
) -> Result<bool, WittenError> {
    for s in x.basic_classes.iter().filter(|s| s.sw != 0) {
        if x.form.pair(&s.c1, lambda)? != 0 {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Simple type, `Λ ∈ B⊥` and `Λ² = 4 − (χ+σ)`.
fn require_low_degree_setting(
    x: &FourManifoldData,
    lambda: &CohomologyClass,
) -> Result<(), WittenError> {
    if !is_simple_type(x)? {
        return Err(violated("not of Seiberg-Witten simple type"));
    }
    if !orthogonal_to_basic_classes(x, lambda)? {
        return Err(violated("Λ ∉ B⊥"));
    }
    let target = 4 - x.chi_plus_sigma();
    let sq = x.form.square(lambda)?;
    if sq != target {
        return Err(violated(format!("Λ² = {sq} but 4−(χ+σ) = {target}")));
    }
    Ok(())
}

/// `D^w(h^{delta-2m} x^m)` at `delta = r(Λ) + 4`, the first level above the
/// reducible range.
///
/// Classes with `r(Λ, c1(s)) = delta` contribute through `P^{a-1,b}`, classes
/// with `r(Λ, c1(s)) = delta - 4` through the level-one bracket. In the
/// bracket the cross term `2 (c1(s) - Λ) . Λ` and the `<Λ, h>` term carry the
/// shifted weight `P^{a-1,b+1}`; everything else carries `P^{a,b}`.
///
/// Returns zero when the degree fails the mod-8 condition.
pub fn donaldson_moment(
    x: &FourManifoldData,
    w: &CohomologyClass,
    lambda: &CohomologyClass,
    delta: u32,
    m: u32,
) -> Result<TruncatedPolynomial, WittenError> {
    let n = degree_of(delta, m)?;
    let rank = x.rank();
    if !x.degree_parity_ok(w, 2 * i64::from(delta))? {
        return Ok(TruncatedPolynomial::zero(rank, n));
    }
    let ri = x.r_and_i(lambda)?;
    let delta_i = i64::from(delta);
    if delta_i != ri.r + 4 {
        return Err(violated(format!(
            "δ = {delta} but r(Λ)+4 = {}",
            ri.r + 4
        )));
    }
    if delta_i >= ri.i {
        return Err(violated(format!("δ = {delta} is not below i(Λ) = {}", ri.i)));
    }
    require_characteristic_difference(x, w, lambda)?;

    let exponent = quarter("1 - i/4 - 3 delta/4", 4 - ri.i - 3 * delta_i)?;
    let w2 = x.form.square(w)?;
    let overall = sign_of(i64::from(m) + half("(sigma - w^2)", x.sigma - w2)?);
    let a_base = quarter("(i - delta)/4", ri.i - delta_i)?;
    let b_base = -x.chi_h()?;
    let w_minus_lambda = w - lambda;

    let ctx = HContext::new(&x.form, n);
    let mut total = TruncatedPolynomial::zero(rank, n);
    for (s, &r_s) in x.basic_classes.iter().zip(&ri.per_class) {
        if s.sw == 0 || (r_s != delta_i && r_s != delta_i - 4) {
            continue;
        }
        let d_s = x.dim_sw(s)?;
        if d_s % 2 != 0 {
            return Err(violated(format!("d_s = {d_s} is odd")));
        }
        let d = d_s / 2;
        let e = half(
            "(w^2 + c1.(w - Lambda))",
            w2 + x.form.pair(&s.c1, &w_minus_lambda)?,
        )?;
        let weight = q(sign_of(e) * s.sw) * q(BigInt::from(-2).pow(d as u32));
        let xi = &s.c1 - lambda;
        let b = ctx.pairing(&xi, &Slot::H)?;
        let poly = if r_s == delta_i {
            let params = JacobiParams::new(a_base - d - 1, b_base - d, d as u32);
            b.pow(n).scale(&jacobi_at_zero(params))
        } else {
            let params = JacobiParams::new(a_base - d, b_base - d, d as u32);
            let nn = i64::from(n);
            let coeffs = LevelOneCoefficients {
                d: d as u32,
                params,
                p: jacobi_at_zero(params),
                p_shift: jacobi_at_zero(params.shifted()),
                a0_main: 3 * x.form.square(&xi)? + x.c1_squared() + 4 * delta_i
                    - 12 * i64::from(m),
                a0_cross: 2 * x.form.pair(&xi, lambda)?,
                a1: 2 * nn * (nn - 1),
                n,
            };
            closed_bracket(&ctx, &xi, lambda, &coeffs, n, 0)?
        };
        total = total.add(&poly.scale(&weight))?;
    }
    Ok(total.scale(&(q(overall) * pow2(exponent))))
}

/// `D^w(h^{c-4-2m} x^m) = 2^{2-c} (-1)^{m+1} sum_s (-1)^{(w^2+c1.w)/2} SW(s)
/// <c1(s) - Λ, h>^{c-4-2m}`, valid at `delta = r(Λ) = c - 4` for simple type
/// and `Λ ∈ B⊥` with `Λ² = 4 − (χ+σ)`.
pub fn low_degree_invariant(
    x: &FourManifoldData,
    w: &CohomologyClass,
    lambda: &CohomologyClass,
    delta: u32,
    m: u32,
) -> Result<TruncatedPolynomial, WittenError> {
    let n = degree_of(delta, m)?;
    require_low_degree_setting(x, lambda)?;
    require_characteristic_difference(x, w, lambda)?;
    let c = x.c_of_x()?;
    if i64::from(delta) != c - 4 {
        return Err(violated(format!("δ = {delta} but c(X)−4 = {}", c - 4)));
    }
    let ctx = HContext::new(&x.form, n);
    let mut total = TruncatedPolynomial::zero(x.rank(), n);
    for (c1, weight) in signed_invariants(x, w)? {
        let b = ctx.pairing(&(&c1 - lambda), &Slot::H)?;
        total = total.add(&b.pow(n).scale(&q(weight)))?;
    }
    Ok(total.scale(&(q(sign_of(i64::from(m) + 1)) * pow2(2 - c))))
}

/// `D^w(h^{delta-2m} x^m)` wherever it is known through level one: zero by
/// the mod-8 condition or below `r(Λ)`, the reducible formula at `r(Λ)`, and
/// [`donaldson_moment`] at `r(Λ) + 4`. Anything higher needs level-two data
/// and is refused.
pub fn donaldson_invariant(
    x: &FourManifoldData,
    w: &CohomologyClass,
    lambda: &CohomologyClass,
    delta: u32,
    m: u32,
) -> Result<TruncatedPolynomial, WittenError> {
    let n = degree_of(delta, m)?;
    if !x.degree_parity_ok(w, 2 * i64::from(delta))? {
        return Ok(TruncatedPolynomial::zero(x.rank(), n));
    }
    let r = x.r_and_i(lambda)?.r;
    let delta_i = i64::from(delta);
    match delta_i - r {
        diff if diff < 0 => Ok(TruncatedPolynomial::zero(x.rank(), n)),
        0 => low_degree_invariant(x, w, lambda, delta, m),
        4 => donaldson_moment(x, w, lambda, delta, m),
        diff if diff > 4 => Err(WittenError::BoundTooHigh {
            bound: delta_i,
            max: r + 4,
        }),
        _ => Err(violated(format!(
            "δ = {delta} lies strictly between r(Λ) = {r} and r(Λ)+4"
        ))),
    }
}

/// `D^w((1 + x/2) e^h)` through degree `max_degree`, which may be at most
/// `c(X) + 1`. The degree-`e` part is `D(h^e)/e! + D(h^e x)/(2 e!)`.
pub fn assemble_donaldson_series(
    x: &FourManifoldData,
    w: &CohomologyClass,
    lambda: &CohomologyClass,
    max_degree: u32,
) -> Result<TruncatedPolynomial, WittenError> {
    let c = x.c_of_x()?;
    if i64::from(max_degree) > c + 1 {
        return Err(WittenError::BoundTooHigh {
            bound: i64::from(max_degree),
            max: c + 1,
        });
    }
    let mut total = TruncatedPolynomial::zero(x.rank(), max_degree);
    for e in 0..=max_degree {
        let inv_fact = Rational::new(BigInt::one(), factorial(e));
        let plain = donaldson_invariant(x, w, lambda, e, 0)?;
        let point = donaldson_invariant(x, w, lambda, e + 2, 1)?;
        let part = plain
            .scale(&inv_fact)
            .add(&point.scale(&(inv_fact.clone() / q(2))))?;
        total = total.add(&part.with_bound(max_degree))?;
    }
    Ok(total)
}

/// `2^{2-c} e^{Q/2} SW^w` through degree `max_degree`.
pub fn predicted_series(
    x: &FourManifoldData,
    w: &CohomologyClass,
    max_degree: u32,
) -> Result<TruncatedPolynomial, WittenError> {
    let c = x.c_of_x()?;
    let half_q = quadratic_form(&x.form, max_degree).scale(&Rational::new(1.into(), 2.into()));
    let series = half_q.exp_series()?.mul(&sw_series(x, w, max_degree)?)?;
    Ok(series.scale(&pow2(2 - c)))
}

/// `Λ` and `w` built from a hyperbolic pair in `B⊥`: `Λ = e1 + (2 − 2t) e2`
/// with `t = (χ+σ)/4`, so `Λ² = 4 − (χ+σ)`, and `w = Λ + v` where `v` is
/// the first basic class when it is characteristic and a characteristic
/// vector of the form otherwise.
pub fn default_lambda_and_w(
    x: &FourManifoldData,
) -> Result<(CohomologyClass, CohomologyClass), WittenError> {
    let nonzero: Vec<CohomologyClass> = x
        .basic_classes
        .iter()
        .filter(|s| s.sw != 0 && !s.c1.is_zero())
        .map(|s| s.c1.clone())
        .collect();
    let perp = if nonzero.is_empty() {
        (0..x.rank())
            .map(|i| CohomologyClass::unit(x.rank(), i))
            .collect()
    } else {
        x.form.orthogonal_complement(&nonzero)?
    };
    let pair = find_hyperbolic_pair(&x.form, &perp, SearchConfig::default())?;
    let (_, lambda) = lambda_candidates(&pair, x.chi, x.sigma)?;
    let v = match x.basic_classes.first() {
        Some(s) if x.form.is_characteristic(&s.c1)? => s.c1.clone(),
        _ => x.form.characteristic_vector()?,
    };
    let w = &lambda + &v;
    Ok((lambda, w))
}

/// Polynomials with many terms are summarized by their size in reports.
const RENDER_LIMIT: usize = 12;

fn render(poly: &TruncatedPolynomial) -> String {
    let count = poly.terms().count();
    if count <= RENDER_LIMIT {
        poly.to_string()
    } else {
        format!("[{count} terms]")
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct DegreeRow {
    pub degree: u32,
    pub donaldson: String,
    pub predicted: String,
    pub equal: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Check {
    pub id: String,
    pub pass: bool,
    pub detail: String,
}

impl fmt::Display for Check {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let verdict = if self.pass { "PASS" } else { "FAIL" };
        write!(f, "CHECK {} {} {}", self.id, verdict, self.detail)
    }
}

/// One degree of the Seiberg-Witten vanishing ledger, taken with the
/// characteristic class `v = w − Λ`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct VanishingEntry {
    pub degree: u32,
    pub expected: bool,
    pub vanishes: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct WittenReport {
    pub name: String,
    pub w: CohomologyClass,
    pub lambda: CohomologyClass,
    pub c: i64,
    pub table: Vec<DegreeRow>,
    pub vanishes_below_c_minus_2: bool,
    pub agrees_below_c_plus_2: bool,
    pub checks: Vec<Check>,
    pub vanishing: Vec<VanishingEntry>,
    /// A hyperbolic pair was found in `B⊥` by the bounded search.
    pub hyperbolic_pair_found: bool,
}

impl WittenReport {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.pass)
    }
}

/// Compares the assembled Donaldson series with `2^{2-c} e^{Q/2} SW^w`
/// degree by degree below `c + 2`.
pub fn verify_witten(
    x: &FourManifoldData,
    w: &CohomologyClass,
    lambda: &CohomologyClass,
) -> Result<WittenReport, WittenError> {
    let b_plus = x.form.b_plus();
    if b_plus.is_multiple_of(2) || b_plus < 3 {
        return Err(violated("b2+ must be odd ≥ 3"));
    }
    require_low_degree_setting(x, lambda)?;
    require_characteristic_difference(x, w, lambda)?;
    let c = x.c_of_x()?;
    if c < 0 {
        return Err(violated(format!("c(X) = {c} is negative")));
    }
    let top = (c + 1) as u32;

    let donaldson = assemble_donaldson_series(x, w, lambda, top)?;
    let predicted = predicted_series(x, w, top)?;
    let table: Vec<DegreeRow> = (0..=top)
        .map(|e| {
            let d = donaldson.homogeneous_part(e);
            let p = predicted.homogeneous_part(e);
            DegreeRow {
                degree: e,
                equal: d == p,
                donaldson: render(&d),
                predicted: render(&p),
            }
        })
        .collect();
    let low = (0..top)
        .filter(|&e| i64::from(e) < c - 2)
        .all(|e| donaldson.homogeneous_part(e).is_zero() && predicted.homogeneous_part(e).is_zero());
    let all_equal = table.iter().all(|r| r.equal);

    let mut checks = vec![
        Check {
            id: "vanishing-below-c-2".into(),
            pass: low,
            detail: format!("both series vanish in degrees < {}", c - 2),
        },
        Check {
            id: "congruence-mod-c+2".into(),
            pass: all_equal,
            detail: format!(
                "degrees 0..={top} equal: {}",
                table.iter().filter(|r| r.equal).count()
            ),
        },
    ];
    checks.extend(coefficient_checks(x, w, lambda, c)?);
    checks.push(sw_parity_check(x, w, top)?);

    let v = w - lambda;
    let mut vanishing = Vec::new();
    for d in 0..=top {
        let di = i64::from(d);
        let expected = di < c - 2 || (di - c) % 2 != 0;
        vanishing.push(VanishingEntry {
            degree: d,
            expected,
            vanishes: sw_vanishing_check(x, &v, d)?,
        });
    }
    let ledger_ok = vanishing.iter().all(|e| !e.expected || e.vanishes);
    checks.push(Check {
        id: "sw-vanishing-ledger".into(),
        pass: ledger_ok,
        detail: format!(
            "expected vanishing degrees: {:?}",
            vanishing
                .iter()
                .filter(|e| e.expected)
                .map(|e| e.degree)
                .collect::<Vec<_>>()
        ),
    });

    let nonzero: Vec<CohomologyClass> = x
        .basic_classes
        .iter()
        .filter(|s| s.sw != 0 && !s.c1.is_zero())
        .map(|s| s.c1.clone())
        .collect();
    let perp = if nonzero.is_empty() {
        (0..x.rank())
            .map(|i| CohomologyClass::unit(x.rank(), i))
            .collect()
    } else {
        x.form.orthogonal_complement(&nonzero)?
    };
    let hyperbolic_pair_found =
        find_hyperbolic_pair(&x.form, &perp, SearchConfig::default()).is_ok();

    Ok(WittenReport {
        name: x.name.clone(),
        w: w.clone(),
        lambda: lambda.clone(),
        c,
        table,
        vanishes_below_c_minus_2: low,
        agrees_below_c_plus_2: all_equal,
        checks,
        vanishing,
        hyperbolic_pair_found,
    })
}

/// `D(h^{c-2} x)` and `D(h^c)` against their closed forms in terms of the
/// basic classes alone.
fn coefficient_checks(
    x: &FourManifoldData,
    w: &CohomologyClass,
    lambda: &CohomologyClass,
    c: i64,
) -> Result<Vec<Check>, WittenError> {
    if c < 2 {
        return Ok(vec![Check {
            id: "d-invar".into(),
            pass: true,
            detail: format!("not applicable for c = {c}"),
        }]);
    }
    let cu = c as u32;
    let point = donaldson_invariant(x, w, lambda, cu, 1)?;
    let point_expected = sw_power_sum(x, w, cu - 2)?.scale(&pow2(3 - c));

    let top = donaldson_invariant(x, w, lambda, cu, 0)?;
    let binom = q(c * (c - 1) / 2);
    let quad = quadratic_form(&x.form, cu);
    let lower = sw_power_sum(x, w, cu - 2)?.with_bound(cu).mul(&quad)?;
    let top_expected = sw_power_sum(x, w, cu)?
        .add(&lower.scale(&binom))?
        .scale(&pow2(2 - c));

    Ok(vec![
        Check {
            id: "d-invar-point".into(),
            pass: point == point_expected,
            detail: format!("D(h^{}x) = {}", c - 2, render(&point)),
        },
        Check {
            id: "d-invar".into(),
            pass: top == top_expected,
            detail: format!("D(h^{c}) = {}", render(&top)),
        },
    ])
}

/// The SW series is even exactly when `-w² - 3(χ+σ)/4` is even.
fn sw_parity_check(
    x: &FourManifoldData,
    w: &CohomologyClass,
    top: u32,
) -> Result<Check, WittenError> {
    let series = sw_series(x, w, top)?;
    let parity = (-x.form.square(w)? - 3 * x.chi_h()?).rem_euclid(2) as u32;
    let pass = (0..=top)
        .filter(|e| e % 2 != parity)
        .all(|e| series.homogeneous_part(e).is_zero());
    let kind = if parity == 0 { "even" } else { "odd" };
    Ok(Check {
        id: "sw-parity".into(),
        pass,
        detail: format!("series is {kind}"),
    })
}

/// `D^{w'} = (-1)^{(w' - w)^2/4} D^w` through degree `max_degree`, with
/// both series assembled from scratch.
pub fn sign_change_check(
    x: &FourManifoldData,
    w: &CohomologyClass,
    w_prime: &CohomologyClass,
    lambda: &CohomologyClass,
    max_degree: u32,
) -> Result<bool, WittenError> {
    let diff = w_prime - w;
    if diff.coords().iter().any(|c| c % 2 != 0) {
        return Err(WittenError::NotCongruent);
    }
    let exponent = quarter("(w' - w)^2/4", x.form.square(&diff)?)?;
    let base = assemble_donaldson_series(x, w, lambda, max_degree)?;
    let moved = assemble_donaldson_series(x, w_prime, lambda, max_degree)?;
    Ok(moved == base.scale(&q(sign_of(exponent))))
}
