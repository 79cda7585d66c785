//! Exact combinatorial kernel.
//!
//! Rising factorials, binomial coefficients with arbitrary integer upper
//! index, values of Jacobi polynomials, terminating Gauss hypergeometric
//! sums, and the triple binomial sum that collapses to a Jacobi value.
//!
//! Every function here is exact. Hot loops run on `i128` with checked
//! arithmetic and fall back to `BigInt` on overflow, so results never
//! depend on the size of the inputs.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};
use thiserror::Error;

/// Arbitrary-precision rational, always in lowest terms with positive denominator.
pub type Rational = BigRational;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CombinatoricsError {
    #[error("rising factorial ({c})_{u} vanishes in the denominator of a nonzero term")]
    DivisionByZeroPochhammer { c: i64, u: u32 },
}

/// Parameters `(a, b, d)` of a Jacobi polynomial `P^{a,b}_d`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct JacobiParams {
    pub a: i64,
    pub b: i64,
    pub d: u32,
}

impl JacobiParams {
    pub fn new(a: i64, b: i64, d: u32) -> Self {
        Self { a, b, d }
    }

    /// The shifted parameters `(a - 1, b + 1, d)`.
    pub fn shifted(self) -> Self {
        Self {
            a: self.a - 1,
            b: self.b + 1,
            d: self.d,
        }
    }
}

mod small {
    pub(super) fn pochhammer(r: i64, ell: u32) -> Option<i128> {
        let mut acc: i128 = 1;
        for k in 0..i128::from(ell) {
            let factor = i128::from(r) + k;
            if factor == 0 {
                return Some(0);
            }
            acc = acc.checked_mul(factor)?;
        }
        Some(acc)
    }

    /// `acc` holds `binom(r, k)` after `k` steps, so each division is exact.
    pub(super) fn binomial(r: i64, ell: i64) -> Option<i128> {
        if ell < 0 {
            return Some(0);
        }
        let mut acc: i128 = 1;
        for k in 0..i128::from(ell) {
            acc = acc.checked_mul(i128::from(r) - k)? / (k + 1);
            if acc == 0 {
                return Some(0);
            }
        }
        Some(acc)
    }

    pub(super) fn triple_sum(a: i64, m: i64, n: i64, d: u32, v: i64) -> Option<i128> {
        let d_i = i64::from(d);
        let mut total: i128 = 0;
        for i in 0..=d_i {
            let bi = binomial(a - v, i)?;
            if bi == 0 {
                continue;
            }
            for j in 0..=(d_i - i) {
                let bj = binomial(d_i + 3 - v - i - j, d_i - i - j)?;
                if bj == 0 {
                    continue;
                }
                let sign: i128 = if (i + j) % 2 == 0 { 1 } else { -1 };
                for k in 0..=j {
                    let bk = binomial(m, k)?.checked_mul(binomial(n, j - k)?)?;
                    if bk == 0 {
                        continue;
                    }
                    let pow = 1i128.checked_shl(u32::try_from(d_i - j + k).ok()?)?;
                    let term = sign
                        .checked_mul(pow)?
                        .checked_mul(bi)?
                        .checked_mul(bj)?
                        .checked_mul(bk)?;
                    total = total.checked_add(term)?;
                }
            }
        }
        Some(total)
    }

    pub(super) fn jacobi_numerator(a: i64, b: i64, d: u32) -> Option<i128> {
        let d_i = i64::from(d);
        let mut total: i128 = 0;
        for v in 0..=d_i {
            let term = binomial(d_i + a, v)?.checked_mul(binomial(d_i + b, d_i - v)?)?;
            total = if (d_i - v) % 2 == 0 {
                total.checked_add(term)?
            } else {
                total.checked_sub(term)?
            };
        }
        Some(total)
    }
}

mod big {
    use num_bigint::BigInt;
    use num_traits::{One, Zero};

    pub(super) fn pochhammer(r: i64, ell: u32) -> BigInt {
        let mut acc = BigInt::one();
        for k in 0..i64::from(ell) {
            acc *= BigInt::from(r) + k;
            if acc.is_zero() {
                break;
            }
        }
        acc
    }

    pub(super) fn binomial(r: i64, ell: i64) -> BigInt {
        if ell < 0 {
            return BigInt::zero();
        }
        let mut acc = BigInt::one();
        for k in 0..ell {
            acc = acc * (BigInt::from(r) - k) / (k + 1);
            if acc.is_zero() {
                break;
            }
        }
        acc
    }

    pub(super) fn triple_sum(a: i64, m: i64, n: i64, d: u32, v: i64) -> BigInt {
        let d_i = i64::from(d);
        let mut total = BigInt::zero();
        for i in 0..=d_i {
            for j in 0..=(d_i - i) {
                for k in 0..=j {
                    let mut term = BigInt::one() << (d_i - j + k) as usize;
                    term *= binomial(a - v, i);
                    term *= binomial(d_i + 3 - v - i - j, d_i - i - j);
                    term *= binomial(m, k);
                    term *= binomial(n, j - k);
                    if (i + j) % 2 == 0 {
                        total += term;
                    } else {
                        total -= term;
                    }
                }
            }
        }
        total
    }

    pub(super) fn jacobi_numerator(a: i64, b: i64, d: u32) -> BigInt {
        let d_i = i64::from(d);
        let mut total = BigInt::zero();
        for v in 0..=d_i {
            let term = binomial(d_i + a, v) * binomial(d_i + b, d_i - v);
            if (d_i - v) % 2 == 0 {
                total += term;
            } else {
                total -= term;
            }
        }
        total
    }
}

fn pow2(exp: u32) -> BigInt {
    BigInt::one() << exp as usize
}

/// Rising factorial `(r)_ell = r (r + 1) ... (r + ell - 1)`, with `(r)_0 = 1`.
pub fn pochhammer(r: i64, ell: u32) -> BigInt {
    small::pochhammer(r, ell)
        .map(BigInt::from)
        .unwrap_or_else(|| big::pochhammer(r, ell))
}

/// Binomial coefficient `binom(r, ell) = (-1)^ell (-r)_ell / ell!` for any
/// integer `r`; zero whenever `ell < 0`.
pub fn ext_binomial(r: i64, ell: i64) -> BigInt {
    small::binomial(r, ell)
        .map(BigInt::from)
        .unwrap_or_else(|| big::binomial(r, ell))
}

/// `P^{a,b}_d(0)`.
pub fn jacobi_at_zero(p: JacobiParams) -> Rational {
    if p.d == 0 {
        return Rational::one();
    }
    let numerator = small::jacobi_numerator(p.a, p.b, p.d)
        .map(BigInt::from)
        .unwrap_or_else(|| big::jacobi_numerator(p.a, p.b, p.d));
    Rational::new(numerator, pow2(p.d))
}

/// `P^{a,b}_d(zeta)` from its defining binomial sum.
pub fn jacobi_general(p: JacobiParams, zeta: &Rational) -> Rational {
    let d = i64::from(p.d);
    let minus = zeta - Rational::one();
    let plus = zeta + Rational::one();
    let mut total = Rational::zero();
    for v in 0..=d {
        let coeff = ext_binomial(d + p.a, v) * ext_binomial(d + p.b, d - v);
        if coeff.is_zero() {
            continue;
        }
        let term = Rational::from_integer(coeff)
            * num_traits::pow(minus.clone(), (d - v) as usize)
            * num_traits::pow(plus.clone(), v as usize);
        total += term;
    }
    total / Rational::from_integer(pow2(p.d))
}

/// Terminating `2F1(-d, n; c; z) = sum_{u=0}^{d} (-d)_u (n)_u / ((c)_u u!) z^u`.
pub fn hypergeometric_terminating(
    d: u32,
    n: i64,
    c: i64,
    z: &Rational,
) -> Result<Rational, CombinatoricsError> {
    let mut total = Rational::zero();
    let mut factorial = BigInt::one();
    for u in 0..=d {
        if u > 0 {
            factorial *= u;
        }
        let numerator = pochhammer(-i64::from(d), u) * pochhammer(n, u);
        if numerator.is_zero() {
            continue;
        }
        let denominator = pochhammer(c, u) * &factorial;
        if denominator.is_zero() {
            return Err(CombinatoricsError::DivisionByZeroPochhammer { c, u });
        }
        total += Rational::new(numerator, denominator) * num_traits::pow(z.clone(), u as usize);
    }
    Ok(total)
}

/// `P^{3-N-A-M, A+M-4-d}_d(0)` through the hypergeometric representation
/// `(4-A-M)_d / d! * 2F1(-d, -N; A+M-3-d; 1/2)`.
///
/// This route divides by rising factorials of the parameters and is
/// undefined on degenerate parameter choices; [`jacobi_at_zero`] is the
/// canonical evaluator.
pub fn jacobi_via_hypergeometric(
    a_total: i64,
    m: i64,
    n: i64,
    d: u32,
) -> Result<Rational, CombinatoricsError> {
    let half = Rational::new(BigInt::one(), BigInt::from(2));
    let series = hypergeometric_terminating(d, -n, a_total + m - 3 - i64::from(d), &half)?;
    let factorial: BigInt = (1..=d).map(BigInt::from).product();
    Ok(series * Rational::new(pochhammer(4 - a_total - m, d), factorial))
}

/// The triple sum
/// `sum_{i,j,k} (-1)^{i+j} 2^{d-j+k} binom(A-v,i) binom(d+3-v-i-j, d-i-j) binom(M,k) binom(N,j-k)`
/// over `0 <= i <= d`, `0 <= j <= d-i`, `0 <= k <= j`, evaluated term by term.
pub fn triple_sum_lhs(a_total: i64, m: i64, n: i64, d: u32, v: u8) -> Rational {
    assert!(v <= 3, "v ranges over 0..=3");
    let v = i64::from(v);
    let value = small::triple_sum(a_total, m, n, d, v)
        .map(BigInt::from)
        .unwrap_or_else(|| big::triple_sum(a_total, m, n, d, v));
    Rational::from_integer(value)
}

/// Jacobi parameters that the triple sum collapses onto: `(3-N-A-M, A+M-4-d, d)`.
pub fn triple_sum_jacobi_params(a_total: i64, m: i64, n: i64, d: u32) -> JacobiParams {
    JacobiParams::new(3 - n - a_total - m, a_total + m - 4 - i64::from(d), d)
}

/// Checks the Vandermonde convolution
/// `sum_{j=0}^{p} binom(m,j) binom(n,p-j) = binom(m+n,p)` with extended binomials.
pub fn vandermonde_check(m: i64, n: i64, p: u32) -> bool {
    let p = i64::from(p);
    let lhs: BigInt = (0..=p)
        .map(|j| ext_binomial(m, j) * ext_binomial(n, p - j))
        .sum();
    lhs == ext_binomial(m + n, p)
}
