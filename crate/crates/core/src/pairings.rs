//! Intersection numbers with the link of a level-one Seiberg-Witten stratum.
//!
//! Two independent evaluations are provided. [`link_pairing_raw`] expands
//! the pairing as a double sum over Segre constants and binomials, with the
//! instanton-link pairings substituted term by term. [`link_pairing_closed`]
//! collapses the sums to Jacobi values. Both return a polynomial in the
//! coordinates of `h`, homogeneous of degree `delta - 2m`, together with its
//! value at the supplied class.
//!
//! The cross term `2 (c1(s) - c1(t')) . c1(t')` comes from the same
//! binomial family as the `<c1(t'), h>` term and is weighted by the shifted
//! Jacobi value `P^{a-1,b+1}`, not by `P^{a,b}`. The two weights agree when
//! the Seiberg-Witten moduli space is zero-dimensional.

use num_bigint::BigInt;
use num_traits::{One, Zero};
use thiserror::Error;

use crate::combinatorics::{ext_binomial, jacobi_at_zero, JacobiParams, Rational};
use crate::lattice::{CohomologyClass, IntersectionForm, LatticeError};
use crate::manifold::{
    blow_up_spinc, blow_up_spinu, sign_of, FourManifoldData, ManifoldError, SpincData, SpinuData,
};
use crate::polyring::{PolyError, TruncatedPolynomial};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum PairingError {
    #[error("m = {m} exceeds delta/2 = {half}")]
    MTooLarge { m: u32, half: u32 },
    #[error("degree assumption fails: 2(delta + eta) = {lhs} but dim/S1 - 1 = {rhs}")]
    DegreeAssumption { lhs: i64, rhs: i64 },
    #[error("stratum lies in level {0}, not level one")]
    LevelNotOne(i64),
    #[error("c1(s) is not characteristic")]
    NotCharacteristic,
    #[error("Seiberg-Witten dimension {0} is negative or odd")]
    BadSwDimension(i64),
    #[error("blow-up order k = {k} exceeds delta - 2m = {n}")]
    BlowUpOrderTooLarge { k: u32, n: u32 },
    #[error("P^{{a,b}}_d(0) vanishes for (a, b, d) = ({}, {}, {}); the ratio b0 is undefined", .0.a, .0.b, .0.d)]
    JacobiZeroDivide(JacobiParams),
    #[error(transparent)]
    Manifold(#[from] ManifoldError),
    #[error(transparent)]
    Lattice(#[from] LatticeError),
    #[error(transparent)]
    Poly(#[from] PolyError),
}

pub(crate) fn q(n: impl Into<BigInt>) -> Rational {
    Rational::from_integer(n.into())
}

pub(crate) fn pow2(exp: i64) -> Rational {
    let p = Rational::from_integer(BigInt::one() << exp.unsigned_abs() as usize);
    if exp >= 0 {
        p
    } else {
        Rational::one() / p
    }
}

/// `sum_{k=0}^{p} 2^k binom(-n', k) binom(-n'', p - k)`, the coefficient of
/// `mu^p` in the Segre class of the normal bundle.
pub fn segre_coefficient(n_prime: i64, n_dblprime: i64, p: u32) -> BigInt {
    let p = i64::from(p);
    (0..=p)
        .map(|k| {
            (BigInt::one() << k as usize)
                * ext_binomial(-n_prime, k)
                * ext_binomial(-n_dblprime, p - k)
        })
        .sum()
}

/// The constants `S_j`; the same sum as [`segre_coefficient`].
pub fn s_constants(n_prime: i64, n_dblprime: i64, j: u32) -> BigInt {
    segre_coefficient(n_prime, n_dblprime, j)
}

/// Where a homology argument of a multilinear expression lives.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Slot {
    /// The symbolic class `h`.
    H,
    /// A fixed class, given by its Poincare dual.
    Class(CohomologyClass),
}

/// Polynomials in a symbolic `h` that ranges over the first `nvars`
/// coordinates of the lattice of `form`.
#[derive(Debug, Clone, Copy)]
pub struct HContext<'a> {
    pub form: &'a IntersectionForm,
    pub nvars: usize,
    pub degree_bound: u32,
}

impl<'a> HContext<'a> {
    pub fn new(form: &'a IntersectionForm, degree_bound: u32) -> Self {
        Self {
            form,
            nvars: form.rank(),
            degree_bound,
        }
    }

    pub fn constant(&self, c: Rational) -> TruncatedPolynomial {
        TruncatedPolynomial::constant(self.nvars, self.degree_bound, c)
    }

    /// `<v, slot>`.
    pub fn pairing(
        &self,
        v: &CohomologyClass,
        slot: &Slot,
    ) -> Result<TruncatedPolynomial, PairingError> {
        match slot {
            Slot::Class(c) => Ok(self.constant(q(self.form.pair(v, c)?))),
            Slot::H => {
                let row = self.form.dual_row(v)?;
                let terms = row.iter().take(self.nvars).enumerate().map(|(i, &c)| {
                    let mut m = vec![0; self.nvars];
                    m[i] = 1;
                    (m, q(c))
                });
                Ok(TruncatedPolynomial::from_terms(
                    self.nvars,
                    self.degree_bound,
                    terms,
                ))
            }
        }
    }

    /// `Q(a, b)`.
    pub fn quadratic(&self, a: &Slot, b: &Slot) -> Result<TruncatedPolynomial, PairingError> {
        match (a, b) {
            (Slot::Class(x), slot) | (slot, Slot::Class(x)) => self.pairing(x, slot),
            (Slot::H, Slot::H) => {
                let mut terms = Vec::new();
                for (i, row) in self.form.gram().iter().enumerate().take(self.nvars) {
                    for (j, &g) in row.iter().enumerate().take(self.nvars) {
                        if g != 0 {
                            let mut m = vec![0; self.nvars];
                            m[i] += 1;
                            m[j] += 1;
                            terms.push((m, q(g)));
                        }
                    }
                }
                Ok(TruncatedPolynomial::from_terms(
                    self.nvars,
                    self.degree_bound,
                    terms,
                ))
            }
        }
    }
}

/// Pairings of powers of the instanton-link class with the link of the
/// reducible stratum, for `xi = c1(s) - c1(t')`.
#[derive(Debug, Clone)]
pub struct InstantonLink<'a> {
    pub ctx: HContext<'a>,
    pub xi: CohomologyClass,
    pub c1_squared_x: i64,
}

impl InstantonLink<'_> {
    /// `nu . x`.
    pub fn nu_x(&self) -> Rational {
        q(2)
    }

    /// `nu^2 . PD[slot]` = `-4 <xi, slot>`.
    pub fn nu2(&self, slot: &Slot) -> Result<TruncatedPolynomial, PairingError> {
        Ok(self.ctx.pairing(&self.xi, slot)?.scale(&q(-4)))
    }

    /// `nu^3` = `6 xi^2 + 2 c1^2(X)`.
    pub fn nu3(&self) -> Result<Rational, PairingError> {
        Ok(q(
            6 * self.ctx.form.square(&self.xi)? + 2 * self.c1_squared_x
        ))
    }

    /// `nu . alpha . PD[slot]` = `(nu . x) <alpha, slot>`.
    pub fn nu_alpha(
        &self,
        alpha: &CohomologyClass,
        slot: &Slot,
    ) -> Result<TruncatedPolynomial, PairingError> {
        Ok(self.ctx.pairing(alpha, slot)?.scale(&self.nu_x()))
    }
}

/// Data of one link pairing `#(V(h^{delta-2m} x^m) . W^eta . L_{t',s})`.
#[derive(Debug, Clone)]
pub struct PairingInput<'a> {
    pub manifold: &'a FourManifoldData,
    pub t_prime: SpinuData,
    pub s: SpincData,
    pub delta: u32,
    pub m: u32,
    pub eta: u32,
    pub h: CohomologyClass,
}

/// A pairing as a polynomial in `h` and its value at the input class.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PairingValue {
    pub polynomial: TruncatedPolynomial,
    pub value: Rational,
}

/// The Jacobi parameters and bracket coefficients of a level-one pairing.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LevelOneCoefficients {
    pub d: u32,
    pub params: JacobiParams,
    pub p: Rational,
    pub p_shift: Rational,
    /// `3 xi^2 + c1^2(X) + 4(delta - 2m) - 4m`, weighted by `p`.
    pub a0_main: i64,
    /// `2 xi . c1(t')`, weighted by `p_shift`.
    pub a0_cross: i64,
    pub a1: i64,
    pub n: u32,
}

impl LevelOneCoefficients {
    /// `b0 = 2(delta - 2m) P^{a-1,b+1}/P^{a,b}`.
    pub fn b0(&self) -> Result<Rational, PairingError> {
        if self.p.is_zero() {
            return Err(PairingError::JacobiZeroDivide(self.params));
        }
        Ok(q(2 * i64::from(self.n)) * &self.p_shift / &self.p)
    }

    /// `a0` as a single number, i.e. with the cross term folded in using
    /// the ratio of Jacobi values.
    pub fn a0(&self) -> Result<Rational, PairingError> {
        if self.p.is_zero() {
            return Err(PairingError::JacobiZeroDivide(self.params));
        }
        Ok(q(self.a0_main) + q(self.a0_cross) * &self.p_shift / &self.p)
    }
}

struct Prepared {
    d: u32,
    n: u32,
    xi: CohomologyClass,
    n_prime: i64,
    n_dblprime: i64,
    moment: i64,
    d_a: i64,
}

fn prepare(inp: &PairingInput<'_>) -> Result<Prepared, PairingError> {
    let x = inp.manifold;
    if inp.m > inp.delta / 2 {
        return Err(PairingError::MTooLarge {
            m: inp.m,
            half: inp.delta / 2,
        });
    }
    if !x.form.is_characteristic(&inp.s.c1)? {
        return Err(PairingError::NotCharacteristic);
    }
    let d_s = x.dim_sw(&inp.s)?;
    if d_s < 0 || d_s % 2 != 0 {
        return Err(PairingError::BadSwDimension(d_s));
    }
    let level = x.level(&inp.t_prime, &inp.s)?;
    if level != 1 {
        return Err(PairingError::LevelNotOne(level));
    }
    let (d_a, n_a) = x.dims_asd(&inp.t_prime)?;
    let lhs = 2 * (i64::from(inp.delta) + i64::from(inp.eta));
    let rhs = d_a + 2 * n_a - 2;
    if lhs != rhs {
        return Err(PairingError::DegreeAssumption { lhs, rhs });
    }
    let (n_prime, n_dblprime) = x.normal_indices(&inp.t_prime, &inp.s)?;
    Ok(Prepared {
        d: (d_s / 2) as u32,
        n: inp.delta - 2 * inp.m,
        xi: &inp.s.c1 - &inp.t_prime.c1,
        n_prime,
        n_dblprime,
        moment: inp.s.sw_moment(),
        d_a,
    })
}

/// Jacobi parameters `a = eta - d + 1`, `b = (2 delta - d_a - d_s)/2 - (chi + sigma)/4`.
fn jacobi_params(inp: &PairingInput<'_>, prep: &Prepared) -> Result<JacobiParams, PairingError> {
    let d = i64::from(prep.d);
    let a = i64::from(inp.eta) - d + 1;
    let b = (2 * i64::from(inp.delta) - prep.d_a - 2 * d) / 2 - inp.manifold.chi_h()?;
    Ok(JacobiParams::new(a, b, prep.d))
}

/// Bracket coefficients of the closed formula for `inp`.
pub fn level_one_coefficients(
    inp: &PairingInput<'_>,
) -> Result<LevelOneCoefficients, PairingError> {
    let prep = prepare(inp)?;
    let x = inp.manifold;
    let params = jacobi_params(inp, &prep)?;
    let n = i64::from(prep.n);
    let m = i64::from(inp.m);
    Ok(LevelOneCoefficients {
        d: prep.d,
        params,
        p: jacobi_at_zero(params),
        p_shift: jacobi_at_zero(params.shifted()),
        a0_main: 3 * x.form.square(&prep.xi)? + x.c1_squared() + 4 * n - 4 * m,
        a0_cross: 2 * x.form.pair(&prep.xi, &inp.t_prime.c1)?,
        a1: 4 * n * (n - 1) / 2,
        n: prep.n,
    })
}

/// `b^e`, or `None` when `e` is negative (the term is omitted).
fn power(base: &TruncatedPolynomial, exp: i64) -> Option<TruncatedPolynomial> {
    (exp >= 0).then(|| base.pow(exp as u32))
}

fn finish(poly: TruncatedPolynomial, h: &CohomologyClass) -> Result<PairingValue, PairingError> {
    let value = poly.evaluate_integers(&h.coords()[..poly.nvars()])?;
    Ok(PairingValue {
        polynomial: poly,
        value,
    })
}

/// The closed formula: sign `(-1)^{m+1+d}`, factor `2^{d-delta} moment`,
/// and the bracket
/// `P a0_main b^n + P' a0_cross b^n + 2n P' b^{n-1} <c1(t'),h> + 4 binom(n,2) P b^{n-2} Q(h,h)`
/// with `b = <c1(s) - c1(t'), h>`.
pub fn link_pairing_closed(inp: &PairingInput<'_>) -> Result<PairingValue, PairingError> {
    let coeffs = level_one_coefficients(inp)?;
    let prep = prepare(inp)?;
    let ctx = HContext::new(&inp.manifold.form, prep.n);
    let poly = closed_bracket(&ctx, &prep.xi, &inp.t_prime.c1, &coeffs, prep.n, 0)?;
    let factor = q(sign_of(i64::from(inp.m) + 1 + i64::from(prep.d)) * prep.moment)
        * pow2(i64::from(prep.d) - i64::from(inp.delta));
    finish(poly.scale(&factor), &inp.h)
}

/// The bracket of the closed formula with `k` copies of the exceptional
/// class already absorbed (`k = 0` is the plain bracket).
pub(crate) fn closed_bracket(
    ctx: &HContext<'_>,
    xi: &CohomologyClass,
    c1_t: &CohomologyClass,
    coeffs: &LevelOneCoefficients,
    n: u32,
    k: u32,
) -> Result<TruncatedPolynomial, PairingError> {
    let e = i64::from(n) - i64::from(k);
    let b = ctx.pairing(xi, &Slot::H)?;
    let kk = i64::from(k);
    let mut total = TruncatedPolynomial::zero(ctx.nvars, ctx.degree_bound);
    if let Some(bn) = power(&b, e) {
        let a0 = &coeffs.p * q(coeffs.a0_main - 4 * (kk + 1) * kk / 2)
            + &coeffs.p_shift * q(coeffs.a0_cross);
        total = total.add(&bn.scale(&a0))?;
    }
    if let Some(bn1) = power(&b, e - 1) {
        let lin = ctx.pairing(c1_t, &Slot::H)?;
        let coeff = &coeffs.p_shift * q(2 * e);
        total = total.add(&bn1.mul(&lin)?.scale(&coeff))?;
    }
    if let Some(bn2) = power(&b, e - 2) {
        let quad = ctx.quadratic(&Slot::H, &Slot::H)?;
        let coeff = &coeffs.p * q(4 * e * (e - 1) / 2);
        total = total.add(&bn2.mul(&quad)?.scale(&coeff))?;
    }
    Ok(total)
}

/// The double sum over Segre constants, evaluated term by term with the
/// instanton-link pairings substituted.
pub fn link_pairing_raw(inp: &PairingInput<'_>) -> Result<PairingValue, PairingError> {
    let prep = prepare(inp)?;
    let x = inp.manifold;
    let ctx = HContext::new(&x.form, prep.n);
    let link = InstantonLink {
        ctx,
        xi: prep.xi.clone(),
        c1_squared_x: x.c1_squared(),
    };
    let delta = i64::from(inp.delta);
    let d = i64::from(prep.d);
    let n = i64::from(prep.n);
    let m = i64::from(inp.m);
    let c1_t = Slot::Class(inp.t_prime.c1.clone());

    let b = ctx.pairing(&prep.xi, &Slot::H)?;
    let nu3 = ctx.constant(link.nu3()?);
    let nu2_c1t = link.nu2(&c1_t)?;
    let nu2_h = link.nu2(&Slot::H)?;
    let nu_h_c1t = link.nu_alpha(&inp.t_prime.c1, &Slot::H)?;
    let quad = ctx.quadratic(&Slot::H, &Slot::H)?;
    let nu_x = ctx.constant(link.nu_x());

    // (sign, power of b, extra h-dependent factor, alpha shift of binom(delta - v, i),
    //  upper shift of binom(d + u - i - j, d - i - j), pairing)
    type Family<'p> = (
        Rational,
        i64,
        Option<&'p TruncatedPolynomial>,
        i64,
        i64,
        &'p TruncatedPolynomial,
    );
    let families: [Family<'_>; 6] = [
        (q(1), n, None, 0, 3, &nu3),
        (q(-1), n, None, 0, 2, &nu2_c1t),
        (q(-2 * n), n - 1, None, 1, 2, &nu2_h),
        (q(2 * n), n - 1, None, 1, 1, &nu_h_c1t),
        (q(4 * n * (n - 1) / 2), n - 2, Some(&quad), 2, 1, &nu_x),
        (q(-4 * m), n, None, 2, 1, &nu_x),
    ];

    let segre: Vec<BigInt> = (0..=prep.d)
        .map(|j| s_constants(prep.n_prime, prep.n_dblprime, j))
        .collect();

    let mut total = TruncatedPolynomial::zero(ctx.nvars, ctx.degree_bound);
    for (coeff, exp, extra, v, u, pairing) in families {
        let Some(bpow) = power(&b, exp) else { continue };
        if coeff.is_zero() {
            continue;
        }
        let mut weight = BigInt::zero();
        for i in 0..=d {
            for j in 0..=(d - i) {
                let mut term = ext_binomial(delta - v, i)
                    * ext_binomial(d + u - i - j, d - i - j)
                    * &segre[j as usize]
                    * (BigInt::one() << (d - j) as usize);
                if (i + j) % 2 == 1 {
                    term = -term;
                }
                weight += term;
            }
        }
        if weight.is_zero() {
            continue;
        }
        let mut piece = bpow.mul(pairing)?;
        if let Some(f) = extra {
            piece = piece.mul(f)?;
        }
        total = total.add(&piece.scale(&(coeff * q(weight))))?;
    }
    let factor = q(sign_of(m + 1 + d) * prep.moment) * pow2(-delta - 1);
    finish(total.scale(&factor), &inp.h)
}

fn check_blow_up_order(inp: &PairingInput<'_>, k: u32) -> Result<u32, PairingError> {
    let n = inp
        .delta
        .checked_sub(2 * inp.m)
        .ok_or(PairingError::MTooLarge {
            m: inp.m,
            half: inp.delta / 2,
        })?;
    if k > n {
        return Err(PairingError::BlowUpOrderTooLarge { k, n });
    }
    Ok(n)
}

/// Sum over `s^+ = s # s_1` and `s^- = s # s_{-1}` of the signed pairings
/// `#(V(h^{delta-2m-k} e^{k+1} x^m) . W^eta . L)` on the blow-up, in closed
/// form. `inp` describes the level-one pairing on the original manifold;
/// `inp.t_prime.w` supplies the orientation sign.
pub fn blow_up_pairing_closed(
    inp: &PairingInput<'_>,
    k: u32,
) -> Result<PairingValue, PairingError> {
    let n = check_blow_up_order(inp, k)?;
    let coeffs = level_one_coefficients(inp)?;
    let nvars = inp.manifold.rank();
    if k % 2 == 1 {
        return finish(TruncatedPolynomial::zero(nvars, n - k), &inp.h);
    }
    let prep = prepare(inp)?;
    let ctx = HContext::new(&inp.manifold.form, n - k);
    let bracket = closed_bracket(&ctx, &prep.xi, &inp.t_prime.c1, &coeffs, n, k)?;
    let o = inp
        .manifold
        .orientation_exponent(&inp.t_prime.w, &inp.t_prime, &inp.s)?;
    let d = i64::from(prep.d);
    let factor =
        q(sign_of(o + i64::from(inp.m) + 1 - d) * prep.moment) * pow2(d - i64::from(inp.delta));
    finish(bracket.scale(&factor), &inp.h)
}

/// The same signed sum, computed by evaluating the closed formula on the
/// blow-up as a multilinear expression in the arguments
/// `(h, ..., h, e, ..., e)` and adding the two orientation-signed pairings.
pub fn blow_up_pairing_polarized(
    inp: &PairingInput<'_>,
    k: u32,
) -> Result<PairingValue, PairingError> {
    let n = check_blow_up_order(inp, k)?;
    let x = inp.manifold;
    let nvars = x.rank();
    let (blown, e) = x.blow_up();
    let t_tilde = blow_up_spinu(&inp.t_prime);
    let ctx = HContext {
        form: &blown.form,
        nvars,
        degree_bound: n - k,
    };
    let mut slots = vec![Slot::H; (n - k) as usize];
    slots.extend(std::iter::repeat_n(Slot::Class(e), k as usize + 1));

    let mut total = TruncatedPolynomial::zero(nvars, n - k);
    for sign_k in [1, 0] {
        let s_pm = blow_up_spinc(&inp.s, sign_k);
        let tilde = PairingInput {
            manifold: &blown,
            t_prime: t_tilde.clone(),
            s: s_pm.clone(),
            delta: inp.delta + 1,
            m: inp.m,
            eta: inp.eta,
            h: inp.h.extended(0),
        };
        let prep = prepare(&tilde)?;
        let coeffs = level_one_coefficients(&tilde)?;
        let polarized = polarize(&ctx, &prep.xi, &t_tilde.c1, &coeffs, &slots)?;
        let d = i64::from(prep.d);
        let o = blown.orientation_exponent(&t_tilde.w, &t_tilde, &s_pm)?;
        let factor = q(sign_of(o) * sign_of(i64::from(inp.m) + 1 + d) * prep.moment)
            * pow2(d - i64::from(tilde.delta));
        total = total.add(&polarized.scale(&factor))?;
    }
    finish(total, &inp.h)
}

/// `P a0_main prod + P' a0_cross prod + 2 P' sum_j (...) + 4 P sum_{j<l} (...)`.
fn polarize(
    ctx: &HContext<'_>,
    xi: &CohomologyClass,
    c1_t: &CohomologyClass,
    coeffs: &LevelOneCoefficients,
    slots: &[Slot],
) -> Result<TruncatedPolynomial, PairingError> {
    let xi_at: Vec<TruncatedPolynomial> = slots
        .iter()
        .map(|s| ctx.pairing(xi, s))
        .collect::<Result<_, _>>()?;
    let product_except = |skip: &[usize]| -> Result<TruncatedPolynomial, PairingError> {
        let mut acc = ctx.constant(Rational::one());
        for (i, f) in xi_at.iter().enumerate() {
            if !skip.contains(&i) {
                acc = acc.mul(f)?;
            }
        }
        Ok(acc)
    };
    let full = product_except(&[])?;
    let a0 = &coeffs.p * q(coeffs.a0_main) + &coeffs.p_shift * q(coeffs.a0_cross);
    let mut total = full.scale(&a0);
    let two_p_shift = &coeffs.p_shift * q(2);
    let four_p = &coeffs.p * q(4);
    for j in 0..slots.len() {
        let lin = ctx.pairing(c1_t, &slots[j])?;
        total = total.add(&product_except(&[j])?.mul(&lin)?.scale(&two_p_shift))?;
        for l in j + 1..slots.len() {
            let quad = ctx.quadratic(&slots[j], &slots[l])?;
            total = total.add(&product_except(&[j, l])?.mul(&quad)?.scale(&four_p))?;
        }
    }
    Ok(total)
}
