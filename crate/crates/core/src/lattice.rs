//! Integer lattices with a symmetric bilinear form.
//!
//! Second cohomology is modelled as `Z^n` with a Gram matrix; there is no
//! torsion. Signatures are computed by exact congruence diagonalization over
//! the rationals, kernels by unimodular column operations.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum LatticeError {
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },
    #[error("gram matrix is not square")]
    NotSquare,
    #[error("gram matrix is not symmetric at ({0}, {1})")]
    NotSymmetric(usize, usize),
    #[error("declared b+ = {declared} but the form has {computed} positive directions")]
    SignatureMismatch { declared: usize, computed: usize },
    #[error("no hyperbolic pair found with coefficients bounded by {bound} and support at most {max_support}")]
    SearchExhausted { bound: i64, max_support: usize },
    #[error("{value} is not divisible by {divisor}")]
    NotDivisible { value: i64, divisor: i64 },
    #[error("form is degenerate mod 2; no characteristic vector found")]
    NoCharacteristicVector,
    #[error("integer overflow in lattice computation")]
    Overflow,
}

/// An integral class, as a coordinate vector in a fixed basis.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(transparent)]
pub struct CohomologyClass(Vec<i64>);

impl CohomologyClass {
    pub fn new(coords: Vec<i64>) -> Self {
        Self(coords)
    }

    pub fn zero(rank: usize) -> Self {
        Self(vec![0; rank])
    }

    pub fn unit(rank: usize, index: usize) -> Self {
        let mut coords = vec![0; rank];
        coords[index] = 1;
        Self(coords)
    }

    pub fn coords(&self) -> &[i64] {
        &self.0
    }

    pub fn rank(&self) -> usize {
        self.0.len()
    }

    pub fn is_zero(&self) -> bool {
        self.0.iter().all(|&c| c == 0)
    }

    /// Appends one coordinate, e.g. to push a class into a blow-up.
    pub fn extended(&self, last: i64) -> Self {
        let mut coords = self.0.clone();
        coords.push(last);
        Self(coords)
    }

    pub fn is_even(&self) -> bool {
        self.0.iter().all(|c| c % 2 == 0)
    }
}

impl fmt::Display for CohomologyClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (i, c) in self.0.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{c}")?;
        }
        write!(f, ")")
    }
}

fn zip_with(
    a: &CohomologyClass,
    b: &CohomologyClass,
    op: impl Fn(i64, i64) -> i64,
) -> CohomologyClass {
    assert_eq!(a.rank(), b.rank(), "class ranks differ");
    CohomologyClass(a.0.iter().zip(&b.0).map(|(&x, &y)| op(x, y)).collect())
}

impl Add for &CohomologyClass {
    type Output = CohomologyClass;
    fn add(self, rhs: Self) -> CohomologyClass {
        zip_with(self, rhs, |x, y| x + y)
    }
}

impl Sub for &CohomologyClass {
    type Output = CohomologyClass;
    fn sub(self, rhs: Self) -> CohomologyClass {
        zip_with(self, rhs, |x, y| x - y)
    }
}

impl Neg for &CohomologyClass {
    type Output = CohomologyClass;
    fn neg(self) -> CohomologyClass {
        CohomologyClass(self.0.iter().map(|x| -x).collect())
    }
}

impl Mul<&CohomologyClass> for i64 {
    type Output = CohomologyClass;
    fn mul(self, rhs: &CohomologyClass) -> CohomologyClass {
        CohomologyClass(rhs.0.iter().map(|x| self * x).collect())
    }
}

/// The mod-2 reduction has a non-torsion lift, which on a torsion-free
/// lattice just means the reduction is nonzero.
pub fn is_good(v_mod2: &CohomologyClass) -> bool {
    !v_mod2.is_even()
}

/// A symmetric integer bilinear form with its verified number of positive
/// directions.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IntersectionForm {
    gram: Vec<Vec<i64>>,
    b_plus: usize,
}

impl IntersectionForm {
    /// Builds a form and checks `b_plus` against the exact signature.
    pub fn new(gram: Vec<Vec<i64>>, b_plus: usize) -> Result<Self, LatticeError> {
        let form = Self::from_gram(gram)?;
        if form.b_plus != b_plus {
            return Err(LatticeError::SignatureMismatch {
                declared: b_plus,
                computed: form.b_plus,
            });
        }
        Ok(form)
    }

    /// Builds a form, computing `b_plus` from the Gram matrix.
    pub fn from_gram(gram: Vec<Vec<i64>>) -> Result<Self, LatticeError> {
        let n = gram.len();
        for (i, row) in gram.iter().enumerate() {
            if row.len() != n {
                return Err(LatticeError::NotSquare);
            }
            for j in 0..i {
                if row[j] != gram[j][i] {
                    return Err(LatticeError::NotSymmetric(i, j));
                }
            }
        }
        let (b_plus, _, _) = inertia(&gram);
        Ok(Self { gram, b_plus })
    }

    pub fn hyperbolic() -> Self {
        Self {
            gram: vec![vec![0, 1], vec![1, 0]],
            b_plus: 1,
        }
    }

    /// The negative of the E8 Cartan matrix.
    pub fn negative_e8() -> Self {
        // Bourbaki labelling: 1-3-4-5-6-7-8 chain with 2 attached to 4.
        let edges = [(0, 2), (2, 3), (3, 4), (4, 5), (5, 6), (6, 7), (1, 3)];
        let mut gram = vec![vec![0i64; 8]; 8];
        for (i, row) in gram.iter_mut().enumerate() {
            row[i] = -2;
        }
        for &(i, j) in &edges {
            gram[i][j] = 1;
            gram[j][i] = 1;
        }
        Self { gram, b_plus: 0 }
    }

    pub fn diagonal(entries: &[i64]) -> Self {
        let n = entries.len();
        let mut gram = vec![vec![0i64; n]; n];
        for (i, &e) in entries.iter().enumerate() {
            gram[i][i] = e;
        }
        let b_plus = entries.iter().filter(|&&e| e > 0).count();
        Self { gram, b_plus }
    }

    pub fn direct_sum(parts: &[IntersectionForm]) -> Self {
        let n: usize = parts.iter().map(|p| p.rank()).sum();
        let mut gram = vec![vec![0i64; n]; n];
        let mut offset = 0;
        for part in parts {
            for (i, row) in part.gram.iter().enumerate() {
                for (j, &value) in row.iter().enumerate() {
                    gram[offset + i][offset + j] = value;
                }
            }
            offset += part.rank();
        }
        Self {
            gram,
            b_plus: parts.iter().map(|p| p.b_plus).sum(),
        }
    }

    pub fn gram(&self) -> &[Vec<i64>] {
        &self.gram
    }

    pub fn rank(&self) -> usize {
        self.gram.len()
    }

    pub fn b_plus(&self) -> usize {
        self.b_plus
    }

    pub fn b_minus(&self) -> usize {
        let (_, minus, _) = inertia(&self.gram);
        minus
    }

    pub fn signature(&self) -> i64 {
        self.b_plus as i64 - self.b_minus() as i64
    }

    fn check(&self, v: &CohomologyClass) -> Result<(), LatticeError> {
        if v.rank() != self.rank() {
            return Err(LatticeError::DimensionMismatch {
                expected: self.rank(),
                found: v.rank(),
            });
        }
        Ok(())
    }

    /// `a^T G b`.
    pub fn pair(&self, a: &CohomologyClass, b: &CohomologyClass) -> Result<i64, LatticeError> {
        self.check(a)?;
        self.check(b)?;
        let mut total = 0i64;
        for (i, row) in self.gram.iter().enumerate() {
            if a.0[i] == 0 {
                continue;
            }
            let row_dot: i64 = row.iter().zip(&b.0).map(|(g, y)| g * y).sum();
            total += a.0[i] * row_dot;
        }
        Ok(total)
    }

    pub fn square(&self, a: &CohomologyClass) -> Result<i64, LatticeError> {
        self.pair(a, a)
    }

    /// `G v`, the coefficients of the linear form `x -> v . x`.
    pub fn dual_row(&self, v: &CohomologyClass) -> Result<Vec<i64>, LatticeError> {
        self.check(v)?;
        Ok(self
            .gram
            .iter()
            .map(|row| row.iter().zip(&v.0).map(|(g, c)| g * c).sum())
            .collect())
    }

    /// `v . x == x . x (mod 2)` for every basis vector `x`.
    pub fn is_characteristic(&self, v: &CohomologyClass) -> Result<bool, LatticeError> {
        let row = self.dual_row(v)?;
        Ok(row
            .iter()
            .enumerate()
            .all(|(i, r)| (r - self.gram[i][i]).rem_euclid(2) == 0))
    }

    pub fn is_even(&self) -> bool {
        self.gram.iter().enumerate().all(|(i, row)| row[i] % 2 == 0)
    }

    /// A 0/1 characteristic vector, found by solving `G v = diag(G)` over GF(2).
    pub fn characteristic_vector(&self) -> Result<CohomologyClass, LatticeError> {
        let n = self.rank();
        let mut rows: Vec<Vec<u8>> = (0..n)
            .map(|i| {
                let mut row: Vec<u8> = self.gram[i].iter().map(|g| g.rem_euclid(2) as u8).collect();
                row.push(self.gram[i][i].rem_euclid(2) as u8);
                row
            })
            .collect();
        let mut pivots = Vec::new();
        let mut r = 0;
        for col in 0..n {
            let Some(p) = (r..n).find(|&i| rows[i][col] == 1) else {
                continue;
            };
            rows.swap(r, p);
            for i in 0..n {
                if i != r && rows[i][col] == 1 {
                    let pivot_row = rows[r].clone();
                    for (x, y) in rows[i].iter_mut().zip(pivot_row) {
                        *x ^= y;
                    }
                }
            }
            pivots.push(col);
            r += 1;
        }
        if rows[r..].iter().any(|row| row[n] == 1) {
            return Err(LatticeError::NoCharacteristicVector);
        }
        let mut v = vec![0i64; n];
        for (i, &col) in pivots.iter().enumerate() {
            v[col] = i64::from(rows[i][n]);
        }
        Ok(CohomologyClass(v))
    }

    /// Exact determinant by fraction-free elimination.
    pub fn determinant(&self) -> BigInt {
        bareiss_determinant(&self.gram)
    }

    pub fn is_unimodular(&self) -> bool {
        self.determinant().abs().is_one()
    }

    /// Integral basis of `{x : x . b = 0 for all b in classes}`.
    pub fn orthogonal_complement(
        &self,
        classes: &[CohomologyClass],
    ) -> Result<Vec<CohomologyClass>, LatticeError> {
        let rows = classes
            .iter()
            .map(|b| self.dual_row(b))
            .collect::<Result<Vec<_>, _>>()?;
        integer_kernel(&rows, self.rank())
    }

    /// `Q + <-1>` and the exceptional class.
    pub fn blow_up(&self) -> (IntersectionForm, CohomologyClass) {
        let form = Self::direct_sum(&[self.clone(), Self::diagonal(&[-1])]);
        let e = CohomologyClass::unit(form.rank(), form.rank() - 1);
        (form, e)
    }

    /// The Gram matrix of the form restricted to the span of `basis`.
    pub fn restricted_gram(
        &self,
        basis: &[CohomologyClass],
    ) -> Result<Vec<Vec<i64>>, LatticeError> {
        basis
            .iter()
            .map(|a| basis.iter().map(|b| self.pair(a, b)).collect())
            .collect()
    }
}

/// Numbers of positive, negative and zero directions of a symmetric matrix.
fn inertia(gram: &[Vec<i64>]) -> (usize, usize, usize) {
    let n = gram.len();
    let mut m: Vec<Vec<BigRational>> = gram
        .iter()
        .map(|row| {
            row.iter()
                .map(|&x| BigRational::from_integer(x.into()))
                .collect()
        })
        .collect();
    let mut active: Vec<usize> = (0..n).collect();
    let (mut plus, mut minus) = (0, 0);
    while !active.is_empty() {
        let pivot = active.iter().copied().find(|&i| !m[i][i].is_zero());
        let pivot = match pivot {
            Some(p) => p,
            None => {
                // All remaining diagonal entries vanish. Replace e_i by e_i + e_j
                // for some nonzero off-diagonal entry, which makes m[i][i] = 2 m[i][j].
                let hit = active.iter().copied().find_map(|i| {
                    active
                        .iter()
                        .copied()
                        .find(|&j| j != i && !m[i][j].is_zero())
                        .map(|j| (i, j))
                });
                let Some((i, j)) = hit else { break };
                for &k in &active {
                    let v = m[j][k].clone();
                    m[i][k] += v;
                }
                for &k in &active {
                    let v = m[k][j].clone();
                    m[k][i] += v;
                }
                i
            }
        };
        let p = m[pivot][pivot].clone();
        if p.is_positive() {
            plus += 1;
        } else {
            minus += 1;
        }
        active.retain(|&i| i != pivot);
        for &i in &active {
            if m[i][pivot].is_zero() {
                continue;
            }
            let factor = &m[i][pivot] / &p;
            for &j in &active {
                let delta = &factor * &m[pivot][j];
                m[i][j] -= delta;
            }
        }
    }
    (plus, minus, n - plus - minus)
}

fn bareiss_determinant(gram: &[Vec<i64>]) -> BigInt {
    let n = gram.len();
    if n == 0 {
        return BigInt::one();
    }
    let mut m: Vec<Vec<BigInt>> = gram
        .iter()
        .map(|row| row.iter().map(|&x| BigInt::from(x)).collect())
        .collect();
    let mut sign = BigInt::one();
    let mut prev = BigInt::one();
    for k in 0..n - 1 {
        if m[k][k].is_zero() {
            let Some(p) = (k + 1..n).find(|&i| !m[i][k].is_zero()) else {
                return BigInt::zero();
            };
            m.swap(k, p);
            sign = -sign;
        }
        for i in k + 1..n {
            for j in k + 1..n {
                let value = (&m[i][j] * &m[k][k] - &m[i][k] * &m[k][j]) / &prev;
                m[i][j] = value;
            }
        }
        prev = m[k][k].clone();
    }
    sign * &m[n - 1][n - 1]
}

/// Basis of the integer kernel of `rows` (each of length `n`), from unimodular
/// column operations on the stacked matrix `[rows; I]`.
fn integer_kernel(rows: &[Vec<i64>], n: usize) -> Result<Vec<CohomologyClass>, LatticeError> {
    for row in rows {
        if row.len() != n {
            return Err(LatticeError::DimensionMismatch {
                expected: n,
                found: row.len(),
            });
        }
    }
    // cols[c] = (image entries, transform column)
    let mut cols: Vec<(Vec<BigInt>, Vec<BigInt>)> = (0..n)
        .map(|c| {
            let image = rows.iter().map(|r| BigInt::from(r[c])).collect();
            let mut unit = vec![BigInt::zero(); n];
            unit[c] = BigInt::one();
            (image, unit)
        })
        .collect();
    let mut start = 0;
    for r in 0..rows.len() {
        loop {
            let nonzero: Vec<usize> = (start..n).filter(|&c| !cols[c].0[r].is_zero()).collect();
            if nonzero.len() <= 1 {
                if let Some(&c) = nonzero.first() {
                    cols.swap(start, c);
                    start += 1;
                }
                break;
            }
            let pivot = *nonzero
                .iter()
                .min_by_key(|&&c| cols[c].0[r].abs())
                .expect("nonempty");
            for &c in &nonzero {
                if c == pivot {
                    continue;
                }
                let q = cols[c].0[r].div_floor(&cols[pivot].0[r]);
                let (pimg, ptr) = cols[pivot].clone();
                let (img, tr) = &mut cols[c];
                for (x, y) in img.iter_mut().zip(&pimg) {
                    *x -= &q * y;
                }
                for (x, y) in tr.iter_mut().zip(&ptr) {
                    *x -= &q * y;
                }
            }
        }
    }
    cols[start..]
        .iter()
        .map(|(_, tr)| {
            tr.iter()
                .map(|x| x.to_i64().ok_or(LatticeError::Overflow))
                .collect::<Result<Vec<_>, _>>()
                .map(CohomologyClass)
        })
        .collect()
}

/// Limits for the bounded hyperbolic-pair search.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SearchConfig {
    /// Largest absolute coefficient on a sublattice basis vector.
    pub bound: i64,
    /// Largest number of basis vectors combined in one candidate.
    pub max_support: usize,
}

impl Default for SearchConfig {
    fn default() -> Self {
        Self {
            bound: 8,
            max_support: 3,
        }
    }
}

/// Two isotropic classes with `e1 . e2 = 1`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct HyperbolicPair {
    pub e1: CohomologyClass,
    pub e2: CohomologyClass,
}

/// Coefficient order used by the search: 1, -1, 2, -2, ...
fn coefficient_order(bound: i64) -> Vec<i64> {
    (1..=bound).flat_map(|c| [c, -c]).collect()
}

/// Calls `visit` with every coefficient vector of the given support size, in
/// a fixed order, until it returns `Some`.
fn for_each_combination<T>(
    rank: usize,
    support: usize,
    coeffs: &[i64],
    visit: &mut impl FnMut(&[(usize, i64)]) -> Option<T>,
) -> Option<T> {
    fn rec<T>(
        rank: usize,
        support: usize,
        coeffs: &[i64],
        first: usize,
        chosen: &mut Vec<(usize, i64)>,
        visit: &mut impl FnMut(&[(usize, i64)]) -> Option<T>,
    ) -> Option<T> {
        if chosen.len() == support {
            return visit(chosen);
        }
        for idx in first..rank {
            for &c in coeffs {
                chosen.push((idx, c));
                if let Some(found) = rec(rank, support, coeffs, idx + 1, chosen, visit) {
                    return Some(found);
                }
                chosen.pop();
            }
        }
        None
    }
    rec(
        rank,
        support,
        coeffs,
        0,
        &mut Vec::with_capacity(support),
        visit,
    )
}

/// Searches the span of `sublattice` for a hyperbolic pair.
///
/// Candidates for `e1` are enumerated by support size and then
/// lexicographically, with coefficients in `1, -1, 2, -2, ...` up to the
/// bound. For each isotropic `e1` a vector `x` with `x . e1 = 1` and even
/// square is sought in the same box; then `e2 = x - (x^2/2) e1`. The first hit
/// is returned. Failure is not a proof that no pair exists.
pub fn find_hyperbolic_pair(
    form: &IntersectionForm,
    sublattice: &[CohomologyClass],
    config: SearchConfig,
) -> Result<HyperbolicPair, LatticeError> {
    let exhausted = LatticeError::SearchExhausted {
        bound: config.bound,
        max_support: config.max_support,
    };
    let k = sublattice.len();
    if k == 0 {
        return Err(exhausted);
    }
    let gram = form.restricted_gram(sublattice)?;
    let (plus, minus, _) = inertia(&gram);
    if plus == 0 || minus == 0 {
        // Semidefinite sublattices still may have isotropic vectors, but they
        // lie in the radical and pair trivially with everything.
        return Err(exhausted);
    }
    let coeffs = coefficient_order(config.bound);
    let pair_local = |a: &[(usize, i64)], b: &[(usize, i64)]| -> i64 {
        let mut total = 0;
        for &(i, ci) in a {
            for &(j, cj) in b {
                total += ci * cj * gram[i][j];
            }
        }
        total
    };
    let embed = |combo: &[(usize, i64)]| -> CohomologyClass {
        let mut v = CohomologyClass::zero(form.rank());
        for &(i, c) in combo {
            for (x, y) in v.0.iter_mut().zip(&sublattice[i].0) {
                *x += c * y;
            }
        }
        v
    };
    for support in 1..=config.max_support.min(k) {
        let found = for_each_combination(k, support, &coeffs, &mut |e1: &[(usize, i64)]| {
            if pair_local(e1, e1) != 0 {
                return None;
            }
            // gcd of coefficients must be 1 for e1 to pair to 1 with anything.
            let g = e1.iter().fold(0i64, |acc, &(_, c)| acc.gcd(&c));
            if g != 1 {
                return None;
            }
            for xs in 1..=config.max_support.min(k) {
                let hit = for_each_combination(k, xs, &coeffs, &mut |x: &[(usize, i64)]| {
                    let x_sq = pair_local(x, x);
                    (pair_local(x, e1) == 1 && x_sq % 2 == 0).then(|| (x.to_vec(), x_sq))
                });
                if let Some((x, x_sq)) = hit {
                    let e1v = embed(e1);
                    let e2v = &embed(&x) - &((x_sq / 2) * &e1v);
                    return Some(HyperbolicPair { e1: e1v, e2: e2v });
                }
            }
            None
        });
        if let Some(pair) = found {
            return Ok(pair);
        }
    }
    Err(exhausted)
}

/// `(e1 - 2t e2, e1 + (2 - 2t) e2)` with `t = (chi + sigma)/4`; their squares
/// are `-(chi + sigma)` and `4 - (chi + sigma)`.
pub fn lambda_candidates(
    pair: &HyperbolicPair,
    chi: i64,
    sigma: i64,
) -> Result<(CohomologyClass, CohomologyClass), LatticeError> {
    let s = chi + sigma;
    if s % 4 != 0 {
        return Err(LatticeError::NotDivisible {
            value: s,
            divisor: 4,
        });
    }
    let t = s / 4;
    let lambda0 = &pair.e1 - &((2 * t) * &pair.e2);
    let lambda1 = &pair.e1 + &((2 - 2 * t) * &pair.e2);
    Ok((lambda0, lambda1))
}
