//! Characteristic numbers of closed four-manifolds with `b1 = 0` and the
//! bookkeeping for spin-c and spin-u structures on them.

use thiserror::Error;

use crate::lattice::{CohomologyClass, IntersectionForm, LatticeError};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ManifoldError {
    #[error("{what}: {value} is not divisible by {divisor}")]
    NotDivisible {
        what: &'static str,
        value: i64,
        divisor: i64,
    },
    #[error(
        "Seiberg-Witten moduli space of a class with nonzero invariant has negative dimension {0}"
    )]
    NegativeDimension(i64),
    #[error("no basic classes")]
    EmptySupport,
    #[error(transparent)]
    Lattice(#[from] LatticeError),
}

pub(crate) fn exact_div(
    what: &'static str,
    value: i64,
    divisor: i64,
) -> Result<i64, ManifoldError> {
    if value % divisor != 0 {
        return Err(ManifoldError::NotDivisible {
            what,
            value,
            divisor,
        });
    }
    Ok(value / divisor)
}

/// A spin-c structure through its first Chern class, with its
/// Seiberg-Witten invariant.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SpincData {
    pub c1: CohomologyClass,
    pub sw: i64,
    /// Pairing of the top power of the point class with the moduli space,
    /// when it is known separately from `sw`. For zero-dimensional moduli
    /// spaces it is `sw` itself.
    pub moment: Option<i64>,
}

impl SpincData {
    pub fn new(c1: CohomologyClass, sw: i64) -> Self {
        Self {
            c1,
            sw,
            moment: None,
        }
    }

    pub fn sw_moment(&self) -> i64 {
        self.moment.unwrap_or(self.sw)
    }
}

/// A spin-u structure through `c1`, `p1` and an integral lift `w` of `w2`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SpinuData {
    pub c1: CohomologyClass,
    pub p1: i64,
    pub w: CohomologyClass,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FourManifoldData {
    pub name: String,
    pub chi: i64,
    pub sigma: i64,
    pub form: IntersectionForm,
    pub basic_classes: Vec<SpincData>,
}

/// `r(Lambda, c1(s))` per basic class, their minimum and `i(Lambda)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RAndI {
    pub per_class: Vec<i64>,
    pub r: i64,
    pub i: i64,
}

impl FourManifoldData {
    pub fn rank(&self) -> usize {
        self.form.rank()
    }

    pub fn chi_plus_sigma(&self) -> i64 {
        self.chi + self.sigma
    }

    /// `2 chi + 3 sigma`.
    pub fn c1_squared(&self) -> i64 {
        2 * self.chi + 3 * self.sigma
    }

    /// Holomorphic Euler characteristic `(chi + sigma)/4`.
    pub fn chi_h(&self) -> Result<i64, ManifoldError> {
        exact_div("chi_h", self.chi_plus_sigma(), 4)
    }

    /// `c(X) = -(7 chi + 11 sigma)/4`.
    pub fn c_of_x(&self) -> Result<i64, ManifoldError> {
        exact_div("c(X)", -(7 * self.chi + 11 * self.sigma), 4)
    }

    /// Expected dimension of the instanton moduli space and the index of the
    /// Dirac operator: `(d_a, n_a)`.
    pub fn dims_asd(&self, t: &SpinuData) -> Result<(i64, i64), ManifoldError> {
        let d_a = -2 * t.p1 - 3 * exact_div("d_a", self.chi_plus_sigma(), 2)?;
        let lambda_sq = self.form.square(&t.c1)?;
        let n_a = exact_div("n_a", t.p1 + lambda_sq - self.sigma, 4)?;
        Ok((d_a, n_a))
    }

    /// Dimension `d_a + 2 n_a` of the monopole moduli space.
    pub fn dim_monopoles(&self, t: &SpinuData) -> Result<i64, ManifoldError> {
        let (d_a, n_a) = self.dims_asd(t)?;
        Ok(d_a + 2 * n_a)
    }

    /// `d_s = (c1(s)^2 - 2 chi - 3 sigma)/4`.
    pub fn dim_sw(&self, s: &SpincData) -> Result<i64, ManifoldError> {
        let c1_sq = self.form.square(&s.c1)?;
        let d = exact_div("d_s", c1_sq - self.c1_squared(), 4)?;
        if s.sw != 0 && d < 0 {
            return Err(ManifoldError::NegativeDimension(d));
        }
        Ok(d)
    }

    /// Complex indices `(n', n'')` of the normal deformation operator.
    pub fn normal_indices(
        &self,
        t: &SpinuData,
        s: &SpincData,
    ) -> Result<(i64, i64), ManifoldError> {
        let diff = &t.c1 - &s.c1;
        let n_prime = -self.form.square(&diff)? - exact_div("n'", self.chi_plus_sigma(), 2)?;
        let twisted = &s.c1 - &(2 * &t.c1);
        let n_dblprime = exact_div("n''", self.form.square(&twisted)? - self.sigma, 8)?;
        Ok((n_prime, n_dblprime))
    }

    /// `l = ((c1(s) - c1(t))^2 - p1(t))/4`.
    pub fn level(&self, t: &SpinuData, s: &SpincData) -> Result<i64, ManifoldError> {
        let diff = &s.c1 - &t.c1;
        exact_div("level", self.form.square(&diff)? - t.p1, 4)
    }

    /// The spin-u structure with the same `c1` and `w` in which `s` appears
    /// as a reducible, i.e. at level zero.
    pub fn reducible_spinu(
        &self,
        t: &SpinuData,
        s: &SpincData,
    ) -> Result<SpinuData, ManifoldError> {
        let diff = &s.c1 - &t.c1;
        Ok(SpinuData {
            c1: t.c1.clone(),
            p1: self.form.square(&diff)?,
            w: t.w.clone(),
        })
    }

    /// `r(Lambda, c1) = -(c1 - Lambda)^2 - 3(chi + sigma)/4`.
    pub fn r_of(
        &self,
        lambda: &CohomologyClass,
        c1: &CohomologyClass,
    ) -> Result<i64, ManifoldError> {
        let diff = c1 - lambda;
        Ok(-self.form.square(&diff)? - 3 * self.chi_h()?)
    }

    /// `i(Lambda) = Lambda^2 + c(X) + chi + sigma`.
    pub fn i_of(&self, lambda: &CohomologyClass) -> Result<i64, ManifoldError> {
        Ok(self.form.square(lambda)? + self.c_of_x()? + self.chi_plus_sigma())
    }

    pub fn r_and_i(&self, lambda: &CohomologyClass) -> Result<RAndI, ManifoldError> {
        let per_class = self
            .basic_classes
            .iter()
            .map(|s| self.r_of(lambda, &s.c1))
            .collect::<Result<Vec<_>, _>>()?;
        let r = per_class
            .iter()
            .zip(&self.basic_classes)
            .filter(|(_, s)| s.sw != 0)
            .map(|(r, _)| *r)
            .min()
            .ok_or(ManifoldError::EmptySupport)?;
        Ok(RAndI {
            per_class,
            r,
            i: self.i_of(lambda)?,
        })
    }

    /// `deg(z) = -2 w^2 - 3(chi + sigma)/2 (mod 8)`, the only degrees in
    /// which the Donaldson invariant can be nonzero.
    pub fn degree_parity_ok(&self, w: &CohomologyClass, deg_z: i64) -> Result<bool, ManifoldError> {
        let target = -2 * self.form.square(w)? - 3 * exact_div("parity", self.chi_plus_sigma(), 2)?;
        Ok((deg_z - target).rem_euclid(8) == 0)
    }

    /// `p1` of the spin-u structure whose instanton moduli space has
    /// dimension `2 delta`: `-delta - 3(chi + sigma)/4`.
    pub fn p1_for_degree(&self, delta: i64) -> Result<i64, ManifoldError> {
        Ok(-delta - 3 * self.chi_h()?)
    }

    /// Exponent `(w - c1(L))^2/4` with `c1(L) = c1(t) - c1(s)`.
    pub fn orientation_exponent(
        &self,
        w: &CohomologyClass,
        t: &SpinuData,
        s: &SpincData,
    ) -> Result<i64, ManifoldError> {
        let c1_l = &t.c1 - &s.c1;
        let diff = w - &c1_l;
        exact_div("orientation", self.form.square(&diff)?, 4)
    }

    /// `(-1)^{(w - c1(L))^2/4}`.
    pub fn orientation_sign(
        &self,
        w: &CohomologyClass,
        t: &SpinuData,
        s: &SpincData,
    ) -> Result<i64, ManifoldError> {
        Ok(sign_of(self.orientation_exponent(w, t, s)?))
    }

    /// The blow-up, with the exceptional class. Each basic class `K` becomes
    /// the pair `K + e`, `K - e` with the same invariant.
    pub fn blow_up(&self) -> (FourManifoldData, CohomologyClass) {
        let (form, e) = self.form.blow_up();
        let basic_classes = self
            .basic_classes
            .iter()
            .flat_map(|s| [1, 0].map(|k| blow_up_spinc(s, k)))
            .collect();
        (
            FourManifoldData {
                name: format!("{}#CP2bar", self.name),
                chi: self.chi + 1,
                sigma: self.sigma - 1,
                form,
                basic_classes,
            },
            e,
        )
    }
}

/// `(-1)^k`.
pub fn sign_of(exponent: i64) -> i64 {
    if exponent.rem_euclid(2) == 0 {
        1
    } else {
        -1
    }
}

/// The spin-c structure `s # s_{2k-1}` on the blow-up: `c1 + (2k - 1) e`.
pub fn blow_up_spinc(s: &SpincData, k: i64) -> SpincData {
    SpincData {
        c1: s.c1.extended(2 * k - 1),
        sw: s.sw,
        moment: s.moment,
    }
}

/// The spin-u structure on the blow-up with `c1` unchanged, `p1 - 1` and `w + e`.
pub fn blow_up_spinu(t: &SpinuData) -> SpinuData {
    SpinuData {
        c1: t.c1.extended(0),
        p1: t.p1 - 1,
        w: t.w.extended(1),
    }
}
