use std::fmt::Write as _;

use num_bigint::BigInt;
use thiserror::Error;

use dsw_core::combinatorics::{
    jacobi_at_zero, jacobi_via_hypergeometric, triple_sum_jacobi_params, triple_sum_lhs,
    vandermonde_check,
};
use dsw_core::fixture::{builtin, load_fixture, FixtureError, BUILTIN_NAMES};
use dsw_core::lattice::CohomologyClass;
use dsw_core::manifold::{ManifoldError, SpinuData};
use dsw_core::pairings::{
    link_pairing_closed, link_pairing_raw, segre_coefficient, PairingError, PairingInput,
};
use dsw_core::polyring::{PolyError, TruncatedPolynomial as Poly};
use dsw_core::witten::{donaldson_invariant, verify_witten, WittenError};
use dsw_core::Rational;

#[derive(Debug, Error)]
pub enum CliError {
    #[error(transparent)]
    Fixture(#[from] FixtureError),
    #[error(transparent)]
    Witten(#[from] WittenError),
    #[error(transparent)]
    Pairing(#[from] PairingError),
    #[error(transparent)]
    Manifold(#[from] ManifoldError),
    #[error(transparent)]
    Poly(#[from] PolyError),
    #[error(transparent)]
    Json(#[from] serde_json::Error),
    #[error("{0}")]
    Usage(String),
}

/// Text for standard output and whether every comparison in it passed.
pub struct Report {
    pub text: String,
    pub all_pass: bool,
}

#[derive(Default)]
struct Lines {
    header: String,
    checks: Vec<(String, bool, String)>,
}

impl Lines {
    fn info(&mut self, key: &str, value: impl std::fmt::Display) {
        let _ = writeln!(self.header, "{key} {value}");
    }

    fn check(&mut self, id: impl Into<String>, pass: bool, detail: impl Into<String>) {
        self.checks.push((id.into(), pass, detail.into()));
    }

    fn finish(self) -> Report {
        let mut text = self.header;
        for (id, pass, detail) in &self.checks {
            let verdict = if *pass { "PASS" } else { "FAIL" };
            let _ = writeln!(text, "CHECK {id} {verdict} {detail}");
        }
        let passed = self.checks.iter().filter(|c| c.1).count();
        let failed = self.checks.len() - passed;
        let _ = writeln!(text, "SUMMARY");
        let _ = writeln!(text, "  checks: {}", self.checks.len());
        let _ = writeln!(text, "  passed: {passed}");
        let _ = writeln!(text, "  failed: {failed}");
        Report {
            text,
            all_pass: failed == 0,
        }
    }
}

pub fn verify(path: &str, json: bool) -> Result<Report, CliError> {
    let fixture = load_fixture(path)?;
    let (lambda, w) = fixture.lambda_and_w()?;
    let report = verify_witten(&fixture.manifold, &w, &lambda)?;
    let degree_rows_pass = report.table.iter().all(|r| r.equal);
    if json {
        let doc = serde_json::json!({
            "attributes": fixture.attributes,
            "report": report,
            "passed": report.passed() && degree_rows_pass,
        });
        return Ok(Report {
            text: serde_json::to_string_pretty(&doc)? + "\n",
            all_pass: report.passed() && degree_rows_pass,
        });
    }
    let mut out = Lines::default();
    out.info("FIXTURE", &report.name);
    out.info("C", report.c);
    out.info("LAMBDA", &report.lambda);
    out.info("W", &report.w);
    let a = fixture.attributes;
    out.info(
        "ATTRIBUTES",
        format!(
            "simple_type={} abundant={} effective={} (declared)",
            a.simple_type, a.abundant, a.effective
        ),
    );
    out.info(
        "HYPERBOLIC_PAIR_IN_B_PERP",
        if report.hyperbolic_pair_found {
            "found"
        } else {
            "not found"
        },
    );
    for row in &report.table {
        out.check(
            format!("degree-{}", row.degree),
            row.equal,
            format!("D = {}; predicted = {}", row.donaldson, row.predicted),
        );
    }
    for c in &report.checks {
        out.check(c.id.clone(), c.pass, c.detail.clone());
    }
    Ok(out.finish())
}

pub fn moment(path: &str, delta: u32, m: u32) -> Result<Report, CliError> {
    let fixture = load_fixture(path)?;
    let (lambda, w) = fixture.lambda_and_w()?;
    let value = donaldson_invariant(&fixture.manifold, &w, &lambda, delta, m)?;
    let mut out = Lines::default();
    out.info("FIXTURE", &fixture.manifold.name);
    out.info("LAMBDA", &lambda);
    out.info("W", &w);
    out.info(
        "RESULT",
        format!("D(h^{} x^{m}) = {value}", delta - 2 * m),
    );
    Ok(out.finish())
}

pub fn pairing(
    path: &str,
    delta: u32,
    m: u32,
    class: usize,
    h: Option<Vec<i64>>,
    oracle: bool,
) -> Result<Report, CliError> {
    let fixture = load_fixture(path)?;
    let x = &fixture.manifold;
    let (lambda, w) = fixture.lambda_and_w()?;
    let s = x
        .basic_classes
        .get(class)
        .cloned()
        .ok_or_else(|| CliError::Usage(format!("no basic class with index {class}")))?;
    let h = h.unwrap_or_else(|| vec![1; x.rank()]);
    if h.len() != x.rank() {
        return Err(CliError::Usage(format!(
            "h has {} entries but the form has rank {}",
            h.len(),
            x.rank()
        )));
    }
    let diff = &s.c1 - &lambda;
    let t_prime = SpinuData {
        c1: lambda.clone(),
        p1: x.form.square(&diff).map_err(ManifoldError::from)? - 4,
        w,
    };
    let (d_a, n_a) = x.dims_asd(&t_prime)?;
    let twice_eta = d_a + 2 * n_a - 2 - 2 * i64::from(delta);
    if twice_eta < 0 || twice_eta % 2 != 0 {
        return Err(CliError::Usage(format!(
            "delta = {delta} leaves no admissible eta (dim/S1 - 1 = {})",
            d_a + 2 * n_a - 2
        )));
    }
    let inp = PairingInput {
        manifold: x,
        t_prime,
        s,
        delta,
        m,
        eta: (twice_eta / 2) as u32,
        h: CohomologyClass::new(h),
    };
    let closed = link_pairing_closed(&inp)?;
    let mut out = Lines::default();
    out.info("FIXTURE", &x.name);
    out.info("CLASS", &inp.s.c1);
    out.info("LAMBDA", &lambda);
    out.info("ETA", inp.eta);
    out.info("RESULT", format!("closed = {}", closed.value));
    if oracle {
        let raw = link_pairing_raw(&inp)?;
        out.check(
            "pairing-closed-vs-raw",
            raw == closed,
            format!("closed = {}; raw = {}", closed.value, raw.value),
        );
    }
    Ok(out.finish())
}

/// `(1 + 2mu)^{n'} (1 + mu)^{n''}` in one variable, truncated at `bound`.
fn chern_polynomial(n_prime: i64, n_dblprime: i64, bound: u32) -> Result<Poly, CliError> {
    let factor = |c: i64, e: i64| -> Result<Poly, CliError> {
        let base = Poly::from_terms(
            1,
            bound,
            [
                (vec![0], Rational::from_integer(1.into())),
                (vec![1], Rational::from_integer(c.into())),
            ],
        );
        let p = base.pow(e.unsigned_abs() as u32);
        Ok(if e < 0 { p.inverse_series()? } else { p })
    };
    Ok(factor(2, n_prime)?.mul(&factor(1, n_dblprime)?)?)
}

pub fn fuzz_identities(d_max: u32) -> Result<Report, CliError> {
    let mut out = Lines::default();

    let (mut tuples, mut bad) = (0u64, Vec::new());
    let (mut hyper_checked, mut hyper_skipped, mut hyper_bad) = (0u64, 0u64, Vec::new());
    for a in -6..=10i64 {
        for m in -6..=6i64 {
            for n in -6..=6i64 {
                for d in 0..=d_max {
                    let rhs = Rational::from_integer(BigInt::from(1) << d as usize)
                        * jacobi_at_zero(triple_sum_jacobi_params(a, m, n, d));
                    for v in 0..=3u8 {
                        tuples += 1;
                        if triple_sum_lhs(a, m, n, d, v) != rhs {
                            bad.push((a, m, n, d, v));
                        }
                    }
                    match jacobi_via_hypergeometric(a, m, n, d) {
                        Ok(value) => {
                            hyper_checked += 1;
                            let direct = jacobi_at_zero(triple_sum_jacobi_params(a, m, n, d));
                            if value != direct {
                                hyper_bad.push((a, m, n, d));
                            }
                        }
                        Err(_) => hyper_skipped += 1,
                    }
                }
            }
        }
    }
    out.check(
        "triple-sum-jacobi",
        bad.is_empty(),
        format!("{tuples} tuples, {} mismatches{}", bad.len(), first(&bad)),
    );
    out.check(
        "jacobi-hypergeometric",
        hyper_bad.is_empty(),
        format!(
            "{hyper_checked} compared, {hyper_skipped} degenerate, {} mismatches{}",
            hyper_bad.len(),
            first(&hyper_bad)
        ),
    );

    let (mut segre_checked, mut segre_bad) = (0u64, Vec::new());
    for n_prime in -5..=5i64 {
        for n_dblprime in -5..=5i64 {
            let inverse = chern_polynomial(n_prime, n_dblprime, 10)?.inverse_series()?;
            for p in 0..=10u32 {
                segre_checked += 1;
                let expected = inverse.coefficient(&[p]);
                if Rational::from_integer(segre_coefficient(n_prime, n_dblprime, p)) != expected
                {
                    segre_bad.push((n_prime, n_dblprime, p));
                }
            }
        }
    }
    out.check(
        "segre-inverse-series",
        segre_bad.is_empty(),
        format!(
            "{segre_checked} coefficients, {} mismatches{}",
            segre_bad.len(),
            first(&segre_bad)
        ),
    );

    let (mut vdm_checked, mut vdm_bad) = (0u64, Vec::new());
    for m in -6..=6i64 {
        for n in -6..=6i64 {
            for p in 0..=d_max + 2 {
                vdm_checked += 1;
                if !vandermonde_check(m, n, p) {
                    vdm_bad.push((m, n, p));
                }
            }
        }
    }
    out.check(
        "vandermonde",
        vdm_bad.is_empty(),
        format!(
            "{vdm_checked} cases, {} mismatches{}",
            vdm_bad.len(),
            first(&vdm_bad)
        ),
    );
    Ok(out.finish())
}

/// `"; first (..)"` for a nonempty mismatch list.
fn first<T: std::fmt::Debug>(items: &[T]) -> String {
    items
        .first()
        .map(|t| format!("; first {t:?}"))
        .unwrap_or_default()
}

pub fn catalog() -> Result<Report, CliError> {
    let mut out = Lines::default();
    for name in BUILTIN_NAMES {
        let f = builtin(name).expect("catalog names are built in");
        let x = &f.manifold;
        out.info(
            "FIXTURE",
            format!(
                "{name} name={} chi={} sigma={} b2+={} c={} basic_classes={}",
                x.name,
                x.chi,
                x.sigma,
                x.form.b_plus(),
                x.c_of_x()?,
                x.basic_classes.len()
            ),
        );
    }
    Ok(out.finish())
}
