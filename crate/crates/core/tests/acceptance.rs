//! Acceptance criteria. Runs as a plain binary (`harness = false`) and
//! prints one PASS/FAIL line per criterion; exits nonzero if any fails.
//! Every comparison is exact.

use std::collections::BTreeSet;
use std::process::ExitCode;
use std::time::{Duration, Instant};

use num_bigint::BigInt;
use num_traits::{One, Zero};

use dsw_core::combinatorics::{jacobi_at_zero, triple_sum_lhs, JacobiParams};
use dsw_core::fixture::builtin;
use dsw_core::manifold::SpinuData;
use dsw_core::pairings::{
    blow_up_pairing_closed, blow_up_pairing_polarized, link_pairing_closed, link_pairing_raw,
    segre_coefficient,
};
use dsw_core::polyring::{quadratic_form, TruncatedPolynomial};
use dsw_core::witten::{
    assemble_donaldson_series, donaldson_invariant, sign_change_check, sw_power_sum,
    sw_vanishing_check, verify_witten,
};
use dsw_core::Rational;

mod common;
use common::{class, fixture, k3_lattice_synthetic, pairing_cases, small_synthetic};

type Outcome = Result<String, String>;
type Criterion = (&'static str, Duration, fn() -> Outcome);

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn err<E: std::fmt::Display>(e: E) -> String {
    e.to_string()
}

fn int(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

// Independent oracles --------------------------------------------------------

/// Generalized binomial `r(r-1)...(r-k+1)/k!`, zero for negative `k`.
fn binom(r: i64, k: i64) -> BigInt {
    if k < 0 {
        return BigInt::zero();
    }
    let mut num = BigInt::one();
    let mut den = BigInt::one();
    for i in 0..k {
        num *= r - i;
        den *= i + 1;
    }
    num / den
}

/// `P^{a,b}_d(0)` straight from the defining sum.
fn jacobi_oracle(a: i64, b: i64, d: i64) -> Rational {
    let mut total = BigInt::zero();
    for v in 0..=d {
        let sign = if (d - v) % 2 == 0 { 1 } else { -1 };
        total += binom(d + a, v) * binom(d + b, d - v) * sign;
    }
    Rational::new(total, BigInt::one() << d as usize)
}

/// Power series coefficients of `1/((1+2mu)^{n1} (1+mu)^{n2})` up to `mu^p`.
fn segre_oracle(n1: i64, n2: i64, p: usize) -> Vec<Rational> {
    // Coefficients of (1 + c mu)^e are binom(e, k) c^k for any integer e.
    let series = |c: i64, e: i64| -> Vec<Rational> {
        (0..=p as i64)
            .map(|k| Rational::from_integer(binom(e, k) * BigInt::from(c).pow(k as u32)))
            .collect()
    };
    let (a, b) = (series(2, -n1), series(1, -n2));
    (0..=p)
        .map(|k| (0..=k).map(|j| &a[j] * &b[k - j]).sum())
        .collect()
}

// Criteria -------------------------------------------------------------------

fn criterion_1() -> Outcome {
    let mut count = 0u64;
    for a in -6..=10i64 {
        for m in -6..=6i64 {
            for n in -6..=6i64 {
                for d in 0..=8u32 {
                    let di = i64::from(d);
                    let oracle = jacobi_oracle(3 - n - a - m, a + m - 4 - di, di);
                    let library =
                        jacobi_at_zero(JacobiParams::new(3 - n - a - m, a + m - 4 - di, d));
                    ensure(library == oracle, || {
                        format!("jacobi_at_zero differs from the defining sum at A={a} M={m} N={n} d={d}")
                    })?;
                    let rhs = oracle * int(1 << d);
                    for v in 0..=3u8 {
                        count += 1;
                        let lhs = triple_sum_lhs(a, m, n, d, v);
                        ensure(lhs == rhs, || {
                            format!("A={a} M={m} N={n} d={d} v={v}: {lhs} != {rhs}")
                        })?;
                    }
                }
            }
        }
    }
    Ok(format!("{count} tuples"))
}

fn criterion_2() -> Outcome {
    let mut count = 0;
    for n1 in -5..=5i64 {
        for n2 in -5..=5i64 {
            let oracle = segre_oracle(n1, n2, 10);
            // Same series through the truncated polynomial ring.
            let factor = |c: i64, e: i64| {
                let base = TruncatedPolynomial::from_terms(
                    1,
                    10,
                    [(vec![0], int(1)), (vec![1], int(c))],
                );
                let p = base.pow(e.unsigned_abs() as u32);
                if e < 0 {
                    p.inverse_series().unwrap()
                } else {
                    p
                }
            };
            let ring = factor(2, n1)
                .mul(&factor(1, n2))
                .map_err(err)?
                .inverse_series()
                .map_err(err)?;
            for p in 0..=10u32 {
                count += 1;
                let value = Rational::from_integer(segre_coefficient(n1, n2, p));
                ensure(value == oracle[p as usize], || {
                    format!("s_{p}({n1},{n2}) = {value}, expected {}", oracle[p as usize])
                })?;
                ensure(ring.coefficient(&[p]) == value, || {
                    format!("inverse_series disagrees at ({n1},{n2},{p})")
                })?;
            }
        }
    }
    Ok(format!("{count} coefficients"))
}

fn criterion_3() -> Outcome {
    let manifolds = [
        fixture("k3"),
        fixture("e3"),
        fixture("e5"),
        k3_lattice_synthetic(),
        small_synthetic(),
    ];
    let mut count = 0;
    let mut d_values = BTreeSet::new();
    let mut n_values = BTreeSet::new();
    let mut grid = BTreeSet::new();
    for x in &manifolds {
        for case in pairing_cases(x, 40) {
            let closed = link_pairing_closed(&case.input).map_err(err)?;
            let raw = link_pairing_raw(&case.input).map_err(err)?;
            ensure(closed == raw, || {
                format!(
                    "{}: delta={} m={} s={}: closed {} vs raw {}",
                    x.name, case.input.delta, case.input.m, case.input.s.c1, closed.value, raw.value
                )
            })?;
            count += 1;
            d_values.insert(case.d_s);
            n_values.insert(case.n);
            grid.insert((case.d_s, case.n));
        }
    }
    ensure(count >= 50, || format!("only {count} inputs"))?;
    ensure(
        d_values == BTreeSet::from([0, 2, 4])
            && n_values == BTreeSet::from([0, 1, 2, 3])
            && grid.len() == 12,
        || format!("coverage {grid:?}"),
    )?;
    Ok(format!(
        "{count} inputs covering all {} (d_s, delta-2m) cells",
        grid.len()
    ))
}

fn criterion_4() -> Outcome {
    let manifolds = [fixture("k3"), k3_lattice_synthetic(), small_synthetic()];
    let (mut even, mut odd) = (0, 0);
    for x in &manifolds {
        for case in pairing_cases(x, 8) {
            for k in 0..=3u32.min(case.n) {
                let closed = blow_up_pairing_closed(&case.input, k).map_err(err)?;
                let polarized = blow_up_pairing_polarized(&case.input, k).map_err(err)?;
                if k % 2 == 1 {
                    ensure(
                        closed.polynomial.is_zero() && polarized.polynomial.is_zero(),
                        || format!("{}: k={k} is not zero", x.name),
                    )?;
                    odd += 1;
                } else {
                    ensure(closed == polarized, || {
                        format!(
                            "{}: k={k} delta={} m={}: {} vs {}",
                            x.name, case.input.delta, case.input.m, closed.value, polarized.value
                        )
                    })?;
                    even += 1;
                }
            }
        }
    }
    ensure(even >= 20 && odd >= 10, || format!("{even} even, {odd} odd"))?;
    Ok(format!("{even} even-k comparisons, {odd} odd-k zeros"))
}

fn criterion_5() -> Outcome {
    let f = builtin("k3").unwrap();
    let x = &f.manifold;
    let (lambda, w) = f.lambda_and_w().map_err(err)?;
    ensure(x.form.square(&lambda).map_err(err)? == -4 && w == lambda, || {
        "default Lambda/w for K3".into()
    })?;
    let report = verify_witten(x, &w, &lambda).map_err(err)?;
    ensure(report.passed(), || format!("{:?}", report.checks))?;
    let d2 = donaldson_invariant(x, &w, &lambda, 2, 0).map_err(err)?;
    ensure(d2 == quadratic_form(&x.form, 2), || format!("D(h^2) = {d2}"))?;
    let dx = donaldson_invariant(x, &w, &lambda, 2, 1).map_err(err)?;
    let point = sw_power_sum(x, &w, 0).map_err(err)?.scale(&int(2));
    ensure(dx == point && dx.constant_term() == int(2), || format!("D(x) = {dx}"))?;
    let series = assemble_donaldson_series(x, &w, &lambda, 3).map_err(err)?;
    let expected = quadratic_form(&x.form, 3)
        .scale(&Rational::new(1.into(), 2.into()))
        .exp_series()
        .map_err(err)?;
    ensure(series == expected, || "series differs from exp(Q/2)".into())?;
    Ok("D(h^2) = Q, D(x) = 2, series = exp(Q/2) through degree 3".into())
}

fn criterion_6() -> Outcome {
    let f = builtin("e3").unwrap();
    let x = &f.manifold;
    let (lambda, w) = f.lambda_and_w().map_err(err)?;
    let report = verify_witten(x, &w, &lambda).map_err(err)?;
    ensure(report.c == 3, || format!("c = {}", report.c))?;
    ensure(report.passed(), || format!("{:?}", report.checks))?;
    ensure(report.table.len() == 5 && report.table.iter().all(|r| r.equal), || {
        "degree table".into()
    })?;
    let series = assemble_donaldson_series(x, &w, &lambda, 4).map_err(err)?;
    ensure(series.homogeneous_part(0).is_zero(), || "degree 0".into())?;
    let v = &w - &lambda;
    let mut vanishing = Vec::new();
    for d in 0..=4u32 {
        if d < 1 || (d as i64 - 3) % 2 != 0 {
            for class in [&v, &w] {
                ensure(sw_vanishing_check(x, class, d).map_err(err)?, || {
                    format!("SW sum does not vanish in degree {d}")
                })?;
            }
            vanishing.push(d);
        }
    }
    Ok(format!("congruence mod h^5 holds, SW vanishing in degrees {vanishing:?}"))
}

fn criterion_7() -> Outcome {
    let mut relations = 0;
    let mut sign_pairs = 0;
    for name in ["k3", "e3", "e5"] {
        let f = builtin(name).unwrap();
        let x = &f.manifold;
        let (lambda, w) = f.lambda_and_w().map_err(err)?;
        let ri = x.r_and_i(&lambda).map_err(err)?;
        let c = x.c_of_x().map_err(err)?;
        let delta = ri.r + 4;
        ensure(delta == c, || format!("{name}: r + 4 = {delta}, c = {c}"))?;
        let t = SpinuData {
            c1: lambda.clone(),
            p1: x.p1_for_degree(delta).map_err(err)?,
            w: w.clone(),
        };
        let (d_a, n_a) = x.dims_asd(&t).map_err(err)?;
        ensure(d_a == 2 * delta, || format!("{name}: d_a = {d_a}"))?;
        ensure(4 * n_a == ri.i - delta, || format!("{name}: n_a = {n_a}"))?;
        ensure(4 * (1 - n_a - delta) == 4 - ri.i - 3 * delta, || {
            format!("{name}: exponent of 2")
        })?;
        for s in &x.basic_classes {
            let level = x.level(&t, s).map_err(err)?;
            ensure(4 * level == delta - x.r_of(&lambda, &s.c1).map_err(err)?, || {
                format!("{name}: level of {}", s.c1)
            })?;
            let t0 = x.reducible_spinu(&t, s).map_err(err)?;
            let (n1, n2) = x.normal_indices(&t0, s).map_err(err)?;
            ensure(
                x.dim_monopoles(&t0).map_err(err)? == 2 * (n1 + n2) + x.dim_sw(s).map_err(err)?,
                || format!("{name}: monopole dimension at {}", s.c1),
            )?;
            relations += 4;
        }

        // w' = w + 2x for three classes x, including one of odd square when
        // the form is odd.
        let rank = x.rank();
        let mut shifts = vec![class(rank, &[(0, 1)]), class(rank, &[(0, 1), (1, 1)])];
        shifts.push(if x.form.is_even() {
            class(rank, &[(rank - 1, 1)])
        } else {
            let odd = (0..rank)
                .find(|&i| x.form.gram()[i][i] % 2 != 0)
                .expect("odd form has an odd diagonal entry");
            class(rank, &[(odd, 1)])
        });
        let top = (c + 1) as u32;
        for shift in shifts {
            let w_prime = &w + &(2 * &shift);
            ensure(
                sign_change_check(x, &w, &w_prime, &lambda, top).map_err(err)?,
                || format!("{name}: sign change for x = {shift}"),
            )?;
            sign_pairs += 1;
        }
    }
    Ok(format!(
        "{relations} dimension/level relations, {sign_pairs} sign-change pairs"
    ))
}

/// Everything the suite reports, as text.
fn suite_report() -> Result<String, String> {
    let mut out = String::new();
    for name in ["k3", "e3", "e5"] {
        let f = builtin(name).unwrap();
        let (lambda, w) = f.lambda_and_w().map_err(err)?;
        let report = verify_witten(&f.manifold, &w, &lambda).map_err(err)?;
        out += &serde_json::to_string(&report).map_err(err)?;
        out.push('\n');
    }
    for x in [k3_lattice_synthetic(), small_synthetic()] {
        for case in pairing_cases(&x, 6) {
            let v = link_pairing_closed(&case.input).map_err(err)?;
            out += &format!("{} {} {} {}\n", x.name, case.input.delta, case.input.m, v.polynomial);
        }
    }
    Ok(out)
}

fn criterion_8() -> Outcome {
    let first = suite_report()?;
    let second = suite_report()?;
    ensure(first == second, || "reports differ between runs".into())?;
    Ok(format!("{} bytes identical across two runs", first.len()))
}

fn main() -> ExitCode {
    let criteria: [Criterion; 8] = [
        ("combinatorial identity sweep", Duration::from_secs(10), criterion_1),
        ("Segre oracle", Duration::from_secs(1), criterion_2),
        ("closed vs raw link pairing", Duration::from_secs(10), criterion_3),
        ("blow-up parity and polarization", Duration::from_secs(5), criterion_4),
        ("K3 end to end", Duration::from_secs(5), criterion_5),
        ("E(3) end to end", Duration::from_secs(10), criterion_6),
        ("structural identities", Duration::from_secs(30), criterion_7),
        ("determinism", Duration::from_secs(30), criterion_8),
    ];
    let mut failures = 0;
    for (i, (name, budget, run)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let outcome = run();
        let elapsed = start.elapsed();
        match outcome {
            Ok(detail) => println!(
                "PASS criterion {}: {name}: {detail} [{:.2}s, budget {}s]",
                i + 1,
                elapsed.as_secs_f64(),
                budget.as_secs()
            ),
            Err(why) => {
                failures += 1;
                println!("FAIL criterion {}: {name}: {why}", i + 1);
            }
        }
    }
    if failures == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}

