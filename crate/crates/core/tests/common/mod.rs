//! Fixtures and admissible pairing inputs shared by the integration tests.

#![allow(dead_code)]

use dsw_core::fixture::builtin;
use dsw_core::lattice::{CohomologyClass, IntersectionForm};
use dsw_core::manifold::{FourManifoldData, SpincData, SpinuData};
use dsw_core::pairings::PairingInput;

pub fn class(rank: usize, entries: &[(usize, i64)]) -> CohomologyClass {
    let mut v = vec![0; rank];
    for &(i, c) in entries {
        v[i] = c;
    }
    CohomologyClass::new(v)
}

pub fn fixture(name: &str) -> FourManifoldData {
    builtin(name).expect("built-in fixture").manifold
}

/// K3 lattice with classes of `d_s = 2` and `d_s = 4`.
pub fn k3_lattice_synthetic() -> FourManifoldData {
    FourManifoldData {
        name: "K3 lattice, d_s = 2, 4".into(),
        basic_classes: vec![
            SpincData::new(class(22, &[(0, 2), (1, 2)]), 1),
            SpincData::new(class(22, &[(0, 2), (1, 4)]), 2),
        ],
        ..fixture("k3")
    }
}

/// `3H + <-1>`: chi = 9, sigma = -1, with classes of `d_s = 0, 2, 4`.
pub fn small_synthetic() -> FourManifoldData {
    let h = IntersectionForm::hyperbolic();
    FourManifoldData {
        name: "3H+<-1>".into(),
        chi: 9,
        sigma: -1,
        form: IntersectionForm::direct_sum(&[
            h.clone(),
            h.clone(),
            h,
            IntersectionForm::diagonal(&[-1]),
        ]),
        basic_classes: vec![
            SpincData::new(class(7, &[(0, 2), (1, 4), (6, 1)]), 1),
            SpincData::new(class(7, &[(0, 2), (1, 6), (6, 1)]), -1),
            SpincData::new(class(7, &[(0, 2), (1, 8), (6, 1)]), 3),
        ],
    }
}

pub struct Case<'a> {
    pub input: PairingInput<'a>,
    pub d_s: i64,
    pub n: u32,
}

/// Admissible level-one pairing inputs: `Λ` ranges over a small box in the
/// first coordinates, `t'` is the level-one structure over `(s, Λ)` with
/// `w = Λ + c1(s)`, and
/// `(delta, m)` run over the allowed range with `delta - 2m <= 3`.
pub fn pairing_cases(x: &FourManifoldData, per_class: usize) -> Vec<Case<'_>> {
    let rank = x.rank();
    let h = CohomologyClass::new((0..rank as i64).map(|i| i % 5 - 2).collect());
    let mut cases = Vec::new();
    for s in &x.basic_classes {
        let d_s = x.dim_sw(s).unwrap();
        let mut taken = 0;
        'box_: for a in -2i64..=2 {
            for b in -2i64..=3 {
                for last in [0i64, 1, -1, 3] {
                    let mut lambda = class(rank, &[(0, a), (1, b)]);
                    if rank % 2 == 1 {
                        lambda = &lambda + &class(rank, &[(rank - 1, last)]);
                    } else if last != 0 {
                        continue;
                    }
                    let diff = &s.c1 - &lambda;
                    let t_prime = SpinuData {
                        c1: lambda.clone(),
                        p1: x.form.square(&diff).unwrap() - 4,
                        w: &lambda + &s.c1,
                    };
                    let Ok((d_a, n_a)) = x.dims_asd(&t_prime) else {
                        continue;
                    };
                    let top2 = d_a + 2 * n_a - 2;
                    if top2 < 0 || top2 % 2 != 0 {
                        continue;
                    }
                    let top = (top2 / 2) as u32;
                    for delta in top.saturating_sub(5)..=top {
                        for m in delta.saturating_sub(3).div_ceil(2)..=delta / 2 {
                            cases.push(Case {
                                input: PairingInput {
                                    manifold: x,
                                    t_prime: t_prime.clone(),
                                    s: s.clone(),
                                    delta,
                                    m,
                                    eta: top - delta,
                                    h: h.clone(),
                                },
                                d_s,
                                n: delta - 2 * m,
                            });
                            taken += 1;
                            if taken >= per_class {
                                break 'box_;
                            }
                        }
                    }
                }
            }
        }
    }
    cases
}
