use num_bigint::BigInt;
use num_traits::{One, Zero};
use proptest::prelude::*;

use dsw_core::combinatorics::{
    ext_binomial, jacobi_at_zero, pochhammer, triple_sum_jacobi_params, triple_sum_lhs,
    vandermonde_check,
};
use dsw_core::fixture::builtin;
use dsw_core::lattice::{CohomologyClass, IntersectionForm};
use dsw_core::manifold::FourManifoldData;
use dsw_core::pairings::{link_pairing_closed, link_pairing_raw, PairingInput};
use dsw_core::polyring::TruncatedPolynomial;
use dsw_core::witten::{donaldson_invariant, donaldson_moment, sign_change_check};
use dsw_core::Rational;

mod common;

fn rat(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

// combinatorics ---------------------------------------------------------------

proptest! {
    #[test]
    fn vandermonde(m in -12i64..12, n in -12i64..12, p in 0u32..14) {
        prop_assert!(vandermonde_check(m, n, p));
    }

    #[test]
    fn triple_sum_is_jacobi(a in -8i64..12, m in -8i64..8, n in -8i64..8, d in 0u32..10, v in 0u8..4) {
        let rhs = rat(1 << d) * jacobi_at_zero(triple_sum_jacobi_params(a, m, n, d));
        prop_assert_eq!(triple_sum_lhs(a, m, n, d, v), rhs);
    }

    /// `(-r)_l = (-1)^l (r - l + 1)_l`.
    #[test]
    fn pochhammer_reflection(r in -20i64..20, l in 0u32..12) {
        let sign = if l % 2 == 0 { 1 } else { -1 };
        prop_assert_eq!(pochhammer(-r, l), pochhammer(r - i64::from(l) + 1, l) * sign);
    }

    /// `binom(r, l) = (-1)^l binom(l - r - 1, l)` and, for `r >= 0`,
    /// `binom(r, l) = binom(r, r - l)`.
    #[test]
    fn binomial_reversal(r in -20i64..20, l in 0i64..15) {
        let sign = if l % 2 == 0 { 1 } else { -1 };
        prop_assert_eq!(ext_binomial(r, l), ext_binomial(l - r - 1, l) * sign);
        if r >= 0 {
            prop_assert_eq!(ext_binomial(r, l), ext_binomial(r, r - l));
        }
    }
}

// polyring --------------------------------------------------------------------

const NV: usize = 3;
const BOUND: u32 = 4;

fn poly(constant: bool) -> impl Strategy<Value = TruncatedPolynomial> {
    prop::collection::vec(((0u32..3, 0u32..3, 0u32..3), -5i64..=5), 0..6).prop_map(
        move |terms| {
            let terms = terms
                .into_iter()
                .filter(|((a, b, c), _)| constant || a + b + c > 0)
                .map(|((a, b, c), k)| (vec![a, b, c], rat(k)));
            TruncatedPolynomial::from_terms(NV, BOUND, terms)
        },
    )
}

proptest! {
    #[test]
    fn mul_commutes(p in poly(true), q in poly(true)) {
        prop_assert_eq!(p.mul(&q).unwrap(), q.mul(&p).unwrap());
    }

    #[test]
    fn mul_associates(p in poly(true), q in poly(true), r in poly(true)) {
        let left = p.mul(&q).unwrap().mul(&r).unwrap();
        let right = p.mul(&q.mul(&r).unwrap()).unwrap();
        prop_assert_eq!(left, right);
    }

    #[test]
    fn exp_is_additive(p in poly(false), q in poly(false)) {
        let lhs = p.add(&q).unwrap().exp_series().unwrap();
        let rhs = p.exp_series().unwrap().mul(&q.exp_series().unwrap()).unwrap();
        prop_assert_eq!(lhs, rhs);
    }

    #[test]
    fn inverse_series_inverts(p in poly(false), c in prop::sample::select(vec![-3i64, -1, 1, 2, 5])) {
        let p = p.add(&TruncatedPolynomial::constant(NV, BOUND, rat(c))).unwrap();
        let inv = p.inverse_series().unwrap();
        prop_assert_eq!(p.mul(&inv).unwrap(), TruncatedPolynomial::one(NV, BOUND));
    }
}

// lattice ---------------------------------------------------------------------

fn form() -> impl Strategy<Value = IntersectionForm> {
    let piece = prop_oneof![
        Just(IntersectionForm::hyperbolic()),
        Just(IntersectionForm::diagonal(&[1])),
        Just(IntersectionForm::diagonal(&[-1])),
        Just(IntersectionForm::negative_e8()),
    ];
    prop::collection::vec(piece, 1..5).prop_map(|parts| IntersectionForm::direct_sum(&parts))
}

proptest! {
    #[test]
    fn gram_is_symmetric_and_unimodular(f in form()) {
        let g = f.gram();
        for (i, row) in g.iter().enumerate() {
            for (j, &entry) in row.iter().enumerate() {
                prop_assert_eq!(entry, g[j][i]);
            }
        }
        prop_assert!(f.is_unimodular());
        prop_assert_eq!(f.signature(), f.b_plus() as i64 - f.b_minus() as i64);
    }

    #[test]
    fn characteristic_vector_is_characteristic(f in form(), shift in prop::collection::vec(-2i64..=2, 32)) {
        let v = f.characteristic_vector().unwrap();
        prop_assert!(f.is_characteristic(&v).unwrap());
        // Characteristic classes form a coset of 2H^2.
        let x = CohomologyClass::new(shift[..f.rank()].to_vec());
        prop_assert!(f.is_characteristic(&(&v + &(2 * &x))).unwrap());
        // sigma = v^2 mod 8.
        prop_assert_eq!((f.square(&v).unwrap() - f.signature()).rem_euclid(8), 0);
    }

    #[test]
    fn blow_up_stays_unimodular(f in form()) {
        let (blown, e) = f.blow_up();
        prop_assert!(blown.is_unimodular());
        prop_assert_eq!(blown.rank(), f.rank() + 1);
        prop_assert_eq!(blown.signature(), f.signature() - 1);
        prop_assert_eq!(blown.square(&e).unwrap(), -1);
    }
}

// pairings --------------------------------------------------------------------

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn closed_equals_raw_at_random_h(
        which in 0usize..3,
        pick in any::<prop::sample::Index>(),
        coords in prop::collection::vec(-4i64..=4, 22),
    ) {
        let x = match which {
            0 => common::fixture("k3"),
            1 => common::k3_lattice_synthetic(),
            _ => common::small_synthetic(),
        };
        let cases = common::pairing_cases(&x, 10);
        let case = &cases[pick.index(cases.len())];
        let inp = PairingInput {
            h: CohomologyClass::new(coords[..x.rank()].to_vec()),
            ..case.input.clone()
        };
        prop_assert_eq!(link_pairing_closed(&inp).unwrap(), link_pairing_raw(&inp).unwrap());
    }

    /// The pairing is homogeneous of degree `delta - 2m` in `h`, so
    /// `h -> k h` scales the value by `k^(delta - 2m)`.
    #[test]
    fn pairing_is_homogeneous(
        pick in any::<prop::sample::Index>(),
        coords in prop::collection::vec(-3i64..=3, 22),
        k in -3i64..=3,
    ) {
        let x = common::k3_lattice_synthetic();
        let cases = common::pairing_cases(&x, 10);
        let case = &cases[pick.index(cases.len())];
        let h = CohomologyClass::new(coords);
        let at = |h: CohomologyClass| {
            link_pairing_closed(&PairingInput { h, ..case.input.clone() }).unwrap()
        };
        let base = at(h.clone());
        prop_assert!(base.polynomial.terms().all(|(mono, _)| mono.iter().sum::<u32>() == case.n));
        let scaled = at(k * &h);
        prop_assert_eq!(scaled.value, base.value * rat(k.pow(case.n)));
    }
}

// witten ----------------------------------------------------------------------

/// The same manifold with its lattice basis permuted by `perm` (new index
/// `i` is old index `perm[i]`) and its basic classes listed in reverse.
fn relabel(x: &FourManifoldData, perm: &[usize]) -> FourManifoldData {
    let g = x.form.gram();
    let gram = perm
        .iter()
        .map(|&i| perm.iter().map(|&j| g[i][j]).collect())
        .collect();
    let mut out = x.clone();
    out.form = IntersectionForm::from_gram(gram).unwrap();
    out.basic_classes.reverse();
    for s in &mut out.basic_classes {
        s.c1 = permute(&s.c1, perm);
    }
    out
}

fn permute(c: &CohomologyClass, perm: &[usize]) -> CohomologyClass {
    CohomologyClass::new(perm.iter().map(|&i| c.coords()[i]).collect())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn moment_is_relabeling_invariant(
        perm in Just((0..34).collect::<Vec<usize>>()).prop_shuffle(),
        m in 0u32..=1,
        point in prop::collection::vec(-3i64..=3, 34),
    ) {
        let f = builtin("e3").unwrap();
        let (lambda, w) = f.lambda_and_w().unwrap();
        let x = &f.manifold;
        let y = relabel(x, &perm);
        let before = donaldson_moment(x, &w, &lambda, 3, m).unwrap();
        let after =
            donaldson_moment(&y, &permute(&w, &perm), &permute(&lambda, &perm), 3, m).unwrap();
        let moved: Vec<i64> = perm.iter().map(|&i| point[i]).collect();
        prop_assert_eq!(
            before.evaluate_integers(&point).unwrap(),
            after.evaluate_integers(&moved).unwrap()
        );
    }

    /// Outside the degrees allowed by the parity law every invariant is zero.
    #[test]
    fn parity_law_zeros(which in 0usize..3, shift in prop::collection::vec(-1i64..=1, 58)) {
        let f = builtin(["k3", "e3", "e5"][which]).unwrap();
        let (lambda, w) = f.lambda_and_w().unwrap();
        let x = &f.manifold;
        let w = &w + &(2 * &CohomologyClass::new(shift[..x.rank()].to_vec()));
        let top = x.r_and_i(&lambda).unwrap().r + 4;
        for delta in 0..=top as u32 {
            for m in 0..=delta / 2 {
                let value = donaldson_invariant(x, &w, &lambda, delta, m).unwrap();
                if !x.degree_parity_ok(&w, 2 * i64::from(delta)).unwrap() {
                    prop_assert!(value.is_zero());
                }
            }
        }
    }

    #[test]
    fn sign_change_law(which in 0usize..2, shift in prop::collection::vec(-2i64..=2, 34)) {
        let f = builtin(["k3", "e3"][which]).unwrap();
        let (lambda, w) = f.lambda_and_w().unwrap();
        let x = &f.manifold;
        let w_prime = &w + &(2 * &CohomologyClass::new(shift[..x.rank()].to_vec()));
        let top = (x.c_of_x().unwrap() + 1) as u32;
        prop_assert!(sign_change_check(x, &w, &w_prime, &lambda, top).unwrap());
    }
}

#[test]
fn helpers_are_consistent() {
    assert!(ext_binomial(-1, 3) == BigInt::from(-1));
    assert!(pochhammer(0, 0).is_one());
    assert!(TruncatedPolynomial::zero(NV, BOUND).is_zero());
    assert!(Rational::zero().is_zero());
}
