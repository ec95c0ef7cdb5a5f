use std::sync::{Arc, OnceLock};

use proptest::prelude::*;
use tracecc::ccc::{
    composition_vector, extract_subcode_first, extract_subcode_second, lfvc_evaluate,
    predicted_ccc_first, predicted_ccc_second, CccError, CompositionVector, Construction,
    ExtractOptions, LfvcVerdict,
};
use tracecc::charsums::quadratic_sum;
use tracecc::codes::{
    build_defining_set_d, build_defining_set_e, build_trace_code, hamming_weight,
    predicted_length_e, predicted_weight_distribution_d, predicted_weight_distribution_e,
    TraceCode,
};
use tracecc::gfpm::{make_field, prime_quadratic_character, Field, FieldElement};

const SHAPES: [(u32, usize); 10] = [
    (3, 1),
    (3, 2),
    (3, 3),
    (3, 4),
    (5, 2),
    (5, 3),
    (7, 2),
    (7, 3),
    (11, 2),
    (13, 1),
];

fn fields() -> &'static [Field] {
    static FIELDS: OnceLock<Vec<Field>> = OnceLock::new();
    FIELDS.get_or_init(|| {
        SHAPES
            .iter()
            .map(|&(p, m)| make_field(p, m, None).unwrap())
            .collect()
    })
}

/// Small trace codes, built once: every D(alpha) and E over a few fields.
fn codes() -> &'static [Arc<TraceCode>] {
    static CODES: OnceLock<Vec<Arc<TraceCode>>> = OnceLock::new();
    CODES.get_or_init(|| {
        let mut out = Vec::new();
        for (p, m) in [(3, 2), (3, 3), (3, 4), (5, 2), (5, 3), (7, 2)] {
            let f = make_field(p, m, None).unwrap();
            for alpha in 0..p {
                out.push(Arc::new(
                    build_trace_code(build_defining_set_d(&f, alpha).unwrap()).unwrap(),
                ));
            }
            if let Ok(e) = build_defining_set_e(&f).and_then(build_trace_code) {
                out.push(Arc::new(e));
            }
        }
        out
    })
}

/// A field from the pool together with `k` of its elements.
fn elements(k: usize) -> impl Strategy<Value = (Field, Vec<FieldElement>)> {
    (0..SHAPES.len(), prop::collection::vec(any::<u64>(), k)).prop_map(|(i, raw)| {
        let f = fields()[i].clone();
        let xs = raw
            .into_iter()
            .map(|r| FieldElement::from_rank(&f, r % f.q()))
            .collect();
        (f, xs)
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(512))]

    #[test]
    fn field_axioms((_f, xs) in elements(3)) {
        let (a, b, c) = (&xs[0], &xs[1], &xs[2]);
        prop_assert_eq!(a + b, b + a);
        prop_assert_eq!(a * b, b * a);
        prop_assert_eq!(&(a + b) + c, a + &(b + c));
        prop_assert_eq!(&(a * b) * c, a * &(b * c));
        prop_assert_eq!(a * &(b + c), &(a * b) + &(a * c));
        prop_assert!((a - a).is_zero());
        prop_assert_eq!(&(-a) + a, FieldElement::zero(a.field()));
        if !a.is_zero() {
            prop_assert!((a * &a.inv().unwrap()).is_one());
            prop_assert_eq!(&(b * a).try_div(a).unwrap(), b);
        } else {
            prop_assert!(a.inv().is_err());
        }
    }

    #[test]
    fn rank_round_trips((f, xs) in elements(1)) {
        let x = &xs[0];
        prop_assert!(x.rank() < f.q());
        prop_assert_eq!(FieldElement::from_rank(&f, x.rank()), x.clone());
        prop_assert_eq!(f.rank_of(&f.coeffs_of_rank(x.rank())), x.rank());
        prop_assert_eq!(x.in_prime_field(), x.rank() < f.p() as u64);
    }

    #[test]
    fn frobenius_is_a_field_automorphism((f, xs) in elements(2)) {
        let (a, b) = (&xs[0], &xs[1]);
        prop_assert_eq!((a + b).frobenius(), &a.frobenius() + &b.frobenius());
        prop_assert_eq!((a * b).frobenius(), &a.frobenius() * &b.frobenius());
        prop_assert_eq!(&a.pow(f.q()), a);
        let mut y = a.clone();
        for _ in 0..f.m() {
            y = y.frobenius();
        }
        prop_assert_eq!(&y, a);
    }

    #[test]
    fn trace_is_linear_and_frobenius_invariant((f, xs) in elements(2), c in 0u32..13) {
        let (a, b) = (&xs[0], &xs[1]);
        let p = f.p();
        prop_assert!(a.trace() < p);
        prop_assert_eq!((a + b).trace(), (a.trace() + b.trace()) % p);
        let c = c % p;
        prop_assert_eq!((&FieldElement::from_prime(&f, c) * a).trace(), c * a.trace() % p);
        prop_assert_eq!(a.frobenius().trace(), a.trace());
        let w = f.trace_functional(b.coeffs());
        prop_assert_eq!(f.apply_functional(&w, a.coeffs()), (a * b).trace());
    }

    #[test]
    fn trace_of_prime_field_elements((f, _) in elements(0), c in 0u32..13) {
        let c = c % f.p();
        let expected = (c as u64 * f.m() as u64 % f.p() as u64) as u32;
        prop_assert_eq!(FieldElement::from_prime(&f, c).trace(), expected);
    }

    #[test]
    fn quadratic_character_is_multiplicative((_f, xs) in elements(2)) {
        let (a, b) = (&xs[0], &xs[1]);
        prop_assert_eq!((a * b).quadratic_character(), a.quadratic_character() * b.quadratic_character());
        if !a.is_zero() {
            prop_assert_eq!(a.square().quadratic_character(), 1);
        } else {
            prop_assert_eq!(a.quadratic_character(), 0);
        }
    }

    /// On F_p the quadratic character of F_q is trivial for even m and
    /// agrees with the Legendre symbol for odd m.
    #[test]
    fn quadratic_character_restricted_to_prime_field((f, _) in elements(0), c in 1u32..13) {
        let c = 1 + (c - 1) % (f.p() - 1);
        let eta = FieldElement::from_prime(&f, c).quadratic_character();
        let expected = if f.m() % 2 == 0 { 1 } else { prime_quadratic_character(f.p(), c) };
        prop_assert_eq!(eta, expected);
    }

    #[test]
    fn quadratic_sums_match_closed_form((_f, xs) in elements(3)) {
        prop_assume!(!xs[0].is_zero());
        prop_assert!(quadratic_sum(&xs[0], &xs[1], &xs[2]).is_ok());
    }

    #[test]
    fn trace_codes_are_linear(i in 0..codes().len(), a in any::<u64>(), b in any::<u64>(), c in 0u32..7) {
        let code = &codes()[i];
        let f = code.field();
        let p = f.p();
        let c = c % p;
        let (x, y) = (FieldElement::from_rank(f, a % f.q()), FieldElement::from_rank(f, b % f.q()));
        let z = &(&FieldElement::from_prime(f, c) * &x) + &y;
        let expected: Vec<u8> = code
            .codeword(&x)
            .iter()
            .zip(code.codeword(&y))
            .map(|(&u, &v)| ((c * u as u32 + v as u32) % p) as u8)
            .collect();
        prop_assert_eq!(code.codeword(&z), &expected[..]);
        prop_assert!(code.codeword(&FieldElement::zero(f)).iter().all(|&s| s == 0));
    }

    #[test]
    fn composition_counts_every_symbol(word in prop::collection::vec(0u8..7, 0..64)) {
        let omega = composition_vector(&word, 7);
        prop_assert_eq!(omega.length(), word.len() as u64);
        prop_assert_eq!(hamming_weight(&word) as u64, word.len() as u64 - omega.omega[0]);
    }

    #[test]
    fn lfvc_verdict_follows_denominator(
        omega in prop::collection::vec(0u64..40, 2..8),
        size in 1u64..5000,
        d in 1u64..200,
    ) {
        let n: u64 = omega.iter().sum();
        prop_assume!(n > 0);
        let omega = CompositionVector { omega };
        let r = lfvc_evaluate(n, size, d, &omega).unwrap();
        let den = (n * d) as i128 - (n * n) as i128 + omega.sum_of_squares() as i128;
        prop_assert_eq!(r.denominator, den);
        match r.verdict {
            LfvcVerdict::BoundInapplicable => {
                prop_assert!(den <= 0);
                prop_assert!(r.bound.is_none());
            }
            LfvcVerdict::Optimal => prop_assert_eq!(size as i128 * den, (n * d) as i128),
            LfvcVerdict::NotOptimal => {
                prop_assert!(den > 0);
                prop_assert_ne!(size as i128 * den, (n * d) as i128);
            }
        }
        if let Some(b) = r.bound {
            prop_assert_eq!(b.numerator * den, b.denominator * (n * d) as i128);
        }
        let short = CompositionVector { omega: vec![n + 1] };
        prop_assert!(
            matches!(lfvc_evaluate(n, size, d, &short), Err(CccError::CompositionLengthMismatch { .. })),
            "a composition of the wrong length must be rejected"
        );
    }

    #[test]
    fn predicted_distributions_count_every_codeword(p in prop::sample::select(vec![3u32, 5, 7, 11, 13]), m in 2usize..7, alpha in 0u32..13) {
        let q = (p as u64).pow(m as u32);
        let alpha = alpha % p;
        let wd = predicted_weight_distribution_d(p, m, alpha).unwrap();
        // distinct codewords: D(0) spans a hyperplane, so its code has dimension m - 1
        let dimension = if alpha == 0 { m - 1 } else { m };
        prop_assert_eq!(wd.total(), (p as u64).pow(dimension as u32));
        prop_assert_eq!(wd.frequency(0), 1);
        let first = predicted_ccc_first(p, m, alpha).unwrap();
        prop_assert_eq!(first.omega.length(), first.n);
        prop_assert!(first.d <= first.n);
        if m % 2 == 0 && predicted_length_e(p, m).unwrap() > 0 {
            let e = predicted_weight_distribution_e(p, m).unwrap();
            prop_assert_eq!(e.total(), q);
            for which in [Construction::SecondS, Construction::SecondComplement] {
                let s = predicted_ccc_second(p, m, which).unwrap();
                prop_assert_eq!(s.omega.length(), s.n);
                prop_assert!(s.d <= s.n);
            }
        }
    }
}

#[test]
fn subcodes_have_constant_composition_and_predicted_parameters() {
    for code in codes() {
        let f = code.field();
        let (p, m) = (f.p(), f.m());
        let subs = match code.defining_set().alpha {
            Some(alpha) => vec![(
                extract_subcode_first(code, ExtractOptions::default()).unwrap(),
                predicted_ccc_first(p, m, alpha).unwrap(),
            )],
            None => [Construction::SecondS, Construction::SecondComplement]
                .into_iter()
                .map(|w| {
                    (
                        extract_subcode_second(code, w, ExtractOptions::default()).unwrap(),
                        predicted_ccc_second(p, m, w).unwrap(),
                    )
                })
                .collect(),
        };
        for (sub, predicted) in subs {
            assert_eq!(
                sub.parameters(),
                predicted,
                "p={p} m={m} {}",
                sub.construction()
            );
            for w in sub.words() {
                assert_eq!(&composition_vector(w, p), sub.composition());
            }
            assert_eq!(sub.distance_matches_ambient(), Some(true));
        }
    }
}
