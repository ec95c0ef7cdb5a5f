//! Additive characters, quadratic Gauss sums and trace fiber counts.
//!
//! Every quantity is computed twice: once by direct summation over the field
//! in canonical order, once from its closed form. The closed forms use exact
//! quarter-turn rotations for powers of `i`.

use std::f64::consts::TAU;

use num_complex::Complex64;
use serde::Serialize;
use thiserror::Error;

use crate::gfpm::{enumerate_field, prime_quadratic_character, Field, FieldElement, FieldError};

pub type ComplexValue = Complex64;

/// Per-component tolerance for comparing a direct sum against its closed form.
pub const EPSILON: f64 = 1e-9;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum CharSumError {
    #[error("closed form mismatch: evaluated {evaluated}, closed form {closed_form}")]
    ClosedFormMismatch {
        evaluated: ComplexValue,
        closed_form: ComplexValue,
    },
    #[error("leading coefficient of the quadratic is zero")]
    ZeroLeadingCoefficient,
    #[error("fiber count mismatch: {0:?}")]
    PredictionMismatch(Box<FiberCountReport>),
    #[error(transparent)]
    Field(#[from] FieldError),
}

/// `i^k`, exactly.
pub fn i_pow(k: u64) -> ComplexValue {
    match k % 4 {
        0 => Complex64::new(1.0, 0.0),
        1 => Complex64::new(0.0, 1.0),
        2 => Complex64::new(-1.0, 0.0),
        _ => Complex64::new(0.0, -1.0),
    }
}

pub(crate) fn neg_one_pow(k: u64) -> i64 {
    if k.is_multiple_of(2) {
        1
    } else {
        -1
    }
}

/// `((p - 1) / 2)^2`, the exponent shared by the closed forms below.
pub(crate) fn half_square(p: u32) -> u64 {
    let h = (p as u64 - 1) / 2;
    h * h
}

/// Table of the `p`-th roots of unity, `table[k] = exp(2 pi i k / p)`.
#[derive(Debug, Clone)]
pub struct RootsOfUnity {
    roots: Vec<ComplexValue>,
}

impl RootsOfUnity {
    pub fn new(p: u32) -> Self {
        let roots = (0..p)
            .map(|k| Complex64::from_polar(1.0, TAU * k as f64 / p as f64))
            .collect();
        Self { roots }
    }

    pub fn get(&self, k: u32) -> ComplexValue {
        self.roots[k as usize % self.roots.len()]
    }
}

/// `chi_1(x) = zeta_p^{Tr(x)}`.
pub fn additive_character(x: &FieldElement) -> ComplexValue {
    prime_additive_character(x.field().p(), x.trace())
}

/// `chi_1-bar(u) = zeta_p^u` on the prime field.
pub fn prime_additive_character(p: u32, u: u32) -> ComplexValue {
    Complex64::from_polar(1.0, TAU * (u % p) as f64 / p as f64)
}

/// A direct sum next to its closed form.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SumCheck {
    pub evaluated: ComplexValue,
    pub closed_form: ComplexValue,
}

impl SumCheck {
    /// Largest per-component absolute deviation.
    pub fn deviation(&self) -> f64 {
        let diff = self.evaluated - self.closed_form;
        diff.re.abs().max(diff.im.abs())
    }

    pub fn agrees(&self) -> bool {
        self.deviation() <= EPSILON
    }

    fn into_result(self) -> Result<Self, CharSumError> {
        if self.agrees() {
            Ok(self)
        } else {
            Err(CharSumError::ClosedFormMismatch {
                evaluated: self.evaluated,
                closed_form: self.closed_form,
            })
        }
    }
}

/// `(-1)^{m-1} i^{((p-1)/2)^2 m} sqrt(q)`.
pub fn gauss_sum_fq_closed_form(p: u32, m: usize) -> ComplexValue {
    let q = (p as f64).powi(m as i32);
    i_pow(half_square(p) * m as u64) * (neg_one_pow(m as u64 - 1) as f64 * q.sqrt())
}

/// `i^{((p-1)/2)^2} sqrt(p)`.
pub fn gauss_sum_fp_closed_form(p: u32) -> ComplexValue {
    i_pow(half_square(p)) * (p as f64).sqrt()
}

/// `G(eta, chi_1) = sum_x eta(x) chi_1(x)` by direct summation.
pub fn gauss_sum_fq_direct(field: &Field) -> ComplexValue {
    let roots = RootsOfUnity::new(field.p());
    enumerate_field(field, true).fold(Complex64::new(0.0, 0.0), |acc, x| {
        acc + roots.get(x.trace()) * x.quadratic_character() as f64
    })
}

pub fn gauss_sum_fq(field: &Field) -> Result<SumCheck, CharSumError> {
    SumCheck {
        evaluated: gauss_sum_fq_direct(field),
        closed_form: gauss_sum_fq_closed_form(field.p(), field.m()),
    }
    .into_result()
}

pub fn gauss_sum_fp(p: u32) -> Result<SumCheck, CharSumError> {
    let roots = RootsOfUnity::new(p);
    let evaluated = (1..p).fold(Complex64::new(0.0, 0.0), |acc, u| {
        acc + roots.get(u) * prime_quadratic_character(p, u) as f64
    });
    SumCheck {
        evaluated,
        closed_form: gauss_sum_fp_closed_form(p),
    }
    .into_result()
}

/// Checks `sum_x chi_1(a2 x^2 + a1 x + a0)` against
/// `chi_1(a0 - a1^2/(4 a2)) eta(a2) G(eta, chi_1)`.
pub fn quadratic_sum(
    a2: &FieldElement,
    a1: &FieldElement,
    a0: &FieldElement,
) -> Result<SumCheck, CharSumError> {
    let (evaluated, closed_form) = QuadraticSums::new(a2.field()).evaluate(a2, a1, a0)?;
    SumCheck {
        evaluated,
        closed_form,
    }
    .into_result()
}

/// Reusable tables for evaluating many quadratic sums over one field.
pub struct QuadraticSums {
    field: Field,
    roots: RootsOfUnity,
    elements: Vec<FieldElement>,
    squares: Vec<FieldElement>,
    gauss: ComplexValue,
}

impl QuadraticSums {
    pub fn new(field: &Field) -> Self {
        let elements: Vec<FieldElement> = enumerate_field(field, false).collect();
        let squares = elements.iter().map(FieldElement::square).collect();
        Self {
            field: field.clone(),
            roots: RootsOfUnity::new(field.p()),
            elements,
            squares,
            gauss: gauss_sum_fq_closed_form(field.p(), field.m()),
        }
    }

    /// Returns `(direct sum, closed form)`.
    pub fn evaluate(
        &self,
        a2: &FieldElement,
        a1: &FieldElement,
        a0: &FieldElement,
    ) -> Result<(ComplexValue, ComplexValue), CharSumError> {
        if a2.is_zero() {
            return Err(CharSumError::ZeroLeadingCoefficient);
        }
        for a in [a2, a1, a0] {
            if **a.field() != *self.field {
                return Err(FieldError::FieldMismatch.into());
            }
        }
        let f = &self.field;
        // Tr(a2 x^2 + a1 x + a0) = Tr(a2 x^2) + Tr(a1 x) + Tr(a0)
        let w2 = f.trace_functional(a2.coeffs());
        let w1 = f.trace_functional(a1.coeffs());
        let t0 = a0.trace();
        let p = f.p();
        let evaluated = self.elements.iter().zip(&self.squares).fold(
            Complex64::new(0.0, 0.0),
            |acc, (x, x2)| {
                let t =
                    f.apply_functional(&w2, x2.coeffs()) + f.apply_functional(&w1, x.coeffs()) + t0;
                acc + self.roots.get(t % p)
            },
        );

        let four = FieldElement::from_prime(f, 4);
        let shift = a1.square().try_div(&(&four * a2))?;
        let constant = a0 - &shift;
        let closed_form =
            self.roots.get(constant.trace()) * a2.quadratic_character() as f64 * self.gauss;
        Ok((evaluated, closed_form))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum FiberKind {
    LinearTrace,
    QuadraticTrace,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct FiberCountReport {
    pub alpha: u32,
    pub count_enumerated: u64,
    pub count_predicted: u64,
    pub kind: FiberKind,
}

impl FiberCountReport {
    fn into_result(self) -> Result<Self, CharSumError> {
        if self.count_enumerated == self.count_predicted {
            Ok(self)
        } else {
            Err(CharSumError::PredictionMismatch(Box::new(self)))
        }
    }
}

/// `p^{m-1}` for every `alpha`.
pub fn predicted_trace_fiber(p: u32, m: usize) -> u64 {
    (p as u64).pow(m as u32 - 1)
}

/// Closed form for `#{x : Tr(x^2) = alpha}`, split on the parity of `m`
/// and on whether `alpha` is zero.
pub fn predicted_trace_square_fiber(p: u32, m: usize, alpha: u32) -> u64 {
    let pi = p as i64;
    let mi = m as u64;
    let base = pi.pow(m as u32 - 1);
    let hs = half_square(p);
    let alpha = alpha % p;
    let value = match (m.is_multiple_of(2), alpha == 0) {
        (false, true) => base,
        (true, true) => base - neg_one_pow(hs * mi / 2) * (pi - 1) * pi.pow((m as u32 - 2) / 2),
        (false, false) => {
            let eta = prime_quadratic_character(p, p - alpha) as i64;
            base + eta * neg_one_pow(hs * (mi + 1) / 2) * pi.pow((m as u32 - 1) / 2)
        }
        (true, false) => base + neg_one_pow(hs * mi / 2) * pi.pow((m as u32 - 2) / 2),
    };
    debug_assert!(value >= 0);
    value as u64
}

pub fn count_trace_fiber(field: &Field, alpha: u32) -> Result<FiberCountReport, CharSumError> {
    let alpha = alpha % field.p();
    let count = enumerate_field(field, false)
        .filter(|x| x.trace() == alpha)
        .count() as u64;
    FiberCountReport {
        alpha,
        count_enumerated: count,
        count_predicted: predicted_trace_fiber(field.p(), field.m()),
        kind: FiberKind::LinearTrace,
    }
    .into_result()
}

pub fn count_trace_square_fiber(
    field: &Field,
    alpha: u32,
) -> Result<FiberCountReport, CharSumError> {
    let alpha = alpha % field.p();
    let count = enumerate_field(field, false)
        .filter(|x| x.square().trace() == alpha)
        .count() as u64;
    FiberCountReport {
        alpha,
        count_enumerated: count,
        count_predicted: predicted_trace_square_fiber(field.p(), field.m(), alpha),
        kind: FiberKind::QuadraticTrace,
    }
    .into_result()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gfpm::make_field;

    fn close(a: ComplexValue, b: ComplexValue) -> bool {
        (a.re - b.re).abs() < EPSILON && (a.im - b.im).abs() < EPSILON
    }

    #[test]
    fn character_at_zero_and_orthogonality() {
        let f = make_field(3, 2, None).unwrap();
        assert!(close(
            additive_character(&FieldElement::zero(&f)),
            Complex64::new(1.0, 0.0)
        ));
        let total = enumerate_field(&f, false).fold(Complex64::new(0.0, 0.0), |acc, x| {
            acc + additive_character(&x)
        });
        assert!(close(total, Complex64::new(0.0, 0.0)));
        // Tr(t) = 0 in F_9 with modulus x^2 + 1
        let t = FieldElement::generator(&f);
        assert!(close(additive_character(&t), Complex64::new(1.0, 0.0)));
    }

    #[test]
    fn gauss_sum_small_cases() {
        let s3 = 3f64.sqrt();
        // p = 3, m = 1: zeta_3 - zeta_3^2
        let zeta = prime_additive_character(3, 1);
        let direct = zeta - zeta * zeta;
        assert!(close(direct, Complex64::new(0.0, s3)));
        let f3 = make_field(3, 1, None).unwrap();
        let g = gauss_sum_fq(&f3).unwrap();
        assert!(close(g.evaluated, Complex64::new(0.0, s3)));

        let f9 = make_field(3, 2, None).unwrap();
        let g = gauss_sum_fq(&f9).unwrap();
        assert!(close(g.evaluated, Complex64::new(3.0, 0.0)));
        assert!(close(g.closed_form, Complex64::new(3.0, 0.0)));

        let f81 = make_field(3, 4, None).unwrap();
        let g = gauss_sum_fq(&f81).unwrap();
        assert!(close(g.evaluated, Complex64::new(-9.0, 0.0)));
    }

    #[test]
    fn prime_gauss_sums() {
        let g3 = gauss_sum_fp(3).unwrap();
        assert!(close(g3.evaluated, Complex64::new(0.0, 3f64.sqrt())));
        let g5 = gauss_sum_fp(5).unwrap();
        assert!(close(g5.evaluated, Complex64::new(5f64.sqrt(), 0.0)));
        for p in [7u32, 11, 13] {
            let g = gauss_sum_fp(p).unwrap();
            assert!((g.evaluated.norm() - (p as f64).sqrt()).abs() < EPSILON);
        }
    }

    #[test]
    fn mismatch_is_reported() {
        let check = SumCheck {
            evaluated: Complex64::new(1.0, 0.0),
            closed_form: Complex64::new(1.0, 1e-6),
        };
        assert!(!check.agrees());
        assert!(matches!(
            check.into_result(),
            Err(CharSumError::ClosedFormMismatch { .. })
        ));
    }

    #[test]
    fn quadratic_sum_over_f3() {
        let f = make_field(3, 1, None).unwrap();
        let one = FieldElement::one(&f);
        let zero = FieldElement::zero(&f);
        let zeta = prime_additive_character(3, 1);
        let expected = Complex64::new(1.0, 0.0) + zeta * 2.0;
        let s = quadratic_sum(&one, &zero, &zero).unwrap();
        assert!(close(s.evaluated, expected));
        assert!(close(s.evaluated, Complex64::new(0.0, 3f64.sqrt())));
        assert_eq!(
            quadratic_sum(&zero, &one, &one).unwrap_err(),
            CharSumError::ZeroLeadingCoefficient
        );
    }

    #[test]
    fn square_leading_coefficient_gives_gauss_sum() {
        let f = make_field(5, 2, None).unwrap();
        let g = gauss_sum_fq_closed_form(5, 2);
        let zero = FieldElement::zero(&f);
        for a in enumerate_field(&f, true) {
            let s = quadratic_sum(&a.square(), &zero, &zero).unwrap();
            assert!(close(s.evaluated, g));
        }
    }

    #[test]
    fn fiber_examples() {
        let f27 = make_field(3, 3, None).unwrap();
        assert_eq!(count_trace_fiber(&f27, 0).unwrap().count_enumerated, 9);
        assert_eq!(
            count_trace_square_fiber(&f27, 0).unwrap().count_enumerated,
            9
        );
        let f3 = make_field(3, 1, None).unwrap();
        for a in 0..3 {
            assert_eq!(count_trace_fiber(&f3, a).unwrap().count_enumerated, 1);
        }
        let f9 = make_field(3, 2, None).unwrap();
        let counts: Vec<u64> = (0..3)
            .map(|a| count_trace_square_fiber(&f9, a).unwrap().count_enumerated)
            .collect();
        assert_eq!(counts, vec![5, 2, 2]);
    }

    #[test]
    fn prime_field_square_fibers() {
        // m = 1: #{x : x^2 = a} = 1 + eta(a)
        for p in [3u32, 5, 7, 11] {
            for a in 1..p {
                let expect = (1 + prime_quadratic_character(p, a) as i64) as u64;
                assert_eq!(predicted_trace_square_fiber(p, 1, a), expect);
            }
        }
    }

    #[test]
    fn i_pow_cycles() {
        assert_eq!(i_pow(0), Complex64::new(1.0, 0.0));
        assert_eq!(i_pow(5), Complex64::new(0.0, 1.0));
        assert_eq!(i_pow(6), Complex64::new(-1.0, 0.0));
        assert_eq!(i_pow(7), Complex64::new(0.0, -1.0));
    }
}
