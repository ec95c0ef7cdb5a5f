//! Arithmetic in `F_p` and `F_{p^m}` using a polynomial basis.
//!
//! Elements are dense coefficient vectors `c_0 + c_1 x + ... + c_{m-1} x^{m-1}`
//! reduced modulo a monic irreducible polynomial of degree `m`. The canonical
//! element order is the integer rank `c_0 + c_1 p + ... + c_{m-1} p^{m-1}`;
//! this order fixes codeword coordinates everywhere downstream.

use std::cmp::Ordering;
use std::fmt;
use std::hash::{Hash, Hasher};
use std::ops::{Add, Mul, Neg, Sub};
use std::sync::Arc;

use thiserror::Error;

/// Largest field order we agree to enumerate.
pub const MAX_FIELD_ORDER: u64 = 1 << 26;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum FieldError {
    #[error("{0} is not prime")]
    NotPrime(u32),
    #[error("characteristic 2 is not supported (need an odd prime)")]
    EvenCharacteristic,
    #[error("extension degree must be at least 1")]
    InvalidDegree,
    #[error("modulus must be monic of degree {expected} (got {got:?})")]
    InvalidModulus { expected: usize, got: Vec<u32> },
    #[error("modulus {0:?} is reducible over F_p")]
    ReducibleModulus(Vec<u32>),
    #[error("field order {p}^{m} exceeds the enumeration limit")]
    FieldTooLarge { p: u32, m: usize },
    #[error("operands belong to different fields")]
    FieldMismatch,
    #[error("division by zero")]
    DivisionByZero,
}

pub fn is_prime(n: u32) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2u32;
    while (d as u64) * (d as u64) <= n as u64 {
        if n.is_multiple_of(d) {
            return false;
        }
        d += 1;
    }
    true
}

/// Parameters of `F_{p^m}` together with a few precomputed tables.
#[derive(Debug)]
pub struct FieldParams {
    p: u32,
    m: usize,
    q: u64,
    /// Monic, constant term first, length `m + 1`.
    modulus: Vec<u32>,
    /// `Tr(x^k)` for `0 <= k < 2m - 1`.
    power_traces: Vec<u32>,
}

impl PartialEq for FieldParams {
    fn eq(&self, other: &Self) -> bool {
        self.p == other.p && self.m == other.m && self.modulus == other.modulus
    }
}

impl Eq for FieldParams {}

pub type Field = Arc<FieldParams>;

/// Builds `F_{p^m}`. Without an explicit modulus the smallest monic
/// irreducible polynomial in rank order is used, so results are reproducible.
pub fn make_field(p: u32, m: usize, modulus: Option<&[u32]>) -> Result<Field, FieldError> {
    if p == 2 {
        return Err(FieldError::EvenCharacteristic);
    }
    if !is_prime(p) {
        return Err(FieldError::NotPrime(p));
    }
    if m == 0 {
        return Err(FieldError::InvalidDegree);
    }
    let q = checked_order(p, m).ok_or(FieldError::FieldTooLarge { p, m })?;
    let modulus = match modulus {
        Some(coeffs) => {
            if coeffs.len() != m + 1 || coeffs[m] != 1 || coeffs.iter().any(|&c| c >= p) {
                return Err(FieldError::InvalidModulus {
                    expected: m,
                    got: coeffs.to_vec(),
                });
            }
            if !is_irreducible(coeffs, p) {
                return Err(FieldError::ReducibleModulus(coeffs.to_vec()));
            }
            coeffs.to_vec()
        }
        None => smallest_irreducible(p, m),
    };
    let mut params = FieldParams {
        p,
        m,
        q,
        modulus,
        power_traces: Vec::new(),
    };
    params.power_traces = (0..2 * m - 1)
        .map(|k| {
            let mut xk = vec![0u32; 2 * m - 1];
            xk[k] = 1;
            let reduced = params.reduce(xk);
            params.frobenius_trace(&reduced)
        })
        .collect();
    Ok(Arc::new(params))
}

fn checked_order(p: u32, m: usize) -> Option<u64> {
    let mut q: u64 = 1;
    for _ in 0..m {
        q = q.checked_mul(p as u64)?;
        if q > MAX_FIELD_ORDER {
            return None;
        }
    }
    Some(q)
}

/// Scans monic degree-`m` polynomials by rank of their lower coefficients and
/// returns the first irreducible one.
pub fn smallest_irreducible(p: u32, m: usize) -> Vec<u32> {
    let count = (p as u64).pow(m as u32);
    for rank in 0..count {
        let mut poly = digits(rank, p, m);
        poly.push(1);
        if is_irreducible(&poly, p) {
            return poly;
        }
    }
    unreachable!("irreducible polynomials exist in every degree")
}

/// Trial division by every monic polynomial of degree `1..=deg/2`.
pub fn is_irreducible(poly: &[u32], p: u32) -> bool {
    let deg = match poly.iter().rposition(|&c| c != 0) {
        Some(d) => d,
        None => return false,
    };
    if deg == 0 {
        return false;
    }
    for d in 1..=deg / 2 {
        let count = (p as u64).pow(d as u32);
        for rank in 0..count {
            let mut divisor = digits(rank, p, d);
            divisor.push(1);
            if poly_rem_monic(poly, &divisor, p).iter().all(|&c| c == 0) {
                return false;
            }
        }
    }
    true
}

fn poly_rem_monic(poly: &[u32], divisor: &[u32], p: u32) -> Vec<u32> {
    let d = divisor.len() - 1;
    let mut rem: Vec<u64> = poly.iter().map(|&c| c as u64).collect();
    let p64 = p as u64;
    for i in (d..rem.len()).rev() {
        let lead = rem[i] % p64;
        if lead == 0 {
            continue;
        }
        for (j, &c) in divisor.iter().enumerate() {
            let idx = i - d + j;
            rem[idx] = (rem[idx] + (p64 - lead) * c as u64) % p64;
        }
    }
    rem.truncate(d);
    rem.into_iter().map(|c| (c % p64) as u32).collect()
}

fn digits(mut rank: u64, p: u32, len: usize) -> Vec<u32> {
    let mut out = Vec::with_capacity(len + 1);
    for _ in 0..len {
        out.push((rank % p as u64) as u32);
        rank /= p as u64;
    }
    out
}

impl FieldParams {
    pub fn p(&self) -> u32 {
        self.p
    }

    pub fn m(&self) -> usize {
        self.m
    }

    pub fn q(&self) -> u64 {
        self.q
    }

    pub fn modulus(&self) -> &[u32] {
        &self.modulus
    }

    /// Coefficients of the element with the given rank.
    pub fn coeffs_of_rank(&self, rank: u64) -> Vec<u32> {
        debug_assert!(rank < self.q);
        digits(rank, self.p, self.m)
    }

    pub fn rank_of(&self, coeffs: &[u32]) -> u64 {
        coeffs
            .iter()
            .rev()
            .fold(0u64, |acc, &c| acc * self.p as u64 + c as u64)
    }

    /// Reduces a polynomial of arbitrary length modulo the field modulus.
    fn reduce(&self, mut poly: Vec<u32>) -> Vec<u32> {
        let m = self.m;
        let p = self.p as u64;
        for i in (m..poly.len()).rev() {
            let lead = poly[i] as u64 % p;
            if lead == 0 {
                continue;
            }
            poly[i] = 0;
            for j in 0..m {
                let idx = i - m + j;
                let sub = lead * self.modulus[j] as u64 % p;
                poly[idx] = ((poly[idx] as u64 + p - sub) % p) as u32;
            }
        }
        poly.resize(m, 0);
        poly
    }

    pub(crate) fn add_raw(&self, a: &[u32], b: &[u32]) -> Vec<u32> {
        a.iter().zip(b).map(|(&x, &y)| (x + y) % self.p).collect()
    }

    pub(crate) fn neg_raw(&self, a: &[u32]) -> Vec<u32> {
        a.iter().map(|&x| (self.p - x) % self.p).collect()
    }

    pub(crate) fn mul_raw(&self, a: &[u32], b: &[u32]) -> Vec<u32> {
        let p = self.p as u64;
        let mut prod = vec![0u64; 2 * self.m - 1];
        for (i, &x) in a.iter().enumerate() {
            if x == 0 {
                continue;
            }
            for (j, &y) in b.iter().enumerate() {
                prod[i + j] = (prod[i + j] + x as u64 * y as u64) % p;
            }
        }
        self.reduce(prod.into_iter().map(|c| c as u32).collect())
    }

    pub(crate) fn pow_raw(&self, a: &[u32], mut exp: u64) -> Vec<u32> {
        let mut result = vec![0u32; self.m];
        result[0] = 1;
        let mut base = a.to_vec();
        while exp > 0 {
            if exp & 1 == 1 {
                result = self.mul_raw(&result, &base);
            }
            base = self.mul_raw(&base, &base);
            exp >>= 1;
        }
        result
    }

    /// `x + x^p + ... + x^{p^{m-1}}`, read off as a prime-field residue.
    fn frobenius_trace(&self, a: &[u32]) -> u32 {
        let mut sum = vec![0u32; self.m];
        let mut conj = a.to_vec();
        for _ in 0..self.m {
            sum = self.add_raw(&sum, &conj);
            conj = self.pow_raw(&conj, self.p as u64);
        }
        debug_assert!(sum[1..].iter().all(|&c| c == 0), "trace not in F_p");
        sum[0]
    }

    /// Linear functional `w` with `Tr(a * d) = sum_i a_i w_i (mod p)`.
    ///
    /// Built from the precomputed traces of `x^k`, so it agrees with the
    /// Frobenius-sum trace by linearity.
    pub fn trace_functional(&self, d: &[u32]) -> Vec<u32> {
        let p = self.p as u64;
        (0..self.m)
            .map(|i| {
                d.iter()
                    .enumerate()
                    .map(|(j, &c)| c as u64 * self.power_traces[i + j] as u64)
                    .sum::<u64>()
                    % p
            })
            .map(|c| c as u32)
            .collect()
    }

    /// Evaluates a functional from [`FieldParams::trace_functional`].
    pub fn apply_functional(&self, functional: &[u32], a: &[u32]) -> u32 {
        let s: u64 = functional
            .iter()
            .zip(a)
            .map(|(&w, &c)| w as u64 * c as u64)
            .sum();
        (s % self.p as u64) as u32
    }
}

/// An element of `F_{p^m}`.
#[derive(Clone)]
pub struct FieldElement {
    field: Field,
    coeffs: Vec<u32>,
}

fn same_field(a: &Field, b: &Field) -> bool {
    Arc::ptr_eq(a, b) || **a == **b
}

impl FieldElement {
    pub fn zero(field: &Field) -> Self {
        Self {
            field: field.clone(),
            coeffs: vec![0; field.m],
        }
    }

    pub fn one(field: &Field) -> Self {
        Self::from_prime(field, 1)
    }

    /// Embeds a prime-field residue.
    pub fn from_prime(field: &Field, value: u32) -> Self {
        let mut coeffs = vec![0; field.m];
        coeffs[0] = value % field.p;
        Self {
            field: field.clone(),
            coeffs,
        }
    }

    /// The residue class of `x` (the generator of the polynomial basis).
    pub fn generator(field: &Field) -> Self {
        let mut coeffs = vec![0u32; 2];
        coeffs[1] = 1;
        Self {
            field: field.clone(),
            coeffs: field.reduce(coeffs),
        }
    }

    /// Coefficients are reduced mod `p`; missing high coefficients are zero.
    /// Longer inputs are reduced modulo the field polynomial.
    pub fn from_coeffs(field: &Field, coeffs: &[u32]) -> Self {
        let raw: Vec<u32> = coeffs.iter().map(|&c| c % field.p).collect();
        let coeffs = if raw.len() <= field.m {
            let mut v = raw;
            v.resize(field.m, 0);
            v
        } else {
            field.reduce(raw)
        };
        Self {
            field: field.clone(),
            coeffs,
        }
    }

    pub fn from_rank(field: &Field, rank: u64) -> Self {
        Self {
            field: field.clone(),
            coeffs: field.coeffs_of_rank(rank),
        }
    }

    pub fn rank(&self) -> u64 {
        self.field.rank_of(&self.coeffs)
    }

    pub fn coeffs(&self) -> &[u32] {
        &self.coeffs
    }

    pub fn field(&self) -> &Field {
        &self.field
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(|&c| c == 0)
    }

    pub fn is_one(&self) -> bool {
        self.coeffs[0] == 1 && self.coeffs[1..].iter().all(|&c| c == 0)
    }

    /// True when the element lies in the prime subfield `F_p`.
    pub fn in_prime_field(&self) -> bool {
        self.coeffs[1..].iter().all(|&c| c == 0)
    }

    fn check(&self, other: &Self) -> Result<(), FieldError> {
        if same_field(&self.field, &other.field) {
            Ok(())
        } else {
            Err(FieldError::FieldMismatch)
        }
    }

    fn with(&self, coeffs: Vec<u32>) -> Self {
        Self {
            field: self.field.clone(),
            coeffs,
        }
    }

    pub fn try_add(&self, other: &Self) -> Result<Self, FieldError> {
        self.check(other)?;
        Ok(self.with(self.field.add_raw(&self.coeffs, &other.coeffs)))
    }

    pub fn try_sub(&self, other: &Self) -> Result<Self, FieldError> {
        self.check(other)?;
        let neg = self.field.neg_raw(&other.coeffs);
        Ok(self.with(self.field.add_raw(&self.coeffs, &neg)))
    }

    pub fn try_mul(&self, other: &Self) -> Result<Self, FieldError> {
        self.check(other)?;
        Ok(self.with(self.field.mul_raw(&self.coeffs, &other.coeffs)))
    }

    pub fn try_div(&self, other: &Self) -> Result<Self, FieldError> {
        self.check(other)?;
        self.try_mul(&other.inv()?)
    }

    pub fn pow(&self, exp: u64) -> Self {
        self.with(self.field.pow_raw(&self.coeffs, exp))
    }

    /// Multiplicative inverse as `x^{q-2}`.
    pub fn inv(&self) -> Result<Self, FieldError> {
        if self.is_zero() {
            return Err(FieldError::DivisionByZero);
        }
        Ok(self.pow(self.field.q - 2))
    }

    pub fn square(&self) -> Self {
        self.with(self.field.mul_raw(&self.coeffs, &self.coeffs))
    }

    /// `x^p`.
    pub fn frobenius(&self) -> Self {
        self.pow(self.field.p as u64)
    }

    /// Absolute trace to `F_p` by summing the Frobenius conjugates.
    pub fn trace(&self) -> u32 {
        self.field.frobenius_trace(&self.coeffs)
    }

    /// The quadratic character: 0 at 0, +1 on nonzero squares, -1 otherwise.
    pub fn quadratic_character(&self) -> i8 {
        if self.is_zero() {
            return 0;
        }
        let euler = self.pow((self.field.q - 1) / 2);
        if euler.is_one() {
            1
        } else {
            debug_assert!(euler.in_prime_field() && euler.coeffs[0] == self.field.p - 1);
            -1
        }
    }
}

/// Quadratic character on `F_p`, via Euler's criterion.
pub fn prime_quadratic_character(p: u32, value: u32) -> i8 {
    let v = value % p;
    if v == 0 {
        return 0;
    }
    let mut result: u64 = 1;
    let mut base = v as u64;
    let mut exp = (p as u64 - 1) / 2;
    while exp > 0 {
        if exp & 1 == 1 {
            result = result * base % p as u64;
        }
        base = base * base % p as u64;
        exp >>= 1;
    }
    if result == 1 {
        1
    } else {
        -1
    }
}

/// All elements (or all nonzero elements) in canonical rank order.
pub fn enumerate_field(
    field: &Field,
    nonzero_only: bool,
) -> impl Iterator<Item = FieldElement> + '_ {
    let start = u64::from(nonzero_only);
    (start..field.q).map(move |rank| FieldElement::from_rank(field, rank))
}

impl PartialEq for FieldElement {
    fn eq(&self, other: &Self) -> bool {
        same_field(&self.field, &other.field) && self.coeffs == other.coeffs
    }
}

impl Eq for FieldElement {}

impl Hash for FieldElement {
    fn hash<H: Hasher>(&self, state: &mut H) {
        self.coeffs.hash(state);
    }
}

impl PartialOrd for FieldElement {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for FieldElement {
    fn cmp(&self, other: &Self) -> Ordering {
        self.coeffs.iter().rev().cmp(other.coeffs.iter().rev())
    }
}

impl fmt::Debug for FieldElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "F{}^{}{:?}", self.field.p, self.field.m, self.coeffs)
    }
}

impl fmt::Display for FieldElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let terms: Vec<String> = self
            .coeffs
            .iter()
            .enumerate()
            .filter(|(_, &c)| c != 0)
            .map(|(i, &c)| match i {
                0 => c.to_string(),
                1 if c == 1 => "x".to_string(),
                1 => format!("{c}x"),
                _ if c == 1 => format!("x^{i}"),
                _ => format!("{c}x^{i}"),
            })
            .collect();
        if terms.is_empty() {
            write!(f, "0")
        } else {
            write!(f, "{}", terms.join(" + "))
        }
    }
}

// Operator forms panic on mixed fields; use the `try_*` methods to get an error instead.
macro_rules! binop {
    ($trait:ident, $method:ident, $try:ident) => {
        impl $trait<&FieldElement> for &FieldElement {
            type Output = FieldElement;
            fn $method(self, rhs: &FieldElement) -> FieldElement {
                self.$try(rhs).expect("operands from different fields")
            }
        }
        impl $trait for FieldElement {
            type Output = FieldElement;
            fn $method(self, rhs: FieldElement) -> FieldElement {
                (&self).$method(&rhs)
            }
        }
    };
}

binop!(Add, add, try_add);
binop!(Sub, sub, try_sub);
binop!(Mul, mul, try_mul);

impl Neg for &FieldElement {
    type Output = FieldElement;
    fn neg(self) -> FieldElement {
        self.with(self.field.neg_raw(&self.coeffs))
    }
}

impl Neg for FieldElement {
    type Output = FieldElement;
    fn neg(self) -> FieldElement {
        -&self
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn f9() -> Field {
        make_field(3, 2, None).unwrap()
    }

    #[test]
    fn prime_field_has_trivial_modulus() {
        let f = make_field(3, 1, None).unwrap();
        assert_eq!(f.modulus(), &[0, 1]);
        assert_eq!(f.q(), 3);
        let elems: Vec<u32> = enumerate_field(&f, false).map(|e| e.coeffs()[0]).collect();
        assert_eq!(elems, vec![0, 1, 2]);
    }

    #[test]
    fn smallest_quadratic_over_f3() {
        // brute force: a monic quadratic is irreducible iff it has no root in F_3
        let mut irreducible = Vec::new();
        for c0 in 0..3u32 {
            for c1 in 0..3u32 {
                let has_root = (0..3u32).any(|x| (x * x + c1 * x + c0) % 3 == 0);
                if !has_root {
                    irreducible.push(vec![c0, c1, 1]);
                }
            }
        }
        irreducible.sort_by_key(|v| v[0] + 3 * v[1]);
        assert_eq!(irreducible[0], vec![1, 0, 1]);
        assert_eq!(f9().modulus(), &[1, 0, 1]);
    }

    #[test]
    fn rejects_bad_parameters() {
        assert_eq!(
            make_field(2, 3, None).unwrap_err(),
            FieldError::EvenCharacteristic
        );
        assert_eq!(make_field(9, 1, None).unwrap_err(), FieldError::NotPrime(9));
        assert_eq!(
            make_field(3, 0, None).unwrap_err(),
            FieldError::InvalidDegree
        );
        assert!(matches!(
            make_field(3, 2, Some(&[2, 0, 1])),
            Err(FieldError::ReducibleModulus(_))
        ));
        assert!(matches!(
            make_field(3, 2, Some(&[1, 0, 2])),
            Err(FieldError::InvalidModulus { .. })
        ));
        assert!(matches!(
            make_field(3, 40, None),
            Err(FieldError::FieldTooLarge { .. })
        ));
    }

    #[test]
    fn explicit_modulus_accepted() {
        let f = make_field(3, 2, Some(&[2, 1, 1])).unwrap();
        assert_eq!(f.modulus(), &[2, 1, 1]);
        let t = FieldElement::generator(&f);
        // x^2 = -x - 2 = 2x + 1
        assert_eq!(t.square().coeffs(), &[1, 2]);
    }

    #[test]
    fn t_squared_is_minus_one_in_f9() {
        let f = f9();
        let t = FieldElement::generator(&f);
        assert_eq!(t.square().coeffs(), &[2, 0]);
        assert_eq!(t.trace(), 0);
    }

    #[test]
    fn trace_of_one_is_m() {
        for (p, m) in [(3, 2), (3, 3), (5, 3), (7, 2), (3, 4)] {
            let f = make_field(p, m, None).unwrap();
            assert_eq!(FieldElement::one(&f).trace(), m as u32 % p);
            assert_eq!(FieldElement::zero(&f).trace(), 0);
        }
    }

    #[test]
    fn inverse_and_group_order() {
        let f = make_field(5, 3, None).unwrap();
        for x in enumerate_field(&f, true) {
            assert!((&x * &x.inv().unwrap()).is_one());
            assert!(x.pow(f.q() - 1).is_one());
        }
        assert_eq!(
            FieldElement::zero(&f).inv().unwrap_err(),
            FieldError::DivisionByZero
        );
    }

    #[test]
    fn mixed_fields_are_rejected() {
        let a = FieldElement::one(&f9());
        let other = make_field(3, 2, Some(&[2, 1, 1])).unwrap();
        let b = FieldElement::one(&other);
        assert_eq!(a.try_mul(&b).unwrap_err(), FieldError::FieldMismatch);
        // equal parameters in separate allocations are the same field
        let c = FieldElement::one(&f9());
        assert!(a.try_add(&c).is_ok());
    }

    #[test]
    fn canonical_order_is_rank_order() {
        let f = f9();
        let elems: Vec<_> = enumerate_field(&f, false).collect();
        assert_eq!(elems.len(), 9);
        assert!(elems[0].is_zero());
        assert!(elems.windows(2).all(|w| w[0] < w[1]));
        assert_eq!(enumerate_field(&f, true).count(), 8);
        for (i, e) in elems.iter().enumerate() {
            assert_eq!(e.rank(), i as u64);
        }
    }

    #[test]
    fn quadratic_character_basics() {
        let f = f9();
        assert_eq!(FieldElement::zero(&f).quadratic_character(), 0);
        for y in enumerate_field(&f, true) {
            assert_eq!(y.square().quadratic_character(), 1);
        }
        // m even: F_3^* consists of squares
        for c in 1..3 {
            assert_eq!(FieldElement::from_prime(&f, c).quadratic_character(), 1);
        }
        let squares = enumerate_field(&f, true)
            .filter(|x| x.quadratic_character() == 1)
            .count();
        assert_eq!(squares, 4);
    }

    #[test]
    fn prime_character_matches_squares() {
        for p in [3u32, 5, 7, 11, 13] {
            let squares: Vec<u32> = (1..p).map(|y| y * y % p).collect();
            for a in 1..p {
                let expect = if squares.contains(&a) { 1 } else { -1 };
                assert_eq!(prime_quadratic_character(p, a), expect);
            }
            assert_eq!(prime_quadratic_character(p, 0), 0);
        }
    }

    #[test]
    fn display_is_readable() {
        let f = f9();
        assert_eq!(FieldElement::from_coeffs(&f, &[2, 1]).to_string(), "2 + x");
        assert_eq!(FieldElement::zero(&f).to_string(), "0");
    }
}
