//! Defining sets, the trace codes they induce, and weight censuses.
//!
//! A trace code over `F_p` is `{ c(a) = (Tr(a d_1), ..., Tr(a d_n)) : a in F_{p^m} }`
//! for a defining set `{d_1, ..., d_n}`. Codewords are kept in two views:
//! indexed by `a` (rank order) and deduplicated.

use std::collections::{BTreeMap, HashMap};

use rayon::prelude::*;
use serde::Serialize;
use thiserror::Error;

use crate::charsums::{half_square, neg_one_pow};
use crate::gfpm::{enumerate_field, Field, FieldElement};

/// Codeword symbols are residues mod `p`, stored one per byte.
pub type Symbol = u8;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CodeError {
    #[error("defining set is empty")]
    DegenerateSet,
    #[error("construction requires an even extension degree (got m = {0})")]
    OddDegree(usize),
    #[error("construction requires m >= 2 (got m = {0})")]
    UnsupportedDegree(usize),
    #[error("code has no nonzero codeword")]
    ZeroCode,
    #[error("alphabet size {0} does not fit a byte-sized symbol")]
    AlphabetTooLarge(u32),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub enum DefiningSetKind {
    #[serde(rename = "D-alpha")]
    DAlpha,
    #[serde(rename = "E")]
    E,
}

/// An ordered list of nonzero field elements indexing code coordinates.
#[derive(Debug, Clone)]
pub struct DefiningSet {
    pub elements: Vec<FieldElement>,
    pub kind: DefiningSetKind,
    pub alpha: Option<u32>,
    pub field: Field,
}

impl DefiningSet {
    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }
}

/// `{d != 0 : Tr(d) = alpha}` in canonical order.
pub fn build_defining_set_d(field: &Field, alpha: u32) -> Result<DefiningSet, CodeError> {
    let alpha = alpha % field.p();
    let elements: Vec<FieldElement> = enumerate_field(field, true)
        .filter(|d| d.trace() == alpha)
        .collect();
    if elements.is_empty() {
        return Err(CodeError::DegenerateSet);
    }
    Ok(DefiningSet {
        elements,
        kind: DefiningSetKind::DAlpha,
        alpha: Some(alpha),
        field: field.clone(),
    })
}

/// `{d != 0 : Tr(d^2) = 0}` in canonical order; only defined for even `m`.
pub fn build_defining_set_e(field: &Field) -> Result<DefiningSet, CodeError> {
    if !field.m().is_multiple_of(2) {
        return Err(CodeError::OddDegree(field.m()));
    }
    let elements: Vec<FieldElement> = enumerate_field(field, true)
        .filter(|d| d.square().trace() == 0)
        .collect();
    if elements.is_empty() {
        return Err(CodeError::DegenerateSet);
    }
    Ok(DefiningSet {
        elements,
        kind: DefiningSetKind::E,
        alpha: None,
        field: field.clone(),
    })
}

/// The sign `(-1)^{((p-1)/2)^2 (m/2)}` for even `m`.
pub fn tau(p: u32, m: usize) -> Result<i64, CodeError> {
    if !m.is_multiple_of(2) {
        return Err(CodeError::OddDegree(m));
    }
    Ok(neg_one_pow(half_square(p) * (m as u64 / 2)))
}

/// A trace code with every codeword materialized.
#[derive(Debug, Clone)]
pub struct TraceCode {
    defining_set: DefiningSet,
    length: usize,
    /// Row-major: codeword of the element with rank `r` is `words[r*n..(r+1)*n]`.
    words: Vec<Symbol>,
    /// Rank of the first index producing each distinct codeword, in rank order.
    distinct: Vec<u64>,
    dimension: u32,
}

pub fn build_trace_code(ds: DefiningSet) -> Result<TraceCode, CodeError> {
    if ds.is_empty() {
        return Err(CodeError::DegenerateSet);
    }
    let field = ds.field.clone();
    if field.p() > Symbol::MAX as u32 {
        return Err(CodeError::AlphabetTooLarge(field.p()));
    }
    let n = ds.len();
    let functionals: Vec<Vec<u32>> = ds
        .elements
        .iter()
        .map(|d| field.trace_functional(d.coeffs()))
        .collect();
    let mut words = vec![0 as Symbol; field.q() as usize * n];
    words
        .par_chunks_mut(n)
        .enumerate()
        .for_each(|(rank, word)| {
            let a = field.coeffs_of_rank(rank as u64);
            for (slot, w) in word.iter_mut().zip(&functionals) {
                *slot = field.apply_functional(w, &a) as Symbol;
            }
        });

    let mut seen: HashMap<&[Symbol], ()> = HashMap::new();
    let mut distinct = Vec::new();
    for (rank, word) in words.chunks(n).enumerate() {
        if seen.insert(word, ()).is_none() {
            distinct.push(rank as u64);
        }
    }
    let dimension = exact_log(distinct.len() as u64, field.p() as u64)
        .expect("distinct codewords of a linear code number a power of p");
    Ok(TraceCode {
        defining_set: ds,
        length: n,
        words,
        distinct,
        dimension,
    })
}

fn exact_log(mut value: u64, base: u64) -> Option<u32> {
    let mut k = 0;
    while value > 1 {
        if !value.is_multiple_of(base) {
            return None;
        }
        value /= base;
        k += 1;
    }
    (value == 1).then_some(k)
}

impl TraceCode {
    pub fn defining_set(&self) -> &DefiningSet {
        &self.defining_set
    }

    pub fn field(&self) -> &Field {
        &self.defining_set.field
    }

    pub fn length(&self) -> usize {
        self.length
    }

    pub fn dimension(&self) -> u32 {
        self.dimension
    }

    /// Codeword `c(a)` for the index with the given rank.
    pub fn word(&self, rank: u64) -> &[Symbol] {
        let start = rank as usize * self.length;
        &self.words[start..start + self.length]
    }

    pub fn codeword(&self, a: &FieldElement) -> &[Symbol] {
        self.word(a.rank())
    }

    /// Number of field elements indexing the code (`q`).
    pub fn index_count(&self) -> u64 {
        self.field().q()
    }

    /// Ranks of one representative index per distinct codeword.
    pub fn distinct_ranks(&self) -> &[u64] {
        &self.distinct
    }

    pub fn distinct_words(&self) -> impl Iterator<Item = &[Symbol]> + '_ {
        self.distinct.iter().map(|&r| self.word(r))
    }

    pub fn distinct_count(&self) -> usize {
        self.distinct.len()
    }

    /// Ranks of every `a` with `c(a) = 0`.
    pub fn kernel_ranks(&self) -> Vec<u64> {
        (0..self.index_count())
            .filter(|&r| self.word(r).iter().all(|&s| s == 0))
            .collect()
    }
}

pub fn hamming_weight(word: &[Symbol]) -> usize {
    word.iter().filter(|&&s| s != 0).count()
}

/// Sorted `(weight, frequency)` pairs, zero frequencies omitted.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(transparent)]
pub struct WeightDistribution {
    pub pairs: Vec<(usize, u64)>,
}

impl WeightDistribution {
    fn from_map(map: BTreeMap<usize, u64>) -> Self {
        Self {
            pairs: map.into_iter().filter(|&(_, a)| a > 0).collect(),
        }
    }

    pub fn total(&self) -> u64 {
        self.pairs.iter().map(|&(_, a)| a).sum()
    }

    pub fn frequency(&self, weight: usize) -> u64 {
        self.pairs
            .iter()
            .find(|&&(w, _)| w == weight)
            .map_or(0, |&(_, a)| a)
    }

    /// Smallest nonzero weight.
    pub fn min_nonzero_weight(&self) -> Option<usize> {
        self.pairs.iter().map(|&(w, _)| w).find(|&w| w > 0)
    }

    pub fn to_csv(&self) -> String {
        let mut out = String::from("weight,frequency\n");
        for (w, a) in &self.pairs {
            out.push_str(&format!("{w},{a}\n"));
        }
        out
    }
}

/// Exhaustive census over the distinct codewords.
pub fn weight_distribution(code: &TraceCode) -> WeightDistribution {
    let mut map = BTreeMap::new();
    for word in code.distinct_words() {
        *map.entry(hamming_weight(word)).or_insert(0u64) += 1;
    }
    WeightDistribution::from_map(map)
}

pub fn minimum_distance(code: &TraceCode) -> Result<usize, CodeError> {
    code.distinct_words()
        .map(hamming_weight)
        .filter(|&w| w > 0)
        .min()
        .ok_or(CodeError::ZeroCode)
}

fn pow(p: u32, e: u32) -> i64 {
    (p as i64).pow(e)
}

fn table(entries: &[(i64, i64)]) -> WeightDistribution {
    let mut map = BTreeMap::new();
    for &(w, a) in entries {
        *map.entry(w as usize).or_insert(0u64) += a as u64;
    }
    WeightDistribution::from_map(map)
}

/// Closed-form weight table of the code defined by `D(alpha)`.
pub fn predicted_weight_distribution_d(
    p: u32,
    m: usize,
    alpha: u32,
) -> Result<WeightDistribution, CodeError> {
    if m < 2 {
        return Err(CodeError::UnsupportedDegree(m));
    }
    let m = m as u32;
    let low = pow(p, m - 2) * (p as i64 - 1);
    Ok(if alpha.is_multiple_of(p) {
        table(&[(0, 1), (low, pow(p, m - 1) - 1)])
    } else {
        table(&[
            (0, 1),
            (pow(p, m - 1), p as i64 - 1),
            (low, pow(p, m) - p as i64),
        ])
    })
}

/// Length of the code defined by `E`: `p^{m-1} - tau (p-1) p^{m/2-1} - 1`.
pub fn predicted_length_e(p: u32, m: usize) -> Result<i64, CodeError> {
    let t = tau(p, m)?;
    if m < 2 {
        return Err(CodeError::UnsupportedDegree(m));
    }
    let m = m as u32;
    Ok(pow(p, m - 1) - t * (p as i64 - 1) * pow(p, m / 2 - 1) - 1)
}

/// Closed-form two-weight table of the code defined by `E`.
pub fn predicted_weight_distribution_e(p: u32, m: usize) -> Result<WeightDistribution, CodeError> {
    let n = predicted_length_e(p, m)?;
    if n <= 0 {
        return Err(CodeError::DegenerateSet);
    }
    let t = tau(p, m)?;
    let m = m as u32;
    let pm1 = p as i64 - 1;
    let half = pow(p, m / 2 - 1);
    Ok(table(&[
        (0, 1),
        (pm1 * pow(p, m - 2), n),
        (
            pm1 * (pow(p, m - 2) - t * half),
            pm1 * (pow(p, m - 1) + t * half),
        ),
    ]))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gfpm::make_field;

    fn wd(pairs: &[(usize, u64)]) -> WeightDistribution {
        WeightDistribution {
            pairs: pairs.to_vec(),
        }
    }

    #[test]
    fn defining_set_sizes() {
        let f27 = make_field(3, 3, None).unwrap();
        assert_eq!(build_defining_set_d(&f27, 0).unwrap().len(), 8);
        assert_eq!(build_defining_set_d(&f27, 1).unwrap().len(), 9);
        let f3 = make_field(3, 1, None).unwrap();
        assert_eq!(
            build_defining_set_d(&f3, 0).unwrap_err(),
            CodeError::DegenerateSet
        );
    }

    #[test]
    fn defining_set_e_sizes() {
        let f9 = make_field(3, 2, None).unwrap();
        let e = build_defining_set_e(&f9).unwrap();
        assert_eq!(e.len(), 4);
        assert!(e.elements.windows(2).all(|w| w[0] < w[1]));
        let f25 = make_field(5, 2, None).unwrap();
        assert_eq!(
            build_defining_set_e(&f25).unwrap_err(),
            CodeError::DegenerateSet
        );
        let f81 = make_field(3, 4, None).unwrap();
        assert_eq!(build_defining_set_e(&f81).unwrap().len(), 20);
        let f27 = make_field(3, 3, None).unwrap();
        assert_eq!(
            build_defining_set_e(&f27).unwrap_err(),
            CodeError::OddDegree(3)
        );
    }

    #[test]
    fn tau_values() {
        assert_eq!(tau(3, 2).unwrap(), -1);
        assert_eq!(tau(3, 4).unwrap(), 1);
        assert_eq!(tau(5, 2).unwrap(), 1);
        assert_eq!(tau(7, 2).unwrap(), -1);
        assert!(tau(3, 3).is_err());
    }

    #[test]
    fn code_d0_over_f27() {
        let f = make_field(3, 3, None).unwrap();
        let code = build_trace_code(build_defining_set_d(&f, 0).unwrap()).unwrap();
        assert_eq!(code.index_count(), 27);
        assert_eq!(code.distinct_count(), 9);
        assert_eq!(code.dimension(), 2);
        assert_eq!(weight_distribution(&code), wd(&[(0, 1), (6, 8)]));
        assert_eq!(minimum_distance(&code).unwrap(), 6);
        // kernel of the index map is exactly F_3
        assert_eq!(code.kernel_ranks(), vec![0, 1, 2]);
    }

    #[test]
    fn code_d1_over_f27() {
        let f = make_field(3, 3, None).unwrap();
        let code = build_trace_code(build_defining_set_d(&f, 1).unwrap()).unwrap();
        assert_eq!(code.distinct_count(), 27);
        assert_eq!(code.dimension(), 3);
        assert_eq!(weight_distribution(&code), wd(&[(0, 1), (6, 24), (9, 2)]));
    }

    #[test]
    fn code_e_over_f9() {
        let f = make_field(3, 2, None).unwrap();
        let code = build_trace_code(build_defining_set_e(&f).unwrap()).unwrap();
        assert_eq!(code.dimension(), 2);
        assert_eq!(weight_distribution(&code), wd(&[(0, 1), (2, 4), (4, 4)]));
        assert_eq!(minimum_distance(&code).unwrap(), 2);
        assert!(code.word(0).iter().all(|&s| s == 0));
    }

    #[test]
    fn code_e_over_f81() {
        let f = make_field(3, 4, None).unwrap();
        let code = build_trace_code(build_defining_set_e(&f).unwrap()).unwrap();
        assert_eq!(
            weight_distribution(&code),
            wd(&[(0, 1), (12, 60), (18, 20)])
        );
        assert_eq!(minimum_distance(&code).unwrap(), 12);
    }

    #[test]
    fn predicted_tables() {
        assert_eq!(
            predicted_weight_distribution_d(3, 3, 0).unwrap(),
            wd(&[(0, 1), (6, 8)])
        );
        assert_eq!(
            predicted_weight_distribution_d(3, 3, 1).unwrap(),
            wd(&[(0, 1), (6, 24), (9, 2)])
        );
        assert_eq!(
            predicted_weight_distribution_d(5, 2, 0).unwrap(),
            wd(&[(0, 1), (4, 4)])
        );
        assert_eq!(
            predicted_weight_distribution_d(3, 1, 0).unwrap_err(),
            CodeError::UnsupportedDegree(1)
        );
        assert_eq!(
            predicted_weight_distribution_e(3, 2).unwrap(),
            wd(&[(0, 1), (2, 4), (4, 4)])
        );
        assert_eq!(
            predicted_weight_distribution_e(3, 4).unwrap(),
            wd(&[(0, 1), (12, 60), (18, 20)])
        );
        assert_eq!(
            predicted_weight_distribution_e(5, 2).unwrap_err(),
            CodeError::DegenerateSet
        );
        assert_eq!(
            predicted_weight_distribution_e(3, 3).unwrap_err(),
            CodeError::OddDegree(3)
        );
    }

    #[test]
    fn predicted_e_tables_cover_the_code() {
        for p in [3u32, 5, 7, 11, 13] {
            for m in [2usize, 4, 6] {
                if let Ok(t) = predicted_weight_distribution_e(p, m) {
                    assert_eq!(t.total(), (p as u64).pow(m as u32));
                }
            }
        }
    }

    #[test]
    fn csv_export() {
        assert_eq!(
            wd(&[(0, 1), (6, 8)]).to_csv(),
            "weight,frequency\n0,1\n6,8\n"
        );
    }

    #[test]
    fn exact_log_rejects_non_powers() {
        assert_eq!(exact_log(27, 3), Some(3));
        assert_eq!(exact_log(1, 3), Some(0));
        assert_eq!(exact_log(12, 3), None);
    }
}
