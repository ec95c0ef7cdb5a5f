//! Constant composition subcodes of trace codes and the LFVC bound.

use std::collections::HashSet;
use std::fmt;
use std::sync::Arc;

use rayon::prelude::*;
use serde::Serialize;
use thiserror::Error;

use crate::codes::{
    minimum_distance, predicted_length_e, tau, CodeError, DefiningSetKind, Symbol, TraceCode,
};
use crate::gfpm::FieldElement;

/// Above this many words the O(M^2 n) pairwise oracle is skipped.
pub const DEFAULT_PAIRWISE_CAP: usize = 5000;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CccError {
    #[error("codeword at index rank {rank} has composition {found:?}, expected {expected:?}")]
    CompositionViolation {
        rank: u64,
        expected: Vec<u64>,
        found: Vec<u64>,
    },
    #[error("two codewords coincide (distance 0)")]
    DuplicateWords,
    #[error("need at least two codewords, got {0}")]
    TooFewWords(usize),
    #[error("composition sums to {sum}, code length is {n}")]
    CompositionLengthMismatch { n: u64, sum: u64 },
    #[error("source code was built from the wrong defining set")]
    WrongSource,
    #[error("LFVC parameters n, M, d must be positive")]
    NonPositiveParameters,
    #[error(transparent)]
    Code(#[from] CodeError),
}

/// Per-symbol occurrence counts, indexed by the residue `0..p`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize)]
#[serde(transparent)]
pub struct CompositionVector {
    pub omega: Vec<u64>,
}

impl CompositionVector {
    pub fn length(&self) -> u64 {
        self.omega.iter().sum()
    }

    pub fn sum_of_squares(&self) -> u128 {
        self.omega.iter().map(|&w| (w as u128) * (w as u128)).sum()
    }
}

pub fn composition_vector(word: &[Symbol], p: u32) -> CompositionVector {
    let mut omega = vec![0u64; p as usize];
    for &s in word {
        omega[s as usize] += 1;
    }
    CompositionVector { omega }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub enum Construction {
    /// `{c(a) : a not in F_p}` over `D(alpha)`.
    #[serde(rename = "first")]
    First,
    /// `{c(a) : Tr(a^2) != 0}` over `E`.
    #[serde(rename = "second-S")]
    SecondS,
    /// `{c(a) : a != 0, Tr(a^2) = 0}` over `E`.
    #[serde(rename = "second-complement")]
    SecondComplement,
}

impl Construction {
    pub const ALL: [Construction; 3] = [
        Construction::First,
        Construction::SecondS,
        Construction::SecondComplement,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            Construction::First => "first",
            Construction::SecondS => "second-S",
            Construction::SecondComplement => "second-complement",
        }
    }

    pub fn index_set(self) -> IndexSetKind {
        match self {
            Construction::First => IndexSetKind::ComplementOfFp,
            Construction::SecondS => IndexSetKind::S,
            Construction::SecondComplement => IndexSetKind::ComplementOfS,
        }
    }
}

impl fmt::Display for Construction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl std::str::FromStr for Construction {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Construction::ALL
            .into_iter()
            .find(|c| c.as_str().eq_ignore_ascii_case(s))
            .ok_or_else(|| format!("unknown construction {s:?}"))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum IndexSetKind {
    ComplementOfFp,
    S,
    ComplementOfS,
}

/// A constant composition subcode, kept as index ranks into its ambient code.
#[derive(Debug, Clone)]
pub struct CccCode {
    source: Arc<TraceCode>,
    construction: Construction,
    index_ranks: Vec<u64>,
    word_ranks: Vec<u64>,
    composition: CompositionVector,
    pairwise_distance: Option<usize>,
    ambient_distance: usize,
}

impl CccCode {
    pub fn source(&self) -> &TraceCode {
        &self.source
    }

    pub fn construction(&self) -> Construction {
        self.construction
    }

    pub fn index_set_kind(&self) -> IndexSetKind {
        self.construction.index_set()
    }

    pub fn n(&self) -> usize {
        self.source.length()
    }

    /// Number of distinct codewords.
    pub fn size(&self) -> usize {
        self.word_ranks.len()
    }

    /// Number of field elements in the index set.
    pub fn index_count(&self) -> usize {
        self.index_ranks.len()
    }

    /// How many indices map to each distinct word.
    pub fn fan_in(&self) -> usize {
        self.index_count() / self.size().max(1)
    }

    pub fn words(&self) -> impl Iterator<Item = &[Symbol]> + '_ {
        self.word_ranks.iter().map(|&r| self.source.word(r))
    }

    pub fn word_ranks(&self) -> &[u64] {
        &self.word_ranks
    }

    pub fn composition(&self) -> &CompositionVector {
        &self.composition
    }

    /// Minimum distance from the pairwise oracle, when it ran.
    pub fn pairwise_distance(&self) -> Option<usize> {
        self.pairwise_distance
    }

    /// Minimum nonzero weight of the ambient linear code.
    pub fn ambient_distance(&self) -> usize {
        self.ambient_distance
    }

    /// Pairwise distance if available, otherwise the ambient shortcut.
    pub fn d(&self) -> usize {
        self.pairwise_distance.unwrap_or(self.ambient_distance)
    }

    pub fn distance_matches_ambient(&self) -> Option<bool> {
        self.pairwise_distance.map(|d| d == self.ambient_distance)
    }

    pub fn parameters(&self) -> CccParameters {
        CccParameters {
            n: self.n() as u64,
            size: self.size() as u64,
            d: self.d() as u64,
            omega: self.composition.clone(),
        }
    }
}

#[derive(Debug, Clone, Copy)]
pub struct ExtractOptions {
    /// Largest word count for which the pairwise oracle runs.
    pub pairwise_cap: usize,
}

impl Default for ExtractOptions {
    fn default() -> Self {
        Self {
            pairwise_cap: DEFAULT_PAIRWISE_CAP,
        }
    }
}

/// `{c(a) : a in F_{p^m} \ F_p}` from a code built on `D(alpha)`.
pub fn extract_subcode_first(
    code: &Arc<TraceCode>,
    options: ExtractOptions,
) -> Result<CccCode, CccError> {
    if code.defining_set().kind != DefiningSetKind::DAlpha {
        return Err(CccError::WrongSource);
    }
    let field = code.field();
    if field.m() < 2 {
        return Err(CodeError::UnsupportedDegree(field.m()).into());
    }
    // rank < p exactly on the prime subfield
    let indices: Vec<u64> = (field.p() as u64..field.q()).collect();
    assemble(code, Construction::First, indices, options)
}

/// The `S` subcode (`Tr(a^2) != 0`) or its nonzero complement, from a code built on `E`.
pub fn extract_subcode_second(
    code: &Arc<TraceCode>,
    which: Construction,
    options: ExtractOptions,
) -> Result<CccCode, CccError> {
    if code.defining_set().kind != DefiningSetKind::E || which == Construction::First {
        return Err(CccError::WrongSource);
    }
    let field = code.field();
    if !field.m().is_multiple_of(2) {
        return Err(CodeError::OddDegree(field.m()).into());
    }
    let want_nonzero_trace = which == Construction::SecondS;
    let indices: Vec<u64> = (1..field.q())
        .filter(|&r| {
            let a = FieldElement::from_rank(field, r);
            (a.square().trace() != 0) == want_nonzero_trace
        })
        .collect();
    assemble(code, which, indices, options)
}

fn assemble(
    code: &Arc<TraceCode>,
    construction: Construction,
    index_ranks: Vec<u64>,
    options: ExtractOptions,
) -> Result<CccCode, CccError> {
    let p = code.field().p();
    let mut seen = HashSet::new();
    let word_ranks: Vec<u64> = index_ranks
        .iter()
        .copied()
        .filter(|&r| seen.insert(code.word(r)))
        .collect();
    if word_ranks.is_empty() {
        return Err(CodeError::DegenerateSet.into());
    }

    let composition = composition_vector(code.word(word_ranks[0]), p);
    for &rank in &index_ranks {
        let found = composition_vector(code.word(rank), p);
        if found != composition {
            return Err(CccError::CompositionViolation {
                rank,
                expected: composition.omega,
                found: found.omega,
            });
        }
    }

    let ambient_distance = minimum_distance(code)?;
    let pairwise_distance = if word_ranks.len() >= 2 && word_ranks.len() <= options.pairwise_cap {
        let words: Vec<&[Symbol]> = word_ranks.iter().map(|&r| code.word(r)).collect();
        Some(pairwise_min_distance(&words)?)
    } else {
        None
    };

    Ok(CccCode {
        source: code.clone(),
        construction,
        index_ranks,
        word_ranks,
        composition,
        pairwise_distance,
        ambient_distance,
    })
}

pub fn hamming_distance(a: &[Symbol], b: &[Symbol]) -> usize {
    a.iter().zip(b).filter(|(x, y)| x != y).count()
}

/// Minimum Hamming distance over all unordered pairs, by exhaustive comparison.
pub fn pairwise_min_distance<W: AsRef<[Symbol]> + Sync>(words: &[W]) -> Result<usize, CccError> {
    if words.len() < 2 {
        return Err(CccError::TooFewWords(words.len()));
    }
    let min = (0..words.len() - 1)
        .into_par_iter()
        .map(|i| {
            let a = words[i].as_ref();
            words[i + 1..]
                .iter()
                .map(|b| hamming_distance(a, b.as_ref()))
                .min()
                .unwrap_or(usize::MAX)
        })
        .min()
        .unwrap_or(usize::MAX);
    if min == 0 {
        return Err(CccError::DuplicateWords);
    }
    Ok(min)
}

/// `(n, M, d, omega)` of a constant composition code.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CccParameters {
    pub n: u64,
    #[serde(rename = "M")]
    pub size: u64,
    pub d: u64,
    pub omega: CompositionVector,
}

fn ipow(p: u32, e: u32) -> i64 {
    (p as i64).pow(e)
}

fn omega_vector(p: u32, zero: i64, rest: i64) -> CompositionVector {
    let mut omega = vec![rest as u64; p as usize];
    omega[0] = zero as u64;
    CompositionVector { omega }
}

/// Closed-form parameters of the subcode `{c(a) : a not in F_p}` over `D(alpha)`.
pub fn predicted_ccc_first(p: u32, m: usize, alpha: u32) -> Result<CccParameters, CccError> {
    if m < 2 {
        return Err(CodeError::UnsupportedDegree(m).into());
    }
    let m = m as u32;
    let pi = p as i64;
    let d = ipow(p, m - 2) * (pi - 1);
    let (n, size, omega) = if alpha.is_multiple_of(p) {
        let n = ipow(p, m - 1) - 1;
        (n, n, omega_vector(p, ipow(p, m - 2) - 1, ipow(p, m - 2)))
    } else {
        (
            ipow(p, m - 1),
            ipow(p, m) - pi,
            omega_vector(p, ipow(p, m - 2), ipow(p, m - 2)),
        )
    };
    Ok(CccParameters {
        n: n as u64,
        size: size as u64,
        d: d as u64,
        omega,
    })
}

/// Closed-form parameters of the `S` subcode or its complement over `E`.
pub fn predicted_ccc_second(
    p: u32,
    m: usize,
    which: Construction,
) -> Result<CccParameters, CccError> {
    if which == Construction::First {
        return Err(CccError::WrongSource);
    }
    let n = predicted_length_e(p, m)?;
    if n <= 0 {
        return Err(CodeError::DegenerateSet.into());
    }
    let t = tau(p, m)?;
    let m = m as u32;
    let pi = p as i64;
    let half = ipow(p, m / 2 - 1);
    let d = if t == -1 {
        (pi - 1) * ipow(p, m - 2)
    } else {
        (pi - 1) * (ipow(p, m - 2) - half)
    };
    let (size, omega) = match which {
        Construction::SecondS => (
            ipow(p, m) - ipow(p, m - 1) + t * (pi - 1) * half,
            omega_vector(p, ipow(p, m - 2) - 1, ipow(p, m - 2) - t * half),
        ),
        _ => (
            n,
            omega_vector(p, ipow(p, m - 2) - t * (pi - 1) * half - 1, ipow(p, m - 2)),
        ),
    };
    Ok(CccParameters {
        n: n as u64,
        size: size as u64,
        d: d as u64,
        omega,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum LfvcVerdict {
    Optimal,
    NotOptimal,
    BoundInapplicable,
}

/// A reduced fraction.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct Rational {
    pub numerator: i128,
    pub denominator: i128,
}

impl Rational {
    fn reduced(num: i128, den: i128) -> Self {
        let g = gcd(num.abs(), den.abs()).max(1);
        let sign = if den < 0 { -1 } else { 1 };
        Self {
            numerator: sign * num / g,
            denominator: sign * den / g,
        }
    }
}

fn gcd(mut a: i128, mut b: i128) -> i128 {
    while b != 0 {
        (a, b) = (b, a % b);
    }
    a
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct LfvcReport {
    pub n: u64,
    #[serde(rename = "M")]
    pub size: u64,
    pub d: u64,
    pub omega: CompositionVector,
    /// `n d - n^2 + sum omega_beta^2`.
    pub denominator: i128,
    /// `n d / denominator`, present only when the denominator is positive.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub bound: Option<Rational>,
    pub verdict: LfvcVerdict,
}

/// Evaluates `M <= n d / (n d - n^2 + sum omega_beta^2)` in exact integers.
pub fn lfvc_evaluate(
    n: u64,
    size: u64,
    d: u64,
    omega: &CompositionVector,
) -> Result<LfvcReport, CccError> {
    if n == 0 || size == 0 || d == 0 {
        return Err(CccError::NonPositiveParameters);
    }
    if omega.length() != n {
        return Err(CccError::CompositionLengthMismatch {
            n,
            sum: omega.length(),
        });
    }
    let (n_i, d_i, m_i) = (n as i128, d as i128, size as i128);
    let denominator = n_i * d_i - n_i * n_i + omega.sum_of_squares() as i128;
    let (bound, verdict) = if denominator <= 0 {
        (None, LfvcVerdict::BoundInapplicable)
    } else {
        let verdict = if m_i * denominator == n_i * d_i {
            LfvcVerdict::Optimal
        } else {
            LfvcVerdict::NotOptimal
        };
        (Some(Rational::reduced(n_i * d_i, denominator)), verdict)
    };
    Ok(LfvcReport {
        n,
        size,
        d,
        omega: omega.clone(),
        denominator,
        bound,
        verdict,
    })
}
