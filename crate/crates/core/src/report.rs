//! Serializable views of codes and subcodes, as written by `tracecc build`.

use std::sync::Arc;

use serde::Serialize;

use crate::ccc::{
    extract_subcode_first, extract_subcode_second, lfvc_evaluate, predicted_ccc_first,
    predicted_ccc_second, CccCode, CccParameters, CompositionVector, Construction, ExtractOptions,
    LfvcVerdict, Rational,
};
use crate::codes::{
    build_defining_set_d, build_defining_set_e, build_trace_code, tau, weight_distribution,
    DefiningSetKind, Symbol, TraceCode, WeightDistribution,
};
use crate::gfpm::make_field;
use crate::{Error, Result};

/// Renders a codeword as a string of base-`p` digits (`0-9a-z`), or as
/// dot-separated residues when `p > 36`.
pub fn codeword_string(word: &[Symbol], p: u32) -> String {
    if p <= 36 {
        word.iter()
            .map(|&s| char::from_digit(s as u32, 36).expect("symbol below radix"))
            .collect()
    } else {
        word.iter()
            .map(|s| s.to_string())
            .collect::<Vec<_>>()
            .join(".")
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct CodeReport {
    pub p: u32,
    pub m: usize,
    pub modulus: Vec<u32>,
    pub kind: DefiningSetKind,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub alpha: Option<u32>,
    pub length: usize,
    pub dimension: u32,
    pub weight_distribution: WeightDistribution,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub codewords: Option<Vec<String>>,
}

impl CodeReport {
    pub fn new(code: &TraceCode, emit_codewords: bool) -> Self {
        let field = code.field();
        let p = field.p();
        Self {
            p,
            m: field.m(),
            modulus: field.modulus().to_vec(),
            kind: code.defining_set().kind,
            alpha: code.defining_set().alpha,
            length: code.length(),
            dimension: code.dimension(),
            weight_distribution: weight_distribution(code),
            codewords: emit_codewords.then(|| {
                code.distinct_words()
                    .map(|w| codeword_string(w, p))
                    .collect()
            }),
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct LfvcSummary {
    pub denominator: i128,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub bound: Option<Rational>,
    pub verdict: LfvcVerdict,
}

#[derive(Debug, Clone, Serialize)]
pub struct CccChecks {
    pub composition_ok: bool,
    /// `None` when the pairwise oracle was skipped for size.
    pub distance_matches_ambient: Option<bool>,
    pub prediction_matches: bool,
}

impl CccChecks {
    pub fn all_pass(&self) -> bool {
        self.composition_ok
            && self.distance_matches_ambient != Some(false)
            && self.prediction_matches
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct CccReport {
    pub construction: Construction,
    pub p: u32,
    pub m: usize,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub alpha: Option<u32>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub tau: Option<i64>,
    pub n: usize,
    #[serde(rename = "M")]
    pub size: usize,
    pub d: usize,
    pub omega: CompositionVector,
    pub lfvc: LfvcSummary,
    pub checks: CccChecks,
    pub predicted: CccParameters,
    pub index_count: usize,
    pub fan_in: usize,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub pairwise_distance: Option<usize>,
    pub ambient_distance: usize,
    pub ambient: CodeReport,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub codewords: Option<Vec<String>>,
}

#[derive(Debug, Clone)]
pub struct BuildRequest {
    pub p: u32,
    pub m: usize,
    pub construction: Construction,
    pub alpha: Option<u32>,
    pub modulus: Option<Vec<u32>>,
    pub emit_codewords: bool,
    pub pairwise_cap: usize,
}

impl BuildRequest {
    pub fn new(p: u32, m: usize, construction: Construction) -> Self {
        Self {
            p,
            m,
            construction,
            alpha: None,
            modulus: None,
            emit_codewords: false,
            pairwise_cap: crate::ccc::DEFAULT_PAIRWISE_CAP,
        }
    }
}

/// Builds a subcode of the requested construction together with its predictions.
pub fn build_subcode(req: &BuildRequest) -> Result<(CccCode, CccParameters)> {
    let field = make_field(req.p, req.m, req.modulus.as_deref())?;
    let options = ExtractOptions {
        pairwise_cap: req.pairwise_cap,
    };
    match req.construction {
        Construction::First => {
            let alpha = req.alpha.unwrap_or(0);
            if alpha >= req.p {
                return Err(Error::InvalidParameters(format!(
                    "alpha = {alpha} is not a residue mod {}",
                    req.p
                )));
            }
            let predicted = predicted_ccc_first(req.p, req.m, alpha)?;
            let code = Arc::new(build_trace_code(build_defining_set_d(&field, alpha)?)?);
            Ok((extract_subcode_first(&code, options)?, predicted))
        }
        which => {
            if req.alpha.is_some() {
                return Err(Error::InvalidParameters(
                    "alpha only applies to the first construction".into(),
                ));
            }
            let predicted = predicted_ccc_second(req.p, req.m, which)?;
            let code = Arc::new(build_trace_code(build_defining_set_e(&field)?)?);
            Ok((extract_subcode_second(&code, which, options)?, predicted))
        }
    }
}

pub fn build_report(req: &BuildRequest) -> Result<CccReport> {
    let (sub, predicted) = build_subcode(req)?;
    Ok(ccc_report(&sub, predicted, req.emit_codewords))
}

pub fn ccc_report(sub: &CccCode, predicted: CccParameters, emit_codewords: bool) -> CccReport {
    let field = sub.source().field();
    let params = sub.parameters();
    let lfvc = lfvc_evaluate(params.n, params.size, params.d, &params.omega)
        .expect("extracted composition sums to the code length");
    let p = field.p();
    CccReport {
        construction: sub.construction(),
        p,
        m: field.m(),
        alpha: sub.source().defining_set().alpha,
        tau: match sub.construction() {
            Construction::First => None,
            _ => tau(p, field.m()).ok(),
        },
        n: sub.n(),
        size: sub.size(),
        d: sub.d(),
        omega: sub.composition().clone(),
        lfvc: LfvcSummary {
            denominator: lfvc.denominator,
            bound: lfvc.bound,
            verdict: lfvc.verdict,
        },
        checks: CccChecks {
            composition_ok: true,
            distance_matches_ambient: sub.distance_matches_ambient(),
            prediction_matches: params == predicted,
        },
        predicted,
        index_count: sub.index_count(),
        fan_in: sub.fan_in(),
        pairwise_distance: sub.pairwise_distance(),
        ambient_distance: sub.ambient_distance(),
        ambient: CodeReport::new(sub.source(), emit_codewords),
        codewords: emit_codewords.then(|| sub.words().map(|w| codeword_string(w, p)).collect()),
    }
}
