//! Sweeps that compare every closed form against enumeration and collect
//! the outcome into a serializable report.

use std::sync::Arc;
use std::time::Instant;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;
use serde_json::{json, Value};

use crate::ccc::{
    extract_subcode_first, extract_subcode_second, lfvc_evaluate, predicted_ccc_first,
    predicted_ccc_second, CccCode, CccError, CccParameters, Construction, ExtractOptions,
    LfvcVerdict, DEFAULT_PAIRWISE_CAP,
};
use crate::charsums::{
    count_trace_fiber, count_trace_square_fiber, gauss_sum_fp, gauss_sum_fq, CharSumError,
    ComplexValue, FiberCountReport, QuadraticSums, SumCheck, EPSILON,
};
use crate::codes::{
    build_defining_set_d, build_defining_set_e, build_trace_code, predicted_length_e,
    predicted_weight_distribution_d, predicted_weight_distribution_e, tau, weight_distribution,
    CodeError, TraceCode,
};
use crate::gfpm::{make_field, Field, FieldElement};
use crate::{Error, Result};

pub const DEFAULT_Q_CAP: u64 = 100_000;
/// Fields up to this order get every quadratic triple checked.
pub const EXHAUSTIVE_QUADRATIC_LIMIT: u64 = 27;
pub const QUADRATIC_SAMPLES: usize = 128;

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum AlphaSelection {
    All,
    List(Vec<u32>),
}

#[derive(Debug, Clone, Serialize)]
pub struct SweepSpec {
    pub primes: Vec<u32>,
    pub m_min: usize,
    pub m_max: usize,
    pub q_cap: u64,
    pub constructions: Vec<Construction>,
    pub alphas: AlphaSelection,
    /// Also run the per-field character sum and fiber checks.
    pub field_checks: bool,
    #[serde(skip)]
    pub pairwise_cap: usize,
    #[serde(skip)]
    pub include_timing: bool,
}

impl Default for SweepSpec {
    fn default() -> Self {
        Self {
            primes: vec![3, 5, 7],
            m_min: 2,
            m_max: 5,
            q_cap: DEFAULT_Q_CAP,
            constructions: Construction::ALL.to_vec(),
            alphas: AlphaSelection::All,
            field_checks: true,
            pairwise_cap: DEFAULT_PAIRWISE_CAP,
            include_timing: false,
        }
    }
}

impl SweepSpec {
    pub fn empty() -> Self {
        Self {
            primes: Vec::new(),
            ..Self::default()
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Status {
    Pass,
    Fail,
    Skip,
}

#[derive(Debug, Clone, Serialize)]
pub struct CheckRecord {
    pub name: String,
    pub status: Status,
    pub predicted: Value,
    pub enumerated: Value,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub note: Option<String>,
}

impl CheckRecord {
    fn compare<T: Serialize + PartialEq>(name: &str, predicted: T, enumerated: T) -> Self {
        let status = if predicted == enumerated {
            Status::Pass
        } else {
            Status::Fail
        };
        Self {
            name: name.to_string(),
            status,
            predicted: json!(predicted),
            enumerated: json!(enumerated),
            note: None,
        }
    }

    fn flag(name: &str, ok: bool, detail: Value) -> Self {
        Self {
            name: name.to_string(),
            status: if ok { Status::Pass } else { Status::Fail },
            predicted: Value::Null,
            enumerated: detail,
            note: None,
        }
    }

    fn failed(name: &str, err: &dyn std::fmt::Display) -> Self {
        Self {
            name: name.to_string(),
            status: Status::Fail,
            predicted: Value::Null,
            enumerated: Value::Null,
            note: Some(err.to_string()),
        }
    }

    fn skipped(name: &str, note: &str) -> Self {
        Self {
            name: name.to_string(),
            status: Status::Skip,
            predicted: Value::Null,
            enumerated: Value::Null,
            note: Some(note.to_string()),
        }
    }

    fn with_note(mut self, note: impl Into<String>) -> Self {
        self.note = Some(note.into());
        self
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum InstanceKind {
    Field,
    First,
    #[serde(rename = "second-S")]
    SecondS,
    SecondComplement,
}

impl From<Construction> for InstanceKind {
    fn from(c: Construction) -> Self {
        match c {
            Construction::First => InstanceKind::First,
            Construction::SecondS => InstanceKind::SecondS,
            Construction::SecondComplement => InstanceKind::SecondComplement,
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct InstanceRecord {
    pub p: u32,
    pub m: usize,
    pub kind: InstanceKind,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub alpha: Option<u32>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub tau: Option<i64>,
    pub status: Status,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub reason: Option<String>,
    pub checks: Vec<CheckRecord>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub elapsed_ms: Option<f64>,
}

impl InstanceRecord {
    fn new(p: u32, m: usize, kind: InstanceKind, alpha: Option<u32>) -> Self {
        Self {
            p,
            m,
            kind,
            alpha,
            tau: None,
            status: Status::Pass,
            reason: None,
            checks: Vec::new(),
            elapsed_ms: None,
        }
    }

    fn skip(mut self, reason: impl Into<String>) -> Self {
        self.status = Status::Skip;
        self.reason = Some(reason.into());
        self
    }

    fn fail(mut self, reason: impl Into<String>) -> Self {
        self.status = Status::Fail;
        self.reason = Some(reason.into());
        self
    }

    fn push(&mut self, check: CheckRecord) {
        if check.status == Status::Fail {
            self.status = Status::Fail;
        }
        self.checks.push(check);
    }

    pub fn check(&self, name: &str) -> Option<&CheckRecord> {
        self.checks.iter().find(|c| c.name == name)
    }
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize)]
pub struct Summary {
    pub pass: usize,
    pub fail: usize,
    pub skip: usize,
}

#[derive(Debug, Clone, Serialize)]
pub struct VerificationReport {
    #[serde(skip_serializing_if = "Option::is_none")]
    pub generated_unix: Option<u64>,
    pub spec: SweepSpec,
    pub instances: Vec<InstanceRecord>,
    pub summary: Summary,
}

impl VerificationReport {
    pub fn passed(&self) -> bool {
        self.summary.fail == 0
    }
}

/// Runs every requested instance. Instances are evaluated in parallel and
/// reported in `(p, m)` order, field checks first, then the first construction
/// by `alpha`, then the two second-construction subcodes.
pub fn run_sweep(spec: &SweepSpec) -> VerificationReport {
    let mut grid = Vec::new();
    for &p in &spec.primes {
        for m in spec.m_min..=spec.m_max {
            grid.push((p, m));
        }
    }
    let instances: Vec<InstanceRecord> = grid
        .par_iter()
        .map(|&(p, m)| sweep_field(spec, p, m))
        .collect::<Vec<_>>()
        .into_iter()
        .flatten()
        .collect();
    let mut summary = Summary::default();
    for inst in &instances {
        match inst.status {
            Status::Pass => summary.pass += 1,
            Status::Fail => summary.fail += 1,
            Status::Skip => summary.skip += 1,
        }
    }
    VerificationReport {
        generated_unix: spec.include_timing.then(|| {
            std::time::SystemTime::now()
                .duration_since(std::time::UNIX_EPOCH)
                .map_or(0, |d| d.as_secs())
        }),
        spec: spec.clone(),
        instances,
        summary,
    }
}

fn order(p: u32, m: usize) -> Option<u64> {
    (p as u64).checked_pow(m as u32)
}

fn sweep_field(spec: &SweepSpec, p: u32, m: usize) -> Vec<InstanceRecord> {
    let alphas: Vec<u32> = match &spec.alphas {
        AlphaSelection::All => (0..p).collect(),
        AlphaSelection::List(list) => list.iter().copied().filter(|&a| a < p).collect(),
    };
    let mut planned: Vec<(InstanceKind, Option<u32>)> = Vec::new();
    if spec.field_checks {
        planned.push((InstanceKind::Field, None));
    }
    for &c in &spec.constructions {
        match c {
            Construction::First => {
                planned.extend(alphas.iter().map(|&a| (InstanceKind::First, Some(a))))
            }
            other => planned.push((other.into(), None)),
        }
    }
    planned.sort_by_key(|&(k, a)| (k, a));

    let field = match order(p, m) {
        Some(q) if q <= spec.q_cap => match make_field(p, m, None) {
            Ok(f) => f,
            Err(e) => {
                return planned
                    .into_iter()
                    .map(|(k, a)| {
                        InstanceRecord::new(p, m, k, a).skip(format!("invalid field: {e}"))
                    })
                    .collect()
            }
        },
        _ => {
            return planned
                .into_iter()
                .map(|(k, a)| {
                    InstanceRecord::new(p, m, k, a)
                        .skip(format!("{p}^{m} exceeds q_cap = {}", spec.q_cap))
                })
                .collect()
        }
    };

    let options = ExtractOptions {
        pairwise_cap: spec.pairwise_cap,
    };
    let mut e_code: Option<std::result::Result<Arc<TraceCode>, CodeError>> = None;
    let mut second_index_counts = Vec::new();
    let mut out = Vec::new();
    for (kind, alpha) in planned {
        let start = Instant::now();
        let mut rec = match kind {
            InstanceKind::Field => field_instance(&field),
            InstanceKind::First => first_instance(&field, alpha.unwrap(), options),
            InstanceKind::SecondS | InstanceKind::SecondComplement => {
                let which = if kind == InstanceKind::SecondS {
                    Construction::SecondS
                } else {
                    Construction::SecondComplement
                };
                if !m.is_multiple_of(2) {
                    InstanceRecord::new(p, m, kind, None).skip("second construction needs even m")
                } else {
                    let code = e_code.get_or_insert_with(|| {
                        build_defining_set_e(&field)
                            .and_then(build_trace_code)
                            .map(Arc::new)
                    });
                    let (rec, count) = second_instance(&field, code, which, options);
                    if let Some(c) = count {
                        second_index_counts.push(c);
                    }
                    rec
                }
            }
        };
        if kind == InstanceKind::SecondComplement
            && second_index_counts.len() == 2
            && rec.status != Status::Skip
        {
            let total = second_index_counts.iter().sum::<usize>() as u64 + 1;
            rec.push(CheckRecord::compare("index-partition", field.q(), total));
        }
        if spec.include_timing {
            rec.elapsed_ms = Some(start.elapsed().as_secs_f64() * 1e3);
        }
        out.push(rec);
    }
    out
}

fn sum_check_record(
    name: &str,
    result: std::result::Result<SumCheck, CharSumError>,
) -> CheckRecord {
    match result {
        Ok(s) => CheckRecord::flag(name, s.agrees(), complex_pair(&s)),
        Err(CharSumError::ClosedFormMismatch {
            evaluated,
            closed_form,
        }) => CheckRecord::flag(
            name,
            false,
            complex_pair(&SumCheck {
                evaluated,
                closed_form,
            }),
        ),
        Err(e) => CheckRecord::failed(name, &e),
    }
}

fn complex_pair(s: &SumCheck) -> Value {
    json!({
        "evaluated": complex_json(s.evaluated),
        "closed_form": complex_json(s.closed_form),
        "deviation": s.deviation(),
    })
}

pub fn complex_json(z: ComplexValue) -> Value {
    json!([z.re, z.im])
}

fn fiber_result(
    r: std::result::Result<FiberCountReport, CharSumError>,
) -> std::result::Result<FiberCountReport, CharSumError> {
    match r {
        Err(CharSumError::PredictionMismatch(report)) => Ok(*report),
        other => other,
    }
}

fn field_instance(field: &Field) -> InstanceRecord {
    let (p, m) = (field.p(), field.m());
    let mut rec = InstanceRecord::new(p, m, InstanceKind::Field, None);
    rec.push(sum_check_record("gauss-sum-extension", gauss_sum_fq(field)));
    rec.push(sum_check_record("gauss-sum-prime", gauss_sum_fp(p)));
    match quadratic_sum_sweep(field, QUADRATIC_SAMPLES, seed_for(p, m)) {
        Ok(q) => rec.push(
            CheckRecord::flag(
                "quadratic-sums",
                q.max_deviation <= EPSILON,
                json!({"triples": q.triples, "exhaustive": q.exhaustive, "max_deviation": q.max_deviation}),
            ),
        ),
        Err(e) => rec.push(CheckRecord::failed("quadratic-sums", &e)),
    }
    match fiber_table(field) {
        Ok(t) => {
            let lin_pred: Vec<u64> = t.linear.iter().map(|r| r.count_predicted).collect();
            let lin_enum: Vec<u64> = t.linear.iter().map(|r| r.count_enumerated).collect();
            rec.push(CheckRecord::compare(
                "linear-trace-fibers",
                lin_pred,
                lin_enum,
            ));
            let quad_pred: Vec<u64> = t.quadratic.iter().map(|r| r.count_predicted).collect();
            let quad_enum: Vec<u64> = t.quadratic.iter().map(|r| r.count_enumerated).collect();
            rec.push(CheckRecord::compare(
                "quadratic-trace-fibers",
                quad_pred,
                quad_enum,
            ));
            rec.push(CheckRecord::compare(
                "fiber-partition",
                vec![field.q(), field.q()],
                vec![t.linear_total(), t.quadratic_total()],
            ));
        }
        Err(e) => rec.push(CheckRecord::failed("fibers", &e)),
    }
    rec
}

fn first_instance(field: &Field, alpha: u32, options: ExtractOptions) -> InstanceRecord {
    let (p, m) = (field.p(), field.m());
    let rec = InstanceRecord::new(p, m, InstanceKind::First, Some(alpha));
    if m < 2 {
        return rec.skip("first construction needs m >= 2");
    }
    let mut rec = rec;
    let predicted_table = match predicted_weight_distribution_d(p, m, alpha) {
        Ok(t) => t,
        Err(e) => return rec.fail(e.to_string()),
    };
    let code = match build_defining_set_d(field, alpha).and_then(build_trace_code) {
        Ok(c) => Arc::new(c),
        Err(e) => return rec.fail(e.to_string()),
    };
    let expected_len = (p as u64).pow(m as u32 - 1) - u64::from(alpha == 0);
    rec.push(CheckRecord::compare(
        "length",
        expected_len,
        code.length() as u64,
    ));
    rec.push(CheckRecord::compare(
        "weight-distribution",
        &predicted_table,
        &weight_distribution(&code),
    ));
    let expected_dim = if alpha == 0 { m as u32 - 1 } else { m as u32 };
    rec.push(CheckRecord::compare(
        "dimension",
        expected_dim,
        code.dimension(),
    ));
    let expected_kernel: Vec<u64> = if alpha == 0 {
        (0..p as u64).collect()
    } else {
        vec![0]
    };
    rec.push(CheckRecord::compare(
        "index-kernel",
        expected_kernel,
        code.kernel_ranks(),
    ));

    let predicted = predicted_ccc_first(p, m, alpha);
    let extracted = extract_subcode_first(&code, options);
    push_subcode_checks(&mut rec, predicted, extracted, |lfvc| {
        if alpha == 0 {
            lfvc.verdict == LfvcVerdict::Optimal
                && lfvc.size as i128 * lfvc.denominator == (lfvc.n * lfvc.d) as i128
        } else {
            lfvc.denominator == 0
        }
    });
    rec
}

fn second_instance(
    field: &Field,
    code: &std::result::Result<Arc<TraceCode>, CodeError>,
    which: Construction,
    options: ExtractOptions,
) -> (InstanceRecord, Option<usize>) {
    let (p, m) = (field.p(), field.m());
    let mut rec = InstanceRecord::new(p, m, which.into(), None);
    rec.tau = tau(p, m).ok();
    let predicted_len = predicted_length_e(p, m).unwrap_or(0);
    let code = match code {
        Ok(c) => c,
        Err(CodeError::DegenerateSet) if predicted_len <= 0 => {
            return (
                rec.skip(format!("E is empty (predicted length {predicted_len})")),
                None,
            )
        }
        Err(e) => return (rec.fail(e.to_string()), None),
    };
    rec.push(CheckRecord::compare(
        "length",
        predicted_len,
        code.length() as i64,
    ));
    match fiber_result(count_trace_square_fiber(field, 0)) {
        Ok(f) => rec.push(CheckRecord::compare(
            "length-vs-square-fiber",
            f.count_enumerated as i64 - 1,
            code.length() as i64,
        )),
        Err(e) => rec.push(CheckRecord::failed("length-vs-square-fiber", &e)),
    }
    match predicted_weight_distribution_e(p, m) {
        Ok(t) => rec.push(CheckRecord::compare(
            "weight-distribution",
            &t,
            &weight_distribution(code),
        )),
        Err(e) => rec.push(CheckRecord::failed("weight-distribution", &e)),
    }
    rec.push(CheckRecord::compare(
        "dimension",
        m as u32,
        code.dimension(),
    ));

    let predicted = predicted_ccc_second(p, m, which);
    let extracted = extract_subcode_second(code, which, options);
    let count = extracted.as_ref().ok().map(CccCode::index_count);
    push_subcode_checks(&mut rec, predicted, extracted, |lfvc| {
        lfvc.denominator <= 0 && lfvc.verdict == LfvcVerdict::BoundInapplicable
    });
    (rec, count)
}

fn push_subcode_checks(
    rec: &mut InstanceRecord,
    predicted: std::result::Result<CccParameters, CccError>,
    extracted: std::result::Result<CccCode, CccError>,
    lfvc_expectation: impl Fn(&crate::ccc::LfvcReport) -> bool,
) {
    let sub = match extracted {
        Ok(sub) => sub,
        Err(e) => {
            let name = match e {
                CccError::CompositionViolation { .. } => "constant-composition",
                CccError::DuplicateWords => "duplicate-free",
                _ => "extract",
            };
            rec.push(CheckRecord::failed(name, &e));
            return;
        }
    };
    rec.push(CheckRecord::flag(
        "constant-composition",
        true,
        json!({"words": sub.size(), "indices": sub.index_count(), "omega": sub.composition()}),
    ));
    match predicted {
        Ok(pred) => rec.push(CheckRecord::compare(
            "ccc-parameters",
            pred,
            sub.parameters(),
        )),
        Err(e) => rec.push(CheckRecord::failed("ccc-parameters", &e)),
    }
    match sub.pairwise_distance() {
        Some(d) => rec.push(CheckRecord::compare(
            "distance-matches-ambient",
            sub.ambient_distance(),
            d,
        )),
        None => rec.push(
            CheckRecord::skipped(
                "distance-matches-ambient",
                "pairwise oracle skipped above the word cap",
            )
            .with_note(format!(
                "M = {} exceeds the pairwise cap; d taken from the ambient minimum weight",
                sub.size()
            )),
        ),
    }
    let params = sub.parameters();
    match lfvc_evaluate(params.n, params.size, params.d, &params.omega) {
        Ok(lfvc) => {
            let ok = lfvc_expectation(&lfvc);
            rec.push(CheckRecord::flag("lfvc", ok, json!(lfvc)));
        }
        Err(e) => rec.push(CheckRecord::failed("lfvc", &e)),
    }
}

fn seed_for(p: u32, m: usize) -> u64 {
    0x7472_6163_6563_6300 ^ ((p as u64) << 16) ^ m as u64
}

#[derive(Debug, Clone, Serialize)]
pub struct QuadraticSweep {
    pub triples: usize,
    pub exhaustive: bool,
    pub max_deviation: f64,
}

/// Checks the quadratic completion identity on every triple when
/// `q <= 27`, otherwise on `samples` seeded random triples.
pub fn quadratic_sum_sweep(field: &Field, samples: usize, seed: u64) -> Result<QuadraticSweep> {
    let sums = QuadraticSums::new(field);
    let q = field.q();
    let deviation = |r: u64, s: u64, t: u64| -> Result<f64> {
        let a2 = FieldElement::from_rank(field, r);
        let a1 = FieldElement::from_rank(field, s);
        let a0 = FieldElement::from_rank(field, t);
        let (evaluated, closed) = sums.evaluate(&a2, &a1, &a0)?;
        Ok(SumCheck {
            evaluated,
            closed_form: closed,
        }
        .deviation())
    };
    if q <= EXHAUSTIVE_QUADRATIC_LIMIT {
        let mut max: f64 = 0.0;
        let mut triples = 0;
        for r in 1..q {
            for s in 0..q {
                for t in 0..q {
                    max = max.max(deviation(r, s, t)?);
                    triples += 1;
                }
            }
        }
        Ok(QuadraticSweep {
            triples,
            exhaustive: true,
            max_deviation: max,
        })
    } else {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let triples: Vec<(u64, u64, u64)> = (0..samples)
            .map(|_| {
                (
                    rng.random_range(1..q),
                    rng.random_range(0..q),
                    rng.random_range(0..q),
                )
            })
            .collect();
        let devs = triples
            .par_iter()
            .map(|&(r, s, t)| deviation(r, s, t))
            .collect::<Result<Vec<f64>>>()?;
        Ok(QuadraticSweep {
            triples: samples,
            exhaustive: false,
            max_deviation: devs.into_iter().fold(0.0, f64::max),
        })
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct SumReport {
    pub evaluated: Value,
    pub closed_form: Value,
    pub deviation: f64,
}

impl From<SumCheck> for SumReport {
    fn from(s: SumCheck) -> Self {
        Self {
            evaluated: complex_json(s.evaluated),
            closed_form: complex_json(s.closed_form),
            deviation: s.deviation(),
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct GaussCheckReport {
    pub p: u32,
    pub m: usize,
    pub gauss_sum_extension: SumReport,
    pub gauss_sum_prime: SumReport,
    pub quadratic_sums: QuadraticSweep,
    pub max_deviation: f64,
    pub tolerance: f64,
    pub passed: bool,
}

fn unpack(r: std::result::Result<SumCheck, CharSumError>) -> Result<SumCheck> {
    match r {
        Ok(s) => Ok(s),
        Err(CharSumError::ClosedFormMismatch {
            evaluated,
            closed_form,
        }) => Ok(SumCheck {
            evaluated,
            closed_form,
        }),
        Err(e) => Err(e.into()),
    }
}

/// Both Gauss sums and a batch of quadratic sums for one field.
pub fn gauss_check(p: u32, m: usize, modulus: Option<&[u32]>) -> Result<GaussCheckReport> {
    let field = make_field(p, m, modulus)?;
    let fq = unpack(gauss_sum_fq(&field))?;
    let fp = unpack(gauss_sum_fp(p))?;
    let quad = quadratic_sum_sweep(&field, QUADRATIC_SAMPLES, seed_for(p, m))?;
    let max_deviation = fq.deviation().max(fp.deviation()).max(quad.max_deviation);
    Ok(GaussCheckReport {
        p,
        m,
        gauss_sum_extension: fq.into(),
        gauss_sum_prime: fp.into(),
        quadratic_sums: quad,
        max_deviation,
        tolerance: EPSILON,
        passed: max_deviation <= EPSILON,
    })
}

#[derive(Debug, Clone, Serialize)]
pub struct FiberTable {
    pub p: u32,
    pub m: usize,
    pub linear: Vec<FiberCountReport>,
    pub quadratic: Vec<FiberCountReport>,
}

impl FiberTable {
    pub fn linear_total(&self) -> u64 {
        self.linear.iter().map(|r| r.count_enumerated).sum()
    }

    pub fn quadratic_total(&self) -> u64 {
        self.quadratic.iter().map(|r| r.count_enumerated).sum()
    }

    pub fn passed(&self) -> bool {
        let q = (self.p as u64).pow(self.m as u32);
        self.linear
            .iter()
            .chain(&self.quadratic)
            .all(|r| r.count_enumerated == r.count_predicted)
            && self.linear_total() == q
            && self.quadratic_total() == q
    }

    pub fn to_csv(&self) -> String {
        let mut out = String::from("kind,alpha,enumerated,predicted\n");
        for (kind, rows) in [
            ("linear-trace", &self.linear),
            ("quadratic-trace", &self.quadratic),
        ] {
            for r in rows {
                out.push_str(&format!(
                    "{kind},{},{},{}\n",
                    r.alpha, r.count_enumerated, r.count_predicted
                ));
            }
        }
        out
    }
}

pub fn fiber_table(field: &Field) -> Result<FiberTable> {
    let p = field.p();
    let linear = (0..p)
        .map(|a| fiber_result(count_trace_fiber(field, a)))
        .collect::<std::result::Result<Vec<_>, _>>()?;
    let quadratic = (0..p)
        .map(|a| fiber_result(count_trace_square_fiber(field, a)))
        .collect::<std::result::Result<Vec<_>, _>>()?;
    Ok(FiberTable {
        p,
        m: field.m(),
        linear,
        quadratic,
    })
}

pub fn fibers(p: u32, m: usize, modulus: Option<&[u32]>) -> Result<FiberTable> {
    let field = make_field(p, m, modulus)?;
    fiber_table(&field)
}

/// Validates that the primes in a sweep are odd primes.
pub fn validate_spec(spec: &SweepSpec) -> Result<()> {
    for &p in &spec.primes {
        if p == 2 || !crate::gfpm::is_prime(p) {
            return Err(Error::InvalidParameters(format!("{p} is not an odd prime")));
        }
    }
    if spec.m_min == 0 || spec.m_min > spec.m_max && !spec.primes.is_empty() {
        return Err(Error::InvalidParameters(format!(
            "invalid degree range {}..={}",
            spec.m_min, spec.m_max
        )));
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn empty_sweep_succeeds() {
        let r = run_sweep(&SweepSpec::empty());
        assert!(r.instances.is_empty());
        assert!(r.passed());
    }

    #[test]
    fn small_sweep_passes() {
        let spec = SweepSpec {
            primes: vec![3],
            m_min: 2,
            m_max: 3,
            ..SweepSpec::default()
        };
        let r = run_sweep(&spec);
        assert!(r.passed(), "{:#?}", r.summary);
        // m=2: field + 3 alphas + S + complement; m=3: field + 3 alphas + 2 skipped
        assert_eq!(r.instances.len(), 12);
        assert_eq!(r.summary.skip, 2);
    }

    #[test]
    fn degenerate_and_capped_instances_are_skipped() {
        let spec = SweepSpec {
            primes: vec![5],
            m_min: 2,
            m_max: 3,
            q_cap: 25,
            constructions: vec![Construction::SecondS],
            field_checks: false,
            ..SweepSpec::default()
        };
        let r = run_sweep(&spec);
        assert_eq!(r.instances.len(), 2);
        assert!(r.instances.iter().all(|i| i.status == Status::Skip));
        assert!(r.instances[0].reason.as_deref().unwrap().contains("empty"));
        assert!(r.instances[1].reason.as_deref().unwrap().contains("q_cap"));
        assert!(r.passed());
    }

    #[test]
    fn sweep_output_is_deterministic() {
        let spec = SweepSpec {
            primes: vec![3, 5],
            m_min: 2,
            m_max: 2,
            ..SweepSpec::default()
        };
        let a = serde_json::to_string(&run_sweep(&spec)).unwrap();
        let b = serde_json::to_string(&run_sweep(&spec)).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn gauss_check_small() {
        let r = gauss_check(3, 2, None).unwrap();
        assert!(r.passed);
        assert!(r.quadratic_sums.exhaustive);
        assert_eq!(r.quadratic_sums.triples, 8 * 9 * 9);
        let r = gauss_check(7, 1, None).unwrap();
        assert!(r.passed);
    }

    #[test]
    fn fiber_tables() {
        let t = fibers(3, 2, None).unwrap();
        let quad: Vec<u64> = t.quadratic.iter().map(|r| r.count_enumerated).collect();
        assert_eq!(quad, vec![5, 2, 2]);
        assert!(t.passed());
        let t = fibers(3, 3, None).unwrap();
        let lin: Vec<u64> = t.linear.iter().map(|r| r.count_enumerated).collect();
        assert_eq!(lin, vec![9, 9, 9]);
        assert!(t
            .to_csv()
            .starts_with("kind,alpha,enumerated,predicted\nlinear-trace,0,9,9\n"));
    }

    #[test]
    fn spec_validation() {
        let mut spec = SweepSpec {
            primes: vec![3, 4],
            ..SweepSpec::default()
        };
        assert!(validate_spec(&spec).is_err());
        spec.primes = vec![2];
        assert!(validate_spec(&spec).is_err());
        assert!(validate_spec(&SweepSpec::default()).is_ok());
    }
}
