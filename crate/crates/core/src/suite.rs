//! Verification suites over seeded sample points, and the residual report.
//!
//! Points are evaluated in parallel; each point's entries land in a fixed
//! slot, and the reduction to the report walks the slots in order, so the
//! report does not depend on scheduling.

use std::collections::BTreeMap;
use std::fmt::{self, Write as _};
use std::str::FromStr;

use rayon::prelude::*;
use serde_json::{json, Map, Value};
use thiserror::Error;

use crate::anchors::anchor;
use crate::calculus::CONVENTION_NOTE;
use crate::catalog::{make_example, Example, ExampleSpec};
use crate::chart::ChartPoint;
use crate::classifiers::{
    class_residual, frame_residuals, killing_residual, q_parallel_residual, theorem_check, ClassTag,
    Role, TolClass, Tolerances, Theorem,
};
use crate::error::GeometryError;
use crate::fstructure::{axioms_residual, structure_tensors, LocalPack, StructurePack, StructureTensor, AXIOM_KEYS};
use crate::probe::sup;
use crate::submanifold::{lemma_q_parallel_check, thsubm_check, SubmanifoldProbe};

pub const SCHEMA_VERSION: u32 = 1;
pub const ENGINE_VERSION: &str = env!("CARGO_PKG_VERSION");
pub const DEFAULT_SAMPLES: usize = 50;
pub const DEFAULT_SEED: u64 = 42;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Suite {
    Axioms,
    Classes,
    Frames,
    Theorems,
    Submanifold,
}

impl Suite {
    pub const ALL: [Suite; 5] = [
        Suite::Axioms,
        Suite::Classes,
        Suite::Frames,
        Suite::Theorems,
        Suite::Submanifold,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            Suite::Axioms => "axioms",
            Suite::Classes => "classes",
            Suite::Frames => "frames",
            Suite::Theorems => "theorems",
            Suite::Submanifold => "submanifold",
        }
    }

    /// Parses `all` or a comma-separated list; the result is sorted and
    /// deduplicated.
    pub fn parse_list(s: &str) -> Result<Vec<Suite>, GeometryError> {
        if s.trim().eq_ignore_ascii_case("all") {
            return Ok(Suite::ALL.to_vec());
        }
        let mut out: Vec<Suite> = s
            .split(',')
            .map(|part| part.trim().parse())
            .collect::<Result<_, _>>()?;
        out.sort();
        out.dedup();
        Ok(out)
    }
}

impl fmt::Display for Suite {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Suite {
    type Err = GeometryError;

    fn from_str(s: &str) -> Result<Self, GeometryError> {
        Suite::ALL
            .into_iter()
            .find(|x| x.as_str() == s)
            .ok_or_else(|| GeometryError::InvalidParameter {
                name: "suites".into(),
                reason: format!("unknown suite `{s}`"),
            })
    }
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum ReportFormat {
    #[default]
    Json,
    Text,
}

impl ReportFormat {
    pub fn as_str(self) -> &'static str {
        match self {
            ReportFormat::Json => "json",
            ReportFormat::Text => "text",
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct SuiteConfig {
    pub example: ExampleSpec,
    pub suites: Vec<Suite>,
    pub samples: usize,
    pub seed: u64,
    pub tol: Tolerances,
    pub format: ReportFormat,
}

impl SuiteConfig {
    pub fn new(example: ExampleSpec) -> Self {
        Self {
            example,
            suites: Suite::ALL.to_vec(),
            samples: DEFAULT_SAMPLES,
            seed: DEFAULT_SEED,
            tol: Tolerances::default(),
            format: ReportFormat::Json,
        }
    }

    pub fn with_suites(mut self, suites: &[Suite]) -> Self {
        self.suites = suites.to_vec();
        self
    }

    fn to_json(&self) -> Value {
        json!({
            "example": {
                "name": self.example.name,
                "params": self.example.params,
            },
            "suites": self.suites.iter().map(|s| s.as_str()).collect::<Vec<_>>(),
            "samples": self.samples,
            "seed": self.seed,
            "tol_exact": number(self.tol.exact),
            "tol_curvature": number(self.tol.curvature),
            "format": self.format.as_str(),
        })
    }
}

#[derive(Debug, Error)]
pub enum SuiteError {
    /// Unknown example or invalid parameters.
    #[error("{0}")]
    Usage(GeometryError),
    /// An evaluation failed for a reason other than a gated hypothesis.
    #[error("internal evaluation failure in `{identity}`: {source}")]
    Internal {
        identity: String,
        #[source]
        source: GeometryError,
    },
}

impl SuiteError {
    fn internal(identity: impl Into<String>, source: GeometryError) -> Self {
        SuiteError::Internal {
            identity: identity.into(),
            source,
        }
    }
}

/// Why an entry was not evaluated.
#[derive(Clone, Debug, PartialEq)]
pub enum Skip {
    HypothesisFailed { gate: String, residual: f64 },
    NotApplicable { reason: String },
}

#[derive(Clone, Debug, PartialEq)]
pub enum Verdict {
    Pass,
    Fail,
    Skipped(Skip),
}

impl Verdict {
    pub fn as_str(&self) -> &'static str {
        match self {
            Verdict::Pass => "pass",
            Verdict::Fail => "fail",
            Verdict::Skipped(Skip::HypothesisFailed { .. }) => "skipped: hypothesis failed",
            Verdict::Skipped(Skip::NotApplicable { .. }) => "skipped: not applicable",
        }
    }

    pub fn is_skipped(&self) -> bool {
        matches!(self, Verdict::Skipped(_))
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct ReportEntry {
    pub id: String,
    pub anchor: &'static str,
    pub role: Role,
    pub tolerance: f64,
    pub max: f64,
    pub mean: f64,
    /// Points at which the entry was evaluated.
    pub points: usize,
    pub verdict: Verdict,
}

impl ReportEntry {
    fn to_json(&self) -> Value {
        let mut m = Map::new();
        m.insert("id".into(), json!(self.id));
        m.insert("anchor".into(), json!(self.anchor));
        m.insert("role".into(), json!(role_str(self.role)));
        m.insert("tolerance".into(), number(self.tolerance));
        m.insert("max".into(), number(self.max));
        m.insert("mean".into(), number(self.mean));
        m.insert("points".into(), json!(self.points));
        m.insert("verdict".into(), json!(self.verdict.as_str()));
        match &self.verdict {
            Verdict::Skipped(Skip::HypothesisFailed { gate, residual }) => {
                m.insert("gate".into(), json!(gate));
                m.insert("gate_residual".into(), number(*residual));
            }
            Verdict::Skipped(Skip::NotApplicable { reason }) => {
                m.insert("reason".into(), json!(reason));
            }
            _ => {}
        }
        Value::Object(m)
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct SuiteReport {
    pub suite: Suite,
    /// `None` when the suite applies to the example.
    pub not_applicable: Option<String>,
    pub entries: Vec<ReportEntry>,
}

impl SuiteReport {
    pub fn entry(&self, id: &str) -> Option<&ReportEntry> {
        self.entries.iter().find(|e| e.id == id)
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct ResidualReport {
    pub config: SuiteConfig,
    pub example: String,
    pub suites: Vec<SuiteReport>,
    pub overall: bool,
}

fn role_str(role: Role) -> &'static str {
    match role {
        Role::Check => "check",
        Role::Info => "info",
    }
}

/// JSON number, or the string `"NaN"`/`"inf"` for non-finite values.
fn number(x: f64) -> Value {
    if x.is_finite() {
        json!(x)
    } else if x.is_nan() {
        json!("NaN")
    } else if x > 0.0 {
        json!("inf")
    } else {
        json!("-inf")
    }
}

impl ResidualReport {
    pub fn suite(&self, suite: Suite) -> Option<&SuiteReport> {
        self.suites.iter().find(|s| s.suite == suite)
    }

    /// Looks up an entry by suite and id.
    pub fn entry(&self, suite: Suite, id: &str) -> Option<&ReportEntry> {
        self.suite(suite)?.entry(id)
    }

    pub fn to_json(&self) -> Value {
        let suites: Vec<Value> = self
            .suites
            .iter()
            .map(|s| {
                let mut m = Map::new();
                m.insert("suite".into(), json!(s.suite.as_str()));
                m.insert("applicable".into(), json!(s.not_applicable.is_none()));
                if let Some(reason) = &s.not_applicable {
                    m.insert("reason".into(), json!(reason));
                }
                m.insert("entries".into(), Value::Array(s.entries.iter().map(ReportEntry::to_json).collect()));
                Value::Object(m)
            })
            .collect();
        json!({
            "schema_version": SCHEMA_VERSION,
            "engine_version": ENGINE_VERSION,
            "convention": CONVENTION_NOTE,
            "example": self.example,
            "config": self.config.to_json(),
            "overall": if self.overall { "pass" } else { "fail" },
            "suites": suites,
        })
    }

    /// Pretty-printed JSON with a trailing newline. Object keys are sorted.
    pub fn to_json_string(&self) -> String {
        let mut s = serde_json::to_string_pretty(&self.to_json()).expect("report values serialize");
        s.push('\n');
        s
    }

    /// Fixed-width table.
    pub fn to_text(&self) -> String {
        let mut out = String::new();
        let c = &self.config;
        let _ = writeln!(out, "weakf {ENGINE_VERSION}  schema {SCHEMA_VERSION}  ({CONVENTION_NOTE})");
        let _ = writeln!(out, "example  {}", self.example);
        let _ = writeln!(
            out,
            "config   samples={} seed={} tol_exact={:e} tol_curvature={:e}",
            c.samples, c.seed, c.tol.exact, c.tol.curvature
        );
        for s in &self.suites {
            let _ = writeln!(out, "\n[{}]", s.suite);
            if let Some(reason) = &s.not_applicable {
                let _ = writeln!(out, "  not applicable: {reason}");
                continue;
            }
            let _ = writeln!(
                out,
                "  {:<40} {:<5} {:>10} {:>10} {:>4} {:>8}  {:<26} anchor",
                "id", "role", "max", "mean", "pts", "tol", "verdict"
            );
            for e in &s.entries {
                let _ = writeln!(
                    out,
                    "  {:<40} {:<5} {:>10.3e} {:>10.3e} {:>4} {:>8.1e}  {:<26} {}",
                    e.id,
                    role_str(e.role),
                    e.max,
                    e.mean,
                    e.points,
                    e.tolerance,
                    e.verdict.as_str(),
                    e.anchor
                );
                if let Verdict::Skipped(skip) = &e.verdict {
                    let detail = match skip {
                        Skip::HypothesisFailed { gate, residual } => format!("gate `{gate}` residual {residual:.3e}"),
                        Skip::NotApplicable { reason } => reason.clone(),
                    };
                    let _ = writeln!(out, "  {:<40} -> {detail}", "");
                }
            }
        }
        let _ = writeln!(out, "\noverall  {}", if self.overall { "PASS" } else { "FAIL" });
        out
    }

    pub fn render(&self) -> String {
        match self.config.format {
            ReportFormat::Json => self.to_json_string(),
            ReportFormat::Text => self.to_text(),
        }
    }
}

// ------------------------------------------------------------ evaluation

#[derive(Clone, Debug)]
enum PointValue {
    Residual(f64),
    Skipped(Skip),
}

#[derive(Clone, Debug)]
struct PointEntry {
    id: String,
    anchor: &'static str,
    role: Role,
    tol: TolClass,
    value: PointValue,
}

impl PointEntry {
    fn new(id: impl Into<String>, anchor: &'static str, role: Role, value: f64) -> Self {
        Self {
            id: id.into(),
            anchor,
            role,
            tol: TolClass::Exact,
            value: PointValue::Residual(value),
        }
    }

    fn skipped(id: impl Into<String>, anchor: &'static str, role: Role, skip: Skip) -> Self {
        Self {
            value: PointValue::Skipped(skip),
            ..Self::new(id, anchor, role, 0.0)
        }
    }
}

fn role_if(claimed: bool) -> Role {
    if claimed {
        Role::Check
    } else {
        Role::Info
    }
}

type PointResult = Result<Vec<PointEntry>, SuiteError>;

fn axioms_at(lp: &LocalPack) -> PointResult {
    let ax = axioms_residual(lp).map_err(|e| SuiteError::internal("axioms", e))?;
    Ok(AXIOM_KEYS
        .iter()
        .map(|k| PointEntry::new(*k, anchor(k), Role::Check, ax.entries[k]))
        .collect())
}

fn classes_at(ex: &Example, lp: &LocalPack, tol: &Tolerances) -> PointResult {
    let mut out = Vec::new();
    for class in ClassTag::ALL {
        let role = role_if(ex.claims_class(class));
        let entry = match class_residual(lp, class, tol.exact) {
            Ok(map) => PointEntry::new(class.as_str(), class.anchor(), role, map.values().copied().fold(0.0, sup)),
            Err(GeometryError::NotWeakMetricF { identity, residual }) => PointEntry::skipped(
                class.as_str(),
                class.anchor(),
                role,
                Skip::HypothesisFailed {
                    gate: format!("weak metric f-structure ({identity})"),
                    residual,
                },
            ),
            Err(e) => return Err(SuiteError::internal(class.as_str(), e)),
        };
        out.push(entry);
    }
    for (id, which) in [
        ("N1", StructureTensor::N1),
        ("N2", StructureTensor::N2),
        ("N3", StructureTensor::N3),
        ("N4", StructureTensor::N4),
    ] {
        out.push(PointEntry::new(id, anchor(id), Role::Info, structure_tensors(lp, which)));
    }
    Ok(out)
}

fn frames_at(ex: &Example, lp: &LocalPack, tol: &Tolerances) -> PointResult {
    let role = role_if(ex.claims_class(ClassTag::WeakAlmostS) || ex.claims_class(ClassTag::WeakAlmostC));
    let fr = frame_residuals(lp);
    let (q_d, q_identity) = q_parallel_residual(lp);
    let mut out = vec![
        PointEntry::new("xi_brackets", anchor("xi_brackets"), role, fr.brackets),
        PointEntry::new("g_nabla_xi_xi", anchor("g_nabla_xi_xi"), role, fr.nabla_xi_xi),
        PointEntry::new("eta_nabla_xi_xi", anchor("eta_nabla_xi_xi"), role, fr.eta_nabla_xi_xi),
        PointEntry::new("q_parallel_D", anchor("q_parallel_D"), role, q_d),
    ];
    // the full-Y identity is a consequence of the D-restricted one
    out.push(if q_d <= tol.exact {
        PointEntry::new("q_parallel_identity", anchor("q_parallel_identity"), Role::Check, q_identity)
    } else {
        PointEntry::skipped(
            "q_parallel_identity",
            anchor("q_parallel_identity"),
            Role::Check,
            Skip::HypothesisFailed {
                gate: "q_parallel_D".into(),
                residual: q_d,
            },
        )
    });
    for i in 0..lp.s() {
        out.push(PointEntry::new(
            format!("killing[{}]", i + 1),
            anchor("killing"),
            Role::Info,
            killing_residual(lp, i),
        ));
    }
    Ok(out)
}

fn theorems_at(ex: &Example, lp: &LocalPack, tol: &Tolerances) -> PointResult {
    let mut out = Vec::new();
    for t in Theorem::ALL {
        let name = t.as_str();
        if t == Theorem::Thm32Chain && ex.embedded().is_some() {
            out.push(PointEntry::skipped(
                name,
                anchor(name),
                Role::Check,
                Skip::NotApplicable {
                    reason: "induced fields carry first derivatives only; curvature needs second".into(),
                },
            ));
            continue;
        }
        match theorem_check(lp, t, tol) {
            Ok(entries) => out.extend(entries.into_iter().map(|e| PointEntry {
                id: format!("{name}.{}", e.id),
                anchor: e.anchor,
                role: e.role,
                tol: e.tol,
                value: PointValue::Residual(e.residual),
            })),
            Err(GeometryError::HypothesisNotSatisfied { gate, residual }) => out.push(PointEntry::skipped(
                name,
                anchor(name),
                Role::Check,
                Skip::HypothesisFailed { gate, residual },
            )),
            Err(e) => return Err(SuiteError::internal(name, e)),
        }
    }
    Ok(out)
}

fn submanifold_at(ex: &Example, lp: &LocalPack, tol: &Tolerances) -> PointResult {
    let (sub, case) = ex.embedded().expect("submanifold suite only runs on embeddings");
    let probe = SubmanifoldProbe::from_local(sub, lp.clone()).map_err(|e| SuiteError::internal("submanifold probe", e))?;
    let check = thsubm_check(&probe, case, tol).map_err(|e| SuiteError::internal("thsubm", e))?;
    let hyp_role = role_if(ex.claims_class(case.conclusion()));
    let mut out: Vec<PointEntry> = check
        .hypotheses
        .iter()
        .map(|e| PointEntry::new(e.id, e.anchor, hyp_role, e.residual))
        .collect();
    out.extend(check.identities.iter().map(|e| PointEntry::new(e.id, e.anchor, Role::Check, e.residual)));
    let failed = check.hypothesis_error(tol);
    for e in &check.conclusions {
        out.push(match &failed {
            None => PointEntry::new(e.id, e.anchor, Role::Check, e.residual),
            Some(GeometryError::HypothesisNotSatisfied { gate, residual }) => PointEntry::skipped(
                e.id,
                e.anchor,
                Role::Check,
                Skip::HypothesisFailed {
                    gate: gate.clone(),
                    residual: *residual,
                },
            ),
            Some(other) => return Err(SuiteError::internal(e.id, other.clone())),
        });
    }
    let lemma = lemma_q_parallel_check(&probe);
    out.push(PointEntry::new("f2_normal_perp", anchor("f2_normal_perp"), Role::Info, lemma.f2_normal_perp));
    out.push(PointEntry::new(
        "nabla_f2_tangential",
        anchor("nabla_f2_tangential"),
        Role::Info,
        lemma.nabla_f2_tangential,
    ));
    let lemma_gate = sup(lemma.f2_normal_perp, lemma.nabla_f2_tangential);
    out.push(if lemma_gate <= tol.exact {
        PointEntry::new("lemma_q_parallel", anchor("lemma_q_parallel"), Role::Check, lemma.q_parallel)
    } else {
        PointEntry::skipped(
            "lemma_q_parallel",
            anchor("lemma_q_parallel"),
            Role::Check,
            Skip::HypothesisFailed {
                gate: "f2_normal_perp, nabla_f2_tangential".into(),
                residual: lemma_gate,
            },
        )
    });
    Ok(out)
}

#[derive(Default)]
struct Accumulator {
    anchor: &'static str,
    role: Option<Role>,
    tol: Option<TolClass>,
    max: f64,
    sum: f64,
    points: usize,
    skip: Option<Skip>,
}

impl Accumulator {
    fn add(&mut self, e: &PointEntry) {
        self.anchor = e.anchor;
        self.role = Some(e.role);
        self.tol = Some(e.tol);
        match &e.value {
            PointValue::Residual(r) => {
                self.max = sup(self.max, *r);
                self.sum += r;
                self.points += 1;
            }
            PointValue::Skipped(skip) => {
                self.skip = Some(match (self.skip.take(), skip) {
                    (
                        Some(Skip::HypothesisFailed { gate, residual }),
                        Skip::HypothesisFailed { residual: r, .. },
                    ) => Skip::HypothesisFailed {
                        gate,
                        residual: sup(residual, *r),
                    },
                    (Some(first), _) => first,
                    (None, s) => s.clone(),
                });
            }
        }
    }

    fn finish(self, id: String, tol: &Tolerances) -> ReportEntry {
        let tolerance = tol.get(self.tol.unwrap_or(TolClass::Exact));
        let mean = if self.points == 0 {
            0.0
        } else {
            self.sum / self.points as f64
        };
        let verdict = match self.skip {
            Some(skip) => Verdict::Skipped(skip),
            None if self.max <= tolerance => Verdict::Pass,
            None => Verdict::Fail,
        };
        ReportEntry {
            id,
            anchor: self.anchor,
            role: self.role.unwrap_or(Role::Check),
            tolerance,
            max: self.max,
            mean,
            points: self.points,
            verdict,
        }
    }
}

/// Reduces per-point entries (in point order) to report entries, keeping
/// first-seen id order.
fn reduce(per_point: &[Vec<PointEntry>], tol: &Tolerances) -> Vec<ReportEntry> {
    let mut order: Vec<String> = Vec::new();
    let mut acc: BTreeMap<String, Accumulator> = BTreeMap::new();
    for entries in per_point {
        for e in entries {
            if !acc.contains_key(&e.id) {
                order.push(e.id.clone());
            }
            acc.entry(e.id.clone()).or_default().add(e);
        }
    }
    // a group skipped at any point is reported only by its skip entry
    let skipped: Vec<String> = order
        .iter()
        .filter(|id| acc[*id].skip.is_some())
        .cloned()
        .collect();
    order
        .into_iter()
        .filter(|id| {
            !skipped
                .iter()
                .any(|g| id.len() > g.len() && id.starts_with(g.as_str()) && id.as_bytes()[g.len()] == b'.')
        })
        .map(|id| {
            let a = acc.remove(&id).expect("accumulated id");
            a.finish(id, tol)
        })
        .collect()
}

fn evaluate_point(
    ex: &Example,
    pack: &StructurePack,
    p: &ChartPoint,
    k: usize,
    config: &SuiteConfig,
) -> Result<Vec<Vec<PointEntry>>, SuiteError> {
    let lp = pack
        .local(p, config.seed, k as u64)
        .map_err(|e| SuiteError::internal("local pack", e))?;
    config
        .suites
        .iter()
        .map(|suite| match suite {
            Suite::Axioms => axioms_at(&lp),
            Suite::Classes => classes_at(ex, &lp, &config.tol),
            Suite::Frames => frames_at(ex, &lp, &config.tol),
            Suite::Theorems => theorems_at(ex, &lp, &config.tol),
            Suite::Submanifold if ex.embedded().is_some() => submanifold_at(ex, &lp, &config.tol),
            Suite::Submanifold => Ok(Vec::new()),
        })
        .collect()
}

/// Builds the example and runs the configured suites.
pub fn run_suite(config: &SuiteConfig) -> Result<ResidualReport, SuiteError> {
    if config.samples == 0 {
        return Err(SuiteError::Usage(GeometryError::InvalidParameter {
            name: "samples".into(),
            reason: "must be at least 1".into(),
        }));
    }
    let ex = make_example(&config.example).map_err(SuiteError::Usage)?;
    run_on(&ex, config)
}

/// Runs the configured suites on an already built example.
pub fn run_on(ex: &Example, config: &SuiteConfig) -> Result<ResidualReport, SuiteError> {
    let pack = ex.pack().map_err(|e| SuiteError::internal("induce_structure", e))?;
    let points = pack.chart().sample_points(config.seed, config.samples);
    let per_point: Vec<Vec<Vec<PointEntry>>> = points
        .par_iter()
        .enumerate()
        .map(|(k, p)| evaluate_point(ex, &pack, p, k, config))
        .collect::<Result<_, _>>()?;

    let suites: Vec<SuiteReport> = config
        .suites
        .iter()
        .enumerate()
        .map(|(si, &suite)| {
            if suite == Suite::Submanifold && ex.embedded().is_none() {
                return SuiteReport {
                    suite,
                    not_applicable: Some("example is not an embedded submanifold".into()),
                    entries: Vec::new(),
                };
            }
            let slots: Vec<Vec<PointEntry>> = per_point.iter().map(|pt| pt[si].clone()).collect();
            SuiteReport {
                suite,
                not_applicable: None,
                entries: reduce(&slots, &config.tol),
            }
        })
        .collect();
    let overall = suites
        .iter()
        .flat_map(|s| &s.entries)
        .filter(|e| e.role == Role::Check)
        .all(|e| e.verdict != Verdict::Fail);
    Ok(ResidualReport {
        config: config.clone(),
        example: pack.name().to_string(),
        suites,
        overall,
    })
}
