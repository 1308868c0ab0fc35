//! JSON documents emitted on standard output. Every document carries a
//! `document` tag naming its kind, and rationals are `p/q` strings.

use serde::{Deserialize, Serialize};
use uniq_core::arith::{Closedness, IntervalSet, Rational};
use uniq_core::constraints::ExponentAssignment;
use uniq_core::scenarios::{
    build_scenario, default_s0_tol, is_applicable, sigma_window, theorem_predicate_with_tol, literature_predicate, PredicateId, ProblemParams,
    S0Enclosure, ScenarioError, ScenarioId,
};
use uniq_core::VarId;

pub const TOOL_NAME: &str = env!("CARGO_PKG_NAME");
pub const TOOL_VERSION: &str = env!("CARGO_PKG_VERSION");

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Tool {
    pub name: String,
    pub version: String,
}

impl Tool {
    pub fn current() -> Self {
        Tool { name: TOOL_NAME.to_string(), version: TOOL_VERSION.to_string() }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Params {
    pub n: u32,
    pub s: Rational,
    pub alpha: Rational,
}

impl From<&ProblemParams> for Params {
    fn from(p: &ProblemParams) -> Self {
        Params { n: p.n(), s: p.s().clone(), alpha: p.alpha().clone() }
    }
}

/// Flat `[value, closedness]` pairs, two per interval.
pub type Endpoints = Vec<(String, Closedness)>;

fn endpoints(set: &IntervalSet) -> Endpoints {
    set.endpoints()
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum TargetKind {
    Scenario,
    Predicate,
    Auto,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Metadata {
    /// Enclosure width used for comparisons against `s0`.
    pub s0_tol: Rational,
    /// Lattice step, when the verdict came from a grid.
    pub grid_step: Option<Rational>,
}

/// Per-scenario entry of an `auto` check.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ScenarioDetail {
    pub scenario: ScenarioId,
    pub applicable: bool,
    /// The guard text when not applicable.
    pub guard: Option<String>,
    pub feasible: Option<bool>,
    pub sigma_interval: Option<Endpoints>,
    pub witness: Option<ExponentAssignment>,
    pub violated: Option<Vec<String>>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct VerdictDocument {
    pub document: String,
    pub tool: Tool,
    pub params: Params,
    pub target: String,
    pub kind: TargetKind,
    /// Feasibility for scenarios, truth value for predicates.
    pub feasible: bool,
    pub sigma_interval: Option<Endpoints>,
    pub witness: Option<ExponentAssignment>,
    pub violated: Option<Vec<String>>,
    pub details: Option<Vec<ScenarioDetail>>,
    pub metadata: Metadata,
}

impl VerdictDocument {
    fn new(p: &ProblemParams, target: String, kind: TargetKind, feasible: bool, tol: &Rational) -> Self {
        VerdictDocument {
            document: "verdict".into(),
            tool: Tool::current(),
            params: p.into(),
            target,
            kind,
            feasible,
            sigma_interval: None,
            witness: None,
            violated: None,
            details: None,
            metadata: Metadata { s0_tol: tol.clone(), grid_step: None },
        }
    }
}

fn detail(id: ScenarioId, p: &ProblemParams) -> ScenarioDetail {
    match build_scenario(id, p) {
        Ok(sys) => {
            let v = sys.is_feasible();
            ScenarioDetail {
                scenario: id,
                applicable: true,
                guard: None,
                feasible: Some(v.feasible),
                sigma_interval: Some(endpoints(&sys.project_interval(VarId::Sigma))),
                witness: v.witness,
                violated: v.certificate,
            }
        }
        Err(e) => ScenarioDetail {
            scenario: id,
            applicable: false,
            guard: Some(e.to_string()),
            feasible: None,
            sigma_interval: None,
            witness: None,
            violated: None,
        },
    }
}

pub fn check_scenario(id: ScenarioId, p: &ProblemParams) -> Result<VerdictDocument, ScenarioError> {
    let sys = build_scenario(id, p)?;
    let v = sys.is_feasible();
    let mut doc = VerdictDocument::new(p, id.to_string(), TargetKind::Scenario, v.feasible, &default_s0_tol());
    doc.sigma_interval = Some(endpoints(&sys.project_interval(VarId::Sigma)));
    doc.witness = v.witness;
    doc.violated = v.certificate;
    Ok(doc)
}

pub fn check_predicate(id: PredicateId, p: &ProblemParams, tol: &Rational) -> Result<VerdictDocument, ScenarioError> {
    let value = if id.is_theorem() { theorem_predicate_with_tol(id, p, tol)? } else { literature_predicate(id, p)? };
    Ok(VerdictDocument::new(p, id.to_string(), TargetKind::Predicate, value, tol))
}

/// Tries every scenario. Feasible when some applicable scenario is; the sigma
/// set is the union of the applicable projections, the witness comes from the
/// first feasible scenario, and an infeasible verdict lists every certificate.
pub fn check_auto(p: &ProblemParams) -> VerdictDocument {
    let details: Vec<ScenarioDetail> = ScenarioId::ALL.iter().map(|&id| detail(id, p)).collect();
    let applicable: Vec<&ScenarioDetail> = details.iter().filter(|d| d.applicable).collect();
    let feasible = applicable.iter().any(|d| d.feasible == Some(true));
    let mut doc = VerdictDocument::new(p, "auto".into(), TargetKind::Auto, feasible, &default_s0_tol());
    let mut union = IntervalSet::empty();
    for id in ScenarioId::ALL {
        if is_applicable(id, p) {
            union = union.union(&build_scenario(id, p).expect("applicable").project_interval(VarId::Sigma));
        }
    }
    doc.sigma_interval = Some(endpoints(&union));
    if feasible {
        doc.witness = applicable.iter().find(|d| d.feasible == Some(true)).and_then(|d| d.witness.clone());
    } else {
        let mut labels: Vec<String> = applicable.iter().flat_map(|d| d.violated.clone().unwrap_or_default()).collect();
        labels.sort();
        labels.dedup();
        doc.violated = Some(labels);
    }
    doc.details = Some(details);
    doc
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SigmaDocument {
    pub document: String,
    pub tool: Tool,
    pub params: Params,
    pub scenario: ScenarioId,
    pub engine: Endpoints,
    pub closed_form: Endpoints,
    pub agree: bool,
    pub same_endpoints: bool,
}

pub fn sigma_document(id: ScenarioId, p: &ProblemParams) -> Result<SigmaDocument, ScenarioError> {
    let w = sigma_window(id, p)?;
    Ok(SigmaDocument {
        document: "sigma".into(),
        tool: Tool::current(),
        params: p.into(),
        scenario: id,
        engine: endpoints(&w.engine),
        closed_form: endpoints(&w.closed_form),
        agree: w.agree,
        same_endpoints: w.same_endpoints,
    })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct S0Document {
    pub document: String,
    pub tool: Tool,
    pub n: u32,
    pub tol: Rational,
    pub lower: Rational,
    pub upper: Rational,
    pub width: Rational,
    /// `P(lower) > 0 > P(upper)`.
    pub certified: bool,
    /// Both ends rounded to twelve places, for reading only.
    pub lower_decimal: String,
    pub upper_decimal: String,
}

pub fn s0_document(e: &S0Enclosure, tol: &Rational) -> S0Document {
    S0Document {
        document: "s0".into(),
        tool: Tool::current(),
        n: e.n,
        tol: tol.clone(),
        lower: e.lower.clone(),
        upper: e.upper.clone(),
        width: e.width(),
        certified: e.certified(),
        lower_decimal: e.lower.to_decimal(12),
        upper_decimal: e.upper.to_decimal(12),
    }
}

/// Serializes with a trailing newline. Field order is declaration order, so
/// output is byte-stable.
pub fn to_json<T: Serialize>(doc: &T) -> String {
    let mut s = serde_json::to_string_pretty(doc).expect("documents serialize");
    s.push('\n');
    s
}

#[cfg(test)]
mod tests {
    use super::*;

    fn params(n: u32, s: &str, alpha: &str) -> ProblemParams {
        ProblemParams::new(n, s.parse().unwrap(), alpha.parse().unwrap()).unwrap()
    }

    #[test]
    fn reference_verdict() {
        let doc = check_scenario(ScenarioId::SubcriticalUsual, &params(3, "1/2", "3/2")).unwrap();
        assert!(doc.feasible);
        let json = serde_json::to_value(&doc).unwrap();
        assert_eq!(json["sigma_interval"], serde_json::json!([["-1/2", "closed"], ["0", "open"]]));
        assert!(json["violated"].is_null());
        assert!(json["witness"]["sigma"].is_string());
    }

    #[test]
    fn verdicts_round_trip() {
        for doc in [
            check_scenario(ScenarioId::SubcriticalUsual, &params(3, "1/2", "2")).unwrap(),
            check_auto(&params(3, "1/2", "3/4")),
            check_predicate(PredicateId::Thm16, &params(4, "1/2", "4/3"), &default_s0_tol()).unwrap(),
        ] {
            let text = to_json(&doc);
            let back: VerdictDocument = serde_json::from_str(&text).unwrap();
            assert_eq!(back, doc);
            assert_eq!(to_json(&back), text);
        }
    }

    #[test]
    fn auto_unions_applicable_scenarios() {
        let doc = check_auto(&params(3, "1/2", "3/4"));
        assert!(doc.feasible);
        let details = doc.details.unwrap();
        assert_eq!(details.len(), ScenarioId::ALL.len());
        assert!(details.iter().any(|d| d.scenario == ScenarioId::HolderUsual && d.applicable));
        assert!(details.iter().any(|d| d.scenario == ScenarioId::SubcriticalUsual && !d.applicable && d.guard.is_some()));
    }
}
