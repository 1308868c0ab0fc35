use serde::{Deserialize, Serialize};

use crate::arith::IntervalSet;

use super::fm::{is_feasible, project_interval};
use super::types::{ConstraintError, ConstraintSystem, ExponentAssignment, VarId, Verdict, Violation};

/// A disjunction of conjunctive systems: feasible when any branch is.
#[derive(Clone, PartialEq, Eq, Debug, Default, Serialize, Deserialize)]
pub struct DisjunctiveSystem {
    branches: Vec<ConstraintSystem>,
}

impl DisjunctiveSystem {
    pub fn new(branches: Vec<ConstraintSystem>) -> Self {
        DisjunctiveSystem { branches }
    }

    pub fn single(sys: ConstraintSystem) -> Self {
        DisjunctiveSystem { branches: vec![sys] }
    }

    pub fn branches(&self) -> &[ConstraintSystem] {
        &self.branches
    }

    /// The first feasible branch's verdict, or the union of all certificates.
    pub fn is_feasible(&self) -> Verdict {
        let mut cert: Vec<String> = Vec::new();
        for b in &self.branches {
            let v = is_feasible(b);
            if v.feasible {
                return v;
            }
            for label in v.certificate.unwrap_or_default() {
                if !cert.contains(&label) {
                    cert.push(label);
                }
            }
        }
        Verdict::infeasible(cert)
    }

    pub fn project_interval(&self, v: VarId) -> IntervalSet {
        self.branches
            .iter()
            .map(|b| project_interval(b, v))
            .fold(IntervalSet::empty(), |acc, p| acc.union(&p))
    }

    /// Empty when some branch holds at `w`; otherwise the violations of the
    /// branch that comes closest (fewest failures, earliest on ties).
    pub fn check_assignment(&self, w: &ExponentAssignment) -> Result<Vec<Violation>, ConstraintError> {
        let mut best: Option<Vec<Violation>> = None;
        for b in &self.branches {
            let v = b.check_assignment(w)?;
            if v.is_empty() {
                return Ok(v);
            }
            if best.as_ref().is_none_or(|cur| v.len() < cur.len()) {
                best = Some(v);
            }
        }
        Ok(best.unwrap_or_default())
    }
}
