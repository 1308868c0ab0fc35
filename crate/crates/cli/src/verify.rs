//! Self-check suites. Each suite runs independent checks against the engine
//! and reports counts, failures and machine-readable details.

use std::fmt;
use std::str::FromStr;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use serde_json::{json, Value};
use uniq_core::arith::{Closedness, Rational};
use uniq_core::constraints::{Constraint, ConstraintSystem, DisjunctiveSystem, ExponentAssignment, LinExpr, Relation, VarId};
use uniq_core::oracle;
use uniq_core::regions::{compare, default_alpha_max, scan, trace_critical, CompareMode, Condition, GridSpec, Region};
use uniq_core::scenarios::{
    build_scenario, critical_parametric, s0, sigma_window, verify_chain, ChainId, CriticalCurve, PredicateId, ProblemParams, ScenarioId,
};

use crate::doc::Tool;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Suite {
    FmOracle,
    Witnesses,
    SigmaWindows,
    Coverage,
    Chains,
    Thresholds,
}

impl Suite {
    pub const ALL: [Suite; 6] = [Suite::FmOracle, Suite::Witnesses, Suite::SigmaWindows, Suite::Coverage, Suite::Chains, Suite::Thresholds];

    pub fn as_str(self) -> &'static str {
        match self {
            Suite::FmOracle => "fm-oracle",
            Suite::Witnesses => "witnesses",
            Suite::SigmaWindows => "sigma-windows",
            Suite::Coverage => "coverage",
            Suite::Chains => "chains",
            Suite::Thresholds => "thresholds",
        }
    }

    pub fn run(self) -> SuiteReport {
        match self {
            Suite::FmOracle => fm_oracle(FM_CASES, FM_SEED),
            Suite::Witnesses => witnesses(),
            Suite::SigmaWindows => sigma_windows(),
            Suite::Coverage => coverage(),
            Suite::Chains => chains(),
            Suite::Thresholds => thresholds(),
        }
    }
}

impl fmt::Display for Suite {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

/// A suite name or `all`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SuiteSelection(pub Vec<Suite>);

impl FromStr for SuiteSelection {
    type Err = String;

    fn from_str(text: &str) -> Result<Self, Self::Err> {
        if text == "all" {
            return Ok(SuiteSelection(Suite::ALL.to_vec()));
        }
        Suite::ALL
            .iter()
            .find(|s| s.as_str() == text)
            .map(|&s| SuiteSelection(vec![s]))
            .ok_or_else(|| format!("unknown suite {text:?}; expected one of {}, all", Suite::ALL.map(Suite::as_str).join(", ")))
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SuiteReport {
    pub suite: String,
    pub passed: bool,
    pub checks: usize,
    pub failures: Vec<String>,
    pub details: Value,
}

impl SuiteReport {
    fn new(suite: Suite, checks: usize, failures: Vec<String>, details: Value) -> Self {
        SuiteReport { suite: suite.to_string(), passed: failures.is_empty(), checks, failures, details }
    }

    /// One line for the human-readable report.
    pub fn summary(&self) -> String {
        let verdict = if self.passed { "PASS" } else { "FAIL" };
        format!("{verdict} {}: {} checks, {} failures", self.suite, self.checks, self.failures.len())
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct VerifyDocument {
    pub document: String,
    pub tool: Tool,
    pub suites: Vec<SuiteReport>,
    pub passed: bool,
}

pub fn run(selection: &SuiteSelection) -> VerifyDocument {
    let suites: Vec<SuiteReport> = selection.0.iter().map(|s| s.run()).collect();
    let passed = suites.iter().all(|r| r.passed);
    VerifyDocument { document: "verify".into(), tool: Tool::current(), suites, passed }
}

fn q(n: i64, d: i64) -> Rational {
    Rational::frac(n, d)
}

fn params(n: u32, s: &Rational, alpha: &Rational) -> ProblemParams {
    ProblemParams::new(n, s.clone(), alpha.clone()).expect("sampled parameters are valid")
}

pub const FM_CASES: usize = 500;
pub const FM_SEED: u64 = 0x5eed_f00d;

const FM_VARS: [VarId; 4] = [VarId::Sigma, VarId::QInv, VarId::RInv, VarId::Eps];

/// A random system with up to four variables and ten constraints, integer
/// coefficients and constants in `[-4, 4]`.
pub fn random_system(rng: &mut impl Rng) -> ConstraintSystem {
    let d = rng.gen_range(1..=4);
    let rows = rng.gen_range(1..=10);
    let vars = FM_VARS[..d].to_vec();
    let cons = (0..rows)
        .map(|i| {
            let lhs = LinExpr::from_parts(Rational::int(rng.gen_range(-4..=4)), vars.iter().map(|&v| (v, Rational::int(rng.gen_range(-4..=4)))).collect::<Vec<_>>());
            let rel = match rng.gen_range(0..5) {
                0 | 1 => Relation::Lt,
                2 | 3 => Relation::Le,
                _ => Relation::Eq,
            };
            Constraint::new(lhs, rel, format!("c{i}"))
        })
        .collect();
    ConstraintSystem::from_parts(vars, cons).expect("declared variables")
}

/// Elimination verdicts against the brute-force oracle on seeded random
/// systems; feasible verdicts must come with exact witnesses.
pub fn fm_oracle(cases: usize, seed: u64) -> SuiteReport {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut failures = Vec::new();
    let mut feasible = 0;
    for case in 0..cases {
        let sys = random_system(&mut rng);
        let v = DisjunctiveSystem::single(sys.clone()).is_feasible();
        let o = oracle::decide(&sys);
        if v.feasible != o.feasible {
            failures.push(format!("case {case}: engine {} oracle {}\n{sys}", v.feasible, o.feasible));
            continue;
        }
        if v.feasible {
            feasible += 1;
            let ok = v.witness.as_ref().map(|w| sys.check_assignment(w).map(|bad| bad.is_empty()).unwrap_or(false)).unwrap_or(false);
            if !ok {
                failures.push(format!("case {case}: witness {:?} fails\n{sys}", v.witness));
            }
        }
    }
    SuiteReport::new(Suite::FmOracle, cases, failures, json!({ "seed": seed, "cases": cases, "feasible": feasible, "infeasible": cases - feasible }))
}

/// Ten interior samples of `(lo, hi)`, or of `[lo, hi)` when `lo` is allowed.
pub fn window_samples(lo: &Rational, hi: &Rational, include_lo: bool) -> Vec<Rational> {
    let width = hi - lo;
    if include_lo {
        (0..10).map(|k| lo + &(&width * &q(k, 10))).collect()
    } else {
        (1..=10).map(|k| lo + &(&width * &q(k, 11))).collect()
    }
}

/// The critical scenarios with explicit exponent choices, their dimension and
/// their regularity window `(lo, hi, lo included)`.
/// A fraction `(numerator, denominator)`.
pub type Frac = (i64, i64);

pub const EXPLICIT_CASES: [(ScenarioId, u32, Frac, Frac, bool); 4] = [
    (ScenarioId::CriticalN2Low, 2, (0, 1), (1, 2), false),
    (ScenarioId::CriticalN2High, 2, (1, 2), (1, 1), true),
    (ScenarioId::CriticalN3Mass, 3, (1, 4), (1, 2), false),
    (ScenarioId::CriticalN3Energy, 3, (1, 2), (1, 1), false),
];

/// Hand-picked exponents for the fixed-choice critical scenarios, with the
/// free parameter at the middle of its window. `1/p2` and `1/l` follow from
/// their defining identities.
pub fn explicit_assignment(id: ScenarioId, s: &Rational) -> Option<ExponentAssignment> {
    let half = q(1, 2);
    let mut w = ExponentAssignment::new();
    let n: i64 = match id {
        ScenarioId::CriticalN2Low | ScenarioId::CriticalN2High => 2,
        ScenarioId::CriticalN3Mass | ScenarioId::CriticalN3Energy => 3,
        _ => return None,
    };
    let sigma = match id {
        ScenarioId::CriticalN2Low => {
            let eps = s * &half;
            w.insert(VarId::Eps, eps.clone());
            w.insert(VarId::LambdaInv, &half + &(&eps * &half));
            w.insert(VarId::AInv, s * &half);
            w.insert(VarId::BInv, &half - s);
            w.insert(VarId::QInv, half.clone());
            w.insert(VarId::RInv, s * &half);
            w.insert(VarId::P1Inv, &half + s - &eps * &half);
            w.insert(VarId::P3Inv, (Rational::one() + s) * &half);
            &eps - s
        }
        ScenarioId::CriticalN2High => {
            let eps = (Rational::one() - s) * q(1, 4);
            w.insert(VarId::Eps, eps.clone());
            w.insert(VarId::AInv, &half - &eps * &half);
            w.insert(VarId::BInv, &eps * &half);
            w.insert(VarId::LambdaInv, s * &half + &eps);
            w.insert(VarId::QInv, s * &half + &eps * &half);
            w.insert(VarId::RInv, &half - &eps * &half - s * &half);
            w.insert(VarId::P1Inv, Rational::one() - &eps);
            w.insert(VarId::P3Inv, &half + s * &half);
            s - &Rational::one() + Rational::int(2) * &eps
        }
        ScenarioId::CriticalN3Mass => {
            let top = Rational::min_of(s, &(&half - q(2, 3) * s)).clone();
            let b = Rational::midpoint(&(q(1, 3) - q(1, 3) * s), &top);
            w.insert(VarId::AInv, &half - &b);
            w.insert(VarId::LambdaInv, Rational::one() - s * &half - &b * &half);
            w.insert(VarId::QInv, q(1, 4) + s * &half + b.clone());
            w.insert(VarId::RInv, &half - &b - q(1, 3) * s);
            w.insert(VarId::P1Inv, &half + q(2, 3) * s);
            w.insert(VarId::P3Inv, &half + q(1, 3) * s);
            w.insert(VarId::BInv, b);
            -s.clone()
        }
        _ => {
            w.insert(VarId::GammaInv, half.clone());
            w.insert(VarId::RhoInv, q(1, 6));
            w.insert(VarId::AInv, q(1, 4));
            w.insert(VarId::BInv, q(1, 3));
            w.insert(VarId::QInv, half.clone());
            w.insert(VarId::RInv, q(1, 6));
            w.insert(VarId::P1Inv, Rational::one() - q(1, 3) * s);
            w.insert(VarId::P3Inv, q(2, 3));
            s - &Rational::one()
        }
    };
    let r = w.get(VarId::RInv).expect("set above").clone();
    w.insert(VarId::P2Inv, &r + &(&sigma * &q(1, n)));
    w.insert(VarId::LInv, &half - &(s * &q(1, n)) - &(&sigma * &q(1, n)));
    w.insert(VarId::Sigma, sigma);
    Some(w)
}

/// Explicit critical assignments and engine witnesses at ten regularities per
/// window, each checked against every constraint of its system.
pub fn witnesses() -> SuiteReport {
    let mut failures = Vec::new();
    let mut checks = 0;
    let mut rows = Vec::new();
    for (id, n, lo, hi, include_lo) in EXPLICIT_CASES {
        let curve = id.critical_curve().expect("critical scenario");
        for s in window_samples(&q(lo.0, lo.1), &q(hi.0, hi.1), include_lo) {
            checks += 1;
            let alpha = curve.alpha(n, &s);
            let sys = match build_scenario(id, &params(n, &s, &alpha)) {
                Ok(sys) => sys,
                Err(e) => {
                    failures.push(format!("{id} at s = {s}: {e}"));
                    continue;
                }
            };
            let w = explicit_assignment(id, &s).expect("explicit case");
            let explicit_bad: Vec<String> = sys.check_assignment(&w).map(|v| v.into_iter().map(|x| x.label).collect()).unwrap_or_else(|e| vec![e.to_string()]);
            let v = sys.is_feasible();
            let engine_ok = v.witness.as_ref().is_some_and(|w| sys.check_assignment(w).is_ok_and(|bad| bad.is_empty()));
            if !explicit_bad.is_empty() {
                failures.push(format!("{id} at s = {s}: explicit assignment violates {explicit_bad:?}"));
            }
            if !engine_ok {
                failures.push(format!("{id} at s = {s}: engine found no valid witness"));
            }
            rows.push(json!({ "scenario": id, "s": s, "explicit_violations": explicit_bad, "engine_witness": engine_ok }));
        }
    }
    SuiteReport::new(Suite::Witnesses, checks, failures, Value::Array(rows))
}

fn gap(n: u32, s: &Rational) -> Rational {
    Rational::int(n as i64) - Rational::int(2) * s
}

/// Closed-form power window `[lo, hi)` of the Lipschitz theorem's first range.
pub fn lipschitz_window(n: u32, s: &Rational) -> (Rational, Rational) {
    let g = gap(n, s);
    let lo = Rational::max_of(&Rational::one(), &(Rational::int(2) * s).checked_div(&g).expect("positive")).clone();
    let tops = [
        Rational::int(4).checked_div(&g).expect("positive"),
        (Rational::int(n as i64) + Rational::int(2) * s).checked_div(&g).expect("positive"),
        (Rational::int(4) * s + Rational::int(4) - q(n as i64, n as i64 - 1)).checked_div(&g).expect("positive"),
    ];
    (lo, tops.into_iter().min().expect("three"))
}

/// Sample points of the sigma-window regression: eight powers per window.
pub fn sigma_samples() -> Vec<(u32, Rational, Rational)> {
    let mut out = Vec::new();
    for n in 3..=5 {
        for k in 1..=7 {
            let s = q(k, 8);
            let (lo, hi) = lipschitz_window(n, &s);
            if lo >= hi {
                continue;
            }
            for j in 0..8 {
                out.push((n, s.clone(), &lo + &((&hi - &lo) * q(j, 8))));
            }
        }
    }
    out
}

fn interval_text(e: &[(String, Closedness)]) -> Value {
    json!(e)
}

/// Projected sigma sets of the Lipschitz scenario against the closed-form
/// window. Endpoints must agree everywhere; strictness differences are listed.
pub fn sigma_windows() -> SuiteReport {
    let mut failures = Vec::new();
    let mut strictness = Vec::new();
    let samples = sigma_samples();
    for (n, s, alpha) in &samples {
        match sigma_window(ScenarioId::SubcriticalUsual, &params(*n, s, alpha)) {
            Ok(w) => {
                if !w.same_endpoints {
                    failures.push(format!("n = {n}, s = {s}, alpha = {alpha}: engine {} closed form {}", w.engine, w.closed_form));
                } else if !w.agree {
                    strictness.push(json!({
                        "n": n, "s": s, "alpha": alpha,
                        "engine": interval_text(&w.engine.endpoints()),
                        "closed_form": interval_text(&w.closed_form.endpoints()),
                    }));
                }
            }
            Err(e) => failures.push(format!("n = {n}, s = {s}, alpha = {alpha}: {e}")),
        }
    }
    SuiteReport::new(Suite::SigmaWindows, samples.len(), failures, json!({ "strictness_differences": strictness }))
}

pub fn theorems() -> Region {
    Region::any([PredicateId::Thm11, PredicateId::Thm12])
}

/// Earlier results that the theorems must cover, each as a region.
pub fn covered_results() -> Vec<(&'static str, Region)> {
    vec![
        ("rogers", PredicateId::Rogers.into()),
        ("furioli-terraneo", PredicateId::FurioliTerraneo.into()),
        ("win-tsutsumi-sub below the energy power", Region::from(PredicateId::WinTsutsumiSub).and(Region::Where(Condition::BelowEnergy))),
        ("kato above the scaling floor", Region::from(PredicateId::Kato).and(Region::Where(Condition::AboveScalingFloor))),
    ]
}

/// Earlier results inside the theorems, and open cases outside them, on grids
/// of step 1/32. The columns `s = 0` and `s = 1` are left out, since the
/// theorems only speak about `0 < s < 1`.
pub fn coverage() -> SuiteReport {
    let step = q(1, 32);
    let targets = [
        PredicateId::Thm11,
        PredicateId::Thm12,
        PredicateId::Rogers,
        PredicateId::FurioliTerraneo,
        PredicateId::WinTsutsumiSub,
        PredicateId::Kato,
        PredicateId::OpenSub,
    ]
    .map(Into::into);
    let mut failures = Vec::new();
    let mut checks = 0;
    let mut rows = Vec::new();
    for n in 3..=5 {
        let spec = GridSpec::new(n, (step.clone(), Rational::one() - &step), (Rational::zero(), default_alpha_max(n)), step.clone()).expect("interior grid");
        let grid = scan(&spec, &targets);
        let mut claims = covered_results().into_iter().map(|(name, r)| (name, r, theorems())).collect::<Vec<_>>();
        claims.push(("open-sub outside the theorems", PredicateId::OpenSub.into(), theorems().complement()));
        for (name, a, b) in claims {
            checks += 1;
            let rep = compare(&grid, &a, &b, CompareMode::Subset).expect("targets scanned");
            for m in &rep.mismatches {
                failures.push(format!("n = {n}, {name}: violating cell s = {}, alpha = {}", m.s, m.alpha));
            }
            rows.push(json!({ "n": n, "claim": name, "cells": grid.cells.len(), "violations": rep.mismatches.len() }));
        }
    }
    SuiteReport::new(Suite::Coverage, checks, failures, Value::Array(rows))
}

/// Regularity samples `k/32`, `k = 1..=32`.
pub fn chain_samples() -> Vec<Rational> {
    (1..=32).map(|k| q(k, 32)).collect()
}

/// Both inequality chains; a failing link is acceptable only when masked. The
/// Lipschitz chain must also hold outright below `n/(4(n-1))`.
pub fn chains() -> SuiteReport {
    let samples = chain_samples();
    let mut failures = Vec::new();
    let mut checks = 0;
    let mut reports = Vec::new();
    let runs = (3..=5).map(|n| (ChainId::Lipschitz, n)).chain((3..=6).map(|n| (ChainId::Holder, n)));
    for (chain, n) in runs {
        let rep = match verify_chain(chain, n, &samples) {
            Ok(rep) => rep,
            Err(e) => {
                failures.push(format!("{} chain, n = {n}: {e}", chain.as_str()));
                continue;
            }
        };
        checks += rep.entries.len();
        let cut = q(n as i64, 4 * (n as i64 - 1));
        for e in &rep.entries {
            if !e.holds && !e.masked {
                failures.push(format!("{} chain, n = {n}, s = {}: link {} fails unmasked ({} vs {})", chain.as_str(), e.s, e.link, e.lhs, e.rhs));
            }
            if chain == ChainId::Lipschitz && e.s < cut && !e.holds {
                failures.push(format!("lipschitz chain, n = {n}, s = {}: link {} fails below {cut}", e.s, e.link));
            }
        }
        reports.push(serde_json::to_value(&rep).expect("report serializes"));
    }
    SuiteReport::new(Suite::Chains, checks, failures, Value::Array(reports))
}

/// Tolerance for the threshold checks, `10^-9`.
pub fn threshold_tol() -> Rational {
    q(1, 1_000_000_000)
}

/// Rationals with denominator at most `max_den` inside `[lower, upper]`.
pub fn small_rationals_between(lower: &Rational, upper: &Rational, max_den: i64) -> Vec<Rational> {
    let mut out = Vec::new();
    for d in 1..=max_den {
        let den = Rational::int(d);
        let mut p = Rational::new((lower * &den).floor(), 1).expect("unit denominator");
        while p.checked_div(&den).expect("positive") <= *upper {
            let x = p.checked_div(&den).expect("positive");
            if x >= *lower && !out.contains(&x) {
                out.push(x);
            }
            p = &p + &Rational::one();
        }
    }
    out
}

/// Regularity thresholds of the energy-critical scenarios: exact for
/// `n = 3, 4`, and traced against the root enclosure for `n = 5, 6`.
pub fn thresholds() -> SuiteReport {
    let mut failures = Vec::new();
    let mut rows = Vec::new();
    let mut checks = 0;
    for (id, n, expected) in [(ScenarioId::CriticalN3Energy, 3, q(1, 2)), (ScenarioId::CriticalHighDim, 4, q(1, 3))] {
        checks += 1;
        let set = critical_parametric(id, n).map(|sys| sys.project_interval(VarId::S));
        match set {
            Ok(set) => {
                let lower = set.intervals().first().map(|iv| iv.lo().clone());
                let ok = lower.as_ref().is_some_and(|b| b.value().finite() == Some(&expected) && !b.is_closed()) && set.intervals().len() == 1;
                if !ok {
                    failures.push(format!("n = {n}: feasible regularities {set}, expected lower end {expected} (open)"));
                }
                rows.push(json!({ "n": n, "feasible_s": set.to_string(), "threshold": expected }));
            }
            Err(e) => failures.push(format!("n = {n}: {e}")),
        }
    }
    let tol = threshold_tol();
    for n in [5u32, 6] {
        checks += 1;
        let e = match s0(n, &tol) {
            Ok(e) => e,
            Err(err) => {
                failures.push(format!("n = {n}: {err}"));
                continue;
            }
        };
        if !e.certified() || e.width() > tol {
            failures.push(format!("n = {n}: enclosure [{}, {}] not certified at width {tol}", e.lower, e.upper));
        }
        let region = Region::from(ScenarioId::CriticalHighDim);
        let brackets = trace_critical(n, &region, CriticalCurve::Energy, (&q(1, 64), &q(63, 64)), &q(1, 16), &tol);
        let overlaps = brackets.len() == 1 && brackets[0].lo < e.upper && e.lower < brackets[0].hi;
        if !overlaps {
            failures.push(format!("n = {n}: traced boundaries {brackets:?} miss [{}, {}]", e.lower, e.upper));
        }
        let mut row = json!({
            "n": n,
            "enclosure": [e.lower, e.upper],
            "enclosure_decimal": [e.lower.to_decimal(10), e.upper.to_decimal(10)],
            "certified": e.certified(),
            "traced": brackets.iter().map(|b| json!([b.lo, b.hi])).collect::<Vec<_>>(),
        });
        if n == 5 {
            checks += 1;
            let small = small_rationals_between(&e.lower, &e.upper, 1000);
            if !small.is_empty() {
                failures.push(format!("n = 5: enclosure contains small-denominator rationals {small:?}"));
            }
            row["small_denominators"] = json!(small);
        }
        rows.push(row);
    }
    SuiteReport::new(Suite::Thresholds, checks, failures, Value::Array(rows))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn selection_parses() {
        assert_eq!("all".parse::<SuiteSelection>().unwrap().0.len(), 6);
        assert_eq!("chains".parse::<SuiteSelection>().unwrap().0, vec![Suite::Chains]);
        assert!("nope".parse::<SuiteSelection>().is_err());
    }

    #[test]
    fn random_systems_are_seeded() {
        let a: Vec<String> = {
            let mut rng = ChaCha8Rng::seed_from_u64(7);
            (0..5).map(|_| random_system(&mut rng).to_string()).collect()
        };
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        let b: Vec<String> = (0..5).map(|_| random_system(&mut rng).to_string()).collect();
        assert_eq!(a, b);
    }

    #[test]
    fn small_fm_run_passes() {
        let r = fm_oracle(40, 1);
        assert!(r.passed, "{:?}", r.failures);
        assert_eq!(r.checks, 40);
    }

    #[test]
    fn sigma_sample_set_contains_reference_point() {
        let samples = sigma_samples();
        assert!(samples.contains(&(3, q(1, 2), q(3, 2))));
        assert!(samples.contains(&(3, q(3, 4), q(29, 24))));
    }

    #[test]
    fn rationals_between() {
        let xs = small_rationals_between(&q(1, 3), &q(1, 2), 4);
        assert_eq!(xs, vec![q(1, 2), q(1, 3)]);
    }
}
