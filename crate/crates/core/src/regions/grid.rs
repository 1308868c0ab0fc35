use std::fmt::Write as _;

use rayon::prelude::*;
use serde::Serialize;

use crate::arith::Rational;

use super::target::{Status, Target};
use super::RegionError;

/// Environment variable capping scan parallelism.
pub const THREADS_ENV: &str = "UNIQ_REGIONS_THREADS";

/// Upper end of the default `alpha` axis. It covers the energy-critical power
/// `4/(n-2)` at `s = 1` for `n >= 3` and is a multiple of every dyadic step up
/// to `1/2`. The plane gets a fixed cap, since its critical powers are unbounded.
pub fn default_alpha_max(n: u32) -> Rational {
    match n {
        0..=2 => Rational::int(8),
        3 => Rational::int(4),
        4 => Rational::int(2),
        _ => Rational::frac(3, 2),
    }
}

/// Uniform exact lattice over `s_range x alpha_range`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct GridSpec {
    pub n: u32,
    pub s_range: (Rational, Rational),
    pub alpha_range: (Rational, Rational),
    pub step: Rational,
}

fn count(axis: &'static str, (lo, hi): &(Rational, Rational), step: &Rational) -> Result<usize, RegionError> {
    if lo >= hi {
        return Err(RegionError::InvalidGrid(format!("{axis} range [{lo}, {hi}] is empty")));
    }
    let width = hi - lo;
    let k = width.checked_div(step).expect("positive step");
    if !k.is_integer() {
        return Err(RegionError::StepDoesNotDivide { axis, step: step.clone(), width });
    }
    k.as_i64().map(|k| k as usize + 1).ok_or_else(|| RegionError::InvalidGrid(format!("{axis} axis has too many points")))
}

impl GridSpec {
    pub fn new(n: u32, s_range: (Rational, Rational), alpha_range: (Rational, Rational), step: Rational) -> Result<Self, RegionError> {
        if n < 2 {
            return Err(RegionError::InvalidGrid(format!("n = {n} must be at least 2")));
        }
        if !step.is_positive() {
            return Err(RegionError::InvalidGrid(format!("step {step} must be positive")));
        }
        count("s", &s_range, &step)?;
        count("alpha", &alpha_range, &step)?;
        Ok(GridSpec { n, s_range, alpha_range, step })
    }

    /// `s` in `[0, 1]`, `alpha` in `[0, default_alpha_max(n)]`.
    pub fn standard(n: u32, step: Rational) -> Result<Self, RegionError> {
        GridSpec::new(n, (Rational::zero(), Rational::one()), (Rational::zero(), default_alpha_max(n)), step)
    }

    fn axis(&self, (lo, _): &(Rational, Rational), k: usize) -> Vec<Rational> {
        (0..k).map(|i| lo + &(Rational::int(i as i64) * &self.step)).collect()
    }

    pub fn s_points(&self) -> Vec<Rational> {
        self.axis(&self.s_range, count("s", &self.s_range, &self.step).expect("validated"))
    }

    pub fn alpha_points(&self) -> Vec<Rational> {
        self.axis(&self.alpha_range, count("alpha", &self.alpha_range, &self.step).expect("validated"))
    }
}

/// One lattice point with its status per target.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Cell {
    pub s: Rational,
    pub alpha: Rational,
    pub statuses: Vec<Status>,
}

/// Scan result. Cells are in lattice order: `s` ascending, then `alpha`
/// ascending within each `s`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct RegionGrid {
    pub spec: GridSpec,
    pub targets: Vec<Target>,
    pub cells: Vec<Cell>,
}

impl RegionGrid {
    pub fn column(&self, t: Target) -> Option<usize> {
        self.targets.iter().position(|x| *x == t)
    }

    pub fn status_at(&self, s: &Rational, alpha: &Rational, t: Target) -> Option<Status> {
        let col = self.column(t)?;
        self.cells.iter().find(|c| c.s == *s && c.alpha == *alpha).map(|c| c.statuses[col])
    }

    /// `s,alpha,<targets...>` with `T`/`F`/`NA` statuses.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("s,alpha");
        for t in &self.targets {
            write!(out, ",{t}").expect("string write");
        }
        out.push('\n');
        for c in &self.cells {
            write!(out, "{},{}", c.s, c.alpha).expect("string write");
            for st in &c.statuses {
                write!(out, ",{st}").expect("string write");
            }
            out.push('\n');
        }
        out
    }
}

/// Thread cap from [`THREADS_ENV`]; unset or unparsable values mean no cap.
pub fn thread_cap() -> Option<usize> {
    std::env::var(THREADS_ENV).ok()?.trim().parse::<usize>().ok().filter(|&k| k > 0)
}

/// Evaluates every target at every lattice point, honouring [`THREADS_ENV`].
pub fn scan(spec: &GridSpec, targets: &[Target]) -> RegionGrid {
    scan_with_threads(spec, targets, thread_cap())
}

/// As [`scan`] with an explicit thread cap. The merge is indexed by lattice
/// position, so the result does not depend on scheduling.
pub fn scan_with_threads(spec: &GridSpec, targets: &[Target], threads: Option<usize>) -> RegionGrid {
    let ss = spec.s_points();
    let aa = spec.alpha_points();
    let n = spec.n;
    let points: Vec<(&Rational, &Rational)> = ss.iter().flat_map(|s| aa.iter().map(move |a| (s, a))).collect();
    let eval = || -> Vec<Cell> {
        points
            .par_iter()
            .map(|(s, a)| Cell { s: (*s).clone(), alpha: (*a).clone(), statuses: targets.iter().map(|t| t.eval(n, s, a)).collect() })
            .collect()
    };
    let cells = match threads {
        Some(k) => rayon::ThreadPoolBuilder::new().num_threads(k).build().expect("thread pool").install(eval),
        None => eval(),
    };
    RegionGrid { spec: spec.clone(), targets: targets.to_vec(), cells }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scenarios::{PredicateId, ScenarioId};

    fn r(t: &str) -> Rational {
        t.parse().unwrap()
    }

    #[test]
    fn sevenths_lattice() {
        let spec = GridSpec::new(3, (r("0"), r("1")), (r("0"), r("1")), r("1/7")).unwrap();
        let ss = spec.s_points();
        assert_eq!(ss.len(), 8);
        assert_eq!(ss[3], r("3/7"));
        assert_eq!(ss[7], r("1"));
    }

    #[test]
    fn step_must_divide_widths() {
        assert!(matches!(
            GridSpec::new(3, (r("0"), r("1")), (r("0"), r("1")), r("1/3")).and_then(|_| GridSpec::new(3, (r("0"), r("1")), (r("0"), r("1/2")), r("1/3"))),
            Err(RegionError::StepDoesNotDivide { axis: "alpha", .. })
        ));
        assert!(GridSpec::new(3, (r("1"), r("1")), (r("0"), r("1")), r("1/2")).is_err());
        assert!(GridSpec::new(3, (r("0"), r("1")), (r("0"), r("1")), r("0")).is_err());
    }

    #[test]
    fn lipschitz_theorem_column_at_half() {
        let spec = GridSpec::new(3, (r("0"), r("1")), (r("0"), r("4")), r("1/8")).unwrap();
        let grid = scan(&spec, &[Target::Predicate(PredicateId::Thm11)]);
        let hits: Vec<String> = grid.cells.iter().filter(|c| c.s == r("1/2") && c.statuses[0].is_true()).map(|c| c.alpha.to_string()).collect();
        assert_eq!(hits, ["1", "9/8", "5/4", "11/8", "3/2", "13/8", "7/4", "15/8"]);
    }

    #[test]
    fn scans_are_reproducible_and_thread_independent() {
        let spec = GridSpec::new(3, (r("1/4"), r("3/4")), (r("1/2"), r("2")), r("1/4")).unwrap();
        let ts = [Target::Scenario(ScenarioId::SubcriticalUsual), Target::Predicate(PredicateId::Thm12)];
        let a = scan_with_threads(&spec, &ts, Some(1));
        let b = scan_with_threads(&spec, &ts, Some(3));
        assert_eq!(a, b);
        assert_eq!(a.to_csv(), b.to_csv());
        assert!(a.to_csv().starts_with("s,alpha,subcritical-usual,thm12\n1/4,1/2,NA,"));
        assert_eq!(a.status_at(&r("1/2"), &r("1/2"), ts[0]), Some(Status::NotApplicable));
    }
}
