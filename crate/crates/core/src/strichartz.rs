//! Acceptable exponent pairs and the admissibility conditions of the
//! nonhomogeneous Strichartz estimate, as point checks and as constraint
//! fragments.
//!
//! Pairs are stored by reciprocals: `q_inv = 1/q`, `r_inv = 1/r`.

use serde::{Deserialize, Serialize};

use crate::arith::Rational;
use crate::constraints::{Constraint, ConstraintSystem, DisjunctiveSystem, ExponentAssignment, LinExpr, VarId};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum PairError {
    #[error("1/q = {0} is outside [0, 1]")]
    TimeOutOfRange(Rational),
    #[error("1/r = {0} is outside [0, 1/2]")]
    SpaceOutOfRange(Rational),
}

/// A time/space exponent pair with `1 <= q <= inf` and `2 <= r <= inf`.
#[derive(Clone, PartialEq, Eq, Debug, Serialize, Deserialize)]
pub struct SpaceTimePair {
    q_inv: Rational,
    r_inv: Rational,
}

impl SpaceTimePair {
    pub fn new(q_inv: Rational, r_inv: Rational) -> Result<Self, PairError> {
        if q_inv.is_negative() || q_inv > 1 {
            return Err(PairError::TimeOutOfRange(q_inv));
        }
        if r_inv.is_negative() || r_inv > Rational::frac(1, 2) {
            return Err(PairError::SpaceOutOfRange(r_inv));
        }
        Ok(SpaceTimePair { q_inv, r_inv })
    }

    pub fn q_inv(&self) -> &Rational {
        &self.q_inv
    }

    pub fn r_inv(&self) -> &Rational {
        &self.r_inv
    }

    /// The energy endpoint `(q, r) = (inf, 2)`.
    pub fn endpoint() -> Self {
        SpaceTimePair { q_inv: Rational::zero(), r_inv: Rational::frac(1, 2) }
    }
}

fn half() -> Rational {
    Rational::frac(1, 2)
}

fn nr(n: u32) -> Rational {
    Rational::int(n as i64)
}

/// `1/q < n(1/2 - 1/r)` with finite `q`, or the endpoint `(inf, 2)`.
/// The boundary `1/q = n(1/2 - 1/r)` is rejected.
pub fn is_acceptable(n: u32, p: &SpaceTimePair) -> bool {
    if p.q_inv.is_zero() {
        return p.r_inv == half();
    }
    p.q_inv < nr(n) * (half() - &p.r_inv)
}

/// The two regimes of the nonhomogeneous estimate.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Regime {
    NonSharp,
    Sharp,
}

#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum AdmissibilityMode {
    NonSharp,
    Sharp,
    NotAdmissible,
}

#[derive(Clone, PartialEq, Eq, Debug, Serialize, Deserialize)]
pub struct AdmissibilityReport {
    pub mode: AdmissibilityMode,
    /// Failing condition labels; empty unless not admissible.
    pub failed: Vec<String>,
    pub besov_variant: bool,
}

pub mod labels {
    pub const ACCEPTABILITY: &str = "acceptability";
    pub const SCALING: &str = "scaling";
    pub const SUM_BELOW_ONE: &str = "non-sharp: 1/q + 1/gamma < 1";
    pub const SUM_AT_MOST_ONE: &str = "1/q + 1/gamma <= 1";
    pub const NONSHARP_GAP_R: &str = "non-sharp: (n/2-1)/r <= n/(2rho)";
    pub const NONSHARP_GAP_RHO: &str = "non-sharp: (n/2-1)/rho <= n/(2r)";
    pub const SUM_ONE: &str = "sharp: 1/q + 1/gamma = 1";
    pub const SHARP_GAP_R: &str = "sharp: (n/2-1)/r < n/(2rho)";
    pub const SHARP_GAP_RHO: &str = "sharp: (n/2-1)/rho < n/(2r)";
    pub const SHARP_R_LE_Q: &str = "sharp: 1/r <= 1/q";
    pub const SHARP_RHO_LE_GAMMA: &str = "sharp: 1/rho <= 1/gamma";
    pub const PLANE_FINITE: &str = "plane: r, rho < inf";
    pub const BESOV: &str = "besov: gamma, q >= 2";
}

fn gap(n: u32, first: &Rational, second: &Rational) -> (Rational, Rational) {
    // (n/2 - 1) * first  versus  (n/2) * second
    let h = nr(n) * half();
    ((&h - Rational::one()) * first, h * second)
}

/// Point check of the estimate's exponent conditions for `(gamma, rho)` and `(q, r)`.
pub fn admissibility(n: u32, gr: &SpaceTimePair, qr: &SpaceTimePair, besov: bool) -> AdmissibilityReport {
    use labels::*;
    let (g, rho, q, r) = (&gr.q_inv, &gr.r_inv, &qr.q_inv, &qr.r_inv);
    let mut failed: Vec<&str> = Vec::new();
    if !is_acceptable(n, gr) || !is_acceptable(n, qr) {
        failed.push(ACCEPTABILITY);
    }
    if q + g != nr(n) * half() * (Rational::one() - r - rho) {
        failed.push(SCALING);
    }
    if n == 2 && (r.is_zero() || rho.is_zero()) {
        failed.push(PLANE_FINITE);
    }
    if besov && (*g > half() || *q > half()) {
        failed.push(BESOV);
    }
    let sum = q + g;
    let (r_lhs, r_rhs) = gap(n, r, rho);
    let (rho_lhs, rho_rhs) = gap(n, rho, r);
    let mode = if sum < 1 {
        if r_lhs > r_rhs {
            failed.push(NONSHARP_GAP_R);
        }
        if rho_lhs > rho_rhs {
            failed.push(NONSHARP_GAP_RHO);
        }
        AdmissibilityMode::NonSharp
    } else if sum == 1 {
        if r_lhs >= r_rhs {
            failed.push(SHARP_GAP_R);
        }
        if rho_lhs >= rho_rhs {
            failed.push(SHARP_GAP_RHO);
        }
        if r > q {
            failed.push(SHARP_R_LE_Q);
        }
        if rho > g {
            failed.push(SHARP_RHO_LE_GAMMA);
        }
        AdmissibilityMode::Sharp
    } else {
        failed.push(SUM_AT_MOST_ONE);
        AdmissibilityMode::NotAdmissible
    };
    if failed.is_empty() {
        AdmissibilityReport { mode, failed: Vec::new(), besov_variant: besov }
    } else {
        AdmissibilityReport {
            mode: AdmissibilityMode::NotAdmissible,
            failed: failed.into_iter().map(String::from).collect(),
            besov_variant: besov,
        }
    }
}

/// Symbolic pair: reciprocal time and space exponents as affine expressions.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct PairExpr {
    pub time: LinExpr,
    pub space: LinExpr,
}

impl PairExpr {
    pub fn new(time: impl Into<LinExpr>, space: impl Into<LinExpr>) -> Self {
        PairExpr { time: time.into(), space: space.into() }
    }

    pub fn vars(time: VarId, space: VarId) -> Self {
        PairExpr::new(time, space)
    }
}

fn tagged(tag: &str, label: &str) -> String {
    if tag.is_empty() {
        label.to_string()
    } else {
        format!("{tag} {label}")
    }
}

/// The finite-exponent branch of acceptability.
pub fn acceptable_finite(n: u32, p: &PairExpr, tag: &str) -> Vec<Constraint> {
    let t = |l: &str| tagged(tag, &format!("acceptable: {l}"));
    let zero = || LinExpr::constant(Rational::zero());
    let rhs = (LinExpr::constant(half()) - p.space.clone()).scale(&nr(n));
    vec![
        Constraint::lt(zero(), p.time.clone(), t("q < inf")),
        Constraint::le(p.time.clone(), Rational::one(), t("q >= 1")),
        Constraint::le(zero(), p.space.clone(), t("r <= inf")),
        Constraint::le(p.space.clone(), half(), t("r >= 2")),
        Constraint::lt(p.time.clone(), rhs, t("1/q < n(1/2 - 1/r)")),
    ]
}

/// The endpoint branch `(q, r) = (inf, 2)` of acceptability.
pub fn acceptable_endpoint(p: &PairExpr, tag: &str) -> Vec<Constraint> {
    let t = |l: &str| tagged(tag, &format!("acceptable: {l}"));
    vec![
        Constraint::eq(p.time.clone(), Rational::zero(), t("endpoint q = inf")),
        Constraint::eq(p.space.clone(), half(), t("endpoint r = 2")),
    ]
}

/// Scaling, the regime's conditions, the planar restriction, and the Besov
/// restriction. Acceptability is separate because it is disjunctive.
pub fn admissibility_constraints(n: u32, gr: &PairExpr, qr: &PairExpr, regime: Regime, besov: bool, tag: &str) -> Vec<Constraint> {
    use labels::*;
    let t = |l: &str| tagged(tag, l);
    let h = nr(n) * half();
    let hm1 = &h - Rational::one();
    let sum = &qr.time + &gr.time;
    let scaling_rhs = (LinExpr::constant(Rational::one()) - qr.space.clone() - gr.space.clone()).scale(&h);
    let mut out = vec![Constraint::eq(sum.clone(), scaling_rhs, t(SCALING))];
    let r_side = qr.space.scale(&hm1);
    let rho_scaled = gr.space.scale(&h);
    let rho_side = gr.space.scale(&hm1);
    let r_scaled = qr.space.scale(&h);
    match regime {
        Regime::NonSharp => {
            out.push(Constraint::lt(sum, Rational::one(), t(SUM_BELOW_ONE)));
            out.push(Constraint::le(r_side, rho_scaled, t(NONSHARP_GAP_R)));
            out.push(Constraint::le(rho_side, r_scaled, t(NONSHARP_GAP_RHO)));
        }
        Regime::Sharp => {
            out.push(Constraint::eq(sum, Rational::one(), t(SUM_ONE)));
            out.push(Constraint::lt(r_side, rho_scaled, t(SHARP_GAP_R)));
            out.push(Constraint::lt(rho_side, r_scaled, t(SHARP_GAP_RHO)));
            out.push(Constraint::le(qr.space.clone(), qr.time.clone(), t(SHARP_R_LE_Q)));
            out.push(Constraint::le(gr.space.clone(), gr.time.clone(), t(SHARP_RHO_LE_GAMMA)));
        }
    }
    if n == 2 {
        out.push(Constraint::lt(Rational::zero(), qr.space.clone(), t("plane: r < inf")));
        out.push(Constraint::lt(Rational::zero(), gr.space.clone(), t("plane: rho < inf")));
    }
    if besov {
        out.push(Constraint::le(gr.time.clone(), half(), t("besov: gamma >= 2")));
        out.push(Constraint::le(qr.time.clone(), half(), t("besov: q >= 2")));
    }
    out
}

/// Fragment over `gamma_inv, rho_inv, q_inv, r_inv` whose satisfaction agrees
/// with [`admissibility`] in the given regime. Acceptability makes it a
/// disjunction of four branches.
pub fn admissibility_fragment(n: u32, besov: bool, regime: Regime) -> DisjunctiveSystem {
    let gr = PairExpr::vars(VarId::GammaInv, VarId::RhoInv);
    let qr = PairExpr::vars(VarId::QInv, VarId::RInv);
    let core = admissibility_constraints(n, &gr, &qr, regime, besov, "");
    let choices = |p: &PairExpr, tag: &str| [acceptable_finite(n, p, tag), acceptable_endpoint(p, tag)];
    let mut branches = Vec::new();
    for a in choices(&gr, "(gamma,rho)") {
        for b in choices(&qr, "(q,r)") {
            let mut sys = ConstraintSystem::new([VarId::GammaInv, VarId::RhoInv, VarId::QInv, VarId::RInv])
                .expect("distinct variables");
            for c in a.iter().chain(&b).chain(&core) {
                sys.add(c.clone()).expect("fragment uses only its four variables");
            }
            branches.push(sys);
        }
    }
    DisjunctiveSystem::new(branches)
}

/// Assignment of the four fragment variables from two pairs.
pub fn fragment_point(gr: &SpaceTimePair, qr: &SpaceTimePair) -> ExponentAssignment {
    ExponentAssignment::new()
        .with(VarId::GammaInv, gr.q_inv.clone())
        .with(VarId::RhoInv, gr.r_inv.clone())
        .with(VarId::QInv, qr.q_inv.clone())
        .with(VarId::RInv, qr.r_inv.clone())
}
