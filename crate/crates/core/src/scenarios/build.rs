use std::collections::BTreeSet;

use crate::arith::Rational;
use crate::constraints::{Constraint, ConstraintSystem, DisjunctiveSystem, LinExpr, VarId};
use crate::strichartz::{acceptable_endpoint, acceptable_finite, admissibility_constraints, PairExpr, Regime};

use super::ids::ScenarioId;
use super::labels;
use super::params::{ProblemParams, ScenarioError};

/// Declaration order of scenario variables. Elimination follows it, so `sigma`
/// is eliminated last among the exponents and its witness value is the
/// midpoint of the projected window.
const ORDER: [VarId; 14] = [
    VarId::GammaInv,
    VarId::RhoInv,
    VarId::QInv,
    VarId::RInv,
    VarId::AInv,
    VarId::BInv,
    VarId::LambdaInv,
    VarId::P1Inv,
    VarId::P2Inv,
    VarId::P3Inv,
    VarId::LInv,
    VarId::Eps,
    VarId::Sigma,
    VarId::S,
];

/// The two critical powers.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum CriticalCurve {
    /// `alpha = (n + 2s)/(n - 2s)`
    Distributional,
    /// `alpha = 4/(n - 2s)`
    Energy,
}

impl CriticalCurve {
    pub fn alpha(self, n: u32, s: &Rational) -> Rational {
        let n = Rational::int(n as i64);
        let gap = &n - Rational::int(2) * s;
        let num = match self {
            CriticalCurve::Distributional => n + Rational::int(2) * s,
            CriticalCurve::Energy => Rational::int(4),
        };
        num.checked_div(&gap).expect("s < n/2")
    }

    /// `(n - 2s) alpha` on the curve, affine in `s`.
    fn power(self, n: u32, s: &LinExpr) -> LinExpr {
        match self {
            CriticalCurve::Distributional => s.scale(&Rational::int(2)) + k(Rational::int(n as i64)),
            CriticalCurve::Energy => k(Rational::int(4)),
        }
    }
}

impl ScenarioId {
    pub fn critical_curve(self) -> Option<CriticalCurve> {
        match self {
            ScenarioId::CriticalN2Low | ScenarioId::CriticalN2High | ScenarioId::CriticalN3Mass => {
                Some(CriticalCurve::Distributional)
            }
            ScenarioId::CriticalN3Energy | ScenarioId::CriticalHighDim => Some(CriticalCurve::Energy),
            _ => None,
        }
    }

    fn guard_text(self) -> &'static str {
        match self {
            ScenarioId::SubcriticalUsual | ScenarioId::SubcriticalBetter => "n >= 3, 0 < s < 1 and alpha >= 1",
            ScenarioId::HolderUsual | ScenarioId::HolderBetter => "n >= 3, 0 < s < 1 and alpha < 1",
            ScenarioId::CriticalN2Low | ScenarioId::CriticalN2High => "n = 2, 0 < s < 1 and alpha = (n+2s)/(n-2s)",
            ScenarioId::CriticalN3Mass => "n = 3, 0 < s < 1 and alpha = (n+2s)/(n-2s)",
            ScenarioId::CriticalN3Energy => "n = 3, 0 < s < 1 and alpha = 4/(n-2s)",
            ScenarioId::CriticalHighDim => "n >= 4, 0 < s < 1 and alpha = 4/(n-2s)",
        }
    }

    fn dimension_ok(self, n: u32) -> bool {
        match self {
            ScenarioId::CriticalN2Low | ScenarioId::CriticalN2High => n == 2,
            ScenarioId::CriticalN3Mass | ScenarioId::CriticalN3Energy => n == 3,
            ScenarioId::CriticalHighDim => n >= 4,
            _ => n >= 3,
        }
    }
}

fn q(n: i64, d: i64) -> Rational {
    Rational::frac(n, d)
}

fn k(x: Rational) -> LinExpr {
    LinExpr::constant(x)
}

fn v(x: VarId) -> LinExpr {
    LinExpr::var(x)
}

/// Parameters as affine expressions, so one set of builders serves both fixed
/// `(s, alpha)` and `s` left free along a critical curve.
struct Ctx {
    n: u32,
    s: LinExpr,
    /// `(n - 2s) alpha`
    power: LinExpr,
    /// `alpha s`, present when it is affine.
    alpha_s: Option<LinExpr>,
    lipschitz: bool,
}

impl Ctx {
    fn point(p: &ProblemParams) -> Self {
        Ctx {
            n: p.n(),
            s: k(p.s().clone()),
            power: k(p.gap() * p.alpha()),
            alpha_s: Some(k(p.alpha() * p.s())),
            lipschitz: *p.alpha() >= 1,
        }
    }

    fn nn(&self) -> i64 {
        self.n as i64
    }

    /// `e / n`
    fn per_n(&self, e: &LinExpr) -> LinExpr {
        e.scale(&q(1, self.nn()))
    }
}

fn finish(cons: Vec<Constraint>) -> ConstraintSystem {
    let used: BTreeSet<VarId> = cons.iter().flat_map(|c| c.lhs.terms().keys().copied()).collect();
    let vars = ORDER.iter().copied().filter(|v| used.contains(v)).collect();
    ConstraintSystem::from_parts(vars, cons).expect("scenario variables are drawn from the declared order")
}

fn pin(out: &mut Vec<Constraint>, var: VarId, value: LinExpr, name: &str) {
    out.push(Constraint::eq(var, value, format!("choice: {name}")));
}

fn acceptable(out: &mut Vec<Constraint>, n: u32, p: &PairExpr, endpoint: bool, tag: &str) {
    if endpoint {
        out.extend(acceptable_endpoint(p, tag));
    } else {
        out.extend(acceptable_finite(n, p, tag));
    }
}

/// Hypotheses of the bilinear estimate with regularity `sigma`, carrier
/// exponent `rho`, and forcing exponents `p1, p2, p3`. Each entry of `open`
/// is required to lie strictly between 0 and 1.
fn bilinear(out: &mut Vec<Constraint>, ctx: &Ctx, prefix: &str, rho: &LinExpr, r: &LinExpr, ps: [&LinExpr; 3], open: &[(&str, &LinExpr)]) {
    let sigma = v(VarId::Sigma);
    let [p1, p2, p3] = ps;
    let dual = k(Rational::one()) - rho.clone();
    out.push(Constraint::eq(p1 + p2, dual.clone(), format!("{prefix} 1/p1 + 1/p2 = 1 - 1/rho")));
    out.push(Constraint::eq(p3 + r, dual, format!("{prefix} 1/p3 + 1/r = 1 - 1/rho")));
    out.push(Constraint::eq(p2.clone(), r + &ctx.per_n(&sigma), format!("{prefix} 1/p2 = 1/r + sigma/n")));
    for (name, e) in open {
        out.push(Constraint::gt((*e).clone(), Rational::zero(), format!("{prefix} {name} < inf")));
        out.push(Constraint::lt((*e).clone(), Rational::one(), format!("{prefix} {name} > 1")));
    }
}

fn sigma_range(out: &mut Vec<Constraint>) {
    out.push(Constraint::gt(VarId::Sigma, Rational::int(-1), labels::SIGMA_LOWER));
    out.push(Constraint::lt(VarId::Sigma, Rational::zero(), labels::SIGMA_NEGATIVE));
}

/// Chain rule for the Lipschitz derivative, through the embedding of the
/// solution space into a negative-order Sobolev space.
fn chain_rule(out: &mut Vec<Constraint>, ctx: &Ctx) {
    let sigma = v(VarId::Sigma);
    let n = ctx.nn();
    let l = k(q(1, 2)) - ctx.per_n(&ctx.s) - ctx.per_n(&sigma);
    out.push(Constraint::eq(VarId::LInv, l, "chain rule: 1/l = 1/2 - s/n - sigma/n"));
    out.push(Constraint::ge(sigma.clone(), -ctx.s.clone(), "chain rule: s >= -sigma"));
    out.push(Constraint::gt(VarId::LInv, Rational::zero(), "chain rule: l < inf"));
    let lip = (ctx.power.clone() - k(Rational::int(n)) + ctx.s.scale(&Rational::int(2))).scale(&q(1, 2 * n));
    out.push(Constraint::eq(VarId::P1Inv, lip + v(VarId::LInv), "chain rule: 1/p1 = (alpha-1)(n-2s)/(2n) + 1/l"));
    out.push(Constraint::ge(sigma, Rational::int(-1), "chain rule: -sigma <= 1"));
}

#[derive(Clone, Copy, PartialEq, Eq)]
enum Space {
    /// Difference measured at the Sobolev-embedding exponent.
    Usual,
    /// Difference measured in the improved-regularity space.
    Better,
}

fn subcritical_branch(ctx: &Ctx, space: Space, besov: bool, gr_end: bool, qr_end: bool, id: ScenarioId) -> Result<ConstraintSystem, ScenarioError> {
    let n = ctx.n;
    let nn = ctx.nn();
    let sigma = v(VarId::Sigma);
    let sig_n = ctx.per_n(&sigma);
    let s_n = ctx.per_n(&ctx.s);
    let a_2n = ctx.power.scale(&q(1, 2 * nn));
    let half = k(q(1, 2));
    let (rho, r) = match space {
        Space::Usual => (&sig_n + &half - s_n.clone(), &half - &sig_n + s_n - a_2n.clone()),
        Space::Better => (
            &sig_n + &half - s_n.clone() + a_2n.clone() - k(q(2, nn)),
            &half - &sig_n + s_n - a_2n.scale(&Rational::int(2)) + k(q(2, nn)),
        ),
    };
    let mut out = Vec::new();
    pin(&mut out, VarId::RhoInv, rho, "1/rho");
    pin(&mut out, VarId::RInv, r, "1/r");

    sigma_range(&mut out);
    out.push(Constraint::eq(VarId::P3Inv, a_2n.clone(), "chain rule: 1/p3 = alpha(n-2s)/(2n)"));
    out.push(Constraint::eq(VarId::P1Inv, a_2n - sig_n, "chain rule: 1/p1 = alpha(n-2s)/(2n) - sigma/n"));
    let (rho_v, r_v) = (v(VarId::RhoInv), v(VarId::RInv));
    let (p1, p2, p3) = (v(VarId::P1Inv), v(VarId::P2Inv), v(VarId::P3Inv));
    bilinear(&mut out, ctx, "bilinear:", &rho_v, &r_v, [&p1, &p2, &p3], &[("rho", &rho_v), ("p1", &p1), ("p3", &p3), ("r", &r_v)]);
    out.push(Constraint::gt(p2.clone(), Rational::zero(), labels::P2_POSITIVE));
    if besov {
        out.push(Constraint::le(p2, q(1, 2), labels::P2_BESOV));
        out.push(Constraint::ge(sigma.clone(), -ctx.s.clone(), labels::DIFFERENCE));
    } else {
        out.push(Constraint::le(p2, Rational::one(), labels::P2_SOBOLEV));
        let alpha_s = ctx.alpha_s.clone().ok_or(ScenarioError::NotAffineInS(id))?;
        out.push(Constraint::gt(sigma.clone(), -alpha_s, labels::HOLDER));
    }

    // Estimate hypotheses precede the pair conditions so that, where both
    // rule a point out, certificates name the estimate.
    let gr = PairExpr::vars(VarId::GammaInv, VarId::RhoInv);
    let qr = PairExpr::vars(VarId::QInv, VarId::RInv);
    acceptable(&mut out, n, &gr, gr_end, "(gamma,rho)");
    acceptable(&mut out, n, &qr, qr_end, "(q,r)");
    out.extend(admissibility_constraints(n, &gr, &qr, Regime::NonSharp, besov, "(gamma,rho)-(q,r)"));

    if space == Space::Better {
        // Auxiliary pair (lambda, p) whose dual space exponent carries the
        // nonlinear difference; 1/p = 1 - (2 sigma + (n-2s)(alpha+1))/(2n).
        let forcing = (ctx.power.clone() + k(Rational::int(nn)) - ctx.s.scale(&Rational::int(2))).scale(&q(1, 2 * nn));
        let p_inv = k(Rational::one()) - forcing.clone() - ctx.per_n(&sigma);
        let aux = PairExpr::new(VarId::LambdaInv, p_inv);
        acceptable(&mut out, n, &aux, false, "(lambda,p)");
        out.extend(admissibility_constraints(n, &gr, &aux, Regime::Sharp, besov, "(gamma,rho)-(lambda,p)"));
        out.push(Constraint::lt(forcing, Rational::one(), labels::FORCING));
        let lo = q((nn - 2) * (nn - 2), 2 * nn * (nn - 1));
        let hi = q(nn - 2, 2 * (nn - 1));
        out.push(Constraint::gt(VarId::RhoInv, lo, "rho window: (n/2 + 2/n - 2)/(n-1) < 1/rho"));
        out.push(Constraint::lt(VarId::RhoInv, hi, "rho window: 1/rho < (n-2)/(2(n-1))"));
    }
    Ok(finish(out))
}

fn subcritical(ctx: &Ctx, space: Space, besov: bool, id: ScenarioId) -> Result<DisjunctiveSystem, ScenarioError> {
    let mut branches = Vec::with_capacity(4);
    for gr_end in [false, true] {
        for qr_end in [false, true] {
            branches.push(subcritical_branch(ctx, space, besov, gr_end, qr_end, id)?);
        }
    }
    Ok(DisjunctiveSystem::new(branches))
}

/// Shared tail of the plane and mass-critical scenarios: three acceptable
/// pairs, two non-sharp estimates, the bilinear estimate with carrier `b`, and
/// the chain rule. The pair `(lambda, r~)` has `1/r~ = -sigma/n`.
fn critical_tail(out: &mut Vec<Constraint>, ctx: &Ctx) {
    let n = ctx.n;
    let sigma = v(VarId::Sigma);
    let ab = PairExpr::vars(VarId::AInv, VarId::BInv);
    let lr = PairExpr::new(VarId::LambdaInv, -ctx.per_n(&sigma));
    let qr = PairExpr::vars(VarId::QInv, VarId::RInv);
    acceptable(out, n, &ab, false, "(a,b)");
    acceptable(out, n, &lr, false, "(lambda,r~)");
    acceptable(out, n, &qr, false, "(q,r)");
    out.extend(admissibility_constraints(n, &ab, &lr, Regime::NonSharp, false, "(a,b)-(lambda,r~)"));
    out.extend(admissibility_constraints(n, &ab, &qr, Regime::NonSharp, false, "(a,b)-(q,r)"));
    critical_bilinear(out, ctx, &v(VarId::BInv), "bilinear:");
    chain_rule(out, ctx);
}

fn critical_bilinear(out: &mut Vec<Constraint>, ctx: &Ctx, rho: &LinExpr, prefix: &str) {
    sigma_range(out);
    let r = v(VarId::RInv);
    let (p1, p2, p3) = (v(VarId::P1Inv), v(VarId::P2Inv), v(VarId::P3Inv));
    bilinear(out, ctx, prefix, rho, &r, [&p1, &p2, &p3], &[("rho", rho), ("p1", &p1), ("p2", &p2), ("p3", &p3), ("r", &r)]);
}

fn n2_low(ctx: &Ctx) -> ConstraintSystem {
    let s = &ctx.s;
    let e = v(VarId::Eps);
    let mut out = Vec::new();
    pin(&mut out, VarId::Sigma, &e - s, "sigma = -s + eps");
    pin(&mut out, VarId::LambdaInv, k(q(1, 2)) + e.scale(&q(1, 2)), "1/lambda");
    pin(&mut out, VarId::AInv, s.scale(&q(1, 2)), "1/a");
    pin(&mut out, VarId::BInv, k(q(1, 2)) - s.clone(), "1/b");
    pin(&mut out, VarId::QInv, k(q(1, 2)), "1/q");
    pin(&mut out, VarId::RInv, s.scale(&q(1, 2)), "1/r");
    pin(&mut out, VarId::P1Inv, k(q(1, 2)) + s.clone() - e.scale(&q(1, 2)), "1/p1");
    pin(&mut out, VarId::P3Inv, (k(Rational::one()) + s.clone()).scale(&q(1, 2)), "1/p3");
    out.push(Constraint::gt(e.clone(), Rational::zero(), "eps: 0 < eps"));
    out.push(Constraint::lt(e, s.clone(), "eps: eps < s"));
    critical_tail(&mut out, ctx);
    finish(out)
}

fn n2_high(ctx: &Ctx) -> ConstraintSystem {
    let s = &ctx.s;
    let e = v(VarId::Eps);
    let half = || k(q(1, 2));
    let mut out = Vec::new();
    pin(&mut out, VarId::Sigma, s - &k(Rational::one()) + e.scale(&Rational::int(2)), "sigma = s - 1 + 2 eps");
    pin(&mut out, VarId::AInv, half() - e.scale(&q(1, 2)), "1/a");
    pin(&mut out, VarId::BInv, e.scale(&q(1, 2)), "1/b");
    pin(&mut out, VarId::LambdaInv, s.scale(&q(1, 2)) + e.clone(), "1/lambda");
    pin(&mut out, VarId::QInv, s.scale(&q(1, 2)) + e.scale(&q(1, 2)), "1/q");
    pin(&mut out, VarId::RInv, half() - e.scale(&q(1, 2)) - s.scale(&q(1, 2)), "1/r");
    pin(&mut out, VarId::P1Inv, k(Rational::one()) - e.clone(), "1/p1");
    pin(&mut out, VarId::P3Inv, half() + s.scale(&q(1, 2)), "1/p3");
    out.push(Constraint::gt(e.clone(), Rational::zero(), "eps: 0 < eps"));
    out.push(Constraint::lt(e, half() - s.scale(&q(1, 2)), "eps: eps < (1 - s)/2"));
    critical_tail(&mut out, ctx);
    finish(out)
}

fn n3_mass(ctx: &Ctx) -> ConstraintSystem {
    let s = &ctx.s;
    let b = v(VarId::BInv);
    let mut out = Vec::new();
    pin(&mut out, VarId::Sigma, -s.clone(), "sigma = -s");
    pin(&mut out, VarId::AInv, k(q(1, 2)) - b.clone(), "1/a");
    pin(&mut out, VarId::LambdaInv, k(Rational::one()) - s.scale(&q(1, 2)) - b.scale(&q(1, 2)), "1/lambda");
    pin(&mut out, VarId::QInv, k(q(1, 4)) + s.scale(&q(1, 2)) + b.clone(), "1/q");
    pin(&mut out, VarId::RInv, k(q(1, 2)) - s.scale(&q(1, 3)) - b.clone(), "1/r");
    pin(&mut out, VarId::P1Inv, k(q(1, 2)) + s.scale(&q(2, 3)), "1/p1");
    pin(&mut out, VarId::P3Inv, k(q(1, 2)) + s.scale(&q(1, 3)), "1/p3");
    out.push(Constraint::gt(b.clone(), k(q(1, 3)) - s.scale(&q(1, 3)), "b window: 1/3 - s/3 < 1/b"));
    out.push(Constraint::lt(b.clone(), s.clone(), "b window: 1/b < s"));
    out.push(Constraint::lt(b, k(q(1, 2)) - s.scale(&q(2, 3)), "b window: 1/b < 1/2 - 2s/3"));
    critical_tail(&mut out, ctx);
    finish(out)
}

fn n3_energy(ctx: &Ctx) -> ConstraintSystem {
    let n = ctx.n;
    let s = &ctx.s;
    let mut out = Vec::new();
    pin(&mut out, VarId::Sigma, s - &k(Rational::one()), "sigma = s - 1");
    pin(&mut out, VarId::GammaInv, k(q(1, 2)), "1/gamma");
    pin(&mut out, VarId::RhoInv, k(q(1, 6)), "1/rho");
    pin(&mut out, VarId::AInv, k(q(1, 4)), "1/a");
    pin(&mut out, VarId::BInv, k(q(1, 3)), "1/b");
    pin(&mut out, VarId::QInv, k(q(1, 2)), "1/q");
    pin(&mut out, VarId::RInv, k(q(1, 6)), "1/r");
    pin(&mut out, VarId::P1Inv, k(Rational::one()) - s.scale(&q(1, 3)), "1/p1");
    pin(&mut out, VarId::P3Inv, k(q(2, 3)), "1/p3");

    let gr = PairExpr::vars(VarId::GammaInv, VarId::RhoInv);
    let ab = PairExpr::vars(VarId::AInv, VarId::BInv);
    let qr = PairExpr::vars(VarId::QInv, VarId::RInv);
    acceptable(&mut out, n, &gr, false, "(gamma,rho)");
    acceptable(&mut out, n, &ab, false, "(a,b)");
    acceptable(&mut out, n, &qr, false, "(q,r)");
    out.extend(admissibility_constraints(n, &gr, &qr, Regime::Sharp, false, "(gamma,rho)-(q,r)"));
    out.extend(admissibility_constraints(n, &ab, &qr, Regime::NonSharp, false, "(a,b)-(q,r)"));
    critical_bilinear(&mut out, ctx, &v(VarId::RhoInv), "bilinear:");

    // Low-frequency term: carrier b with forcing exponents
    // 1/p1 = 5/6 - s/3, 1/p3 = 1/2, 1/p2 = 1/r + sigma/3.
    let b = v(VarId::BInv);
    let r = v(VarId::RInv);
    let p1 = k(q(5, 6)) - s.scale(&q(1, 3));
    let p3 = k(q(1, 2));
    let p2 = &r + &ctx.per_n(&v(VarId::Sigma));
    let dual = k(Rational::one()) - b;
    out.push(Constraint::eq(p1 + p2.clone(), dual.clone(), "bilinear on b: 1/p1 + 1/p2 = 1 - 1/b"));
    out.push(Constraint::eq(p3 + r, dual, "bilinear on b: 1/p3 + 1/r = 1 - 1/b"));
    out.push(Constraint::gt(p2, Rational::zero(), "bilinear on b: 0 < 1/r + sigma/n"));
    chain_rule(&mut out, ctx);
    finish(out)
}

fn high_dim(ctx: &Ctx, id: ScenarioId) -> Result<ConstraintSystem, ScenarioError> {
    let n = ctx.n;
    let nn = ctx.nn();
    let s = &ctx.s;
    let sigma = v(VarId::Sigma);
    let mut out = Vec::new();
    if ctx.lipschitz {
        out.push(Constraint::ge(sigma.clone(), -s.clone(), "sigma window: -s <= sigma"));
    } else {
        let alpha_s = ctx.alpha_s.clone().ok_or(ScenarioError::NotAffineInS(id))?;
        out.push(Constraint::gt(sigma.clone(), -alpha_s, "sigma window: -alpha s < sigma"));
    }
    out.push(Constraint::lt(sigma.clone(), Rational::zero(), "sigma window: sigma < 0"));
    out.push(Constraint::gt(sigma.clone(), s - &k(q(3 * nn - 4, 2 * (nn - 1))), "sigma window: s - (3n-4)/(2(n-1)) < sigma"));
    out.push(Constraint::lt(sigma.clone(), s - &k(q(nn, 2 * (nn - 1))), "sigma window: sigma < s - n/(2(n-1))"));
    pin(&mut out, VarId::RhoInv, ctx.per_n(&sigma) + k(q(1, 2)) - ctx.per_n(s), "1/rho");

    // Space exponent dual to the forcing term: 1/p~ = (n - 2 sigma - 4 + 2s)/(2n).
    let pt = k(q(nn - 4, 2 * nn)) + ctx.per_n(s) - ctx.per_n(&sigma);
    let gr = PairExpr::vars(VarId::GammaInv, VarId::RhoInv);
    let lp = PairExpr::new(VarId::LambdaInv, pt.clone());
    let ab = PairExpr::vars(VarId::AInv, VarId::BInv);
    acceptable(&mut out, n, &gr, false, "(gamma,rho)");
    acceptable(&mut out, n, &lp, false, "(lambda,p~)");
    acceptable(&mut out, n, &ab, false, "(a,b)");
    out.extend(admissibility_constraints(n, &gr, &lp, Regime::Sharp, false, "(gamma,rho)-(lambda,p~)"));
    out.extend(admissibility_constraints(n, &ab, &lp, Regime::NonSharp, false, "(a,b)-(lambda,p~)"));

    let b = v(VarId::BInv);
    out.push(Constraint::gt(b.clone(), k(q(1, 2)) - ctx.per_n(s) + ctx.per_n(&sigma), "b window: (2 sigma + n - 2s)/(2n) < 1/b"));
    out.push(Constraint::lt(b.clone(), q(1, 2), "b window: 1/b < 1/2"));
    let m = k(Rational::int(nn - 4)) + s.scale(&Rational::int(2)) - sigma.scale(&Rational::int(2));
    out.push(Constraint::ge(b.clone(), m.scale(&q(nn - 2, 2 * nn * nn)), "b window: (n-2)(n-2sigma-4+2s)/(2n^2) <= 1/b"));
    out.push(Constraint::le(b, m.scale(&q(1, 2 * (nn - 2))), "b window: 1/b <= (n-2sigma-4+2s)/(2(n-2))"));

    pin(&mut out, VarId::P1Inv, k(q(2, nn)) - ctx.per_n(&sigma), "1/p1 = (2 - sigma)/n");
    pin(&mut out, VarId::P3Inv, k(q(2, nn)), "1/p3 = 2/n");
    sigma_range(&mut out);
    let rho = v(VarId::RhoInv);
    let (p1, p2, p3) = (v(VarId::P1Inv), v(VarId::P2Inv), v(VarId::P3Inv));
    bilinear(&mut out, ctx, "bilinear:", &rho, &pt, [&p1, &p2, &p3], &[("rho", &rho), ("p1", &p1), ("p2", &p2), ("p3", &p3), ("r", &pt)]);
    Ok(finish(out))
}

fn dispatch(id: ScenarioId, ctx: &Ctx) -> Result<DisjunctiveSystem, ScenarioError> {
    Ok(match id {
        ScenarioId::SubcriticalUsual => subcritical(ctx, Space::Usual, true, id)?,
        ScenarioId::SubcriticalBetter => subcritical(ctx, Space::Better, true, id)?,
        ScenarioId::HolderUsual => subcritical(ctx, Space::Usual, false, id)?,
        ScenarioId::HolderBetter => subcritical(ctx, Space::Better, false, id)?,
        ScenarioId::CriticalN2Low => DisjunctiveSystem::single(n2_low(ctx)),
        ScenarioId::CriticalN2High => DisjunctiveSystem::single(n2_high(ctx)),
        ScenarioId::CriticalN3Mass => DisjunctiveSystem::single(n3_mass(ctx)),
        ScenarioId::CriticalN3Energy => DisjunctiveSystem::single(n3_energy(ctx)),
        ScenarioId::CriticalHighDim => DisjunctiveSystem::single(high_dim(ctx, id)?),
    })
}

fn check_guard(id: ScenarioId, p: &ProblemParams) -> Result<(), ScenarioError> {
    let s = p.s();
    let alpha = p.alpha();
    let regular = s.is_positive() && *s < 1;
    let power = match id.critical_curve() {
        Some(curve) => *alpha == curve.alpha(p.n(), s),
        None if matches!(id, ScenarioId::SubcriticalUsual | ScenarioId::SubcriticalBetter) => *alpha >= 1,
        None => *alpha < 1,
    };
    if id.dimension_ok(p.n()) && regular && power {
        Ok(())
    } else {
        Err(ScenarioError::NotApplicable { scenario: id, guard: id.guard_text() })
    }
}

pub fn is_applicable(id: ScenarioId, p: &ProblemParams) -> bool {
    check_guard(id, p).is_ok()
}

/// The scenario's constraint system at fixed parameters, as a disjunction over
/// the finite and endpoint branches of acceptability where they matter.
pub fn build_scenario(id: ScenarioId, p: &ProblemParams) -> Result<DisjunctiveSystem, ScenarioError> {
    check_guard(id, p)?;
    dispatch(id, &Ctx::point(p))
}

/// The scenario's constraint system without its applicability guard, for
/// auditing what the estimate hypotheses alone allow. Critical scenarios still
/// need their dimension and the parameters to be valid.
pub fn build_unguarded(id: ScenarioId, p: &ProblemParams) -> Result<DisjunctiveSystem, ScenarioError> {
    if !id.dimension_ok(p.n()) {
        return Err(ScenarioError::NotApplicable { scenario: id, guard: id.guard_text() });
    }
    dispatch(id, &Ctx::point(p))
}

/// A critical scenario with `s` left free (variable `s`) and `alpha` tied to
/// it by the scenario's critical curve. Available where every relation stays
/// affine in `s`.
pub fn critical_parametric(id: ScenarioId, n: u32) -> Result<DisjunctiveSystem, ScenarioError> {
    let curve = id.critical_curve().ok_or(ScenarioError::Unsupported(id.to_string(), "critical scenarios"))?;
    if !id.dimension_ok(n) {
        return Err(ScenarioError::NotApplicable { scenario: id, guard: id.guard_text() });
    }
    // On the energy curve alpha >= 1 iff n - 2s <= 4, which holds on 0 < s < 1
    // only for n = 4; beyond that the Hölder floor -alpha s is not affine.
    let lipschitz = match (id, n) {
        (ScenarioId::CriticalHighDim, 4) => true,
        (ScenarioId::CriticalHighDim, _) => return Err(ScenarioError::NotAffineInS(id)),
        _ => true,
    };
    let s = v(VarId::S);
    let ctx = Ctx { n, power: curve.power(n, &s), s: s.clone(), alpha_s: None, lipschitz };
    let sys = dispatch(id, &ctx)?;
    let branches = sys
        .branches()
        .iter()
        .map(|b| {
            let mut cons = b.constraints().to_vec();
            cons.push(Constraint::gt(s.clone(), Rational::zero(), "regularity: 0 < s"));
            cons.push(Constraint::lt(s.clone(), Rational::one(), "regularity: s < 1"));
            finish(cons)
        })
        .collect();
    Ok(DisjunctiveSystem::new(branches))
}
