use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Neg, Sub};
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::arith::Rational;

/// Exponent variables. Lebesgue and time exponents are stored as reciprocals so
/// every relation between them is affine.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Debug, Serialize, Deserialize)]
#[serde(try_from = "String", into = "String")]
pub enum VarId {
    Sigma,
    GammaInv,
    RhoInv,
    QInv,
    RInv,
    AInv,
    BInv,
    LambdaInv,
    P1Inv,
    P2Inv,
    P3Inv,
    LInv,
    Eps,
    /// Regularity treated as an unknown, for tracing thresholds along a critical curve.
    S,
}

impl VarId {
    pub const ALL: [VarId; 14] = [
        VarId::Sigma,
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
        VarId::S,
    ];

    pub fn name(self) -> &'static str {
        match self {
            VarId::Sigma => "sigma",
            VarId::GammaInv => "gamma_inv",
            VarId::RhoInv => "rho_inv",
            VarId::QInv => "q_inv",
            VarId::RInv => "r_inv",
            VarId::AInv => "a_inv",
            VarId::BInv => "b_inv",
            VarId::LambdaInv => "lambda_inv",
            VarId::P1Inv => "p1_inv",
            VarId::P2Inv => "p2_inv",
            VarId::P3Inv => "p3_inv",
            VarId::LInv => "l_inv",
            VarId::Eps => "eps",
            VarId::S => "s",
        }
    }
}

impl fmt::Display for VarId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for VarId {
    type Err = ConstraintError;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        VarId::ALL
            .iter()
            .copied()
            .find(|v| v.name() == s)
            .ok_or_else(|| ConstraintError::UnknownVariable(s.to_string()))
    }
}

impl TryFrom<String> for VarId {
    type Error = ConstraintError;
    fn try_from(s: String) -> Result<Self, Self::Error> {
        s.parse()
    }
}

impl From<VarId> for String {
    fn from(v: VarId) -> String {
        v.name().to_string()
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum ConstraintError {
    #[error("unknown variable name {0:?}")]
    UnknownVariable(String),
    #[error("variable {0} declared twice")]
    DuplicateVariable(VarId),
    #[error("constraint {label:?} uses undeclared variable {var}")]
    Undeclared { var: VarId, label: String },
    #[error("assignment has no value for {0}")]
    Unassigned(VarId),
    #[error("equality {0:?} must be substituted before elimination")]
    EqualityPresent(String),
}

/// `constant + sum(coef * var)`. Zero coefficients are never stored.
#[derive(Clone, PartialEq, Eq, Hash, Debug, Default, Serialize, Deserialize)]
pub struct LinExpr {
    #[serde(rename = "const")]
    constant: Rational,
    terms: BTreeMap<VarId, Rational>,
}

impl LinExpr {
    pub fn constant(c: Rational) -> Self {
        LinExpr { constant: c, terms: BTreeMap::new() }
    }

    pub fn var(v: VarId) -> Self {
        LinExpr::term(v, Rational::one())
    }

    pub fn term(v: VarId, coef: Rational) -> Self {
        let mut e = LinExpr::default();
        e.add_term(v, &coef);
        e
    }

    pub fn from_parts(constant: Rational, terms: impl IntoIterator<Item = (VarId, Rational)>) -> Self {
        let mut e = LinExpr::constant(constant);
        for (v, c) in terms {
            e.add_term(v, &c);
        }
        e
    }

    pub fn add_term(&mut self, v: VarId, coef: &Rational) {
        let slot = self.terms.entry(v).or_default();
        *slot += coef;
        if slot.is_zero() {
            self.terms.remove(&v);
        }
    }

    pub fn constant_part(&self) -> &Rational {
        &self.constant
    }

    pub fn terms(&self) -> &BTreeMap<VarId, Rational> {
        &self.terms
    }

    pub fn coeff(&self, v: VarId) -> Rational {
        self.terms.get(&v).cloned().unwrap_or_default()
    }

    pub fn is_constant(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn scale(&self, k: &Rational) -> LinExpr {
        if k.is_zero() {
            return LinExpr::default();
        }
        LinExpr {
            constant: &self.constant * k,
            terms: self.terms.iter().map(|(v, c)| (*v, c * k)).collect(),
        }
    }

    pub fn eval(&self, w: &ExponentAssignment) -> Result<Rational, ConstraintError> {
        let mut acc = self.constant.clone();
        for (v, c) in &self.terms {
            let x = w.get(*v).ok_or(ConstraintError::Unassigned(*v))?;
            acc += &(c * x);
        }
        Ok(acc)
    }
}

impl From<Rational> for LinExpr {
    fn from(c: Rational) -> Self {
        LinExpr::constant(c)
    }
}

impl From<VarId> for LinExpr {
    fn from(v: VarId) -> Self {
        LinExpr::var(v)
    }
}

impl Add<&LinExpr> for &LinExpr {
    type Output = LinExpr;
    fn add(self, rhs: &LinExpr) -> LinExpr {
        let mut out = self.clone();
        out.constant += &rhs.constant;
        for (v, c) in &rhs.terms {
            out.add_term(*v, c);
        }
        out
    }
}

impl Add for LinExpr {
    type Output = LinExpr;
    fn add(self, rhs: LinExpr) -> LinExpr {
        &self + &rhs
    }
}

impl Sub<&LinExpr> for &LinExpr {
    type Output = LinExpr;
    fn sub(self, rhs: &LinExpr) -> LinExpr {
        self + &(-rhs)
    }
}

impl Sub for LinExpr {
    type Output = LinExpr;
    fn sub(self, rhs: LinExpr) -> LinExpr {
        &self - &rhs
    }
}

impl Neg for &LinExpr {
    type Output = LinExpr;
    fn neg(self) -> LinExpr {
        self.scale(&Rational::int(-1))
    }
}

impl Neg for LinExpr {
    type Output = LinExpr;
    fn neg(self) -> LinExpr {
        -&self
    }
}

impl fmt::Display for LinExpr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for (v, c) in &self.terms {
            let neg = c.is_negative();
            let mag = c.abs();
            match (first, neg) {
                (true, true) => f.write_str("-")?,
                (false, true) => f.write_str(" - ")?,
                (false, false) => f.write_str(" + ")?,
                (true, false) => {}
            }
            if mag == 1 {
                write!(f, "{v}")?;
            } else {
                write!(f, "{mag}*{v}")?;
            }
            first = false;
        }
        if first {
            return write!(f, "{}", self.constant);
        }
        if !self.constant.is_zero() {
            let sign = if self.constant.is_negative() { " - " } else { " + " };
            write!(f, "{sign}{}", self.constant.abs())?;
        }
        Ok(())
    }
}

#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug, Serialize, Deserialize)]
pub enum Relation {
    #[serde(rename = "<")]
    Lt,
    #[serde(rename = "<=")]
    Le,
    #[serde(rename = "=")]
    Eq,
}

impl Relation {
    pub fn symbol(self) -> &'static str {
        match self {
            Relation::Lt => "<",
            Relation::Le => "<=",
            Relation::Eq => "=",
        }
    }

    /// Whether `value REL 0` holds.
    pub fn holds(self, value: &Rational) -> bool {
        match self {
            Relation::Lt => value.is_negative(),
            Relation::Le => !value.is_positive(),
            Relation::Eq => value.is_zero(),
        }
    }
}

/// `lhs REL 0` with a provenance label.
#[derive(Clone, PartialEq, Eq, Hash, Debug, Serialize, Deserialize)]
pub struct Constraint {
    #[serde(rename = "expr")]
    pub lhs: LinExpr,
    pub rel: Relation,
    pub label: String,
}

impl Constraint {
    pub fn new(lhs: LinExpr, rel: Relation, label: impl Into<String>) -> Self {
        Constraint { lhs, rel, label: label.into() }
    }

    /// `a < b`
    pub fn lt(a: impl Into<LinExpr>, b: impl Into<LinExpr>, label: impl Into<String>) -> Self {
        Constraint::new(a.into() - b.into(), Relation::Lt, label)
    }

    /// `a <= b`
    pub fn le(a: impl Into<LinExpr>, b: impl Into<LinExpr>, label: impl Into<String>) -> Self {
        Constraint::new(a.into() - b.into(), Relation::Le, label)
    }

    /// `a > b`
    pub fn gt(a: impl Into<LinExpr>, b: impl Into<LinExpr>, label: impl Into<String>) -> Self {
        Constraint::lt(b, a, label)
    }

    /// `a >= b`
    pub fn ge(a: impl Into<LinExpr>, b: impl Into<LinExpr>, label: impl Into<String>) -> Self {
        Constraint::le(b, a, label)
    }

    /// `a = b`
    pub fn eq(a: impl Into<LinExpr>, b: impl Into<LinExpr>, label: impl Into<String>) -> Self {
        Constraint::new(a.into() - b.into(), Relation::Eq, label)
    }

    pub fn holds_at(&self, w: &ExponentAssignment) -> Result<bool, ConstraintError> {
        Ok(self.rel.holds(&self.lhs.eval(w)?))
    }
}

impl fmt::Display for Constraint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} {} 0   [{}]", self.lhs, self.rel.symbol(), self.label)
    }
}

/// Declared variables plus constraints over them. Declaration order is the
/// elimination order.
#[derive(Clone, PartialEq, Eq, Debug, Default, Serialize, Deserialize)]
#[serde(try_from = "RawSystem")]
pub struct ConstraintSystem {
    variables: Vec<VarId>,
    constraints: Vec<Constraint>,
}

#[derive(Deserialize)]
struct RawSystem {
    variables: Vec<VarId>,
    constraints: Vec<Constraint>,
}

impl TryFrom<RawSystem> for ConstraintSystem {
    type Error = ConstraintError;
    fn try_from(raw: RawSystem) -> Result<Self, Self::Error> {
        ConstraintSystem::from_parts(raw.variables, raw.constraints)
    }
}

impl ConstraintSystem {
    pub fn new(variables: impl IntoIterator<Item = VarId>) -> Result<Self, ConstraintError> {
        let mut sys = ConstraintSystem::default();
        for v in variables {
            sys.declare(v)?;
        }
        Ok(sys)
    }

    pub fn from_parts(variables: Vec<VarId>, constraints: Vec<Constraint>) -> Result<Self, ConstraintError> {
        let mut sys = ConstraintSystem::new(variables)?;
        for c in constraints {
            sys.add(c)?;
        }
        Ok(sys)
    }

    pub fn declare(&mut self, v: VarId) -> Result<(), ConstraintError> {
        if self.variables.contains(&v) {
            return Err(ConstraintError::DuplicateVariable(v));
        }
        self.variables.push(v);
        Ok(())
    }

    /// Declares `v` unless already present.
    pub fn ensure(&mut self, v: VarId) {
        if !self.variables.contains(&v) {
            self.variables.push(v);
        }
    }

    pub fn add(&mut self, c: Constraint) -> Result<(), ConstraintError> {
        if let Some(v) = c.lhs.terms().keys().find(|v| !self.variables.contains(v)) {
            return Err(ConstraintError::Undeclared { var: *v, label: c.label });
        }
        self.constraints.push(c);
        Ok(())
    }

    /// Adds a constraint, declaring any new variables it mentions.
    pub fn push(&mut self, c: Constraint) {
        for v in c.lhs.terms().keys() {
            self.ensure(*v);
        }
        self.constraints.push(c);
    }

    pub fn variables(&self) -> &[VarId] {
        &self.variables
    }

    pub fn constraints(&self) -> &[Constraint] {
        &self.constraints
    }

    pub fn has_var(&self, v: VarId) -> bool {
        self.variables.contains(&v)
    }

    /// Every constraint that fails at `w`, with its evaluated left-hand side.
    pub fn check_assignment(&self, w: &ExponentAssignment) -> Result<Vec<Violation>, ConstraintError> {
        if let Some(v) = self.variables.iter().find(|v| w.get(**v).is_none()) {
            return Err(ConstraintError::Unassigned(*v));
        }
        let mut out = Vec::new();
        for c in &self.constraints {
            let residual = c.lhs.eval(w)?;
            if !c.rel.holds(&residual) {
                out.push(Violation { label: c.label.clone(), rel: c.rel, residual });
            }
        }
        Ok(out)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("constraint systems always serialize")
    }

    pub fn from_json(text: &str) -> Result<Self, serde_json::Error> {
        serde_json::from_str(text)
    }
}

impl fmt::Display for ConstraintSystem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let names: Vec<_> = self.variables.iter().map(|v| v.name()).collect();
        writeln!(f, "variables: {}", names.join(", "))?;
        for c in &self.constraints {
            writeln!(f, "  {c}")?;
        }
        Ok(())
    }
}

/// A failed constraint and the value of its left-hand side.
#[derive(Clone, PartialEq, Eq, Debug, Serialize, Deserialize)]
pub struct Violation {
    pub label: String,
    pub rel: Relation,
    pub residual: Rational,
}

/// Values for exponent variables.
#[derive(Clone, PartialEq, Eq, Debug, Default, Serialize, Deserialize)]
pub struct ExponentAssignment(BTreeMap<VarId, Rational>);

impl ExponentAssignment {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn get(&self, v: VarId) -> Option<&Rational> {
        self.0.get(&v)
    }

    pub fn insert(&mut self, v: VarId, x: Rational) {
        self.0.insert(v, x);
    }

    pub fn with(mut self, v: VarId, x: Rational) -> Self {
        self.insert(v, x);
        self
    }

    pub fn iter(&self) -> impl Iterator<Item = (&VarId, &Rational)> {
        self.0.iter()
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }
}

impl FromIterator<(VarId, Rational)> for ExponentAssignment {
    fn from_iter<I: IntoIterator<Item = (VarId, Rational)>>(iter: I) -> Self {
        ExponentAssignment(iter.into_iter().collect())
    }
}

/// Outcome of a feasibility decision.
#[derive(Clone, PartialEq, Eq, Debug, Serialize, Deserialize)]
pub struct Verdict {
    pub feasible: bool,
    pub witness: Option<ExponentAssignment>,
    pub certificate: Option<Vec<String>>,
}

impl Verdict {
    pub fn feasible(witness: ExponentAssignment) -> Self {
        Verdict { feasible: true, witness: Some(witness), certificate: None }
    }

    pub fn infeasible(certificate: Vec<String>) -> Self {
        Verdict { feasible: false, witness: None, certificate: Some(certificate) }
    }
}
