//! Label vocabulary for scenario constraints.
//!
//! Every label is an optional pair tag such as `(gamma,rho)` or
//! `(a,b)-(q,r)` followed by a role prefix from [`ROLES`]. The audit in
//! [`is_catalogued`] checks that shape.

/// Role prefixes, one per hypothesis family a constraint can come from.
pub const ROLES: &[&str] = &[
    "choice:",
    "acceptable:",
    "scaling",
    "non-sharp:",
    "sharp:",
    "plane:",
    "besov:",
    "bilinear:",
    "bilinear on b:",
    "difference estimate:",
    "holder chain rule:",
    "chain rule:",
    "forcing exponent:",
    "rho window:",
    "b window:",
    "sigma window:",
    "eps:",
    "regularity:",
];

pub const SIGMA_LOWER: &str = "bilinear: -1 < sigma";
pub const SIGMA_NEGATIVE: &str = "bilinear: sigma < 0";
pub const P2_POSITIVE: &str = "bilinear: 0 < 1/r + sigma/n";
pub const P2_BESOV: &str = "bilinear: 1/r + sigma/n <= 1/2";
pub const P2_SOBOLEV: &str = "bilinear: 1/r + sigma/n <= 1";
pub const DIFFERENCE: &str = "difference estimate: s >= -sigma";
pub const HOLDER: &str = "holder chain rule: -alpha s < sigma";
pub const FORCING: &str = "forcing exponent: (n-2s)(alpha+1)/(2n) < 1";

/// Whether `label` has the catalogued shape.
pub fn is_catalogued(label: &str) -> bool {
    let body = match label.split_once(' ') {
        Some((tag, rest)) if is_pair_tag(tag) => rest,
        _ => label,
    };
    ROLES.iter().any(|r| body.starts_with(r) && body.len() > r.len() || body == r.trim_end_matches(':'))
}

fn is_pair_tag(tag: &str) -> bool {
    tag.split('-').all(|p| {
        p.starts_with('(') && p.ends_with(')') && p[1..p.len() - 1].split(',').count() == 2
    })
}
