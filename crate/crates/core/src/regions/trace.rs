use serde::Serialize;

use crate::arith::Rational;
use crate::scenarios::CriticalCurve;

use super::grid::default_alpha_max;
use super::target::Region;

/// `lo < hi` with `hi - lo <= tol` and membership differing at the two ends,
/// so a boundary lies in `(lo, hi]`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Bracket {
    pub lo: Rational,
    pub hi: Rational,
}

impl Bracket {
    pub fn width(&self) -> Rational {
        &self.hi - &self.lo
    }

    pub fn contains(&self, x: &Rational) -> bool {
        self.lo < *x && *x <= self.hi
    }

    /// Upper bound on the distance from `x` to the boundary inside.
    pub fn distance_bound(&self, x: &Rational) -> Rational {
        Rational::max_of(&(x - &self.lo).abs(), &(x - &self.hi).abs()).clone()
    }
}

/// Samples `f` on the lattice `range.0 + k * seed` and bisects every sign
/// change down to width `tol`.
fn trace(f: impl Fn(&Rational) -> bool, (lo, hi): (&Rational, &Rational), seed: &Rational, tol: &Rational) -> Vec<Bracket> {
    assert!(seed.is_positive() && tol.is_positive(), "seed and tol must be positive");
    let mut xs = Vec::new();
    let mut x = lo.clone();
    while x < *hi {
        xs.push(x.clone());
        x = &x + seed;
    }
    xs.push(hi.clone());
    let vals: Vec<bool> = xs.iter().map(&f).collect();
    let mut out = Vec::new();
    for i in 0..xs.len() - 1 {
        if vals[i] == vals[i + 1] {
            continue;
        }
        let (mut a, mut b) = (xs[i].clone(), xs[i + 1].clone());
        let left = vals[i];
        while &b - &a > *tol {
            let m = Rational::midpoint(&a, &b);
            if f(&m) == left {
                a = m;
            } else {
                b = m;
            }
        }
        out.push(Bracket { lo: a, hi: b });
    }
    out
}

/// Boundaries of `region` in `alpha` at fixed `s`, seeded on `seed`.
pub fn trace_alpha(n: u32, region: &Region, s: &Rational, range: (&Rational, &Rational), seed: &Rational, tol: &Rational) -> Vec<Bracket> {
    trace(|a| region.contains(n, s, a), range, seed, tol)
}

/// Boundaries of `region` in `s` at fixed `alpha`.
pub fn trace_s(n: u32, region: &Region, alpha: &Rational, range: (&Rational, &Rational), seed: &Rational, tol: &Rational) -> Vec<Bracket> {
    trace(|s| region.contains(n, s, alpha), range, seed, tol)
}

/// Boundaries of `region` in `s` with `alpha` tied to `s` by a critical curve.
pub fn trace_critical(n: u32, region: &Region, curve: CriticalCurve, range: (&Rational, &Rational), seed: &Rational, tol: &Rational) -> Vec<Bracket> {
    trace(|s| region.contains(n, s, &curve.alpha(n, s)), range, seed, tol)
}

/// Boundaries in `alpha` at fixed `s` over `[0, default_alpha_max(n)]`,
/// seeded every `1/64`. Returns every sign change found.
pub fn boundary_trace(n: u32, region: &Region, s: &Rational, tol: &Rational) -> Vec<Bracket> {
    let top = default_alpha_max(n);
    trace_alpha(n, region, s, (&Rational::zero(), &top), &Rational::frac(1, 64), tol)
}
