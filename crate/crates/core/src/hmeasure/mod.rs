//! H-measure: exact value from the hull accumulator, evaluation of an
//! arbitrary hull polyline, and the hull-subset approximation for external
//! priors.
//!
//! With a beta cost-ratio density `u(c)`, the minimum loss along a hull
//! polyline `y_0..y_m` is
//!
//! ```text
//! L = Σ_{i=0..m} ∫_{c_i}^{c_{i+1}} (π1 c (1 - y_i1) + π2 (1 - c) y_i2) u(c) dc
//! ```
//!
//! with `c_0 = 0`, `c_{m+1} = 1` and `c_i` the cost threshold of segment `i`.

mod beta;

use std::sync::Arc;

use crate::error::{Error, Result};
use crate::hull::{HullNode, NodeFn, RocHullIndex};
use crate::types::{CountPair, RocPoint};

pub use beta::{beta_fn, incomplete_beta, ln_gamma, regularized_incomplete_beta};

/// Shape of the beta cost-ratio density.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BetaParams {
    alpha: f64,
    beta: f64,
    full: f64,
    full_a1: f64,
    full_b1: f64,
}

impl BetaParams {
    pub fn new(alpha: f64, beta: f64) -> Result<BetaParams> {
        if !(alpha > 0.0 && alpha.is_finite() && beta > 0.0 && beta.is_finite()) {
            return Err(Error::Domain(format!(
                "beta parameters ({alpha}, {beta}) must be positive and finite"
            )));
        }
        Ok(BetaParams {
            alpha,
            beta,
            full: incomplete_beta(1.0, alpha, beta)?,
            full_a1: incomplete_beta(1.0, alpha + 1.0, beta)?,
            full_b1: incomplete_beta(1.0, alpha, beta + 1.0)?,
        })
    }

    pub fn alpha(&self) -> f64 {
        self.alpha
    }

    pub fn beta(&self) -> f64 {
        self.beta
    }

    /// `B(x; α+1, β)`
    fn upper_a(&self, x: f64) -> f64 {
        if x >= 1.0 {
            return self.full_a1;
        }
        incomplete_beta(x, self.alpha + 1.0, self.beta).expect("x in [0, 1]")
    }

    /// `B(x; α, β+1)`
    fn upper_b(&self, x: f64) -> f64 {
        if x >= 1.0 {
            return self.full_b1;
        }
        incomplete_beta(x, self.alpha, self.beta + 1.0).expect("x in [0, 1]")
    }
}

impl Default for BetaParams {
    fn default() -> Self {
        BetaParams::new(2.0, 2.0).expect("valid default")
    }
}

/// Class priors `(π1, π2)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Priors {
    pi1: f64,
    pi2: f64,
}

impl Priors {
    pub fn new(pi1: f64, pi2: f64) -> Result<Priors> {
        let open = |p: f64| p > 0.0 && p < 1.0;
        if !(open(pi1) && open(pi2)) || (pi1 + pi2 - 1.0).abs() > 1e-12 {
            return Err(Error::Domain(format!(
                "priors ({pi1}, {pi2}) must lie in (0, 1) and sum to 1"
            )));
        }
        Ok(Priors { pi1, pi2 })
    }

    /// Class frequencies of the data; `None` when a class is absent.
    pub fn empirical(n: CountPair) -> Option<Priors> {
        if n.c1 == 0 || n.c2 == 0 {
            return None;
        }
        let total = n.total() as f64;
        Some(Priors {
            pi1: n.c1 as f64 / total,
            pi2: n.c2 as f64 / total,
        })
    }

    pub fn pi1(&self) -> f64 {
        self.pi1
    }

    pub fn pi2(&self) -> f64 {
        self.pi2
    }
}

/// A concave chain of ROC points with the counts used to normalize it.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct HullPolyline {
    pub points: Vec<RocPoint>,
    pub totals: CountPair,
}

impl HullPolyline {
    pub fn new(points: Vec<RocPoint>, totals: CountPair) -> HullPolyline {
        HullPolyline { points, totals }
    }
}

/// Loss contribution of one hull edge with coordinate difference `d` under
/// empirical priors, before division by `n · B(1; α, β)`.
pub fn node_h(d: CountPair, params: &BetaParams) -> Result<f64> {
    if d.is_zero() {
        return Err(Error::ZeroDifference);
    }
    let c = d.c2 as f64 / (d.c1 + d.c2) as f64;
    Ok(d.c1 as f64 * params.upper_a(c) + d.c2 as f64 * (params.full_b1 - params.upper_b(c)))
}

/// [`node_h`] as a hull accumulator.
pub fn node_h_accumulator(params: BetaParams) -> Arc<NodeFn> {
    Arc::new(move |d| node_h(d, &params).unwrap_or(0.0))
}

/// Loss of the diagonal hull, the normalizer of `H`.
pub fn l_max(priors: &Priors, params: &BetaParams) -> Result<f64> {
    let (pi1, pi2) = (priors.pi1, priors.pi2);
    let value =
        (pi1 * params.upper_a(pi2) + pi2 * (params.full_b1 - params.upper_b(pi2))) / params.full;
    if value > 0.0 && value.is_finite() {
        Ok(value)
    } else {
        Err(Error::Domain(format!("degenerate priors ({pi1}, {pi2})")))
    }
}

/// Exact H-measure with empirical priors, read from the hull accumulator.
///
/// The index must carry [`node_h_accumulator`] for the same `params`.
/// Returns `None` while a class is absent.
pub fn exact_h(hull: &RocHullIndex, params: &BetaParams) -> Result<Option<f64>> {
    let sum = hull.root_accumulator()?;
    let n = hull.totals();
    let Some(priors) = Priors::empirical(n) else {
        return Ok(None);
    };
    let loss = sum / (n.total() as f64 * params.full);
    Ok(Some(1.0 - loss / l_max(&priors, params)?))
}

/// H-measure of an explicit hull polyline.
///
/// Returns `None` if either normalizing count is zero.
pub fn h_from_polyline(
    q: &HullPolyline,
    priors: &Priors,
    params: &BetaParams,
) -> Result<Option<f64>> {
    let n = q.totals;
    if n.c1 == 0 || n.c2 == 0 {
        return Ok(None);
    }
    let pts = &q.points;
    if pts.first() != Some(&RocPoint::ORIGIN) {
        return Err(Error::Domain("polyline must start at (0, 0)".into()));
    }
    if pts.last().copied().map(CountPair::from) != Some(n) {
        return Err(Error::Domain(format!("polyline must end at totals {n}")));
    }
    let mut diffs: Vec<(usize, CountPair)> = Vec::with_capacity(pts.len());
    for (k, w) in pts.windows(2).enumerate() {
        let (a, b) = (CountPair::from(w[0]), CountPair::from(w[1]));
        let d = b.checked_sub(a).ok_or(Error::NonConvexInput(k + 1))?;
        if !d.is_zero() {
            diffs.push((k + 1, d));
        }
    }
    for w in diffs.windows(2) {
        let ((_, d), (k, e)) = (w[0], w[1]);
        if (d.c2 as i128) * (e.c1 as i128) > (e.c2 as i128) * (d.c1 as i128) {
            return Err(Error::NonConvexInput(k));
        }
    }

    let (n1, n2) = (n.c1 as f64, n.c2 as f64);
    // c = 1 / (1 + ratio * d1 / d2) keeps collinear segments on identical thresholds.
    let ratio = (priors.pi1 * n2) / (priors.pi2 * n1);
    let mut loss = 0.0;
    let mut y = CountPair::ZERO;
    let (mut fa, mut fb) = (0.0, 0.0);
    for &(_, d) in &diffs {
        let c = if d.c2 == 0 {
            0.0
        } else {
            1.0 / (1.0 + ratio * (d.c1 as f64 / d.c2 as f64))
        };
        let (ga, gb) = (params.upper_a(c), params.upper_b(c));
        loss += priors.pi1 * (1.0 - y.c1 as f64 / n1) * (ga - fa)
            + priors.pi2 * (y.c2 as f64 / n2) * (gb - fb);
        (fa, fb) = (ga, gb);
        y += d;
    }
    loss += priors.pi1 * (1.0 - y.c1 as f64 / n1) * (params.full_a1 - fa)
        + priors.pi2 * (y.c2 as f64 / n2) * (params.full_b1 - fb);
    loss /= params.full;
    Ok(Some(1.0 - loss / l_max(priors, params)?))
}

/// Vertices of the hull kept by the combined subset traversal, so that the
/// polyline through them approximates both loss terms within factor `eps`.
pub fn subset(hull: &RocHullIndex, eps: f64) -> Result<HullPolyline> {
    if eps.is_nan() || eps <= 0.0 {
        return Err(Error::Domain(format!("epsilon {eps} must be positive")));
    }
    let totals = hull.totals();
    let mut points = vec![RocPoint::ORIGIN];
    if let Some(root) = hull.hull().and_then(|h| h.root()) {
        walk(root, CountPair::ZERO, totals, totals.c1, eps, &mut points);
        if points.last() != Some(&totals.into()) {
            points.push(totals.into());
        }
    }
    Ok(HullPolyline::new(points, totals))
}

fn walk(u: &HullNode, p: CountPair, q: CountPair, n1: u64, eps: f64, out: &mut Vec<RocPoint>) {
    let grow = 1.0 + eps;
    let fires = q.c2 as f64 > grow * p.c2 as f64 || (n1 - p.c1) as f64 > grow * (n1 - q.c1) as f64;
    if !fires {
        return;
    }
    let z = p + u.left().map_or(CountPair::ZERO, |l| l.cweight()) + u.weight();
    if let Some(l) = u.left() {
        walk(l, p, z, n1, eps, out);
    }
    if out.last() != Some(&z.into()) {
        out.push(z.into());
    }
    if let Some(r) = u.right() {
        walk(r, z, q, n1, eps, out);
    }
}

/// H-measure for arbitrary priors from the hull subset; never above the
/// exact value and within `eps · (1 - H)` of it.
pub fn approx_h(
    hull: &RocHullIndex,
    priors: &Priors,
    params: &BetaParams,
    eps: f64,
) -> Result<Option<f64>> {
    h_from_polyline(&subset(hull, eps)?, priors, params)
}
