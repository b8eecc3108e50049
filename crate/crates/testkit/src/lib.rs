//! Shared helpers for the property and acceptance suites: numerical
//! quadrature references and random workload generators.

use dynroc_core::{BetaParams, DataPoint, Label, Priors};
use rand::Rng;

/// Adaptive Simpson quadrature of `f` over `[a, b]`.
pub fn adaptive_simpson(f: &dyn Fn(f64) -> f64, a: f64, b: f64, tol: f64) -> f64 {
    fn simpson(fa: f64, fm: f64, fb: f64, a: f64, b: f64) -> f64 {
        (b - a) / 6.0 * (fa + 4.0 * fm + fb)
    }
    #[allow(clippy::too_many_arguments)]
    fn rec(
        f: &dyn Fn(f64) -> f64,
        a: f64,
        b: f64,
        fa: f64,
        fm: f64,
        fb: f64,
        whole: f64,
        tol: f64,
        depth: u32,
    ) -> f64 {
        let m = 0.5 * (a + b);
        let (lm, rm) = (0.5 * (a + m), 0.5 * (m + b));
        let (flm, frm) = (f(lm), f(rm));
        let left = simpson(fa, flm, fm, a, m);
        let right = simpson(fm, frm, fb, m, b);
        let delta = left + right - whole;
        if depth == 0 || delta.abs() <= 15.0 * tol {
            return left + right + delta / 15.0;
        }
        rec(f, a, m, fa, flm, fm, left, tol / 2.0, depth - 1)
            + rec(f, m, b, fm, frm, fb, right, tol / 2.0, depth - 1)
    }
    if a == b {
        return 0.0;
    }
    let (fa, fm, fb) = (f(a), f(0.5 * (a + b)), f(b));
    let whole = simpson(fa, fm, fb, a, b);
    rec(f, a, b, fa, fm, fb, whole, tol, 48)
}

/// `∫_lo^hi g(t) t^(a-1) (1-t)^(b-1) dt` for `a, b >= 1/2`.
///
/// The endpoint singularities are removed by `t = u²` on `[0, ½]` and
/// `t = 1 - v²` on `[½, 1]`.
pub fn beta_kernel_integral(g: &dyn Fn(f64) -> f64, lo: f64, hi: f64, a: f64, b: f64) -> f64 {
    let tol = 1e-15;
    let mut total = 0.0;
    let (l0, h0) = (lo.min(0.5), hi.min(0.5));
    if h0 > l0 {
        let f = |u: f64| {
            let t = u * u;
            2.0 * g(t) * u.powf(2.0 * a - 1.0) * (1.0 - t).powf(b - 1.0)
        };
        total += adaptive_simpson(&f, l0.sqrt(), h0.sqrt(), tol);
    }
    let (l1, h1) = (lo.max(0.5), hi.max(0.5));
    if h1 > l1 {
        let f = |v: f64| {
            let t = 1.0 - v * v;
            2.0 * g(t) * t.powf(a - 1.0) * v.powf(2.0 * b - 1.0)
        };
        total += adaptive_simpson(&f, (1.0 - h1).sqrt(), (1.0 - l1).sqrt(), tol);
    }
    total
}

/// Incomplete beta `B(x; a, b)` by quadrature.
pub fn incomplete_beta_quadrature(x: f64, a: f64, b: f64) -> f64 {
    beta_kernel_integral(&|_| 1.0, 0.0, x, a, b)
}

/// Minimum loss of the diagonal classifier, integrated directly:
/// `∫ min(π1 c, π2 (1 - c)) u(c) dc` with the beta density `u`.
pub fn l_max_quadrature(priors: &Priors, params: &BetaParams) -> f64 {
    let (p1, p2) = (priors.pi1(), priors.pi2());
    let (a, b) = (params.alpha(), params.beta());
    let loss = |c: f64| (p1 * c).min(p2 * (1.0 - c));
    let kink = p2;
    let num =
        beta_kernel_integral(&loss, 0.0, kink, a, b) + beta_kernel_integral(&loss, kink, 1.0, a, b);
    num / beta_kernel_integral(&|_| 1.0, 0.0, 1.0, a, b)
}

/// Shape of a random add/delete workload.
#[derive(Debug, Clone, Copy)]
pub struct WorkloadSpec {
    /// Number of operations.
    pub len: usize,
    /// Number of distinct score values to draw from; small pools force ties.
    pub score_pool: u32,
    /// Probability that an operation deletes a live point.
    pub delete_prob: f64,
    /// Probability that an added point is `Class2`.
    pub class2_prob: f64,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Op {
    Add(DataPoint),
    Delete(DataPoint),
}

/// Generates a workload; deletions always target a live point. Replay it on
/// a flat multiset with [`apply`].
pub fn workload(rng: &mut impl Rng, spec: WorkloadSpec) -> Vec<Op> {
    let mut live: Vec<DataPoint> = Vec::new();
    let mut ops = Vec::with_capacity(spec.len);
    for _ in 0..spec.len {
        if !live.is_empty() && rng.gen_bool(spec.delete_prob) {
            let k = rng.gen_range(0..live.len());
            ops.push(Op::Delete(live.swap_remove(k)));
        } else {
            let score = rng.gen_range(0..spec.score_pool) as f64 / spec.score_pool as f64;
            let label = if rng.gen_bool(spec.class2_prob) {
                Label::Class2
            } else {
                Label::Class1
            };
            let p = DataPoint { score, label };
            live.push(p);
            ops.push(Op::Add(p));
        }
    }
    ops
}

/// Applies `op` to a flat multiset.
pub fn apply(live: &mut Vec<DataPoint>, op: Op) {
    match op {
        Op::Add(p) => live.push(p),
        Op::Delete(p) => {
            let k = live
                .iter()
                .position(|q| q.score.to_bits() == p.score.to_bits() && q.label == p.label)
                .expect("deleted point is live");
            live.swap_remove(k);
        }
    }
}

/// Points whose class-2 probability rises with the score, giving long hulls.
pub fn informative_points(rng: &mut impl Rng, n: usize, sharpness: f64) -> Vec<DataPoint> {
    (0..n)
        .map(|_| {
            let score: f64 = rng.gen();
            let p2 = score.powf(sharpness).clamp(1e-3, 1.0 - 1e-3);
            let label = if rng.gen_bool(p2) {
                Label::Class2
            } else {
                Label::Class1
            };
            DataPoint { score, label }
        })
        .collect()
}

/// `|a - b| <= rel · max(|a|, |b|) + 1e-12`.
pub fn close(a: f64, b: f64, rel: f64) -> bool {
    (a - b).abs() <= rel * a.abs().max(b.abs()) + 1e-12
}
