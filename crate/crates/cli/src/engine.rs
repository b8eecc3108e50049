//! Dynamic metric state and the recompute-from-scratch baseline.

use dynroc_core::hmeasure::{approx_h, exact_h, node_h_accumulator};
use dynroc_core::oracles::{offline_doubled_u, offline_h, totals, PriorSpec};
use dynroc_core::{AucState, BetaParams, CountPair, DataPoint, Priors, RocHullIndex};

use crate::config::{Outputs, PriorChoice};

/// Metric values at one step. `None` means undefined or not requested.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct Values {
    pub totals: CountPair,
    pub doubled_u: Option<u64>,
    pub auc: Option<f64>,
    pub h_exact: Option<f64>,
    pub h_approx: Option<f64>,
}

#[derive(Debug, Clone, Copy)]
pub struct MetricSpec {
    pub outputs: Outputs,
    pub params: BetaParams,
    pub priors: PriorChoice,
    pub epsilon: f64,
}

impl MetricSpec {
    fn approx_priors(&self, n: CountPair) -> Option<Priors> {
        match self.priors {
            PriorChoice::Explicit(p) => (n.c1 > 0 && n.c2 > 0).then_some(p),
            PriorChoice::Empirical => Priors::empirical(n),
        }
    }
}

/// Incrementally maintained metrics.
#[derive(Debug, Clone)]
pub struct Engine {
    spec: MetricSpec,
    auc: Option<AucState>,
    hull: Option<RocHullIndex>,
}

impl Engine {
    pub fn new(spec: MetricSpec) -> Engine {
        let o = spec.outputs;
        let hull = (o.h_exact || o.h_approx).then(|| {
            let mut idx = RocHullIndex::new();
            if o.h_exact {
                idx.set_accumulator(node_h_accumulator(spec.params));
            }
            idx
        });
        Engine {
            spec,
            auc: (o.auc || hull.is_none()).then(AucState::new),
            hull,
        }
    }

    pub fn add(&mut self, p: DataPoint) {
        let w = p.label.unit();
        if let Some(a) = self.auc.as_mut() {
            a.add(p.score, w).expect("parsed scores are finite");
        }
        if let Some(h) = self.hull.as_mut() {
            h.insert(p.score, w).expect("parsed scores are finite");
        }
    }

    /// Removes a point that was added earlier.
    pub fn delete(&mut self, p: DataPoint) {
        let w = p.label.unit();
        if let Some(a) = self.auc.as_mut() {
            a.delete(p.score, w).expect("evicted point is present");
        }
        if let Some(h) = self.hull.as_mut() {
            h.remove(p.score, w).expect("evicted point is present");
        }
    }

    pub fn values(&self) -> Values {
        let o = self.spec.outputs;
        let totals = match (&self.auc, &self.hull) {
            (Some(a), _) => a.totals(),
            (None, Some(h)) => h.totals(),
            (None, None) => CountPair::ZERO,
        };
        let mut v = Values {
            totals,
            ..Values::default()
        };
        if let (true, Some(a)) = (o.auc, &self.auc) {
            v.doubled_u = Some(a.doubled_u());
            v.auc = a.auc();
        }
        if let Some(h) = &self.hull {
            if o.h_exact {
                v.h_exact = exact_h(h, &self.spec.params).expect("accumulator registered");
            }
            if o.h_approx {
                v.h_approx = self.spec.approx_priors(totals).and_then(|p| {
                    approx_h(h, &p, &self.spec.params, self.spec.epsilon).expect("valid epsilon")
                });
            }
        }
        v
    }
}

/// Recomputes every requested metric from scratch. For `h_approx` the value
/// is the exact H-measure under the same priors, which the approximation is
/// checked against.
pub fn baseline(points: &[DataPoint], spec: &MetricSpec) -> Values {
    let o = spec.outputs;
    let n = totals(points);
    let mut v = Values {
        totals: n,
        ..Values::default()
    };
    if o.auc {
        let d = offline_doubled_u(points);
        v.doubled_u = Some(d);
        v.auc = (n.c1 > 0 && n.c2 > 0).then(|| d as f64 / (2.0 * n.c1 as f64 * n.c2 as f64));
    }
    if o.h_exact {
        v.h_exact = offline_h(points, PriorSpec::Empirical, &spec.params);
    }
    if o.h_approx {
        v.h_approx = spec
            .approx_priors(n)
            .and_then(|p| offline_h(points, PriorSpec::Explicit(p), &spec.params));
    }
    v
}

/// Checks dynamic values against the baseline. Returns the first failing
/// metric with both values rendered.
pub fn compare(
    dynamic: &Values,
    base: &Values,
    epsilon: f64,
) -> Result<(), (&'static str, String, String)> {
    let show = |x: Option<f64>| x.map_or("null".to_string(), |x| format!("{x:?}"));
    if dynamic.doubled_u != base.doubled_u || dynamic.auc.is_some() != base.auc.is_some() {
        return Err(("auc", show(dynamic.auc), show(base.auc)));
    }
    match (dynamic.h_exact, base.h_exact) {
        (None, None) => {}
        (Some(a), Some(b)) if (a - b).abs() <= 1e-9 * a.abs().max(b.abs()) + 1e-12 => {}
        (a, b) => return Err(("h_exact", show(a), show(b))),
    }
    match (dynamic.h_approx, base.h_approx) {
        (None, None) => {}
        (Some(approx), Some(h))
            if (h - approx).abs() <= epsilon * (1.0 - h) + 1e-9 && approx <= h + 1e-12 => {}
        (a, b) => return Err(("h_approx", show(a), show(b))),
    }
    Ok(())
}
