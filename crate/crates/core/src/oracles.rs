//! Brute-force reference implementations.
//!
//! Nothing here touches the dynamic trees; agreement between these functions
//! and the incremental structures is the main evidence of correctness.

use std::collections::BTreeMap;

use crate::hmeasure::{h_from_polyline, BetaParams, HullPolyline, Priors};
use crate::types::{CountPair, DataPoint, Label, RocPoint, Score};

/// Twice the Mann–Whitney statistic by the quadratic double loop.
pub fn naive_doubled_u(points: &[DataPoint]) -> u64 {
    let mut total = 0u64;
    for s in points.iter().filter(|p| p.label == Label::Class1) {
        for t in points.iter().filter(|p| p.label == Label::Class2) {
            total += match s.score.partial_cmp(&t.score) {
                Some(std::cmp::Ordering::Less) => 2,
                Some(std::cmp::Ordering::Equal) => 1,
                _ => 0,
            };
        }
    }
    total
}

fn grouped(points: &[DataPoint]) -> BTreeMap<Score, CountPair> {
    let mut groups = BTreeMap::new();
    for p in points {
        let key = Score::new(p.score).expect("data points carry finite scores");
        *groups.entry(key).or_insert(CountPair::ZERO) += p.label.unit();
    }
    groups
}

/// Twice the Mann–Whitney statistic by one sorted sweep over score groups.
pub fn offline_doubled_u(points: &[DataPoint]) -> u64 {
    let mut below1 = 0u64;
    let mut doubled = 0u64;
    for w in grouped(points).values() {
        doubled += w.c2 * (2 * below1 + w.c1);
        below1 += w.c1;
    }
    doubled
}

/// AUC by the sorted sweep; `None` for one-class input.
pub fn offline_auc(points: &[DataPoint]) -> Option<f64> {
    let n = totals(points);
    if n.c1 == 0 || n.c2 == 0 {
        return None;
    }
    Some(offline_doubled_u(points) as f64 / (2.0 * n.c1 as f64 * n.c2 as f64))
}

pub fn totals(points: &[DataPoint]) -> CountPair {
    points
        .iter()
        .fold(CountPair::ZERO, |acc, p| acc + p.label.unit())
}

/// Non-normalized ROC curve: the origin followed by cumulative counts at each
/// unique score in ascending order.
pub fn offline_roc(points: &[DataPoint]) -> Vec<RocPoint> {
    let mut out = vec![RocPoint::ORIGIN];
    let mut cur = CountPair::ZERO;
    for w in grouped(points).values() {
        cur += *w;
        out.push(cur.into());
    }
    out
}

/// Monotone-chain upper hull of an ROC polyline, without collinear interior
/// vertices.
pub fn upper_hull(roc: &[RocPoint]) -> Vec<RocPoint> {
    // cross of (b - a) and (p - b) with the first coordinate vertical
    fn turn(a: RocPoint, b: RocPoint, p: RocPoint) -> i128 {
        let (u1, u2) = (b.r1 as i128 - a.r1 as i128, b.r2 as i128 - a.r2 as i128);
        let (v1, v2) = (p.r1 as i128 - b.r1 as i128, p.r2 as i128 - b.r2 as i128);
        u2 * v1 - u1 * v2
    }
    let mut hull: Vec<RocPoint> = Vec::with_capacity(roc.len());
    for &p in roc {
        while hull.len() >= 2 && turn(hull[hull.len() - 2], hull[hull.len() - 1], p) >= 0 {
            hull.pop();
        }
        hull.push(p);
    }
    hull
}

/// Class priors for an offline H-measure.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum PriorSpec {
    Empirical,
    Explicit(Priors),
}

/// H-measure recomputed from scratch; `None` for one-class input.
pub fn offline_h(points: &[DataPoint], priors: PriorSpec, params: &BetaParams) -> Option<f64> {
    let n = totals(points);
    if n.c1 == 0 || n.c2 == 0 {
        return None;
    }
    let priors = match priors {
        PriorSpec::Empirical => Priors::empirical(n)?,
        PriorSpec::Explicit(p) => p,
    };
    let poly = HullPolyline::new(upper_hull(&offline_roc(points)), n);
    h_from_polyline(&poly, &priors, params).expect("monotone-chain output is concave")
}

#[cfg(test)]
mod tests {
    use super::*;

    fn pts(v: &[(f64, u8)]) -> Vec<DataPoint> {
        v.iter()
            .map(|&(s, l)| {
                let label = if l == 1 { Label::Class1 } else { Label::Class2 };
                DataPoint::new(s, label).unwrap()
            })
            .collect()
    }

    fn rp(v: &[(u64, u64)]) -> Vec<RocPoint> {
        v.iter().map(|&(a, b)| RocPoint::new(a, b)).collect()
    }

    #[test]
    fn naive_u_examples() {
        assert_eq!(naive_doubled_u(&pts(&[(1.0, 1), (2.0, 2)])), 2);
        assert_eq!(naive_doubled_u(&pts(&[(1.0, 1), (1.0, 2)])), 1);
        assert_eq!(naive_doubled_u(&pts(&[(1.0, 1), (2.0, 2), (3.0, 1)])), 2);
    }

    #[test]
    fn sweep_matches_naive() {
        let p = pts(&[
            (0.3, 1),
            (0.3, 2),
            (0.1, 2),
            (0.5, 1),
            (0.5, 1),
            (0.2, 2),
            (0.5, 2),
        ]);
        assert_eq!(offline_doubled_u(&p), naive_doubled_u(&p));
        assert_eq!(
            offline_auc(&pts(&[(1.0, 1), (2.0, 2), (3.0, 2)])),
            Some(1.0)
        );
        assert_eq!(
            offline_auc(&pts(&[(1.0, 1), (1.0, 2), (1.0, 2)])),
            Some(0.5)
        );
        assert_eq!(offline_auc(&pts(&[(1.0, 1)])), None);
    }

    #[test]
    fn roc_examples() {
        let p = pts(&[(0.1, 2), (0.2, 1), (0.3, 2)]);
        assert_eq!(offline_roc(&p), rp(&[(0, 0), (0, 1), (1, 1), (1, 2)]));
        assert_eq!(offline_roc(&[]), rp(&[(0, 0)]));
        let dup = pts(&[(0.4, 1), (0.4, 2), (0.4, 1)]);
        assert_eq!(offline_roc(&dup), rp(&[(0, 0), (2, 1)]));
    }

    #[test]
    fn hull_examples() {
        assert_eq!(
            upper_hull(&rp(&[(0, 0), (0, 1), (1, 1), (1, 2)])),
            rp(&[(0, 0), (1, 1), (1, 2)])
        );
        let convex = rp(&[(0, 0), (3, 0), (4, 2), (4, 5)]);
        assert_eq!(upper_hull(&convex), convex);
        assert_eq!(
            upper_hull(&rp(&[(0, 0), (1, 1), (2, 2), (3, 3)])),
            rp(&[(0, 0), (3, 3)])
        );
    }

    #[test]
    fn offline_h_extremes() {
        let params = BetaParams::default();
        let sep = pts(&[(0.1, 1), (0.2, 1), (0.3, 2), (0.4, 2)]);
        let h = offline_h(&sep, PriorSpec::Empirical, &params).unwrap();
        assert!((h - 1.0).abs() < 1e-12);
        let ties = pts(&[(0.5, 1), (0.5, 2), (0.5, 2), (0.5, 1)]);
        let h = offline_h(&ties, PriorSpec::Empirical, &params).unwrap();
        assert!(h.abs() < 1e-9);
        assert_eq!(
            offline_h(&pts(&[(0.5, 2)]), PriorSpec::Empirical, &params),
            None
        );
    }
}
