use std::collections::HashMap;

use dynroc_core::hmeasure::{
    approx_h, exact_h, h_from_polyline, incomplete_beta, node_h, node_h_accumulator, subset,
};
use dynroc_core::hull::bridge;
use dynroc_core::oracles::{
    naive_doubled_u, offline_auc, offline_doubled_u, offline_h, offline_roc, totals, upper_hull,
    PriorSpec,
};
use dynroc_core::{
    AucState, BetaParams, CountPair, DataPoint, HullPolyline, HullTree, Label, Priors,
    RocHullIndex, RocPoint, ScoreIndex,
};
use dynroc_testkit::{apply, close, incomplete_beta_quadrature, workload, Op, WorkloadSpec};
use proptest::prelude::*;
use rand::rngs::StdRng;
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};

fn label(b: bool) -> Label {
    if b {
        Label::Class2
    } else {
        Label::Class1
    }
}

fn point_strategy(pool: u32) -> impl Strategy<Value = DataPoint> {
    (0..pool, any::<bool>()).prop_map(move |(s, l)| DataPoint {
        score: s as f64 / pool as f64,
        label: label(l),
    })
}

/// Sequences of (is_delete, point index hint, new point).
fn ops_strategy() -> impl Strategy<Value = Vec<(bool, usize, DataPoint)>> {
    prop::collection::vec(
        (
            prop::bool::weighted(0.35),
            any::<usize>(),
            point_strategy(12),
        ),
        1..120,
    )
}

fn replay<F: FnMut(Op, &[DataPoint])>(raw: &[(bool, usize, DataPoint)], mut f: F) {
    let mut live: Vec<DataPoint> = Vec::new();
    for &(del, hint, p) in raw {
        let op = if del && !live.is_empty() {
            Op::Delete(live[hint % live.len()])
        } else {
            Op::Add(p)
        };
        apply(&mut live, op);
        f(op, &live);
    }
}

fn brute_left(live: &[DataPoint], sigma: f64) -> CountPair {
    live.iter()
        .filter(|p| p.score < sigma)
        .fold(CountPair::ZERO, |a, p| a + p.label.unit())
}

fn hm_index() -> RocHullIndex {
    let mut idx = RocHullIndex::new();
    idx.set_accumulator(node_h_accumulator(BetaParams::default()));
    idx
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(128))]

    #[test]
    fn left_count_matches_brute_force(raw in ops_strategy(), probes in prop::collection::vec(-0.1f64..1.1, 8)) {
        let mut idx = ScoreIndex::new();
        replay(&raw, |op, live| {
            match op {
                Op::Add(p) => idx.insert(p.score, p.label.unit()).unwrap(),
                Op::Delete(p) => idx.remove(p.score, p.label.unit()).unwrap(),
            }
            idx.validate().unwrap();
            for &s in &probes {
                assert_eq!(idx.left_count(s), brute_left(live, s));
            }
            for p in live {
                assert_eq!(idx.left_count(p.score), brute_left(live, p.score));
            }
            for s in probes.iter().copied().chain(live.iter().map(|p| p.score)) {
                assert_eq!(idx.probe(s), (idx.left_count(s), idx.weight_at(s)));
            }
            assert_eq!(idx.totals(), totals(live));
        });
    }

    #[test]
    fn insert_remove_restores_content(raw in ops_strategy(), s in 0u32..12, w1 in 0u64..4, w2 in 0u64..4) {
        prop_assume!(w1 + w2 > 0);
        let mut idx = ScoreIndex::new();
        replay(&raw, |op, _| match op {
            Op::Add(p) => idx.insert(p.score, p.label.unit()).unwrap(),
            Op::Delete(p) => idx.remove(p.score, p.label.unit()).unwrap(),
        });
        let before = idx.entries();
        let score = s as f64 / 12.0;
        idx.insert(score, CountPair::new(w1, w2)).unwrap();
        idx.remove(score, CountPair::new(w1, w2)).unwrap();
        prop_assert_eq!(idx.entries(), before);
    }

    #[test]
    fn doubled_u_matches_naive(raw in ops_strategy()) {
        let mut st = AucState::new();
        replay(&raw, |op, live| {
            match op {
                Op::Add(p) => st.add_point(p.score, p.label).unwrap(),
                Op::Delete(p) => st.delete_point(p.score, p.label).unwrap(),
            }
            assert_eq!(st.doubled_u(), naive_doubled_u(live));
            assert_eq!(st.doubled_u(), offline_doubled_u(live));
            match (st.auc(), offline_auc(live)) {
                (None, None) => {}
                (Some(a), Some(b)) => assert!((a - b).abs() <= 1e-12 * b.abs()),
                other => panic!("definedness differs: {other:?}"),
            }
        });
    }

    #[test]
    fn batch_add_equals_split_add(raw in ops_strategy(), s in 0u32..12, a in (0u64..4, 0u64..4), b in (0u64..4, 0u64..4)) {
        let (a, b) = (CountPair::new(a.0, a.1), CountPair::new(b.0, b.1));
        prop_assume!(!a.is_zero() && !b.is_zero());
        let mut base = AucState::new();
        replay(&raw, |op, _| match op {
            Op::Add(p) => base.add_point(p.score, p.label).unwrap(),
            Op::Delete(p) => base.delete_point(p.score, p.label).unwrap(),
        });
        let score = s as f64 / 12.0;
        let mut one = base.clone();
        one.add(score, a + b).unwrap();
        let mut two = base.clone();
        two.add(score, a).unwrap();
        two.add(score, b).unwrap();
        prop_assert_eq!(one.doubled_u(), two.doubled_u());
        one.delete(score, a + b).unwrap();
        prop_assert_eq!(one.doubled_u(), base.doubled_u());
    }

    #[test]
    fn hull_matches_monotone_chain(raw in ops_strategy()) {
        let mut idx = RocHullIndex::new();
        let f = |d: CountPair| (3 * d.c1 + d.c2) as f64;
        idx.set_accumulator(std::sync::Arc::new(f));
        replay(&raw, |op, live| {
            match op {
                Op::Add(p) => idx.insert(p.score, p.label.unit()).unwrap(),
                Op::Delete(p) => idx.remove(p.score, p.label.unit()).unwrap(),
            }
            idx.validate().unwrap();
            let expect = upper_hull(&offline_roc(live));
            assert_eq!(idx.hull_vertices(), expect);
            let brute: f64 = expect.windows(2).map(|w| {
                f(CountPair::from(w[1]) - CountPair::from(w[0]))
            }).sum();
            let got = idx.root_accumulator().unwrap();
            assert!((got - brute).abs() <= 1e-12 * brute.abs().max(1.0));
        });
    }

    #[test]
    fn slopes_strictly_decrease(raw in ops_strategy()) {
        let mut idx = RocHullIndex::new();
        replay(&raw, |op, _| match op {
            Op::Add(p) => idx.insert(p.score, p.label.unit()).unwrap(),
            Op::Delete(p) => idx.remove(p.score, p.label.unit()).unwrap(),
        });
        let d = idx.hull().map(|h| h.diffs()).unwrap_or_default();
        for w in d.windows(2) {
            prop_assert!((w[0].c1 as i128) * (w[1].c2 as i128) > (w[1].c1 as i128) * (w[0].c2 as i128));
        }
    }

    #[test]
    fn exact_h_matches_offline(raw in ops_strategy()) {
        let params = BetaParams::default();
        let mut idx = hm_index();
        replay(&raw, |op, live| {
            match op {
                Op::Add(p) => idx.insert(p.score, p.label.unit()).unwrap(),
                Op::Delete(p) => idx.remove(p.score, p.label.unit()).unwrap(),
            }
            let got = exact_h(&idx, &params).unwrap();
            let want = offline_h(live, PriorSpec::Empirical, &params);
            match (got, want) {
                (None, None) => {}
                (Some(a), Some(b)) => assert!(close(a, b, 1e-9), "{a} vs {b}"),
                other => panic!("definedness differs: {other:?}"),
            }
        });
    }

    #[test]
    fn collinear_split_leaves_h_unchanged(
        d in prop::collection::vec((1u64..6, 1u64..6), 1..8),
        k in 2u64..5,
        which in any::<usize>(),
        p1 in 0.05f64..0.95,
    ) {
        let mut diffs: Vec<CountPair> = d.iter().map(|&(a, b)| CountPair::new(a, b)).collect();
        // Sort into a concave chain and merge parallel edges.
        diffs.sort_by(|x, y| (y.c1 * x.c2).cmp(&(x.c1 * y.c2)));
        diffs.dedup_by(|y, x| {
            if x.c1 * y.c2 == y.c1 * x.c2 { *x += *y; true } else { false }
        });
        let pts = |ds: &[CountPair]| {
            let mut v = vec![RocPoint::ORIGIN];
            let mut cur = CountPair::ZERO;
            for &e in ds { cur += e; v.push(cur.into()); }
            v
        };
        let n = diffs.iter().fold(CountPair::ZERO, |a, &e| a + e);
        let mut split = Vec::new();
        let w = which % diffs.len();
        for (i, &e) in diffs.iter().enumerate() {
            if i == w {
                let e = CountPair::new(e.c1 * k, e.c2 * k);
                split.push(CountPair::new(e.c1 / k, e.c2 / k));
                split.push(CountPair::new(e.c1 - e.c1 / k, e.c2 - e.c2 / k));
            } else {
                split.push(CountPair::new(e.c1 * k, e.c2 * k));
            }
        }
        let scaled: Vec<CountPair> = diffs.iter().map(|e| CountPair::new(e.c1 * k, e.c2 * k)).collect();
        let nk = CountPair::new(n.c1 * k, n.c2 * k);
        let priors = Priors::new(p1, 1.0 - p1).unwrap();
        let params = BetaParams::new(2.0, 5.0).unwrap();
        let a = h_from_polyline(&HullPolyline::new(pts(&scaled), nk), &priors, &params).unwrap();
        let b = h_from_polyline(&HullPolyline::new(pts(&split), nk), &priors, &params).unwrap();
        match (a, b) {
            (Some(a), Some(b)) => prop_assert!((a - b).abs() <= 1e-12, "{} vs {}", a, b),
            (a, b) => prop_assert_eq!(a, b),
        }
    }
}

/// Hull equivalence over a long randomized run with heavy ties.
#[test]
fn long_hull_run_matches_oracle() {
    let mut rng = StdRng::seed_from_u64(7);
    let spec = WorkloadSpec {
        len: 12_000,
        score_pool: 300,
        delete_prob: 0.4,
        class2_prob: 0.35,
    };
    let params = BetaParams::default();
    let mut idx = hm_index();
    let mut live = Vec::new();
    for (step, op) in workload(&mut rng, spec).into_iter().enumerate() {
        apply(&mut live, op);
        match op {
            Op::Add(p) => idx.insert(p.score, p.label.unit()).unwrap(),
            Op::Delete(p) => idx.remove(p.score, p.label.unit()).unwrap(),
        }
        assert_eq!(
            idx.hull_vertices(),
            upper_hull(&offline_roc(&live)),
            "step {step}"
        );
        if step % 500 == 0 {
            idx.validate().unwrap();
            let want = offline_h(&live, PriorSpec::Empirical, &params);
            let got = exact_h(&idx, &params).unwrap();
            assert_eq!(got.is_some(), want.is_some());
            if let (Some(a), Some(b)) = (got, want) {
                assert!(close(a, b, 1e-9), "step {step}: {a} vs {b}");
            }
        }
    }
}

/// 500 random split pairs of random ROC curves through the public bridge.
#[test]
fn random_bridge_splits() {
    let mut rng = StdRng::seed_from_u64(11);
    let diffs_of = |pts: &[RocPoint]| -> Vec<CountPair> {
        pts.windows(2)
            .map(|w| CountPair::from(w[1]) - CountPair::from(w[0]))
            .collect()
    };
    for _ in 0..500 {
        let n = rng.gen_range(2..400);
        let mut roc = vec![RocPoint::ORIGIN];
        let mut cur = CountPair::ZERO;
        for _ in 0..n {
            let w = if rng.gen_bool(0.5) {
                CountPair::new(rng.gen_range(1..4), 0)
            } else {
                CountPair::new(rng.gen_range(0..3), rng.gen_range(1..4))
            };
            cur += w;
            roc.push(cur.into());
        }
        let cut = rng.gen_range(1..n);
        let base = CountPair::from(roc[cut]);
        let right: Vec<RocPoint> = roc[cut..]
            .iter()
            .map(|p| (CountPair::from(*p) - base).into())
            .collect();
        let zero = |_: CountPair| 0.0;
        let h = HullTree::from_diffs(&diffs_of(&upper_hull(&roc[..=cut])), &zero);
        let g = HullTree::from_diffs(&diffs_of(&upper_hull(&right)), &zero);
        let br = bridge(&h, &g, h.total()).unwrap();
        let mut joined = h.vertices_from(CountPair::ZERO);
        joined.truncate(br.i + 1);
        joined.extend_from_slice(&g.vertices_from(base)[br.j..]);
        assert_eq!(joined, upper_hull(&roc));
        assert_eq!(CountPair::from(joined[br.i]), br.start);
        assert_eq!(CountPair::from(joined[br.i + 1]), br.end);
    }
}

#[test]
fn exact_h_is_permutation_invariant() {
    let mut rng = StdRng::seed_from_u64(3);
    let params = BetaParams::new(2.0, 5.0).unwrap();
    for _ in 0..40 {
        let n = rng.gen_range(2..300);
        let mut pts: Vec<DataPoint> = (0..n)
            .map(|_| DataPoint {
                score: rng.gen_range(0..40) as f64,
                label: label(rng.gen_bool(0.4)),
            })
            .collect();
        let mut values = Vec::new();
        for _ in 0..4 {
            pts.shuffle(&mut rng);
            let mut idx = RocHullIndex::new();
            idx.set_accumulator(node_h_accumulator(params));
            for p in &pts {
                idx.insert(p.score, p.label.unit()).unwrap();
            }
            values.push(exact_h(&idx, &params).unwrap());
        }
        for v in &values[1..] {
            match (v, &values[0]) {
                (Some(a), Some(b)) => assert!((a - b).abs() <= 1e-12, "{a} vs {b}"),
                (a, b) => assert_eq!(a, b),
            }
        }
    }
}

#[test]
fn decomposition_identity_for_other_shapes() {
    let mut rng = StdRng::seed_from_u64(5);
    for &(a, b) in &[(1.0, 1.0), (0.5, 3.0), (5.0, 2.0)] {
        let params = BetaParams::new(a, b).unwrap();
        for _ in 0..30 {
            let pts: Vec<DataPoint> = (0..rng.gen_range(2..500))
                .map(|_| {
                    let s: f64 = rng.gen();
                    DataPoint {
                        score: (s * 100.0).floor(),
                        label: label(rng.gen_bool(s)),
                    }
                })
                .collect();
            let roc_hull = upper_hull(&offline_roc(&pts));
            let n = totals(&pts);
            let Some(priors) = Priors::empirical(n) else {
                continue;
            };
            let sum: f64 = roc_hull
                .windows(2)
                .map(|w| node_h(CountPair::from(w[1]) - CountPair::from(w[0]), &params).unwrap())
                .sum();
            let lfull = incomplete_beta(1.0, a, b).unwrap();
            let l_nodes = sum / (n.total() as f64 * lfull);
            let h = h_from_polyline(&HullPolyline::new(roc_hull, n), &priors, &params)
                .unwrap()
                .unwrap();
            let lmax = dynroc_core::hmeasure::l_max(&priors, &params).unwrap();
            assert!(close(1.0 - l_nodes / lmax, h, 1e-9));
        }
    }
}

#[test]
fn approximation_guarantee_and_direction() {
    let mut rng = StdRng::seed_from_u64(13);
    let params = BetaParams::default();
    for &eps in &[0.01, 0.1, 0.5, 1.0, 2.0] {
        for _ in 0..60 {
            let pts = {
                let n = rng.gen_range(2..800);
                dynroc_testkit::informative_points(&mut rng, n, 2.0)
            };
            let mut idx = RocHullIndex::new();
            for p in &pts {
                idx.insert(p.score, p.label.unit()).unwrap();
            }
            for priors in [
                Priors::new(0.5, 0.5).unwrap(),
                Priors::new(0.1, 0.9).unwrap(),
            ] {
                let exact = offline_h(&pts, PriorSpec::Explicit(priors), &params);
                let approx = approx_h(&idx, &priors, &params, eps).unwrap();
                let (Some(h), Some(h2)) = (exact, approx) else {
                    assert_eq!(exact.is_none(), approx.is_none());
                    continue;
                };
                assert!(
                    (h - h2).abs() <= eps * (1.0 - h) + 1e-9,
                    "eps {eps}: {h} vs {h2}"
                );
                assert!(h2 <= h + 1e-12);
            }
        }
    }
}

/// Every run of hull vertices skipped between consecutive subset points
/// satisfies both sandwich conditions.
#[test]
fn subset_sandwich_conditions() {
    let mut rng = StdRng::seed_from_u64(17);
    for &eps in &[0.05, 0.1, 0.5, 2.0] {
        for _ in 0..40 {
            let pts = {
                let n = rng.gen_range(2..3000);
                dynroc_testkit::informative_points(&mut rng, n, 3.0)
            };
            let mut idx = RocHullIndex::new();
            for p in &pts {
                idx.insert(p.score, p.label.unit()).unwrap();
            }
            let full = idx.hull_vertices();
            let q = subset(&idx, eps).unwrap().points;
            let n1 = idx.totals().c1 as f64;
            let pos: HashMap<RocPoint, usize> =
                full.iter().enumerate().map(|(i, p)| (*p, i)).collect();
            assert_eq!(q.first(), full.first());
            assert_eq!(q.last(), full.last());
            for w in q.windows(2) {
                let (i, j) = (pos[&w[0]], pos[&w[1]]);
                assert!(i < j, "subset is sorted and drawn from the hull");
                if j > i + 1 {
                    let (a, b) = (w[0], w[1]);
                    assert!(b.r2 as f64 <= (1.0 + eps) * a.r2 as f64);
                    assert!(n1 - a.r1 as f64 <= (1.0 + eps) * (n1 - b.r1 as f64));
                }
            }
        }
    }
}

#[test]
fn huge_epsilon_keeps_only_spines() {
    let mut rng = StdRng::seed_from_u64(19);
    for _ in 0..50 {
        let pts = {
            let n = rng.gen_range(2..2000);
            dynroc_testkit::informative_points(&mut rng, n, 2.0)
        };
        let mut idx = RocHullIndex::new();
        for p in &pts {
            idx.insert(p.score, p.label.unit()).unwrap();
        }
        let q = subset(&idx, 1e9).unwrap().points;
        let height = idx.hull().map_or(0, |h| h.height()) as usize;
        assert!(
            q.len() <= 2 * height + 2,
            "{} points for height {height}",
            q.len()
        );
    }
}

#[test]
fn incomplete_beta_matches_quadrature() {
    let shapes = [0.5, 1.0, 2.0, 5.0];
    for &a in &shapes {
        for &b in &shapes {
            for k in 0..=40 {
                let x = k as f64 / 40.0;
                let got = incomplete_beta(x, a, b).unwrap();
                let want = incomplete_beta_quadrature(x, a, b);
                assert!(
                    (got - want).abs() <= 1e-10,
                    "B({x}; {a}, {b}) = {got} vs {want}"
                );
            }
        }
    }
}
