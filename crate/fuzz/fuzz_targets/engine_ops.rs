#![no_main]

//! Decodes bytes into add/delete operations and checks the dynamic
//! structures against the offline oracles.

use dynroc_core::hmeasure::{exact_h, node_h_accumulator};
use dynroc_core::oracles::{naive_doubled_u, offline_h, offline_roc, upper_hull, PriorSpec};
use dynroc_core::{AucState, BetaParams, DataPoint, Label, RocHullIndex};
use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    let params = BetaParams::default();
    let mut auc = AucState::new();
    let mut hull = RocHullIndex::new();
    hull.set_accumulator(node_h_accumulator(params));
    let mut live: Vec<DataPoint> = Vec::new();
    for &b in data.iter().take(256) {
        // High bit: delete the live point at index (b & 0x3f); otherwise add
        // score (b & 0x1f) with the label from bit 5.
        if b & 0x80 != 0 && !live.is_empty() {
            let p = live.swap_remove((b & 0x3f) as usize % live.len());
            auc.delete(p.score, p.label.unit()).unwrap();
            hull.remove(p.score, p.label.unit()).unwrap();
        } else {
            let label = if b & 0x20 != 0 {
                Label::Class2
            } else {
                Label::Class1
            };
            let p = DataPoint {
                score: (b & 0x1f) as f64,
                label,
            };
            auc.add(p.score, p.label.unit()).unwrap();
            hull.insert(p.score, p.label.unit()).unwrap();
            live.push(p);
        }
        assert_eq!(auc.doubled_u(), naive_doubled_u(&live));
        assert_eq!(hull.hull_vertices(), upper_hull(&offline_roc(&live)));
    }
    hull.validate().unwrap();
    match (
        exact_h(&hull, &params).unwrap(),
        offline_h(&live, PriorSpec::Empirical, &params),
    ) {
        (None, None) => {}
        (Some(a), Some(b)) => assert!((a - b).abs() <= 1e-9 * a.abs().max(b.abs()) + 1e-12),
        (a, b) => panic!("{a:?} vs {b:?}"),
    }
});
