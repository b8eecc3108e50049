#![no_main]

use dynroc_cli::config::{parse_metrics, parse_priors};
use dynroc_cli::{LabelMap, RunConfig};
use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else {
        return;
    };
    let _ = parse_metrics(text);
    if let Ok(dynroc_cli::config::PriorChoice::Explicit(p)) = parse_priors(text) {
        assert!((p.pi1() + p.pi2() - 1.0).abs() <= 1e-12);
    }
    if let Ok(m) = LabelMap::parse(text) {
        assert!(m.label("").is_none());
    }
    // Whitespace-separated words form an argument vector.
    let argv = std::iter::once("dynroc").chain(text.split_whitespace());
    if let Ok(cfg) = RunConfig::from_cli(argv) {
        assert!(cfg.report_every > 0);
        assert!(cfg.epsilon > 0.0);
        assert!(cfg.window.is_none_or(|w| w >= 2));
    }
});
