#![no_main]

use dynroc_cli::input::{LabelMap, Records};
use dynroc_cli::CliError;
use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    let lines = data.split(|&b| b == b'\n').count();
    for header in [false, true] {
        let mut seen = 0;
        for item in Records::new(data, LabelMap::default(), header) {
            seen += 1;
            match item {
                Ok(p) => assert!(p.score.is_finite()),
                Err(CliError::Parse { line, .. }) => assert!(line >= 1 && line <= lines),
                Err(e) => panic!("unexpected error {e}"),
            }
        }
        assert!(seen <= lines);
    }
});
