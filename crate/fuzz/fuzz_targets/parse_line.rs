#![no_main]

use dynroc_cli::input::{parse_line, LabelMap};
use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else {
        return;
    };
    let maps = [LabelMap::default(), LabelMap::new("pos", "neg").unwrap()];
    for map in &maps {
        if let Ok(p) = parse_line(text, map) {
            assert!(p.score.is_finite());
            assert!(p.score != 0.0 || p.score.is_sign_positive());
            // The label field is the token after the comma, trimmed.
            let token = text.split(',').nth(1).unwrap().trim();
            let again = parse_line(&format!("{:?},{token}", p.score), map).unwrap();
            assert_eq!(again, p);
        }
    }
});
