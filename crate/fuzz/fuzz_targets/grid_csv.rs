#![no_main]

use deit::output::parse_grid_csv;
use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    if let Ok(text) = std::str::from_utf8(data) {
        if let Ok(g) = parse_grid_csv(text) {
            assert!(g.rows.iter().all(|r| r.0.is_finite() && r.1.is_finite() && r.2.is_finite()));
        }
    }
});
