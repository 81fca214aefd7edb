#![no_main]

use deit::model::preset_for;
use deit::output::Format;
use deit::{Evaluator, Figure, Relaxation, ScanAxis};
use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else { return };
    if let Ok(e) = text.parse::<Evaluator>() {
        assert_eq!(e.tag(), text);
    }
    if let Ok(f) = text.parse::<Figure>() {
        assert_eq!(preset_for(text).unwrap().figure, f);
    }
    let _ = text.parse::<Relaxation>();
    let _ = text.parse::<ScanAxis>();
    if let Ok(list) = Format::parse_list(text) {
        assert!(!list.is_empty());
    }
});
