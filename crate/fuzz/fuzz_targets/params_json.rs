#![no_main]

use deit::{LambdaParams, TripodParams};
use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else { return };
    if let Ok(p) = TripodParams::from_json(text) {
        let again = TripodParams::from_json(&serde_json::to_string(&p).unwrap()).unwrap();
        assert_eq!(p, again);
        assert_eq!(p.validate().unwrap(), p);
    }
    let _ = LambdaParams::from_json(text);
});
