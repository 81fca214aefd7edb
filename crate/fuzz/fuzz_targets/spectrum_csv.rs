#![no_main]

use deit::output::{parse_spectrum_csv, spectrum_csv};
use deit::spectra::Spectrum;
use deit::TripodParams;
use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else { return };
    let Ok(parsed) = parse_spectrum_csv(text) else { return };
    // Whatever parses must survive a write/parse cycle unchanged.
    let s = Spectrum { params: TripodParams::default(), evaluator: String::new(), relaxation: None, points: parsed.points };
    let again = parse_spectrum_csv(&spectrum_csv(&s, &parsed.metadata)).unwrap();
    assert_eq!(again.points, s.points);
});
