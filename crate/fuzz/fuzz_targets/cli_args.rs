#![no_main]

use libfuzzer_sys::fuzz_target;

// Arguments are NUL-separated. Only parsing runs, so nothing is computed or
// written.
fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else { return };
    let args = std::iter::once("deit").chain(text.split('\0'));
    let _ = deit_cli::parse(args);
});
