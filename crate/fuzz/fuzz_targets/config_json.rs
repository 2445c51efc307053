#![no_main]

use libfuzzer_sys::fuzz_target;
use siegel_theta::io::parse_config;

fuzz_target!(|data: &[u8]| {
    if let Ok(text) = std::str::from_utf8(data) {
        let _ = parse_config(text);
    }
});
