#![no_main]

use libfuzzer_sys::fuzz_target;
use siegel_theta::io::parse_siegel_point;

fuzz_target!(|data: &[u8]| {
    if let Ok(text) = std::str::from_utf8(data) {
        if let Ok(z) = parse_siegel_point(text) {
            let _ = z.cond_y();
        }
    }
});
