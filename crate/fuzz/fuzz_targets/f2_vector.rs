#![no_main]

use libfuzzer_sys::fuzz_target;
use siegel_theta::f2::F2Vector;

fuzz_target!(|data: &[u8]| {
    let Ok(s) = std::str::from_utf8(data) else {
        return;
    };
    // parse ∘ display is the identity on accepted labels
    if let Ok(v) = F2Vector::parse(s) {
        assert_eq!(F2Vector::parse(&v.to_string()).unwrap(), v);
    }
});
