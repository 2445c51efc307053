#![no_main]

use libfuzzer_sys::fuzz_target;
use siegel_theta::io::{parse_int_matrix, parse_symplectic};

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else {
        return;
    };
    let _ = parse_int_matrix(text);
    // accepted matrices must really be symplectic
    if let Ok(g) = parse_symplectic(text) {
        assert!(g.mul(&g.inverse()).is_identity());
    }
});
