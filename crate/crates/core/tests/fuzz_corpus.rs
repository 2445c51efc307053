//! Replays the checked-in fuzz seeds through the same entry points as the
//! fuzz targets, so they run under `cargo test` on stable.

use siegel_theta::f2::F2Vector;
use siegel_theta::io::{parse_config, parse_int_matrix, parse_siegel_point, parse_symplectic};
use std::path::PathBuf;

fn seeds(target: &str) -> Vec<(String, String)> {
    let dir = PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../fuzz/corpus").join(target);
    let mut out: Vec<(String, String)> = std::fs::read_dir(&dir)
        .unwrap_or_else(|e| panic!("{}: {e}", dir.display()))
        .map(|e| {
            let p = e.unwrap().path();
            (p.file_name().unwrap().to_string_lossy().into_owned(), std::fs::read_to_string(&p).unwrap())
        })
        .collect();
    out.sort();
    assert!(!out.is_empty(), "no seeds for {target}");
    out
}

#[test]
fn matrix_seeds() {
    let mut accepted = 0;
    for (name, text) in seeds("matrix_json") {
        let _ = parse_int_matrix(&text);
        if let Ok(g) = parse_symplectic(&text) {
            assert!(g.mul(&g.inverse()).is_identity(), "{name}");
            accepted += 1;
        }
    }
    assert!(accepted >= 3);
}

#[test]
fn siegel_seeds() {
    let ok: Vec<bool> = seeds("siegel_json").iter().map(|(_, t)| parse_siegel_point(t).is_ok()).collect();
    assert!(ok.contains(&true) && ok.contains(&false));
}

#[test]
fn f2_seeds() {
    for (name, text) in seeds("f2_vector") {
        if let Ok(v) = F2Vector::parse(&text) {
            assert_eq!(F2Vector::parse(&v.to_string()).unwrap(), v, "{name}");
        }
    }
}

#[test]
fn config_seeds() {
    let ok: Vec<bool> = seeds("config_json").iter().map(|(_, t)| parse_config(t).is_ok()).collect();
    assert!(ok.contains(&true) && ok.contains(&false));
}
