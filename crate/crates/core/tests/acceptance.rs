//! Acceptance suite: ten criteria, one PASS/FAIL line each.
//!
//! Runs as a plain binary (`harness = false`) so the summary lines are always
//! printed; the process exits non-zero if any criterion fails.

use nalgebra::DMatrix;
use num_complex::Complex64;
use siegel_theta::analytic::{analytic_cocycle, sqrt_det};
use siegel_theta::cocycle::{cbar_cocycle, m_xstar, rao_cocycle, CoverElement};
use siegel_theta::exact::ZMat;
use siegel_theta::f2::{coset_count, enumerate_isotropic, transvection_rep, u1111_first, u1111_second, CosetTable};
use siegel_theta::gauss::{beta_tilde, iota, modified_cocycle, sample_gamma48};
use siegel_theta::symplectic::{
    identi_residual, make_generator, omega, omega_s, random_word_element, u_of, Generator, IntegerSymplectic, SiegelPoint, WordGroup,
};
use siegel_theta::verify::{random_point, trial_rng, verify_scalar_law, verify_vector_law, InducedRep, VerificationReport};
use siegel_theta::Mu8;
use std::time::{Duration, Instant};

// pinned tolerances and budgets
const COUNT_BUDGET: Duration = Duration::from_secs(1);
const SNAP_RESIDUAL: f64 = 1e-9;
const LAW_TOL: f64 = 1e-8;
const SCALAR_BUDGET: Duration = Duration::from_secs(60);
const VECTOR_BUDGET: Duration = Duration::from_secs(120);
const BRANCH_TOL: f64 = 1e-9;
const SEED: u64 = 20_240_601;

type Outcome = Result<String, String>;

fn sp(rows: &[&[i64]]) -> IntegerSymplectic {
    IntegerSymplectic::from_i64(&rows.iter().map(|r| r.to_vec()).collect::<Vec<_>>()).unwrap()
}

fn mat_i64(g: &IntegerSymplectic) -> Vec<Vec<i64>> {
    g.matrix().to_i64_rows().unwrap()
}

/// Plain integer product, independent of the library's matrix type.
fn mul_i64(a: &[Vec<i64>], b: &[Vec<i64>]) -> Vec<Vec<i64>> {
    (0..a.len()).map(|i| (0..b[0].len()).map(|j| (0..b.len()).map(|k| a[i][k] * b[k][j]).sum()).collect()).collect()
}

fn rows(r: &[&[i64]]) -> Vec<Vec<i64>> {
    r.iter().map(|x| x.to_vec()).collect()
}

fn word(m: usize, group: WordGroup, seed: u64) -> IntegerSymplectic {
    // lengths 1..=8 keep entries small enough for exact Maslov signatures
    random_word_element(m, group, 1 + (seed % 8) as usize, seed).0
}

// ---------------------------------------------------------------------------

fn c1_counting() -> Outcome {
    let start = Instant::now();
    for (m, want) in [(1usize, 3usize), (2, 10), (3, 36), (4, 136)] {
        // independent brute force over F₂^{2m}
        let brute = (0u32..1 << (2 * m)).filter(|v| (0..m).map(|i| (v >> i) & (v >> (m + i)) & 1).sum::<u32>() % 2 == 0).count();
        let lib = enumerate_isotropic(m).map_err(|e| e.to_string())?.len();
        let cosets = coset_count(m as u32) as usize;
        let closed = ((1usize << m) + 1) << (m - 1);
        if brute != want || lib != want || cosets != closed || cosets != want {
            return Err(format!("m={m}: brute {brute}, library {lib}, coset count {cosets}, expected {want}"));
        }
    }
    let tables: Vec<usize> = (1..=3).map(|m| CosetTable::new(m).map(|t| t.len())).collect::<Result<_, _>>().map_err(|e| e.to_string())?;
    if tables != [3, 10, 36] {
        return Err(format!("coset tables have sizes {tables:?}"));
    }
    let t = start.elapsed();
    if t > COUNT_BUDGET {
        return Err(format!("took {t:?}"));
    }
    Ok(format!("3, 10, 36, 136 and (2^m+1)2^(m-1) agree; {t:.2?}"))
}

fn c2_table() -> Outcome {
    let reference: Vec<Vec<Vec<i64>>> = vec![
        rows(&[&[1, 0, 0, 0], &[0, 1, 0, 0], &[0, 0, 1, 0], &[0, 0, 0, 1]]),
        rows(&[&[1, 0, 0, 0], &[0, 1, 0, 1], &[0, 0, 1, 0], &[0, 0, 0, 1]]),
        rows(&[&[1, 0, 1, 0], &[0, 1, 0, 0], &[0, 0, 1, 0], &[0, 0, 0, 1]]),
        rows(&[&[1, 0, 1, 1], &[0, 1, 1, 1], &[0, 0, 1, 0], &[0, 0, 0, 1]]),
        rows(&[&[1, 0, 0, 0], &[0, 1, 0, 0], &[0, 0, 1, 0], &[0, -1, 0, 1]]),
        rows(&[&[1, 1, 1, 0], &[0, 1, 0, 0], &[0, 0, 1, 0], &[0, -1, -1, 1]]),
        rows(&[&[1, 0, 0, 0], &[0, 1, 0, 0], &[-1, 0, 1, 0], &[0, 0, 0, 1]]),
        rows(&[&[1, 0, 0, 0], &[1, 1, 0, 1], &[-1, 0, 1, -1], &[0, 0, 0, 1]]),
        rows(&[&[1, 0, 0, 0], &[0, 1, 0, 0], &[-1, -1, 1, 0], &[-1, -1, 0, 1]]),
        rows(&[&[2, 1, 1, 1], &[1, 2, 1, 1], &[-1, -1, 0, -1], &[-1, -1, -1, 0]]),
    ];
    let mut ours: Vec<Vec<Vec<i64>>> =
        enumerate_isotropic(2).map_err(|e| e.to_string())?.iter().map(|q| mat_i64(&transvection_rep(q))).collect();
    let mut want = reference.clone();
    ours.sort();
    want.sort();
    if ours != want {
        let missing: Vec<_> = want.iter().filter(|m| !ours.contains(m)).collect();
        return Err(format!("not reproduced: {missing:?}"));
    }
    Ok("all ten matrices reproduced entrywise".into())
}

fn c3_factorizations() -> Outcome {
    let u = rows(&[&[2, 1, 1, 1], &[1, 2, 1, 1], &[-1, -1, 0, -1], &[-1, -1, -1, 0]]);
    let u0 = rows(&[&[0, -1, 1, 0], &[-1, 0, 0, 1], &[0, 0, 0, -1], &[0, 0, -1, 0]]);
    let u1 = rows(&[&[1, 0, -1, 0], &[0, 1, 0, -1], &[0, 0, 1, 0], &[0, 0, 0, 1]]);
    let u2 = rows(&[&[1, 0, 0, 0], &[0, 1, 0, 0], &[1, 1, 1, 0], &[1, 1, 0, 1]]);
    let p1 = rows(&[&[1, -1, 1, 0], &[0, 1, 0, 0], &[0, 0, 1, 0], &[0, 0, 1, 1]]);
    let ws = rows(&[&[0, 0, -1, 0], &[0, 1, 0, 0], &[1, 0, 0, 0], &[0, 0, 0, 1]]);
    let n2 = rows(&[&[1, 0, 1, 0], &[0, 1, 0, 0], &[0, 0, 1, 0], &[0, 0, 0, 1]]);
    let m2 = rows(&[&[1, 1, 0, 0], &[0, 1, 0, 0], &[0, 0, 1, 0], &[0, 0, -1, 1]]);
    let first = mul_i64(&mul_i64(&u0, &u1), &u2);
    let second = mul_i64(&mul_i64(&mul_i64(&p1, &ws), &n2), &m2);
    if first != u || second != u2 {
        return Err(format!("products {first:?} / {second:?}"));
    }
    // the library's named factors agree with the displayed ones
    if u1111_first().to_i64_rows() != Some(u1) || u1111_second().to_i64_rows() != Some(u2) {
        return Err("library u¹, u² differ from the displayed factors".into());
    }
    if mat_i64(&omega_s(2, &[0])) != ws {
        return Err("ω_S with S = {1} differs".into());
    }
    Ok("both factorizations hold exactly".into())
}

fn c4_cocycle() -> Outcome {
    let mut triples = 0;
    for m in [1usize, 2] {
        for k in 0..500u64 {
            let s = SEED + 3 * k + 10_000 * m as u64;
            let (a, b, c) = (word(m, WordGroup::Sp, s), word(m, WordGroup::Sp, s + 1), word(m, WordGroup::Sp, s + 2));
            let lhs = rao_cocycle(&a, &b) * rao_cocycle(&a.mul(&b), &c);
            let rhs = rao_cocycle(&a, &b.mul(&c)) * rao_cocycle(&b, &c);
            if lhs != rhs {
                return Err(format!("2-cocycle identity fails for {a:?}, {b:?}, {c:?}"));
            }
            for (x, y) in [(&a, &b), (&b, &c), (&a, &c)] {
                let bar = cbar_cocycle(x, y).map_err(|e| e.to_string())?;
                let rel = m_xstar(&x.mul(y)).inv() * m_xstar(x) * m_xstar(y) * rao_cocycle(x, y);
                if rel != Mu8::from_sign(bar) || rel.as_sign().is_none() {
                    return Err(format!("c̄ relation fails: {rel} vs {bar}"));
                }
            }
            let bars = [cbar_cocycle(&a, &b), cbar_cocycle(&a.mul(&b), &c), cbar_cocycle(&a, &b.mul(&c)), cbar_cocycle(&b, &c)];
            let bars: Vec<i8> = bars.into_iter().collect::<Result<_, _>>().map_err(|e| e.to_string())?;
            if bars[0] * bars[1] != bars[2] * bars[3] {
                return Err("c̄ is not a 2-cocycle".into());
            }
            triples += 1;
        }
    }
    let u1 = IntegerSymplectic::new(u1111_first()).unwrap();
    let u2 = IntegerSymplectic::new(u1111_second()).unwrap();
    let u12 = u1.mul(&u2);
    let vals = [rao_cocycle(&u12, &omega(2)).inv(), m_xstar(&u2), m_xstar(&u12)];
    if vals.iter().any(|&v| v != Mu8::new(-1)) {
        return Err(format!("genus-two values {vals:?}, expected e^(-iπ/4)"));
    }
    Ok(format!("{triples} triples; c̄ = ±1 and the normalization relation hold; e^(-iπ/4) values reproduced"))
}

fn c5_trivialization() -> Outcome {
    let mut worst = 0.0f64;
    let mut beta = |g: &IntegerSymplectic| -> Result<Mu8, String> {
        let b = beta_tilde(g).map_err(|e| e.to_string())?;
        worst = worst.max(b.residual);
        Ok(b.value)
    };
    let mut pairs = 0;
    for m in [1usize, 2] {
        for k in 0..250u64 {
            let s = SEED + 2 * k + 50_000 * m as u64;
            let (h1, h2) = (word(m, WordGroup::Gamma12, s), word(m, WordGroup::Gamma12, s + 1));
            let lhs = rao_cocycle(&h1, &h2);
            let rhs = beta(&h1)?.inv() * beta(&h2)?.inv() * beta(&h1.mul(&h2))?;
            if lhs != rhs {
                return Err(format!("trivialization fails for {h1:?}, {h2:?}"));
            }
            pairs += 1;
        }
    }
    let mut anchors: Vec<(String, IntegerSymplectic, Mu8)> =
        vec![("u⁻(4)".into(), sp(&[&[1, 0], &[-4, 1]]), Mu8::new(1)), ("(−3 4; −4 5)".into(), sp(&[&[-3, 4], &[-4, 5]]), Mu8::new(5))];
    for m in [1usize, 2, 3] {
        for i in 0..m {
            anchors.push((format!("ω_S m={m} S={{{i}}}"), omega_s(m, &[i]), Mu8::ONE));
        }
        anchors.push((format!("ω m={m}"), omega(m), Mu8::ONE));
    }
    for t in [-2i64, -1, 1, 3] {
        for (i, j) in [(0usize, 1usize), (0, 2), (1, 2)] {
            anchors.push((format!("u⁻_{i}{j}({})", 2 * t), make_generator(3, &Generator::ULowerij(i, j, 2 * t)).unwrap(), Mu8::ONE));
        }
    }
    // parabolic elements h(A)·u(B) of the theta group: A unimodular, B with even diagonal
    let unimodular = [[[1, 0], [0, 1]], [[0, 1], [1, 0]], [[2, 1], [1, 1]], [[1, 3], [0, -1]]];
    let evens = [[[0, 1], [1, 2]], [[2, -3], [-3, 4]], [[-2, 0], [0, 6]]];
    for a in &unimodular {
        for b in &evens {
            let h = make_generator(2, &Generator::H(ZMat::from_i64(&[a[0].to_vec(), a[1].to_vec()]))).unwrap();
            let g = h.mul(&u_of(&ZMat::from_i64(&[b[0].to_vec(), b[1].to_vec()])));
            anchors.push((format!("h({a:?})u({b:?})"), g, Mu8::ONE));
        }
    }
    for (name, g, want) in &anchors {
        let got = beta(g)?;
        if got != *want {
            return Err(format!("β̃({name}) = {got}, expected {want}"));
        }
    }
    if worst >= SNAP_RESIDUAL {
        return Err(format!("snap residual {worst:e}"));
    }
    Ok(format!("{pairs} pairs, {} anchors; max snap residual {worst:.1e}", anchors.len()))
}

fn law_line(reports: &[VerificationReport], t: Duration, budget: Duration) -> Outcome {
    let worst = reports.iter().map(|r| r.max_rel_error).fold(0.0, f64::max);
    let degenerate = reports.iter().all(|r| r.per_weight.iter().any(|w| w.degenerate));
    let mut line = format!("max rel error {worst:.2e} (tol {LAW_TOL:.0e}); {t:.1?}");
    if degenerate {
        line += "; weight 3/2 degenerate: both sides vanish identically";
    }
    for r in reports {
        if !r.pass {
            return Err(format!(
                "{} m={} failed: rel {:e}, {:?}, worst {:?}",
                r.theorem, r.genus, r.max_rel_error, r.failures, r.worst_case
            ));
        }
    }
    if t > budget {
        return Err(format!("{line}; over the {budget:?} budget"));
    }
    Ok(line)
}

fn c6_scalar_law() -> Outcome {
    let start = Instant::now();
    let reports: Vec<_> = [1usize, 2]
        .iter()
        .map(|&m| verify_scalar_law(m, 200, LAW_TOL, SEED + m as u64))
        .collect::<Result<_, _>>()
        .map_err(|e| e.to_string())?;
    law_line(&reports, start.elapsed(), SCALAR_BUDGET)
}

fn c7_vector_law() -> Outcome {
    let start = Instant::now();
    let r = verify_vector_law(2, 100, LAW_TOL, SEED).map_err(|e| e.to_string())?;
    law_line(&[r], start.elapsed(), VECTOR_BUDGET)
}

fn c8_homomorphism() -> Outcome {
    let rep = InducedRep::new(2).map_err(|e| e.to_string())?;
    for k in 0..200u64 {
        let s = SEED + 7 * k;
        let r1 = CoverElement::new(word(2, WordGroup::Sp, s), if k % 2 == 0 { 1 } else { -1 });
        let r2 = CoverElement::new(word(2, WordGroup::Sp, s + 1), if k % 3 == 0 { -1 } else { 1 });
        let g1 = rep.matrix(&r1).map_err(|e| e.to_string())?;
        let g2 = rep.matrix(&r2).map_err(|e| e.to_string())?;
        let g12 = rep.matrix(&r1.mul(&r2).map_err(|e| e.to_string())?).map_err(|e| e.to_string())?;
        if g12 != g1.mul(&g2).unwrap() {
            return Err(format!("γ̄(r̄₁r̄₂) ≠ γ̄(r̄₁)γ̄(r̄₂) at pair {k}"));
        }
        // dense cross-check of the monomial product and shape
        let dense = g1.dense() * g2.dense();
        if (dense - g12.dense()).iter().any(|w| w.norm() > 1e-12) {
            return Err(format!("dense product disagrees at pair {k}"));
        }
        let d = g12.dense();
        for i in 0..rep.dim() {
            let nz_row = (0..rep.dim()).filter(|&j| d[(i, j)].norm() > 0.5).count();
            let nz_col = (0..rep.dim()).filter(|&j| d[(j, i)].norm() > 0.5).count();
            if nz_row != 1 || nz_col != 1 {
                return Err(format!("γ̄ not monomial at pair {k}"));
            }
        }
    }
    Ok("200 pairs exact in μ8; always monomial".into())
}

fn c9_finite_reduction() -> Outcome {
    let table = CosetTable::new(2).map_err(|e| e.to_string())?;
    for k in 0..200u64 {
        let r = word(2, WordGroup::Gamma12, SEED + 11 * k);
        let g = word(2, WordGroup::Sp, SEED + 11 * k + 5);
        let v = modified_cocycle(&table, &r, &g).map_err(|e| e.to_string())?;
        if v != Mu8::ONE {
            return Err(format!("c̃′(r, g) = {v} at sample {k}"));
        }
    }
    for k in 0..50u64 {
        let r = sample_gamma48(2, SEED + k, 3, 3).map_err(|e| e.to_string())?;
        let g = word(2, WordGroup::Sp, SEED + 13 * k + 1);
        let v = modified_cocycle(&table, &g, &r).map_err(|e| e.to_string())?;
        if v != Mu8::ONE {
            return Err(format!("c̃′(g, r) = {v} for r in Γ(4,8), sample {k}"));
        }
    }
    let g = iota(2, 0, [[1, 1], [0, 1]]).unwrap();
    let r = iota(2, 0, [[1, 0], [-4, 1]]).unwrap();
    let w = modified_cocycle(&table, &g, &r).map_err(|e| e.to_string())?;
    if w != Mu8::MINUS_ONE {
        return Err(format!("level-4 witness gives {w}"));
    }
    Ok("200 + 50 samples trivial; level-4 witness is −1".into())
}

fn c10_analytic() -> Outcome {
    let mut sq = 0.0f64;
    for k in 0..1000usize {
        let m = 1 + k % 3;
        let g = word(m, WordGroup::Sp, SEED + k as u64);
        let z = random_point(&mut trial_rng(SEED, k), m, 1e4).map_err(|e| e.to_string())?;
        let s = sqrt_det(&g, &z).map_err(|e| e.to_string())?;
        // independent determinant of cz + d
        let gf = g.to_f64();
        let zz = z.z();
        let j = DMatrix::from_fn(m, m, |i, l| {
            (0..m).map(|t| Complex64::new(gf[(m + i, t)], 0.0) * zz[(t, l)]).sum::<Complex64>() + gf[(m + i, m + l)]
        });
        let det = j.determinant();
        sq = sq.max((s * s - det).norm() / det.norm().max(1.0));
    }
    let mut two = 0.0f64;
    for k in 0..200u64 {
        let m = 1 + (k % 2) as usize;
        let (g1, g2) = (word(m, WordGroup::Sp, SEED + 2 * k), word(m, WordGroup::Sp, SEED + 2 * k + 1));
        let z = SiegelPoint::base(m);
        let a = analytic_cocycle(&g1, &g2, &z).map_err(|e| e.to_string())?;
        two = two.max((a - rao_cocycle(&g1, &g2).embed()).norm());
    }
    let mut ident = 0.0f64;
    for k in 0..200u64 {
        let g = word(1 + (k % 3) as usize, WordGroup::Sp, SEED + 3 * k);
        ident = ident.max(identi_residual(&g.to_f64()).map_err(|e| e.to_string())?);
    }
    let line = format!("sqrt_det² residual {sq:.1e}, cocycle agreement {two:.1e}, identity residual {ident:.1e}");
    if sq < BRANCH_TOL && two < BRANCH_TOL && ident < BRANCH_TOL {
        Ok(line)
    } else {
        Err(line)
    }
}

type Criterion = (&'static str, fn() -> Outcome);

fn main() {
    let criteria: [Criterion; 10] = [
        ("counting identities", c1_counting),
        ("genus-two transvection table", c2_table),
        ("genus-two factorizations", c3_factorizations),
        ("cocycle suite", c4_cocycle),
        ("trivialization suite", c5_trivialization),
        ("scalar theta law", c6_scalar_law),
        ("vector theta law", c7_vector_law),
        ("γ̄ homomorphism", c8_homomorphism),
        ("finite reduction", c9_finite_reduction),
        ("analytic branches", c10_analytic),
    ];
    let mut failed = 0;
    for (i, (name, f)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let res = std::panic::catch_unwind(f).unwrap_or_else(|_| Err("panicked".into()));
        let t = start.elapsed();
        match res {
            Ok(detail) => println!("PASS {:>2} {name}: {detail} [{t:.1?}]", i + 1),
            Err(detail) => {
                failed += 1;
                println!("FAIL {:>2} {name}: {detail} [{t:.1?}]", i + 1);
            }
        }
    }
    println!("acceptance: {} passed, {failed} failed", criteria.len() - failed);
    if failed > 0 {
        std::process::exit(1);
    }
}
