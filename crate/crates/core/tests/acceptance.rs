//! Acceptance criteria. Each test writes one `PASS`/`FAIL` line straight to
//! stdout (bypassing test capture) and then asserts.

mod common;

use std::io::Write;

use common::{char_poly, largest_root_in, reference_template};
use sysmap_core::bounds::{
    sandwich_table, window_ratio, wolpert_distance_lower_bound, TableFamily,
};
use sysmap_core::chains::{build_base_chain, check_filling_euler, FillingCellCount};
use sysmap_core::matrix::TransitionMatrix;
use sysmap_core::mixing::mixing_number;
use sysmap_core::spectral::{root_dilatation_bound, spectral_radius, DEFAULT_TOLERANCE};
use sysmap_core::surfaces::{collar_width, cover_invariants, RationalRay, RayPoint, Surface};
use sysmap_core::twist::{check_column_sum_bound, lifted_root_matrix, transition_matrix_base};

fn ray(p: u64, q: u64) -> RationalRay {
    RationalRay::new(p, q).unwrap()
}

fn report(criterion: u32, name: &str, failures: &[String]) {
    let verdict = if failures.is_empty() { "PASS" } else { "FAIL" };
    let mut out = std::io::stdout().lock();
    writeln!(out, "\nacceptance {criterion} [{name}]: {verdict}").unwrap();
    for f in failures.iter().take(12) {
        writeln!(out, "    {f}").unwrap();
    }
    if failures.len() > 12 {
        writeln!(out, "    ... {} more", failures.len() - 12).unwrap();
    }
    out.flush().unwrap();
    assert!(
        failures.is_empty(),
        "criterion {criterion} failed: {failures:#?}"
    );
}

const INDICES: [u64; 4] = [2, 4, 8, 16];
const RAYS: [(u64, u64); 3] = [(1, 1), (2, 3), (1, 4)];

#[test]
fn criterion_1_template_fidelity() {
    let mut failures = Vec::new();
    for (p, q) in [(1, 2), (1, 4), (3, 2)] {
        let chain = build_base_chain(&ray(p, q), None).unwrap();
        let inter: Vec<u64> = chain
            .adjacent_intersections()
            .iter()
            .map(|&x| x as u64)
            .collect();
        for i in [1u64, 2, 5, 10] {
            let m = transition_matrix_base(&ray(p, q), i)
                .unwrap()
                .to_u64_rows()
                .unwrap();
            let t = reference_template(&inter, i);
            for (r, (mr, tr)) in m.iter().zip(&t).enumerate() {
                for (c, (a, b)) in mr.iter().zip(tr).enumerate() {
                    if a != b {
                        failures.push(format!(
                            "{p}/{q} i={i} entry ({},{}): computed {a}, template {b}",
                            r + 1,
                            c + 1
                        ));
                    }
                }
            }
        }
    }
    // Odd q: column sums only.
    for i in [1u64, 2, 5, 10] {
        let m = transition_matrix_base(&ray(2, 3), i).unwrap();
        if let Err(e) = check_column_sum_bound(&m, i) {
            failures.push(format!("2/3 i={i}: {e}"));
        }
    }
    // Row 2 at i = 1 reads I12, I12 + 1.
    let m = transition_matrix_base(&ray(2, 3), 1)
        .unwrap()
        .to_u64_rows()
        .unwrap();
    let i12 = 2;
    if m[1][0] != i12 || m[1][1] != i12 + 1 {
        failures.push(format!(
            "2/3 i=1 row 2 starts {}, {}; template {i12}, {}",
            m[1][0],
            m[1][1],
            i12 + 1
        ));
    }
    report(1, "template fidelity", &failures);
}

#[test]
fn criterion_2_column_sum_bound() {
    let mut failures = Vec::new();
    let mut checked = 0;
    for p in 1..=7u64 {
        for q in 1..=13u64 {
            let Ok(r) = RationalRay::new(p, q) else {
                continue;
            };
            if 2 * p + q > 15 {
                continue;
            }
            for i in 1..=20 {
                let m = transition_matrix_base(&r, i).unwrap();
                checked += 1;
                if let Err(e) = check_column_sum_bound(&m, i) {
                    assert!(e.is_falsification());
                    failures.push(format!("{r} i={i}: {e}"));
                }
            }
        }
    }
    assert!(checked > 500);
    report(2, "column-sum bound", &failures);
}

#[test]
fn criterion_3_dilatation_enclosure() {
    let mut matrices: Vec<(String, TransitionMatrix)> = Vec::new();
    for (p, q) in [(1, 1), (1, 2), (1, 3), (2, 1), (1, 4)] {
        for i in 1..=5 {
            matrices.push((
                format!("base {p}/{q} i={i}"),
                transition_matrix_base(&ray(p, q), i).unwrap(),
            ));
        }
    }
    matrices.push((
        "root 1/1 i=2".into(),
        lifted_root_matrix(&ray(1, 1), 2).unwrap(),
    ));
    let small: [&[&[u32]]; 5] = [
        &[&[1, 0], &[0, 1]],
        &[&[1, 1], &[1, 1]],
        &[&[1, 1], &[1, 0]],
        &[&[0, 1], &[4, 0]],
        &[&[2, 1, 0], &[0, 1, 3], &[1, 0, 0]],
    ];
    for rows in small {
        let rows: Vec<Vec<u32>> = rows.iter().map(|r| r.to_vec()).collect();
        matrices.push((
            format!("{rows:?}"),
            TransitionMatrix::from_rows(&rows).unwrap(),
        ));
    }

    let mut failures = Vec::new();
    for (name, m) in &matrices {
        assert!(m.dim() <= 6);
        let r = spectral_radius(m, DEFAULT_TOLERANCE).unwrap();
        if !largest_root_in(&char_poly(m), r.lower, r.upper) {
            failures.push(format!(
                "{name}: [{}, {}] misses the Perron root",
                r.lower, r.upper
            ));
        }
        if !r.converged || r.width() > DEFAULT_TOLERANCE {
            failures.push(format!("{name}: width {} above tolerance", r.width()));
        }
    }
    report(3, "dilatation enclosure", &failures);
}

#[test]
fn criterion_4_root_map_dilatation() {
    let mut failures = Vec::new();
    for (p, q) in RAYS {
        for i in INDICES {
            match root_dilatation_bound(&ray(p, q), i) {
                Ok(d) if d.computed_log_upper <= d.closed_form + 1e-6 => {}
                Ok(d) => failures.push(format!(
                    "{p}/{q} i={i}: log λ <= {} vs {}",
                    d.computed_log_upper, d.closed_form
                )),
                Err(e) => failures.push(format!("{p}/{q} i={i}: {e}")),
            }
        }
    }
    report(4, "root-map dilatation", &failures);
}

#[test]
fn criterion_5_mixing_cap() {
    let mut failures = Vec::new();
    for (p, q) in RAYS {
        let r = ray(p, q);
        for i in INDICES {
            let m = lifted_root_matrix(&r, i).unwrap();
            let cap = r.mixing_cap(i);
            let found = mixing_number(&m, cap).unwrap();
            if m.dim() <= 8 {
                let exact = (1..=cap as u32)
                    .find(|&k| m.pow(k).is_positive())
                    .map(|k| k as usize);
                assert_eq!(
                    found.mixing_number, exact,
                    "{r} i={i}: boolean and integer powers disagree"
                );
            }
            if found.mixing_number.is_none() {
                let actual = mixing_number(&m, 64 * cap).unwrap().mixing_number;
                failures.push(format!(
                    "{r} i={i}: no mixing number within cap {cap} (least positive power: {})",
                    actual.map_or("none".into(), |x| x.to_string())
                ));
            }
        }
    }
    report(5, "mixing cap", &failures);
}

#[test]
fn criterion_6_sandwich_asymptotics() {
    let family = TableFamily::Ray(ray(2, 3));
    let indices: Vec<u64> = (4..=64).collect();
    let rows = sandwich_table(&family, &indices, None).unwrap();
    let mut failures = Vec::new();
    for row in &rows {
        if row.k_upper.is_none() || row.k_lower.is_none() {
            failures.push(format!("i={}: {}", row.index, row.status));
        }
        if row.sandwich_violated() {
            failures.push(format!("i={}: K_lower > K_upper", row.index));
        }
    }
    let upper = window_ratio(rows.iter().filter_map(|r| r.k_upper_log_chi));
    let lower = window_ratio(rows.iter().filter_map(|r| r.k_lower_log_chi));
    match upper {
        Some(w) if w <= 50.0 => {}
        Some(w) => failures.push(format!("K_upper log|chi| window ratio {w} > 50")),
        None => failures.push("K_upper log|chi| window empty".into()),
    }
    match lower {
        Some(w) if w <= 50.0 => {}
        Some(w) => failures.push(format!("K_lower log|chi| window ratio {w} > 50")),
        None => failures.push("K_lower log|chi| window empty".into()),
    }
    report(6, "sandwich asymptotics", &failures);
}

#[test]
fn criterion_7_formula_checks() {
    let mut failures = Vec::new();

    let l = 2.0 * 1f64.asinh();
    let w = collar_width(l).unwrap();
    if (w - 1f64.asinh()).abs() > 1e-12 {
        failures.push(format!("collar fixed point: w = {w}"));
    }

    let e = std::f64::consts::E;
    let cases = [((1.0, e), 1.0), ((2.0, 2.0), 0.0), ((2.0, 1.0), 0.0)];
    for ((lx, ly), want) in cases {
        let got = wolpert_distance_lower_bound(lx, ly).unwrap();
        if (got - want).abs() > 1e-12 {
            failures.push(format!("wolpert({lx}, {ly}) = {got}, want {want}"));
        }
    }

    // Two curves meeting twice on the four-punctured sphere: V = 2, E = 4,
    // four punctured bigons and no discs, so V - E + F = 2 on the sphere.
    let s04 = Surface::new(0, 4).unwrap();
    let count = FillingCellCount {
        intersections: 2,
        discs: 0,
        punctured_discs: 4,
    };
    let (v, edges, f) = (2i64, 4i64, 4i64);
    if v - edges + f != 2 || !check_filling_euler(&count, &s04) {
        failures.push("S_{0,4} filling configuration".into());
    }
    if check_filling_euler(
        &FillingCellCount {
            intersections: 2,
            discs: 2,
            punctured_discs: 0,
        },
        &Surface::new(2, 0).unwrap(),
    ) {
        failures.push("S_{2,0} with D = 2 accepted".into());
    }

    let mut grid = 0;
    for (p, q) in [(1, 1), (2, 3), (1, 6), (3, 2), (5, 4)] {
        for i in [2u64, 3, 4, 9] {
            grid += 1;
            let s = cover_invariants(&RayPoint::new(ray(p, q), i).unwrap());
            let chi_base = 2 - 2 * p as i64 - (q as i64 + 2);
            if s.euler_characteristic() != i as i64 * chi_base + 2 || s.punctures() != q * i {
                failures.push(format!("cover {p}/{q} i={i} = {s}"));
            }
        }
    }
    assert_eq!(grid, 20);
    report(7, "formula checks", &failures);
}
