//! Acceptance suite. Prints one PASS/FAIL line per criterion and exits
//! non-zero if any criterion fails. Scan criteria are judged on values read
//! back from the written CSV tables.

mod common;

use std::path::Path;
use std::time::{Duration, Instant};

use common::{dense_ph_rdm, random_state, rng};
use spinwit::experiments::{
    evaluate, fit_power_law, run_distance_scan, run_grid2d_scan, run_noise_map, run_size_scan, DistanceRecord,
    Grid2dRecord, NoiseRecord, NoiseScan, PipelineOptions, ScanConfig, SizeRecord, BRIGHT_COUNT_THRESHOLD, STATUS_OK,
};
use spinwit::io::{csv_bytes, read_csv, write_csv, CsvRow};
use spinwit::linalg::{eig_lowest_k, eigh_dense};
use spinwit::model::{chain_y, total_h, total_site_operator, GridPlane, ModelParams, DIPOLE_KAPPA_GHZ_NM3};
use spinwit::witness::{canonical_basis, ph_rdm, witness_of_state, PSD_TOL};

const SPACING: f64 = 5.125;

struct Outcome {
    id: &'static str,
    title: &'static str,
    pass: bool,
    detail: String,
    elapsed: Duration,
}

fn within_limit(elapsed: Duration, limit_s: f64) -> (bool, String) {
    let secs = elapsed.as_secs_f64();
    (secs < limit_s, format!("{secs:.2} s of {limit_s} s"))
}

/// Writes rows to `dir/name`, then returns what a reader of that file sees.
fn through_csv<R: CsvRow>(dir: &Path, name: &str, rows: &[R]) -> Vec<R> {
    let path = dir.join(name);
    write_csv(rows, &path).expect("write csv");
    read_csv(&path).expect("read csv")
}

fn default_point() -> spinwit::experiments::PointResult {
    let params = ModelParams::default();
    let geom = chain_y(3, SPACING).unwrap();
    evaluate(&geom, &params, &PipelineOptions::default(), 0).unwrap()
}

fn witness_anchor() -> Outcome {
    let t = Instant::now();
    let p = default_point();
    let elapsed = t.elapsed();
    let (fast, time) = within_limit(elapsed, 1.0);
    let ok = (p.lambda - 1.36).abs() <= 0.05;
    Outcome {
        id: "1",
        title: "witness anchor",
        pass: ok && fast,
        detail: format!(
            "N=3 chain at {SPACING} Å, kappa={DIPOLE_KAPPA_GHZ_NM3}: lambda = {:.6}, target 1.36 ± 0.05, no calibration; {time}",
            p.lambda
        ),
        elapsed,
    }
}

fn bright_uniqueness() -> Outcome {
    let t = Instant::now();
    let p = default_point();
    let elapsed = t.elapsed();
    let (fast, time) = within_limit(elapsed, 1.0);
    Outcome {
        id: "2",
        title: "bright-state uniqueness",
        pass: p.bright_manifolds == 1 && fast,
        detail: format!(
            "{} excited manifolds with A > {BRIGHT_COUNT_THRESHOLD:e}, required exactly 1; brightest A = {:.6} in manifold {}; {time}",
            p.bright_manifolds, p.amplitude, p.manifold
        ),
        elapsed,
    }
}

fn square_root_law(dir: &Path) -> Outcome {
    let t = Instant::now();
    let cfg = ScanConfig::default();
    let rows: Vec<DistanceRecord> = through_csv(dir, "distance.csv", &run_distance_scan(&cfg).unwrap());
    let ok_rows: Vec<&DistanceRecord> = rows.iter().filter(|r| r.status == STATUS_OK).collect();
    let lambdas: Vec<f64> = ok_rows.iter().map(|r| r.lambda).collect();
    let amps: Vec<f64> = ok_rows.iter().map(|r| r.amplitude).collect();
    let fit = fit_power_law(&lambdas, &amps).unwrap();
    let elapsed = t.elapsed();
    let (fast, time) = within_limit(elapsed, 30.0);
    Outcome {
        id: "3",
        title: "square-root law",
        pass: (fit.b - 0.5).abs() <= 0.1 && ok_rows.len() == rows.len() && fast,
        detail: format!(
            "A = a·lambda^b over {} points, r = {}..{} Å: a = {:.4}, b = {:.4}, target b = 0.5 ± 0.1; {time}",
            ok_rows.len(),
            cfg.distance.r_min,
            cfg.distance.r_max,
            fit.a,
            fit.b
        ),
        elapsed,
    }
}

fn non_interacting_flatness(dir: &Path) -> Outcome {
    let t = Instant::now();
    let mut cfg = ScanConfig::default();
    cfg.size.n_min = 1;
    cfg.size.n_max = 9;
    let rows: Vec<SizeRecord> = through_csv(dir, "size_free.csv", &run_size_scan(&cfg, false).unwrap());
    let worst = rows
        .iter()
        .map(|r| (r.amplitude - 1.0).abs().max((r.lambda - 1.0).abs()))
        .fold(0.0, f64::max);
    let all_ok = rows.len() == 9 && rows.iter().all(|r| r.status == STATUS_OK && !r.interacting);
    let elapsed = t.elapsed();
    let (fast, time) = within_limit(elapsed, 300.0);
    Outcome {
        id: "4",
        title: "non-interacting flatness",
        pass: all_ok && worst <= 1e-6 && fast,
        detail: format!("kappa = 0, N = 1..9: max |A − 1|, |lambda − 1| = {worst:.2e}, tolerance 1e-6; {time}"),
        elapsed,
    }
}

fn strictly_increasing(xs: &[f64]) -> bool {
    xs.windows(2).all(|w| w[1] > w[0])
}

fn interacting_scaling(dir: &Path) -> Outcome {
    let t = Instant::now();
    let mut cfg = ScanConfig {
        spacing: SPACING,
        ..ScanConfig::default()
    };
    cfg.size.n_min = 2;
    cfg.size.n_max = 9;
    let rows: Vec<SizeRecord> = through_csv(dir, "size.csv", &run_size_scan(&cfg, true).unwrap());
    let ns: Vec<f64> = rows.iter().map(|r| r.n as f64).collect();
    let amps: Vec<f64> = rows.iter().map(|r| r.amplitude).collect();
    let lambdas: Vec<f64> = rows.iter().map(|r| r.lambda).collect();
    let monotone = strictly_increasing(&amps) && strictly_increasing(&lambdas);
    let fit = fit_power_law(&ns, &amps).unwrap();
    let all_ok = rows.len() == 8 && rows.iter().all(|r| r.status == STATUS_OK);
    let elapsed = t.elapsed();
    let (fast, time) = within_limit(elapsed, 900.0);
    let in_band = (0.35..=0.65).contains(&fit.b);
    Outcome {
        id: "5",
        title: "interacting scaling",
        pass: all_ok && monotone && in_band && fast,
        detail: format!(
            "N = 2..9: A and lambda strictly increasing = {monotone}; A = a·N^b gives b = {:.4}, required [0.35, 0.65]; A(9) = {:.4}, lambda(9) = {:.4}; {time}",
            fit.b,
            amps.last().unwrap(),
            lambdas.last().unwrap()
        ),
        elapsed,
    }
}

fn plateau_2d(dir: &Path) -> Outcome {
    let t = Instant::now();
    let cfg = ScanConfig::default();
    let reference = default_point();
    let zy: Vec<Grid2dRecord> = through_csv(dir, "grid2d_ZY.csv", &run_grid2d_scan(&cfg, GridPlane::Zy).unwrap());
    let xy: Vec<Grid2dRecord> = through_csv(dir, "grid2d_XY.csv", &run_grid2d_scan(&cfg, GridPlane::Xy).unwrap());
    let six = zy.iter().find(|r| r.n == 6).expect("ZY N = 6 row");
    let da = (six.amplitude - reference.amplitude).abs() / reference.amplitude;
    let dl = (six.lambda - reference.lambda).abs() / reference.lambda;
    let plateau = da <= 0.10 && dl <= 0.10;
    let above_one = zy
        .iter()
        .chain(&xy)
        .all(|r| r.status == STATUS_OK && r.lambda > 1.0 && r.amplitude > 1.0);
    let elapsed = t.elapsed();
    Outcome {
        id: "6",
        title: "2D plateau",
        pass: plateau && above_one,
        detail: format!(
            "ZY N=6 (A, lambda) = ({:.4}, {:.4}) vs 1D N=3 ({:.4}, {:.4}): deviations {:.1}%, {:.1}%, tolerance 10%; \
             all {} ZY/XY points with A > 1 and lambda > 1 = {above_one}; {:.2} s",
            six.amplitude,
            six.lambda,
            reference.amplitude,
            reference.lambda,
            100.0 * da,
            100.0 * dl,
            zy.len() + xy.len(),
            elapsed.as_secs_f64()
        ),
        elapsed,
    }
}

fn noise_cell(dir: &Path, name: &str, sigma_d: f64, sigma_r: f64) -> NoiseRecord {
    let cfg = ScanConfig {
        reps: 100,
        noise: NoiseScan {
            n: 3,
            sigma_d: Some(vec![sigma_d]),
            sigma_r: Some(vec![sigma_r]),
            ..NoiseScan::default()
        },
        ..ScanConfig::default()
    };
    let rows: Vec<NoiseRecord> = through_csv(dir, name, &run_noise_map(&cfg).unwrap());
    rows.into_iter().next().unwrap()
}

fn noise_boundary(dir: &Path) -> Outcome {
    let t = Instant::now();
    let d0 = ScanConfig::default().d0;
    let positional = noise_cell(dir, "noise_r.csv", 0.0, 2.0);
    let splitting = noise_cell(dir, "noise_d.csv", 1.5 * d0, 0.0);
    let quench = (positional.mean_lambda - 1.0).abs() <= 0.1;
    let survives = splitting.mean_lambda > 1.0;
    let elapsed = t.elapsed();
    let (fast, time) = within_limit(elapsed, 120.0);
    Outcome {
        id: "7",
        title: "noise quench boundary",
        pass: quench && survives && fast && positional.status == STATUS_OK && splitting.status == STATUS_OK,
        detail: format!(
            "N=3, 100 reps: sigma_R = 2.0 Å gives mean lambda = {:.4} ± {:.4} (s.e.), required 1.0 ± 0.1 [{}]; \
             sigma_D = {:.3} GHz gives mean lambda = {:.4} ± {:.4}, required > 1.0 [{}]; {time}",
            positional.mean_lambda,
            positional.std_lambda / 10.0,
            if quench { "pass" } else { "fail" },
            1.5 * d0,
            splitting.mean_lambda,
            splitting.std_lambda / 10.0,
            if survives { "pass" } else { "fail" },
        ),
        elapsed,
    }
}

fn property_suite() -> Outcome {
    let t = Instant::now();
    let mut notes = Vec::new();
    let mut pass = true;

    // Random states: PSD and the N/2 bound.
    for n in 1..=4 {
        let mut r = rng(1000 + n as u64);
        let (mut min_eig, mut max_lambda) = (f64::INFINITY, 0.0f64);
        for _ in 0..200 {
            let w = witness_of_state(&random_state(n, &mut r), n).unwrap();
            min_eig = min_eig.min(w.spectrum[0]);
            max_lambda = max_lambda.max(w.lambda);
        }
        let bound = n as f64 / 2.0;
        let ok = min_eig >= -PSD_TOL && max_lambda <= bound + 1e-8;
        pass &= ok;
        notes.push(format!(
            "N={n}: min eig {min_eig:.1e}, max lambda {max_lambda:.4} vs N/2 = {bound} [{}]",
            if ok { "pass" } else { "fail" }
        ));
    }

    // Uncoupled eigenstates, one product basis per degenerate manifold.
    let mut worst = 0.0f64;
    for n in 1..=4 {
        let h = total_h(&chain_y(n, SPACING).unwrap(), 0.0).unwrap().to_dense().unwrap();
        let eig = eigh_dense(&h).unwrap();
        for range in &eig.manifolds {
            for v in canonical_basis(&eig.vectors[range.clone()], n).unwrap() {
                worst = worst.max(witness_of_state(&v, n).unwrap().lambda);
            }
        }
    }
    let ok = worst <= 1.0 + 1e-8;
    pass &= ok;
    notes.push(format!(
        "kappa=0 eigenstates: max lambda {worst:.10} [{}]",
        if ok { "pass" } else { "fail" }
    ));

    // Statevector RDM against dense operator products.
    let mut rdm_diff = 0.0f64;
    for n in 1..=4 {
        let mut r = rng(2000 + n as u64);
        for _ in 0..2 {
            let psi = random_state(n, &mut r);
            rdm_diff = rdm_diff.max(ph_rdm(&psi, n).unwrap().matrix.max_abs_diff(&dense_ph_rdm(&psi, n)));
        }
    }
    let ok = rdm_diff <= 1e-10;
    pass &= ok;
    notes.push(format!(
        "RDM vs dense oracle: {rdm_diff:.1e} [{}]",
        if ok { "pass" } else { "fail" }
    ));

    // Iterative against dense eigenvalues.
    let mut eig_diff = 0.0f64;
    for n in 1..=5 {
        let op = total_site_operator(&chain_y(n, SPACING).unwrap(), DIPOLE_KAPPA_GHZ_NM3).unwrap();
        let dense = eigh_dense(&op.to_dense().unwrap()).unwrap();
        let k = (2 * n + 2).min(op.hilbert_dim());
        let lz = eig_lowest_k(&op, k, 7).unwrap();
        for i in 0..k {
            eig_diff = eig_diff.max((lz.values[i] - dense.values[i]).abs());
        }
    }
    let ok = eig_diff <= 1e-8;
    pass &= ok;
    notes.push(format!(
        "Lanczos vs dense, N<=5: {eig_diff:.1e} [{}]",
        if ok { "pass" } else { "fail" }
    ));

    // Identical seeds give byte-identical tables.
    let cfg = ScanConfig {
        reps: 8,
        seed: 31,
        noise: NoiseScan {
            sigma_d: Some(vec![0.0, 1.0]),
            sigma_r: Some(vec![0.0, 1.0]),
            ..NoiseScan::default()
        },
        ..ScanConfig::default()
    };
    let a = csv_bytes(&run_noise_map(&cfg).unwrap()).unwrap();
    let b = csv_bytes(&run_noise_map(&cfg).unwrap()).unwrap();
    let d1 = csv_bytes(&run_distance_scan(&ScanConfig::default()).unwrap()).unwrap();
    let d2 = csv_bytes(&run_distance_scan(&ScanConfig::default()).unwrap()).unwrap();
    let ok = a == b && d1 == d2;
    pass &= ok;
    notes.push(format!("byte-identical CSVs [{}]", if ok { "pass" } else { "fail" }));

    Outcome {
        id: "8",
        title: "property suite",
        pass,
        detail: notes.join("; "),
        elapsed: t.elapsed(),
    }
}

fn main() {
    let dir = tempfile::tempdir().expect("temporary directory");
    let checks: Vec<Box<dyn Fn() -> Outcome>> = vec![
        Box::new(witness_anchor),
        Box::new(bright_uniqueness),
        Box::new(|| square_root_law(dir.path())),
        Box::new(|| non_interacting_flatness(dir.path())),
        Box::new(|| interacting_scaling(dir.path())),
        Box::new(|| plateau_2d(dir.path())),
        Box::new(|| noise_boundary(dir.path())),
        Box::new(property_suite),
    ];
    let mut failed = 0;
    for check in &checks {
        let o = check();
        if !o.pass {
            failed += 1;
        }
        println!(
            "criterion {} {:<26} {}  ({:.2} s) {}",
            o.id,
            o.title,
            if o.pass { "PASS" } else { "FAIL" },
            o.elapsed.as_secs_f64(),
            o.detail
        );
    }
    println!("acceptance: {} passed, {failed} failed", checks.len() - failed);
    if failed > 0 {
        std::process::exit(1);
    }
}
