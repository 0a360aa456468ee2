use crate::error::{Error, Result};

const MAX_ITERATIONS: usize = 200;
const STEP_TOL: f64 = 1e-10;

/// `y ≈ a · x^b`
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct PowerFit {
    pub a: f64,
    pub b: f64,
    /// Euclidean norm of `y − a x^b` at the solution.
    pub residual: f64,
    pub iterations: usize,
}

fn residual_norm(xs: &[f64], ys: &[f64], a: f64, b: f64) -> f64 {
    xs.iter()
        .zip(ys)
        .map(|(x, y)| {
            let r = y - a * x.powf(b);
            r * r
        })
        .sum::<f64>()
        .sqrt()
}

/// Least-squares fit of `y = a x^b` by Levenberg-damped Gauss-Newton,
/// started from the log-log regression line.
pub fn fit_power_law(xs: &[f64], ys: &[f64]) -> Result<PowerFit> {
    if xs.len() != ys.len() {
        return Err(Error::validation(format!(
            "{} x values but {} y values",
            xs.len(),
            ys.len()
        )));
    }
    if xs.len() < 3 {
        return Err(Error::validation(format!(
            "power-law fit needs at least 3 points, got {}",
            xs.len()
        )));
    }
    if xs.iter().chain(ys).any(|v| !v.is_finite()) {
        return Err(Error::validation("power-law fit needs finite data"));
    }
    if xs.iter().any(|&x| x <= 0.0) {
        return Err(Error::validation("power-law fit needs x > 0"));
    }
    let n = xs.len() as f64;
    let lx: Vec<f64> = xs.iter().map(|x| x.ln()).collect();
    let mx = lx.iter().sum::<f64>() / n;
    let sxx: f64 = lx.iter().map(|l| (l - mx) * (l - mx)).sum();
    if sxx <= 1e-12 * (1.0 + mx * mx) * n {
        return Err(Error::validation("power-law fit needs at least two distinct x values"));
    }

    // Start from the log-log line when every y is positive.
    let (mut a, mut b) = if ys.iter().all(|&y| y > 0.0) {
        let ly: Vec<f64> = ys.iter().map(|y| y.ln()).collect();
        let my = ly.iter().sum::<f64>() / n;
        let sxy: f64 = lx.iter().zip(&ly).map(|(l, m)| (l - mx) * (m - my)).sum();
        let b0 = sxy / sxx;
        ((my - b0 * mx).exp(), b0)
    } else {
        (ys.iter().sum::<f64>() / n, 0.0)
    };

    let mut cost = residual_norm(xs, ys, a, b).powi(2);
    let mut mu = 1e-3;
    let mut iterations = 0;
    while iterations < MAX_ITERATIONS {
        iterations += 1;
        // Normal equations J^T J and J^T r for parameters (a, b).
        let (mut jaa, mut jab, mut jbb, mut ga, mut gb) = (0.0, 0.0, 0.0, 0.0, 0.0);
        for ((x, y), l) in xs.iter().zip(ys).zip(&lx) {
            let p = x.powf(b);
            let da = p;
            let db = a * p * l;
            let r = y - a * p;
            jaa += da * da;
            jab += da * db;
            jbb += db * db;
            ga += da * r;
            gb += db * r;
        }
        let mut accepted = None;
        for _ in 0..50 {
            let (maa, mbb) = (jaa * (1.0 + mu), jbb * (1.0 + mu));
            let det = maa * mbb - jab * jab;
            if det.abs() < f64::MIN_POSITIVE {
                mu *= 10.0;
                continue;
            }
            let sa = (mbb * ga - jab * gb) / det;
            let sb = (maa * gb - jab * ga) / det;
            let trial = residual_norm(xs, ys, a + sa, b + sb).powi(2);
            if trial.is_finite() && trial <= cost {
                accepted = Some((sa, sb, trial));
                break;
            }
            mu *= 10.0;
        }
        let Some((sa, sb, trial)) = accepted else {
            break;
        };
        a += sa;
        b += sb;
        cost = trial;
        mu = (mu / 10.0).max(1e-12);
        if (sa * sa + sb * sb).sqrt() < STEP_TOL {
            break;
        }
    }
    if !a.is_finite() || !b.is_finite() {
        return Err(Error::NoConvergence {
            solver: "power-law fit",
            iterations,
        });
    }
    Ok(PowerFit {
        a,
        b,
        residual: cost.sqrt(),
        iterations,
    })
}
