//! Finite-size threshold fits and curve crossings.

use super::SimError;
use serde::{Deserialize, Serialize};

/// Logical error rates of one code distance as `(p_phys, rate)` pairs.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Dataset {
    pub distance: usize,
    pub points: Vec<(f64, f64)>,
}

/// Fit of `R = A + B·x + C·x²` with `x = (p − p_th)·d^{1/ν}`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ThresholdFit {
    pub p_th: f64,
    pub nu: f64,
    pub a: f64,
    pub b: f64,
    pub c: f64,
    /// Sum of squared residuals.
    pub residual: f64,
    pub distances: Vec<usize>,
    /// Set when fewer than three distances reach `dmin` and smaller ones were used.
    pub small_distance_caveat: bool,
}

impl ThresholdFit {
    /// Rescaled variable of a data point.
    pub fn collapse(&self, p: f64, d: usize) -> f64 {
        (p - self.p_th) * (d as f64).powf(1.0 / self.nu)
    }
}

/// Least squares for (A, B, C) at fixed (p_th, ν). `None` when the normal
/// equations are singular.
fn solve_abc(data: &[(f64, f64, f64)], p_th: f64, nu: f64) -> Option<([f64; 3], f64)> {
    let mut m = [[0.0f64; 4]; 3];
    for &(p, d, r) in data {
        let x = (p - p_th) * d.powf(1.0 / nu);
        let v = [1.0, x, x * x];
        for i in 0..3 {
            for j in 0..3 {
                m[i][j] += v[i] * v[j];
            }
            m[i][3] += v[i] * r;
        }
    }
    let scale = m[0][0].abs().max(m[1][1].abs()).max(m[2][2].abs());
    // Gaussian elimination with partial pivoting.
    for col in 0..3 {
        let piv = (col..3).max_by(|&a, &b| m[a][col].abs().total_cmp(&m[b][col].abs()))?;
        if m[piv][col].abs() <= 1e-12 * scale {
            return None;
        }
        m.swap(col, piv);
        for r in 0..3 {
            if r != col {
                let f = m[r][col] / m[col][col];
                for k in col..4 {
                    m[r][k] -= f * m[col][k];
                }
            }
        }
    }
    let abc = [m[0][3] / m[0][0], m[1][3] / m[1][1], m[2][3] / m[2][2]];
    let res = data
        .iter()
        .map(|&(p, d, r)| {
            let x = (p - p_th) * d.powf(1.0 / nu);
            let e = abc[0] + abc[1] * x + abc[2] * x * x - r;
            e * e
        })
        .sum();
    Some((abc, res))
}

/// Fits the threshold ansatz, using distances `≥ dmin` when at least three
/// qualify and otherwise all of them (flagging the caveat). `(p_th, ν)` are
/// found by a grid search over the sampled `p` range and `ν ∈ [0.3, 4]`,
/// followed by repeated zooming around the best cell.
pub fn fit_threshold(datasets: &[Dataset], dmin: usize) -> Result<ThresholdFit, SimError> {
    let large: Vec<&Dataset> = datasets.iter().filter(|d| d.distance >= dmin).collect();
    let (used, caveat) = if large.len() >= 3 { (large, false) } else { (datasets.iter().collect(), true) };
    if used.len() < 3 {
        return Err(SimError::InsufficientData(format!("{} distances, need 3", used.len())));
    }
    let data: Vec<(f64, f64, f64)> =
        used.iter().flat_map(|ds| ds.points.iter().map(move |&(p, r)| (p, ds.distance as f64, r))).collect();
    if data.len() < 4 {
        return Err(SimError::InsufficientData(format!("{} points", data.len())));
    }
    let rates = data.iter().map(|d| d.2);
    let spread = rates.clone().fold(f64::NEG_INFINITY, f64::max) - rates.fold(f64::INFINITY, f64::min);
    if spread <= 0.0 {
        return Err(SimError::Degenerate("all rates are equal, so B = C = 0".into()));
    }
    let (mut plo, mut phi) = data.iter().fold((f64::INFINITY, f64::NEG_INFINITY), |(a, b), d| (a.min(d.0), b.max(d.0)));
    let (mut nlo, mut nhi) = (0.3f64, 4.0f64);
    let steps = 48;
    let mut best: Option<(f64, f64, [f64; 3], f64)> = None;
    for _ in 0..40 {
        let (dp, dn) = ((phi - plo) / steps as f64, (nhi - nlo) / steps as f64);
        for i in 0..=steps {
            for j in 0..=steps {
                let (pt, nu) = (plo + dp * i as f64, nlo + dn * j as f64);
                if let Some((abc, res)) = solve_abc(&data, pt, nu) {
                    if best.as_ref().map_or(true, |b| res < b.3) {
                        best = Some((pt, nu, abc, res));
                    }
                }
            }
        }
        let Some((pt, nu, _, _)) = best else {
            return Err(SimError::Degenerate("normal equations are singular everywhere".into()));
        };
        plo = pt - 2.0 * dp;
        phi = pt + 2.0 * dp;
        nlo = (nu - 2.0 * dn).max(0.05);
        nhi = nu + 2.0 * dn;
        if dp < 1e-10 && dn < 1e-9 {
            break;
        }
    }
    let (p_th, nu, abc, residual) = best.expect("checked above");
    let scale = data.iter().map(|d| d.2.abs()).fold(0.0, f64::max).max(1e-300);
    if abc[1].abs() <= 1e-12 * scale && abc[2].abs() <= 1e-12 * scale {
        return Err(SimError::Degenerate("B = C = 0".into()));
    }
    let mut distances: Vec<usize> = used.iter().map(|d| d.distance).collect();
    distances.sort_unstable();
    Ok(ThresholdFit { p_th, nu, a: abc[0], b: abc[1], c: abc[2], residual, distances, small_distance_caveat: caveat })
}

/// First crossing of two curves sampled at common abscissae, by linear
/// interpolation of their difference.
pub fn crossing(a: &[(f64, f64)], b: &[(f64, f64)]) -> Option<f64> {
    let diffs: Vec<(f64, f64)> = a
        .iter()
        .filter_map(|&(p, ra)| b.iter().find(|q| (q.0 - p).abs() < 1e-12).map(|&(_, rb)| (p, ra - rb)))
        .collect();
    diffs.windows(2).find_map(|w| {
        let ((p0, d0), (p1, d1)) = (w[0], w[1]);
        if d0 == 0.0 {
            Some(p0)
        } else if d0 * d1 < 0.0 {
            Some(p0 + (p1 - p0) * d0 / (d0 - d1))
        } else {
            None
        }
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn synthetic(p_th: f64, nu: f64) -> Vec<Dataset> {
        [9usize, 11, 13, 15]
            .iter()
            .map(|&d| Dataset {
                distance: d,
                points: (0..9)
                    .map(|k| {
                        let p = 0.08 + 0.005 * k as f64;
                        let x = (p - p_th) * (d as f64).powf(1.0 / nu);
                        (p, 0.2 + 0.9 * x + 2.5 * x * x)
                    })
                    .collect(),
            })
            .collect()
    }

    #[test]
    fn recovers_synthetic_parameters() {
        let fit = fit_threshold(&synthetic(0.10, 1.5), 9).unwrap();
        assert!((fit.p_th - 0.10).abs() < 1e-3, "{fit:?}");
        assert!((fit.nu - 1.5).abs() < 1e-3, "{fit:?}");
        assert!(!fit.small_distance_caveat);
        assert!((fit.collapse(0.10, 9)).abs() < 1e-3);
    }

    #[test]
    fn small_distances_raise_the_caveat() {
        let mut data = synthetic(0.10, 1.5);
        for (d, ds) in data.iter_mut().zip([3, 5, 7, 9]) {
            d.distance = ds;
        }
        assert!(fit_threshold(&data, 9).unwrap().small_distance_caveat);
    }

    #[test]
    fn constant_data_is_degenerate() {
        let data: Vec<Dataset> = [3usize, 5, 7]
            .iter()
            .map(|&d| Dataset { distance: d, points: vec![(0.09, 0.1), (0.1, 0.1), (0.11, 0.1)] })
            .collect();
        assert!(matches!(fit_threshold(&data, 3), Err(SimError::Degenerate(_))));
    }

    #[test]
    fn crossing_of_two_lines() {
        let a = [(0.0, 0.0), (1.0, 1.0)];
        let b = [(0.0, 0.5), (1.0, 0.5)];
        assert!((crossing(&a, &b).unwrap() - 0.5).abs() < 1e-12);
        assert_eq!(crossing(&a, &a[..1]), None);
    }
}
