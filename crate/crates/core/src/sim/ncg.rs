//! Net coding gain arithmetic and waterfall extrapolation.
//!
//! The extrapolation fits `log10 BER(x) ≈ log10 Q(a·u(x) + b)` with
//! `u(x) = √(2·rate·10^(x/10))` by least squares in the log domain. For
//! uncoded BPSK `a = 1, b = 0`; a waterfall curve shows up as a large `a`.
//! The model is linear in `(a, b)` after mapping BERs through Q⁻¹, which
//! gives the starting point for a damped Gauss–Newton refinement.

use serde::Serialize;

use super::SweepResult;
use crate::error::{Error, Result};
use crate::math::{log10_q, q_inv};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum NcgMethod {
    Direct,
    Extrapolated,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct NcgEstimate {
    pub target_ber: f64,
    pub threshold_ebn0_db: f64,
    pub ncg_db: f64,
    pub method: NcgMethod,
}

/// Eb/N0 in dB that uncoded BPSK needs to reach `target_ber`:
/// `10·log10(Q⁻¹(p)² / 2)`.
pub fn uncoded_required_db(target_ber: f64) -> Result<f64> {
    if !(target_ber > 0.0 && target_ber < 0.5) {
        return Err(Error::Domain(format!(
            "target BER must lie in (0, 0.5), got {target_ber}"
        )));
    }
    let z = q_inv(target_ber)?;
    Ok(10.0 * (z * z / 2.0).log10())
}

pub fn ncg(threshold_ebn0_db: f64, target_ber: f64) -> Result<NcgEstimate> {
    Ok(NcgEstimate {
        target_ber,
        threshold_ebn0_db,
        ncg_db: uncoded_required_db(target_ber)? - threshold_ebn0_db,
        method: NcgMethod::Direct,
    })
}

/// A fitted waterfall model and where it crosses the target BER.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct Extrapolation {
    pub a: f64,
    pub b: f64,
    pub rate: f64,
    pub points_used: usize,
    /// Root-mean-square residual in decades.
    pub rms_residual: f64,
    pub estimate: NcgEstimate,
    /// Always true: the crossing lies outside the measured range.
    pub approximate: bool,
}

impl Extrapolation {
    /// Model BER at `ebn0_db`.
    pub fn predict(&self, ebn0_db: f64) -> f64 {
        10f64.powf(log10_q(self.a * snr_amplitude(self.rate, ebn0_db) + self.b))
    }
}

fn snr_amplitude(rate: f64, ebn0_db: f64) -> f64 {
    (2.0 * rate * 10f64.powf(ebn0_db / 10.0)).sqrt()
}

/// Fits the waterfall model to every point with a nonzero BER and returns the
/// Eb/N0 at which the fit reaches `target_ber`.
pub fn extrapolate_threshold(result: &SweepResult, target_ber: f64) -> Result<Extrapolation> {
    let pts: Vec<(f64, f64)> = result
        .points
        .iter()
        .filter(|p| p.output_ber > 0.0 && p.output_ber < 0.5)
        .map(|p| (p.ebn0_db, p.output_ber))
        .collect();
    fit_waterfall(&pts, result.rate, target_ber)
}

/// [`extrapolate_threshold`] on bare `(Eb/N0 dB, BER)` pairs.
pub fn fit_waterfall(points: &[(f64, f64)], rate: f64, target_ber: f64) -> Result<Extrapolation> {
    let target_z = q_inv(target_ber)
        .map_err(|_| Error::Fit(format!("target BER {target_ber} out of range")))?;
    let usable: Vec<(f64, f64)> = points
        .iter()
        .copied()
        .filter(|&(x, ber)| x.is_finite() && ber > 0.0 && ber < 0.5)
        .collect();
    if usable.len() < 3 {
        return Err(Error::Fit(format!(
            "need at least 3 points with 0 < BER < 0.5, got {}",
            usable.len()
        )));
    }
    let u: Vec<f64> = usable
        .iter()
        .map(|&(x, _)| snr_amplitude(rate, x))
        .collect();
    let y: Vec<f64> = usable.iter().map(|&(_, ber)| ber.log10()).collect();

    // Linear least squares of Q⁻¹(BER) on u.
    let z: Vec<f64> = usable
        .iter()
        .map(|&(_, ber)| q_inv(ber))
        .collect::<Result<_>>()?;
    let (mut a, mut b) = linear_fit(&u, &z)?;

    let cost = |a: f64, b: f64| -> f64 {
        u.iter()
            .zip(&y)
            .map(|(&ui, &yi)| (log10_q(a * ui + b) - yi).powi(2))
            .sum()
    };
    let mut current = cost(a, b);
    let mut lambda = 1e-3;
    for _ in 0..200 {
        // Normal equations of the linearized residuals.
        let (mut jtj, mut jtr) = ([[0.0f64; 2]; 2], [0.0f64; 2]);
        for (&ui, &yi) in u.iter().zip(&y) {
            let zi = a * ui + b;
            let h = 1e-6 * zi.abs().max(1.0);
            let slope = (log10_q(zi + h) - log10_q(zi - h)) / (2.0 * h);
            let r = log10_q(zi) - yi;
            let jac = [slope * ui, slope];
            for i in 0..2 {
                jtr[i] += jac[i] * r;
                for j in 0..2 {
                    jtj[i][j] += jac[i] * jac[j];
                }
            }
        }
        let mut improved = false;
        while lambda < 1e12 {
            let m = [
                [jtj[0][0] * (1.0 + lambda), jtj[0][1]],
                [jtj[1][0], jtj[1][1] * (1.0 + lambda)],
            ];
            let det = m[0][0] * m[1][1] - m[0][1] * m[1][0];
            if det.abs() < f64::MIN_POSITIVE {
                lambda *= 10.0;
                continue;
            }
            let da = -(m[1][1] * jtr[0] - m[0][1] * jtr[1]) / det;
            let db = -(m[0][0] * jtr[1] - m[1][0] * jtr[0]) / det;
            let next = cost(a + da, b + db);
            if next.is_finite() && next <= current {
                let gain = current - next;
                a += da;
                b += db;
                current = next;
                lambda = (lambda / 10.0).max(1e-12);
                improved = gain > 1e-14 * current.max(1e-30);
                break;
            }
            lambda *= 10.0;
        }
        if !improved {
            break;
        }
    }

    if !a.is_finite() || !b.is_finite() || a <= 0.0 {
        return Err(Error::Fit(format!(
            "fitted curve is not decreasing in Eb/N0 (a = {a}, b = {b})"
        )));
    }
    let u_target = (target_z - b) / a;
    if u_target <= 0.0 {
        return Err(Error::Fit(format!(
            "fit never reaches BER {target_ber} at positive SNR"
        )));
    }
    let threshold = 10.0 * (u_target * u_target / (2.0 * rate)).log10();
    let ncg_db =
        uncoded_required_db(target_ber).map_err(|e| Error::Fit(e.to_string()))? - threshold;
    Ok(Extrapolation {
        a,
        b,
        rate,
        points_used: usable.len(),
        rms_residual: (current / usable.len() as f64).sqrt(),
        estimate: NcgEstimate {
            target_ber,
            threshold_ebn0_db: threshold,
            ncg_db,
            method: NcgMethod::Extrapolated,
        },
        approximate: true,
    })
}

fn linear_fit(x: &[f64], y: &[f64]) -> Result<(f64, f64)> {
    let n = x.len() as f64;
    let mx = x.iter().sum::<f64>() / n;
    let my = y.iter().sum::<f64>() / n;
    let sxx: f64 = x.iter().map(|v| (v - mx).powi(2)).sum();
    let sxy: f64 = x.iter().zip(y).map(|(a, b)| (a - mx) * (b - my)).sum();
    if sxx <= 0.0 {
        return Err(Error::Fit("all points share one Eb/N0".into()));
    }
    let slope = sxy / sxx;
    Ok((slope, my - slope * mx))
}

/// Eb/N0 where the measured curve crosses `target_ber`, interpolating
/// log10 BER linearly between the two bracketing points. `None` when the
/// measurements do not bracket the target.
pub fn direct_threshold(result: &SweepResult, target_ber: f64) -> Option<f64> {
    let mut pts: Vec<(f64, f64)> = result
        .points
        .iter()
        .map(|p| (p.ebn0_db, p.output_ber))
        .collect();
    pts.sort_by(|a, b| a.0.total_cmp(&b.0));
    pts.windows(2).find_map(|w| {
        let ((x0, y0), (x1, y1)) = (w[0], w[1]);
        if y0 >= target_ber && y1 < target_ber && y1 > 0.0 {
            let (l0, l1, lt) = (y0.log10(), y1.log10(), target_ber.log10());
            Some(x0 + (x1 - x0) * (l0 - lt) / (l0 - l1))
        } else {
            None
        }
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::math::q;
    use crate::sim::PointResult;

    const RATE: f64 = 53361.0 / 65025.0;

    fn point(ebn0_db: f64, ber: f64) -> PointResult {
        PointResult {
            ebn0_db,
            blocks: 1,
            info_bits: 1,
            bit_errors: 0,
            block_errors: 0,
            output_ber: ber,
            output_bler: 0.0,
            channel_ber: 0.0,
            mean_iterations: 0.0,
            wall_time_s: 0.0,
            channel_bit_errors: 0,
        }
    }

    #[test]
    fn uncoded_requirement() {
        // 40-digit oracle: 10·log10(Q⁻¹(1e-15)²/2) = 14.98758167…
        assert!((uncoded_required_db(1e-15).unwrap() - 14.987_581_674).abs() < 1e-6);
        assert!(uncoded_required_db(q(2f64.sqrt())).unwrap().abs() < 1e-9);
        let mut prev = f64::INFINITY;
        for p in [1e-15, 1e-10, 1e-5, 1e-3, 0.1, 0.4] {
            let v = uncoded_required_db(p).unwrap();
            assert!(v < prev);
            prev = v;
        }
        for bad in [0.0, 0.5, 0.7, -1.0, f64::NAN] {
            assert!(uncoded_required_db(bad).is_err());
        }
    }

    #[test]
    fn ncg_examples() {
        assert!((ncg(4.6, 1e-15).unwrap().ncg_db - 10.39).abs() < 0.01);
        assert!((ncg(4.9, 1e-15).unwrap().ncg_db - 10.09).abs() < 0.01);
        let at_uncoded = uncoded_required_db(1e-15).unwrap();
        assert!(ncg(at_uncoded, 1e-15).unwrap().ncg_db.abs() < 1e-12);
        assert!(ncg(4.6, 0.0).is_err());
    }

    #[test]
    fn recovers_synthetic_waterfall() {
        for &(a, b) in &[(8.0, -13.0), (1.0, 0.0), (15.0, -29.0)] {
            let xs = [4.3, 4.35, 4.4, 4.45, 4.5];
            let pts: Vec<(f64, f64)> = xs
                .iter()
                .map(|&x| (x, q(a * snr_amplitude(RATE, x) + b)))
                .filter(|&(_, ber)| ber > 0.0 && ber < 0.5)
                .collect();
            let target = 1e-15;
            let exact = {
                let u = (q_inv(target).unwrap() - b) / a;
                10.0 * (u * u / (2.0 * RATE)).log10()
            };
            let fit = fit_waterfall(&pts, RATE, target).unwrap();
            assert!(
                (fit.estimate.threshold_ebn0_db - exact).abs() < 0.01,
                "a={a} b={b}: {} vs {exact}",
                fit.estimate.threshold_ebn0_db
            );
            assert_eq!(fit.estimate.method, NcgMethod::Extrapolated);
            assert!(fit.approximate);
        }
    }

    #[test]
    fn refuses_degenerate_input() {
        let zeros = SweepResult {
            rate: RATE,
            points: vec![point(4.0, 0.0), point(4.1, 0.0), point(4.2, 0.0)],
        };
        assert!(matches!(
            extrapolate_threshold(&zeros, 1e-15),
            Err(Error::Fit(_))
        ));
        let two = SweepResult {
            rate: RATE,
            points: vec![point(4.0, 1e-3), point(4.1, 1e-4)],
        };
        assert!(extrapolate_threshold(&two, 1e-15).is_err());
        let rising = SweepResult {
            rate: RATE,
            points: vec![point(4.0, 1e-5), point(4.1, 1e-4), point(4.2, 1e-3)],
        };
        assert!(extrapolate_threshold(&rising, 1e-15).is_err());
    }

    #[test]
    fn direct_crossing_interpolates_in_log_domain() {
        let r = SweepResult {
            rate: RATE,
            points: vec![point(4.6, 1e-3), point(4.4, 1e-1), point(4.8, 1e-7)],
        };
        let x = direct_threshold(&r, 1e-5).unwrap();
        assert!((x - 4.7).abs() < 1e-12);
        assert_eq!(direct_threshold(&r, 1e-9), None);
    }
}
