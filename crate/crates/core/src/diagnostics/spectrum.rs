use rustfft::num_complex::Complex;
use rustfft::FftPlanner;
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum SpectrumError {
    #[error("series has {0} samples, need at least 16")]
    TooShort(usize),
    #[error("sample interval must be positive, got {0}")]
    BadInterval(f64),
    #[error("non-finite sample at index {0}")]
    NonFinite(usize),
}

/// One-sided periodogram of a uniformly sampled series.
#[derive(Debug, Clone, PartialEq)]
pub struct Spectrum {
    /// Bin centres `k / (N Δt)` for `k = 0..=N/2`.
    pub frequencies: Vec<f64>,
    pub power: Vec<f64>,
    /// Peak frequencies, ascending.
    pub peaks: Vec<f64>,
}

impl Spectrum {
    pub fn bin_width(&self) -> f64 {
        self.frequencies.get(1).copied().unwrap_or(0.0)
    }
}

/// Minimum ratio of a peak to its surrounding dips (3 dB).
const DIP_RATIO: f64 = 2.0;

/// Periodogram `|X_k|² / N` of the mean-removed series.
///
/// A bin is a peak when it is the largest within `±neighborhood` bins and its
/// power is at least `prominence` times the median power. It must also rise
/// 3 dB above the higher of its two flanking minima (the lowest bin between
/// the peak and the next higher bin on each side), which rejects leakage
/// shoulders. The DC bin is never a peak.
pub fn spectrum(
    series: &[f64],
    sample_dt: f64,
    prominence: f64,
    neighborhood: usize,
) -> Result<Spectrum, SpectrumError> {
    let n = series.len();
    if n < 16 {
        return Err(SpectrumError::TooShort(n));
    }
    if !(sample_dt > 0.0 && sample_dt.is_finite()) {
        return Err(SpectrumError::BadInterval(sample_dt));
    }
    if let Some(i) = series.iter().position(|x| !x.is_finite()) {
        return Err(SpectrumError::NonFinite(i));
    }
    let mean = series.iter().sum::<f64>() / n as f64;
    let mut buf: Vec<Complex<f64>> = series.iter().map(|&x| Complex::new(x - mean, 0.0)).collect();
    FftPlanner::new().plan_fft_forward(n).process(&mut buf);
    let half = n / 2;
    let power: Vec<f64> = buf[..=half].iter().map(|c| c.norm_sqr() / n as f64).collect();
    let frequencies: Vec<f64> = (0..=half).map(|k| k as f64 / (n as f64 * sample_dt)).collect();

    let mut sorted = power.clone();
    sorted.sort_by(f64::total_cmp);
    let median = sorted[sorted.len() / 2];
    let threshold = prominence * median;
    let w = neighborhood.max(1);
    let peaks = (1..=half)
        .filter(|&k| {
            let lo = k.saturating_sub(w).max(1);
            let hi = (k + w).min(half);
            power[k] >= threshold
                && power[k] > 0.0
                && (lo..=hi).all(|j| j == k || power[j] < power[k] || (power[j] == power[k] && j > k))
                && power[k] >= DIP_RATIO * flank_base(&power[1..], k - 1)
        })
        .map(|k| frequencies[k])
        .collect();
    Ok(Spectrum {
        frequencies,
        power,
        peaks,
    })
}

/// Higher of the minima between bin `k` and the nearest higher bin on each side.
fn flank_base(power: &[f64], k: usize) -> f64 {
    let p = power[k];
    let mut left = p;
    for &x in power[..k].iter().rev() {
        if x > p {
            break;
        }
        left = left.min(x);
    }
    let mut right = p;
    for &x in &power[k + 1..] {
        if x > p {
            break;
        }
        right = right.min(x);
    }
    left.max(right)
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    #[test]
    fn single_sinusoid() {
        let dt = 0.05;
        let f0 = 1.3;
        let x: Vec<f64> = (0..1024).map(|i| (2.0 * PI * f0 * i as f64 * dt).sin()).collect();
        let s = spectrum(&x, dt, 10.0, 3).unwrap();
        assert_eq!(s.peaks.len(), 1);
        assert!((s.peaks[0] - f0).abs() <= s.bin_width());
    }

    #[test]
    fn two_sinusoids() {
        let dt = 0.05;
        let x: Vec<f64> = (0..1024)
            .map(|i| {
                let t = i as f64 * dt;
                (2.0 * PI * 1.0 * t).sin() + 0.5 * (2.0 * PI * 3.0 * t).cos()
            })
            .collect();
        let s = spectrum(&x, dt, 10.0, 3).unwrap();
        assert_eq!(s.peaks.len(), 2);
        assert!((s.peaks[0] - 1.0).abs() <= s.bin_width());
        assert!((s.peaks[1] - 3.0).abs() <= s.bin_width());
    }

    #[test]
    fn flat_hump_is_not_a_peak() {
        // the hump at 2 only dips to 1.8 before the strong bin
        let power = [1.0, 2.0, 2.5, 2.0, 1.8, 50.0, 1.0];
        assert_eq!(flank_base(&power, 2), 1.8);
        assert!(power[2] < DIP_RATIO * flank_base(&power, 2));
        assert_eq!(flank_base(&power, 5), 1.0);
    }

    #[test]
    fn short_series_rejected() {
        assert_eq!(spectrum(&[0.0; 15], 1.0, 10.0, 1), Err(SpectrumError::TooShort(15)));
    }
}
