//! Gain and delay-dispersion functionals of tap-form CIRs, and Monte
//! Carlo summaries.
//!
//! Over a comb of Dirac taps the DC gain integral is the plain sum of tap
//! weights, and the squared-response integrals behind the delay moments
//! become sums weighted by the squared tap weights.

use alloc::vec::Vec;

use crate::cir::PathTap;
use crate::error::{Error, Result};

/// Zero-frequency gain: sum of tap amplitudes.
pub fn dc_gain(taps: &[PathTap]) -> f64 {
    taps.iter().map(|t| t.amplitude).sum()
}

/// Channel gain in both sign conventions.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OpticalGain {
    /// `-10 log10 H(0)`: positive, larger means more loss.
    pub loss_db: f64,
    /// `10 log10 H(0)`: negative for a lossy channel.
    pub gain_db: f64,
}

pub fn optical_gain_db(h0: f64) -> Result<OpticalGain> {
    if !(h0 > 0.0) {
        return Err(Error::NoReceivedPower);
    }
    let db = 10.0 * libm::log10(h0);
    Ok(OpticalGain { loss_db: -db, gain_db: db })
}

/// Power-weighted delay mean and variance, accumulated incrementally
/// about the first tap delay.
fn delay_moments(taps: &[PathTap]) -> Result<(f64, f64)> {
    let origin = taps.first().map_or(0.0, |t| t.delay);
    let (mut weight, mut mean, mut scatter) = (0.0, 0.0, 0.0);
    for t in taps {
        let w = t.amplitude * t.amplitude;
        if w <= 0.0 {
            continue;
        }
        let next = weight + w;
        let delta = (t.delay - origin) - mean;
        let step = delta * w / next;
        mean += step;
        scatter += weight * delta * step;
        weight = next;
    }
    if weight > 0.0 {
        Ok((origin + mean, (scatter / weight).max(0.0)))
    } else {
        Err(Error::NoReceivedPower)
    }
}

/// Mean excess delay, seconds.
pub fn mean_excess_delay(taps: &[PathTap]) -> Result<f64> {
    delay_moments(taps).map(|(m, _)| m)
}

/// RMS delay spread, seconds.
pub fn rms_delay_spread(taps: &[PathTap]) -> Result<f64> {
    delay_moments(taps).map(|(_, v)| libm::sqrt(v))
}

/// Upper bound on the ISI-free bit rate, `1 / (10 D_rms)`.
pub fn max_bit_rate(rms_delay_spread: f64) -> Option<f64> {
    (rms_delay_spread > 0.0).then(|| 1.0 / (10.0 * rms_delay_spread))
}

#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct ChannelStats {
    pub dc_gain: f64,
    pub loss_db: f64,
    pub gain_db: f64,
    pub mean_excess_delay: f64,
    pub rms_delay_spread: f64,
    /// bit/s; `None` for a dispersion-free channel.
    pub max_bit_rate: Option<f64>,
}

impl ChannelStats {
    pub fn of(taps: &[PathTap]) -> Result<Self> {
        let dc_gain = dc_gain(taps);
        let gain = optical_gain_db(dc_gain)?;
        let (mean, var) = delay_moments(taps)?;
        let rms = libm::sqrt(var);
        Ok(Self {
            dc_gain,
            loss_db: gain.loss_db,
            gain_db: gain.gain_db,
            mean_excess_delay: mean,
            rms_delay_spread: rms,
            max_bit_rate: max_bit_rate(rms),
        })
    }
}

#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct Histogram {
    /// `counts.len() + 1` ascending bin edges.
    pub edges: Vec<f64>,
    pub counts: Vec<u64>,
}

/// Moment summary of one scalar sample.
#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct SampleSummary {
    pub count: usize,
    pub mean: f64,
    /// Unbiased (n - 1) standard deviation.
    pub std: f64,
    /// `m3 / m2^1.5`; 0 for a constant sample.
    pub skewness: f64,
    /// `m4 / m2^2 - 3`; 0 for a constant sample.
    pub excess_kurtosis: f64,
    pub histogram: Histogram,
}

#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct MonteCarloSummary {
    pub samples: Vec<ChannelStats>,
    pub gain_db: SampleSummary,
    pub rms_delay_spread: SampleSummary,
}

/// Linear-interpolation quantile of sorted data.
fn quantile(sorted: &[f64], q: f64) -> f64 {
    let pos = q * (sorted.len() - 1) as f64;
    let lo = libm::floor(pos) as usize;
    let hi = (lo + 1).min(sorted.len() - 1);
    sorted[lo] + (pos - lo as f64) * (sorted[hi] - sorted[lo])
}

const MAX_BINS: usize = 10_000;

/// Freedman–Diaconis histogram; collapses to one bin when the spread or
/// interquartile range is zero.
pub fn histogram(values: &[f64]) -> Histogram {
    let mut sorted = values.to_vec();
    sorted.sort_by(f64::total_cmp);
    let (Some(&min), Some(&max)) = (sorted.first(), sorted.last()) else {
        return Histogram { edges: Vec::new(), counts: Vec::new() };
    };
    let n = sorted.len();
    let iqr = quantile(&sorted, 0.75) - quantile(&sorted, 0.25);
    let width = 2.0 * iqr / libm::cbrt(n as f64);
    let range = max - min;
    if !(width > 0.0 && range > 0.0) {
        return Histogram { edges: alloc::vec![min, max], counts: alloc::vec![n as u64] };
    }
    let bins = (libm::ceil(range / width) as usize).clamp(1, MAX_BINS);
    let step = range / bins as f64;
    let edges = (0..=bins)
        .map(|k| if k == bins { max } else { min + k as f64 * step })
        .collect();
    let mut counts = alloc::vec![0u64; bins];
    for &v in &sorted {
        let k = (libm::floor((v - min) / step) as usize).min(bins - 1);
        counts[k] += 1;
    }
    Histogram { edges, counts }
}

pub fn describe(values: &[f64]) -> Result<SampleSummary> {
    let n = values.len();
    if n < 2 {
        return Err(Error::TooFewSamples { needed: 2, got: n });
    }
    let nf = n as f64;
    let mean = values.iter().sum::<f64>() / nf;
    let (mut m2, mut m3, mut m4) = (0.0, 0.0, 0.0);
    for &v in values {
        let d = v - mean;
        let d2 = d * d;
        m2 += d2;
        m3 += d2 * d;
        m4 += d2 * d2;
    }
    let std = libm::sqrt(m2 / (nf - 1.0));
    let (m2, m3, m4) = (m2 / nf, m3 / nf, m4 / nf);
    let (skewness, excess_kurtosis) = if m2 > 0.0 {
        (m3 / libm::pow(m2, 1.5), m4 / (m2 * m2) - 3.0)
    } else {
        (0.0, 0.0)
    };
    Ok(SampleSummary {
        count: n,
        mean,
        std,
        skewness,
        excess_kurtosis,
        histogram: histogram(values),
    })
}

pub fn summarize(samples: Vec<ChannelStats>) -> Result<MonteCarloSummary> {
    let gains: Vec<f64> = samples.iter().map(|s| s.gain_db).collect();
    let spreads: Vec<f64> = samples.iter().map(|s| s.rms_delay_spread).collect();
    Ok(MonteCarloSummary {
        gain_db: describe(&gains)?,
        rms_delay_spread: describe(&spreads)?,
        samples,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::{RxElement, TxElement};
    use crate::scatter::Family;
    use crate::cir::TapStatus;
    use alloc::vec;

    fn taps(pairs: &[(f64, f64)]) -> Vec<PathTap> {
        pairs
            .iter()
            .map(|&(delay, amplitude)| PathTap {
                delay,
                amplitude,
                family: Family::Wall1,
                tx: TxElement::P,
                rx: RxElement::Q,
                status: TapStatus::Active,
            })
            .collect()
    }

    const NS: f64 = 1e-9;

    #[test]
    fn dc_gain_values() {
        assert_eq!(dc_gain(&[]), 0.0);
        assert!((dc_gain(&taps(&[(1e-7, 0.3), (2e-7, 0.2)])) - 0.5).abs() < 1e-16);
    }

    #[test]
    fn gain_conventions() {
        let g = optical_gain_db(1.0).unwrap();
        assert_eq!((g.loss_db, g.gain_db), (0.0, 0.0));
        let g = optical_gain_db(1e-9).unwrap();
        assert!((g.loss_db - 90.0).abs() < 1e-12 && (g.gain_db + 90.0).abs() < 1e-12);
        let g = optical_gain_db(libm::pow(10.0, -9.47)).unwrap();
        assert!((g.gain_db + 94.7).abs() < 1e-12);
        assert_eq!(optical_gain_db(0.0), Err(Error::NoReceivedPower));
        assert!(optical_gain_db(-1.0).is_err());
    }

    #[test]
    fn delay_values() {
        let one = taps(&[(50.0 * NS, 0.1)]);
        assert!((mean_excess_delay(&one).unwrap() - 50.0 * NS).abs() < 1e-22);
        assert_eq!(rms_delay_spread(&one).unwrap(), 0.0);

        let two = taps(&[(40.0 * NS, 0.3), (60.0 * NS, 0.3)]);
        assert!((mean_excess_delay(&two).unwrap() - 50.0 * NS).abs() < 1e-21);
        assert!((rms_delay_spread(&two).unwrap() - 10.0 * NS).abs() < 1e-21);

        let weighted = taps(&[(40.0 * NS, 0.1), (60.0 * NS, 0.2)]);
        assert!((mean_excess_delay(&weighted).unwrap() - 56.0 * NS).abs() < 1e-21);
    }

    #[test]
    fn all_zero_is_error() {
        let z = taps(&[(1e-7, 0.0), (2e-7, 0.0)]);
        assert_eq!(mean_excess_delay(&z), Err(Error::NoReceivedPower));
        assert_eq!(rms_delay_spread(&[]), Err(Error::NoReceivedPower));
        assert!(ChannelStats::of(&z).is_err());
    }

    #[test]
    fn bit_rate_bound() {
        let s = ChannelStats::of(&taps(&[(40.0 * NS, 0.3), (60.0 * NS, 0.3)])).unwrap();
        assert_eq!(s.max_bit_rate.unwrap() * 10.0 * s.rms_delay_spread, 1.0);
        let s = ChannelStats::of(&taps(&[(40.0 * NS, 0.3)])).unwrap();
        assert_eq!(s.max_bit_rate, None);
    }

    #[test]
    fn describe_values() {
        let s = describe(&[1.0, 3.0]).unwrap();
        assert_eq!(s.mean, 2.0);
        assert!((s.std - libm::sqrt(2.0)).abs() < 1e-15);

        let c = describe(&[4.0; 10]).unwrap();
        assert_eq!(c.std, 0.0);
        assert_eq!(c.histogram.counts, vec![10]);
        assert_eq!((c.skewness, c.excess_kurtosis), (0.0, 0.0));

        assert_eq!(describe(&[1.0]), Err(Error::TooFewSamples { needed: 2, got: 1 }));
    }

    #[test]
    fn histogram_counts_everything() {
        let values: Vec<f64> = (0..1000).map(|k| libm::sin(k as f64) * 3.0).collect();
        let h = histogram(&values);
        assert_eq!(h.counts.iter().sum::<u64>(), 1000);
        assert_eq!(h.edges.len(), h.counts.len() + 1);
        assert!(h.edges.windows(2).all(|w| w[0] < w[1]));
    }
}
