//! First-order (histogram) statistics of the in-mask intensities.

use crate::error::Result;
use crate::preproc::DiscretizedVolume;
use crate::texture::FeatureMap;
use crate::volume::{Volume, VoxelMask};

pub const FEATURE_NAMES: [&str; 19] = [
    "Energy",
    "TotalEnergy",
    "Entropy",
    "Minimum",
    "Percentile10",
    "Percentile90",
    "Maximum",
    "Mean",
    "Median",
    "InterquartileRange",
    "Range",
    "MeanAbsoluteDeviation",
    "RobustMeanAbsoluteDeviation",
    "RootMeanSquared",
    "StandardDeviation",
    "Skewness",
    "Kurtosis",
    "Variance",
    "Uniformity",
];

/// Percentile with linear interpolation between order statistics.
/// `sorted` must be ascending and non-empty.
pub fn percentile(sorted: &[f64], q: f64) -> f64 {
    let n = sorted.len();
    if n == 1 {
        return sorted[0];
    }
    let pos = q / 100.0 * (n - 1) as f64;
    let lo = pos.floor() as usize;
    let hi = pos.ceil() as usize;
    let frac = pos - lo as f64;
    sorted[lo] + (sorted[hi] - sorted[lo]) * frac
}

/// The 19 first-order features. Entropy and uniformity are computed on the
/// discretized bins; everything else on the raw in-mask values. Skewness and
/// kurtosis of a zero-variance distribution are 0 by convention.
pub fn first_order_features(
    v: &Volume,
    mask: &VoxelMask,
    disc: &DiscretizedVolume,
) -> Result<FeatureMap> {
    let values = mask.extract_values(v);
    let n = values.len() as f64;
    let voxel_volume = v.voxel_volume();

    let mut sorted = values.clone();
    sorted.sort_by(|a, b| a.partial_cmp(b).unwrap());
    let minimum = sorted[0];
    let maximum = sorted[sorted.len() - 1];
    let p10 = percentile(&sorted, 10.0);
    let p25 = percentile(&sorted, 25.0);
    let median = percentile(&sorted, 50.0);
    let p75 = percentile(&sorted, 75.0);
    let p90 = percentile(&sorted, 90.0);

    let mean = values.iter().sum::<f64>() / n;
    let energy: f64 = values.iter().map(|x| x * x).sum();
    let mut m2 = 0.0;
    let mut m3 = 0.0;
    let mut m4 = 0.0;
    let mut mad = 0.0;
    for &x in &values {
        let d = x - mean;
        let d2 = d * d;
        m2 += d2;
        m3 += d2 * d;
        m4 += d2 * d2;
        mad += d.abs();
    }
    m2 /= n;
    m3 /= n;
    m4 /= n;
    mad /= n;
    let variance = m2;
    let std = variance.sqrt();
    let (skewness, kurtosis) = if m2 > 0.0 {
        (m3 / (m2 * std), m4 / (m2 * m2))
    } else {
        (0.0, 0.0)
    };

    // robust MAD: mean absolute deviation over values in [P10, P90]
    let robust: Vec<f64> = values
        .iter()
        .copied()
        .filter(|&x| x >= p10 && x <= p90)
        .collect();
    let rmad = if robust.is_empty() {
        0.0
    } else {
        let rm = robust.iter().sum::<f64>() / robust.len() as f64;
        robust.iter().map(|x| (x - rm).abs()).sum::<f64>() / robust.len() as f64
    };

    // bin-histogram statistics
    let mut hist = vec![0u64; disc.n_levels() as usize];
    for (&inside, &b) in mask.data().iter().zip(disc.bins()) {
        if inside {
            hist[(b - 1) as usize] += 1;
        }
    }
    let total: u64 = hist.iter().sum();
    let mut entropy = 0.0;
    let mut uniformity = 0.0;
    for &c in &hist {
        if c > 0 {
            let p = c as f64 / total as f64;
            entropy -= p * p.log2();
            uniformity += p * p;
        }
    }

    let mut out = FeatureMap::new();
    out.push("Energy", energy);
    out.push("TotalEnergy", voxel_volume * energy);
    out.push("Entropy", entropy);
    out.push("Minimum", minimum);
    out.push("Percentile10", p10);
    out.push("Percentile90", p90);
    out.push("Maximum", maximum);
    out.push("Mean", mean);
    out.push("Median", median);
    out.push("InterquartileRange", p75 - p25);
    out.push("Range", maximum - minimum);
    out.push("MeanAbsoluteDeviation", mad);
    out.push("RobustMeanAbsoluteDeviation", rmad);
    out.push("RootMeanSquared", (energy / n).sqrt());
    out.push("StandardDeviation", std);
    out.push("Skewness", skewness);
    out.push("Kurtosis", kurtosis);
    out.push("Variance", variance);
    out.push("Uniformity", uniformity);
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::preproc::discretize;
    use crate::volume::Volume;

    fn setup(values: Vec<f64>) -> (Volume, VoxelMask, DiscretizedVolume) {
        let n = values.len();
        let v = Volume::from_parts([n, 1, 1], [1.0; 3], values).unwrap();
        let m = VoxelMask::new([n, 1, 1], [1.0; 3], vec![true; n]).unwrap();
        let d = discretize(&v, &m, 25.0).unwrap();
        (v, m, d)
    }

    #[test]
    fn degenerate_constant_values() {
        let (v, m, d) = setup(vec![2.0, 2.0, 2.0]);
        let f = first_order_features(&v, &m, &d).unwrap();
        assert_eq!(f.get("Mean"), Some(2.0));
        assert_eq!(f.get("StandardDeviation"), Some(0.0));
        assert_eq!(f.get("Skewness"), Some(0.0));
        assert_eq!(f.get("Kurtosis"), Some(0.0));
        assert_eq!(f.get("Range"), Some(0.0));
        assert_eq!(f.get("Uniformity"), Some(1.0));
        assert_eq!(f.get("Entropy"), Some(0.0));
    }

    #[test]
    fn interpolated_percentiles() {
        let (v, m, d) = setup(vec![1.0, 2.0, 3.0, 4.0]);
        let f = first_order_features(&v, &m, &d).unwrap();
        assert_eq!(f.get("Median"), Some(2.5));
        // P25 at position 0.75 -> 1.75; P75 at position 2.25 -> 3.25
        assert!((f.get("InterquartileRange").unwrap() - 1.5).abs() < 1e-12);
        assert!((f.get("Percentile10").unwrap() - 1.3).abs() < 1e-12);
        assert!((f.get("Percentile90").unwrap() - 3.7).abs() < 1e-12);
    }

    #[test]
    fn hand_arithmetic_case() {
        let (v, m, d) = setup(vec![0.0, 0.0, 0.0, 10.0]);
        let f = first_order_features(&v, &m, &d).unwrap();
        assert_eq!(f.get("Maximum"), Some(10.0));
        assert_eq!(f.get("Mean"), Some(2.5));
        assert_eq!(f.get("Variance"), Some(18.75));
        assert_eq!(f.get("Energy"), Some(100.0));
        assert_eq!(f.get("RootMeanSquared"), Some(5.0));
    }

    #[test]
    fn names_match_registry() {
        let (v, m, d) = setup(vec![1.0, 5.0, 2.0]);
        let f = first_order_features(&v, &m, &d).unwrap();
        let names: Vec<&str> = f.names().collect();
        assert_eq!(names, FEATURE_NAMES.to_vec());
    }
}
