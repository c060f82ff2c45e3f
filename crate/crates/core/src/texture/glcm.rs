//! Gray level co-occurrence matrix features.
//!
//! One symmetric matrix per direction (ordered pairs counted both ways),
//! normalized per direction; each feature is computed per direction and the
//! 13-direction mean is reported. Directions without any voxel pair are
//! skipped; degenerate conventions: correlation of a zero-variance matrix is
//! 1.0, logarithms are base 2 with 0*log0 = 0, MCC of a single-level matrix
//! is 1.0.

use crate::linalg::{jacobi_eigen, Mat};
use crate::texture::{LevelGrid, DIRECTIONS_13};

pub const FEATURE_NAMES: [&str; 24] = [
    "Autocorrelation",
    "JointAverage",
    "ClusterProminence",
    "ClusterShade",
    "ClusterTendency",
    "Contrast",
    "Correlation",
    "DifferenceAverage",
    "DifferenceEntropy",
    "DifferenceVariance",
    "Id",
    "Idm",
    "Idmn",
    "Idn",
    "Imc1",
    "Imc2",
    "InverseVariance",
    "JointEnergy",
    "JointEntropy",
    "MaximumProbability",
    "Mcc",
    "SumAverage",
    "SumEntropy",
    "SumSquares",
];

/// Symmetric co-occurrence counts for one direction (row-major Ng x Ng).
pub fn glcm_counts(grid: &LevelGrid, dir: [i64; 3]) -> Vec<u64> {
    let ng = grid.n_levels as usize;
    let mut counts = vec![0u64; ng * ng];
    let [nx, ny, nz] = grid.dims;
    for z in 0..nz {
        for y in 0..ny {
            for x in 0..nx {
                let a = grid.level(x, y, z);
                if a == 0 {
                    continue;
                }
                let b = grid.level_at_offset(
                    x as i64 + dir[0],
                    y as i64 + dir[1],
                    z as i64 + dir[2],
                );
                if b == 0 {
                    continue;
                }
                let (i, j) = ((a - 1) as usize, (b - 1) as usize);
                counts[i * ng + j] += 1;
                counts[j * ng + i] += 1;
            }
        }
    }
    counts
}

fn xlog2(p: f64) -> f64 {
    if p > 0.0 {
        p * p.log2()
    } else {
        0.0
    }
}

/// The 24 features from one normalized symmetric matrix.
fn features_from_matrix(p: &[f64], ng: usize) -> [f64; 24] {
    let nguf = ng as f64;
    let mut px = vec![0.0; ng];
    let mut py = vec![0.0; ng];
    let mut p_sum = vec![0.0; 2 * ng - 1]; // index k-2 for i+j = k, k in 2..=2Ng
    let mut p_diff = vec![0.0; ng]; // |i-j| in 0..Ng-1
    for i in 0..ng {
        for j in 0..ng {
            let v = p[i * ng + j];
            px[i] += v;
            py[j] += v;
            p_sum[i + j] += v;
            p_diff[i.abs_diff(j)] += v;
        }
    }
    let mu_x: f64 = px.iter().enumerate().map(|(i, &v)| (i + 1) as f64 * v).sum();
    let mu_y: f64 = py.iter().enumerate().map(|(j, &v)| (j + 1) as f64 * v).sum();
    let var_x: f64 = px
        .iter()
        .enumerate()
        .map(|(i, &v)| ((i + 1) as f64 - mu_x).powi(2) * v)
        .sum();
    let var_y: f64 = py
        .iter()
        .enumerate()
        .map(|(j, &v)| ((j + 1) as f64 - mu_y).powi(2) * v)
        .sum();

    let mut autocorrelation = 0.0;
    let mut cluster_prominence = 0.0;
    let mut cluster_shade = 0.0;
    let mut cluster_tendency = 0.0;
    let mut contrast = 0.0;
    let mut joint_energy = 0.0;
    let mut joint_entropy = 0.0;
    let mut max_prob = 0.0f64;
    let mut sum_squares = 0.0;
    let mut corr_num = 0.0;
    for i in 0..ng {
        let fi = (i + 1) as f64;
        for j in 0..ng {
            let fj = (j + 1) as f64;
            let v = p[i * ng + j];
            if v == 0.0 {
                continue;
            }
            autocorrelation += fi * fj * v;
            let s = fi + fj - mu_x - mu_y;
            cluster_tendency += s * s * v;
            cluster_shade += s * s * s * v;
            cluster_prominence += s * s * s * s * v;
            contrast += (fi - fj) * (fi - fj) * v;
            joint_energy += v * v;
            joint_entropy -= xlog2(v);
            max_prob = max_prob.max(v);
            sum_squares += (fi - mu_x) * (fi - mu_x) * v;
            corr_num += fi * fj * v;
        }
    }
    let correlation = if var_x > 0.0 && var_y > 0.0 {
        (corr_num - mu_x * mu_y) / (var_x.sqrt() * var_y.sqrt())
    } else {
        1.0
    };

    let diff_avg: f64 = p_diff.iter().enumerate().map(|(k, &v)| k as f64 * v).sum();
    let diff_var: f64 = p_diff
        .iter()
        .enumerate()
        .map(|(k, &v)| (k as f64 - diff_avg).powi(2) * v)
        .sum();
    let diff_entropy: f64 = -p_diff.iter().map(|&v| xlog2(v)).sum::<f64>();
    let id: f64 = p_diff
        .iter()
        .enumerate()
        .map(|(k, &v)| v / (1.0 + k as f64))
        .sum();
    let idm: f64 = p_diff
        .iter()
        .enumerate()
        .map(|(k, &v)| v / (1.0 + (k * k) as f64))
        .sum();
    let idmn: f64 = p_diff
        .iter()
        .enumerate()
        .map(|(k, &v)| v / (1.0 + ((k * k) as f64) / (nguf * nguf)))
        .sum();
    let idn: f64 = p_diff
        .iter()
        .enumerate()
        .map(|(k, &v)| v / (1.0 + (k as f64) / nguf))
        .sum();
    let inverse_variance: f64 = p_diff
        .iter()
        .enumerate()
        .skip(1)
        .map(|(k, &v)| v / ((k * k) as f64))
        .sum();

    let sum_avg: f64 = p_sum
        .iter()
        .enumerate()
        .map(|(k, &v)| (k + 2) as f64 * v)
        .sum();
    let sum_entropy: f64 = -p_sum.iter().map(|&v| xlog2(v)).sum::<f64>();

    let hx: f64 = -px.iter().map(|&v| xlog2(v)).sum::<f64>();
    let hy: f64 = -py.iter().map(|&v| xlog2(v)).sum::<f64>();
    let hxy = joint_entropy;
    let mut hxy1 = 0.0;
    let mut hxy2 = 0.0;
    for i in 0..ng {
        for j in 0..ng {
            let prod = px[i] * py[j];
            if prod > 0.0 {
                let lg = prod.log2();
                hxy1 -= p[i * ng + j] * lg;
                hxy2 -= prod * lg;
            }
        }
    }
    let imc1 = if hx.max(hy) > 0.0 {
        (hxy - hxy1) / hx.max(hy)
    } else {
        0.0
    };
    let imc2 = {
        let d = hxy2 - hxy;
        if d <= 0.0 {
            0.0
        } else {
            (1.0 - (-2.0 * d).exp()).max(0.0).sqrt()
        }
    };

    let mcc = mcc_value(p, ng, &px, &py);

    [
        autocorrelation,
        mu_x,
        cluster_prominence,
        cluster_shade,
        cluster_tendency,
        contrast,
        correlation,
        diff_avg,
        diff_entropy,
        diff_var,
        id,
        idm,
        idmn,
        idn,
        imc1,
        imc2,
        inverse_variance,
        joint_energy,
        joint_entropy,
        max_prob,
        mcc,
        sum_avg,
        sum_entropy,
        sum_squares,
    ]
}

/// Maximal correlation coefficient: sqrt of the second-largest eigenvalue of
/// Q(i,j) = sum_k p(i,k) p(j,k) / (px(i) py(k)). Q is similar to the
/// symmetric PSD matrix S = M M^T with M(i,k) = p(i,k)/sqrt(px(i) py(k)), so
/// the eigenvalues are computed from S restricted to the occupied levels.
fn mcc_value(p: &[f64], ng: usize, px: &[f64], py: &[f64]) -> f64 {
    let present: Vec<usize> = (0..ng).filter(|&i| px[i] > 0.0).collect();
    let m = present.len();
    if m <= 1 {
        return 1.0;
    }
    let mut mm = Mat::zeros(m, m);
    for (a, &i) in present.iter().enumerate() {
        for (b, &j) in present.iter().enumerate() {
            if b < a {
                continue;
            }
            let mut s = 0.0;
            for &k in &present {
                // py over present == px by symmetry, but keep the general form
                if py[k] > 0.0 {
                    s += p[i * ng + k] * p[j * ng + k] / py[k];
                }
            }
            let v = s / (px[i] * px[j]).sqrt();
            mm.set(a, b, v);
            mm.set(b, a, v);
        }
    }
    let (vals, _) = jacobi_eigen(&mm);
    let second = vals.get(1).copied().unwrap_or(0.0).max(0.0);
    second.sqrt()
}

/// 24 GLCM features, mean over the 13 directions that contain pairs.
pub fn glcm_features(grid: &LevelGrid) -> super::FeatureMap {
    let ng = grid.n_levels as usize;
    let mut acc = [0.0f64; 24];
    let mut used = 0usize;
    for dir in DIRECTIONS_13 {
        let counts = glcm_counts(grid, dir);
        let total: u64 = counts.iter().sum();
        if total == 0 {
            continue;
        }
        let p: Vec<f64> = counts.iter().map(|&c| c as f64 / total as f64).collect();
        let f = features_from_matrix(&p, ng);
        for (a, v) in acc.iter_mut().zip(f) {
            *a += v;
        }
        used += 1;
    }
    let mut out = super::FeatureMap::new();
    if used == 0 {
        for name in FEATURE_NAMES {
            out.push(name, 0.0);
        }
        return out;
    }
    for (name, v) in FEATURE_NAMES.iter().zip(acc) {
        out.push(*name, v / used as f64);
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::texture::LevelGrid;

    #[test]
    fn single_level_degenerate_conventions() {
        let grid = LevelGrid::from_levels([2, 2, 2], vec![1; 8]);
        let f = glcm_features(&grid);
        assert_eq!(f.get("Correlation"), Some(1.0));
        assert_eq!(f.get("ClusterShade"), Some(0.0));
        assert_eq!(f.get("Mcc"), Some(1.0));
        assert_eq!(f.get("JointEnergy"), Some(1.0));
        assert_eq!(f.get("MaximumProbability"), Some(1.0));
        assert_eq!(f.get("Contrast"), Some(0.0));
    }

    #[test]
    fn checkerboard_counts_match_hand_enumeration() {
        // 4x4x1 checkerboard of bins {1,2}
        let mut levels = Vec::with_capacity(16);
        for y in 0..4 {
            for x in 0..4 {
                levels.push(1 + ((x + y) % 2) as u32);
            }
        }
        let grid = LevelGrid::from_levels([4, 4, 1], levels);
        // along +x: 12 ordered pairs, all cross-level -> symmetric counts 24
        let c = glcm_counts(&grid, [1, 0, 0]);
        assert_eq!(c, vec![0, 12, 12, 0]);
        // along the +x+y diagonal: 9 ordered pairs, all same-level
        let c = glcm_counts(&grid, [1, 1, 0]);
        assert_eq!(c[0], 10); // level-1 diagonal pairs: 5 ordered, doubled
        assert_eq!(c[3], 8);
        assert_eq!(c[1] + c[2], 0);
    }

    #[test]
    fn three_by_three_matrix_vs_pairs() {
        // bins [[1,1,2],[1,2,3],[2,3,3]]
        let levels = vec![1, 1, 2, 1, 2, 3, 2, 3, 3];
        let grid = LevelGrid::from_levels([3, 3, 1], levels);
        let c = glcm_counts(&grid, [1, 0, 0]);
        // ordered +x pairs: (1,1),(1,2) / (1,2),(2,3) / (2,3),(3,3)
        // symmetric matrix entries double those counts
        let ng = 3;
        let get = |i: usize, j: usize| c[(i - 1) * ng + (j - 1)];
        assert_eq!(get(1, 1), 2);
        assert_eq!(get(1, 2), 2);
        assert_eq!(get(2, 1), 2);
        assert_eq!(get(2, 3), 2);
        assert_eq!(get(3, 2), 2);
        assert_eq!(get(3, 3), 2);
        assert_eq!(c.iter().sum::<u64>(), 12);
    }

    #[test]
    fn axis_permutation_invariance() {
        // transpose x and z of an asymmetric grid: direction set is closed
        // under axis permutation, so features must be identical
        let dims = [3, 2, 4];
        let mut levels = Vec::new();
        for z in 0..dims[2] {
            for y in 0..dims[1] {
                for x in 0..dims[0] {
                    levels.push(1 + ((x * 7 + y * 3 + z * 5) % 4) as u32);
                }
            }
        }
        let grid = LevelGrid::from_levels(dims, levels.clone());
        let mut swapped = vec![0u32; levels.len()];
        for z in 0..dims[2] {
            for y in 0..dims[1] {
                for x in 0..dims[0] {
                    let src = x + dims[0] * (y + dims[1] * z);
                    let dst = z + dims[2] * (y + dims[1] * x);
                    swapped[dst] = levels[src];
                }
            }
        }
        let grid_swapped = LevelGrid::from_levels([dims[2], dims[1], dims[0]], swapped);
        let a = glcm_features(&grid);
        let b = glcm_features(&grid_swapped);
        for ((_, x), (_, y)) in a.entries().iter().zip(b.entries()) {
            assert!((x - y).abs() < 1e-12, "{x} vs {y}");
        }
    }
}
