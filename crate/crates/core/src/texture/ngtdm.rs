//! Neighbouring gray tone difference matrix features.
//!
//! For every in-mask voxel the average gray level of its in-mask 26-neighbors
//! is computed; `s_i` accumulates the absolute difference to that average for
//! level i, `n_i` counts the voxels. A voxel with no in-mask neighbor still
//! counts toward `n_i` with difference 0.

use crate::texture::{neighbors_26, LevelGrid};

pub const FEATURE_NAMES: [&str; 5] = [
    "Coarseness",
    "Contrast",
    "Busyness",
    "Complexity",
    "Strength",
];

/// Degenerate-coarseness cap when sum(p_i * s_i) is zero.
pub const COARSENESS_CAP: f64 = 1e6;

/// (n_i, s_i) per gray level (index 0 holds level 1).
pub fn ngtdm_counts(grid: &LevelGrid) -> (Vec<u64>, Vec<f64>) {
    let ng = grid.n_levels as usize;
    let mut n = vec![0u64; ng];
    let mut s = vec![0.0f64; ng];
    let offsets = neighbors_26();
    let [nx, ny, nz] = grid.dims;
    for z in 0..nz {
        for y in 0..ny {
            for x in 0..nx {
                let lvl = grid.level(x, y, z);
                if lvl == 0 {
                    continue;
                }
                let mut sum = 0u64;
                let mut cnt = 0u64;
                for off in &offsets {
                    let q = grid.level_at_offset(
                        x as i64 + off[0],
                        y as i64 + off[1],
                        z as i64 + off[2],
                    );
                    if q > 0 {
                        sum += q as u64;
                        cnt += 1;
                    }
                }
                let i = (lvl - 1) as usize;
                n[i] += 1;
                if cnt > 0 {
                    s[i] += (lvl as f64 - sum as f64 / cnt as f64).abs();
                }
            }
        }
    }
    (n, s)
}

/// The 5 NGTDM features.
pub fn ngtdm_features(grid: &LevelGrid) -> super::FeatureMap {
    let (n, s) = ngtdm_counts(grid);
    let np: u64 = n.iter().sum();
    let mut out = super::FeatureMap::new();
    if np == 0 {
        for name in FEATURE_NAMES {
            out.push(name, 0.0);
        }
        return out;
    }
    let npf = np as f64;
    let ng = n.len();
    let p: Vec<f64> = n.iter().map(|&c| c as f64 / npf).collect();
    let present: Vec<usize> = (0..ng).filter(|&i| n[i] > 0).collect();
    let ngp = present.len() as f64;

    let sum_ps: f64 = present.iter().map(|&i| p[i] * s[i]).sum();
    let sum_s: f64 = s.iter().sum();

    let coarseness = if sum_ps > 0.0 {
        (1.0 / sum_ps).min(COARSENESS_CAP)
    } else {
        COARSENESS_CAP
    };

    let contrast = if ngp > 1.0 {
        let mut pairs = 0.0;
        for &i in &present {
            for &j in &present {
                let d = i as f64 - j as f64;
                pairs += p[i] * p[j] * d * d;
            }
        }
        pairs / (ngp * (ngp - 1.0)) * (sum_s / npf)
    } else {
        0.0
    };

    let busyness = {
        let mut denom = 0.0;
        for &i in &present {
            for &j in &present {
                denom += ((i + 1) as f64 * p[i] - (j + 1) as f64 * p[j]).abs();
            }
        }
        if denom > 0.0 {
            sum_ps / denom
        } else {
            0.0
        }
    };

    let complexity = {
        let mut acc = 0.0;
        for &i in &present {
            for &j in &present {
                let d = (i as f64 - j as f64).abs();
                acc += d * (p[i] * s[i] + p[j] * s[j]) / (p[i] + p[j]);
            }
        }
        acc / npf
    };

    let strength = if sum_s > 0.0 {
        let mut acc = 0.0;
        for &i in &present {
            for &j in &present {
                let d = i as f64 - j as f64;
                acc += (p[i] + p[j]) * d * d;
            }
        }
        acc / sum_s
    } else {
        0.0
    };

    out.push("Coarseness", coarseness);
    out.push("Contrast", contrast);
    out.push("Busyness", busyness);
    out.push("Complexity", complexity);
    out.push("Strength", strength);
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn isolated_voxel_counts_with_zero_difference() {
        // two voxels far apart: no neighbors, differences 0
        let mut levels = vec![0u32; 5 * 5 * 5];
        levels[0] = 1;
        levels[124] = 2;
        let grid = LevelGrid::from_levels([5, 5, 5], levels);
        let (n, s) = ngtdm_counts(&grid);
        assert_eq!(n, vec![1, 1]);
        assert_eq!(s, vec![0.0, 0.0]);
        let f = ngtdm_features(&grid);
        assert_eq!(f.get("Coarseness"), Some(COARSENESS_CAP));
        assert_eq!(f.get("Busyness"), Some(0.0));
    }

    #[test]
    fn constant_block_has_zero_differences() {
        let grid = LevelGrid::from_levels([3, 3, 3], vec![2; 27]);
        let (n, s) = ngtdm_counts(&grid);
        assert_eq!(n[1], 27);
        assert!(s[1].abs() < 1e-12);
    }

    #[test]
    fn hand_checked_line() {
        // line 1,2,3: voxel 1 sees {2}, diff 1; voxel 2 sees {1,3}, avg 2,
        // diff 0; voxel 3 sees {2}, diff 1
        let grid = LevelGrid::from_levels([3, 1, 1], vec![1, 2, 3]);
        let (n, s) = ngtdm_counts(&grid);
        assert_eq!(n, vec![1, 1, 1]);
        assert!((s[0] - 1.0).abs() < 1e-12);
        assert!(s[1].abs() < 1e-12);
        assert!((s[2] - 1.0).abs() < 1e-12);
    }
}
