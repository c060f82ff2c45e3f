//! Gray level run length matrix features.
//!
//! Runs are maximal same-level segments along a direction; out-of-mask
//! voxels break runs. One matrix per direction; features are computed per
//! direction and averaged over the 13 directions.

use crate::texture::{LevelGrid, DIRECTIONS_13};

pub const FEATURE_NAMES: [&str; 16] = [
    "ShortRunEmphasis",
    "LongRunEmphasis",
    "GrayLevelNonUniformity",
    "GrayLevelNonUniformityNormalized",
    "RunLengthNonUniformity",
    "RunLengthNonUniformityNormalized",
    "RunPercentage",
    "GrayLevelVariance",
    "RunVariance",
    "RunEntropy",
    "LowGrayLevelRunEmphasis",
    "HighGrayLevelRunEmphasis",
    "ShortRunLowGrayLevelEmphasis",
    "ShortRunHighGrayLevelEmphasis",
    "LongRunLowGrayLevelEmphasis",
    "LongRunHighGrayLevelEmphasis",
];

/// Run-length counts for one direction, row-major Ng x max_run_len.
/// Column j (0-based) holds runs of length j+1.
pub fn glrlm_counts(grid: &LevelGrid, dir: [i64; 3]) -> (Vec<u64>, usize) {
    let ng = grid.n_levels as usize;
    let max_len = grid.dims[0].max(grid.dims[1]).max(grid.dims[2]).max(1);
    let mut counts = vec![0u64; ng * max_len];
    let [nx, ny, nz] = grid.dims;
    for z in 0..nz {
        for y in 0..ny {
            for x in 0..nx {
                let lvl = grid.level(x, y, z);
                if lvl == 0 {
                    continue;
                }
                // run starts where the predecessor along dir differs
                let prev = grid.level_at_offset(
                    x as i64 - dir[0],
                    y as i64 - dir[1],
                    z as i64 - dir[2],
                );
                if prev == lvl {
                    continue;
                }
                let mut len = 1usize;
                let (mut cx, mut cy, mut cz) = (x as i64, y as i64, z as i64);
                loop {
                    cx += dir[0];
                    cy += dir[1];
                    cz += dir[2];
                    if grid.level_at_offset(cx, cy, cz) != lvl {
                        break;
                    }
                    len += 1;
                }
                counts[(lvl as usize - 1) * max_len + (len - 1)] += 1;
            }
        }
    }
    (counts, max_len)
}

fn features_from_counts(counts: &[u64], ng: usize, max_len: usize, np: usize) -> Option<[f64; 16]> {
    let nr: u64 = counts.iter().sum();
    if nr == 0 {
        return None;
    }
    let nrf = nr as f64;
    let mut sre = 0.0;
    let mut lre = 0.0;
    let mut gln = 0.0;
    let mut rln = 0.0;
    let mut glv = 0.0;
    let mut rv = 0.0;
    let mut re = 0.0;
    let mut lglre = 0.0;
    let mut hglre = 0.0;
    let mut srlgle = 0.0;
    let mut srhgle = 0.0;
    let mut lrlgle = 0.0;
    let mut lrhgle = 0.0;

    let mut row_sums = vec![0.0f64; ng];
    let mut col_sums = vec![0.0f64; max_len];
    for i in 0..ng {
        for j in 0..max_len {
            let c = counts[i * max_len + j] as f64;
            if c == 0.0 {
                continue;
            }
            row_sums[i] += c;
            col_sums[j] += c;
            let gl2 = ((i + 1) * (i + 1)) as f64;
            let rl2 = ((j + 1) * (j + 1)) as f64;
            sre += c / rl2;
            lre += c * rl2;
            lglre += c / gl2;
            hglre += c * gl2;
            srlgle += c / (gl2 * rl2);
            srhgle += c * gl2 / rl2;
            lrlgle += c * rl2 / gl2;
            lrhgle += c * gl2 * rl2;
            let p = c / nrf;
            re -= p * p.log2();
        }
    }
    for &s in &row_sums {
        gln += s * s;
    }
    for &s in &col_sums {
        rln += s * s;
    }
    let mu_g: f64 = row_sums
        .iter()
        .enumerate()
        .map(|(i, &s)| (i + 1) as f64 * s / nrf)
        .sum();
    let mu_r: f64 = col_sums
        .iter()
        .enumerate()
        .map(|(j, &s)| (j + 1) as f64 * s / nrf)
        .sum();
    for (i, &s) in row_sums.iter().enumerate() {
        glv += ((i + 1) as f64 - mu_g).powi(2) * s / nrf;
    }
    for (j, &s) in col_sums.iter().enumerate() {
        rv += ((j + 1) as f64 - mu_r).powi(2) * s / nrf;
    }

    Some([
        sre / nrf,
        lre / nrf,
        gln / nrf,
        gln / (nrf * nrf),
        rln / nrf,
        rln / (nrf * nrf),
        nrf / np as f64,
        glv,
        rv,
        re,
        lglre / nrf,
        hglre / nrf,
        srlgle / nrf,
        srhgle / nrf,
        lrlgle / nrf,
        lrhgle / nrf,
    ])
}

/// 16 GLRLM features, mean over directions.
pub fn glrlm_features(grid: &LevelGrid) -> super::FeatureMap {
    let ng = grid.n_levels as usize;
    let mut acc = [0.0f64; 16];
    let mut used = 0usize;
    for dir in DIRECTIONS_13 {
        let (counts, max_len) = glrlm_counts(grid, dir);
        if let Some(f) = features_from_counts(&counts, ng, max_len, grid.n_voxels) {
            for (a, v) in acc.iter_mut().zip(f) {
                *a += v;
            }
            used += 1;
        }
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

    #[test]
    fn increasing_strip_has_unit_runs() {
        // strictly increasing 1-D strip: every run has length 1 in every
        // direction, so run-length non-uniformity equals the voxel count
        let n = 6;
        let levels: Vec<u32> = (1..=n as u32).collect();
        let grid = LevelGrid::from_levels([n, 1, 1], levels);
        for dir in DIRECTIONS_13 {
            let (counts, max_len) = glrlm_counts(&grid, dir);
            let total_runs: u64 = counts.iter().sum();
            assert_eq!(total_runs, n as u64);
            for i in 0..n {
                assert_eq!(counts[i * max_len], 1);
            }
            let f = features_from_counts(&counts, n, max_len, n).unwrap();
            assert_eq!(f[4], n as f64); // RLN = n^2 / n
            assert_eq!(f[6], 1.0); // run percentage
        }
    }

    #[test]
    fn constant_line_is_one_run_along_axis() {
        let grid = LevelGrid::from_levels([5, 1, 1], vec![2; 5]);
        let (counts, max_len) = glrlm_counts(&grid, [1, 0, 0]);
        assert_eq!(counts[(2 - 1) * max_len + 4], 1);
        assert_eq!(counts.iter().sum::<u64>(), 1);
        // perpendicular direction: five runs of length 1
        let (counts, max_len) = glrlm_counts(&grid, [0, 1, 0]);
        assert_eq!(counts[(2 - 1) * max_len], 5);
    }

    #[test]
    fn masked_gap_breaks_runs() {
        let grid = LevelGrid::from_levels([5, 1, 1], vec![3, 3, 0, 3, 3]);
        let (counts, max_len) = glrlm_counts(&grid, [1, 0, 0]);
        assert_eq!(counts[(3 - 1) * max_len + 1], 2); // two runs of length 2
    }
}
