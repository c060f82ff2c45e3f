//! Gray level dependence matrix features.
//!
//! The dependence size of a voxel is 1 (itself) plus the number of in-mask
//! 26-neighbors whose level differs by at most `alpha` from the center.

use crate::texture::{neighbors_26, LevelGrid};

pub const FEATURE_NAMES: [&str; 14] = [
    "SmallDependenceEmphasis",
    "LargeDependenceEmphasis",
    "GrayLevelNonUniformity",
    "DependenceNonUniformity",
    "DependenceNonUniformityNormalized",
    "GrayLevelVariance",
    "DependenceVariance",
    "DependenceEntropy",
    "LowGrayLevelEmphasis",
    "HighGrayLevelEmphasis",
    "SmallDependenceLowGrayLevelEmphasis",
    "SmallDependenceHighGrayLevelEmphasis",
    "LargeDependenceLowGrayLevelEmphasis",
    "LargeDependenceHighGrayLevelEmphasis",
];

/// Dependence counts, row-major Ng x 27; column j holds dependence size j+1.
pub fn gldm_counts(grid: &LevelGrid, alpha: u32) -> Vec<u64> {
    let ng = grid.n_levels as usize;
    let mut counts = vec![0u64; ng * 27];
    let offsets = neighbors_26();
    let [nx, ny, nz] = grid.dims;
    for z in 0..nz {
        for y in 0..ny {
            for x in 0..nx {
                let lvl = grid.level(x, y, z);
                if lvl == 0 {
                    continue;
                }
                let mut dep = 0usize;
                for off in &offsets {
                    let q = grid.level_at_offset(
                        x as i64 + off[0],
                        y as i64 + off[1],
                        z as i64 + off[2],
                    );
                    if q > 0 && q.abs_diff(lvl) <= alpha {
                        dep += 1;
                    }
                }
                counts[(lvl as usize - 1) * 27 + dep] += 1;
            }
        }
    }
    counts
}

/// The 14 GLDM features.
pub fn gldm_features(grid: &LevelGrid, alpha: u32) -> super::FeatureMap {
    let counts = gldm_counts(grid, alpha);
    let ng = grid.n_levels as usize;
    let nz: u64 = counts.iter().sum();
    let mut out = super::FeatureMap::new();
    if nz == 0 {
        for name in FEATURE_NAMES {
            out.push(name, 0.0);
        }
        return out;
    }
    let nzf = nz as f64;

    let mut sde = 0.0;
    let mut lde = 0.0;
    let mut lgle = 0.0;
    let mut hgle = 0.0;
    let mut sdlgle = 0.0;
    let mut sdhgle = 0.0;
    let mut ldlgle = 0.0;
    let mut ldhgle = 0.0;
    let mut de = 0.0;
    let mut row_sums = vec![0.0f64; ng];
    let mut col_sums = vec![0.0f64; 27];
    for i in 0..ng {
        for j in 0..27 {
            let c = counts[i * 27 + j] as f64;
            if c == 0.0 {
                continue;
            }
            row_sums[i] += c;
            col_sums[j] += c;
            let gl2 = ((i + 1) * (i + 1)) as f64;
            let d2 = ((j + 1) * (j + 1)) as f64;
            sde += c / d2;
            lde += c * d2;
            lgle += c / gl2;
            hgle += c * gl2;
            sdlgle += c / (gl2 * d2);
            sdhgle += c * gl2 / d2;
            ldlgle += c * d2 / gl2;
            ldhgle += c * gl2 * d2;
            let p = c / nzf;
            de -= p * p.log2();
        }
    }
    let gln: f64 = row_sums.iter().map(|&s| s * s).sum();
    let dn: f64 = col_sums.iter().map(|&s| s * s).sum();
    let mu_g: f64 = row_sums
        .iter()
        .enumerate()
        .map(|(i, &s)| (i + 1) as f64 * s / nzf)
        .sum();
    let mu_d: f64 = col_sums
        .iter()
        .enumerate()
        .map(|(j, &s)| (j + 1) as f64 * s / nzf)
        .sum();
    let glv: f64 = row_sums
        .iter()
        .enumerate()
        .map(|(i, &s)| ((i + 1) as f64 - mu_g).powi(2) * s / nzf)
        .sum();
    let dv: f64 = col_sums
        .iter()
        .enumerate()
        .map(|(j, &s)| ((j + 1) as f64 - mu_d).powi(2) * s / nzf)
        .sum();

    out.push("SmallDependenceEmphasis", sde / nzf);
    out.push("LargeDependenceEmphasis", lde / nzf);
    out.push("GrayLevelNonUniformity", gln / nzf);
    out.push("DependenceNonUniformity", dn / nzf);
    out.push("DependenceNonUniformityNormalized", dn / (nzf * nzf));
    out.push("GrayLevelVariance", glv);
    out.push("DependenceVariance", dv);
    out.push("DependenceEntropy", de);
    out.push("LowGrayLevelEmphasis", lgle / nzf);
    out.push("HighGrayLevelEmphasis", hgle / nzf);
    out.push("SmallDependenceLowGrayLevelEmphasis", sdlgle / nzf);
    out.push("SmallDependenceHighGrayLevelEmphasis", sdhgle / nzf);
    out.push("LargeDependenceLowGrayLevelEmphasis", ldlgle / nzf);
    out.push("LargeDependenceHighGrayLevelEmphasis", ldhgle / nzf);
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn constant_cube_is_fully_dependent() {
        let grid = LevelGrid::from_levels([2, 2, 2], vec![3; 8]);
        let counts = gldm_counts(&grid, 0);
        // every voxel has 7 equal neighbors -> dependence size 8
        assert_eq!(counts[(3 - 1) * 27 + 7], 8);
        assert_eq!(counts.iter().sum::<u64>(), 8);
    }

    #[test]
    fn isolated_voxel_has_dependence_one() {
        let mut levels = vec![0u32; 27];
        levels[13] = 1;
        let grid = LevelGrid::from_levels([3, 3, 3], levels);
        let counts = gldm_counts(&grid, 0);
        assert_eq!(counts[0], 1); // level 1, dependence size 1 (column 0)
        let f = gldm_features(&grid, 0);
        assert_eq!(f.get("SmallDependenceEmphasis"), Some(1.0));
        assert_eq!(f.get("LargeDependenceEmphasis"), Some(1.0));
    }

    #[test]
    fn alpha_tolerance_widens_dependence() {
        let grid = LevelGrid::from_levels([2, 1, 1], vec![1, 2]);
        let strict = gldm_counts(&grid, 0);
        // no equal neighbors: both voxels dependence size 1
        assert_eq!(strict[0], 1);
        assert_eq!(strict[27], 1);
        let loose = gldm_counts(&grid, 1);
        assert_eq!(loose[1], 1); // dependence size 2 for level 1
        assert_eq!(loose[27 + 1], 1);
    }
}
