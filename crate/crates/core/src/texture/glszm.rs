//! Gray level size zone matrix features.
//!
//! A zone is a 26-connected component of equal gray level; the matrix is
//! direction-free.

use crate::texture::{neighbors_26, LevelGrid};

pub const FEATURE_NAMES: [&str; 16] = [
    "SmallAreaEmphasis",
    "LargeAreaEmphasis",
    "GrayLevelNonUniformity",
    "GrayLevelNonUniformityNormalized",
    "SizeZoneNonUniformity",
    "SizeZoneNonUniformityNormalized",
    "ZonePercentage",
    "GrayLevelVariance",
    "ZoneVariance",
    "ZoneEntropy",
    "LowGrayLevelZoneEmphasis",
    "HighGrayLevelZoneEmphasis",
    "SmallAreaLowGrayLevelEmphasis",
    "SmallAreaHighGrayLevelEmphasis",
    "LargeAreaLowGrayLevelEmphasis",
    "LargeAreaHighGrayLevelEmphasis",
];

/// All zones as (level, size) pairs via flood fill over 26-connectivity.
pub fn zones(grid: &LevelGrid) -> Vec<(u32, usize)> {
    let [nx, ny, nz] = grid.dims;
    let n = nx * ny * nz;
    let mut visited = vec![false; n];
    let mut out = Vec::new();
    let mut stack = Vec::new();
    let offsets = neighbors_26();
    for start in 0..n {
        if visited[start] || grid.levels[start] == 0 {
            continue;
        }
        let lvl = grid.levels[start];
        let mut size = 0usize;
        visited[start] = true;
        stack.push(start);
        while let Some(idx) = stack.pop() {
            size += 1;
            let x = (idx % nx) as i64;
            let y = ((idx / nx) % ny) as i64;
            let z = (idx / (nx * ny)) as i64;
            for off in &offsets {
                let (qx, qy, qz) = (x + off[0], y + off[1], z + off[2]);
                if qx < 0
                    || qy < 0
                    || qz < 0
                    || qx >= nx as i64
                    || qy >= ny as i64
                    || qz >= nz as i64
                {
                    continue;
                }
                let qidx = qx as usize + nx * (qy as usize + ny * qz as usize);
                if !visited[qidx] && grid.levels[qidx] == lvl {
                    visited[qidx] = true;
                    stack.push(qidx);
                }
            }
        }
        out.push((lvl, size));
    }
    out
}

/// 16 GLSZM features.
pub fn glszm_features(grid: &LevelGrid) -> super::FeatureMap {
    let zone_list = zones(grid);
    let mut out = super::FeatureMap::new();
    if zone_list.is_empty() {
        for name in FEATURE_NAMES {
            out.push(name, 0.0);
        }
        return out;
    }
    let nz = zone_list.len() as f64;
    let np = grid.n_voxels as f64;

    let mut sae = 0.0;
    let mut lae = 0.0;
    let mut lglze = 0.0;
    let mut hglze = 0.0;
    let mut salgle = 0.0;
    let mut sahgle = 0.0;
    let mut lalgle = 0.0;
    let mut lahgle = 0.0;
    let mut level_sums = std::collections::BTreeMap::<u32, f64>::new();
    let mut size_sums = std::collections::BTreeMap::<usize, f64>::new();
    for &(lvl, size) in &zone_list {
        let gl2 = (lvl as f64) * (lvl as f64);
        let s2 = (size as f64) * (size as f64);
        sae += 1.0 / s2;
        lae += s2;
        lglze += 1.0 / gl2;
        hglze += gl2;
        salgle += 1.0 / (gl2 * s2);
        sahgle += gl2 / s2;
        lalgle += s2 / gl2;
        lahgle += gl2 * s2;
        *level_sums.entry(lvl).or_default() += 1.0;
        *size_sums.entry(size).or_default() += 1.0;
    }
    let gln: f64 = level_sums.values().map(|&c| c * c).sum();
    let szn: f64 = size_sums.values().map(|&c| c * c).sum();

    let mu_g: f64 = zone_list.iter().map(|&(l, _)| l as f64).sum::<f64>() / nz;
    let mu_s: f64 = zone_list.iter().map(|&(_, s)| s as f64).sum::<f64>() / nz;
    let glv: f64 = zone_list
        .iter()
        .map(|&(l, _)| (l as f64 - mu_g).powi(2))
        .sum::<f64>()
        / nz;
    let zv: f64 = zone_list
        .iter()
        .map(|&(_, s)| (s as f64 - mu_s).powi(2))
        .sum::<f64>()
        / nz;

    // entropy over the (level, size) histogram
    let mut cell_counts = std::collections::BTreeMap::<(u32, usize), f64>::new();
    for &(l, s) in &zone_list {
        *cell_counts.entry((l, s)).or_default() += 1.0;
    }
    let ze: f64 = -cell_counts
        .values()
        .map(|&c| {
            let p = c / nz;
            p * p.log2()
        })
        .sum::<f64>();

    out.push("SmallAreaEmphasis", sae / nz);
    out.push("LargeAreaEmphasis", lae / nz);
    out.push("GrayLevelNonUniformity", gln / nz);
    out.push("GrayLevelNonUniformityNormalized", gln / (nz * nz));
    out.push("SizeZoneNonUniformity", szn / nz);
    out.push("SizeZoneNonUniformityNormalized", szn / (nz * nz));
    out.push("ZonePercentage", nz / np);
    out.push("GrayLevelVariance", glv);
    out.push("ZoneVariance", zv);
    out.push("ZoneEntropy", ze);
    out.push("LowGrayLevelZoneEmphasis", lglze / nz);
    out.push("HighGrayLevelZoneEmphasis", hglze / nz);
    out.push("SmallAreaLowGrayLevelEmphasis", salgle / nz);
    out.push("SmallAreaHighGrayLevelEmphasis", sahgle / nz);
    out.push("LargeAreaLowGrayLevelEmphasis", lalgle / nz);
    out.push("LargeAreaHighGrayLevelEmphasis", lahgle / nz);
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn constant_block_is_single_zone() {
        let grid = LevelGrid::from_levels([2, 2, 2], vec![1; 8]);
        let z = zones(&grid);
        assert_eq!(z, vec![(1, 8)]);
        let f = glszm_features(&grid);
        assert_eq!(f.get("SmallAreaEmphasis"), Some(1.0 / 64.0));
        assert_eq!(f.get("LargeAreaEmphasis"), Some(64.0));
        assert_eq!(f.get("ZonePercentage"), Some(1.0 / 8.0));
        assert_eq!(f.get("SmallAreaLowGrayLevelEmphasis"), Some(1.0 / 64.0));
    }

    #[test]
    fn diagonal_voxels_connect_under_26() {
        let mut levels = vec![0u32; 8];
        levels[0] = 2; // (0,0,0)
        levels[7] = 2; // (1,1,1) body diagonal
        let grid = LevelGrid::from_levels([2, 2, 2], levels);
        assert_eq!(zones(&grid), vec![(2, 2)]);
    }

    #[test]
    fn different_levels_split_zones() {
        let grid = LevelGrid::from_levels([3, 1, 1], vec![1, 2, 1]);
        let z = zones(&grid);
        assert_eq!(z.len(), 3);
    }
}
