//! First-order statistics and the five gray-level texture-matrix families.
//!
//! Each (MR image, tumor compartment) pair yields 94 features:
//! 19 first-order + 24 GLCM + 16 GLRLM + 16 GLSZM + 5 NGTDM + 14 GLDM.
//! Texture matrices are built over the discretized compartment with
//! 26-connectivity for zones/neighborhoods and 13 unique directions at
//! distance 1 for GLCM/GLRLM.

pub mod firstorder;
pub mod glcm;
pub mod gldm;
pub mod glrlm;
pub mod glszm;
pub mod ngtdm;

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::preproc::{self, DiscretizedVolume};
use crate::volume::{Compartment, SegmentationMask, Volume, VoxelMask};

/// Ordered feature-name -> value mapping.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct FeatureMap {
    entries: Vec<(String, f64)>,
}

impl FeatureMap {
    pub fn new() -> Self {
        FeatureMap::default()
    }

    pub fn push(&mut self, name: impl Into<String>, value: f64) {
        self.entries.push((name.into(), value));
    }

    /// Append every entry of `other`, prefixing names with `prefix`.
    pub fn extend_prefixed(&mut self, prefix: &str, other: FeatureMap) {
        for (name, value) in other.entries {
            self.entries.push((format!("{prefix}{name}"), value));
        }
    }

    pub fn extend(&mut self, other: FeatureMap) {
        self.entries.extend(other.entries);
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn entries(&self) -> &[(String, f64)] {
        &self.entries
    }

    pub fn get(&self, name: &str) -> Option<f64> {
        self.entries
            .iter()
            .find_map(|(n, v)| (n == name).then_some(*v))
    }

    pub fn names(&self) -> impl Iterator<Item = &str> {
        self.entries.iter().map(|(n, _)| n.as_str())
    }

    pub fn values(&self) -> impl Iterator<Item = f64> + '_ {
        self.entries.iter().map(|(_, v)| *v)
    }
}

impl IntoIterator for FeatureMap {
    type Item = (String, f64);
    type IntoIter = std::vec::IntoIter<(String, f64)>;

    fn into_iter(self) -> Self::IntoIter {
        self.entries.into_iter()
    }
}

/// The four standard brain-tumor MR sequences.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum MrSequence {
    T1,
    T1c,
    T2,
    Flair,
}

impl MrSequence {
    pub fn token(self) -> &'static str {
        match self {
            MrSequence::T1 => "T1",
            MrSequence::T1c => "T1c",
            MrSequence::T2 => "T2",
            MrSequence::Flair => "FLAIR",
        }
    }

    /// Token used in file-path templates.
    pub fn path_token(self) -> &'static str {
        match self {
            MrSequence::T1 => "t1",
            MrSequence::T1c => "t1ce",
            MrSequence::T2 => "t2",
            MrSequence::Flair => "flair",
        }
    }

    pub fn all() -> [MrSequence; 4] {
        [
            MrSequence::T1,
            MrSequence::T1c,
            MrSequence::T2,
            MrSequence::Flair,
        ]
    }
}

/// The 13 unique 3-D offsets at Chebyshev distance 1 (one per +/- pair).
pub const DIRECTIONS_13: [[i64; 3]; 13] = [
    [1, 0, 0],
    [0, 1, 0],
    [0, 0, 1],
    [1, 1, 0],
    [1, -1, 0],
    [1, 0, 1],
    [1, 0, -1],
    [0, 1, 1],
    [0, 1, -1],
    [1, 1, 1],
    [1, 1, -1],
    [1, -1, 1],
    [1, -1, -1],
];

/// All 26 neighbor offsets.
pub fn neighbors_26() -> Vec<[i64; 3]> {
    let mut out = Vec::with_capacity(26);
    for dz in -1..=1i64 {
        for dy in -1..=1i64 {
            for dx in -1..=1i64 {
                if dx != 0 || dy != 0 || dz != 0 {
                    out.push([dx, dy, dz]);
                }
            }
        }
    }
    out
}

/// Discretized compartment cropped to its bounding box: level 0 is
/// out-of-mask, 1..=n_levels in-mask. All texture builders work on this.
#[derive(Debug, Clone)]
pub struct LevelGrid {
    pub dims: [usize; 3],
    pub levels: Vec<u32>,
    pub n_levels: u32,
    pub n_voxels: usize,
}

impl LevelGrid {
    pub fn from_discretized(disc: &DiscretizedVolume, mask: &VoxelMask) -> Result<Self> {
        if disc.dims() != mask.dims() {
            return Err(Error::GridMismatch(
                "discretized grid does not match mask".into(),
            ));
        }
        let (lo, hi) = mask.bounding_box().ok_or(Error::EmptyMask)?;
        let dims = [
            hi[0] - lo[0] + 1,
            hi[1] - lo[1] + 1,
            hi[2] - lo[2] + 1,
        ];
        let mut levels = vec![0u32; dims[0] * dims[1] * dims[2]];
        let mut n_voxels = 0usize;
        for z in 0..dims[2] {
            for y in 0..dims[1] {
                for x in 0..dims[0] {
                    let src = [x + lo[0], y + lo[1], z + lo[2]];
                    if mask.contains(src[0], src[1], src[2]) {
                        let b = disc.bin_at(src[0], src[1], src[2]);
                        levels[x + dims[0] * (y + dims[1] * z)] = b;
                        n_voxels += 1;
                    }
                }
            }
        }
        Ok(LevelGrid {
            dims,
            levels,
            n_levels: disc.n_levels(),
            n_voxels,
        })
    }

    /// Build directly from a level array (tests, oracles).
    pub fn from_levels(dims: [usize; 3], levels: Vec<u32>) -> Self {
        let n_levels = levels.iter().copied().max().unwrap_or(0);
        let n_voxels = levels.iter().filter(|&&l| l > 0).count();
        LevelGrid {
            dims,
            levels,
            n_levels,
            n_voxels,
        }
    }

    #[inline]
    pub fn level(&self, x: usize, y: usize, z: usize) -> u32 {
        self.levels[x + self.dims[0] * (y + self.dims[1] * z)]
    }

    #[inline]
    pub fn level_at_offset(&self, x: i64, y: i64, z: i64) -> u32 {
        if x < 0
            || y < 0
            || z < 0
            || x >= self.dims[0] as i64
            || y >= self.dims[1] as i64
            || z >= self.dims[2] as i64
        {
            0
        } else {
            self.levels[x as usize + self.dims[0] * (y as usize + self.dims[1] * z as usize)]
        }
    }
}

/// The 94 features of one (image, compartment) block, unprefixed.
pub fn block_features(
    v: &Volume,
    mask: &VoxelMask,
    disc: &DiscretizedVolume,
) -> Result<FeatureMap> {
    let grid = LevelGrid::from_discretized(disc, mask)?;
    let mut out = FeatureMap::new();
    out.extend_prefixed("firstorder_", firstorder::first_order_features(v, mask, disc)?);
    out.extend_prefixed("glcm_", glcm::glcm_features(&grid));
    out.extend_prefixed("glrlm_", glrlm::glrlm_features(&grid));
    out.extend_prefixed("glszm_", glszm::glszm_features(&grid));
    out.extend_prefixed("ngtdm_", ngtdm::ngtdm_features(&grid));
    out.extend_prefixed("gldm_", gldm::gldm_features(&grid, 0));
    Ok(out)
}

/// Zero-valued block with the same 94 names, used when a compartment fails
/// the minimum-size gate.
pub fn zero_block_features() -> FeatureMap {
    let mut out = FeatureMap::new();
    for name in firstorder::FEATURE_NAMES {
        out.push(format!("firstorder_{name}"), 0.0);
    }
    for name in glcm::FEATURE_NAMES {
        out.push(format!("glcm_{name}"), 0.0);
    }
    for name in glrlm::FEATURE_NAMES {
        out.push(format!("glrlm_{name}"), 0.0);
    }
    for name in glszm::FEATURE_NAMES {
        out.push(format!("glszm_{name}"), 0.0);
    }
    for name in ngtdm::FEATURE_NAMES {
        out.push(format!("ngtdm_{name}"), 0.0);
    }
    for name in gldm::FEATURE_NAMES {
        out.push(format!("gldm_{name}"), 0.0);
    }
    out
}

/// Per-subject intensity block: 94 features x 4 images x 3 compartments.
///
/// Preprocessing per image: z-score over the brain region (nonzero voxels),
/// LoG filter, then per-compartment discretization. Compartments below the
/// minimum mask size yield zero-filled features and a warning.
pub fn intensity_feature_block(
    images: &[(MrSequence, Volume); 4],
    mask: &SegmentationMask,
    bin_width: f64,
    log_sigma: f64,
    min_mask_size: usize,
) -> Result<(FeatureMap, Vec<String>)> {
    for (seq, v) in images.iter() {
        if !mask.same_grid(v) {
            return Err(Error::GridMismatch(format!(
                "{} image grid differs from segmentation grid",
                seq.token()
            )));
        }
    }

    // preprocess the four images in parallel; results are order-stable
    let processed: Vec<Result<(MrSequence, Volume)>> = images
        .par_iter()
        .map(|(seq, v)| {
            let brain = VoxelMask::nonzero_of(v);
            let normalized = preproc::zscore_normalize(v, &brain)?;
            let filtered = preproc::log_filter(&normalized, log_sigma)?;
            Ok((*seq, filtered))
        })
        .collect();
    let mut filtered = Vec::with_capacity(4);
    for p in processed {
        filtered.push(p?);
    }

    let compartments: Vec<(Compartment, VoxelMask)> = Compartment::tumor_compartments()
        .into_iter()
        .map(|c| (c, mask.compartment(c)))
        .collect();

    // 12 (compartment, image) blocks, computed in parallel, assembled in order
    let pairs: Vec<(usize, usize)> = (0..compartments.len())
        .flat_map(|c| (0..filtered.len()).map(move |i| (c, i)))
        .collect();
    let blocks: Vec<Result<(String, Option<FeatureMap>)>> = pairs
        .par_iter()
        .map(|&(ci, ii)| {
            let (comp, cmask) = &compartments[ci];
            let (seq, image) = &filtered[ii];
            let prefix = format!("{}_{}_", comp.token(), seq.token());
            if !preproc::validate_mask(cmask, min_mask_size) {
                return Ok((prefix, None));
            }
            let disc = preproc::discretize(image, cmask, bin_width)?;
            let feats = block_features(image, cmask, &disc)?;
            Ok((prefix, Some(feats)))
        })
        .collect();

    let mut out = FeatureMap::new();
    let mut warnings = Vec::new();
    for b in blocks {
        let (prefix, feats) = b?;
        match feats {
            Some(f) => out.extend_prefixed(&prefix, f),
            None => {
                warnings.push(format!(
                    "compartment block {prefix} below minimum mask size; features zero-filled"
                ));
                out.extend_prefixed(&prefix, zero_block_features());
            }
        }
    }
    Ok((out, warnings))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn directions_are_unique_and_cover_26() {
        let mut seen = std::collections::BTreeSet::new();
        for d in DIRECTIONS_13 {
            assert!(seen.insert(d));
            assert!(!seen.contains(&[-d[0], -d[1], -d[2]]));
            assert!(d.iter().any(|&c| c != 0));
            assert!(d.iter().all(|&c| (-1..=1).contains(&c)));
        }
        assert_eq!(seen.len(), 13);
        assert_eq!(neighbors_26().len(), 26);
    }

    #[test]
    fn zero_block_has_94_names() {
        let z = zero_block_features();
        assert_eq!(z.len(), 94);
        let names: std::collections::BTreeSet<&str> = z.names().collect();
        assert_eq!(names.len(), 94);
    }
}
