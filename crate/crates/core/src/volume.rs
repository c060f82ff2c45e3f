//! 3-D scalar volumes, segmentation masks, and voxel-set helpers.
//!
//! Voxel data is stored x-fastest (NIfTI order): `index = x + nx*(y + ny*z)`.
//! All types are immutable after construction and cheap to share across
//! threads.

use std::collections::BTreeMap;

use crate::error::{Error, Result};

/// Tumor sub-compartments plus background.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Compartment {
    /// Enhancing tumor.
    EnhancingTumor,
    /// Peritumoral edema.
    Edema,
    /// Necrosis combined with non-enhancing tumor.
    NcrNet,
    Background,
}

impl Compartment {
    /// Token used in feature names.
    pub fn token(self) -> &'static str {
        match self {
            Compartment::EnhancingTumor => "ET",
            Compartment::Edema => "ED",
            Compartment::NcrNet => "NCRNET",
            Compartment::Background => "BG",
        }
    }

    /// The three tumor compartments, in feature-name order.
    pub fn tumor_compartments() -> [Compartment; 3] {
        [
            Compartment::EnhancingTumor,
            Compartment::Edema,
            Compartment::NcrNet,
        ]
    }
}

/// A 3-D scalar grid with voxel spacing and a voxel-to-world affine.
#[derive(Debug, Clone, PartialEq)]
pub struct Volume {
    dims: [usize; 3],
    spacing: [f64; 3],
    affine: [[f64; 4]; 4],
    data: Vec<f64>,
}

impl Volume {
    pub fn new(
        dims: [usize; 3],
        spacing: [f64; 3],
        affine: [[f64; 4]; 4],
        data: Vec<f64>,
    ) -> Result<Self> {
        let n = dims[0]
            .checked_mul(dims[1])
            .and_then(|p| p.checked_mul(dims[2]))
            .ok_or_else(|| Error::Geometry("dimension product overflows".into()))?;
        if dims.iter().any(|&d| d == 0) {
            return Err(Error::Geometry("all dimensions must be positive".into()));
        }
        if n != data.len() {
            return Err(Error::Geometry(format!(
                "dims {:?} imply {} voxels but data has {}",
                dims,
                n,
                data.len()
            )));
        }
        if spacing.iter().any(|&s| !(s > 0.0) || !s.is_finite()) {
            return Err(Error::Geometry(format!(
                "spacing must be strictly positive, got {:?}",
                spacing
            )));
        }
        if affine[3] != [0.0, 0.0, 0.0, 1.0] {
            return Err(Error::Geometry(
                "affine last row must be (0,0,0,1)".into(),
            ));
        }
        Ok(Volume {
            dims,
            spacing,
            affine,
            data,
        })
    }

    /// Volume with a diagonal affine built from the spacing (world = voxel * spacing).
    pub fn from_parts(dims: [usize; 3], spacing: [f64; 3], data: Vec<f64>) -> Result<Self> {
        let affine = diagonal_affine(spacing);
        Volume::new(dims, spacing, affine, data)
    }

    pub fn dims(&self) -> [usize; 3] {
        self.dims
    }

    pub fn spacing(&self) -> [f64; 3] {
        self.spacing
    }

    pub fn affine(&self) -> &[[f64; 4]; 4] {
        &self.affine
    }

    pub fn data(&self) -> &[f64] {
        &self.data
    }

    pub fn len(&self) -> usize {
        self.data.len()
    }

    pub fn is_empty(&self) -> bool {
        self.data.is_empty()
    }

    #[inline]
    pub fn index(&self, x: usize, y: usize, z: usize) -> usize {
        x + self.dims[0] * (y + self.dims[1] * z)
    }

    #[inline]
    pub fn get(&self, x: usize, y: usize, z: usize) -> f64 {
        self.data[self.index(x, y, z)]
    }

    /// Voxel volume in mm^3.
    pub fn voxel_volume(&self) -> f64 {
        self.spacing[0] * self.spacing[1] * self.spacing[2]
    }

    /// World coordinates of a voxel center.
    pub fn voxel_to_world(&self, v: [f64; 3]) -> [f64; 3] {
        apply_affine(&self.affine, v)
    }

    /// Rebuild with the same geometry but new data.
    pub fn with_data(&self, data: Vec<f64>) -> Result<Self> {
        Volume::new(self.dims, self.spacing, self.affine, data)
    }

    /// Trilinear sample at a (fractional) voxel coordinate; `None` outside the grid.
    pub fn sample_trilinear(&self, p: [f64; 3]) -> Option<f64> {
        let [nx, ny, nz] = self.dims;
        if p.iter().any(|c| !c.is_finite()) {
            return None;
        }
        if p[0] < 0.0 || p[1] < 0.0 || p[2] < 0.0 {
            return None;
        }
        if p[0] > (nx - 1) as f64 || p[1] > (ny - 1) as f64 || p[2] > (nz - 1) as f64 {
            return None;
        }
        let x0 = (p[0].floor() as usize).min(nx - 1);
        let y0 = (p[1].floor() as usize).min(ny - 1);
        let z0 = (p[2].floor() as usize).min(nz - 1);
        let x1 = (x0 + 1).min(nx - 1);
        let y1 = (y0 + 1).min(ny - 1);
        let z1 = (z0 + 1).min(nz - 1);
        let fx = p[0] - x0 as f64;
        let fy = p[1] - y0 as f64;
        let fz = p[2] - z0 as f64;
        let c000 = self.get(x0, y0, z0);
        let c100 = self.get(x1, y0, z0);
        let c010 = self.get(x0, y1, z0);
        let c110 = self.get(x1, y1, z0);
        let c001 = self.get(x0, y0, z1);
        let c101 = self.get(x1, y0, z1);
        let c011 = self.get(x0, y1, z1);
        let c111 = self.get(x1, y1, z1);
        let c00 = c000 + (c100 - c000) * fx;
        let c10 = c010 + (c110 - c010) * fx;
        let c01 = c001 + (c101 - c001) * fx;
        let c11 = c011 + (c111 - c011) * fx;
        let c0 = c00 + (c10 - c00) * fy;
        let c1 = c01 + (c11 - c01) * fy;
        Some(c0 + (c1 - c0) * fz)
    }
}

/// Integer-labeled grid distinguishing tumor sub-compartments.
#[derive(Debug, Clone, PartialEq)]
pub struct SegmentationMask {
    dims: [usize; 3],
    spacing: [f64; 3],
    affine: [[f64; 4]; 4],
    labels: Vec<u16>,
    semantics: BTreeMap<u16, Compartment>,
}

impl SegmentationMask {
    pub fn new(
        dims: [usize; 3],
        spacing: [f64; 3],
        affine: [[f64; 4]; 4],
        labels: Vec<u16>,
        semantics: BTreeMap<u16, Compartment>,
    ) -> Result<Self> {
        // reuse the geometry checks
        Volume::new(dims, spacing, affine, vec![0.0; labels.len()])?;
        for &l in &labels {
            if l != 0 && !semantics.contains_key(&l) {
                return Err(Error::UnknownLabel(l));
            }
        }
        Ok(SegmentationMask {
            dims,
            spacing,
            affine,
            labels,
            semantics,
        })
    }

    pub fn dims(&self) -> [usize; 3] {
        self.dims
    }

    pub fn spacing(&self) -> [f64; 3] {
        self.spacing
    }

    pub fn affine(&self) -> &[[f64; 4]; 4] {
        &self.affine
    }

    pub fn labels(&self) -> &[u16] {
        &self.labels
    }

    pub fn semantics(&self) -> &BTreeMap<u16, Compartment> {
        &self.semantics
    }

    pub fn same_grid(&self, v: &Volume) -> bool {
        self.dims == v.dims() && self.spacing == v.spacing() && &self.affine == v.affine()
    }

    /// Boolean lattice of one compartment.
    pub fn compartment(&self, c: Compartment) -> VoxelMask {
        let mut data = vec![false; self.labels.len()];
        for (i, &l) in self.labels.iter().enumerate() {
            if l != 0 && self.semantics.get(&l) == Some(&c) {
                data[i] = true;
            }
        }
        VoxelMask {
            dims: self.dims,
            spacing: self.spacing,
            data,
        }
    }

    /// Union of all nonzero labels (whole tumor).
    pub fn whole_tumor(&self) -> VoxelMask {
        let data = self.labels.iter().map(|&l| l != 0).collect();
        VoxelMask {
            dims: self.dims,
            spacing: self.spacing,
            data,
        }
    }
}

/// A boolean voxel lattice tied to a grid; the "voxel set" of the module APIs.
#[derive(Debug, Clone, PartialEq)]
pub struct VoxelMask {
    dims: [usize; 3],
    spacing: [f64; 3],
    data: Vec<bool>,
}

impl VoxelMask {
    pub fn new(dims: [usize; 3], spacing: [f64; 3], data: Vec<bool>) -> Result<Self> {
        Volume::new(dims, spacing, diagonal_affine(spacing), vec![0.0; data.len()])?;
        Ok(VoxelMask {
            dims,
            spacing,
            data,
        })
    }

    /// All-false mask on the given grid.
    pub fn empty(dims: [usize; 3], spacing: [f64; 3]) -> Self {
        VoxelMask {
            dims,
            spacing,
            data: vec![false; dims[0] * dims[1] * dims[2]],
        }
    }

    /// Nonzero voxels of a volume (the brain region of a skull-stripped image).
    pub fn nonzero_of(v: &Volume) -> Self {
        VoxelMask {
            dims: v.dims(),
            spacing: v.spacing(),
            data: v.data().iter().map(|&x| x != 0.0).collect(),
        }
    }

    pub fn dims(&self) -> [usize; 3] {
        self.dims
    }

    pub fn spacing(&self) -> [f64; 3] {
        self.spacing
    }

    pub fn data(&self) -> &[bool] {
        &self.data
    }

    #[inline]
    pub fn contains_index(&self, idx: usize) -> bool {
        self.data[idx]
    }

    #[inline]
    pub fn contains(&self, x: usize, y: usize, z: usize) -> bool {
        self.data[x + self.dims[0] * (y + self.dims[1] * z)]
    }

    pub fn count(&self) -> usize {
        self.data.iter().filter(|&&b| b).count()
    }

    pub fn is_empty(&self) -> bool {
        !self.data.iter().any(|&b| b)
    }

    /// Flat indices of the set voxels, ascending.
    pub fn indices(&self) -> Vec<usize> {
        self.data
            .iter()
            .enumerate()
            .filter_map(|(i, &b)| b.then_some(i))
            .collect()
    }

    /// Voxel coordinates of the set voxels, in index order.
    pub fn coords(&self) -> Vec<[usize; 3]> {
        let [nx, ny, _] = self.dims;
        self.data
            .iter()
            .enumerate()
            .filter_map(|(i, &b)| {
                b.then(|| {
                    let x = i % nx;
                    let y = (i / nx) % ny;
                    let z = i / (nx * ny);
                    [x, y, z]
                })
            })
            .collect()
    }

    /// Inclusive bounding box `(lo, hi)`; `None` when empty.
    pub fn bounding_box(&self) -> Option<([usize; 3], [usize; 3])> {
        let mut lo = [usize::MAX; 3];
        let mut hi = [0usize; 3];
        let mut any = false;
        for c in self.coords() {
            any = true;
            for a in 0..3 {
                lo[a] = lo[a].min(c[a]);
                hi[a] = hi[a].max(c[a]);
            }
        }
        any.then_some((lo, hi))
    }

    /// In-mask values of a volume on the same grid, in index order.
    pub fn extract_values(&self, v: &Volume) -> Vec<f64> {
        self.data
            .iter()
            .zip(v.data())
            .filter_map(|(&b, &x)| b.then_some(x))
            .collect()
    }
}

/// Diagonal voxel-to-world affine from spacing.
pub fn diagonal_affine(spacing: [f64; 3]) -> [[f64; 4]; 4] {
    [
        [spacing[0], 0.0, 0.0, 0.0],
        [0.0, spacing[1], 0.0, 0.0],
        [0.0, 0.0, spacing[2], 0.0],
        [0.0, 0.0, 0.0, 1.0],
    ]
}

/// Apply a 4x4 affine to a 3-vector (homogeneous w = 1).
pub fn apply_affine(m: &[[f64; 4]; 4], v: [f64; 3]) -> [f64; 3] {
    let mut out = [0.0; 3];
    for (r, o) in out.iter_mut().enumerate() {
        *o = m[r][0] * v[0] + m[r][1] * v[1] + m[r][2] * v[2] + m[r][3];
    }
    out
}

/// Invert a 4x4 affine with last row (0,0,0,1): invert the 3x3 block, negate
/// the translation through it.
pub fn invert_affine(m: &[[f64; 4]; 4]) -> Result<[[f64; 4]; 4]> {
    let a = [
        [m[0][0], m[0][1], m[0][2]],
        [m[1][0], m[1][1], m[1][2]],
        [m[2][0], m[2][1], m[2][2]],
    ];
    let det = a[0][0] * (a[1][1] * a[2][2] - a[1][2] * a[2][1])
        - a[0][1] * (a[1][0] * a[2][2] - a[1][2] * a[2][0])
        + a[0][2] * (a[1][0] * a[2][1] - a[1][1] * a[2][0]);
    if det.abs() < 1e-300 {
        return Err(Error::Geometry("affine is singular".into()));
    }
    let inv = [
        [
            (a[1][1] * a[2][2] - a[1][2] * a[2][1]) / det,
            (a[0][2] * a[2][1] - a[0][1] * a[2][2]) / det,
            (a[0][1] * a[1][2] - a[0][2] * a[1][1]) / det,
        ],
        [
            (a[1][2] * a[2][0] - a[1][0] * a[2][2]) / det,
            (a[0][0] * a[2][2] - a[0][2] * a[2][0]) / det,
            (a[0][2] * a[1][0] - a[0][0] * a[1][2]) / det,
        ],
        [
            (a[1][0] * a[2][1] - a[1][1] * a[2][0]) / det,
            (a[0][1] * a[2][0] - a[0][0] * a[2][1]) / det,
            (a[0][0] * a[1][1] - a[0][1] * a[1][0]) / det,
        ],
    ];
    let t = [m[0][3], m[1][3], m[2][3]];
    let mut out = [[0.0; 4]; 4];
    for r in 0..3 {
        out[r][..3].copy_from_slice(&inv[r]);
        out[r][3] = -(inv[r][0] * t[0] + inv[r][1] * t[1] + inv[r][2] * t[2]);
    }
    out[3] = [0.0, 0.0, 0.0, 1.0];
    Ok(out)
}

/// Multiply two 4x4 matrices.
pub fn matmul_affine(a: &[[f64; 4]; 4], b: &[[f64; 4]; 4]) -> [[f64; 4]; 4] {
    let mut out = [[0.0; 4]; 4];
    for r in 0..4 {
        for c in 0..4 {
            out[r][c] = (0..4).map(|k| a[r][k] * b[k][c]).sum();
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn volume_invariants_enforced() {
        assert!(Volume::from_parts([2, 2, 2], [1.0, 1.0, 1.0], vec![0.0; 8]).is_ok());
        assert!(Volume::from_parts([2, 2, 2], [1.0, 1.0, 1.0], vec![0.0; 7]).is_err());
        assert!(Volume::from_parts([2, 2, 2], [0.0, 1.0, 1.0], vec![0.0; 8]).is_err());
        let bad_affine = [[1.0, 0.0, 0.0, 0.0]; 4];
        assert!(Volume::new([1, 1, 1], [1.0; 3], bad_affine, vec![0.0]).is_err());
    }

    #[test]
    fn mask_rejects_unknown_label() {
        let mut sem = BTreeMap::new();
        sem.insert(1, Compartment::NcrNet);
        let err = SegmentationMask::new([1, 1, 2], [1.0; 3], diagonal_affine([1.0; 3]), vec![1, 7], sem);
        assert!(matches!(err, Err(Error::UnknownLabel(7))));
    }

    #[test]
    fn affine_roundtrip() {
        let m = [
            [1.5, 0.1, 0.0, 3.0],
            [0.0, 2.0, 0.2, -1.0],
            [0.1, 0.0, 1.0, 4.0],
            [0.0, 0.0, 0.0, 1.0],
        ];
        let inv = invert_affine(&m).unwrap();
        let p = [3.0, -2.0, 5.0];
        let back = apply_affine(&inv, apply_affine(&m, p));
        for a in 0..3 {
            assert!((back[a] - p[a]).abs() < 1e-12);
        }
    }

    #[test]
    fn trilinear_matches_corners_and_midpoint() {
        let v = Volume::from_parts([2, 2, 2], [1.0; 3], vec![0.0, 1.0, 2.0, 3.0, 4.0, 5.0, 6.0, 7.0])
            .unwrap();
        assert_eq!(v.sample_trilinear([0.0, 0.0, 0.0]), Some(0.0));
        assert_eq!(v.sample_trilinear([1.0, 1.0, 1.0]), Some(7.0));
        assert_eq!(v.sample_trilinear([0.5, 0.5, 0.5]), Some(3.5));
        assert_eq!(v.sample_trilinear([-0.1, 0.0, 0.0]), None);
    }
}
