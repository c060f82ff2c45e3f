//! Image normalization, LoG filtering, and fixed-bin-width discretization.
//!
//! The extraction pipeline applies, per MR image: z-score normalization over
//! the brain region (nonzero voxels), then a Laplacian-of-Gaussian filter at
//! a metric scale sigma, then per-compartment discretization with a fixed
//! bin width anchored at the in-mask minimum.

use crate::error::{Error, Result};
use crate::volume::{Volume, VoxelMask};

/// Grid of gray-level bin indices over a mask: 0 outside, 1..=n_levels inside.
#[derive(Debug, Clone)]
pub struct DiscretizedVolume {
    dims: [usize; 3],
    spacing: [f64; 3],
    bins: Vec<u32>,
    n_levels: u32,
}

impl DiscretizedVolume {
    pub fn dims(&self) -> [usize; 3] {
        self.dims
    }

    pub fn spacing(&self) -> [f64; 3] {
        self.spacing
    }

    /// Bin index per voxel; 0 marks out-of-mask voxels.
    pub fn bins(&self) -> &[u32] {
        &self.bins
    }

    /// Highest assigned bin index N_g.
    pub fn n_levels(&self) -> u32 {
        self.n_levels
    }

    #[inline]
    pub fn bin_at(&self, x: usize, y: usize, z: usize) -> u32 {
        self.bins[x + self.dims[0] * (y + self.dims[1] * z)]
    }
}

/// Z-score normalize over `region`: the affine map `(x - mean) / std` fitted
/// on the region (population std) is applied to every voxel.
pub fn zscore_normalize(v: &Volume, region: &VoxelMask) -> Result<Volume> {
    if region.dims() != v.dims() {
        return Err(Error::GridMismatch(format!(
            "region dims {:?} vs volume {:?}",
            region.dims(),
            v.dims()
        )));
    }
    let vals = region.extract_values(v);
    if vals.is_empty() {
        return Err(Error::EmptyMask);
    }
    let n = vals.len() as f64;
    let mean = vals.iter().sum::<f64>() / n;
    let var = vals.iter().map(|x| (x - mean) * (x - mean)).sum::<f64>() / n;
    let std = var.sqrt();
    if std == 0.0 || !std.is_finite() {
        return Err(Error::DegenerateImage);
    }
    let data = v.data().iter().map(|&x| (x - mean) / std).collect();
    v.with_data(data)
}

/// Sampled Gaussian, normalized to sum 1. Taps at voxel offsets `k*step` mm,
/// truncated at 4 sigma.
fn gaussian_kernel(sigma: f64, step: f64) -> Vec<f64> {
    let radius = ((4.0 * sigma) / step).ceil() as i64;
    let mut k: Vec<f64> = (-radius..=radius)
        .map(|i| {
            let d = i as f64 * step;
            (-0.5 * d * d / (sigma * sigma)).exp()
        })
        .collect();
    let sum: f64 = k.iter().sum();
    for v in &mut k {
        *v /= sum;
    }
    k
}

#[inline]
fn mirror(i: i64, n: i64) -> usize {
    // reflect around the edge samples: -1 -> 1, n -> n-2
    let mut i = i;
    if n == 1 {
        return 0;
    }
    let period = 2 * (n - 1);
    i = i.rem_euclid(period);
    if i >= n {
        i = period - i;
    }
    i as usize
}

/// Convolve one 1-D line (already gathered) with mirror padding.
fn convolve_line(line: &[f64], kernel: &[f64], out: &mut [f64]) {
    let n = line.len();
    let radius = kernel.len() / 2;
    let ni = n as i64;
    // interior: all taps in bounds
    let lo = radius.min(n);
    let hi = n.saturating_sub(radius);
    for (i, o) in out.iter_mut().enumerate().take(hi).skip(lo) {
        let mut acc = 0.0;
        let base = i - radius;
        for (t, &w) in kernel.iter().enumerate() {
            acc += w * line[base + t];
        }
        *o = acc;
    }
    let edge = |i: usize, out: &mut f64| {
        let mut acc = 0.0;
        for (t, &w) in kernel.iter().enumerate() {
            let p = mirror(i as i64 + t as i64 - radius as i64, ni);
            acc += w * line[p];
        }
        *out = acc;
    };
    for i in 0..lo {
        edge(i, &mut out[i]);
    }
    for i in hi.max(lo)..n {
        edge(i, &mut out[i]);
    }
}

fn convolve_axis(data: &[f64], dims: [usize; 3], axis: usize, kernel: &[f64]) -> Vec<f64> {
    let [nx, ny, nz] = dims;
    let mut out = vec![0.0; data.len()];
    let n_axis = dims[axis];
    let mut line = vec![0.0; n_axis];
    let mut conv = vec![0.0; n_axis];
    match axis {
        0 => {
            for row in 0..ny * nz {
                let start = row * nx;
                convolve_line(&data[start..start + nx], kernel, &mut out[start..start + nx]);
            }
        }
        1 => {
            for z in 0..nz {
                for x in 0..nx {
                    let base = x + nx * ny * z;
                    for y in 0..ny {
                        line[y] = data[base + nx * y];
                    }
                    convolve_line(&line, kernel, &mut conv);
                    for y in 0..ny {
                        out[base + nx * y] = conv[y];
                    }
                }
            }
        }
        _ => {
            let plane = nx * ny;
            for y in 0..ny {
                for x in 0..nx {
                    let base = x + nx * y;
                    for z in 0..nz {
                        line[z] = data[base + plane * z];
                    }
                    convolve_line(&line, kernel, &mut conv);
                    for z in 0..nz {
                        out[base + plane * z] = conv[z];
                    }
                }
            }
        }
    }
    out
}

/// Laplacian of Gaussian at metric scale `sigma` (mm): separable Gaussian
/// smoothing per axis (kernel sampled in mm via the voxel spacing, truncated
/// at 4 sigma) followed by the discrete 6-neighbor Laplacian in mm units.
/// Mirror padding at the boundary. Constant inputs map to exactly zero.
pub fn log_filter(v: &Volume, sigma: f64) -> Result<Volume> {
    if !sigma.is_finite() || sigma <= 0.0 {
        return Err(Error::InvalidParameter(format!(
            "log_filter sigma must be positive, got {sigma}"
        )));
    }
    let dims = v.dims();
    let spacing = v.spacing();
    let mut smooth = v.data().to_vec();
    for axis in 0..3 {
        let kernel = gaussian_kernel(sigma, spacing[axis]);
        if kernel.len() > 1 {
            smooth = convolve_axis(&smooth, dims, axis, &kernel);
        }
    }
    let [nx, ny, nz] = dims;
    let idx = |x: usize, y: usize, z: usize| x + nx * (y + ny * z);
    let inv2 = [
        1.0 / (spacing[0] * spacing[0]),
        1.0 / (spacing[1] * spacing[1]),
        1.0 / (spacing[2] * spacing[2]),
    ];
    let mut out = vec![0.0; smooth.len()];
    let strides = [1usize, nx, nx * ny];
    for z in 0..nz {
        for y in 0..ny {
            let interior_yz = y > 0 && y + 1 < ny && z > 0 && z + 1 < nz;
            for x in 0..nx {
                let i = idx(x, y, z);
                let c = smooth[i];
                let acc = if interior_yz && x > 0 && x + 1 < nx {
                    (smooth[i - 1] - 2.0 * c + smooth[i + 1]) * inv2[0]
                        + (smooth[i - strides[1]] - 2.0 * c + smooth[i + strides[1]]) * inv2[1]
                        + (smooth[i - strides[2]] - 2.0 * c + smooth[i + strides[2]]) * inv2[2]
                } else {
                    let pos = [x as i64, y as i64, z as i64];
                    let mut acc = 0.0;
                    for axis in 0..3 {
                        let n_axis = dims[axis] as i64;
                        let mut lo = pos;
                        lo[axis] = mirror(pos[axis] - 1, n_axis) as i64;
                        let mut hi = pos;
                        hi[axis] = mirror(pos[axis] + 1, n_axis) as i64;
                        let flo = smooth[idx(lo[0] as usize, lo[1] as usize, lo[2] as usize)];
                        let fhi = smooth[idx(hi[0] as usize, hi[1] as usize, hi[2] as usize)];
                        acc += (flo - 2.0 * c + fhi) * inv2[axis];
                    }
                    acc
                };
                out[i] = acc;
            }
        }
    }
    v.with_data(out)
}

/// Fixed-bin-width discretization anchored at the in-mask minimum:
/// `bin = floor((x - min) / width) + 1`.
pub fn discretize(v: &Volume, mask: &VoxelMask, bin_width: f64) -> Result<DiscretizedVolume> {
    if mask.dims() != v.dims() {
        return Err(Error::GridMismatch(format!(
            "mask dims {:?} vs volume {:?}",
            mask.dims(),
            v.dims()
        )));
    }
    if !(bin_width > 0.0) || !bin_width.is_finite() {
        return Err(Error::InvalidParameter(format!(
            "bin width must be positive, got {bin_width}"
        )));
    }
    let vals = mask.extract_values(v);
    if vals.is_empty() {
        return Err(Error::EmptyMask);
    }
    let min = vals.iter().cloned().fold(f64::INFINITY, f64::min);
    let max = vals.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
    let n_levels = (((max - min) / bin_width).floor() as u32) + 1;
    let mut bins = vec![0u32; v.len()];
    for (i, (&inside, &x)) in mask.data().iter().zip(v.data()).enumerate() {
        if inside {
            let b = (((x - min) / bin_width).floor() as i64 + 1).clamp(1, n_levels as i64);
            bins[i] = b as u32;
        }
    }
    Ok(DiscretizedVolume {
        dims: v.dims(),
        spacing: v.spacing(),
        bins,
        n_levels,
    })
}

/// Minimum-size gate for feature extraction on a compartment.
pub fn validate_mask(mask: &VoxelMask, min_size: usize) -> bool {
    mask.count() >= min_size
}
