//! Exact Euclidean distance transform on anisotropic grids
//! (Felzenszwalb-Huttenlocher lower-envelope algorithm, applied separably
//! over squared distances).

use crate::volume::VoxelMask;

const INF: f64 = 1e30;

/// 1-D squared-distance transform over samples at positions `i * step`.
/// Parabolas at INF (no site anywhere on their column) are excluded from the
/// lower envelope.
fn dt_1d(f: &[f64], step: f64, d: &mut [f64], v: &mut [usize], z: &mut [f64]) {
    let n = f.len();
    let x = |i: usize| i as f64 * step;
    let mut k = 0usize;
    let mut started = false;
    for q in 0..n {
        if f[q] >= INF {
            continue;
        }
        if !started {
            v[0] = q;
            z[0] = -INF;
            z[1] = INF;
            started = true;
            continue;
        }
        let mut s;
        loop {
            let p = v[k];
            s = ((f[q] + x(q) * x(q)) - (f[p] + x(p) * x(p))) / (2.0 * (x(q) - x(p)));
            if s <= z[k] {
                if k == 0 {
                    // envelope restart from q
                    v[0] = q;
                    z[0] = -INF;
                    z[1] = INF;
                    s = -INF;
                    break;
                }
                k -= 1;
            } else {
                break;
            }
        }
        if s > -INF {
            k += 1;
            v[k] = q;
            z[k] = s;
            z[k + 1] = INF;
        }
    }
    if !started {
        d[..n].fill(INF);
        return;
    }
    let mut k = 0usize;
    for q in 0..n {
        while z[k + 1] < x(q) {
            k += 1;
        }
        let p = v[k];
        let dx = x(q) - x(p);
        d[q] = dx * dx + f[p];
    }
}

/// Euclidean distance (mm) from every voxel to the nearest voxel of
/// `feature`. Voxels of `feature` get distance 0. When `feature` is empty
/// every distance is reported as infinity.
pub fn distance_to(feature: &VoxelMask) -> Vec<f64> {
    let [nx, ny, nz] = feature.dims();
    let [sx, sy, sz] = feature.spacing();
    let n = nx * ny * nz;
    let mut g: Vec<f64> = feature
        .data()
        .iter()
        .map(|&b| if b { 0.0 } else { INF })
        .collect();

    let max_dim = nx.max(ny).max(nz);
    let mut f = vec![0.0; max_dim];
    let mut d = vec![0.0; max_dim];
    let mut v = vec![0usize; max_dim];
    let mut z = vec![0.0; max_dim + 1];

    // x lines
    for row in 0..ny * nz {
        let start = row * nx;
        f[..nx].copy_from_slice(&g[start..start + nx]);
        dt_1d(&f[..nx], sx, &mut d[..nx], &mut v, &mut z);
        g[start..start + nx].copy_from_slice(&d[..nx]);
    }
    // y lines
    for zz in 0..nz {
        for x in 0..nx {
            let base = x + nx * ny * zz;
            for y in 0..ny {
                f[y] = g[base + nx * y];
            }
            dt_1d(&f[..ny], sy, &mut d[..ny], &mut v, &mut z);
            for y in 0..ny {
                g[base + nx * y] = d[y];
            }
        }
    }
    // z lines
    let plane = nx * ny;
    for y in 0..ny {
        for x in 0..nx {
            let base = x + nx * y;
            for zz in 0..nz {
                f[zz] = g[base + plane * zz];
            }
            dt_1d(&f[..nz], sz, &mut d[..nz], &mut v, &mut z);
            for zz in 0..nz {
                g[base + plane * zz] = d[zz];
            }
        }
    }
    debug_assert_eq!(g.len(), n);
    g.iter_mut().for_each(|x| *x = x.sqrt());
    g
}
