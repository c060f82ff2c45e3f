//! Small dense linear-algebra helpers: row-major matrix, Householder QR
//! least squares, and a cyclic Jacobi eigensolver for symmetric matrices.
//! Problem sizes here are tiny (p <= a few dozen after feature selection),
//! so clarity and determinism win over blocked algorithms.

/// Dense row-major matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct Mat {
    pub rows: usize,
    pub cols: usize,
    pub data: Vec<f64>,
}

impl Mat {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Mat {
            rows,
            cols,
            data: vec![0.0; rows * cols],
        }
    }

    pub fn from_rows(rows: Vec<Vec<f64>>) -> Self {
        let r = rows.len();
        let c = rows.first().map_or(0, |row| row.len());
        let mut data = Vec::with_capacity(r * c);
        for row in rows {
            assert_eq!(row.len(), c, "ragged rows");
            data.extend(row);
        }
        Mat { rows: r, cols: c, data }
    }

    #[inline]
    pub fn get(&self, r: usize, c: usize) -> f64 {
        self.data[r * self.cols + c]
    }

    #[inline]
    pub fn set(&mut self, r: usize, c: usize, v: f64) {
        self.data[r * self.cols + c] = v;
    }

    pub fn row(&self, r: usize) -> &[f64] {
        &self.data[r * self.cols..(r + 1) * self.cols]
    }

    /// `self^T self` (cols x cols), symmetric.
    pub fn gram(&self) -> Mat {
        let p = self.cols;
        let mut g = Mat::zeros(p, p);
        for r in 0..self.rows {
            let row = self.row(r);
            for i in 0..p {
                let xi = row[i];
                if xi == 0.0 {
                    continue;
                }
                for j in i..p {
                    g.data[i * p + j] += xi * row[j];
                }
            }
        }
        for i in 0..p {
            for j in 0..i {
                g.data[i * p + j] = g.data[j * p + i];
            }
        }
        g
    }

    /// `self^T v` (length cols).
    pub fn t_matvec(&self, v: &[f64]) -> Vec<f64> {
        let mut out = vec![0.0; self.cols];
        for r in 0..self.rows {
            let row = self.row(r);
            let s = v[r];
            if s == 0.0 {
                continue;
            }
            for (o, &x) in out.iter_mut().zip(row) {
                *o += s * x;
            }
        }
        out
    }

    /// `self v` (length rows).
    pub fn matvec(&self, v: &[f64]) -> Vec<f64> {
        (0..self.rows)
            .map(|r| dot(self.row(r), v))
            .collect()
    }
}

#[inline]
pub fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

/// Least-squares solve of `X b = y` via Householder QR. For rank-deficient
/// designs falls back to the minimum-norm solution through the
/// eigendecomposition pseudo-inverse of the Gram matrix.
pub fn solve_least_squares(x: &Mat, y: &[f64]) -> Vec<f64> {
    assert_eq!(x.rows, y.len());
    if x.cols == 0 {
        return Vec::new();
    }
    if x.rows >= x.cols {
        if let Some(b) = qr_solve(x, y) {
            return b;
        }
    }
    pinv_solve(x, y)
}

fn qr_solve(x: &Mat, y: &[f64]) -> Option<Vec<f64>> {
    let (m, n) = (x.rows, x.cols);
    let mut a = x.data.clone();
    let mut b = y.to_vec();
    let col_scale: f64 = a.iter().map(|v| v * v).sum::<f64>().sqrt().max(1e-300);
    for k in 0..n {
        // Householder vector for column k
        let mut norm = 0.0;
        for r in k..m {
            let v = a[r * n + k];
            norm += v * v;
        }
        let norm = norm.sqrt();
        if norm < 1e-12 * col_scale {
            return None; // effectively rank-deficient
        }
        let akk = a[k * n + k];
        let alpha = if akk >= 0.0 { -norm } else { norm };
        let mut v = vec![0.0; m - k];
        v[0] = akk - alpha;
        for r in k + 1..m {
            v[r - k] = a[r * n + k];
        }
        let vnorm2 = dot(&v, &v);
        if vnorm2 == 0.0 {
            continue;
        }
        a[k * n + k] = alpha;
        for r in k + 1..m {
            a[r * n + k] = 0.0;
        }
        // apply reflector to remaining columns and to b
        for c in k + 1..n {
            let mut s = 0.0;
            for r in k..m {
                s += v[r - k] * a[r * n + c];
            }
            let f = 2.0 * s / vnorm2;
            for r in k..m {
                a[r * n + c] -= f * v[r - k];
            }
        }
        let mut s = 0.0;
        for r in k..m {
            s += v[r - k] * b[r];
        }
        let f = 2.0 * s / vnorm2;
        for r in k..m {
            b[r] -= f * v[r - k];
        }
    }
    // back substitution on R
    let mut out = vec![0.0; n];
    for k in (0..n).rev() {
        let mut s = b[k];
        for c in k + 1..n {
            s -= a[k * n + c] * out[c];
        }
        let d = a[k * n + k];
        if d.abs() < 1e-14 * col_scale {
            return None;
        }
        out[k] = s / d;
    }
    Some(out)
}

/// Minimum-norm least squares via the pseudo-inverse of X^T X.
fn pinv_solve(x: &Mat, y: &[f64]) -> Vec<f64> {
    let g = x.gram();
    let rhs = x.t_matvec(y);
    let (vals, vecs) = jacobi_eigen(&g);
    let scale = vals.iter().cloned().fold(0.0f64, f64::max).max(1e-300);
    let tol = scale * 1e-12;
    let p = x.cols;
    let mut out = vec![0.0; p];
    for (k, &lam) in vals.iter().enumerate() {
        if lam <= tol {
            continue;
        }
        let mut proj = 0.0;
        for i in 0..p {
            proj += vecs.get(i, k) * rhs[i];
        }
        let coeff = proj / lam;
        for (i, o) in out.iter_mut().enumerate() {
            *o += coeff * vecs.get(i, k);
        }
    }
    out
}

/// Eigenvalues and eigenvectors of a symmetric matrix by the cyclic Jacobi
/// method. Returns eigenvalues descending; eigenvectors in matching columns.
pub fn jacobi_eigen(sym: &Mat) -> (Vec<f64>, Mat) {
    assert_eq!(sym.rows, sym.cols);
    let n = sym.rows;
    let mut a = sym.clone();
    let mut v = Mat::zeros(n, n);
    for i in 0..n {
        v.set(i, i, 1.0);
    }
    for _sweep in 0..100 {
        let mut off = 0.0;
        for i in 0..n {
            for j in i + 1..n {
                off += a.get(i, j) * a.get(i, j);
            }
        }
        if off <= 1e-30 {
            break;
        }
        for p in 0..n {
            for q in p + 1..n {
                let apq = a.get(p, q);
                if apq.abs() < 1e-300 {
                    continue;
                }
                let app = a.get(p, p);
                let aqq = a.get(q, q);
                let theta = (aqq - app) / (2.0 * apq);
                let t = if theta >= 0.0 {
                    1.0 / (theta + (1.0 + theta * theta).sqrt())
                } else {
                    -1.0 / (-theta + (1.0 + theta * theta).sqrt())
                };
                let c = 1.0 / (1.0 + t * t).sqrt();
                let s = t * c;
                for k in 0..n {
                    let akp = a.get(k, p);
                    let akq = a.get(k, q);
                    a.set(k, p, c * akp - s * akq);
                    a.set(k, q, s * akp + c * akq);
                }
                for k in 0..n {
                    let apk = a.get(p, k);
                    let aqk = a.get(q, k);
                    a.set(p, k, c * apk - s * aqk);
                    a.set(q, k, s * apk + c * aqk);
                }
                for k in 0..n {
                    let vkp = v.get(k, p);
                    let vkq = v.get(k, q);
                    v.set(k, p, c * vkp - s * vkq);
                    v.set(k, q, s * vkp + c * vkq);
                }
            }
        }
    }
    let mut order: Vec<usize> = (0..n).collect();
    let diag: Vec<f64> = (0..n).map(|i| a.get(i, i)).collect();
    order.sort_by(|&i, &j| diag[j].partial_cmp(&diag[i]).unwrap());
    let vals: Vec<f64> = order.iter().map(|&i| diag[i]).collect();
    let mut vecs = Mat::zeros(n, n);
    for (newc, &oldc) in order.iter().enumerate() {
        for r in 0..n {
            vecs.set(r, newc, v.get(r, oldc));
        }
    }
    (vals, vecs)
}
