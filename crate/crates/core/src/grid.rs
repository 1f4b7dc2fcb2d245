//! Scalar fields tabulated on regular Cartesian grids.
//!
//! [`SplineField`] is a tensor-product cubic B-spline interpolant with natural
//! end conditions; it is C^2 and provides analytic first and second partials.
//! [`TrilinearField`] is the cheap piecewise-linear counterpart. Both extend
//! the data by clamping coordinates to the grid box.

use serde::{Deserialize, Serialize};

use crate::contact::{frame_derivatives, Mat2, Potential};
use crate::group::Point;

/// Nodes `lo + i * h` for `i in 0..n` along each axis.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Grid3 {
    pub lo: [f64; 3],
    pub h: [f64; 3],
    pub n: [usize; 3],
}

impl Grid3 {
    pub fn spanning(lo: [f64; 3], hi: [f64; 3], n: [usize; 3]) -> Self {
        assert!(n.iter().all(|k| *k >= 2), "grid needs two nodes per axis");
        let h = [0, 1, 2].map(|a| (hi[a] - lo[a]) / (n[a] - 1) as f64);
        Grid3 { lo, h, n }
    }

    pub fn len(&self) -> usize {
        self.n[0] * self.n[1] * self.n[2]
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn node(&self, idx: usize) -> Point {
        let i = idx % self.n[0];
        let j = (idx / self.n[0]) % self.n[1];
        let k = idx / (self.n[0] * self.n[1]);
        Point::new(
            self.lo[0] + i as f64 * self.h[0],
            self.lo[1] + j as f64 * self.h[1],
            self.lo[2] + k as f64 * self.h[2],
        )
    }

    pub fn hi(&self) -> [f64; 3] {
        [0, 1, 2].map(|a| self.lo[a] + (self.n[a] - 1) as f64 * self.h[a])
    }

    pub fn contains(&self, p: Point) -> bool {
        let c = p.to_array();
        let hi = self.hi();
        (0..3).all(|a| c[a] >= self.lo[a] && c[a] <= hi[a])
    }

    /// Cell index and fractional offset along one axis, clamped to the box.
    /// The flag reports whether clamping happened.
    fn locate(&self, a: usize, x: f64) -> (usize, f64, bool) {
        let u = (x - self.lo[a]) / self.h[a];
        let max = (self.n[a] - 1) as f64;
        let (u, clamped) = if u < 0.0 {
            (0.0, true)
        } else if u > max {
            (max, true)
        } else {
            (u, false)
        };
        let i = (u.floor() as usize).min(self.n[a] - 2);
        (i, u - i as f64, clamped)
    }
}

/// Tensor cubic B-spline interpolant.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SplineField {
    pub grid: Grid3,
    /// Coefficients on the grid padded by one ghost node per side.
    coef: Vec<f64>,
}

fn prefilter_line(f: &[f64]) -> Vec<f64> {
    // c_0 = f_0, c_{n-1} = f_{n-1}, c_{i-1} + 4 c_i + c_{i+1} = 6 f_i inside.
    let n = f.len();
    let mut c = f.to_vec();
    if n <= 2 {
        return c;
    }
    let m = n - 2;
    let mut rhs: Vec<f64> = (1..n - 1).map(|i| 6.0 * f[i]).collect();
    rhs[0] -= f[0];
    rhs[m - 1] -= f[n - 1];
    let mut cp = vec![0.0; m];
    let mut dp = vec![0.0; m];
    cp[0] = 1.0 / 4.0;
    dp[0] = rhs[0] / 4.0;
    for i in 1..m {
        let denom = 4.0 - cp[i - 1];
        cp[i] = 1.0 / denom;
        dp[i] = (rhs[i] - dp[i - 1]) / denom;
    }
    let mut x = vec![0.0; m];
    x[m - 1] = dp[m - 1];
    for i in (0..m - 1).rev() {
        x[i] = dp[i] - cp[i] * x[i + 1];
    }
    c[1..n - 1].copy_from_slice(&x);
    c
}

fn weights(s: f64) -> ([f64; 4], [f64; 4], [f64; 4]) {
    let s2 = s * s;
    let s3 = s2 * s;
    let o = 1.0 - s;
    (
        [o * o * o / 6.0, (3.0 * s3 - 6.0 * s2 + 4.0) / 6.0, (-3.0 * s3 + 3.0 * s2 + 3.0 * s + 1.0) / 6.0, s3 / 6.0],
        [-0.5 * o * o, 0.5 * (3.0 * s2 - 4.0 * s), 0.5 * (-3.0 * s2 + 2.0 * s + 1.0), 0.5 * s2],
        [o, 3.0 * s - 2.0, 1.0 - 3.0 * s, s],
    )
}

impl SplineField {
    /// Interpolant of `values`, indexed with `x` fastest.
    pub fn from_values(grid: Grid3, values: &[f64]) -> Self {
        assert_eq!(values.len(), grid.len());
        let [nx, ny, nz] = grid.n;
        let (px, py, pz) = (nx + 2, ny + 2, nz + 2);
        let mut c = vec![0.0; px * py * pz];
        let at = |i: usize, j: usize, k: usize| (k * py + j) * px + i;
        for k in 0..nz {
            for j in 0..ny {
                for i in 0..nx {
                    c[at(i + 1, j + 1, k + 1)] = values[(k * ny + j) * nx + i];
                }
            }
        }
        // Filter and pad along x, then y, then t.
        for k in 1..=nz {
            for j in 1..=ny {
                let line: Vec<f64> = (1..=nx).map(|i| c[at(i, j, k)]).collect();
                let f = prefilter_line(&line);
                for (i, v) in f.iter().enumerate() {
                    c[at(i + 1, j, k)] = *v;
                }
                c[at(0, j, k)] = 2.0 * f[0] - f[1];
                c[at(nx + 1, j, k)] = 2.0 * f[nx - 1] - f[nx - 2];
            }
        }
        for k in 1..=nz {
            for i in 0..px {
                let line: Vec<f64> = (1..=ny).map(|j| c[at(i, j, k)]).collect();
                let f = prefilter_line(&line);
                for (j, v) in f.iter().enumerate() {
                    c[at(i, j + 1, k)] = *v;
                }
                c[at(i, 0, k)] = 2.0 * f[0] - f[1];
                c[at(i, ny + 1, k)] = 2.0 * f[ny - 1] - f[ny - 2];
            }
        }
        for j in 0..py {
            for i in 0..px {
                let line: Vec<f64> = (1..=nz).map(|k| c[at(i, j, k)]).collect();
                let f = prefilter_line(&line);
                for (k, v) in f.iter().enumerate() {
                    c[at(i, j, k + 1)] = *v;
                }
                c[at(i, j, 0)] = 2.0 * f[0] - f[1];
                c[at(i, j, nz + 1)] = 2.0 * f[nz - 1] - f[nz - 2];
            }
        }
        SplineField { grid, coef: c }
    }

    pub fn tabulate<F: FnMut(Point) -> f64>(grid: Grid3, mut f: F) -> Self {
        let values: Vec<f64> = (0..grid.len()).map(|i| f(grid.node(i))).collect();
        Self::from_values(grid, &values)
    }

    fn eval_inner(&self, p: Point, order: usize) -> (f64, [f64; 3], [[f64; 3]; 3]) {
        let c = p.to_array();
        let mut idx = [0usize; 3];
        let mut w = [[[0.0; 4]; 3]; 3];
        for a in 0..3 {
            let (i, s, clamped) = self.grid.locate(a, c[a]);
            idx[a] = i;
            let (b0, b1, b2) = weights(s);
            w[a][0] = b0;
            if !clamped {
                let inv = 1.0 / self.grid.h[a];
                w[a][1] = b1.map(|v| v * inv);
                w[a][2] = b2.map(|v| v * inv * inv);
            }
        }
        let [_, py, _] = self.grid.n.map(|k| k + 2);
        let px = self.grid.n[0] + 2;
        // Padded index of node i - 1 is i.
        let mut f = 0.0;
        let mut g = [0.0; 3];
        let mut h = [[0.0; 3]; 3];
        for kk in 0..4 {
            for jj in 0..4 {
                let base = ((idx[2] + kk) * py + idx[1] + jj) * px + idx[0];
                for ii in 0..4 {
                    let cv = self.coef[base + ii];
                    let (wx, wy, wz) = (w[0][0][ii], w[1][0][jj], w[2][0][kk]);
                    f += cv * wx * wy * wz;
                    if order >= 1 {
                        g[0] += cv * w[0][1][ii] * wy * wz;
                        g[1] += cv * wx * w[1][1][jj] * wz;
                        g[2] += cv * wx * wy * w[2][1][kk];
                    }
                    if order >= 2 {
                        h[0][0] += cv * w[0][2][ii] * wy * wz;
                        h[1][1] += cv * wx * w[1][2][jj] * wz;
                        h[2][2] += cv * wx * wy * w[2][2][kk];
                        h[0][1] += cv * w[0][1][ii] * w[1][1][jj] * wz;
                        h[0][2] += cv * w[0][1][ii] * wy * w[2][1][kk];
                        h[1][2] += cv * wx * w[1][1][jj] * w[2][1][kk];
                    }
                }
            }
        }
        h[1][0] = h[0][1];
        h[2][0] = h[0][2];
        h[2][1] = h[1][2];
        (f, g, h)
    }

    pub fn value(&self, p: Point) -> f64 {
        self.eval_inner(p, 0).0
    }

    /// Value and Cartesian gradient `(f_x, f_y, f_t)`.
    pub fn value_gradient(&self, p: Point) -> (f64, [f64; 3]) {
        let (f, g, _) = self.eval_inner(p, 1);
        (f, g)
    }

    /// Value, Cartesian gradient and Cartesian Hessian.
    pub fn derivatives(&self, p: Point) -> (f64, [f64; 3], [[f64; 3]; 3]) {
        self.eval_inner(p, 2)
    }
}

/// A spline field used as a potential; frame derivatives come from the
/// spline's analytic partials.
#[derive(Clone, Debug)]
pub struct TabulatedPotential {
    pub spline: SplineField,
    pub label: String,
}

impl Potential for TabulatedPotential {
    fn value(&self, p: Point) -> f64 {
        self.spline.value(p)
    }
    fn gradient(&self, p: Point) -> Option<[f64; 3]> {
        let (_, g) = self.spline.value_gradient(p);
        Some([g[0] + 2.0 * p.y * g[2], g[1] - 2.0 * p.x * g[2], g[2]])
    }
    fn horizontal_hessian(&self, p: Point) -> Option<Mat2> {
        let (_, g, h) = self.spline.derivatives(p);
        Some(frame_derivatives(p, g, h).1)
    }
    fn name(&self) -> String {
        self.label.clone()
    }
}

/// Piecewise trilinear interpolant.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TrilinearField {
    pub grid: Grid3,
    pub values: Vec<f64>,
}

impl TrilinearField {
    pub fn tabulate<F: FnMut(Point) -> f64>(grid: Grid3, mut f: F) -> Self {
        let values = (0..grid.len()).map(|i| f(grid.node(i))).collect();
        TrilinearField { grid, values }
    }

    pub fn value(&self, p: Point) -> f64 {
        let c = p.to_array();
        let mut idx = [0usize; 3];
        let mut s = [0.0; 3];
        for a in 0..3 {
            let (i, f, _) = self.grid.locate(a, c[a]);
            idx[a] = i;
            s[a] = f;
        }
        let [nx, ny, _] = self.grid.n;
        let mut out = 0.0;
        for dk in 0..2 {
            let wk = if dk == 0 { 1.0 - s[2] } else { s[2] };
            for dj in 0..2 {
                let wj = if dj == 0 { 1.0 - s[1] } else { s[1] };
                let base = ((idx[2] + dk) * ny + idx[1] + dj) * nx + idx[0];
                out += wk * wj * ((1.0 - s[0]) * self.values[base] + s[0] * self.values[base + 1]);
            }
        }
        out
    }
}
