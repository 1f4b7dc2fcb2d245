//! Contact vector fields generated by scalar potentials.
//!
//! For a potential `phi` the field is `v = -1/4 Y(phi) X + 1/4 X(phi) Y + phi T`.
//! Its horizontal divergence is `T(phi)` and its horizontal strain satisfies
//! `2 |S_H v|_F = sqrt(2) |ZZ phi|` with `Z = (X - iY) / 2`.

use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::group::{hderiv, Direction, Point, QuadratureConfig};

pub type Mat2 = [[f64; 2]; 2];

/// A scalar potential. `gradient` returns `(X phi, Y phi, T phi)` and
/// `horizontal_hessian` returns `H[i][j] = X_i (X_j phi)` with `X_1 = X`,
/// `X_2 = Y`, when closed forms are available.
pub trait Potential: Send + Sync {
    fn value(&self, p: Point) -> f64;

    fn gradient(&self, _p: Point) -> Option<[f64; 3]> {
        None
    }

    fn horizontal_hessian(&self, _p: Point) -> Option<Mat2> {
        None
    }

    fn name(&self) -> String {
        "potential".into()
    }
}

/// Frame derivatives from Cartesian derivatives.
/// `g = (f_x, f_y, f_t)`, `h` the Cartesian Hessian in `(x, y, t)` order.
pub fn frame_derivatives(p: Point, g: [f64; 3], h: [[f64; 3]; 3]) -> ([f64; 3], Mat2) {
    let (x, y) = (p.x, p.y);
    let grad = [g[0] + 2.0 * y * g[2], g[1] - 2.0 * x * g[2], g[2]];
    let xx = h[0][0] + 4.0 * y * h[0][2] + 4.0 * y * y * h[2][2];
    let xy = h[0][1] - 2.0 * g[2] - 2.0 * x * h[0][2] + 2.0 * y * h[1][2] - 4.0 * x * y * h[2][2];
    let yx = h[0][1] + 2.0 * g[2] + 2.0 * y * h[1][2] - 2.0 * x * h[0][2] - 4.0 * x * y * h[2][2];
    let yy = h[1][1] - 4.0 * x * h[1][2] + 4.0 * x * x * h[2][2];
    (grad, [[xx, xy], [yx, yy]])
}

/// `phi = c`; its field is `c T`.
#[derive(Clone, Copy, Debug, Serialize, Deserialize)]
pub struct ConstantPotential(pub f64);

impl Potential for ConstantPotential {
    fn value(&self, _p: Point) -> f64 {
        self.0
    }
    fn gradient(&self, _p: Point) -> Option<[f64; 3]> {
        Some([0.0; 3])
    }
    fn horizontal_hessian(&self, _p: Point) -> Option<Mat2> {
        Some([[0.0; 2]; 2])
    }
    fn name(&self) -> String {
        format!("constant({})", self.0)
    }
}

/// `phi = c1 - 4 c2 y + 4 c3 x`, whose flow is left translation by
/// `s (c2, c3, c1)`.
#[derive(Clone, Copy, Debug, Serialize, Deserialize)]
pub struct TranslationPotential {
    pub c: [f64; 3],
}

impl TranslationPotential {
    pub fn generator(&self) -> Point {
        Point::new(self.c[1], self.c[2], self.c[0])
    }
}

impl Potential for TranslationPotential {
    fn value(&self, p: Point) -> f64 {
        self.c[0] - 4.0 * self.c[1] * p.y + 4.0 * self.c[2] * p.x
    }
    fn gradient(&self, _p: Point) -> Option<[f64; 3]> {
        Some([4.0 * self.c[2], -4.0 * self.c[1], 0.0])
    }
    fn horizontal_hessian(&self, _p: Point) -> Option<Mat2> {
        Some([[0.0; 2]; 2])
    }
    fn name(&self) -> String {
        format!("translation({:?})", self.c)
    }
}

/// `phi = -2 t log ||p||`; its flow contracts the gauge,
/// `||f_s(p)|| = ||p||^{exp(-s)}`.
#[derive(Clone, Copy, Debug, Default, Serialize, Deserialize)]
pub struct RadialStretch;

impl RadialStretch {
    /// Cartesian gradient and Hessian of `-(t / 2) log N`, `N = ||p||^4`.
    fn cartesian(&self, p: Point) -> Option<([f64; 3], [[f64; 3]; 3])> {
        let n = p.gauge4();
        if n == 0.0 {
            return None;
        }
        let r2 = p.x * p.x + p.y * p.y;
        let dn = [4.0 * p.x * r2, 4.0 * p.y * r2, 2.0 * p.t];
        let mut ddn = [[0.0; 3]; 3];
        ddn[0][0] = 4.0 * r2 + 8.0 * p.x * p.x;
        ddn[1][1] = 4.0 * r2 + 8.0 * p.y * p.y;
        ddn[0][1] = 8.0 * p.x * p.y;
        ddn[1][0] = ddn[0][1];
        ddn[2][2] = 2.0;
        let dl = dn.map(|d| d / n);
        let mut ddl = [[0.0; 3]; 3];
        for i in 0..3 {
            for j in 0..3 {
                ddl[i][j] = ddn[i][j] / n - dl[i] * dl[j];
            }
        }
        let ht = -0.5 * p.t;
        let g = [ht * dl[0], ht * dl[1], -0.5 * n.ln() + ht * dl[2]];
        let mut h = [[0.0; 3]; 3];
        for i in 0..3 {
            for j in 0..3 {
                h[i][j] = ht * ddl[i][j];
            }
        }
        // The t-derivative of the prefactor -t/2.
        for k in 0..3 {
            h[k][2] -= 0.5 * dl[k];
            h[2][k] -= 0.5 * dl[k];
        }
        Some((g, h))
    }
}

impl Potential for RadialStretch {
    fn value(&self, p: Point) -> f64 {
        let n = p.gauge4();
        if n == 0.0 {
            0.0
        } else {
            -0.5 * p.t * n.ln()
        }
    }
    fn gradient(&self, p: Point) -> Option<[f64; 3]> {
        Some(self.cartesian(p).map_or([0.0; 3], |(g, h)| frame_derivatives(p, g, h).0))
    }
    fn horizontal_hessian(&self, p: Point) -> Option<Mat2> {
        Some(self.cartesian(p).map_or([[0.0; 2]; 2], |(g, h)| frame_derivatives(p, g, h).1))
    }
    fn name(&self) -> String {
        "radial_stretch".into()
    }
}

/// `phi = a exp(-|p - c|^2 / s^2)` in Euclidean coordinates.
#[derive(Clone, Copy, Debug, Serialize, Deserialize)]
pub struct GaussianBump {
    pub amplitude: f64,
    pub center: [f64; 3],
    pub width: f64,
}

impl GaussianBump {
    fn cartesian(&self, p: Point) -> (f64, [f64; 3], [[f64; 3]; 3]) {
        let d = [p.x - self.center[0], p.y - self.center[1], p.t - self.center[2]];
        let s2 = self.width * self.width;
        let f = self.amplitude * (-(d[0] * d[0] + d[1] * d[1] + d[2] * d[2]) / s2).exp();
        let g = d.map(|di| -2.0 * di / s2 * f);
        let mut h = [[0.0; 3]; 3];
        for i in 0..3 {
            for j in 0..3 {
                h[i][j] = 4.0 * d[i] * d[j] / (s2 * s2) * f - if i == j { 2.0 / s2 * f } else { 0.0 };
            }
        }
        (f, g, h)
    }
}

impl Potential for GaussianBump {
    fn value(&self, p: Point) -> f64 {
        self.cartesian(p).0
    }
    fn gradient(&self, p: Point) -> Option<[f64; 3]> {
        let (_, g, h) = self.cartesian(p);
        Some(frame_derivatives(p, g, h).0)
    }
    fn horizontal_hessian(&self, p: Point) -> Option<Mat2> {
        let (_, g, h) = self.cartesian(p);
        Some(frame_derivatives(p, g, h).1)
    }
    fn name(&self) -> String {
        "gaussian".into()
    }
}

/// Polynomial `sum c x^a y^b t^c` with exponents per term.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct Polynomial {
    pub terms: Vec<(f64, [u32; 3])>,
}

impl Polynomial {
    fn partial(&self, p: Point, d: [u32; 3]) -> f64 {
        let c = p.to_array();
        self.terms
            .iter()
            .map(|(coef, e)| {
                let mut v = *coef;
                for a in 0..3 {
                    if d[a] > e[a] {
                        return 0.0;
                    }
                    for k in 0..d[a] {
                        v *= (e[a] - k) as f64;
                    }
                    v *= c[a].powi((e[a] - d[a]) as i32);
                }
                v
            })
            .sum()
    }

    fn cartesian(&self, p: Point) -> ([f64; 3], [[f64; 3]; 3]) {
        let unit = |a: usize| {
            let mut d = [0u32; 3];
            d[a] += 1;
            d
        };
        let g = [0, 1, 2].map(|a| self.partial(p, unit(a)));
        let mut h = [[0.0; 3]; 3];
        for i in 0..3 {
            for j in 0..3 {
                let mut d = unit(i);
                d[j] += 1;
                h[i][j] = self.partial(p, d);
            }
        }
        (g, h)
    }
}

impl Potential for Polynomial {
    fn value(&self, p: Point) -> f64 {
        self.partial(p, [0, 0, 0])
    }
    fn gradient(&self, p: Point) -> Option<[f64; 3]> {
        let (g, h) = self.cartesian(p);
        Some(frame_derivatives(p, g, h).0)
    }
    fn horizontal_hessian(&self, p: Point) -> Option<Mat2> {
        let (g, h) = self.cartesian(p);
        Some(frame_derivatives(p, g, h).1)
    }
    fn name(&self) -> String {
        "polynomial".into()
    }
}

/// Potential with frame derivatives taken analytically when the potential
/// provides them and by group finite differences otherwise.
#[derive(Clone)]
pub struct PotentialField {
    pub potential: Arc<dyn Potential>,
    pub fd_step: f64,
}

impl std::fmt::Debug for PotentialField {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "PotentialField({}, h = {})", self.potential.name(), self.fd_step)
    }
}

const DIRS: [Direction; 3] = [Direction::X, Direction::Y, Direction::T];

impl PotentialField {
    pub fn new<P: Potential + 'static>(p: P, cfg: &QuadratureConfig) -> Self {
        PotentialField { potential: Arc::new(p), fd_step: cfg.fd_step }
    }

    pub fn from_arc(potential: Arc<dyn Potential>, fd_step: f64) -> Self {
        PotentialField { potential, fd_step }
    }

    pub fn value(&self, p: Point) -> f64 {
        self.potential.value(p)
    }

    pub fn gradient(&self, p: Point) -> [f64; 3] {
        if let Some(g) = self.potential.gradient(p) {
            return g;
        }
        let f = |q: Point| self.potential.value(q);
        DIRS.map(|d| hderiv(f, p, d, self.fd_step).unwrap_or(f64::NAN))
    }

    pub fn horizontal_hessian(&self, p: Point) -> Mat2 {
        if let Some(h) = self.potential.horizontal_hessian(p) {
            return h;
        }
        let h = if self.potential.gradient(p).is_some() { self.fd_step } else { self.fd_step.max(1e-3) };
        let mut out = [[0.0; 2]; 2];
        for (i, di) in [Direction::X, Direction::Y].into_iter().enumerate() {
            for j in 0..2 {
                out[i][j] = hderiv(|q| self.gradient(q)[j], p, di, h).unwrap_or(f64::NAN);
            }
        }
        out
    }

    /// `ZZ phi = ((XX - YY) phi - i (XY + YX) phi) / 4` as `(re, im)`.
    pub fn zz(&self, p: Point) -> (f64, f64) {
        let h = self.horizontal_hessian(p);
        (0.25 * (h[0][0] - h[1][1]), -0.25 * (h[0][1] + h[1][0]))
    }
}

/// `v_phi` in Cartesian components.
#[derive(Clone, Debug)]
pub struct ContactField {
    pub source: PotentialField,
}

impl ContactField {
    pub fn new(source: PotentialField) -> Self {
        ContactField { source }
    }

    pub fn from_potential<P: Potential + 'static>(p: P, cfg: &QuadratureConfig) -> Self {
        ContactField::new(PotentialField::new(p, cfg))
    }

    /// `(v1, v2, v3) = (-Y phi / 4, X phi / 4, phi + 2y v1 - 2x v2)`.
    pub fn eval(&self, p: Point) -> [f64; 3] {
        let g = self.source.gradient(p);
        let phi = self.source.value(p);
        let v1 = -0.25 * g[1];
        let v2 = 0.25 * g[0];
        [v1, v2, phi + 2.0 * p.y * v1 - 2.0 * p.x * v2]
    }

    /// Field value together with `D_H v` and `T phi`, sharing one gradient.
    pub fn eval_with_differential(&self, p: Point) -> ([f64; 3], Mat2, f64) {
        let g = self.source.gradient(p);
        let phi = self.source.value(p);
        let v1 = -0.25 * g[1];
        let v2 = 0.25 * g[0];
        let v = [v1, v2, phi + 2.0 * p.y * v1 - 2.0 * p.x * v2];
        (v, self.dh_from_hessian(self.source.horizontal_hessian(p)), g[2])
    }

    fn dh_from_hessian(&self, h: Mat2) -> Mat2 {
        [[-0.25 * h[0][1], -0.25 * h[1][1]], [0.25 * h[0][0], 0.25 * h[1][0]]]
    }

    /// `D_H v = [[X v1, Y v1], [X v2, Y v2]]`.
    pub fn horizontal_differential(&self, p: Point) -> Mat2 {
        self.dh_from_hessian(self.source.horizontal_hessian(p))
    }

    /// Horizontal divergence `tr D_H v = T phi`.
    pub fn divergence(&self, p: Point) -> f64 {
        self.source.gradient(p)[2]
    }

    /// `D_H v` by group finite differences of the components.
    pub fn horizontal_differential_fd(&self, p: Point) -> Result<Mat2> {
        let h = self.source.fd_step.max(1e-4);
        let c = |i: usize| move |q: Point| self.eval(q)[i];
        Ok([
            [hderiv(c(0), p, Direction::X, h)?, hderiv(c(0), p, Direction::Y, h)?],
            [hderiv(c(1), p, Direction::X, h)?, hderiv(c(1), p, Direction::Y, h)?],
        ])
    }

    /// Symmetric trace-free part of `D_H v`.
    pub fn strain(&self, p: Point) -> Mat2 {
        strain_of(self.horizontal_differential(p))
    }
}

pub fn strain_of(d: Mat2) -> Mat2 {
    let a = 0.5 * (d[0][0] - d[1][1]);
    let b = 0.5 * (d[1][0] + d[0][1]);
    [[a, b], [b, -a]]
}

pub fn frobenius(m: Mat2) -> f64 {
    (m[0][0] * m[0][0] + m[0][1] * m[0][1] + m[1][0] * m[1][0] + m[1][1] * m[1][1]).sqrt()
}

/// Region on which strain statistics are gathered.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Region {
    Ball { center: [f64; 3], radius: f64 },
    Annulus { center: [f64; 3], inner: f64, outer: f64 },
}

impl Region {
    pub fn contains(&self, p: Point) -> bool {
        match *self {
            Region::Ball { center, radius } => p.dist(Point::from_array(center)) < radius,
            Region::Annulus { center, inner, outer } => {
                let d = p.dist(Point::from_array(center));
                d >= inner && d < outer
            }
        }
    }

    fn center_radius(&self) -> (Point, f64) {
        match *self {
            Region::Ball { center, radius } => (Point::from_array(center), radius),
            Region::Annulus { center, outer, .. } => (Point::from_array(center), outer),
        }
    }

    /// Cell centres of an `n^3` grid on the bounding box that fall in the region.
    pub fn grid(&self, n: usize) -> Vec<Point> {
        let (c, r) = self.center_radius();
        let (lo, hi) = crate::quadrature::ball_bounding_box(c, r);
        let mut out = Vec::new();
        for k in 0..n {
            for j in 0..n {
                for i in 0..n {
                    let f = |a: usize, idx: usize| lo[a] + (idx as f64 + 0.5) / n as f64 * (hi[a] - lo[a]);
                    let p = Point::new(f(0, i), f(1, j), f(2, k));
                    if self.contains(p) {
                        out.push(p);
                    }
                }
            }
        }
        out
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct GridMeta {
    pub region: Region,
    pub resolution: usize,
    pub points: usize,
}

/// Strain statistics of `v_phi` over a region.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct StrainReport {
    /// `sup sqrt(2) |ZZ phi|` over the grid.
    pub c: f64,
    pub grid: GridMeta,
    pub worst_point: [f64; 3],
    /// Largest `| 2 |S_H v|_F - sqrt(2) |ZZ phi| |` with `S_H v` from finite
    /// differences of the field components.
    pub max_identity_residual: f64,
    #[serde(skip)]
    pub points: Vec<Point>,
    #[serde(skip)]
    pub strain_frobenius: Vec<f64>,
    #[serde(skip)]
    pub zz_modulus: Vec<f64>,
}

pub fn strain(field: &ContactField, region: Region, resolution: usize) -> Result<StrainReport> {
    let points = region.grid(resolution);
    let mut frob = Vec::with_capacity(points.len());
    let mut zzm = Vec::with_capacity(points.len());
    let mut bad = Vec::new();
    let mut c = 0.0f64;
    let mut worst = Point::ORIGIN;
    let mut residual = 0.0f64;
    for &p in &points {
        let s = strain_of(field.horizontal_differential_fd(p)?);
        let (re, im) = field.source.zz(p);
        let z = re.hypot(im);
        let f = frobenius(s);
        if !(f.is_finite() && z.is_finite()) {
            bad.push(p);
            continue;
        }
        let zs = std::f64::consts::SQRT_2 * z;
        if zs > c {
            c = zs;
            worst = p;
        }
        residual = residual.max((2.0 * f - zs).abs());
        frob.push(f);
        zzm.push(z);
    }
    if !bad.is_empty() {
        return Err(Error::NonFinite(bad));
    }
    Ok(StrainReport {
        c,
        grid: GridMeta { region, resolution, points: points.len() },
        worst_point: worst.to_array(),
        max_identity_residual: residual,
        points,
        strain_frobenius: frob,
        zz_modulus: zzm,
    })
}

/// Cut-off profile `G_l` on `[0, inf)`: 1 on `[0, l]`, `P(G~_l)` on `[l, l']`,
/// 0 beyond, with `G~_l(r) = 1 - (log log r - log log l) / l`,
/// `P(z) = 6z^5 - 15z^4 + 10z^3` and `log l' = e^l log l`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct TruncationProfile {
    pub l: f64,
    pub log_l_prime: f64,
}

fn smoothstep(z: f64) -> (f64, f64) {
    let z = z.clamp(0.0, 1.0);
    let z2 = z * z;
    (z2 * z * (10.0 - 15.0 * z + 6.0 * z2), 30.0 * z2 * (1.0 - z) * (1.0 - z))
}

impl TruncationProfile {
    pub fn new(l: f64) -> Result<Self> {
        if !(l >= std::f64::consts::E && l.is_finite()) {
            return Err(Error::TruncationParameter(l));
        }
        Ok(TruncationProfile { l, log_l_prime: l.exp() * l.ln() })
    }

    fn tilde(&self, r: f64) -> f64 {
        1.0 - (r.ln().ln() - self.l.ln().ln()) / self.l
    }

    pub fn value(&self, r: f64) -> f64 {
        if r <= self.l {
            1.0
        } else if r.ln() >= self.log_l_prime {
            0.0
        } else {
            smoothstep(self.tilde(r)).0
        }
    }

    pub fn derivative(&self, r: f64) -> f64 {
        if r <= self.l || r.ln() >= self.log_l_prime {
            0.0
        } else {
            -smoothstep(self.tilde(r)).1 / (self.l * r * r.ln())
        }
    }
}

/// `phi_l(p) = G_l(||p||^4) phi(p)`.
pub struct TruncatedPotential {
    pub inner: PotentialField,
    pub profile: TruncationProfile,
}

pub fn truncate(phi: PotentialField, l: f64) -> Result<TruncatedPotential> {
    Ok(TruncatedPotential { inner: phi, profile: TruncationProfile::new(l)? })
}

impl Potential for TruncatedPotential {
    fn value(&self, p: Point) -> f64 {
        let g = self.profile.value(p.gauge4());
        if g == 0.0 {
            0.0
        } else {
            g * self.inner.value(p)
        }
    }

    fn gradient(&self, p: Point) -> Option<[f64; 3]> {
        let n = p.gauge4();
        let g = self.profile.value(n);
        if g == 0.0 {
            return Some([0.0; 3]);
        }
        let dg = self.profile.derivative(n);
        let r2 = p.x * p.x + p.y * p.y;
        let dn = [4.0 * p.x * r2 + 4.0 * p.y * p.t, 4.0 * p.y * r2 - 4.0 * p.x * p.t, 2.0 * p.t];
        let grad = self.inner.gradient(p);
        let phi = if dg == 0.0 { 0.0 } else { self.inner.value(p) };
        Some([0, 1, 2].map(|i| g * grad[i] + dg * dn[i] * phi))
    }

    fn name(&self) -> String {
        format!("truncated({}, l = {})", self.inner.potential.name(), self.profile.l)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn cfg() -> QuadratureConfig {
        QuadratureConfig::default()
    }

    #[test]
    fn zz_of_x_squared_is_one_half() {
        let f = PotentialField::new(Polynomial { terms: vec![(1.0, [2, 0, 0])] }, &cfg());
        let (re, im) = f.zz(Point::new(0.3, 0.2, -1.0));
        assert!((re - 0.5).abs() < 1e-14 && im.abs() < 1e-14);
    }

    #[test]
    fn linear_t_field_is_dilation_generator() {
        let v = ContactField::from_potential(Polynomial { terms: vec![(1.0, [0, 0, 1])] }, &cfg());
        let p = Point::new(0.7, -0.4, 1.3);
        let e = v.eval(p);
        assert!((e[0] - 0.35).abs() < 1e-14 && (e[1] + 0.2).abs() < 1e-14 && (e[2] - 1.3).abs() < 1e-14);
    }

    #[test]
    fn analytic_and_fd_gradients_agree() {
        let p = Point::new(0.6, -0.3, 0.8);
        let analytic = PotentialField::new(RadialStretch, &cfg());
        struct Plain;
        impl Potential for Plain {
            fn value(&self, p: Point) -> f64 {
                RadialStretch.value(p)
            }
        }
        let fd = PotentialField::new(Plain, &cfg());
        let (a, b) = (analytic.gradient(p), fd.gradient(p));
        for i in 0..3 {
            assert!((a[i] - b[i]).abs() < 1e-7, "{i}: {} {}", a[i], b[i]);
        }
        let (ha, hb) = (analytic.horizontal_hessian(p), fd.horizontal_hessian(p));
        for i in 0..2 {
            for j in 0..2 {
                assert!((ha[i][j] - hb[i][j]).abs() < 1e-5, "{i}{j}: {} {}", ha[i][j], hb[i][j]);
            }
        }
    }

    #[test]
    fn radial_stretch_divergence_excess_is_bounded() {
        let f = PotentialField::new(RadialStretch, &cfg());
        for p in [Point::new(0.3, 0.1, 0.9), Point::new(2.0, -1.0, 0.1), Point::new(0.0, 0.0, 3.0)] {
            let zeta = f.gradient(p)[2] + 2.0 * p.gauge().ln();
            assert!((-1.0 - 1e-12..=1e-12).contains(&zeta));
        }
    }

    #[test]
    fn truncation_derivative_constant() {
        let prof = TruncationProfile::new(3.0).unwrap();
        let mut best = 0.0f64;
        let (a, b) = (3f64.ln(), prof.log_l_prime);
        for i in 1..4000 {
            let r = (a + (b - a) * i as f64 / 4000.0).exp();
            best = best.max(prof.derivative(r).abs() * prof.l * r * r.ln());
        }
        assert!(best <= 1.875 + 1e-12 && best > 1.87, "{best}");
        assert!(TruncationProfile::new(2.0).is_err());
    }

    #[test]
    fn strain_identity_on_gaussian() {
        let g = GaussianBump { amplitude: 1.0, center: [0.2, 0.0, 0.1], width: 0.8 };
        let v = ContactField::from_potential(g, &cfg());
        let rep = strain(&v, Region::Ball { center: [0.0; 3], radius: 1.0 }, 8).unwrap();
        assert!(rep.max_identity_residual < 1e-6, "{}", rep.max_identity_residual);
        assert!(rep.c > 0.0);
    }

    proptest! {
        #[test]
        fn truncation_profile_is_monotone(l in 2.8..6.0f64, a in 0.0..1.0f64, b in 0.0..1.0f64) {
            let prof = TruncationProfile::new(l).unwrap();
            let span = prof.log_l_prime - l.ln();
            let r1 = (l.ln() + span * a.min(b)).exp();
            let r2 = (l.ln() + span * a.max(b)).exp();
            prop_assert!(prof.value(r1) >= prof.value(r2));
            prop_assert!((0.0..=1.0).contains(&prof.value(r1)));
        }

        #[test]
        fn frame_hessian_bracket(x in -2.0..2.0f64, y in -2.0..2.0f64, t in -2.0..2.0f64) {
            let poly = Polynomial { terms: vec![(1.0, [1, 1, 1]), (0.5, [0, 0, 2]), (2.0, [3, 0, 0])] };
            let p = Point::new(x, y, t);
            let h = poly.horizontal_hessian(p).unwrap();
            let tphi = poly.gradient(p).unwrap()[2];
            prop_assert!((h[0][1] - h[1][0] + 4.0 * tphi).abs() < 1e-10 * (1.0 + tphi.abs()));
        }
    }
}
