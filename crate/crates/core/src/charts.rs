//! The three-chart atlas on `TS²`, its embedding into the Grassmannian of
//! oriented 2-planes in `ℝ⁴`, and the two-sphere at infinity.
//!
//! A Grassmannian point is a rank-2 real 4×2 matrix up to the right action
//! of `GL₊(2,ℝ)`. The embedding of `TS²` sends `(t, v)` with `⟨t,v⟩ = 0` to
//! the class of `[t, −v; 0, 1]`; classes whose last row vanishes make up
//! `S²_∞`.
//!
//! Chart transitions are derived from the embedding matrices by
//! normalisation, which keeps the atlas, the β-surface equations and the
//! geodesic continuation mutually consistent.

use num_complex::Complex;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::scalar::Real;

#[derive(Debug, Error)]
pub enum ChartError {
    #[error("matrix is not rank 2 (largest 2x2 minor {0:e})")]
    NotRank2(f64),
    #[error("point outside chart overlap: {0}")]
    OutsideOverlap(String),
    #[error("infinity data violates |t| = |v| = 1, <t,v> = 0 (residual {0:e})")]
    BadInfinityData(f64),
    #[error("operation needs a base point of TS², but a fiber coordinate is present")]
    UnexpectedFiber,
    #[error("class lies on S²_∞, not in the image of chart {0:?}")]
    AtInfinity(Chart),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Chart {
    #[serde(rename = "D+")]
    DPlus,
    #[serde(rename = "D-")]
    DMinus,
    W,
}

/// A point of `TS²` in one of the three charts, with an optional fiber
/// coordinate of the disk bundle (`ζ` over `D±`, `ξ` over `W`).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ChartPoint<R: Real> {
    pub chart: Chart,
    /// `(x₁,x₂,x₃,x₄)` for `D±`; `(α, β, ε₁, ε₂)` for `W`.
    pub coords: [R; 4],
    pub fiber: Option<Complex<R>>,
}

impl<R: Real> ChartPoint<R> {
    pub fn d_plus(x: [R; 4]) -> Self {
        Self {
            chart: Chart::DPlus,
            coords: x,
            fiber: None,
        }
    }

    pub fn d_minus(x: [R; 4]) -> Self {
        Self {
            chart: Chart::DMinus,
            coords: x,
            fiber: None,
        }
    }

    pub fn w(alpha: R, beta: R, eps1: R, eps2: R) -> Self {
        Self {
            chart: Chart::W,
            coords: [alpha, beta, eps1, eps2],
            fiber: None,
        }
    }

    pub fn with_fiber(mut self, fiber: Complex<R>) -> Self {
        self.fiber = Some(fiber);
        self
    }

    /// Fiber half-plane constraint of the disk bundle for this chart:
    /// `Im ζ⁺ ≥ 0`, `Im ζ⁻ ≤ 0`, `Im ξ ≥ 0`.
    pub fn fiber_in_range(&self) -> bool {
        match (self.chart, self.fiber) {
            (_, None) => true,
            (Chart::DPlus, Some(z)) | (Chart::W, Some(z)) => z.im >= -R::epsilon(),
            (Chart::DMinus, Some(z)) => z.im <= R::epsilon(),
        }
    }

    pub fn to_json(&self) -> String {
        let doc = ChartPointDoc {
            chart: self.chart,
            coords: self.coords.iter().map(|c| c.as_f64()).collect(),
            fiber: self.fiber.map(|z| (z.re.as_f64(), z.im.as_f64())),
        };
        serde_json::to_string(&doc).expect("chart point serializes")
    }
}

#[derive(Debug, Serialize, Deserialize)]
struct ChartPointDoc {
    chart: Chart,
    coords: Vec<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    fiber: Option<(f64, f64)>,
}

/// A point of `S²_∞`: the class of `[t, −v; 0, 0]` with `t ⊥ v` unit vectors.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct InfinityTag<R: Real> {
    pub t: [R; 3],
    pub v: [R; 3],
}

/// Result of locating a Grassmannian class relative to a chart.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Located<R: Real> {
    Chart(ChartPoint<R>),
    Infinity(InfinityTag<R>),
}

/// Rank-2 real 4×2 matrix class representing an oriented 2-plane in `ℝ⁴`.
/// Two matrices represent the same point iff they differ by a right factor
/// with positive determinant.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GrassPoint<R: Real> {
    pub m: [[R; 2]; 4],
}

impl<R: Real> GrassPoint<R> {
    pub fn new(m: [[R; 2]; 4]) -> Result<Self, ChartError> {
        let g = Self { m };
        let minor = g.largest_minor();
        let scale = g.scale();
        if minor <= R::of(1e-12) * scale * scale {
            return Err(ChartError::NotRank2(minor.as_f64()));
        }
        Ok(g)
    }

    fn scale(&self) -> R {
        self.m
            .iter()
            .flatten()
            .fold(R::zero(), |acc, v| acc.max(v.abs()))
            .max(R::epsilon())
    }

    fn largest_minor(&self) -> R {
        let mut best = R::zero();
        for i in 0..4 {
            for j in i + 1..4 {
                let d = self.m[i][0] * self.m[j][1] - self.m[i][1] * self.m[j][0];
                best = best.max(d.abs());
            }
        }
        best
    }

    /// Right-multiply by a 2×2 factor.
    fn act(&self, r: [[R; 2]; 2]) -> [[R; 2]; 4] {
        let mut out = [[R::zero(); 2]; 4];
        for i in 0..4 {
            for j in 0..2 {
                out[i][j] = self.m[i][0] * r[0][j] + self.m[i][1] * r[1][j];
            }
        }
        out
    }

    /// Orientation-reversed plane (the natural involution of `S²_∞` when
    /// applied there): swap the two columns.
    pub fn antipodal(&self) -> Self {
        let mut m = self.m;
        for row in &mut m {
            row.swap(0, 1);
        }
        Self { m }
    }

    /// Canonical representative: orthonormal columns rotated so the row of
    /// largest norm is `(r, 0)` with `r > 0`. Unique within each class, so
    /// classes compare entrywise.
    pub fn canonical(&self) -> [[R; 2]; 4] {
        // Gram-Schmidt on the columns (positive-determinant upper-triangular
        // right factor).
        let c1 = [self.m[0][0], self.m[1][0], self.m[2][0], self.m[3][0]];
        let c2 = [self.m[0][1], self.m[1][1], self.m[2][1], self.m[3][1]];
        let n1 = dot4(c1, c1).sqrt();
        let e1 = scale4(c1, n1.recip());
        let proj = dot4(e1, c2);
        let mut w = [R::zero(); 4];
        for i in 0..4 {
            w[i] = c2[i] - proj * e1[i];
        }
        let n2 = dot4(w, w).sqrt();
        let e2 = scale4(w, n2.recip());
        let mut q = [[R::zero(); 2]; 4];
        for i in 0..4 {
            q[i][0] = e1[i];
            q[i][1] = e2[i];
        }
        // Kill the residual SO(2) freedom: rotate the largest row to (r, 0).
        let mut pivot = 0;
        let mut best = -R::one();
        for (i, row) in q.iter().enumerate() {
            let n = row[0] * row[0] + row[1] * row[1];
            if n > best {
                best = n;
                pivot = i;
            }
        }
        let (a, b) = (q[pivot][0], q[pivot][1]);
        let n = (a * a + b * b).sqrt();
        let (cos_t, sin_t) = (a / n, b / n);
        let mut out = [[R::zero(); 2]; 4];
        for i in 0..4 {
            out[i][0] = q[i][0] * cos_t + q[i][1] * sin_t;
            out[i][1] = -q[i][0] * sin_t + q[i][1] * cos_t;
        }
        out
    }

    /// Distance between the canonical representatives; zero iff the classes
    /// coincide with matching orientation.
    pub fn class_distance(&self, other: &Self) -> R {
        let a = self.canonical();
        let b = other.canonical();
        let mut worst = R::zero();
        for i in 0..4 {
            for j in 0..2 {
                worst = worst.max((a[i][j] - b[i][j]).abs());
            }
        }
        worst
    }

    /// Row-major 8-number JSON array.
    pub fn to_json(&self) -> String {
        let flat: Vec<f64> = self.m.iter().flatten().map(|v| v.as_f64()).collect();
        serde_json::to_string(&flat).expect("grass point serializes")
    }

    pub fn from_json(text: &str) -> Result<Self, ChartError> {
        let flat: Vec<f64> = serde_json::from_str(text)
            .map_err(|e| ChartError::OutsideOverlap(format!("bad grass document: {e}")))?;
        if flat.len() != 8 {
            return Err(ChartError::OutsideOverlap(format!(
                "grass document needs 8 numbers, got {}",
                flat.len()
            )));
        }
        let mut m = [[R::zero(); 2]; 4];
        for i in 0..4 {
            m[i][0] = R::of(flat[2 * i]);
            m[i][1] = R::of(flat[2 * i + 1]);
        }
        Self::new(m)
    }
}

fn dot4<R: Real>(a: [R; 4], b: [R; 4]) -> R {
    a[0] * b[0] + a[1] * b[1] + a[2] * b[2] + a[3] * b[3]
}

fn scale4<R: Real>(a: [R; 4], s: R) -> [R; 4] {
    [a[0] * s, a[1] * s, a[2] * s, a[3] * s]
}

fn dot3<R: Real>(a: [R; 3], b: [R; 3]) -> R {
    a[0] * b[0] + a[1] * b[1] + a[2] * b[2]
}

/// Embed a fiberless chart point of `TS²` into the Grassmannian:
///
/// ```text
/// D₊: [[ x₁, −x₄], [ x₂, x₃], [ 1, 0], [0, 1]]
/// D₋: [[−x₁, −x₄], [−x₂, x₃], [−1, 0], [0, 1]]
/// W : [[cosα, ε₂ sinα], [sinα, −ε₂ cosα], [tanβ, ε₁], [0, 1]]
/// ```
pub fn embed<R: Real>(p: &ChartPoint<R>) -> Result<GrassPoint<R>, ChartError> {
    if p.fiber.is_some() {
        return Err(ChartError::UnexpectedFiber);
    }
    let o = R::zero();
    let l = R::one();
    let m = match p.chart {
        Chart::DPlus => {
            let [x1, x2, x3, x4] = p.coords;
            [[x1, -x4], [x2, x3], [l, o], [o, l]]
        }
        Chart::DMinus => {
            let [x1, x2, x3, x4] = p.coords;
            [[-x1, -x4], [-x2, x3], [-l, o], [o, l]]
        }
        Chart::W => {
            let [alpha, beta, e1, e2] = p.coords;
            let half_pi = R::PI().half();
            if (beta.abs() - half_pi).abs() < R::of(1e-12) {
                return Err(ChartError::OutsideOverlap(
                    "W chart requires beta strictly inside (-pi/2, pi/2)".into(),
                ));
            }
            let (s, c) = (alpha.sin(), alpha.cos());
            [[c, e2 * s], [s, -e2 * c], [beta.tan(), e1], [o, l]]
        }
    };
    GrassPoint::new(m)
}

/// The class of a point of `S²_∞` from `(t, v)` with `|t| = |v| = 1`,
/// `⟨t,v⟩ = 0` (checked to `1e-10`).
pub fn infinity_point<R: Real>(t: [R; 3], v: [R; 3]) -> Result<GrassPoint<R>, ChartError> {
    let res = (dot3(t, t) - R::one())
        .abs()
        .max((dot3(v, v) - R::one()).abs())
        .max(dot3(t, v).abs());
    if res > R::of(1e-10) {
        return Err(ChartError::BadInfinityData(res.as_f64()));
    }
    let o = R::zero();
    GrassPoint::new([[t[0], -v[0]], [t[1], -v[1]], [t[2], -v[2]], [o, o]])
}

/// Locate a class in the given chart: unique chart coordinates if the class
/// lies in the chart image, the `(t, v)` tag if it lies on `S²_∞`.
pub fn normalize<R: Real>(g: &GrassPoint<R>, chart: Chart) -> Result<Located<R>, ChartError> {
    let scale = g.scale();
    let last_row = g.m[3][0].abs().max(g.m[3][1].abs());
    if last_row < R::of(1e-12) * scale {
        // S²_∞: Gram-Schmidt the first three rows into (t, −v·s) with s > 0.
        let c1 = [g.m[0][0], g.m[1][0], g.m[2][0]];
        let c2 = [g.m[0][1], g.m[1][1], g.m[2][1]];
        let n1 = dot3(c1, c1).sqrt();
        let t = [c1[0] / n1, c1[1] / n1, c1[2] / n1];
        let proj = dot3(t, c2);
        let mut w = [R::zero(); 3];
        for i in 0..3 {
            w[i] = c2[i] - proj * t[i];
        }
        let n2 = dot3(w, w).sqrt();
        if n2 < R::of(1e-12) * scale {
            return Err(ChartError::NotRank2(n2.as_f64()));
        }
        let v = [-w[0] / n2, -w[1] / n2, -w[2] / n2];
        return Ok(Located::Infinity(InfinityTag { t, v }));
    }

    match chart {
        Chart::DPlus | Chart::DMinus => {
            let sgn = if chart == Chart::DPlus {
                R::one()
            } else {
                -R::one()
            };
            // Right factor M = K⁻¹ (· diag(−1,1) for D₋) brings rows 3,4 to
            // (±1,0),(0,1); positive determinant requires sgn·det K > 0.
            let k = [[g.m[2][0], g.m[2][1]], [g.m[3][0], g.m[3][1]]];
            let det = k[0][0] * k[1][1] - k[0][1] * k[1][0];
            if sgn * det <= R::of(1e-12) * scale * scale {
                return Err(ChartError::OutsideOverlap(format!(
                    "class not over {chart:?}: third-row determinant {det:?} has the wrong sign"
                )));
            }
            let kinv = [[k[1][1] / det, -k[0][1] / det], [-k[1][0] / det, k[0][0] / det]];
            let m = if chart == Chart::DPlus {
                g.act(kinv)
            } else {
                // Extra column flip to reach the (−1,0),(0,1) normal form.
                g.act([
                    [-kinv[0][0], kinv[0][1]],
                    [-kinv[1][0], kinv[1][1]],
                ])
            };
            let x1 = sgn * m[0][0];
            let x2 = sgn * m[1][0];
            let x4 = -m[0][1];
            let x3 = m[1][1];
            Ok(Located::Chart(ChartPoint {
                chart,
                coords: [x1, x2, x3, x4],
                fiber: None,
            }))
        }
        Chart::W => {
            // col₁' must have last entry 0, col₂' last entry 1; then scale
            // col₁' onto the unit circle in its first two entries.
            let (p, q) = (g.m[3][0], g.m[3][1]);
            // col₁' = q·col₁ − p·col₂ (last entry 0), col₂' with last entry 1.
            let (a, b) = if q.abs() >= p.abs() {
                ([q, -p], [R::zero(), q.recip()])
            } else {
                ([q, -p], [p.recip(), R::zero()])
            };
            // Both branches have factor determinant exactly +1.
            let mut m = g.act([[a[0], b[0]], [a[1], b[1]]]);
            // Normalise col₁ so its first two entries are (cosα, sinα).
            let norm = (m[0][0] * m[0][0] + m[1][0] * m[1][0]).sqrt();
            if norm < R::of(1e-12) * scale {
                return Err(ChartError::OutsideOverlap(
                    "class over a pole of S², outside the W chart".into(),
                ));
            }
            for row in &mut m {
                row[0] /= norm;
            }
            // Remove the col₁-component of col₂ in the first two rows.
            let lambda = m[0][0] * m[0][1] + m[1][0] * m[1][1];
            for i in 0..4 {
                m[i][1] -= lambda * m[i][0];
            }
            let alpha = m[1][0].atan2(m[0][0]);
            let beta = m[2][0].atan();
            let e1 = m[2][1];
            let e2 = m[0][1] * alpha.sin() - m[1][1] * alpha.cos();
            Ok(Located::Chart(ChartPoint {
                chart: Chart::W,
                coords: [alpha, beta, e1, e2],
                fiber: None,
            }))
        }
    }
}

/// Chart transition of a point (with optional fiber coordinate), derived
/// from the embedding matrices. Domain errors name the violated constraint.
///
/// The fiber transitions are the Möbius maps
///
/// ```text
/// ζ = (ξ sinα tanβ − cosα) / (ξ cosα tanβ + sinα)
/// ξ = (cosα + ζ sinα) / (tanβ (sinα − ζ cosα))
/// ```
///
/// whose determinant is `tanβ`, so `Im ξ > 0` maps to `Im ζ > 0` over `D₊`
/// (`β > 0`) and to `Im ζ < 0` over `D₋` (`β < 0`), matching the disk-bundle
/// half-plane conventions.
pub fn transition<R: Real>(p: &ChartPoint<R>, target: Chart) -> Result<ChartPoint<R>, ChartError> {
    if p.chart == target {
        return Ok(*p);
    }
    match (p.chart, target) {
        (Chart::DPlus, Chart::DMinus) | (Chart::DMinus, Chart::DPlus) => Err(
            ChartError::OutsideOverlap("D+ and D- do not overlap on S²".into()),
        ),
        (Chart::W, d) => {
            let [alpha, beta, ..] = p.coords;
            if beta.abs() < R::of(1e-12) {
                return Err(ChartError::OutsideOverlap(
                    "beta = 0 is the equator, not in D+/D-".into(),
                ));
            }
            if d == Chart::DPlus && beta <= R::zero() {
                return Err(ChartError::OutsideOverlap(
                    "beta < 0 lies over the southern hemisphere, not D+".into(),
                ));
            }
            if d == Chart::DMinus && beta >= R::zero() {
                return Err(ChartError::OutsideOverlap(
                    "beta > 0 lies over the northern hemisphere, not D-".into(),
                ));
            }
            let base = embed(&ChartPoint {
                fiber: None,
                ..*p
            })?;
            let located = normalize(&base, d)?;
            let mut out = match located {
                Located::Chart(c) => c,
                Located::Infinity(_) => return Err(ChartError::AtInfinity(d)),
            };
            if let Some(xi) = p.fiber {
                let (s, c) = (alpha.sin(), alpha.cos());
                let tb = beta.tan();
                let num = xi * (s * tb) - Complex::new(c, R::zero());
                let den = xi * (c * tb) + Complex::new(s, R::zero());
                out.fiber = Some(num / den);
            }
            Ok(out)
        }
        (d, Chart::W) => {
            let [x1, x2, ..] = p.coords;
            if (x1 * x1 + x2 * x2).sqrt() < R::of(1e-12) {
                return Err(ChartError::OutsideOverlap(
                    "origin of D± lies over a pole, outside W".into(),
                ));
            }
            let base = embed(&ChartPoint {
                fiber: None,
                ..*p
            })?;
            let located = normalize(&base, Chart::W)?;
            let mut out = match located {
                Located::Chart(c) => c,
                Located::Infinity(_) => return Err(ChartError::AtInfinity(Chart::W)),
            };
            if let Some(zeta) = p.fiber {
                let _ = d;
                let [alpha, beta, ..] = out.coords;
                let (s, c) = (alpha.sin(), alpha.cos());
                let tb = beta.tan();
                let num = Complex::new(c, R::zero()) + zeta * s;
                let den = (Complex::new(s, R::zero()) - zeta * c) * tb;
                out.fiber = Some(num / den);
            }
            Ok(out)
        }
        _ => unreachable!("all chart pairs handled"),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    type P = ChartPoint<f64>;

    fn assert_close(a: f64, b: f64, tol: f64, what: &str) {
        assert!((a - b).abs() < tol, "{what}: {a} vs {b}");
    }

    #[test]
    fn embed_origin_of_dplus() {
        let g = embed(&P::d_plus([0.0; 4])).unwrap();
        let want = [[0.0, 0.0], [0.0, 0.0], [1.0, 0.0], [0.0, 1.0]];
        assert_eq!(g.m, want);
    }

    #[test]
    fn embed_w_at_equator() {
        let g = embed(&P::w(0.0, 0.0, 0.5, 2.0)).unwrap();
        let want = [[1.0, 0.0], [0.0, -2.0], [0.0, 0.5], [0.0, 1.0]];
        assert_eq!(g.m, want);
    }

    #[test]
    fn normalize_round_trips_embed() {
        for p in [
            P::d_plus([0.3, -1.2, 0.7, 2.0]),
            P::d_minus([1.1, 0.2, -0.4, 0.9]),
            P::w(0.8, 0.5, -0.3, 1.4),
            P::w(-2.1, -0.7, 2.0, 0.1),
        ] {
            let g = embed(&p).unwrap();
            match normalize(&g, p.chart).unwrap() {
                Located::Chart(q) => {
                    for i in 0..4 {
                        assert_close(q.coords[i], p.coords[i], 1e-12, "coordinate");
                    }
                }
                Located::Infinity(_) => panic!("unexpected infinity"),
            }
        }
    }

    #[test]
    fn transition_w_to_dplus_base() {
        // (α,β,ε₁,ε₂) = (0, π/4, 0, 1): cotβ = 1 so x₁ = 1, x₂ = 0, and the
        // embedding matrices force (x₃, x₄) = (−1, 0).
        let p = P::w(0.0, std::f64::consts::FRAC_PI_4, 0.0, 1.0);
        let q = transition(&p, Chart::DPlus).unwrap();
        assert_close(q.coords[0], 1.0, 1e-12, "x1");
        assert_close(q.coords[1], 0.0, 1e-12, "x2");
        assert_close(q.coords[2], -1.0, 1e-12, "x3");
        assert_close(q.coords[3], 0.0, 1e-12, "x4");
    }

    #[test]
    fn transitions_are_mutually_inverse() {
        // 50 points per overlap pair, fiber included.
        let mut rng = 9_u64;
        let mut next = || {
            rng = rng.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
            ((rng >> 11) as f64) / ((1u64 << 53) as f64)
        };
        for _ in 0..50 {
            let alpha = (next() - 0.5) * 2.0 * std::f64::consts::PI;
            let beta = 0.05 + next() * 1.4; // inside (0, π/2)
            let e1 = (next() - 0.5) * 4.0;
            let e2 = (next() - 0.5) * 4.0;
            let fiber = Complex::new((next() - 0.5) * 3.0, next() * 2.0);
            let p = P::w(alpha, beta, e1, e2).with_fiber(fiber);
            let q = transition(&p, Chart::DPlus).unwrap();
            assert!(q.fiber.unwrap().im > 0.0, "fiber must stay in H+");
            let back = transition(&q, Chart::W).unwrap();
            for i in 0..4 {
                assert_close(back.coords[i], p.coords[i], 1e-10, "W->D+->W");
            }
            assert!((back.fiber.unwrap() - fiber).norm() < 1e-10);

            // Southern hemisphere: fiber moves to the lower half-plane.
            let p = P::w(alpha, -beta, e1, e2).with_fiber(fiber);
            let q = transition(&p, Chart::DMinus).unwrap();
            assert!(q.fiber.unwrap().im < 0.0, "fiber must flip to H-");
            let back = transition(&q, Chart::W).unwrap();
            for i in 0..4 {
                assert_close(back.coords[i], p.coords[i], 1e-10, "W->D-->W");
            }
            assert!((back.fiber.unwrap() - fiber).norm() < 1e-10);
        }
    }

    #[test]
    fn cross_chart_embedding_agrees() {
        let p = P::w(0.4, 0.6, -1.0, 2.5);
        let via_w = embed(&p).unwrap();
        let q = transition(&p, Chart::DPlus).unwrap();
        let via_d = embed(&q).unwrap();
        assert!(via_w.class_distance(&via_d) < 1e-12);
    }

    #[test]
    fn domain_errors() {
        assert!(matches!(
            transition(&P::w(0.3, 0.0, 0.0, 0.0), Chart::DPlus),
            Err(ChartError::OutsideOverlap(_))
        ));
        assert!(matches!(
            transition(&P::w(0.3, -0.4, 0.0, 0.0), Chart::DPlus),
            Err(ChartError::OutsideOverlap(_))
        ));
        assert!(matches!(
            transition(&P::d_plus([0.0, 0.0, 1.0, 1.0]), Chart::W),
            Err(ChartError::OutsideOverlap(_))
        ));
        assert!(matches!(
            transition(&P::d_plus([1.0; 4]), Chart::DMinus),
            Err(ChartError::OutsideOverlap(_))
        ));
    }

    #[test]
    fn infinity_points() {
        let g = infinity_point([0.0, 0.0, 1.0], [1.0, 0.0, 0.0]).unwrap();
        assert_eq!(
            g.m,
            [[0.0, -1.0], [0.0, 0.0], [1.0, 0.0], [0.0, 0.0]]
        );
        // Involution.
        let a = g.antipodal();
        assert!(a.class_distance(&g) > 1e-3, "antipode is a different class");
        assert!(a.antipodal().class_distance(&g) < 1e-14);

        // Constraint validation.
        assert!(infinity_point([0.0, 0.0, 2.0], [1.0, 0.0, 0.0]).is_err());
        assert!(infinity_point([0.0, 0.0, 1.0], [0.0, 0.1, 1.0]).is_err());

        // normalize() reports the tag.
        match normalize(&g, Chart::DPlus).unwrap() {
            Located::Infinity(tag) => {
                assert_close(tag.t[2], 1.0, 1e-14, "t3");
                assert_close(tag.v[0], 1.0, 1e-14, "v1");
            }
            Located::Chart(_) => panic!("expected infinity"),
        }
    }

    #[test]
    fn u_chart_matrix_normalizes_into_dplus() {
        // [[u₁,−u₄],[1,0],[0,1],[u₂,u₃]] with u₂ < 0 lies over D₊ with x₃ < 0.
        let (u1, u2, u3, u4) = (0.4_f64, -0.5, 0.3, -0.2);
        let g = GrassPoint::new([[u1, -u4], [1.0, 0.0], [0.0, 1.0], [u2, u3]]).unwrap();
        match normalize(&g, Chart::DPlus).unwrap() {
            Located::Chart(p) => {
                assert_eq!(p.chart, Chart::DPlus);
                let want = crate::petean::u_chart_to_dplus([u1, u2, u3, u4]);
                for i in 0..4 {
                    assert_close(p.coords[i], want[i], 1e-12, "u-chart coord");
                }
                assert!(p.coords[2] < 0.0, "x3 < 0 on the u2 < 0 side");
            }
            Located::Infinity(_) => panic!("not at infinity"),
        }
    }

    #[test]
    fn embed_injective_per_chart() {
        let a = embed(&P::d_plus([0.1, 0.2, 0.3, 0.4])).unwrap();
        let b = embed(&P::d_plus([0.1, 0.2, 0.3, 0.5])).unwrap();
        assert!(a.class_distance(&b) > 1e-3);
    }

    #[test]
    fn grass_json_round_trip() {
        let g = embed(&P::d_plus([0.3, -1.2, 0.7, 2.0])).unwrap();
        let text = g.to_json();
        let h = GrassPoint::<f64>::from_json(&text).unwrap();
        assert!(g.class_distance(&h) < 1e-14);
    }
}
