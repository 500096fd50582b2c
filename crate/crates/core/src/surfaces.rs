//! β-surface defining functions in both chart systems, the potential `φ`,
//! the extension across the equator via `ψ̃`, and annihilation checks
//! against the null distribution.
//!
//! On `TD±` a β-surface is the zero set of
//!
//! ```text
//! r₁ = −sinσ x₁ + cosσ x₂ − c₁
//! r₂ =  cosσ x₃ + sinσ x₄ ± φ(x₁,x₂,σ) − c₂
//! ```
//!
//! and in the `W` chart of
//!
//! ```text
//! r₁ = sin(α−σ) − c₁ tanβ
//! r₂ = −c₁ε₁ − cos(α−σ)ε₂ + Ψ − c₂
//! ```
//!
//! where `Ψ` is a half-Radon branch value for `β ≠ 0` and `ψ̃ = ±f̂(c₁)/4`
//! on the equator.

use thiserror::Error;

use crate::charts::{Chart, ChartPoint, GrassPoint};
use crate::petean::{FrameData, MetricSign, PeteanMetric, Vec4};
use crate::profile::{BivariateFn, RadialProfile};
use crate::quad::{self, QuadratureConfig};
use crate::scalar::Real;
use crate::transforms::{half_radon, radon, HalfSign, TransformError};

#[derive(Debug, Error)]
pub enum SurfaceError {
    #[error(transparent)]
    Transform(#[from] TransformError),
    #[error("point is in chart {got:?}, expected {want:?}")]
    WrongChart { got: Chart, want: Chart },
    #[error("|tan beta| = {0} too large: the half-Radon branch formulas need |tan beta| < 1/R_f = {1}")]
    TanBetaTooLarge(f64, f64),
}

/// Parameters of one β-surface. `(σ, c₁, c₂)` and `(σ+π, −c₁, −c₂)` label
/// the same surface, so `σ` is kept in `[0, π)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BetaParams<R: Real> {
    pub sigma: R,
    pub c1: R,
    pub c2: R,
}

impl<R: Real> BetaParams<R> {
    /// Canonicalise into `σ ∈ [0, π)`, flipping `(c₁, c₂)` as needed.
    pub fn new(sigma: R, c1: R, c2: R) -> Self {
        let pi = R::PI();
        let mut s = sigma % (R::of(2.0) * pi);
        if s < R::zero() {
            s += R::of(2.0) * pi;
        }
        if s >= pi {
            Self {
                sigma: s - pi,
                c1: -c1,
                c2: -c2,
            }
        } else {
            Self { sigma: s, c1, c2 }
        }
    }
}

/// The potential `φ(x₁,x₂,σ) = ½ ∫₀^λ f(cosσ t − sinσ μ, sinσ t + cosσ μ) dt`
/// where `(λ, μ)` is `(x₁, x₂)` rotated by `−σ`. It satisfies
/// `cosσ ∂₁φ + sinσ ∂₂φ = f/2`.
pub fn varphi<R: Real>(
    f: &RadialProfile<R>,
    x1: R,
    x2: R,
    sigma: R,
    cfg: &QuadratureConfig<R>,
) -> Result<R, TransformError> {
    if f.is_zero() {
        cfg.validate()?;
        return Ok(R::zero());
    }
    let (s, c) = (sigma.sin(), sigma.cos());
    let lambda = c * x1 + s * x2;
    let mu = -s * x1 + c * x2;
    let v = quad::integrate(
        |t: R| f.value(c * t - s * mu, s * t + c * mu),
        R::zero(),
        lambda,
        cfg,
    )?;
    Ok(v.half())
}

/// Defining-function residuals on `TD±` (`sign` picks the metric of the
/// chart, which flips the `φ` term).
pub fn beta_residual_d<R: Real>(
    f: &RadialProfile<R>,
    sign: MetricSign,
    params: &BetaParams<R>,
    p: &ChartPoint<R>,
    cfg: &QuadratureConfig<R>,
) -> Result<(R, R), SurfaceError> {
    let want = match sign {
        MetricSign::Plus => Chart::DPlus,
        MetricSign::Minus => Chart::DMinus,
    };
    if p.chart != want {
        return Err(SurfaceError::WrongChart {
            got: p.chart,
            want,
        });
    }
    let [x1, x2, x3, x4] = p.coords;
    let (s, c) = (params.sigma.sin(), params.sigma.cos());
    let r1 = -s * x1 + c * x2 - params.c1;
    let phi = varphi(f, x1, x2, params.sigma, cfg)?;
    let r2 = c * x3 + s * x4 + sign.factor::<R>() * phi - params.c2;
    Ok((r1, r2))
}

/// `ψ̃(α,σ;c₁) = ±f̂(c₁)/4`, the equator value of the extended potential:
/// `+` on `cos(α−σ) > 0`, `−` on `cos(α−σ) < 0`.
pub fn psi_tilde<R: Real>(
    f: &RadialProfile<R>,
    c1: R,
    branch_positive: bool,
    cfg: &QuadratureConfig<R>,
) -> Result<R, TransformError> {
    let v = radon(f, c1, cfg)? * R::of(0.25);
    Ok(if branch_positive { v } else { -v })
}

/// The half-Radon branch table for `Ψ` off the equator:
///
/// ```text
/// tanβ > 0:  cosΔ > 0 → ½ f̂⁽⁺⁾(σ, μ)     cosΔ < 0 → ½ f̂⁽⁻⁾(σ, μ)
/// tanβ < 0:  cosΔ > 0 → −½ f̂⁽⁻⁾(σ, μ)    cosΔ < 0 → −½ f̂⁽⁺⁾(σ, μ)
/// ```
///
/// with `Δ = α − σ` and `μ = sin(α−σ) cotβ`.
fn psi_branch<R: Real>(
    f: &RadialProfile<R>,
    sigma: R,
    mu: R,
    tan_beta: R,
    cos_delta: R,
    cfg: &QuadratureConfig<R>,
) -> Result<R, TransformError> {
    let (sign, half) = if tan_beta > R::zero() {
        if cos_delta > R::zero() {
            (R::one(), HalfSign::Plus)
        } else {
            (R::one(), HalfSign::Minus)
        }
    } else if cos_delta > R::zero() {
        (-R::one(), HalfSign::Minus)
    } else {
        (-R::one(), HalfSign::Plus)
    };
    Ok(sign * half_radon(f, sigma, mu, half, cfg)?.half())
}

/// Defining-function residuals in the `W` chart near the equator. Requires
/// `|tanβ| < 1/R_f`; on `β = 0` exactly, the `ψ̃` branch is used.
pub fn beta_residual_w<R: Real>(
    f: &RadialProfile<R>,
    params: &BetaParams<R>,
    p: &ChartPoint<R>,
    cfg: &QuadratureConfig<R>,
) -> Result<(R, R), SurfaceError> {
    if p.chart != Chart::W {
        return Err(SurfaceError::WrongChart {
            got: p.chart,
            want: Chart::W,
        });
    }
    let [alpha, beta, e1, e2] = p.coords;
    let tan_beta = beta.tan();
    let r_f = f.cutoff();
    if !f.is_zero() && tan_beta.abs() * r_f >= R::one() {
        return Err(SurfaceError::TanBetaTooLarge(
            tan_beta.abs().as_f64(),
            r_f.recip().as_f64(),
        ));
    }
    let delta = alpha - params.sigma;
    let (sd, cd) = (delta.sin(), delta.cos());
    let r1 = sd - params.c1 * tan_beta;
    let psi = if tan_beta == R::zero() {
        psi_tilde(f, params.c1, cd > R::zero(), cfg)?
    } else {
        let mu = sd / tan_beta;
        psi_branch(f, params.sigma, mu, tan_beta, cd, cfg)?
    };
    let r2 = -params.c1 * e1 - cd * e2 + psi - params.c2;
    Ok((r1, r2))
}

/// The null pair spanning the β-plane of direction `σ` at a point of `TD±`:
///
/// ```text
/// 𝔫₁ = cosσ ∂₁ + sinσ ∂₂ − (F/2)(cosσ ∂₃ + sinσ ∂₄),   F = ±f
/// 𝔫₂ = sinσ ∂₃ − cosσ ∂₄
/// ```
pub fn null_pair<R: Real>(
    f: &RadialProfile<R>,
    sign: MetricSign,
    sigma: R,
    x1: R,
    x2: R,
) -> (Vec4<R>, Vec4<R>) {
    let (s, c) = (sigma.sin(), sigma.cos());
    let half_f = (sign.factor::<R>() * f.value(x1, x2)).half();
    (
        [c, s, -half_f * c, -half_f * s],
        [R::zero(), R::zero(), s, -c],
    )
}

/// Max finite-difference directional derivative of the two defining
/// functions along `𝔫₁`, `𝔫₂` at `p` — zero on and off the surface.
pub fn annihilation_residual<R: Real>(
    f: &RadialProfile<R>,
    sign: MetricSign,
    params: &BetaParams<R>,
    p: &ChartPoint<R>,
    step: R,
    cfg: &QuadratureConfig<R>,
) -> Result<R, SurfaceError> {
    let [x1, x2, ..] = p.coords;
    let (n1, n2) = null_pair(f, sign, params.sigma, x1, x2);
    let mut worst = R::zero();
    for n in [n1, n2] {
        let shifted = |h: R| -> Result<(R, R), SurfaceError> {
            let mut q = *p;
            for i in 0..4 {
                q.coords[i] += h * n[i];
            }
            beta_residual_d(f, sign, params, &q, cfg)
        };
        let plus = shifted(step)?;
        let minus = shifted(-step)?;
        let d1 = (plus.0 - minus.0) / (R::of(2.0) * step);
        let d2 = (plus.1 - minus.1) / (R::of(2.0) * step);
        worst = worst.max(d1.abs()).max(d2.abs());
    }
    Ok(worst)
}

/// Max-norm distance between the orthogonal projectors onto
/// `span{𝔫₁, 𝔫₂}` and onto the column space of the anti-self-dual bivector
/// `W₁ + cos2σ W₂ + sin2σ W₃` built from the frame. The two planes agree,
/// which is the frame-level form of "the null pair spans a β-plane".
pub fn null_span_vs_asd_span<R: Real>(
    metric: &PeteanMetric<'_, R>,
    f: &RadialProfile<R>,
    sigma: R,
    x: Vec4<R>,
) -> R {
    let (n1, n2) = null_pair(f, metric.sign(), sigma, x[0], x[1]);
    let frame: FrameData<R> = metric.orthonormal_frame(x);
    let _ = frame;
    let ws = metric.asd_frame(x);
    let two_sigma = R::of(2.0) * sigma;
    let (c2s, s2s) = (two_sigma.cos(), two_sigma.sin());
    let mut b = [[R::zero(); 4]; 4];
    for i in 0..4 {
        for j in 0..4 {
            b[i][j] = ws[0][i][j] + c2s * ws[1][i][j] + s2s * ws[2][i][j];
        }
    }
    // Two independent columns of the rank-2 antisymmetric matrix span the
    // plane of the bivector.
    let mut cols: Vec<Vec4<R>> = Vec::new();
    for j in 0..4 {
        let col = [b[0][j], b[1][j], b[2][j], b[3][j]];
        let n = dot(col, col).sqrt();
        if n > R::of(1e-10) {
            cols.push(col);
        }
    }
    let p1 = projector(n1, n2);
    let mut best = R::max_value();
    for i in 0..cols.len() {
        for j in i + 1..cols.len() {
            if independent(cols[i], cols[j]) {
                let p2 = projector(cols[i], cols[j]);
                let mut worst = R::zero();
                for r in 0..4 {
                    for c in 0..4 {
                        worst = worst.max((p1[r][c] - p2[r][c]).abs());
                    }
                }
                best = best.min(worst);
            }
        }
    }
    best
}

fn dot<R: Real>(a: Vec4<R>, b: Vec4<R>) -> R {
    a[0] * b[0] + a[1] * b[1] + a[2] * b[2] + a[3] * b[3]
}

fn independent<R: Real>(a: Vec4<R>, b: Vec4<R>) -> bool {
    let aa = dot(a, a);
    let bb = dot(b, b);
    let ab = dot(a, b);
    (aa * bb - ab * ab).abs() > R::of(1e-12) * aa * bb
}

/// Euclidean orthogonal projector onto `span{u, v}`.
fn projector<R: Real>(u: Vec4<R>, v: Vec4<R>) -> [[R; 4]; 4] {
    let nu = dot(u, u).sqrt();
    let e1 = [u[0] / nu, u[1] / nu, u[2] / nu, u[3] / nu];
    let p = dot(e1, v);
    let mut w = [R::zero(); 4];
    for i in 0..4 {
        w[i] = v[i] - p * e1[i];
    }
    let nw = dot(w, w).sqrt();
    let e2 = [w[0] / nw, w[1] / nw, w[2] / nw, w[3] / nw];
    let mut out = [[R::zero(); 4]; 4];
    for i in 0..4 {
        for j in 0..4 {
            out[i][j] = e1[i] * e1[j] + e2[i] * e2[j];
        }
    }
    out
}

/// The two boundary classes of a β-surface in `S²_∞`:
///
/// ```text
/// [[∓c₁ sinσ, cosσ], [±c₁ cosσ, sinσ], [±1, 0], [0, 0]]
/// ```
///
/// They depend only on `(σ, c₁)` and form an antipodal pair.
pub fn surface_endpoints<R: Real>(params: &BetaParams<R>) -> (GrassPoint<R>, GrassPoint<R>) {
    let (s, c) = (params.sigma.sin(), params.sigma.cos());
    let c1 = params.c1;
    let o = R::zero();
    let l = R::one();
    let first = GrassPoint::new([[-c1 * s, c], [c1 * c, s], [l, o], [o, o]])
        .expect("endpoint class has rank 2");
    let second = GrassPoint::new([[c1 * s, c], [-c1 * c, s], [-l, o], [o, o]])
        .expect("endpoint class has rank 2");
    (first, second)
}

/// A point on the β-surface of `params` in the chart fixed by `sign`, with
/// two free seeds. `r₁` is solved linearly in the base plane and `r₂` in the
/// fiber.
pub fn on_surface_point<R: Real>(
    f: &RadialProfile<R>,
    sign: MetricSign,
    params: &BetaParams<R>,
    seed_base: R,
    seed_fiber: R,
    cfg: &QuadratureConfig<R>,
) -> Result<ChartPoint<R>, SurfaceError> {
    let (s, c) = (params.sigma.sin(), params.sigma.cos());
    // Solve r₁ = −sσ x₁ + cσ x₂ − c₁ = 0 for the better-conditioned variable.
    let (x1, x2) = if c.abs() >= s.abs() {
        (seed_base, (params.c1 + s * seed_base) / c)
    } else {
        ((c * seed_base - params.c1) / s, seed_base)
    };
    let phi = varphi(f, x1, x2, params.sigma, cfg)?;
    let rhs = params.c2 - sign.factor::<R>() * phi;
    // Solve r₂ = cσ x₃ + sσ x₄ = rhs.
    let (x3, x4) = if c.abs() >= s.abs() {
        ((rhs - s * seed_fiber) / c, seed_fiber)
    } else {
        (seed_fiber, (rhs - c * seed_fiber) / s)
    };
    let chart = match sign {
        MetricSign::Plus => Chart::DPlus,
        MetricSign::Minus => Chart::DMinus,
    };
    Ok(ChartPoint {
        chart,
        coords: [x1, x2, x3, x4],
        fiber: None,
    })
}
