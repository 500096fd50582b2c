//! Null geodesics inside β-surfaces: the `ν₀` ODE, asymptotic constants,
//! continuation across the equator, and the closure (Zollfrei) harness.
//!
//! By axisymmetry every non-fiber null geodesic is a rotation of one inside
//! a `σ = 0` surface, where it takes the form
//!
//! ```text
//! x₁± = s,  x₂± = c₁,  x₃± = c₂ ∓ φ(s, c₁, 0),  x₄± = ±ν₀(s) + q₁± s + q₂±
//! ```
//!
//! with `ν₀'' = ½ ∂₂f(s, c₁)`, `ν₀(0) = ν₀'(0) = 0`. Outside the support,
//! `ν₀(s) = A₁|s| + A₂`. The two branches glue into one closed curve iff
//! `q₁⁻ = q₁⁺` and `q₂⁻ = q₂⁺ + 2A₂`, which the junction limit below
//! measures directly.

use thiserror::Error;

use crate::charts::{Chart, ChartPoint, GrassPoint};
use crate::petean::MetricSign;
use crate::profile::{BivariateFn, RadialProfile};
use crate::quad::QuadratureConfig;
use crate::scalar::Real;
use crate::surfaces::{surface_endpoints, varphi, BetaParams, SurfaceError};
use crate::transforms::TransformError;

#[derive(Debug, Error)]
pub enum GeodesicError {
    #[error(transparent)]
    Transform(#[from] TransformError),
    #[error(transparent)]
    Surface(#[from] SurfaceError),
    #[error("integration range S = {s} must exceed 3 R_f = {min}")]
    RangeTooSmall { s: f64, min: f64 },
    #[error(
        "asymptotic regime not reached: linear fit residual {residual:e} exceeds {tol:e}; \
         increase S"
    )]
    AsymptoticRegime { residual: f64, tol: f64 },
    #[error("sample |s| = {0} beyond the integrated range {1} and inside the support")]
    OutOfRange(f64, f64),
}

/// Solution of `ν₀'' = ½∂₂f(s, c₁)` with `ν₀(0) = ν₀'(0) = 0`, integrated on
/// `[-S, S]`, together with the asymptotic constants of `ν₀ = A₁|s| + A₂`.
#[derive(Debug, Clone)]
pub struct Nu0Solution<R: Real> {
    pub c1: R,
    pub a1: R,
    pub a2: R,
    pub tol: R,
    s_max: R,
    step: R,
    /// `(ν₀, ν₀')` at the grid points `-S + k·h`.
    samples: Vec<(R, R)>,
    support: R,
}

impl<R: Real> Nu0Solution<R> {
    /// `ν₀(s)`: cubic Hermite on the grid inside `[-S, S]`, the exact linear
    /// asymptote outside.
    pub fn nu0(&self, s: R) -> R {
        if s.abs() >= self.support {
            return self.a1 * s.abs() + self.a2;
        }
        let (v, _) = self.hermite(s);
        v
    }

    /// `ν₀'(s)`.
    pub fn nu0_prime(&self, s: R) -> R {
        if s.abs() >= self.support {
            return if s >= R::zero() { self.a1 } else { -self.a1 };
        }
        let (_, d) = self.hermite(s);
        d
    }

    pub fn s_max(&self) -> R {
        self.s_max
    }

    /// Max evenness violation `|ν₀(s) − ν₀(−s)|` over the grid.
    pub fn evenness_residual(&self) -> R {
        let n = self.samples.len();
        let mut worst = R::zero();
        for k in 0..n / 2 {
            let diff = (self.samples[k].0 - self.samples[n - 1 - k].0).abs();
            worst = worst.max(diff);
        }
        worst
    }

    fn hermite(&self, s: R) -> (R, R) {
        let h = self.step;
        let pos = (s + self.s_max) / h;
        let idx = pos
            .floor()
            .as_f64()
            .max(0.0)
            .min((self.samples.len() - 2) as f64) as usize;
        let s0 = -self.s_max + h * R::of(idx as f64);
        let t = (s - s0) / h;
        let (y0, d0) = self.samples[idx];
        let (y1, d1) = self.samples[idx + 1];
        // Cubic Hermite basis.
        let t2 = t * t;
        let t3 = t2 * t;
        let h00 = R::of(2.0) * t3 - R::of(3.0) * t2 + R::one();
        let h10 = t3 - R::of(2.0) * t2 + t;
        let h01 = -R::of(2.0) * t3 + R::of(3.0) * t2;
        let h11 = t3 - t2;
        let v = h00 * y0 + h10 * h * d0 + h01 * y1 + h11 * h * d1;
        let dh00 = R::of(6.0) * (t2 - t);
        let dh10 = R::of(3.0) * t2 - R::of(4.0) * t + R::one();
        let dh01 = -dh00;
        let dh11 = R::of(3.0) * t2 - R::of(2.0) * t;
        let d = (dh00 * y0 + dh01 * y1) / h + dh10 * d0 + dh11 * d1;
        (v, d)
    }
}

/// Integrate the `ν₀` equation with fixed-step RK4 on `[-S, S]` and fit the
/// asymptotic constants `A₁ = ν₀'(S)`, `A₂ = ν₀(S) − A₁S`, verifying the
/// linear fit on `[R_f, S]`.
pub fn solve_nu0<R: Real>(
    f: &RadialProfile<R>,
    c1: R,
    s_max: R,
    tol: R,
) -> Result<Nu0Solution<R>, GeodesicError> {
    let support = f.cutoff() * R::of(1.5);
    let min_s = f.cutoff() * R::of(3.0);
    if s_max <= min_s {
        return Err(GeodesicError::RangeTooSmall {
            s: s_max.as_f64(),
            min: min_s.as_f64(),
        });
    }
    let rhs = |s: R| f.grad(s, c1).1.half();
    let h_target = (s_max * R::of(1e-3)).min(R::of(5e-3));
    let half_n = (s_max / h_target).as_f64().ceil() as usize;
    let h = s_max / R::of(half_n as f64);

    // March from 0 out to +S and to −S; the grid stores both halves.
    let mut fwd = Vec::with_capacity(half_n + 1);
    let mut y = (R::zero(), R::zero());
    fwd.push(y);
    for k in 0..half_n {
        let s = h * R::of(k as f64);
        y = rk4_step(rhs, s, y, h);
        fwd.push(y);
    }
    let mut bwd = Vec::with_capacity(half_n + 1);
    let mut y = (R::zero(), R::zero());
    bwd.push(y);
    for k in 0..half_n {
        let s = -h * R::of(k as f64);
        y = rk4_step(rhs, s, y, -h);
        bwd.push(y);
    }
    let mut samples = Vec::with_capacity(2 * half_n + 1);
    for k in (1..=half_n).rev() {
        samples.push(bwd[k]);
    }
    samples.extend(fwd.iter().copied());

    let (v_end, d_end) = fwd[half_n];
    let a1 = d_end;
    let a2 = v_end - a1 * s_max;
    // Verify the fit where f has decayed.
    let mut residual = R::zero();
    for k in 0..=half_n {
        let s = h * R::of(k as f64);
        if s >= support {
            let fit = a1 * s + a2;
            residual = residual.max((fwd[k].0 - fit).abs());
        }
    }
    if residual > tol {
        return Err(GeodesicError::AsymptoticRegime {
            residual: residual.as_f64(),
            tol: tol.as_f64(),
        });
    }
    Ok(Nu0Solution {
        c1,
        a1,
        a2,
        tol,
        s_max,
        step: h,
        samples,
        support,
    })
}

fn rk4_step<R: Real>(rhs: impl Fn(R) -> R, s: R, y: (R, R), h: R) -> (R, R) {
    // y = (ν, ν'); ν'' = rhs(s) depends on s only.
    let (v, d) = y;
    let k1 = (d, rhs(s));
    let k2 = (d + k1.1 * h.half(), rhs(s + h.half()));
    let k3 = (d + k2.1 * h.half(), rhs(s + h.half()));
    let k4 = (d + k3.1 * h, rhs(s + h));
    let six = R::of(6.0);
    (
        v + h * (k1.0 + R::of(2.0) * k2.0 + R::of(2.0) * k3.0 + k4.0) / six,
        d + h * (k1.1 + R::of(2.0) * k2.1 + R::of(2.0) * k3.1 + k4.1) / six,
    )
}

/// Parameters of a candidate closed null geodesic at `σ = 0`: the branch on
/// `TD₊` uses `(q₁⁺, q₂⁺)`, the branch on `TD₋` uses `(q₁⁻, q₂⁻)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GeodesicSpec<R: Real> {
    pub c1: R,
    pub c2: R,
    pub q1_plus: R,
    pub q2_plus: R,
    pub q1_minus: R,
    pub q2_minus: R,
}

impl<R: Real> GeodesicSpec<R> {
    /// The matched spec through `(q₁, q₂⁺)`: `q₁⁻ = q₁⁺` and
    /// `q₂⁻ = q₂⁺ + 2A₂` (the junction condition measured by
    /// [`closure_gap`]).
    pub fn matched(c1: R, c2: R, q1: R, q2_plus: R, nu0: &Nu0Solution<R>) -> Self {
        Self {
            c1,
            c2,
            q1_plus: q1,
            q2_plus,
            q1_minus: q1,
            q2_minus: q2_plus + R::of(2.0) * nu0.a2,
        }
    }

    pub fn is_matched(&self, nu0: &Nu0Solution<R>, tol: R) -> bool {
        (self.q1_minus - self.q1_plus).abs() <= tol
            && (self.q2_minus - self.q2_plus - R::of(2.0) * nu0.a2).abs() <= tol
    }
}

/// Branch of the geodesic: which chart the arc lives in.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Branch {
    Plus,
    Minus,
}

/// The geodesic point at parameter `s` on the chosen branch.
pub fn geodesic_point<R: Real>(
    f: &RadialProfile<R>,
    spec: &GeodesicSpec<R>,
    nu0: &Nu0Solution<R>,
    branch: Branch,
    s: R,
    cfg: &QuadratureConfig<R>,
) -> Result<ChartPoint<R>, GeodesicError> {
    let phi = varphi_clamped(f, s, spec.c1, cfg)?;
    let (x3, x4, chart) = match branch {
        Branch::Plus => (
            spec.c2 - phi,
            nu0.nu0(s) + spec.q1_plus * s + spec.q2_plus,
            Chart::DPlus,
        ),
        Branch::Minus => (
            spec.c2 + phi,
            -nu0.nu0(s) + spec.q1_minus * s + spec.q2_minus,
            Chart::DMinus,
        ),
    };
    Ok(ChartPoint {
        chart,
        coords: [s, spec.c1, x3, x4],
        fiber: None,
    })
}

/// `φ(s, c₁, 0)` with the integration endpoint clamped to the truncation
/// radius: beyond it the integrand is below the rapid-decay threshold, so
/// the clamp changes nothing while keeping huge `|s|` cheap.
fn varphi_clamped<R: Real>(
    f: &RadialProfile<R>,
    s: R,
    c1: R,
    cfg: &QuadratureConfig<R>,
) -> Result<R, TransformError> {
    let u = cfg.truncation(f.cutoff(), c1);
    let clamped = s.max(-u).min(u);
    varphi(f, clamped, c1, R::zero(), cfg)
}

/// The tangent of the branch curve, `ċ = ∂₁ − (F/2)∂₃ + ν'∂₄` with `F` the
/// coefficient of the branch metric.
pub fn geodesic_velocity<R: Real>(
    f: &RadialProfile<R>,
    spec: &GeodesicSpec<R>,
    nu0: &Nu0Solution<R>,
    branch: Branch,
    s: R,
) -> [R; 4] {
    let fval = f.value(s, spec.c1);
    match branch {
        Branch::Plus => [
            R::one(),
            R::zero(),
            -fval.half(),
            nu0.nu0_prime(s) + spec.q1_plus,
        ],
        Branch::Minus => [
            R::one(),
            R::zero(),
            fval.half(),
            -nu0.nu0_prime(s) + spec.q1_minus,
        ],
    }
}

/// Metric sign of a branch.
pub fn branch_sign(branch: Branch) -> MetricSign {
    match branch {
        Branch::Plus => MetricSign::Plus,
        Branch::Minus => MetricSign::Minus,
    }
}

/// W-chart coordinates of the geodesic near the junction `u = 0`, on either
/// side, through the chart transition of the branch point at `s = −1/u`.
fn junction_coords<R: Real>(
    f: &RadialProfile<R>,
    spec: &GeodesicSpec<R>,
    nu0: &Nu0Solution<R>,
    u: R,
    cfg: &QuadratureConfig<R>,
) -> Result<[R; 4], GeodesicError> {
    let s = -u.recip();
    // u < 0 ↦ s > 0 on the TD₊ branch; u > 0 ↦ s < 0 on the TD₋ branch.
    let branch = if u < R::zero() {
        Branch::Plus
    } else {
        Branch::Minus
    };
    let p = geodesic_point(f, spec, nu0, branch, s, cfg)?;
    let w = crate::charts::transition(&p, Chart::W).map_err(|e| {
        GeodesicError::Surface(SurfaceError::Transform(TransformError::Quad(
            crate::quad::QuadError::BadConfig(format!("junction transition failed: {e}")),
        )))
    })?;
    Ok(w.coords)
}

/// Polynomial extrapolation of value and slope at `u = 0` from samples
/// `(us[k], vs[k])` by the Newton divided-difference form.
fn extrapolate_value_slope<R: Real>(us: &[R], vs: &[R]) -> (R, R) {
    let n = us.len();
    // Rescale nodes for conditioning.
    let scale = us.iter().fold(R::zero(), |m, u| m.max(u.abs()));
    let w: Vec<R> = us.iter().map(|&u| u / scale).collect();
    let mut coef = vs.to_vec();
    for j in 1..n {
        for i in (j..n).rev() {
            coef[i] = (coef[i] - coef[i - 1]) / (w[i] - w[i - j]);
        }
    }
    // Evaluate p and p' at 0 from the Newton form.
    let mut val = coef[n - 1];
    let mut der = R::zero();
    for i in (0..n - 1).rev() {
        der = der * (R::zero() - w[i]) + val;
        val = val * (R::zero() - w[i]) + coef[i];
    }
    (val, der / scale)
}

/// Junction mismatch of the geodesic across `u = 0`: richardson-extrapolate
/// the W-chart coordinates and their `u`-slopes from both sides and return
/// the worst discrepancy. Zero (to tolerance) iff the spec is matched.
pub fn closure_gap<R: Real>(
    f: &RadialProfile<R>,
    spec: &GeodesicSpec<R>,
    nu0: &Nu0Solution<R>,
    cfg: &QuadratureConfig<R>,
) -> Result<R, GeodesicError> {
    // Five geometric u-values per side in [1e-4, 1e-2].
    let us: Vec<R> = (0..5)
        .map(|k| R::of(1e-2 * 10f64.powf(-(k as f64) / 2.0)))
        .collect();
    let mut gap = R::zero();
    let mut plus_side = [[R::zero(); 5]; 4];
    let mut minus_side = [[R::zero(); 5]; 4];
    for (k, &u) in us.iter().enumerate() {
        let cm = junction_coords(f, spec, nu0, -u, cfg)?;
        let cp = junction_coords(f, spec, nu0, u, cfg)?;
        for i in 0..4 {
            minus_side[i][k] = cm[i];
            plus_side[i][k] = cp[i];
        }
    }
    let neg_us: Vec<R> = us.iter().map(|&u| -u).collect();
    for i in 0..4 {
        let (v_m, s_m) = extrapolate_value_slope(&neg_us, &minus_side[i]);
        let (v_p, s_p) = extrapolate_value_slope(&us, &plus_side[i]);
        gap = gap.max((v_m - v_p).abs()).max((s_m - s_p).abs());
    }
    Ok(gap)
}

/// Limit classes in `S²_∞` of a fiber-line geodesic through the `TD₊` base
/// point `(x₁, x₂)` with direction `a∂₃ + b∂₄`, for `s → ±∞`.
pub fn fiber_line_endpoints<R: Real>(
    x1: R,
    x2: R,
    a: R,
    b: R,
) -> (GrassPoint<R>, GrassPoint<R>) {
    let o = R::zero();
    let l = R::one();
    let fwd = GrassPoint::new([[x1, -b], [x2, a], [l, o], [o, o]])
        .expect("fiber endpoint class has rank 2");
    let bwd = GrassPoint::new([[x1, b], [x2, -a], [l, o], [o, o]])
        .expect("fiber endpoint class has rank 2");
    (fwd, bwd)
}

/// Classification of one scanned geodesic.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum GeodesicClass {
    Closed,
    EndsAtSingularSurface,
    Unclassified,
}

#[derive(Debug, Clone)]
pub struct ScanEntry<R: Real> {
    pub c1: R,
    pub q1: R,
    pub class: GeodesicClass,
    pub gap: R,
}

#[derive(Debug, Clone)]
pub struct ScanReport<R: Real> {
    pub entries: Vec<ScanEntry<R>>,
    pub failures: usize,
}

/// Scan a `(c₁, q₁)` grid of matched candidate geodesics plus a ring of
/// fiber lines; every sample must classify as closed or as a line ending at
/// the antipodal pair on `S²_∞`.
pub fn zollfrei_scan<R: Real>(
    f: &RadialProfile<R>,
    c1_values: &[R],
    q1_values: &[R],
    tol: R,
    cfg: &QuadratureConfig<R>,
) -> Result<ScanReport<R>, GeodesicError> {
    let s_max = f.cutoff() * R::of(4.0) + R::of(5.0);
    let mut entries = Vec::new();
    let mut failures = 0usize;
    for &c1 in c1_values {
        let nu0 = solve_nu0(f, c1, s_max, R::of(1e-7))?;
        for &q1 in q1_values {
            let spec = GeodesicSpec::matched(c1, R::zero(), q1, R::zero(), &nu0);
            let gap = closure_gap(f, &spec, &nu0, cfg)?;
            let class = if gap < tol {
                GeodesicClass::Closed
            } else {
                failures += 1;
                GeodesicClass::Unclassified
            };
            entries.push(ScanEntry {
                c1,
                q1,
                class,
                gap,
            });
        }
    }
    // Fiber lines: one per c₁, direction from σ = 0 (𝔫₂ = −∂₄ there); the
    // containing surface has c₁ = x₂ at σ = 0.
    for &c1 in c1_values {
        let (fwd, bwd) = fiber_line_endpoints(R::of(0.3), c1, R::zero(), -R::one());
        let params = BetaParams::new(R::zero(), c1, R::zero());
        let (e1, e2) = surface_endpoints(&params);
        let direct = fwd
            .class_distance(&e1)
            .min(fwd.class_distance(&e2))
            .max(bwd.class_distance(&e1).min(bwd.class_distance(&e2)));
        let antipodality = fwd.class_distance(&bwd.antipodal());
        let gap = direct.max(antipodality);
        let class = if gap < R::of(1e-8) {
            GeodesicClass::EndsAtSingularSurface
        } else {
            failures += 1;
            GeodesicClass::Unclassified
        };
        entries.push(ScanEntry {
            c1,
            q1: R::zero(),
            class,
            gap,
        });
    }
    Ok(ScanReport { entries, failures })
}

/// Rotation of `TD±` coordinates by the axisymmetry action: both complex
/// pairs `(x₁ + ix₂)` and `(−x₄ + ix₃)` rotate by `e^{iτ}`. Geodesics at
/// general `σ` are the rotations of the `σ = 0` ones.
pub fn rotate_d_chart<R: Real>(x: [R; 4], tau: R) -> [R; 4] {
    let (s, c) = (tau.sin(), tau.cos());
    let (x1, x2, x3, x4) = (x[0], x[1], x[2], x[3]);
    [
        c * x1 - s * x2,
        s * x1 + c * x2,
        s * (-x4) + c * x3,
        -(c * (-x4) - s * x3),
    ]
}
