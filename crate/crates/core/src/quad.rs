//! Quadrature building blocks: adaptive composite Gauss-Legendre panels,
//! principal-value integration by symmetric-pair excision, and the periodic
//! trapezoid rule.

use num_complex::Complex;
use thiserror::Error;

use crate::scalar::Real;

/// Controls truncation and convergence of every integral in the crate.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QuadratureConfig<R: Real> {
    /// Initial panel count for composite rules. Must be even and >= 16.
    pub panels: usize,
    /// Truncation radius multiplier for integrals over the whole line.
    pub trunc_mult: R,
    /// Principal values use the symmetric-pair excision scheme. Kept as a
    /// switch so reports can record which scheme produced a number.
    pub pv_symmetric: bool,
    /// Target tolerance for panel-doubling convergence.
    pub tol: R,
}

impl<R: Real> Default for QuadratureConfig<R> {
    fn default() -> Self {
        Self {
            panels: 16,
            trunc_mult: R::of(10.0),
            pv_symmetric: true,
            tol: R::of(1e-9),
        }
    }
}

impl<R: Real> QuadratureConfig<R> {
    pub fn with_tol(tol: R) -> Self {
        Self {
            tol,
            ..Self::default()
        }
    }

    pub fn validate(&self) -> Result<(), QuadError> {
        if self.panels < 16 || self.panels % 2 != 0 {
            return Err(QuadError::BadConfig(format!(
                "panel count must be even and >= 16, got {}",
                self.panels
            )));
        }
        if !(self.tol.as_f64() > 0.0) || !(self.trunc_mult.as_f64() > 0.0) {
            return Err(QuadError::BadConfig(
                "tolerance and truncation multiplier must be positive".into(),
            ));
        }
        Ok(())
    }

    /// Truncation radius for a line integral whose integrand decays beyond
    /// `support` and is centred at offset `mu`.
    pub fn truncation(&self, support: R, mu: R) -> R {
        self.trunc_mult * support.max(mu.abs()) + R::of(5.0)
    }
}

#[derive(Debug, Error)]
pub enum QuadError {
    #[error("invalid quadrature config: {0}")]
    BadConfig(String),
    #[error(
        "quadrature did not stabilise: last two estimates {prev:e} and {last:e} \
         differ by {diff:e} after {panels} panels (tol {tol:e})"
    )]
    NotConverged {
        prev: f64,
        last: f64,
        diff: f64,
        panels: usize,
        tol: f64,
    },
    #[error("principal value did not stabilise near pole at {pole}: residual {diff:e}")]
    PoleNotResolved { pole: f64, diff: f64 },
}

/// Values a quadrature rule can accumulate: reals and complex numbers.
pub trait QuadValue<R: Real>:
    Copy
    + std::ops::Add<Output = Self>
    + std::ops::Sub<Output = Self>
    + std::ops::Mul<R, Output = Self>
{
    fn zero() -> Self;
    fn norm(self) -> R;
}

impl<R: Real> QuadValue<R> for R {
    fn zero() -> Self {
        R::zero()
    }
    fn norm(self) -> R {
        self.abs()
    }
}

impl<R: Real> QuadValue<R> for Complex<R> {
    fn zero() -> Self {
        Complex::new(R::zero(), R::zero())
    }
    fn norm(self) -> R {
        // sqrt-free bound is not enough for convergence tests; use the norm.
        self.norm()
    }
}

/// Nodes and weights of the `n`-point Gauss-Legendre rule on (-1, 1).
///
/// Newton iteration on the Legendre polynomial from the Chebyshev initial
/// guess; converges to machine precision in a handful of steps.
pub fn gauss_legendre<R: Real>(n: usize) -> (Vec<R>, Vec<R>) {
    assert!(n >= 2);
    let mut nodes = vec![R::zero(); n];
    let mut weights = vec![R::zero(); n];
    let nf = R::of(n as f64);
    for i in 0..(n + 1) / 2 {
        let theta = R::PI() * (R::of(i as f64) + R::of(0.75)) / (nf + R::of(0.5));
        let mut x = theta.cos();
        let mut pp = R::zero();
        for _ in 0..100 {
            // Legendre recurrence: p1 = P_n(x), p2 = P_{n-1}(x).
            let mut p1 = R::one();
            let mut p2 = R::zero();
            for j in 0..n {
                let p3 = p2;
                p2 = p1;
                let jf = R::of(j as f64);
                p1 = ((R::of(2.0) * jf + R::one()) * x * p2 - jf * p3) / (jf + R::one());
            }
            pp = nf * (x * p1 - p2) / (x * x - R::one());
            let dx = p1 / pp;
            x = x - dx;
            if dx.abs() <= R::epsilon() * R::of(4.0) {
                break;
            }
        }
        nodes[i] = -x;
        nodes[n - 1 - i] = x;
        let w = R::of(2.0) / ((R::one() - x * x) * pp * pp);
        weights[i] = w;
        weights[n - 1 - i] = w;
    }
    (nodes, weights)
}

const GL_ORDER: usize = 16;
const MAX_DOUBLINGS: usize = 14;

/// One pass of the composite Gauss-Legendre rule with `panels` panels.
fn composite_pass<R: Real, T: QuadValue<R>>(
    f: &impl Fn(R) -> T,
    a: R,
    b: R,
    panels: usize,
    nodes: &[R],
    weights: &[R],
) -> T {
    let h = (b - a) / R::of(panels as f64);
    let mut acc = T::zero();
    for p in 0..panels {
        let lo = a + h * R::of(p as f64);
        let mid = lo + h.half();
        let half = h.half();
        for (x, w) in nodes.iter().zip(weights) {
            acc = acc + f(mid + half * *x) * (*w * half);
        }
    }
    acc
}

/// Composite Gauss-Legendre on `[a, b]` with panel doubling until the last
/// two estimates agree to `cfg.tol` (relative to the magnitude of the
/// integral, floored at 1).
pub fn integrate<R: Real, T: QuadValue<R>>(
    f: impl Fn(R) -> T,
    a: R,
    b: R,
    cfg: &QuadratureConfig<R>,
) -> Result<T, QuadError> {
    cfg.validate()?;
    if a == b {
        return Ok(T::zero());
    }
    let (nodes, weights) = gauss_legendre::<R>(GL_ORDER);
    let mut panels = cfg.panels.max(2);
    let mut prev = composite_pass(&f, a, b, panels, &nodes, &weights);
    for _ in 0..MAX_DOUBLINGS {
        panels *= 2;
        let cur = composite_pass(&f, a, b, panels, &nodes, &weights);
        let diff = (cur - prev).norm();
        let scale = cur.norm().max(R::one());
        if diff <= cfg.tol * scale {
            return Ok(cur);
        }
        prev = cur;
    }
    let cur = composite_pass(&f, a, b, panels * 2, &nodes, &weights);
    let diff = (cur - prev).norm();
    if diff <= cfg.tol * cur.norm().max(R::one()) {
        return Ok(cur);
    }
    Err(QuadError::NotConverged {
        prev: prev.norm().as_f64(),
        last: cur.norm().as_f64(),
        diff: diff.as_f64(),
        panels: panels * 2,
        tol: cfg.tol.as_f64(),
    })
}

/// Principal value `pv ∫ φ(ν)/(ν−μ) dν` over the whole line by symmetric-pair
/// excision:
///
/// ```text
/// pv ∫ φ(ν)/(ν−μ) dν = ∫_0^∞ [φ(μ+u) − φ(μ−u)]/u du
/// ```
///
/// The integrand has a removable singularity at `u = 0`, so Gauss panels
/// (which never evaluate at panel ends) apply directly. `u_core` should cover
/// the decaying part of `φ` around `μ`; beyond it the pair difference decays
/// at worst like `1/u²` (that is the case when `φ` itself carries a Hilbert
/// `1/ν` tail), which is integrated on a log grid up to `u_core * 1e3` and
/// closed with an analytic `A/u²` tail estimate.
pub fn pv_symmetric_pairs<R: Real, T: QuadValue<R>>(
    phi: impl Fn(R) -> T,
    mu: R,
    u_core: R,
    cfg: &QuadratureConfig<R>,
) -> Result<T, QuadError> {
    if !cfg.pv_symmetric {
        return Err(QuadError::BadConfig(
            "only the symmetric-pair principal-value scheme is implemented".into(),
        ));
    }
    let pair = |u: R| (phi(mu + u) - phi(mu - u)) * u.recip();
    let core = integrate(&pair, R::zero(), u_core, cfg).map_err(|e| match e {
        QuadError::NotConverged { diff, .. } => QuadError::PoleNotResolved {
            pole: mu.as_f64(),
            diff,
        },
        other => other,
    })?;

    // Far region on a log grid: u = e^v, du = e^v dv.
    let u_far = u_core * R::of(1e3);
    let far = integrate(
        |v: R| {
            let u = v.exp();
            pair(u) * u
        },
        u_core.ln(),
        u_far.ln(),
        cfg,
    )?;

    // Tail beyond u_far assuming pair(u) ~ A/u²: ∫_{U}^∞ A/u² du = A/U.
    let a_est = pair(u_far) * (u_far * u_far);
    let tail = a_est * u_far.recip();
    Ok(core + far + tail)
}

/// Trapezoid rule for a periodic function over one period, doubled until
/// stable. Spectrally accurate for smooth periodic integrands.
pub fn integrate_periodic<R: Real, T: QuadValue<R>>(
    f: impl Fn(R) -> T,
    period: R,
    cfg: &QuadratureConfig<R>,
) -> Result<T, QuadError> {
    cfg.validate()?;
    let pass = |n: usize| {
        let h = period / R::of(n as f64);
        let mut acc = T::zero();
        for k in 0..n {
            acc = acc + f(h * R::of(k as f64)) * h;
        }
        acc
    };
    let mut n = cfg.panels.max(8);
    let mut prev = pass(n);
    for _ in 0..MAX_DOUBLINGS {
        n *= 2;
        let cur = pass(n);
        let diff = (cur - prev).norm();
        if diff <= cfg.tol * cur.norm().max(R::one()) {
            return Ok(cur);
        }
        prev = cur;
    }
    Err(QuadError::NotConverged {
        prev: prev.norm().as_f64(),
        last: prev.norm().as_f64(),
        diff: R::nan().as_f64(),
        panels: n,
        tol: cfg.tol.as_f64(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cfg() -> QuadratureConfig<f64> {
        QuadratureConfig::default()
    }

    #[test]
    fn gl_nodes_integrate_polynomials_exactly() {
        let (nodes, weights) = gauss_legendre::<f64>(16);
        // Degree-31 polynomial must be exact for a 16-point rule.
        let val: f64 = nodes
            .iter()
            .zip(&weights)
            .map(|(x, w)| w * x.powi(30))
            .sum();
        let exact = 2.0 / 31.0;
        assert!((val - exact).abs() < 1e-14, "got {val}, want {exact}");
    }

    #[test]
    fn gaussian_integral() {
        let v = integrate(|t: f64| (-t * t).exp(), -12.0, 12.0, &cfg()).unwrap();
        assert!((v - std::f64::consts::PI.sqrt()).abs() < 1e-12);
    }

    #[test]
    fn complex_integral() {
        let v = integrate(
            |t: f64| Complex::new(t.cos(), t.sin()),
            0.0,
            std::f64::consts::PI,
            &cfg(),
        )
        .unwrap();
        assert!((v - Complex::new(0.0, 2.0)).norm() < 1e-12);
    }

    #[test]
    fn pv_of_even_function_at_origin_vanishes() {
        let v = pv_symmetric_pairs(|t: f64| (-t * t).exp(), 0.0, 60.0, &cfg()).unwrap();
        assert!(v.abs() < 1e-12);
    }

    #[test]
    fn pv_against_dawson_series() {
        // pv ∫ e^{-t²}/(t-1) dt = -2√π D(1) with the Dawson function D.
        // D(1) from its Maclaurin series (converges fast at x=1).
        let x: f64 = 1.0;
        let mut term = x;
        let mut dawson = x;
        for k in 1..60 {
            term *= -2.0 * x * x / (2.0 * k as f64 + 1.0);
            dawson += term;
        }
        let expect = -2.0 * std::f64::consts::PI.sqrt() * dawson;
        let v = pv_symmetric_pairs(|t: f64| (-t * t).exp(), 1.0, 60.0, &cfg()).unwrap();
        assert!((v - expect).abs() < 1e-10, "got {v}, want {expect}");
    }

    #[test]
    fn periodic_average() {
        let v = integrate_periodic(
            |t: f64| 1.0 + t.cos() + (3.0 * t).sin(),
            2.0 * std::f64::consts::PI,
            &cfg(),
        )
        .unwrap();
        assert!((v - 2.0 * std::f64::consts::PI).abs() < 1e-12);
    }

    #[test]
    fn bad_config_rejected() {
        let mut c = cfg();
        c.panels = 7;
        assert!(c.validate().is_err());
    }
}
