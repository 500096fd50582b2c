//! Radon, dual Radon, half-Radon and principal-value Hilbert transforms on
//! rapidly decreasing functions, plus the inversion-formula residual.
//!
//! Conventions: the Radon transform of `f` is
//! `f̂(σ,μ) = ∫ f(t cosσ − μ sinσ, t sinσ + μ cosσ) dt`; for axisymmetric `f`
//! it is even in `μ` and σ-independent. The Hilbert transform carries the
//! factor `i/π`:
//!
//! ```text
//! (ℋφ)(μ) = (i/π) pv ∫ φ(ν)/(ν−μ) dν
//! ```
//!
//! so `ℋ² = id` and ℋ exchanges real-valued with imaginary-valued functions
//! (the classical convention omits the `i`; multiply by `−i` to translate).
//! The inversion formula is `f = (1/2i) (∂_μ ℋ_μ f̂)^∨`.

use num_complex::Complex;
use thiserror::Error;

use crate::profile::{BivariateFn, RadialProfile};
use crate::quad::{self, QuadError, QuadratureConfig};
use crate::scalar::Real;
use crate::spline::{CubicSpline, SplineError};

#[derive(Debug, Error)]
pub enum TransformError {
    #[error(transparent)]
    Quad(#[from] QuadError),
    #[error("transform grid: {0}")]
    Grid(#[from] SplineError),
}

/// Sign of a one-sided integral `∫_0^{±∞}`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum HalfSign {
    Plus,
    Minus,
}

/// A function on the space of oriented lines, `φ(σ, μ)`.
pub struct LineFunction<R: Real, F: Fn(R, R) -> Complex<R>> {
    pub phi: F,
    pub even_in_mu: bool,
    pub sigma_independent: bool,
    _marker: std::marker::PhantomData<R>,
}

impl<R: Real, F: Fn(R, R) -> Complex<R>> LineFunction<R, F> {
    pub fn new(phi: F, even_in_mu: bool, sigma_independent: bool) -> Self {
        Self {
            phi,
            even_in_mu,
            sigma_independent,
            _marker: std::marker::PhantomData,
        }
    }

    /// Spot-check the σ-independence flag on a few samples.
    pub fn check_flags(&self, mus: &[R], tol: R) -> bool {
        if !self.sigma_independent {
            return true;
        }
        for &mu in mus {
            let base = (self.phi)(R::zero(), mu);
            for k in 1..8 {
                let sigma = R::of(2.0) * R::PI() * R::of(k as f64 / 8.0);
                if ((self.phi)(sigma, mu) - base).norm() > tol {
                    return false;
                }
            }
        }
        true
    }
}

/// Radon transform of an axisymmetric profile: `f̂(μ) = ∫ f(√(t²+μ²)) dt`.
pub fn radon<R: Real>(
    f: &RadialProfile<R>,
    mu: R,
    cfg: &QuadratureConfig<R>,
) -> Result<R, TransformError> {
    if f.is_zero() {
        cfg.validate()?;
        return Ok(R::zero());
    }
    let u = cfg.truncation(f.cutoff(), mu);
    let v = quad::integrate(|t: R| f.value_r((t * t + mu * mu).sqrt()), -u, u, cfg)?;
    Ok(v)
}

/// Radon transform along the line with direction angle `σ`, the general form.
/// For axisymmetric profiles this equals [`radon`] for every `σ`.
pub fn radon_along<R: Real>(
    f: &RadialProfile<R>,
    sigma: R,
    mu: R,
    cfg: &QuadratureConfig<R>,
) -> Result<R, TransformError> {
    if f.is_zero() {
        cfg.validate()?;
        return Ok(R::zero());
    }
    let (c, s) = (sigma.cos(), sigma.sin());
    let u = cfg.truncation(f.cutoff(), mu);
    let v = quad::integrate(|t: R| f.value(c * t - s * mu, s * t + c * mu), -u, u, cfg)?;
    Ok(v)
}

/// Half Radon transform `f̂^(±)(σ,μ) = ∫_0^{±∞} f(..) dt` (oriented: the
/// minus branch integrates from 0 towards −∞, so for axisymmetric `f`,
/// `f̂^(+) = −f̂^(−) = f̂/2`).
pub fn half_radon<R: Real>(
    f: &RadialProfile<R>,
    sigma: R,
    mu: R,
    sign: HalfSign,
    cfg: &QuadratureConfig<R>,
) -> Result<R, TransformError> {
    if f.is_zero() {
        cfg.validate()?;
        return Ok(R::zero());
    }
    let (c, s) = (sigma.cos(), sigma.sin());
    let u = cfg.truncation(f.cutoff(), mu);
    let end = match sign {
        HalfSign::Plus => u,
        HalfSign::Minus => -u,
    };
    let v = quad::integrate(
        |t: R| f.value(c * t - s * mu, s * t + c * mu),
        R::zero(),
        end,
        cfg,
    )?;
    Ok(v)
}

/// Dual transform: `φ^∨(x) = (1/2π) ∫_{S¹} φ(σ, μ(x,σ)) dσ` with
/// `μ(x,σ) = −x₁ sinσ + x₂ cosσ`.
pub fn dual_radon<R: Real>(
    phi: impl Fn(R, R) -> Complex<R>,
    x: (R, R),
    cfg: &QuadratureConfig<R>,
) -> Result<Complex<R>, TransformError> {
    let two_pi = R::of(2.0) * R::PI();
    let v = quad::integrate_periodic(
        |sigma: R| {
            let mu = -x.0 * sigma.sin() + x.1 * sigma.cos();
            phi(sigma, mu)
        },
        two_pi,
        cfg,
    )?;
    Ok(v / two_pi)
}

/// Hilbert transform `(ℋφ)(μ) = (i/π) pv ∫ φ(ν)/(ν−μ) dν` of a function
/// whose significant support lies within radius `support`.
pub fn hilbert<R: Real>(
    phi: impl Fn(R) -> Complex<R>,
    support: R,
    mu: R,
    cfg: &QuadratureConfig<R>,
) -> Result<Complex<R>, TransformError> {
    cfg.validate()?;
    let u_core = cfg.truncation(support, mu) + mu.abs();
    let pv = quad::pv_symmetric_pairs(phi, mu, u_core, cfg)?;
    Ok(pv * Complex::new(R::zero(), R::one() / R::PI()))
}

// ---------------------------------------------------------------------------
// Cached line functions
// ---------------------------------------------------------------------------

/// A smooth function on the line sampled onto a spline, with an exponential
/// continuation fitted beyond the grid. Used to cache the Radon transform.
pub struct SampledLine<R: Real> {
    spline: CubicSpline<R>,
    decay_rate: R,
}

impl<R: Real> SampledLine<R> {
    pub fn from_fn(
        g: impl Fn(R) -> Result<R, TransformError>,
        lo: R,
        hi: R,
        n: usize,
    ) -> Result<Self, TransformError> {
        let n = n.max(8);
        let mut xs = Vec::with_capacity(n + 1);
        let mut ys = Vec::with_capacity(n + 1);
        for i in 0..=n {
            let x = lo + (hi - lo) * R::of(i as f64 / n as f64);
            xs.push(x);
            ys.push(g(x)?);
        }
        let m = xs.len();
        let (y_prev, y_last) = (ys[m - 2], ys[m - 1]);
        let decay_rate = if y_last != R::zero() && y_prev.abs() > y_last.abs() {
            ((y_prev.abs() / y_last.abs()).ln() / (xs[m - 1] - xs[m - 2])).max(R::one())
        } else {
            R::one()
        };
        Ok(Self {
            spline: CubicSpline::new(xs, ys)?,
            decay_rate,
        })
    }

    pub fn x_max(&self) -> R {
        self.spline.x_max()
    }

    pub fn eval(&self, x: R) -> R {
        if x > self.spline.x_max() {
            let edge = self.spline.eval(self.spline.x_max());
            edge * (-self.decay_rate * (x - self.spline.x_max())).exp()
        } else if x < self.spline.x_min() {
            let edge = self.spline.eval(self.spline.x_min());
            edge * (-self.decay_rate * (self.spline.x_min() - x)).exp()
        } else {
            self.spline.eval(x)
        }
    }
}

/// Cached Radon transform of an axisymmetric profile: sampled on `[0, U]`
/// and evaluated through the even symmetry `f̂(−μ) = f̂(μ)`.
pub struct RadonCache<R: Real> {
    line: SampledLine<R>,
}

impl<R: Real> RadonCache<R> {
    /// The knot count scales with `cfg.panels`, so halving the quadrature
    /// step in a refinement study also refines this cache.
    pub fn build(f: &RadialProfile<R>, cfg: &QuadratureConfig<R>) -> Result<Self, TransformError> {
        let u = cfg.truncation(f.cutoff(), R::zero());
        let n = 32 * cfg.panels;
        let line = SampledLine::from_fn(|mu| radon(f, mu, cfg), R::zero(), u, n)?;
        Ok(Self { line })
    }

    pub fn eval(&self, mu: R) -> R {
        self.line.eval(mu.abs())
    }

    pub fn support(&self) -> R {
        self.line.x_max()
    }
}

/// Cached Hilbert transform of a real even function (such as `f̂`): an
/// imaginary odd function with a slowly decaying `c/ν` tail which the cache
/// models explicitly so that a second transform can reach it.
pub struct HilbertCache<R: Real> {
    /// Imaginary part of ℋφ on `[0, L]` (odd in ν).
    line: CubicSpline<R>,
    /// ℋφ(ν) ≈ i c/ν beyond the grid.
    tail_c: R,
}

impl<R: Real> HilbertCache<R> {
    pub fn build(
        phi: impl Fn(R) -> Complex<R>,
        support: R,
        cfg: &QuadratureConfig<R>,
    ) -> Result<Self, TransformError> {
        let l = cfg.truncation(support, R::zero()) * R::of(2.0);
        let n = 32 * cfg.panels;
        let mut xs = Vec::with_capacity(n + 1);
        let mut ys = Vec::with_capacity(n + 1);
        for i in 0..=n {
            let nu = l * R::of(i as f64 / n as f64);
            let v = hilbert(&phi, support, nu, cfg)?;
            xs.push(nu);
            ys.push(v.im);
        }
        let tail_c = ys[n] * xs[n];
        Ok(Self {
            line: CubicSpline::new(xs, ys)?,
            tail_c,
        })
    }

    pub fn eval(&self, nu: R) -> Complex<R> {
        let a = nu.abs();
        let im = if a > self.line.x_max() {
            self.tail_c / a
        } else {
            self.line.eval(a)
        };
        let im = if nu < R::zero() { -im } else { im };
        Complex::new(R::zero(), im)
    }
}

// ---------------------------------------------------------------------------
// Inversion formula
// ---------------------------------------------------------------------------

/// Five-point central difference with step `h`.
pub fn stencil5<R: Real>(g: impl Fn(R) -> R, x: R, h: R) -> R {
    let two = R::of(2.0);
    (-g(x + two * h) + R::of(8.0) * g(x + h) - R::of(8.0) * g(x - h) + g(x - two * h))
        / (R::of(12.0) * h)
}

/// Max relative reconstruction error of the inversion formula
/// `f = (1/2i)(∂_μ ℋ_μ f̂)^∨` over the given sample points.
///
/// The pipeline caches `f̂` on a spline whose resolution is tied to
/// `cfg.panels`, evaluates `ℋf̂` by principal-value quadrature of the cache,
/// differentiates with a 5-point stencil of step `1e-3`, and closes with the
/// periodic dual transform.
pub fn inversion_residual<R: Real>(
    f: &RadialProfile<R>,
    grid: &[(R, R)],
    cfg: &QuadratureConfig<R>,
) -> Result<R, TransformError> {
    if f.is_zero() {
        cfg.validate()?;
        return Ok(R::zero());
    }
    let cache = RadonCache::build(f, cfg)?;
    let support = cache.support();
    let hf = |nu: R| -> Result<Complex<R>, TransformError> {
        hilbert(|v| Complex::new(cache.eval(v), R::zero()), support, nu, cfg)
    };
    let h_step = R::of(1e-3);
    let max_f = f.max_abs();
    let mut worst = R::zero();
    for &(x1, x2) in grid {
        // ∂_μ ℋ f̂ evaluated where the dual transform needs it. Errors inside
        // the closure are deferred through a NaN and re-checked after.
        let deriv = |mu: R| -> Complex<R> {
            let two = R::of(2.0);
            let eval = |m: R| hf(m).unwrap_or(Complex::new(R::nan(), R::nan()));
            (-eval(mu + two * h_step) + eval(mu + h_step) * R::of(8.0)
                - eval(mu - h_step) * R::of(8.0)
                + eval(mu - two * h_step))
                / Complex::new(R::of(12.0) * h_step, R::zero())
        };
        let dual = dual_radon(|_sigma, mu| deriv(mu), (x1, x2), cfg)?;
        // (1/2i) z = −iz/2.
        let rec = dual * Complex::new(R::zero(), -R::of(0.5));
        if !rec.re.is_finite() {
            return Err(QuadError::PoleNotResolved {
                pole: f64::NAN,
                diff: f64::NAN,
            }
            .into());
        }
        let err = (rec.re - f.value(x1, x2)).abs().max(rec.im.abs());
        worst = worst.max(err);
    }
    Ok(worst / max_f)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cfg() -> QuadratureConfig<f64> {
        QuadratureConfig::default()
    }

    fn gaussian() -> RadialProfile<f64> {
        RadialProfile::gaussian(1.0, 1.0)
    }

    const SQRT_PI: f64 = 1.7724538509055159;

    #[test]
    fn radon_of_zero() {
        let f = RadialProfile::<f64>::zero();
        assert_eq!(radon(&f, 1.0, &cfg()).unwrap(), 0.0);
    }

    #[test]
    fn radon_gaussian_closed_form() {
        // f(r) = e^{-r²}: f̂(μ) = √π e^{-μ²}.
        let f = gaussian();
        let v0 = radon(&f, 0.0, &cfg()).unwrap();
        assert!((v0 - SQRT_PI).abs() < 1e-10, "got {v0}");
        let v1 = radon(&f, 1.0, &cfg()).unwrap();
        assert!((v1 - SQRT_PI * (-1.0f64).exp()).abs() < 1e-10, "got {v1}");
    }

    #[test]
    fn radon_even_and_sigma_independent() {
        let f = RadialProfile::gaussian_mixture(&[(1.0, 1.0), (-0.5, 2.0)], 6.0).unwrap();
        for i in 0..16 {
            let mu = -3.0 + 0.4 * i as f64;
            let base = radon(&f, mu, &cfg()).unwrap();
            assert!((radon(&f, -mu, &cfg()).unwrap() - base).abs() < 1e-10);
            for k in 0..8 {
                let sigma = 2.0 * std::f64::consts::PI * k as f64 / 8.0;
                let v = radon_along(&f, sigma, mu, &cfg()).unwrap();
                assert!((v - base).abs() < 1e-9, "sigma={sigma} mu={mu}");
            }
        }
    }

    #[test]
    fn half_radon_gaussian() {
        let f = gaussian();
        let v = half_radon(&f, 0.0, 0.0, HalfSign::Plus, &cfg()).unwrap();
        assert!((v - SQRT_PI / 2.0).abs() < 1e-10, "got {v}");
        // Oriented: the minus branch is the negative half for axisymmetric f.
        let m = half_radon(&f, 0.0, 0.7, HalfSign::Minus, &cfg()).unwrap();
        let p = half_radon(&f, 0.0, 0.7, HalfSign::Plus, &cfg()).unwrap();
        let full = radon(&f, 0.7, &cfg()).unwrap();
        assert!((p + m).abs() < 1e-10);
        assert!((p - 0.5 * full).abs() < 1e-10);
        assert!((p - m - full).abs() < 1e-10);
    }

    #[test]
    fn dual_radon_constant_and_gaussian() {
        let c = dual_radon(
            |_s, _m| Complex::new(2.5, 0.0),
            (0.3, -1.2),
            &cfg(),
        )
        .unwrap();
        assert!((c.re - 2.5).abs() < 1e-12);

        // φ(σ,μ)=e^{−μ²} at x=(0,0): μ(0,σ)=0 for all σ.
        let v = dual_radon(
            |_s, mu: f64| Complex::new((-mu * mu).exp(), 0.0),
            (0.0, 0.0),
            &cfg(),
        )
        .unwrap();
        assert!((v.re - 1.0).abs() < 1e-12);

        // x=(1,0): (1/2π) ∫ e^{−sin²σ} dσ, cross-checked by direct quadrature.
        let v = dual_radon(
            |_s, mu: f64| Complex::new((-mu * mu).exp(), 0.0),
            (1.0, 0.0),
            &cfg(),
        )
        .unwrap();
        let oracle = quad::integrate(
            |s: f64| (-(s.sin().powi(2))).exp(),
            0.0,
            2.0 * std::f64::consts::PI,
            &cfg(),
        )
        .unwrap()
            / (2.0 * std::f64::consts::PI);
        assert!((v.re - oracle).abs() < 1e-11);
    }

    #[test]
    fn hilbert_gaussian() {
        // Even real input ↦ odd imaginary output; zero at the origin.
        let phi = |v: f64| Complex::new((-v * v).exp(), 0.0);
        let at0 = hilbert(phi, 6.0, 0.0, &cfg()).unwrap();
        assert!(at0.norm() < 1e-12);
        let at1 = hilbert(phi, 6.0, 1.0, &cfg()).unwrap();
        // (i/π)(−2√π D(1)); Dawson D(1) by series.
        let mut term = 1.0f64;
        let mut dawson = 1.0f64;
        for k in 1..60 {
            term *= -2.0 / (2.0 * k as f64 + 1.0);
            dawson += term;
        }
        let expect = -2.0 * SQRT_PI * dawson / std::f64::consts::PI;
        assert!((at1.im - expect).abs() < 1e-10, "got {}, want {expect}", at1.im);
        assert!(at1.re.abs() < 1e-12);
    }

    #[test]
    fn hilbert_involution_on_cache() {
        let phi = |v: f64| Complex::new((-v * v).exp(), 0.0);
        let cache = HilbertCache::build(phi, 6.0, &cfg()).unwrap();
        for &mu in &[0.0, 0.5, -1.3, 2.0] {
            let back = hilbert(|v| cache.eval(v), 65.0, mu, &cfg()).unwrap();
            let want = phi(mu);
            assert!(
                (back - want).norm() < 1e-7,
                "mu={mu} got {back} want {want}"
            );
        }
    }

    #[test]
    fn inversion_residual_gaussian() {
        let f = gaussian();
        let grid: Vec<(f64, f64)> = vec![
            (0.0, 0.0),
            (0.5, 0.0),
            (0.0, 0.5),
            (1.0, 1.0),
            (2.0, 0.0),
            (1.5, -0.5),
        ];
        let r = inversion_residual(&f, &grid, &cfg()).unwrap();
        assert!(r < 1e-4, "residual {r}");
    }
}
