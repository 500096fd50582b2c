//! Function classes the constructions are built from: axisymmetric rapidly
//! decreasing profiles on the plane, odd pure-imaginary profiles on the line,
//! and a small trait for smooth bivariate test functions (harmonic patches).

use num_complex::Complex;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::scalar::Real;
use crate::spline::{CubicSpline, SplineError};

#[derive(Debug, Error)]
pub enum ProfileError {
    #[error("gaussian width must be positive, got {0}")]
    BadWidth(f64),
    #[error("cutoff must be positive, got {0}")]
    BadCutoff(f64),
    #[error("profile grid: {0}")]
    Grid(#[from] SplineError),
    #[error("tabulated values must decay in magnitude beyond the tail knot (index {0})")]
    NotDecaying(usize),
    #[error("odd profile grid must start at t = 0 with s(0) = 0")]
    OddOrigin,
    #[error("profile is not rapidly decreasing: |f| = {value:e} at r = {radius} exceeds 1e-12 * max")]
    SlowDecay { radius: f64, value: f64 },
    #[error("bad profile document: {0}")]
    Document(String),
}

/// Exponential continuation beyond the last knot of a tabulated grid.
#[derive(Debug, Clone, Copy)]
struct ExpTail<R: Real> {
    x0: R,
    v0: R,
    rate: R,
}

impl<R: Real> ExpTail<R> {
    fn fit(x_prev: R, v_prev: R, x_last: R, v_last: R) -> Self {
        let rate = if v_last != R::zero() && v_prev.abs() > v_last.abs() {
            ((v_prev.abs() / v_last.abs()).ln() / (x_last - x_prev)).max(R::one())
        } else {
            R::one()
        };
        Self {
            x0: x_last,
            v0: v_last,
            rate,
        }
    }

    fn eval(&self, x: R) -> R {
        self.v0 * (-self.rate * (x - self.x0)).exp()
    }

    fn derivative(&self, x: R) -> R {
        -self.rate * self.eval(x)
    }
}

/// Smooth real function of two variables with analytic derivatives, the
/// common interface of the metric coefficient `f`.
pub trait BivariateFn<R: Real>: Send + Sync {
    fn value(&self, x1: R, x2: R) -> R;
    fn grad(&self, x1: R, x2: R) -> (R, R);
    /// (f11, f12, f22)
    fn hessian(&self, x1: R, x2: R) -> (R, R, R);

    fn laplacian(&self, x1: R, x2: R) -> R {
        let (f11, _, f22) = self.hessian(x1, x2);
        f11 + f22
    }
}

/// Axisymmetric rapidly decreasing profile `f(x) = F(|x|)` stored either as
/// a Gaussian mixture or as a tabulated radial grid with an exponential tail.
#[derive(Debug, Clone)]
pub struct RadialProfile<R: Real> {
    kind: RadialKind<R>,
    cutoff: R,
    max_abs: R,
}

#[derive(Debug, Clone)]
enum RadialKind<R: Real> {
    /// `F(r) = Σ cᵢ exp(-kᵢ r²)`
    GaussianMixture(Vec<(R, R)>),
    Tabulated {
        knots: Vec<(R, R)>,
        tail_knot: Option<usize>,
        spline: CubicSpline<R>,
        tail: ExpTail<R>,
    },
}

impl<R: Real> RadialProfile<R> {
    pub fn zero() -> Self {
        Self {
            kind: RadialKind::GaussianMixture(vec![]),
            cutoff: R::one(),
            max_abs: R::zero(),
        }
    }

    /// One Gaussian `c · exp(-k r²)`.
    pub fn gaussian(c: f64, k: f64) -> Self {
        Self::gaussian_mixture(&[(c, k)], 6.0).expect("single gaussian is valid")
    }

    /// `F(r) = Σ cᵢ exp(-kᵢ r²)` with declared quadrature cutoff radius.
    pub fn gaussian_mixture(terms: &[(f64, f64)], cutoff: f64) -> Result<Self, ProfileError> {
        if !(cutoff > 0.0) {
            return Err(ProfileError::BadCutoff(cutoff));
        }
        let mut own = Vec::with_capacity(terms.len());
        for &(c, k) in terms {
            if !(k > 0.0) {
                return Err(ProfileError::BadWidth(k));
            }
            own.push((R::of(c), R::of(k)));
        }
        let max_abs = own
            .iter()
            .fold(R::zero(), |acc, &(c, _)| acc + c.abs())
            .max(R::epsilon());
        let p = Self {
            kind: RadialKind::GaussianMixture(own),
            cutoff: R::of(cutoff),
            max_abs,
        };
        p.check_decay()?;
        Ok(p)
    }

    /// Tabulated radial grid `(r, F(r))`, cubic interpolation, exponential
    /// tail beyond the last knot. Values must decay in magnitude beyond
    /// `tail_knot` (defaults to three quarters in).
    pub fn tabulated(
        knots: Vec<(R, R)>,
        cutoff: R,
        tail_knot: Option<usize>,
    ) -> Result<Self, ProfileError> {
        if !(cutoff.as_f64() > 0.0) {
            return Err(ProfileError::BadCutoff(cutoff.as_f64()));
        }
        let n = knots.len();
        let tail_from = tail_knot.unwrap_or(n.saturating_mul(3) / 4).min(n.saturating_sub(1));
        for i in tail_from..n.saturating_sub(1) {
            if knots[i + 1].1.abs() > knots[i].1.abs() + R::epsilon() {
                return Err(ProfileError::NotDecaying(i + 1));
            }
        }
        let xs: Vec<R> = knots.iter().map(|&(r, _)| r).collect();
        let ys: Vec<R> = knots.iter().map(|&(_, v)| v).collect();
        let max_abs = ys
            .iter()
            .fold(R::zero(), |m, v| m.max(v.abs()))
            .max(R::epsilon());
        let m = xs.len();
        let tail = ExpTail::fit(xs[m - 2], ys[m - 2], xs[m - 1], ys[m - 1]);
        let spline = CubicSpline::new(xs, ys)?;
        let p = Self {
            kind: RadialKind::Tabulated {
                knots,
                tail_knot,
                spline,
                tail,
            },
            cutoff,
            max_abs,
        };
        p.check_decay()?;
        Ok(p)
    }

    fn check_decay(&self) -> Result<(), ProfileError> {
        let thresh = R::of(1e-12) * self.max_abs;
        for m in [10.0, 12.0, 16.0] {
            let r = self.cutoff * R::of(m);
            let v = self.value_r(r).abs();
            if v >= thresh {
                return Err(ProfileError::SlowDecay {
                    radius: r.as_f64(),
                    value: v.as_f64(),
                });
            }
        }
        Ok(())
    }

    /// Declared quadrature truncation radius.
    pub fn cutoff(&self) -> R {
        self.cutoff
    }

    /// Scale of the profile, used by relative thresholds.
    pub fn max_abs(&self) -> R {
        self.max_abs
    }

    pub fn is_zero(&self) -> bool {
        match &self.kind {
            RadialKind::GaussianMixture(t) => t.is_empty(),
            RadialKind::Tabulated { .. } => false,
        }
    }

    /// Radial value `F(r)`.
    pub fn value_r(&self, r: R) -> R {
        let r = r.abs();
        match &self.kind {
            RadialKind::GaussianMixture(terms) => {
                let s = r * r;
                terms
                    .iter()
                    .fold(R::zero(), |acc, &(c, k)| acc + c * (-k * s).exp())
            }
            RadialKind::Tabulated { spline, tail, .. } => {
                if r > spline.x_max() {
                    tail.eval(r)
                } else {
                    spline.eval(r.max(spline.x_min()))
                }
            }
        }
    }

    /// Radial derivative `F'(r)`.
    pub fn deriv_r(&self, r: R) -> R {
        let r = r.abs();
        match &self.kind {
            RadialKind::GaussianMixture(terms) => {
                let s = r * r;
                terms.iter().fold(R::zero(), |acc, &(c, k)| {
                    acc - R::of(2.0) * c * k * r * (-k * s).exp()
                })
            }
            RadialKind::Tabulated { spline, tail, .. } => {
                if r > spline.x_max() {
                    tail.derivative(r)
                } else {
                    spline.derivative(r.max(spline.x_min()))
                }
            }
        }
    }

    /// `F'(r)/r`, finite at the origin for smooth axisymmetric profiles.
    fn ratio_deriv(&self, r: R) -> R {
        match &self.kind {
            RadialKind::GaussianMixture(terms) => {
                let s = r * r;
                terms.iter().fold(R::zero(), |acc, &(c, k)| {
                    acc - R::of(2.0) * c * k * (-k * s).exp()
                })
            }
            RadialKind::Tabulated { spline, .. } => {
                let eps = R::of(1e-6);
                if r < eps {
                    spline.second_derivative(spline.x_min())
                } else {
                    self.deriv_r(r) / r
                }
            }
        }
    }

    fn second_deriv_r(&self, r: R) -> R {
        let r = r.abs();
        match &self.kind {
            RadialKind::GaussianMixture(terms) => {
                let s = r * r;
                terms.iter().fold(R::zero(), |acc, &(c, k)| {
                    acc + c * (-k * s).exp() * (R::of(4.0) * k * k * s - R::of(2.0) * k)
                })
            }
            RadialKind::Tabulated { spline, tail, .. } => {
                if r > spline.x_max() {
                    tail.rate * tail.rate * tail.eval(r)
                } else {
                    spline.second_derivative(r.max(spline.x_min()))
                }
            }
        }
    }
}

impl<R: Real> BivariateFn<R> for RadialProfile<R> {
    fn value(&self, x1: R, x2: R) -> R {
        self.value_r((x1 * x1 + x2 * x2).sqrt())
    }

    fn grad(&self, x1: R, x2: R) -> (R, R) {
        let r = (x1 * x1 + x2 * x2).sqrt();
        let g = self.ratio_deriv(r);
        (g * x1, g * x2)
    }

    fn hessian(&self, x1: R, x2: R) -> (R, R, R) {
        let s = x1 * x1 + x2 * x2;
        let r = s.sqrt();
        let g = self.ratio_deriv(r);
        let fpp = self.second_deriv_r(r);
        if r < R::of(1e-9) {
            return (g, R::zero(), g);
        }
        let aniso = (fpp - g) / s;
        (aniso * x1 * x1 + g, aniso * x1 * x2, aniso * x2 * x2 + g)
    }
}

/// Polynomial patch `Σ c · x1^a x2^b`, the adapter for harmonic test inputs
/// that live outside the rapidly decreasing class.
#[derive(Debug, Clone)]
pub struct PolyPatch<R: Real> {
    monomials: Vec<(u32, u32, R)>,
}

impl<R: Real> PolyPatch<R> {
    pub fn new(monomials: Vec<(u32, u32, R)>) -> Self {
        Self { monomials }
    }

    /// The harmonic patch `x1 * x2`.
    pub fn saddle() -> Self {
        Self::new(vec![(1, 1, R::one())])
    }

    fn pow(x: R, n: u32) -> R {
        num_traits::Float::powi(x, n as i32)
    }
}

impl<R: Real> BivariateFn<R> for PolyPatch<R> {
    fn value(&self, x1: R, x2: R) -> R {
        self.monomials.iter().fold(R::zero(), |acc, &(a, b, c)| {
            acc + c * Self::pow(x1, a) * Self::pow(x2, b)
        })
    }

    fn grad(&self, x1: R, x2: R) -> (R, R) {
        let mut g1 = R::zero();
        let mut g2 = R::zero();
        for &(a, b, c) in &self.monomials {
            if a > 0 {
                g1 += c * R::of(a as f64) * Self::pow(x1, a - 1) * Self::pow(x2, b);
            }
            if b > 0 {
                g2 += c * R::of(b as f64) * Self::pow(x1, a) * Self::pow(x2, b - 1);
            }
        }
        (g1, g2)
    }

    fn hessian(&self, x1: R, x2: R) -> (R, R, R) {
        let mut h11 = R::zero();
        let mut h12 = R::zero();
        let mut h22 = R::zero();
        for &(a, b, c) in &self.monomials {
            if a > 1 {
                h11 += c * R::of((a * (a - 1)) as f64) * Self::pow(x1, a - 2) * Self::pow(x2, b);
            }
            if a > 0 && b > 0 {
                h12 += c * R::of((a * b) as f64) * Self::pow(x1, a - 1) * Self::pow(x2, b - 1);
            }
            if b > 1 {
                h22 += c * R::of((b * (b - 1)) as f64) * Self::pow(x1, a) * Self::pow(x2, b - 2);
            }
        }
        (h11, h12, h22)
    }
}

/// Odd, rapidly decreasing, pure-imaginary-valued profile `h(t) = i s(t)`,
/// stored through its real factor `s` on `t >= 0`. Odd symmetry is enforced
/// structurally: evaluation reflects the stored half-line bit-exactly.
#[derive(Debug, Clone)]
pub struct OddProfile<R: Real> {
    /// Knots on `t >= 0` with `knots[0] = (0, 0)`.
    spline: CubicSpline<R>,
    tail: ExpTail<R>,
    cutoff: R,
    max_abs: R,
    zero: bool,
}

impl<R: Real> OddProfile<R> {
    pub fn zero() -> Self {
        Self::from_fn(|_| R::zero(), R::one(), 8).expect("zero profile is valid")
    }

    /// Sample `s` on a uniform grid of `n` intervals over `[0, 10 * cutoff]`.
    pub fn from_fn(
        s: impl Fn(R) -> R,
        cutoff: R,
        n_per_unit: usize,
    ) -> Result<Self, ProfileError> {
        let t_max = cutoff * R::of(10.0);
        let n = (n_per_unit.max(4) as f64 * t_max.as_f64()).ceil() as usize;
        let knots: Vec<(R, R)> = (0..=n)
            .map(|i| {
                let t = t_max * R::of(i as f64 / n as f64);
                (t, if i == 0 { R::zero() } else { s(t) })
            })
            .collect();
        Self::from_knots(knots, cutoff)
    }

    /// Build from explicit half-line knots; `knots[0]` must be `(0, 0)`.
    pub fn from_knots(knots: Vec<(R, R)>, cutoff: R) -> Result<Self, ProfileError> {
        if !(cutoff.as_f64() > 0.0) {
            return Err(ProfileError::BadCutoff(cutoff.as_f64()));
        }
        if knots.is_empty() || knots[0].0 != R::zero() || knots[0].1 != R::zero() {
            return Err(ProfileError::OddOrigin);
        }
        let xs: Vec<R> = knots.iter().map(|&(t, _)| t).collect();
        let ys: Vec<R> = knots.iter().map(|&(_, v)| v).collect();
        let max_abs = ys.iter().fold(R::zero(), |m, v| m.max(v.abs()));
        let zero = max_abs == R::zero();
        let m = xs.len();
        let tail = ExpTail::fit(xs[m - 2], ys[m - 2], xs[m - 1], ys[m - 1]);
        let spline = CubicSpline::new(xs, ys)?;
        let p = Self {
            spline,
            tail,
            cutoff,
            max_abs: max_abs.max(R::epsilon()),
            zero,
        };
        // Rapid decay: |s(t)| < 1e-12 max for t > 10 T.
        let thresh = R::of(1e-12) * p.max_abs;
        for mult in [10.0, 13.0] {
            let t = cutoff * R::of(mult);
            let v = p.eval_s(t).abs();
            if v >= thresh {
                return Err(ProfileError::SlowDecay {
                    radius: t.as_f64(),
                    value: v.as_f64(),
                });
            }
        }
        Ok(p)
    }

    pub fn cutoff(&self) -> R {
        self.cutoff
    }

    pub fn max_abs(&self) -> R {
        self.max_abs
    }

    pub fn is_zero(&self) -> bool {
        self.zero
    }

    /// Real factor `s(t)`, odd by reflection.
    pub fn eval_s(&self, t: R) -> R {
        if self.zero || t == R::zero() {
            return R::zero();
        }
        let a = t.abs();
        let v = if a > self.spline.x_max() {
            self.tail.eval(a)
        } else {
            self.spline.eval(a)
        };
        if t < R::zero() {
            -v
        } else {
            v
        }
    }

    /// `h(t) = i s(t)`.
    pub fn eval_h(&self, t: R) -> Complex<R> {
        Complex::new(R::zero(), self.eval_s(t))
    }

    /// `s'(t)`, even by the odd symmetry.
    pub fn deriv_s(&self, t: R) -> R {
        if self.zero {
            return R::zero();
        }
        let a = t.abs();
        if a > self.spline.x_max() {
            self.tail.derivative(a)
        } else {
            self.spline.derivative(a)
        }
    }

    /// `∂h/∂t = i s'(t)`.
    pub fn deriv_h(&self, t: R) -> Complex<R> {
        Complex::new(R::zero(), self.deriv_s(t))
    }
}

// ---------------------------------------------------------------------------
// JSON documents
// ---------------------------------------------------------------------------

#[derive(Debug, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
enum ProfileDoc {
    GaussianMixture {
        terms: Vec<GaussianTermDoc>,
        cutoff: f64,
    },
    Tabulated {
        knots: Vec<(f64, f64)>,
        cutoff: f64,
        #[serde(skip_serializing_if = "Option::is_none")]
        tail_knot: Option<usize>,
    },
    OddGrid {
        knots: Vec<(f64, f64)>,
        cutoff: f64,
    },
}

#[derive(Debug, Serialize, Deserialize)]
struct GaussianTermDoc {
    c: f64,
    k: f64,
}

impl<R: Real> RadialProfile<R> {
    pub fn to_json(&self) -> String {
        let doc = match &self.kind {
            RadialKind::GaussianMixture(terms) => ProfileDoc::GaussianMixture {
                terms: terms
                    .iter()
                    .map(|&(c, k)| GaussianTermDoc {
                        c: c.as_f64(),
                        k: k.as_f64(),
                    })
                    .collect(),
                cutoff: self.cutoff.as_f64(),
            },
            RadialKind::Tabulated {
                knots, tail_knot, ..
            } => ProfileDoc::Tabulated {
                knots: knots
                    .iter()
                    .map(|&(r, v)| (r.as_f64(), v.as_f64()))
                    .collect(),
                cutoff: self.cutoff.as_f64(),
                tail_knot: *tail_knot,
            },
        };
        serde_json::to_string(&doc).expect("profile document serializes")
    }

    pub fn from_json(text: &str) -> Result<Self, ProfileError> {
        let doc: ProfileDoc =
            serde_json::from_str(text).map_err(|e| ProfileError::Document(e.to_string()))?;
        match doc {
            ProfileDoc::GaussianMixture { terms, cutoff } => {
                let terms: Vec<(f64, f64)> = terms.iter().map(|t| (t.c, t.k)).collect();
                Self::gaussian_mixture(&terms, cutoff)
            }
            ProfileDoc::Tabulated {
                knots,
                cutoff,
                tail_knot,
            } => Self::tabulated(
                knots
                    .into_iter()
                    .map(|(r, v)| (R::of(r), R::of(v)))
                    .collect(),
                R::of(cutoff),
                tail_knot,
            ),
            ProfileDoc::OddGrid { .. } => Err(ProfileError::Document(
                "expected a radial profile, found an odd profile document".into(),
            )),
        }
    }
}

impl<R: Real> OddProfile<R> {
    pub fn to_json(&self) -> String {
        // Serialize the stored half-line knots.
        let n = 1024usize;
        let t_max = self.spline.x_max();
        let knots: Vec<(f64, f64)> = (0..=n)
            .map(|i| {
                let t = t_max * R::of(i as f64 / n as f64);
                (t.as_f64(), self.eval_s(t).as_f64())
            })
            .collect();
        serde_json::to_string(&ProfileDoc::OddGrid {
            knots,
            cutoff: self.cutoff.as_f64(),
        })
        .expect("profile document serializes")
    }

    pub fn from_json(text: &str) -> Result<Self, ProfileError> {
        let doc: ProfileDoc =
            serde_json::from_str(text).map_err(|e| ProfileError::Document(e.to_string()))?;
        match doc {
            ProfileDoc::OddGrid { knots, cutoff } => Self::from_knots(
                knots
                    .into_iter()
                    .map(|(t, s)| (R::of(t), R::of(s)))
                    .collect(),
                R::of(cutoff),
            ),
            _ => Err(ProfileError::Document(
                "expected an odd profile document".into(),
            )),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn gaussian_values_and_derivatives() {
        let f: RadialProfile<f64> = RadialProfile::gaussian(1.0, 1.0);
        assert!((f.value(1.0, 0.0) - (-1.0f64).exp()).abs() < 1e-15);
        let (g1, g2) = f.grad(1.0, 2.0);
        let e = (-5.0f64).exp();
        assert!((g1 - (-2.0 * e)).abs() < 1e-15);
        assert!((g2 - (-4.0 * e)).abs() < 1e-15);
        // Laplacian of e^{-r²} is (4r² - 4) e^{-r²}.
        assert!((f.laplacian(1.0, 2.0) - (4.0 * 5.0 - 4.0) * e).abs() < 1e-13);
    }

    #[test]
    fn nonpositive_width_rejected() {
        assert!(RadialProfile::<f64>::gaussian_mixture(&[(1.0, 0.0)], 6.0).is_err());
        assert!(RadialProfile::<f64>::gaussian_mixture(&[(1.0, -2.0)], 6.0).is_err());
    }

    #[test]
    fn tabulated_matches_gaussian() {
        let knots: Vec<(f64, f64)> = (0..=600)
            .map(|i| {
                let r = i as f64 * 0.02;
                (r, (-r * r).exp())
            })
            .collect();
        let f = RadialProfile::tabulated(knots, 6.0, None).unwrap();
        for &r in &[0.0, 0.7, 2.3, 5.0] {
            assert!((f.value_r(r) - (-r * r as f64).exp()).abs() < 1e-8, "r={r}");
        }
        // Tail decays.
        assert!(f.value_r(20.0).abs() < 1e-12);
    }

    #[test]
    fn odd_profile_reflects_bit_exactly() {
        let h: OddProfile<f64> =
            OddProfile::from_fn(|t: f64| t * (-t * t).exp(), 4.0, 32).unwrap();
        for &t in &[0.3, 1.1, 2.7] {
            assert_eq!(h.eval_s(-t), -h.eval_s(t));
        }
        assert_eq!(h.eval_s(0.0), 0.0);
        assert!((h.eval_s(1.0) - (-1.0f64).exp()).abs() < 1e-7);
        assert!(h.eval_h(1.0).re == 0.0);
    }

    #[test]
    fn harmonic_patch() {
        let p: PolyPatch<f64> = PolyPatch::saddle();
        assert_eq!(p.value(2.0, 3.0), 6.0);
        assert_eq!(p.grad(2.0, 3.0), (3.0, 2.0));
        assert_eq!(p.laplacian(2.0, 3.0), 0.0);
    }

    #[test]
    fn json_round_trip() {
        let f: RadialProfile<f64> =
            RadialProfile::gaussian_mixture(&[(1.0, 1.0), (-0.5, 2.0)], 6.0).unwrap();
        let text = f.to_json();
        assert!(text.contains("\"kind\":\"gaussian_mixture\""));
        let g = RadialProfile::<f64>::from_json(&text).unwrap();
        assert!((f.value_r(1.3) - g.value_r(1.3)).abs() < 1e-15);

        let h: OddProfile<f64> = OddProfile::from_fn(|t: f64| t * (-t * t).exp(), 4.0, 32).unwrap();
        let text = h.to_json();
        let h2 = OddProfile::<f64>::from_json(&text).unwrap();
        assert!((h.eval_s(0.9) - h2.eval_s(0.9)).abs() < 1e-9);
    }

    #[test]
    fn spec_document_parses() {
        let f = RadialProfile::<f64>::from_json(
            r#"{"kind":"gaussian_mixture","terms":[{"c":1.0,"k":1.0}],"cutoff":6.0}"#,
        )
        .unwrap();
        assert!((f.value_r(0.0) - 1.0).abs() < 1e-15);
    }
}
