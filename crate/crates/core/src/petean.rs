//! The split-signature metric `g = 2(dx₁dx₃ + dx₂dx₄) + f(x₁,x₂)(dx₁² + dx₂²)`
//! on `ℝ⁴`: orthonormal frame, closed-form Levi-Civita connection,
//! finite-difference curvature oracles, and the singular expansion at the
//! two-sphere at infinity.

use thiserror::Error;

use crate::profile::{BivariateFn, RadialProfile};
use crate::scalar::Real;

pub type Vec4<R> = [R; 4];
pub type Mat4<R> = [[R; 4]; 4];

#[derive(Debug, Error)]
pub enum PeteanError {
    #[error("finite-difference step {0} outside [1e-6, 1e-2]")]
    BadStep(f64),
    #[error("singular-expansion chart requires u2 < 0 (got u2 = {0})")]
    OutsideChart(f64),
    #[error("singular-expansion radius must satisfy 0 < r < 0.1 (got {0})")]
    BadRadius(f64),
    #[error("metric matrix numerically singular (should be impossible, det = 1)")]
    SingularMetric,
}

/// Which of the pair of mutually dual metrics: the dual flips the sign of `f`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum MetricSign {
    Plus,
    Minus,
}

impl MetricSign {
    pub fn factor<R: Real>(self) -> R {
        match self {
            MetricSign::Plus => R::one(),
            MetricSign::Minus => -R::one(),
        }
    }
}

/// Chart of `TS²` the metric patch lives on.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ChartTag {
    DPlus,
    DMinus,
}

/// `g = 2(dx₁dx₃+dx₂dx₄) + s·f(x₁,x₂)(dx₁²+dx₂²)` with `s = ±1`.
pub struct PeteanMetric<'f, R: Real> {
    f: &'f dyn BivariateFn<R>,
    sign: MetricSign,
    chart: ChartTag,
}

/// Indefinite orthonormal frame data at a point: `D = F² + 4`,
/// `a = (F + √D)/2`, `b = (F − √D)/2` with `F` the effective metric
/// coefficient, and the four frame vectors as coefficient arrays in `∂₁..∂₄`.
/// The Gram matrix is exactly `diag(+1, +1, −1, −1)`.
#[derive(Debug, Clone, Copy)]
pub struct FrameData<R: Real> {
    pub d: R,
    pub a: R,
    pub b: R,
    /// `vectors[j]` holds the `∂` coefficients of `e_{j+1}`.
    pub vectors: [Vec4<R>; 4],
}

/// One row of the curvature sweep.
#[derive(Debug, Clone, Copy)]
pub struct CurvatureReport<R: Real> {
    pub x: Vec4<R>,
    pub riemann_max: R,
    pub gamma_deviation: R,
    pub asd_connection_norm: R,
    pub harmonic_residual: R,
}

impl<'f, R: Real> PeteanMetric<'f, R> {
    pub fn new(f: &'f dyn BivariateFn<R>, sign: MetricSign, chart: ChartTag) -> Self {
        Self { f, sign, chart }
    }

    /// The metric on `TD₊` with coefficient `+f`.
    pub fn primal(f: &'f dyn BivariateFn<R>) -> Self {
        Self::new(f, MetricSign::Plus, ChartTag::DPlus)
    }

    /// The dual metric with coefficient `−f`, living on `TD₋`.
    pub fn dual(f: &'f dyn BivariateFn<R>) -> Self {
        Self::new(f, MetricSign::Minus, ChartTag::DMinus)
    }

    pub fn sign(&self) -> MetricSign {
        self.sign
    }

    pub fn chart(&self) -> ChartTag {
        self.chart
    }

    /// Effective coefficient `F = s·f` and its first derivatives.
    pub fn coeff(&self, x1: R, x2: R) -> R {
        self.sign.factor::<R>() * self.f.value(x1, x2)
    }

    pub fn coeff_grad(&self, x1: R, x2: R) -> (R, R) {
        let (g1, g2) = self.f.grad(x1, x2);
        let s = self.sign.factor::<R>();
        (s * g1, s * g2)
    }

    /// Metric matrix at `x`: `g₁₁ = g₂₂ = F`, `g₁₃ = g₃₁ = g₂₄ = g₄₂ = 1`.
    pub fn metric_tensor(&self, x: Vec4<R>) -> Mat4<R> {
        let f = self.coeff(x[0], x[1]);
        let o = R::zero();
        let l = R::one();
        [[f, o, l, o], [o, f, o, l], [l, o, o, o], [o, l, o, o]]
    }

    /// `g(u, v)` at `x`.
    pub fn pairing(&self, x: Vec4<R>, u: Vec4<R>, v: Vec4<R>) -> R {
        let f = self.coeff(x[0], x[1]);
        f * (u[0] * v[0] + u[1] * v[1]) + u[0] * v[2] + u[2] * v[0] + u[1] * v[3] + u[3] * v[1]
    }

    /// The orthonormal frame of the metric. Normalisation `1/√(2√D)` makes
    /// the Gram matrix exactly `diag(+1, +1, −1, −1)`.
    pub fn orthonormal_frame(&self, x: Vec4<R>) -> FrameData<R> {
        let f = self.coeff(x[0], x[1]);
        let d = f * f + R::of(4.0);
        let sq = d.sqrt();
        let a = (f + sq).half();
        let b = (f - sq).half();
        let c = (R::of(2.0) * sq).sqrt().recip();
        let vectors = [
            [c, c, -b * c, -b * c],
            [-c, c, b * c, -b * c],
            [-c, -c, a * c, a * c],
            [c, -c, -a * c, a * c],
        ];
        FrameData { d, a, b, vectors }
    }

    /// Closed-form Levi-Civita covariant derivative `∇_{∂_dir} ∂_field`,
    /// returned as a coefficient vector in `∂₁..∂₄`. The nonzero
    /// Christoffels are
    ///
    /// ```text
    /// Γ³₁₁ =  F₁/2   Γ⁴₁₁ = −F₂/2
    /// Γ³₁₂ =  F₂/2   Γ⁴₁₂ =  F₁/2
    /// Γ³₂₂ = −F₁/2   Γ⁴₂₂ =  F₂/2
    /// ```
    ///
    /// so `∇_{∂₃} = ∇_{∂₄} = 0` and `∇_{∂₁}∂₃ = ∇_{∂₁}∂₄ = 0`. These are
    /// verified against the finite-difference oracle [`Self::christoffel_fd`].
    pub fn nabla_closed_form(&self, dir: usize, field: usize, x: Vec4<R>) -> Vec4<R> {
        assert!(dir < 4 && field < 4, "coordinate directions are 0..4");
        let (f1, f2) = self.coeff_grad(x[0], x[1]);
        let mut out = [R::zero(); 4];
        let (lo, hi) = if dir <= field { (dir, field) } else { (field, dir) };
        match (lo, hi) {
            (0, 0) => {
                out[2] = f1.half();
                out[3] = -f2.half();
            }
            (0, 1) => {
                out[2] = f2.half();
                out[3] = f1.half();
            }
            (1, 1) => {
                out[2] = -f1.half();
                out[3] = f2.half();
            }
            _ => {}
        }
        out
    }

    /// Full Christoffel array `Γ^k_{ij}` by central differences of the metric
    /// and a numerical inverse; the independent oracle for
    /// [`Self::nabla_closed_form`]. Indexing: `gamma[k][i][j]`.
    pub fn christoffel_fd(&self, x: Vec4<R>, step: R) -> Result<[Mat4<R>; 4], PeteanError> {
        check_step(step)?;
        let g = self.metric_tensor(x);
        let ginv = invert4(g).ok_or(PeteanError::SingularMetric)?;
        // dg[l][i][j] = ∂_l g_ij.
        let mut dg = [[[R::zero(); 4]; 4]; 4];
        for l in 0..4 {
            let mut xp = x;
            let mut xm = x;
            xp[l] += step;
            xm[l] -= step;
            let gp = self.metric_tensor(xp);
            let gm = self.metric_tensor(xm);
            for i in 0..4 {
                for j in 0..4 {
                    dg[l][i][j] = (gp[i][j] - gm[i][j]) / (R::of(2.0) * step);
                }
            }
        }
        let mut gamma = [[[R::zero(); 4]; 4]; 4];
        for k in 0..4 {
            for i in 0..4 {
                for j in 0..4 {
                    let mut acc = R::zero();
                    for l in 0..4 {
                        acc += ginv[k][l] * (dg[i][l][j] + dg[j][l][i] - dg[l][i][j]);
                    }
                    gamma[k][i][j] = acc.half();
                }
            }
        }
        Ok(gamma)
    }

    /// Max deviation between the closed-form connection and the
    /// finite-difference oracle over all index combinations.
    pub fn gamma_deviation(&self, x: Vec4<R>, step: R) -> Result<R, PeteanError> {
        let fd = self.christoffel_fd(x, step)?;
        let mut worst = R::zero();
        for i in 0..4 {
            for j in 0..4 {
                let cf = self.nabla_closed_form(i, j, x);
                for k in 0..4 {
                    worst = worst.max((cf[k] - fd[k][i][j]).abs());
                }
            }
        }
        Ok(worst)
    }

    /// Riemann tensor `R^l_{ijk}` by finite differences of the
    /// finite-difference Christoffels; returns the max component magnitude.
    pub fn riemann_max_fd(&self, x: Vec4<R>, step: R) -> Result<R, PeteanError> {
        check_step(step)?;
        let gamma0 = self.christoffel_fd(x, step)?;
        // dgamma[m][k][i][j] = ∂_m Γ^k_ij.
        let mut dgamma = [[[[R::zero(); 4]; 4]; 4]; 4];
        for m in 0..4 {
            let mut xp = x;
            let mut xm = x;
            xp[m] += step;
            xm[m] -= step;
            let gp = self.christoffel_fd(xp, step)?;
            let gm = self.christoffel_fd(xm, step)?;
            for k in 0..4 {
                for i in 0..4 {
                    for j in 0..4 {
                        dgamma[m][k][i][j] = (gp[k][i][j] - gm[k][i][j]) / (R::of(2.0) * step);
                    }
                }
            }
        }
        let mut worst = R::zero();
        for l in 0..4 {
            for i in 0..4 {
                for j in 0..4 {
                    for k in 0..4 {
                        let mut r = dgamma[i][l][j][k] - dgamma[j][l][i][k];
                        for m in 0..4 {
                            r += gamma0[l][i][m] * gamma0[m][j][k]
                                - gamma0[l][j][m] * gamma0[m][i][k];
                        }
                        worst = worst.max(r.abs());
                    }
                }
            }
        }
        Ok(worst)
    }

    /// The anti-self-dual bivector frame
    /// `W₁ = e₁∧e₂ − e₃∧e₄`, `W₂ = e₁∧e₃ − e₂∧e₄`, `W₃ = e₁∧e₄ + e₂∧e₃`
    /// as antisymmetric coordinate-bivector matrices.
    pub fn asd_frame(&self, x: Vec4<R>) -> [Mat4<R>; 3] {
        let fr = self.orthonormal_frame(x);
        let w = |p: usize, q: usize| wedge(fr.vectors[p], fr.vectors[q]);
        [
            sub_b(w(0, 1), w(2, 3)),
            sub_b(w(0, 2), w(1, 3)),
            add_b(w(0, 3), w(1, 2)),
        ]
    }

    /// Max component of `∇_{∂_k} W_A` over all directions `k` and frame
    /// bivectors `A`: the connection induced on the anti-self-dual bundle is
    /// trivial in this frame, so the result is zero up to finite differences.
    pub fn asd_connection_norm(&self, x: Vec4<R>, step: R) -> Result<R, PeteanError> {
        check_step(step)?;
        let mut worst = R::zero();
        for k in 0..4 {
            let mut xp = x;
            let mut xm = x;
            xp[k] += step;
            xm[k] -= step;
            let wp = self.asd_frame(xp);
            let wm = self.asd_frame(xm);
            let w0 = self.asd_frame(x);
            for a in 0..3 {
                for i in 0..4 {
                    for j in 0..4 {
                        // ∂_k W^{ij} + Γ^i_{km} W^{mj} + Γ^j_{km} W^{im}
                        let mut v = (wp[a][i][j] - wm[a][i][j]) / (R::of(2.0) * step);
                        for m in 0..4 {
                            let gi = self.nabla_closed_form(k, m, x);
                            v += gi[i] * w0[a][m][j] + gi[j] * w0[a][i][m];
                        }
                        worst = worst.max(v.abs());
                    }
                }
            }
        }
        Ok(worst)
    }

    /// Full curvature diagnostics at one point.
    pub fn curvature_report(&self, x: Vec4<R>, step: R) -> Result<CurvatureReport<R>, PeteanError> {
        let riemann_max = self.riemann_max_fd(x, step)?;
        let gamma_deviation = self.gamma_deviation(x, step)?;
        let asd_connection_norm = self.asd_connection_norm(x, step)?;
        let harmonic_residual = self.f.laplacian(x[0], x[1]).abs();
        Ok(CurvatureReport {
            x,
            riemann_max,
            gamma_deviation,
            asd_connection_norm,
            harmonic_residual,
        })
    }
}

fn check_step<R: Real>(step: R) -> Result<(), PeteanError> {
    let s = step.as_f64();
    if !(1e-6..=1e-2).contains(&s) {
        return Err(PeteanError::BadStep(s));
    }
    Ok(())
}

/// `u ∧ v` as an antisymmetric matrix `B^{ij} = u^i v^j − u^j v^i`.
fn wedge<R: Real>(u: Vec4<R>, v: Vec4<R>) -> Mat4<R> {
    let mut b = [[R::zero(); 4]; 4];
    for i in 0..4 {
        for j in 0..4 {
            b[i][j] = u[i] * v[j] - u[j] * v[i];
        }
    }
    b
}

fn add_b<R: Real>(x: Mat4<R>, y: Mat4<R>) -> Mat4<R> {
    let mut b = [[R::zero(); 4]; 4];
    for i in 0..4 {
        for j in 0..4 {
            b[i][j] = x[i][j] + y[i][j];
        }
    }
    b
}

fn sub_b<R: Real>(x: Mat4<R>, y: Mat4<R>) -> Mat4<R> {
    let mut b = [[R::zero(); 4]; 4];
    for i in 0..4 {
        for j in 0..4 {
            b[i][j] = x[i][j] - y[i][j];
        }
    }
    b
}

/// Gauss-Jordan inverse of a 4×4 matrix with partial pivoting.
pub fn invert4<R: Real>(m: Mat4<R>) -> Option<Mat4<R>> {
    let mut a = m;
    let mut inv = [[R::zero(); 4]; 4];
    for (i, row) in inv.iter_mut().enumerate() {
        row[i] = R::one();
    }
    for col in 0..4 {
        let mut pivot = col;
        for row in col + 1..4 {
            if a[row][col].abs() > a[pivot][col].abs() {
                pivot = row;
            }
        }
        if a[pivot][col].abs() < R::epsilon() * R::of(64.0) {
            return None;
        }
        a.swap(col, pivot);
        inv.swap(col, pivot);
        let scale = a[col][col].recip();
        for j in 0..4 {
            a[col][j] *= scale;
            inv[col][j] *= scale;
        }
        for row in 0..4 {
            if row != col {
                let factor = a[row][col];
                for j in 0..4 {
                    a[row][j] = a[row][j] - factor * a[col][j];
                    inv[row][j] = inv[row][j] - factor * inv[col][j];
                }
            }
        }
    }
    Some(inv)
}

pub fn det4<R: Real>(m: Mat4<R>) -> R {
    // Laplace expansion through 3×3 minors.
    let det3 = |a: [[R; 3]; 3]| {
        a[0][0] * (a[1][1] * a[2][2] - a[1][2] * a[2][1])
            - a[0][1] * (a[1][0] * a[2][2] - a[1][2] * a[2][0])
            + a[0][2] * (a[1][0] * a[2][1] - a[1][1] * a[2][0])
    };
    let minor = |skip: usize| {
        let mut sub = [[R::zero(); 3]; 3];
        for (r, row) in (1..4).enumerate() {
            let mut c3 = 0;
            for c in 0..4 {
                if c == skip {
                    continue;
                }
                sub[r][c3] = m[row][c];
                c3 += 1;
            }
        }
        det3(sub)
    };
    let mut det = R::zero();
    let mut sign = R::one();
    for c in 0..4 {
        det += sign * m[0][c] * minor(c);
        sign = -sign;
    }
    det
}

// ---------------------------------------------------------------------------
// Singular expansion at the two-sphere at infinity
// ---------------------------------------------------------------------------

/// Cylindrical point in the chart around `S²_∞`:
/// `u₂ = r cosφ`, `u₃ = r sinφ` with `cosφ < 0` on the side identified
/// with `TD₊`.
#[derive(Debug, Clone, Copy)]
pub struct UPoint<R: Real> {
    pub u1: R,
    pub u4: R,
    pub r: R,
    pub phi: R,
}

#[derive(Debug, Clone, Copy)]
pub struct SingularExpansion<R: Real> {
    /// Max magnitude of `u₂²·(pullback of g₊) − g_st − (leading r²-tensor)`,
    /// which decays linearly in `r`.
    pub residual: R,
    /// Measured coefficient of `dφ²` after removing the standard block.
    pub dphi2_coefficient: R,
    /// Predicted coefficient `r²(1+u₁²)sec²φ · f` at the transitioned base
    /// point.
    pub dphi2_predicted: R,
}

/// Chart transition from the `U`-coordinates around `S²_∞` into the `TD₊`
/// chart (requires `u₂ < 0`):
///
/// ```text
/// x₁ = −u₁u₃/u₂ − u₄,  x₂ = −u₃/u₂,  x₃ = 1/u₂,  x₄ = −u₁/u₂
/// ```
pub fn u_chart_to_dplus<R: Real>(u: Vec4<R>) -> Vec4<R> {
    let (u1, u2, u3, u4) = (u[0], u[1], u[2], u[3]);
    [-u1 * u3 / u2 - u4, -u3 / u2, u2.recip(), -u1 / u2]
}

fn u_chart_jacobian<R: Real>(u: Vec4<R>) -> Mat4<R> {
    let (u1, u2, u3, u4) = (u[0], u[1], u[2], u[3]);
    let _ = u4;
    let o = R::zero();
    let q = u2 * u2;
    [
        // ∂x₁/∂u
        [-u3 / u2, u1 * u3 / q, -u1 / u2, -R::one()],
        // ∂x₂/∂u
        [o, u3 / q, -u2.recip(), o],
        // ∂x₃/∂u
        [o, -q.recip(), o, o],
        // ∂x₄/∂u
        [-u2.recip(), u1 / q, o, o],
    ]
}

/// Pulls the Petean metric back through the chart around `S²_∞`, rescales by
/// `u₂²`, removes the standard block and the leading `r²`-tensor, and reports
/// the remaining magnitude together with the measured and predicted `dφ²`
/// coefficients.
pub fn singular_expansion<R: Real>(
    f: &RadialProfile<R>,
    p: UPoint<R>,
) -> Result<SingularExpansion<R>, PeteanError> {
    let r64 = p.r.as_f64();
    if !(0.0..0.1).contains(&r64) || r64 == 0.0 {
        return Err(PeteanError::BadRadius(r64));
    }
    let (sin_phi, cos_phi) = (p.phi.sin(), p.phi.cos());
    let u2 = p.r * cos_phi;
    let u3 = p.r * sin_phi;
    if u2 >= R::zero() {
        return Err(PeteanError::OutsideChart(u2.as_f64()));
    }
    let u = [p.u1, u2, u3, p.u4];
    let x = u_chart_to_dplus(u);
    let metric = PeteanMetric::primal(f);
    let g = metric.metric_tensor(x);
    let jac = u_chart_jacobian(u);

    // A = u₂² Jᵀ g J.
    let mut a = [[R::zero(); 4]; 4];
    for i in 0..4 {
        for j in 0..4 {
            let mut acc = R::zero();
            for k in 0..4 {
                for l in 0..4 {
                    acc += jac[k][i] * g[k][l] * jac[l][j];
                }
            }
            a[i][j] = u2 * u2 * acc;
        }
    }

    // Standard block 2(du₁du₃ + du₂du₄) as a symmetric matrix.
    let mut s = [[R::zero(); 4]; 4];
    s[0][2] = R::one();
    s[2][0] = R::one();
    s[1][3] = R::one();
    s[3][1] = R::one();

    // Leading r²-tensor: r²F[(1+u₁²)sec²φ dφ² + (sinφ du₁ + cosφ du₄)²]
    // with dφ = (−sinφ du₂ + cosφ du₃)/r.
    let fval = f.value(x[0], x[1]);
    let sec2 = (cos_phi * cos_phi).recip();
    let c_phi = fval * (R::one() + p.u1 * p.u1) * sec2;
    let dphi = [R::zero(), -sin_phi, cos_phi, R::zero()];
    let omega = [sin_phi, R::zero(), R::zero(), cos_phi];
    for i in 0..4 {
        for j in 0..4 {
            s[i][j] += c_phi * dphi[i] * dphi[j] + p.r * p.r * fval * omega[i] * omega[j];
        }
    }

    let mut residual = R::zero();
    for i in 0..4 {
        for j in 0..4 {
            residual = residual.max((a[i][j] - s[i][j]).abs());
        }
    }

    // Measured dφ² coefficient: contract A − g_st with ∂/∂φ = (0, −u₃, u₂, 0).
    let vphi = [R::zero(), -u3, u2, R::zero()];
    let mut measured = R::zero();
    for i in 0..4 {
        for j in 0..4 {
            let gst = if (i, j) == (0, 2) || (i, j) == (2, 0) || (i, j) == (1, 3) || (i, j) == (3, 1)
            {
                R::one()
            } else {
                R::zero()
            };
            measured += (a[i][j] - gst) * vphi[i] * vphi[j];
        }
    }
    let predicted = p.r * p.r * fval * (R::one() + p.u1 * p.u1) * sec2;

    Ok(SingularExpansion {
        residual,
        dphi2_coefficient: measured,
        dphi2_predicted: predicted,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::profile::PolyPatch;

    const STEP: f64 = 1e-4;

    fn gaussian() -> RadialProfile<f64> {
        RadialProfile::gaussian(1.0, 1.0)
    }

    #[test]
    fn metric_entries_and_determinant() {
        let f = gaussian();
        let m = PeteanMetric::primal(&f);
        let x = [0.0, 0.0, 5.0, -2.0];
        let g = m.metric_tensor(x);
        assert_eq!(g[0][0], 1.0);
        assert_eq!(g[1][1], 1.0);
        assert_eq!(g[0][2], 1.0);
        assert_eq!(g[1][3], 1.0);
        assert_eq!(g[2][2], 0.0);
        assert!((det4(g) - 1.0).abs() < 1e-14);

        let dual = PeteanMetric::dual(&f);
        let gd = dual.metric_tensor(x);
        assert_eq!(gd[0][0], -1.0);
        assert_eq!(gd[1][1], -1.0);
        assert!((det4(gd) - 1.0).abs() < 1e-14);

        let zero = RadialProfile::<f64>::zero();
        let flat = PeteanMetric::primal(&zero);
        let g0 = flat.metric_tensor(x);
        assert_eq!(g0[0][0], 0.0);
        assert!((det4(g0) - 1.0).abs() < 1e-14);
    }

    #[test]
    fn frame_is_orthonormal() {
        let f = gaussian();
        let m = PeteanMetric::primal(&f);
        for &x in &[
            [0.0, 0.0, 0.0, 0.0],
            [0.5, -0.3, 2.0, 1.0],
            [3.0, 0.0, -1.0, 0.2],
        ] {
            let fr = m.orthonormal_frame(x);
            assert!((fr.a * fr.b + 1.0).abs() < 1e-12, "a·b = −1");
            assert!(
                (fr.a + fr.b - m.coeff(x[0], x[1])).abs() < 1e-12,
                "a+b = F"
            );
            assert!(fr.d >= 4.0);
            let eta = [1.0, 1.0, -1.0, -1.0];
            for i in 0..4 {
                for j in 0..4 {
                    let want = if i == j { eta[i] } else { 0.0 };
                    let got = m.pairing(x, fr.vectors[i], fr.vectors[j]);
                    assert!(
                        (got - want).abs() < 1e-12,
                        "g(e{i},e{j}) = {got}, want {want}"
                    );
                }
            }
        }
    }

    #[test]
    fn frame_flat_values() {
        let zero = RadialProfile::<f64>::zero();
        let m = PeteanMetric::primal(&zero);
        let fr = m.orthonormal_frame([0.0; 4]);
        assert_eq!(fr.d, 4.0);
        assert_eq!(fr.a, 1.0);
        assert_eq!(fr.b, -1.0);
    }

    #[test]
    fn frame_gaussian_at_origin() {
        // f(0,0) = 1: D = 5, a = (1+√5)/2, b = (1−√5)/2.
        let f = gaussian();
        let m = PeteanMetric::primal(&f);
        let fr = m.orthonormal_frame([0.0; 4]);
        assert!((fr.d - 5.0).abs() < 1e-14);
        assert!((fr.a - (1.0 + 5.0f64.sqrt()) / 2.0).abs() < 1e-14);
        assert!((fr.b - (1.0 - 5.0f64.sqrt()) / 2.0).abs() < 1e-14);
    }

    #[test]
    fn nabla_vanishing_directions() {
        let f = gaussian();
        let m = PeteanMetric::primal(&f);
        let x = [0.7, -0.2, 1.0, 3.0];
        for field in 0..4 {
            assert_eq!(m.nabla_closed_form(2, field, x), [0.0; 4]);
            assert_eq!(m.nabla_closed_form(3, field, x), [0.0; 4]);
        }
        assert_eq!(m.nabla_closed_form(0, 2, x), [0.0; 4]);
        assert_eq!(m.nabla_closed_form(0, 3, x), [0.0; 4]);
    }

    #[test]
    fn nabla_closed_form_matches_fd_oracle() {
        let f = RadialProfile::gaussian_mixture(&[(1.0, 1.0), (-0.5, 2.0)], 6.0).unwrap();
        for metric in [PeteanMetric::primal(&f), PeteanMetric::dual(&f)] {
            for &x in &[
                [1.0, 0.0, 0.0, 0.0],
                [0.3, -0.8, 1.0, 2.0],
                [-1.2, 0.4, -3.0, 0.1],
            ] {
                let dev = metric.gamma_deviation(x, STEP).unwrap();
                assert!(dev < 10.0 * STEP * STEP, "deviation {dev}");
            }
        }
    }

    #[test]
    fn fd_christoffels_symmetric_and_flat_zero() {
        let zero = RadialProfile::<f64>::zero();
        let m = PeteanMetric::primal(&zero);
        let g = m.christoffel_fd([0.2, 0.3, -1.0, 2.0], STEP).unwrap();
        for k in 0..4 {
            for i in 0..4 {
                for j in 0..4 {
                    assert!((g[k][i][j]).abs() < 1e-12);
                    assert_eq!(g[k][i][j], g[k][j][i]);
                }
            }
        }
    }

    #[test]
    fn harmonic_patch_is_flat_gaussian_is_not() {
        let saddle: PolyPatch<f64> = PolyPatch::saddle();
        let m = PeteanMetric::new(&saddle, MetricSign::Plus, ChartTag::DPlus);
        let rep = m.curvature_report([0.3, -0.5, 1.0, 0.0], STEP).unwrap();
        assert!(rep.riemann_max < 1e-6, "harmonic: {}", rep.riemann_max);
        assert!(rep.asd_connection_norm < 1e-6);
        assert!(rep.harmonic_residual < 1e-12);

        let f = gaussian();
        let mg = PeteanMetric::primal(&f);
        let rep = mg.curvature_report([0.5, 0.0, 0.0, 0.0], STEP).unwrap();
        assert!(rep.riemann_max > 1e-3, "gaussian: {}", rep.riemann_max);
        assert!(rep.asd_connection_norm < 1e-6, "asd: {}", rep.asd_connection_norm);
        assert!(rep.harmonic_residual > 1e-3);
    }

    #[test]
    fn riemann_matches_half_laplacian() {
        // The only curvature of the metric is R(∂₁,∂₂)∂₁ = ½Δf ∂₄ and its
        // symmetries, so the max Riemann component is |Δf|/2.
        let f = gaussian();
        let m = PeteanMetric::primal(&f);
        let x = [0.5, 0.0, 0.0, 0.0];
        let riem = m.riemann_max_fd(x, STEP).unwrap();
        let want = 0.5 * f.laplacian(x[0], x[1]).abs();
        assert!((riem - want).abs() < 1e-5, "riem {riem} want {want}");
    }

    #[test]
    fn dual_metric_curvature_matches_at_reflected_points() {
        let f = gaussian();
        let plus = PeteanMetric::primal(&f);
        let minus = PeteanMetric::dual(&f);
        for &x in &[[0.5, 0.0, 0.0, 0.0], [0.2, 0.7, 1.0, -1.0]] {
            let a = plus.riemann_max_fd(x, STEP).unwrap();
            let b = minus.riemann_max_fd(x, STEP).unwrap();
            assert!((a - b).abs() < 1e-6, "{a} vs {b}");
        }
    }

    #[test]
    fn singular_expansion_decays_linearly() {
        let f = gaussian();
        let probe = |r: f64| {
            singular_expansion(
                &f,
                UPoint {
                    u1: 0.4,
                    u4: 0.3,
                    r,
                    phi: 2.8,
                },
            )
            .unwrap()
            .residual
        };
        let r1 = probe(1e-2);
        let r2 = probe(5e-3);
        let ratio = r1 / r2;
        assert!(
            ratio > 2.0 - 1e-3,
            "expected at least linear decay, ratio {ratio}"
        );

        // dφ² coefficient against the closed form, and at φ = π (sec²φ = 1)
        // against the plain r²(1+u₁²)f normalisation.
        let e = singular_expansion(
            &f,
            UPoint {
                u1: 0.4,
                u4: 0.3,
                r: 1e-3,
                phi: std::f64::consts::PI,
            },
        )
        .unwrap();
        let rel = (e.dphi2_coefficient - e.dphi2_predicted).abs() / e.dphi2_predicted.abs();
        assert!(rel < 1e-2, "relative dφ² error {rel}");

        let zero = RadialProfile::<f64>::zero();
        let e0 = singular_expansion(
            &zero,
            UPoint {
                u1: 0.4,
                u4: 0.3,
                r: 1e-2,
                phi: 2.8,
            },
        )
        .unwrap();
        assert!(e0.residual < 1e-14);
    }

    #[test]
    fn singular_expansion_domain_errors() {
        let f = gaussian();
        let bad_side = singular_expansion(
            &f,
            UPoint {
                u1: 0.0,
                u4: 0.0,
                r: 1e-2,
                phi: 0.3,
            },
        );
        assert!(matches!(bad_side, Err(PeteanError::OutsideChart(_))));
        let bad_r = singular_expansion(
            &f,
            UPoint {
                u1: 0.0,
                u4: 0.0,
                r: 0.5,
                phi: 2.8,
            },
        );
        assert!(matches!(bad_r, Err(PeteanError::BadRadius(_))));
    }
}
