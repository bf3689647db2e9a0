//! Phase-space primitives: Gaussian states, symplectic transformations, and
//! discretized Wigner functions with trapezoid quadrature.
//!
//! Conventions (used across the whole crate): ħ = 1, quadratures
//! q = (a + a†)/√2, p = i(a† − a)/√2, so the vacuum has quadrature variance
//! 1/2 and a coherent state |α⟩ has mean (√2 Re α, √2 Im α). Quadratures are
//! ordered (q₁, p₁, …, qₙ, pₙ).

use nalgebra::{DMatrix, DVector};
use ndarray::Array2;
use num_complex::Complex64;

use crate::error::{Error, Result};

/// Gaussian state of n modes: mean vector (length 2n) and symmetric
/// covariance matrix (2n × 2n) with all symplectic eigenvalues ≥ 1/2.
#[derive(Debug, Clone)]
pub struct GaussianState {
    mean: DVector<f64>,
    cov: DMatrix<f64>,
}

impl GaussianState {
    /// Validates symmetry (relative 1e-12) and physicality
    /// (symplectic eigenvalues ≥ 1/2 − 1e-9).
    pub fn new(mean: DVector<f64>, cov: DMatrix<f64>) -> Result<Self> {
        let dim = mean.len();
        if dim == 0 || dim % 2 != 0 {
            return Err(Error::Dimension(format!(
                "mean length must be a positive even number, got {dim}"
            )));
        }
        if cov.nrows() != dim || cov.ncols() != dim {
            return Err(Error::Dimension(format!(
                "covariance is {}x{}, expected {dim}x{dim}",
                cov.nrows(),
                cov.ncols()
            )));
        }
        let scale = cov.amax().max(1.0);
        for i in 0..dim {
            for j in (i + 1)..dim {
                if (cov[(i, j)] - cov[(j, i)]).abs() > 1e-12 * scale {
                    return Err(Error::InvalidParameter(format!(
                        "covariance not symmetric at ({i},{j})"
                    )));
                }
            }
        }
        validate_physicality(&cov)?;
        Ok(GaussianState { mean, cov })
    }

    pub fn vacuum(n_modes: usize) -> Self {
        GaussianState {
            mean: DVector::zeros(2 * n_modes),
            cov: DMatrix::identity(2 * n_modes, 2 * n_modes) * 0.5,
        }
    }

    /// Single-mode thermal state with mean photon number `n_photons`.
    pub fn thermal(n_photons: f64) -> Self {
        GaussianState {
            mean: DVector::zeros(2),
            cov: DMatrix::identity(2, 2) * (n_photons + 0.5),
        }
    }

    /// Single-mode coherent state |α⟩.
    pub fn coherent(alpha: Complex64) -> Self {
        let mut s = Self::vacuum(1);
        s.mean[0] = std::f64::consts::SQRT_2 * alpha.re;
        s.mean[1] = std::f64::consts::SQRT_2 * alpha.im;
        s
    }

    pub fn modes(&self) -> usize {
        self.mean.len() / 2
    }

    pub fn mean(&self) -> &DVector<f64> {
        &self.mean
    }

    pub fn cov(&self) -> &DMatrix<f64> {
        &self.cov
    }
}

/// Affine symplectic map x ↦ S x + d with S Ω Sᵀ = Ω.
#[derive(Debug, Clone)]
pub struct SymplecticOp {
    s: DMatrix<f64>,
    d: DVector<f64>,
}

impl SymplecticOp {
    /// Validates the symplectic condition entrywise to 1e-10.
    pub fn new(s: DMatrix<f64>, d: DVector<f64>) -> Result<Self> {
        let dim = s.nrows();
        if dim == 0 || dim % 2 != 0 || s.ncols() != dim || d.len() != dim {
            return Err(Error::Dimension(format!(
                "symplectic matrix must be square even-dimensional with matching shift; got {}x{} and shift {}",
                s.nrows(),
                s.ncols(),
                d.len()
            )));
        }
        let om = omega(dim / 2);
        let res = &s * &om * s.transpose() - &om;
        if res.amax() > 1e-10 {
            return Err(Error::InvalidParameter(format!(
                "S Ω Sᵀ − Ω has max entry {:.3e}",
                res.amax()
            )));
        }
        Ok(SymplecticOp { s, d })
    }

    pub fn identity(n_modes: usize) -> Self {
        SymplecticOp {
            s: DMatrix::identity(2 * n_modes, 2 * n_modes),
            d: DVector::zeros(2 * n_modes),
        }
    }

    pub fn displacement(d: DVector<f64>) -> Result<Self> {
        let dim = d.len();
        Self::new(DMatrix::identity(dim, dim), d)
    }

    /// Single-mode phase rotation by `phi`: q ↦ q cos φ + p sin φ.
    pub fn rotation(phi: f64) -> Self {
        let (sn, cs) = phi.sin_cos();
        let s = DMatrix::from_row_slice(2, 2, &[cs, sn, -sn, cs]);
        SymplecticOp {
            s,
            d: DVector::zeros(2),
        }
    }

    /// Balanced (50/50) beamsplitter on two modes:
    /// x₁ ↦ (x₁ + x₂)/√2, x₂ ↦ (x₂ − x₁)/√2.
    pub fn beamsplitter_50_50() -> Self {
        let r = std::f64::consts::FRAC_1_SQRT_2;
        #[rustfmt::skip]
        let s = DMatrix::from_row_slice(4, 4, &[
             r,  0.0, r,  0.0,
             0.0, r,  0.0, r,
            -r,  0.0, r,  0.0,
             0.0, -r, 0.0, r,
        ]);
        SymplecticOp {
            s,
            d: DVector::zeros(4),
        }
    }

    pub fn matrix(&self) -> &DMatrix<f64> {
        &self.s
    }

    pub fn shift(&self) -> &DVector<f64> {
        &self.d
    }
}

/// Symplectic form Ω = ⊕ₖ [[0, 1], [−1, 0]].
pub fn omega(n_modes: usize) -> DMatrix<f64> {
    let mut om = DMatrix::zeros(2 * n_modes, 2 * n_modes);
    for k in 0..n_modes {
        om[(2 * k, 2 * k + 1)] = 1.0;
        om[(2 * k + 1, 2 * k)] = -1.0;
    }
    om
}

/// Symplectic eigenvalues of a positive definite covariance matrix,
/// ascending.
///
/// With V = LLᵀ, the spectrum of iΩV equals that of i·LᵀΩL, and LᵀΩL is
/// real antisymmetric, so its eigenvalue moduli are its singular values in
/// exact ±iν pairs. SVD of the antisymmetric product is far more robust
/// than a general eigensolver on ΩV, whose purely imaginary, often
/// degenerate spectrum can stall shifted-QR iterations.
pub fn symplectic_eigenvalues(cov: &DMatrix<f64>) -> Result<Vec<f64>> {
    let dim = cov.nrows();
    if dim == 0 || dim % 2 != 0 || cov.ncols() != dim {
        return Err(Error::Dimension(format!(
            "covariance must be square and even-dimensional, got {}x{}",
            dim,
            cov.ncols()
        )));
    }
    let scale = cov.amax().max(1.0);
    for i in 0..dim {
        for j in (i + 1)..dim {
            if (cov[(i, j)] - cov[(j, i)]).abs() > 1e-9 * scale {
                return Err(Error::Domain("covariance not symmetric".into()));
            }
        }
    }
    let chol = DMatrix::clone(cov)
        .cholesky()
        .ok_or_else(|| Error::Domain("covariance not positive definite".into()))?;
    let l = chol.l();
    let m = l.transpose() * omega(dim / 2) * &l;
    let mut sv: Vec<f64> = m
        .svd(false, false)
        .singular_values
        .iter()
        .copied()
        .collect();
    sv.sort_by(|a, b| a.partial_cmp(b).expect("finite singular values"));
    // singular values of an antisymmetric matrix come in exact ν, ν pairs
    let nus: Vec<f64> = sv
        .chunks_exact(2)
        .map(|pair| 0.5 * (pair[0] + pair[1]))
        .collect();
    Ok(nus)
}

/// Physicality tolerance for "all symplectic eigenvalues ≥ 1/2": the base
/// 1e-9 plus an absolute term tracking the eigenvalue accuracy attainable
/// at the covariance's scale.
pub(crate) fn physicality_tolerance(scale: f64) -> f64 {
    1e-9 + 16.0 * f64::EPSILON * scale.max(1.0)
}

/// Scale-aware physicality validation. Rounding can leave a covariance
/// whose true spectrum touches zero (e.g. a nearly pure two-mode squeezed
/// state at large squeezing) indefinite by O(ε‖V‖); validation therefore
/// runs on V + shift·I, which only raises symplectic eigenvalues.
pub(crate) fn validate_physicality(cov: &DMatrix<f64>) -> Result<()> {
    let scale = cov.amax().max(1.0);
    let shift = 16.0 * f64::EPSILON * scale;
    let dim = cov.nrows();
    let shifted = cov + DMatrix::<f64>::identity(dim, dim) * shift;
    let nu_min = symplectic_eigenvalues(&shifted)?
        .into_iter()
        .fold(f64::INFINITY, f64::min);
    if nu_min < 0.5 - physicality_tolerance(scale) {
        return Err(Error::InvalidParameter(format!(
            "unphysical covariance: smallest symplectic eigenvalue {nu_min}"
        )));
    }
    Ok(())
}

/// Mean ↦ S mean + d, covariance ↦ S cov Sᵀ.
pub fn apply_symplectic(state: &GaussianState, op: &SymplecticOp) -> Result<GaussianState> {
    if op.s.nrows() != state.mean.len() {
        return Err(Error::Dimension(format!(
            "operator acts on dimension {}, state has {}",
            op.s.nrows(),
            state.mean.len()
        )));
    }
    let mean = &op.s * &state.mean + &op.d;
    let cov = &op.s * &state.cov * op.s.transpose();
    // symmetrize away the multiplication round-off before re-validating
    let cov = (&cov + cov.transpose()) * 0.5;
    GaussianState::new(mean, cov)
}

/// Square phase-space lattice description: (q, p) ∈ [−half_width, half_width]²
/// sampled on `points` × `points` nodes (odd, ≥ 65, so the origin is a node).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GridSpec {
    half_width: f64,
    points: usize,
}

impl GridSpec {
    pub fn new(half_width: f64, points: usize) -> Result<Self> {
        if !(half_width > 0.0) || !half_width.is_finite() {
            return Err(Error::InvalidParameter(format!(
                "half_width must be positive and finite, got {half_width}"
            )));
        }
        if points < 65 || points % 2 == 0 {
            return Err(Error::InvalidParameter(format!(
                "points_per_axis must be an odd integer >= 65, got {points}"
            )));
        }
        Ok(GridSpec { half_width, points })
    }

    /// Default lattice for a coherent or cat state of amplitude |α|:
    /// half_width max(8, 2√2|α| + 6), 513 points. Gaussian tails are below
    /// 1e-12 at the boundary and cat fringes keep ≥ 8 nodes per period up
    /// to |α| ≈ 8.
    pub fn default_for_alpha(alpha_mag: f64) -> Self {
        let hw = (2.0 * std::f64::consts::SQRT_2 * alpha_mag + 6.0).max(8.0);
        GridSpec {
            half_width: hw,
            points: 513,
        }
    }

    pub fn half_width(&self) -> f64 {
        self.half_width
    }

    pub fn points(&self) -> usize {
        self.points
    }

    pub fn step(&self) -> f64 {
        2.0 * self.half_width / (self.points - 1) as f64
    }

    /// Node coordinates; the midpoint is exactly 0.
    pub fn axis(&self) -> Vec<f64> {
        let n = self.points;
        (0..n)
            .map(|k| self.half_width * (2.0 * k as f64 - (n - 1) as f64) / (n - 1) as f64)
            .collect()
    }

    /// Trapezoid quadrature weights along one axis.
    pub fn weights(&self) -> Vec<f64> {
        let n = self.points;
        let h = self.step();
        (0..n)
            .map(|k| if k == 0 || k == n - 1 { 0.5 * h } else { h })
            .collect()
    }
}

/// Single-mode Wigner function sampled on a [`GridSpec`] lattice;
/// `values[[i, j]]` = W(qᵢ, pⱼ).
#[derive(Debug, Clone)]
pub struct WignerGrid {
    spec: GridSpec,
    values: Array2<f64>,
}

impl WignerGrid {
    pub fn from_values(spec: GridSpec, values: Array2<f64>) -> Result<Self> {
        if values.nrows() != spec.points || values.ncols() != spec.points {
            return Err(Error::Dimension(format!(
                "values are {}x{}, spec wants {}x{}",
                values.nrows(),
                values.ncols(),
                spec.points,
                spec.points
            )));
        }
        Ok(WignerGrid { spec, values })
    }

    pub fn spec(&self) -> GridSpec {
        self.spec
    }

    pub fn values(&self) -> &Array2<f64> {
        &self.values
    }

    /// Trapezoid-rule ∬ W dq dp.
    pub fn integral(&self) -> f64 {
        let w = self.spec.weights();
        let mut total = 0.0;
        for (i, wi) in w.iter().enumerate() {
            let mut row = 0.0;
            for (j, wj) in w.iter().enumerate() {
                row += wj * self.values[[i, j]];
            }
            total += wi * row;
        }
        total
    }

    /// First moments (⟨q⟩, ⟨p⟩) and central second moments (Var q, Var p)
    /// by trapezoid quadrature. Assumes the grid is normalized.
    pub fn moments(&self) -> (f64, f64, f64, f64) {
        let x = self.spec.axis();
        let w = self.spec.weights();
        let (mut mq, mut mp, mut sq, mut sp) = (0.0, 0.0, 0.0, 0.0);
        for i in 0..x.len() {
            for j in 0..x.len() {
                let m = w[i] * w[j] * self.values[[i, j]];
                mq += m * x[i];
                mp += m * x[j];
                sq += m * x[i] * x[i];
                sp += m * x[j] * x[j];
            }
        }
        (mq, mp, sq - mq * mq, sp - mp * mp)
    }
}

/// Wigner function of a single-mode Gaussian state,
/// W(x) = exp(−½ (x−x̄)ᵀ V⁻¹ (x−x̄)) / (2π √|V|).
pub fn gaussian_wigner(state: &GaussianState, spec: GridSpec) -> Result<WignerGrid> {
    if state.modes() != 1 {
        return Err(Error::Domain(format!(
            "gaussian_wigner needs a single-mode state, got {} modes",
            state.modes()
        )));
    }
    let v = state.cov();
    let det = v[(0, 0)] * v[(1, 1)] - v[(0, 1)] * v[(1, 0)];
    if det <= 1e-300 {
        return Err(Error::Domain(format!(
            "singular covariance (det = {det:.3e})"
        )));
    }
    // inverse of the 2x2 covariance
    let (ia, ib, ic) = (v[(1, 1)] / det, -v[(0, 1)] / det, v[(0, 0)] / det);
    let norm = 1.0 / (2.0 * std::f64::consts::PI * det.sqrt());
    let (mq, mp) = (state.mean()[0], state.mean()[1]);
    let x = spec.axis();
    let n = spec.points;
    let mut values = Array2::zeros((n, n));
    for i in 0..n {
        let dq = x[i] - mq;
        for j in 0..n {
            let dp = x[j] - mp;
            let e = 0.5 * (ia * dq * dq + 2.0 * ib * dq * dp + ic * dp * dp);
            values[[i, j]] = norm * (-e).exp();
        }
    }
    WignerGrid::from_values(spec, values)
}

/// Cat-state parity.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Parity {
    Even,
    Odd,
}

impl Parity {
    pub fn sign(self) -> f64 {
        match self {
            Parity::Even => 1.0,
            Parity::Odd => -1.0,
        }
    }
}

/// Wigner function of |α⟩ ± |−α⟩ (normalized):
/// two displaced vacuum Gaussians plus an interference fringe at the
/// origin, N±² [e^(−(x−m)²) + e^(−(x+m)²) ± 2 e^(−x²) cos(2√2(p Re α − q Im α))]/π
/// with m = √2 (Re α, Im α) and N±² = 1/(2 ± 2 e^(−2|α|²)).
pub fn cat_wigner(alpha: Complex64, parity: Parity, spec: GridSpec) -> Result<WignerGrid> {
    let required = 2.0 * std::f64::consts::SQRT_2 * alpha.norm() + 6.0;
    if spec.half_width() < required - 1e-9 {
        return Err(Error::Domain(format!(
            "grid half_width {} too small for cat amplitude |α| = {} (need >= {required})",
            spec.half_width(),
            alpha.norm()
        )));
    }
    let s = parity.sign();
    let n2 = 1.0 / (2.0 + s * 2.0 * (-2.0 * alpha.norm_sqr()).exp());
    let (mq, mp) = (
        std::f64::consts::SQRT_2 * alpha.re,
        std::f64::consts::SQRT_2 * alpha.im,
    );
    let fringe = 2.0 * std::f64::consts::SQRT_2;
    let x = spec.axis();
    let n = spec.points;
    let mut values = Array2::zeros((n, n));
    for i in 0..n {
        let q = x[i];
        for j in 0..n {
            let p = x[j];
            let g_plus = (-((q - mq).powi(2) + (p - mp).powi(2))).exp();
            let g_minus = (-((q + mq).powi(2) + (p + mp).powi(2))).exp();
            let osc =
                2.0 * (-(q * q + p * p)).exp() * (fringe * (p * alpha.re - q * alpha.im)).cos();
            values[[i, j]] = n2 * (g_plus + g_minus + s * osc) / std::f64::consts::PI;
        }
    }
    WignerGrid::from_values(spec, values)
}

/// Tr(ρσ) = 2π ∬ W_ρ W_σ dq dp by trapezoid rule. Both grids must share one
/// spec; the summation order is fixed, so the result is exactly symmetric
/// in its arguments.
pub fn wigner_overlap(a: &WignerGrid, b: &WignerGrid) -> Result<f64> {
    if a.spec != b.spec {
        return Err(Error::Dimension(format!(
            "grids differ: {:?} vs {:?}",
            a.spec, b.spec
        )));
    }
    let w = a.spec.weights();
    let mut total = 0.0;
    for i in 0..w.len() {
        let mut row = 0.0;
        for j in 0..w.len() {
            row += w[j] * a.values[[i, j]] * b.values[[i, j]];
        }
        total += w[i] * row;
    }
    Ok(2.0 * std::f64::consts::PI * total)
}
