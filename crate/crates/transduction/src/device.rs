//! The microwave-optical entanglement resource.
//!
//! A cavity electro-optic transducer pumped for two-mode squeezing emits an
//! entangled microwave-optical pair whose covariance matrix has the standard
//! form ½ [[u I₂, v Z₂], [v Z₂, w I₂]]. Two independent routes to (u, v, w)
//! are provided: the closed forms in terms of cooperativity and extraction
//! efficiencies, and a frequency-domain input-output (Heisenberg-Langevin)
//! matrix solution that serves as the oracle for the closed forms.

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::gaussian::GaussianState;

/// Dimensionless transducer description.
///
/// Direct conversion accepts any cooperativity C ≥ 0; stable entanglement
/// generation additionally needs C < 1 (enforced by [`entanglement_cm`],
/// not here).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DeviceParams {
    /// Interaction cooperativity C = 4Ng²/(γₒγₘ).
    pub cooperativity: f64,
    /// Optical extraction efficiency ζₒ = γ_oc/γₒ ∈ [0, 1].
    pub zeta_o: f64,
    /// Microwave extraction efficiency ζₘ = γ_mc/γₘ ∈ [0, 1].
    pub zeta_m: f64,
    /// Thermal occupation of the microwave bath, ≥ 0.
    pub n_in: f64,
}

impl DeviceParams {
    pub fn new(cooperativity: f64, zeta_o: f64, zeta_m: f64, n_in: f64) -> Result<Self> {
        if !(cooperativity >= 0.0) || !cooperativity.is_finite() {
            return Err(Error::InvalidParameter(format!(
                "cooperativity must be >= 0, got {cooperativity}"
            )));
        }
        for (name, z) in [("zeta_o", zeta_o), ("zeta_m", zeta_m)] {
            if !(0.0..=1.0).contains(&z) {
                return Err(Error::InvalidParameter(format!(
                    "{name} must lie in [0, 1], got {z}"
                )));
            }
        }
        if !(n_in >= 0.0) || !n_in.is_finite() {
            return Err(Error::InvalidParameter(format!(
                "n_in must be >= 0, got {n_in}"
            )));
        }
        Ok(DeviceParams {
            cooperativity,
            zeta_o,
            zeta_m,
            n_in,
        })
    }
}

/// Physical-rate description of the transducer for the Langevin route.
///
/// All rates in rad/s. Detunings are carried through the matrices but the
/// closed forms are resonance results; nonzero detuning is exposed without
/// being validated against them.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LangevinParams {
    /// Pump-enhanced electro-optic coupling rate.
    pub g_e: f64,
    /// Optical coupling (extraction) loss rate.
    pub gamma_pc: f64,
    /// Optical intrinsic loss rate.
    pub gamma_pi: f64,
    /// Microwave coupling (extraction) loss rate.
    pub gamma_ec: f64,
    /// Microwave intrinsic loss rate.
    pub gamma_ei: f64,
    /// Optical detuning.
    pub delta_p: f64,
    /// Microwave detuning.
    pub delta_e: f64,
    /// Thermal occupation of the microwave bath.
    pub n_in: f64,
}

impl LangevinParams {
    pub fn new(
        g_e: f64,
        gamma_pc: f64,
        gamma_pi: f64,
        gamma_ec: f64,
        gamma_ei: f64,
        delta_p: f64,
        delta_e: f64,
        n_in: f64,
    ) -> Result<Self> {
        for (name, r) in [
            ("g_e", g_e),
            ("gamma_pc", gamma_pc),
            ("gamma_pi", gamma_pi),
            ("gamma_ec", gamma_ec),
            ("gamma_ei", gamma_ei),
        ] {
            if !(r >= 0.0) || !r.is_finite() {
                return Err(Error::InvalidParameter(format!(
                    "{name} must be >= 0, got {r}"
                )));
            }
        }
        let gamma_p = gamma_pc + gamma_pi;
        let gamma_e = gamma_ec + gamma_ei;
        if gamma_p <= 0.0 || gamma_e <= 0.0 {
            return Err(Error::InvalidParameter(
                "total loss rates must be positive".into(),
            ));
        }
        if !(n_in >= 0.0) {
            return Err(Error::InvalidParameter(format!(
                "n_in must be >= 0, got {n_in}"
            )));
        }
        let coop = 4.0 * g_e * g_e / (gamma_p * gamma_e);
        if coop >= 1.0 {
            return Err(Error::InvalidParameter(format!(
                "derived cooperativity {coop} >= 1: entanglement generation unstable"
            )));
        }
        Ok(LangevinParams {
            g_e,
            gamma_pc,
            gamma_pi,
            gamma_ec,
            gamma_ei,
            delta_p,
            delta_e,
            n_in,
        })
    }

    /// Convenience: rates chosen to realize the given dimensionless
    /// parameters at resonance, with unit total loss rates.
    pub fn from_device(p: &DeviceParams) -> Result<Self> {
        let g_e = (p.cooperativity / 4.0).sqrt();
        LangevinParams::new(
            g_e,
            p.zeta_o,
            1.0 - p.zeta_o,
            p.zeta_m,
            1.0 - p.zeta_m,
            0.0,
            0.0,
            p.n_in,
        )
    }
}

/// Standard-form covariance constants of the two-mode resource,
/// V = ½ [[u I₂, v Z₂], [v Z₂, w I₂]].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EntanglementCM {
    pub u: f64,
    pub v: f64,
    pub w: f64,
}

impl EntanglementCM {
    /// Validates u ≥ 1, w ≥ 1, v ≥ 0 and physicality of the covariance.
    pub fn new(u: f64, v: f64, w: f64) -> Result<Self> {
        if !(u >= 1.0 - 1e-12) || !(w >= 1.0 - 1e-12) || !(v >= 0.0) {
            return Err(Error::InvalidParameter(format!(
                "need u >= 1, w >= 1, v >= 0; got ({u}, {v}, {w})"
            )));
        }
        let cm = EntanglementCM { u, v, w };
        crate::gaussian::validate_physicality(&cm.covariance()).map_err(|_| {
            Error::InvalidParameter(format!("unphysical standard form ({u}, {v}, {w})"))
        })?;
        Ok(cm)
    }

    /// The explicit 4×4 covariance matrix ½ [[u I₂, v Z₂], [v Z₂, w I₂]].
    pub fn covariance(&self) -> DMatrix<f64> {
        let (u, v, w) = (self.u, self.v, self.w);
        #[rustfmt::skip]
        let m = DMatrix::from_row_slice(4, 4, &[
            u, 0.0,  v,  0.0,
            0.0, u,  0.0, -v,
            v, 0.0,  w,  0.0,
            0.0, -v, 0.0,  w,
        ]);
        m * 0.5
    }

    /// The resource as a two-mode Gaussian state with zero mean.
    pub fn state(&self) -> Result<GaussianState> {
        GaussianState::new(DVector::zeros(4), self.covariance())
    }
}

/// Closed-form covariance constants of the generated resource:
///
/// u = 1 + 8Cζₒ[1 + n(1−ζₘ)]/(1−C)²,
/// v = 4√(ζₒζₘC)[1 + C + 2n(1−ζₘ)]/(1−C)²,
/// w = 1 + 8ζₘ[C + n(1−ζₘ)]/(1−C)².
pub fn entanglement_cm(p: &DeviceParams) -> Result<EntanglementCM> {
    if p.cooperativity >= 1.0 {
        return Err(Error::Domain(format!(
            "entanglement generation requires C < 1 (resource diverges), got C = {}",
            p.cooperativity
        )));
    }
    let (c, zo, zm, n) = (p.cooperativity, p.zeta_o, p.zeta_m, p.n_in);
    let d = (1.0 - c) * (1.0 - c);
    let u = 1.0 + 8.0 * c * zo * (1.0 + n * (1.0 - zm)) / d;
    let v = 4.0 * (zo * zm * c).sqrt() * (1.0 + c + 2.0 * n * (1.0 - zm)) / d;
    let w = 1.0 + 8.0 * zm * (c + n * (1.0 - zm)) / d;
    EntanglementCM::new(u, v, w)
}

/// Output covariance of the two extracted modes from the frequency-domain
/// input-output solution.
///
/// The intracavity modes obey 0 = G a + K a_in with the 4×4 drift matrix G
/// over (â, â†, m̂, m̂†) and the 4×8 coupling matrix K into the ordered input
/// ports (optical coupling, optical intrinsic, microwave coupling, microwave
/// intrinsic); the scattering matrix is S = KᵀG⁻¹K + I₈. Quadrature
/// conversion uses Q = I₄ ⊗ (1/√2)[[1, 1], [−i, i]]. Inputs are vacuum
/// except the intrinsic microwave port at thermal occupation n_in. Returns
/// the 4×4 covariance of the two coupling-port outputs (optical, microwave).
pub fn langevin_cm(p: &LangevinParams) -> Result<DMatrix<f64>> {
    let gamma_p = p.gamma_pc + p.gamma_pi;
    let gamma_e = p.gamma_ec + p.gamma_ei;
    let i = Complex64::new(0.0, 1.0);
    let g = Complex64::new(p.g_e, 0.0);

    let mut gm = DMatrix::<Complex64>::zeros(4, 4);
    gm[(0, 0)] = -gamma_p / 2.0 + i * p.delta_p;
    gm[(1, 1)] = -gamma_p / 2.0 - i * p.delta_p;
    gm[(2, 2)] = -gamma_e / 2.0 + i * p.delta_e;
    gm[(3, 3)] = -gamma_e / 2.0 - i * p.delta_e;
    gm[(0, 3)] = -i * g;
    gm[(1, 2)] = i * g;
    gm[(2, 1)] = -i * g;
    gm[(3, 0)] = i * g;

    let mut k = DMatrix::<Complex64>::zeros(4, 8);
    k[(0, 0)] = p.gamma_pc.sqrt().into();
    k[(0, 2)] = p.gamma_pi.sqrt().into();
    k[(1, 1)] = p.gamma_pc.sqrt().into();
    k[(1, 3)] = p.gamma_pi.sqrt().into();
    k[(2, 4)] = p.gamma_ec.sqrt().into();
    k[(2, 6)] = p.gamma_ei.sqrt().into();
    k[(3, 5)] = p.gamma_ec.sqrt().into();
    k[(3, 7)] = p.gamma_ei.sqrt().into();

    let g_inv = gm
        .clone()
        .try_inverse()
        .ok_or_else(|| Error::Domain("drift matrix G is singular at these detunings".into()))?;
    let s_a = k.transpose() * g_inv * &k + DMatrix::<Complex64>::identity(8, 8);

    // ladder -> quadrature basis; Q is unitary so Q⁻¹ = Q†
    let r = Complex64::new(std::f64::consts::FRAC_1_SQRT_2, 0.0);
    let mut q = DMatrix::<Complex64>::zeros(8, 8);
    for m in 0..4 {
        q[(2 * m, 2 * m)] = r;
        q[(2 * m, 2 * m + 1)] = r;
        q[(2 * m + 1, 2 * m)] = -i * r;
        q[(2 * m + 1, 2 * m + 1)] = i * r;
    }
    let s_x = &q * s_a * q.adjoint();

    let residue = s_x.iter().map(|z| z.im.abs()).fold(0.0, f64::max);
    if residue > 1e-10 {
        return Err(Error::Internal(format!(
            "quadrature scattering matrix has imaginary residue {residue:.3e}"
        )));
    }
    let s_x_re = s_x.map(|z| z.re);

    let mut v_in = DMatrix::<f64>::identity(8, 8) * 0.5;
    v_in[(6, 6)] = p.n_in + 0.5;
    v_in[(7, 7)] = p.n_in + 0.5;

    let v_out = &s_x_re * v_in * s_x_re.transpose();

    // extracted modes: optical coupling port (rows 0,1), microwave coupling port (rows 4,5)
    let idx = [0usize, 1, 4, 5];
    let mut out = DMatrix::<f64>::zeros(4, 4);
    for (a, &ia) in idx.iter().enumerate() {
        for (b, &ib) in idx.iter().enumerate() {
            out[(a, b)] = v_out[(ia, ib)];
        }
    }
    Ok(out)
}

/// Reads the standard-form constants off an input-output covariance with
/// the pattern diag(u, u, w, w)/2 plus ±v/2 on the anti-diagonal of each
/// off-diagonal block, fixing the mode-1 π/2 rotation sign so that v ≥ 0.
pub fn to_standard_form(v: &DMatrix<f64>) -> Result<EntanglementCM> {
    if v.nrows() != 4 || v.ncols() != 4 {
        return Err(Error::Dimension(format!(
            "expected 4x4 covariance, got {}x{}",
            v.nrows(),
            v.ncols()
        )));
    }
    let tol = 1e-9 * v.amax().max(1.0);
    let u = v[(0, 0)] + v[(1, 1)];
    let w = v[(2, 2)] + v[(3, 3)];
    let c1 = v[(0, 3)];
    let c2 = v[(1, 2)];
    if (v[(0, 0)] - v[(1, 1)]).abs() > tol
        || (v[(2, 2)] - v[(3, 3)]).abs() > tol
        || (c1 - c2).abs() > tol
    {
        return Err(Error::Domain(
            "covariance does not have the expected input-output pattern".into(),
        ));
    }
    // every entry outside {diagonal, (0,3), (1,2)} and transposes must vanish
    for i in 0..4 {
        for j in 0..4 {
            let expected_slot = i == j
                || (i, j) == (0, 3)
                || (i, j) == (3, 0)
                || (i, j) == (1, 2)
                || (i, j) == (2, 1);
            if !expected_slot && v[(i, j)].abs() > tol {
                return Err(Error::Domain(format!(
                    "off-pattern entry {:.3e} at ({i},{j})",
                    v[(i, j)]
                )));
            }
        }
    }
    EntanglementCM::new(u, 2.0 * c1.abs(), w)
}

/// C = 4g²/(γₚγₑ), ζₒ = γ_pc/γₚ, ζₘ = γ_ec/γₑ. Fails when a total loss rate
/// vanishes.
pub fn device_from_langevin(p: &LangevinParams) -> Result<DeviceParams> {
    let gamma_p = p.gamma_pc + p.gamma_pi;
    let gamma_e = p.gamma_ec + p.gamma_ei;
    if gamma_p <= 0.0 || gamma_e <= 0.0 {
        return Err(Error::Domain("zero total loss rate".into()));
    }
    DeviceParams::new(
        4.0 * p.g_e * p.g_e / (gamma_p * gamma_e),
        p.gamma_pc / gamma_p,
        p.gamma_ec / gamma_e,
        p.n_in,
    )
}
