//! Phase-insensitive bosonic channels and the two transduction schemes.
//!
//! Direct conversion is a thermal attenuator with transmissivity
//! η = ζₘζₒ·4C/(1+C)². The teleportation scheme, for a resource with
//! standard-form constants (u, v, w) and displacement gain κ, reduces to a
//! thermal attenuator (κ < 1), a thermal amplifier (κ > 1), or an additive
//! Gaussian noise channel (κ = 1). Channel thermal occupations `n_th` and
//! `n_add` are photon numbers; the bridge to additive-noise variances per
//! quadrature happens in exactly one place, [`reduce_to_additive`].

use crate::device::{DeviceParams, EntanglementCM};
use crate::error::{Error, Result};
use crate::gaussian::{gaussian_wigner, GaussianState, WignerGrid};
use crate::kernel;

/// Single-mode phase-insensitive Gaussian channel.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum PhaseInsensitiveChannel {
    /// Thermal attenuator: transmissivity η ∈ (0, 1], environment occupation N ≥ 0.
    Attenuator { eta: f64, n_th: f64 },
    /// Thermal amplifier: gain G > 1, environment occupation N ≥ 0.
    Amplifier { gain: f64, n_th: f64 },
    /// Additive Gaussian noise of `n_add` photons (variance per quadrature).
    AdditiveNoise { n_add: f64 },
    /// Degenerate η → 0⁺ limit: the input is discarded and replaced by the
    /// environment thermal state. Has no additive-noise reduction.
    FullyDepolarizing { n_env: f64 },
}

impl PhaseInsensitiveChannel {
    pub fn attenuator(eta: f64, n_th: f64) -> Result<Self> {
        if !(eta > 0.0 && eta <= 1.0) {
            return Err(Error::InvalidParameter(format!(
                "attenuator transmissivity must lie in (0, 1], got {eta}"
            )));
        }
        if !(n_th >= 0.0) {
            return Err(Error::InvalidParameter(format!(
                "thermal occupation must be >= 0, got {n_th}"
            )));
        }
        Ok(Self::Attenuator { eta, n_th })
    }

    pub fn amplifier(gain: f64, n_th: f64) -> Result<Self> {
        if !(gain > 1.0) {
            return Err(Error::InvalidParameter(format!(
                "amplifier gain must exceed 1, got {gain}"
            )));
        }
        if !(n_th >= 0.0) {
            return Err(Error::InvalidParameter(format!(
                "thermal occupation must be >= 0, got {n_th}"
            )));
        }
        Ok(Self::Amplifier { gain, n_th })
    }

    pub fn additive_noise(n_add: f64) -> Result<Self> {
        if !(n_add >= 0.0) {
            return Err(Error::InvalidParameter(format!(
                "additive noise must be >= 0, got {n_add}"
            )));
        }
        Ok(Self::AdditiveNoise { n_add })
    }

    /// Amplitude scale b and Gaussian kernel parameter a of the Wigner-domain
    /// action W_out(y) = (1/πa) ∫ W_in(x) e^{−(bx−y)²/a} d²x. `None` for the
    /// degenerate and exactly-noiseless cases.
    pub(crate) fn kernel_params(&self) -> Option<(f64, f64)> {
        match *self {
            Self::Attenuator { eta, n_th } => Some((eta.sqrt(), (1.0 + 2.0 * n_th) * (1.0 - eta))),
            Self::Amplifier { gain, n_th } => {
                Some((gain.sqrt(), (1.0 + 2.0 * n_th) * (gain - 1.0)))
            }
            Self::AdditiveNoise { n_add } => Some((1.0, 2.0 * n_add)),
            Self::FullyDepolarizing { .. } => None,
        }
    }
}

/// Pre/post Gaussian processing that turns a channel into pure additive
/// noise: a quantum-limited amplifier of `pre_gain` before, or a pure-loss
/// channel of transmissivity `post_loss` after. `sigma2` is the resulting
/// additive variance per quadrature (ħ = 1 units).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AdditiveReduction {
    pub pre_gain: f64,
    pub post_loss: f64,
    pub sigma2: f64,
}

/// The direct-conversion channel of a transducer run as a frequency
/// beamsplitter. Valid for any C ≥ 0; C = 0 (or a dead extraction port)
/// gives the degenerate fully-depolarizing limit.
pub fn dc_channel(p: &DeviceParams) -> PhaseInsensitiveChannel {
    let (c, zo, zm, n) = (p.cooperativity, p.zeta_o, p.zeta_m, p.n_in);
    let conv = 4.0 * c / ((1.0 + c) * (1.0 + c));
    let eta = zm * zo * conv;
    if eta == 0.0 {
        return PhaseInsensitiveChannel::FullyDepolarizing {
            n_env: (1.0 - zm) * zo * conv * n,
        };
    }
    if eta >= 1.0 {
        // only reachable at C = 1, ζₒ = ζₘ = 1, where the noise vanishes
        return PhaseInsensitiveChannel::Attenuator {
            eta: 1.0,
            n_th: 0.0,
        };
    }
    let n_dc = (1.0 - zm) * zo * conv * n / (1.0 - eta);
    PhaseInsensitiveChannel::Attenuator { eta, n_th: n_dc }
}

/// Minimum cooperativity for the direct-conversion channel to exceed
/// transmissivity 1/2; `None` when ζₘζₒ ≤ 1/2 and no cooperativity reaches
/// it.
pub fn dc_threshold(zeta_o: f64, zeta_m: f64) -> Option<f64> {
    let z = zeta_o * zeta_m;
    if z <= 0.5 {
        return None;
    }
    Some(-1.0 + 4.0 * z - (8.0 * z * (2.0 * z - 1.0)).sqrt())
}

/// The effective channel of teleportation with resource `cm` and
/// displacement gain κ. Within |1 − κ²| < 1e-6 the additive-noise form is
/// used; the branches join continuously there.
pub fn tp_channel(cm: &EntanglementCM, kappa: f64) -> Result<PhaseInsensitiveChannel> {
    if !(kappa > 0.0) || !kappa.is_finite() {
        return Err(Error::InvalidParameter(format!(
            "kappa must be positive, got {kappa}"
        )));
    }
    let (u, v, w) = (cm.u, cm.v, cm.w);
    let quad = u * kappa * kappa - 2.0 * v * kappa + w;
    let det = 1.0 - kappa * kappa;
    if det.abs() < 1e-6 {
        let n_add = quad / 2.0;
        if n_add < -1e-9 {
            return Err(Error::Internal(format!(
                "negative additive noise {n_add} from an unphysical resource"
            )));
        }
        return Ok(PhaseInsensitiveChannel::AdditiveNoise {
            n_add: n_add.max(0.0),
        });
    }
    let mut n = 0.5 * (quad / det.abs() - 1.0);
    if n < -1e-9 {
        return Err(Error::Internal(format!(
            "negative thermal occupation {n} from an unphysical resource"
        )));
    }
    if n < 0.0 {
        n = 0.0;
    }
    if kappa < 1.0 {
        Ok(PhaseInsensitiveChannel::Attenuator {
            eta: kappa * kappa,
            n_th: n,
        })
    } else {
        Ok(PhaseInsensitiveChannel::Amplifier {
            gain: kappa * kappa,
            n_th: n,
        })
    }
}

/// Mean and covariance transformation of a single-mode Gaussian state.
pub fn apply_to_gaussian(
    ch: &PhaseInsensitiveChannel,
    state: &GaussianState,
) -> Result<GaussianState> {
    if state.modes() != 1 {
        return Err(Error::Dimension(format!(
            "phase-insensitive channels act on one mode, state has {}",
            state.modes()
        )));
    }
    let mean = state.mean().clone();
    let cov = state.cov().clone();
    let eye = nalgebra::DMatrix::<f64>::identity(2, 2);
    let (mean, cov) = match *ch {
        PhaseInsensitiveChannel::Attenuator { eta, n_th } => (
            mean * eta.sqrt(),
            cov * eta + eye * ((1.0 - eta) * (n_th + 0.5)),
        ),
        PhaseInsensitiveChannel::Amplifier { gain, n_th } => (
            mean * gain.sqrt(),
            cov * gain + eye * ((gain - 1.0) * (n_th + 0.5)),
        ),
        PhaseInsensitiveChannel::AdditiveNoise { n_add } => (mean, cov + eye * n_add),
        PhaseInsensitiveChannel::FullyDepolarizing { n_env } => {
            return Ok(GaussianState::thermal(n_env))
        }
    };
    GaussianState::new(mean, cov)
}

/// Numerical channel action on a Wigner grid by separable Gaussian
/// convolution. The output lattice keeps the point count and stretches the
/// half-width to hold the scaled state plus six kernel standard deviations.
/// The result is renormalized to unit integral; a renormalization factor
/// off by more than 1e-3 logs a warning.
pub fn apply_to_wigner(ch: &PhaseInsensitiveChannel, input: &WignerGrid) -> Result<WignerGrid> {
    if let PhaseInsensitiveChannel::FullyDepolarizing { n_env } = ch {
        return gaussian_wigner(&GaussianState::thermal(*n_env), input.spec());
    }
    let (b, a) = ch.kernel_params().expect("degenerate case handled above");
    if a == 0.0 {
        // noiseless identity (η = 1 or n_add = 0)
        return Ok(input.clone());
    }
    kernel::check_resolution(input.spec(), (a / 2.0).sqrt() / b)?;
    let out_spec = kernel::output_spec(input.spec(), b, a)?;
    let raw = kernel::apply_gaussian_kernel(input, b, a, out_spec)?;
    let integral = raw.integral();
    if integral <= 0.0 {
        return Err(Error::Internal(
            "channel output has non-positive total mass".into(),
        ));
    }
    let factor = 1.0 / integral;
    if (factor - 1.0).abs() > 1e-3 {
        log::warn!(
            "apply_to_wigner renormalized by {factor:.6}; the grid is likely truncating the state"
        );
    } else {
        log::debug!("apply_to_wigner renormalization factor {factor:.3e}");
    }
    WignerGrid::from_values(out_spec, raw.values() * factor)
}

/// Converts a channel into pure additive noise with quantum-limited pre- or
/// post-processing. This is the single point where channel photon numbers
/// are bridged to additive variances per quadrature.
pub fn reduce_to_additive(ch: &PhaseInsensitiveChannel) -> Result<AdditiveReduction> {
    match *ch {
        PhaseInsensitiveChannel::Attenuator { eta, n_th } => Ok(AdditiveReduction {
            pre_gain: 1.0 / eta,
            post_loss: 1.0,
            sigma2: (1.0 - eta) * (n_th + 1.0),
        }),
        PhaseInsensitiveChannel::Amplifier { gain, n_th } => Ok(AdditiveReduction {
            pre_gain: 1.0,
            post_loss: 1.0 / gain,
            sigma2: (1.0 - 1.0 / gain) * (n_th + 1.0),
        }),
        PhaseInsensitiveChannel::AdditiveNoise { n_add } => Ok(AdditiveReduction {
            pre_gain: 1.0,
            post_loss: 1.0,
            sigma2: n_add,
        }),
        PhaseInsensitiveChannel::FullyDepolarizing { .. } => Err(Error::Domain(
            "the fully depolarizing limit needs infinite pre-gain".into(),
        )),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::device::entanglement_cm;
    use crate::gaussian::{symplectic_eigenvalues, GridSpec};
    use approx::assert_abs_diff_eq;
    use num_complex::Complex64;

    #[test]
    fn dc_channel_reference_points() {
        // C = 1 with ideal extraction is the identity channel
        let ch = dc_channel(&DeviceParams::new(1.0, 1.0, 1.0, 0.0).unwrap());
        assert_eq!(
            ch,
            PhaseInsensitiveChannel::Attenuator {
                eta: 1.0,
                n_th: 0.0
            }
        );

        // practical high-cooperativity point
        let ch = dc_channel(&DeviceParams::new(1.0, 0.9, 0.95, 2.0).unwrap());
        match ch {
            PhaseInsensitiveChannel::Attenuator { eta, n_th } => {
                assert_abs_diff_eq!(eta, 0.855, epsilon = 1e-12);
                assert_abs_diff_eq!((1.0 - eta) * n_th, 0.09, epsilon = 1e-12);
            }
            other => panic!("expected attenuator, got {other:?}"),
        }

        // lossless low cooperativity: pure loss
        let ch = dc_channel(&DeviceParams::new(0.1, 1.0, 1.0, 0.0).unwrap());
        match ch {
            PhaseInsensitiveChannel::Attenuator { eta, n_th } => {
                assert_abs_diff_eq!(eta, 0.4 / 1.21, epsilon = 1e-15);
                assert_eq!(n_th, 0.0);
            }
            other => panic!("expected attenuator, got {other:?}"),
        }

        // C = 0 discards the input
        let ch = dc_channel(&DeviceParams::new(0.0, 1.0, 1.0, 0.0).unwrap());
        assert_eq!(
            ch,
            PhaseInsensitiveChannel::FullyDepolarizing { n_env: 0.0 }
        );
    }

    #[test]
    fn threshold_values() {
        let t = dc_threshold(1.0, 1.0).unwrap();
        assert_abs_diff_eq!(t, 3.0 - 2.0 * std::f64::consts::SQRT_2, epsilon = 1e-14);
        let t = dc_threshold(0.9, 0.95).unwrap();
        assert_abs_diff_eq!(t, 0.216, epsilon = 1e-3);
        assert!(dc_threshold(1.0, 0.5).is_none());
        assert!(dc_threshold(0.6, 0.8).is_none());
    }

    #[test]
    fn tp_channel_classifies_by_kappa() {
        let cm = EntanglementCM::new(1.0, 0.0, 1.0).unwrap();
        // classical teleportation penalty: two vacuum units
        match tp_channel(&cm, 1.0).unwrap() {
            PhaseInsensitiveChannel::AdditiveNoise { n_add } => {
                assert_abs_diff_eq!(n_add, 1.0, epsilon = 1e-12)
            }
            other => panic!("expected additive noise, got {other:?}"),
        }
        assert!(matches!(
            tp_channel(&cm, 0.7).unwrap(),
            PhaseInsensitiveChannel::Attenuator { .. }
        ));
        assert!(matches!(
            tp_channel(&cm, 1.3).unwrap(),
            PhaseInsensitiveChannel::Amplifier { .. }
        ));

        let tmsv = EntanglementCM::new(3.0, 2.0 * std::f64::consts::SQRT_2, 3.0).unwrap();
        match tp_channel(&tmsv, 1.0).unwrap() {
            PhaseInsensitiveChannel::AdditiveNoise { n_add } => {
                assert_abs_diff_eq!(n_add, 3.0 - 2.0 * std::f64::consts::SQRT_2, epsilon = 1e-12);
            }
            other => panic!("expected additive noise, got {other:?}"),
        }
    }

    #[test]
    fn tp_channel_high_cooperativity_anchor() {
        // at C -> 1 the noise stays finite only for κ = √(ζm/ζo); there
        // |1-κ²|(1+N_TP) ≈ 0.20 for the practical parameter set
        let p = DeviceParams::new(1.0 - 1e-4, 0.9, 0.95, 2.0).unwrap();
        let cm = entanglement_cm(&p).unwrap();
        let kappa = (0.95f64 / 0.9).sqrt();
        match tp_channel(&cm, kappa).unwrap() {
            PhaseInsensitiveChannel::Amplifier { gain, n_th } => {
                let val = (gain - 1.0).abs() * (1.0 + n_th);
                assert_abs_diff_eq!(val, 0.20, epsilon = 0.01);
            }
            other => panic!("expected amplifier, got {other:?}"),
        }
    }

    #[test]
    fn tp_branches_join_continuously_at_unit_kappa() {
        let cm = entanglement_cm(&DeviceParams::new(0.3, 0.9, 0.95, 1.0).unwrap()).unwrap();
        let st = GaussianState::coherent(Complex64::new(1.0, -0.4));
        let probe = |k: f64| {
            let out = apply_to_gaussian(&tp_channel(&cm, k).unwrap(), &st).unwrap();
            (out.mean().clone(), out.cov().clone())
        };
        let (m_lo, c_lo) = probe(1.0 - 1e-4);
        let (m_mid, c_mid) = probe(1.0);
        let (m_hi, c_hi) = probe(1.0 + 1e-4);
        let rel =
            |a: &nalgebra::DMatrix<f64>, b: &nalgebra::DMatrix<f64>| (a - b).amax() / b.amax();
        assert!(rel(&c_lo, &c_mid) < 1e-3);
        assert!(rel(&c_hi, &c_mid) < 1e-3);
        assert!((&m_lo - &m_mid).amax() < 1e-3);
        assert!((&m_hi - &m_mid).amax() < 1e-3);
    }

    #[test]
    fn gaussian_action_examples() {
        let st = GaussianState::coherent(Complex64::new(2.0, 0.0));
        let id = PhaseInsensitiveChannel::attenuator(1.0, 0.0).unwrap();
        let out = apply_to_gaussian(&id, &st).unwrap();
        assert_eq!(out.mean(), st.mean());

        // vacuum is the fixed point of pure loss
        let vac = GaussianState::vacuum(1);
        let loss = PhaseInsensitiveChannel::attenuator(0.5, 0.0).unwrap();
        let out = apply_to_gaussian(&loss, &vac).unwrap();
        assert!((out.cov() - vac.cov()).amax() < 1e-15);

        // quantum-limited amplifier: mean √2·(2√2, 0) = (4, 0), cov (3/2) I
        let amp = PhaseInsensitiveChannel::amplifier(2.0, 0.0).unwrap();
        let out = apply_to_gaussian(&amp, &st).unwrap();
        assert_abs_diff_eq!(out.mean()[0], 4.0, epsilon = 1e-12);
        assert_abs_diff_eq!(out.cov()[(0, 0)], 1.5, epsilon = 1e-12);
    }

    #[test]
    fn channel_outputs_stay_physical() {
        let st = GaussianState::coherent(Complex64::new(1.0, 1.0));
        for c in [0.0, 0.1, 0.5, 0.9, 1.0, 2.0] {
            for (zo, zm, n) in [(1.0, 1.0, 0.0), (0.9, 0.95, 2.0), (0.5, 0.5, 2.0)] {
                let ch = dc_channel(&DeviceParams::new(c, zo, zm, n).unwrap());
                let out = apply_to_gaussian(&ch, &st).unwrap();
                let nu = symplectic_eigenvalues(out.cov()).unwrap();
                assert!(nu[0] >= 0.5 - 1e-9);
            }
        }
        for kappa in [0.5, 0.9, 1.0, 1.1, 1.5] {
            let cm = entanglement_cm(&DeviceParams::new(0.3, 0.9, 0.95, 2.0).unwrap()).unwrap();
            let ch = tp_channel(&cm, kappa).unwrap();
            let out = apply_to_gaussian(&ch, &st).unwrap();
            let nu = symplectic_eigenvalues(out.cov()).unwrap();
            assert!(nu[0] >= 0.5 - 1e-9);
        }
    }

    #[test]
    fn wigner_action_identity_and_fixed_point() {
        let spec = GridSpec::new(8.0, 129).unwrap();
        let vac = gaussian_wigner(&GaussianState::vacuum(1), spec).unwrap();

        let id = PhaseInsensitiveChannel::attenuator(1.0, 0.0).unwrap();
        let out = apply_to_wigner(&id, &vac).unwrap();
        let linf = out
            .values()
            .iter()
            .zip(vac.values())
            .map(|(a, b)| (a - b).abs())
            .fold(0.0, f64::max);
        assert!(linf < 1e-10);
        assert_eq!(out.spec(), vac.spec());

        let loss = PhaseInsensitiveChannel::attenuator(0.5, 0.0).unwrap();
        let out = apply_to_wigner(&loss, &vac).unwrap();
        let reference = gaussian_wigner(&GaussianState::vacuum(1), out.spec()).unwrap();
        let linf = out
            .values()
            .iter()
            .zip(reference.values())
            .map(|(a, b)| (a - b).abs())
            .fold(0.0, f64::max);
        assert!(linf < 1e-6);
    }

    #[test]
    fn wigner_action_matches_gaussian_action() {
        let spec = GridSpec::new(10.0, 257).unwrap();
        let st = GaussianState::coherent(Complex64::new(1.2, -0.5));
        let input = gaussian_wigner(&st, spec).unwrap();
        let channels = [
            PhaseInsensitiveChannel::attenuator(0.6, 0.8).unwrap(),
            PhaseInsensitiveChannel::amplifier(1.7, 0.3).unwrap(),
            PhaseInsensitiveChannel::additive_noise(0.4).unwrap(),
        ];
        for ch in &channels {
            let grid_out = apply_to_wigner(ch, &input).unwrap();
            let gauss_out = apply_to_gaussian(ch, &st).unwrap();
            let reference = gaussian_wigner(&gauss_out, grid_out.spec()).unwrap();
            let linf = grid_out
                .values()
                .iter()
                .zip(reference.values())
                .map(|(a, b)| (a - b).abs())
                .fold(0.0, f64::max);
            assert!(linf < 1e-5, "channel {ch:?}: Linf = {linf:.3e}");
        }
    }

    #[test]
    fn wigner_action_rejects_underresolved_kernel() {
        let spec = GridSpec::new(8.0, 65).unwrap(); // step 0.25
        let vac = gaussian_wigner(&GaussianState::vacuum(1), spec).unwrap();
        // kernel std = sqrt((1-0.99)/2)/sqrt(0.99) ~ 0.07 << 0.5
        let ch = PhaseInsensitiveChannel::attenuator(0.99, 0.0).unwrap();
        assert!(apply_to_wigner(&ch, &vac).is_err());
    }

    #[test]
    fn additive_reductions() {
        let r =
            reduce_to_additive(&PhaseInsensitiveChannel::attenuator(1.0, 0.0).unwrap()).unwrap();
        assert_eq!(r.sigma2, 0.0);

        let r =
            reduce_to_additive(&PhaseInsensitiveChannel::attenuator(0.5, 1.0).unwrap()).unwrap();
        assert_abs_diff_eq!(r.sigma2, 1.0, epsilon = 1e-15);
        assert_abs_diff_eq!(r.pre_gain, 2.0, epsilon = 1e-15);
        assert_eq!(r.post_loss, 1.0);

        let r = reduce_to_additive(&PhaseInsensitiveChannel::amplifier(2.0, 0.0).unwrap()).unwrap();
        assert_abs_diff_eq!(r.sigma2, 0.5, epsilon = 1e-15);
        assert_abs_diff_eq!(r.post_loss, 0.5, epsilon = 1e-15);

        assert!(
            reduce_to_additive(&PhaseInsensitiveChannel::FullyDepolarizing { n_env: 0.0 }).is_err()
        );
    }

    #[test]
    fn tp_noise_limits_at_zero_cooperativity() {
        // with C = 0 the quadratic form is exactly 1 + κ² + 8 n ζm(1-ζm)
        for kappa in [0.5, 0.9, 1.3] {
            let p = DeviceParams::new(0.0, 0.9, 0.95, 2.0).unwrap();
            let cm = entanglement_cm(&p).unwrap();
            let quad = cm.u * kappa * kappa - 2.0 * cm.v * kappa + cm.w;
            let expect = 1.0 + kappa * kappa + 8.0 * 2.0 * (1.0 - 0.95) * 0.95;
            assert_abs_diff_eq!(quad, expect, epsilon = 1e-9);
        }
    }
}
