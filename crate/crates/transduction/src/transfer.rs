//! State-transfer figures of merit: closed-form coherent and cat fidelities,
//! additive-noise variance minimization, and the leading-order GKP
//! error-correction success probability.
//!
//! Both schemes act on a Wigner function as
//! W_out(y) = (1/πa) ∫ W_in(x) e^{−(bx−y)²/a} d²x, so every fidelity here is
//! a function of the pair (a, b) alone: a = (1+2N)(1−η), b = √η for direct
//! conversion and a = uκ² − 2vκ + w, b = κ for teleportation. For a pure
//! input the Uhlmann fidelity reduces to Tr(ρ_in ρ_out), which the closed
//! forms below evaluate; the grid quadrature in [`crate::gaussian`] is the
//! independent check.

use num_complex::Complex64;

use crate::channels::{dc_channel, PhaseInsensitiveChannel};
use crate::device::{DeviceParams, EntanglementCM};
use crate::error::{Error, Result};
use crate::gaussian::Parity;
use crate::opt;
use crate::special::erf;

/// Kernel pair (a, b) of a transduction scheme.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SchemeNoiseParams {
    /// Total noise parameter (kernel width).
    pub a: f64,
    /// Amplitude transfer factor.
    pub b: f64,
}

impl SchemeNoiseParams {
    /// Direct conversion: a = (1 + 2N)(1 − η), b = √η.
    pub fn direct_conversion(p: &DeviceParams) -> Self {
        match dc_channel(p) {
            PhaseInsensitiveChannel::Attenuator { eta, n_th } => SchemeNoiseParams {
                a: (1.0 + 2.0 * n_th) * (1.0 - eta),
                b: eta.sqrt(),
            },
            PhaseInsensitiveChannel::FullyDepolarizing { n_env } => SchemeNoiseParams {
                a: 1.0 + 2.0 * n_env,
                b: 0.0,
            },
            // dc_channel never returns the other variants
            ch => unreachable!("direct conversion produced {ch:?}"),
        }
    }

    /// Teleportation at gain κ: a = uκ² − 2vκ + w, b = κ.
    pub fn teleportation(cm: &EntanglementCM, kappa: f64) -> Self {
        SchemeNoiseParams {
            a: cm.u * kappa * kappa - 2.0 * cm.v * kappa + cm.w,
            b: kappa,
        }
    }
}

/// Finite-squeezing description of a GKP state: the ideal grid state under a
/// Gaussian envelope of standard deviation `sigma_gkp` (quadrature units).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GkpSpec {
    pub sigma_gkp: f64,
}

impl GkpSpec {
    /// The leading-order error model is meaningful for σ_GKP ≪ √π/2; larger
    /// values are accepted with a warning.
    pub fn new(sigma_gkp: f64) -> Result<Self> {
        if !(sigma_gkp >= 0.0) || !sigma_gkp.is_finite() {
            return Err(Error::InvalidParameter(format!(
                "sigma_gkp must be >= 0, got {sigma_gkp}"
            )));
        }
        if sigma_gkp >= 0.5 * std::f64::consts::PI.sqrt() {
            log::warn!(
                "sigma_gkp = {sigma_gkp} is not small against sqrt(pi)/2; the leading-order \
                 success probability is unreliable here"
            );
        }
        Ok(GkpSpec { sigma_gkp })
    }
}

/// Coherent-state fidelity through a scheme with kernel pair (a, b):
/// F = (2/A) exp(−2|α|²(1−b)²/A) with A = 1 + a + b².
pub fn fidelity_coherent(noise: &SchemeNoiseParams, alpha: Complex64) -> f64 {
    let a_tot = 1.0 + noise.a + noise.b * noise.b;
    (2.0 / a_tot) * (-2.0 * alpha.norm_sqr() * (1.0 - noise.b).powi(2) / a_tot).exp()
}

/// Coherent-state fidelity of direct conversion.
pub fn fidelity_coherent_dc(p: &DeviceParams, alpha: Complex64) -> f64 {
    fidelity_coherent(&SchemeNoiseParams::direct_conversion(p), alpha)
}

/// Outcome-averaged coherent-state fidelity of teleportation at gain κ;
/// exactly α-independent at κ = 1.
pub fn fidelity_coherent_tp(cm: &EntanglementCM, kappa: f64, alpha: Complex64) -> f64 {
    fidelity_coherent(&SchemeNoiseParams::teleportation(cm, kappa), alpha)
}

/// Cat-state fidelity through a scheme with kernel pair (a, b): the
/// six-term closed form with prefactor 4N±⁴/(1 + a + b²),
/// N±² = 1/(2 ± 2e^(−2α²)).
pub fn fidelity_cat(noise: &SchemeNoiseParams, alpha: f64, parity: Parity) -> f64 {
    let s = parity.sign();
    let a2 = alpha * alpha;
    let (a, b) = (noise.a, noise.b);
    let d = 1.0 + a + b * b;
    let n2 = 1.0 / (2.0 + s * 2.0 * (-2.0 * a2).exp());
    let e = |num: f64| (-2.0 * a2 * num / d).exp();
    let terms = e((1.0 - b).powi(2))
        + e((1.0 + b).powi(2))
        + s * 2.0 * e(2.0 + a)
        + s * 2.0 * e(a + 2.0 * b * b)
        + e(2.0 * a + (1.0 + b).powi(2))
        + e(2.0 * a + (1.0 - b).powi(2));
    4.0 * n2 * n2 / d * terms
}

/// Teleportation gain maximizing the coherent-state fidelity, with the
/// fidelity at that gain.
pub fn optimal_fidelity_coherent_tp(cm: &EntanglementCM, alpha: Complex64) -> (f64, f64) {
    maximize_over_kappa(cm, |k| fidelity_coherent_tp(cm, k, alpha))
}

/// Teleportation gain maximizing the cat-state fidelity, with the fidelity
/// at that gain.
pub fn optimal_fidelity_cat_tp(cm: &EntanglementCM, alpha: f64, parity: Parity) -> (f64, f64) {
    maximize_over_kappa(cm, |k| {
        fidelity_cat(&SchemeNoiseParams::teleportation(cm, k), alpha, parity)
    })
}

fn maximize_over_kappa(cm: &EntanglementCM, f: impl Fn(f64) -> f64 + Copy) -> (f64, f64) {
    let hi = (2.0 * (cm.w / cm.u).sqrt()).max(2.0);
    let points = opt::log_spaced(0.01, hi, 200);
    opt::scan_then_golden(f, &points, 1e-10)
}

/// Additive noise variance of direct conversion after quantum-limited
/// pre-amplification by 1/η: σ² = 1 + 4C[n(1−ζₘ) − ζₘ]ζₒ/(1+C)². Requires
/// C > 0, otherwise the pre-gain diverges.
pub fn additive_sigma_dc(p: &DeviceParams) -> Result<f64> {
    if p.cooperativity <= 0.0 {
        return Err(Error::Domain(
            "additive reduction of direct conversion needs C > 0 (infinite pre-gain)".into(),
        ));
    }
    let c = p.cooperativity;
    Ok(1.0 + 4.0 * c * (p.n_in * (1.0 - p.zeta_m) - p.zeta_m) * p.zeta_o / ((1.0 + c) * (1.0 + c)))
}

/// Minimal additive noise variance of the teleportation scheme and the gain
/// achieving it. For κ ≤ 1 (pre-amplify) σ² = [(u−1)κ² − 2vκ + 1 + w]/2,
/// minimized at κ = min(1, v/(u−1)); for κ ≥ 1 (post-attenuate)
/// σ² = [(w−1)/κ² − 2v/κ + 1 + u]/2, minimized at κ = max(1, (w−1)/v). Both
/// branch minimizers and κ = 1 are evaluated and the smallest taken.
pub fn additive_sigma_tp(cm: &EntanglementCM) -> (f64, f64) {
    let (u, v, w) = (cm.u, cm.v, cm.w);
    let mut candidates = vec![1.0];
    if u > 1.0 {
        candidates.push((v / (u - 1.0)).min(1.0));
    }
    if v > 0.0 {
        candidates.push(((w - 1.0) / v).max(1.0));
    }
    let sigma2_at = |k: f64| {
        if k <= 1.0 {
            0.5 * ((u - 1.0) * k * k - 2.0 * v * k + 1.0 + w)
        } else {
            0.5 * ((w - 1.0) / (k * k) - 2.0 * v / k + 1.0 + u)
        }
    };
    let mut best = (sigma2_at(1.0), 1.0);
    for k in candidates {
        let s2 = sigma2_at(k);
        if s2 < best.0 {
            best = (s2, k);
        }
    }
    best
}

/// Leading-order GKP error-correction success probability for an additive
/// noise of variance σ² on top of two finite-squeezing contributions:
/// P_s = Erf(√π / (2√(2(σ² + 2σ²_GKP))))², from independent round-offs of
/// both quadratures to the nearest lattice point.
pub fn gkp_success(sigma2: f64, spec: &GkpSpec) -> Result<f64> {
    if !(sigma2 >= 0.0) {
        return Err(Error::Domain(format!(
            "additive variance must be >= 0, got {sigma2}"
        )));
    }
    let total = sigma2 + 2.0 * spec.sigma_gkp * spec.sigma_gkp;
    if total == 0.0 {
        return Ok(1.0);
    }
    let arg = std::f64::consts::PI.sqrt() / (2.0 * (2.0 * total).sqrt());
    Ok(erf(arg).powi(2))
}

/// Squeezing level in dB equivalent to a finite-squeezing parameter:
/// solves (1 − e^(−Δ))/(1 + e^(−Δ)) = σ²_GKP for Δ, i.e.
/// Δ = ln[(1+σ²)/(1−σ²)], and reports 10 log₁₀(1/Δ). Defined for
/// 0 < σ²_GKP < 1.
pub fn squeezing_db(spec: &GkpSpec) -> Result<f64> {
    let s2 = spec.sigma_gkp * spec.sigma_gkp;
    if !(s2 > 0.0 && s2 < 1.0) {
        return Err(Error::Domain(format!(
            "squeezing mapping needs 0 < sigma_gkp^2 < 1, got {s2}"
        )));
    }
    let delta = ((1.0 + s2) / (1.0 - s2)).ln();
    Ok(10.0 * (1.0 / delta).log10())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::device::entanglement_cm;
    use approx::assert_abs_diff_eq;

    const SQRT2: f64 = std::f64::consts::SQRT_2;

    fn tmsv() -> EntanglementCM {
        EntanglementCM::new(3.0, 2.0 * SQRT2, 3.0).unwrap()
    }

    #[test]
    fn coherent_fidelity_reference_points() {
        // identity channel
        let p = DeviceParams::new(1.0, 1.0, 1.0, 0.0).unwrap();
        for alpha in [0.0, 1.0, 3.0] {
            assert_abs_diff_eq!(
                fidelity_coherent_dc(&p, Complex64::new(alpha, 0.0)),
                1.0,
                epsilon = 1e-12
            );
        }

        // dead channel: the output is vacuum, so F = |<0|alpha>|^2 = e^{-|alpha|^2}
        let p = DeviceParams::new(0.0, 1.0, 1.0, 0.0).unwrap();
        assert_abs_diff_eq!(
            fidelity_coherent_dc(&p, Complex64::new(2.0, 0.0)),
            (-4.0f64).exp(),
            epsilon = 1e-12
        );

        // pure loss at C = 0.1: overlap of |2> with |sqrt(eta) 2>
        let p = DeviceParams::new(0.1, 1.0, 1.0, 0.0).unwrap();
        let eta: f64 = 0.4 / 1.21;
        let expect = (-4.0 * (1.0 - eta.sqrt()).powi(2)).exp();
        assert_abs_diff_eq!(
            fidelity_coherent_dc(&p, Complex64::new(2.0, 0.0)),
            expect,
            epsilon = 1e-12
        );
    }

    #[test]
    fn tp_fidelity_at_unit_gain_is_alpha_independent() {
        let cm = tmsv();
        let f0 = fidelity_coherent_tp(&cm, 1.0, Complex64::new(0.0, 0.0));
        let f2 = fidelity_coherent_tp(&cm, 1.0, Complex64::new(2.0, 0.0));
        let f_i = fidelity_coherent_tp(&cm, 1.0, Complex64::new(0.7, -1.9));
        assert_eq!(f0, f2);
        assert_eq!(f0, f_i);
        // A = 8 - 4sqrt2, F = 2/A = (2+sqrt2)/4
        assert_abs_diff_eq!(f0, (2.0 + SQRT2) / 4.0, epsilon = 1e-14);
    }

    #[test]
    fn classical_teleportation_of_vacuum() {
        let cm = EntanglementCM::new(1.0, 0.0, 1.0).unwrap();
        assert_abs_diff_eq!(
            fidelity_coherent_tp(&cm, 1.0, Complex64::new(0.0, 0.0)),
            0.5,
            epsilon = 1e-14
        );
    }

    #[test]
    fn near_epr_teleportation_is_faithful() {
        let u = 60.0;
        let cm = EntanglementCM::new(u, (u * u - 1.0).sqrt(), u).unwrap();
        let f = fidelity_coherent_tp(&cm, 1.0, Complex64::new(2.0, 0.0));
        assert!(f > 0.98, "F = {f}");
    }

    #[test]
    fn cat_fidelity_of_identity_is_one() {
        let noise = SchemeNoiseParams { a: 0.0, b: 1.0 };
        for (alpha, parity) in [(2.0, Parity::Even), (1.3, Parity::Odd), (0.5, Parity::Even)] {
            assert_abs_diff_eq!(fidelity_cat(&noise, alpha, parity), 1.0, epsilon = 1e-12);
        }
    }

    #[test]
    fn cat_fidelity_reference_values() {
        // frozen from independent grid quadrature of the channel action
        // (513-point lattice, half-width 12.5)
        let dc = SchemeNoiseParams {
            a: 1.0 - 0.4 / 1.21,
            b: (0.4f64 / 1.21).sqrt(),
        };
        assert_abs_diff_eq!(
            fidelity_cat(&dc, 2.0, Parity::Even),
            0.248_643_755_318_76,
            epsilon = 1e-9
        );
        assert_abs_diff_eq!(
            fidelity_cat(&dc, 2.0, Parity::Odd),
            0.239_162_040_810_67,
            epsilon = 1e-9
        );
        let tp = SchemeNoiseParams::teleportation(&tmsv(), 1.0);
        assert_abs_diff_eq!(
            fidelity_cat(&tp, 2.0, Parity::Even),
            0.468_017_128_097_67,
            epsilon = 1e-9
        );
    }

    #[test]
    fn sigma_dc_reference_points() {
        let p = DeviceParams::new(1.0, 1.0, 1.0, 0.0).unwrap();
        assert_abs_diff_eq!(additive_sigma_dc(&p).unwrap(), 0.0, epsilon = 1e-15);

        let p = DeviceParams::new(0.1, 1.0, 1.0, 7.0).unwrap();
        assert_abs_diff_eq!(
            additive_sigma_dc(&p).unwrap(),
            1.0 - 0.4 / 1.21,
            epsilon = 1e-14
        );

        let p = DeviceParams::new(1.0, 0.9, 0.95, 2.0).unwrap();
        assert_abs_diff_eq!(additive_sigma_dc(&p).unwrap(), 0.235, epsilon = 1e-12);

        let p = DeviceParams::new(0.0, 1.0, 1.0, 0.0).unwrap();
        assert!(additive_sigma_dc(&p).is_err());
    }

    #[test]
    fn sigma_tp_reference_points() {
        // ideal-extraction squeezed resource: interior candidate exceeds 1,
        // so κ = 1 wins and σ² = ((1−√C)/(1+√C))²
        let p = DeviceParams::new(0.1, 1.0, 1.0, 0.0).unwrap();
        let cm = entanglement_cm(&p).unwrap();
        let (s2, k) = additive_sigma_tp(&cm);
        assert_eq!(k, 1.0);
        let root_c = 0.1f64.sqrt();
        assert_abs_diff_eq!(
            s2,
            ((1.0 - root_c) / (1.0 + root_c)).powi(2),
            epsilon = 1e-12
        );
        assert_abs_diff_eq!(cm.v / (cm.u - 1.0), 1.1 / (2.0 * root_c), epsilon = 1e-12);

        // no entanglement: classical penalty of one unit
        let cm = EntanglementCM::new(1.0, 0.0, 1.0).unwrap();
        assert_eq!(additive_sigma_tp(&cm), (1.0, 1.0));

        // C -> 1 with microwave-side loss only: (1+n)(1-zm)/(1+n(1-zm))
        let p = DeviceParams::new(1.0 - 1e-5, 1.0, 0.95, 2.0).unwrap();
        let cm = entanglement_cm(&p).unwrap();
        let (s2, _) = additive_sigma_tp(&cm);
        assert_abs_diff_eq!(s2, 3.0 * 0.05 / 1.1, epsilon = 1e-3);
    }

    #[test]
    fn gkp_reference_points() {
        let ideal = GkpSpec::new(0.0).unwrap();
        assert_eq!(gkp_success(0.0, &ideal).unwrap(), 1.0);

        // total variance π/8 makes the argument exactly 1
        let p = gkp_success(std::f64::consts::PI / 8.0, &ideal).unwrap();
        assert_abs_diff_eq!(p, 0.710_144_626_438_078_2, epsilon = 1e-12);

        assert!(gkp_success(-0.1, &ideal).is_err());
    }

    #[test]
    fn gkp_success_is_monotone() {
        let spec = GkpSpec::new(0.22).unwrap();
        let mut prev = 1.0;
        for i in 0..20 {
            let s2 = 0.05 * i as f64;
            let p = gkp_success(s2, &spec).unwrap();
            assert!(p < prev || i == 0);
            assert!((0.0..=1.0 + 1e-9).contains(&p));
            prev = p;
        }
        // and decreasing in the squeezing parameter at fixed channel noise
        let mut prev = 1.0;
        for i in 1..10 {
            let spec = GkpSpec::new(0.05 * i as f64).unwrap();
            let p = gkp_success(0.3, &spec).unwrap();
            assert!(p < prev);
            prev = p;
        }
    }

    #[test]
    fn squeezing_db_anchors() {
        let db = squeezing_db(&GkpSpec::new(0.22).unwrap()).unwrap();
        assert_abs_diff_eq!(db, 10.1, epsilon = 0.1);
        let db = squeezing_db(&GkpSpec::new(0.1).unwrap()).unwrap();
        assert_abs_diff_eq!(db, 17.0, epsilon = 0.1);
        // monotone decreasing toward sigma -> 1
        assert!(squeezing_db(&GkpSpec::new(0.9).unwrap()).unwrap() < db);
        assert!(squeezing_db(&GkpSpec::new(1.0).unwrap()).is_err());
    }

    #[test]
    fn optimal_tp_gain_beats_unit_gain() {
        let p = DeviceParams::new(0.1, 0.9, 0.95, 2.0).unwrap();
        let cm = entanglement_cm(&p).unwrap();
        let alpha = Complex64::new(2.0, 0.0);
        let (k_star, f_star) = optimal_fidelity_coherent_tp(&cm, alpha);
        assert!(f_star >= fidelity_coherent_tp(&cm, 1.0, alpha));
        assert!(k_star > 0.0);
        let (_, f_cat) = optimal_fidelity_cat_tp(&cm, 2.0, Parity::Even);
        let unit = fidelity_cat(
            &SchemeNoiseParams::teleportation(&cm, 1.0),
            2.0,
            Parity::Even,
        );
        assert!(f_cat >= unit);
    }
}
