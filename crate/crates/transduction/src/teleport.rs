//! Continuous-variable teleportation simulated directly on Wigner grids.
//!
//! The input and the microwave half of the resource interfere on a balanced
//! beamsplitter; conjugate quadratures of the two outputs are measured by
//! homodyne, and the optical half is displaced by −κ x̃, where
//! x̃ = √2 (q₋, −p₊) is the rescaled record. Everything here evaluates the
//! resulting Wigner-function integrals by grid quadrature, independently of
//! the closed-form channel reduction in [`crate::channels`], which it
//! serves as an oracle for.

use ndarray::Array2;

use crate::device::EntanglementCM;
use crate::error::{Error, Result};
use crate::gaussian::WignerGrid;
use crate::kernel;

/// Rescaled homodyne record x̃ = √2 (q₋, −p₊).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct HomodyneOutcome {
    pub x_q: f64,
    pub x_p: f64,
}

impl HomodyneOutcome {
    pub fn new(x_q: f64, x_p: f64) -> Result<Self> {
        if !x_q.is_finite() || !x_p.is_finite() {
            return Err(Error::InvalidParameter(
                "homodyne outcome must be finite".into(),
            ));
        }
        Ok(HomodyneOutcome { x_q, x_p })
    }
}

/// Probability density of the record x̃:
/// P(x̃) = (1/πu) ∫ exp(−(x + x̃)²/u) W_in(x) d²x.
pub fn outcome_pdf(
    cm: &EntanglementCM,
    input: &WignerGrid,
    outcome: HomodyneOutcome,
) -> Result<f64> {
    let u = cm.u;
    let x = input.spec().axis();
    let wts = input.spec().weights();
    let vq: Vec<f64> = x
        .iter()
        .zip(&wts)
        .map(|(&xi, &wi)| (-(xi + outcome.x_q).powi(2) / u).exp() * wi)
        .collect();
    let vp: Vec<f64> = x
        .iter()
        .zip(&wts)
        .map(|(&xi, &wi)| (-(xi + outcome.x_p).powi(2) / u).exp() * wi)
        .collect();
    let vals = input.values();
    let mut total = 0.0;
    for i in 0..x.len() {
        let mut row = 0.0;
        for j in 0..x.len() {
            row += vp[j] * vals[[i, j]];
        }
        total += vq[i] * row;
    }
    Ok(total / (std::f64::consts::PI * u))
}

/// Normalized conditional output for one homodyne record:
/// a Gaussian factor exp(−(x_B + κx̃)²/w) times the input integrated against
/// a kernel of scale (uw − v²)/w centered at (v/w) x_B − (1 − (v/w)κ) x̃,
/// evaluated on the input lattice and renormalized numerically.
///
/// Records far in the tail of [`outcome_pdf`] leave no mass on the grid and
/// are rejected as improbable.
pub fn conditional_output(
    cm: &EntanglementCM,
    input: &WignerGrid,
    outcome: HomodyneOutcome,
    kappa: f64,
) -> Result<WignerGrid> {
    if !(kappa >= 0.0) || !kappa.is_finite() {
        return Err(Error::InvalidParameter(format!(
            "kappa must be >= 0, got {kappa}"
        )));
    }
    let (u, v, w) = (cm.u, cm.v, cm.w);
    let det = u * w - v * v;
    if det <= 0.0 {
        return Err(Error::Domain(format!(
            "resource with uw - v² = {det} has no conditional kernel"
        )));
    }
    let scale = det / w;
    kernel::check_resolution(input.spec(), (scale / 2.0).sqrt())?;

    let spec = input.spec();
    let x = spec.axis();
    let wts = spec.weights();
    let ratio = v / w;
    let mq = kernel::kernel_matrix(
        &x,
        &x,
        &wts,
        |y| ratio * y - (1.0 - ratio * kappa) * outcome.x_q,
        scale,
    );
    let mp = kernel::kernel_matrix(
        &x,
        &x,
        &wts,
        |y| ratio * y - (1.0 - ratio * kappa) * outcome.x_p,
        scale,
    );
    let inner = mq.dot(input.values()).dot(&mp.t());

    let gq: Vec<f64> = x
        .iter()
        .map(|&y| (-(y + kappa * outcome.x_q).powi(2) / w).exp())
        .collect();
    let gp: Vec<f64> = x
        .iter()
        .map(|&y| (-(y + kappa * outcome.x_p).powi(2) / w).exp())
        .collect();
    let n = spec.points();
    let mut vals = Array2::zeros((n, n));
    for i in 0..n {
        for j in 0..n {
            vals[[i, j]] = gq[i] * gp[j] * inner[[i, j]];
        }
    }
    let raw = WignerGrid::from_values(spec, vals)?;
    let z = raw.integral();
    if z < 1e-12 {
        return Err(Error::Domain(format!(
            "improbable outcome ({}, {}): conditional mass {z:.3e} on the grid",
            outcome.x_q, outcome.x_p
        )));
    }
    WignerGrid::from_values(spec, raw.values() / z)
}

/// Outcome-averaged output,
/// W_out(x_B) = [1/(π a)] ∫ W_in(x) exp(−κ²(x − x_B/κ)²/a) d²x with
/// a = uκ² − 2vκ + w, on a lattice stretched by κ plus six kernel standard
/// deviations. Not renormalized; the integral stays within 1e-5 of one when
/// the input grid holds the state.
pub fn average_output(cm: &EntanglementCM, input: &WignerGrid, kappa: f64) -> Result<WignerGrid> {
    if !(kappa > 0.0) || !kappa.is_finite() {
        return Err(Error::InvalidParameter(format!(
            "kappa must be positive, got {kappa}"
        )));
    }
    let (u, v, w) = (cm.u, cm.v, cm.w);
    let a = u * kappa * kappa - 2.0 * v * kappa + w;
    if a <= 0.0 {
        return Err(Error::Domain(format!(
            "kernel parameter uκ² - 2vκ + w = {a} must be positive"
        )));
    }
    kernel::check_resolution(input.spec(), (a / 2.0).sqrt() / kappa)?;
    let out_spec = kernel::output_spec(input.spec(), kappa, a)?;
    let out = kernel::apply_gaussian_kernel(input, kappa, a, out_spec)?;
    let integral = out.integral();
    if (integral - 1.0).abs() > 1e-5 {
        log::warn!("average_output integral {integral:.8}; input grid may be truncating the state");
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::channels::{apply_to_wigner, tp_channel};
    use crate::gaussian::{gaussian_wigner, wigner_overlap, GaussianState, GridSpec};
    use approx::assert_abs_diff_eq;
    use nalgebra::{DMatrix, DVector};
    use num_complex::Complex64;

    const SQRT2: f64 = std::f64::consts::SQRT_2;

    fn tmsv() -> EntanglementCM {
        EntanglementCM::new(3.0, 2.0 * SQRT2, 3.0).unwrap()
    }

    fn no_entanglement() -> EntanglementCM {
        EntanglementCM::new(1.0, 0.0, 1.0).unwrap()
    }

    #[test]
    fn pdf_of_vacuum_input_without_entanglement() {
        let spec = GridSpec::new(10.0, 257).unwrap();
        let vac = gaussian_wigner(&GaussianState::vacuum(1), spec).unwrap();
        let p0 = outcome_pdf(
            &no_entanglement(),
            &vac,
            HomodyneOutcome::new(0.0, 0.0).unwrap(),
        )
        .unwrap();
        // isotropic Gaussian of per-axis variance (u+1)/2 = 1, peak 1/(2π)
        assert_abs_diff_eq!(p0, 1.0 / (2.0 * std::f64::consts::PI), epsilon = 1e-9);
    }

    #[test]
    fn pdf_integrates_to_one() {
        let spec = GridSpec::new(10.0, 129).unwrap();
        let vac = gaussian_wigner(&GaussianState::vacuum(1), spec).unwrap();
        let cm = no_entanglement();
        let m = 41;
        let lim = 6.0;
        let h = 2.0 * lim / (m - 1) as f64;
        let mut total = 0.0;
        for i in 0..m {
            let wq = if i == 0 || i == m - 1 { 0.5 * h } else { h };
            for j in 0..m {
                let wp = if j == 0 || j == m - 1 { 0.5 * h } else { h };
                let out = HomodyneOutcome::new(-lim + i as f64 * h, -lim + j as f64 * h).unwrap();
                total += wq * wp * outcome_pdf(&cm, &vac, out).unwrap();
            }
        }
        assert_abs_diff_eq!(total, 1.0, epsilon = 1e-4);
    }

    #[test]
    fn pdf_peaks_opposite_the_input_mean() {
        let spec = GridSpec::default_for_alpha(2.0);
        let coh =
            gaussian_wigner(&GaussianState::coherent(Complex64::new(2.0, 0.0)), spec).unwrap();
        let cm = no_entanglement();
        let mut best = (0.0, f64::MIN);
        let mut t = -5.0;
        while t <= 0.0 {
            let p = outcome_pdf(&cm, &coh, HomodyneOutcome::new(t, 0.0).unwrap()).unwrap();
            if p > best.1 {
                best = (t, p);
            }
            t += 0.05;
        }
        assert!((best.0 + 2.0 * SQRT2).abs() < 0.06);
    }

    /// Gaussian-conditioning reference for teleporting a Gaussian input:
    /// build the three-mode state, apply the balanced beamsplitter on
    /// (input, resource microwave mode), condition on q₋ and p₊, then
    /// displace by −κx̃. Pure linear algebra, no grids.
    fn conditioned_gaussian(
        cm: &EntanglementCM,
        input: &GaussianState,
        outcome: HomodyneOutcome,
        kappa: f64,
    ) -> (DVector<f64>, DMatrix<f64>) {
        // modes ordered (in, A, B); quadratures (q,p) each
        let mut v = DMatrix::<f64>::zeros(6, 6);
        v.view_mut((0, 0), (2, 2)).copy_from(input.cov());
        let vab = cm.covariance();
        v.view_mut((2, 2), (4, 4)).copy_from(&vab);
        let mut mean = DVector::<f64>::zeros(6);
        mean.view_mut((0, 0), (2, 1)).copy_from(input.mean());

        // x+ = (x_in + x_A)/√2, x- = (x_A - x_in)/√2
        let r = std::f64::consts::FRAC_1_SQRT_2;
        let mut s = DMatrix::<f64>::identity(6, 6);
        for k in 0..2 {
            s[(k, k)] = r;
            s[(k, k + 2)] = r;
            s[(k + 2, k)] = -r;
            s[(k + 2, k + 2)] = r;
        }
        let v = &s * v * s.transpose();
        let mean = &s * mean;

        // homodyne q- (index 2) then p+ (index 1); record components
        // q- = x̃_q/√2 and p+ = -x̃_p/√2
        let mut v = v;
        let mut mean = mean;
        for (idx, measured) in [
            (2usize, outcome.x_q / SQRT2),
            (1usize, -outcome.x_p / SQRT2),
        ] {
            let col = v.column(idx).clone_owned();
            let var = v[(idx, idx)];
            let gain = (measured - mean[idx]) / var;
            mean = &mean + &col * gain;
            v = &v - &col * col.transpose() / var;
        }
        // keep mode B (indices 4,5), displace by -κ x̃
        let mut mb = DVector::<f64>::zeros(2);
        mb[0] = mean[4] - kappa * outcome.x_q;
        mb[1] = mean[5] - kappa * outcome.x_p;
        let vb = v.view((4, 4), (2, 2)).clone_owned();
        (mb, vb)
    }

    #[test]
    fn conditional_output_matches_gaussian_conditioning() {
        let spec = GridSpec::new(10.0, 257).unwrap();
        let vac = gaussian_wigner(&GaussianState::vacuum(1), spec).unwrap();
        let cm = tmsv();
        for (xq, xp) in [(0.0, 0.0), (1.5, -0.8)] {
            let out =
                conditional_output(&cm, &vac, HomodyneOutcome::new(xq, xp).unwrap(), 1.0).unwrap();
            assert_abs_diff_eq!(out.integral(), 1.0, epsilon = 1e-6);
            let (mq, mp, vq, vp) = out.moments();
            let (m_ref, v_ref) = conditioned_gaussian(
                &cm,
                &GaussianState::vacuum(1),
                HomodyneOutcome::new(xq, xp).unwrap(),
                1.0,
            );
            assert_abs_diff_eq!(mq, m_ref[0], epsilon = 1e-4);
            assert_abs_diff_eq!(mp, m_ref[1], epsilon = 1e-4);
            assert_abs_diff_eq!(vq, v_ref[(0, 0)], epsilon = 1e-4);
            assert_abs_diff_eq!(vp, v_ref[(1, 1)], epsilon = 1e-4);
            // TMSV conditioning leaves exactly the vacuum variance
            assert_abs_diff_eq!(v_ref[(0, 0)], 0.5, epsilon = 1e-12);
        }
    }

    #[test]
    fn near_epr_resource_recovers_the_input() {
        let spec = GridSpec::default_for_alpha(1.0);
        let coh =
            gaussian_wigner(&GaussianState::coherent(Complex64::new(1.0, 0.0)), spec).unwrap();
        let u = 60.0;
        let cm = EntanglementCM::new(u, (u * u - 1.0).sqrt(), u).unwrap();
        let out =
            conditional_output(&cm, &coh, HomodyneOutcome::new(0.0, 0.0).unwrap(), 1.0).unwrap();
        let f = wigner_overlap(&coh, &out).unwrap();
        assert!(f > 0.99, "fidelity {f}");
    }

    #[test]
    fn conditional_with_zero_gain_is_normalized_blur() {
        // κ = 0 applies no displacement; the output is the input blurred by
        // the resource kernel, normalized on the grid
        let spec = GridSpec::new(10.0, 129).unwrap();
        let vac = gaussian_wigner(&GaussianState::vacuum(1), spec).unwrap();
        let out = conditional_output(
            &no_entanglement(),
            &vac,
            HomodyneOutcome::new(0.7, -0.4).unwrap(),
            0.0,
        )
        .unwrap();
        assert_abs_diff_eq!(out.integral(), 1.0, epsilon = 1e-6);
        let (_, _, vq, vp) = out.moments();
        assert!(vq >= 0.5 - 1e-6 && vp >= 0.5 - 1e-6);
    }

    #[test]
    fn conditional_rejects_improbable_outcome() {
        let spec = GridSpec::new(8.0, 129).unwrap();
        let vac = gaussian_wigner(&GaussianState::vacuum(1), spec).unwrap();
        let cm = no_entanglement();
        let far = HomodyneOutcome::new(40.0, 40.0).unwrap();
        assert!(conditional_output(&cm, &vac, far, 1.0).is_err());
    }

    #[test]
    fn average_without_entanglement_adds_two_shot_units() {
        let spec = GridSpec::new(10.0, 257).unwrap();
        let vac = gaussian_wigner(&GaussianState::vacuum(1), spec).unwrap();
        let out = average_output(&no_entanglement(), &vac, 1.0).unwrap();
        assert_abs_diff_eq!(out.integral(), 1.0, epsilon = 1e-6);
        let (_, _, vq, vp) = out.moments();
        assert_abs_diff_eq!(vq, 1.5, epsilon = 1e-6);
        assert_abs_diff_eq!(vp, 1.5, epsilon = 1e-6);
    }

    #[test]
    fn average_matches_channel_reduction() {
        let spec = GridSpec::default_for_alpha(1.0);
        let coh =
            gaussian_wigner(&GaussianState::coherent(Complex64::new(1.0, 0.0)), spec).unwrap();
        let cm = tmsv();
        for kappa in [0.8, 1.0, 1.25] {
            let avg = average_output(&cm, &coh, kappa).unwrap();
            let ch = tp_channel(&cm, kappa).unwrap();
            let reduced = apply_to_wigner(&ch, &coh).unwrap();
            assert_eq!(avg.spec(), reduced.spec());
            let linf = avg
                .values()
                .iter()
                .zip(reduced.values())
                .map(|(a, b)| (a - b).abs())
                .fold(0.0, f64::max);
            assert!(linf < 1e-4, "kappa = {kappa}: Linf = {linf:.3e}");
        }
    }

    #[test]
    fn zero_gain_forgets_the_input() {
        let spec = GridSpec::default_for_alpha(2.0);
        let a = gaussian_wigner(&GaussianState::vacuum(1), spec).unwrap();
        let b = gaussian_wigner(&GaussianState::coherent(Complex64::new(2.0, 0.0)), spec).unwrap();
        let cm = tmsv();
        let out_a = average_output(&cm, &a, 0.01).unwrap();
        let out_b = average_output(&cm, &b, 0.01).unwrap();
        let oab = wigner_overlap(&out_a, &out_b).unwrap();
        let oaa = wigner_overlap(&out_a, &out_a).unwrap();
        let obb = wigner_overlap(&out_b, &out_b).unwrap();
        let cosine = oab / (oaa * obb).sqrt();
        assert_abs_diff_eq!(cosine, 1.0, epsilon = 1e-3);
    }

    #[test]
    fn outcome_average_assembles_to_average_state() {
        let spec = GridSpec::new(9.0, 129).unwrap();
        let vac = gaussian_wigner(&GaussianState::vacuum(1), spec).unwrap();
        let cm = tmsv();
        let kappa = 1.0;
        let sigma = ((cm.u + 1.0) / 2.0).sqrt();
        let m = 21;
        let lim = 5.0 * sigma;
        let h = 2.0 * lim / (m - 1) as f64;
        let mut acc = Array2::<f64>::zeros((spec.points(), spec.points()));
        let mut mean_f = 0.0;
        let mut total_p = 0.0;
        for i in 0..m {
            let wq = if i == 0 || i == m - 1 { 0.5 * h } else { h };
            for j in 0..m {
                let wp = if j == 0 || j == m - 1 { 0.5 * h } else { h };
                let outc = HomodyneOutcome::new(-lim + i as f64 * h, -lim + j as f64 * h).unwrap();
                let p = outcome_pdf(&cm, &vac, outc).unwrap();
                let cond = conditional_output(&cm, &vac, outc, kappa).unwrap();
                acc.scaled_add(wq * wp * p, cond.values());
                mean_f += wq * wp * p * wigner_overlap(&vac, &cond).unwrap();
                total_p += wq * wp * p;
            }
        }
        assert_abs_diff_eq!(total_p, 1.0, epsilon = 1e-4);

        // the assembled state must agree with the closed Gaussian form of
        // the averaged output, sampled on the same lattice
        let out_state = crate::channels::apply_to_gaussian(
            &tp_channel(&cm, kappa).unwrap(),
            &GaussianState::vacuum(1),
        )
        .unwrap();
        let reference = gaussian_wigner(&out_state, spec).unwrap();
        let linf = acc
            .iter()
            .zip(reference.values())
            .map(|(a, b)| (a - b).abs())
            .fold(0.0, f64::max);
        assert!(linf < 1e-3, "assembly Linf = {linf:.3e}");

        // mean conditional fidelity equals the fidelity of the average state
        let avg = average_output(&cm, &vac, kappa).unwrap();
        let vac_on_avg = gaussian_wigner(&GaussianState::vacuum(1), avg.spec()).unwrap();
        let f_avg = wigner_overlap(&vac_on_avg, &avg).unwrap();
        assert_abs_diff_eq!(mean_f, f_avg, epsilon = 1e-3);
    }
}
