//! Separable Gaussian kernel application on Wigner grids.
//!
//! Every phase-insensitive map used in this crate acts on a Wigner function
//! as W_out(y) ∝ ∫ W_in(x) K(x_q, y_q) K(x_p, y_p) d²x with a per-axis
//! Gaussian kernel, so the 2-D transform factorizes into two matrix
//! products, O(n³) instead of O(n⁴).

use ndarray::Array2;

use crate::error::{Error, Result};
use crate::gaussian::{GridSpec, WignerGrid};

/// Per-axis kernel matrix M[i, j] = exp(−(x_in[j] − center(x_out[i]))²/scale)
/// with the input trapezoid weight folded into column j.
pub(crate) fn kernel_matrix(
    x_out: &[f64],
    x_in: &[f64],
    w_in: &[f64],
    center: impl Fn(f64) -> f64,
    scale: f64,
) -> Array2<f64> {
    let mut m = Array2::zeros((x_out.len(), x_in.len()));
    for (i, &y) in x_out.iter().enumerate() {
        let c = center(y);
        for (j, &x) in x_in.iter().enumerate() {
            let d = x - c;
            m[[i, j]] = (-d * d / scale).exp() * w_in[j];
        }
    }
    m
}

/// Output lattice for a map with amplitude scale `b` and kernel parameter
/// `a` (per-axis output std √(a/2)): the half-width is stretched by b plus
/// six kernel standard deviations, and never shrinks below the input's.
///
/// The grown half-width is quantized upward to a 1e-6 lattice so that two
/// algebraically equal parametrizations of the same map land on the same
/// spec despite round-off in (b, a).
pub(crate) fn output_spec(input: GridSpec, b: f64, a: f64) -> Result<GridSpec> {
    let raw = b * input.half_width() + 6.0 * (a / 2.0).sqrt();
    let hw = if raw <= input.half_width() {
        input.half_width()
    } else {
        (raw * 1e6).ceil() / 1e6
    };
    GridSpec::new(hw, input.points())
}

/// W_out(y) = (1/(πa)) ∬ W_in(x) exp(−(b x − y)²/a) d²x on `out_spec`.
///
/// The caller is responsible for the resolution precondition
/// (kernel std ≥ 2 input grid spacings).
pub(crate) fn apply_gaussian_kernel(
    input: &WignerGrid,
    b: f64,
    a: f64,
    out_spec: GridSpec,
) -> Result<WignerGrid> {
    debug_assert!(b > 0.0 && a > 0.0);
    let x_in = input.spec().axis();
    let w_in = input.spec().weights();
    let x_out = out_spec.axis();
    // exp(-(b x - y)^2/a) = exp(-(x - y/b)^2/(a/b^2))
    let m = kernel_matrix(&x_out, &x_in, &w_in, |y| y / b, a / (b * b));
    let out = m.dot(input.values()).dot(&m.t()) / (std::f64::consts::PI * a);
    WignerGrid::from_values(out_spec, out)
}

/// Resolution guard shared by channel and teleportation maps.
pub(crate) fn check_resolution(input: GridSpec, kernel_std_input_units: f64) -> Result<()> {
    if kernel_std_input_units < 2.0 * input.step() {
        return Err(Error::Domain(format!(
            "kernel std {kernel_std_input_units:.3e} is below two grid spacings ({:.3e}); refine the grid",
            input.step()
        )));
    }
    Ok(())
}
