//! Built-in cross-check suite: every closed form in the library against its
//! independent numerical oracle, with one pass/fail line per check.

use num_complex::Complex64;
use rayon::prelude::*;

use transduction::capacity::{dc_bounds, tp_bounds};
use transduction::channels::{apply_to_wigner, dc_channel, dc_threshold, tp_channel};
use transduction::device::{
    entanglement_cm, langevin_cm, to_standard_form, DeviceParams, EntanglementCM, LangevinParams,
};
use transduction::gaussian::{
    cat_wigner, gaussian_wigner, wigner_overlap, GaussianState, GridSpec, Parity, WignerGrid,
};
use transduction::teleport::average_output;
use transduction::transfer::{
    fidelity_cat, fidelity_coherent_dc, fidelity_coherent_tp, SchemeNoiseParams,
};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Depth {
    Coarse,
    Full,
}

pub struct Check {
    pub name: &'static str,
    pub max_error: f64,
    pub tolerance: f64,
}

impl Check {
    pub fn passed(&self) -> bool {
        self.max_error <= self.tolerance
    }
}

pub struct Report {
    pub checks: Vec<Check>,
}

impl Report {
    pub fn all_passed(&self) -> bool {
        self.checks.iter().all(Check::passed)
    }

    pub fn render(&self) -> String {
        let mut out = String::new();
        for c in &self.checks {
            out.push_str(&format!(
                "{}  {:<46} max error {:.3e}  (tolerance {:.1e})\n",
                if c.passed() { "PASS" } else { "FAIL" },
                c.name,
                c.max_error,
                c.tolerance
            ));
        }
        let n_fail = self.checks.iter().filter(|c| !c.passed()).count();
        out.push_str(&format!(
            "{} checks, {} failed\n",
            self.checks.len(),
            n_fail
        ));
        out
    }
}

fn device_grid(depth: Depth) -> Vec<DeviceParams> {
    let c_values: Vec<f64> = match depth {
        Depth::Coarse => vec![0.1, 0.5, 0.9],
        Depth::Full => (0..19).map(|k| 0.05 * (k + 1) as f64).collect(),
    };
    let mut grid = Vec::new();
    for &c in &c_values {
        for zo in [0.5, 0.9, 1.0] {
            for zm in [0.5, 0.95, 1.0] {
                for n in [0.0, 2.0] {
                    grid.push(DeviceParams::new(c, zo, zm, n).unwrap());
                }
            }
        }
    }
    grid
}

fn device_oracle(depth: Depth) -> Check {
    let max_error = device_grid(depth)
        .par_iter()
        .map(|p| {
            let v = langevin_cm(&LangevinParams::from_device(p).unwrap()).unwrap();
            let cm = to_standard_form(&v).unwrap();
            let r = entanglement_cm(p).unwrap();
            (cm.u - r.u)
                .abs()
                .max((cm.v - r.v).abs())
                .max((cm.w - r.w).abs())
        })
        .reduce(|| 0.0, f64::max);
    Check {
        name: "device: input-output model vs closed forms",
        max_error,
        tolerance: 1e-9,
    }
}

fn threshold_anchors() -> Vec<Check> {
    let t_ideal = dc_threshold(1.0, 1.0).unwrap();
    let t_practical = dc_threshold(0.9, 0.95).unwrap();
    vec![
        Check {
            name: "threshold: ideal extraction (3 - 2sqrt2)",
            max_error: (t_ideal - (3.0 - 2.0 * std::f64::consts::SQRT_2)).abs(),
            tolerance: 1e-12,
        },
        Check {
            name: "threshold: zeta_o=0.9, zeta_m=0.95 (0.216)",
            max_error: (t_practical - 0.216).abs(),
            tolerance: 1e-3,
        },
    ]
}

fn linf(a: &WignerGrid, b: &WignerGrid) -> f64 {
    a.values()
        .iter()
        .zip(b.values())
        .map(|(x, y)| (x - y).abs())
        .fold(0.0, f64::max)
}

fn teleport_reduction(depth: Depth) -> Check {
    let (spec, resources, kappas): (GridSpec, Vec<EntanglementCM>, Vec<f64>) = match depth {
        Depth::Coarse => (
            GridSpec::new(12.0, 257).unwrap(),
            vec![entanglement_cm(&DeviceParams::new(0.1, 0.9, 0.95, 2.0).unwrap()).unwrap()],
            vec![0.9, 1.0, 1.1],
        ),
        Depth::Full => (
            GridSpec::new(12.0, 513).unwrap(),
            vec![
                entanglement_cm(&DeviceParams::new(0.5, 1.0, 1.0, 0.0).unwrap()).unwrap(),
                entanglement_cm(&DeviceParams::new(0.1, 0.9, 0.95, 2.0).unwrap()).unwrap(),
                entanglement_cm(&DeviceParams::new(0.3, 0.5, 0.95, 2.0).unwrap()).unwrap(),
            ],
            vec![0.5, 0.9, 1.0, 1.1, 1.5],
        ),
    };
    let inputs = vec![
        gaussian_wigner(&GaussianState::vacuum(1), spec).unwrap(),
        gaussian_wigner(&GaussianState::coherent(Complex64::new(2.0, 0.0)), spec).unwrap(),
        cat_wigner(Complex64::new(2.0, 0.0), Parity::Even, spec).unwrap(),
    ];
    let mut cases = Vec::new();
    for cm in &resources {
        for &k in &kappas {
            for input in &inputs {
                cases.push((*cm, k, input));
            }
        }
    }
    let max_error = cases
        .par_iter()
        .map(|(cm, k, input)| {
            let avg = average_output(cm, input, *k).unwrap();
            let reduced = apply_to_wigner(&tp_channel(cm, *k).unwrap(), input).unwrap();
            linf(&avg, &reduced)
        })
        .reduce(|| 0.0, f64::max);
    Check {
        name: "teleportation: averaged output vs channel form",
        max_error,
        tolerance: 1e-4,
    }
}

fn fidelity_quadrature(depth: Depth) -> Check {
    let params: Vec<DeviceParams> = match depth {
        Depth::Coarse => vec![DeviceParams::new(0.1, 1.0, 1.0, 0.0).unwrap()],
        Depth::Full => vec![
            DeviceParams::new(0.1, 1.0, 1.0, 0.0).unwrap(),
            DeviceParams::new(0.1, 0.9, 0.95, 2.0).unwrap(),
            DeviceParams::new(0.6, 0.9, 0.95, 2.0).unwrap(),
        ],
    };
    let alphas: Vec<f64> = match depth {
        Depth::Coarse => vec![2.0],
        Depth::Full => vec![1.0, 2.0],
    };
    let mut cases: Vec<Box<dyn Fn() -> f64 + Send + Sync>> = Vec::new();
    for p in params {
        for &alpha in &alphas {
            let spec = GridSpec::default_for_alpha(alpha);
            cases.push(Box::new(move || {
                let a = Complex64::new(alpha, 0.0);
                let input = gaussian_wigner(&GaussianState::coherent(a), spec).unwrap();
                let out = apply_to_wigner(&dc_channel(&p), &input).unwrap();
                let input_on_out =
                    gaussian_wigner(&GaussianState::coherent(a), out.spec()).unwrap();
                let quad = wigner_overlap(&input_on_out, &out).unwrap();
                (quad - fidelity_coherent_dc(&p, a)).abs()
            }));
            for parity in [Parity::Even, Parity::Odd] {
                cases.push(Box::new(move || {
                    let a = Complex64::new(alpha, 0.0);
                    let input = cat_wigner(a, parity, spec).unwrap();
                    let out = apply_to_wigner(&dc_channel(&p), &input).unwrap();
                    let input_on_out = cat_wigner(a, parity, out.spec()).unwrap();
                    let quad = wigner_overlap(&input_on_out, &out).unwrap();
                    let closed =
                        fidelity_cat(&SchemeNoiseParams::direct_conversion(&p), alpha, parity);
                    (quad - closed).abs()
                }));
            }
            let cm = entanglement_cm(&DeviceParams::new(0.1, 0.9, 0.95, 2.0).unwrap()).unwrap();
            for kappa in [0.9, 1.0, 1.1] {
                cases.push(Box::new(move || {
                    let a = Complex64::new(alpha, 0.0);
                    let input = gaussian_wigner(&GaussianState::coherent(a), spec).unwrap();
                    let out = average_output(&cm, &input, kappa).unwrap();
                    let input_on_out =
                        gaussian_wigner(&GaussianState::coherent(a), out.spec()).unwrap();
                    let quad = wigner_overlap(&input_on_out, &out).unwrap();
                    (quad - fidelity_coherent_tp(&cm, kappa, a)).abs()
                }));
            }
        }
    }
    let max_error = cases.par_iter().map(|case| case()).reduce(|| 0.0, f64::max);
    Check {
        name: "fidelity: closed forms vs grid quadrature",
        max_error,
        tolerance: 1e-4,
    }
}

fn bound_structure(depth: Depth) -> Vec<Check> {
    // ordering violation measured as max(lower - upper, 0)
    let ordering = device_grid(depth)
        .par_iter()
        .map(|p| {
            let dc = dc_bounds(p);
            let tp = tp_bounds(p).unwrap();
            (dc.q_lower - dc.q_upper)
                .max(tp.q_lower - tp.q_upper)
                .max(0.0)
        })
        .reduce(|| 0.0, f64::max);

    // teleportation advantage at ideal extraction: violation of
    // tp_lower > dc_upper
    let c_values: Vec<f64> = (0..10).map(|k| 0.05 + 0.1 * k as f64).collect();
    let advantage = c_values
        .par_iter()
        .map(|&c| {
            let p = DeviceParams::new(c, 1.0, 1.0, 0.0).unwrap();
            (dc_bounds(&p).q_upper - tp_bounds(&p).unwrap().q_lower).max(0.0)
        })
        .reduce(|| 0.0, f64::max);

    // below-threshold direct conversion is dead
    let below = {
        let t = dc_threshold(0.9, 0.95).unwrap();
        let p = DeviceParams::new(t - 1e-6, 0.9, 0.95, 2.0).unwrap();
        let b = dc_bounds(&p);
        b.q_lower.abs().max(b.q_upper.abs())
    };

    vec![
        Check {
            name: "capacity: upper >= lower on the device grid",
            max_error: ordering,
            tolerance: 1e-9,
        },
        Check {
            name: "capacity: tp lower > dc upper at ideal extraction",
            max_error: advantage,
            tolerance: 0.0,
        },
        Check {
            name: "capacity: dc bounds vanish below threshold",
            max_error: below,
            tolerance: 0.0,
        },
    ]
}

pub fn run(depth: Depth) -> Report {
    let mut checks = Vec::new();
    checks.push(device_oracle(depth));
    checks.extend(threshold_anchors());
    checks.push(teleport_reduction(depth));
    checks.push(fidelity_quadrature(depth));
    checks.extend(bound_structure(depth));
    Report { checks }
}
