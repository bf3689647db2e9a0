//! Grid expansion, parallel evaluation, and deterministic table output.

use anyhow::{anyhow, Context, Result};
use num_complex::Complex64;
use rayon::prelude::*;
use serde_json::{json, Map, Value};

use transduction::capacity::{dc_bounds, tp_bounds, CapacityBounds};
use transduction::device::{entanglement_cm, DeviceParams};
use transduction::transfer::{
    additive_sigma_dc, additive_sigma_tp, fidelity_cat, fidelity_coherent_dc, gkp_success,
    optimal_fidelity_cat_tp, optimal_fidelity_coherent_tp, GkpSpec, SchemeNoiseParams,
};
use transduction::Parity;

use crate::config::{AxisParam, Quantity, SweepConfig};

/// One evaluated sweep: column headers plus row-major rows of numbers.
#[derive(Debug, Clone)]
pub struct SweepTable {
    pub headers: Vec<String>,
    pub rows: Vec<Vec<f64>>,
}

#[derive(Debug, Clone, Copy)]
struct Column {
    dc: bool,
    quantity: Quantity,
}

fn columns(cfg: &SweepConfig) -> Vec<Column> {
    let mut cols = Vec::new();
    for &q in &cfg.quantities {
        if cfg.scheme.includes_dc() && !q.tp_only() {
            cols.push(Column {
                dc: true,
                quantity: q,
            });
        }
        if cfg.scheme.includes_tp() {
            cols.push(Column {
                dc: false,
                quantity: q,
            });
        }
    }
    cols
}

#[derive(Debug, Clone, Copy)]
struct Point {
    c: f64,
    zeta_o: f64,
    zeta_m: f64,
    n_in: f64,
}

/// Evaluates all requested columns at one grid point. Teleportation
/// capacity quantities share a single κ-optimization.
fn evaluate_point(cfg: &SweepConfig, cols: &[Column], pt: Point) -> Result<Vec<f64>> {
    let params = DeviceParams::new(pt.c, pt.zeta_o, pt.zeta_m, pt.n_in)
        .map_err(|e| anyhow!("invalid grid point: {e}"))?;
    let alpha = cfg.fixed.alpha.unwrap_or(0.0);
    let parity = cfg.parity().unwrap_or(Parity::Even);

    let needs_tp_bounds = cols.iter().any(|c| {
        !c.dc
            && matches!(
                c.quantity,
                Quantity::CapacityLb
                    | Quantity::CapacityUb
                    | Quantity::KappaStar
                    | Quantity::BoundGap
            )
    });
    let needs_dc_bounds = cols.iter().any(|c| {
        c.dc && matches!(
            c.quantity,
            Quantity::CapacityLb | Quantity::CapacityUb | Quantity::BoundGap
        )
    });
    let needs_cm = cols.iter().any(|c| !c.dc);

    let cm = if needs_cm {
        Some(entanglement_cm(&params)?)
    } else {
        None
    };
    let tpb: Option<CapacityBounds> = if needs_tp_bounds {
        Some(tp_bounds(&params)?)
    } else {
        None
    };
    let dcb: Option<CapacityBounds> = if needs_dc_bounds {
        Some(dc_bounds(&params))
    } else {
        None
    };

    let mut out = Vec::with_capacity(cols.len());
    for col in cols {
        let v = match (col.dc, col.quantity) {
            (true, Quantity::CapacityLb) => dcb.as_ref().unwrap().q_lower,
            (true, Quantity::CapacityUb) => dcb.as_ref().unwrap().q_upper,
            (true, Quantity::BoundGap) => {
                let b = dcb.as_ref().unwrap();
                b.q_upper - b.q_lower
            }
            (false, Quantity::CapacityLb) => tpb.as_ref().unwrap().q_lower,
            (false, Quantity::CapacityUb) => tpb.as_ref().unwrap().q_upper,
            (false, Quantity::KappaStar) => tpb.as_ref().unwrap().kappa_star.unwrap_or(1.0),
            (false, Quantity::BoundGap) => {
                let b = tpb.as_ref().unwrap();
                b.q_upper - b.q_lower
            }
            (true, Quantity::FidelityCoherent) => {
                fidelity_coherent_dc(&params, Complex64::new(alpha, 0.0))
            }
            (false, Quantity::FidelityCoherent) => {
                optimal_fidelity_coherent_tp(cm.as_ref().unwrap(), Complex64::new(alpha, 0.0)).1
            }
            (true, Quantity::FidelityCat) => fidelity_cat(
                &SchemeNoiseParams::direct_conversion(&params),
                alpha,
                parity,
            ),
            (false, Quantity::FidelityCat) => {
                optimal_fidelity_cat_tp(cm.as_ref().unwrap(), alpha, parity).1
            }
            (true, Quantity::AdditiveSigma) => additive_sigma_dc(&params)?,
            (false, Quantity::AdditiveSigma) => additive_sigma_tp(cm.as_ref().unwrap()).0,
            (true, Quantity::GkpSuccess) => {
                let spec = GkpSpec::new(cfg.fixed.sigma_gkp.unwrap())?;
                gkp_success(additive_sigma_dc(&params)?, &spec)?
            }
            (false, Quantity::GkpSuccess) => {
                let spec = GkpSpec::new(cfg.fixed.sigma_gkp.unwrap())?;
                gkp_success(additive_sigma_tp(cm.as_ref().unwrap()).0, &spec)?
            }
            (true, Quantity::KappaStar) => unreachable!("kappa_star has no dc column"),
        };
        if !v.is_finite() {
            return Err(anyhow!(
                "non-finite {} at (c={}, zeta_o={}, zeta_m={})",
                col.quantity.name(),
                pt.c,
                pt.zeta_o,
                pt.zeta_m
            ));
        }
        out.push(v);
    }
    Ok(out)
}

/// Evaluates the sweep row-major over the axes (outer axis first). Grid
/// points run in parallel on the current rayon pool; assembly preserves
/// index order, so the output is byte-identical for any worker count.
pub fn run_sweep(cfg: &SweepConfig) -> Result<SweepTable> {
    cfg.validate()?;
    let cols = columns(cfg);

    let mut headers: Vec<String> = cfg
        .axes
        .iter()
        .map(|a| a.param.name().to_string())
        .collect();
    for col in &cols {
        let scheme = if col.dc { "dc" } else { "tp" };
        headers.push(format!(
            "{scheme}_{}[{}]",
            col.quantity.name(),
            col.quantity.unit()
        ));
    }

    let fixed_point = Point {
        c: cfg.fixed.c.unwrap_or(f64::NAN),
        zeta_o: cfg.fixed.zeta_o.unwrap_or(f64::NAN),
        zeta_m: cfg.fixed.zeta_m.unwrap_or(f64::NAN),
        n_in: cfg.fixed.n_in.expect("validated"),
    };

    let grid: Vec<Vec<f64>> = cfg.axes.iter().map(|a| a.values()).collect();
    let outer = grid[0].clone();
    let inner = grid.get(1).cloned().unwrap_or_else(|| vec![f64::NAN]);
    let has_inner = grid.len() == 2;

    let mut tasks = Vec::new();
    for &x in &outer {
        for &y in inner.iter().take(if has_inner { inner.len() } else { 1 }) {
            tasks.push((x, y));
        }
    }

    let rows: Result<Vec<Vec<f64>>> = tasks
        .par_iter()
        .map(|&(x, y)| {
            let mut pt = fixed_point;
            let mut assign = |param: AxisParam, value: f64| match param {
                AxisParam::Cooperativity => pt.c = value,
                AxisParam::ZetaO => pt.zeta_o = value,
                AxisParam::ZetaM => pt.zeta_m = value,
            };
            assign(cfg.axes[0].param, x);
            if has_inner {
                assign(cfg.axes[1].param, y);
            }
            let mut row = vec![x];
            if has_inner {
                row.push(y);
            }
            row.extend(evaluate_point(cfg, &cols, pt)?);
            Ok(row)
        })
        .collect();

    Ok(SweepTable {
        headers,
        rows: rows?,
    })
}

impl SweepTable {
    /// CSV with a header row; values carry 12 significant digits, `\n` line
    /// endings, `.` decimal separator.
    pub fn to_csv(&self) -> String {
        let mut out = String::new();
        out.push_str(&self.headers.join(","));
        out.push('\n');
        for row in &self.rows {
            let cells: Vec<String> = row.iter().map(|v| format!("{v:.11e}")).collect();
            out.push_str(&cells.join(","));
            out.push('\n');
        }
        out
    }

    /// One JSON record per grid point, keyed by header name.
    pub fn to_json(&self) -> Result<String> {
        let mut records = Vec::with_capacity(self.rows.len());
        for row in &self.rows {
            let mut rec = Map::new();
            for (h, v) in self.headers.iter().zip(row) {
                rec.insert(h.clone(), json!(v));
            }
            records.push(Value::Object(rec));
        }
        serde_json::to_string_pretty(&records).context("serializing records")
    }
}
