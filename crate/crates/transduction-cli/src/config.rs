//! Declarative sweep descriptions: which quantity, which scheme, what is
//! fixed and what is swept. One TOML file per figure lives under
//! `figures/`; any field can be overridden from the command line.

use anyhow::{anyhow, bail, Result};
use serde::Deserialize;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Scheme {
    Dc,
    Tp,
    Both,
}

impl Scheme {
    pub fn includes_dc(self) -> bool {
        matches!(self, Scheme::Dc | Scheme::Both)
    }

    pub fn includes_tp(self) -> bool {
        matches!(self, Scheme::Tp | Scheme::Both)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Quantity {
    CapacityLb,
    CapacityUb,
    FidelityCoherent,
    FidelityCat,
    GkpSuccess,
    AdditiveSigma,
    KappaStar,
    BoundGap,
}

impl Quantity {
    pub fn name(self) -> &'static str {
        match self {
            Quantity::CapacityLb => "capacity_lb",
            Quantity::CapacityUb => "capacity_ub",
            Quantity::FidelityCoherent => "fidelity_coherent",
            Quantity::FidelityCat => "fidelity_cat",
            Quantity::GkpSuccess => "gkp_success",
            Quantity::AdditiveSigma => "additive_sigma",
            Quantity::KappaStar => "kappa_star",
            Quantity::BoundGap => "bound_gap",
        }
    }

    pub fn unit(self) -> &'static str {
        match self {
            Quantity::CapacityLb | Quantity::CapacityUb | Quantity::BoundGap => "bits",
            Quantity::FidelityCoherent | Quantity::FidelityCat | Quantity::GkpSuccess => "prob",
            Quantity::AdditiveSigma => "var",
            Quantity::KappaStar => "1",
        }
    }

    /// κ* and the bound gap exist only for the teleportation scheme.
    pub fn tp_only(self) -> bool {
        matches!(self, Quantity::KappaStar | Quantity::BoundGap)
    }

    pub fn parse(s: &str) -> Result<Self> {
        Ok(match s {
            "capacity_lb" => Quantity::CapacityLb,
            "capacity_ub" => Quantity::CapacityUb,
            "fidelity_coherent" => Quantity::FidelityCoherent,
            "fidelity_cat" => Quantity::FidelityCat,
            "gkp_success" => Quantity::GkpSuccess,
            "additive_sigma" => Quantity::AdditiveSigma,
            "kappa_star" => Quantity::KappaStar,
            "bound_gap" => Quantity::BoundGap,
            other => bail!("unknown quantity '{other}'"),
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Deserialize)]
pub enum AxisParam {
    #[serde(rename = "c")]
    Cooperativity,
    #[serde(rename = "zeta_o")]
    ZetaO,
    #[serde(rename = "zeta_m")]
    ZetaM,
}

impl AxisParam {
    pub fn name(self) -> &'static str {
        match self {
            AxisParam::Cooperativity => "c",
            AxisParam::ZetaO => "zeta_o",
            AxisParam::ZetaM => "zeta_m",
        }
    }
}

#[derive(Debug, Clone, Deserialize)]
pub struct Axis {
    pub param: AxisParam,
    pub min: f64,
    pub max: f64,
    pub count: usize,
}

impl Axis {
    pub fn values(&self) -> Vec<f64> {
        (0..self.count)
            .map(|k| self.min + (self.max - self.min) * k as f64 / (self.count - 1) as f64)
            .collect()
    }
}

#[derive(Debug, Clone, Deserialize, Default)]
pub struct Fixed {
    pub c: Option<f64>,
    pub zeta_o: Option<f64>,
    pub zeta_m: Option<f64>,
    pub n_in: Option<f64>,
    pub alpha: Option<f64>,
    pub parity: Option<String>,
    pub sigma_gkp: Option<f64>,
}

#[derive(Debug, Clone, Deserialize)]
pub struct SweepConfig {
    pub scheme: Scheme,
    pub quantities: Vec<Quantity>,
    #[serde(default)]
    pub fixed: Fixed,
    #[serde(rename = "axis")]
    pub axes: Vec<Axis>,
}

impl SweepConfig {
    pub fn from_toml(text: &str) -> Result<Self> {
        let cfg: SweepConfig = toml::from_str(text)?;
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn validate(&self) -> Result<()> {
        if self.quantities.is_empty() {
            bail!("quantities: at least one quantity is required");
        }
        if self.axes.is_empty() || self.axes.len() > 2 {
            bail!("axis: exactly one (curve) or two (contour) swept axes are supported");
        }
        if self.axes.len() == 2 && self.axes[0].param == self.axes[1].param {
            bail!("axis: the two axes must sweep different parameters");
        }
        for ax in &self.axes {
            if ax.count < 2 {
                bail!(
                    "axis.count: need at least 2 points on '{}'",
                    ax.param.name()
                );
            }
            if !(ax.min <= ax.max) {
                bail!("axis.min/max: empty range on '{}'", ax.param.name());
            }
            let (lo, hi) = (ax.min, ax.max);
            match ax.param {
                AxisParam::Cooperativity => {
                    if lo < 0.0 {
                        bail!("axis.min: cooperativity must be >= 0");
                    }
                    if self.scheme.includes_tp() && hi >= 1.0 {
                        bail!("axis.max: cooperativity must stay below 1 for the tp scheme");
                    }
                }
                AxisParam::ZetaO | AxisParam::ZetaM => {
                    if lo < 0.0 || hi > 1.0 {
                        bail!("axis range: '{}' must stay within [0, 1]", ax.param.name());
                    }
                }
            }
        }
        let swept = |p: AxisParam| self.axes.iter().any(|a| a.param == p);
        if !swept(AxisParam::Cooperativity) {
            let c = self
                .fixed
                .c
                .ok_or_else(|| anyhow!("fixed.c: required when c is not swept"))?;
            if c < 0.0 {
                bail!("fixed.c: cooperativity must be >= 0");
            }
            if self.scheme.includes_tp() && c >= 1.0 {
                bail!("fixed.c: cooperativity must stay below 1 for the tp scheme");
            }
        }
        for (name, p, v) in [
            ("fixed.zeta_o", AxisParam::ZetaO, self.fixed.zeta_o),
            ("fixed.zeta_m", AxisParam::ZetaM, self.fixed.zeta_m),
        ] {
            if !swept(p) {
                let v = v.ok_or_else(|| anyhow!("{name}: required when not swept"))?;
                if !(0.0..=1.0).contains(&v) {
                    bail!("{name}: must lie within [0, 1]");
                }
            }
        }
        let n_in = self
            .fixed
            .n_in
            .ok_or_else(|| anyhow!("fixed.n_in: required"))?;
        if n_in < 0.0 {
            bail!("fixed.n_in: must be >= 0");
        }

        for &q in &self.quantities {
            if q.tp_only() && !self.scheme.includes_tp() {
                bail!("quantities: '{}' needs the tp scheme", q.name());
            }
            match q {
                Quantity::FidelityCoherent | Quantity::FidelityCat => {
                    if self.fixed.alpha.is_none() {
                        bail!("fixed.alpha: required for '{}'", q.name());
                    }
                    if q == Quantity::FidelityCat {
                        self.parity()?;
                    }
                }
                Quantity::GkpSuccess => {
                    if self.fixed.sigma_gkp.is_none() {
                        bail!("fixed.sigma_gkp: required for 'gkp_success'");
                    }
                }
                _ => {}
            }
            // the additive reduction of direct conversion needs C > 0
            if matches!(q, Quantity::GkpSuccess | Quantity::AdditiveSigma)
                && self.scheme.includes_dc()
            {
                let min_c = self
                    .axes
                    .iter()
                    .find(|a| a.param == AxisParam::Cooperativity)
                    .map(|a| a.min)
                    .or(self.fixed.c)
                    .unwrap_or(0.0);
                if min_c <= 0.0 {
                    bail!(
                        "'{}' with the dc scheme needs cooperativity > 0 everywhere",
                        q.name()
                    );
                }
            }
        }
        Ok(())
    }

    pub fn parity(&self) -> Result<transduction::Parity> {
        match self.fixed.parity.as_deref() {
            None | Some("+") | Some("even") => Ok(transduction::Parity::Even),
            Some("-") | Some("odd") => Ok(transduction::Parity::Odd),
            Some(other) => bail!("fixed.parity: expected '+' or '-', got '{other}'"),
        }
    }

    /// Applies one `key=value` command-line override.
    pub fn apply_override(&mut self, spec: &str) -> Result<()> {
        let (key, value) = spec
            .split_once('=')
            .ok_or_else(|| anyhow!("override '{spec}' is not of the form key=value"))?;
        let parse_f64 = |v: &str| -> Result<f64> {
            v.parse::<f64>()
                .map_err(|_| anyhow!("override '{key}': '{v}' is not a number"))
        };
        match key {
            "scheme" => {
                self.scheme = match value {
                    "dc" => Scheme::Dc,
                    "tp" => Scheme::Tp,
                    "both" => Scheme::Both,
                    other => bail!("override scheme: unknown scheme '{other}'"),
                }
            }
            "quantities" => {
                self.quantities = value
                    .split(',')
                    .map(Quantity::parse)
                    .collect::<Result<Vec<_>>>()?;
            }
            "fixed.c" => self.fixed.c = Some(parse_f64(value)?),
            "fixed.zeta_o" => self.fixed.zeta_o = Some(parse_f64(value)?),
            "fixed.zeta_m" => self.fixed.zeta_m = Some(parse_f64(value)?),
            "fixed.n_in" => self.fixed.n_in = Some(parse_f64(value)?),
            "fixed.alpha" => self.fixed.alpha = Some(parse_f64(value)?),
            "fixed.sigma_gkp" => self.fixed.sigma_gkp = Some(parse_f64(value)?),
            "fixed.parity" => self.fixed.parity = Some(value.to_string()),
            _ => {
                // axisN.min / axisN.max / axisN.count
                let (axis_key, field) = key
                    .split_once('.')
                    .ok_or_else(|| anyhow!("unknown override key '{key}'"))?;
                let idx: usize = axis_key
                    .strip_prefix("axis")
                    .and_then(|s| s.parse().ok())
                    .ok_or_else(|| anyhow!("unknown override key '{key}'"))?;
                let ax = self
                    .axes
                    .get_mut(idx)
                    .ok_or_else(|| anyhow!("override '{key}': no axis {idx}"))?;
                match field {
                    "min" => ax.min = parse_f64(value)?,
                    "max" => ax.max = parse_f64(value)?,
                    "count" => {
                        ax.count = value
                            .parse()
                            .map_err(|_| anyhow!("override '{key}': bad count"))?
                    }
                    other => bail!("override '{key}': unknown axis field '{other}'"),
                }
            }
        }
        Ok(())
    }
}
