use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::{bail, Context, Result};
use clap::{Parser, Subcommand, ValueEnum};
use num_complex::Complex64;

use transduction::capacity::{dc_bounds, tp_bounds};
use transduction::channels::dc_threshold;
use transduction::device::{entanglement_cm, DeviceParams};
use transduction::transfer::{
    fidelity_cat, fidelity_coherent_dc, fidelity_coherent_tp, gkp_success, optimal_fidelity_cat_tp,
    optimal_fidelity_coherent_tp, squeezing_db, GkpSpec, SchemeNoiseParams,
};
use transduction::Parity;

use transduction_cli::config::SweepConfig;
use transduction_cli::sweep::run_sweep;
use transduction_cli::verify;

/// Microwave-optical transduction models: channel capacities, state-transfer
/// fidelities, GKP success probabilities, and the figure sweep engine.
#[derive(Parser)]
#[command(name = "transduction", version, max_term_width = 100)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Csv,
    Json,
}

#[derive(Clone, Copy, ValueEnum)]
enum Grid {
    Coarse,
    Full,
}

#[derive(Clone, Copy, ValueEnum)]
enum SchemeArg {
    Dc,
    Tp,
}

#[derive(Clone, Copy, ValueEnum)]
enum StateArg {
    Coherent,
    Cat,
}

#[derive(Subcommand)]
enum Command {
    /// Evaluate a configured parameter sweep and write a table.
    Sweep {
        /// Sweep description (TOML); see the figures/ directory.
        #[arg(long)]
        config: PathBuf,
        /// Output path; stdout when omitted.
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long, value_enum, default_value = "csv")]
        format: Format,
        /// Worker threads for grid evaluation (default: all cores).
        #[arg(long)]
        workers: Option<usize>,
        /// Override a config field, e.g. --set axis0.count=50 (repeatable).
        #[arg(long = "set", value_name = "KEY=VALUE")]
        overrides: Vec<String>,
    },
    /// Run the oracle cross-check suite; exits nonzero on any failure.
    Verify {
        #[arg(long, value_enum, default_value = "coarse")]
        grid: Grid,
    },
    /// Minimum cooperativity for direct conversion to carry capacity.
    Threshold {
        #[arg(long)]
        zeta_o: f64,
        #[arg(long)]
        zeta_m: f64,
    },
    /// Capacity bounds of one scheme at one parameter point.
    Capacity {
        #[arg(long, value_enum)]
        scheme: SchemeArg,
        #[arg(long)]
        c: f64,
        #[arg(long)]
        zeta_o: f64,
        #[arg(long)]
        zeta_m: f64,
        #[arg(long, default_value = "0")]
        n_in: f64,
    },
    /// State-transfer fidelity of both schemes at one parameter point.
    Fidelity {
        #[arg(long, value_enum)]
        state: StateArg,
        #[arg(long)]
        alpha: f64,
        /// Cat parity, + or -.
        #[arg(long, default_value = "+")]
        parity: String,
        #[arg(long)]
        c: f64,
        #[arg(long)]
        zeta_o: f64,
        #[arg(long)]
        zeta_m: f64,
        #[arg(long, default_value = "0")]
        n_in: f64,
        /// Teleportation gain; the fidelity-optimal gain when omitted.
        #[arg(long)]
        kappa: Option<f64>,
    },
    /// GKP error-correction success probability for a given additive noise.
    Gkp {
        /// Additive noise variance per quadrature.
        #[arg(long)]
        sigma2: f64,
        #[arg(long)]
        sigma_gkp: f64,
    },
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    let cli = Cli::parse();
    match run(cli) {
        Ok(code) => code,
        Err(err) => {
            eprintln!("error: {err:#}");
            ExitCode::from(2)
        }
    }
}

fn run(cli: Cli) -> Result<ExitCode> {
    match cli.command {
        Command::Sweep {
            config,
            out,
            format,
            workers,
            overrides,
        } => {
            let config = if !config.exists() && config.extension().is_none() {
                config.with_extension("toml")
            } else {
                config
            };
            let text = std::fs::read_to_string(&config)
                .with_context(|| format!("reading {}", config.display()))?;
            let mut cfg = SweepConfig::from_toml(&text)
                .with_context(|| format!("in {}", config.display()))?;
            for o in &overrides {
                cfg.apply_override(o)?;
            }
            cfg.validate()?;
            let table = if let Some(n) = workers {
                let pool = rayon::ThreadPoolBuilder::new()
                    .num_threads(n)
                    .build()
                    .context("building worker pool")?;
                pool.install(|| run_sweep(&cfg))?
            } else {
                run_sweep(&cfg)?
            };
            let rendered = match format {
                Format::Csv => table.to_csv(),
                Format::Json => table.to_json()?,
            };
            match out {
                Some(path) => std::fs::write(&path, rendered)
                    .with_context(|| format!("writing {}", path.display()))?,
                None => print!("{rendered}"),
            }
            Ok(ExitCode::SUCCESS)
        }
        Command::Verify { grid } => {
            let depth = match grid {
                Grid::Coarse => verify::Depth::Coarse,
                Grid::Full => verify::Depth::Full,
            };
            let report = verify::run(depth);
            print!("{}", report.render());
            Ok(if report.all_passed() {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(1)
            })
        }
        Command::Threshold { zeta_o, zeta_m } => {
            match dc_threshold(zeta_o, zeta_m) {
                Some(c_min) => println!("C_min = {c_min:.12}"),
                None => println!(
                    "no finite threshold: zeta_m * zeta_o = {} <= 1/2, direct conversion \
                     never exceeds transmissivity 1/2",
                    zeta_o * zeta_m
                ),
            }
            Ok(ExitCode::SUCCESS)
        }
        Command::Capacity {
            scheme,
            c,
            zeta_o,
            zeta_m,
            n_in,
        } => {
            let p = DeviceParams::new(c, zeta_o, zeta_m, n_in)?;
            match scheme {
                SchemeArg::Dc => {
                    let b = dc_bounds(&p);
                    println!("Q_lower = {:.12} bits/use", b.q_lower);
                    println!("Q_upper = {:.12} bits/use", b.q_upper);
                }
                SchemeArg::Tp => {
                    let b = tp_bounds(&p)?;
                    println!("Q_lower = {:.12} bits/use", b.q_lower);
                    println!("Q_upper = {:.12} bits/use", b.q_upper);
                    println!("kappa*  = {:.12}", b.kappa_star.unwrap_or(1.0));
                }
            }
            Ok(ExitCode::SUCCESS)
        }
        Command::Fidelity {
            state,
            alpha,
            parity,
            c,
            zeta_o,
            zeta_m,
            n_in,
            kappa,
        } => {
            let p = DeviceParams::new(c, zeta_o, zeta_m, n_in)?;
            let parity = match parity.as_str() {
                "+" | "even" => Parity::Even,
                "-" | "odd" => Parity::Odd,
                other => bail!("--parity expects '+' or '-', got '{other}'"),
            };
            let cm = entanglement_cm(&p)?;
            match state {
                StateArg::Coherent => {
                    let a = Complex64::new(alpha, 0.0);
                    println!("F_dc = {:.12}", fidelity_coherent_dc(&p, a));
                    match kappa {
                        Some(k) => println!("F_tp = {:.12} (kappa = {k})", {
                            fidelity_coherent_tp(&cm, k, a)
                        }),
                        None => {
                            let (k, f) = optimal_fidelity_coherent_tp(&cm, a);
                            println!("F_tp = {f:.12} (kappa* = {k:.6})");
                        }
                    }
                }
                StateArg::Cat => {
                    let f_dc =
                        fidelity_cat(&SchemeNoiseParams::direct_conversion(&p), alpha, parity);
                    println!("F_dc = {f_dc:.12}");
                    match kappa {
                        Some(k) => {
                            let f = fidelity_cat(
                                &SchemeNoiseParams::teleportation(&cm, k),
                                alpha,
                                parity,
                            );
                            println!("F_tp = {f:.12} (kappa = {k})");
                        }
                        None => {
                            let (k, f) = optimal_fidelity_cat_tp(&cm, alpha, parity);
                            println!("F_tp = {f:.12} (kappa* = {k:.6})");
                        }
                    }
                }
            }
            Ok(ExitCode::SUCCESS)
        }
        Command::Gkp { sigma2, sigma_gkp } => {
            let spec = GkpSpec::new(sigma_gkp)?;
            println!("P_s = {:.12}", gkp_success(sigma2, &spec)?);
            if let Ok(db) = squeezing_db(&spec) {
                println!("squeezing = {db:.2} dB");
            }
            Ok(ExitCode::SUCCESS)
        }
    }
}
