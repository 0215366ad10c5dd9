use std::io::Write;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use tdsqueeze::config::{run_expand, run_trajectory, run_wavefunction, RunConfig, WavefunctionSelect};
use tdsqueeze::verify::{run_verify, Suite};
use tdsqueeze::{Error, Result};

/// Squeezed and number-operator states of time-dependent quadratic
/// Hamiltonians: trajectories, wavefunctions, number-basis expansions, and
/// a self-verification suite.
#[derive(Parser)]
#[command(name = "tdsqueeze", version, about)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct ConfigArgs {
    /// JSON run-configuration file; omitted fields take defaults
    #[arg(long)]
    config: Option<String>,
    /// preset name: free, harmonic, repulsive, linear, driven, custom
    #[arg(long)]
    preset: Option<String>,
    #[arg(long)]
    omega: Option<f64>,
    #[arg(long)]
    force: Option<f64>,
    #[arg(long)]
    x0: Option<f64>,
    #[arg(long)]
    p0: Option<f64>,
    /// squeeze modulus r >= 0
    #[arg(long)]
    z_r: Option<f64>,
    /// squeeze angle theta
    #[arg(long)]
    z_theta: Option<f64>,
    /// operator ordering: alpha_z or z_alpha
    #[arg(long)]
    ordering: Option<String>,
    #[arg(long)]
    tau_max: Option<f64>,
    #[arg(long)]
    tau_steps: Option<usize>,
    #[arg(long)]
    grid_points: Option<usize>,
    #[arg(long)]
    grid_span: Option<f64>,
    /// output format: csv or json
    #[arg(long)]
    format: Option<String>,
    #[arg(long)]
    seed: Option<u64>,
    /// write output here instead of stdout
    #[arg(long)]
    out: Option<String>,
}

impl ConfigArgs {
    fn build(&self) -> Result<RunConfig> {
        let mut cfg = match &self.config {
            Some(path) => RunConfig::from_json(&std::fs::read_to_string(path)?)?,
            None => RunConfig::default(),
        };
        if let Some(v) = &self.preset {
            cfg.preset = v.clone();
        }
        if let Some(v) = self.omega {
            cfg.omega = v;
        }
        if let Some(v) = self.force {
            cfg.force = v;
        }
        if let Some(v) = self.x0 {
            cfg.x0 = v;
        }
        if let Some(v) = self.p0 {
            cfg.p0 = v;
        }
        if let Some(v) = self.z_r {
            cfg.z_r = v;
        }
        if let Some(v) = self.z_theta {
            cfg.z_theta = v;
        }
        if let Some(v) = &self.ordering {
            cfg.ordering = match v.as_str() {
                "alpha_z" => tdsqueeze::squeeze::Ordering::AlphaZ,
                "z_alpha" => tdsqueeze::squeeze::Ordering::ZAlpha,
                other => {
                    return Err(Error::Config(format!(
                        "unknown ordering '{other}' (alpha_z or z_alpha)"
                    )))
                }
            };
        }
        if let Some(v) = self.tau_max {
            cfg.tau_max = v;
        }
        if let Some(v) = self.tau_steps {
            cfg.tau_steps = v;
        }
        if let Some(v) = self.grid_points {
            cfg.grid_points = v;
        }
        if let Some(v) = self.grid_span {
            cfg.grid_span = v;
        }
        if let Some(v) = &self.format {
            cfg.format = match v.as_str() {
                "csv" => tdsqueeze::config::OutputFormat::Csv,
                "json" => tdsqueeze::config::OutputFormat::Json,
                other => {
                    return Err(Error::Config(format!(
                        "unknown format '{other}' (csv or json)"
                    )))
                }
            };
        }
        if let Some(v) = self.seed {
            cfg.seed = v;
        }
        // environment overrides for the tolerance tier
        let env_tol = |var: &str| -> Result<Option<f64>> {
            match std::env::var(var) {
                Ok(text) => text
                    .parse()
                    .map(Some)
                    .map_err(|_| Error::Config(format!("{var} must be a number, got '{text}'"))),
                Err(_) => Ok(None),
            }
        };
        if let Some(v) = env_tol("TDSQUEEZE_ODE_TOL")? {
            cfg.ode_tol = v;
        }
        if let Some(v) = env_tol("TDSQUEEZE_QUAD_TOL")? {
            cfg.quad_tol = v;
        }
        if let Some(v) = env_tol("TDSQUEEZE_SERIES_TOL")? {
            cfg.series_tol = v;
        }
        cfg.validate()?;
        Ok(cfg)
    }

    fn emit(&self, text: &str) -> Result<()> {
        match &self.out {
            Some(path) => std::fs::write(path, text)?,
            None => {
                std::io::stdout().write_all(text.as_bytes())?;
            }
        }
        Ok(())
    }
}

#[derive(Subcommand)]
enum Command {
    /// Phase-space means and uncertainty products over tau
    Trajectory {
        #[command(flatten)]
        common: ConfigArgs,
    },
    /// Wavefunction slice at one tau on an auto-centered grid
    Wavefunction {
        #[command(flatten)]
        common: ConfigArgs,
        /// number-state index m; omit for the displaced/squeezed state
        #[arg(long)]
        m: Option<usize>,
        /// evaluation time
        #[arg(long, default_value_t = 0.0)]
        tau: f64,
    },
    /// Number-basis expansion coefficients of the configured state
    Expand {
        #[command(flatten)]
        common: ConfigArgs,
    },
    /// Run residual self-checks and print the report
    Verify {
        /// suite selector
        #[arg(long, default_value = "all")]
        suite: String,
        #[arg(long, default_value_t = 7)]
        seed: u64,
        /// emit the report as JSON instead of text
        #[arg(long)]
        json: bool,
        #[arg(long)]
        out: Option<String>,
    },
}

fn run(cli: Cli) -> Result<bool> {
    match cli.command {
        Command::Trajectory { common } => {
            let cfg = common.build()?;
            common.emit(&run_trajectory(&cfg)?)?;
            Ok(true)
        }
        Command::Wavefunction { common, m, tau } => {
            let cfg = common.build()?;
            let select = match m {
                Some(m) => WavefunctionSelect::Number(m),
                None => WavefunctionSelect::Squeezed,
            };
            common.emit(&run_wavefunction(&cfg, select, tau)?)?;
            Ok(true)
        }
        Command::Expand { common } => {
            let cfg = common.build()?;
            common.emit(&run_expand(&cfg)?)?;
            Ok(true)
        }
        Command::Verify {
            suite,
            seed,
            json,
            out,
        } => {
            let suite: Suite = suite.parse()?;
            let report = run_verify(suite, seed)?;
            let text = if json {
                report.to_json()?
            } else {
                report.render_text()
            };
            match out {
                Some(path) => std::fs::write(path, &text)?,
                None => print!("{text}"),
            }
            Ok(report.pass)
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(true) => ExitCode::from(0),
        Ok(false) => ExitCode::from(1),
        Err(err) => {
            eprintln!("error: {err}");
            ExitCode::from(err.exit_code() as u8)
        }
    }
}
