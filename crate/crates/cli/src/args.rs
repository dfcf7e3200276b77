use std::path::PathBuf;
use std::str::FromStr;

use abcone::scatter::DEFAULT_SMOOTHING;
use clap::{Args, Parser, Subcommand};

use crate::record::Format;
use crate::run::{schema_help, AMPLITUDE, BOUND, CHANNELS, HO, SCATTER, VERIFY};

#[derive(Debug, Parser)]
#[command(
    name = "abcone",
    version,
    about = "Spin-1/2 Aharonov-Bohm flux on a cone: bound states, scattering and oscillator levels"
)]
#[command(
    after_help = "Exit codes: 0 ok, 1 computation error, 2 malformed arguments, 3 physically invalid values.\n\
Set ABCONE_THREADS to cap the number of worker threads used by sweeps."
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// List the channels with 0 < nu < 1 and their coupling class.
    #[command(after_help = schema_help(CHANNELS))]
    Channels(Params),
    /// Bound-state energy of one channel by the three routes.
    #[command(after_help = schema_help(BOUND))]
    Bound(Params),
    /// Phase shift and S-matrix element of one channel.
    #[command(after_help = schema_help(SCATTER))]
    Scatter(Params),
    /// Scattering amplitude and cross section. Without --theta, 35 angles at
    /// 10 degree steps from 10 to 350 degrees.
    #[command(after_help = schema_help(AMPLITUDE))]
    Amplitude(Params),
    /// Levels of the channel with an added harmonic oscillator.
    #[command(after_help = schema_help(HO))]
    Ho(Params),
    /// Run the built-in acceptance suite; exit 0 iff every criterion passes.
    #[command(after_help = schema_help(VERIFY))]
    Verify(Output),
}

#[derive(Debug, Clone, Args)]
pub struct Output {
    #[arg(long, value_enum, default_value = "json")]
    pub format: Format,
    /// Write records here instead of stdout.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Clone, Args)]
pub struct Params {
    /// Cone parameter in (0, 1].
    #[arg(long, default_value_t = 1.0, allow_negative_numbers = true)]
    pub alpha: f64,
    /// Flux in units of the flux quantum.
    #[arg(long, default_value_t = 0.0, allow_negative_numbers = true)]
    pub phi: f64,
    /// Spin projection sign, +1 or -1.
    #[arg(long, default_value_t = 1, allow_negative_numbers = true)]
    pub spin: i64,
    /// Orbital index.
    #[arg(long, default_value_t = 0, allow_negative_numbers = true)]
    pub m: i64,
    #[arg(long, default_value_t = 1.0, allow_negative_numbers = true)]
    pub mass: f64,
    /// Flux-tube radius.
    #[arg(long, default_value_t = 1.0, allow_negative_numbers = true)]
    pub r0: f64,
    /// Oscillator frequency.
    #[arg(long, default_value_t = 1.0, allow_negative_numbers = true)]
    pub omega: f64,
    /// Wavenumber.
    #[arg(long, default_value_t = 1.0, allow_negative_numbers = true)]
    pub k: f64,
    /// Scattering angle in radians.
    #[arg(long, allow_negative_numbers = true)]
    pub theta: Option<f64>,
    /// var:min:max:points:lin|log with var one of alpha, phi, mass, r0, omega,
    /// k, theta, lambda.
    #[arg(long)]
    pub sweep: Option<Sweep>,
    /// physical, manual:<value>, dirichlet (lambda = 0) or infinite.
    #[arg(long, default_value = "physical")]
    pub lambda_mode: LambdaMode,
    /// Number of oscillator levels.
    #[arg(long, default_value_t = 5)]
    pub levels: usize,
    /// Outermost ring of the amplitude sum; defaults to ceil(20/(1-t)).
    #[arg(long)]
    pub m_max: Option<u64>,
    /// Abel factor t in (0, 1].
    #[arg(long, default_value_t = DEFAULT_SMOOTHING)]
    pub smoothing: f64,
    #[command(flatten)]
    pub output: Output,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum LambdaMode {
    Physical,
    Manual(f64),
    Dirichlet,
    Infinite,
}

impl LambdaMode {
    pub fn name(&self) -> &'static str {
        match self {
            LambdaMode::Physical => "physical",
            LambdaMode::Manual(_) => "manual",
            LambdaMode::Dirichlet => "dirichlet",
            LambdaMode::Infinite => "infinite",
        }
    }
}

impl FromStr for LambdaMode {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        match s {
            "physical" => Ok(LambdaMode::Physical),
            "dirichlet" => Ok(LambdaMode::Dirichlet),
            "infinite" => Ok(LambdaMode::Infinite),
            _ => {
                let v = s
                    .strip_prefix("manual:")
                    .ok_or_else(|| format!("unknown lambda mode {s:?}"))?;
                let v: f64 = v.parse().map_err(|_| format!("bad manual lambda {v:?}"))?;
                if !v.is_finite() {
                    return Err("manual lambda must be finite; use infinite".into());
                }
                Ok(LambdaMode::Manual(v))
            }
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SweepVar {
    Alpha,
    Phi,
    Mass,
    R0,
    Omega,
    K,
    Theta,
    Lambda,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Sweep {
    pub var: SweepVar,
    pub min: f64,
    pub max: f64,
    pub points: usize,
    pub log: bool,
}

impl Sweep {
    pub fn values(&self) -> Vec<f64> {
        let n = self.points;
        (0..n)
            .map(|i| {
                // endpoints exactly as given
                if i == 0 {
                    return self.min;
                }
                if i == n - 1 {
                    return self.max;
                }
                let f = i as f64 / (n - 1) as f64;
                if self.log {
                    (self.min.ln() + f * (self.max.ln() - self.min.ln())).exp()
                } else {
                    self.min + f * (self.max - self.min)
                }
            })
            .collect()
    }
}

impl FromStr for Sweep {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        let parts: Vec<&str> = s.split(':').collect();
        let [var, min, max, points, scale] = parts[..] else {
            return Err("expected var:min:max:points:lin|log".into());
        };
        let var = match var {
            "alpha" => SweepVar::Alpha,
            "phi" => SweepVar::Phi,
            "mass" => SweepVar::Mass,
            "r0" => SweepVar::R0,
            "omega" => SweepVar::Omega,
            "k" => SweepVar::K,
            "theta" => SweepVar::Theta,
            "lambda" => SweepVar::Lambda,
            _ => return Err(format!("unknown sweep variable {var:?}")),
        };
        let num = |t: &str| -> Result<f64, String> {
            let v: f64 = t.parse().map_err(|_| format!("bad number {t:?}"))?;
            if v.is_finite() {
                Ok(v)
            } else {
                Err(format!("bad number {t:?}"))
            }
        };
        let (min, max) = (num(min)?, num(max)?);
        let points: usize = points.parse().map_err(|_| format!("bad point count {points:?}"))?;
        if points < 2 {
            return Err("a sweep needs at least 2 points".into());
        }
        let log = match scale {
            "lin" => false,
            "log" => true,
            _ => return Err(format!("scale must be lin or log, got {scale:?}")),
        };
        if log && !(min > 0.0 && max > 0.0) {
            return Err("a log sweep needs positive endpoints".into());
        }
        Ok(Sweep {
            var,
            min,
            max,
            points,
            log,
        })
    }
}

impl Params {
    /// Copy with the swept variable set to `v`.
    pub fn at(&self, var: SweepVar, v: f64) -> Params {
        let mut p = self.clone();
        match var {
            SweepVar::Alpha => p.alpha = v,
            SweepVar::Phi => p.phi = v,
            SweepVar::Mass => p.mass = v,
            SweepVar::R0 => p.r0 = v,
            SweepVar::Omega => p.omega = v,
            SweepVar::K => p.k = v,
            SweepVar::Theta => p.theta = Some(v),
            SweepVar::Lambda => p.lambda_mode = LambdaMode::Manual(v),
        }
        p
    }

    /// Malformed but parseable settings; exit code 2.
    pub fn check_form(&self) -> Result<(), String> {
        if !(self.smoothing > 0.0 && self.smoothing <= 1.0) {
            return Err(format!("--smoothing {} not in (0, 1]", self.smoothing));
        }
        if self.m_max == Some(0) {
            return Err("--m-max must be positive".into());
        }
        if self.levels == 0 {
            return Err("--levels must be positive".into());
        }
        Ok(())
    }

    /// Values outside the physical domain; exit code 3. Sweeps are checked
    /// at both ends, which covers the interior of every allowed range.
    pub fn check_physics(&self) -> Result<(), String> {
        let mut probes = vec![self.clone()];
        if let Some(s) = self.sweep {
            probes = vec![self.at(s.var, s.min), self.at(s.var, s.max)];
        }
        for p in probes {
            if !(p.alpha > 0.0 && p.alpha <= 1.0) {
                return Err(format!("alpha = {} not in (0, 1]", p.alpha));
            }
            if p.spin != 1 && p.spin != -1 {
                return Err(format!("spin = {} not in {{-1, +1}}", p.spin));
            }
            for (name, v) in [("r0", p.r0), ("mass", p.mass), ("omega", p.omega), ("k", p.k)] {
                if !(v > 0.0 && v.is_finite()) {
                    return Err(format!("{name} = {v} must be positive"));
                }
            }
            if !p.phi.is_finite() || p.theta.is_some_and(|t| !t.is_finite()) {
                return Err("phi and theta must be finite".into());
            }
        }
        Ok(())
    }
}
