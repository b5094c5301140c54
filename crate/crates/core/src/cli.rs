//! The `geoling` command line.
//!
//! Every knob can come from a flag or from the `key=value` file named by
//! `GEOLING_CONFIG`; flags win. Keys are the long flag names without the
//! leading dashes (`fcl`, `cog-samples`, `grid-distance-step`, ...).
//!
//! Exit codes: 0 success, 2 usage or parse error, 3 I/O error,
//! 4 clarification needed.

use std::collections::BTreeMap;
use std::fs;
use std::io::{BufRead, Write};
use std::path::{Path, PathBuf};
use std::str::FromStr;

use clap::{Args, Parser, Subcommand};
use thiserror::Error;

use crate::alerts::{
    self, compare_models, evaluate_alert, read_telemetry, AlertSettings, Grid, GridSteps, DISTANCE,
};
use crate::fcl::{compile, parse_fcl, CompileMode, FclProgram, DEFAULT_COG_SAMPLES};
use crate::nlu::{analyze, parse_frame, resolve_fuzzy, AlertSpec, FrameOutcome, Lexicon, PartialFrame};
use crate::partition_builder::{build_partition_from_bags, parse_bags};

pub const CONFIG_ENV: &str = "GEOLING_CONFIG";

pub const EXIT_OK: i32 = 0;
pub const EXIT_USAGE: i32 = 2;
pub const EXIT_IO: i32 = 3;
pub const EXIT_CLARIFY: i32 = 4;

#[derive(Debug, Error)]
enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error("{0}")]
    Parse(String),
    #[error("{0}")]
    Io(String),
    #[error("clarification needed")]
    Clarify,
}

impl CliError {
    fn code(&self) -> i32 {
        match self {
            CliError::Usage(_) | CliError::Parse(_) => EXIT_USAGE,
            CliError::Io(_) => EXIT_IO,
            CliError::Clarify => EXIT_CLARIFY,
        }
    }
}

type CliResult<T> = Result<T, CliError>;

#[derive(Debug, Parser)]
#[command(name = "geoling", version, about = "Fuzzy geolocation alerts over unbalanced linguistic scales")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Parse an FCL script and print its canonical form.
    ParseFcl {
        /// Script path; `--fcl` works too.
        path: Option<PathBuf>,
        #[arg(long)]
        fcl: Option<PathBuf>,
        #[command(flatten)]
        out: OutputArg,
    },
    /// Build a twofold partition from synonym bags.
    BuildPartition {
        #[arg(long)]
        bags: Option<PathBuf>,
        /// Lower end of the domain.
        #[arg(long, allow_negative_numbers = true)]
        lo: Option<f64>,
        /// Upper end of the domain.
        #[arg(long, allow_negative_numbers = true)]
        hi: Option<f64>,
        /// Label placed at the lower end.
        #[arg(long)]
        low_anchor: Option<String>,
        /// Label placed at the upper end.
        #[arg(long)]
        high_anchor: Option<String>,
        #[command(flatten)]
        out: OutputArg,
    },
    /// Turn an alert request into an alert specification.
    Nlu {
        sentence: String,
        #[arg(long)]
        lexicon: Option<PathBuf>,
        /// Controller whose distance scale resolves fuzzy distances.
        #[arg(long)]
        fcl: Option<PathBuf>,
        /// Ask for missing slots on stdin.
        #[arg(long)]
        interactive: bool,
        #[command(flatten)]
        out: OutputArg,
    },
    /// Run the alert controller over a telemetry file.
    Simulate {
        #[arg(long)]
        fcl: Option<PathBuf>,
        #[arg(long)]
        telemetry: Option<PathBuf>,
        /// Time tolerance fed to every sample.
        #[arg(long)]
        tolerance: Option<f64>,
        /// Destination as `lat,lon`, needed for coordinate telemetry.
        #[arg(long, allow_hyphen_values = true)]
        dest: Option<String>,
        #[arg(long)]
        mode: Option<String>,
        #[command(flatten)]
        knobs: InferenceArgs,
        #[command(flatten)]
        out: OutputArg,
    },
    /// Compare the uniform and twofold models over a grid.
    Compare {
        #[arg(long)]
        fcl: Option<PathBuf>,
        #[arg(long, allow_negative_numbers = true)]
        grid_distance_step: Option<f64>,
        #[arg(long, allow_negative_numbers = true)]
        grid_battery_step: Option<f64>,
        #[arg(long, allow_negative_numbers = true)]
        grid_tolerance_step: Option<f64>,
        #[command(flatten)]
        knobs: InferenceArgs,
        #[command(flatten)]
        out: OutputArg,
    },
}

#[derive(Debug, Args)]
struct OutputArg {
    /// Write the main output here instead of stdout.
    #[arg(short = 'o', long = "output")]
    output: Option<PathBuf>,
}

#[derive(Debug, Args)]
struct InferenceArgs {
    /// Trigger value at which an alert fires [default: 0.5].
    #[arg(long)]
    threshold: Option<f64>,
    /// Samples used by the centroid [default: 1001].
    #[arg(long)]
    cog_samples: Option<usize>,
}

/// `key=value` lines; `#` starts a comment.
#[derive(Debug, Default, Clone, PartialEq)]
pub struct Config {
    values: BTreeMap<String, String>,
}

impl Config {
    pub fn parse(text: &str) -> Result<Self, String> {
        let mut values = BTreeMap::new();
        for (n, line) in text.lines().enumerate() {
            let line = line.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let (k, v) = line
                .split_once('=')
                .ok_or_else(|| format!("config line {}: expected key=value", n + 1))?;
            values.insert(k.trim().replace('_', "-"), v.trim().to_string());
        }
        Ok(Config { values })
    }

    pub fn get(&self, key: &str) -> Option<&str> {
        self.values.get(key).map(String::as_str)
    }

    fn pick<T: FromStr>(&self, flag: Option<T>, key: &str) -> CliResult<Option<T>> {
        if flag.is_some() {
            return Ok(flag);
        }
        match self.get(key) {
            None => Ok(None),
            Some(raw) => raw
                .parse()
                .map(Some)
                .map_err(|_| CliError::Usage(format!("config value `{raw}` for `{key}` is invalid"))),
        }
    }

    fn require<T: FromStr>(&self, flag: Option<T>, key: &str) -> CliResult<T> {
        self.pick(flag, key)?
            .ok_or_else(|| CliError::Usage(format!("--{key} is required")))
    }
}

/// Entry point of the binary: reads `GEOLING_CONFIG` and dispatches.
pub fn run<I, S>(args: I, stdin: &mut dyn BufRead, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = S>,
    S: Into<std::ffi::OsString> + Clone,
{
    let config_path = std::env::var_os(CONFIG_ENV).map(PathBuf::from);
    run_with_config(args, config_path.as_deref(), stdin, stdout, stderr)
}

/// [`run`] with the config path given explicitly.
pub fn run_with_config<I, S>(
    args: I,
    config_path: Option<&Path>,
    stdin: &mut dyn BufRead,
    stdout: &mut dyn Write,
    stderr: &mut dyn Write,
) -> i32
where
    I: IntoIterator<Item = S>,
    S: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
            let rendered = e.render().to_string();
            let _ = if e.use_stderr() {
                stderr.write_all(rendered.as_bytes())
            } else {
                stdout.write_all(rendered.as_bytes())
            };
            return code;
        }
    };
    let outcome = load_config(config_path).and_then(|config| dispatch(cli.command, &config, stdin, stdout, stderr));
    match outcome {
        Ok(()) => EXIT_OK,
        Err(CliError::Clarify) => EXIT_CLARIFY,
        Err(e) => {
            let _ = writeln!(stderr, "error: {e}");
            e.code()
        }
    }
}

fn load_config(path: Option<&Path>) -> CliResult<Config> {
    match path {
        None => Ok(Config::default()),
        Some(p) => Config::parse(&read(p)?).map_err(CliError::Usage),
    }
}

fn read(path: &Path) -> CliResult<String> {
    fs::read_to_string(path).map_err(|e| CliError::Io(format!("{}: {e}", path.display())))
}

fn emit(out: &OutputArg, text: &str, stdout: &mut dyn Write) -> CliResult<()> {
    match &out.output {
        Some(p) => fs::write(p, text).map_err(|e| CliError::Io(format!("{}: {e}", p.display()))),
        None => stdout
            .write_all(text.as_bytes())
            .map_err(|e| CliError::Io(format!("stdout: {e}"))),
    }
}

fn load_program(path: Option<PathBuf>) -> CliResult<FclProgram> {
    match path {
        None => Ok(alerts::alert1_program()),
        Some(p) => parse_fcl(&read(&p)?).map_err(|e| CliError::Parse(format!("{}: {e}", p.display()))),
    }
}

fn settings(knobs: InferenceArgs, config: &Config) -> CliResult<AlertSettings> {
    let threshold = config.pick(knobs.threshold, "threshold")?.unwrap_or(alerts::DEFAULT_THRESHOLD);
    if !threshold.is_finite() {
        return Err(CliError::Usage(format!("threshold {threshold} is not finite")));
    }
    let cog_samples = config.pick(knobs.cog_samples, "cog-samples")?.unwrap_or(DEFAULT_COG_SAMPLES);
    if cog_samples < 2 {
        return Err(CliError::Usage(format!("--cog-samples must be at least 2, got {cog_samples}")));
    }
    Ok(AlertSettings { threshold, cog_samples })
}

fn parse_dest(raw: &str) -> CliResult<(f64, f64)> {
    let bad = || CliError::Usage(format!("--dest expects `lat,lon`, got `{raw}`"));
    let (lat, lon) = raw.split_once(',').ok_or_else(bad)?;
    let lat: f64 = lat.trim().parse().map_err(|_| bad())?;
    let lon: f64 = lon.trim().parse().map_err(|_| bad())?;
    alerts::check_coordinates(lat, lon).map_err(|e| CliError::Usage(e.to_string()))?;
    Ok((lat, lon))
}

fn dispatch(
    command: Command,
    config: &Config,
    stdin: &mut dyn BufRead,
    stdout: &mut dyn Write,
    stderr: &mut dyn Write,
) -> CliResult<()> {
    match command {
        Command::ParseFcl { path, fcl, out } => {
            let path: PathBuf = config.require(path.or(fcl), "fcl")?;
            let program = parse_fcl(&read(&path)?).map_err(|e| CliError::Parse(format!("{}: {e}", path.display())))?;
            emit(&out, &program.to_string(), stdout)
        }
        Command::BuildPartition {
            bags,
            lo,
            hi,
            low_anchor,
            high_anchor,
            out,
        } => {
            let bags_path: PathBuf = config.require(bags, "bags")?;
            let lo: f64 = config.require(lo, "lo")?;
            let hi: f64 = config.require(hi, "hi")?;
            let low: String = config.require(low_anchor, "low-anchor")?;
            let high: String = config.require(high_anchor, "high-anchor")?;
            let bags = parse_bags(&read(&bags_path)?).map_err(|e| CliError::Parse(e.to_string()))?;
            let partition =
                build_partition_from_bags(&bags, lo, hi, &low, &high).map_err(|e| CliError::Usage(e.to_string()))?;
            emit(&out, &partition.to_text(), stdout)
        }
        Command::Nlu {
            sentence,
            lexicon,
            fcl,
            interactive,
            out,
        } => {
            let lexicon = match config.pick(lexicon, "lexicon")? {
                None => Lexicon::stock(),
                Some(p) => Lexicon::parse(&read(&p)?).map_err(|e| CliError::Parse(e.to_string()))?,
            };
            let program = load_program(config.pick(fcl, "fcl")?)?;
            let tokens = analyze(&sentence, &lexicon).map_err(|e| CliError::Usage(e.to_string()))?;
            let spec = match parse_frame(&tokens) {
                FrameOutcome::Spec(spec) => spec,
                FrameOutcome::Clarify(request) if !interactive => {
                    let _ = stdout.write_all(request.to_document().as_bytes());
                    return Err(CliError::Clarify);
                }
                FrameOutcome::Clarify(request) => clarify(request.partial, &lexicon, stdin, stderr)?,
            };
            let spec = resolve_distance(&spec, &program)?;
            emit(&out, &spec.to_document(), stdout)
        }
        Command::Simulate {
            fcl,
            telemetry,
            tolerance,
            dest,
            mode,
            knobs,
            out,
        } => {
            let program = load_program(config.pick(fcl, "fcl")?)?;
            let telemetry_path: PathBuf = config.require(telemetry, "telemetry")?;
            let tolerance = config.pick(tolerance, "tolerance")?.unwrap_or(0.0);
            let dest = config.pick(dest, "dest")?.map(|d: String| parse_dest(&d)).transpose()?;
            let mode: CompileMode = config
                .pick(mode, "mode")?
                .map(|m: String| m.parse().map_err(CliError::Usage))
                .transpose()?
                .unwrap_or(CompileMode::Twofold);
            let settings = settings(knobs, config)?;
            let controller = compile(&program, mode)
                .and_then(|c| c.with_cog_samples(settings.cog_samples))
                .map_err(|e| CliError::Parse(e.to_string()))?;
            let file = fs::File::open(&telemetry_path)
                .map_err(|e| CliError::Io(format!("{}: {e}", telemetry_path.display())))?;
            let samples = read_telemetry(file).map_err(|e| CliError::Parse(e.to_string()))?;
            let mut lines = String::new();
            for s in &samples {
                let event = evaluate_alert(&controller, s, tolerance, dest, settings.threshold)
                    .map_err(|e| CliError::Usage(e.to_string()))?;
                for w in &event.warnings {
                    let _ = writeln!(stderr, "warning: t={}: {w}", event.timestamp);
                }
                lines.push_str(&event.to_line());
                lines.push('\n');
            }
            emit(&out, &lines, stdout)
        }
        Command::Compare {
            fcl,
            grid_distance_step,
            grid_battery_step,
            grid_tolerance_step,
            knobs,
            out,
        } => {
            let program = load_program(config.pick(fcl, "fcl")?)?;
            let defaults = GridSteps::default();
            let steps = GridSteps {
                distance: config
                    .pick(grid_distance_step, "grid-distance-step")?
                    .unwrap_or(defaults.distance),
                battery: config
                    .pick(grid_battery_step, "grid-battery-step")?
                    .unwrap_or(defaults.battery),
                tolerance: config
                    .pick(grid_tolerance_step, "grid-tolerance-step")?
                    .unwrap_or(defaults.tolerance),
            };
            let settings = settings(knobs, config)?;
            let twofold = compile(&program, CompileMode::Twofold).map_err(|e| CliError::Parse(e.to_string()))?;
            let grid = Grid::from_steps(&twofold, steps).map_err(|e| CliError::Usage(e.to_string()))?;
            let report = compare_models(&program, &grid, &settings).map_err(|e| CliError::Usage(e.to_string()))?;
            emit(&out, &report.to_csv(), stdout)?;
            let _ = stderr.write_all(report.summary().as_bytes());
            Ok(())
        }
    }
}

/// Prompts once per missing slot, merging what each answer fills.
fn clarify(
    mut partial: PartialFrame,
    lexicon: &Lexicon,
    stdin: &mut dyn BufRead,
    stderr: &mut dyn Write,
) -> CliResult<AlertSpec> {
    let asked = partial.missing();
    for slot in asked {
        if !partial.missing().contains(&slot) {
            continue;
        }
        let _ = write!(stderr, "{}? ", slot.as_str().to_lowercase());
        let _ = stderr.flush();
        let mut answer = String::new();
        let n = stdin
            .read_line(&mut answer)
            .map_err(|e| CliError::Io(format!("stdin: {e}")))?;
        if n == 0 {
            break;
        }
        if let Ok(tokens) = analyze(&answer, lexicon) {
            partial = partial.merge(PartialFrame::from_tokens(&tokens));
        }
    }
    match partial.complete() {
        FrameOutcome::Spec(spec) => Ok(spec),
        FrameOutcome::Clarify(request) => {
            let _ = stderr.write_all(request.to_document().as_bytes());
            Err(CliError::Clarify)
        }
    }
}

fn resolve_distance(spec: &AlertSpec, program: &FclProgram) -> CliResult<AlertSpec> {
    if spec.distance.is_none() {
        return Ok(spec.clone());
    }
    let controller = compile(program, CompileMode::Twofold).map_err(|e| CliError::Parse(e.to_string()))?;
    let partition = controller
        .input(DISTANCE)
        .and_then(|v| v.partition.as_ref())
        .ok_or_else(|| CliError::Usage(format!("controller has no linguistic `{DISTANCE}` input")))?;
    resolve_fuzzy(spec, partition).map_err(|e| CliError::Usage(e.to_string()))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn config_lines() {
        let c = Config::parse("# knobs\nthreshold = 0.6\ncog_samples=501\n\n").unwrap();
        assert_eq!(c.get("threshold"), Some("0.6"));
        assert_eq!(c.get("cog-samples"), Some("501"));
        assert!(Config::parse("threshold 0.6").is_err());
    }

    #[test]
    fn flags_override_config() {
        let c = Config::parse("threshold=0.6").unwrap();
        assert_eq!(c.pick(Some(0.7), "threshold").unwrap(), Some(0.7));
        assert_eq!(c.pick(None::<f64>, "threshold").unwrap(), Some(0.6));
        assert_eq!(c.pick(None::<f64>, "tolerance").unwrap(), None);
        assert!(Config::parse("threshold=high").unwrap().pick(None::<f64>, "threshold").is_err());
    }

    #[test]
    fn destination_parsing() {
        assert_eq!(parse_dest("48.85, 2.35").unwrap(), (48.85, 2.35));
        assert_eq!(parse_dest("-33.9,-70.6").unwrap(), (-33.9, -70.6));
        assert!(parse_dest("48.85").is_err());
        assert!(parse_dest("100,0").is_err());
    }
}
