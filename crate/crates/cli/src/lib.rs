//! Command-line front end. Every command is a thin shell over `juxta-core`
//! and `juxta-oracle`; [`run`] executes a command line in-process.

use std::fmt;
use std::io::Write;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use juxta_core::{
    build_grid_with, compare_series, complement, count_series, from_json, juxtapose, parse_spec,
    render_spec, reverse, to_json, Builtin, Comparison, Direction, GridPattern, JuxtaRequest,
    Series, Side, Specification, TrackMode,
};
use juxta_oracle::{count_sequence, parse_cells, OracleError, MAX_LEN};

pub const EXIT_OK: i32 = 0;
pub const EXIT_MISMATCH: i32 = 1;
pub const EXIT_USAGE: i32 = 2;

#[derive(Parser, Debug)]
#[command(
    name = "juxta",
    version,
    about = "Juxtapose permutation classes with monotone classes"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Print the counting sequence of a specification.
    Enumerate {
        #[command(flatten)]
        source: Source,
        /// Largest size to count.
        #[arg(long, default_value_t = 10)]
        terms: usize,
    },
    /// Write the specification of a juxtaposition or a k×1 grid class.
    Juxtapose {
        #[command(flatten)]
        source: Source,
        #[arg(long, value_enum, conflicts_with = "grid")]
        side: Option<SideArg>,
        #[arg(long, value_enum, conflicts_with = "grid")]
        dir: Option<DirArg>,
        /// Tracking kept by the (last) juxtaposition.
        #[arg(long, value_enum)]
        track: Option<TrackArg>,
        /// Grid pattern such as `inc|core|inc`.
        #[arg(long)]
        grid: Option<String>,
        #[command(flatten)]
        output: Output,
    },
    /// Write the specification of the complement class.
    Complement {
        #[command(flatten)]
        source: Source,
        #[command(flatten)]
        output: Output,
    },
    /// Write the specification of the reverse class.
    Reverse {
        #[command(flatten)]
        source: Source,
        #[command(flatten)]
        output: Output,
    },
    /// Report whether a specification is regular and/or context-free.
    Classify {
        #[command(flatten)]
        source: Source,
    },
    /// Compare a specification's counts with the brute-force oracle.
    Verify {
        #[command(flatten)]
        source: Source,
        /// Cells separated by `|`, e.g. `basis:2413,3142 | inc`.
        #[arg(long)]
        cells: String,
        /// Largest permutation length to check.
        #[arg(long, default_value_t = 8)]
        max_len: usize,
    },
    /// List the built-in specifications, or print one.
    Builtins {
        /// Print this built-in's specification.
        #[arg(long)]
        show: Option<String>,
    },
}

#[derive(Args, Debug)]
#[group(required = true, multiple = false)]
pub struct Source {
    /// One of av321, av312, separable, monotone.
    #[arg(long)]
    builtin: Option<String>,
    /// Specification file, in the text format or as JSON.
    #[arg(long)]
    spec: Option<PathBuf>,
}

#[derive(Args, Debug)]
pub struct Output {
    /// Write to this file instead of standard output.
    #[arg(long)]
    out: Option<PathBuf>,
    /// Emit JSON instead of the text format.
    #[arg(long)]
    json: bool,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
pub enum SideArg {
    Left,
    Right,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
pub enum DirArg {
    Inc,
    Dec,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
pub enum TrackArg {
    RightOnly,
    Both,
    None,
}

#[derive(Debug)]
pub enum CliError {
    Usage(String),
    Spec(juxta_core::Error),
    Oracle(OracleError),
    Io(std::io::Error),
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CliError::Usage(m) => f.write_str(m),
            CliError::Spec(e) => write!(f, "{e}"),
            CliError::Oracle(e) => write!(f, "{e}"),
            CliError::Io(e) => write!(f, "{e}"),
        }
    }
}

impl From<juxta_core::Error> for CliError {
    fn from(e: juxta_core::Error) -> Self {
        CliError::Spec(e)
    }
}

impl From<OracleError> for CliError {
    fn from(e: OracleError) -> Self {
        CliError::Oracle(e)
    }
}

impl From<std::io::Error> for CliError {
    fn from(e: std::io::Error) -> Self {
        CliError::Io(e)
    }
}

/// Parses a specification given as DSL text or JSON.
pub fn parse_source_text(text: &str) -> Result<Specification, juxta_core::Error> {
    if text.trim_start().starts_with('{') {
        from_json(text)
    } else {
        parse_spec(text)
    }
}

pub fn load_builtin(name: &str) -> Result<Specification, CliError> {
    Builtin::from_name(name).map(Builtin::spec).ok_or_else(|| {
        let known: Vec<&str> = Builtin::ALL.iter().map(|b| b.name()).collect();
        CliError::Usage(format!(
            "unknown built-in `{name}` (expected one of {})",
            known.join(", ")
        ))
    })
}

fn load(source: &Source) -> Result<Specification, CliError> {
    match (&source.builtin, &source.spec) {
        (Some(name), _) => load_builtin(name),
        (None, Some(path)) => {
            let text = std::fs::read_to_string(path)
                .map_err(|e| CliError::Usage(format!("{}: {e}", path.display())))?;
            Ok(parse_source_text(&text)?)
        }
        (None, None) => Err(CliError::Usage("give --builtin or --spec".into())),
    }
}

/// Tracking used when none is requested: both extremes if the root tracks
/// both, otherwise only the juxtaposed side.
pub fn default_track(spec: &Specification) -> TrackMode {
    let t = spec.root_tracking();
    if t.has_l && t.has_r {
        TrackMode::Both
    } else {
        TrackMode::RightOnly
    }
}

pub fn cmd_enumerate(spec: &Specification, terms: usize) -> Result<Series, CliError> {
    Ok(count_series(spec, terms)?)
}

pub fn cmd_juxtapose(
    spec: &Specification,
    side: Side,
    direction: Direction,
    track: Option<TrackMode>,
) -> Result<Specification, CliError> {
    let track = track.unwrap_or_else(|| default_track(spec));
    Ok(juxtapose(
        spec,
        JuxtaRequest {
            side,
            direction,
            track,
        },
    )?)
}

pub fn cmd_grid(
    spec: &Specification,
    pattern: &str,
    track: Option<TrackMode>,
) -> Result<Specification, CliError> {
    let pattern: GridPattern = pattern.parse()?;
    Ok(build_grid_with(
        spec,
        &pattern,
        track.unwrap_or(TrackMode::None),
    )?)
}

/// Result of comparing a specification with the oracle.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct VerifyReport {
    pub spec: Series,
    pub oracle: Series,
    pub comparison: Comparison,
}

pub fn cmd_verify(
    spec: &Specification,
    cells: &str,
    max_len: usize,
) -> Result<VerifyReport, CliError> {
    if max_len > MAX_LEN {
        return Err(CliError::Usage(format!(
            "--max-len {max_len} exceeds the oracle limit of {MAX_LEN}"
        )));
    }
    let cells = parse_cells(cells)?;
    let series = count_series(spec, max_len)?;
    let oracle = Series::from_u64s(&count_sequence(&cells, max_len)?);
    let comparison = compare_series(&series, &oracle);
    Ok(VerifyReport {
        spec: series,
        oracle,
        comparison,
    })
}

fn emit(spec: &Specification, output: &Output, out: &mut dyn Write) -> Result<(), CliError> {
    let text = if output.json {
        to_json(spec) + "\n"
    } else {
        render_spec(spec)
    };
    match &output.out {
        Some(path) => std::fs::write(path, text)?,
        None => out.write_all(text.as_bytes())?,
    }
    Ok(())
}

fn execute(cli: Cli, out: &mut dyn Write) -> Result<i32, CliError> {
    match cli.command {
        Command::Enumerate { source, terms } => {
            let spec = load(&source)?;
            writeln!(out, "{}", cmd_enumerate(&spec, terms)?)?;
        }
        Command::Juxtapose {
            source,
            side,
            dir,
            track,
            grid,
            output,
        } => {
            let spec = load(&source)?;
            let track = track.map(|t| match t {
                TrackArg::RightOnly => TrackMode::RightOnly,
                TrackArg::Both => TrackMode::Both,
                TrackArg::None => TrackMode::None,
            });
            let result = match grid {
                Some(pattern) => cmd_grid(&spec, &pattern, track)?,
                None => {
                    let side = match side.unwrap_or(SideArg::Right) {
                        SideArg::Left => Side::Left,
                        SideArg::Right => Side::Right,
                    };
                    let dir = match dir.unwrap_or(DirArg::Inc) {
                        DirArg::Inc => Direction::Inc,
                        DirArg::Dec => Direction::Dec,
                    };
                    cmd_juxtapose(&spec, side, dir, track)?
                }
            };
            emit(&result, &output, out)?;
        }
        Command::Complement { source, output } => {
            emit(&complement(&load(&source)?), &output, out)?;
        }
        Command::Reverse { source, output } => {
            emit(&reverse(&load(&source)?), &output, out)?;
        }
        Command::Classify { source } => {
            let c = load(&source)?.classify();
            let yes = |b: bool| if b { "yes" } else { "no" };
            writeln!(out, "regular: {}", yes(c.regular))?;
            writeln!(out, "context-free: {}", yes(c.context_free))?;
        }
        Command::Verify {
            source,
            cells,
            max_len,
        } => {
            let spec = load(&source)?;
            let report = cmd_verify(&spec, &cells, max_len)?;
            writeln!(out, "spec:   {}", report.spec)?;
            writeln!(out, "oracle: {}", report.oracle)?;
            match report.comparison {
                Comparison::Equal { .. } => writeln!(out, "PASS for n <= {max_len}")?,
                Comparison::Mismatch { index, left, right } => {
                    writeln!(out, "FAIL at n = {index}: spec {left}, oracle {right}")?;
                    return Ok(EXIT_MISMATCH);
                }
            }
        }
        Command::Builtins { show } => match show {
            Some(name) => {
                let b = Builtin::from_name(&name)
                    .ok_or_else(|| CliError::Usage(format!("unknown built-in `{name}`")))?;
                out.write_all(b.source().as_bytes())?;
            }
            None => {
                for b in Builtin::ALL {
                    let t = b.spec().root_tracking();
                    let tracks = match (t.has_l, t.has_r) {
                        (true, true) => "leftmost and rightmost",
                        (false, true) => "rightmost",
                        (true, false) => "leftmost",
                        (false, false) => "nothing",
                    };
                    writeln!(
                        out,
                        "{:<10} Av({})  tracks {tracks}",
                        b.name(),
                        b.basis().join(", ")
                    )?;
                }
            }
        },
    }
    Ok(EXIT_OK)
}

/// Runs a command line (including the program name) and returns the exit code.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = e.exit_code();
            let text = e.render().to_string();
            if code == 0 {
                let _ = out.write_all(text.as_bytes());
            } else {
                let _ = err.write_all(text.as_bytes());
            }
            return if code == 0 { EXIT_OK } else { EXIT_USAGE };
        }
    };
    match execute(cli, out) {
        Ok(code) => code,
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            EXIT_USAGE
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn default_track_follows_the_root() {
        assert_eq!(
            default_track(&load_builtin("av321").unwrap()),
            TrackMode::Both
        );
        assert_eq!(
            default_track(&load_builtin("av312").unwrap()),
            TrackMode::RightOnly
        );
    }

    #[test]
    fn source_text_may_be_json() {
        let spec = load_builtin("monotone").unwrap();
        assert_eq!(parse_source_text(&to_json(&spec)).unwrap(), spec);
        assert_eq!(parse_source_text(&render_spec(&spec)).unwrap(), spec);
    }

    #[test]
    fn verify_reports_the_first_mismatch() {
        let spec = parse_spec("C = E + C C Z").unwrap();
        let report = cmd_verify(&spec, "basis:312", 6).unwrap();
        assert!(report.comparison.is_equal());
        let report = cmd_verify(&spec, "inc", 3).unwrap();
        assert!(matches!(
            report.comparison,
            Comparison::Mismatch { index: 2, .. }
        ));
    }
}
