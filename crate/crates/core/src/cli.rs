//! Command-line driver behind the `newton-strata` binary.
//!
//! Machine output goes to `out`; progress and summaries go to `err`.

use std::ffi::OsString;
use std::io::Write;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::json;
use thiserror::Error;

use crate::curves::{self, CurveError, CurveModel};
use crate::gf::DEFAULT_FIELD_CAP;
use crate::polygon::{np_from_l, NewtonPolygon, PolygonError};
use crate::poset::{self, PosetError};
use crate::search::{self, Family, Filter, PipelineError, SearchError, SearchSpec, SurveyOptions};
use crate::zeta::{self, LPolynomial, ZetaError};

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error("{0}")]
    Input(String),
    #[error("{0}")]
    Inconsistent(String),
    #[error(transparent)]
    Curve(#[from] CurveError),
    #[error(transparent)]
    Zeta(#[from] ZetaError),
    #[error(transparent)]
    Polygon(#[from] PolygonError),
    #[error(transparent)]
    Poset(#[from] PosetError),
    #[error(transparent)]
    Search(#[from] SearchError),
    #[error(transparent)]
    Pipeline(#[from] PipelineError),
    #[error("i/o: {0}")]
    Io(#[from] std::io::Error),
}

impl CliError {
    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::Usage(_) => 2,
            _ => 1,
        }
    }
}

/// Outcome of a command that ran to completion.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Status {
    Success,
    /// A verification ran but at least one claim failed.
    Failed,
    /// A search stopped before covering its family.
    Incomplete,
}

impl Status {
    pub fn exit_code(self) -> u8 {
        match self {
            Status::Success => 0,
            Status::Failed => 1,
            Status::Incomplete => 3,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum OutputFormat {
    Pretty,
    Json,
    Tsv,
    Dot,
}

#[derive(Debug, Parser)]
#[command(
    name = "newton-strata",
    version,
    about = "Zeta functions and Newton polygons of curves over finite fields"
)]
struct Cli {
    #[arg(long, global = true, value_enum, default_value = "pretty")]
    output: OutputFormat,
    /// Worker threads for `search` (defaults to the available parallelism).
    #[arg(long, global = true, value_parser = clap::value_parser!(u64).range(1..))]
    workers: Option<u64>,
    /// Largest field size used for point counting.
    #[arg(long, global = true, default_value_t = DEFAULT_FIELD_CAP)]
    field_cap: u64,
    /// Checkpoint file for `search`: read to resume, rewritten after each wave.
    #[arg(long, global = true)]
    resume: Option<PathBuf>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Point counts, L-polynomial and zeta truncation of a curve.
    Zeta {
        /// Curve text, catalog name, or `@path`.
        curve: String,
        /// Count points up to F_{q^m}; counts beyond the genus are checked against L.
        #[arg(long)]
        ext: Option<usize>,
    },
    /// Newton polygon, p-rank and stratum report.
    Np(NpArgs),
    /// Poset of symmetric Newton polygons of a given height.
    Poset {
        #[arg(long)]
        genus: usize,
        /// Overrides `--output`.
        #[arg(long, value_enum)]
        format: Option<OutputFormat>,
    },
    /// Exhaustive survey of a curve family; matches are written as JSON lines.
    Search(SearchArgs),
    /// Recompute a catalog curve and compare against its expected data.
    Verify { name: String },
}

#[derive(Debug, Args)]
#[group(required = true, multiple = false, id = "source")]
struct NpSource {
    /// Curve text, catalog name, or `@path`.
    curve: Option<String>,
    /// L-polynomial as JSON `{"q":..,"g":..,"coeffs":[..]}`, inline or `@path`.
    #[arg(long)]
    lpoly: Option<String>,
    /// Polygon text such as `4*(1/4)+4*(3/4)`.
    #[arg(long)]
    polygon: Option<String>,
}

#[derive(Debug, Args)]
struct NpArgs {
    #[command(flatten)]
    source: NpSource,
    #[arg(long)]
    genus: Option<usize>,
}

#[derive(Debug, Args)]
#[group(required = false, multiple = false, id = "filter")]
struct FilterArgs {
    #[arg(long)]
    prank: Option<usize>,
    #[arg(long)]
    polygon: Option<String>,
    #[arg(long)]
    supersingular: bool,
}

#[derive(Debug, Args)]
struct SearchArgs {
    /// `hyp:P:D`, `as:P:D` or `as:P:D:e1,e2,...`.
    #[arg(long)]
    family: String,
    #[command(flatten)]
    filter: FilterArgs,
    #[arg(long)]
    limit: Option<usize>,
    #[arg(long, default_value_t = search::DEFAULT_CHUNK_SIZE, value_parser = clap::value_parser!(u64).range(1..))]
    chunk: u64,
    #[arg(long, default_value_t = search::DEFAULT_BUDGET)]
    budget: u64,
    /// Write the summary JSON (with histogram) here.
    #[arg(long)]
    summary: Option<PathBuf>,
}

/// Parse `args` (including the program name) and run the command.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> Result<Status, CliError>
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            use clap::error::ErrorKind;
            if matches!(e.kind(), ErrorKind::DisplayHelp | ErrorKind::DisplayVersion) {
                write!(out, "{}", e.render())?;
                return Ok(Status::Success);
            }
            let text = e.render().to_string();
            return Err(CliError::Usage(
                text.trim_start_matches("error: ").trim_end().to_string(),
            ));
        }
    };
    let output = match &cli.command {
        Command::Poset {
            format: Some(f), ..
        } => *f,
        _ => cli.output,
    };
    if output == OutputFormat::Dot && !matches!(cli.command, Command::Poset { .. }) {
        return Err(CliError::Usage(
            "--output dot is only available for poset".into(),
        ));
    }
    match &cli.command {
        Command::Zeta { curve, ext } => cmd_zeta(&cli, output, curve, *ext, out),
        Command::Np(args) => cmd_np(&cli, output, args, out),
        Command::Poset { genus, .. } => cmd_poset(output, *genus, out),
        Command::Search(args) => cmd_search(&cli, args, out, err),
        Command::Verify { name } => cmd_verify(output, name, out),
    }
}

fn read_arg(text: &str) -> Result<String, CliError> {
    match text.strip_prefix('@') {
        Some(path) => std::fs::read_to_string(path)
            .map(|s| s.trim().to_string())
            .map_err(|e| CliError::Input(format!("{path}: {e}"))),
        None => Ok(text.to_string()),
    }
}

/// Curve text (`hyp ...` / `as ...`), catalog name, or `@path` to either.
fn resolve_curve(text: &str) -> Result<CurveModel, CliError> {
    let text = read_arg(text)?;
    if text.starts_with("hyp") || text.starts_with("as ") {
        return Ok(text.parse()?);
    }
    Ok(curves::lookup(&text)?.model)
}

fn write_json(out: &mut dyn Write, value: &serde_json::Value) -> Result<(), CliError> {
    writeln!(
        out,
        "{}",
        serde_json::to_string_pretty(value).expect("serializable")
    )?;
    Ok(())
}

fn cmd_zeta(
    cli: &Cli,
    output: OutputFormat,
    curve: &str,
    ext: Option<usize>,
    out: &mut dyn Write,
) -> Result<Status, CliError> {
    let model = resolve_curve(curve)?;
    let g = model.genus();
    let m = ext.unwrap_or(g).max(g).max(1);
    let counts = curves::count_profile_with_cap(&model, m, cli.field_cap)?;
    // counts past the genus are checked against L inside l_from_counts
    let l = zeta::l_from_counts(&counts, g)?;
    let series = zeta::zeta_series(&l, g)?;
    let predicted = (1..=m)
        .map(|k| zeta::predicted_counts(&l, k))
        .collect::<Result<Vec<_>, _>>()?;
    for (k, (&n, &pr)) in counts.counts.iter().zip(&predicted).enumerate() {
        if n as i128 != pr {
            return Err(CliError::Inconsistent(format!(
                "N_{} counted {n}, predicted {pr}",
                k + 1
            )));
        }
    }
    match output {
        OutputFormat::Pretty => {
            writeln!(out, "curve: {model}")?;
            writeln!(out, "genus: {g}")?;
            writeln!(out, "q: {}", counts.q)?;
            let ns: Vec<String> = counts.counts.iter().map(u64::to_string).collect();
            writeln!(out, "counts N_1..N_{m}: {}", ns.join(" "))?;
            writeln!(out, "L(T) = {l}")?;
            let cs: Vec<String> = series.iter().map(i128::to_string).collect();
            writeln!(out, "zeta truncation to order {g}: {}", cs.join(" "))?;
        }
        OutputFormat::Json => write_json(
            out,
            &json!({
                "curve": model.to_string(),
                "genus": g,
                "q": counts.q,
                "counts": counts.counts,
                "L": l,
                "zeta": series.iter().map(i128::to_string).collect::<Vec<_>>(),
            }),
        )?,
        OutputFormat::Tsv => {
            writeln!(out, "k\tN_k\tpredicted")?;
            for (k, (n, pr)) in counts.counts.iter().zip(&predicted).enumerate() {
                writeln!(out, "{}\t{n}\t{pr}", k + 1)?;
            }
        }
        OutputFormat::Dot => unreachable!(),
    }
    Ok(Status::Success)
}

fn cmd_np(
    cli: &Cli,
    output: OutputFormat,
    args: &NpArgs,
    out: &mut dyn Write,
) -> Result<Status, CliError> {
    let src = &args.source;
    let polygon: NewtonPolygon = if let Some(curve) = &src.curve {
        let model = resolve_curve(curve)?;
        search::analyze_with_cap(&model, cli.field_cap)?.polygon
    } else if let Some(lpoly) = &src.lpoly {
        let l: LPolynomial = serde_json::from_str(&read_arg(lpoly)?)
            .map_err(|e| CliError::Input(format!("L-polynomial JSON: {e}")))?;
        np_from_l(&l)?
    } else {
        read_arg(src.polygon.as_deref().expect("argument group is required"))?.parse()?
    };
    let g = polygon.genus();
    if let Some(genus) = args.genus {
        if genus != g {
            return Err(CliError::Input(format!(
                "polygon has height {}, not {}",
                polygon.height(),
                2 * genus
            )));
        }
    }
    let report = (g > 0)
        .then(|| poset::stratum_report(g, &polygon))
        .transpose()?;
    let points = polygon.break_points();
    match output {
        OutputFormat::Pretty => {
            writeln!(out, "slopes: {polygon}")?;
            let pts: Vec<String> = points
                .points()
                .iter()
                .map(|(x, y)| format!("({x},{y})"))
                .collect();
            writeln!(out, "break points: {}", pts.join(" "))?;
            writeln!(out, "p-rank: {}", polygon.p_rank())?;
            writeln!(out, "supersingular: {}", polygon.is_supersingular())?;
            writeln!(out, "ordinary: {}", polygon.is_ordinary())?;
            if let Some(r) = &report {
                let opt = |v: Option<String>| v.unwrap_or_else(|| "unknown".into());
                writeln!(out, "genus: {}", r.g)?;
                writeln!(out, "codim: {}", opt(r.codim.map(|c| c.to_string())))?;
                writeln!(out, "dim A_g: {}", r.dim_ag)?;
                writeln!(out, "dim supersingular locus: {}", r.dim_ss)?;
                writeln!(out, "p-rank stratum codim: {}", r.prank_stratum_codim)?;
                writeln!(
                    out,
                    "codim at least 3g-3: {}",
                    opt(r.oort_flag_codim.map(|c| c.to_string()))
                )?;
                let dens: Vec<String> = r.denominators.iter().map(u32::to_string).collect();
                writeln!(out, "denominators: {}", dens.join(" "))?;
                writeln!(
                    out,
                    "decomposable: {}",
                    opt(r.decomposable.map(|c| c.to_string()))
                )?;
                writeln!(
                    out,
                    "graded above: {}",
                    opt(r.graded_above.map(|c| c.to_string()))
                )?;
                if !r.realized_by.is_empty() {
                    writeln!(out, "realized by: {}", r.realized_by.join(", "))?;
                }
                for note in &r.notes {
                    writeln!(out, "note: {note}")?;
                }
            }
        }
        OutputFormat::Json => write_json(
            out,
            &json!({
                "polygon": polygon,
                "slopes": polygon.to_string(),
                "break_points": points.points(),
                "p_rank": polygon.p_rank(),
                "supersingular": polygon.is_supersingular(),
                "ordinary": polygon.is_ordinary(),
                "report": report,
            }),
        )?,
        OutputFormat::Tsv => write!(out, "{}", points.to_tsv())?,
        OutputFormat::Dot => unreachable!(),
    }
    Ok(Status::Success)
}

fn cmd_poset(output: OutputFormat, genus: usize, out: &mut dyn Write) -> Result<Status, CliError> {
    let poset = poset::build_poset(genus)?;
    match output {
        OutputFormat::Dot => write!(out, "{}", poset.to_dot())?,
        OutputFormat::Json => write_json(out, &poset.to_json())?,
        OutputFormat::Tsv => {
            writeln!(out, "index\tcodim\tpolygon")?;
            for (i, (n, c)) in poset.nodes.iter().zip(&poset.codim).enumerate() {
                writeln!(out, "{i}\t{c}\t{n}")?;
            }
        }
        OutputFormat::Pretty => {
            writeln!(
                out,
                "genus {genus}: {} polygons, {} covers, {}",
                poset.nodes.len(),
                poset.covers.len(),
                if poset.graded { "graded" } else { "not graded" }
            )?;
            for (i, (n, c)) in poset.nodes.iter().zip(&poset.codim).enumerate() {
                writeln!(out, "  [{i}] codim {c}: {n}")?;
            }
            for (i, j) in &poset.covers {
                writeln!(out, "  {i} > {j}")?;
            }
        }
    }
    Ok(Status::Success)
}

fn cmd_search(
    cli: &Cli,
    args: &SearchArgs,
    out: &mut dyn Write,
    err: &mut dyn Write,
) -> Result<Status, CliError> {
    let family: Family = args.family.parse()?;
    let f = &args.filter;
    let filter = if let Some(r) = f.prank {
        Filter::PRankEquals(r)
    } else if let Some(np) = &f.polygon {
        Filter::PolygonEquals(np.parse()?)
    } else if f.supersingular {
        Filter::Supersingular
    } else {
        Filter::All
    };
    let spec = SearchSpec {
        family,
        filter,
        limit: args.limit,
        chunk_size: args.chunk,
        budget: args.budget,
        field_cap: cli.field_cap,
    };
    let workers = match cli.workers {
        Some(w) => w as usize,
        None => std::thread::available_parallelism().map_or(1, |n| n.get()),
    };
    let resume_after = match &cli.resume {
        Some(path) => search::read_checkpoint(path)?,
        None => None,
    };
    let options = SurveyOptions {
        workers,
        cancel: None,
        resume_after,
        checkpoint: cli.resume.clone(),
    };
    let result = search::run_survey(&spec, &options)?;
    for m in &result.matches {
        writeln!(out, "{}", m.to_json_line())?;
    }
    if let Some(path) = &args.summary {
        let text = serde_json::to_string_pretty(&result.summary_json()).expect("serializable");
        std::fs::write(path, text + "\n")
            .map_err(|e| CliError::Input(format!("{}: {e}", path.display())))?;
    }
    writeln!(
        err,
        "scanned {} of {} candidates ({} singular), {} matches{}",
        result.total_scanned,
        result.cardinality,
        result.singular,
        result.matches.len(),
        if result.complete { "" } else { ", incomplete" }
    )?;
    Ok(if result.complete {
        Status::Success
    } else {
        Status::Incomplete
    })
}

fn cmd_verify(output: OutputFormat, name: &str, out: &mut dyn Write) -> Result<Status, CliError> {
    let report = search::verify_named(name)?;
    match output {
        OutputFormat::Json => {
            write_json(out, &serde_json::to_value(&report).expect("serializable"))?
        }
        OutputFormat::Tsv => {
            writeln!(out, "claim\texpected\tcomputed\tresult")?;
            for c in &report.checks {
                let tag = if c.pass { "PASS" } else { "FAIL" };
                writeln!(out, "{}\t{}\t{}\t{tag}", c.claim, c.expected, c.computed)?;
            }
        }
        _ => writeln!(out, "{report}")?,
    }
    Ok(if report.passed {
        Status::Success
    } else {
        Status::Failed
    })
}
