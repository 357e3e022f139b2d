//! `sysmap`: transition matrices, mixing numbers, dilatation certificates
//! and K-bound tables for twist-chain families.
//!
//! Exit status: 0 success, 1 usage or I/O error, 2 mathematical
//! precondition failed, 3 a computed value violated a claimed bound.

use std::fmt::Write as _;
use std::fs;
use std::io::{self, Write as _};
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::{SystemTime, UNIX_EPOCH};

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::json;
use sysmap_core::bounds::{self, BoundsReport, PlotSeries, TableFamily};
use sysmap_core::chains::build_base_chain;
use sysmap_core::matrix::TransitionMatrix;
use sysmap_core::mixing::mixing_number;
use sysmap_core::spectral::{
    perron_sums, root_dilatation_bound_with, spectral_radius_with, SpectralOptions,
    DEFAULT_TOLERANCE,
};
use sysmap_core::surfaces::RationalRay;
use sysmap_core::twist::{column_sum_bound, lifted_root_matrix, transition_matrix_base};
use sysmap_core::Error;

#[derive(Parser, Debug)]
#[command(
    name = "sysmap",
    version,
    about = "Bounds on the Lipschitz constant of the systole map"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,

    /// Output format (default: json for matrix, mixing and dilatation; csv for table; text for bounds).
    #[arg(long, global = true, value_enum)]
    format: Option<Format>,

    /// Write the result to this file instead of stdout.
    #[arg(long, short, global = true)]
    output: Option<PathBuf>,

    /// Directory for relative output paths and plot files.
    #[arg(long, global = true, env = "SYSMAP_OUT_DIR")]
    out_dir: Option<PathBuf>,

    /// Also write `<output>.stamp.json` recording the invocation and time.
    #[arg(long, global = true)]
    stamp: bool,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Transition matrix of the base map, or of the root map on the cover.
    Matrix {
        #[arg(long)]
        ray: RationalRay,
        #[arg(short, long = "index")]
        i: u64,
        /// Root map on the degree-i cyclic cover instead of the base map.
        #[arg(long)]
        lifted_root: bool,
        /// Print the base curve chain instead of a matrix.
        #[arg(long, conflicts_with = "lifted_root")]
        dump_chain: bool,
    },
    /// Mixing number of the root map matrix.
    Mixing {
        #[arg(long)]
        ray: RationalRay,
        #[arg(short, long = "index")]
        i: u64,
        /// Largest power to try (default (2+2p+q)i).
        #[arg(long)]
        cap: Option<usize>,
    },
    /// Certified dilatation of the base map and, for i >= 2, the root map.
    Dilatation {
        #[arg(long)]
        ray: RationalRay,
        #[arg(short, long = "index")]
        i: u64,
        #[arg(long, default_value_t = DEFAULT_TOLERANCE)]
        tol: f64,
    },
    /// Upper and lower K bounds for one surface.
    Bounds {
        #[command(flatten)]
        family: FamilyArgs,
        /// Cover index along a ray, or number of punctures for fixed genus.
        #[arg(short, long = "index")]
        i: u64,
    },
    /// Bounds over a range of indices, with plot files.
    Table {
        #[command(flatten)]
        family: FamilyArgs,
        /// First index, inclusive
        #[arg(long)]
        from: u64,
        /// Last index, inclusive
        #[arg(long)]
        to: u64,
    },
}

#[derive(Args, Debug)]
#[group(required = true, multiple = false)]
struct FamilyRequired {
    /// Rational ray p/q.
    #[arg(long)]
    ray: Option<RationalRay>,
    /// Fixed genus g >= 2, indexed by punctures.
    #[arg(long)]
    genus: Option<u64>,
}

#[derive(Args, Debug)]
struct FamilyArgs {
    #[command(flatten)]
    choice: FamilyRequired,
    /// Replace the computed collar constant N.
    #[arg(long)]
    n_override: Option<f64>,
    /// Constant of the cited dilatation bound (fixed genus).
    #[arg(long, default_value_t = 1.0)]
    c1: f64,
    /// Constant of the cited translation-length bound (fixed genus).
    #[arg(long, default_value_t = 1.0)]
    c2: f64,
}

impl FamilyArgs {
    fn family(&self) -> TableFamily {
        match (self.choice.ray, self.choice.genus) {
            (Some(ray), _) => TableFamily::Ray(ray),
            (None, Some(genus)) => TableFamily::FixedGenus {
                genus,
                c1: self.c1,
                c2: self.c2,
            },
            (None, None) => unreachable!("clap requires one of --ray, --genus"),
        }
    }

    fn label(&self) -> String {
        match (self.choice.ray, self.choice.genus) {
            (Some(ray), _) => format!("ray{}-{}", ray.p(), ray.q()),
            (_, Some(g)) => format!("genus{g}"),
            _ => unreachable!(),
        }
    }
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
enum Format {
    Csv,
    Json,
    Text,
}

enum Failure {
    Usage(String),
    Io(io::Error),
    Math(Error),
}

impl From<io::Error> for Failure {
    fn from(e: io::Error) -> Self {
        Failure::Io(e)
    }
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Math(e)
    }
}

/// What a command produced and whether it exposed a violated bound.
struct Emission {
    body: String,
    violation: Option<String>,
    incomplete: Option<String>,
}

impl Emission {
    fn ok(body: String) -> Self {
        Self {
            body,
            violation: None,
            incomplete: None,
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match run(&cli) {
        Ok(code) => ExitCode::from(code),
        Err(Failure::Usage(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(1)
        }
        Err(Failure::Io(e)) => {
            eprintln!("error: {e}");
            ExitCode::from(1)
        }
        Err(Failure::Math(e)) => {
            eprintln!("error: {e}");
            ExitCode::from(if e.is_falsification() { 3 } else { 2 })
        }
    }
}

fn run(cli: &Cli) -> Result<u8, Failure> {
    if cli.stamp && cli.output.is_none() {
        return Err(Failure::Usage("--stamp needs --output".into()));
    }
    let emission = match &cli.command {
        Command::Matrix {
            ray,
            i,
            lifted_root,
            dump_chain,
        } => matrix(
            ray,
            *i,
            *lifted_root,
            *dump_chain,
            cli.format.unwrap_or(Format::Json),
        )?,
        Command::Mixing { ray, i, cap } => {
            mixing(ray, *i, *cap, cli.format.unwrap_or(Format::Json))?
        }
        Command::Dilatation { ray, i, tol } => {
            dilatation(ray, *i, *tol, cli.format.unwrap_or(Format::Json))?
        }
        Command::Bounds { family, i } => {
            bounds_one(family, *i, cli.format.unwrap_or(Format::Text))?
        }
        Command::Table { family, from, to } => table(cli, family, *from, *to)?,
    };

    let path = write_output(cli, &emission.body)?;
    if let (true, Some(path)) = (cli.stamp, &path) {
        write_stamp(path)?;
    }
    if let Some(v) = emission.violation {
        eprintln!("bound violated: {v}");
        return Ok(3);
    }
    if let Some(why) = emission.incomplete {
        eprintln!("incomplete: {why}");
        return Ok(2);
    }
    Ok(0)
}

fn resolve(cli: &Cli, path: &Path) -> PathBuf {
    match &cli.out_dir {
        Some(dir) if path.is_relative() => dir.join(path),
        _ => path.to_path_buf(),
    }
}

fn write_output(cli: &Cli, body: &str) -> Result<Option<PathBuf>, Failure> {
    match &cli.output {
        Some(p) => {
            let path = resolve(cli, p);
            if let Some(parent) = path.parent().filter(|d| !d.as_os_str().is_empty()) {
                fs::create_dir_all(parent)?;
            }
            fs::write(&path, body)?;
            Ok(Some(path))
        }
        None => {
            io::stdout().lock().write_all(body.as_bytes())?;
            Ok(None)
        }
    }
}

fn write_stamp(path: &Path) -> Result<(), Failure> {
    let secs = SystemTime::now()
        .duration_since(UNIX_EPOCH)
        .map(|d| d.as_secs())
        .unwrap_or(0);
    let stamp = json!({
        "tool": "sysmap",
        "version": env!("CARGO_PKG_VERSION"),
        "arguments": std::env::args().skip(1).collect::<Vec<_>>(),
        "output": path.display().to_string(),
        "generated_unix_seconds": secs,
    });
    let mut name = path.as_os_str().to_owned();
    name.push(".stamp.json");
    fs::write(
        PathBuf::from(name),
        serde_json::to_string_pretty(&stamp).expect("json") + "\n",
    )?;
    Ok(())
}

fn pretty<T: serde::Serialize + ?Sized>(v: &T) -> String {
    serde_json::to_string_pretty(v).expect("plain data serializes") + "\n"
}

fn matrix_csv(m: &TransitionMatrix) -> String {
    let mut out = String::new();
    for row in m.rows() {
        let cells: Vec<String> = row.iter().map(|x| x.to_string()).collect();
        writeln!(out, "{}", cells.join(",")).expect("string write");
    }
    out
}

fn matrix(
    ray: &RationalRay,
    i: u64,
    lifted: bool,
    dump_chain: bool,
    format: Format,
) -> Result<Emission, Failure> {
    if dump_chain {
        if format != Format::Json {
            return Err(Failure::Usage("--dump-chain only supports json".into()));
        }
        return Ok(Emission::ok(pretty(
            &build_base_chain(ray, None)?.to_document(),
        )));
    }
    let m = if lifted {
        lifted_root_matrix(ray, i)?
    } else {
        transition_matrix_base(ray, i)?
    };
    let body = match format {
        Format::Json => pretty(&m.to_document()),
        Format::Text => m.to_string(),
        Format::Csv => matrix_csv(&m),
    };
    let mut emission = Emission::ok(body);
    if !lifted {
        let sum = sysmap_core::twist::max_column_sum(&m);
        if sum > column_sum_bound(i).into() {
            emission.violation = Some(format!(
                "max column sum {sum} > 16i+9 = {}",
                column_sum_bound(i)
            ));
        }
    }
    Ok(emission)
}

fn mixing(
    ray: &RationalRay,
    i: u64,
    cap: Option<usize>,
    format: Format,
) -> Result<Emission, Failure> {
    let m = lifted_root_matrix(ray, i)?;
    let cap = cap.unwrap_or_else(|| ray.mixing_cap(i));
    let result = mixing_number(&m, cap)?;
    let body = match format {
        Format::Json => pretty(&json!({
            "ray": ray.to_string(),
            "index": i,
            "dimension": m.dim(),
            "result": result,
        })),
        Format::Text => match result.mixing_number {
            Some(r) => format!("ray {ray}, i = {i}, dimension {}\nmixing number {r} (cap {cap})\ntranslation length >= 1/{r}\n", m.dim()),
            None => format!("ray {ray}, i = {i}, dimension {}\nno mixing number within cap {cap}\n", m.dim()),
        },
        Format::Csv => return Err(Failure::Usage("mixing supports json and text".into())),
    };
    let mut emission = Emission::ok(body);
    if result.mixing_number.is_none() {
        emission.violation = Some(format!(
            "no positive power of the root matrix within cap {cap}"
        ));
    }
    Ok(emission)
}

fn dilatation(ray: &RationalRay, i: u64, tol: f64, format: Format) -> Result<Emission, Failure> {
    let opts = SpectralOptions {
        tolerance: tol,
        ..Default::default()
    };
    let base = transition_matrix_base(ray, i)?;
    let spectral = spectral_radius_with(&base, &opts)?;
    let sums = perron_sums(&base);
    let bound = column_sum_bound(i);
    let violation = (sums.max_column_sum > bound.into())
        .then(|| format!("max column sum {} > 16i+9 = {bound}", sums.max_column_sum));

    let root = if i >= 2 {
        Some(root_dilatation_bound_with(ray, i, &opts)?)
    } else {
        None
    };

    let body = match format {
        Format::Json => pretty(&json!({
            "ray": ray.to_string(),
            "index": i,
            "base": {
                "dimension": base.dim(),
                "spectral": spectral,
                "sums": sums,
                "column_sum_bound": bound,
            },
            "root": root,
        })),
        Format::Text => {
            let mut out = format!(
                "ray {ray}, i = {i}\nbase: λ in [{}, {}] ({} iterations)\nbase: max column sum {}, max row sum {}, bound 16i+9 = {bound}\n",
                spectral.lower, spectral.upper, spectral.iterations, sums.max_column_sum, sums.max_row_sum
            );
            if let Some(r) = &root {
                writeln!(
                    out,
                    "root: log λ <= {} against log(16i+9)/i = {} (dimension {})",
                    r.computed_log_upper, r.closed_form, r.dimension
                )
                .expect("string write");
            }
            out
        }
        Format::Csv => return Err(Failure::Usage("dilatation supports json and text".into())),
    };
    Ok(Emission {
        body,
        violation,
        incomplete: None,
    })
}

fn report_text(r: &BoundsReport) -> String {
    let opt = |x: Option<f64>| x.map_or("-".to_string(), |v| v.to_string());
    let mut out = String::new();
    match r.surface {
        Some(s) => writeln!(out, "surface {s}, |chi| = {}", s.abs_euler()),
        None => writeln!(out, "index {}", r.index),
    }
    .expect("string write");
    writeln!(out, "N = {}", r.n).expect("string write");
    writeln!(
        out,
        "K_upper = {} (additive {})",
        opt(r.k_upper),
        r.k_upper_additive
    )
    .expect("string write");
    writeln!(out, "K_lower = {}", opt(r.k_lower)).expect("string write");
    if let Some(x) = &r.lower_inputs {
        writeln!(
            out,
            "mixing number {} (cap {}), lambda <= {}, log-dilatation bound {}",
            x.mixing_number.map_or("-".into(), |m| m.to_string()),
            x.mixing_cap,
            x.lambda_upper,
            x.log_dilatation_upper
        )
        .expect("string write");
    }
    writeln!(out, "certified: {}", r.certified).expect("string write");
    writeln!(out, "status: {}", r.status).expect("string write");
    out
}

fn bounds_one(args: &FamilyArgs, i: u64, format: Format) -> Result<Emission, Failure> {
    let rows = bounds::sandwich_table(&args.family(), &[i], args.n_override)?;
    let row = &rows[0];
    let body = match format {
        Format::Json => pretty(row),
        Format::Csv => bounds::to_csv(&rows),
        Format::Text => report_text(row),
    };
    let violation = row.is_falsification().then(|| row.status.clone());
    let incomplete = (row.k_upper.is_none() || row.k_lower.is_none()).then(|| row.status.clone());
    Ok(Emission {
        body,
        violation,
        incomplete,
    })
}

fn table(cli: &Cli, args: &FamilyArgs, from: u64, to: u64) -> Result<Emission, Failure> {
    if from > to {
        return Err(Failure::Usage(format!("--from {from} exceeds --to {to}")));
    }
    let indices: Vec<u64> = (from..=to).collect();
    let rows = bounds::sandwich_table(&args.family(), &indices, args.n_override)?;
    let body = match cli.format.unwrap_or(Format::Csv) {
        Format::Csv => bounds::to_csv(&rows),
        Format::Json => bounds::to_json(&rows),
        Format::Text => rows.iter().map(report_text).collect::<Vec<_>>().join("\n"),
    };

    let (dir, stem) = match &cli.output {
        Some(p) => {
            let path = resolve(cli, p);
            let stem = path
                .file_stem()
                .map(|s| s.to_string_lossy().into_owned())
                .unwrap_or_else(|| "table".into());
            (
                path.parent().map(Path::to_path_buf).unwrap_or_default(),
                stem,
            )
        }
        None => (
            cli.out_dir.clone().unwrap_or_else(|| PathBuf::from(".")),
            format!("table_{}_{from}_{to}", args.label()),
        ),
    };
    if !dir.as_os_str().is_empty() {
        fs::create_dir_all(&dir)?;
    }
    for (series, suffix) in [(PlotSeries::Upper, "upper"), (PlotSeries::Lower, "lower")] {
        fs::write(
            dir.join(format!("{stem}_{suffix}.dat")),
            bounds::plot_data(&rows, series),
        )?;
    }

    let falsified: Vec<u64> = rows
        .iter()
        .filter(|r| r.is_falsification())
        .map(|r| r.index)
        .collect();
    let violation =
        (!falsified.is_empty()).then(|| format!("rows {falsified:?} violate a claimed bound"));
    Ok(Emission {
        body,
        violation,
        incomplete: None,
    })
}
