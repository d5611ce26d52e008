//! The `coxlimits` command-line tool.
//!
//! Exit codes: 0 success, 2 invalid datum, 3 bad arguments, 4 capacity or
//! numeric failure, 5 pair is not infinite dihedral, 6 dominance referee
//! disagreement.

use std::ffi::OsString;
use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::datum::{parse_coxeter_matrix, parse_gram_matrix, parse_overrides, CoxeterDatum, Vector};
use crate::dihedral::make_dihedral_pair;
use crate::dominance::{dominance_verdict, dominates_oracle, Direction, Method};
use crate::error::Error;
use crate::format::{self, DominanceRow, LimitSummary, Num};
use crate::limits::{cross_validation_distance, estimate_limit_cloud, sample_e2, LimitCloud, NeighborhoodProbe};
use crate::render::{render_svg, Layers, RenderSpec};
use crate::rootgen::{apply_word, generate_positive_roots_capped, RootTable, DEFAULT_ROOT_CAP, NEGATIVE_TOL};

pub const EXIT_OK: i32 = 0;
pub const EXIT_INVALID_DATUM: i32 = 2;
pub const EXIT_BAD_ARGS: i32 = 3;
pub const EXIT_NUMERIC: i32 = 4;
pub const EXIT_NOT_INFINITE_DIHEDRAL: i32 = 5;
pub const EXIT_DISAGREEMENT: i32 = 6;

#[derive(Debug)]
struct CliError {
    code: i32,
    message: String,
}

impl CliError {
    fn new(code: i32, message: impl Into<String>) -> Self {
        CliError {
            code,
            message: message.into(),
        }
    }

    fn args(message: impl Into<String>) -> Self {
        Self::new(EXIT_BAD_ARGS, message)
    }
}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        let code = match &e {
            Error::Parse { .. } | Error::InvalidDatum(_) => EXIT_INVALID_DATUM,
            Error::InvalidArgument(_)
            | Error::IndexOutOfRange { .. }
            | Error::DimensionMismatch { .. }
            | Error::BaseNotInTable
            | Error::IdenticalPoints => EXIT_BAD_ARGS,
            Error::NotInfiniteDihedral(_) | Error::AffinePair => EXIT_NOT_INFINITE_DIHEDRAL,
            _ => EXIT_NUMERIC,
        };
        CliError::new(code, e.to_string())
    }
}

type CliResult<T> = std::result::Result<T, CliError>;

#[derive(Parser, Debug)]
#[command(
    name = "coxlimits",
    version,
    about = "Roots, limit roots and dominance of infinite Coxeter groups"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Positive roots up to a depth, in canonical order.
    Roots(RootsArgs),
    /// Closed forms and convergence for a dihedral reflection subgroup.
    Dihedral(DihedralArgs),
    /// Limit-root estimate from deep roots, cross-validated against exact dihedral limits.
    Limits(LimitsArgs),
    /// Dominance verdicts on root pairs, refereed by word enumeration.
    Dominance(DominanceArgs),
    /// SVG picture of the normalized roots.
    Render(RenderArgs),
    /// Neighborhood certificates B(a_i, eta) around a dihedral limit point.
    Neighborhood(NeighborhoodArgs),
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
enum InputKind {
    /// `.cox` files are Coxeter matrices, everything else Gram matrices.
    Auto,
    Gram,
    Coxeter,
}

#[derive(Args, Debug)]
struct DatumArgs {
    /// Datum file (Gram matrix or Coxeter matrix).
    file: PathBuf,
    #[arg(long, value_enum, default_value_t = InputKind::Auto)]
    input: InputKind,
    /// Gram value used for infinite bonds of a Coxeter matrix (<= -1).
    #[arg(long, default_value_t = -1.0, allow_negative_numbers = true)]
    infinity_bond: f64,
    /// File of `i j value` lines overriding individual infinite bonds.
    #[arg(long)]
    overrides: Option<PathBuf>,
    /// Abort root generation beyond this many roots.
    #[arg(long, default_value_t = DEFAULT_ROOT_CAP)]
    max_roots: usize,
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
enum TableFormat {
    Csv,
    Json,
}

#[derive(Args, Debug)]
struct RootsArgs {
    #[command(flatten)]
    datum: DatumArgs,
    #[arg(long, default_value_t = 4)]
    depth: usize,
    #[arg(long, value_enum, default_value_t = TableFormat::Csv)]
    format: TableFormat,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args, Debug)]
struct DihedralArgs {
    #[command(flatten)]
    datum: DatumArgs,
    /// Root spec WORD@k, e.g. `1,2@1` for r1 r2 a1 or `@1` for a1.
    #[arg(long)]
    a: String,
    #[arg(long)]
    b: String,
    #[arg(long, default_value_t = 20)]
    iters: usize,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args, Debug)]
struct LimitsArgs {
    #[command(flatten)]
    datum: DatumArgs,
    #[arg(long, default_value_t = 15)]
    depth: usize,
    #[arg(long, default_value_t = 12)]
    min_depth: usize,
    #[arg(long, default_value_t = 1e-4)]
    cluster_tol: f64,
    /// Hyperbolic root pairs used for the exact limit sample.
    #[arg(long, default_value_t = 200)]
    pairs: usize,
    /// Maximal word length for the orbit part of the exact sample.
    #[arg(long, default_value_t = 4)]
    words: usize,
    /// Limit CSV of the deep-root estimate.
    #[arg(long)]
    out: Option<PathBuf>,
    /// Summary JSON; defaults to stdout when `--out` is given, stderr otherwise.
    #[arg(long)]
    summary: Option<PathBuf>,
    /// Limit CSV of the exact dihedral sample.
    #[arg(long)]
    e2_out: Option<PathBuf>,
}

#[derive(Args, Debug)]
struct DominanceArgs {
    #[command(flatten)]
    datum: DatumArgs,
    #[arg(long, default_value_t = 5)]
    depth: usize,
    /// Sample this many unordered pairs when there are more.
    #[arg(long, default_value_t = 100_000)]
    max_pairs: usize,
    #[arg(long, default_value_t = 8)]
    oracle_len: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args, Debug)]
struct RenderArgs {
    #[command(flatten)]
    datum: DatumArgs,
    #[arg(long, default_value_t = 6)]
    depth: usize,
    #[arg(long)]
    out: PathBuf,
    /// Comma-separated subset of roots,conic,limits,labels.
    #[arg(long, default_value = "roots")]
    layers: String,
    #[arg(long, default_value_t = 800)]
    width: u32,
    #[arg(long, default_value_t = 800)]
    height: u32,
    #[arg(long, default_value_t = 200)]
    pairs: usize,
    #[arg(long, default_value_t = 4)]
    words: usize,
}

#[derive(Args, Debug)]
struct NeighborhoodArgs {
    #[command(flatten)]
    datum: DatumArgs,
    #[arg(long)]
    a: String,
    #[arg(long)]
    b: String,
    /// Index i of a_i = (r_a r_b)^i a.
    #[arg(long, default_value_t = 1)]
    index: usize,
    /// Depth of the root table feeding the probe sample.
    #[arg(long, default_value_t = 8)]
    depth: usize,
    #[arg(long, default_value_t = 200)]
    pairs: usize,
    #[arg(long, default_value_t = 4)]
    words: usize,
    #[arg(long)]
    out: Option<PathBuf>,
}

/// Run the tool on `args` (including the program name); returns the exit code.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_BAD_ARGS } else { EXIT_OK };
            let _ = e.print();
            return code;
        }
    };
    let result = match cli.command {
        Command::Roots(a) => cmd_roots(a),
        Command::Dihedral(a) => cmd_dihedral(a),
        Command::Limits(a) => cmd_limits(a),
        Command::Dominance(a) => cmd_dominance(a),
        Command::Render(a) => cmd_render(a),
        Command::Neighborhood(a) => cmd_neighborhood(a),
    };
    match result {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {}", e.message);
            e.code
        }
    }
}

fn load_datum(args: &DatumArgs) -> CliResult<CoxeterDatum> {
    let text = fs::read_to_string(&args.file).map_err(|e| {
        CliError::new(EXIT_INVALID_DATUM, format!("cannot read {}: {e}", args.file.display()))
    })?;
    let coxeter = match args.input {
        InputKind::Gram => false,
        InputKind::Coxeter => true,
        InputKind::Auto => args.file.extension().is_some_and(|e| e == "cox"),
    };
    if !coxeter {
        if args.overrides.is_some() {
            return Err(CliError::args("--overrides applies to Coxeter-matrix input only"));
        }
        return Ok(parse_gram_matrix(&text)?);
    }
    let overrides = match &args.overrides {
        Some(p) => {
            let t = fs::read_to_string(p)
                .map_err(|e| CliError::args(format!("cannot read {}: {e}", p.display())))?;
            parse_overrides(&t)?
        }
        None => Vec::new(),
    };
    Ok(parse_coxeter_matrix(&text, args.infinity_bond, &overrides)?)
}

fn table(datum: &CoxeterDatum, depth: usize, args: &DatumArgs) -> CliResult<RootTable> {
    Ok(generate_positive_roots_capped(datum, depth, args.max_roots)?)
}

fn write_output(path: Option<&Path>, content: &str) -> CliResult<()> {
    let res = match path {
        Some(p) => fs::write(p, content),
        None => std::io::stdout().lock().write_all(content.as_bytes()),
    };
    res.map_err(|e| CliError::new(EXIT_NUMERIC, format!("write failed: {e}")))
}

/// Parse `WORD@k` into the root `apply_word(WORD, a_k)`.
fn parse_root_spec(datum: &CoxeterDatum, spec: &str) -> CliResult<Vector> {
    let bad = || CliError::args(format!("bad root spec {spec:?}, expected WORD@k such as 1,2@1"));
    let (word, k) = spec.split_once('@').ok_or_else(bad)?;
    let index = |t: &str| -> CliResult<usize> {
        match t.trim().parse::<usize>() {
            Ok(i) if (1..=datum.rank()).contains(&i) => Ok(i - 1),
            _ => Err(bad()),
        }
    };
    let k = index(k)?;
    let word = if word.trim().is_empty() {
        Vec::new()
    } else {
        word.split(',').map(index).collect::<CliResult<Vec<_>>>()?
    };
    let v = apply_word(datum, &word, &Vector::basis(datum.rank(), k))?;
    if v.iter().any(|&x| x < NEGATIVE_TOL) {
        return Err(CliError::args(format!("root spec {spec:?} gives a negative root")));
    }
    Ok(v)
}

fn cmd_roots(a: RootsArgs) -> CliResult<i32> {
    let datum = load_datum(&a.datum)?;
    let t = table(&datum, a.depth, &a.datum)?;
    let text = match a.format {
        TableFormat::Csv => format::roots_csv(&t),
        TableFormat::Json => format::roots_json(&t)?,
    };
    write_output(a.out.as_deref(), &text)?;
    Ok(EXIT_OK)
}

fn cmd_dihedral(a: DihedralArgs) -> CliResult<i32> {
    let datum = load_datum(&a.datum)?;
    let x = parse_root_spec(&datum, &a.a)?;
    let y = parse_root_spec(&datum, &a.b)?;
    let pair = make_dihedral_pair(&datum, &x, &y)?;
    write_output(a.out.as_deref(), &format::dihedral_json(&pair, a.iters)?)?;
    Ok(EXIT_OK)
}

fn empty_cloud(tol: f64) -> LimitCloud {
    LimitCloud {
        points: Vec::new(),
        residuals: Vec::new(),
        provenance: Vec::new(),
        cluster_tol: tol,
    }
}

fn cmd_limits(a: LimitsArgs) -> CliResult<i32> {
    if a.min_depth > a.depth {
        return Err(CliError::args("--min-depth must not exceed --depth"));
    }
    if !(a.cluster_tol > 0.0) {
        return Err(CliError::args("--cluster-tol must be positive"));
    }
    let datum = load_datum(&a.datum)?;
    let t = table(&datum, a.depth, &a.datum)?;
    let cloud = match estimate_limit_cloud(&datum, &t, a.min_depth, a.cluster_tol) {
        Ok(c) => c,
        Err(Error::EmptySelection(_)) => empty_cloud(a.cluster_tol),
        Err(e) => return Err(e.into()),
    };
    let e2 = match sample_e2(&datum, &t, a.pairs, a.words) {
        Ok(c) => Some(c),
        Err(Error::NoHyperbolicPairs) => None,
        Err(e) => return Err(e.into()),
    };
    let summary = LimitSummary {
        depth: a.depth,
        min_depth: a.min_depth,
        cluster_tol: Num(a.cluster_tol),
        point_count: cloud.len(),
        max_residual: (!cloud.is_empty()).then(|| Num(cloud.max_residual())),
        e2_count: e2.as_ref().map_or(0, |c| c.len()),
        e2_max_residual: e2.as_ref().filter(|c| !c.is_empty()).map(|c| Num(c.max_residual())),
        cross_validation_max_distance: e2
            .as_ref()
            .filter(|_| !cloud.is_empty())
            .map(|c| Num(cross_validation_distance(&cloud, c))),
    };
    let n = datum.rank();
    write_output(a.out.as_deref(), &format::limit_csv(n, &cloud))?;
    if let Some(p) = &a.e2_out {
        let c = e2.unwrap_or_else(|| empty_cloud(a.cluster_tol));
        write_output(Some(p), &format::limit_csv(n, &c))?;
    }
    let json = format::limit_summary_json(&summary)?;
    match (&a.summary, &a.out) {
        (Some(p), _) => write_output(Some(p), &json)?,
        (None, Some(_)) => write_output(None, &json)?,
        (None, None) => eprint!("{json}"),
    }
    Ok(EXIT_OK)
}

/// Whether the oracle's pair of answers is consistent with `direction`.
fn oracle_agrees(direction: Direction, xy: bool, yx: bool) -> bool {
    match direction {
        Direction::XdomY => xy && !yx,
        Direction::YdomX => !xy && yx,
        Direction::Equal => xy && yx,
        Direction::None => !xy && !yx,
    }
}

fn cmd_dominance(a: DominanceArgs) -> CliResult<i32> {
    if a.oracle_len == 0 {
        return Err(CliError::args("--oracle-len must be >= 1"));
    }
    if a.depth == 0 || a.max_pairs == 0 {
        return Err(CliError::args("--depth and --max-pairs must be >= 1"));
    }
    let datum = load_datum(&a.datum)?;
    let t = table(&datum, a.depth, &a.datum)?;
    let roots = t.roots();
    let mut pairs: Vec<(usize, usize)> = (0..roots.len())
        .flat_map(|i| ((i + 1)..roots.len()).map(move |j| (i, j)))
        .collect();
    if pairs.len() > a.max_pairs {
        let mut rng = ChaCha8Rng::seed_from_u64(a.seed);
        let mut picked = rand::seq::index::sample(&mut rng, pairs.len(), a.max_pairs).into_vec();
        picked.sort_unstable();
        pairs = picked.into_iter().map(|k| pairs[k]).collect();
    }
    let mut rows = Vec::with_capacity(pairs.len());
    let mut present = 0usize;
    let mut disagreements = 0usize;
    for (i, j) in pairs {
        let (x, y) = (&roots[i].coords, &roots[j].coords);
        let verdict = dominance_verdict(&datum, x, y, a.oracle_len)?;
        if verdict.present {
            present += 1;
        }
        if verdict.method != Method::Oracle {
            let xy = dominates_oracle(&datum, x, y, a.oracle_len)?;
            let yx = dominates_oracle(&datum, y, x, a.oracle_len)?;
            if !oracle_agrees(verdict.direction, xy, yx) {
                disagreements += 1;
                eprintln!("disagreement: roots {} and {} ({})", i + 1, j + 1, verdict.direction);
            }
        }
        rows.push(DominanceRow {
            x: i,
            y: j,
            b_xy: datum.form(x, y),
            verdict,
        });
    }
    write_output(a.out.as_deref(), &format::dominance_csv(&rows))?;
    eprintln!(
        "pairs {}, comparable {present}, disagreements {disagreements}",
        rows.len()
    );
    Ok(if disagreements == 0 { EXIT_OK } else { EXIT_DISAGREEMENT })
}

fn cmd_render(a: RenderArgs) -> CliResult<i32> {
    let layers = Layers::parse(&a.layers)?;
    let datum = load_datum(&a.datum)?;
    let spec = RenderSpec::new(datum.rank(), a.width, a.height, layers)?;
    let t = table(&datum, a.depth, &a.datum)?;
    let limits = if layers.limits {
        match sample_e2(&datum, &t, a.pairs, a.words) {
            Ok(c) => c.points,
            Err(Error::NoHyperbolicPairs) => Vec::new(),
            Err(e) => return Err(e.into()),
        }
    } else {
        Vec::new()
    };
    write_output(Some(&a.out), &render_svg(&t, &limits, &spec)?)?;
    Ok(EXIT_OK)
}

fn cmd_neighborhood(a: NeighborhoodArgs) -> CliResult<i32> {
    let datum = load_datum(&a.datum)?;
    let x = parse_root_spec(&datum, &a.a)?;
    let y = parse_root_spec(&datum, &a.b)?;
    let pair = make_dihedral_pair(&datum, &x, &y)?;
    let mut probe = NeighborhoodProbe::new(&pair, a.index)?;
    let t = table(&datum, a.depth, &a.datum)?;
    let mut etas: Vec<Vec<f64>> = vec![pair.a_inf().to_vec(), pair.b_inf().to_vec()];
    if let Ok(c) = sample_e2(&datum, &t, a.pairs, a.words) {
        etas.extend(c.points.iter().map(|p| p.to_vec()));
    }
    write_output(a.out.as_deref(), &format::neighborhood_json(&mut probe, &etas)?)?;
    Ok(EXIT_OK)
}
