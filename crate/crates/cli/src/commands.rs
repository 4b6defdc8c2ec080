//! Subcommands and their reports.

use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use ncszego_core::ball::{self, MatrixTuple};
use ncszego_core::favard;
use ncszego_core::kernel::{self, MomentSpec, ParamSpec};
use ncszego_core::lattice::{self, ChainMatrix};
use ncszego_core::szego::{self, Route};
use ncszego_core::words;
use ncszego_core::NcPoly;
use serde::{Deserialize, Serialize};

use crate::docs::{self, FamilyDoc, MatrixDoc, MomentsDoc, ParamsDoc, PolyDoc, TupleDoc};
use crate::error::{CliError, CliResult};
use crate::sample;

#[derive(Debug, Parser)]
#[command(name = "ncszego", version, about = "Orthogonal polynomials in several noncommuting variables")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Moments (or their Gram matrix) from Schur parameters.
    Params2kernel(Params2Kernel),
    /// Schur parameters from moments.
    Kernel2params(Kernel2Params),
    /// The orthonormal family `φ_σ` (or `φ♯_σ`).
    Orthopoly(Orthopoly),
    /// Christoffel-Darboux formula at pairs of points.
    VerifyCd(VerifyCd),
    /// Moments, family and round-trip residuals from parameters.
    VerifyFavard(VerifyFavard),
    /// Inverse-factor recursions on chain matrices.
    VerifyLattice(VerifyLattice),
    /// Displacement equation of triangular truncations.
    DisplacementCheck(DisplacementCheck),
    /// Necessary conditions for membership in the Schur class.
    SchurTest(SchurTest),
    /// Evaluate a polynomial at a matrix tuple.
    Eval(Eval),
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, ValueEnum)]
pub enum Format {
    #[default]
    Json,
    Csv,
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, ValueEnum)]
pub enum RouteArg {
    #[default]
    Recursive,
    Graded,
    Determinant,
}

impl From<RouteArg> for Route {
    fn from(r: RouteArg) -> Route {
        match r {
            RouteArg::Recursive => Route::Recursive,
            RouteArg::Graded => Route::Graded,
            RouteArg::Determinant => Route::Determinant,
        }
    }
}

#[derive(Debug, Args)]
pub struct Output {
    #[arg(long, value_enum, default_value_t)]
    pub format: Format,
    /// Write to this file instead of standard output.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct Tolerance {
    #[arg(long, default_value_t = 1e-9)]
    pub tol: f64,
}

#[derive(Debug, Args)]
pub struct Suite {
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Number of random cases.
    #[arg(long, default_value_t = 10)]
    pub count: usize,
    /// Number of letters for random inputs.
    #[arg(long, default_value_t = 2)]
    pub letters: usize,
    /// Random parameters are uniform in the disk of this radius.
    #[arg(long, default_value_t = 0.9)]
    pub radius: f64,
}

#[derive(Debug, Args)]
pub struct Points {
    /// Matrix size of random points.
    #[arg(long, default_value_t = 1)]
    pub dim: usize,
    /// Random points have ball norm uniform in `[0, point-radius]`.
    #[arg(long, default_value_t = 0.6)]
    pub point_radius: f64,
}

#[derive(Debug, Args)]
pub struct Params2Kernel {
    #[arg(long)]
    pub params: PathBuf,
    /// Defaults to the file's `max_len`.
    #[arg(long)]
    pub max_len: Option<usize>,
    #[command(flatten)]
    pub output: Output,
}

#[derive(Debug, Args)]
pub struct Kernel2Params {
    #[arg(long)]
    pub moments: PathBuf,
    #[arg(long)]
    pub max_len: Option<usize>,
    #[command(flatten)]
    pub output: Output,
}

#[derive(Debug, Args)]
pub struct Orthopoly {
    #[arg(long, conflicts_with = "moments", required_unless_present = "moments")]
    pub params: Option<PathBuf>,
    #[arg(long)]
    pub moments: Option<PathBuf>,
    #[arg(long)]
    pub max_len: Option<usize>,
    #[arg(long, value_enum, default_value_t)]
    pub route: RouteArg,
    /// Emit `φ♯_σ` instead of `φ_σ`.
    #[arg(long)]
    pub sharp: bool,
    #[command(flatten)]
    pub output: Output,
}

#[derive(Debug, Args)]
pub struct VerifyCd {
    /// Random parameters when absent.
    #[arg(long)]
    pub params: Option<PathBuf>,
    /// Length `n` of the formula.
    #[arg(long, default_value_t = 2)]
    pub max_len: usize,
    /// First point; random pairs when absent.
    #[arg(long, requires = "w")]
    pub z: Option<PathBuf>,
    #[arg(long, requires = "z")]
    pub w: Option<PathBuf>,
    #[command(flatten)]
    pub suite: Suite,
    #[command(flatten)]
    pub points: Points,
    #[command(flatten)]
    pub tol: Tolerance,
    #[command(flatten)]
    pub output: Output,
}

#[derive(Debug, Args)]
pub struct VerifyFavard {
    /// Random parameters when absent.
    #[arg(long)]
    pub params: Option<PathBuf>,
    #[arg(long)]
    pub max_len: Option<usize>,
    #[command(flatten)]
    pub suite: Suite,
    #[command(flatten)]
    pub tol: Tolerance,
    #[command(flatten)]
    pub output: Output,
}

#[derive(Debug, Args)]
pub struct VerifyLattice {
    /// Gram matrix of the words up to `max_len`; random matrices when absent.
    #[arg(long)]
    pub moments: Option<PathBuf>,
    #[arg(long)]
    pub max_len: Option<usize>,
    /// Largest random matrix size; sizes cycle through `2..=max-size`.
    #[arg(long, default_value_t = 8)]
    pub max_size: usize,
    #[command(flatten)]
    pub suite: Suite,
    #[command(flatten)]
    pub tol: Tolerance,
    #[command(flatten)]
    pub output: Output,
}

#[derive(Debug, Args)]
pub struct DisplacementCheck {
    /// Random polynomials when absent.
    #[arg(long)]
    pub poly: Option<PathBuf>,
    /// Truncation size `L`.
    #[arg(long, default_value_t = 4)]
    pub level: usize,
    /// Degree of random polynomials.
    #[arg(long, default_value_t = 3)]
    pub degree: usize,
    #[command(flatten)]
    pub suite: Suite,
    #[command(flatten)]
    pub tol: Tolerance,
    #[command(flatten)]
    pub output: Output,
}

#[derive(Debug, Args)]
pub struct SchurTest {
    #[arg(long)]
    pub poly: PathBuf,
    /// Truncation levels `0..=level`.
    #[arg(long, default_value_t = 3)]
    pub level: usize,
    /// Random points for the positivity test; `--count 0` skips it.
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[arg(long, default_value_t = 5)]
    pub count: usize,
    #[command(flatten)]
    pub points: Points,
    #[command(flatten)]
    pub tol: Tolerance,
    #[command(flatten)]
    pub output: Output,
}

#[derive(Debug, Args)]
pub struct Eval {
    #[arg(long)]
    pub poly: PathBuf,
    #[arg(long)]
    pub z: PathBuf,
    /// Sum the coefficient column against the block row of words instead of
    /// evaluating term by term; needs a point in the open ball.
    #[arg(long)]
    pub series: bool,
    #[command(flatten)]
    pub output: Output,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CdCase {
    pub residual: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CdOut {
    pub n: usize,
    pub cases: Vec<CdCase>,
    pub max_residual: f64,
    pub tol: f64,
    pub pass: bool,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FavardCase {
    pub ortho_residual: f64,
    pub param_roundtrip_residual: f64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub moments: Option<MomentsDoc>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub family: Option<FamilyDoc>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FavardOut {
    pub max_len: usize,
    pub cases: Vec<FavardCase>,
    pub max_residual: f64,
    pub tol: f64,
    pub pass: bool,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct LatticeCase {
    pub size: usize,
    pub p_recursion: f64,
    pub p_sharp_recursion: f64,
    pub rotation: f64,
    pub det_rel_err: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct LatticeOut {
    pub cases: Vec<LatticeCase>,
    pub max_residual: f64,
    pub tol: f64,
    pub pass: bool,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DisplacementOut {
    pub level: usize,
    pub residuals: Vec<f64>,
    pub max_residual: f64,
    pub tol: f64,
    pub pass: bool,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SchurOut {
    pub level: usize,
    pub truncation_norm: f64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub min_eigenvalue: Option<f64>,
    pub tol: f64,
    pub in_schur_class: bool,
}

/// Text to emit and whether a residual breached its tolerance.
pub struct Report {
    pub text: String,
    pub breach: Option<String>,
}

impl Report {
    fn ok(text: String) -> Self {
        Report { text, breach: None }
    }
}

/// Runs one subcommand. On a breach the report is still written before the
/// error is returned.
pub fn run(cli: Cli) -> CliResult<()> {
    let (report, output) = match &cli.command {
        Command::Params2kernel(a) => (params2kernel(a)?, &a.output),
        Command::Kernel2params(a) => (kernel2params(a)?, &a.output),
        Command::Orthopoly(a) => (orthopoly(a)?, &a.output),
        Command::VerifyCd(a) => (verify_cd(a)?, &a.output),
        Command::VerifyFavard(a) => (verify_favard(a)?, &a.output),
        Command::VerifyLattice(a) => (verify_lattice(a)?, &a.output),
        Command::DisplacementCheck(a) => (displacement_check(a)?, &a.output),
        Command::SchurTest(a) => (schur_test(a)?, &a.output),
        Command::Eval(a) => (eval(a)?, &a.output),
    };
    match &output.out {
        Some(path) => {
            std::fs::write(path, &report.text).map_err(|e| CliError::Io(format!("{}: {e}", path.display())))?
        }
        None => print!("{}", report.text),
    }
    match report.breach {
        Some(msg) => Err(CliError::Breach(msg)),
        None => Ok(()),
    }
}

fn json_only(output: &Output, command: &str) -> CliResult<()> {
    if output.format == Format::Csv {
        return Err(CliError::Validation(format!("{command} has no csv output")));
    }
    Ok(())
}

fn check_tol(tol: f64) -> CliResult<()> {
    if tol > 0.0 {
        Ok(())
    } else {
        Err(CliError::Validation(format!("--tol must be positive, got {tol}")))
    }
}

fn check_radius(name: &str, r: f64) -> CliResult<()> {
    if (0.0..1.0).contains(&r) {
        Ok(())
    } else {
        Err(CliError::Validation(format!("--{name} must lie in [0, 1), got {r}")))
    }
}

fn load_params(path: &Path) -> CliResult<(ParamSpec, usize)> {
    let doc: ParamsDoc = docs::read_json(path)?;
    let spec = doc.to_spec().map_err(|e| CliError::Validation(format!("{}: {e}", path.display())))?;
    Ok((spec, doc.max_len))
}

fn load_moments(path: &Path) -> CliResult<(MomentSpec, usize)> {
    let doc: MomentsDoc = docs::read_json(path)?;
    let spec = doc.to_spec().map_err(|e| CliError::Validation(format!("{}: {e}", path.display())))?;
    Ok((spec, doc.max_len))
}

fn load_poly(path: &Path) -> CliResult<NcPoly> {
    let doc: PolyDoc = docs::read_json(path)?;
    doc.to_poly().map_err(|e| CliError::Validation(format!("{}: {e}", path.display())))
}

fn load_tuple(path: &Path) -> CliResult<MatrixTuple> {
    let doc: TupleDoc = docs::read_json(path)?;
    doc.to_tuple().map_err(|e| CliError::Validation(format!("{}: {e}", path.display())))
}

fn gram_output(m: &MomentSpec, max_len: usize) -> CliResult<String> {
    let n = m.n_letters();
    let ws = words::enumerate_words(n, max_len);
    docs::gram_csv(&ws, n, &kernel::gram(m, &ws))
}

fn params2kernel(a: &Params2Kernel) -> CliResult<Report> {
    let (p, file_len) = load_params(&a.params)?;
    let len = a.max_len.unwrap_or(file_len);
    let m = kernel::synthesize_moments(&p, len);
    Ok(Report::ok(match a.output.format {
        Format::Json => docs::to_json(&MomentsDoc::from_spec(&m, len)),
        Format::Csv => gram_output(&m, len)?,
    }))
}

fn kernel2params(a: &Kernel2Params) -> CliResult<Report> {
    let (m, file_len) = load_moments(&a.moments)?;
    let len = a.max_len.unwrap_or(file_len);
    if len > file_len {
        return Err(CliError::Validation(format!("--max-len {len} exceeds the file's max_len {file_len}")));
    }
    let p = kernel::extract_params(&m, len)?;
    Ok(Report::ok(match a.output.format {
        Format::Json => docs::to_json(&ParamsDoc::from_spec(&p, len)),
        Format::Csv => gram_output(&m, len)?,
    }))
}

fn orthopoly(a: &Orthopoly) -> CliResult<Report> {
    let fam = match (&a.params, &a.moments) {
        (Some(path), _) => {
            let (p, file_len) = load_params(path)?;
            szego::family(&p, a.max_len.unwrap_or(file_len), a.route.into())?
        }
        (None, Some(path)) => {
            let (m, file_len) = load_moments(path)?;
            let len = a.max_len.unwrap_or(file_len);
            if len > file_len {
                return Err(CliError::Validation(format!("--max-len {len} exceeds the file's max_len {file_len}")));
            }
            match a.route {
                RouteArg::Determinant => szego::det_family(&m, len)?,
                other => szego::family(&kernel::extract_params(&m, len)?, len, other.into())?,
            }
        }
        (None, None) => unreachable!("clap requires one input"),
    };
    Ok(Report::ok(match a.output.format {
        Format::Json => docs::to_json(&docs::family_doc(&fam, a.sharp)),
        Format::Csv => {
            let n = fam.n_letters();
            let ws = words::enumerate_words(n, fam.max_len());
            let polys: Vec<&NcPoly> =
                if a.sharp { fam.phi_sharps().map(|(_, p)| p).collect() } else { fam.phis().map(|(_, p)| p).collect() };
            let columns = ncszego_core::linalg::CMatrix::from_fn(ws.len(), ws.len(), |i, j| polys[i].dense(&ws)[j]);
            docs::gram_csv(&ws, n, &columns)?
        }
    }))
}

fn verdict(max_residual: f64, tol: f64, what: &str) -> Option<String> {
    (max_residual.is_nan() || max_residual > tol)
        .then(|| format!("{what}: residual {max_residual:e} exceeds tol {tol:e}"))
}

fn verify_cd(a: &VerifyCd) -> CliResult<Report> {
    json_only(&a.output, "verify-cd")?;
    check_tol(a.tol.tol)?;
    check_radius("point-radius", a.points.point_radius)?;
    let mut rng = sample::rng(a.suite.seed);
    let p = match &a.params {
        Some(path) => load_params(path)?.0,
        None => {
            check_radius("radius", a.suite.radius)?;
            sample::params(&mut rng, a.suite.letters, a.max_len, a.suite.radius)
        }
    };
    let pairs: Vec<(MatrixTuple, MatrixTuple)> = match (&a.z, &a.w) {
        (Some(z), Some(w)) => vec![(load_tuple(z)?, load_tuple(w)?)],
        _ => (0..a.suite.count)
            .map(|_| {
                let n = p.n_letters();
                let z = sample::point(&mut rng, n, a.points.dim, a.points.point_radius);
                (z, sample::point(&mut rng, n, a.points.dim, a.points.point_radius))
            })
            .collect(),
    };
    let trunc = (a.tol.tol * 1e-3).max(1e-15);
    let cases = pairs
        .iter()
        .map(|(z, w)| Ok(CdCase { residual: ball::cd_check(&p, z, w, a.max_len, trunc)?.residual }))
        .collect::<CliResult<Vec<_>>>()?;
    let max_residual = cases.iter().map(|c| c.residual).fold(0.0, f64::max);
    let breach = verdict(max_residual, a.tol.tol, "Christoffel-Darboux");
    let out = CdOut { n: a.max_len, cases, max_residual, tol: a.tol.tol, pass: breach.is_none() };
    Ok(Report { text: docs::to_json(&out), breach })
}

fn verify_favard(a: &VerifyFavard) -> CliResult<Report> {
    json_only(&a.output, "verify-favard")?;
    check_tol(a.tol.tol)?;
    let (cases, len) = match &a.params {
        Some(path) => {
            let (p, file_len) = load_params(path)?;
            let len = a.max_len.unwrap_or(file_len);
            let r = favard::favard(&p, len)?;
            let case = FavardCase {
                ortho_residual: r.ortho_residual,
                param_roundtrip_residual: r.param_roundtrip_residual,
                moments: Some(MomentsDoc::from_spec(&r.moments, len)),
                family: Some(docs::family_doc(&r.family, false)),
            };
            (vec![case], len)
        }
        None => {
            check_radius("radius", a.suite.radius)?;
            let len = a.max_len.unwrap_or(2);
            let mut rng = sample::rng(a.suite.seed);
            let cases = (0..a.suite.count)
                .map(|_| {
                    let p = sample::params(&mut rng, a.suite.letters, len, a.suite.radius);
                    let r = favard::favard(&p, len)?;
                    Ok(FavardCase {
                        ortho_residual: r.ortho_residual,
                        param_roundtrip_residual: r.param_roundtrip_residual,
                        moments: None,
                        family: None,
                    })
                })
                .collect::<CliResult<Vec<_>>>()?;
            (cases, len)
        }
    };
    let max_residual = cases.iter().map(|c| c.ortho_residual.max(c.param_roundtrip_residual)).fold(0.0, f64::max);
    let breach = verdict(max_residual, a.tol.tol, "favard");
    let out = FavardOut { max_len: len, cases, max_residual, tol: a.tol.tol, pass: breach.is_none() };
    Ok(Report { text: docs::to_json(&out), breach })
}

fn lattice_case(a: &ChainMatrix) -> CliResult<LatticeCase> {
    let r = lattice::verify_identities(a)?;
    let det = ncszego_core::linalg::determinant(a.matrix()).re;
    let from_params = lattice::chain_params(a)?.determinant();
    Ok(LatticeCase {
        size: a.size(),
        p_recursion: r.p_recursion,
        p_sharp_recursion: r.p_sharp_recursion,
        rotation: r.rotation,
        det_rel_err: (det - from_params).abs() / det.abs(),
    })
}

fn verify_lattice(a: &VerifyLattice) -> CliResult<Report> {
    json_only(&a.output, "verify-lattice")?;
    check_tol(a.tol.tol)?;
    let cases = match &a.moments {
        Some(path) => {
            let (m, file_len) = load_moments(path)?;
            let len = a.max_len.unwrap_or(file_len);
            let ws = words::enumerate_words(m.n_letters(), len);
            vec![lattice_case(&ChainMatrix::new(kernel::gram(&m, &ws))?)?]
        }
        None => {
            if a.max_size < 2 {
                return Err(CliError::Validation("--max-size must be at least 2".into()));
            }
            let mut rng = sample::rng(a.suite.seed);
            (0..a.suite.count)
                .map(|k| lattice_case(&ChainMatrix::new(sample::unit_pd(&mut rng, 2 + k % (a.max_size - 1)))?))
                .collect::<CliResult<Vec<_>>>()?
        }
    };
    let max_residual = cases
        .iter()
        .map(|c| c.p_recursion.max(c.p_sharp_recursion).max(c.rotation).max(c.det_rel_err))
        .fold(0.0, f64::max);
    let breach = verdict(max_residual, a.tol.tol, "lattice identities");
    let out = LatticeOut { cases, max_residual, tol: a.tol.tol, pass: breach.is_none() };
    Ok(Report { text: docs::to_json(&out), breach })
}

fn displacement_check(a: &DisplacementCheck) -> CliResult<Report> {
    json_only(&a.output, "displacement-check")?;
    check_tol(a.tol.tol)?;
    let polys = match &a.poly {
        Some(path) => vec![load_poly(path)?],
        None => {
            let mut rng = sample::rng(a.suite.seed);
            (0..a.suite.count).map(|_| sample::poly(&mut rng, a.suite.letters, a.degree)).collect()
        }
    };
    let residuals = polys.iter().map(|f| ball::displacement_residual(f, a.level)).collect::<Result<Vec<_>, _>>()?;
    let max_residual = residuals.iter().copied().fold(0.0, f64::max);
    let breach = verdict(max_residual, a.tol.tol, "displacement equation");
    let out = DisplacementOut { level: a.level, residuals, max_residual, tol: a.tol.tol, pass: breach.is_none() };
    Ok(Report { text: docs::to_json(&out), breach })
}

fn schur_test(a: &SchurTest) -> CliResult<Report> {
    json_only(&a.output, "schur-test")?;
    check_tol(a.tol.tol)?;
    check_radius("point-radius", a.points.point_radius)?;
    let f = load_poly(&a.poly)?;
    let norm = ball::schur_truncation_norm(&f, a.level);
    let min_eigenvalue = if a.count == 0 {
        None
    } else {
        let mut rng = sample::rng(a.seed);
        let pts: Vec<MatrixTuple> =
            (0..a.count).map(|_| sample::point(&mut rng, f.n_letters(), a.points.dim, a.points.point_radius)).collect();
        Some(ball::cf_gram(&f, &pts, (a.tol.tol * 1e-3).max(1e-15))?)
    };
    let mut reasons = Vec::new();
    if norm > 1.0 + a.tol.tol {
        reasons.push(format!("truncation norm {norm} > 1"));
    }
    if let Some(e) = min_eigenvalue.filter(|&e| e < -a.tol.tol) {
        reasons.push(format!("kernel eigenvalue {e:e} < 0"));
    }
    let breach = (!reasons.is_empty()).then(|| format!("not in Schur class: {}", reasons.join("; ")));
    let out = SchurOut {
        level: a.level,
        truncation_norm: norm,
        min_eigenvalue,
        tol: a.tol.tol,
        in_schur_class: breach.is_none(),
    };
    Ok(Report { text: docs::to_json(&out), breach })
}

fn eval(a: &Eval) -> CliResult<Report> {
    let f = load_poly(&a.poly)?;
    let z = load_tuple(&a.z)?;
    let value = if a.series { ball::eval_series(&f, &z)? } else { f.eval_matrix(&z)? };
    Ok(Report::ok(match a.output.format {
        Format::Json => docs::to_json(&MatrixDoc::from_matrix(&value)),
        Format::Csv => {
            let mut w = csv::Writer::from_writer(Vec::new());
            for i in 0..value.rows() {
                w.write_record(value.row(i).into_iter().map(docs::complex_cell))
                    .map_err(|e| CliError::Io(e.to_string()))?;
            }
            String::from_utf8(w.into_inner().map_err(|e| CliError::Io(e.to_string()))?).expect("ascii output")
        }
    }))
}
