//! `atiyah`: sections, codes and configuration searches from the command line.
//!
//! JSON goes to stdout, a short summary to stderr. Exit codes: 0 ok,
//! 2 bad input, 3 resource cap, 4 nothing found.

use std::path::{Path, PathBuf};
use std::process::ExitCode;

use atiyah::bundle::{pole_table, section_basis};
use atiyah::code::{code_build, export_generator, CodeParams, mds2_conditions, min_distance_exact, verify_theorem9, EvalConfig};
use atiyah::search::{find_config, find_mds2};
use atiyah::{json, Curve, Error, Limits};
use clap::{Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

#[derive(Parser)]
#[command(name = "atiyah", version, about = "Atiyah bundles on elliptic curves and their evaluation codes")]
struct Cli {
    /// Cap on exhaustive enumerations (codewords, section spaces).
    #[arg(long, global = true, env = "ATIYAH_ENUM_CAP")]
    cap: Option<u64>,
    /// Worker threads; defaults to all cores.
    #[arg(long, global = true)]
    jobs: Option<usize>,
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// List the rational points of a curve.
    Points { curve: PathBuf },
    /// Basis of H^0(I_r(mO)), optionally with the pole-order table.
    Sections {
        curve: PathBuf,
        #[arg(long)]
        r: usize,
        #[arg(long)]
        m: i64,
        #[arg(long)]
        table: bool,
    },
    /// Build the rank-r evaluation code on a point list.
    Code {
        curve: PathBuf,
        #[arg(long)]
        r: usize,
        #[arg(long)]
        m: i64,
        #[arg(long)]
        points: PathBuf,
        /// Compute the exact minimum distance.
        #[arg(long)]
        distance: bool,
        /// Write the generator matrix to this file.
        #[arg(long)]
        export: Option<PathBuf>,
    },
    /// Search for an evaluation set meeting the group-law hypotheses.
    Search {
        curve: PathBuf,
        #[arg(long, value_enum)]
        mode: Mode,
        #[arg(long, default_value_t = 2)]
        r: usize,
        #[arg(long)]
        m: i64,
        #[arg(long)]
        n: usize,
        /// Build the code and check its parameters.
        #[arg(long)]
        verify: bool,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum Mode {
    Theorem9,
    Mds2,
}

enum Failure {
    Core(Error),
    Io(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Core(e)
    }
}

type Outcome = Result<(Value, String), Failure>;

fn read_json(path: &Path) -> Result<Value, Failure> {
    let text = std::fs::read_to_string(path).map_err(|e| Failure::Io(format!("cannot read {}: {e}", path.display())))?;
    serde_json::from_str(&text).map_err(|e| Failure::Io(format!("{}: {e}", path.display())))
}

fn load_curve(path: &Path) -> Result<Curve, Failure> {
    let v = read_json(path)?;
    json::parse_curve(&v).map_err(|e| match e {
        Error::InvalidInput(msg) => Failure::Io(format!("{}: {msg}", path.display())),
        other => Failure::Core(other),
    })
}

fn points(curve: &Path, lim: &Limits) -> Outcome {
    let c = load_curve(curve)?;
    let pts = c.enumerate_points(lim.field_cap)?;
    let out = json!({ "count": pts.len(), "points": json::points(c.field(), &pts) });
    Ok((out, format!("{} rational points", pts.len())))
}

fn sections(curve: &Path, r: usize, m: i64, table: bool, lim: &Limits) -> Outcome {
    let c = load_curve(curve)?;
    let basis = section_basis(&c, r, m, lim)?;
    let t = if table { Some(pole_table(&c, r, m, lim)?) } else { None };
    let mut summary = format!("dim H^0(I_{r}({m}O)) = {}", basis.sections.len());
    if let Some(t) = &t {
        summary = format!("{summary}\n{}", t.render().trim_end());
    }
    Ok((json::section_basis(&c, &basis, t.as_ref()), summary))
}

fn code(curve: &Path, r: usize, m: i64, pts: &Path, distance: bool, export: Option<&Path>, lim: &Limits) -> Outcome {
    let c = load_curve(curve)?;
    let doc = read_json(pts)?;
    let pts = json::parse_points(&c, &doc).map_err(|e| Failure::Io(format!("{}: {e}", pts.display())))?;
    let cfg = EvalConfig::new(&c, r, m, pts)?;
    let code = code_build(&cfg, lim)?;
    if let Some(path) = export {
        std::fs::write(path, export_generator(&code)).map_err(|e| Failure::Io(format!("cannot write {}: {e}", path.display())))?;
    }
    let mut summary = format!("[{}, {}] code over F_{}", code.ell(), code.k(), c.field().q());
    let out = if distance {
        let dist = min_distance_exact(&code, lim)?;
        let params = CodeParams { ell: code.ell(), k: code.k(), d: dist.d };
        summary = format!("{summary}, d = {}, Singleton defect {}", params.d, params.singleton_defect());
        json::code_report(c.field(), code.ell(), code.k(), Some((&params, &code.section_of(&dist.witness))))
    } else {
        json::code_report(c.field(), code.ell(), code.k(), None)
    };
    Ok((out, summary))
}

fn search(curve: &Path, mode: Mode, r: usize, m: i64, n: usize, verify: bool, lim: &Limits) -> Outcome {
    let c = load_curve(curve)?;
    let (name, found) = match mode {
        Mode::Theorem9 => ("theorem9", find_config(&c, r, m, n, lim)?),
        Mode::Mds2 => {
            if r != 2 {
                return Err(Error::InvalidInput(format!("mds2 mode is rank 2 only, got --r {r}")).into());
            }
            ("mds2", find_mds2(&c, m, n, lim)?)
        }
    };
    let mut out = json::search_result(name, &c, r, m, &found);
    let explored: u64 = found.paths.iter().map(|p| p.explored).sum();
    let mut summary = format!("{name}: configuration found after {explored} candidates");
    if verify {
        let cfg = EvalConfig::new(&c, r, m, found.points.clone())?;
        let report = match mode {
            Mode::Theorem9 => {
                let rep = verify_theorem9(&cfg, lim)?;
                summary += &format!(
                    "; k = {} (predicted {}), d = {} (predicted {}){}",
                    rep.params.k,
                    rep.predicted_k,
                    rep.params.d,
                    rep.predicted_d,
                    if rep.pass() { "" } else { " -- MISMATCH" }
                );
                json::theorem9_report(c.field(), &rep)
            }
            Mode::Mds2 => {
                let code = code_build(&cfg, lim)?;
                let dist = min_distance_exact(&code, lim)?;
                let params = CodeParams { ell: code.ell(), k: code.k(), d: dist.d };
                let cond = mds2_conditions(&c, m, &found.points);
                summary += &format!(
                    "; [{}, {}, {}] code, Singleton defect {}{}",
                    params.ell,
                    params.k,
                    params.d,
                    params.singleton_defect(),
                    if params.singleton_defect() == 0 { "" } else { " -- not MDS" }
                );
                json::mds2_report(c.field(), &cond, &params, &code.section_of(&dist.witness))
            }
        };
        out["verification"] = report;
    }
    Ok((out, summary))
}

fn exit_code(e: &Error) -> u8 {
    match e {
        Error::FieldTooLarge { .. } | Error::RankOrTwistTooLarge { .. } | Error::SpaceTooLarge { .. } => 3,
        Error::NotFound { .. } => 4,
        _ => 2,
    }
}

fn error_json(e: &Error) -> Value {
    let kind = format!("{e:?}");
    let kind = kind.split(|c: char| !c.is_alphanumeric()).next().unwrap_or("Error").to_string();
    let mut v = json!({ "error": kind, "message": e.to_string() });
    if let Error::NotFound { explored, exhaustive, depth_cap } = e {
        v["explored"] = json!(explored);
        v["exhaustive"] = json!(exhaustive);
        v["depth_cap"] = json!(depth_cap);
    }
    v
}

/// Pretty JSON on stdout; a closed pipe is not an error worth reporting.
fn emit(v: &Value) {
    use std::io::Write;
    let text = serde_json::to_string_pretty(v).expect("serializable");
    let _ = writeln!(std::io::stdout().lock(), "{text}");
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    if let Some(j) = cli.jobs {
        if let Err(e) = rayon::ThreadPoolBuilder::new().num_threads(j.max(1)).build_global() {
            eprintln!("warning: {e}");
        }
    }
    let mut lim = Limits::default();
    if let Some(cap) = cli.cap {
        lim.enum_cap = cap;
    }
    let outcome = match &cli.cmd {
        Cmd::Points { curve } => points(curve, &lim),
        Cmd::Sections { curve, r, m, table } => sections(curve, *r, *m, *table, &lim),
        Cmd::Code { curve, r, m, points, distance, export } => {
            code(curve, *r, *m, points, *distance, export.as_deref(), &lim)
        }
        Cmd::Search { curve, mode, r, m, n, verify } => search(curve, *mode, *r, *m, *n, *verify, &lim),
    };
    match outcome {
        Ok((out, summary)) => {
            emit(&out);
            eprintln!("{summary}");
            ExitCode::SUCCESS
        }
        Err(Failure::Io(msg)) => {
            emit(&json!({ "error": "InvalidInput", "message": msg }));
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
        Err(Failure::Core(e)) => {
            emit(&error_json(&e));
            eprintln!("error: {e}");
            ExitCode::from(exit_code(&e))
        }
    }
}
