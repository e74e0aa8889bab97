//! `gltrees`: command-line workbench for rooted/free tree combinatorics,
//! Grossman-Larson quotient-module certificates, and tree-formula
//! inversion of polynomial maps of symmetric homogeneous type.
//!
//! Exit codes: 0 success, 1 usage or input error, 2 resource guard,
//! 3 verification failure.

mod cert;
mod selftest;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;

use gltrees::gl;
use gltrees::inverse;
use gltrees::poly::{self, parse_poly, PolyMap, Polynomial};
use gltrees::quotient::{
    self, DegreeBound, GeneratorMode, QuotientParams, RankOptions,
};
use gltrees::trees::{self, FreeTree, RootedTree};
use gltrees::Error;

use cert::Certificate;

pub(crate) const EXIT_USAGE: u8 = 1;
pub(crate) const EXIT_GUARD: u8 = 2;
pub(crate) const EXIT_VERIFY: u8 = 3;

#[derive(Parser)]
#[command(name = "gltrees", version, about = "Tree-formula inversion workbench")]
pub(crate) struct Cli {
    /// Emit machine-readable JSON on stdout
    #[arg(long, global = true)]
    pub(crate) json: bool,
    /// Write a JSON certificate of the run into this directory
    #[arg(long, global = true, value_name = "DIR")]
    pub(crate) out: Option<PathBuf>,
    /// Worker threads (overrides GLTREES_THREADS; default all cores)
    #[arg(long, global = true, value_name = "N")]
    pub(crate) threads: Option<usize>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Enumerate trees and query structural predicates
    Trees {
        #[command(subcommand)]
        cmd: TreesCmd,
    },
    /// Grossman-Larson products and module actions
    Gl {
        #[command(subcommand)]
        cmd: GlCmd,
    },
    /// Quotient-module ranks, membership and window certificates
    Quot {
        #[command(subcommand)]
        cmd: QuotCmd,
    },
    /// Polynomial utilities over the Gaussian rationals
    Poly {
        #[command(subcommand)]
        cmd: PolyCmd,
    },
    /// Formal-inverse series and the gap-theorem inverter
    Inv {
        #[command(subcommand)]
        cmd: InvCmd,
    },
    /// Replay the built-in verification checks
    Selftest {
        /// quick: tree invariants; paper: adds the published values
        /// except the two heaviest degrees; extended: everything
        #[arg(long, value_enum, default_value_t = SelftestLevel::Quick)]
        level: SelftestLevel,
    },
}

#[derive(Subcommand)]
enum TreesCmd {
    /// List one canonical code per isomorphism class
    Enum {
        #[arg(long)]
        vertices: u32,
        /// Enumerate rooted trees instead of free trees
        #[arg(long)]
        rooted: bool,
    },
    /// Automorphism group order of a tree
    Aut {
        /// Tree code (parenthesis code, or an edge list for free trees)
        code: String,
        /// Interpret the code as a rooted tree
        #[arg(long)]
        rooted: bool,
    },
    /// Test for a naked r-chain in a free tree
    Chain {
        code: String,
        #[arg(long)]
        r: u32,
    },
}

#[derive(Subcommand)]
enum GlCmd {
    /// Expand S * T in the algebra (or the module action with --module)
    Product {
        /// Rooted tree code S
        code_s: String,
        /// Rooted tree code T (free tree with --module)
        code_t: String,
        /// Act on a free tree in the tree module instead
        #[arg(long)]
        module: bool,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum ModeArg {
    Full,
    Primitive,
}

impl From<ModeArg> for GeneratorMode {
    fn from(m: ModeArg) -> Self {
        match m {
            ModeArg::Full => GeneratorMode::Full,
            ModeArg::Primitive => GeneratorMode::Primitive,
        }
    }
}

#[derive(Args)]
struct QuotCommon {
    #[arg(long)]
    r: u32,
    /// Degree bound e, or "inf"
    #[arg(long)]
    e: DegreeBound,
    /// Spanning-set mode; primitive is validated before use and only its
    /// positive findings are conclusive
    #[arg(long, value_enum, default_value_t = ModeArg::Full)]
    mode: ModeArg,
    /// Override the degree/row resource guards
    #[arg(long)]
    force: bool,
}

#[derive(Subcommand)]
enum QuotCmd {
    /// Exact rank of N(r,e)_m and the quotient dimension
    Rank {
        #[command(flatten)]
        common: QuotCommon,
        #[arg(long)]
        m: u32,
        /// Also decide whether nu_m lies in the submodule
        #[arg(long)]
        nu: bool,
    },
    /// Check nu_m = 0 in the quotient for every m in [M+1, 2M]
    Window {
        #[command(flatten)]
        common: QuotCommon,
        #[arg(long = "M")]
        window_m: u32,
    },
}

#[derive(Subcommand)]
enum PolyCmd {
    /// Hessian of a potential, with optional nilpotency test
    Hess {
        /// File containing a polynomial in the text grammar
        file: PathBuf,
        /// Check whether Hess(P)^R = 0
        #[arg(long, value_name = "R")]
        nilpotent: Option<u32>,
        /// Number of variables (default: inferred from the text)
        #[arg(long)]
        n: Option<usize>,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum MethodArg {
    Tree,
    Zhao,
    Both,
}

#[derive(Subcommand)]
enum InvCmd {
    /// Homogeneous summands Q^(m) and N^(m) of the formal inverse
    Series {
        #[arg(long, value_name = "FILE")]
        potential: PathBuf,
        /// Number of variables (default: inferred from the text)
        #[arg(long)]
        n: Option<usize>,
        #[arg(long)]
        mmax: u32,
        #[arg(long, value_enum, default_value_t = MethodArg::Zhao)]
        method: MethodArg,
    },
    /// Invert X - grad P via the gap theorem window [M+1, 2M]
    Gap {
        #[arg(long, value_name = "FILE")]
        potential: PathBuf,
        #[arg(long)]
        n: Option<usize>,
        #[arg(long = "M")]
        window_m: u32,
        /// Verify F o G = G o F = X by truncated composition
        #[arg(long)]
        verify: bool,
    },
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum SelftestLevel {
    Quick,
    Paper,
    Extended,
}

impl std::fmt::Display for SelftestLevel {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            SelftestLevel::Quick => "quick",
            SelftestLevel::Paper => "paper",
            SelftestLevel::Extended => "extended",
        })
    }
}

/// A command failure carrying the process exit code.
pub struct Failure {
    pub code: u8,
    pub message: String,
}

impl Failure {
    fn usage(message: impl Into<String>) -> Self {
        Failure {
            code: EXIT_USAGE,
            message: message.into(),
        }
    }

    fn verify(message: impl Into<String>) -> Self {
        Failure {
            code: EXIT_VERIFY,
            message: message.into(),
        }
    }
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let code = match &e {
            Error::ResourceLimit(_) => EXIT_GUARD,
            Error::Inconsistency(_) => EXIT_VERIFY,
            _ => EXIT_USAGE,
        };
        Failure {
            code,
            message: e.to_string(),
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    configure_threads(cli.threads);
    match run(&cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => {
            eprintln!("error: {}", f.message);
            ExitCode::from(f.code)
        }
    }
}

fn configure_threads(arg: Option<usize>) {
    let n = arg.or_else(|| {
        std::env::var("GLTREES_THREADS")
            .ok()
            .and_then(|v| v.parse().ok())
    });
    if let Some(n) = n {
        let _ = rayon::ThreadPoolBuilder::new().num_threads(n).build_global();
    }
}

fn run(cli: &Cli) -> Result<(), Failure> {
    match &cli.command {
        Command::Trees { cmd } => run_trees(cli, cmd),
        Command::Gl { cmd } => run_gl(cli, cmd),
        Command::Quot { cmd } => run_quot(cli, cmd),
        Command::Poly { cmd } => run_poly(cli, cmd),
        Command::Inv { cmd } => run_inv(cli, cmd),
        Command::Selftest { level } => selftest::run(cli, *level),
    }
}

fn emit<P: Serialize>(cli: &Cli, cert: &Certificate<P>, human: impl FnOnce()) -> Result<(), Failure> {
    if cli.json {
        println!("{}", cert.to_json());
    } else {
        human();
    }
    if let Some(dir) = &cli.out {
        let path = cert.write(dir).map_err(|e| Failure {
            code: EXIT_GUARD,
            message: format!("cannot write certificate: {e}"),
        })?;
        eprintln!("certificate written to {}", path.display());
    }
    Ok(())
}

#[derive(Serialize)]
struct EnumPayload {
    vertices: u32,
    rooted: bool,
    count: usize,
    codes: Vec<String>,
}

#[derive(Serialize)]
struct AutPayload {
    code: String,
    rooted: bool,
    aut_order: String,
}

#[derive(Serialize)]
struct ChainPayload {
    code: String,
    r: u32,
    has_naked_chain: bool,
}

fn run_trees(cli: &Cli, cmd: &TreesCmd) -> Result<(), Failure> {
    match cmd {
        TreesCmd::Enum { vertices, rooted } => {
            let codes: Vec<String> = if *rooted {
                trees::enumerate_rooted(*vertices)?
                    .iter()
                    .map(|t| t.code().to_string())
                    .collect()
            } else {
                trees::enumerate_free(*vertices)?
                    .iter()
                    .map(|t| t.code().to_string())
                    .collect()
            };
            let payload = EnumPayload {
                vertices: *vertices,
                rooted: *rooted,
                count: codes.len(),
                codes,
            };
            let cert = Certificate::new(
                "trees enum",
                format!("trees-enum-{}{}", payload.vertices, if *rooted { "-rooted" } else { "" }),
                payload,
            );
            emit(cli, &cert, || {
                for code in &cert.payload.codes {
                    println!("{code}");
                }
            })
        }
        TreesCmd::Aut { code, rooted } => {
            let payload = if *rooted {
                let t = RootedTree::parse(code)?;
                AutPayload {
                    code: t.code().to_string(),
                    rooted: true,
                    aut_order: t.aut_order().to_string(),
                }
            } else {
                let t = FreeTree::parse(code)?;
                AutPayload {
                    code: t.code().to_string(),
                    rooted: false,
                    aut_order: t.aut_order().to_string(),
                }
            };
            let cert = Certificate::new("trees aut", format!("trees-aut-{}", short_tag(code)), payload);
            emit(cli, &cert, || println!("{}", cert.payload.aut_order))
        }
        TreesCmd::Chain { code, r } => {
            if *r < 2 {
                return Err(Failure::usage("--r must be at least 2"));
            }
            let t = FreeTree::parse(code)?;
            let payload = ChainPayload {
                code: t.code().to_string(),
                r: *r,
                has_naked_chain: t.has_naked_chain(*r),
            };
            let cert = Certificate::new(
                "trees chain",
                format!("trees-chain-{}-r{}", short_tag(code), r),
                payload,
            );
            emit(cli, &cert, || println!("{}", cert.payload.has_naked_chain))
        }
    }
}

/// Stable filename fragment for a user-supplied code.
fn short_tag(code: &str) -> String {
    use sha2::Digest;
    let mut h = sha2::Sha256::new();
    h.update(code.as_bytes());
    let digest = h.finalize();
    digest[..4].iter().map(|b| format!("{b:02x}")).collect()
}

#[derive(Serialize)]
struct GlTerm {
    coeff: String,
    tree: String,
}

#[derive(Serialize)]
struct GlPayload {
    left: String,
    right: String,
    module: bool,
    terms: Vec<GlTerm>,
}

fn run_gl(cli: &Cli, cmd: &GlCmd) -> Result<(), Failure> {
    let GlCmd::Product {
        code_s,
        code_t,
        module,
    } = cmd;
    let s = RootedTree::parse(code_s)?;
    let terms: Vec<GlTerm> = if *module {
        let t = FreeTree::parse(code_t)?;
        gl::gl_act_basis(&s, &t)?
            .iter()
            .map(|(tree, c)| GlTerm {
                coeff: c.to_string(),
                tree: tree.code().to_string(),
            })
            .collect()
    } else {
        let t = RootedTree::parse(code_t)?;
        gl::gl_product_basis(&s, &t)?
            .iter()
            .map(|(tree, c)| GlTerm {
                coeff: c.to_string(),
                tree: tree.code().to_string(),
            })
            .collect()
    };
    let payload = GlPayload {
        left: s.code().to_string(),
        right: code_t.clone(),
        module: *module,
        terms,
    };
    let cert = Certificate::new(
        "gl product",
        format!(
            "gl-product-{}-{}{}",
            short_tag(code_s),
            short_tag(code_t),
            if *module { "-module" } else { "" }
        ),
        payload,
    );
    emit(cli, &cert, || {
        for term in &cert.payload.terms {
            println!("{} * {}", term.coeff, term.tree);
        }
    })
}

fn rank_options(common: &QuotCommon, nu: bool) -> RankOptions {
    RankOptions {
        mode: common.mode.into(),
        check_nu: nu,
        override_guards: common.force,
        ..RankOptions::default()
    }
}

fn run_quot(cli: &Cli, cmd: &QuotCmd) -> Result<(), Failure> {
    match cmd {
        QuotCmd::Rank { common, m, nu } => {
            let params = QuotientParams::new(common.r, common.e, *m)?;
            let opts = rank_options(common, *nu);
            if opts.mode == GeneratorMode::Primitive {
                let validation = quotient::validate_primitive_mode(common.r, common.e, 8)?;
                if !validation.matches() {
                    eprintln!(
                        "note: primitive mode failed validation against the full mode \
                         on degrees <= 8; reported ranks are lower bounds and only a \
                         zero quotient dimension or a positive nu membership is conclusive"
                    );
                }
            }
            let report = quotient::graded_rank(params, &opts)?;
            let elapsed = report.elapsed_ms;
            let cert = Certificate::new(
                "quot rank",
                format!("quot-rank-r{}-e{}-m{}-{}", common.r, common.e, m, report.mode),
                report,
            );
            emit(cli, &cert, || {
                let r = &cert.payload;
                println!("dim M_{} = {}", r.m, r.dim_m);
                println!(
                    "spanning rows: {} high-degree + {} products ({} chain generators), mode {}",
                    r.high_degree_count, r.product_vector_count, r.chain_generator_count, r.mode
                );
                println!("rank N({},{})_{} = {}", r.r, r.e, r.m, r.rank);
                println!("dim quotient = {}", r.dim_quotient);
                if let Some(b) = r.nu_in_submodule {
                    println!("nu_{} in submodule: {}", r.m, b);
                }
                println!("content hash: {}", r.content_hash);
                eprintln!("elapsed: {elapsed} ms");
            })
        }
        QuotCmd::Window { common, window_m } => {
            let opts = rank_options(common, true);
            let report = quotient::gap_window_check(common.r, common.e, *window_m, &opts)?;
            let elapsed = report.elapsed_ms;
            let cert = Certificate::new(
                "quot window",
                format!("quot-window-r{}-e{}-M{}", common.r, common.e, window_m),
                report,
            );
            emit(cli, &cert, || {
                let w = &cert.payload;
                for en in &w.entries {
                    println!(
                        "m={}: nu vanishes: {} (rank {}, dim quotient {}, mode {})",
                        en.m, en.nu_vanishes, en.rank, en.dim_quotient, en.mode
                    );
                }
                println!("verdict: {}", w.verdict);
                println!("content hash: {}", w.content_hash);
                eprintln!("elapsed: {elapsed} ms");
            })?;
            if !cert.payload.verdict {
                return Err(Failure::verify(format!(
                    "nu does not vanish everywhere in the window [{}, {}]",
                    window_m + 1,
                    2 * window_m
                )));
            }
            Ok(())
        }
    }
}

/// Infer the variable count from the largest x-index in the text.
fn infer_var_count(text: &str) -> Option<usize> {
    let bytes = text.as_bytes();
    let mut best = None;
    let mut i = 0;
    while i < bytes.len() {
        if bytes[i] == b'x' {
            let start = i + 1;
            let mut end = start;
            while end < bytes.len() && bytes[end].is_ascii_digit() {
                end += 1;
            }
            if end > start {
                if let Ok(k) = text[start..end].parse::<usize>() {
                    best = Some(best.map_or(k, |b: usize| b.max(k)));
                }
            }
            i = end;
        } else {
            i += 1;
        }
    }
    best
}

fn load_potential(path: &PathBuf, n: Option<usize>) -> Result<(Polynomial, usize), Failure> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| Failure::usage(format!("cannot read {}: {e}", path.display())))?;
    let n = match n {
        Some(n) => n,
        None => infer_var_count(&text)
            .ok_or_else(|| Failure::usage("cannot infer --n: no variables in the input"))?,
    };
    Ok((parse_poly(&text, n)?, n))
}

#[derive(Serialize)]
struct HessPayload {
    n: usize,
    potential: String,
    hessian: Vec<Vec<String>>,
    symmetric: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    nilpotent: Option<NilpotentPayload>,
}

#[derive(Serialize)]
struct NilpotentPayload {
    r: u32,
    is_zero_power: bool,
}

fn run_poly(cli: &Cli, cmd: &PolyCmd) -> Result<(), Failure> {
    let PolyCmd::Hess { file, nilpotent, n } = cmd;
    let (p, n) = load_potential(file, *n)?;
    let hess = p.hessian();
    let payload = HessPayload {
        n,
        potential: p.to_string(),
        hessian: (0..n)
            .map(|i| (0..n).map(|j| hess.entry(i, j).to_string()).collect())
            .collect(),
        symmetric: hess.is_symmetric(),
        nilpotent: nilpotent.map(|r| NilpotentPayload {
            r,
            is_zero_power: poly::mat_nilpotent(&hess, r),
        }),
    };
    let cert = Certificate::new(
        "poly hess",
        format!("poly-hess-{}", short_tag(&payload.potential)),
        payload,
    );
    emit(cli, &cert, || {
        for row in &cert.payload.hessian {
            println!("[{}]", row.join(", "));
        }
        if let Some(nil) = &cert.payload.nilpotent {
            println!("Hess(P)^{} = 0: {}", nil.r, nil.is_zero_power);
        }
    })
}

#[derive(Serialize)]
struct SeriesTerm {
    m: u32,
    degree: Option<u32>,
    q: String,
    n_map: Vec<String>,
}

#[derive(Serialize)]
struct SeriesPayload {
    n: usize,
    method: String,
    potential: String,
    /// d, where P is homogeneous of degree d+1.
    degree_d: u32,
    terms: Vec<SeriesTerm>,
}

fn series_payload(series: &inverse::InverseSeries, n: usize) -> SeriesPayload {
    SeriesPayload {
        n,
        method: series.method.to_string(),
        potential: series.potential.to_string(),
        degree_d: series.degree_d,
        terms: (1..=series.m_max())
            .map(|m| SeriesTerm {
                m,
                degree: series.q(m).homogeneous_degree(),
                q: series.q(m).to_string(),
                n_map: series
                    .n_map(m)
                    .components()
                    .iter()
                    .map(|c| c.to_string())
                    .collect(),
            })
            .collect(),
    }
}

#[derive(Serialize)]
struct GapPayload {
    n: usize,
    potential: String,
    window_m: u32,
    invertible: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    inverse: Option<Vec<String>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    inverse_degree: Option<u32>,
    #[serde(skip_serializing_if = "Option::is_none")]
    verified: Option<bool>,
}

fn run_inv(cli: &Cli, cmd: &InvCmd) -> Result<(), Failure> {
    match cmd {
        InvCmd::Series {
            potential,
            n,
            mmax,
            method,
        } => {
            let (p, n) = load_potential(potential, *n)?;
            let series = match method {
                MethodArg::Tree => inverse::q_series_tree(&p, *mmax)?,
                MethodArg::Zhao => inverse::q_series_zhao(&p, *mmax)?,
                MethodArg::Both => {
                    let tree = inverse::q_series_tree(&p, *mmax)?;
                    let zhao = inverse::q_series_zhao(&p, *mmax)?;
                    for m in 1..=*mmax {
                        if tree.q(m) != zhao.q(m) {
                            return Err(Failure::verify(format!(
                                "tree formula and Zhao recursion disagree on Q^({m})"
                            )));
                        }
                    }
                    tree
                }
            };
            let method_name = match method {
                MethodArg::Both => "both".to_string(),
                _ => series.method.to_string(),
            };
            let mut payload = series_payload(&series, n);
            payload.method = method_name;
            let cert = Certificate::new(
                "inv series",
                format!(
                    "inv-series-{}-m{}-{}",
                    short_tag(&payload.potential),
                    mmax,
                    payload.method
                ),
                payload,
            );
            emit(cli, &cert, || {
                for term in &cert.payload.terms {
                    match term.degree {
                        Some(d) => println!("Q^({}) = {}   (degree {})", term.m, term.q, d),
                        None => println!("Q^({}) = 0", term.m),
                    }
                    println!("N^({}) = ({})", term.m, term.n_map.join(", "));
                }
            })
        }
        InvCmd::Gap {
            potential,
            n,
            window_m,
            verify,
        } => {
            let (p, n) = load_potential(potential, *n)?;
            let inverse_map = inverse::gap_invert(&p, *window_m)?;
            let mut payload = GapPayload {
                n,
                potential: p.to_string(),
                window_m: *window_m,
                invertible: inverse_map.is_some(),
                inverse: None,
                inverse_degree: None,
                verified: None,
            };
            if let Some(g) = &inverse_map {
                payload.inverse = Some(
                    g.components()
                        .iter()
                        .map(|c| c.to_string())
                        .collect(),
                );
                let deg_g = g
                    .components()
                    .iter()
                    .filter_map(Polynomial::total_degree)
                    .max()
                    .unwrap_or(1);
                payload.inverse_degree = Some(deg_g);
                if *verify {
                    let f = build_special_map(&p)?;
                    let deg_f = p.total_degree().unwrap_or(2) - 1;
                    let trunc = deg_f * deg_g;
                    payload.verified = Some(inverse::verify_inverse(&f, g, trunc)?);
                }
            }
            let cert = Certificate::new(
                "inv gap",
                format!("inv-gap-{}-M{}", short_tag(&payload.potential), window_m),
                payload,
            );
            emit(cli, &cert, || {
                let g = &cert.payload;
                if g.invertible {
                    println!("window Q^({}..{}) vanishes; inverse found", window_m + 1, 2 * window_m);
                    for (i, comp) in g.inverse.as_ref().unwrap().iter().enumerate() {
                        println!("G_{} = {}", i + 1, comp);
                    }
                    println!("degree of inverse: {}", g.inverse_degree.unwrap());
                    if let Some(v) = g.verified {
                        println!("verified F o G = G o F = X: {v}");
                    }
                } else {
                    println!(
                        "window Q^({}..{}) does not vanish; no gap inverse",
                        window_m + 1,
                        2 * window_m
                    );
                }
            })?;
            if cert.payload.verified == Some(false) {
                return Err(Failure::verify("inverse verification failed"));
            }
            Ok(())
        }
    }
}

/// The map `F = X - grad P`.
fn build_special_map(p: &Polynomial) -> Result<PolyMap, Failure> {
    let n = p.var_count();
    let id = PolyMap::identity(n)?;
    Ok(id.add(&p.gradient().neg())?)
}
