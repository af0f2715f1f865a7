use std::path::PathBuf;
use std::process::ExitCode;

use backforth::harness::{self, BfArgs, BfMode, EfArgs, HarnessError, Report, SuiteConfig};
use clap::{Args, Parser, Subcommand};

#[derive(Parser)]
#[command(name = "backforth", version, about = "Back-and-forth games and exact lemma verifiers")]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Args, Default)]
struct Common {
    /// key = value file; flags override it.
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    #[arg(long, global = true)]
    seed: Option<u64>,
    #[arg(long, global = true)]
    degree: Option<u32>,
    #[arg(long, global = true)]
    moments: Option<u32>,
    #[arg(long, global = true)]
    radius: Option<usize>,
    #[arg(long, global = true)]
    wordlen: Option<usize>,
    #[arg(long, global = true)]
    alpha: Option<u32>,
    /// Support cap for suites, rank cap for `bf`, net cap for `ralpha`.
    #[arg(long, global = true)]
    cap: Option<usize>,
    /// Write the report here instead of stdout.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
}

#[derive(Args, Default)]
struct Suite {
    /// Recipe names, comma-separated or repeated.
    #[arg(long)]
    recipe: Vec<String>,
    #[arg(long)]
    count: Option<usize>,
    #[arg(long)]
    vars: Option<usize>,
    #[arg(long)]
    terms: Option<usize>,
    /// Coefficient algebra for `crossed`, e.g. `scalars` or `mm(2:1)`.
    #[arg(long)]
    algebra: Option<String>,
    /// Group (or algebra) of a custom left side.
    #[arg(long)]
    left: Option<String>,
    #[arg(long)]
    left_tuple: Option<String>,
    #[arg(long)]
    right: Option<String>,
    #[arg(long)]
    right_tuple: Option<String>,
    /// Spoiler tuple in the left algebra; repeatable.
    #[arg(long)]
    left_pool: Vec<String>,
    #[arg(long)]
    right_pool: Vec<String>,
    /// Net mesh for `ralpha`.
    #[arg(long)]
    eps: Option<f64>,
    /// `lipschitz`, `universal` or `universal(c1,...)`.
    #[arg(long)]
    modulus: Option<String>,
    /// Explicit polynomial; repeatable.
    #[arg(long)]
    poly: Vec<String>,
}

#[derive(Subcommand)]
enum Cmd {
    /// Back-and-forth relations on structure files.
    Bf {
        #[arg(long, default_value = "sym")]
        mode: String,
        #[arg(long)]
        left_tuple: Option<String>,
        #[arg(long)]
        right_tuple: Option<String>,
        /// Formula pool for `--mode karp`.
        #[arg(long)]
        pool: Option<PathBuf>,
        #[arg(long, default_value_t = 60)]
        pool_size: usize,
        files: Vec<PathBuf>,
        #[command(flatten)]
        common: Common,
    },
    /// EF game winner for a formula file.
    Ef {
        #[arg(long)]
        formulas: PathBuf,
        #[arg(long, default_value_t = 2)]
        rounds: usize,
        files: Vec<PathBuf>,
        #[command(flatten)]
        common: Common,
    },
    /// Trace equality suite.
    Lemma32(SuiteCmd),
    /// Moment and norm equality suite.
    Lemma33(SuiteCmd),
    /// Crossed-product trace equality suite.
    Crossed(SuiteCmd),
    /// r_0 lower bounds.
    R0(SuiteCmd),
    /// r_alpha lower bounds.
    Ralpha(SuiteCmd),
    /// Quick checks of every module.
    Selftest(SuiteCmd),
}

#[derive(Args)]
struct SuiteCmd {
    #[command(flatten)]
    suite: Suite,
    #[command(flatten)]
    common: Common,
}

fn suite_config(s: &Suite, c: &Common) -> Result<SuiteConfig, HarnessError> {
    let mut cfg = match &c.config {
        Some(p) => SuiteConfig::from_text(
            &std::fs::read_to_string(p).map_err(|e| HarnessError::Input(format!("{}: {e}", p.display())))?,
        )?,
        None => SuiteConfig::default(),
    };
    let mut flags: Vec<(&str, String)> = Vec::new();
    let mut opt = |k: &'static str, v: Option<String>| {
        if let Some(v) = v {
            flags.push((k, v));
        }
    };
    opt("seed", c.seed.map(|x| x.to_string()));
    opt("degree", c.degree.map(|x| x.to_string()));
    opt("moments", c.moments.map(|x| x.to_string()));
    opt("radius", c.radius.map(|x| x.to_string()));
    opt("wordlen", c.wordlen.map(|x| x.to_string()));
    opt("alpha", c.alpha.map(|x| x.to_string()));
    opt("cap", c.cap.map(|x| x.to_string()));
    opt("out", c.out.as_ref().map(|p| p.display().to_string()));
    opt("count", s.count.map(|x| x.to_string()));
    opt("vars", s.vars.map(|x| x.to_string()));
    opt("terms", s.terms.map(|x| x.to_string()));
    opt("algebra", s.algebra.clone());
    opt("left", s.left.clone());
    opt("left-tuple", s.left_tuple.clone());
    opt("right", s.right.clone());
    opt("right-tuple", s.right_tuple.clone());
    opt("eps", s.eps.map(|x| x.to_string()));
    opt("modulus", s.modulus.clone());
    // List flags replace the file's list rather than extending it.
    if !s.recipe.is_empty() {
        cfg.recipes.clear();
    }
    if !s.left_pool.is_empty() {
        cfg.left_pool.clear();
    }
    if !s.right_pool.is_empty() {
        cfg.right_pool.clear();
    }
    if !s.poly.is_empty() {
        cfg.polys.clear();
    }
    for (k, vs) in [("recipe", &s.recipe), ("left-pool", &s.left_pool), ("right-pool", &s.right_pool), ("poly", &s.poly)] {
        flags.extend(vs.iter().map(|v| (k, v.clone())));
    }
    for (k, v) in flags {
        cfg.set(k, &v)?;
    }
    Ok(cfg)
}

fn run(cli: Cli) -> Result<(Report, Option<PathBuf>), HarnessError> {
    Ok(match cli.cmd {
        Cmd::Bf { mode, left_tuple, right_tuple, pool, pool_size, files, common } => {
            let args = BfArgs {
                mode: mode.parse::<BfMode>()?,
                files,
                left_tuple,
                right_tuple,
                alpha: common.alpha.unwrap_or(1),
                cap: common.cap.unwrap_or(3) as u32,
                pool,
                pool_size,
                seed: common.seed.unwrap_or(1),
            };
            (harness::cmd_bf(&args)?, common.out)
        }
        Cmd::Ef { formulas, rounds, files, common } => (harness::cmd_ef(&EfArgs { files, formulas, rounds })?, common.out),
        Cmd::Lemma32(c) => suite(c, harness::cmd_lemma32)?,
        Cmd::Lemma33(c) => suite(c, harness::cmd_lemma33)?,
        Cmd::Crossed(c) => suite(c, harness::cmd_crossed)?,
        Cmd::R0(c) => suite(c, harness::cmd_r0)?,
        Cmd::Ralpha(c) => suite(c, harness::cmd_ralpha)?,
        Cmd::Selftest(c) => suite(c, harness::cmd_selftest)?,
    })
}

fn suite(
    c: SuiteCmd,
    f: impl Fn(&SuiteConfig) -> Result<Report, HarnessError>,
) -> Result<(Report, Option<PathBuf>), HarnessError> {
    let cfg = suite_config(&c.suite, &c.common)?;
    Ok((f(&cfg)?, cfg.out.clone()))
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok((report, out)) => {
            let text = report.to_string();
            match out {
                Some(p) => {
                    if let Err(e) = std::fs::write(&p, text) {
                        eprintln!("# error: {}: {e}", p.display());
                        return ExitCode::from(2);
                    }
                }
                None => print!("{text}"),
            }
            ExitCode::from(report.status().code() as u8)
        }
        Err(e) => {
            eprintln!("# error: {e}");
            ExitCode::from(e.status().code() as u8)
        }
    }
}
