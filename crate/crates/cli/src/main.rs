use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{anyhow, bail, Context, Result};
use clap::{Args, Parser, Subcommand};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde_json::{json, Value};

use bruhat_dt::cluster::ClusterTransformation;
use bruhat_dt::dtengine::build_dt;
use bruhat_dt::liematrix::{identity_suite, twist_check, Verdict};
use bruhat_dt::seed::{amalgamate, Seed, SeedJson, VertexId};
use bruhat_dt::tropical::check_dt;
use bruhat_dt::{CartanMatrix, PairWord};

const VERSION: &str = env!("CARGO_PKG_VERSION");

#[derive(Parser)]
#[command(name = "bruhat-dt", version, about = "Cluster seeds and DT transformations of double Bruhat cells")]
struct Cli {
    /// Seed for all pseudo-random sampling.
    #[arg(long, global = true, default_value_t = 0)]
    rng_seed: u64,
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Build or mutate seeds.
    #[command(subcommand)]
    Seed(SeedCmd),
    /// Build or verify the DT transformation of a word.
    #[command(subcommand)]
    Dt(DtCmd),
    /// Compare the twist map with its cluster expression on random points (type A).
    TwistCheck {
        /// Matrix size; the word lives in A_{n-1}.
        #[arg(long)]
        n: usize,
        #[arg(long, allow_hyphen_values = true)]
        word: String,
        #[arg(long, default_value_t = 20)]
        trials: usize,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Run the exact matrix identity suite.
    Identities {
        #[arg(long, default_value_t = 50)]
        trials: usize,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Export files in other formats.
    #[command(subcommand)]
    Export(ExportCmd),
}

#[derive(Args)]
struct WordArgs {
    /// Cartan type label such as A2, B3, G2.
    #[arg(long = "type", conflicts_with = "cartan_file")]
    label: Option<String>,
    /// JSON file with {"entries": [[...]]}.
    #[arg(long)]
    cartan_file: Option<PathBuf>,
    /// Signed letters, e.g. "-1 -2 1 2".
    #[arg(long, allow_hyphen_values = true)]
    word: String,
}

#[derive(Subcommand)]
enum SeedCmd {
    Build {
        #[command(flatten)]
        w: WordArgs,
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long)]
        dot: Option<PathBuf>,
    },
    Mutate {
        /// Seed JSON file.
        #[arg(long)]
        seed: PathBuf,
        /// Vertices to mutate at, in order, e.g. 1:0.
        #[arg(long = "at", required = true, num_args = 1..)]
        at: Vec<String>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

#[derive(Subcommand)]
enum DtCmd {
    Build {
        #[command(flatten)]
        w: WordArgs,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    Verify {
        #[command(flatten)]
        w: WordArgs,
        #[arg(long)]
        out: Option<PathBuf>,
        /// Test hook: verify the identity transformation instead.
        #[arg(long, hide = true)]
        inject_identity: bool,
    },
}

#[derive(Subcommand)]
enum ExportCmd {
    Dot {
        #[arg(long)]
        seed: PathBuf,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

fn cartan(w: &WordArgs) -> Result<CartanMatrix> {
    match (&w.label, &w.cartan_file) {
        (Some(l), None) => Ok(CartanMatrix::from_label(l)?),
        (None, Some(p)) => {
            let src = fs::read_to_string(p).with_context(|| format!("reading {}", p.display()))?;
            Ok(serde_json::from_str(&src).with_context(|| format!("parsing {}", p.display()))?)
        }
        _ => bail!("give one of --type or --cartan-file"),
    }
}

fn pair_word(w: &WordArgs) -> Result<PairWord> {
    let c = cartan(w)?;
    Ok(PairWord::parse(&w.word, &c)?)
}

fn header(rng_seed: u64, cartan: &CartanMatrix, word: &str) -> Value {
    json!({
        "version": VERSION,
        "cartan": serde_json::to_value(cartan).expect("cartan serializes"),
        "word": word,
        "rng_seed": rng_seed,
    })
}

fn emit(out: &Option<PathBuf>, body: &str) -> Result<()> {
    match out {
        Some(p) => fs::write(p, body).with_context(|| format!("writing {}", p.display())),
        None => match writeln!(std::io::stdout(), "{body}") {
            Err(e) if e.kind() != std::io::ErrorKind::BrokenPipe => Err(e.into()),
            _ => Ok(()),
        },
    }
}

fn emit_json(out: &Option<PathBuf>, v: &Value) -> Result<()> {
    emit(out, &serde_json::to_string_pretty(v)?)
}

fn read_seed(p: &Path) -> Result<Seed> {
    let src = fs::read_to_string(p).with_context(|| format!("reading {}", p.display()))?;
    let j: SeedJson = serde_json::from_str(&src).with_context(|| format!("parsing {}", p.display()))?;
    Ok(Seed::from_json(&j)?)
}

/// `Ok(true)` verified, `Ok(false)` falsified, `Err` input error.
fn run(cli: Cli) -> Result<bool> {
    let rs = cli.rng_seed;
    match cli.cmd {
        Cmd::Seed(SeedCmd::Build { w, out, dot }) => {
            let word = pair_word(&w)?;
            let (s, _) = amalgamate(&word);
            emit_json(&out, &serde_json::to_value(s.to_json())?)?;
            if let Some(p) = dot {
                fs::write(&p, s.export_dot()).with_context(|| format!("writing {}", p.display()))?;
            }
            Ok(true)
        }
        Cmd::Seed(SeedCmd::Mutate { seed, at, out }) => {
            let mut s = read_seed(&seed)?;
            for v in &at {
                let id: VertexId = v.parse().map_err(|e| anyhow!("vertex {v}: {e}"))?;
                s = s.mutate(&id)?;
            }
            emit_json(&out, &serde_json::to_value(s.to_json())?)?;
            Ok(true)
        }
        Cmd::Dt(DtCmd::Build { w, out }) => {
            let word = pair_word(&w)?;
            let b = build_dt(&word)?;
            let mut r = header(rs, word.cartan(), &w.word);
            r["mutations"] = json!(b.transformation.mutation_count());
            r["non_reduced_intermediates"] = json!(b.non_reduced_intermediates);
            r["transformation"] = b.transformation.to_json();
            emit_json(&out, &r)?;
            Ok(true)
        }
        Cmd::Dt(DtCmd::Verify { w, out, inject_identity }) => {
            let word = pair_word(&w)?;
            let t = if inject_identity {
                ClusterTransformation::identity(amalgamate(&word).0)
            } else {
                build_dt(&word)?.transformation
            };
            let chk = check_dt(&t)?;
            eprint!("{}", chk.to_text());
            let mut r = header(rs, word.cartan(), &w.word);
            r["mutations"] = json!(t.mutation_count());
            r["check"] = chk.to_json();
            emit_json(&out, &r)?;
            Ok(chk.verdict)
        }
        Cmd::TwistCheck { n, word, trials, out } => {
            if n < 2 {
                bail!("--n must be at least 2");
            }
            let c = CartanMatrix::from_label(&format!("A{}", n - 1))?;
            let pw = PairWord::parse(&word, &c)?;
            if trials == 0 {
                eprintln!("warning: 0 trials, the PASS below is vacuous");
            }
            let mut rng = ChaCha8Rng::seed_from_u64(rs);
            let rep = twist_check(&pw, trials, &mut rng)?;
            let bad = rep.trials.iter().filter(|t| !t.agree).count();
            eprintln!("twist-check [{word}] in SL{n}: {}/{trials} agree, {}", trials - bad, rep.verdict);
            let mut r = header(rs, &c, &word);
            r["report"] = serde_json::to_value(&rep)?;
            emit_json(&out, &r)?;
            Ok(rep.verdict == Verdict::Pass)
        }
        Cmd::Identities { trials, out } => {
            let reps = identity_suite(rs, trials);
            for rep in &reps {
                eprintln!("{} {}", rep.verdict, rep.identity);
            }
            let mut r = json!({ "version": VERSION, "rng_seed": rs, "trials": trials });
            r["identities"] = serde_json::to_value(&reps)?;
            emit_json(&out, &r)?;
            Ok(reps.iter().all(|r| r.verdict == Verdict::Pass))
        }
        Cmd::Export(ExportCmd::Dot { seed, out }) => {
            let s = read_seed(&seed)?;
            emit(&out, s.export_dot().trim_end())?;
            Ok(true)
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 2 } else { 0 });
        }
    };
    match run(cli) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}
