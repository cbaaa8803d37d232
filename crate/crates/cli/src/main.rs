use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use sclab::experiments::{self, ExperimentConfig, PhaseConfig, RigidityConfig, RunManifest, SliceConfig};
use sclab::quasimorphism::{best_offset_certificate, rigidity_certificate_at, verify_certificate_json};
use sclab::sampling::RandomWordSpec;
use sclab::spectra::{build_digraph, cheeger_constant, spectral_report};
use sclab::tripods::{assemble_upper_bound, default_edge_length};
use sclab::{extract_fatgraph, parse_chain, scl, verify_fatgraph, Alphabet, Error, Mode};

#[derive(Parser)]
#[command(name = "sclab", version, about = "Stable commutator length experiments in free groups")]
struct Cli {
    /// Rank of the free group.
    #[arg(long, global = true, default_value_t = 2)]
    rank: usize,
    /// Base seed; sample i uses seed + i.
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    /// LP mode: exact, inexact or auto.
    #[arg(long, global = true, default_value = "auto")]
    mode: Mode,
    /// Output directory for files.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    /// Rerun the config stored in this manifest instead of the flags.
    #[arg(long, global = true)]
    manifest: Option<PathBuf>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Print seeded random reduced words.
    Sample {
        #[arg(long)]
        n: usize,
        #[arg(long, default_value_t = 1)]
        count: u64,
        /// Condition on lying in the commutator subgroup.
        #[arg(long)]
        conditioned: bool,
    },
    /// Stable commutator length of a chain such as "abAB + 1/2*aabAAB".
    Scl {
        chain: String,
        /// Also build and verify an extremal fatgraph (exact mode).
        #[arg(long)]
        fatgraph: bool,
    },
    /// Counting-quasimorphism lower bound certificate for a word.
    Certify {
        word: String,
        #[arg(long, default_value_t = 0.25)]
        epsilon: f64,
        #[arg(long)]
        offset: Option<usize>,
        /// Try every offset and keep the best bound.
        #[arg(long)]
        best_offset: bool,
    },
    /// Re-check a certificate from its JSON file.
    VerifyCertificate { path: PathBuf },
    /// Tripod fatgraph upper bound for a word.
    TripodUpper {
        word: String,
        #[arg(long)]
        edge_length: Option<usize>,
        #[arg(long, default_value_t = 0.1)]
        epsilon: f64,
        #[arg(long, default_value_t = 1 << 12)]
        budget: u64,
    },
    /// Inverse-subword asymmetry A_ℓ against ℓ.
    Phase {
        #[arg(long, default_value_t = 10_000)]
        n: usize,
        #[arg(long, default_value_t = 10)]
        samples: u64,
        #[arg(long, default_value_t = 11)]
        ell_max: usize,
        #[arg(long)]
        unconditioned: bool,
    },
    /// scl of random commutator words with lower and upper bounds.
    Rigidity {
        #[arg(long, default_value_t = 40)]
        n_min: usize,
        #[arg(long, default_value_t = 60)]
        n_max: usize,
        #[arg(long, default_value_t = 10)]
        step: usize,
        #[arg(long, default_value_t = 20)]
        samples: u64,
        /// Skip the certificate and tripod bounds.
        #[arg(long)]
        scl_only: bool,
    },
    /// scl on a grid in the span of two or three words.
    Slice {
        #[arg(required = true, num_args = 2..=3)]
        words: Vec<String>,
        #[arg(long, default_value_t = 2)]
        grid: u32,
    },
    /// Spectrum of the subword digraph at a level.
    Spectra {
        #[arg(long, default_value_t = 1)]
        level: usize,
        #[arg(long, default_value_t = 12)]
        powers: usize,
        /// Print the transition matrix as sparse triplets instead.
        #[arg(long)]
        triplets: bool,
    },
    /// Cheeger constant of the subword digraph at a level.
    Cheeger {
        #[arg(long, default_value_t = 1)]
        level: usize,
    },
    /// Rerun a manifest and compare output digests.
    Replay { path: PathBuf },
}

enum Failure {
    Lib(Error),
    Usage(String),
    Mismatch(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Lib(e)
    }
}

fn exit_code(e: &Error) -> u8 {
    match e {
        Error::Alphabet { .. } | Error::Rank(_) | Error::Syntax { .. } | Error::Range(_) => 2,
        Error::Capacity(_) | Error::Exhaustion(_) => 4,
        Error::Io(_) | Error::Internal(_) => 1,
        _ => 3,
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Lib(e)) => {
            eprintln!("error: {e}");
            ExitCode::from(exit_code(&e))
        }
        Err(Failure::Usage(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
        Err(Failure::Mismatch(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(3)
        }
    }
}

fn emit(cli: &Cli, name: &str, text: &str) -> Result<(), Failure> {
    match &cli.out {
        Some(dir) => {
            fs::create_dir_all(dir).map_err(|e| Error::Io(e.to_string()))?;
            fs::write(dir.join(name), text).map_err(|e| Error::Io(e.to_string()))?;
            println!("wrote {}", dir.join(name).display());
        }
        None => println!("{text}"),
    }
    Ok(())
}

fn seeds(cli: &Cli, samples: u64) -> Vec<u64> {
    (0..samples).map(|i| cli.seed.wrapping_add(i)).collect()
}

fn out_dir(cli: &Cli, default: &str) -> PathBuf {
    cli.out.clone().unwrap_or_else(|| PathBuf::from(default))
}

fn run_experiment(cli: &Cli, config: ExperimentConfig) -> Result<(), Failure> {
    let out = out_dir(cli, config.command());
    if let Some(path) = &cli.manifest {
        let m = RunManifest::load(path)?;
        if m.command != config.command() {
            return Err(Failure::Usage(format!("manifest is for `{}`, not `{}`", m.command, config.command())));
        }
        return replay_manifest(&m, &out);
    }
    let m = experiments::run(&config, &out)?;
    for o in &m.outputs {
        println!("{}  {}", o.sha256, out.join(&o.file).display());
    }
    println!("manifest {}", out.join("manifest.json").display());
    Ok(())
}

fn replay_manifest(m: &RunManifest, out: &Path) -> Result<(), Failure> {
    let report = experiments::replay(m, out)?;
    for (file, want, got) in &report.files {
        println!("{} {file}", if want == got { "same" } else { "DIFF" });
    }
    if report.identical() {
        Ok(())
    } else {
        Err(Failure::Mismatch("replayed outputs differ from the manifest".into()))
    }
}

fn run(cli: &Cli) -> Result<(), Failure> {
    let alphabet = Alphabet::new(cli.rank)?;
    match &cli.command {
        Command::Sample { n, count, conditioned } => {
            for s in seeds(cli, *count) {
                let mut spec = RandomWordSpec::new(alphabet, *n, s);
                if *conditioned {
                    spec = spec.conditioned();
                }
                println!("{}", spec.sample()?);
            }
        }
        Command::Scl { chain, fatgraph } => {
            let c = parse_chain(chain, &alphabet)?;
            let r = scl(&c, cli.mode)?;
            let mut report = serde_json::json!({
                "chain": c.normalize().to_string(),
                "scl": r.value.to_string(),
                "scl_f64": r.value.to_f64(),
                "mode": r.mode.to_string(),
                "rows": r.rows,
                "columns": r.columns,
                "strong_duality": r.strong_duality_holds(),
            });
            if *fatgraph {
                if r.mode != Mode::Exact {
                    return Err(Failure::Usage("--fatgraph needs an exact solve".into()));
                }
                let fg = extract_fatgraph(&r, &c)?;
                let check = verify_fatgraph(&fg, &c);
                report["fatgraph"] = fg.to_json();
                report["verification"] = serde_json::to_value(&check).expect("report serializes");
            }
            emit(cli, "scl.json", &serde_json::to_string_pretty(&report).expect("json"))?;
        }
        Command::Certify { word, epsilon, offset, best_offset } => {
            let v = alphabet.reduced_word(word)?;
            let cert = if *best_offset {
                best_offset_certificate(&v, cli.rank, *epsilon)?
            } else {
                rigidity_certificate_at(&v, cli.rank, *epsilon, offset.unwrap_or(0))?
            };
            emit(cli, "certificate.json", &cert.to_json())?;
        }
        Command::VerifyCertificate { path } => {
            let text = fs::read_to_string(path).map_err(|e| Error::Io(e.to_string()))?;
            let check = verify_certificate_json(&text)?;
            for c in &check.checks {
                println!("{} {}: {}", if c.passed { "ok  " } else { "FAIL" }, c.name, c.detail);
            }
            match &check.lower_bound {
                Some(lb) if check.passed() => println!("scl >= {lb}"),
                _ => return Err(Failure::Mismatch("certificate did not verify".into())),
            }
        }
        Command::TripodUpper { word, edge_length, epsilon, budget } => {
            let v = alphabet.reduced_word(word)?;
            let l = edge_length.unwrap_or_else(|| default_edge_length(v.len().max(2), cli.rank, *epsilon));
            let a = assemble_upper_bound(&v, l, *budget)?;
            let report = serde_json::json!({
                "upper_bound": a.upper_bound.to_string(),
                "multiplicity": a.multiplicity,
                "edge_length": a.edge_length,
                "tripods": a.tripods,
                "matched_joints": a.matched_joints,
                "short_rectangles": a.short_rectangles,
                "fill_triangles": a.fill_triangles,
            });
            emit(cli, "tripod.json", &serde_json::to_string_pretty(&report).expect("json"))?;
        }
        Command::Phase { n, samples, ell_max, unconditioned } => {
            let cfg = PhaseConfig {
                rank: cli.rank,
                n: *n,
                seeds: seeds(cli, *samples),
                ell_max: *ell_max,
                conditioned: !unconditioned,
            };
            run_experiment(cli, ExperimentConfig::Phase(cfg))?;
        }
        Command::Rigidity { n_min, n_max, step, samples, scl_only } => {
            let mode = match cli.mode {
                Mode::Auto => Mode::Inexact,
                m => m,
            };
            let cfg = RigidityConfig {
                rank: cli.rank,
                n_min: *n_min,
                n_max: *n_max,
                step: *step,
                seeds: seeds(cli, *samples),
                mode,
                scl_only: *scl_only,
                ..RigidityConfig::default()
            };
            run_experiment(cli, ExperimentConfig::Rigidity(cfg))?;
        }
        Command::Slice { words, grid } => {
            let cfg = SliceConfig { rank: cli.rank, words: words.clone(), grid: *grid, mode: cli.mode };
            run_experiment(cli, ExperimentConfig::Slice(cfg))?;
        }
        Command::Spectra { level, powers, triplets } => {
            let g = build_digraph(&alphabet, *level)?;
            if *triplets {
                emit(cli, "transition.txt", &g.to_triplets())?;
            } else {
                emit(cli, "spectra.json", &spectral_report(&g, *powers)?.to_json())?;
            }
        }
        Command::Cheeger { level } => {
            let g = build_digraph(&alphabet, *level)?;
            emit(cli, "cheeger.json", &cheeger_constant(&g, cli.seed).to_json())?;
        }
        Command::Replay { path } => {
            let m = RunManifest::load(path)?;
            replay_manifest(&m, &out_dir(cli, "replay"))?;
        }
    }
    Ok(())
}
