use std::fs::File;
use std::io::BufReader;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use serde_json::json;
use x0cubic_core::{bounds, hecke, numth, sieve, EcDb, Error, SieveConfig, Verdict};

mod render;

/// Which modular curves X_0(N) have infinitely many cubic points, with
/// replayable certificates.
#[derive(Parser, Debug)]
#[command(name = "x0cubic", version)]
struct Cli {
    /// Curve table (defaults to the bundled one).
    #[arg(long, global = true, env = "X0CUBIC_DATA")]
    data: Option<PathBuf>,

    /// Comma-separated prime pool for the bound rules.
    #[arg(long, global = true, value_delimiter = ',', conflicts_with = "pmax")]
    primes: Option<Vec<u64>>,

    /// Use every prime up to this bound as the pool.
    #[arg(long, global = true)]
    pmax: Option<u64>,

    /// Upper end of the generic scan run by verify-theorem.
    #[arg(long, global = true, default_value_t = 3000)]
    scan_max: u64,

    /// Structured (JSON) output.
    #[arg(long, global = true)]
    json: bool,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Classify one level N <= 300 and print its certificate.
    Classify { level: u64 },
    /// Levels in [A, B] (A >= 300) that no pool prime shows to be non-trielliptic.
    Scan { start: u64, end: u64 },
    /// Classify every level up to 300, scan up to --scan-max, compare with the expected list.
    VerifyTheorem,
    /// Trace of T_m on weight-2 cusp forms for Gamma_0(N).
    Trace { level: u64, m: u64 },
    /// |X_0(N)(F_{p^n})| for n in {1, 2}.
    Count { level: u64, p: u64, n: u32 },
    /// Numerator of the zeta function of X_0(N) at p.
    Zeta { level: u64, p: u64 },
}

/// 0: verified, 2: unresolved or mismatch, 1: usage or data error.
enum Status {
    Ok,
    Unresolved,
}

impl Cli {
    fn config(&self) -> Result<SieveConfig, Error> {
        let mut config = SieveConfig {
            scan_max: self.scan_max,
            ..SieveConfig::default()
        };
        if let Some(primes) = &self.primes {
            config.prime_pool = primes.clone();
        } else if let Some(pmax) = self.pmax {
            config.prime_pool = numth::primes_between(2, pmax);
        }
        config.validate()?;
        Ok(config)
    }

    fn db(&self) -> Result<EcDb, String> {
        match &self.data {
            None => Ok(EcDb::bundled()),
            Some(path) => {
                let file =
                    File::open(path).map_err(|e| format!("cannot open {}: {e}", path.display()))?;
                EcDb::load(BufReader::new(file)).map_err(|e| format!("{}: {e}", path.display()))
            }
        }
    }
}

fn print_json(value: &impl serde::Serialize) {
    println!(
        "{}",
        serde_json::to_string_pretty(value).expect("serialisable")
    );
}

fn run(cli: &Cli) -> Result<Status, String> {
    let err = |e: Error| e.to_string();
    match cli.command {
        Command::Classify { level } => {
            let config = cli.config().map_err(err)?;
            let db = cli.db()?;
            let cert = sieve::classify(level, &db, &config).map_err(err)?;
            if cli.json {
                print_json(&cert);
            } else {
                print!("{}", render::certificate(&cert));
            }
            Ok(match cert.verdict {
                Verdict::Unresolved => Status::Unresolved,
                _ => Status::Ok,
            })
        }
        Command::Scan { start, end } => {
            let config = cli.config().map_err(err)?;
            let survivors =
                bounds::scan_not_trielliptic(start, end, &config.prime_pool).map_err(err)?;
            if cli.json {
                print_json(&json!({
                    "range": [start, end],
                    "prime_pool": config.prime_pool,
                    "survivors": survivors,
                }));
            } else {
                println!(
                    "scan [{start}, {end}] with primes {}: {}",
                    render::list(&config.prime_pool),
                    if survivors.is_empty() {
                        "no survivors".to_string()
                    } else {
                        format!("survivors {}", render::list(&survivors))
                    }
                );
            }
            Ok(if survivors.is_empty() {
                Status::Ok
            } else {
                Status::Unresolved
            })
        }
        Command::VerifyTheorem => {
            let config = cli.config().map_err(err)?;
            let db = cli.db()?;
            let report = sieve::verify_theorem(&db, &config).map_err(err)?;
            if cli.json {
                print_json(&report);
            } else {
                print!("{}", render::report(&report));
            }
            Ok(if report.success {
                Status::Ok
            } else {
                Status::Unresolved
            })
        }
        Command::Trace { level, m } => {
            let t = hecke::trace_tm(level, m).map_err(err)?;
            if cli.json {
                print_json(&t);
            } else {
                println!("Tr T_{m} on S_2(Gamma_0({level})) = {}", t.trace);
            }
            Ok(Status::Ok)
        }
        Command::Count { level, p, n } => {
            let count = hecke::point_count(level, p, n).map_err(err)?;
            if cli.json {
                print_json(
                    &json!({ "level": level, "prime": p, "degree": n, "field_size": p.pow(n), "count": count }),
                );
            } else {
                println!("|X_0({level})(F_{})| = {count}", p.pow(n));
            }
            Ok(Status::Ok)
        }
        Command::Zeta { level, p } => {
            let z = hecke::local_zeta(level, p).map_err(err)?;
            if cli.json {
                print_json(&z);
            } else {
                println!(
                    "Z(X_0({level}) mod {p}, t) = P(t) / ((1 - t)(1 - {p}t))\nP(t) = {}",
                    render::polynomial(&z.numerator_coeffs)
                );
            }
            Ok(Status::Ok)
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) if !e.use_stderr() => {
            // --help and --version
            let _ = e.print();
            return ExitCode::SUCCESS;
        }
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(1);
        }
    };
    match run(&cli) {
        Ok(Status::Ok) => ExitCode::SUCCESS,
        Ok(Status::Unresolved) => ExitCode::from(2),
        Err(msg) => {
            eprintln!("error: {msg}");
            ExitCode::from(1)
        }
    }
}
