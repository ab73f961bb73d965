//! Command-line interface: analyze a single knot, batch-process a corpus,
//! or print invariants. Exit codes: 0 = all verdicts computed, 1 = input
//! error, 2 = internal consistency failure.

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};

use knotprime::abelian::branched_cover_homology;
use knotprime::diagram::{fox_jacobian, parse_pd, wirtinger};
use knotprime::error::Error;
use knotprime::jones::jones_bounded;
use knotprime::pipeline::{analyze, batch, Config, CorpusRecord, FieldPolicy, KnotRecord};
use knotprime::poly::alexander_poly;

#[derive(Parser)]
#[command(name = "knotprime", about = "algebraic primality certificates for knots")]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Clone, Copy, ValueEnum)]
enum FieldArg {
    Finite,
    Cyclotomic,
    Both,
}

impl From<FieldArg> for FieldPolicy {
    fn from(f: FieldArg) -> Self {
        match f {
            FieldArg::Finite => FieldPolicy::Finite,
            FieldArg::Cyclotomic => FieldPolicy::Cyclotomic,
            FieldArg::Both => FieldPolicy::Both,
        }
    }
}

#[derive(Subcommand)]
enum Cmd {
    /// Analyze one knot and emit a certificate
    Analyze {
        /// PD code as a bracketed list, or "unknot"
        #[arg(long)]
        pd: String,
        /// Two-variable polynomial as a JSON triple list [[i,j,c],...]
        #[arg(long)]
        omega: Option<String>,
        #[arg(long, value_delimiter = ',', default_value = "2,3,5,7")]
        p_set: Vec<u64>,
        #[arg(long, default_value_t = 200)]
        d_max: u64,
        #[arg(long, value_enum, default_value_t = FieldArg::Finite)]
        field: FieldArg,
        /// Also write the certificate to this path
        #[arg(long)]
        certificate: Option<PathBuf>,
        /// Skip the Jones divisibility stage
        #[arg(long)]
        no_jones: bool,
        /// Knot name recorded in the certificate
        #[arg(long, default_value = "knot")]
        name: String,
    },
    /// Analyze every record of a line-delimited corpus file
    Batch {
        #[arg(long)]
        corpus: PathBuf,
        #[arg(long)]
        report: PathBuf,
        /// Worker threads (default: all cores)
        #[arg(long)]
        jobs: Option<usize>,
    },
    /// Print invariants of a diagram
    Invariants {
        #[arg(long)]
        pd: String,
        /// Comma list from: alexander, jones, homology:p
        #[arg(long)]
        what: String,
    },
}

fn run() -> Result<(), Error> {
    match Cli::parse().cmd {
        Cmd::Analyze { pd, omega, p_set, d_max, field, certificate, no_jones, name } => {
            let omega = match omega {
                Some(text) => Some(serde_json::from_str(&text)?),
                None => None,
            };
            let record =
                KnotRecord::ingest(&CorpusRecord { name, pd, omega, jones: None })?;
            let config = Config {
                p_set,
                d_max,
                field: field.into(),
                enable_jones: !no_jones,
                ..Config::default()
            };
            let cert = analyze(&record, &config)?;
            let text = serde_json::to_string_pretty(&cert)?;
            if let Some(path) = certificate {
                std::fs::write(path, &text)?;
            }
            println!("{text}");
        }
        Cmd::Batch { corpus, report, jobs } => {
            if let Some(n) = jobs {
                rayon::ThreadPoolBuilder::new()
                    .num_threads(n)
                    .build_global()
                    .map_err(|e| Error::Ingestion(e.to_string()))?;
            }
            let text = std::fs::read_to_string(corpus)?;
            let rep = batch(&text, &Config::default());
            std::fs::write(report, serde_json::to_string_pretty(&rep)?)?;
            println!(
                "{} knots, {} quarantined, counts: {}",
                rep.total,
                rep.quarantined.len(),
                serde_json::to_string(&rep.counts)?
            );
        }
        Cmd::Invariants { pd, what } => {
            let pd = parse_pd(&pd)?;
            let pres = wirtinger(&pd)?;
            let jac = fox_jacobian(&pres);
            let mut out = serde_json::Map::new();
            for item in what.split(',') {
                match item.trim() {
                    "alexander" => {
                        let delta = alexander_poly(&jac)?;
                        out.insert("alexander".into(), serde_json::to_value(delta.pairs())?);
                    }
                    "jones" => {
                        let v = jones_bounded(&pd, 24)?;
                        out.insert("jones".into(), serde_json::to_value(v.pairs())?);
                    }
                    other => match other.strip_prefix("homology:") {
                        Some(p) => {
                            let p: u64 = p
                                .parse()
                                .map_err(|_| Error::Ingestion(format!("bad prime {other}")))?;
                            let h = branched_cover_homology(&jac, p)?;
                            out.insert(
                                format!("homology:{p}"),
                                serde_json::to_value(&h.prime_power_divisors)?,
                            );
                        }
                        None => {
                            return Err(Error::Ingestion(format!("unknown invariant {other}")));
                        }
                    },
                }
            }
            println!("{}", serde_json::to_string_pretty(&serde_json::Value::Object(out))?);
        }
    }
    Ok(())
}

fn main() -> ExitCode {
    match run() {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            match e {
                Error::Consistency(_) => ExitCode::from(2),
                _ => ExitCode::from(1),
            }
        }
    }
}
