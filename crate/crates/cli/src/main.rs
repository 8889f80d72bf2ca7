use std::io::Write;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use strata_glue::chars::{compact_generator_ranks, glue, jacquet_symbolic, Slope};
use strata_glue::lambda::{make_ring_auto, CoeffRing};
use strata_glue::padic::orbit_classification_check;
use strata_glue::rep::{jacquet_oracle, FiniteRep};
use strata_glue::repspec::RepSpec;
use strata_glue::sl2::sl2_cohomology;
use strata_glue::verify::{verify_all, DEFAULT_SEED};
use strata_glue::Error;

const GRAMMAR: &str = "\
Representation specs:
  triv                 trivial representation
  st                   Steinberg
  ind(a,b)             Ind_B(|.|^a (x) |.|^b), non-normalized
  ps(a,b)              Ind_B((|.|^a (x) |.|^b) delta_T^{-1/2})
  char(c1,c2)          normalized induction of the characters with values c1, c2 at pi
  absdet^k             |det|^k
  nrd^k                |Nrd|^k (half slope)
  cusp:gl2f2-sign      built-in depth-zero cuspidal table
  cusp:<path>          JSON table {\"group\", \"generators\", \"matrices\"}
Exponents a, b, k are integers or halves such as -1/2; halves need a square root of q mod n.";

#[derive(Parser)]
#[command(name = "strata-glue", version, about = "Gluing functors on Bun_2 over Z/n", after_help = GRAMMAR)]
struct Cli {
    #[command(flatten)]
    config: Config,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Clone)]
struct Config {
    /// Residue characteristic of E (q = p).
    #[arg(long, global = true, default_value_t = 3)]
    p: u64,
    /// Coefficient modulus, Λ = Z/n.
    #[arg(long, global = true, default_value_t = 11)]
    n: u64,
    /// A square root of q in Λ; searched for when omitted.
    #[arg(long = "sqrt-q", global = true)]
    sqrt_q: Option<u64>,
    /// Level m of the finite models.
    #[arg(long, global = true, default_value_t = 2)]
    level: u32,
    /// Precision M, the largest level explored.
    #[arg(long, global = true, default_value_t = 6)]
    precision: u32,
    /// Congruence level k.
    #[arg(long, global = true, default_value_t = 1)]
    k: u32,
    /// Truncation window W.
    #[arg(long, global = true, default_value_t = 1)]
    window: u32,
    #[arg(long, global = true, value_enum, default_value_t = Format::Text)]
    format: Format,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Text,
    Json,
}

#[derive(Subcommand)]
enum Command {
    /// Γ_k orbits on P¹ at levels 2k−1 and 2k against the closed formula.
    Orbits,
    /// H⁰ and H¹ of SL₂ acting on a finite model.
    Sl2coh {
        #[arg(long)]
        rep: String,
    },
    /// The gluing functor applied to a sheaf on the open stratum.
    Glue {
        #[arg(long, default_value = "int")]
        slope: String,
        #[arg(long)]
        rep: String,
    },
    /// The Jacquet module of a finite model by averaging projectors.
    Jacquet {
        #[arg(long)]
        rep: String,
    },
    /// Per-degree ranks of the gluing functor on the compact generator at K_k.
    Ranks,
    /// Run every acceptance check.
    VerifyAll,
}

enum Failure {
    Usage(String),
    Math(String),
    Precision(String),
}

impl Failure {
    fn code(&self) -> u8 {
        match self {
            Self::Usage(_) => 2,
            Self::Math(_) => 3,
            Self::Precision(_) => 4,
        }
    }

    fn message(&self) -> &str {
        match self {
            Self::Usage(m) | Self::Math(m) | Self::Precision(m) => m,
        }
    }
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let msg = e.to_string();
        match e {
            Error::PrecisionExhausted(_) | Error::NotStabilized(_) => Self::Precision(msg),
            Error::BadModulus(_)
            | Error::NotPrime(_)
            | Error::BanalityViolation { .. }
            | Error::BadSqrt { .. }
            | Error::Parse { .. }
            | Error::UnsupportedSpec(_)
            | Error::UnsupportedSubgroup(_)
            | Error::MissingSqrtQ
            | Error::DualNotAvailable(_)
            | Error::LevelMismatch(..)
            | Error::Invalid(_) => Self::Usage(msg),
            _ => Self::Math(msg),
        }
    }
}

impl Config {
    fn ring(&self) -> Result<CoeffRing, Failure> {
        if self.precision < self.level {
            return Err(Failure::Usage(format!("precision {} is below level {}", self.precision, self.level)));
        }
        Ok(make_ring_auto(self.n, self.p, self.sqrt_q)?)
    }
}

fn seed() -> u64 {
    std::env::var("STRATA_GLUE_SEED").ok().and_then(|s| s.parse().ok()).unwrap_or(DEFAULT_SEED)
}

fn emit(format: Format, text: String, value: Value) {
    let out = match format {
        Format::Text => text,
        Format::Json => serde_json::to_string_pretty(&value).expect("json") + "\n",
    };
    let _ = std::io::stdout().write_all(out.as_bytes());
}

fn module_name(factors: &[u64]) -> String {
    if factors.is_empty() {
        "0".into()
    } else {
        factors.iter().map(|d| format!("Z/{d}")).collect::<Vec<_>>().join(" ⊕ ")
    }
}

fn run(cli: Cli) -> Result<(), Failure> {
    let cfg = &cli.config;
    let ring = cfg.ring()?;
    let fmt = cfg.format;
    match cli.command {
        Command::Orbits => {
            let rep = orbit_classification_check(cfg.k, cfg.p)?;
            let mut text = format!("p = {}, k = {}, formula = {}\n", rep.p, rep.k, rep.formula);
            for l in &rep.levels {
                let sizes: Vec<String> = l.orbits.iter().map(|o| format!("{}:{}", o.rep, o.size)).collect();
                text += &format!("level {}: {} orbits [{}]\n", l.m, l.orbit_count, sizes.join(", "));
            }
            text += "PASS\n";
            let value = serde_json::to_value(&rep).expect("json");
            emit(fmt, text, json!({ "report": value, "passed": true }));
        }
        Command::Sl2coh { rep } => {
            let spec = RepSpec::parse(&rep)?;
            let sigma = FiniteRep::from_spec(&ring, &spec, cfg.level)?;
            let c = sl2_cohomology(&sigma)?;
            let text = format!("H0 = {}\nH1 = {}\n", module_name(&c.h0.iso_class()), module_name(&c.h1.iso_class()));
            emit(fmt, text, json!({ "rep": spec.to_string(), "cohomology": c.to_json() }));
        }
        Command::Glue { slope, rep } => {
            let slope: Slope = slope.parse()?;
            let spec = RepSpec::parse(&rep)?;
            let g = glue(&ring, slope, &spec)?;
            emit(fmt, g.to_string(), json!({ "slope": slope.to_string(), "rep": spec.to_string(), "result": g.to_json() }));
        }
        Command::Jacquet { rep } => {
            let spec = RepSpec::parse(&rep)?;
            let sigma = FiniteRep::from_spec(&ring, &spec, cfg.level)?;
            let res = jacquet_oracle(&sigma, Some(cfg.precision))?;
            let pieces: Vec<String> = res.filtration.iter().map(|c| c.to_string()).collect();
            let mut text = format!(
                "rank {} at j = {}\npieces (sub first): {}\nsplit: {}\n",
                res.stabilized_rank,
                res.stabilization_level,
                pieces.join(", "),
                res.split
            );
            let mut value = res.to_json();
            if let Ok(sym) = jacquet_symbolic(&ring, &spec) {
                let names: Vec<String> = sym.pieces.iter().map(|c| c.to_string()).collect();
                let agree = sym.pieces == res.filtration && sym.split == res.split;
                text += &format!("symbolic: {} (split: {}), agree: {agree}\n", names.join(", "), sym.split);
                value["symbolic"] = sym.to_json();
                value["agree"] = json!(agree);
            }
            emit(fmt, text, value);
        }
        Command::Ranks => {
            let c = compact_generator_ranks(cfg.k, cfg.p, cfg.n, cfg.window)?;
            let mut text = format!("|O^x/(1+pi^{}O)| = {}, orbit count = {}\n", c.k, c.units, c.orbit_count);
            for (d, r) in &c.ranks {
                text += &format!("degree {d}: rank {r}\n");
            }
            emit(fmt, text, c.to_json());
        }
        Command::VerifyAll => {
            let outcomes = verify_all(seed());
            let failed: Vec<u32> = outcomes.iter().filter(|o| !o.passed).map(|o| o.id).collect();
            let mut text: String = outcomes.iter().map(|o| o.line() + "\n").collect();
            text += if failed.is_empty() { "PASS\n" } else { "FAIL\n" };
            let value = json!({
                "passed": failed.is_empty(),
                "criteria": outcomes.iter().map(|o| o.to_json()).collect::<Vec<_>>(),
            });
            emit(fmt, text, value);
            if !failed.is_empty() {
                return Err(Failure::Math(format!("failing criteria: {failed:?}")));
            }
        }
    }
    Ok(())
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
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => {
            eprintln!("error: {}", f.message());
            ExitCode::from(f.code())
        }
    }
}
