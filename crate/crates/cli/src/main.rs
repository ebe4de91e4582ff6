use std::path::PathBuf;
use std::process::ExitCode;
use std::sync::Arc;

use clap::{Args, Parser, Subcommand};
use serde_json::Value;

use mbs_core::coxeter::{CoxeterDatum, CoxeterType};
use mbs_core::f1::{build_e1, build_e1v};
use mbs_core::fq::eq::build_eq;
use mbs_core::fq::hecke::b_invariant_sub;
use mbs_core::io;
use mbs_core::reps;
use mbs_core::sheaf::MixedBruhatSheaf;
use mbs_core::xi::XiPoset;
use mbs_core::Error;

#[derive(Parser)]
#[command(name = "mbs", version, about = "Mixed Bruhat sheaves: posets, examples and checks")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Clone)]
struct DatumArgs {
    /// Coxeter type: A, B, C or G.
    #[arg(long = "type")]
    type_label: Option<String>,
    #[arg(long)]
    rank: Option<usize>,
}

impl DatumArgs {
    fn datum(&self) -> Result<CoxeterDatum, Error> {
        match (&self.type_label, self.rank) {
            (Some(t), Some(r)) => CoxeterDatum::parse(t, r),
            _ => Err(Error::Config("--type and --rank are required".into())),
        }
    }
}

#[derive(Args, Clone)]
struct OutputArgs {
    /// Print the JSON detail on stdout.
    #[arg(long)]
    json: bool,
    /// Write the JSON detail to this file.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Subcommand)]
enum Command {
    /// Dump the two-sided Coxeter complex with its relations.
    Xi {
        #[command(flatten)]
        datum: DatumArgs,
        #[command(flatten)]
        output: OutputArgs,
    },
    /// Verify a sheaf file: axioms, support, co-support, constructibility.
    Check {
        file: PathBuf,
        #[command(flatten)]
        datum: DatumArgs,
        #[command(flatten)]
        output: OutputArgs,
    },
    /// Build a worked example: e1, e1v:<rep>, eq:<n>:<q>, eq-binv:<n>:<q>.
    Example {
        name: String,
        /// Extra parameters, as in `eq 2 3` or `e1v sign`.
        params: Vec<String>,
        #[command(flatten)]
        datum: DatumArgs,
        #[arg(long)]
        out: Option<PathBuf>,
        /// Allow n = 4.
        #[arg(long)]
        allow_large: bool,
    },
    /// Orbit polynomials and their properties; `--counts q` adds F_q counts in type A.
    Poly {
        #[command(flatten)]
        datum: DatumArgs,
        #[arg(long)]
        counts: Option<u32>,
        #[command(flatten)]
        output: OutputArgs,
    },
    /// Hecke relations on functions on full flags of F_q^n.
    Hecke {
        n: usize,
        q: u32,
        #[arg(long)]
        allow_large: bool,
        #[command(flatten)]
        output: OutputArgs,
    },
    /// Point-level orbit checks for flags of F_q^n.
    Orbits {
        n: usize,
        q: u32,
        #[arg(long)]
        allow_large: bool,
        #[command(flatten)]
        output: OutputArgs,
    },
}

fn guard(n: usize, allow_large: bool) -> Result<(), Error> {
    if n >= 4 && !allow_large {
        return Err(Error::Resource(format!("n = {n} needs --allow-large")));
    }
    Ok(())
}

fn emit(v: &Value, output: &OutputArgs) -> Result<(), Error> {
    let text = io::to_canonical_string(v)?;
    if let Some(path) = &output.out {
        std::fs::write(path, &text).map_err(|e| Error::Config(format!("{}: {e}", path.display())))?;
    }
    if output.json {
        print!("{text}");
    }
    Ok(())
}

fn verdict(pass: bool) -> &'static str {
    if pass {
        "PASS"
    } else {
        "FAIL"
    }
}

fn parse_nq(parts: &[&str]) -> Result<(usize, u32), Error> {
    match parts {
        [n, q] => Ok((
            n.parse().map_err(|_| Error::Config(format!("bad n {n:?}")))?,
            q.parse().map_err(|_| Error::Config(format!("bad q {q:?}")))?,
        )),
        _ => Err(Error::Config("expected <n> <q>".into())),
    }
}

fn build_example(name: &str, params: &[String], datum: &DatumArgs, allow_large: bool) -> Result<MixedBruhatSheaf, Error> {
    let mut parts: Vec<&str> = name.split(':').collect();
    parts.extend(params.iter().map(String::as_str));
    match parts[0] {
        "e1" if parts.len() == 1 => Ok(build_e1(Arc::new(XiPoset::new(datum.datum()?)?)).sheaf),
        "e1v" if parts.len() == 2 => {
            let e1 = build_e1(Arc::new(XiPoset::new(datum.datum()?)?));
            let rep = reps::lookup(&e1.sheaf.poset.complex.group, parts[1])?;
            Ok(build_e1v(&e1, &rep)?.sheaf)
        }
        "eq" => {
            let (n, q) = parse_nq(&parts[1..])?;
            guard(n, allow_large)?;
            Ok(build_eq(n, q)?.sheaf)
        }
        "eq-binv" => {
            let (n, q) = parse_nq(&parts[1..])?;
            guard(n, allow_large)?;
            Ok(b_invariant_sub(&build_eq(n, q)?)?.0)
        }
        _ => Err(Error::Config(format!("unknown example {:?}", parts.join(":")))),
    }
}

fn run(cli: Cli) -> Result<bool, Error> {
    match cli.command {
        Command::Xi { datum, output } => {
            let p = XiPoset::new(datum.datum()?)?;
            let v = io::xi_to_json(&p);
            if !output.json {
                println!("{}: {} elements, {} relations", p.datum().name(), v["element_count"], v["relation_count"]);
            }
            emit(&v, &output)?;
            Ok(true)
        }
        Command::Check { file, datum, output } => {
            let text = std::fs::read_to_string(&file).map_err(|e| Error::Config(format!("{}: {e}", file.display())))?;
            let e = io::parse_mbs(&text)?;
            if datum.type_label.is_some() || datum.rank.is_some() {
                let want = datum.datum()?;
                if want.name() != e.poset.datum().name() {
                    return Err(Error::Parse(format!("$.datum: file holds {}, expected {}", e.poset.datum().name(), want.name())));
                }
            }
            let (v, pass) = io::check_report(&e);
            if !output.json {
                println!("{}", verdict(pass));
                for key in ["mbs", "support", "cosupport", "constructibility"] {
                    println!("{key}: {}", verdict(v[key]["pass"].as_bool() == Some(true)));
                }
                for x in v["mbs"]["violations"].as_array().into_iter().flatten() {
                    println!("  {}: {}", x["axiom"].as_str().unwrap_or(""), x["detail"].as_str().unwrap_or(""));
                }
            }
            emit(&v, &output)?;
            Ok(pass)
        }
        Command::Example { name, params, datum, out, allow_large } => {
            let e = build_example(&name, &params, &datum, allow_large)?;
            let text = io::emit_mbs(&e)?;
            match out {
                Some(path) => {
                    std::fs::write(&path, &text).map_err(|err| Error::Config(format!("{}: {err}", path.display())))?;
                    let p = &e.poset;
                    let dims: Vec<String> = p.ids().map(|m| format!("{}={}", p.label(m), e.dims[m])).collect();
                    println!("wrote {}: {}", path.display(), dims.join(" "));
                }
                None => print!("{text}"),
            }
            Ok(true)
        }
        Command::Poly { datum, counts, output } => {
            let d = datum.datum()?;
            let p = XiPoset::new(d.clone())?;
            let (mut v, mut pass) = io::poly_report(&p);
            if let Some(q) = counts {
                if d.type_label != CoxeterType::A {
                    return Err(Error::Config("point counts need type A".into()));
                }
                let (c, ok) = io::counts_report(d.rank + 1, q)?;
                v["counts"] = c;
                pass &= ok;
            }
            if !output.json {
                println!("{}", verdict(pass));
                for row in v["rows"].as_array().into_iter().flatten() {
                    println!("  {} {} compact={}", row["cell"].as_str().unwrap_or(""), row["coefficients"], row["compact"]);
                }
            }
            emit(&v, &output)?;
            Ok(pass)
        }
        Command::Hecke { n, q, allow_large, output } => {
            guard(n, allow_large)?;
            let (v, pass) = io::hecke_report(n, q)?;
            if !output.json {
                println!("{}", verdict(pass));
                for (k, x) in v["relations"].as_object().into_iter().flatten() {
                    println!("  {k}: {}", verdict(x.as_bool() == Some(true)));
                }
            }
            emit(&v, &output)?;
            Ok(pass)
        }
        Command::Orbits { n, q, allow_large, output } => {
            guard(n, allow_large)?;
            let (v, pass) = io::orbits_report(n, q)?;
            if !output.json {
                println!("{}", verdict(pass));
                println!("  fiber products: {} configurations", v["configurations"]);
                println!("  anodyne projections: {} pairs", v["anodyne_pairs"]);
            }
            emit(&v, &output)?;
            Ok(pass)
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e @ (Error::Axiom(_) | Error::Internal(_))) => {
            eprintln!("error: {e}");
            ExitCode::from(1)
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}
