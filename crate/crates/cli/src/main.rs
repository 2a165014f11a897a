use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use quadfermat::config::{DataMode, RunConfig, API_BASE_ENV, OFFLINE_ENV};
use quadfermat::runner;
use quadfermat::store::Store;
use quadfermat::{report, verify};

use quadfermat_core::frey::ParityCase;
use quadfermat_core::quadfield::FieldSpec;
use quadfermat_core::residue;
use num_traits::Signed;

/// Exponent bounds for generalized Fermat equations over quadratic fields
/// of class number one, by Frey-curve analysis and newform elimination.
#[derive(Parser)]
#[command(name = "quadfermat", version, about)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Clone)]
struct DataOpts {
    /// Work offline: fixtures and cache only (never opens a connection).
    #[arg(long)]
    offline: bool,
    /// Fixture directory (defaults to the bundled set).
    #[arg(long, value_name = "PATH")]
    fixtures: Option<PathBuf>,
    /// Cache directory for fetched documents.
    #[arg(long, value_name = "PATH")]
    cache: Option<PathBuf>,
}

#[derive(Subcommand)]
enum Command {
    /// Arithmetic profile of one field: splitting data, units, the
    /// modulus b, cokernel classes and conductor exponents.
    FieldProfile {
        #[arg(short = 'd', allow_hyphen_values = true)]
        d: i64,
    },
    /// Run newform elimination for a field and parity case; prints the
    /// ledger and the final exponent bound.
    Eliminate {
        #[arg(short = 'd', allow_hyphen_values = true)]
        d: i64,
        /// The case 2 | abc (the default; automatic when 2 ramifies).
        #[arg(long, conflicts_with = "odd_abc")]
        even_abc: bool,
        /// The case 2 coprime to abc (imaginary fields).
        #[arg(long)]
        odd_abc: bool,
        /// Emit the structured JSON ledger instead of text.
        #[arg(long)]
        json: bool,
        /// Only process levels whose key contains this substring.
        #[arg(long, value_name = "SUBSTR")]
        level_filter: Option<String>,
        #[command(flatten)]
        data: DataOpts,
    },
    /// Re-derive every frozen table and fixture-backed ledger; one
    /// pass/fail line per check, nonzero exit on any mismatch.
    VerifyTables {
        #[command(flatten)]
        data: DataOpts,
    },
}

fn build_store(data: &DataOpts) -> Store {
    let fixtures = data
        .fixtures
        .clone()
        .unwrap_or_else(RunConfig::bundled_fixtures);
    let api_base = std::env::var(API_BASE_ENV).ok();
    let env_offline = std::env::var(OFFLINE_ENV).is_ok_and(|v| v != "0");
    let mode = if data.offline || env_offline || api_base.is_none() {
        DataMode::Offline
    } else {
        DataMode::Online
    };
    let mut cfg = RunConfig::offline(fixtures);
    cfg.mode = mode;
    cfg.cache_dir = data.cache.clone();
    cfg.api_base = api_base;
    Store::new(cfg)
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            // clap help/version exit cleanly; anything else is usage
            if e.use_stderr() {
                eprint!("{e}");
                return ExitCode::from(4);
            }
            print!("{e}");
            return ExitCode::SUCCESS;
        }
    };
    match cli.command {
        Command::FieldProfile { d } => field_profile(d),
        Command::Eliminate {
            d,
            odd_abc,
            json,
            level_filter,
            data,
            ..
        } => {
            let parity = if odd_abc {
                ParityCase::OddAbc
            } else {
                ParityCase::EvenAbc
            };
            let store = build_store(&data);
            match runner::run_case(d, parity, &store, level_filter.as_deref()) {
                Ok(ledger) => {
                    if json {
                        print!("{}", report::to_json(&ledger));
                    } else {
                        print!("{}", report::to_text(&ledger));
                        // audit trail: the irreducibility criteria applied,
                        // with the sources of the ingested tables
                        if let Ok(field) = FieldSpec::new(d) {
                            if let Ok(v) =
                                quadfermat_core::galois::irreducibility_bound(&field, parity)
                            {
                                println!("irreducibility criteria (floor {}):", v.effective_floor());
                                for step in &v.method_trace {
                                    println!("  - {}: {} [{}]", step.name, step.outcome, step.source);
                                }
                            }
                        }
                    }
                    ExitCode::from(runner::exit_code_for(&ledger) as u8)
                }
                Err(runner::RunError::UnsupportedParity(d)) => {
                    eprintln!("the odd-abc case is not available for d = {d}");
                    ExitCode::from(4)
                }
                Err(runner::RunError::Store(e)) => {
                    eprintln!("data error: {e}");
                    ExitCode::from(3)
                }
                Err(e) => {
                    eprintln!("error: {e}");
                    ExitCode::from(4)
                }
            }
        }
        Command::VerifyTables { data } => {
            let store = build_store(&data);
            let results = verify::verify_tables(&store);
            let mut failed = 0;
            for r in &results {
                let status = if r.passed { "PASS" } else { "FAIL" };
                println!("[{status}] {}: {}", r.name, r.detail);
                if !r.passed {
                    failed += 1;
                }
            }
            println!(
                "{} checks, {} failed",
                results.len(),
                failed
            );
            if failed == 0 {
                ExitCode::SUCCESS
            } else {
                ExitCode::FAILURE
            }
        }
    }
}

fn field_profile(d: i64) -> ExitCode {
    let field = match FieldSpec::new(d) {
        Ok(f) => f,
        Err(e) => {
            eprintln!("error: {e}");
            return ExitCode::from(4);
        }
    };
    println!(
        "field {} : Q(sqrt({d})), discriminant {}",
        field.label(),
        field.discriminant()
    );
    for p in field.split_rational_prime(2) {
        println!(
            "prime above 2: {} ({:?}, e = {}, f = {}, norm {})",
            p.label(),
            p.split_type,
            p.ramification_index,
            p.residue_degree,
            p.norm
        );
    }
    for (q, _) in quadfermat_core::poly::factor(&num_bigint::BigInt::from(d).abs()) {
        let q: u64 = (&q).try_into().unwrap();
        if q == 2 {
            continue;
        }
        for p in field.split_rational_prime(q) {
            println!("prime above {q}: {} ({:?})", p.label(), p.split_type);
        }
    }
    if field.is_real() {
        match field.fundamental_unit() {
            Ok(u) => println!(
                "fundamental unit: {} (norm {})",
                field.display_sqrt(&u),
                field.norm(&u)
            ),
            Err(e) => println!("fundamental unit: {e}"),
        }
    } else {
        println!("unit group: torsion only");
    }
    let parts = residue::build_b_ideal(&field);
    let b_desc: Vec<String> = parts
        .iter()
        .map(|(p, k)| format!("{}^{}", p.label(), k))
        .collect();
    println!("modulus b = {}", b_desc.join(" * "));
    match residue::unit_square_cokernel(&field, parts) {
        Ok(coker) => {
            println!(
                "unit/square cokernel: order {}, invariants {:?}",
                coker.order(),
                coker.group_invariants
            );
            for (i, rep) in coker.representatives.iter().enumerate() {
                let exps: Vec<String> = coker.class_exponents[i]
                    .iter()
                    .map(|v| {
                        v.iter()
                            .map(|e| e.to_string())
                            .collect::<Vec<_>>()
                            .join(",")
                    })
                    .collect();
                println!(
                    "  class {}: representative {} (as {}), square-class exponents [{}]",
                    i,
                    rep,
                    field.display_sqrt(rep),
                    exps.join(" | ")
                );
            }
            let sharp = coker.sharp_exponents();
            println!("achievable conductor exponents at 2: {sharp:?}");
        }
        Err(e) => println!("cokernel: {e}"),
    }
    match quadfermat_core::frey::lowered_p_exponents(&field) {
        Ok(exps) => println!("level plan exponents at 2: {exps:?}"),
        Err(_) => println!("no level plan for this field"),
    }
    ExitCode::SUCCESS
}
