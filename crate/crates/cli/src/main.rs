use std::fs;
use std::path::PathBuf;
use std::process::ExitCode;

use cartier_core::census::{
    heuristic_nu, intrinsic_cardinality, run_census_pair, verify_cubefree_distribution, verify_squarefree_consequences,
    CensusTable,
};
use cartier_core::heights::{count_lines, run_cell, run_grid, GridCell, GridSpec, HeightCounter};
use cartier_core::verify::{run_verify, VerifyConfig};
use cartier_core::{Budget, Error, Executor, FieldSpec};
use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

#[derive(Parser, Debug)]
#[command(
    name = "cartier",
    version,
    about = "a-number censuses, height counts and verification suites"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Debug)]
struct Common {
    /// Worker threads for enumeration.
    #[arg(long, default_value_t = 1, value_parser = clap::value_parser!(u32).range(1..))]
    workers: u32,
    /// Enumeration cap in work units.
    #[arg(long, default_value_t = 1_000_000_000)]
    budget: u128,
    /// Report path; stdout when omitted.
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long, value_enum, default_value_t = Format::Json)]
    format: Format,
}

#[derive(Args, Debug)]
struct FieldArgs {
    /// Characteristic.
    #[arg(long, default_value_t = 3)]
    p: u32,
    /// Extension degree.
    #[arg(long, default_value_t = 1)]
    k: u32,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Csv,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Exhaustive a-number census of y² = f(x), checked against the closed forms.
    Census {
        #[command(flatten)]
        field: FieldArgs,
        /// Genus, or an inclusive range "lo-hi".
        #[arg(long)]
        g: String,
        /// 1 or 2; both when omitted.
        #[arg(long, value_parser = clap::value_parser!(u8).range(1..=2))]
        epsilon: Option<u8>,
        #[command(flatten)]
        common: Common,
    },
    /// Height counts against their closed forms.
    Heights {
        #[command(flatten)]
        field: FieldArgs,
        /// Grid such as "m<=3,l<=1".
        #[arg(long, conflicts_with_all = ["lines", "m"])]
        grid: Option<String>,
        /// A single (m, l) cell.
        #[arg(long, requires = "l", conflicts_with = "lines")]
        m: Option<u32>,
        #[arg(long, requires = "m")]
        l: Option<u32>,
        /// Include the T and T′ counts.
        #[arg(long)]
        include_t: bool,
        /// Count lines of bounded height instead.
        #[arg(long)]
        lines: bool,
        /// Ambient dimension for --lines.
        #[arg(long, default_value_t = 3, requires = "lines")]
        n: usize,
        /// Largest height for --lines.
        #[arg(long, default_value_t = 2, requires = "lines")]
        kmax: usize,
        #[command(flatten)]
        common: Common,
    },
    /// Intrinsic cardinalities of the a-number strata.
    Moduli {
        #[command(flatten)]
        field: FieldArgs,
        #[arg(long)]
        g: usize,
        #[command(flatten)]
        common: Common,
    },
    /// The random-subspace model ν_j(a).
    Nu {
        #[command(flatten)]
        field: FieldArgs,
        /// Largest j.
        #[arg(long, default_value_t = 2)]
        jmax: usize,
        #[command(flatten)]
        common: Common,
    },
    /// The full verification suite; prints a pass/fail matrix.
    Verify {
        /// Only q = 3 and g ≤ 2.
        #[arg(long)]
        quick: bool,
        /// Machine-readable matrix path.
        #[arg(long)]
        json: Option<PathBuf>,
        #[arg(long, default_value_t = 1, value_parser = clap::value_parser!(u32).range(1..))]
        workers: u32,
        #[arg(long, default_value_t = 1_000_000_000)]
        budget: u128,
    },
}

/// Failure modes mapped to exit statuses.
enum Failure {
    Violation(String),
    Core(Error),
    Io(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Core(e)
    }
}

type Outcome = std::result::Result<bool, Failure>;

fn parse_genus(text: &str) -> Result<Vec<usize>, Failure> {
    let bad = || {
        Failure::Core(Error::Parse {
            input: text.into(),
            reason: "expected N or LO-HI".into(),
        })
    };
    match text.split_once('-') {
        Some((lo, hi)) => {
            let lo: usize = lo.trim().parse().map_err(|_| bad())?;
            let hi: usize = hi.trim().parse().map_err(|_| bad())?;
            if lo > hi {
                return Err(bad());
            }
            Ok((lo..=hi).collect())
        }
        None => Ok(vec![text.trim().parse().map_err(|_| bad())?]),
    }
}

fn emit(common: &Common, json: Value, csv: Option<String>) -> Result<(), Failure> {
    let text = match common.format {
        Format::Json => serde_json::to_string_pretty(&json).expect("serializable") + "\n",
        Format::Csv => {
            csv.ok_or_else(|| Failure::Violation("--format csv is not available for this command".into()))?
        }
    };
    match &common.out {
        Some(p) => fs::write(p, text).map_err(|e| Failure::Io(format!("{}: {e}", p.display()))),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn executor(workers: u32) -> Result<Executor, Failure> {
    Ok(Executor::new(workers as usize)?)
}

fn cmd_census(field: &FieldArgs, g: &str, epsilon: Option<u8>, common: &Common) -> Outcome {
    let genera = parse_genus(g)?;
    let eps: Vec<u8> = epsilon.map_or(vec![1, 2], |e| vec![e]);
    let f = FieldSpec::new(field.p, field.k)?;
    if f.p() != 3 {
        return Err(Error::CharacteristicThreeRequired("curve census").into());
    }
    let exec = executor(common.workers)?;
    let budget = Budget(common.budget);
    let mut tables: Vec<CensusTable> = Vec::new();
    let mut comparisons = Vec::new();
    let mut ok = true;
    for &g in &genera {
        for &e in &eps {
            let (cf, sf) = run_census_pair(&f, g, e, &exec, budget)?;
            for c in verify_cubefree_distribution(&cf)?
                .into_iter()
                .chain(verify_squarefree_consequences(&cf, &sf)?)
            {
                ok &= c.passed();
                if !c.passed() {
                    eprintln!("violated: {c}");
                }
                comparisons.push(c);
            }
            tables.push(cf);
            tables.push(sf);
        }
    }
    let json = json!({
        "tables": tables.iter().map(CensusTable::to_json).collect::<Vec<_>>(),
        "comparisons": comparisons.iter().map(|c| c.to_json()).collect::<Vec<_>>(),
        "passed": ok,
    });
    let mut csv = String::from(CensusTable::CSV_HEADER);
    csv.push('\n');
    for t in &tables {
        for row in t.csv_rows() {
            csv.push_str(&row);
            csv.push('\n');
        }
    }
    emit(common, json, Some(csv))?;
    Ok(ok)
}

#[allow(clippy::too_many_arguments)]
fn cmd_heights(
    field: &FieldArgs,
    grid: Option<&str>,
    cell: Option<(u32, u32)>,
    include_t: bool,
    lines: bool,
    n: usize,
    kmax: usize,
    common: &Common,
) -> Outcome {
    let f = FieldSpec::new(field.p, field.k)?;
    let exec = executor(common.workers)?;
    let budget = Budget(common.budget);
    let cells: Vec<GridCell> = if lines {
        (0..=kmax)
            .map(|k| count_lines(&f, n, k, budget).map(GridCell::Checked))
            .collect::<Result<_, _>>()?
    } else {
        let mut counter = HeightCounter::new(&f, &exec, budget);
        match (grid, cell) {
            (Some(text), _) => run_grid(&mut counter, &GridSpec::parse(text, include_t)?)?,
            (None, Some((m, l))) => run_cell(&mut counter, m, l, include_t)?,
            (None, None) => return Err(Failure::Violation("heights needs --grid, --m/--l or --lines".into())),
        }
    };
    let ok = cells.iter().all(GridCell::passed);
    for c in cells.iter().filter(|c| !c.passed()) {
        eprintln!("mismatch: {}", c.to_json());
    }
    let json = json!({
        "q": f.q().to_string(),
        "cells": cells.iter().map(GridCell::to_json).collect::<Vec<_>>(),
        "passed": ok,
    });
    let mut csv = String::from("name,measured,formula,status\n");
    for c in &cells {
        let row = match c {
            GridCell::Checked(r) => format!(
                "{},{},{},{}",
                quoted(&r.name),
                r.measured,
                cartier_core::rational::rational_string(&r.formula),
                if r.matches { "match" } else { "mismatch" }
            ),
            GridCell::Rejected { name, .. } => format!("{},,,regime rejected", quoted(name)),
        };
        csv.push_str(&row);
        csv.push('\n');
    }
    emit(common, json, Some(csv))?;
    Ok(ok)
}

fn quoted(name: &str) -> String {
    format!("\"{}\"", name.replace('"', "\"\""))
}

fn cmd_moduli(field: &FieldArgs, g: usize, common: &Common) -> Outcome {
    let f = FieldSpec::new(field.p, field.k)?;
    if f.p() != 3 {
        return Err(Error::CharacteristicThreeRequired("curve census").into());
    }
    let exec = executor(common.workers)?;
    let budget = Budget(common.budget);
    let (_, s1) = run_census_pair(&f, g, 1, &exec, budget)?;
    let (_, s2) = run_census_pair(&f, g, 2, &exec, budget)?;
    let report = intrinsic_cardinality(&f, &s1, &s2, &exec, budget)?;
    let ok = report.passed();
    emit(common, report.to_json(), None)?;
    Ok(ok)
}

fn cmd_nu(field: &FieldArgs, jmax: usize, common: &Common) -> Outcome {
    let f = FieldSpec::new(field.p, field.k)?;
    let exec = executor(common.workers)?;
    let mut counter = HeightCounter::new(&f, &exec, Budget(common.budget));
    let mut reports = Vec::new();
    for j in 0..=jmax {
        reports.push(heuristic_nu(&mut counter, j)?);
    }
    let ok = reports.iter().all(|r| r.passed());
    let json = json!({
        "q": f.q().to_string(),
        "reports": reports.iter().map(|r| r.to_json()).collect::<Vec<_>>(),
        "passed": ok,
    });
    emit(common, json, None)?;
    Ok(ok)
}

fn cmd_verify(quick: bool, json_path: Option<&PathBuf>, workers: u32, budget: u128) -> Outcome {
    let exec = executor(workers)?;
    let report = run_verify(
        VerifyConfig {
            quick,
            budget: Budget(budget),
        },
        &exec,
    )?;
    print!("{}", report.matrix());
    for c in &report.criteria {
        for f in &c.failures {
            println!("  criterion {} failed: {f}", c.id);
        }
    }
    if let Some(p) = json_path {
        let text = serde_json::to_string_pretty(&report.to_json()).expect("serializable") + "\n";
        fs::write(p, text).map_err(|e| Failure::Io(format!("{}: {e}", p.display())))?;
    }
    Ok(report.passed())
}

fn run(cli: Cli) -> Outcome {
    match &cli.command {
        Command::Census {
            field,
            g,
            epsilon,
            common,
        } => cmd_census(field, g, *epsilon, common),
        Command::Heights {
            field,
            grid,
            m,
            l,
            include_t,
            lines,
            n,
            kmax,
            common,
        } => cmd_heights(field, grid.as_deref(), m.zip(*l), *include_t, *lines, *n, *kmax, common),
        Command::Moduli { field, g, common } => cmd_moduli(field, *g, common),
        Command::Nu { field, jmax, common } => cmd_nu(field, *jmax, common),
        Command::Verify {
            quick,
            json,
            workers,
            budget,
        } => cmd_verify(*quick, json.as_ref(), *workers, *budget),
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 1 } else { 0 });
        }
    };
    match run(cli) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(Failure::Core(e @ Error::BudgetExceeded { .. })) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
        Err(Failure::Core(e)) => {
            eprintln!("error: {e}");
            ExitCode::from(1)
        }
        Err(Failure::Violation(m) | Failure::Io(m)) => {
            eprintln!("error: {m}");
            ExitCode::from(1)
        }
    }
}
