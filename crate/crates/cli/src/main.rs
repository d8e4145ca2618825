//! Command-line surface: load simplices and covers from JSON files, run the covering
//! pipeline, and emit human-readable plus machine-readable reports.
//!
//! Exit codes: 0 = success / covered, 1 = not covered / budget exhausted,
//! 2 = invalid input or violated hypotheses.

use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use num_bigint::BigInt;

use simplex_cover::closure::{is_integrally_closed_up_to, ClosureBudget};
use simplex_cover::coverage::{
    a_coefficients, certify, monte_carlo_convergence, CertStatus, Cover,
};
use simplex_cover::dilation::Dilation;
use simplex_cover::io::{CoverFile, SimplexFile};
use simplex_cover::lattice::LatticeSimplex;
use simplex_cover::strategy::{
    cover_simplex, search_supplementary, CaseTag, SearchBudget, StrategyReport,
};
use simplex_cover::Error;

#[derive(Parser)]
#[command(
    name = "simplex-cover",
    version,
    about = "Cover lattice simplices by dilated lattice simplices, with exact certificates"
)]
struct Cli {
    /// Worker threads for parallel sections (also SIMPLEX_COVER_THREADS); results do
    /// not depend on this.
    #[arg(long, global = true)]
    threads: Option<usize>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct BudgetArgs {
    /// Maximum search rounds before giving up.
    #[arg(long, default_value_t = SearchBudget::default().max_rounds)]
    max_rounds: usize,
    /// Maximum candidate lattice points fed to the membership LP per round.
    #[arg(long, default_value_t = SearchBudget::default().max_candidates_per_round)]
    max_candidates: usize,
    /// Maximum residue classes examined per round.
    #[arg(long, default_value_t = SearchBudget::default().residue_class_cap)]
    max_classes: usize,
}

impl BudgetArgs {
    fn to_budget(&self) -> SearchBudget {
        SearchBudget {
            max_rounds: self.max_rounds,
            max_candidates_per_round: self.max_candidates,
            residue_class_cap: self.max_classes,
        }
    }
}

#[derive(Subcommand)]
enum Command {
    /// Print the edge length matrix, l(P), and the A coefficients.
    Analyze {
        simplex: PathBuf,
        /// Modulus for the A coefficients (default: dim - 1).
        #[arg(short, long)]
        k: Option<u32>,
    },
    /// Construct a cover by the dimension-appropriate strategy and certify it.
    Cover {
        simplex: PathBuf,
        /// Write the constructed cover to this file.
        #[arg(long)]
        out: Option<PathBuf>,
        /// Attempt a best-effort search even when the hypotheses fail.
        #[arg(long)]
        force: bool,
        #[command(flatten)]
        budget: BudgetArgs,
    },
    /// Decide exactly whether a cover file covers the simplex.
    Certify { simplex: PathBuf, cover: PathBuf },
    /// Estimate the uncovered volume fraction by seeded Monte Carlo sampling;
    /// prints CSV (samples, uncovered_count, rate) every 10^4 samples.
    Sample {
        simplex: PathBuf,
        cover: PathBuf,
        #[arg(short = 'n', long, default_value_t = 1_000_000)]
        samples: u64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// Brute-force integral-closedness check up to a dilation factor.
    Closure {
        simplex: PathBuf,
        #[arg(long, default_value_t = 2)]
        rmax: u32,
        /// Cap on lattice points per dilate.
        #[arg(long, default_value_t = ClosureBudget::default().max_points_per_dilate)]
        max_points: usize,
        /// Cap on candidate cells per enumeration.
        #[arg(long, default_value_t = ClosureBudget::default().max_cells)]
        max_cells: u64,
    },
    /// Search for supplementary dilations on top of a base cover.
    Search {
        simplex: PathBuf,
        /// Dilation modulus (default: dim - 1).
        #[arg(short, long)]
        k: Option<u32>,
        /// Base cover file (default: all apex dilations at the modulus).
        #[arg(long)]
        base: Option<PathBuf>,
        /// Write the augmented cover to this file.
        #[arg(long)]
        out: Option<PathBuf>,
        /// Accepted for interface stability; the search itself is deterministic.
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[command(flatten)]
        budget: BudgetArgs,
    },
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let threads = cli.threads.or_else(|| {
        std::env::var("SIMPLEX_COVER_THREADS")
            .ok()
            .and_then(|v| v.parse().ok())
    });
    if let Some(t) = threads {
        if let Err(e) = rayon::ThreadPoolBuilder::new()
            .num_threads(t)
            .build_global()
        {
            eprintln!("warning: could not set thread count: {e}");
        }
    }
    match run(cli.command) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(exit_for_error(&e))
        }
    }
}

/// Maps library errors onto the exit-code contract.
fn exit_for_error(e: &anyhow::Error) -> u8 {
    match e.downcast_ref::<Error>() {
        Some(
            Error::InvalidFile(_)
            | Error::Hypothesis(_)
            | Error::DimensionMismatch { .. }
            | Error::DegenerateSimplex
            | Error::DegenerateEdge
            | Error::IndexOutOfRange { .. },
        ) => 2,
        Some(_) => 1,
        // I/O problems (missing file, unreadable path) are input errors.
        None => 2,
    }
}

fn run(command: Command) -> anyhow::Result<ExitCode> {
    match command {
        Command::Analyze { simplex, k } => cmd_analyze(&simplex, k),
        Command::Cover {
            simplex,
            out,
            force,
            budget,
        } => cmd_cover(&simplex, out.as_deref(), force, &budget.to_budget()),
        Command::Certify { simplex, cover } => cmd_certify(&simplex, &cover),
        Command::Sample {
            simplex,
            cover,
            samples,
            seed,
        } => cmd_sample(&simplex, &cover, samples, seed),
        Command::Closure {
            simplex,
            rmax,
            max_points,
            max_cells,
        } => cmd_closure(&simplex, rmax, max_points, max_cells),
        Command::Search {
            simplex,
            k,
            base,
            out,
            seed,
            budget,
        } => cmd_search(
            &simplex,
            k,
            base.as_deref(),
            out.as_deref(),
            seed,
            &budget.to_budget(),
        ),
    }
}

fn load_simplex(path: &Path) -> anyhow::Result<LatticeSimplex> {
    let text = fs::read_to_string(path)
        .map_err(|e| anyhow::anyhow!("cannot read {}: {e}", path.display()))?;
    Ok(SimplexFile::parse(&text)?)
}

fn load_cover(path: &Path, parent: &LatticeSimplex) -> anyhow::Result<Cover> {
    let text = fs::read_to_string(path)
        .map_err(|e| anyhow::anyhow!("cannot read {}: {e}", path.display()))?;
    Ok(CoverFile::parse(&text, parent)?)
}

fn cmd_analyze(path: &Path, k: Option<u32>) -> anyhow::Result<ExitCode> {
    let p = load_simplex(path)?;
    let n = p.dim();
    let lengths = p.edge_length_matrix();
    let min = lengths.min_length();
    println!("dimension: {n}");
    println!("edge length matrix:");
    println!("{lengths}");
    println!("l(P) = {min}");
    let k = k.unwrap_or((n - 1) as u32);
    if min < BigInt::from(n as i64 - 1) {
        eprintln!(
            "warning: l(P) = {min} < {}; the covering strategies do not apply",
            n - 1
        );
    }
    match a_coefficients(&p, k) {
        Ok(a) => {
            let rendered: Vec<String> = a.a.iter().map(|x| x.to_string()).collect();
            println!("A coefficients (k = {k}): ({})", rendered.join(", "));
            println!("all nonnegative: {}", a.all_nonnegative());
        }
        Err(e) => eprintln!("warning: A coefficients unavailable: {e}"),
    }
    Ok(ExitCode::SUCCESS)
}

fn describe_tag(tag: &CaseTag) -> String {
    match tag {
        CaseTag::AllNonNegative { k } => format!("all A_i >= 0 at k = {k}"),
        CaseTag::Dim3Special { relabeling } => {
            format!("dimension-3 special case, relabeling {relabeling:?}")
        }
        CaseTag::CaseA => "every edge length divisible by 4 (whole simplex is a 4-dilation)".into(),
        CaseTag::CaseB { apex_set } => format!("case B with apex set {apex_set:?}"),
        CaseTag::CaseC { relabeling } => format!("case C, relabeling {relabeling:?}"),
        CaseTag::SupplementarySearch { rounds } => {
            format!("supplementary search ({rounds} rounds)")
        }
        CaseTag::Unsupported { reason } => format!("unsupported: {reason}"),
    }
}

fn print_report(report: &StrategyReport) {
    println!("case: {}", describe_tag(&report.case_tag));
    let rendered: Vec<String> = report.a_table.a.iter().map(|x| x.to_string()).collect();
    println!(
        "A coefficients (k = {}): ({})",
        report.a_table.k,
        rendered.join(", ")
    );
    println!("cover size: {}", report.cover.len());
    match &report.certificate.status {
        CertStatus::Covered => println!(
            "certificate: covered ({} branch systems checked)",
            report.certificate.branches_checked
        ),
        CertStatus::Witness { lambda, branch } => {
            println!("certificate: NOT covered");
            println!("witness (barycentric): {lambda}");
            println!("witness branch choice: {branch:?}");
        }
    }
}

fn write_cover(path: &Path, cover: &Cover) -> anyhow::Result<()> {
    fs::write(path, CoverFile::from_cover(cover).to_json() + "\n")
        .map_err(|e| anyhow::anyhow!("cannot write {}: {e}", path.display()))?;
    println!("cover written to {}", path.display());
    Ok(())
}

fn cmd_cover(
    path: &Path,
    out: Option<&Path>,
    force: bool,
    budget: &SearchBudget,
) -> anyhow::Result<ExitCode> {
    let p = load_simplex(path)?;
    let report = match cover_simplex(&p, budget) {
        Ok(r) => r,
        Err(Error::Hypothesis(msg)) if force && (p.dim() == 3 || p.dim() == 4) => {
            eprintln!("warning: {msg}; forcing a best-effort search");
            let l = p.min_edge_length();
            let want = (p.dim() - 1) as u32;
            let k = if BigInt::from(want) <= l {
                want
            } else if l >= BigInt::from(2) {
                2
            } else {
                anyhow::bail!(Error::Hypothesis(
                    "lattice length 1 admits no dilation of modulus >= 2".to_string()
                ));
            };
            let apexes: Result<Vec<Dilation>, _> =
                (0..=p.dim()).map(|i| Dilation::apex(&p, i, k)).collect();
            let base = Cover::new(p.clone(), apexes?)?;
            search_supplementary(&p, k, base, budget)?
        }
        Err(e) => return Err(e.into()),
    };
    print_report(&report);
    if let Some(out) = out {
        write_cover(out, &report.cover)?;
    }
    Ok(if report.is_covered() {
        ExitCode::SUCCESS
    } else {
        ExitCode::from(1)
    })
}

fn cmd_certify(simplex: &Path, cover: &Path) -> anyhow::Result<ExitCode> {
    let p = load_simplex(simplex)?;
    let cover = load_cover(cover, &p)?;
    let cert = certify(&cover)?;
    match &cert.status {
        CertStatus::Covered => {
            println!("covered ({} branch systems checked)", cert.branches_checked);
            Ok(ExitCode::SUCCESS)
        }
        CertStatus::Witness { lambda, branch } => {
            println!("NOT covered");
            println!("witness (barycentric): {lambda}");
            println!("witness (ambient): {}", p.from_barycentric(lambda));
            println!("branch choice: {branch:?}");
            Ok(ExitCode::from(1))
        }
    }
}

fn cmd_sample(simplex: &Path, cover: &Path, samples: u64, seed: u64) -> anyhow::Result<ExitCode> {
    let p = load_simplex(simplex)?;
    let cover = load_cover(cover, &p)?;
    let runs = monte_carlo_convergence(&cover, samples, seed, 10_000)?;
    println!("samples,uncovered_count,rate");
    for est in &runs {
        println!("{},{},{:.6}", est.samples, est.uncovered, est.rate);
    }
    if let Some(last) = runs.last() {
        eprintln!(
            "uncovered rate: {:.6} +- {:.6} ({} of {} samples, seed {seed})",
            last.rate, last.stderr, last.uncovered, last.samples
        );
    }
    Ok(ExitCode::SUCCESS)
}

fn cmd_closure(
    simplex: &Path,
    rmax: u32,
    max_points: usize,
    max_cells: u64,
) -> anyhow::Result<ExitCode> {
    let p = load_simplex(simplex)?;
    let budget = ClosureBudget {
        max_points_per_dilate: max_points,
        max_cells,
    };
    let report = is_integrally_closed_up_to(&p, rmax, &budget)?;
    for (i, count) in report.counts.iter().enumerate() {
        println!("lattice points of {}P: {count}", i + 1);
    }
    if report.is_closed() {
        println!("integrally closed up to r = {rmax}");
        Ok(ExitCode::SUCCESS)
    } else {
        for f in &report.failures {
            println!(
                "failure at r = {}: {} in ({}+1)P is not a sum",
                f.r, f.point, f.r
            );
        }
        Ok(ExitCode::from(1))
    }
}

fn cmd_search(
    simplex: &Path,
    k: Option<u32>,
    base: Option<&Path>,
    out: Option<&Path>,
    seed: u64,
    budget: &SearchBudget,
) -> anyhow::Result<ExitCode> {
    let p = load_simplex(simplex)?;
    let k = k.unwrap_or((p.dim() - 1) as u32);
    let _ = seed; // reserved: every stage of the search is deterministic
    let base = match base {
        Some(path) => load_cover(path, &p)?,
        None => {
            let apexes: Result<Vec<Dilation>, _> =
                (0..=p.dim()).map(|i| Dilation::apex(&p, i, k)).collect();
            Cover::new(p.clone(), apexes?)?
        }
    };
    let report = search_supplementary(&p, k, base, budget)?;
    print_report(&report);
    if let Some(out) = out {
        write_cover(out, &report.cover)?;
    }
    Ok(if report.is_covered() {
        ExitCode::SUCCESS
    } else {
        ExitCode::from(1)
    })
}
