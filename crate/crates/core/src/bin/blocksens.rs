use std::fs;
use std::path::PathBuf;
use std::process::ExitCode;
use std::time::Duration;

use anyhow::{bail, Context};
use clap::{ArgGroup, Args, Parser, Subcommand};

use blocksens::cnf::{build_instance, emit_dimacs, enumerate_partitions, Partition};
use blocksens::families::{RubinsteinFamily, VirzaFamily};
use blocksens::search::{
    build_table, max_bs, oracle_max_bs, search_point, PointOutcome, RecordLog, SearchConfig,
    SolverCommand, SolverConfig, DEFAULT_TABLE_MAX_N, SOLVER_ENV,
};
use blocksens::{
    block_sensitivity_at, block_sensitivity_with, sensitivity_at, sensitivity_with,
    BooleanFunction, Input, ScanLimits, StructuredFunction, TruthTable,
};

#[derive(Parser, Debug)]
#[command(name = "blocksens", version, about = "Sensitivity vs block sensitivity workbench")]
struct Cli {
    #[command(flatten)]
    global: GlobalOpts,

    #[command(subcommand)]
    command: Cmd,
}

#[derive(Args, Debug)]
struct GlobalOpts {
    /// Solver command template; `{}` stands for the DIMACS file.
    #[arg(long, global = true, env = SOLVER_ENV, value_name = "TEMPLATE")]
    solver_cmd: Option<String>,

    /// Per-instance wall-clock limit in seconds.
    #[arg(long, global = true, default_value_t = 600.0, value_name = "SEC")]
    time_limit: f64,

    /// Concurrent solver processes (defaults to the number of CPUs).
    #[arg(long, global = true, value_name = "K")]
    workers: Option<usize>,

    /// Keep partitions with more singleton blocks than the sensitivity bound.
    #[arg(long, global = true)]
    no_prune_singletons: bool,

    /// Append-only JSON-lines record log; completed cells are reused.
    #[arg(long, global = true, value_name = "PATH")]
    records: Option<PathBuf>,
}

#[derive(Subcommand, Debug)]
enum Cmd {
    /// Print s(f), bs(f) and their witnesses for a truth-table file.
    Analyze {
        table_file: PathBuf,
        /// Allow full block sensitivity scans up to n = 16.
        #[arg(long)]
        allow_large: bool,
    },
    /// Build a separating family; optionally print its table or check its measures.
    Family(FamilyArgs),
    /// Write DIMACS instances for (n, s, bs).
    Encode {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        s: usize,
        #[arg(long)]
        bs: usize,
        /// Only this partition, e.g. `2,1,1`.
        #[arg(long, value_name = "P1,P2,...")]
        partition: Option<Partition>,
        #[arg(long, value_name = "DIR")]
        out: PathBuf,
    },
    /// Decide whether some f has s(f) <= s and bs(f) >= bs.
    Search {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        s: usize,
        #[arg(long)]
        bs: usize,
    },
    /// Largest bs reachable with s(f) <= s on n variables.
    MaxBs {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        s: usize,
    },
    /// Separation table for all n up to --max-n.
    Table {
        #[arg(long, default_value_t = DEFAULT_TABLE_MAX_N)]
        max_n: usize,
    },
    /// Brute-force max bs per sensitivity over all functions on n variables.
    Oracle {
        #[arg(long)]
        n: usize,
        /// Only report this sensitivity.
        #[arg(long)]
        s: Option<usize>,
        /// Permit n = 5 (2^32 functions).
        #[arg(long)]
        allow_n5: bool,
        /// Write witness tables into this directory.
        #[arg(long, value_name = "DIR")]
        out: Option<PathBuf>,
    },
}

#[derive(Args, Debug)]
#[group(skip)]
#[command(group(ArgGroup::new("which").required(true).args(["virza_k", "rubinstein_m"])))]
struct FamilyArgs {
    /// Section family with n = (2k+1)^2.
    #[arg(long)]
    virza_k: Option<usize>,
    /// Rubinstein's family with n = m^2 (m even).
    #[arg(long)]
    rubinstein_m: Option<usize>,
    /// Print the truth table (n <= 20).
    #[arg(long)]
    emit_table: bool,
    /// Verify s(f) and bs(f) against the closed forms.
    #[arg(long)]
    check: bool,
    /// Allow the exhaustive sensitivity scan up to n = 25.
    #[arg(long)]
    allow_large: bool,
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    let cli = Cli::parse();
    match run(cli) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}

fn search_config(g: &GlobalOpts) -> anyhow::Result<SearchConfig> {
    if !(g.time_limit > 0.0 && g.time_limit.is_finite()) {
        bail!("--time-limit must be a positive number of seconds");
    }
    let workers = g
        .workers
        .unwrap_or_else(|| std::thread::available_parallelism().map_or(1, |n| n.get()));
    let command = SolverCommand::resolve(g.solver_cmd.as_deref())?;
    let solver = SolverConfig::new(command, Duration::from_secs_f64(g.time_limit), workers)?;
    let mut config = SearchConfig::new(solver).with_pruning(!g.no_prune_singletons);
    if let Some(path) = &g.records {
        config = config.with_records(RecordLog::new(path));
    }
    Ok(config)
}

fn fmt_blocks(blocks: &[Vec<usize>]) -> String {
    blocks
        .iter()
        .map(|b| {
            let inner: Vec<String> = b.iter().map(ToString::to_string).collect();
            format!("{{{}}}", inner.join(","))
        })
        .collect::<Vec<_>>()
        .join(" ")
}

fn run(cli: Cli) -> anyhow::Result<bool> {
    match cli.command {
        Cmd::Analyze {
            table_file,
            allow_large,
        } => {
            let text = fs::read_to_string(&table_file)
                .with_context(|| format!("reading {}", table_file.display()))?;
            let f = TruthTable::parse_text(&text)?;
            let limits = ScanLimits { allow_large };
            let s = sensitivity_with(&f, limits)?;
            let bs = block_sensitivity_with(&f, limits)?;
            println!("n = {}", f.n());
            println!(
                "s(f) = {} at {} (sensitive indices {:?})",
                s.value, s.witness, s.sensitive_indices
            );
            println!("bs(f) = {} at {}: {}", bs.value(), bs.witness, fmt_blocks(&bs.blocks));
            let bound = blocksens::conjectured_bs_bound(s.value);
            println!(
                "bs <= (s^2+s)/2 = {bound}: {}",
                if bs.value() <= bound { "holds" } else { "VIOLATED" }
            );
            Ok(true)
        }
        Cmd::Family(args) => family(args),
        Cmd::Encode {
            n,
            s,
            bs,
            partition,
            out,
        } => {
            let partitions = match partition {
                Some(p) => vec![p],
                None => enumerate_partitions(n, bs, (!cli.global.no_prune_singletons).then_some(s)),
            };
            fs::create_dir_all(&out)?;
            for p in &partitions {
                let instance = build_instance(n, s, bs, p)?;
                let parts: Vec<String> = p.parts().iter().map(ToString::to_string).collect();
                let path = out.join(format!("n{n}-s{s}-bs{bs}-p{}.cnf", parts.join("_")));
                fs::write(&path, emit_dimacs(&instance))?;
                println!(
                    "{} vars={} clauses={}",
                    path.display(),
                    instance.var_count(),
                    instance.clause_count()
                );
            }
            if partitions.is_empty() {
                println!("no partitions of {n} into {bs} parts survive pruning");
            }
            Ok(true)
        }
        Cmd::Search { n, s, bs } => {
            let config = search_config(&cli.global)?;
            let report = search_point(n, s, bs, &config)?;
            println!(
                "n={n} s={s} bs={bs}: {} partitions, {} solver calls, {} reused",
                report.partitions, report.solver_calls, report.reused
            );
            match &report.outcome {
                PointOutcome::Feasible {
                    function,
                    partition,
                } => {
                    println!("feasible (partition {partition})");
                    if let Some(m) = report.measures {
                        println!("witness s(f) = {}, bs(f) = {}", m.s, m.bs);
                    }
                    println!("{}", function.to_text());
                }
                PointOutcome::Infeasible => println!("infeasible"),
                PointOutcome::Unknown => println!("unknown (some instance timed out)"),
            }
            Ok(true)
        }
        Cmd::MaxBs { n, s } => {
            let config = search_config(&cli.global)?;
            let report = max_bs(n, s, &config)?;
            if report.complete {
                println!("max bs for n={n}, s<={s}: {}", report.value);
            } else {
                println!(
                    "max bs for n={n}, s<={s}: >= {} (partial, an instance timed out)",
                    report.value
                );
            }
            if let Some(w) = &report.witness {
                println!("{}", w.to_text());
            }
            Ok(true)
        }
        Cmd::Table { max_n } => {
            let config = search_config(&cli.global)?;
            let table = build_table(max_n, &config)?;
            println!("{:>4} {:>4} {:>4}", "n", "s", "bs");
            for row in &table.rows {
                println!("{:>4} {:>4} {:>4}", format!(">={}", row.n), row.s, row.bs);
            }
            for cell in table.cells.iter().filter(|c| !c.complete) {
                println!("partial: n={} s={} bs>={}", cell.n, cell.s, cell.max_bs);
            }
            Ok(!table.partial)
        }
        Cmd::Oracle {
            n,
            s,
            allow_n5,
            out,
        } => {
            let result = oracle_max_bs(n, s, allow_n5)?;
            if let Some(dir) = &out {
                fs::create_dir_all(dir)?;
            }
            for e in result.entries.values() {
                println!("n={n} s={} max_bs={} witness={}", e.s, e.max_bs, e.witness.to_text().replace('\n', ":"));
                if let Some(dir) = &out {
                    fs::write(dir.join(format!("oracle-n{n}-s{}.txt", e.s)), e.witness.to_text())?;
                }
            }
            println!(
                "{} non-constant functions checked, {} bound violations",
                result.functions_checked, result.conjecture_violations
            );
            Ok(result.conjecture_violations == 0)
        }
    }
}

struct Expectation {
    s: usize,
    bs: usize,
}

fn family(args: FamilyArgs) -> anyhow::Result<bool> {
    let limits = ScanLimits {
        allow_large: args.allow_large,
    };
    let (f, expected, witness_blocks): (StructuredFunction, Expectation, _) =
        match (args.virza_k, args.rubinstein_m) {
            (Some(k), _) => {
                let fam = VirzaFamily::new(k)?;
                let width = fam.section_width();
                (
                    fam.function(),
                    Expectation {
                        s: width,
                        bs: width * (k + 1),
                    },
                    Some(fam.witness_blocks()),
                )
            }
            (None, Some(m)) => {
                let fam = RubinsteinFamily::new(m)?;
                (fam.function(), Expectation { s: m, bs: m * m / 2 }, None)
            }
            (None, None) => unreachable!("clap requires one family"),
        };
    let n = f.arity();
    println!("family {} on n = {n} variables", f.name());

    if args.emit_table {
        println!("{}", f.to_table()?.to_text());
    }
    if !args.check {
        return Ok(true);
    }

    let mut ok = true;
    let mut verdict = |label: &str, got: usize, want: usize, exact: bool| {
        let pass = if exact { got == want } else { got >= want };
        ok &= pass;
        let rel = if exact { "=" } else { ">=" };
        println!(
            "{label} = {got} (expected {rel} {want}) {}",
            if pass { "PASS" } else { "FAIL" }
        );
    };

    let zero = Input::zeros(n)?;
    if witness_blocks.is_some() {
        verdict("s(f, 0^n)", sensitivity_at(&f, &zero)?.value, expected.s, true);
    }
    if n <= limits.sensitivity_limit() {
        let s = sensitivity_with(&f, limits)?;
        println!("exhaustive sensitivity scan over 2^{n} inputs, witness {}", s.witness);
        verdict("s(f)", s.value, expected.s, true);
    } else {
        println!("s(f): exhaustive scan over 2^{n} inputs skipped (pass --allow-large)");
    }

    if let Some(blocks) = &witness_blocks {
        blocks.validate(&f)?;
        println!(
            "witness blocks at 0^n: {} disjoint blocks, every flip verified",
            blocks.value()
        );
        verdict("bs(f, 0^n) via witness blocks", blocks.value(), expected.bs, false);
    }
    if n <= ScanLimits::BS_POINT_MAX_N {
        let at_zero = block_sensitivity_at(&f, &zero)?;
        at_zero.validate(&f)?;
        println!("exact packing at 0^n: {}", fmt_blocks(&at_zero.blocks));
        if witness_blocks.is_some() {
            verdict("bs(f, 0^n)", at_zero.value(), expected.bs, true);
        }
    }
    if n <= ScanLimits::BS_SCAN_MAX_N {
        let bs = block_sensitivity_with(&f, limits)?;
        println!("exhaustive block sensitivity scan, witness {}", bs.witness);
        verdict("bs(f)", bs.value(), expected.bs, true);
    }
    println!("check: {}", if ok { "PASS" } else { "FAIL" });
    Ok(ok)
}
