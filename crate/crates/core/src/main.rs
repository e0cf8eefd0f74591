use std::path::PathBuf;
use std::process::ExitCode;
use std::time::Instant;

use clap::{Args, Parser, Subcommand, ValueEnum};

use detpair::detection::{self, brute_ceiling};
use detpair::graph::Graph;
use detpair::instances;
use detpair::tree_fpt::{fpt_decide, FptConfig, FptOutcome};
use detpair::{
    approx2_detection_pair, approx_detection_pair, dp_oracle_with_ceiling, gamma_oracle,
    md_oracle, min_dominating_set_tree, slater_resolving_set, verify, DetectionPair, Error,
    VerifyOutcome,
};

#[derive(Parser)]
#[command(name = "detpair", version, about = "Detection pairs in graphs")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Exact solvers: brute-force oracles, tree routines, and the
    /// parameterized decision procedure.
    Solve(SolveArgs),
    /// Approximation algorithms with an optional ratio report.
    Approx(ApproxArgs),
    /// Check a witness JSON against a graph.
    Verify(VerifyArgs),
    /// Write generated instances as edge-list files.
    #[command(subcommand)]
    Gen(GenCommand),
    /// Run the built-in corpus and emit a CSV report.
    Bench(BenchArgs),
}

#[derive(Clone, Copy, ValueEnum)]
enum Problem {
    Dp,
    Md,
    Domset,
}

#[derive(Args)]
struct SolveArgs {
    #[arg(long, value_enum, default_value = "dp")]
    problem: Problem,
    /// Solve exactly (brute force for general graphs, linear-time
    /// algorithms for md/domset on trees).
    #[arg(long)]
    exact: bool,
    /// Decide DP <= k with the parameterized tree algorithm.
    #[arg(long, requires = "k")]
    fpt: bool,
    #[arg(short)]
    k: Option<usize>,
    /// Disable the pending-forest pruning rules (differential testing).
    #[arg(long)]
    debug_no_prune: bool,
    graph: PathBuf,
}

#[derive(Clone, Copy, ValueEnum)]
enum Method {
    Setcover,
    Tree2,
}

#[derive(Args)]
struct ApproxArgs {
    #[arg(long, value_enum)]
    method: Method,
    graph: PathBuf,
}

#[derive(Args)]
struct VerifyArgs {
    graph: PathBuf,
    witness: PathBuf,
}

#[derive(Subcommand)]
enum GenCommand {
    Path(GenN),
    Complete(GenN),
    Star {
        /// Number of leaves.
        #[arg(long)]
        leaves: usize,
        #[arg(short, long)]
        out: PathBuf,
    },
    Spider {
        /// Comma-separated leg lengths, e.g. 1,2,3.
        #[arg(long, value_delimiter = ',')]
        legs: Vec<usize>,
        #[arg(short, long)]
        out: PathBuf,
    },
    T1 {
        #[arg(long)]
        l: usize,
        /// Leaves per star.
        #[arg(long, default_value = "3")]
        star: usize,
        #[arg(short, long)]
        out: PathBuf,
    },
    T2 {
        #[arg(long)]
        l: usize,
        #[arg(short, long)]
        out: PathBuf,
    },
    RandomTree {
        #[arg(long)]
        n: usize,
        #[arg(long, default_value = "0")]
        seed: u64,
        #[arg(short, long)]
        out: PathBuf,
    },
    RandomGraph {
        #[arg(long)]
        n: usize,
        /// Edge probability.
        #[arg(long, default_value = "0.5")]
        p: f64,
        #[arg(long, default_value = "0")]
        seed: u64,
        #[arg(short, long)]
        out: PathBuf,
    },
}

#[derive(Args)]
struct GenN {
    #[arg(long)]
    n: usize,
    #[arg(short, long)]
    out: PathBuf,
}

#[derive(Args)]
struct BenchArgs {
    /// Output CSV path; stdout when omitted.
    #[arg(short, long)]
    out: Option<PathBuf>,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}

fn run(cli: Cli) -> detpair::Result<ExitCode> {
    match cli.command {
        Command::Solve(args) => solve(args),
        Command::Approx(args) => approx(args),
        Command::Verify(args) => do_verify(args),
        Command::Gen(cmd) => gen(cmd),
        Command::Bench(args) => bench(args),
    }
}

fn solve(args: SolveArgs) -> detpair::Result<ExitCode> {
    let g = detpair::io::read_graph(&args.graph)?;
    match args.problem {
        Problem::Dp => {
            if args.fpt {
                let k = args.k.expect("clap enforces -k with --fpt");
                let config = FptConfig {
                    no_prune: args.debug_no_prune,
                };
                return match fpt_decide(&g, k, config)? {
                    FptOutcome::Yes(dp) => {
                        println!("{}", serde_json::to_string(&dp)?);
                        Ok(ExitCode::SUCCESS)
                    }
                    FptOutcome::No => {
                        eprintln!("no detection pair of size <= {k}");
                        Ok(ExitCode::from(1))
                    }
                };
            }
            let res = dp_oracle_with_ceiling(&g, g.n(), brute_ceiling())?;
            println!("{}", serde_json::to_string(&res.witness)?);
            eprintln!("DP = {}", res.value);
        }
        Problem::Md => {
            if g.is_tree() {
                let set = slater_resolving_set(&g)?;
                println!("{}", serde_json::to_string(&set)?);
                eprintln!("MD = {}", set.len());
            } else {
                let res = md_oracle(&g)?;
                let set: Vec<_> = res.witness.into_iter().collect();
                println!("{}", serde_json::to_string(&set)?);
                eprintln!("MD = {}", res.value);
            }
        }
        Problem::Domset => {
            if g.is_tree() {
                let set = min_dominating_set_tree(&g)?;
                println!("{}", serde_json::to_string(&set)?);
                eprintln!("gamma = {}", set.len());
            } else {
                let res = gamma_oracle(&g)?;
                let set: Vec<_> = res.witness.into_iter().collect();
                println!("{}", serde_json::to_string(&set)?);
                eprintln!("gamma = {}", res.value);
            }
        }
    }
    Ok(ExitCode::SUCCESS)
}

fn approx(args: ApproxArgs) -> detpair::Result<ExitCode> {
    let g = detpair::io::read_graph(&args.graph)?;
    let pair = match args.method {
        Method::Setcover => approx_detection_pair(&g)?,
        Method::Tree2 => approx2_detection_pair(&g)?.pair,
    };
    println!("{}", serde_json::to_string(&pair)?);
    eprintln!("size = {}", pair.size());
    if g.n() <= brute_ceiling() {
        let opt = dp_oracle_with_ceiling(&g, g.n(), brute_ceiling())?.value;
        let ratio = if opt == 0 {
            1.0
        } else {
            pair.size() as f64 / opt as f64
        };
        eprintln!("oracle DP = {opt}, ratio = {ratio:.4}");
    }
    Ok(ExitCode::SUCCESS)
}

fn do_verify(args: VerifyArgs) -> detpair::Result<ExitCode> {
    let g = detpair::io::read_graph(&args.graph)?;
    let text = std::fs::read_to_string(&args.witness)?;
    let dp: DetectionPair =
        serde_json::from_str(&text).map_err(|e| Error::Parse(format!("witness JSON: {e}")))?;
    match verify(&g, &dp)? {
        VerifyOutcome::Valid => {
            println!("valid");
            Ok(ExitCode::SUCCESS)
        }
        VerifyOutcome::Invalid { witness: (u, v) } => {
            println!("invalid: vertices {u} and {v} are neither dominated nor separated");
            Ok(ExitCode::from(1))
        }
    }
}

fn gen(cmd: GenCommand) -> detpair::Result<ExitCode> {
    let (g, out) = match cmd {
        GenCommand::Path(a) => (instances::gen_path(a.n)?, a.out),
        GenCommand::Complete(a) => (instances::gen_complete(a.n)?, a.out),
        GenCommand::Star { leaves, out } => (instances::gen_star(leaves)?, out),
        GenCommand::Spider { legs, out } => (instances::gen_spider(&legs)?, out),
        GenCommand::T1 { l, star, out } => (instances::gen_t1(l, star)?, out),
        GenCommand::T2 { l, out } => (instances::gen_t2(l)?, out),
        GenCommand::RandomTree { n, seed, out } => (instances::gen_random_tree(n, seed)?, out),
        GenCommand::RandomGraph { n, p, seed, out } => {
            (instances::gen_random_graph(n, p, seed)?, out)
        }
    };
    detpair::io::write_graph(&g, out)?;
    Ok(ExitCode::SUCCESS)
}

fn bench(args: BenchArgs) -> detpair::Result<ExitCode> {
    let mut corpus: Vec<(String, Graph)> = Vec::new();
    for n in [6, 10, 14] {
        corpus.push((format!("path_{n}"), instances::gen_path(n)?));
    }
    for leaves in [3, 5] {
        corpus.push((format!("star_{leaves}"), instances::gen_star(leaves)?));
    }
    corpus.push(("spider_2_3_4".into(), instances::gen_spider(&[2, 3, 4])?));
    for l in 1..=3 {
        corpus.push((format!("t1_{l}"), instances::gen_t1(l, 3)?));
    }
    corpus.push(("t2_1".into(), instances::gen_t2(1)?));
    for seed in 0..5u64 {
        let n = 8 + seed as usize;
        corpus.push((
            format!("random_tree_{n}_s{seed}"),
            instances::gen_random_tree(n, seed)?,
        ));
    }
    for seed in 0..3u64 {
        corpus.push((
            format!("random_graph_8_s{seed}"),
            instances::gen_random_graph(8, 0.4, seed)?,
        ));
    }

    let mut rows = Vec::new();
    for (name, g) in &corpus {
        let oracle_opt = if g.n() <= brute_ceiling() {
            Some(detection::dp_oracle(g, g.n())?.value)
        } else {
            None
        };
        let mut methods: Vec<(&str, Box<dyn Fn() -> detpair::Result<usize>>)> = vec![(
            "setcover",
            Box::new(|| Ok(approx_detection_pair(g)?.size())),
        )];
        if g.is_tree() {
            methods.push(("tree2", Box::new(|| Ok(approx2_detection_pair(g)?.pair.size()))));
        }
        for (method, f) in methods {
            let start = Instant::now();
            let size = f()?;
            let millis = start.elapsed().as_secs_f64() * 1000.0;
            let (opt_s, ratio_s) = match oracle_opt {
                Some(0) => ("0".into(), "1.0000".into()),
                Some(opt) => (opt.to_string(), format!("{:.4}", size as f64 / opt as f64)),
                None => (String::new(), String::new()),
            };
            rows.push(format!(
                "{name},{},{method},{size},{opt_s},{ratio_s},{millis:.3}",
                g.n()
            ));
        }
    }
    rows.sort();
    let mut csv = String::from("instance,n,method,size,oracle_opt,ratio,millis\n");
    for row in rows {
        csv.push_str(&row);
        csv.push('\n');
    }
    match args.out {
        Some(path) => std::fs::write(path, csv)?,
        None => print!("{csv}"),
    }
    Ok(ExitCode::SUCCESS)
}
