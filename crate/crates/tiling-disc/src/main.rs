//! Command-line entry point. Exit codes: 0 all checks pass, 1 verification
//! failure, 2 usage or parameter error, 3 internal error.

use std::fs::File;
use std::io::{BufReader, BufWriter, Read, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use tiling_disc::constructions::{
    canonical_tiling, census_discrepancy, extremal_mod03, extremal_mod1, extremal_mod2,
    matching_extremal, type_census, ConstructionMeta, Family,
};
use tiling_disc::error::Error;
use tiling_disc::graph::{EdgeLabeling, Graph};
use tiling_disc::io::{read_graph, write_graph};
use tiling_disc::solver::{
    discrepancy_extremes, enumerate_perfect_tilings, exists_perfect_tiling, sample_tiling,
    SearchMode, Tiling,
};
use tiling_disc::templates::{sweep, Scenario};

/// Instances at or below this order are verified by full enumeration.
const EXHAUSTIVE_LIMIT: usize = 24;

#[derive(Parser)]
#[command(name = "tiling-disc", version, about = "Signed clique-tiling toolkit")]
struct Cli {
    /// Report format for the data section.
    #[arg(long, global = true, value_enum, default_value_t = Format::Text)]
    format: Format,
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Text,
    Csv,
    Jsonl,
}

#[derive(Subcommand)]
enum Command {
    /// Write an extremal construction to a graph file plus a .meta sidecar.
    Gen(GenArgs),
    /// Compute discrepancy extremes over all perfect tilings of a graph file.
    Solve(SolveArgs),
    /// Check that every (or every sampled) perfect tiling of a construction
    /// has discrepancy 0.
    VerifyExtremal(VerifyExtremalArgs),
    /// Evaluate the two-clique gadget templates against their closed forms.
    VerifyTemplates(VerifyTemplatesArgs),
    /// Exploratory scan of tiling feasibility against minimum-degree fractions.
    ThresholdScan(ThresholdScanArgs),
}

#[derive(Clone, Copy, ValueEnum)]
enum FamilyArg {
    Mod03,
    Mod1,
    Mod2,
    Matching,
}

#[derive(Args)]
struct FamilyParams {
    #[arg(long, value_enum)]
    family: FamilyArg,
    /// Clique size (mod03 only; implied for the other families).
    #[arg(long)]
    r: Option<usize>,
    /// Congruence parameter m (mod1: r = 4m+1, mod2: r = 4m+2).
    #[arg(long)]
    m: Option<usize>,
    /// Number of vertices.
    #[arg(long)]
    n: usize,
}

impl FamilyParams {
    fn build(&self) -> Result<(Graph, EdgeLabeling, ConstructionMeta), Error> {
        match self.family {
            FamilyArg::Mod03 => {
                let r = self
                    .r
                    .ok_or_else(|| Error::Parameter("mod03 requires --r".into()))?;
                extremal_mod03(r, self.n)
            }
            FamilyArg::Mod1 => {
                let m = self
                    .m
                    .ok_or_else(|| Error::Parameter("mod1 requires --m".into()))?;
                extremal_mod1(m, self.n)
            }
            FamilyArg::Mod2 => {
                let m = self
                    .m
                    .ok_or_else(|| Error::Parameter("mod2 requires --m".into()))?;
                extremal_mod2(m, self.n)
            }
            FamilyArg::Matching => matching_extremal(self.n),
        }
    }
}

#[derive(Args)]
struct GenArgs {
    #[command(flatten)]
    params: FamilyParams,
    /// Output path; the construction metadata goes to `<out>.meta`.
    #[arg(long)]
    out: PathBuf,
}

#[derive(Clone, Copy, ValueEnum)]
enum ModeArg {
    Exhaustive,
    Bnb,
}

#[derive(Clone, Copy, ValueEnum)]
enum ObjectiveArg {
    Extremes,
    Maxabs,
}

#[derive(Args)]
struct SolveArgs {
    /// Graph file to read; `-` for stdin.
    #[arg(long, default_value = "-")]
    input: PathBuf,
    /// Clique size; defaults to the file header.
    #[arg(long)]
    r: Option<usize>,
    #[arg(long, value_enum, default_value_t = ModeArg::Bnb)]
    mode: ModeArg,
    #[arg(long, value_enum, default_value_t = ObjectiveArg::Extremes)]
    objective: ObjectiveArg,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Restart budget for sampling-based helpers (reserved; must be positive).
    #[arg(long)]
    budget: Option<usize>,
}

#[derive(Args)]
struct VerifyExtremalArgs {
    #[command(flatten)]
    params: FamilyParams,
    /// Number of seeded tilings in sampling mode.
    #[arg(long, default_value_t = 1000)]
    samples: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
}

#[derive(Args)]
struct VerifyTemplatesArgs {
    #[arg(long, default_value_t = 3)]
    r_min: usize,
    #[arg(long, default_value_t = 8)]
    r_max: usize,
    /// Comma-separated scenario names; defaults to all.
    #[arg(long, value_delimiter = ',')]
    scenarios: Vec<String>,
}

#[derive(Args)]
struct ThresholdScanArgs {
    #[arg(long)]
    r: usize,
    #[arg(long)]
    n: usize,
    /// Minimum-degree fractions to scan.
    #[arg(long, value_delimiter = ',', default_values_t = vec![0.5, 0.75, 1.0])]
    fractions: Vec<f64>,
    #[arg(long, default_value_t = 100)]
    samples: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    if let Ok(threads) = std::env::var("TILING_DISC_THREADS") {
        match threads.parse::<usize>() {
            Ok(t) if t > 0 => {
                let _ = rayon::ThreadPoolBuilder::new().num_threads(t).build_global();
            }
            _ => {
                eprintln!("error: TILING_DISC_THREADS must be a positive integer");
                return ExitCode::from(2);
            }
        }
    }
    let result = match &cli.command {
        Command::Gen(args) => run_gen(args),
        Command::Solve(args) => run_solve(args),
        Command::VerifyExtremal(args) => run_verify_extremal(args, cli.format),
        Command::VerifyTemplates(args) => run_verify_templates(args, cli.format),
        Command::ThresholdScan(args) => run_threshold_scan(args, cli.format),
    };
    match result {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e}");
            let code = match e {
                Error::Internal(_) => 3,
                _ => 2,
            };
            ExitCode::from(code)
        }
    }
}

fn run_gen(args: &GenArgs) -> Result<bool, Error> {
    let (g, f, meta) = args.params.build()?;
    let file = File::create(&args.out)
        .map_err(|e| Error::Parameter(format!("cannot create {}: {e}", args.out.display())))?;
    let mut w = BufWriter::new(file);
    write_graph(&g, &f, meta.r, &mut w)
        .and_then(|_| w.flush())
        .map_err(|e| Error::Internal(e.to_string()))?;

    let meta_path = args.out.with_extension(format!(
        "{}meta",
        args.out
            .extension()
            .map(|e| format!("{}.", e.to_string_lossy()))
            .unwrap_or_default()
    ));
    let parts: Vec<String> = meta.part_sizes().iter().map(|s| s.to_string()).collect();
    let line = format!(
        "meta family={} r={} n={} parts={} X={} Y={}\n",
        meta.family.as_str(),
        meta.r,
        meta.n,
        parts.join(","),
        meta.x_vertices().len(),
        meta.y_vertices().len(),
    );
    std::fs::write(&meta_path, line)
        .map_err(|e| Error::Parameter(format!("cannot write {}: {e}", meta_path.display())))?;
    println!("wrote {} and {}", args.out.display(), meta_path.display());
    Ok(true)
}

fn read_input(path: &PathBuf) -> Result<tiling_disc::io::GraphFile, Error> {
    if path.as_os_str() == "-" {
        let mut buf = String::new();
        std::io::stdin()
            .read_to_string(&mut buf)
            .map_err(|e| Error::Parameter(format!("cannot read stdin: {e}")))?;
        read_graph(buf.as_bytes())
    } else {
        let file = File::open(path)
            .map_err(|e| Error::Parameter(format!("cannot open {}: {e}", path.display())))?;
        read_graph(BufReader::new(file))
    }
}

fn run_solve(args: &SolveArgs) -> Result<bool, Error> {
    if args.budget == Some(0) {
        return Err(Error::Parameter("--budget must be positive".into()));
    }
    let parsed = read_input(&args.input)?;
    let r = args.r.unwrap_or(parsed.r);
    if r == 0 {
        return Err(Error::Parameter("clique size must be positive".into()));
    }
    let mode = match args.mode {
        ModeArg::Exhaustive => SearchMode::Exhaustive,
        ModeArg::Bnb => SearchMode::BranchAndBound,
    };
    let ext = discrepancy_extremes(&parsed.graph, &parsed.labeling, r, mode)?;
    let count = ext
        .tilings_seen
        .map(|c| c.to_string())
        .unwrap_or_else(|| "NA".into());
    println!(
        "extremes min={} max={} count={}",
        ext.min_disc, ext.max_disc, count
    );
    if let ObjectiveArg::Maxabs = args.objective {
        println!("maxabs={}", ext.max_absolute());
    }
    for t in [&ext.witness_min, &ext.witness_max] {
        for c in t.tiles() {
            let vs: Vec<String> = c.vertices().iter().map(|v| v.to_string()).collect();
            println!("t {}", vs.join(" "));
        }
    }
    Ok(true)
}

struct ExtremalOutcome {
    mode: &'static str,
    checked: u64,
    min: i64,
    max: i64,
    failures: Vec<String>,
}

fn verify_extremal_outcome(
    g: &Graph,
    f: &EdgeLabeling,
    meta: &ConstructionMeta,
    samples: usize,
    seed: u64,
) -> Result<ExtremalOutcome, Error> {
    let mut failures = Vec::new();
    let (mode, checked, min, max);
    if meta.n <= EXHAUSTIVE_LIMIT {
        mode = "exhaustive";
        let mut lo = i64::MAX;
        let mut hi = i64::MIN;
        let mut bad = 0u64;
        checked = enumerate_perfect_tilings(g, meta.r, |tiles| {
            let t = Tiling::new(tiles.to_vec()).expect("solver emits disjoint tiles");
            let d = t.discrepancy(f).expect("total labelling");
            lo = lo.min(d);
            hi = hi.max(d);
            if d != 0 {
                bad += 1;
            }
        })?;
        if checked == 0 {
            failures.push("no perfect tilings found".into());
        }
        if bad > 0 {
            failures.push(format!("{bad} tilings with nonzero discrepancy"));
        }
        min = if checked == 0 { 0 } else { lo };
        max = if checked == 0 { 0 } else { hi };
    } else {
        mode = "sampled";
        let canonical = canonical_tiling(meta, g, None)?;
        let mut tilings = vec![canonical];
        let sampled: Vec<Result<Tiling, Error>> = (0..samples as u64)
            .into_par_iter()
            .map(|k| {
                canonical_tiling(meta, g, Some(seed.wrapping_add(k)))
                    .or_else(|_| sample_tiling(g, meta.r, seed.wrapping_add(k)))
            })
            .collect();
        for t in sampled {
            tilings.push(t?);
        }
        let mut lo = i64::MAX;
        let mut hi = i64::MIN;
        for t in &tilings {
            t.validate(g, true)?;
            let d = t.discrepancy(f)?;
            lo = lo.min(d);
            hi = hi.max(d);
            if d != 0 {
                failures.push(format!("tiling with discrepancy {d}"));
            }
            let census = type_census(meta, t)?;
            match meta.family {
                Family::Mod1 => {
                    if census.t2 != census.t3 {
                        failures.push(format!(
                            "type census t2={} t3={} not balanced",
                            census.t2, census.t3
                        ));
                    }
                }
                Family::Mod2 => {
                    let forced_t1 = meta.n / (meta.r * (meta.r + 1));
                    if census.t1 != forced_t1 {
                        failures.push(format!(
                            "type census t1={} differs from forced {forced_t1}",
                            census.t1
                        ));
                    }
                    if census_discrepancy(meta, &census) != Some(d) {
                        failures.push("census discrepancy route disagrees".into());
                    }
                }
                _ => {}
            }
        }
        checked = tilings.len() as u64;
        min = lo;
        max = hi;
    }
    failures.dedup();
    Ok(ExtremalOutcome {
        mode,
        checked,
        min,
        max,
        failures,
    })
}

fn run_verify_extremal(args: &VerifyExtremalArgs, format: Format) -> Result<bool, Error> {
    let (g, f, meta) = args.params.build()?;
    let out = verify_extremal_outcome(&g, &f, &meta, args.samples, args.seed)?;
    let pass = out.failures.is_empty();
    let verdict = if pass { "PASS" } else { "FAIL" };
    match format {
        Format::Text => {
            println!(
                "family={} r={} n={} mode={} checked={} min={} max={} {verdict}",
                meta.family.as_str(),
                meta.r,
                meta.n,
                out.mode,
                out.checked,
                out.min,
                out.max
            );
        }
        Format::Csv => {
            println!("family,r,n,mode,checked,min,max,result");
            println!(
                "{},{},{},{},{},{},{},{verdict}",
                meta.family.as_str(),
                meta.r,
                meta.n,
                out.mode,
                out.checked,
                out.min,
                out.max
            );
        }
        Format::Jsonl => {
            println!(
                "{{\"family\":\"{}\",\"r\":{},\"n\":{},\"mode\":\"{}\",\"checked\":{},\"min\":{},\"max\":{},\"result\":\"{verdict}\"}}",
                meta.family.as_str(),
                meta.r,
                meta.n,
                out.mode,
                out.checked,
                out.min,
                out.max
            );
        }
    }
    for msg in &out.failures {
        eprintln!("failure: {msg}");
    }
    Ok(pass)
}

fn run_verify_templates(args: &VerifyTemplatesArgs, format: Format) -> Result<bool, Error> {
    if args.r_min < 3 || args.r_min > args.r_max {
        return Err(Error::Parameter(format!(
            "need 3 <= r-min <= r-max, got {}..{}",
            args.r_min, args.r_max
        )));
    }
    let scenarios: Vec<Scenario> = if args.scenarios.is_empty() {
        Scenario::ALL.to_vec()
    } else {
        args.scenarios
            .iter()
            .map(|s| {
                Scenario::parse(s).ok_or_else(|| Error::Parameter(format!("unknown scenario `{s}`")))
            })
            .collect::<Result<_, _>>()?
    };
    let rows = sweep(args.r_min, args.r_max, &scenarios)?;
    if format == Format::Csv {
        println!("scenario,r,i,s,s_prime,disc_K1,disc_K2,diff,expected,match");
    }
    let mut pass = true;
    for row in &rows {
        let expected = row
            .expected
            .map(|e| e.to_string())
            .unwrap_or_else(|| "NA".into());
        let matched = match row.matches {
            Some(true) => "true",
            Some(false) => {
                pass = false;
                "false"
            }
            None => "NA",
        };
        match format {
            Format::Text | Format::Csv => {
                println!(
                    "{},{},{},{},{},{},{},{},{expected},{matched}",
                    row.scenario.as_str(),
                    row.r,
                    row.i,
                    row.s,
                    row.s_prime,
                    row.disc_k1,
                    row.disc_k2,
                    row.diff
                );
            }
            Format::Jsonl => {
                let expected_json = row
                    .expected
                    .map(|e| e.to_string())
                    .unwrap_or_else(|| "null".into());
                let matched_json = match row.matches {
                    Some(b) => b.to_string(),
                    None => "null".into(),
                };
                println!(
                    "{{\"scenario\":\"{}\",\"r\":{},\"i\":{},\"s\":{},\"s_prime\":{},\"disc_K1\":{},\"disc_K2\":{},\"diff\":{},\"expected\":{expected_json},\"match\":{matched_json}}}",
                    row.scenario.as_str(),
                    row.r,
                    row.i,
                    row.s,
                    row.s_prime,
                    row.disc_k1,
                    row.disc_k2,
                    row.diff
                );
            }
        }
    }
    Ok(pass)
}

// Seeded graph with every vertex of degree >= threshold, by rejection on
// G(n, p) with p nudged above the target fraction.
fn random_min_degree_graph(
    n: usize,
    threshold: usize,
    p: f64,
    rng: &mut ChaCha8Rng,
) -> Option<Graph> {
    for _ in 0..5000 {
        let mut g = Graph::new(n);
        for u in 0..n as u32 {
            for v in u + 1..n as u32 {
                if rng.gen_bool(p) {
                    g.add_edge(u, v).expect("valid");
                }
            }
        }
        if g.min_degree() >= threshold {
            return Some(g);
        }
    }
    None
}

fn run_threshold_scan(args: &ThresholdScanArgs, format: Format) -> Result<bool, Error> {
    if args.r == 0 || args.n == 0 || !args.n.is_multiple_of(args.r) {
        return Err(Error::Parameter(format!(
            "need r | n with both positive, got r={} n={}",
            args.r, args.n
        )));
    }
    if args.n > EXHAUSTIVE_LIMIT {
        return Err(Error::Parameter(format!(
            "threshold-scan is exact only up to n = {EXHAUSTIVE_LIMIT}"
        )));
    }
    for &frac in &args.fractions {
        if !(0.0..=1.0).contains(&frac) {
            return Err(Error::Parameter(format!("fraction {frac} outside [0,1]")));
        }
    }
    println!("# EXPLORATORY: no assertions; feasibility rates are sample estimates");
    if format == Format::Csv {
        println!("fraction,samples,feasible,feasible_rate,max_abs_disc");
    }
    for &frac in &args.fractions {
        let threshold = (frac * (args.n as f64 - 1.0)).ceil() as usize;
        let p = (frac * 1.05 + 0.05).min(1.0);
        let mut rng = ChaCha8Rng::seed_from_u64(args.seed ^ frac.to_bits());
        let mut feasible = 0usize;
        let mut max_abs = 0i64;
        for _ in 0..args.samples {
            let Some(g) = random_min_degree_graph(args.n, threshold, p, &mut rng) else {
                continue;
            };
            if !exists_perfect_tiling(&g, args.r) {
                continue;
            }
            feasible += 1;
            let f = EdgeLabeling::from_fn(&g, |_, _| if rng.gen_bool(0.5) { 1 } else { -1 })?;
            let ext = discrepancy_extremes(&g, &f, args.r, SearchMode::BranchAndBound)?;
            max_abs = max_abs.max(ext.max_absolute());
        }
        let rate = feasible as f64 / args.samples as f64;
        match format {
            Format::Text => println!(
                "fraction={frac} samples={} feasible={feasible} rate={rate:.3} max_abs_disc={max_abs}",
                args.samples
            ),
            Format::Csv => println!("{frac},{},{feasible},{rate:.3},{max_abs}", args.samples),
            Format::Jsonl => println!(
                "{{\"fraction\":{frac},\"samples\":{},\"feasible\":{feasible},\"rate\":{rate:.3},\"max_abs_disc\":{max_abs}}}",
                args.samples
            ),
        }
    }
    Ok(true)
}
