use std::fmt;
use std::fs::{self, File};
use std::io::{self, BufWriter, Write};
use std::time::Instant;

use anyhow::{bail, Context, Result};
use trimatch_core::bench::{run_bench, BenchConfig};
use trimatch_core::gen::{generate, LANES_PER_BASE};
use trimatch_core::io::{load_lanes, load_space, write_bases, write_lanes};
use trimatch_core::output::{records, Format, RecordWriter};
use trimatch_core::shapley::shapley_split;
use trimatch_core::{validate_metric, Algorithm, LaneIndex, MetricSpace, Query, ValidationReport};

use crate::{BenchArgs, FormatArg, GenArgs, InputArgs, MatchArgs, ProviderArg, ValidateArgs};

/// Samples used for the metric check done before building an index.
const BUILD_SAMPLES: usize = 10_000;

/// Failures that exit with status 3 rather than 2.
#[derive(Debug)]
pub struct ValidationFailed(pub String);

impl fmt::Display for ValidationFailed {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

impl std::error::Error for ValidationFailed {}

impl From<FormatArg> for Format {
    fn from(f: FormatArg) -> Self {
        match f {
            FormatArg::Jsonl => Format::Jsonl,
            FormatArg::Csv => Format::Csv,
        }
    }
}

pub fn gen(args: GenArgs) -> Result<()> {
    let lanes = args
        .lanes_count
        .unwrap_or_else(|| (args.bases_count as f64 * LANES_PER_BASE).round() as usize);
    let inst = generate(args.seed, args.bases_count, lanes)?;
    fs::create_dir_all(&args.out).with_context(|| format!("creating {}", args.out.display()))?;
    write_bases(&args.out.join("bases.csv"), &inst.bases)?;
    write_lanes(&args.out.join("lanes.csv"), &inst.lanes)?;
    eprintln!(
        "wrote {} bases and {} lanes to {}",
        inst.bases.len(),
        inst.lanes.len(),
        args.out.display()
    );
    Ok(())
}

fn load(input: &InputArgs) -> Result<MetricSpace> {
    let matrix = match (input.provider, &input.matrix) {
        (Some(ProviderArg::Matrix), None) => bail!("--provider matrix needs --matrix"),
        (Some(ProviderArg::Greatcircle), Some(_)) => {
            bail!("--matrix given with --provider greatcircle")
        }
        (_, m) => m.as_deref(),
    };
    Ok(load_space(&input.bases, matrix)?)
}

fn print_violations(report: &ValidationReport) {
    for v in report.violations.iter().take(20) {
        eprintln!("  {v}");
    }
    if report.violations.len() > 20 {
        eprintln!("  ... {} more", report.violations.len() - 20);
    }
}

/// Loads inputs, checks the metric axioms and builds the lane index.
fn prepare(input: &InputArgs) -> Result<(MetricSpace, LaneIndex, f64)> {
    let Some(lanes_path) = &input.lanes else {
        bail!("--lanes is required");
    };
    let space = load(input)?;
    let lanes = load_lanes(lanes_path, &space)?;
    let report = validate_metric(&space, BUILD_SAMPLES, 0);
    if !report.is_ok() {
        print_violations(&report);
        if !input.force {
            return Err(ValidationFailed(format!(
                "{} metric violation(s); rerun with --force to continue anyway",
                report.violations.len()
            ))
            .into());
        }
        eprintln!("warning: continuing despite {} metric violation(s)", report.violations.len());
    }
    let started = Instant::now();
    let index = LaneIndex::build(lanes, &space)?;
    Ok((space, index, started.elapsed().as_secs_f64() * 1e3))
}

pub fn validate(args: ValidateArgs) -> Result<()> {
    let space = load(&args.input)?;
    let report = validate_metric(&space, args.samples, args.seed);
    println!(
        "{} bases ({}): {} pairs, {} triples checked, {} violation(s)",
        space.len(),
        space.provider(),
        report.pairs_checked,
        report.triples_checked,
        report.violations.len()
    );
    print_violations(&report);
    let mut failures = report.violations.len();
    if let Some(path) = &args.input.lanes {
        match load_lanes(path, &space).and_then(|lanes| LaneIndex::build(lanes, &space)) {
            Ok(index) => println!(
                "{} lanes from {} start bases: ok",
                index.len(),
                index.starts().len()
            ),
            Err(e) => {
                println!("lanes: {e}");
                failures += 1;
            }
        }
    }
    if failures > 0 && !args.input.force {
        return Err(ValidationFailed(format!("validation failed ({failures} problem(s))")).into());
    }
    println!("ok");
    Ok(())
}

pub fn run_match(args: MatchArgs) -> Result<()> {
    let algo: Algorithm = match (args.algo, args.k) {
        (Some(a), _) => a.into(),
        (None, Some(_)) => Algorithm::TopK,
        (None, None) => Algorithm::Pruned,
    };
    if algo == Algorithm::TopK && args.k.is_none() {
        bail!("--algo topk needs --k");
    }
    let mut q = Query::new(args.lane_id.clone(), args.ell, 1.0)?;
    let (space, index, build_ms) = prepare(&args.input)?;
    q = Query::for_lane(&index, &args.lane_id, q.ell, args.cap.cap())?.deterministic(args.deterministic);
    if let Some(k) = args.k {
        q = q.with_k(k)?;
    }
    let rs = algo.run(&index, &space, &q)?;

    let splits = if args.shapley {
        let s = rs
            .triangles
            .iter()
            .map(|t| shapley_split(t, &index, &space))
            .collect::<Result<Vec<_>, _>>()?;
        if s.iter().any(|x| x.clamped) {
            eprintln!("note: negative coalition savings were clamped to 0 in the Shapley split");
        }
        Some(s)
    } else {
        None
    };
    let recs = records(&rs, &index, splits.as_deref(), algo == Algorithm::TopK);
    let sink: Box<dyn Write> = match &args.out {
        Some(p) => Box::new(BufWriter::new(
            File::create(p).with_context(|| format!("creating {}", p.display()))?,
        )),
        None => Box::new(BufWriter::new(io::stdout().lock())),
    };
    let mut w = RecordWriter::new(sink, args.format.into());
    for r in &recs {
        w.write(r)?;
    }
    w.finish()?;
    eprintln!(
        "{}: {} triangle(s) for {} (ell={}, u={:.3} km, ell*={:.6}); {} candidates, search {:.3} ms, index build {:.1} ms",
        algo,
        rs.triangles.len(),
        q.t1,
        q.ell,
        q.u,
        rs.ell_star,
        rs.stats.candidates(),
        rs.stats.elapsed.as_secs_f64() * 1e3,
        build_ms
    );
    Ok(())
}

pub fn bench(args: BenchArgs) -> Result<()> {
    for &ell in &args.ells {
        Query::new("-", ell, 1.0)?;
    }
    let (space, index, build_ms) = prepare(&args.input)?;
    let cfg = BenchConfig {
        ells: args.ells.clone(),
        algorithms: args.algo.iter().map(|&a| a.into()).collect(),
        queries: args.queries,
        seed: args.seed,
        cap: args.cap.cap(),
        k: args.k,
        deterministic: args.deterministic,
    };
    let mut report = run_bench(&index, &space, &cfg)?;
    report.build_ms = build_ms;
    if let Some(path) = &args.out {
        let f = BufWriter::new(File::create(path).with_context(|| format!("creating {}", path.display()))?);
        report.write_rows(f, args.format.into())?;
    }
    print!("{}", report.summary_table());
    Ok(())
}
