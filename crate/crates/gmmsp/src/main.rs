use std::path::PathBuf;
use std::process::ExitCode;

use clap::error::ErrorKind;
use clap::{Args, Parser, Subcommand};
use gmmsp::bench::{BenchOutcome, Scaling};
use gmmsp::report::{write_csv, write_jsonl};
use gmmsp::{run_benchmark, run_single, BenchConfig, Error, GridSpec, Outputs, Result, RunConfig};
use gmmsp_core::metrics::DEFAULT_BOUNDARY_TOLERANCE;
use gmmsp_core::EmConfig;

#[derive(Parser)]
#[command(name = "gmmsp", version, about = "Superpixel segmentation with Gaussian mixture models")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Segment one image.
    Segment(SegmentArgs),
    /// Segment every image in a directory and summarize.
    Bench(BenchArgs),
}

#[derive(Args)]
struct ModelArgs {
    /// Cell size `v`, or `vx,vy`.
    #[arg(long, value_delimiter = ',', num_args = 1..=2, value_name = "V[,VY]")]
    interval: Option<Vec<usize>>,
    /// EM iterations.
    #[arg(long, default_value_t = 10)]
    iters: usize,
    /// Initial colour standard deviation.
    #[arg(long, default_value_t = 8.0)]
    lambda: f64,
    /// Spatial eigenvalue floor.
    #[arg(long = "eps-s", default_value_t = 2.0)]
    eps_s: f64,
    /// Colour eigenvalue floor.
    #[arg(long = "eps-c", default_value_t = 8.0)]
    eps_c: f64,
    /// Worker threads per image [default: available cores].
    #[arg(long)]
    threads: Option<usize>,
    /// Timed repetitions; the median is reported.
    #[arg(long, default_value_t = 1)]
    repeat: usize,
    /// Include decoding and encoding in the reported time.
    #[arg(long)]
    total_time: bool,
    /// Boundary-recall tolerance in pixels (Chebyshev).
    #[arg(long, default_value_t = DEFAULT_BOUNDARY_TOLERANCE)]
    br_tolerance: usize,
}

#[derive(Args)]
struct SegmentArgs {
    input: PathBuf,
    /// Approximate number of superpixels.
    #[arg(long, short = 'k', required_unless_present = "interval", conflicts_with = "interval")]
    superpixels: Option<usize>,
    #[command(flatten)]
    model: ModelArgs,
    /// Label map output (.pgm 16-bit, or .png).
    #[arg(long)]
    labels_out: Option<PathBuf>,
    /// Boundary overlay output (.png or .ppm).
    #[arg(long)]
    overlay_out: Option<PathBuf>,
    /// Ground-truth label map; repeat for several annotations.
    #[arg(long)]
    gt: Vec<PathBuf>,
    /// JSON-lines report.
    #[arg(long)]
    report: Option<PathBuf>,
}

#[derive(Args)]
struct BenchArgs {
    dir: PathBuf,
    /// Superpixel counts to sweep, comma separated.
    #[arg(long, short = 'k', value_delimiter = ',', required_unless_present = "interval", conflicts_with = "interval")]
    superpixels: Vec<usize>,
    #[command(flatten)]
    model: ModelArgs,
    /// Directory of ground-truth label maps.
    #[arg(long)]
    gt: Option<PathBuf>,
    /// JSON-lines report of every (image, annotation).
    #[arg(long)]
    report: Option<PathBuf>,
    /// Per-K aggregate CSV.
    #[arg(long)]
    csv: Option<PathBuf>,
    /// Scaling table CSV.
    #[arg(long)]
    scaling_csv: Option<PathBuf>,
    /// Skip the area and thread scaling measurements.
    #[arg(long)]
    no_scaling: bool,
    /// Images processed concurrently.
    #[arg(long, default_value_t = 1)]
    jobs: usize,
}

impl ModelArgs {
    fn run_config(&self, grid: GridSpec) -> RunConfig {
        RunConfig {
            grid,
            em: EmConfig {
                iterations: self.iters,
                lambda: self.lambda,
                eps_spatial: self.eps_s,
                eps_color: self.eps_c,
            },
            threads: self
                .threads
                .unwrap_or_else(|| std::thread::available_parallelism().map_or(1, |n| n.get())),
            repeat: self.repeat,
            total_time: self.total_time,
            boundary_tolerance: self.br_tolerance,
        }
    }

    fn interval(&self) -> Option<GridSpec> {
        self.interval.as_ref().map(|v| match v[..] {
            [v] => GridSpec::Interval(v, v),
            [vx, vy, ..] => GridSpec::Interval(vx, vy),
            [] => unreachable!("clap requires a value"),
        })
    }
}

fn segment_cmd(args: SegmentArgs) -> Result<()> {
    let grid = args
        .model
        .interval()
        .or(args.superpixels.map(GridSpec::Superpixels))
        .ok_or_else(|| Error::Usage("one of --superpixels or --interval is required".into()))?;
    let cfg = args.model.run_config(grid);
    let outputs = Outputs {
        labels: args.labels_out,
        overlay: args.overlay_out,
    };
    let run = run_single(&args.input, &args.gt, &outputs, &cfg)?;
    if let Some(path) = &args.report {
        let ks: Vec<usize> = grid.requested().into_iter().collect();
        write_jsonl(path, &cfg.echo(&ks, 1), &run.records)?;
    }
    println!("{}", serde_json::to_string(&run.report)?);
    Ok(())
}

fn opt(v: Option<f64>) -> String {
    v.map_or_else(|| "-".into(), |x| format!("{x:.4}"))
}

fn print_outcome(out: &BenchOutcome) {
    println!("K\timages\tsuperpixels\tBR\tUE\tASA\truntime_ms");
    for r in &out.aggregate {
        println!(
            "{}\t{}\t{:.1}\t{}\t{}\t{}\t{:.2}",
            r.superpixels,
            r.images,
            r.mean_superpixel_count,
            opt(r.mean_boundary_recall),
            opt(r.mean_undersegmentation_error),
            opt(r.mean_achievable_accuracy),
            r.mean_runtime_ms
        );
    }
    if let Some(s) = &out.scaling {
        print_scaling(s);
    }
}

fn print_scaling(s: &Scaling) {
    println!("\nscaling on {} (R^2 of runtime vs pixels: {:.4})", s.source, s.area_r_squared);
    println!("table\tpixels\tthreads\truntime_ms\tratio\tspeedup\tidentical");
    for r in &s.rows {
        println!(
            "{}\t{}\t{}\t{:.2}\t{}\t{}\t{}",
            r.table,
            r.pixels,
            r.threads,
            r.runtime_ms,
            opt(r.ratio),
            opt(r.speedup),
            r.identical_labels.map_or("-".into(), |b| b.to_string())
        );
    }
}

fn bench_cmd(args: BenchArgs) -> Result<()> {
    let grids = match args.model.interval() {
        Some(g) => vec![g],
        None => args.superpixels.iter().map(|&k| GridSpec::Superpixels(k)).collect(),
    };
    let run = args.model.run_config(grids[0]);
    let cfg = BenchConfig {
        run,
        grids,
        gt_dir: args.gt,
        jobs: args.jobs,
        scaling: !args.no_scaling,
    };
    let out = run_benchmark(&args.dir, &cfg)?;
    if let Some(path) = &args.report {
        write_jsonl(path, &out.echo, &out.records)?;
    }
    if let Some(path) = &args.csv {
        write_csv(path, &out.aggregate)?;
    }
    if let (Some(path), Some(s)) = (&args.scaling_csv, &out.scaling) {
        write_csv(path, &s.rows)?;
    }
    print_outcome(&out);
    Ok(())
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => ExitCode::SUCCESS,
                _ => ExitCode::from(1),
            };
        }
    };
    let result = match cli.command {
        Command::Segment(args) => segment_cmd(args),
        Command::Bench(args) => bench_cmd(args),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
