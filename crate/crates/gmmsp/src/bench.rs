//! Single-image runs and directory benchmarks.

use std::path::{Path, PathBuf};
use std::time::{Duration, Instant};

use gmmsp_core::labeling::CONNECTIVITY;
use gmmsp_core::metrics::{self, GroundTruth};
use gmmsp_core::{segment, EmConfig, FeatureImage, GridGeometry, LabelMap, RasterImage};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::io;
use crate::overlay::{draw_boundaries, BOUNDARY_COLOR};
use crate::report::{aggregate, AggregateRow, ConfigEcho, MetricsReport};

/// How the superpixel grid is requested.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum GridSpec {
    /// Approximate superpixel count `K`.
    Superpixels(usize),
    /// Explicit `(v_x, v_y)` cell size.
    Interval(usize, usize),
}

impl GridSpec {
    pub fn geometry(self, width: usize, height: usize) -> Result<GridGeometry> {
        Ok(match self {
            Self::Superpixels(k) => GridGeometry::from_count(width, height, k)?,
            Self::Interval(vx, vy) => GridGeometry::from_intervals(width, height, vx, vy)?,
        })
    }

    pub fn requested(self) -> Option<usize> {
        match self {
            Self::Superpixels(k) => Some(k),
            Self::Interval(..) => None,
        }
    }
}

#[derive(Debug, Clone)]
pub struct RunConfig {
    pub grid: GridSpec,
    pub em: EmConfig,
    pub threads: usize,
    /// Timed repetitions; the median is reported.
    pub repeat: usize,
    /// Include decoding and encoding in the timed region.
    pub total_time: bool,
    pub boundary_tolerance: usize,
}

impl RunConfig {
    pub fn new(grid: GridSpec) -> Self {
        Self {
            grid,
            em: EmConfig::default(),
            threads: 1,
            repeat: 1,
            total_time: false,
            boundary_tolerance: metrics::DEFAULT_BOUNDARY_TOLERANCE,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.threads == 0 {
            return Err(Error::Usage("--threads must be at least 1".into()));
        }
        if self.repeat == 0 {
            return Err(Error::Usage("--repeat must be at least 1".into()));
        }
        match self.grid {
            GridSpec::Superpixels(0) => return Err(Error::Usage("--superpixels must be at least 1".into())),
            GridSpec::Interval(vx, vy) if vx == 0 || vy == 0 => {
                return Err(Error::Usage("--interval must be at least 1".into()))
            }
            _ => {}
        }
        self.em.validate().map_err(|e| Error::Usage(e.to_string()))
    }

    pub fn echo(&self, superpixels: &[usize], jobs: usize) -> ConfigEcho {
        ConfigEcho {
            version: env!("CARGO_PKG_VERSION").to_string(),
            superpixels: superpixels.to_vec(),
            interval: match self.grid {
                GridSpec::Interval(vx, vy) => Some((vx, vy)),
                GridSpec::Superpixels(_) => None,
            },
            iterations: self.em.iterations,
            lambda: self.em.lambda,
            eps_s: self.em.eps_spatial,
            eps_c: self.em.eps_color,
            threads: self.threads,
            jobs,
            repeat: self.repeat,
            total_time: self.total_time,
            boundary_tolerance: self.boundary_tolerance,
            connectivity: CONNECTIVITY,
        }
    }
}

/// Where a single run writes its images.
#[derive(Debug, Clone, Default)]
pub struct Outputs {
    pub labels: Option<PathBuf>,
    pub overlay: Option<PathBuf>,
}

#[derive(Debug, Clone)]
pub struct SingleRun {
    /// Annotations combined: boundary recall over the union, UE and ASA averaged.
    pub report: MetricsReport,
    /// One report per annotation, or a copy of `report` without ground truth.
    pub records: Vec<MetricsReport>,
    pub labels: LabelMap,
}

pub fn thread_pool(threads: usize) -> Result<rayon::ThreadPool> {
    rayon::ThreadPoolBuilder::new()
        .num_threads(threads)
        .build()
        .map_err(|e| Error::Usage(format!("cannot start {threads} threads: {e}")))
}

/// Features, geometry, EM, labeling and connectivity for one raster.
pub fn segment_raster(img: &RasterImage, grid: GridSpec, em: &EmConfig) -> Result<(LabelMap, GridGeometry)> {
    let geom = grid.geometry(img.width(), img.height())?;
    let features = FeatureImage::from_raster(img);
    Ok((segment(&features, &geom, em)?.labels, geom))
}

fn median(mut times: Vec<Duration>) -> Duration {
    times.sort();
    times[times.len() / 2]
}

fn encode_outputs(img: &RasterImage, labels: &LabelMap, outputs: &Outputs) -> Result<Vec<(PathBuf, Vec<u8>)>> {
    let mut files = Vec::new();
    if let Some(p) = &outputs.labels {
        files.push((p.clone(), io::encode_labels_for(p, labels)?));
    }
    if let Some(p) = &outputs.overlay {
        files.push((p.clone(), io::encode_image_for(p, &draw_boundaries(img, labels, BOUNDARY_COLOR)?)?));
    }
    Ok(files)
}

fn display_name(path: &Path) -> String {
    path.file_name()
        .map_or_else(|| path.display().to_string(), |n| n.to_string_lossy().into_owned())
}

/// Segments `input`, writes the requested outputs and scores against `gt`.
/// Without `total_time` the clock covers feature extraction through
/// connectivity enforcement only.
pub fn run_single(input: &Path, gt: &[PathBuf], outputs: &Outputs, cfg: &RunConfig) -> Result<SingleRun> {
    cfg.validate()?;
    let truths = gt
        .iter()
        .map(|p| io::load_labels(p).map(GroundTruth::from))
        .collect::<Result<Vec<_>>>()?;
    let pool = thread_pool(cfg.threads)?;

    let preloaded = if cfg.total_time { None } else { Some(io::load_image(input)?) };
    let mut times = Vec::with_capacity(cfg.repeat);
    let mut last = None;
    for _ in 0..cfg.repeat {
        let start = Instant::now();
        let fresh;
        let img = match &preloaded {
            Some(img) => img,
            None => {
                fresh = io::load_image(input)?;
                &fresh
            }
        };
        let start = if cfg.total_time { start } else { Instant::now() };
        let (labels, geom) = pool.install(|| segment_raster(img, cfg.grid, &cfg.em))?;
        let files = if cfg.total_time {
            Some(encode_outputs(img, &labels, outputs)?)
        } else {
            None
        };
        times.push(start.elapsed());
        last = Some((labels, geom, files));
    }
    let (labels, geom, files) = last.expect("repeat is at least 1");
    let files = match (files, &preloaded) {
        (Some(f), _) => f,
        (None, Some(img)) => encode_outputs(img, &labels, outputs)?,
        (None, None) => unreachable!("outputs are encoded in the timed loop with total_time"),
    };
    for (path, bytes) in &files {
        io::write(path, bytes)?;
    }

    let base = MetricsReport {
        image: display_name(input),
        annotation: None,
        width: geom.width(),
        height: geom.height(),
        requested_superpixels: cfg.grid.requested(),
        grid_superpixels: geom.num_superpixels(),
        interval_x: geom.interval_x(),
        interval_y: geom.interval_y(),
        superpixel_count: labels.count_distinct(),
        boundary_recall: None,
        undersegmentation_error: None,
        achievable_accuracy: None,
        runtime_ms: median(times).as_secs_f64() * 1e3,
    };
    let mut report = base.clone();
    let mut records = Vec::new();
    if truths.is_empty() {
        records.push(base);
    } else {
        for (path, truth) in gt.iter().zip(&truths) {
            if truth.segments().dims() != labels.dims() {
                return Err(Error::from(gmmsp_core::Error::mismatch(labels.dims(), truth.segments().dims())).in_file(path));
            }
        }
        let acc = metrics::evaluate(&labels, &truths, cfg.boundary_tolerance)?;
        report.boundary_recall = Some(acc.boundary_recall);
        report.undersegmentation_error = Some(acc.undersegmentation_error);
        report.achievable_accuracy = Some(acc.achievable_accuracy);
        for (path, truth) in gt.iter().zip(&truths) {
            let one = metrics::evaluate(&labels, std::slice::from_ref(truth), cfg.boundary_tolerance)?;
            records.push(MetricsReport {
                annotation: Some(display_name(path)),
                boundary_recall: Some(one.boundary_recall),
                undersegmentation_error: Some(one.undersegmentation_error),
                achievable_accuracy: Some(one.achievable_accuracy),
                ..base.clone()
            });
        }
    }
    Ok(SingleRun { report, records, labels })
}

#[derive(Debug, Clone)]
pub struct BenchConfig {
    /// Template; its `grid` is replaced by each entry of `grids`.
    pub run: RunConfig,
    pub grids: Vec<GridSpec>,
    pub gt_dir: Option<PathBuf>,
    /// Images processed concurrently, each with its own thread pool.
    pub jobs: usize,
    pub scaling: bool,
}

/// One row of a scaling table.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ScalingRow {
    /// `area` (fixed cell size, growing image) or `threads` (fixed image).
    pub table: String,
    pub pixels: usize,
    pub threads: usize,
    pub runtime_ms: f64,
    /// Runtime relative to the previous `area` row.
    pub ratio: Option<f64>,
    /// One-thread runtime over this runtime.
    pub speedup: Option<f64>,
    /// Labels equal to the one-thread labels.
    pub identical_labels: Option<bool>,
}

#[derive(Debug, Clone)]
pub struct Scaling {
    pub source: String,
    pub rows: Vec<ScalingRow>,
    /// Coefficient of determination of runtime against pixel count.
    pub area_r_squared: f64,
}

#[derive(Debug, Clone)]
pub struct BenchOutcome {
    pub echo: ConfigEcho,
    /// Per-image reports with annotations combined.
    pub reports: Vec<MetricsReport>,
    /// Per (image, annotation) records for the JSONL output.
    pub records: Vec<MetricsReport>,
    pub failures: Vec<(PathBuf, String)>,
    pub aggregate: Vec<AggregateRow>,
    pub scaling: Option<Scaling>,
}

fn list_files(dir: &Path) -> Result<Vec<PathBuf>> {
    let entries = std::fs::read_dir(dir).map_err(|e| Error::io(dir, e))?;
    let mut files = Vec::new();
    for entry in entries {
        let path = entry.map_err(|e| Error::io(dir, e))?.path();
        let hidden = path.file_name().is_some_and(|n| n.to_string_lossy().starts_with('.'));
        if path.is_file() && !hidden {
            files.push(path);
        }
    }
    files.sort();
    Ok(files)
}

/// Annotations for `image` in `gt_dir`: files named `<stem>.*` or
/// `<stem>_*.*`, plus every file inside a `<stem>/` subdirectory.
pub fn ground_truth_for(image: &Path, gt_dir: &Path) -> Result<Vec<PathBuf>> {
    let Some(stem) = image.file_stem().map(|s| s.to_string_lossy().into_owned()) else {
        return Ok(Vec::new());
    };
    let mut found: Vec<PathBuf> = list_files(gt_dir)?
        .into_iter()
        .filter(|p| {
            p.file_stem()
                .map(|s| s.to_string_lossy())
                .is_some_and(|s| s == stem.as_str() || s.starts_with(&format!("{stem}_")))
        })
        .collect();
    let sub = gt_dir.join(&stem);
    if sub.is_dir() {
        found.extend(list_files(&sub)?);
    }
    Ok(found)
}

fn run_file(path: &Path, cfg: &BenchConfig) -> Result<Vec<SingleRun>> {
    let gt = match &cfg.gt_dir {
        Some(dir) => ground_truth_for(path, dir)?,
        None => Vec::new(),
    };
    cfg.grids
        .iter()
        .map(|&grid| {
            let run = RunConfig { grid, ..cfg.run.clone() };
            run_single(path, &gt, &Outputs::default(), &run)
        })
        .collect()
}

/// Runs every file in `dir` at every requested grid. Unreadable files are
/// skipped with a warning on stderr; the call fails only when nothing ran.
pub fn run_benchmark(dir: &Path, cfg: &BenchConfig) -> Result<BenchOutcome> {
    if cfg.grids.is_empty() {
        return Err(Error::Usage("at least one grid size is required".into()));
    }
    if cfg.jobs == 0 {
        return Err(Error::Usage("--jobs must be at least 1".into()));
    }
    cfg.run.validate()?;
    let files = list_files(dir)?;
    if files.is_empty() {
        return Err(Error::Usage(format!("{}: no input files", dir.display())));
    }

    let results: Vec<Result<Vec<SingleRun>>> = if cfg.jobs > 1 {
        thread_pool(cfg.jobs)?.install(|| files.par_iter().map(|p| run_file(p, cfg)).collect())
    } else {
        files.iter().map(|p| run_file(p, cfg)).collect()
    };

    let mut reports = Vec::new();
    let mut records = Vec::new();
    let mut failures = Vec::new();
    let mut largest: Option<(usize, &Path)> = None;
    for (path, result) in files.iter().zip(results) {
        match result {
            Ok(runs) => {
                for run in runs {
                    let pixels = run.report.width * run.report.height;
                    if largest.is_none_or(|(n, _)| pixels > n) {
                        largest = Some((pixels, path));
                    }
                    reports.push(run.report);
                    records.extend(run.records);
                }
            }
            Err(e) => {
                eprintln!("warning: skipping {}: {e}", path.display());
                failures.push((path.clone(), e.to_string()));
            }
        }
    }
    let Some((_, source)) = largest else {
        return Err(Error::AllFailed(failures.len()));
    };

    let scaling = if cfg.scaling {
        let run = RunConfig { grid: cfg.grids[0], ..cfg.run.clone() };
        Some(scaling_tables(source, &run)?)
    } else {
        None
    };
    let grids: Vec<usize> = cfg.grids.iter().filter_map(|g| g.requested()).collect();
    Ok(BenchOutcome {
        echo: cfg.run.echo(&grids, cfg.jobs),
        aggregate: aggregate(&reports),
        reports,
        records,
        failures,
        scaling,
    })
}

/// `img` repeated `nx × ny` times.
pub fn tile(img: &RasterImage, nx: usize, ny: usize) -> RasterImage {
    let (w, h, c) = (img.width(), img.height(), img.channels());
    let row = w * c;
    let mut data = Vec::with_capacity(row * nx * h * ny);
    for _ in 0..ny {
        for y in 0..h {
            let src = &img.data()[y * row..(y + 1) * row];
            for _ in 0..nx {
                data.extend_from_slice(src);
            }
        }
    }
    RasterImage::new(w * nx, h * ny, c, data).expect("tiled size is consistent")
}

/// Median wall time of `repeat` segmentations of `img` on `threads` threads.
pub fn time_segmentation(
    img: &RasterImage,
    grid: GridSpec,
    em: &EmConfig,
    threads: usize,
    repeat: usize,
) -> Result<(Duration, LabelMap)> {
    let pool = thread_pool(threads)?;
    let mut times = Vec::with_capacity(repeat);
    let mut labels = None;
    for _ in 0..repeat.max(1) {
        let start = Instant::now();
        let (l, _) = pool.install(|| segment_raster(img, grid, em))?;
        times.push(start.elapsed());
        labels = Some(l);
    }
    Ok((median(times), labels.expect("at least one repetition")))
}

/// Least-squares `R²` of `y` against `x`.
pub fn r_squared(points: &[(f64, f64)]) -> f64 {
    let n = points.len() as f64;
    let mx = points.iter().map(|p| p.0).sum::<f64>() / n;
    let my = points.iter().map(|p| p.1).sum::<f64>() / n;
    let sxy: f64 = points.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
    let sxx: f64 = points.iter().map(|p| (p.0 - mx).powi(2)).sum();
    let syy: f64 = points.iter().map(|p| (p.1 - my).powi(2)).sum();
    if sxx == 0.0 || syy == 0.0 {
        return 1.0;
    }
    sxy * sxy / (sxx * syy)
}

/// Runtime against area (the image tiled 1×1, 2×1, 2×2 at the cell size it
/// gets under `run.grid`) and against thread count (1, 2, 4 and
/// `run.threads`).
pub fn scaling_tables(source: &Path, run: &RunConfig) -> Result<Scaling> {
    let img = io::load_image(source)?;
    let geom = run.grid.geometry(img.width(), img.height())?;
    let fixed = GridSpec::Interval(geom.interval_x(), geom.interval_y());
    let repeat = run.repeat.max(3);
    let mut rows = Vec::new();

    let mut points = Vec::new();
    let mut prev: Option<f64> = None;
    for (nx, ny) in [(1, 1), (2, 1), (2, 2)] {
        let tiled = tile(&img, nx, ny);
        let (t, _) = time_segmentation(&tiled, fixed, &run.em, run.threads, repeat)?;
        let ms = t.as_secs_f64() * 1e3;
        let pixels = tiled.width() * tiled.height();
        points.push((pixels as f64, ms));
        rows.push(ScalingRow {
            table: "area".into(),
            pixels,
            threads: run.threads,
            runtime_ms: ms,
            ratio: prev.map(|p| ms / p),
            speedup: None,
            identical_labels: None,
        });
        prev = Some(ms);
    }

    let mut counts = vec![1, 2, 4, run.threads];
    counts.sort_unstable();
    counts.dedup();
    let mut baseline: Option<(f64, LabelMap)> = None;
    for threads in counts {
        let (t, labels) = time_segmentation(&img, fixed, &run.em, threads, repeat)?;
        let ms = t.as_secs_f64() * 1e3;
        let (speedup, identical) = match &baseline {
            Some((one, l1)) => (one / ms, *l1 == labels),
            None => (1.0, true),
        };
        rows.push(ScalingRow {
            table: "threads".into(),
            pixels: img.width() * img.height(),
            threads,
            runtime_ms: ms,
            ratio: None,
            speedup: Some(speedup),
            identical_labels: Some(identical),
        });
        if baseline.is_none() {
            baseline = Some((ms, labels));
        }
    }

    Ok(Scaling {
        source: display_name(source),
        rows,
        area_r_squared: r_squared(&points),
    })
}
