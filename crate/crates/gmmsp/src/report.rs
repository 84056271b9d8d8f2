//! JSON-lines records and CSV summaries.
//!
//! Every JSONL file opens with a `config` record echoing the run settings,
//! followed by one `image` record per (image, annotation) pair.

use std::collections::BTreeMap;
use std::fs::File;
use std::io::{BufWriter, Write};
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Scores and timing for one segmentation. Metric fields are absent when no
/// ground truth was supplied.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MetricsReport {
    pub image: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub annotation: Option<String>,
    pub width: usize,
    pub height: usize,
    /// `K` requested on the command line, if given as a count.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub requested_superpixels: Option<usize>,
    /// `K` of the realised grid.
    pub grid_superpixels: usize,
    pub interval_x: usize,
    pub interval_y: usize,
    /// Distinct labels in the final map.
    pub superpixel_count: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub boundary_recall: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub undersegmentation_error: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub achievable_accuracy: Option<f64>,
    pub runtime_ms: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ConfigEcho {
    pub version: String,
    pub superpixels: Vec<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub interval: Option<(usize, usize)>,
    pub iterations: usize,
    pub lambda: f64,
    pub eps_s: f64,
    pub eps_c: f64,
    pub threads: usize,
    pub jobs: usize,
    pub repeat: usize,
    pub total_time: bool,
    pub boundary_tolerance: usize,
    pub connectivity: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "record", rename_all = "lowercase")]
pub enum Record {
    Config(ConfigEcho),
    Image(MetricsReport),
}

pub fn write_jsonl(path: &Path, config: &ConfigEcho, reports: &[MetricsReport]) -> Result<()> {
    let file = File::create(path).map_err(|e| Error::io(path, e))?;
    let mut out = BufWriter::new(file);
    let mut line = |r: &Record| -> Result<()> {
        serde_json::to_writer(&mut out, r)?;
        out.write_all(b"\n").map_err(|e| Error::io(path, e))
    };
    line(&Record::Config(config.clone()))?;
    for r in reports {
        line(&Record::Image(r.clone()))?;
    }
    out.flush().map_err(|e| Error::io(path, e))
}

pub fn read_jsonl(path: &Path) -> Result<Vec<Record>> {
    let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
    text.lines()
        .filter(|l| !l.trim().is_empty())
        .map(|l| serde_json::from_str(l).map_err(Error::from))
        .collect()
}

/// Means over the images run at one requested superpixel count.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AggregateRow {
    pub superpixels: usize,
    pub images: usize,
    pub mean_superpixel_count: f64,
    pub mean_boundary_recall: Option<f64>,
    pub mean_undersegmentation_error: Option<f64>,
    pub mean_achievable_accuracy: Option<f64>,
    pub mean_runtime_ms: f64,
}

fn mean_of(values: impl Iterator<Item = Option<f64>>) -> Option<f64> {
    let v: Vec<f64> = values.flatten().collect();
    (!v.is_empty()).then(|| v.iter().sum::<f64>() / v.len() as f64)
}

/// Groups per-image reports (one per image, annotations already combined)
/// by requested count, falling back to the grid's `K`.
pub fn aggregate(reports: &[MetricsReport]) -> Vec<AggregateRow> {
    let mut groups: BTreeMap<usize, Vec<&MetricsReport>> = BTreeMap::new();
    for r in reports {
        let k = r.requested_superpixels.unwrap_or(r.grid_superpixels);
        groups.entry(k).or_default().push(r);
    }
    groups
        .into_iter()
        .map(|(k, rs)| {
            let n = rs.len() as f64;
            AggregateRow {
                superpixels: k,
                images: rs.len(),
                mean_superpixel_count: rs.iter().map(|r| r.superpixel_count as f64).sum::<f64>() / n,
                mean_boundary_recall: mean_of(rs.iter().map(|r| r.boundary_recall)),
                mean_undersegmentation_error: mean_of(rs.iter().map(|r| r.undersegmentation_error)),
                mean_achievable_accuracy: mean_of(rs.iter().map(|r| r.achievable_accuracy)),
                mean_runtime_ms: rs.iter().map(|r| r.runtime_ms).sum::<f64>() / n,
            }
        })
        .collect()
}

pub fn write_csv<T: Serialize>(path: &Path, rows: &[T]) -> Result<()> {
    let mut w = csv::Writer::from_path(path)?;
    for r in rows {
        w.serialize(r)?;
    }
    w.flush().map_err(|e| Error::io(path, e))
}
