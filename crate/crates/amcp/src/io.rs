//! On-disk formats.
//!
//! * Edge list: CSV with header `source,target,weight`. The weight column is
//!   optional and defaults to 1. A row with an empty `target` declares a
//!   module that has no edges.
//! * Partition: CSV with header `module,cluster`. Cluster labels are
//!   arbitrary strings on input and canonical integers on output.
//! * Trace: CSV with header `step,module,from_cluster,to_cluster,u_coh,u_sta,ratio,sw`.
//! * Sweep: CSV with header `tau_sta,u_coh,u_sta,sw,steps,diverged`.
//!
//! All CSV inputs are UTF-8; lines starting with `#` are comments.
//! Floats are written in shortest round-trip form.

use std::collections::{BTreeMap, HashSet};
use std::io::{Read, Write};
use std::path::Path;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::baseline::ComparisonRow;
use crate::graph::DependencyGraph;
use crate::negotiation::{NegotiationResult, StepRecord, ThresholdConfig};
use crate::partition::Partition;
use crate::sweep::SweepRow;

#[derive(Debug, Error)]
pub enum FormatError {
    #[error("{path}: {source}")]
    File {
        path: String,
        #[source]
        source: std::io::Error,
    },
    #[error(transparent)]
    Io(#[from] std::io::Error),
    #[error(transparent)]
    Csv(#[from] csv::Error),
    #[error(transparent)]
    Json(#[from] serde_json::Error),
    #[error("{0}")]
    Format(String),
    #[error(transparent)]
    Model(#[from] crate::Error),
}

fn reader<R: Read>(r: R) -> csv::Reader<R> {
    csv::ReaderBuilder::new()
        .comment(Some(b'#'))
        .trim(csv::Trim::All)
        .flexible(true)
        .from_reader(r)
}

fn column(headers: &csv::StringRecord, name: &str) -> Option<usize> {
    headers.iter().position(|h| h == name)
}

fn required(headers: &csv::StringRecord, name: &str) -> Result<usize, FormatError> {
    column(headers, name).ok_or_else(|| FormatError::Format(format!("missing `{name}` column")))
}

pub fn read_edges<R: Read>(input: R) -> Result<DependencyGraph, FormatError> {
    let mut rdr = reader(input);
    let headers = rdr.headers()?.clone();
    let (si, ti) = (required(&headers, "source")?, required(&headers, "target")?);
    let wi = column(&headers, "weight");
    let mut edges = Vec::new();
    let mut declared = Vec::new();
    for (line, rec) in rdr.records().enumerate() {
        let rec = rec?;
        let source = rec.get(si).unwrap_or("").to_owned();
        let target = rec.get(ti).unwrap_or("").to_owned();
        if target.is_empty() {
            declared.push(source);
            continue;
        }
        let weight = match wi.and_then(|i| rec.get(i)).filter(|w| !w.is_empty()) {
            None => 1,
            Some(w) => w
                .parse::<u64>()
                .map_err(|_| FormatError::Format(format!("row {}: bad weight `{w}`", line + 1)))?,
        };
        edges.push((source, target, weight));
    }
    Ok(DependencyGraph::build(edges, declared)?)
}

pub fn write_edges<W: Write>(graph: &DependencyGraph, out: W) -> Result<(), FormatError> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(["source", "target", "weight"])?;
    let mut touched = vec![false; graph.n()];
    for (s, t, _) in graph.edges() {
        touched[s] = true;
        touched[t] = true;
    }
    for (s, t, weight) in graph.edges() {
        w.write_record([graph.module_name(s), graph.module_name(t), &weight.to_string()])?;
    }
    for (i, _) in touched.iter().enumerate().filter(|(_, &t)| !t) {
        w.write_record([graph.module_name(i), "", ""])?;
    }
    w.flush()?;
    Ok(())
}

/// `(module, cluster label)` rows as they appear in a partition file.
pub type NamedAssignment = Vec<(String, String)>;

pub fn read_partition<R: Read>(input: R) -> Result<NamedAssignment, FormatError> {
    let mut rdr = reader(input);
    let headers = rdr.headers()?.clone();
    let (mi, ci) = (required(&headers, "module")?, required(&headers, "cluster")?);
    let mut rows = Vec::new();
    let mut seen = HashSet::new();
    for rec in rdr.records() {
        let rec = rec?;
        let module = rec.get(mi).unwrap_or("").to_owned();
        let cluster = rec.get(ci).unwrap_or("").to_owned();
        if module.is_empty() {
            return Err(FormatError::Format("empty module name in partition".into()));
        }
        if !seen.insert(module.clone()) {
            return Err(FormatError::Format(format!("module `{module}` listed twice")));
        }
        rows.push((module, cluster));
    }
    Ok(rows)
}

/// Orders a named assignment by `modules` (which it must cover exactly).
pub fn partition_over(modules: &[String], named: &NamedAssignment) -> Result<Partition, FormatError> {
    if named.len() != modules.len() {
        return Err(crate::Error::ModuleSetMismatch.into());
    }
    let lookup: BTreeMap<&str, &str> = named.iter().map(|(m, c)| (m.as_str(), c.as_str())).collect();
    let labels = modules
        .iter()
        .map(|m| {
            lookup
                .get(m.as_str())
                .copied()
                .ok_or_else(|| FormatError::Model(crate::Error::UnknownModule(m.clone())))
        })
        .collect::<Result<Vec<_>, _>>()?;
    Ok(Partition::from_labels(labels))
}

pub fn write_partition<W: Write>(modules: &[String], partition: &Partition, out: W) -> Result<(), FormatError> {
    if modules.len() != partition.len() {
        return Err(crate::Error::SizeMismatch {
            expected: modules.len(),
            actual: partition.len(),
        }
        .into());
    }
    let mut w = csv::Writer::from_writer(out);
    w.write_record(["module", "cluster"])?;
    for (m, c) in modules.iter().zip(partition.assignment()) {
        w.write_record([m.as_str(), &c.to_string()])?;
    }
    w.flush()?;
    Ok(())
}

/// Writes `(module, label)` rows verbatim, e.g. package names as labels.
pub fn write_named_partition<W: Write>(rows: &NamedAssignment, out: W) -> Result<(), FormatError> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(["module", "cluster"])?;
    for (m, c) in rows {
        w.write_record([m, c])?;
    }
    w.flush()?;
    Ok(())
}

/// `system,tau_sta,u_coh,u_sta,sw,steps`; `tau_sta` is empty for baselines.
pub fn write_comparison<W: Write>(rows: &[ComparisonRow], out: W) -> Result<(), FormatError> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(["system", "tau_sta", "u_coh", "u_sta", "sw", "steps"])?;
    for r in rows {
        w.write_record([
            r.system.clone(),
            r.tau_sta.map(|t| t.to_string()).unwrap_or_default(),
            r.u_coh.to_string(),
            r.u_sta.to_string(),
            r.sw.to_string(),
            r.steps.to_string(),
        ])?;
    }
    w.flush()?;
    Ok(())
}

pub fn write_trace<W: Write>(modules: &[String], trace: &[StepRecord], out: W) -> Result<(), FormatError> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record([
        "step",
        "module",
        "from_cluster",
        "to_cluster",
        "u_coh",
        "u_sta",
        "ratio",
        "sw",
    ])?;
    for s in trace {
        w.write_record([
            s.step.to_string(),
            modules[s.mv.module].clone(),
            s.mv.from_cluster.to_string(),
            s.mv.to_cluster.to_string(),
            s.u_coh.to_string(),
            s.u_sta.to_string(),
            s.ratio.to_string(),
            s.sw.to_string(),
        ])?;
    }
    w.flush()?;
    Ok(())
}

pub fn write_sweep<W: Write>(rows: &[SweepRow], out: W) -> Result<(), FormatError> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(["tau_sta", "u_coh", "u_sta", "sw", "steps", "diverged"])?;
    for r in rows {
        w.write_record([
            r.tau_sta.to_string(),
            r.u_coh.to_string(),
            r.u_sta.to_string(),
            r.sw.to_string(),
            r.steps.to_string(),
            r.diverged.to_string(),
        ])?;
    }
    w.flush()?;
    Ok(())
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Utilities {
    pub u_coh: f64,
    pub u_sta: f64,
    pub sw: f64,
}

impl Utilities {
    pub fn new(u_coh: f64, u_sta: f64) -> Self {
        Utilities {
            u_coh,
            u_sta,
            sw: u_coh + u_sta,
        }
    }
}

/// JSON summary of one negotiation.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ResultReport {
    pub termination: String,
    pub steps: usize,
    pub initial: Utilities,
    #[serde(rename = "final")]
    pub final_: Utilities,
    pub ratio_decreases: usize,
    pub config: ThresholdConfig,
    pub final_partition: BTreeMap<String, usize>,
}

impl ResultReport {
    pub fn new(modules: &[String], result: &NegotiationResult) -> Self {
        ResultReport {
            termination: result.termination.to_string(),
            steps: result.steps(),
            initial: Utilities::new(result.initial_u_coh, result.initial_u_sta),
            final_: Utilities::new(result.final_u_coh, result.final_u_sta),
            ratio_decreases: result.ratio_decreases,
            config: result.config,
            final_partition: modules
                .iter()
                .cloned()
                .zip(result.final_partition.assignment().iter().copied())
                .collect(),
        }
    }
}

pub fn write_json<T: Serialize, W: Write>(value: &T, mut out: W) -> Result<(), FormatError> {
    serde_json::to_writer_pretty(&mut out, value)?;
    out.write_all(b"\n")?;
    Ok(())
}

pub fn open(path: &Path) -> Result<std::fs::File, FormatError> {
    std::fs::File::open(path).map_err(|source| FormatError::File {
        path: path.display().to_string(),
        source,
    })
}

pub fn create(path: &Path) -> Result<std::io::BufWriter<std::fs::File>, FormatError> {
    std::fs::File::create(path)
        .map(std::io::BufWriter::new)
        .map_err(|source| FormatError::File {
            path: path.display().to_string(),
            source,
        })
}
