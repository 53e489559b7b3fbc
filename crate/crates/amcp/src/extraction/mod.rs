//! Dependency graphs from compiled Java classes.
//!
//! Modules are the classes found in the input (top-level classes by default,
//! nested `Outer$Inner` classes folded into `Outer`). Only references between
//! modules of the input survive; JDK and library classes are dropped. The
//! package structure gives the initial decomposition.

mod classfile;

pub use classfile::{element_class, parse_class_file, ClassFileError, ClassFileSummary};

use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::io::Read;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::graph::DependencyGraph;
use crate::partition::Partition;
use crate::restriction::CommonRestriction;

#[derive(Debug, Error)]
pub enum ExtractError {
    #[error("{path}: {source}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },
    #[error("{path}: unreadable archive: {source}")]
    Archive {
        path: String,
        #[source]
        source: zip::result::ZipError,
    },
    #[error("{path}: {source}")]
    ClassFile {
        path: String,
        #[source]
        source: ClassFileError,
    },
    #[error("zero class files")]
    ZeroClassFiles,
    #[error(transparent)]
    Model(#[from] crate::Error),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct ExtractOptions {
    /// Fold `Outer$Inner` into `Outer`.
    pub merge_nested: bool,
    /// Weight an edge by the number of distinct referencing class files
    /// instead of 1.
    pub count_weights: bool,
}

impl Default for ExtractOptions {
    fn default() -> Self {
        ExtractOptions {
            merge_nested: true,
            count_weights: false,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct VersionSnapshot {
    pub label: String,
    pub graph: DependencyGraph,
    /// One cluster per Java package.
    pub package_partition: Partition,
}

impl VersionSnapshot {
    pub fn package_names(&self) -> Vec<String> {
        self.graph.modules().iter().map(|m| package_of(m).to_owned()).collect()
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ExtractionManifest {
    pub label: String,
    pub class_files: usize,
    pub module_count: usize,
    pub package_count: usize,
    pub edge_count: usize,
    /// Distinct `(module, external class)` references that were discarded.
    pub dropped_references: usize,
    pub options: ExtractOptions,
}

/// Dotted module name for an internal class name, folding nested classes
/// when asked.
pub fn module_name(internal: &str, merge_nested: bool) -> String {
    let (pkg, simple) = match internal.rfind('/') {
        Some(i) => (&internal[..=i], &internal[i + 1..]),
        None => ("", internal),
    };
    let simple = match (merge_nested, simple.find('$')) {
        (true, Some(i)) if i > 0 => &simple[..i],
        _ => simple,
    };
    format!("{pkg}{simple}").replace('/', ".")
}

pub fn package_of(module: &str) -> &str {
    module.rfind('.').map_or("", |i| &module[..i])
}

/// Builds a snapshot from already-parsed classes. Duplicate class names keep
/// the first occurrence.
pub fn snapshot_from_classes(
    label: &str,
    classes: &[ClassFileSummary],
    options: &ExtractOptions,
) -> Result<(VersionSnapshot, ExtractionManifest), ExtractError> {
    if classes.is_empty() {
        return Err(ExtractError::ZeroClassFiles);
    }
    let mut seen = BTreeSet::new();
    let classes: Vec<&ClassFileSummary> = classes.iter().filter(|c| seen.insert(c.class_name.as_str())).collect();

    let modules: BTreeSet<String> = classes
        .iter()
        .map(|c| module_name(&c.class_name, options.merge_nested))
        .collect();
    let mut weights: BTreeMap<(String, String), u64> = BTreeMap::new();
    let mut dropped = BTreeSet::new();
    for class in &classes {
        let from = module_name(&class.class_name, options.merge_nested);
        let mut targets = BTreeSet::new();
        for r in &class.referenced_classes {
            let to = module_name(r, options.merge_nested);
            if !modules.contains(&to) {
                dropped.insert((from.clone(), r.clone()));
            } else if to != from {
                targets.insert(to);
            }
        }
        for to in targets {
            let w = weights.entry((from.clone(), to)).or_insert(0);
            *w = if options.count_weights { *w + 1 } else { 1 };
        }
    }

    let graph = DependencyGraph::build(
        weights.into_iter().map(|((s, t), w)| (s, t, w)),
        modules.iter().cloned(),
    )?;
    let package_partition = Partition::from_labels(graph.modules().iter().map(|m| package_of(m)));
    let manifest = ExtractionManifest {
        label: label.to_owned(),
        class_files: classes.len(),
        module_count: graph.n(),
        package_count: package_partition.k(),
        edge_count: graph.edge_count(),
        dropped_references: dropped.len(),
        options: *options,
    };
    Ok((
        VersionSnapshot {
            label: label.to_owned(),
            graph,
            package_partition,
        },
        manifest,
    ))
}

fn skipped(name: &str) -> bool {
    let file = name.rsplit('/').next().unwrap_or(name);
    !file.ends_with(".class") || file == "module-info.class" || file == "package-info.class"
}

fn read_archive(path: &Path) -> Result<Vec<ClassFileSummary>, ExtractError> {
    let display = path.display().to_string();
    let file = std::fs::File::open(path).map_err(|source| ExtractError::Io {
        path: display.clone(),
        source,
    })?;
    let archive_err = |source| ExtractError::Archive {
        path: display.clone(),
        source,
    };
    let mut zip = zip::ZipArchive::new(file).map_err(archive_err)?;
    let mut names: Vec<String> = zip.file_names().filter(|n| !skipped(n)).map(String::from).collect();
    names.sort();
    let mut out = Vec::with_capacity(names.len());
    for name in names {
        let mut entry = zip.by_name(&name).map_err(archive_err)?;
        let mut bytes = Vec::with_capacity(entry.size() as usize);
        entry.read_to_end(&mut bytes).map_err(|source| ExtractError::Io {
            path: format!("{display}!{name}"),
            source,
        })?;
        out.push(parse_class_file(&bytes).map_err(|source| ExtractError::ClassFile {
            path: format!("{display}!{name}"),
            source,
        })?);
    }
    Ok(out)
}

fn read_tree(root: &Path) -> Result<Vec<ClassFileSummary>, ExtractError> {
    let mut files: Vec<PathBuf> = Vec::new();
    for entry in walkdir::WalkDir::new(root) {
        let entry = entry.map_err(|e| ExtractError::Io {
            path: root.display().to_string(),
            source: e.into(),
        })?;
        if entry.file_type().is_file() && !skipped(&entry.file_name().to_string_lossy()) {
            files.push(entry.into_path());
        }
    }
    files.sort();
    files
        .iter()
        .map(|p| {
            let bytes = std::fs::read(p).map_err(|source| ExtractError::Io {
                path: p.display().to_string(),
                source,
            })?;
            parse_class_file(&bytes).map_err(|source| ExtractError::ClassFile {
                path: p.display().to_string(),
                source,
            })
        })
        .collect()
}

/// Reads a directory tree of `.class` files or a ZIP/JAR archive.
pub fn extract_snapshot(
    path: &Path,
    label: &str,
    options: &ExtractOptions,
) -> Result<(VersionSnapshot, ExtractionManifest), ExtractError> {
    let classes = if path.is_dir() {
        read_tree(path)?
    } else {
        read_archive(path)?
    };
    snapshot_from_classes(label, &classes, options)
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
enum SeedLabel<'a> {
    Old(&'a str),
    Fresh(usize),
}

/// Previous decomposition over every module of `graph`.
///
/// Modules present in `old` keep their old cluster. Each remaining module,
/// in name order, joins the cluster of its first (by name) dependency target
/// that already has one; with no such target it gets a fresh cluster.
pub fn seed_previous(graph: &DependencyGraph, old: &HashMap<String, String>) -> Partition {
    let mut labels: Vec<Option<SeedLabel<'_>>> = graph
        .modules()
        .iter()
        .map(|m| old.get(m).map(|c| SeedLabel::Old(c.as_str())))
        .collect();
    let mut fresh = 0;
    for m in 0..graph.n() {
        if labels[m].is_some() {
            continue;
        }
        let inherited = graph.targets(m).find_map(|t| labels[t].clone());
        labels[m] = Some(inherited.unwrap_or_else(|| {
            fresh += 1;
            SeedLabel::Fresh(fresh)
        }));
    }
    Partition::from_labels(labels.into_iter().map(|l| l.expect("every module labelled")))
}

/// Restriction to the shared classes plus the old package structure seeded
/// onto the new version.
pub fn align_versions(
    old: &VersionSnapshot,
    new: &VersionSnapshot,
) -> Result<(CommonRestriction, Partition), crate::Error> {
    let restriction = CommonRestriction::between(old.graph.modules(), new.graph.modules());
    if restriction.n_common() == 0 {
        return Err(crate::Error::NoCommonModules);
    }
    let old_labels: HashMap<String, String> = old
        .graph
        .modules()
        .iter()
        .zip(old.package_partition.assignment())
        .map(|(m, c)| (m.clone(), c.to_string()))
        .collect();
    let seeded = seed_previous(&new.graph, &old_labels);
    Ok((restriction, seeded))
}
