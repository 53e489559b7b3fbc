use std::collections::HashMap;
use std::path::{Path, PathBuf};

use amcp::baseline::{self, compare_runs, hillclimb_turbomq};
use amcp::benchgen::{self, BenchSpec};
use amcp::extraction::{self, ExtractOptions};
use amcp::io::{self, ResultReport};
use amcp::metrics::{self, MojoMode};
use amcp::negotiation::{negotiate_with, NegotiationOptions, ThresholdConfig};
use amcp::{CommonRestriction, DependencyGraph, Partition};
use log::{info, warn};
use serde_json::json;

use crate::{BaselineArgs, Command, EngineArgs, ExtractArgs, Failure, GenArgs, MojoArgs, NegotiateArgs, SweepArgs};

type Outcome = Result<(), Failure>;

fn with_suffix(prefix: &Path, suffix: &str) -> PathBuf {
    let mut s = prefix.as_os_str().to_owned();
    s.push(".");
    s.push(suffix);
    PathBuf::from(s)
}

fn write_with<F>(path: PathBuf, f: F) -> Outcome
where
    F: FnOnce(&mut std::io::BufWriter<std::fs::File>) -> Result<(), io::FormatError>,
{
    let mut out = io::create(&path).map_err(Failure::internal)?;
    f(&mut out).map_err(Failure::internal)?;
    info!("wrote {}", path.display());
    Ok(())
}

fn echo_config(prefix: &Path, command: &Command, extra: serde_json::Value) -> Outcome {
    let value = json!({
        "tool": "amcp",
        "version": env!("CARGO_PKG_VERSION"),
        "invocation": command,
        "summary": extra,
    });
    write_with(with_suffix(prefix, "config.json"), |w| io::write_json(&value, w))
}

fn load_graph(path: &Path) -> Result<DependencyGraph, Failure> {
    let file = io::open(path).map_err(Failure::input)?;
    io::read_edges(file).map_err(|e| Failure::input(format!("{}: {e}", path.display())))
}

fn load_named(path: &Path) -> Result<io::NamedAssignment, Failure> {
    let file = io::open(path).map_err(Failure::input)?;
    io::read_partition(file).map_err(|e| Failure::input(format!("{}: {e}", path.display())))
}

/// Previous decomposition seeded onto every module of `graph`, with the
/// restriction to the modules the file and the graph share.
fn load_previous(graph: &DependencyGraph, path: &Path) -> Result<(CommonRestriction, Partition), Failure> {
    let named = load_named(path)?;
    let mut old_names: Vec<String> = named.iter().map(|(m, _)| m.clone()).collect();
    old_names.sort();
    let restriction = CommonRestriction::between(&old_names, graph.modules());
    if restriction.n_common() == 0 {
        return Err(Failure::input(amcp::Error::NoCommonModules));
    }
    let ignored = old_names.len() - restriction.n_common();
    if ignored > 0 {
        warn!(
            "{ignored} modules of {} are not in the graph and are ignored",
            path.display()
        );
    }
    let seeded_count = graph.n() - restriction.n_common();
    if seeded_count > 0 {
        info!("seeding {seeded_count} modules missing from {}", path.display());
    }
    let old: HashMap<String, String> = named.into_iter().collect();
    Ok((restriction, extraction::seed_previous(graph, &old)))
}

fn engine_options(args: &EngineArgs) -> Result<NegotiationOptions, Failure> {
    Ok(NegotiationOptions {
        mojo_mode: args.mojo_mode.parse::<MojoMode>().map_err(Failure::input)?,
        threads: args.threads,
    })
}

pub fn extract(args: &ExtractArgs, command: &Command) -> Outcome {
    let options = ExtractOptions {
        merge_nested: !args.keep_nested,
        count_weights: args.count_weights,
    };
    let (snap, manifest) = extraction::extract_snapshot(&args.input, &args.label, &options).map_err(Failure::input)?;
    write_with(with_suffix(&args.out, "edges.csv"), |w| io::write_edges(&snap.graph, w))?;
    let packages: io::NamedAssignment = snap.graph.modules().iter().cloned().zip(snap.package_names()).collect();
    write_with(with_suffix(&args.out, "packages.csv"), |w| {
        io::write_named_partition(&packages, w)
    })?;
    write_with(with_suffix(&args.out, "manifest.json"), |w| {
        io::write_json(&manifest, w)
    })?;

    let mut summary = json!({ "modules": manifest.module_count, "packages": manifest.package_count });
    if let Some(old_path) = &args.previous_version {
        let (old, old_manifest) =
            extraction::extract_snapshot(old_path, "previous", &options).map_err(Failure::input)?;
        let (restriction, _) = extraction::align_versions(&old, &snap).map_err(Failure::input)?;
        let old_packages: HashMap<&str, String> = old
            .graph
            .modules()
            .iter()
            .map(String::as_str)
            .zip(old.package_names())
            .collect();
        let rows: io::NamedAssignment = restriction
            .common_names()
            .iter()
            .map(|m| (m.clone(), old_packages[m.as_str()].clone()))
            .collect();
        write_with(with_suffix(&args.out, "previous.csv"), |w| {
            io::write_named_partition(&rows, w)
        })?;
        summary["previous_modules"] = json!(old_manifest.module_count);
        summary["common_modules"] = json!(restriction.n_common());
    }
    println!(
        "{} modules, {} packages, {} edges",
        manifest.module_count, manifest.package_count, manifest.edge_count
    );
    echo_config(&args.out, command, summary)
}

pub fn negotiate(args: &NegotiateArgs, command: &Command) -> Outcome {
    let config = ThresholdConfig::new(args.tau_sta, args.tau_coh).map_err(Failure::input)?;
    let options = engine_options(&args.engine)?;
    let graph = load_graph(&args.edges)?;
    let (restriction, previous) = load_previous(&graph, &args.previous)?;
    let result = negotiate_with(&graph, &previous, &restriction, &config, &options).map_err(Failure::input)?;

    let modules = graph.modules();
    write_with(with_suffix(&args.out, "partition.csv"), |w| {
        io::write_partition(modules, &result.final_partition, w)
    })?;
    write_with(with_suffix(&args.out, "trace.csv"), |w| {
        io::write_trace(modules, &result.trace, w)
    })?;
    let report = ResultReport::new(modules, &result);
    write_with(with_suffix(&args.out, "result.json"), |w| io::write_json(&report, w))?;
    echo_config(
        &args.out,
        command,
        json!({ "steps": result.steps(), "termination": result.termination }),
    )?;

    println!(
        "{} {} {} {} {}",
        result.final_u_coh,
        result.final_u_sta,
        result.final_sw(),
        result.steps(),
        result.termination
    );
    Ok(())
}

pub fn sweep(args: &SweepArgs, command: &Command) -> Outcome {
    for &t in &args.tau_sta {
        ThresholdConfig::new(t, args.tau_coh).map_err(Failure::input)?;
    }
    let options = engine_options(&args.engine)?;
    let graph = load_graph(&args.edges)?;
    let (restriction, previous) = load_previous(&graph, &args.previous)?;
    let result = amcp::sweep::sweep(&graph, &previous, &restriction, &args.tau_sta, args.tau_coh, &options)
        .map_err(Failure::input)?;

    write_with(with_suffix(&args.out, "sweep.csv"), |w| {
        io::write_sweep(&result.rows, w)
    })?;
    if args.traces {
        for (row, run) in result.rows.iter().zip(&result.runs) {
            let path = with_suffix(&args.out, &format!("trace-{}.csv", row.tau_sta));
            write_with(path, |w| io::write_trace(graph.modules(), &run.trace, w))?;
        }
    }
    if args.with_baseline {
        let rows = compare_runs(&graph, &previous, &restriction, args.tau_coh, &args.tau_sta, &options)
            .map_err(Failure::input)?;
        write_with(with_suffix(&args.out, "compare.csv"), |w| {
            io::write_comparison(&rows, w)
        })?;
    }
    for row in &result.rows {
        println!(
            "{} {} {} {} {} {}",
            row.tau_sta, row.u_coh, row.u_sta, row.sw, row.steps, row.diverged
        );
    }
    echo_config(
        &args.out,
        command,
        json!({
            "reference": {
                "tau_sta": 0.0,
                "steps": result.reference.steps(),
                "u_coh": result.reference.final_u_coh,
                "u_sta": result.reference.final_u_sta,
                "min_u_sta": result.reference_min_u_sta(),
            }
        }),
    )
}

pub fn baseline(args: &BaselineArgs, command: &Command) -> Outcome {
    let mode = args.mojo_mode.parse::<MojoMode>().map_err(Failure::input)?;
    let graph = load_graph(&args.edges)?;
    let (restriction, start) = load_previous(&graph, &args.start)?;
    let climb = hillclimb_turbomq(&graph, &start, args.max_steps).map_err(Failure::input)?;
    let trace = baseline::annotate(&graph, &start, &climb, &start, &restriction, mode).map_err(Failure::input)?;

    let modules = graph.modules();
    write_with(with_suffix(&args.out, "partition.csv"), |w| {
        io::write_partition(modules, &climb.partition, w)
    })?;
    write_with(with_suffix(&args.out, "trace.csv"), |w| {
        io::write_trace(modules, &trace, w)
    })?;

    let u_coh = metrics::u_coh(&graph, &climb.partition).map_err(Failure::internal)?;
    let u_sta = trace.last().map_or(1.0, |s| s.u_sta);
    let status = if climb.converged { "local_optimum" } else { "step_cap" };
    echo_config(
        &args.out,
        command,
        json!({ "steps": climb.steps, "turbomq": climb.path.last().map_or(climb.initial_turbomq, |s| s.turbomq), "status": status }),
    )?;
    println!(
        "{} {} {} {} {}",
        u_coh,
        u_sta,
        metrics::social_welfare(u_coh, u_sta),
        climb.steps,
        status
    );
    Ok(())
}

pub fn mojo(args: &MojoArgs) -> Outcome {
    let mode = args.mode.parse::<MojoMode>().map_err(Failure::input)?;
    let a = load_named(&args.a)?;
    let b = load_named(&args.b)?;
    let mut names: Vec<String> = a.iter().map(|(m, _)| m.clone()).collect();
    names.sort();
    let pa = io::partition_over(&names, &a).map_err(Failure::input)?;
    let pb = io::partition_over(&names, &b).map_err(|_| Failure::input(amcp::Error::ModuleSetMismatch))?;
    let d = metrics::mojo_with(&pa, &pb, mode).map_err(Failure::input)?;
    let u = metrics::u_sta_with(&pa, &pb, names.len(), mode).map_err(Failure::input)?;
    println!("{d} {u}");
    Ok(())
}

pub fn gen(args: &GenArgs) -> Outcome {
    let spec = BenchSpec {
        n: args.n,
        blocks: args.blocks,
        p_in: args.p_in,
        p_out: args.p_out,
        perturb_fraction: args.perturb,
        seed: args.seed,
    };
    let bench = benchgen::generate(&spec).map_err(Failure::input)?;
    let modules = bench.graph.modules();
    write_with(with_suffix(&args.out, "edges.csv"), |w| {
        io::write_edges(&bench.graph, w)
    })?;
    write_with(with_suffix(&args.out, "truth.csv"), |w| {
        io::write_partition(modules, &bench.ground_truth, w)
    })?;
    write_with(with_suffix(&args.out, "previous.csv"), |w| {
        io::write_partition(modules, &bench.previous, w)
    })?;
    write_with(with_suffix(&args.out, "spec.json"), |w| io::write_json(&spec, w))?;
    println!("{} modules, {} edges", bench.graph.n(), bench.graph.edge_count());
    Ok(())
}
