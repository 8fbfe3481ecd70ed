use std::fs::{self, OpenOptions};
use std::path::Path;
use std::time::Instant;

use netsparse::graph::{
    generate_planted_partition, generate_random_connected, write_edge_values, write_graph_file,
};
use netsparse::metrics::{compare, CompareOptions, ComparisonReport};
use netsparse::multilevel::{fit_ratio, ml_sparsify_on, Preset};
use netsparse::sparsify::{score, sparsify_binned, sparsify_single};
use netsparse::{
    AlgDistParams, CoarseningParams, Graph, Hierarchy, LevelConfig, Mode, MultilevelParams, Scorer,
    SparsifyPlan,
};
use serde_json::{json, Map, Value};

use crate::args::*;
use crate::{load, scaling, sidecar_path, write_json, CliError, CliResult};

pub const CSV_HEADER: [&str; 12] = [
    "graph", "level_tag", "|E|", "CC", "D", "Q", "Γ", "BC_ρ", "PR_ρ", "DC_ρ", "CC_ρ", "edge_ratio",
];

pub fn dispatch(command: Command) -> CliResult<()> {
    match command {
        Command::Gen(a) => gen(a),
        Command::Sparsify(a) => sparsify(a),
        Command::MlSparsify(a) => ml_sparsify(a),
        Command::Compare(a) => compare_cmd(a),
        Command::Bench(a) => scaling::run(a),
    }
}

fn flag_name<T: clap::ValueEnum>(v: T) -> String {
    v.to_possible_value().map(|p| p.get_name().to_string()).unwrap_or_default()
}

fn usage(msg: impl Into<String>) -> CliError {
    CliError::Usage(msg.into())
}

fn algdist_params(a: &AlgDistArgs, seed: u64) -> AlgDistParams {
    AlgDistParams {
        alpha: a.alpha,
        sweeps: a.sweeps,
        iters: a.iters,
        epsilon: a.epsilon,
        normalized: a.normalized,
        seed,
    }
}

fn algdist_json(p: &AlgDistParams) -> Value {
    json!({
        "alpha": p.alpha,
        "sweeps": p.sweeps,
        "iters": p.iters,
        "epsilon": p.epsilon,
        "normalized": p.normalized,
        "seed": p.seed,
    })
}

fn write_output(g: &Graph, path: &Path, metadata: &Value) -> CliResult<()> {
    write_graph_file(g, path)?;
    write_json(&sidecar_path(path), metadata)
}

fn gen(a: GenArgs) -> CliResult<()> {
    let (g, output, meta) = match a.kind {
        GenKind::Planted { clusters, size, bridges, seed, output } => (
            generate_planted_partition(clusters, size, bridges, seed)?,
            output,
            json!({"generator": "planted", "clusters": clusters, "size": size, "bridges": bridges, "seed": seed}),
        ),
        GenKind::Random { nodes, edges, seed, output } => (
            generate_random_connected(nodes, edges, seed)?,
            output,
            json!({"generator": "random", "nodes": nodes, "edges": edges, "seed": seed}),
        ),
    };
    let mut meta = meta;
    meta["n"] = json!(g.n());
    meta["m"] = json!(g.m());
    write_output(&g, &output, &meta)?;
    println!("wrote {} nodes, {} edges to {}", g.n(), g.m(), output.display());
    Ok(())
}

fn plan_for(a: &SparsifyArgs, seed: u64) -> SparsifyPlan {
    let mode = match a.mode {
        ModeArg::KeepStrong => Mode::KeepStrong,
        ModeArg::KeepWeak => Mode::KeepWeak,
        ModeArg::Mixture => Mode::Mixture,
    };
    let scorer = match a.scorer {
        ScorerArg::Algdist => Scorer::AlgDist(algdist_params(&a.algdist, seed)),
        ScorerArg::LocalDegree => Scorer::LocalDegree,
        ScorerArg::Jaccard => Scorer::Jaccard,
        ScorerArg::Random => Scorer::Random,
    };
    SparsifyPlan { exponent: a.exponent, mode, scorer, seed }
}

fn edge_ratio(sparse: &Graph, original: &Graph) -> f64 {
    if original.m() == 0 {
        1.0
    } else {
        sparse.m() as f64 / original.m() as f64
    }
}

fn comparison(original: &Graph, sparse: &Graph, seed: u64) -> CliResult<ComparisonReport> {
    Ok(compare(original, sparse, &CompareOptions { seed, ..Default::default() })?)
}

/// Averages the numeric top-level fields (except the seed) of a list of JSON
/// objects; a field that is null in any run stays null.
fn mean_fields(runs: &[Value]) -> Value {
    let mut out = Map::new();
    let Some(Value::Object(first)) = runs.first() else {
        return Value::Null;
    };
    for key in first.keys().filter(|k| k.as_str() != "seed") {
        let values: Vec<Option<f64>> = runs.iter().map(|r| r.get(key).and_then(Value::as_f64)).collect();
        if values.iter().all(Option::is_some) && first[key].is_number() {
            let mean = values.iter().flatten().sum::<f64>() / values.len() as f64;
            out.insert(key.clone(), json!(mean));
        } else if first[key].is_number() || first[key].is_null() {
            out.insert(key.clone(), Value::Null);
        }
    }
    Value::Object(out)
}

fn sparsify(a: SparsifyArgs) -> CliResult<()> {
    if a.repetitions == 0 {
        return Err(usage("--repetitions must be at least 1"));
    }
    plan_for(&a, a.seed).validate()?;
    if a.scores_out.is_some() && a.scorer == ScorerArg::LocalDegree {
        return Err(usage("local-degree scores are directional and cannot be exported per edge"));
    }
    let g = load(&a.input, a.format)?;

    let mut runs = Vec::new();
    let mut compared = Vec::new();
    for r in 0..a.repetitions {
        let seed = a.seed.wrapping_add(r as u64);
        let plan = plan_for(&a, seed);
        let start = Instant::now();
        let scores = score(&g, &plan)?;
        let sparse = match plan.mode {
            Mode::Mixture => sparsify_binned(&g, &scores, &plan)?,
            _ => sparsify_single(&g, &scores, &plan)?,
        };
        let seconds = start.elapsed().as_secs_f64();
        if r == 0 {
            write_graph_file(&sparse, &a.output)?;
            if let Some(path) = &a.scores_out {
                let values = scores
                    .edge_values()
                    .ok_or_else(|| usage("scores are directional and cannot be exported per edge"))?;
                write_edge_values(&g, values, std::io::BufWriter::new(fs::File::create(path)?))?;
            }
        }
        let mut run = json!({
            "seed": seed,
            "edges": sparse.m(),
            "edge_ratio": edge_ratio(&sparse, &g),
            "seconds": seconds,
        });
        if a.compare {
            let report = comparison(&g, &sparse, seed)?;
            compared.push(serde_json::to_value(&report)?);
            run["comparison"] = serde_json::to_value(&report)?;
        }
        println!(
            "seed {seed}: kept {} of {} edges (ratio {:.4}) in {seconds:.3}s",
            sparse.m(),
            g.m(),
            edge_ratio(&sparse, &g)
        );
        runs.push(run);
    }

    let mut mean = mean_fields(&runs);
    if a.compare {
        mean["comparison"] = mean_fields(&compared);
    }
    let meta = json!({
        "command": "sparsify",
        "input": a.input.display().to_string(),
        "output": a.output.display().to_string(),
        "nodes": g.n(),
        "input_edges": g.m(),
        "mode": flag_name(a.mode),
        "exponent": a.exponent,
        "scorer": flag_name(a.scorer),
        "algdist": algdist_json(&algdist_params(&a.algdist, a.seed)),
        "normalized": a.scorer == ScorerArg::Algdist && a.algdist.normalized,
        "seed": a.seed,
        "repetitions": a.repetitions,
        "runs": runs,
        "mean": mean,
    });
    write_json(&sidecar_path(&a.output), &meta)
}

/// Parses `lo,hi`.
pub fn parse_interval(text: &str) -> CliResult<(f64, f64)> {
    let parts: Vec<&str> = text.split(',').map(str::trim).collect();
    let bad = || usage(format!("target ratio must look like `0.2,0.4`, got {text:?}"));
    if parts.len() != 2 {
        return Err(bad());
    }
    let lo: f64 = parts[0].parse().map_err(|_| bad())?;
    let hi: f64 = parts[1].parse().map_err(|_| bad())?;
    if !(lo > 0.0 && lo <= hi && hi <= 1.0) {
        return Err(usage(format!("target ratio [{lo}, {hi}] must satisfy 0 < lo <= hi <= 1")));
    }
    Ok((lo, hi))
}

fn ml_sparsify(a: MlArgs) -> CliResult<()> {
    let explicit = match (&a.levels, a.preset) {
        (Some(text), _) => Some(LevelConfig::parse(text).map_err(|e| usage(e.to_string()))?),
        (None, Some(_)) => None,
        (None, None) => return Err(usage("one of --levels or --preset is required")),
    };
    let target = a.target_ratio.as_deref().map(parse_interval).transpose()?;
    if !(0.0..=1.0).contains(&a.exponent) {
        return Err(usage("--e must lie in [0, 1]"));
    }
    if a.span == 0 {
        return Err(usage("--span must be at least 1"));
    }
    let params = MultilevelParams {
        algdist: algdist_params(&a.algdist, a.seed),
        coarsening: CoarseningParams {
            coarsest_size: a.coarsest_size,
            coupling: a.coupling,
            ..Default::default()
        },
        seed: a.seed,
    };
    params.algdist.validate()?;
    params.coarsening.validate()?;
    let g = load(&a.input, a.format)?;

    let start = Instant::now();
    let h = Hierarchy::build(&g, &params.algdist, &params.coarsening)?;
    let cfg = match (explicit, a.preset) {
        (Some(c), _) => c,
        (None, Some(p)) => {
            let preset = match p {
                PresetArg::Coarsest => Preset::Coarsest,
                PresetArg::Middle => Preset::Middle,
                PresetArg::Finest => Preset::Finest,
            };
            LevelConfig::preset(h.depth(), preset, a.span, a.exponent)?
        }
        (None, None) => unreachable!("checked above"),
    };

    let (cfg, outcome, fit) = match target {
        Some(t) => {
            let fit = fit_ratio(&h, &cfg, t, &params)?;
            if let Some(d) = &fit.diagnostic {
                eprintln!("netsparse: warning: {d}");
            }
            let info = json!({
                "target": [t.0, t.1],
                "exponent": fit.exponent,
                "within_target": fit.within_target,
                "evaluations": fit.evaluations,
                "diagnostic": fit.diagnostic,
            });
            (fit.config, fit.outcome, Some(info))
        }
        None => {
            let out = ml_sparsify_on(&h, &cfg, &params)?;
            (cfg, out, None)
        }
    };
    let seconds = start.elapsed().as_secs_f64();

    let summary = h.summary();
    if let Some(path) = &a.hierarchy_out {
        let text: String = summary.iter().map(|l| format!("{l}\n")).collect();
        fs::write(path, text)?;
    }
    if let Some(dir) = &a.level_graphs {
        fs::create_dir_all(dir)?;
        for (k, level) in h.levels.iter().enumerate() {
            write_graph_file(&level.graph, &dir.join(format!("level-{k}.el")))?;
        }
    }
    let removed_per_level: Vec<usize> = (0..h.depth())
        .map(|l| outcome.removed_at.iter().filter(|r| **r == Some(l)).count())
        .collect();
    let ratio = outcome.ratio(&g);
    let mut meta = json!({
        "command": "ml-sparsify",
        "input": a.input.display().to_string(),
        "output": a.output.display().to_string(),
        "nodes": g.n(),
        "input_edges": g.m(),
        "edges": outcome.sparse.m(),
        "edge_ratio": ratio,
        "levels": cfg.to_string(),
        "preset": a.preset.map(flag_name),
        "span": a.span,
        "fit": fit,
        "algdist": algdist_json(&params.algdist),
        "coarsest_size": a.coarsest_size,
        "coupling": a.coupling,
        "seed": a.seed,
        "hierarchy": summary,
        "removed_per_level": removed_per_level,
        "seconds": seconds,
    });
    if a.compare {
        meta["comparison"] = serde_json::to_value(comparison(&g, &outcome.sparse, a.seed)?)?;
    }
    write_output(&outcome.sparse, &a.output, &meta)?;
    println!(
        "{} levels, config {cfg}: kept {} of {} edges (ratio {ratio:.4})",
        h.depth(),
        outcome.sparse.m(),
        g.m()
    );
    Ok(())
}

fn csv_number(x: f64) -> String {
    if x.is_nan() {
        "NaN".into()
    } else {
        format!("{x}")
    }
}

pub fn csv_row(graph: &str, tag: &str, r: &ComparisonReport) -> Vec<String> {
    let s = &r.sparse;
    vec![
        graph.to_string(),
        tag.to_string(),
        s.edges.to_string(),
        csv_number(s.clustering),
        s.diameter.to_string(),
        csv_number(s.modularity),
        s.components.to_string(),
        csv_number(r.rho_betweenness),
        csv_number(r.rho_pagerank),
        csv_number(r.rho_degree),
        csv_number(r.rho_clustering),
        csv_number(r.edge_ratio),
    ]
}

fn compare_cmd(a: CompareArgs) -> CliResult<()> {
    if a.repetitions == 0 {
        return Err(usage("--repetitions must be at least 1"));
    }
    if a.pivots == Some(0) {
        return Err(usage("--pivots must be at least 1"));
    }
    let original = load(&a.original, a.format)?;
    let sparse = load(&a.sparse, a.format)?;
    let opts = CompareOptions {
        seed: a.seed,
        pivots: a.pivots,
        repetitions: a.repetitions,
        ..Default::default()
    };
    let report = compare(&original, &sparse, &opts)?;
    let undefined = report.undefined();
    if !undefined.is_empty() {
        eprintln!("netsparse: undefined correlations: {}", undefined.join(", "));
    }
    let mut value = serde_json::to_value(&report)?;
    value["seed"] = json!(a.seed);
    value["undefined"] = json!(undefined);
    println!("{}", serde_json::to_string_pretty(&value)?);
    if let Some(path) = &a.json {
        write_json(path, &value)?;
    }
    if let Some(path) = &a.csv {
        let fresh = fs::metadata(path).map(|m| m.len() == 0).unwrap_or(true);
        let file = OpenOptions::new().create(true).append(true).open(path)?;
        let mut w = csv::Writer::from_writer(file);
        if fresh {
            w.write_record(CSV_HEADER)?;
        }
        w.write_record(csv_row(&a.graph_name, &a.level_tag, &report))?;
        w.flush()?;
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn interval_parsing() {
        assert_eq!(parse_interval("0.2,0.4").unwrap(), (0.2, 0.4));
        assert_eq!(parse_interval(" 1 , 1 ").unwrap(), (1.0, 1.0));
        for bad in ["0.4", "0.4,0.2", "0,0.5", "a,b", "0.2,0.4,0.6", "0.5,1.5"] {
            assert!(matches!(parse_interval(bad), Err(CliError::Usage(_))), "{bad}");
        }
    }

    #[test]
    fn mean_skips_seed_and_keeps_nulls() {
        let runs = [
            json!({"seed": 1, "a": 1.0, "b": null, "c": "x"}),
            json!({"seed": 2, "a": 3.0, "b": 2.0, "c": "y"}),
        ];
        let m = mean_fields(&runs);
        assert_eq!(m, json!({"a": 2.0, "b": null}));
    }

    #[test]
    fn csv_row_has_header_width() {
        let g = netsparse::graph::generate_planted_partition(2, 4, 1, 0).unwrap();
        let r = compare(&g, &Graph::edgeless(8), &CompareOptions::default()).unwrap();
        let row = csv_row("g", "G1", &r);
        assert_eq!(row.len(), CSV_HEADER.len());
        assert_eq!(row[9], "NaN");
    }
}
