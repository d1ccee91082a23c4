//! Executes one subcommand, returning its artifacts in memory.

use std::path::PathBuf;

use cycle_factors::generators::{perturb, ConstructionSpec, EdgeOrigin};
use cycle_factors::graph::Graph;
use cycle_factors::io::{read_graph, write_graph, write_packing};
use cycle_factors::lab::{bipartite_witnesses, degree_bound_feasibility, run_packer, sweep, trial_seeds};
use cycle_factors::layered::{layered_factor, superregular_check, LayeredError, LayeredInstance};
use cycle_factors::oracle::max_disjoint_cycles_exact;
use cycle_factors::stability::{find_stable_partition, StabilityParams};
use cycle_factors::{verify_packing, CyclePacking};
use serde_json::{json, Value};

use crate::config::{ExperimentConfig, GenerateCmd, LayeredCmd, OracleCmd, PackCmd, StabilityCmd, WitnessCmd};
use crate::CliError;

pub struct Artifact {
    pub name: &'static str,
    pub content: String,
}

pub struct Run {
    pub artifacts: Vec<Artifact>,
    /// Set when the run finished but missed its goal.
    pub shortfall: Option<String>,
}

struct Ctx<'a> {
    cfg: &'a ExperimentConfig,
    config_json: Value,
}

impl Ctx<'_> {
    fn comments(&self) -> Vec<String> {
        vec![format!("seed: {}", self.cfg.seed), format!("config: {}", self.config_json)]
    }

    fn json(&self, body: Value) -> String {
        let mut obj = serde_json::Map::new();
        obj.insert("config".into(), self.config_json.clone());
        if let Value::Object(m) = body {
            obj.extend(m);
        }
        let mut s = serde_json::to_string_pretty(&Value::Object(obj)).expect("JSON value serializes");
        s.push('\n');
        s
    }
}

fn invalid(key: &str, e: impl std::fmt::Display) -> CliError {
    CliError::Validation(format!("{key}: {e}"))
}

fn host(
    key: &str,
    construction: &Option<ConstructionSpec>,
    graph: &Option<PathBuf>,
    seed: u64,
) -> Result<Graph, CliError> {
    match (construction, graph) {
        (Some(c), None) => c.build(seed).map_err(|e| invalid(&format!("{key}.construction"), e)),
        (None, Some(path)) => {
            let text = std::fs::read_to_string(path).map_err(|e| invalid(&format!("{key}.graph"), e))?;
            read_graph(&text).map(|(g, _)| g).map_err(|e| invalid(&format!("{key}.graph"), e))
        }
        _ => Err(CliError::Validation(format!("{key}: give exactly one of `construction` and `graph`"))),
    }
}

fn check_p(key: &str, p: f64) -> Result<(), CliError> {
    if (0.0..=1.0).contains(&p) {
        Ok(())
    } else {
        Err(invalid(&format!("{key}.p"), format!("{p} is not a probability")))
    }
}

fn check_ell(key: &str, ell: usize) -> Result<(), CliError> {
    if ell >= 3 {
        Ok(())
    } else {
        Err(invalid(&format!("{key}.ell"), format!("cycle length {ell} is below 3")))
    }
}

pub fn execute(cfg: &ExperimentConfig) -> Result<Run, CliError> {
    let ctx = Ctx { cfg, config_json: serde_json::to_value(cfg).expect("config serializes") };
    if let Some(c) = &cfg.generate {
        generate(&ctx, c)
    } else if let Some(c) = &cfg.oracle {
        oracle(&ctx, c)
    } else if let Some(c) = &cfg.pack {
        pack(&ctx, c)
    } else if let Some(c) = &cfg.stability {
        stability(&ctx, c)
    } else if let Some(c) = &cfg.layered {
        layered(&ctx, c)
    } else if let Some(c) = &cfg.sweep {
        let report = sweep(c).map_err(|e| invalid("sweep", e))?;
        let mut csv = String::new();
        for line in ctx.comments() {
            csv.push_str(&format!("# {line}\n"));
        }
        csv.push_str(&report.to_csv());
        let body = serde_json::to_value(&report).expect("report serializes");
        Ok(Run {
            artifacts: vec![
                Artifact { name: "sweep.csv", content: csv },
                Artifact { name: "sweep.json", content: ctx.json(json!({ "report": body })) },
            ],
            shortfall: None,
        })
    } else if let Some(c) = &cfg.witness {
        witness(&ctx, c)
    } else {
        Err(CliError::Validation("no subcommand table".into()))
    }
}

fn generate(ctx: &Ctx, c: &GenerateCmd) -> Result<Run, CliError> {
    check_p("generate", c.p)?;
    let (inst_seed, edge_seed) = trial_seeds(ctx.cfg.seed, 0);
    let g = c.construction.build(inst_seed).map_err(|e| invalid("generate.construction", e))?;
    let pg = perturb(&g, c.p, edge_seed).map_err(|e| invalid("generate.p", e))?;
    let count = |o: EdgeOrigin| pg.union().edges().filter(|&(u, v)| pg.origin(u, v) == Some(o)).count();
    let mut comments = ctx.comments();
    comments.push(format!(
        "edges: {} deterministic only, {} random only, {} both",
        count(EdgeOrigin::Deterministic),
        count(EdgeOrigin::Random),
        count(EdgeOrigin::Both)
    ));
    Ok(Run {
        artifacts: vec![Artifact { name: "graph.txt", content: write_graph(pg.union(), c.ell, &comments) }],
        shortfall: None,
    })
}

fn oracle(ctx: &Ctx, c: &OracleCmd) -> Result<Run, CliError> {
    check_ell("oracle", c.ell)?;
    check_p("oracle", c.p)?;
    let (inst_seed, edge_seed) = trial_seeds(ctx.cfg.seed, 0);
    let g = host("oracle", &c.construction, &c.graph, inst_seed)?;
    let pg = perturb(&g, c.p, edge_seed).map_err(|e| invalid("oracle.p", e))?;
    let feasibility = c.construction.as_ref().and_then(|s| degree_bound_feasibility(s, c.ell, inst_seed).ok());
    match max_disjoint_cycles_exact(pg.union(), c.ell, c.limit, &c.oracle) {
        Ok(res) => Ok(Run {
            artifacts: vec![
                Artifact { name: "packing.txt", content: write_packing(&res.packing, &ctx.comments()) },
                Artifact {
                    name: "oracle.json",
                    content: ctx.json(json!({ "result": res, "size": res.packing.len(), "feasibility": feasibility })),
                },
            ],
            shortfall: None,
        }),
        Err(e) => Ok(Run {
            artifacts: vec![
                Artifact { name: "packing.txt", content: write_packing(&CyclePacking::new(c.ell), &ctx.comments()) },
                Artifact { name: "oracle.json", content: ctx.json(json!({ "error": e.to_string(), "feasibility": feasibility })) },
            ],
            shortfall: Some(e.to_string()),
        }),
    }
}

fn pack(ctx: &Ctx, c: &PackCmd) -> Result<Run, CliError> {
    check_ell("pack", c.ell)?;
    check_p("pack", c.p)?;
    let (inst_seed, edge_seed) = trial_seeds(ctx.cfg.seed, 0);
    c.settings.resolve(c.ell, edge_seed).map_err(|e| invalid("pack.settings", e))?;
    let g = host("pack", &c.construction, &c.graph, inst_seed)?;
    let target = c.target.resolve(g.n(), c.ell);
    let pg = perturb(&g, c.p, edge_seed).map_err(|e| invalid("pack.p", e))?;
    let (packing, body, shortfall) = match run_packer(c.packer, &pg, c.ell, target, &c.settings, &c.oracle, edge_seed) {
        Ok(out) => {
            let report = verify_packing(pg.union(), &out.packing);
            let miss = (out.achieved() < target)
                .then(|| format!("packed {} of {target} cycles", out.achieved()));
            let body = json!({
                "target": target,
                "achieved": out.achieved(),
                "regime": out.regime,
                "stages": out.stages,
                "valid": report.is_valid(),
            });
            (out.packing, body, miss)
        }
        Err(e) => (
            CyclePacking::new(c.ell),
            json!({ "target": target, "achieved": 0, "error": e.to_string() }),
            Some(e.to_string()),
        ),
    };
    Ok(Run {
        artifacts: vec![
            Artifact { name: "packing.txt", content: write_packing(&packing, &ctx.comments()) },
            Artifact { name: "pack.json", content: ctx.json(body) },
        ],
        shortfall,
    })
}

fn stability(ctx: &Ctx, c: &StabilityCmd) -> Result<Run, CliError> {
    let (inst_seed, _) = trial_seeds(ctx.cfg.seed, 0);
    let g = host("stability", &c.construction, &c.graph, inst_seed)?;
    let params = StabilityParams::with_rounding(c.alpha.0, c.beta.0, c.rounding).map_err(|e| invalid("stability", e))?;
    let search = find_stable_partition(&g, &params, c.mode, &c.options).map_err(|e| invalid("stability", e))?;
    let shortfall = (search.certificate.is_none() && !search.conclusive)
        .then(|| "heuristic search found no certificate".to_string());
    let stable = search.certificate.is_some();
    Ok(Run {
        artifacts: vec![Artifact { name: "stability.json", content: ctx.json(json!({ "stable": stable, "search": search })) }],
        shortfall,
    })
}

fn layered(ctx: &Ctx, c: &LayeredCmd) -> Result<Run, CliError> {
    let inst = match (&c.instance, &c.spec) {
        (Some(path), None) => {
            let text = std::fs::read_to_string(path).map_err(|e| invalid("layered.instance", e))?;
            LayeredInstance::from_text(&text).map_err(|e| invalid("layered.instance", e))?
        }
        (None, Some(spec)) => {
            spec.build(trial_seeds(ctx.cfg.seed, 0).0).map_err(|e| invalid("layered.spec", e))?
        }
        _ => return Err(CliError::Validation("layered: give exactly one of `instance` and `spec`".into())),
    };
    let mut regularity = Vec::new();
    if let Some(r) = &c.regularity {
        for (a, b) in inst.cross_pairs() {
            let left: Vec<usize> = inst.layer(a).collect();
            let right: Vec<usize> = inst.layer(b).collect();
            let rep = superregular_check(inst.graph(), &left, &right, r.eps, r.d, r.samples, ctx.cfg.seed)
                .map_err(|e| invalid("layered.regularity", e))?;
            regularity.push(json!({ "pair": [a, b], "report": rep }));
        }
    }
    let mut artifacts = vec![Artifact { name: "instance.txt", content: inst.to_text(&ctx.comments()) }];
    let head = json!({ "shape": inst.shape(), "sizes": inst.sizes(), "regularity": regularity });
    let (packing, body, shortfall) = match layered_factor(&inst, c.mode, &c.options) {
        Ok(f) => {
            let valid = verify_packing(inst.graph(), &f.packing).is_valid();
            let packing = f.packing.clone();
            (packing, json!({ "layout": head, "factor": f, "valid": valid }), None)
        }
        Err(e @ (LayeredError::Instance(_) | LayeredError::Params(_) | LayeredError::TooLarge { .. })) => {
            return Err(invalid("layered", e))
        }
        Err(e) => (
            CyclePacking::new(inst.ell()),
            json!({ "layout": head, "error": e.to_string(), "diagnostics": e }),
            Some(e.to_string()),
        ),
    };
    artifacts.push(Artifact { name: "packing.txt", content: write_packing(&packing, &ctx.comments()) });
    artifacts.push(Artifact { name: "layered.json", content: ctx.json(body) });
    Ok(Run { artifacts, shortfall })
}

fn witness(ctx: &Ctx, c: &WitnessCmd) -> Result<Run, CliError> {
    let report = bipartite_witnesses(c.n, c.ell, c.c, c.trials, ctx.cfg.seed).map_err(|e| invalid("witness", e))?;
    let spec = ConstructionSpec::BipartiteExtremalLog { n: c.n, ell: c.ell };
    let feasibility = degree_bound_feasibility(&spec, c.ell, ctx.cfg.seed).map_err(|e| invalid("witness", e))?;
    Ok(Run {
        artifacts: vec![Artifact {
            name: "witness.json",
            content: ctx.json(json!({ "report": report, "feasibility": feasibility })),
        }],
        shortfall: None,
    })
}
