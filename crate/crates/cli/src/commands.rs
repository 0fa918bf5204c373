use std::fs;
use std::path::{Path, PathBuf};

use clap::ValueEnum;
use serde_json::{json, Value};

use netdeg_core::degree::{
    algebraic_degree, cartesian_degree, count_cycle_covers, degree_via_scc, enumerate_cycle_covers,
    permanent_naive, permanent_ryser, permutation_cycles, scc_decompose, tensor_degree, transfer_matrix,
};
use netdeg_core::game::{build_indifference_system, k2_gadget, topology_factory, GameFile, Topology};
use netdeg_core::matrix::IntMatrix;
use netdeg_core::numeric::{run_sweep, solve_system, solver_input_text, SolveOptions, SweepConfig};
use netdeg_core::polygraph::build_poly_graph;
use netdeg_core::tropical::{cell_record, enumerate_mixed_cells, selection_to_cycle_cover};
use netdeg_core::{Error, Result};

use crate::input::{read_graph, InputArgs};

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Text,
    Json,
    Csv,
}

fn pretty(v: &Value) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("json value serializes");
    s.push('\n');
    s
}

/// Outcome of one degree route: a value, or the reason it was not run.
enum Route {
    Value(String),
    Skipped(Error),
}

fn route<T: ToString>(r: Result<T>) -> Result<Route> {
    match r {
        Ok(v) => Ok(Route::Value(v.to_string())),
        Err(e @ Error::CapExceeded { .. }) => Ok(Route::Skipped(e)),
        Err(e) => Err(e),
    }
}

pub fn degree(input: &InputArgs, seed: u64, format: Format) -> Result<String> {
    let mut routes: Vec<(&str, Route)> = Vec::new();
    let all_unit = input.structure()?.1.iter().all(|&k| k == 1);
    if all_unit {
        match input.topology()? {
            Some(Topology::CrossPrism(n)) => {
                let c = topology_factory(&Topology::Cycle(n))?;
                let h = netdeg_core::game::k22_gadget();
                routes.push(("tensor", route(tensor_degree(&c, &h))?));
            }
            Some(Topology::Tensor { base, gadget }) => {
                routes.push(("tensor", route(tensor_degree(&base, &gadget))?));
            }
            Some(Topology::StdPrism(n)) => {
                routes.push(("transfer", route(cartesian_degree(&k2_gadget(), n))?));
            }
            Some(Topology::Cartesian { n, gadget }) => {
                routes.push(("transfer", route(cartesian_degree(&gadget, n))?));
            }
            _ => {}
        }
    }
    let game = input.game(seed)?;
    routes.push(("permanent", route(algebraic_degree(&game))?));
    routes.push(("scc", route(degree_via_scc(&game))?));
    if all_unit {
        let pg = build_poly_graph(&build_indifference_system(&game));
        routes.push(("cycle-covers", route(count_cycle_covers(pg.adjacency()))?));
    }

    let values: Vec<&String> = routes
        .iter()
        .filter_map(|(_, r)| match r {
            Route::Value(v) => Some(v),
            Route::Skipped(_) => None,
        })
        .collect();
    let Some(&value) = values.first() else {
        // every route hit a cap; report the first one
        let first = routes.into_iter().find_map(|(_, r)| match r {
            Route::Skipped(e) => Some(e),
            Route::Value(_) => None,
        });
        return Err(first.unwrap_or_else(|| Error::Internal("no degree route ran".into())));
    };
    let agree = values.iter().all(|v| *v == value);

    let out = match format {
        Format::Text => {
            let mut s = format!("degree {value}\n");
            for (name, r) in &routes {
                match r {
                    Route::Value(v) => s.push_str(&format!("route {name} {v}\n")),
                    Route::Skipped(why) => s.push_str(&format!("route {name} skipped ({why})\n")),
                }
            }
            s.push_str(&format!("agreement {}\n", if agree { "yes" } else { "NO" }));
            s
        }
        Format::Json => {
            let list: Vec<Value> = routes
                .iter()
                .map(|(name, r)| match r {
                    Route::Value(v) => json!({"route": name, "value": v}),
                    Route::Skipped(why) => json!({"route": name, "skipped": why.to_string()}),
                })
                .collect();
            pretty(&json!({
                "input": input.describe(),
                "players": game.players(),
                "dimension": game.dim(),
                "degree": value,
                "routes": list,
                "agree": agree,
            }))
        }
        Format::Csv => {
            let mut s = String::from("route,value\n");
            for (name, r) in &routes {
                if let Route::Value(v) = r {
                    s.push_str(&format!("{name},{v}\n"));
                }
            }
            s
        }
    };
    if !agree {
        eprint!("{out}");
        return Err(Error::Internal("degree routes disagree".into()));
    }
    Ok(out)
}

fn matrix_source(input: &InputArgs, matrix: Option<&Path>) -> Result<IntMatrix> {
    match matrix {
        Some(p) => {
            let text = fs::read_to_string(p)
                .map_err(|e| Error::Parse(format!("cannot read {}: {e}", p.display())))?;
            IntMatrix::parse_text(&text)
        }
        None => Ok(input.poly_graph()?.adjacency().clone()),
    }
}

pub fn perm(input: &InputArgs, matrix: Option<&Path>, naive: bool, format: Format) -> Result<String> {
    let a = matrix_source(input, matrix)?;
    let value = permanent_ryser(&a)?;
    let oracle = if naive { Some(permanent_naive(&a)?) } else { None };
    if let Some(o) = &oracle {
        if *o != value {
            return Err(Error::Internal(format!("Ryser gives {value}, expansion gives {o}")));
        }
    }
    Ok(match format {
        Format::Text => {
            let mut s = format!("permanent {value}\n");
            if oracle.is_some() {
                s.push_str("naive agrees\n");
            }
            s
        }
        Format::Json => pretty(&json!({
            "dimension": a.dim(),
            "permanent": value.to_string(),
            "naive_checked": oracle.is_some(),
        })),
        Format::Csv => format!("dimension,permanent\n{},{value}\n", a.dim()),
    })
}

pub fn covers(input: &InputArgs, matrix: Option<&Path>, list: Option<usize>, format: Format) -> Result<String> {
    let a = matrix_source(input, matrix)?;
    let count = count_cycle_covers(&a)?;
    let names: Vec<String> = if matrix.is_some() {
        (1..=a.dim()).map(|i| i.to_string()).collect()
    } else {
        let pg = input.poly_graph()?;
        (0..a.dim()).map(|v| pg.layout().var_name(v)).collect()
    };
    let listed: Vec<Vec<Vec<String>>> = match list {
        Some(limit) => enumerate_cycle_covers(&a, limit)?
            .iter()
            .map(|succ| {
                permutation_cycles(succ)
                    .into_iter()
                    .map(|c| c.into_iter().map(|v| names[v].clone()).collect())
                    .collect()
            })
            .collect(),
        None => Vec::new(),
    };
    Ok(match format {
        Format::Text => {
            let mut s = format!("cycle covers {count}\n");
            for cover in &listed {
                let cycles: Vec<String> = cover.iter().map(|c| format!("({})", c.join(" "))).collect();
                s.push_str(&cycles.join(""));
                s.push('\n');
            }
            s
        }
        Format::Json => pretty(&json!({"count": count.to_string(), "covers": listed})),
        Format::Csv => {
            let mut s = String::from("cover,cycle,vertex\n");
            for (i, cover) in listed.iter().enumerate() {
                for (j, c) in cover.iter().enumerate() {
                    for v in c {
                        s.push_str(&format!("{i},{j},{v}\n"));
                    }
                }
            }
            s
        }
    })
}

pub fn cells(input: &InputArgs, seed: u64, experimental: bool, format: Format) -> Result<String> {
    let sys = input.system(seed)?;
    let unit = sys.layout().all_unit();
    if !unit && !experimental {
        return Err(Error::Experimental("mixed-cell enumeration"));
    }
    let cells = enumerate_mixed_cells(&sys)?;
    let mut records = Vec::with_capacity(cells.len());
    for cell in &cells {
        let cover = if unit { Some(selection_to_cycle_cover(cell, &sys)?) } else { None };
        records.push(cell_record(cell, &sys, cover.as_ref())?);
    }
    Ok(match format {
        Format::Json => pretty(&Value::Array(records)),
        Format::Text => {
            let mut s = String::new();
            for r in &records {
                s.push_str(&serde_json::to_string(r).expect("record serializes"));
                s.push('\n');
            }
            s
        }
        Format::Csv => {
            let mut s = String::from("cell,volume,cycle_cover\n");
            for (i, r) in records.iter().enumerate() {
                let cover = r.get("cycle_cover").map(|c| {
                    c.as_array()
                        .into_iter()
                        .flatten()
                        .map(|cyc| {
                            let names: Vec<&str> =
                                cyc.as_array().into_iter().flatten().filter_map(Value::as_str).collect();
                            format!("({})", names.join(" "))
                        })
                        .collect::<String>()
                });
                s.push_str(&format!(
                    "{i},{},{}\n",
                    r["volume"].as_str().unwrap_or_default(),
                    cover.unwrap_or_default()
                ));
            }
            s
        }
    })
}

pub fn transfer(gadget: Option<&Path>, n: Option<usize>, format: Format) -> Result<String> {
    let h = match gadget {
        Some(p) => read_graph(p)?,
        None => k2_gadget(),
    };
    let t = transfer_matrix(&h)?;
    let power = match n {
        Some(n) => Some((n, t.trace_power(n)?, t.spectral_trace(n))),
        None => None,
    };
    Ok(match format {
        Format::Text => {
            let mut s = t.to_text();
            if let Some((n, exact, spectral)) = &power {
                s.push_str(&format!("trace power {n} {exact}\nspectral estimate {spectral:.6e}\n"));
            }
            s
        }
        Format::Json => {
            let size = t.size();
            let rows: Vec<Vec<u64>> = (0..size).map(|u| (0..size).map(|v| t.get(u, v)).collect()).collect();
            let mut v = json!({"vertices": t.vertex_count(), "size": size, "entries": rows});
            if let Some((n, exact, spectral)) = &power {
                v["trace_power"] = json!({"n": n, "value": exact.to_string(), "spectral": spectral});
            }
            pretty(&v)
        }
        Format::Csv => {
            let size = t.size();
            let mut s = String::from("row,column,value\n");
            for u in 0..size {
                for v in 0..size {
                    s.push_str(&format!("{u},{v},{}\n", t.get(u, v)));
                }
            }
            s
        }
    })
}

pub fn scc(input: &InputArgs, format: Format) -> Result<String> {
    let (g, _) = input.structure()?;
    let comps: Vec<Vec<usize>> = scc_decompose(&g)
        .into_iter()
        .map(|c| c.into_iter().map(|p| p + 1).collect())
        .collect();
    Ok(match format {
        Format::Text => comps
            .iter()
            .enumerate()
            .map(|(i, c)| {
                let players: Vec<String> = c.iter().map(ToString::to_string).collect();
                format!("component {}: {}\n", i + 1, players.join(" "))
            })
            .collect(),
        Format::Json => pretty(&json!({"components": comps})),
        Format::Csv => {
            let mut s = String::from("component,player\n");
            for (i, c) in comps.iter().enumerate() {
                for p in c {
                    s.push_str(&format!("{},{p}\n", i + 1));
                }
            }
            s
        }
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum ExportKind {
    /// Solver input file for the indifference system.
    SolverInput,
    /// Polynomial-graph adjacency matrix.
    Matrix,
    /// Game file with the sampled payoffs.
    Game,
}

pub fn export(input: &InputArgs, seed: u64, kind: ExportKind) -> Result<String> {
    match kind {
        ExportKind::SolverInput => solver_input_text(&input.system(seed)?),
        ExportKind::Matrix => Ok(input.poly_graph()?.adjacency().to_text()),
        ExportKind::Game => {
            let mut s = GameFile::to_json(&input.game(seed)?);
            s.push('\n');
            Ok(s)
        }
    }
}

pub fn solve(input: &InputArgs, seed: u64, format: Format) -> Result<String> {
    let sys = input.system(seed)?;
    let set = solve_system(&sys, &SolveOptions::with_seed(seed))?;
    let c = set.counts;
    Ok(match format {
        Format::Text => {
            let mut s = String::new();
            for (name, v) in [
                ("tracked", c.tracked),
                ("converged", c.converged),
                ("at_infinity", c.at_infinity),
                ("failed", c.failed),
                ("distinct", c.distinct),
                ("torus", c.torus),
                ("real", c.real),
                ("feasible", c.feasible),
            ] {
                s.push_str(&format!("{name} {v}\n"));
            }
            s
        }
        Format::Json => pretty(&serde_json::to_value(&set).expect("solution set serializes")),
        Format::Csv => {
            let layout = set.layout();
            let mut s = String::from("point,variable,re,im,residual\n");
            for (i, p) in set.points.iter().enumerate() {
                for (v, z) in p.coordinates.iter().enumerate() {
                    s.push_str(&format!(
                        "{i},{},{:e},{:e},{:e}\n",
                        layout.var_name(v),
                        z.re,
                        z.im,
                        p.residual
                    ));
                }
            }
            s
        }
    })
}

/// Runs a sweep. With an output directory, writes `trials.csv`,
/// `aggregate.json` and `plot.csv` there and returns a short summary.
pub fn sweep(input: &InputArgs, seed: u64, trials: usize, out: Option<&PathBuf>, format: Format) -> Result<String> {
    if input.game.is_some() {
        return Err(Error::Invalid("sweep samples payoffs; pass --topology instead of --game".into()));
    }
    let topology = input
        .topology()?
        .ok_or_else(|| Error::Invalid("sweep needs --topology".into()))?;
    let mut config = SweepConfig::new(topology, trials, seed);
    config.k = input.k;
    config.payoffs = input.payoffs()?;
    let res = run_sweep(&config)?;
    if let Some(dir) = out {
        fs::create_dir_all(dir)?;
        fs::write(dir.join("trials.csv"), res.trials_csv())?;
        fs::write(dir.join("aggregate.json"), res.aggregate_json() + "\n")?;
        fs::write(dir.join("plot.csv"), res.plot_csv())?;
        let a = &res.aggregate;
        return Ok(format!(
            "wrote {}\nmax_torus {} theory {} attain_fraction {}\n",
            dir.display(),
            a.max_torus,
            a.theory_degree,
            a.attain_fraction
        ));
    }
    Ok(match format {
        Format::Csv => res.trials_csv(),
        Format::Json => res.aggregate_json() + "\n",
        Format::Text => {
            let mut s = res.trials_csv();
            s.push_str(&res.aggregate_json());
            s.push('\n');
            s
        }
    })
}
