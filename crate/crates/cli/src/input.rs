use std::fs;
use std::path::{Path, PathBuf};

use clap::{Args, ValueEnum};
use netdeg_core::game::{
    build_indifference_system, k22_gadget, k2_gadget, sample_generic_payoffs, topology_factory, GameFile,
    Topology, UniformPayoffs,
};
use netdeg_core::graph::GraphFile;
use netdeg_core::polygraph::{build_poly_graph, generic_poly_graph};
use netdeg_core::{DirectedGraph, Error, NetworkGame, PolyGraph, PolynomialSystem, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum TopologyKind {
    Cycle,
    DisjointCycles,
    Figure8,
    Theta,
    StdPrism,
    CrossPrism,
    Cartesian,
    Tensor,
}

/// Where the game comes from: a topology family with sampled payoffs, or a
/// game file.
#[derive(Args, Debug, Clone)]
pub struct InputArgs {
    #[arg(long, value_enum)]
    pub topology: Option<TopologyKind>,
    /// Cycle length for cycle, std-prism, cross-prism, cartesian and tensor.
    #[arg(long)]
    pub n: Option<usize>,
    /// Cycle lengths for disjoint-cycles, comma separated.
    #[arg(long, value_delimiter = ',')]
    pub lengths: Vec<usize>,
    /// First cycle length of figure8.
    #[arg(long)]
    pub a: Option<usize>,
    /// Second cycle length of figure8.
    #[arg(long)]
    pub b: Option<usize>,
    /// Internal vertex counts of the theta return paths, comma separated.
    #[arg(long, value_delimiter = ',')]
    pub paths: Vec<usize>,
    /// Gadget graph file for cartesian/tensor (defaults: K2 and K2 with loops).
    #[arg(long)]
    pub gadget: Option<PathBuf>,
    /// Base graph file for tensor (default: the cycle of length --n).
    #[arg(long)]
    pub base: Option<PathBuf>,
    /// Free strategy variables per player (strategies minus one).
    #[arg(long, default_value_t = 1)]
    pub k: usize,
    /// Game file with explicit payoffs; replaces --topology.
    #[arg(long, conflicts_with = "topology")]
    pub game: Option<PathBuf>,
    /// Lower end of the payoff sampling range.
    #[arg(long, default_value_t = -5.0, allow_hyphen_values = true)]
    pub lo: f64,
    /// Upper end of the payoff sampling range.
    #[arg(long, default_value_t = 5.0, allow_hyphen_values = true)]
    pub hi: f64,
}

fn read(path: &Path) -> Result<String> {
    fs::read_to_string(path).map_err(|e| Error::Parse(format!("cannot read {}: {e}", path.display())))
}

pub fn read_graph(path: &Path) -> Result<DirectedGraph> {
    GraphFile::parse(&read(path)?)
}

fn need(value: Option<usize>, flag: &str, kind: &str) -> Result<usize> {
    value.ok_or_else(|| Error::Invalid(format!("--topology {kind} needs --{flag}")))
}

impl InputArgs {
    pub fn topology(&self) -> Result<Option<Topology>> {
        let Some(kind) = self.topology else {
            return Ok(None);
        };
        let t = match kind {
            TopologyKind::Cycle => Topology::Cycle(need(self.n, "n", "cycle")?),
            TopologyKind::DisjointCycles => {
                if self.lengths.is_empty() {
                    return Err(Error::Invalid("--topology disjoint-cycles needs --lengths".into()));
                }
                Topology::DisjointCycles(self.lengths.clone())
            }
            TopologyKind::Figure8 => Topology::Figure8 {
                a: need(self.a, "a", "figure8")?,
                b: need(self.b, "b", "figure8")?,
            },
            TopologyKind::Theta => Topology::Theta(self.paths.clone()),
            TopologyKind::StdPrism => Topology::StdPrism(need(self.n, "n", "std-prism")?),
            TopologyKind::CrossPrism => Topology::CrossPrism(need(self.n, "n", "cross-prism")?),
            TopologyKind::Cartesian => Topology::Cartesian {
                n: need(self.n, "n", "cartesian")?,
                gadget: self.gadget_or(k2_gadget())?,
            },
            TopologyKind::Tensor => {
                let base = match &self.base {
                    Some(p) => read_graph(p)?,
                    None => topology_factory(&Topology::Cycle(need(self.n, "n", "tensor")?))?,
                };
                Topology::Tensor {
                    base,
                    gadget: self.gadget_or(k22_gadget())?,
                }
            }
        };
        Ok(Some(t))
    }

    fn gadget_or(&self, default: DirectedGraph) -> Result<DirectedGraph> {
        match &self.gadget {
            Some(p) => read_graph(p),
            None => Ok(default),
        }
    }

    fn require_topology(&self) -> Result<Topology> {
        self.topology()?
            .ok_or_else(|| Error::Invalid("pass --topology or --game".into()))
    }

    pub fn payoffs(&self) -> Result<UniformPayoffs> {
        UniformPayoffs::new(self.lo, self.hi)
    }

    /// Player graph and strategy dimensions, without sampling payoffs.
    pub fn structure(&self) -> Result<(DirectedGraph, Vec<usize>)> {
        if let Some(path) = &self.game {
            let game = GameFile::parse(&read(path)?)?;
            return Ok((game.graph().clone(), game.strategy_dims().to_vec()));
        }
        let g = topology_factory(&self.require_topology()?)?;
        let dims = vec![self.k; g.vertex_count()];
        Ok((g, dims))
    }

    pub fn game(&self, seed: u64) -> Result<NetworkGame> {
        if let Some(path) = &self.game {
            return GameFile::parse(&read(path)?);
        }
        let (g, dims) = self.structure()?;
        sample_generic_payoffs(&g, &dims, self.payoffs()?, seed)
    }

    pub fn system(&self, seed: u64) -> Result<PolynomialSystem> {
        Ok(build_indifference_system(&self.game(seed)?))
    }

    /// Polynomial graph: built from the game file when given, otherwise the
    /// generic support pattern of the topology.
    pub fn poly_graph(&self) -> Result<PolyGraph> {
        if self.game.is_some() {
            let sys = self.system(0)?;
            sys.ensure_generic()?;
            return Ok(build_poly_graph(&sys));
        }
        let (g, dims) = self.structure()?;
        generic_poly_graph(&g, &dims)
    }

    pub fn describe(&self) -> String {
        if let Some(p) = &self.game {
            return format!("game {}", p.display());
        }
        match self.topology() {
            Ok(Some(t)) => t.name().to_string(),
            _ => "unknown".into(),
        }
    }
}
