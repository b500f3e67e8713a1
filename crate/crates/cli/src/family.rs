use std::path::PathBuf;

use clap::{Args, ValueEnum};
use perfmat_core::generators::{random_bipartite, random_graph};
use perfmat_core::{parse_graph, CampaignSpec, Family, Graph};

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
#[value(rename_all = "snake_case")]
pub enum FamilyKind {
    Complete,
    CompleteBipartite,
    BipartiteUnion,
    ErdosRenyi,
    RandomBipartite,
}

/// Generator flags shared by every subcommand that builds graphs.
#[derive(Args, Clone, Debug, Default)]
pub struct FamilyArgs {
    /// Graph family.
    #[arg(long, value_enum)]
    pub family: Option<FamilyKind>,
    /// Vertices (complete, erdos_renyi) or vertices per side (random_bipartite).
    #[arg(long)]
    pub n: Option<usize>,
    /// Left side of complete_bipartite.
    #[arg(long)]
    pub a: Option<usize>,
    /// Right side of complete_bipartite.
    #[arg(long)]
    pub b: Option<usize>,
    /// Block sizes of bipartite_union, comma separated.
    #[arg(long, value_delimiter = ',')]
    pub rs: Vec<usize>,
    /// Edge probability of the random families.
    #[arg(long)]
    pub p: Option<f64>,
    /// Seed of the random families. Required for them; there is no default.
    #[arg(long)]
    pub seed: Option<u64>,
}

fn need<T: Copy>(v: Option<T>, flag: &str, family: &str) -> Result<T, String> {
    v.ok_or_else(|| format!("--family {family} needs --{flag}"))
}

impl FamilyArgs {
    pub fn family(&self) -> Result<Family, String> {
        let kind = self.family.ok_or("no input: give a file or --family")?;
        let name = kind.to_possible_value().map(|v| v.get_name().to_owned()).unwrap_or_default();
        let name = name.as_str();
        Ok(match kind {
            FamilyKind::Complete => Family::Complete { n: need(self.n, "n", name)? },
            FamilyKind::CompleteBipartite => {
                Family::CompleteBipartite { a: need(self.a, "a", name)?, b: need(self.b, "b", name)? }
            }
            FamilyKind::BipartiteUnion => {
                if self.rs.is_empty() {
                    return Err(format!("--family {name} needs --rs"));
                }
                Family::BipartiteUnion { rs: self.rs.clone() }
            }
            FamilyKind::ErdosRenyi => Family::ErdosRenyi { n: need(self.n, "n", name)?, p: need(self.p, "p", name)? },
            FamilyKind::RandomBipartite => {
                Family::RandomBipartite { n: need(self.n, "n", name)?, p: need(self.p, "p", name)? }
            }
        })
    }

    pub fn spec(&self, samples: usize) -> Result<CampaignSpec, Box<dyn std::error::Error>> {
        let spec = CampaignSpec { family: self.family()?, seed: self.seed, samples };
        spec.validate()?;
        Ok(spec)
    }

    /// A single graph. Random families use `--seed` directly as the
    /// generator seed, or the seed of campaign sample `sample` when given.
    pub fn graph(&self, sample: Option<usize>) -> Result<Graph, Box<dyn std::error::Error>> {
        if let Some(i) = sample {
            return Ok(self.spec(i + 1)?.graph(i)?);
        }
        let spec = self.spec(1)?;
        let seed = spec.seed.unwrap_or(0);
        Ok(match spec.family {
            Family::ErdosRenyi { n, p } => random_graph(n, p, seed)?,
            Family::RandomBipartite { n, p } => random_bipartite(n, p, seed)?,
            _ => spec.graph(0)?,
        })
    }
}

/// Reads an edge-list file, or standard input for `-`.
pub fn read_graph(path: &PathBuf) -> Result<Graph, Box<dyn std::error::Error>> {
    let text = if path.as_os_str() == "-" {
        std::io::read_to_string(std::io::stdin())?
    } else {
        std::fs::read_to_string(path).map_err(|e| format!("{}: {e}", path.display()))?
    };
    parse_graph(&text).map_err(|e| format!("{}: {e}", path.display()).into())
}

pub fn input_graph(
    input: &Option<PathBuf>,
    family: &FamilyArgs,
    sample: Option<usize>,
) -> Result<Graph, Box<dyn std::error::Error>> {
    match (input, family.family) {
        (Some(_), Some(_)) => Err("give either an input file or --family, not both".into()),
        (Some(path), None) => read_graph(path),
        (None, _) => family.graph(sample),
    }
}
