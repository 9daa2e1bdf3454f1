//! Run configuration files. Every key is optional; command-line flags win
//! over file values, and unknown keys are rejected by name.

use std::path::Path;

use anyhow::{bail, Context, Result};
use serde::Deserialize;

use letterblocks::search::{AnnealParams, GeneticParams, TreeVariant};
use letterblocks::Target;

#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FileConfig {
    pub target: Option<Target>,
    pub budget: Option<u64>,
    pub top_k: Option<usize>,
    pub progress_every: Option<u64>,
    /// "base", "seed2k" or a 36-letter permutation.
    pub root: Option<String>,
    /// "table", "corpus" or a 36-letter permutation.
    pub base: Option<String>,
    pub scenario_seeds: Option<Vec<String>>,
    pub anneal: Option<AnnealSection>,
    pub tree: Option<TreeSection>,
    pub genetic: Option<GeneticSection>,
}

#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct AnnealSection {
    pub t0: Option<f64>,
    pub cooling: Option<f64>,
}

#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TreeSection {
    pub variant: Option<String>,
}

#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GeneticSection {
    pub generations: Option<u64>,
    pub elites: Option<usize>,
    pub crossed_elite: Option<usize>,
    pub crossed_mixed: Option<usize>,
    pub mutated: Option<usize>,
    pub random: Option<usize>,
    pub repair: Option<bool>,
}

impl FileConfig {
    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path)
            .with_context(|| format!("cannot read config {}", path.display()))?;
        Self::parse(&text).with_context(|| format!("invalid config {}", path.display()))
    }

    pub fn parse(text: &str) -> Result<Self> {
        Ok(toml::from_str(text)?)
    }

    /// Fails when the file carries a section for a different algorithm.
    pub fn check_sections(&self, algorithm: &str) -> Result<()> {
        for (name, present) in [
            ("anneal", self.anneal.is_some()),
            ("tree", self.tree.is_some()),
            ("genetic", self.genetic.is_some()),
        ] {
            if present && name != algorithm {
                bail!("section [{name}] does not apply to the {algorithm} algorithm");
            }
        }
        Ok(())
    }
}

impl AnnealSection {
    pub fn resolve(&self, t0: Option<f64>, cooling: Option<f64>) -> AnnealParams {
        let d = AnnealParams::default();
        AnnealParams {
            t0: t0.or(self.t0).unwrap_or(d.t0),
            cooling: cooling.or(self.cooling).unwrap_or(d.cooling),
        }
    }
}

impl TreeSection {
    pub fn resolve(&self, variant: Option<TreeVariant>) -> Result<TreeVariant> {
        match (variant, &self.variant) {
            (Some(v), _) => Ok(v),
            (None, Some(s)) => s.parse().map_err(anyhow::Error::msg),
            (None, None) => Ok(TreeVariant::ConstrainedGreedy),
        }
    }
}

/// Genetic knobs given on the command line.
#[derive(Debug, Default, Clone, Copy)]
pub struct GeneticFlags {
    pub generations: Option<u64>,
    pub elites: Option<usize>,
    pub crossed_elite: Option<usize>,
    pub crossed_mixed: Option<usize>,
    pub mutated: Option<usize>,
    pub random: Option<usize>,
    pub repair: bool,
}

impl GeneticSection {
    pub fn resolve(&self, flags: &GeneticFlags) -> GeneticParams {
        let d = GeneticParams::default();
        GeneticParams {
            generations: flags
                .generations
                .or(self.generations)
                .unwrap_or(d.generations),
            elites: flags.elites.or(self.elites).unwrap_or(d.elites),
            crossed_elite: flags
                .crossed_elite
                .or(self.crossed_elite)
                .unwrap_or(d.crossed_elite),
            crossed_mixed: flags
                .crossed_mixed
                .or(self.crossed_mixed)
                .unwrap_or(d.crossed_mixed),
            mutated: flags.mutated.or(self.mutated).unwrap_or(d.mutated),
            random: flags.random.or(self.random).unwrap_or(d.random),
            repair: flags.repair || self.repair.unwrap_or(d.repair),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn unknown_keys_are_named() {
        let err = FileConfig::parse("budget = 5\ncoolng = 0.9\n").unwrap_err();
        assert!(format!("{err:#}").contains("coolng"), "{err:#}");
        let err = FileConfig::parse("[genetic]\nelite = 3\n").unwrap_err();
        assert!(format!("{err:#}").contains("elite"), "{err:#}");
    }

    #[test]
    fn flags_override_file() {
        let cfg = FileConfig::parse("[genetic]\nelites = 5\nmutated = 2\n").unwrap();
        let flags = GeneticFlags {
            elites: Some(7),
            ..Default::default()
        };
        let g = cfg.genetic.unwrap().resolve(&flags);
        assert_eq!((g.elites, g.mutated, g.random), (7, 2, 10));
    }

    #[test]
    fn foreign_sections_are_rejected() {
        let cfg = FileConfig::parse("[anneal]\nt0 = 5.0\n").unwrap();
        assert!(cfg.check_sections("anneal").is_ok());
        assert!(cfg.check_sections("tree").is_err());
    }
}
