//! Config files share one JSON schema with the report's embedded config;
//! CLI flags override fields one-for-one.

use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use crate::error::CliError;

#[derive(Debug, Clone, Default, Serialize, Deserialize)]
#[serde(default)]
pub struct FileConfig {
    pub graph: Option<PathBuf>,
    pub labels: Option<PathBuf>,
    pub order: Option<String>,
    pub tree: Option<String>,
    pub root: Option<u32>,
    pub seed: Option<u64>,
    pub out: Option<PathBuf>,
    pub transcript: Option<PathBuf>,
    pub paths: Option<PathBuf>,
    pub jobs: Option<usize>,
    pub c_cal: Option<f64>,
    pub first_token: Option<String>,
    pub fallback: Option<String>,
    pub family: Option<String>,
    pub n: Option<usize>,
    pub labeling: Option<String>,
    pub arity: Option<usize>,
    pub width: Option<usize>,
    pub height: Option<usize>,
    pub blocks: Option<usize>,
    pub target_cut: Option<usize>,
    pub p: Option<f64>,
    pub families: Option<Vec<String>>,
    pub sizes: Option<Vec<usize>>,
    pub seeds: Option<u64>,
    pub orders: Option<Vec<String>>,
}

impl FileConfig {
    pub fn load(path: &Path) -> Result<FileConfig, CliError> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| CliError::input(format!("cannot read config {}: {e}", path.display())))?;
        serde_json::from_str(&text)
            .map_err(|e| CliError::input(format!("bad config {}: {e}", path.display())))
    }

    pub fn load_opt(path: Option<&PathBuf>) -> Result<FileConfig, CliError> {
        match path {
            Some(p) => Self::load(p),
            None => Ok(FileConfig::default()),
        }
    }

    /// Overlay `flags` on top of this config; set flags win.
    pub fn overridden_by(mut self, flags: FileConfig) -> FileConfig {
        macro_rules! take {
            ($($field:ident),*) => {
                $(if flags.$field.is_some() { self.$field = flags.$field; })*
            };
        }
        take!(
            graph,
            labels,
            order,
            tree,
            root,
            seed,
            out,
            transcript,
            paths,
            jobs,
            c_cal,
            first_token,
            fallback,
            family,
            n,
            labeling,
            arity,
            width,
            height,
            blocks,
            target_cut,
            p,
            families,
            sizes,
            seeds,
            orders
        );
        self
    }
}
