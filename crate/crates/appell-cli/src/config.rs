//! Run configuration: one JSON document drives every subcommand.

use anyhow::{Context, Result};
use appell_core::genfun::{GenFunDoc, GeneratingFunction};
use serde::{Deserialize, Serialize};
use std::path::Path;

fn default_rho() -> f64 {
    2.0
}
fn default_resolution() -> usize {
    2048
}
fn default_tie() -> f64 {
    1e-9
}
fn default_improper() -> f64 {
    1e-9
}
fn default_arc_bin_dev() -> f64 {
    0.20
}
fn default_segment_bin_dev() -> f64 {
    0.25
}
fn default_containment_slack() -> f64 {
    0.05
}
fn default_bins_arc() -> usize {
    8
}
fn default_bins_segment() -> usize {
    6
}
fn default_window_factor() -> f64 {
    5.0
}
fn default_rectangles() -> usize {
    10
}
fn default_rect_half_extent() -> f64 {
    1.5
}
fn default_base_nodes() -> usize {
    256
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct Tolerances {
    #[serde(default = "default_tie")]
    pub tie: f64,
    #[serde(default = "default_improper")]
    pub improper: f64,
    #[serde(default = "default_arc_bin_dev")]
    pub arc_bin_dev: f64,
    #[serde(default = "default_segment_bin_dev")]
    pub segment_bin_dev: f64,
    /// optional gate on the directed zeros→attractor distance
    #[serde(default)]
    pub hausdorff_directed: Option<f64>,
    #[serde(default = "default_containment_slack")]
    pub containment_slack: f64,
}

impl Default for Tolerances {
    fn default() -> Self {
        Tolerances {
            tie: default_tie(),
            improper: default_improper(),
            arc_bin_dev: default_arc_bin_dev(),
            segment_bin_dev: default_segment_bin_dev(),
            hausdorff_directed: None,
            containment_slack: default_containment_slack(),
        }
    }
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct AsymPointDoc {
    pub re: f64,
    pub im: f64,
    /// "exterior" or "dominant-sum"
    pub mode: String,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct ValidateSection {
    #[serde(default = "default_bins_arc")]
    pub bins_arc: usize,
    #[serde(default = "default_bins_segment")]
    pub bins_segment: usize,
    #[serde(default = "default_window_factor")]
    pub window_factor: f64,
    #[serde(default = "default_rectangles")]
    pub rectangles: usize,
    #[serde(default = "default_rect_half_extent")]
    pub rect_half_extent: f64,
    #[serde(default = "default_base_nodes")]
    pub base_nodes: usize,
    #[serde(default)]
    pub asym_n: Vec<usize>,
    #[serde(default)]
    pub asym_points: Vec<AsymPointDoc>,
    /// density histograms on/off (they need enough zeros near each piece)
    #[serde(default)]
    pub density: bool,
}

impl Default for ValidateSection {
    fn default() -> Self {
        ValidateSection {
            bins_arc: default_bins_arc(),
            bins_segment: default_bins_segment(),
            window_factor: default_window_factor(),
            rectangles: default_rectangles(),
            rect_half_extent: default_rect_half_extent(),
            base_nodes: default_base_nodes(),
            asym_n: Vec::new(),
            asym_points: Vec::new(),
            density: false,
        }
    }
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct RunConfig {
    pub genfun: GenFunDoc,
    pub degree: usize,
    #[serde(default = "default_rho")]
    pub rho: f64,
    #[serde(default)]
    pub precision: Option<u32>,
    #[serde(default = "default_resolution")]
    pub resolution: usize,
    #[serde(default)]
    pub seed: u64,
    #[serde(default)]
    pub tolerances: Tolerances,
    #[serde(default)]
    pub validate: ValidateSection,
}

impl RunConfig {
    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path)
            .with_context(|| format!("reading config {}", path.display()))?;
        let cfg: RunConfig = serde_json::from_str(&text)
            .with_context(|| format!("parsing config {}", path.display()))?;
        if cfg.degree < 1 {
            anyhow::bail!("config error: key 'degree' must be >= 1");
        }
        if !cfg.rho.is_finite() || cfg.rho <= 0.0 {
            anyhow::bail!("config error: key 'rho' must be positive");
        }
        for (name, v) in [
            ("tolerances.tie", cfg.tolerances.tie),
            ("tolerances.improper", cfg.tolerances.improper),
            ("tolerances.arc_bin_dev", cfg.tolerances.arc_bin_dev),
            ("tolerances.segment_bin_dev", cfg.tolerances.segment_bin_dev),
            (
                "tolerances.containment_slack",
                cfg.tolerances.containment_slack,
            ),
        ] {
            if !v.is_finite() || v <= 0.0 {
                anyhow::bail!("config error: key '{name}' must be positive");
            }
        }
        Ok(cfg)
    }

    pub fn genfun(&self) -> Result<GeneratingFunction> {
        Ok(GeneratingFunction::from_doc(&self.genfun)?)
    }

    pub fn precision_for(&self, degree: usize) -> u32 {
        self.precision
            .unwrap_or_else(|| appell_core::rootfind::default_precision(degree))
    }

    pub fn describe_genfun(&self) -> String {
        match &self.genfun {
            GenFunDoc::Catalog { name, order } => {
                format!("catalog:{:?}(order {})", name, order.unwrap_or(1))
            }
            GenFunDoc::Poly { roots, .. } => format!("poly({} roots)", roots.len()),
        }
    }
}
