//! JSON experiment configs.
//!
//! Every config carries its experiment kind, an explicit master seed (no
//! wall-clock seeding anywhere), and the registered names of the strategies
//! it uses. Unknown fields are rejected so typos surface as config errors.

use serde::{Deserialize, Serialize};
use serde_json::Value;

#[derive(Clone, Debug, Deserialize, Serialize)]
pub struct NormSpec {
    pub name: String,
    #[serde(default)]
    pub params: Value,
}

impl Default for NormSpec {
    fn default() -> Self {
        Self {
            name: "weighted-l2".into(),
            params: Value::Null,
        }
    }
}

#[derive(Clone, Debug, Deserialize, Serialize)]
pub struct FunctionalSpec {
    pub name: String,
    #[serde(default)]
    pub params: Value,
}

#[derive(Clone, Debug, Deserialize, Serialize)]
pub struct BodySpec {
    pub kind: String,
    #[serde(default)]
    pub params: Value,
}

fn default_truncation() -> usize {
    10
}

fn default_samples() -> usize {
    100_000
}

fn default_depth() -> usize {
    4
}

fn default_dense_width() -> usize {
    16
}

fn default_dense_count() -> usize {
    80
}

#[derive(Clone, Debug, Deserialize, Serialize)]
#[serde(deny_unknown_fields)]
pub struct SampleConfig {
    pub kind: String,
    pub seed: u64,
    #[serde(default = "default_truncation")]
    pub truncation: usize,
    #[serde(default = "default_samples")]
    pub count: usize,
    /// How many samples go into the CSV (the report keeps only moments).
    #[serde(default = "default_csv_rows")]
    pub csv_rows: usize,
    #[serde(default)]
    pub anchor: Vec<f64>,
    /// Exactly one of `conormals` / `directions` describes the subspace.
    #[serde(default)]
    pub conormals: Option<Vec<Vec<f64>>>,
    #[serde(default)]
    pub directions: Option<Vec<Vec<f64>>>,
    #[serde(default)]
    pub out_dir: Option<String>,
}

fn default_csv_rows() -> usize {
    64
}

#[derive(Clone, Debug, Deserialize, Serialize)]
#[serde(deny_unknown_fields)]
pub struct TransformConfig {
    pub kind: String,
    pub seed: u64,
    #[serde(default = "default_truncation")]
    pub truncation: usize,
    #[serde(default = "default_samples")]
    pub samples: usize,
    pub normal: Vec<f64>,
    pub offset: f64,
    pub functional: FunctionalSpec,
    #[serde(default)]
    pub out_dir: Option<String>,
}

fn default_outer() -> usize {
    1_000
}

fn default_inner() -> usize {
    1_000
}

fn default_probe_directions() -> usize {
    5
}

#[derive(Clone, Debug, Deserialize, Serialize)]
#[serde(deny_unknown_fields)]
pub struct DisintegrateConfig {
    pub kind: String,
    pub seed: u64,
    #[serde(default = "default_truncation")]
    pub truncation: usize,
    #[serde(default = "default_samples")]
    pub lhs_samples: usize,
    #[serde(default = "default_outer")]
    pub outer_slices: usize,
    #[serde(default = "default_inner")]
    pub inner_samples: usize,
    pub normal: Vec<f64>,
    pub offset: f64,
    /// Rows spanning the frame F; the normal must lie in their span.
    pub frame: Vec<Vec<f64>>,
    pub functional: FunctionalSpec,
    /// Random dual directions for the closed-form probe family.
    #[serde(default = "default_probe_directions")]
    pub probe_directions: usize,
    #[serde(default)]
    pub out_dir: Option<String>,
}

#[derive(Clone, Debug, Deserialize, Serialize)]
#[serde(deny_unknown_fields)]
pub struct RecoverConfig {
    pub kind: String,
    pub seed: u64,
    pub point: Vec<f64>,
    #[serde(default = "default_depth")]
    pub depth: usize,
    #[serde(default = "default_samples")]
    pub count: usize,
    #[serde(default)]
    pub norm: NormSpec,
    pub functional: FunctionalSpec,
    #[serde(default = "default_dense_width")]
    pub dense_width: usize,
    #[serde(default = "default_dense_count")]
    pub dense_count: usize,
    #[serde(default)]
    pub out_dir: Option<String>,
}

#[derive(Clone, Debug, Deserialize, Serialize)]
#[serde(deny_unknown_fields)]
pub struct TailsConfig {
    pub kind: String,
    pub seed: u64,
    #[serde(default)]
    pub conormals: Vec<Vec<f64>>,
    #[serde(default)]
    pub norm: NormSpec,
    #[serde(default = "default_depth")]
    pub depth: usize,
    pub radius: f64,
    #[serde(default = "default_samples")]
    pub count: usize,
    #[serde(default)]
    pub certificate_samples: Option<usize>,
    #[serde(default = "default_dense_width")]
    pub dense_width: usize,
    #[serde(default = "default_dense_count")]
    pub dense_count: usize,
    #[serde(default)]
    pub out_dir: Option<String>,
}

fn default_witness_samples() -> usize {
    20_000
}

#[derive(Clone, Debug, Deserialize, Serialize)]
#[serde(deny_unknown_fields)]
pub struct SupportExperimentConfig {
    pub kind: String,
    pub seed: u64,
    #[serde(default = "default_truncation")]
    pub truncation: usize,
    #[serde(default = "default_depth")]
    pub depth: usize,
    #[serde(default = "default_samples")]
    pub samples_per_level: usize,
    #[serde(default = "default_witness_samples")]
    pub witness_samples: usize,
    pub point: Vec<f64>,
    pub body: BodySpec,
    pub functional: FunctionalSpec,
    #[serde(default)]
    pub norm: NormSpec,
    #[serde(default = "default_dense_width")]
    pub dense_width: usize,
    #[serde(default = "default_dense_count")]
    pub dense_count: usize,
    #[serde(default)]
    pub out_dir: Option<String>,
}

fn default_angles() -> usize {
    64
}

fn default_offsets() -> usize {
    64
}

fn default_offset_step() -> f64 {
    1.0 / 16.0
}

fn default_line_samples() -> usize {
    10_000
}

#[derive(Clone, Debug, Deserialize, Serialize)]
#[serde(deny_unknown_fields)]
pub struct HelgasonConfig {
    pub kind: String,
    pub seed: u64,
    #[serde(default = "default_line_samples")]
    pub samples: usize,
    pub functional: FunctionalSpec,
    pub body: BodySpec,
    #[serde(default = "default_angles")]
    pub angles: usize,
    #[serde(default = "default_offsets")]
    pub offsets: usize,
    #[serde(default = "default_offset_step")]
    pub offset_step: f64,
    #[serde(default)]
    pub out_dir: Option<String>,
}

fn default_levels() -> u32 {
    8
}

fn default_paths_csv() -> usize {
    3
}

#[derive(Clone, Debug, Deserialize, Serialize)]
#[serde(deny_unknown_fields)]
pub struct ConditionSpec {
    pub functional: FunctionalSpec,
    /// Cameron-Martin coefficients of the unit normal.
    pub normal: Vec<f64>,
    pub offset: f64,
    #[serde(default = "default_samples")]
    pub samples: usize,
}

#[derive(Clone, Debug, Deserialize, Serialize)]
#[serde(deny_unknown_fields)]
pub struct WienerSanityConfig {
    pub kind: String,
    pub seed: u64,
    #[serde(default = "default_levels")]
    pub levels: u32,
    #[serde(default = "default_samples")]
    pub count: usize,
    #[serde(default = "default_paths_csv")]
    pub paths_csv: usize,
    #[serde(default)]
    pub condition: Option<ConditionSpec>,
    #[serde(default)]
    pub out_dir: Option<String>,
}
