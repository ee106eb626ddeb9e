//! Declarative sweep configuration (TOML, strict: unknown keys are fatal).

use std::collections::BTreeMap;
use std::path::{Path, PathBuf};

use serde::Deserialize;
use thiserror::Error;

use dse_core::bench::{self, BenchmarkId};
use dse_core::circuit::GateKind;
use dse_core::device::{native_gates_device, native_gates_sweep, DeviceSpec, XtalkParams};
use dse_core::layout::layout_by_name;
use dse_core::metrics::MetricParams;
use dse_core::noise::NoiseKind;
use dse_core::route::router_by_name;
use dse_core::schedule::SchedulePolicy;
use dse_core::topology::{densify, heavy_hex, sycamore_grid, CouplingGraph};

#[derive(Debug, Error)]
pub enum ConfigError {
    #[error("cannot read {path}: {source}")]
    Io { path: PathBuf, source: std::io::Error },
    #[error("parse error: {0}")]
    Parse(#[from] toml::de::Error),
    #[error("field '{field}': {message}")]
    Invalid { field: String, message: String },
}

fn invalid(field: &str, message: impl Into<String>) -> ConfigError {
    ConfigError::Invalid { field: field.to_string(), message: message.into() }
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SweepConfig {
    #[serde(default)]
    pub sweep: SweepSection,
    #[serde(default)]
    pub device: DeviceSection,
    #[serde(default)]
    pub noise: NoiseSection,
    #[serde(default)]
    pub compiler: CompilerSection,
    pub benchmarks: BenchmarkSection,
    #[serde(default)]
    pub metrics: MetricsSection,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SweepSection {
    #[serde(default = "default_seeds")]
    pub seeds: Vec<u64>,
    #[serde(default = "default_workers")]
    pub workers: usize,
}

impl Default for SweepSection {
    fn default() -> Self {
        SweepSection { seeds: default_seeds(), workers: default_workers() }
    }
}

fn default_seeds() -> Vec<u64> {
    vec![1]
}

fn default_workers() -> usize {
    1
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DeviceSection {
    #[serde(default = "default_topologies")]
    pub topologies: Vec<TopologySpec>,
    /// Density axis: optional leading "base" (the graph's own density)
    /// followed by ascending targets in (0, 1].
    #[serde(default = "default_densities")]
    pub densities: Vec<DensityTarget>,
    /// Seed of the random edge additions; fixed per sweep so every grid
    /// point sees the same densified hardware.
    #[serde(default = "default_densify_seed")]
    pub densify_seed: u64,
    /// Native gate set: "device" (id/rz/sx/x/cx/swap/cz) or "sweep"
    /// (x/y/z/rx/ry/rz/cx/cy).
    #[serde(default = "default_native")]
    pub native_gates: String,
}

impl Default for DeviceSection {
    fn default() -> Self {
        DeviceSection {
            topologies: default_topologies(),
            densities: default_densities(),
            densify_seed: default_densify_seed(),
            native_gates: default_native(),
        }
    }
}

fn default_topologies() -> Vec<TopologySpec> {
    vec![TopologySpec::HeavyHex { rows: 6, cols: 4, crop_to: Some(128) }]
}

fn default_densities() -> Vec<DensityTarget> {
    vec![DensityTarget::Keyword("base".to_string())]
}

fn default_densify_seed() -> u64 {
    1
}

fn default_native() -> String {
    "device".to_string()
}

#[derive(Debug, Clone, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum TopologySpec {
    HeavyHex { rows: usize, cols: usize, #[serde(default)] crop_to: Option<usize> },
    Sycamore { rows: usize, cols: usize },
    Custom { edge_list: PathBuf },
}

impl TopologySpec {
    pub fn label(&self) -> String {
        match self {
            TopologySpec::HeavyHex { rows, cols, crop_to: Some(n) } => format!("heavy_hex_{rows}x{cols}_crop{n}"),
            TopologySpec::HeavyHex { rows, cols, crop_to: None } => format!("heavy_hex_{rows}x{cols}"),
            TopologySpec::Sycamore { rows, cols } => format!("sycamore_{rows}x{cols}"),
            TopologySpec::Custom { edge_list } => format!(
                "custom_{}",
                edge_list.file_stem().map(|s| s.to_string_lossy().into_owned()).unwrap_or_default()
            ),
        }
    }

    pub fn build(&self, base_dir: &Path) -> Result<CouplingGraph, ConfigError> {
        match self {
            TopologySpec::HeavyHex { rows, cols, crop_to } => heavy_hex(*rows, *cols, *crop_to)
                .map_err(|e| invalid("device.topologies", e.to_string())),
            TopologySpec::Sycamore { rows, cols } => {
                sycamore_grid(*rows, *cols).map_err(|e| invalid("device.topologies", e.to_string()))
            }
            TopologySpec::Custom { edge_list } => {
                let path = if edge_list.is_absolute() { edge_list.clone() } else { base_dir.join(edge_list) };
                let text = std::fs::read_to_string(&path)
                    .map_err(|source| ConfigError::Io { path: path.clone(), source })?;
                CouplingGraph::from_edge_list(&text).map_err(|e| invalid("device.topologies", e.to_string()))
            }
        }
    }
}

/// One density-axis entry: the literal string "base" or a target in (0, 1].
#[derive(Debug, Clone, PartialEq, Deserialize)]
#[serde(untagged)]
pub enum DensityTarget {
    Keyword(String),
    Value(f64),
}

impl DensityTarget {
    pub fn is_base(&self) -> bool {
        matches!(self, DensityTarget::Keyword(k) if k == "base")
    }

    pub fn label(&self) -> String {
        match self {
            DensityTarget::Keyword(k) => k.clone(),
            DensityTarget::Value(v) => format!("{v}"),
        }
    }
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct NoiseSection {
    #[serde(default = "default_models")]
    pub models: Vec<String>,
    #[serde(default = "default_f1q")]
    pub f1q: f64,
    #[serde(default = "default_f2q")]
    pub f2q: f64,
    #[serde(default = "default_t1")]
    pub t1: f64,
    #[serde(default = "default_t2")]
    pub t2: f64,
    #[serde(default = "default_d1q")]
    pub duration_1q: f64,
    #[serde(default = "default_d2q")]
    pub duration_2q: f64,
    #[serde(default = "default_dm")]
    pub duration_measure: f64,
    #[serde(default = "default_p1q")]
    pub depol_1q: f64,
    #[serde(default = "default_p2q")]
    pub depol_2q: f64,
    #[serde(default)]
    pub xtalk: XtalkSection,
    /// Per-gate-name overrides.
    #[serde(default)]
    pub gate_fidelity: BTreeMap<String, f64>,
    #[serde(default)]
    pub gate_duration: BTreeMap<String, f64>,
    #[serde(default)]
    pub gate_depol: BTreeMap<String, f64>,
}

impl Default for NoiseSection {
    fn default() -> Self {
        toml::from_str("").expect("empty noise section")
    }
}

fn default_models() -> Vec<String> {
    NoiseKind::ALL.iter().map(|k| k.name().to_string()).collect()
}

fn default_f1q() -> f64 {
    dse_core::device::DEFAULT_F1Q
}

fn default_f2q() -> f64 {
    dse_core::device::DEFAULT_F2Q
}

fn default_t1() -> f64 {
    dse_core::device::DEFAULT_T1
}

fn default_t2() -> f64 {
    dse_core::device::DEFAULT_T2
}

fn default_d1q() -> f64 {
    dse_core::device::DEFAULT_DURATION_1Q
}

fn default_d2q() -> f64 {
    dse_core::device::DEFAULT_DURATION_2Q
}

fn default_dm() -> f64 {
    dse_core::device::DEFAULT_DURATION_MEASURE
}

fn default_p1q() -> f64 {
    dse_core::device::DEFAULT_DEPOL_1Q
}

fn default_p2q() -> f64 {
    dse_core::device::DEFAULT_DEPOL_2Q
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct XtalkSection {
    #[serde(default = "default_one")]
    pub n: f64,
    #[serde(default = "default_one")]
    pub k: f64,
    #[serde(default = "default_rmax")]
    pub r_max: f64,
    #[serde(default = "default_w")]
    pub single_qubit_weight: f64,
}

impl Default for XtalkSection {
    fn default() -> Self {
        XtalkSection { n: 1.0, k: 1.0, r_max: 2.0, single_qubit_weight: 0.5 }
    }
}

fn default_one() -> f64 {
    1.0
}

fn default_rmax() -> f64 {
    2.0
}

fn default_w() -> f64 {
    0.5
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CompilerSection {
    #[serde(default = "default_layouts")]
    pub layouts: Vec<String>,
    #[serde(default = "default_routings")]
    pub routings: Vec<String>,
    #[serde(default = "default_levels")]
    pub opt_levels: Vec<u8>,
    #[serde(default = "default_setups")]
    pub setups: Vec<u8>,
    #[serde(default = "default_scheduling")]
    pub scheduling: Vec<String>,
    #[serde(default = "default_sabre_trials")]
    pub sabre_trials: usize,
    #[serde(default = "default_stochastic_trials")]
    pub stochastic_trials: usize,
}

impl Default for CompilerSection {
    fn default() -> Self {
        toml::from_str("").expect("empty compiler section")
    }
}

fn default_layouts() -> Vec<String> {
    vec!["sabre".to_string()]
}

fn default_routings() -> Vec<String> {
    vec!["sabre".to_string()]
}

fn default_levels() -> Vec<u8> {
    vec![1]
}

fn default_setups() -> Vec<u8> {
    vec![0]
}

fn default_scheduling() -> Vec<String> {
    vec!["alap".to_string()]
}

fn default_sabre_trials() -> usize {
    4
}

fn default_stochastic_trials() -> usize {
    20
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BenchmarkSection {
    /// Benchmark ids (`family:size[:seed[:layers]]`) and/or QASM file paths.
    #[serde(default)]
    pub suite: Vec<String>,
    /// Prepend the built-in 18-entry default suite.
    #[serde(default)]
    pub default_suite: bool,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MetricsSection {
    #[serde(default = "default_f1q")]
    pub f1q: f64,
    #[serde(default = "default_f2q")]
    pub f2q: f64,
    #[serde(default = "default_k_depth")]
    pub k_depth: f64,
    /// Noise model used for the fidelity-decrease metric; defaults to the
    /// first entry of the noise model axis.
    #[serde(default)]
    pub fidelity_model: Option<String>,
}

impl Default for MetricsSection {
    fn default() -> Self {
        toml::from_str("").expect("empty metrics section")
    }
}

fn default_k_depth() -> f64 {
    0.995
}

/// One benchmark entry after validation.
#[derive(Debug, Clone)]
pub enum BenchmarkSource {
    Builtin(BenchmarkId),
    QasmFile { name: String, path: PathBuf },
}

impl BenchmarkSource {
    pub fn name(&self) -> String {
        match self {
            BenchmarkSource::Builtin(id) => id.to_string(),
            BenchmarkSource::QasmFile { name, .. } => name.clone(),
        }
    }
}

/// Fully validated configuration, ready for the runner.
#[derive(Debug, Clone)]
pub struct ValidatedConfig {
    pub raw: SweepConfig,
    pub base_dir: PathBuf,
    pub benchmarks: Vec<BenchmarkSource>,
    pub noise_models: Vec<NoiseKind>,
    pub fidelity_model: NoiseKind,
    pub scheduling: Vec<SchedulePolicy>,
    pub metric_params: MetricParams,
}

/// Loads and validates a sweep config file.
pub fn load_config(path: &Path) -> Result<ValidatedConfig, ConfigError> {
    let text = std::fs::read_to_string(path)
        .map_err(|source| ConfigError::Io { path: path.to_path_buf(), source })?;
    let raw: SweepConfig = toml::from_str(&text)?;
    let base_dir = path.parent().unwrap_or_else(|| Path::new(".")).to_path_buf();
    validate(raw, base_dir)
}

pub fn validate(raw: SweepConfig, base_dir: PathBuf) -> Result<ValidatedConfig, ConfigError> {
    if raw.sweep.workers == 0 {
        return Err(invalid("sweep.workers", "must be at least 1"));
    }
    if raw.sweep.seeds.is_empty() {
        return Err(invalid("sweep.seeds", "must not be empty"));
    }
    if raw.device.topologies.is_empty() {
        return Err(invalid("device.topologies", "must not be empty"));
    }

    // Density axis: optional leading "base", then strictly ascending values.
    let mut last: Option<f64> = None;
    for (i, d) in raw.device.densities.iter().enumerate() {
        match d {
            _ if d.is_base() => {
                if i != 0 {
                    return Err(invalid("device.densities", "'base' must come first"));
                }
                if let DensityTarget::Keyword(k) = d {
                    if k != "base" {
                        return Err(invalid("device.densities", format!("unknown keyword '{k}'")));
                    }
                }
            }
            DensityTarget::Keyword(k) => {
                return Err(invalid("device.densities", format!("unknown keyword '{k}'")));
            }
            DensityTarget::Value(v) => {
                if !(*v > 0.0 && *v <= 1.0) {
                    return Err(invalid("device.densities", format!("target {v} outside (0, 1]")));
                }
                if let Some(prev) = last {
                    if *v <= prev {
                        return Err(invalid("device.densities", "targets must be sorted ascending"));
                    }
                }
                last = Some(*v);
            }
        }
    }
    if raw.device.densities.is_empty() {
        return Err(invalid("device.densities", "must not be empty"));
    }
    if !matches!(raw.device.native_gates.as_str(), "device" | "sweep") {
        return Err(invalid("device.native_gates", format!("unknown basis '{}'", raw.device.native_gates)));
    }

    for name in &raw.compiler.layouts {
        layout_by_name(name).map_err(|e| invalid("compiler.layouts", e.to_string()))?;
    }
    for name in &raw.compiler.routings {
        router_by_name(name).map_err(|e| invalid("compiler.routings", e.to_string()))?;
    }
    for level in &raw.compiler.opt_levels {
        if *level > 3 {
            return Err(invalid("compiler.opt_levels", format!("level {level} outside 0-3")));
        }
    }
    for setup in &raw.compiler.setups {
        if *setup > 5 {
            return Err(invalid("compiler.setups", format!("setup {setup} outside 0-5")));
        }
    }
    if raw.compiler.layouts.is_empty()
        || raw.compiler.routings.is_empty()
        || raw.compiler.opt_levels.is_empty()
        || raw.compiler.setups.is_empty()
        || raw.compiler.scheduling.is_empty()
    {
        return Err(invalid("compiler", "axis lists must not be empty"));
    }
    if raw.compiler.sabre_trials == 0 || raw.compiler.stochastic_trials == 0 {
        return Err(invalid("compiler", "trial counts must be at least 1"));
    }
    let mut scheduling = Vec::new();
    for name in &raw.compiler.scheduling {
        scheduling.push(
            SchedulePolicy::from_name(name)
                .ok_or_else(|| invalid("compiler.scheduling", format!("unknown policy '{name}'")))?,
        );
    }

    let mut noise_models = Vec::new();
    for name in &raw.noise.models {
        let kind = NoiseKind::from_name(name)
            .ok_or_else(|| invalid("noise.models", format!("unknown model '{name}'")))?;
        if !noise_models.contains(&kind) {
            noise_models.push(kind);
        }
    }
    if noise_models.is_empty() {
        return Err(invalid("noise.models", "must not be empty"));
    }
    for table in ["gate_fidelity", "gate_duration", "gate_depol"] {
        let map = match table {
            "gate_fidelity" => &raw.noise.gate_fidelity,
            "gate_duration" => &raw.noise.gate_duration,
            _ => &raw.noise.gate_depol,
        };
        for name in map.keys() {
            if GateKind::from_name(name).is_none() {
                return Err(invalid(&format!("noise.{table}"), format!("unknown gate '{name}'")));
            }
        }
    }
    for (field, value) in [("noise.f1q", raw.noise.f1q), ("noise.f2q", raw.noise.f2q)] {
        if !(value > 0.0 && value <= 1.0) {
            return Err(invalid(field, format!("fidelity {value} outside (0, 1]")));
        }
    }
    if raw.noise.t2 > 2.0 * raw.noise.t1 {
        return Err(invalid("noise.t2", "requires t2 <= 2 * t1"));
    }

    let fidelity_model = match &raw.metrics.fidelity_model {
        Some(name) => NoiseKind::from_name(name)
            .ok_or_else(|| invalid("metrics.fidelity_model", format!("unknown model '{name}'")))?,
        None => noise_models[0],
    };
    if !noise_models.contains(&fidelity_model) {
        return Err(invalid("metrics.fidelity_model", "model is not part of the noise axis"));
    }

    let mut benchmarks = Vec::new();
    if raw.benchmarks.default_suite {
        benchmarks.extend(bench::list_suite().into_iter().map(BenchmarkSource::Builtin));
    }
    for entry in &raw.benchmarks.suite {
        if entry.ends_with(".qasm") || entry.contains('/') {
            let path = PathBuf::from(entry);
            let path = if path.is_absolute() { path } else { base_dir.join(path) };
            let name = path.file_stem().map(|s| s.to_string_lossy().into_owned()).unwrap_or_else(|| entry.clone());
            benchmarks.push(BenchmarkSource::QasmFile { name, path });
        } else {
            let id = BenchmarkId::parse(entry).map_err(|e| invalid("benchmarks.suite", e.to_string()))?;
            bench::generate(&id).map_err(|e| invalid("benchmarks.suite", e.to_string()))?;
            benchmarks.push(BenchmarkSource::Builtin(id));
        }
    }
    if benchmarks.is_empty() {
        return Err(invalid("benchmarks.suite", "must not be empty"));
    }

    let metric_params =
        MetricParams { f1q: raw.metrics.f1q, f2q: raw.metrics.f2q, k_depth: raw.metrics.k_depth };

    Ok(ValidatedConfig { raw, base_dir, benchmarks, noise_models, fidelity_model, scheduling, metric_params })
}

impl ValidatedConfig {
    /// Builds the device for one (topology, density) axis point.
    pub fn build_device(&self, topology: &TopologySpec, density: &DensityTarget) -> Result<DeviceSpec, String> {
        let graph = topology.build(&self.base_dir).map_err(|e| e.to_string())?;
        let graph = if density.is_base() {
            graph
        } else {
            let target = match density {
                DensityTarget::Value(v) => *v,
                DensityTarget::Keyword(_) => unreachable!("validated"),
            };
            densify(&graph, target, self.raw.device.densify_seed).map_err(|e| e.to_string())?
        };
        Ok(self.apply_noise_params(DeviceSpec::with_defaults(graph)))
    }

    /// Ideal all-to-all device of `n` qubits carrying this config's
    /// parameter tables; baseline of the fidelity-decrease metric.
    pub fn virtual_device(&self, n: usize) -> Result<DeviceSpec, String> {
        let graph = dse_core::topology::all_to_all(n).map_err(|e| e.to_string())?;
        let dev = self.apply_noise_params(DeviceSpec::with_defaults(graph));
        Ok(dev.virtual_all_to_all(n))
    }

    fn apply_noise_params(&self, mut dev: DeviceSpec) -> DeviceSpec {
        let n = dev.graph.num_qubits();
        let noise = &self.raw.noise;
        dev.native_gates = match self.raw.device.native_gates.as_str() {
            "sweep" => native_gates_sweep(),
            _ => native_gates_device(),
        };
        dev.f1q = noise.f1q;
        dev.f2q = noise.f2q;
        dev.t1 = vec![noise.t1; n];
        dev.t2 = vec![noise.t2; n];
        dev.duration_1q = noise.duration_1q;
        dev.duration_2q = noise.duration_2q;
        dev.duration_measure = noise.duration_measure;
        dev.depol_1q = noise.depol_1q;
        dev.depol_2q = noise.depol_2q;
        dev.xtalk = XtalkParams {
            n: noise.xtalk.n,
            k: noise.xtalk.k,
            r_max: noise.xtalk.r_max,
            single_qubit_weight: noise.xtalk.single_qubit_weight,
        };
        for (name, value) in &noise.gate_fidelity {
            dev.gate_fidelity.insert(GateKind::from_name(name).expect("validated"), *value);
        }
        for (name, value) in &noise.gate_duration {
            dev.gate_duration.insert(GateKind::from_name(name).expect("validated"), *value);
        }
        for (name, value) in &noise.gate_depol {
            dev.gate_depol.insert(GateKind::from_name(name).expect("validated"), *value);
        }
        dev
    }
}
