//! Grid enumeration and parallel execution of sweep points.
//!
//! The grid is the Cartesian product
//! benchmark x topology x density x layout x routing x opt_level x setup x
//! scheduling x seed, enumerated in that (axis-major) order. Every point
//! gets its own derived RNG seed, so records are identical no matter how
//! many workers execute them. Per-point failures become records with a
//! populated `error` column instead of aborting the sweep.

use std::collections::BTreeMap;
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::sync::atomic::{AtomicUsize, Ordering};
use std::sync::Mutex;

use serde::{Deserialize, Serialize};

use dse_core::bench;
use dse_core::circuit::Circuit;
use dse_core::decompose::{decompose, pre_routing_basis};
use dse_core::device::DeviceSpec;
use dse_core::layout::Layout;
use dse_core::metrics::{cost_improvement, depth_overhead, fidelity_decrease, gate_overhead};
use dse_core::noise::{noise_models, NoiseKind, NoiseModel};
use dse_core::qasm::parse_qasm;
use dse_core::rng::derive_seed;
use dse_core::route::RoutedCircuit;
use dse_core::schedule::{schedule, SchedulePolicy};
use dse_core::transpile::{transpile, PassConfig};

use crate::config::{BenchmarkSource, ValidatedConfig};

/// One sweep point: every axis value plus every computed metric. Fields
/// that cannot be computed for a failed point stay empty.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ResultRecord {
    pub benchmark: String,
    pub topology: String,
    pub density_target: String,
    pub density: f64,
    pub qubits: usize,
    pub edges: usize,
    pub layout: String,
    pub routing: String,
    pub opt_level: u8,
    pub setup: u8,
    pub scheduling: String,
    pub seed: u64,
    pub error: String,
    pub swaps_added: Option<usize>,
    pub gates_before: Option<usize>,
    pub gates_after: Option<usize>,
    pub depth_before: Option<usize>,
    pub depth_after: Option<usize>,
    pub n1q_before: Option<usize>,
    pub n2q_before: Option<usize>,
    pub n1q_after: Option<usize>,
    pub n2q_after: Option<usize>,
    pub base_fidelity: Option<f64>,
    pub fid_shared_qubit: Option<f64>,
    pub fid_simultaneous: Option<f64>,
    pub fid_proximity: Option<f64>,
    pub fid_thermal: Option<f64>,
    pub fid_depolarizing: Option<f64>,
    pub gate_overhead: Option<f64>,
    pub depth_overhead: Option<f64>,
    pub fidelity_decrease: Option<f64>,
    pub cost_improvement: Option<f64>,
}

impl ResultRecord {
    /// Column order of the CSV emitter; must match the struct fields.
    pub const COLUMNS: [&'static str; 32] = [
        "benchmark",
        "topology",
        "density_target",
        "density",
        "qubits",
        "edges",
        "layout",
        "routing",
        "opt_level",
        "setup",
        "scheduling",
        "seed",
        "error",
        "swaps_added",
        "gates_before",
        "gates_after",
        "depth_before",
        "depth_after",
        "n1q_before",
        "n2q_before",
        "n1q_after",
        "n2q_after",
        "base_fidelity",
        "fid_shared_qubit",
        "fid_simultaneous",
        "fid_proximity",
        "fid_thermal",
        "fid_depolarizing",
        "gate_overhead",
        "depth_overhead",
        "fidelity_decrease",
        "cost_improvement",
    ];

    pub fn metric(&self, name: &str) -> Option<f64> {
        match name {
            "swaps_added" => self.swaps_added.map(|v| v as f64),
            "gates_after" => self.gates_after.map(|v| v as f64),
            "depth_after" => self.depth_after.map(|v| v as f64),
            "base_fidelity" => self.base_fidelity,
            "fid_shared_qubit" => self.fid_shared_qubit,
            "fid_simultaneous" => self.fid_simultaneous,
            "fid_proximity" => self.fid_proximity,
            "fid_thermal" => self.fid_thermal,
            "fid_depolarizing" => self.fid_depolarizing,
            "gate_overhead" => self.gate_overhead,
            "depth_overhead" => self.depth_overhead,
            "fidelity_decrease" => self.fidelity_decrease,
            "cost_improvement" => self.cost_improvement,
            _ => None,
        }
    }
}

struct PreparedBenchmark {
    name: String,
    circuit: Circuit,
    /// ccx-free form; the "before compilation" reference of the metrics.
    pre: Circuit,
    /// Baseline fidelity per (model, scheduling policy) on an ideal
    /// all-to-all device.
    baseline: BTreeMap<(NoiseKind, SchedulePolicy), f64>,
}

/// Axis indices of one grid point: (benchmark, device, layout, routing,
/// opt_level, setup, scheduling, seed).
type GridPoint = (usize, usize, usize, usize, usize, usize, usize, usize);

struct PreparedDevice {
    label: String,
    density_label: String,
    device: Result<DeviceSpec, String>,
    density: f64,
}

/// Runs the full sweep grid and returns records in canonical order.
pub fn run_sweep(cfg: &ValidatedConfig, workers: usize) -> Result<Vec<ResultRecord>, String> {
    let models = noise_models();
    let selected: Vec<&Box<dyn NoiseModel>> =
        models.iter().filter(|m| cfg.noise_models.contains(&m.kind())).collect();

    // Benchmarks: generate, pre-decompose, compute all-to-all baselines.
    let mut benchmarks = Vec::new();
    for source in &cfg.benchmarks {
        let circuit = match source {
            BenchmarkSource::Builtin(id) => bench::generate(id).map_err(|e| e.to_string())?,
            BenchmarkSource::QasmFile { path, .. } => {
                let text = std::fs::read_to_string(path).map_err(|e| format!("{}: {e}", path.display()))?;
                parse_qasm(&text).map_err(|e| format!("{}: {e}", path.display()))?
            }
        };
        let pre = decompose(&circuit, &pre_routing_basis()).map_err(|e| e.to_string())?;
        let mut baseline = BTreeMap::new();
        if pre.num_qubits > 0 {
            let virtual_dev = cfg.virtual_device(pre.num_qubits)?;
            let identity = Layout::from_map((0..pre.num_qubits).collect(), pre.num_qubits)
                .map_err(|e| e.to_string())?;
            let rc = RoutedCircuit {
                circuit: pre.clone(),
                initial_layout: identity.clone(),
                final_layout: identity,
                swaps_added: 0,
            };
            for policy in &cfg.scheduling {
                let sched = schedule(&pre, *policy);
                for model in &selected {
                    let report = model.evaluate(&rc, &sched, &virtual_dev).map_err(|e| e.to_string())?;
                    baseline.insert((model.kind(), *policy), report.total);
                }
            }
        }
        benchmarks.push(PreparedBenchmark { name: source.name(), circuit, pre, baseline });
    }

    // Devices per (topology, density) axis point. Failures become per-point
    // error records rather than sweep aborts.
    let mut devices: Vec<PreparedDevice> = Vec::new();
    for topology in &cfg.raw.device.topologies {
        for density in &cfg.raw.device.densities {
            let built = cfg.build_device(topology, density);
            // Failed devices report density 0 (the record's error column
            // carries the cause); NaN would poison the JSON emitter.
            let density_value = match &built {
                Ok(dev) => dse_core::topology::connectivity_density(&dev.graph).unwrap_or(0.0),
                Err(_) => 0.0,
            };
            devices.push(PreparedDevice {
                label: topology.label(),
                density_label: density.label(),
                device: built,
                density: density_value,
            });
        }
    }

    // Canonical axis-major enumeration.
    let compiler = &cfg.raw.compiler;
    let mut points = Vec::new();
    for b in 0..benchmarks.len() {
        for d in 0..devices.len() {
            for l in 0..compiler.layouts.len() {
                for r in 0..compiler.routings.len() {
                    for o in 0..compiler.opt_levels.len() {
                        for s in 0..compiler.setups.len() {
                            for p in 0..cfg.scheduling.len() {
                                for seed in 0..cfg.raw.sweep.seeds.len() {
                                    points.push((b, d, l, r, o, s, p, seed));
                                }
                            }
                        }
                    }
                }
            }
        }
    }

    let slots: Vec<Mutex<Option<ResultRecord>>> = (0..points.len()).map(|_| Mutex::new(None)).collect();
    let cursor = AtomicUsize::new(0);
    let workers = workers.max(1);

    std::thread::scope(|scope| {
        for _ in 0..workers {
            scope.spawn(|| loop {
                let index = cursor.fetch_add(1, Ordering::Relaxed);
                if index >= points.len() {
                    break;
                }
                let record = run_point(cfg, &benchmarks, &devices, &points, index);
                *slots[index].lock().expect("slot lock") = Some(record);
            });
        }
    });

    Ok(slots
        .into_iter()
        .map(|slot| slot.into_inner().expect("slot lock").expect("all points executed"))
        .collect())
}

fn run_point(
    cfg: &ValidatedConfig,
    benchmarks: &[PreparedBenchmark],
    devices: &[PreparedDevice],
    points: &[GridPoint],
    index: usize,
) -> ResultRecord {
    let (b, d, l, r, o, s, p, seed_idx) = points[index];
    let benchmark = &benchmarks[b];
    let device = &devices[d];
    let compiler = &cfg.raw.compiler;
    let seed_value = cfg.raw.sweep.seeds[seed_idx];

    let mut record = ResultRecord {
        benchmark: benchmark.name.clone(),
        topology: device.label.clone(),
        density_target: device.density_label.clone(),
        density: device.density,
        qubits: 0,
        edges: 0,
        layout: compiler.layouts[l].clone(),
        routing: compiler.routings[r].clone(),
        opt_level: compiler.opt_levels[o],
        setup: compiler.setups[s],
        scheduling: cfg.scheduling[p].name().to_string(),
        seed: seed_value,
        error: String::new(),
        swaps_added: None,
        gates_before: None,
        gates_after: None,
        depth_before: None,
        depth_after: None,
        n1q_before: None,
        n2q_before: None,
        n1q_after: None,
        n2q_after: None,
        base_fidelity: None,
        fid_shared_qubit: None,
        fid_simultaneous: None,
        fid_proximity: None,
        fid_thermal: None,
        fid_depolarizing: None,
        gate_overhead: None,
        depth_overhead: None,
        fidelity_decrease: None,
        cost_improvement: None,
    };

    let dev = match &device.device {
        Ok(dev) => dev,
        Err(e) => {
            record.error = e.clone();
            return record;
        }
    };
    record.qubits = dev.graph.num_qubits();
    record.edges = dev.graph.num_edges();

    let outcome = catch_unwind(AssertUnwindSafe(|| {
        compute_point(cfg, benchmark, dev, &mut record, index, seed_value)
    }));
    match outcome {
        Ok(Ok(())) => {}
        Ok(Err(message)) => record.error = message,
        Err(panic) => {
            let message = panic
                .downcast_ref::<&str>()
                .map(|s| s.to_string())
                .or_else(|| panic.downcast_ref::<String>().cloned())
                .unwrap_or_else(|| "unknown panic".to_string());
            record.error = format!("panic: {message}");
        }
    }
    record
}

fn compute_point(
    cfg: &ValidatedConfig,
    benchmark: &PreparedBenchmark,
    dev: &DeviceSpec,
    record: &mut ResultRecord,
    point_index: usize,
    seed_value: u64,
) -> Result<(), String> {
    let compiler = &cfg.raw.compiler;
    let policy = SchedulePolicy::from_name(&record.scheduling).expect("validated");
    let pass_cfg = PassConfig {
        layout_method: record.layout.clone(),
        routing_method: record.routing.clone(),
        opt_level: record.opt_level,
        setup: record.setup,
        scheduling: policy,
        seed: derive_seed(seed_value, point_index as u64),
        sabre_trials: compiler.sabre_trials,
        stochastic_trials: compiler.stochastic_trials,
    };

    let before = &benchmark.pre;
    let counts_before = before.gate_counts();
    record.gates_before = Some(before.gate_total());
    record.depth_before = Some(before.depth());
    record.n1q_before = Some(counts_before.n1q);
    record.n2q_before = Some(counts_before.n2q);

    let out = transpile(&benchmark.circuit, dev, &pass_cfg).map_err(|e| e.to_string())?;
    if !out.routed.respects_coupling(&dev.graph) {
        return Err("internal: routed circuit violates device coupling".to_string());
    }
    let after = &out.routed.circuit;
    let counts_after = after.gate_counts();
    record.swaps_added = Some(out.routed.swaps_added);
    record.gates_after = Some(after.gate_total());
    record.depth_after = Some(after.depth());
    record.n1q_after = Some(counts_after.n1q);
    record.n2q_after = Some(counts_after.n2q);

    let all_models = noise_models();
    for model in all_models.iter().filter(|m| cfg.noise_models.contains(&m.kind())) {
        let report = model.evaluate(&out.routed, &out.schedule, dev).map_err(|e| e.to_string())?;
        let slot = match model.kind() {
            NoiseKind::SharedQubit => &mut record.fid_shared_qubit,
            NoiseKind::Simultaneous => &mut record.fid_simultaneous,
            NoiseKind::Proximity => &mut record.fid_proximity,
            NoiseKind::Thermal => &mut record.fid_thermal,
            NoiseKind::Depolarizing => &mut record.fid_depolarizing,
        };
        *slot = Some(report.total);
        if record.base_fidelity.is_none() {
            record.base_fidelity = Some(report.base_fidelity);
        }
        if model.kind() == cfg.fidelity_model {
            let f_before = benchmark
                .baseline
                .get(&(model.kind(), policy))
                .copied()
                .ok_or_else(|| "missing fidelity baseline".to_string())?;
            record.fidelity_decrease =
                Some(fidelity_decrease(f_before, report.total).map_err(|e| e.to_string())?);
        }
    }

    record.gate_overhead = Some(gate_overhead(before, after).map_err(|e| e.to_string())?);
    record.depth_overhead = Some(depth_overhead(before, after).map_err(|e| e.to_string())?);
    record.cost_improvement =
        Some(cost_improvement(before, after, &cfg.metric_params).map_err(|e| e.to_string())?);
    Ok(())
}
