//! Core library of the `dse` toolkit: circuit IR with QASM 2.0 ingestion,
//! parametric coupling-graph generators, a transpiler (layout, swap routing,
//! basis decomposition, optimization passes), analytic noise estimators, and
//! compilation-quality metrics.
//!
//! Interchangeable algorithm families (layout strategies, routers, noise
//! models, benchmark generators) live behind registry traits and are looked
//! up by name, so sweep configurations can select them at runtime.
//!
//! # Example: compile a benchmark and estimate its fidelity
//!
//! ```
//! use dse_core::bench::{self, BenchFamily, BenchmarkId};
//! use dse_core::device::DeviceSpec;
//! use dse_core::noise::noise_model_by_name;
//! use dse_core::topology::heavy_hex;
//! use dse_core::transpile::{transpile, PassConfig};
//!
//! let circuit = bench::generate(&BenchmarkId::new(BenchFamily::Ghz, 8)).unwrap();
//! let device = DeviceSpec::with_defaults(heavy_hex(2, 2, None).unwrap());
//! let cfg = PassConfig { opt_level: 1, seed: 7, ..PassConfig::default() };
//!
//! let out = transpile(&circuit, &device, &cfg).unwrap();
//! assert!(out.routed.respects_coupling(&device.graph));
//!
//! let model = noise_model_by_name("depolarizing").unwrap();
//! let report = model.evaluate(&out.routed, &out.schedule, &device).unwrap();
//! assert!(report.total > 0.0 && report.total <= 1.0);
//! ```

pub mod bench;
pub mod circuit;
pub mod decompose;
pub mod device;
pub mod error;
pub mod layout;
pub mod metrics;
pub mod noise;
pub mod passes;
pub mod qasm;
pub mod rng;
pub mod route;
pub mod schedule;
pub mod topology;
pub mod transpile;

pub use circuit::{Circuit, Gate, GateCounts, GateKind};
pub use device::{DeviceSpec, XtalkParams};
pub use layout::{Layout, LayoutStrategy};
pub use noise::{NoiseKind, NoiseModel, NoiseReport};
pub use qasm::{emit_qasm, parse_qasm};
pub use route::{RoutedCircuit, Router};
pub use schedule::{schedule, Schedule, SchedulePolicy};
pub use topology::{connectivity_density, densify, heavy_hex, sycamore_grid, CouplingGraph};
pub use transpile::{transpile, PassConfig, TranspileOutput};
