//! Acceptance suite: one test per shipped guarantee, each printing a
//! PASS/FAIL line (run with `cargo test --test acceptance -- --nocapture`).

use std::path::PathBuf;
use std::time::Instant;

use dse::config::{validate, SweepConfig, ValidatedConfig};
use dse::output::csv_string;
use dse::sweep::run_sweep;
use dse_core::bench::{self, BenchmarkId};
use dse_core::circuit::{Circuit, GateKind};
use dse_core::device::DeviceSpec;
use dse_core::metrics::{cost_from_counts, cost_improvement, MetricParams};
use dse_core::noise::{harmonic_mean, noise_model_by_name};
use dse_core::passes::{apply_setup, optimize};
use dse_core::schedule::{schedule, SchedulePolicy};
use dse_core::topology::{densify, heavy_hex, sycamore_grid};
use dse_core::transpile::{transpile, PassConfig};
use dse_sim::routed_tv_distance;

fn pass(criterion: u32, detail: &str) {
    println!("criterion {criterion}: PASS ({detail})");
}

fn config_from(text: &str) -> ValidatedConfig {
    let raw: SweepConfig = toml::from_str(text).expect("config parses");
    validate(raw, PathBuf::from(".")).expect("config validates")
}

fn median_usize(mut values: Vec<usize>) -> f64 {
    values.sort_unstable();
    let n = values.len();
    if n % 2 == 1 {
        values[n / 2] as f64
    } else {
        0.5 * (values[n / 2 - 1] + values[n / 2]) as f64
    }
}

fn heavy_hex_128() -> DeviceSpec {
    DeviceSpec::with_defaults(heavy_hex(6, 4, Some(128)).expect("heavy-hex 128"))
}

/// Criterion 1: for every built-in benchmark with <= 6 qubits, across all
/// 3 layouts x 2 routers x levels 0-3 x setups 0-5 x seeds {1,2,3}, the
/// transpiled circuit matches the original measurement distribution within
/// total variation 1e-9 and respects device coupling. Runtime < 2 min.
#[test]
fn c1_routing_semantics_oracle() {
    let started = Instant::now();
    let device = DeviceSpec::with_defaults(heavy_hex(1, 1, None).expect("heavy-hex cell"));
    let small: Vec<(BenchmarkId, Circuit)> = bench::list_suite()
        .into_iter()
        .filter_map(|id| {
            let circ = bench::generate(&id).expect("suite generates");
            (circ.num_qubits <= 6).then_some((id, circ))
        })
        .collect();
    assert!(!small.is_empty(), "criterion 1 FAIL: no small benchmarks in suite");

    let mut points = 0usize;
    for (id, circ) in &small {
        for layout in ["trivial", "dense", "sabre"] {
            for routing in ["sabre", "stochastic"] {
                for level in 0..=3u8 {
                    for setup in 0..=5u8 {
                        for seed in [1u64, 2, 3] {
                            let cfg = PassConfig {
                                layout_method: layout.to_string(),
                                routing_method: routing.to_string(),
                                opt_level: level,
                                setup,
                                seed,
                                ..PassConfig::default()
                            };
                            let out = transpile(circ, &device, &cfg)
                                .unwrap_or_else(|e| panic!("criterion 1 FAIL: {id} {layout}/{routing}: {e}"));
                            assert!(
                                out.routed.respects_coupling(&device.graph),
                                "criterion 1 FAIL: {id} {layout}/{routing} l{level} s{setup} seed{seed}: non-adjacent 2q gate"
                            );
                            let tv = routed_tv_distance(circ, &out.routed);
                            assert!(
                                tv <= 1e-9,
                                "criterion 1 FAIL: {id} {layout}/{routing} l{level} s{setup} seed{seed}: tv={tv:e}"
                            );
                            points += 1;
                        }
                    }
                }
            }
        }
    }
    let elapsed = started.elapsed().as_secs_f64();
    assert!(elapsed < 120.0, "criterion 1 FAIL: runtime {elapsed:.1}s exceeds 2 min");
    pass(1, &format!("{points} oracle points over {} benchmarks in {elapsed:.1}s", small.len()));
}

/// Criterion 2: formula spot checks at 1e-6 (thermal closed form,
/// depolarization product, harmonic mean, input cost, identity cost ratio).
#[test]
fn c2_formula_spot_checks() {
    // Thermal: 1us active at T1=100us, T2=80us -> exp(-0.0175).
    let mut dev = DeviceSpec::with_defaults(sycamore_grid(2, 2).expect("grid"));
    dev.gate_duration.insert(GateKind::X, 1.0);
    let mut circ = Circuit::new(4, 0);
    circ.add(GateKind::X, &[0], &[]).expect("x");
    let rc = routed_identity(circ, 4);
    let sched = schedule(&rc.circuit, SchedulePolicy::Alap);
    let thermal = noise_model_by_name("thermal").unwrap().evaluate(&rc, &sched, &dev).unwrap();
    assert!(
        (thermal.total - 0.982652).abs() <= 1e-6,
        "criterion 2 FAIL: thermal {} vs 0.982652",
        thermal.total
    );
    assert!((thermal.total - (-0.0175f64).exp()).abs() <= 1e-9);

    // Depolarization: ten gates at F_initial = 1, p = 0.01 -> 0.99^10.
    let mut dev = DeviceSpec::with_defaults(sycamore_grid(2, 2).expect("grid"));
    dev.gate_fidelity.insert(GateKind::X, 1.0);
    dev.gate_depol.insert(GateKind::X, 0.01);
    let mut circ = Circuit::new(4, 0);
    for _ in 0..10 {
        circ.add(GateKind::X, &[0], &[]).expect("x");
    }
    let rc = routed_identity(circ, 4);
    let sched = schedule(&rc.circuit, SchedulePolicy::Alap);
    let depol = noise_model_by_name("depolarizing").unwrap().evaluate(&rc, &sched, &dev).unwrap();
    assert!(
        (depol.total - 0.904382).abs() <= 1e-6,
        "criterion 2 FAIL: depolarization {} vs 0.904382",
        depol.total
    );

    // Harmonic mean of 0.98 and 0.96.
    let h = harmonic_mean(0.98, 0.96);
    assert!((h - 0.969897).abs() <= 1e-6, "criterion 2 FAIL: harmonic mean {h}");

    // Input cost at D=10, N1q=5, N2q=2 under default parameters (natural
    // log). Expected value frozen from independent arithmetic of the cost
    // formula: 0.10669458529939069.
    let c_in = cost_from_counts(10, 5, 2, &MetricParams::default());
    assert!((c_in - 0.1066945853).abs() <= 1e-6, "criterion 2 FAIL: C_in {c_in}");

    // Identical circuits give a cost ratio of exactly 1.
    let mut circ = Circuit::new(2, 0);
    circ.add(GateKind::H, &[0], &[]).expect("h");
    circ.add(GateKind::Cx, &[0, 1], &[]).expect("cx");
    let ratio = cost_improvement(&circ, &circ, &MetricParams::default()).unwrap();
    assert_eq!(ratio, 1.0, "criterion 2 FAIL: identity cost ratio {ratio}");

    pass(2, "thermal, depolarization, harmonic mean, input cost, identity ratio");
}

fn routed_identity(circ: Circuit, device_qubits: usize) -> dse_core::route::RoutedCircuit {
    let layout =
        dse_core::layout::Layout::from_map((0..device_qubits).collect(), device_qubits).unwrap();
    dse_core::route::RoutedCircuit {
        circuit: circ,
        initial_layout: layout.clone(),
        final_layout: layout,
        swaps_added: 0,
    }
}

/// Criterion 3: generated topology sizes match the published device scales.
#[test]
fn c3_topology_counts() {
    let g66 = sycamore_grid(6, 6).unwrap();
    assert_eq!((g66.num_qubits(), g66.num_edges()), (36, 60), "criterion 3 FAIL: 6x6 grid");
    assert_eq!(sycamore_grid(12, 12).unwrap().num_qubits(), 144, "criterion 3 FAIL: 12x12 grid");
    let hh = heavy_hex(6, 4, Some(143)).unwrap();
    assert_eq!(hh.num_qubits(), 143, "criterion 3 FAIL: heavy-hex crop");
    assert!(hh.distances().is_ok(), "criterion 3 FAIL: cropped heavy-hex disconnected");
    pass(3, "36/60, 144, 143 connected");
}

/// Criterion 4: on heavy-hex-128 with sabre|1|sabre, the median depth of
/// qft(16) over 5 seeds is non-increasing across the density axis (5%
/// tolerance) and depth(0.3) <= 1.10 * depth(1.0). Runtime < 1 min.
#[test]
fn c4_density_convergence_trend() {
    let started = Instant::now();
    let base = heavy_hex(6, 4, Some(128)).unwrap();
    let circ = bench::generate(&BenchmarkId::new(bench::BenchFamily::Qft, 16)).unwrap();
    let targets: [Option<f64>; 7] = [None, Some(0.05), Some(0.1), Some(0.3), Some(0.5), Some(0.8), Some(1.0)];

    let mut medians = Vec::new();
    for target in targets {
        let graph = match target {
            None => base.clone(),
            Some(t) => densify(&base, t, 1).unwrap(),
        };
        let dev = DeviceSpec::with_defaults(graph);
        let mut depths = Vec::new();
        for seed in 1..=5u64 {
            let cfg = PassConfig { opt_level: 1, seed, ..PassConfig::default() };
            let out = transpile(&circ, &dev, &cfg).unwrap();
            depths.push(out.routed.circuit.depth());
        }
        medians.push(median_usize(depths));
    }
    let mut violations = Vec::new();
    for i in 0..medians.len() - 1 {
        if medians[i + 1] > 1.05 * medians[i] {
            violations.push(format!(
                "depth rose {} -> {} between density steps {i} and {} (>5%)",
                medians[i],
                medians[i + 1],
                i + 1
            ));
        }
    }
    let (at_03, at_10) = (medians[3], medians[6]);
    if at_03 > 1.10 * at_10 {
        violations.push(format!("depth {at_03} at density 0.3 exceeds 1.10 * depth {at_10} at 1.0"));
    }
    let elapsed = started.elapsed().as_secs_f64();
    if elapsed >= 60.0 {
        violations.push(format!("runtime {elapsed:.1}s exceeds 1 min"));
    }
    assert!(
        violations.is_empty(),
        "criterion 4 FAIL: median depths {medians:?}; {}",
        violations.join("; ")
    );
    pass(4, &format!("median depths {medians:?} in {elapsed:.1}s"));
}

/// Criterion 5: for qft(8) routed at density 0.3 under default parameters,
/// the shared-qubit model is the most severe crosstalk estimate.
#[test]
fn c5_crosstalk_severity_ordering() {
    let base = heavy_hex(6, 4, Some(128)).unwrap();
    let dev = DeviceSpec::with_defaults(densify(&base, 0.3, 1).unwrap());
    let circ = bench::generate(&BenchmarkId::new(bench::BenchFamily::Qft, 8)).unwrap();
    let cfg = PassConfig { opt_level: 1, seed: 1, ..PassConfig::default() };
    let out = transpile(&circ, &dev, &cfg).unwrap();

    let eval = |name: &str| {
        noise_model_by_name(name).unwrap().evaluate(&out.routed, &out.schedule, &dev).unwrap().total
    };
    let shared = eval("shared_qubit");
    let simultaneous = eval("simultaneous");
    let proximity = eval("proximity");
    assert!(
        shared <= simultaneous && shared <= proximity,
        "criterion 5 FAIL: shared={shared:e} simultaneous={simultaneous:e} proximity={proximity:e}"
    );
    pass(5, &format!("shared={shared:.3e} <= simultaneous={simultaneous:.3e}, proximity={proximity:.3e}"));
}

/// Criterion 6: median swap count of qft(16) on base heavy-hex-128 over 10
/// seeds: SABRE routing <= stochastic routing.
#[test]
fn c6_router_comparison() {
    let dev = heavy_hex_128();
    let circ = bench::generate(&BenchmarkId::new(bench::BenchFamily::Qft, 16)).unwrap();
    let swaps = |routing: &str| -> Vec<usize> {
        (1..=10u64)
            .map(|seed| {
                let cfg = PassConfig {
                    layout_method: "trivial".to_string(),
                    routing_method: routing.to_string(),
                    opt_level: 0,
                    seed,
                    ..PassConfig::default()
                };
                transpile(&circ, &dev, &cfg).unwrap().routed.swaps_added
            })
            .collect()
    };
    let sabre = median_usize(swaps("sabre"));
    let stochastic = median_usize(swaps("stochastic"));
    assert!(
        sabre <= stochastic,
        "criterion 6 FAIL: sabre median {sabre} > stochastic median {stochastic}"
    );
    pass(6, &format!("median swaps sabre={sabre} stochastic={stochastic}"));
}

/// Criterion 7: identical configs produce byte-identical CSV under 1 and 8
/// workers.
#[test]
fn c7_determinism_across_workers() {
    let cfg = config_from(
        "[benchmarks]\nsuite = [\"ghz:3\", \"qft:4\", \"grover:4\"]\n\
         [device]\ntopologies = [{ kind = \"heavy_hex\", rows = 1, cols = 1 }]\ndensities = [\"base\", 0.5]\n\
         [compiler]\nlayouts = [\"sabre\", \"trivial\"]\nroutings = [\"sabre\", \"stochastic\"]\nopt_levels = [1]\n\
         [sweep]\nseeds = [1, 2]\n",
    );
    let one = csv_string(&run_sweep(&cfg, 1).unwrap()).unwrap();
    let eight = csv_string(&run_sweep(&cfg, 8).unwrap()).unwrap();
    assert_eq!(one, eight, "criterion 7 FAIL: worker count changed the CSV bytes");
    let again = csv_string(&run_sweep(&cfg, 1).unwrap()).unwrap();
    assert_eq!(one, again, "criterion 7 FAIL: re-run changed the CSV bytes");
    pass(7, &format!("{} CSV bytes identical across 1 and 8 workers", one.len()));
}

/// Criterion 8: optimization levels never increase gate count or depth on
/// any suite benchmark, and setups 1-4 are idempotent.
#[test]
fn c8_optimization_monotonicity_and_idempotence() {
    for id in bench::list_suite() {
        let circ = bench::generate(&id).unwrap();
        let mut prev = optimize(&circ, 0).unwrap();
        for level in 1..=3u8 {
            let next = optimize(&circ, level).unwrap();
            assert!(
                next.gate_total() <= prev.gate_total(),
                "criterion 8 FAIL: {id} level {level} grew gates {} -> {}",
                prev.gate_total(),
                next.gate_total()
            );
            assert!(
                next.depth() <= prev.depth(),
                "criterion 8 FAIL: {id} level {level} grew depth {} -> {}",
                prev.depth(),
                next.depth()
            );
            prev = next;
        }
        for setup in 1..=4u8 {
            let once = apply_setup(&circ, setup).unwrap();
            let twice = apply_setup(&once, setup).unwrap();
            assert_eq!(once, twice, "criterion 8 FAIL: {id} setup {setup} not idempotent");
        }
    }
    pass(8, "levels monotone and setups 1-4 idempotent on all 18 suite benchmarks");
}

/// Criterion 9: the full default sweep (18 benchmarks x 7 densities x 3
/// layouts x 2 routers x 2 levels x 1 setup x 3 seeds) completes on one
/// worker within 15 minutes and emits more than 4,500 records.
#[test]
fn c9_sweep_scale() {
    let started = Instant::now();
    let cfg = config_from(
        "[benchmarks]\ndefault_suite = true\n\
         [device]\ntopologies = [{ kind = \"heavy_hex\", rows = 6, cols = 4, crop_to = 128 }]\n\
         densities = [\"base\", 0.05, 0.1, 0.3, 0.5, 0.8, 1.0]\n\
         [compiler]\nlayouts = [\"sabre\", \"dense\", \"trivial\"]\nroutings = [\"sabre\", \"stochastic\"]\n\
         opt_levels = [0, 1]\nsetups = [0]\n\
         [sweep]\nseeds = [1, 2, 3]\n",
    );
    let records = run_sweep(&cfg, 1).unwrap();
    let elapsed = started.elapsed().as_secs_f64();
    assert_eq!(records.len(), 18 * 7 * 3 * 2 * 2 * 3, "criterion 9 FAIL: wrong grid size");
    assert!(records.len() > 4500, "criterion 9 FAIL: only {} records", records.len());
    let failures = records.iter().filter(|r| !r.error.is_empty()).count();
    assert_eq!(failures, 0, "criterion 9 FAIL: {failures} failed points");
    assert!(elapsed < 900.0, "criterion 9 FAIL: runtime {elapsed:.1}s exceeds 15 min");
    pass(9, &format!("{} records in {elapsed:.1}s on one worker", records.len()));
}
