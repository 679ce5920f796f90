use polymatch::graph::{scale_for_precision, DistanceTable, VertexKind};
use polymatch::heuristic::{variable_precision_decode_paths, HeuristicConfig};
use polymatch::oracle::exhaustive_mwpm;
use polymatch::sim::{build_surface_detector_graph, derive_seed, sample_shot, NoiseModel, SurfaceLayout};
use polymatch::{DecodeStatus, WeightFunction};

fn table(g: &polymatch::DetectorGraph, bits: u32) -> DistanceTable<u64> {
    let wf = WeightFunction::discretize(g, scale_for_precision(g, bits).unwrap()).unwrap();
    DistanceTable::from_weights(g, &wf)
}

#[test]
fn detector_counts() {
    for (d, rounds, detectors) in [(3, 1, 4), (3, 3, 12), (5, 5, 60)] {
        let g = build_surface_detector_graph(&NoiseModel::with_rounds(d, rounds, 1e-3).unwrap()).unwrap();
        assert_eq!(g.num_detectors(), detectors);
        assert_eq!(g.vertices().filter(|v| v.kind == VertexKind::Boundary).count(), 1);
    }
}

#[test]
fn single_faults_light_one_or_two_detectors() {
    let layout = SurfaceLayout::new(&NoiseModel::new(5, 1e-3).unwrap()).unwrap();
    let g = &layout.graph;
    for (k, e) in g.edges().iter().enumerate() {
        let lit = g.syndrome_of(&[k]).len();
        let expected = if e.a == layout.boundary || e.b == layout.boundary { 1 } else { 2 };
        assert_eq!(lit, expected, "edge {k}");
    }
    assert!(g.syndrome_of(&[]).is_empty());
}

/// Every non-failed decode of a small shot is a true minimum.
#[test]
fn heuristic_is_sound_on_small_shots() {
    let nm = NoiseModel::new(5, 0.02).unwrap();
    let g = build_surface_detector_graph(&nm).unwrap();
    let (low, high) = (table(&g, 4), table(&g, 8));
    let cfg = HeuristicConfig::default();
    let mut decoded = 0;
    for i in 0..400 {
        let shot = sample_shot(&g, derive_seed(11, 0, i));
        if shot.active.len() > 7 {
            continue;
        }
        let pg_low = low.path_graph(&shot.active).unwrap();
        let pg_high = high.path_graph(&shot.active).unwrap();
        // parity sanity: boundary copies always allow a perfect matching
        let best = exhaustive_mwpm(&pg_high).unwrap().weight;
        let cfg = HeuristicConfig {
            base_seed: derive_seed(11, 1, i),
            ..cfg.clone()
        };
        let out = variable_precision_decode_paths(&pg_low, &pg_high, &cfg).unwrap();
        if out.status == DecodeStatus::Matching {
            assert_eq!(out.weight, Some(best), "shot {i}");
            decoded += 1;
        }
    }
    assert!(decoded > 100);
}

#[test]
fn sampling_is_reproducible() {
    let g = build_surface_detector_graph(&NoiseModel::new(3, 0.05).unwrap()).unwrap();
    for i in 0..20 {
        assert_eq!(sample_shot(&g, i), sample_shot(&g, i));
    }
    assert_ne!(
        (0..20).map(|i| sample_shot(&g, i).faults).collect::<Vec<_>>(),
        (20..40).map(|i| sample_shot(&g, i).faults).collect::<Vec<_>>()
    );
}
