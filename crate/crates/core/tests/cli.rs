use std::path::Path;
use std::process::{Command, Output};

use polymatch::graph::parse_syndromes;
use polymatch::sim::build_surface_detector_graph;
use polymatch::sim::NoiseModel;
use polymatch::DetectorGraph;

fn polymatch(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_polymatch"))
        .args(args)
        .env("POLYMATCH_THREADS", "2")
        .output()
        .expect("binary runs")
}

fn path(dir: &Path, name: &str) -> String {
    dir.join(name).to_str().unwrap().to_string()
}

#[test]
fn generated_graph_and_syndromes_parse_back() {
    let dir = tempfile::tempdir().unwrap();
    let (g, s) = (path(dir.path(), "g.txt"), path(dir.path(), "s.txt"));
    let out = polymatch(&[
        "gen-graph", "--d", "3", "--p", "0.05", "--out", &g, "--shots", "30", "--syndromes-out", &s, "--seed", "5",
    ]);
    assert!(out.status.success());
    let text = std::fs::read_to_string(&g).unwrap();
    assert!(text.starts_with("dgraph v1 13\n"));
    let parsed = DetectorGraph::parse(&text).unwrap();
    let built = build_surface_detector_graph(&NoiseModel::new(3, 0.05).unwrap()).unwrap();
    assert_eq!(parsed.to_text(), built.to_text());
    let shots = parse_syndromes(&std::fs::read_to_string(&s).unwrap()).unwrap();
    assert_eq!(shots.len(), 30);
    assert!(shots.iter().flatten().all(|&d| d < 12));
}

#[test]
fn decode_writes_one_record_per_shot() {
    let dir = tempfile::tempdir().unwrap();
    let (g, s) = (path(dir.path(), "g.txt"), path(dir.path(), "s.txt"));
    assert!(polymatch(&["gen-graph", "--d", "3", "--p", "0.05", "--out", &g]).status.success());
    std::fs::write(&s, "\n0 1\n5 7 11\n3\n").unwrap();
    let run = |extra: &[&str]| {
        let mut args = vec!["decode", "--graph", &g, "--syndromes", &s, "--seed", "3"];
        args.extend_from_slice(extra);
        let out = polymatch(&args);
        assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
        String::from_utf8(out.stdout).unwrap()
    };
    let text = run(&[]);
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines.len(), 4);
    assert_eq!(lines[0], "shot 0 status MATCHING wstar 0 weight 0 edges");
    for (i, line) in lines.iter().enumerate() {
        let t: Vec<&str> = line.split(' ').collect();
        assert_eq!(&t[..2], &["shot", i.to_string().as_str()]);
        assert_eq!((t[2], t[4], t[6], t[8]), ("status", "wstar", "weight", "edges"));
        assert_eq!(t[3], "MATCHING");
    }
    // pairs name detectors or their boundary copies
    assert!(lines[3].ends_with("edges 3:b3"));
    assert_eq!(text, run(&[]));

    let tight = run(&["--w-th", "4"]);
    assert!(tight.lines().skip(1).all(|l| l.ends_with("status OVERFLOW_FAILURE wstar -1 weight -1 edges")));
    let amplified = run(&["--scheme", "amplified", "--w-th", "8000"]);
    assert!(amplified.lines().all(|l| l.contains("status MATCHING")));
}

#[test]
fn bad_input_is_reported() {
    let dir = tempfile::tempdir().unwrap();
    let g = path(dir.path(), "g.txt");
    std::fs::write(&g, "dgraph v1 2\nv 0 detector\n").unwrap();
    let out = polymatch(&["decode", "--graph", &g, "--syndromes", &g, "--seed", "1"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("vertex 1 never declared"));
}
