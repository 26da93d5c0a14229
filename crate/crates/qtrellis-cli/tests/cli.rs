use std::path::Path;
use std::process::{Command, Output};

fn qtrellis(args: &[&str], dir: &Path) -> Output {
    Command::new(env!("CARGO_BIN_EXE_qtrellis")).args(args).current_dir(dir).output().expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

fn json(o: &Output) -> serde_json::Value {
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    serde_json::from_slice(&o.stdout).expect("valid json")
}

#[test]
fn profile_formats() {
    let dir = tempfile::tempdir().unwrap();
    let text = qtrellis(&["profile", "--code", "five_one_three"], dir.path());
    assert!(stdout(&text).contains("total vertices 42, total edges 104"));
    let csv = qtrellis(&["profile", "--code", "five_one_three", "--format", "csv"], dir.path());
    assert_eq!(stdout(&csv).lines().count(), 7);
    let j = json(&qtrellis(&["profile", "--code", "rotated_surface", "--distance", "3", "--format", "json"], dir.path()));
    assert_eq!(j["n"], 9);
}

#[test]
fn build_census_and_decode_round_trip() {
    let dir = tempfile::tempdir().unwrap();
    let d = dir.path();
    for (split, file) in [("full", "f.bin"), ("x", "x.bin"), ("z", "z.bin")] {
        let o = qtrellis(&["build", "--code", "steane", "--split", split, "--out", file], d);
        assert!(o.status.success());
    }
    let c = json(&qtrellis(&["census", "--trellis", "f.bin"], d));
    assert_eq!(c["total_edges"], 232);
    assert_eq!(c["identities_hold"], true);

    let args = ["decode", "--code", "steane", "--channel", "depolarizing:0.1"];
    let one = json(&qtrellis(&[&args[..], &["--trellis", "f.bin", "--syndrome", "0,0,0,1,0,0", "--error", "XIIIIII"]].concat(), d));
    assert_eq!(one["correction"], "XIIIIII");
    assert_eq!(one["classification"], "success");
    let two = json(&qtrellis(&[&args[..], &["--trellis", "x.bin", "z.bin", "--syndrome", "0,0,0,1,0,0"]].concat(), d));
    assert_eq!(two["classification"], "success");

    let bad = qtrellis(&[&args[..], &["--trellis", "f.bin", "--syndrome", "0,1"]].concat(), d);
    assert_eq!(bad.status.code(), Some(2));
    let mismatch = qtrellis(&[&args[..], &["--trellis", "f.bin", "--syndrome", "0,0,0,0,0,0", "--error", "XIIIIII"]].concat(), d);
    assert_eq!(mismatch.status.code(), Some(2));
}

#[test]
fn json_export_lists_edges() {
    let dir = tempfile::tempdir().unwrap();
    let o = qtrellis(&["build", "--code", "five_one_three", "--out", "t.json", "--json"], dir.path());
    assert!(o.status.success());
    let v: serde_json::Value = serde_json::from_slice(&std::fs::read(dir.path().join("t.json")).unwrap()).unwrap();
    let edges: usize = v["sections"].as_array().unwrap().iter().map(|s| s.as_array().unwrap().len()).sum();
    assert_eq!(edges, 104);
}

#[test]
fn exit_codes() {
    let dir = tempfile::tempdir().unwrap();
    let d = dir.path();
    assert_eq!(qtrellis(&["profile", "--code", "no_such_code"], d).status.code(), Some(2));
    let cap = qtrellis(&["build", "--code", "rotated_surface", "--distance", "9", "--out", "t.bin", "--cap", "100"], d);
    assert_eq!(cap.status.code(), Some(3));
    std::fs::write(d.join("junk.bin"), b"not a trellis").unwrap();
    assert_eq!(qtrellis(&["census", "--trellis", "junk.bin"], d).status.code(), Some(4));
    assert_eq!(qtrellis(&["census", "--trellis", "missing.bin"], d).status.code(), Some(4));
    std::fs::write(d.join("bad.code"), "this is not a code\n").unwrap();
    assert_eq!(qtrellis(&["profile", "--code", "bad.code"], d).status.code(), Some(4));
}

#[test]
fn simulate_then_fit() {
    let dir = tempfile::tempdir().unwrap();
    let d = dir.path();
    let sim = qtrellis(
        &[
            "simulate", "--code", "rotated_surface", "--distance", "3,5,7", "--channel", "dephasing-z", "--p-min", "0.05",
            "--p-max", "0.15", "--p-step", "0.025", "--samples", "2000", "--seed", "4", "--decoder", "css", "--out",
            "results.csv",
        ],
        d,
    );
    assert!(sim.status.success(), "{}", String::from_utf8_lossy(&sim.stderr));
    let csv = std::fs::read_to_string(d.join("results.csv")).unwrap();
    let mut lines = csv.lines();
    assert_eq!(
        lines.next().unwrap(),
        "code,distance,decoder,channel,p_phys,samples,failures,rate_cond,rate_uncond,ci_lo,ci_hi,seed"
    );
    assert_eq!(lines.count(), 15);
    let fit = json(&qtrellis(&["fit", "--in", "results.csv", "--dmin", "3"], d));
    assert!(fit["p_th"].as_f64().unwrap() > 0.0);
    assert_eq!(fit["small_distance_caveat"], false);
    let caveat = json(&qtrellis(&["fit", "--in", "results.csv"], d));
    assert_eq!(caveat["small_distance_caveat"], true);
}

#[test]
fn simulate_is_reproducible_across_worker_counts() {
    let dir = tempfile::tempdir().unwrap();
    let d = dir.path();
    let run = |workers: &str, out: &str| {
        let o = qtrellis(
            &[
                "simulate", "--code", "steane", "--channel", "depolarizing", "--p-min", "0.1", "--p-max", "0.1", "--p-step",
                "0.1", "--samples", "5000", "--workers", workers, "--out", out,
            ],
            d,
        );
        assert!(o.status.success());
        std::fs::read_to_string(d.join(out)).unwrap()
    };
    assert_eq!(run("1", "a.csv"), run("3", "b.csv"));
}
