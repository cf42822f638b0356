use std::fs;
use std::path::Path;

use nrt::cli::{read_synthetic_dir, run, RunManifest};
use tempfile::tempdir;

fn generate(out: &Path, k: usize, d: usize, seed: u64) -> RunManifest {
    let (k, d, seed) = (k.to_string(), d.to_string(), seed.to_string());
    run(["nrt", "generate", "--K", &k, "--D", &d, "--W", "15", "--N", "40", "--seed", &seed, "--out", out.to_str().unwrap()]).unwrap()
}

fn csv_rows(path: &Path) -> Vec<String> {
    fs::read_to_string(path).unwrap().lines().skip(1).map(String::from).collect()
}

#[test]
fn generate_writes_a_readable_directory() {
    let dir = tempdir().unwrap();
    let out = dir.path().join("syn");
    let manifest = generate(&out, 3, 20, 4);
    assert_eq!(manifest.status, "ok");
    assert_eq!(manifest.outputs, ["corpus.csv", "edges.csv", "ground_truth.json", "manifest.json"]);
    for f in &manifest.outputs {
        assert!(out.join(f).exists(), "{f}");
    }
    let on_disk = RunManifest::read(&out.join("manifest.json")).unwrap();
    assert_eq!(on_disk, manifest);
    assert_eq!(manifest.config["k"], 3);

    let syn = read_synthetic_dir(&out).unwrap();
    let truth = syn.truth.unwrap();
    assert_eq!(syn.corpus.num_docs(), 20);
    assert_eq!(syn.corpus.vocab_size(), 15);
    for d in 0..20 {
        let len = syn.corpus.doc_length(d) as usize;
        assert_eq!(len, truth.doc_lengths[d]);
        assert!((20..=40).contains(&len));
    }
    assert_eq!(manifest.dataset_fingerprint, Some(syn.corpus.fingerprint()));
}

#[test]
fn generate_is_deterministic() {
    let dir = tempdir().unwrap();
    generate(&dir.path().join("a"), 3, 15, 9);
    generate(&dir.path().join("b"), 3, 15, 9);
    generate(&dir.path().join("c"), 3, 15, 10);
    let read = |s: &str, f: &str| fs::read_to_string(dir.path().join(s).join(f)).unwrap();
    assert_eq!(read("a", "corpus.csv"), read("b", "corpus.csv"));
    assert_eq!(read("a", "edges.csv"), read("b", "edges.csv"));
    assert_ne!(read("a", "corpus.csv"), read("c", "corpus.csv"));
}

#[test]
fn single_topic_network_is_complete() {
    let dir = tempdir().unwrap();
    generate(dir.path(), 1, 12, 0);
    assert_eq!(csv_rows(&dir.path().join("edges.csv")).len(), 12 * 11 / 2);
}

fn fit(syn: &Path, out: &Path, extra: &[&str]) -> nrt::Result<RunManifest> {
    let mut args = vec!["nrt", "fit", "--synthetic-dir", syn.to_str().unwrap(), "--out", out.to_str().unwrap()];
    args.extend_from_slice(extra);
    run(args)
}

#[test]
fn fit_writes_trace_histogram_and_summary() {
    let dir = tempdir().unwrap();
    let syn = dir.path().join("syn");
    generate(&syn, 2, 15, 1);

    let one = dir.path().join("one");
    let manifest = fit(&syn, &one, &["--iters", "1", "--burnin", "0", "--trunc-K", "10"]).unwrap();
    assert_eq!(manifest.outputs, ["trace.csv", "k_histogram.csv", "summary.json", "manifest.json"]);
    assert_eq!(csv_rows(&one.join("trace.csv")).len(), 1);

    for (name, sampler) in [("t", "truncated"), ("s", "slice")] {
        let a = dir.path().join(format!("{name}a"));
        let b = dir.path().join(format!("{name}b"));
        let flags = ["--sampler", sampler, "--iters", "12", "--burnin", "2", "--seed", "3", "--trunc-K", "10", "--snapshot-every", "5"];
        fit(&syn, &a, &flags).unwrap();
        fit(&syn, &b, &flags).unwrap();
        assert_eq!(
            fs::read_to_string(a.join("trace.csv")).unwrap(),
            fs::read_to_string(b.join("trace.csv")).unwrap()
        );
        let hist: usize = csv_rows(&a.join("k_histogram.csv"))
            .iter()
            .map(|r| r.split(',').nth(1).unwrap().parse::<usize>().unwrap())
            .sum();
        assert_eq!(hist, 10);
        let summary: serde_json::Value = serde_json::from_str(&fs::read_to_string(a.join("summary.json")).unwrap()).unwrap();
        assert_eq!(summary["sampler"], sampler);
        assert_eq!(summary["snapshots"].as_array().unwrap().len(), 2);
        let props = summary["final_state"]["doc_topic_proportions"].as_array().unwrap();
        assert_eq!(props.len(), 15);
        let manifest = RunManifest::read(&a.join("manifest.json")).unwrap();
        assert_eq!(manifest.config["hyperparameters"]["truncation_k"], 10);
    }
}

#[test]
fn failed_fit_still_writes_a_manifest() {
    let dir = tempdir().unwrap();
    let syn = dir.path().join("syn");
    generate(&syn, 2, 10, 1);
    let out = dir.path().join("bad");
    assert!(fit(&syn, &out, &["--iters", "5", "--burnin", "5"]).is_err());
    let manifest = RunManifest::read(&out.join("manifest.json")).unwrap();
    assert_eq!(manifest.status, "failed");
    assert!(manifest.error.is_some());
}

#[test]
fn data_flags_must_be_complete() {
    let dir = tempdir().unwrap();
    let out = dir.path().to_str().unwrap();
    assert!(run(["nrt", "fit", "--data", "x.content", "--out", out]).is_err());
    assert!(run(["nrt", "fit", "--out", out]).is_err());
}

#[test]
fn eval_writes_fold_reports_and_aggregate() {
    let dir = tempdir().unwrap();
    let syn = dir.path().join("syn");
    generate(&syn, 2, 20, 6);
    let out = dir.path().join("eval");
    let manifest = run([
        "nrt", "eval", "--synthetic-dir", syn.to_str().unwrap(), "--folds", "3", "--iters", "6", "--burnin", "1",
        "--trunc-K", "10", "--out", out.to_str().unwrap(),
    ])
    .unwrap();
    assert_eq!(manifest.outputs, ["fold_0.json", "fold_1.json", "fold_2.json", "aggregate.csv", "manifest.json"]);
    let rows = csv_rows(&out.join("aggregate.csv"));
    assert_eq!(rows.len(), 3);
    for (f, row) in rows.iter().enumerate() {
        let fields: Vec<&str> = row.split(',').collect();
        assert_eq!(fields[0], f.to_string());
        let report: nrt::eval::EvalReport =
            serde_json::from_str(&fs::read_to_string(out.join(format!("fold_{f}.json"))).unwrap()).unwrap();
        assert_eq!(report.fold_id, f);
        assert_eq!(report.loglik_trace.len(), 6);
        assert!(report.lp_score <= 0.0 && report.wp_score <= 0.0);
        assert_eq!(fields[1].parse::<f64>().unwrap(), report.lp_score);
    }
}
