use std::collections::BTreeSet;
use std::fs;
use std::path::Path;

use proptest::prelude::*;
use sflab::{load_dataset, write_dataset, CliError, Dataset, Split};
use sflab_core::{Graph, Matrix};

fn write_files(dir: &Path, edges: &str, features: &str, labels: &str) {
    fs::write(dir.join("edges.tsv"), edges).unwrap();
    fs::write(dir.join("features.csv"), features).unwrap();
    fs::write(dir.join("labels.csv"), labels).unwrap();
}

fn format_error(err: CliError) -> (String, usize, String) {
    match err {
        CliError::DatasetFormat { file, line, message } => {
            (file.file_name().unwrap().to_string_lossy().into_owned(), line, message)
        }
        other => panic!("expected a dataset format error, got {other:?}"),
    }
}

#[test]
fn minimal_two_node_dataset() {
    let dir = tempfile::tempdir().unwrap();
    write_files(dir.path(), "0\t1\n", "1.0,2.0\n3.0,4.0\n", "0,1\n1,0\n");
    let data = load_dataset(dir.path()).unwrap();
    assert_eq!(data.nodes(), 2);
    assert_eq!(data.labels, vec![1, 0]);
    assert_eq!(data.classes, 2);
    assert!(data.fixed_splits.is_none());
    let split = &data.splits(1, 0)[0];
    let covered: BTreeSet<usize> = split.train.iter().chain(&split.val).chain(&split.test).copied().collect();
    assert_eq!(covered, BTreeSet::from([0, 1]));
}

#[test]
fn feature_row_count_must_match() {
    let dir = tempfile::tempdir().unwrap();
    write_files(dir.path(), "# nodes: 3\n0\t1\n", "1\n2\n", "0,0\n1,0\n2,0\n");
    let (file, _, message) = format_error(load_dataset(dir.path()).unwrap_err());
    assert_eq!(file, "features.csv");
    assert!(message.contains("2 feature rows"), "{message}");
}

#[test]
fn ragged_and_non_numeric_features() {
    let dir = tempfile::tempdir().unwrap();
    write_files(dir.path(), "0\t1\n", "1,2\n3\n", "0,0\n1,0\n");
    assert_eq!(format_error(load_dataset(dir.path()).unwrap_err()).1, 2);
    write_files(dir.path(), "0\t1\n", "1,2\n3,x\n", "0,0\n1,0\n");
    assert_eq!(format_error(load_dataset(dir.path()).unwrap_err()).1, 2);
}

#[test]
fn out_of_range_label_id_names_its_line() {
    let dir = tempfile::tempdir().unwrap();
    write_files(dir.path(), "0\t1\n", "1\n2\n", "0,0\n1,1\n7,0\n");
    let (file, line, message) = format_error(load_dataset(dir.path()).unwrap_err());
    assert_eq!((file.as_str(), line), ("labels.csv", 3));
    assert!(message.contains("node id 7"), "{message}");
}

#[test]
fn duplicate_and_missing_labels() {
    let dir = tempfile::tempdir().unwrap();
    write_files(dir.path(), "0\t1\n", "1\n2\n", "0,0\n0,1\n");
    assert_eq!(format_error(load_dataset(dir.path()).unwrap_err()).1, 2);
    write_files(dir.path(), "0\t1\n", "1\n2\n", "0,0\n");
    assert!(format_error(load_dataset(dir.path()).unwrap_err()).2.contains("node 1 has no label"));
}

#[test]
fn bad_edge_line() {
    let dir = tempfile::tempdir().unwrap();
    write_files(dir.path(), "0\t1\n1 2\n", "1\n2\n3\n", "0,0\n1,0\n2,0\n");
    let (file, line, _) = format_error(load_dataset(dir.path()).unwrap_err());
    assert_eq!((file.as_str(), line), ("edges.tsv", 2));
}

#[test]
fn missing_file_is_an_io_error() {
    let dir = tempfile::tempdir().unwrap();
    let err = load_dataset(dir.path()).unwrap_err();
    assert!(matches!(err, CliError::Io { .. }));
    assert_eq!(err.exit_code(), 3);
}

#[test]
fn splits_file_single_and_list() {
    let dir = tempfile::tempdir().unwrap();
    write_files(dir.path(), "0\t1\n1\t2\n", "1\n2\n3\n", "0,0\n1,1\n2,0\n");
    fs::write(dir.path().join("splits.json"), r#"{"train":[0],"val":[1],"test":[2]}"#).unwrap();
    let data = load_dataset(dir.path()).unwrap();
    assert_eq!(data.fixed_splits.as_ref().unwrap().len(), 1);
    let cycled = data.splits(3, 9);
    assert!(cycled.iter().all(|s| s.train == vec![0] && s.test == vec![2]));

    let two = r#"[{"train":[0],"val":[1],"test":[2]},{"train":[2],"val":[0],"test":[1]}]"#;
    fs::write(dir.path().join("splits.json"), two).unwrap();
    assert_eq!(load_dataset(dir.path()).unwrap().splits(2, 0)[1].train, vec![2]);

    fs::write(dir.path().join("splits.json"), r#"{"train":[0,1],"val":[1],"test":[]}"#).unwrap();
    let (file, _, message) = format_error(load_dataset(dir.path()).unwrap_err());
    assert_eq!(file, "splits.json");
    assert!(message.contains("more than one mask"), "{message}");
}

#[test]
fn write_then_load_round_trips() {
    let dir = tempfile::tempdir().unwrap();
    let data = Dataset {
        graph: Graph::new(4, [(0, 1), (2, 3), (1, 2)]).unwrap(),
        features: Matrix::from_fn(4, 3, |i, j| (i as f64 + 0.1) * (j as f64 - 1.3) / 7.0),
        labels: vec![0, 2, 1, 2],
        classes: 3,
        fixed_splits: Some(vec![Split { train: vec![0, 1], val: vec![2], test: vec![3] }]),
    };
    write_dataset(dir.path(), &data).unwrap();
    let back = load_dataset(dir.path()).unwrap();
    assert_eq!(back.graph.edges(), data.graph.edges());
    assert_eq!(back.features, data.features);
    assert_eq!(back.labels, data.labels);
    assert_eq!(back.fixed_splits, data.fixed_splits);
}

#[test]
fn union_of_ten_splits_covers_every_node() {
    for n in [10, 57, 300] {
        let mut test_nodes = BTreeSet::new();
        for seed in 0..10 {
            test_nodes.extend(Split::random(n, seed).test);
        }
        let mut all = BTreeSet::new();
        for seed in 0..10 {
            let s = Split::random(n, seed);
            all.extend(s.train.iter().chain(&s.val).chain(&s.test).copied());
        }
        assert_eq!(all.len(), n);
        assert!(test_nodes.len() as f64 >= 0.8 * n as f64, "n = {n}: {} test nodes", test_nodes.len());
    }
}

proptest! {
    #[test]
    fn split_masks_are_disjoint_and_proportional(n in 1usize..2000, seed in any::<u64>()) {
        let s = Split::random(n, seed);
        let mut seen = vec![false; n];
        for &i in s.train.iter().chain(&s.val).chain(&s.test) {
            prop_assert!(i < n);
            prop_assert!(!seen[i]);
            seen[i] = true;
        }
        prop_assert!(seen.iter().all(|&v| v));
        let near = |size: usize, frac: f64| (size as f64 - frac * n as f64).abs() <= 1.0;
        prop_assert!(near(s.train.len(), 0.6));
        prop_assert!(near(s.val.len(), 0.2));
        prop_assert!(near(s.test.len(), 0.2));
        prop_assert!(s.validate(n).is_ok());
    }
}
