use std::fs;

use ensc_cli::config::RunConfig;
use ensc_cli::io;
use ensc_core::theory::{phase_grid, PhaseGridConfig};
use ensc_core::{random_unit_sphere, Affinity, DenseMatrix};

#[test]
fn binary_matrix_round_trip_is_exact() {
    let dir = tempfile::tempdir().unwrap();
    let m = random_unit_sphere(7, 5, 1).into_matrix();
    let path = dir.path().join("m.bin");
    io::write_matrix_binary(&path, &m).unwrap();
    let bytes = fs::read(&path).unwrap();
    assert_eq!(&bytes[..8], b"ENSCMAT1");
    assert_eq!(u32::from_le_bytes(bytes[8..12].try_into().unwrap()), 7);
    assert_eq!(u32::from_le_bytes(bytes[12..16].try_into().unwrap()), 5);
    assert_eq!(bytes.len(), 16 + 7 * 5 * 8);
    // first payload value is entry (0, 0), the second is (1, 0)
    assert_eq!(f64::from_le_bytes(bytes[24..32].try_into().unwrap()), m.get(1, 0));
    assert_eq!(io::read_matrix(&path).unwrap(), m);
}

#[test]
fn csv_matrix_round_trip_and_header() {
    let dir = tempfile::tempdir().unwrap();
    let m = random_unit_sphere(3, 4, 2).into_matrix();
    let path = dir.path().join("m.csv");
    io::write_matrix_csv(&path, &m).unwrap();
    assert_eq!(io::read_matrix(&path).unwrap(), m);

    let with_header = dir.path().join("h.csv");
    fs::write(&with_header, "a,b\n1.5,2\n3,-4e-1\n").unwrap();
    let h = io::read_matrix(&with_header).unwrap();
    assert_eq!(h, DenseMatrix::from_row_major(2, 2, &[1.5, 2.0, 3.0, -0.4]).unwrap());

    let ragged = dir.path().join("r.csv");
    fs::write(&ragged, "1,2\n3\n").unwrap();
    assert!(io::read_matrix(&ragged).is_err());
}

#[test]
fn truncated_binary_is_rejected() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("bad.bin");
    let mut bytes = io::encode_matrix(&DenseMatrix::identity(3));
    bytes.truncate(bytes.len() - 8);
    fs::write(&path, bytes).unwrap();
    let e = io::read_matrix(&path).unwrap_err();
    assert_eq!(e.code(), "PARSE_ERROR");
}

#[test]
fn missing_file_is_reported_as_such() {
    let e = io::read_matrix(std::path::Path::new("/nonexistent/x.bin")).unwrap_err();
    assert_eq!(e.code(), "FILE_NOT_FOUND");
    assert_eq!(e.exit_code(), 2);
}

#[test]
fn labels_and_affinity_files() {
    let dir = tempfile::tempdir().unwrap();
    let lp = dir.path().join("labels.csv");
    io::write_labels(&lp, &[2, 0, 1]).unwrap();
    assert_eq!(fs::read_to_string(&lp).unwrap(), "label\n2\n0\n1\n");
    assert_eq!(io::read_labels(&lp).unwrap(), vec![2, 0, 1]);

    let w = Affinity::from_triplets(3, vec![(2, 0, 0.25), (0, 2, 0.25), (1, 0, 1.0), (0, 1, 1.0)]).unwrap();
    let ap = dir.path().join("w.csv");
    io::write_affinity(&ap, &w).unwrap();
    assert_eq!(fs::read_to_string(&ap).unwrap(), "i,j,w\n0,1,1\n0,2,0.25\n1,0,1\n2,0,0.25\n");
    assert_eq!(io::read_affinity(&ap).unwrap(), w);
}

#[test]
fn phase_grid_csv_schema() {
    let cfg = PhaseGridConfig::standard(vec![40], vec![0.9], 1);
    let csv = io::phase_grid_csv(&phase_grid(&cfg).unwrap());
    let mut lines = csv.lines();
    assert_eq!(lines.next(), Some("N,lambda,experimental_pct,predicted_pct,seeds"));
    let row: Vec<&str> = lines.next().unwrap().split(',').collect();
    assert_eq!(row[0], "40");
    assert_eq!(row[1], "0.9");
    assert_eq!(row[4], "1");
    assert!(lines.next().is_none());
}

#[test]
fn bench_csv_schema() {
    let rows = vec![io::BenchRow {
        n: 10,
        lambda: 0.5,
        solver: "orgen".into(),
        seconds: 0.25,
        support: 3,
        outer_iters: 2,
    }];
    assert_eq!(
        io::bench_csv(&rows),
        "N,lambda,solver,seconds,support,outer_iters\n10,0.5,orgen,0.25,3,2\n"
    );
}

#[test]
fn config_rejects_unknown_keys() {
    let p = std::path::Path::new("cfg.json");
    assert!(RunConfig::from_json(r#"{"seed": 3, "cluster": {"lambda": 0.9}}"#, p).is_ok());
    let e = RunConfig::from_json(r#"{"seed": 3, "colour": 1}"#, p).unwrap_err();
    assert_eq!(e.code(), "PARSE_ERROR");
    assert!(RunConfig::from_json(r#"{"cluster": {"lamda": 0.9}}"#, p).is_err());
}

#[test]
fn config_hash_tracks_content() {
    let p = std::path::Path::new("cfg.json");
    let a = RunConfig::from_json(r#"{"seed": 3}"#, p).unwrap();
    let b = RunConfig::from_json(r#"{ "seed" : 3 }"#, p).unwrap();
    let c = RunConfig::from_json(r#"{"seed": 4}"#, p).unwrap();
    assert_eq!(a.hash(), b.hash());
    assert_ne!(a.hash(), c.hash());
    assert_eq!(a.hash().len(), 64);
}
