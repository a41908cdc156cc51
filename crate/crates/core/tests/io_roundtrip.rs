use loggap_core::well_io::{
    detect_gaps, parse_csv, parse_las, read_well, write_csv, write_las, write_well, CsvConfig, Curve, WellLog,
    DEFAULT_NULL_SENTINEL,
};
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn random_well(rows: usize, seed: u64) -> WellLog {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let names = [
        ("GR", "API"),
        ("RHOB", "G/C3"),
        ("SP", "MV"),
        ("ILD", "OHMM"),
        ("DT", "US/F"),
    ];
    let curves = names
        .iter()
        .map(|(m, u)| {
            let values = (0..rows)
                .map(|_| (rng.random::<f64>() > 0.1).then(|| rng.random_range(-500.0..500.0)))
                .collect();
            Curve::new(*m, *u, values)
        })
        .collect();
    let depths = (0..rows).map(|i| 1500.0 + 0.1524 * i as f64).collect();
    WellLog::new("RT-1", depths, curves).unwrap()
}

fn assert_same(a: &WellLog, b: &WellLog) {
    assert_eq!(a.mnemonics().collect::<Vec<_>>(), b.mnemonics().collect::<Vec<_>>());
    assert_eq!(a.len(), b.len());
    for (x, y) in a.depths().iter().zip(b.depths()) {
        assert!((x - y).abs() <= 1e-9 * x.abs().max(1.0));
    }
    for (ca, cb) in a.curves().zip(b.curves()) {
        assert_eq!(ca.unit, cb.unit);
        for (va, vb) in ca.values.iter().zip(&cb.values) {
            match (va, vb) {
                (Some(x), Some(y)) => assert!((x - y).abs() <= 1e-9 * x.abs().max(1.0)),
                (None, None) => {}
                _ => panic!("{}: missing mask differs", ca.mnemonic),
            }
        }
    }
}

#[test]
fn las_round_trip_hundred_rows() {
    let w = random_well(100, 1);
    let back = parse_las(&write_las(&w), DEFAULT_NULL_SENTINEL).unwrap();
    assert_eq!(back, w);
    assert_eq!(back.well_id, "RT-1");
}

#[test]
fn las_header_order_follows_curve_section() {
    let w = random_well(20, 2);
    let text = write_las(&w);
    let back = parse_las(&text, DEFAULT_NULL_SENTINEL).unwrap();
    assert_eq!(back.mnemonics().collect::<Vec<_>>(), ["GR", "RHOB", "SP", "ILD", "DT"]);
    let gaps: usize = w.curves().map(|c| detect_gaps(c).len()).sum();
    let back_gaps: usize = back.curves().map(|c| detect_gaps(c).len()).sum();
    assert_eq!(gaps, back_gaps);
}

#[test]
fn csv_round_trip() {
    let w = random_well(100, 3);
    let back = parse_csv(&write_csv(&w, "NA"), &CsvConfig::default()).unwrap();
    assert_same(&w, &back);
}

#[test]
fn file_helpers_pick_format_by_extension() {
    let dir = tempfile::tempdir().unwrap();
    let w = random_well(50, 4);
    for name in ["a.las", "b.csv", "c.LAS"] {
        let path = dir.path().join(name);
        write_well(&path, &w).unwrap();
        let back = read_well(&path).unwrap();
        assert_same(&w, &back);
    }
    let csv_text = std::fs::read_to_string(dir.path().join("b.csv")).unwrap();
    assert!(csv_text.starts_with("depth,GR [API],"));
    let err = read_well(&dir.path().join("missing.las")).unwrap_err();
    assert!(err.to_string().contains("missing.las"));
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]
    #[test]
    fn las_round_trip_is_identity(rows in 2usize..60, seed in 0u64..1000) {
        let w = random_well(rows, seed);
        prop_assert_eq!(parse_las(&write_las(&w), DEFAULT_NULL_SENTINEL).unwrap(), w);
    }
}
