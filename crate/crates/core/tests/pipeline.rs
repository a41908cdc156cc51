use loggap_core::eval::{
    inject_gaps, mask_cases, normalized_mae, parse_report_csv, render_report, run_benchmark, synthesize_well,
    BenchmarkConfig, SvgOptions, SyntheticConfig,
};
use loggap_core::features::prepare_features;
use loggap_core::models::{
    impute, predict_gap, ImputeConfig, Method, ModelArtifact, Policy, RowPredictor, TrainConfig, TrainedModel,
};
use loggap_core::well_io::{detect_gaps, Curve, GapSpec, WellLog};
use loggap_core::Error;

fn synth(length: usize) -> WellLog {
    synthesize_well(&SyntheticConfig {
        length,
        ..SyntheticConfig::default()
    })
    .unwrap()
}

fn quick() -> ImputeConfig {
    ImputeConfig {
        train: TrainConfig {
            epochs: 15,
            ..TrainConfig::default()
        },
        ..ImputeConfig::default()
    }
}

fn with_gaps(well: &WellLog, gaps: &[(usize, usize)]) -> WellLog {
    let mut out = well.clone();
    let gr = well.curve("GR").unwrap();
    let mut values = gr.values.clone();
    for &(start, len) in gaps {
        values[start..start + len].fill(None);
    }
    out.set_curve(gr.with_values(values)).unwrap();
    out
}

#[test]
fn auto_policy_picks_by_length_and_keeps_observed() {
    let truth = synth(4000);
    let gappy = with_gaps(&truth, &[(500, 3), (2000, 120)]);
    let out = impute(&gappy, &quick()).unwrap();
    let methods: Vec<Method> = out.per_gap.iter().map(|g| g.method).collect();
    assert_eq!(methods, [Method::Linear, Method::NnShift]);
    assert_eq!(out.per_gap[0].shift, 0.0);
    assert!(out.model.is_some());
    assert!(detect_gaps(&out.filled_curve).is_empty());
    let before = gappy.curve("GR").unwrap();
    for (a, b) in before.values.iter().zip(&out.filled_curve.values) {
        if let Some(a) = a {
            assert_eq!(a.to_bits(), b.unwrap().to_bits());
        }
    }
}

#[test]
fn network_predictions_beat_threshold_on_synthetic() {
    let truth = synth(6000);
    let cases = inject_gaps(&truth, "GR", &[150], 5, 11).unwrap();
    let masked = mask_cases(truth.curve("GR").unwrap(), &cases);
    let cfg = ImputeConfig::default();
    let (features, _) = prepare_features(&truth, &cfg.features, &cfg.preprocess).unwrap();
    let train = TrainConfig {
        epochs: 40,
        ..TrainConfig::default()
    };
    let (model, _) = TrainedModel::fit(&features, &masked, &train).unwrap();
    let reference = truth.curve("GR").unwrap().observed();
    for case in &cases {
        let pred = predict_gap(&model, &features, &case.gap).unwrap();
        let score = normalized_mae(&pred, &case.truth, &reference).unwrap();
        assert!(score < 0.2, "gap at {}: {score}", case.gap.start);
    }
    // Length-1 gap equals the single-row forward pass.
    let one = GapSpec::new("GR", 1234, 1);
    let direct = model.predict_rows(&features, &[1234]).unwrap();
    assert_eq!(predict_gap(&model, &features, &one).unwrap(), direct);
}

#[test]
fn fixed_seed_imputation_is_reproducible_and_model_round_trips() {
    let gappy = with_gaps(&synth(3000), &[(800, 40)]);
    let cfg = ImputeConfig {
        policy: Policy::Fixed(Method::NnShift),
        ..quick()
    };
    let a = impute(&gappy, &cfg).unwrap();
    let b = impute(&gappy, &cfg).unwrap();
    assert_eq!(a, b);
    let artifact = a.model.unwrap();
    let json = artifact.to_json();
    let back = ModelArtifact::from_json(&json).unwrap();
    assert_eq!(back, artifact);
    assert_eq!(back.d_in, 68);
    assert!(ModelArtifact::from_json("{}").is_err());
}

#[test]
fn too_few_training_rows_is_an_error() {
    let gr = Curve::from_values(
        "GR",
        "API",
        &(0..300)
            .map(|i| (i as f64 * 0.1).sin() * 10.0 + 50.0)
            .collect::<Vec<_>>(),
    );
    let mut values = gr.values.clone();
    values[100..150].fill(None);
    let others: Vec<Curve> = ["RHOB", "SP", "ILD", "DT"]
        .iter()
        .enumerate()
        .map(|(k, m)| {
            Curve::from_values(
                *m,
                "",
                &(0..300)
                    .map(|i| ((i * (k + 2)) as f64 * 0.05).cos() + 3.0)
                    .collect::<Vec<_>>(),
            )
        })
        .collect();
    let mut curves = vec![gr.with_values(values)];
    curves.extend(others);
    let well = WellLog::new("small", (0..300).map(|i| i as f64).collect(), curves).unwrap();
    let err = impute(&well, &ImputeConfig::default()).unwrap_err();
    assert!(matches!(err, Error::InsufficientRows { required: 640, .. }), "{err}");
}

#[test]
fn linear_benchmark_on_affine_target_scores_zero() {
    let n = 3000;
    let depths: Vec<f64> = (0..n).map(|i| i as f64).collect();
    let gr = Curve::from_values("GR", "API", &(0..n).map(|i| 20.0 + 0.05 * i as f64).collect::<Vec<_>>());
    let well = WellLog::new("affine", depths, vec![gr]).unwrap();
    let config = BenchmarkConfig {
        methods: vec![Method::Linear],
        lengths: vec![1, 5, 50, 300],
        trials: 4,
        ..BenchmarkConfig::default()
    };
    let report = run_benchmark(&well, &config).unwrap();
    assert_eq!(report.entries.len(), 4);
    for e in &report.entries {
        assert!(e.mean_score <= 1e-12, "{e:?}");
        assert_eq!(e.trial_count, 4);
    }
}

#[test]
fn benchmark_shape_determinism_and_parallel_equivalence() {
    let well = synth(5000);
    let config = BenchmarkConfig {
        methods: vec![Method::NnShift, Method::Linear],
        lengths: vec![100, 5],
        trials: 5,
        seed: 3,
        impute: quick(),
        parallel: true,
    };
    let report = run_benchmark(&well, &config).unwrap();
    let keys: Vec<(Method, usize)> = report.entries.iter().map(|e| (e.method, e.gap_length)).collect();
    assert_eq!(
        keys,
        [
            (Method::Linear, 5),
            (Method::Linear, 100),
            (Method::NnShift, 5),
            (Method::NnShift, 100)
        ]
    );
    let serial = run_benchmark(
        &well,
        &BenchmarkConfig {
            parallel: false,
            ..config.clone()
        },
    )
    .unwrap();
    assert_eq!(report, serial);

    let rendered = render_report(&report, SvgOptions::default()).unwrap();
    let again = render_report(&run_benchmark(&well, &config).unwrap(), SvgOptions::default()).unwrap();
    assert_eq!(rendered.csv, again.csv);
    assert_eq!(rendered.svg, again.svg);
    assert_eq!(parse_report_csv(&rendered.csv).unwrap().len(), 4);
    assert_eq!(rendered.svg.matches("<path").count(), 2);
}

#[test]
fn oversized_gap_length_names_the_limit() {
    let well = synth(1000);
    let err = run_benchmark(
        &well,
        &BenchmarkConfig {
            methods: vec![Method::Linear],
            lengths: vec![5000],
            trials: 1,
            ..BenchmarkConfig::default()
        },
    )
    .unwrap_err();
    assert!(err.to_string().contains("at most 980"), "{err}");
}
