//! End-to-end checks of the task pipelines on small constructed instances.

use graph_influence::pipelines::*;
use graph_influence::synthetic::gaussian_blob;
use graph_influence::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn dataset(rows: &[Vec<f64>]) -> Dataset64 {
    Dataset::new(Matrix::from_rows(rows).unwrap()).unwrap()
}

fn blob_rows(rng: &mut ChaCha8Rng, n: usize, center: &[f64], scale: f64) -> Vec<Vec<f64>> {
    let m: Matrix64 = gaussian_blob(n, center, scale, rng);
    (0..n).map(|i| m.row(i).to_vec()).collect()
}

#[test]
fn outliers_become_criticisms() {
    let mut rng = ChaCha8Rng::seed_from_u64(2);
    let mut rows = blob_rows(&mut rng, 40, &[0.0, 0.0], 0.3);
    rows.extend(blob_rows(&mut rng, 40, &[5.0, 0.0], 0.3));
    rows.extend([vec![2.5, 8.0], vec![-6.0, -7.0], vec![11.0, 6.0]]);
    let config = PrototypeConfig {
        knn: KnnConfig::with_k(5),
        n_prototypes: 5,
        n_criticisms: 3,
        ..Default::default()
    };
    let sel = prototypes_criticisms(&dataset(&rows), &config).unwrap();
    let mut crit = sel.criticisms.ids.clone();
    crit.sort();
    assert_eq!(crit, vec![80, 81, 82]);
    assert!(sel.prototypes.ids.iter().all(|&i| i < 80));
}

#[test]
fn vacuous_threshold_keeps_every_node() {
    let mut rng = ChaCha8Rng::seed_from_u64(4);
    let rows: Vec<Vec<f64>> = (0..30).map(|_| vec![rng.random_range(0.0..1.0), rng.random_range(0.0..1.0)]).collect();
    let config = PrototypeConfig {
        knn: KnnConfig::with_k(4),
        threshold_percentile: 100.0,
        n_prototypes: 30,
        n_criticisms: 0,
        ..Default::default()
    };
    let sel = prototypes_criticisms(&dataset(&rows), &config).unwrap();
    let mut ids = sel.prototypes.ids.clone();
    ids.sort();
    assert_eq!(ids, (0..30).collect::<Vec<_>>());
    assert!(sel.prototypes.scores.windows(2).all(|w| w[0] <= w[1]));
}

#[test]
fn one_nn_error_edge_cases() {
    let rows = vec![vec![0.0], vec![1.0], vec![5.0], vec![6.0]];
    let ds = dataset(&rows).with_labels(vec![0, 0, 1, 1]).unwrap();
    assert_eq!(evaluate_1nn(&ds, &ds).unwrap(), 0.0);
    let single = ds.select(&[0]);
    assert_eq!(evaluate_1nn(&single, &ds).unwrap(), 0.5);
}

/// Two 15-node classes, far apart. Returns rows and labels.
fn two_classes(seed: u64) -> (Vec<Vec<f64>>, Vec<i64>) {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut rows = blob_rows(&mut rng, 15, &[0.0, 0.0], 0.5);
    rows.extend(blob_rows(&mut rng, 15, &[10.0, 0.0], 0.5));
    let labels = (0..30).map(|i| (i >= 15) as i64).collect();
    (rows, labels)
}

#[test]
fn planted_flip_ranks_first() {
    let (rows, mut labels) = two_classes(9);
    // the sample nearest the centre of class 0 carries the wrong label
    let deep = (0..15)
        .min_by(|&a, &b| {
            let r = |i: usize| rows[i][0].hypot(rows[i][1]);
            r(a).partial_cmp(&r(b)).unwrap()
        })
        .unwrap();
    labels[deep] = 1;
    let det = noisy_label_detection(&dataset(&rows), &labels, &KnnConfig::with_k(5), ShiftKind::Transition).unwrap();
    assert_eq!(det.ranking.ids[0], deep);
    assert!(det.ranking.scores.windows(2).all(|w| w[0] >= w[1]));
}

#[test]
fn clean_separated_labels_have_no_signal() {
    let (rows, labels) = two_classes(1);
    let det = noisy_label_detection(&dataset(&rows), &labels, &KnnConfig::with_k(5), ShiftKind::Transition).unwrap();
    assert!(det.distrust.values.iter().all(|v| *v == 0.0));
    assert!(det.influence.scores.iter().all(|v| *v == 0.0));
    let none = confusing_samples(&dataset(&rows), &labels, &KnnConfig::with_k(5), 5).unwrap();
    assert!(none.is_empty());
    assert!(!none.warnings.is_empty());
}

#[test]
fn confusing_sample_selected_first() {
    let (mut rows, labels) = two_classes(6);
    // node 3 (class 0) placed in the middle of class 1
    rows[3] = vec![10.0, 0.05];
    let sel = confusing_samples(&dataset(&rows), &labels, &KnnConfig::with_k(5), 100).unwrap();
    assert_eq!(sel.ids[0], 3);
    assert!(sel.warnings.iter().any(|w| w.contains("clipped")));
}

#[test]
fn corrupt_labels_counts_and_determinism() {
    let labels: Vec<i64> = (0..20).map(|i| (i >= 10) as i64).collect();
    let (corrupted, mask) = corrupt_labels(&labels, 0.1, 7).unwrap();
    assert_eq!(mask.iter().filter(|m| **m).count(), 2);
    for i in 0..20 {
        assert_eq!(mask[i], corrupted[i] != labels[i]);
    }
    assert_eq!(corrupt_labels(&labels, 0.1, 7).unwrap().1, mask);
    assert!(corrupt_labels(&[0, 1, 2], 0.1, 7).is_err());

    let big: Vec<i64> = (0..4138).map(|i| (i % 10 >= 7) as i64).collect();
    let (_, mask) = corrupt_labels(&big, 0.1, 1).unwrap();
    let per_class = |c: i64| (0..4138).filter(|&i| big[i] == c && mask[i]).count();
    assert_eq!(per_class(0), (0.1f64 * 2897.0).round() as usize);
    assert_eq!(per_class(1), (0.1f64 * 1241.0).round() as usize);
}

#[test]
fn random_ranking_recall_tracks_budget() {
    let n = 1000;
    let mask: Vec<bool> = (0..n).map(|i| i % 10 == 0).collect();
    let budgets = [0.1, 0.3, 0.5, 0.8];
    let mut mean = [0.0; 4];
    for seed in 0..200 {
        let curve = recall_curve(&random_ranking::<f64>(n, seed), &mask, &budgets).unwrap();
        for (m, r) in mean.iter_mut().zip(&curve.recalls) {
            *m += r / 200.0;
        }
    }
    for (m, b) in mean.iter().zip(budgets) {
        assert!((m - b).abs() < 0.02, "{m} vs {b}");
    }
    assert!(recall_curve(&random_ranking::<f64>(n, 0), &vec![false; n], &budgets).is_err());
}

#[test]
fn ssl_margin_picks_the_spike() {
    let mut rng = ChaCha8Rng::seed_from_u64(12);
    let rows = blob_rows(&mut rng, 40, &[0.0, 0.0], 1.0);
    let g = build_knn_graph(&dataset(&rows), &KnnConfig::with_k(5)).unwrap();
    let mut values = vec![1.0; 40 * 3];
    values[17 * 3 + 1] = 4.0;
    let emb = NodeSignal::from_matrix(Matrix::from_row_major(40, 3, values).unwrap()).unwrap();
    let sel = ssl_sample_selection(&emb, &g, 5, SamplingStrategy::Margin, 0).unwrap();
    assert_eq!(sel.ids[0], 17);
    for strategy in [SamplingStrategy::Margin, SamplingStrategy::Resampling, SamplingStrategy::Random] {
        // for resampling only the spike and its neighbors carry mass; the
        // rest are filled uniformly
        let mut ids = ssl_sample_selection(&emb, &g, 40, strategy, 3).unwrap().ids;
        ids.sort();
        assert_eq!(ids, (0..40).collect::<Vec<_>>());
    }
    let a = ssl_sample_selection(&emb, &g, 10, SamplingStrategy::Random, 1).unwrap();
    let b = ssl_sample_selection(&emb, &g, 10, SamplingStrategy::Random, 2).unwrap();
    assert_ne!(a.ids, b.ids);
    assert!(ssl_sample_selection(&emb, &g, 0, SamplingStrategy::Margin, 0).is_err());
}

#[test]
fn combine_saliency_is_elementwise() {
    assert_eq!(combine_saliency(&[0.2, 0.5], &[0.5, 1.0]).unwrap(), vec![0.1, 0.5]);
    assert_eq!(combine_saliency(&[0.2, 0.5], &[1.0, 0.0]).unwrap(), vec![0.2, 0.0]);
    assert!(combine_saliency(&[0.2], &[0.5, 1.0]).is_err());
}

#[test]
fn random_flags_do_not_separate() {
    let mut rng = ChaCha8Rng::seed_from_u64(30);
    let rows = blob_rows(&mut rng, 2000, &[0.0; 4], 1.0);
    let flags: Vec<bool> = (0..2000).map(|_| rng.random_bool(0.5)).collect();
    let ds = dataset(&rows).with_flags(flags).unwrap();
    let report = adversarial_characterization(
        &ds,
        &KnnConfig::with_k(10),
        &AdversarialFunction::MmdGlobal,
        &KernelConfig::default(),
        20,
    )
    .unwrap();
    for s in [&report.margin, &report.raw] {
        assert!((s.auc.unwrap() - 0.5).abs() < 0.05, "{:?}", s.auc);
        assert_eq!(s.flagged.count + s.unflagged.count, 2000);
        assert_eq!(s.flagged.histogram.iter().sum::<usize>(), s.flagged.count);
        assert_eq!(s.bin_edges.len(), 21);
    }
}

#[test]
fn single_group_is_degenerate() {
    let rows: Vec<Vec<f64>> = (0..10).map(|i| vec![i as f64, (i * i) as f64]).collect();
    let ds = dataset(&rows).with_flags(vec![true; 10]).unwrap();
    let report = adversarial_characterization(
        &ds,
        &KnnConfig::with_k(3),
        &AdversarialFunction::MmdGlobal,
        &KernelConfig::default(),
        5,
    )
    .unwrap();
    assert!(report.margin.degenerate && report.margin.auc.is_none());
}
