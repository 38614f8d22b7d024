use approx::assert_abs_diff_eq;
use proptest::prelude::*;
use setconv::convergence::{
    diagnose, diagnose_with, fisher_metrics, hausdorff_metrics, wijsman_characterization, wijsman_metrics,
    DiagnosticsConfig, Limit, ProbeSet, Quantifier, SetSequence,
};
use setconv::geometry::{convex_hull, hausdorff, minkowski_combination, minkowski_sum, scale};
use setconv::{scenarios, PointCloud, Vector};

fn line(xs: &[f64]) -> PointCloud {
    PointCloud::new(1, xs.iter().map(|&x| vec![x]).collect()).unwrap()
}

fn cfg(tolerance: f64, window: usize) -> DiagnosticsConfig {
    DiagnosticsConfig {
        tolerance,
        window,
        ..DiagnosticsConfig::default()
    }
}

#[test]
fn averages_of_two_points_against_both_candidates() {
    let d = line(&[0.0, 1.0]);
    let seq = scenarios::averaging(&d, 128).unwrap();
    // D[n] = {k/n}; its distance to {0, 1} is attained at the middle grid point.
    let h = hausdorff_metrics(&seq, &Limit::Cloud(d.clone())).unwrap();
    for (i, v) in h.iter().enumerate().skip(1) {
        let n = i + 1;
        let expected = (n / 2) as f64 / n as f64;
        assert_abs_diff_eq!(*v, expected, epsilon = 1e-12);
        assert!(*v >= 0.25);
    }
    let hull = Limit::Body(convex_hull(&d));
    let against_hull = diagnose(&seq, &hull, &cfg(0.01, 8)).unwrap();
    let against_pair = diagnose(&seq, &Limit::Cloud(d), &cfg(0.01, 8)).unwrap();
    assert!(against_hull.verdicts.fisher.consistent);
    assert!(!against_pair.verdicts.hausdorff.consistent);
    for row in &against_hull.rows {
        assert_eq!(row.e_excess, 0.0);
        assert!(row.fisher_probe_deficit <= 0.5 / row.n as f64 + 1e-12);
    }
}

#[test]
fn grid_probes_see_the_half_step() {
    let d = line(&[0.0, 1.0]);
    let seq = scenarios::averaging(&d, 16).unwrap();
    let probes = ProbeSet::from_cloud(&line(&(0..=16).map(|k| k as f64 / 16.0).collect::<Vec<_>>()));
    let hull = Limit::Body(convex_hull(&d));
    let rows = fisher_metrics(&seq, &hull, &probes).unwrap();
    // For odd n the probe 1/2 sits exactly between two grid points.
    for n in [1usize, 3, 5] {
        assert_abs_diff_eq!(rows[n - 1].probe_deficit, 0.5 / n as f64, epsilon = 1e-12);
    }
    assert_eq!(rows[15].probe_deficit, 0.0);
}

#[test]
fn shrinking_circles_have_wijsman_error_one_over_n() {
    let m = 64;
    let terms: Vec<PointCloud> = (1..=20).map(|n| scenarios::circle(1.0 + 1.0 / n as f64, m)).collect();
    let seq = SetSequence::new(terms).unwrap();
    let limit = Limit::Cloud(scenarios::circle(1.0, m));
    let probes = ProbeSet::from_cloud(&scenarios::circle(2.0, m));
    let w = wijsman_metrics(&seq, &limit, &probes).unwrap();
    for (i, v) in w.iter().enumerate() {
        assert_abs_diff_eq!(*v, 1.0 / (i + 1) as f64, epsilon = 1e-12);
    }
}

#[test]
fn characterization_finds_the_first_good_index() {
    let seq = SetSequence::new((1..=10).map(|n| line(&[1.0 / n as f64])).collect()).unwrap();
    let probes = ProbeSet::new(vec![Vector::new(vec![1.0]).unwrap()]).unwrap();
    let c = wijsman_characterization(&seq, &Limit::Cloud(line(&[0.0])), &probes, 0.4, 2).unwrap();
    assert_eq!(c.outcomes[0].n0, Some(3));
    assert!(c.all_hold());

    let oscillating =
        SetSequence::new((1..=10).map(|n| line(&[if n % 2 == 0 { 0.9 } else { 0.0 }])).collect()).unwrap();
    let c = wijsman_characterization(&oscillating, &Limit::Cloud(line(&[0.0])), &probes, 0.4, 2).unwrap();
    assert!(!c.all_hold());

    // epsilon beyond the probe's distance skips the probe instead of failing.
    let c = wijsman_characterization(&seq, &Limit::Cloud(line(&[0.0])), &probes, 1.5, 2).unwrap();
    assert_eq!(c.skipped(), 1);
}

#[test]
fn implication_chain_on_jittered_sequences() {
    let tau = 0.01;
    for seed in 0..10 {
        let (base, seq) = scenarios::jittered(seed, 200).unwrap();
        let report = diagnose(&seq, &Limit::Cloud(base), &cfg(tau, 8)).unwrap();
        assert!(report.verdicts.hausdorff.consistent, "seed {seed}");
        let doubled = report.rows[report.rows.len() - 8..].iter();
        for row in doubled {
            assert!(row.fisher() < 2.0 * tau && row.wijsman_error < 2.0 * tau, "seed {seed}");
        }
    }
}

#[test]
fn a_wrong_candidate_is_rejected() {
    let tau = 0.01;
    for seed in 0..20 {
        let (base, seq) = scenarios::jittered(seed, 200).unwrap();
        let shift: Vec<f64> = (0..base.dim()).map(|k| if k == 0 { 0.3 } else { 0.1 }).collect();
        let wrong = base.translate(&shift).unwrap();
        assert!(hausdorff(&base, &wrong).unwrap() >= 10.0 * tau);
        let report = diagnose(&seq, &Limit::Cloud(wrong), &cfg(tau, 8)).unwrap();
        assert!(!report.verdicts.wijsman.consistent, "seed {seed}");
    }
}

#[test]
fn linear_combinations_of_fisher_sequences() {
    let tau = 0.05;
    let window = 4;
    let n_max = 20;
    let triangle = PointCloud::new(2, vec![vec![0.0, 0.0], vec![1.0, 0.0], vec![0.0, 1.0]]).unwrap();
    let segment = PointCloud::new(2, vec![vec![0.0, 0.0], vec![1.0, 1.0]]).unwrap();
    let xs = scenarios::averaging(&triangle, n_max).unwrap();
    let ys = scenarios::averaging(&segment, n_max).unwrap();
    let (tx, ty) = (convex_hull(&triangle), convex_hull(&segment));
    let rx = diagnose(&xs, &Limit::Body(tx.clone()), &cfg(tau, window)).unwrap();
    let ry = diagnose(&ys, &Limit::Body(ty.clone()), &cfg(tau, window)).unwrap();
    assert!(rx.verdicts.fisher.consistent && ry.verdicts.fisher.consistent);

    let (lambda, mu) = (2.0, 0.5);
    let terms = (1..=n_max)
        .map(|n| {
            let ln = lambda + 1.0 / n as f64;
            let mn = mu - 0.5 / n as f64;
            minkowski_sum(&scale(xs.term(n), ln).unwrap(), &scale(ys.term(n), mn).unwrap()).unwrap()
        })
        .collect();
    let zs = SetSequence::new(terms).unwrap();
    let limit = minkowski_combination(&[(lambda, &tx), (mu, &ty)]).unwrap();
    let rz = diagnose(&zs, &Limit::Body(limit), &cfg(tau * (lambda + mu + 1.0), window)).unwrap();
    assert!(rz.verdicts.fisher.consistent, "worst {}", rz.verdicts.fisher.worst);
}

#[test]
fn paired_sequences_keep_their_limits_close() {
    let tau = 0.01;
    let r = 0.2;
    for seed in 0..10 {
        let (base, xs) = scenarios::jittered(seed, 150).unwrap();
        let shift: Vec<f64> = (0..base.dim()).map(|k| if k == 0 { 0.15 } else { 0.0 }).collect();
        let ys = SetSequence::new(xs.terms().iter().map(|t| t.translate(&shift).unwrap()).collect()).unwrap();
        for (x, y) in xs.terms().iter().zip(ys.terms()) {
            assert!(hausdorff(x, y).unwrap() < r);
        }
        let other = base.translate(&shift).unwrap();
        let rx = diagnose(&xs, &Limit::Cloud(base.clone()), &cfg(tau, 8)).unwrap();
        let ry = diagnose(&ys, &Limit::Cloud(other.clone()), &cfg(tau, 8)).unwrap();
        assert!(rx.verdicts.wijsman.consistent && ry.verdicts.wijsman.consistent);
        assert!(hausdorff(&base, &other).unwrap() <= r + tau);
    }
}

#[test]
fn wijsman_implies_hausdorff_on_a_finite_family() {
    use rand::{Rng, SeedableRng};
    let family = [
        line(&[0.0, 1.0]),
        line(&(0..=64).map(|k| k as f64 / 64.0).collect::<Vec<_>>()),
        line(&[0.0, 0.5, 1.0]),
    ];
    let limit = Limit::Body(convex_hull(&family[0]));
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(5);
    let mut consistent = 0;
    for _ in 0..50 {
        let switch = rng.random_range(1..=30);
        let terms = (1..=30)
            .map(|n| family[if n > switch { 1 } else { rng.random_range(0..3) }].clone())
            .collect();
        let seq = SetSequence::new(terms).unwrap();
        let report = diagnose(&seq, &limit, &cfg(0.01, 4)).unwrap();
        if report.verdicts.wijsman.consistent {
            consistent += 1;
            assert!(report.verdicts.hausdorff.consistent);
        }
    }
    assert!(consistent > 0);
}

#[test]
fn literal_quantifier_swaps_probe_families() {
    let d = line(&[0.0, 1.0]);
    let seq = scenarios::averaging(&d, 32).unwrap();
    let limit = Limit::Body(convex_hull(&d));
    let base = cfg(0.05, 4);
    let literal = DiagnosticsConfig {
        quantifier: Quantifier::Literal,
        ..base
    };
    let a = diagnose(&seq, &limit, &base).unwrap();
    let b = diagnose(&seq, &limit, &literal).unwrap();
    let on_limit = ProbeSet::limit_probes(&limit, base.probe_count, base.seed);
    let ambient = ProbeSet::ambient_probes(&seq, &limit, base.probe_count, base.seed).unwrap();
    let swapped = diagnose_with(&seq, &limit, &ambient, &on_limit, 0.05, 4).unwrap();
    assert_eq!(b, swapped);
    assert_eq!(a.rows.iter().map(|r| r.hausdorff).collect::<Vec<_>>(), b.rows.iter().map(|r| r.hausdorff).collect::<Vec<_>>());
}

#[test]
fn report_files_round_trip() {
    let seq = scenarios::averaging(&line(&[0.0, 1.0]), 10).unwrap();
    let report = diagnose(&seq, &Limit::Body(convex_hull(&line(&[0.0, 1.0]))), &cfg(0.1, 3)).unwrap();
    let dir = tempfile::tempdir().unwrap();
    report.write_to(dir.path()).unwrap();
    let csv = std::fs::read_to_string(dir.path().join("report.csv")).unwrap();
    assert!(csv.starts_with("n,e_excess,fisher_probe_deficit,wijsman_error,hausdorff\n"));
    assert_eq!(csv.lines().count(), 11);
    let json: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(dir.path().join("verdicts.json")).unwrap()).unwrap();
    assert_eq!(json["fisher"]["window"], 3);
    assert!(diagnose(&seq, &Limit::Cloud(line(&[0.0])), &cfg(0.1, 11)).is_err());
}

fn sequence_strategy() -> impl Strategy<Value = SetSequence> {
    prop::collection::vec(prop::collection::vec(prop::collection::vec(-2.0f64..2.0, 2), 1..6), 2..8)
        .prop_map(|terms| SetSequence::new(terms.into_iter().map(|t| PointCloud::new(2, t).unwrap()).collect()).unwrap())
}

fn probes_strategy() -> impl Strategy<Value = ProbeSet> {
    prop::collection::vec(prop::collection::vec(-3.0f64..3.0, 2), 1..10)
        .prop_map(|ps| ProbeSet::new(ps.into_iter().map(|p| Vector::new(p).unwrap()).collect()).unwrap())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn refining_probes_never_lowers_the_maxima(
        seq in sequence_strategy(),
        limit_pts in prop::collection::vec(prop::collection::vec(-2.0f64..2.0, 2), 1..6),
        p in probes_strategy(),
        q in probes_strategy(),
    ) {
        let limit = Limit::Cloud(PointCloud::new(2, limit_pts).unwrap());
        let pq = p.union(&q).unwrap();
        let (f1, f2) = (fisher_metrics(&seq, &limit, &p).unwrap(), fisher_metrics(&seq, &limit, &pq).unwrap());
        let (w1, w2) = (wijsman_metrics(&seq, &limit, &p).unwrap(), wijsman_metrics(&seq, &limit, &pq).unwrap());
        for i in 0..seq.len() {
            prop_assert!(f2[i].probe_deficit >= f1[i].probe_deficit);
            prop_assert_eq!(f2[i].excess, f1[i].excess);
            prop_assert!(w2[i] >= w1[i]);
        }
    }

    #[test]
    fn wijsman_error_is_below_hausdorff(seq in sequence_strategy(), p in probes_strategy(),
        limit_pts in prop::collection::vec(prop::collection::vec(-2.0f64..2.0, 2), 1..6)) {
        let limit = Limit::Cloud(PointCloud::new(2, limit_pts).unwrap());
        let h = hausdorff_metrics(&seq, &limit).unwrap();
        let w = wijsman_metrics(&seq, &limit, &p).unwrap();
        for i in 0..seq.len() {
            prop_assert!(w[i] <= h[i] + 1e-12);
        }
    }
}
