//! Estimator and oracle cross-checks at full sample counts.

use approx::assert_relative_eq;

use xsec::analysis::check_triple;
use xsec::section::ProfileMode;
use xsec::{
    codim_profile, dim_profile, estimate_codim, estimate_dim, estimate_logvol_path, full_volume, volume_k1, volume_k2,
    volume_mc, Aggregation, DilationVector, GivenAs, LogDilation, MCConfig, Method, SectionBody, SubspaceSpec,
    VolumeEstimate,
};

const HEXAGON: f64 = 1.299_038_105_676_658;

fn spec(n: usize, given_as: GivenAs, rows: Vec<Vec<f64>>) -> SubspaceSpec {
    SubspaceSpec::new(n, given_as, rows).unwrap()
}

fn assert_within_sigma(est: &VolumeEstimate, exact: f64) {
    assert!(
        (est.value - exact).abs() <= 3.0 * est.stderr,
        "{:?} estimate {} ± {} misses {exact}",
        est.method,
        est.value,
        est.stderr
    );
}

fn assert_agree(x: &VolumeEstimate, y: &VolumeEstimate) {
    let band = 3.0 * (x.stderr.powi(2) + y.stderr.powi(2)).sqrt();
    assert!((x.value - y.value).abs() <= band, "{x:?} vs {y:?}");
}

fn million(seed: u64) -> MCConfig {
    MCConfig::new(1_000_000, 100, seed).unwrap()
}

#[test]
fn dim_estimator_ignores_basis_scaling() {
    let s = spec(2, GivenAs::Subspace, vec![vec![2.0, 2.0]]);
    let est = estimate_dim(&dim_profile(&s, false), &DilationVector::ones(2), &million(42)).unwrap();
    assert_within_sigma(&est, std::f64::consts::SQRT_2);
}

#[test]
fn dim_estimator_on_hexagon_from_skew_basis() {
    let s = spec(3, GivenAs::Subspace, vec![vec![1.0, -1.0, 0.0], vec![1.0, 1.0, -2.0]]);
    let est = estimate_dim(&dim_profile(&s, false), &DilationVector::ones(3), &million(42)).unwrap();
    assert_within_sigma(&est, HEXAGON);
    let codim = estimate_codim(&codim_profile(&s).unwrap(), &DilationVector::ones(3), &million(42)).unwrap();
    assert_within_sigma(&codim, HEXAGON);
}

#[test]
fn full_plane_dim_estimate_is_closed_form() {
    let s = spec(2, GivenAs::Subspace, vec![vec![1.0, 0.0], vec![0.0, 1.0]]);
    let a = DilationVector::new(vec![0.7, 1.9]).unwrap();
    let est = estimate_dim(&dim_profile(&s, false), &a, &MCConfig::new(10_000, 10, 1).unwrap()).unwrap();
    assert_relative_eq!(est.value, 2.0 * 0.7 * 1.9, max_relative = 1e-12);
}

#[test]
fn median_of_means_tracks_the_mean() {
    let s = spec(3, GivenAs::Complement, vec![vec![1.0, 1.0, 1.0]]);
    let p = codim_profile(&s).unwrap();
    let cfg = million(9).with_aggregation(Aggregation::MedianOfMeans);
    let est = estimate_codim(&p, &DilationVector::ones(3), &cfg).unwrap();
    assert_within_sigma(&est, HEXAGON);
}

#[test]
fn results_do_not_depend_on_worker_count() {
    let s = spec(4, GivenAs::Subspace, vec![vec![1.0, 2.0, 0.0, -1.0], vec![0.0, 1.0, 1.0, 1.0]]);
    let a = DilationVector::new(vec![1.0, 0.5, 2.0, 1.5]).unwrap();
    let cfg = MCConfig::new(200_000, 50, 11).unwrap();
    let run = |threads| {
        let pool = rayon::ThreadPoolBuilder::new().num_threads(threads).build().unwrap();
        pool.install(|| {
            (
                estimate_codim(&codim_profile(&s).unwrap(), &a, &cfg).unwrap(),
                estimate_dim(&dim_profile(&s, false), &a, &cfg).unwrap(),
            )
        })
    };
    let reference = run(1);
    for threads in [2, 3, 8] {
        assert_eq!(run(threads), reference);
    }
}

#[test]
fn repeated_point_on_path_is_bit_identical() {
    let s = spec(4, GivenAs::Subspace, vec![vec![1.0, 0.0, 2.0, 1.0], vec![0.5, 1.0, 0.0, -1.0]]);
    let t = LogDilation::new(vec![0.2, -1.1, 0.7, 0.0]).unwrap();
    let cfg = MCConfig::new(50_000, 50, 3).unwrap();
    for mode in [ProfileMode::Codim, ProfileMode::Dim] {
        let path = estimate_logvol_path(&s, &[t.clone(), t.clone()], mode, &cfg).unwrap();
        assert_eq!(path.points[0].log_value.to_bits(), path.points[1].log_value.to_bits());
    }
}

#[test]
fn diagonal_shift_adds_dimension_times_shift() {
    let s = spec(
        5,
        GivenAs::Subspace,
        vec![vec![1.0, 0.0, 2.0, 1.0, 0.0], vec![0.5, 1.0, 0.0, -1.0, 1.0], vec![0.0, 0.0, 1.0, 1.0, 1.0]],
    );
    let t = LogDilation::new(vec![0.2, -1.1, 0.7, 0.0, 0.4]).unwrap();
    let cfg = MCConfig::new(50_000, 50, 3).unwrap();
    for shift in [-1.3, 0.25, 2.0] {
        for mode in [ProfileMode::Codim, ProfileMode::Dim] {
            let path = estimate_logvol_path(&s, &[t.clone(), t.shifted(shift)], mode, &cfg).unwrap();
            let gap = path.points[1].log_value - path.points[0].log_value;
            assert!((gap - 3.0 * shift).abs() <= 1e-12, "{mode:?}, shift {shift}: {gap}");
        }
    }
}

#[test]
fn midpoint_inequality_holds_at_desk_scale() {
    let s = spec(4, GivenAs::Subspace, vec![vec![0.3, -0.8, 0.5, 0.1], vec![0.9, 0.2, -0.4, 0.6]]);
    let t0 = LogDilation::new(vec![-1.5, 0.4, 1.2, -0.3]).unwrap();
    let t1 = LogDilation::new(vec![1.1, -1.8, 0.2, 1.6]).unwrap();
    let r = check_triple(&s, &t0, &t1, &MCConfig::new(200_000, 100, 5).unwrap(), ProfileMode::Codim).unwrap();
    assert!(r.margin >= -3.0 * r.stderr, "{r:?}");
}

#[test]
fn k2_oracle_matches_dim_estimate_on_paired_coordinates() {
    let s = spec(4, GivenAs::Subspace, vec![vec![1.0, 1.0, 0.0, 0.0], vec![0.0, 0.0, 1.0, 1.0]]);
    let a = DilationVector::ones(4);
    let body = SectionBody::new(dim_profile(&s, false), a.clone()).unwrap();
    let exact = volume_k2(&body).unwrap();
    let est = estimate_dim(&dim_profile(&s, false), &a, &million(42)).unwrap();
    assert_within_sigma(&est, exact);
}

#[test]
fn hit_or_miss_matches_exact_oracles() {
    let line = spec(3, GivenAs::Subspace, vec![vec![1.0, -2.0, 0.5]]);
    let a = DilationVector::new(vec![1.0, 0.6, 1.7]).unwrap();
    let body = SectionBody::new(dim_profile(&line, false), a.clone()).unwrap();
    let mc = volume_mc(&body, &million(2)).unwrap();
    assert_eq!(mc.method, Method::OracleMc);
    assert_within_sigma(&mc, volume_k1(&body).unwrap());

    let plane = spec(4, GivenAs::Subspace, vec![vec![1.0, 0.0, 2.0, 1.0], vec![0.5, 1.0, 0.0, -1.0]]);
    let a = DilationVector::new(vec![1.0, 0.6, 1.7, 1.1]).unwrap();
    let body = SectionBody::new(dim_profile(&plane, false), a).unwrap();
    assert_within_sigma(&volume_mc(&body, &million(3)).unwrap(), volume_k2(&body).unwrap());

    let whole = spec(3, GivenAs::Subspace, vec![vec![1.0, 0.0, 0.0], vec![0.0, 1.0, 0.0], vec![0.0, 0.0, 1.0]]);
    let a = DilationVector::new(vec![0.8, 1.3, 2.0]).unwrap();
    let body = SectionBody::new(dim_profile(&whole, false), a.clone()).unwrap();
    assert_within_sigma(&volume_mc(&body, &million(4)).unwrap(), full_volume(&a));
}

#[test]
fn hit_or_miss_agrees_with_dim_estimate_in_three_dimensions() {
    let s = spec(
        5,
        GivenAs::Subspace,
        vec![vec![0.3, -0.8, 0.5, 0.1, 0.7], vec![0.9, 0.2, -0.4, 0.6, 0.0], vec![-0.2, 0.4, 0.8, 0.5, -0.6]],
    );
    let a = DilationVector::new(vec![1.2, 0.7, 1.0, 1.9, 0.5]).unwrap();
    let body = SectionBody::new(dim_profile(&s, false), a.clone()).unwrap();
    let mc = volume_mc(&body, &million(6)).unwrap();
    let est = estimate_dim(&dim_profile(&s, false), &a, &million(7)).unwrap();
    assert_agree(&mc, &est);
}

#[test]
fn axis_section_is_a_segment() {
    let s = spec(2, GivenAs::Subspace, vec![vec![1.0, 0.0]]);
    let a = DilationVector::new(vec![1.5, 0.4]).unwrap();
    let body = SectionBody::new(dim_profile(&s, false), a).unwrap();
    assert_relative_eq!(volume_k1(&body).unwrap(), 3.0, max_relative = 1e-15);
}
