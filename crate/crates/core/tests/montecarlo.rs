use bpec::montecarlo::{convergence_sweep, simulate, SimConfig};
use bpec::rate::{achievable_intermodal_sum, outer_region};
use bpec::{ModeParams, Scheme};

fn capacity() -> ModeParams<f64> {
    ModeParams::new(0.75, 0.0, 32.0 / 35.0).unwrap()
}

#[test]
fn capacity_point_at_default_guard() {
    let s = simulate(&SimConfig::new(capacity(), 100_000, Scheme::InterModal), 200, 1).unwrap();
    assert!((0.388..=0.4).contains(&s.mean_sum_rate), "{s:?}");
    assert!(s.max_failure_rate() <= 0.05, "{s:?}");
}

#[test]
fn challenge_regime_at_default_guard() {
    let p = ModeParams::new(0.75, 0.0, 1.0 / 6.0).unwrap();
    let s = simulate(&SimConfig::new(p, 100_000, Scheme::InterModal), 100, 2).unwrap();
    let target = achievable_intermodal_sum(&p).unwrap();
    assert!((s.mean_sum_rate / target - 1.0).abs() < 0.03, "{} vs {target}", s.mean_sum_rate);
}

#[test]
fn guard_prevents_failures() {
    let cfg = SimConfig::new(capacity(), 10_000, Scheme::InterModal);
    let without = simulate(&cfg.with_guard(0.0), 200, 3).unwrap();
    let with = simulate(&cfg.with_guard(3.0), 200, 3).unwrap();
    assert!(without.max_failure_rate() > with.max_failure_rate());
}

#[test]
fn empirical_rates_stay_below_outer_bound() {
    let cases = [(0.75, 0.0, 32.0 / 35.0), (0.75, 0.125, 0.5), (0.75, 0.0, 1.0 / 6.0), (0.4, 0.1, 0.3)];
    for (da, db, eta) in cases {
        let p = ModeParams::new(da, db, eta).unwrap();
        let outer = outer_region(&p).max_sum_rate().unwrap();
        for scheme in [Scheme::InterModal, Scheme::IntraModal, Scheme::NoFeedback] {
            let s = simulate(&SimConfig::new(p, 20_000, scheme), 200, 4).unwrap();
            assert!(s.mean_sum_rate <= outer + 3.0 * s.ci95_half_width(), "{da} {db} {eta} {scheme:?}");
        }
    }
}

#[test]
fn gap_shrinks_with_blocklength() {
    let cfg = SimConfig::new(capacity(), 0, Scheme::InterModal);
    let rows = convergence_sweep(&cfg, &[1_000, 10_000, 100_000], 200, 7).unwrap();
    let gaps: Vec<f64> = rows.iter().map(|r| (r.mean_sum_rate - 0.4).abs()).collect();
    assert!(gaps[0] > gaps[1] && gaps[1] > gaps[2], "{gaps:?}");
    assert!(rows.windows(2).all(|w| w[0].failure_rate >= w[1].failure_rate));
}
