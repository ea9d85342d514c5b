use bpec::channel::{build_schedule, ChannelSampler, ModeKind, ScriptedChannel, SlotSource, SlotState};
use bpec::montecarlo::trial_seed;
use bpec::protocol::trial::messages_for;
use bpec::protocol::*;
use bpec::rate::ModeParams;
use proptest::prelude::*;
use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn capacity() -> ModeParams<f64> {
    ModeParams::new(0.75, 0.0, 32.0 / 35.0).unwrap()
}

fn realize(source: &mut impl SlotSource, len: usize) -> Vec<SlotState> {
    (1..=len).map(|t| source.slot(t)).collect()
}

fn record(plan: &SchemePlan, n: usize, slots: Vec<SlotState>, seed: u64) -> Vec<TransmitAction> {
    let schedule = build_schedule(n, 1.0, 0, 0.5, 0.5, 0.5).unwrap();
    let opts = TrialOptions { record_actions: true, ..Default::default() };
    let out = simulate_with(plan, &schedule, &mut ScriptedChannel::new(slots), messages_for(plan, seed), &opts).unwrap();
    out.actions.unwrap()
}

#[test]
fn actions_depend_only_on_past_feedback() {
    let n = 4000;
    for scheme in [Scheme::InterModal, Scheme::IntraModal, Scheme::NoFeedback] {
        let plan = plan_scheme(&capacity(), n, scheme, 0.5).unwrap();
        for seed in 0..5u64 {
            let schedule = build_schedule(n, capacity().eta, 0, 0.75, 0.0, 0.0).unwrap();
            let slots = realize(&mut ChannelSampler::new(schedule, seed), n);
            let base = record(&plan, n, slots.clone(), seed);
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            for cut in [1, 17, n / 3, n / 2, n - 5] {
                let mut perturbed = slots.clone();
                perturbed[cut..].shuffle(&mut rng);
                for s in &mut perturbed[cut..] {
                    s.s1 = !s.s1;
                }
                let replay = record(&plan, n, perturbed, seed);
                let upto = cut.min(base.len());
                assert!(replay.len() >= upto);
                assert_eq!(base[..upto], replay[..upto], "{scheme:?} seed {seed} cut {cut}");
            }
        }
    }
}

#[test]
fn packets_conserved_every_slot() {
    let cases = [
        (capacity(), Scheme::InterModal),
        (ModeParams::new(0.75, 0.0, 1.0 / 6.0).unwrap(), Scheme::InterModal),
        (ModeParams::new(0.6, 0.2, 0.4).unwrap(), Scheme::IntraModal),
    ];
    let n = 5000;
    for (p, scheme) in cases {
        let plan = plan_scheme(&p, n, scheme, 0.5).unwrap();
        for i in 0..50 {
            let seed = trial_seed(11, i);
            let schedule = build_schedule(n, p.eta, 20, p.delta_a, 0.4, p.delta_b).unwrap();
            let opts = TrialOptions { check_invariants: true, ..Default::default() };
            let out =
                simulate_with(&plan, &schedule, &mut ChannelSampler::new(schedule.clone(), seed), messages_for(&plan, seed), &opts)
                    .unwrap();
            assert!(out.stats.invariant_violations.is_empty(), "{:?}", out.stats.invariant_violations);
            assert_eq!(out.stats.useless_xor_receptions, 0);
            assert_eq!(out.stats.bit_errors, 0);
            for u in 0..2 {
                assert_eq!(out.stats.bits_delivered[u] == out.stats.message_len[u], out.stats.decode_ok[u]);
                assert!(out.stats.bits_delivered[u] <= out.stats.message_len[u]);
            }
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn completes_without_deadline(
        da in 0.0..0.95f64,
        db in 0.0..0.95f64,
        eta in 0.0..=1.0f64,
        scheme in prop_oneof![Just(Scheme::InterModal), Just(Scheme::IntraModal), Just(Scheme::NoFeedback)],
        seed in any::<u64>(),
    ) {
        let (da, db) = if scheme == Scheme::InterModal && da < db { (db, da) } else { (da, db) };
        let p = ModeParams::new(da, db, eta).unwrap();
        let n = 600;
        let plan = plan_scheme(&p, n, scheme, 0.0).unwrap();
        let schedule = build_schedule(n, eta, 0, da, 0.0, db).unwrap();
        let mut source = ChannelSampler::new(schedule.clone(), seed).extended();
        let opts = TrialOptions { deadline: Deadline::Removed { max_slots: 400 * n }, check_invariants: true, record_actions: false };
        let out = simulate_with(&plan, &schedule, &mut source, messages_for(&plan, seed), &opts).unwrap();
        prop_assert_eq!(out.stats.decode_ok, [true, true]);
        prop_assert_eq!(out.stats.bit_errors, 0);
        prop_assert!(out.stats.invariant_violations.is_empty());
    }
}

#[test]
fn raw_and_backlog_lengths_match_expectation() {
    // Per packet: 1/(1−δ_A²) = 16/7 raw slots and δ_A/(1+δ_A) = 3/7 of a
    // packet left in a virtual queue.
    let n = 100_000;
    let p = capacity();
    let plan = plan_scheme(&p, n, Scheme::InterModal, 1.0).unwrap();
    let (mut raw, mut backlog) = (0.0, [0.0, 0.0]);
    let trials = 10;
    for i in 0..trials {
        let s = run_trial(&p, n, 0, 0.0, &plan, trial_seed(3, i)).unwrap();
        raw += s.raw_slots as f64 / (2 * plan.m1) as f64;
        for (b, q) in backlog.iter_mut().zip(s.multicast_backlog) {
            *b += q as f64 / plan.m1 as f64;
        }
    }
    let raw = raw / trials as f64;
    assert!((raw / (16.0 / 7.0) - 1.0).abs() < 0.02, "{raw}");
    for b in backlog {
        let b = b / trials as f64;
        assert!((b / (3.0 / 7.0) - 1.0).abs() < 0.02, "{b}");
    }
}

#[test]
fn multicast_starts_inside_mode_b_only_at_capacity() {
    let n = 35_000;
    let plan = plan_scheme(&capacity(), n, Scheme::InterModal, 0.0).unwrap();
    let s = run_trial(&capacity(), n, 0, 0.0, &plan, 8).unwrap();
    let multicast = s.first_slot_of(Phase::Multicast).unwrap();
    // Raw phases need ≈ 16/7·2·7000 = 32000 slots = the whole of mode A.
    assert!((multicast as f64 - 32_000.0).abs() < 600.0, "{multicast}");
}

#[test]
fn empirical_erasure_within_four_sigma() {
    let n = 60_000;
    let (da, dt, db) = (0.75, 0.3, 0.1);
    let schedule = build_schedule(n, 0.5, 20_000, da, dt, db).unwrap();
    let mut outliers = 0;
    let seeds = 100;
    for i in 0..seeds {
        let slots = realize(&mut ChannelSampler::new(schedule.clone(), trial_seed(9, i)), n);
        let spans = [(ModeKind::NonTransientA, 0..30_000, da), (ModeKind::Transient, 30_000..50_000, dt), (ModeKind::NonTransientB, 50_000..60_000, db)];
        for (kind, range, delta) in spans {
            assert_eq!(schedule.mode_at(range.start + 1).unwrap(), kind);
            let len = range.len() as f64;
            for get in [|s: &SlotState| s.s1, |s: &SlotState| s.s2] {
                let erased = slots[range.clone()].iter().filter(|s| !get(s)).count() as f64 / len;
                if (erased - delta).abs() > 4.0 * (delta * (1.0 - delta) / len).sqrt() {
                    outliers += 1;
                }
            }
        }
    }
    // Six checks per seed, each failing with probability ≈ 6e-5.
    assert!(outliers <= 1, "{outliers}");
}

#[test]
fn users_erase_independently() {
    let n = 200_000;
    let schedule = build_schedule(n, 1.0, 0, 0.5, 0.5, 0.5).unwrap();
    for seed in [1u64, 2, 3] {
        let slots = realize(&mut ChannelSampler::new(schedule.clone(), seed), n);
        let x: Vec<f64> = slots.iter().map(|s| s.s1 as u8 as f64).collect();
        let y: Vec<f64> = slots.iter().map(|s| s.s2 as u8 as f64).collect();
        let mean = |v: &[f64]| v.iter().sum::<f64>() / v.len() as f64;
        let (mx, my) = (mean(&x), mean(&y));
        let cov: f64 = x.iter().zip(&y).map(|(a, b)| (a - mx) * (b - my)).sum::<f64>() / n as f64;
        let sx = (x.iter().map(|a| (a - mx).powi(2)).sum::<f64>() / n as f64).sqrt();
        let sy = (y.iter().map(|b| (b - my).powi(2)).sum::<f64>() / n as f64).sqrt();
        assert!((cov / (sx * sy)).abs() < 0.02);
    }
}

#[test]
fn sampler_is_order_independent() {
    let schedule = build_schedule(1000, 0.3, 50, 0.6, 0.2, 0.1).unwrap();
    let forward = realize(&mut ChannelSampler::new(schedule.clone(), 77), 1000);
    let mut s = ChannelSampler::new(schedule, 77);
    for t in (1..=1000).rev() {
        assert_eq!(s.sample_slot(t).unwrap(), forward[t - 1]);
    }
}
