use proptest::prelude::*;
use rand::Rng;

use shufflecap::capacity::capacity_noisy_shuffle;
use shufflecap::channel::transmit;
use shufflecap::codec::Codec;
use shufflecap::harness::{simulate, sweep, SweepVariable};
use shufflecap::rng::{seeded, trial_rng, Stream};
use shufflecap::{ChannelParams, CodeSpec, InnerCode};

#[test]
fn noiseless_round_trip_over_many_payloads() {
    let params = ChannelParams::new(128, 4.0, 2, 0.0, None).unwrap();
    for spec in [
        CodeSpec::new(InnerCode::Identity, 0),
        CodeSpec::new(InnerCode::Identity, 6),
        CodeSpec::new(InnerCode::ExtendedHamming, 3),
    ] {
        let codec = Codec::new(&spec, &params).unwrap();
        let n = codec.layout().payload_len;
        let mut rng = seeded(1);
        for _ in 0..1000 {
            let payload: Vec<u8> = (0..n).map(|_| rng.random_range(0..2)).collect();
            let sent = codec.encode(&payload).unwrap();
            let (received, _) = transmit(&sent, &params, &mut rng).unwrap();
            let rep = codec.decode(&received).unwrap();
            assert!(rep.frame_ok);
            assert_eq!(rep.recovered_payload, payload);
        }
    }
}

#[test]
fn fer_non_increasing_in_redundancy() {
    let base = ChannelParams::new(512, 6.0, 2, 0.015, None).unwrap();
    let values: Vec<f64> = (0..=12).map(|r| (r * 4) as f64).collect();
    let rows =
        sweep(SweepVariable::R, &values, &base, &CodeSpec::new(InnerCode::ExtendedHamming, 0), 150, 21).unwrap();
    let fer: Vec<f64> = rows.iter().map(|r| r.fer.unwrap()).collect();
    assert!(fer.windows(2).all(|w| w[1] <= w[0]), "{fer:?}");
    assert!(fer[0] > 0.5 && *fer.last().unwrap() == 0.0, "{fer:?}");
}

#[test]
fn sweep_capacity_column_matches_capacity_module() {
    let base = ChannelParams::new(256, 6.0, 2, 0.0, None).unwrap();
    let ps = [0.0, 0.001, 0.01, 0.05, 0.1, 0.2, 0.3, 0.5];
    let rows = sweep(SweepVariable::P, &ps, &base, &CodeSpec::new(InnerCode::Repetition(3), 0), 4, 0).unwrap();
    for (row, &p) in rows.iter().zip(&ps) {
        assert!((row.capacity - capacity_noisy_shuffle(p, 6.0).unwrap()).abs() <= 1e-12);
    }
}

#[test]
fn sweep_beta_capacity_zero_at_or_below_one() {
    let base = ChannelParams::new(256, 6.0, 2, 0.01, None).unwrap();
    let betas = [0.5, 0.9, 1.0, 1.1, 2.0, 4.0];
    let rows = sweep(SweepVariable::Beta, &betas, &base, &CodeSpec::new(InnerCode::Identity, 0), 4, 0).unwrap();
    for row in &rows {
        if row.beta <= 1.0 {
            assert_eq!(row.capacity, 0.0);
            assert_eq!(row.achieved_rate.unwrap_or(0.0), 0.0);
        } else {
            // positive once beta exceeds 1 / (1 - H(0.01))
            assert_eq!(row.capacity > 0.0, row.beta > 1.0 / (1.0 - 0.080_793_135_895_911_93));
        }
    }
}

#[test]
fn sampled_channel_needs_outer_erasure_coding() {
    // with coverage 3 about 5% of strings are never sampled
    let params = ChannelParams::new(256, 5.0, 2, 0.0, Some(3.0)).unwrap();
    let bare = simulate(&params, &CodeSpec::new(InnerCode::Identity, 0), 50, 2).unwrap();
    assert_eq!(bare.fer, 1.0);
    let coded = simulate(&params, &CodeSpec::new(InnerCode::Identity, 40), 50, 2).unwrap();
    assert_eq!(coded.frame_errors, 0);
}

#[test]
fn report_is_reproducible() {
    let params = ChannelParams::new(256, 6.0, 2, 0.01, None).unwrap();
    let spec = CodeSpec::new(InnerCode::ExtendedHamming, 12);
    let a = serde_json::to_string(&simulate(&params, &spec, 100, 77).unwrap()).unwrap();
    let b = serde_json::to_string(&simulate(&params, &spec, 100, 77).unwrap()).unwrap();
    assert_eq!(a, b);
    assert!(!a.contains("wall_time"));
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(32))]

    #[test]
    fn decode_recovers_with_enough_redundancy(seed in any::<u64>(), m in 16usize..200) {
        let params = ChannelParams::new(m, 7.0, 2, 0.003, None).unwrap();
        let spec = CodeSpec::new(InnerCode::ExtendedHamming, m / 4);
        let codec = Codec::new(&spec, &params).unwrap();
        let mut rng = trial_rng(seed, 0, Stream::Payload);
        let payload: Vec<u8> = (0..codec.layout().payload_len).map(|_| rng.random_range(0..2)).collect();
        let sent = codec.encode(&payload).unwrap();
        let (received, trace) = transmit(&sent, &params, &mut trial_rng(seed, 0, Stream::Channel)).unwrap();
        prop_assert_eq!(trace.reconstruct(&sent).unwrap(), received.clone());
        let rep = codec.decode(&received).unwrap();
        if rep.frame_ok {
            prop_assert_eq!(rep.recovered_payload, payload);
        }
    }
}
