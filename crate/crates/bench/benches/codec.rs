use std::hint::black_box;
use std::sync::Arc;

use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion, Throughput};
use rand::seq::index::sample;
use rand::Rng;

use shufflecap::channel::transmit;
use shufflecap::codec::gf::Gf;
use shufflecap::codec::rs::ReedSolomon;
use shufflecap::codec::Codec;
use shufflecap::rng::seeded;
use shufflecap::{ChannelParams, CodeSpec, InnerCode, Pool};

fn rs_decode(c: &mut Criterion) {
    let mut group = c.benchmark_group("rs_decode");
    let gf = Arc::new(Gf::new(13).unwrap());
    for r in [50usize, 200] {
        let rs = ReedSolomon::new(gf.clone(), 4096, 4096 - r).unwrap();
        let mut rng = seeded(1);
        let data: Vec<u32> = (0..4096 - r).map(|_| rng.random_range(0..1 << 13)).collect();
        let cw = rs.encode(&data);
        let erased: Vec<usize> = sample(&mut rng, 4096, r / 2).into_vec();
        let mut word = cw.clone();
        for &i in &erased {
            word[i] = 0;
        }
        for i in sample(&mut rng, 4096, r / 5).into_iter().filter(|i| !erased.contains(i)) {
            word[i] ^= 1;
        }
        group.bench_with_input(BenchmarkId::from_parameter(r), &r, |b, _| {
            b.iter(|| {
                let mut w = word.clone();
                black_box(rs.decode(&mut w, &erased).unwrap());
            })
        });
    }
    group.finish();
}

fn inner_decode(c: &mut Criterion) {
    let mut group = c.benchmark_group("inner_decode");
    let received: Vec<u8> = {
        let mut rng = seeded(2);
        (0..96).map(|_| rng.random_range(0..2)).collect()
    };
    group.throughput(Throughput::Elements(96));
    for name in ["ext-hamming", "table:8,4", "table:15,7", "rep3"] {
        let code: InnerCode = name.parse().unwrap();
        let mut info = vec![0u8; code.info_bits(96)];
        group.bench_function(name, |b| b.iter(|| black_box(code.decode_string(black_box(&received), &mut info))));
    }
    group.finish();
}

fn frame(c: &mut Criterion) {
    let params = ChannelParams::new(4096, 8.0, 2, 0.01, None).unwrap();
    let codec = Codec::new(&CodeSpec::new(InnerCode::ExtendedHamming, 200), &params).unwrap();
    let mut rng = seeded(3);
    let payload: Vec<u8> = (0..codec.layout().payload_len).map(|_| rng.random_range(0..2)).collect();
    let sent: Pool = codec.encode(&payload).unwrap();
    let (received, _) = transmit(&sent, &params, &mut rng).unwrap();

    let mut group = c.benchmark_group("frame_m4096");
    group.sample_size(20);
    group.bench_function("encode", |b| b.iter(|| black_box(codec.encode(&payload).unwrap())));
    group.bench_function("transmit", |b| {
        let mut rng = seeded(4);
        b.iter(|| black_box(transmit(&sent, &params, &mut rng).unwrap()))
    });
    group.bench_function("decode", |b| b.iter(|| black_box(codec.decode(&received).unwrap())));
    group.finish();
}

criterion_group!(benches, rs_decode, inner_decode, frame);
criterion_main!(benches);
