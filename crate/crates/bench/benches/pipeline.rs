use std::hint::black_box;
use std::time::Duration;

use criterion::{criterion_group, criterion_main, Criterion};

use isar_bench::{test_echo, test_image};
use isar_core::enhancer::{forward, init_network, train, TrainConfig};
use isar_core::rd_imaging::{fft_1d, rd_image};
use isar_core::rng::SplitMix64;
use isar_core::tensor_nn::{conv2d_backward, conv2d_forward, ConvLayerParams, Tensor};
use isar_core::Complex;

fn bench_fft(c: &mut Criterion) {
    let mut rng = SplitMix64::new(1);
    let signal: Vec<Complex> =
        (0..1024).map(|_| Complex::new(rng.next_normal(), rng.next_normal())).collect();
    c.bench_function("fft_1024_forward", |b| {
        b.iter(|| fft_1d(black_box(&signal), false).unwrap())
    });
}

fn bench_rd_image(c: &mut Criterion) {
    let echo = test_echo(128);
    c.bench_function("rd_image_128", |b| b.iter(|| rd_image(black_box(&echo)).unwrap()));
}

fn bench_conv(c: &mut Criterion) {
    let mut rng = SplitMix64::new(2);
    let input =
        Tensor::from_vec(128, 128, 64, (0..128 * 128 * 64).map(|_| rng.next_normal()).collect())
            .unwrap();
    let kernels: Vec<f64> = (0..9 * 64 * 64).map(|_| rng.next_normal() * 0.06).collect();
    let layer = ConvLayerParams::new(64, 64, kernels, vec![0.0; 64]).unwrap();
    let mut group = c.benchmark_group("conv_64ch_128px");
    group.sample_size(10);
    group.measurement_time(Duration::from_secs(8));
    group.bench_function("forward", |b| {
        b.iter(|| conv2d_forward(black_box(&input), black_box(&layer)).unwrap())
    });
    let out = conv2d_forward(&input, &layer).unwrap();
    group.bench_function("backward", |b| {
        b.iter(|| conv2d_backward(black_box(&input), black_box(&layer), black_box(&out)).unwrap())
    });
    group.finish();
}

fn bench_network(c: &mut Criterion) {
    let y = test_image(64).to_tensor();
    let params = init_network(1);
    let mut group = c.benchmark_group("network_64px");
    group.sample_size(10);
    group.measurement_time(Duration::from_secs(8));
    group.bench_function("forward", |b| {
        b.iter(|| forward(black_box(&params), black_box(&y)).unwrap())
    });
    let img = test_image(64);
    group.bench_function("train_10_epochs", |b| {
        b.iter(|| {
            let config = TrainConfig { epochs: 10, ..TrainConfig::new(0.2, 1) };
            train(black_box(&img), &config).unwrap()
        })
    });
    group.finish();
}

criterion_group!(benches, bench_fft, bench_rd_image, bench_conv, bench_network);
criterion_main!(benches);
