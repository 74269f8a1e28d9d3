use ndarray::Array2;
use rayon::prelude::*;
use std::time::Instant;

fn bench_f32(m: usize, k: usize, n: usize, reps: usize) -> f64 {
    let a = Array2::<f32>::from_elem((m, k), 1.01f32);
    let b = Array2::<f32>::from_elem((k, n), 0.99f32);
    let t0 = Instant::now();
    let mut acc = 0.0f32;
    for _ in 0..reps {
        let c = a.dot(&b);
        acc += c[[0, 0]];
    }
    let dt = t0.elapsed().as_secs_f64();
    let flops = 2.0 * m as f64 * k as f64 * n as f64 * reps as f64;
    let gf = flops / dt / 1e9;
    println!("f32 {}x{}x{} reps={} -> {:.2} GFLOP/s (acc {})", m, k, n, reps, gf, acc);
    gf
}

fn bench_f64(m: usize, k: usize, n: usize, reps: usize) -> f64 {
    let a = Array2::<f64>::from_elem((m, k), 1.01f64);
    let b = Array2::<f64>::from_elem((k, n), 0.99f64);
    let t0 = Instant::now();
    let mut acc = 0.0f64;
    for _ in 0..reps {
        let c = a.dot(&b);
        acc += c[[0, 0]];
    }
    let dt = t0.elapsed().as_secs_f64();
    let flops = 2.0 * m as f64 * k as f64 * n as f64 * reps as f64;
    let gf = flops / dt / 1e9;
    println!("f64 {}x{}x{} reps={} -> {:.2} GFLOP/s (acc {})", m, k, n, reps, gf, acc);
    gf
}

fn main() {
    // shapes like our conv gemms at 64x64 and 32x32
    bench_f32(32, 288, 4096, 30);   // enc0 conv2 at 64x64
    bench_f32(64, 576, 1024, 60);   // enc1 conv2 at 32x32
    bench_f32(128, 1152, 256, 120); // bottleneck conv2
    bench_f32(32, 864, 4096, 30);   // dec0 conv1
    bench_f32(512, 512, 512, 30);   // square reference
    bench_f64(512, 512, 512, 15);
    // rayon scaling check
    let t0 = Instant::now();
    let outs: Vec<f32> = (0..8usize).into_par_iter().map(|_| {
            let a = Array2::<f32>::from_elem((64, 576), 1.01f32);
            let b = Array2::<f32>::from_elem((576, 1024), 0.99f32);
            let mut s = 0.0f32;
            for _ in 0..60 { s += a.dot(&b)[[0,0]]; }
            s
        }).collect();
    let dt = t0.elapsed().as_secs_f64();
    let flops = 8.0 * 60.0 * 2.0 * 64.0 * 576.0 * 1024.0;
    println!("rayon 2-core f32 64x576x1024 -> {:.2} GFLOP/s total ({} outs)", flops / dt / 1e9, outs.len());
}
