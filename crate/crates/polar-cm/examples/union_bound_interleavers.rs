//! BLER union bounds over two BECs for the three assignment families.
//!
//! Sweeps pairs of erasure channels with average capacity 0.7 and compares
//! the half-rate union bound of the cyclic assignment (interleaver-2), the
//! block assignment (interleaver-1) and the best of 100 seeded random
//! assignments.
//!
//! ```bash
//! cargo run --release -p polar-cm --example union_bound_interleavers
//! ```

use polar_cm::construction::{bec_evolve, select_info_set, union_bound};
use polar_cm::interleave::{interleaver1, interleaver2, random_interleaver};

fn bound(assignment: &polar_cm::interleave::ChannelAssignment, zs: &[f64], k: usize) -> f64 {
    let profile = bec_evolve(assignment, zs).unwrap();
    let info = select_info_set(&profile, k).unwrap();
    union_bound(&profile, &info)
}

fn main() {
    let n = 256;
    let k = n / 2;
    println!("Union bounds for N={n}, R=1/2, two BECs of average capacity 0.7");
    println!(
        "{:>6} {:>6} | {:>12} {:>12} {:>12}",
        "I(W1)", "I(W2)", "interleaver1", "interleaver2", "best random"
    );
    for step in 0..=6 {
        let d = step as f64 * 0.05;
        let caps = [0.7 - d, 0.7 + d];
        let zs: Vec<f64> = caps.iter().map(|c| 1.0 - c).collect();
        let b1 = bound(&interleaver1(n, 2).unwrap(), &zs, k);
        let b2 = bound(&interleaver2(n, 2).unwrap(), &zs, k);
        let best_random = (0..100)
            .map(|seed| bound(&random_interleaver(n, 2, seed).unwrap(), &zs, k))
            .fold(f64::INFINITY, f64::min);
        println!(
            "{:>6.2} {:>6.2} | {:>12.5e} {:>12.5e} {:>12.5e}",
            caps[0], caps[1], b1, b2, best_random
        );
        assert!(b2 <= b1 && b2 <= best_random);
    }
    println!("\nThe cyclic assignment gives the lowest bound at every point.");
}
