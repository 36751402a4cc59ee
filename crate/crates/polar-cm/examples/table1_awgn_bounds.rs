//! GA union bounds for the 20 stored 4-channel bi-AWGN instances.
//!
//! Each instance fixes four channel capacities summing to 2.8; the example
//! compares the half-rate N=256 union bound of interleaver-2 against
//! interleaver-1 and 100 random assignments.
//!
//! ```bash
//! cargo run --release -p polar-cm --example table1_awgn_bounds
//! ```

use polar_cm::construction::table1_instances;
use polar_cm::sim::{union_bound_sweep, BoundChannels};

fn main() {
    let instances: Vec<Vec<f64>> = table1_instances().iter().map(|r| r.to_vec()).collect();
    let rows = union_bound_sweep(BoundChannels::Awgn, &instances, 256, (1, 2), 100, 0).unwrap();
    println!("GA union bounds, N=256, R=1/2, 4 bi-AWGN channel types");
    println!(
        "{:>9} {:>24} | {:>12} {:>12} {:>12}",
        "instance", "capacities", "interleaver1", "interleaver2", "min random"
    );
    let mut i2_wins_vs_i1 = 0;
    let mut i2_wins_vs_random = 0;
    for (idx, caps_row) in instances.iter().enumerate() {
        let of_kind = |kind: &str| {
            rows.iter()
                .filter(|r| r.instance == idx + 1 && r.kind == kind)
                .map(|r| r.bound)
                .fold(f64::INFINITY, f64::min)
        };
        let b1 = of_kind("interleaver1");
        let b2 = of_kind("interleaver2");
        let br = of_kind("random");
        if b2 <= b1 {
            i2_wins_vs_i1 += 1;
        }
        if b2 <= br {
            i2_wins_vs_random += 1;
        }
        let caps = caps_row
            .iter()
            .map(|c| format!("{c:.2}"))
            .collect::<Vec<_>>()
            .join(" ");
        println!("{:>9} {:>24} | {:>12.4e} {:>12.4e} {:>12.4e}", idx + 1, caps, b1, b2, br);
    }
    println!("\ninterleaver-2 <= interleaver-1 in {i2_wins_vs_i1}/20 instances");
    println!("interleaver-2 <= min of 100 random in {i2_wins_vs_random}/20 instances");
}
