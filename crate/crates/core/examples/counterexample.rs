//! The strong B-property fails for general symmetric log-concave measures.
//! For the uniform measure on the parallelogram
//! `K = conv{(−1,−2), (−1,−1), (1,1), (1,2)}` and `K_t = diag(1, eᵗ)K`, the
//! function `f(t) = log(|K_t ∩ K| / |K|)` rises to 0 and then levels off, so it
//! is not concave.
//!
//! ```text
//! cargo run --release --example counterexample
//! ```

use xsec::analysis::{counterexample_curve, counterexample_violation, dilated_intersection};
use xsec::oracle::polygon_area;

fn main() {
    let ts: Vec<f64> = (-8..=8).map(|i| i as f64 * 2.5).collect();
    for p in counterexample_curve(&ts) {
        let bar = if p.f.is_finite() { "#".repeat(((p.f + 12.0).max(0.0) * 4.0) as usize) } else { String::new() };
        println!("t = {:>6.1}  f = {:>9.5}  {bar}", p.t, p.f);
    }

    let far = dilated_intersection(40.0);
    println!("\nfor large t the intersection tends to K ∩ {{|x| ≤ 1/3}}:");
    for [x, y] in far.vertices() {
        println!("  ({x:+.6}, {y:+.6})");
    }
    println!("  area {:.9} (limit 2/3)", polygon_area(&far));

    let c = counterexample_violation();
    println!("\nf at {:?} = {:.6?}", c.triple, c.values);
    println!("midpoint margin f(10) − (f(0) + f(20))/2 = {:.6}", c.margin);
}
