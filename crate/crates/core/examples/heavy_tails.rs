//! Finite mean is guaranteed, finite variance is not. For `H = span{e₁}` the
//! codimension integrand is `a₁/√Y₂` up to constants, whose second moment
//! diverges. Batch-means error bars then fluctuate between seeds, and
//! median-of-means offers a more robust centre.
//!
//! ```text
//! cargo run --release --example heavy_tails
//! ```

use xsec::{codim_profile, estimate_codim, Aggregation, DilationVector, GivenAs, MCConfig, SubspaceSpec};

fn main() -> xsec::Result<()> {
    let h = SubspaceSpec::new(2, GivenAs::Subspace, vec![vec![1.0, 0.0]])?;
    let a = DilationVector::new(vec![1.5, 0.4])?;
    let p = codim_profile(&h)?;
    println!("exact length 2a₁ = 3");
    for seed in 1..=5 {
        let cfg = MCConfig::new(200_000, 100, seed)?;
        let mean = estimate_codim(&p, &a, &cfg)?;
        let mom = estimate_codim(&p, &a, &cfg.with_aggregation(Aggregation::MedianOfMeans))?;
        println!(
            "seed {seed}: mean {:.4} ± {:.4}   median-of-means {:.4} ± {:.4}   heavy-tail flag {}",
            mean.value, mean.stderr, mom.value, mom.stderr, mean.heavy_tail
        );
    }
    Ok(())
}
