//! Random midpoint test of `t ↦ log vol(diag(eᵗ)B₁ⁿ ∩ H)`. Every triple is
//! evaluated with common random numbers, so the margin
//! `F(mid) − (F(t₀) + F(t₁))/2` is resolved far below the noise of each
//! individual estimate.
//!
//! ```text
//! cargo run --release --example logconcavity_scan -- [triples]
//! ```

use xsec::analysis::{check_triple, logconcavity_scan, Verdict};
use xsec::section::ProfileMode;
use xsec::{GivenAs, LogDilation, MCConfig, SubspaceSpec};

fn main() -> xsec::Result<()> {
    let triples: usize = std::env::args().nth(1).and_then(|s| s.parse().ok()).unwrap_or(40);
    let cfg = MCConfig::new(100_000, 100, 42)?;
    let h = SubspaceSpec::new(4, GivenAs::Subspace, vec![vec![1.0, 2.0, 0.0, -1.0], vec![0.0, 1.0, 1.0, 1.0]])?;

    for mode in [ProfileMode::Codim, ProfileMode::Dim] {
        let report = logconcavity_scan(&h, triples, 2.0, &cfg, mode)?;
        let worst =
            report.triples.iter().map(|r| r.margin / r.stderr.max(f64::MIN_POSITIVE)).fold(f64::INFINITY, f64::min);
        println!(
            "{:<5}: {} consistent, {} inconclusive, {} violations; smallest margin/stderr {worst:.1}",
            mode.name(),
            report.count(Verdict::Consistent),
            report.count(Verdict::Inconclusive),
            report.violations()
        );
    }

    // along the diagonal direction F is affine, so the margin vanishes
    let t0 = LogDilation::new(vec![0.3, -1.0, 0.8, 0.1])?;
    let flat = check_triple(&h, &t0, &t0.shifted(1.5), &cfg, ProfileMode::Codim)?;
    println!("diagonal triple: margin {:.1e} ({:?})", flat.margin, flat.verdict);
    Ok(())
}
