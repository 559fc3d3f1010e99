//! Mixed discriminants of positive semidefinite matrices: the coefficients of
//! `det(Σ xᵢAᵢ)`, all nonnegative, and the convexity of
//! `t ↦ log det(Σ e^{tᵢ} vᵢvᵢᵀ)` that follows from it.
//!
//! ```text
//! cargo run --release --example mixed_discriminants
//! ```

use xsec::analysis::{det_expansion_check, logdet_convexity_check, mixed_discriminant};
use xsec::numkit::SymMatrix;

fn main() -> xsec::Result<()> {
    let a = SymMatrix::from_upper(&[vec![2.0, 1.0], vec![0.0, 3.0]])?;
    let b = SymMatrix::diagonal(&[1.0, 4.0]);

    // for 2×2 matrices D(A, B) = (a₁₁b₂₂ + a₂₂b₁₁ − 2a₁₂b₁₂)/2
    let d = mixed_discriminant(&[a.clone(), b.clone()])?;
    println!("D(A, B) = {} (scale {})", d.value, d.scale());
    println!("D(A, A) = {} = det A = {}", mixed_discriminant(&[a.clone(), a.clone()])?.value, a.det());

    let x = [0.7, -1.3];
    println!("expansion residual at x = {x:?}: {:.1e}", det_expansion_check(&[a, b], &x)?);

    // three rank-one terms in R²
    let vs = vec![vec![1.0, 0.0], vec![0.6, 0.8], vec![-0.3, 1.0]];
    let r = logdet_convexity_check(&vs, 10_000, 7)?;
    println!(
        "log det convexity: max midpoint margin {:.1e} over {} pairs ({} singular)",
        r.max_margin, r.evaluated, r.skipped
    );
    Ok(())
}
