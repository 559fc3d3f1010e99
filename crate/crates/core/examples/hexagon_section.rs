//! The plane `x₁ + x₂ + x₃ = 0` cuts the cross-polytope in a regular hexagon
//! of area 3√3/4. Both Monte Carlo formulas and the exact polygon oracle
//! should land on it.
//!
//! ```text
//! cargo run --release --example hexagon_section
//! ```

use xsec::oracle::section_polygon;
use xsec::{
    codim_profile, dim_profile, estimate_codim, estimate_dim, volume_k2, DilationVector, GivenAs, MCConfig,
    SectionBody, SubspaceSpec,
};

fn main() -> xsec::Result<()> {
    let h = SubspaceSpec::new(3, GivenAs::Complement, vec![vec![1.0, 1.0, 1.0]])?;
    let a = DilationVector::ones(3);
    let cfg = MCConfig::new(1_000_000, 100, 42)?;
    let exact = 3.0 * 3f64.sqrt() / 4.0;

    let body = SectionBody::new(dim_profile(&h, false), a.clone())?;
    let poly = section_polygon(&body)?;
    println!("section body has {} vertices", poly.vertices().len());
    println!("exact            {exact:.6}");
    println!("polygon oracle   {:.6}", volume_k2(&body)?);

    for est in [estimate_codim(&codim_profile(&h)?, &a, &cfg)?, estimate_dim(&dim_profile(&h, false), &a, &cfg)?] {
        let z = (est.value - exact) / est.stderr;
        println!("{:<16} {:.6} ± {:.6}  (z = {z:+.2})", est.method.name(), est.value, est.stderr);
    }

    // stretching one axis changes the answer; the oracle and estimators follow
    let a = DilationVector::new(vec![1.0, 2.0, 0.5])?;
    let body = SectionBody::new(dim_profile(&h, false), a.clone())?;
    let est = estimate_dim(&dim_profile(&h, false), &a, &cfg)?;
    println!("\na = (1, 2, 0.5): oracle {:.6}, dim estimate {:.6} ± {:.6}", volume_k2(&body)?, est.value, est.stderr);
    Ok(())
}
