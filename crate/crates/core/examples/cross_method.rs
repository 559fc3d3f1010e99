//! Which representation is the better estimator? Runs both formulas on the
//! same random subspaces and prints the standard errors side by side,
//! together with an exact or hit-or-miss reference.
//!
//! With shared draws the two columns coincide: by Cauchy–Binet, the `k`-minors
//! of a basis of `H` and the complementary minors of an orthonormal basis of
//! `H⊥` agree up to one common factor, and the prefactors absorb it. The two
//! formulas are the same random variable written in two ways.
//!
//! ```text
//! cargo run --release --example cross_method -- [instances] [samples]
//! ```

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use xsec::{
    codim_profile, dim_profile, estimate_codim, estimate_dim, volume_k1, volume_k2, volume_mc, DilationVector, GivenAs,
    MCConfig, SectionBody, SubspaceSpec,
};

fn main() -> xsec::Result<()> {
    let mut args = std::env::args().skip(1);
    let instances: usize = args.next().and_then(|s| s.parse().ok()).unwrap_or(12);
    let samples: u64 = args.next().and_then(|s| s.parse().ok()).unwrap_or(200_000);
    let cfg = MCConfig::new(samples, 100, 42)?;
    let mut rng = ChaCha8Rng::seed_from_u64(2024);

    println!(
        "{:>2} {:>3} {:>13} {:>11} {:>11} {:>9} {:>9} {:>8}",
        "n", "dim", "reference", "codim", "dim", "se codim", "se dim", "ratio"
    );
    for _ in 0..instances {
        let n = rng.gen_range(2..=6);
        let d = rng.gen_range(1..n);
        let rows = (0..d).map(|_| (0..n).map(|_| rng.gen_range(-1.0..1.0)).collect()).collect();
        let Ok(h) = SubspaceSpec::new(n, GivenAs::Subspace, rows) else { continue };
        let a = DilationVector::new((0..n).map(|_| rng.gen_range(0.5..2.0)).collect())?;

        // an orthonormal basis keeps the hit-or-miss cube tight
        let body = SectionBody::new(dim_profile(&h, true), a.clone())?;
        let reference = match d {
            1 => format!("{:.5}", volume_k1(&body)?),
            2 => format!("{:.5}", volume_k2(&body)?),
            _ => {
                let mc = volume_mc(&body, &cfg)?;
                format!("{:.3}±{:.3}", mc.value, mc.stderr)
            }
        };
        let c = estimate_codim(&codim_profile(&h)?, &a, &cfg)?;
        let m = estimate_dim(&dim_profile(&h, false), &a, &cfg)?;
        println!(
            "{n:>2} {d:>3} {reference:>13} {:>11.5} {:>11.5} {:>9.2e} {:>9.2e} {:>8.2}{}",
            c.value,
            m.value,
            c.stderr,
            m.stderr,
            c.stderr / m.stderr,
            if c.heavy_tail || m.heavy_tail { "  heavy tail" } else { "" }
        );
    }
    println!("\nratio > 1 would mean the dimension formula had the smaller standard error");
    Ok(())
}
