//! `½e^{−|x|} = E[(4πY)^{−1/2} e^{−x²/(4Y)}]` with `Y ~ Exp(1)`: the Laplace
//! density is a Gaussian scale mixture. Both volume formulas rest on it.
//! The expectation is evaluated by graded Gauss–Legendre quadrature.
//!
//! ```text
//! cargo run --release --example density_identity
//! ```

use xsec::density_identity_check;

fn main() -> xsec::Result<()> {
    println!("{:>5} {:>10} {:>10} {:>10}", "x", "q = 100", "q = 400", "q = 1600");
    for x in [0.0, 0.5, 1.0, 3.0, 6.0] {
        let errs = [100, 400, 1600].map(|q| density_identity_check(x, q));
        println!("{x:>5} {:>10.1e} {:>10.1e} {:>10.1e}", errs[0].clone()?, errs[1].clone()?, errs[2].clone()?);
    }
    Ok(())
}
