//! Compare the closed-form cumulant and its derivative against brute-force
//! enumeration of every reduced outcome.
//!
//! ```bash
//! cargo run --release --example oracle_check -- 2000
//! ```

use eef_textcat::eef::{beta_vector, cumulant_k1, cumulant_k1_derivative};
use eef_textcat::oracle::{enumerate, exact_cumulant, exact_embedded_moment};
use eef_textcat::verify::{run_verify, VerifyConfig};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let cases: usize = std::env::args().nth(1).map(|s| s.parse()).transpose()?.unwrap_or(1000);

    let reference = [0.25, 0.75];
    let table = enumerate(&reference, 2)?;
    for (outcome, p) in table.outcomes.iter().zip(&table.probs) {
        println!("z = {outcome:?}  p = {p:.4}");
    }

    let beta = beta_vector(&[0.5, 0.5], &reference)?;
    for theta in [0.0, 0.5, 1.0] {
        println!(
            "theta {theta}: K1 closed {:.12} enumerated {:.12}  K1' closed {:.12} enumerated {:.12}",
            cumulant_k1(theta, 2.0, &beta, &reference),
            exact_cumulant(&reference, &beta, theta, 2)?,
            cumulant_k1_derivative(theta, 2.0, &beta, &reference),
            exact_embedded_moment(&reference, &beta, theta, 2)?
        );
    }

    println!("\nrandomized suite, largest deviations:");
    println!("{}", run_verify(&VerifyConfig { cases, seed: 0 })?);
    Ok(())
}
