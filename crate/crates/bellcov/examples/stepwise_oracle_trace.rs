//! Replay a Bell-like detection as explicit physical steps: dilate each lossy
//! detector into a beam splitter against vacuum, apply symplectics, trace out
//! the loss ports, and condition on the homodyne outcomes one at a time.
//! The stepwise route uses no detection formulas, so its agreement with the
//! closed form is a genuine cross-check, and the trace shows every
//! intermediate covariance matrix.
//!
//! Run with: cargo run --example stepwise_oracle_trace

use bellcov::oracle::{bell_like_stepwise, AGREEMENT_RTOL};
use bellcov::{bell_like, CovarianceMatrix, Efficiency};

fn main() -> bellcov::Result<()> {
    let input = CovarianceMatrix::random(3, 42)?;
    let eta = Efficiency::new(0.8)?;
    let eta_prime = Efficiency::new(0.9)?;

    let closed = bell_like(&input, 0.5, eta, eta_prime)?;
    let (stepped, trace) = bell_like_stepwise(&input, 0.5, eta, eta_prime)?;

    println!("Pipeline for a Bell-like detection on a random 3-mode state:");
    for (i, step) in trace.steps().iter().enumerate() {
        println!(
            "  step {i}: {:<32} [{:<12}] dim {}",
            step.label,
            step.kind.to_string(),
            step.matrix.nrows()
        );
    }

    let dev = bellcov::mat::scaled_deviation(stepped.matrix(), closed.matrix());
    println!("\nClosed form vs stepwise: scaled deviation = {dev:.3e}");
    assert!(dev < AGREEMENT_RTOL);

    // Individual steps are addressable by label.
    let after_splitter = trace.find("bell-splitter").expect("splitter step");
    println!(
        "\nState after the Bell splitter (still {} modes):{}",
        after_splitter.matrix.nrows() / 2,
        after_splitter.matrix
    );
    println!("Conditional output:{}", stepped.matrix());
    Ok(())
}
