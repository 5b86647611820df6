//! Homodyne one arm of a two-mode squeezed state and watch the other arm
//! turn into a squeezed state, with detector efficiency controlling how
//! much squeezing survives.
//!
//! Run with: cargo run --example remote_state_preparation

use bellcov::{homodyne, remote_state_prep, CovarianceMatrix, Efficiency, Quadrature};

fn main() -> bellcov::Result<()> {
    let mu = 2.0;
    let epr = CovarianceMatrix::epr(mu)?;
    println!("EPR state, mu = {mu}:{}", epr.matrix());

    println!("q-homodyne of the second mode, remote state vs efficiency:");
    println!("{:>6} {:>12} {:>12}", "eta", "var(q)", "var(p)");
    for eta in [1.0, 0.9, 0.75, 0.5, 0.25, 0.1] {
        let out = homodyne(&epr, Quadrature::Q, Efficiency::new(eta)?)?;
        let m = out.matrix();
        println!("{eta:>6} {:>12.6} {:>12.6}", m[(0, 0)], m[(1, 1)]);

        // The one-line closed form gives the same state.
        let closed = remote_state_prep(mu, Quadrature::Q, Efficiency::new(eta)?)?;
        assert!(bellcov::mat::scaled_deviation(out.matrix(), closed.matrix()) < 1e-12);
    }

    println!();
    println!("Landmarks:");
    println!("  eta = 1   squeezes q all the way down to 1/mu = {}", 1.0 / mu);
    println!("  eta = 1/2 leaves q exactly at the vacuum variance 1");
    println!("  eta -> 0  approaches the unmeasured thermal variance mu = {mu}");

    // Detecting p instead squeezes the conjugate quadrature.
    let out = homodyne(&epr, Quadrature::P, Efficiency::perfect())?;
    println!("\np-homodyne at eta = 1 gives the mirror image:{}", out.matrix());

    let report = out.validate();
    println!(
        "Remote state bona fide: {} (min uncertainty eigenvalue {:.3e})",
        report.bona_fide, report.min_uncertainty_eigenvalue
    );
    Ok(())
}
