//! Heterodyne detection measures both quadratures at once. On one arm of an
//! EPR pair it projects the other arm onto a coherent state: the identity
//! covariance, no matter how strong the initial squeezing.
//!
//! Run with: cargo run --example heterodyne_projection

use bellcov::{bell_like, heterodyne, CovarianceMatrix, Efficiency, Mat};

fn main() -> bellcov::Result<()> {
    let perfect = Efficiency::perfect();

    println!("Heterodyne on one EPR arm, ideal detectors:");
    for mu in [1.0, 2.0, 10.0, 100.0] {
        let epr = CovarianceMatrix::epr(mu)?;
        let out = heterodyne(&epr, perfect, perfect)?;
        let dev = (out.matrix() - Mat::identity(2, 2)).abs().max();
        println!("  mu = {mu:>5}: deviation from the identity = {dev:.3e}");
    }
    println!("The conditional state is a coherent state for every mu.\n");

    // Lossy detectors leave some thermal excess behind.
    let epr = CovarianceMatrix::epr(2.0)?;
    println!("{:>6} {:>12} {:>12}", "eta", "var(q)", "var(p)");
    for eta in [1.0, 0.8, 0.5, 0.2] {
        let e = Efficiency::new(eta)?;
        let out = heterodyne(&epr, e, e)?;
        let m = out.matrix();
        println!("{eta:>6} {:>12.6} {:>12.6}", m[(0, 0)], m[(1, 1)]);
    }
    println!();

    // A heterodyne is a balanced Bell detection against an ancilla vacuum:
    // mixing the measured mode with vacuum on a 50:50 splitter and homodyning
    // both outputs reproduces the heterodyne outcome exactly.
    let with_ancilla = epr.append_vacuum_mode();
    let via_bell = bell_like(&with_ancilla, 0.5, perfect, perfect)?;
    let direct = heterodyne(&epr, perfect, perfect)?;
    let gap = (via_bell.matrix() - direct.matrix()).abs().max();
    println!("Bell-with-vacuum route vs direct heterodyne: max gap = {gap:.3e}");
    Ok(())
}
