//! End-to-end acceptance gates for the detection formulas and the CLI.
//!
//! Each test is one numbered criterion and prints a single PASS/FAIL line
//! (run with `--nocapture` to see them on success). Tolerances are pinned
//! here as constants; loosening them is a behavior change, not a cleanup.

use std::process::Command;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use bellcov::document::CmDocument;
use bellcov::mat::{self, Mat, Quadrature};
use bellcov::oracle::{self, BELL_SPLITTER_LABEL};
use bellcov::{
    bell_like, heterodyne, homodyne, standard_bell, CovarianceMatrix, Efficiency,
};

/// Closed form vs stepwise pipeline (criteria 1 and 2).
const ORACLE_RTOL: f64 = 1e-10;

/// Closed form vs closed form (criteria 3, 4, 5, 7).
const COHERENCE_TOL: f64 = 1e-12;

/// Smallest admissible uncertainty eigenvalue (criterion 6).
const PHYSICALITY_TOL: f64 = -1e-9;

/// Zero-information drift bound prefactor (criterion 8).
const ZERO_INFO_PREFACTOR: f64 = 1e-4;

fn report(id: u32, what: &str, detail: String, pass: bool) {
    let verdict = if pass { "PASS" } else { "FAIL" };
    println!("criterion {id} ({what}): {verdict} [{detail}]");
    assert!(pass, "criterion {id} ({what}) failed: {detail}");
}

fn eta(value: f64) -> Efficiency {
    Efficiency::new(value).unwrap()
}

/// Deterministic corpus: states with 1 to 4 surviving modes plus the two
/// that get measured.
fn corpus(count: usize, base_seed: u64) -> Vec<CovarianceMatrix> {
    (0..count)
        .map(|i| {
            let surviving = 1 + i % 4;
            CovarianceMatrix::random(surviving + 2, base_seed + i as u64).unwrap()
        })
        .collect()
}

#[test]
fn criterion_1_oracle_equivalence_ideal() {
    let mut params = ChaCha8Rng::seed_from_u64(0x01);
    let mut worst = 0.0_f64;
    for v in corpus(1000, 10_000) {
        let t = params.random_range(0.0..=1.0);
        let ideal = Efficiency::perfect();
        let closed = bell_like(&v, t, ideal, ideal).unwrap();
        let (stepwise, _) = oracle::bell_like_stepwise(&v, t, ideal, ideal).unwrap();
        worst = worst.max(mat::scaled_deviation(closed.matrix(), stepwise.matrix()));
    }
    report(
        1,
        "ideal bell-like matches the stepwise pipeline",
        format!("1000 states, worst scaled deviation {worst:.3e}, bound {ORACLE_RTOL:.0e}"),
        worst <= ORACLE_RTOL,
    );
}

#[test]
fn criterion_2_oracle_equivalence_inefficient() {
    let mut params = ChaCha8Rng::seed_from_u64(0x02);
    let mut worst = 0.0_f64;
    for v in corpus(1000, 10_000) {
        let t = params.random_range(0.0..=1.0);
        let e1 = eta(params.random_range(0.1..=1.0));
        let e2 = eta(params.random_range(0.1..=1.0));
        let closed = bell_like(&v, t, e1, e2).unwrap();
        let (stepwise, _) = oracle::bell_like_stepwise(&v, t, e1, e2).unwrap();
        worst = worst.max(mat::scaled_deviation(closed.matrix(), stepwise.matrix()));
    }
    report(
        2,
        "inefficient bell-like matches the stepwise pipeline",
        format!("1000 states, worst scaled deviation {worst:.3e}, bound {ORACLE_RTOL:.0e}"),
        worst <= ORACLE_RTOL,
    );
}

#[test]
fn criterion_3_specialization_coherence() {
    let mut params = ChaCha8Rng::seed_from_u64(0x03);
    let mut worst_bell = 0.0_f64;
    for v in corpus(200, 20_000) {
        let e1 = eta(params.random_range(0.1..=1.0));
        let e2 = eta(params.random_range(0.1..=1.0));
        let reduced = standard_bell(&v, e1, e2).unwrap();
        let general = bell_like(&v, 0.5, e1, e2).unwrap();
        worst_bell = worst_bell.max(mat::scaled_deviation(reduced.matrix(), general.matrix()));
    }

    let mut worst_het = 0.0_f64;
    for i in 0..200usize {
        let v = CovarianceMatrix::random(2 + i % 4, 21_000 + i as u64).unwrap();
        let e1 = eta(params.random_range(0.1..=1.0));
        let e2 = eta(params.random_range(0.1..=1.0));
        let direct = heterodyne(&v, e1, e2).unwrap();
        let embedded = bell_like(&v.append_vacuum_mode(), 0.5, e1, e2).unwrap();
        worst_het = worst_het.max(mat::scaled_deviation(direct.matrix(), embedded.matrix()));
    }

    let worst = worst_bell.max(worst_het);
    report(
        3,
        "standard bell and heterodyne are coherent specializations",
        format!(
            "200+200 states, worst deviation {worst:.3e} \
             (bell {worst_bell:.3e}, heterodyne {worst_het:.3e}), bound {COHERENCE_TOL:.0e}"
        ),
        worst <= COHERENCE_TOL,
    );
}

#[test]
fn criterion_4_remote_state_preparation_closed_forms() {
    let mut worst = 0.0_f64;
    for mu in [1.0, 1.5, 2.0, 5.0] {
        for e in [0.5, 1.0] {
            for quad in [Quadrature::Q, Quadrature::P] {
                let v = CovarianceMatrix::epr(mu).unwrap();
                let out = homodyne(&v, quad, eta(e)).unwrap();

                let conditioned = (e + (1.0 - e) * mu) / (e * mu + 1.0 - e);
                let (vq, vp) = match quad {
                    Quadrature::Q => (conditioned, mu),
                    Quadrature::P => (mu, conditioned),
                };
                let expected = Mat::from_row_slice(2, 2, &[vq, 0.0, 0.0, vp]);
                worst = worst.max(mat::max_abs(&(out.matrix() - &expected)));

                // The two special points have simple exact values.
                if e == 1.0 {
                    assert!((conditioned - 1.0 / mu).abs() <= COHERENCE_TOL);
                }
                if e == 0.5 {
                    assert!((conditioned - 1.0).abs() <= COHERENCE_TOL);
                }
            }
        }
    }
    report(
        4,
        "homodyne on EPR reproduces the remote-state closed forms",
        format!("16 cases, worst deviation {worst:.3e}, bound {COHERENCE_TOL:.0e}"),
        worst <= COHERENCE_TOL,
    );
}

#[test]
fn criterion_5_post_splitter_blocks() {
    let mut params = ChaCha8Rng::seed_from_u64(0x05);
    let mut worst = 0.0_f64;
    for v in corpus(200, 50_000) {
        let t: f64 = params.random_range(0.0..=1.0);
        let ideal = Efficiency::perfect();
        let (_, trace) = oracle::bell_like_stepwise(&v, t, ideal, ideal).unwrap();
        let mixed = trace
            .find(BELL_SPLITTER_LABEL)
            .expect("the bell trace always records the splitter step");
        let after = CovarianceMatrix::new(mixed.matrix.clone())
            .unwrap()
            .partition()
            .unwrap();
        let before = v.partition().unwrap();

        let (ct, cr) = (t.sqrt(), (1.0 - t).sqrt());
        let root = (t * (1.0 - t)).sqrt();
        let c1 = ct * &before.c1 + cr * &before.c2;
        let c2 = -cr * &before.c1 + ct * &before.c2;
        let dsum = &before.d + before.d.transpose();
        let b1 = t * &before.b1 + (1.0 - t) * &before.b2 + root * &dsum;
        let b2 = t * &before.b2 + (1.0 - t) * &before.b1 - root * &dsum;
        let d = root * (&before.b2 - &before.b1) + t * &before.d
            - (1.0 - t) * before.d.transpose();

        for (got, expected) in [
            (&after.a, &before.a),
            (&after.c1, &c1),
            (&after.c2, &c2),
            (&after.b1, &b1),
            (&after.b2, &b2),
            (&after.d, &d),
        ] {
            worst = worst.max(mat::max_abs(&(got - expected)));
        }
    }
    report(
        5,
        "post-splitter trace matches the explicit block equations",
        format!("200 states x 6 blocks, worst deviation {worst:.3e}, bound {COHERENCE_TOL:.0e}"),
        worst <= COHERENCE_TOL,
    );
}

#[test]
fn criterion_6_outputs_stay_physical() {
    let mut params = ChaCha8Rng::seed_from_u64(0x06);
    let mut worst = f64::INFINITY;
    let mut cases = 0usize;
    for (i, v) in corpus(1000, 60_000).into_iter().enumerate() {
        let e1 = eta(params.random_range(0.1..=1.0));
        let e2 = eta(params.random_range(0.1..=1.0));
        let t = params.random_range(0.0..=1.0);
        let out = match i % 5 {
            0 => bell_like(&v, t, e1, e2).unwrap(),
            1 => standard_bell(&v, e1, e2).unwrap(),
            2 => heterodyne(&v, e1, e2).unwrap(),
            3 => homodyne(&v, Quadrature::Q, e1).unwrap(),
            _ => homodyne(&v, Quadrature::P, e1).unwrap(),
        };
        let check = out.validate();
        worst = worst.min(check.min_uncertainty_eigenvalue);
        cases += 1;
        if !check.bona_fide {
            break;
        }
    }
    report(
        6,
        "every detection output on physical input stays physical",
        format!(
            "{cases} outputs across all five detections, \
             worst uncertainty eigenvalue {worst:.3e}, bound {PHYSICALITY_TOL:.0e}"
        ),
        cases == 1000 && worst >= PHYSICALITY_TOL,
    );
}

#[test]
fn criterion_7_pseudoinverse_routes_agree() {
    let mut params = ChaCha8Rng::seed_from_u64(0x07);
    let mut worst = 0.0_f64;
    for _ in 0..200 {
        // Random positive-definite 2x2 block: diagonal in [0.5, 3] and an
        // off-diagonal strictly inside the positivity disc.
        let a: f64 = params.random_range(0.5..=3.0);
        let d: f64 = params.random_range(0.5..=3.0);
        let off = params.random_range(-0.9..=0.9) * (a * d).sqrt();
        let b = Mat::from_row_slice(2, 2, &[a, off, off, d]);

        for quad in [Quadrature::Q, Quadrature::P] {
            let closed = mat::projected_pseudoinverse(&b, quad).unwrap();
            let projected = quad.projector() * &b * quad.projector();
            let general = bellcov::general_pseudoinverse(&projected);
            worst = worst.max(mat::max_abs(&(&closed - &general)));
        }
    }
    report(
        7,
        "closed-form projected pseudoinverse matches the SVD route",
        format!("200 blocks x 2 quadratures, worst deviation {worst:.3e}, bound {COHERENCE_TOL:.0e}"),
        worst <= COHERENCE_TOL,
    );
}

#[test]
fn criterion_8_zero_information_limit() {
    let mut params = ChaCha8Rng::seed_from_u64(0x08);
    let tiny = eta(1e-6);
    let mut pass = true;
    let mut worst_ratio = 0.0_f64;
    for v in corpus(100, 80_000) {
        let t = params.random_range(0.0..=1.0);
        let out = bell_like(&v, t, tiny, tiny).unwrap();
        let p = v.partition().unwrap();
        let c_norm = mat::max_abs(&p.c1).max(mat::max_abs(&p.c2));
        let drift = mat::max_abs(&(out.matrix() - &p.a));
        let bound = ZERO_INFO_PREFACTOR * c_norm * c_norm;
        worst_ratio = worst_ratio.max(drift / bound);
        pass &= drift < bound;
    }
    report(
        8,
        "vanishing efficiency erases the measurement",
        format!("100 states, worst drift at {worst_ratio:.3e} of the bound"),
        pass,
    );
}

// ---- criterion 9: the CLI contract ---------------------------------------

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_bellcov"))
}

fn run(args: &[&str]) -> std::process::Output {
    bin().args(args).output().expect("binary runs")
}

fn exit_code(output: &std::process::Output) -> i32 {
    output.status.code().expect("no signal termination")
}

#[test]
fn criterion_9_cli_contract() {
    let dir = tempfile::tempdir().unwrap();
    let path = |name: &str| dir.path().join(name).to_str().unwrap().to_string();
    let mut failures: Vec<String> = Vec::new();
    let mut check = |what: &str, ok: bool| {
        if !ok {
            failures.push(what.to_string());
        }
    };

    // Round trip: gen -> validate -> detect reproduces the criterion 4
    // closed forms from files.
    let mut worst = 0.0_f64;
    for (mu, mu_text) in [(1.0, "1"), (1.5, "1.5"), (2.0, "2"), (5.0, "5")] {
        let input = path(&format!("epr-{mu_text}.cm"));
        let gen = run(&["gen", "epr", mu_text, "-o", &input]);
        check("gen exits 0", exit_code(&gen) == 0);
        let validate = run(&["validate", &input]);
        check("validate accepts the EPR document", exit_code(&validate) == 0);

        for (e, e_text) in [(0.5, "0.5"), (1.0, "1")] {
            for (kind, quad) in [("homodyne-q", Quadrature::Q), ("homodyne-p", Quadrature::P)] {
                let out_path = path(&format!("out-{mu_text}-{e_text}-{kind}.cm"));
                let detect = run(&[
                    "detect", &input, "--kind", kind, "--eta", e_text, "-o", &out_path,
                ]);
                check("detect exits 0", exit_code(&detect) == 0);

                let doc = CmDocument::parse(&std::fs::read_to_string(&out_path).unwrap())
                    .expect("output document parses");
                let conditioned = (e + (1.0 - e) * mu) / (e * mu + 1.0 - e);
                let (vq, vp) = match quad {
                    Quadrature::Q => (conditioned, mu),
                    Quadrature::P => (mu, conditioned),
                };
                let expected = Mat::from_row_slice(2, 2, &[vq, 0.0, 0.0, vp]);
                worst = worst.max(mat::max_abs(&(doc.matrix() - &expected)));
            }
        }
    }
    check(
        "files reproduce the remote-state closed forms",
        worst <= COHERENCE_TOL,
    );

    // Exit-code table: 1 for domain failures, 2 for usage and parse errors.
    let epr_path = path("epr-2.cm");
    let epr = epr_path.as_str();
    let unphysical_path = path("unphysical.cm");
    let unphysical = unphysical_path.as_str();
    std::fs::write(
        unphysical,
        "format: bellcov-cm/1\nmodes: 1\nordering: q1 p1\nmatrix:\n0.5 0\n0 0.5\n",
    )
    .unwrap();
    let garbage_path = path("garbage.cm");
    let garbage = garbage_path.as_str();
    std::fs::write(garbage, "not a document\n").unwrap();
    let vacuum1_path = path("vacuum-1.cm");
    let vacuum1 = vacuum1_path.as_str();
    check(
        "gen vacuum exits 0",
        exit_code(&run(&["gen", "vacuum", "1", "-o", vacuum1])) == 0,
    );

    let table: &[(&str, Vec<&str>, i32)] = &[
        ("validate unphysical -> 1", vec!["validate", unphysical], 1),
        ("validate garbage -> 2", vec!["validate", garbage], 2),
        ("validate missing file -> 2", vec!["validate", "no-such-file.cm"], 2),
        ("gen epr below 1 -> 2", vec!["gen", "epr", "0.5", "-o", "-"], 2),
        (
            "eta above 1 -> 1",
            vec!["detect", epr, "--kind", "homodyne-q", "--eta", "1.5"],
            1,
        ),
        (
            "eta zero -> 1",
            vec!["detect", epr, "--kind", "homodyne-q", "--eta", "0"],
            1,
        ),
        (
            "transmissivity with heterodyne -> 2",
            vec!["detect", epr, "--kind", "heterodyne", "--transmissivity", "0.5"],
            2,
        ),
        (
            "transmissivity outside [0,1] -> 1",
            vec!["detect", epr, "--kind", "bell", "--transmissivity", "1.5"],
            1,
        ),
        (
            "eta-prime with single homodyne -> 2",
            vec!["detect", epr, "--kind", "homodyne-q", "--eta-prime", "0.9"],
            2,
        ),
        (
            "too few modes -> 1",
            vec!["detect", vacuum1, "--kind", "homodyne-q"],
            1,
        ),
        ("unknown flag -> 2", vec!["detect", epr, "--bogus"], 2),
    ];
    for (what, args, expected) in table {
        let got = exit_code(&run(args));
        check(what, got == *expected);
    }

    // Trace agreement gate: clean run writes the trace and exits 0; an
    // injected corruption of the closed-form result must exit nonzero.
    let swap_input = path("swap.cm");
    let pair = CovarianceMatrix::epr(2.0).unwrap();
    let swap = pair.direct_sum(&pair).permute_modes(&[0, 3, 1, 2]).unwrap();
    std::fs::write(&swap_input, CmDocument::from_covariance(&swap).to_text()).unwrap();

    let trace_path = path("swap.trace");
    let traced = run(&[
        "detect",
        &swap_input,
        "--kind",
        "bell",
        "--transmissivity",
        "0.5",
        "--eta",
        "0.9",
        "--eta-prime",
        "0.8",
        &format!("--trace={trace_path}"),
        "-o",
        &path("swap-out.cm"),
    ]);
    check("traced detect exits 0", exit_code(&traced) == 0);
    let trace_text = std::fs::read_to_string(&trace_path).unwrap_or_default();
    check(
        "trace document is written",
        trace_text.starts_with("format: bellcov-trace/1"),
    );

    let corrupted = run(&[
        "detect",
        &swap_input,
        "--kind",
        "bell",
        "--eta",
        "0.9",
        "--corrupt-output",
        &format!("--trace={}", path("corrupt.trace")),
        "-o",
        &path("corrupt-out.cm"),
    ]);
    check("corrupted result exits nonzero", exit_code(&corrupted) != 0);
    let stderr = String::from_utf8_lossy(&corrupted.stderr).to_string();
    check("mismatch is reported", stderr.contains("disagree"));

    report(
        9,
        "CLI round-trip, exit codes, and trace gate",
        if failures.is_empty() {
            format!("round-trip worst deviation {worst:.3e}; all exit codes as expected")
        } else {
            format!("failed checks: {}", failures.join("; "))
        },
        failures.is_empty(),
    );
}
