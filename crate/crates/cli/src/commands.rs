use std::fs;
use std::io::Write;
use std::path::Path;
use std::time::Instant;

use rand::{RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;

use fermisep::io::{parse_state, to_json, LoadedState};
use fermisep::oracle::{self, densify, oracle_rdm, sparsify, tensor_len};
use fermisep::separability::report_from_parts;
use fermisep::{
    analyze as analyze_state, compute_rdm, diagonal_decomposition, eigenvalues, esbl_check,
    max_abs_diff, Complex64, FermionState,
};

use crate::record::{fmt17, AnalysisRecord, InputDescriptor, Timings};
use crate::{
    AnalyzeArgs, CliError, EsblArgs, OutputFormat, RandomArgs, VerifyArgs, EXIT_CHECK_FAILED,
    EXIT_IO, EXIT_OK,
};

fn millis(since: Instant) -> f64 {
    since.elapsed().as_secs_f64() * 1e3
}

fn load(path: &Path) -> Result<LoadedState, CliError> {
    let text = fs::read_to_string(path)
        .map_err(|e| CliError::new(EXIT_IO, format!("cannot read {}: {e}", path.display())))?;
    parse_state(&text).map_err(|e| {
        let mut err = CliError::from(e);
        err.message = format!("{}: {}", path.display(), err.message);
        err
    })
}

fn check_tolerance(tolerance: f64) -> Result<(), CliError> {
    if tolerance.is_finite() && tolerance >= 0.0 {
        Ok(())
    } else {
        Err(CliError::usage(format!(
            "tolerance must be a finite nonnegative number, got {tolerance}"
        )))
    }
}

/// Analyzes one state file and builds its record.
pub fn analyze_file(path: &Path, tolerance: f64) -> Result<AnalysisRecord, CliError> {
    check_tolerance(tolerance)?;
    let start = Instant::now();
    let loaded = load(path)?;
    let load_ms = millis(start);

    let t = Instant::now();
    let rdm = compute_rdm(&loaded.state);
    let rdm_ms = millis(t);

    let t = Instant::now();
    let spectrum = eigenvalues(&rdm)?;
    let spectrum_ms = millis(t);

    let t = Instant::now();
    let report = report_from_parts(&rdm, &spectrum, loaded.state.n(), tolerance)?;
    let report_ms = millis(t);

    let timings = Timings {
        load_ms,
        rdm_ms,
        spectrum_ms,
        report_ms,
        total_ms: millis(start),
    };
    let input = InputDescriptor::File {
        path: path.display().to_string(),
        input_norm: loaded.input_norm,
    };
    Ok(AnalysisRecord::new(
        input,
        loaded.state.d(),
        loaded.state.n(),
        &report,
        &spectrum,
        timings,
    ))
}

pub fn analyze(args: &AnalyzeArgs, out: &mut dyn Write) -> Result<i32, CliError> {
    let record = analyze_file(&args.path, args.tolerance)?;
    let text = match args.output_format() {
        OutputFormat::Json => record.to_json() + "\n",
        OutputFormat::Csv => record.to_csv(),
        OutputFormat::Text => record.to_text(args.bits),
    };
    out.write_all(text.as_bytes())?;
    Ok(EXIT_OK)
}

pub fn generate(d: usize, n: usize, seed: u64, slater: bool) -> Result<FermionState, CliError> {
    let state = if slater {
        FermionState::random_slater(d, n, seed)?
    } else {
        FermionState::random_state(d, n, seed)?
    };
    Ok(state)
}

pub fn random(args: &RandomArgs, out: &mut dyn Write) -> Result<i32, CliError> {
    if args.count == 0 {
        return Err(CliError::usage("--count must be at least 1"));
    }
    // surface n > d before touching the filesystem
    fermisep::OrbitalBasisIndex::new(args.d, args.n)?;
    match &args.out {
        None if args.count > 1 => Err(CliError::usage("--out is required when --count > 1")),
        None => {
            let state = generate(args.d, args.n, args.seed, args.slater)?;
            writeln!(out, "{}", to_json(&state))?;
            Ok(EXIT_OK)
        }
        Some(dir) => {
            fs::create_dir_all(dir)?;
            for i in 0..args.count {
                let seed = args.seed.wrapping_add(i as u64);
                let state = generate(args.d, args.n, seed, args.slater)?;
                let path = dir.join(format!("state_{i:04}.json"));
                fs::write(&path, to_json(&state) + "\n")?;
                writeln!(out, "{}", path.display())?;
            }
            Ok(EXIT_OK)
        }
    }
}

/// Per-(N, D) summary of a verification run.
#[derive(Debug, Default, Clone)]
struct CellSummary {
    n: usize,
    d: usize,
    states: usize,
    rdm_deviation: f64,
    round_trip: f64,
    identity: f64,
    max_purity_excess: f64,
    min_entropy_gap: f64,
    failures: Vec<String>,
}

const ORACLE_TOL: f64 = 1e-12;
const ROUND_TRIP_TOL: f64 = 1e-14;
const IDENTITY_TOL: f64 = 1e-10;
const PURITY_BOUND_TOL: f64 = 1e-12;
const ENTROPY_BOUND_TOL: f64 = 1e-8;

pub fn verify(args: &VerifyArgs, out: &mut dyn Write) -> Result<i32, CliError> {
    if args.n_max < 2 || args.d_max < 2 {
        return Err(CliError::usage("need --n-max >= 2 and --d-max >= 2"));
    }
    if args.trials == 0 {
        return Err(CliError::usage("--trials must be at least 1"));
    }
    let cap = oracle::oracle_cap_from_env()?;
    let cells: Vec<(usize, usize)> = (2..=args.n_max)
        .flat_map(|n| (n..=args.d_max).map(move |d| (n, d)))
        .collect();
    let largest = cells
        .iter()
        .map(|&(n, d)| tensor_len(d, n).unwrap_or(u128::MAX))
        .max()
        .unwrap_or(0);
    if largest > cap {
        return Err(CliError::usage(format!(
            "resource limit: D^N reaches {largest}, above the oracle cap {cap} (set {} to override)",
            oracle::ORACLE_CAP_ENV
        )));
    }

    let start = Instant::now();
    let mut master = ChaCha8Rng::seed_from_u64(args.seed);
    let mut summaries = Vec::with_capacity(cells.len());
    let mut fault_pending = args.inject_fault;
    for &(n, d) in &cells {
        let mut cell = CellSummary {
            n,
            d,
            min_entropy_gap: f64::INFINITY,
            ..Default::default()
        };
        for _trial in 0..args.trials {
            for slater in [false, true] {
                let seed = master.next_u64();
                let state = generate(d, n, seed, slater)?;
                let mut analyzed = state.clone();
                if std::mem::take(&mut fault_pending) {
                    let c0 = analyzed.amplitudes()[0];
                    analyzed.corrupt_amplitude(0, c0 + Complex64::new(0.1, 0.0));
                }
                let tag = format!(
                    "{} d={d} n={n} seed={seed}",
                    if slater { "slater" } else { "random" }
                );
                check_state(&state, &analyzed, slater, cap, &tag, &mut cell)?;
            }
        }
        summaries.push(cell);
    }

    writeln!(
        out,
        "{:>2} {:>3} {:>6} {:>12} {:>12} {:>12} {:>12} {:>12}  status",
        "N", "D", "states", "rdm_dev", "round_trip", "identity", "purity_exc", "entropy_gap"
    )?;
    let mut failures = Vec::new();
    for c in &summaries {
        writeln!(
            out,
            "{:>2} {:>3} {:>6} {:>12.3e} {:>12.3e} {:>12.3e} {:>12.3e} {:>12.3e}  {}",
            c.n,
            c.d,
            c.states,
            c.rdm_deviation,
            c.round_trip,
            c.identity,
            c.max_purity_excess,
            c.min_entropy_gap,
            if c.failures.is_empty() { "ok" } else { "FAIL" }
        )?;
        failures.extend(c.failures.iter().cloned());
    }
    writeln!(out, "elapsed {:.1} ms", millis(start))?;
    if failures.is_empty() {
        writeln!(out, "all checks passed")?;
        Ok(EXIT_OK)
    } else {
        for f in &failures {
            writeln!(out, "FAILED {f}")?;
        }
        Ok(EXIT_CHECK_FAILED)
    }
}

/// `reference` feeds the oracle; `analyzed` feeds the compressed path.
/// They differ only when a fault is injected.
fn check_state(
    reference: &FermionState,
    analyzed: &FermionState,
    slater: bool,
    cap: u128,
    tag: &str,
    cell: &mut CellSummary,
) -> Result<(), CliError> {
    let n = reference.n();
    let nf = n as f64;
    cell.states += 1;
    let mut fail = |what: String| cell.failures.push(format!("[{tag}] {what}"));

    let dense = densify(reference, cap)?;
    let oracle = oracle_rdm(&dense)?;
    let rdm = compute_rdm(analyzed);
    let dev = max_abs_diff(oracle.matrix(), rdm.matrix());
    if !(dev <= ORACLE_TOL) {
        fail(format!("oracle rdm deviation {dev:e} > {ORACLE_TOL:e}"));
    }

    let back = sparsify(&dense)?;
    let rt = reference
        .amplitudes()
        .iter()
        .zip(back.amplitudes())
        .map(|(a, b)| (a - b).norm())
        .fold(0.0, f64::max);
    if !(rt <= ROUND_TRIP_TOL) {
        fail(format!("densify/sparsify round trip error {rt:e}"));
    }

    let dec = diagonal_decomposition(analyzed);
    let diag_sq: f64 = rdm.diagonal().iter().map(|f| f * f).sum();
    let identity = (diag_sq - dec.sum_of_squares_identity()).abs();
    if !(identity <= IDENTITY_TOL) {
        fail(format!("sum-of-squares identity off by {identity:e}"));
    }

    let spectrum = eigenvalues(&rdm)?;
    let report = report_from_parts(&rdm, &spectrum, n, fermisep::DEFAULT_TOLERANCE)?;
    let purity_excess = report.purity - 1.0 / nf;
    if purity_excess > PURITY_BOUND_TOL {
        fail(format!("purity {} exceeds 1/N", fmt17(report.purity)));
    }
    let entropy_gap = report.entropy - nf.ln();
    if entropy_gap < -ENTROPY_BOUND_TOL {
        fail(format!("entropy {} below ln N", fmt17(report.entropy)));
    }
    if report.verdict_purity != report.verdict_idempotency {
        fail(format!(
            "purity verdict {} disagrees with idempotency verdict {}",
            report.verdict_purity, report.verdict_idempotency
        ));
    }
    if slater && !report.verdict_purity {
        fail(format!(
            "Slater determinant reported entangled (E_L = {:e})",
            report.e_l
        ));
    }

    cell.rdm_deviation = cell.rdm_deviation.max(dev);
    cell.round_trip = cell.round_trip.max(rt);
    cell.identity = cell.identity.max(identity);
    cell.max_purity_excess = if cell.states == 1 {
        purity_excess
    } else {
        cell.max_purity_excess.max(purity_excess)
    };
    cell.min_entropy_gap = cell.min_entropy_gap.min(entropy_gap);
    Ok(())
}

pub fn esbl(args: &EsblArgs, out: &mut dyn Write) -> Result<i32, CliError> {
    if args.samples == 0 {
        return Err(CliError::usage("--samples must be at least 1"));
    }
    check_tolerance(args.tolerance)?;
    let loaded = load(&args.path)?;
    let outcome = esbl_check(&loaded.state, args.samples, args.seed)?;
    let report = analyze_state(&loaded.state, args.tolerance)?;
    let agree = outcome.separable == report.verdict_purity;
    let verdict = |b: bool| if b { "separable" } else { "entangled" };
    if args.json {
        let doc = serde_json::json!({
            "input": args.path.display().to_string(),
            "samples": args.samples,
            "seed": args.seed,
            "esbl_separable": outcome.separable,
            "purity_separable": report.verdict_purity,
            "agree": agree,
            "e_l": report.e_l,
            "residual": outcome.residual,
            "per_sample": outcome.samples,
        });
        writeln!(out, "{}", serde_json::to_string_pretty(&doc).expect("json"))?;
    } else {
        writeln!(out, "projection test   {}", verdict(outcome.separable))?;
        writeln!(out, "purity verdict    {}", verdict(report.verdict_purity))?;
        writeln!(out, "E_L               {}", fmt17(report.e_l))?;
        writeln!(out, "max residual      {}", fmt17(outcome.residual))?;
        if outcome.samples.is_empty() {
            writeln!(out, "(N = 2: two-fermion rank test applied directly)")?;
        }
        for (k, s) in outcome.samples.iter().enumerate() {
            writeln!(
                out,
                "sample {k:>3}  norm {}  residual {}  {}",
                fmt17(s.projection_norm),
                fmt17(s.residual),
                if s.rank_one { "rank-one" } else { "entangled" }
            )?;
        }
        writeln!(out, "{}", if agree { "agreement" } else { "DISAGREEMENT" })?;
    }
    Ok(if agree { EXIT_OK } else { EXIT_CHECK_FAILED })
}
