//! Acceptance suite: one pass/fail line per criterion, non-zero exit on failure.

use std::process::ExitCode;
use std::time::Instant;

use ces_duality::eigensolver::{discretize, extrapolated_level, Grid, Stencil};
use ces_duality::models::{
    ces_energy_cubic, ces_potential, ces_root_candidates, CESParams, ESParams, ParameterChain,
};
use ces_duality::specfun::solve_cubic_real;
use ces_duality::verify::{
    default_ces_grid, default_es_grid, sweep_chains, verify_ces_spectrum, verify_duality_exchange,
    verify_eigenfunction, verify_eigensolver_sanity, verify_energy_sum, verify_es_spectrum,
    verify_potential_consistency, verify_schwarzian, worked_chain, VerificationReport,
    ES_REFERENCE_SETS, SWEEP_SEED, SWEEP_SIZE,
};

struct Outcome {
    pass: bool,
    detail: String,
}

fn summarize(reports: &[VerificationReport]) -> Outcome {
    let worst = reports.iter().map(|r| r.abs_deviation).fold(0.0, f64::max);
    let failed: Vec<String> = reports
        .iter()
        .filter(|r| !r.pass)
        .map(|r| {
            let bad: Vec<&str> = r
                .conditions
                .iter()
                .filter(|(_, &v)| !v)
                .map(|(k, _)| k.as_str())
                .collect();
            format!("{}{:?} dev={:.3e} {:?} {:?}", r.claim, r.parameters, r.abs_deviation, bad, r.notes)
        })
        .collect();
    Outcome {
        pass: failed.is_empty(),
        detail: if failed.is_empty() {
            format!("{} reports, worst deviation {worst:.3e}", reports.len())
        } else {
            failed.join("; ")
        },
    }
}

fn es_spectrum() -> Outcome {
    let grid = default_es_grid();
    let reports: Vec<_> = ES_REFERENCE_SETS
        .iter()
        .map(|&(a, b)| verify_es_spectrum(&ESParams::new(a, b).unwrap(), &grid))
        .collect();
    summarize(&reports)
}

fn ces_spectrum(sweep: &[ParameterChain]) -> Outcome {
    let worked = CESParams::new(82.0 / 9.0, 8.0).unwrap();
    let cubic = ces_energy_cubic(&worked, 0);
    let roots = solve_cubic_real(cubic).unwrap();
    let unit = roots.iter().any(|&s| (s - 1.0).abs() < 1e-12 && cubic.eval(s).abs() < 1e-12);
    let admissible = ces_root_candidates(&worked, 0)
        .unwrap()
        .iter()
        .filter(|c| c.admissible)
        .count();

    let grid = default_ces_grid();
    let pot = |y| ces_potential(&worked, y);
    let ground = discretize(pot, &grid)
        .and_then(|op| op.eigenvalue(0))
        .and_then(|e| extrapolated_level(pot, &grid, Stencil::Plain, 0, e))
        .map(|l| l.extrapolated)
        .unwrap_or(f64::NAN);
    let ground_dev = (ground + 1.0).abs();

    let reports: Vec<_> = sweep
        .iter()
        .map(|c| verify_ces_spectrum(&c.ces, c.n, &grid))
        .collect();
    let single_rate = sweep
        .iter()
        .filter(|c| {
            ces_root_candidates(&c.ces, c.n)
                .map(|v| v.iter().filter(|r| r.admissible).count() == 1)
                .unwrap_or(false)
        })
        .count() as f64
        / sweep.len() as f64;
    let sweep_outcome = summarize(&reports);
    Outcome {
        pass: unit && admissible == 1 && ground_dev <= 1e-4 && single_rate == 1.0 && sweep_outcome.pass,
        detail: format!(
            "worked chain: unit root {unit}, admissible {admissible}, ground {ground:.10} (dev {ground_dev:.2e}); \
             sweep single-root rate {:.0}%, {}",
            100.0 * single_rate,
            sweep_outcome.detail
        ),
    }
}

fn per_chain<F>(chains: &[ParameterChain], check: F) -> Outcome
where
    F: Fn(&ParameterChain) -> VerificationReport + Sync,
{
    let reports = std::thread::scope(|s| {
        let handles: Vec<_> = chains.iter().map(|c| s.spawn(|| check(c))).collect();
        handles.into_iter().map(|h| h.join().unwrap()).collect::<Vec<_>>()
    });
    summarize(&reports)
}

fn main() -> ExitCode {
    let sweep = sweep_chains(SWEEP_SEED, SWEEP_SIZE);
    let mut with_worked = vec![worked_chain()];
    with_worked.extend(sweep.iter().copied());
    let es_grid = default_es_grid();
    let ces_grid: Grid = default_ces_grid();

    type Criterion<'a> = (&'static str, Box<dyn Fn() -> Outcome + 'a>);
    let criteria: Vec<Criterion> = vec![
        ("1 ES spectrum", Box::new(es_spectrum)),
        ("2 CES spectrum and root uniqueness", Box::new(|| ces_spectrum(&sweep))),
        ("3 energy-sum identity", Box::new(|| summarize(&[verify_energy_sum(&with_worked)]))),
        ("4 Schwarzian closure", Box::new(|| summarize(&[verify_schwarzian()]))),
        (
            "5 duality exchange",
            Box::new(|| per_chain(&sweep, |c| verify_duality_exchange(&c.es, c.n, &es_grid, &ces_grid))),
        ),
        (
            "6 potential consistency",
            Box::new(|| summarize(&[verify_potential_consistency(SWEEP_SEED, 1000)])),
        ),
        ("7 eigensolver sanity", Box::new(|| summarize(&[verify_eigensolver_sanity()]))),
        (
            "8 eigenfunction form",
            Box::new(|| per_chain(&with_worked, |c| verify_eigenfunction(&c.ces, c.n, &ces_grid))),
        ),
    ];

    let mut all = true;
    for (name, run) in &criteria {
        let start = Instant::now();
        let outcome = run();
        all &= outcome.pass;
        println!(
            "[{}] {name} ({:.1}s): {}",
            if outcome.pass { "PASS" } else { "FAIL" },
            start.elapsed().as_secs_f64(),
            outcome.detail
        );
    }
    if all {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
