use std::io::Write;

use ces_duality::eigensolver::{discretize, eigen_lowest};
use ces_duality::models::{ces_energy, ces_potential, ces_wavefunction, CESParams, ESParams, ModelError};
use ces_duality::verify::{
    ces_spectrum_table, default_ces_grid, default_es_grid, verify_all, verify_duality_exchange,
    verify_es_spectrum, verify_schwarzian, OracleGrids, VerificationReport,
};
use serde::Serialize;

use crate::args::{CesArgs, DualityArgs, EsArgs, ExportArgs, Format, OutputArgs};
use crate::output::{
    emit_wavefunction_csv, fmt_num, report_json, round12, write_csv, write_json, write_reports,
    WavefunctionRow,
};
use crate::{CliError, Outcome};

fn outcome(pass: bool) -> Outcome {
    if pass {
        Outcome::Pass
    } else {
        Outcome::Fail
    }
}

fn param_error(e: impl ToString) -> CliError {
    CliError::Parameters(e.to_string())
}

#[derive(Debug, Serialize)]
struct EsRow {
    n: usize,
    analytic: f64,
    numeric: f64,
    deviation: f64,
}

#[derive(Debug, Serialize)]
struct Document<R> {
    rows: Vec<R>,
    report: serde_json::Value,
}

pub fn spectrum_es(args: &EsArgs, out: &mut dyn Write) -> Result<Outcome, CliError> {
    let p = ESParams::new(args.alpha, args.beta).map_err(param_error)?;
    if !p.is_solvable() {
        return Err(param_error(format!(
            "no bound levels: beta = {} must exceed alpha^2 = {}",
            args.beta,
            args.alpha * args.alpha
        )));
    }
    let grid = args.grid.resolve(default_es_grid())?;
    let report = verify_es_spectrum(&p, &grid);
    let rows: Vec<EsRow> = report
        .analytic
        .iter()
        .enumerate()
        .map(|(n, &a)| {
            let numeric = report.numeric.get(n).copied().unwrap_or(f64::NAN);
            EsRow {
                n,
                analytic: a,
                numeric,
                deviation: (a - numeric).abs(),
            }
        })
        .collect();
    match args.output.format {
        Format::Csv => {
            let table: Vec<Vec<String>> = rows
                .iter()
                .map(|r| vec![r.n.to_string(), fmt_num(r.analytic), fmt_num(r.numeric), fmt_num(r.deviation)])
                .collect();
            write_csv(out, &["n", "analytic", "numeric", "deviation"], &table)?;
        }
        Format::Json => {
            let rows = rows
                .into_iter()
                .map(|r| EsRow {
                    analytic: round12(r.analytic),
                    numeric: round12(r.numeric),
                    deviation: round12(r.deviation),
                    ..r
                })
                .collect();
            write_json(out, &Document { rows, report: report_json(&report)? })?;
        }
    }
    Ok(outcome(report.pass))
}

#[derive(Debug, Serialize)]
struct CesRow {
    n: usize,
    sqrt_eps: f64,
    minus_eps: f64,
    numeric: f64,
    deviation: f64,
    cubic_roots: Vec<f64>,
    selected_index: usize,
}

pub fn spectrum_ces(args: &CesArgs, out: &mut dyn Write) -> Result<Outcome, CliError> {
    let p = CESParams::new(args.a, args.b).map_err(param_error)?;
    let grid = args.grid.resolve(default_ces_grid())?;
    let (report, levels) = ces_spectrum_table(&p, args.n_max, &grid);
    let rows: Vec<CesRow> = levels
        .iter()
        .filter_map(|l| {
            let (s, a, num) = (l.sqrt_eps?, l.analytic?, l.numeric?);
            Some(CesRow {
                n: l.n,
                sqrt_eps: s,
                minus_eps: a,
                numeric: num,
                deviation: (a - num).abs(),
                cubic_roots: l.roots.clone(),
                selected_index: l.admissible.iter().position(|&x| x)?,
            })
        })
        .collect();
    match args.output.format {
        Format::Csv => {
            let table: Vec<Vec<String>> = rows
                .iter()
                .map(|r| {
                    let roots: Vec<String> = r.cubic_roots.iter().map(|&x| fmt_num(x)).collect();
                    vec![
                        r.n.to_string(),
                        fmt_num(r.sqrt_eps),
                        fmt_num(r.minus_eps),
                        fmt_num(r.numeric),
                        fmt_num(r.deviation),
                        roots.join(";"),
                        r.selected_index.to_string(),
                    ]
                })
                .collect();
            write_csv(
                out,
                &["n", "sqrt_eps", "minus_eps", "numeric", "deviation", "cubic_roots", "selected_index"],
                &table,
            )?;
        }
        Format::Json => {
            let rows = rows
                .into_iter()
                .map(|r| CesRow {
                    sqrt_eps: round12(r.sqrt_eps),
                    minus_eps: round12(r.minus_eps),
                    numeric: round12(r.numeric),
                    deviation: round12(r.deviation),
                    cubic_roots: r.cubic_roots.iter().map(|&x| round12(x)).collect(),
                    ..r
                })
                .collect();
            write_json(out, &Document { rows, report: report_json(&report)? })?;
        }
    }
    Ok(outcome(report.pass))
}

pub fn duality_check(args: &DualityArgs, out: &mut dyn Write) -> Result<Outcome, CliError> {
    let p = ESParams::new(args.alpha, args.beta).map_err(param_error)?;
    // Reject parameter errors up front so they are not reported as failures.
    ces_duality::models::ParameterChain::from_es(p, args.n).map_err(param_error)?;
    let y_grid = args.grid.resolve(default_ces_grid())?;
    let reports = vec![
        verify_duality_exchange(&p, args.n, &default_es_grid(), &y_grid),
        verify_schwarzian(),
    ];
    write_reports(out, &reports, args.output.format)?;
    Ok(outcome(reports.iter().all(|r| r.pass)))
}

/// Samples of the closed-form and numeric level `n`, each normalized to
/// `Σ v² h = 1` and sign-aligned.
pub fn wavefunction_rows(p: &CESParams, n: usize, grid: &ces_duality::eigensolver::Grid) -> Result<Vec<WavefunctionRow>, CliError> {
    let level = match ces_energy(p, n) {
        Ok(l) => l,
        Err(e @ (ModelError::NoAdmissibleRoot { .. } | ModelError::AmbiguousRoot { .. })) => {
            return Err(CliError::Verification(e.to_string()))
        }
        Err(e) => return Err(param_error(e)),
    };
    let op = discretize(|y| ces_potential(p, y), grid).map_err(param_error)?;
    if n >= op.dim() {
        return Err(param_error(format!("level {n} exceeds grid dimension {}", op.dim())));
    }
    let numeric = eigen_lowest(&op, n + 1).map_err(param_error)?.swap_remove(n).vector;
    let h = grid.spacing();
    let analytic: Vec<Option<f64>> = grid
        .nodes()
        .map(|y| ces_wavefunction(&level, p, y).ok())
        .collect();
    let norm = (analytic.iter().flatten().map(|v| v * v).sum::<f64>() * h).sqrt();
    let dot: f64 = analytic
        .iter()
        .zip(&numeric)
        .filter_map(|(a, v)| a.map(|a| a * v))
        .sum();
    let scale = if dot < 0.0 { -1.0 / norm } else { 1.0 / norm };
    Ok(grid
        .nodes()
        .zip(analytic)
        .zip(numeric)
        .map(|((y, a), v)| WavefunctionRow {
            y,
            analytic: a.map(|a| a * scale).filter(|_| norm > 0.0 && norm.is_finite()),
            numeric: v,
        })
        .collect())
}

pub fn export_wf(args: &ExportArgs, out: &mut dyn Write) -> Result<Outcome, CliError> {
    let p = CESParams::new(args.a, args.b).map_err(param_error)?;
    let grid = args.grid.resolve(default_ces_grid())?;
    let rows = wavefunction_rows(&p, args.n, &grid)?;
    match args.output.format {
        Format::Csv => emit_wavefunction_csv(out, &rows)?,
        Format::Json => {
            let rows: Vec<WavefunctionRow> = rows
                .into_iter()
                .map(|r| WavefunctionRow {
                    y: round12(r.y),
                    analytic: r.analytic.map(round12),
                    numeric: round12(r.numeric),
                })
                .collect();
            write_json(out, &rows)?;
        }
    }
    Ok(Outcome::Pass)
}

pub fn verify_all_cmd(args: &OutputArgs, out: &mut dyn Write) -> Result<Outcome, CliError> {
    let reports: Vec<VerificationReport> = verify_all(&OracleGrids::default());
    write_reports(out, &reports, args.format)?;
    Ok(outcome(reports.iter().all(|r| r.pass)))
}
