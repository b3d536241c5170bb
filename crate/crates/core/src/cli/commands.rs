// Copyright 2026 The bandcorr Authors
// SPDX-License-Identifier: Apache-2.0

use std::path::{Path, PathBuf};
use std::time::Instant;

use clap::Parser;
use serde_json::json;

use super::grid::parse_grid;
use super::output::{
    fmt_f64, manifest_path, output_path, write_atomic, Diagnostics, RunManifest, Table,
};
use super::{Cli, Command, CompareArgs, LimitArgs, McArgs, RegimeArg, SpectrumArgs};
use crate::error::{Error, Result};
use crate::exec::Execution;
use crate::harmonics::{
    laplace_spectrum, transfer_eigenvalue_asymptotic, SpectralBasis, TridiagonalNu,
};
use crate::limits::{c_star_from_ratio, regime_curve_with, CurveOptions, Regime, TRUNCATION_TOL};
use crate::mc::{estimate_ratio, EnsembleParams, McConfig};
use crate::scaling;

#[derive(Debug)]
pub struct CommandOutcome {
    pub outputs: Vec<PathBuf>,
    pub manifest: PathBuf,
    /// Outputs were written but a numerical quality check failed.
    pub quality_failure: Option<Error>,
}

struct Report {
    command: &'static str,
    parameters: serde_json::Value,
    seed: Option<u64>,
    diagnostics: Diagnostics,
    tables: Vec<(PathBuf, Table)>,
    quality_failure: Option<Error>,
}

pub(super) fn execute(cli: &Cli, argv: Vec<String>) -> Result<CommandOutcome> {
    let started = Instant::now();
    let report = match &cli.command {
        Command::Limit(a) => limit(a, cli.quadrature_order)?,
        Command::Spectrum(a) => spectrum(a, cli.quadrature_order)?,
        Command::Mc(a) => mc(a, cli.quadrature_order)?,
        Command::Compare(a) => compare(a, cli.quadrature_order)?,
        Command::Replay(a) => return replay(&a.manifest),
    };
    for (path, table) in &report.tables {
        write_atomic(path, table.to_csv().as_bytes())?;
    }
    let outputs: Vec<PathBuf> = report.tables.iter().map(|(p, _)| p.clone()).collect();
    let manifest = manifest_path(&outputs[0]);
    RunManifest {
        command: report.command.to_string(),
        parameters: report.parameters,
        seed: report.seed,
        version: env!("CARGO_PKG_VERSION").to_string(),
        argv,
        wall_clock_seconds: started.elapsed().as_secs_f64(),
        diagnostics: report.diagnostics,
        outputs: outputs.clone(),
    }
    .write(&manifest)?;
    Ok(CommandOutcome {
        outputs,
        manifest,
        quality_failure: report.quality_failure,
    })
}

fn replay(manifest: &Path) -> Result<CommandOutcome> {
    let recorded = RunManifest::read(manifest)?;
    let mut args = vec!["bandcorr".to_string()];
    args.extend(recorded.argv.iter().cloned());
    let cli = Cli::try_parse_from(&args)
        .map_err(|e| Error::Parameter(format!("manifest arguments do not parse: {e}")))?;
    if matches!(cli.command, Command::Replay(_)) {
        return Err(Error::Parameter("refusing to replay a replay".into()));
    }
    execute(&cli, recorded.argv)
}

fn limit(a: &LimitArgs, quadrature_order: Option<usize>) -> Result<Report> {
    scaling::t_star(a.energy)?;
    let grid = parse_grid(&a.xi)?;
    let regime = match a.regime {
        RegimeArg::Localized => Regime::Localized,
        RegimeArg::Delocalized => Regime::Delocalized,
        RegimeArg::Critical => {
            let c_star = match (a.c_star, a.c_sub) {
                (Some(c), _) => c,
                (None, Some(c)) => c_star_from_ratio(c, a.energy)?,
                (None, None) => {
                    return Err(Error::Parameter(
                        "critical regime needs --Cstar or --Csub".into(),
                    ))
                }
            };
            if !(c_star >= 0.0 && c_star.is_finite()) {
                return Err(Error::Parameter(format!("C* must be >= 0, got {c_star}")));
            }
            Regime::Critical { c_star }
        }
        RegimeArg::Finite => match (a.n, a.w) {
            (Some(n), Some(w)) => Regime::Finite {
                n,
                w,
                energy: a.energy,
            },
            _ => return Err(Error::Parameter("finite regime needs --n and --W".into())),
        },
    };
    let curve = regime_curve_with(
        regime,
        a.order,
        &grid,
        CurveOptions {
            quadrature_order,
            execution: Execution::Parallel,
        },
    )?;
    let mut table = Table::new(&["xi", "value", "truncation_error"]);
    for ((x, v), e) in curve
        .xi
        .iter()
        .zip(&curve.values)
        .zip(&curve.truncation_errors)
    {
        table.push(vec![fmt_f64(*x), fmt_f64(*v), fmt_f64(*e)]);
    }
    let operator = matches!(regime, Regime::Critical { .. } | Regime::Finite { .. });
    let path = output_path(a.out.as_deref(), &format!("limit_{}.csv", regime.name()));
    Ok(Report {
        command: "limit",
        parameters: json!({
            "regime": regime,
            "E": a.energy,
            "xi": a.xi,
            "l": a.order,
        }),
        seed: None,
        diagnostics: Diagnostics {
            truncation_order: operator.then_some(curve.order),
            quadrature_order: operator.then_some(curve.quadrature_order),
            max_truncation_error: Some(curve.max_truncation_error()),
            notes: Vec::new(),
        },
        tables: vec![(path, table)],
        quality_failure: curve.check_truncation(TRUNCATION_TOL).err(),
    })
}

fn spectrum(a: &SpectrumArgs, quadrature_order: Option<usize>) -> Result<Report> {
    if a.order == 0 {
        return Err(Error::Parameter("--l must be positive".into()));
    }
    if let Some(&p) = a.p.iter().find(|&&p| !(p > 0.0 && p.is_finite())) {
        return Err(Error::Domain {
            name: "p",
            value: p,
            domain: "p > 0",
        });
    }
    let basis = match quadrature_order {
        Some(m) if m > a.order => SpectralBasis::with_quadrature(a.order, m),
        Some(m) => {
            return Err(Error::Parameter(format!(
                "quadrature order {m} must exceed --l {}",
                a.order
            )))
        }
        None => SpectralBasis::new(a.order),
    };
    let mut table = Table::new(&["j", "p", "lambda_j", "asymptotic_1_minus_(j+1)(j+2)/p"]);
    for &p in &a.p {
        for j in 0..a.order {
            let lambda = basis.transfer_eigenvalue(j, p)?;
            table.push(vec![
                j.to_string(),
                fmt_f64(p),
                fmt_f64(lambda),
                fmt_f64(transfer_eigenvalue_asymptotic(j, p)),
            ]);
        }
    }
    let nu = TridiagonalNu::from_basis(&basis);
    let laplace = laplace_spectrum(a.order);
    let mut ops = Table::new(&[
        "j",
        "laplace",
        "nu_diagonal",
        "nu_offdiagonal",
        "nu_offdiagonal_closed_form",
    ]);
    for j in 0..a.order {
        let (off, closed) = match nu.off_diagonal.get(j) {
            Some(v) => (
                fmt_f64(*v),
                fmt_f64(TridiagonalNu::closed_form_off_diagonal(j)),
            ),
            None => (String::new(), String::new()),
        };
        ops.push(vec![
            j.to_string(),
            fmt_f64(laplace[j]),
            fmt_f64(nu.diagonal[j]),
            off,
            closed,
        ]);
    }
    let path = output_path(a.out.as_deref(), "spectrum.csv");
    let ops_path = {
        let mut s = path.with_extension("").into_os_string();
        s.push(".operators.csv");
        PathBuf::from(s)
    };
    Ok(Report {
        command: "spectrum",
        parameters: json!({ "l": a.order, "p": a.p }),
        seed: None,
        diagnostics: Diagnostics {
            truncation_order: Some(a.order),
            quadrature_order: Some(basis.quadrature_order()),
            max_truncation_error: None,
            notes: vec![format!(
                "nu max |entry| outside band: {:e}",
                nu.max_outside_band
            )],
        },
        tables: vec![(path, table), (ops_path, ops)],
        quality_failure: None,
    })
}

fn mc(a: &McArgs, quadrature_order: Option<usize>) -> Result<Report> {
    let params = EnsembleParams::new(a.n, a.w, a.beta, a.energy)?;
    let grid = parse_grid(&a.xi)?;
    if a.batches < 2 {
        return Err(Error::Parameter("--batches must be at least 2".into()));
    }
    let config = McConfig {
        samples: a.samples,
        seed: a.seed,
        batches: a.batches,
        execution: Execution::with_workers(a.workers),
    };
    let run = estimate_ratio(&params, &grid, &config)?;
    let mut table = Table::new(&["xi", "ratio", "std_error", "samples"]);
    for e in &run.estimates {
        table.push(vec![
            fmt_f64(e.xi),
            fmt_f64(e.ratio),
            fmt_f64(e.std_error),
            e.samples.to_string(),
        ]);
    }
    let path = output_path(a.out.as_deref(), "mc.csv");
    let mut notes = vec![format!("log offset {}", run.log_offset)];
    if quadrature_order.is_some() {
        notes.push("quadrature order does not enter the Monte Carlo estimate".into());
    }
    Ok(Report {
        command: "mc",
        parameters: json!({
            "n": a.n,
            "W": a.w,
            "N": params.dim(),
            "beta": a.beta,
            "E": a.energy,
            "xi": a.xi,
            "samples": a.samples,
            "batches": a.batches,
            "workers": a.workers,
        }),
        seed: Some(a.seed),
        diagnostics: Diagnostics {
            truncation_order: None,
            quadrature_order: None,
            max_truncation_error: None,
            notes,
        },
        tables: vec![(path, table)],
        quality_failure: run
            .degenerate_batches
            .first()
            .map(|&batch| Error::DegenerateBatch { batch }),
    })
}

/// Reads a CSV with a header row; every cell must parse as `f64` (empty cells become NaN).
pub fn read_table_columns(path: &Path) -> Result<(Vec<String>, Vec<Vec<f64>>)> {
    let mut reader = csv::Reader::from_path(path)?;
    let header: Vec<String> = reader.headers()?.iter().map(str::to_string).collect();
    let mut cols = vec![Vec::new(); header.len()];
    for record in reader.records() {
        let record = record?;
        for (c, field) in record.iter().enumerate() {
            let v = if field.is_empty() {
                f64::NAN
            } else {
                field.parse().map_err(|_| {
                    Error::Parameter(format!(
                        "{}: cannot parse {field:?} as a number",
                        path.display()
                    ))
                })?
            };
            cols[c].push(v);
        }
    }
    Ok((header, cols))
}

fn column<'a>(header: &[String], cols: &'a [Vec<f64>], names: &[&str]) -> Option<&'a [f64]> {
    names
        .iter()
        .find_map(|n| header.iter().position(|h| h == n))
        .map(|i| cols[i].as_slice())
}

fn compare(a: &CompareArgs, _quadrature_order: Option<usize>) -> Result<Report> {
    let (mh, mc) = read_table_columns(&a.mc_csv)?;
    let (th, tc) = read_table_columns(&a.limit_csv)?;
    let missing =
        |p: &Path, what: &str| Error::Parameter(format!("{} has no {what} column", p.display()));
    let m_xi = column(&mh, &mc, &["xi"]).ok_or_else(|| missing(&a.mc_csv, "xi"))?;
    let m_val = column(&mh, &mc, &["ratio", "value"]).ok_or_else(|| missing(&a.mc_csv, "ratio"))?;
    let zeros = vec![0.0; m_xi.len()];
    let m_se = column(&mh, &mc, &["std_error"]).unwrap_or(&zeros);
    let t_xi = column(&th, &tc, &["xi"]).ok_or_else(|| missing(&a.limit_csv, "xi"))?;
    let t_val =
        column(&th, &tc, &["value", "ratio"]).ok_or_else(|| missing(&a.limit_csv, "value"))?;

    let bits = |x: &f64| x.to_bits();
    let mut offending: Vec<f64> = m_xi
        .iter()
        .filter(|x| !t_xi.iter().any(|t| bits(t) == bits(x)))
        .chain(
            t_xi.iter()
                .filter(|t| !m_xi.iter().any(|x| bits(x) == bits(t))),
        )
        .copied()
        .collect();
    if !offending.is_empty() {
        offending.sort_by(f64::total_cmp);
        offending.dedup();
        return Err(Error::GridMismatch(offending));
    }

    let mut table = Table::new(&[
        "xi",
        "mc_ratio",
        "std_error",
        "theory",
        "abs_diff",
        "z_score",
    ]);
    let mut max_abs_z: f64 = 0.0;
    for i in 0..m_xi.len() {
        let t = t_xi
            .iter()
            .position(|t| bits(t) == bits(&m_xi[i]))
            .expect("aligned");
        let theory = t_val[t];
        let diff = m_val[i] - theory;
        let z = if m_se[i] > 0.0 {
            diff / m_se[i]
        } else {
            f64::INFINITY
        };
        if z.is_finite() {
            max_abs_z = max_abs_z.max(z.abs());
        }
        table.push(vec![
            fmt_f64(m_xi[i]),
            fmt_f64(m_val[i]),
            fmt_f64(m_se[i]),
            fmt_f64(theory),
            fmt_f64(diff.abs()),
            fmt_f64(z),
        ]);
    }
    let path = output_path(a.out.as_deref(), "compare.csv");
    Ok(Report {
        command: "compare",
        parameters: json!({
            "mc_csv": a.mc_csv,
            "limit_csv": a.limit_csv,
        }),
        seed: None,
        diagnostics: Diagnostics {
            truncation_order: None,
            quadrature_order: None,
            max_truncation_error: None,
            notes: vec![format!(
                "max |z| over points with a positive std_error: {max_abs_z}"
            )],
        },
        tables: vec![(path, table)],
        quality_failure: None,
    })
}
