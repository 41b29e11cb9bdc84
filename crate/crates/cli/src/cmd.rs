use std::path::{Path, PathBuf};

use anyhow::{bail, Context, Result};
use colecole::energy::{decay_report, DecayReport};
use colecole::experiment::{energy_run, pulse_initial_fields, EnergyRun, EnergySettings};
use colecole::manufactured::{convergence_table, ConvergenceRow, ManufacturedCase};
use colecole::mesh::GridSpec;
use colecole::stepper::{MaterialParams, Quadrature, SchemeConfig, SimState};
use colecole::weights::{
    convolve, cumulative_a, min_theta_gap_grid, sftr_weights, varpi_weights, SchemeParams,
};
use rayon::prelude::*;

use crate::csv::{num, opt, Table};
use crate::sweep::{converge_jobs, energy_jobs, Job};
use crate::{ConvergeArgs, EnergyArgs, FieldsArgs, ThetaScanArgs, WeightsArgs};

/// A hard assertion that did not hold.
#[derive(Debug)]
pub struct Failure {
    pub check: String,
    pub detail: String,
}

impl Failure {
    fn new(check: &str, detail: String) -> Self {
        Self {
            check: check.to_string(),
            detail,
        }
    }
}

fn job_params(job: &Job) -> Result<()> {
    SchemeParams::new(job.alpha, job.theta)
        .with_context(|| format!("alpha = {}, theta = {}", job.alpha, job.theta))?;
    Ok(())
}

fn sweep_dir(out: Option<&PathBuf>) -> Result<&Path> {
    match out {
        Some(p) => Ok(p.as_path()),
        None => bail!("--sweep needs --out DIR"),
    }
}

pub fn weights(args: &WeightsArgs) -> Result<Vec<Failure>> {
    let params = SchemeParams::new(args.alpha, args.theta)?;
    let n = args.steps;
    let omega = sftr_weights(params, n);
    let varpi = varpi_weights(params, n);
    let acc = cumulative_a(&varpi)?;
    let conv = convolve(omega.values(), varpi.values(), n);

    let mut table = Table::new(&["k", "omega", "varpi", "a", "conv_check"]);
    let mut worst = 0.0f64;
    for k in 0..=n {
        let expected = match k {
            0 => 1.0,
            1 => -1.0,
            _ => 0.0,
        };
        let check = conv[k] - expected;
        worst = worst.max(check.abs());
        table.row([
            k.to_string(),
            num(omega[k]),
            num(varpi[k]),
            num(acc[k]),
            num(check),
        ]);
    }
    table.emit(args.out.as_deref())?;

    let mut failures = Vec::new();
    if !(worst <= 1e-12) {
        failures.push(Failure::new(
            "convolution_identity",
            format!("max |conv_check| = {worst:e} > 1e-12"),
        ));
    }
    if params.decay_guaranteed() {
        let v = varpi.values();
        if !(v[0] > 0.0 && v[1..].iter().all(|&x| x <= 0.0)) {
            failures.push(Failure::new(
                "companion_signs",
                "varpi_0 > 0 and varpi_k <= 0 for k >= 1 does not hold".into(),
            ));
        }
        let a = acc.values();
        if !(a.windows(2).all(|w| w[1] <= w[0]) && a[n] > 0.0) {
            failures.push(Failure::new(
                "cumulative_monotone",
                "a_k is not positive and non-increasing".into(),
            ));
        }
    }
    eprintln!(
        "weights alpha={} theta={} n={n}: max |conv_check| = {worst:.3e}",
        args.alpha, args.theta
    );
    Ok(failures)
}

fn converge_csv(rows: &[ConvergenceRow<f64>]) -> Table {
    let mut t = Table::new(&["tau", "errE", "rateE", "errH", "rateH", "errP", "rateP"]);
    for r in rows {
        t.row([
            num(r.tau),
            num(r.err_e),
            opt(r.rate_e),
            num(r.err_h),
            opt(r.rate_h),
            num(r.err_p),
            opt(r.rate_p),
        ]);
    }
    t
}

fn check_taus(taus: &[f64]) -> Result<()> {
    if taus.is_empty() {
        bail!("--tau needs at least one step size");
    }
    if taus.iter().any(|&t| !(t > 0.0 && t <= 1.0)) {
        bail!("every tau must lie in (0, 1]");
    }
    if taus.windows(2).any(|w| w[1] >= w[0]) {
        bail!("--tau values must be strictly decreasing");
    }
    Ok(())
}

pub fn converge(args: &ConvergeArgs) -> Result<Vec<Failure>> {
    check_taus(&args.tau)?;
    let grid = GridSpec::unit(args.nx, args.ny)?;
    let quadrature = Quadrature::from(args.scheme);
    let jobs = match &args.sweep {
        Some(sweep) => converge_jobs(sweep, quadrature)?,
        None => vec![Job {
            alpha: args.alpha,
            theta: args.theta,
            quadrature,
        }],
    };
    for job in &jobs {
        job_params(job)?;
    }
    let dir = match args.sweep {
        Some(_) => Some(sweep_dir(args.out.as_ref())?),
        None => None,
    };

    let tables = jobs
        .par_iter()
        .map(|job| {
            let case = ManufacturedCase::new(job.alpha)?;
            convergence_table(&case, job.quadrature, job.theta, &args.tau, grid)
                .with_context(|| job.label())
        })
        .collect::<Result<Vec<_>>>()?;

    let mut failures = Vec::new();
    for (job, rows) in jobs.iter().zip(&tables) {
        let table = converge_csv(rows);
        match dir {
            Some(d) => table.emit(Some(&d.join(format!("converge_{}.csv", job.label()))))?,
            None => table.emit(args.out.as_deref())?,
        }
        let last = rows.last().expect("at least one tau");
        eprintln!(
            "converge {}: finest errE={:.3e} rateE={} errH={:.3e} rateH={}",
            job.label(),
            last.err_e,
            last.rate_e.map_or("-".into(), |r| format!("{r:.3}")),
            last.err_h,
            last.rate_h.map_or("-".into(), |r| format!("{r:.3}")),
        );
        if rows
            .iter()
            .any(|r| !(r.err_e.is_finite() && r.err_h.is_finite() && r.err_p.is_finite()))
        {
            failures.push(Failure::new("finite_errors", job.label()));
        }
        if let Some(order) = args.expect_order {
            for (name, rate) in [("E", last.rate_e), ("H", last.rate_h)] {
                match rate {
                    Some(r) if (r - order).abs() <= 0.2 => {}
                    Some(r) => failures.push(Failure::new(
                        "expected_order",
                        format!(
                            "{}: finest {name} rate {r:.4} outside {order} +- 0.2",
                            job.label()
                        ),
                    )),
                    None => failures.push(Failure::new(
                        "expected_order",
                        format!("{}: a rate needs at least two step sizes", job.label()),
                    )),
                }
            }
        }
    }
    Ok(failures)
}

fn energy_csv(run: &EnergyRun<f64>) -> Table {
    let mut t = Table::new(&["n", "t", "energy", "dissipation", "violation"]);
    for r in run.trace.records() {
        t.row([
            r.n.to_string(),
            num(r.t),
            num(r.energy),
            opt(r.dissipation),
            opt(r.violation),
        ]);
    }
    t
}

/// `E^0 - E^5`, when five steps exist.
fn drop5(run: &EnergyRun<f64>) -> Option<f64> {
    let rec = run.trace.records();
    rec.get(5).map(|r| rec[0].energy - r.energy)
}

fn energy_checks(job: &Job, run: &EnergyRun<f64>, rep: &DecayReport<f64>) -> Vec<Failure> {
    let mut failures = Vec::new();
    let sftr = job.quadrature == Quadrature::Sftr;
    if !(sftr && job.theta >= job.alpha / 2.0) {
        return failures;
    }
    let tol = run.trace.tol();
    if rep.violations > 0 {
        failures.push(Failure::new(
            "energy_monotone",
            format!(
                "{}: {} violations, first at step {:?}, max rise {:e}",
                job.label(),
                rep.violations,
                rep.first_violation,
                rep.max_violation
            ),
        ));
    }
    if let Some(d) = rep.max_dissipation.filter(|&d| !(d <= tol)) {
        failures.push(Failure::new(
            "dissipation",
            format!("{}: max dissipation residual {d:e} > {tol:e}", job.label()),
        ));
    }
    if !(run.max_defect <= run.defect_bound) {
        failures.push(Failure::new(
            "step_defects",
            format!(
                "{}: max defect {:e} > bound {:e}",
                job.label(),
                run.max_defect,
                run.defect_bound
            ),
        ));
    }
    failures
}

pub fn energy(args: &EnergyArgs) -> Result<Vec<Failure>> {
    let grid = GridSpec::unit(args.nx, args.ny)?;
    let quadrature = Quadrature::from(args.scheme);
    let jobs = match &args.sweep {
        Some(sweep) => energy_jobs(sweep, quadrature)?,
        None => vec![Job {
            alpha: args.alpha,
            theta: args.theta,
            quadrature,
        }],
    };
    for job in &jobs {
        job_params(job)?;
    }
    let ordered_by_alpha = args.sweep.as_deref() == Some("orders");
    if ordered_by_alpha && args.steps < 5 {
        bail!("the orders sweep compares the drop over 5 steps; --steps must be at least 5");
    }
    let dir = match args.sweep {
        Some(_) => Some(sweep_dir(args.out.as_ref())?),
        None => None,
    };

    let runs = jobs
        .par_iter()
        .map(|job| {
            let settings = EnergySettings {
                alpha: job.alpha,
                theta: job.theta,
                quadrature: job.quadrature,
                tau: args.tau,
                n_steps: args.steps,
                check_defects: true,
            };
            energy_run(grid, settings).with_context(|| job.label())
        })
        .collect::<Result<Vec<_>>>()?;

    let mut failures = Vec::new();
    let mut summary = Table::new(&[
        "scheme",
        "alpha",
        "theta",
        "violations",
        "first_violation",
        "max_violation",
        "max_dissipation",
        "tol",
        "drop5",
    ]);
    for (job, run) in jobs.iter().zip(&runs) {
        let table = energy_csv(run);
        match dir {
            Some(d) => table.emit(Some(&d.join(format!("energy_{}.csv", job.label()))))?,
            None => table.emit(args.out.as_deref())?,
        }
        let rep = decay_report(&run.trace);
        let rec = run.trace.records();
        eprintln!(
            "energy {}: E0={:.6e} E{}={:.6e} violations={} max_rise={:.3e} max_dissipation={} tol={:.3e}",
            job.label(),
            rec[0].energy,
            rec.len() - 1,
            rec[rec.len() - 1].energy,
            rep.violations,
            rep.max_violation,
            rep.max_dissipation.map_or("-".into(), |d| format!("{d:.3e}")),
            run.trace.tol(),
        );
        summary.row([
            job.scheme_name().to_string(),
            job.alpha.to_string(),
            job.theta.to_string(),
            rep.violations.to_string(),
            rep.first_violation
                .map(|n| n.to_string())
                .unwrap_or_default(),
            num(rep.max_violation),
            opt(rep.max_dissipation),
            num(run.trace.tol()),
            opt(drop5(run)),
        ]);
        failures.extend(energy_checks(job, run, &rep));
    }
    if let Some(d) = dir {
        summary.emit(Some(&d.join("summary.csv")))?;
    }

    if ordered_by_alpha {
        let mut pairs: Vec<(f64, f64)> = jobs
            .iter()
            .zip(&runs)
            .map(|(j, r)| (j.alpha, drop5(r).expect("steps checked above")))
            .collect();
        pairs.sort_by(|a, b| a.0.total_cmp(&b.0));
        if !pairs.windows(2).all(|w| w[1].1 < w[0].1) {
            let detail = pairs
                .iter()
                .map(|(a, d)| format!("alpha={a}: {d:.6e}"))
                .collect::<Vec<_>>()
                .join(", ");
            failures.push(Failure::new("early_drop_order", detail));
        }
    }
    Ok(failures)
}

pub fn theta_scan(args: &ThetaScanArgs) -> Result<Vec<Failure>> {
    let grid = min_theta_gap_grid::<f64>(args.x_points, args.alpha_points, args.theta_samples)?;
    let mut table = Table::new(&["x", "alpha", "min_theta_gap"]);
    for (x, a, v) in grid.iter() {
        table.row([num(x), num(a), num(v)]);
    }
    table.emit(args.out.as_deref())?;
    let min = grid.min();
    eprintln!(
        "theta-scan {}x{}x{}: minimum {min:.6e}",
        args.x_points, args.alpha_points, args.theta_samples
    );
    let mut failures = Vec::new();
    if !(min > 0.0) || grid.values.iter().any(|v| !v.is_finite()) {
        failures.push(Failure::new(
            "gap_positive",
            format!("minimum over the grid is {min:e}"),
        ));
    }
    Ok(failures)
}

pub fn fields(args: &FieldsArgs) -> Result<Vec<Failure>> {
    let grid = GridSpec::unit(args.nx, args.ny)?;
    SchemeParams::new(args.alpha, args.theta)?;
    let material = MaterialParams::unit(args.alpha)?;
    let config = SchemeConfig::new(args.theta, args.tau, args.steps, args.scheme.into())?;
    let (e0, h0) = pulse_initial_fields(&grid);
    let mut state = SimState::init(grid, material, config, e0, h0)?;
    state.run(None, |_, _| Ok(()))?;

    let dump = |name: &str, entries: &mut dyn Iterator<Item = (usize, usize, f64)>| {
        let mut t = Table::new(&["i", "j", "value"]);
        for (i, j, v) in entries {
            t.row([i.to_string(), j.to_string(), num(v)]);
        }
        t.emit(Some(&args.out.join(format!("{name}.csv"))))
    };
    dump("ex", &mut state.e().ex_entries())?;
    dump("ey", &mut state.e().ey_entries())?;
    dump("h", &mut state.h().entries())?;
    dump("px", &mut state.p().ex_entries())?;
    dump("py", &mut state.p().ey_entries())?;
    eprintln!(
        "fields: {} steps on {}x{} written to {}",
        args.steps,
        args.nx,
        args.ny,
        args.out.display()
    );
    Ok(Vec::new())
}
