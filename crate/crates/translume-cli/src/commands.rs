//! The five batch commands.  Each one reads its section of the
//! [`RunConfig`](crate::config::RunConfig), calls the pure physics layer,
//! and writes plot-ready artifacts through [`OutputTarget`].

use rayon::prelude::*;
use translume_core::{
    alias_signature, find_horizons, gamma, hawking_temperature, stimulated_fractions,
    thermal_fit, trace_ray, vacuum_spectrum, Engine, Error as CoreError, GratingConfig,
    HorizonKind, PulseModel, SpectralAmplitude, Truncation,
};

use crate::config::{
    RayAnchor, RunConfig, SpectrumSection, StimulatedSection, SweepCommand, VacuumSection,
};
use crate::error::{CliError, CliResult};
use crate::output::{fmt_float, Cell, OutputTarget, Table};

fn require<'a, T>(section: &'a Option<T>, name: &str) -> CliResult<&'a T> {
    section.as_ref().ok_or_else(|| {
        CliError::Config(format!("missing [{name}] section required by this command"))
    })
}

/// Traces a family of characteristics and records the horizon layout.
///
/// Writes `ray_<i>.csv` (columns `t,x,X`) per ray plus `horizons.csv`
/// (columns `X,kind,dcdX`); non-transluminal gratings have no horizons and
/// get a header-only horizon table.
pub fn cmd_rays(run: &RunConfig, target: &OutputTarget) -> CliResult<()> {
    let cfg = &run.grating;
    let rays = run.rays.clone().unwrap_or_default();
    let period = cfg.period();
    let t_end = rays.t_end.unwrap_or_else(|| default_t_end(cfg));

    let launch: Vec<f64> = match rays.anchor {
        RayAnchor::Period => (0..rays.count)
            .map(|i| i as f64 * period / rays.count as f64)
            .collect(),
        RayAnchor::Horizons => {
            let set = find_horizons(cfg).map_err(|e| match e {
                // Asking for horizon-relative rays on a horizon-free grating
                // is a configuration mistake, reported as such.
                CoreError::NotTransluminal { .. } => CliError::Config(format!(
                    "[rays]: anchor = \"horizons\" needs a transluminal grating, but {e}"
                )),
                other => CliError::from(other),
            })?;
            let per_horizon = rays.count.div_ceil(set.entries.len().max(1));
            let mut points = Vec::with_capacity(rays.count);
            'outer: for horizon in &set.entries {
                for j in 0..per_horizon {
                    if points.len() == rays.count {
                        break 'outer;
                    }
                    // Symmetric offsets, skipping the horizon itself (a ray
                    // started exactly there never moves).
                    let step = rays.spread * period / per_horizon as f64;
                    let offset = (j / 2 + 1) as f64 * if j % 2 == 0 { step } else { -step };
                    points.push(horizon.x + offset);
                }
            }
            points
        }
    };

    for (i, &x0) in launch.iter().enumerate() {
        let trajectory = trace_ray(cfg, x0, 0.0, t_end, None, None)?;
        let mut table = Table::new(vec!["t", "x", "X"]);
        for ((t, x), big_x) in trajectory.samples.iter().zip(&trajectory.comoving) {
            table.push(vec![Cell::Float(*t), Cell::Float(*x), Cell::Float(*big_x)]);
        }
        target.write_table(&format!("ray_{i:02}"), &table)?;
    }

    let mut horizon_table = Table::new(vec!["X", "kind", "dcdX"]);
    match find_horizons(cfg) {
        Ok(set) => {
            for horizon in &set.entries {
                let kind = match horizon.kind {
                    HorizonKind::Dispersal => "dispersal",
                    HorizonKind::Accumulation => "accumulation",
                };
                horizon_table.push(vec![
                    Cell::Float(horizon.x),
                    Cell::Text(kind.to_string()),
                    Cell::Float(horizon.dcdx),
                ]);
            }
        }
        Err(CoreError::NotTransluminal { .. }) => {} // header-only table
        Err(e) => return Err(e.into()),
    }
    target.write_table("horizons", &horizon_table)?;
    Ok(())
}

/// Five grating periods: temporal if the grating moves, otherwise spatial
/// transit times at the background speed.
fn default_t_end(cfg: &GratingConfig) -> f64 {
    if cfg.omega > 0.0 {
        5.0 * 2.0 * std::f64::consts::PI / cfg.omega
    } else {
        5.0 * cfg.period() * cfg.eps_b / cfg.c0
    }
}

/// Tabulates the analytic spectral amplitude over a range of output orders.
///
/// Writes `spectrum.csv` (columns `n_prime,reF,imF,absF2`) and a
/// `spectrum_meta.json` sidecar recording the decay factor γ and the
/// effective temperature.
pub fn cmd_spectrum(run: &RunConfig, target: &OutputTarget) -> CliResult<()> {
    let section: &SpectrumSection = require(&run.spectrum, "spectrum")?;
    let model = PulseModel::new(run.grating)?;

    let mut table = Table::new(vec!["n_prime", "reF", "imF", "absF2"]);
    for n_prime in section.n_prime_min..=section.n_prime_max {
        let amplitude =
            SpectralAmplitude::compute(&model, section.k_tilde, section.n, n_prime)?;
        table.push(vec![
            Cell::Int(n_prime),
            Cell::Float(amplitude.value.re),
            Cell::Float(amplitude.value.im),
            Cell::Float(amplitude.value.norm_sqr()),
        ]);
    }
    target.write_table("spectrum", &table)?;

    let temperature = hawking_temperature(&run.grating);
    let meta = serde_json::json!({
        "k_tilde": section.k_tilde,
        "n": section.n,
        "gamma": gamma(&run.grating),
        "T_H": temperature.frequency_form,
        "T_H_wavevector_form": temperature.wavevector_form,
    });
    target.write_json("spectrum_meta.json", &meta)?;
    Ok(())
}

/// Computes the spontaneous emission spectrum, optionally for a family of
/// window lengths.
///
/// Writes `vacuum.csv` (columns `omega,density`) — or `vacuum_<i>.csv` per
/// swept `d` — plus a `thermal.csv` summary with one row per window length
/// whose spectrum supported a thermal fit.
pub fn cmd_vacuum(run: &RunConfig, target: &OutputTarget) -> CliResult<()> {
    let section = run.vacuum.clone().unwrap_or_default();
    let lengths: Vec<f64> = section.d_sweep.clone().unwrap_or_else(|| vec![run.grating.d]);
    let sweeping = section.d_sweep.is_some();

    let mut thermal_table = Table::new(vec!["d", "T_fit", "T_H", "residual"]);
    for (i, &d) in lengths.iter().enumerate() {
        let mut cfg = run.grating;
        cfg.d = d;
        cfg.validate().map_err(CliError::from)?;

        let grid = omega_grid(&section, &cfg);
        let spectrum = vacuum_spectrum(&cfg, &grid, Truncation::Auto)?;

        let mut table = Table::new(vec!["omega", "density"]);
        for (&omega, &density) in spectrum.omega.iter().zip(&spectrum.density) {
            table.push(vec![Cell::Float(omega), Cell::Float(density)]);
        }
        let stem = if sweeping {
            format!("vacuum_{i}")
        } else {
            "vacuum".to_string()
        };
        target.write_table(&stem, &table)?;

        // A spectrum without enough lobes (or without thermal decay) simply
        // contributes no summary row; that is data shape, not failure.
        match thermal_fit(&spectrum) {
            Ok(fit) => thermal_table.push(vec![
                Cell::Float(d),
                Cell::Float(fit.temperature),
                Cell::Float(hawking_temperature(&cfg).frequency_form),
                Cell::Float(fit.residual),
            ]),
            Err(CoreError::InsufficientPeaks { .. }) | Err(CoreError::DomainError(_)) => {}
            Err(e) => return Err(e.into()),
        }
    }
    target.write_table("thermal", &thermal_table)?;
    Ok(())
}

/// The half-step-offset output grid over `(0, omega_span·Ω)`; no point lands
/// on a multiple of Ω for integer `omega_span` by construction.
fn omega_grid(section: &VacuumSection, cfg: &GratingConfig) -> Vec<f64> {
    let step = section.omega_span * cfg.omega / section.points as f64;
    (0..section.points)
        .map(|j| (j as f64 + 0.5) * step)
        .collect()
}

/// Computes stimulated negative-frequency conversion for the configured
/// input pulse.
///
/// Writes `stimulated.csv` (columns `n_prime,fraction`) and prints the
/// `total_negative_fraction=<value>` summary plus the alias signature of
/// the input frequency to stdout.
pub fn cmd_stimulated(
    run: &RunConfig,
    target: &OutputTarget,
    engine: Engine,
) -> CliResult<()> {
    let section: &StimulatedSection = require(&run.stimulated, "stimulated")?;
    let spectrum = stimulated_fractions(&run.grating, section.k_tilde, section.n, engine)?;

    let mut table = Table::new(vec!["n_prime", "fraction"]);
    for &(n_prime, fraction) in &spectrum.fractions {
        table.push(vec![Cell::Int(n_prime), Cell::Float(fraction)]);
    }
    target.write_table("stimulated", &table)?;

    println!(
        "total_negative_fraction={}",
        fmt_float(spectrum.total_negative_fraction)
    );
    // In-cell observations alias to ω mod Ω; report the signature of the
    // input frequency so measured peaks can be mapped back to rungs.
    if run.grating.omega > 0.0 {
        let omega_in = section.k_tilde * run.grating.c0 / run.grating.eps_b;
        let alias = alias_signature(omega_in, run.grating.omega)?;
        println!("alias_omega_in={}", fmt_float(omega_in));
        println!("alias_positive={}", fmt_float(alias.positive_alias));
        println!("alias_negative={}", fmt_float(alias.negative_alias));
        println!("alias_degenerate={}", alias.degenerate);
    }
    Ok(())
}

/// One point of a parameter sweep: the base run with some grating or pulse
/// values replaced.
#[derive(Debug, Clone)]
struct SweepPoint {
    cfg: GratingConfig,
    k_tilde: Option<f64>,
    n: Option<i64>,
    /// `(column, value)` pairs in declaration order, for the output row.
    coordinates: Vec<(&'static str, Cell)>,
}

/// Runs the cartesian product of the declared parameter lists and writes
/// one result row per point to `sweep.csv`.
///
/// Points are computed in parallel but emitted in deterministic
/// lexicographic order of the lists as declared, so the artifact does not
/// depend on the worker count.
pub fn cmd_sweep(run: &RunConfig, target: &OutputTarget, engine: Engine) -> CliResult<()> {
    let section = require(&run.sweep, "sweep")?;
    let points = expand_sweep(run)?;

    let mut columns: Vec<&'static str> =
        points[0].coordinates.iter().map(|(name, _)| *name).collect();
    let results: Vec<Vec<Cell>> = match section.command {
        SweepCommand::Stimulated => {
            columns.push("total_negative_fraction");
            points
                .par_iter()
                .map(|point| -> CliResult<Vec<Cell>> {
                    let k_tilde = point
                        .k_tilde
                        .or(run.stimulated.as_ref().map(|s| s.k_tilde))
                        .ok_or_else(|| {
                            CliError::Config(
                                "sweep over stimulated conversion needs k_tilde (in \
                                 [sweep.lists] or [stimulated])"
                                    .into(),
                            )
                        })?;
                    let n = point
                        .n
                        .or(run.stimulated.as_ref().map(|s| s.n))
                        .ok_or_else(|| {
                            CliError::Config(
                                "sweep over stimulated conversion needs n (in \
                                 [sweep.lists] or [stimulated])"
                                    .into(),
                            )
                        })?;
                    let spectrum = stimulated_fractions(&point.cfg, k_tilde, n, engine)?;
                    let mut row: Vec<Cell> =
                        point.coordinates.iter().map(|(_, c)| c.clone()).collect();
                    row.push(Cell::Float(spectrum.total_negative_fraction));
                    Ok(row)
                })
                .collect::<CliResult<Vec<_>>>()?
        }
        SweepCommand::Vacuum => {
            columns.extend(["energy_per_period", "T_fit", "T_H"]);
            let vacuum = run.vacuum.clone().unwrap_or_default();
            points
                .par_iter()
                .map(|point| -> CliResult<Vec<Cell>> {
                    let grid = omega_grid(&vacuum, &point.cfg);
                    let spectrum = vacuum_spectrum(&point.cfg, &grid, Truncation::Auto)?;
                    let t_fit = match thermal_fit(&spectrum) {
                        Ok(fit) => fit.temperature,
                        Err(CoreError::InsufficientPeaks { .. })
                        | Err(CoreError::DomainError(_)) => f64::NAN,
                        Err(e) => return Err(e.into()),
                    };
                    let mut row: Vec<Cell> =
                        point.coordinates.iter().map(|(_, c)| c.clone()).collect();
                    row.push(Cell::Float(spectrum.energy_per_period()));
                    row.push(Cell::Float(t_fit));
                    row.push(Cell::Float(
                        hawking_temperature(&point.cfg).frequency_form,
                    ));
                    Ok(row)
                })
                .collect::<CliResult<Vec<_>>>()?
        }
    };

    let mut table = Table::new(columns);
    for row in results {
        table.push(row);
    }
    target.write_table("sweep", &table)?;
    Ok(())
}

/// Expands the declared lists into the cartesian product of sweep points,
/// validating every resulting grating configuration up front.
fn expand_sweep(run: &RunConfig) -> CliResult<Vec<SweepPoint>> {
    let lists = &run.sweep.as_ref().expect("caller checked").lists;

    // Columns appear in this fixed declaration order.
    let mut float_axes: Vec<(&'static str, &Vec<f64>)> = Vec::new();
    if let Some(v) = &lists.alpha {
        float_axes.push(("alpha", v));
    }
    if let Some(v) = &lists.g {
        float_axes.push(("g", v));
    }
    if let Some(v) = &lists.omega {
        float_axes.push(("Omega", v));
    }
    if let Some(v) = &lists.d {
        float_axes.push(("d", v));
    }
    if let Some(v) = &lists.eps_b {
        float_axes.push(("eps_b", v));
    }
    if let Some(v) = &lists.c0 {
        float_axes.push(("c0", v));
    }
    if let Some(v) = &lists.k_tilde {
        float_axes.push(("k_tilde", v));
    }

    let mut points = vec![SweepPoint {
        cfg: run.grating,
        k_tilde: None,
        n: None,
        coordinates: Vec::new(),
    }];
    for (name, values) in float_axes {
        let mut expanded = Vec::with_capacity(points.len() * values.len());
        for point in &points {
            for &value in values {
                let mut next = point.clone();
                match name {
                    "alpha" => next.cfg.alpha = value,
                    "g" => next.cfg.g = value,
                    "Omega" => next.cfg.omega = value,
                    "d" => next.cfg.d = value,
                    "eps_b" => next.cfg.eps_b = value,
                    "c0" => next.cfg.c0 = value,
                    "k_tilde" => next.k_tilde = Some(value),
                    _ => unreachable!(),
                }
                next.coordinates.push((name, Cell::Float(value)));
                expanded.push(next);
            }
        }
        points = expanded;
    }
    if let Some(ns) = &lists.n {
        let mut expanded = Vec::with_capacity(points.len() * ns.len());
        for point in &points {
            for &value in ns {
                let mut next = point.clone();
                next.n = Some(value);
                next.coordinates.push(("n", Cell::Int(value)));
                expanded.push(next);
            }
        }
        points = expanded;
    }

    for point in &points {
        point.cfg.validate().map_err(|e| {
            CliError::Config(format!("sweep point {:?}: {e}", point.coordinates))
        })?;
    }
    Ok(points)
}
