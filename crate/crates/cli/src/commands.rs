//! One function per subcommand. Each returns the files it wrote.

use std::path::PathBuf;

use idealgas_ctp::bare_action::bare_kernels;
use idealgas_ctp::decoherence::{measures_at, ridge_profile, DecoherenceGrid, Defect, MeasureOptions, RidgeProfile};
use idealgas_ctp::hydro::{compare_with_reference, fit_hydro_coefficients, static_flow, FlowMode, FlowWidth};
use idealgas_ctp::response::{response_blocks, retarded, spectral_monte_carlo, Branch};
use idealgas_ctp::{InternalGas, Mode};
use serde_json::{json, Value};

use crate::config::RunConfig;
use crate::output::{num, write_csv, write_json};
use crate::{CliError, Command, Outcome};

pub fn execute(config: &RunConfig, command: Command) -> Result<Outcome, CliError> {
    match command {
        Command::Response { monte_carlo } => response(config, monte_carlo),
        Command::Kernels => kernels(config),
        Command::Grid => grid(config),
        Command::Ridge => ridge(config),
        Command::Hydrofit => hydrofit(config),
        Command::Staticflow => staticflow(config),
        Command::FiguresData => figures_data(config),
    }
}

fn at(module: &str, mode: Mode) -> String {
    format!("{module} at (Q, z) = ({}, {})", mode.q(), mode.z())
}

fn done(files: Vec<PathBuf>) -> Outcome {
    Outcome { files, defects: 0 }
}

const COMPONENTS: [&str; 4] = ["tt", "ts", "l", "t"];

fn response(config: &RunConfig, monte_carlo: bool) -> Result<Outcome, CliError> {
    let gas = config.gas()?;
    let opts = config.response_options();
    let mut columns = vec!["q".to_owned(), "z".to_owned()];
    for block in ["lindhard", "r_plus", "r_minus"] {
        columns.extend(COMPONENTS.iter().map(|c| format!("{block}_{c}")));
    }
    for c in COMPONENTS {
        columns.push(format!("re_gr_{c}"));
        columns.push(format!("im_gr_{c}"));
    }
    columns.push("error_estimate".to_owned());
    columns.push("near_edge".to_owned());

    let mut rows = Vec::new();
    let mut all_blocks = Vec::new();
    for mode in config.modes()? {
        let b = response_blocks(&gas, mode, &opts).map_err(|e| CliError::numeric(at("response", mode), e))?;
        if b.near_edge {
            eprintln!(
                "warning: {} lies near the continuum edge; accuracy reduced",
                at("response", mode)
            );
        }
        let mut row = vec![num(mode.q()), num(mode.z())];
        for block in [b.lindhard, b.r_plus, b.r_minus] {
            row.extend(block.as_array().iter().map(|v| num(**v)));
        }
        for g in retarded(&b).as_array() {
            row.push(num(g.re));
            row.push(num(g.im));
        }
        row.push(num(b.error_estimate));
        row.push(b.near_edge.to_string());
        rows.push(row);
        all_blocks.push(b);
    }
    let columns: Vec<&str> = columns.iter().map(String::as_str).collect();
    let mut files = vec![write_csv(config, "response.csv", "response", &columns, &rows)?];

    if monte_carlo {
        let settings = config.monte_carlo();
        let mut rows = Vec::new();
        for b in &all_blocks {
            for (branch, name, exact) in [(Branch::Plus, "plus", b.r_plus), (Branch::Minus, "minus", b.r_minus)] {
                let mc = spectral_monte_carlo(&gas, b.mode, branch, &settings)
                    .map_err(|e| CliError::numeric(at("monte-carlo", b.mode), e))?;
                for ((c, m), x) in COMPONENTS.iter().zip(mc.as_array()).zip(exact.as_array()) {
                    rows.push(vec![
                        num(b.mode.q()),
                        num(b.mode.z()),
                        name.to_owned(),
                        (*c).to_owned(),
                        num(*x),
                        num(m.value),
                        num(m.error_estimate),
                    ]);
                }
            }
        }
        let columns = [
            "q",
            "z",
            "branch",
            "component",
            "quadrature",
            "monte_carlo",
            "mc_error_estimate",
        ];
        files.push(write_csv(config, "response_mc.csv", "response", &columns, &rows)?);
    }
    Ok(done(files))
}

fn kernels(config: &RunConfig) -> Result<Outcome, CliError> {
    let gas = config.gas()?;
    let opts = config.response_options();
    let mut rows = Vec::new();
    for mode in config.modes()? {
        let b = response_blocks(&gas, mode, &opts).map_err(|e| CliError::numeric(at("response", mode), e))?;
        let k = bare_kernels(&b, mode).map_err(|e| CliError::numeric(at("bare-action", mode), e))?;
        rows.push(vec![
            num(mode.q()),
            num(mode.z()),
            num(k.re_tt.re),
            num(k.re_tt.im),
            num(k.im_tt),
            num(k.re_t.re),
            num(k.re_t.im),
            num(k.im_t),
        ]);
    }
    let columns = ["q", "z", "re_tt_re", "re_tt_im", "im_tt", "re_t_re", "re_t_im", "im_t"];
    Ok(done(vec![write_csv(
        config,
        "kernels.csv",
        "kernels",
        &columns,
        &rows,
    )?]))
}

/// Same nodes and values as the core `d_grid`, with the `Q` rows spread
/// over the available threads.
pub fn parallel_grid(
    gas: &InternalGas,
    config: &RunConfig,
    opts: &MeasureOptions,
) -> Result<DecoherenceGrid, CliError> {
    let window = config.grid_window();
    window.validate().map_err(|e| CliError::numeric("grid", e))?;
    let q_axis = window.q_axis();
    let z_axis = window.z_axis();
    let threads = std::thread::available_parallelism()
        .map_or(1, |n| n.get())
        .min(q_axis.len());
    let chunk = q_axis.len().div_ceil(threads);

    type Row = Vec<Result<(f64, f64), Defect>>;
    let rows: Vec<Row> = std::thread::scope(|s| {
        let handles: Vec<_> = q_axis
            .chunks(chunk)
            .map(|qs| {
                let z_axis = &z_axis;
                s.spawn(move || {
                    let mut out = Vec::with_capacity(qs.len() * z_axis.len());
                    for &q in qs {
                        for &z in z_axis {
                            out.push(
                                Mode::new(q, z)
                                    .and_then(|mode| measures_at(gas, mode, opts))
                                    .map(|m| (m.dtt, m.dt))
                                    .map_err(|error| Defect { q, z, error }),
                            );
                        }
                    }
                    out
                })
            })
            .collect();
        handles
            .into_iter()
            .map(|h| h.join().expect("grid worker panicked"))
            .collect()
    });

    let mut grid = DecoherenceGrid {
        q_axis,
        z_axis,
        dtt: Vec::new(),
        dt: Vec::new(),
        defects: Vec::new(),
    };
    for entry in rows.into_iter().flatten() {
        match entry {
            Ok((dtt, dt)) => {
                grid.dtt.push(dtt);
                grid.dt.push(dt);
            }
            Err(defect) => {
                grid.dtt.push(f64::NAN);
                grid.dt.push(f64::NAN);
                grid.defects.push(defect);
            }
        }
    }
    Ok(grid)
}

fn defects_json(defects: &[Defect]) -> Value {
    defects
        .iter()
        .map(|d| json!({ "q": d.q, "z": d.z, "error": d.error.to_string() }))
        .collect()
}

fn grid_csv(config: &RunConfig, command: &str, g: &DecoherenceGrid) -> Result<PathBuf, CliError> {
    let mut rows = Vec::with_capacity(g.dtt.len());
    for (i, &q) in g.q_axis.iter().enumerate() {
        for (j, &z) in g.z_axis.iter().enumerate() {
            let m = g.at(i, j);
            rows.push(vec![num(q), num(z), num(m.dtt), num(m.dt)]);
        }
    }
    write_csv(config, "grid.csv", command, &["q", "z", "dtt", "dT"], &rows)
}

fn grid_json(g: &DecoherenceGrid) -> Value {
    json!({
        "q_axis": { "min": g.q_axis[0], "max": g.q_axis[g.q_axis.len() - 1], "nodes": g.q_axis.len() },
        "z_axis": { "min": g.z_axis[0], "max": g.z_axis[g.z_axis.len() - 1], "nodes": g.z_axis.len() },
        "layout": "row-major, z fastest",
        "defects": defects_json(&g.defects),
    })
}

fn ridge_csv(config: &RunConfig, command: &str, r: &RidgeProfile) -> Result<PathBuf, CliError> {
    let rows: Vec<_> = r
        .q_axis
        .iter()
        .zip(r.dtt.iter().zip(&r.dt))
        .map(|(q, (a, b))| vec![num(*q), num(*a), num(*b)])
        .collect();
    write_csv(config, "ridge.csv", command, &["q", "dtt", "dT"], &rows)
}

fn ridge_json(r: &RidgeProfile) -> Value {
    json!({
        "argmax_q_tt": r.argmax_q_tt,
        "nodes": r.q_axis.len(),
        "defects": defects_json(&r.defects),
    })
}

fn ridge_of(gas: &InternalGas, config: &RunConfig) -> Result<RidgeProfile, CliError> {
    ridge_profile(
        gas,
        (config.ridge_q_min, config.ridge_q_max),
        config.ridge_nodes,
        &config.measure_options(),
    )
    .map_err(|e| CliError::numeric("ridge", e))
}

fn with_config(config: &RunConfig, command: &str, mut body: Value) -> Value {
    body["command"] = json!(command);
    body["config"] = serde_json::to_value(config).expect("config serializes");
    body
}

fn grid(config: &RunConfig) -> Result<Outcome, CliError> {
    let gas = config.gas()?;
    let g = parallel_grid(&gas, config, &config.measure_options())?;
    let files = vec![
        grid_csv(config, "grid", &g)?,
        write_json(config, "grid.json", &with_config(config, "grid", grid_json(&g)))?,
    ];
    Ok(Outcome {
        files,
        defects: g.defects.len(),
    })
}

fn ridge(config: &RunConfig) -> Result<Outcome, CliError> {
    let gas = config.gas()?;
    let r = ridge_of(&gas, config)?;
    let files = vec![
        ridge_csv(config, "ridge", &r)?,
        write_json(config, "ridge.json", &with_config(config, "ridge", ridge_json(&r)))?,
    ];
    Ok(Outcome {
        files,
        defects: r.defects.len(),
    })
}

fn hydrofit(config: &RunConfig) -> Result<Outcome, CliError> {
    let gas = config.gas()?;
    let c = fit_hydro_coefficients(&gas, &config.fit_settings()).map_err(|e| CliError::numeric("hydro fit", e))?;
    let reference = match compare_with_reference(&gas, &c) {
        Ok(r) => json!({
            "relative_deviation": {
                "a0": r.a0, "az": r.az, "akk": r.akk, "b0": r.b0, "bz": r.bz, "bkk": r.bkk,
            },
        }),
        Err(_) => Value::Null,
    };
    let body = json!({
        "a0": c.a0,
        "az": c.az,
        "akk": c.akk,
        "b0": c.b0,
        "bz": c.bz,
        "bkk": c.bkk,
        "bz_alt_normalization": c.bz_alt_normalization,
        "g0": c.g0,
        "gt": c.gt,
        "window": { "q_max": c.fit_window.0, "z_max": c.fit_window.1 },
        "residuals": { "relative_rms": c.fit_residual, "window_drift": c.window_drift },
        "reference": reference,
    });
    let path = write_json(config, "hydrofit.json", &with_config(config, "hydrofit", body))?;
    Ok(done(vec![path]))
}

fn width_json(w: &FlowWidth) -> Value {
    json!({ "moment": w.moment, "gaussian_fit": w.gaussian_fit, "fit_residual": w.fit_residual })
}

fn staticflow(config: &RunConfig) -> Result<Outcome, CliError> {
    let gas = config.gas()?;
    let p = static_flow(&gas, &config.flow_settings()).map_err(|e| CliError::numeric("static flow", e))?;
    let rows: Vec<_> = p
        .x_axis
        .iter()
        .zip(p.n_x.iter().zip(&p.jt_x))
        .map(|(x, (n, j))| vec![num(*x), num(*n), num(*j)])
        .collect();
    let csv = write_csv(config, "staticflow.csv", "staticflow", &["x", "n_x", "jT_x"], &rows)?;
    let ell2 = p.ell_ext * p.ell_ext;
    let body = json!({
        "ell_ext": p.ell_ext,
        "ell_flow": p.density_width.gaussian_fit,
        "ell_flow_transverse": p.transverse_width.gaussian_fit,
        "mode": match p.mode { FlowMode::Exact => "exact", FlowMode::GaussianApprox => "gaussian-approx" },
        "density_width": width_json(&p.density_width),
        "transverse_width": width_json(&p.transverse_width),
        "gaussian_prediction": {
            "density": (ell2 + 1.0 / 3.0).sqrt(),
            "transverse": (ell2 + 2.0 / 3.0).sqrt(),
        },
    });
    let json = write_json(config, "staticflow.json", &with_config(config, "staticflow", body))?;
    Ok(done(vec![csv, json]))
}

fn figures_data(config: &RunConfig) -> Result<Outcome, CliError> {
    let gas = config.gas()?;
    let g = parallel_grid(&gas, config, &config.measure_options())?;
    let r = ridge_of(&gas, config)?;
    let body = json!({
        "units": "hbar = m = k_gas = 1; Q = q/k_gas, z = omega/(Q k_gas^2); D in units of 1/sqrt(g0)",
        "grid": grid_json(&g),
        "ridge": ridge_json(&r),
    });
    let files = vec![
        grid_csv(config, "figures-data", &g)?,
        ridge_csv(config, "figures-data", &r)?,
        write_json(config, "metadata.json", &with_config(config, "figures-data", body))?,
    ];
    Ok(Outcome {
        files,
        defects: g.defects.len() + r.defects.len(),
    })
}
