//! Run configuration: defaults, an optional flat TOML file and command-line
//! flags, merged in that order of increasing precedence.

use std::path::{Path, PathBuf};

use clap::{Args, ValueEnum};
use idealgas_ctp::decoherence::{GridWindow, MeasureOptions};
use idealgas_ctp::hydro::{FlowMode, FlowSettings, HydroFitSettings};
use idealgas_ctp::quadrature::Tolerance;
use idealgas_ctp::response::MonteCarloSettings;
use idealgas_ctp::{GasSpec, InternalGas, Mode, ResponseOptions};
use serde::{Deserialize, Serialize};

use crate::CliError;

/// Overrides the output directory of the config file (but not `--out-dir`).
pub const OUT_DIR_ENV: &str = "CTPGAS_OUT_DIR";

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum StatisticsName {
    Fermion,
    Boson,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, ValueEnum)]
#[serde(rename_all = "kebab-case")]
pub enum FlowModeName {
    Exact,
    GaussianApprox,
}

/// One layer of settings. Every field is optional so that layers can be
/// stacked; the same struct parses the config file and the flags.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize, Args)]
#[serde(deny_unknown_fields)]
pub struct ConfigLayer {
    /// Particle statistics
    #[arg(long, global = true)]
    pub statistics: Option<StatisticsName>,
    /// Spin degeneracy n_s
    #[arg(long = "n-s", global = true, alias = "spin-degeneracy")]
    pub n_s: Option<u32>,
    /// Temperature (ħ = m = k_B = 1)
    #[arg(long, global = true, allow_negative_numbers = true)]
    pub temperature: Option<f64>,
    /// Chemical potential
    #[arg(long, global = true, allow_negative_numbers = true)]
    pub mu: Option<f64>,

    #[arg(long, global = true)]
    pub rel_tol: Option<f64>,
    #[arg(long, global = true)]
    pub abs_tol: Option<f64>,
    #[arg(long, global = true)]
    pub max_evaluations: Option<usize>,
    /// Width in z of the continuum-edge warning band
    #[arg(long, global = true)]
    pub edge_band: Option<f64>,

    /// Modes for `response` and `kernels`: all pairs of q_values × z_values
    #[arg(long, global = true, value_delimiter = ',', allow_negative_numbers = true)]
    pub q_values: Option<Vec<f64>>,
    #[arg(long, global = true, value_delimiter = ',', allow_negative_numbers = true)]
    pub z_values: Option<Vec<f64>>,

    #[arg(long, global = true)]
    pub grid_q_min: Option<f64>,
    #[arg(long, global = true)]
    pub grid_q_max: Option<f64>,
    #[arg(long, global = true)]
    pub grid_q_nodes: Option<usize>,
    #[arg(long, global = true)]
    pub grid_z_min: Option<f64>,
    #[arg(long, global = true)]
    pub grid_z_max: Option<f64>,
    #[arg(long, global = true)]
    pub grid_z_nodes: Option<usize>,

    #[arg(long, global = true)]
    pub ridge_q_min: Option<f64>,
    #[arg(long, global = true)]
    pub ridge_q_max: Option<f64>,
    #[arg(long, global = true)]
    pub ridge_nodes: Option<usize>,

    #[arg(long, global = true)]
    pub fit_q_max: Option<f64>,
    #[arg(long, global = true)]
    pub fit_z_max: Option<f64>,
    #[arg(long, global = true)]
    pub fit_nodes: Option<usize>,
    #[arg(long, global = true)]
    pub fit_residual_threshold: Option<f64>,

    /// Source width for `staticflow`, in units of 1/k_F
    #[arg(long, global = true)]
    pub ell_ext: Option<f64>,
    #[arg(long, global = true)]
    pub flow_mode: Option<FlowModeName>,
    #[arg(long, global = true, allow_negative_numbers = true)]
    pub u_density: Option<f64>,
    #[arg(long, global = true, allow_negative_numbers = true)]
    pub u_transverse: Option<f64>,
    #[arg(long, global = true)]
    pub nodes_per_length: Option<f64>,
    #[arg(long, global = true)]
    pub padding: Option<usize>,

    /// Seed of the Monte-Carlo cross-check
    #[arg(long, global = true)]
    pub seed: Option<u64>,
    #[arg(long, global = true)]
    pub mc_samples: Option<usize>,
    #[arg(long, global = true)]
    pub mc_smear: Option<f64>,

    #[arg(long, global = true)]
    pub out_dir: Option<PathBuf>,
}

/// Fully resolved configuration, echoed into every output file.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    pub statistics: StatisticsName,
    pub n_s: u32,
    pub temperature: f64,
    pub mu: f64,
    pub rel_tol: f64,
    pub abs_tol: f64,
    pub max_evaluations: usize,
    pub edge_band: f64,
    pub q_values: Vec<f64>,
    pub z_values: Vec<f64>,
    pub grid_q_min: f64,
    pub grid_q_max: f64,
    pub grid_q_nodes: usize,
    pub grid_z_min: f64,
    pub grid_z_max: f64,
    pub grid_z_nodes: usize,
    pub ridge_q_min: f64,
    pub ridge_q_max: f64,
    pub ridge_nodes: usize,
    pub fit_q_max: f64,
    pub fit_z_max: f64,
    pub fit_nodes: usize,
    pub fit_residual_threshold: f64,
    pub ell_ext: f64,
    pub flow_mode: FlowModeName,
    pub u_density: f64,
    pub u_transverse: f64,
    pub nodes_per_length: f64,
    pub padding: usize,
    pub seed: u64,
    pub mc_samples: usize,
    pub mc_smear: f64,
    pub out_dir: PathBuf,
}

impl Default for RunConfig {
    /// Zero-temperature spin-½ Fermi sea with `k_F = 1`.
    fn default() -> Self {
        let tol = Tolerance::default();
        let grid = GridWindow::default();
        let fit = HydroFitSettings::default();
        let flow = FlowSettings::default();
        let mc = MonteCarloSettings::default();
        Self {
            statistics: StatisticsName::Fermion,
            n_s: 2,
            temperature: 0.0,
            mu: 0.5,
            rel_tol: tol.rel,
            abs_tol: tol.abs,
            max_evaluations: tol.max_evaluations,
            edge_band: ResponseOptions::default().edge_band,
            q_values: vec![0.5, 1.0, 2.0],
            z_values: vec![0.25, 0.5, 1.0],
            grid_q_min: grid.q_range.0,
            grid_q_max: grid.q_range.1,
            grid_q_nodes: grid.q_nodes,
            grid_z_min: grid.z_range.0,
            grid_z_max: grid.z_range.1,
            grid_z_nodes: grid.z_nodes,
            ridge_q_min: grid.q_range.0,
            ridge_q_max: grid.q_range.1,
            ridge_nodes: grid.q_nodes,
            fit_q_max: fit.q_max,
            fit_z_max: fit.z_max,
            fit_nodes: fit.q_nodes,
            fit_residual_threshold: fit.residual_threshold,
            ell_ext: flow.ell_ext,
            flow_mode: FlowModeName::GaussianApprox,
            u_density: flow.u_density,
            u_transverse: flow.u_transverse,
            nodes_per_length: flow.nodes_per_length,
            padding: flow.padding,
            seed: mc.seed,
            mc_samples: mc.samples,
            mc_smear: mc.smear,
            out_dir: PathBuf::from("out"),
        }
    }
}

macro_rules! apply_layer {
    ($config:expr, $layer:expr, $($field:ident),* $(,)?) => {
        $(if let Some(v) = $layer.$field.clone() { $config.$field = v; })*
    };
}

impl RunConfig {
    fn apply(&mut self, layer: &ConfigLayer) {
        apply_layer!(
            self,
            layer,
            statistics,
            n_s,
            temperature,
            mu,
            rel_tol,
            abs_tol,
            max_evaluations,
            edge_band,
            q_values,
            z_values,
            grid_q_min,
            grid_q_max,
            grid_q_nodes,
            grid_z_min,
            grid_z_max,
            grid_z_nodes,
            ridge_q_min,
            ridge_q_max,
            ridge_nodes,
            fit_q_max,
            fit_z_max,
            fit_nodes,
            fit_residual_threshold,
            ell_ext,
            flow_mode,
            u_density,
            u_transverse,
            nodes_per_length,
            padding,
            seed,
            mc_samples,
            mc_smear,
            out_dir,
        );
    }

    /// Defaults, then the config file, then `$CTPGAS_OUT_DIR`, then flags.
    pub fn resolve(file: Option<&Path>, flags: &ConfigLayer, env_out_dir: Option<PathBuf>) -> Result<Self, CliError> {
        let mut config = Self::default();
        if let Some(path) = file {
            let text = std::fs::read_to_string(path)
                .map_err(|e| CliError::Usage(format!("cannot read config {}: {e}", path.display())))?;
            let layer: ConfigLayer = toml::from_str(&text)
                .map_err(|e| CliError::Usage(format!("config {}: {}", path.display(), e.message())))?;
            config.apply(&layer);
        }
        if let Some(dir) = env_out_dir {
            config.out_dir = dir;
        }
        config.apply(flags);
        config.validate()?;
        Ok(config)
    }

    pub fn validate(&self) -> Result<(), CliError> {
        self.gas()?;
        let usage = |field: &str, reason: &str| Err(CliError::Usage(format!("`{field}` {reason}")));
        if !(self.rel_tol > 0.0 && self.rel_tol < 1.0) {
            return usage("rel_tol", "must lie in (0, 1)");
        }
        if !(self.abs_tol >= 0.0) {
            return usage("abs_tol", "must be nonnegative");
        }
        if self.max_evaluations < 21 {
            return usage("max_evaluations", "must allow at least one rule (21)");
        }
        if !(self.edge_band >= 0.0) {
            return usage("edge_band", "must be nonnegative");
        }
        if self.q_values.iter().any(|q| !(*q > 0.0 && q.is_finite())) {
            return usage("q_values", "must be positive and finite");
        }
        if self.z_values.iter().any(|z| !z.is_finite()) {
            return usage("z_values", "must be finite");
        }
        if !(self.grid_q_min > 0.0 && self.grid_q_max > self.grid_q_min) {
            return usage("grid_q_min", "need 0 < grid_q_min < grid_q_max");
        }
        if !(self.grid_z_min >= 0.0 && self.grid_z_max > self.grid_z_min) {
            return usage("grid_z_min", "need 0 <= grid_z_min < grid_z_max");
        }
        if self.grid_q_nodes < 2 || self.grid_z_nodes < 2 {
            return usage("grid_q_nodes", "need at least 2 nodes per axis");
        }
        if !(self.ridge_q_min > 0.0 && self.ridge_q_max > self.ridge_q_min) {
            return usage("ridge_q_min", "need 0 < ridge_q_min < ridge_q_max");
        }
        if self.ridge_nodes < 3 {
            return usage("ridge_nodes", "need at least 3 nodes");
        }
        if !(self.fit_q_max > 0.0 && self.fit_z_max > 0.0) {
            return usage("fit_q_max", "fit window must be positive");
        }
        if self.fit_nodes < 3 {
            return usage("fit_nodes", "need at least 3 nodes per axis");
        }
        if !(self.fit_residual_threshold > 0.0) {
            return usage("fit_residual_threshold", "must be positive");
        }
        if !(self.ell_ext > 0.0 && self.ell_ext.is_finite()) {
            return usage("ell_ext", "must be positive");
        }
        if !(self.nodes_per_length >= 8.0) {
            return usage("nodes_per_length", "must be at least 8");
        }
        if self.padding < 4 {
            return usage("padding", "must be at least 4");
        }
        if !(self.mc_smear > 0.0) {
            return usage("mc_smear", "must be positive");
        }
        if self.mc_samples < 8 {
            return usage("mc_samples", "need at least 8 samples");
        }
        Ok(())
    }

    pub fn gas_spec(&self) -> Result<GasSpec, CliError> {
        let statistics = match self.statistics {
            StatisticsName::Fermion => idealgas_ctp::Statistics::Fermion,
            StatisticsName::Boson => idealgas_ctp::Statistics::Boson,
        };
        GasSpec::new(statistics, self.n_s, self.temperature, self.mu).map_err(|e| match e {
            idealgas_ctp::Error::InvalidSpec { field, reason } => CliError::Usage(format!("`{field}` {reason}")),
            other => CliError::Usage(other.to_string()),
        })
    }

    pub fn gas(&self) -> Result<InternalGas, CliError> {
        self.gas_spec()?
            .to_internal(&self.tolerance())
            .map_err(|e| CliError::numeric("gas", e))
    }

    pub fn tolerance(&self) -> Tolerance {
        Tolerance {
            rel: self.rel_tol,
            abs: self.abs_tol,
            max_evaluations: self.max_evaluations,
        }
    }

    pub fn response_options(&self) -> ResponseOptions {
        ResponseOptions {
            tol: self.tolerance(),
            edge_band: self.edge_band,
        }
    }

    pub fn measure_options(&self) -> MeasureOptions {
        MeasureOptions {
            response: self.response_options(),
            ..Default::default()
        }
    }

    pub fn modes(&self) -> Result<Vec<Mode>, CliError> {
        let mut modes = Vec::new();
        for &q in &self.q_values {
            for &z in &self.z_values {
                modes.push(Mode::new(q, z).map_err(|e| CliError::Usage(e.to_string()))?);
            }
        }
        Ok(modes)
    }

    pub fn grid_window(&self) -> GridWindow {
        GridWindow {
            q_range: (self.grid_q_min, self.grid_q_max),
            z_range: (self.grid_z_min, self.grid_z_max),
            q_nodes: self.grid_q_nodes,
            z_nodes: self.grid_z_nodes,
        }
    }

    pub fn fit_settings(&self) -> HydroFitSettings {
        HydroFitSettings {
            q_max: self.fit_q_max,
            z_max: self.fit_z_max,
            q_nodes: self.fit_nodes,
            z_nodes: self.fit_nodes,
            residual_threshold: self.fit_residual_threshold,
            response: self.response_options(),
        }
    }

    pub fn flow_settings(&self) -> FlowSettings {
        FlowSettings {
            ell_ext: self.ell_ext,
            u_density: self.u_density,
            u_transverse: self.u_transverse,
            mode: match self.flow_mode {
                FlowModeName::Exact => FlowMode::Exact,
                FlowModeName::GaussianApprox => FlowMode::GaussianApprox,
            },
            nodes_per_length: self.nodes_per_length,
            padding: self.padding,
        }
    }

    pub fn monte_carlo(&self) -> MonteCarloSettings {
        MonteCarloSettings {
            smear: self.mc_smear,
            samples: self.mc_samples,
            seed: self.seed,
            ..Default::default()
        }
    }
}
