use std::fs;
use std::path::{Path, PathBuf};

use clap::ValueEnum;
use qsg_core::bec::{KickOptions, PacketConfig};
use qsg_core::coupling::{RegimeThresholds, TimingBudget};
use qsg_core::fields::LoopGeometry;
use qsg_core::fluxqubit::{FluxGrid, FluxQubitParams};
use qsg_core::CONSTANTS;
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::error::CliError;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize, ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    #[default]
    Csv,
    Json,
}

impl Format {
    pub fn extension(self) -> &'static str {
        match self {
            Format::Csv => "csv",
            Format::Json => "json",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct LoopConfig {
    pub r_inner: f64,
    pub r_outer: f64,
    pub thickness: f64,
    /// Overrides the rectangular-section equivalent radius.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub a_equiv: Option<f64>,
}

impl Default for LoopConfig {
    fn default() -> Self {
        Self {
            r_inner: 2.0e-6,
            r_outer: 2.5e-6,
            thickness: 1.0e-6,
            a_equiv: None,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct QubitConfig {
    pub l: f64,
    pub c_j: f64,
    /// Defaults to `Φ₀/4L`.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub i_c: Option<f64>,
    /// Defaults to `Φ₀/2`.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub phi_a: Option<f64>,
    pub grid_points: usize,
}

impl Default for QubitConfig {
    fn default() -> Self {
        Self {
            l: 6.44e-12,
            c_j: 1e-15,
            i_c: None,
            phi_a: None,
            grid_points: 4096,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct CrossingConfig {
    /// Entry speed along x (m/s).
    pub v0_x: f64,
    /// Height of the path above the loop plane (m).
    pub z_pass: f64,
    /// Half-width of the interaction region (m).
    pub window: f64,
    pub n_steps: usize,
    pub threshold_fraction: f64,
    pub widen_by_extent: bool,
}

impl Default for CrossingConfig {
    fn default() -> Self {
        Self {
            v0_x: 0.45,
            z_pass: 1.25e-6,
            window: 25e-6,
            n_steps: 4001,
            threshold_fraction: 0.05,
            widen_by_extent: true,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct BudgetConfig {
    pub t_h: f64,
    pub t_m: f64,
    pub t_d: f64,
    pub required: f64,
}

impl Default for BudgetConfig {
    fn default() -> Self {
        let b = TimingBudget::default();
        Self {
            t_h: b.t_h,
            t_m: b.t_m,
            t_d: b.t_d,
            required: b.required,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct PatternConfig {
    /// Envelope width at the detector; defaults to the packet `σ_z`.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub sigma: Option<f64>,
    pub n_points: usize,
}

impl Default for PatternConfig {
    fn default() -> Self {
        Self {
            sigma: None,
            n_points: 4001,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct BackactionConfig {
    pub z0: f64,
    pub threshold: f64,
}

impl Default for BackactionConfig {
    fn default() -> Self {
        Self {
            z0: 1.25e-6,
            threshold: qsg_core::backaction::NEGLIGIBLE_RATIO,
        }
    }
}

/// Everything a run depends on. Every field has a default.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct RunConfig {
    pub seed: u64,
    pub out: PathBuf,
    pub format: Format,
    #[serde(rename = "loop")]
    pub loop_geometry: LoopConfig,
    pub qubit: QubitConfig,
    pub packet: PacketConfig,
    pub crossing: CrossingConfig,
    pub budget: BudgetConfig,
    pub regime: RegimeThresholds,
    pub pattern: PatternConfig,
    pub backaction: BackactionConfig,
}

impl Default for RunConfig {
    fn default() -> Self {
        Self {
            seed: 42,
            out: PathBuf::from("out"),
            format: Format::default(),
            loop_geometry: LoopConfig::default(),
            qubit: QubitConfig::default(),
            packet: PacketConfig::default(),
            crossing: CrossingConfig::default(),
            budget: BudgetConfig::default(),
            regime: RegimeThresholds::default(),
            pattern: PatternConfig::default(),
            backaction: BackactionConfig::default(),
        }
    }
}

impl RunConfig {
    /// Read `path` (or start from defaults) and apply `key=value` overrides.
    pub fn load(path: Option<&Path>, sets: &[String]) -> Result<Self, CliError> {
        let mut table = match path {
            Some(p) => {
                let text = fs::read_to_string(p)
                    .map_err(|e| CliError::Config(format!("cannot read {}: {e}", p.display())))?;
                // typed parse first so errors carry a line number
                let located = |e: toml::de::Error| CliError::Config(format!("{}: {e}", p.display()));
                toml::from_str::<RunConfig>(&text).map_err(located)?;
                toml::from_str::<toml::Table>(&text).map_err(located)?
            }
            None => toml::Table::new(),
        };
        for s in sets {
            apply_set(&mut table, s)?;
        }
        let mut cfg: RunConfig = toml::Value::Table(table)
            .try_into()
            .map_err(|e: toml::de::Error| CliError::Config(e.to_string()))?;
        if cfg.out.as_os_str().is_empty() {
            cfg.out = PathBuf::from("out");
        }
        Ok(cfg)
    }

    pub fn to_toml(&self) -> Result<String, CliError> {
        toml::to_string(self).map_err(|e| CliError::Config(e.to_string()))
    }

    /// Short SHA-256 of the configuration, output directory excluded.
    pub fn hash(&self) -> String {
        let mut canonical = self.clone();
        canonical.out = PathBuf::new();
        let json = serde_json::to_string(&canonical).expect("config serialises");
        let digest = Sha256::digest(json.as_bytes());
        hex::encode(&digest[..8])
    }

    pub fn loop_geometry(&self) -> Result<LoopGeometry, CliError> {
        let c = &self.loop_geometry;
        let g = LoopGeometry::new(c.r_inner, c.r_outer, c.thickness)?;
        Ok(match c.a_equiv {
            Some(a) => g.with_equivalent_radius(a),
            None => g,
        })
    }

    pub fn qubit_params(&self) -> Result<FluxQubitParams, CliError> {
        let q = &self.qubit;
        let phi0 = CONSTANTS.phi0;
        Ok(FluxQubitParams::new(
            q.l,
            q.c_j,
            q.i_c.unwrap_or(phi0 / (4.0 * q.l)),
            q.phi_a.unwrap_or(phi0 / 2.0),
        )?)
    }

    /// Flux grid spanning `Φ_a ± 3Φ₀/4`.
    pub fn flux_grid(&self, params: &FluxQubitParams) -> Result<FluxGrid, CliError> {
        let phi0 = CONSTANTS.phi0;
        Ok(FluxGrid::new(
            params.phi_a - 0.75 * phi0,
            params.phi_a + 0.75 * phi0,
            self.qubit.grid_points,
        )?)
    }

    pub fn kick_options(&self) -> KickOptions {
        KickOptions {
            window: self.crossing.window,
            threshold_fraction: self.crossing.threshold_fraction,
            widen_by_extent: self.crossing.widen_by_extent,
            ..Default::default()
        }
    }

    pub fn budget(&self, dt: f64) -> TimingBudget {
        TimingBudget {
            dt,
            t_h: self.budget.t_h,
            t_m: self.budget.t_m,
            t_d: self.budget.t_d,
            required: self.budget.required,
        }
    }
}

fn apply_set(table: &mut toml::Table, assignment: &str) -> Result<(), CliError> {
    let (key, raw) = assignment
        .split_once('=')
        .ok_or_else(|| CliError::Config(format!("--set expects key=value, got {assignment:?}")))?;
    let value = parse_value(raw.trim());
    let parts: Vec<&str> = key.trim().split('.').collect();
    if parts.iter().any(|p| p.is_empty()) {
        return Err(CliError::Config(format!("bad key {key:?}")));
    }
    let (last, parents) = parts.split_last().expect("non-empty key");
    let mut cur = table;
    for p in parents {
        let entry = cur
            .entry(p.to_string())
            .or_insert_with(|| toml::Value::Table(toml::Table::new()));
        cur = entry
            .as_table_mut()
            .ok_or_else(|| CliError::Config(format!("{key}: {p} is not a table")))?;
    }
    cur.insert(last.to_string(), value);
    Ok(())
}

/// TOML literal if it parses as one, otherwise a bare string.
fn parse_value(raw: &str) -> toml::Value {
    toml::from_str::<toml::Table>(&format!("v = {raw}"))
        .ok()
        .and_then(|mut t| t.remove("v"))
        .unwrap_or_else(|| toml::Value::String(raw.to_string()))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn round_trip() {
        let mut cfg = RunConfig::load(None, &["qubit.i_c=9e-5".into(), "pattern.sigma=2e-6".into()]).unwrap();
        cfg.seed = 7;
        let text = cfg.to_toml().unwrap();
        let back: RunConfig = toml::from_str(&text).unwrap();
        assert_eq!(back, cfg);
        assert_eq!(back.hash(), cfg.hash());
    }

    #[test]
    fn overrides() {
        let cfg = RunConfig::load(None, &["crossing.v0_x=1".into(), "packet.n_atoms=10".into(), "format=\"json\"".into()]).unwrap();
        assert_eq!(cfg.crossing.v0_x, 1.0);
        assert_eq!(cfg.packet.n_atoms, 10);
        assert_eq!(cfg.format, Format::Json);
        let bare = RunConfig::load(None, &["format=json".into()]).unwrap();
        assert_eq!(bare.format, Format::Json);
    }

    #[test]
    fn unknown_key_rejected() {
        assert!(RunConfig::load(None, &["crossing.speed=1".into()]).is_err());
        assert!(RunConfig::load(None, &["nonsense".into()]).is_err());
    }

    #[test]
    fn hash_ignores_output_dir() {
        let a = RunConfig::load(None, &["out=\"a\"".into()]).unwrap();
        let b = RunConfig::load(None, &["out=\"b\"".into()]).unwrap();
        assert_eq!(a.hash(), b.hash());
        let c = RunConfig::load(None, &["seed=3".into()]).unwrap();
        assert_ne!(a.hash(), c.hash());
    }

    #[test]
    fn default_qubit_is_reference() {
        let cfg = RunConfig::default();
        let p = cfg.qubit_params().unwrap();
        let r = FluxQubitParams::reference();
        assert!((p.i_c - r.i_c).abs() <= 1e-15 * r.i_c);
        assert_eq!(p.phi_a, r.phi_a);
    }
}
