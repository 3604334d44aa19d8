use serde::{Deserialize, Serialize};

use super::state::gaussian_overlap;
use crate::bec::KickReport;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Regime {
    Strong,
    Weak,
    Product,
}

/// Ratio boundaries for the regimes.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct RegimeThresholds {
    /// Ratios at or above this are strong coupling.
    pub strong: f64,
    /// Ratios at or below this leave a product state.
    pub product: f64,
}

impl Default for RegimeThresholds {
    fn default() -> Self {
        Self { strong: 10.0, product: 0.1 }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct RegimeReport {
    /// `|p_R − p_L| / Δp_z`.
    pub ratio: f64,
    pub regime: Regime,
    /// Kick spread below a tenth of the packet width.
    pub dp_ok: bool,
    /// Single-atom overlap of the two kicked packets.
    pub branch_overlap: f64,
}

pub fn classify_regime(kicks: &KickReport) -> RegimeReport {
    classify_regime_with(kicks, &RegimeThresholds::default())
}

pub fn classify_regime_with(kicks: &KickReport, thresholds: &RegimeThresholds) -> RegimeReport {
    let ratio = kicks.separation() / kicks.dp_z;
    let regime = if ratio >= thresholds.strong {
        Regime::Strong
    } else if ratio <= thresholds.product {
        Regime::Product
    } else {
        Regime::Weak
    };
    RegimeReport {
        ratio,
        regime,
        dp_ok: kicks.kick_spread < 0.1 * kicks.dp_z,
        branch_overlap: gaussian_overlap(kicks.separation(), kicks.dp_z),
    }
}
