use std::f64::consts::PI;

use qsg_core::backaction::backaction_ratio_with;
use qsg_core::bec::{
    crossing_trajectory, kick_integral_with, make_packet, weak_coupling_threshold, BECPacket, KickReport,
};
use qsg_core::coupling::{
    apply_hadamard, classify_regime_with, entangle, gaussian_overlap, ignore_qubit_mixture, trace_protocol,
};
use qsg_core::fields::{gradient_flatness_map, loop_self_inductance, onaxis_dbz_dz, onaxis_gradient_extremum};
use qsg_core::fluxqubit::{find_minima, persistent_current, two_gaussian_summary, DoubleWellSummary, QubitLogicalState};
use qsg_core::interference::{expected_period, mixture_pattern, recombined_pattern, FringePattern};
use qsg_core::{Exec, CONSTANTS};
use serde::Serialize;

use crate::config::{Format, RunConfig};
use crate::error::CliError;
use crate::output::{num, to_json_text, write_file, Table};

/// Uniform bias field quoted alongside the loop geometry (T).
const BIAS_FIELD: f64 = 65e-6;

enum Check {
    Rel(f64),
    Min(f64),
    Band(f64, f64),
}

impl Check {
    fn passes(&self, simulated: f64, reference: f64) -> bool {
        match *self {
            Check::Rel(tol) => ((simulated - reference) / reference).abs() <= tol,
            Check::Min(lo) => simulated > lo,
            Check::Band(lo, hi) => (lo..=hi).contains(&simulated),
        }
    }

    fn describe(&self) -> String {
        match *self {
            Check::Rel(tol) => format!("rel {tol}"),
            Check::Min(lo) => format!("min {lo}"),
            Check::Band(lo, hi) => format!("band {lo}..{hi}"),
        }
    }
}

struct Reference {
    table: Table,
    failed: usize,
}

impl Reference {
    fn row(&mut self, quantity: &str, simulated: f64, reference: f64, check: Check, source: &str) {
        let pass = check.passes(simulated, reference);
        if !pass {
            self.failed += 1;
        }
        self.table.push(vec![
            quantity.to_string(),
            num(simulated),
            num(reference),
            format!("{:.4e}", (simulated - reference) / reference),
            check.describe(),
            source.to_string(),
            pass.to_string(),
        ]);
    }
}

fn summary(cfg: &RunConfig) -> Result<DoubleWellSummary, CliError> {
    let params = cfg.qubit_params()?;
    let grid = cfg.flux_grid(&params)?;
    Ok(two_gaussian_summary(&params, &grid)?)
}

/// Compare the model against the published operating point.
pub fn reproduce(cfg: &RunConfig) -> Result<(), CliError> {
    let geom = cfg.loop_geometry()?;
    let params = cfg.qubit_params()?;
    let mut rep = Reference {
        table: Table::new(&["quantity", "simulated", "reference", "rel_dev", "tolerance", "source", "pass"]),
        failed: 0,
    };

    rep.row("self_inductance_pH", loop_self_inductance(&geom)? * 1e12, 6.44, Check::Rel(0.15), "published");

    let minima = find_minima(&params)?;
    let i_l = persistent_current(&params, minima.phi_l);
    let i_r = persistent_current(&params, minima.phi_r);
    rep.row("persistent_current_left_uA", i_l.abs() * 1e6, 80.3, Check::Rel(0.005), "published");
    rep.row("persistent_current_right_uA", i_r.abs() * 1e6, 80.3, Check::Rel(0.005), "published");

    let bias = BIAS_FIELD * PI * geom.r_mean * geom.r_mean;
    rep.row("bias_flux_over_half_phi0", bias / (CONSTANTS.phi0 / 2.0), 1.0, Check::Rel(0.005), "published");

    let g = onaxis_dbz_dz(i_l.abs(), geom.r_mean, cfg.crossing.z_pass)?.abs();
    rep.row("gradient_at_z_pass_T_per_m", g, 8.18, Check::Rel(0.10), "published");
    let (z_star, _) = onaxis_gradient_extremum(i_l.abs(), geom.r_mean)?;
    rep.row("gradient_extremum_z_um", z_star * 1e6, geom.r_mean / 2.0 * 1e6, Check::Rel(0.005), "derived");

    let s = summary(cfg)?;
    rep.row("two_gaussian_fidelity", s.fidelity, 1.0, Check::Min(0.99), "derived");
    rep.row("flux_width_ratio", s.width_ratio(), 0.063, Check::Rel(0.10), "published");

    let packet = make_packet(&cfg.packet)?;
    let crossing = weak_coupling_threshold(
        &packet,
        &s,
        &geom,
        cfg.crossing.z_pass,
        &cfg.kick_options(),
        cfg.crossing.n_steps,
    )?;
    rep.row("weak_coupling_dt_us", crossing.report.dt * 1e6, 2.0, Check::Band(0.5, 4.0), "published");

    let back = backaction_ratio_with(
        &packet.spin,
        packet.n_atoms,
        geom.r_mean,
        cfg.backaction.z0,
        cfg.backaction.threshold,
    )?;
    rep.row("backaction_ratio", back.ratio, 8.4e-5, Check::Rel(0.05), "published");

    let path = write_file(cfg, &format!("reproduce.{}", cfg.format.extension()), &rep.table.render(cfg.format))?;
    print!("{}", rep.table.pretty());
    println!("wrote {}", path.display());
    if rep.failed > 0 {
        return Err(CliError::Acceptance { failed: rep.failed });
    }
    Ok(())
}

fn trajectory_kicks(cfg: &RunConfig, packet: &BECPacket, s: &DoubleWellSummary) -> Result<KickReport, CliError> {
    let c = &cfg.crossing;
    let traj = crossing_trajectory(packet, c.z_pass, c.v0_x, c.window, c.n_steps)?;
    Ok(kick_integral_with(packet, &traj, s, &cfg.loop_geometry()?, &cfg.kick_options())?)
}

#[derive(Serialize)]
struct ProtocolRecord<'a> {
    summary: &'a DoubleWellSummary,
    trace: &'a qsg_core::coupling::ProtocolTrace,
    pattern: PatternStats,
    mixture_pattern: PatternStats,
}

#[derive(Serialize)]
struct PatternStats {
    n_atoms: u64,
    delta_p: f64,
    period: Option<f64>,
    expected_period: Option<f64>,
    visibility: f64,
}

impl PatternStats {
    fn of(p: &FringePattern) -> Self {
        Self {
            n_atoms: p.n_atoms,
            delta_p: p.delta_p,
            period: p.period,
            expected_period: expected_period(p.n_atoms, p.delta_p),
            visibility: p.visibility,
        }
    }
}

fn render_pattern(p: &FringePattern, format: Format) -> String {
    match format {
        Format::Csv => {
            let period = p.period.map(num).unwrap_or_else(|| "none".into());
            let mut s = format!(
                "# N={} delta_p={} period={} visibility={}\nposition_m,density_per_m\n",
                p.n_atoms,
                num(p.delta_p),
                period,
                num(p.visibility)
            );
            for (x, y) in p.positions.iter().zip(&p.intensity) {
                s.push_str(&format!("{},{}\n", num(*x), num(*y)));
            }
            s
        }
        Format::Json => to_json_text(p),
    }
}

/// Full sequence: kicks, entanglement, Hadamard, measurement, fringes.
pub fn protocol(cfg: &RunConfig) -> Result<(), CliError> {
    let s = summary(cfg)?;
    let packet = make_packet(&cfg.packet)?;
    let kicks = trajectory_kicks(cfg, &packet, &s)?;
    let state = entangle(&packet, &kicks, &QubitLogicalState::ground())?;
    let budget = cfg.budget(kicks.dt);
    let (trace, pe) = trace_protocol(&state, &kicks, &cfg.regime, &budget, cfg.seed)?;

    let sigma = cfg.pattern.sigma.unwrap_or(packet.sigma_z());
    let delta_p = pe.momentum_separation();
    let pattern = recombined_pattern(&pe, delta_p, sigma, cfg.pattern.n_points)?;
    let mixture = mixture_pattern(&ignore_qubit_mixture(&apply_hadamard(&state)), delta_p, sigma, cfg.pattern.n_points)?;

    let record = ProtocolRecord {
        summary: &s,
        trace: &trace,
        pattern: PatternStats::of(&pattern),
        mixture_pattern: PatternStats::of(&mixture),
    };
    let ext = cfg.format.extension();
    let files = [
        write_file(cfg, "trace.json", &to_json_text(&record))?,
        write_file(cfg, &format!("pattern.{ext}"), &render_pattern(&pattern, cfg.format))?,
        write_file(cfg, &format!("pattern_mixture.{ext}"), &render_pattern(&mixture, cfg.format))?,
    ];

    println!("regime      {:?} (ratio {:.4})", trace.regime.regime, trace.regime.ratio);
    println!("degraded    {}", trace.degraded);
    println!("dt          {:.4e} s", kicks.dt);
    println!("budget      margin {:.1} (required {})", trace.budget_margin, budget.required);
    println!("outcome     {:?} (P(L) = {:.6})", trace.outcome, trace.p_left);
    println!("overlap^N   {:.4e}", trace.overlap_n);
    match pattern.period {
        Some(p) => println!("period      {p:.4e} m, visibility {:.4}", pattern.visibility),
        None => println!("period      none, visibility {:.4}", pattern.visibility),
    }
    println!("mixture     visibility {:.4e}", mixture.visibility);
    for f in files {
        println!("wrote {}", f.display());
    }
    Ok(())
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
pub enum SweepParam {
    /// Interaction time at the on-axis gradient (s).
    Dt,
    /// Entry speed (m/s).
    #[value(name = "v0_x")]
    V0X,
    /// Atom number.
    #[value(name = "n_atoms")]
    NAtoms,
    /// Junction critical current (A).
    #[value(name = "i_c")]
    IC,
    /// Junction capacitance (F).
    #[value(name = "c_j")]
    CJ,
    /// Height of the path above the loop (m).
    #[value(name = "z_pass")]
    ZPass,
}

pub struct SweepSpec {
    pub param: SweepParam,
    pub from: f64,
    pub to: f64,
    pub steps: usize,
    pub log: bool,
}

impl SweepSpec {
    fn values(&self) -> Result<Vec<f64>, CliError> {
        if self.steps == 0 {
            return Err(CliError::Usage("sweep needs --steps >= 1".into()));
        }
        if !(self.from.is_finite() && self.to.is_finite()) {
            return Err(CliError::Usage("sweep bounds must be finite".into()));
        }
        if self.log && !(self.from > 0.0 && self.to > 0.0) {
            return Err(CliError::Usage("log sweep needs positive bounds".into()));
        }
        if self.steps == 1 {
            return Ok(vec![self.from]);
        }
        let last = (self.steps - 1) as f64;
        Ok((0..self.steps)
            .map(|i| {
                let f = i as f64 / last;
                if self.log {
                    (self.from.ln() + f * (self.to.ln() - self.from.ln())).exp()
                } else {
                    self.from + f * (self.to - self.from)
                }
            })
            .collect())
    }
}

const SWEEP_COLUMNS: [&str; 14] = [
    "value",
    "dt_s",
    "p_l",
    "p_r",
    "separation",
    "dp_z",
    "ratio",
    "regime",
    "kick_spread",
    "two_branch_valid",
    "overlap_n",
    "budget_margin",
    "budget_ok",
    "fringe_period_m",
];

fn sweep_point(cfg: &RunConfig, base: &DoubleWellSummary, param: SweepParam, value: f64) -> Result<Vec<String>, CliError> {
    let mut cfg = cfg.clone();
    match param {
        SweepParam::Dt => {}
        SweepParam::V0X => cfg.crossing.v0_x = value,
        SweepParam::NAtoms => {
            if !(value >= 1.0 && value.is_finite()) {
                return Err(CliError::Usage(format!("atom number must be >= 1, got {value}")));
            }
            cfg.packet.n_atoms = value.round() as u64;
        }
        SweepParam::IC => cfg.qubit.i_c = Some(value),
        SweepParam::CJ => cfg.qubit.c_j = value,
        SweepParam::ZPass => cfg.crossing.z_pass = value,
    }
    let own;
    let s = match param {
        SweepParam::IC | SweepParam::CJ => {
            own = summary(&cfg)?;
            &own
        }
        _ => base,
    };
    let packet = make_packet(&cfg.packet)?;
    let kicks = match param {
        SweepParam::Dt => {
            let r = cfg.loop_geometry()?.r_mean;
            let g = onaxis_dbz_dz(s.i_l.abs(), r, cfg.crossing.z_pass)?.abs();
            KickReport::constant_gradient(&packet, s, g, value)
        }
        _ => trajectory_kicks(&cfg, &packet, s)?,
    };
    let regime = classify_regime_with(&kicks, &cfg.regime);
    let sep = kicks.separation();
    let n = packet.n_atoms as f64;
    let overlap_n = (n * gaussian_overlap(sep, kicks.dp_z).ln()).exp();
    let budget = cfg.budget(kicks.dt);
    let period = expected_period(packet.n_atoms, sep).map(num).unwrap_or_default();
    Ok(vec![
        num(value),
        num(kicks.dt),
        num(kicks.p_l),
        num(kicks.p_r),
        num(sep),
        num(kicks.dp_z),
        num(regime.ratio),
        format!("{:?}", regime.regime),
        num(kicks.kick_spread),
        (kicks.kick_spread < kicks.dp_z).to_string(),
        num(overlap_n),
        num(budget.margin()),
        budget.satisfied().to_string(),
        period,
    ])
}

/// One row per parameter value, computed in parallel, written in order.
pub fn sweep(cfg: &RunConfig, spec: &SweepSpec) -> Result<(), CliError> {
    let values = spec.values()?;
    let base = summary(cfg)?;
    let rows = Exec::default().try_map_slice(&values, |v| sweep_point(cfg, &base, spec.param, *v))?;
    let mut table = Table::new(&SWEEP_COLUMNS);
    for r in rows {
        table.push(r);
    }
    let name = clap::ValueEnum::to_possible_value(&spec.param)
        .map(|p| p.get_name().to_string())
        .unwrap_or_default();
    let path = write_file(cfg, &format!("sweep_{name}.{}", cfg.format.extension()), &table.render(cfg.format))?;
    println!("{} points over {name}", values.len());
    println!("wrote {}", path.display());
    Ok(())
}

pub struct MapSpec {
    pub rho_extent: f64,
    pub z_extent: f64,
    pub n: usize,
}

/// Gradient map around the crossing point at the left-well current.
pub fn fields_map(cfg: &RunConfig, spec: &MapSpec) -> Result<(), CliError> {
    let params = cfg.qubit_params()?;
    let minima = find_minima(&params)?;
    let current = persistent_current(&params, minima.phi_l).abs();
    let r = cfg.loop_geometry()?.r_mean;
    let map = gradient_flatness_map(current, r, cfg.crossing.z_pass, spec.rho_extent, spec.z_extent, spec.n)?;
    let mut table = Table::new(&["rho_m", "z_m", "dbz_dz_T_per_m"]);
    for s in &map.samples {
        table.push(vec![num(s.rho), num(s.z), num(s.dbz_dz)]);
    }
    let path = write_file(cfg, &format!("fields_map.{}", cfg.format.extension()), &table.render(cfg.format))?;
    println!("current     {:.4e} A", current);
    println!("reference   {:.4} T/m at z = {:.4e} m", map.reference, cfg.crossing.z_pass);
    println!("max |g/g0 - 1| = {:.4e}", map.max_relative_deviation);
    println!("wrote {}", path.display());
    Ok(())
}
