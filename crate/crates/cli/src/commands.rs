//! The four subcommands as plain functions returning serializable reports.

use std::fmt::Write as _;

use anyhow::{anyhow, bail, Result};
use bpec::montecarlo::{self, AggregateStats};
use bpec::protocol::plan_scheme;
use bpec::rate::*;
use bpec::{ModeParams, Scheme};
use serde::Serialize;

use crate::config::{EtaGrid, RunConfig};
use crate::format::sig12;

pub const SWEEP_HEADER: &str = "eta,outer_sum,c1_sum,c2_sum,c3_sum,inter_modal_sum,intra_modal_sum,no_feedback_sum";

/// Flat summary of the bounds and achievable rates at one parameter point.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RegionReport {
    pub delta_a: f64,
    pub delta_b: f64,
    pub eta: f64,
    pub avg_erasure: f64,
    /// `[c1, c2, bound]` for `c1·R1 + c2·R2 ≤ bound`.
    pub c1_halfspaces: Vec<[f64; 3]>,
    pub c2_halfspaces: Vec<[f64; 3]>,
    pub c3_halfspaces: Vec<[f64; 3]>,
    pub c1_sum: f64,
    pub c2_sum: f64,
    pub c3_sum: f64,
    pub outer_vertices: Vec<[f64; 2]>,
    pub max_sum_rate: f64,
    pub binding: Vec<&'static str>,
    pub thm2_threshold: Option<f64>,
    pub thm2_holds: bool,
    pub alpha_star: Option<f64>,
    pub achievable_intermodal_sum: Option<f64>,
    pub achievable_intramodal_sum: f64,
    pub achievable_nofeedback_sum: f64,
}

fn halfspaces(r: &RateRegion<f64>) -> Vec<[f64; 3]> {
    r.halfspaces().iter().map(|h| [h.c1, h.c2, h.bound]).collect()
}

fn intermodal(p: &ModeParams<f64>) -> Option<f64> {
    achievable_intermodal_sum(p).ok()
}

pub fn cmd_region(p: &ModeParams<f64>) -> Result<RegionReport> {
    let outer = outer_region(p);
    let [c1, c2, c3] = BoundKind::ALL.map(|k| k.region(p));
    Ok(RegionReport {
        delta_a: p.delta_a,
        delta_b: p.delta_b,
        eta: p.eta,
        avg_erasure: avg_erasure(p),
        c1_halfspaces: halfspaces(&c1),
        c2_halfspaces: halfspaces(&c2),
        c3_halfspaces: halfspaces(&c3),
        c1_sum: c1.max_sum_rate()?,
        c2_sum: c2.max_sum_rate()?,
        c3_sum: c3.max_sum_rate()?,
        outer_vertices: outer.vertices()?.iter().map(|v| [v.r1, v.r2]).collect(),
        max_sum_rate: outer.max_sum_rate()?,
        binding: binding_regions(p)?.into_iter().map(BoundKind::name).collect(),
        thm2_threshold: thm2_threshold(p.delta_a, p.delta_b).ok(),
        thm2_holds: thm2_holds(p),
        alpha_star: alpha_star(p).ok(),
        achievable_intermodal_sum: intermodal(p),
        achievable_intramodal_sum: achievable_intramodal_sum(p),
        achievable_nofeedback_sum: achievable_nofeedback_sum(p),
    })
}

pub fn region_text(r: &RegionReport) -> String {
    let mut s = String::new();
    let opt = |v: Option<f64>| v.map_or("n/a".to_string(), sig12);
    let _ = writeln!(s, "delta_a = {}, delta_b = {}, eta = {}", sig12(r.delta_a), sig12(r.delta_b), sig12(r.eta));
    for (name, hs, sum) in [("C1", &r.c1_halfspaces, r.c1_sum), ("C2", &r.c2_halfspaces, r.c2_sum), ("C3", &r.c3_halfspaces, r.c3_sum)] {
        let _ = writeln!(s, "{name} (max sum {}):", sig12(sum));
        for [a, b, c] in hs {
            let _ = writeln!(s, "  {}*R1 + {}*R2 <= {}", sig12(*a), sig12(*b), sig12(*c));
        }
    }
    let _ = writeln!(s, "outer region vertices:");
    for [a, b] in &r.outer_vertices {
        let _ = writeln!(s, "  ({}, {})", sig12(*a), sig12(*b));
    }
    let _ = writeln!(s, "max_sum_rate = {} (binding: {})", sig12(r.max_sum_rate), r.binding.join(", "));
    let _ = writeln!(s, "thm2_threshold = {}, thm2_holds = {}", opt(r.thm2_threshold), r.thm2_holds);
    let _ = writeln!(s, "alpha_star = {}", opt(r.alpha_star));
    let _ = writeln!(s, "achievable_intermodal_sum = {}", opt(r.achievable_intermodal_sum));
    let _ = writeln!(s, "achievable_intramodal_sum = {}", sig12(r.achievable_intramodal_sum));
    let _ = writeln!(s, "achievable_nofeedback_sum = {}", sig12(r.achievable_nofeedback_sum));
    s
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SweepRow {
    pub eta: f64,
    pub outer_sum: f64,
    pub c1_sum: f64,
    pub c2_sum: f64,
    pub c3_sum: f64,
    pub inter_modal_sum: Option<f64>,
    pub intra_modal_sum: f64,
    pub no_feedback_sum: f64,
}

pub fn cmd_sweep(delta_a: f64, delta_b: f64, grid: &EtaGrid) -> Result<Vec<SweepRow>> {
    grid.points()
        .into_iter()
        .map(|eta| {
            let p = ModeParams::new(delta_a, delta_b, eta).map_err(|e| anyhow!(e))?;
            let [c1, c2, c3] = BoundKind::ALL.map(|k| k.region(&p).max_sum_rate());
            Ok(SweepRow {
                eta,
                outer_sum: outer_region(&p).max_sum_rate()?,
                c1_sum: c1?,
                c2_sum: c2?,
                c3_sum: c3?,
                inter_modal_sum: if delta_a >= delta_b { intermodal(&p) } else { None },
                intra_modal_sum: achievable_intramodal_sum(&p),
                no_feedback_sum: achievable_nofeedback_sum(&p),
            })
        })
        .collect()
}

pub fn sweep_csv(rows: &[SweepRow]) -> String {
    let mut s = String::from(SWEEP_HEADER);
    s.push('\n');
    for r in rows {
        let inter = r.inter_modal_sum.map(sig12).unwrap_or_default();
        let cols = [
            sig12(r.eta),
            sig12(r.outer_sum),
            sig12(r.c1_sum),
            sig12(r.c2_sum),
            sig12(r.c3_sum),
            inter,
            sig12(r.intra_modal_sum),
            sig12(r.no_feedback_sum),
        ];
        s.push_str(&cols.join(","));
        s.push('\n');
    }
    s
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SimulateReport {
    pub delta_a: f64,
    pub delta_b: f64,
    pub delta_t: f64,
    pub eta: f64,
    pub n: usize,
    pub n_t: usize,
    pub scheme: &'static str,
    pub trials: usize,
    pub seed: u64,
    pub guard_coeff: f64,
    pub guard_slots: usize,
    pub message_len_1: usize,
    pub message_len_2: usize,
    pub mean_sum_rate: f64,
    pub sum_rate_ci95_low: f64,
    pub sum_rate_ci95_high: f64,
    pub failure_rate_1: f64,
    pub failure_rate_2: f64,
    pub analytic_sum_rate: f64,
    pub outer_sum_rate: f64,
}

pub fn analytic_sum(p: &ModeParams<f64>, scheme: Scheme) -> Result<f64> {
    Ok(match scheme {
        Scheme::InterModal => achievable_intermodal_sum(p)?,
        Scheme::IntraModal => achievable_intramodal_sum(p),
        Scheme::NoFeedback => achievable_nofeedback_sum(p),
    })
}

pub fn cmd_simulate(cfg: &RunConfig) -> Result<SimulateReport> {
    let sim = cfg.sim_config()?;
    let p = sim.params;
    let plan = plan_scheme(&p, cfg.n, sim.scheme, cfg.guard_coeff)?;
    let AggregateStats { trials, mean_sum_rate, sum_rate_ci95, failure_rate_1, failure_rate_2 } =
        montecarlo::simulate(&sim, cfg.trials, cfg.seed)?;
    Ok(SimulateReport {
        delta_a: cfg.delta_a,
        delta_b: cfg.delta_b,
        delta_t: cfg.delta_t,
        eta: cfg.eta,
        n: cfg.n,
        n_t: cfg.n_t,
        scheme: sim.scheme.short_name(),
        trials,
        seed: cfg.seed,
        guard_coeff: cfg.guard_coeff,
        guard_slots: plan.guard,
        message_len_1: plan.m1,
        message_len_2: plan.m2,
        mean_sum_rate,
        sum_rate_ci95_low: sum_rate_ci95.0,
        sum_rate_ci95_high: sum_rate_ci95.1,
        failure_rate_1,
        failure_rate_2,
        analytic_sum_rate: analytic_sum(&p, sim.scheme)?,
        outer_sum_rate: outer_region(&p).max_sum_rate()?,
    })
}

pub fn simulate_text(r: &SimulateReport) -> String {
    let mut s = String::new();
    let _ = writeln!(
        s,
        "{} coding, delta_a = {}, delta_b = {}, eta = {}, n = {} ({} transient slots, delta_t = {})",
        r.scheme,
        sig12(r.delta_a),
        sig12(r.delta_b),
        sig12(r.eta),
        r.n,
        r.n_t,
        sig12(r.delta_t)
    );
    let _ = writeln!(s, "messages: {} + {} packets, guard {} slots", r.message_len_1, r.message_len_2, r.guard_slots);
    let _ = writeln!(
        s,
        "mean sum-rate {} over {} trials (95% CI {} .. {})",
        sig12(r.mean_sum_rate),
        r.trials,
        sig12(r.sum_rate_ci95_low),
        sig12(r.sum_rate_ci95_high)
    );
    let _ = writeln!(s, "failure rate: user 1 {}, user 2 {}", sig12(r.failure_rate_1), sig12(r.failure_rate_2));
    let _ = writeln!(s, "analytic {}, outer bound {}", sig12(r.analytic_sum_rate), sig12(r.outer_sum_rate));
    s
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
pub enum Figure {
    Fig3,
    Fig4,
    Fig5,
}

pub const FIG5_HEADER: &str = "kind,r1,r2,sum";

/// CSV behind one of the standard figures.
pub fn cmd_figure(fig: Figure) -> Result<String> {
    let grid = EtaGrid { start: 0.0, stop: 1.0, step: 0.01 };
    match fig {
        Figure::Fig3 => Ok(sweep_csv(&cmd_sweep(0.75, 0.0, &grid)?)),
        Figure::Fig4 => Ok(sweep_csv(&cmd_sweep(0.75, 0.125, &grid)?)),
        Figure::Fig5 => fig5_csv(&ModeParams::new(0.75, 0.0, 1.0 / 6.0).map_err(|e| anyhow!(e))?),
    }
}

/// Outer polytope vertices followed by the symmetric operating points of
/// the three strategies.
pub fn fig5_csv(p: &ModeParams<f64>) -> Result<String> {
    let mut s = String::from(FIG5_HEADER);
    s.push('\n');
    for v in outer_region(p).vertices()? {
        let _ = writeln!(s, "outer_vertex,{},{},{}", sig12(v.r1), sig12(v.r2), sig12(v.sum()));
    }
    let Some(inter) = intermodal(p) else {
        bail!("inter-modal rate undefined at these parameters");
    };
    for (kind, sum) in [
        ("inter_modal", inter),
        ("intra_modal", achievable_intramodal_sum(p)),
        ("no_feedback", achievable_nofeedback_sum(p)),
    ] {
        let _ = writeln!(s, "{kind},{},{},{}", sig12(sum / 2.0), sig12(sum / 2.0), sig12(sum));
    }
    Ok(s)
}
