//! Sampling probes for the type-2 non-existence results: no non-planar
//! minimal surface and no surface of constant nonzero `K`.
//!
//! A probe cannot prove anything; it reports how far each random instance
//! is from being a counterexample. An instance counts as a counterexample
//! when its grid statistic does not exceed [`PROBE_FLOOR`].

use serde::Serialize;

use super::{grid_points, CROSS_REGULARITY};
use crate::error::Result;
use crate::factorable::generator::RandomInstance;
use crate::factorable::FactorableKind;
use crate::rng::SplitMix64;

pub const PROBE_FLOOR: f64 = 1e-4;
pub const PROBE_GRID: usize = 11;
/// Interior points where `f''` is tested for the planarity filter.
const PLANARITY_POINTS: usize = 5;
const MAX_DRAWS_PER_INSTANCE: usize = 100;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum ProbeKind {
    #[serde(rename = "afs2-minimal")]
    Afs2Minimal,
    #[serde(rename = "afs2-constant-K")]
    Afs2ConstantK,
}

impl ProbeKind {
    pub fn name(&self) -> &'static str {
        match self {
            ProbeKind::Afs2Minimal => "afs2-minimal",
            ProbeKind::Afs2ConstantK => "afs2-constant-K",
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum InstanceStatus {
    /// Both factors affine; exempt.
    #[serde(rename = "planar")]
    Planar,
    /// `K` vanishes on the grid; consistent with the flat classification.
    #[serde(rename = "flat")]
    Flat,
    #[serde(rename = "probed")]
    Probed,
    #[serde(rename = "too-few-points")]
    TooFewPoints,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct InstanceSummary {
    pub index: usize,
    pub description: String,
    pub status: InstanceStatus,
    /// Grid max `|H|` or grid spread of `K`.
    pub statistic: Option<f64>,
    pub points: usize,
    pub counterexample: bool,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ProbeReport {
    pub kind: ProbeKind,
    pub count: usize,
    pub seed: Option<u64>,
    pub floor: f64,
    pub grid: usize,
    pub counterexamples: usize,
    /// Smallest statistic over the probed instances.
    pub min_statistic: Option<f64>,
    pub planar_skipped: usize,
    pub instances: Vec<InstanceSummary>,
}

impl ProbeReport {
    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("probe report is serialisable")
    }
}

/// Both `f1''` and `f2''` vanish at five points spread over the arguments
/// the domain produces.
pub fn is_planar(inst: &RandomInstance) -> bool {
    let s = &inst.surface;
    let d = s.domain;
    (0..PLANARITY_POINTS).all(|i| {
        let t = (i as f64 + 0.5) / PLANARITY_POINTS as f64;
        let p = [d.u.lo + t * d.u.width(), d.v.lo + t * d.v.width()];
        let (u1, u2) = s.substitute(p);
        let second = |f: &crate::jets::Field1, u| f.derivatives(u).map(|(_, _, d2)| d2);
        matches!((second(&s.f1, u1), second(&s.f2, u2)), (Ok(a), Ok(b)) if a == 0.0 && b == 0.0)
    })
}

fn summarize(kind: ProbeKind, index: usize, inst: &RandomInstance) -> Result<InstanceSummary> {
    let s = &inst.surface;
    let mut summary = InstanceSummary {
        index,
        description: inst.describe(),
        status: InstanceStatus::Probed,
        statistic: None,
        points: 0,
        counterexample: false,
    };
    if is_planar(inst) {
        summary.status = InstanceStatus::Planar;
        return Ok(summary);
    }
    let chart = s.chart();
    let mut ks = Vec::new();
    let mut hs = Vec::new();
    for p in grid_points(s.domain, PROBE_GRID) {
        match s.regularity(p) {
            Ok(r) if r.abs() >= CROSS_REGULARITY => {}
            _ => continue,
        }
        if let Ok(c) = chart.curvatures(p) {
            if c.k.is_finite() && c.h.is_finite() {
                ks.push(c.k);
                hs.push(c.h);
            }
        }
    }
    summary.points = ks.len();
    if ks.len() < 4 {
        summary.status = InstanceStatus::TooFewPoints;
        return Ok(summary);
    }
    let stat = match kind {
        ProbeKind::Afs2Minimal => hs.iter().fold(0.0f64, |m, h| m.max(h.abs())),
        ProbeKind::Afs2ConstantK => {
            let max_abs = ks.iter().fold(0.0f64, |m, k| m.max(k.abs()));
            if max_abs <= PROBE_FLOOR {
                summary.status = InstanceStatus::Flat;
                summary.statistic = Some(max_abs);
                return Ok(summary);
            }
            let (lo, hi) = ks
                .iter()
                .fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), &k| (lo.min(k), hi.max(k)));
            hi - lo
        }
    };
    summary.statistic = Some(stat);
    summary.counterexample = !(stat > PROBE_FLOOR);
    Ok(summary)
}

/// Probes the given instances as they are; planar ones are exempt.
pub fn probe_instances(kind: ProbeKind, instances: &[RandomInstance], seed: Option<u64>) -> Result<ProbeReport> {
    let summaries = instances
        .iter()
        .enumerate()
        .map(|(i, inst)| summarize(kind, i, inst))
        .collect::<Result<Vec<_>>>()?;
    Ok(report(kind, seed, summaries, 0))
}

fn report(kind: ProbeKind, seed: Option<u64>, instances: Vec<InstanceSummary>, planar_skipped: usize) -> ProbeReport {
    let probed = instances.iter().filter(|s| s.status == InstanceStatus::Probed);
    let min_statistic = probed.clone().filter_map(|s| s.statistic).reduce(f64::min);
    ProbeReport {
        kind,
        count: instances.len(),
        seed,
        floor: PROBE_FLOOR,
        grid: PROBE_GRID,
        counterexamples: probed.filter(|s| s.counterexample).count(),
        min_statistic,
        planar_skipped,
        instances,
    }
}

/// Draws `count` non-planar type-2 instances (planar draws are replaced)
/// and probes each one.
pub fn probe_nonexistence(kind: ProbeKind, count: usize, seed: u64) -> Result<ProbeReport> {
    let mut rng = SplitMix64::new(seed);
    let mut summaries = Vec::with_capacity(count);
    let mut planar = 0;
    let mut draws = 0;
    while summaries.len() < count && draws < MAX_DRAWS_PER_INSTANCE * count.max(1) {
        draws += 1;
        let inst = RandomInstance::draw(FactorableKind::Type2, &mut rng);
        if is_planar(&inst) {
            planar += 1;
            continue;
        }
        summaries.push(summarize(kind, summaries.len(), &inst)?);
    }
    Ok(report(kind, Some(seed), summaries, planar))
}
