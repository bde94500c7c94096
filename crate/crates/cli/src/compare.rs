//! Two-ray analyses: divergence classification and lower bounds on the
//! Thurston distance in both directions.

use std::fmt::Write as _;

use rayon::prelude::*;
use stretch_core::stretch::{classify, ratio_bound};
use stretch_core::{Classification, DivergenceReport, RaySpec};

use crate::config::SweepConfig;
use crate::error::Result;
use crate::output::{fmt_num, fmt_opt, PlotSpec, Scale, Table};

pub const COMPARE_HEADER: [&str; 5] = [
    "t",
    "d_gh_lower",
    "d_hg_lower",
    "d_gh_lower_witness",
    "d_hg_lower_witness",
];

const DIFFERENT_MULTICURVES: &str = "\
The rays are directed by different multicurves. Along a cylindrical stretch ray \
the length of a measured lamination tends to zero when it is contained in the stump, \
to infinity when it crosses the stump, and stays bounded when it is disjoint from it. \
A component of one multicurve that is not a component of the other falls into \
different cases on the two rays, so its length ratio tends to infinity and the rays diverge.";

/// Lower bounds (in nats) on `d_T(g_t, h_t)` and `d_T(h_t, g_t)`, before
/// and after moving the base point of `h` by the witness `u`. Columns are
/// `None` when the rays share no core curve or there is no witness.
#[derive(Clone, Debug, PartialEq)]
pub struct CompareRow {
    pub t: f64,
    pub d_gh: Option<f64>,
    pub d_hg: Option<f64>,
    pub d_gh_witness: Option<f64>,
    pub d_hg_witness: Option<f64>,
}

#[derive(Clone, Debug, PartialEq)]
pub struct CompareReport {
    pub g_id: String,
    pub h_id: String,
    pub report: DivergenceReport,
    /// `δ_j(g, h∘u)` when the witness is applied.
    pub witness_deltas: Option<Vec<(String, f64)>>,
    pub rows: Vec<CompareRow>,
}

pub fn run_compare(g: &RaySpec, h: &RaySpec, cfg: &SweepConfig, apply_witness: bool) -> Result<CompareReport> {
    cfg.validate()?;
    let report = classify(g, h)?;
    let moved = report.witness.as_ref().map(|w| h.shifted(w.u));
    let shared = !g.shared_cores(h).is_empty();
    let rows = cfg
        .grid()
        .par_iter()
        .map(|&t| {
            let pair = |a: &RaySpec, b: &RaySpec| -> Result<(Option<f64>, Option<f64>), stretch_core::Error> {
                if !shared {
                    return Ok((None, None));
                }
                Ok((Some(ratio_bound(a, b, t)?), Some(ratio_bound(b, a, t)?)))
            };
            let (d_gh, d_hg) = pair(g, h)?;
            let (d_gh_witness, d_hg_witness) = match &moved {
                Some(m) => pair(g, m)?,
                None => (None, None),
            };
            Ok(CompareRow {
                t,
                d_gh,
                d_hg,
                d_gh_witness,
                d_hg_witness,
            })
        })
        .collect::<Result<Vec<_>, stretch_core::Error>>()?;
    let witness_deltas = match (&moved, apply_witness) {
        (Some(m), true) => Some(classify(g, m)?.deltas),
        _ => None,
    };
    Ok(CompareReport {
        g_id: g.id().to_owned(),
        h_id: h.id().to_owned(),
        report,
        witness_deltas,
        rows,
    })
}

impl CompareReport {
    pub fn table(&self) -> Table {
        let mut table = Table::new(&COMPARE_HEADER);
        for r in &self.rows {
            table.rows.push(vec![
                fmt_num(r.t),
                fmt_opt(r.d_gh, fmt_num),
                fmt_opt(r.d_hg, fmt_num),
                fmt_opt(r.d_gh_witness, fmt_num),
                fmt_opt(r.d_hg_witness, fmt_num),
            ]);
        }
        table
    }

    pub fn plot(&self) -> PlotSpec {
        PlotSpec {
            title: format!("distance lower bounds, {} vs {}", self.g_id, self.h_id),
            x: "t",
            group: None,
            series: COMPARE_HEADER[1..].iter().map(|&c| (c, Scale::Identity)).collect(),
            y_label: "nats".into(),
        }
    }

    /// Human-readable summary followed by the bound table.
    pub fn text(&self) -> String {
        let r = &self.report;
        let mut s = String::new();
        let _ = writeln!(s, "rays: g = {}, h = {}", self.g_id, self.h_id);
        let _ = writeln!(s, "classification: {}", r.classification.as_str());
        if let Some(w) = &r.witness {
            let _ = writeln!(
                s,
                "witness: u = {} (e^u w_{j0}(h) < w_{j0}(g), e^u w_{j1}(h) > w_{j1}(g))",
                fmt_num(w.u),
                j0 = w.j0,
                j1 = w.j1
            );
        }
        let mut per_core = Table::new(&["core_id", "delta", "prefactor"]);
        for ((id, d), (_, p)) in r.deltas.iter().zip(&r.prefactors) {
            per_core.rows.push(vec![id.clone(), fmt_num(*d), fmt_num(*p)]);
        }
        if let Some(after) = &self.witness_deltas {
            per_core.header.push("delta_witness".into());
            for (row, (_, d)) in per_core.rows.iter_mut().zip(after) {
                row.push(fmt_num(*d));
            }
        }
        s.push('\n');
        s.push_str(&per_core.to_text());
        if r.classification == Classification::DivergentDifferentMulticurve {
            let _ = writeln!(s, "\n{DIFFERENT_MULTICURVES}");
        }
        s.push('\n');
        s.push_str(&self.table().to_text());
        s
    }
}
