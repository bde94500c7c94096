//! `t`-sweeps of the length bracket of every cylinder of one ray.

use rayon::prelude::*;
use stretch_core::stretch::transverse_bounds;
use stretch_core::{ExtScalar, RaySpec, TransverseCurveData};

use crate::config::{Quantity, SweepConfig};
use crate::error::Result;
use crate::output::{fmt_ext, fmt_num, fmt_opt, PlotSpec, Scale, Table};

pub const SWEEP_HEADER: [&str; 8] = [
    "core_id",
    "t",
    "log_w_t",
    "h_prime",
    "h",
    "h_star",
    "log_asymptote",
    "ratio_h_over_asym",
];

/// One grid point of one cylinder. `t` is the ray parameter; the cylinder
/// is evaluated at `t + offset`.
#[derive(Clone, Debug, PartialEq)]
pub struct SweepRow {
    pub core_id: String,
    pub t: f64,
    pub log_w_t: f64,
    pub h_prime: ExtScalar,
    pub h: ExtScalar,
    pub h_star: ExtScalar,
    pub log_asymptote: f64,
    /// `h / (2 sqrt(K) exp(-w(t)/2))`.
    pub ratio_h_over_asym: f64,
}

/// Rows ordered by cylinder, then by `t`. Grid points are evaluated in
/// parallel.
pub fn run_sweep(ray: &RaySpec, cfg: &SweepConfig) -> Result<Vec<SweepRow>> {
    cfg.validate()?;
    let grid = cfg.grid();
    let jobs: Vec<_> = ray
        .cylinders()
        .iter()
        .flat_map(|c| grid.iter().map(move |&t| (c, t)))
        .collect();
    let rows = jobs
        .par_iter()
        .map(|&(cyl, t)| {
            let local = t + ray.offset();
            let bracket = cyl.bracket(local)?;
            let asym = cyl.asymptote().length_at(local);
            Ok(SweepRow {
                core_id: cyl.core_id().to_owned(),
                t,
                log_w_t: cyl.width_at(local).logmag(),
                h_prime: bracket.crosscheck_lower,
                h: bracket.lower,
                h_star: bracket.upper,
                log_asymptote: asym.logmag(),
                ratio_h_over_asym: (bracket.lower.logmag() - asym.logmag()).exp(),
            })
        })
        .collect::<Result<Vec<_>, stretch_core::Error>>()?;
    Ok(rows)
}

/// Columns of quantities outside `cfg.quantities` are left empty; the
/// header never changes.
pub fn sweep_table(rows: &[SweepRow], cfg: &SweepConfig) -> Table {
    let mut table = Table::new(&SWEEP_HEADER);
    let pick = |q: Quantity| cfg.wants(q);
    for r in rows {
        let both = pick(Quantity::Height) && pick(Quantity::Asymptote);
        table.rows.push(vec![
            r.core_id.clone(),
            fmt_num(r.t),
            fmt_num(r.log_w_t),
            fmt_opt(pick(Quantity::TruncatedHeight).then_some(r.h_prime), fmt_ext),
            fmt_opt(pick(Quantity::Height).then_some(r.h), fmt_ext),
            fmt_opt(pick(Quantity::MinLeaf).then_some(r.h_star), fmt_ext),
            fmt_opt(pick(Quantity::Asymptote).then_some(r.log_asymptote), fmt_num),
            fmt_opt(both.then_some(r.ratio_h_over_asym), fmt_num),
        ]);
    }
    table
}

pub fn sweep_plot(ray: &RaySpec) -> PlotSpec {
    PlotSpec {
        title: format!("length bracket along ray {}", ray.id()),
        x: "t",
        group: Some("core_id"),
        series: vec![
            ("h_prime", Scale::Log),
            ("h", Scale::Log),
            ("h_star", Scale::Log),
            ("log_asymptote", Scale::Identity),
        ],
        y_label: "ln length".into(),
    }
}

/// Bounds `sum n_j w_j(t) <= l(curve) <= sum n_j w_j(t) + m_j h*_j(t)` for
/// each curve on the grid.
pub fn transverse_table(ray: &RaySpec, curves: &[TransverseCurveData], cfg: &SweepConfig) -> Result<Table> {
    let mut table = Table::new(&["curve_id", "t", "lower", "upper", "turning"]);
    for curve in curves {
        for t in cfg.grid() {
            let b = transverse_bounds(curve, ray, t)?;
            table.rows.push(vec![
                curve.id.clone(),
                fmt_num(t),
                fmt_ext(b.lower),
                fmt_ext(b.upper),
                fmt_ext(b.turning),
            ]);
        }
    }
    Ok(table)
}
