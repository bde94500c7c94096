//! Command-line surface: argument parsing and dispatch of the subcommands.

use std::collections::BTreeSet;
use std::fs;
use std::io::Write;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};
use stretch_core::cylinder::multi_asymptote;
use stretch_core::RaySpec;

use crate::compare::run_compare;
use crate::config::{Format, Quantity, SweepConfig};
use crate::error::{CliError, Result};
use crate::input::{parse_document, print_document, Document};
use crate::output::{fmt_ext, fmt_num, to_svg, PlotSpec, Scale, Table};
use crate::sweep::{run_sweep, sweep_plot, sweep_table, transverse_table};

#[derive(Debug, Parser)]
#[command(name = "stretch-lab", version, about = "Length brackets and divergence diagnostics along cylindrical stretch rays")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Sweep the length bracket of every cylinder of one ray.
    Sweep(CommonArgs),
    /// Classify two rays and bound their distance in both directions.
    Compare(CommonArgs),
    /// Shortest closed leaf of every cylinder.
    Leaf(CommonArgs),
    /// Height of every cylinder measured from the leaf `--cut`.
    Height(CommonArgs),
    /// Asymptotic law of the core lengths.
    Asymptote(CommonArgs),
    /// Reduce every cylinder to its unit arcs and print the document.
    Truncate(CommonArgs),
}

#[derive(Debug, Args)]
pub struct CommonArgs {
    #[arg(long)]
    pub input: PathBuf,
    #[arg(long, default_value_t = 0.0, allow_negative_numbers = true)]
    pub t_min: f64,
    #[arg(long, default_value_t = 4.0, allow_negative_numbers = true)]
    pub t_max: f64,
    /// Number of grid points.
    #[arg(long, default_value_t = 41)]
    pub steps: usize,
    #[arg(long, default_value = "table")]
    pub format: Format,
    #[arg(long)]
    pub output: Option<PathBuf>,
    /// Index of the band boundary used as cut (0 separates the last and first bands).
    #[arg(long, default_value_t = 0)]
    pub cut: usize,
    /// Also report the δ-coefficients after moving the second ray by the witness.
    #[arg(long)]
    pub apply_witness: bool,
    /// Comma-separated subset of height, min_leaf, truncated_height,
    /// asymptote, bracket, ratio_bound, transverse.
    #[arg(long, value_delimiter = ',')]
    pub quantities: Vec<Quantity>,
    /// Ray to sweep (default: the first ray of the document).
    #[arg(long)]
    pub ray: Option<String>,
}

impl CommonArgs {
    pub fn config(&self) -> SweepConfig {
        let quantities: BTreeSet<Quantity> = if self.quantities.is_empty() {
            SweepConfig::default_quantities()
        } else {
            self.quantities.iter().copied().collect()
        };
        SweepConfig {
            t_min: self.t_min,
            t_max: self.t_max,
            steps: self.steps,
            quantities,
            output: self.output.clone(),
            format: self.format,
        }
    }

    fn document(&self) -> Result<Document> {
        let text = fs::read_to_string(&self.input).map_err(|e| CliError::io(&self.input, e))?;
        parse_document(&text)
    }
}

fn pick_ray<'a>(doc: &'a Document, id: Option<&str>) -> Result<&'a RaySpec> {
    match id {
        Some(id) => doc
            .rays
            .iter()
            .find(|r| r.id() == id)
            .ok_or_else(|| CliError::Usage(format!("no ray with id `{id}`"))),
        None => doc
            .rays
            .first()
            .ok_or_else(|| CliError::Usage("the document has no ray".into())),
    }
}

fn render(table: &Table, format: Format, plot: &PlotSpec) -> String {
    match format {
        Format::Table => table.to_text(),
        Format::Csv => table.to_csv(),
        Format::Svg => to_svg(table, plot),
    }
}

/// Runs one subcommand and returns what it would print.
pub fn execute(command: &Command) -> Result<String> {
    match command {
        Command::Sweep(args) => sweep(args),
        Command::Compare(args) => compare(args),
        Command::Leaf(args) => leaf(args),
        Command::Height(args) => height(args),
        Command::Asymptote(args) => asymptote(args),
        Command::Truncate(args) => truncate(args),
    }
}

fn sweep(args: &CommonArgs) -> Result<String> {
    let doc = args.document()?;
    let ray = pick_ray(&doc, args.ray.as_deref())?;
    let cfg = args.config();
    let table = sweep_table(&run_sweep(ray, &cfg)?, &cfg);
    let mut out = render(&table, cfg.format, &sweep_plot(ray));
    if cfg.wants(Quantity::Transverse) && !doc.curves.is_empty() && cfg.format != Format::Svg {
        let extra = transverse_table(ray, &doc.curves, &cfg)?;
        out.push('\n');
        out.push_str(&match cfg.format {
            Format::Csv => extra.to_csv(),
            _ => extra.to_text(),
        });
    }
    Ok(out)
}

fn compare(args: &CommonArgs) -> Result<String> {
    let doc = args.document()?;
    let [g, h, ..] = doc.rays.as_slice() else {
        return Err(CliError::Usage("compare needs a document with two rays".into()));
    };
    let cfg = args.config();
    let report = run_compare(g, h, &cfg, args.apply_witness)?;
    Ok(match cfg.format {
        Format::Table => report.text(),
        Format::Csv => report.table().to_csv(),
        Format::Svg => to_svg(&report.table(), &report.plot()),
    })
}

fn per_cylinder(
    args: &CommonArgs,
    header: &[&str],
    mut row: impl FnMut(&RaySpec, &stretch_core::CylinderSpec, f64) -> Result<Vec<String>>,
) -> Result<Table> {
    let doc = args.document()?;
    let cfg = args.config();
    cfg.validate()?;
    let mut table = Table::new(header);
    for ray in &doc.rays {
        for cyl in ray.cylinders() {
            for t in cfg.grid() {
                table.rows.push(row(ray, cyl, t)?);
            }
        }
    }
    Ok(table)
}

fn plot(title: &str, series: Vec<(&'static str, Scale)>) -> PlotSpec {
    PlotSpec {
        title: title.into(),
        x: "t",
        group: Some("core_id"),
        series,
        y_label: "ln length".into(),
    }
}

fn leaf(args: &CommonArgs) -> Result<String> {
    let header = ["ray_id", "core_id", "t", "d_star", "h_star", "interior"];
    let table = per_cylinder(args, &header, |ray, cyl, t| {
        let m = cyl.min_leaf(t + ray.offset());
        Ok(vec![
            ray.id().into(),
            cyl.core_id().into(),
            fmt_num(t),
            fmt_num(m.d_star),
            fmt_ext(m.h_star),
            m.interior.to_string(),
        ])
    })?;
    Ok(render(&table, args.format, &plot("shortest closed leaf", vec![("h_star", Scale::Log)])))
}

fn height(args: &CommonArgs) -> Result<String> {
    let header = ["ray_id", "core_id", "t", "cut", "h", "h_prime"];
    let table = per_cylinder(args, &header, |ray, cyl, t| {
        let local = t + ray.offset();
        Ok(vec![
            ray.id().into(),
            cyl.core_id().into(),
            fmt_num(t),
            args.cut.to_string(),
            fmt_ext(cyl.height(local, args.cut)?),
            fmt_ext(cyl.truncated_height(local, args.cut)?),
        ])
    })?;
    let series = vec![("h", Scale::Log), ("h_prime", Scale::Log)];
    Ok(render(&table, args.format, &plot("cylinder height", series)))
}

/// Per-cylinder law plus one `*` row per ray and `t` for the total length,
/// which is dominated by the cylinders of smallest width.
fn asymptote(args: &CommonArgs) -> Result<String> {
    let doc = args.document()?;
    let cfg = args.config();
    cfg.validate()?;
    let mut table = Table::new(&["ray_id", "core_id", "k", "w", "t", "log_asymptote"]);
    for ray in &doc.rays {
        let laws: Vec<_> = ray.cylinders().iter().map(|c| c.asymptote()).collect();
        let all: Vec<usize> = (0..laws.len()).collect();
        let total = multi_asymptote(&laws, &all)?;
        for (cyl, law) in ray.cylinders().iter().zip(&laws) {
            for t in cfg.grid() {
                table.rows.push(vec![
                    ray.id().into(),
                    cyl.core_id().into(),
                    law.k.to_string(),
                    fmt_num(law.w),
                    fmt_num(t),
                    fmt_num(law.length_at(t + ray.offset()).logmag()),
                ]);
            }
        }
        for t in cfg.grid() {
            table.rows.push(vec![
                ray.id().into(),
                "*".into(),
                String::new(),
                fmt_num(total.w_min),
                fmt_num(t),
                fmt_num(total.length_at(t + ray.offset()).logmag()),
            ]);
        }
    }
    let series = vec![("log_asymptote", Scale::Identity)];
    Ok(render(&table, args.format, &plot("asymptotic core length", series)))
}

fn truncate(args: &CommonArgs) -> Result<String> {
    let doc = args.document()?;
    let rays = doc
        .rays
        .iter()
        .map(|ray| {
            let cyls = ray
                .cylinders()
                .iter()
                .map(|c| c.truncate())
                .collect::<Result<Vec<_>, _>>()?;
            RaySpec::new(ray.id(), ray.offset(), cyls)
        })
        .collect::<Result<Vec<_>, _>>()?;
    Ok(print_document(&Document {
        rays,
        curves: doc.curves,
    }))
}

/// Writes to `--output` when given, to standard output otherwise.
pub fn emit(text: &str, output: Option<&PathBuf>) -> Result<()> {
    match output {
        Some(path) => fs::write(path, text).map_err(|e| CliError::io(path, e)),
        None => {
            let mut stdout = std::io::stdout().lock();
            stdout
                .write_all(text.as_bytes())
                .and_then(|_| stdout.flush())
                .map_err(|e| CliError::io("<stdout>", e))
        }
    }
}

impl Command {
    pub fn args(&self) -> &CommonArgs {
        match self {
            Command::Sweep(a)
            | Command::Compare(a)
            | Command::Leaf(a)
            | Command::Height(a)
            | Command::Asymptote(a)
            | Command::Truncate(a) => a,
        }
    }
}
