//! Rendering of result tables as aligned text, CSV, or an SVG line plot.
//!
//! Cells are formatted once, as strings, and every renderer reads only those
//! strings, so a table, its CSV and its plot always agree.

use std::fmt::Write as _;

use stretch_core::ExtScalar;

/// Magnitudes beyond `e^700` are written as `{"log": L}`.
pub const NATIVE_LOG_LIMIT: f64 = 700.0;

/// Shortest round-trip decimal; exponent notation outside `[1e-4, 1e15)`.
pub fn fmt_num(x: f64) -> String {
    if x == 0.0 || !x.is_finite() {
        return format!("{x}");
    }
    let a = x.abs();
    if (1e-4..1e15).contains(&a) {
        format!("{x}")
    } else {
        format!("{x:e}")
    }
}

pub fn fmt_ext(x: ExtScalar) -> String {
    if x.is_zero() {
        return "0".into();
    }
    if x.logmag().abs() > NATIVE_LOG_LIMIT {
        let sign = if x.sign() < 0 { "-" } else { "" };
        format!("{sign}{{\"log\": {}}}", fmt_num(x.logmag()))
    } else {
        fmt_num(x.to_f64())
    }
}

pub fn fmt_opt<T>(x: Option<T>, f: impl Fn(T) -> String) -> String {
    x.map(f).unwrap_or_default()
}

/// Natural log of a cell written by [`fmt_ext`] or [`fmt_num`]; `None` for
/// empty, zero or negative cells.
pub fn cell_log(cell: &str) -> Option<f64> {
    if let Some(rest) = cell.strip_prefix("{\"log\": ") {
        return rest.strip_suffix('}')?.parse().ok();
    }
    let v: f64 = cell.parse().ok()?;
    (v > 0.0).then(|| v.ln())
}

fn cell_value(cell: &str) -> Option<f64> {
    cell.parse().ok().filter(|v: &f64| v.is_finite())
}

#[derive(Clone, Debug, Default, PartialEq)]
pub struct Table {
    pub header: Vec<String>,
    pub rows: Vec<Vec<String>>,
}

impl Table {
    pub fn new(header: &[&str]) -> Self {
        Table {
            header: header.iter().map(|s| s.to_string()).collect(),
            rows: Vec::new(),
        }
    }

    pub fn column(&self, name: &str) -> Option<usize> {
        self.header.iter().position(|h| h == name)
    }

    pub fn to_csv(&self) -> String {
        let mut w = csv::WriterBuilder::new()
            .terminator(csv::Terminator::Any(b'\n'))
            .from_writer(Vec::new());
        w.write_record(&self.header).expect("in-memory write");
        for row in &self.rows {
            w.write_record(row).expect("in-memory write");
        }
        String::from_utf8(w.into_inner().expect("in-memory flush")).expect("utf-8 cells")
    }

    pub fn to_text(&self) -> String {
        let mut widths: Vec<usize> = self.header.iter().map(|h| h.chars().count()).collect();
        for row in &self.rows {
            for (w, cell) in widths.iter_mut().zip(row) {
                *w = (*w).max(cell.chars().count());
            }
        }
        let mut out = String::new();
        let mut line = |cells: &[String]| {
            let padded: Vec<String> = cells
                .iter()
                .zip(&widths)
                .map(|(c, &w)| format!("{c:>w$}"))
                .collect();
            out.push_str(padded.join("  ").trim_end());
            out.push('\n');
        };
        line(&self.header);
        for row in &self.rows {
            line(row);
        }
        out
    }
}

/// How a table column is drawn.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Scale {
    /// The cell holds a positive quantity; plot its natural log.
    Log,
    /// The cell is plotted as is (it already is a logarithm, or a bound in nats).
    Identity,
}

#[derive(Clone, Debug)]
pub struct PlotSpec {
    pub title: String,
    pub x: &'static str,
    /// Rows are split into one curve per distinct value of this column.
    pub group: Option<&'static str>,
    pub series: Vec<(&'static str, Scale)>,
    pub y_label: String,
}

const WIDTH: f64 = 800.0;
const HEIGHT: f64 = 500.0;
const MARGIN: f64 = 60.0;
const PALETTE: [&str; 8] = [
    "#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#17becf", "#8c564b", "#e377c2",
];

struct Curve {
    label: String,
    points: Vec<(f64, f64)>,
}

fn curves(table: &Table, spec: &PlotSpec) -> Vec<Curve> {
    let x_col = table.column(spec.x);
    let group_col = spec.group.and_then(|g| table.column(g));
    let mut out: Vec<Curve> = Vec::new();
    for (name, scale) in &spec.series {
        let Some(col) = table.column(name) else { continue };
        for row in &table.rows {
            let Some(x) = x_col.and_then(|c| cell_value(&row[c])) else { continue };
            let y = match scale {
                Scale::Log => cell_log(&row[col]),
                Scale::Identity => cell_value(&row[col]),
            };
            let Some(y) = y.filter(|y| y.is_finite()) else { continue };
            let label = match group_col {
                Some(g) => format!("{} {}", row[g], name),
                None => name.to_string(),
            };
            match out.iter_mut().find(|c| c.label == label) {
                Some(c) => c.points.push((x, y)),
                None => out.push(Curve {
                    label,
                    points: vec![(x, y)],
                }),
            }
        }
    }
    out
}

fn escape(s: &str) -> String {
    s.replace('&', "&amp;").replace('<', "&lt;").replace('>', "&gt;")
}

/// Line plot of the selected columns against `spec.x`. The output depends
/// only on the table cells.
pub fn to_svg(table: &Table, spec: &PlotSpec) -> String {
    let curves = curves(table, spec);
    let all = curves.iter().flat_map(|c| c.points.iter());
    let (mut x0, mut x1, mut y0, mut y1) = (f64::INFINITY, f64::NEG_INFINITY, f64::INFINITY, f64::NEG_INFINITY);
    for &(x, y) in all {
        x0 = x0.min(x);
        x1 = x1.max(x);
        y0 = y0.min(y);
        y1 = y1.max(y);
    }
    if !x0.is_finite() {
        (x0, x1, y0, y1) = (0.0, 1.0, 0.0, 1.0);
    }
    if x1 - x0 <= 0.0 {
        (x0, x1) = (x0 - 0.5, x1 + 0.5);
    }
    if y1 - y0 <= 0.0 {
        (y0, y1) = (y0 - 0.5, y1 + 0.5);
    }
    let px = |x: f64| MARGIN + (x - x0) / (x1 - x0) * (WIDTH - 2.0 * MARGIN);
    let py = |y: f64| HEIGHT - MARGIN - (y - y0) / (y1 - y0) * (HEIGHT - 2.0 * MARGIN);

    let mut s = String::new();
    let _ = writeln!(
        s,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{WIDTH}" height="{HEIGHT}" viewBox="0 0 {WIDTH} {HEIGHT}" font-family="sans-serif" font-size="12">"#
    );
    let _ = writeln!(s, r#"<rect width="{WIDTH}" height="{HEIGHT}" fill="white"/>"#);
    let _ = writeln!(
        s,
        r#"<text x="{}" y="24" text-anchor="middle" font-size="14">{}</text>"#,
        WIDTH / 2.0,
        escape(&spec.title)
    );
    let (left, right, top, bottom) = (MARGIN, WIDTH - MARGIN, MARGIN, HEIGHT - MARGIN);
    let _ = writeln!(
        s,
        r#"<path d="M{left} {top} L{left} {bottom} L{right} {bottom}" fill="none" stroke="black"/>"#
    );
    for k in 0..=4 {
        let fx = x0 + (x1 - x0) * k as f64 / 4.0;
        let fy = y0 + (y1 - y0) * k as f64 / 4.0;
        let _ = writeln!(
            s,
            r#"<text x="{:.2}" y="{:.2}" text-anchor="middle">{:.3}</text>"#,
            px(fx),
            bottom + 18.0,
            fx
        );
        let _ = writeln!(
            s,
            r#"<text x="{:.2}" y="{:.2}" text-anchor="end">{}</text>"#,
            left - 6.0,
            py(fy) + 4.0,
            fmt_tick(fy)
        );
    }
    let _ = writeln!(
        s,
        r#"<text x="{:.2}" y="{:.2}" text-anchor="middle">{}</text>"#,
        WIDTH / 2.0,
        HEIGHT - 16.0,
        escape(spec.x)
    );
    let _ = writeln!(
        s,
        r#"<text x="16" y="{:.2}" text-anchor="middle" transform="rotate(-90 16 {:.2})">{}</text>"#,
        HEIGHT / 2.0,
        HEIGHT / 2.0,
        escape(&spec.y_label)
    );
    for (i, c) in curves.iter().enumerate() {
        let colour = PALETTE[i % PALETTE.len()];
        let path: Vec<String> = c
            .points
            .iter()
            .enumerate()
            .map(|(k, &(x, y))| format!("{}{:.2} {:.2}", if k == 0 { "M" } else { "L" }, px(x), py(y)))
            .collect();
        let _ = writeln!(
            s,
            r#"<path d="{}" fill="none" stroke="{colour}" stroke-width="1.5"/>"#,
            path.join(" ")
        );
        let ly = top + 16.0 * i as f64;
        let _ = writeln!(
            s,
            r#"<text x="{:.2}" y="{:.2}" fill="{colour}" text-anchor="end">{}</text>"#,
            right,
            ly + 12.0,
            escape(&c.label)
        );
    }
    s.push_str("</svg>\n");
    s
}

fn fmt_tick(v: f64) -> String {
    if v != 0.0 && (v.abs() >= 1e5 || v.abs() < 1e-3) {
        format!("{v:.3e}")
    } else {
        format!("{v:.3}")
    }
}
