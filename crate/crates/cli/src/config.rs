use std::collections::BTreeSet;
use std::path::PathBuf;
use std::str::FromStr;

use crate::error::{CliError, Result};

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum Format {
    #[default]
    Table,
    Csv,
    Svg,
}

impl FromStr for Format {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        match s {
            "table" => Ok(Format::Table),
            "csv" => Ok(Format::Csv),
            "svg" => Ok(Format::Svg),
            other => Err(format!("unknown format `{other}` (expected table, csv or svg)")),
        }
    }
}

/// Quantities a sweep or comparison can report.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub enum Quantity {
    Height,
    MinLeaf,
    TruncatedHeight,
    Asymptote,
    Bracket,
    RatioBound,
    Transverse,
}

impl Quantity {
    pub const ALL: [Quantity; 7] = [
        Quantity::Height,
        Quantity::MinLeaf,
        Quantity::TruncatedHeight,
        Quantity::Asymptote,
        Quantity::Bracket,
        Quantity::RatioBound,
        Quantity::Transverse,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Quantity::Height => "height",
            Quantity::MinLeaf => "min_leaf",
            Quantity::TruncatedHeight => "truncated_height",
            Quantity::Asymptote => "asymptote",
            Quantity::Bracket => "bracket",
            Quantity::RatioBound => "ratio_bound",
            Quantity::Transverse => "transverse",
        }
    }

    fn in_bracket(self) -> bool {
        matches!(self, Quantity::Height | Quantity::MinLeaf | Quantity::TruncatedHeight)
    }
}

impl FromStr for Quantity {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        Quantity::ALL
            .into_iter()
            .find(|q| q.name() == s)
            .ok_or_else(|| {
                let names: Vec<_> = Quantity::ALL.iter().map(|q| q.name()).collect();
                format!("unknown quantity `{s}` (expected one of {})", names.join(", "))
            })
    }
}

/// The `t` grid and what to report on it.
#[derive(Clone, Debug, PartialEq)]
pub struct SweepConfig {
    pub t_min: f64,
    pub t_max: f64,
    /// Number of grid points.
    pub steps: usize,
    pub quantities: BTreeSet<Quantity>,
    pub output: Option<PathBuf>,
    pub format: Format,
}

impl Default for SweepConfig {
    fn default() -> Self {
        SweepConfig {
            t_min: 0.0,
            t_max: 4.0,
            steps: 41,
            quantities: Self::default_quantities(),
            output: None,
            format: Format::Table,
        }
    }
}

impl SweepConfig {
    /// Everything except the transverse bracket, which needs curves.
    pub fn default_quantities() -> BTreeSet<Quantity> {
        Quantity::ALL
            .into_iter()
            .filter(|&q| q != Quantity::Transverse)
            .collect()
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.t_min.is_finite() && self.t_max.is_finite()) {
            return Err(CliError::Usage("t range must be finite".into()));
        }
        if self.t_min > self.t_max {
            return Err(CliError::Usage(format!(
                "t_min = {} exceeds t_max = {}",
                self.t_min, self.t_max
            )));
        }
        if self.steps == 0 {
            return Err(CliError::Usage("steps must be at least 1".into()));
        }
        Ok(())
    }

    pub fn wants(&self, q: Quantity) -> bool {
        self.quantities.contains(&q) || (self.quantities.contains(&Quantity::Bracket) && q.in_bracket())
    }

    /// `steps` evenly spaced points from `t_min`; the last one is `t_max`
    /// exactly when `steps > 1`.
    pub fn grid(&self) -> Vec<f64> {
        if self.steps == 1 {
            return vec![self.t_min];
        }
        let span = self.t_max - self.t_min;
        let last = self.steps - 1;
        (0..self.steps)
            .map(|k| {
                if k == last {
                    self.t_max
                } else {
                    self.t_min + span * k as f64 / last as f64
                }
            })
            .collect()
    }
}
