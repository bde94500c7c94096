//! Pairs of cylindrical stretch rays: δ-coefficients, divergence versus
//! parallelism, the reparameterization that witnesses divergence, and lower
//! bounds on the Thurston distance obtained from length brackets of the core
//! curves.
//!
//! A ray is evaluated at parameter `t + offset`; shifting the offset is the
//! same as choosing another base point on the stretch line, and multiplies
//! every weight by `e^offset`.

use std::collections::HashSet;

use crate::cylinder::CylinderSpec;
use crate::error::{domain, Error, Result};
use crate::numerics::ExtScalar;

/// Two weight vectors are proportional when the spread of
/// `ln(w_j(g) / w_j(h))` does not exceed this.
pub const PROPORTIONALITY_TOLERANCE: f64 = 1e-12;

/// A cylindrical stretch ray: the weighted multicurve given by its foliated
/// cylinders, evaluated at `t + offset`.
#[derive(Clone, Debug, PartialEq)]
pub struct RaySpec {
    id: String,
    offset: f64,
    cylinders: Vec<CylinderSpec>,
}

impl RaySpec {
    pub fn new(id: impl Into<String>, offset: f64, cylinders: Vec<CylinderSpec>) -> Result<Self> {
        if cylinders.is_empty() {
            return Err(Error::InvalidRay("no cylinders".into()));
        }
        if !offset.is_finite() {
            return Err(Error::InvalidRay(format!("offset {offset} is not finite")));
        }
        let mut seen = HashSet::new();
        for c in &cylinders {
            if !seen.insert(c.core_id()) {
                return Err(Error::InvalidRay(format!("duplicate core_id `{}`", c.core_id())));
            }
        }
        Ok(RaySpec {
            id: id.into(),
            offset,
            cylinders,
        })
    }

    pub fn id(&self) -> &str {
        &self.id
    }

    pub fn offset(&self) -> f64 {
        self.offset
    }

    pub fn cylinders(&self) -> &[CylinderSpec] {
        &self.cylinders
    }

    /// Same ray, base point moved by `shift` along the line.
    pub fn shifted(&self, shift: f64) -> RaySpec {
        RaySpec {
            offset: self.offset + shift,
            ..self.clone()
        }
    }

    pub fn with_offset(&self, offset: f64) -> RaySpec {
        RaySpec {
            offset,
            ..self.clone()
        }
    }

    pub fn cylinder(&self, core_id: &str) -> Option<&CylinderSpec> {
        self.cylinders.iter().find(|c| c.core_id() == core_id)
    }

    fn require(&self, core_id: &str) -> Result<&CylinderSpec> {
        self.cylinder(core_id)
            .ok_or_else(|| Error::UnknownComponent(core_id.to_owned()))
    }

    /// `e^offset * w_j`.
    pub fn effective_weight(&self, core_id: &str) -> Result<f64> {
        Ok(self.offset.exp() * self.require(core_id)?.width())
    }

    pub fn core_ids(&self) -> impl Iterator<Item = &str> {
        self.cylinders.iter().map(CylinderSpec::core_id)
    }

    fn same_cores(&self, other: &RaySpec) -> bool {
        let mine: HashSet<_> = self.core_ids().collect();
        let theirs: HashSet<_> = other.core_ids().collect();
        mine == theirs
    }

    /// Core ids present in both rays, in the order of `self`.
    pub fn shared_cores<'a>(&'a self, other: &'a RaySpec) -> Vec<&'a str> {
        self.core_ids()
            .filter(|id| other.cylinder(id).is_some())
            .collect()
    }
}

/// `δ_j(g, h) = (w_j(h) - w_j(g)) / 2` with effective weights.
pub fn delta(g: &RaySpec, h: &RaySpec, core_id: &str) -> Result<f64> {
    Ok(0.5 * (h.effective_weight(core_id)? - g.effective_weight(core_id)?))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Classification {
    /// Same multicurve, proportional weights: the rays are parallel.
    SameDirection,
    /// Same multicurve, non-proportional weights: the rays diverge.
    DivergentSameMulticurve,
    /// Topologically different multicurves: the rays diverge.
    DivergentDifferentMulticurve,
}

impl Classification {
    pub fn as_str(self) -> &'static str {
        match self {
            Classification::SameDirection => "same_direction",
            Classification::DivergentSameMulticurve => "divergent_same_multicurve",
            Classification::DivergentDifferentMulticurve => "divergent_different_multicurve",
        }
    }
}

/// Base-point change `u` for the second ray such that
/// `e^u w_j0(h) < w_j0(g)` and `e^u w_j1(h) > w_j1(g)`.
#[derive(Clone, Debug, PartialEq)]
pub struct Reparam {
    pub u: f64,
    pub j0: String,
    pub j1: String,
}

#[derive(Clone, Debug, PartialEq)]
pub struct DivergenceReport {
    /// `δ_j(g, h)` per shared core.
    pub deltas: Vec<(String, f64)>,
    pub classification: Classification,
    /// Present exactly for [`Classification::DivergentSameMulticurve`].
    pub witness: Option<Reparam>,
    /// `sqrt(K_j(h) / K_j(g))` per shared core: the constant in
    /// `l_h(λ_j) / l_g(λ_j) ~ sqrt(K_j(h)/K_j(g)) exp(-e^t δ_j)`.
    pub prefactors: Vec<(String, f64)>,
}

fn log_ratios<'a>(g: &'a RaySpec, h: &RaySpec) -> Result<Vec<(&'a str, f64)>> {
    g.core_ids()
        .map(|id| {
            let r = (g.effective_weight(id)? / h.effective_weight(id)?).ln();
            Ok((id, r))
        })
        .collect()
}

/// Splits two non-proportional weight vectors on the same multicurve: with
/// `r_j = ln(w_j(g)/w_j(h))`, `j0` maximises and `j1` minimises `r_j`, and
/// `u` is the midpoint of `]r_j1, r_j0[`.
pub fn find_reparam(g: &RaySpec, h: &RaySpec) -> Result<Reparam> {
    if !g.same_cores(h) {
        return Err(domain("reparameterization needs rays on the same multicurve"));
    }
    let ratios = log_ratios(g, h)?;
    let (mut j0, mut j1) = (ratios[0], ratios[0]);
    for &(id, r) in &ratios[1..] {
        if r > j0.1 {
            j0 = (id, r);
        }
        if r < j1.1 {
            j1 = (id, r);
        }
    }
    if j0.1 - j1.1 <= PROPORTIONALITY_TOLERANCE {
        return Err(Error::ProportionalWeights);
    }
    Ok(Reparam {
        u: 0.5 * (j0.1 + j1.1),
        j0: j0.0.to_owned(),
        j1: j1.0.to_owned(),
    })
}

pub fn classify(g: &RaySpec, h: &RaySpec) -> Result<DivergenceReport> {
    let shared = g.shared_cores(h);
    let deltas = shared
        .iter()
        .map(|id| Ok((id.to_string(), delta(g, h, id)?)))
        .collect::<Result<Vec<_>>>()?;
    let prefactors = shared
        .iter()
        .map(|id| {
            let kg = g.require(id)?.asymptote().k as f64;
            let kh = h.require(id)?.asymptote().k as f64;
            Ok((id.to_string(), (kh / kg).sqrt()))
        })
        .collect::<Result<Vec<_>>>()?;
    let (classification, witness) = if !g.same_cores(h) {
        (Classification::DivergentDifferentMulticurve, None)
    } else {
        match find_reparam(g, h) {
            Ok(w) => (Classification::DivergentSameMulticurve, Some(w)),
            Err(Error::ProportionalWeights) => (Classification::SameDirection, None),
            Err(e) => return Err(e),
        }
    };
    Ok(DivergenceReport {
        deltas,
        classification,
        witness,
        prefactors,
    })
}

/// Lower bound on `d_T(g_t, h_t)`:
/// `max_j ln( h-height of λ_j on h / min leaf of λ_j on g )`, since
/// `l_h(λ_j) >= h_j(h)` and `l_g(λ_j) <= h*_j(g)`.
pub fn ratio_bound(g: &RaySpec, h: &RaySpec, t: f64) -> Result<f64> {
    let shared = g.shared_cores(h);
    if shared.is_empty() {
        return Err(Error::UnknownComponent(format!(
            "rays `{}` and `{}` share no core curve",
            g.id(),
            h.id()
        )));
    }
    let mut best = f64::NEG_INFINITY;
    for id in shared {
        let lower_h = h.require(id)?.height(t + h.offset(), 0)?;
        let upper_g = g.require(id)?.min_leaf(t + g.offset()).h_star;
        best = best.max(lower_h.logmag() - upper_g.logmag());
    }
    Ok(best)
}

/// Asymptotic form of [`ratio_bound`]:
/// `max_j ln sqrt(K_j(h)/K_j(g)) - e^t δ_j(g, h)`.
pub fn asymptotic_ratio_bound(g: &RaySpec, h: &RaySpec, t: f64) -> Result<f64> {
    let shared = g.shared_cores(h);
    if shared.is_empty() {
        return Err(Error::UnknownComponent(format!(
            "rays `{}` and `{}` share no core curve",
            g.id(),
            h.id()
        )));
    }
    let mut best = f64::NEG_INFINITY;
    for id in shared {
        let kg = g.require(id)?.asymptote().k as f64;
        let kh = h.require(id)?.asymptote().k as f64;
        let v = 0.5 * (kh / kg).ln() - t.exp() * delta(g, h, id)?;
        best = best.max(v);
    }
    Ok(best)
}

/// Distances between `h_t` and `h_t+c` on one ray.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Asymmetry {
    /// `d_T(h_t, h_t+c)`, equal to `c` because stretch lines are geodesics.
    pub forward: f64,
    /// Lower bound on `d_T(h_t+c, h_t)`, which grows without bound.
    pub backward_lower: f64,
}

pub fn asymmetry_bound(ray: &RaySpec, t: f64, c: f64) -> Result<Asymmetry> {
    if !(c > 0.0 && c.is_finite()) {
        return Err(domain(format!("shift c = {c} must be positive")));
    }
    Ok(Asymmetry {
        forward: c,
        backward_lower: ratio_bound(&ray.shifted(c), ray, t)?,
    })
}

/// Intersection data of a closed curve `α` with the cylinders of a ray:
/// crossings `|α ∩ λ_j|` and turns `|α ∩ ρ_j|` around each core.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct TransverseCurveData {
    pub id: String,
    pub crossings: Vec<(String, u64)>,
    pub turnings: Vec<(String, u64)>,
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct TransverseBounds {
    /// `sum_j n_j w_j(t)`.
    pub lower: ExtScalar,
    /// `lower + turning`.
    pub upper: ExtScalar,
    /// `sum_j m_j h*_j(t)`, the gap between the bounds.
    pub turning: ExtScalar,
}

/// `sum n_j w_j(t) <= l(α) <= sum (n_j w_j(t) + m_j l(λ_j))`, with `l(λ_j)`
/// replaced by its upper bracket `h*_j(t)`.
pub fn transverse_bounds(curve: &TransverseCurveData, ray: &RaySpec, t: f64) -> Result<TransverseBounds> {
    let local = t + ray.offset();
    let mut lower = ExtScalar::ZERO;
    for (id, n) in &curve.crossings {
        let w = ray.require(id)?.width_at(local);
        lower = lower.add_same_sign(ExtScalar::from_f64(*n as f64) * w);
    }
    let mut turning = ExtScalar::ZERO;
    for (id, m) in &curve.turnings {
        let h_star = ray.require(id)?.min_leaf(local).h_star;
        turning = turning.add_same_sign(ExtScalar::from_f64(*m as f64) * h_star);
    }
    Ok(TransverseBounds {
        lower,
        upper: lower.add_same_sign(turning),
        turning,
    })
}

/// Position of a measured lamination `α` relative to the stump `γ`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum StumpRelation {
    SubsetOfStump,
    CrossesStump,
    DisjointFromStump,
}

/// Long-time behaviour of `l_{h_t}(α)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum LengthTrend {
    ToZero,
    ToInfinity,
    Bounded,
}

pub fn asymptotic_class(rel: StumpRelation) -> LengthTrend {
    match rel {
        StumpRelation::SubsetOfStump => LengthTrend::ToZero,
        StumpRelation::CrossesStump => LengthTrend::ToInfinity,
        StumpRelation::DisjointFromStump => LengthTrend::Bounded,
    }
}
