//! Foliated cylinders of the horocyclic foliation, described combinatorially.
//!
//! A cylinder of width `w` around a core curve is cut by the leaves of the
//! stretched lamination into maximal bands `B_1, ..., B_2N`. Odd bands rest on
//! the left boundary, even bands on the right one. Each band is a list of
//! cusp-arc lengths in `(0, 1]`; under a stretch of time `t` every arc length
//! is raised to the power `e^t` and the width becomes `e^t w`.
//!
//! From this data the module computes the closed horocyclic leaves and their
//! minimum `h*`, the boundary abscissae `x_j` of the cut cylinder drawn in the
//! upper half-plane, the height `h`, the height `h'` of the cylinder reduced to
//! its unit arcs, and the asymptotic law `2 sqrt(K) exp(-e^t w / 2)`.

use std::f64::consts::LN_2;

use crate::error::{domain, Error, Result};
use crate::halfplane::{BoundaryPoint, MoebiusMap};
use crate::numerics::{acosh1p_ext, ext_pow, ExtScalar};

/// Relative tolerance for deciding that two widths tie in
/// [`multi_asymptote`].
pub const WIDTH_TIE_TOLERANCE: f64 = 1e-12;

/// A maximal band: the cusp-arc lengths it contains.
#[derive(Clone, Debug, PartialEq)]
pub struct BandSpec {
    arcs: Vec<f64>,
}

impl BandSpec {
    pub fn new(arcs: Vec<f64>) -> Result<Self> {
        if arcs.is_empty() {
            return Err(Error::InvalidCylinder("empty band".into()));
        }
        for &b in &arcs {
            if b.is_nan() || b <= 0.0 {
                return Err(Error::InvalidCylinder(format!("arc length {b} <= 0")));
            }
            if b > 1.0 {
                return Err(Error::InvalidCylinder("arc length > 1".into()));
            }
        }
        Ok(BandSpec { arcs })
    }

    pub fn arcs(&self) -> &[f64] {
        &self.arcs
    }

    /// Number of arcs bordering an unfoliated region (arcs of length exactly 1).
    pub fn unit_count(&self) -> usize {
        self.arcs.iter().filter(|&&b| b == 1.0).count()
    }

    /// Thickness after stretching for time `t`: `sum_i b_i^(e^t)`.
    pub fn thickness(&self, t: f64) -> ExtScalar {
        let stretch = t.exp();
        ExtScalar::sum_nonneg(self.arcs.iter().map(|&b| {
            ext_pow(b, stretch).unwrap_or(ExtScalar::ZERO) // stretch == 0 only for t = -inf
        }))
    }
}

/// Thickness sums of the two sides: `a_i` (odd bands) and `a_p` (even bands).
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SideSums {
    pub odd: ExtScalar,
    pub even: ExtScalar,
}

/// Location and length of the shortest closed horocyclic leaf.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct MinLeaf {
    /// Distance from the right boundary.
    pub d_star: f64,
    pub h_star: ExtScalar,
    /// `false` when the critical point fell outside `[0, w(t)]` and the
    /// minimum was taken at the nearest endpoint.
    pub interior: bool,
}

/// Bounds `h'(t) <= h(t) <= l(t) <= h*(t)` on the core geodesic length `l(t)`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct LengthBracket {
    pub t: f64,
    /// Height `h(t)` at the default cut.
    pub lower: ExtScalar,
    /// Minimal closed leaf `h*(t)`.
    pub upper: ExtScalar,
    /// Height `h'(t)` of the cylinder reduced to its unit arcs.
    pub crosscheck_lower: ExtScalar,
}

impl LengthBracket {
    /// Checks `crosscheck_lower <= lower <= upper`, allowing `slack` relative
    /// rounding error between neighbours.
    pub fn is_ordered(&self, slack: f64) -> bool {
        let le = |x: ExtScalar, y: ExtScalar| x.logmag() <= y.logmag() + slack;
        le(self.crosscheck_lower, self.lower) && le(self.lower, self.upper)
    }
}

/// Data of the asymptotic law `l(t) ~ 2 sqrt(K) exp(-e^t w / 2)`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct AsymptoticData {
    /// Product of the unit-arc counts of the two sides.
    pub k: u64,
    pub w: f64,
}

impl AsymptoticData {
    /// `2 sqrt(K) exp(-e^t w / 2)`.
    pub fn length_at(&self, t: f64) -> ExtScalar {
        ExtScalar::from_log(LN_2 + 0.5 * (self.k as f64).ln() - 0.5 * t.exp() * self.w)
    }
}

/// Leading behaviour of the total length of several core curves.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct MultiAsymptote {
    pub w_min: f64,
    /// `2 * sum of sqrt(K_j)` over the components of minimal width.
    pub prefactor: ExtScalar,
}

impl MultiAsymptote {
    pub fn length_at(&self, t: f64) -> ExtScalar {
        self.prefactor * ExtScalar::from_log(-0.5 * t.exp() * self.w_min)
    }
}

/// Components of minimal width dominate the sum of lengths; only they
/// contribute to the prefactor.
pub fn multi_asymptote(items: &[AsymptoticData], selection: &[usize]) -> Result<MultiAsymptote> {
    if selection.is_empty() {
        return Err(Error::EmptySelection);
    }
    let chosen = selection
        .iter()
        .map(|&j| {
            items
                .get(j)
                .ok_or_else(|| domain(format!("component index {j} out of range")))
        })
        .collect::<Result<Vec<_>>>()?;
    let w_min = chosen.iter().map(|a| a.w).fold(f64::INFINITY, f64::min);
    let root_sum: f64 = chosen
        .iter()
        .filter(|a| a.w - w_min <= WIDTH_TIE_TOLERANCE * w_min)
        .map(|a| (a.k as f64).sqrt())
        .sum();
    Ok(MultiAsymptote {
        w_min,
        prefactor: ExtScalar::from_f64(2.0 * root_sum),
    })
}

/// One cylinder of the horocyclic foliation around the core curve `core_id`.
#[derive(Clone, Debug, PartialEq)]
pub struct CylinderSpec {
    core_id: String,
    width: f64,
    bands: Vec<BandSpec>,
}

impl CylinderSpec {
    pub fn new(core_id: impl Into<String>, width: f64, bands: Vec<BandSpec>) -> Result<Self> {
        if !(width.is_finite() && width > 0.0) {
            return Err(Error::InvalidCylinder(format!("width {width} must be positive")));
        }
        if bands.len() < 2 {
            return Err(Error::InvalidCylinder("fewer than two bands".into()));
        }
        if bands.len() % 2 != 0 {
            return Err(Error::InvalidCylinder("band count odd".into()));
        }
        let cyl = CylinderSpec {
            core_id: core_id.into(),
            width,
            bands,
        };
        let (left, right) = cyl.unit_counts();
        if left == 0 || right == 0 {
            return Err(Error::InvalidCylinder("side without unit arc".into()));
        }
        Ok(cyl)
    }

    /// Convenience constructor from nested arc lists.
    pub fn from_arcs(core_id: impl Into<String>, width: f64, bands: Vec<Vec<f64>>) -> Result<Self> {
        let bands = bands.into_iter().map(BandSpec::new).collect::<Result<_>>()?;
        Self::new(core_id, width, bands)
    }

    pub fn core_id(&self) -> &str {
        &self.core_id
    }

    /// Width at `t = 0`.
    pub fn width(&self) -> f64 {
        self.width
    }

    pub fn bands(&self) -> &[BandSpec] {
        &self.bands
    }

    /// Number of bands `2N`.
    pub fn band_count(&self) -> usize {
        self.bands.len()
    }

    /// Unit-arc counts of the left (odd bands) and right (even bands) sides.
    pub fn unit_counts(&self) -> (usize, usize) {
        let side = |parity: usize| -> usize {
            self.bands
                .iter()
                .skip(parity)
                .step_by(2)
                .map(BandSpec::unit_count)
                .sum()
        };
        (side(0), side(1))
    }

    /// `w(t) = e^t w` in the log domain.
    pub fn width_at(&self, t: f64) -> ExtScalar {
        ExtScalar::from_log(t + self.width.ln())
    }

    fn width_native(&self, t: f64) -> f64 {
        t.exp() * self.width
    }

    /// Band thicknesses `a_1(t), ..., a_2N(t)`.
    pub fn thicknesses(&self, t: f64) -> Vec<ExtScalar> {
        self.bands.iter().map(|b| b.thickness(t)).collect()
    }

    pub fn side_sums(&self, t: f64) -> SideSums {
        let th = self.thicknesses(t);
        SideSums {
            odd: ExtScalar::sum_nonneg(th.iter().copied().step_by(2)),
            even: ExtScalar::sum_nonneg(th.iter().copied().skip(1).step_by(2)),
        }
    }

    /// Length of the closed leaf at distance `d` from the right boundary:
    /// `a_p e^-d + a_i e^-(w(t) - d)`.
    pub fn leaf_length(&self, t: f64, d: f64) -> Result<ExtScalar> {
        let w = self.width_native(t);
        if !(0.0..=w).contains(&d) {
            return Err(domain(format!("leaf distance {d} outside [0, {w}]")));
        }
        Ok(leaf_length_from_sums(self.side_sums(t), w, d))
    }

    /// The shortest closed leaf. Its length is `2 sqrt(a_p a_i) e^-w(t)/2`
    /// whenever the critical point lies inside the cylinder.
    pub fn min_leaf(&self, t: f64) -> MinLeaf {
        let sums = self.side_sums(t);
        let w = self.width_native(t);
        let d_free = 0.5 * w + 0.5 * (sums.even.logmag() - sums.odd.logmag());
        if (0.0..=w).contains(&d_free) {
            let log_h = LN_2 + 0.5 * (sums.even.logmag() + sums.odd.logmag()) - 0.5 * w;
            MinLeaf {
                d_star: d_free,
                h_star: ExtScalar::from_log(log_h),
                interior: true,
            }
        } else {
            let d_star = d_free.clamp(0.0, w);
            MinLeaf {
                d_star,
                h_star: leaf_length_from_sums(sums, w, d_star),
                interior: false,
            }
        }
    }

    /// Bands in the order seen from the cut between `B_cut` and `B_cut+1`
    /// (`cut = 0` is the cut between `B_2N` and `B_1`).
    fn rotated(&self, cut: usize) -> Result<impl Iterator<Item = &BandSpec>> {
        let n = self.bands.len();
        if cut >= n {
            return Err(domain(format!("cut {cut} out of range 0..{n}")));
        }
        Ok(self.bands[cut..].iter().chain(&self.bands[..cut]))
    }

    /// The parabolic generators `P_1, ..., P_2N` at time `t`: translations by
    /// the odd thicknesses and lower parabolics with parameter `a_k e^-w(t)`
    /// for even ones.
    pub fn generators(&self, t: f64, cut: usize) -> Result<Vec<MoebiusMap>> {
        let thin = ExtScalar::from_log(-self.width_native(t));
        self.rotated(cut)?
            .enumerate()
            .map(|(k, band)| {
                let a = band.thickness(t);
                if k % 2 == 0 {
                    MoebiusMap::parabolic_shift(a)
                } else {
                    MoebiusMap::parabolic_lower(a * thin)
                }
            })
            .collect()
    }

    /// Product `P_1 ∘ P_2 ∘ ... ∘ P_2N`.
    pub fn cut_product(&self, t: f64, cut: usize) -> Result<MoebiusMap> {
        Ok(self
            .generators(t, cut)?
            .iter()
            .fold(MoebiusMap::IDENTITY, |acc, g| acc.compose(g)))
    }

    /// Abscissae `x_1, ..., x_2N` of the cut cylinder:
    /// `x_2j-1 = P_1...P_2j-1 (0)` and `x_2j = P_1...P_2j (inf)`. These are the
    /// convergents of one continued fraction, so they interlace:
    /// `x_1 < x_3 < ... < x_2N-1 < x_2N < ... < x_4 < x_2`.
    pub fn boundary_points(&self, t: f64, cut: usize) -> Result<Vec<BoundaryPoint>> {
        let mut prefix = MoebiusMap::IDENTITY;
        self.generators(t, cut)?
            .iter()
            .enumerate()
            .map(|(k, g)| {
                prefix = prefix.compose(g);
                let base = if k % 2 == 0 {
                    BoundaryPoint::ZERO
                } else {
                    BoundaryPoint::Infinity
                };
                prefix.apply(base)
            })
            .collect()
    }

    /// `cosh(h) - 1`. With `(a, b; c, d)` the generator product,
    /// `x_2N = a/c`, `x_2N-1 = b/d` and `ad - bc = 1`, so
    /// `x_2N / x_2N-1 - 1 = 1/(bc)` and `cosh(h) - 1 = 2bc`.
    pub fn cosh_height_minus_one(&self, t: f64, cut: usize) -> Result<ExtScalar> {
        let m = self.cut_product(t, cut)?;
        Ok(ExtScalar::from_f64(2.0) * m.b * m.c)
    }

    /// Height of the cylinder: length of the geodesic arc leaving the cut
    /// leaf perpendicularly and returning to it.
    pub fn height(&self, t: f64, cut: usize) -> Result<ExtScalar> {
        acosh1p_ext(self.cosh_height_minus_one(t, cut)?)
    }

    /// Keeps only the unit arcs (the tronçons). Emptied bands disappear and
    /// same-side neighbours are merged, cyclically, so the sides alternate
    /// again. Band order is kept, so the result may start with a band of the
    /// original right side; the height only depends on the cyclic word up to
    /// the mirror `z -> e^w / z`, which swaps the two kinds of generators.
    pub fn truncate(&self) -> Result<CylinderSpec> {
        let mut runs: Vec<(usize, Vec<f64>)> = Vec::new();
        for (k, band) in self.bands.iter().enumerate() {
            let units = band.unit_count();
            if units == 0 {
                continue;
            }
            let side = k % 2;
            match runs.last_mut() {
                Some((s, arcs)) if *s == side => arcs.extend(std::iter::repeat(1.0).take(units)),
                _ => runs.push((side, vec![1.0; units])),
            }
        }
        if runs.len() > 1 && runs[0].0 == runs[runs.len() - 1].0 {
            let (_, mut tail) = runs.pop().expect("non-empty");
            tail.append(&mut runs[0].1);
            runs[0].1 = tail;
        }
        if runs.len() < 2 {
            return Err(Error::InvalidCylinder("side without unit arc".into()));
        }
        let bands = runs
            .into_iter()
            .map(|(_, arcs)| BandSpec::new(arcs))
            .collect::<Result<_>>()?;
        CylinderSpec::new(self.core_id.clone(), self.width, bands)
    }

    /// Height `h'(t)` of the truncated cylinder, measured from the leaf that
    /// the original cut `cut` leaves behind.
    ///
    /// This is the generator product with every non-unit arc set to zero. It
    /// agrees with `truncate()?.height(t, 0)` unless the first and last
    /// surviving bands sit on the same side: the inherited leaf then lies
    /// inside the band merged across the cut, and no band boundary of the
    /// truncated cylinder is guaranteed to give a height below `h(t)`.
    pub fn truncated_height(&self, t: f64, cut: usize) -> Result<ExtScalar> {
        let thin = ExtScalar::from_log(-self.width_native(t));
        let mut m = MoebiusMap::IDENTITY;
        for (k, band) in self.rotated(cut)?.enumerate() {
            let units = band.unit_count();
            if units == 0 {
                continue;
            }
            let a = ExtScalar::from_f64(units as f64);
            let g = if k % 2 == 0 {
                MoebiusMap::parabolic_shift(a)?
            } else {
                MoebiusMap::parabolic_lower(a * thin)?
            };
            m = m.compose(&g);
        }
        acosh1p_ext(ExtScalar::from_f64(2.0) * m.b * m.c)
    }

    /// `h'(t) <= h(t) <= l(t) <= h*(t)` at the default cut.
    pub fn bracket(&self, t: f64) -> Result<LengthBracket> {
        Ok(LengthBracket {
            t,
            lower: self.height(t, 0)?,
            upper: self.min_leaf(t).h_star,
            crosscheck_lower: self.truncated_height(t, 0)?,
        })
    }

    pub fn asymptote(&self) -> AsymptoticData {
        let (left, right) = self.unit_counts();
        AsymptoticData {
            k: (left * right) as u64,
            w: self.width,
        }
    }
}

fn leaf_length_from_sums(sums: SideSums, w: f64, d: f64) -> ExtScalar {
    (sums.even * ExtScalar::from_log(-d)).add_same_sign(sums.odd * ExtScalar::from_log(d - w))
}
