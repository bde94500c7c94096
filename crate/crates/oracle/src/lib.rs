//! Reference computations for testing `stretch-core`, written against raw
//! numbers only. Nothing here depends on the implementation under test.
//!
//! * seeded random cylinders and weight vectors,
//! * exact rational evaluation of the nested continued fractions that give
//!   the boundary abscissae of a cut cylinder,
//! * a dense grid search for the shortest closed leaf,
//! * band-by-band leaf lengths in plain `f64`.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};
pub use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

/// A cylinder as plain data: width at `t = 0` and the arc lengths of the
/// bands `B_1, ..., B_2N` (odd bands on the left side).
#[derive(Clone, Debug, PartialEq)]
pub struct RawCylinder {
    pub width: f64,
    pub bands: Vec<Vec<f64>>,
}

impl RawCylinder {
    pub fn unit_counts(&self) -> (u64, u64) {
        let side = |parity: usize| {
            self.bands
                .iter()
                .skip(parity)
                .step_by(2)
                .flatten()
                .filter(|&&b| b == 1.0)
                .count() as u64
        };
        (side(0), side(1))
    }

    /// `true` when some band holds an arc shorter than 1.
    pub fn has_non_unit_arc(&self) -> bool {
        self.bands.iter().flatten().any(|&b| b < 1.0)
    }

    /// Band thicknesses `sum b^(e^t)` computed with `f64::powf`.
    pub fn thicknesses(&self, t: f64) -> Vec<f64> {
        let s = t.exp();
        self.bands
            .iter()
            .map(|band| band.iter().map(|&b| b.powf(s)).sum())
            .collect()
    }

    /// `(a_i, a_p)`: total thickness of the odd and of the even bands.
    pub fn side_sums(&self, t: f64) -> (f64, f64) {
        let th = self.thicknesses(t);
        let odd = th.iter().step_by(2).sum();
        let even = th.iter().skip(1).step_by(2).sum();
        (odd, even)
    }

    /// Thickness of each side once every non-unit arc has vanished.
    pub fn limit_side_sums(&self) -> (f64, f64) {
        let (l, r) = self.unit_counts();
        (l as f64, r as f64)
    }

    /// Leaf length at distance `d` from the right boundary, summed band by
    /// band: `sum_even a_k e^-d + sum_odd a_k e^-(w(t) - d)`.
    pub fn leaf_by_band(&self, t: f64, d: f64) -> f64 {
        let w = t.exp() * self.width;
        self.thicknesses(t)
            .iter()
            .enumerate()
            .map(|(k, a)| {
                if k % 2 == 1 {
                    a * (-d).exp()
                } else {
                    a * (d - w).exp()
                }
            })
            .sum()
    }
}

/// Shape of the random cylinders.
#[derive(Clone, Copy, Debug)]
pub struct CorpusConfig {
    /// Largest `N` (the cylinder has `2N` bands).
    pub max_n: usize,
    pub max_arcs_per_band: usize,
    pub width_range: (f64, f64),
    /// Probability that an arc has length exactly 1.
    pub unit_probability: f64,
    /// Non-unit arcs are drawn uniformly in `[min, max]`.
    pub non_unit_range: (f64, f64),
}

impl Default for CorpusConfig {
    fn default() -> Self {
        CorpusConfig {
            max_n: 4,
            max_arcs_per_band: 3,
            width_range: (0.1, 3.0),
            unit_probability: 0.4,
            non_unit_range: (0.01, 0.999),
        }
    }
}

pub fn random_cylinder(rng: &mut impl Rng, cfg: &CorpusConfig) -> RawCylinder {
    loop {
        let n = rng.gen_range(1..=cfg.max_n);
        let bands: Vec<Vec<f64>> = (0..2 * n)
            .map(|_| {
                let len = rng.gen_range(1..=cfg.max_arcs_per_band);
                (0..len)
                    .map(|_| {
                        if rng.gen_bool(cfg.unit_probability) {
                            1.0
                        } else {
                            rng.gen_range(cfg.non_unit_range.0..=cfg.non_unit_range.1)
                        }
                    })
                    .collect()
            })
            .collect();
        let cyl = RawCylinder {
            width: rng.gen_range(cfg.width_range.0..=cfg.width_range.1),
            bands,
        };
        let (l, r) = cyl.unit_counts();
        if l > 0 && r > 0 {
            return cyl;
        }
    }
}

pub fn corpus(seed: u64, count: usize, cfg: &CorpusConfig) -> Vec<RawCylinder> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..count).map(|_| random_cylinder(&mut rng, cfg)).collect()
}

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Exact value of a finite `f64`.
pub fn exact(x: f64) -> BigRational {
    BigRational::from_float(x).expect("finite input")
}

pub fn to_f64(x: &BigRational) -> f64 {
    x.to_f64().expect("representable")
}

/// `[p_1; p_2, ..., p_m] = p_1 + 1/(p_2 + 1/(... + 1/p_m))`, evaluated
/// exactly from the innermost term outwards.
pub fn continued_fraction(terms: &[BigRational]) -> BigRational {
    let (last, rest) = terms.split_last().expect("at least one term");
    rest.iter()
        .rev()
        .fold(last.clone(), |acc, p| p + acc.recip())
}

/// Continued-fraction terms of the cut cylinder at time `t`: `a_k` for odd
/// bands and `a_k e^-w(t)` for even ones, each rounded once to `f64`.
pub fn cf_terms(cyl: &RawCylinder, t: f64) -> Vec<BigRational> {
    let thin = (-(t.exp() * cyl.width)).exp();
    cyl.thicknesses(t)
        .iter()
        .enumerate()
        .map(|(k, &a)| exact(if k % 2 == 0 { a } else { a * thin }))
        .collect()
}

/// Exact boundary abscissae `x_m = [p_1; ..., p_m]`, `m = 1..2N`.
pub fn boundary_points(cyl: &RawCylinder, t: f64) -> Vec<BigRational> {
    let terms = cf_terms(cyl, t);
    (1..=terms.len())
        .map(|m| continued_fraction(&terms[..m]))
        .collect()
}

/// `cosh(h) = 1 + 2 / (x_2N / x_2N-1 - 1)`, exactly.
pub fn cosh_height_by_ratio(xs: &[BigRational]) -> BigRational {
    let n = xs.len();
    let ratio = &xs[n - 1] / &xs[n - 2];
    let two = BigRational::from_integer(BigInt::from(2));
    BigRational::one() + two / (ratio - BigRational::one())
}

/// `cosh(h) = 1 / cos θ` with `cos θ = (x_2N - x_2N-1) / (x_2N + x_2N-1)`,
/// the angle of the geodesic through the two last abscissae seen from `0`.
pub fn cosh_height_by_angle(xs: &[BigRational]) -> BigRational {
    let n = xs.len();
    let (hi, lo) = (&xs[n - 1], &xs[n - 2]);
    let cos = (hi - lo) / (hi + lo);
    assert!(!cos.is_zero());
    cos.recip()
}

/// Shortest leaf `min_d a_p e^-d + a_i e^(d - w)` over the grid
/// `d = k w / steps`, `k = 0..=steps`. Returns `(d, length)`.
///
/// The exponentials follow a geometric recurrence re-anchored on a direct
/// `exp` every 1000 steps.
pub fn grid_min_leaf(a_i: f64, a_p: f64, w: f64, steps: usize) -> (f64, f64) {
    const ANCHOR: usize = 1000;
    let step = w / steps as f64;
    let (down, up) = ((-step).exp(), step.exp());
    let mut best = (0.0, f64::INFINITY);
    let (mut e_minus, mut e_plus) = (1.0, 1.0);
    for k in 0..=steps {
        let d = if k == steps { w } else { k as f64 * step };
        if k % ANCHOR == 0 || k == steps {
            e_minus = (-d).exp();
            e_plus = (d - w).exp();
        }
        let f = a_p * e_minus + a_i * e_plus;
        if f < best.1 {
            best = (d, f);
        }
        e_minus *= down;
        e_plus *= up;
    }
    best
}

/// Random weight vectors `(g, h)` on `m` shared cores whose log-ratios
/// `ln(g_j / h_j)` spread over at least `min_spread`.
pub fn weight_pair(rng: &mut impl Rng, m: usize, min_spread: f64) -> (Vec<f64>, Vec<f64>) {
    loop {
        let g: Vec<f64> = (0..m).map(|_| rng.gen_range(0.2..=3.0)).collect();
        let logs: Vec<f64> = (0..m).map(|_| rng.gen_range(-1.5..=1.5)).collect();
        let spread = logs.iter().cloned().fold(f64::NEG_INFINITY, f64::max)
            - logs.iter().cloned().fold(f64::INFINITY, f64::min);
        if spread >= min_spread {
            let h = g.iter().zip(&logs).map(|(w, r)| w * (-r).exp()).collect();
            return (g, h);
        }
    }
}
