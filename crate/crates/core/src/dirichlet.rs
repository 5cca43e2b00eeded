//! Partial Dirichlet series over primes and upper Dirichlet density estimates.
//!
//! Everything here is a finite surrogate. The upper Dirichlet density of a
//! set `S` is `limsup_{s→1+} Σ_{p∈S} p^{-s} / ln(1/(s-1))`; with eigenvalues
//! known only up to a truncation `X` the sums are evaluated on a grid of
//! `s` values and the lim sup is replaced by the maximum over the grid.
//!
//! A truncated sum stops growing once `s - 1` is small compared with
//! `1 / ln X`, so grid points must satisfy the coupling rule
//! `(s - 1) ln X >= coupling_constant`.

use std::fmt;
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::sources::{EigenvalueSequence, Entry};
use crate::summation::indexed_sum;

/// Default value of the coupling constant.
pub const DEFAULT_COUPLING: f64 = 3.0;

/// Default number of grid exponents: `s = 1 + 10^{-j/2}` for `j = 1..=4`.
pub const DEFAULT_GRID_STEPS: u32 = 4;

/// Largest moment order accepted by the power sums.
pub const MAX_MOMENT: u32 = 8;

/// Descending `s` values in `(1, 2)` usable at a given truncation.
#[derive(Debug, Clone, PartialEq)]
pub struct SGrid {
    points: Vec<f64>,
    truncation_limit: u64,
    coupling_constant: f64,
    dropped: Vec<f64>,
}

impl SGrid {
    /// Explicit grid. Every point must lie in `(1, 2)` and satisfy the
    /// coupling rule for `truncation_limit`.
    pub fn new(points: Vec<f64>, truncation_limit: u64, coupling_constant: f64) -> Result<Self> {
        Self::check_coupling_constant(coupling_constant)?;
        let mut points = Self::checked_points(points)?;
        points.dedup();
        for &s in &points {
            check_coupling(s, truncation_limit, coupling_constant)?;
        }
        Ok(Self {
            points,
            truncation_limit,
            coupling_constant,
            dropped: Vec::new(),
        })
    }

    /// Geometric grid `s = 1 + 10^{-j/2}`, `j = 1..=steps`, keeping only the
    /// points that satisfy the coupling rule. Dropped points are recorded.
    pub fn geometric(steps: u32, truncation_limit: u64, coupling_constant: f64) -> Result<Self> {
        let candidates = (1..=steps)
            .map(|j| 1.0 + 10f64.powf(-(j as f64) / 2.0))
            .collect();
        Self::filtered(candidates, truncation_limit, coupling_constant)
    }

    /// Like [`SGrid::new`] but drops points that violate the coupling rule
    /// instead of failing; fails only if nothing remains.
    pub fn filtered(points: Vec<f64>, truncation_limit: u64, coupling_constant: f64) -> Result<Self> {
        Self::check_coupling_constant(coupling_constant)?;
        let mut points = Self::checked_points(points)?;
        points.dedup();
        let (kept, dropped): (Vec<f64>, Vec<f64>) = points
            .into_iter()
            .partition(|&s| check_coupling(s, truncation_limit, coupling_constant).is_ok());
        if kept.is_empty() {
            return Err(Error::InvalidGrid(format!(
                "no grid point satisfies (s-1)*ln({truncation_limit}) >= {coupling_constant}"
            )));
        }
        Ok(Self {
            points: kept,
            truncation_limit,
            coupling_constant,
            dropped,
        })
    }

    /// The default grid for a sequence.
    pub fn default_for(seq: &EigenvalueSequence) -> Result<Self> {
        Self::geometric(DEFAULT_GRID_STEPS, seq.truncation(), DEFAULT_COUPLING)
    }

    fn check_coupling_constant(c: f64) -> Result<()> {
        if !(c.is_finite() && c >= 0.0) {
            return Err(Error::InvalidGrid(format!(
                "coupling constant {c} must be finite and >= 0"
            )));
        }
        Ok(())
    }

    fn checked_points(mut points: Vec<f64>) -> Result<Vec<f64>> {
        if points.is_empty() {
            return Err(Error::InvalidGrid("no points".into()));
        }
        if let Some(s) = points.iter().find(|s| !(**s > 1.0 && **s < 2.0)) {
            return Err(Error::InvalidGrid(format!(
                "s = {s} is outside (1, 2); ln(1/(s-1)) must be positive"
            )));
        }
        points.sort_by(|a, b| b.total_cmp(a));
        Ok(points)
    }

    pub fn points(&self) -> &[f64] {
        &self.points
    }

    /// Points removed by [`SGrid::geometric`] or [`SGrid::filtered`].
    pub fn dropped(&self) -> &[f64] {
        &self.dropped
    }

    pub fn truncation_limit(&self) -> u64 {
        self.truncation_limit
    }

    pub fn coupling_constant(&self) -> f64 {
        self.coupling_constant
    }

    /// The point closest to 1.
    pub fn smallest(&self) -> f64 {
        *self.points.last().expect("grid is nonempty")
    }

    fn check_against(&self, seq: &EigenvalueSequence) -> Result<()> {
        if seq.is_empty() {
            return Err(Error::InvalidSequence("sequence is empty".into()));
        }
        for &s in &self.points {
            check_coupling(s, seq.truncation(), self.coupling_constant)?;
        }
        Ok(())
    }
}

fn check_coupling(s: f64, truncation: u64, coupling: f64) -> Result<()> {
    let product = (s - 1.0) * (truncation as f64).ln();
    if product >= coupling {
        Ok(())
    } else {
        Err(Error::CouplingViolated {
            s,
            truncation,
            coupling,
            product,
        })
    }
}

/// `ln(1/(s-1))`, the growth rate of `Σ_p p^{-s}` as `s → 1+`.
pub fn log_pole(s: f64) -> f64 {
    -(s - 1.0).ln()
}

/// A set of primes described by a predicate on `(p, a_p)`.
#[derive(Clone)]
pub enum ThresholdSet {
    All,
    /// `a_p > 0`.
    Positive,
    /// `a_p <= 0`.
    NonPositive,
    /// `a_p > 0` and `|a_p|^4 >= t`.
    FourthPowerAtLeast(f64),
    /// `a_p > 0` and `|a_p|^3 >= t`.
    CubeAtLeast(f64),
    /// `a_p > c`.
    Above(f64),
    Custom {
        name: String,
        predicate: Arc<dyn Fn(u64, f64) -> bool + Send + Sync>,
    },
}

impl ThresholdSet {
    pub fn custom(
        name: impl Into<String>,
        predicate: impl Fn(u64, f64) -> bool + Send + Sync + 'static,
    ) -> Self {
        ThresholdSet::Custom {
            name: name.into(),
            predicate: Arc::new(predicate),
        }
    }

    pub fn contains(&self, p: u64, a: f64) -> bool {
        match self {
            ThresholdSet::All => true,
            ThresholdSet::Positive => a > 0.0,
            ThresholdSet::NonPositive => a <= 0.0,
            ThresholdSet::FourthPowerAtLeast(t) => a > 0.0 && a.powi(4) >= *t,
            ThresholdSet::CubeAtLeast(t) => a > 0.0 && a.powi(3) >= *t,
            ThresholdSet::Above(c) => a > *c,
            ThresholdSet::Custom { predicate, .. } => predicate(p, a),
        }
    }

    fn contains_entry(&self, e: &Entry) -> bool {
        self.contains(e.p, e.a)
    }
}

impl fmt::Debug for ThresholdSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl fmt::Display for ThresholdSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ThresholdSet::All => write!(f, "all"),
            ThresholdSet::Positive => write!(f, "a>0"),
            ThresholdSet::NonPositive => write!(f, "a<=0"),
            ThresholdSet::FourthPowerAtLeast(t) => write!(f, "a>0,a^4>={t}"),
            ThresholdSet::CubeAtLeast(t) => write!(f, "a>0,a^3>={t}"),
            ThresholdSet::Above(c) => write!(f, "a>{c}"),
            ThresholdSet::Custom { name, .. } => write!(f, "{name}"),
        }
    }
}

fn check_s(s: f64) -> Result<()> {
    if s.is_finite() && s > 1.0 {
        Ok(())
    } else {
        Err(Error::out_of_range("s", s, "finite s > 1"))
    }
}

fn check_k(k: u32) -> Result<()> {
    if k <= MAX_MOMENT {
        Ok(())
    } else {
        Err(Error::out_of_range("k", k, "0..=8"))
    }
}

#[inline]
fn power(a: f64, k: u32, signed: bool) -> f64 {
    if signed {
        a.powi(k as i32)
    } else {
        a.abs().powi(k as i32)
    }
}

/// `Σ_{p∈set} a_p^k p^{-s}` (or `|a_p|^k` when `signed` is false), summed in
/// ascending prime order with compensation. `k = 0` gives `Σ_{p∈set} p^{-s}`.
///
/// Excluded primes never carry an entry, so they never contribute.
pub fn subset_power_sum(
    seq: &EigenvalueSequence,
    set: &ThresholdSet,
    k: u32,
    signed: bool,
    s: f64,
) -> Result<f64> {
    check_s(s)?;
    check_k(k)?;
    let entries = seq.entries();
    Ok(indexed_sum(entries.len(), |i| {
        let e = &entries[i];
        if set.contains_entry(e) {
            power(e.a, k, signed) * (e.p as f64).powf(-s)
        } else {
            0.0
        }
    }))
}

/// Power sums over the same set for several `(k, signed)` pairs at once,
/// sharing the `p^{-s}` evaluations.
fn power_sums(
    seq: &EigenvalueSequence,
    set: &ThresholdSet,
    orders: &[(u32, bool)],
    s: f64,
) -> Vec<f64> {
    let entries = seq.entries();
    let weights: Vec<f64> = entries
        .iter()
        .map(|e| {
            if set.contains_entry(e) {
                (e.p as f64).powf(-s)
            } else {
                0.0
            }
        })
        .collect();
    orders
        .iter()
        .map(|&(k, signed)| {
            indexed_sum(entries.len(), |i| power(entries[i].a, k, signed) * weights[i])
        })
        .collect()
}

/// `(s, sum(s) / ln(1/(s-1)))`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RatioPoint {
    pub s: f64,
    pub sum: f64,
    pub ratio: f64,
}

/// The normalised sum at every grid point, in grid order.
pub fn ratio_profile(
    seq: &EigenvalueSequence,
    set: &ThresholdSet,
    k: u32,
    signed: bool,
    grid: &SGrid,
) -> Result<Vec<RatioPoint>> {
    check_k(k)?;
    grid.check_against(seq)?;
    grid.points()
        .iter()
        .map(|&s| {
            let sum = subset_power_sum(seq, set, k, signed, s)?;
            Ok(RatioPoint {
                s,
                sum,
                ratio: sum / log_pole(s),
            })
        })
        .collect()
}

/// How the limiting moment is known.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TargetKind {
    /// `Σ a^k p^{-s} = m ln(1/(s-1)) + O(1)`.
    Equality,
    /// `Σ a^k p^{-s} <= m ln(1/(s-1)) + O(1)`.
    UpperBound,
}

impl TargetKind {
    pub fn as_str(&self) -> &'static str {
        match self {
            TargetKind::Equality => "equality",
            TargetKind::UpperBound => "upper_bound",
        }
    }
}

/// Moment orders, targets and target kinds for a non-polyhedral self-dual
/// form: `(k, m(k), kind)`.
pub const MOMENT_TARGETS: [(u32, f64, TargetKind); 5] = [
    (2, 1.0, TargetKind::Equality),
    (3, 0.0, TargetKind::Equality),
    (4, 2.0, TargetKind::Equality),
    (6, 5.0, TargetKind::UpperBound),
    (8, 14.0, TargetKind::UpperBound),
];

/// Relative tolerance for the equality targets `k = 2, 4`.
pub const EQUALITY_REL_TOL: f64 = 0.05;
/// Absolute tolerance for the vanishing odd moment `k = 3`.
pub const ZERO_ABS_TOL: f64 = 0.02;
/// Relative slack for the upper-bound targets `k = 6, 8`.
pub const UPPER_BOUND_REL_TOL: f64 = 0.10;

/// One moment order across the grid.
#[derive(Debug, Clone, PartialEq)]
pub struct MomentRow {
    pub k: u32,
    pub target: f64,
    pub kind: TargetKind,
    /// `ratio_k(s) / ratio_0(s)` per grid point.
    pub normalized: Vec<f64>,
    /// `ratio_k(s)` per grid point.
    pub raw: Vec<f64>,
    /// Whether the value at the smallest `s` meets the target.
    pub consistent: bool,
}

impl MomentRow {
    /// Self-normalised ratio at the smallest grid point.
    pub fn headline(&self) -> f64 {
        *self.normalized.last().expect("grid is nonempty")
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct MomentProfile {
    pub s_points: Vec<f64>,
    /// `ratio_0(s)` per grid point.
    pub baseline: Vec<f64>,
    pub rows: Vec<MomentRow>,
}

impl MomentProfile {
    pub fn row(&self, k: u32) -> Option<&MomentRow> {
        self.rows.iter().find(|r| r.k == k)
    }
}

/// Whether a self-normalised moment meets its target.
pub fn moment_consistent(value: f64, target: f64, kind: TargetKind) -> bool {
    match kind {
        TargetKind::Equality if target == 0.0 => value.abs() <= ZERO_ABS_TOL,
        TargetKind::Equality => (value - target).abs() <= EQUALITY_REL_TOL * target.abs(),
        TargetKind::UpperBound => value <= target * (1.0 + UPPER_BOUND_REL_TOL),
    }
}

/// Self-normalised moments `Σ a^k p^{-s} / Σ p^{-s}` for `k ∈ {2,3,4,6,8}`.
///
/// Dividing by the `k = 0` sum cancels the common truncation bias of the
/// raw `ln(1/(s-1))` ratios; both are reported.
pub fn moment_profile(seq: &EigenvalueSequence, grid: &SGrid) -> Result<MomentProfile> {
    grid.check_against(seq)?;
    let mut orders = vec![(0u32, false)];
    orders.extend(MOMENT_TARGETS.iter().map(|&(k, _, _)| (k, true)));

    let mut baseline = Vec::with_capacity(grid.points().len());
    let mut per_k: Vec<(Vec<f64>, Vec<f64>)> = vec![(Vec::new(), Vec::new()); MOMENT_TARGETS.len()];
    for &s in grid.points() {
        let sums = power_sums(seq, &ThresholdSet::All, &orders, s);
        let pole = log_pole(s);
        baseline.push(sums[0] / pole);
        for (i, sum) in sums[1..].iter().enumerate() {
            per_k[i].0.push(sum / sums[0]);
            per_k[i].1.push(sum / pole);
        }
    }

    let rows = MOMENT_TARGETS
        .iter()
        .zip(per_k)
        .map(|(&(k, target, kind), (normalized, raw))| {
            let consistent = moment_consistent(*normalized.last().unwrap(), target, kind);
            MomentRow {
                k,
                target,
                kind,
                normalized,
                raw,
                consistent,
            }
        })
        .collect();
    Ok(MomentProfile {
        s_points: grid.points().to_vec(),
        baseline,
        rows,
    })
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DensityPoint {
    pub s: f64,
    pub ratio: f64,
    /// Ratio did not decrease relative to the previous (larger) `s`.
    pub nondecreasing: bool,
}

/// Finite-grid surrogate for an upper Dirichlet density.
#[derive(Debug, Clone, PartialEq)]
pub struct DensityEstimate {
    /// Maximum of the per-point ratios. Not clamped to 1.
    pub value: f64,
    pub per_point: Vec<DensityPoint>,
    pub truncation_limit: u64,
    /// Number of entries in the set.
    pub subset_size: usize,
    /// Grid points dropped by the coupling rule before estimation.
    pub dropped_points: Vec<f64>,
}

pub fn upper_density_estimate(
    seq: &EigenvalueSequence,
    set: &ThresholdSet,
    grid: &SGrid,
) -> Result<DensityEstimate> {
    let profile = ratio_profile(seq, set, 0, false, grid)?;
    let mut per_point = Vec::with_capacity(profile.len());
    let mut previous: Option<f64> = None;
    for point in &profile {
        per_point.push(DensityPoint {
            s: point.s,
            ratio: point.ratio,
            nondecreasing: previous.is_none_or(|prev| point.ratio >= prev),
        });
        previous = Some(point.ratio);
    }
    let value = per_point.iter().map(|p| p.ratio).fold(0.0, f64::max);
    Ok(DensityEstimate {
        value,
        per_point,
        truncation_limit: seq.truncation(),
        subset_size: seq.entries().iter().filter(|e| set.contains_entry(e)).count(),
        dropped_points: grid.dropped().to_vec(),
    })
}

/// Outcome of testing `density({a_p > c}) >= delta` on data.
#[derive(Debug, Clone, PartialEq)]
pub struct TheoremCheck {
    pub threshold: f64,
    pub delta: f64,
    pub estimate: DensityEstimate,
    pub pass: bool,
}

pub fn theorem_check(
    seq: &EigenvalueSequence,
    c: f64,
    delta: f64,
    grid: &SGrid,
) -> Result<TheoremCheck> {
    if !(delta > 0.0 && delta < 1.0) {
        return Err(Error::out_of_range("delta", delta, "(0, 1)"));
    }
    if !c.is_finite() {
        return Err(Error::out_of_range("threshold", c, "finite reals"));
    }
    let estimate = upper_density_estimate(seq, &ThresholdSet::Above(c), grid)?;
    let pass = estimate.value >= delta;
    Ok(TheoremCheck {
        threshold: c,
        delta,
        estimate,
        pass,
    })
}
