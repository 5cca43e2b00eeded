//! The threshold/density constants and the checks around them.
//!
//! Write `M_k` for the limiting ratio `Σ a_p^k p^{-s} / ln(1/(s-1))` (an
//! equality for `k <= 4`, an upper bound for `k = 6, 8`), `d` for the share of
//! the fourth moment carried by primes with `a_p <= 0`, and
//!
//! ```text
//! g(d) = d^{5/4} / (M8 - (M4 - d)^2)^{1/4}
//! ```
//!
//! for the lower bound on the positive-side cubic moment. For a density
//! target `δ`, the constants `(d, β, α)` solve
//!
//! ```text
//! (M4 - d)(1 - β)  = sqrt(M8 δ)
//! g(d)(1 - α)      = sqrt(M6 δ)
//! ((M4 - d) β)^{1/4} = (g(d) α)^{1/3}
//! ```
//!
//! and the threshold is `c = ((M4 - d) β)^{1/4}`: the set `{p : a_p > c - ε}`
//! then has upper Dirichlet density at least `δ`. With the default moments
//! `(1, 0, 2, 5, 14)` and `δ = 1/100` this gives `c ≈ 0.7787`.

use rayon::prelude::*;

use crate::dirichlet::{log_pole, subset_power_sum, SGrid, ThresholdSet};
use crate::error::{Error, Result};
use crate::sources::EigenvalueSequence;

/// Number of uniform cells scanned for a sign change before bisecting.
pub const BRACKET_CELLS: usize = 512;
/// Bisection stops once the bracket is shorter than this.
pub const BISECTION_WIDTH: f64 = 1e-12;
/// Tolerance on the three defining equations.
pub const EQUATION_TOLERANCE: f64 = 1e-9;
/// Slack allowed at the crossing point in [`dichotomy_check`].
pub const DICHOTOMY_SLACK: f64 = 1e-12;
/// Smallest acceptable margin in [`inequality_audit`].
pub const AUDIT_TOLERANCE: f64 = 1e-12;
/// Relative tolerance for identities in [`inequality_audit`].
pub const IDENTITY_REL_TOLERANCE: f64 = 1e-10;

/// Four-digit reference values of the solution at `δ = 1/100`, kept for
/// side-by-side reporting.
pub const REFERENCE_D: f64 = 1.2581;
pub const REFERENCE_BETA: f64 = 0.4957;
/// Reference value of `(2 - d) β`. The high-precision solution gives 0.36770.
pub const REFERENCE_PRODUCT: f64 = 0.36729;
/// Rounded `β` for the case analysis.
pub const REFERENCE_PROOF_BETA: f64 = 0.495;

/// Limiting moment ratios `M_k`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MomentBounds {
    pub m2: f64,
    pub m3: f64,
    pub m4: f64,
    pub m6: f64,
    pub m8: f64,
}

impl Default for MomentBounds {
    /// Sato–Tate values: Catalan numbers for even `k`, zero for `k = 3`.
    fn default() -> Self {
        Self {
            m2: 1.0,
            m3: 0.0,
            m4: 2.0,
            m6: 5.0,
            m8: 14.0,
        }
    }
}

impl MomentBounds {
    pub fn validate(&self) -> Result<()> {
        let all = [self.m2, self.m3, self.m4, self.m6, self.m8];
        if all.iter().any(|m| !m.is_finite()) {
            return Err(Error::Domain("moment bounds must be finite".into()));
        }
        if !(self.m4 > 0.0 && self.m6 > 0.0 && self.m8 > 0.0) {
            return Err(Error::Domain(format!(
                "need M4, M6, M8 > 0 (got {}, {}, {})",
                self.m4, self.m6, self.m8
            )));
        }
        Ok(())
    }

    /// `g(d)` without domain checks; `NaN` outside the domain.
    fn g(&self, d: f64) -> f64 {
        let denom = self.m8 - (self.m4 - d).powi(2);
        d.powf(1.25) / denom.powf(0.25)
    }
}

/// `g(d) = d^{5/4} / (M8 − (M4 − d)²)^{1/4}`, the lower bound on
/// `limsup Σ_{a_p>0} |a_p|^3 p^{-s} / ln(1/(s-1))`.
///
/// Accepts `0 < d <= M4`; `d = M4` (all of the fourth moment on the
/// nonpositive side) is a valid boundary case.
pub fn lemma_bound(d: f64, m: &MomentBounds) -> Result<f64> {
    m.validate()?;
    if !(d > 0.0 && d <= m.m4) {
        return Err(Error::Domain(format!("d = {d} is outside (0, {}]", m.m4)));
    }
    let denom = m.m8 - (m.m4 - d).powi(2);
    if denom.is_nan() || denom <= 0.0 {
        return Err(Error::Domain(format!(
            "M8 - (M4 - d)^2 = {denom} is not positive at d = {d}"
        )));
    }
    Ok(d.powf(1.25) / denom.powf(0.25))
}

/// Solution of the constant system for one density target.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ConstantSolution {
    pub d: f64,
    pub beta: f64,
    pub alpha: f64,
    pub threshold_c: f64,
    pub delta: f64,
    /// Largest absolute residual of the three defining equations.
    pub residual: f64,
}

impl ConstantSolution {
    /// `c^4 = (M4 - d) β`.
    pub fn threshold_fourth_power(&self) -> f64 {
        self.threshold_c.powi(4)
    }

    /// Residuals of the three defining equations, recomputed from the stored
    /// values.
    pub fn equation_residuals(&self, m: &MomentBounds) -> [f64; 3] {
        let g = m.g(self.d);
        [
            (m.m4 - self.d) * (1.0 - self.beta) - (m.m8 * self.delta).sqrt(),
            g * (1.0 - self.alpha) - (m.m6 * self.delta).sqrt(),
            ((m.m4 - self.d) * self.beta).powf(0.25) - (g * self.alpha).cbrt(),
        ]
    }
}

/// Bisection on a bracket with `f(lo)` and `f(hi)` of opposite sign (or zero).
fn bisect(f: impl Fn(f64) -> f64, mut lo: f64, mut hi: f64, width: f64) -> f64 {
    let mut f_lo = f(lo);
    if f_lo == 0.0 {
        return lo;
    }
    if f(hi) == 0.0 {
        return hi;
    }
    for _ in 0..200 {
        if hi - lo < width {
            break;
        }
        let mid = 0.5 * (lo + hi);
        let f_mid = f(mid);
        if f_mid == 0.0 {
            return mid;
        }
        if (f_mid < 0.0) == (f_lo < 0.0) {
            lo = mid;
            f_lo = f_mid;
        } else {
            hi = mid;
        }
    }
    0.5 * (lo + hi)
}

fn check_delta(delta: f64) -> Result<()> {
    if delta > 0.0 && delta < 1.0 {
        Ok(())
    } else {
        Err(Error::out_of_range("delta", delta, "(0, 1)"))
    }
}

/// The interval of `d` on which `(M4 - d)^2 < M8` and `β(d) > 0`.
pub fn feasible_interval(m: &MomentBounds, delta: f64) -> Result<(f64, f64)> {
    m.validate()?;
    check_delta(delta)?;
    let lo = (m.m4 - m.m8.sqrt()).max(0.0);
    let hi = m.m4 - (m.m8 * delta).sqrt();
    if hi <= lo {
        return Err(Error::Infeasible(format!(
            "no d with (M4-d)^2 < M8 and beta(d) > 0 (interval ({lo}, {hi}))"
        )));
    }
    Ok((lo, hi))
}

/// Solves the constant system by eliminating `β` and `α`:
/// `β(d) = 1 − sqrt(M8 δ)/(M4 − d)`, `α(d) = 1 − sqrt(M6 δ)/g(d)`, then finds
/// the root of `r(d) = ((M4 − d) β(d))^{1/4} − (g(d) α(d))^{1/3}` by a
/// uniform bracket scan followed by bisection.
pub fn solve_constants(m: &MomentBounds, delta: f64) -> Result<ConstantSolution> {
    let (lo, hi) = feasible_interval(m, delta)?;
    let root8 = (m.m8 * delta).sqrt();
    let root6 = (m.m6 * delta).sqrt();
    let beta_of = |d: f64| 1.0 - root8 / (m.m4 - d);
    let alpha_of = |d: f64| 1.0 - root6 / m.g(d);
    // (g α)^{1/3} uses the real cube root, so r stays continuous where α < 0.
    let r = |d: f64| ((m.m4 - d) * beta_of(d)).max(0.0).powf(0.25) - (m.g(d) * alpha_of(d)).cbrt();

    let nodes: Vec<(f64, f64)> = (0..=BRACKET_CELLS)
        .map(|i| {
            let d = lo + (hi - lo) * i as f64 / BRACKET_CELLS as f64;
            (d, r(d))
        })
        .filter(|(_, v)| v.is_finite())
        .collect();
    let bracket = nodes
        .windows(2)
        .find(|w| w[0].1 == 0.0 || (w[0].1 < 0.0) != (w[1].1 < 0.0))
        .ok_or_else(|| {
            Error::Infeasible(format!(
                "r(d) has no sign change on ({lo:.6}, {hi:.6}) for delta = {delta}"
            ))
        })?;
    let d = bisect(r, bracket[0].0, bracket[1].0, BISECTION_WIDTH);

    let beta = beta_of(d);
    let alpha = alpha_of(d);
    if !(beta > 0.0 && beta < 1.0) || !(alpha > 0.0 && alpha < 1.0) {
        return Err(Error::Infeasible(format!(
            "root d = {d} gives beta = {beta}, alpha = {alpha}; both must lie in (0, 1)"
        )));
    }
    let mut solution = ConstantSolution {
        d,
        beta,
        alpha,
        threshold_c: ((m.m4 - d) * beta).powf(0.25),
        delta,
        residual: 0.0,
    };
    solution.residual = solution
        .equation_residuals(m)
        .iter()
        .fold(0.0, |acc, r| acc.max(r.abs()));
    Ok(solution)
}

/// Which claim of the case analysis a grid point contradicts.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum DichotomyClaim {
    /// `(M4 - d)^2 (1 - β)^2 > M8 δ` for `d < d*`.
    FourthMomentSide,
    /// `g(d)^2 (1 - α)^2 > M6 δ` for `d > d*`.
    CubicMomentSide,
    /// `f1` strictly decreasing.
    FourthMomentMonotone,
    /// `f2` strictly increasing.
    CubicMomentMonotone,
}

impl DichotomyClaim {
    pub fn as_str(&self) -> &'static str {
        match self {
            DichotomyClaim::FourthMomentSide => "f1 > M8*delta below d*",
            DichotomyClaim::CubicMomentSide => "f2 > M6*delta above d*",
            DichotomyClaim::FourthMomentMonotone => "f1 strictly decreasing",
            DichotomyClaim::CubicMomentMonotone => "f2 strictly increasing",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DichotomyViolation {
    pub d: f64,
    pub claim: DichotomyClaim,
    pub value: f64,
    pub bound: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct DichotomyReport {
    pub d_star: f64,
    /// `f1(d*) − M8 δ` and `f2(d*) − M6 δ`.
    pub f1_gap_at_star: f64,
    pub f2_gap_at_star: f64,
    /// Where `f1` and `f2` cross their bounds with `β`, `α` frozen.
    pub f1_crossing: f64,
    pub f2_crossing: Option<f64>,
    pub points_checked: usize,
    /// Grid points outside the domain of `g`.
    pub points_skipped: usize,
    pub violations: Vec<DichotomyViolation>,
}

impl DichotomyReport {
    pub fn pass(&self) -> bool {
        self.violations.is_empty()
    }

    pub fn first_violation(&self) -> Option<&DichotomyViolation> {
        self.violations.first()
    }
}

/// `n` uniformly spaced points on `[lo, hi]`.
pub fn uniform_grid(lo: f64, hi: f64, n: usize) -> Vec<f64> {
    match n {
        0 => Vec::new(),
        1 => vec![lo],
        _ => (0..n)
            .map(|i| lo + (hi - lo) * i as f64 / (n - 1) as f64)
            .collect(),
    }
}

/// With `β` and `α` frozen at the solution, checks that every grid point
/// `d < d*` contradicts the fourth-moment inequality and every `d > d*`
/// contradicts the cubic-moment inequality, and that both sides are
/// monotone.
pub fn dichotomy_check(
    sol: &ConstantSolution,
    m: &MomentBounds,
    grid: &[f64],
) -> Result<DichotomyReport> {
    m.validate()?;
    let bound1 = m.m8 * sol.delta;
    let bound2 = m.m6 * sol.delta;
    let f1 = |d: f64| (m.m4 - d).powi(2) * (1.0 - sol.beta).powi(2);
    let f2 = |d: f64| m.g(d).powi(2) * (1.0 - sol.alpha).powi(2);

    let mut points: Vec<f64> = grid.to_vec();
    points.sort_by(f64::total_cmp);

    let mut violations = Vec::new();
    let mut checked = 0;
    let mut skipped = 0;
    let mut previous: Option<(f64, f64)> = None;
    for &d in &points {
        let v1 = f1(d);
        let v2 = f2(d);
        if !(d > 0.0 && d <= m.m4) || !v2.is_finite() {
            skipped += 1;
            continue;
        }
        checked += 1;
        if d < sol.d && v1 - bound1 < -DICHOTOMY_SLACK {
            violations.push(DichotomyViolation {
                d,
                claim: DichotomyClaim::FourthMomentSide,
                value: v1,
                bound: bound1,
            });
        }
        if d > sol.d && v2 - bound2 < -DICHOTOMY_SLACK {
            violations.push(DichotomyViolation {
                d,
                claim: DichotomyClaim::CubicMomentSide,
                value: v2,
                bound: bound2,
            });
        }
        if let Some((p1, p2)) = previous {
            if v1 >= p1 {
                violations.push(DichotomyViolation {
                    d,
                    claim: DichotomyClaim::FourthMomentMonotone,
                    value: v1,
                    bound: p1,
                });
            }
            if v2 <= p2 {
                violations.push(DichotomyViolation {
                    d,
                    claim: DichotomyClaim::CubicMomentMonotone,
                    value: v2,
                    bound: p2,
                });
            }
        }
        previous = Some((v1, v2));
    }

    let f1_crossing = m.m4 - bound1.sqrt() / (1.0 - sol.beta);
    let g_target = bound2.sqrt() / (1.0 - sol.alpha);
    let g_lo = (m.m4 - m.m8.sqrt()).max(0.0);
    let h = |d: f64| m.g(d) - g_target;
    let f2_crossing = {
        let a = g_lo + 1e-15;
        let b = m.m4;
        let (ha, hb) = (h(a), h(b));
        (ha.is_finite() && hb.is_finite() && (ha < 0.0) != (hb < 0.0))
            .then(|| bisect(h, a, b, BISECTION_WIDTH))
    };

    Ok(DichotomyReport {
        d_star: sol.d,
        f1_gap_at_star: f1(sol.d) - bound1,
        f2_gap_at_star: f2(sol.d) - bound2,
        f1_crossing,
        f2_crossing,
        points_checked: checked,
        points_skipped: skipped,
        violations,
    })
}

/// One density target of a sweep.
#[derive(Debug, Clone, PartialEq)]
pub struct SweepRow {
    pub delta: f64,
    /// The solution, or the reason the system has none.
    pub outcome: std::result::Result<ConstantSolution, String>,
}

/// Solves the constant system for each density target, in input order.
/// Infeasible targets are recorded and do not stop the sweep.
pub fn tradeoff_sweep(m: &MomentBounds, deltas: &[f64]) -> Vec<SweepRow> {
    deltas
        .par_iter()
        .map(|&delta| SweepRow {
            delta,
            outcome: solve_constants(m, delta).map_err(|e| e.to_string()),
        })
        .collect()
}

/// Thresholds defining the large-eigenvalue sets in the audit: `a_p^4 >= t4`
/// and `a_p^3 >= t3` on the positive side.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AuditThresholds {
    pub fourth_power: f64,
    pub cube: f64,
}

impl AuditThresholds {
    /// `(M4 − d) β` and `g(d) α` at the solution, i.e. `c^4` and `c^3`.
    pub fn from_solution(sol: &ConstantSolution, m: &MomentBounds) -> Self {
        Self {
            fourth_power: (m.m4 - sol.d) * sol.beta,
            cube: m.g(sol.d) * sol.alpha,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum AuditKind {
    Inequality,
    Identity,
}

#[derive(Debug, Clone, PartialEq)]
pub struct AuditEntry {
    pub s: f64,
    pub name: &'static str,
    pub kind: AuditKind,
    pub lhs: f64,
    pub rhs: f64,
    /// `rhs − lhs` for inequalities, `−|rhs − lhs|` for identities.
    pub margin: f64,
    /// `margin / ln(1/(s-1))`.
    pub normalized_margin: f64,
    pub pass: bool,
}

#[derive(Debug, Clone, PartialEq)]
pub struct AuditReport {
    pub thresholds: AuditThresholds,
    pub entries: Vec<AuditEntry>,
}

impl AuditReport {
    pub fn pass(&self) -> bool {
        self.entries.iter().all(|e| e.pass)
    }

    pub fn min_margin(&self) -> f64 {
        self.entries
            .iter()
            .filter(|e| e.kind == AuditKind::Inequality)
            .map(|e| e.margin)
            .fold(f64::INFINITY, f64::min)
    }
}

/// Audit with thresholds from the default constants at `δ = 1/100`.
pub fn inequality_audit(seq: &EigenvalueSequence, grid: &SGrid) -> Result<AuditReport> {
    let m = MomentBounds::default();
    let sol = solve_constants(&m, 0.01)?;
    inequality_audit_with(seq, grid, AuditThresholds::from_solution(&sol, &m))
}

/// Evaluates, at every grid point, the Cauchy–Schwarz and Hölder instances
/// of the density argument as finite-sum inequalities, plus the splitting
/// identity `Σ_A |a|^3 − Σ a^3 = Σ_B |a|^3`. Finite sums satisfy all of them
/// unconditionally, so a failure indicates a summation defect.
pub fn inequality_audit_with(
    seq: &EigenvalueSequence,
    grid: &SGrid,
    thresholds: AuditThresholds,
) -> Result<AuditReport> {
    if seq.is_empty() {
        return Err(Error::InvalidSequence("audit needs a nonempty sequence".into()));
    }
    let positive = ThresholdSet::Positive;
    let nonpositive = ThresholdSet::NonPositive;
    let all = ThresholdSet::All;
    let large4 = ThresholdSet::FourthPowerAtLeast(thresholds.fourth_power);
    let large3 = ThresholdSet::CubeAtLeast(thresholds.cube);

    let mut entries = Vec::new();
    for &s in grid.points() {
        let sum = |set: &ThresholdSet, k: u32| subset_power_sum(seq, set, k, false, s);
        let pole = log_pole(s);
        let mut push = |name: &'static str, kind: AuditKind, lhs: f64, rhs: f64| {
            let (margin, pass) = match kind {
                AuditKind::Inequality => (rhs - lhs, rhs - lhs >= -AUDIT_TOLERANCE),
                AuditKind::Identity => {
                    let diff = (rhs - lhs).abs();
                    let scale = lhs.abs().max(rhs.abs()).max(1.0);
                    (-diff, diff <= IDENTITY_REL_TOLERANCE * scale)
                }
            };
            entries.push(AuditEntry {
                s,
                name,
                kind,
                lhs,
                rhs,
                margin,
                normalized_margin: margin / pole,
                pass,
            });
        };

        for (name, set) in [
            ("cauchy_schwarz_4_8_0[S_beta]", &large4),
            ("cauchy_schwarz_4_8_0[all]", &all),
        ] {
            let (s4, s8, s0) = (sum(set, 4)?, sum(set, 8)?, sum(set, 0)?);
            push(name, AuditKind::Inequality, s4 * s4, s8 * s0);
        }
        {
            let (s3, s6, s0) = (sum(&large3, 3)?, sum(&large3, 6)?, sum(&large3, 0)?);
            push("cauchy_schwarz_3_6_0[T_alpha]", AuditKind::Inequality, s3 * s3, s6 * s0);
        }

        let (a0, a3, a4, a8) = (
            sum(&positive, 0)?,
            sum(&positive, 3)?,
            sum(&positive, 4)?,
            sum(&positive, 8)?,
        );
        push(
            "holder_3/4_1/4[A]",
            AuditKind::Inequality,
            a3,
            a4.powf(0.75) * a0.powf(0.25),
        );
        push(
            "holder_1/5_4/5[A]",
            AuditKind::Inequality,
            a4,
            a8.powf(0.2) * a3.powf(0.8),
        );

        let (b3, b4, b8) = (sum(&nonpositive, 3)?, sum(&nonpositive, 4)?, sum(&nonpositive, 8)?);
        push(
            "holder_1/5_4/5[B]",
            AuditKind::Inequality,
            b4,
            b8.powf(0.2) * b3.powf(0.8),
        );

        let signed3 = subset_power_sum(seq, &all, 3, true, s)?;
        push("split_cubic[A,B]", AuditKind::Identity, a3 - signed3, b3);
    }
    Ok(AuditReport { thresholds, entries })
}
