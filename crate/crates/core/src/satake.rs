//! Satake-parameter algebra at a single unramified prime.
//!
//! A self-dual form with Hecke eigenvalue `a` at `p` has local parameters
//! `alpha`, `beta`, the roots of `x^2 - a x + omega`. Every L-function used in
//! the density argument (tensor powers, symmetric powers, twists by the
//! central character and Rankin–Selberg pairings of these) has a local factor
//! `prod (1 - lambda p^-s)^-1` over an explicit eigenvalue multiset built from
//! `alpha` and `beta`. This module builds those multisets and checks the
//! Clebsch–Gordan identities relating them.

use std::cmp::Ordering;
use std::fmt;

use num_complex::Complex64;

use crate::error::{Error, Result};

/// Absolute tolerance used by [`SatakeParams::is_tempered`] and the
/// `alpha * beta = omega` invariant.
pub const UNIT_TOLERANCE: f64 = 1e-12;

/// Local parameters `(alpha, beta)` with central character value `omega`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SatakeParams {
    alpha: Complex64,
    beta: Complex64,
    omega: Complex64,
}

impl SatakeParams {
    /// Parameters given directly; `omega` is taken to be `alpha * beta`.
    pub fn new(alpha: Complex64, beta: Complex64) -> Result<Self> {
        let omega = alpha * beta;
        if omega == Complex64::new(0.0, 0.0) {
            return Err(Error::DegenerateLocalFactor);
        }
        Ok(Self { alpha, beta, omega })
    }

    /// Tempered parameters `e^{i theta}, e^{-i theta}` with trivial central
    /// character, i.e. Hecke eigenvalue `2 cos theta`.
    pub fn from_angle(theta: f64) -> Self {
        let alpha = Complex64::from_polar(1.0, theta);
        Self {
            alpha,
            beta: alpha.conj(),
            omega: Complex64::new(1.0, 0.0),
        }
    }

    /// Roots of `x^2 - a x + omega`.
    ///
    /// The root with nonnegative imaginary part comes first; when both are
    /// real the larger one comes first. The smaller-magnitude root is
    /// recovered as `omega / alpha` to avoid cancellation.
    pub fn from_eigenvalue(a: f64, omega: Complex64) -> Result<Self> {
        if omega.norm() == 0.0 || !omega.is_finite() {
            return Err(Error::DegenerateLocalFactor);
        }
        if !a.is_finite() {
            return Err(Error::out_of_range("a", a, "finite reals"));
        }
        let a_c = Complex64::new(a, 0.0);
        let root_disc = (a_c * a_c - 4.0 * omega).sqrt();
        let plus = (a_c + root_disc) * 0.5;
        let minus = (a_c - root_disc) * 0.5;
        let (big, _) = if plus.norm() >= minus.norm() {
            (plus, minus)
        } else {
            (minus, plus)
        };
        let (r1, r2) = if big.norm() == 0.0 {
            (big, big)
        } else {
            (big, omega / big)
        };
        let (alpha, beta) = if root_order(&r1, &r2) == Ordering::Greater {
            (r2, r1)
        } else {
            (r1, r2)
        };
        Ok(Self { alpha, beta, omega })
    }

    pub fn alpha(&self) -> Complex64 {
        self.alpha
    }

    pub fn beta(&self) -> Complex64 {
        self.beta
    }

    pub fn omega(&self) -> Complex64 {
        self.omega
    }

    /// Hecke eigenvalue `alpha + beta`.
    pub fn trace(&self) -> Complex64 {
        self.alpha + self.beta
    }

    /// `|alpha| = |beta| = 1` within [`UNIT_TOLERANCE`].
    pub fn is_tempered(&self) -> bool {
        (self.alpha.norm() - 1.0).abs() <= UNIT_TOLERANCE
            && (self.beta.norm() - 1.0).abs() <= UNIT_TOLERANCE
    }
}

// Nonnegative imaginary part first, then larger real part.
fn root_order(x: &Complex64, y: &Complex64) -> Ordering {
    let x_upper = x.im >= 0.0;
    let y_upper = y.im >= 0.0;
    match (x_upper, y_upper) {
        (true, false) => Ordering::Less,
        (false, true) => Ordering::Greater,
        _ => y
            .re
            .total_cmp(&x.re)
            .then_with(|| y.im.total_cmp(&x.im)),
    }
}

/// An irreducible-or-paired piece of a tensor power: `Sym^m ⊗ omega^twist`,
/// or the Rankin–Selberg pairing of two such pieces.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum Piece {
    Sym { m: u32, twist: u32 },
    Pair(Box<Piece>, Box<Piece>),
}

/// Largest symmetric power and twist exponent appearing in any supported
/// decomposition.
const MAX_SYM: u32 = 4;
const MAX_TWIST: u32 = 4;

impl Piece {
    pub fn sym(m: u32) -> Self {
        Piece::Sym { m, twist: 0 }
    }

    pub fn twisted(m: u32, twist: u32) -> Self {
        Piece::Sym { m, twist }
    }

    /// The one-dimensional piece `omega^j`.
    pub fn character(j: u32) -> Self {
        Piece::Sym { m: 0, twist: j }
    }

    pub fn pair(left: Piece, right: Piece) -> Self {
        Piece::Pair(Box::new(left), Box::new(right))
    }

    pub fn dim(&self) -> usize {
        match self {
            Piece::Sym { m, .. } => *m as usize + 1,
            Piece::Pair(l, r) => l.dim() * r.dim(),
        }
    }

    /// Degree in `(alpha, beta)` of every eigenvalue of this piece.
    pub fn degree(&self) -> u32 {
        match self {
            Piece::Sym { m, twist } => m + 2 * twist,
            Piece::Pair(l, r) => l.degree() + r.degree(),
        }
    }

    fn validate(&self) -> Result<()> {
        match self {
            Piece::Sym { m, twist } if *m <= MAX_SYM && *twist <= MAX_TWIST => Ok(()),
            Piece::Sym { .. } => Err(Error::UnsupportedLabel(self.to_string())),
            Piece::Pair(l, r) => match (l.as_ref(), r.as_ref()) {
                (Piece::Sym { .. }, Piece::Sym { .. }) => {
                    l.validate()?;
                    r.validate()
                }
                _ => Err(Error::UnsupportedLabel(self.to_string())),
            },
        }
    }
}

impl fmt::Display for Piece {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Piece::Sym { m: 0, twist: 0 } => write!(f, "1"),
            Piece::Sym { m: 0, twist } => write!(f, "ω^{twist}"),
            Piece::Sym { m, twist } => {
                match m {
                    1 => write!(f, "π")?,
                    _ => write!(f, "Sym^{m}")?,
                }
                match twist {
                    0 => Ok(()),
                    1 => write!(f, "⊗ω"),
                    t => write!(f, "⊗ω^{t}"),
                }
            }
            Piece::Pair(l, r) => write!(f, "{l}×{r}"),
        }
    }
}

/// What an [`EigenvalueMultiset`] is the eigenvalue set of.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum MultisetLabel {
    TensorPower(u32),
    Piece(Piece),
    /// Multiplicity-weighted union of the pieces of a decomposition of the
    /// `k`-th tensor power.
    Decomposition(u32),
}

impl MultisetLabel {
    pub fn dim(&self) -> usize {
        match self {
            MultisetLabel::TensorPower(k) | MultisetLabel::Decomposition(k) => 1 << k,
            MultisetLabel::Piece(p) => p.dim(),
        }
    }
}

/// Eigenvalues of a local matrix, with multiplicity.
#[derive(Debug, Clone, PartialEq)]
pub struct EigenvalueMultiset {
    values: Vec<Complex64>,
    label: MultisetLabel,
}

impl EigenvalueMultiset {
    fn new(values: Vec<Complex64>, label: MultisetLabel) -> Self {
        debug_assert_eq!(values.len(), label.dim());
        Self { values, label }
    }

    /// An arbitrary multiset, labelled as the given piece. Fails if the
    /// cardinality does not match the piece dimension.
    pub fn from_values(values: Vec<Complex64>, piece: Piece) -> Result<Self> {
        if values.len() != piece.dim() {
            return Err(Error::UnsupportedLabel(format!(
                "{piece} has dimension {} but {} values were given",
                piece.dim(),
                values.len()
            )));
        }
        Ok(Self::new(values, MultisetLabel::Piece(piece)))
    }

    pub fn values(&self) -> &[Complex64] {
        &self.values
    }

    pub fn label(&self) -> &MultisetLabel {
        &self.label
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn trace(&self) -> Complex64 {
        // Complex compensated sum, component-wise.
        let re = crate::summation::compensated_sum(self.values.iter().map(|v| v.re));
        let im = crate::summation::compensated_sum(self.values.iter().map(|v| v.im));
        Complex64::new(re, im)
    }

    /// Values sorted by real part, then imaginary part.
    pub fn sorted_values(&self) -> Vec<Complex64> {
        let mut v = self.values.clone();
        v.sort_by(canonical_order);
        v
    }
}

fn canonical_order(x: &Complex64, y: &Complex64) -> Ordering {
    x.re.total_cmp(&y.re).then_with(|| x.im.total_cmp(&y.im))
}

fn binomial(n: u32, k: u32) -> usize {
    (0..k).fold(1usize, |acc, i| acc * (n - i) as usize / (i + 1) as usize)
}

/// Eigenvalues of `A_p^{⊗k}`: `alpha^i beta^(k-i)` with multiplicity `C(k, i)`.
pub fn tensor_power_eigenvalues(sp: &SatakeParams, k: u32) -> Result<EigenvalueMultiset> {
    if !(1..=8).contains(&k) {
        return Err(Error::TensorPowerOutOfRange(k));
    }
    let mut values = Vec::with_capacity(1 << k);
    for i in 0..=k {
        let v = sp.alpha.powu(i) * sp.beta.powu(k - i);
        values.extend(std::iter::repeat_n(v, binomial(k, i)));
    }
    Ok(EigenvalueMultiset::new(values, MultisetLabel::TensorPower(k)))
}

/// Eigenvalues of one decomposition piece.
pub fn component_eigenvalues(sp: &SatakeParams, piece: &Piece) -> Result<EigenvalueMultiset> {
    piece.validate()?;
    Ok(EigenvalueMultiset::new(
        piece_values(sp, piece),
        MultisetLabel::Piece(piece.clone()),
    ))
}

fn piece_values(sp: &SatakeParams, piece: &Piece) -> Vec<Complex64> {
    match piece {
        Piece::Sym { m, twist } => {
            let scale = sp.omega.powu(*twist);
            (0..=*m)
                .map(|i| sp.alpha.powu(m - i) * sp.beta.powu(i) * scale)
                .collect()
        }
        Piece::Pair(l, r) => {
            let left = piece_values(sp, l);
            let right = piece_values(sp, r);
            left.iter()
                .flat_map(|x| right.iter().map(move |y| x * y))
                .collect()
        }
    }
}

/// Clebsch–Gordan factorisation of `L(s, π^{×k})` into pieces with
/// multiplicities.
#[derive(Debug, Clone, PartialEq)]
pub struct CgDecomposition {
    pub k: u32,
    pub parts: Vec<(Piece, u32)>,
}

impl CgDecomposition {
    /// `Σ multiplicity · dim`, which must equal `2^k`.
    pub fn total_dim(&self) -> usize {
        self.parts
            .iter()
            .map(|(p, mult)| p.dim() * *mult as usize)
            .sum()
    }
}

/// The decompositions for `k ∈ {3, 4, 6, 8}`.
pub fn cg_decomposition(k: u32) -> Result<CgDecomposition> {
    use Piece as P;
    let parts = match k {
        3 => vec![(P::sym(3), 1), (P::twisted(1, 1), 2)],
        4 => vec![(P::sym(4), 1), (P::twisted(2, 1), 3), (P::character(2), 2)],
        6 => vec![
            (P::pair(P::sym(3), P::sym(3)), 1),
            (P::pair(P::sym(3), P::twisted(1, 1)), 4),
            (P::pair(P::sym(1), P::twisted(1, 2)), 4),
        ],
        8 => vec![
            (P::pair(P::sym(4), P::sym(4)), 1),
            (P::pair(P::sym(4), P::twisted(2, 1)), 6),
            (P::pair(P::twisted(2, 1), P::twisted(2, 1)), 9),
            (P::twisted(4, 2), 4),
            (P::twisted(2, 3), 12),
            (P::character(4), 4),
        ],
        _ => return Err(Error::UnsupportedDecomposition(k)),
    };
    Ok(CgDecomposition { k, parts })
}

/// Multiplicity-weighted union of the pieces of `cg_decomposition(k)`.
pub fn decomposition_eigenvalues(sp: &SatakeParams, k: u32) -> Result<EigenvalueMultiset> {
    let decomposition = cg_decomposition(k)?;
    let mut values = Vec::with_capacity(1 << k);
    for (piece, mult) in &decomposition.parts {
        let part = piece_values(sp, piece);
        for _ in 0..*mult {
            values.extend_from_slice(&part);
        }
    }
    Ok(EigenvalueMultiset::new(values, MultisetLabel::Decomposition(k)))
}

/// Largest absolute difference between the eigenvalues of `A_p^{⊗k}` and of
/// its decomposition, matched after canonical sorting. Zero up to rounding
/// certifies the identity at this place.
pub fn verify_cg_identity(sp: &SatakeParams, k: u32) -> Result<f64> {
    let lhs = tensor_power_eigenvalues(sp, k)?;
    let rhs = decomposition_eigenvalues(sp, k)?;
    Ok(multiset_discrepancy(lhs.values(), rhs.values()))
}

/// Real parts closer than this are treated as tied when matching.
const TIE_WINDOW: f64 = 1e-9;

/// Maximum distance between matched elements of two equal-size multisets.
///
/// Both sides are sorted by `(re, im)`. Because conjugate values share their
/// real part exactly, rounding can swap their order between the two sides,
/// so each left value is matched to the nearest unused right value among
/// those whose real part lies within a small window of its own.
pub fn multiset_discrepancy(lhs: &[Complex64], rhs: &[Complex64]) -> f64 {
    if lhs.len() != rhs.len() {
        return f64::INFINITY;
    }
    let mut left = lhs.to_vec();
    let mut right = rhs.to_vec();
    left.sort_by(canonical_order);
    right.sort_by(canonical_order);
    let mut used = vec![false; right.len()];
    let mut worst = 0.0f64;
    let mut start = 0;
    for (i, x) in left.iter().enumerate() {
        while start < right.len() && (used[start] || right[start].re < x.re - TIE_WINDOW) {
            start += 1;
        }
        let mut best: Option<(usize, f64)> = None;
        for j in start..right.len() {
            if right[j].re > x.re + TIE_WINDOW {
                break;
            }
            if used[j] {
                continue;
            }
            let dist = (right[j] - x).norm_sqr();
            if best.is_none_or(|(_, d)| dist < d) {
                best = Some((j, dist));
                if dist == 0.0 {
                    break;
                }
            }
        }
        let best = best.map(|(j, _)| j);
        // Nothing in the window: fall back to the positional partner.
        let j = best.unwrap_or(i.min(right.len() - 1));
        used[j] = true;
        worst = worst.max((right[j] - x).norm());
    }
    worst
}

/// Worst-case identity errors for one `k` over a batch of random draws.
#[derive(Debug, Clone, PartialEq)]
pub struct IdentitySummary {
    pub k: u32,
    pub dimension: usize,
    pub draws: usize,
    pub max_discrepancy: f64,
    pub max_trace_residual: f64,
}

/// Checks the identities for `k ∈ {3, 4, 6, 8}` on `samples` random draws.
///
/// Each draw contributes two parameter sets: the self-dual pair
/// `(e^{iθ}, e^{-iθ})` and an independent unitary pair `(e^{iθ}, e^{iφ})`
/// with nontrivial central character.
pub fn identity_survey(samples: usize, seed: u64) -> Result<Vec<IdentitySummary>> {
    use rand::{Rng, SeedableRng};
    use rayon::prelude::*;
    use std::f64::consts::TAU;

    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
    let draws: Vec<SatakeParams> = (0..samples)
        .flat_map(|_| {
            let theta = TAU * rng.random::<f64>();
            let phi = TAU * rng.random::<f64>();
            let general = SatakeParams::new(
                Complex64::from_polar(1.0, theta),
                Complex64::from_polar(1.0, phi),
            )
            .expect("unit-circle parameters have nonzero product");
            [SatakeParams::from_angle(theta), general]
        })
        .collect();

    [3, 4, 6, 8]
        .into_iter()
        .map(|k| {
            // Maxima do not depend on reduction order.
            let (max_discrepancy, max_trace_residual) = draws
                .par_iter()
                .map(|sp| Ok((verify_cg_identity(sp, k)?, trace_moment_residual(sp, k)?)))
                .try_reduce(|| (0.0, 0.0), |a, b| Ok((a.0.max(b.0), a.1.max(b.1))))?;
            Ok(IdentitySummary {
                k,
                dimension: cg_decomposition(k)?.total_dim(),
                draws: draws.len(),
                max_discrepancy,
                max_trace_residual,
            })
        })
        .collect()
}

/// `|a^k − Σ mult · tr(piece)|`: the identity read off the `p^{-s}`
/// coefficient of the log-derivative.
pub fn trace_moment_residual(sp: &SatakeParams, k: u32) -> Result<f64> {
    let decomposition = cg_decomposition(k)?;
    let lhs = sp.trace().powu(k);
    let mut rhs = Complex64::new(0.0, 0.0);
    for (piece, mult) in &decomposition.parts {
        let tr: Complex64 = piece_values(sp, piece).iter().sum();
        rhs += tr * *mult as f64;
    }
    Ok((lhs - rhs).norm())
}

/// Smallest `|1 - lambda p^-s|` treated as a genuine pole.
const POLE_TOLERANCE: f64 = 1e-14;

/// Local Euler factor `∏ (1 − λ p^{-s})^{-1}` over the multiset.
///
/// Accepts any finite `s > 0`; the Euler product only converges for `s > 1`
/// but the single local factor is defined wherever it has no pole.
pub fn local_factor(ev: &EigenvalueMultiset, p: u64, s: f64) -> Result<Complex64> {
    if p < 2 {
        return Err(Error::out_of_range("p", p, "primes >= 2"));
    }
    if !(s.is_finite() && s > 0.0) {
        return Err(Error::out_of_range("s", s, "finite s > 0"));
    }
    let x = (p as f64).powf(-s);
    let mut product = Complex64::new(1.0, 0.0);
    for &lambda in &ev.values {
        let factor = Complex64::new(1.0, 0.0) - lambda * x;
        if factor.norm() < POLE_TOLERANCE {
            return Err(Error::LocalFactorPole {
                lambda: lambda.to_string(),
                p,
                s,
            });
        }
        product *= factor;
    }
    Ok(product.inv())
}
