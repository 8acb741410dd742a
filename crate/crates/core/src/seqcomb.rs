//! Admissible-sequence combinatorics.
//!
//! Sequences `I = (i₁,…,i_s)` of integers index both Steenrod monomials
//! `Sq^{i₁}…Sq^{i_s}` (upper Steenrod indexing) and Dyer-Lashof words
//! `Q^{α₁}…Q^{α_s}` (upper DL) or `Q_{j₁}…Q_{j_s}` (lower DL). This module
//! owns the combinatorics shared by both calculi:
//!
//! * [`Seq::stats`] — length, degree `d(I) = Σ i_j`, excess
//!   `e(I) = Σ_j (i_j − 2i_{j+1})` (last term `i_s`), admissibility
//!   `i_j ≥ 2 i_{j+1}`; the excess of the empty sequence is the sentinel
//!   [`Excess::Infinite`].
//! * [`Seq::omega`] — the truncation `ω_j I` dropping the first `j` entries.
//! * [`enumerate_admissible`] — admissible sequences of a given degree under
//!   a constraint, in a fixed deterministic order.
//! * [`gamma_split`] — for admissible `I` and an integer `d`, the unique
//!   splitting index `j` with `e(ω_j I) ≤ d+j` (when `j < s`) and
//!   `i_j ≥ d + d(ω_j I) + j` (when `j > 0`).
//! * [`lower_to_upper`], [`reindex`], [`reindex_inverse`] — conversion of
//!   lower DL words `Q_J ι_d` to upper words, and the degree-shifted
//!   correspondence `J ↦ α(J,d)+1` whose restriction to strictly decreasing
//!   `J` is a bijection onto admissible `I` with `i_s > d`.
//!
//! # Determinism
//!
//! Enumerations are emitted in lexicographically descending entry order,
//! which is stable across runs.

use std::fmt;

use thiserror::Error;

// ==================== Seq ====================

/// Interpretation tag for a sequence; advisory metadata, not part of identity.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Default)]
pub enum SeqKind {
    /// Upper Steenrod indexing: `Sq^{i₁}…Sq^{i_s}`.
    #[default]
    UpperSteenrod,
    /// Upper Dyer-Lashof indexing: `Q^{α₁}…Q^{α_s}`.
    UpperDl,
    /// Lower Dyer-Lashof indexing: `Q_{j₁}…Q_{j_s}`.
    LowerDl,
}

/// An ordered integer sequence, possibly empty.
#[derive(Clone, Default)]
pub struct Seq {
    entries: Vec<i64>,
    kind: SeqKind,
}

impl PartialEq for Seq {
    fn eq(&self, other: &Self) -> bool {
        self.entries == other.entries
    }
}
impl Eq for Seq {}

impl PartialOrd for Seq {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}
impl Ord for Seq {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        self.entries.cmp(&other.entries)
    }
}
impl std::hash::Hash for Seq {
    fn hash<H: std::hash::Hasher>(&self, state: &mut H) {
        self.entries.hash(state);
    }
}

impl fmt::Debug for Seq {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Seq{:?}", self.entries)
    }
}

impl Seq {
    /// The empty sequence.
    #[must_use]
    pub fn empty() -> Self {
        Self::default()
    }

    /// Builds a sequence with the given interpretation.
    #[must_use]
    pub fn new(entries: Vec<i64>, kind: SeqKind) -> Self {
        Self { entries, kind }
    }

    /// Upper-Steenrod sequence.
    #[must_use]
    pub fn upper(entries: Vec<i64>) -> Self {
        Self::new(entries, SeqKind::UpperSteenrod)
    }

    /// Upper Dyer-Lashof sequence.
    #[must_use]
    pub fn upper_dl(entries: Vec<i64>) -> Self {
        Self::new(entries, SeqKind::UpperDl)
    }

    /// Lower Dyer-Lashof sequence.
    #[must_use]
    pub fn lower_dl(entries: Vec<i64>) -> Self {
        Self::new(entries, SeqKind::LowerDl)
    }

    /// The entries.
    #[must_use]
    pub fn entries(&self) -> &[i64] {
        &self.entries
    }

    /// The interpretation tag.
    #[must_use]
    pub fn kind(&self) -> SeqKind {
        self.kind
    }

    /// Number of entries.
    #[must_use]
    pub fn len(&self) -> usize {
        self.entries.len()
    }

    /// Whether the sequence is empty.
    #[must_use]
    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    /// Sum of entries, `d(I)`.
    #[must_use]
    pub fn degree(&self) -> i64 {
        self.entries.iter().sum()
    }

    /// `i_j ≥ 2 i_{j+1}` for all adjacent pairs (vacuous for length ≤ 1).
    #[must_use]
    pub fn is_admissible(&self) -> bool {
        self.entries.windows(2).all(|w| w[0] >= 2 * w[1])
    }

    /// Excess `e(I) = Σ_j (i_j − 2 i_{j+1})` with last term `i_s`;
    /// [`Excess::Infinite`] for the empty sequence.
    #[must_use]
    pub fn excess(&self) -> Excess {
        if self.entries.is_empty() {
            return Excess::Infinite;
        }
        let mut e = 0;
        for w in self.entries.windows(2) {
            e += w[0] - 2 * w[1];
        }
        e += self.entries[self.entries.len() - 1];
        if self.is_admissible() {
            // Equivalent closed form for admissible sequences.
            let alt = self.entries[0] - self.entries[1..].iter().sum::<i64>();
            debug_assert_eq!(e, alt, "excess formulas disagree on an admissible sequence");
        }
        Excess::Finite(e)
    }

    /// Full statistics in one pass.
    #[must_use]
    pub fn stats(&self) -> Stats {
        Stats {
            length: self.len(),
            degree: self.degree(),
            excess: self.excess(),
            admissible: self.is_admissible(),
        }
    }

    /// The truncation `ω_j I`: drop the first `j` entries.
    ///
    /// # Panics
    ///
    /// Panics if `j > self.len()`.
    #[must_use]
    pub fn omega(&self, j: usize) -> Seq {
        assert!(j <= self.len(), "omega index {j} exceeds length {}", self.len());
        Seq::new(self.entries[j..].to_vec(), self.kind)
    }

    /// Concatenation, keeping `self`'s interpretation.
    #[must_use]
    pub fn concat(&self, other: &Seq) -> Seq {
        let mut entries = self.entries.clone();
        entries.extend_from_slice(&other.entries);
        Seq::new(entries, self.kind)
    }

    /// Whether all entries are ≥ 1.
    #[must_use]
    pub fn strictly_positive(&self) -> bool {
        self.entries.iter().all(|&i| i >= 1)
    }
}

/// Excess with the `+∞` convention for the empty sequence.
///
/// Ordering: every finite value is smaller than [`Excess::Infinite`].
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub enum Excess {
    /// Finite excess of a nonempty sequence.
    Finite(i64),
    /// The sentinel assigned to the empty sequence.
    Infinite,
}

impl Excess {
    /// `self ≤ bound` treating `Infinite` as larger than every integer.
    #[must_use]
    pub fn le(self, bound: i64) -> bool {
        match self {
            Excess::Finite(e) => e <= bound,
            Excess::Infinite => false,
        }
    }

    /// `self ≥ bound`; `Infinite` exceeds every integer.
    #[must_use]
    pub fn ge(self, bound: i64) -> bool {
        match self {
            Excess::Finite(e) => e >= bound,
            Excess::Infinite => true,
        }
    }
}

/// Result of [`Seq::stats`].
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Stats {
    /// Number of entries.
    pub length: usize,
    /// `d(I) = Σ i_j`.
    pub degree: i64,
    /// `e(I)`, with the `+∞` sentinel for `∅`.
    pub excess: Excess,
    /// `i_j ≥ 2 i_{j+1}` throughout.
    pub admissible: bool,
}

// ==================== enumeration ====================

/// Constraint for [`enumerate_admissible`].
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Constraint {
    /// Last entry at least the given integer (entries may be ≤ 0).
    MinLast(i64),
    /// Excess at most the given integer (applies to nonempty sequences).
    ExcessAtMost(i64),
    /// All entries ≥ 1.
    StrictlyPositive,
}

/// Enumerates admissible sequences of total degree `degree` meeting
/// `constraint`; `length` fixes the number of entries (`None` ranges over all
/// lengths, which is finite for [`Constraint::StrictlyPositive`]).
///
/// Output is sorted lexicographically descending. The empty sequence is
/// produced exactly when the degree is 0, the length is 0 or unconstrained,
/// and the constraint is length-insensitive ([`Constraint::StrictlyPositive`]
/// admits `∅` vacuously; the other constraints are only meaningful at fixed
/// positive length and exclude it unless `length == Some(0)` and degree 0).
///
/// # Panics
///
/// Panics if `length` is `None` with a constraint other than
/// [`Constraint::StrictlyPositive`] (the search space would be infinite).
#[must_use]
pub fn enumerate_admissible(length: Option<usize>, degree: i64, constraint: Constraint) -> Vec<Seq> {
    let mut out = Vec::new();
    match (length, constraint) {
        (Some(s), _) => enumerate_fixed_length(s, degree, constraint, &mut out),
        (None, Constraint::StrictlyPositive) => {
            // Strictly positive admissible length-s sequences have degree
            // ≥ 2^s − 1, so lengths are bounded.
            let mut s = 0;
            while (1i64 << s) - 1 <= degree {
                enumerate_fixed_length(s, degree, constraint, &mut out);
                s += 1;
            }
        }
        (None, c) => panic!("unbounded length with constraint {c:?}"),
    }
    out.sort_by(|a, b| b.entries.cmp(&a.entries));
    out
}

fn enumerate_fixed_length(s: usize, degree: i64, constraint: Constraint, out: &mut Vec<Seq>) {
    assert!(s <= 40, "sequence length {s} out of supported range");
    if s == 0 {
        if degree == 0 {
            out.push(Seq::empty());
        }
        return;
    }
    let mut prefix = Vec::with_capacity(s);
    descend(&mut prefix, s, degree, constraint, out);
}

/// Lower bound for the entry at 0-based position `pos` under the last-entry
/// bound `last_min`, propagated through `i_j ≥ 2 i_{j+1}`:
/// `i_pos ≥ 2^{s−1−pos} · last_min` (monotone for either sign).
fn entry_lower_bound(pos: usize, s: usize, last_min: i64) -> i64 {
    last_min.saturating_mul(1i64 << (s - 1 - pos) as u32)
}

/// Extends the admissible `prefix` to full admissible sequences whose entries
/// from position `prefix.len()` on sum to `remaining`. The window for each
/// entry is exact enough that only admissibility-consistent candidates are
/// visited; the constraint predicate is re-checked exactly at the leaf.
fn descend(prefix: &mut Vec<i64>, s: usize, remaining: i64, constraint: Constraint, out: &mut Vec<Seq>) {
    let pos = prefix.len();
    if pos == s {
        if remaining == 0 {
            let seq = Seq::upper(prefix.clone());
            let keep = match constraint {
                Constraint::MinLast(b) => seq.entries[s - 1] >= b,
                Constraint::ExcessAtMost(e) => seq.excess().le(e),
                Constraint::StrictlyPositive => seq.strictly_positive(),
            };
            if keep {
                out.push(seq);
            }
        }
        return;
    }
    let cap_prev = if pos == 0 { i64::MAX } else { prefix[pos - 1].div_euclid(2) };
    // Feasibility floor: the block from `pos` has k entries, each
    // ≤ v / 2^j, so remaining ≤ v (2 − 2^{1−k}) and v ≥ remaining / 2 − 1
    // (remaining ≥ 0) resp. v ≥ remaining (remaining < 0), uniformly
    // v ≥ min(remaining/2, remaining) − 1.
    let feas_lo = remaining.div_euclid(2).min(remaining) - 1;
    let (lo, hi) = match constraint {
        Constraint::ExcessAtMost(e) => {
            // e(I) = 2 i₁ − d(I) for admissible I, so the excess cap binds
            // exactly the first entry: 2 i₁ ≤ degree + e. Deeper entries are
            // only constrained by admissibility and the exact-degree leaf.
            let hi = if pos == 0 {
                (remaining + e).div_euclid(2)
            } else {
                cap_prev
            };
            (feas_lo, hi)
        }
        Constraint::MinLast(_) | Constraint::StrictlyPositive => {
            let last_min = if let Constraint::MinLast(b) = constraint { b } else { 1 };
            // Tail entries each obey their own propagated lower bound, so
            // v ≤ remaining − Σ tail bounds.
            let tail_min: i64 = ((pos + 1)..s).map(|p| entry_lower_bound(p, s, last_min)).sum();
            let lo = entry_lower_bound(pos, s, last_min).max(feas_lo);
            let hi = cap_prev.min(remaining - tail_min);
            (lo, hi)
        }
    };
    // Descending order so output is lexicographically descending.
    let mut v = hi;
    while v >= lo {
        prefix.push(v);
        descend(prefix, s, remaining - v, constraint, out);
        prefix.pop();
        v -= 1;
    }
}

// ==================== γ-splitting ====================

/// Errors from this module's fallible operations.
#[derive(Debug, Error, PartialEq, Eq)]
pub enum SeqError {
    /// Input sequence was required to be admissible.
    #[error("sequence {0:?} is not admissible")]
    NotAdmissible(Vec<i64>),
    /// The γ-conditions did not single out one index (indicates a bug).
    #[error("gamma split of {seq:?} at d={d} matched indices {matches:?}")]
    GammaNotUnique {
        /// Offending sequence entries.
        seq: Vec<i64>,
        /// Splitting parameter.
        d: i64,
        /// All indices satisfying both conditions.
        matches: Vec<usize>,
    },
    /// A sequence lay outside the image of the reindexing map.
    #[error("sequence {0:?} is not reindexed from a lower word at d={1}")]
    NotInReindexImage(Vec<i64>, i64),
}

/// Result of [`gamma_split`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GammaSplit {
    /// The unique splitting index in `0..=s`.
    pub j: usize,
    /// `I′ = (i₁,…,i_j)`.
    pub prefix: Seq,
    /// `I″ = ω_j I`.
    pub suffix: Seq,
}

/// Splits an admissible sequence at the unique index `j ∈ {0,…,s}` with
/// `e(ω_j I) ≤ d + j` when `j < s` and `i_j ≥ d + d(ω_j I) + j` when `j > 0`
/// (the second condition is equivalent to `e(ω_{j−1} I) ≥ d + j`).
///
/// Every index is checked; exactly one match is required.
///
/// # Errors
///
/// [`SeqError::NotAdmissible`] on non-admissible input;
/// [`SeqError::GammaNotUnique`] if the uniqueness guarantee fails (would
/// indicate a bug, not bad input).
pub fn gamma_split(seq: &Seq, d: i64) -> Result<GammaSplit, SeqError> {
    if !seq.is_admissible() {
        return Err(SeqError::NotAdmissible(seq.entries.clone()));
    }
    let s = seq.len();
    let mut matches = Vec::new();
    for j in 0..=s {
        let tail = seq.omega(j);
        let cond_tail = j == s || tail.excess().le(d + j as i64);
        let cond_head = j == 0 || seq.entries[j - 1] >= d + tail.degree() + j as i64;
        if cond_tail && cond_head {
            matches.push(j);
        }
    }
    if matches.len() != 1 {
        return Err(SeqError::GammaNotUnique { seq: seq.entries.clone(), d, matches });
    }
    let j = matches[0];
    Ok(GammaSplit {
        j,
        prefix: Seq::new(seq.entries[..j].to_vec(), seq.kind),
        suffix: seq.omega(j),
    })
}

// ==================== lower ↔ upper reindexing ====================

/// Converts a lower Dyer-Lashof word `Q_{j₁}…Q_{j_s} ι_d` to upper indexing:
/// `Q^{α₁}…Q^{α_s} ι_d` with `α_t = j_t + Σ_{l>t} 2^{l−(t+1)} j_l + 2^{s−t} d`.
///
/// Computed by iterating `Q_a x = Q^{|x|+a} x` from the innermost factor; the
/// closed form is asserted against the iteration.
#[must_use]
pub fn lower_to_upper(j_seq: &Seq, d: i64) -> Seq {
    let s = j_seq.len();
    let mut alphas = vec![0i64; s];
    let mut deg = d;
    for t in (0..s).rev() {
        let j = j_seq.entries[t];
        alphas[t] = j + deg;
        deg = 2 * deg + j;
    }
    #[cfg(debug_assertions)]
    for (t, &alpha) in alphas.iter().enumerate() {
        let closed: i64 = j_seq.entries[t]
            + j_seq.entries[t + 1..]
                .iter()
                .enumerate()
                .map(|(off, &jl)| jl << off)
                .sum::<i64>()
            + (d << (s - 1 - t));
        debug_assert_eq!(alpha, closed, "closed-form upper index disagrees with iteration");
    }
    Seq::upper_dl(alphas)
}

/// Degree of the lower word `Q_{j₁}…Q_{j_s} ι_d`: iterate `|Q_a x| = 2|x|+a`.
#[must_use]
pub fn lower_word_degree(j_seq: &Seq, d: i64) -> i64 {
    lower_degree(j_seq.entries(), d)
}

/// [`lower_word_degree`] on a raw entry slice.
#[must_use]
pub fn lower_degree(entries: &[i64], d: i64) -> i64 {
    entries.iter().rev().fold(d, |deg, &j| 2 * deg + j)
}

/// The correspondence `J ↦ α(J,d) + 1` (entrywise `+1` of
/// [`lower_to_upper`]). Injective on all of `ℕ^s`; its image is admissible
/// exactly when `J` is strictly decreasing, and restricted to strictly
/// decreasing `J` it is a bijection onto admissible `I` with `i_s > d`.
#[must_use]
pub fn reindex(j_seq: &Seq, d: i64) -> Seq {
    let alphas = lower_to_upper(j_seq, d);
    Seq::upper(alphas.entries.iter().map(|&a| a + 1).collect())
}

/// Inverse of [`reindex`]: recovers `J ∈ ℕ^s` from `I` when possible.
///
/// # Errors
///
/// [`SeqError::NotInReindexImage`] if a recovered entry is negative.
pub fn reindex_inverse(i_seq: &Seq, d: i64) -> Result<Seq, SeqError> {
    let s = i_seq.len();
    let mut j = vec![0i64; s];
    let mut deg = d;
    for t in (0..s).rev() {
        let alpha = i_seq.entries[t] - 1;
        let jt = alpha - deg;
        if jt < 0 {
            return Err(SeqError::NotInReindexImage(i_seq.entries.clone(), d));
        }
        j[t] = jt;
        deg = 2 * deg + jt;
    }
    let j = Seq::lower_dl(j);
    debug_assert_eq!(reindex(&j, d), *i_seq, "reindex round trip");
    Ok(j)
}

/// Whether `J` is strictly decreasing (`j_k > j_{k+1}`).
#[must_use]
pub fn strictly_decreasing(j_seq: &Seq) -> bool {
    j_seq.entries.windows(2).all(|w| w[0] > w[1])
}

/// Whether `J` is non-decreasing (`j_k ≤ j_{k+1}`), the allowable condition
/// in lower indexing.
#[must_use]
pub fn non_decreasing(j_seq: &Seq) -> bool {
    j_seq.entries.windows(2).all(|w| w[0] <= w[1])
}

/// Enumerates all `J ∈ ℕ^s` with `lower_word_degree(J, d) == degree`,
/// filtered by `pred`, in lexicographically descending order.
///
/// The degree of `Q_J ι_d` is `2^s d + Σ_k 2^{k−1} j_k`, so for fixed `s`, `d`
/// the fibers are finite.
pub fn enumerate_lower_words(
    s: usize,
    d: i64,
    degree: i64,
    pred: impl Fn(&[i64]) -> bool + Copy,
) -> Vec<Seq> {
    let target = degree - (d << s);
    let mut out = Vec::new();
    if target < 0 {
        return out;
    }
    let mut prefix = Vec::with_capacity(s);
    // Σ_k 2^{k−1} j_k = target with j_k ≥ 0; fill positions k = 1..s.
    fn rec(prefix: &mut Vec<i64>, s: usize, left: i64, pred: impl Fn(&[i64]) -> bool + Copy, out: &mut Vec<Seq>) {
        let k = prefix.len();
        if k == s {
            if left == 0 && pred(prefix) {
                out.push(Seq::lower_dl(prefix.clone()));
            }
            return;
        }
        let weight = 1i64 << k; // 2^{k−1} with k 1-based = 2^k with k 0-based
        let max_j = left / weight;
        let mut jv = max_j;
        while jv >= 0 {
            prefix.push(jv);
            rec(prefix, s, left - jv * weight, pred, out);
            prefix.pop();
            jv -= 1;
        }
    }
    rec(&mut prefix, s, target, pred, &mut out);
    out.sort_by(|a, b| b.entries.cmp(&a.entries));
    out
}

// ==================== tests ====================

#[cfg(test)]
mod tests {
    use super::*;

    fn seq(entries: &[i64]) -> Seq {
        Seq::upper(entries.to_vec())
    }

    #[test]
    fn stats_examples() {
        let empty = Seq::empty();
        assert_eq!(empty.stats().length, 0);
        assert_eq!(empty.stats().excess, Excess::Infinite);
        assert!(empty.is_admissible());

        // (4,2,1): admissible, degree 7; excess by the windowed sum:
        // (4−4) + (2−2) + 1 = 1; by the closed form: 4 − (2+1) = 1.
        let i = seq(&[4, 2, 1]);
        let st = i.stats();
        assert!(st.admissible);
        assert_eq!(st.degree, 7);
        assert_eq!(st.excess, Excess::Finite(1));

        assert!(!seq(&[1, 1]).is_admissible());
    }

    #[test]
    fn excess_sentinel_ordering() {
        assert!(Excess::Finite(i64::MAX) < Excess::Infinite);
        assert!(!Excess::Infinite.le(i64::MAX));
        assert!(Excess::Infinite.ge(i64::MIN));
    }

    #[test]
    fn omega_examples() {
        let i = seq(&[3, 1]);
        assert_eq!(i.omega(0), seq(&[3, 1]));
        assert_eq!(i.omega(1), seq(&[1]));
        assert_eq!(i.omega(2), Seq::empty());
    }

    /// Oracle: exhaustive search over sequences with entries in 1..=4 of
    /// length ≤ 3 confirms the strictly-positive admissible sets in degrees
    /// 3 and 4.
    #[test]
    fn enumerate_strictly_positive_small_degrees() {
        let deg3 = enumerate_admissible(None, 3, Constraint::StrictlyPositive);
        assert_eq!(deg3, vec![seq(&[3]), seq(&[2, 1])]);
        let deg4 = enumerate_admissible(None, 4, Constraint::StrictlyPositive);
        assert_eq!(deg4, vec![seq(&[4]), seq(&[3, 1])]);

        // Exhaustive cross-check for degrees ≤ 9.
        for n in 0..=9i64 {
            let fast: Vec<Seq> = enumerate_admissible(None, n, Constraint::StrictlyPositive);
            let mut brute = Vec::new();
            // Entries ≥ 1 and degree ≤ 9 bound length by 3 and entries by 9.
            brute.push(Seq::empty());
            for a in 1..=9i64 {
                brute.push(seq(&[a]));
                for b in 1..=9i64 {
                    brute.push(seq(&[a, b]));
                    for c in 1..=9i64 {
                        brute.push(seq(&[a, b, c]));
                    }
                }
            }
            let mut brute: Vec<Seq> = brute
                .into_iter()
                .filter(|s| s.degree() == n && s.is_admissible() && s.strictly_positive())
                .collect();
            brute.sort_by(|a, b| b.entries().cmp(a.entries()));
            assert_eq!(fast, brute, "degree {n}");
        }
    }

    #[test]
    fn enumerate_excess_bound() {
        // Length 1, degree 3: e((3)) = 3 > 2 → empty.
        assert!(enumerate_admissible(Some(1), 3, Constraint::ExcessAtMost(2)).is_empty());
        // Degree 3, excess ≤ 3 at length 1: just (3).
        assert_eq!(
            enumerate_admissible(Some(1), 3, Constraint::ExcessAtMost(3)),
            vec![seq(&[3])]
        );
        // Exhaustive cross-check at length 2 over a window with negatives.
        for n in -4..=10i64 {
            for e in -3..=4i64 {
                let fast = enumerate_admissible(Some(2), n, Constraint::ExcessAtMost(e));
                let mut brute = Vec::new();
                for a in -30..=30i64 {
                    for b in -30..=30i64 {
                        let s = seq(&[a, b]);
                        if s.degree() == n && s.is_admissible() && s.excess().le(e) {
                            brute.push(s);
                        }
                    }
                }
                brute.sort_by(|x, y| y.entries().cmp(x.entries()));
                assert_eq!(fast, brute, "degree {n}, excess ≤ {e}");
            }
        }
    }

    #[test]
    fn enumerate_min_last() {
        // Exhaustive cross-check at lengths 2 and 3 with negative bounds.
        for n in -6..=8i64 {
            for b in -2..=2i64 {
                let fast = enumerate_admissible(Some(2), n, Constraint::MinLast(b));
                let mut brute = Vec::new();
                for a in -40..=40i64 {
                    for c in -40..=40i64 {
                        let s = seq(&[a, c]);
                        if s.degree() == n && s.is_admissible() && c >= b {
                            brute.push(s);
                        }
                    }
                }
                brute.sort_by(|x, y| y.entries().cmp(x.entries()));
                assert_eq!(fast, brute, "degree {n}, last ≥ {b}");
            }
        }
    }

    #[test]
    fn gamma_split_examples() {
        // I = (2,1), d = 1: e(I) = 1 ≤ 1 so j = 0 splits off nothing.
        let g = gamma_split(&seq(&[2, 1]), 1).unwrap();
        assert_eq!(g.j, 0);
        assert_eq!(g.prefix, Seq::empty());
        assert_eq!(g.suffix, seq(&[2, 1]));

        // I = (4,1), d = 1: e((1)) = 1 ≤ 2 and 4 ≥ 1+1+1 → j = 1.
        let g = gamma_split(&seq(&[4, 1]), 1).unwrap();
        assert_eq!(g.j, 1);
        assert_eq!(g.prefix, seq(&[4]));
        assert_eq!(g.suffix, seq(&[1]));

        // I = (5,2,1), d = 1 → j = 1.
        let g = gamma_split(&seq(&[5, 2, 1]), 1).unwrap();
        assert_eq!(g.j, 1);
        assert_eq!(g.prefix, seq(&[5]));
        assert_eq!(g.suffix, seq(&[2, 1]));

        assert!(matches!(
            gamma_split(&seq(&[1, 1]), 0),
            Err(SeqError::NotAdmissible(_))
        ));
    }

    /// γ-uniqueness: every admissible sequence in a window splits at exactly
    /// one index for every d ∈ [−3,3]; gamma_split errors otherwise, so
    /// success of the call *is* the uniqueness assertion.
    #[test]
    fn gamma_uniqueness_window() {
        for n in 0..=16i64 {
            for i in enumerate_admissible(None, n, Constraint::StrictlyPositive) {
                for d in -3..=3i64 {
                    let g = gamma_split(&i, d).unwrap_or_else(|e| panic!("{e}"));
                    // Returned split recombines to I and satisfies the
                    // advertised inequalities.
                    assert_eq!(g.prefix.concat(&g.suffix), i);
                    assert!(g.suffix.excess().le(d + g.j as i64) || g.j == i.len());
                    if g.j > 0 {
                        assert!(
                            i.entries()[g.j - 1] >= d + g.suffix.degree() + g.j as i64
                        );
                    }
                }
            }
        }
    }

    #[test]
    fn lower_to_upper_examples() {
        assert_eq!(lower_to_upper(&Seq::lower_dl(vec![1, 0]), 0), Seq::upper_dl(vec![1, 0]));
        assert_eq!(lower_to_upper(&Seq::lower_dl(vec![2, 1]), 0), Seq::upper_dl(vec![3, 1]));
        assert_eq!(lower_to_upper(&Seq::lower_dl(vec![0]), 5), Seq::upper_dl(vec![5]));
        // Degree bookkeeping: |Q_J ι_d| = 2^s d + Σ 2^{k−1} j_k.
        assert_eq!(lower_word_degree(&Seq::lower_dl(vec![2, 1]), 0), 2 + 2);
        assert_eq!(lower_word_degree(&Seq::lower_dl(vec![1, 0]), -1), 1 - 4);
    }

    #[test]
    fn reindex_examples() {
        assert_eq!(reindex(&Seq::lower_dl(vec![1, 0]), 0), seq(&[2, 1]));
        // α(J,−1)+1 stays in ℕ.
        assert_eq!(reindex(&Seq::lower_dl(vec![0]), -1), seq(&[0]));
        assert_eq!(
            reindex_inverse(&seq(&[2, 1]), 0).unwrap(),
            Seq::lower_dl(vec![1, 0])
        );
    }

    /// Bijection window: J strictly decreasing with entries ≤ 6 ↔ admissible
    /// I with i_s > d, matched through reindex both ways for d ∈ [−2,2].
    #[test]
    fn reindex_bijection_window() {
        for d in -2..=2i64 {
            for s in 1..=3usize {
                // Forward: strictly decreasing J lands on admissible I with
                // i_s > d; injectivity via a set.
                let mut seen = std::collections::BTreeSet::new();
                let mut count_forward = 0;
                let js: Vec<Vec<i64>> = match s {
                    1 => (0..=6).map(|a| vec![a]).collect(),
                    2 => (0..=6)
                        .flat_map(|a| (0..=6).map(move |b| vec![a, b]))
                        .collect(),
                    _ => (0..=6)
                        .flat_map(|a| {
                            (0..=6).flat_map(move |b| (0..=6).map(move |c| vec![a, b, c]))
                        })
                        .collect(),
                };
                for j in js {
                    let j = Seq::lower_dl(j);
                    let i = reindex(&j, d);
                    // Injective on all of ℕ^s.
                    assert!(seen.insert(i.entries().to_vec()), "collision at {j:?}");
                    assert_eq!(reindex_inverse(&i, d).unwrap(), j);
                    if strictly_decreasing(&j) {
                        count_forward += 1;
                        assert!(i.is_admissible(), "image of strictly decreasing not admissible");
                        assert!(*i.entries().last().unwrap() > d);
                    } else {
                        assert!(!i.is_admissible(), "image of non-decreasing J came out admissible");
                    }
                }
                // Backward: every admissible I with i_s > d in a degree window
                // is hit by a strictly decreasing J.
                let mut count_back = 0;
                for deg in -30..=70i64 {
                    for i in enumerate_admissible(Some(s), deg, Constraint::MinLast(d + 1)) {
                        if let Ok(j) = reindex_inverse(&i, d) {
                            if strictly_decreasing(&j) && j.entries().iter().all(|&x| (0..=6).contains(&x)) {
                                count_back += 1;
                            }
                        } else {
                            panic!("admissible {i:?} with i_s > {d} not in reindex image");
                        }
                    }
                }
                assert_eq!(count_forward, count_back, "window counts d={d} s={s}");
            }
        }
    }

    #[test]
    fn enumerate_lower_words_degree_fibers() {
        // s = 2, d = 0, degree 4: j₁ + 2 j₂ = 4 → (4,0), (2,1), (0,2).
        let words = enumerate_lower_words(2, 0, 4, |_| true);
        assert_eq!(
            words,
            vec![
                Seq::lower_dl(vec![4, 0]),
                Seq::lower_dl(vec![2, 1]),
                Seq::lower_dl(vec![0, 2])
            ]
        );
        for w in &words {
            assert_eq!(lower_word_degree(w, 0), 4);
        }
    }
}
