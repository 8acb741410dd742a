//! Steinberg functors `𝓛_s`, computed degreewise as kernel intersections
//! inside iterated free word spaces.
//!
//! # The ambient space
//!
//! For a module `M`, the space `(ℛ₁)^s M` has basis the formal words
//! `Q_{j₁}…Q_{j_s} ⊗ x` over a basis of `M` with every stagewise lower
//! index non-negative (`j_k ≥ 0`) and **no relations imposed** between
//! adjacent operations. The degree is `2^s|x| + Σ_k 2^{k−1} j_k` (indices
//! weighted by stagewise doubling, outermost entry weight 1). The Steenrod
//! action passes through each level by a single Nishida step — no Adem
//! rewriting is needed because every word in ℕ^s is a basis element.
//!
//! # The Steinberg subspace
//!
//! Collapsing the adjacent pair at position `p` by the Adem relations gives
//! a projection `(ℛ₁)^s M → (ℛ₁)^p ℛ₂ (ℛ₁)^{s−p−2} M` for each
//! `0 ≤ p ≤ s−2`. The Steinberg functor is the intersection of their
//! kernels:
//!
//! ```text
//! 𝓛_s M = ⋂_{p} ker( (ℛ₁)^s M → (ℛ₁)^p ℛ₂ (ℛ₁)^{s−p−2} M )
//! ```
//!
//! with `𝓛₀ = Id` and `𝓛₁ = ℛ₁` (empty intersection). Over a sphere `Σ^d F`
//! it has a basis indexed by *strictly decreasing* `J ∈ ℕ^s`, equivalently
//! (after reindexing) by admissible upper sequences `I` of length `s` with
//! `i_s > d`; [`steinberg_dim_check`] verifies all three counts agree. The
//! lowest nonzero degree of `𝓛_t Σ^d F` is `2^t(d+1) − (t+1)`.
//!
//! # Suspension
//!
//! On word coordinates the natural map `ε : 𝓛_s M → Σ^{−1} 𝓛_s ΣM`
//! subtracts 1 from every lower index, killing words with any `j_k = 0`; it
//! is surjective and fits, with the Frobenius twist `Φ`, into the short
//! exact sequence
//!
//! ```text
//! 0 → Σ^{−1} 𝓛_{s−1} ΣΦM → 𝓛_s M → Σ^{−1} 𝓛_s ΣM → 0
//! ```
//!
//! verified degreewise by [`stein_suspension`].

use std::collections::{BTreeMap, BTreeSet, HashMap};

use thiserror::Error;

use crate::dyerlashof::dl_adem_pair_lower;
use crate::gf2::{Echelon, F2Matrix, F2Vec};
use crate::seqcomb::{
    enumerate_admissible, enumerate_lower_words, lower_degree, reindex, Constraint,
};
use crate::steenrod::{binom_mod2, FpModule};

/// A word-space cell coordinate: stagewise indices plus base generator.
type WordCoord = (Vec<i64>, usize);
/// Memo table for the levelwise Nishida recursion.
type NishidaMemo = HashMap<(Vec<i64>, usize, i64), BTreeSet<WordCoord>>;

/// Errors reported by the Steinberg layer.
#[derive(Debug, Error, PartialEq, Eq)]
pub enum SteinbergError {
    /// The three independent dimension counts disagree.
    #[error("dimension mismatch at degree {degree}: kernel {kernel}, decreasing words {words}, admissible {admissible}")]
    DimMismatch {
        /// First failing degree.
        degree: i64,
        /// Kernel-intersection dimension.
        kernel: usize,
        /// Strictly decreasing word count.
        words: usize,
        /// Reindexed admissible count.
        admissible: usize,
    },
    /// The Steenrod action leaves the subspace (an upstream bug).
    #[error("Sq^{r} does not preserve the subspace at degree {degree}")]
    NotPreserved {
        /// Operation index.
        r: i64,
        /// Source degree.
        degree: i64,
    },
    /// The suspension map leaves the target subspace.
    #[error("suspension map leaves the Steinberg subspace at degree {degree}")]
    SuspensionLeak {
        /// Source degree.
        degree: i64,
    },
    /// The suspension map fails to be surjective.
    #[error("suspension not surjective at degree {degree}: rank {rank}, target dimension {target}")]
    NotSurjective {
        /// Source degree.
        degree: i64,
        /// Achieved rank.
        rank: usize,
        /// Target dimension.
        target: usize,
    },
    /// The short-exact-sequence dimension identity fails.
    #[error("suspension dimension identity fails at degree {degree}: {total} ≠ {kernel} + {image}")]
    SesMismatch {
        /// Failing degree.
        degree: i64,
        /// Dimension of the middle term.
        total: usize,
        /// Dimension of the kernel term.
        kernel: usize,
        /// Dimension of the image term.
        image: usize,
    },
}

// ==================== the ambient word space ====================

/// The iterated free space `(ℛ₁)^s M`: formal words with non-negative
/// stagewise lower indices over a basis of `M`, no relations imposed.
#[derive(Clone, Debug)]
pub struct IteratedR1Space {
    s: usize,
    base: FpModule,
    cutoff: i64,
    /// Per degree: the cell's words `(J, base index)`, sorted.
    cells: BTreeMap<i64, Vec<WordCoord>>,
    /// `(J, base index) → (degree, position in cell)`.
    index: HashMap<WordCoord, (i64, u32)>,
}

impl IteratedR1Space {
    /// Builds the space through degree `cutoff` (clipped to the window the
    /// base module can support when the base is itself windowed).
    #[must_use]
    pub fn new(base: &FpModule, s: usize, cutoff: i64) -> Self {
        assert!(s <= 30, "length {s} out of scale");
        let cutoff = if base.flags().get("truncated").copied().unwrap_or(false) {
            // A base class just above the base window would enter in degree
            // 2^s(c+1); below that every cell is complete.
            cutoff.min((base.cutoff() + 1) * (1i64 << s) - 1)
        } else {
            cutoff
        };
        let mut cells: BTreeMap<i64, Vec<WordCoord>> = BTreeMap::new();
        for (gi, g) in base.generators().iter().enumerate() {
            let start = g.degree * (1i64 << s);
            for deg in start..=cutoff {
                for j in enumerate_lower_words(s, g.degree, deg, |_| true) {
                    cells.entry(deg).or_default().push((j.entries().to_vec(), gi));
                }
            }
        }
        for cell in cells.values_mut() {
            cell.sort();
        }
        let index: HashMap<WordCoord, (i64, u32)> = cells
            .iter()
            .flat_map(|(&d, cell)| {
                cell.iter()
                    .enumerate()
                    .map(move |(p, w)| (w.clone(), (d, p as u32)))
            })
            .collect();
        Self { s, base: base.clone(), cutoff, cells, index }
    }

    /// Word length of the space.
    #[must_use]
    pub fn s(&self) -> usize {
        self.s
    }

    /// The base module.
    #[must_use]
    pub fn base(&self) -> &FpModule {
        &self.base
    }

    /// Degree window bound.
    #[must_use]
    pub fn cutoff(&self) -> i64 {
        self.cutoff
    }

    /// Cell dimension in a degree.
    #[must_use]
    pub fn dim(&self, degree: i64) -> usize {
        self.cells.get(&degree).map_or(0, Vec::len)
    }

    /// The words of a degree cell, sorted.
    #[must_use]
    pub fn words_at(&self, degree: i64) -> &[WordCoord] {
        self.cells.get(&degree).map_or(&[], Vec::as_slice)
    }

    /// All populated degrees.
    #[must_use]
    pub fn degrees(&self) -> Vec<i64> {
        self.cells.keys().copied().collect()
    }

    /// Human-readable label of a cell coordinate.
    #[must_use]
    pub fn word_label(&self, degree: i64, position: usize) -> String {
        let (j, gi) = &self.words_at(degree)[position];
        let word: Vec<String> = j.iter().map(ToString::to_string).collect();
        let base = &self.base.generators()[*gi].label;
        if j.is_empty() {
            base.clone()
        } else {
            format!("Q({}).{}", word.join(","), base)
        }
    }

    /// One-level Nishida step: `Sq^r` on a word, recursively through the
    /// levels, bottoming out in the base action. No Adem rewriting: every
    /// produced word (after dropping negative stagewise indices) is a basis
    /// element.
    fn sq_word(
        &self,
        memo: &mut NishidaMemo,
        j: &[i64],
        g: usize,
        r: i64,
    ) -> BTreeSet<WordCoord> {
        if r < 0 {
            return BTreeSet::new();
        }
        if r == 0 {
            return BTreeSet::from([(j.to_vec(), g)]);
        }
        if j.is_empty() {
            return self
                .base
                .act(&F2Vec::unit(g as u32), r)
                .support()
                .iter()
                .map(|&d| (Vec::new(), d as usize))
                .collect();
        }
        let key = (j.to_vec(), g, r);
        if let Some(hit) = memo.get(&key) {
            return hit.clone();
        }
        let tail = &j[1..];
        let w_deg = lower_degree(tail, self.base.generators()[g].degree);
        let mut acc: BTreeSet<WordCoord> = BTreeSet::new();
        for i in 0..=r / 2 {
            if !binom_mod2(j[0] + w_deg - r, r - 2 * i) {
                continue;
            }
            let head = j[0] - r + 2 * i;
            if head < 0 {
                continue;
            }
            for (jw, gg) in self.sq_word(memo, tail, g, i) {
                let mut word = Vec::with_capacity(jw.len() + 1);
                word.push(head);
                word.extend_from_slice(&jw);
                let t = (word, gg);
                if !acc.remove(&t) {
                    acc.insert(t);
                }
            }
        }
        memo.insert(key, acc.clone());
        acc
    }

    /// Matrix of `Sq^r` from the cell in `degree` to the cell in
    /// `degree − r`, rows and columns in cell order.
    #[must_use]
    pub fn sq_matrix(&self, r: i64, degree: i64) -> F2Matrix {
        let mut memo = NishidaMemo::new();
        let src = self.words_at(degree);
        let tgt_dim = self.dim(degree - r);
        let mut rows = Vec::with_capacity(src.len());
        for (j, g) in src {
            let mut row = F2Vec::zero();
            for term in self.sq_word(&mut memo, j, *g, r) {
                let &(d, p) = self
                    .index
                    .get(&term)
                    .expect("Nishida terms stay within the window");
                debug_assert_eq!(d, degree - r);
                row.toggle(p);
            }
            rows.push(row);
        }
        F2Matrix::from_rows(rows, tgt_dim)
    }

    /// Matrix (cell → same cell) of the projection collapsing the adjacent
    /// pair at position `p` by the Adem relations: words with
    /// `j_p ≤ j_{p+1}` map to themselves, others to their allowable
    /// expansion. Its kernel is the `p`-th Steinberg constraint.
    #[must_use]
    pub fn pair_projection(&self, p: usize, degree: i64) -> F2Matrix {
        assert!(p + 1 < self.s, "position {p} has no adjacent pair");
        let cell = self.words_at(degree);
        let mut rows = Vec::with_capacity(cell.len());
        for (j, g) in cell {
            let mut row = F2Vec::zero();
            if j[p] <= j[p + 1] {
                let &(_, pos) = &self.index[&(j.clone(), *g)];
                row.toggle(pos);
            } else {
                let inner = lower_degree(&j[p + 2..], self.base.generators()[*g].degree);
                for (outer, mid) in dl_adem_pair_lower(j[p], j[p + 1], inner) {
                    let mut w = j.clone();
                    w[p] = outer;
                    w[p + 1] = mid;
                    let &(d, pos) = self
                        .index
                        .get(&(w, *g))
                        .expect("Adem expansion preserves the degree cell");
                    debug_assert_eq!(d, degree);
                    row.toggle(pos);
                }
            }
            rows.push(row);
        }
        F2Matrix::from_rows(rows, cell.len())
    }
}

// ==================== the Steinberg subspace ====================

/// The subspace `𝓛_s M ⊆ (ℛ₁)^s M`, echelonized per degree.
#[derive(Clone, Debug)]
pub struct SteinbergSpace {
    ambient: IteratedR1Space,
    sub: BTreeMap<i64, Echelon>,
}

impl SteinbergSpace {
    /// Computes `𝓛_s M` through degree `cutoff`.
    #[must_use]
    pub fn new(base: &FpModule, s: usize, cutoff: i64) -> Self {
        let positions: Vec<usize> = (0..s.saturating_sub(1)).collect();
        Self::with_positions(base, s, cutoff, &positions)
    }

    /// The intersection of the kernels at the given pair positions only
    /// (all positions `0..=s−2` give the Steinberg space itself; a subset
    /// gives composites such as `𝓛_{s₁}𝓛_{s₂}`).
    #[must_use]
    pub fn with_positions(
        base: &FpModule,
        s: usize,
        cutoff: i64,
        positions: &[usize],
    ) -> Self {
        let ambient = IteratedR1Space::new(base, s, cutoff);
        let mut sub = BTreeMap::new();
        for &deg in ambient.cells.keys() {
            let dim = ambient.dim(deg);
            let mut space = Echelon::spanned_by(
                dim,
                (0..dim).map(|i| F2Vec::unit(i as u32)),
            );
            for &p in positions {
                let kernel = Echelon::spanned_by(
                    dim,
                    ambient.pair_projection(p, deg).reduce().kernel,
                );
                space = space.intersect(&kernel);
            }
            sub.insert(deg, space);
        }
        Self { ambient, sub }
    }

    /// The ambient word space.
    #[must_use]
    pub fn ambient(&self) -> &IteratedR1Space {
        &self.ambient
    }

    /// Subspace dimension in a degree.
    #[must_use]
    pub fn dim(&self, degree: i64) -> usize {
        self.sub.get(&degree).map_or(0, Echelon::dim)
    }

    /// The echelonized basis in a degree, if the cell exists.
    #[must_use]
    pub fn echelon(&self, degree: i64) -> Option<&Echelon> {
        self.sub.get(&degree)
    }

    /// Dimensions per degree (populated cells only).
    #[must_use]
    pub fn hilbert(&self) -> BTreeMap<i64, usize> {
        self.sub
            .iter()
            .filter(|(_, e)| e.dim() > 0)
            .map(|(&d, e)| (d, e.dim()))
            .collect()
    }

    /// Lowest degree with a nonzero class.
    #[must_use]
    pub fn min_degree(&self) -> Option<i64> {
        self.sub.iter().find(|(_, e)| e.dim() > 0).map(|(&d, _)| d)
    }

    /// Readable descriptions of the echelon basis in a degree: each row as
    /// a sum of word labels.
    #[must_use]
    pub fn describe_basis(&self, degree: i64) -> Vec<String> {
        let Some(e) = self.sub.get(&degree) else { return Vec::new() };
        e.basis()
            .iter()
            .map(|v| {
                let parts: Vec<String> = v
                    .support()
                    .iter()
                    .map(|&c| self.ambient.word_label(degree, c as usize))
                    .collect();
                parts.join(" + ")
            })
            .collect()
    }

    /// The matrix of `Sq^r` restricted to the subspace, in echelon
    /// coordinates (source degree → degree − r).
    ///
    /// # Errors
    ///
    /// [`SteinbergError::NotPreserved`] if the ambient action leaves the
    /// subspace (which would signal an upstream bug).
    pub fn action_matrix(&self, r: i64, degree: i64) -> Result<F2Matrix, SteinbergError> {
        let src = match self.sub.get(&degree) {
            Some(e) if e.dim() > 0 => e,
            _ => return Ok(F2Matrix::zero(0, self.dim(degree - r))),
        };
        let ambient_mat = self.ambient.sq_matrix(r, degree);
        let tgt = self.sub.get(&(degree - r));
        let mut rows = Vec::with_capacity(src.dim());
        for v in src.basis() {
            let img = ambient_mat.apply(v);
            if img.is_zero() {
                rows.push(F2Vec::zero());
                continue;
            }
            let coords = tgt
                .and_then(|t| t.coords(&img))
                .ok_or(SteinbergError::NotPreserved { r, degree })?;
            rows.push(coords);
        }
        Ok(F2Matrix::from_rows(rows, self.dim(degree - r)))
    }

    /// Checks `Sq^r`-closure for all `1 ≤ r ≤ max_r` on every populated
    /// degree whose target stays in the window.
    ///
    /// # Errors
    ///
    /// The first [`SteinbergError::NotPreserved`] found.
    pub fn action_closure_check(&self, max_r: i64) -> Result<(), SteinbergError> {
        for &deg in self.sub.keys() {
            for r in 1..=max_r {
                self.action_matrix(r, deg)?;
            }
        }
        Ok(())
    }
}

/// Verifies, per degree through `cutoff`, that three independent counts of
/// `dim 𝓛_s Σ^d F` agree: the kernel-intersection dimension, the number of
/// strictly decreasing `J ∈ ℕ^s` of that degree, and the number of
/// admissible upper sequences `I` of length `s` with `i_s > d` whose
/// reindexed degree matches. Returns the dimensions per degree.
///
/// # Errors
///
/// [`SteinbergError::DimMismatch`] at the first failing degree.
pub fn steinberg_dim_check(
    s: usize,
    d: i64,
    cutoff: i64,
) -> Result<BTreeMap<i64, usize>, SteinbergError> {
    let space = SteinbergSpace::new(&FpModule::sigma_f(d, cutoff.max(d)), s, cutoff);
    let mut dims = BTreeMap::new();
    let start = d * (1i64 << s);
    for degree in start.min(cutoff)..=cutoff {
        let kernel = space.dim(degree);
        let decreasing = enumerate_lower_words(s, d, degree, |w| {
            w.windows(2).all(|p| p[0] > p[1])
        });
        let words = decreasing.len();
        // Upper admissible side: I = reindex(J, d) has degree
        // d(I) = degree − d + s and last entry > d.
        let admissible = if s == 0 {
            usize::from(degree == d)
        } else {
            enumerate_admissible(Some(s), degree - d + (s as i64), Constraint::MinLast(d + 1))
                .len()
        };
        if kernel != words || words != admissible {
            return Err(SteinbergError::DimMismatch {
                degree,
                kernel,
                words,
                admissible,
            });
        }
        // The reindexing bijection sends each strictly decreasing word to
        // an admissible sequence of the right degree and bound.
        for j in &decreasing {
            let i = reindex(j, d);
            debug_assert!(i.is_admissible());
            debug_assert!(i.entries().last().is_none_or(|&l| l > d));
        }
        if kernel > 0 {
            dims.insert(degree, kernel);
        }
    }
    Ok(dims)
}

// ==================== suspension ====================

/// Degreewise data of the suspension morphism `ε : 𝓛_s M → Σ^{−1}𝓛_s ΣM`
/// and the short exact sequence it fits into.
#[derive(Clone, Debug)]
pub struct SuspensionReport {
    /// Per degree: the matrix of `ε` in echelon coordinates (source cell of
    /// `𝓛_sM` in that degree, target cell of `𝓛_sΣM` one degree higher).
    pub matrices: BTreeMap<i64, F2Matrix>,
    /// Per degree: `(dim 𝓛_sM, dim Σ^{−1}𝓛_{s−1}ΣΦM, dim Σ^{−1}𝓛_sΣM)`.
    pub dims: BTreeMap<i64, (usize, usize, usize)>,
}

/// Computes the suspension morphism on word coordinates (subtract 1 from
/// every lower index; words with a zero index die), restricted to the
/// Steinberg subspaces, and verifies: surjectivity in every window-complete
/// degree, and the dimension identity
/// `dim 𝓛_sM = dim Σ^{−1}𝓛_{s−1}ΣΦM + dim Σ^{−1}𝓛_sΣM`.
///
/// # Errors
///
/// [`SteinbergError`] on a leak, rank deficiency, or dimension mismatch.
pub fn stein_suspension(
    base: &FpModule,
    s: usize,
    cutoff: i64,
) -> Result<SuspensionReport, SteinbergError> {
    let space = SteinbergSpace::new(base, s, cutoff);
    let suspended = SteinbergSpace::new(&base.suspend(1), s, cutoff + 1);
    // Kernel term: Σ^{−1}𝓛_{s−1}ΣΦM (zero when s = 0).
    let kernel_space = if s == 0 {
        None
    } else {
        Some(SteinbergSpace::new(&base.phi().suspend(1), s - 1, cutoff + 1))
    };
    let top = cutoff.min(space.ambient.cutoff).min(suspended.ambient.cutoff - 1);
    let mut matrices = BTreeMap::new();
    let mut dims = BTreeMap::new();
    for (&deg, src) in &space.sub {
        if deg > top {
            continue;
        }
        // ε on the ambient cell: degree deg → deg + 1 over the suspension.
        let src_words = space.ambient.words_at(deg);
        let tgt_cell = suspended.ambient.words_at(deg + 1);
        let mut ambient_rows = Vec::with_capacity(src_words.len());
        for (j, g) in src_words {
            let mut row = F2Vec::zero();
            if j.iter().all(|&jk| jk >= 1) {
                let shifted: Vec<i64> = j.iter().map(|&jk| jk - 1).collect();
                let pos = tgt_cell
                    .binary_search(&(shifted, *g))
                    .expect("shifted word lies in the suspended cell");
                row.toggle(pos as u32);
            }
            ambient_rows.push(row);
        }
        let ambient_mat = F2Matrix::from_rows(ambient_rows, tgt_cell.len());
        let tgt = suspended.sub.get(&(deg + 1));
        let mut rows = Vec::with_capacity(src.dim());
        for v in src.basis() {
            let img = ambient_mat.apply(v);
            if img.is_zero() {
                rows.push(F2Vec::zero());
                continue;
            }
            let coords = tgt
                .and_then(|t| t.coords(&img))
                .ok_or(SteinbergError::SuspensionLeak { degree: deg })?;
            rows.push(coords);
        }
        let target_dim = suspended.dim(deg + 1);
        let mat = F2Matrix::from_rows(rows, target_dim);
        let rank = mat.rank();
        if rank != target_dim {
            return Err(SteinbergError::NotSurjective {
                degree: deg,
                rank,
                target: target_dim,
            });
        }
        let kdim = kernel_space.as_ref().map_or(0, |k| k.dim(deg + 1));
        let total = src.dim();
        if total != kdim + target_dim {
            return Err(SteinbergError::SesMismatch {
                degree: deg,
                total,
                kernel: kdim,
                image: target_dim,
            });
        }
        if total > 0 {
            dims.insert(deg, (total, kdim, target_dim));
        }
        matrices.insert(deg, mat);
    }
    Ok(SuspensionReport { matrices, dims })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn ambient_dimensions_and_action() {
        // (ℛ₁)²Σ⁰F in degree n: pairs (j₁, j₂) ≥ 0 with j₁ + 2j₂ = n.
        let base = FpModule::sigma_f(0, 12);
        let amb = IteratedR1Space::new(&base, 2, 12);
        for deg in 0..=12i64 {
            assert_eq!(amb.dim(deg), (deg / 2 + 1) as usize, "degree {deg}");
        }
        // Sq¹ on Q₂ι₀ in (ℛ₁)¹: binom(1,1)Q₁ι₀.
        let amb1 = IteratedR1Space::new(&base, 1, 12);
        let m = amb1.sq_matrix(1, 2);
        assert_eq!(m.nrows(), 1);
        assert_eq!(m.row(0), &F2Vec::unit(0));
        // Steenrod Adem coherence of the levelwise action on ambient cells:
        // Sq^aSq^b equals the expansion of the composite.
        for deg in 0..=10i64 {
            for b in 1..=3i64 {
                for a in 1..2 * b {
                    let lhs = amb.sq_matrix(a, deg).then(&amb.sq_matrix(b, deg - a));
                    let mut rhs = F2Matrix::zero(amb.dim(deg), amb.dim(deg - a - b));
                    for c in 0..=a / 2 {
                        if binom_mod2(b - c - 1, a - 2 * c) {
                            let m = amb
                                .sq_matrix(a + b - c, deg)
                                .then(&amb.sq_matrix(c, deg - a - b + c));
                            rhs = F2Matrix::from_rows(
                                rhs.rows()
                                    .iter()
                                    .zip(m.rows())
                                    .map(|(x, y)| x.plus(y))
                                    .collect(),
                                rhs.ncols(),
                            );
                        }
                    }
                    assert_eq!(lhs.rows(), rhs.rows(), "Sq^{a}Sq^{b} at degree {deg}");
                }
            }
        }
    }

    #[test]
    fn steinberg_small_cases() {
        // 𝓛₂Σ⁰F: degree 0 has only the word (0,0), which survives the
        // projection (dimension 0); degree 1 is spanned by Q₍₁,₀₎ since
        // Q₁Q₀ι₀ = 0 under Adem.
        let space = SteinbergSpace::new(&FpModule::sigma_f(0, 10), 2, 10);
        assert_eq!(space.dim(0), 0);
        assert_eq!(space.dim(1), 1);
        assert_eq!(space.describe_basis(1), vec!["Q(1,0).iota".to_string()]);
        assert_eq!(space.min_degree(), Some(1));
        // 𝓛₀M = M and 𝓛₁ = ℛ₁ (full spaces).
        let l0 = SteinbergSpace::new(&FpModule::sigma_f(3, 8), 0, 8);
        assert_eq!(l0.dim(3), 1);
        assert_eq!(l0.hilbert().len(), 1);
        let l1 = SteinbergSpace::new(&FpModule::sigma_f(-1, 6), 1, 6);
        for deg in -2..=6i64 {
            assert_eq!(l1.dim(deg), 1, "𝓛₁Σ^{{−1}}F degree {deg}");
        }
        assert_eq!(l1.min_degree(), Some(-2));
    }

    #[test]
    fn dim_check_three_ways() {
        for (s, d, cutoff) in [(2usize, 0i64, 16i64), (3, 0, 18), (2, -1, 12), (3, 1, 20), (2, 2, 16)] {
            let dims = steinberg_dim_check(s, d, cutoff).unwrap();
            // Lowest nonzero degree is 2^s(d+1) − (s+1).
            let expected = (d + 1) * (1i64 << s) - (s as i64 + 1);
            assert_eq!(
                dims.keys().next().copied(),
                Some(expected),
                "connectivity of 𝓛_{s}Σ^{d}F"
            );
        }
        // s = 1, d = −1: one class per degree ≥ −2.
        let dims = steinberg_dim_check(1, -1, 8).unwrap();
        assert!((-2..=8i64).all(|deg| dims.get(&deg) == Some(&1)));
    }

    #[test]
    fn action_restricts_to_the_subspace() {
        let space = SteinbergSpace::new(&FpModule::sigma_f(0, 12), 2, 12);
        space.action_closure_check(4).unwrap();
        // Sq¹ on 𝓛₁Σ⁰F degree 2 → the restriction of Q₂ ↦ Q₁ verbatim.
        let l1 = SteinbergSpace::new(&FpModule::sigma_f(0, 6), 1, 6);
        let m = l1.action_matrix(1, 2).unwrap();
        assert_eq!(m.nrows(), 1);
        assert_eq!(m.row(0), &F2Vec::unit(0));
        // And on 𝓛₀ it is the bare module action.
        let base = crate::steenrod::dual_free_unstable(2, 10);
        let l0 = SteinbergSpace::new(&base, 0, 10);
        for deg in 0..=10i64 {
            let restricted = l0.action_matrix(1, deg).unwrap();
            let direct = base.sq_matrix(1, deg);
            assert_eq!(restricted.rows(), direct.rows(), "degree {deg}");
        }
    }

    #[test]
    fn iterated_inclusion_and_additivity() {
        // 𝓛_{s₁+s₂} ⊆ 𝓛_{s₁}𝓛_{s₂} degreewise: dropping the bridging
        // constraint only enlarges the space.
        let base = FpModule::sigma_f(0, 14);
        let full = SteinbergSpace::new(&base, 3, 14);
        // Positions kept by 𝓛₁𝓛₂ (skip the bridge at 0) and 𝓛₂𝓛₁ (skip 1).
        for positions in [vec![1usize], vec![0]] {
            let partial = SteinbergSpace::with_positions(&base, 3, 14, &positions);
            for deg in 0..=14i64 {
                let (Some(small), Some(big)) = (full.echelon(deg), partial.echelon(deg))
                else {
                    continue;
                };
                for v in small.basis() {
                    assert!(big.contains(v), "degree {deg}: 𝓛₃ ⊄ composite");
                }
            }
        }
        // Exactness: dimensions add over direct sums.
        let a = FpModule::sigma_f(0, 12);
        let b = FpModule::sigma_f(1, 12);
        let sum = FpModule::direct_sum("a+b", &[&a, &b]);
        let la = SteinbergSpace::new(&a, 2, 12);
        let lb = SteinbergSpace::new(&b, 2, 12);
        let lsum = SteinbergSpace::new(&sum, 2, 12);
        for deg in 0..=12i64 {
            assert_eq!(lsum.dim(deg), la.dim(deg) + lb.dim(deg), "degree {deg}");
        }
    }

    #[test]
    fn suspension_surjects_with_exact_dims() {
        // s = 1, M = Σ⁰F: the sequence reads 0 → ΦM → 𝓛₁M → Σ^{−1}𝓛₁ΣM → 0;
        // the kernel is the Frobenius class Q₀ι₀ in degree 0.
        let report = stein_suspension(&FpModule::sigma_f(0, 10), 1, 10).unwrap();
        assert_eq!(report.dims[&0], (1, 1, 0));
        for deg in 1..=9i64 {
            assert_eq!(report.dims[&deg], (1, 0, 1), "degree {deg}");
        }
        // s = 2, M = Σ⁰F through degree 8.
        let report = stein_suspension(&FpModule::sigma_f(0, 8), 2, 8).unwrap();
        for (&deg, &(total, k, i)) in &report.dims {
            assert_eq!(total, k + i, "degree {deg}");
        }
        // s = 0: an isomorphism degreewise.
        let base = crate::steenrod::dual_free_unstable(1, 8);
        let report = stein_suspension(&base, 0, 8).unwrap();
        for (&deg, &(total, k, i)) in &report.dims {
            assert_eq!(k, 0, "degree {deg}");
            assert_eq!(total, i);
        }
        // A non-sphere input with nontrivial action.
        stein_suspension(&crate::steenrod::dual_free_unstable(1, 12), 2, 12).unwrap();
    }
}

