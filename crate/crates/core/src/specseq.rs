//! The infinite-delooping spectral sequence at desk scale.
//!
//! A module `M` graded over all integers (typically a desuspension of an
//! unstable module, or a shifted dual of the Steenrod algebra) is the
//! abutment of a second-quadrant homological spectral sequence whose columns
//! are derived functors of the Dyer-Lashof indecomposables,
//!
//! ```text
//!     E²_{−t,t}  =  Σ^{−1} (𝕃_t 𝐪 H₀𝔯 Σ^t M)⟨t⟩   (t ≥ 0),
//! ```
//!
//! converging strongly to `M`.  Everything above the anti-diagonal
//! `s + t = 0` vanishes, the limit is concentrated on the anti-diagonal, and
//! the abutment carries the exhaustive filtration `𝔳₀M ⊆ 𝔳₁M ⊆ …` with
//! `𝔳_t M / 𝔳_{t−1} M ≅ E^∞_{−t,t}`.  The bottom stage
//! `𝔳₀ M = Σ^{−1} Ω^∞ Σ M` is the best unstable approximation inside `M`.
//!
//! Two families are computed in closed form, and both degenerate at the
//! second page, so one chart ([`SSPage`]) records `E² = E^∞` together with
//! the filtration it determines.
//!
//! * **Shifted duals** ([`ss_dual_steenrod`]): when `M` has the dimensions
//!   of the `n`-fold shift of the dual Steenrod algebra, column `−t` is the
//!   Steinberg module `𝓛_t Σ^{−1} F(n+t+1)`, with basis the σ-pairs
//!   enumerated by [`sigma_pairs`].  Summing the columns along an
//!   anti-diagonal recovers `dim M` degree by degree, and the bijection is
//!   explicit: the γ-splitting of admissible sequences
//!   ([`reconstruction_split`]).
//! * **Double desuspensions** ([`ss_desusp2`]): for `M = Σ^{−2} N` with `N`
//!   unstable, exactly two columns survive — `E^∞_{0,0} = Σ^{−1} Ω N` and
//!   `E^∞_{−1,1} = Σ^{−2} ker(ΦN → ΣΩ₁N)` — and they exhaust `M`: per
//!   degree this is the rank-nullity identity `dim ker Sq₀ + rank Sq₀ =
//!   dim N`.
//!
//! The same cells give an effective instability certificate
//! ([`instability_test`]): `ΣM` is unstable exactly when every obstruction
//! cell `(𝕃_t 𝐪 H₀𝔯 Σ^t M)⟨t⟩`, `t > 0`, vanishes.  Finally,
//! [`connectivity_table`] checks the a-priori connectivity floor of each
//! column against the classes actually present.
//!
//! Pages with nonzero differentials (the single-delooping towers of an
//! unstable module) are encoded separately, in barcode form, by
//! [`crate::steenrod::DeloopSS`]; the chart type here models the degenerate
//! pages only.

use std::collections::{BTreeMap, BTreeSet};

use thiserror::Error;

use crate::destab::{certify_unstable, desusp1_analysis, h0r_unstable, DestabError};
use crate::gf2::F2Vec;
use crate::koszul::{build_koszul, koszul_homology, KoszulError};
use crate::seqcomb::{enumerate_admissible, gamma_split, Constraint, Seq, SeqError};
use crate::steenrod::FpModule;

/// Errors from spectral-sequence assembly and its verification passes.
#[derive(Debug, Error)]
pub enum SsError {
    /// A destabilization step rejected its input.
    #[error(transparent)]
    Destab(#[from] DestabError),
    /// A Koszul-complex certificate could not be computed.
    #[error(transparent)]
    Koszul(#[from] KoszulError),
    /// Sequence combinatorics failed (non-admissible input to a split).
    #[error(transparent)]
    Seq(#[from] SeqError),
    /// An anti-diagonal total missed the dimension it must reconstruct.
    #[error("degree {degree}: anti-diagonal total {total} != module dimension {target}")]
    Reconstruction {
        /// Internal degree.
        degree: i64,
        /// Sum of `dim E^∞_{−t,t}` over the anti-diagonal.
        total: usize,
        /// Dimension of the abutment in this degree.
        target: usize,
    },
    /// A γ-split landed on a label absent from its column.
    #[error("splitting {sequence:?} in degree {degree} gave {label}, absent from column t={t}")]
    SplitMismatch {
        /// The admissible sequence that was split.
        sequence: Vec<i64>,
        /// Internal degree of the class.
        degree: i64,
        /// Column the split landed in.
        t: u32,
        /// Label produced by the split.
        label: String,
    },
    /// A column cell's dimension differs from the number of splits hitting it.
    #[error("column t={t}, degree {degree}: {split} splits for a cell of dimension {dim}")]
    CellCount {
        /// Column index.
        t: u32,
        /// Internal degree.
        degree: i64,
        /// Number of admissible sequences split into this cell.
        split: usize,
        /// Cell dimension.
        dim: usize,
    },
    /// The two-column filtration failed to exhaust the abutment.
    #[error("degree {degree}: v0 ({v0}) + layer-1 ({layer1}) != target dimension {target}")]
    Filtration {
        /// Internal degree.
        degree: i64,
        /// Dimension of `𝔳₀` in this degree.
        v0: usize,
        /// Dimension of `𝔳₁/𝔳₀` in this degree.
        layer1: usize,
        /// Dimension of the abutment in this degree.
        target: usize,
    },
    /// A class sits at or below its column's connectivity floor.
    #[error("column t={t} has a class in degree {degree}, at or below the floor {bound}")]
    Connectivity {
        /// Column index.
        t: u32,
        /// Degree of the offending class.
        degree: i64,
        /// Connectivity floor for the column.
        bound: i64,
    },
}

// ==================== σ-pairs ====================

/// A basis element `σ_{I′} Sq^{I″} ι_n` of a shifted-dual column
/// `𝓛_t Σ^{−1} F(n+t+1)`, `t = length(I′)`.
///
/// Both sequences are admissible and upper-indexed.  Relative to a shift
/// `n`, membership in the column basis means `e(I″) ≤ (n+1)+t` (with `I″ =
/// ∅` allowed exactly when `(n+1)+t ≥ 0`), and, for `t > 0`,
/// `i′_t ≥ (n+1)+d(I″)+t` — one more than the degree of the base class
/// `Sq^{I″} ι` in `Σ^{−1} F(n+t+1)`.  The pair sits in internal degree
/// `d(I′) + d(I″) + n`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SigmaPair {
    /// The σ-word `I′` (its length is the column index `t`).
    pub prefix: Seq,
    /// The Steenrod word `I″` acting on the bottom class.
    pub suffix: Seq,
}

impl SigmaPair {
    /// Column index `t = length(I′)`.
    #[must_use]
    pub fn t(&self) -> u32 {
        u32::try_from(self.prefix.len()).expect("column index fits u32")
    }

    /// Internal degree `d(I′) + d(I″) + n` relative to the shift `n`.
    #[must_use]
    pub fn degree(&self, n: i64) -> i64 {
        self.prefix.degree() + self.suffix.degree() + n
    }

    /// Rendered basis label relative to the shift `n`: `S(..)` for the
    /// σ-word, `Sq(..)` for the Steenrod word, `i[n]` for the bottom class;
    /// empty words are omitted.
    #[must_use]
    pub fn label(&self, n: i64) -> String {
        let mut out = String::new();
        if !self.prefix.is_empty() {
            out.push_str(&format!("S({})", join_entries(&self.prefix)));
            out.push('.');
        }
        if !self.suffix.is_empty() {
            out.push_str(&format!("Sq({})", join_entries(&self.suffix)));
            out.push('.');
        }
        out.push_str(&format!("i[{n}]"));
        out
    }
}

fn join_entries(seq: &Seq) -> String {
    seq.entries()
        .iter()
        .map(ToString::to_string)
        .collect::<Vec<_>>()
        .join(",")
}

/// Enumerates the σ-pair basis of the column cell `E^∞_{−t,t}` in one
/// internal degree, for the shift `n`.
///
/// The column is `𝓛_t Σ^{−1} F(n+t+1)`; it vanishes identically when
/// `(n+1)+t < 0`.  For `t = −(n+1)` (the first surviving column of a
/// negative shift) the σ-words may end in zero entries — `σ₀` is a genuine
/// operation on a class of degree `−1`, not an identity.
#[must_use]
pub fn sigma_pairs(n: i64, t: u32, degree: i64) -> Vec<SigmaPair> {
    let mut out = Vec::new();
    let bound = n + 1 + i64::from(t);
    let need = degree - n;
    if bound < 0 || need < 0 {
        return out;
    }
    for d2 in 0..=need {
        let suffixes: Vec<Seq> = enumerate_admissible(None, d2, Constraint::StrictlyPositive)
            .into_iter()
            .filter(|i| i.is_empty() || i.excess().le(bound))
            .collect();
        if suffixes.is_empty() {
            continue;
        }
        let last_min = n + 1 + d2 + i64::from(t);
        let prefixes =
            enumerate_admissible(Some(t as usize), need - d2, Constraint::MinLast(last_min));
        for prefix in &prefixes {
            for suffix in &suffixes {
                out.push(SigmaPair { prefix: prefix.clone(), suffix: suffix.clone() });
            }
        }
    }
    out
}

/// Splits an admissible strictly-positive sequence `I` into the σ-pair that
/// carries its class on the anti-diagonal of the shift-`n` page, returning
/// `(t, pair)`.
///
/// The γ-split of `I` at `d = n+1` yields the unique cut `I = I′·I″` with
/// `e(ω_j I) ≤ (n+1)+j` for `j < s` and `i_j ≥ (n+1)+d(ω_j I)+j` for
/// `j > 0`.  Columns below `t = −(n+1)` vanish, and a cut shorter than that
/// forces `I″ = ∅` (a nonempty admissible strictly-positive tail has excess
/// ≥ 1, which the cut condition caps by a negative number); the σ-word is
/// then padded with zero entries up to the first surviving column.
///
/// # Errors
///
/// [`SeqError::NotAdmissible`] on non-admissible input.
pub fn reconstruction_split(seq: &Seq, n: i64) -> Result<(u32, SigmaPair), SeqError> {
    let split = gamma_split(seq, n + 1)?;
    let q = usize::try_from((-(n + 1)).max(0)).expect("first surviving column fits usize");
    if split.j >= q {
        let t = u32::try_from(split.j).expect("column index fits u32");
        return Ok((t, SigmaPair { prefix: split.prefix, suffix: split.suffix }));
    }
    debug_assert!(split.suffix.is_empty(), "a short cut ends in the empty suffix");
    let mut entries = split.prefix.entries().to_vec();
    entries.resize(q, 0);
    let t = u32::try_from(q).expect("column index fits u32");
    Ok((t, SigmaPair { prefix: Seq::upper(entries), suffix: split.suffix }))
}

// ==================== the chart ====================

/// One chart row: a populated cell `(s, t)` in one internal degree.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ChartRow {
    /// Homological column, `s = −t` on the anti-diagonal.
    pub s: i64,
    /// Filtration index.
    pub t: u32,
    /// Internal degree.
    pub degree: i64,
    /// Cell dimension.
    pub dim: usize,
    /// Basis labels, `;`-joined in sorted order.
    pub labels: String,
}

/// A degenerate spectral-sequence chart: `E² = E^∞`, concentrated on the
/// anti-diagonal `s + t = 0` of the second quadrant, together with the
/// filtration of the abutment that the limit page determines.
///
/// Cells above the anti-diagonal (`t > −s`) vanish for every page this type
/// models, so only the anti-diagonal is stored and the column index `t`
/// doubles as the bigrading.  The filtration record is cumulative:
/// `𝔳_t` in a degree is the sum of the cell dimensions at columns `≤ t`.
#[derive(Clone, Debug)]
pub struct SSPage {
    name: String,
    cutoff: i64,
    cells: BTreeMap<(u32, i64), Vec<String>>,
    filtration: BTreeMap<(u32, i64), usize>,
}

impl SSPage {
    /// Builds a page from its anti-diagonal cells, deriving the cumulative
    /// filtration record.  Cell label lists must be nonempty and sorted.
    fn assemble(name: String, cutoff: i64, cells: BTreeMap<(u32, i64), Vec<String>>) -> Self {
        let max_t = cells.keys().map(|&(t, _)| t).max().unwrap_or(0);
        let degrees: BTreeSet<i64> = cells.keys().map(|&(_, k)| k).collect();
        let mut filtration = BTreeMap::new();
        for &k in &degrees {
            let mut acc = 0usize;
            for t in 0..=max_t {
                acc += cells.get(&(t, k)).map_or(0, Vec::len);
                filtration.insert((t, k), acc);
            }
        }
        SSPage { name, cutoff, cells, filtration }
    }

    /// Page name.
    #[must_use]
    pub fn name(&self) -> &str {
        &self.name
    }

    /// Internal-degree window bound.
    #[must_use]
    pub fn cutoff(&self) -> i64 {
        self.cutoff
    }

    /// Highest populated column index (0 for an empty page).
    #[must_use]
    pub fn max_t(&self) -> u32 {
        self.cells.keys().map(|&(t, _)| t).max().unwrap_or(0)
    }

    /// Cell dimension at `(−t, t)` in one internal degree.
    #[must_use]
    pub fn dim(&self, t: u32, degree: i64) -> usize {
        self.cells.get(&(t, degree)).map_or(0, Vec::len)
    }

    /// Sorted basis labels of one cell (empty when the cell vanishes).
    #[must_use]
    pub fn labels(&self, t: u32, degree: i64) -> &[String] {
        self.cells.get(&(t, degree)).map_or(&[], Vec::as_slice)
    }

    /// Lowest populated internal degree of one column.
    #[must_use]
    pub fn column_min(&self, t: u32) -> Option<i64> {
        self.cells
            .range((t, i64::MIN)..=(t, i64::MAX))
            .next()
            .map(|(&(_, k), _)| k)
    }

    /// `dim 𝔳_t` in one internal degree (cumulative over columns `≤ t`).
    #[must_use]
    pub fn filtration_dim(&self, t: u32, degree: i64) -> usize {
        self.filtration
            .get(&(t.min(self.max_t()), degree))
            .copied()
            .unwrap_or(0)
    }

    /// Per-degree totals of the limit page — the Hilbert function of the
    /// abutment, by strong convergence.
    #[must_use]
    pub fn infinity_totals(&self) -> BTreeMap<i64, usize> {
        let mut out = BTreeMap::new();
        for (&(_, k), labels) in &self.cells {
            *out.entry(k).or_default() += labels.len();
        }
        out
    }

    /// Chart rows, sorted by `(t, degree)`.
    #[must_use]
    pub fn chart_rows(&self) -> Vec<ChartRow> {
        self.cells
            .iter()
            .map(|(&(t, degree), labels)| ChartRow {
                s: -i64::from(t),
                t,
                degree,
                dim: labels.len(),
                labels: labels.join(";"),
            })
            .collect()
    }

    /// The cumulative filtration table as `(t, degree, dim 𝔳_t)` rows,
    /// sorted by `(t, degree)`; every populated degree carries one row per
    /// column up to [`SSPage::max_t`].
    #[must_use]
    pub fn filtration_rows(&self) -> Vec<(u32, i64, usize)> {
        self.filtration.iter().map(|(&(t, k), &v)| (t, k, v)).collect()
    }
}

// ==================== shifted duals ====================

/// Verification record for one shifted-dual page.
#[derive(Clone, Debug)]
pub struct ReconstructionReport {
    /// The shift.
    pub n: i64,
    /// Internal-degree window bound.
    pub cutoff: i64,
    /// Per internal degree: (anti-diagonal total, dimension of the shifted
    /// dual in that degree).  The builder errors unless the components
    /// agree, so a returned report always has equal pairs.
    pub totals: BTreeMap<i64, (usize, usize)>,
    /// Number of admissible sequences run through the γ-split.
    pub split_checked: usize,
    /// For `n < 0`: the first surviving column `t = −(n+1)` and its lowest
    /// populated degree (which equals `n`).  `None` for `n ≥ 0` or when the
    /// window is too small to see the column.
    pub negative_column: Option<(u32, i64)>,
}

/// Lowest internal degree of the column `𝓛_t Σ^{−1} F(n+t+1)` (valid for
/// `(n+1)+t ≥ 0`): realized by `I″ = ∅` and the doubling σ-word on the
/// bottom class, giving `2^t (n+t+1) − (t+1)`.
fn column_min_degree(n: i64, t: u32) -> i64 {
    let pow = 1i64 << t.min(61);
    pow.saturating_mul(n + i64::from(t) + 1)
        .saturating_sub(i64::from(t) + 1)
}

/// Computes the limit page of the spectral sequence whose abutment has the
/// dimensions of the `n`-fold shifted dual Steenrod algebra, for any
/// `n ∈ ℤ`, through internal degree `max_degree` — and verifies, degree by
/// degree, that the anti-diagonal reconstructs the abutment via the
/// γ-splitting bijection.
///
/// The column `−t` is `𝓛_t Σ^{−1} F(n+t+1)`, populated by [`sigma_pairs`];
/// columns with `(n+1)+t < 0` vanish.  Every admissible strictly-positive
/// sequence of degree `k−n` is split by [`reconstruction_split`] and looked
/// up in its target cell; cell dimensions must match the split counts
/// exactly (a bijection, since concatenation inverts the split).
///
/// # Errors
///
/// [`SsError::SplitMismatch`], [`SsError::CellCount`], or
/// [`SsError::Reconstruction`] when the reconstruction fails — these certify
/// a bug rather than bad input, as the bijection is a theorem.
///
/// # Panics
///
/// Desk scale: panics if a populated column index would exceed length 40
/// (sequence enumeration caps the word length).
pub fn ss_dual_steenrod(
    n: i64,
    max_degree: i64,
) -> Result<(SSPage, ReconstructionReport), SsError> {
    let q_col = u32::try_from((-(n + 1)).max(0)).expect("first surviving column fits u32");
    // Columns beyond the last one whose minimal degree fits are empty.
    let mut t_top = q_col;
    while column_min_degree(n, t_top + 1) <= max_degree {
        t_top += 1;
    }
    let mut cells: BTreeMap<(u32, i64), Vec<String>> = BTreeMap::new();
    for t in q_col..=t_top {
        for k in column_min_degree(n, t)..=max_degree {
            let pairs = sigma_pairs(n, t, k);
            if pairs.is_empty() {
                continue;
            }
            let mut labels: Vec<String> = pairs.iter().map(|p| p.label(n)).collect();
            labels.sort();
            cells.insert((t, k), labels);
        }
    }
    // Reconstruction: split every admissible sequence and match it against
    // the cells, counting exactly.
    let mut totals = BTreeMap::new();
    let mut split_checked = 0usize;
    for k in n..=max_degree {
        let seqs = enumerate_admissible(None, k - n, Constraint::StrictlyPositive);
        let target = seqs.len();
        let mut tallies: BTreeMap<u32, usize> = BTreeMap::new();
        for seq in &seqs {
            let (t, pair) = reconstruction_split(seq, n)?;
            debug_assert_eq!(pair.degree(n), k, "splitting preserves internal degree");
            let label = pair.label(n);
            let hit = cells
                .get(&(t, k))
                .is_some_and(|ls| ls.binary_search(&label).is_ok());
            if !hit {
                return Err(SsError::SplitMismatch {
                    sequence: seq.entries().to_vec(),
                    degree: k,
                    t,
                    label,
                });
            }
            *tallies.entry(t).or_default() += 1;
            split_checked += 1;
        }
        let mut column_sum = 0usize;
        for t in q_col..=t_top {
            let dim = cells.get(&(t, k)).map_or(0, Vec::len);
            column_sum += dim;
            let split = tallies.get(&t).copied().unwrap_or(0);
            if split != dim {
                return Err(SsError::CellCount { t, degree: k, split, dim });
            }
        }
        if column_sum != target {
            return Err(SsError::Reconstruction { degree: k, total: column_sum, target });
        }
        totals.insert(k, (column_sum, target));
    }
    let negative_column = if n < 0 {
        cells
            .range((q_col, i64::MIN)..=(q_col, i64::MAX))
            .next()
            .map(|(&(_, k), _)| (q_col, k))
    } else {
        None
    };
    let page = SSPage::assemble(format!("ss_dual[{n}]"), max_degree, cells);
    let report =
        ReconstructionReport { n, cutoff: max_degree, totals, split_checked, negative_column };
    Ok((page, report))
}

// ==================== double desuspensions ====================

/// The limit page for `M = Σ^{−2} N` together with its exhaustion record.
#[derive(Clone, Debug)]
pub struct Desusp2Output {
    /// The two-column chart: `(0, k)` carries `Σ^{−1}ΩN`, `(1, k)` carries
    /// `Σ^{−2} ker(ΦN → ΣΩ₁N)`.
    pub page: SSPage,
    /// Per internal degree within the window: (anti-diagonal total,
    /// `dim Σ^{−2}N`).  The builder errors unless the components agree.
    pub totals: BTreeMap<i64, (usize, usize)>,
    /// For a truncated `N`: the degree at and above which the layer-1
    /// identification may clip against the truncation boundary.
    pub boundary_unreliable: Option<i64>,
}

/// Renders a vector in the coordinates of `m` as a sum of generator labels.
fn label_sum(m: &FpModule, v: &F2Vec) -> String {
    v.support()
        .iter()
        .map(|&i| m.generators()[i as usize].label.as_str())
        .collect::<Vec<_>>()
        .join("+")
}

/// Computes the limit page of the spectral sequence for `M = Σ^{−2} N`,
/// `N` unstable, through internal degree `max_degree` (clipped to
/// `cutoff(N) − 2`, the window where `M` is fully visible).
///
/// Exactly two columns survive, both permanent cycles:
///
/// * `E^∞_{0,0} = 𝔳₀ = Σ^{−1} Ω N`, labeled by the kernel of `Sq₀`;
/// * `E^∞_{−1,1} = 𝔳₁/𝔳₀ = Σ^{−2} ker(ΦN → ΣΩ₁N)`, which in degree `k` is
///   the Frobenius double of `im(Sq₀) ⊆ N_{(k+2)/2}` — its cells are labeled
///   `phi(..)` by image basis vectors.
///
/// Higher columns vanish already at `E²`: for `t ≥ 2` the free object
/// `H₀𝔯 Σ^t M = ℛ(Σ^{t−2} N)` has no higher derived indecomposables.  The
/// filtration is verified to exhaust: per degree `k` in the window,
/// `dim 𝔳₀ + dim 𝔳₁/𝔳₀ = dim N_{k+2}` (rank-nullity for `Sq₀` out of
/// `N_{k+2}`), and the layer-1 dimensions are cross-checked against the
/// single-desuspension analysis.  The bottom filtration quotient is also
/// certified unstable at module level (`Σ 𝔳₀ = ΩN`).
///
/// # Errors
///
/// [`SsError::Destab`] when `N` (or its loop module) fails the instability
/// certificate; [`SsError::Filtration`] if exhaustion fails in some degree
/// (which would certify a bug).
///
/// # Panics
///
/// Panics if the layer-1 cells disagree with the single-desuspension
/// analysis — both derive from the same image computation, so a mismatch is
/// a programming error.
pub fn ss_desusp2(n_mod: &FpModule, max_degree: i64) -> Result<Desusp2Output, SsError> {
    certify_unstable(n_mod)?;
    let loops = n_mod.loops();
    certify_unstable(&loops.omega)?;
    let d1 = desusp1_analysis(n_mod, n_mod.cutoff())?;
    let eff = max_degree.min(n_mod.cutoff() - 2);
    let mut cells: BTreeMap<(u32, i64), Vec<String>> = BTreeMap::new();
    let v0 = loops.omega.suspend(-1);
    for g in v0.generators() {
        if g.degree <= eff {
            cells.entry((0, g.degree)).or_default().push(g.label.clone());
        }
    }
    for (&half, ech) in &loops.image {
        if ech.dim() == 0 {
            continue;
        }
        let degree = 2 * half - 2;
        if degree > eff {
            continue;
        }
        let labels: Vec<String> = ech
            .basis()
            .iter()
            .map(|v| format!("phi({})", label_sum(n_mod, v)))
            .collect();
        let expected = d1.kernel_dims.get(&degree).copied().unwrap_or(0);
        assert_eq!(
            labels.len(),
            expected,
            "layer-1 cell disagrees with the desuspension analysis in degree {degree}"
        );
        cells.insert((1, degree), labels);
    }
    for (&k, &dim) in &d1.kernel_dims {
        if k <= eff {
            assert_eq!(
                cells.get(&(1, k)).map_or(0, Vec::len),
                dim,
                "desuspension kernel class missing from the chart in degree {k}"
            );
        }
    }
    // Exhaustion: the two columns fill the abutment, degree by degree.
    let mut totals = BTreeMap::new();
    if let Some(min_n) = n_mod.min_degree() {
        for k in (min_n - 2)..=eff {
            let target = n_mod.dim_in_degree(k + 2);
            let a = cells.get(&(0, k)).map_or(0, Vec::len);
            let b = cells.get(&(1, k)).map_or(0, Vec::len);
            if a + b != target {
                return Err(SsError::Filtration { degree: k, v0: a, layer1: b, target });
            }
            if target > 0 {
                totals.insert(k, (a + b, target));
            }
        }
    }
    let page = SSPage::assemble(format!("ss_desusp2({})", n_mod.name()), eff, cells);
    Ok(Desusp2Output {
        page,
        totals,
        boundary_unreliable: d1.boundary_unreliable.map(|b| b - 1),
    })
}

// ==================== instability certificate ====================

/// A module presented as a desuspension of an unstable module.
#[derive(Clone, Copy, Debug)]
pub enum Presentation<'a> {
    /// `M = Σ^{−1} N` for the unstable module `N = ΣM`.
    DesuspendedOnce(&'a FpModule),
    /// `M = Σ^{−2} N` for the unstable module `N = Σ²M`.
    DesuspendedTwice(&'a FpModule),
}

/// Outcome of the instability certificate.
#[derive(Clone, Debug)]
pub struct InstabilityVerdict {
    /// Whether `ΣM` lies in the unstable category: true exactly when every
    /// windowed obstruction cell vanished.
    pub suspension_unstable: bool,
    /// Column window bound that was checked.
    pub max_t: u32,
    /// Internal-degree window bound.
    pub cutoff: i64,
    /// Nonzero obstruction cells `(t, degree) → dim`, in the internal
    /// grading of the certifying computation (the limit-page grading for
    /// the `t = 1` kernel cell, the Koszul grading otherwise).
    pub obstructions: BTreeMap<(u32, i64), usize>,
}

/// Decides whether `ΣM` is unstable by computing the obstruction cells
/// `(𝕃_t 𝐪 H₀𝔯 Σ^t M)⟨t⟩` for `1 ≤ t ≤ max_t`: they all vanish exactly
/// when `ΣM` lies in the unstable category.
///
/// For `M = Σ^{−1}N` every suspension `Σ^t M = Σ^{t−1} N` is unstable, so
/// `H₀𝔯 Σ^t M = ℛ(Σ^{t−1}N)` is free and each cell is certified by the
/// weight-`t` Koszul complex.  For `M = Σ^{−2}N` the `t = 1` cell is the
/// desuspension kernel `Σ^{−2} ker(ΦN → ΣΩ₁N)` — the one genuinely
/// obstructed stage — and `t ≥ 2` proceeds through `ℛ(Σ^{t−2}N)` as before.
///
/// # Errors
///
/// [`SsError::Destab`] when the presented module fails the instability
/// certificate; [`SsError::Koszul`] if a Koszul certificate cannot be built.
pub fn instability_test(
    case: Presentation<'_>,
    max_t: u32,
    cutoff: i64,
) -> Result<InstabilityVerdict, SsError> {
    let (n_mod, start_t) = match case {
        Presentation::DesuspendedOnce(m) => (m, 1u32),
        Presentation::DesuspendedTwice(m) => (m, 2u32),
    };
    certify_unstable(n_mod)?;
    let mut obstructions = BTreeMap::new();
    if let Presentation::DesuspendedTwice(m) = case {
        let d1 = desusp1_analysis(m, m.cutoff())?;
        for (&k, &dim) in &d1.kernel_dims {
            if k <= cutoff && dim > 0 && max_t >= 1 {
                obstructions.insert((1u32, k), dim);
            }
        }
    }
    for t in start_t..=max_t {
        let suspended = n_mod.suspend(i64::from(t - start_t));
        let free = h0r_unstable(&suspended, t, cutoff)?;
        let kz = build_koszul(&free.q, t, cutoff)?;
        for ((h, deg), hom) in koszul_homology(&kz)? {
            if h == t {
                obstructions.insert((t, deg), hom.dim);
            }
        }
    }
    Ok(InstabilityVerdict {
        suspension_unstable: obstructions.is_empty(),
        max_t,
        cutoff,
        obstructions,
    })
}

// ==================== connectivity ====================

/// One row of a connectivity report.
#[derive(Clone, Debug)]
pub struct ConnectivityRow {
    /// Column index.
    pub t: u32,
    /// A-priori floor: the column vanishes in degrees ≤ this bound.
    pub bound: i64,
    /// Lowest populated degree actually observed (`None` for an empty
    /// column).
    pub observed_min: Option<i64>,
}

/// Per-column connectivity floors checked against a computed page.
#[derive(Clone, Debug)]
pub struct ConnectivityTable {
    /// Connectivity of the abutment (classes vanish in degrees ≤ this).
    pub connectivity: i64,
    /// One row per column through [`SSPage::max_t`].
    pub rows: Vec<ConnectivityRow>,
}

/// The a-priori connectivity floor of column `−t` over an abutment of
/// connectivity `c`: with `d = max(c+t+1, −1)`, the column vanishes in
/// degrees ≤ `2^t (d+1) − (t+2)`.
fn connectivity_floor(c: i64, t: u32) -> i64 {
    let d = (c + i64::from(t) + 1).max(-1);
    let pow = 1i64 << t.min(61);
    pow.saturating_mul(d + 1).saturating_sub(i64::from(t) + 2)
}

/// Checks each column of a computed page against its connectivity floor,
/// given the connectivity `c` of the abutment (every class of the abutment
/// sits in degree > `c`).
///
/// The floor also subsumes the necessary condition for the filtration
/// quotients to become unstable after `2^t`-fold suspension: it is never
/// below `−(t+2)`, so a passing column is concentrated in degrees
/// ≥ `−(t+1)` ≥ `−2^t`, as required for `Σ^{2^t} 𝔤𝔯(𝔳_t)` to be unstable.
/// (At `t = 0` the module-level form of that check — `Σ𝔳₀ = ΩN` unstable —
/// is performed by [`ss_desusp2`] itself.)
///
/// # Errors
///
/// [`SsError::Connectivity`] if some class sits at or below its column's
/// floor.
pub fn connectivity_table(page: &SSPage, connectivity: i64) -> Result<ConnectivityTable, SsError> {
    let mut rows = Vec::new();
    for t in 0..=page.max_t() {
        let bound = connectivity_floor(connectivity, t);
        let observed_min = page.column_min(t);
        if let Some(degree) = observed_min {
            if degree <= bound {
                return Err(SsError::Connectivity { t, degree, bound });
            }
        }
        rows.push(ConnectivityRow { t, bound, observed_min });
    }
    Ok(ConnectivityTable { connectivity, rows })
}

// ==================== tests ====================

#[cfg(test)]
mod tests {
    use super::*;
    use crate::steenrod::{dual_free_unstable, FpModule};
    use crate::steinberg::SteinbergSpace;

    #[test]
    fn splitting_recovers_the_small_dual_basis() {
        // Shift 0, degree 3: the two admissible sequences split across two
        // columns; degree 2 splits into the σ-column.
        let (t, pair) = reconstruction_split(&Seq::upper(vec![3]), 0).unwrap();
        assert_eq!((t, pair.label(0).as_str()), (1, "S(3).i[0]"));
        let (t, pair) = reconstruction_split(&Seq::upper(vec![2, 1]), 0).unwrap();
        assert_eq!((t, pair.label(0).as_str()), (0, "Sq(2,1).i[0]"));
        let (t, pair) = reconstruction_split(&Seq::upper(vec![2]), 0).unwrap();
        assert_eq!((t, pair.label(0).as_str()), (1, "S(2).i[0]"));
        // Shift −3: everything lands in the first surviving column t = 2,
        // padded with genuine σ₀ entries when the cut is short.
        let (t, pair) = reconstruction_split(&Seq::empty(), -3).unwrap();
        assert_eq!((t, pair.label(-3).as_str()), (2, "S(0,0).i[-3]"));
        let (t, pair) = reconstruction_split(&Seq::upper(vec![1]), -3).unwrap();
        assert_eq!((t, pair.label(-3).as_str()), (2, "S(1,0).i[-3]"));
        let (t, pair) = reconstruction_split(&Seq::upper(vec![2, 1]), -3).unwrap();
        assert_eq!((t, pair.label(-3).as_str()), (2, "S(2,1).i[-3]"));
    }

    #[test]
    fn dual_page_reconstructs_the_operator_dimensions() {
        for n in 0..=2 {
            let (page, report) = ss_dual_steenrod(n, 14).unwrap();
            assert!(report.split_checked > 0);
            assert!(report.negative_column.is_none());
            for (&k, &(total, target)) in &report.totals {
                assert_eq!(total, target, "n={n} degree {k}");
            }
            assert_eq!(page.infinity_totals().values().sum::<usize>(), report.split_checked);
        }
        let (page, _) = ss_dual_steenrod(0, 14).unwrap();
        assert_eq!(page.labels(1, 2), ["S(2).i[0]"]);
        assert_eq!(page.labels(0, 3), ["Sq(2,1).i[0]"]);
        assert_eq!(page.labels(1, 3), ["S(3).i[0]"]);
        assert_eq!(page.dim(0, 2), 0);
    }

    #[test]
    fn negative_shifts_populate_the_zero_padded_column() {
        let (page, report) = ss_dual_steenrod(-3, 6).unwrap();
        assert_eq!(report.negative_column, Some((2, -3)));
        // Anti-diagonal totals are the dual-algebra dimensions, shifted.
        let expected = [
            (-3, 1),
            (-2, 1),
            (-1, 1),
            (0, 2),
            (1, 2),
            (2, 2),
            (3, 3),
            (4, 4),
            (5, 4),
            (6, 5),
        ];
        for (k, d) in expected {
            assert_eq!(report.totals[&k], (d, d), "degree {k}");
        }
        // Columns below t = 2 vanish identically.
        for row in page.chart_rows() {
            assert!(row.t >= 2, "unexpected cell at t={} degree {}", row.t, row.degree);
        }
        assert_eq!(page.labels(2, -3), ["S(0,0).i[-3]"]);
        let (_, report) = ss_dual_steenrod(-1, 8).unwrap();
        assert_eq!(report.negative_column, Some((0, -1)));
    }

    #[test]
    fn column_dimensions_match_the_steinberg_functor() {
        // Independent oracle: the column basis count must equal the
        // dimension of 𝓛_t applied to the (dual of the) free unstable
        // module on one class of degree n+t, computed as a kernel
        // intersection in the iterated word space.
        for &n in &[-3i64, -1, 0, 2] {
            for t in 0u32..=3 {
                let base = dual_free_unstable(n + i64::from(t) + 1, 15).suspend(-1);
                let space = SteinbergSpace::new(&base, t as usize, 12);
                for k in -5..=12 {
                    assert_eq!(
                        space.dim(k),
                        sigma_pairs(n, t, k).len(),
                        "n={n} t={t} degree {k}"
                    );
                }
            }
        }
    }

    #[test]
    fn desuspension_pages_of_suspensions_sit_in_the_kernel_column() {
        // Σ²F: the bottom column is everything, in degree 0.
        let out = ss_desusp2(&FpModule::sigma_f(2, 12), 10).unwrap();
        assert_eq!(out.page.dim(0, 0), 1);
        assert_eq!(out.totals, BTreeMap::from([(0, (1, 1))]));
        assert_eq!(out.page.max_t(), 0);
        // Σ³F likewise, one degree up.
        let out = ss_desusp2(&FpModule::sigma_f(3, 12), 10).unwrap();
        assert_eq!(out.totals, BTreeMap::from([(1, (1, 1))]));
        // A suspension kills Sq₀, so the kernel column is the whole module.
        let n = dual_free_unstable(1, 8).suspend(1);
        let out = ss_desusp2(&n, 12).unwrap();
        for row in out.page.chart_rows() {
            assert_eq!(row.t, 0, "suspensions have no layer-1 classes");
        }
        for (&k, &(total, target)) in &out.totals {
            assert_eq!(total, target);
            assert_eq!(out.page.dim(0, k), target);
        }
    }

    #[test]
    fn desuspension_page_of_the_truncated_dual_has_three_kernel_cells() {
        let n = dual_free_unstable(1, 8);
        let out = ss_desusp2(&n, 10).unwrap();
        assert_eq!(out.page.cutoff(), 6);
        assert_eq!(out.page.dim(0, -1), 1);
        for k in [0, 2, 6] {
            assert_eq!(out.page.dim(1, k), 1, "kernel cell in degree {k}");
            assert!(out.page.labels(1, k)[0].starts_with("phi("));
        }
        assert_eq!(out.page.infinity_totals().values().sum::<usize>(), 4);
        // Cumulative filtration: 𝔳₀ sees only the bottom cell.
        assert_eq!(out.page.filtration_dim(0, -1), 1);
        assert_eq!(out.page.filtration_dim(1, -1), 1);
        assert_eq!(out.page.filtration_dim(0, 0), 0);
        assert_eq!(out.page.filtration_dim(1, 0), 1);
        assert_eq!(out.boundary_unreliable, Some(6));
    }

    #[test]
    fn instability_certificates_cover_both_presentations() {
        // Σ^{−1}(ΣF) = F is unstable; all Koszul cells vanish.  The window
        // must reach degree 24 for the weight-3 stratum on the doubly
        // suspended module to be visible at all.
        let n1 = FpModule::sigma_f(1, 26);
        let v = instability_test(Presentation::DesuspendedOnce(&n1), 3, 26).unwrap();
        assert!(v.suspension_unstable);
        assert!(v.obstructions.is_empty());
        // Σ^{−2}(Σ²F): same module, presented two steps down.
        let n2 = FpModule::sigma_f(2, 14);
        let v = instability_test(Presentation::DesuspendedTwice(&n2), 2, 14).unwrap();
        assert!(v.suspension_unstable);
        // The truncated dual has a nonzero desuspension kernel: the t = 1
        // cell obstructs, so Σ^{−1}N is not unstable.
        let nd = dual_free_unstable(1, 8);
        let v = instability_test(Presentation::DesuspendedTwice(&nd), 2, 8).unwrap();
        assert!(!v.suspension_unstable);
        assert_eq!(
            v.obstructions,
            BTreeMap::from([((1, 0), 1), ((1, 2), 1), ((1, 6), 1)])
        );
        // Non-unstable input is rejected outright.
        let bad = dual_free_unstable(1, 8).suspend(-1);
        assert!(matches!(
            instability_test(Presentation::DesuspendedOnce(&bad), 2, 8),
            Err(SsError::Destab(_))
        ));
    }

    #[test]
    fn connectivity_floors_are_tight_on_the_dual_family() {
        for n in -2..=2 {
            let (page, _) = ss_dual_steenrod(n, 18).unwrap();
            let table = connectivity_table(&page, n - 1).unwrap();
            assert!(page.max_t() >= 2, "window too small at n={n}");
            for row in &table.rows {
                if let Some(min) = row.observed_min {
                    assert_eq!(min, row.bound + 1, "n={n} t={}", row.t);
                }
            }
        }
    }

    #[test]
    fn connectivity_floors_hold_on_the_desuspension_family() {
        let modules = [
            FpModule::sigma_f(2, 12),
            FpModule::sigma_f(3, 12),
            dual_free_unstable(1, 8).suspend(1),
            dual_free_unstable(1, 8),
        ];
        for m in &modules {
            let out = ss_desusp2(m, 10).unwrap();
            let c = m.min_degree().expect("nonzero module") - 3;
            let table = connectivity_table(&out.page, c).unwrap();
            for row in &table.rows {
                if let Some(min) = row.observed_min {
                    assert!(min > row.bound, "{}: t={}", m.name(), row.t);
                }
            }
        }
    }

    #[test]
    fn page_accounting_is_internally_consistent() {
        let (page, report) = ss_dual_steenrod(1, 16).unwrap();
        let lhs: BTreeMap<i64, usize> =
            report.totals.iter().map(|(&k, &(a, _))| (k, a)).collect();
        assert_eq!(page.infinity_totals(), lhs);
        for row in page.chart_rows() {
            assert_eq!(row.s, -i64::from(row.t));
            assert_eq!(row.dim, page.dim(row.t, row.degree));
            assert_eq!(row.dim, row.labels.split(';').count());
            assert_eq!(page.labels(row.t, row.degree).join(";"), row.labels);
        }
        for (t, k, v) in page.filtration_rows() {
            if t > 0 {
                assert!(v >= page.filtration_dim(t - 1, k), "filtration is monotone");
            }
            assert!(v <= page.filtration_dim(page.max_t(), k));
        }
        for (&k, &(total, _)) in &report.totals {
            assert_eq!(page.filtration_dim(page.max_t(), k), total);
            assert_eq!(page.filtration_dim(page.max_t() + 7, k), total);
        }
    }

    #[test]
    fn column_minima_follow_the_doubling_law() {
        for n in -3..=3 {
            let (page, _) = ss_dual_steenrod(n, 24).unwrap();
            for t in 0..=page.max_t() {
                let Some(min) = page.column_min(t) else { continue };
                let pow = 1i64 << t;
                assert_eq!(
                    min,
                    pow * (n + i64::from(t) + 1) - (i64::from(t) + 1),
                    "n={n} t={t}"
                );
            }
        }
    }
}
