//! Dyer–Lashof operations at the prime 2, modules carrying them, and the
//! free functor on unstable modules.
//!
//! # Indexing conventions
//!
//! An operation `Q^r` raises internal degree by `r`. The *lower-indexed* form
//! is `Q_a x := Q^{a+|x|} x`, of degree `2|x| + a`; the lower index records
//! the deviation from the squaring operation (`Q_0 x` plays the role of the
//! Frobenius `x ↦ x²`). Instability says `Q_a = 0` for `a < 0`.
//!
//! Words compose outermost-first: `Q_J x = Q_{j₁}(Q_{j₂}(… x))`. A word is
//! *allowable* when its lower entries are non-decreasing left to right,
//! equivalently when adjacent upper indices satisfy `r ≤ 2s`. A
//! non-allowable adjacent pair rewrites by the Adem relation
//!
//! ```text
//! Q^r Q^s = Σ_i binom(i−s−1, 2i−r) Q^{r+s−i} Q^i      (r > 2s)
//! ```
//!
//! whose terms for a length-2 word are again allowable in a single pass;
//! inside longer words the rewriting cascades. The right Steenrod action
//! moves through an operation by the Nishida relation
//!
//! ```text
//! (Q^s x)·Sq^r = Σ_i binom(s−r, r−2i) Q^{s−r+i}(x·Sq^i)
//! ```
//!
//! (binomials taken mod 2 with the power-series convention for a negative
//! top entry).
//!
//! # Q-modules
//!
//! A [`QModule`] is an [`FpModule`] whose generators additionally carry a
//! *length* in ℕ, together with tables for the lower operations: `Q_a`
//! raises degree `k` to `2k + a` and raises length by exactly 1. The
//! axioms — Steenrod instability and Adem, Dyer–Lashof Adem, Nishida
//! compatibility — are checked by [`QModule::validate`] within the stored
//! degree window.
//!
//! The free functor [`singer_free`] sends an unstable module `M` to `ℛM`,
//! whose length-`s` component has basis the allowable words `Q_J m` over a
//! basis of `M`; its Steenrod action is filled in by the Nishida relation
//! and its lower operations by left multiplication followed by Adem
//! rewriting. `Q_0 : ℛ_{s−1}M → ℛ_sM` prepends `Q_0`, which keeps words
//! allowable, so `Q_0` is injective on `ℛM`; [`q0_analysis`] packages the
//! kernel and cokernel of `Q_0` on any Q-module, which measure the failure
//! of the module to be a suspension (see the four-term exact sequence
//! `0 → ker → Φ-twist → N → coker → 0` realized there).

use std::collections::{BTreeMap, BTreeSet, HashMap};

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::gf2::{F2Matrix, F2Vec};
use crate::seqcomb::{enumerate_lower_words, lower_degree, lower_to_upper, Seq};
use crate::steenrod::{
    binom_mod2, FpModule, FpModuleRecord, Generator, ModuleError, SqEntry,
};

// ==================== word calculus ====================

/// A formal F₂ sum of operation words (each a `Vec` of indices).
pub type WordSet = BTreeSet<Vec<i64>>;

fn toggle(set: &mut WordSet, w: Vec<i64>) {
    if !set.remove(&w) {
        set.insert(w);
    }
}

/// Expands the non-allowable lower pair `Q_a Q_b` (`a > b`) over a class of
/// degree `m` into allowable lower pairs, dropping terms that are zero by
/// instability. For a pair the Adem relation is allowable in one pass.
pub(crate) fn dl_adem_pair_lower(a: i64, b: i64, m: i64) -> Vec<(i64, i64)> {
    debug_assert!(a > b, "pair ({a},{b}) is already allowable");
    // Upper indices over degree m: inner B = b + m, outer A = a + (2m + b).
    let aa = a + 2 * m + b;
    let bb = b + m;
    debug_assert!(aa > 2 * bb);
    let mut out = Vec::new();
    // binom(i−B−1, 2i−A) ≠ 0 needs 0 ≤ 2i−A ≤ i−B−1 (the top is ≥ 0
    // automatically: 2i ≥ A > 2B gives i > B).
    let lo = (aa + 1).div_euclid(2);
    for i in lo..=(aa - bb - 1) {
        if !binom_mod2(i - bb - 1, 2 * i - aa) {
            continue;
        }
        // Term Q^{A+B−i} Q^i back in lower indexing over m.
        let inner = i - m;
        let outer = aa + bb - 2 * i - m;
        if inner < 0 || outer < 0 {
            continue;
        }
        debug_assert!(outer <= inner, "pair rewriting is allowable in one pass");
        out.push((outer, inner));
    }
    out
}

/// Rewriting engine for lower words over a fixed base degree, with
/// memoization. All mathematical content is the Adem relation plus the
/// instability rule `Q_{a<0} = 0`.
struct LowerNormalizer {
    d: i64,
    memo: HashMap<(i64, Vec<i64>), WordSet>,
    fuel: u64,
}

impl LowerNormalizer {
    fn new(d: i64) -> Self {
        Self { d, memo: HashMap::new(), fuel: 4_000_000 }
    }

    /// `Q_a · w` for an allowable word `w` over `ι_d`, as allowable words.
    fn prepend(&mut self, a: i64, w: &[i64]) -> WordSet {
        if a < 0 {
            return WordSet::new();
        }
        if w.first().is_none_or(|&h| a <= h) {
            let mut word = Vec::with_capacity(w.len() + 1);
            word.push(a);
            word.extend_from_slice(w);
            return WordSet::from([word]);
        }
        let key = (a, w.to_vec());
        if let Some(hit) = self.memo.get(&key) {
            return hit.clone();
        }
        self.fuel -= 1;
        assert!(self.fuel > 0, "Adem rewriting exceeded its work bound (diverging cascade?)");
        let tail = &w[1..];
        let m = lower_degree(tail, self.d);
        let mut acc = WordSet::new();
        for (outer, inner) in dl_adem_pair_lower(a, w[0], m) {
            for w1 in self.prepend(inner, tail) {
                for w2 in self.prepend(outer, &w1) {
                    toggle(&mut acc, w2);
                }
            }
        }
        self.memo.insert(key, acc.clone());
        acc
    }

    /// Full evaluation of an arbitrary lower word (entries of any sign),
    /// innermost operation first.
    fn normalize(&mut self, word: &[i64]) -> WordSet {
        let mut acc = WordSet::from([Vec::new()]);
        for &a in word.iter().rev() {
            let mut next = WordSet::new();
            for w in &acc {
                for w2 in self.prepend(a, w) {
                    toggle(&mut next, w2);
                }
            }
            acc = next;
        }
        acc
    }
}

/// Evaluates the lower word `Q_{j₁}…Q_{j_s}` on a class of degree
/// `base_degree`: the result as a set of allowable lower words (F₂
/// coefficients), empty when the value is zero.
#[must_use]
pub fn evaluate_lower(word: &[i64], base_degree: i64) -> WordSet {
    LowerNormalizer::new(base_degree).normalize(word)
}

/// Presents the lower word `Q_J` on a class of degree `base_degree` in upper
/// indexing, without Adem rewriting: `None` when some lower index is
/// negative (the value is zero by instability). Each `j_t` *is* the lower
/// index at its stage of application, so this is the one instability check.
#[must_use]
pub fn act_lower(word: &[i64], base_degree: i64) -> Option<Seq> {
    if word.iter().any(|&j| j < 0) {
        return None;
    }
    Some(lower_to_upper(&Seq::lower_dl(word.to_vec()), base_degree))
}

/// Converts an upper word over a class of degree `base_degree` to lower
/// indexing (entries may come out negative; no rewriting).
#[must_use]
pub fn upper_to_lower(word: &[i64], base_degree: i64) -> Vec<i64> {
    let s = word.len();
    let mut j = vec![0i64; s];
    let mut deg = base_degree;
    for t in (0..s).rev() {
        j[t] = word[t] - deg;
        deg += word[t];
    }
    debug_assert_eq!(lower_to_upper(&Seq::lower_dl(j.clone()), base_degree).entries(), word);
    j
}

/// Rewrites the upper word `Q^{α₁}…Q^{α_s}` applied to a class of degree
/// `base_degree` into its allowable normal form (upper words, F₂
/// coefficients). Words that are zero by instability at any stage are
/// dropped; the empty set is the zero value. Idempotent on allowable words.
#[must_use]
pub fn dl_adem_reduce(word: &[i64], base_degree: i64) -> WordSet {
    let lower = upper_to_lower(word, base_degree);
    let reduced = evaluate_lower(&lower, base_degree);
    reduced
        .into_iter()
        .map(|j| {
            debug_assert_eq!(
                lower_degree(&j, base_degree),
                lower_degree(&lower, base_degree),
                "rewriting preserves degree"
            );
            lower_to_upper(&Seq::lower_dl(j), base_degree).entries().to_vec()
        })
        .collect()
}

// ==================== formal elements ====================

/// A formal F₂-sum of upper-indexed operation words applied to labelled
/// classes of known degree. The empty sum is zero. Normalized elements
/// (the output of [`dl_adem_reduce`], [`nishida_act`], or
/// [`DLElement::normalize`]) contain only allowable, instability-clean
/// words.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct DLElement {
    /// Terms `(upper word, base label, base degree)`.
    pub terms: BTreeSet<(Vec<i64>, String, i64)>,
}

impl DLElement {
    /// The zero element.
    #[must_use]
    pub fn zero() -> Self {
        Self::default()
    }

    /// A single un-normalized word over a labelled class.
    #[must_use]
    pub fn single(word: Vec<i64>, label: impl Into<String>, degree: i64) -> Self {
        Self { terms: BTreeSet::from([(word, label.into(), degree)]) }
    }

    /// Whether the element is zero.
    #[must_use]
    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// Adem normal form: every word allowable and instability-clean.
    #[must_use]
    pub fn normalize(&self) -> Self {
        let mut out = BTreeSet::new();
        for (word, label, degree) in &self.terms {
            for w in dl_adem_reduce(word, *degree) {
                let t = (w, label.clone(), *degree);
                if !out.remove(&t) {
                    out.insert(t);
                }
            }
        }
        Self { terms: out }
    }
}

/// Applies `Sq^r` to a formal sum of words over classes of `m` by the
/// Nishida relation, recursively through each word, returning allowable
/// normal form. `r = 0` is the identity (normalized); `r < 0` is zero.
///
/// # Panics
///
/// If a term's label is not a basis label of `m` or its degree disagrees.
#[must_use]
pub fn nishida_act(m: &FpModule, el: &DLElement, r: i64) -> DLElement {
    if r < 0 {
        return DLElement::zero();
    }
    let mut ctx = NishidaCtx { m, memo: HashMap::new(), norms: HashMap::new() };
    let mut out: BTreeSet<(Vec<i64>, String, i64)> = BTreeSet::new();
    for (word, label, degree) in &el.terms {
        let gi = m.index_of(label).expect("base label is a basis label of the module");
        assert_eq!(
            m.generators()[gi].degree,
            *degree,
            "declared base degree disagrees with the module"
        );
        let lower = upper_to_lower(word, *degree);
        let terms = if r == 0 {
            ctx.norms
                .entry(*degree)
                .or_insert_with(|| LowerNormalizer::new(*degree))
                .normalize(&lower)
                .into_iter()
                .map(|w| (w, gi))
                .collect()
        } else {
            ctx.sq_word(&lower, gi, r)
        };
        for (jw, gg) in terms {
            let g = &m.generators()[gg];
            let upper = lower_to_upper(&Seq::lower_dl(jw), g.degree).entries().to_vec();
            let t = (upper, g.label.clone(), g.degree);
            if !out.remove(&t) {
                out.insert(t);
            }
        }
    }
    DLElement { terms: out }
}

// ==================== Q-modules ====================

/// A generator of a [`QModule`]: label, internal degree, and length.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct QGenerator {
    /// Unique label within the module.
    pub label: String,
    /// Internal degree.
    pub degree: i64,
    /// Length grading (number of generating operations applied).
    pub length: u32,
}

/// Errors from [`QModule`] constructors.
#[derive(Debug, Error, PartialEq, Eq)]
pub enum QModuleError {
    /// The underlying Steenrod-module data is malformed.
    #[error(transparent)]
    Module(#[from] ModuleError),
    /// A lower-operation entry references an unknown label.
    #[error("unknown label {0:?} in Q table")]
    UnknownQLabel(String),
    /// A stored lower operation has a negative index (such operations are
    /// zero by instability and must not be stored).
    #[error("negative lower index {a} on {src:?}")]
    NegativeLowerIndex {
        /// Source label.
        src: String,
        /// Offending index.
        a: i64,
    },
    /// A record is missing the length of a generator.
    #[error("no length recorded for generator {0:?}")]
    MissingLength(String),
    /// A subspace fed to [`QModule::q_submodule`]/[`QModule::q_quotient`]
    /// mixes lengths within one vector, so no length grading is induced.
    #[error("subspace vector in degree {degree} mixes lengths")]
    MixedLength {
        /// Degree of the offending vector.
        degree: i64,
    },
    /// A span is not closed under the lower operations.
    #[error("span is not Q-closed: Q_{a} exits the span in degree {degree}")]
    QNotClosed {
        /// Source degree.
        degree: i64,
        /// Offending operation index.
        a: i64,
    },
}

/// Failures reported by [`QModule::validate`].
#[derive(Debug, Error, PartialEq, Eq)]
pub enum QValidationError {
    /// The Steenrod action alone is invalid.
    #[error(transparent)]
    Steenrod(#[from] ModuleError),
    /// A `Q_a` entry lands in the wrong degree.
    #[error("Q_{a} on {src:?} (degree {src_degree}) hits {dst:?} in degree {dst_degree}, expected {expected}")]
    QDegree {
        /// Source label.
        src: String,
        /// Operation index.
        a: i64,
        /// Source degree.
        src_degree: i64,
        /// Target label.
        dst: String,
        /// Target degree found.
        dst_degree: i64,
        /// Required target degree `2·src + a`.
        expected: i64,
    },
    /// A `Q_a` entry does not raise length by exactly 1.
    #[error("Q_{a} on {src:?} (length {src_length}) hits {dst:?} of length {dst_length}")]
    QLength {
        /// Source label.
        src: String,
        /// Operation index.
        a: i64,
        /// Source length.
        src_length: u32,
        /// Target label.
        dst: String,
        /// Target length found.
        dst_length: u32,
    },
    /// The Nishida relation fails on a generator.
    #[error("Nishida relation fails: (Q_{a} {src:?})·Sq^{r}")]
    Nishida {
        /// Source label.
        src: String,
        /// Lower operation index.
        a: i64,
        /// Steenrod operation index.
        r: i64,
    },
    /// A Dyer–Lashof Adem relation fails on a generator.
    #[error("Adem relation fails: Q_{a} Q_{b} {src:?}")]
    Adem {
        /// Source label.
        src: String,
        /// Outer (larger) index.
        a: i64,
        /// Inner index.
        b: i64,
    },
}

/// An unstable module with lower Dyer–Lashof operations and a length grading.
///
/// Wraps an [`FpModule`] (same generator indexing) plus: `lengths[i]` is the
/// length of generator `i`, and the `q` table stores `Q_a` on each generator
/// (absent rows are the zero map — in particular everything beyond the
/// degree window, and `Q_a` for `a < 0`, which is never stored).
#[derive(Clone, Debug)]
pub struct QModule {
    fp: FpModule,
    lengths: Vec<u32>,
    q: BTreeMap<(usize, i64), Vec<usize>>,
    by_len_degree: BTreeMap<(u32, i64), Vec<usize>>,
}

fn build_cells(fp: &FpModule, lengths: &[u32]) -> BTreeMap<(u32, i64), Vec<usize>> {
    let mut cells: BTreeMap<(u32, i64), Vec<usize>> = BTreeMap::new();
    for (i, g) in fp.generators().iter().enumerate() {
        cells.entry((lengths[i], g.degree)).or_default().push(i);
    }
    cells
}

impl QModule {
    /// Builds a Q-module from labelled tables.
    ///
    /// Structural requirements (duplicate labels, label resolution, Steenrod
    /// degree bookkeeping, `a ≥ 0`) are enforced here; the graded axioms
    /// (degree/length arithmetic of `Q_a`, Adem, Nishida) are checked by
    /// [`QModule::validate`] so that planted violations can be diagnosed.
    ///
    /// # Errors
    ///
    /// [`QModuleError`] on malformed tables.
    pub fn new(
        name: impl Into<String>,
        cutoff: i64,
        generators: Vec<QGenerator>,
        sq_by_label: &[(String, i64, Vec<String>)],
        q_by_label: &[(String, i64, Vec<String>)],
        flags: BTreeMap<String, bool>,
    ) -> Result<Self, QModuleError> {
        let mut length_of: HashMap<String, u32> = HashMap::new();
        let gens: Vec<Generator> = generators
            .into_iter()
            .map(|g| {
                length_of.insert(g.label.clone(), g.length);
                Generator { label: g.label, degree: g.degree }
            })
            .collect();
        let fp = FpModule::new(name, cutoff, gens, sq_by_label, flags)?;
        let lengths: Vec<u32> =
            fp.generators().iter().map(|g| length_of[&g.label]).collect();
        let index: HashMap<&str, usize> = fp
            .generators()
            .iter()
            .enumerate()
            .map(|(i, g)| (g.label.as_str(), i))
            .collect();
        // Resolve and parity-merge the Q table.
        let mut q: BTreeMap<(usize, i64), Vec<usize>> = BTreeMap::new();
        for (src, a, dsts) in q_by_label {
            let &si = index
                .get(src.as_str())
                .ok_or_else(|| QModuleError::UnknownQLabel(src.clone()))?;
            if *a < 0 {
                return Err(QModuleError::NegativeLowerIndex { src: src.clone(), a: *a });
            }
            let row = q.entry((si, *a)).or_default();
            for dst in dsts {
                let &di = index
                    .get(dst.as_str())
                    .ok_or_else(|| QModuleError::UnknownQLabel(dst.clone()))?;
                row.push(di);
            }
        }
        let q: BTreeMap<(usize, i64), Vec<usize>> = q
            .into_iter()
            .filter_map(|(k, mut row)| {
                row.sort_unstable();
                let mut kept = Vec::new();
                let mut i = 0;
                while i < row.len() {
                    let mut j = i;
                    while j < row.len() && row[j] == row[i] {
                        j += 1;
                    }
                    if (j - i) % 2 == 1 {
                        kept.push(row[i]);
                    }
                    i = j;
                }
                if kept.is_empty() { None } else { Some((k, kept)) }
            })
            .collect();
        let by_len_degree = build_cells(&fp, &lengths);
        Ok(Self { fp, lengths, q, by_len_degree })
    }

    /// Equips an unstable module with the trivial (zero) lower operations,
    /// concentrated in length 0.
    #[must_use]
    pub fn triv(m: &FpModule) -> Self {
        let fp = m.clone().renamed(format!("triv({})", m.name()));
        let lengths = vec![0u32; fp.generators().len()];
        let by_len_degree = build_cells(&fp, &lengths);
        Self { fp, lengths, q: BTreeMap::new(), by_len_degree }
    }

    /// The underlying unstable module (same generator indexing).
    #[must_use]
    pub fn fp(&self) -> &FpModule {
        &self.fp
    }

    /// Sets or clears a flag on the underlying module (e.g. to mark a
    /// window-derived module as complete when that is known externally).
    pub fn set_flag(&mut self, key: impl Into<String>, value: bool) {
        self.fp.set_flag(key, value);
    }

    /// Module name.
    #[must_use]
    pub fn name(&self) -> &str {
        self.fp.name()
    }

    /// Degree window bound.
    #[must_use]
    pub fn cutoff(&self) -> i64 {
        self.fp.cutoff()
    }

    /// Length of generator `i`.
    #[must_use]
    pub fn length_of(&self, i: usize) -> u32 {
        self.lengths[i]
    }

    /// Lengths of all generators, parallel to `fp().generators()`.
    #[must_use]
    pub fn lengths(&self) -> &[u32] {
        &self.lengths
    }

    /// Largest generator length, if any generators exist.
    #[must_use]
    pub fn max_length(&self) -> Option<u32> {
        self.lengths.iter().copied().max()
    }

    /// Generator indices per `(length, degree)` cell, ascending.
    #[must_use]
    pub fn cells(&self) -> &BTreeMap<(u32, i64), Vec<usize>> {
        &self.by_len_degree
    }

    /// Dimension of the `(length, degree)` cell.
    #[must_use]
    pub fn dim_in_cell(&self, length: u32, degree: i64) -> usize {
        self.by_len_degree.get(&(length, degree)).map_or(0, Vec::len)
    }

    /// The stored lower-operation table, `(source index, a) → targets`.
    #[must_use]
    pub fn q_table(&self) -> &BTreeMap<(usize, i64), Vec<usize>> {
        &self.q
    }

    /// Applies `Q_a` to a vector in global coordinates (`a < 0` gives 0).
    #[must_use]
    pub fn q_act(&self, x: &F2Vec, a: i64) -> F2Vec {
        let mut out = F2Vec::zero();
        if a < 0 {
            return out;
        }
        for &i in x.support() {
            if let Some(dsts) = self.q.get(&(i as usize, a)) {
                for &d in dsts {
                    out.toggle(d as u32);
                }
            }
        }
        out
    }

    /// Matrix of `Q_a` from the `(from_length, from_degree)` cell to the
    /// `(from_length+1, 2·from_degree+a)` cell, rows and columns in the
    /// cells' ascending generator order. Presumes a validated module (rows
    /// landing outside the target cell are ignored).
    #[must_use]
    pub fn q_matrix(&self, a: i64, from_length: u32, from_degree: i64) -> F2Matrix {
        let empty = Vec::new();
        let srcs = self.by_len_degree.get(&(from_length, from_degree)).unwrap_or(&empty);
        let tgts = self
            .by_len_degree
            .get(&(from_length + 1, 2 * from_degree + a))
            .unwrap_or(&empty);
        let mut rows = Vec::with_capacity(srcs.len());
        for &s in srcs {
            let img = self.q_act(&F2Vec::unit(s as u32), a);
            let mut row = F2Vec::zero();
            for &t in img.support() {
                if let Ok(pos) = tgts.binary_search(&(t as usize)) {
                    row.toggle(pos as u32);
                } else {
                    debug_assert!(false, "Q_{a} left its target cell");
                }
            }
            rows.push(row);
        }
        F2Matrix::from_rows(rows, tgts.len())
    }

    /// The length-`s` component as an unstable module (the Steenrod action
    /// preserves length).
    #[must_use]
    pub fn length_component(&self, s: u32) -> FpModule {
        let keep: Vec<usize> = (0..self.lengths.len()).filter(|&i| self.lengths[i] == s).collect();
        let keep_set: BTreeSet<usize> = keep.iter().copied().collect();
        let gens: Vec<Generator> =
            keep.iter().map(|&i| self.fp.generators()[i].clone()).collect();
        let record = FpModuleRecord::from(&self.fp);
        let mut sq_rows = Vec::new();
        for entry in record.sq {
            let Some(si) = self.fp.index_of(&entry.src) else { continue };
            if !keep_set.contains(&si) {
                continue;
            }
            let dsts: Vec<String> = entry
                .dst
                .into_iter()
                .filter(|l| self.fp.index_of(l).is_some_and(|di| keep_set.contains(&di)))
                .collect();
            if !dsts.is_empty() {
                sq_rows.push((entry.src, entry.r, dsts));
            }
        }
        FpModule::new(
            format!("{}<{}>", self.fp.name(), s),
            self.fp.cutoff(),
            gens,
            &sq_rows,
            self.fp.flags().clone(),
        )
        .expect("a length stratum of consistent data is consistent")
    }

    /// Shifts the length grading by `l` (degrees untouched).
    ///
    /// # Panics
    ///
    /// If a shifted length would be negative.
    #[must_use]
    pub fn shift_length(&self, l: i64) -> QModule {
        let lengths: Vec<u32> = self
            .lengths
            .iter()
            .map(|&s| {
                let v = i64::from(s) + l;
                assert!(v >= 0, "length shift by {l} makes a negative length");
                u32::try_from(v).expect("length fits u32")
            })
            .collect();
        let by_len_degree = build_cells(&self.fp, &lengths);
        Self { fp: self.fp.clone(), lengths, q: self.q.clone(), by_len_degree }
    }

    /// The Frobenius twist: degrees double, `Sq^{2r}` acts as `Sq^r` did,
    /// `Q_{2a}` acts as `Q_a` did (odd-indexed operations vanish), lengths
    /// are unchanged.
    #[must_use]
    pub fn phi_q(&self) -> QModule {
        let fp = self.fp.phi();
        debug_assert!(
            fp.generators()
                .iter()
                .zip(self.fp.generators())
                .all(|(a, b)| a.label == b.label),
            "the twist preserves generator order"
        );
        let q: BTreeMap<(usize, i64), Vec<usize>> =
            self.q.iter().map(|(&(s, a), d)| ((s, 2 * a), d.clone())).collect();
        let by_len_degree = build_cells(&fp, &self.lengths);
        Self { fp, lengths: self.lengths.clone(), q, by_len_degree }
    }

    /// Restricts the window to `new_cutoff`: generators above it are
    /// dropped, as are operation rows whose target exceeds it.
    #[must_use]
    pub fn truncate(&self, new_cutoff: i64) -> QModule {
        let fp = self.fp.truncate(new_cutoff);
        let mut lengths = Vec::with_capacity(fp.generators().len());
        let mut old_of_new: HashMap<usize, usize> = HashMap::new();
        for (ni, g) in fp.generators().iter().enumerate() {
            let oi = self.fp.index_of(&g.label).expect("truncation keeps labels");
            lengths.push(self.lengths[oi]);
            old_of_new.insert(oi, ni);
        }
        let new_of_old: HashMap<usize, usize> = old_of_new.into_iter().collect();
        let mut q = BTreeMap::new();
        for (&(src, a), dsts) in &self.q {
            let Some(&ns) = new_of_old.get(&src) else { continue };
            let nd: Vec<usize> =
                dsts.iter().filter_map(|d| new_of_old.get(d).copied()).collect();
            // A Q row raises degree, so targets drop out before sources; a
            // partially-dropped row means the target degree is outside the
            // new window and the whole row is unknown there.
            if nd.len() == dsts.len() && !nd.is_empty() {
                let mut nd = nd;
                nd.sort_unstable();
                q.insert((ns, a), nd);
            }
        }
        let by_len_degree = build_cells(&fp, &lengths);
        Self { fp, lengths, q, by_len_degree }
    }

    /// Checks the graded axioms within the stored window: the Steenrod
    /// axioms on the underlying module, degree/length bookkeeping of every
    /// stored `Q_a` row, the Nishida relation on every generator, and the
    /// Dyer–Lashof Adem relations on composites. Missing rows are the zero
    /// map, so all checks are complete exactly within the window.
    ///
    /// # Errors
    ///
    /// The first failure found, as a [`QValidationError`] witness.
    pub fn validate(&self) -> Result<(), QValidationError> {
        self.fp.validate()?;
        let gens = self.fp.generators();
        // Bookkeeping of stored rows.
        for (&(src, a), dsts) in &self.q {
            let sk = gens[src].degree;
            for &d in dsts {
                if gens[d].degree != 2 * sk + a {
                    return Err(QValidationError::QDegree {
                        src: gens[src].label.clone(),
                        a,
                        src_degree: sk,
                        dst: gens[d].label.clone(),
                        dst_degree: gens[d].degree,
                        expected: 2 * sk + a,
                    });
                }
                if self.lengths[d] != self.lengths[src] + 1 {
                    return Err(QValidationError::QLength {
                        src: gens[src].label.clone(),
                        a,
                        src_length: self.lengths[src],
                        dst: gens[d].label.clone(),
                        dst_length: self.lengths[d],
                    });
                }
            }
        }
        let cutoff = self.fp.cutoff();
        let min_deg = self.fp.min_degree().unwrap_or(0);
        // Nishida: (Q_a x)·Sq^r = Σ_i binom(a+|x|−r, r−2i) Q_{a−r+2i}(x·Sq^i).
        for (x, g) in gens.iter().enumerate() {
            let k = g.degree;
            let unit = F2Vec::unit(x as u32);
            for a in 0..=(cutoff - 2 * k) {
                let qa_x = self.q_act(&unit, a);
                for r in 1..=(2 * k + a - min_deg).max(0) {
                    let lhs = self.fp.act(&qa_x, r);
                    let mut rhs = F2Vec::zero();
                    for i in 0..=r / 2 {
                        if !binom_mod2(a + k - r, r - 2 * i) {
                            continue;
                        }
                        let ap = a - r + 2 * i;
                        if ap < 0 {
                            continue;
                        }
                        let xi = self.fp.act(&unit, i);
                        rhs.add_assign(&self.q_act(&xi, ap));
                    }
                    if lhs != rhs {
                        return Err(QValidationError::Nishida {
                            src: g.label.clone(),
                            a,
                            r,
                        });
                    }
                }
            }
        }
        // Adem: Q_a Q_b x (a > b ≥ 0) equals its allowable expansion.
        for (x, g) in gens.iter().enumerate() {
            let m = g.degree;
            let unit = F2Vec::unit(x as u32);
            let mut b = 0i64;
            while 4 * m + 3 * b < cutoff {
                let qb_x = self.q_act(&unit, b);
                for a in (b + 1)..=(cutoff - 4 * m - 2 * b) {
                    let lhs = self.q_act(&qb_x, a);
                    let mut rhs = F2Vec::zero();
                    for (outer, inner) in dl_adem_pair_lower(a, b, m) {
                        let qi = self.q_act(&unit, inner);
                        rhs.add_assign(&self.q_act(&qi, outer));
                    }
                    if lhs != rhs {
                        return Err(QValidationError::Adem { src: g.label.clone(), a, b });
                    }
                }
                b += 1;
            }
        }
        Ok(())
    }

    /// The sub-Q-module spanned by `vectors` (global coordinates, each
    /// homogeneous in degree *and* length), with induced operations.
    ///
    /// # Errors
    ///
    /// [`QModuleError::MixedLength`] if a spanning vector mixes lengths;
    /// [`QModuleError::QNotClosed`]/[`ModuleError::NotClosed`] if the span
    /// is not closed under the operations.
    pub fn q_submodule(
        &self,
        name: impl Into<String>,
        vectors: &[F2Vec],
        prefix: &str,
    ) -> Result<QModule, QModuleError> {
        let parts = self.fp.submodule_parts(name, vectors, 0, prefix)?;
        let cutoff = self.fp.cutoff();
        // Length of each new generator, and Q-closure with induced rows.
        let mut length_by_label: HashMap<String, u32> = HashMap::new();
        for (&d, e) in &parts.ech {
            for (j, v) in e.basis().iter().enumerate() {
                length_by_label
                    .insert(parts.labels[&(d, j)].clone(), self.vector_length(v, d)?);
            }
        }
        let mut q_rows: Vec<(String, i64, Vec<String>)> = Vec::new();
        for (&d, e) in &parts.ech {
            for (j, v) in e.basis().iter().enumerate() {
                for a in 0..=(cutoff - 2 * d) {
                    let img = self.q_act(v, a);
                    if img.is_zero() {
                        continue;
                    }
                    let coords = parts
                        .ech
                        .get(&(2 * d + a))
                        .and_then(|t| t.coords(&img))
                        .ok_or(QModuleError::QNotClosed { degree: d, a })?;
                    let dsts: Vec<String> = coords
                        .support()
                        .iter()
                        .map(|&c| parts.labels[&(2 * d + a, c as usize)].clone())
                        .collect();
                    q_rows.push((parts.labels[&(d, j)].clone(), a, dsts));
                }
            }
        }
        Self::attach(parts.module, &length_by_label, &q_rows)
    }

    /// The quotient of this module by the span of `sub_vectors` (global
    /// coordinates, each homogeneous in degree and length), with induced
    /// operations on coset representatives.
    ///
    /// # Errors
    ///
    /// As for [`QModule::q_submodule`].
    pub fn q_quotient(
        &self,
        name: impl Into<String>,
        sub_vectors: &[F2Vec],
        prefix: &str,
    ) -> Result<QModule, QModuleError> {
        let cutoff = self.fp.cutoff();
        let parts = self.fp.quotient_parts(name, sub_vectors, 0, prefix)?;
        // Length homogeneity and Q-closure of the subspace.
        for (&d, e) in &parts.sub {
            for v in e.basis() {
                self.vector_length(v, d)?;
                for a in 0..=(cutoff - 2 * d) {
                    let img = self.q_act(v, a);
                    if img.is_zero() {
                        continue;
                    }
                    let inside =
                        parts.sub.get(&(2 * d + a)).is_some_and(|t| t.contains(&img));
                    if !inside {
                        return Err(QModuleError::QNotClosed { degree: d, a });
                    }
                }
            }
        }
        let empty = crate::gf2::Echelon::new(self.fp.generators().len());
        let mut length_by_label: HashMap<String, u32> = HashMap::new();
        let mut q_rows: Vec<(String, i64, Vec<String>)> = Vec::new();
        for (&d, reps) in &parts.reps {
            for (j, &rep) in reps.iter().enumerate() {
                let label = parts.labels[&(d, j)].clone();
                length_by_label.insert(label.clone(), self.lengths[rep as usize]);
                let unit = F2Vec::unit(rep);
                for a in 0..=(cutoff - 2 * d) {
                    let img = self.q_act(&unit, a);
                    if img.is_zero() {
                        continue;
                    }
                    let td = 2 * d + a;
                    let residue = parts.sub.get(&td).unwrap_or(&empty).reduce_vec(&img);
                    if residue.is_zero() {
                        continue;
                    }
                    let treps = &parts.reps[&td];
                    let dsts: Vec<String> = residue
                        .support()
                        .iter()
                        .map(|&c| {
                            let pos = treps
                                .binary_search(&c)
                                .expect("residue is supported on representatives");
                            parts.labels[&(td, pos)].clone()
                        })
                        .collect();
                    q_rows.push((label.clone(), a, dsts));
                }
            }
        }
        Self::attach(parts.module, &length_by_label, &q_rows)
    }

    /// Length of a homogeneous vector in degree `d`, requiring all support
    /// in a single length.
    fn vector_length(&self, v: &F2Vec, d: i64) -> Result<u32, QModuleError> {
        let mut it = v.support().iter();
        let Some(&first) = it.next() else {
            return Err(QModuleError::MixedLength { degree: d });
        };
        let s = self.lengths[first as usize];
        if it.any(|&c| self.lengths[c as usize] != s) {
            return Err(QModuleError::MixedLength { degree: d });
        }
        Ok(s)
    }

    /// Attaches lengths and Q rows to a finished Steenrod module.
    fn attach(
        fp: FpModule,
        length_by_label: &HashMap<String, u32>,
        q_rows: &[(String, i64, Vec<String>)],
    ) -> Result<QModule, QModuleError> {
        let lengths: Vec<u32> =
            fp.generators().iter().map(|g| length_by_label[&g.label]).collect();
        let index: HashMap<&str, usize> = fp
            .generators()
            .iter()
            .enumerate()
            .map(|(i, g)| (g.label.as_str(), i))
            .collect();
        let mut q: BTreeMap<(usize, i64), Vec<usize>> = BTreeMap::new();
        for (src, a, dsts) in q_rows {
            let si = *index.get(src.as_str()).ok_or_else(|| {
                QModuleError::UnknownQLabel(src.clone())
            })?;
            let mut row: Vec<usize> = dsts
                .iter()
                .map(|l| {
                    index
                        .get(l.as_str())
                        .copied()
                        .ok_or_else(|| QModuleError::UnknownQLabel(l.clone()))
                })
                .collect::<Result<_, _>>()?;
            row.sort_unstable();
            q.insert((si, *a), row);
        }
        let by_len_degree = build_cells(&fp, &lengths);
        Ok(QModule { fp, lengths, q, by_len_degree })
    }
}

// ==================== the free functor ====================

fn fmt_word(j: &[i64]) -> String {
    let inner: Vec<String> = j.iter().map(ToString::to_string).collect();
    format!("Q({})", inner.join(","))
}

/// A basis term of a free module: (allowable lower word, base generator
/// index).
type FreeTerm = (Vec<i64>, usize);

/// Nishida-recursion context for filling the Steenrod action on free
/// modules.
struct NishidaCtx<'a> {
    m: &'a FpModule,
    memo: HashMap<(Vec<i64>, usize, i64), BTreeSet<FreeTerm>>,
    norms: HashMap<i64, LowerNormalizer>,
}

impl NishidaCtx<'_> {
    fn prepend(&mut self, a: i64, w: &[i64], base_degree: i64) -> WordSet {
        self.norms
            .entry(base_degree)
            .or_insert_with(|| LowerNormalizer::new(base_degree))
            .prepend(a, w)
    }

    /// `(Q_J x_g)·Sq^r` as allowable terms.
    fn sq_word(&mut self, j: &[i64], g: usize, r: i64) -> BTreeSet<FreeTerm> {
        if r < 0 {
            return BTreeSet::new();
        }
        if r == 0 {
            return BTreeSet::from([(j.to_vec(), g)]);
        }
        if j.is_empty() {
            return self
                .m
                .act(&F2Vec::unit(g as u32), r)
                .support()
                .iter()
                .map(|&d| (Vec::new(), d as usize))
                .collect();
        }
        let key = (j.to_vec(), g, r);
        if let Some(hit) = self.memo.get(&key) {
            return hit.clone();
        }
        let tail = &j[1..];
        let w_deg = lower_degree(tail, self.m.generators()[g].degree);
        let mut acc: BTreeSet<FreeTerm> = BTreeSet::new();
        for i in 0..=r / 2 {
            // Upper index of the head operation is j₁ + |w|; the Nishida
            // binomial top is (j₁ + |w|) − r.
            if !binom_mod2(j[0] + w_deg - r, r - 2 * i) {
                continue;
            }
            let ap = j[0] - r + 2 * i;
            if ap < 0 {
                continue;
            }
            for (jw, gg) in self.sq_word(tail, g, i) {
                let base = self.m.generators()[gg].degree;
                for word in self.prepend(ap, &jw, base) {
                    let t = (word, gg);
                    if !acc.remove(&t) {
                        acc.insert(t);
                    }
                }
            }
        }
        self.memo.insert(key, acc.clone());
        acc
    }
}

/// The free Q-module `ℛM` on an unstable module, through length
/// `max_length` and degree `cutoff`.
///
/// The length-`s` stratum has basis the allowable words `Q_J m` (`J`
/// non-decreasing, entries ≥ 0) over the basis of `M`, labelled
/// `Q(j₁,…,j_s).{base label}` (length 0 keeps the base labels). The
/// Steenrod action is filled by the Nishida relation, the lower operations
/// by left multiplication with Adem rewriting. The result is always marked
/// as a window (`truncated`): the free module itself is unbounded.
///
/// # Panics
///
/// If a base label starts with `Q(` (would collide with word labels).
#[must_use]
pub fn singer_free(m: &FpModule, max_length: u32, cutoff: i64) -> QModule {
    assert!(max_length <= 30, "length {max_length} out of scale");
    assert!(
        m.generators().iter().all(|g| !g.label.starts_with("Q(")),
        "base labels must not start with 'Q('"
    );
    let cutoff = if m.flags().get("truncated").copied().unwrap_or(false) {
        cutoff.min(m.cutoff())
    } else {
        cutoff
    };
    let non_dec = |w: &[i64]| w.windows(2).all(|p| p[0] <= p[1]);
    // Basis: (word, base index, label, degree, length).
    let mut basis: Vec<(Vec<i64>, usize, String, i64, u32)> = Vec::new();
    for s in 0..=max_length {
        for (gi, g) in m.generators().iter().enumerate() {
            let start = g.degree * (1i64 << s);
            for deg in start..=cutoff {
                for j in enumerate_lower_words(s as usize, g.degree, deg, non_dec) {
                    let label = if s == 0 {
                        g.label.clone()
                    } else {
                        format!("{}.{}", fmt_word(j.entries()), g.label)
                    };
                    basis.push((j.entries().to_vec(), gi, label, deg, s));
                }
            }
        }
    }
    let key_to_label: HashMap<(Vec<i64>, usize), String> = basis
        .iter()
        .map(|(j, gi, label, _, _)| ((j.clone(), *gi), label.clone()))
        .collect();
    let min_out = basis.iter().map(|b| b.3).min().unwrap_or(0);

    let mut ctx = NishidaCtx { m, memo: HashMap::new(), norms: HashMap::new() };
    let mut sq_rows: Vec<(String, i64, Vec<String>)> = Vec::new();
    let mut q_rows: Vec<(String, i64, Vec<String>)> = Vec::new();
    for (j, gi, label, deg, s) in &basis {
        for r in 1..=(deg - min_out).max(0) {
            let img = ctx.sq_word(j, *gi, r);
            if img.is_empty() {
                continue;
            }
            let dsts: Vec<String> = img
                .iter()
                .map(|(jw, gg)| {
                    key_to_label
                        .get(&(jw.clone(), *gg))
                        .expect("Nishida terms stay within the enumerated window")
                        .clone()
                })
                .collect();
            sq_rows.push((label.clone(), r, dsts));
        }
        if *s < max_length {
            let dg = m.generators()[*gi].degree;
            for a in 0..=(cutoff - 2 * deg) {
                let words = ctx.prepend(a, j, dg);
                if words.is_empty() {
                    continue;
                }
                let dsts: Vec<String> = words
                    .iter()
                    .map(|w| {
                        key_to_label
                            .get(&(w.clone(), *gi))
                            .expect("rewritten words stay within the enumerated window")
                            .clone()
                    })
                    .collect();
                q_rows.push((label.clone(), a, dsts));
            }
        }
    }
    let qgens: Vec<QGenerator> = basis
        .into_iter()
        .map(|(_, _, label, degree, length)| QGenerator { label, degree, length })
        .collect();
    let mut flags = m.flags().clone();
    flags.insert("truncated".into(), true);
    // The free module escapes the unstable range in negative degrees, and
    // its strata beyond `max_length` exist but are not stored.
    flags.insert("general".into(), true);
    flags.insert("length_truncated".into(), true);
    let built = QModule::new(format!("R({})", m.name()), cutoff, qgens, &sq_rows, &q_rows, flags)
        .expect("free construction produces consistent tables");
    #[cfg(debug_assertions)]
    built.validate().expect("free construction satisfies the axioms");
    built
}

// ==================== Q₀ analysis ====================

/// Kernel/cokernel data of `Q_0` on a Q-module: the two (de)suspension
/// trackers and the image subspaces.
///
/// `Q_0` is the length-raising map `N⟨s⟩_k → N⟨s+1⟩_{2k}`, assembled here as
/// a map from the length-shifted Frobenius twist `(ΦN)(1)` to `N`. The exact
/// sequence `0 → qsusp1 → (ΦN)(1) → N → qsusp → 0` realizes both functors
/// that measure how far `N` is from being a suspension.
#[derive(Clone, Debug)]
pub struct Q0Analysis {
    /// Rank of `Q_0 : N⟨s⟩_k → N⟨s+1⟩_{2k}` keyed by the *source* `(s, k)`.
    pub ranks: BTreeMap<(u32, i64), usize>,
    /// Image basis of `Q_0` per *target* `(length, degree)` cell, in global
    /// coordinates of `n`.
    pub im_q: BTreeMap<(u32, i64), Vec<F2Vec>>,
    /// Cokernel of `Q_0`, as a quotient Q-module of `n` (the desuspended
    /// left-adjoint value of the suspension on `n`).
    pub qsusp: QModule,
    /// Kernel of `Q_0`, as a sub-Q-module of the length-shifted twist
    /// `(ΦN)(1)` (the desuspended derived value).
    pub qsusp1: QModule,
}

/// Computes [`Q0Analysis`] for a validated Q-module.
///
/// For a windowed (`truncated`) module the kernel side is exact only where
/// the target of `Q_0` is inside the window, so `qsusp1` is clipped to the
/// module's own cutoff; the cokernel is complete through the cutoff as-is.
/// Similarly, for a module flagged `length_truncated` the top stored length
/// stratum is skipped as a source (its `Q_0` lands in an unstored stratum).
///
/// # Errors
///
/// [`QModuleError`] if the image is not closed under the operations (the
/// module fails its axioms).
pub fn q0_analysis(n: &QModule) -> Result<Q0Analysis, QModuleError> {
    let windowed = n.fp().flags().get("truncated").copied().unwrap_or(false);
    let len_windowed =
        n.fp().flags().get("length_truncated").copied().unwrap_or(false);
    let top_length = n.max_length().unwrap_or(0);
    let cutoff = n.cutoff();
    let mut ranks = BTreeMap::new();
    let mut im_q: BTreeMap<(u32, i64), Vec<F2Vec>> = BTreeMap::new();
    let mut all_img: Vec<F2Vec> = Vec::new();
    let mut ker_vectors: Vec<F2Vec> = Vec::new();
    for (&(s, k), idxs) in n.cells() {
        if (windowed && 2 * k > cutoff) || (len_windowed && s == top_length) {
            continue;
        }
        let mat = n.q_matrix(0, s, k);
        let red = mat.reduce();
        ranks.insert((s, k), red.rank);
        if red.rank > 0 {
            let mut cell_img = Vec::new();
            for &i in idxs {
                let img = n.q_act(&F2Vec::unit(i as u32), 0);
                if !img.is_zero() {
                    cell_img.push(img);
                }
            }
            im_q.entry((s + 1, 2 * k)).or_default().extend(cell_img.iter().cloned());
            all_img.extend(cell_img);
        }
        for kv in &red.kernel {
            // Cell coordinates → global coordinates (same generator indices
            // in n and in its twist).
            let mut v = F2Vec::zero();
            for &c in kv.support() {
                v.toggle(idxs[c as usize] as u32);
            }
            ker_vectors.push(v);
        }
    }
    let qsusp = n.q_quotient(format!("coker_q0({})", n.name()), &all_img, "c")?;
    let ambient = n.phi_q().shift_length(1);
    let mut qsusp1 =
        ambient.q_submodule(format!("ker_q0({})", n.name()), &ker_vectors, "k")?;
    if windowed {
        qsusp1 = qsusp1.truncate(cutoff);
    }
    Ok(Q0Analysis { ranks, im_q, qsusp, qsusp1 })
}

// ==================== wire form ====================

/// One lower-operation row of a [`QModuleRecord`].
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct QEntry {
    /// Source label.
    pub src: String,
    /// Lower operation index (≥ 0).
    pub a: i64,
    /// Target labels (nonempty, sorted).
    pub dst: Vec<String>,
}

/// Wire form of a [`QModule`] (strict field set): the unstable-module
/// fields plus the length map and the lower-operation table.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct QModuleRecord {
    /// Module name.
    pub name: String,
    /// Degree window bound.
    pub cutoff: i64,
    /// Generators with labels and degrees.
    pub generators: Vec<Generator>,
    /// Steenrod action table.
    pub sq: Vec<SqEntry>,
    /// Length of each generator, by label.
    pub length: BTreeMap<String, u32>,
    /// Lower-operation table.
    pub q: Vec<QEntry>,
    /// Presentation flags.
    pub flags: BTreeMap<String, bool>,
}

impl From<&QModule> for QModuleRecord {
    fn from(n: &QModule) -> Self {
        let base = FpModuleRecord::from(n.fp());
        let gens = n.fp().generators();
        let length: BTreeMap<String, u32> = gens
            .iter()
            .enumerate()
            .map(|(i, g)| (g.label.clone(), n.lengths[i]))
            .collect();
        let q: Vec<QEntry> = n
            .q
            .iter()
            .map(|(&(si, a), dsts)| QEntry {
                src: gens[si].label.clone(),
                a,
                dst: dsts.iter().map(|&d| gens[d].label.clone()).collect(),
            })
            .collect();
        QModuleRecord {
            name: base.name,
            cutoff: base.cutoff,
            generators: base.generators,
            sq: base.sq,
            length,
            q,
            flags: base.flags,
        }
    }
}

impl TryFrom<QModuleRecord> for QModule {
    type Error = QModuleError;

    fn try_from(r: QModuleRecord) -> Result<Self, Self::Error> {
        let qgens: Vec<QGenerator> = r
            .generators
            .into_iter()
            .map(|g| {
                let length = r
                    .length
                    .get(&g.label)
                    .copied()
                    .ok_or_else(|| QModuleError::MissingLength(g.label.clone()))?;
                Ok(QGenerator { label: g.label, degree: g.degree, length })
            })
            .collect::<Result<_, QModuleError>>()?;
        let sq_rows: Vec<(String, i64, Vec<String>)> =
            r.sq.into_iter().map(|e| (e.src, e.r, e.dst)).collect();
        let q_rows: Vec<(String, i64, Vec<String>)> =
            r.q.into_iter().map(|e| (e.src, e.a, e.dst)).collect();
        QModule::new(r.name, r.cutoff, qgens, &sq_rows, &q_rows, r.flags)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::steenrod::dual_free_unstable;

    // ---------- word calculus ----------

    fn assert_allowable_clean(words: &WordSet, d: i64) {
        for w in words {
            assert!(w.windows(2).all(|p| p[0] <= p[1]), "{w:?} not allowable");
            assert!(w.iter().all(|&j| j >= 0), "{w:?} not instability-clean");
            let _ = d;
        }
    }

    #[test]
    fn adem_reduce_known_values() {
        // Q¹Q⁰ on ι₀: the Adem sum is empty, so the value is zero.
        assert!(dl_adem_reduce(&[1, 0], 0).is_empty());
        // Q⁵Q¹ on ι₀ rewrites to Q³Q³.
        assert_eq!(dl_adem_reduce(&[5, 1], 0), WordSet::from([vec![3, 3]]));
        // Allowable, instability-clean words are fixed points.
        assert_eq!(dl_adem_reduce(&[3, 3], 0), WordSet::from([vec![3, 3]]));
        assert_eq!(dl_adem_reduce(&[6, 4], 1), WordSet::from([vec![6, 4]]));
        // Allowable as a word, but the outer lower index over ι₁ is
        // 2 − 5 = −3, so the value dies by instability.
        assert!(dl_adem_reduce(&[2, 4], 1).is_empty());
        // Squaring compatibility: Q^{2i} Q_0 x = Q_0 Q^i x, i.e. over a base
        // class of degree m the word (2i, m) normalizes to (m+i, i) when
        // i > m, and Q^r Q_0 x = 0 for odd r > 2m.
        for m in 0..=4i64 {
            for i in (m + 1)..=(m + 5) {
                assert_eq!(
                    dl_adem_reduce(&[2 * i, m], m),
                    WordSet::from([vec![m + i, i]]),
                    "i={i}, m={m}"
                );
            }
            for r in (2 * m + 1)..=(4 * m + 7) {
                if r % 2 == 1 {
                    assert!(dl_adem_reduce(&[r, m], m).is_empty(), "r={r}, m={m}");
                }
            }
        }
        // Instability at an inner stage: Q^i ι_d = 0 for i < d.
        assert!(dl_adem_reduce(&[8, 1], 2).is_empty());
    }

    #[test]
    fn act_lower_presents_without_rewriting() {
        assert_eq!(act_lower(&[0], 0).unwrap().entries(), &[0]);
        assert_eq!(act_lower(&[2, 1], 0).unwrap().entries(), &[3, 1]);
        assert!(act_lower(&[-1], 5).is_none());
        assert!(act_lower(&[2, -1, 3], 0).is_none());
        // The Adem normal form of that presented word is zero.
        assert!(dl_adem_reduce(&[3, 1], 0).is_empty());
    }

    #[test]
    fn evaluate_lower_confluence_randomized() {
        // Expanding a random non-allowable adjacent pair first, then
        // normalizing, gives the same value as normalizing directly.
        let mut state = 0x9e3779b97f4a7c15u64;
        let mut rnd = move |m: u64| {
            state ^= state << 13;
            state ^= state >> 7;
            state ^= state << 17;
            state % m
        };
        let mut tested = 0;
        for _ in 0..4000 {
            let d = rnd(4) as i64 - 1;
            let len = 2 + rnd(3) as usize;
            let word: Vec<i64> = (0..len).map(|_| rnd(9) as i64 - 1).collect();
            // Pick a non-allowable adjacent pair with both entries ≥ 0.
            let spots: Vec<usize> = (0..len - 1)
                .filter(|&p| word[p] > word[p + 1] && word[p + 1] >= 0 && word[p] >= 0)
                .collect();
            if spots.is_empty() {
                continue;
            }
            let p = spots[rnd(spots.len() as u64) as usize];
            let m = lower_degree(&word[p + 2..], d);
            let direct = evaluate_lower(&word, d);
            let mut via_pair = WordSet::new();
            for (outer, inner) in dl_adem_pair_lower(word[p], word[p + 1], m) {
                let mut w = word.clone();
                w[p] = outer;
                w[p + 1] = inner;
                for t in evaluate_lower(&w, d) {
                    toggle(&mut via_pair, t);
                }
            }
            assert_eq!(direct, via_pair, "word {word:?} split at {p}, d={d}");
            assert_allowable_clean(&direct, d);
            for w in &direct {
                assert_eq!(lower_degree(w, d), lower_degree(&word, d));
            }
            tested += 1;
        }
        assert!(tested >= 300, "only {tested} informative cases");
    }

    // ---------- free modules ----------

    #[test]
    fn singer_free_dimensions_match_combinatorics() {
        // Against a brute-force count of non-decreasing J with
        // Σ 2^{k−1} j_k = degree − 2^s d.
        for d in [-1i64, 0, 2] {
            let cutoff = 14 + 4 * d.abs();
            let n = singer_free(&FpModule::sigma_f(d, cutoff), 3, cutoff);
            for s in 0u32..=3 {
                // Minimum degree of the stratum is 2^s d (all indices zero).
                let min = n
                    .cells()
                    .iter()
                    .filter(|((l, _), _)| *l == s)
                    .map(|((_, k), _)| *k)
                    .min()
                    .unwrap();
                assert_eq!(min, d * (1 << s), "connectivity of stratum {s}, d={d}");
                for deg in (d * (1 << s))..=cutoff {
                    let mut count = 0usize;
                    let target = deg - (d << s);
                    match s {
                        0 => count = usize::from(target == 0),
                        1 => count = usize::from(target >= 0),
                        2 => {
                            for j2 in 0..=target / 2 {
                                let j1 = target - 2 * j2;
                                if j1 <= j2 {
                                    count += 1;
                                }
                            }
                        }
                        3 => {
                            for j3 in 0..=target / 4 {
                                for j2 in 0..=(target - 4 * j3) / 2 {
                                    let j1 = target - 4 * j3 - 2 * j2;
                                    if j1 <= j2 && j2 <= j3 {
                                        count += 1;
                                    }
                                }
                            }
                        }
                        _ => unreachable!(),
                    }
                    assert_eq!(
                        n.dim_in_cell(s, deg),
                        count,
                        "stratum {s} degree {deg} over d={d}"
                    );
                }
            }
        }
    }

    #[test]
    fn singer_free_known_actions_and_validity() {
        let n = singer_free(&FpModule::sigma_f(0, 12), 3, 12);
        n.validate().unwrap();
        let fpm = n.fp();
        // (Q₂ι)·Sq¹ = Q₁ι and (Q₃ι)·Sq¹ = 0 (lower = upper over ι₀).
        let q2 = fpm.index_of("Q(2).iota").unwrap();
        let q1 = fpm.index_of("Q(1).iota").unwrap();
        assert_eq!(fpm.act(&F2Vec::unit(q2 as u32), 1), F2Vec::unit(q1 as u32));
        let q3 = fpm.index_of("Q(3).iota").unwrap();
        assert!(fpm.act(&F2Vec::unit(q3 as u32), 1).is_zero());
        // A base module at the edge of the unstable range.
        singer_free(&FpModule::sigma_f(-1, 9), 3, 9).validate().unwrap();
        // A base module with a nontrivial Steenrod action feeding the
        // Nishida recursion.
        let base = dual_free_unstable(1, 16);
        singer_free(&base, 2, 16).validate().unwrap();
    }

    #[test]
    fn squaring_is_dl_linear() {
        // Sq₀∘Q_a = Q_{a/2}∘Sq₀ for even a, and 0 for odd a, as matrices on
        // every cell of a free module.
        for n in [singer_free(&FpModule::sigma_f(2, 20), 3, 20), singer_free(&dual_free_unstable(1, 18), 2, 18)]
        {
            let cutoff = n.cutoff();
            for (&(s, k), idxs) in n.cells() {
                for a in 0..=(cutoff - 2 * k) {
                    let tk = 2 * k + a;
                    if 2 * tk > cutoff || 2 * k > cutoff {
                        continue;
                    }
                    for &i in idxs {
                        let x = F2Vec::unit(i as u32);
                        let lhs = sq0(n.fp(), &n.q_act(&x, a), tk);
                        let rhs = if a % 2 == 0 {
                            n.q_act(&sq0(n.fp(), &x, k), a / 2)
                        } else {
                            F2Vec::zero()
                        };
                        assert_eq!(lhs, rhs, "cell ({s},{k}), a={a}");
                    }
                }
            }
        }
    }

    #[test]
    fn nishida_act_known_values_and_coherence() {
        let m = FpModule::sigma_f(0, 12);
        // (Q²ι₀)·Sq¹ = Q¹ι₀ (only i = 0 survives; binom(1,1) = 1).
        let q2 = DLElement::single(vec![2], "iota", 0);
        assert_eq!(nishida_act(&m, &q2, 1), DLElement::single(vec![1], "iota", 0));
        // (Q³ι₀)·Sq¹ = 0 (binom(2,1) ≡ 0 mod 2).
        let q3 = DLElement::single(vec![3], "iota", 0);
        assert!(nishida_act(&m, &q3, 1).is_zero());
        // Mixed-relation coherence: Sq^a then Sq^b agrees with the Steenrod
        // Adem expansion of Sq^aSq^b acting on words over ι₀.
        for word in [vec![4i64], vec![5, 2], vec![6, 3]] {
            let el = DLElement::single(word, "iota", 0).normalize();
            for b in 1i64..=3 {
                for a in 1..2 * b {
                    let lhs = nishida_act(&m, &nishida_act(&m, &el, a), b);
                    let mut rhs = DLElement::zero();
                    for c in 0..=a / 2 {
                        if !binom_mod2(b - c - 1, a - 2 * c) {
                            continue;
                        }
                        for t in nishida_act(&m, &nishida_act(&m, &el, a + b - c), c).terms
                        {
                            if !rhs.terms.remove(&t) {
                                rhs.terms.insert(t);
                            }
                        }
                    }
                    assert_eq!(lhs, rhs, "Sq^{a}Sq^{b} on {:?}", el);
                }
            }
        }
        // r = 0 normalizes, r < 0 kills.
        let raw = DLElement::single(vec![5, 1], "iota", 0);
        assert_eq!(nishida_act(&m, &raw, 0), DLElement::single(vec![3, 3], "iota", 0));
        assert!(nishida_act(&m, &raw, -1).is_zero());
    }

    #[test]
    fn free_functor_is_additive_degreewise() {
        // ℛ_s of a direct sum splits: dimensions add per (length, degree).
        let cutoff = 14;
        let a = FpModule::sigma_f(0, cutoff);
        let b = FpModule::sigma_f(2, cutoff).renamed("b");
        let both = FpModule::direct_sum("a+b", &[&a.clone().renamed("a"), &b]);
        let ra = singer_free(&a, 3, cutoff);
        let rb = singer_free(&b, 3, cutoff);
        let rboth = singer_free(&both, 3, cutoff);
        for s in 0..=3u32 {
            for deg in 0..=cutoff {
                assert_eq!(
                    rboth.dim_in_cell(s, deg),
                    ra.dim_in_cell(s, deg) + rb.dim_in_cell(s, deg),
                    "cell ({s},{deg})"
                );
            }
        }
    }

    /// Sq₀ on a global vector of known degree: x·Sq^{k/2} for even k ≥ 0.
    fn sq0(m: &FpModule, x: &F2Vec, k: i64) -> F2Vec {
        if x.is_zero() {
            return F2Vec::zero();
        }
        if k % 2 != 0 || k < 0 {
            return F2Vec::zero();
        }
        m.act(x, k / 2)
    }

    // ---------- Q₀ ----------

    #[test]
    fn q0_injective_with_shifted_free_cokernel() {
        // On ℛΣ^dF: Q₀ is injective, and the cokernel matches the
        // desuspension of ℛΣ^{d+1}F cell by cell: words with all indices
        // ≥ 1 shift down to words over a base one degree higher.
        for d in [0i64, 1] {
            let cutoff = 16;
            let n = singer_free(&FpModule::sigma_f(d, cutoff), 3, cutoff);
            let an = q0_analysis(&n).unwrap();
            for &(s, k) in n.cells().keys() {
                if 2 * k > cutoff || s == 3 {
                    continue;
                }
                let mat = n.q_matrix(0, s, k);
                assert_eq!(mat.reduce().kernel.len(), 0, "Q₀ kernel at ({s},{k})");
            }
            assert_eq!(an.qsusp1.fp().total_dim(), 0, "d={d}");
            let shifted = singer_free(&FpModule::sigma_f(d + 1, cutoff + 1), 3, cutoff + 1);
            for (&(s, k), idxs) in an.qsusp.cells() {
                assert_eq!(
                    shifted.dim_in_cell(s, k + 1),
                    idxs.len(),
                    "coker cell ({s},{k}), d={d}"
                );
            }
            for (&(s, k), idxs) in shifted.cells() {
                if k - 1 > cutoff || s > 3 {
                    continue;
                }
                assert_eq!(
                    an.qsusp.dim_in_cell(s, k - 1),
                    idxs.len(),
                    "shifted cell ({s},{k}), d={d}"
                );
            }
            an.qsusp.validate().unwrap();
            an.qsusp1.validate().unwrap();
            if d == 0 {
                // Spot check: the image of Q₀ in the (length 2, degree 2)
                // cell is 1-dimensional (Q₀Q₁ι), matching the rank of the
                // twist cell it maps from.
                assert_eq!(an.im_q[&(2, 2)].len(), 1);
                assert_eq!(an.ranks[&(1, 1)], 1);
            }
        }
    }

    #[test]
    fn q0_on_trivial_splits() {
        // Trivial operations: kernel is the whole twist, cokernel the whole
        // module.
        let m = dual_free_unstable(2, 10);
        let n = QModule::triv(&m);
        n.validate().unwrap();
        let an = q0_analysis(&n).unwrap();
        assert_eq!(an.qsusp.fp().hilbert(), m.hilbert());
        let twist = m.phi().truncate(10);
        assert_eq!(an.qsusp1.fp().hilbert(), twist.hilbert());
        assert!(an.qsusp1.lengths().iter().all(|&s| s == 1));
        assert!(an.im_q.is_empty());
    }

    // ---------- wire form ----------

    #[test]
    fn record_round_trip_and_planted_violations() {
        let n = singer_free(&FpModule::sigma_f(0, 8), 2, 8);
        let rec = QModuleRecord::from(&n);
        let back = QModule::try_from(rec.clone()).unwrap();
        assert_eq!(QModuleRecord::from(&back), rec);
        back.validate().unwrap();
        let js = serde_json::to_string(&rec).unwrap();
        let rec2: QModuleRecord = serde_json::from_str(&js).unwrap();
        assert_eq!(rec2, rec);

        // Planted length violation: Q₀ hitting a generator of length 0.
        let bad = QModule::new(
            "bad",
            4,
            vec![
                QGenerator { label: "x".into(), degree: 1, length: 0 },
                QGenerator { label: "y".into(), degree: 2, length: 0 },
            ],
            &[],
            &[("x".into(), 0, vec!["y".into()])],
            BTreeMap::new(),
        )
        .unwrap();
        match bad.validate() {
            Err(QValidationError::QLength { src, a, .. }) => {
                assert_eq!(src, "x");
                assert_eq!(a, 0);
            }
            other => panic!("expected a length witness, got {other:?}"),
        }

        // Negative lower index is rejected at construction.
        let neg = QModule::new(
            "neg",
            4,
            vec![QGenerator { label: "x".into(), degree: 1, length: 0 }],
            &[],
            &[("x".into(), -1, vec!["x".into()])],
            BTreeMap::new(),
        );
        assert!(matches!(neg, Err(QModuleError::NegativeLowerIndex { a: -1, .. })));

        // Unknown field in the wire form is rejected.
        let bad_json = r#"{"name":"x","cutoff":3,"generators":[],"sq":[],"length":{},"q":[],"flags":{},"extra":1}"#;
        assert!(serde_json::from_str::<QModuleRecord>(bad_json).is_err());
    }

    #[test]
    fn length_components_and_matrices() {
        let n = singer_free(&FpModule::sigma_f(0, 10), 2, 10);
        // Strata are valid unstable modules partitioning the whole.
        let mut total = 0;
        for s in 0..=2u32 {
            let comp = n.length_component(s);
            comp.validate().unwrap();
            total += comp.total_dim();
        }
        assert_eq!(total, n.fp().total_dim());
        // Q-matrix shapes agree with the cells.
        for (&(s, k), idxs) in n.cells() {
            for a in 0..=(n.cutoff() - 2 * k) {
                let mat = n.q_matrix(a, s, k);
                assert_eq!(mat.nrows(), idxs.len());
                assert_eq!(mat.ncols(), n.dim_in_cell(s + 1, 2 * k + a));
            }
        }
    }
}
