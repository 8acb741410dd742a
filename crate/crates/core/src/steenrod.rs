//! Steenrod operations on finite modules, in homological (right-action)
//! convention.
//!
//! An [`FpModule`] is a finite-dimensional graded F₂ vector space with a
//! right action of the mod-2 Steenrod operations: `x·Sq^r` has degree
//! `|x| − r`, and instability means `x·Sq^r = 0` whenever `2r > |x|`.
//! Composition reads left to right: `x·(Sq^a Sq^b) = (x·Sq^a)·Sq^b`.
//!
//! # Operations
//!
//! * [`binom_mod2`] — binomial coefficients mod 2 for arbitrary integer
//!   upper index (coefficient of `t^k` in `(1+t)^n`).
//! * [`adem_reduce`] — rewrites a composite `Sq^{a₁}…Sq^{a_s}` into the
//!   admissible basis using `Sq^a Sq^b = Σ_c binom(b−c−1, a−2c)
//!   Sq^{a+b−c} Sq^c` for `a < 2b`.
//! * [`FpModule`] — construction ([`FpModule::sigma_f`], suspension, direct
//!   sum, truncation, [`FpModule::phi`]), the action, and
//!   [`FpModule::validate`] which checks grading, instability and all Adem
//!   relations on the stored data.
//! * [`dual_free_unstable`] — the degreewise dual of the free unstable
//!   module on one generator of degree `n`, as a right module (the action is
//!   the transpose of the left action on the admissible basis).
//! * [`FpModule::loops`] — the two loop functors `Ω`, `Ω₁` from the kernel
//!   and cokernel of the halving operator `Sq₀ x = x·Sq^{|x|/2}` (zero on odd
//!   degrees), packaged with the coordinates needed for further analysis.
//! * [`FpModule::check_loop_identity`] — the Hilbert series identity
//!   `H_M(t) − H_M(t²) = t·(H_{ΩM}(t) − H_{Ω₁M}(t))`.
//! * [`FpModule::deloop_ss`] — the delooping spectral sequence of a
//!   0-connected module, computed exactly from the interval decomposition
//!   (barcode) of the Sq₀ towers `… → M_{4m} → M_{2m} → M_m` over odd `m`.
//!
//! # Determinism
//!
//! Generators are kept sorted by (degree, label); all maps use `BTreeMap`;
//! serialization order is therefore stable across runs.

use std::collections::{BTreeMap, BTreeSet};

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::gf2::{Echelon, F2Matrix, F2Vec};

// ==================== binomials mod 2 ====================

/// Coefficient of `t^k` in `(1+t)^n` over F₂, for any integer `n` and `k`.
///
/// `k < 0` gives 0. For `n ≥ 0` this is Lucas' rule `(n & k) == k`; for
/// `n < 0`, `binom(n,k) ≡ binom(k−n−1, k) (mod 2)`.
#[must_use]
pub fn binom_mod2(n: i64, k: i64) -> bool {
    if k < 0 {
        return false;
    }
    if n >= 0 {
        (n & k) == k
    } else {
        let m = k - n - 1; // ≥ k ≥ 0
        (m & k) == k
    }
}

// ==================== Adem rewriting ====================

/// Rewrites the composite `Sq^{a₁}…Sq^{a_s}` (word entries left to right)
/// into a sum of admissible words, returned as a sorted set (F₂
/// coefficients). Entries equal to 0 are the identity and are dropped; a
/// negative entry makes the whole word zero.
///
/// The relation used for an inadmissible adjacent pair `a < 2b` is
/// `Sq^a Sq^b = Σ_{c=0}^{⌊a/2⌋} binom(b−c−1, a−2c) Sq^{a+b−c} Sq^c`.
#[must_use]
pub fn adem_reduce(word: &[i64]) -> BTreeSet<Vec<i64>> {
    let mut out = BTreeSet::new();
    if word.iter().any(|&a| a < 0) {
        return out;
    }
    let cleaned: Vec<i64> = word.iter().copied().filter(|&a| a > 0).collect();
    let mut acc = BTreeSet::new();
    acc.insert(Vec::new());
    // Fold from the right, keeping `acc` a set of admissible words.
    for &a in cleaned.iter().rev() {
        let mut next = BTreeSet::new();
        for w in &acc {
            for t in prepend_sq(a, w) {
                toggle(&mut next, t);
            }
        }
        acc = next;
    }
    out.extend(acc);
    out
}

fn toggle(set: &mut BTreeSet<Vec<i64>>, w: Vec<i64>) {
    if !set.remove(&w) {
        set.insert(w);
    }
}

/// `Sq^a · w` for admissible `w`, as a sum of admissible words (`a ≥ 1`).
fn prepend_sq(a: i64, w: &[i64]) -> BTreeSet<Vec<i64>> {
    debug_assert!(a >= 1);
    let mut out = BTreeSet::new();
    if w.is_empty() || a >= 2 * w[0] {
        let mut v = Vec::with_capacity(w.len() + 1);
        v.push(a);
        v.extend_from_slice(w);
        out.insert(v);
        return out;
    }
    let b = w[0];
    let rest = &w[1..];
    for c in 0..=(a / 2) {
        if !binom_mod2(b - c - 1, a - 2 * c) {
            continue;
        }
        // Sq^{a+b−c} Sq^c rest: first reduce Sq^c·rest, then prepend the
        // outer factor (which may itself be inadmissible against the heads).
        let inner: BTreeSet<Vec<i64>> = if c == 0 {
            let mut s = BTreeSet::new();
            s.insert(rest.to_vec());
            s
        } else {
            prepend_sq(c, rest)
        };
        for v in inner {
            for t in prepend_sq(a + b - c, &v) {
                toggle(&mut out, t);
            }
        }
    }
    out
}

// ==================== FpModule ====================

/// A named generator: label and internal degree.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Generator {
    /// Unique label within the module.
    pub label: String,
    /// Internal degree.
    pub degree: i64,
}

/// Output of [`FpModule::submodule_parts`]: the submodule together with the
/// data identifying its generators inside the ambient module.
pub(crate) struct SubmoduleParts {
    /// The submodule itself.
    pub module: FpModule,
    /// Per-degree reduced echelon of the span; row `j` of degree `d` is the
    /// generator labelled `labels[&(d, j)]`, as an ambient vector.
    pub ech: BTreeMap<i64, Echelon>,
    /// Label of each `(ambient degree, echelon row)` generator.
    pub labels: BTreeMap<(i64, usize), String>,
}

/// Output of [`FpModule::quotient_parts`]: the quotient together with the
/// data identifying its generators as ambient coset representatives.
pub(crate) struct QuotientParts {
    /// The quotient module itself.
    pub module: FpModule,
    /// Per-degree echelon of the subspace divided out.
    pub sub: BTreeMap<i64, Echelon>,
    /// Per ambient degree: global columns (ascending) whose cosets are the
    /// quotient generators; position `j` is the generator `labels[&(d, j)]`.
    pub reps: BTreeMap<i64, Vec<u32>>,
    /// Label of each `(ambient degree, position)` generator.
    pub labels: BTreeMap<(i64, usize), String>,
}

/// Errors reported by [`FpModule::validate`] and constructors.
#[derive(Debug, Error, PartialEq, Eq)]
pub enum ModuleError {
    /// Two generators share a label.
    #[error("duplicate generator label {0:?}")]
    DuplicateLabel(String),
    /// An action entry references an unknown label.
    #[error("unknown label {0:?} in action table")]
    UnknownLabel(String),
    /// An action entry has a non-positive operation index.
    #[error("operation index {r} on {src:?} must be ≥ 1")]
    BadOperation {
        /// Source label.
        src: String,
        /// Offending index.
        r: i64,
    },
    /// A target's degree is not source degree − r.
    #[error("degree mismatch: {src:?}·Sq^{r} hits {dst:?} of degree {got}, expected {expected}")]
    DegreeMismatch {
        /// Source label.
        src: String,
        /// Operation index.
        r: i64,
        /// Target label.
        dst: String,
        /// Target's actual degree.
        got: i64,
        /// Required degree.
        expected: i64,
    },
    /// A stored entry violates instability `2r > |x| ⟹ x·Sq^r = 0`.
    #[error("instability violation: {src:?} of degree {degree} carries Sq^{r}")]
    Instability {
        /// Source label.
        src: String,
        /// Source degree.
        degree: i64,
        /// Offending operation.
        r: i64,
    },
    /// An Adem relation fails on a generator.
    #[error("Adem relation Sq^{a} Sq^{b} fails on {src:?}")]
    AdemViolation {
        /// Source label.
        src: String,
        /// First (smaller) index, `a < 2b`.
        a: i64,
        /// Second index.
        b: i64,
    },
    /// A generator lies above the stated cutoff.
    #[error("generator {0:?} lies above the cutoff")]
    AboveCutoff(String),
    /// Operation requires a 0-connected module.
    #[error("module {0:?} is not 0-connected (class in degree ≤ 0)")]
    NotConnected(String),
    /// A claimed submodule is not closed under the action.
    #[error("span is not closed under the action (degree {0}, Sq^{1})")]
    NotClosed(i64, i64),
}

/// A finite graded F₂ vector space with a right Steenrod action.
///
/// Complete through internal degrees ≤ `cutoff` (the action always lowers
/// degree, so a degreewise-truncated-from-above window is exact).
#[derive(Clone, Debug)]
pub struct FpModule {
    name: String,
    cutoff: i64,
    generators: Vec<Generator>,
    /// `(source index, r) → sorted target indices`, only `r ≥ 1` and nonzero
    /// rows stored.
    sq: BTreeMap<(usize, i64), Vec<usize>>,
    flags: BTreeMap<String, bool>,
    /// Generator indices per degree (all consecutive since sorted).
    by_degree: BTreeMap<i64, Vec<usize>>,
}

impl FpModule {
    /// Builds a module; generators are sorted by (degree, label) and the
    /// action table re-indexed accordingly.
    ///
    /// # Errors
    ///
    /// [`ModuleError::DuplicateLabel`], [`ModuleError::UnknownLabel`],
    /// [`ModuleError::BadOperation`], [`ModuleError::AboveCutoff`].
    pub fn new(
        name: impl Into<String>,
        cutoff: i64,
        mut generators: Vec<Generator>,
        sq_by_label: &[(String, i64, Vec<String>)],
        flags: BTreeMap<String, bool>,
    ) -> Result<Self, ModuleError> {
        generators.sort_by(|a, b| (a.degree, &a.label).cmp(&(b.degree, &b.label)));
        let mut index: BTreeMap<&str, usize> = BTreeMap::new();
        for (i, g) in generators.iter().enumerate() {
            if index.insert(&g.label, i).is_some() {
                return Err(ModuleError::DuplicateLabel(g.label.clone()));
            }
            if g.degree > cutoff {
                return Err(ModuleError::AboveCutoff(g.label.clone()));
            }
        }
        let mut sq: BTreeMap<(usize, i64), Vec<usize>> = BTreeMap::new();
        for (src, r, dsts) in sq_by_label {
            let &si = index
                .get(src.as_str())
                .ok_or_else(|| ModuleError::UnknownLabel(src.clone()))?;
            if *r < 1 {
                return Err(ModuleError::BadOperation { src: src.clone(), r: *r });
            }
            let targets = sq.entry((si, *r)).or_default();
            for d in dsts {
                let &di = index
                    .get(d.as_str())
                    .ok_or_else(|| ModuleError::UnknownLabel(d.clone()))?;
                targets.push(di);
            }
        }
        // Repeated targets cancel over F₂ (entries may be split across rows).
        sq.retain(|_, targets| {
            targets.sort_unstable();
            let mut merged = Vec::with_capacity(targets.len());
            let mut i = 0;
            while i < targets.len() {
                let mut j = i;
                while j < targets.len() && targets[j] == targets[i] {
                    j += 1;
                }
                if (j - i) % 2 == 1 {
                    merged.push(targets[i]);
                }
                i = j;
            }
            *targets = merged;
            !targets.is_empty()
        });
        let mut by_degree: BTreeMap<i64, Vec<usize>> = BTreeMap::new();
        for (i, g) in generators.iter().enumerate() {
            by_degree.entry(g.degree).or_default().push(i);
        }
        Ok(Self { name: name.into(), cutoff, generators, sq, flags, by_degree })
    }

    /// The zero module.
    #[must_use]
    pub fn zero(name: impl Into<String>, cutoff: i64) -> Self {
        Self::new(name, cutoff, Vec::new(), &[], BTreeMap::new()).expect("empty module is valid")
    }

    /// One class in degree `d`, labeled `iota`, zero action.
    #[must_use]
    pub fn sigma_f(d: i64, cutoff: i64) -> Self {
        Self::new(
            format!("SF[{d}]"),
            cutoff.max(d),
            vec![Generator { label: "iota".into(), degree: d }],
            &[],
            BTreeMap::new(),
        )
        .expect("one-class module is valid")
    }

    /// Module name.
    #[must_use]
    pub fn name(&self) -> &str {
        &self.name
    }

    /// Renames in place (returns self for chaining).
    #[must_use]
    pub fn renamed(mut self, name: impl Into<String>) -> Self {
        self.name = name.into();
        self
    }

    /// Degree window bound: data is complete for degrees ≤ cutoff.
    #[must_use]
    pub fn cutoff(&self) -> i64 {
        self.cutoff
    }

    /// Flags map (presentation metadata such as `truncated`).
    #[must_use]
    pub fn flags(&self) -> &BTreeMap<String, bool> {
        &self.flags
    }

    /// Sets a flag.
    pub fn set_flag(&mut self, key: impl Into<String>, value: bool) {
        self.flags.insert(key.into(), value);
    }

    /// All generators, sorted by (degree, label).
    #[must_use]
    pub fn generators(&self) -> &[Generator] {
        &self.generators
    }

    /// Total dimension.
    #[must_use]
    pub fn total_dim(&self) -> usize {
        self.generators.len()
    }

    /// Generator indices in the given degree.
    #[must_use]
    pub fn basis_in_degree(&self, k: i64) -> &[usize] {
        self.by_degree.get(&k).map_or(&[], Vec::as_slice)
    }

    /// Dimension in the given degree.
    #[must_use]
    pub fn dim_in_degree(&self, k: i64) -> usize {
        self.basis_in_degree(k).len()
    }

    /// Smallest generator degree, if any.
    #[must_use]
    pub fn min_degree(&self) -> Option<i64> {
        self.by_degree.keys().next().copied()
    }

    /// Largest generator degree, if any.
    #[must_use]
    pub fn max_degree(&self) -> Option<i64> {
        self.by_degree.keys().next_back().copied()
    }

    /// Hilbert function: degree → dimension, nonzero degrees only.
    #[must_use]
    pub fn hilbert(&self) -> BTreeMap<i64, usize> {
        self.by_degree.iter().map(|(&k, v)| (k, v.len())).collect()
    }

    /// `x·Sq^r` in global coordinates (`r = 0` is the identity; `r < 0` is
    /// zero; instability is implicit in the stored table).
    #[must_use]
    pub fn act(&self, x: &F2Vec, r: i64) -> F2Vec {
        if r == 0 {
            return x.clone();
        }
        if r < 0 {
            return F2Vec::zero();
        }
        let mut out = F2Vec::zero();
        for &i in x.support() {
            if let Some(dsts) = self.sq.get(&(i as usize, r)) {
                for &d in dsts {
                    out.toggle(d as u32);
                }
            }
        }
        out
    }

    /// Applies a composite word left to right: `x·Sq^{a₁}·…·Sq^{a_s}`.
    #[must_use]
    pub fn act_word(&self, x: &F2Vec, word: &[i64]) -> F2Vec {
        let mut v = x.clone();
        for &r in word {
            if v.is_zero() {
                break;
            }
            v = self.act(&v, r);
        }
        v
    }

    /// Matrix of `·Sq^r : M_k → M_{k−r}` in the per-degree bases.
    #[must_use]
    pub fn sq_matrix(&self, r: i64, k: i64) -> F2Matrix {
        let src = self.basis_in_degree(k);
        let dst = self.basis_in_degree(k - r);
        let pos: BTreeMap<usize, u32> =
            dst.iter().enumerate().map(|(j, &g)| (g, j as u32)).collect();
        let mut rows = Vec::with_capacity(src.len());
        for &g in src {
            let mut row = F2Vec::zero();
            if r == 0 {
                row.toggle(pos[&g]);
            } else if let Some(dsts) = self.sq.get(&(g, r)) {
                for t in dsts {
                    row.toggle(pos[t]);
                }
            }
            rows.push(row);
        }
        F2Matrix::from_rows(rows, dst.len())
    }

    /// The halving operator in degree `k`: `Sq₀ = ·Sq^{k/2} : M_k → M_{k/2}`
    /// for even `k` (the identity when `k = 0`, zero for negative even `k`),
    /// and the zero map `M_k → 0` for odd `k`.
    #[must_use]
    pub fn sq0_matrix(&self, k: i64) -> F2Matrix {
        if k % 2 != 0 {
            return F2Matrix::zero(self.dim_in_degree(k), 0);
        }
        let half = k / 2;
        if half < 0 {
            return F2Matrix::zero(self.dim_in_degree(k), self.dim_in_degree(half));
        }
        self.sq_matrix(half, k)
    }

    /// Degreewise checks: grading of every stored entry, instability, and
    /// every Adem relation `(x·Sq^a)·Sq^b = Σ_c binom(b−c−1, a−2c)
    /// (x·Sq^{a+b−c})·Sq^c` for `1 ≤ a < 2b` in the range where either side
    /// can land in the module.
    ///
    /// A module flagged `general` claims only a locally-finite action, not
    /// an unstable one, so the instability check is skipped for it (grading
    /// and Adem still apply). Free modules over the lower operations are
    /// the main source of such objects: their action genuinely escapes the
    /// unstable range in negative degrees.
    ///
    /// # Errors
    ///
    /// The first violation found, with its witness.
    pub fn validate(&self) -> Result<(), ModuleError> {
        let general = self.flags.get("general").copied().unwrap_or(false);
        for (&(si, r), dsts) in &self.sq {
            let src = &self.generators[si];
            if !general && 2 * r > src.degree {
                return Err(ModuleError::Instability {
                    src: src.label.clone(),
                    degree: src.degree,
                    r,
                });
            }
            for &di in dsts {
                let dst = &self.generators[di];
                if dst.degree != src.degree - r {
                    return Err(ModuleError::DegreeMismatch {
                        src: src.label.clone(),
                        r,
                        dst: dst.label.clone(),
                        got: dst.degree,
                        expected: src.degree - r,
                    });
                }
            }
        }
        let min = self.min_degree().unwrap_or(0);
        for (gi, g) in self.generators.iter().enumerate() {
            let x = F2Vec::unit(gi as u32);
            let span = g.degree - min; // operations beyond this land in 0
            for b in 1..=span {
                for a in 1..(2 * b).min(span - b + 1) {
                    let lhs = self.act(&self.act(&x, a), b);
                    let mut rhs = F2Vec::zero();
                    for c in 0..=(a / 2) {
                        if binom_mod2(b - c - 1, a - 2 * c) {
                            rhs.add_assign(&self.act(&self.act(&x, a + b - c), c));
                        }
                    }
                    if lhs != rhs {
                        return Err(ModuleError::AdemViolation { src: g.label.clone(), a, b });
                    }
                }
            }
        }
        Ok(())
    }

    /// Degree shift by `k` (labels unchanged; the action commutes with
    /// suspension in this convention, and suspension preserves instability).
    #[must_use]
    pub fn suspend(&self, k: i64) -> FpModule {
        let mut m = self.clone();
        m.name = format!("susp({k},{})", self.name);
        m.cutoff += k;
        for g in &mut m.generators {
            g.degree += k;
        }
        m.by_degree = m
            .by_degree
            .iter()
            .map(|(&d, v)| (d + k, v.clone()))
            .collect();
        m
    }

    /// Direct sum. Labels are prefixed `p{i}:` only when they would collide.
    #[must_use]
    pub fn direct_sum(name: impl Into<String>, parts: &[&FpModule]) -> FpModule {
        let mut all: BTreeSet<&str> = BTreeSet::new();
        let mut collide = false;
        for p in parts {
            for g in &p.generators {
                if !all.insert(&g.label) {
                    collide = true;
                }
            }
        }
        let mut generators = Vec::new();
        let mut sq_by_label: Vec<(String, i64, Vec<String>)> = Vec::new();
        let rename = |i: usize, l: &str| {
            if collide {
                format!("p{i}:{l}")
            } else {
                l.to_string()
            }
        };
        let mut cutoff = i64::MIN;
        let mut flags = BTreeMap::new();
        for (i, p) in parts.iter().enumerate() {
            cutoff = cutoff.max(p.cutoff);
            for (k, v) in &p.flags {
                let e = flags.entry(k.clone()).or_insert(false);
                *e = *e || *v;
            }
            for g in &p.generators {
                generators.push(Generator { label: rename(i, &g.label), degree: g.degree });
            }
            for (&(si, r), dsts) in &p.sq {
                sq_by_label.push((
                    rename(i, &p.generators[si].label),
                    r,
                    dsts.iter().map(|&d| rename(i, &p.generators[d].label)).collect(),
                ));
            }
        }
        if cutoff == i64::MIN {
            cutoff = 0;
        }
        FpModule::new(name, cutoff, generators, &sq_by_label, flags)
            .expect("direct sum of valid data is valid")
    }

    /// Drops all classes above `new_cutoff` (a quotient-free operation:
    /// the remaining window is closed under the action). Sets the
    /// `truncated` flag when something was dropped.
    #[must_use]
    pub fn truncate(&self, new_cutoff: i64) -> FpModule {
        let keep: Vec<usize> = (0..self.generators.len())
            .filter(|&i| self.generators[i].degree <= new_cutoff)
            .collect();
        let dropped = keep.len() < self.generators.len();
        let keep_set: BTreeSet<usize> = keep.iter().copied().collect();
        let generators: Vec<Generator> =
            keep.iter().map(|&i| self.generators[i].clone()).collect();
        let mut sq_by_label = Vec::new();
        for (&(si, r), dsts) in &self.sq {
            if !keep_set.contains(&si) {
                continue;
            }
            let targets: Vec<String> = dsts
                .iter()
                .filter(|d| keep_set.contains(d))
                .map(|&d| self.generators[d].label.clone())
                .collect();
            if !targets.is_empty() {
                sq_by_label.push((self.generators[si].label.clone(), r, targets));
            }
        }
        let mut flags = self.flags.clone();
        if dropped {
            flags.insert("truncated".into(), true);
        }
        FpModule::new(self.name.clone(), new_cutoff, generators, &sq_by_label, flags)
            .expect("truncation of valid data is valid")
    }

    /// The Frobenius twist `ΦM`: `(ΦM)_{2d} = M_d`, with
    /// `Φx·Sq^{2i} = Φ(x·Sq^i)` and odd operations zero. Labels are kept.
    #[must_use]
    pub fn phi(&self) -> FpModule {
        let generators: Vec<Generator> = self
            .generators
            .iter()
            .map(|g| Generator { label: g.label.clone(), degree: 2 * g.degree })
            .collect();
        let sq_by_label: Vec<(String, i64, Vec<String>)> = self
            .sq
            .iter()
            .map(|(&(si, r), dsts)| {
                (
                    self.generators[si].label.clone(),
                    2 * r,
                    dsts.iter().map(|&d| self.generators[d].label.clone()).collect(),
                )
            })
            .collect();
        FpModule::new(
            format!("phi({})", self.name),
            2 * self.cutoff,
            generators,
            &sq_by_label,
            self.flags.clone(),
        )
        .expect("twist of valid data is valid")
    }

    /// Index of the generator with the given label.
    #[must_use]
    pub fn index_of(&self, label: &str) -> Option<usize> {
        self.generators.iter().position(|g| g.label == label)
    }

    /// Builds the module spanned by `vectors` (global coordinates), with the
    /// induced action and degrees shifted by `shift`. Labels are
    /// `{prefix}{degree}_{j}` with `degree` the *shifted* degree.
    ///
    /// # Errors
    ///
    /// [`ModuleError::NotClosed`] if the span is not action-closed.
    pub fn submodule(
        &self,
        name: impl Into<String>,
        vectors: &[F2Vec],
        shift: i64,
        prefix: &str,
    ) -> Result<FpModule, ModuleError> {
        self.submodule_parts(name, vectors, shift, prefix).map(|p| p.module)
    }

    /// [`FpModule::submodule`] plus the internal data other functors need to
    /// transport extra structure: the per-degree echelons of the span (whose
    /// reduced rows are the new generators, pivot-ascending) and the label of
    /// each `(ambient degree, row)` pair.
    pub(crate) fn submodule_parts(
        &self,
        name: impl Into<String>,
        vectors: &[F2Vec],
        shift: i64,
        prefix: &str,
    ) -> Result<SubmoduleParts, ModuleError> {
        let n = self.generators.len();
        // Echelonize the span per degree; the canonical basis is the reduced
        // echelon rows (pivot-ascending), which is what `coords` indexes.
        let mut ech: BTreeMap<i64, Echelon> = BTreeMap::new();
        for v in vectors {
            if v.is_zero() {
                continue;
            }
            let d = self.degree_of(v).expect("submodule vectors must be homogeneous");
            ech.entry(d).or_insert_with(|| Echelon::new(n)).insert(v.clone());
        }
        let mut labels: BTreeMap<(i64, usize), String> = BTreeMap::new();
        let mut generators = Vec::new();
        for (&d, e) in &ech {
            for j in 0..e.dim() {
                let label = format!("{prefix}{}:{j:03}", d + shift);
                labels.insert((d, j), label.clone());
                generators.push(Generator { label, degree: d + shift });
            }
        }
        let mut sq_by_label = Vec::new();
        for (&d, e) in &ech {
            let span = d - self.min_degree().unwrap_or(d);
            for (j, v) in e.basis().iter().enumerate() {
                for r in 1..=span.max(0) {
                    let img = self.act(v, r);
                    if img.is_zero() {
                        continue;
                    }
                    let coords = ech
                        .get(&(d - r))
                        .and_then(|t| t.coords(&img))
                        .ok_or(ModuleError::NotClosed(d, r))?;
                    let dsts: Vec<String> = coords
                        .support()
                        .iter()
                        .map(|&c| labels[&(d - r, c as usize)].clone())
                        .collect();
                    sq_by_label.push((labels[&(d, j)].clone(), r, dsts));
                }
            }
        }
        let module =
            FpModule::new(name, self.cutoff + shift, generators, &sq_by_label, self.flags.clone())?;
        Ok(SubmoduleParts { module, ech, labels })
    }

    /// Builds the quotient of this module by the action-closed span of
    /// `sub_vectors`, degrees shifted by `shift`.
    ///
    /// # Errors
    ///
    /// [`ModuleError::NotClosed`] if the span is not action-closed (the
    /// induced action would be ill-defined).
    pub fn quotient_module(
        &self,
        name: impl Into<String>,
        sub_vectors: &[F2Vec],
        shift: i64,
        prefix: &str,
    ) -> Result<FpModule, ModuleError> {
        self.quotient_parts(name, sub_vectors, shift, prefix).map(|p| p.module)
    }

    /// [`FpModule::quotient_module`] plus the internal data other functors
    /// need: per-degree echelons of the subspace, the chosen coset
    /// representatives (global non-pivot columns, ascending) per ambient
    /// degree, and the label of each `(ambient degree, position)` pair.
    pub(crate) fn quotient_parts(
        &self,
        name: impl Into<String>,
        sub_vectors: &[F2Vec],
        shift: i64,
        prefix: &str,
    ) -> Result<QuotientParts, ModuleError> {
        let n = self.generators.len();
        let mut sub: BTreeMap<i64, Echelon> = BTreeMap::new();
        for v in sub_vectors {
            if v.is_zero() {
                continue;
            }
            let d = self.degree_of(v).expect("subspace vectors must be homogeneous");
            sub.entry(d).or_insert_with(|| Echelon::new(n)).insert(v.clone());
        }
        // Closure check (the induced action is otherwise ill-defined).
        for (&d, e) in &sub {
            let span = d - self.min_degree().unwrap_or(d);
            for r in 1..=span.max(0) {
                for v in e.basis() {
                    let img = self.act(v, r);
                    if img.is_zero() {
                        continue;
                    }
                    let ok = sub.get(&(d - r)).is_some_and(|t| t.contains(&img));
                    if !ok {
                        return Err(ModuleError::NotClosed(d, r));
                    }
                }
            }
        }
        let empty = Echelon::new(n);
        // Quotient basis in degree d: cosets of the standard basis vectors at
        // non-pivot columns of the subspace echelon (restricted to the
        // degree's index block, where all its pivots lie).
        let mut reps_by_degree: BTreeMap<i64, Vec<u32>> = BTreeMap::new();
        let mut labels: BTreeMap<(i64, usize), String> = BTreeMap::new();
        let mut generators = Vec::new();
        for (&d, idxs) in &self.by_degree {
            let e = sub.get(&d).unwrap_or(&empty);
            let pivots: BTreeSet<u32> = e.pivots().iter().copied().collect();
            let reps: Vec<u32> = idxs
                .iter()
                .map(|&g| g as u32)
                .filter(|c| !pivots.contains(c))
                .collect();
            for (j, _) in reps.iter().enumerate() {
                let label = format!("{prefix}{}:{j:03}", d + shift);
                labels.insert((d, j), label.clone());
                generators.push(Generator { label, degree: d + shift });
            }
            reps_by_degree.insert(d, reps);
        }
        // Induced action: reduce the image modulo the subspace, then read off
        // coordinates at this degree's non-pivot columns.
        let mut sq_by_label = Vec::new();
        for (&d, reps) in &reps_by_degree {
            let span = d - self.min_degree().unwrap_or(d);
            for (j, &rep) in reps.iter().enumerate() {
                let x = F2Vec::unit(rep);
                for r in 1..=span.max(0) {
                    let img = self.act(&x, r);
                    if img.is_zero() {
                        continue;
                    }
                    let residue = sub.get(&(d - r)).unwrap_or(&empty).reduce_vec(&img);
                    if residue.is_zero() {
                        continue;
                    }
                    let treps = &reps_by_degree[&(d - r)];
                    let dsts: Vec<String> = residue
                        .support()
                        .iter()
                        .map(|&c| {
                            let pos = treps
                                .binary_search(&c)
                                .expect("residue is supported on non-pivot columns");
                            labels[&(d - r, pos)].clone()
                        })
                        .collect();
                    sq_by_label.push((labels[&(d, j)].clone(), r, dsts));
                }
            }
        }
        let module =
            FpModule::new(name, self.cutoff + shift, generators, &sq_by_label, self.flags.clone())?;
        Ok(QuotientParts { module, sub, reps: reps_by_degree, labels })
    }

    /// Degree of a homogeneous vector (None if zero), panics if mixed.
    #[must_use]
    pub fn degree_of(&self, v: &F2Vec) -> Option<i64> {
        let mut deg = None;
        for &i in v.support() {
            let d = self.generators[i as usize].degree;
            match deg {
                None => deg = Some(d),
                Some(d0) => assert_eq!(d0, d, "vector is not homogeneous"),
            }
        }
        deg
    }
}

// ==================== dual free unstable modules ====================

/// Label for the dual of the admissible monomial `Sq^I` on the canonical
/// generator: `"(4,2,1)*"`, with `"()*"` for the dual of the generator.
#[must_use]
pub fn dual_label(entries: &[i64]) -> String {
    let inner = entries.iter().map(i64::to_string).collect::<Vec<_>>().join(",");
    format!("({inner})*")
}

/// The degreewise dual of the free unstable module on one generator of
/// degree `n`, through internal degrees ≤ `cutoff`, as a right module.
///
/// Basis: duals of `Sq^I ι_n` for admissible strictly positive `I` with
/// excess ≤ `n` (the empty word included when `n ≥ 0`), in degree
/// `n + d(I)`. The right action is the transpose of the left action, which
/// on the admissible basis is Adem reduction of `Sq^r Sq^I` followed by
/// discarding monomials of excess > `n`. For `n < 0` the module is zero.
#[must_use]
pub fn dual_free_unstable(n: i64, cutoff: i64) -> FpModule {
    use crate::seqcomb::{enumerate_admissible, Constraint, Seq};
    let name = format!("dualF[{n}]");
    if n < 0 {
        return FpModule::zero(name, cutoff);
    }
    // Basis per degree.
    let mut basis: BTreeMap<i64, Vec<Seq>> = BTreeMap::new();
    let mut all: Vec<Seq> = Vec::new();
    for d in 0..=(cutoff - n).max(-1) {
        for i in enumerate_admissible(None, d, Constraint::StrictlyPositive) {
            let e_ok = i.is_empty() || i.excess().le(n);
            if e_ok {
                basis.entry(n + d).or_default().push(i.clone());
                all.push(i);
            }
        }
    }
    let generators: Vec<Generator> = all
        .iter()
        .map(|i| Generator { label: dual_label(i.entries()), degree: n + i.degree() })
        .collect();
    // Transpose of the left action: ⟨y*·Sq^r, Sq^J⟩ = ⟨y*, Sq^r Sq^J⟩, so
    // (Sq^I)*·Sq^r = Σ { (Sq^J)* : Sq^I appears in Sq^r·Sq^J }.
    let mut sq_by_label: Vec<(String, i64, Vec<String>)> = Vec::new();
    let mut hits: BTreeMap<(Vec<i64>, i64), Vec<String>> = BTreeMap::new();
    for (deg, seqs) in &basis {
        for j in seqs {
            // Left multiplication by Sq^r raises degree; enumerate r with
            // n + d(J) + r ≤ cutoff.
            for r in 1..=(cutoff - deg) {
                let mut word = vec![r];
                word.extend_from_slice(j.entries());
                for i_word in adem_reduce(&word) {
                    let i = Seq::upper(i_word.clone());
                    // Discard monomials outside the free unstable basis.
                    if !i.is_empty() && !i.excess().le(n) {
                        continue;
                    }
                    hits.entry((i_word, r)).or_default().push(dual_label(j.entries()));
                }
            }
        }
    }
    for ((i_word, r), dsts) in hits {
        sq_by_label.push((dual_label(&i_word), r, dsts));
    }
    let mut flags = BTreeMap::new();
    flags.insert("truncated".into(), true);
    FpModule::new(name, cutoff, generators, &sq_by_label, flags)
        .expect("dual free unstable construction is valid")
}

// ==================== loop functors ====================

/// Output of [`FpModule::loops`]: the loop modules together with the
/// coordinates of the kernel and image of `Sq₀` inside the original module.
pub struct LoopsData {
    /// `ΩM` (the kernel of `Sq₀`, desuspended by one).
    pub omega: FpModule,
    /// `Ω₁M` (the cokernel of `M → ΦM`, desuspended by one).
    pub omega1: FpModule,
    /// Basis of `ker Sq₀ ⊆ M` per degree (global coordinates).
    pub ker: BTreeMap<i64, Vec<F2Vec>>,
    /// Echelon of `im Sq₀ ⊆ M_k` per target degree `k` (global coordinates):
    /// the image of `·Sq^k : M_{2k} → M_k`.
    pub image: BTreeMap<i64, Echelon>,
}

impl FpModule {
    /// Computes `ΩM` and `Ω₁M` from the exact sequence
    /// `0 → ΣΩM → M → ΦM → ΣΩ₁M → 0`, where the middle map is
    /// `x ↦ x·Sq^{|x|/2}` on even degrees (the identity on degree 0, zero on
    /// odd degrees).
    ///
    /// `ΩM` is exact in degrees ≤ cutoff − 1; so is `Ω₁M`.
    #[must_use]
    pub fn loops(&self) -> LoopsData {
        let n = self.generators.len();
        // Kernel of Sq₀ per degree, in global coordinates (echelonized so the
        // order matches the submodule's generators).
        let mut ker: BTreeMap<i64, Vec<F2Vec>> = BTreeMap::new();
        let mut image: BTreeMap<i64, Echelon> = BTreeMap::new();
        let degrees: Vec<i64> = self.by_degree.keys().copied().collect();
        for &k in &degrees {
            let idxs = self.basis_in_degree(k);
            let red = self.sq0_matrix(k).reduce();
            let mut e = Echelon::new(n);
            for coeff in &red.kernel {
                // Kernel coefficients are in the per-degree basis; lift.
                let mut v = F2Vec::zero();
                for &c in coeff.support() {
                    v.toggle(idxs[c as usize] as u32);
                }
                e.insert(v);
            }
            if e.dim() > 0 {
                ker.insert(k, e.into_basis());
            }
            // Image of Sq₀ into degree k/2 (even k ≥ 0 only).
            if k % 2 == 0 && k >= 0 {
                let half = k / 2;
                let tidx = self.basis_in_degree(half);
                let e = image.entry(half).or_insert_with(|| Echelon::new(n));
                for im in &red.image {
                    let mut v = F2Vec::zero();
                    for &c in im.support() {
                        v.toggle(tidx[c as usize] as u32);
                    }
                    e.insert(v);
                }
            }
        }
        let ker_flat: Vec<F2Vec> = ker.values().flatten().cloned().collect();
        let sigma_omega = self
            .submodule(format!("loops({})", self.name), &ker_flat, -1, "o")
            .expect("kernel of a module map is action-closed");
        // ΣΩ₁M = ΦM / im(q): build ΦM, push the image coordinates through
        // the identification (ΦM)_{2k} = M_k, quotient, then desuspend.
        // ΦM is known through 2·cutoff but the image only through cutoff, so
        // the cokernel is exact only through cutoff and gets truncated.
        let phi = self.phi();
        // Labels are preserved by the twist but positions may shift (sorting
        // is by (degree, label)); build a lookup.
        let phi_index: BTreeMap<(&str, i64), usize> = phi
            .generators
            .iter()
            .enumerate()
            .map(|(i, g)| ((g.label.as_str(), g.degree), i))
            .collect();
        let mut sub_vectors = Vec::new();
        for (&k, e) in &image {
            for v in e.basis() {
                let mut w = F2Vec::zero();
                for &c in v.support() {
                    let g = &self.generators[c as usize];
                    w.toggle(phi_index[&(g.label.as_str(), 2 * k)] as u32);
                }
                sub_vectors.push(w);
            }
        }
        let mut sigma_omega1 = phi
            .quotient_module(format!("loops1({})", self.name), &sub_vectors, -1, "c")
            .expect("image of a module map is action-closed");
        if self.flags.get("truncated").copied().unwrap_or(false) {
            // For a windowed module the image is only known through the
            // cutoff, so the cokernel must be clipped to stay exact.
            sigma_omega1 = sigma_omega1.truncate(self.cutoff - 1);
        }
        LoopsData { omega: sigma_omega, omega1: sigma_omega1, ker, image }
    }

    /// Checks `H_M(t) − H_M(t²) = t·(H_{ΩM}(t) − H_{Ω₁M}(t))` coefficientwise
    /// for degrees ≤ cutoff (where all four sides are exact).
    ///
    /// # Errors
    ///
    /// The first degree where the identity fails, with both sides.
    pub fn check_loop_identity(&self) -> Result<(), String> {
        let loops = self.loops();
        let h = self.hilbert();
        let ho = loops.omega.hilbert();
        let ho1 = loops.omega1.hilbert();
        let lo = self.min_degree().unwrap_or(0).min(0) * 2 - 2;
        for k in lo..=self.cutoff {
            let lhs = *h.get(&k).unwrap_or(&0) as i64
                - if k % 2 == 0 { *h.get(&(k / 2)).unwrap_or(&0) as i64 } else { 0 };
            let rhs =
                *ho.get(&(k - 1)).unwrap_or(&0) as i64 - *ho1.get(&(k - 1)).unwrap_or(&0) as i64;
            if lhs != rhs {
                return Err(format!(
                    "loop identity fails in degree {k}: H_M − H_M(t²) gives {lhs}, \
                     t(H_Ω − H_Ω₁) gives {rhs}"
                ));
            }
        }
        Ok(())
    }
}

// ==================== delooping spectral sequence ====================

/// One interval of a Sq₀ tower: classes in degrees `2^a m … 2^b m` (odd `m`)
/// mapped isomorphically down the tower and to zero below `2^a m`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub struct Bar {
    /// Odd positive degree at the base of the tower.
    pub m: i64,
    /// First occupied position (degree `2^a m`).
    pub a: u32,
    /// Last occupied position (degree `2^b m`).
    pub b: u32,
}

impl Bar {
    /// Interval length `b − a + 1`.
    #[must_use]
    pub fn length(&self) -> u32 {
        self.b - self.a + 1
    }
}

/// One chart entry: a piece of a spectral sequence page.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub struct DeloopEntry {
    /// Filtration index.
    pub p: i64,
    /// Complementary index (`−p` on the top diagonal, `−p−1` on the bottom).
    pub q: i64,
    /// Internal degree.
    pub degree: i64,
    /// Dimension.
    pub dim: usize,
}

/// The delooping spectral sequence of a 0-connected module, fully encoded by
/// the multiset of tower intervals ([`Bar`]s).
///
/// Pages carry `E¹_{p,−p} = Φ^p ΣΩM`, `E¹_{p,−p−1} = Φ^p ΣΩ₁M`, with
/// `d_r : (p,q) → (p−r, q+r−1)`; a bar of length `L` contributes pieces that
/// pair off under `d_L`, leaving `E^∞_{p,−p} = 𝔣_p M / 𝔣_{p−1} M` with
/// `𝔣_p = ker(Sq₀^{p+1})`.
#[derive(Clone, Debug)]
pub struct DeloopSS {
    /// Internal-degree window bound (inherited from the module).
    pub cutoff: i64,
    /// Sorted interval multiset.
    pub bars: Vec<Bar>,
}

impl DeloopSS {
    /// Chart of page `r ≥ 1` (entries with internal degree ≤ cutoff).
    #[must_use]
    pub fn page(&self, r: u32) -> Vec<DeloopEntry> {
        self.chart(Some(r))
    }

    /// Chart of the limit page.
    #[must_use]
    pub fn infinity(&self) -> Vec<DeloopEntry> {
        self.chart(None)
    }

    fn chart(&self, r: Option<u32>) -> Vec<DeloopEntry> {
        let mut acc: BTreeMap<(i64, i64, i64), usize> = BTreeMap::new();
        for bar in &self.bars {
            let len = bar.length();
            // Top diagonal (p, −p): internal degree 2^{a+p} m; alive on page
            // r iff p ≤ L−1 (survivor) or r ≤ L (not yet hit by d_L).
            let mut p = 0u32;
            loop {
                let deg = bar.m << (bar.a + p);
                if deg > self.cutoff {
                    break;
                }
                let alive = match r {
                    Some(r) => p < len || r <= len,
                    None => p < len,
                };
                if alive {
                    *acc.entry((p as i64, -(p as i64), deg)).or_default() += 1;
                }
                p += 1;
            }
            // Bottom diagonal (p, −p−1): internal degree 2^{b+1+p} m; alive
            // iff r ≤ L (killed by d_L from (p+L, −p−L)).
            if let Some(r) = r {
                if r <= len {
                    let mut p = 0u32;
                    loop {
                        let deg = bar.m << (bar.b + 1 + p);
                        if deg > self.cutoff {
                            break;
                        }
                        *acc.entry((p as i64, -(p as i64) - 1, deg)).or_default() += 1;
                        p += 1;
                    }
                }
            }
        }
        acc.into_iter()
            .map(|((p, q, degree), dim)| DeloopEntry { p, q, degree, dim })
            .collect()
    }

    /// Ranks of `d_r` out of `(p, −p)`, keyed by `(p, internal degree)`.
    /// Nonzero only when `r` equals a bar length and `p ≥ r`.
    #[must_use]
    pub fn differential_ranks(&self, r: u32) -> BTreeMap<(i64, i64), usize> {
        let mut out: BTreeMap<(i64, i64), usize> = BTreeMap::new();
        for bar in &self.bars {
            if bar.length() != r {
                continue;
            }
            let mut p = r;
            loop {
                let deg = bar.m << (bar.a + p);
                if deg > self.cutoff {
                    break;
                }
                *out.entry((p as i64, deg)).or_default() += 1;
                p += 1;
            }
        }
        out
    }

    /// `dim E^∞` summed over the top diagonal, per internal degree — equals
    /// the Hilbert function of the module (the filtration `𝔣_p` is
    /// exhaustive for 0-connected modules).
    #[must_use]
    pub fn infinity_totals(&self) -> BTreeMap<i64, usize> {
        let mut out = BTreeMap::new();
        for e in self.infinity() {
            *out.entry(e.degree).or_default() += e.dim;
        }
        out
    }
}

impl FpModule {
    /// Computes the delooping spectral sequence. Requires 0-connectedness
    /// (no classes in degree ≤ 0), which makes the `𝔣`-filtration exhaustive.
    ///
    /// # Errors
    ///
    /// [`ModuleError::NotConnected`] if a class sits in degree ≤ 0.
    pub fn deloop_ss(&self) -> Result<DeloopSS, ModuleError> {
        if self.min_degree().is_some_and(|d| d <= 0) {
            return Err(ModuleError::NotConnected(self.name.clone()));
        }
        let mut bars = Vec::new();
        for m in 1..=self.cutoff {
            if m % 2 == 0 {
                continue;
            }
            // Tower positions 0..=top with 2^top m ≤ cutoff.
            let mut top = 0u32;
            while (m << (top + 1)) <= self.cutoff {
                top += 1;
            }
            // v_c : T_c → T_{c−1} is Sq₀ in degree 2^c m.
            let dims: Vec<usize> =
                (0..=top).map(|c| self.dim_in_degree(m << c)).collect();
            if dims.iter().all(|&d| d == 0) {
                continue;
            }
            let maps: Vec<F2Matrix> =
                (1..=top).map(|c| self.sq0_matrix(m << c)).collect();
            // R(c,d) = rank of the composite T_c → T_d (c ≥ d); R(c,c)=dim.
            let rank = |c: i64, d: i64| -> i64 {
                if d < 0 || c > top as i64 {
                    return 0;
                }
                debug_assert!(c >= d);
                if c == d {
                    return dims[c as usize] as i64;
                }
                let mut comp = maps[c as usize - 1].clone(); // T_c → T_{c−1}
                for down in (d + 1..c).rev() {
                    comp = comp.then(&maps[down as usize - 1]);
                }
                comp.rank() as i64
            };
            for a in 0..=top as i64 {
                for b in a..=top as i64 {
                    let mult = rank(b, a) - rank(b + 1, a) - rank(b, a - 1) + rank(b + 1, a - 1);
                    debug_assert!(mult >= 0, "negative interval multiplicity");
                    for _ in 0..mult {
                        bars.push(Bar { m, a: a as u32, b: b as u32 });
                    }
                }
            }
        }
        bars.sort_unstable();
        Ok(DeloopSS { cutoff: self.cutoff, bars })
    }

    /// Dimension of `𝔣_p = ker(Sq₀^{p+1})` in degree `k`, computed directly
    /// by composing halving matrices (independent of the barcode machinery).
    #[must_use]
    pub fn f_filtration_dim(&self, p: u32, k: i64) -> usize {
        let dim_k = self.dim_in_degree(k);
        let mut comp = F2Matrix::identity(dim_k);
        let mut deg = k;
        for _ in 0..=p {
            if deg < 0 || deg % 2 != 0 {
                // Sq₀ vanishes out of odd or negative degrees, so the full
                // composite is zero and the kernel is everything.
                return dim_k;
            }
            comp = comp.then(&self.sq0_matrix(deg));
            deg /= 2;
        }
        dim_k - comp.rank()
    }
}

// ==================== serialization records ====================

/// Wire form of one action entry: `src·Sq^r = Σ dst`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SqEntry {
    /// Source label.
    pub src: String,
    /// Operation index (≥ 1).
    pub r: i64,
    /// Target labels (nonempty, sorted).
    pub dst: Vec<String>,
}

/// Wire form of an [`FpModule`] (strict field set).
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FpModuleRecord {
    /// Module name.
    pub name: String,
    /// Degree window bound.
    pub cutoff: i64,
    /// Generators with labels and degrees.
    pub generators: Vec<Generator>,
    /// Action table.
    pub sq: Vec<SqEntry>,
    /// Presentation flags.
    pub flags: BTreeMap<String, bool>,
}

impl From<&FpModule> for FpModuleRecord {
    fn from(m: &FpModule) -> Self {
        let sq = m
            .sq
            .iter()
            .map(|(&(si, r), dsts)| SqEntry {
                src: m.generators[si].label.clone(),
                r,
                dst: dsts.iter().map(|&d| m.generators[d].label.clone()).collect(),
            })
            .collect();
        FpModuleRecord {
            name: m.name.clone(),
            cutoff: m.cutoff,
            generators: m.generators.clone(),
            sq,
            flags: m.flags.clone(),
        }
    }
}

impl TryFrom<FpModuleRecord> for FpModule {
    type Error = ModuleError;

    fn try_from(r: FpModuleRecord) -> Result<Self, Self::Error> {
        let sq_by_label: Vec<(String, i64, Vec<String>)> =
            r.sq.into_iter().map(|e| (e.src, e.r, e.dst)).collect();
        FpModule::new(r.name, r.cutoff, r.generators, &sq_by_label, r.flags)
    }
}

// ==================== tests ====================
