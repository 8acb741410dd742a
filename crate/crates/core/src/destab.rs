//! Destabilization data in the closed-form cases.
//!
//! The forgetful functor from unstable modules to all modules over the
//! Steenrod operations has a left adjoint `Ω^∞` (destabilization), with
//! higher derived functors `Ω^∞_i`. Write `H₀𝔯M` for the length-graded
//! module over the lower operations
//!
//! ```text
//!   H₀𝔯M ≅ ⊕_{i≥0} Σ^{−1} Ω^∞_i Σ^{1−i} M     (length-i component)
//! ```
//!
//! — the bottom homology of the destabilization complex of `M`. It is not
//! computed here from a chain complex; instead the three families where it
//! has a closed form are constructed directly:
//!
//! * **`M` unstable**: `H₀𝔯M ≅ ℛM`, the free allowable module on `M` with
//!   its length grading, carrying the canonical lower-operation action
//!   ([`h0r_unstable`]).
//! * **`M = ΣⁿA*`**, a degree shift of the dual of the full operation
//!   algebra: concentrated in length 0, equal to `Σ^{−1}F(n+1)*`, the
//!   desuspended dual of the free unstable module on a class of degree
//!   `n + 1` ([`h0r_dual_steenrod`]).
//! * **`M = Σ^{−1}N`** a single desuspension of an unstable module `N`:
//!   the length-0 and length-1 layers ([`desusp1_analysis`]). Length 0 is
//!   `Σ^{−1}N` itself; length 1 is an extension of `Σ^{−1}ℛ₁N` by
//!   `Σ^{−1}Ω₁N`, and the first derived indecomposables of the answer in
//!   length 1 appear as the kernel of the natural surjection
//!   `ΦΣ^{−1}N ↠ Σ^{−1}Ω₁N` — computable as the image of the Frobenius
//!   `Sq₀` on `N`.
//!
//! Every constructed object carries a [`Provenance`] recording which case
//! produced it and the connectivity of the input, so that
//! [`connectivity_certificate`] can check the exponential lower bound: over
//! a `c`-connected input, the length-`i` component vanishes in degrees
//! `≤ 2^i(c+1) − 1`.

use std::collections::{BTreeMap, HashMap};

use thiserror::Error;

use crate::dyerlashof::{singer_free, QModule, QModuleError};
use crate::steenrod::{
    dual_free_unstable, FpModule, FpModuleRecord, ModuleError,
};

// ==================== errors ====================

/// Failures of the destabilization constructions and their certificates.
#[derive(Debug, Error)]
pub enum DestabError {
    /// A nonzero class in negative degree: `x = x·Sq⁰` must vanish there,
    /// so the module cannot be unstable.
    #[error(
        "generator {label} sits in negative degree {degree}, \
         so the module is not unstable"
    )]
    NegativeDegree {
        /// Offending generator.
        label: String,
        /// Its degree.
        degree: i64,
    },
    /// A stored operation violates the instability condition
    /// `x·Sq^r = 0` for `2r > |x|`.
    #[error(
        "Sq^{r} acts nontrivially on {label} of degree {degree} \
         although 2·{r} > {degree}"
    )]
    NotUnstable {
        /// Source generator of the offending row.
        label: String,
        /// Operation index.
        r: i64,
        /// Degree of the source.
        degree: i64,
    },
    /// The input failed its own structural validation.
    #[error("module failed validation: {0}")]
    Module(#[from] ModuleError),
    /// A lower-operation module construction failed.
    #[error("operation module failure: {0}")]
    Q(#[from] QModuleError),
    /// A class sits at or below the connectivity bound for its length.
    #[error(
        "length {length} has a class in degree {degree} at or below \
         the connectivity bound {bound}"
    )]
    Connectivity {
        /// Length stratum of the offending class.
        length: u32,
        /// Degree of the offending class.
        degree: i64,
        /// The violated bound `2^length·(c+1) − 1`.
        bound: i64,
    },
}

// ==================== provenance ====================

/// How an [`H0RObject`] was produced, carrying the input data its
/// guarantees refer to.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Provenance {
    /// Free on an unstable module that vanishes in degrees
    /// `≤ connectivity`.
    Unstable {
        /// Connectivity of the base module (`min_degree − 1`).
        connectivity: i64,
    },
    /// The `n`-fold degree shift of the dual of the full operation
    /// algebra.
    DualSteenrod {
        /// The shift.
        n: i64,
    },
}

impl Provenance {
    /// Connectivity `c` of the underlying input: the object's length-`i`
    /// component is expected to vanish in degrees `≤ 2^i(c+1) − 1`.
    ///
    /// For the shifted dual the lowest class sits in degree `n`, so
    /// `c = n − 1`.
    #[must_use]
    pub fn connectivity(&self) -> i64 {
        match *self {
            Provenance::Unstable { connectivity } => connectivity,
            Provenance::DualSteenrod { n } => n - 1,
        }
    }

    /// Short human-readable tag for tabular output.
    #[must_use]
    pub fn label(&self) -> String {
        match *self {
            Provenance::Unstable { connectivity } => {
                format!("unstable(c={connectivity})")
            }
            Provenance::DualSteenrod { n } => format!("dual_steenrod(n={n})"),
        }
    }
}

// ==================== the destabilized object ====================

/// A length-graded destabilized object: a module over the lower operations
/// together with the [`Provenance`] that justifies it.
#[derive(Clone, Debug)]
pub struct H0RObject {
    /// The length-graded module, exact through its own window.
    pub q: QModule,
    /// Which closed-form case produced it.
    pub provenance: Provenance,
}

impl H0RObject {
    /// Dimensions per `(length, degree)` cell.
    #[must_use]
    pub fn hilbert_by_length(&self) -> BTreeMap<(u32, i64), usize> {
        self.q
            .cells()
            .iter()
            .filter(|(_, idxs)| !idxs.is_empty())
            .map(|(&cell, idxs)| (cell, idxs.len()))
            .collect()
    }
}

// ==================== instability certification ====================

/// Certifies that a module is unstable: nonzero classes only in
/// nonnegative degrees, and every stored operation row obeys
/// `x·Sq^r = 0` for `2r > |x|`.
///
/// This is checked directly on the action table, independently of the
/// module's `general` flag, so windows of genuinely unstable modules pass
/// even when flagged permissively.
///
/// # Errors
///
/// [`DestabError::NegativeDegree`] or [`DestabError::NotUnstable`] with the
/// offending generator, or [`DestabError::Module`] if the module fails its
/// own structural validation.
pub fn certify_unstable(m: &FpModule) -> Result<(), DestabError> {
    if let Some(g) = m.generators().iter().find(|g| g.degree < 0) {
        return Err(DestabError::NegativeDegree {
            label: g.label.clone(),
            degree: g.degree,
        });
    }
    let record = FpModuleRecord::from(m);
    let degree_of: HashMap<&str, i64> = m
        .generators()
        .iter()
        .map(|g| (g.label.as_str(), g.degree))
        .collect();
    for row in &record.sq {
        let degree = degree_of[row.src.as_str()];
        if !row.dst.is_empty() && 2 * row.r > degree {
            return Err(DestabError::NotUnstable {
                label: row.src.clone(),
                r: row.r,
                degree,
            });
        }
    }
    m.validate()?;
    Ok(())
}

// ==================== closed-form constructions ====================

/// Destabilization of an unstable module: the free allowable module on
/// `m`, whose length-0 component is `m` itself with the canonical action.
///
/// Stores lengths `≤ max_length` and degrees `≤ cutoff`.
///
/// # Errors
///
/// Rejects inputs that are not certifiably unstable
/// ([`certify_unstable`]).
pub fn h0r_unstable(
    m: &FpModule,
    max_length: u32,
    cutoff: i64,
) -> Result<H0RObject, DestabError> {
    certify_unstable(m)?;
    // The zero module is vacuously as connected as the window allows.
    let connectivity = m.min_degree().map_or(cutoff, |d| d - 1);
    Ok(H0RObject {
        q: singer_free(m, max_length, cutoff),
        provenance: Provenance::Unstable { connectivity },
    })
}

/// Destabilization of the `n`-fold degree shift of the dual of the full
/// operation algebra: concentrated in length 0, where it equals
/// `Σ^{−1}F(n+1)*` — zero when `n + 1 < 0`.
///
/// The lower operations all act by zero (nothing can land in the absent
/// positive lengths). Degrees are stored through `cutoff`.
#[must_use]
pub fn h0r_dual_steenrod(n: i64, cutoff: i64) -> H0RObject {
    let name = format!("H0R_dual[{n}]");
    let fp = if n + 1 < 0 {
        FpModule::zero(name, cutoff)
    } else {
        dual_free_unstable(n + 1, cutoff + 1).suspend(-1).renamed(name)
    };
    H0RObject {
        q: QModule::triv(&fp),
        provenance: Provenance::DualSteenrod { n },
    }
}

// ==================== single desuspension ====================

/// The lengths `≤ 1` of the destabilization of `Σ^{−1}N` for unstable `N`.
///
/// Produced by [`desusp1_analysis`]. The length-1 component is an
/// extension — only its two layers are canonical, not a splitting — and
/// the kernel of the natural surjection `ΦΣ^{−1}N ↠ Σ^{−1}Ω₁N` records the
/// length-1 part of the first derived functor of the indecomposables of
/// the answer.
#[derive(Clone, Debug)]
pub struct Desusp1Analysis {
    /// Length 0: the desuspension `Σ^{−1}N` itself.
    pub base: FpModule,
    /// Submodule layer of length 1: `Σ^{−1}Ω₁N`.
    pub layer1_sub: FpModule,
    /// Quotient layer of length 1: `Σ^{−1}ℛ₁N`, the length-1 stratum of
    /// the free allowable module on `N`, desuspended.
    pub layer1_quot: FpModule,
    /// Dimensions per degree of `ker(ΦΣ^{−1}N ↠ Σ^{−1}Ω₁N)`; absent keys
    /// are zero. Under the identification `ΦΣ^{−1}N ≅ Σ^{−2}ΦN` this is
    /// the image of the Frobenius `Sq₀: N_{k+2} → N_{(k+2)/2}`, placed in
    /// degree `k`.
    pub kernel_dims: BTreeMap<i64, usize>,
    /// For a window-truncated `N`: degrees `≥` this value may be distorted
    /// by the missing top of the window (spurious quotient classes,
    /// under-reported kernel dimensions) and are excluded from assertions.
    pub boundary_unreliable: Option<i64>,
}

impl Desusp1Analysis {
    /// Total dimension per degree of the length-1 component (the two
    /// layers of the extension summed).
    #[must_use]
    pub fn layer1_hilbert(&self) -> BTreeMap<i64, usize> {
        let mut out = self.layer1_sub.hilbert();
        for (k, d) in self.layer1_quot.hilbert() {
            *out.entry(k).or_insert(0) += d;
        }
        out
    }
}

/// Lowers a module's window without ever widening it.
fn clip(m: FpModule, cutoff: i64) -> FpModule {
    if m.cutoff() > cutoff {
        m.truncate(cutoff)
    } else {
        m
    }
}

/// Computes the lengths `≤ 1` of the destabilization of `Σ^{−1}N` for an
/// unstable `N`, through degree `min(cutoff, N's window) − 1`.
///
/// The kernel dimensions come from the exact sequence
/// `0 → ΣΩN → N →^{Sq₀} ΦN → ΣΩ₁N → 0`: the surjection `ΦN ↠ ΣΩ₁N` has
/// kernel the image of `Sq₀`, and desuspending twice places its degree-`k`
/// part at the image of `Sq₀: N_{k+2} → N_{(k+2)/2}`.
///
/// # Errors
///
/// Rejects inputs that are not certifiably unstable
/// ([`certify_unstable`]).
pub fn desusp1_analysis(
    n: &FpModule,
    cutoff: i64,
) -> Result<Desusp1Analysis, DestabError> {
    certify_unstable(n)?;
    let eff = cutoff.min(n.cutoff());
    let loops = n.loops();
    let base = clip(n.suspend(-1), eff - 1);
    let layer1_sub = clip(loops.omega1.suspend(-1), eff - 1);
    let layer1_quot =
        singer_free(n, 1, eff).length_component(1).suspend(-1);
    let mut kernel_dims = BTreeMap::new();
    for (&half, echelon) in &loops.image {
        let degree = 2 * half - 2;
        if echelon.dim() > 0 && degree < eff {
            kernel_dims.insert(degree, echelon.dim());
        }
    }
    let truncated = n.flags().get("truncated").copied().unwrap_or(false);
    Ok(Desusp1Analysis {
        base,
        layer1_sub,
        layer1_quot,
        kernel_dims,
        boundary_unreliable: truncated.then_some(n.cutoff() - 1),
    })
}

// ==================== connectivity certificates ====================

/// Per-length outcome of a [`connectivity_certificate`] run.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LengthCertificate {
    /// The bound `2^length·(c+1) − 1`: the component must vanish in
    /// degrees `≤ bound`.
    pub bound: i64,
    /// Lowest degree actually carrying a class, if any within the window.
    pub min_degree: Option<i64>,
}

/// A verified connectivity report: every stored length-`i` class sits
/// strictly above `2^i(c+1) − 1`.
#[derive(Clone, Debug)]
pub struct ConnectivityReport {
    /// Connectivity of the underlying input.
    pub connectivity: i64,
    /// Certificates per stored length.
    pub lengths: BTreeMap<u32, LengthCertificate>,
}

/// The bound `2^s(c+1) − 1`, saturating instead of overflowing.
fn connectivity_bound(s: u32, c: i64) -> i64 {
    let pow = 1i64 << s.min(61);
    pow.checked_mul(c + 1)
        .unwrap_or(if c + 1 >= 0 { i64::MAX } else { i64::MIN })
        .saturating_sub(1)
}

/// Checks the exponential connectivity bound on a destabilized object:
/// with `c` the input's connectivity from the [`Provenance`], the
/// length-`i` component must vanish in degrees `≤ 2^i(c+1) − 1`.
///
/// Only the stored window can be inspected, so components that vanish
/// within it are certified vacuously.
///
/// # Errors
///
/// [`DestabError::Connectivity`] at the first stored class at or below its
/// bound.
pub fn connectivity_certificate(
    h: &H0RObject,
) -> Result<ConnectivityReport, DestabError> {
    let c = h.provenance.connectivity();
    let mut lengths: BTreeMap<u32, LengthCertificate> = BTreeMap::new();
    if let Some(top) = h.q.max_length() {
        for s in 0..=top {
            lengths.insert(
                s,
                LengthCertificate {
                    bound: connectivity_bound(s, c),
                    min_degree: None,
                },
            );
        }
    }
    for (&(s, k), idxs) in h.q.cells() {
        if idxs.is_empty() {
            continue;
        }
        let entry = lengths
            .entry(s)
            .or_insert_with(|| LengthCertificate {
                bound: connectivity_bound(s, c),
                min_degree: None,
            });
        if entry.min_degree.is_none_or(|m| k < m) {
            entry.min_degree = Some(k);
        }
        if k <= entry.bound {
            return Err(DestabError::Connectivity {
                length: s,
                degree: k,
                bound: entry.bound,
            });
        }
    }
    Ok(ConnectivityReport { connectivity: c, lengths })
}

// ==================== tests ====================

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dyerlashof::q0_analysis;
    use crate::gf2::F2Vec;

    fn cell_dim(q: &QModule, s: u32, k: i64) -> usize {
        q.cells().get(&(s, k)).map_or(0, Vec::len)
    }

    #[test]
    fn length_zero_is_the_module_with_the_canonical_action() {
        let m = dual_free_unstable(2, 12);
        let h = h0r_unstable(&m, 3, 12).expect("unstable input");
        assert_eq!(
            h.provenance,
            Provenance::Unstable { connectivity: 1 },
            "dual of the free module on a degree-2 class starts in degree 2",
        );

        // The length-0 stratum is the module itself.
        let l0 = h.q.length_component(0);
        assert_eq!(l0.hilbert(), m.hilbert());
        for k in 0..=12 {
            for r in 1..=4 {
                assert_eq!(
                    l0.sq_matrix(r, k).rows(),
                    m.sq_matrix(r, k).rows(),
                    "Sq^{r} on degree {k} must agree with the base module",
                );
            }
        }

        // The operations on length 0 are the canonical free ones: a single
        // allowable operation sends a generator to the matching length-1
        // basis vector.
        for g in m.generators() {
            let src = h.q.fp().index_of(&g.label).expect("kept label");
            for a in 0..=2i64 {
                if 2 * g.degree + a > 12 {
                    continue;
                }
                let image = h.q.q_act(&F2Vec::unit(src as u32), a);
                let target_label = format!("Q({a}).{}", g.label);
                let target =
                    h.q.fp().index_of(&target_label).expect("free basis word");
                assert_eq!(
                    image,
                    F2Vec::unit(target as u32),
                    "the action on length 0 is the canonical free one",
                );
            }
        }
    }

    #[test]
    fn free_objects_start_in_doubling_degrees() {
        let h = h0r_unstable(&FpModule::sigma_f(1, 20), 4, 20)
            .expect("spheres are unstable");
        let report = connectivity_certificate(&h).expect("bound holds");
        assert_eq!(report.connectivity, 0);
        for s in 0..=4u32 {
            let cert = &report.lengths[&s];
            assert_eq!(cert.bound, (1i64 << s) - 1);
            assert_eq!(
                cert.min_degree,
                Some(1i64 << s),
                "length {s} over a degree-1 class starts in degree 2^{s}",
            );
        }

        // Over a degree-0 class every length reaches down to degree 0.
        let h0 = h0r_unstable(&FpModule::sigma_f(0, 16), 3, 16)
            .expect("spheres are unstable");
        let report0 = connectivity_certificate(&h0).expect("bound holds");
        assert_eq!(report0.connectivity, -1);
        for s in 0..=3u32 {
            assert_eq!(report0.lengths[&s].bound, -1);
            assert_eq!(report0.lengths[&s].min_degree, Some(0));
        }
    }

    #[test]
    fn shifted_duals_match_the_small_closed_forms() {
        // n = 0: the desuspended dual of the free module on a degree-1
        // class has one class in each degree 2^k − 1.
        let h = h0r_dual_steenrod(0, 20);
        let expected: BTreeMap<i64, usize> =
            [(0, 1), (1, 1), (3, 1), (7, 1), (15, 1)].into_iter().collect();
        assert_eq!(h.q.fp().hilbert(), expected);
        assert!(h.q.max_length() == Some(0), "length 0 only");
        let report = connectivity_certificate(&h).expect("bound holds");
        assert_eq!(report.connectivity, -1);
        assert_eq!(report.lengths[&0].min_degree, Some(0));

        // The operations act trivially: nothing can land in the absent
        // positive lengths.
        let analysis = q0_analysis(&h.q).expect("triv module is valid");
        assert!(analysis.ranks.values().all(|&r| r == 0));
        assert!(analysis.im_q.is_empty());

        // n = 1: one class in each of the first few degrees.
        let h1 = h0r_dual_steenrod(1, 12);
        let hil = h1.q.fp().hilbert();
        for k in 1..=4 {
            assert_eq!(hil.get(&k), Some(&1), "degree {k} of the shifted dual");
        }
        assert_eq!(hil.get(&0), None);
        connectivity_certificate(&h1).expect("c = 0 bound holds");

        // n = −1 is a single class in degree −1; n = −2 is zero.
        let hm1 = h0r_dual_steenrod(-1, 10);
        assert_eq!(
            hm1.q.fp().hilbert(),
            [(-1, 1)].into_iter().collect::<BTreeMap<_, _>>()
        );
        connectivity_certificate(&hm1).expect("c = -2 bound holds");
        let hm2 = h0r_dual_steenrod(-2, 10);
        assert_eq!(hm2.q.fp().total_dim(), 0);
        let vacuous = connectivity_certificate(&hm2).expect("zero object");
        assert!(vacuous.lengths.is_empty());
    }

    #[test]
    fn non_unstable_inputs_are_rejected() {
        // One desuspension of the dual turns its top squares into
        // instability violations.
        let bad = dual_free_unstable(1, 8).suspend(-1);
        match h0r_unstable(&bad, 2, 8) {
            Err(DestabError::NotUnstable { r, degree, .. }) => {
                assert_eq!((r, degree), (1, 1));
            }
            other => panic!("expected an instability rejection, got {other:?}"),
        }
        assert!(matches!(
            desusp1_analysis(&bad, 8),
            Err(DestabError::NotUnstable { .. })
        ));

        // Two desuspensions put a class in negative degree.
        let worse = dual_free_unstable(1, 8).suspend(-2);
        assert!(matches!(
            h0r_unstable(&worse, 2, 8),
            Err(DestabError::NegativeDegree { degree: -1, .. })
        ));
    }

    #[test]
    fn desuspension_layers_of_spheres_and_suspensions() {
        // N = a degree-2 class: both layers are one-dimensional slices and
        // the kernel vanishes (the Frobenius is zero on a trivial module).
        let n = FpModule::sigma_f(2, 24);
        let a = desusp1_analysis(&n, 20).expect("unstable input");
        assert!(a.kernel_dims.is_empty());
        assert_eq!(a.boundary_unreliable, None);
        assert_eq!(
            a.base.hilbert(),
            [(1, 1)].into_iter().collect::<BTreeMap<_, _>>()
        );
        assert_eq!(
            a.layer1_sub.hilbert(),
            [(2, 1)].into_iter().collect::<BTreeMap<_, _>>(),
            "the first loop layer of a degree-2 sphere is a degree-2 class",
        );
        let quot = a.layer1_quot.hilbert();
        for k in 3..=19 {
            assert_eq!(quot.get(&k), Some(&1));
        }
        assert_eq!(quot.get(&2), None);

        // Σ^{−1}N is unstable here, so the two layers must sum to the
        // length-1 stratum of the free allowable module on Σ^{−1}N.
        let free = singer_free(&FpModule::sigma_f(1, 19), 1, 19)
            .length_component(1);
        let sum = a.layer1_hilbert();
        for k in 0..=19 {
            assert_eq!(
                sum.get(&k).copied().unwrap_or(0),
                free.dim_in_degree(k),
                "layer sum vs free stratum in degree {k}",
            );
        }

        // Any suspension has vanishing Frobenius, hence zero kernel.
        let susp = dual_free_unstable(1, 8).suspend(1);
        let b = desusp1_analysis(&susp, 9).expect("suspensions are unstable");
        assert!(b.kernel_dims.is_empty());
        assert_eq!(b.boundary_unreliable, Some(8));
    }

    #[test]
    fn desuspension_kernel_of_the_truncated_dual() {
        // On the dual of the free module on a degree-1 class the Frobenius
        // is surjective, so the kernel picks up one dimension for each
        // in-window source: sources 2, 4, 8 land in degrees 0, 2, 6.
        let n = dual_free_unstable(1, 8);
        let a = desusp1_analysis(&n, 8).expect("duals are unstable");
        let expected: BTreeMap<i64, usize> =
            [(0, 1), (2, 1), (6, 1)].into_iter().collect();
        assert_eq!(a.kernel_dims, expected);
        assert_eq!(a.boundary_unreliable, Some(7));

        // Surjectivity of the Frobenius kills the loop layer entirely
        // within the reliable window.
        assert_eq!(a.layer1_sub.total_dim(), 0);

        // The free quotient layer: words on degrees 1, 2, 4 reindexed down
        // by one.
        let quot = a.layer1_quot.hilbert();
        assert_eq!(quot.get(&1), Some(&1));
        assert_eq!(quot.get(&3), Some(&2));
        assert_eq!(quot.get(&7), Some(&3));
    }

    #[test]
    fn suspension_identity_on_free_objects() {
        // For unstable m with A = H₀𝔯m and B = H₀𝔯Σm there is a short
        // exact sequence relating the suspension adjoints:
        //   0 → Σ̄A → B → Σ̄₁B(−1) → 0,
        // which in dimensions reads
        //   coker(Q₀ on A)⟨s⟩_{k−1} + ker(Q₀ on B)⟨s+1⟩_{k−1} = B⟨s⟩_k.
        let max_length = 3u32;
        for m in [
            FpModule::sigma_f(0, 12),
            FpModule::sigma_f(2, 12),
            dual_free_unstable(1, 10),
        ] {
            let d = m.cutoff();
            let a = h0r_unstable(&m, max_length, d).expect("unstable input");
            let b = h0r_unstable(&m.suspend(1), max_length, d + 1)
                .expect("suspensions stay unstable");
            let qa = q0_analysis(&a.q).expect("free modules validate");
            let qb = q0_analysis(&b.q).expect("free modules validate");
            // On a free module Q₀ embeds basis words into basis words.
            assert_eq!(qb.qsusp1.fp().total_dim(), 0);
            for s in 0..max_length {
                for k in 0..=d {
                    let lhs = cell_dim(&qa.qsusp, s, k - 1)
                        + cell_dim(&qb.qsusp1, s + 1, k - 1);
                    let rhs = cell_dim(&b.q, s, k);
                    assert_eq!(
                        lhs, rhs,
                        "suspension sequence at length {s}, degree {k} \
                         over {}",
                        m.name(),
                    );
                }
            }
        }
    }

    #[test]
    fn loop_identity_on_the_shifted_dual_family() {
        // With the operations acting trivially, suspending the
        // destabilized shifted dual and applying the loop functor lands on
        // the destabilized once-deshifted dual:
        //   Ω(ΣH₀𝔯ΣⁿA*) ≅ ΣH₀𝔯Σ^{n−1}A*.
        let d = 16i64;
        for n in 0..=3i64 {
            let a = h0r_dual_steenrod(n, d);
            let premise = q0_analysis(&a.q).expect("triv module validates");
            assert!(premise.im_q.is_empty(), "the premise: no operation image");

            let omega = a.q.fp().suspend(1).loops().omega;
            let b = h0r_dual_steenrod(n - 1, d);
            let target = clip(b.q.fp().suspend(1), d);
            assert_eq!(
                clip(omega, d).hilbert(),
                target.hilbert(),
                "loops of the suspended shift {n} vs shift {}",
                n - 1,
            );
        }
    }

    #[test]
    fn certificate_reports_violations() {
        // Claiming one connectivity level too much turns the degree-0
        // class of the free object into a violation.
        let overstated = H0RObject {
            q: singer_free(&FpModule::sigma_f(0, 10), 2, 10),
            provenance: Provenance::Unstable { connectivity: 0 },
        };
        match connectivity_certificate(&overstated) {
            Err(DestabError::Connectivity { length, degree, bound }) => {
                assert_eq!((length, degree, bound), (0, 0, 0));
            }
            other => panic!("expected a connectivity violation, got {other:?}"),
        }
    }
}
