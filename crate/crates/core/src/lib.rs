//! Mod-2 operator calculus at desk scale.
//!
//! This crate mechanizes a fragment of unstable homological algebra over the
//! mod-2 Steenrod algebra and the (big) Dyer-Lashof algebra:
//!
//! * [`gf2`] — sparse linear algebra over F₂: row reduction, kernels,
//!   quotients, chain-complex homology.
//! * [`seqcomb`] — admissible-sequence combinatorics: degree, excess,
//!   truncations, enumeration, the γ-splitting and lower↔upper reindexing.
//! * [`steenrod`] — binomials mod 2, Adem normal forms, free unstable modules
//!   `F(n)` and their duals, the Frobenius Φ and `Sq₀`, loop functors Ω/Ω₁,
//!   Hilbert series, and a single-delooping spectral sequence.
//! * [`dyerlashof`] — Dyer-Lashof Adem rewriting to allowable form, the free
//!   functor ℛ with its length grading, Nishida actions, and the suspension
//!   analysis of `Q₀`.
//! * [`steinberg`] — the Steinberg functors 𝓛ₛ as kernel intersections inside
//!   (ℛ₁)^s, with three independent basis counts and the suspension sequence.
//! * [`koszul`] — the Koszul complex and the reduced bar complex, two
//!   independent computations of the derived functors 𝕃ₜ𝐪 of Dyer-Lashof
//!   indecomposables.
//! * [`destab`] — H₀𝔯 in its computable cases and the single-desuspension
//!   analysis.
//! * [`specseq`] — the infinite-delooping spectral sequence at desk scale:
//!   dual-Steenrod reconstruction and the double-desuspension filtration.
//!
//! # Conventions
//!
//! Everything is homologically graded over F₂. Steenrod operations act on the
//! *right* and lower degree: `x·Sq^r` has degree `|x| − r`, and instability
//! reads `x·Sq^r = 0` whenever `2r > |x|`. Dyer-Lashof operations raise
//! degree: `Q^i` has degree `+i`, with lower indexing `Q_a x = Q^{|x|+a} x`
//! and instability `Q_a = 0` for `a < 0`.
//!
//! # Determinism
//!
//! All computations are deterministic: bases are echelonized with
//! lowest-column pivots, enumerations are emitted in a fixed lexicographic
//! order, and maps iterate in sorted key order. Identical inputs produce
//! byte-identical serialized output.

pub mod destab;
pub mod dyerlashof;
pub mod gf2;
pub mod koszul;
pub mod seqcomb;
pub mod specseq;
pub mod steenrod;
pub mod steinberg;
