//! Admissible morphisms, multiplicities and induced algebra maps.

use std::collections::HashMap;

use serde::Serialize;
use thiserror::Error;

use crate::algebra::{check_algebra_hom, AlgebraError, AlgebraMap, HomReport, SchemoidAlgebra};
use crate::fincat::{MorId, ObjId};
use crate::linalg::{self, Ring};
use crate::schemoid::{QuasiSchemoid, SchemoidMorphism};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum AdmissibleError {
    #[error("morphism is not admissible ({0} failures)")]
    NotAdmissible(usize),
    #[error("source is neither a groupoid nor satisfies condition (P)")]
    SourceHypothesis,
    #[error("target is not basic")]
    TargetNotBasic,
    #[error("fiber sizes over block `{sigma}` are not constant: {witnesses:?}")]
    NonConstantFiber {
        sigma: String,
        /// `(x, g, fiber size)` for two disagreeing fibers.
        witnesses: Vec<(ObjId, MorId, usize)>,
    },
    #[error("induced map is not an algebra homomorphism at basis pair {0:?}")]
    HomCheckFailed(Option<(usize, usize)>),
    #[error(transparent)]
    Algebra(#[from] AlgebraError),
}

/// A failure of surjectivity: nothing in `σ` with target `x` maps to `g`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct AdmissibilityFailure {
    pub object: ObjId,
    pub block: usize,
    pub target_morphism: MorId,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct AdmissibilityReport {
    pub admissible: bool,
    pub failures: Vec<AdmissibilityFailure>,
    /// Source blocks landing in an identity block of the target.
    pub kernel: Vec<usize>,
}

/// `|φ⁻¹(g) ∩ xσ|` for every `x`, `σ` and `g ∈ φ(σ)` with `t(g) = φ(x)`.
pub fn fiber_census(
    phi: &SchemoidMorphism,
    source: &QuasiSchemoid,
    target: &QuasiSchemoid,
) -> Vec<(ObjId, usize, MorId, usize)> {
    let c = source.category();
    let d = target.category();
    let mut counts: HashMap<(ObjId, usize, MorId), usize> = HashMap::new();
    for f in 0..c.num_morphisms() {
        *counts
            .entry((c.tgt(f), source.block_of(f), phi.functor.morphisms[f]))
            .or_default() += 1;
    }
    let mut out = Vec::new();
    for x in 0..c.num_objects() {
        let fx = phi.functor.objects[x];
        for (sigma, &tau) in phi.block_image.iter().enumerate() {
            for &g in target.partition().block(tau) {
                if d.tgt(g) == fx {
                    let n = counts.get(&(x, sigma, g)).copied().unwrap_or(0);
                    out.push((x, sigma, g, n));
                }
            }
        }
    }
    out
}

pub fn is_admissible(
    phi: &SchemoidMorphism,
    source: &QuasiSchemoid,
    target: &QuasiSchemoid,
) -> AdmissibilityReport {
    let failures: Vec<AdmissibilityFailure> = fiber_census(phi, source, target)
        .into_iter()
        .filter(|&(_, _, _, n)| n == 0)
        .map(|(object, block, target_morphism, _)| AdmissibilityFailure {
            object,
            block,
            target_morphism,
        })
        .collect();
    let identity_blocks = target.identity_blocks();
    let kernel = phi
        .block_image
        .iter()
        .enumerate()
        .filter(|(_, t)| identity_blocks.contains(t))
        .map(|(s, _)| s)
        .collect();
    AdmissibilityReport {
        admissible: failures.is_empty(),
        failures,
        kernel,
    }
}

/// Two solutions of `f∘g = h` within fixed blocks that agree in two positions.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct UniquenessViolation {
    /// `"f,h"` when `f` and `h` are fixed, `"g,h"` when `g` and `h` are.
    pub fixed: &'static str,
    pub first: (MorId, MorId, MorId),
    pub second: (MorId, MorId, MorId),
}

/// Condition (P): given blocks for `f`, `g`, `h`, any two of them determine the third.
pub fn check_unique_solutions(qs: &QuasiSchemoid) -> Result<(), UniquenessViolation> {
    let c = qs.category();
    let mut by_fh: HashMap<(MorId, MorId, usize), (MorId, MorId, MorId)> = HashMap::new();
    let mut by_gh: HashMap<(MorId, MorId, usize), (MorId, MorId, MorId)> = HashMap::new();
    for (f, g, h) in c.composable_pairs() {
        if let Some(&first) = by_fh.get(&(f, h, qs.block_of(g))) {
            return Err(UniquenessViolation {
                fixed: "f,h",
                first,
                second: (f, g, h),
            });
        }
        by_fh.insert((f, h, qs.block_of(g)), (f, g, h));
        if let Some(&first) = by_gh.get(&(g, h, qs.block_of(f))) {
            return Err(UniquenessViolation {
                fixed: "g,h",
                first,
                second: (f, g, h),
            });
        }
        by_gh.insert((g, h, qs.block_of(f)), (f, g, h));
    }
    Ok(())
}

/// The constants `n_σ^φ`, after checking the hypotheses and fiber constancy.
pub fn multiplicities(
    phi: &SchemoidMorphism,
    source: &QuasiSchemoid,
    target: &QuasiSchemoid,
) -> Result<Vec<usize>, AdmissibleError> {
    if !source.category().is_groupoid() && check_unique_solutions(source).is_err() {
        return Err(AdmissibleError::SourceHypothesis);
    }
    if !target.is_basic() {
        return Err(AdmissibleError::TargetNotBasic);
    }
    let census = fiber_census(phi, source, target);
    let failures = census.iter().filter(|c| c.3 == 0).count();
    if failures > 0 {
        return Err(AdmissibleError::NotAdmissible(failures));
    }
    let mut n: Vec<Option<(ObjId, MorId, usize)>> = vec![None; source.num_blocks()];
    for &(x, sigma, g, count) in &census {
        match n[sigma] {
            None => n[sigma] = Some((x, g, count)),
            Some(first) if first.2 != count => {
                return Err(AdmissibleError::NonConstantFiber {
                    sigma: source.partition().name(sigma).to_string(),
                    witnesses: vec![first, (x, g, count)],
                })
            }
            Some(_) => {}
        }
    }
    Ok(n.into_iter()
        .map(|e| e.expect("every block has a morphism, hence a fiber").2)
        .collect())
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct IdentityRow {
    pub pi: usize,
    pub rho: usize,
    pub tau: usize,
    pub lhs: u64,
    pub rhs: u64,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct IdentityTable {
    pub holds: bool,
    pub rows: Vec<IdentityRow>,
}

/// `Σ_{φ(σ)=τ} p^σ_{πρ} n_σ = p^τ_{φ(π)φ(ρ)} n_π n_ρ` for all `π, ρ, τ`.
pub fn verify_multiplicity_identity(
    phi: &SchemoidMorphism,
    source: &QuasiSchemoid,
    target: &QuasiSchemoid,
    n: &[usize],
) -> IdentityTable {
    let s = source.num_blocks();
    let mut rows = Vec::with_capacity(s * s * target.num_blocks());
    for pi in 0..s {
        for rho in 0..s {
            for tau in 0..target.num_blocks() {
                let lhs = (0..s)
                    .filter(|&sigma| phi.block_image[sigma] == tau)
                    .map(|sigma| source.p(pi, rho, sigma) * n[sigma] as u64)
                    .sum();
                let rhs = target.p(phi.block_image[pi], phi.block_image[rho], tau)
                    * (n[pi] * n[rho]) as u64;
                rows.push(IdentityRow {
                    pi,
                    rho,
                    tau,
                    lhs,
                    rhs,
                });
            }
        }
    }
    IdentityTable {
        holds: rows.iter().all(|r| r.lhs == r.rhs),
        rows,
    }
}

/// Matrix of `s_π ↦ n_π s_{φ(π)}`.
pub fn multiplicity_matrix(
    phi: &SchemoidMorphism,
    target_dim: usize,
    n: &[usize],
    ring: Ring,
) -> AlgebraMap {
    let cols = phi.block_image.len();
    let mut m = linalg::zero_matrix(ring, target_dim, cols);
    for (pi, &tau) in phi.block_image.iter().enumerate() {
        m[tau][pi] = ring.from_u64(n[pi] as u64);
    }
    AlgebraMap::new(ring, m, cols)
}

/// The induced map, certified to be multiplicative.
pub fn induced_algebra_map(
    phi: &SchemoidMorphism,
    source: &QuasiSchemoid,
    target: &QuasiSchemoid,
    ring: Ring,
) -> Result<(AlgebraMap, HomReport), AdmissibleError> {
    let n = multiplicities(phi, source, target)?;
    let map = multiplicity_matrix(phi, target.num_blocks(), &n, ring);
    let a = SchemoidAlgebra::new(source, ring);
    let b = SchemoidAlgebra::new(target, ring);
    let report = check_algebra_hom(&map, &a, &b)?;
    if !report.multiplicative {
        return Err(AdmissibleError::HomCheckFailed(report.witness));
    }
    Ok((map, report))
}

/// Checks `𝕂(ψ∘φ) = 𝕂(ψ)∘𝕂(φ)` for `φ: A → B`, `ψ: B → C`.
pub fn check_functoriality(
    phi: &SchemoidMorphism,
    psi: &SchemoidMorphism,
    a: &QuasiSchemoid,
    b: &QuasiSchemoid,
    c: &QuasiSchemoid,
    ring: Ring,
) -> Result<bool, AdmissibleError> {
    let (kphi, _) = induced_algebra_map(phi, a, b, ring)?;
    let (kpsi, _) = induced_algebra_map(psi, b, c, ring)?;
    let (kcomp, _) = induced_algebra_map(&phi.then(psi), a, c, ring)?;
    Ok(kphi.then(&kpsi) == kcomp)
}

/// A target block with a positive constant over image blocks that is not itself an image.
pub fn image_closure_violation(
    phi: &SchemoidMorphism,
    target: &QuasiSchemoid,
) -> Option<(usize, usize, usize)> {
    let mut image = phi.block_image.clone();
    image.sort_unstable();
    image.dedup();
    for &a in &image {
        for &b in &image {
            for tau in 0..target.num_blocks() {
                if target.p(a, b, tau) > 0 && image.binary_search(&tau).is_err() {
                    return Some((a, b, tau));
                }
            }
        }
    }
    None
}
