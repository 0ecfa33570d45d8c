//! Categories of transitive matrices and thickenings of association schemes.
//!
//! A matrix `Z` with `z_ij, z_jk ≥ 1 ⇒ z_ik ≥ 1` and diagonal at least two
//! determines a category `C_Z` on `m` objects with `z_ij` morphisms `i → j`.
//! Each nonempty hom-set carries a frame element `φ_ij` (λ = 0) and extras
//! `φ_ij^λ`; any composite of two non-identities is the frame element.

use std::collections::HashMap;

use thiserror::Error;

use crate::fincat::{CategoryBuilder, CategoryError, FinCategory, Functor, MorId};
use crate::schemes::{AssociationScheme, SchemeError, SchemeMorphism};
use crate::schemoid::{
    check_association, check_concatenation, AssociationSchemoid, MorphismPartition, QuasiSchemoid,
    SchemoidError, SchemoidMorphism,
};

#[derive(Debug, Error)]
pub enum ThickenError {
    #[error("matrix is not square")]
    NotSquare,
    #[error("matrix is empty")]
    Empty,
    #[error("not transitive: z_{i}{j} and z_{j}{k} are positive but z_{i}{k} = 0", i = .0, j = .1, k = .2)]
    NotTransitive(usize, usize, usize),
    #[error("diagonal entry z_{0}{0} = {1} is below 2")]
    DiagonalTooSmall(usize, usize),
    #[error("thickness must be at least 1 (class `{0}`)")]
    ZeroThickness(String),
    #[error("expected {expected} thickness values, got {got}")]
    ThicknessCount { expected: usize, got: usize },
    #[error("an involution needs equal thickness on every class")]
    UnequalThickness,
    #[error("residual blocks do not partition the non-frame morphisms: {0}")]
    NotAPartition(String),
    #[error("thickened schemoids differ in thickness")]
    ThicknessMismatch,
    #[error("scheme morphism does not fit the thickened schemoids")]
    NotSchemeMorphism,
    #[error(transparent)]
    Scheme(#[from] SchemeError),
    #[error(transparent)]
    Category(#[from] CategoryError),
    #[error(transparent)]
    Schemoid(#[from] SchemoidError),
}

/// A square matrix of nonnegative integers closed under the transitivity rule.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TransitiveMatrix {
    z: Vec<Vec<usize>>,
}

impl TransitiveMatrix {
    pub fn new(z: Vec<Vec<usize>>) -> Result<Self, ThickenError> {
        let m = z.len();
        if m == 0 {
            return Err(ThickenError::Empty);
        }
        if z.iter().any(|r| r.len() != m) {
            return Err(ThickenError::NotSquare);
        }
        for i in 0..m {
            for j in 0..m {
                if z[i][j] == 0 {
                    continue;
                }
                for k in 0..m {
                    if z[j][k] >= 1 && z[i][k] == 0 {
                        return Err(ThickenError::NotTransitive(i, j, k));
                    }
                }
            }
        }
        Ok(TransitiveMatrix { z })
    }

    pub fn size(&self) -> usize {
        self.z.len()
    }

    pub fn get(&self, i: usize, j: usize) -> usize {
        self.z[i][j]
    }

    pub fn rows(&self) -> &[Vec<usize>] {
        &self.z
    }
}

pub fn morphism_name(i: usize, j: usize, lambda: usize) -> String {
    format!("phi_{i}_{j}_{lambda}")
}

/// `C_Z` with its frame and extras recorded.
#[derive(Debug, Clone)]
pub struct FramedCategory {
    category: FinCategory,
    matrix: TransitiveMatrix,
    /// `(i, j, λ)` for each non-identity morphism.
    label: Vec<Option<(usize, usize, usize)>>,
    by_label: HashMap<(usize, usize, usize), MorId>,
}

impl FramedCategory {
    pub fn category(&self) -> &FinCategory {
        &self.category
    }

    pub fn matrix(&self) -> &TransitiveMatrix {
        &self.matrix
    }

    pub fn size(&self) -> usize {
        self.matrix.size()
    }

    /// The frame element `φ_ij`, present whenever `z_ij ≥ 1`.
    pub fn frame(&self, i: usize, j: usize) -> Option<MorId> {
        self.by_label.get(&(i, j, 0)).copied()
    }

    /// Extras `φ_ij^λ` for `λ ≥ 1`, in order.
    pub fn extras(&self, i: usize, j: usize) -> Vec<MorId> {
        (1..)
            .map_while(|l| self.by_label.get(&(i, j, l)).copied())
            .collect()
    }

    pub fn morphism(&self, i: usize, j: usize, lambda: usize) -> Option<MorId> {
        self.by_label.get(&(i, j, lambda)).copied()
    }

    /// `(i, j, λ)` of a non-identity morphism.
    pub fn label(&self, f: MorId) -> Option<(usize, usize, usize)> {
        self.label[f]
    }

    pub fn is_frame(&self, f: MorId) -> bool {
        matches!(self.label[f], Some((_, _, 0)))
    }

    /// Morphisms that are neither identities nor frame elements.
    pub fn residual(&self) -> Vec<MorId> {
        (0..self.category.num_morphisms())
            .filter(|&f| matches!(self.label[f], Some((_, _, l)) if l > 0))
            .collect()
    }

    /// `|Hom(i, j)|` for every pair.
    pub fn hom_counts(&self) -> Vec<Vec<usize>> {
        let m = self.size();
        (0..m)
            .map(|i| (0..m).map(|j| self.category.hom(i, j).len()).collect())
            .collect()
    }

    /// A non-identity, non-frame morphism written as `u∘v` with neither factor
    /// an identity.
    pub fn factorization_witness(&self) -> Option<(MorId, MorId, MorId)> {
        self.category.composable_pairs().find(|&(u, v, uv)| {
            !self.category.is_identity(u)
                && !self.category.is_identity(v)
                && !self.category.is_identity(uv)
                && !self.is_frame(uv)
        })
    }
}

pub fn category_from_matrix(z: &TransitiveMatrix) -> Result<FramedCategory, ThickenError> {
    let m = z.size();
    for i in 0..m {
        if z.get(i, i) < 2 {
            return Err(ThickenError::DiagonalTooSmall(i, z.get(i, i)));
        }
    }
    // Number of non-identity morphisms i → j.
    let count = |i: usize, j: usize| z.get(i, j) - usize::from(i == j);
    let mut b = CategoryBuilder::new();
    for i in 0..m {
        b.object_with_identity(i.to_string());
    }
    for i in 0..m {
        for j in 0..m {
            for l in 0..count(i, j) {
                b.morphism(morphism_name(i, j, l), i.to_string(), j.to_string());
            }
        }
    }
    for i in 0..m {
        for j in 0..m {
            for k in 0..m {
                if count(i, j) == 0 || count(j, k) == 0 {
                    continue;
                }
                let ik = morphism_name(i, k, 0);
                for a in 0..count(i, j) {
                    for c in 0..count(j, k) {
                        b.compose(morphism_name(j, k, c), morphism_name(i, j, a), ik.clone());
                    }
                }
            }
        }
    }
    let category = b.build()?;
    let mut label = vec![None; category.num_morphisms()];
    let mut by_label = HashMap::new();
    for i in 0..m {
        for j in 0..m {
            for l in 0..count(i, j) {
                let f = category
                    .morphism_id(&morphism_name(i, j, l))
                    .expect("declared above");
                label[f] = Some((i, j, l));
                by_label.insert((i, j, l), f);
            }
        }
    }
    Ok(FramedCategory {
        category,
        matrix: z.clone(),
        label,
        by_label,
    })
}

/// How the residual morphisms are grouped in `Σ′`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Residual {
    Lump,
    Singletons,
    Blocks(Vec<Vec<MorId>>),
}

/// Frame singletons, the identities and the residual blocks `Q_λ`.
pub fn sigma_prime(
    framed: &FramedCategory,
    residual: &Residual,
) -> Result<QuasiSchemoid, ThickenError> {
    let c = framed.category();
    let rest = framed.residual();
    let q_blocks: Vec<Vec<MorId>> = match residual {
        Residual::Lump if rest.is_empty() => vec![],
        Residual::Lump => vec![rest.clone()],
        Residual::Singletons => rest.iter().map(|&f| vec![f]).collect(),
        Residual::Blocks(bs) => {
            let mut seen: Vec<MorId> = bs.iter().flatten().copied().collect();
            seen.sort_unstable();
            let n = seen.len();
            seen.dedup();
            if seen.len() != n {
                return Err(ThickenError::NotAPartition(
                    "a morphism is listed twice".into(),
                ));
            }
            if seen != rest {
                return Err(ThickenError::NotAPartition(
                    "blocks must cover exactly the non-frame, non-identity morphisms".into(),
                ));
            }
            if bs.iter().any(|b| b.is_empty()) {
                return Err(ThickenError::NotAPartition("empty block".into()));
            }
            bs.clone()
        }
    };
    let mut names = vec!["1".to_string()];
    let mut blocks = vec![(0..c.num_objects())
        .map(|x| c.identity(x))
        .collect::<Vec<_>>()];
    for f in 0..c.num_morphisms() {
        if framed.is_frame(f) {
            names.push(c.morphism_name(f).to_string());
            blocks.push(vec![f]);
        }
    }
    for (k, b) in q_blocks.into_iter().enumerate() {
        names.push(format!("Q{k}"));
        blocks.push(b);
    }
    let part = MorphismPartition::new(c, names, blocks)?;
    Ok(QuasiSchemoid::new(c.clone(), part)?)
}

/// `SC_{z_0..z_s}(X, P)` together with the block bookkeeping.
#[derive(Debug, Clone)]
pub struct Thickening {
    framed: FramedCategory,
    quasi: QuasiSchemoid,
    scheme: AssociationScheme,
    z: Vec<usize>,
    frame_block: Vec<usize>,
    extra_block: Vec<Option<usize>>,
}

impl Thickening {
    pub fn framed(&self) -> &FramedCategory {
        &self.framed
    }

    pub fn quasi(&self) -> &QuasiSchemoid {
        &self.quasi
    }

    pub fn into_quasi(self) -> QuasiSchemoid {
        self.quasi
    }

    pub fn scheme(&self) -> &AssociationScheme {
        &self.scheme
    }

    pub fn thickness(&self) -> &[usize] {
        &self.z
    }

    pub fn identity_block(&self) -> usize {
        0
    }

    /// `σ_l`, the frame elements of class `l`.
    pub fn frame_block(&self, l: usize) -> usize {
        self.frame_block[l]
    }

    /// `σ̃_l`, absent when `z_l = 1`.
    pub fn extra_block(&self, l: usize) -> Option<usize> {
        self.extra_block[l]
    }

    pub fn equal_thickness(&self) -> bool {
        self.z.windows(2).all(|w| w[0] == w[1])
    }
}

/// Builds `C_Z` for `Z = Σ z_l R_l + I` and partitions it by scheme class.
/// `φ_ij` lies in `σ_l` when `(j, i) ∈ P_l`.
pub fn thicken_scheme(scheme: &AssociationScheme, z: &[usize]) -> Result<Thickening, ThickenError> {
    let (n, r) = (scheme.size(), scheme.rank());
    if z.len() != r {
        return Err(ThickenError::ThicknessCount {
            expected: r,
            got: z.len(),
        });
    }
    if let Some(l) = z.iter().position(|&v| v == 0) {
        return Err(ThickenError::ZeroThickness(scheme.classes()[l].clone()));
    }
    let rows = (0..n)
        .map(|i| {
            (0..n)
                .map(|j| z[scheme.class_of(i, j)] + usize::from(i == j))
                .collect()
        })
        .collect();
    let framed = category_from_matrix(&TransitiveMatrix::new(rows)?)?;
    let c = framed.category();
    let classes = scheme.classes();
    let mut names = vec!["1".to_string()];
    let mut blocks: Vec<Vec<MorId>> = vec![(0..n).map(|x| c.identity(x)).collect()];
    let mut frame_block = Vec::with_capacity(r);
    for l in 0..r {
        frame_block.push(blocks.len());
        names.push(classes[l].clone());
        blocks.push(Vec::new());
    }
    let mut extra_block = vec![None; r];
    for l in 0..r {
        if z[l] > 1 {
            extra_block[l] = Some(blocks.len());
            names.push(format!("{}~", classes[l]));
            blocks.push(Vec::new());
        }
    }
    for f in 0..c.num_morphisms() {
        if let Some((i, j, lambda)) = framed.label(f) {
            let l = scheme.class_of(j, i);
            let b = if lambda == 0 {
                frame_block[l]
            } else {
                extra_block[l].expect("extras exist only when z_l > 1")
            };
            blocks[b].push(f);
        }
    }
    let part = MorphismPartition::new(c, names, blocks)?;
    let quasi = QuasiSchemoid::new(c.clone(), part)?;
    Ok(Thickening {
        framed,
        quasi,
        scheme: scheme.clone(),
        z: z.to_vec(),
        frame_block,
        extra_block,
    })
}

/// `T(φ_ij^λ) = φ_ji^λ`, `T(1_i) = 1_i`.
pub fn thicken_involution(th: &Thickening) -> Result<AssociationSchemoid, ThickenError> {
    if !th.equal_thickness() {
        return Err(ThickenError::UnequalThickness);
    }
    let c = th.framed.category();
    let morphisms = (0..c.num_morphisms())
        .map(|f| match th.framed.label(f) {
            None => f,
            Some((i, j, l)) => th.framed.morphism(j, i, l).expect("equal thickness"),
        })
        .collect();
    let t = Functor {
        objects: (0..c.num_objects()).collect(),
        morphisms,
        contravariant: true,
    };
    check_association(&th.quasi, &t)?;
    Ok(AssociationSchemoid::new(th.quasi.clone(), &t)?)
}

/// `Φ: SC → j(X, P)` with `φ_ij^λ ↦ (j, i)` and `1_i ↦ (i, i)`.
pub fn projection_phi(
    th: &Thickening,
    target: &QuasiSchemoid,
) -> Result<SchemoidMorphism, ThickenError> {
    let n = th.scheme.size();
    let tc = target.category();
    if tc.num_objects() != n || tc.num_morphisms() != n * n {
        return Err(ThickenError::NotSchemeMorphism);
    }
    let c = th.framed.category();
    let morphisms = (0..c.num_morphisms())
        .map(|f| match th.framed.label(f) {
            None => crate::schemes::j_index(n, c.src(f), c.src(f)),
            Some((i, j, _)) => crate::schemes::j_index(n, j, i),
        })
        .collect();
    let functor = Functor {
        objects: (0..n).collect(),
        morphisms,
        contravariant: false,
    };
    Ok(SchemoidMorphism::new(functor, &th.quasi, target)?)
}

/// `SC_z(f)`: `φ_ij^λ ↦ ψ_{f(i) f(j)}^λ`.
pub fn sc_functor(
    f: &SchemeMorphism,
    source: &Thickening,
    target: &Thickening,
) -> Result<SchemoidMorphism, ThickenError> {
    if !source.equal_thickness()
        || !target.equal_thickness()
        || source.z.first() != target.z.first()
    {
        return Err(ThickenError::ThicknessMismatch);
    }
    let checked = SchemeMorphism::new(f.map.clone(), &source.scheme, &target.scheme)
        .map_err(|_| ThickenError::NotSchemeMorphism)?;
    let (sc, tc) = (source.framed.category(), target.framed.category());
    let map = &checked.map;
    let morphisms = (0..sc.num_morphisms())
        .map(|g| match source.framed.label(g) {
            None => Ok(tc.identity(map[sc.src(g)])),
            Some((i, j, l)) => target
                .framed
                .morphism(map[i], map[j], l)
                .ok_or(ThickenError::NotSchemeMorphism),
        })
        .collect::<Result<Vec<_>, _>>()?;
    let functor = Functor {
        objects: map.clone(),
        morphisms,
        contravariant: false,
    };
    Ok(SchemoidMorphism::new(
        functor,
        &source.quasi,
        &target.quasi,
    )?)
}

/// A structure constant that breaks one of the twelve laws of a thickening.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LawViolation {
    pub law: &'static str,
    pub sigma: String,
    pub tau: String,
    pub mu: String,
    pub expected: u64,
    pub found: u64,
}

/// Checks the identities (i)–(xii) relating the constants of `SC` to its
/// frame constants. Returns every violation.
pub fn check_thickening_laws(th: &Thickening) -> Vec<LawViolation> {
    let q = &th.quasi;
    let r = th.z.len();
    let one = th.identity_block();
    let names = q.partition().names();
    let frames: Vec<usize> = (0..r).map(|l| th.frame_block[l]).collect();
    let tildes: Vec<(usize, usize)> = (0..r)
        .filter_map(|l| th.extra_block[l].map(|b| (l, b)))
        .collect();
    let non_unit: Vec<usize> = frames
        .iter()
        .copied()
        .chain(tildes.iter().map(|&(_, b)| b))
        .collect();
    let mut out = Vec::new();
    let mut expect = |law: &'static str, s: usize, t: usize, m: usize, expected: u64| {
        let found = q.p(s, t, m);
        if found != expected {
            out.push(LawViolation {
                law,
                sigma: names[s].clone(),
                tau: names[t].clone(),
                mu: names[m].clone(),
                expected,
                found,
            });
        }
    };
    let d = |a: usize, b: usize| u64::from(a == b);
    expect("i", one, one, one, 1);
    for &u in &non_unit {
        for &v in &non_unit {
            expect("ii", u, v, one, 0);
        }
    }
    for &(_, st) in &tildes {
        expect("iii", one, one, st, 0);
        for &(_, tt) in &tildes {
            expect("iv", one, tt, st, d(st, tt));
            expect("iv", tt, one, st, d(st, tt));
        }
        for &u in &non_unit {
            for &v in &non_unit {
                expect("v", u, v, st, 0);
            }
        }
        for &t in &frames {
            expect("vi", one, t, st, 0);
            expect("vi", t, one, st, 0);
        }
    }
    for &s in &frames {
        expect("vii", one, one, s, 0);
        for &(_, tt) in &tildes {
            expect("viii", one, tt, s, 0);
            expect("viii", tt, one, s, 0);
        }
        for &t in &frames {
            expect("ix", one, t, s, d(s, t));
            expect("ix", t, one, s, d(s, t));
        }
        for &(lm, mt) in &tildes {
            let zm = th.z[lm] as u64 - 1;
            let m = frames[lm];
            for &t in &frames {
                expect("x", t, mt, s, q.p(t, m, s) * zm);
                expect("xi", mt, t, s, zm * q.p(m, t, s));
            }
            for &(lt, tt) in &tildes {
                let zt = th.z[lt] as u64 - 1;
                expect("xii", mt, tt, s, zm * q.p(m, frames[lt], s) * zt);
            }
        }
    }
    out
}

/// Convenience check that the thickened partition satisfies the axiom and is unital.
pub fn verify_thickening(th: &Thickening) -> Result<(), ThickenError> {
    check_concatenation(th.quasi.category(), th.quasi.partition())?;
    if !th.quasi.is_unital() {
        return Err(ThickenError::Schemoid(SchemoidError::NotAPartition(
            "identity block is not the set of identities".into(),
        )));
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::schemes::{hamming, j_embed};

    fn tm(z: Vec<Vec<usize>>) -> TransitiveMatrix {
        TransitiveMatrix::new(z).unwrap()
    }

    #[test]
    fn one_by_one() {
        let f = category_from_matrix(&tm(vec![vec![2]])).unwrap();
        let c = f.category();
        assert_eq!(c.num_morphisms(), 2);
        let phi = f.frame(0, 0).unwrap();
        assert_eq!(c.compose(phi, phi), Some(phi));
    }

    #[test]
    fn two_by_two() {
        let f = category_from_matrix(&tm(vec![vec![2, 1], vec![1, 2]])).unwrap();
        assert_eq!(f.category().num_morphisms(), 6);
        assert_eq!(f.hom_counts(), vec![vec![2, 1], vec![1, 2]]);
        assert!(f.factorization_witness().is_none());
    }

    #[test]
    fn rejects_bad_matrices() {
        assert!(matches!(
            TransitiveMatrix::new(vec![vec![2, 1, 0], vec![0, 2, 1], vec![0, 0, 2]]),
            Err(ThickenError::NotTransitive(0, 1, 2))
        ));
        assert!(matches!(
            category_from_matrix(&tm(vec![vec![1]])),
            Err(ThickenError::DiagonalTooSmall(0, 1))
        ));
    }

    #[test]
    fn sigma_prime_modes() {
        let f = category_from_matrix(&tm(vec![vec![3, 2], vec![2, 3]])).unwrap();
        for mode in [Residual::Lump, Residual::Singletons] {
            let q = sigma_prime(&f, &mode).unwrap();
            assert!(q.is_unital());
        }
        let bad = Residual::Blocks(vec![vec![f.frame(0, 1).unwrap()]]);
        assert!(matches!(
            sigma_prime(&f, &bad),
            Err(ThickenError::NotAPartition(_))
        ));
    }

    #[test]
    fn hamming_thickenings() {
        let h = hamming(2, 2).unwrap();
        let th1 = thicken_scheme(&h, &[1, 1, 1]).unwrap();
        assert_eq!(th1.quasi().num_blocks(), 4);
        assert_eq!(th1.framed().category().num_morphisms(), 20);
        verify_thickening(&th1).unwrap();
        assert!(check_thickening_laws(&th1).is_empty());
        let th2 = thicken_scheme(&h, &[2, 2, 2]).unwrap();
        assert_eq!(th2.quasi().num_blocks(), 7);
        assert!(check_thickening_laws(&th2).is_empty());
        thicken_involution(&th2).unwrap();
        let j = j_embed(h.configuration());
        projection_phi(&th2, &j.quasi).unwrap();
    }

    #[test]
    fn unequal_thickness_has_no_involution() {
        let h = hamming(1, 2).unwrap();
        let th = thicken_scheme(&h, &[1, 2]).unwrap();
        verify_thickening(&th).unwrap();
        assert!(matches!(
            thicken_involution(&th),
            Err(ThickenError::UnequalThickness)
        ));
    }

    #[test]
    fn collapse_to_a_point() {
        let h = hamming(2, 2).unwrap();
        let p = AssociationScheme::trivial(1);
        let (a, b) = (
            thicken_scheme(&h, &[2, 2, 2]).unwrap(),
            thicken_scheme(&p, &[2]).unwrap(),
        );
        let f = SchemeMorphism::new(vec![0; 4], h.configuration(), p.configuration()).unwrap();
        sc_functor(&f, &a, &b).unwrap();
    }
}
