//! Functors between groupoids and association schemoids: `S̃`, `R̃`, the
//! discrete functor `K`, the thin round trip `Φ`/`Ψ` and the inverse
//! construction behind faithfulness of `S̃`.

use std::collections::HashMap;

use thiserror::Error;

use crate::fincat::{
    as_groupoid, CategoryBuilder, CategoryError, FinCategory, Functor, FunctorError, Groupoid,
    MorId, ObjId,
};
use crate::schemoid::{
    analyze_thinness, AssociationSchemoid, BasePoints, MorphismPartition, QuasiSchemoid,
    SchemoidError, SchemoidMorphism,
};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum BridgeError {
    #[error(transparent)]
    Schemoid(#[from] SchemoidError),
    #[error(transparent)]
    Category(#[from] CategoryError),
    #[error(transparent)]
    Functor(#[from] FunctorError),
    #[error("not semi-thin: {0}")]
    NotSemiThin(String),
    #[error("not thin: {0}")]
    NotThin(String),
    #[error("block `{0}` has no unique identity block on its {1} side")]
    LemmaViolation(String, &'static str),
    #[error("no unique composite block for `{tau}`∘`{sigma}`")]
    UniquenessViolation { tau: String, sigma: String },
    #[error("morphism does not preserve base points at `{0}`")]
    NotBasePointPreserving(String),
    #[error("reconstructed map is not a functor: {0}")]
    NotAFunctor(String),
    #[error("round trip failed: {0}")]
    RoundTrip(String),
}

/// `S̃(H)` together with the index of its morphisms by pairs.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct STilde {
    pub schemoid: AssociationSchemoid,
    /// Objects `1_x`, one per object of `H`.
    pub base_points: Vec<ObjId>,
    pairs: Vec<(MorId, MorId)>,
    index: HashMap<(MorId, MorId), MorId>,
}

impl STilde {
    /// The morphism `(h, g): g → h`, present when `t(h) = t(g)`.
    pub fn pair(&self, h: MorId, g: MorId) -> Option<MorId> {
        self.index.get(&(h, g)).copied()
    }

    /// `(h, g)` for a morphism of `S̃(H)`.
    pub fn components(&self, m: MorId) -> (MorId, MorId) {
        self.pairs[m]
    }
}

/// `S̃(H)`: objects are morphisms of `H`, `Hom(g, h) = {(h, g)}` when
/// `t(h) = t(g)`, blocks `G_f = {(k, l) | k⁻¹l = f}` and `T(k, l) = (l, k)`.
pub fn s_tilde(h: &Groupoid) -> STilde {
    let n = h.num_morphisms();
    let name = |a: MorId| h.morphism_name(a);
    let pair_name = |k: MorId, l: MorId| format!("({},{})", name(k), name(l));
    let mut b = CategoryBuilder::new();
    for a in 0..n {
        b.object(name(a));
    }
    let mut pairs = Vec::new();
    for k in 0..n {
        for l in 0..n {
            if h.tgt(k) == h.tgt(l) {
                if k == l {
                    b.identity(name(k), pair_name(k, k));
                } else {
                    b.morphism(pair_name(k, l), name(l), name(k));
                }
                pairs.push((k, l));
            }
        }
    }
    for &(m, k) in &pairs {
        for &(k2, l) in &pairs {
            if k == k2 {
                b.compose(pair_name(m, k), pair_name(k, l), pair_name(m, l));
            }
        }
    }
    let category = b.build().expect("S̃ of a groupoid is a category");
    let index: HashMap<(MorId, MorId), MorId> =
        pairs.iter().enumerate().map(|(i, &p)| (p, i)).collect();
    let key = |m: MorId| {
        let (k, l) = pairs[m];
        h.compose(h.inverse(k), l).expect("k and l share a target")
    };
    let mut blocks = vec![Vec::new(); n];
    for m in 0..pairs.len() {
        blocks[key(m)].push(m);
    }
    let names = (0..n).map(|f| format!("G_{}", name(f))).collect();
    let partition =
        MorphismPartition::new(&category, names, blocks).expect("blocks partition pairs");
    let quasi = QuasiSchemoid::new(category, partition).expect("S̃ satisfies the axiom");
    let t = Functor {
        objects: (0..n).collect(),
        morphisms: pairs.iter().map(|&(k, l)| index[&(l, k)]).collect(),
        contravariant: true,
    };
    let schemoid = AssociationSchemoid::new(quasi, &t).expect("S̃ carries an involution");
    let base_points = (0..h.num_objects()).map(|x| h.identity(x)).collect();
    STilde {
        schemoid,
        base_points,
        pairs,
        index,
    }
}

/// `S̃(F)`: `f ↦ F(f)`, `(h, g) ↦ (F h, F g)`.
pub fn s_tilde_on_functor(
    f: &Functor,
    source: &STilde,
    target: &STilde,
) -> Result<SchemoidMorphism, BridgeError> {
    let functor = Functor {
        objects: f.morphisms.clone(),
        morphisms: source
            .pairs
            .iter()
            .map(|&(h, g)| {
                target
                    .pair(f.morphisms[h], f.morphisms[g])
                    .ok_or_else(|| BridgeError::NotAFunctor("targets not preserved".into()))
            })
            .collect::<Result<_, _>>()?,
        contravariant: false,
    };
    Ok(SchemoidMorphism::new(
        functor,
        &source.schemoid,
        &target.schemoid,
    )?)
}

/// `K(C)`: the discrete partition.
pub fn k_discrete(c: &FinCategory) -> QuasiSchemoid {
    QuasiSchemoid::discrete(c.clone())
}

/// Connected groupoid on `n` objects `0..n` with one morphism between any two.
pub fn pair_groupoid(n: usize) -> Groupoid {
    let mut b = CategoryBuilder::new();
    let name = |i: usize, j: usize| {
        if i == j {
            format!("1_{i}")
        } else {
            format!("{j}<-{i}")
        }
    };
    for i in 0..n {
        b.object(i.to_string()).identity(i.to_string(), name(i, i));
    }
    for i in 0..n {
        for j in 0..n {
            if i != j {
                b.morphism(name(i, j), i.to_string(), j.to_string());
            }
        }
    }
    for i in 0..n {
        for j in 0..n {
            for k in 0..n {
                b.compose(name(j, k), name(i, j), name(i, k));
            }
        }
    }
    as_groupoid(&b.build().expect("pair groupoids are categories"))
        .expect("all morphisms invertible")
}

/// Data behind `R̃`: identity blocks and the block-level composition.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ThinAnalysis {
    /// Blocks meeting the identities.
    pub s0: Vec<usize>,
    /// For each block σ, the `α ∈ S_0` with `p^σ_{σα} = 1`.
    pub source: Vec<usize>,
    /// For each block σ, the `β ∈ S_0` with `p^σ_{βσ} = 1`.
    pub target: Vec<usize>,
    /// `μ(τ, σ)` for composable blocks.
    pub composite: HashMap<(usize, usize), usize>,
}

/// `R̃` of a semi-thin schemoid; the groupoid's morphism `i` is block `i`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RTilde {
    pub groupoid: Groupoid,
    pub analysis: ThinAnalysis,
}

pub fn r_tilde(a: &AssociationSchemoid) -> Result<RTilde, BridgeError> {
    let (report, _) = analyze_thinness(a, None);
    if !report.semi_thin {
        return Err(BridgeError::NotSemiThin(report.witnesses.join("; ")));
    }
    let analysis = thin_analysis(a)?;
    let part = a.partition();
    let mut b = CategoryBuilder::new();
    for &al in &analysis.s0 {
        b.object(part.name(al));
    }
    for s in 0..a.num_blocks() {
        let (src, tgt) = (part.name(analysis.source[s]), part.name(analysis.target[s]));
        if analysis.s0.contains(&s) {
            b.identity(src, part.name(s));
        } else {
            b.morphism(part.name(s), src, tgt);
        }
    }
    for (&(tau, sigma), &mu) in &analysis.composite {
        b.compose(part.name(tau), part.name(sigma), part.name(mu));
    }
    let category = b.build()?;
    let groupoid = as_groupoid(&category)?;
    let inv = &a.involution.block_image;
    if let Some(s) = (0..a.num_blocks()).find(|&s| groupoid.inverse(s) != inv[s]) {
        return Err(BridgeError::RoundTrip(format!(
            "inverse of `{}` is not its transpose",
            part.name(s)
        )));
    }
    Ok(RTilde { groupoid, analysis })
}

/// Recomputes the identity-side lemmas and the block composition from the
/// structure constants.
pub fn thin_analysis(a: &QuasiSchemoid) -> Result<ThinAnalysis, BridgeError> {
    let part = a.partition();
    let s0 = a.identity_blocks();
    let n = a.num_blocks();
    let unique = |vals: Vec<(usize, u64)>| -> Option<usize> {
        let ones: Vec<usize> = vals
            .iter()
            .filter(|(_, v)| *v == 1)
            .map(|(k, _)| *k)
            .collect();
        (ones.len() == 1 && vals.iter().all(|(_, v)| *v <= 1)).then(|| ones[0])
    };
    let mut source = vec![0; n];
    let mut target = vec![0; n];
    for s in 0..n {
        source[s] = unique(s0.iter().map(|&al| (al, a.p(s, al, s))).collect())
            .ok_or_else(|| BridgeError::LemmaViolation(part.name(s).to_string(), "source"))?;
        target[s] = unique(s0.iter().map(|&be| (be, a.p(be, s, s))).collect())
            .ok_or_else(|| BridgeError::LemmaViolation(part.name(s).to_string(), "target"))?;
    }
    let mut composite = HashMap::new();
    for sigma in 0..n {
        for tau in 0..n {
            if target[sigma] != source[tau] {
                continue;
            }
            let vals: Vec<(usize, u64)> = (0..n).map(|mu| (mu, a.p(tau, sigma, mu))).collect();
            let mu =
                unique(vals).filter(|&mu| source[mu] == source[sigma] && target[mu] == target[tau]);
            let mu = mu.ok_or_else(|| BridgeError::UniquenessViolation {
                tau: part.name(tau).to_string(),
                sigma: part.name(sigma).to_string(),
            })?;
            composite.insert((tau, sigma), mu);
        }
    }
    Ok(ThinAnalysis {
        s0,
        source,
        target,
        composite,
    })
}

/// The canonical isomorphism `H → R̃S̃(H)`, `f ↦ G_f`, verified as a functor.
pub fn canonical_unit(h: &Groupoid) -> Result<(STilde, RTilde, Functor), BridgeError> {
    let st = s_tilde(h);
    let rt = r_tilde(&st.schemoid)?;
    let g = &rt.groupoid;
    let functor = Functor {
        objects: (0..h.num_objects())
            .map(|x| {
                let id_block = st
                    .schemoid
                    .block_of(st.schemoid.category().identity(h.identity(x)));
                g.src(id_block)
            })
            .collect(),
        morphisms: (0..h.num_morphisms()).collect(),
        contravariant: false,
    };
    functor.check(h, g)?;
    if !functor.is_bijective(g) {
        return Err(BridgeError::RoundTrip("unit is not bijective".into()));
    }
    Ok((st, rt, functor))
}

/// `Φ: C → S̃R̃(C)` and its inverse `Ψ` for a thin schemoid.
#[derive(Debug, Clone)]
pub struct PhiPsi {
    pub rtilde: RTilde,
    pub target: STilde,
    pub phi: SchemoidMorphism,
    pub psi: SchemoidMorphism,
    pub base: BasePoints,
}

pub fn phi_psi_check(
    a: &AssociationSchemoid,
    supplied: Option<&[ObjId]>,
) -> Result<PhiPsi, BridgeError> {
    let (report, base) = analyze_thinness(a, supplied);
    let base = base.ok_or_else(|| BridgeError::NotThin(report.witnesses.join("; ")))?;
    let rtilde = r_tilde(a)?;
    let target = s_tilde(&rtilde.groupoid);
    let c = a.category();
    let g = as_groupoid(c)?;

    let comps = c.components();
    let mut base_of = vec![usize::MAX; c.num_objects()];
    for comp in &comps {
        let v = *comp
            .iter()
            .find(|x| base.points.contains(x))
            .expect("every component has a base point");
        for &x in comp {
            base_of[x] = v;
        }
    }
    let rho: Vec<MorId> = (0..c.num_objects())
        .map(|x| c.hom(x, base_of[x])[0])
        .collect();
    let sigma_of: Vec<usize> = rho.iter().map(|&r| a.block_of(r)).collect();
    let phi_functor = Functor {
        objects: sigma_of.clone(),
        morphisms: (0..c.num_morphisms())
            .map(|f| {
                target
                    .pair(sigma_of[c.tgt(f)], sigma_of[c.src(f)])
                    .ok_or_else(|| BridgeError::RoundTrip("Φ(f) undefined".into()))
            })
            .collect::<Result<_, _>>()?,
        contravariant: false,
    };

    // f_σ: the element of σ ending at the base point of its target block
    let base_at: HashMap<usize, ObjId> = base
        .points
        .iter()
        .zip(&base.phi)
        .map(|(&v, &be)| (be, v))
        .collect();
    let f_sigma: Vec<MorId> = (0..a.num_blocks())
        .map(|s| {
            let v = base_at[&rtilde.analysis.target[s]];
            let found: Vec<MorId> = a
                .partition()
                .block(s)
                .iter()
                .copied()
                .filter(|&f| c.tgt(f) == v)
                .collect();
            if found.len() == 1 {
                Ok(found[0])
            } else {
                Err(BridgeError::RoundTrip(format!(
                    "block `{}` has {} members ending at its base point",
                    a.partition().name(s),
                    found.len()
                )))
            }
        })
        .collect::<Result<_, _>>()?;
    let tc = target.schemoid.category();
    let psi_functor = Functor {
        objects: (0..tc.num_objects()).map(|s| c.src(f_sigma[s])).collect(),
        morphisms: (0..tc.num_morphisms())
            .map(|m| {
                let (tau, sigma) = target.components(m);
                c.compose(g.inverse(f_sigma[tau]), f_sigma[sigma])
                    .expect("f_τ and f_σ share a target")
            })
            .collect(),
        contravariant: false,
    };
    let phi = SchemoidMorphism::new(phi_functor, a, &target.schemoid)?;
    let psi = SchemoidMorphism::new(psi_functor, &target.schemoid, a)?;
    if phi.then(&psi).functor != Functor::identity(c) {
        return Err(BridgeError::RoundTrip("ΨΦ is not the identity".into()));
    }
    if psi.then(&phi).functor != Functor::identity(tc) {
        return Err(BridgeError::RoundTrip("ΦΨ is not the identity".into()));
    }
    let mut image: Vec<usize> = base
        .points
        .iter()
        .map(|&v| phi.functor.objects[v])
        .collect();
    image.sort_unstable();
    let mut expected = target.base_points.clone();
    expected.sort_unstable();
    if image != expected {
        return Err(BridgeError::RoundTrip(
            "Φ(V) differs from the base points".into(),
        ));
    }
    Ok(PhiPsi {
        rtilde,
        target,
        phi,
        psi,
        base,
    })
}

/// The left inverse of `S̃` on morphisms: `x ↦ s G(1_x)`,
/// `f ↦ G(1_{t f})⁻¹ G(f)`.
pub fn functor_from_morphism(
    g: &SchemoidMorphism,
    k: &Groupoid,
    h: &Groupoid,
) -> Result<Functor, BridgeError> {
    let obj = &g.functor.objects;
    let functor = Functor {
        objects: (0..k.num_objects())
            .map(|x| h.src(obj[k.identity(x)]))
            .collect(),
        morphisms: (0..k.num_morphisms())
            .map(|f| {
                h.compose(h.inverse(obj[k.identity(k.tgt(f))]), obj[f])
                    .ok_or_else(|| BridgeError::NotAFunctor(k.morphism_name(f).to_string()))
            })
            .collect::<Result<_, _>>()?,
        contravariant: false,
    };
    functor
        .check(k, h)
        .map_err(|e| BridgeError::NotAFunctor(e.to_string()))?;
    Ok(functor)
}

/// For a base-point preserving `G: S̃(K) → S̃(H)`, recovers `F` with `S̃(F) = G`.
pub fn faithfulness_roundtrip(
    g: &SchemoidMorphism,
    k: &Groupoid,
    h: &Groupoid,
) -> Result<Functor, BridgeError> {
    for x in 0..k.num_objects() {
        if !h.is_identity(g.functor.objects[k.identity(x)]) {
            return Err(BridgeError::NotBasePointPreserving(
                k.object_name(x).to_string(),
            ));
        }
    }
    let f = functor_from_morphism(g, k, h)?;
    let (sk, sh) = (s_tilde(k), s_tilde(h));
    let back = s_tilde_on_functor(&f, &sk, &sh)?;
    if back.functor != g.functor {
        return Err(BridgeError::RoundTrip(
            "S̃ of the recovered functor differs".into(),
        ));
    }
    Ok(f)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fincat::{disjoint_union, group_category};
    use crate::group::FiniteGroup;

    fn group(n: usize) -> Groupoid {
        Groupoid::from_group(&FiniteGroup::cyclic(n))
    }

    #[test]
    fn s_tilde_of_z2() {
        let st = s_tilde(&group(2));
        let c = st.schemoid.category();
        assert_eq!((c.num_objects(), c.num_morphisms()), (2, 4));
        assert_eq!(st.schemoid.num_blocks(), 2);
        assert!(st
            .schemoid
            .partition()
            .blocks()
            .iter()
            .all(|b| b.len() == 2));
        let (report, _) = analyze_thinness(&st.schemoid, None);
        assert!(report.thin);
    }

    #[test]
    fn s_tilde_of_two_points_keeps_blocks_apart() {
        let one = as_groupoid(&crate::fincat::terminal()).unwrap();
        let two = as_groupoid(&disjoint_union(&one, &one)).unwrap();
        let st = s_tilde(&two);
        assert_eq!(st.schemoid.category().num_morphisms(), 2);
        assert_eq!(st.schemoid.num_blocks(), 2);
        let (report, base) = analyze_thinness(&st.schemoid, None);
        assert!(report.thin);
        assert_eq!(base.unwrap().points.len(), 2);
    }

    #[test]
    fn unit_round_trip_z3() {
        let (_, rt, unit) = canonical_unit(&group(3)).unwrap();
        assert_eq!(rt.groupoid.num_objects(), 1);
        assert_eq!(rt.groupoid.num_morphisms(), 3);
        assert!(unit.is_bijective(&rt.groupoid));
    }

    #[test]
    fn group_schemoid_is_not_semi_thin() {
        let g = FiniteGroup::cyclic(2);
        let c = group_category(&g);
        let p = MorphismPartition::new(&c, vec!["G".into()], vec![vec![0, 1]]).unwrap();
        let q = QuasiSchemoid::new(c, p).unwrap();
        let t = Functor {
            objects: vec![0],
            morphisms: vec![0, 1],
            contravariant: true,
        };
        let a = AssociationSchemoid::new(q, &t).unwrap();
        assert!(matches!(r_tilde(&a), Err(BridgeError::NotSemiThin(_))));
    }

    #[test]
    fn phi_psi_on_pair_groupoid() {
        let st = s_tilde(&pair_groupoid(2));
        let pp = phi_psi_check(&st.schemoid, None).unwrap();
        assert_eq!(pp.phi.functor.objects.len(), 4);
    }

    #[test]
    fn reduction_mod_two_round_trips() {
        let (z4, z2) = (group(4), group(2));
        let f = Functor {
            objects: vec![0],
            morphisms: vec![0, 1, 0, 1],
            contravariant: false,
        };
        f.check(&z4, &z2).unwrap();
        let (s4, s2) = (s_tilde(&z4), s_tilde(&z2));
        let m = s_tilde_on_functor(&f, &s4, &s2).unwrap();
        assert_eq!(m.block_image, vec![0, 1, 0, 1]);
        assert_eq!(faithfulness_roundtrip(&m, &z4, &z2).unwrap(), f);
    }

    #[test]
    fn translation_is_rejected() {
        let z2 = group(2);
        let s = s_tilde(&z2);
        let c = s.schemoid.category();
        // left multiplication by the generator
        let functor = Functor {
            objects: vec![1, 0],
            morphisms: (0..c.num_morphisms())
                .map(|m| {
                    let (h, g) = s.components(m);
                    s.pair(1 - h, 1 - g).unwrap()
                })
                .collect(),
            contravariant: false,
        };
        let g = SchemoidMorphism::new(functor, &s.schemoid, &s.schemoid).unwrap();
        assert!(matches!(
            faithfulness_roundtrip(&g, &z2, &z2),
            Err(BridgeError::NotBasePointPreserving(_))
        ));
        // the unbased left inverse still yields a functor
        assert!(functor_from_morphism(&g, &z2, &z2).is_ok());
    }
}
