//! Morphism partitions, the concatenation axiom, association and thinness
//! conditions, schemoid morphisms and isomorphism search.

use std::collections::HashMap;

use indexmap::IndexMap;
use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::fincat::{
    self, as_groupoid, CategoryError, FinCategory, Functor, FunctorError, MorId, ObjId,
    RawCategory, RawFunctor,
};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SchemoidError {
    #[error(transparent)]
    Category(#[from] CategoryError),
    #[error(transparent)]
    Functor(#[from] FunctorError),
    #[error("not a partition of the morphisms: {0}")]
    NotAPartition(String),
    #[error("concatenation axiom fails: {0}")]
    AxiomViolation(Box<ConcatenationWitness>),
    #[error("block `{0}` meets the endomorphisms without being contained in them")]
    LoopConditionViolated(String),
    #[error("not a contravariant involution: {0}")]
    NotInvolution(String),
    #[error("image of block `{0}` is not a block")]
    BlockNotPreserved(String),
    #[error("block `{0}` is not mapped into a single block")]
    NotBlockwise(String),
    #[error("unknown object `{0}`")]
    UnknownObject(String),
}

/// A partition of the morphisms of a category into named blocks.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MorphismPartition {
    names: Vec<String>,
    blocks: Vec<Vec<MorId>>,
    block_of: Vec<usize>,
}

impl MorphismPartition {
    pub fn new(
        c: &FinCategory,
        names: Vec<String>,
        blocks: Vec<Vec<MorId>>,
    ) -> Result<Self, SchemoidError> {
        if names.len() != blocks.len() {
            return Err(SchemoidError::NotAPartition(
                "names and blocks differ in number".into(),
            ));
        }
        let mut sorted = names.clone();
        sorted.sort();
        sorted.dedup();
        if sorted.len() != names.len() {
            return Err(SchemoidError::NotAPartition("block names repeat".into()));
        }
        let mut block_of = vec![usize::MAX; c.num_morphisms()];
        for (b, block) in blocks.iter().enumerate() {
            if block.is_empty() {
                return Err(SchemoidError::NotAPartition(format!(
                    "block `{}` is empty",
                    names[b]
                )));
            }
            for &f in block {
                if f >= block_of.len() {
                    return Err(SchemoidError::NotAPartition(format!(
                        "unknown morphism index {f}"
                    )));
                }
                if block_of[f] != usize::MAX {
                    return Err(SchemoidError::NotAPartition(format!(
                        "`{}` lies in two blocks",
                        c.morphism_name(f)
                    )));
                }
                block_of[f] = b;
            }
        }
        if let Some(f) = block_of.iter().position(|&b| b == usize::MAX) {
            return Err(SchemoidError::NotAPartition(format!(
                "`{}` lies in no block",
                c.morphism_name(f)
            )));
        }
        Ok(MorphismPartition {
            names,
            blocks,
            block_of,
        })
    }

    /// Every morphism in its own block, named after the morphism.
    pub fn discrete(c: &FinCategory) -> Self {
        let names = c.morphisms().iter().map(|m| m.name.clone()).collect();
        let blocks = (0..c.num_morphisms()).map(|f| vec![f]).collect();
        Self::new(c, names, blocks).expect("discrete partition")
    }

    /// Groups morphisms by a key; blocks appear in order of first occurrence.
    pub fn by_key<K: Eq + std::hash::Hash + Clone>(
        c: &FinCategory,
        key: impl Fn(MorId) -> K,
        name: impl Fn(&K) -> String,
    ) -> Self {
        let mut index: HashMap<K, usize> = HashMap::new();
        let mut names = Vec::new();
        let mut blocks: Vec<Vec<MorId>> = Vec::new();
        for f in 0..c.num_morphisms() {
            let k = key(f);
            let b = *index.entry(k.clone()).or_insert_with(|| {
                names.push(name(&k));
                blocks.push(Vec::new());
                blocks.len() - 1
            });
            blocks[b].push(f);
        }
        Self::new(c, names, blocks).expect("grouping by key is a partition")
    }

    pub fn from_named(c: &FinCategory, blocks: &[(&str, &[&str])]) -> Result<Self, SchemoidError> {
        let raw = RawPartition {
            blocks: blocks
                .iter()
                .map(|(n, ms)| (n.to_string(), ms.iter().map(|m| m.to_string()).collect()))
                .collect(),
        };
        Self::from_raw(c, &raw)
    }

    pub fn num_blocks(&self) -> usize {
        self.blocks.len()
    }

    pub fn block(&self, b: usize) -> &[MorId] {
        &self.blocks[b]
    }

    pub fn blocks(&self) -> &[Vec<MorId>] {
        &self.blocks
    }

    pub fn block_of(&self, f: MorId) -> usize {
        self.block_of[f]
    }

    pub fn name(&self, b: usize) -> &str {
        &self.names[b]
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn block_id(&self, name: &str) -> Option<usize> {
        self.names.iter().position(|n| n == name)
    }

    pub fn to_raw(&self, c: &FinCategory) -> RawPartition {
        RawPartition {
            blocks: self
                .names
                .iter()
                .zip(&self.blocks)
                .map(|(n, b)| {
                    (
                        n.clone(),
                        b.iter().map(|&f| c.morphism_name(f).to_string()).collect(),
                    )
                })
                .collect(),
        }
    }

    pub fn from_raw(c: &FinCategory, raw: &RawPartition) -> Result<Self, SchemoidError> {
        let mut names = Vec::new();
        let mut blocks = Vec::new();
        for (n, ms) in &raw.blocks {
            names.push(n.clone());
            blocks.push(
                ms.iter()
                    .map(|m| {
                        c.morphism_id(m).ok_or_else(|| {
                            SchemoidError::NotAPartition(format!("unknown morphism `{m}`"))
                        })
                    })
                    .collect::<Result<Vec<_>, _>>()?,
            );
        }
        Self::new(c, names, blocks)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct RawPartition {
    pub blocks: IndexMap<String, Vec<String>>,
}

/// Structure constants `p^μ_{στ}` stored densely over block triples.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct StructureConstants {
    n: usize,
    p: Vec<u64>,
}

impl StructureConstants {
    pub fn num_blocks(&self) -> usize {
        self.n
    }

    /// `p^μ_{στ}`: factorizations `h = f∘g` with `f ∈ σ`, `g ∈ τ` of any `h ∈ μ`.
    pub fn get(&self, sigma: usize, tau: usize, mu: usize) -> u64 {
        self.p[(sigma * self.n + tau) * self.n + mu]
    }

    fn set(&mut self, sigma: usize, tau: usize, mu: usize, v: u64) {
        self.p[(sigma * self.n + tau) * self.n + mu] = v;
    }

    /// Nonzero entries as `(σ, τ, μ, p)`.
    pub fn nonzero(&self) -> impl Iterator<Item = (usize, usize, usize, u64)> + '_ {
        let n = self.n;
        self.p
            .iter()
            .enumerate()
            .filter(|(_, &v)| v != 0)
            .map(move |(i, &v)| (i / (n * n), (i / n) % n, i % n, v))
    }
}

/// Two morphisms of one block with different factorization counts.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ConcatenationWitness {
    pub sigma: String,
    pub tau: String,
    pub mu: String,
    pub h1: String,
    pub h2: String,
    pub count1: u64,
    pub count2: u64,
}

impl std::fmt::Display for ConcatenationWitness {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(
            f,
            "in block `{}` over ({}, {}): `{}` has {} factorizations but `{}` has {}",
            self.mu, self.sigma, self.tau, self.h1, self.count1, self.h2, self.count2
        )
    }
}

/// Verifies the concatenation axiom, returning the structure constants.
pub fn check_concatenation(
    c: &FinCategory,
    partition: &MorphismPartition,
) -> Result<StructureConstants, SchemoidError> {
    let n = partition.num_blocks();
    // factorization census per composite, as sorted (σ, τ) keys
    let mut census: Vec<Vec<(usize, usize)>> = vec![Vec::new(); c.num_morphisms()];
    for (f, g, h) in c.composable_pairs() {
        census[h].push((partition.block_of(f), partition.block_of(g)));
    }
    let rle = |mut v: Vec<(usize, usize)>| {
        v.sort_unstable();
        let mut out: Vec<((usize, usize), u64)> = Vec::new();
        for k in v {
            match out.last_mut() {
                Some((last, c)) if *last == k => *c += 1,
                _ => out.push((k, 1)),
            }
        }
        out
    };
    let counts: Vec<Vec<((usize, usize), u64)>> = census.into_iter().map(rle).collect();
    let mut table = StructureConstants {
        n,
        p: vec![0; n * n * n],
    };
    for (mu, block) in partition.blocks().iter().enumerate() {
        let h1 = block[0];
        let reference = &counts[h1];
        for &h in &block[1..] {
            if counts[h] != *reference {
                let lookup = |v: &[((usize, usize), u64)], k: (usize, usize)| {
                    v.iter().find(|(key, _)| *key == k).map_or(0, |(_, c)| *c)
                };
                let keys = reference.iter().chain(&counts[h]).map(|(k, _)| *k);
                let (s, t) = keys
                    .into_iter()
                    .find(|&k| lookup(reference, k) != lookup(&counts[h], k))
                    .expect("differing censuses differ at some key");
                return Err(SchemoidError::AxiomViolation(Box::new(
                    ConcatenationWitness {
                        sigma: partition.name(s).to_string(),
                        tau: partition.name(t).to_string(),
                        mu: partition.name(mu).to_string(),
                        h1: c.morphism_name(h1).to_string(),
                        h2: c.morphism_name(h).to_string(),
                        count1: lookup(reference, (s, t)),
                        count2: lookup(&counts[h], (s, t)),
                    },
                )));
            }
        }
        for &((s, t), v) in reference {
            table.set(s, t, mu, v);
        }
    }
    Ok(table)
}

/// A category with a partition satisfying the concatenation axiom.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct QuasiSchemoid {
    category: FinCategory,
    partition: MorphismPartition,
    constants: StructureConstants,
}

impl QuasiSchemoid {
    pub fn new(category: FinCategory, partition: MorphismPartition) -> Result<Self, SchemoidError> {
        let constants = check_concatenation(&category, &partition)?;
        Ok(QuasiSchemoid {
            category,
            partition,
            constants,
        })
    }

    pub fn discrete(category: FinCategory) -> Self {
        let partition = MorphismPartition::discrete(&category);
        Self::new(category, partition).expect("discrete partitions satisfy the axiom")
    }

    pub fn category(&self) -> &FinCategory {
        &self.category
    }

    pub fn partition(&self) -> &MorphismPartition {
        &self.partition
    }

    pub fn constants(&self) -> &StructureConstants {
        &self.constants
    }

    pub fn num_blocks(&self) -> usize {
        self.partition.num_blocks()
    }

    pub fn block_of(&self, f: MorId) -> usize {
        self.partition.block_of(f)
    }

    /// `p^μ_{στ}`.
    pub fn p(&self, sigma: usize, tau: usize, mu: usize) -> u64 {
        self.constants.get(sigma, tau, mu)
    }

    /// Block index by name; panics on unknown names (test and fixture helper).
    pub fn block(&self, name: &str) -> usize {
        self.partition
            .block_id(name)
            .unwrap_or_else(|| panic!("no block named `{name}`"))
    }

    /// Unital: every block meeting the identities consists of identities.
    pub fn is_unital(&self) -> bool {
        self.non_unital_block().is_none()
    }

    pub fn non_unital_block(&self) -> Option<usize> {
        let c = &self.category;
        self.partition.blocks().iter().position(|b| {
            b.iter().any(|&f| c.is_identity(f)) && !b.iter().all(|&f| c.is_identity(f))
        })
    }

    /// Blocks meeting the identities.
    pub fn identity_blocks(&self) -> Vec<usize> {
        let mut v: Vec<usize> = (0..self.category.num_objects())
            .map(|x| self.block_of(self.category.identity(x)))
            .collect();
        v.sort_unstable();
        v.dedup();
        v
    }

    /// Unital with a groupoid as underlying category.
    pub fn is_basic(&self) -> bool {
        self.is_unital() && self.category.is_groupoid()
    }

    /// Componentwise product; blocks are named `(σ,τ)`.
    pub fn product(&self, other: &QuasiSchemoid) -> QuasiSchemoid {
        let category = fincat::product(&self.category, &other.category);
        let nd = other.category.num_morphisms();
        let (na, nb) = (self.num_blocks(), other.num_blocks());
        let names = (0..na * nb)
            .map(|i| {
                format!(
                    "({},{})",
                    self.partition.name(i / nb),
                    other.partition.name(i % nb)
                )
            })
            .collect();
        let mut blocks = vec![Vec::new(); na * nb];
        for f in 0..category.num_morphisms() {
            let (a, b) = (f / nd, f % nd);
            blocks[self.block_of(a) * nb + other.block_of(b)].push(f);
        }
        let partition = MorphismPartition::new(&category, names, blocks)
            .expect("product partitions are partitions");
        QuasiSchemoid::new(category, partition)
            .expect("products of quasi-schemoids satisfy the axiom")
    }

    /// Join with both partitions kept and each connecting morphism a singleton.
    pub fn join(&self, other: &QuasiSchemoid) -> QuasiSchemoid {
        let (category, names) = fincat::join_with_names(&self.category, &other.category);
        let nl = self.category.num_morphisms();
        let nr = other.category.num_morphisms();
        let prefix = |n: &[String], orig: &FinCategory| n[0] != orig.morphism_name(0);
        let (lp, rp) = if prefix(&names.left_morphisms, &self.category)
            || prefix(&names.right_morphisms, &other.category)
        {
            ("L.", "R.")
        } else {
            ("", "")
        };
        let mut block_names = Vec::new();
        let mut blocks = Vec::new();
        for b in 0..self.num_blocks() {
            block_names.push(format!("{lp}{}", self.partition.name(b)));
            blocks.push(self.partition.block(b).to_vec());
        }
        for b in 0..other.num_blocks() {
            block_names.push(format!("{rp}{}", other.partition.name(b)));
            blocks.push(other.partition.block(b).iter().map(|&f| f + nl).collect());
        }
        for w in nl + nr..category.num_morphisms() {
            block_names.push(category.morphism_name(w).to_string());
            blocks.push(vec![w]);
        }
        let partition = MorphismPartition::new(&category, block_names, blocks)
            .expect("join partitions are partitions");
        QuasiSchemoid::new(category, partition).expect("joins of quasi-schemoids satisfy the axiom")
    }
}

/// A contravariant involution permuting the blocks.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Involution {
    pub functor: Functor,
    pub block_image: Vec<usize>,
}

/// Verifies the loop condition and the involution axioms.
pub fn check_association(qs: &QuasiSchemoid, t: &Functor) -> Result<Involution, SchemoidError> {
    let c = qs.category();
    let part = qs.partition();
    for (b, block) in part.blocks().iter().enumerate() {
        let endo = |&f: &MorId| c.src(f) == c.tgt(f);
        if block.iter().any(endo) && !block.iter().all(endo) {
            return Err(SchemoidError::LoopConditionViolated(
                part.name(b).to_string(),
            ));
        }
    }
    if !t.contravariant {
        return Err(SchemoidError::NotInvolution("functor is covariant".into()));
    }
    t.check(c, c)
        .map_err(|e| SchemoidError::NotInvolution(e.to_string()))?;
    if let Some(x) = (0..c.num_objects()).find(|&x| t.objects[t.objects[x]] != x) {
        return Err(SchemoidError::NotInvolution(format!(
            "T² moves object `{}`",
            c.object_name(x)
        )));
    }
    if let Some(f) = (0..c.num_morphisms()).find(|&f| t.morphisms[t.morphisms[f]] != f) {
        return Err(SchemoidError::NotInvolution(format!(
            "T² moves morphism `{}`",
            c.morphism_name(f)
        )));
    }
    let mut block_image = Vec::with_capacity(part.num_blocks());
    for (b, block) in part.blocks().iter().enumerate() {
        let target = part.block_of(t.morphisms[block[0]]);
        let same = block
            .iter()
            .all(|&f| part.block_of(t.morphisms[f]) == target);
        if !same || part.block(target).len() != block.len() {
            return Err(SchemoidError::BlockNotPreserved(part.name(b).to_string()));
        }
        block_image.push(target);
    }
    Ok(Involution {
        functor: t.clone(),
        block_image,
    })
}

/// A quasi-schemoid with a verified involution.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AssociationSchemoid {
    pub quasi: QuasiSchemoid,
    pub involution: Involution,
}

impl std::ops::Deref for AssociationSchemoid {
    type Target = QuasiSchemoid;
    fn deref(&self) -> &QuasiSchemoid {
        &self.quasi
    }
}

impl AssociationSchemoid {
    pub fn new(quasi: QuasiSchemoid, t: &Functor) -> Result<Self, SchemoidError> {
        let involution = check_association(&quasi, t)?;
        Ok(AssociationSchemoid { quasi, involution })
    }

    pub fn t(&self) -> &Functor {
        &self.involution.functor
    }

    pub fn product(&self, other: &AssociationSchemoid) -> AssociationSchemoid {
        let quasi = self.quasi.product(&other.quasi);
        let (t1, t2) = (self.t(), other.t());
        let no = other.category().num_objects();
        let nm = other.category().num_morphisms();
        let c = quasi.category();
        let t = Functor {
            objects: (0..c.num_objects())
                .map(|x| t1.objects[x / no] * no + t2.objects[x % no])
                .collect(),
            morphisms: (0..c.num_morphisms())
                .map(|f| t1.morphisms[f / nm] * nm + t2.morphisms[f % nm])
                .collect(),
            contravariant: true,
        };
        AssociationSchemoid::new(quasi, &t).expect("products of association schemoids")
    }
}

/// Outcome of the semi-thin and thin tests.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ThinnessReport {
    pub unital: bool,
    pub one_per_source: bool,
    pub groupoid: bool,
    pub involution_is_inverse: bool,
    pub semi_thin: bool,
    pub hom_sets_at_most_one: bool,
    pub thin: bool,
    /// Blocks meeting the identities.
    pub identity_blocks: Vec<String>,
    pub base_points: Option<Vec<String>>,
    /// Block of `1_v` for each base point, in order.
    pub phi: Option<Vec<String>>,
    pub witnesses: Vec<String>,
}

/// Index form of a base-point search result.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BasePoints {
    pub points: Vec<ObjId>,
    pub phi: Vec<usize>,
}

/// Checks the semi-thin conditions and, when they hold, the thin ones. A
/// supplied base-point set is validated; otherwise one is searched for.
pub fn analyze_thinness(
    a: &AssociationSchemoid,
    supplied: Option<&[ObjId]>,
) -> (ThinnessReport, Option<BasePoints>) {
    let c = a.category();
    let part = a.partition();
    let mut witnesses = Vec::new();

    let unital = a.is_unital();
    if let Some(b) = a.non_unital_block() {
        witnesses.push(format!(
            "block `{}` mixes identities and other morphisms",
            part.name(b)
        ));
    }

    let mut one_per_source = true;
    'outer: for (b, block) in part.blocks().iter().enumerate() {
        let mut seen: HashMap<ObjId, MorId> = HashMap::new();
        for &f in block {
            if let Some(&g) = seen.get(&c.src(f)) {
                witnesses.push(format!(
                    "block `{}` has `{}` and `{}` with source `{}`",
                    part.name(b),
                    c.morphism_name(g),
                    c.morphism_name(f),
                    c.object_name(c.src(f))
                ));
                one_per_source = false;
                break 'outer;
            }
            seen.insert(c.src(f), f);
        }
    }

    let groupoid = as_groupoid(c);
    let involution_is_inverse = match &groupoid {
        Ok(g) => {
            let bad = (0..c.num_morphisms()).find(|&f| a.t().morphisms[f] != g.inverse(f));
            if let Some(f) = bad {
                witnesses.push(format!("T(`{}`) is not its inverse", c.morphism_name(f)));
            }
            bad.is_none()
        }
        Err(e) => {
            witnesses.push(e.to_string());
            false
        }
    };
    let semi_thin = unital && one_per_source && groupoid.is_ok() && involution_is_inverse;

    let mut hom_sets_at_most_one = true;
    for x in 0..c.num_objects() {
        let mut targets: Vec<ObjId> = c.outgoing(x).iter().map(|&f| c.tgt(f)).collect();
        targets.sort_unstable();
        if let Some(w) = targets.windows(2).find(|w| w[0] == w[1]) {
            witnesses.push(format!(
                "Hom(`{}`, `{}`) has more than one element",
                c.object_name(x),
                c.object_name(w[0])
            ));
            hom_sets_at_most_one = false;
            break;
        }
    }

    let s0 = a.identity_blocks();
    let base = if semi_thin && hom_sets_at_most_one {
        match supplied {
            Some(v) => validate_base_points(a, v, &s0, &mut witnesses),
            None => search_base_points(a, &s0, &mut witnesses),
        }
    } else {
        None
    };
    let thin = base.is_some();
    let report = ThinnessReport {
        unital,
        one_per_source,
        groupoid: groupoid.is_ok(),
        involution_is_inverse,
        semi_thin,
        hom_sets_at_most_one,
        thin,
        identity_blocks: s0.iter().map(|&b| part.name(b).to_string()).collect(),
        base_points: base.as_ref().map(|bp| {
            bp.points
                .iter()
                .map(|&v| c.object_name(v).to_string())
                .collect()
        }),
        phi: base
            .as_ref()
            .map(|bp| bp.phi.iter().map(|&b| part.name(b).to_string()).collect()),
        witnesses,
    };
    (report, base)
}

fn validate_base_points(
    a: &QuasiSchemoid,
    v: &[ObjId],
    s0: &[usize],
    witnesses: &mut Vec<String>,
) -> Option<BasePoints> {
    let c = a.category();
    let comps = c.components();
    let mut comp_of = vec![0; c.num_objects()];
    for (i, comp) in comps.iter().enumerate() {
        for &x in comp {
            comp_of[x] = i;
        }
    }
    let mut hit = vec![false; comps.len()];
    for &x in v {
        if std::mem::replace(&mut hit[comp_of[x]], true) {
            witnesses.push("two base points share a component".into());
            return None;
        }
    }
    if hit.iter().any(|h| !h) {
        witnesses.push("some component has no base point".into());
        return None;
    }
    let phi: Vec<usize> = v.iter().map(|&x| a.block_of(c.identity(x))).collect();
    let mut sorted = phi.clone();
    sorted.sort_unstable();
    sorted.dedup();
    if sorted.len() != phi.len() || sorted != s0 {
        witnesses.push("φ: V → S_0 is not bijective".into());
        return None;
    }
    Some(BasePoints {
        points: v.to_vec(),
        phi,
    })
}

fn search_base_points(
    a: &QuasiSchemoid,
    s0: &[usize],
    witnesses: &mut Vec<String>,
) -> Option<BasePoints> {
    let c = a.category();
    let comps = c.components();
    if comps.len() != s0.len() {
        witnesses.push(format!(
            "{} components but {} identity blocks",
            comps.len(),
            s0.len()
        ));
        return None;
    }
    fn go(
        i: usize,
        comps: &[Vec<ObjId>],
        a: &QuasiSchemoid,
        used: &mut Vec<usize>,
        chosen: &mut Vec<ObjId>,
    ) -> bool {
        if i == comps.len() {
            return true;
        }
        for &x in &comps[i] {
            let b = a.block_of(a.category().identity(x));
            if used.contains(&b) {
                continue;
            }
            used.push(b);
            chosen.push(x);
            if go(i + 1, comps, a, used, chosen) {
                return true;
            }
            used.pop();
            chosen.pop();
        }
        false
    }
    let mut used = Vec::new();
    let mut chosen = Vec::new();
    if go(0, &comps, a, &mut used, &mut chosen) {
        let phi = chosen.iter().map(|&x| a.block_of(c.identity(x))).collect();
        Some(BasePoints {
            points: chosen,
            phi,
        })
    } else {
        witnesses.push("no choice of base points makes φ bijective".into());
        None
    }
}

/// A functor carrying every block into a single block.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SchemoidMorphism {
    pub functor: Functor,
    pub block_image: Vec<usize>,
}

impl SchemoidMorphism {
    pub fn new(
        functor: Functor,
        source: &QuasiSchemoid,
        target: &QuasiSchemoid,
    ) -> Result<Self, SchemoidError> {
        if functor.contravariant {
            return Err(SchemoidError::Functor(FunctorError::Shape));
        }
        functor.check(source.category(), target.category())?;
        let part = source.partition();
        let mut block_image = Vec::with_capacity(part.num_blocks());
        for (b, block) in part.blocks().iter().enumerate() {
            let t = target.block_of(functor.morphisms[block[0]]);
            if block
                .iter()
                .any(|&f| target.block_of(functor.morphisms[f]) != t)
            {
                return Err(SchemoidError::NotBlockwise(part.name(b).to_string()));
            }
            block_image.push(t);
        }
        Ok(SchemoidMorphism {
            functor,
            block_image,
        })
    }

    pub fn identity(qs: &QuasiSchemoid) -> Self {
        SchemoidMorphism {
            functor: Functor::identity(qs.category()),
            block_image: (0..qs.num_blocks()).collect(),
        }
    }

    /// `other ∘ self`.
    pub fn then(&self, other: &SchemoidMorphism) -> SchemoidMorphism {
        SchemoidMorphism {
            functor: self.functor.then(&other.functor),
            block_image: self
                .block_image
                .iter()
                .map(|&b| other.block_image[b])
                .collect(),
        }
    }

    pub fn from_raw(
        raw: &RawFunctor,
        source: &QuasiSchemoid,
        target: &QuasiSchemoid,
    ) -> Result<Self, SchemoidError> {
        let f = Functor::from_raw(raw, source.category(), target.category())?;
        Self::new(f, source, target)
    }
}

/// Why an isomorphism search ended without a witness.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum IsoFailure {
    #[error("sizes differ: {0}")]
    SizeMismatch(String),
    #[error("invariants differ: {0}")]
    InvariantMismatch(String),
    #[error("search exhausted without an isomorphism")]
    Exhausted,
}

#[derive(Debug, Clone, Copy, Default)]
pub struct IsoOptions {
    /// Shuffles candidate order; results stay correct, only the witness may change.
    pub seed: Option<u64>,
}

/// Searches for an invertible functor `A → B` carrying blocks onto blocks.
pub fn schemoid_isomorphic(
    a: &QuasiSchemoid,
    b: &QuasiSchemoid,
) -> Result<SchemoidMorphism, IsoFailure> {
    schemoid_isomorphic_with(a, b, IsoOptions::default())
}

pub fn schemoid_isomorphic_with(
    a: &QuasiSchemoid,
    b: &QuasiSchemoid,
    opts: IsoOptions,
) -> Result<SchemoidMorphism, IsoFailure> {
    let (ca, cb) = (a.category(), b.category());
    if ca.num_objects() != cb.num_objects() {
        return Err(IsoFailure::SizeMismatch(format!(
            "{} vs {} objects",
            ca.num_objects(),
            cb.num_objects()
        )));
    }
    if ca.num_morphisms() != cb.num_morphisms() {
        return Err(IsoFailure::SizeMismatch(format!(
            "{} vs {} morphisms",
            ca.num_morphisms(),
            cb.num_morphisms()
        )));
    }
    let sizes = |q: &QuasiSchemoid| {
        let mut v: Vec<usize> = q.partition().blocks().iter().map(Vec::len).collect();
        v.sort_unstable();
        v
    };
    if sizes(a) != sizes(b) {
        return Err(IsoFailure::InvariantMismatch("block size multisets".into()));
    }
    let sa = ObjectProfile::new(a);
    let sb = ObjectProfile::new(b);
    let mut ma = sa.signatures.clone();
    let mut mb = sb.signatures.clone();
    ma.sort();
    mb.sort();
    if ma != mb {
        return Err(IsoFailure::InvariantMismatch(
            "degree and hom-set cardinality profiles".into(),
        ));
    }
    let mut search = IsoSearch::new(a, b, &sa, &sb, opts.seed);
    if search.objects(0) {
        let functor = Functor {
            objects: search.obj_map.clone(),
            morphisms: search.mor_map.clone(),
            contravariant: false,
        };
        let m = SchemoidMorphism::new(functor, a, b).expect("search only returns morphisms");
        debug_assert!(m.functor.is_bijective(cb));
        Ok(m)
    } else {
        Err(IsoFailure::Exhausted)
    }
}

struct ObjectProfile {
    hom_count: Vec<Vec<usize>>,
    signatures: Vec<Vec<usize>>,
}

impl ObjectProfile {
    fn new(q: &QuasiSchemoid) -> Self {
        let c = q.category();
        let n = c.num_objects();
        let mut hom_count = vec![vec![0; n]; n];
        for f in 0..c.num_morphisms() {
            hom_count[c.src(f)][c.tgt(f)] += 1;
        }
        let signatures = (0..n)
            .map(|x| {
                let mut out: Vec<usize> = (0..n)
                    .filter(|&y| y != x)
                    .map(|y| hom_count[x][y])
                    .collect();
                let mut inn: Vec<usize> = (0..n)
                    .filter(|&y| y != x)
                    .map(|y| hom_count[y][x])
                    .collect();
                out.sort_unstable();
                inn.sort_unstable();
                let mut blocks: Vec<usize> = c
                    .outgoing(x)
                    .iter()
                    .map(|&f| q.partition().block(q.block_of(f)).len())
                    .collect();
                blocks.sort_unstable();
                let mut sig = vec![hom_count[x][x], usize::MAX];
                sig.extend(out);
                sig.push(usize::MAX);
                sig.extend(inn);
                sig.push(usize::MAX);
                sig.extend(blocks);
                sig
            })
            .collect();
        ObjectProfile {
            hom_count,
            signatures,
        }
    }
}

struct IsoSearch<'a> {
    a: &'a QuasiSchemoid,
    b: &'a QuasiSchemoid,
    pa: &'a ObjectProfile,
    pb: &'a ObjectProfile,
    obj_map: Vec<ObjId>,
    obj_used: Vec<bool>,
    mor_map: Vec<MorId>,
    mor_used: Vec<bool>,
    block_map: Vec<usize>,
    block_used: Vec<bool>,
    order: Vec<MorId>,
    factorizations: Vec<Vec<(MorId, MorId)>>,
    rng: Option<ChaCha8Rng>,
}

impl<'a> IsoSearch<'a> {
    fn new(
        a: &'a QuasiSchemoid,
        b: &'a QuasiSchemoid,
        pa: &'a ObjectProfile,
        pb: &'a ObjectProfile,
        seed: Option<u64>,
    ) -> Self {
        let (ca, cb) = (a.category(), b.category());
        let mut factorizations = vec![Vec::new(); ca.num_morphisms()];
        for (f, g, h) in ca.composable_pairs() {
            factorizations[h].push((f, g));
        }
        // identities first, then by hom-set
        let mut order: Vec<MorId> = (0..ca.num_morphisms()).collect();
        order.sort_by_key(|&f| (!ca.is_identity(f), ca.src(f), ca.tgt(f)));
        IsoSearch {
            a,
            b,
            pa,
            pb,
            obj_map: vec![usize::MAX; ca.num_objects()],
            obj_used: vec![false; cb.num_objects()],
            mor_map: vec![usize::MAX; ca.num_morphisms()],
            mor_used: vec![false; cb.num_morphisms()],
            block_map: vec![usize::MAX; a.num_blocks()],
            block_used: vec![false; b.num_blocks()],
            order,
            factorizations,
            rng: seed.map(ChaCha8Rng::seed_from_u64),
        }
    }

    fn shuffle<T>(&mut self, v: &mut [T]) {
        if let Some(rng) = self.rng.as_mut() {
            v.shuffle(rng);
        }
    }

    fn objects(&mut self, x: usize) -> bool {
        let n = self.obj_map.len();
        if x == n {
            return self.morphisms(0);
        }
        let mut cands: Vec<ObjId> = (0..n)
            .filter(|&y| {
                !self.obj_used[y]
                    && self.pa.signatures[x] == self.pb.signatures[y]
                    && (0..x).all(|x2| {
                        let y2 = self.obj_map[x2];
                        self.pa.hom_count[x][x2] == self.pb.hom_count[y][y2]
                            && self.pa.hom_count[x2][x] == self.pb.hom_count[y2][y]
                    })
                    && self.pa.hom_count[x][x] == self.pb.hom_count[y][y]
            })
            .collect();
        self.shuffle(&mut cands);
        for y in cands {
            self.obj_map[x] = y;
            self.obj_used[y] = true;
            if self.objects(x + 1) {
                return true;
            }
            self.obj_used[y] = false;
        }
        self.obj_map[x] = usize::MAX;
        false
    }

    fn consistent(&self, f: MorId) -> bool {
        let (ca, cb) = (self.a.category(), self.b.category());
        let m = &self.mor_map;
        let set = |g: MorId| m[g] != usize::MAX;
        for &g in ca.incoming(ca.src(f)) {
            if set(g) {
                let h = ca.compose(f, g).expect("composable");
                if set(h) && cb.compose(m[f], m[g]) != Some(m[h]) {
                    return false;
                }
            }
        }
        for &g in ca.outgoing(ca.tgt(f)) {
            if set(g) {
                let h = ca.compose(g, f).expect("composable");
                if set(h) && cb.compose(m[g], m[f]) != Some(m[h]) {
                    return false;
                }
            }
        }
        self.factorizations[f]
            .iter()
            .all(|&(u, v)| !set(u) || !set(v) || cb.compose(m[u], m[v]) == Some(m[f]))
    }

    fn morphisms(&mut self, i: usize) -> bool {
        if i == self.order.len() {
            return true;
        }
        let (ca, cb) = (self.a.category(), self.b.category());
        let f = self.order[i];
        let (s, t) = (self.obj_map[ca.src(f)], self.obj_map[ca.tgt(f)]);
        let bf = self.a.block_of(f);
        let mut cands: Vec<MorId> = if ca.is_identity(f) {
            vec![cb.identity(s)]
        } else {
            cb.hom(s, t)
                .into_iter()
                .filter(|&g| !cb.is_identity(g))
                .collect()
        };
        cands.retain(|&g| {
            let bg = self.b.block_of(g);
            !self.mor_used[g]
                && self.a.partition().block(bf).len() == self.b.partition().block(bg).len()
                && match self.block_map[bf] {
                    usize::MAX => !self.block_used[bg],
                    mapped => mapped == bg,
                }
        });
        self.shuffle(&mut cands);
        for g in cands {
            let bg = self.b.block_of(g);
            let fresh_block = self.block_map[bf] == usize::MAX;
            self.mor_map[f] = g;
            self.mor_used[g] = true;
            if fresh_block {
                self.block_map[bf] = bg;
                self.block_used[bg] = true;
            }
            if self.consistent(f) && self.morphisms(i + 1) {
                return true;
            }
            self.mor_map[f] = usize::MAX;
            self.mor_used[g] = false;
            if fresh_block {
                self.block_map[bf] = usize::MAX;
                self.block_used[bg] = false;
            }
        }
        false
    }
}

/// Interchange form of a (quasi-/association) schemoid.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct RawSchemoid {
    pub category: RawCategory,
    pub partition: RawPartition,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub involution: Option<RawFunctor>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub base_points: Option<Vec<String>>,
}

/// A quasi-schemoid with optional involution and base points, as read from input.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Schemoid {
    pub quasi: QuasiSchemoid,
    pub involution: Option<Involution>,
    pub base_points: Option<Vec<ObjId>>,
}

impl Schemoid {
    pub fn from_quasi(quasi: QuasiSchemoid) -> Self {
        Schemoid {
            quasi,
            involution: None,
            base_points: None,
        }
    }

    pub fn from_association(a: AssociationSchemoid) -> Self {
        Schemoid {
            quasi: a.quasi,
            involution: Some(a.involution),
            base_points: None,
        }
    }

    pub fn association(&self) -> Option<AssociationSchemoid> {
        self.involution.as_ref().map(|inv| AssociationSchemoid {
            quasi: self.quasi.clone(),
            involution: inv.clone(),
        })
    }

    pub fn to_raw(&self) -> RawSchemoid {
        let c = self.quasi.category();
        RawSchemoid {
            category: c.to_raw(),
            partition: self.quasi.partition().to_raw(c),
            involution: self.involution.as_ref().map(|t| t.functor.to_raw(c, c)),
            base_points: self
                .base_points
                .as_ref()
                .map(|v| v.iter().map(|&x| c.object_name(x).to_string()).collect()),
        }
    }

    pub fn from_raw(raw: &RawSchemoid) -> Result<Self, SchemoidError> {
        let category = fincat::validate_category(&raw.category)?;
        let partition = MorphismPartition::from_raw(&category, &raw.partition)?;
        let quasi = QuasiSchemoid::new(category, partition)?;
        let involution = match &raw.involution {
            Some(rt) => {
                let mut rt = rt.clone();
                rt.contravariant = true;
                let c = quasi.category();
                let t = Functor::from_raw(&rt, c, c)
                    .map_err(|e| SchemoidError::NotInvolution(e.to_string()))?;
                Some(check_association(&quasi, &t)?)
            }
            None => None,
        };
        let base_points = match &raw.base_points {
            Some(v) => Some(
                v.iter()
                    .map(|x| {
                        quasi
                            .category()
                            .object_id(x)
                            .ok_or_else(|| SchemoidError::UnknownObject(x.clone()))
                    })
                    .collect::<Result<Vec<_>, _>>()?,
            ),
            None => None,
        };
        Ok(Schemoid {
            quasi,
            involution,
            base_points,
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fincat::{arrow, group_category, terminal};
    use crate::group::FiniteGroup;

    fn arrow_schemoid(blocks: &[(&str, &[&str])]) -> Result<QuasiSchemoid, SchemoidError> {
        let c = arrow();
        let p = MorphismPartition::from_named(&c, blocks)?;
        QuasiSchemoid::new(c, p)
    }

    #[test]
    fn discrete_partition_constants_are_zero_one() {
        let q = QuasiSchemoid::discrete(arrow());
        assert!(q.constants().nonzero().all(|(_, _, _, v)| v == 1));
        assert!(q.is_unital());
    }

    #[test]
    fn merging_identity_with_arrow_breaks_the_axiom() {
        let err = arrow_schemoid(&[("a", &["1_x", "f"]), ("b", &["1_y"])]).unwrap_err();
        match err {
            SchemoidError::AxiomViolation(w) => {
                assert_eq!(w.mu, "a");
                assert_ne!(w.count1, w.count2);
            }
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn arrow_with_identity_block_is_unital_not_basic() {
        let q = arrow_schemoid(&[("S1", &["1_x", "1_y"]), ("S2", &["f"])]).unwrap();
        assert!(q.is_unital());
        assert!(!q.is_basic());
        let t = Functor {
            objects: vec![1, 0],
            morphisms: vec![1, 0, 2],
            contravariant: true,
        };
        assert!(check_association(&q, &t).is_ok());
    }

    #[test]
    fn group_one_block_with_inverse_is_association() {
        let g = FiniteGroup::cyclic(3);
        let c = group_category(&g);
        let q = QuasiSchemoid::new(
            c.clone(),
            MorphismPartition::new(&c, vec!["G".into()], vec![vec![0, 1, 2]]).unwrap(),
        )
        .unwrap();
        assert!(!q.is_unital());
        let t = Functor {
            objects: vec![0],
            morphisms: (0..3).map(|a| g.inv(a)).collect(),
            contravariant: true,
        };
        assert!(check_association(&q, &t).is_ok());
        // separating g from g⁻¹ is still closed under T
        let q = QuasiSchemoid::discrete(c);
        assert!(check_association(&q, &t).is_ok());
    }

    #[test]
    fn automorphism_not_preserving_blocks() {
        // Klein four group, blocks {e},{a},{b,c}; T swaps a and b
        let k = FiniteGroup::cyclic(2).direct_product(&FiniteGroup::cyclic(2));
        let c = group_category(&k);
        let p = MorphismPartition::new(
            &c,
            vec!["e".into(), "a".into(), "bc".into()],
            vec![vec![0], vec![1], vec![2, 3]],
        )
        .unwrap();
        let q = QuasiSchemoid::new(c, p).unwrap();
        let t = Functor {
            objects: vec![0],
            morphisms: vec![0, 2, 1, 3],
            contravariant: true,
        };
        assert_eq!(
            check_association(&q, &t),
            Err(SchemoidError::BlockNotPreserved("a".into()))
        );
    }

    #[test]
    fn counting_identity_over_blocks() {
        // Σ_μ p^μ_{στ}·|μ| = #composable pairs in σ × τ
        let q = arrow_schemoid(&[("S1", &["1_x", "1_y"]), ("S2", &["f"])]).unwrap();
        let c = q.category();
        for s in 0..q.num_blocks() {
            for t in 0..q.num_blocks() {
                let pairs = c
                    .composable_pairs()
                    .filter(|&(f, g, _)| q.block_of(f) == s && q.block_of(g) == t)
                    .count() as u64;
                let sum: u64 = (0..q.num_blocks())
                    .map(|m| q.p(s, t, m) * q.partition().block(m).len() as u64)
                    .sum();
                assert_eq!(sum, pairs);
            }
        }
    }

    #[test]
    fn identity_isomorphism_and_size_mismatch() {
        let q = QuasiSchemoid::discrete(arrow());
        let iso = schemoid_isomorphic(&q, &q).unwrap();
        assert!(iso.functor.is_bijective(q.category()));
        let t = QuasiSchemoid::discrete(terminal());
        assert!(matches!(
            schemoid_isomorphic(&q, &t),
            Err(IsoFailure::SizeMismatch(_))
        ));
    }

    #[test]
    fn seeded_search_still_finds_isomorphisms() {
        let g = FiniteGroup::cyclic(4);
        let q = QuasiSchemoid::discrete(group_category(&g));
        for seed in 0..5 {
            let iso = schemoid_isomorphic_with(&q, &q, IsoOptions { seed: Some(seed) }).unwrap();
            assert!(iso.functor.check(q.category(), q.category()).is_ok());
        }
    }

    #[test]
    fn raw_schemoid_round_trip() {
        let q = arrow_schemoid(&[("S1", &["1_x", "1_y"]), ("S2", &["f"])]).unwrap();
        let s = Schemoid::from_quasi(q);
        let raw = s.to_raw();
        let text = serde_json::to_string(&raw).unwrap();
        let back = Schemoid::from_raw(&serde_json::from_str(&text).unwrap()).unwrap();
        assert_eq!(back, s);
        assert_eq!(serde_json::to_string(&back.to_raw()).unwrap(), text);
    }
}
