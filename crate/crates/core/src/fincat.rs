//! Finite categories, groupoids and functors.
//!
//! Objects and morphisms carry opaque string ids at the boundary and dense
//! indices internally. Composition is written `compose(f, g) = f∘g` and is
//! defined exactly when `src(f) == tgt(g)`.

use std::collections::{HashMap, HashSet};
use std::ops::Deref;

use indexmap::IndexMap;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::group::FiniteGroup;

pub type ObjId = usize;
pub type MorId = usize;

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Morphism {
    pub name: String,
    pub src: ObjId,
    pub tgt: ObjId,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CategoryError {
    #[error("duplicate object id `{0}`")]
    DuplicateObject(String),
    #[error("duplicate morphism id `{0}`")]
    DuplicateMorphism(String),
    #[error("unknown object id `{0}`")]
    UnknownObject(String),
    #[error("unknown morphism id `{0}`")]
    UnknownMorphism(String),
    #[error("object `{0}` has no identity morphism")]
    MissingIdentity(String),
    #[error("endpoint mismatch: {0}")]
    EndpointMismatch(String),
    #[error("composite `{f}`∘`{g}` is not defined")]
    UndefinedComposite { f: String, g: String },
    #[error("composite `{f}`∘`{g}` is given twice with different values")]
    ConflictingComposite { f: String, g: String },
    #[error("unit law fails for `{0}`")]
    IdentityLaw(String),
    #[error("associativity fails: (`{f}`∘`{g}`)∘`{h}` ≠ `{f}`∘(`{g}`∘`{h}`)")]
    NonAssociative { f: String, g: String, h: String },
    #[error("morphism `{0}` is not invertible")]
    NotInvertible(String),
    #[error("inverse table is inconsistent at `{0}`")]
    BadInverse(String),
}

/// Incremental description of a category; `build` validates every law.
#[derive(Debug, Clone, Default)]
pub struct CategoryBuilder {
    objects: Vec<String>,
    morphisms: Vec<(String, String, String)>,
    identities: Vec<(String, String)>,
    composites: Vec<(String, String, String)>,
}

impl CategoryBuilder {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn object(&mut self, name: impl Into<String>) -> &mut Self {
        self.objects.push(name.into());
        self
    }

    pub fn morphism(
        &mut self,
        name: impl Into<String>,
        src: impl Into<String>,
        tgt: impl Into<String>,
    ) -> &mut Self {
        self.morphisms.push((name.into(), src.into(), tgt.into()));
        self
    }

    /// Declares `mor` as the identity of `obj` and registers the morphism.
    pub fn identity(&mut self, obj: impl Into<String>, mor: impl Into<String>) -> &mut Self {
        let (obj, mor) = (obj.into(), mor.into());
        self.morphisms.push((mor.clone(), obj.clone(), obj.clone()));
        self.identities.push((obj, mor));
        self
    }

    /// Object together with an identity named `1_<obj>`.
    pub fn object_with_identity(&mut self, name: impl Into<String>) -> &mut Self {
        let name = name.into();
        self.object(name.clone());
        self.identity(name.clone(), format!("1_{name}"))
    }

    pub fn compose(
        &mut self,
        f: impl Into<String>,
        g: impl Into<String>,
        fg: impl Into<String>,
    ) -> &mut Self {
        self.composites.push((f.into(), g.into(), fg.into()));
        self
    }

    pub fn build(&self) -> Result<FinCategory, CategoryError> {
        let mut obj_index = HashMap::new();
        for (i, o) in self.objects.iter().enumerate() {
            if obj_index.insert(o.clone(), i).is_some() {
                return Err(CategoryError::DuplicateObject(o.clone()));
            }
        }
        let lookup_obj = |s: &str| {
            obj_index
                .get(s)
                .copied()
                .ok_or_else(|| CategoryError::UnknownObject(s.to_string()))
        };
        let mut mor_index = HashMap::new();
        let mut morphisms = Vec::with_capacity(self.morphisms.len());
        for (i, (name, s, t)) in self.morphisms.iter().enumerate() {
            if mor_index.insert(name.clone(), i).is_some() {
                return Err(CategoryError::DuplicateMorphism(name.clone()));
            }
            morphisms.push(Morphism {
                name: name.clone(),
                src: lookup_obj(s)?,
                tgt: lookup_obj(t)?,
            });
        }
        let lookup_mor = |s: &str| {
            mor_index
                .get(s)
                .copied()
                .ok_or_else(|| CategoryError::UnknownMorphism(s.to_string()))
        };

        let mut identity = vec![usize::MAX; self.objects.len()];
        for (o, m) in &self.identities {
            let (x, f) = (lookup_obj(o)?, lookup_mor(m)?);
            if morphisms[f].src != x || morphisms[f].tgt != x {
                return Err(CategoryError::EndpointMismatch(format!(
                    "identity `{m}` of `{o}` must be an endomorphism of `{o}`"
                )));
            }
            if identity[x] != usize::MAX && identity[x] != f {
                return Err(CategoryError::EndpointMismatch(format!(
                    "object `{o}` has two identities"
                )));
            }
            identity[x] = f;
        }
        if let Some(x) = identity.iter().position(|&m| m == usize::MAX) {
            return Err(CategoryError::MissingIdentity(self.objects[x].clone()));
        }
        let mut is_identity = vec![false; morphisms.len()];
        for &m in &identity {
            if is_identity[m] {
                return Err(CategoryError::EndpointMismatch(format!(
                    "`{}` is the identity of two objects",
                    morphisms[m].name
                )));
            }
            is_identity[m] = true;
        }

        let n_obj = self.objects.len();
        let mut incoming = vec![Vec::new(); n_obj];
        let mut outgoing = vec![Vec::new(); n_obj];
        let mut incoming_pos = vec![0; morphisms.len()];
        for (i, m) in morphisms.iter().enumerate() {
            incoming_pos[i] = incoming[m.tgt].len();
            incoming[m.tgt].push(i);
            outgoing[m.src].push(i);
        }
        let mut table: Vec<Vec<MorId>> = morphisms
            .iter()
            .map(|m| vec![usize::MAX; incoming[m.src].len()])
            .collect();

        for (fs, gs, hs) in &self.composites {
            let (f, g, h) = (lookup_mor(fs)?, lookup_mor(gs)?, lookup_mor(hs)?);
            if morphisms[f].src != morphisms[g].tgt {
                return Err(CategoryError::EndpointMismatch(format!(
                    "`{fs}`∘`{gs}` listed but src(`{fs}`) ≠ tgt(`{gs}`)"
                )));
            }
            if morphisms[h].src != morphisms[g].src || morphisms[h].tgt != morphisms[f].tgt {
                return Err(CategoryError::EndpointMismatch(format!(
                    "`{fs}`∘`{gs}` = `{hs}` has the wrong endpoints"
                )));
            }
            let slot = &mut table[f][incoming_pos[g]];
            if *slot != usize::MAX && *slot != h {
                return Err(CategoryError::ConflictingComposite {
                    f: fs.clone(),
                    g: gs.clone(),
                });
            }
            *slot = h;
        }
        // unit laws: fill implied entries, reject contradicting ones
        for f in 0..morphisms.len() {
            let s = morphisms[f].src;
            let t = morphisms[f].tgt;
            for (slot_owner, g) in [(f, identity[s]), (identity[t], f)] {
                let slot = &mut table[slot_owner][incoming_pos[g]];
                if *slot != usize::MAX && *slot != f {
                    return Err(CategoryError::IdentityLaw(morphisms[f].name.clone()));
                }
                *slot = f;
            }
        }
        for f in 0..morphisms.len() {
            for (k, &h) in table[f].iter().enumerate() {
                if h == usize::MAX {
                    let g = incoming[morphisms[f].src][k];
                    return Err(CategoryError::UndefinedComposite {
                        f: morphisms[f].name.clone(),
                        g: morphisms[g].name.clone(),
                    });
                }
            }
        }

        let cat = FinCategory {
            objects: self.objects.clone(),
            obj_index,
            morphisms,
            mor_index,
            identity,
            is_identity,
            incoming,
            outgoing,
            incoming_pos,
            table,
        };
        cat.check_associativity()?;
        Ok(cat)
    }
}

/// A validated finite category.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FinCategory {
    objects: Vec<String>,
    obj_index: HashMap<String, ObjId>,
    morphisms: Vec<Morphism>,
    mor_index: HashMap<String, MorId>,
    identity: Vec<MorId>,
    is_identity: Vec<bool>,
    incoming: Vec<Vec<MorId>>,
    outgoing: Vec<Vec<MorId>>,
    incoming_pos: Vec<usize>,
    // table[f][k] = f ∘ incoming[src f][k]
    table: Vec<Vec<MorId>>,
}

impl FinCategory {
    fn check_associativity(&self) -> Result<(), CategoryError> {
        for f in 0..self.num_morphisms() {
            if self.is_identity[f] {
                continue;
            }
            for &g in &self.incoming[self.src(f)] {
                if self.is_identity[g] {
                    continue;
                }
                let fg = self.comp(f, g);
                for &h in &self.incoming[self.src(g)] {
                    if self.is_identity[h] {
                        continue;
                    }
                    if self.comp(fg, h) != self.comp(f, self.comp(g, h)) {
                        return Err(CategoryError::NonAssociative {
                            f: self.morphisms[f].name.clone(),
                            g: self.morphisms[g].name.clone(),
                            h: self.morphisms[h].name.clone(),
                        });
                    }
                }
            }
        }
        Ok(())
    }

    #[inline]
    fn comp(&self, f: MorId, g: MorId) -> MorId {
        self.table[f][self.incoming_pos[g]]
    }

    pub fn num_objects(&self) -> usize {
        self.objects.len()
    }

    pub fn num_morphisms(&self) -> usize {
        self.morphisms.len()
    }

    pub fn objects(&self) -> &[String] {
        &self.objects
    }

    pub fn morphisms(&self) -> &[Morphism] {
        &self.morphisms
    }

    pub fn object_name(&self, x: ObjId) -> &str {
        &self.objects[x]
    }

    pub fn morphism_name(&self, f: MorId) -> &str {
        &self.morphisms[f].name
    }

    pub fn object_id(&self, name: &str) -> Option<ObjId> {
        self.obj_index.get(name).copied()
    }

    pub fn morphism_id(&self, name: &str) -> Option<MorId> {
        self.mor_index.get(name).copied()
    }

    pub fn src(&self, f: MorId) -> ObjId {
        self.morphisms[f].src
    }

    pub fn tgt(&self, f: MorId) -> ObjId {
        self.morphisms[f].tgt
    }

    pub fn identity(&self, x: ObjId) -> MorId {
        self.identity[x]
    }

    pub fn is_identity(&self, f: MorId) -> bool {
        self.is_identity[f]
    }

    /// Morphisms with target `x`.
    pub fn incoming(&self, x: ObjId) -> &[MorId] {
        &self.incoming[x]
    }

    /// Morphisms with source `x`.
    pub fn outgoing(&self, x: ObjId) -> &[MorId] {
        &self.outgoing[x]
    }

    /// `f∘g`, or `None` when `src(f) ≠ tgt(g)`.
    pub fn compose(&self, f: MorId, g: MorId) -> Option<MorId> {
        (self.src(f) == self.tgt(g)).then(|| self.comp(f, g))
    }

    /// Hom(a, b): morphisms from `a` to `b`.
    pub fn hom(&self, a: ObjId, b: ObjId) -> Vec<MorId> {
        self.outgoing[a]
            .iter()
            .copied()
            .filter(|&f| self.tgt(f) == b)
            .collect()
    }

    /// All triples `(f, g, f∘g)`.
    pub fn composable_pairs(&self) -> impl Iterator<Item = (MorId, MorId, MorId)> + '_ {
        (0..self.num_morphisms()).flat_map(move |f| {
            self.incoming[self.src(f)]
                .iter()
                .zip(&self.table[f])
                .map(move |(&g, &h)| (f, g, h))
        })
    }

    pub fn num_composable_pairs(&self) -> usize {
        self.table.iter().map(Vec::len).sum()
    }

    pub fn is_groupoid(&self) -> bool {
        as_groupoid(self).is_ok()
    }

    /// Connected components of the object set under undirected reachability.
    pub fn components(&self) -> Vec<Vec<ObjId>> {
        let n = self.num_objects();
        let mut comp = vec![usize::MAX; n];
        let mut out = Vec::new();
        for start in 0..n {
            if comp[start] != usize::MAX {
                continue;
            }
            let id = out.len();
            let mut members = vec![start];
            comp[start] = id;
            let mut i = 0;
            while i < members.len() {
                let x = members[i];
                i += 1;
                let nbrs = self.outgoing[x]
                    .iter()
                    .map(|&f| self.tgt(f))
                    .chain(self.incoming[x].iter().map(|&f| self.src(f)));
                for y in nbrs.collect::<Vec<_>>() {
                    if comp[y] == usize::MAX {
                        comp[y] = id;
                        members.push(y);
                    }
                }
            }
            members.sort_unstable();
            out.push(members);
        }
        out
    }

    pub fn to_raw(&self) -> RawCategory {
        let identities = (0..self.num_objects())
            .map(|x| {
                (
                    self.objects[x].clone(),
                    self.morphism_name(self.identity[x]).to_string(),
                )
            })
            .collect();
        let compose = self
            .composable_pairs()
            .filter(|&(f, g, _)| !self.is_identity(f) && !self.is_identity(g))
            .map(|(f, g, h)| [f, g, h].map(|m| self.morphism_name(m).to_string()))
            .collect();
        RawCategory {
            objects: self.objects.clone(),
            morphisms: self
                .morphisms
                .iter()
                .map(|m| RawMorphism {
                    id: m.name.clone(),
                    src: self.objects[m.src].clone(),
                    tgt: self.objects[m.tgt].clone(),
                })
                .collect(),
            identities,
            compose,
        }
    }

    pub fn from_raw(raw: &RawCategory) -> Result<Self, CategoryError> {
        validate_category(raw)
    }

    /// Builder pre-loaded with this category's data, for derived constructions.
    fn builder_with_renames(
        &self,
        obj_name: impl Fn(&str) -> String,
        mor_name: impl Fn(&str) -> String,
    ) -> CategoryBuilder {
        let mut b = CategoryBuilder::new();
        for o in &self.objects {
            b.object(obj_name(o));
        }
        for (i, m) in self.morphisms.iter().enumerate() {
            if self.is_identity[i] {
                b.identity(obj_name(&self.objects[m.src]), mor_name(&m.name));
            } else {
                b.morphism(
                    mor_name(&m.name),
                    obj_name(&self.objects[m.src]),
                    obj_name(&self.objects[m.tgt]),
                );
            }
        }
        for (f, g, h) in self.composable_pairs() {
            if !self.is_identity(f) && !self.is_identity(g) {
                b.compose(
                    mor_name(self.morphism_name(f)),
                    mor_name(self.morphism_name(g)),
                    mor_name(self.morphism_name(h)),
                );
            }
        }
        b
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct RawMorphism {
    pub id: String,
    pub src: String,
    pub tgt: String,
}

/// Interchange form of a category.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct RawCategory {
    pub objects: Vec<String>,
    pub morphisms: Vec<RawMorphism>,
    pub identities: IndexMap<String, String>,
    #[serde(default)]
    pub compose: Vec<[String; 3]>,
}

pub fn validate_category(raw: &RawCategory) -> Result<FinCategory, CategoryError> {
    let mut b = CategoryBuilder::new();
    for o in &raw.objects {
        b.object(o.clone());
    }
    for m in &raw.morphisms {
        b.morphism(m.id.clone(), m.src.clone(), m.tgt.clone());
    }
    for (o, m) in &raw.identities {
        b.identities.push((o.clone(), m.clone()));
    }
    for [f, g, h] in &raw.compose {
        b.compose(f.clone(), g.clone(), h.clone());
    }
    b.build()
}

/// A finite category in which every morphism is invertible.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Groupoid {
    category: FinCategory,
    inverse: Vec<MorId>,
}

impl Deref for Groupoid {
    type Target = FinCategory;
    fn deref(&self) -> &FinCategory {
        &self.category
    }
}

impl Groupoid {
    pub fn category(&self) -> &FinCategory {
        &self.category
    }

    pub fn into_category(self) -> FinCategory {
        self.category
    }

    pub fn inverse(&self, f: MorId) -> MorId {
        self.inverse[f]
    }

    /// One-object groupoid of a finite group; the object is `*`.
    pub fn from_group(g: &FiniteGroup) -> Groupoid {
        as_groupoid(&group_category(g)).expect("groups are groupoids")
    }

    pub fn to_raw(&self) -> RawGroupoid {
        RawGroupoid {
            category: self.category.to_raw(),
            inverse: (0..self.num_morphisms())
                .map(|f| {
                    (
                        self.morphism_name(f).to_string(),
                        self.morphism_name(self.inverse[f]).to_string(),
                    )
                })
                .collect(),
        }
    }

    /// Validates the category and checks the supplied inverse table.
    pub fn from_raw(raw: &RawGroupoid) -> Result<Groupoid, CategoryError> {
        let category = validate_category(&raw.category)?;
        let computed = as_groupoid(&category)?;
        for (f, finv) in &raw.inverse {
            let fi = category
                .morphism_id(f)
                .ok_or_else(|| CategoryError::UnknownMorphism(f.clone()))?;
            let gi = category
                .morphism_id(finv)
                .ok_or_else(|| CategoryError::UnknownMorphism(finv.clone()))?;
            if computed.inverse[fi] != gi {
                return Err(CategoryError::BadInverse(f.clone()));
            }
        }
        Ok(computed)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct RawGroupoid {
    #[serde(flatten)]
    pub category: RawCategory,
    #[serde(default)]
    pub inverse: IndexMap<String, String>,
}

pub fn as_groupoid(c: &FinCategory) -> Result<Groupoid, CategoryError> {
    let mut inverse = vec![usize::MAX; c.num_morphisms()];
    for f in 0..c.num_morphisms() {
        let (s, t) = (c.src(f), c.tgt(f));
        let found = c.hom(t, s).into_iter().find(|&g| {
            c.compose(f, g) == Some(c.identity(t)) && c.compose(g, f) == Some(c.identity(s))
        });
        match found {
            Some(g) => inverse[f] = g,
            None => return Err(CategoryError::NotInvertible(c.morphism_name(f).to_string())),
        }
    }
    Ok(Groupoid {
        category: c.clone(),
        inverse,
    })
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum FunctorError {
    #[error("functor tables have the wrong length")]
    Shape,
    #[error("functor does not send identity of `{0}` to an identity")]
    IdentityNotPreserved(String),
    #[error("functor sends `{0}` to a morphism with the wrong endpoints")]
    EndpointMismatch(String),
    #[error("functor does not preserve the composite `{f}`∘`{g}`")]
    CompositionNotPreserved { f: String, g: String },
    #[error("unknown id `{0}` in functor description")]
    UnknownId(String),
    #[error("functor description misses `{0}`")]
    Missing(String),
}

/// A functor between finite categories given by its object and morphism tables.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Functor {
    pub objects: Vec<ObjId>,
    pub morphisms: Vec<MorId>,
    pub contravariant: bool,
}

impl Functor {
    pub fn identity(c: &FinCategory) -> Functor {
        Functor {
            objects: (0..c.num_objects()).collect(),
            morphisms: (0..c.num_morphisms()).collect(),
            contravariant: false,
        }
    }

    pub fn check(&self, source: &FinCategory, target: &FinCategory) -> Result<(), FunctorError> {
        if self.objects.len() != source.num_objects()
            || self.morphisms.len() != source.num_morphisms()
            || self.objects.iter().any(|&x| x >= target.num_objects())
            || self.morphisms.iter().any(|&f| f >= target.num_morphisms())
        {
            return Err(FunctorError::Shape);
        }
        for x in 0..source.num_objects() {
            if self.morphisms[source.identity(x)] != target.identity(self.objects[x]) {
                return Err(FunctorError::IdentityNotPreserved(
                    source.object_name(x).to_string(),
                ));
            }
        }
        for f in 0..source.num_morphisms() {
            let img = self.morphisms[f];
            let (s, t) = (self.objects[source.src(f)], self.objects[source.tgt(f)]);
            let ok = if self.contravariant {
                target.src(img) == t && target.tgt(img) == s
            } else {
                target.src(img) == s && target.tgt(img) == t
            };
            if !ok {
                return Err(FunctorError::EndpointMismatch(
                    source.morphism_name(f).to_string(),
                ));
            }
        }
        for (f, g, h) in source.composable_pairs() {
            let (ff, fg) = (self.morphisms[f], self.morphisms[g]);
            let expected = if self.contravariant {
                target.compose(fg, ff)
            } else {
                target.compose(ff, fg)
            };
            if expected != Some(self.morphisms[h]) {
                return Err(FunctorError::CompositionNotPreserved {
                    f: source.morphism_name(f).to_string(),
                    g: source.morphism_name(g).to_string(),
                });
            }
        }
        Ok(())
    }

    /// `other ∘ self` (apply `self` first).
    pub fn then(&self, other: &Functor) -> Functor {
        Functor {
            objects: self.objects.iter().map(|&x| other.objects[x]).collect(),
            morphisms: self.morphisms.iter().map(|&f| other.morphisms[f]).collect(),
            contravariant: self.contravariant != other.contravariant,
        }
    }

    pub fn is_bijective(&self, target: &FinCategory) -> bool {
        fn bij(v: &[usize], n: usize) -> bool {
            if v.len() != n {
                return false;
            }
            let mut seen = vec![false; n];
            v.iter().all(|&i| !std::mem::replace(&mut seen[i], true))
        }
        bij(&self.objects, target.num_objects()) && bij(&self.morphisms, target.num_morphisms())
    }

    pub fn inverse(&self) -> Functor {
        let mut objects = vec![0; self.objects.len()];
        for (i, &x) in self.objects.iter().enumerate() {
            objects[x] = i;
        }
        let mut morphisms = vec![0; self.morphisms.len()];
        for (i, &f) in self.morphisms.iter().enumerate() {
            morphisms[f] = i;
        }
        Functor {
            objects,
            morphisms,
            contravariant: self.contravariant,
        }
    }

    pub fn to_raw(&self, source: &FinCategory, target: &FinCategory) -> RawFunctor {
        RawFunctor {
            objects: (0..source.num_objects())
                .map(|x| {
                    (
                        source.object_name(x).to_string(),
                        target.object_name(self.objects[x]).to_string(),
                    )
                })
                .collect(),
            morphisms: (0..source.num_morphisms())
                .map(|f| {
                    (
                        source.morphism_name(f).to_string(),
                        target.morphism_name(self.morphisms[f]).to_string(),
                    )
                })
                .collect(),
            contravariant: self.contravariant,
        }
    }

    /// Resolves names and checks the functor laws.
    pub fn from_raw(
        raw: &RawFunctor,
        source: &FinCategory,
        target: &FinCategory,
    ) -> Result<Functor, FunctorError> {
        let mut objects = vec![usize::MAX; source.num_objects()];
        for (a, b) in &raw.objects {
            let x = source
                .object_id(a)
                .ok_or_else(|| FunctorError::UnknownId(a.clone()))?;
            objects[x] = target
                .object_id(b)
                .ok_or_else(|| FunctorError::UnknownId(b.clone()))?;
        }
        let mut morphisms = vec![usize::MAX; source.num_morphisms()];
        for (a, b) in &raw.morphisms {
            let f = source
                .morphism_id(a)
                .ok_or_else(|| FunctorError::UnknownId(a.clone()))?;
            morphisms[f] = target
                .morphism_id(b)
                .ok_or_else(|| FunctorError::UnknownId(b.clone()))?;
        }
        // objects may be left implicit when determined by identities
        for x in 0..source.num_objects() {
            if objects[x] == usize::MAX {
                let f = morphisms[source.identity(x)];
                if f == usize::MAX {
                    return Err(FunctorError::Missing(source.object_name(x).to_string()));
                }
                objects[x] = target.src(f);
            }
        }
        if let Some(f) = morphisms.iter().position(|&m| m == usize::MAX) {
            return Err(FunctorError::Missing(source.morphism_name(f).to_string()));
        }
        let functor = Functor {
            objects,
            morphisms,
            contravariant: raw.contravariant,
        };
        functor.check(source, target)?;
        Ok(functor)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct RawFunctor {
    #[serde(default)]
    pub objects: IndexMap<String, String>,
    pub morphisms: IndexMap<String, String>,
    #[serde(default, skip_serializing_if = "std::ops::Not::not")]
    pub contravariant: bool,
}

fn fresh(base: String, used: &mut HashSet<String>) -> String {
    let mut name = base;
    while used.contains(&name) {
        name.push('\'');
    }
    used.insert(name.clone());
    name
}

/// The category with one object `*` and one morphism.
pub fn terminal() -> FinCategory {
    let mut b = CategoryBuilder::new();
    b.object("*").identity("*", "1");
    b.build().expect("terminal category")
}

/// The category `x → y` with one non-identity morphism `f`.
pub fn arrow() -> FinCategory {
    let mut b = CategoryBuilder::new();
    b.object_with_identity("x")
        .object_with_identity("y")
        .morphism("f", "x", "y");
    b.build().expect("arrow category")
}

/// One-object category of a finite group.
pub fn group_category(g: &FiniteGroup) -> FinCategory {
    let mut b = CategoryBuilder::new();
    b.object("*");
    for a in 0..g.order() {
        if a == g.identity() {
            b.identity("*", g.name(a));
        } else {
            b.morphism(g.name(a), "*", "*");
        }
    }
    for a in 0..g.order() {
        for c in 0..g.order() {
            b.compose(g.name(a), g.name(c), g.name(g.mul(a, c)));
        }
    }
    b.build().expect("group tables give categories")
}

/// Preorder on `0..n` generated by `relations` (pairs `(a, b)` meaning `a ≤ b`).
pub fn preorder(n: usize, relations: &[(usize, usize)]) -> FinCategory {
    let mut le = vec![vec![false; n]; n];
    for (i, row) in le.iter_mut().enumerate() {
        row[i] = true;
    }
    for &(a, b) in relations {
        le[a][b] = true;
    }
    for k in 0..n {
        for i in 0..n {
            for j in 0..n {
                if le[i][k] && le[k][j] {
                    le[i][j] = true;
                }
            }
        }
    }
    let name = |i: usize, j: usize| {
        if i == j {
            format!("1_{i}")
        } else {
            format!("{i}<{j}")
        }
    };
    let mut b = CategoryBuilder::new();
    for i in 0..n {
        b.object(i.to_string()).identity(i.to_string(), name(i, i));
    }
    for i in 0..n {
        for j in 0..n {
            if i != j && le[i][j] {
                b.morphism(name(i, j), i.to_string(), j.to_string());
            }
        }
    }
    for i in 0..n {
        for j in 0..n {
            for k in 0..n {
                if i != j && j != k && le[i][j] && le[j][k] {
                    b.compose(name(j, k), name(i, j), name(i, k));
                }
            }
        }
    }
    b.build().expect("preorders are categories")
}

/// Product category; ids are `(a,b)`.
pub fn product(c: &FinCategory, d: &FinCategory) -> FinCategory {
    let mut b = CategoryBuilder::new();
    let mut used_obj = HashSet::new();
    let mut used_mor = HashSet::new();
    let mut on = vec![vec![String::new(); d.num_objects()]; c.num_objects()];
    for x in 0..c.num_objects() {
        for y in 0..d.num_objects() {
            on[x][y] = fresh(
                format!("({},{})", c.object_name(x), d.object_name(y)),
                &mut used_obj,
            );
            b.object(on[x][y].clone());
        }
    }
    let mut mn = vec![vec![String::new(); d.num_morphisms()]; c.num_morphisms()];
    for f in 0..c.num_morphisms() {
        for g in 0..d.num_morphisms() {
            mn[f][g] = fresh(
                format!("({},{})", c.morphism_name(f), d.morphism_name(g)),
                &mut used_mor,
            );
            let (s, t) = (&on[c.src(f)][d.src(g)], &on[c.tgt(f)][d.tgt(g)]);
            if c.is_identity(f) && d.is_identity(g) {
                b.identity(s.clone(), mn[f][g].clone());
            } else {
                b.morphism(mn[f][g].clone(), s.clone(), t.clone());
            }
        }
    }
    for (f1, f2, f3) in c.composable_pairs() {
        for (g1, g2, g3) in d.composable_pairs() {
            b.compose(mn[f1][g1].clone(), mn[f2][g2].clone(), mn[f3][g3].clone());
        }
    }
    b.build().expect("products of categories are categories")
}

/// Names used by `join` for the two sides and the connecting morphisms.
#[derive(Debug, Clone)]
pub struct JoinNames {
    pub left_objects: Vec<String>,
    pub left_morphisms: Vec<String>,
    pub right_objects: Vec<String>,
    pub right_morphisms: Vec<String>,
    /// `w[a][b]` for `a` in the left and `b` in the right category.
    pub w: Vec<Vec<String>>,
}

fn join_names(c: &FinCategory, d: &FinCategory) -> JoinNames {
    let clash = c.objects().iter().any(|o| d.object_id(o).is_some())
        || c.morphisms()
            .iter()
            .any(|m| d.morphism_id(&m.name).is_some());
    let (lp, rp) = if clash { ("L.", "R.") } else { ("", "") };
    let left_objects: Vec<String> = c.objects().iter().map(|o| format!("{lp}{o}")).collect();
    let right_objects: Vec<String> = d.objects().iter().map(|o| format!("{rp}{o}")).collect();
    let left_morphisms: Vec<String> = c
        .morphisms()
        .iter()
        .map(|m| format!("{lp}{}", m.name))
        .collect();
    let right_morphisms: Vec<String> = d
        .morphisms()
        .iter()
        .map(|m| format!("{rp}{}", m.name))
        .collect();
    let mut used: HashSet<String> = left_morphisms
        .iter()
        .chain(&right_morphisms)
        .cloned()
        .collect();
    let w = left_objects
        .iter()
        .map(|a| {
            right_objects
                .iter()
                .map(|bn| fresh(format!("w({a},{bn})"), &mut used))
                .collect()
        })
        .collect();
    JoinNames {
        left_objects,
        left_morphisms,
        right_objects,
        right_morphisms,
        w,
    }
}

/// Join `C∗D`: both categories plus one morphism `w(a,b): a → b` for each pair
/// of objects, absorbing pre- and post-composition.
pub fn join(c: &FinCategory, d: &FinCategory) -> FinCategory {
    join_with_names(c, d).0
}

pub fn join_with_names(c: &FinCategory, d: &FinCategory) -> (FinCategory, JoinNames) {
    let n = join_names(c, d);
    let mut b = CategoryBuilder::new();
    for (side, objs, mors) in [
        (c, &n.left_objects, &n.left_morphisms),
        (d, &n.right_objects, &n.right_morphisms),
    ] {
        for o in objs {
            b.object(o.clone());
        }
        for f in 0..side.num_morphisms() {
            let (s, t) = (objs[side.src(f)].clone(), objs[side.tgt(f)].clone());
            if side.is_identity(f) {
                b.identity(s, mors[f].clone());
            } else {
                b.morphism(mors[f].clone(), s, t);
            }
        }
        for (f, g, h) in side.composable_pairs() {
            b.compose(mors[f].clone(), mors[g].clone(), mors[h].clone());
        }
    }
    for a in 0..c.num_objects() {
        for bb in 0..d.num_objects() {
            b.morphism(
                n.w[a][bb].clone(),
                n.left_objects[a].clone(),
                n.right_objects[bb].clone(),
            );
        }
    }
    for alpha in 0..d.num_morphisms() {
        for a in 0..c.num_objects() {
            b.compose(
                n.right_morphisms[alpha].clone(),
                n.w[a][d.src(alpha)].clone(),
                n.w[a][d.tgt(alpha)].clone(),
            );
        }
    }
    for beta in 0..c.num_morphisms() {
        for bb in 0..d.num_objects() {
            b.compose(
                n.w[c.tgt(beta)][bb].clone(),
                n.left_morphisms[beta].clone(),
                n.w[c.src(beta)][bb].clone(),
            );
        }
    }
    (b.build().expect("joins of categories are categories"), n)
}

/// Disjoint union; ids are prefixed `L.`/`R.` only when they collide.
pub fn disjoint_union(c: &FinCategory, d: &FinCategory) -> FinCategory {
    let clash = c.objects().iter().any(|o| d.object_id(o).is_some())
        || c.morphisms()
            .iter()
            .any(|m| d.morphism_id(&m.name).is_some());
    let (lp, rp) = if clash { ("L.", "R.") } else { ("", "") };
    let mut b = c.builder_with_renames(|o| format!("{lp}{o}"), |m| format!("{lp}{m}"));
    let other = d.builder_with_renames(|o| format!("{rp}{o}"), |m| format!("{rp}{m}"));
    b.objects.extend(other.objects);
    b.morphisms.extend(other.morphisms);
    b.identities.extend(other.identities);
    b.composites.extend(other.composites);
    b.build()
        .expect("disjoint unions of categories are categories")
}

/// Opposite category: same ids, endpoints swapped, composition reversed.
pub fn opposite(c: &FinCategory) -> FinCategory {
    let mut b = CategoryBuilder::new();
    for o in c.objects() {
        b.object(o.clone());
    }
    for f in 0..c.num_morphisms() {
        let (s, t) = (c.object_name(c.src(f)), c.object_name(c.tgt(f)));
        if c.is_identity(f) {
            b.identity(s, c.morphism_name(f));
        } else {
            b.morphism(c.morphism_name(f), t, s);
        }
    }
    for (f, g, h) in c.composable_pairs() {
        b.compose(c.morphism_name(g), c.morphism_name(f), c.morphism_name(h));
    }
    b.build().expect("opposites of categories are categories")
}

/// Category of factorizations: objects are the morphisms of `c`; a morphism
/// `f → g` is a pair `(α, β)` with `α∘f∘β = g`, named `(α,β)@f`.
pub fn factorization_category(c: &FinCategory) -> FinCategory {
    let mut b = CategoryBuilder::new();
    for f in 0..c.num_morphisms() {
        b.object(c.morphism_name(f));
    }
    let name = |a: MorId, be: MorId, f: MorId| {
        format!(
            "({},{})@{}",
            c.morphism_name(a),
            c.morphism_name(be),
            c.morphism_name(f)
        )
    };
    let target = |a: MorId, be: MorId, f: MorId| {
        let fb = c.compose(f, be).expect("composable");
        c.compose(a, fb).expect("composable")
    };
    for f in 0..c.num_morphisms() {
        for &a in c.outgoing(c.tgt(f)) {
            for &be in c.incoming(c.src(f)) {
                let g = target(a, be, f);
                let n = name(a, be, f);
                if c.is_identity(a) && c.is_identity(be) {
                    b.identity(c.morphism_name(f), n);
                } else {
                    b.morphism(n, c.morphism_name(f), c.morphism_name(g));
                }
            }
        }
    }
    for f in 0..c.num_morphisms() {
        for &a in c.outgoing(c.tgt(f)) {
            for &be in c.incoming(c.src(f)) {
                let g = target(a, be, f);
                for &a2 in c.outgoing(c.tgt(g)) {
                    for &be2 in c.incoming(c.src(g)) {
                        let a3 = c.compose(a2, a).expect("composable");
                        let be3 = c.compose(be, be2).expect("composable");
                        b.compose(name(a2, be2, g), name(a, be, f), name(a3, be3, f));
                    }
                }
            }
        }
    }
    b.build().expect("factorization categories are categories")
}
