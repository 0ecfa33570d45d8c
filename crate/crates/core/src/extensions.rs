//! Natural systems, Baues-Wirsching cochains and linear extensions of categories.
//!
//! A natural system assigns a free module `D_f` over `ℤ/m` (or `ℚ`) to every
//! morphism, with pushforwards `α_*: D_f → D_{αf}` and pullbacks
//! `β^*: D_f → D_{fβ}`. Cochain pairs `(f, g)` always mean `f∘g`.

use std::collections::HashMap;
use std::fmt;

use indexmap::IndexMap;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::fincat::{
    as_groupoid, CategoryBuilder, CategoryError, FinCategory, Functor, FunctorError, MorId, ObjId,
};
use crate::linalg::{self, Ring, Scalar};
use crate::schemoid::{
    check_association, AssociationSchemoid, MorphismPartition, QuasiSchemoid, SchemoidError,
};
use crate::smith;

pub type IntMatrix = Vec<Vec<i64>>;

/// Largest total category `build_extension` will assemble.
pub const EXTENSION_SIZE_LIMIT: usize = 1 << 16;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ExtensionError {
    #[error("modulus must be at least 2")]
    BadModulus,
    #[error("natural system shape: {0}")]
    Shape(String),
    #[error("functoriality violated: {0}")]
    FunctorialityViolated(String),
    #[error("unknown morphism `{0}`")]
    UnknownMorphism(String),
    #[error("unknown object `{0}`")]
    UnknownObject(String),
    #[error("cochain entry `{0}` is not a composable pair")]
    NotComposable(String),
    #[error("cochain has length {0}, expected {1}")]
    CochainShape(usize, usize),
    #[error("cohomology is implemented in degrees 0, 1 and 2, not {0}")]
    UnsupportedDegree(usize),
    #[error("not a 2-cocycle")]
    NotACocycle,
    #[error("cocycle is not normalized at ({0}, {1})")]
    NotNormalized(String, String),
    #[error("extensions need finite fibers, so a modulus")]
    InfiniteFibers,
    #[error("extension would have {0} morphisms")]
    TooLarge(usize),
    #[error("extensions live over different bases or systems")]
    BaseMismatch,
    #[error("lift hypothesis failed: {0}")]
    HypothesisFailed(String),
    #[error("lifted partition fails the concatenation axiom: {0}")]
    AxiomFailedAfterLift(String),
    #[error("base is not a connected groupoid whose involution is inversion")]
    BaseNotConnectedGroupoid,
    #[error("natural system is not induced by a functor")]
    SystemNotInduced,
    #[error("identity fails at `{0}`")]
    LemmaViolation(String),
    #[error(transparent)]
    Category(#[from] CategoryError),
    #[error(transparent)]
    Functor(#[from] FunctorError),
    #[error(transparent)]
    Schemoid(#[from] SchemoidError),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Coefficients {
    Modulo(u64),
    Rationals,
}

impl Coefficients {
    pub fn modulo(m: u64) -> Result<Self, ExtensionError> {
        if m < 2 {
            Err(ExtensionError::BadModulus)
        } else {
            Ok(Coefficients::Modulo(m))
        }
    }

    pub fn modulus(&self) -> Option<u64> {
        match self {
            Coefficients::Modulo(m) => Some(*m),
            Coefficients::Rationals => None,
        }
    }

    pub fn reduce(&self, v: i64) -> i64 {
        match self {
            Coefficients::Modulo(m) => v.rem_euclid(*m as i64),
            Coefficients::Rationals => v,
        }
    }
}

impl fmt::Display for Coefficients {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Coefficients::Modulo(m) => write!(f, "Z/{m}"),
            Coefficients::Rationals => write!(f, "Q"),
        }
    }
}

fn id_matrix(n: usize) -> IntMatrix {
    (0..n)
        .map(|i| (0..n).map(|j| i64::from(i == j)).collect())
        .collect()
}

fn mat_mul(
    coef: Coefficients,
    a: &IntMatrix,
    b: &IntMatrix,
    inner: usize,
    cols: usize,
) -> IntMatrix {
    a.iter()
        .map(|row| {
            (0..cols)
                .map(|j| coef.reduce((0..inner).map(|k| row[k] * b[k][j]).sum()))
                .collect()
        })
        .collect()
}

fn mat_vec(coef: Coefficients, a: &IntMatrix, x: &[i64]) -> Vec<i64> {
    a.iter()
        .map(|row| coef.reduce(row.iter().zip(x).map(|(a, b)| a * b).sum()))
        .collect()
}

fn reduce_matrix(coef: Coefficients, a: IntMatrix) -> IntMatrix {
    a.into_iter()
        .map(|r| r.into_iter().map(|x| coef.reduce(x)).collect())
        .collect()
}

/// A functor `F(C) → modules` on the factorization category.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct NaturalSystem {
    coefficients: Coefficients,
    ranks: Vec<usize>,
    push: HashMap<(MorId, MorId), IntMatrix>,
    pull: HashMap<(MorId, MorId), IntMatrix>,
}

impl NaturalSystem {
    /// Validates shapes, identities and the three functoriality squares.
    pub fn new(
        c: &FinCategory,
        coefficients: Coefficients,
        ranks: Vec<usize>,
        push: HashMap<(MorId, MorId), IntMatrix>,
        pull: HashMap<(MorId, MorId), IntMatrix>,
    ) -> Result<Self, ExtensionError> {
        if let Coefficients::Modulo(m) = coefficients {
            if m < 2 {
                return Err(ExtensionError::BadModulus);
            }
        }
        if ranks.len() != c.num_morphisms() {
            return Err(ExtensionError::Shape(format!(
                "{} ranks for {} morphisms",
                ranks.len(),
                c.num_morphisms()
            )));
        }
        let push = push
            .into_iter()
            .map(|(k, v)| (k, reduce_matrix(coefficients, v)))
            .collect();
        let pull = pull
            .into_iter()
            .map(|(k, v)| (k, reduce_matrix(coefficients, v)))
            .collect();
        let sys = NaturalSystem {
            coefficients,
            ranks,
            push,
            pull,
        };
        sys.validate(c)?;
        Ok(sys)
    }

    /// Every `D_f` equal to the same free module, every map the identity.
    pub fn trivial(
        c: &FinCategory,
        coefficients: Coefficients,
        rank: usize,
    ) -> Result<Self, ExtensionError> {
        Self::from_functor(
            c,
            coefficients,
            vec![rank; c.num_objects()],
            vec![id_matrix(rank); c.num_morphisms()],
        )
    }

    /// The system `D_f = H(t f)`, `α_* = H(α)`, `β^* = id` of a functor `H: C → modules`.
    ///
    /// `maps[f]` is the `rank(t f) × rank(s f)` matrix of `H(f)`.
    pub fn from_functor(
        c: &FinCategory,
        coefficients: Coefficients,
        object_ranks: Vec<usize>,
        maps: Vec<IntMatrix>,
    ) -> Result<Self, ExtensionError> {
        if object_ranks.len() != c.num_objects() || maps.len() != c.num_morphisms() {
            return Err(ExtensionError::Shape(
                "functor tables have the wrong length".into(),
            ));
        }
        let ranks: Vec<usize> = (0..c.num_morphisms())
            .map(|f| object_ranks[c.tgt(f)])
            .collect();
        let mut push = HashMap::new();
        let mut pull = HashMap::new();
        for (a, f, _) in c.composable_pairs() {
            push.insert((a, f), maps[a].clone());
        }
        for (f, b, _) in c.composable_pairs() {
            pull.insert((f, b), id_matrix(ranks[f]));
        }
        Self::new(c, coefficients, ranks, push, pull)
    }

    pub fn coefficients(&self) -> Coefficients {
        self.coefficients
    }

    pub fn rank(&self, f: MorId) -> usize {
        self.ranks[f]
    }

    pub fn ranks(&self) -> &[usize] {
        &self.ranks
    }

    /// `α_*: D_f → D_{α∘f}`.
    pub fn push(&self, alpha: MorId, f: MorId) -> &IntMatrix {
        &self.push[&(alpha, f)]
    }

    /// `β^*: D_f → D_{f∘β}`.
    pub fn pull(&self, f: MorId, beta: MorId) -> &IntMatrix {
        &self.pull[&(f, beta)]
    }

    /// `|D_f|`, when finite.
    pub fn order(&self, f: MorId) -> Option<u64> {
        self.coefficients
            .modulus()
            .map(|m| m.pow(self.ranks[f] as u32))
    }

    fn validate(&self, c: &FinCategory) -> Result<(), ExtensionError> {
        let coef = self.coefficients;
        let name = |f: MorId| c.morphism_name(f).to_string();
        let shape = |m: &IntMatrix, rows: usize, cols: usize| {
            m.len() == rows && m.iter().all(|r| r.len() == cols)
        };
        for (a, f, af) in c.composable_pairs() {
            let m = self.push.get(&(a, f)).ok_or_else(|| {
                ExtensionError::Shape(format!("missing pushforward ({}, {})", name(a), name(f)))
            })?;
            if !shape(m, self.ranks[af], self.ranks[f]) {
                return Err(ExtensionError::Shape(format!(
                    "pushforward ({}, {})",
                    name(a),
                    name(f)
                )));
            }
            let p = self.pull.get(&(a, f)).ok_or_else(|| {
                ExtensionError::Shape(format!("missing pullback ({}, {})", name(a), name(f)))
            })?;
            if !shape(p, self.ranks[af], self.ranks[a]) {
                return Err(ExtensionError::Shape(format!(
                    "pullback ({}, {})",
                    name(a),
                    name(f)
                )));
            }
        }
        if self.push.len() != c.num_composable_pairs()
            || self.pull.len() != c.num_composable_pairs()
        {
            return Err(ExtensionError::Shape(
                "entries for non-composable pairs".into(),
            ));
        }
        for f in 0..c.num_morphisms() {
            let id = id_matrix(self.ranks[f]);
            if self.push(c.identity(c.tgt(f)), f) != &id {
                return Err(ExtensionError::FunctorialityViolated(format!(
                    "identity pushforward onto {}",
                    name(f)
                )));
            }
            if self.pull(f, c.identity(c.src(f))) != &id {
                return Err(ExtensionError::FunctorialityViolated(format!(
                    "identity pullback onto {}",
                    name(f)
                )));
            }
        }
        // (α'α)_* = α'_* α_*
        for (a2, a1, a21) in c.composable_pairs() {
            for &f in c.incoming(c.src(a1)) {
                let a1f = c.compose(a1, f).expect("composable");
                let lhs = self.push(a21, f);
                let rhs = mat_mul(
                    coef,
                    self.push(a2, a1f),
                    self.push(a1, f),
                    self.ranks[a1f],
                    self.ranks[f],
                );
                if lhs != &rhs {
                    return Err(ExtensionError::FunctorialityViolated(format!(
                        "({}∘{})_* on {}",
                        name(a2),
                        name(a1),
                        name(f)
                    )));
                }
            }
        }
        // (ββ')^* = β'^* β^*
        for (b, b2, bb2) in c.composable_pairs() {
            for &f in c.outgoing(c.tgt(b)) {
                let fb = c.compose(f, b).expect("composable");
                let lhs = self.pull(f, bb2);
                let rhs = mat_mul(
                    coef,
                    self.pull(fb, b2),
                    self.pull(f, b),
                    self.ranks[fb],
                    self.ranks[f],
                );
                if lhs != &rhs {
                    return Err(ExtensionError::FunctorialityViolated(format!(
                        "({}∘{})^* on {}",
                        name(b),
                        name(b2),
                        name(f)
                    )));
                }
            }
        }
        // α_* β^* = β^* α_*
        for (f, b, fb) in c.composable_pairs() {
            for &a in c.outgoing(c.tgt(f)) {
                let af = c.compose(a, f).expect("composable");
                let afb = c.compose(a, fb).expect("composable");
                let lhs = mat_mul(
                    coef,
                    self.push(a, fb),
                    self.pull(f, b),
                    self.ranks[fb],
                    self.ranks[f],
                );
                let rhs = mat_mul(
                    coef,
                    self.pull(af, b),
                    self.push(a, f),
                    self.ranks[af],
                    self.ranks[f],
                );
                debug_assert_eq!(lhs.len(), self.ranks[afb]);
                if lhs != rhs {
                    return Err(ExtensionError::FunctorialityViolated(format!(
                        "{}_* and {}^* on {} do not commute",
                        name(a),
                        name(b),
                        name(f)
                    )));
                }
            }
        }
        Ok(())
    }

    /// Whether all pullbacks are identities and `D_f`, `α_*` depend only on `t f` and `α`.
    pub fn is_induced(&self, c: &FinCategory) -> bool {
        for (f, b, _) in c.composable_pairs() {
            if self.pull(f, b) != &id_matrix(self.ranks[f]) {
                return false;
            }
        }
        for x in 0..c.num_objects() {
            let r = self.ranks[c.identity(x)];
            if c.incoming(x).iter().any(|&f| self.ranks[f] != r) {
                return false;
            }
        }
        for a in 0..c.num_morphisms() {
            let incoming = c.incoming(c.src(a));
            let first = self.push(a, incoming[0]);
            if incoming.iter().any(|&f| self.push(a, f) != first) {
                return false;
            }
        }
        true
    }

    pub fn to_raw(&self, c: &FinCategory) -> RawNaturalSystem {
        let name = |f: MorId| c.morphism_name(f).to_string();
        let mut push = IndexMap::new();
        let mut pull = IndexMap::new();
        for (a, f, _) in c.composable_pairs() {
            push.insert(format!("{},{}", name(a), name(f)), self.push(a, f).clone());
            pull.insert(format!("{},{}", name(a), name(f)), self.pull(a, f).clone());
        }
        RawNaturalSystem {
            modulus: self.coefficients.modulus(),
            trivial: None,
            functor: None,
            ranks: Some(
                (0..c.num_morphisms())
                    .map(|f| (name(f), self.ranks[f]))
                    .collect(),
            ),
            pushforward: Some(push),
            pullback: Some(pull),
        }
    }

    pub fn from_raw(c: &FinCategory, raw: &RawNaturalSystem) -> Result<Self, ExtensionError> {
        let coef = match raw.modulus {
            Some(m) => Coefficients::modulo(m)?,
            None => Coefficients::Rationals,
        };
        if let Some(rank) = raw.trivial {
            return Self::trivial(c, coef, rank);
        }
        if let Some(func) = &raw.functor {
            let mut ranks = vec![0; c.num_objects()];
            for (o, &r) in &func.ranks {
                let x = c
                    .object_id(o)
                    .ok_or_else(|| ExtensionError::UnknownObject(o.clone()))?;
                ranks[x] = r;
            }
            let mut maps: Vec<Option<IntMatrix>> = vec![None; c.num_morphisms()];
            for (f, m) in &func.maps {
                let id = c
                    .morphism_id(f)
                    .ok_or_else(|| ExtensionError::UnknownMorphism(f.clone()))?;
                maps[id] = Some(m.clone());
            }
            let maps = maps
                .into_iter()
                .enumerate()
                .map(|(f, m)| match m {
                    Some(m) => Ok(m),
                    None if ranks[c.src(f)] == ranks[c.tgt(f)] => Ok(id_matrix(ranks[c.src(f)])),
                    None => Err(ExtensionError::Shape(format!(
                        "missing map for {}",
                        c.morphism_name(f)
                    ))),
                })
                .collect::<Result<Vec<_>, _>>()?;
            return Self::from_functor(c, coef, ranks, maps);
        }
        let raw_ranks = raw
            .ranks
            .as_ref()
            .ok_or_else(|| ExtensionError::Shape("need `trivial`, `functor` or `ranks`".into()))?;
        let mut ranks = vec![usize::MAX; c.num_morphisms()];
        for (f, &r) in raw_ranks {
            let id = c
                .morphism_id(f)
                .ok_or_else(|| ExtensionError::UnknownMorphism(f.clone()))?;
            ranks[id] = r;
        }
        if let Some(f) = ranks.iter().position(|&r| r == usize::MAX) {
            return Err(ExtensionError::Shape(format!(
                "missing rank for {}",
                c.morphism_name(f)
            )));
        }
        let parse = |table: &Option<IndexMap<String, IntMatrix>>| -> Result<HashMap<(MorId, MorId), IntMatrix>, ExtensionError> {
            let mut out = HashMap::new();
            if let Some(t) = table {
                for (key, m) in t {
                    let (a, b) = parse_pair(c, key)?;
                    out.insert((a, b), m.clone());
                }
            }
            Ok(out)
        };
        let mut push = parse(&raw.pushforward)?;
        let mut pull = parse(&raw.pullback)?;
        // Omitted entries default to identities where the shapes allow.
        for (a, f, af) in c.composable_pairs() {
            if !push.contains_key(&(a, f)) && ranks[af] == ranks[f] {
                push.insert((a, f), id_matrix(ranks[f]));
            }
            if !pull.contains_key(&(a, f)) && ranks[af] == ranks[a] {
                pull.insert((a, f), id_matrix(ranks[a]));
            }
        }
        Self::new(c, coef, ranks, push, pull)
    }
}

fn parse_pair(c: &FinCategory, key: &str) -> Result<(MorId, MorId), ExtensionError> {
    let (a, b) = key
        .split_once(',')
        .ok_or_else(|| ExtensionError::NotComposable(key.to_string()))?;
    let a = c
        .morphism_id(a.trim())
        .ok_or_else(|| ExtensionError::UnknownMorphism(a.to_string()))?;
    let b = c
        .morphism_id(b.trim())
        .ok_or_else(|| ExtensionError::UnknownMorphism(b.to_string()))?;
    if c.compose(a, b).is_none() {
        return Err(ExtensionError::NotComposable(key.to_string()));
    }
    Ok((a, b))
}

/// JSON form; exactly one of `trivial`, `functor` or `ranks` drives construction.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize, Default)]
pub struct RawNaturalSystem {
    /// `null` means rational coefficients.
    pub modulus: Option<u64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub trivial: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub functor: Option<RawModuleFunctor>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub ranks: Option<IndexMap<String, usize>>,
    /// Keyed `"α,f"`.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub pushforward: Option<IndexMap<String, IntMatrix>>,
    /// Keyed `"f,β"`.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub pullback: Option<IndexMap<String, IntMatrix>>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct RawModuleFunctor {
    pub ranks: IndexMap<String, usize>,
    #[serde(default)]
    pub maps: IndexMap<String, IntMatrix>,
}

/// Cochain groups in degrees 0..=3 and the differentials between them.
#[derive(Debug, Clone)]
pub struct BwComplex {
    coefficients: Coefficients,
    pairs: Vec<(MorId, MorId, MorId)>,
    pair_index: HashMap<(MorId, MorId), usize>,
    triples: Vec<(MorId, MorId, MorId)>,
    offsets: [Vec<usize>; 4],
    /// `d[n]: Cⁿ → Cⁿ⁺¹`, rows indexed by the codomain.
    d: [IntMatrix; 3],
}

fn prefix_sums(sizes: impl Iterator<Item = usize>) -> Vec<usize> {
    let mut out = vec![0];
    for s in sizes {
        out.push(out.last().unwrap() + s);
    }
    out
}

fn add_block(m: &mut IntMatrix, row: usize, col: usize, block: &IntMatrix, sign: i64) {
    for (i, r) in block.iter().enumerate() {
        for (j, &v) in r.iter().enumerate() {
            m[row + i][col + j] += sign * v;
        }
    }
}

fn add_identity(m: &mut IntMatrix, row: usize, col: usize, n: usize, sign: i64) {
    for i in 0..n {
        m[row + i][col + i] += sign;
    }
}

pub fn bw_differentials(c: &FinCategory, d: &NaturalSystem) -> BwComplex {
    let coef = d.coefficients();
    let pairs: Vec<_> = c.composable_pairs().collect();
    let pair_index: HashMap<_, _> = pairs
        .iter()
        .enumerate()
        .map(|(i, &(f, g, _))| ((f, g), i))
        .collect();
    let mut triples = Vec::new();
    for &(f, g, _) in &pairs {
        for &h in c.incoming(c.src(g)) {
            triples.push((f, g, h));
        }
    }
    let offsets = [
        prefix_sums((0..c.num_objects()).map(|x| d.rank(c.identity(x)))),
        prefix_sums((0..c.num_morphisms()).map(|f| d.rank(f))),
        prefix_sums(pairs.iter().map(|&(_, _, fg)| d.rank(fg))),
        prefix_sums(triples.iter().map(|&(f, g, h)| {
            let gh = c.compose(g, h).expect("composable");
            d.rank(c.compose(f, gh).expect("composable"))
        })),
    ];
    let dims: Vec<usize> = offsets.iter().map(|o| *o.last().unwrap()).collect();

    // (δ⁰t)(f) = f_* t(s f) − f^* t(t f)
    let mut d0 = vec![vec![0i64; dims[0]]; dims[1]];
    for f in 0..c.num_morphisms() {
        let (s, t) = (c.src(f), c.tgt(f));
        add_block(
            &mut d0,
            offsets[1][f],
            offsets[0][s],
            d.push(f, c.identity(s)),
            1,
        );
        add_block(
            &mut d0,
            offsets[1][f],
            offsets[0][t],
            d.pull(c.identity(t), f),
            -1,
        );
    }
    // (δ¹F)(f,g) = f_* F(g) − F(fg) + g^* F(f)
    let mut d1 = vec![vec![0i64; dims[1]]; dims[2]];
    for (i, &(f, g, fg)) in pairs.iter().enumerate() {
        let row = offsets[2][i];
        add_block(&mut d1, row, offsets[1][g], d.push(f, g), 1);
        add_identity(&mut d1, row, offsets[1][fg], d.rank(fg), -1);
        add_block(&mut d1, row, offsets[1][f], d.pull(f, g), 1);
    }
    // (δ²Δ)(f,g,h) = f_* Δ(g,h) − Δ(fg,h) + Δ(f,gh) − h^* Δ(f,g)
    let mut d2 = vec![vec![0i64; dims[2]]; dims[3]];
    for (i, &(f, g, h)) in triples.iter().enumerate() {
        let row = offsets[3][i];
        let fg = c.compose(f, g).expect("composable");
        let gh = c.compose(g, h).expect("composable");
        let r = d.rank(c.compose(fg, h).expect("composable"));
        add_block(
            &mut d2,
            row,
            offsets[2][pair_index[&(g, h)]],
            d.push(f, gh),
            1,
        );
        add_identity(&mut d2, row, offsets[2][pair_index[&(fg, h)]], r, -1);
        add_identity(&mut d2, row, offsets[2][pair_index[&(f, gh)]], r, 1);
        add_block(
            &mut d2,
            row,
            offsets[2][pair_index[&(f, g)]],
            d.pull(fg, h),
            -1,
        );
    }
    let d0 = reduce_matrix(coef, d0);
    let d1 = reduce_matrix(coef, d1);
    let d2 = reduce_matrix(coef, d2);
    let cx = BwComplex {
        coefficients: coef,
        pairs,
        pair_index,
        triples,
        offsets,
        d: [d0, d1, d2],
    };
    assert!(
        cx.composites_vanish(),
        "δ∘δ ≠ 0 for a validated natural system"
    );
    cx
}

impl BwComplex {
    pub fn coefficients(&self) -> Coefficients {
        self.coefficients
    }

    /// Rank of the cochain group `Cⁿ`, `n ≤ 3`.
    pub fn dim(&self, n: usize) -> usize {
        *self.offsets[n].last().unwrap()
    }

    pub fn differential(&self, n: usize) -> &IntMatrix {
        &self.d[n]
    }

    pub fn pairs(&self) -> &[(MorId, MorId, MorId)] {
        &self.pairs
    }

    pub fn triples(&self) -> &[(MorId, MorId, MorId)] {
        &self.triples
    }

    pub fn pair_index(&self, f: MorId, g: MorId) -> Option<usize> {
        self.pair_index.get(&(f, g)).copied()
    }

    /// Coordinates of the summand `D_{fg}` of `C²`.
    pub fn pair_range(&self, f: MorId, g: MorId) -> std::ops::Range<usize> {
        let i = self.pair_index[&(f, g)];
        self.offsets[2][i]..self.offsets[2][i + 1]
    }

    pub fn morphism_range(&self, f: MorId) -> std::ops::Range<usize> {
        self.offsets[1][f]..self.offsets[1][f + 1]
    }

    pub fn object_range(&self, x: ObjId) -> std::ops::Range<usize> {
        self.offsets[0][x]..self.offsets[0][x + 1]
    }

    /// `d[n]·x`, reduced.
    pub fn apply(&self, n: usize, x: &[i64]) -> Vec<i64> {
        mat_vec(self.coefficients, &self.d[n], x)
    }

    pub fn composites_vanish(&self) -> bool {
        let coef = self.coefficients;
        (0..2).all(|n| {
            let prod = mat_mul(
                coef,
                &self.d[n + 1],
                &self.d[n],
                self.dim(n + 1),
                self.dim(n),
            );
            prod.iter().flatten().all(|&v| v == 0)
        })
    }

    /// A 2-cochain from its values on composable pairs.
    pub fn cochain2_from_fn(&self, mut value: impl FnMut(MorId, MorId) -> Vec<i64>) -> Vec<i64> {
        let mut out = vec![0; self.dim(2)];
        for (i, &(f, g, _)) in self.pairs.iter().enumerate() {
            let v = value(f, g);
            let range = self.offsets[2][i]..self.offsets[2][i + 1];
            assert_eq!(v.len(), range.len(), "value has the wrong rank");
            for (slot, x) in out[range].iter_mut().zip(v) {
                *slot = self.coefficients.reduce(x);
            }
        }
        out
    }

    pub fn is_cocycle2(&self, delta: &[i64]) -> bool {
        self.apply(2, delta).iter().all(|&v| v == 0)
    }

    pub fn cochain2_from_raw(
        &self,
        c: &FinCategory,
        raw: &IndexMap<String, Vec<i64>>,
    ) -> Result<Vec<i64>, ExtensionError> {
        let mut out = vec![0; self.dim(2)];
        for (key, v) in raw {
            let (f, g) = parse_pair(c, key)?;
            let range = self.pair_range(f, g);
            if v.len() != range.len() {
                return Err(ExtensionError::CochainShape(v.len(), range.len()));
            }
            for (slot, &x) in out[range].iter_mut().zip(v) {
                *slot = self.coefficients.reduce(x);
            }
        }
        Ok(out)
    }

    /// Nonzero entries keyed `"f,g"`.
    pub fn cochain2_to_raw(&self, c: &FinCategory, delta: &[i64]) -> IndexMap<String, Vec<i64>> {
        let mut out = IndexMap::new();
        for (i, &(f, g, _)) in self.pairs.iter().enumerate() {
            let v = &delta[self.offsets[2][i]..self.offsets[2][i + 1]];
            if v.iter().any(|&x| x != 0) {
                out.insert(
                    format!("{},{}", c.morphism_name(f), c.morphism_name(g)),
                    v.to_vec(),
                );
            }
        }
        out
    }

    /// Some `F` with `δ¹F = target`.
    pub fn solve_coboundary(&self, target: &[i64]) -> Option<Vec<i64>> {
        match self.coefficients {
            Coefficients::Modulo(m) => {
                let a: smith::ModMatrix = to_mod_matrix(&self.d[1], m);
                let b: Vec<u64> = target.iter().map(|&v| smith::residue(v, m)).collect();
                smith::solve(&a, self.dim(1), &b, m)
                    .map(|x| x.into_iter().map(|v| v as i64).collect())
            }
            Coefficients::Rationals => {
                let ring = Ring::Rationals;
                let a = to_rational(&self.d[1]);
                let b: Vec<Scalar> = target
                    .iter()
                    .map(|&v| Scalar::from_integer(v.into()))
                    .collect();
                let x = linalg::solve(ring, &a, &b)?;
                // Integral data can still need fractional primitives; those are reported as absent.
                x.into_iter()
                    .map(|v| {
                        v.is_integer()
                            .then(|| i64::try_from(v.to_integer()).ok())
                            .flatten()
                    })
                    .collect()
            }
        }
    }
}

fn to_mod_matrix(a: &IntMatrix, m: u64) -> smith::ModMatrix {
    a.iter()
        .map(|r| r.iter().map(|&v| smith::residue(v, m)).collect())
        .collect()
}

fn to_rational(a: &IntMatrix) -> linalg::Matrix {
    a.iter()
        .map(|r| r.iter().map(|&v| Scalar::from_integer(v.into())).collect())
        .collect()
}

/// `Hⁿ` as invariant factors over `ℤ/m`, or a dimension over `ℚ`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Cohomology {
    pub degree: usize,
    pub coefficients: Coefficients,
    /// Cyclic orders `d_1 | d_2 | …` (modular coefficients).
    pub invariant_factors: Vec<u64>,
    /// Vector space dimension (rational coefficients).
    pub dimension: usize,
}

impl Cohomology {
    pub fn is_zero(&self) -> bool {
        self.invariant_factors.is_empty() && self.dimension == 0
    }

    pub fn order(&self) -> Option<u64> {
        match self.coefficients {
            Coefficients::Modulo(_) => Some(self.invariant_factors.iter().product()),
            Coefficients::Rationals => None,
        }
    }
}

impl fmt::Display for Cohomology {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        match self.coefficients {
            Coefficients::Modulo(_) => {
                let parts: Vec<String> = self
                    .invariant_factors
                    .iter()
                    .map(|d| format!("Z/{d}"))
                    .collect();
                write!(f, "{}", parts.join(" + "))
            }
            Coefficients::Rationals => write!(f, "Q^{}", self.dimension),
        }
    }
}

pub fn bw_cohomology(cx: &BwComplex, degree: usize) -> Result<Cohomology, ExtensionError> {
    if degree > 2 {
        return Err(ExtensionError::UnsupportedDegree(degree));
    }
    let dim = cx.dim(degree);
    let next = &cx.d[degree];
    let (prev, prev_cols): (IntMatrix, usize) = if degree == 0 {
        (vec![Vec::new(); dim], 0)
    } else {
        (cx.d[degree - 1].clone(), cx.dim(degree - 1))
    };
    Ok(match cx.coefficients {
        Coefficients::Modulo(m) => Cohomology {
            degree,
            coefficients: cx.coefficients,
            invariant_factors: smith::homology(
                &to_mod_matrix(next, m),
                &to_mod_matrix(&prev, m),
                dim,
                prev_cols,
                m,
            ),
            dimension: 0,
        },
        Coefficients::Rationals => {
            let r_next = linalg::rank(Ring::Rationals, &to_rational(next));
            let r_prev = if degree == 0 {
                0
            } else {
                linalg::rank(Ring::Rationals, &to_rational(&prev))
            };
            Cohomology {
                degree,
                coefficients: cx.coefficients,
                invariant_factors: Vec::new(),
                dimension: dim - r_next - r_prev,
            }
        }
    })
}

/// `Δ − δ¹F` with `F(f) = Δ(1_{t f}, f)`; vanishes on pairs containing an identity.
pub fn normalize(cx: &BwComplex, c: &FinCategory, delta: &[i64]) -> Vec<i64> {
    let mut f_values = vec![0; cx.dim(1)];
    for f in 0..c.num_morphisms() {
        let src = cx.pair_range(c.identity(c.tgt(f)), f);
        let dst = cx.morphism_range(f);
        f_values[dst].copy_from_slice(&delta[src]);
    }
    let shift = cx.apply(1, &f_values);
    delta
        .iter()
        .zip(shift)
        .map(|(&a, b)| cx.coefficients.reduce(a - b))
        .collect()
}

/// First pair `(f, g)` with an identity factor and `Δ(f, g) ≠ 0`.
pub fn normalization_failure(
    cx: &BwComplex,
    c: &FinCategory,
    delta: &[i64],
) -> Option<(MorId, MorId)> {
    cx.pairs.iter().enumerate().find_map(|(i, &(f, g, _))| {
        let nonzero = delta[cx.offsets[2][i]..cx.offsets[2][i + 1]]
            .iter()
            .any(|&v| v != 0);
        ((c.is_identity(f) || c.is_identity(g)) && nonzero).then_some((f, g))
    })
}

/// The category `E` with morphisms `(f, α)`, `α ∈ D_f`, and its projection onto the base.
#[derive(Debug, Clone)]
pub struct ExtensionCategory {
    pub base: FinCategory,
    pub system: NaturalSystem,
    pub complex: BwComplex,
    pub cocycle: Vec<i64>,
    pub total: FinCategory,
    pub projection: Functor,
    modulus: u64,
    fiber_offset: Vec<usize>,
    elements: Vec<(MorId, Vec<u64>)>,
}

fn digits(mut idx: usize, m: u64, rank: usize) -> Vec<u64> {
    let mut out = vec![0; rank];
    for slot in out.iter_mut().rev() {
        *slot = idx as u64 % m;
        idx /= m as usize;
    }
    out
}

fn undigits(v: &[u64], m: u64) -> usize {
    v.iter()
        .fold(0usize, |acc, &d| acc * m as usize + d as usize)
}

pub fn build_extension(
    c: &FinCategory,
    system: &NaturalSystem,
    cocycle: Vec<i64>,
) -> Result<ExtensionCategory, ExtensionError> {
    let m = system
        .coefficients()
        .modulus()
        .ok_or(ExtensionError::InfiniteFibers)?;
    let complex = bw_differentials(c, system);
    if cocycle.len() != complex.dim(2) {
        return Err(ExtensionError::CochainShape(cocycle.len(), complex.dim(2)));
    }
    let cocycle: Vec<i64> = cocycle
        .into_iter()
        .map(|v| smith::residue(v, m) as i64)
        .collect();
    if let Some((f, g)) = normalization_failure(&complex, c, &cocycle) {
        return Err(ExtensionError::NotNormalized(
            c.morphism_name(f).to_string(),
            c.morphism_name(g).to_string(),
        ));
    }
    if !complex.is_cocycle2(&cocycle) {
        return Err(ExtensionError::NotACocycle);
    }
    let sizes: Vec<usize> = (0..c.num_morphisms())
        .map(|f| (m as usize).saturating_pow(system.rank(f) as u32))
        .collect();
    let total_size = sizes.iter().fold(0usize, |a, &b| a.saturating_add(b));
    if total_size > EXTENSION_SIZE_LIMIT {
        return Err(ExtensionError::TooLarge(total_size));
    }
    let fiber_offset = prefix_sums(sizes.iter().copied());
    let mut elements = Vec::with_capacity(total_size);
    let mut names = Vec::with_capacity(total_size);
    for f in 0..c.num_morphisms() {
        for idx in 0..sizes[f] {
            let alpha = digits(idx, m, system.rank(f));
            let coords: Vec<String> = alpha.iter().map(u64::to_string).collect();
            names.push(if coords.is_empty() {
                format!("({})", c.morphism_name(f))
            } else {
                format!("({},{})", c.morphism_name(f), coords.join(","))
            });
            elements.push((f, alpha));
        }
    }
    let mut b = CategoryBuilder::new();
    for x in c.objects() {
        b.object(x.clone());
    }
    for (e, &(f, _)) in elements.iter().enumerate() {
        if c.is_identity(f) && e == fiber_offset[f] {
            b.identity(c.object_name(c.src(f)), names[e].clone());
        } else {
            b.morphism(
                names[e].clone(),
                c.object_name(c.src(f)),
                c.object_name(c.tgt(f)),
            );
        }
    }
    let coef = system.coefficients();
    for (g, f, gf) in c.composable_pairs() {
        let delta = &cocycle[complex.pair_range(g, f)];
        let (gs, fs) = (system.push(g, f), system.pull(g, f));
        for ia in 0..sizes[f] {
            let alpha: Vec<i64> = elements[fiber_offset[f] + ia]
                .1
                .iter()
                .map(|&v| v as i64)
                .collect();
            let ga = mat_vec(coef, gs, &alpha);
            for ib in 0..sizes[g] {
                let beta: Vec<i64> = elements[fiber_offset[g] + ib]
                    .1
                    .iter()
                    .map(|&v| v as i64)
                    .collect();
                let fb = mat_vec(coef, fs, &beta);
                // (g, β)∘(f, α) = (gf, −Δ(g, f) + g_*α + f^*β)
                let gamma: Vec<u64> = (0..system.rank(gf))
                    .map(|k| smith::residue(-delta[k] + ga[k] + fb[k], m))
                    .collect();
                let out = fiber_offset[gf] + undigits(&gamma, m);
                b.compose(
                    names[fiber_offset[g] + ib].clone(),
                    names[fiber_offset[f] + ia].clone(),
                    names[out].clone(),
                );
            }
        }
    }
    let total = b.build()?;
    let projection = Functor {
        objects: (0..c.num_objects()).collect(),
        morphisms: elements.iter().map(|&(f, _)| f).collect(),
        contravariant: false,
    };
    projection.check(&total, c)?;
    Ok(ExtensionCategory {
        base: c.clone(),
        system: system.clone(),
        complex,
        cocycle,
        total,
        projection,
        modulus: m,
        fiber_offset,
        elements,
    })
}

impl ExtensionCategory {
    pub fn modulus(&self) -> u64 {
        self.modulus
    }

    /// `(f, α)` for a morphism of the total category.
    pub fn element(&self, e: MorId) -> (MorId, &[u64]) {
        let (f, a) = &self.elements[e];
        (*f, a)
    }

    pub fn morphism(&self, f: MorId, alpha: &[u64]) -> MorId {
        self.fiber_offset[f] + undigits(alpha, self.modulus)
    }

    pub fn fiber(&self, f: MorId) -> std::ops::Range<MorId> {
        self.fiber_offset[f]..self.fiber_offset[f + 1]
    }

    /// `(f, β) + α = (f, α + β)`.
    pub fn act(&self, alpha: &[u64], e: MorId) -> MorId {
        let (f, beta) = self.element(e);
        let sum: Vec<u64> = alpha
            .iter()
            .zip(beta)
            .map(|(a, b)| (a + b) % self.modulus)
            .collect();
        self.morphism(f, &sum)
    }

    /// Projection is full and the identity on objects, fibers are torsors, and
    /// composition distributes over the action.
    pub fn check_linear_extension(&self) -> Result<(), ExtensionError> {
        let c = &self.base;
        let m = self.modulus;
        let coef = self.system.coefficients();
        for f in 0..c.num_morphisms() {
            let fiber = self.fiber(f);
            if fiber.is_empty() {
                return Err(ExtensionError::LemmaViolation(format!(
                    "empty fiber over {}",
                    c.morphism_name(f)
                )));
            }
            let size = fiber.len();
            let rank = self.system.rank(f);
            let base = fiber.start;
            let mut hit = vec![false; size];
            for ia in 0..size {
                let e = self.act(&digits(ia, m, rank), base);
                if !fiber.contains(&e) || std::mem::replace(&mut hit[e - base], true) {
                    return Err(ExtensionError::LemmaViolation(format!(
                        "action on fiber over {}",
                        c.morphism_name(f)
                    )));
                }
            }
        }
        for (g, f, gf) in c.composable_pairs() {
            let (gs, fs) = (self.system.push(g, f), self.system.pull(g, f));
            for ef in self.fiber(f) {
                for eg in self.fiber(g) {
                    let base = self
                        .total
                        .compose(eg, ef)
                        .expect("composable over the base");
                    if self.projection.morphisms[base] != gf {
                        return Err(ExtensionError::LemmaViolation("projection".into()));
                    }
                    for ia in 0..self.fiber(f).len() {
                        let a = digits(ia, m, self.system.rank(f));
                        let a_i: Vec<i64> = a.iter().map(|&v| v as i64).collect();
                        let lhs = self
                            .total
                            .compose(eg, self.act(&a, ef))
                            .expect("composable");
                        let shift: Vec<u64> =
                            mat_vec(coef, gs, &a_i).iter().map(|&v| v as u64).collect();
                        if lhs != self.act(&shift, base) {
                            return Err(ExtensionError::LemmaViolation(
                                "left distributivity".into(),
                            ));
                        }
                    }
                    for ib in 0..self.fiber(g).len() {
                        let b = digits(ib, m, self.system.rank(g));
                        let b_i: Vec<i64> = b.iter().map(|&v| v as i64).collect();
                        let lhs = self
                            .total
                            .compose(self.act(&b, eg), ef)
                            .expect("composable");
                        let shift: Vec<u64> =
                            mat_vec(coef, fs, &b_i).iter().map(|&v| v as u64).collect();
                        if lhs != self.act(&shift, base) {
                            return Err(ExtensionError::LemmaViolation(
                                "right distributivity".into(),
                            ));
                        }
                    }
                }
            }
        }
        Ok(())
    }
}

fn invertible_mod(a: &IntMatrix, m: u64) -> bool {
    let n = a.len();
    if a.iter().any(|r| r.len() != n) {
        return false;
    }
    let d = smith::diagonalize(&to_mod_matrix(a, m), n, m, smith::Track::default());
    d.diag.len() == n
        && d.diag
            .iter()
            .all(|&x| num_integer::Integer::gcd(&x, &m) == 1)
}

/// The partition `{q⁻¹(σ)}` on the total category, checked to be a quasi-schemoid
/// with `p̃^μ_{στ} = |D_f|·p^μ_{στ}` for `f ∈ σ`.
pub fn lift_schemoid(
    qs: &QuasiSchemoid,
    ext: &ExtensionCategory,
) -> Result<QuasiSchemoid, ExtensionError> {
    let c = qs.category();
    if c != &ext.base {
        return Err(ExtensionError::BaseMismatch);
    }
    let sys = &ext.system;
    let m = ext.modulus;
    for (a, f, _) in c.composable_pairs() {
        if !invertible_mod(sys.push(a, f), m) || !invertible_mod(sys.pull(a, f), m) {
            return Err(ExtensionError::HypothesisFailed(format!(
                "structure maps at ({}, {}) are not invertible",
                c.morphism_name(a),
                c.morphism_name(f)
            )));
        }
    }
    let part = qs.partition();
    for (b, block) in part.blocks().iter().enumerate() {
        let r = sys.rank(c.identity(c.src(block[0])));
        if block.iter().any(|&f| sys.rank(c.identity(c.src(f))) != r) {
            return Err(ExtensionError::HypothesisFailed(format!(
                "coefficient ranks vary over block {}",
                part.name(b)
            )));
        }
    }
    let blocks: Vec<Vec<MorId>> = part
        .blocks()
        .iter()
        .map(|block| block.iter().flat_map(|&f| ext.fiber(f)).collect())
        .collect();
    let lifted_part = MorphismPartition::new(&ext.total, part.names().to_vec(), blocks)?;
    let lifted = QuasiSchemoid::new(ext.total.clone(), lifted_part)
        .map_err(|e| ExtensionError::AxiomFailedAfterLift(e.to_string()))?;
    for s in 0..qs.num_blocks() {
        let order = sys.order(part.block(s)[0]).expect("finite");
        for t in 0..qs.num_blocks() {
            for u in 0..qs.num_blocks() {
                if lifted.p(s, t, u) != order * qs.p(s, t, u) {
                    return Err(ExtensionError::LemmaViolation(format!(
                        "constant ({}, {}, {}) does not scale by {order}",
                        part.name(s),
                        part.name(t),
                        part.name(u)
                    )));
                }
            }
        }
    }
    Ok(lifted)
}

/// `T̃(e) = e⁻¹` on a groupoid extension, with inverses from the explicit formula.
pub fn lift_involution(
    a: &AssociationSchemoid,
    ext: &ExtensionCategory,
    lifted: &QuasiSchemoid,
) -> Result<AssociationSchemoid, ExtensionError> {
    let c = a.category();
    if c != &ext.base {
        return Err(ExtensionError::BaseMismatch);
    }
    let g = as_groupoid(c).map_err(|_| ExtensionError::BaseNotConnectedGroupoid)?;
    if c.components().len() != 1
        || (0..c.num_morphisms()).any(|f| a.t().morphisms[f] != g.inverse(f))
    {
        return Err(ExtensionError::BaseNotConnectedGroupoid);
    }
    let sys = &ext.system;
    if !sys.is_induced(c) {
        return Err(ExtensionError::SystemNotInduced);
    }
    let coef = sys.coefficients();
    let cx = &ext.complex;
    let delta = |f: MorId, h: MorId| -> Vec<i64> { ext.cocycle[cx.pair_range(f, h)].to_vec() };
    for f in 0..c.num_morphisms() {
        let fi = g.inverse(f);
        let lhs = mat_vec(coef, sys.push(f, c.identity(c.src(f))), &delta(fi, f));
        let rhs = mat_vec(coef, sys.pull(c.identity(c.tgt(f)), f), &delta(f, fi));
        if lhs != rhs {
            return Err(ExtensionError::LemmaViolation(
                c.morphism_name(f).to_string(),
            ));
        }
    }
    let e_cat = &ext.total;
    let mut inverse = vec![0; e_cat.num_morphisms()];
    for (e, slot) in inverse.iter_mut().enumerate() {
        let (f, alpha) = ext.element(e);
        let fi = g.inverse(f);
        let d = delta(f, fi);
        let v: Vec<i64> = alpha.iter().zip(&d).map(|(&x, &y)| y - x as i64).collect();
        let beta: Vec<u64> = mat_vec(coef, sys.push(fi, f), &v)
            .iter()
            .map(|&x| x as u64)
            .collect();
        let inv = ext.morphism(fi, &beta);
        let left = e_cat.compose(inv, e);
        let right = e_cat.compose(e, inv);
        if left != Some(e_cat.identity(e_cat.src(e))) || right != Some(e_cat.identity(e_cat.tgt(e)))
        {
            return Err(ExtensionError::LemmaViolation(format!(
                "inverse of {}",
                e_cat.morphism_name(e)
            )));
        }
        *slot = inv;
    }
    let t = Functor {
        objects: (0..e_cat.num_objects()).collect(),
        morphisms: inverse,
        contravariant: true,
    };
    for e in 0..e_cat.num_morphisms() {
        if ext.projection.morphisms[t.morphisms[e]] != a.t().morphisms[ext.projection.morphisms[e]]
        {
            return Err(ExtensionError::LemmaViolation(
                "projection commutes with the involution".into(),
            ));
        }
    }
    check_association(lifted, &t)?;
    Ok(AssociationSchemoid::new(lifted.clone(), &t)?)
}

/// A functor `s: C → E` with `q∘s = 1`, with the cochain `F` it came from.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Section {
    pub functor: Functor,
    pub primitive: Vec<i64>,
}

/// Splits iff `[Δ] = 0`; the section is `s(f) = (f, F(f))` for `Δ = δ¹F`.
pub fn is_split(ext: &ExtensionCategory) -> Option<Section> {
    let c = &ext.base;
    let f_values = ext.complex.solve_coboundary(&ext.cocycle)?;
    let morphisms = (0..c.num_morphisms())
        .map(|f| {
            let alpha: Vec<u64> = f_values[ext.complex.morphism_range(f)]
                .iter()
                .map(|&v| smith::residue(v, ext.modulus))
                .collect();
            ext.morphism(f, &alpha)
        })
        .collect();
    let functor = Functor {
        objects: (0..c.num_objects()).collect(),
        morphisms,
        contravariant: false,
    };
    functor
        .check(c, &ext.total)
        .expect("a primitive of the cocycle yields a section");
    Some(Section {
        functor,
        primitive: f_values,
    })
}

/// An equivalence `ε(f, α) = (f, α − F(f))` from `e1` to `e2` when `Δ₁ − Δ₂ = δ¹F`.
pub fn extensions_equivalent(
    e1: &ExtensionCategory,
    e2: &ExtensionCategory,
) -> Result<Option<Functor>, ExtensionError> {
    if e1.base != e2.base || e1.system != e2.system {
        return Err(ExtensionError::BaseMismatch);
    }
    let diff: Vec<i64> = e1
        .cocycle
        .iter()
        .zip(&e2.cocycle)
        .map(|(a, b)| a - b)
        .collect();
    let Some(f_values) = e1.complex.solve_coboundary(&diff) else {
        return Ok(None);
    };
    let m = e1.modulus;
    let morphisms = (0..e1.total.num_morphisms())
        .map(|e| {
            let (f, alpha) = e1.element(e);
            let shift = &f_values[e1.complex.morphism_range(f)];
            let moved: Vec<u64> = alpha
                .iter()
                .zip(shift)
                .map(|(&a, &s)| smith::residue(a as i64 - s, m))
                .collect();
            e2.morphism(f, &moved)
        })
        .collect();
    let eps = Functor {
        objects: (0..e1.total.num_objects()).collect(),
        morphisms,
        contravariant: false,
    };
    eps.check(&e1.total, &e2.total)?;
    Ok(Some(eps))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fincat::{group_category, terminal};
    use crate::group::FiniteGroup;

    fn z2() -> Coefficients {
        Coefficients::Modulo(2)
    }

    #[test]
    fn terminal_complex() {
        let c = terminal();
        let d = NaturalSystem::trivial(&c, z2(), 1).unwrap();
        let cx = bw_differentials(&c, &d);
        assert_eq!((cx.dim(0), cx.dim(1), cx.dim(2), cx.dim(3)), (1, 1, 1, 1));
        // δ¹F(1,1) = F(1) − F(1) + F(1) = F(1).
        assert_eq!(cx.differential(1), &vec![vec![1]]);
        for n in 1..=2 {
            assert!(bw_cohomology(&cx, n).unwrap().is_zero());
        }
    }

    #[test]
    fn group_cohomology_small_cases() {
        let c2 = group_category(&FiniteGroup::cyclic(2));
        let d = NaturalSystem::trivial(&c2, z2(), 1).unwrap();
        let cx = bw_differentials(&c2, &d);
        assert_eq!(bw_cohomology(&cx, 2).unwrap().invariant_factors, vec![2]);
        assert_eq!(bw_cohomology(&cx, 1).unwrap().invariant_factors, vec![2]);
        let c3 = group_category(&FiniteGroup::cyclic(3));
        let d = NaturalSystem::trivial(&c3, z2(), 1).unwrap();
        let cx = bw_differentials(&c3, &d);
        assert!(bw_cohomology(&cx, 2).unwrap().is_zero());
    }

    #[test]
    fn broken_square_is_rejected() {
        let c2 = group_category(&FiniteGroup::cyclic(2));
        let d = NaturalSystem::trivial(&c2, Coefficients::Modulo(3), 1).unwrap();
        let mut raw = d.to_raw(&c2);
        let g = (0..2).find(|&f| !c2.is_identity(f)).unwrap();
        let gname = c2.morphism_name(g).to_string();
        raw.pushforward
            .as_mut()
            .unwrap()
            .insert(format!("{gname},{gname}"), vec![vec![2]]);
        assert!(matches!(
            NaturalSystem::from_raw(&c2, &raw),
            Err(ExtensionError::FunctorialityViolated(_))
        ));
    }

    #[test]
    fn zero_cocycle_splits() {
        let c2 = group_category(&FiniteGroup::cyclic(2));
        let d = NaturalSystem::trivial(&c2, z2(), 1).unwrap();
        let cx = bw_differentials(&c2, &d);
        let ext = build_extension(&c2, &d, vec![0; cx.dim(2)]).unwrap();
        assert_eq!(ext.total.num_morphisms(), 4);
        ext.check_linear_extension().unwrap();
        let s = is_split(&ext).unwrap();
        assert!(s.primitive.iter().all(|&v| v == 0));
    }

    #[test]
    fn nontrivial_group_cocycle() {
        let g = FiniteGroup::cyclic(2);
        let c2 = group_category(&g);
        let d = NaturalSystem::trivial(&c2, z2(), 1).unwrap();
        let cx = bw_differentials(&c2, &d);
        let e = g.identity();
        let delta = cx.cochain2_from_fn(|f, h| vec![i64::from(f != e && h != e)]);
        assert!(cx.is_cocycle2(&delta));
        let ext = build_extension(&c2, &d, delta).unwrap();
        ext.check_linear_extension().unwrap();
        assert!(is_split(&ext).is_none());
        // The total category is the cyclic group of order 4.
        assert!(as_groupoid(&ext.total).is_ok());
        let gen = ext.morphism(1 - e, &[0]);
        let sq = ext.total.compose(gen, gen).unwrap();
        assert!(!ext.total.is_identity(sq));
        let zero = build_extension(&c2, &d, vec![0; cx.dim(2)]).unwrap();
        assert_eq!(extensions_equivalent(&ext, &zero).unwrap(), None);
        assert!(extensions_equivalent(&ext, &ext).unwrap().is_some());
    }
}
