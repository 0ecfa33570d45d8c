//! Coherent configurations and association schemes on finite sets, their
//! generators, and the embedding `j` into association schemoids.

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::fincat::{CategoryBuilder, Functor};
use crate::group::FiniteGroup;
use crate::schemoid::{AssociationSchemoid, MorphismPartition, QuasiSchemoid, SchemoidMorphism};

/// Default bound on the number of points accepted by generators.
pub const DEFAULT_SIZE_LIMIT: usize = 64;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SchemeError {
    #[error("relation matrix must be square with class indices below the class count")]
    Shape,
    #[error("class `{0}` is empty")]
    EmptyClass(String),
    #[error("class `{0}` meets the diagonal without being contained in it")]
    DiagonalNotUnion(String),
    #[error("transpose of class `{0}` is not a class")]
    NotTransposeClosed(String),
    #[error(
        "p^{g}_{{{e},{f}}} is not constant: {first:?} gives {first_count}, {second:?} gives {second_count}"
    )]
    NonConstantIntersection {
        e: String,
        f: String,
        g: String,
        first: (usize, usize),
        first_count: u64,
        second: (usize, usize),
        second_count: u64,
    },
    #[error("{0} points exceed the size limit {1}")]
    SizeLimit(usize, usize),
    #[error("invalid group table: {0}")]
    InvalidGroupTable(String),
    #[error("not a permutation of the points: {0:?}")]
    NotAPermutation(Vec<usize>),
    #[error("the given permutations are not closed under composition")]
    NotAGroup,
    #[error("map does not send class `{0}` into a single class")]
    NotSchemeMorphism(String),
    #[error("the diagonal is not a single class")]
    NotAnAssociationScheme,
}

/// A finite set with a partition of its square into classes satisfying the
/// coherent configuration axioms.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CoherentConfiguration {
    points: Vec<String>,
    classes: Vec<String>,
    relation: Vec<Vec<usize>>,
    transpose: Vec<usize>,
    diagonal: Vec<bool>,
    p: Vec<u64>,
}

impl CoherentConfiguration {
    pub fn new(
        points: Vec<String>,
        classes: Vec<String>,
        relation: Vec<Vec<usize>>,
    ) -> Result<Self, SchemeError> {
        let n = relation.len();
        let r = classes.len();
        if points.len() != n
            || relation
                .iter()
                .any(|row| row.len() != n || row.iter().any(|&c| c >= r))
        {
            return Err(SchemeError::Shape);
        }
        let mut size = vec![0usize; r];
        let mut rep = vec![(usize::MAX, usize::MAX); r];
        let mut diag_hits = vec![0usize; r];
        for x in 0..n {
            for y in 0..n {
                let c = relation[x][y];
                if size[c] == 0 {
                    rep[c] = (x, y);
                }
                size[c] += 1;
                if x == y {
                    diag_hits[c] += 1;
                }
            }
        }
        if let Some(c) = size.iter().position(|&s| s == 0) {
            return Err(SchemeError::EmptyClass(classes[c].clone()));
        }
        if let Some(c) = (0..r).find(|&c| diag_hits[c] != 0 && diag_hits[c] != size[c]) {
            return Err(SchemeError::DiagonalNotUnion(classes[c].clone()));
        }
        let mut transpose = vec![0; r];
        for c in 0..r {
            let (x, y) = rep[c];
            let t = relation[y][x];
            let closed = size[t] == size[c]
                && (0..n).all(|a| (0..n).all(|b| (relation[a][b] == c) == (relation[b][a] == t)));
            if !closed {
                return Err(SchemeError::NotTransposeClosed(classes[c].clone()));
            }
            transpose[c] = t;
        }
        let count = |x: usize, z: usize| {
            let mut v = vec![0u64; r * r];
            for y in 0..n {
                v[relation[x][y] * r + relation[y][z]] += 1;
            }
            v
        };
        let mut p = vec![0u64; r * r * r];
        let reference: Vec<Vec<u64>> = rep.iter().map(|&(x, z)| count(x, z)).collect();
        for (g, refc) in reference.iter().enumerate() {
            for ef in 0..r * r {
                p[ef * r + g] = refc[ef];
            }
        }
        for x in 0..n {
            for z in 0..n {
                let g = relation[x][z];
                let here = count(x, z);
                if let Some(ef) = (0..r * r).find(|&ef| here[ef] != reference[g][ef]) {
                    return Err(SchemeError::NonConstantIntersection {
                        e: classes[ef / r].clone(),
                        f: classes[ef % r].clone(),
                        g: classes[g].clone(),
                        first: rep[g],
                        first_count: reference[g][ef],
                        second: (x, z),
                        second_count: here[ef],
                    });
                }
            }
        }
        let diagonal = diag_hits.iter().map(|&d| d > 0).collect();
        Ok(CoherentConfiguration {
            points,
            classes,
            relation,
            transpose,
            diagonal,
            p,
        })
    }

    /// Points named `0..n` and classes `R0..`.
    pub fn from_relations(relation: Vec<Vec<usize>>) -> Result<Self, SchemeError> {
        let n = relation.len();
        let r = relation.iter().flatten().max().map_or(0, |&m| m + 1);
        Self::new(
            (0..n).map(|i| i.to_string()).collect(),
            (0..r).map(|i| format!("R{i}")).collect(),
            relation,
        )
    }

    pub fn size(&self) -> usize {
        self.points.len()
    }

    pub fn rank(&self) -> usize {
        self.classes.len()
    }

    pub fn points(&self) -> &[String] {
        &self.points
    }

    pub fn classes(&self) -> &[String] {
        &self.classes
    }

    pub fn class_id(&self, name: &str) -> Option<usize> {
        self.classes.iter().position(|c| c == name)
    }

    pub fn class_of(&self, x: usize, y: usize) -> usize {
        self.relation[x][y]
    }

    pub fn relation(&self) -> &[Vec<usize>] {
        &self.relation
    }

    /// `g*` for a class `g`.
    pub fn transpose(&self, g: usize) -> usize {
        self.transpose[g]
    }

    pub fn is_diagonal(&self, g: usize) -> bool {
        self.diagonal[g]
    }

    /// `p^g_{ef} = #{y | (x,y) ∈ e, (y,z) ∈ f}` for any `(x,z) ∈ g`.
    pub fn p(&self, e: usize, f: usize, g: usize) -> u64 {
        let r = self.rank();
        self.p[(e * r + f) * r + g]
    }

    pub fn class_size(&self, g: usize) -> usize {
        self.relation.iter().flatten().filter(|&&c| c == g).count()
    }

    /// `R_g[x][y] = 1` iff `(x,y) ∈ g`.
    pub fn adjacency(&self, g: usize) -> Vec<Vec<u64>> {
        self.relation
            .iter()
            .map(|row| row.iter().map(|&c| u64::from(c == g)).collect())
            .collect()
    }

    /// The diagonal is a single class.
    pub fn is_association_scheme(&self) -> bool {
        self.diagonal.iter().filter(|&&d| d).count() == 1
    }

    pub fn to_raw(&self) -> RawScheme {
        RawScheme {
            size: self.size(),
            relations: self.relation.clone(),
            classes: Some(self.classes.clone()),
            points: Some(self.points.clone()),
        }
    }

    pub fn from_raw(raw: &RawScheme) -> Result<Self, SchemeError> {
        if raw.relations.len() != raw.size {
            return Err(SchemeError::Shape);
        }
        let r = raw.relations.iter().flatten().max().map_or(0, |&m| m + 1);
        let classes = raw
            .classes
            .clone()
            .unwrap_or_else(|| (0..r).map(|i| format!("R{i}")).collect());
        let points = raw
            .points
            .clone()
            .unwrap_or_else(|| (0..raw.size).map(|i| i.to_string()).collect());
        Self::new(points, classes, raw.relations.clone())
    }
}

/// A coherent configuration whose diagonal is one class.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AssociationScheme(CoherentConfiguration);

impl std::ops::Deref for AssociationScheme {
    type Target = CoherentConfiguration;
    fn deref(&self) -> &CoherentConfiguration {
        &self.0
    }
}

impl AssociationScheme {
    pub fn new(config: CoherentConfiguration) -> Result<Self, SchemeError> {
        if config.is_association_scheme() {
            Ok(AssociationScheme(config))
        } else {
            Err(SchemeError::NotAnAssociationScheme)
        }
    }

    pub fn configuration(&self) -> &CoherentConfiguration {
        &self.0
    }

    pub fn into_configuration(self) -> CoherentConfiguration {
        self.0
    }

    /// The class `1_X`.
    pub fn diagonal_class(&self) -> usize {
        self.relation[0][0]
    }

    /// The scheme on `n` points with classes `R0` (diagonal) and `R1`.
    pub fn trivial(n: usize) -> Self {
        let rel = (0..n)
            .map(|x| (0..n).map(|y| usize::from(x != y)).collect())
            .collect();
        let c = CoherentConfiguration::from_relations(rel).expect("trivial scheme");
        AssociationScheme::new(c).expect("diagonal is one class")
    }
}

/// Outcome of `validate_scheme`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ValidatedScheme {
    Scheme(AssociationScheme),
    Configuration(CoherentConfiguration),
}

impl ValidatedScheme {
    pub fn configuration(&self) -> &CoherentConfiguration {
        match self {
            ValidatedScheme::Scheme(s) => s.configuration(),
            ValidatedScheme::Configuration(c) => c,
        }
    }
}

pub fn validate_scheme(raw: &RawScheme) -> Result<ValidatedScheme, SchemeError> {
    let c = CoherentConfiguration::from_raw(raw)?;
    Ok(if c.is_association_scheme() {
        ValidatedScheme::Scheme(AssociationScheme(c))
    } else {
        ValidatedScheme::Configuration(c)
    })
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct RawScheme {
    pub size: usize,
    pub relations: Vec<Vec<usize>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub classes: Option<Vec<String>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub points: Option<Vec<String>>,
}

/// Hamming scheme `H(n, q)` on words of length `n` over `0..q`.
pub fn hamming(n: usize, q: usize) -> Result<AssociationScheme, SchemeError> {
    hamming_with_limit(n, q, DEFAULT_SIZE_LIMIT)
}

pub fn hamming_with_limit(
    n: usize,
    q: usize,
    limit: usize,
) -> Result<AssociationScheme, SchemeError> {
    if n == 0 || q < 2 {
        return Err(SchemeError::Shape);
    }
    let size = q
        .checked_pow(n as u32)
        .filter(|&s| s <= limit)
        .ok_or(SchemeError::SizeLimit(q.saturating_pow(n as u32), limit))?;
    let digits = |mut v: usize| {
        let mut d = vec![0; n];
        for slot in d.iter_mut().rev() {
            *slot = v % q;
            v /= q;
        }
        d
    };
    let words: Vec<Vec<usize>> = (0..size).map(digits).collect();
    let sep = if q <= 10 { "" } else { "," };
    let points = words
        .iter()
        .map(|w| {
            w.iter()
                .map(|d| d.to_string())
                .collect::<Vec<_>>()
                .join(sep)
        })
        .collect();
    let relation = words
        .iter()
        .map(|a| {
            words
                .iter()
                .map(|b| a.iter().zip(b).filter(|(x, y)| x != y).count())
                .collect()
        })
        .collect();
    let classes = (0..=n).map(|k| format!("R{k}")).collect();
    let c = CoherentConfiguration::new(points, classes, relation)?;
    AssociationScheme::new(c)
}

/// Group scheme with classes `G_f = {(k, l) | k⁻¹l = f}`.
pub fn group_scheme(g: &FiniteGroup) -> AssociationScheme {
    let n = g.order();
    let relation = (0..n)
        .map(|k| (0..n).map(|l| g.mul(g.inv(k), l)).collect())
        .collect();
    let classes = g.names().iter().map(|f| format!("G_{f}")).collect();
    let c = CoherentConfiguration::new(g.names().to_vec(), classes, relation)
        .expect("group schemes are schemes");
    AssociationScheme::new(c).expect("G_e is the diagonal")
}

pub fn group_scheme_from_table(table: Vec<Vec<usize>>) -> Result<AssociationScheme, SchemeError> {
    let g = FiniteGroup::from_cayley(table)
        .map_err(|e| SchemeError::InvalidGroupTable(e.to_string()))?;
    Ok(group_scheme(&g))
}

fn check_permutation(n: usize, p: &[usize]) -> Result<(), SchemeError> {
    let mut seen = vec![false; n];
    if p.len() != n
        || p.iter()
            .any(|&i| i >= n || std::mem::replace(&mut seen[i], true))
    {
        return Err(SchemeError::NotAPermutation(p.to_vec()));
    }
    Ok(())
}

/// Orbits of a permutation group on `X×X`; the flag reports transitivity on `X`,
/// which is exactly when the result is an association scheme.
pub fn orbit_configuration(
    n: usize,
    group: &[Vec<usize>],
) -> Result<(CoherentConfiguration, bool), SchemeError> {
    for p in group {
        check_permutation(n, p)?;
    }
    let mut set: Vec<Vec<usize>> = group.to_vec();
    set.sort();
    set.dedup();
    let contains = |q: &Vec<usize>| set.binary_search(q).is_ok();
    if !contains(&(0..n).collect()) {
        return Err(SchemeError::NotAGroup);
    }
    for a in &set {
        for b in &set {
            let ab: Vec<usize> = b.iter().map(|&i| a[i]).collect();
            if !contains(&ab) {
                return Err(SchemeError::NotAGroup);
            }
        }
    }
    orbit_configuration_generated(n, &set)
}

/// As `orbit_configuration`, taking generators of the group.
pub fn orbit_configuration_generated(
    n: usize,
    generators: &[Vec<usize>],
) -> Result<(CoherentConfiguration, bool), SchemeError> {
    for p in generators {
        check_permutation(n, p)?;
    }
    let mut class = vec![vec![usize::MAX; n]; n];
    let mut r = 0;
    for x in 0..n {
        for y in 0..n {
            if class[x][y] != usize::MAX {
                continue;
            }
            class[x][y] = r;
            let mut stack = vec![(x, y)];
            while let Some((a, b)) = stack.pop() {
                for p in generators {
                    let (c, d) = (p[a], p[b]);
                    if class[c][d] == usize::MAX {
                        class[c][d] = r;
                        stack.push((c, d));
                    }
                }
            }
            r += 1;
        }
    }
    let c = CoherentConfiguration::new(
        (0..n).map(|i| i.to_string()).collect(),
        (0..r).map(|i| format!("O{i}")).collect(),
        class,
    )?;
    let transitive = c.is_association_scheme();
    Ok((c, transitive))
}

/// A map of points carrying every class into a single class.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SchemeMorphism {
    pub map: Vec<usize>,
    pub class_map: Vec<usize>,
}

impl SchemeMorphism {
    pub fn new(
        map: Vec<usize>,
        source: &CoherentConfiguration,
        target: &CoherentConfiguration,
    ) -> Result<Self, SchemeError> {
        if map.len() != source.size() || map.iter().any(|&x| x >= target.size()) {
            return Err(SchemeError::Shape);
        }
        let mut class_map = vec![usize::MAX; source.rank()];
        for x in 0..source.size() {
            for y in 0..source.size() {
                let (c, d) = (source.class_of(x, y), target.class_of(map[x], map[y]));
                if class_map[c] == usize::MAX {
                    class_map[c] = d;
                } else if class_map[c] != d {
                    return Err(SchemeError::NotSchemeMorphism(source.classes()[c].clone()));
                }
            }
        }
        Ok(SchemeMorphism { map, class_map })
    }

    pub fn identity(s: &CoherentConfiguration) -> Self {
        SchemeMorphism {
            map: (0..s.size()).collect(),
            class_map: (0..s.rank()).collect(),
        }
    }

    /// `other ∘ self`.
    pub fn then(&self, other: &SchemeMorphism) -> SchemeMorphism {
        SchemeMorphism {
            map: self.map.iter().map(|&x| other.map[x]).collect(),
            class_map: self.class_map.iter().map(|&c| other.class_map[c]).collect(),
        }
    }
}

/// Morphism index of `(x, y): y → x` in `j(X, S)`.
pub fn j_index(n: usize, x: usize, y: usize) -> usize {
    x * n + y
}

/// The complete-graph schemoid: objects are points, `Hom(y, x) = {(x, y)}`,
/// blocks are the classes and `T(x, y) = (y, x)`.
pub fn j_embed(s: &CoherentConfiguration) -> AssociationSchemoid {
    let n = s.size();
    let pts = s.points();
    let name = |x: usize, y: usize| format!("({},{})", pts[x], pts[y]);
    let mut b = CategoryBuilder::new();
    for p in pts {
        b.object(p.clone());
    }
    for x in 0..n {
        for y in 0..n {
            if x == y {
                b.identity(pts[x].clone(), name(x, x));
            } else {
                b.morphism(name(x, y), pts[y].clone(), pts[x].clone());
            }
        }
    }
    for z in 0..n {
        for x in 0..n {
            for y in 0..n {
                b.compose(name(z, x), name(x, y), name(z, y));
            }
        }
    }
    let category = b.build().expect("complete graphs are categories");
    let mut blocks = vec![Vec::new(); s.rank()];
    for x in 0..n {
        for y in 0..n {
            blocks[s.class_of(x, y)].push(j_index(n, x, y));
        }
    }
    let partition = MorphismPartition::new(&category, s.classes().to_vec(), blocks)
        .expect("classes partition the pairs");
    let quasi = QuasiSchemoid::new(category, partition).expect("configurations satisfy the axiom");
    let t = Functor {
        objects: (0..n).collect(),
        morphisms: (0..n * n).map(|f| j_index(n, f % n, f / n)).collect(),
        contravariant: true,
    };
    AssociationSchemoid::new(quasi, &t).expect("transposition is an involution")
}

/// `j` on morphisms: `(x, y) ↦ (f x, f y)`.
pub fn j_morphism(
    f: &SchemeMorphism,
    source: &AssociationSchemoid,
    target: &AssociationSchemoid,
) -> SchemoidMorphism {
    let (n, m) = (f.map.len(), target.category().num_objects());
    let functor = Functor {
        objects: f.map.clone(),
        morphisms: (0..n * n)
            .map(|i| j_index(m, f.map[i / n], f.map[i % n]))
            .collect(),
        contravariant: false,
    };
    SchemoidMorphism::new(functor, source, target)
        .expect("scheme morphisms induce schemoid morphisms")
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn hamming_2_2_classes() {
        let h = hamming(2, 2).unwrap();
        assert_eq!(h.rank(), 3);
        assert_eq!(
            (0..3).map(|g| h.class_size(g)).collect::<Vec<_>>(),
            vec![4, 8, 4]
        );
        assert_eq!(h.p(1, 2, 1), 1);
        assert_eq!(h.p(1, 1, 2), 2);
        assert_eq!(h.p(1, 1, 0), 2);
        assert_eq!(h.p(1, 1, 1), 0);
        assert_eq!(h.points()[3], "11");
    }

    #[test]
    fn hamming_one_is_trivial() {
        let h = hamming(1, 5).unwrap();
        assert_eq!(h.rank(), 2);
        assert_eq!(
            h.configuration(),
            AssociationScheme::trivial(5).configuration()
        );
        assert_eq!(hamming(7, 2), Err(SchemeError::SizeLimit(128, 64)));
    }

    #[test]
    fn non_constant_intersection_is_caught() {
        // diagonal, {(0,1),(1,0)}, rest
        let rel = vec![vec![0, 1, 2], vec![1, 0, 2], vec![2, 2, 0]];
        match CoherentConfiguration::from_relations(rel) {
            Err(SchemeError::NonConstantIntersection { g, .. }) => assert_eq!(g, "R2"),
            other => panic!("unexpected {other:?}"),
        }
        let rel = vec![vec![0, 1], vec![2, 3]];
        assert_eq!(
            CoherentConfiguration::from_relations(rel).map(|c| c.is_association_scheme()),
            Ok(false)
        );
    }

    #[test]
    fn orbits() {
        let z4: Vec<Vec<usize>> = (0..4)
            .map(|k| (0..4).map(|i| (i + k) % 4).collect())
            .collect();
        let (c, transitive) = orbit_configuration(4, &z4).unwrap();
        assert!(transitive);
        assert_eq!(c.rank(), 4);
        let (c, transitive) = orbit_configuration(2, &[vec![0, 1]]).unwrap();
        assert!(!transitive);
        assert_eq!(c.rank(), 4);
        let s3 = vec![
            vec![0, 1, 2],
            vec![1, 0, 2],
            vec![0, 2, 1],
            vec![2, 1, 0],
            vec![1, 2, 0],
            vec![2, 0, 1],
        ];
        let (c, transitive) = orbit_configuration(3, &s3).unwrap();
        assert!(transitive && c.rank() == 2);
        assert_eq!(
            orbit_configuration(3, &[vec![1, 2, 0]]),
            Err(SchemeError::NotAGroup)
        );
    }

    #[test]
    fn j_of_hamming() {
        let h = hamming(2, 2).unwrap();
        let j = j_embed(&h);
        assert_eq!(j.category().num_objects(), 4);
        assert_eq!(j.category().num_morphisms(), 16);
        assert_eq!(j.num_blocks(), 3);
        for e in 0..3 {
            for f in 0..3 {
                for g in 0..3 {
                    assert_eq!(j.p(e, f, g), h.p(e, f, g));
                }
            }
        }
        assert!(j.is_basic());
    }

    #[test]
    fn constant_map_is_a_scheme_morphism() {
        let h = hamming(2, 2).unwrap();
        let t = AssociationScheme::trivial(1);
        let f = SchemeMorphism::new(vec![0; 4], &h, &t).unwrap();
        assert_eq!(f.class_map, vec![0, 0, 0]);
        let m = j_morphism(&f, &j_embed(&h), &j_embed(&t));
        assert_eq!(m.block_image, vec![0, 0, 0]);
    }
}
