//! Category algebras, schemoid algebras and Terwilliger algebras.

use num_traits::{One, ToPrimitive, Zero};
use serde_json::{json, Map, Value};
use thiserror::Error;

use crate::fincat::{FinCategory, ObjId};
use crate::linalg::{self, Matrix, Ring, Scalar, Span};
use crate::schemoid::QuasiSchemoid;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum AlgebraError {
    #[error("object `{0}` is not terminal")]
    NotTerminal(String),
    #[error("dimension mismatch: {0} vs {1}")]
    DimensionMismatch(usize, usize),
    #[error("map has shape {rows}x{cols}, expected {expected_rows}x{expected_cols}")]
    Shape {
        rows: usize,
        cols: usize,
        expected_rows: usize,
        expected_cols: usize,
    },
    #[error("rings differ: {0} vs {1}")]
    RingMismatch(Ring, Ring),
    #[error("associativity fails at ({0}, {1}, {2})")]
    NotAssociative(String, String, String),
}

pub fn category_algebra_dim(c: &FinCategory) -> usize {
    c.num_morphisms()
}

/// Product in the category algebra: `f·g = f∘g` when composable, else 0.
pub fn category_product(c: &FinCategory, ring: Ring, x: &[Scalar], y: &[Scalar]) -> Vec<Scalar> {
    let mut out = vec![ring.zero(); c.num_morphisms()];
    for (f, g, h) in c.composable_pairs() {
        if !x[f].is_zero() && !y[g].is_zero() {
            out[h] = ring.add(&out[h], &ring.mul(&x[f], &y[g]));
        }
    }
    out
}

/// The Bose-Mesner algebra spanned by the block sums `s_σ`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SchemoidAlgebra {
    ring: Ring,
    basis: Vec<String>,
    tensor: Vec<Scalar>,
    unit: Option<Vec<Scalar>>,
}

impl SchemoidAlgebra {
    pub fn new(qs: &QuasiSchemoid, ring: Ring) -> Self {
        let n = qs.num_blocks();
        let mut tensor = vec![ring.zero(); n * n * n];
        for (s, t, m, v) in qs.constants().nonzero() {
            tensor[(s * n + t) * n + m] = ring.from_u64(v);
        }
        Self::from_tensor(ring, qs.partition().names().to_vec(), tensor)
            .expect("structure constants of a quasi-schemoid are associative")
    }

    /// Builds from `tensor[(σ·n + τ)·n + μ] = c^μ_{στ}`, checking associativity.
    pub fn from_tensor(
        ring: Ring,
        basis: Vec<String>,
        tensor: Vec<Scalar>,
    ) -> Result<Self, AlgebraError> {
        let n = basis.len();
        assert_eq!(tensor.len(), n * n * n, "tensor shape");
        let tensor: Vec<Scalar> = tensor.into_iter().map(|x| ring.reduce(x)).collect();
        let mut a = SchemoidAlgebra {
            ring,
            basis,
            tensor,
            unit: None,
        };
        if let Some((s, t, r)) = a.associativity_failure() {
            return Err(AlgebraError::NotAssociative(
                a.basis[s].clone(),
                a.basis[t].clone(),
                a.basis[r].clone(),
            ));
        }
        a.unit = a.find_unit();
        Ok(a)
    }

    pub fn ring(&self) -> Ring {
        self.ring
    }

    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    pub fn basis(&self) -> &[String] {
        &self.basis
    }

    pub fn c(&self, sigma: usize, tau: usize, mu: usize) -> &Scalar {
        let n = self.dim();
        &self.tensor[(sigma * n + tau) * n + mu]
    }

    /// Two-sided unit in the block basis, if any.
    pub fn unit(&self) -> Option<&[Scalar]> {
        self.unit.as_deref()
    }

    pub fn basis_vector(&self, i: usize) -> Vec<Scalar> {
        let mut v = vec![self.ring.zero(); self.dim()];
        v[i] = self.ring.one();
        v
    }

    pub fn mul(&self, x: &[Scalar], y: &[Scalar]) -> Vec<Scalar> {
        let n = self.dim();
        let ring = self.ring;
        let mut out = vec![ring.zero(); n];
        for s in (0..n).filter(|&s| !x[s].is_zero()) {
            for t in (0..n).filter(|&t| !y[t].is_zero()) {
                let xy = ring.mul(&x[s], &y[t]);
                for (m, o) in out.iter_mut().enumerate() {
                    let c = self.c(s, t, m);
                    if !c.is_zero() {
                        *o = ring.add(o, &ring.mul(&xy, c));
                    }
                }
            }
        }
        out
    }

    /// First `(σ, τ, ρ)` with `(s_σ s_τ) s_ρ ≠ s_σ (s_τ s_ρ)`.
    pub fn associativity_failure(&self) -> Option<(usize, usize, usize)> {
        let n = self.dim();
        let e: Vec<Vec<Scalar>> = (0..n).map(|i| self.basis_vector(i)).collect();
        for s in 0..n {
            for t in 0..n {
                let st = self.mul(&e[s], &e[t]);
                for r in 0..n {
                    let tr = self.mul(&e[t], &e[r]);
                    if self.mul(&st, &e[r]) != self.mul(&e[s], &tr) {
                        return Some((s, t, r));
                    }
                }
            }
        }
        None
    }

    /// Solves the left-unit and right-unit equations jointly.
    fn find_unit(&self) -> Option<Vec<Scalar>> {
        let n = self.dim();
        let ring = self.ring;
        let mut rows: Matrix = Vec::with_capacity(2 * n * n);
        let mut rhs = Vec::with_capacity(2 * n * n);
        for t in 0..n {
            for m in 0..n {
                let target = if t == m { ring.one() } else { ring.zero() };
                rows.push((0..n).map(|s| self.c(s, t, m).clone()).collect());
                rhs.push(target.clone());
                rows.push((0..n).map(|s| self.c(t, s, m).clone()).collect());
                rhs.push(target);
            }
        }
        linalg::solve(ring, &rows, &rhs)
    }

    /// `{"basis": [...], "product": {"σ,τ": {"μ": c}}, "unit": [...] | null}`.
    pub fn to_json(&self) -> Value {
        let n = self.dim();
        let mut product = Map::new();
        for s in 0..n {
            for t in 0..n {
                let mut entry = Map::new();
                for m in 0..n {
                    let c = self.c(s, t, m);
                    if !c.is_zero() {
                        entry.insert(self.basis[m].clone(), scalar_json(c));
                    }
                }
                product.insert(
                    format!("{},{}", self.basis[s], self.basis[t]),
                    Value::Object(entry),
                );
            }
        }
        json!({
            "ring": self.ring.to_string(),
            "basis": self.basis,
            "product": product,
            "unit": self.unit.as_ref().map(|u| u.iter().map(scalar_json).collect::<Vec<_>>()),
        })
    }
}

/// Integers as JSON numbers, other rationals as `"p/q"` strings.
pub fn scalar_json(x: &Scalar) -> Value {
    if x.is_integer() {
        if let Some(v) = x.numer().to_i64() {
            return json!(v);
        }
    }
    Value::String(x.to_string())
}

#[derive(Debug, Clone, PartialEq, Eq, serde::Serialize)]
pub struct UnitalityReport {
    /// Some two-sided unit exists in the algebra.
    pub has_unit: bool,
    /// That unit is `Σ_x 1_x` in the category algebra.
    pub unit_is_identity_sum: bool,
    /// Combinatorial unitality of the quasi-schemoid.
    pub combinatorial: bool,
}

impl UnitalityReport {
    pub fn unital(&self) -> bool {
        self.unit_is_identity_sum
    }

    pub fn agrees(&self) -> bool {
        self.unital() == self.combinatorial
    }
}

/// Whether the schemoid algebra contains the unit `Σ_x 1_x` of the category algebra.
pub fn algebra_is_unital(a: &SchemoidAlgebra, qs: &QuasiSchemoid) -> UnitalityReport {
    let c = qs.category();
    let unit_is_identity_sum = a.unit().is_some_and(|u| {
        (0..c.num_morphisms()).all(|f| {
            let coeff = &u[qs.block_of(f)];
            if c.is_identity(f) {
                coeff.is_one()
            } else {
                coeff.is_zero()
            }
        })
    });
    UnitalityReport {
        has_unit: a.unit().is_some(),
        unit_is_identity_sum,
        combinatorial: qs.is_unital(),
    }
}

/// Subalgebra of the category algebra generated by the block sums and the `E_σ`.
#[derive(Debug, Clone)]
pub struct Terwilliger {
    ring: Ring,
    category: FinCategory,
    span: Span,
    idempotents: Vec<Vec<Scalar>>,
}

impl Terwilliger {
    pub fn dim(&self) -> usize {
        self.span.len()
    }

    pub fn ring(&self) -> Ring {
        self.ring
    }

    pub fn ambient_dim(&self) -> usize {
        self.span.ambient_dim()
    }

    pub fn basis(&self) -> &Matrix {
        self.span.basis()
    }

    /// `E_σ = Σ_{(e,x)∈σ} 1_x`, one per block.
    pub fn idempotents(&self) -> &[Vec<Scalar>] {
        &self.idempotents
    }

    pub fn contains(&self, v: &[Scalar]) -> bool {
        self.span.contains(v)
    }

    pub fn multiply(&self, x: &[Scalar], y: &[Scalar]) -> Vec<Scalar> {
        category_product(&self.category, self.ring, x, y)
    }
}

pub fn terwilliger(qs: &QuasiSchemoid, e: ObjId, ring: Ring) -> Result<Terwilliger, AlgebraError> {
    let c = qs.category();
    let m = c.num_morphisms();
    let mut arrow_into_e = Vec::with_capacity(c.num_objects());
    for x in 0..c.num_objects() {
        match c.hom(x, e).as_slice() {
            [f] => arrow_into_e.push(*f),
            _ => return Err(AlgebraError::NotTerminal(c.object_name(e).to_string())),
        }
    }
    let part = qs.partition();
    let mut gens = Vec::new();
    for block in part.blocks() {
        let mut s = vec![ring.zero(); m];
        for &f in block {
            s[f] = ring.one();
        }
        gens.push(s);
    }
    let mut idempotents = vec![vec![ring.zero(); m]; part.num_blocks()];
    for (x, &f) in arrow_into_e.iter().enumerate() {
        let e_sigma = &mut idempotents[qs.block_of(f)];
        e_sigma[c.identity(x)] = ring.one();
    }
    gens.extend(idempotents.iter().cloned());

    let mut span = Span::new(ring, m);
    for g in &gens {
        span.insert(g);
    }
    // Products of basis elements until the span is closed; at most `m` rounds.
    for _ in 0..=m {
        let basis = span.basis().clone();
        let mut grew = false;
        for x in &basis {
            for y in &basis {
                grew |= span.insert(&category_product(c, ring, x, y));
            }
        }
        if !grew {
            break;
        }
    }
    Ok(Terwilliger {
        ring,
        category: c.clone(),
        span,
        idempotents,
    })
}

/// Linear map between algebras; `matrix[row = target basis][col = source basis]`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AlgebraMap {
    pub ring: Ring,
    pub matrix: Matrix,
    pub cols: usize,
}

impl AlgebraMap {
    pub fn new(ring: Ring, matrix: Matrix, cols: usize) -> Self {
        let matrix = matrix
            .into_iter()
            .map(|r| r.into_iter().map(|x| ring.reduce(x)).collect())
            .collect();
        AlgebraMap { ring, matrix, cols }
    }

    pub fn identity(ring: Ring, n: usize) -> Self {
        AlgebraMap::new(ring, linalg::identity_matrix(ring, n), n)
    }

    pub fn zero(ring: Ring, rows: usize, cols: usize) -> Self {
        AlgebraMap::new(ring, linalg::zero_matrix(ring, rows, cols), cols)
    }

    pub fn rows(&self) -> usize {
        self.matrix.len()
    }

    pub fn apply(&self, x: &[Scalar]) -> Vec<Scalar> {
        linalg::mat_vec(self.ring, &self.matrix, x)
    }

    /// `other ∘ self`.
    pub fn then(&self, other: &AlgebraMap) -> AlgebraMap {
        AlgebraMap {
            ring: self.ring,
            matrix: linalg::mat_mul(self.ring, &other.matrix, &self.matrix),
            cols: self.cols,
        }
    }

    pub fn is_zero(&self) -> bool {
        self.matrix.iter().flatten().all(Zero::is_zero)
    }

    pub fn is_isomorphism(&self) -> bool {
        self.rows() == self.cols && linalg::rank(self.ring, &self.matrix) == self.cols
    }

    pub fn to_json(&self) -> Value {
        Value::Array(
            self.matrix
                .iter()
                .map(|r| Value::Array(r.iter().map(scalar_json).collect()))
                .collect(),
        )
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct HomReport {
    pub multiplicative: bool,
    /// First basis pair `(σ, τ)` with `f(s_σ s_τ) ≠ f(s_σ) f(s_τ)`.
    pub witness: Option<(usize, usize)>,
    /// Present when both algebras have a unit.
    pub unit_preserved: Option<bool>,
}

impl HomReport {
    pub fn is_hom(&self) -> bool {
        self.multiplicative && self.unit_preserved != Some(false)
    }
}

pub fn check_algebra_hom(
    map: &AlgebraMap,
    a: &SchemoidAlgebra,
    b: &SchemoidAlgebra,
) -> Result<HomReport, AlgebraError> {
    if a.ring() != b.ring() || map.ring != a.ring() {
        return Err(AlgebraError::RingMismatch(a.ring(), b.ring()));
    }
    if map.rows() != b.dim() || map.cols != a.dim() || map.matrix.iter().any(|r| r.len() != a.dim())
    {
        return Err(AlgebraError::Shape {
            rows: map.rows(),
            cols: map.cols,
            expected_rows: b.dim(),
            expected_cols: a.dim(),
        });
    }
    let images: Vec<Vec<Scalar>> = (0..a.dim())
        .map(|i| map.apply(&a.basis_vector(i)))
        .collect();
    let mut witness = None;
    'outer: for s in 0..a.dim() {
        for t in 0..a.dim() {
            let lhs = map.apply(&a.mul(&a.basis_vector(s), &a.basis_vector(t)));
            if lhs != b.mul(&images[s], &images[t]) {
                witness = Some((s, t));
                break 'outer;
            }
        }
    }
    let unit_preserved = match (a.unit(), b.unit()) {
        (Some(ua), Some(ub)) => Some(map.apply(ua) == ub),
        _ => None,
    };
    Ok(HomReport {
        multiplicative: witness.is_none(),
        witness,
        unit_preserved,
    })
}

/// `s_σ ↦ λ_σ t_{β(σ)}`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ScaledIso {
    pub bijection: Vec<usize>,
    pub scalars: Vec<Scalar>,
}

impl ScaledIso {
    pub fn to_map(&self, ring: Ring) -> AlgebraMap {
        let n = self.bijection.len();
        let mut m = linalg::zero_matrix(ring, n, n);
        for (s, (&b, l)) in self.bijection.iter().zip(&self.scalars).enumerate() {
            m[b][s] = l.clone();
        }
        AlgebraMap::new(ring, m, n)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ScaledIsoOutcome {
    Found(ScaledIso),
    /// Every bijection was refuted.
    Exhausted,
    /// No witness, but some bijection needed an unforced scalar choice that failed.
    Inconclusive,
}

/// Searches bijections `β` and nonzero `λ` with
/// `c^μ_{στ}(A)·λ_μ = λ_σ λ_τ·c^{β(μ)}_{β(σ)β(τ)}(B)`.
pub fn scaled_basis_iso(
    a: &SchemoidAlgebra,
    b: &SchemoidAlgebra,
) -> Result<ScaledIsoOutcome, AlgebraError> {
    if a.dim() != b.dim() {
        return Err(AlgebraError::DimensionMismatch(a.dim(), b.dim()));
    }
    if a.ring() != b.ring() {
        return Err(AlgebraError::RingMismatch(a.ring(), b.ring()));
    }
    let n = a.dim();
    let mut search = BijectionSearch {
        a,
        b,
        beta: vec![usize::MAX; n],
        used: vec![false; n],
        inconclusive: false,
    };
    if let Some(found) = search.extend(0) {
        return Ok(ScaledIsoOutcome::Found(found));
    }
    Ok(if search.inconclusive {
        ScaledIsoOutcome::Inconclusive
    } else {
        ScaledIsoOutcome::Exhausted
    })
}

struct BijectionSearch<'a> {
    a: &'a SchemoidAlgebra,
    b: &'a SchemoidAlgebra,
    beta: Vec<usize>,
    used: Vec<bool>,
    inconclusive: bool,
}

impl BijectionSearch<'_> {
    fn pattern_ok(&self, k: usize) -> bool {
        let idx: Vec<usize> = (0..=k).collect();
        for &s in &idx {
            for &t in &idx {
                for &m in &idx {
                    if s != k && t != k && m != k {
                        continue;
                    }
                    let za = self.a.c(s, t, m).is_zero();
                    let zb = self.b.c(self.beta[s], self.beta[t], self.beta[m]).is_zero();
                    if za != zb {
                        return false;
                    }
                }
            }
        }
        true
    }

    fn extend(&mut self, k: usize) -> Option<ScaledIso> {
        let n = self.beta.len();
        if k == n {
            return match solve_scalars(self.a, self.b, &self.beta) {
                ScalarSolve::Solved(scalars) => Some(ScaledIso {
                    bijection: self.beta.clone(),
                    scalars,
                }),
                ScalarSolve::Impossible => None,
                ScalarSolve::Unknown => {
                    self.inconclusive = true;
                    None
                }
            };
        }
        for cand in 0..n {
            if self.used[cand] {
                continue;
            }
            self.beta[k] = cand;
            self.used[cand] = true;
            if self.pattern_ok(k) {
                if let Some(found) = self.extend(k + 1) {
                    return Some(found);
                }
            }
            self.used[cand] = false;
            self.beta[k] = usize::MAX;
        }
        None
    }
}

enum ScalarSolve {
    Solved(Vec<Scalar>),
    Impossible,
    Unknown,
}

/// Equation `λ_μ · λ_σ⁻¹ · λ_τ⁻¹ = r`.
struct ScalarEq {
    vars: [(usize, i32); 3],
    r: Scalar,
}

fn solve_scalars(a: &SchemoidAlgebra, b: &SchemoidAlgebra, beta: &[usize]) -> ScalarSolve {
    let ring = a.ring();
    let n = beta.len();
    let mut eqs = Vec::new();
    for s in 0..n {
        for t in 0..n {
            for m in 0..n {
                let ca = a.c(s, t, m);
                if ca.is_zero() {
                    continue;
                }
                let cb = b.c(beta[s], beta[t], beta[m]);
                let r = ring.div(cb, ca).expect("nonzero");
                eqs.push(ScalarEq {
                    vars: [(m, 1), (s, -1), (t, -1)],
                    r,
                });
            }
        }
    }
    let mut values: Vec<Option<Scalar>> = vec![None; n];
    let mut free_choice = false;
    match propagate(ring, &eqs, &mut values, &mut free_choice) {
        Some(v) => ScalarSolve::Solved(v),
        None if free_choice => ScalarSolve::Unknown,
        None => ScalarSolve::Impossible,
    }
}

fn power(ring: Ring, x: &Scalar, e: i32) -> Scalar {
    let base = if e < 0 {
        ring.inv(x).expect("nonzero")
    } else {
        x.clone()
    };
    (0..e.unsigned_abs()).fold(ring.one(), |acc, _| ring.mul(&acc, &base))
}

fn propagate(
    ring: Ring,
    eqs: &[ScalarEq],
    values: &mut [Option<Scalar>],
    free_choice: &mut bool,
) -> Option<Vec<Scalar>> {
    loop {
        let mut progressed = false;
        for eq in eqs {
            let mut net: Vec<(usize, i32)> = Vec::new();
            for &(v, e) in &eq.vars {
                match net.iter_mut().find(|(u, _)| *u == v) {
                    Some(entry) => entry.1 += e,
                    None => net.push((v, e)),
                }
            }
            let mut known = ring.one();
            let mut unknown = Vec::new();
            for &(v, e) in net.iter().filter(|(_, e)| *e != 0) {
                match &values[v] {
                    Some(x) => known = ring.mul(&known, &power(ring, x, e)),
                    None => unknown.push((v, e)),
                }
            }
            // Remaining: Π u^e = r / known.
            let rhs = ring.div(&eq.r, &known).expect("nonzero");
            match unknown.as_slice() {
                [] => {
                    if !rhs.is_one() {
                        return None;
                    }
                }
                [(u, e)] => {
                    let base = power(ring, &rhs, if *e < 0 { -1 } else { 1 });
                    match e.abs() {
                        1 => {
                            if base.is_zero() {
                                return None;
                            }
                            values[*u] = Some(base);
                            progressed = true;
                        }
                        2 => {
                            for root in ring.sqrt(&base) {
                                if root.is_zero() {
                                    continue;
                                }
                                let mut branch = values.to_vec();
                                branch[*u] = Some(root);
                                if let Some(sol) = propagate(ring, eqs, &mut branch, free_choice) {
                                    return Some(sol);
                                }
                            }
                            return None;
                        }
                        _ => unreachable!("exponents lie in -2..=1"),
                    }
                }
                _ => {}
            }
        }
        if values.iter().all(Option::is_some) {
            // A final pass above saw every equation fully determined.
            if !progressed {
                return Some(values.iter().map(|v| v.clone().expect("set")).collect());
            }
            continue;
        }
        if !progressed {
            let free = values
                .iter()
                .position(Option::is_none)
                .expect("some unknown");
            *free_choice = true;
            values[free] = Some(ring.one());
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fincat::{arrow, terminal};
    use crate::group::FiniteGroup;
    use crate::schemes::{hamming, j_embed, AssociationScheme};
    use crate::schemoid::MorphismPartition;
    use num_bigint::BigInt;

    fn q(v: i64) -> Scalar {
        Scalar::from_integer(BigInt::from(v))
    }

    fn h22() -> QuasiSchemoid {
        j_embed(hamming(2, 2).unwrap().configuration())
            .quasi
            .clone()
    }

    #[test]
    fn dims() {
        assert_eq!(category_algebra_dim(&terminal()), 1);
        assert_eq!(category_algebra_dim(&arrow()), 3);
        assert_eq!(category_algebra_dim(h22().category()), 16);
    }

    #[test]
    fn hamming_algebra() {
        let qs = h22();
        let a = SchemoidAlgebra::new(&qs, Ring::Rationals);
        assert_eq!(a.dim(), 3);
        let (r0, r1, r2) = (qs.block("R0"), qs.block("R1"), qs.block("R2"));
        let sq = a.mul(&a.basis_vector(r1), &a.basis_vector(r1));
        assert_eq!(sq[r0], q(2));
        assert_eq!(sq[r1], q(0));
        assert_eq!(sq[r2], q(2));
        let report = algebra_is_unital(&a, &qs);
        assert!(report.unital() && report.agrees());
        assert_eq!(a.unit().unwrap()[r0], q(1));
    }

    #[test]
    fn group_bullet_has_half_unit_but_is_not_unital() {
        let g = FiniteGroup::cyclic(2);
        let c = crate::fincat::group_category(&g);
        let p = MorphismPartition::by_key(&c, |_| 0, |_| "G".to_string());
        let qs = QuasiSchemoid::new(c, p).unwrap();
        let a = SchemoidAlgebra::new(&qs, Ring::Rationals);
        assert_eq!(a.c(0, 0, 0), &q(2));
        assert_eq!(
            a.unit().unwrap()[0],
            Scalar::new(BigInt::from(1), BigInt::from(2))
        );
        let report = algebra_is_unital(&a, &qs);
        assert!(!report.unital() && report.agrees());
    }

    #[test]
    fn identity_and_zero_maps() {
        let a = SchemoidAlgebra::new(&h22(), Ring::Rationals);
        let id = AlgebraMap::identity(Ring::Rationals, 3);
        assert!(check_algebra_hom(&id, &a, &a).unwrap().is_hom());
        let zero = AlgebraMap::zero(Ring::Rationals, 3, 3);
        let r = check_algebra_hom(&zero, &a, &a).unwrap();
        assert!(r.multiplicative);
        assert_eq!(r.unit_preserved, Some(false));
    }

    #[test]
    fn scaled_iso_self_and_mismatch() {
        let a = SchemoidAlgebra::new(&h22(), Ring::Rationals);
        match scaled_basis_iso(&a, &a).unwrap() {
            ScaledIsoOutcome::Found(iso) => {
                assert!(check_algebra_hom(&iso.to_map(Ring::Rationals), &a, &a)
                    .unwrap()
                    .is_hom());
            }
            other => panic!("{other:?}"),
        }
        let t = AssociationScheme::trivial(1);
        let b = SchemoidAlgebra::new(&j_embed(t.configuration()).quasi, Ring::Rationals);
        assert_eq!(
            scaled_basis_iso(&a, &b),
            Err(AlgebraError::DimensionMismatch(3, 1))
        );
    }

    #[test]
    fn terwilliger_trivial_and_sum() {
        let t = AssociationScheme::trivial(1);
        let qs = j_embed(t.configuration()).quasi.clone();
        assert_eq!(terwilliger(&qs, 0, Ring::Rationals).unwrap().dim(), 1);
        let qs = h22();
        let tw = terwilliger(&qs, 0, Ring::Rationals).unwrap();
        let mut sum = vec![q(0); 16];
        for e in tw.idempotents() {
            for (s, x) in sum.iter_mut().zip(e) {
                *s += x;
            }
        }
        let c = qs.category();
        for f in 0..16 {
            assert_eq!(sum[f], if c.is_identity(f) { q(1) } else { q(0) });
        }
        assert!(terwilliger(&QuasiSchemoid::discrete(arrow()), 0, Ring::Rationals).is_err());
    }
}
