//! Exact linear algebra over ℚ and prime fields.

use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use thiserror::Error;

pub type Scalar = BigRational;
pub type Matrix = Vec<Vec<Scalar>>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum RingError {
    #[error("{0} is not prime")]
    NotPrime(u64),
    #[error("unrecognized ring `{0}` (expected Q or Fp with p prime)")]
    Parse(String),
}

/// Coefficients: the rationals or a prime field `𝔽_p` (elements `0..p`).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Ring {
    Rationals,
    Prime(u64),
}

impl fmt::Display for Ring {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Ring::Rationals => write!(f, "Q"),
            Ring::Prime(p) => write!(f, "F{p}"),
        }
    }
}

impl FromStr for Ring {
    type Err = RingError;
    fn from_str(s: &str) -> Result<Self, RingError> {
        match s {
            "Q" | "q" | "QQ" => Ok(Ring::Rationals),
            _ => {
                let digits = s
                    .strip_prefix('F')
                    .or_else(|| s.strip_prefix("GF"))
                    .or_else(|| s.strip_prefix('f'))
                    .ok_or_else(|| RingError::Parse(s.to_string()))?;
                let p: u64 = digits
                    .parse()
                    .map_err(|_| RingError::Parse(s.to_string()))?;
                Ring::prime(p)
            }
        }
    }
}

pub fn is_prime(p: u64) -> bool {
    p >= 2 && (2..).take_while(|d| d * d <= p).all(|d| p % d != 0)
}

impl Ring {
    pub fn prime(p: u64) -> Result<Ring, RingError> {
        if is_prime(p) {
            Ok(Ring::Prime(p))
        } else {
            Err(RingError::NotPrime(p))
        }
    }

    /// 0 for ℚ.
    pub fn characteristic(&self) -> u64 {
        match self {
            Ring::Rationals => 0,
            Ring::Prime(p) => *p,
        }
    }

    fn modulo(p: u64, n: &BigInt) -> u64 {
        let r = n % BigInt::from(p);
        let r = if r.is_negative() {
            r + BigInt::from(p)
        } else {
            r
        };
        r.to_u64().expect("residue fits")
    }

    fn pow_mod(b: u64, mut e: u64, p: u64) -> u64 {
        let m = p as u128;
        let (mut acc, mut base) = (1u128, b as u128 % m);
        while e > 0 {
            if e & 1 == 1 {
                acc = acc * base % m;
            }
            base = base * base % m;
            e >>= 1;
        }
        acc as u64
    }

    /// Canonical representative; rationals map into `𝔽_p` when their denominator is a unit.
    pub fn reduce(&self, x: Scalar) -> Scalar {
        match self {
            Ring::Rationals => x,
            Ring::Prime(p) => {
                let n = Self::modulo(*p, x.numer());
                let d = Self::modulo(*p, x.denom());
                assert!(d != 0, "denominator divisible by the characteristic");
                let v = (n as u128 * Self::pow_mod(d, p - 2, *p) as u128 % *p as u128) as u64;
                Scalar::from_integer(BigInt::from(v))
            }
        }
    }

    pub fn zero(&self) -> Scalar {
        Scalar::zero()
    }

    pub fn one(&self) -> Scalar {
        self.reduce(Scalar::one())
    }

    pub fn from_i64(&self, v: i64) -> Scalar {
        self.reduce(Scalar::from_integer(BigInt::from(v)))
    }

    pub fn from_u64(&self, v: u64) -> Scalar {
        self.reduce(Scalar::from_integer(BigInt::from(v)))
    }

    pub fn add(&self, a: &Scalar, b: &Scalar) -> Scalar {
        self.reduce(a + b)
    }

    pub fn sub(&self, a: &Scalar, b: &Scalar) -> Scalar {
        self.reduce(a - b)
    }

    pub fn mul(&self, a: &Scalar, b: &Scalar) -> Scalar {
        self.reduce(a * b)
    }

    pub fn neg(&self, a: &Scalar) -> Scalar {
        self.reduce(-a)
    }

    pub fn inv(&self, a: &Scalar) -> Option<Scalar> {
        if a.is_zero() {
            None
        } else {
            Some(self.reduce(a.recip()))
        }
    }

    pub fn div(&self, a: &Scalar, b: &Scalar) -> Option<Scalar> {
        self.inv(b).map(|bi| self.mul(a, &bi))
    }

    /// All square roots of `a` in the ring.
    pub fn sqrt(&self, a: &Scalar) -> Vec<Scalar> {
        match self {
            Ring::Rationals => {
                if a.is_negative() {
                    return Vec::new();
                }
                let (n, d) = (a.numer().sqrt(), a.denom().sqrt());
                let r = Scalar::new(n, d);
                if &(&r * &r) != a {
                    Vec::new()
                } else if r.is_zero() {
                    vec![r]
                } else {
                    vec![r.clone(), -r]
                }
            }
            Ring::Prime(p) => {
                let target = Self::modulo(*p, a.numer());
                let mut out: Vec<Scalar> = (0..*p)
                    .filter(|&x| (x as u128 * x as u128 % *p as u128) as u64 == target)
                    .map(|x| Scalar::from_integer(BigInt::from(x)))
                    .collect();
                out.dedup();
                out
            }
        }
    }
}

/// Reduced row echelon form in place; returns pivot columns.
pub fn rref(ring: Ring, m: &mut Matrix) -> Vec<usize> {
    let rows = m.len();
    let cols = m.first().map_or(0, Vec::len);
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..cols {
        if r == rows {
            break;
        }
        let Some(p) = (r..rows).find(|&i| !m[i][c].is_zero()) else {
            continue;
        };
        m.swap(r, p);
        let inv = ring.inv(&m[r][c]).expect("pivot is nonzero");
        for x in m[r].iter_mut() {
            *x = ring.mul(x, &inv);
        }
        let pivot_row = m[r].clone();
        for (i, row) in m.iter_mut().enumerate() {
            if i != r && !row[c].is_zero() {
                let factor = row[c].clone();
                for (x, y) in row.iter_mut().zip(&pivot_row) {
                    if !y.is_zero() {
                        *x = ring.sub(x, &ring.mul(&factor, y));
                    }
                }
            }
        }
        pivots.push(c);
        r += 1;
    }
    pivots
}

pub fn rank(ring: Ring, m: &Matrix) -> usize {
    let mut m = m.clone();
    rref(ring, &mut m).len()
}

/// Some solution of `a x = b`, if any.
pub fn solve(ring: Ring, a: &Matrix, b: &[Scalar]) -> Option<Vec<Scalar>> {
    let cols = a.first().map_or(0, Vec::len);
    let mut aug: Matrix = a
        .iter()
        .zip(b)
        .map(|(row, v)| {
            let mut r = row.clone();
            r.push(v.clone());
            r
        })
        .collect();
    let pivots = rref(ring, &mut aug);
    if pivots.last() == Some(&cols) {
        return None;
    }
    let mut x = vec![ring.zero(); cols];
    for (r, &c) in pivots.iter().enumerate() {
        x[c] = aug[r][cols].clone();
    }
    Some(x)
}

/// Basis of `{x | a x = 0}`.
pub fn nullspace(ring: Ring, a: &Matrix, cols: usize) -> Vec<Vec<Scalar>> {
    let mut m = a.clone();
    let pivots = rref(ring, &mut m);
    let free: Vec<usize> = (0..cols).filter(|c| !pivots.contains(c)).collect();
    free.iter()
        .map(|&f| {
            let mut v = vec![ring.zero(); cols];
            v[f] = ring.one();
            for (r, &c) in pivots.iter().enumerate() {
                v[c] = ring.neg(&m[r][f]);
            }
            v
        })
        .collect()
}

pub fn mat_vec(ring: Ring, a: &Matrix, x: &[Scalar]) -> Vec<Scalar> {
    a.iter()
        .map(|row| {
            row.iter()
                .zip(x)
                .filter(|(a, b)| !a.is_zero() && !b.is_zero())
                .fold(ring.zero(), |acc, (a, b)| ring.add(&acc, &ring.mul(a, b)))
        })
        .collect()
}

pub fn mat_mul(ring: Ring, a: &Matrix, b: &Matrix) -> Matrix {
    let inner = b.len();
    let cols = b.first().map_or(0, Vec::len);
    a.iter()
        .map(|row| {
            (0..cols)
                .map(|j| {
                    (0..inner)
                        .filter(|&k| !row[k].is_zero() && !b[k][j].is_zero())
                        .fold(ring.zero(), |acc, k| {
                            ring.add(&acc, &ring.mul(&row[k], &b[k][j]))
                        })
                })
                .collect()
        })
        .collect()
}

pub fn identity_matrix(ring: Ring, n: usize) -> Matrix {
    (0..n)
        .map(|i| {
            (0..n)
                .map(|j| if i == j { ring.one() } else { ring.zero() })
                .collect()
        })
        .collect()
}

pub fn zero_matrix(ring: Ring, rows: usize, cols: usize) -> Matrix {
    vec![vec![ring.zero(); cols]; rows]
}

/// Incrementally grown row space in reduced form.
#[derive(Debug, Clone)]
pub struct Span {
    ring: Ring,
    dim: usize,
    rows: Matrix,
    pivots: Vec<usize>,
}

impl Span {
    pub fn new(ring: Ring, dim: usize) -> Self {
        Span {
            ring,
            dim,
            rows: Vec::new(),
            pivots: Vec::new(),
        }
    }

    pub fn len(&self) -> usize {
        self.rows.len()
    }

    pub fn is_empty(&self) -> bool {
        self.rows.is_empty()
    }

    pub fn ambient_dim(&self) -> usize {
        self.dim
    }

    pub fn basis(&self) -> &Matrix {
        &self.rows
    }

    fn residue(&self, v: &[Scalar]) -> Vec<Scalar> {
        let ring = self.ring;
        let mut w = v.to_vec();
        for (row, &c) in self.rows.iter().zip(&self.pivots) {
            if !w[c].is_zero() {
                let f = w[c].clone();
                for (x, y) in w.iter_mut().zip(row) {
                    if !y.is_zero() {
                        *x = ring.sub(x, &ring.mul(&f, y));
                    }
                }
            }
        }
        w
    }

    pub fn contains(&self, v: &[Scalar]) -> bool {
        self.residue(v).iter().all(Zero::is_zero)
    }

    /// Adds `v`; returns whether the span grew.
    pub fn insert(&mut self, v: &[Scalar]) -> bool {
        let ring = self.ring;
        let mut w = self.residue(v);
        let Some(c) = w.iter().position(|x| !x.is_zero()) else {
            return false;
        };
        let inv = ring.inv(&w[c]).expect("nonzero");
        for x in w.iter_mut() {
            *x = ring.mul(x, &inv);
        }
        for row in self.rows.iter_mut() {
            if !row[c].is_zero() {
                let f = row[c].clone();
                for (x, y) in row.iter_mut().zip(&w) {
                    if !y.is_zero() {
                        *x = ring.sub(x, &ring.mul(&f, y));
                    }
                }
            }
        }
        self.rows.push(w);
        self.pivots.push(c);
        true
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(v: i64) -> Scalar {
        Scalar::from_integer(BigInt::from(v))
    }

    #[test]
    fn parse_rings() {
        assert_eq!("Q".parse::<Ring>(), Ok(Ring::Rationals));
        assert_eq!("F3".parse::<Ring>(), Ok(Ring::Prime(3)));
        assert_eq!("F4".parse::<Ring>(), Err(RingError::NotPrime(4)));
    }

    #[test]
    fn field_arithmetic() {
        let f5 = Ring::Prime(5);
        assert_eq!(f5.inv(&q(2)), Some(q(3)));
        assert_eq!(
            f5.reduce(Scalar::new(BigInt::from(1), BigInt::from(2))),
            q(3)
        );
        assert_eq!(f5.sqrt(&q(4)), vec![q(2), q(3)]);
        assert_eq!(
            Ring::Rationals
                .sqrt(&Scalar::new(BigInt::from(9), BigInt::from(4)))
                .len(),
            2
        );
        assert!(Ring::Rationals.sqrt(&q(2)).is_empty());
    }

    #[test]
    fn solve_and_nullspace() {
        let r = Ring::Rationals;
        let a = vec![vec![q(1), q(2)], vec![q(2), q(4)]];
        assert_eq!(rank(r, &a), 1);
        assert!(solve(r, &a, &[q(1), q(3)]).is_none());
        let x = solve(r, &a, &[q(1), q(2)]).unwrap();
        assert_eq!(mat_vec(r, &a, &x), vec![q(1), q(2)]);
        let ns = nullspace(r, &a, 2);
        assert_eq!(ns.len(), 1);
        assert!(mat_vec(r, &a, &ns[0]).iter().all(Zero::is_zero));
    }

    #[test]
    fn span_growth() {
        let r = Ring::Prime(2);
        let mut s = Span::new(r, 3);
        assert!(s.insert(&[q(1), q(1), q(0)]));
        assert!(s.insert(&[q(0), q(1), q(1)]));
        assert!(!s.insert(&[q(1), q(0), q(1)]));
        assert_eq!(s.len(), 2);
    }
}
