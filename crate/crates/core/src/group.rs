//! Finite groups given by Cayley tables.

use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GroupError {
    #[error("Cayley table must be square with entries below its order")]
    Shape,
    #[error("no two-sided identity element")]
    NoIdentity,
    #[error("element `{0}` has no inverse")]
    NoInverse(String),
    #[error("multiplication is not associative at ({0}, {1}, {2})")]
    NotAssociative(String, String, String),
    #[error("element names must be distinct")]
    DuplicateName,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FiniteGroup {
    names: Vec<String>,
    table: Vec<Vec<usize>>,
    identity: usize,
    inverse: Vec<usize>,
}

impl FiniteGroup {
    pub fn from_table(names: Vec<String>, table: Vec<Vec<usize>>) -> Result<Self, GroupError> {
        let n = table.len();
        if n == 0
            || names.len() != n
            || table
                .iter()
                .any(|r| r.len() != n || r.iter().any(|&x| x >= n))
        {
            return Err(GroupError::Shape);
        }
        let mut sorted = names.clone();
        sorted.sort();
        sorted.dedup();
        if sorted.len() != n {
            return Err(GroupError::DuplicateName);
        }
        let identity = (0..n)
            .find(|&e| (0..n).all(|a| table[e][a] == a && table[a][e] == a))
            .ok_or(GroupError::NoIdentity)?;
        let mut inverse = vec![0; n];
        for a in 0..n {
            inverse[a] = (0..n)
                .find(|&b| table[a][b] == identity && table[b][a] == identity)
                .ok_or_else(|| GroupError::NoInverse(names[a].clone()))?;
        }
        for a in 0..n {
            for b in 0..n {
                for c in 0..n {
                    if table[table[a][b]][c] != table[a][table[b][c]] {
                        return Err(GroupError::NotAssociative(
                            names[a].clone(),
                            names[b].clone(),
                            names[c].clone(),
                        ));
                    }
                }
            }
        }
        Ok(FiniteGroup {
            names,
            table,
            identity,
            inverse,
        })
    }

    /// Table with default names `0..n`.
    pub fn from_cayley(table: Vec<Vec<usize>>) -> Result<Self, GroupError> {
        let names = (0..table.len()).map(|i| i.to_string()).collect();
        Self::from_table(names, table)
    }

    /// ℤ/n with elements named `0..n`.
    pub fn cyclic(n: usize) -> Self {
        let table = (0..n)
            .map(|a| (0..n).map(|b| (a + b) % n).collect())
            .collect();
        Self::from_cayley(table).expect("cyclic groups are groups")
    }

    /// Direct product with elements named `(a,b)`.
    pub fn direct_product(&self, other: &FiniteGroup) -> FiniteGroup {
        let (n, m) = (self.order(), other.order());
        let names = (0..n * m)
            .map(|i| format!("({},{})", self.names[i / m], other.names[i % m]))
            .collect();
        let table = (0..n * m)
            .map(|i| {
                (0..n * m)
                    .map(|j| self.mul(i / m, j / m) * m + other.mul(i % m, j % m))
                    .collect()
            })
            .collect();
        Self::from_table(names, table).expect("products of groups are groups")
    }

    pub fn order(&self) -> usize {
        self.table.len()
    }

    pub fn identity(&self) -> usize {
        self.identity
    }

    pub fn mul(&self, a: usize, b: usize) -> usize {
        self.table[a][b]
    }

    pub fn inv(&self, a: usize) -> usize {
        self.inverse[a]
    }

    pub fn name(&self, a: usize) -> &str {
        &self.names[a]
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn table(&self) -> &[Vec<usize>] {
        &self.table
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn cyclic_groups() {
        let g = FiniteGroup::cyclic(4);
        assert_eq!(g.identity(), 0);
        assert_eq!(g.inv(1), 3);
        assert_eq!(g.mul(3, 2), 1);
    }

    #[test]
    fn rejects_non_groups() {
        assert_eq!(
            FiniteGroup::from_cayley(vec![vec![0, 1], vec![1, 1]]),
            Err(GroupError::NoInverse("1".into()))
        );
        assert_eq!(
            FiniteGroup::from_cayley(vec![vec![1, 0], vec![1, 1]]),
            Err(GroupError::NoIdentity)
        );
        assert_eq!(
            FiniteGroup::from_cayley(vec![vec![0, 2]]),
            Err(GroupError::Shape)
        );
    }

    #[test]
    fn klein_four_as_product() {
        let k = FiniteGroup::cyclic(2).direct_product(&FiniteGroup::cyclic(2));
        assert_eq!(k.order(), 4);
        assert!((0..4).all(|a| k.mul(a, a) == k.identity()));
    }
}
