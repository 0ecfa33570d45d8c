//! Diagonal normal forms over `ℤ/m` and homology of `ℤ/m`-cochain complexes.
//!
//! Every matrix is reduced to a diagonal `D = U·A·V` with `U`, `V` products
//! of integer unimodular 2×2 moves, so they stay invertible modulo `m`
//! for composite `m` as well.

use num_integer::Integer;

pub type ModMatrix = Vec<Vec<u64>>;

fn mulmod(a: u64, b: u64, m: u64) -> u64 {
    ((a as u128 * b as u128) % m as u128) as u64
}

fn lin(x: u64, a: u64, y: u64, b: u64, m: u64) -> u64 {
    ((x as u128 * a as u128 + y as u128 * b as u128) % m as u128) as u64
}

fn neg(a: u64, m: u64) -> u64 {
    (m - a % m) % m
}

/// Reduces a signed integer into `0..m`.
pub fn residue(v: i64, m: u64) -> u64 {
    v.rem_euclid(m as i64) as u64
}

/// `(g, x, y)` with `x·a + y·b = g = gcd(a, b)`.
fn ext_gcd(a: i128, b: i128) -> (i128, i128, i128) {
    if b == 0 {
        (a, 1, 0)
    } else {
        let (g, x, y) = ext_gcd(b, a % b);
        (g, y, x - (a / b) * y)
    }
}

fn to_mod(v: i128, m: u64) -> u64 {
    v.rem_euclid(m as i128) as u64
}

/// Row/column coefficients `(x, y, -b/g, a/g)` of a move sending `(a, b)` to `(g, 0)`.
fn gcd_move(a: u64, b: u64, m: u64) -> (u64, u64, u64, u64) {
    if b % a == 0 {
        return (1, 0, neg((b / a) % m, m), 1);
    }
    let (g, x, y) = ext_gcd(a as i128, b as i128);
    (
        to_mod(x, m),
        to_mod(y, m),
        to_mod(-(b as i128) / g, m),
        to_mod(a as i128 / g, m),
    )
}

/// Rows `p`, `q` ↦ `(x·p + y·q, c·p + d·q)`.
fn combine_rows(
    mat: &mut ModMatrix,
    p: usize,
    q: usize,
    (x, y, c, d): (u64, u64, u64, u64),
    m: u64,
) {
    for j in 0..mat[p].len() {
        let (rp, rq) = (mat[p][j], mat[q][j]);
        mat[p][j] = lin(x, rp, y, rq, m);
        mat[q][j] = lin(c, rp, d, rq, m);
    }
}

fn combine_cols(
    mat: &mut ModMatrix,
    p: usize,
    q: usize,
    (x, y, c, d): (u64, u64, u64, u64),
    m: u64,
) {
    for row in mat.iter_mut() {
        let (cp, cq) = (row[p], row[q]);
        row[p] = lin(x, cp, y, cq, m);
        row[q] = lin(c, cp, d, cq, m);
    }
}

/// Inverse of the 2×2 move `[[x, y], [c, d]]` (determinant 1).
fn inverse_move((x, y, c, d): (u64, u64, u64, u64), m: u64) -> (u64, u64, u64, u64) {
    (d, neg(y, m), neg(c, m), x)
}

fn transpose_move((x, y, c, d): (u64, u64, u64, u64)) -> (u64, u64, u64, u64) {
    (x, c, y, d)
}

pub fn identity(n: usize) -> ModMatrix {
    (0..n)
        .map(|i| (0..n).map(|j| u64::from(i == j)).collect())
        .collect()
}

#[derive(Debug, Clone)]
pub struct ModDiagonal {
    pub modulus: u64,
    /// Nonzero diagonal entries `d_0, …, d_{r-1}` of `U·A·V`.
    pub diag: Vec<u64>,
    pub u: Option<ModMatrix>,
    pub v: Option<ModMatrix>,
    pub v_inv: Option<ModMatrix>,
}

#[derive(Debug, Clone, Copy, Default)]
pub struct Track {
    pub u: bool,
    pub v: bool,
}

/// Diagonalizes `a` (entries already in `0..m`), `rows × cols`.
pub fn diagonalize(a: &ModMatrix, cols: usize, m: u64, track: Track) -> ModDiagonal {
    assert!(m >= 2, "modulus must be at least 2");
    let rows = a.len();
    let mut w: ModMatrix = a
        .iter()
        .map(|r| r.iter().map(|x| x % m).collect())
        .collect();
    let mut u = track.u.then(|| identity(rows));
    let mut v = track.v.then(|| identity(cols));
    let mut v_inv = track.v.then(|| identity(cols));
    let mut diag = Vec::new();
    let mut k = 0;
    while k < rows.min(cols) {
        // Pivot: first nonzero entry scanning columns left to right.
        let Some((pi, pj)) =
            (k..cols).find_map(|j| (k..rows).find(|&i| w[i][j] != 0).map(|i| (i, j)))
        else {
            break;
        };
        if pi != k {
            w.swap(pi, k);
            if let Some(u) = u.as_mut() {
                u.swap(pi, k);
            }
        }
        if pj != k {
            for row in w.iter_mut() {
                row.swap(pj, k);
            }
            if let Some(v) = v.as_mut() {
                for row in v.iter_mut() {
                    row.swap(pj, k);
                }
            }
            if let Some(vi) = v_inv.as_mut() {
                vi.swap(pj, k);
            }
        }
        loop {
            for i in k + 1..rows {
                if w[i][k] != 0 {
                    let mv = gcd_move(w[k][k], w[i][k], m);
                    combine_rows(&mut w, k, i, mv, m);
                    if let Some(u) = u.as_mut() {
                        combine_rows(u, k, i, mv, m);
                    }
                }
            }
            for j in k + 1..cols {
                if w[k][j] != 0 {
                    let mv = gcd_move(w[k][k], w[k][j], m);
                    combine_cols(&mut w, k, j, mv, m);
                    if let Some(v) = v.as_mut() {
                        combine_cols(v, k, j, mv, m);
                    }
                    if let Some(vi) = v_inv.as_mut() {
                        // V ← V·T gives V⁻¹ ← T⁻¹·V⁻¹; T acts on columns as the transpose of a row move.
                        let t_inv = inverse_move(transpose_move(mv), m);
                        combine_rows(vi, k, j, t_inv, m);
                    }
                }
            }
            // The column pass leaves row k clear, so a clean column ends the loop.
            if (k + 1..rows).all(|i| w[i][k] == 0) {
                break;
            }
        }
        diag.push(w[k][k]);
        k += 1;
    }
    ModDiagonal {
        modulus: m,
        diag,
        u,
        v,
        v_inv,
    }
}

pub fn mat_vec(a: &ModMatrix, x: &[u64], m: u64) -> Vec<u64> {
    a.iter()
        .map(|row| {
            row.iter()
                .zip(x)
                .fold(0u64, |acc, (&r, &v)| (acc + mulmod(r, v, m)) % m)
        })
        .collect()
}

/// Some `x` with `a·x ≡ b (mod m)`.
pub fn solve(a: &ModMatrix, cols: usize, b: &[u64], m: u64) -> Option<Vec<u64>> {
    let d = diagonalize(a, cols, m, Track { u: true, v: true });
    let c = mat_vec(d.u.as_ref().expect("tracked"), b, m);
    let mut y = vec![0u64; cols];
    for (i, &di) in d.diag.iter().enumerate() {
        let g = di.gcd(&m);
        if c[i] % g != 0 {
            return None;
        }
        let mg = m / g;
        let inv = if mg == 1 {
            0
        } else {
            inverse_mod(di / g % mg, mg)
        };
        y[i] = mulmod(c[i] / g, inv, mg.max(1)) % m;
    }
    if c[d.diag.len()..].iter().any(|&x| x != 0) {
        return None;
    }
    Some(mat_vec(d.v.as_ref().expect("tracked"), &y, m))
}

fn inverse_mod(a: u64, m: u64) -> u64 {
    let (g, x, _) = ext_gcd(a as i128, m as i128);
    assert_eq!(g, 1, "not a unit");
    to_mod(x, m)
}

/// Orders of the cyclic summands of `coker(a)` (`rows × cols`), trivial ones dropped.
pub fn cokernel_orders(a: &ModMatrix, cols: usize, m: u64) -> Vec<u64> {
    let rows = a.len();
    let d = diagonalize(a, cols, m, Track::default());
    let mut orders: Vec<u64> = d.diag.iter().map(|&x| x.gcd(&m)).collect();
    orders.extend(std::iter::repeat(m).take(rows - d.diag.len()));
    orders.retain(|&o| o > 1);
    invariant_factors(&orders)
}

/// Homology `ker(next) / im(prev)` at a term of rank `dim`.
///
/// `next` is `rows × dim`, `prev` is `dim × prev_cols`.
pub fn homology(
    next: &ModMatrix,
    prev: &ModMatrix,
    dim: usize,
    prev_cols: usize,
    m: u64,
) -> Vec<u64> {
    let d = diagonalize(next, dim, m, Track { u: false, v: true });
    let v_inv = d.v_inv.expect("tracked");
    // Kernel generator i is k_i·V e_i, of order n_i.
    let mut order = vec![m; dim];
    let mut step = vec![1u64; dim];
    for (i, &di) in d.diag.iter().enumerate() {
        order[i] = di.gcd(&m);
        step[i] = m / order[i];
    }
    let gens: Vec<usize> = (0..dim).filter(|&i| order[i] > 1).collect();
    let mut rel: ModMatrix = vec![Vec::with_capacity(prev_cols + gens.len()); gens.len()];
    for j in 0..prev_cols {
        let col: Vec<u64> = (0..dim).map(|i| prev[i][j]).collect();
        let z = mat_vec(&v_inv, &col, m);
        for (r, &i) in gens.iter().enumerate() {
            assert_eq!(
                z[i] % step[i],
                0,
                "image not inside kernel: complex property fails"
            );
            rel[r].push(z[i] / step[i]);
        }
        for (i, zi) in z.iter().enumerate() {
            if order[i] == 1 {
                assert_eq!(
                    zi % step[i],
                    0,
                    "image not inside kernel: complex property fails"
                );
            }
        }
    }
    for (r, &i) in gens.iter().enumerate() {
        for (s, row) in rel.iter_mut().enumerate() {
            row.push(if s == r { order[i] % m } else { 0 });
        }
    }
    let cols = prev_cols + gens.len();
    cokernel_orders(&rel, cols, m)
}

fn prime_powers(mut n: u64) -> Vec<(u64, u32)> {
    let mut out = Vec::new();
    let mut p = 2;
    while p * p <= n {
        let mut e = 0;
        while n % p == 0 {
            n /= p;
            e += 1;
        }
        if e > 0 {
            out.push((p, e));
        }
        p += 1;
    }
    if n > 1 {
        out.push((n, 1));
    }
    out
}

/// Invariant factors `d_1 | d_2 | …` of `⊕ ℤ/o_i`.
pub fn invariant_factors(orders: &[u64]) -> Vec<u64> {
    let mut by_prime: std::collections::BTreeMap<u64, Vec<u32>> = Default::default();
    for &o in orders {
        for (p, e) in prime_powers(o) {
            by_prime.entry(p).or_default().push(e);
        }
    }
    let len = by_prime.values().map(Vec::len).max().unwrap_or(0);
    let mut out = vec![1u64; len];
    for (p, mut es) in by_prime {
        es.sort_unstable_by(|a, b| b.cmp(a));
        for (slot, e) in es.into_iter().enumerate() {
            out[len - 1 - slot] *= p.pow(e);
        }
    }
    out
}
