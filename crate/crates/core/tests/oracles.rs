//! Library results checked against brute-force recomputations.

#![allow(clippy::needless_range_loop)]

use std::collections::HashSet;

use schemoid::admissible::check_unique_solutions;
use schemoid::extensions::{
    build_extension, bw_cohomology, bw_differentials, is_split, Coefficients, NaturalSystem,
};
use schemoid::fincat::group_category;
use schemoid::schemes::orbit_configuration_generated;
use schemoid::thicken::{
    category_from_matrix, sigma_prime, thicken_scheme, Residual, TransitiveMatrix,
};
use schemoid::{group_scheme, hamming, j_embed, CoherentConfiguration, FiniteGroup, Functor};

/// `p^g_{ef} = #{z : (x, z) ∈ e, (z, y) ∈ f}` for a fixed `(x, y) ∈ g`, or
/// `None` when the count depends on the chosen pair.
fn intersection_numbers(s: &CoherentConfiguration) -> Vec<Vec<Vec<Option<u64>>>> {
    let (n, r) = (s.size(), s.rank());
    let mut out = vec![vec![vec![None; r]; r]; r];
    let mut seen = vec![vec![vec![false; r]; r]; r];
    for x in 0..n {
        for y in 0..n {
            let g = s.class_of(x, y);
            for e in 0..r {
                for f in 0..r {
                    let count = (0..n)
                        .filter(|&z| s.class_of(x, z) == e && s.class_of(z, y) == f)
                        .count() as u64;
                    if !seen[e][f][g] {
                        seen[e][f][g] = true;
                        out[e][f][g] = Some(count);
                    } else if out[e][f][g] != Some(count) {
                        out[e][f][g] = None;
                    }
                }
            }
        }
    }
    out
}

fn assert_j_constants_match(s: &CoherentConfiguration) {
    let oracle = intersection_numbers(s);
    let j = j_embed(s);
    for e in 0..s.rank() {
        for f in 0..s.rank() {
            for g in 0..s.rank() {
                let (be, bf, bg) = (
                    j.block(&s.classes()[e]),
                    j.block(&s.classes()[f]),
                    j.block(&s.classes()[g]),
                );
                assert_eq!(
                    Some(j.p(be, bf, bg)),
                    oracle[e][f][g],
                    "classes {e} {f} {g}"
                );
            }
        }
    }
}

#[test]
fn j_constants_are_intersection_numbers() {
    assert_j_constants_match(hamming(2, 2).unwrap().configuration());
    assert_j_constants_match(hamming(3, 2).unwrap().configuration());
    assert_j_constants_match(group_scheme(&FiniteGroup::cyclic(3)).configuration());
    let (z4, transitive) = orbit_configuration_generated(4, &[vec![1, 2, 3, 0]]).unwrap();
    assert!(transitive);
    assert_j_constants_match(&z4);
}

/// Orders of `H¹` and `H²` of the inhomogeneous bar complex of `G` with trivial
/// `Z/m` coefficients, by enumerating every cochain.
struct BarOrders {
    h1: u64,
    h2: u64,
}

fn bar_complex(g: &FiniteGroup, m: u64) -> BarOrders {
    let n = g.order();
    let all_functions = |len: usize| -> Vec<Vec<u64>> {
        let total = (m as usize).pow(len as u32);
        (0..total)
            .map(|mut i| {
                (0..len)
                    .map(|_| {
                        let d = (i % m as usize) as u64;
                        i /= m as usize;
                        d
                    })
                    .collect()
            })
            .collect()
    };
    // degree one: a 1-cochain is closed iff it is a homomorphism; B¹ = 0 for trivial action
    let h1 = all_functions(n)
        .iter()
        .filter(|phi| (0..n).all(|a| (0..n).all(|b| (phi[a] + phi[b]) % m == phi[g.mul(a, b)])))
        .count() as u64;
    let d1 = |phi: &[u64]| -> Vec<u64> {
        let mut out = vec![0; n * n];
        for a in 0..n {
            for b in 0..n {
                out[a * n + b] = (phi[b] + phi[a] + m - phi[g.mul(a, b)]) % m;
            }
        }
        out
    };
    let boundaries: HashSet<Vec<u64>> = all_functions(n).iter().map(|p| d1(p)).collect();
    let cocycles = all_functions(n * n)
        .into_iter()
        .filter(|c| {
            (0..n).all(|a| {
                (0..n).all(|b| {
                    (0..n).all(|x| {
                        let lhs = (c[b * n + x] + c[a * n + g.mul(b, x)]) % m;
                        let rhs = (c[g.mul(a, b) * n + x] + c[a * n + b]) % m;
                        lhs == rhs
                    })
                })
            })
        })
        .count() as u64;
    BarOrders {
        h1,
        h2: cocycles / boundaries.len() as u64,
    }
}

#[test]
fn one_object_cohomology_matches_the_bar_complex() {
    let klein = FiniteGroup::cyclic(2).direct_product(&FiniteGroup::cyclic(2));
    let cases = [
        (FiniteGroup::cyclic(1), 2),
        (FiniteGroup::cyclic(2), 2),
        (FiniteGroup::cyclic(3), 2),
        (FiniteGroup::cyclic(3), 3),
        (FiniteGroup::cyclic(4), 2),
        (klein, 2),
    ];
    for (g, m) in cases {
        let c = group_category(&g);
        let d = NaturalSystem::trivial(&c, Coefficients::modulo(m).unwrap(), 1).unwrap();
        let cx = bw_differentials(&c, &d);
        let oracle = bar_complex(&g, m);
        let h1 = bw_cohomology(&cx, 1).unwrap();
        let h2 = bw_cohomology(&cx, 2).unwrap();
        assert_eq!(
            h1.order(),
            Some(oracle.h1),
            "H1 of order {} group mod {m}",
            g.order()
        );
        assert_eq!(
            h2.order(),
            Some(oracle.h2),
            "H2 of order {} group mod {m}",
            g.order()
        );
    }
}

/// Every functor `s: C → E` with `q∘s = 1`, found by trying all choices.
fn brute_force_sections(ext: &schemoid::ExtensionCategory) -> usize {
    let c = &ext.base;
    let fibers: Vec<Vec<usize>> = (0..c.num_morphisms())
        .map(|f| ext.fiber(f).collect())
        .collect();
    let total: usize = fibers.iter().map(|f| f.len()).product();
    (0..total)
        .filter(|&idx| {
            let mut i = idx;
            let morphisms = fibers
                .iter()
                .map(|fib| {
                    let e = fib[i % fib.len()];
                    i /= fib.len();
                    e
                })
                .collect();
            let s = Functor {
                objects: (0..c.num_objects()).collect(),
                morphisms,
                contravariant: false,
            };
            s.check(c, &ext.total).is_ok()
        })
        .count()
}

#[test]
fn split_detection_agrees_with_section_search() {
    for n in [2usize, 3] {
        let c = group_category(&FiniteGroup::cyclic(n));
        let d = NaturalSystem::trivial(&c, Coefficients::modulo(n as u64).unwrap(), 1).unwrap();
        let cx = bw_differentials(&c, &d);
        // carry cocycle of Z/n -> Z/n², twisted or not
        for twisted in [false, true] {
            let cocycle = cx.cochain2_from_fn(|f, g| vec![i64::from(twisted && f + g >= n)]);
            let ext = build_extension(&c, &d, cocycle).unwrap();
            let sections = brute_force_sections(&ext);
            assert_eq!(
                is_split(&ext).is_some(),
                sections > 0,
                "Z/{n}, twisted {twisted}"
            );
            assert_eq!(sections > 0, !twisted);
        }
    }
}

#[test]
fn smallest_matrix_breaking_unique_solutions() {
    let first = (2..=6)
        .find(|&z| {
            let framed =
                category_from_matrix(&TransitiveMatrix::new(vec![vec![z]]).unwrap()).unwrap();
            let q = sigma_prime(&framed, &Residual::Lump).unwrap();
            check_unique_solutions(&q).is_err()
        })
        .unwrap();
    assert_eq!(first, 4);
}

#[test]
fn thickenings_keep_unique_solutions_for_small_thickness() {
    let h = hamming(2, 2).unwrap();
    for z in [1, 2] {
        let th = thicken_scheme(&h, &[z; 3]).unwrap();
        assert!(check_unique_solutions(th.quasi()).is_ok(), "z = {z}");
    }
}

#[test]
fn hom_counts_reproduce_random_transitive_matrices() {
    use rand::{Rng, SeedableRng};
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(7);
    let mut tried = 0;
    while tried < 30 {
        let m = rng.gen_range(1..=3);
        let z: Vec<Vec<usize>> = (0..m)
            .map(|i| {
                (0..m)
                    .map(|j| {
                        if i == j {
                            rng.gen_range(2..=3)
                        } else {
                            rng.gen_range(0..=2)
                        }
                    })
                    .collect()
            })
            .collect();
        let Ok(tm) = TransitiveMatrix::new(z.clone()) else {
            continue;
        };
        tried += 1;
        let framed = category_from_matrix(&tm).unwrap();
        assert_eq!(framed.hom_counts(), z);
        assert!(framed.factorization_witness().is_none());
    }
}
