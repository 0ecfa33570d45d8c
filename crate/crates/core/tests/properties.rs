use proptest::prelude::*;

use schemoid::admissible::is_admissible;
use schemoid::algebra::SchemoidAlgebra;
use schemoid::bridges::{s_tilde, s_tilde_on_functor};
use schemoid::extensions::{bw_differentials, Coefficients, NaturalSystem};
use schemoid::fincat::{as_groupoid, group_category, opposite, preorder, product, FinCategory};
use schemoid::schemoid::check_concatenation;
use schemoid::thicken::{
    category_from_matrix, check_thickening_laws, thicken_scheme, TransitiveMatrix,
};
use schemoid::{hamming, FiniteGroup, Functor, MorphismPartition, QuasiSchemoid, Ring, Schemoid};

fn preorders() -> impl Strategy<Value = FinCategory> {
    (1usize..=4)
        .prop_flat_map(|n| (Just(n), prop::collection::vec((0..n, 0..n), 0..=5)))
        .prop_map(|(n, rel)| preorder(n, &rel))
}

fn group_products() -> impl Strategy<Value = FinCategory> {
    (1usize..=4, 1usize..=3).prop_map(|(a, b)| {
        product(
            &group_category(&FiniteGroup::cyclic(a)),
            &group_category(&FiniteGroup::cyclic(b)),
        )
    })
}

fn transitive_matrices() -> impl Strategy<Value = TransitiveMatrix> {
    (1usize..=3)
        .prop_flat_map(|m| prop::collection::vec(prop::collection::vec(0usize..=2, m), m))
        .prop_filter_map("not transitive", |mut z| {
            for (i, row) in z.iter_mut().enumerate() {
                row[i] += 2;
            }
            TransitiveMatrix::new(z).ok()
        })
}

fn categories() -> impl Strategy<Value = FinCategory> {
    prop_oneof![
        preorders(),
        group_products(),
        transitive_matrices().prop_map(|z| category_from_matrix(&z).unwrap().category().clone()),
    ]
}

/// A quasi-schemoid obtained from a category by a construction known to
/// satisfy the axiom: discrete, or all morphisms of a group in one block.
fn quasi_schemoids() -> impl Strategy<Value = QuasiSchemoid> {
    prop_oneof![
        categories().prop_map(QuasiSchemoid::discrete),
        (1usize..=4).prop_map(|n| {
            let c = group_category(&FiniteGroup::cyclic(n));
            let p = MorphismPartition::by_key(&c, |_| 0, |_| "G".into());
            QuasiSchemoid::new(c, p).unwrap()
        }),
    ]
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(128))]

    #[test]
    fn discrete_partitions_satisfy_the_axiom(c in categories()) {
        let q = QuasiSchemoid::discrete(c.clone());
        prop_assert!(check_concatenation(&c, q.partition()).is_ok());
        prop_assert!(q.is_unital());
    }

    #[test]
    fn products_and_joins_satisfy_the_axiom(a in quasi_schemoids(), b in quasi_schemoids()) {
        let p = a.product(&b);
        prop_assert!(check_concatenation(p.category(), p.partition()).is_ok());
        prop_assert_eq!(p.num_blocks(), a.num_blocks() * b.num_blocks());
        let j = a.join(&b);
        prop_assert!(check_concatenation(j.category(), j.partition()).is_ok());
        let connecting = a.category().num_objects() * b.category().num_objects();
        prop_assert_eq!(j.num_blocks(), a.num_blocks() + b.num_blocks() + connecting);
    }

    #[test]
    fn coboundaries_compose_to_zero(c in categories(), m in 2u64..=6, rank in 1usize..=2) {
        let d = NaturalSystem::trivial(&c, Coefficients::modulo(m).unwrap(), rank).unwrap();
        prop_assert!(bw_differentials(&c, &d).composites_vanish());
    }

    #[test]
    fn admissible_morphisms_compose(n in prop::collection::vec(1usize..=4, 3), picks in prop::collection::vec(0usize..8, 2)) {
        let hom = |a: usize, b: usize, pick: usize| {
            let ks: Vec<usize> = (0..n[b]).filter(|k| (k * n[a]) % n[b] == 0).collect();
            let k = ks[pick % ks.len()];
            Functor { objects: vec![0], morphisms: (0..n[a]).map(|x| (k * x) % n[b]).collect(), contravariant: false }
        };
        let st: Vec<_> = n
            .iter()
            .map(|&k| s_tilde(&as_groupoid(&group_category(&FiniteGroup::cyclic(k))).unwrap()))
            .collect();
        let f = s_tilde_on_functor(&hom(0, 1, picks[0]), &st[0], &st[1]).unwrap();
        let g = s_tilde_on_functor(&hom(1, 2, picks[1]), &st[1], &st[2]).unwrap();
        let (a, b, c) = (&st[0].schemoid.quasi, &st[1].schemoid.quasi, &st[2].schemoid.quasi);
        prop_assert!(is_admissible(&f, a, b).admissible);
        prop_assert!(is_admissible(&g, b, c).admissible);
        prop_assert!(is_admissible(&f.then(&g), a, c).admissible);
    }

    #[test]
    fn category_json_round_trips(c in categories()) {
        let text = serde_json::to_string(&c.to_raw()).unwrap();
        let back = FinCategory::from_raw(&serde_json::from_str(&text).unwrap()).unwrap();
        prop_assert_eq!(&back, &c);
        prop_assert_eq!(serde_json::to_string(&back.to_raw()).unwrap(), text);
    }

    #[test]
    fn schemoid_json_round_trips(q in quasi_schemoids()) {
        let s = Schemoid::from_quasi(q);
        let text = serde_json::to_string(&s.to_raw()).unwrap();
        let back = Schemoid::from_raw(&serde_json::from_str(&text).unwrap()).unwrap();
        prop_assert_eq!(&back.quasi, &s.quasi);
        prop_assert_eq!(serde_json::to_string(&back.to_raw()).unwrap(), text);
    }

    #[test]
    fn opposite_is_an_involution(c in categories()) {
        prop_assert_eq!(opposite(&opposite(&c)), c);
    }

    #[test]
    fn schemoid_algebras_are_associative(q in quasi_schemoids()) {
        let a = SchemoidAlgebra::new(&q, Ring::Rationals);
        prop_assert!(a.associativity_failure().is_none());
    }

    #[test]
    fn framed_categories_have_the_prescribed_hom_counts(z in transitive_matrices()) {
        let f = category_from_matrix(&z).unwrap();
        prop_assert_eq!(f.hom_counts(), z.rows().to_vec());
        prop_assert!(f.factorization_witness().is_none());
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(16))]

    #[test]
    fn thickening_laws_hold_for_any_thickness(z in prop::collection::vec(1usize..=3, 3)) {
        let th = thicken_scheme(&hamming(2, 2).unwrap(), &z).unwrap();
        prop_assert!(check_thickening_laws(&th).is_empty());
        prop_assert!(th.quasi().is_unital());
    }
}
