use schemoid::admissible::{is_admissible, multiplicities};
use schemoid::algebra::{terwilliger, SchemoidAlgebra};
use schemoid::corpus::{arrow_schemoid, blow_up, group_bullet, twisted_join};
use schemoid::fincat::{arrow, group_category, join, product, terminal};
use schemoid::schemes::{j_morphism, SchemeMorphism};
use schemoid::schemoid::IsoFailure;
use schemoid::thicken::{
    category_from_matrix, sc_functor, sigma_prime, thicken_involution, thicken_scheme, Residual,
    ThickenError, TransitiveMatrix,
};
use schemoid::{
    group_scheme, hamming, j_embed, schemoid_isomorphic, AssociationScheme, FiniteGroup, Functor,
    QuasiSchemoid, Ring, SchemoidMorphism,
};

#[test]
fn arrow_times_z2_has_six_morphisms() {
    let c = product(&arrow(), &group_category(&FiniteGroup::cyclic(2)));
    assert_eq!((c.num_objects(), c.num_morphisms()), (2, 6));
}

#[test]
fn join_of_points_is_the_arrow() {
    let j = join(&terminal(), &terminal());
    let a = QuasiSchemoid::discrete(arrow());
    schemoid_isomorphic(&QuasiSchemoid::discrete(j), &a).unwrap();
}

#[test]
fn twisted_join_differs_from_the_join_of_bullets() {
    let g = FiniteGroup::cyclic(2);
    let twisted = twisted_join(&g);
    let bullet = group_bullet(&g);
    let plain = bullet.quasi.join(&bullet.quasi);
    assert_eq!(
        twisted.category().num_morphisms(),
        plain.category().num_morphisms()
    );
    assert!(schemoid_isomorphic(&plain, &twisted.quasi).is_err());
}

#[test]
fn arrow_schemoid_is_unital_but_not_basic() {
    for fine in [false, true] {
        let a = arrow_schemoid(fine);
        assert!(a.is_unital());
        assert!(!a.is_basic());
    }
}

#[test]
fn twisted_blow_up_composes_like_the_carry_law() {
    let b = blow_up(true).unwrap();
    let ext = &b.extension;
    let e = &ext.total;
    for (u, v, uv) in e.composable_pairs() {
        let (f, a1) = ext.element(u);
        let (g, b1) = ext.element(v);
        let (fg, c1) = ext.element(uv);
        assert_eq!(ext.base.compose(f, g), Some(fg));
        // group parts are the index mod 2 of a product morphism
        let carry = u64::from(f % 2 == 1 && g % 2 == 1);
        assert_eq!(c1[0], (carry + a1[0] + b1[0]) % 2);
    }
}

#[test]
fn split_blow_up_has_no_carry() {
    let b = blow_up(false).unwrap();
    let ext = &b.extension;
    for (u, v, uv) in ext.total.composable_pairs() {
        let (a, b1, c) = (
            ext.element(u).1[0],
            ext.element(v).1[0],
            ext.element(uv).1[0],
        );
        assert_eq!(c, (a + b1) % 2);
    }
}

#[test]
fn sigma_prime_without_residual() {
    let f = category_from_matrix(&TransitiveMatrix::new(vec![vec![2, 1], vec![1, 2]]).unwrap())
        .unwrap();
    let q = sigma_prime(&f, &Residual::Lump).unwrap();
    // identities plus one singleton per frame element
    assert_eq!(q.num_blocks(), 1 + 4);
    assert!(q.is_unital());
}

#[test]
fn sc_functor_is_functorial_and_respects_identity() {
    let h = hamming(2, 2).unwrap();
    let two = AssociationScheme::trivial(2);
    let one = AssociationScheme::trivial(1);
    let th: Vec<_> = [&h, &two, &one]
        .iter()
        .map(|s| thicken_scheme(s, &vec![2; s.rank()]).unwrap())
        .collect();

    let id = SchemeMorphism::identity(h.configuration());
    let sid = sc_functor(&id, &th[0], &th[0]).unwrap();
    assert_eq!(sid, SchemoidMorphism::identity(th[0].quasi()));

    // antipodal classes: words at distance 2 go to the same point
    let f = SchemeMorphism::new(vec![0, 1, 1, 0], h.configuration(), two.configuration()).unwrap();
    let g = SchemeMorphism::new(vec![0, 0], two.configuration(), one.configuration()).unwrap();
    let sf = sc_functor(&f, &th[0], &th[1]).unwrap();
    let sg = sc_functor(&g, &th[1], &th[2]).unwrap();
    let sgf = sc_functor(&f.then(&g), &th[0], &th[2]).unwrap();
    assert_eq!(sf.then(&sg), sgf);
}

#[test]
fn relabelled_schemes_give_isomorphic_thickenings() {
    let h = hamming(2, 2).unwrap();
    let perm = vec![3, 1, 2, 0];
    let f = SchemeMorphism::new(perm, h.configuration(), h.configuration()).unwrap();
    let th = thicken_scheme(&h, &[1, 1, 1]).unwrap();
    let m = sc_functor(&f, &th, &th).unwrap();
    assert!(m.functor.is_bijective(th.framed().category()));
    let other = thicken_scheme(
        &group_scheme(&FiniteGroup::cyclic(2).direct_product(&FiniteGroup::cyclic(2))),
        &[1, 1, 1, 1],
    )
    .unwrap();
    assert!(matches!(
        schemoid_isomorphic(th.quasi(), other.quasi()),
        Err(IsoFailure::SizeMismatch(_) | IsoFailure::InvariantMismatch(_) | IsoFailure::Exhausted)
    ));
}

#[test]
fn unequal_thickness_still_yields_a_quasi_schemoid() {
    let h = hamming(1, 2).unwrap();
    let th = thicken_scheme(&h, &[1, 2]).unwrap();
    assert!(th.quasi().is_unital());
    assert!(matches!(
        thicken_involution(&th),
        Err(ThickenError::UnequalThickness)
    ));
}

#[test]
fn collapsing_a_scheme_to_a_point_is_admissible() {
    let h = hamming(2, 2).unwrap();
    let one = AssociationScheme::trivial(1);
    let (jh, jp) = (j_embed(h.configuration()), j_embed(one.configuration()));
    let f = SchemeMorphism::new(vec![0; 4], h.configuration(), one.configuration()).unwrap();
    let m = j_morphism(&f, &jh, &jp);
    assert!(is_admissible(&m, &jh.quasi, &jp.quasi).admissible);
    // multiplicities are the valencies 1, 2, 1
    let n = multiplicities(&m, &jh.quasi, &jp.quasi).unwrap();
    let by_name: Vec<usize> = ["R0", "R1", "R2"].iter().map(|c| n[jh.block(c)]).collect();
    assert_eq!(by_name, vec![1, 2, 1]);
}

#[test]
fn hamming_terwilliger_dimension() {
    let j = j_embed(hamming(2, 2).unwrap().configuration());
    let t = terwilliger(&j.quasi, 0, Ring::Rationals).unwrap();
    // for H(2,2) the Terwilliger algebra is 10-dimensional over Q
    assert_eq!(t.dim(), 10);
    assert_eq!(SchemoidAlgebra::new(&j.quasi, Ring::Rationals).dim(), 3);
}

#[test]
fn inverse_functor_on_double_arrows() {
    let a = schemoid::corpus::double_arrows(2);
    let t: &Functor = a.t();
    assert!(t.contravariant);
    assert_eq!(t.objects, (0..4).collect::<Vec<_>>());
}
