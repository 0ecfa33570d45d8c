//! One PASS/FAIL line per acceptance criterion; exits non-zero on any failure.

use std::panic::{catch_unwind, AssertUnwindSafe};
use std::process::ExitCode;

use num_traits::{ToPrimitive, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use schemoid::admissible::{
    induced_algebra_map, is_admissible, multiplicities, verify_multiplicity_identity,
};
use schemoid::algebra::{algebra_is_unital, scaled_basis_iso, ScaledIsoOutcome, SchemoidAlgebra};
use schemoid::bridges::{canonical_unit, pair_groupoid, phi_psi_check, r_tilde, s_tilde};
use schemoid::corpus::{self, blow_up, double_arrows, hamming_times_bullet};
use schemoid::extensions::{
    build_extension, bw_cohomology, bw_differentials, extensions_equivalent, is_split,
    lift_schemoid, normalize, Coefficients, ExtensionCategory, NaturalSystem,
};
use schemoid::fincat::{
    as_groupoid, disjoint_union, group_category, preorder, product, terminal, FinCategory,
};
use schemoid::linalg::{self, Ring, Scalar};
use schemoid::schemes::orbit_configuration_generated;
use schemoid::schemoid::{analyze_thinness, check_association, check_concatenation, IsoFailure};
use schemoid::thicken::{check_thickening_laws, projection_phi, thicken_scheme, TransitiveMatrix};
use schemoid::{
    group_scheme, hamming, j_embed, schemoid_isomorphic, AssociationScheme, CoherentConfiguration,
    FiniteGroup, Functor, QuasiSchemoid, SchemoidMorphism,
};

type Outcome = Result<String, String>;

fn ensure(cond: bool, msg: impl Into<String>) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg.into())
    }
}

fn brute_intersection(s: &CoherentConfiguration, e: usize, f: usize, g: usize) -> Option<u64> {
    let n = s.size();
    let mut value = None;
    for x in 0..n {
        for y in 0..n {
            if s.class_of(x, y) != g {
                continue;
            }
            let count = (0..n)
                .filter(|&z| s.class_of(x, z) == e && s.class_of(z, y) == f)
                .count() as u64;
            match value {
                None => value = Some(count),
                Some(v) if v != count => return None,
                _ => {}
            }
        }
    }
    value
}

fn criterion_1() -> Outcome {
    let (z4, _) =
        orbit_configuration_generated(4, &[vec![1, 2, 3, 0]]).map_err(|e| e.to_string())?;
    let schemes = [
        (
            "hamming(2,2)",
            hamming(2, 2).unwrap().configuration().clone(),
        ),
        (
            "group_scheme(Z/3)",
            group_scheme(&FiniteGroup::cyclic(3))
                .configuration()
                .clone(),
        ),
        ("orbits of Z/4", z4),
    ];
    let mut entries = 0;
    for (name, s) in &schemes {
        let j = j_embed(s);
        let r = s.rank();
        for e in 0..r {
            for f in 0..r {
                for g in 0..r {
                    let block = |c: usize| j.block(&s.classes()[c]);
                    let got = j.p(block(e), block(f), block(g));
                    ensure(
                        Some(got) == brute_intersection(s, e, f, g),
                        format!("{name}: p({e},{f},{g})"),
                    )?;
                    entries += 1;
                }
            }
        }
    }
    Ok(format!("{entries} constants matched over 3 schemes"))
}

fn criterion_2() -> Outcome {
    let entries = corpus::entries();
    let mut non_unital = 0;
    for e in &entries {
        let s = e.build();
        let a = SchemoidAlgebra::new(&s.quasi, Ring::Rationals);
        let report = algebra_is_unital(&a, &s.quasi);
        ensure(
            report.agrees(),
            format!("{}: algebra and combinatorial unitality differ", e.name),
        )?;
        ensure(
            report.unital() == s.quasi.is_unital(),
            format!("{}: mismatch", e.name),
        )?;
        if !s.quasi.is_unital() {
            non_unital += 1;
        }
    }
    ensure(
        entries.len() >= 10 && non_unital > 0,
        "corpus too small or all unital",
    )?;
    Ok(format!(
        "{} entries agree, {non_unital} non-unital",
        entries.len()
    ))
}

fn criterion_3() -> Outcome {
    let one = as_groupoid(&terminal()).unwrap();
    let pair = pair_groupoid(2);
    let two_pairs = as_groupoid(&disjoint_union(&pair, &pair)).unwrap();
    let groupoids = [
        ("trivial", one),
        (
            "Z/2",
            as_groupoid(&group_category(&FiniteGroup::cyclic(2))).unwrap(),
        ),
        (
            "Z/3",
            as_groupoid(&group_category(&FiniteGroup::cyclic(3))).unwrap(),
        ),
        ("pair", pair),
        ("two pairs", two_pairs),
    ];
    for (name, g) in &groupoids {
        let (st, rt, unit) = canonical_unit(g).map_err(|e| format!("{name}: {e}"))?;
        unit.check(g, &rt.groupoid)
            .map_err(|e| format!("{name}: unit {e}"))?;
        ensure(
            unit.is_bijective(&rt.groupoid),
            format!("{name}: unit not bijective"),
        )?;
        let again = r_tilde(&st.schemoid).map_err(|e| format!("{name}: {e}"))?;
        ensure(
            again.groupoid == rt.groupoid,
            format!("{name}: R̃ not deterministic"),
        )?;
        let pp = phi_psi_check(&st.schemoid, None).map_err(|e| format!("{name}: {e}"))?;
        ensure(
            pp.phi.then(&pp.psi).functor == Functor::identity(st.schemoid.category()),
            format!("{name}: ΨΦ"),
        )?;
        ensure(
            pp.psi.then(&pp.phi).functor == Functor::identity(pp.target.schemoid.category()),
            format!("{name}: ΦΨ"),
        )?;
    }
    Ok("5 groupoids recovered with witnesses; Φ, Ψ mutually inverse".into())
}

fn criterion_4() -> Outcome {
    let c1 = double_arrows(1);
    let c1_discrete =
        QuasiSchemoid::discrete(as_groupoid(c1.category()).unwrap().category().clone());
    let mut thin_sizes = Vec::new();
    for size in 1..=3 {
        let a = double_arrows(size);
        let (report, _) = analyze_thinness(&a, None);
        ensure(report.semi_thin, format!("|I| = {size} not semi-thin"))?;
        if report.thin {
            thin_sizes.push(size);
        }
        let rt = r_tilde(&a).map_err(|e| e.to_string())?;
        let target = QuasiSchemoid::discrete(rt.groupoid.category().clone());
        schemoid_isomorphic(&target, &c1_discrete).map_err(|e| format!("|I| = {size}: {e}"))?;
    }
    ensure(thin_sizes == vec![2], format!("thin for {thin_sizes:?}"))?;
    Ok("semi-thin for |I| = 1, 2, 3; thin only for 2; R̃(C_I) ≅ C_1".into())
}

fn bar_h1_order(g: &FiniteGroup, m: u64) -> u64 {
    // homomorphisms G → Z/m, by enumeration
    let n = g.order();
    let total = (m as usize).pow(n as u32);
    (0..total)
        .filter(|&idx| {
            let mut i = idx;
            let phi: Vec<u64> = (0..n)
                .map(|_| {
                    let d = (i % m as usize) as u64;
                    i /= m as usize;
                    d
                })
                .collect();
            (0..n).all(|a| (0..n).all(|b| (phi[a] + phi[b]) % m == phi[g.mul(a, b)]))
        })
        .count() as u64
}

fn criterion_5() -> Outcome {
    let point = terminal();
    let systems = [
        NaturalSystem::trivial(&point, Coefficients::modulo(2).unwrap(), 1).unwrap(),
        NaturalSystem::trivial(&point, Coefficients::modulo(3).unwrap(), 2).unwrap(),
        NaturalSystem::trivial(&point, Coefficients::Rationals, 1).unwrap(),
    ];
    for d in &systems {
        let cx = bw_differentials(&point, d);
        ensure(bw_cohomology(&cx, 2).unwrap().is_zero(), "H²(•; D) ≠ 0")?;
    }
    let h2 = |n: usize| {
        let c = group_category(&FiniteGroup::cyclic(n));
        let d = NaturalSystem::trivial(&c, Coefficients::modulo(2).unwrap(), 1).unwrap();
        bw_cohomology(&bw_differentials(&c, &d), 2).unwrap()
    };
    ensure(
        h2(2).invariant_factors == vec![2],
        format!("H²(Z/2; Z/2) = {}", h2(2)),
    )?;
    ensure(h2(3).is_zero(), format!("H²(Z/3; Z/2) = {}", h2(3)))?;
    for n in [2, 3, 4] {
        let g = FiniteGroup::cyclic(n);
        let c = group_category(&g);
        let d = NaturalSystem::trivial(&c, Coefficients::modulo(2).unwrap(), 1).unwrap();
        let h1 = bw_cohomology(&bw_differentials(&c, &d), 1).unwrap();
        ensure(
            h1.order() == Some(bar_h1_order(&g, 2)),
            format!("H¹(Z/{n}; Z/2) differs from the bar complex"),
        )?;
    }
    Ok("H²(•) = 0 for 3 systems; H²(Z/2) = Z/2; H²(Z/3) = 0; H¹ matches the bar complex".into())
}

fn criterion_6() -> Outcome {
    let b = blow_up(true).map_err(|e| e.to_string())?;
    let (base, lifted) = (&b.base, &b.lifted);
    check_concatenation(lifted.category(), lifted.partition()).map_err(|e| e.to_string())?;
    let n = base.num_blocks();
    ensure(lifted.num_blocks() == n, "block count changed")?;
    let mut checked = 0;
    for s in 0..n {
        for t in 0..n {
            for m in 0..n {
                let (lname, bname) = (lifted.partition().name(s), base.partition().name(s));
                ensure(lname == bname, "block order changed")?;
                ensure(
                    lifted.p(s, t, m) == 2 * base.p(s, t, m),
                    format!("p({s},{t},{m})"),
                )?;
                checked += 1;
            }
        }
    }
    check_association(&lifted.quasi, lifted.t()).map_err(|e| e.to_string())?;
    let ext = &b.extension;
    let c = &ext.base;
    let g = as_groupoid(c).unwrap();
    for f in 0..c.num_morphisms() {
        let fi = g.inverse(f);
        let d1 = &ext.cocycle[ext.complex.pair_range(fi, f)];
        let d2 = &ext.cocycle[ext.complex.pair_range(f, fi)];
        // trivial system: both structure maps are identities
        ensure(
            d1 == d2,
            format!("identity fails at {}", c.morphism_name(f)),
        )?;
    }
    Ok(format!(
        "{checked} constants doubled; involution lifts; identity holds on {} morphisms",
        c.num_morphisms()
    ))
}

fn check_section(ext: &ExtensionCategory) -> Result<(), String> {
    let s = is_split(ext).ok_or("no section")?;
    s.functor
        .check(&ext.base, &ext.total)
        .map_err(|e| e.to_string())?;
    ensure(
        s.functor.then(&ext.projection) == Functor::identity(&ext.base),
        "q∘s ≠ 1",
    )
}

fn criterion_7() -> Outcome {
    let j = j_embed(hamming(2, 2).unwrap().configuration());
    let c = j.category().clone();
    let d = NaturalSystem::trivial(&c, Coefficients::modulo(2).unwrap(), 1).unwrap();
    let cx = bw_differentials(&c, &d);
    ensure(
        bw_cohomology(&cx, 2).unwrap().is_zero(),
        "H²(j(H(2,2)); Z/2) ≠ 0",
    )?;
    // random cocycles drawn from the kernel of δ² over F2
    let ring = Ring::Prime(2);
    let d2: Vec<Vec<Scalar>> = cx
        .differential(2)
        .iter()
        .map(|row| row.iter().map(|&v| ring.from_i64(v)).collect())
        .collect();
    let kernel = linalg::nullspace(ring, &d2, cx.dim(2));
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    let samples = 12;
    for _ in 0..samples {
        let mut delta = vec![0i64; cx.dim(2)];
        for v in &kernel {
            if rng.gen_bool(0.5) {
                for (slot, x) in delta.iter_mut().zip(v) {
                    *slot = (*slot + x.to_integer().to_i64().unwrap()) % 2;
                }
            }
        }
        let delta = normalize(&cx, &c, &delta);
        let ext = build_extension(&c, &d, delta).map_err(|e| e.to_string())?;
        check_section(&ext)?;
    }

    let e0 = blow_up(false).map_err(|e| e.to_string())?.extension;
    let e1 = blow_up(true).map_err(|e| e.to_string())?.extension;
    let h2 = bw_cohomology(&e0.complex, 2).unwrap();
    ensure(h2.order() == Some(2), format!("H² over j×(Z/2) = {h2}"))?;
    check_section(&e0)?;
    ensure(is_split(&e1).is_none(), "twisted extension splits")?;
    ensure(
        extensions_equivalent(&e0, &e1)
            .map_err(|e| e.to_string())?
            .is_none(),
        "E0 ≃ E1",
    )?;
    // a cohomologous twist lands in the class of E1
    let mut f_values = vec![0i64; e1.complex.dim(1)];
    for (f, v) in f_values.iter_mut().enumerate() {
        *v = i64::from(!e1.base.is_identity(f) && f % 3 == 0);
    }
    let shifted: Vec<i64> = e1
        .cocycle
        .iter()
        .zip(e1.complex.apply(1, &f_values))
        .map(|(a, b)| (a + b).rem_euclid(2))
        .collect();
    let e1b = build_extension(&e1.base, &e1.system, shifted).map_err(|e| e.to_string())?;
    let eq = extensions_equivalent(&e1, &e1b)
        .map_err(|e| e.to_string())?
        .ok_or("E1 ≄ E1 + δF")?;
    eq.check(&e1.total, &e1b.total).map_err(|e| e.to_string())?;
    Ok(format!(
        "{samples} random cocycles over j(H(2,2)) split; 2 classes over j×(Z/2), one non-split"
    ))
}

/// The trivial `Z/2` extension of `j(H(2,2))` with its projection.
fn hamming_extension() -> Result<(QuasiSchemoid, QuasiSchemoid, SchemoidMorphism), String> {
    let j = j_embed(hamming(2, 2).unwrap().configuration());
    let c = j.category().clone();
    let d = NaturalSystem::trivial(&c, Coefficients::modulo(2).unwrap(), 1).unwrap();
    let cx = bw_differentials(&c, &d);
    let ext = build_extension(&c, &d, vec![0; cx.dim(2)]).map_err(|e| e.to_string())?;
    let lifted = lift_schemoid(&j.quasi, &ext).map_err(|e| e.to_string())?;
    let q = SchemoidMorphism::new(ext.projection.clone(), &lifted, &j.quasi)
        .map_err(|e| e.to_string())?;
    Ok((lifted, j.quasi.clone(), q))
}

fn criterion_8() -> Outcome {
    let (lifted, base, q) = hamming_extension()?;
    let (kq, report) =
        induced_algebra_map(&q, &lifted, &base, Ring::Rationals).map_err(|e| e.to_string())?;
    ensure(report.multiplicative, "K(q) not multiplicative")?;
    ensure(kq.is_isomorphism(), "K(q) not invertible over Q")?;
    for col in 0..kq.cols {
        let nonzero: Vec<usize> = (0..kq.rows())
            .filter(|&r| !kq.matrix[r][col].is_zero())
            .collect();
        ensure(
            nonzero == vec![q.block_image[col]],
            "K(q) is not a scaled basis map",
        )?;
    }
    let (k2, _) =
        induced_algebra_map(&q, &lifted, &base, Ring::Prime(2)).map_err(|e| e.to_string())?;
    ensure(k2.is_zero(), "K(q) over F2 is not zero")?;
    Ok("K(q) scaled-basis iso over Q, zero over F2".into())
}

fn criterion_9() -> Outcome {
    let h = hamming(2, 2).unwrap();
    let j = j_embed(h.configuration());
    let mut cases: Vec<(&str, SchemoidMorphism, QuasiSchemoid, QuasiSchemoid)> = Vec::new();
    cases.push((
        "identity",
        SchemoidMorphism::identity(&j.quasi),
        j.quasi.clone(),
        j.quasi.clone(),
    ));
    let (lifted, base, q) = hamming_extension()?;
    cases.push(("q", q, lifted, base));
    for z in [1, 2] {
        let th = thicken_scheme(&h, &[z; 3]).map_err(|e| e.to_string())?;
        let phi = projection_phi(&th, &j.quasi).map_err(|e| e.to_string())?;
        cases.push((
            if z == 1 { "Φ on SC1" } else { "Φ on SC2" },
            phi,
            th.quasi().clone(),
            j.quasi.clone(),
        ));
    }
    let mut rows = 0;
    for (name, phi, src, tgt) in &cases {
        let n = multiplicities(phi, src, tgt).map_err(|e| format!("{name}: {e}"))?;
        let table = verify_multiplicity_identity(phi, src, tgt, &n);
        ensure(table.holds, format!("{name}: identity fails"))?;
        rows += table.rows.len();
    }
    Ok(format!(
        "identity holds on {rows} block triples across 4 morphisms"
    ))
}

fn criterion_10() -> Outcome {
    let schemes = [
        ("hamming(2,2)", hamming(2, 2).unwrap()),
        ("group_scheme(Z/3)", group_scheme(&FiniteGroup::cyclic(3))),
    ];
    for (name, s) in &schemes {
        let th = thicken_scheme(s, &vec![1; s.rank()]).map_err(|e| e.to_string())?;
        let dim = SchemoidAlgebra::new(th.quasi(), Ring::Rationals).dim();
        ensure(dim == s.rank() + 1, format!("{name}: dim {dim}"))?;
        let j = j_embed(s.configuration());
        let phi = projection_phi(&th, &j.quasi).map_err(|e| e.to_string())?;
        ensure(
            is_admissible(&phi, th.quasi(), &j.quasi).admissible,
            format!("{name}: Φ not admissible"),
        )?;
        let (k, _) = induced_algebra_map(&phi, th.quasi(), &j.quasi, Ring::Rationals)
            .map_err(|e| e.to_string())?;
        let rank = linalg::rank(Ring::Rationals, &k.matrix);
        ensure(rank == s.rank(), format!("{name}: K(Φ) not surjective"))?;
        ensure(rank < dim, format!("{name}: K(Φ) injective"))?;
    }
    Ok("dim K(SC1) = dim A + 1 for both schemes; K(Φ) onto, not injective".into())
}

fn criterion_11() -> Outcome {
    let cases = [
        ("SC2(H(2,2))", hamming(2, 2).unwrap(), 2),
        (
            "SC3(group_scheme(Z/2))",
            group_scheme(&FiniteGroup::cyclic(2)),
            3,
        ),
    ];
    for (name, s, z) in &cases {
        let th = thicken_scheme(s, &vec![*z; s.rank()]).map_err(|e| e.to_string())?;
        let violations = check_thickening_laws(&th);
        ensure(violations.is_empty(), format!("{name}: {violations:?}"))?;
    }
    Ok("laws (i)-(xii) hold on both thickenings".into())
}

fn criterion_12() -> Outcome {
    let e0 = blow_up(false).map_err(|e| e.to_string())?;
    let e1 = blow_up(true).map_err(|e| e.to_string())?;
    let base = hamming_times_bullet();
    let k = |q: &QuasiSchemoid| SchemoidAlgebra::new(q, Ring::Rationals);
    let (k0, k1, kb) = (k(&e0.lifted.quasi), k(&e1.lifted.quasi), k(&base.quasi));
    for (name, a, b) in [
        ("K(E1) ≅ K(E0)", &k1, &k0),
        ("K(E0) ≅ K(j×(Z/2))", &k0, &kb),
    ] {
        match scaled_basis_iso(a, b).map_err(|e| e.to_string())? {
            ScaledIsoOutcome::Found(_) => {}
            other => return Err(format!("{name}: {other:?}")),
        }
    }
    let j = j_embed(hamming(2, 2).unwrap().configuration());
    match schemoid_isomorphic(&e1.lifted.quasi, &j.quasi) {
        Err(IsoFailure::SizeMismatch(why)) => {
            Ok(format!("algebras isomorphic; categories differ ({why})"))
        }
        other => Err(format!("expected a size mismatch, got {other:?}")),
    }
}

fn random_category(rng: &mut ChaCha8Rng) -> FinCategory {
    match rng.gen_range(0..3) {
        0 => {
            let n = rng.gen_range(1..=4);
            let rel: Vec<(usize, usize)> = (0..rng.gen_range(0..=4))
                .map(|_| (rng.gen_range(0..n), rng.gen_range(0..n)))
                .collect();
            preorder(n, &rel)
        }
        1 => {
            let g = group_category(&FiniteGroup::cyclic(rng.gen_range(1..=4)));
            let h = group_category(&FiniteGroup::cyclic(rng.gen_range(1..=2)));
            product(&g, &h)
        }
        _ => loop {
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
            if let Ok(tm) = TransitiveMatrix::new(z) {
                break schemoid::thicken::category_from_matrix(&tm)
                    .unwrap()
                    .category()
                    .clone();
            }
        },
    }
}

fn criterion_13() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(13);
    let mut cases = 0;
    let corpus: Vec<_> = corpus::entries()
        .iter()
        .map(|e| e.build().quasi)
        .filter(|q| q.category().num_morphisms() <= 20)
        .collect();
    for _ in 0..40 {
        let c = random_category(&mut rng);
        let discrete = QuasiSchemoid::discrete(c.clone());
        check_concatenation(&c, discrete.partition()).map_err(|e| e.to_string())?;
        let d = NaturalSystem::trivial(
            &c,
            Coefficients::modulo(rng.gen_range(2..=5)).unwrap(),
            rng.gen_range(1..=2),
        )
        .unwrap();
        ensure(bw_differentials(&c, &d).composites_vanish(), "δδ ≠ 0")?;
        let raw = serde_json::to_string(&c.to_raw()).unwrap();
        let back = FinCategory::from_raw(&serde_json::from_str(&raw).unwrap())
            .map_err(|e| e.to_string())?;
        ensure(
            back == c && serde_json::to_string(&back.to_raw()).unwrap() == raw,
            "category round trip",
        )?;
        cases += 1;
    }
    for _ in 0..30 {
        let a = &corpus[rng.gen_range(0..corpus.len())];
        let b = &corpus[rng.gen_range(0..corpus.len())];
        let p = a.product(b);
        check_concatenation(p.category(), p.partition()).map_err(|e| e.to_string())?;
        let jn = a.join(b);
        check_concatenation(jn.category(), jn.partition()).map_err(|e| e.to_string())?;
        let s = schemoid::Schemoid::from_quasi(p);
        let raw = serde_json::to_string(&s.to_raw()).unwrap();
        let back = schemoid::Schemoid::from_raw(&serde_json::from_str(&raw).unwrap())
            .map_err(|e| e.to_string())?;
        ensure(
            serde_json::to_string(&back.to_raw()).unwrap() == raw,
            "schemoid round trip",
        )?;
        cases += 1;
    }
    for _ in 0..30 {
        // Z/n1 → Z/n2 → Z/n3 by multiplication maps, lifted to pair schemoids
        let n: Vec<usize> = (0..3).map(|_| rng.gen_range(1..=4)).collect();
        let hom = |a: usize, b: usize, rng: &mut ChaCha8Rng| -> Functor {
            let ks: Vec<usize> = (0..n[b]).filter(|k| (k * n[a]) % n[b] == 0).collect();
            let k = ks[rng.gen_range(0..ks.len())];
            Functor {
                objects: vec![0],
                morphisms: (0..n[a]).map(|x| (k * x) % n[b]).collect(),
                contravariant: false,
            }
        };
        let gs: Vec<_> = n
            .iter()
            .map(|&k| as_groupoid(&group_category(&FiniteGroup::cyclic(k))).unwrap())
            .collect();
        let st: Vec<_> = gs.iter().map(s_tilde).collect();
        let (f, g) = (hom(0, 1, &mut rng), hom(1, 2, &mut rng));
        let sf =
            schemoid::bridges::s_tilde_on_functor(&f, &st[0], &st[1]).map_err(|e| e.to_string())?;
        let sg =
            schemoid::bridges::s_tilde_on_functor(&g, &st[1], &st[2]).map_err(|e| e.to_string())?;
        let (a, b, c) = (
            &st[0].schemoid.quasi,
            &st[1].schemoid.quasi,
            &st[2].schemoid.quasi,
        );
        ensure(
            is_admissible(&sf, a, b).admissible && is_admissible(&sg, b, c).admissible,
            "factor not admissible",
        )?;
        ensure(
            is_admissible(&sf.then(&sg), a, c).admissible,
            "composite not admissible",
        )?;
        cases += 1;
    }
    for _ in 0..10 {
        let s = AssociationScheme::trivial(rng.gen_range(1..=4));
        let raw = serde_json::to_string(&s.to_raw()).unwrap();
        let back = CoherentConfiguration::from_raw(&serde_json::from_str(&raw).unwrap())
            .map_err(|e| e.to_string())?;
        ensure(&back == s.configuration(), "scheme round trip")?;
        cases += 1;
    }
    ensure(cases >= 100, "fewer than 100 cases")?;
    Ok(format!("{cases} randomized cases"))
}

type Criterion = (&'static str, fn() -> Outcome);

fn main() -> ExitCode {
    let criteria: [Criterion; 13] = [
        ("j constants equal intersection numbers", criterion_1),
        ("unitality agrees with algebra unitality", criterion_2),
        ("groupoid round trip through pair schemoids", criterion_3),
        (
            "double-arrow schemoids: semi-thin, thin iff two copies",
            criterion_4,
        ),
        ("second cohomology values", criterion_5),
        ("lifted constants scale by |D|", criterion_6),
        ("splitting and extension classes", criterion_7),
        ("K(q) over Q and F2", criterion_8),
        ("multiplicity identity", criterion_9),
        ("thickness-one dimension count and K(Φ)", criterion_10),
        ("thickening constant laws", criterion_11),
        (
            "isomorphic algebras over non-isomorphic categories",
            criterion_12,
        ),
        ("randomized properties", criterion_13),
    ];
    let mut failed = 0;
    for (i, (name, run)) in criteria.iter().enumerate() {
        let outcome = catch_unwind(AssertUnwindSafe(run)).unwrap_or_else(|p| {
            Err(p
                .downcast_ref::<String>()
                .cloned()
                .or_else(|| p.downcast_ref::<&str>().map(|s| s.to_string()))
                .unwrap_or_else(|| "panic".into()))
        });
        match outcome {
            Ok(detail) => println!("PASS {:>2} {name}: {detail}", i + 1),
            Err(why) => {
                failed += 1;
                println!("FAIL {:>2} {name}: {why}", i + 1);
            }
        }
    }
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
