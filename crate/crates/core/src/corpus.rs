//! Named example schemoids with hand-computed expectations.

use std::fmt;

use crate::algebra::{algebra_is_unital, SchemoidAlgebra};
use crate::bridges::s_tilde;
use crate::extensions::{
    build_extension, bw_differentials, lift_involution, lift_schemoid, Coefficients,
    ExtensionCategory, ExtensionError, NaturalSystem,
};
use crate::fincat::{as_groupoid, Groupoid};
use crate::fincat::{group_category, CategoryBuilder, FinCategory, Functor};
use crate::group::FiniteGroup;
use crate::linalg::Ring;
use crate::schemes::{hamming, j_embed, AssociationScheme};
use crate::schemoid::{
    analyze_thinness, AssociationSchemoid, MorphismPartition, QuasiSchemoid, Schemoid,
};
use crate::thicken::{thicken_involution, thicken_scheme};

/// Where an entry's expectations come from.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Origin {
    /// A standard worked example, reproduced as stated.
    Worked,
    /// Built from other entries by a library construction.
    Derived,
    /// A boundary or smallest case.
    Boundary,
}

impl fmt::Display for Origin {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Origin::Worked => "worked",
            Origin::Derived => "derived",
            Origin::Boundary => "boundary",
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Expectations {
    pub objects: usize,
    pub morphisms: usize,
    pub blocks: usize,
    pub unital: bool,
    pub groupoid: bool,
    pub association: bool,
    pub semi_thin: Option<bool>,
    pub thin: Option<bool>,
}

#[derive(Debug, Clone)]
pub struct CorpusEntry {
    pub name: &'static str,
    pub summary: &'static str,
    pub origin: Origin,
    pub expect: Expectations,
    build: fn() -> Schemoid,
}

impl CorpusEntry {
    pub fn build(&self) -> Schemoid {
        (self.build)()
    }

    /// Rebuilds the entry and lists every expectation it misses.
    pub fn verify(&self) -> Vec<String> {
        let s = self.build();
        let q = &s.quasi;
        let c = q.category();
        let e = &self.expect;
        let mut out = Vec::new();
        fn check(out: &mut Vec<String>, what: &str, want: impl ToString, got: impl ToString) {
            let (want, got) = (want.to_string(), got.to_string());
            if want != got {
                out.push(format!("{what}: expected {want}, got {got}"));
            }
        }
        check(&mut out, "objects", e.objects, c.num_objects());
        check(&mut out, "morphisms", e.morphisms, c.num_morphisms());
        check(&mut out, "blocks", e.blocks, q.num_blocks());
        check(&mut out, "unital", e.unital, q.is_unital());
        check(&mut out, "groupoid", e.groupoid, c.is_groupoid());
        check(
            &mut out,
            "association",
            e.association,
            s.involution.is_some(),
        );
        let alg = SchemoidAlgebra::new(q, Ring::Rationals);
        let u = algebra_is_unital(&alg, q);
        if !u.agrees() {
            out.push("algebra unitality disagrees with the combinatorial test".into());
        }
        if e.semi_thin.is_some() || e.thin.is_some() {
            match s.association() {
                Some(a) => {
                    let (r, _) = analyze_thinness(&a, None);
                    if let Some(v) = e.semi_thin {
                        check(&mut out, "semi_thin", v, r.semi_thin);
                    }
                    if let Some(v) = e.thin {
                        check(&mut out, "thin", v, r.thin);
                    }
                }
                None => out.push("thinness expected but no involution".into()),
            }
        }
        out
    }
}

fn exp(
    objects: usize,
    morphisms: usize,
    blocks: usize,
    unital: bool,
    groupoid: bool,
    association: bool,
) -> Expectations {
    Expectations {
        objects,
        morphisms,
        blocks,
        unital,
        groupoid,
        association,
        semi_thin: None,
        thin: None,
    }
}

fn thin(mut e: Expectations, semi_thin: bool, thin: bool) -> Expectations {
    e.semi_thin = Some(semi_thin);
    e.thin = Some(thin);
    e
}

pub fn entries() -> Vec<CorpusEntry> {
    let entry = |name, summary, origin, expect, build| CorpusEntry {
        name,
        summary,
        origin,
        expect,
        build,
    };
    vec![
        entry(
            "group_ring_z3",
            "Z/3 as a one-object groupoid, singleton blocks, T = inverse",
            Origin::Worked,
            exp(1, 3, 3, true, true, true),
            || Schemoid::from_association(group_ring(&FiniteGroup::cyclic(3))),
        ),
        entry(
            "hamming_2_2",
            "complete-graph schemoid of the Hamming scheme H(2,2)",
            Origin::Worked,
            exp(4, 16, 3, true, true, true),
            || Schemoid::from_association(j_embed(hamming(2, 2).expect("small").configuration())),
        ),
        entry(
            "pair_scheme_z2",
            "the pair schemoid of Z/2 viewed as a groupoid",
            Origin::Worked,
            exp(2, 4, 2, true, true, true),
            || Schemoid::from_association(s_tilde(&group_groupoid(2)).schemoid),
        ),
        entry(
            "group_bullet_z2",
            "Z/2 with the single block {G} and T = inverse",
            Origin::Worked,
            exp(1, 2, 1, false, true, true),
            || Schemoid::from_association(group_bullet(&FiniteGroup::cyclic(2))),
        ),
        entry(
            "arrow",
            "x -> y with blocks {1_x, 1_y} and {f}",
            Origin::Worked,
            exp(2, 3, 2, true, false, true),
            || Schemoid::from_association(arrow_schemoid(false)),
        ),
        entry(
            "arrow_fine",
            "x -> y with blocks {1_x}, {1_y} and {f}",
            Origin::Worked,
            exp(2, 3, 3, true, false, true),
            || Schemoid::from_association(arrow_schemoid(true)),
        ),
        entry(
            "join_group_bullets",
            "join of two copies of the Z/2 bullet schemoid",
            Origin::Derived,
            exp(2, 5, 3, false, false, false),
            || {
                let g = group_bullet(&FiniteGroup::cyclic(2));
                Schemoid::from_quasi(g.quasi.join(&g.quasi))
            },
        ),
        entry(
            "join_twisted_z2",
            "G * G^op for G = Z/2 with blocks {g, g^op} and {f}",
            Origin::Worked,
            exp(2, 5, 3, true, false, true),
            || Schemoid::from_association(twisted_join(&FiniteGroup::cyclic(2))),
        ),
        entry(
            "zigzag_window_1",
            "zigzag category on x_-1..x_1, y_-1..y_1 (finite window of an infinite category)",
            Origin::Worked,
            exp(6, 13, 3, true, false, true),
            || Schemoid::from_association(zigzag_window(1)),
        ),
        entry(
            "diamond_fan_2",
            "two commuting squares through x and y sharing the diagonal",
            Origin::Worked,
            exp(6, 15, 4, true, false, true),
            || Schemoid::from_association(diamond_fan(2)),
        ),
        entry(
            "diamond_times_z2",
            "one commuting square times the Z/2 bullet schemoid",
            Origin::Derived,
            exp(4, 18, 4, false, false, true),
            || {
                Schemoid::from_association(
                    diamond_fan(1).product(&group_bullet(&FiniteGroup::cyclic(2))),
                )
            },
        ),
        entry(
            "hamming_times_z2",
            "H(2,2) complete-graph schemoid times the Z/2 bullet schemoid",
            Origin::Derived,
            exp(4, 32, 3, false, true, true),
            || Schemoid::from_association(hamming_times_bullet()),
        ),
        entry(
            "double_arrow_1",
            "one copy of the two-object connected groupoid, blocks by source",
            Origin::Boundary,
            thin(exp(2, 4, 4, true, true, true), true, false),
            || Schemoid::from_association(double_arrows(1)),
        ),
        entry(
            "double_arrow_2",
            "two copies of the two-object connected groupoid",
            Origin::Worked,
            thin(exp(4, 8, 4, true, true, true), true, true),
            || Schemoid::from_association(double_arrows(2)),
        ),
        entry(
            "double_arrow_3",
            "three copies of the two-object connected groupoid",
            Origin::Worked,
            thin(exp(6, 12, 4, true, true, true), true, false),
            || Schemoid::from_association(double_arrows(3)),
        ),
        entry(
            "blow_up_split",
            "trivial Z/2 extension of hamming_times_z2, lifted",
            Origin::Derived,
            exp(4, 64, 3, false, true, true),
            || Schemoid::from_association(blow_up(false).expect("valid extension").lifted),
        ),
        entry(
            "blow_up_twisted",
            "non-split Z/2 extension of hamming_times_z2, lifted",
            Origin::Derived,
            exp(4, 64, 3, false, true, true),
            || Schemoid::from_association(blow_up(true).expect("valid extension").lifted),
        ),
        entry(
            "thick_hamming_1",
            "thickening of H(2,2) with every class of thickness 1",
            Origin::Worked,
            exp(4, 20, 4, true, false, true),
            || Schemoid::from_association(thick(&hamming(2, 2).expect("small"), 1)),
        ),
        entry(
            "thick_hamming_2",
            "thickening of H(2,2) with every class of thickness 2",
            Origin::Derived,
            exp(4, 36, 7, true, false, true),
            || Schemoid::from_association(thick(&hamming(2, 2).expect("small"), 2)),
        ),
    ]
}

pub fn lookup(name: &str) -> Option<CorpusEntry> {
    entries().into_iter().find(|e| e.name == name)
}

fn inverse_functor(c: &FinCategory, g: &Groupoid, objects: Vec<usize>) -> Functor {
    Functor {
        objects,
        morphisms: (0..c.num_morphisms()).map(|f| g.inverse(f)).collect(),
        contravariant: true,
    }
}

pub fn group_groupoid(n: usize) -> Groupoid {
    Groupoid::from_group(&FiniteGroup::cyclic(n))
}

/// `(G, {{g}}, g ↦ g⁻¹)`, whose algebra is the group ring.
pub fn group_ring(g: &FiniteGroup) -> AssociationSchemoid {
    let c = group_category(g);
    let gr = as_groupoid(&c).expect("groups are groupoids");
    let t = inverse_functor(&c, &gr, vec![0]);
    AssociationSchemoid::new(QuasiSchemoid::discrete(c), &t).expect("group ring schemoid")
}

/// `G^• = (G, {G}, g ↦ g⁻¹)`.
pub fn group_bullet(g: &FiniteGroup) -> AssociationSchemoid {
    let c = group_category(g);
    let gr = as_groupoid(&c).expect("groups are groupoids");
    let t = inverse_functor(&c, &gr, vec![0]);
    let p = MorphismPartition::by_key(&c, |_| 0, |_| "G".to_string());
    AssociationSchemoid::new(QuasiSchemoid::new(c, p).expect("one block"), &t)
        .expect("bullet schemoid")
}

/// `x → y` with `T` swapping the objects; `fine` splits the identities.
pub fn arrow_schemoid(fine: bool) -> AssociationSchemoid {
    let c = crate::fincat::arrow();
    let (x, y) = (0, 1);
    let f = (0..c.num_morphisms())
        .find(|&m| !c.is_identity(m))
        .expect("one arrow");
    let (ix, iy) = (c.identity(x), c.identity(y));
    let (names, blocks) = if fine {
        (
            vec!["S1'".into(), "S2'".into(), "S3'".into()],
            vec![vec![ix], vec![iy], vec![f]],
        )
    } else {
        (vec!["S1".into(), "S2".into()], vec![vec![ix, iy], vec![f]])
    };
    let p = MorphismPartition::new(&c, names, blocks).expect("partition");
    let mut morphisms = vec![0; 3];
    morphisms[ix] = iy;
    morphisms[iy] = ix;
    morphisms[f] = f;
    let t = Functor {
        objects: vec![y, x],
        morphisms,
        contravariant: true,
    };
    AssociationSchemoid::new(QuasiSchemoid::new(c, p).expect("axiom"), &t).expect("involution")
}

/// `G ∗ G^op` with blocks `{g, g^op}` and `{f}`, `T` swapping the two objects.
pub fn twisted_join(g: &FiniteGroup) -> AssociationSchemoid {
    let n = g.order();
    let left = |a: usize| g.name(a).to_string();
    let right = |a: usize| format!("{}'", g.name(a));
    let mut b = CategoryBuilder::new();
    b.object("x").object("y");
    b.identity("x", left(g.identity()))
        .identity("y", right(g.identity()));
    for a in (0..n).filter(|&a| a != g.identity()) {
        b.morphism(left(a), "x", "x").morphism(right(a), "y", "y");
    }
    b.morphism("f", "x", "y");
    for a in 0..n {
        for c in 0..n {
            b.compose(left(a), left(c), left(g.mul(a, c)));
            // a' ∘ c' = (c a)'
            b.compose(right(a), right(c), right(g.mul(c, a)));
        }
        b.compose("f", left(a), "f").compose(right(a), "f", "f");
    }
    let c = b.build().expect("join category");
    let id = |s: &str| c.morphism_id(s).expect("declared");
    let mut names = Vec::new();
    let mut blocks = Vec::new();
    for a in 0..n {
        names.push(format!("S_{}", g.name(a)));
        blocks.push(vec![id(&left(a)), id(&right(a))]);
    }
    names.push("S_f".into());
    blocks.push(vec![id("f")]);
    let p = MorphismPartition::new(&c, names, blocks).expect("partition");
    let mut morphisms = vec![0; c.num_morphisms()];
    for a in 0..n {
        morphisms[id(&left(a))] = id(&right(a));
        morphisms[id(&right(a))] = id(&left(a));
    }
    morphisms[id("f")] = id("f");
    let t = Functor {
        objects: vec![1, 0],
        morphisms,
        contravariant: true,
    };
    AssociationSchemoid::new(QuasiSchemoid::new(c, p).expect("axiom"), &t).expect("involution")
}

/// Objects `x_i, y_i` for `|i| ≤ k` with `f_i: x_i → y_i`, `g_i: x_i → y_{i+1}`
/// and `h_i: x_{i+1} → y_i`; blocks `J0`, `sigma = {g, h}`, `tau = {f}`.
pub fn zigzag_window(k: i64) -> AssociationSchemoid {
    let range = -k..=k;
    let mut b = CategoryBuilder::new();
    for i in range.clone() {
        b.object_with_identity(format!("x{i}"));
        b.object_with_identity(format!("y{i}"));
        b.morphism(format!("f{i}"), format!("x{i}"), format!("y{i}"));
    }
    for i in -k..k {
        b.morphism(format!("g{i}"), format!("x{i}"), format!("y{}", i + 1));
        b.morphism(format!("h{i}"), format!("x{}", i + 1), format!("y{i}"));
    }
    let c = b.build().expect("no composites beyond identities");
    let part = MorphismPartition::by_key(
        &c,
        |m| match c.morphism_name(m).as_bytes()[0] {
            b'1' => 0,
            b'g' | b'h' => 1,
            _ => 2,
        },
        |key| ["J0", "sigma", "tau"][*key].to_string(),
    );
    let obj = |s: String| c.object_id(&s).expect("declared");
    let mor = |s: String| c.morphism_id(&s).expect("declared");
    let objects = (0..c.num_objects())
        .map(|o| {
            let name = c.object_name(o);
            let swapped = match &name[..1] {
                "x" => format!("y{}", &name[1..]),
                _ => format!("x{}", &name[1..]),
            };
            obj(swapped)
        })
        .collect::<Vec<_>>();
    let morphisms = (0..c.num_morphisms())
        .map(|m| {
            let name = c.morphism_name(m);
            if c.is_identity(m) {
                c.identity(objects[c.src(m)])
            } else {
                let tail = &name[1..];
                match &name[..1] {
                    "g" => mor(format!("h{tail}")),
                    "h" => mor(format!("g{tail}")),
                    _ => m,
                }
            }
        })
        .collect();
    let t = Functor {
        objects,
        morphisms,
        contravariant: true,
    };
    AssociationSchemoid::new(QuasiSchemoid::new(c, part).expect("axiom"), &t).expect("involution")
}

/// `k` commuting squares `β_l α_l = ε = δ_l γ_l` from `x` to `y`.
pub fn diamond_fan(k: usize) -> AssociationSchemoid {
    let mut b = CategoryBuilder::new();
    b.object_with_identity("x").object_with_identity("y");
    b.morphism("eps", "x", "y");
    for l in 1..=k {
        let (a, bb) = (format!("a{l}"), format!("b{l}"));
        b.object_with_identity(a.clone())
            .object_with_identity(bb.clone());
        b.morphism(format!("alpha{l}"), "x", a.clone())
            .morphism(format!("beta{l}"), a, "y")
            .morphism(format!("gamma{l}"), "x", bb.clone())
            .morphism(format!("delta{l}"), bb, "y");
        b.compose(format!("beta{l}"), format!("alpha{l}"), "eps")
            .compose(format!("delta{l}"), format!("gamma{l}"), "eps");
    }
    let c = b.build().expect("diamond category");
    let part = MorphismPartition::by_key(
        &c,
        |m| {
            let name = c.morphism_name(m);
            if c.is_identity(m) {
                0
            } else if name.starts_with("alpha") || name.starts_with("gamma") {
                1
            } else if name.starts_with("beta") || name.starts_with("delta") {
                2
            } else {
                3
            }
        },
        |key| format!("S{key}"),
    );
    let obj = |s: &str| c.object_id(s).expect("declared");
    let swap_obj = |name: &str| -> String {
        match name {
            "x" => "y".into(),
            "y" => "x".into(),
            _ if name.starts_with('a') => format!("b{}", &name[1..]),
            _ => format!("a{}", &name[1..]),
        }
    };
    let objects: Vec<usize> = (0..c.num_objects())
        .map(|o| obj(&swap_obj(c.object_name(o))))
        .collect();
    let morphisms = (0..c.num_morphisms())
        .map(|m| {
            if c.is_identity(m) {
                return c.identity(objects[c.src(m)]);
            }
            let name = c.morphism_name(m);
            let swapped = [
                ("alpha", "delta"),
                ("delta", "alpha"),
                ("beta", "gamma"),
                ("gamma", "beta"),
            ]
            .iter()
            .find_map(|(p, q)| name.strip_prefix(p).map(|l| format!("{q}{l}")))
            .unwrap_or_else(|| name.to_string());
            c.morphism_id(&swapped).expect("declared")
        })
        .collect();
    let t = Functor {
        objects,
        morphisms,
        contravariant: true,
    };
    AssociationSchemoid::new(QuasiSchemoid::new(c, part).expect("axiom"), &t).expect("involution")
}

/// Disjoint copies `x_i ⇄ y_i` with blocks `{1_x}`, `{1_y}`, `{f}`, `{g}` and
/// `T` the inverse.
pub fn double_arrows(copies: usize) -> AssociationSchemoid {
    let mut b = CategoryBuilder::new();
    for i in 1..=copies {
        let (x, y) = (format!("x{i}"), format!("y{i}"));
        b.object_with_identity(x.clone())
            .object_with_identity(y.clone());
        b.morphism(format!("f{i}"), x.clone(), y.clone()).morphism(
            format!("g{i}"),
            y.clone(),
            x.clone(),
        );
        b.compose(format!("g{i}"), format!("f{i}"), format!("1_{x}"))
            .compose(format!("f{i}"), format!("g{i}"), format!("1_{y}"));
    }
    let c = b.build().expect("groupoid");
    let part = MorphismPartition::by_key(
        &c,
        |m| {
            let name = c.morphism_name(m);
            if name.starts_with("1_x") {
                0
            } else if name.starts_with("1_y") {
                1
            } else if name.starts_with('f') {
                2
            } else {
                3
            }
        },
        |key| ["sigma0_1", "sigma0_2", "tau1", "tau2"][*key].to_string(),
    );
    let gr = as_groupoid(&c).expect("groupoid");
    let t = inverse_functor(&c, &gr, (0..c.num_objects()).collect());
    AssociationSchemoid::new(QuasiSchemoid::new(c, part).expect("axiom"), &t).expect("involution")
}

pub fn hamming_times_bullet() -> AssociationSchemoid {
    let j = j_embed(hamming(2, 2).expect("small").configuration());
    j.product(&group_bullet(&FiniteGroup::cyclic(2)))
}

fn thick(s: &AssociationScheme, z: usize) -> AssociationSchemoid {
    let th = thicken_scheme(s, &vec![z; s.rank()]).expect("valid thickness");
    thicken_involution(&th).expect("equal thickness")
}

/// A `Z/2` extension of `hamming_times_z2` with its lifted schemoid.
#[derive(Debug, Clone)]
pub struct BlowUp {
    pub base: AssociationSchemoid,
    pub extension: ExtensionCategory,
    pub lifted: AssociationSchemoid,
}

/// The trivial `Z/2` system on `j(H(2,2)) × (Z/2)^•` with cocycle
/// `Δ(f, g) = c(f₂, g₂)` where `c(1, 1) = 1` is the nontrivial group cocycle,
/// or zero when `twisted` is false.
pub fn blow_up(twisted: bool) -> Result<BlowUp, ExtensionError> {
    let base = hamming_times_bullet();
    let c = base.category().clone();
    let system = NaturalSystem::trivial(&c, Coefficients::modulo(2)?, 1)?;
    let cx = bw_differentials(&c, &system);
    // the group factor of a product morphism is its index mod |Z/2|
    let cocycle = cx.cochain2_from_fn(|f, g| vec![i64::from(twisted && f % 2 == 1 && g % 2 == 1)]);
    let extension = build_extension(&c, &system, cocycle)?;
    let quasi = lift_schemoid(&base.quasi, &extension)?;
    let lifted = lift_involution(&base, &extension, &quasi)?;
    Ok(BlowUp {
        base,
        extension,
        lifted,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn every_entry_meets_its_expectations() {
        for e in entries() {
            let misses = e.verify();
            assert!(misses.is_empty(), "{}: {:?}", e.name, misses);
        }
    }

    #[test]
    fn names_are_unique() {
        let mut names: Vec<_> = entries().iter().map(|e| e.name).collect();
        names.sort_unstable();
        let n = names.len();
        names.dedup();
        assert_eq!(names.len(), n);
    }
}
