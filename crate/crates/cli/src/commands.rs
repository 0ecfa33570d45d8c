//! Subcommand implementations.

use std::fmt::{self, Write as _};

use indexmap::IndexMap;
use serde::Serialize;
use serde_json::{json, Map, Value};

use schemoid::admissible::{
    check_unique_solutions, induced_algebra_map, is_admissible, multiplicities,
    verify_multiplicity_identity,
};
use schemoid::algebra::scalar_json;
use schemoid::bridges::canonical_unit;
use schemoid::corpus::{self, zigzag_window};
use schemoid::extensions::{lift_involution, lift_schemoid, RawNaturalSystem};
use schemoid::schemes::{
    group_scheme_from_table, orbit_configuration_generated, validate_scheme, RawScheme,
    ValidatedScheme,
};
use schemoid::schemoid::{schemoid_isomorphic_with, IsoOptions};
use schemoid::thicken::Residual;
use schemoid::{
    algebra_is_unital, analyze_thinness, build_extension, bw_cohomology, bw_differentials,
    category_from_matrix, extensions_equivalent, group_scheme, hamming, is_split, j_embed,
    phi_psi_check, r_tilde, s_tilde, sigma_prime, terwilliger, thicken_involution, thicken_scheme,
    validate_category, ExtensionCategory, FinCategory, FiniteGroup, Functor, Groupoid,
    NaturalSystem, QuasiSchemoid, RawCategory, RawGroupoid, RawSchemoid, Schemoid, SchemoidAlgebra,
    SchemoidMorphism, TransitiveMatrix,
};

use crate::input::{self, Document, Failure};
use crate::{Cli, Command, GenCommand, Global, ResidualArg, ThickenArgs, SCHEMA_VERSION};

/// What a command prints.
pub enum Output {
    /// Interchange JSON meant for the next command in a pipe.
    Artifact(Value),
    Report {
        command: &'static str,
        ok: bool,
        body: Value,
        text: String,
        json: bool,
    },
}

impl Output {
    pub fn exit_code(&self) -> u8 {
        match self {
            Output::Report { ok: false, .. } => 1,
            _ => 0,
        }
    }
}

impl fmt::Display for Output {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Output::Artifact(v) => writeln!(f, "{}", pretty(v)),
            Output::Report {
                command,
                ok,
                body,
                text,
                json,
            } => {
                if *json {
                    let mut out = Map::new();
                    out.insert("schema_version".into(), json!(SCHEMA_VERSION));
                    out.insert("command".into(), json!(command));
                    out.insert("ok".into(), json!(ok));
                    if let Value::Object(m) = body {
                        out.extend(m.clone());
                    }
                    writeln!(f, "{}", pretty(&Value::Object(out)))
                } else {
                    write!(f, "{text}")
                }
            }
        }
    }
}

fn pretty(v: &Value) -> String {
    serde_json::to_string_pretty(v).expect("values serialize")
}

fn to_value<T: Serialize>(x: &T) -> Value {
    serde_json::to_value(x).expect("interchange types serialize")
}

struct Reporter<'a> {
    global: &'a Global,
    command: &'static str,
}

impl Reporter<'_> {
    fn done(&self, ok: bool, body: Value, text: String) -> Output {
        Output::Report {
            command: self.command,
            ok,
            body,
            text,
            json: self.global.json,
        }
    }
}

pub fn run(cli: Cli) -> Result<Output, Failure> {
    let g = &cli.global;
    let rep = |command| Reporter { global: g, command };
    match cli.command {
        Command::Validate { input } => validate(rep("validate"), &input::read(&input)?),
        Command::Analyze { input } => analyze(rep("analyze"), &input::read(&input)?),
        Command::Constants { input } => constants(rep("constants"), &input::read(&input)?),
        Command::Algebra { input } => algebra(rep("algebra"), &input::read(&input)?),
        Command::Terwilliger { input, object } => {
            terwilliger_cmd(rep("terwilliger"), &input::read(&input)?, object.as_deref())
        }
        Command::EmbedScheme { input } => {
            let s = load_scheme(&input::read(&input)?)?;
            Ok(artifact(
                &Schemoid::from_association(j_embed(s.configuration())).to_raw(),
            ))
        }
        Command::FromGroupoid { input } => {
            let h = load_groupoid(&input::read(&input)?)?;
            let st = s_tilde(&h);
            let mut s = Schemoid::from_association(st.schemoid);
            s.base_points = Some(st.base_points);
            Ok(artifact(&s.to_raw()))
        }
        Command::ToGroupoid { input } => {
            let doc = input::read(&input)?;
            let a = load_schemoid(&doc)?
                .association()
                .ok_or_else(|| doc.failure("schemoid", "an involution is required"))?;
            Ok(artifact(&r_tilde(&a)?.groupoid.to_raw()))
        }
        Command::RoundtripCheck { input } => {
            roundtrip(rep("roundtrip-check"), &input::read(&input)?)
        }
        Command::Admissible {
            source,
            target,
            functor,
        } => admissible(
            rep("admissible"),
            &input::read(&source)?,
            &input::read(&target)?,
            &input::read(&functor)?,
        ),
        Command::Cohomology {
            category,
            system,
            degree,
        } => cohomology(
            rep("cohomology"),
            &input::read(&category)?,
            &input::read(&system)?,
            degree,
        ),
        Command::Extend {
            category,
            system,
            cocycle,
        } => extend(
            &input::read(&category)?,
            &input::read(&system)?,
            &input::read(&cocycle)?,
        ),
        Command::Split { extension } => split(rep("split"), &input::read(&extension)?),
        Command::Equivalent { first, second } => equivalent(
            rep("equivalent"),
            &input::read(&first)?,
            &input::read(&second)?,
        ),
        Command::Thicken(args) => thicken(args),
        Command::Gen(cmd) => generate(cmd),
        Command::Examples { name, window } => examples(rep("examples"), name.as_deref(), window),
        Command::Selftest => selftest(rep("selftest")),
    }
}

fn artifact<T: Serialize>(x: &T) -> Output {
    Output::Artifact(to_value(x))
}

// ---- loading ----

fn load_category(doc: &Document) -> Result<FinCategory, Failure> {
    let raw: RawCategory = if doc.has("partition") || doc.has("base") {
        doc.field(if doc.has("partition") {
            "category"
        } else {
            "base"
        })?
    } else if doc.has("inverse") {
        doc.parse::<RawGroupoid>("groupoid")?.category
    } else {
        doc.parse("category")?
    };
    validate_category(&raw).map_err(|e| doc.failure("category", e))
}

/// A schemoid document, or a bare category with the discrete partition.
fn load_schemoid(doc: &Document) -> Result<Schemoid, Failure> {
    if doc.has("partition") {
        let raw: RawSchemoid = doc.parse("schemoid")?;
        Schemoid::from_raw(&raw).map_err(|e| doc.failure("schemoid", e))
    } else {
        Ok(Schemoid::from_quasi(QuasiSchemoid::discrete(
            load_category(doc)?,
        )))
    }
}

fn load_groupoid(doc: &Document) -> Result<Groupoid, Failure> {
    let raw: RawGroupoid = doc.parse("groupoid")?;
    if raw.inverse.is_empty() {
        let c = validate_category(&raw.category).map_err(|e| doc.failure("category", e))?;
        schemoid::as_groupoid(&c).map_err(|e| doc.failure("category", e))
    } else {
        Groupoid::from_raw(&raw).map_err(|e| doc.failure("category", e))
    }
}

fn load_scheme(doc: &Document) -> Result<ValidatedScheme, Failure> {
    let raw: RawScheme = doc.parse("scheme")?;
    validate_scheme(&raw).map_err(|e| doc.failure("scheme", e))
}

fn load_system(doc: &Document, c: &FinCategory) -> Result<NaturalSystem, Failure> {
    let raw: RawNaturalSystem = doc.parse("natural system")?;
    NaturalSystem::from_raw(c, &raw).map_err(|e| doc.failure("extension", e))
}

fn load_extension(doc: &Document) -> Result<ExtensionCategory, Failure> {
    let base = load_category(doc)?;
    let raw: RawNaturalSystem = doc.field("system")?;
    let system = NaturalSystem::from_raw(&base, &raw).map_err(|e| doc.failure("extension", e))?;
    let cocycle: IndexMap<String, Vec<i64>> = doc.field("cocycle")?;
    let cx = bw_differentials(&base, &system);
    let delta = cx
        .cochain2_from_raw(&base, &cocycle)
        .map_err(|e| doc.failure("extension", e))?;
    build_extension(&base, &system, delta).map_err(|e| doc.failure("extension", e))
}

fn object_names(c: &FinCategory, xs: &[usize]) -> Vec<String> {
    xs.iter().map(|&x| c.object_name(x).to_string()).collect()
}

fn block_names(q: &QuasiSchemoid, bs: &[usize]) -> Vec<String> {
    bs.iter()
        .map(|&b| q.partition().name(b).to_string())
        .collect()
}

fn yes(b: bool) -> &'static str {
    if b {
        "yes"
    } else {
        "no"
    }
}

// ---- analyses ----

fn validate(rep: Reporter, doc: &Document) -> Result<Output, Failure> {
    let (kind, body, text) = if doc.has("relations") {
        let s = load_scheme(doc)?;
        let kind = match s {
            ValidatedScheme::Scheme(_) => "association_scheme",
            ValidatedScheme::Configuration(_) => "coherent_configuration",
        };
        let c = s.configuration();
        let text = format!("{kind}: {} points, {} classes\n", c.size(), c.rank());
        (
            kind,
            json!({"size": c.size(), "rank": c.rank(), "classes": c.classes()}),
            text,
        )
    } else if doc.has("cocycle") {
        let ext = load_extension(doc)?;
        ext.check_linear_extension()
            .map_err(|e| doc.failure("extension", e))?;
        let text = format!(
            "linear_extension: {} morphisms over {}\n",
            ext.total.num_morphisms(),
            ext.base.num_morphisms()
        );
        (
            "linear_extension",
            json!({"base_morphisms": ext.base.num_morphisms(), "total_morphisms": ext.total.num_morphisms()}),
            text,
        )
    } else if doc.has("partition") {
        let s = load_schemoid(doc)?;
        let kind = if s.involution.is_some() {
            "association_schemoid"
        } else {
            "quasi_schemoid"
        };
        let c = s.quasi.category();
        let text = format!(
            "{kind}: {} objects, {} morphisms, {} blocks\n",
            c.num_objects(),
            c.num_morphisms(),
            s.quasi.num_blocks()
        );
        (
            kind,
            json!({"objects": c.num_objects(), "morphisms": c.num_morphisms(), "blocks": s.quasi.num_blocks()}),
            text,
        )
    } else {
        let (kind, c) = if doc.has("inverse") {
            ("groupoid", load_groupoid(doc)?.into_category())
        } else {
            ("category", load_category(doc)?)
        };
        let text = format!(
            "{kind}: {} objects, {} morphisms\n",
            c.num_objects(),
            c.num_morphisms()
        );
        (
            kind,
            json!({"objects": c.num_objects(), "morphisms": c.num_morphisms()}),
            text,
        )
    };
    let mut body = body;
    body["kind"] = json!(kind);
    Ok(rep.done(true, body, text))
}

fn analyze(rep: Reporter, doc: &Document) -> Result<Output, Failure> {
    let s = load_schemoid(doc)?;
    let q = &s.quasi;
    let c = q.category();
    let unique = check_unique_solutions(q);
    let alg = SchemoidAlgebra::new(q, rep.global.ring);
    let unitality = algebra_is_unital(&alg, q);
    let thinness = s
        .association()
        .map(|a| analyze_thinness(&a, s.base_points.as_deref()).0);

    let mut text = String::new();
    let _ = writeln!(
        text,
        "objects {}, morphisms {}, blocks {}",
        c.num_objects(),
        c.num_morphisms(),
        q.num_blocks()
    );
    let _ = writeln!(text, "unital: {}", yes(q.is_unital()));
    if let Some(b) = q.non_unital_block() {
        let _ = writeln!(
            text,
            "  block `{}` mixes identities with other morphisms",
            q.partition().name(b)
        );
    }
    let _ = writeln!(text, "basic: {}", yes(q.is_basic()));
    let _ = writeln!(text, "groupoid: {}", yes(c.is_groupoid()));
    let _ = writeln!(
        text,
        "association schemoid: {}",
        yes(s.involution.is_some())
    );
    let _ = writeln!(text, "unique solutions (P): {}", yes(unique.is_ok()));
    let _ = writeln!(
        text,
        "algebra over {}: dimension {}, unit is the identity sum: {}",
        alg.ring(),
        alg.dim(),
        yes(unitality.unit_is_identity_sum)
    );
    if let Some(t) = &thinness {
        let _ = writeln!(text, "semi-thin: {}", yes(t.semi_thin));
        let _ = writeln!(text, "thin: {}", yes(t.thin));
        for w in &t.witnesses {
            let _ = writeln!(text, "  {w}");
        }
    }
    let body = json!({
        "objects": c.num_objects(),
        "morphisms": c.num_morphisms(),
        "blocks": q.num_blocks(),
        "block_names": q.partition().names(),
        "unital": q.is_unital(),
        "basic": q.is_basic(),
        "groupoid": c.is_groupoid(),
        "association": s.involution.is_some(),
        "unique_solutions": unique.is_ok(),
        "unique_solutions_witness": unique.err().map(|v| json!({
            "fixed": v.fixed,
            "first": triple_names(c, v.first),
            "second": triple_names(c, v.second),
        })),
        "algebra": {"ring": alg.ring().to_string(), "dimension": alg.dim(), "unitality": to_value(&unitality)},
        "thinness": thinness.as_ref().map(to_value),
    });
    Ok(rep.done(true, body, text))
}

fn triple_names(c: &FinCategory, (f, g, h): (usize, usize, usize)) -> [String; 3] {
    [f, g, h].map(|m| c.morphism_name(m).to_string())
}

fn constants(rep: Reporter, doc: &Document) -> Result<Output, Failure> {
    let s = load_schemoid(doc)?;
    let q = &s.quasi;
    let name = |b: usize| q.partition().name(b).to_string();
    let mut text = String::new();
    let mut rows = Vec::new();
    for (sigma, tau, mu, p) in q.constants().nonzero() {
        let _ = writeln!(
            text,
            "p^{{{}}}_{{{},{}}} = {p}",
            name(mu),
            name(sigma),
            name(tau)
        );
        rows.push(json!({"sigma": name(sigma), "tau": name(tau), "mu": name(mu), "p": p}));
    }
    Ok(rep.done(
        true,
        json!({"blocks": q.partition().names(), "constants": rows}),
        text,
    ))
}

fn algebra(rep: Reporter, doc: &Document) -> Result<Output, Failure> {
    let s = load_schemoid(doc)?;
    let alg = SchemoidAlgebra::new(&s.quasi, rep.global.ring);
    let unitality = algebra_is_unital(&alg, &s.quasi);
    let mut body = alg.to_json();
    body["unitality"] = to_value(&unitality);
    let mut text = format!("dimension {} over {}\n", alg.dim(), alg.ring());
    match alg.unit() {
        Some(u) => {
            let u: Vec<String> = u.iter().map(|x| scalar_json(x).to_string()).collect();
            let _ = writeln!(text, "unit [{}]", u.join(", "));
        }
        None => text.push_str("no unit\n"),
    }
    if let Some(Value::Object(prod)) = body.get("product") {
        for (pair, entry) in prod {
            if let Value::Object(e) = entry {
                let terms: Vec<String> = e.iter().map(|(m, c)| format!("{c}*{m}")).collect();
                if !terms.is_empty() {
                    let (a, b) = pair.split_once(',').unwrap_or((pair, ""));
                    let _ = writeln!(text, "{a} * {b} = {}", terms.join(" + "));
                }
            }
        }
    }
    Ok(rep.done(true, body, text))
}

fn terwilliger_cmd(rep: Reporter, doc: &Document, object: Option<&str>) -> Result<Output, Failure> {
    let s = load_schemoid(doc)?;
    let c = s.quasi.category();
    let e = match object {
        Some(name) => c
            .object_id(name)
            .ok_or_else(|| Failure::usage(format!("unknown object `{name}`")))?,
        None => 0,
    };
    let t = terwilliger(&s.quasi, e, rep.global.ring)?;
    let body = json!({
        "object": c.object_name(e),
        "ring": t.ring().to_string(),
        "dimension": t.dim(),
        "ambient_dimension": t.ambient_dim(),
    });
    let text = format!(
        "Terwilliger algebra at `{}` over {}: dimension {} (category algebra {})\n",
        c.object_name(e),
        t.ring(),
        t.dim(),
        t.ambient_dim()
    );
    Ok(rep.done(true, body, text))
}

fn functor_json(f: &Functor, source: &FinCategory, target: &FinCategory) -> Value {
    to_value(&f.to_raw(source, target))
}

fn roundtrip(rep: Reporter, doc: &Document) -> Result<Output, Failure> {
    if doc.has("partition") {
        let s = load_schemoid(doc)?;
        let a = s
            .association()
            .ok_or_else(|| doc.failure("schemoid", "an involution is required"))?;
        let pp = phi_psi_check(&a, s.base_points.as_deref())?;
        let c = a.category();
        let target = pp.target.schemoid.category();
        let there_and_back = pp.phi.then(&pp.psi) == SchemoidMorphism::identity(&a.quasi);
        let back_and_there =
            pp.psi.then(&pp.phi) == SchemoidMorphism::identity(&pp.target.schemoid.quasi);
        let ok = there_and_back && back_and_there;
        let body = json!({
            "direction": "schemoid",
            "base_points": object_names(c, &pp.base.points),
            "phi": functor_json(&pp.phi.functor, c, target),
            "psi": functor_json(&pp.psi.functor, target, c),
            "psi_after_phi_is_identity": there_and_back,
            "phi_after_psi_is_identity": back_and_there,
        });
        let text = format!(
            "thin schemoid with base points {:?}\nPsi.Phi = 1: {}\nPhi.Psi = 1: {}\n",
            object_names(c, &pp.base.points),
            yes(there_and_back),
            yes(back_and_there)
        );
        Ok(rep.done(ok, body, text))
    } else {
        let h = load_groupoid(doc)?;
        let (_, rt, unit) = canonical_unit(&h)?;
        let g = rt.groupoid.category();
        let bijective = unit.is_bijective(g) && unit.check(h.category(), g).is_ok();
        let opts = IsoOptions {
            seed: rep.global.seed,
        };
        let search = schemoid_isomorphic_with(
            &QuasiSchemoid::discrete(h.category().clone()),
            &QuasiSchemoid::discrete(g.clone()),
            opts,
        );
        let body = json!({
            "direction": "groupoid",
            "objects": h.num_objects(),
            "morphisms": h.num_morphisms(),
            "unit": functor_json(&unit, h.category(), g),
            "unit_is_isomorphism": bijective,
            "search_witness": search.as_ref().ok().map(|m| functor_json(&m.functor, h.category(), g)),
        });
        let text = format!(
            "groupoid with {} objects and {} morphisms\nunit H -> R(S(H)) is an isomorphism: {}\nindependent search found an isomorphism: {}\n",
            h.num_objects(),
            h.num_morphisms(),
            yes(bijective),
            yes(search.is_ok())
        );
        Ok(rep.done(bijective && search.is_ok(), body, text))
    }
}

fn admissible(
    rep: Reporter,
    src: &Document,
    tgt: &Document,
    fun: &Document,
) -> Result<Output, Failure> {
    let (a, b) = (load_schemoid(src)?, load_schemoid(tgt)?);
    let (qa, qb) = (&a.quasi, &b.quasi);
    let raw = fun.parse("functor")?;
    let phi = SchemoidMorphism::from_raw(&raw, qa, qb).map_err(|e| fun.failure("schemoid", e))?;
    let report = is_admissible(&phi, qa, qb);
    let (ca, cb) = (qa.category(), qb.category());
    let failures: Vec<Value> = report
        .failures
        .iter()
        .map(|f| {
            json!({
                "object": ca.object_name(f.object),
                "block": qa.partition().name(f.block),
                "target_morphism": cb.morphism_name(f.target_morphism),
            })
        })
        .collect();
    let mut text = format!("admissible: {}\n", yes(report.admissible));
    for f in &failures {
        let _ = writeln!(
            text,
            "  fails at object {} for block {} over {}",
            f["object"], f["block"], f["target_morphism"]
        );
    }
    let mut body = json!({
        "admissible": report.admissible,
        "failures": failures,
        "kernel": block_names(qa, &report.kernel),
        "block_image": block_names(qb, &phi.block_image),
    });
    if report.admissible {
        match multiplicities(&phi, qa, qb) {
            Ok(n) => {
                let table = verify_multiplicity_identity(&phi, qa, qb, &n);
                let named: IndexMap<String, usize> = n
                    .iter()
                    .enumerate()
                    .map(|(s, &k)| (qa.partition().name(s).to_string(), k))
                    .collect();
                let _ = writeln!(text, "multiplicities: {}", to_value(&named));
                let _ = writeln!(text, "multiplicity identity holds: {}", yes(table.holds));
                body["multiplicities"] = to_value(&named);
                body["identity_holds"] = json!(table.holds);
                let (map, hom) = induced_algebra_map(&phi, qa, qb, rep.global.ring)?;
                let _ = writeln!(
                    text,
                    "induced map over {}: multiplicative {}, unit preserved {}",
                    rep.global.ring,
                    yes(hom.multiplicative),
                    hom.unit_preserved.map_or("n/a", yes)
                );
                body["induced_map"] = json!({
                    "ring": rep.global.ring.to_string(),
                    "matrix": map.to_json(),
                    "multiplicative": hom.multiplicative,
                    "unit_preserved": hom.unit_preserved,
                    "zero": map.is_zero(),
                });
            }
            Err(e) => {
                let _ = writeln!(text, "multiplicities unavailable: {e}");
                body["multiplicities_error"] = json!(e.to_string());
            }
        }
    }
    Ok(rep.done(true, body, text))
}

fn cohomology(
    rep: Reporter,
    cat: &Document,
    sys: &Document,
    degree: usize,
) -> Result<Output, Failure> {
    let c = load_category(cat)?;
    let d = load_system(sys, &c)?;
    let cx = bw_differentials(&c, &d);
    let h = bw_cohomology(&cx, degree).map_err(Failure::usage)?;
    let text = format!("H^{degree} = {h}\n");
    let body = json!({
        "degree": h.degree,
        "coefficients": h.coefficients.to_string(),
        "group": h.to_string(),
        "invariant_factors": h.invariant_factors,
        "dimension": h.dimension,
        "order": h.order(),
    });
    Ok(rep.done(true, body, text))
}

fn extend(cat: &Document, sys: &Document, coc: &Document) -> Result<Output, Failure> {
    let s = load_schemoid(cat)?;
    let c = s.quasi.category();
    let d = load_system(sys, c)?;
    let raw: IndexMap<String, Vec<i64>> = coc.parse("cocycle")?;
    let cx = bw_differentials(c, &d);
    let delta = cx
        .cochain2_from_raw(c, &raw)
        .map_err(|e| coc.failure("extension", e))?;
    let ext = build_extension(c, &d, delta)?;
    let mut out = json!({
        "base": to_value(&c.to_raw()),
        "system": to_value(&d.to_raw(c)),
        "cocycle": to_value(&ext.complex.cochain2_to_raw(c, &ext.cocycle)),
        "total": to_value(&ext.total.to_raw()),
        "projection": functor_json(&ext.projection, &ext.total, c),
    });
    if cat.has("partition") {
        let lifted = lift_schemoid(&s.quasi, &ext)?;
        let lifted = match s.association() {
            Some(a) => Schemoid::from_association(lift_involution(&a, &ext, &lifted)?),
            None => Schemoid::from_quasi(lifted),
        };
        out["lifted"] = to_value(&lifted.to_raw());
    }
    Ok(Output::Artifact(out))
}

fn split(rep: Reporter, doc: &Document) -> Result<Output, Failure> {
    let ext = load_extension(doc)?;
    let c = &ext.base;
    let section = is_split(&ext);
    let body = match &section {
        Some(s) => {
            let primitive: IndexMap<String, Vec<i64>> = (0..c.num_morphisms())
                .map(|f| {
                    (
                        c.morphism_name(f).to_string(),
                        s.primitive[ext.complex.morphism_range(f)].to_vec(),
                    )
                })
                .collect();
            json!({
                "split": true,
                "section": functor_json(&s.functor, c, &ext.total),
                "primitive": to_value(&primitive),
            })
        }
        None => json!({"split": false, "section": null}),
    };
    let text = match section {
        Some(_) => "split: yes (section found and functor-checked)\n".to_string(),
        None => "split: no (the cocycle class is nonzero)\n".to_string(),
    };
    Ok(rep.done(true, body, text))
}

fn equivalent(rep: Reporter, first: &Document, second: &Document) -> Result<Output, Failure> {
    let (e1, e2) = (load_extension(first)?, load_extension(second)?);
    let witness = extensions_equivalent(&e1, &e2)?;
    let body = json!({
        "equivalent": witness.is_some(),
        "witness": witness.as_ref().map(|w| functor_json(w, &e1.total, &e2.total)),
    });
    let text = format!("equivalent: {}\n", yes(witness.is_some()));
    Ok(rep.done(true, body, text))
}

// ---- constructions ----

fn thicken(args: ThickenArgs) -> Result<Output, Failure> {
    if let Some(path) = &args.matrix {
        let doc = input::read(path)?;
        let z: Vec<Vec<usize>> = doc.parse("matrix")?;
        let z = TransitiveMatrix::new(z).map_err(|e| doc.failure("thicken", e))?;
        let framed = category_from_matrix(&z)?;
        let residual = match args.residual {
            ResidualArg::Lump => Residual::Lump,
            ResidualArg::Singletons => Residual::Singletons,
        };
        let q = sigma_prime(&framed, &residual)?;
        return Ok(artifact(&Schemoid::from_quasi(q).to_raw()));
    }
    let path = args
        .scheme
        .as_deref()
        .ok_or_else(|| Failure::usage("give a scheme or --matrix"))?;
    let doc = input::read(path)?;
    let scheme = match load_scheme(&doc)? {
        ValidatedScheme::Scheme(s) => s,
        ValidatedScheme::Configuration(_) => {
            return Err(doc.failure("scheme", "thickening needs an association scheme"))
        }
    };
    let z = match args.z.as_slice() {
        [] => vec![1; scheme.rank()],
        [k] => vec![*k; scheme.rank()],
        zs => zs.to_vec(),
    };
    let th = thicken_scheme(&scheme, &z)?;
    let s = if th.equal_thickness() {
        Schemoid::from_association(thicken_involution(&th)?)
    } else {
        Schemoid::from_quasi(th.into_quasi())
    };
    Ok(artifact(&s.to_raw()))
}

fn generate(cmd: GenCommand) -> Result<Output, Failure> {
    let scheme = match cmd {
        GenCommand::Hamming { n, q } => hamming(n, q)?.into_configuration(),
        GenCommand::GroupScheme { table, cyclic } => match (table, cyclic) {
            (_, Some(0)) => return Err(Failure::usage("group order must be positive")),
            (_, Some(n)) => group_scheme(&FiniteGroup::cyclic(n)).into_configuration(),
            (Some(t), None) => {
                let doc = input::read_inline(&t)?;
                let table: Vec<Vec<usize>> = doc.parse("Cayley table")?;
                group_scheme_from_table(table)
                    .map_err(|e| doc.failure("scheme", e))?
                    .into_configuration()
            }
            (None, None) => return Err(Failure::usage("give a table or --cyclic")),
        },
        GenCommand::Orbits { n, generators } => {
            let doc = input::read_inline(&generators)?;
            let gens: Vec<Vec<usize>> = doc.parse("generator list")?;
            orbit_configuration_generated(n, &gens)
                .map_err(|e| doc.failure("scheme", e))?
                .0
        }
    };
    Ok(artifact(&scheme.to_raw()))
}

fn examples(rep: Reporter, name: Option<&str>, window: Option<i64>) -> Result<Output, Failure> {
    let Some(name) = name else {
        if window.is_some() {
            return Err(Failure::usage("--window needs the zigzag_window example"));
        }
        let mut text = String::new();
        let list: Vec<Value> = corpus::entries()
            .iter()
            .map(|e| {
                let _ = writeln!(text, "{:<20} [{}] {}", e.name, e.origin, e.summary);
                json!({"name": e.name, "origin": e.origin.to_string(), "summary": e.summary})
            })
            .collect();
        text.push_str("zigzag_window --window k gives any window size\n");
        return Ok(rep.done(true, json!({"entries": list}), text));
    };
    if name == "zigzag_window" {
        let k = window.unwrap_or(1);
        if k < 0 {
            return Err(Failure::usage("--window must be nonnegative"));
        }
        return Ok(artifact(
            &Schemoid::from_association(zigzag_window(k)).to_raw(),
        ));
    }
    if window.is_some() {
        return Err(Failure::usage("--window applies only to zigzag_window"));
    }
    let entry =
        corpus::lookup(name).ok_or_else(|| Failure::usage(format!("unknown example `{name}`")))?;
    Ok(artifact(&entry.build().to_raw()))
}

fn selftest(rep: Reporter) -> Result<Output, Failure> {
    let mut text = String::new();
    let mut rows = Vec::new();
    let mut all_ok = true;
    for e in corpus::entries() {
        let problems = e.verify();
        all_ok &= problems.is_empty();
        let _ = writeln!(
            text,
            "{} {}",
            if problems.is_empty() { "ok  " } else { "FAIL" },
            e.name
        );
        for p in &problems {
            let _ = writeln!(text, "     {p}");
        }
        rows.push(json!({"name": e.name, "ok": problems.is_empty(), "problems": problems}));
    }
    let _ = writeln!(
        text,
        "{} of {} entries verified",
        rows.iter().filter(|r| r["ok"] == true).count(),
        rows.len()
    );
    Ok(rep.done(all_ok, json!({"entries": rows}), text))
}
