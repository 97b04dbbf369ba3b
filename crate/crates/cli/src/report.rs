//! One function per subcommand. Each returns the JSON payload and a human
//! rendering; JSON always uses indices, human text uses labels.

use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::path::Path;

use serde_json::{json, Value};
use wbcc_core::audit::{audit_algebra, audit_catalog, parse_theorem_list, AuditReport, Status};
use wbcc_core::axioms::{check_axioms, classify_with, AxiomReport, ClassReport};
use wbcc_core::enumerate::{are_isomorphic, enumerate_order, load_algebras, Filter};
use wbcc_core::laws::forall;
use wbcc_core::properties::{
    circle_group_check, condition_s, is_solid, min_commutative_fold, IdentityContext, IdentityId,
    Scope,
};
use wbcc_core::structure::{derive_order, restricted_info, OrderInfo, RestrictedInfo};
use wbcc_core::{Algebra, ElemSet, Relation, Verdict, Witness};

use crate::{load, Outcome};

fn to_value<T: serde::Serialize>(t: &T) -> Value {
    serde_json::to_value(t).expect("reports serialize")
}

fn name_of(path: &Path) -> String {
    path.display().to_string()
}

fn set_labels(a: &Algebra, s: ElemSet) -> String {
    let items: Vec<String> = s.iter().map(|x| a.label(x)).collect();
    format!("{{{}}}", items.join(", "))
}

fn witness_text(a: &Algebra, w: &Witness) -> String {
    let vars: Vec<String> = w
        .assignment
        .iter()
        .map(|(v, e)| format!("{v}={}", a.label(*e)))
        .collect();
    let op = match w.relation {
        Relation::Eq => "!=",
        Relation::Leq => "!<=",
    };
    format!(
        "{} fails at {}: {} {} {}",
        w.law,
        vars.join(", "),
        a.label(w.lhs),
        op,
        a.label(w.rhs)
    )
}

fn verdict_line(out: &mut String, a: &Algebra, name: &str, v: &Verdict) {
    match v.witness() {
        None => writeln!(out, "  {name}: yes").unwrap(),
        Some(w) => writeln!(out, "  {name}: no ({})", witness_text(a, w)).unwrap(),
    }
}

fn flag_line(out: &mut String, name: &str, on: bool) {
    writeln!(out, "  {name}: {}", if on { "yes" } else { "no" }).unwrap();
}

fn class_flags(class: &ClassReport, solid: Option<bool>) -> Vec<&'static str> {
    let mut flags = Vec::new();
    for (name, on) in [
        ("weakbcc", class.is_weak_bcc),
        ("bcc", class.is_bcc),
        ("bck", class.is_bck),
        ("bci", class.is_bci),
        ("proper", class.is_proper),
        ("solid", solid == Some(true)),
    ] {
        if on {
            flags.push(name);
        }
    }
    flags
}

fn not_weak(a: &Algebra, axioms: &AxiomReport, human: &mut String) -> Value {
    let (ax, v) = axioms
        .first_weak_bcc_failure()
        .expect("not weak BCC implies a failing axiom");
    let w = v.witness().expect("failing axiom has a witness");
    writeln!(
        human,
        "not a weak BCC-algebra: axiom ({}) {}",
        ax.id(),
        witness_text(a, w)
    )
    .unwrap();
    json!({
        "weak_bcc": false,
        "failing_axiom": ax.id(),
        "witness": to_value(w),
        "axioms": to_value(axioms),
    })
}

/// Axioms, class and solidity.
pub fn check(file: &Path) -> Result<Outcome, String> {
    let a = load(file)?;
    let axioms = check_axioms(&a);
    let class = classify_with(&a, &axioms);
    let solid = derive_order(&a).ok().map(|o| is_solid(&a, &o));
    let flags = class_flags(&class, solid.as_ref().map(Verdict::holds));

    let mut human = String::new();
    writeln!(
        human,
        "{}: order {}",
        a.name().unwrap_or("table"),
        a.order()
    )
    .unwrap();
    for (ax, v) in &axioms.results {
        verdict_line(&mut human, &a, &format!("axiom ({})", ax.id()), v);
    }
    writeln!(human, "flags: {}", flags.join(", ")).unwrap();

    let mut result = json!({
        "axioms": to_value(&axioms),
        "class": to_value(&class),
        "flags": flags,
    });
    if let Some(s) = &solid {
        result["solid"] = to_value(s);
    }
    Ok(Outcome {
        command: "check",
        inputs: vec![name_of(file)],
        result,
        human,
        code: if class.is_weak_bcc { 0 } else { 2 },
    })
}

/// `0x = 0 => x = 0`.
fn group_like_verdict(a: &Algebra) -> Verdict {
    forall(a, "0x = 0 => x = 0", ["x"], Relation::Eq, |[x]| {
        (a.mul(0, x) == 0).then_some((x, 0))
    })
}

fn restricted_verdict(a: &Algebra, o: &OrderInfo, r: &RestrictedInfo) -> Verdict {
    let w = r
        .greatest
        .iter()
        .find(|(_, top)| top.is_none())
        .and_then(|(&root, _)| RestrictedInfo::missing_top_witness(a, o, root));
    Verdict::from(w)
}

fn branches_value(o: &OrderInfo) -> Value {
    let map: BTreeMap<String, Vec<usize>> = o
        .branches()
        .into_iter()
        .map(|(r, b)| (r.to_string(), b.to_vec()))
        .collect();
    to_value(&map)
}

fn branches_text(out: &mut String, a: &Algebra, o: &OrderInfo) {
    writeln!(out, "branches:").unwrap();
    for (r, b) in o.branches() {
        writeln!(out, "  B({}) = {}", a.label(r), set_labels(a, b)).unwrap();
    }
    writeln!(out, "I(G) = {}", set_labels(a, o.minimal)).unwrap();
}

/// Full property vector.
pub fn classify(file: &Path, scope: Option<Scope>) -> Result<Outcome, String> {
    let a = load(file)?;
    let axioms = check_axioms(&a);
    let mut human = String::new();
    if !axioms.is_weak_bcc() {
        let result = not_weak(&a, &axioms, &mut human);
        return Ok(Outcome {
            command: "classify",
            inputs: vec![name_of(file)],
            result,
            human,
            code: 2,
        });
    }
    let class = classify_with(&a, &axioms);
    let o = derive_order(&a).map_err(|e| e.to_string())?;
    let r = restricted_info(&a, &o);
    let s = condition_s(&a, &o);
    let cx = IdentityContext {
        algebra: &a,
        order: &o,
        restricted: Some(&r),
        circle: s.circle.as_ref(),
    };
    let id = |id: IdentityId, sc: Scope| cx.check(id, sc).expect("no prerequisites");

    let mut props: Vec<(&str, Verdict)> = vec![
        ("solid", is_solid(&a, &o)),
        ("group-like", group_like_verdict(&a)),
        ("restricted", restricted_verdict(&a, &o, &r)),
        (
            "branchwise-commutative",
            id(IdentityId::E5, Scope::Branchwise),
        ),
        (
            "branchwise-implicative",
            id(IdentityId::D51, Scope::Branchwise),
        ),
        ("phi-implicative", id(IdentityId::Eq255, Scope::Global)),
        (
            "branchwise-phi-implicative",
            id(IdentityId::Eq255, Scope::Branchwise),
        ),
        ("positive-implicative", id(IdentityId::Eq254, Scope::Global)),
        (
            "weakly-positive-implicative",
            id(IdentityId::Eq256, Scope::Global),
        ),
        (
            "branchwise-weakly-positive-implicative",
            id(IdentityId::Eq256, Scope::Branchwise),
        ),
    ];
    if r.is_restricted() {
        let inv = Verdict::from(r.involution_failure.clone());
        props.insert(3, ("involutory", inv));
    }
    let fold = min_commutative_fold(&a, &o, a.order());

    let mut identities = BTreeMap::new();
    let mut skipped = BTreeMap::new();
    for tag in IdentityId::CATALOG {
        let sc = scope.unwrap_or(tag.default_scope());
        match cx.check(tag, sc) {
            Ok(v) => {
                identities.insert(tag.tag(), v);
            }
            Err(e) => {
                skipped.insert(tag.tag(), e.to_string());
            }
        }
    }

    writeln!(
        human,
        "{}: order {}",
        a.name().unwrap_or("table"),
        a.order()
    )
    .unwrap();
    writeln!(human, "class: {}", class_flags(&class, None).join(", ")).unwrap();
    writeln!(human, "properties:").unwrap();
    for (name, v) in &props {
        verdict_line(&mut human, &a, name, v);
    }
    match fold {
        Some(n) => writeln!(human, "  min commutative fold: {n}").unwrap(),
        None => writeln!(human, "  min commutative fold: none up to {}", a.order()).unwrap(),
    }
    match &s.failing_pair {
        None => flag_line(&mut human, "condition (S)", true),
        Some(p) => writeln!(
            human,
            "  condition (S): no (A({},{}) = {} has no greatest element)",
            a.label(p.x),
            a.label(p.y),
            set_labels(&a, p.a_set)
        )
        .unwrap(),
    }
    branches_text(&mut human, &a, &o);
    match scope {
        Some(sc) => writeln!(human, "identities ({}):", to_value(&sc).as_str().unwrap()).unwrap(),
        None => writeln!(human, "identities:").unwrap(),
    }
    for (tag, v) in &identities {
        verdict_line(&mut human, &a, tag, v);
    }
    for (tag, why) in &skipped {
        writeln!(human, "  {tag}: skipped ({why})").unwrap();
    }

    let properties: BTreeMap<&str, Value> = props.iter().map(|(k, v)| (*k, to_value(v))).collect();
    let mut result = json!({
        "order": a.order(),
        "class": to_value(&class),
        "properties": properties,
        "min_commutative_fold": fold,
        "condition_s": {
            "holds": s.holds,
            "failing_pair": to_value(&s.failing_pair),
        },
        "branches": branches_value(&o),
        "minimal": o.minimal.to_vec(),
        "greatest": to_value(&r.greatest),
        "identities": to_value(&identities),
    });
    if !skipped.is_empty() {
        result["skipped_identities"] = to_value(&skipped);
    }
    if let Some(sc) = scope {
        result["scope"] = to_value(&sc);
    }
    Ok(Outcome {
        command: "classify",
        inputs: vec![name_of(file)],
        result,
        human,
        code: 0,
    })
}

/// Branch decomposition.
pub fn branches(file: &Path) -> Result<Outcome, String> {
    let a = load(file)?;
    let axioms = check_axioms(&a);
    let mut human = String::new();
    if !axioms.is_weak_bcc() {
        let result = not_weak(&a, &axioms, &mut human);
        return Ok(Outcome {
            command: "branches",
            inputs: vec![name_of(file)],
            result,
            human,
            code: 2,
        });
    }
    let o = derive_order(&a).map_err(|e| e.to_string())?;
    let r = restricted_info(&a, &o);
    branches_text(&mut human, &a, &o);
    for (root, top) in &r.greatest {
        match top {
            Some(t) => writeln!(human, "  1_{} = {}", a.label(*root), a.label(*t)).unwrap(),
            None => writeln!(human, "  B({}) has no greatest element", a.label(*root)).unwrap(),
        }
    }
    let result = json!({
        "branches": branches_value(&o),
        "minimal": o.minimal.to_vec(),
        "greatest": to_value(&r.greatest),
        "phi": o.phi,
        "branch_of": o.branch_of,
    });
    Ok(Outcome {
        command: "branches",
        inputs: vec![name_of(file)],
        result,
        human,
        code: 0,
    })
}

/// The induced operation and its group check.
pub fn circle(file: &Path) -> Result<Outcome, String> {
    let a = load(file)?;
    let axioms = check_axioms(&a);
    let mut human = String::new();
    if !axioms.is_weak_bcc() {
        let result = not_weak(&a, &axioms, &mut human);
        return Ok(Outcome {
            command: "circle",
            inputs: vec![name_of(file)],
            result,
            human,
            code: 2,
        });
    }
    let o = derive_order(&a).map_err(|e| e.to_string())?;
    let s = condition_s(&a, &o);
    let Some(c) = &s.circle else {
        let p = s
            .failing_pair
            .as_ref()
            .expect("absent (S) has a failing pair");
        writeln!(
            human,
            "condition (S) fails: A({},{}) = {} has maximal elements {}",
            a.label(p.x),
            a.label(p.y),
            set_labels(&a, p.a_set),
            set_labels(&a, p.maximal)
        )
        .unwrap();
        return Ok(Outcome {
            command: "circle",
            inputs: vec![name_of(file)],
            result: json!({ "condition_s": to_value(&s) }),
            human,
            code: 2,
        });
    };
    let g = circle_group_check(&a, &s).map_err(|e| e.to_string())?;

    let n = a.order();
    let width = a.elements().map(|x| a.label(x).len()).max().unwrap_or(1);
    write!(human, "{:>width$} |", "o").unwrap();
    for y in 0..n {
        write!(human, " {:>width$}", a.label(y)).unwrap();
    }
    writeln!(human).unwrap();
    for (x, row) in c.iter().enumerate() {
        write!(human, "{:>width$} |", a.label(x)).unwrap();
        for &v in row {
            write!(human, " {:>width$}", a.label(v)).unwrap();
        }
        writeln!(human).unwrap();
    }
    flag_line(&mut human, "solid", s.solid);
    flag_line(&mut human, "group", g.is_group);
    flag_line(&mut human, "abelian", g.is_abelian);
    for (name, v) in [
        ("identity", &g.identity),
        ("associativity", &g.associativity),
        ("inverses", &g.inverses),
        ("commutativity", &g.commutativity),
    ] {
        verdict_line(&mut human, &a, name, v);
    }

    Ok(Outcome {
        command: "circle",
        inputs: vec![name_of(file)],
        result: json!({
            "condition_s": to_value(&s),
            "group": to_value(&g),
        }),
        human,
        code: 0,
    })
}

fn audit_text(out: &mut String, a: &Algebra, rep: &AuditReport) {
    for (id, o) in &rep.outcomes {
        match &o.status {
            Status::Holds => writeln!(out, "  {id}: holds").unwrap(),
            Status::Vacuous => {
                let failed: Vec<&str> = o
                    .hypotheses
                    .iter()
                    .filter(|(_, &h)| !h)
                    .map(|(k, _)| k.as_str())
                    .collect();
                writeln!(out, "  {id}: vacuous (fails: {})", failed.join(", ")).unwrap();
            }
            Status::Counterexample {
                conclusion,
                witness,
            } => writeln!(
                out,
                "  {id}: COUNTEREXAMPLE to {conclusion}: {}",
                witness_text(a, witness)
            )
            .unwrap(),
        }
        for (note, &on) in &o.notes {
            if on {
                writeln!(out, "    note: {note}").unwrap();
            }
        }
    }
    writeln!(
        out,
        "  summary: {} hold, {} vacuous, {} counterexamples",
        rep.summary.holds, rep.summary.vacuous, rep.summary.counterexamples
    )
    .unwrap();
}

/// Theorem audit over files, a catalog directory, or a fresh enumeration.
pub fn audit(
    files: &[std::path::PathBuf],
    catalog: Option<&Path>,
    order: Option<usize>,
    theorems: &str,
) -> Result<Outcome, String> {
    let ids = parse_theorem_list(theorems).map_err(|e| e.to_string())?;
    let tags: Vec<&str> = ids.iter().map(|t| t.tag()).collect();
    let mut human = String::new();

    if !files.is_empty() {
        let mut reports = Vec::new();
        let mut total = 0;
        for f in files {
            let a = load(f)?;
            let rep = audit_algebra(&a, &ids).map_err(|e| format!("{}: {e}", f.display()))?;
            writeln!(human, "{}:", a.name().unwrap_or("table")).unwrap();
            audit_text(&mut human, &a, &rep);
            total += rep.summary.counterexamples;
            reports.push(json!({ "input": name_of(f), "report": to_value(&rep) }));
        }
        return Ok(Outcome {
            command: "audit",
            inputs: files.iter().map(|f| name_of(f)).collect(),
            result: json!({
                "theorems": tags,
                "reports": reports,
                "counterexamples": total,
            }),
            human,
            code: if total == 0 { 0 } else { 2 },
        });
    }

    let (models, input) = match (catalog, order) {
        (Some(dir), _) => (load_algebras(dir).map_err(|e| e.to_string())?, name_of(dir)),
        (None, Some(n)) => (
            enumerate_order(n, None)
                .map_err(|e| e.to_string())?
                .algebras()
                .collect(),
            format!("order {n}"),
        ),
        (None, None) => return Err("nothing to audit".into()),
    };
    let rep = audit_catalog(&models, &ids).map_err(|e| e.to_string())?;
    writeln!(human, "{input}: {} models", rep.models).unwrap();
    for id in &ids {
        writeln!(
            human,
            "  {id}: {} hold, {} vacuous",
            rep.holds.get(id).copied().unwrap_or(0),
            rep.vacuous.get(id).copied().unwrap_or(0)
        )
        .unwrap();
    }
    for c in &rep.counterexamples {
        writeln!(
            human,
            "  COUNTEREXAMPLE {} in model {} ({}): {} table {:?}",
            c.theorem, c.model, c.conclusion, c.witness, c.table
        )
        .unwrap();
    }
    writeln!(human, "counterexamples: {}", rep.counterexamples.len()).unwrap();
    let code = if rep.counterexamples.is_empty() { 0 } else { 2 };
    Ok(Outcome {
        command: "audit",
        inputs: vec![input],
        result: json!({ "theorems": tags, "catalog": to_value(&rep) }),
        human,
        code,
    })
}

/// Enumeration up to isomorphism, optionally persisted.
pub fn enumerate(
    order: usize,
    filter: Option<Filter>,
    out: Option<&Path>,
) -> Result<Outcome, String> {
    let cat = enumerate_order(order, filter).map_err(|e| e.to_string())?;
    let dir = match out {
        Some(root) => Some(cat.save(root).map_err(|e| e.to_string())?),
        None => None,
    };
    let counts = cat.class_counts();
    let mut human = String::new();
    write!(human, "order {order}").unwrap();
    if let Some(f) = filter {
        write!(human, ", filter {f}").unwrap();
    }
    writeln!(human, ": {} classes", cat.len()).unwrap();
    for (k, v) in &counts {
        writeln!(human, "  {k}: {v}").unwrap();
    }
    if let Some(d) = &dir {
        writeln!(human, "written to {}", d.display()).unwrap();
    }
    let tables: Vec<&Vec<u8>> = cat.entries.iter().map(|e| &e.table).collect();
    let mut result = json!({
        "order": order,
        "filter": filter.map(|f| f.name()),
        "count": cat.len(),
        "class_counts": to_value(&counts),
        "tables": tables,
    });
    if let Some(d) = dir {
        result["out"] = Value::String(d.display().to_string());
    }
    Ok(Outcome {
        command: "enumerate",
        inputs: out.map(|p| vec![name_of(p)]).unwrap_or_default(),
        result,
        human,
        code: 0,
    })
}

/// Isomorphism test.
pub fn iso(fa: &Path, fb: &Path) -> Result<Outcome, String> {
    let a = load(fa)?;
    let b = load(fb)?;
    let cert = are_isomorphic(&a, &b);
    let mut human = String::new();
    match &cert {
        Some(c) => {
            writeln!(human, "isomorphic").unwrap();
            for (x, &y) in c.mapping.iter().enumerate() {
                writeln!(human, "  {} -> {}", a.label(x), b.label(y)).unwrap();
            }
        }
        None => writeln!(human, "not isomorphic").unwrap(),
    }
    Ok(Outcome {
        command: "iso",
        inputs: vec![name_of(fa), name_of(fb)],
        result: json!({
            "isomorphic": cert.is_some(),
            "mapping": cert.as_ref().map(|c| &c.mapping),
        }),
        human,
        code: if cert.is_some() { 0 } else { 3 },
    })
}
