//! Theorem audit. Each theorem is a set of named hypotheses and named
//! conclusions evaluated exhaustively on a finite model; the outcome is
//! `holds`, `vacuous` (some hypothesis fails) or `counterexample`.
//!
//! Equivalences are split into directional implications `(i)=>(j)`, each
//! reported on its own. Conclusions are evaluated even when the outcome is
//! vacuous, as long as the objects they mention exist.

use std::cell::RefCell;
use std::collections::{BTreeMap, HashMap};
use std::fmt;
use std::str::FromStr;

use rayon::prelude::*;
use serde::{Serialize, Serializer};
use thiserror::Error;

use crate::axioms::{
    check_axioms, classify_with, exchange_identity, Axiom, AxiomReport, ClassReport,
};
use crate::enumerate::canonical_form;
use crate::lattice::{ap_lattice_check, branch_lattice_check, branch_meet_check, LatticeReport};
use crate::laws::forall_dyn;
use crate::model::{Algebra, Relation, Verdict, Witness};
use crate::properties::{
    circle_group_check, condition_s, ConditionSReport, GroupReport, IdentityContext, IdentityId,
    Scope,
};
use crate::structure::{
    derive_order, is_bck_ideal, restricted_info, OrderInfo, RestrictedInfo, StructureError,
};

/// Largest order for which counterexamples are reported with a canonical
/// form; beyond it the `(n-1)!` minimisation is skipped.
const CANONICAL_LIMIT: usize = 8;

#[derive(Debug, Error)]
pub enum AuditError {
    #[error("unknown theorem tag {0:?}")]
    UnknownTheorem(String),
    #[error(transparent)]
    Structure(#[from] StructureError),
    #[error("model {index}: {source}")]
    Model {
        index: usize,
        #[source]
        source: StructureError,
    },
}

macro_rules! theorems {
    ($($variant:ident => $tag:literal, $statement:literal;)*) => {
        #[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
        pub enum TheoremId {
            $($variant,)*
        }

        impl TheoremId {
            pub const ALL: &'static [TheoremId] = &[$(TheoremId::$variant,)*];

            pub fn tag(self) -> &'static str {
                match self {
                    $(TheoremId::$variant => $tag,)*
                }
            }

            /// One-line statement of the theorem.
            pub fn statement(self) -> &'static str {
                match self {
                    $(TheoremId::$variant => $statement,)*
                }
            }
        }
    };
}

theorems! {
    Tfi => "TFI", "phi^2 x <= x; x <= y => phi x = phi y; phi^3 = phi; phi^2 is multiplicative";
    L21 => "L21", "x, y share a branch iff xy in B(0)";
    L22 => "L22", "B(0) is a subalgebra and the largest BCC-algebra inside G";
    L23 => "L23", "B(a)B(b) is contained in B(ab)";
    P26 => "P26", "solid: x*xy <= y and x(x*xy) = xy within a branch";
    P211 => "P211", "solid: phi is an endomorphism";
    P212 => "P212", "solid: xy*xz <= zy when xy, xz (or xy, zy) share a branch";
    T33 => "T33", "solid: five characterisations of branchwise commutativity agree";
    T35 => "T35", "solid, branchwise commutative: A(p) is a distributive lattice";
    L37 => "L37", "restricted, solid: properties of N_a";
    P39 => "P39", "branchwise commutative, restricted, solid => involutory";
    L310 => "L310", "involutory, solid: xy = (N_a y)(N_a x)";
    P311 => "P311", "solid, restricted: involutory iff x N_a y = y N_a x";
    T312 => "T312", "involutory, solid: branches lower semilattices iff lattices, with N_a formulas";
    T42 => "T42", "solid: three characterisations of n-fold branchwise commutativity agree";
    T52 => "T52", "solid, branchwise implicative => branchwise commutative";
    T53 => "T53", "solid, branchwise implicative => xy*0y = (xy*0y)y*0y within a branch";
    L54 => "L54", "solid: (xy*0y)y*0y <= ((xy*y)*0y)*0y within a branch";
    T55 => "T55", "I(G) BCK-ideal, branchwise commutative, solid, (xy*0y = ((xy*y)*0y)*0y) => branchwise implicative";
    L59 => "L59", "solid, weakly positive implicative => xy = (xy*y)*0y";
    T65 => "T65", "solid, weakly positive implicative => branchwise phi-implicative";
    T613 => "T613", "solid: branchwise implicative iff branchwise phi-implicative and branchwise commutative";
    L71 => "L71", "elementary properties of A(x,y)";
    P72 => "P72", "solid: A(x,y) is non-empty, has least element 0(0x*y) and lies in B(a*0b)";
    L78 => "L78", "condition (S): x <= y => x o z <= y o z";
    T79 => "T79", "condition (S): (G; o, 0) is a group iff G is group-like";
    C710 => "C710", "condition (S): (G; o, 0) is an abelian group iff G is a group-like BCI-algebra";
    P711 => "P711", "solid, condition (S): xy*z = x(y o z) for x, y in a branch and z in B(0)";
    T713 => "T713", "solid, condition (S): restricted iff some branch is restricted";
    BciIff => "BCI_IFF", "weak BCC: xy*z = xz*y iff (x*xy)y = 0";
    CommGlobal => "COMM_GLOBAL", "commutative weak BCC-algebras are commutative BCK-algebras";
}

impl fmt::Display for TheoremId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.tag())
    }
}

impl FromStr for TheoremId {
    type Err = AuditError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let s = s.trim();
        TheoremId::ALL
            .iter()
            .copied()
            .find(|t| t.tag().eq_ignore_ascii_case(s))
            .ok_or_else(|| AuditError::UnknownTheorem(s.to_string()))
    }
}

impl Serialize for TheoremId {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(self.tag())
    }
}

/// Parses `all` or a comma-separated list of tags.
pub fn parse_theorem_list(s: &str) -> Result<Vec<TheoremId>, AuditError> {
    if s.trim().eq_ignore_ascii_case("all") {
        return Ok(TheoremId::ALL.to_vec());
    }
    let mut ids: Vec<TheoremId> = s
        .split(',')
        .filter(|t| !t.trim().is_empty())
        .map(str::parse)
        .collect::<Result<_, _>>()?;
    ids.sort();
    ids.dedup();
    if ids.is_empty() {
        return Err(AuditError::UnknownTheorem(s.to_string()));
    }
    Ok(ids)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(tag = "status", rename_all = "lowercase")]
pub enum Status {
    Holds,
    Vacuous,
    Counterexample {
        conclusion: String,
        witness: Witness,
    },
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct TheoremOutcome {
    #[serde(flatten)]
    pub status: Status,
    pub hypotheses: BTreeMap<String, bool>,
    pub conclusions: BTreeMap<String, Verdict>,
    #[serde(skip_serializing_if = "BTreeMap::is_empty")]
    pub notes: BTreeMap<String, bool>,
}

impl TheoremOutcome {
    pub fn holds(&self) -> bool {
        self.status == Status::Holds
    }

    pub fn is_vacuous(&self) -> bool {
        self.status == Status::Vacuous
    }

    pub fn counterexample(&self) -> Option<(&str, &Witness)> {
        match &self.status {
            Status::Counterexample {
                conclusion,
                witness,
            } => Some((conclusion, witness)),
            _ => None,
        }
    }

    pub fn hypothesis(&self, name: &str) -> Option<bool> {
        self.hypotheses.get(name).copied()
    }

    pub fn conclusion(&self, name: &str) -> Option<&Verdict> {
        self.conclusions.get(name)
    }
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize)]
pub struct Summary {
    pub holds: usize,
    pub vacuous: usize,
    pub counterexamples: usize,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct AuditReport {
    pub outcomes: BTreeMap<TheoremId, TheoremOutcome>,
    pub summary: Summary,
}

impl AuditReport {
    pub fn outcome(&self, id: TheoremId) -> Option<&TheoremOutcome> {
        self.outcomes.get(&id)
    }
}

/// Outcome under construction.
#[derive(Default)]
struct Builder {
    hypotheses: BTreeMap<String, bool>,
    conclusions: BTreeMap<String, Verdict>,
    notes: BTreeMap<String, bool>,
}

impl Builder {
    fn hyp(mut self, name: &str, value: bool) -> Self {
        self.hypotheses.insert(name.to_string(), value);
        self
    }

    fn concl(mut self, name: &str, v: Verdict) -> Self {
        self.conclusions.insert(name.to_string(), v);
        self
    }

    fn note(mut self, name: &str, value: bool) -> Self {
        self.notes.insert(name.to_string(), value);
        self
    }

    fn finish(self) -> TheoremOutcome {
        let status = if !self.hypotheses.values().all(|&h| h) {
            Status::Vacuous
        } else if let Some((name, w)) = self
            .conclusions
            .iter()
            .find_map(|(name, v)| v.witness().map(|w| (name, w)))
        {
            Status::Counterexample {
                conclusion: name.clone(),
                witness: w.clone(),
            }
        } else {
            Status::Holds
        };
        TheoremOutcome {
            status,
            hypotheses: self.hypotheses,
            conclusions: self.conclusions,
            notes: self.notes,
        }
    }
}

/// Prepends `var = value` to a failing verdict's assignment.
fn tagged(v: Verdict, var: &str, value: usize) -> Verdict {
    match v {
        Verdict::Holds => Verdict::Holds,
        Verdict::Fails(mut w) => {
            w.assignment.insert(0, (var.to_string(), value));
            Verdict::Fails(w)
        }
    }
}

/// First failure over a sequence of verdicts.
fn first_failure(vs: impl IntoIterator<Item = Verdict>) -> Verdict {
    vs.into_iter()
        .find(|v| !v.holds())
        .unwrap_or(Verdict::Holds)
}

/// Everything the theorems talk about, computed once per model.
struct Profile<'a> {
    a: &'a Algebra,
    o: OrderInfo,
    axioms: AxiomReport,
    class: ClassReport,
    r: RestrictedInfo,
    s: ConditionSReport,
    cache: RefCell<HashMap<(IdentityId, Scope), Verdict>>,
}

impl<'a> Profile<'a> {
    fn new(a: &'a Algebra) -> Result<Self, StructureError> {
        let o = derive_order(a)?;
        let axioms = check_axioms(a);
        let class = classify_with(a, &axioms);
        let r = restricted_info(a, &o);
        let s = condition_s(a, &o);
        Ok(Profile {
            a,
            o,
            axioms,
            class,
            r,
            s,
            cache: RefCell::new(HashMap::new()),
        })
    }

    fn n(&self) -> usize {
        self.a.order()
    }

    fn m(&self, x: usize, y: usize) -> usize {
        self.a.mul(x, y)
    }

    fn id(&self, id: IdentityId, scope: Scope) -> Verdict {
        if let Some(v) = self.cache.borrow().get(&(id, scope)) {
            return v.clone();
        }
        let cx = IdentityContext {
            algebra: self.a,
            order: &self.o,
            restricted: Some(&self.r),
            circle: self.s.circle.as_ref(),
        };
        let v = cx
            .check(id, scope)
            .expect("prerequisites are checked by the caller");
        self.cache.borrow_mut().insert((id, scope), v.clone());
        v
    }

    fn branchwise(&self, id: IdentityId) -> Verdict {
        self.id(id, Scope::Branchwise)
    }

    fn global(&self, id: IdentityId) -> Verdict {
        self.id(id, Scope::Global)
    }

    fn solid(&self) -> bool {
        self.s.solid
    }

    fn commutative(&self) -> bool {
        self.branchwise(IdentityId::E5).holds()
    }

    fn implicative(&self) -> bool {
        self.branchwise(IdentityId::D51).holds()
    }

    fn weakly_positive_implicative(&self) -> bool {
        self.global(IdentityId::Eq256).holds()
    }

    fn circle(&self) -> Option<&Vec<Vec<usize>>> {
        self.s.circle.as_ref()
    }

    fn top(&self, root: usize) -> usize {
        self.r.greatest[&root].expect("restricted")
    }

    /// `N_a x` for the branch root `a`.
    fn neg(&self, root: usize, x: usize) -> usize {
        self.m(self.top(root), x)
    }

    fn root(&self, x: usize) -> usize {
        self.o.branch_of[x]
    }

    fn involution(&self) -> Verdict {
        Verdict::from(self.r.involution_failure.clone())
    }

    fn group_like(&self) -> Verdict {
        forall_dyn(self.a, "Ker phi = {0}", &["x"], Relation::Eq, |v| {
            (self.m(0, v[0]) == 0).then_some((v[0], 0))
        })
    }

    fn group(&self) -> Option<GroupReport> {
        circle_group_check(self.a, &self.s).ok()
    }

    /// Law over `vars` with the given relation.
    fn law(
        &self,
        law: &str,
        vars: &[&str],
        rel: Relation,
        eval: impl FnMut(&[usize]) -> Option<(usize, usize)>,
    ) -> Verdict {
        forall_dyn(self.a, law, vars, rel, eval)
    }

    fn meet_reports(&self) -> Vec<(usize, LatticeReport)> {
        self.o
            .minimal
            .iter()
            .map(|root| {
                let rep = branch_meet_check(self.a, &self.o, root).expect("root is minimal");
                (root, rep)
            })
            .collect()
    }
}

fn group_failure(g: &GroupReport) -> Verdict {
    first_failure([
        g.identity.clone(),
        g.associativity.clone(),
        g.inverses.clone(),
    ])
}

fn implication(name_pairs: &[(&str, Verdict)]) -> Vec<(String, Verdict)> {
    let mut out = Vec::new();
    for (i, (pi, vi)) in name_pairs.iter().enumerate() {
        for (j, (pj, vj)) in name_pairs.iter().enumerate() {
            if i != j {
                out.push((format!("{pi}=>{pj}"), vj.clone().given(vi.holds())));
            }
        }
    }
    out
}

fn with_all(mut b: Builder, items: Vec<(String, Verdict)>) -> Builder {
    for (name, v) in items {
        b.conclusions.insert(name, v);
    }
    b
}

fn run(p: &Profile<'_>, id: TheoremId) -> TheoremOutcome {
    use IdentityId as I;
    let n = p.n();
    let minimal = p.o.minimal;
    match id {
        TheoremId::Tfi => {
            let phi = |x| p.m(0, x);
            Builder::default()
                .concl(
                    "(1) phi^2 x <= x",
                    p.law("phi^2 x <= x", &["x"], Relation::Leq, |v| {
                        Some((phi(phi(v[0])), v[0]))
                    }),
                )
                .concl(
                    "(2) x <= y => phi x = phi y",
                    p.law("x <= y => phi x = phi y", &["x", "y"], Relation::Eq, |v| {
                        p.o.leq(v[0], v[1]).then(|| (phi(v[0]), phi(v[1])))
                    }),
                )
                .concl(
                    "(3) phi^3 = phi",
                    p.law("phi^3 x = phi x", &["x"], Relation::Eq, |v| {
                        Some((phi(phi(phi(v[0]))), phi(v[0])))
                    }),
                )
                .concl(
                    "(4) phi^2(xy) = phi^2 x phi^2 y",
                    p.law(
                        "phi^2(xy) = phi^2 x * phi^2 y",
                        &["x", "y"],
                        Relation::Eq,
                        |v| {
                            let (x, y) = (v[0], v[1]);
                            Some((phi(phi(p.m(x, y))), p.m(phi(phi(x)), phi(phi(y)))))
                        },
                    ),
                )
                .finish()
        }
        TheoremId::L21 => Builder::default()
            .concl(
                "same branch => xy in B(0)",
                p.law("x ~ y => 0 <= xy", &["x", "y"], Relation::Leq, |v| {
                    p.o.same_branch(v[0], v[1]).then(|| (0, p.m(v[0], v[1])))
                }),
            )
            .concl(
                "xy in B(0) => same branch",
                p.law("0 <= xy => root(x) <= y", &["x", "y"], Relation::Leq, |v| {
                    p.o.leq(0, p.m(v[0], v[1])).then(|| (p.root(v[0]), v[1]))
                }),
            )
            .finish(),
        TheoremId::L22 => {
            let zero = p.o.zero_branch();
            Builder::default()
                .concl(
                    "B(0) closed",
                    p.law("x, y in B(0) => 0 <= xy", &["x", "y"], Relation::Leq, |v| {
                        (zero.contains(v[0]) && zero.contains(v[1])).then(|| (0, p.m(v[0], v[1])))
                    }),
                )
                .concl(
                    "B(0) satisfies (v)",
                    p.law("x in B(0) => 0x = 0", &["x"], Relation::Eq, |v| {
                        zero.contains(v[0]).then(|| (p.m(0, v[0]), 0))
                    }),
                )
                .concl(
                    "every BCC part lies in B(0)",
                    p.law("0x = 0 => 0 <= x", &["x"], Relation::Leq, |v| {
                        (p.m(0, v[0]) == 0).then_some((0, v[0]))
                    }),
                )
                .finish()
        }
        TheoremId::L23 => {
            let containment = p.law(
                "x in B(a), y in B(b) => ab <= xy",
                &["a", "b", "x", "y"],
                Relation::Leq,
                |v| {
                    let (a, b, x, y) = (v[0], v[1], v[2], v[3]);
                    (minimal.contains(a) && minimal.contains(b) && p.root(x) == a && p.root(y) == b)
                        .then(|| (p.m(a, b), p.m(x, y)))
                },
            );
            let equality = minimal.iter().all(|a| {
                minimal.iter().all(|b| {
                    let products: crate::set::ElemSet =
                        p.o.branch(a)
                            .iter()
                            .flat_map(|x| p.o.branch(b).iter().map(move |y| (x, y)))
                            .map(|(x, y)| p.m(x, y))
                            .collect();
                    products == p.o.branch(p.m(a, b))
                })
            });
            Builder::default()
                .concl("B(a)B(b) in B(ab)", containment)
                .note("B(a)B(b) = B(ab)", equality)
                .finish()
        }
        TheoremId::P26 => Builder::default()
            .hyp("solid", p.solid())
            .concl("(a) x*xy <= y", p.branchwise(I::P26A))
            .concl("(b) x(x*xy) = xy", p.branchwise(I::P26B))
            .finish(),
        TheoremId::P211 => Builder::default()
            .hyp("solid", p.solid())
            .concl(
                "phi(xy) = phi x phi y",
                p.law("0(xy) = 0x*0y", &["x", "y"], Relation::Eq, |v| {
                    let (x, y) = (v[0], v[1]);
                    Some((p.m(0, p.m(x, y)), p.m(p.m(0, x), p.m(0, y))))
                }),
            )
            .finish(),
        TheoremId::P212 => Builder::default()
            .hyp("solid", p.solid())
            .concl("xy*xz <= zy", p.branchwise(I::P212))
            .finish(),
        TheoremId::T33 => {
            let semilattice =
                first_failure(p.meet_reports().into_iter().map(|(root, rep)| {
                    tagged(rep.formula_checks["meet = y*yx"].clone(), "a", root)
                }));
            let items = [
                ("(1)", p.branchwise(I::E5)),
                ("(2)", p.branchwise(I::T33_2)),
                ("(3)", p.branchwise(I::T33_3)),
                ("(4)", p.branchwise(I::T33_4)),
                ("(5)", semilattice),
            ];
            with_all(
                Builder::default().hyp("solid", p.solid()),
                implication(&items),
            )
            .finish()
        }
        TheoremId::T35 => {
            let mut lattice = Vec::new();
            let mut distributive = Vec::new();
            let mut meet = Vec::new();
            let mut join = Vec::new();
            for q in 0..n {
                let rep = ap_lattice_check(p.a, &p.o, q);
                lattice.push(tagged(
                    rep.order_checks["lower semilattice"].clone(),
                    "p",
                    q,
                ));
                lattice.push(tagged(
                    rep.order_checks["upper semilattice"].clone(),
                    "p",
                    q,
                ));
                for key in ["meet distributes over join", "join distributes over meet"] {
                    if let Some(v) = rep.order_checks.get(key) {
                        distributive.push(tagged(v.clone(), "p", q));
                    }
                }
                meet.push(tagged(rep.formula_checks["meet = y*yx"].clone(), "p", q));
                join.push(tagged(
                    rep.formula_checks["join = p(px^py)"].clone(),
                    "p",
                    q,
                ));
            }
            Builder::default()
                .hyp("solid", p.solid())
                .hyp("branchwise-commutative", p.commutative())
                .concl("A(p) is a lattice", first_failure(lattice))
                .concl("A(p) is distributive", first_failure(distributive))
                .concl("x^y = y*yx", first_failure(meet))
                .concl("x v_p y = p(px^py)", first_failure(join))
                .finish()
        }
        TheoremId::L37 => {
            let b = Builder::default()
                .hyp("restricted", p.r.is_restricted())
                .hyp("solid", p.solid());
            if !p.r.is_restricted() {
                return b.finish();
            }
            let in_branch =
                |v: &[usize]| minimal.contains(v[0]) && v[1..].iter().all(|&x| p.root(x) == v[0]);
            let ax = ["a", "x"];
            let axy = ["a", "x", "y"];
            b.concl(
                "(1) N_a 1_a = 0",
                p.law("N_a 1_a = 0", &["a"], Relation::Eq, |v| {
                    minimal
                        .contains(v[0])
                        .then(|| (p.neg(v[0], p.top(v[0])), 0))
                }),
            )
            .concl(
                "(1) N_a 0 = 1_a",
                p.law("N_a 0 = 1_a", &["a"], Relation::Eq, |v| {
                    minimal
                        .contains(v[0])
                        .then(|| (p.neg(v[0], 0), p.top(v[0])))
                }),
            )
            .concl(
                "(2) N_a N_a x <= x",
                p.law("N_a N_a x <= x", &ax, Relation::Leq, |v| {
                    in_branch(v).then(|| (p.neg(v[0], p.neg(v[0], v[1])), v[1]))
                }),
            )
            .concl(
                "(3) (N_a x)y = (N_a y)x",
                p.law("(N_a x)y = (N_a y)x", &axy, Relation::Eq, |v| {
                    let (a, x, y) = (v[0], v[1], v[2]);
                    in_branch(v).then(|| (p.m(p.neg(a, x), y), p.m(p.neg(a, y), x)))
                }),
            )
            .concl(
                "(4) x <= y => N_a y <= N_a x",
                p.law("x <= y => N_a y <= N_a x", &axy, Relation::Leq, |v| {
                    let (a, x, y) = (v[0], v[1], v[2]);
                    (in_branch(v) && p.o.leq(x, y)).then(|| (p.neg(a, y), p.neg(a, x)))
                }),
            )
            .concl(
                "(5) N_a x N_a y <= yx",
                p.law("(N_a x)(N_a y) <= yx", &axy, Relation::Leq, |v| {
                    let (a, x, y) = (v[0], v[1], v[2]);
                    in_branch(v).then(|| (p.m(p.neg(a, x), p.neg(a, y)), p.m(y, x)))
                }),
            )
            .concl(
                "(6) N_a N_a N_a x = N_a x",
                p.law("N_a N_a N_a x = N_a x", &ax, Relation::Eq, |v| {
                    let (a, x) = (v[0], v[1]);
                    in_branch(v).then(|| (p.neg(a, p.neg(a, p.neg(a, x))), p.neg(a, x)))
                }),
            )
            .finish()
        }
        TheoremId::P39 => {
            let b = Builder::default()
                .hyp("branchwise-commutative", p.commutative())
                .hyp("restricted", p.r.is_restricted())
                .hyp("solid", p.solid());
            if p.r.is_restricted() {
                b.concl("involutory", p.involution()).finish()
            } else {
                b.finish()
            }
        }
        TheoremId::L310 => {
            let b = Builder::default()
                .hyp("involutory", p.r.is_involutory())
                .hyp("solid", p.solid());
            if p.r.is_restricted() {
                b.concl("xy = (N_a y)(N_a x)", p.branchwise(I::L310))
                    .finish()
            } else {
                b.finish()
            }
        }
        TheoremId::P311 => {
            let b = Builder::default()
                .hyp("restricted", p.r.is_restricted())
                .hyp("solid", p.solid());
            if !p.r.is_restricted() {
                return b.finish();
            }
            let items = [
                ("involutory", p.involution()),
                ("x N_a y = y N_a x", p.branchwise(I::P311)),
            ];
            with_all(b, implication(&items)).finish()
        }
        TheoremId::T312 => {
            let b = Builder::default()
                .hyp("involutory", p.r.is_involutory())
                .hyp("solid", p.solid());
            if !p.r.is_restricted() {
                return b.finish();
            }
            let reps: Vec<(usize, LatticeReport)> = minimal
                .iter()
                .map(|root| {
                    let rep = branch_lattice_check(p.a, &p.o, &p.r, root).expect("restricted");
                    (root, rep)
                })
                .collect();
            let lower =
                first_failure(reps.iter().map(|(root, r)| {
                    tagged(r.order_checks["lower semilattice"].clone(), "a", *root)
                }));
            let lattice = lower.clone().and(|| {
                first_failure(reps.iter().map(|(root, r)| {
                    tagged(r.order_checks["upper semilattice"].clone(), "a", *root)
                }))
            });
            let all_lattices = lattice.holds();
            let formulas = first_failure(reps.iter().flat_map(|(root, r)| {
                r.formula_checks
                    .values()
                    .map(|v| tagged(v.clone(), "a", *root))
                    .collect::<Vec<_>>()
            }));
            let items = [("(1)", lower), ("(2)", lattice)];
            with_all(b, implication(&items))
                .concl("lattices => N_a formulas", formulas.given(all_lattices))
                .finish()
        }
        TheoremId::T42 => {
            let mut items = Vec::new();
            for k in 1..=n {
                let group = [
                    ("(a)", p.branchwise(I::Nb(k))),
                    ("(b)", p.branchwise(I::T42B(k))),
                    ("(c)", p.branchwise(I::T42C(k))),
                ];
                for (name, v) in implication(&group) {
                    items.push((format!("n={k:02} {name}"), v));
                }
            }
            with_all(Builder::default().hyp("solid", p.solid()), items).finish()
        }
        TheoremId::T52 => Builder::default()
            .hyp("solid", p.solid())
            .hyp("branchwise-implicative", p.implicative())
            .concl("branchwise commutative", p.branchwise(I::E5))
            .finish(),
        TheoremId::T53 => Builder::default()
            .hyp("solid", p.solid())
            .hyp("branchwise-implicative", p.implicative())
            .concl("xy*0y = (xy*0y)y*0y", p.branchwise(I::T53Eq))
            .finish(),
        TheoremId::L54 => Builder::default()
            .hyp("solid", p.solid())
            .concl(
                "(xy*0y)y*0y <= ((xy*y)*0y)*0y",
                p.law(
                    "(xy*0y)y*0y <= ((xy*y)*0y)*0y",
                    &["x", "y"],
                    Relation::Leq,
                    |v| {
                        let (x, y) = (v[0], v[1]);
                        let xy = p.m(x, y);
                        let zy = p.m(0, y);
                        p.o.same_branch(x, y)
                            .then(|| (p.m(p.m(p.m(xy, zy), y), zy), p.m(p.m(p.m(xy, y), zy), zy)))
                    },
                ),
            )
            .finish(),
        TheoremId::T55 => {
            let ideal = is_bck_ideal(p.a, p.o.minimal).is_ok();
            Builder::default()
                .hyp("I(G) BCK-ideal", ideal)
                .hyp("branchwise-commutative", p.commutative())
                .hyp("solid", p.solid())
                .hyp("EQ252 branchwise", p.branchwise(I::Eq252).holds())
                .concl("branchwise implicative", p.branchwise(I::D51))
                .finish()
        }
        TheoremId::L59 => Builder::default()
            .hyp("solid", p.solid())
            .hyp(
                "weakly-positive-implicative",
                p.weakly_positive_implicative(),
            )
            .concl("xy = (xy*y)*0y", p.global(I::Eq257))
            .finish(),
        TheoremId::T65 => {
            let phi_impl = p.branchwise(I::Eq255);
            let wpi = p.weakly_positive_implicative();
            let converse_fails = phi_impl.holds() && !wpi;
            Builder::default()
                .hyp("solid", p.solid())
                .hyp("weakly-positive-implicative", wpi)
                .concl("branchwise phi-implicative", phi_impl)
                .note("converse fails here", converse_fails)
                .note("converse fails here, solid", converse_fails && p.solid())
                .finish()
        }
        TheoremId::T613 => {
            let both = p.branchwise(I::Eq255).and(|| p.branchwise(I::E5));
            let items = [
                ("branchwise implicative", p.branchwise(I::D51)),
                ("phi-implicative and commutative", both),
            ];
            with_all(
                Builder::default().hyp("solid", p.solid()),
                implication(&items),
            )
            .finish()
        }
        TheoremId::L71 => l71(p),
        TheoremId::P72 => {
            let s = |x: usize, y: usize| p.m(0, p.m(p.m(0, x), y));
            let in_a = |q: usize, x: usize, y: usize| p.o.leq(p.m(q, x), y);
            Builder::default()
                .hyp("solid", p.solid())
                .concl(
                    "0(0x*y) in A(x,y)",
                    p.law("s = 0(0x*y) => sx <= y", &["x", "y"], Relation::Leq, |v| {
                        let (x, y) = (v[0], v[1]);
                        Some((p.m(s(x, y), x), y))
                    }),
                )
                .concl(
                    "0(0x*y) is least in A(x,y)",
                    p.law(
                        "q in A(x,y) => 0(0x*y) <= q",
                        &["x", "y", "q"],
                        Relation::Leq,
                        |v| {
                            let (x, y, q) = (v[0], v[1], v[2]);
                            in_a(q, x, y).then(|| (s(x, y), q))
                        },
                    ),
                )
                .concl(
                    "A(x,y) in B(a*0b)",
                    p.law(
                        "q in A(x,y) => root(x)*0root(y) <= q",
                        &["x", "y", "q"],
                        Relation::Leq,
                        |v| {
                            let (x, y, q) = (v[0], v[1], v[2]);
                            in_a(q, x, y).then(|| (p.m(p.root(x), p.m(0, p.root(y))), q))
                        },
                    ),
                )
                .finish()
        }
        TheoremId::L78 => {
            let b = Builder::default().hyp("condition-s", p.s.holds);
            let Some(c) = p.circle() else {
                return b.finish();
            };
            b.concl(
                "x <= y => x o z <= y o z",
                p.law(
                    "x <= y => x o z <= y o z",
                    &["x", "y", "z"],
                    Relation::Leq,
                    |v| {
                        let (x, y, z) = (v[0], v[1], v[2]);
                        p.o.leq(x, y).then(|| (c[x][z], c[y][z]))
                    },
                ),
            )
            .finish()
        }
        TheoremId::T79 => {
            let b = Builder::default().hyp("condition-s", p.s.holds);
            let Some(g) = p.group() else {
                return b.finish();
            };
            let items = [("group", group_failure(&g)), ("group-like", p.group_like())];
            with_all(b, implication(&items)).finish()
        }
        TheoremId::C710 => {
            let b = Builder::default().hyp("condition-s", p.s.holds);
            let Some(g) = p.group() else {
                return b.finish();
            };
            let abelian = group_failure(&g).and(|| g.commutativity.clone());
            let gl_bci = p.group_like().and(|| exchange_identity(p.a));
            let items = [("abelian group", abelian), ("group-like BCI", gl_bci)];
            with_all(b, implication(&items)).finish()
        }
        TheoremId::P711 => {
            let b = Builder::default()
                .hyp("solid", p.solid())
                .hyp("condition-s", p.s.holds);
            if p.circle().is_none() {
                return b.finish();
            }
            b.concl("xy*z = x(y o z)", p.branchwise(I::Eq261)).finish()
        }
        TheoremId::T713 => {
            let all =
                first_failure(minimal.iter().map(|root| {
                    Verdict::from(RestrictedInfo::missing_top_witness(p.a, &p.o, root))
                }));
            let some = if p.r.some_branch_restricted() {
                Verdict::Holds
            } else {
                all.clone()
            };
            let items = [("restricted", all), ("some branch restricted", some)];
            with_all(
                Builder::default()
                    .hyp("solid", p.solid())
                    .hyp("condition-s", p.s.holds),
                implication(&items),
            )
            .finish()
        }
        TheoremId::BciIff => {
            let items = [
                ("xy*z = xz*y", exchange_identity(p.a)),
                ("(vi)", p.axioms.results[&Axiom::VI].clone()),
            ];
            with_all(
                Builder::default().hyp("weak BCC", p.class.is_weak_bcc),
                implication(&items),
            )
            .finish()
        }
        TheoremId::CommGlobal => Builder::default()
            .hyp("commutative", p.global(I::E5).holds())
            .concl("(v)", p.axioms.results[&Axiom::V].clone())
            .concl("(vi)", p.axioms.results[&Axiom::VI].clone())
            .finish(),
    }
}

/// The eight items on `A(x,y) = {p : px <= y}`. Each failure is reported
/// as the membership test `px <= y` (or `0 <= y`) that breaks.
fn l71(p: &Profile<'_>) -> TheoremOutcome {
    let m = |x, y| p.m(x, y);
    let leq = |x, y| p.o.leq(x, y);
    let in_a = |q: usize, x: usize, y: usize| leq(m(q, x), y);
    let xyq = ["x", "y", "q"];
    Builder::default()
        .concl(
            "(1) A(0,x) in A(x,0)",
            p.law("q0 <= x => qx <= 0", &["x", "q"], Relation::Leq, |v| {
                let (x, q) = (v[0], v[1]);
                in_a(q, 0, x).then(|| (m(q, x), 0))
            }),
        )
        .concl(
            "(1) A(x,0) in A(0,x)",
            p.law("qx <= 0 => q0 <= x", &["x", "q"], Relation::Leq, |v| {
                let (x, q) = (v[0], v[1]);
                in_a(q, x, 0).then(|| (m(q, 0), x))
            }),
        )
        .concl(
            "(2) 0 in A(x,y) => 0 in A(y,x)",
            p.law("0x <= y => 0y <= x", &["x", "y"], Relation::Leq, |v| {
                let (x, y) = (v[0], v[1]);
                in_a(0, x, y).then(|| (m(0, y), x))
            }),
        )
        .concl(
            "(3) x in A(x,y) => y in B(0)",
            p.law("xx <= y => 0 <= y", &["x", "y"], Relation::Leq, |v| {
                let (x, y) = (v[0], v[1]);
                in_a(x, x, y).then_some((0, y))
            }),
        )
        .concl(
            "(3) y in B(0) => x in A(x,y)",
            p.law("0 <= y => xx <= y", &["x", "y"], Relation::Leq, |v| {
                let (x, y) = (v[0], v[1]);
                leq(0, y).then(|| (m(x, x), y))
            }),
        )
        .concl(
            "(4) x in B(0) => y in A(x,y)",
            p.law("0 <= x => yx <= y", &["x", "y"], Relation::Leq, |v| {
                let (x, y) = (v[0], v[1]);
                leq(0, x).then(|| (m(y, x), y))
            }),
        )
        .concl(
            "(5) x <= u => A(x,y) in A(u,y)",
            p.law(
                "x <= u, qx <= y => qu <= y",
                &["x", "u", "y", "q"],
                Relation::Leq,
                |v| {
                    let (x, u, y, q) = (v[0], v[1], v[2], v[3]);
                    (leq(x, u) && in_a(q, x, y)).then(|| (m(q, u), y))
                },
            ),
        )
        .concl(
            "(6) y <= z => A(x,y) in A(x,z)",
            p.law(
                "y <= z, qx <= y => qx <= z",
                &["x", "y", "z", "q"],
                Relation::Leq,
                |v| {
                    let (x, y, z, q) = (v[0], v[1], v[2], v[3]);
                    (leq(y, z) && in_a(q, x, y)).then(|| (m(q, x), z))
                },
            ),
        )
        .concl(
            "(7) u <= z in A(x,y) => u in A(x,y)",
            p.law(
                "u <= z, zx <= y => ux <= y",
                &["x", "y", "z", "u"],
                Relation::Leq,
                |v| {
                    let (x, y, z, u) = (v[0], v[1], v[2], v[3]);
                    (leq(u, z) && in_a(z, x, y)).then(|| (m(u, x), y))
                },
            ),
        )
        .concl(
            "(8) BCI => A(x,y) = A(y,x)",
            p.law("BCI, qx <= y => qy <= x", &xyq, Relation::Leq, |v| {
                let (x, y, q) = (v[0], v[1], v[2]);
                (p.class.is_bci && in_a(q, x, y)).then(|| (m(q, y), x))
            }),
        )
        .finish()
}

/// Audits `a` against `ids`. The algebra must be weak BCC.
pub fn audit_algebra(a: &Algebra, ids: &[TheoremId]) -> Result<AuditReport, AuditError> {
    let p = Profile::new(a)?;
    let mut outcomes = BTreeMap::new();
    let mut summary = Summary::default();
    for &id in ids {
        let out = run(&p, id);
        match out.status {
            Status::Holds => summary.holds += 1,
            Status::Vacuous => summary.vacuous += 1,
            Status::Counterexample { .. } => summary.counterexamples += 1,
        }
        outcomes.insert(id, out);
    }
    Ok(AuditReport { outcomes, summary })
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CatalogCounterexample {
    /// Position of the model in the audited sequence.
    pub model: usize,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub name: Option<String>,
    pub theorem: TheoremId,
    pub conclusion: String,
    pub witness: Witness,
    pub table: Vec<u8>,
    /// Canonical table, for orders small enough to minimise.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub canonical: Option<Vec<u8>>,
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize)]
pub struct CatalogAudit {
    pub models: usize,
    pub holds: BTreeMap<TheoremId, usize>,
    pub vacuous: BTreeMap<TheoremId, usize>,
    pub counterexamples: Vec<CatalogCounterexample>,
}

impl CatalogAudit {
    fn merge(mut self, other: CatalogAudit) -> CatalogAudit {
        self.models += other.models;
        for (k, v) in other.holds {
            *self.holds.entry(k).or_insert(0) += v;
        }
        for (k, v) in other.vacuous {
            *self.vacuous.entry(k).or_insert(0) += v;
        }
        self.counterexamples.extend(other.counterexamples);
        self
    }
}

/// Audits every model; models are processed in parallel and the result is
/// independent of scheduling.
pub fn audit_catalog(models: &[Algebra], ids: &[TheoremId]) -> Result<CatalogAudit, AuditError> {
    let parts: Vec<CatalogAudit> = models
        .par_iter()
        .enumerate()
        .map(|(index, a)| {
            let report = audit_algebra(a, ids).map_err(|e| match e {
                AuditError::Structure(source) => AuditError::Model { index, source },
                other => other,
            })?;
            let mut part = CatalogAudit {
                models: 1,
                ..CatalogAudit::default()
            };
            for (&id, out) in &report.outcomes {
                match &out.status {
                    Status::Holds => *part.holds.entry(id).or_insert(0) += 1,
                    Status::Vacuous => *part.vacuous.entry(id).or_insert(0) += 1,
                    Status::Counterexample {
                        conclusion,
                        witness,
                    } => part.counterexamples.push(CatalogCounterexample {
                        model: index,
                        name: a.name().map(str::to_string),
                        theorem: id,
                        conclusion: conclusion.clone(),
                        witness: witness.clone(),
                        table: a.bytes().to_vec(),
                        canonical: (a.order() <= CANONICAL_LIMIT).then(|| canonical_form(a)),
                    }),
                }
            }
            Ok(part)
        })
        .collect::<Result<_, AuditError>>()?;
    Ok(parts
        .into_iter()
        .fold(CatalogAudit::default(), CatalogAudit::merge))
}
