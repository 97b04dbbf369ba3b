//! Named identities under their quantification scope, the sets
//! `A(x,y) = {p : px <= y}`, condition (S) and the induced operation.

use std::fmt;
use std::str::FromStr;

use serde::Serialize;
use thiserror::Error;

use crate::laws::{forall, forall_dyn};
use crate::model::{Algebra, ModelError, Relation, Verdict, Witness};
use crate::set::ElemSet;
use crate::structure::{restricted_info, OrderInfo, RestrictedInfo};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum PropertyError {
    #[error("{id} requires {what}")]
    PrerequisiteNotMet { id: String, what: &'static str },
    #[error("condition (S) does not hold")]
    ConditionSAbsent,
    #[error("unknown identity tag `{0}`")]
    UnknownIdentity(String),
    #[error(transparent)]
    Model(#[from] ModelError),
}

/// Which variables an identity quantifies over.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Scope {
    /// All variables range over the whole algebra.
    Global,
    /// The identity's branch-bound variables share one branch.
    Branchwise,
    /// Only `x` and `y` share a branch; any further variable is free.
    BranchwiseXy,
}

impl FromStr for Scope {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "global" => Ok(Scope::Global),
            "branchwise" => Ok(Scope::Branchwise),
            "branchwise-xy" => Ok(Scope::BranchwiseXy),
            other => Err(format!("unknown scope `{other}`")),
        }
    }
}

/// The catalog of identities and inequalities.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum IdentityId {
    /// `xy*z = xz*y`, x, y in one branch, z arbitrary.
    ISolid,
    /// `x*xy = y*yx`
    E5,
    /// `xy = x(y * yx^n)`
    Nb(usize),
    /// `x*yx = x`
    D51,
    /// `xy*0y = ((xy*y)*0y)*0y`
    Eq252,
    /// `xy*y = xy`
    Eq253,
    /// `xy*z = xz*yz`
    Eq254,
    /// `xy = xy*y(0*0y)`
    Eq255,
    /// `xy*z = (xz*z)*yz`
    Eq256,
    /// `xy = (xy*y)*0y`
    Eq257,
    /// `xy*0y = (xy*0y)y*0y`
    T53Eq,
    /// `xy*z = x(y o z)`, z in B(0)
    Eq261,
    /// `xy = (N_a y)(N_a x)`
    L310,
    /// `x N_a y = y N_a x`
    P311,
    /// `x*xy <= y`
    P26A,
    /// `x(x*xy) = xy`
    P26B,
    /// `xy*xz <= zy` when xy, xz (or xy, zy) share a branch
    P212,
    /// `x*xy <= y*yx^n`
    T42B(usize),
    /// `x <= y => x <= y*yx^n`
    T42C(usize),
    /// `xy = x(y*yx)`
    T33_2,
    /// `x <= y => x = y*yx`
    T33_3,
    /// `x*xy = y(y(x*xy))`
    T33_4,
}

impl IdentityId {
    /// Every fixed-arity tag plus the `n = 1` members of the families.
    pub const CATALOG: [IdentityId; 22] = [
        IdentityId::ISolid,
        IdentityId::E5,
        IdentityId::Nb(1),
        IdentityId::D51,
        IdentityId::Eq252,
        IdentityId::Eq253,
        IdentityId::Eq254,
        IdentityId::Eq255,
        IdentityId::Eq256,
        IdentityId::Eq257,
        IdentityId::T53Eq,
        IdentityId::Eq261,
        IdentityId::L310,
        IdentityId::P311,
        IdentityId::P26A,
        IdentityId::P26B,
        IdentityId::P212,
        IdentityId::T42B(1),
        IdentityId::T42C(1),
        IdentityId::T33_2,
        IdentityId::T33_3,
        IdentityId::T33_4,
    ];

    pub fn tag(self) -> String {
        match self {
            IdentityId::ISolid => "I_SOLID".into(),
            IdentityId::E5 => "E5".into(),
            IdentityId::Nb(n) => format!("NB({n})"),
            IdentityId::D51 => "D51".into(),
            IdentityId::Eq252 => "EQ252".into(),
            IdentityId::Eq253 => "EQ253".into(),
            IdentityId::Eq254 => "EQ254".into(),
            IdentityId::Eq255 => "EQ255".into(),
            IdentityId::Eq256 => "EQ256".into(),
            IdentityId::Eq257 => "EQ257".into(),
            IdentityId::T53Eq => "T53EQ".into(),
            IdentityId::Eq261 => "EQ261".into(),
            IdentityId::L310 => "L310".into(),
            IdentityId::P311 => "P311".into(),
            IdentityId::P26A => "P26A".into(),
            IdentityId::P26B => "P26B".into(),
            IdentityId::P212 => "P212".into(),
            IdentityId::T42B(n) => format!("T42B({n})"),
            IdentityId::T42C(n) => format!("T42C({n})"),
            IdentityId::T33_2 => "T33_2".into(),
            IdentityId::T33_3 => "T33_3".into(),
            IdentityId::T33_4 => "T33_4".into(),
        }
    }

    pub fn formula(self) -> &'static str {
        match self {
            IdentityId::ISolid => "xy*z = xz*y",
            IdentityId::E5 => "x*xy = y*yx",
            IdentityId::Nb(_) => "xy = x(y*yx^n)",
            IdentityId::D51 => "x*yx = x",
            IdentityId::Eq252 => "xy*0y = ((xy*y)*0y)*0y",
            IdentityId::Eq253 => "xy*y = xy",
            IdentityId::Eq254 => "xy*z = xz*yz",
            IdentityId::Eq255 => "xy = xy*y(0*0y)",
            IdentityId::Eq256 => "xy*z = (xz*z)*yz",
            IdentityId::Eq257 => "xy = (xy*y)*0y",
            IdentityId::T53Eq => "xy*0y = (xy*0y)y*0y",
            IdentityId::Eq261 => "xy*z = x(y o z), z in B(0)",
            IdentityId::L310 => "xy = (N_a y)(N_a x)",
            IdentityId::P311 => "x(N_a y) = y(N_a x)",
            IdentityId::P26A => "x*xy <= y",
            IdentityId::P26B => "x(x*xy) = xy",
            IdentityId::P212 => "xy*xz <= zy when xy~xz or xy~zy",
            IdentityId::T42B(_) => "x*xy <= y*yx^n",
            IdentityId::T42C(_) => "x <= y => x <= y*yx^n",
            IdentityId::T33_2 => "xy = x(y*yx)",
            IdentityId::T33_3 => "x <= y => x = y*yx",
            IdentityId::T33_4 => "x*xy = y(y(x*xy))",
        }
    }

    pub fn vars(self) -> &'static [&'static str] {
        match self {
            IdentityId::ISolid
            | IdentityId::Eq254
            | IdentityId::Eq256
            | IdentityId::Eq261
            | IdentityId::P212 => &["x", "y", "z"],
            _ => &["x", "y"],
        }
    }

    pub fn relation(self) -> Relation {
        match self {
            IdentityId::P26A | IdentityId::P212 | IdentityId::T42B(_) | IdentityId::T42C(_) => {
                Relation::Leq
            }
            _ => Relation::Eq,
        }
    }

    /// Indices into [`vars`](Self::vars) that must share a branch under
    /// [`Scope::Branchwise`].
    pub fn branch_vars(self) -> &'static [usize] {
        match self {
            IdentityId::Eq254 | IdentityId::Eq256 => &[0, 1, 2],
            // Guarded statements carry their own side condition.
            IdentityId::P212 | IdentityId::T42C(_) | IdentityId::T33_3 => &[],
            _ => &[0, 1],
        }
    }

    pub fn default_scope(self) -> Scope {
        match self {
            IdentityId::Eq253 | IdentityId::Eq254 | IdentityId::Eq255 | IdentityId::Eq256 => {
                Scope::Global
            }
            _ => Scope::Branchwise,
        }
    }

    fn needs_restricted(self) -> bool {
        matches!(self, IdentityId::L310 | IdentityId::P311)
    }

    fn needs_circle(self) -> bool {
        matches!(self, IdentityId::Eq261)
    }

    /// Sides of the relation at `v`, or `None` when the assignment is
    /// outside the statement's side conditions.
    fn eval(self, cx: &IdentityContext<'_>, v: &[usize]) -> Option<(usize, usize)> {
        let a = cx.algebra;
        let o = cx.order;
        let m = |x, y| a.mul(x, y);
        let (x, y) = (v[0], v[1]);
        let z = v.get(2).copied().unwrap_or(0);
        let sides = match self {
            IdentityId::ISolid => (m(m(x, y), z), m(m(x, z), y)),
            IdentityId::E5 => (m(x, m(x, y)), m(y, m(y, x))),
            IdentityId::Nb(n) => (m(x, y), m(x, m(y, a.pow(y, x, n)))),
            IdentityId::D51 => (m(x, m(y, x)), x),
            IdentityId::Eq252 => {
                let oy = m(0, y);
                (m(m(x, y), oy), m(m(m(m(x, y), y), oy), oy))
            }
            IdentityId::Eq253 => (m(m(x, y), y), m(x, y)),
            IdentityId::Eq254 => (m(m(x, y), z), m(m(x, z), m(y, z))),
            IdentityId::Eq255 => (m(x, y), m(m(x, y), m(y, m(0, m(0, y))))),
            IdentityId::Eq256 => (m(m(x, y), z), m(m(m(x, z), z), m(y, z))),
            IdentityId::Eq257 => (m(x, y), m(m(m(x, y), y), m(0, y))),
            IdentityId::T53Eq => {
                let w = m(m(x, y), m(0, y));
                (w, m(m(w, y), m(0, y)))
            }
            IdentityId::Eq261 => {
                if !o.leq(0, z) {
                    return None;
                }
                let circle = cx.circle.expect("circle table present");
                (m(m(x, y), z), m(x, circle[y][z]))
            }
            IdentityId::L310 | IdentityId::P311 => {
                if !o.same_branch(x, y) {
                    return None;
                }
                let r = cx.restricted.expect("restricted info present");
                let top = r.top(o.branch_of[x]).expect("restricted");
                if self == IdentityId::L310 {
                    (m(x, y), m(m(top, y), m(top, x)))
                } else {
                    (m(x, m(top, y)), m(y, m(top, x)))
                }
            }
            IdentityId::P26A => (m(x, m(x, y)), y),
            IdentityId::P26B => (m(x, m(x, m(x, y))), m(x, y)),
            IdentityId::P212 => {
                let (xy, xz, zy) = (m(x, y), m(x, z), m(z, y));
                if !(o.same_branch(xy, xz) || o.same_branch(xy, zy)) {
                    return None;
                }
                (m(xy, xz), zy)
            }
            IdentityId::T42B(n) => (m(x, m(x, y)), m(y, a.pow(y, x, n))),
            IdentityId::T42C(n) => {
                if !o.leq(x, y) {
                    return None;
                }
                (x, m(y, a.pow(y, x, n)))
            }
            IdentityId::T33_2 => (m(x, y), m(x, m(y, m(y, x)))),
            IdentityId::T33_3 => {
                if !o.leq(x, y) {
                    return None;
                }
                (x, m(y, m(y, x)))
            }
            IdentityId::T33_4 => {
                let xxy = m(x, m(x, y));
                (xxy, m(y, m(y, xxy)))
            }
        };
        Some(sides)
    }
}

impl fmt::Display for IdentityId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.tag())
    }
}

impl Serialize for IdentityId {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&self.tag())
    }
}

impl FromStr for IdentityId {
    type Err = PropertyError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let up = s.trim().to_ascii_uppercase();
        let family = |prefix: &str| -> Option<usize> {
            up.strip_prefix(prefix)?
                .strip_prefix('(')?
                .strip_suffix(')')?
                .parse()
                .ok()
                .filter(|&n| n >= 1)
        };
        if let Some(n) = family("NB") {
            return Ok(IdentityId::Nb(n));
        }
        if let Some(n) = family("T42B") {
            return Ok(IdentityId::T42B(n));
        }
        if let Some(n) = family("T42C") {
            return Ok(IdentityId::T42C(n));
        }
        IdentityId::CATALOG
            .into_iter()
            .filter(|id| {
                !matches!(
                    id,
                    IdentityId::Nb(_) | IdentityId::T42B(_) | IdentityId::T42C(_)
                )
            })
            .find(|id| id.tag() == up)
            .ok_or_else(|| PropertyError::UnknownIdentity(s.to_string()))
    }
}

/// Everything identity evaluation may need besides the table.
pub struct IdentityContext<'a> {
    pub algebra: &'a Algebra,
    pub order: &'a OrderInfo,
    pub restricted: Option<&'a RestrictedInfo>,
    pub circle: Option<&'a Vec<Vec<usize>>>,
}

impl<'a> IdentityContext<'a> {
    pub fn new(algebra: &'a Algebra, order: &'a OrderInfo) -> Self {
        IdentityContext {
            algebra,
            order,
            restricted: None,
            circle: None,
        }
    }

    fn in_scope(&self, id: IdentityId, scope: Scope, v: &[usize]) -> bool {
        let vars: &[usize] = match scope {
            Scope::Global => &[],
            Scope::Branchwise => id.branch_vars(),
            Scope::BranchwiseXy => {
                let b = id.branch_vars();
                &b[..b.len().min(2)]
            }
        };
        vars.windows(2)
            .all(|w| self.order.same_branch(v[w[0]], v[w[1]]))
    }

    fn check_prerequisites(&self, id: IdentityId) -> Result<(), PropertyError> {
        if id.needs_restricted() && !self.restricted.is_some_and(RestrictedInfo::is_restricted) {
            return Err(PropertyError::PrerequisiteNotMet {
                id: id.tag(),
                what: "a restricted algebra",
            });
        }
        if id.needs_circle() && self.circle.is_none() {
            return Err(PropertyError::PrerequisiteNotMet {
                id: id.tag(),
                what: "condition (S)",
            });
        }
        Ok(())
    }

    pub fn check(&self, id: IdentityId, scope: Scope) -> Result<Verdict, PropertyError> {
        self.check_prerequisites(id)?;
        let law = format!("{}: {}", id.tag(), id.formula());
        Ok(forall_dyn(
            self.algebra,
            &law,
            id.vars(),
            id.relation(),
            |v| {
                if !self.in_scope(id, scope, v) {
                    return None;
                }
                id.eval(self, v)
            },
        ))
    }

    /// Evaluates a single assignment. Returns the witness when it violates
    /// the identity, `None` when it satisfies it or lies outside the scope.
    pub fn failure_at(
        &self,
        id: IdentityId,
        scope: Scope,
        values: &[usize],
    ) -> Result<Option<Witness>, PropertyError> {
        self.check_prerequisites(id)?;
        if values.len() != id.vars().len() {
            return Err(PropertyError::PrerequisiteNotMet {
                id: id.tag(),
                what: "one value per variable",
            });
        }
        for &v in values {
            if v >= self.algebra.order() {
                return Err(ModelError::IndexOutOfRange {
                    index: v,
                    order: self.algebra.order(),
                }
                .into());
            }
        }
        if !self.in_scope(id, scope, values) {
            return Ok(None);
        }
        Ok(id.eval(self, values).and_then(|(l, r)| {
            let w = Witness::new(
                format!("{}: {}", id.tag(), id.formula()),
                id.vars(),
                values,
                l,
                r,
                id.relation(),
            );
            w.is_violation(self.algebra).then_some(w)
        }))
    }
}

/// Checks `id` at its default scope, computing any auxiliary structure
/// (greatest elements, the induced operation) on the way.
pub fn check_identity(
    a: &Algebra,
    o: &OrderInfo,
    id: IdentityId,
) -> Result<Verdict, PropertyError> {
    check_identity_scoped(a, o, id, id.default_scope())
}

pub fn check_identity_scoped(
    a: &Algebra,
    o: &OrderInfo,
    id: IdentityId,
    scope: Scope,
) -> Result<Verdict, PropertyError> {
    let restricted = id.needs_restricted().then(|| restricted_info(a, o));
    let s = id.needs_circle().then(|| condition_s(a, o));
    let cx = IdentityContext {
        algebra: a,
        order: o,
        restricted: restricted.as_ref(),
        circle: s.as_ref().and_then(|s| s.circle.as_ref()),
    };
    cx.check(id, scope)
}

/// Solidity: `xy*z = xz*y` for x, y in a common branch and arbitrary z.
pub fn is_solid(a: &Algebra, o: &OrderInfo) -> Verdict {
    IdentityContext::new(a, o)
        .check(IdentityId::ISolid, Scope::Branchwise)
        .expect("no prerequisites")
}

/// Smallest `n` in `1..=bound` for which the algebra is n-fold branchwise
/// commutative.
pub fn min_commutative_fold(a: &Algebra, o: &OrderInfo, bound: usize) -> Option<usize> {
    let cx = IdentityContext::new(a, o);
    (1..=bound).find(|&n| {
        cx.check(IdentityId::Nb(n), Scope::Branchwise)
            .expect("no prerequisites")
            .holds()
    })
}

/// `A(x,y) = {p : px <= y}`.
pub fn a_set(a: &Algebra, o: &OrderInfo, x: usize, y: usize) -> Result<ElemSet, ModelError> {
    a.product(x, y)?;
    Ok(a_set_unchecked(a, o, x, y))
}

pub(crate) fn a_set_unchecked(a: &Algebra, o: &OrderInfo, x: usize, y: usize) -> ElemSet {
    a.elements().filter(|&p| o.leq(a.mul(p, x), y)).collect()
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct FailingPair {
    pub x: usize,
    pub y: usize,
    pub a_set: ElemSet,
    pub maximal: ElemSet,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ConditionSReport {
    pub holds: bool,
    /// Solidity of the algebra; the strict definition of condition (S)
    /// requires it.
    pub solid: bool,
    /// `circle[x][y]` is the greatest element of `A(x,y)`.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub circle: Option<Vec<Vec<usize>>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub failing_pair: Option<FailingPair>,
}

impl ConditionSReport {
    /// Condition (S) in the strict sense: solid and every `A(x,y)` has a
    /// greatest element.
    pub fn holds_strictly(&self) -> bool {
        self.holds && self.solid
    }
}

pub fn condition_s(a: &Algebra, o: &OrderInfo) -> ConditionSReport {
    let n = a.order();
    let solid = is_solid(a, o).holds();
    let mut circle = vec![vec![0; n]; n];
    for (x, row) in circle.iter_mut().enumerate() {
        for (y, cell) in row.iter_mut().enumerate() {
            let set = a_set_unchecked(a, o, x, y);
            match o.greatest_in(set) {
                Some(g) => *cell = g,
                None => {
                    return ConditionSReport {
                        holds: false,
                        solid,
                        circle: None,
                        failing_pair: Some(FailingPair {
                            x,
                            y,
                            a_set: set,
                            maximal: o.maximal_in(set),
                        }),
                    }
                }
            }
        }
    }
    ConditionSReport {
        holds: true,
        solid,
        circle: Some(circle),
        failing_pair: None,
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct GroupReport {
    pub is_group: bool,
    pub is_abelian: bool,
    pub identity: Verdict,
    pub associativity: Verdict,
    pub inverses: Verdict,
    pub commutativity: Verdict,
}

/// Group axioms for the induced operation.
pub fn circle_group_check(a: &Algebra, s: &ConditionSReport) -> Result<GroupReport, PropertyError> {
    let c = s.circle.as_ref().ok_or(PropertyError::ConditionSAbsent)?;
    let n = a.order();
    let identity = forall(a, "0 o x = x = x o 0", ["x"], Relation::Eq, |[x]| {
        Some(if c[0][x] != x {
            (c[0][x], x)
        } else {
            (c[x][0], x)
        })
    });
    let associativity = forall(
        a,
        "(x o y) o z = x o (y o z)",
        ["x", "y", "z"],
        Relation::Eq,
        |[x, y, z]| Some((c[c[x][y]][z], c[x][c[y][z]])),
    );
    let inverses = forall(
        a,
        "x o y = 0 = y o x for some y",
        ["x"],
        Relation::Eq,
        |[x]| {
            let invertible = (0..n).any(|y| c[x][y] == 0 && c[y][x] == 0);
            (!invertible).then_some((x, 0))
        },
    );
    let commutativity = forall(a, "x o y = y o x", ["x", "y"], Relation::Eq, |[x, y]| {
        Some((c[x][y], c[y][x]))
    });
    let is_group = identity.holds() && associativity.holds() && inverses.holds();
    Ok(GroupReport {
        is_group,
        is_abelian: is_group && commutativity.holds(),
        identity,
        associativity,
        inverses,
        commutativity,
    })
}
