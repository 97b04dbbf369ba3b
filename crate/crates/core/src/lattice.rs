//! Lattice structure of branches and of the down-sets `A(p) = {x : x <= p}`.
//!
//! Meets and joins are always the order-theoretic glb/lub inside the
//! carrier; the algebraic formulas are checked against them.

use std::collections::BTreeMap;

use serde::Serialize;
use thiserror::Error;

use crate::model::{Algebra, Relation, Verdict, Witness};
use crate::properties::is_solid;
use crate::properties::{IdentityContext, IdentityId, Scope};
use crate::set::ElemSet;
use crate::structure::{OrderInfo, RestrictedInfo};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum LatticeError {
    #[error("{0} is not a minimal element")]
    NotMinimal(usize),
    #[error("branch {0} has no greatest element")]
    PrerequisiteNotMet(usize),
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct LatticeReport {
    pub carrier: ElemSet,
    pub is_lower_semilattice: bool,
    pub is_upper_semilattice: bool,
    pub is_lattice: bool,
    pub is_distributive: bool,
    /// `meet[x][y]` for carrier members `x, y`, when the glb exists.
    pub meet: Vec<Vec<Option<usize>>>,
    pub join: Vec<Vec<Option<usize>>>,
    /// Order-theoretic failures (missing glb/lub, distributive laws).
    pub order_checks: BTreeMap<String, Verdict>,
    /// Algebraic formulas compared with the order-theoretic meet/join.
    pub formula_checks: BTreeMap<String, Verdict>,
    /// Set when the hypotheses of the corresponding structure theorem do
    /// not hold; the checks still ran.
    pub informational: bool,
}

impl LatticeReport {
    pub fn formulas_hold(&self) -> bool {
        self.formula_checks.values().all(Verdict::holds)
    }

    pub fn meet_of(&self, x: usize, y: usize) -> Option<usize> {
        self.meet.get(x)?.get(y).copied().flatten()
    }

    pub fn join_of(&self, x: usize, y: usize) -> Option<usize> {
        self.join.get(x)?.get(y).copied().flatten()
    }
}

/// Greatest lower bound of `x, y` inside `carrier`.
pub fn glb(o: &OrderInfo, carrier: ElemSet, x: usize, y: usize) -> Option<usize> {
    o.greatest_in(lower_bounds(o, carrier, x, y))
}

/// Least upper bound of `x, y` inside `carrier`.
pub fn lub(o: &OrderInfo, carrier: ElemSet, x: usize, y: usize) -> Option<usize> {
    o.least_in(upper_bounds(o, carrier, x, y))
}

fn lower_bounds(o: &OrderInfo, carrier: ElemSet, x: usize, y: usize) -> ElemSet {
    carrier
        .iter()
        .filter(|&u| o.leq(u, x) && o.leq(u, y))
        .collect()
}

fn upper_bounds(o: &OrderInfo, carrier: ElemSet, x: usize, y: usize) -> ElemSet {
    carrier
        .iter()
        .filter(|&u| o.leq(x, u) && o.leq(y, u))
        .collect()
}

/// Witness that `x, y` have no glb (`upper = false`) or lub in `carrier`:
/// two incomparable extremal bounds `b1, b2`, reported as `b1 <= b2` failing.
fn missing_bound_witness(
    o: &OrderInfo,
    carrier: ElemSet,
    x: usize,
    y: usize,
    upper: bool,
) -> Witness {
    let (law, bounds) = if upper {
        (
            "x, y have a least upper bound",
            upper_bounds(o, carrier, x, y),
        )
    } else {
        (
            "x, y have a greatest lower bound",
            lower_bounds(o, carrier, x, y),
        )
    };
    // Extremal bounds: maximal lower bounds or minimal upper bounds.
    let extremal: Vec<usize> = bounds
        .iter()
        .filter(|&b| {
            bounds
                .iter()
                .all(|c| c == b || !(if upper { o.leq(c, b) } else { o.leq(b, c) }))
        })
        .collect();
    match extremal.as_slice() {
        [] => Witness::new(law, &["x", "y"], &[x, y], x, y, Relation::Leq),
        [b1] => Witness::new(law, &["x", "y", "b"], &[x, y, *b1], *b1, *b1, Relation::Eq),
        [b1, b2, ..] => {
            let (l, r) = if upper { (*b2, *b1) } else { (*b1, *b2) };
            Witness::new(
                law,
                &["x", "y", "b1", "b2"],
                &[x, y, *b1, *b2],
                l,
                r,
                Relation::Leq,
            )
        }
    }
}

/// Order-theoretic part shared by every carrier.
fn order_report(a: &Algebra, o: &OrderInfo, carrier: ElemSet) -> LatticeReport {
    let n = a.order();
    let mut meet = vec![vec![None; n]; n];
    let mut join = vec![vec![None; n]; n];
    let mut meet_missing = None;
    let mut join_missing = None;
    for x in carrier {
        for y in carrier {
            meet[x][y] = glb(o, carrier, x, y);
            join[x][y] = lub(o, carrier, x, y);
            if meet[x][y].is_none() && meet_missing.is_none() {
                meet_missing = Some(missing_bound_witness(o, carrier, x, y, false));
            }
            if join[x][y].is_none() && join_missing.is_none() {
                join_missing = Some(missing_bound_witness(o, carrier, x, y, true));
            }
        }
    }
    let is_lower = meet_missing.is_none();
    let is_upper = join_missing.is_none();
    let is_lattice = is_lower && is_upper;

    let mut order_checks = BTreeMap::new();
    order_checks.insert("lower semilattice".to_string(), Verdict::from(meet_missing));
    order_checks.insert("upper semilattice".to_string(), Verdict::from(join_missing));

    let mut is_distributive = false;
    if is_lattice {
        let m = |x: usize, y: usize| meet[x][y].unwrap();
        let j = |x: usize, y: usize| join[x][y].unwrap();
        let mut first = None;
        let mut second = None;
        'scan: for x in carrier {
            for y in carrier {
                for z in carrier {
                    let (l1, r1) = (m(x, j(y, z)), j(m(x, y), m(x, z)));
                    if l1 != r1 && first.is_none() {
                        first = Some(Witness::new(
                            "x^(yvz) = (x^y)v(x^z)",
                            &["x", "y", "z"],
                            &[x, y, z],
                            l1,
                            r1,
                            Relation::Eq,
                        ));
                    }
                    let (l2, r2) = (j(x, m(y, z)), m(j(x, y), j(x, z)));
                    if l2 != r2 && second.is_none() {
                        second = Some(Witness::new(
                            "xv(y^z) = (xvy)^(xvz)",
                            &["x", "y", "z"],
                            &[x, y, z],
                            l2,
                            r2,
                            Relation::Eq,
                        ));
                    }
                    if first.is_some() && second.is_some() {
                        break 'scan;
                    }
                }
            }
        }
        // The two laws are equivalent in any lattice.
        debug_assert_eq!(first.is_none(), second.is_none());
        is_distributive = first.is_none() && second.is_none();
        order_checks.insert(
            "meet distributes over join".to_string(),
            Verdict::from(first),
        );
        order_checks.insert(
            "join distributes over meet".to_string(),
            Verdict::from(second),
        );
    }

    LatticeReport {
        carrier,
        is_lower_semilattice: is_lower,
        is_upper_semilattice: is_upper,
        is_lattice,
        is_distributive,
        meet,
        join,
        order_checks,
        formula_checks: BTreeMap::new(),
        informational: false,
    }
}

/// Compares `formula(x, y)` with the order-theoretic bound on every pair of
/// `carrier` members.
fn formula_check(
    o: &OrderInfo,
    carrier: ElemSet,
    law: &str,
    bound: &[Vec<Option<usize>>],
    upper: bool,
    formula: impl Fn(usize, usize) -> Result<usize, Witness>,
) -> Verdict {
    for x in carrier {
        for y in carrier {
            let value = match formula(x, y) {
                Ok(v) => v,
                Err(w) => return Verdict::Fails(w),
            };
            match bound[x][y] {
                None => {
                    let mut w = missing_bound_witness(o, carrier, x, y, upper);
                    w.law = format!("{law} (bound missing: {})", w.law);
                    return Verdict::Fails(w);
                }
                Some(b) if b != value => {
                    return Verdict::Fails(Witness::new(
                        law,
                        &["x", "y"],
                        &[x, y],
                        value,
                        b,
                        Relation::Eq,
                    ))
                }
                Some(_) => {}
            }
        }
    }
    Verdict::Holds
}

fn check_root(o: &OrderInfo, root: usize) -> Result<(), LatticeError> {
    if root < o.order() && o.minimal.contains(root) {
        Ok(())
    } else {
        Err(LatticeError::NotMinimal(root))
    }
}

fn branchwise_commutative(a: &Algebra, o: &OrderInfo) -> bool {
    IdentityContext::new(a, o)
        .check(IdentityId::E5, Scope::Branchwise)
        .expect("no prerequisites")
        .holds()
}

/// The branch `B(root)` under `x ^ y = y * yx`.
pub fn branch_meet_check(
    a: &Algebra,
    o: &OrderInfo,
    root: usize,
) -> Result<LatticeReport, LatticeError> {
    check_root(o, root)?;
    let carrier = o.branch(root);
    let mut r = order_report(a, o, carrier);
    let v = formula_check(o, carrier, "x^y = y*yx", &r.meet, false, |x, y| {
        Ok(a.mul(y, a.mul(y, x)))
    });
    r.formula_checks.insert("meet = y*yx".to_string(), v);
    r.informational = !is_solid(a, o).holds();
    Ok(r)
}

/// The down-set `A(p)` under `x ^ y = y * yx` and `x v y = p(px ^ py)`.
pub fn ap_lattice_check(a: &Algebra, o: &OrderInfo, p: usize) -> LatticeReport {
    let carrier = o.down_set(p);
    let mut r = order_report(a, o, carrier);
    let wedge = |x: usize, y: usize| a.mul(y, a.mul(y, x));
    let v = formula_check(o, carrier, "x^y = y*yx", &r.meet, false, |x, y| {
        Ok(wedge(x, y))
    });
    r.formula_checks.insert("meet = y*yx".to_string(), v);
    let v = formula_check(o, carrier, "xvy = p(px^py)", &r.join, true, |x, y| {
        Ok(a.mul(p, wedge(a.mul(p, x), a.mul(p, y))))
    });
    r.formula_checks.insert("join = p(px^py)".to_string(), v);
    r.informational = !(is_solid(a, o).holds() && branchwise_commutative(a, o));
    r
}

/// The branch `B(root)` of a restricted algebra, with meet and join
/// expressed through `N_a x = 1_a x`:
/// `x ^ y = N_a(N_a x v N_a y)` and `x v y = N_a(N_a x ^ N_a y)`, where the
/// inner bounds are taken in the branch holding the `N_a` images.
pub fn branch_lattice_check(
    a: &Algebra,
    o: &OrderInfo,
    r: &RestrictedInfo,
    root: usize,
) -> Result<LatticeReport, LatticeError> {
    check_root(o, root)?;
    let top = r
        .top(root)
        .map_err(|_| LatticeError::PrerequisiteNotMet(root))?;
    let carrier = o.branch(root);
    let mut rep = order_report(a, o, carrier);
    let n_op = |x: usize| a.mul(top, x);

    let image_bound = |u: usize, v: usize, upper: bool| -> Result<usize, Witness> {
        let home = o.branch(o.branch_of[u]);
        let b = if upper {
            lub(o, home, u, v)
        } else {
            glb(o, home, u, v)
        };
        b.ok_or_else(|| missing_bound_witness(o, home, u, v, upper))
    };

    let v = formula_check(o, carrier, "x^y = N(Nx v Ny)", &rep.meet, false, |x, y| {
        Ok(n_op(image_bound(n_op(x), n_op(y), true)?))
    });
    rep.formula_checks
        .insert("meet = N(Nx v Ny)".to_string(), v);
    let v = formula_check(o, carrier, "xvy = N(Nx ^ Ny)", &rep.join, true, |x, y| {
        Ok(n_op(image_bound(n_op(x), n_op(y), false)?))
    });
    rep.formula_checks
        .insert("join = N(Nx ^ Ny)".to_string(), v);
    rep.informational = !(is_solid(a, o).holds() && r.is_involutory());
    Ok(rep)
}
