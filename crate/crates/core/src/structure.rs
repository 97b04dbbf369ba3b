//! The order-theoretic skeleton of a weak BCC-algebra: the induced order,
//! the map `phi(x) = 0x`, its kernel, the minimal elements, branches,
//! greatest elements of branches, and ideal membership tests.

use std::collections::BTreeMap;

use serde::Serialize;
use thiserror::Error;

use crate::axioms::{check_axioms, Axiom};
use crate::laws::forall;
use crate::model::{Algebra, Relation, Verdict, Witness};
use crate::set::ElemSet;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum StructureError {
    #[error("not a weak BCC-algebra: axiom ({axiom}) fails: {witness}")]
    NotWeakBcc { axiom: Axiom, witness: Witness },
    #[error("element {element} lies above {candidates} minimal elements, expected exactly one")]
    Unassignable { element: usize, candidates: usize },
    #[error("group-like characterizations disagree: kernel={kernel:?}, minimal={minimal:?}")]
    Inconsistent { kernel: ElemSet, minimal: ElemSet },
    #[error("branch {0} has no greatest element")]
    NotRestricted(usize),
    #[error("{0} is not a minimal element")]
    NotMinimal(usize),
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct OrderInfo {
    order: usize,
    /// `up[x]` is the set of `y` with `x <= y`.
    #[serde(skip)]
    up: Vec<ElemSet>,
    pub phi: Vec<usize>,
    pub kernel: ElemSet,
    pub minimal: ElemSet,
    pub branch_of: Vec<usize>,
}

impl OrderInfo {
    pub fn order(&self) -> usize {
        self.order
    }

    #[inline]
    pub fn leq(&self, x: usize, y: usize) -> bool {
        self.up[x].contains(y)
    }

    /// `{y : x <= y}`
    pub fn up_set(&self, x: usize) -> ElemSet {
        self.up[x]
    }

    /// `{y : y <= x}`
    pub fn down_set(&self, x: usize) -> ElemSet {
        (0..self.order).filter(|&y| self.leq(y, x)).collect()
    }

    #[inline]
    pub fn same_branch(&self, x: usize, y: usize) -> bool {
        self.branch_of[x] == self.branch_of[y]
    }

    /// `B(root)`; empty when `root` is not minimal.
    pub fn branch(&self, root: usize) -> ElemSet {
        (0..self.order)
            .filter(|&x| self.branch_of[x] == root)
            .collect()
    }

    /// Roots with their branches, in root order.
    pub fn branches(&self) -> Vec<(usize, ElemSet)> {
        self.minimal.iter().map(|r| (r, self.branch(r))).collect()
    }

    /// `B(0)`, which equals the kernel of `phi`.
    pub fn zero_branch(&self) -> ElemSet {
        self.branch(0)
    }

    pub fn phi2(&self, x: usize) -> usize {
        self.phi[self.phi[x]]
    }

    /// Greatest element of `set` under the induced order, if any.
    pub fn greatest_in(&self, set: ElemSet) -> Option<usize> {
        set.iter().find(|&m| set.iter().all(|x| self.leq(x, m)))
    }

    /// Least element of `set`, if any.
    pub fn least_in(&self, set: ElemSet) -> Option<usize> {
        set.iter().find(|&m| set.iter().all(|x| self.leq(m, x)))
    }

    /// Maximal elements of `set`.
    pub fn maximal_in(&self, set: ElemSet) -> ElemSet {
        set.iter()
            .filter(|&m| set.iter().all(|x| x == m || !self.leq(m, x)))
            .collect()
    }
}

/// Derives the order skeleton. Fails when `a` is not a weak BCC-algebra.
pub fn derive_order(a: &Algebra) -> Result<OrderInfo, StructureError> {
    let axioms = check_axioms(a);
    if let Some((axiom, v)) = axioms.first_weak_bcc_failure() {
        return Err(StructureError::NotWeakBcc {
            axiom,
            witness: v.witness().expect("failed verdict has a witness").clone(),
        });
    }
    derive_order_unchecked(a)
}

/// Derives the order skeleton without re-verifying the axioms. Branch
/// assignment still fails loudly if the minimal elements do not split the
/// universe.
pub fn derive_order_unchecked(a: &Algebra) -> Result<OrderInfo, StructureError> {
    let n = a.order();
    let up: Vec<ElemSet> = (0..n)
        .map(|x| (0..n).filter(|&y| a.leq(x, y)).collect())
        .collect();
    let phi: Vec<usize> = (0..n).map(|x| a.mul(0, x)).collect();
    let kernel: ElemSet = (0..n).filter(|&x| phi[x] == 0).collect();
    let minimal: ElemSet = (0..n).filter(|&x| phi[phi[x]] == x).collect();

    let mut branch_of = Vec::with_capacity(n);
    for x in 0..n {
        let below: ElemSet = minimal.iter().filter(|&r| up[r].contains(x)).collect();
        if below.len() != 1 {
            return Err(StructureError::Unassignable {
                element: x,
                candidates: below.len(),
            });
        }
        branch_of.push(below.first().unwrap());
    }

    Ok(OrderInfo {
        order: n,
        up,
        phi,
        kernel,
        minimal,
        branch_of,
    })
}

/// `Ker phi = {0}`, cross-checked against "all branches are singletons"
/// and "every element is minimal".
pub fn is_group_like(o: &OrderInfo) -> Result<bool, StructureError> {
    let by_kernel = o.kernel == ElemSet::singleton(0);
    let by_minimal = o.minimal == ElemSet::full(o.order());
    let by_branches = o.branches().iter().all(|(_, b)| b.len() == 1);
    if by_kernel != by_minimal || by_minimal != by_branches {
        return Err(StructureError::Inconsistent {
            kernel: o.kernel,
            minimal: o.minimal,
        });
    }
    Ok(by_kernel)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct RestrictedInfo {
    /// Branch root -> greatest element of the branch, if it has one.
    pub greatest: BTreeMap<usize, Option<usize>>,
    /// Present only when every branch has a greatest element.
    pub involutory: Option<bool>,
    /// First element `x` of some branch with `N_a N_a x != x`.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub involution_failure: Option<Witness>,
}

impl RestrictedInfo {
    pub fn is_restricted(&self) -> bool {
        self.greatest.values().all(Option::is_some)
    }

    pub fn is_involutory(&self) -> bool {
        self.involutory == Some(true)
    }

    pub fn some_branch_restricted(&self) -> bool {
        self.greatest.values().any(Option::is_some)
    }

    /// `1_root`.
    pub fn top(&self, root: usize) -> Result<usize, StructureError> {
        match self.greatest.get(&root) {
            None => Err(StructureError::NotMinimal(root)),
            Some(None) => Err(StructureError::NotRestricted(root)),
            Some(Some(m)) => Ok(*m),
        }
    }

    /// `N_root x = 1_root * x`.
    pub fn n_op(&self, a: &Algebra, root: usize, x: usize) -> Result<usize, StructureError> {
        Ok(a.mul(self.top(root)?, x))
    }

    /// Witness that the branch rooted at `root` has no greatest element:
    /// two distinct maximal elements `m1, m2` with `m1 * m2 != 0`.
    pub fn missing_top_witness(a: &Algebra, o: &OrderInfo, root: usize) -> Option<Witness> {
        let b = o.branch(root);
        if o.greatest_in(b).is_some() {
            return None;
        }
        let maxima = o.maximal_in(b).to_vec();
        let (m1, m2) = (maxima[0], maxima[1]);
        Some(Witness::new(
            format!("B({root}) has a greatest element"),
            &["a", "m1", "m2"],
            &[root, m1, m2],
            m1,
            m2,
            Relation::Leq,
        ))
        .filter(|w| w.is_violation(a))
    }
}

pub fn restricted_info(a: &Algebra, o: &OrderInfo) -> RestrictedInfo {
    let greatest: BTreeMap<usize, Option<usize>> = o
        .branches()
        .into_iter()
        .map(|(r, b)| (r, o.greatest_in(b)))
        .collect();
    let mut info = RestrictedInfo {
        greatest,
        involutory: None,
        involution_failure: None,
    };
    if info.is_restricted() {
        let v = forall(a, "N_a N_a x = x", ["x"], Relation::Eq, |[x]| {
            let top = info.greatest[&o.branch_of[x]].unwrap();
            Some((a.mul(top, a.mul(top, x)), x))
        });
        info.involutory = Some(v.holds());
        info.involution_failure = v.witness().cloned();
    }
    info
}

/// Why a subset fails to be an ideal.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub enum IdealViolation {
    MissingZero,
    /// For BCK-ideals: `y` and `xy` in the set, `x` not
    /// (`lhs = xy`, `rhs = x`). For BCC-ideals: `y` and `xy*z` in the set,
    /// `xz` not (`lhs = xy*z`, `rhs = xz`).
    Closure(Witness),
}

pub fn is_bck_ideal(a: &Algebra, s: ElemSet) -> Result<(), IdealViolation> {
    if !s.contains(0) {
        return Err(IdealViolation::MissingZero);
    }
    let v = forall(
        a,
        "y, xy in A => x in A",
        ["x", "y"],
        Relation::Eq,
        |[x, y]| {
            let xy = a.mul(x, y);
            (s.contains(y) && s.contains(xy) && !s.contains(x)).then_some((xy, x))
        },
    );
    verdict_to_ideal(v)
}

pub fn is_bcc_ideal(a: &Algebra, s: ElemSet) -> Result<(), IdealViolation> {
    if !s.contains(0) {
        return Err(IdealViolation::MissingZero);
    }
    let v = forall(
        a,
        "y in A, xy*z in A => xz in A",
        ["x", "y", "z"],
        Relation::Eq,
        |[x, y, z]| {
            let lhs = a.mul(a.mul(x, y), z);
            let xz = a.mul(x, z);
            (s.contains(y) && s.contains(lhs) && !s.contains(xz)).then_some((lhs, xz))
        },
    );
    verdict_to_ideal(v)
}

fn verdict_to_ideal(v: Verdict) -> Result<(), IdealViolation> {
    match v {
        Verdict::Holds => Ok(()),
        Verdict::Fails(w) => Err(IdealViolation::Closure(w)),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;

    fn set(xs: &[usize]) -> ElemSet {
        xs.iter().copied().collect()
    }

    #[test]
    fn ex31_branches() {
        let o = derive_order(&fixtures::ex31()).unwrap();
        assert_eq!(o.minimal, set(&[0, 3]));
        assert_eq!(o.branch(0), set(&[0, 1, 2]));
        assert_eq!(o.branch(3), set(&[3, 4]));
    }

    #[test]
    fn ex28_phi_and_branches() {
        let o = derive_order(&fixtures::ex28()).unwrap();
        assert_eq!(o.phi, vec![0, 0, 4, 4, 2, 2]);
        assert_eq!(o.minimal, set(&[0, 2, 4]));
        assert_eq!(o.branch_of, vec![0, 0, 2, 2, 4, 4]);
        assert_eq!(o.kernel, set(&[0, 1]));
        assert!(!is_group_like(&o).unwrap());
    }

    #[test]
    fn trivial_algebra() {
        let o = derive_order(&fixtures::triv1()).unwrap();
        assert_eq!(o.minimal, set(&[0]));
        assert_eq!(o.branches(), vec![(0, set(&[0]))]);
        assert!(is_group_like(&o).unwrap());
    }

    #[test]
    fn z2_is_group_like_and_involutory() {
        let a = fixtures::z2gl();
        let o = derive_order(&a).unwrap();
        assert!(is_group_like(&o).unwrap());
        let r = restricted_info(&a, &o);
        assert_eq!(r.greatest, BTreeMap::from([(0, Some(0)), (1, Some(1))]));
        assert!(r.is_restricted() && r.is_involutory());
    }

    #[test]
    fn rejects_non_weak_bcc() {
        let a = Algebra::from_rows(&[vec![0, 0], vec![0, 0]]).unwrap();
        assert!(matches!(
            derive_order(&a),
            Err(StructureError::NotWeakBcc {
                axiom: Axiom::III,
                ..
            })
        ));
    }

    #[test]
    fn unassignable_element_is_reported() {
        // Not weak BCC: every element is phi^2-fixed but 0 <= 1 as well.
        let a = Algebra::from_rows(&[vec![0, 0], vec![1, 0]])
            .unwrap()
            .relabel(&[0, 1])
            .unwrap();
        assert!(derive_order_unchecked(&a).is_ok());
        let bad = Algebra::from_rows(&[vec![0, 1, 0], vec![1, 0, 0], vec![0, 0, 0]]).unwrap();
        assert!(matches!(
            derive_order_unchecked(&bad),
            Err(StructureError::Unassignable { .. })
        ));
    }

    #[test]
    fn restricted_examples() {
        let a = fixtures::ex31();
        let o = derive_order(&a).unwrap();
        let r = restricted_info(&a, &o);
        assert_eq!(r.greatest, BTreeMap::from([(0, Some(2)), (3, Some(4))]));
        assert!(r.is_restricted());
        assert_eq!(r.n_op(&a, 3, 3), Ok(a.mul(4, 3)));

        let a = fixtures::e76();
        let o = derive_order(&a).unwrap();
        let r = restricted_info(&a, &o);
        assert_eq!(o.branch(2), set(&[2, 3, 4]));
        assert_eq!(o.maximal_in(o.branch(2)), set(&[3, 4]));
        assert_eq!(r.greatest[&2], None);
        assert!(!r.is_restricted());
        assert_eq!(r.involutory, None);
        assert_eq!(r.n_op(&a, 2, 3), Err(StructureError::NotRestricted(2)));
        assert_eq!(r.top(1), Err(StructureError::NotMinimal(1)));
        let w = RestrictedInfo::missing_top_witness(&a, &o, 2).unwrap();
        assert_eq!((w.lhs, w.rhs), (3, 4));
    }

    #[test]
    fn ideals() {
        let a = fixtures::ex56();
        let o = derive_order(&a).unwrap();
        assert_eq!(o.minimal, set(&[0, 3]));
        match is_bck_ideal(&a, o.minimal) {
            Err(IdealViolation::Closure(w)) => assert!(w.lhs != w.rhs),
            other => panic!("expected closure failure, got {other:?}"),
        }
        assert!(is_bcc_ideal(&a, o.minimal).is_err());

        for alg in fixtures::corpus() {
            assert_eq!(is_bck_ideal(&alg, alg.universe()), Ok(()));
            assert_eq!(is_bcc_ideal(&alg, alg.universe()), Ok(()));
            assert_eq!(is_bck_ideal(&alg, ElemSet::singleton(0)), Ok(()));
        }
        assert_eq!(
            is_bcc_ideal(&fixtures::triv1(), ElemSet::singleton(0)),
            Ok(())
        );
        assert_eq!(
            is_bck_ideal(&a, set(&[1])),
            Err(IdealViolation::MissingZero)
        );
    }
}
