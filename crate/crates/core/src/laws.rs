//! Exhaustive evaluation of laws over all variable assignments.

use crate::model::{Algebra, Relation, Verdict, Witness};

/// Checks `lhs REL rhs` for every assignment of `vars` over the universe,
/// visiting assignments in lexicographic order. `eval` returns `None` for
/// assignments outside the law's scope. The first failure is the witness.
pub fn forall<const K: usize>(
    a: &Algebra,
    law: &str,
    vars: [&str; K],
    rel: Relation,
    mut eval: impl FnMut([usize; K]) -> Option<(usize, usize)>,
) -> Verdict {
    match first_failure(a, vars.len(), rel, |v| {
        eval(v.try_into().expect("arity matches"))
    }) {
        None => Verdict::Holds,
        Some((vals, l, r)) => Verdict::Fails(Witness::new(law, &vars, &vals, l, r, rel)),
    }
}

/// Like [`forall`] with the variable list given at run time.
pub fn forall_dyn(
    a: &Algebra,
    law: &str,
    vars: &[&str],
    rel: Relation,
    eval: impl FnMut(&[usize]) -> Option<(usize, usize)>,
) -> Verdict {
    match first_failure(a, vars.len(), rel, eval) {
        None => Verdict::Holds,
        Some((vals, l, r)) => Verdict::Fails(Witness::new(law, vars, &vals, l, r, rel)),
    }
}

/// Returns true when the pair violates the relation.
#[inline]
pub fn violates(a: &Algebra, rel: Relation, lhs: usize, rhs: usize) -> bool {
    match rel {
        Relation::Eq => lhs != rhs,
        Relation::Leq => a.mul(lhs, rhs) != 0,
    }
}

fn first_failure(
    a: &Algebra,
    arity: usize,
    rel: Relation,
    mut eval: impl FnMut(&[usize]) -> Option<(usize, usize)>,
) -> Option<(Vec<usize>, usize, usize)> {
    let n = a.order();
    let mut vals = vec![0usize; arity];
    loop {
        if let Some((l, r)) = eval(&vals) {
            if violates(a, rel, l, r) {
                return Some((vals, l, r));
            }
        }
        // Odometer increment, last variable fastest.
        let mut i = arity;
        loop {
            if i == 0 {
                return None;
            }
            i -= 1;
            vals[i] += 1;
            if vals[i] < n {
                break;
            }
            vals[i] = 0;
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;

    #[test]
    fn visits_in_lexicographic_order() {
        let a = fixtures::ex28();
        let mut seen = Vec::new();
        let v = forall(&a, "never", ["x", "y"], Relation::Eq, |[x, y]| {
            seen.push((x, y));
            None
        });
        assert!(v.holds());
        assert_eq!(seen.len(), 36);
        assert_eq!(seen[1], (0, 1));
        assert_eq!(seen[6], (1, 0));
    }

    #[test]
    fn leq_uses_the_table() {
        let a = fixtures::ex28();
        // 5 <= 4 fails because 5 * 4 = 1.
        let v = forall(&a, "le", [], Relation::Leq, |[]| Some((5, 4)));
        let w = v.witness().unwrap();
        assert!(w.assignment.is_empty());
        assert!(w.is_violation(&a));
        assert!(!forall(&a, "le", [], Relation::Leq, |[]| Some((1, 0))).holds());
        assert!(forall(&a, "le", [], Relation::Leq, |[]| Some((0, 1))).holds());
    }
}
