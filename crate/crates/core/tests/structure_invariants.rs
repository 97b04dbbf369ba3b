mod common;

use common::{leq, models_up_to, random_perm};
use proptest::prelude::*;
use rand::rngs::StdRng;
use rand::SeedableRng;
use wbcc_core::axioms::{bci_routes, check_axioms, classify, Axiom};
use wbcc_core::fixtures;
use wbcc_core::properties::{condition_s, is_solid, IdentityContext, IdentityId, Scope};
use wbcc_core::structure::{derive_order, is_group_like};

fn class_flags(a: &wbcc_core::Algebra) -> [bool; 5] {
    let c = classify(a);
    [c.is_weak_bcc, c.is_bcc, c.is_bck, c.is_bci, c.is_proper]
}

proptest! {
    #[test]
    fn classification_ignores_relabelling(which in 0usize..9, seed in any::<u64>()) {
        let a = &fixtures::corpus()[which];
        let perm = random_perm(a.order(), &mut StdRng::seed_from_u64(seed));
        let b = a.relabel(&perm).unwrap();
        prop_assert_eq!(class_flags(a), class_flags(&b));
        let (oa, ob) = (derive_order(a).unwrap(), derive_order(&b).unwrap());
        prop_assert_eq!(is_solid(a, &oa).holds(), is_solid(&b, &ob).holds());
        prop_assert_eq!(condition_s(a, &oa).holds, condition_s(&b, &ob).holds);
        prop_assert_eq!(oa.minimal.len(), ob.minimal.len());
    }
}

#[test]
fn axiom_v_is_a_zero_first_row() {
    for a in models_up_to(4) {
        let r = check_axioms(&a);
        let zero_row = a.elements().all(|x| a.mul(0, x) == 0);
        assert_eq!(r.holds(Axiom::V), zero_row);
    }
}

#[test]
fn both_bci_routes_agree() {
    for a in models_up_to(4) {
        let r = check_axioms(&a);
        let (identity, axioms) = bci_routes(&a, &r);
        assert_eq!(identity, axioms, "{:?}", a.rows());
    }
}

#[test]
fn phi_laws() {
    for a in models_up_to(4) {
        let o = derive_order(&a).unwrap();
        let phi = |x: usize| a.mul(0, x);
        for x in a.elements() {
            assert!(leq(&a, phi(phi(x)), x));
            assert_eq!(phi(phi(phi(x))), phi(x));
            assert_eq!(o.phi[x], phi(x));
            for y in a.elements() {
                if leq(&a, x, y) {
                    assert_eq!(phi(x), phi(y));
                }
                assert_eq!(phi(phi(a.mul(x, y))), a.mul(phi(phi(x)), phi(phi(y))));
            }
        }
    }
}

#[test]
fn branches_partition_and_products_respect_them() {
    for a in models_up_to(4) {
        let o = derive_order(&a).unwrap();
        let total: usize = o.branches().iter().map(|(_, b)| b.len()).sum();
        assert_eq!(total, a.order());
        let b0 = o.zero_branch();
        for x in a.elements() {
            // Roots are minimal and below everything in their branch.
            let root = o.branch_of[x];
            assert!(o.minimal.contains(root));
            assert!(leq(&a, root, x));
            for y in a.elements() {
                assert_eq!(o.same_branch(x, y), b0.contains(a.mul(x, y)));
                let ab = a.mul(o.branch_of[x], o.branch_of[y]);
                assert_eq!(o.branch_of[a.mul(x, y)], o.branch_of[ab]);
            }
        }
    }
}

#[test]
fn zero_branch_is_the_maximal_bcc_part() {
    for a in models_up_to(4) {
        let o = derive_order(&a).unwrap();
        let b0 = o.zero_branch();
        for x in a.elements() {
            assert_eq!(b0.contains(x), a.mul(0, x) == 0);
        }
        for x in b0.iter() {
            for y in b0.iter() {
                assert!(b0.contains(a.mul(x, y)));
            }
        }
    }
}

#[test]
fn group_like_means_every_element_is_minimal() {
    for a in models_up_to(4) {
        let o = derive_order(&a).unwrap();
        let kernel_trivial = a.elements().all(|x| x == 0 || a.mul(0, x) != 0);
        assert_eq!(is_group_like(&o).unwrap(), kernel_trivial);
        assert_eq!(kernel_trivial, o.minimal.len() == a.order());
    }
}

#[test]
fn solidity_consequences() {
    for a in models_up_to(4) {
        let o = derive_order(&a).unwrap();
        if !is_solid(&a, &o).holds() {
            continue;
        }
        let cx = IdentityContext::new(&a, &o);
        for id in [IdentityId::P26A, IdentityId::P26B, IdentityId::P212] {
            assert!(cx.check(id, Scope::Branchwise).unwrap().holds(), "{id}");
        }
        for x in a.elements() {
            for y in a.elements() {
                assert_eq!(a.mul(0, a.mul(x, y)), a.mul(a.mul(0, x), a.mul(0, y)));
                assert!(o.same_branch(a.mul(x, a.mul(x, y)), y) || !o.same_branch(x, y));
            }
        }
    }
}

#[test]
fn global_truth_implies_branchwise_truth() {
    for a in models_up_to(4) {
        let o = derive_order(&a).unwrap();
        let s = condition_s(&a, &o);
        let r = wbcc_core::structure::restricted_info(&a, &o);
        let cx = IdentityContext {
            algebra: &a,
            order: &o,
            restricted: Some(&r),
            circle: s.circle.as_ref(),
        };
        for id in IdentityId::CATALOG {
            let (Ok(g), Ok(b)) = (cx.check(id, Scope::Global), cx.check(id, Scope::Branchwise))
            else {
                continue;
            };
            if g.holds() {
                assert!(b.holds(), "{id} on {:?}", a.rows());
            }
        }
    }
}

#[test]
fn reported_witnesses_recheck_against_the_table() {
    for a in models_up_to(4) {
        let o = derive_order(&a).unwrap();
        let cx = IdentityContext::new(&a, &o);
        for id in IdentityId::CATALOG {
            let Ok(v) = cx.check(id, id.default_scope()) else {
                continue;
            };
            if let Some(w) = v.witness() {
                assert!(w.is_violation(&a), "{w}");
                let again = cx.failure_at(id, id.default_scope(), &w.values()).unwrap();
                assert_eq!(again.as_ref(), Some(w));
            }
        }
    }
}
