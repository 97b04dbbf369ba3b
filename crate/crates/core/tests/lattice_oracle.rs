mod common;

use common::{leq, models_up_to, random_perm};
use proptest::prelude::*;
use rand::rngs::StdRng;
use rand::SeedableRng;
use wbcc_core::lattice::{ap_lattice_check, branch_meet_check, glb, lub, LatticeReport};
use wbcc_core::structure::derive_order;
use wbcc_core::{Algebra, ElemSet};

/// Bound by scanning the carrier, with the order read off the table.
fn scan(a: &Algebra, carrier: ElemSet, x: usize, y: usize, upper: bool) -> Option<usize> {
    let below = |u: usize, v: usize| if upper { leq(a, v, u) } else { leq(a, u, v) };
    let bounds: Vec<usize> = carrier
        .iter()
        .filter(|&u| below(u, x) && below(u, y))
        .collect();
    bounds
        .iter()
        .copied()
        .find(|&b| bounds.iter().all(|&u| below(u, b)))
}

fn check_report(a: &Algebra, rep: &LatticeReport) {
    let c = rep.carrier;
    let mut all_meets = true;
    let mut all_joins = true;
    for x in c.iter() {
        for y in c.iter() {
            let m = scan(a, c, x, y, false);
            let j = scan(a, c, x, y, true);
            assert_eq!(rep.meet_of(x, y), m, "meet {x} {y} in {c:?}");
            assert_eq!(rep.join_of(x, y), j, "join {x} {y} in {c:?}");
            all_meets &= m.is_some();
            all_joins &= j.is_some();
        }
    }
    assert_eq!(rep.is_lower_semilattice, all_meets);
    assert_eq!(rep.is_upper_semilattice, all_joins);
    assert_eq!(rep.is_lattice, all_meets && all_joins);
    if rep.is_lattice {
        let m = |x, y| scan(a, c, x, y, false).unwrap();
        let j = |x, y| scan(a, c, x, y, true).unwrap();
        let distributive = c.iter().all(|x| {
            c.iter()
                .all(|y| c.iter().all(|z| m(x, j(y, z)) == j(m(x, y), m(x, z))))
        });
        assert_eq!(rep.is_distributive, distributive, "{c:?}");
    }
}

#[test]
fn bounds_match_a_direct_scan_on_every_carrier() {
    for a in models_up_to(4) {
        let o = derive_order(&a).unwrap();
        for root in o.minimal.iter() {
            check_report(&a, &branch_meet_check(&a, &o, root).unwrap());
        }
        for p in a.elements() {
            check_report(&a, &ap_lattice_check(&a, &o, p));
        }
        let all = a.universe();
        for x in a.elements() {
            for y in a.elements() {
                assert_eq!(glb(&o, all, x, y), scan(&a, all, x, y, false));
                assert_eq!(lub(&o, all, x, y), scan(&a, all, x, y, true));
            }
        }
    }
}

/// Truncated subtraction on `0 < 1 < .. < n-1`: a commutative BCK-chain.
fn chain(n: usize) -> Algebra {
    let rows: Vec<Vec<usize>> = (0..n)
        .map(|x| (0..n).map(|y| x.saturating_sub(y)).collect())
        .collect();
    Algebra::from_rows(&rows).unwrap()
}

proptest! {
    #[test]
    fn chains_meet_at_min_and_join_at_max(n in 1usize..12, seed in any::<u64>()) {
        let perm = random_perm(n, &mut StdRng::seed_from_u64(seed));
        let a = chain(n).relabel(&perm).unwrap();
        let o = derive_order(&a).unwrap();
        let mut rank = vec![0; n];
        for (r, &x) in perm.iter().enumerate() {
            rank[x] = r;
        }
        let top = perm[n - 1];
        let rep = ap_lattice_check(&a, &o, top);
        prop_assert!(rep.is_lattice && rep.is_distributive);
        prop_assert!(rep.formulas_hold());
        for x in 0..n {
            for y in 0..n {
                let (lo, hi) = if rank[x] <= rank[y] { (x, y) } else { (y, x) };
                prop_assert_eq!(rep.meet_of(x, y), Some(lo));
                prop_assert_eq!(rep.join_of(x, y), Some(hi));
            }
        }
    }
}

#[test]
fn commutative_zero_branch_with_a_top_is_a_distributive_lattice() {
    let mut seen = 0;
    for a in models_up_to(5) {
        let o = derive_order(&a).unwrap();
        let b0 = o.zero_branch();
        let commutative = b0.iter().all(|x| {
            b0.iter()
                .all(|y| a.mul(x, a.mul(x, y)) == a.mul(y, a.mul(y, x)))
        });
        let Some(top) = o.greatest_in(b0) else {
            continue;
        };
        if !commutative {
            continue;
        }
        seen += 1;
        let rep = ap_lattice_check(&a, &o, top);
        assert!(rep.is_lattice && rep.is_distributive, "{:?}", a.rows());
    }
    assert!(seen > 10);
}
