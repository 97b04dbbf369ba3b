#![allow(dead_code)]

use itertools::Itertools;
use rand::seq::SliceRandom;
use rand::Rng;
use wbcc_core::enumerate::enumerate_order;
use wbcc_core::fixtures;
use wbcc_core::Algebra;

/// Fixtures plus every weak BCC-algebra of order `1..=max` up to
/// isomorphism.
pub fn models_up_to(max: usize) -> Vec<Algebra> {
    let mut all = fixtures::corpus();
    for n in 1..=max {
        all.extend(enumerate_order(n, None).unwrap().algebras());
    }
    all
}

pub fn random_perm(n: usize, rng: &mut impl Rng) -> Vec<usize> {
    let mut tail: Vec<usize> = (1..n).collect();
    tail.shuffle(rng);
    std::iter::once(0).chain(tail).collect()
}

/// `x <= y` straight from the table.
pub fn leq(a: &Algebra, x: usize, y: usize) -> bool {
    a.mul(x, y) == 0
}

/// Axioms (i)-(iv) straight from their statements.
pub fn naive_weak_bcc(t: &[u8], n: usize) -> bool {
    let m = |x: usize, y: usize| t[x * n + y] as usize;
    (0..n).all(|x| m(x, x) == 0 && m(x, 0) == x)
        && (0..n).all(|x| (0..n).all(|y| !(m(x, y) == 0 && m(y, x) == 0) || x == y))
        && (0..n).all(|x| (0..n).all(|y| (0..n).all(|z| m(m(m(x, y), m(z, y)), m(x, z)) == 0)))
}

/// Least relabelled table over all permutations fixing 0.
pub fn naive_canonical(t: &[u8], n: usize) -> Vec<u8> {
    (1..n)
        .permutations(n.saturating_sub(1))
        .map(|tail| {
            let p: Vec<usize> = std::iter::once(0).chain(tail).collect();
            let mut u = vec![0u8; n * n];
            for x in 0..n {
                for y in 0..n {
                    u[p[x] * n + p[y]] = p[t[x * n + y] as usize] as u8;
                }
            }
            u
        })
        .min()
        .unwrap()
}
