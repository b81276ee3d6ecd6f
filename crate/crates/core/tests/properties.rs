use itertools::Itertools;
use num_bigint::{BigInt, BigUint};
use proptest::prelude::*;

use paley_core::arith::is_prime;
use paley_core::ff::{CharacterTable, FieldTable};
use paley_core::oracle::{blow_up, clique_number, count_cliques, Caps, Graph};
use paley_core::quadforms::{rep_x2_4y2, SumFourSquareMode};
use paley_core::towers::QuadIntPair;

fn graph_strategy() -> impl Strategy<Value = Graph> {
    (1usize..=12).prop_flat_map(|n| {
        proptest::collection::vec(any::<bool>(), n * (n - 1) / 2).prop_map(move |bits| {
            let edges: Vec<(usize, usize)> =
                (0..n).tuple_combinations().zip(bits).filter(|(_, b)| *b).map(|(e, _)| e).collect();
            Graph::from_edges(n, &edges)
        })
    })
}

fn naive(g: &Graph, ell: usize) -> u64 {
    (0..g.n())
        .combinations(ell)
        .filter(|c| c.iter().tuple_combinations().all(|(&a, &b)| g.has_edge(a, b)))
        .count() as u64
}

fn count(g: &Graph, ell: usize) -> BigUint {
    count_cliques(g, ell, &Caps::default()).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn blow_up_scales_counts(g in graph_strategy(), m in 1usize..=3, ell in 2usize..=4) {
        let big = blow_up(&g, m, &Caps::default()).unwrap();
        prop_assert_eq!(count(&big, ell), count(&g, ell) * BigUint::from(m).pow(ell as u32));
    }

    #[test]
    fn blow_up_keeps_clique_number(g in graph_strategy(), m in 1usize..=3) {
        let caps = Caps::default();
        let big = blow_up(&g, m, &caps).unwrap();
        prop_assert_eq!(clique_number(&big, &caps).unwrap(), clique_number(&g, &caps).unwrap());
    }

    #[test]
    fn counts_match_naive(g in graph_strategy(), ell in 2usize..=6) {
        prop_assert_eq!(count(&g, ell), BigUint::from(naive(&g, ell)));
    }

    #[test]
    fn clique_number_is_largest_nonzero_count(g in graph_strategy()) {
        let omega = clique_number(&g, &Caps::default()).unwrap();
        let largest = (1..=g.n()).filter(|&l| naive(&g, l) > 0).max().unwrap_or(0);
        prop_assert_eq!(omega, largest);
    }

    #[test]
    fn field_axioms(idx in 0usize..8, a in any::<u32>(), b in any::<u32>(), c in any::<u32>()) {
        let (p, r) = [(2, 3), (2, 5), (3, 2), (3, 3), (5, 2), (7, 2), (13, 1), (11, 2)][idx];
        let f = FieldTable::new(p, r, None).unwrap();
        let q = f.q() as u32;
        let (a, b, c) = (a % q, b % q, c % q);
        prop_assert_eq!(f.mul(a, f.add(b, c)), f.add(f.mul(a, b), f.mul(a, c)));
        prop_assert_eq!(f.add(a, f.neg(a)), 0);
        if a != 0 {
            prop_assert_eq!(f.mul(a, f.inv(a).unwrap()), 1);
            prop_assert_eq!(f.exp(f.log(a).unwrap() as u64), a);
        }
    }

    #[test]
    fn jacobi_sums_have_absolute_value_sqrt_q(idx in 0usize..6, j1 in any::<i64>(), j2 in any::<i64>()) {
        let (p, r) = [(5, 1), (13, 1), (3, 2), (2, 4), (7, 2), (31, 1)][idx];
        let f = FieldTable::new(p, r, None).unwrap();
        let n = (f.q() - 1) as i64;
        let (j1, j2) = (j1.rem_euclid(n), j2.rem_euclid(n));
        prop_assume!(j1 != 0 && j2 != 0 && (j1 + j2) % n != 0);
        let table = CharacterTable::new(&f);
        let j = table.jacobi_sum(j1, j2);
        prop_assert!((j.norm_sqr() - f.q() as f64).abs() < 1e-6);
        let g = table.gauss_sum(j1);
        let g_bar = table.gauss_sum(-j1);
        let sign = if f.p() == 2 || j1 % 2 == 0 { 1.0 } else { -1.0 };
        prop_assert!((g * g_bar - sign * f.q() as f64).norm() < 1e-6);
    }

    #[test]
    fn e_normalized_representations_are_valid(p in proptest::sample::select((5u64..3000).filter(|&p| is_prime(p) && p % 4 == 1).collect::<Vec<_>>())) {
        let rep = rep_x2_4y2(&BigInt::from(p), p, SumFourSquareMode::ENormalized).unwrap();
        prop_assert!(rep.is_valid());
    }

    #[test]
    fn quad_pair_norm_is_multiplicative(a1 in -1000i64..1000, b1 in -1000i64..1000, a2 in -1000i64..1000, b2 in -1000i64..1000, e in 0u32..6) {
        for d in [4u64, 27] {
            let x = QuadIntPair::new(a1, b1, d);
            let y = QuadIntPair::new(a2, b2, d);
            prop_assert_eq!(x.mul(&y).norm(), x.norm() * y.norm());
            prop_assert_eq!(x.pow(e).norm(), x.norm().pow(e));
        }
    }
}

#[test]
fn complete_graph_blow_ups() {
    let caps = Caps::default();
    for n in 1..=8usize {
        for m in 1..=3usize {
            let g = blow_up(&Graph::complete(n), m, &caps).unwrap();
            for ell in 2..=4usize {
                let binom = (0..n).combinations(ell).count();
                assert_eq!(count(&g, ell), BigUint::from(binom) * BigUint::from(m).pow(ell as u32));
            }
        }
    }
}
