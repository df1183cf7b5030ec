//! Partial orders: refinement on dotted compositions, block merging on set
//! supercompositions, and the left weak order with its Möbius function.

use std::collections::BTreeSet;

use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use superqsym::combinat::{
    all_dotted_compositions_up_to, all_superpermutations, DottedComposition, SetSupercomposition,
    Superpermutation,
};
use superqsym::posets::{
    dotted_downset, dotted_downset_elements, dotted_leq, fiber, fiber_bounds, fiber_interval,
    mobius_weak, mobius_weak_upset, sc_leq, sc_upset_elements, weak_interval, weak_leq,
    weak_upset,
};

fn dcomp(s: &str) -> DottedComposition {
    s.parse().expect("test index parses")
}

fn sperm(s: &str) -> Superpermutation {
    s.parse::<SetSupercomposition>()
        .expect("test index parses")
        .try_into()
        .expect("test index is a superpermutation")
}

// --- refinement order ---

#[test]
fn dotted_leq_is_a_partial_order_on_small_compositions() {
    let pool = all_dotted_compositions_up_to(4);
    let mut rng = ChaCha8Rng::seed_from_u64(8001);
    for alpha in &pool {
        assert!(dotted_leq(alpha, alpha), "reflexivity fails at {alpha}");
    }
    for _ in 0..3000 {
        let a = &pool[rng.gen_range(0..pool.len())];
        let b = &pool[rng.gen_range(0..pool.len())];
        if dotted_leq(a, b) && dotted_leq(b, a) {
            assert_eq!(a, b, "antisymmetry fails between {a} and {b}");
        }
        let c = &pool[rng.gen_range(0..pool.len())];
        if dotted_leq(a, b) && dotted_leq(b, c) {
            assert!(dotted_leq(a, c), "transitivity fails at {a} <= {b} <= {c}");
        }
    }
}

#[test]
fn refinement_preserves_total_size_and_dotted_parts() {
    for alpha in all_dotted_compositions_up_to(5) {
        let dotted_profile: Vec<u32> = alpha
            .parts()
            .iter()
            .filter(|p| p.is_dotted())
            .map(|p| p.value())
            .collect();
        for beta in dotted_downset_elements(&alpha) {
            assert!(dotted_leq(&beta, &alpha));
            assert_eq!(beta.total_size(), alpha.total_size());
            let beta_dotted: Vec<u32> = beta
                .parts()
                .iter()
                .filter(|p| p.is_dotted())
                .map(|p| p.value())
                .collect();
            assert_eq!(beta_dotted, dotted_profile, "{beta} vs {alpha}");
        }
    }
}

#[test]
fn downset_size_is_a_power_of_two() {
    for alpha in all_dotted_compositions_up_to(5) {
        let rank: u32 = alpha
            .parts()
            .iter()
            .filter(|p| !p.is_dotted())
            .map(|p| p.value() - 1)
            .sum();
        assert_eq!(
            dotted_downset_elements(&alpha).len(),
            1usize << rank,
            "downset of {alpha}"
        );
    }
}

#[test]
fn figure_downset_has_eight_elements_in_four_ranks() {
    let interval = dotted_downset(&dcomp("(1,2,.0,1,.3,3)"));
    assert_eq!(interval.len(), 8);
    assert_eq!(interval.covers().len(), 12);
    // Cover edges go from the finer to the coarser composition: merging two
    // adjacent plain parts loses one part.
    for &(lo, hi) in interval.covers() {
        let fine = &interval.elements()[lo];
        let coarse = &interval.elements()[hi];
        assert_eq!(fine.len(), coarse.len() + 1, "{fine} -> {coarse}");
        assert!(dotted_leq(fine, coarse));
    }
}

// --- merge order on set supercompositions ---

#[test]
fn sc_upset_members_are_coarsenings() {
    let mut rng = ChaCha8Rng::seed_from_u64(8002);
    let pool: Vec<SetSupercomposition> = {
        let mut v = Vec::new();
        for n in 0..=4u32 {
            for m in 0..=2u32 {
                v.extend(
                    superqsym::combinat::all_set_supercompositions(n, m)
                        .into_iter()
                        .filter(|i| i.len() <= 5),
                );
            }
        }
        v
    };
    for _ in 0..200 {
        let i = &pool[rng.gen_range(0..pool.len())];
        let up = sc_upset_elements(i);
        let distinct: BTreeSet<String> = up.iter().map(|j| j.to_string()).collect();
        assert_eq!(distinct.len(), up.len(), "duplicates above {i}");
        for j in &up {
            assert!(sc_leq(i, j), "{j} listed above {i} but not greater");
            assert_eq!(j.total_size(), i.total_size());
        }
        assert!(up.contains(i), "upset of {i} misses {i}");
    }
}

#[test]
fn alpha_maps_merge_order_to_refinement_order() {
    // Coarsening blocks maps to coarsening compositions under alpha.
    let mut rng = ChaCha8Rng::seed_from_u64(8003);
    let pool: Vec<SetSupercomposition> =
        superqsym::combinat::all_set_supercompositions(4, 1);
    for _ in 0..100 {
        let i = &pool[rng.gen_range(0..pool.len())];
        for j in sc_upset_elements(i) {
            assert!(
                dotted_leq(&i.alpha(), &j.alpha()),
                "alpha({i}) = {} not below alpha({j}) = {}",
                i.alpha(),
                j.alpha()
            );
        }
    }
}

// --- weak order, fibers, Möbius ---

#[test]
fn weak_order_is_a_partial_order_on_fibers() {
    for sigma in ["(1,1,1)", "(1,.1)", "(1,.0,1)", "(.1,.1)"] {
        let sigma = dcomp(sigma);
        let fib = fiber(&sigma).expect("plain parts are 1");
        for a in &fib {
            assert!(weak_leq(a, a));
        }
        for a in &fib {
            for b in &fib {
                if weak_leq(a, b) && weak_leq(b, a) {
                    assert_eq!(a, b);
                }
                for c in &fib {
                    if weak_leq(a, b) && weak_leq(b, c) {
                        assert!(weak_leq(a, c));
                    }
                }
            }
        }
    }
}

#[test]
fn fiber_bounds_really_bound_the_fiber() {
    for sigma in ["(1,1,1)", "(1,.1)", "(.0,1,1)", "(.2,1)", "(1,.1,1)"] {
        let sigma = dcomp(sigma);
        let (bottom, top) = fiber_bounds(&sigma).expect("plain parts are 1");
        let fib = fiber(&sigma).expect("plain parts are 1");
        assert!(fib.contains(&bottom));
        assert!(fib.contains(&top));
        for p in &fib {
            assert!(weak_leq(&bottom, p), "{p} not above the bottom {bottom}");
            assert!(weak_leq(p, &top), "{p} not below the top {top}");
        }
    }
}

#[test]
fn hexagon_interval_matches_figure() {
    let interval = fiber_interval(&dcomp("(1,.1,1)")).expect("plain parts are 1");
    assert_eq!(interval.len(), 6);
    assert_eq!(
        interval.covers(),
        &[(0, 1), (0, 2), (1, 3), (2, 4), (3, 5), (4, 5)]
    );
}

#[test]
fn weak_interval_is_the_intersection_of_up_and_down() {
    let bottom = sperm("{1}|{2}|{3}");
    let up = weak_upset(&bottom);
    assert_eq!(up.len(), 6, "the weak order on S3 has six elements");
    for j in &up {
        let between = weak_interval(&bottom, j);
        for k in &between {
            assert!(weak_leq(&bottom, k) && weak_leq(k, j));
        }
        assert!(between.contains(&bottom));
        assert!(between.contains(j));
    }
}

#[test]
fn mobius_recursion_sums_to_zero_above_each_element() {
    // For every interval [i, j] with i < j the Möbius values of [i, -]
    // restricted to [i, j] sum to zero; at i they sum to one.
    for (n, m) in [(3, 0), (2, 1), (1, 2)] {
        for i in all_superpermutations(n, m) {
            let mu = mobius_weak_upset(&i);
            for (j, _) in &mu {
                let total: i64 = mu
                    .iter()
                    .filter(|(k, _)| weak_leq(k, j))
                    .map(|(_, v)| *v)
                    .sum();
                let expected = i64::from(*j == i);
                assert_eq!(
                    total, expected,
                    "Mobius sum over [{i}, {j}] is {total}"
                );
            }
        }
    }
}

#[test]
fn mobius_values_on_s3_match_the_known_table() {
    let bottom = sperm("{1}|{2}|{3}");
    let want = [
        ("{1}|{2}|{3}", 1),
        ("{1}|{3}|{2}", -1),
        ("{2}|{1}|{3}", -1),
        ("{2}|{3}|{1}", 0),
        ("{3}|{1}|{2}", 0),
        ("{3}|{2}|{1}", 1),
    ];
    for (j, mu) in want {
        assert_eq!(mobius_weak(&bottom, &sperm(j)), mu, "mu(e, {j})");
    }
}

// --- DOT output ---

#[test]
fn dot_output_is_deterministic_and_well_formed() {
    let interval = fiber_interval(&dcomp("(1,.1,1)")).expect("plain parts are 1");
    let a = interval.to_dot();
    let b = fiber_interval(&dcomp("(1,.1,1)")).expect("plain parts are 1").to_dot();
    assert_eq!(a, b, "DOT output differs between identical builds");
    assert!(a.starts_with("digraph poset {"));
    assert!(a.trim_end().ends_with('}'));
    for (lo, hi) in interval.covers() {
        let edge = format!(
            "\"{}\" -> \"{}\";",
            interval.elements()[*lo],
            interval.elements()[*hi]
        );
        assert!(a.contains(&edge), "missing edge line `{edge}`");
    }
}

#[test]
fn dot_output_for_a_two_element_chain() {
    let interval = dotted_downset(&dcomp("(2)"));
    let dot = interval.to_dot();
    let want = "digraph poset {\n  rankdir=BT;\n  \"(1,1)\";\n  \"(2)\";\n  \"(1,1)\" -> \"(2)\";\n}\n";
    assert_eq!(dot, want);
}
