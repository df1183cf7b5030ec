//! Truncated free-superalgebra oracle: monomial arithmetic, expansions, and
//! the quasisymmetrizing action.

use std::collections::BTreeMap;

use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use superqsym::combinat::{DottedComposition, SetSupercomposition};
use superqsym::hopf::BasisId;
use superqsym::oracle::{
    check_invariance_c, check_invariance_nc, commutative_image, expand_dotted_index,
    expand_set_index, qs_action_c, qs_action_c_monomial, qs_action_nc_monomial, render_poly,
    std_and_i, verify_coproduct, verify_pi_product, verify_product, CMonomial, NcMonomial,
    OracleError, Poly,
};

fn sc(s: &str) -> SetSupercomposition {
    s.parse().expect("test index parses")
}

fn dcomp(s: &str) -> DottedComposition {
    s.parse().expect("test index parses")
}

fn cmono(thetas: &[u32], powers: &[(u32, u32)]) -> CMonomial {
    CMonomial::new(thetas.to_vec(), powers.iter().copied().collect())
}

// --- monomial arithmetic ---

#[test]
fn monomial_display_matches_the_canonical_serialization() {
    assert_eq!(
        cmono(&[2, 5], &[(3, 3), (4, 1), (5, 2), (7, 1)]).to_string(),
        "t2 t5 x3^3 x4 x5^2 x7"
    );
    assert_eq!(
        NcMonomial::new(vec![2, 8], vec![7, 2, 7, 5]).to_string(),
        "t2 t8 | x7 x2 x7 x5"
    );
    assert_eq!(NcMonomial::new(vec![], vec![]).to_string(), "1");
    assert_eq!(CMonomial::new(vec![3], BTreeMap::new()).to_string(), "t3");
    assert_eq!(NcMonomial::new(vec![], vec![4, 4]).to_string(), "x4 x4");
}

#[test]
fn fermionic_variables_square_to_zero_and_anticommute() {
    let ta = Poly::term(cmono(&[1], &[]), 1);
    let tb = Poly::term(cmono(&[2], &[]), 1);
    assert!(ta.mul(&ta).is_zero());
    let ab = ta.mul(&tb);
    let ba = tb.mul(&ta);
    assert_eq!(ab.coeff(&cmono(&[1, 2], &[])), 1);
    assert_eq!(ba.coeff(&cmono(&[1, 2], &[])), -1);

    let na = Poly::term(NcMonomial::new(vec![1], vec![]), 1);
    let nb = Poly::term(NcMonomial::new(vec![2], vec![]), 1);
    assert!(na.mul(&na).is_zero());
    assert_eq!(
        na.mul(&nb).coeff(&NcMonomial::new(vec![1, 2], vec![])),
        -nb.mul(&na).coeff(&NcMonomial::new(vec![1, 2], vec![]))
    );
}

#[test]
fn bosonic_variables_commute_only_in_the_commutative_algebra() {
    let xa = Poly::term(cmono(&[], &[(1, 1)]), 1);
    let xb = Poly::term(cmono(&[], &[(2, 1)]), 1);
    assert_eq!(xa.mul(&xb), xb.mul(&xa));

    let na = Poly::term(NcMonomial::new(vec![], vec![1]), 1);
    let nb = Poly::term(NcMonomial::new(vec![], vec![2]), 1);
    assert_ne!(na.mul(&nb), nb.mul(&na));
    assert_eq!(
        na.mul(&nb).coeff(&NcMonomial::new(vec![], vec![1, 2])),
        1
    );
}

#[test]
fn commutative_image_forgets_word_order() {
    let p = Poly::term(NcMonomial::new(vec![2], vec![3, 1, 3]), 5);
    let img = commutative_image(&p);
    assert_eq!(img.coeff(&cmono(&[2], &[(1, 1), (3, 2)])), 5);
}

#[test]
fn render_poly_sorts_lines_lexicographically() {
    let mut p = Poly::zero();
    p.add_term(NcMonomial::new(vec![], vec![2]), -1);
    p.add_term(NcMonomial::new(vec![], vec![1]), 3);
    p.add_term(NcMonomial::new(vec![1], vec![]), 1);
    assert_eq!(render_poly(&p), "+1 * t1\n+3 * x1\n-1 * x2\n");
    assert_eq!(render_poly(&Poly::<NcMonomial>::zero()), "0\n");
}

// --- expansions ---

#[test]
fn mnc_expansion_lists_increasing_supports() {
    let p = expand_set_index(BasisId::MNc, &sc("{1}"), 3).unwrap();
    assert_eq!(render_poly(&p), "+1 * x1\n+1 * x2\n+1 * x3\n");

    let q = expand_set_index(BasisId::MNc, &sc("{0}"), 2).unwrap();
    assert_eq!(render_poly(&q), "+1 * t1\n+1 * t2\n");

    // Two blocks need two distinct, increasing variable choices.
    let two = expand_set_index(BasisId::MNc, &sc("{1}|{2}"), 2).unwrap();
    assert_eq!(render_poly(&two), "+1 * x1 x2\n");
}

#[test]
fn expansions_vanish_when_the_alphabet_is_too_small() {
    let p = expand_set_index(BasisId::MNc, &sc("{1}|{2}|{3}"), 2).unwrap();
    assert!(p.is_zero());
}

#[test]
fn q_expansion_dominates_the_mnc_expansion() {
    // Q[I] = sum of Mnc over the upset, so every Mnc monomial appears.
    let i = sc("{1}|{0,2}");
    let q = expand_set_index(BasisId::Q, &i, 4).unwrap();
    let mnc = expand_set_index(BasisId::MNc, &i, 4).unwrap();
    for (m, c) in mnc.iter() {
        assert_eq!(q.coeff(m), *c, "monomial {m}");
    }
}

#[test]
fn dotted_expansions_are_commutative_images() {
    for alpha in ["(2,.1)", "(.0,1)", "(1,1)"] {
        let alpha = dcomp(alpha);
        let via_lift = commutative_image(
            &expand_set_index(BasisId::MNc, &alpha.block_lift(), 4).unwrap(),
        );
        let direct = expand_dotted_index(BasisId::MC, &alpha, 4).unwrap();
        assert_eq!(via_lift, direct, "Mc[{alpha}]");
    }
}

#[test]
fn standardization_example_from_the_product_rules() {
    let u = NcMonomial::new(vec![2, 8], vec![7, 2, 7, 5, 9, 2, 5, 7]);
    let (std, i) = std_and_i(&u);
    assert_eq!(std.to_string(), "t1 t4 | x3 x1 x3 x2 x5 x1 x2 x3");
    assert_eq!(i.to_string(), "{0,2,6}|{4,7}|{1,3,8}|{0}|{5}");
}

// --- oracle verification entry points ---

#[test]
fn oracle_confirms_small_products_and_coproducts() {
    let pairs = [
        (BasisId::MNc, "{1,2}|{0}", "{0,1}"),
        (BasisId::Q, "{0,2}|{0,1,3}", "{0,1,2}|{0}"),
        (BasisId::MSym, "{0}|{0,3}|{1,2}", "{0,2}|{1}"),
    ];
    for (basis, a, b) in pairs {
        assert!(
            verify_product(basis, &sc(a), &sc(b), 7).unwrap(),
            "product {a} * {b} in {basis:?}"
        );
    }
    for i in ["{1,2}|{0}", "{0,2}|{1}"] {
        assert!(verify_coproduct(BasisId::MNc, &sc(i), 4).unwrap());
        assert!(verify_coproduct(BasisId::Q, &sc(i), 4).unwrap());
    }
    assert!(
        verify_pi_product(&sc("{1,2}|{0}"), &sc("{0,1}"), 6).unwrap()
    );
}

#[test]
fn oracle_rejects_indices_outside_the_basis() {
    // MonF is indexed by superpermutations: {1,2} has a non-singleton
    // bosonic block.
    let err = expand_set_index(BasisId::MonF, &sc("{1,2}"), 4).unwrap_err();
    assert!(matches!(err, OracleError::NotSuperpermutation { .. }));
    let err = expand_set_index(BasisId::MSym, &sc("{2}|{1}"), 4).unwrap_err();
    assert!(matches!(err, OracleError::NotSetSuperpartition { .. }));
    // Q, by contrast, is defined on every set supercomposition.
    assert!(expand_set_index(BasisId::Q, &sc("{1,2}"), 4).is_ok());
}

// --- quasisymmetrizing action ---

#[test]
fn action_moves_variables_only_when_a_slot_is_free() {
    // Both slots occupied: s_1 fixes x1 x2.
    let both = cmono(&[], &[(1, 1), (2, 1)]);
    assert_eq!(
        qs_action_c_monomial(&[1], &both, 4).unwrap(),
        both,
        "s_1 must fix x1 x2"
    );
    // One slot free: s_1 swaps x1^2 to x2^2.
    let single = cmono(&[], &[(1, 2)]);
    assert_eq!(
        qs_action_c_monomial(&[1], &single, 4).unwrap(),
        cmono(&[], &[(2, 2)])
    );
    // Fermionic slots participate in occupancy.
    let mixed = cmono(&[1], &[(2, 1)]);
    assert_eq!(qs_action_c_monomial(&[1], &mixed, 4).unwrap(), mixed);
}

#[test]
fn action_worked_examples_are_byte_exact() {
    let u = cmono(&[2, 5], &[(3, 3), (4, 1), (5, 2), (7, 1)]);
    assert_eq!(
        qs_action_c_monomial(&[5, 3, 2], &u, 8).unwrap().to_string(),
        "t2 t6 x3^3 x4 x6^2 x7"
    );
    let v = NcMonomial::new(vec![2, 4], vec![3, 3, 2, 6, 3, 2, 6]);
    assert_eq!(
        qs_action_nc_monomial(&[4, 3, 6, 1], &v, 8).unwrap().to_string(),
        "t1 t5 | x3 x3 x1 x7 x3 x1 x7"
    );
}

#[test]
fn action_is_linear_over_polynomials() {
    let mut rng = ChaCha8Rng::seed_from_u64(10001);
    for _ in 0..50 {
        let mut p = Poly::zero();
        for _ in 0..3 {
            let m = cmono(
                &[],
                &[(rng.gen_range(1..=4), rng.gen_range(1..=2))],
            );
            p.add_term(m, rng.gen_range(-3..=3));
        }
        let g = rng.gen_range(1..4u32);
        let moved = qs_action_c(&[g], &p, 4).unwrap();
        let mut expected = Poly::zero();
        for (m, c) in p.iter() {
            expected.add_term(qs_action_c_monomial(&[g], m, 4).unwrap(), *c);
        }
        assert_eq!(moved, expected);
    }
}

#[test]
fn out_of_range_generators_report_the_alphabet_edge() {
    let u = cmono(&[], &[]);
    let err = qs_action_c_monomial(&[7], &u, 7).unwrap_err();
    assert_eq!(
        err.to_string(),
        "generator s_7 needs variable 8 but the alphabet stops at 7"
    );
    let v = NcMonomial::new(vec![], vec![]);
    let err = qs_action_nc_monomial(&[9], &v, 4).unwrap_err();
    assert_eq!(
        err.to_string(),
        "generator s_9 needs variable 10 but the alphabet stops at 4"
    );
}

#[test]
fn invariance_judgement_separates_expansions_from_plants() {
    let p = expand_set_index(BasisId::MNc, &sc("{1}|{0}"), 5).unwrap();
    // A single Mnc expansion is not invariant (only full basis sums are);
    // the symmetrized Q expansion over the full upset is.
    let q = expand_set_index(BasisId::MSym, &sc("{0,1}"), 5).unwrap();
    assert!(check_invariance_nc(&q, 4, 5).unwrap());
    let _ = p; // a bare prefix of a symmetric sum:
    let planted = Poly::term(cmono(&[], &[(1, 1)]), 1);
    assert!(!check_invariance_c(&planted, 4, 5).unwrap());
}
