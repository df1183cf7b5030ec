//! Signed products, coproducts, antipodes, and basis changes.

use num_bigint::BigInt;
use num_traits::Zero;
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use superqsym::combinat::{
    all_dotted_compositions_up_to, all_set_supercompositions, all_set_superpartitions,
    all_superpermutations, DottedComposition, SetSupercomposition, SetSuperpartition,
    Superpermutation,
};
use superqsym::hopf::{
    abelianize_mnc, abelianize_q, antipode_mnc, antipode_q, change_basis, coproduct_mnc,
    coproduct_monf, coproduct_q, fundamental_to_mc_index, mnc_to_msym, mnc_to_q_index,
    monf_to_q_index, msym_to_mnc_index, product_fund, product_mc, product_mnc, product_monf,
    product_msym, product_q, q_to_mnc_index, render_comb, render_tensor, unit_comb, AnyComb,
    BasisId, DcComb, HopfError, ScComb,
};

fn sc(s: &str) -> SetSupercomposition {
    s.parse().expect("test index parses")
}

fn sp(s: &str) -> SetSuperpartition {
    sc(s).try_into().expect("test index is a superpartition")
}

fn perm(s: &str) -> Superpermutation {
    sc(s).try_into().expect("test index is a superpermutation")
}

fn dcomp(s: &str) -> DottedComposition {
    s.parse().expect("test index parses")
}

// --- unit laws ---

#[test]
fn empty_index_is_a_two_sided_unit() {
    let e = SetSupercomposition::empty();
    for n in 0..=3u32 {
        for m in 0..=2u32 {
            for i in all_set_supercompositions(n, m) {
                let id = ScComb::term(i.clone(), 1);
                assert_eq!(product_mnc(&e, &i), id);
                assert_eq!(product_mnc(&i, &e), id);
                assert_eq!(product_q(&e, &i), id);
                assert_eq!(product_q(&i, &e), id);
            }
        }
    }
    let de = DottedComposition::empty();
    for alpha in all_dotted_compositions_up_to(4) {
        let id = DcComb::term(alpha.clone(), 1);
        assert_eq!(product_mc(&de, &alpha), id);
        assert_eq!(product_mc(&alpha, &de), id);
        assert_eq!(product_fund(&de, &alpha), id);
        assert_eq!(product_fund(&alpha, &de), id);
    }
}

#[test]
fn antipode_fixes_the_unit_and_negates_degree_one() {
    let e = ScComb::term(SetSupercomposition::empty(), 1);
    assert_eq!(antipode_mnc(&e), e);
    assert_eq!(antipode_q(&e), e);
    // A primitive element of total size one: S(x) = -x.
    for i in ["{1}", "{0}"] {
        let x = ScComb::term(sc(i), 1);
        assert_eq!(antipode_mnc(&x), x.scaled(&BigInt::from(-1)));
        assert_eq!(antipode_q(&x), x.scaled(&BigInt::from(-1)));
    }
    assert_eq!(unit_comb::<SetSupercomposition>(3), e.scaled(&BigInt::from(3)));
}

// --- structural properties of the signed products ---

#[test]
fn q_products_of_superpermutations_stay_superpermutations() {
    let mut rng = ChaCha8Rng::seed_from_u64(9001);
    let mut pool: Vec<Superpermutation> = Vec::new();
    for n in 0..=3u32 {
        for m in 0..=2u32 {
            pool.extend(all_superpermutations(n, m));
        }
    }
    for _ in 0..200 {
        let a = &pool[rng.gen_range(0..pool.len())];
        let b = &pool[rng.gen_range(0..pool.len())];
        for (k, c) in product_q(a.as_sc(), b.as_sc()).iter() {
            assert!(
                Superpermutation::try_from(k.clone()).is_ok(),
                "Q-product term {k} of superpermutations is not a superpermutation"
            );
            assert!(!c.is_zero(), "stored zero coefficient at {k}");
        }
    }
}

#[test]
fn m_products_have_unit_coefficients_and_superpartition_support() {
    let mut rng = ChaCha8Rng::seed_from_u64(9002);
    let mut pool: Vec<SetSuperpartition> = Vec::new();
    for n in 0..=3u32 {
        for m in 0..=2u32 {
            pool.extend(all_set_superpartitions(n, m));
        }
    }
    for _ in 0..200 {
        let a = &pool[rng.gen_range(0..pool.len())];
        let b = &pool[rng.gen_range(0..pool.len())];
        for (k, c) in product_msym(a, b).iter() {
            assert!(
                SetSuperpartition::try_from(k.clone()).is_ok(),
                "m-product term {k} is not a set superpartition"
            );
            assert!(
                c == &BigInt::from(1) || c == &BigInt::from(-1),
                "coefficient {c} at {k}"
            );
        }
    }
}

#[test]
fn bare_fermionic_generator_squares_to_zero_in_the_m_basis() {
    let theta = sp("{0}");
    assert!(product_msym(&theta, &theta).is_zero());
}

#[test]
fn fundamental_basis_expansion_is_multiplicity_free() {
    for alpha in all_dotted_compositions_up_to(5) {
        for (_, c) in fundamental_to_mc_index(&alpha).iter() {
            assert_eq!(c, &BigInt::from(1), "L[{alpha}] expansion");
        }
    }
}

// --- basis changes ---

#[test]
fn m_expansion_has_one_term_per_block_ordering() {
    for n in 0..=3u32 {
        for m in 0..=2u32 {
            for i in all_set_superpartitions(n, m) {
                let expansion = msym_to_mnc_index(&i);
                let k = i.as_sc().len();
                let factorial: usize = (1..=k).product();
                assert_eq!(expansion.len(), factorial.max(1), "m[{}]", i.as_sc());
                for (_, c) in expansion.iter() {
                    assert!(c == &BigInt::from(1) || c == &BigInt::from(-1));
                }
            }
        }
    }
}

#[test]
fn mnc_to_msym_rejects_asymmetric_input() {
    // A single Mnc term with two blocks is not in the span of the m basis.
    let x = ScComb::term(sc("{1}|{2}"), 1);
    assert!(matches!(
        mnc_to_msym(&x),
        Err(HopfError::NotInMSymSpan(_))
    ));
}

#[test]
fn q_and_mnc_triangular_changes_invert() {
    for n in 0..=3u32 {
        for m in 0..=2u32 {
            for i in all_set_supercompositions(n, m) {
                let id = ScComb::term(i.clone(), 1);
                assert_eq!(
                    mnc_to_q_index(&i).expand_linear(q_to_mnc_index),
                    id,
                    "roundtrip at {i}"
                );
            }
        }
    }
}

#[test]
fn change_basis_identity_and_unsupported_paths() {
    let x = AnyComb::Set(ScComb::term(sc("{1}|{0,2}"), 2));
    assert_eq!(change_basis(&x, BasisId::Q, BasisId::Q).unwrap(), x);
    assert!(matches!(
        change_basis(&x, BasisId::Q, BasisId::MSym),
        Err(HopfError::UnsupportedBasisChange { .. })
    ));
    // Mc expansions reach the dotted world through abelianization.
    let y = change_basis(&x, BasisId::MNc, BasisId::MC).unwrap();
    match y {
        AnyComb::Dotted(c) => {
            assert_eq!(c, DcComb::term(dcomp("(1,.1)"), 2));
        }
        AnyComb::Set(_) => panic!("abelianization must produce a dotted combination"),
    }
}

#[test]
fn monf_to_q_is_mobius_triangular() {
    // The change matrix rooted at a superpermutation is supported on its
    // weak-order upset, with leading coefficient one.
    for (n, m) in [(3, 0), (2, 1), (1, 1)] {
        for i in all_superpermutations(n, m) {
            let x = monf_to_q_index(&i);
            assert_eq!(x.coeff(i.as_sc()), BigInt::from(1));
            for (k, _) in x.iter() {
                let k = perm(&k.to_string());
                assert!(
                    superqsym::posets::weak_leq(&i, &k),
                    "term {} outside the upset of {}",
                    k.as_sc(),
                    i.as_sc()
                );
            }
        }
    }
}

// --- abelianization ---

#[test]
fn abelianization_is_an_algebra_map_on_indices() {
    let mut rng = ChaCha8Rng::seed_from_u64(9003);
    let mut pool: Vec<SetSupercomposition> = Vec::new();
    for n in 0..=3u32 {
        for m in 0..=2u32 {
            pool.extend(all_set_supercompositions(n, m));
        }
    }
    for _ in 0..100 {
        let a = &pool[rng.gen_range(0..pool.len())];
        let b = &pool[rng.gen_range(0..pool.len())];
        let lhs = abelianize_mnc(&product_mnc(a, b));
        let rhs = product_mc(&a.alpha(), &b.alpha());
        assert_eq!(lhs, rhs, "pi(M[{a}] M[{b}])");
    }
}

#[test]
fn abelianize_q_requires_superpermutation_indices() {
    let ok = abelianize_q(&ScComb::term(sc("{1}|{0,2}"), 1));
    assert!(ok.is_ok());
    let bad = abelianize_q(&ScComb::term(sc("{1,2}"), 1));
    assert!(bad.is_err(), "Q indices with non-singleton bosonic blocks are outside sNCQSym");
}

// --- coproduct structure ---

#[test]
fn deconcatenation_coproducts_standardize_both_tensor_legs() {
    for i in all_set_supercompositions(3, 1) {
        for ((l, r), _) in coproduct_mnc(&i).iter() {
            for leg in [l, r] {
                let bd = leg.bidegree();
                assert!(
                    all_set_supercompositions(bd.n, bd.m).contains(leg),
                    "leg {leg} of the coproduct of {i} is not standard"
                );
            }
        }
        // Q and Mnc deconcatenate identically up to the basis label.
        assert_eq!(coproduct_mnc(&i), coproduct_q(&i));
    }
}

#[test]
fn monf_coproduct_splits_only_at_global_descents() {
    for (n, m) in [(3, 0), (2, 1), (2, 2)] {
        for i in all_superpermutations(n, m) {
            let terms = coproduct_monf(&i);
            assert_eq!(
                terms.iter().count(),
                i.global_descents().len(),
                "coproduct of {}",
                i.as_sc()
            );
            for (_, c) in terms.iter() {
                assert_eq!(c, &BigInt::from(1));
            }
        }
    }
}

// --- products against the shuffle backbone ---

#[test]
fn monf_product_roundtrips_through_q() {
    let mut rng = ChaCha8Rng::seed_from_u64(9004);
    let mut pool: Vec<Superpermutation> = Vec::new();
    for n in 0..=2u32 {
        for m in 0..=1u32 {
            pool.extend(all_superpermutations(n, m));
        }
    }
    for _ in 0..60 {
        let a = &pool[rng.gen_range(0..pool.len())];
        let b = &pool[rng.gen_range(0..pool.len())];
        let prod = product_monf(a, b).expect("weak-order window is large enough");
        // Re-expanding the product in Q must equal the Q-product of the
        // Q-expansions.
        let mut lhs = ScComb::zero();
        for (k, c) in prod.iter() {
            lhs.add_assign_scaled(&monf_to_q_index(&perm(&k.to_string())), c);
        }
        let rhs = superqsym::hopf::mul_bilinear(
            &monf_to_q_index(a),
            &monf_to_q_index(b),
            product_q,
        );
        assert_eq!(lhs, rhs, "MonF product of {} and {}", a.as_sc(), b.as_sc());
    }
}

#[test]
fn fundamental_product_matches_shifted_shuffle_cardinality() {
    // With no fermionic parts the signed shuffle has no signs and the
    // number of terms (with multiplicity) is a binomial coefficient.
    let a = dcomp("(2)");
    let b = dcomp("(1,1)");
    let prod = product_fund(&a, &b);
    let total: BigInt = prod.iter().map(|(_, c)| c.clone()).sum();
    // lift(2) has 2 letters, lift(1,1) has 2 letters: C(4,2) = 6 shuffles.
    assert_eq!(total, BigInt::from(6));
}

// --- rendering ---

#[test]
fn renderers_emit_sorted_signed_lines() {
    let mut x = ScComb::zero();
    x.add_term(sc("{1}"), BigInt::from(-2));
    x.add_term(sc("{0,1}"), BigInt::from(1));
    assert_eq!(
        render_comb(BasisId::MNc, &x),
        "+1 * Mnc[{0,1}]\n-2 * Mnc[{1}]\n"
    );
    assert_eq!(render_comb(BasisId::Q, &ScComb::zero()), "0\n");

    let d = coproduct_monf(&perm("{2}|{1}"));
    assert_eq!(
        render_tensor(BasisId::MonF, &d),
        "+1 * MonF[e] # MonF[{2}|{1}]\n\
         +1 * MonF[{1}] # MonF[{1}]\n\
         +1 * MonF[{2}|{1}] # MonF[e]\n"
    );
}
