//! Truncated free-superalgebra oracle: expands every basis into honest
//! polynomials over a finite alphabet and verifies the formula layer by
//! brute force.
//!
//! Monomials live in the free algebra on bosonic variables `x1..xN`
//! (noncommuting in the noncommutative variant, exponent maps in the
//! commutative one) and fermionic variables `t1..tN` with `ti*tj = -tj*ti`
//! (hence `ti*ti = 0`) and `ti*xj = xj*ti`.  Coefficients are machine
//! integers with checked arithmetic; every quantity in scope is tiny.
//!
//! Products are verified by comparing polynomial products against the
//! expansion of the formula-computed result.  Coproducts are verified over a
//! doubled alphabet `x1..xN < y1..yN` (and `t < u` fermionically) in which
//! the two groups commute bosonically: every monomial then splits uniquely
//! into its low and high parts, with no sign because fermionic lists are
//! kept sorted.

use std::collections::btree_map::Entry;
use std::collections::BTreeMap;
use std::fmt;

use itertools::Itertools;
use num_traits::ToPrimitive;
use thiserror::Error;

use crate::combinat::{
    DottedComposition, SetSupercomposition, SetSuperpartition, Superpermutation,
};
use crate::hopf::{self, BasisId, DcComb, HopfError, ScComb, TensorComb};
use crate::posets;

/// Errors from the oracle layer.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum OracleError {
    #[error("generator s_{generator} needs variable {} but the alphabet stops at {n_vars}", generator + 1)]
    AlphabetOverflow { generator: u32, n_vars: u32 },
    #[error("coefficient {0} does not fit the oracle's machine integers")]
    CoefficientOverflow(String),
    #[error("index {index} is not a superpermutation, as required for the {basis} basis")]
    NotSuperpermutation { index: String, basis: BasisId },
    #[error("index {0} is not a set superpartition, as required for the m basis")]
    NotSetSuperpartition(String),
    #[error("the {basis} basis is not supported by {operation}")]
    UnsupportedBasis {
        basis: BasisId,
        operation: &'static str,
    },
    #[error(transparent)]
    Hopf(#[from] HopfError),
}

// ---------------------------------------------------------------------------
// Monomials and polynomials
// ---------------------------------------------------------------------------

/// Monomial types with a normal form and a signed product.
pub trait Monomial: Ord + Clone {
    /// The empty monomial `1`.
    fn unit() -> Self;
    /// Signed normal-form product; `None` when a fermionic variable repeats.
    fn mul(&self, other: &Self) -> Option<(Self, i64)>;
}

/// Merges two strictly increasing fermionic index lists, counting the
/// transpositions needed; `None` when they intersect (the product is zero).
fn merge_thetas(a: &[u32], b: &[u32]) -> Option<(Vec<u32>, i64)> {
    let mut inversions = 0u64;
    for &x in a {
        for &y in b {
            if x == y {
                return None;
            }
            if y < x {
                inversions += 1;
            }
        }
    }
    let mut merged: Vec<u32> = a.iter().chain(b.iter()).copied().collect();
    merged.sort_unstable();
    Some((merged, if inversions.is_multiple_of(2) { 1 } else { -1 }))
}

/// A normal-form monomial in noncommuting bosonic variables: a strictly
/// increasing fermionic index list followed by a word of bosonic indices.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct NcMonomial {
    thetas: Vec<u32>,
    word: Vec<u32>,
}

impl NcMonomial {
    /// Builds a monomial; the fermionic list must be strictly increasing.
    pub fn new(thetas: Vec<u32>, word: Vec<u32>) -> Self {
        debug_assert!(thetas.windows(2).all(|w| w[0] < w[1]));
        Self { thetas, word }
    }

    pub fn thetas(&self) -> &[u32] {
        &self.thetas
    }

    pub fn word(&self) -> &[u32] {
        &self.word
    }

    /// Largest variable index used (0 for the unit monomial).
    pub fn max_index(&self) -> u32 {
        self.thetas
            .iter()
            .chain(self.word.iter())
            .copied()
            .max()
            .unwrap_or(0)
    }
}

impl Monomial for NcMonomial {
    fn unit() -> Self {
        Self {
            thetas: Vec::new(),
            word: Vec::new(),
        }
    }

    fn mul(&self, other: &Self) -> Option<(Self, i64)> {
        let (thetas, sign) = merge_thetas(&self.thetas, &other.thetas)?;
        let mut word = self.word.clone();
        word.extend_from_slice(&other.word);
        Some((Self { thetas, word }, sign))
    }
}

impl fmt::Display for NcMonomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.thetas.is_empty() && self.word.is_empty() {
            return f.write_str("1");
        }
        let thetas = self.thetas.iter().map(|t| format!("t{t}")).join(" ");
        let word = self.word.iter().map(|x| format!("x{x}")).join(" ");
        match (thetas.is_empty(), word.is_empty()) {
            (false, false) => write!(f, "{thetas} | {word}"),
            (false, true) => f.write_str(&thetas),
            (true, false) => f.write_str(&word),
            (true, true) => unreachable!(),
        }
    }
}

/// A normal-form monomial in commuting bosonic variables: a strictly
/// increasing fermionic index list and an exponent map (no zero exponents).
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct CMonomial {
    thetas: Vec<u32>,
    powers: BTreeMap<u32, u32>,
}

impl CMonomial {
    /// Builds a monomial; the fermionic list must be strictly increasing and
    /// exponents positive.
    pub fn new(thetas: Vec<u32>, powers: BTreeMap<u32, u32>) -> Self {
        debug_assert!(thetas.windows(2).all(|w| w[0] < w[1]));
        debug_assert!(powers.values().all(|&e| e > 0));
        Self { thetas, powers }
    }

    pub fn thetas(&self) -> &[u32] {
        &self.thetas
    }

    pub fn powers(&self) -> &BTreeMap<u32, u32> {
        &self.powers
    }

    pub fn max_index(&self) -> u32 {
        self.thetas
            .iter()
            .copied()
            .chain(self.powers.keys().copied())
            .max()
            .unwrap_or(0)
    }
}

impl Monomial for CMonomial {
    fn unit() -> Self {
        Self {
            thetas: Vec::new(),
            powers: BTreeMap::new(),
        }
    }

    fn mul(&self, other: &Self) -> Option<(Self, i64)> {
        let (thetas, sign) = merge_thetas(&self.thetas, &other.thetas)?;
        let mut powers = self.powers.clone();
        for (&v, &e) in &other.powers {
            *powers.entry(v).or_insert(0) += e;
        }
        Some((Self { thetas, powers }, sign))
    }
}

impl fmt::Display for CMonomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.thetas.is_empty() && self.powers.is_empty() {
            return f.write_str("1");
        }
        let tokens = self
            .thetas
            .iter()
            .map(|t| format!("t{t}"))
            .chain(self.powers.iter().map(|(&v, &e)| {
                if e == 1 {
                    format!("x{v}")
                } else {
                    format!("x{v}^{e}")
                }
            }))
            .join(" ");
        f.write_str(&tokens)
    }
}

/// A sparse polynomial with machine-integer coefficients; zero coefficients
/// are never stored and arithmetic is checked.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct Poly<M: Ord> {
    terms: BTreeMap<M, i64>,
}

impl<M: Ord + Clone> Poly<M> {
    pub fn zero() -> Self {
        Self {
            terms: BTreeMap::new(),
        }
    }

    pub fn term(m: M, c: i64) -> Self {
        let mut out = Self::zero();
        out.add_term(m, c);
        out
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn coeff(&self, m: &M) -> i64 {
        self.terms.get(m).copied().unwrap_or(0)
    }

    pub fn iter(&self) -> impl Iterator<Item = (&M, &i64)> {
        self.terms.iter()
    }

    pub fn add_term(&mut self, m: M, c: i64) {
        if c == 0 {
            return;
        }
        match self.terms.entry(m) {
            Entry::Occupied(mut e) => {
                let v = e.get().checked_add(c).expect("oracle coefficient overflow");
                if v == 0 {
                    e.remove();
                } else {
                    *e.get_mut() = v;
                }
            }
            Entry::Vacant(e) => {
                e.insert(c);
            }
        }
    }

    pub fn add_assign_scaled(&mut self, other: &Self, scale: i64) {
        if scale == 0 {
            return;
        }
        for (m, c) in &other.terms {
            self.add_term(
                m.clone(),
                c.checked_mul(scale).expect("oracle coefficient overflow"),
            );
        }
    }
}

impl<M: Monomial> Poly<M> {
    /// The constant polynomial `1`.
    pub fn one() -> Self {
        Self::term(M::unit(), 1)
    }

    /// Polynomial product with the signed monomial normal form.
    pub fn mul(&self, other: &Self) -> Self {
        let mut out = Self::zero();
        for (ma, ca) in &self.terms {
            for (mb, cb) in &other.terms {
                if let Some((m, sign)) = ma.mul(mb) {
                    let c = ca
                        .checked_mul(*cb)
                        .and_then(|v| v.checked_mul(sign))
                        .expect("oracle coefficient overflow");
                    out.add_term(m, c);
                }
            }
        }
        out
    }
}

/// Renders a polynomial as one `<signed coefficient> * <monomial>` line per
/// term, sorted lexicographically by monomial serialization; zero is `0`.
pub fn render_poly<M: Ord + Clone + fmt::Display>(p: &Poly<M>) -> String {
    if p.is_zero() {
        return "0\n".to_string();
    }
    let mut lines: Vec<(String, i64)> = p.iter().map(|(m, &c)| (m.to_string(), c)).collect();
    lines.sort();
    lines
        .into_iter()
        .map(|(m, c)| {
            let sign = if c < 0 {
                c.to_string()
            } else {
                format!("+{c}")
            };
            format!("{sign} * {m}\n")
        })
        .collect()
}

// ---------------------------------------------------------------------------
// Expansions
// ---------------------------------------------------------------------------

/// Expands the noncommutative monomial basis element `M_I` over `[n_vars]`:
/// the sum over strictly increasing variable choices `i_1 < … < i_k` of the
/// monomial whose word places `i_t` at the positions in block `t`, with a
/// fermionic variable `i_t` for each fermionic block.
pub fn expand_mnc(i: &SetSupercomposition, n_vars: u32) -> Poly<NcMonomial> {
    let blocks = i.blocks();
    let k = blocks.len();
    let n = i.bidegree().n as usize;
    // block_of[p] = index of the block holding position p + 1.
    let mut block_of = vec![0usize; n];
    for (t, b) in blocks.iter().enumerate() {
        for v in b.nonzero() {
            block_of[(v - 1) as usize] = t;
        }
    }
    let mut out = Poly::zero();
    for choice in (1..=n_vars).combinations(k) {
        let thetas: Vec<u32> = (0..k)
            .filter(|&t| blocks[t].fermionic())
            .map(|t| choice[t])
            .collect();
        let word: Vec<u32> = block_of.iter().map(|&t| choice[t]).collect();
        out.add_term(NcMonomial::new(thetas, word), 1);
    }
    out
}

/// Expands `Q_I` over `[n_vars]` as the merge-order filter sum of `M`
/// expansions.
pub fn expand_q(i: &SetSupercomposition, n_vars: u32) -> Poly<NcMonomial> {
    let mut out = Poly::zero();
    for j in posets::sc_upset_elements(i) {
        out.add_assign_scaled(&expand_mnc(&j, n_vars), 1);
    }
    out
}

/// Expands `𝓜_I` over `[n_vars]` as the weak-order Möbius-weighted sum of
/// `Q` expansions.
pub fn expand_monf(i: &Superpermutation, n_vars: u32) -> Poly<NcMonomial> {
    let mut out = Poly::zero();
    for (j, mu) in posets::mobius_weak_upset(i) {
        out.add_assign_scaled(&expand_q(j.as_sc(), n_vars), mu);
    }
    out
}

/// Expands the monomial symmetric basis element `m_I` over `[n_vars]`
/// directly: the signed sum over injective assignments of variables to
/// blocks, where positions in a block share the block's variable, fermionic
/// blocks contribute that fermionic variable, and the sign counts inverted
/// fermionic pairs of the assignment.
pub fn expand_msym(i: &SetSuperpartition, n_vars: u32) -> Poly<NcMonomial> {
    let blocks = i.as_sc().blocks();
    let k = blocks.len();
    let n = i.as_sc().bidegree().n as usize;
    let mut block_of = vec![0usize; n];
    for (t, b) in blocks.iter().enumerate() {
        for v in b.nonzero() {
            block_of[(v - 1) as usize] = t;
        }
    }
    let fermionic: Vec<usize> = (0..k).filter(|&t| blocks[t].fermionic()).collect();
    let mut out = Poly::zero();
    for assignment in (1..=n_vars).permutations(k) {
        let mut inversions = 0u32;
        for a in 0..fermionic.len() {
            for b in (a + 1)..fermionic.len() {
                if assignment[fermionic[a]] > assignment[fermionic[b]] {
                    inversions += 1;
                }
            }
        }
        let mut thetas: Vec<u32> = fermionic.iter().map(|&t| assignment[t]).collect();
        thetas.sort_unstable();
        let word: Vec<u32> = block_of.iter().map(|&t| assignment[t]).collect();
        let sign = if inversions.is_multiple_of(2) { 1 } else { -1 };
        out.add_term(NcMonomial::new(thetas, word), sign);
    }
    out
}

/// Expands the commutative monomial basis element `M_α` over `[n_vars]`:
/// the sum over strictly increasing variable choices of
/// `t_{i}^{dot} x_{i}^{value}` factors.
pub fn expand_mc(alpha: &DottedComposition, n_vars: u32) -> Poly<CMonomial> {
    let parts = alpha.parts();
    let k = parts.len();
    let mut out = Poly::zero();
    for choice in (1..=n_vars).combinations(k) {
        let thetas: Vec<u32> = (0..k)
            .filter(|&t| parts[t].is_dotted())
            .map(|t| choice[t])
            .collect();
        let mut powers = BTreeMap::new();
        for t in 0..k {
            if parts[t].value() > 0 {
                powers.insert(choice[t], parts[t].value());
            }
        }
        out.add_term(CMonomial::new(thetas, powers), 1);
    }
    out
}

/// Expands `L_α` over `[n_vars]` as the refinement-order ideal sum of
/// commutative monomial expansions.
pub fn expand_fund(alpha: &DottedComposition, n_vars: u32) -> Poly<CMonomial> {
    let mut out = Poly::zero();
    for beta in posets::dotted_downset_elements(alpha) {
        out.add_assign_scaled(&expand_mc(&beta, n_vars), 1);
    }
    out
}

/// Lets the bosonic variables commute: each word collapses to its exponent
/// map.  Fermionic parts are untouched, so no sign arises.
pub fn commutative_image(p: &Poly<NcMonomial>) -> Poly<CMonomial> {
    let mut out = Poly::zero();
    for (m, &c) in p.iter() {
        let mut powers = BTreeMap::new();
        for &x in m.word() {
            *powers.entry(x).or_insert(0) += 1;
        }
        out.add_term(CMonomial::new(m.thetas().to_vec(), powers), c);
    }
    out
}

/// Standardizes a noncommutative monomial (order-preserving relabeling of
/// its variable indices onto an initial segment) and reads off its set
/// supercomposition: block `r` holds the word positions of variable `r`,
/// plus `0` when the fermionic variable `r` occurs.
pub fn std_and_i(u: &NcMonomial) -> (NcMonomial, SetSupercomposition) {
    let mut indices: Vec<u32> = u.thetas().iter().chain(u.word().iter()).copied().collect();
    indices.sort_unstable();
    indices.dedup();
    let rank: BTreeMap<u32, u32> = indices
        .iter()
        .enumerate()
        .map(|(r, &v)| (v, r as u32 + 1))
        .collect();
    let thetas: Vec<u32> = u.thetas().iter().map(|t| rank[t]).collect();
    let word: Vec<u32> = u.word().iter().map(|x| rank[x]).collect();
    let std = NcMonomial::new(thetas, word);
    let k = indices.len();
    let mut blocks: Vec<std::collections::BTreeSet<u32>> = vec![Default::default(); k];
    for (p, &x) in std.word().iter().enumerate() {
        blocks[(x - 1) as usize].insert(p as u32 + 1);
    }
    for &t in std.thetas() {
        blocks[(t - 1) as usize].insert(0);
    }
    let index = SetSupercomposition::new(
        blocks
            .into_iter()
            .map(|b| crate::combinat::Block::new(b).expect("blocks of a monomial are nonempty"))
            .collect(),
    )
    .expect("the supercomposition of a monomial is valid");
    (std, index)
}

// ---------------------------------------------------------------------------
// Quasisymmetrizing actions
// ---------------------------------------------------------------------------

fn check_generators(generators: &[u32], n_vars: u32) -> Result<(), OracleError> {
    for &g in generators {
        if g == 0 || g + 1 > n_vars {
            return Err(OracleError::AlphabetOverflow {
                generator: g,
                n_vars,
            });
        }
    }
    Ok(())
}

/// Applies one simple transposition to a commutative monomial: variables `g`
/// and `g + 1` swap exactly when at least one of the two slots is empty
/// (no bosonic exponent and no fermionic variable).
fn apply_gen_c(u: &CMonomial, g: u32) -> CMonomial {
    let occupied = |v: u32| u.powers.contains_key(&v) || u.thetas.binary_search(&v).is_ok();
    if occupied(g) && occupied(g + 1) {
        return u.clone();
    }
    let relabel = |v: u32| {
        if v == g {
            g + 1
        } else if v == g + 1 {
            g
        } else {
            v
        }
    };
    let mut thetas: Vec<u32> = u.thetas.iter().map(|&t| relabel(t)).collect();
    thetas.sort_unstable();
    let powers = u.powers.iter().map(|(&v, &e)| (relabel(v), e)).collect();
    CMonomial::new(thetas, powers)
}

/// Applies one simple transposition to a noncommutative monomial: the letter
/// slots of `g` and `g + 1` swap exactly when at least one variable is
/// entirely unused (no letter occurrence and no fermionic variable).
fn apply_gen_nc(u: &NcMonomial, g: u32) -> NcMonomial {
    let occupied =
        |v: u32| u.word.contains(&v) || u.thetas.binary_search(&v).is_ok();
    if occupied(g) && occupied(g + 1) {
        return u.clone();
    }
    let relabel = |v: u32| {
        if v == g {
            g + 1
        } else if v == g + 1 {
            g
        } else {
            v
        }
    };
    let mut thetas: Vec<u32> = u.thetas.iter().map(|&t| relabel(t)).collect();
    thetas.sort_unstable();
    let word = u.word.iter().map(|&x| relabel(x)).collect();
    NcMonomial::new(thetas, word)
}

/// Acts on a commutative monomial by a word of simple transpositions
/// `s_{g_1} s_{g_2} …`, applied rightmost first.
pub fn qs_action_c_monomial(
    generators: &[u32],
    u: &CMonomial,
    n_vars: u32,
) -> Result<CMonomial, OracleError> {
    check_generators(generators, n_vars)?;
    let mut m = u.clone();
    for &g in generators.iter().rev() {
        m = apply_gen_c(&m, g);
    }
    Ok(m)
}

/// Acts on a noncommutative monomial by a word of simple transpositions,
/// applied rightmost first.
pub fn qs_action_nc_monomial(
    generators: &[u32],
    u: &NcMonomial,
    n_vars: u32,
) -> Result<NcMonomial, OracleError> {
    check_generators(generators, n_vars)?;
    let mut m = u.clone();
    for &g in generators.iter().rev() {
        m = apply_gen_nc(&m, g);
    }
    Ok(m)
}

/// Linear extension of the commutative action to polynomials.
pub fn qs_action_c(
    generators: &[u32],
    p: &Poly<CMonomial>,
    n_vars: u32,
) -> Result<Poly<CMonomial>, OracleError> {
    check_generators(generators, n_vars)?;
    let mut out = Poly::zero();
    for (m, &c) in p.iter() {
        out.add_term(qs_action_c_monomial(generators, m, n_vars)?, c);
    }
    Ok(out)
}

/// Linear extension of the noncommutative action to polynomials.
pub fn qs_action_nc(
    generators: &[u32],
    p: &Poly<NcMonomial>,
    n_vars: u32,
) -> Result<Poly<NcMonomial>, OracleError> {
    check_generators(generators, n_vars)?;
    let mut out = Poly::zero();
    for (m, &c) in p.iter() {
        out.add_term(qs_action_nc_monomial(generators, m, n_vars)?, c);
    }
    Ok(out)
}

/// Whether `s_i · p = p` for every generator `i ≤ max_gen` (commutative).
pub fn check_invariance_c(
    p: &Poly<CMonomial>,
    max_gen: u32,
    n_vars: u32,
) -> Result<bool, OracleError> {
    for g in 1..=max_gen {
        if qs_action_c(&[g], p, n_vars)? != *p {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Whether `s_i · p = p` for every generator `i ≤ max_gen` (noncommutative).
pub fn check_invariance_nc(
    p: &Poly<NcMonomial>,
    max_gen: u32,
    n_vars: u32,
) -> Result<bool, OracleError> {
    for g in 1..=max_gen {
        if qs_action_nc(&[g], p, n_vars)? != *p {
            return Ok(false);
        }
    }
    Ok(true)
}

// ---------------------------------------------------------------------------
// Basis-expression expansion and verification
// ---------------------------------------------------------------------------

fn coeff_i64(c: &num_bigint::BigInt) -> Result<i64, OracleError> {
    c.to_i64()
        .ok_or_else(|| OracleError::CoefficientOverflow(c.to_string()))
}

/// Expands a single set-indexed basis element over `[n_vars]`.
pub fn expand_set_index(
    basis: BasisId,
    i: &SetSupercomposition,
    n_vars: u32,
) -> Result<Poly<NcMonomial>, OracleError> {
    match basis {
        BasisId::MNc => Ok(expand_mnc(i, n_vars)),
        BasisId::Q => Ok(expand_q(i, n_vars)),
        BasisId::MonF => {
            let sp = Superpermutation::try_from(i.clone()).map_err(|_| {
                OracleError::NotSuperpermutation {
                    index: i.to_string(),
                    basis,
                }
            })?;
            Ok(expand_monf(&sp, n_vars))
        }
        BasisId::MSym => {
            let sp = SetSuperpartition::try_from(i.clone())
                .map_err(|_| OracleError::NotSetSuperpartition(i.to_string()))?;
            Ok(expand_msym(&sp, n_vars))
        }
        BasisId::MC | BasisId::L => Err(OracleError::UnsupportedBasis {
            basis,
            operation: "noncommutative expansion",
        }),
    }
}

/// Expands a set-indexed combination over `[n_vars]`.
pub fn expand_set_comb(
    basis: BasisId,
    x: &ScComb,
    n_vars: u32,
) -> Result<Poly<NcMonomial>, OracleError> {
    let mut out = Poly::zero();
    for (k, c) in x.iter() {
        out.add_assign_scaled(&expand_set_index(basis, k, n_vars)?, coeff_i64(c)?);
    }
    Ok(out)
}

/// Expands a single dotted-indexed basis element over `[n_vars]`.
pub fn expand_dotted_index(
    basis: BasisId,
    alpha: &DottedComposition,
    n_vars: u32,
) -> Result<Poly<CMonomial>, OracleError> {
    match basis {
        BasisId::MC => Ok(expand_mc(alpha, n_vars)),
        BasisId::L => Ok(expand_fund(alpha, n_vars)),
        _ => Err(OracleError::UnsupportedBasis {
            basis,
            operation: "commutative expansion",
        }),
    }
}

/// Expands a dotted-indexed combination over `[n_vars]`.
pub fn expand_dotted_comb(
    basis: BasisId,
    x: &DcComb,
    n_vars: u32,
) -> Result<Poly<CMonomial>, OracleError> {
    let mut out = Poly::zero();
    for (k, c) in x.iter() {
        out.add_assign_scaled(&expand_dotted_index(basis, k, n_vars)?, coeff_i64(c)?);
    }
    Ok(out)
}

/// Computes the formula product in a set-indexed basis.
fn formula_product_set(
    basis: BasisId,
    i: &SetSupercomposition,
    j: &SetSupercomposition,
) -> Result<ScComb, OracleError> {
    match basis {
        BasisId::MNc => Ok(hopf::product_mnc(i, j)),
        BasisId::Q => Ok(hopf::product_q(i, j)),
        BasisId::MSym => {
            let si = SetSuperpartition::try_from(i.clone())
                .map_err(|_| OracleError::NotSetSuperpartition(i.to_string()))?;
            let sj = SetSuperpartition::try_from(j.clone())
                .map_err(|_| OracleError::NotSetSuperpartition(j.to_string()))?;
            Ok(hopf::product_msym(&si, &sj))
        }
        BasisId::MonF => {
            let si = Superpermutation::try_from(i.clone()).map_err(|_| {
                OracleError::NotSuperpermutation {
                    index: i.to_string(),
                    basis,
                }
            })?;
            let sj = Superpermutation::try_from(j.clone()).map_err(|_| {
                OracleError::NotSuperpermutation {
                    index: j.to_string(),
                    basis,
                }
            })?;
            Ok(hopf::product_monf(&si, &sj)?)
        }
        BasisId::MC | BasisId::L => Err(OracleError::UnsupportedBasis {
            basis,
            operation: "set-indexed products",
        }),
    }
}

/// Verifies the formula product of a set-indexed basis against the honest
/// polynomial product over `[n_vars]`.
pub fn verify_product(
    basis: BasisId,
    i: &SetSupercomposition,
    j: &SetSupercomposition,
    n_vars: u32,
) -> Result<bool, OracleError> {
    let lhs = expand_set_index(basis, i, n_vars)?.mul(&expand_set_index(basis, j, n_vars)?);
    let claimed = formula_product_set(basis, i, j)?;
    let rhs = expand_set_comb(basis, &claimed, n_vars)?;
    Ok(lhs == rhs)
}

/// Verifies the formula product of a dotted-indexed basis against the honest
/// polynomial product over `[n_vars]`.
pub fn verify_product_dotted(
    basis: BasisId,
    a: &DottedComposition,
    b: &DottedComposition,
    n_vars: u32,
) -> Result<bool, OracleError> {
    let claimed = match basis {
        BasisId::MC => hopf::product_mc(a, b),
        BasisId::L => hopf::product_fund(a, b),
        _ => {
            return Err(OracleError::UnsupportedBasis {
                basis,
                operation: "dotted-indexed products",
            })
        }
    };
    let lhs = expand_dotted_index(basis, a, n_vars)?.mul(&expand_dotted_index(basis, b, n_vars)?);
    let rhs = expand_dotted_comb(basis, &claimed, n_vars)?;
    Ok(lhs == rhs)
}

/// Splits a doubled-alphabet monomial into its low part (variables `≤ n`)
/// and its high part (variables `> n`, relabeled down by `n`).  Fermionic
/// lists stay sorted, and low/high bosonic variables commute in the target,
/// so no sign arises.
fn split_nc(m: &NcMonomial, n: u32) -> (NcMonomial, NcMonomial) {
    let lo_t: Vec<u32> = m.thetas().iter().copied().filter(|&t| t <= n).collect();
    let hi_t: Vec<u32> = m
        .thetas()
        .iter()
        .copied()
        .filter(|&t| t > n)
        .map(|t| t - n)
        .collect();
    let lo_w: Vec<u32> = m.word().iter().copied().filter(|&x| x <= n).collect();
    let hi_w: Vec<u32> = m
        .word()
        .iter()
        .copied()
        .filter(|&x| x > n)
        .map(|x| x - n)
        .collect();
    (NcMonomial::new(lo_t, lo_w), NcMonomial::new(hi_t, hi_w))
}

/// Computes the formula coproduct in a set-indexed basis.
fn formula_coproduct_set(
    basis: BasisId,
    i: &SetSupercomposition,
) -> Result<TensorComb<SetSupercomposition>, OracleError> {
    match basis {
        BasisId::MNc => Ok(hopf::coproduct_mnc(i)),
        BasisId::Q => Ok(hopf::coproduct_q(i)),
        BasisId::MSym => {
            let sp = SetSuperpartition::try_from(i.clone())
                .map_err(|_| OracleError::NotSetSuperpartition(i.to_string()))?;
            Ok(hopf::coproduct_msym(&sp))
        }
        BasisId::MonF => {
            let sp = Superpermutation::try_from(i.clone()).map_err(|_| {
                OracleError::NotSuperpermutation {
                    index: i.to_string(),
                    basis,
                }
            })?;
            Ok(hopf::coproduct_monf(&sp))
        }
        BasisId::MC | BasisId::L => Err(OracleError::UnsupportedBasis {
            basis,
            operation: "set-indexed coproducts",
        }),
    }
}

/// Verifies the formula coproduct of a set-indexed basis by expanding the
/// index over the doubled alphabet `[2 * n_vars]`, splitting every monomial
/// at `n_vars`, and comparing with the tensor expansion of the formula
/// result at `n_vars` per factor.
pub fn verify_coproduct(
    basis: BasisId,
    i: &SetSupercomposition,
    n_vars: u32,
) -> Result<bool, OracleError> {
    let doubled = expand_set_index(basis, i, 2 * n_vars)?;
    let mut lhs: Poly<(NcMonomial, NcMonomial)> = Poly::zero();
    for (m, &c) in doubled.iter() {
        lhs.add_term(split_nc(m, n_vars), c);
    }
    let claimed = formula_coproduct_set(basis, i)?;
    let mut rhs: Poly<(NcMonomial, NcMonomial)> = Poly::zero();
    for ((a, b), c) in claimed.iter() {
        let pa = expand_set_index(basis, a, n_vars)?;
        let pb = expand_set_index(basis, b, n_vars)?;
        let c = coeff_i64(c)?;
        for (ma, &ca) in pa.iter() {
            for (mb, &cb) in pb.iter() {
                let coeff = c
                    .checked_mul(ca)
                    .and_then(|v| v.checked_mul(cb))
                    .expect("oracle coefficient overflow");
                rhs.add_term((ma.clone(), mb.clone()), coeff);
            }
        }
    }
    Ok(lhs == rhs)
}

/// Verifies that abelianizing the formula product of `M_I M_J` agrees with
/// the product of the abelianized factors, compared through commutative
/// polynomial expansion over `[n_vars]`.
pub fn verify_pi_product(
    i: &SetSupercomposition,
    j: &SetSupercomposition,
    n_vars: u32,
) -> Result<bool, OracleError> {
    let prod = hopf::product_mnc(i, j);
    let lhs = expand_dotted_comb(BasisId::MC, &hopf::abelianize_mnc(&prod), n_vars)?;
    let rhs = expand_mc(&i.alpha(), n_vars).mul(&expand_mc(&j.alpha(), n_vars));
    Ok(lhs == rhs)
}

/// Verifies that the commutative image of the noncommutative expansion of
/// `M_I` equals the commutative expansion of `M_{α(I)}`.
pub fn verify_pi_expansion(i: &SetSupercomposition, n_vars: u32) -> bool {
    commutative_image(&expand_mnc(i, n_vars)) == expand_mc(&i.alpha(), n_vars)
}
