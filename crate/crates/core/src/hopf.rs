//! The Hopf-algebra layer: formal linear combinations over arbitrary-precision
//! integers, signed shuffle products, deconcatenation coproducts, basis
//! changes, the Takeuchi antipode, and the abelianization map.
//!
//! Six bases are supported.  Four are indexed by set supercompositions:
//! `Mnc` (monomial) and `Q` (fundamental-by-filter) on all supercompositions,
//! `m` on set superpartitions, and `MonF` on superpermutations.  Two are
//! indexed by dotted compositions: `Mc` (monomial) and `L` (fundamental).
//!
//! Sign conventions: the product in the `Mnc`/`Q` bases is a signed
//! (quasi/super) shuffle whose sign counts crossings of fermionic blocks;
//! the tensor square multiplies with the super sign rule
//! `(a ⊗ b)(c ⊗ d) = (−1)^{|b||c|} ac ⊗ bd`, where the parity of an index is
//! its number of fermionic constituents modulo 2.

use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use thiserror::Error;

use crate::combinat::{
    block_cmp, sort_into_superpartition, standardize, Block, DottedComposition,
    SetSupercomposition, SetSuperpartition, Superpermutation,
};
use crate::posets;

/// Identifier of a basis, as used on the command line.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum BasisId {
    /// Monomial basis of the noncommutative quasisymmetric superalgebra.
    MNc,
    /// Filter-summed basis `Q_I = Σ_{J ⪰ I} M_J` (merge order).
    Q,
    /// Monomial basis of the symmetric subalgebra, indexed by set
    /// superpartitions.
    MSym,
    /// Weak-order Möbius basis, indexed by superpermutations.
    MonF,
    /// Monomial basis of the commutative quasisymmetric superalgebra.
    MC,
    /// Fundamental basis `L_α = Σ_{β ⪯ α} M_β` (refinement order).
    L,
}

impl BasisId {
    /// The command-line token and output letter for this basis.
    pub fn token(self) -> &'static str {
        match self {
            BasisId::MNc => "Mnc",
            BasisId::Q => "Q",
            BasisId::MSym => "m",
            BasisId::MonF => "MonF",
            BasisId::MC => "Mc",
            BasisId::L => "L",
        }
    }

    /// Parses a command-line token.
    pub fn parse(s: &str) -> Option<Self> {
        match s {
            "Mnc" => Some(BasisId::MNc),
            "Q" => Some(BasisId::Q),
            "m" => Some(BasisId::MSym),
            "MonF" => Some(BasisId::MonF),
            "Mc" => Some(BasisId::MC),
            "L" => Some(BasisId::L),
            _ => None,
        }
    }

    /// Whether the basis is indexed by set supercompositions (as opposed to
    /// dotted compositions).
    pub fn set_indexed(self) -> bool {
        matches!(self, BasisId::MNc | BasisId::Q | BasisId::MSym | BasisId::MonF)
    }

    /// All basis identifiers.
    pub fn all() -> [BasisId; 6] {
        [
            BasisId::MNc,
            BasisId::Q,
            BasisId::MSym,
            BasisId::MonF,
            BasisId::MC,
            BasisId::L,
        ]
    }
}

impl fmt::Display for BasisId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.token())
    }
}

/// Errors from the Hopf layer.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum HopfError {
    #[error("unsupported basis change {from} -> {to}; supported: Mnc<->Q, MonF<->Q, m->Mnc, L->Mc, Mnc->Mc (abelianization), Q->L (abelianization)")]
    UnsupportedBasisChange { from: BasisId, to: BasisId },
    #[error("index {index} is not a superpermutation, as required for the {basis} basis")]
    NotSuperpermutation { index: String, basis: BasisId },
    #[error("index {0} is not a set superpartition, as required for the m basis")]
    NotSetSuperpartition(String),
    #[error("combination is not in the span of the m basis: {0}")]
    NotInMSymSpan(String),
    #[error("combination mixes parities; it has no homogeneous parity")]
    MixedParity,
}

/// Index types usable in a Hopf-algebra linear combination: they have an
/// empty (unit) index and a fermionic parity.
pub trait HopfIndex: Ord + Clone {
    fn empty_index() -> Self;
    fn parity(&self) -> u8;
}

impl HopfIndex for SetSupercomposition {
    fn empty_index() -> Self {
        SetSupercomposition::empty()
    }

    fn parity(&self) -> u8 {
        self.parity()
    }
}

impl HopfIndex for DottedComposition {
    fn empty_index() -> Self {
        DottedComposition::empty()
    }

    fn parity(&self) -> u8 {
        self.parity()
    }
}

// ---------------------------------------------------------------------------
// Linear and tensor combinations
// ---------------------------------------------------------------------------

/// A finite formal linear combination of indices with arbitrary-precision
/// integer coefficients.  Zero coefficients are never stored.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct LinComb<K: Ord> {
    terms: BTreeMap<K, BigInt>,
}

/// Linear combinations over set supercompositions.
pub type ScComb = LinComb<SetSupercomposition>;
/// Linear combinations over dotted compositions.
pub type DcComb = LinComb<DottedComposition>;

impl<K: Ord + Clone> LinComb<K> {
    pub fn zero() -> Self {
        Self {
            terms: BTreeMap::new(),
        }
    }

    /// The single term `c * k` (normalized: a zero coefficient gives zero).
    pub fn term(k: K, c: impl Into<BigInt>) -> Self {
        let mut out = Self::zero();
        out.add_term(k, c.into());
        out
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// Number of nonzero terms.
    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    /// Adds `c * k`, removing the entry if the coefficient cancels.
    pub fn add_term(&mut self, k: K, c: BigInt) {
        if c.is_zero() {
            return;
        }
        let entry = self.terms.entry(k).or_insert_with(BigInt::zero);
        *entry += c;
        if entry.is_zero() {
            let key = self
                .terms
                .iter()
                .find(|(_, v)| v.is_zero())
                .map(|(k, _)| k.clone())
                .expect("a zero entry exists");
            self.terms.remove(&key);
        }
    }

    /// The coefficient of `k` (zero when absent).
    pub fn coeff(&self, k: &K) -> BigInt {
        self.terms.get(k).cloned().unwrap_or_else(BigInt::zero)
    }

    pub fn iter(&self) -> impl Iterator<Item = (&K, &BigInt)> {
        self.terms.iter()
    }

    pub fn indices(&self) -> impl Iterator<Item = &K> {
        self.terms.keys()
    }

    pub fn add_assign(&mut self, other: &Self) {
        for (k, c) in &other.terms {
            self.add_term(k.clone(), c.clone());
        }
    }

    pub fn add_assign_scaled(&mut self, other: &Self, scale: &BigInt) {
        if scale.is_zero() {
            return;
        }
        for (k, c) in &other.terms {
            self.add_term(k.clone(), c * scale);
        }
    }

    pub fn add(&self, other: &Self) -> Self {
        let mut out = self.clone();
        out.add_assign(other);
        out
    }

    pub fn sub(&self, other: &Self) -> Self {
        let mut out = self.clone();
        out.add_assign_scaled(other, &BigInt::from(-1));
        out
    }

    pub fn scaled(&self, scale: &BigInt) -> Self {
        let mut out = Self::zero();
        out.add_assign_scaled(self, scale);
        out
    }

    /// Applies `f` to every index, summing coefficients on collisions.
    pub fn map_indices<K2: Ord + Clone>(&self, mut f: impl FnMut(&K) -> K2) -> LinComb<K2> {
        let mut out = LinComb::zero();
        for (k, c) in &self.terms {
            out.add_term(f(k), c.clone());
        }
        out
    }

    /// Applies the linear extension of an index-level expansion.
    pub fn expand_linear(&self, mut f: impl FnMut(&K) -> LinComb<K>) -> LinComb<K> {
        let mut out = LinComb::zero();
        for (k, c) in &self.terms {
            out.add_assign_scaled(&f(k), c);
        }
        out
    }
}

impl<K: HopfIndex> LinComb<K> {
    /// Homogeneous parity of the combination; fails when parities mix.
    /// The zero combination is even.
    pub fn parity(&self) -> Result<u8, HopfError> {
        let mut parities = self.terms.keys().map(|k| k.parity());
        let Some(first) = parities.next() else {
            return Ok(0);
        };
        if parities.all(|p| p == first) {
            Ok(first)
        } else {
            Err(HopfError::MixedParity)
        }
    }
}

/// A finite formal combination of two-fold tensors of indices.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct TensorComb<K: Ord> {
    terms: BTreeMap<(K, K), BigInt>,
}

impl<K: Ord + Clone> TensorComb<K> {
    pub fn zero() -> Self {
        Self {
            terms: BTreeMap::new(),
        }
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

    pub fn add_term(&mut self, left: K, right: K, c: BigInt) {
        if c.is_zero() {
            return;
        }
        let entry = self
            .terms
            .entry((left, right))
            .or_insert_with(BigInt::zero);
        *entry += c;
        if entry.is_zero() {
            let key = self
                .terms
                .iter()
                .find(|(_, v)| v.is_zero())
                .map(|(k, _)| k.clone())
                .expect("a zero entry exists");
            self.terms.remove(&key);
        }
    }

    pub fn coeff(&self, left: &K, right: &K) -> BigInt {
        self.terms
            .get(&(left.clone(), right.clone()))
            .cloned()
            .unwrap_or_else(BigInt::zero)
    }

    pub fn iter(&self) -> impl Iterator<Item = (&(K, K), &BigInt)> {
        self.terms.iter()
    }

    pub fn add_assign_scaled(&mut self, other: &Self, scale: &BigInt) {
        if scale.is_zero() {
            return;
        }
        for ((l, r), c) in &other.terms {
            self.add_term(l.clone(), r.clone(), c * scale);
        }
    }
}

// ---------------------------------------------------------------------------
// Signed shuffles
// ---------------------------------------------------------------------------

/// One block of an interleaving, tagged with its factor of origin.
#[derive(Debug, Clone)]
struct TaggedBlock {
    block: Block,
    from_left: bool,
}

/// All interleavings of the blocks of `i` with the blocks of `j` shifted by
/// `n = bidegree(i).n`, each with the fermionic crossing sign
/// `(−1)^{#(fermionic j-block before fermionic i-block)}`.
fn signed_interleavings(
    i: &SetSupercomposition,
    j: &SetSupercomposition,
) -> Vec<(Vec<TaggedBlock>, i64)> {
    let shifted = j.shift(i.bidegree().n);
    let left = i.blocks();
    let right = shifted.blocks();
    let mut out = Vec::new();
    let mut acc: Vec<TaggedBlock> = Vec::new();
    fn rec(
        left: &[Block],
        right: &[Block],
        acc: &mut Vec<TaggedBlock>,
        out: &mut Vec<(Vec<TaggedBlock>, i64)>,
    ) {
        if left.is_empty() && right.is_empty() {
            let mut crossings = 0u32;
            for p in 0..acc.len() {
                for q in (p + 1)..acc.len() {
                    if !acc[p].from_left
                        && acc[p].block.fermionic()
                        && acc[q].from_left
                        && acc[q].block.fermionic()
                    {
                        crossings += 1;
                    }
                }
            }
            let sign = if crossings.is_multiple_of(2) { 1 } else { -1 };
            out.push((acc.clone(), sign));
            return;
        }
        if let Some((first, rest)) = left.split_first() {
            acc.push(TaggedBlock {
                block: first.clone(),
                from_left: true,
            });
            rec(rest, right, acc, out);
            acc.pop();
        }
        if let Some((first, rest)) = right.split_first() {
            acc.push(TaggedBlock {
                block: first.clone(),
                from_left: false,
            });
            rec(left, rest, acc, out);
            acc.pop();
        }
    }
    rec(left, right, &mut acc, &mut out);
    out
}

/// The signed quasi-shuffles of `(i, j)`: every interleaving of the blocks of
/// `i` and of `j` shifted by `n`, followed by any set of mergers of an
/// `i`-block immediately followed by a `j`-block, the two not both fermionic.
/// Duplicate supercompositions from distinct parents are kept as separate
/// entries.
pub fn quasi_shuffles(
    i: &SetSupercomposition,
    j: &SetSupercomposition,
) -> Vec<(SetSupercomposition, i64)> {
    let mut out = Vec::new();
    for (tagged, sign) in signed_interleavings(i, j) {
        let mergeable: Vec<usize> = (0..tagged.len().saturating_sub(1))
            .filter(|&p| {
                tagged[p].from_left
                    && !tagged[p + 1].from_left
                    && !(tagged[p].block.fermionic() && tagged[p + 1].block.fermionic())
            })
            .collect();
        for mask in 0u64..(1 << mergeable.len()) {
            let chosen: Vec<usize> = mergeable
                .iter()
                .enumerate()
                .filter(|&(t, _)| mask & (1 << t) != 0)
                .map(|(_, &p)| p)
                .collect();
            let mut blocks: Vec<Block> = Vec::with_capacity(tagged.len());
            let mut p = 0;
            while p < tagged.len() {
                if chosen.contains(&p) {
                    blocks.push(tagged[p].block.union(&tagged[p + 1].block));
                    p += 2;
                } else {
                    blocks.push(tagged[p].block.clone());
                    p += 1;
                }
            }
            let k = SetSupercomposition::new(blocks).expect("shuffles produce valid indices");
            out.push((k, sign));
        }
    }
    out
}

/// The signed super-shuffles of `(i, j)`: every interleaving followed by any
/// set of disjoint mergers, each merging either a fermionic `i`-block with
/// the increasing run of `j`-blocks immediately following it, or an
/// increasing run of `i`-blocks with the fermionic `j`-block immediately
/// following it.  Duplicates from distinct parents are kept.
pub fn super_shuffles(
    i: &SetSupercomposition,
    j: &SetSupercomposition,
) -> Vec<(SetSupercomposition, i64)> {
    let mut out = Vec::new();
    for (tagged, sign) in signed_interleavings(i, j) {
        // Candidate mergers as inclusive position intervals [p, q], q > p.
        let mut candidates: Vec<(usize, usize)> = Vec::new();
        let increasing_step = |a: &Block, b: &Block| -> bool {
            !a.fermionic() && !b.fermionic() && a.max_nonzero() < b.min_nonzero()
        };
        for p in 0..tagged.len() {
            if tagged[p].from_left && tagged[p].block.fermionic() {
                // Fermionic i-block followed by an increasing run of j-blocks.
                let mut q = p + 1;
                while q < tagged.len()
                    && !tagged[q].from_left
                    && !tagged[q].block.fermionic()
                    && (q == p + 1 || increasing_step(&tagged[q - 1].block, &tagged[q].block))
                {
                    candidates.push((p, q));
                    q += 1;
                }
            }
        }
        for q in 0..tagged.len() {
            if !tagged[q].from_left && tagged[q].block.fermionic() {
                // Increasing run of i-blocks followed by a fermionic j-block.
                let mut p = q;
                while p > 0
                    && tagged[p - 1].from_left
                    && !tagged[p - 1].block.fermionic()
                    && (p == q || increasing_step(&tagged[p - 1].block, &tagged[p].block))
                {
                    p -= 1;
                    candidates.push((p, q));
                }
            }
        }
        candidates.sort_unstable();
        // Enumerate all sets of pairwise disjoint candidate intervals.
        fn pick(
            candidates: &[(usize, usize)],
            idx: usize,
            chosen: &mut Vec<(usize, usize)>,
            tagged: &[TaggedBlock],
            sign: i64,
            out: &mut Vec<(SetSupercomposition, i64)>,
        ) {
            if idx == candidates.len() {
                let mut blocks: Vec<Block> = Vec::new();
                let mut p = 0;
                while p < tagged.len() {
                    if let Some(&(_, q)) = chosen.iter().find(|&&(s, _)| s == p) {
                        let mut b = tagged[p].block.clone();
                        for tb in &tagged[p + 1..=q] {
                            b = b.union(&tb.block);
                        }
                        blocks.push(b);
                        p = q + 1;
                    } else {
                        blocks.push(tagged[p].block.clone());
                        p += 1;
                    }
                }
                let k =
                    SetSupercomposition::new(blocks).expect("shuffles produce valid indices");
                out.push((k, sign));
                return;
            }
            pick(candidates, idx + 1, chosen, tagged, sign, out);
            let (s, e) = candidates[idx];
            if chosen.iter().all(|&(cs, ce)| e < cs || ce < s) {
                chosen.push((s, e));
                pick(candidates, idx + 1, chosen, tagged, sign, out);
                chosen.pop();
            }
        }
        pick(&candidates, 0, &mut Vec::new(), &tagged, sign, &mut out);
    }
    out
}

// ---------------------------------------------------------------------------
// Products
// ---------------------------------------------------------------------------

/// Product in the `Mnc` basis: the signed quasi-shuffle sum.
pub fn product_mnc(i: &SetSupercomposition, j: &SetSupercomposition) -> ScComb {
    let mut out = ScComb::zero();
    for (k, sign) in quasi_shuffles(i, j) {
        out.add_term(k, BigInt::from(sign));
    }
    out
}

/// Product in the `Q` basis: the signed super-shuffle sum.
pub fn product_q(i: &SetSupercomposition, j: &SetSupercomposition) -> ScComb {
    let mut out = ScComb::zero();
    for (k, sign) in super_shuffles(i, j) {
        out.add_term(k, BigInt::from(sign));
    }
    out
}

/// Bilinear extension of an index-level product.
pub fn mul_bilinear<K: Ord + Clone>(
    a: &LinComb<K>,
    b: &LinComb<K>,
    product: impl Fn(&K, &K) -> LinComb<K>,
) -> LinComb<K> {
    let mut out = LinComb::zero();
    for (ka, ca) in a.iter() {
        for (kb, cb) in b.iter() {
            out.add_assign_scaled(&product(ka, kb), &(ca * cb));
        }
    }
    out
}

// ---------------------------------------------------------------------------
// Coproducts
// ---------------------------------------------------------------------------

/// Deconcatenation-with-standardization coproduct shared by the `Mnc` and
/// `Q` bases.
fn deconcatenation(i: &SetSupercomposition) -> TensorComb<SetSupercomposition> {
    let blocks = i.blocks();
    let mut out = TensorComb::zero();
    for d in 0..=blocks.len() {
        let left = standardize(&blocks[..d]).expect("prefix blocks stay disjoint");
        let right = standardize(&blocks[d..]).expect("suffix blocks stay disjoint");
        out.add_term(left, right, BigInt::one());
    }
    out
}

/// Coproduct in the `Mnc` basis: deconcatenation with standardization.
pub fn coproduct_mnc(i: &SetSupercomposition) -> TensorComb<SetSupercomposition> {
    deconcatenation(i)
}

/// Coproduct in the `Q` basis: deconcatenation with standardization.
pub fn coproduct_q(i: &SetSupercomposition) -> TensorComb<SetSupercomposition> {
    deconcatenation(i)
}

/// Coproduct in the `m` basis: signed sum over all block subsets, with the
/// sign counting fermionic pairs split across the tensor in inverted order.
pub fn coproduct_msym(i: &SetSuperpartition) -> TensorComb<SetSupercomposition> {
    let blocks = i.as_sc().blocks();
    let k = blocks.len();
    let mut out = TensorComb::zero();
    for mask in 0u64..(1 << k) {
        let in_a: Vec<bool> = (0..k).map(|p| mask & (1 << p) != 0).collect();
        let left: Vec<Block> = (0..k).filter(|&p| in_a[p]).map(|p| blocks[p].clone()).collect();
        let right: Vec<Block> = (0..k).filter(|&p| !in_a[p]).map(|p| blocks[p].clone()).collect();
        let mut inversions = 0u32;
        for p in 0..k {
            for q in (p + 1)..k {
                if !in_a[p] && in_a[q] && blocks[p].fermionic() && blocks[q].fermionic() {
                    inversions += 1;
                }
            }
        }
        let sign = if inversions.is_multiple_of(2) { 1 } else { -1 };
        out.add_term(
            standardize(&left).expect("subsets stay disjoint"),
            standardize(&right).expect("subsets stay disjoint"),
            BigInt::from(sign),
        );
    }
    out
}

/// Coproduct in the `MonF` basis: deconcatenation at global descents only.
pub fn coproduct_monf(i: &Superpermutation) -> TensorComb<SetSupercomposition> {
    let blocks = i.as_sc().blocks();
    let mut out = TensorComb::zero();
    for d in i.global_descents() {
        let left = standardize(&blocks[..d]).expect("prefix blocks stay disjoint");
        let right = standardize(&blocks[d..]).expect("suffix blocks stay disjoint");
        out.add_term(left, right, BigInt::one());
    }
    out
}

// ---------------------------------------------------------------------------
// Basis changes
// ---------------------------------------------------------------------------

/// `Q_I` expanded in the `Mnc` basis: the sum over the merge-order filter.
pub fn q_to_mnc_index(i: &SetSupercomposition) -> ScComb {
    let mut out = ScComb::zero();
    for j in posets::sc_upset_elements(i) {
        out.add_term(j, BigInt::one());
    }
    out
}

/// `M_I` expanded in the `Q` basis: the signed sum over the merge-order
/// filter, with sign `(−1)^{ℓ(I) − ℓ(J)}`.
pub fn mnc_to_q_index(i: &SetSupercomposition) -> ScComb {
    let li = i.len();
    let mut out = ScComb::zero();
    for j in posets::sc_upset_elements(i) {
        let sign = if (li - j.len()).is_multiple_of(2) { 1 } else { -1 };
        out.add_term(j, BigInt::from(sign));
    }
    out
}

/// `m_I` expanded in the `Mnc` basis: the signed sum over all block
/// reorderings, with the sign counting inverted fermionic pairs.
pub fn msym_to_mnc_index(i: &SetSuperpartition) -> ScComb {
    let blocks = i.as_sc().blocks();
    let k = blocks.len();
    let fermionic: Vec<bool> = blocks.iter().map(|b| b.fermionic()).collect();
    let mut out = ScComb::zero();
    let mut perm: Vec<usize> = (0..k).collect();
    permute_all(&mut perm, 0, &mut |perm| {
        // position_of[b] = t with perm[t] == b
        let mut position_of = vec![0usize; k];
        for (t, &b) in perm.iter().enumerate() {
            position_of[b] = t;
        }
        let mut inversions = 0u32;
        for p in 0..k {
            for q in (p + 1)..k {
                if fermionic[p] && fermionic[q] && position_of[p] > position_of[q] {
                    inversions += 1;
                }
            }
        }
        let sign = if inversions.is_multiple_of(2) { 1 } else { -1 };
        let permuted: Vec<Block> = perm.iter().map(|&b| blocks[b].clone()).collect();
        let idx = SetSupercomposition::new(permuted).expect("reordering preserves validity");
        out.add_term(idx, BigInt::from(sign));
    });
    out
}

/// Calls `visit` on every permutation of `items[at..]` (in place).
fn permute_all(items: &mut Vec<usize>, at: usize, visit: &mut impl FnMut(&Vec<usize>)) {
    if at == items.len() {
        visit(items);
        return;
    }
    for t in at..items.len() {
        items.swap(at, t);
        permute_all(items, at + 1, visit);
        items.swap(at, t);
    }
}

/// Re-expresses an `Mnc`-basis combination in the `m` basis.  Fails when the
/// combination is not symmetric (not in the span of the `m` basis).
pub fn mnc_to_msym(x: &ScComb) -> Result<ScComb, HopfError> {
    let mut rest = x.clone();
    let mut out = ScComb::zero();
    loop {
        let k0 = match rest.indices().next() {
            Some(k) => k.clone(),
            None => break,
        };
        let Some(sp) = sort_into_superpartition(&k0) else {
            return Err(HopfError::NotInMSymSpan(format!(
                "index {k0} has repeated blocks"
            )));
        };
        let c = rest.coeff(sp.as_sc());
        if c.is_zero() {
            return Err(HopfError::NotInMSymSpan(format!(
                "residual term {k0} cannot be matched by m[{sp}]"
            )));
        }
        out.add_term(sp.as_sc().clone(), c.clone());
        rest.add_assign_scaled(&msym_to_mnc_index(&sp), &(-c));
    }
    Ok(out)
}

/// Product in the `m` basis: the signed sum over partial matchings.  Each
/// term fuses the blocks of some matching between the two index sequences
/// (a fused pair may not have both members fermionic), leaves the rest
/// untouched, and re-sorts the resulting blocks into a set superpartition.
/// The sign is the parity of the fermionic-block inversions created by the
/// re-sort, starting from the order "left blocks (fused in place), then
/// unmatched right blocks".  Distinct matchings yield distinct indices, so
/// every coefficient is `±1`.
pub fn product_msym(i: &SetSuperpartition, j: &SetSuperpartition) -> ScComb {
    let bi = i.as_sc().blocks();
    let shifted = j.as_sc().shift(i.as_sc().bidegree().n);
    let bj = shifted.blocks();
    let (k, l) = (bi.len(), bj.len());
    let mut out = ScComb::zero();
    for mask in 0u32..(1 << k) {
        let chosen: Vec<usize> = (0..k).filter(|&p| mask & (1 << p) != 0).collect();
        if chosen.len() > l {
            continue;
        }
        let mut partners: Vec<usize> = (0..l).collect();
        permute_prefixes(&mut partners, 0, chosen.len(), &mut |jsel| {
            if chosen
                .iter()
                .zip(jsel)
                .any(|(&p, &q)| bi[p].fermionic() && bj[q].fermionic())
            {
                return;
            }
            // Each slot keeps the provenance of its constituents: the left
            // factor's block, the right factor's block, or a fused pair.
            let mut natural: Vec<Block> = Vec::with_capacity(k + l - chosen.len());
            let mut prov: Vec<(Option<usize>, Option<usize>)> =
                Vec::with_capacity(k + l - chosen.len());
            for (p, bip) in bi.iter().enumerate() {
                match chosen.iter().position(|&c| c == p) {
                    Some(t) => {
                        natural.push(bip.union(&bj[jsel[t]]));
                        prov.push((Some(p), Some(jsel[t])));
                    }
                    None => {
                        natural.push(bip.clone());
                        prov.push((Some(p), None));
                    }
                }
            }
            for (q, bjq) in bj.iter().enumerate() {
                if !jsel.contains(&q) {
                    natural.push(bjq.clone());
                    prov.push((None, Some(q)));
                }
            }
            // Two equal blocks can only be two bare fermionic blocks; such a
            // term is antisymmetric under their swap and therefore zero.
            if natural
                .iter()
                .filter(|b| b.fermionic() && b.nonzero_count() == 0)
                .count()
                >= 2
            {
                return;
            }
            let mut order: Vec<usize> = (0..natural.len()).collect();
            order.sort_by(|&a, &b| block_cmp(&natural[a], &natural[b]));
            // The sign tracks the fermionic constituent blocks, not the
            // fused blocks: read them off in output order (within a fused
            // slot the left constituent precedes the right one) and count
            // inversions against the reference order "left factor's blocks
            // in canonical order, then right factor's blocks in canonical
            // order".  This is the crossing sign of the underlying signed
            // shuffle together with the reordering signs of both factors.
            let mut ranks: Vec<usize> = Vec::new();
            for &t in &order {
                let (ip, jq) = prov[t];
                if let Some(p) = ip {
                    if bi[p].fermionic() {
                        ranks.push(p);
                    }
                }
                if let Some(q) = jq {
                    if bj[q].fermionic() {
                        ranks.push(k + q);
                    }
                }
            }
            let mut inversions = 0u32;
            for a in 0..ranks.len() {
                for b in (a + 1)..ranks.len() {
                    if ranks[a] > ranks[b] {
                        inversions += 1;
                    }
                }
            }
            let blocks: Vec<Block> = order.iter().map(|&t| natural[t].clone()).collect();
            let idx = SetSupercomposition::new(blocks)
                .expect("fusing disjoint-range blocks keeps a valid supercomposition");
            let sign = if inversions.is_multiple_of(2) { 1 } else { -1 };
            out.add_term(idx, BigInt::from(sign));
        });
    }
    out
}

/// Calls `visit` on every ordered selection of `take` entries from
/// `items[at..]`, presented as the prefix `items[..take]`.
fn permute_prefixes(
    items: &mut Vec<usize>,
    at: usize,
    take: usize,
    visit: &mut impl FnMut(&[usize]),
) {
    if at == take {
        visit(&items[..take]);
        return;
    }
    for t in at..items.len() {
        items.swap(at, t);
        permute_prefixes(items, at + 1, take, visit);
        items.swap(at, t);
    }
}

/// `𝓜_I` expanded in the `Q` basis: the weak-order Möbius-weighted sum over
/// the principal filter.
pub fn monf_to_q_index(i: &Superpermutation) -> ScComb {
    let mut out = ScComb::zero();
    for (j, mu) in posets::mobius_weak_upset(i) {
        out.add_term(j.into_sc(), BigInt::from(mu));
    }
    out
}

/// `Q_I` expanded in the `MonF` basis: the unsigned sum over the weak-order
/// principal filter.
pub fn q_to_monf_index(i: &Superpermutation) -> ScComb {
    let mut out = ScComb::zero();
    for j in posets::weak_upset(i) {
        out.add_term(j.into_sc(), BigInt::one());
    }
    out
}

/// Interprets every index of `x` as a superpermutation, failing otherwise.
fn as_superpermutations(
    x: &ScComb,
    basis: BasisId,
) -> Result<Vec<(Superpermutation, BigInt)>, HopfError> {
    x.iter()
        .map(|(k, c)| {
            Superpermutation::try_from(k.clone())
                .map(|sp| (sp, c.clone()))
                .map_err(|_| HopfError::NotSuperpermutation {
                    index: k.to_string(),
                    basis,
                })
        })
        .collect()
}

/// Re-expresses a `Q`-basis combination in the `MonF` basis.  Every index
/// must be a superpermutation.
pub fn q_to_monf(x: &ScComb) -> Result<ScComb, HopfError> {
    let mut out = ScComb::zero();
    for (sp, c) in as_superpermutations(x, BasisId::MonF)? {
        out.add_assign_scaled(&q_to_monf_index(&sp), &c);
    }
    Ok(out)
}

/// Expands a `MonF`-basis combination into the `Q` basis.  Every index must
/// be a superpermutation.
pub fn monf_to_q(x: &ScComb) -> Result<ScComb, HopfError> {
    let mut out = ScComb::zero();
    for (sp, c) in as_superpermutations(x, BasisId::MonF)? {
        out.add_assign_scaled(&monf_to_q_index(&sp), &c);
    }
    Ok(out)
}

/// Product in the `MonF` basis, computed through the `Q` basis.  The result
/// indices are superpermutations.
pub fn product_monf(i: &Superpermutation, j: &Superpermutation) -> Result<ScComb, HopfError> {
    let qi = monf_to_q_index(i);
    let qj = monf_to_q_index(j);
    let prod = mul_bilinear(&qi, &qj, product_q);
    q_to_monf(&prod)
}

/// `L_α` expanded in the `Mc` basis: the sum over the refinement-order ideal.
pub fn fundamental_to_mc_index(alpha: &DottedComposition) -> DcComb {
    let mut out = DcComb::zero();
    for beta in posets::dotted_downset_elements(alpha) {
        out.add_term(beta, BigInt::one());
    }
    out
}

// ---------------------------------------------------------------------------
// Abelianization and the commutative products
// ---------------------------------------------------------------------------

/// Abelianization of an `Mnc`-basis combination: `M_I ↦ M_{α(I)}`.
pub fn abelianize_mnc(x: &ScComb) -> DcComb {
    x.map_indices(|k| k.alpha())
}

/// Abelianization of a `Q`-basis combination: `Q_I ↦ L_{γ(I)}`; every index
/// must be a superpermutation.
pub fn abelianize_q(x: &ScComb) -> Result<DcComb, HopfError> {
    let mut out = DcComb::zero();
    for (sp, c) in as_superpermutations(x, BasisId::Q)? {
        out.add_term(sp.gamma(), c);
    }
    Ok(out)
}

/// Product in the `Mc` basis: transported through the one-block-per-part
/// lift and the abelianization.
pub fn product_mc(a: &DottedComposition, b: &DottedComposition) -> DcComb {
    let prod = product_mnc(&a.block_lift(), &b.block_lift());
    abelianize_mnc(&prod)
}

/// Product in the `L` basis: transported through the canonical
/// superpermutation lift; the signed super-shuffles are pushed through `γ`.
pub fn product_fund(a: &DottedComposition, b: &DottedComposition) -> DcComb {
    let i = a.lift();
    let j = b.lift();
    let mut out = DcComb::zero();
    for (k, sign) in super_shuffles(i.as_sc(), j.as_sc()) {
        let sp = Superpermutation::try_from(k)
            .expect("super-shuffles of superpermutations are superpermutations");
        out.add_term(sp.gamma(), BigInt::from(sign));
    }
    out
}

// ---------------------------------------------------------------------------
// Unit, counit, super tensor multiplication, antipode
// ---------------------------------------------------------------------------

/// The unit: `c` times the empty index.
pub fn unit_comb<K: HopfIndex>(c: impl Into<BigInt>) -> LinComb<K> {
    LinComb::term(K::empty_index(), c)
}

/// The counit: the coefficient of the empty index.
pub fn counit<K: HopfIndex>(x: &LinComb<K>) -> BigInt {
    x.coeff(&K::empty_index())
}

/// Multiplies two tensor combinations with the super sign rule
/// `(a ⊗ b)(c ⊗ d) = (−1)^{|b||c|} ac ⊗ bd`.
pub fn super_tensor_mul<K: HopfIndex>(
    a: &TensorComb<K>,
    b: &TensorComb<K>,
    product: impl Fn(&K, &K) -> LinComb<K>,
) -> TensorComb<K> {
    let mut out = TensorComb::zero();
    for ((a1, a2), ca) in a.iter() {
        for ((b1, b2), cb) in b.iter() {
            let sign = if a2.parity() == 1 && b1.parity() == 1 {
                BigInt::from(-1)
            } else {
                BigInt::one()
            };
            let left = product(a1, b1);
            let right = product(a2, b2);
            let scale = ca * cb * sign;
            for (l, cl) in left.iter() {
                for (r, cr) in right.iter() {
                    out.add_term(l.clone(), r.clone(), &scale * cl * cr);
                }
            }
        }
    }
    out
}

/// The antipode by Takeuchi's formula
/// `S = Σ_{k ≥ 0} (−1)^k m^{(k−1)} ∘ π^{⊗k} ∘ Δ^{(k−1)}` with `π = id − ηε`,
/// evaluated with the given coproduct and product.  Terminates because the
/// reduced coproduct strictly decreases the number of blocks.
pub fn takeuchi_antipode<K: HopfIndex>(
    x: &LinComb<K>,
    coproduct: impl Fn(&K) -> TensorComb<K>,
    product: impl Fn(&K, &K) -> LinComb<K>,
) -> LinComb<K> {
    let empty = K::empty_index();
    // k = 0 term: ηε.
    let mut out: LinComb<K> = unit_comb(counit(x));
    // Current tier: π^{⊗k} Δ^{(k−1)}(x) as a combination of k-tuples.
    let mut tier: BTreeMap<Vec<K>, BigInt> = BTreeMap::new();
    for (k, c) in x.iter() {
        if *k != empty {
            tier.insert(vec![k.clone()], c.clone());
        }
    }
    let mut sign = BigInt::from(-1);
    while !tier.is_empty() {
        for (tuple, c) in &tier {
            let mut prod = LinComb::term(tuple[0].clone(), 1);
            for k in &tuple[1..] {
                prod = prod.expand_linear(|idx| product(idx, k));
            }
            out.add_assign_scaled(&prod, &(&sign * c));
        }
        let mut next: BTreeMap<Vec<K>, BigInt> = BTreeMap::new();
        for (tuple, c) in &tier {
            let last = tuple.last().expect("tiers hold nonempty tuples");
            for ((a, b), d) in coproduct(last).iter() {
                if *a == empty || *b == empty {
                    continue;
                }
                let mut t = tuple[..tuple.len() - 1].to_vec();
                t.push(a.clone());
                t.push(b.clone());
                let entry = next.entry(t).or_insert_with(BigInt::zero);
                *entry += c * d;
            }
        }
        next.retain(|_, v| !v.is_zero());
        tier = next;
        sign = -sign;
    }
    out
}

/// Antipode in the `Mnc` basis (Takeuchi's formula).
pub fn antipode_mnc(x: &ScComb) -> ScComb {
    takeuchi_antipode(x, coproduct_mnc, product_mnc)
}

/// Antipode in the `Q` basis (Takeuchi's formula).
pub fn antipode_q(x: &ScComb) -> ScComb {
    takeuchi_antipode(x, coproduct_q, product_q)
}

// ---------------------------------------------------------------------------
// Runtime-dispatched combinations (command-line support)
// ---------------------------------------------------------------------------

/// A linear combination over either index family.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum AnyComb {
    Set(ScComb),
    Dotted(DcComb),
}

/// Changes basis, supporting exactly the pairs
/// `Mnc ↔ Q`, `MonF ↔ Q`, `m → Mnc`, `L → Mc`, and the abelianizations
/// `Mnc → Mc` and `Q → L`.  The identity change is always supported.
pub fn change_basis(x: &AnyComb, from: BasisId, to: BasisId) -> Result<AnyComb, HopfError> {
    if from == to {
        return Ok(x.clone());
    }
    let err = || HopfError::UnsupportedBasisChange { from, to };
    match (from, to, x) {
        (BasisId::MNc, BasisId::Q, AnyComb::Set(c)) => {
            Ok(AnyComb::Set(c.expand_linear(mnc_to_q_index)))
        }
        (BasisId::Q, BasisId::MNc, AnyComb::Set(c)) => {
            Ok(AnyComb::Set(c.expand_linear(q_to_mnc_index)))
        }
        (BasisId::MonF, BasisId::Q, AnyComb::Set(c)) => Ok(AnyComb::Set(monf_to_q(c)?)),
        (BasisId::Q, BasisId::MonF, AnyComb::Set(c)) => Ok(AnyComb::Set(q_to_monf(c)?)),
        (BasisId::MSym, BasisId::MNc, AnyComb::Set(c)) => {
            let mut out = ScComb::zero();
            for (k, coeff) in c.iter() {
                let sp = SetSuperpartition::try_from(k.clone())
                    .map_err(|_| HopfError::NotSetSuperpartition(k.to_string()))?;
                out.add_assign_scaled(&msym_to_mnc_index(&sp), coeff);
            }
            Ok(AnyComb::Set(out))
        }
        (BasisId::L, BasisId::MC, AnyComb::Dotted(c)) => {
            Ok(AnyComb::Dotted(c.expand_linear(fundamental_to_mc_index)))
        }
        (BasisId::MNc, BasisId::MC, AnyComb::Set(c)) => Ok(AnyComb::Dotted(abelianize_mnc(c))),
        (BasisId::Q, BasisId::L, AnyComb::Set(c)) => Ok(AnyComb::Dotted(abelianize_q(c)?)),
        _ => Err(err()),
    }
}

// ---------------------------------------------------------------------------
// Rendering (canonical text output)
// ---------------------------------------------------------------------------

/// Formats a coefficient with an explicit sign.
pub fn format_coeff(c: &BigInt) -> String {
    if c.is_negative() {
        c.to_string()
    } else {
        format!("+{c}")
    }
}

/// Renders a combination as one term per line,
/// `<signed coefficient> * <basis>[<index>]`, sorted lexicographically by
/// index serialization.  The zero combination renders as `0`.
pub fn render_comb<K: Ord + Clone + fmt::Display>(basis: BasisId, x: &LinComb<K>) -> String {
    if x.is_zero() {
        return "0\n".to_string();
    }
    let mut lines: Vec<(String, String)> = x
        .iter()
        .map(|(k, c)| (k.to_string(), format_coeff(c)))
        .collect();
    lines.sort();
    lines
        .into_iter()
        .map(|(idx, c)| format!("{c} * {basis}[{idx}]\n"))
        .collect()
}

/// Renders a tensor combination as one term per line,
/// `<signed coefficient> * <basis>[<left>] # <basis>[<right>]`, sorted
/// lexicographically by the pair of index serializations.
pub fn render_tensor<K: Ord + Clone + fmt::Display>(basis: BasisId, x: &TensorComb<K>) -> String {
    if x.is_zero() {
        return "0\n".to_string();
    }
    let mut lines: Vec<(String, String, String)> = x
        .iter()
        .map(|((l, r), c)| (l.to_string(), r.to_string(), format_coeff(c)))
        .collect();
    lines.sort();
    lines
        .into_iter()
        .map(|(l, r, c)| format!("{c} * {basis}[{l}] # {basis}[{r}]\n"))
        .collect()
}
