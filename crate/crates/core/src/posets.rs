//! Three partial orders on the index families, with interval enumeration,
//! cover relations, Möbius functions, and DOT emission.
//!
//! * **Refinement order** on dotted compositions: `β ⪯ α` when `α` is
//!   obtained from `β` by merging adjacent plain parts (dotted parts are
//!   rigid).  Going *down* from `α` splits plain parts, so the principal
//!   order ideal of `α` is a Boolean lattice of rank `Σ (plain part − 1)`.
//! * **Merge order** on set supercompositions: `I ⪯ J` when `J` is obtained
//!   from `I` by merging consecutive *increasing* runs of non-fermionic
//!   blocks (fermionic blocks are rigid).
//! * **Super left weak order** on superpermutations: `I ⪯ J` when both have
//!   the same underlying dotted composition and the position-pair inversion
//!   set of the word of `I` is contained in that of `J`.
//!
//! All enumerations are exhaustive at desk scale (words up to length 11 for
//! the weak order) and deterministic: interval elements are sorted by their
//! canonical serialization.

use std::collections::BTreeMap;
use std::fmt;

use itertools::Itertools;

use crate::combinat::{
    Block, CombinatError, DottedComposition, DottedPart, SetSupercomposition, Superpermutation,
};

/// Longest word length supported by the weak-order routines (the inversion
/// set is packed into a `u128` bitmask of position pairs).
pub const MAX_WEAK_WORD: usize = 11;

/// A finite interval (or ideal/filter) of a poset: its elements together
/// with the cover relations `(lower, upper)` as indices into `elements`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PosetInterval<T> {
    elements: Vec<T>,
    covers: Vec<(usize, usize)>,
}

impl<T> PosetInterval<T> {
    pub fn elements(&self) -> &[T] {
        &self.elements
    }

    /// Cover pairs `(lower, upper)` as indices into [`Self::elements`].
    pub fn covers(&self) -> &[(usize, usize)] {
        &self.covers
    }

    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }
}

impl<T: fmt::Display> PosetInterval<T> {
    /// Builds an interval from its full element list, a partial-order test,
    /// and a rank function (every cover must raise the rank by exactly 1,
    /// which holds for the graded posets used here).  Elements are sorted by
    /// their serialization so the result is deterministic.
    pub fn build(
        mut elements: Vec<T>,
        leq: impl Fn(&T, &T) -> bool,
        rank: impl Fn(&T) -> i64,
    ) -> Self {
        elements.sort_by_key(|e| e.to_string());
        elements.dedup_by_key(|e| e.to_string());
        let mut covers = Vec::new();
        for (i, x) in elements.iter().enumerate() {
            for (j, y) in elements.iter().enumerate() {
                if i != j && rank(y) == rank(x) + 1 && leq(x, y) {
                    covers.push((i, j));
                }
            }
        }
        covers.sort_unstable();
        Self { elements, covers }
    }

    /// Renders the Hasse diagram in DOT format: nodes are labelled by the
    /// canonical serialization, edges run lower → upper, and both are listed
    /// in deterministic order.
    pub fn to_dot(&self) -> String {
        let mut s = String::from("digraph poset {\n  rankdir=BT;\n");
        for e in &self.elements {
            s.push_str(&format!("  \"{e}\";\n"));
        }
        for &(l, u) in &self.covers {
            s.push_str(&format!(
                "  \"{}\" -> \"{}\";\n",
                self.elements[l], self.elements[u]
            ));
        }
        s.push_str("}\n");
        s
    }
}

// ---------------------------------------------------------------------------
// Refinement order on dotted compositions
// ---------------------------------------------------------------------------

/// Whether `beta ⪯ alpha` in the refinement order: `alpha` is obtained from
/// `beta` by merging adjacent plain parts.  Dotted parts must match exactly
/// and in the same relative positions.
pub fn dotted_leq(beta: &DottedComposition, alpha: &DottedComposition) -> bool {
    let bp = beta.parts();
    let mut i = 0;
    for part in alpha.parts() {
        match *part {
            DottedPart::Dotted(a) => {
                if bp.get(i) != Some(&DottedPart::Dotted(a)) {
                    return false;
                }
                i += 1;
            }
            DottedPart::Plain(a) => {
                let mut s = 0u32;
                while s < a {
                    match bp.get(i) {
                        Some(&DottedPart::Plain(v)) => {
                            s += v;
                            i += 1;
                        }
                        _ => return false,
                    }
                }
                if s != a {
                    return false;
                }
            }
        }
    }
    i == bp.len()
}

/// All compositions of `n` into positive parts (`n = 0` gives the empty
/// composition).
fn compositions(n: u32) -> Vec<Vec<u32>> {
    fn rec(left: u32, acc: &mut Vec<u32>, out: &mut Vec<Vec<u32>>) {
        if left == 0 {
            out.push(acc.clone());
            return;
        }
        for a in 1..=left {
            acc.push(a);
            rec(left - a, acc, out);
            acc.pop();
        }
    }
    let mut out = Vec::new();
    rec(n, &mut Vec::new(), &mut out);
    out
}

/// The elements of the principal ideal `{β : β ⪯ alpha}`: every plain part
/// is split independently into a composition.
pub fn dotted_downset_elements(alpha: &DottedComposition) -> Vec<DottedComposition> {
    let options: Vec<Vec<Vec<DottedPart>>> = alpha
        .parts()
        .iter()
        .map(|p| match *p {
            DottedPart::Dotted(a) => vec![vec![DottedPart::Dotted(a)]],
            DottedPart::Plain(a) => compositions(a)
                .into_iter()
                .map(|c| c.into_iter().map(DottedPart::Plain).collect())
                .collect(),
        })
        .collect();
    let mut out = vec![Vec::new()];
    for opts in options {
        let mut next = Vec::with_capacity(out.len() * opts.len());
        for prefix in &out {
            for choice in &opts {
                let mut v = prefix.clone();
                v.extend_from_slice(choice);
                next.push(v);
            }
        }
        out = next;
    }
    out.into_iter()
        .map(|parts| DottedComposition::new(parts).expect("splitting keeps parts positive"))
        .collect()
}

/// The principal ideal of `alpha` in the refinement order, with covers.
pub fn dotted_downset(alpha: &DottedComposition) -> PosetInterval<DottedComposition> {
    let elements = dotted_downset_elements(alpha);
    PosetInterval::build(elements, dotted_leq, |c| -(c.len() as i64))
}

// ---------------------------------------------------------------------------
// Merge order on set supercompositions
// ---------------------------------------------------------------------------

/// Whether `i ⪯ j` in the merge order: `j` is obtained from `i` by merging
/// consecutive increasing runs of non-fermionic blocks.
pub fn sc_leq(i: &SetSupercomposition, j: &SetSupercomposition) -> bool {
    let ib = i.blocks();
    let mut p = 0usize;
    for b in j.blocks() {
        let start = p;
        let mut count = 0usize;
        loop {
            if p >= ib.len() {
                return false;
            }
            if !ib[p].elements().all(|v| b.contains(v)) {
                return false;
            }
            count += ib[p].len();
            p += 1;
            if count == b.len() {
                break;
            }
            if count > b.len() {
                return false;
            }
        }
        if p - start > 1 {
            for w in ib[start..p].windows(2) {
                if w[0].fermionic() || w[1].fermionic() {
                    return false;
                }
                let (Some(hi), Some(lo)) = (w[0].max_nonzero(), w[1].min_nonzero()) else {
                    return false;
                };
                if hi >= lo {
                    return false;
                }
            }
        }
    }
    p == ib.len()
}

/// The 0-based positions `p` such that blocks `p` and `p + 1` are both
/// non-fermionic with `max(block p) < min(block p+1)` (the mergeable
/// adjacencies).
fn merge_ascents(i: &SetSupercomposition) -> Vec<usize> {
    let blocks = i.blocks();
    (0..blocks.len().saturating_sub(1))
        .filter(|&p| {
            !blocks[p].fermionic()
                && !blocks[p + 1].fermionic()
                && blocks[p].max_nonzero() < blocks[p + 1].min_nonzero()
        })
        .collect()
}

/// The elements of the principal filter `{J : i ⪯ J}`: one element per
/// subset of the mergeable adjacencies.
pub fn sc_upset_elements(i: &SetSupercomposition) -> Vec<SetSupercomposition> {
    let blocks = i.blocks();
    let ascents = merge_ascents(i);
    let mut out = Vec::with_capacity(1 << ascents.len());
    for mask in 0u64..(1 << ascents.len()) {
        let chosen: Vec<usize> = ascents
            .iter()
            .enumerate()
            .filter(|&(t, _)| mask & (1 << t) != 0)
            .map(|(_, &p)| p)
            .collect();
        let mut merged: Vec<Block> = Vec::new();
        for (p, b) in blocks.iter().enumerate() {
            if p > 0 && chosen.contains(&(p - 1)) {
                let last = merged.last_mut().expect("previous block exists");
                *last = last.union(b);
            } else {
                merged.push(b.clone());
            }
        }
        out.push(
            SetSupercomposition::new(merged).expect("merging preserves validity"),
        );
    }
    out
}

/// The principal filter of `i` in the merge order, with covers.
pub fn sc_upset(i: &SetSupercomposition) -> PosetInterval<SetSupercomposition> {
    let elements = sc_upset_elements(i);
    PosetInterval::build(elements, sc_leq, |j| -(j.len() as i64))
}

// ---------------------------------------------------------------------------
// Super left weak order on superpermutations
// ---------------------------------------------------------------------------

/// The inversion set of a word as a `u128` bitmask over position pairs
/// `(i, j)` with `i < j` and `w[i] > w[j]`; bit `i * len + j`.
fn inv_mask(word: &[u32]) -> u128 {
    let n = word.len();
    assert!(
        n <= MAX_WEAK_WORD,
        "weak-order routines support words of length at most {MAX_WEAK_WORD}"
    );
    let mut mask = 0u128;
    for i in 0..n {
        for j in (i + 1)..n {
            if word[i] > word[j] {
                mask |= 1u128 << (i * n + j);
            }
        }
    }
    mask
}

/// Whether `i ⪯ j` in the super left weak order: equal underlying dotted
/// compositions and inversion-set containment of the words.
pub fn weak_leq(i: &Superpermutation, j: &Superpermutation) -> bool {
    if i.alpha() != j.alpha() {
        return false;
    }
    let a = inv_mask(&i.word());
    let b = inv_mask(&j.word());
    a & !b == 0
}

/// The whole fiber `alpha⁻¹({sigma})`: all superpermutations with underlying
/// dotted composition `sigma`.  Every plain part of `sigma` must equal 1.
pub fn fiber(sigma: &DottedComposition) -> Result<Vec<Superpermutation>, CombinatError> {
    for p in sigma.parts() {
        if !p.is_dotted() && p.value() != 1 {
            return Err(CombinatError::PlainPartTooLarge(p.value()));
        }
    }
    let counts: Vec<usize> = sigma.parts().iter().map(|p| p.value() as usize).collect();
    let n: usize = counts.iter().sum();
    let mut out = Vec::new();
    for word in (1..=n as u32).permutations(n) {
        let mut ok = true;
        let mut pos = 0usize;
        let mut blocks = Vec::with_capacity(counts.len());
        for (part, &c) in sigma.parts().iter().zip(&counts) {
            let chunk = &word[pos..pos + c];
            if chunk.windows(2).any(|w| w[0] > w[1]) {
                ok = false;
                break;
            }
            pos += c;
            let mut elems: Vec<u32> = chunk.to_vec();
            if part.is_dotted() {
                elems.push(0);
            }
            blocks.push(Block::new(elems).expect("parts contribute a 0 or values"));
        }
        if !ok {
            continue;
        }
        let sc = SetSupercomposition::new(blocks).expect("words are permutations");
        out.push(Superpermutation::try_from(sc).expect("fiber members are superpermutations"));
    }
    Ok(out)
}

/// The extreme representatives of the fiber `alpha⁻¹({sigma})`: the minimum
/// assigns fresh values to blocks in increasing order left to right, the
/// maximum in decreasing order.  Every plain part of `sigma` must equal 1.
pub fn fiber_bounds(
    sigma: &DottedComposition,
) -> Result<(Superpermutation, Superpermutation), CombinatError> {
    for p in sigma.parts() {
        if !p.is_dotted() && p.value() != 1 {
            return Err(CombinatError::PlainPartTooLarge(p.value()));
        }
    }
    let counts: Vec<u32> = sigma.parts().iter().map(|p| p.value()).collect();
    let n: u32 = counts.iter().sum();
    let build = |values: Vec<Vec<u32>>| -> Superpermutation {
        let blocks = sigma
            .parts()
            .iter()
            .zip(values)
            .map(|(part, mut vals)| {
                if part.is_dotted() {
                    vals.push(0);
                }
                Block::new(vals).expect("nonempty by construction")
            })
            .collect();
        let sc = SetSupercomposition::new(blocks).expect("bounds are valid");
        Superpermutation::try_from(sc).expect("bounds are superpermutations")
    };
    let mut next = 1u32;
    let min_vals: Vec<Vec<u32>> = counts
        .iter()
        .map(|&c| {
            let v: Vec<u32> = (next..next + c).collect();
            next += c;
            v
        })
        .collect();
    let mut top = n;
    let max_vals: Vec<Vec<u32>> = counts
        .iter()
        .map(|&c| {
            let v: Vec<u32> = (top + 1 - c..=top).collect();
            top -= c;
            v
        })
        .collect();
    Ok((build(min_vals), build(max_vals)))
}

/// The fiber of `sigma` as a weak-order interval with covers.
pub fn fiber_interval(
    sigma: &DottedComposition,
) -> Result<PosetInterval<Superpermutation>, CombinatError> {
    let elements = fiber(sigma)?;
    Ok(PosetInterval::build(elements, weak_leq, |s| {
        inv_mask(&s.word()).count_ones() as i64
    }))
}

/// All `J` with `i ⪯ J` in the weak order, sorted by serialization.
pub fn weak_upset(i: &Superpermutation) -> Vec<Superpermutation> {
    let mut out: Vec<Superpermutation> = fiber(&i.alpha())
        .expect("a superpermutation's underlying composition has plain parts 1")
        .into_iter()
        .filter(|j| weak_leq(i, j))
        .collect();
    out.sort_by_key(|s| s.to_string());
    out
}

/// The weak-order interval `[i, j]`, sorted by serialization; empty unless
/// `i ⪯ j`.
pub fn weak_interval(i: &Superpermutation, j: &Superpermutation) -> Vec<Superpermutation> {
    if !weak_leq(i, j) {
        return Vec::new();
    }
    let mut out: Vec<Superpermutation> = fiber(&i.alpha())
        .expect("a superpermutation's underlying composition has plain parts 1")
        .into_iter()
        .filter(|z| weak_leq(i, z) && weak_leq(z, j))
        .collect();
    out.sort_by_key(|s| s.to_string());
    out
}

/// The weak-order Möbius values `μ_W(i, J)` for every `J` in the principal
/// filter of `i`, computed by the defining recursion over the filter.
pub fn mobius_weak_upset(i: &Superpermutation) -> Vec<(Superpermutation, i64)> {
    let upset = weak_upset(i);
    let masks: Vec<u128> = upset.iter().map(|s| inv_mask(&s.word())).collect();
    let mut order: Vec<usize> = (0..upset.len()).collect();
    order.sort_by_key(|&t| masks[t].count_ones());
    let bottom = inv_mask(&i.word());
    let mut mu: BTreeMap<usize, i64> = BTreeMap::new();
    for &t in &order {
        if masks[t] == bottom {
            mu.insert(t, 1);
            continue;
        }
        let mut acc = 0i64;
        for &s in &order {
            if s != t && masks[s] & !masks[t] == 0 {
                acc += mu[&s];
            }
        }
        mu.insert(t, -acc);
    }
    upset
        .into_iter()
        .enumerate()
        .map(|(t, j)| (j, mu[&t]))
        .collect()
}

/// The weak-order Möbius function `μ_W(i, j)`; zero unless `i ⪯ j`.
pub fn mobius_weak(i: &Superpermutation, j: &Superpermutation) -> i64 {
    if !weak_leq(i, j) {
        return 0;
    }
    mobius_weak_upset(i)
        .into_iter()
        .find(|(k, _)| k == j)
        .map(|(_, v)| v)
        .expect("j lies in the upset of i")
}

/// Möbius values `μ(bottom, x)` over an explicitly enumerated interval
/// closed under taking sub-intervals, by the defining recursion.  Intended
/// for cross-checking the three posets at small sizes.
pub fn mobius_from_bottom<T: Eq>(
    elements: &[T],
    bottom: &T,
    leq: impl Fn(&T, &T) -> bool,
) -> Vec<i64> {
    let idx_bottom = elements
        .iter()
        .position(|e| e == bottom)
        .expect("bottom must be among the elements");
    let mut mu = vec![0i64; elements.len()];
    // Process in an order compatible with the partial order.
    let mut done = vec![false; elements.len()];
    for _ in 0..elements.len() {
        for t in 0..elements.len() {
            if done[t] {
                continue;
            }
            let ready = (0..elements.len()).all(|s| {
                s == t || done[s] || !(leq(&elements[s], &elements[t]) && leq(bottom, &elements[s]))
            });
            if !ready {
                continue;
            }
            if !leq(bottom, &elements[t]) {
                done[t] = true;
                continue;
            }
            if t == idx_bottom {
                mu[t] = 1;
            } else {
                let mut acc = 0i64;
                for s in 0..elements.len() {
                    if s != t && leq(bottom, &elements[s]) && leq(&elements[s], &elements[t]) {
                        acc += mu[s];
                    }
                }
                mu[t] = -acc;
            }
            done[t] = true;
        }
    }
    mu
}
