//! Index combinatorics: dotted compositions, set supercompositions, their
//! constrained forms, the structural maps between them, and the shared text
//! grammar.
//!
//! Conventions used throughout:
//!
//! * Values are `u32`; the nonzero elements of a set supercomposition of
//!   bidegree `(n, m)` are exactly `1..=n`, and `0` marks a fermionic block.
//! * A dotted part is printed `.a` and contributes `a + 1` to the total size
//!   (its value plus one for the dot); a plain part `a >= 1` contributes `a`.
//! * Positions inside words and block sequences are 1-based in the public
//!   vocabulary (matching the usual combinatorial conventions); Rust-side
//!   indices are 0-based and documented where they appear.

use std::cmp::Ordering;
use std::collections::BTreeSet;
use std::fmt;
use std::ops::Deref;
use std::str::FromStr;

use thiserror::Error;

/// Errors produced by constructors, parsers and structural maps.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CombinatError {
    /// The text grammar was violated; `pos` is the 1-based character position.
    #[error("parse error at position {pos}: {msg}")]
    Parse { pos: usize, msg: String },
    /// A composition part was a plain 0 (only dotted parts may have value 0).
    #[error("axiom violation: plain composition parts must be positive (0 must be dotted)")]
    PlainZeroPart,
    /// A pseudo-composition ended in a plain 0.
    #[error("axiom violation: the last pseudo-composition part must not be a plain 0")]
    TrailingPlainZero,
    /// A block had no elements.
    #[error("axiom violation: blocks must be nonempty")]
    EmptyBlock,
    /// The same nonzero element appeared in two blocks.
    #[error("axiom violation: nonzero element {0} repeated (pairwise block intersections must lie in {{0}})")]
    RepeatedElement(u32),
    /// The nonzero elements were not exactly `1..=n`.
    #[error("axiom violation: nonzero elements must be exactly 1..={expected}; {missing} is missing")]
    NotInitialSegment { expected: u32, missing: u32 },
    /// A non-fermionic block of a would-be superpermutation was not a singleton.
    #[error("not a superpermutation: non-fermionic block {0} is not a singleton")]
    NotSuperpermutation(String),
    /// Blocks of a would-be set superpartition were not strictly increasing.
    #[error("not a set superpartition: blocks {0} and {1} are out of order in the min-comparison order")]
    NotSetSuperpartition(String, String),
    /// Fiber bounds require all plain parts to equal 1.
    #[error("fiber bounds are only defined when every plain part equals 1; found plain part {0}")]
    PlainPartTooLarge(u32),
}

// ---------------------------------------------------------------------------
// Dotted compositions
// ---------------------------------------------------------------------------

/// One part of a dotted composition: plain `a >= 1` or dotted (fermionic)
/// `.a` with `a >= 0`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum DottedPart {
    Plain(u32),
    Dotted(u32),
}

impl DottedPart {
    /// The underlying integer value of the part.
    pub fn value(self) -> u32 {
        match self {
            DottedPart::Plain(a) | DottedPart::Dotted(a) => a,
        }
    }

    /// Whether the part carries the fermionic dot.
    pub fn is_dotted(self) -> bool {
        matches!(self, DottedPart::Dotted(_))
    }

    /// Contribution to the total size: the value, plus one for the dot.
    pub fn size(self) -> u32 {
        self.value() + u32::from(self.is_dotted())
    }
}

impl fmt::Display for DottedPart {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            DottedPart::Plain(a) => write!(f, "{a}"),
            DottedPart::Dotted(a) => write!(f, ".{a}"),
        }
    }
}

/// A dotted composition: a finite sequence of [`DottedPart`]s in which every
/// plain part is positive.  The empty composition is allowed and prints `e`.
#[derive(Debug, Clone, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct DottedComposition {
    parts: Vec<DottedPart>,
}

impl DottedComposition {
    /// Builds a dotted composition, rejecting plain zero parts.
    pub fn new(parts: Vec<DottedPart>) -> Result<Self, CombinatError> {
        if parts.contains(&DottedPart::Plain(0)) {
            return Err(CombinatError::PlainZeroPart);
        }
        Ok(Self { parts })
    }

    /// The empty dotted composition.
    pub fn empty() -> Self {
        Self::default()
    }

    pub fn parts(&self) -> &[DottedPart] {
        &self.parts
    }

    /// Number of parts.
    pub fn len(&self) -> usize {
        self.parts.len()
    }

    pub fn is_empty(&self) -> bool {
        self.parts.is_empty()
    }

    /// Bidegree `(n, m)`: the sum of the underlying values and the number of
    /// dotted parts.
    pub fn bidegree(&self) -> Bidegree {
        Bidegree {
            n: self.parts.iter().map(|p| p.value()).sum(),
            m: self.parts.iter().filter(|p| p.is_dotted()).count() as u32,
        }
    }

    /// Total size `n + m`.
    pub fn total_size(&self) -> u32 {
        self.bidegree().total()
    }

    /// Parity: the number of dotted parts modulo 2.
    pub fn parity(&self) -> u8 {
        self.bidegree().parity()
    }

    /// The canonical superpermutation section of [`Superpermutation::gamma`]:
    /// `lift(alpha).gamma() == alpha`.
    ///
    /// Fresh values are consumed in increasing order across the whole
    /// composition.  Each dotted part `.a` becomes the fermionic block of `0`
    /// together with the next `a` fresh values.  Each maximal run of plain
    /// parts becomes one non-fermionic segment of singleton blocks carrying
    /// the standard word with that descent composition: run `j` of the
    /// segment receives the `j`-th-from-top interval of the segment's fresh
    /// values, ascending within the run, so every run boundary is a descent.
    pub fn lift(&self) -> Superpermutation {
        let mut blocks: Vec<Block> = Vec::new();
        let mut next = 1u32;
        let mut i = 0;
        while i < self.parts.len() {
            match self.parts[i] {
                DottedPart::Dotted(a) => {
                    let mut elems: Vec<u32> = vec![0];
                    elems.extend(next..next + a);
                    next += a;
                    blocks.push(Block::new(elems).expect("fermionic block is nonempty"));
                    i += 1;
                }
                DottedPart::Plain(_) => {
                    let mut run = Vec::new();
                    while i < self.parts.len() && !self.parts[i].is_dotted() {
                        run.push(self.parts[i].value());
                        i += 1;
                    }
                    let s: u32 = run.iter().sum();
                    let mut top = next + s;
                    next += s;
                    for &a in &run {
                        let lo = top - a;
                        for v in lo..top {
                            blocks.push(Block::new([v]).expect("singleton block"));
                        }
                        top = lo;
                    }
                }
            }
        }
        let sc = SetSupercomposition::new(blocks).expect("lift produces a valid supercomposition");
        Superpermutation::try_from(sc).expect("lift produces a superpermutation")
    }

    /// The one-block-per-part section of [`SetSupercomposition::alpha`]: each
    /// part becomes a single block of fresh values (plus `0` when dotted),
    /// with fresh values consumed in increasing order.
    pub fn block_lift(&self) -> SetSupercomposition {
        let mut blocks = Vec::new();
        let mut next = 1u32;
        for part in &self.parts {
            let mut elems: Vec<u32> = Vec::new();
            if part.is_dotted() {
                elems.push(0);
            }
            elems.extend(next..next + part.value());
            next += part.value();
            blocks.push(Block::new(elems).expect("parts are nonempty or dotted"));
        }
        SetSupercomposition::new(blocks).expect("block lift produces a valid supercomposition")
    }
}

impl fmt::Display for DottedComposition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.parts.is_empty() {
            return write!(f, "e");
        }
        write!(f, "(")?;
        for (i, p) in self.parts.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{p}")?;
        }
        write!(f, ")")
    }
}

impl FromStr for DottedComposition {
    type Err = CombinatError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let mut cur = Cursor::new(s);
        cur.skip_ws();
        if cur.eat(b'e') {
            cur.finish()?;
            return Ok(Self::empty());
        }
        cur.expect(b'(')?;
        cur.skip_ws();
        let mut parts = Vec::new();
        if !cur.eat(b')') {
            loop {
                cur.skip_ws();
                let dotted = cur.eat(b'.');
                let value = cur.parse_u32()?;
                parts.push(if dotted {
                    DottedPart::Dotted(value)
                } else {
                    DottedPart::Plain(value)
                });
                cur.skip_ws();
                if cur.eat(b',') {
                    continue;
                }
                cur.expect(b')')?;
                break;
            }
        }
        cur.finish()?;
        Self::new(parts)
    }
}

/// A dotted pseudo-composition: like a dotted composition but plain `0` parts
/// (unused slots) are allowed anywhere except in last position.  These arise
/// as the slot profiles of truncated-superalgebra monomials.
#[derive(Debug, Clone, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct DottedPseudoComposition {
    /// `(value, dotted)` pairs.
    parts: Vec<(u32, bool)>,
}

impl DottedPseudoComposition {
    /// Builds a pseudo-composition, rejecting a trailing plain 0.
    pub fn new(parts: Vec<(u32, bool)>) -> Result<Self, CombinatError> {
        if parts.last() == Some(&(0, false)) {
            return Err(CombinatError::TrailingPlainZero);
        }
        Ok(Self { parts })
    }

    pub fn parts(&self) -> &[(u32, bool)] {
        &self.parts
    }

    pub fn len(&self) -> usize {
        self.parts.len()
    }

    pub fn is_empty(&self) -> bool {
        self.parts.is_empty()
    }

    /// The hat map: dropping all plain-0 parts yields a dotted composition.
    pub fn hat(&self) -> DottedComposition {
        let parts = self
            .parts
            .iter()
            .filter(|&&(v, d)| d || v > 0)
            .map(|&(v, d)| if d { DottedPart::Dotted(v) } else { DottedPart::Plain(v) })
            .collect();
        DottedComposition::new(parts).expect("hat removes all plain zeros")
    }
}

// ---------------------------------------------------------------------------
// Blocks and set supercompositions
// ---------------------------------------------------------------------------

/// A nonempty block of non-negative integers.  A block is *fermionic* exactly
/// when it contains `0`.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Block(BTreeSet<u32>);

impl Block {
    /// Builds a block, rejecting the empty set.
    pub fn new(elems: impl IntoIterator<Item = u32>) -> Result<Self, CombinatError> {
        let set: BTreeSet<u32> = elems.into_iter().collect();
        if set.is_empty() {
            return Err(CombinatError::EmptyBlock);
        }
        Ok(Self(set))
    }

    /// Whether the block is fermionic (contains `0`).
    pub fn fermionic(&self) -> bool {
        self.0.contains(&0)
    }

    /// All elements in ascending order (`0` first when present).
    pub fn elements(&self) -> impl Iterator<Item = u32> + '_ {
        self.0.iter().copied()
    }

    /// The nonzero elements in ascending order.
    pub fn nonzero(&self) -> impl Iterator<Item = u32> + '_ {
        self.0.iter().copied().filter(|&v| v != 0)
    }

    /// Number of nonzero elements.
    pub fn nonzero_count(&self) -> u32 {
        (self.0.len() - usize::from(self.fermionic())) as u32
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn contains(&self, v: u32) -> bool {
        self.0.contains(&v)
    }

    /// Smallest nonzero element, if any.
    pub fn min_nonzero(&self) -> Option<u32> {
        self.nonzero().next()
    }

    /// Largest nonzero element, if any.
    pub fn max_nonzero(&self) -> Option<u32> {
        self.nonzero().last()
    }

    /// The union of two blocks.
    pub fn union(&self, other: &Block) -> Block {
        Block(self.0.union(&other.0).copied().collect())
    }

    /// Adds `n` to every nonzero element (`0` is unchanged).
    pub fn shift(&self, n: u32) -> Block {
        Block(
            self.0
                .iter()
                .map(|&v| if v == 0 { 0 } else { v + n })
                .collect(),
        )
    }
}

impl fmt::Display for Block {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{")?;
        for (i, v) in self.0.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{v}")?;
        }
        write!(f, "}}")
    }
}

/// The min-comparison order on blocks: `a` precedes `b` when
/// `min(a \ b) < min(b \ a)`, with `min(∅) = 0`.  On the pairwise
/// nonzero-disjoint blocks of one set supercomposition this is a total order
/// placing fermionic blocks first; equal blocks compare equal.
pub fn block_cmp(a: &Block, b: &Block) -> Ordering {
    if a == b {
        return Ordering::Equal;
    }
    let ma = a.0.difference(&b.0).next().copied().unwrap_or(0);
    let mb = b.0.difference(&a.0).next().copied().unwrap_or(0);
    ma.cmp(&mb)
}

/// A set supercomposition: an ordered sequence of blocks whose nonzero
/// elements partition `1..=n` and whose pairwise intersections are contained
/// in `{0}`.  The empty sequence is allowed and prints `e`.
///
/// The `1..=n` axiom is enforced by [`SetSupercomposition::new`] and by the
/// parser; [`SetSupercomposition::shift`] intentionally produces the shifted
/// object used while assembling products, whose nonzero elements are no
/// longer an initial segment.
#[derive(Debug, Clone, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct SetSupercomposition {
    blocks: Vec<Block>,
}

impl SetSupercomposition {
    /// Builds a set supercomposition, checking the disjointness and
    /// initial-segment axioms.
    pub fn new(blocks: Vec<Block>) -> Result<Self, CombinatError> {
        let mut seen = BTreeSet::new();
        for b in &blocks {
            for v in b.nonzero() {
                if !seen.insert(v) {
                    return Err(CombinatError::RepeatedElement(v));
                }
            }
        }
        let n = seen.len() as u32;
        for (i, &v) in seen.iter().enumerate() {
            let expected = (i + 1) as u32;
            if v != expected {
                return Err(CombinatError::NotInitialSegment {
                    expected: n,
                    missing: expected,
                });
            }
        }
        Ok(Self { blocks })
    }

    /// Builds from blocks without the initial-segment check (still assumes
    /// pairwise disjoint nonzero elements).  Used for shifted intermediates.
    pub(crate) fn from_blocks_unchecked(blocks: Vec<Block>) -> Self {
        Self { blocks }
    }

    /// The empty supercomposition (the unit index).
    pub fn empty() -> Self {
        Self::default()
    }

    pub fn blocks(&self) -> &[Block] {
        &self.blocks
    }

    /// Number of blocks `ℓ(I)`.
    pub fn len(&self) -> usize {
        self.blocks.len()
    }

    pub fn is_empty(&self) -> bool {
        self.blocks.is_empty()
    }

    /// Bidegree `(n, m)`: number of nonzero elements and of fermionic blocks.
    pub fn bidegree(&self) -> Bidegree {
        Bidegree {
            n: self.blocks.iter().map(|b| b.nonzero_count()).sum(),
            m: self.blocks.iter().filter(|b| b.fermionic()).count() as u32,
        }
    }

    /// Total size `n + m`.
    pub fn total_size(&self) -> u32 {
        self.bidegree().total()
    }

    /// Parity: the number of fermionic blocks modulo 2.
    pub fn parity(&self) -> u8 {
        self.bidegree().parity()
    }

    /// The `n`-shift: adds `n` to every nonzero element.
    pub fn shift(&self, n: u32) -> SetSupercomposition {
        SetSupercomposition::from_blocks_unchecked(
            self.blocks.iter().map(|b| b.shift(n)).collect(),
        )
    }

    /// The underlying dotted composition: part `i` is the number of nonzero
    /// elements of block `i`, dotted exactly when the block is fermionic.
    pub fn alpha(&self) -> DottedComposition {
        let parts = self
            .blocks
            .iter()
            .map(|b| {
                if b.fermionic() {
                    DottedPart::Dotted(b.nonzero_count())
                } else {
                    DottedPart::Plain(b.nonzero_count())
                }
            })
            .collect();
        DottedComposition::new(parts).expect("non-fermionic blocks are nonempty")
    }

    /// The reading word: nonzero elements block by block, ascending within
    /// each block.
    pub fn word(&self) -> Vec<u32> {
        self.blocks.iter().flat_map(|b| b.nonzero()).collect()
    }

    /// Whether every non-fermionic block is a singleton.
    pub fn is_superpermutation(&self) -> bool {
        self.blocks
            .iter()
            .all(|b| b.fermionic() || b.len() == 1)
    }

    /// Whether the blocks are strictly increasing in the min-comparison order.
    pub fn is_set_superpartition(&self) -> bool {
        self.blocks
            .windows(2)
            .all(|w| block_cmp(&w[0], &w[1]) == Ordering::Less)
    }

    /// Maximal runs of consecutive non-fermionic blocks, as half-open ranges
    /// of 0-based block indices.
    pub fn segments(&self) -> Vec<std::ops::Range<usize>> {
        let mut out = Vec::new();
        let mut i = 0;
        while i < self.blocks.len() {
            if self.blocks[i].fermionic() {
                i += 1;
                continue;
            }
            let start = i;
            while i < self.blocks.len() && !self.blocks[i].fermionic() {
                i += 1;
            }
            out.push(start..i);
        }
        out
    }
}

impl fmt::Display for SetSupercomposition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.blocks.is_empty() {
            return write!(f, "e");
        }
        for (i, b) in self.blocks.iter().enumerate() {
            if i > 0 {
                write!(f, "|")?;
            }
            write!(f, "{b}")?;
        }
        Ok(())
    }
}

impl FromStr for SetSupercomposition {
    type Err = CombinatError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let mut cur = Cursor::new(s);
        cur.skip_ws();
        if cur.eat(b'e') {
            cur.finish()?;
            return Ok(Self::empty());
        }
        let mut blocks = Vec::new();
        let mut seen = BTreeSet::new();
        loop {
            cur.skip_ws();
            cur.expect(b'{')?;
            let mut elems = Vec::new();
            loop {
                cur.skip_ws();
                let at = cur.pos + 1;
                let v = cur.parse_u32()?;
                if v != 0 && !seen.insert(v) {
                    return Err(CombinatError::Parse {
                        pos: at,
                        msg: format!("nonzero element {v} repeated"),
                    });
                }
                elems.push(v);
                cur.skip_ws();
                if cur.eat(b',') {
                    continue;
                }
                cur.expect(b'}')?;
                break;
            }
            blocks.push(Block::new(elems)?);
            cur.skip_ws();
            if cur.eat(b'|') {
                continue;
            }
            break;
        }
        cur.finish()?;
        Self::new(blocks)
    }
}

/// Order-preserving relabelling of the nonzero elements of a block sequence
/// onto `1..=n`.  The blocks must have pairwise disjoint nonzero elements but
/// need not cover an initial segment; the result always does.
pub fn standardize(blocks: &[Block]) -> Result<SetSupercomposition, CombinatError> {
    let mut values = BTreeSet::new();
    for b in blocks {
        for v in b.nonzero() {
            if !values.insert(v) {
                return Err(CombinatError::RepeatedElement(v));
            }
        }
    }
    let rank: std::collections::BTreeMap<u32, u32> = values
        .iter()
        .enumerate()
        .map(|(i, &v)| (v, (i + 1) as u32))
        .collect();
    let new_blocks = blocks
        .iter()
        .map(|b| {
            Block::new(
                b.elements()
                    .map(|v| if v == 0 { 0 } else { rank[&v] })
                    .collect::<Vec<_>>(),
            )
            .expect("blocks stay nonempty")
        })
        .collect();
    SetSupercomposition::new(new_blocks)
}

// ---------------------------------------------------------------------------
// Superpermutations and set superpartitions
// ---------------------------------------------------------------------------

/// A set supercomposition in which every non-fermionic block is a singleton.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Superpermutation(SetSupercomposition);

impl TryFrom<SetSupercomposition> for Superpermutation {
    type Error = CombinatError;

    fn try_from(sc: SetSupercomposition) -> Result<Self, Self::Error> {
        if let Some(bad) = sc.blocks().iter().find(|b| !b.fermionic() && b.len() != 1) {
            return Err(CombinatError::NotSuperpermutation(bad.to_string()));
        }
        Ok(Self(sc))
    }
}

impl Deref for Superpermutation {
    type Target = SetSupercomposition;

    fn deref(&self) -> &SetSupercomposition {
        &self.0
    }
}

impl Superpermutation {
    pub fn as_sc(&self) -> &SetSupercomposition {
        &self.0
    }

    pub fn into_sc(self) -> SetSupercomposition {
        self.0
    }

    /// The empty superpermutation.
    pub fn empty() -> Self {
        Self(SetSupercomposition::empty())
    }

    /// The dotted composition recording, left to right, each fermionic block
    /// as a dotted part (its nonzero count) and each maximal non-fermionic
    /// segment as the descent composition of its word.
    pub fn gamma(&self) -> DottedComposition {
        let blocks = self.0.blocks();
        let mut parts = Vec::new();
        let mut i = 0;
        while i < blocks.len() {
            if blocks[i].fermionic() {
                parts.push(DottedPart::Dotted(blocks[i].nonzero_count()));
                i += 1;
            } else {
                let mut word = Vec::new();
                while i < blocks.len() && !blocks[i].fermionic() {
                    word.push(blocks[i].min_nonzero().expect("singleton block"));
                    i += 1;
                }
                parts.extend(descent_composition(&word).into_iter().map(DottedPart::Plain));
            }
        }
        DottedComposition::new(parts).expect("descent parts are positive")
    }

    /// Global descents: the 1-based positions `d` between blocks such that
    /// every letter from the first `d` blocks exceeds every letter from the
    /// remaining blocks, always including `0` and the number of blocks.
    pub fn global_descents(&self) -> BTreeSet<usize> {
        let blocks = self.0.blocks();
        let k = blocks.len();
        let mut out = BTreeSet::new();
        out.insert(0);
        out.insert(k);
        for d in 1..k {
            let min_left = blocks[..d]
                .iter()
                .flat_map(|b| b.nonzero())
                .min()
                .unwrap_or(u32::MAX);
            let max_right = blocks[d..]
                .iter()
                .flat_map(|b| b.nonzero())
                .max()
                .unwrap_or(0);
            if min_left > max_right {
                out.insert(d);
            }
        }
        out
    }
}

impl fmt::Display for Superpermutation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.0.fmt(f)
    }
}

impl FromStr for Superpermutation {
    type Err = CombinatError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Superpermutation::try_from(s.parse::<SetSupercomposition>()?)
    }
}

/// The lengths of the maximal weakly ascending-by-position runs of a word:
/// the composition whose part boundaries are the descents `w[i] > w[i+1]`.
pub fn descent_composition(word: &[u32]) -> Vec<u32> {
    let mut parts = Vec::new();
    if word.is_empty() {
        return parts;
    }
    let mut run = 1u32;
    for i in 1..word.len() {
        if word[i - 1] > word[i] {
            parts.push(run);
            run = 1;
        } else {
            run += 1;
        }
    }
    parts.push(run);
    parts
}

/// A set supercomposition whose blocks are strictly increasing in the
/// min-comparison order (fermionic blocks first, each family sorted by its
/// smallest distinguishing element).
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct SetSuperpartition(SetSupercomposition);

impl TryFrom<SetSupercomposition> for SetSuperpartition {
    type Error = CombinatError;

    fn try_from(sc: SetSupercomposition) -> Result<Self, Self::Error> {
        for w in sc.blocks().windows(2) {
            if block_cmp(&w[0], &w[1]) != Ordering::Less {
                return Err(CombinatError::NotSetSuperpartition(
                    w[0].to_string(),
                    w[1].to_string(),
                ));
            }
        }
        Ok(Self(sc))
    }
}

impl Deref for SetSuperpartition {
    type Target = SetSupercomposition;

    fn deref(&self) -> &SetSupercomposition {
        &self.0
    }
}

impl SetSuperpartition {
    pub fn as_sc(&self) -> &SetSupercomposition {
        &self.0
    }

    pub fn into_sc(self) -> SetSupercomposition {
        self.0
    }

    pub fn empty() -> Self {
        Self(SetSupercomposition::empty())
    }
}

impl fmt::Display for SetSuperpartition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.0.fmt(f)
    }
}

impl FromStr for SetSuperpartition {
    type Err = CombinatError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        SetSuperpartition::try_from(s.parse::<SetSupercomposition>()?)
    }
}

/// Sorts the blocks of a set supercomposition into the min-comparison order.
/// Returns `None` when two blocks are equal (then no superpartition ordering
/// exists).
pub fn sort_into_superpartition(sc: &SetSupercomposition) -> Option<SetSuperpartition> {
    let mut blocks = sc.blocks().to_vec();
    blocks.sort_by(block_cmp);
    if blocks.windows(2).any(|w| w[0] == w[1]) {
        return None;
    }
    let sorted = SetSupercomposition::new(blocks).expect("reordering preserves validity");
    Some(SetSuperpartition::try_from(sorted).expect("sorted blocks form a superpartition"))
}

// ---------------------------------------------------------------------------
// Bidegrees
// ---------------------------------------------------------------------------

/// The bidegree `(n, m)` of an index: `n` counts nonzero elements (or the sum
/// of underlying values) and `m` counts fermionic blocks (or dotted parts).
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Bidegree {
    pub n: u32,
    pub m: u32,
}

impl Bidegree {
    /// Total size `n + m`.
    pub fn total(self) -> u32 {
        self.n + self.m
    }

    /// Parity `m mod 2`.
    pub fn parity(self) -> u8 {
        (self.m % 2) as u8
    }
}

impl fmt::Display for Bidegree {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({},{})", self.n, self.m)
    }
}

// ---------------------------------------------------------------------------
// Exhaustive enumeration (small sizes)
// ---------------------------------------------------------------------------

/// All set supercompositions of bidegree `(n, m)`, in a deterministic order.
pub fn all_set_supercompositions(n: u32, m: u32) -> Vec<SetSupercomposition> {
    fn rec(
        remaining: &[u32],
        m_left: u32,
        acc: &mut Vec<Block>,
        out: &mut Vec<SetSupercomposition>,
    ) {
        if remaining.is_empty() && m_left == 0 {
            out.push(SetSupercomposition::new(acc.clone()).expect("construction is valid"));
            return;
        }
        // Next block: a nonempty subset of the remaining values, optionally
        // fermionic, or a bare fermionic block {0}.
        let r = remaining.len();
        for mask in 1u32..(1 << r) {
            let subset: Vec<u32> = (0..r)
                .filter(|&i| mask & (1 << i) != 0)
                .map(|i| remaining[i])
                .collect();
            let rest: Vec<u32> = (0..r)
                .filter(|&i| mask & (1 << i) == 0)
                .map(|i| remaining[i])
                .collect();
            acc.push(Block::new(subset.clone()).expect("nonempty"));
            rec(&rest, m_left, acc, out);
            acc.pop();
            if m_left > 0 {
                let mut elems = subset;
                elems.push(0);
                acc.push(Block::new(elems).expect("nonempty"));
                rec(&rest, m_left - 1, acc, out);
                acc.pop();
            }
        }
        if m_left > 0 {
            acc.push(Block::new([0]).expect("nonempty"));
            rec(remaining, m_left - 1, acc, out);
            acc.pop();
        }
    }
    let values: Vec<u32> = (1..=n).collect();
    let mut out = Vec::new();
    rec(&values, m, &mut Vec::new(), &mut out);
    out
}

/// All superpermutations of bidegree `(n, m)`, in a deterministic order.
pub fn all_superpermutations(n: u32, m: u32) -> Vec<Superpermutation> {
    fn rec(
        remaining: &[u32],
        m_left: u32,
        acc: &mut Vec<Block>,
        out: &mut Vec<Superpermutation>,
    ) {
        if remaining.is_empty() && m_left == 0 {
            let sc = SetSupercomposition::new(acc.clone()).expect("construction is valid");
            out.push(Superpermutation::try_from(sc).expect("blocks are singletons or fermionic"));
            return;
        }
        let r = remaining.len();
        for i in 0..r {
            let mut rest = remaining.to_vec();
            let v = rest.remove(i);
            acc.push(Block::new([v]).expect("nonempty"));
            rec(&rest, m_left, acc, out);
            acc.pop();
        }
        if m_left > 0 {
            for mask in 0u32..(1 << r) {
                let mut elems: Vec<u32> = (0..r)
                    .filter(|&i| mask & (1 << i) != 0)
                    .map(|i| remaining[i])
                    .collect();
                let rest: Vec<u32> = (0..r)
                    .filter(|&i| mask & (1 << i) == 0)
                    .map(|i| remaining[i])
                    .collect();
                elems.push(0);
                acc.push(Block::new(elems).expect("nonempty"));
                rec(&rest, m_left - 1, acc, out);
                acc.pop();
            }
        }
    }
    let values: Vec<u32> = (1..=n).collect();
    let mut out = Vec::new();
    rec(&values, m, &mut Vec::new(), &mut out);
    out
}

/// All set superpartitions of bidegree `(n, m)`.
pub fn all_set_superpartitions(n: u32, m: u32) -> Vec<SetSuperpartition> {
    all_set_supercompositions(n, m)
        .into_iter()
        .filter_map(|sc| SetSuperpartition::try_from(sc).ok())
        .collect()
}

/// All dotted compositions of exact total size `total`.
pub fn all_dotted_compositions(total: u32) -> Vec<DottedComposition> {
    fn rec(left: u32, acc: &mut Vec<DottedPart>, out: &mut Vec<DottedComposition>) {
        if left == 0 {
            out.push(DottedComposition::new(acc.clone()).expect("no plain zeros"));
            return;
        }
        for a in 1..=left {
            acc.push(DottedPart::Plain(a));
            rec(left - a, acc, out);
            acc.pop();
        }
        for a in 0..left {
            acc.push(DottedPart::Dotted(a));
            rec(left - a - 1, acc, out);
            acc.pop();
        }
    }
    let mut out = Vec::new();
    rec(total, &mut Vec::new(), &mut out);
    out
}

/// All set supercompositions of total size at most `total`.
pub fn all_set_supercompositions_up_to(total: u32) -> Vec<SetSupercomposition> {
    let mut out = Vec::new();
    for t in 0..=total {
        for m in 0..=t {
            out.extend(all_set_supercompositions(t - m, m));
        }
    }
    out
}

/// All superpermutations of total size at most `total`.
pub fn all_superpermutations_up_to(total: u32) -> Vec<Superpermutation> {
    let mut out = Vec::new();
    for t in 0..=total {
        for m in 0..=t {
            out.extend(all_superpermutations(t - m, m));
        }
    }
    out
}

/// All set superpartitions of total size at most `total`.
pub fn all_set_superpartitions_up_to(total: u32) -> Vec<SetSuperpartition> {
    let mut out = Vec::new();
    for t in 0..=total {
        for m in 0..=t {
            out.extend(all_set_superpartitions(t - m, m));
        }
    }
    out
}

/// All dotted compositions of total size at most `total`.
pub fn all_dotted_compositions_up_to(total: u32) -> Vec<DottedComposition> {
    (0..=total).flat_map(all_dotted_compositions).collect()
}

// ---------------------------------------------------------------------------
// Parsing support
// ---------------------------------------------------------------------------

struct Cursor<'a> {
    bytes: &'a [u8],
    pos: usize,
}

impl<'a> Cursor<'a> {
    fn new(s: &'a str) -> Self {
        Self {
            bytes: s.as_bytes(),
            pos: 0,
        }
    }

    fn skip_ws(&mut self) {
        while self.bytes.get(self.pos).is_some_and(|b| b.is_ascii_whitespace()) {
            self.pos += 1;
        }
    }

    fn peek(&self) -> Option<u8> {
        self.bytes.get(self.pos).copied()
    }

    fn eat(&mut self, b: u8) -> bool {
        if self.peek() == Some(b) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn err(&self, msg: impl Into<String>) -> CombinatError {
        CombinatError::Parse {
            pos: self.pos + 1,
            msg: msg.into(),
        }
    }

    fn expect(&mut self, b: u8) -> Result<(), CombinatError> {
        if self.eat(b) {
            Ok(())
        } else {
            Err(self.err(format!(
                "expected '{}'{}",
                b as char,
                match self.peek() {
                    Some(c) => format!(", found '{}'", c as char),
                    None => ", found end of input".to_string(),
                }
            )))
        }
    }

    fn parse_u32(&mut self) -> Result<u32, CombinatError> {
        let start = self.pos;
        while self.peek().is_some_and(|b| b.is_ascii_digit()) {
            self.pos += 1;
        }
        if self.pos == start {
            return Err(self.err("expected a digit"));
        }
        std::str::from_utf8(&self.bytes[start..self.pos])
            .expect("digits are valid UTF-8")
            .parse::<u32>()
            .map_err(|_| CombinatError::Parse {
                pos: start + 1,
                msg: "integer out of range".to_string(),
            })
    }

    fn finish(&mut self) -> Result<(), CombinatError> {
        self.skip_ws();
        match self.peek() {
            None => Ok(()),
            Some(c) => Err(self.err(format!("unexpected trailing character '{}'", c as char))),
        }
    }
}
