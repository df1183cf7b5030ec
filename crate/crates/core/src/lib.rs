//! Exact-arithmetic engine for a family of combinatorial Hopf superalgebras.
//!
//! The engine works with two kinds of combinatorial indices: *dotted
//! compositions* (integer compositions whose parts may carry a fermionic dot)
//! and *set supercompositions* (ordered sequences of blocks whose nonzero
//! elements partition an initial segment of the positive integers, with `0`
//! marking a fermionic block).  On top of these it implements:
//!
//! * [`combinat`] — the index types, their validity axioms, the structural
//!   maps between them, and the shared text grammar.
//! * [`posets`] — three partial orders (refinement of dotted compositions,
//!   the merge order on set supercompositions, and the super left weak order
//!   on superpermutations) with interval enumeration and Möbius functions.
//! * [`hopf`] — signed products, coproducts, basis changes, the antipode, and
//!   the abelianization map, all over arbitrary-precision integers.
//! * [`oracle`] — an independent brute-force verifier that expands basis
//!   elements into truncated free-superalgebra polynomials and checks the
//!   structural formulas against plain polynomial arithmetic.
//! * [`suites`] — named verification suites combining the above, used by the
//!   command-line `verify` subcommand and the acceptance tests.
//!
//! All arithmetic is exact; no floating point is used anywhere.

pub mod combinat;
pub mod hopf;
pub mod oracle;
pub mod posets;
pub mod suites;
