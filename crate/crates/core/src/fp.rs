//! The p-colorable subgroups `F_p` of `F`.
//!
//! An element lies in `F_p` when, in a tree diagram for it, every pair of
//! matching leaves has the same value `rho` modulo `p`. Equivalently the leaf
//! lengths agree modulo `q = ord_2(p)`, and `F_p` is isomorphic to `F(2^q)`
//! via [`crate::group::phi_q`].

use serde::Serialize;

use crate::dyadic::{mul_mod, DyadicRational};
use crate::error::{Error, Result};
use crate::group::TreeDiagram;
use crate::trees::{NaryTree, Word};

/// An odd modulus `p >= 3` together with the multiplicative order of 2 mod `p`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct Modulus {
    p: u64,
    q: u32,
}

impl Modulus {
    pub fn new(p: u64) -> Result<Self> {
        Ok(Modulus { p, q: ord2(p)? })
    }

    pub fn p(&self) -> u64 {
        self.p
    }

    pub fn q(&self) -> u32 {
        self.q
    }
}

/// The least `q >= 1` with `2^q = 1 (mod p)`.
pub fn ord2(p: u64) -> Result<u32> {
    if p < 3 || p % 2 == 0 {
        return Err(Error::InvalidModulus(p));
    }
    let mut x = 2 % p;
    let mut q = 1;
    while x != 1 {
        x = mul_mod(x, 2, p);
        q += 1;
    }
    Ok(q)
}

fn require_binary(d: &TreeDiagram) -> Result<()> {
    if d.arity() == 2 {
        Ok(())
    } else {
        Err(Error::ArityMismatch {
            left: d.arity(),
            right: 2,
        })
    }
}

fn residues(t: &NaryTree, p: u64) -> Result<Vec<u64>> {
    t.leaf_words().iter().map(|w| w.rho_mod(p)).collect()
}

/// Per-leaf residues of a reduced diagram and the verdict.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct MembershipReport {
    pub p: u64,
    pub member: bool,
    pub domain_leaves: Vec<String>,
    pub range_leaves: Vec<String>,
    pub domain_residues: Vec<u64>,
    pub range_residues: Vec<u64>,
    /// First leaf whose residues differ.
    pub witness_leaf: Option<usize>,
}

pub fn membership_report(d: &TreeDiagram, p: u64) -> Result<MembershipReport> {
    require_binary(d)?;
    let r = d.reduce();
    let domain_residues = residues(r.domain(), p)?;
    let range_residues = residues(r.range(), p)?;
    let witness_leaf = domain_residues
        .iter()
        .zip(&range_residues)
        .position(|(a, b)| a != b);
    let names = |t: &NaryTree| t.leaf_words().iter().map(Word::to_string).collect();
    Ok(MembershipReport {
        p,
        member: witness_leaf.is_none(),
        domain_leaves: names(r.domain()),
        range_leaves: names(r.range()),
        domain_residues,
        range_residues,
        witness_leaf,
    })
}

/// Membership by matching leaf residues.
pub fn is_member(d: &TreeDiagram, p: u64) -> Result<bool> {
    Ok(membership_report(d, p)?.member)
}

/// Membership by leaf lengths: `|i_+| = |i_-| (mod ord_2(p))` for every leaf.
pub fn is_member_by_length(d: &TreeDiagram, p: u64) -> Result<bool> {
    require_binary(d)?;
    let q = ord2(p)? as usize;
    let r = d.reduce();
    Ok(r
        .domain()
        .leaf_lengths()
        .iter()
        .zip(r.range().leaf_lengths())
        .all(|(a, b)| a % q == b % q))
}

/// Colors `(a, b, c)` around one caret: left of its first leaf, left of its
/// second child, and right of its last leaf.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct Bifurcation {
    pub caret: usize,
    pub a: u64,
    pub b: u64,
    pub c: u64,
}

/// Region colors of one tree in the half-strip: leaf `i` colors the region
/// to its left; the right-unbounded region has color 1.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct StripColoring {
    pub p: u64,
    pub leaf_colors: Vec<u64>,
    pub right_unbounded: u64,
}

impl StripColoring {
    /// The color right of leaf `i` (the next leaf's color, or 1 at the end).
    pub fn color_after(&self, i: usize) -> u64 {
        self.leaf_colors
            .get(i + 1)
            .copied()
            .unwrap_or(self.right_unbounded)
    }

    pub fn bifurcations(&self, t: &NaryTree) -> Vec<Bifurcation> {
        let color = |i: usize| {
            self.leaf_colors
                .get(i)
                .copied()
                .unwrap_or(self.right_unbounded)
        };
        t.caret_spans()
            .iter()
            .enumerate()
            .map(|(caret, s)| Bifurcation {
                caret,
                a: color(s.first),
                b: color(s.split()),
                c: color(s.end),
            })
            .collect()
    }

    /// Checks `2b = a + c (mod p)` at every caret of `t`.
    pub fn is_valid(&self, t: &NaryTree) -> bool {
        self.leaf_colors.first() == Some(&0)
            && self.right_unbounded == 1 % self.p
            && self
                .bifurcations(t)
                .iter()
                .all(|f| (2 * f.b) % self.p == (f.a + f.c) % self.p)
    }
}

/// The strip coloring induced by `rho` on the leaves of a binary tree.
pub fn strip_coloring(t: &NaryTree, p: u64) -> Result<StripColoring> {
    if t.arity() != 2 {
        return Err(Error::ArityMismatch {
            left: t.arity(),
            right: 2,
        });
    }
    Ok(StripColoring {
        p,
        leaf_colors: residues(t, p)?,
        right_unbounded: 1,
    })
}

/// The same bifurcation values as exact rationals `(a, b, c)`.
pub fn exact_bifurcations(
    t: &NaryTree,
) -> Result<Vec<(DyadicRational, DyadicRational, DyadicRational)>> {
    let values = t
        .leaf_words()
        .iter()
        .map(Word::rho)
        .collect::<Result<Vec<_>>>()?;
    let value = |i: usize| values.get(i).cloned().unwrap_or_else(DyadicRational::one);
    Ok(t
        .caret_spans()
        .iter()
        .map(|s| (value(s.first), value(s.split()), value(s.end)))
        .collect())
}

/// `sum (-1)^i a_i (mod 3)` with letters indexed from 1.
pub fn omega3(w: &Word) -> u64 {
    w.letters()
        .iter()
        .enumerate()
        .map(|(i, &a)| if i % 2 == 0 { 2 * a as u64 } else { a as u64 })
        .sum::<u64>()
        % 3
}

pub use crate::group::normalize_lengths;

/// For a tree whose leaf lengths are all multiples of `ord_2(p)`, checks that
/// the leaf residues read `0, 1, ..., p-1, 0, 1, ...` and end at 0.
pub fn residue_cycle_check(t: &NaryTree, p: u64) -> Result<bool> {
    let q = ord2(p)? as usize;
    if t.arity() != 2 {
        return Err(Error::ArityMismatch {
            left: t.arity(),
            right: 2,
        });
    }
    if let Some(len) = t.leaf_lengths().into_iter().find(|l| l % q != 0) {
        return Err(Error::Precondition(format!(
            "leaf of length {len} is not a multiple of {q}"
        )));
    }
    let r = residues(t, p)?;
    Ok(r.iter().enumerate().all(|(i, &x)| x == i as u64 % p) && r.last() == Some(&0))
}
