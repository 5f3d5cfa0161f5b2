//! Tree-pair diagrams as elements of the Brown-Thompson groups `F(n)`.
//!
//! A [`TreeDiagram`] `(domain, range)` sends the `i`-th leaf of the domain
//! tree to the `i`-th leaf of the range tree. Products compose left to right:
//! `a.multiply(&b)` acts as "first `a`, then `b`". Equivalently, for the
//! piecewise-linear realisation in `F = F(2)`,
//! `pl_map(a * b) = pl_map(b) ∘ pl_map(a)`. Under this convention the
//! relations `x_i^-1 x_j x_i = x_{j+n-1}` (for `i < j`) hold with the
//! generators built by [`generator`].
//!
//! Generator shapes: the domain tree of `x_i` has carets along the rightmost
//! spine at `(n-1)^j` for `0 <= j <= i` plus one caret at `(n-1)^i 0`; the
//! range tree has the spine carets plus one caret at `(n-1)^(i+1)`. In `F`
//! this makes `x_0` the map with breakpoints `(0,0), (1/4,1/2), (1/2,3/4),
//! (1,1)` and `x_1` the map with breakpoints `(0,0), (1/2,1/2), (5/8,3/4),
//! (3/4,7/8), (1,1)`.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::dyadic::DyadicRational;
use crate::error::{Error, Result};
use crate::trees::{NaryTree, Node, Word};

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct TreeDiagram {
    domain: NaryTree,
    range: NaryTree,
}

impl TreeDiagram {
    pub fn new(domain: NaryTree, range: NaryTree) -> Result<Self> {
        if domain.arity() != range.arity() {
            return Err(Error::ArityMismatch {
                left: domain.arity(),
                right: range.arity(),
            });
        }
        if domain.leaf_count() != range.leaf_count() {
            return Err(Error::SizeMismatch {
                left: domain.leaf_count(),
                right: range.leaf_count(),
            });
        }
        Ok(TreeDiagram { domain, range })
    }

    /// Binary diagram from leaf words, e.g. `(&["00","01","1"], &["0","10","11"])`.
    pub fn from_binary_words(domain: &[&str], range: &[&str]) -> Result<Self> {
        TreeDiagram::new(
            NaryTree::from_binary_words(domain)?,
            NaryTree::from_binary_words(range)?,
        )
    }

    pub fn identity(arity: u32) -> Self {
        TreeDiagram {
            domain: NaryTree::leaf(arity),
            range: NaryTree::leaf(arity),
        }
    }

    pub fn arity(&self) -> u32 {
        self.domain.arity()
    }

    pub fn domain(&self) -> &NaryTree {
        &self.domain
    }

    pub fn range(&self) -> &NaryTree {
        &self.range
    }

    /// Number of carets in each tree.
    pub fn size(&self) -> usize {
        self.domain.caret_count()
    }

    pub fn leaf_count(&self) -> usize {
        self.domain.leaf_count()
    }

    pub fn is_identity(&self) -> bool {
        self.reduce().domain.is_leaf()
    }

    /// Leaf positions `i` where leaves `i..i+n` hang from one caret in both trees.
    pub fn reducible_positions(&self) -> Vec<usize> {
        let r = self.range.exposed_carets();
        self.domain
            .exposed_carets()
            .into_iter()
            .filter(|i| r.binary_search(i).is_ok())
            .collect()
    }

    pub fn is_reduced(&self) -> bool {
        self.reducible_positions().is_empty()
    }

    /// Removes one common caret at leaf position `i`.
    pub fn reduce_at(&self, i: usize) -> Option<Self> {
        Some(TreeDiagram {
            domain: self.domain.contract(i)?,
            range: self.range.contract(i)?,
        })
    }

    /// The unique reduced representative.
    ///
    /// Leaf pairs are pushed left to right onto a stack; whenever the top `n`
    /// entries are the children of one caret in both trees they are replaced
    /// by their parent pair. A block can only complete when its rightmost
    /// entry is placed, so one pass removes every common caret.
    pub fn reduce(&self) -> Self {
        let n = self.arity() as usize;
        let is_block = |items: &[(Word, Word)], pick: fn(&(Word, Word)) -> &Word| {
            let first = pick(&items[0]);
            let len = first.len();
            len > 0
                && items.iter().enumerate().all(|(j, it)| {
                    let w = pick(it);
                    w.len() == len
                        && w.letters()[len - 1] == j as u32
                        && w.letters()[..len - 1] == first.letters()[..len - 1]
                })
        };
        let mut stack: Vec<(Word, Word)> = Vec::with_capacity(self.leaf_count());
        for pair in self.domain.leaf_words().into_iter().zip(self.range.leaf_words()) {
            stack.push(pair);
            while stack.len() >= n {
                let top = &stack[stack.len() - n..];
                if !is_block(top, |x| &x.0) || !is_block(top, |x| &x.1) {
                    break;
                }
                let (a, b) = &top[0];
                let parent = (a.prefix(a.len() - 1), b.prefix(b.len() - 1));
                stack.truncate(stack.len() - n);
                stack.push(parent);
            }
        }
        let (dom, ran): (Vec<Word>, Vec<Word>) = stack.into_iter().unzip();
        TreeDiagram {
            domain: NaryTree::from_leaf_words(self.arity(), &dom).expect("reduction keeps a prefix code"),
            range: NaryTree::from_leaf_words(self.arity(), &ran).expect("reduction keeps a prefix code"),
        }
    }

    /// Reduction by repeatedly removing common carets right to left until
    /// none remain. Slower than [`TreeDiagram::reduce`]; kept as its oracle.
    pub fn reduce_by_rescanning(&self) -> Self {
        let mut d = self.clone();
        loop {
            let positions = d.reducible_positions();
            if positions.is_empty() {
                return d;
            }
            for &i in positions.iter().rev() {
                d = d.reduce_at(i).expect("position was reducible");
            }
        }
    }

    /// Inserts a copy of `sub` at leaf `i` of both trees.
    pub fn insert(&self, i: usize, sub: &NaryTree) -> Result<Self> {
        Ok(TreeDiagram {
            domain: self.domain.attach(i, sub)?,
            range: self.range.attach(i, sub)?,
        })
    }

    /// Product acting as "first `self`, then `other`"; the result is reduced.
    pub fn multiply(&self, other: &TreeDiagram) -> Result<Self> {
        if self.arity() != other.arity() {
            return Err(Error::ArityMismatch {
                left: self.arity(),
                right: other.arity(),
            });
        }
        let middle = self.range.common_refinement(&other.domain)?;
        let left = self
            .domain
            .expand_leaves(&self.range.refinement_pieces(&middle))?;
        let right = other
            .range
            .expand_leaves(&other.domain.refinement_pieces(&middle))?;
        Ok(TreeDiagram {
            domain: left,
            range: right,
        }
        .reduce())
    }

    pub fn inverse(&self) -> Self {
        TreeDiagram {
            domain: self.range.clone(),
            range: self.domain.clone(),
        }
    }

    pub fn pow(&self, exponent: i64) -> Result<Self> {
        let base = if exponent < 0 {
            self.inverse()
        } else {
            self.clone()
        };
        let mut acc = TreeDiagram::identity(self.arity());
        for _ in 0..exponent.unsigned_abs() {
            acc = acc.multiply(&base)?;
        }
        Ok(acc)
    }

    /// Equality in the group (after reduction).
    pub fn same_element(&self, other: &TreeDiagram) -> bool {
        self.reduce() == other.reduce()
    }

    /// Parses `"<tree>|<tree>"`; `default_arity` is used when neither tree has a caret.
    pub fn parse(text: &str, default_arity: u32) -> Result<Self> {
        let Some(bar) = text.find('|') else {
            return Err(Error::parse(text.len(), "expected '<tree>|<tree>'"));
        };
        let (a, b) = (&text[..bar], &text[bar + 1..]);
        let shift = |e: Error, offset: usize| match e {
            Error::Parse { pos, msg } => Error::parse(pos + offset, msg),
            other => other,
        };
        let domain = NaryTree::parse(a, default_arity).map_err(|e| shift(e, 0))?;
        let hint = if domain.is_leaf() {
            default_arity
        } else {
            domain.arity()
        };
        let range = NaryTree::parse(b, hint).map_err(|e| shift(e, bar + 1))?;
        let domain = if domain.is_leaf() {
            NaryTree::leaf(range.arity())
        } else {
            domain
        };
        TreeDiagram::new(domain, range)
    }

    pub fn to_json(&self) -> DiagramJson {
        DiagramJson {
            n: self.arity(),
            domain: self.domain.to_string(),
            range: self.range.to_string(),
        }
    }

    pub fn from_json(json: &DiagramJson) -> Result<Self> {
        TreeDiagram::new(
            NaryTree::parse(&json.domain, json.n)?,
            NaryTree::parse(&json.range, json.n)?,
        )
        .and_then(|d| {
            if d.arity() == json.n {
                Ok(d)
            } else {
                Err(Error::ArityMismatch {
                    left: json.n,
                    right: d.arity(),
                })
            }
        })
    }
}

impl fmt::Display for TreeDiagram {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}|{}", self.domain, self.range)
    }
}

impl FromStr for TreeDiagram {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        TreeDiagram::parse(s, 2)
    }
}

/// JSON form of an element: `{"n": 2, "domain": "((..).)", "range": "(.(..))"}`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct DiagramJson {
    pub n: u32,
    pub domain: String,
    pub range: String,
}

fn spine(arity: u32, depth_left: u32, expanded: usize) -> Node {
    let n = arity as usize;
    let mut children = vec![Node::Leaf; n];
    if depth_left == 0 {
        children[expanded] = Node::Caret(vec![Node::Leaf; n]);
    } else {
        children[n - 1] = spine(arity, depth_left - 1, expanded);
    }
    Node::Caret(children)
}

/// The generator `x_i` of `F(n)`. With `i = k(n-1) + r`, both trees are the
/// right spine of depth `k` with one more caret below it: on child `r` in the
/// domain and on the last child in the range.
pub fn generator(arity: u32, index: u32) -> Result<TreeDiagram> {
    if arity < 2 {
        return Err(Error::InvalidArity(arity));
    }
    let (k, r) = (index / (arity - 1), (index % (arity - 1)) as usize);
    let domain = NaryTree::from_node(arity, spine(arity, k, r))?;
    let range = NaryTree::from_node(arity, spine(arity, k, arity as usize - 1))?;
    TreeDiagram::new(domain, range)
}

/// A word in the generators `x_0, x_1, ...` of `F(n)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GroupWord {
    pub arity: u32,
    pub letters: Vec<(u32, i64)>,
}

impl GroupWord {
    pub fn new(arity: u32, letters: Vec<(u32, i64)>) -> Self {
        GroupWord {
            arity,
            letters: letters.into_iter().filter(|&(_, e)| e != 0).collect(),
        }
    }

    /// Parses whitespace-separated tokens `x<i>` or `x<i>^<e>`.
    pub fn parse(text: &str, arity: u32) -> Result<Self> {
        let mut letters = Vec::new();
        let mut offset = 0;
        for token in text.split_whitespace() {
            let at = offset + text[offset..].find(token).unwrap_or(0);
            offset = at + token.len();
            let body = token
                .strip_prefix('x')
                .ok_or_else(|| Error::parse(at, format!("expected x<i>, got {token:?}")))?;
            let (index, exp) = match body.split_once('^') {
                Some((i, e)) => (i, e.trim_start_matches('{').trim_end_matches('}')),
                None => (body, "1"),
            };
            let index: u32 = index
                .parse()
                .map_err(|_| Error::parse(at + 1, format!("bad generator index in {token:?}")))?;
            let exp: i64 = exp
                .parse()
                .map_err(|_| Error::parse(at, format!("bad exponent in {token:?}")))?;
            if exp == 0 {
                return Err(Error::parse(at, "exponent must be nonzero"));
            }
            letters.push((index, exp));
        }
        Ok(GroupWord { arity, letters })
    }

    pub fn inverse(&self) -> Self {
        GroupWord {
            arity: self.arity,
            letters: self.letters.iter().rev().map(|&(i, e)| (i, -e)).collect(),
        }
    }

    pub fn concat(&self, other: &GroupWord) -> Self {
        let mut letters = self.letters.clone();
        letters.extend_from_slice(&other.letters);
        GroupWord {
            arity: self.arity,
            letters,
        }
    }

    /// `y^-1 x y`.
    pub fn conjugate_by(&self, y: &GroupWord) -> Self {
        y.inverse().concat(self).concat(y)
    }
}

impl fmt::Display for GroupWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self
            .letters
            .iter()
            .map(|&(i, e)| {
                if e == 1 {
                    format!("x{i}")
                } else {
                    format!("x{i}^{e}")
                }
            })
            .collect();
        f.write_str(&parts.join(" "))
    }
}

fn letter(arity: u32, i: u32) -> GroupWord {
    GroupWord::new(arity, vec![(i, 1)])
}

fn conj(x: &GroupWord, ys: &[u32]) -> GroupWord {
    let y = GroupWord::new(x.arity, ys.iter().map(|&i| (i, 1)).collect());
    x.conjugate_by(&y)
}

/// Relators `x_j^{x_i} x_{j+n-1}^{-1}` of the infinite presentation for
/// `i < j < bound`; each evaluates to the identity.
pub fn infinite_relators(arity: u32, bound: u32) -> Vec<GroupWord> {
    let mut out = Vec::new();
    for j in 0..bound {
        for i in 0..j {
            let lhs = conj(&letter(arity, j), &[i]);
            out.push(lhs.concat(&letter(arity, j + arity - 1).inverse()));
        }
    }
    out
}

/// Relators of the finite presentation on `x_0, ..., x_{n-1}`.
pub fn finite_relators(arity: u32) -> Vec<GroupWord> {
    let n = arity;
    let rel = |a: GroupWord, b: GroupWord| a.concat(&b.inverse());
    let mut out = Vec::new();
    for k in 1..n {
        for i in 1..k {
            let x = letter(n, k);
            out.push(rel(conj(&x, &[0]), conj(&x, &[i])));
        }
    }
    for k in 1..n {
        for i in 1..n {
            if k <= i + 1 {
                let x = letter(n, k);
                out.push(rel(conj(&x, &[0, 0]), conj(&x, &[0, i])));
            }
        }
    }
    let x1 = letter(n, 1);
    out.push(rel(conj(&x1, &[0, 0, 0]), conj(&x1, &[0, 0, n - 1])));
    out
}

/// Evaluates a word to its reduced diagram.
pub fn evaluate_word(word: &GroupWord) -> Result<TreeDiagram> {
    let mut acc = TreeDiagram::identity(word.arity);
    for &(i, e) in &word.letters {
        acc = acc.multiply(&generator(word.arity, i)?.pow(e)?)?;
    }
    Ok(acc)
}

/// A piecewise-linear homeomorphism of `[0,1]` with dyadic breakpoints and
/// slopes that are powers of two.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PLMap {
    breakpoints: Vec<(DyadicRational, DyadicRational)>,
    /// `log2` of the slope on each piece.
    slopes: Vec<i64>,
}

impl PLMap {
    pub fn breakpoints(&self) -> &[(DyadicRational, DyadicRational)] {
        &self.breakpoints
    }

    pub fn slope_exponents(&self) -> &[i64] {
        &self.slopes
    }

    pub fn apply(&self, x: &DyadicRational) -> DyadicRational {
        assert!(*x <= DyadicRational::one(), "argument outside [0, 1]");
        let piece = self
            .breakpoints
            .partition_point(|(bx, _)| bx <= x)
            .saturating_sub(1)
            .min(self.slopes.len() - 1);
        let (bx, by) = &self.breakpoints[piece];
        let dx = x.checked_sub(bx).expect("breakpoints sorted");
        by + &dx.mul_pow2(self.slopes[piece])
    }

    pub fn identity() -> Self {
        PLMap {
            breakpoints: vec![
                (DyadicRational::zero(), DyadicRational::zero()),
                (DyadicRational::one(), DyadicRational::one()),
            ],
            slopes: vec![0],
        }
    }
}

/// The piecewise-linear map of a binary diagram: each domain leaf interval
/// goes affinely onto the matching range leaf interval.
pub fn pl_map(d: &TreeDiagram) -> Result<PLMap> {
    if d.arity() != 2 {
        return Err(Error::ArityMismatch {
            left: d.arity(),
            right: 2,
        });
    }
    let dom = d.domain.leaf_words();
    let ran = d.range.leaf_words();
    let mut breakpoints = Vec::new();
    let mut slopes: Vec<i64> = Vec::new();
    for (a, b) in dom.iter().zip(&ran) {
        let slope = a.len() as i64 - b.len() as i64;
        if slopes.last() == Some(&slope) {
            continue;
        }
        breakpoints.push((a.rho()?, b.rho()?));
        slopes.push(slope);
    }
    breakpoints.push((DyadicRational::one(), DyadicRational::one()));
    Ok(PLMap {
        breakpoints,
        slopes,
    })
}

/// `phi_q`: replaces every `2^q`-caret by the complete binary tree `T_q`.
/// The result is the mechanical substitution, not reduced.
pub fn phi_q(d: &TreeDiagram, q: u32) -> Result<TreeDiagram> {
    if q == 0 || q > 16 || d.arity() != 1 << q {
        return Err(Error::ArityMismatch {
            left: d.arity(),
            right: 1u32.checked_shl(q).unwrap_or(0),
        });
    }
    fn substitute(node: &Node, q: u32) -> Node {
        match node {
            Node::Leaf => Node::Leaf,
            Node::Caret(children) => {
                let mut it = children.iter().map(|c| substitute(c, q));
                fn block(depth: u32, it: &mut impl Iterator<Item = Node>) -> Node {
                    if depth == 0 {
                        it.next().expect("2^q children")
                    } else {
                        let l = block(depth - 1, it);
                        let r = block(depth - 1, it);
                        Node::Caret(vec![l, r])
                    }
                }
                block(q, &mut it)
            }
        }
    }
    TreeDiagram::new(
        NaryTree::from_node(2, substitute(d.domain.root(), q))?,
        NaryTree::from_node(2, substitute(d.range.root(), q))?,
    )
}

/// Attaches complete binary trees so every leaf length becomes a multiple of `q`.
pub fn normalize_lengths(d: &TreeDiagram, q: u32) -> Result<TreeDiagram> {
    if d.arity() != 2 || q == 0 {
        return Err(Error::Precondition("binary diagram and q >= 1 required".into()));
    }
    let q = q as usize;
    let dom = d.domain.leaf_lengths();
    let ran = d.range.leaf_lengths();
    let mut subs = Vec::with_capacity(dom.len());
    for (i, (a, b)) in dom.iter().zip(&ran).enumerate() {
        if a % q != b % q {
            return Err(Error::NotInSubgroup(format!(
                "leaf {i} has lengths {a} and {b}, not congruent mod {q}"
            )));
        }
        let missing = (q - a % q) % q;
        subs.push(NaryTree::complete_tree(missing as u32));
    }
    TreeDiagram::new(
        d.domain.expand_leaves(&subs)?,
        d.range.expand_leaves(&subs)?,
    )
}

/// Contracts a binary tree with all leaf lengths divisible by `q` into a
/// `2^q`-ary tree by repeatedly peeling the `T_q` block headed by the
/// leftmost leaf of maximal length.
fn peel_blocks(tree: &NaryTree, q: u32) -> Result<NaryTree> {
    let block = 1usize << q;
    let q = q as usize;
    let mut leaves: Vec<(Word, Node)> = tree
        .leaf_words()
        .into_iter()
        .map(|w| (w, Node::Leaf))
        .collect();
    while leaves.len() > 1 {
        let max_len = leaves.iter().map(|(w, _)| w.len()).max().unwrap_or(0);
        let start = leaves
            .iter()
            .position(|(w, _)| w.len() == max_len)
            .expect("nonempty");
        let fail = || {
            Error::NotInSubgroup(format!(
                "leaves from {start} do not form a complete depth-{q} block"
            ))
        };
        if max_len < q || start + block > leaves.len() {
            return Err(fail());
        }
        let prefix = leaves[start].0.prefix(max_len - q);
        for (j, (w, _)) in leaves[start..start + block].iter().enumerate() {
            let tail = &w.letters()[max_len - q..];
            let value = tail.iter().fold(0usize, |acc, &b| acc * 2 + b as usize);
            if w.len() != max_len || !prefix.is_prefix_of(w) || value != j {
                return Err(fail());
            }
        }
        let children: Vec<Node> = leaves
            .drain(start..start + block)
            .map(|(_, n)| n)
            .collect();
        leaves.insert(start, (prefix, Node::Caret(children)));
    }
    let (w, root) = leaves.pop().expect("one leaf remains");
    if !w.is_empty() {
        return Err(Error::NotInSubgroup("blocks do not reach the root".into()));
    }
    NaryTree::from_node(1 << q, root)
}

/// Inverse of [`phi_q`] on its image: recovers the `F(2^q)` element.
pub fn unphi_q(d: &TreeDiagram, q: u32) -> Result<TreeDiagram> {
    if d.arity() != 2 || q == 0 || q > 16 {
        return Err(Error::Precondition("binary diagram and 1 <= q <= 16 required".into()));
    }
    let normal = normalize_lengths(&d.reduce(), q)?;
    Ok(TreeDiagram::new(peel_blocks(&normal.domain, q)?, peel_blocks(&normal.range, q)?)?.reduce())
}
