//! Finite n-ary trees with word-addressed leaves.
//!
//! A leaf is addressed by the word of child indices on the path from the
//! root. Leaves are ordered left to right, which agrees with lexicographic
//! order on their words. For binary trees the map [`Word::rho`] sends a leaf
//! to the left endpoint of its standard dyadic subinterval of `[0, 1]`.
//!
//! Trees print and parse in a bracket grammar: a leaf is `.` and a node with
//! `n` children is `(` followed by the children and `)`. The tree with leaves
//! `00, 01, 1` is `((..).)`.

use std::cmp::Ordering;
use std::fmt;

use num_bigint::BigUint;

use crate::dyadic::DyadicRational;
use crate::error::{Error, Result};

pub const MAX_ARITY: u32 = 1 << 16;

fn check_arity(arity: u32) -> Result<()> {
    if (2..=MAX_ARITY).contains(&arity) {
        Ok(())
    } else {
        Err(Error::InvalidArity(arity))
    }
}

fn check_modulus(p: u64) -> Result<()> {
    if p >= 3 && p % 2 == 1 {
        Ok(())
    } else {
        Err(Error::InvalidModulus(p))
    }
}

/// A finite word over `{0, ..., arity - 1}`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Word {
    arity: u32,
    letters: Vec<u32>,
}

impl Word {
    pub fn new(arity: u32, letters: Vec<u32>) -> Result<Self> {
        check_arity(arity)?;
        if let Some(&letter) = letters.iter().find(|&&l| l >= arity) {
            return Err(Error::LetterOutOfRange { letter, arity });
        }
        Ok(Word { arity, letters })
    }

    pub fn empty(arity: u32) -> Self {
        Word {
            arity,
            letters: Vec::new(),
        }
    }

    /// Parses a binary word such as `"0101"`.
    pub fn binary(s: &str) -> Result<Self> {
        let letters = s
            .chars()
            .enumerate()
            .map(|(i, c)| match c {
                '0' => Ok(0),
                '1' => Ok(1),
                _ => Err(Error::parse(i, format!("unexpected {c:?} in binary word"))),
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(Word { arity: 2, letters })
    }

    /// `0^len` followed by nothing else.
    pub fn zeros(arity: u32, len: usize) -> Self {
        Word {
            arity,
            letters: vec![0; len],
        }
    }

    pub fn arity(&self) -> u32 {
        self.arity
    }

    pub fn letters(&self) -> &[u32] {
        &self.letters
    }

    pub fn len(&self) -> usize {
        self.letters.len()
    }

    pub fn is_empty(&self) -> bool {
        self.letters.is_empty()
    }

    pub fn is_all_zero(&self) -> bool {
        self.letters.iter().all(|&l| l == 0)
    }

    pub fn child(&self, letter: u32) -> Self {
        debug_assert!(letter < self.arity);
        let mut letters = self.letters.clone();
        letters.push(letter);
        Word {
            arity: self.arity,
            letters,
        }
    }

    pub fn concat(&self, other: &Word) -> Self {
        debug_assert_eq!(self.arity, other.arity);
        let mut letters = self.letters.clone();
        letters.extend_from_slice(&other.letters);
        Word {
            arity: self.arity,
            letters,
        }
    }

    pub fn prefix(&self, len: usize) -> Self {
        Word {
            arity: self.arity,
            letters: self.letters[..len].to_vec(),
        }
    }

    pub fn suffix_from(&self, start: usize) -> Self {
        Word {
            arity: self.arity,
            letters: self.letters[start..].to_vec(),
        }
    }

    pub fn is_prefix_of(&self, other: &Word) -> bool {
        other.letters.starts_with(&self.letters)
    }

    fn require_binary(&self) -> Result<()> {
        if self.arity == 2 {
            Ok(())
        } else {
            Err(Error::ArityMismatch {
                left: self.arity,
                right: 2,
            })
        }
    }

    /// `a_1 ... a_m -> sum a_i / 2^i`, the left endpoint of the leaf's interval.
    pub fn rho(&self) -> Result<DyadicRational> {
        self.require_binary()?;
        let mut bits = BigUint::default();
        for &l in &self.letters {
            bits = (bits << 1u32) + l;
        }
        Ok(DyadicRational::new(bits, self.letters.len() as u64))
    }

    /// `rho(w)` reduced modulo an odd `p`, computed as `sum a_i (2^-1)^i`.
    pub fn rho_mod(&self, p: u64) -> Result<u64> {
        self.require_binary()?;
        check_modulus(p)?;
        let inv2 = (p + 1) / 2;
        let mut r = 0u64;
        for &l in self.letters.iter().rev() {
            r = crate::dyadic::mul_mod((r + l as u64) % p, inv2, p);
        }
        Ok(r)
    }
}

impl Ord for Word {
    fn cmp(&self, other: &Self) -> Ordering {
        self.letters.cmp(&other.letters)
    }
}

impl PartialOrd for Word {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.arity <= 10 {
            for l in &self.letters {
                write!(f, "{l}")?;
            }
            Ok(())
        } else {
            let parts: Vec<String> = self.letters.iter().map(|l| l.to_string()).collect();
            write!(f, "{}", parts.join(","))
        }
    }
}

/// One node of an n-ary tree.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Node {
    Leaf,
    Caret(Vec<Node>),
}

impl Node {
    pub fn is_leaf(&self) -> bool {
        matches!(self, Node::Leaf)
    }

    fn leaf_count(&self) -> usize {
        match self {
            Node::Leaf => 1,
            Node::Caret(children) => children.iter().map(Node::leaf_count).sum(),
        }
    }

    fn caret_count(&self) -> usize {
        match self {
            Node::Leaf => 0,
            Node::Caret(children) => 1 + children.iter().map(Node::caret_count).sum::<usize>(),
        }
    }

    fn complete(arity: u32, depth: u32) -> Node {
        if depth == 0 {
            Node::Leaf
        } else {
            Node::Caret(vec![Node::complete(arity, depth - 1); arity as usize])
        }
    }

    fn collect_words(&self, prefix: &mut Vec<u32>, arity: u32, out: &mut Vec<Word>) {
        match self {
            Node::Leaf => out.push(Word {
                arity,
                letters: prefix.clone(),
            }),
            Node::Caret(children) => {
                for (i, c) in children.iter().enumerate() {
                    prefix.push(i as u32);
                    c.collect_words(prefix, arity, out);
                    prefix.pop();
                }
            }
        }
    }

    /// Replaces the leaves, in order, by the nodes yielded from `subs`.
    fn expand(&self, subs: &mut impl Iterator<Item = Node>) -> Node {
        match self {
            Node::Leaf => subs.next().expect("substitution list exhausted"),
            Node::Caret(children) => {
                Node::Caret(children.iter().map(|c| c.expand(subs)).collect())
            }
        }
    }

    fn join(&self, other: &Node) -> Node {
        match (self, other) {
            (Node::Leaf, x) | (x, Node::Leaf) => x.clone(),
            (Node::Caret(a), Node::Caret(b)) => {
                Node::Caret(a.iter().zip(b).map(|(x, y)| x.join(y)).collect())
            }
        }
    }

    fn write(&self, out: &mut String) {
        match self {
            Node::Leaf => out.push('.'),
            Node::Caret(children) => {
                out.push('(');
                for c in children {
                    c.write(out);
                }
                out.push(')');
            }
        }
    }
}

/// Where a caret's child sits: another caret (by preorder id) or a leaf (by index).
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Child {
    Caret(usize),
    Leaf(usize),
}

/// Position of one caret inside its tree.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CaretSpan {
    pub word: Word,
    pub parent: Option<usize>,
    pub children: Vec<Child>,
    /// Index of the first leaf below this caret.
    pub first: usize,
    /// For each child, the index of its first leaf.
    pub starts: Vec<usize>,
    /// One past the last leaf below this caret.
    pub end: usize,
}

impl CaretSpan {
    /// First leaf of the second child; for binary carets this is the leaf
    /// just right of the gap the caret opens.
    pub fn split(&self) -> usize {
        self.starts[1]
    }
}

/// An n-ary tree. Equality is structural.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct NaryTree {
    arity: u32,
    root: Node,
}

impl NaryTree {
    pub fn from_node(arity: u32, root: Node) -> Result<Self> {
        check_arity(arity)?;
        fn valid(n: &Node, arity: usize) -> bool {
            match n {
                Node::Leaf => true,
                Node::Caret(c) => c.len() == arity && c.iter().all(|x| valid(x, arity)),
            }
        }
        if !valid(&root, arity as usize) {
            return Err(Error::InvalidArity(arity));
        }
        Ok(NaryTree { arity, root })
    }

    /// The single-leaf tree.
    pub fn leaf(arity: u32) -> Self {
        NaryTree {
            arity,
            root: Node::Leaf,
        }
    }

    pub fn caret(arity: u32) -> Self {
        NaryTree::complete(arity, 1)
    }

    /// The complete tree of the given depth.
    pub fn complete(arity: u32, depth: u32) -> Self {
        NaryTree {
            arity,
            root: Node::complete(arity, depth),
        }
    }

    /// The complete binary tree `T_q`, whose leaves are all binary words of length `q`.
    pub fn complete_tree(q: u32) -> Self {
        NaryTree::complete(2, q)
    }

    /// Rebuilds a tree from its ordered leaf words.
    pub fn from_leaf_words(arity: u32, words: &[Word]) -> Result<Self> {
        check_arity(arity)?;
        fn build(words: &[Word], depth: usize, arity: u32) -> Result<Node> {
            if words.len() == 1 && words[0].len() == depth {
                return Ok(Node::Leaf);
            }
            if words.iter().any(|w| w.len() <= depth) {
                return Err(Error::InvalidPartition(
                    "leaf words are not a complete prefix code".into(),
                ));
            }
            let mut children = Vec::with_capacity(arity as usize);
            let mut rest = words;
            for letter in 0..arity {
                let n = rest
                    .iter()
                    .take_while(|w| w.letters[depth] == letter)
                    .count();
                if n == 0 {
                    return Err(Error::InvalidPartition(format!(
                        "no leaf below child {letter} at depth {depth}"
                    )));
                }
                children.push(build(&rest[..n], depth + 1, arity)?);
                rest = &rest[n..];
            }
            if !rest.is_empty() {
                return Err(Error::InvalidPartition("leaf words out of order".into()));
            }
            Ok(Node::Caret(children))
        }
        if words.is_empty() {
            return Err(Error::InvalidPartition("no leaves".into()));
        }
        if let Some(w) = words.iter().find(|w| w.arity != arity) {
            return Err(Error::ArityMismatch {
                left: arity,
                right: w.arity,
            });
        }
        Ok(NaryTree {
            arity,
            root: build(words, 0, arity)?,
        })
    }

    /// Convenience constructor for binary trees from strings like `["00", "01", "1"]`.
    pub fn from_binary_words(words: &[&str]) -> Result<Self> {
        let words = words
            .iter()
            .map(|w| Word::binary(w))
            .collect::<Result<Vec<_>>>()?;
        NaryTree::from_leaf_words(2, &words)
    }

    pub fn arity(&self) -> u32 {
        self.arity
    }

    pub fn root(&self) -> &Node {
        &self.root
    }

    pub fn is_leaf(&self) -> bool {
        self.root.is_leaf()
    }

    pub fn leaf_count(&self) -> usize {
        self.root.leaf_count()
    }

    pub fn caret_count(&self) -> usize {
        self.root.caret_count()
    }

    /// Leaf words from left to right.
    pub fn leaf_words(&self) -> Vec<Word> {
        let mut out = Vec::with_capacity(self.leaf_count());
        self.root.collect_words(&mut Vec::new(), self.arity, &mut out);
        out
    }

    pub fn leaf_lengths(&self) -> Vec<usize> {
        self.leaf_words().iter().map(Word::len).collect()
    }

    /// Grafts `sub` onto leaf `leaf_index`.
    pub fn attach(&self, leaf_index: usize, sub: &NaryTree) -> Result<Self> {
        if sub.arity != self.arity {
            return Err(Error::ArityMismatch {
                left: self.arity,
                right: sub.arity,
            });
        }
        let leaves = self.leaf_count();
        if leaf_index >= leaves {
            return Err(Error::LeafIndexOutOfRange {
                index: leaf_index,
                leaves,
            });
        }
        let mut subs =
            (0..leaves).map(|i| if i == leaf_index { sub.root.clone() } else { Node::Leaf });
        Ok(NaryTree {
            arity: self.arity,
            root: self.root.expand(&mut subs),
        })
    }

    /// Replaces leaf `i` by `subs[i]` for every leaf at once.
    pub fn expand_leaves(&self, subs: &[NaryTree]) -> Result<Self> {
        if subs.len() != self.leaf_count() {
            return Err(Error::SizeMismatch {
                left: self.leaf_count(),
                right: subs.len(),
            });
        }
        if let Some(s) = subs.iter().find(|s| s.arity != self.arity) {
            return Err(Error::ArityMismatch {
                left: self.arity,
                right: s.arity,
            });
        }
        let mut it = subs.iter().map(|s| s.root.clone());
        Ok(NaryTree {
            arity: self.arity,
            root: self.root.expand(&mut it),
        })
    }

    /// The subtree rooted at the node addressed by `w`, if that node exists.
    pub fn subtree_at(&self, w: &Word) -> Option<NaryTree> {
        let mut node = &self.root;
        for &l in w.letters() {
            match node {
                Node::Leaf => return None,
                Node::Caret(children) => node = children.get(l as usize)?,
            }
        }
        Some(NaryTree {
            arity: self.arity,
            root: node.clone(),
        })
    }

    /// The smallest tree refining both inputs: the union of their caret sets.
    pub fn common_refinement(&self, other: &NaryTree) -> Result<Self> {
        if self.arity != other.arity {
            return Err(Error::ArityMismatch {
                left: self.arity,
                right: other.arity,
            });
        }
        Ok(NaryTree {
            arity: self.arity,
            root: self.root.join(&other.root),
        })
    }

    /// For each leaf of `self`, the piece of `refinement` hanging below it.
    pub(crate) fn refinement_pieces(&self, refinement: &NaryTree) -> Vec<NaryTree> {
        self.leaf_words()
            .iter()
            .map(|w| {
                refinement
                    .subtree_at(w)
                    .expect("refinement must contain every leaf of the coarser tree")
            })
            .collect()
    }

    /// Builds the binary tree whose leaf intervals are `[b_i, b_{i+1}]`.
    pub fn tree_from_breakpoints(breakpoints: &[DyadicRational]) -> Result<Self> {
        let n = breakpoints.len();
        if n < 2 {
            return Err(Error::InvalidPartition("need at least two breakpoints".into()));
        }
        if !breakpoints[0].is_zero() || breakpoints[n - 1] != DyadicRational::one() {
            return Err(Error::InvalidPartition("breakpoints must run from 0 to 1".into()));
        }
        if breakpoints.windows(2).any(|w| w[0] >= w[1]) {
            return Err(Error::InvalidPartition("breakpoints must increase strictly".into()));
        }
        let max_depth = breakpoints.iter().map(|b| b.exponent()).max().unwrap_or(0);

        // `next` indexes the breakpoint that should start the current interval.
        fn build(
            left: &DyadicRational,
            depth: u64,
            max_depth: u64,
            bps: &[DyadicRational],
            next: &mut usize,
        ) -> Result<Node> {
            let right = left + &DyadicRational::unit(depth);
            if bps[*next] != *left {
                return Err(Error::InvalidPartition(format!(
                    "breakpoint {} is not aligned with the dyadic subdivision",
                    bps[*next]
                )));
            }
            let following = &bps[*next + 1];
            match following.cmp(&right) {
                Ordering::Equal => {
                    *next += 1;
                    Ok(Node::Leaf)
                }
                Ordering::Greater => Err(Error::InvalidPartition(format!(
                    "[{}, {}] is not a standard dyadic interval",
                    left, following
                ))),
                Ordering::Less => {
                    if depth >= max_depth {
                        return Err(Error::InvalidPartition(format!(
                            "[{}, {}] is not a standard dyadic interval",
                            left, following
                        )));
                    }
                    let mid = left + &DyadicRational::unit(depth + 1);
                    let l = build(left, depth + 1, max_depth, bps, next)?;
                    let r = build(&mid, depth + 1, max_depth, bps, next)?;
                    Ok(Node::Caret(vec![l, r]))
                }
            }
        }

        let mut next = 0;
        let root = build(&DyadicRational::zero(), 0, max_depth, breakpoints, &mut next)?;
        Ok(NaryTree { arity: 2, root })
    }

    /// Every caret in preorder, with parent/child links and leaf ranges.
    pub fn caret_spans(&self) -> Vec<CaretSpan> {
        fn walk(
            node: &Node,
            word: &mut Vec<u32>,
            arity: u32,
            parent: Option<usize>,
            next_leaf: &mut usize,
            out: &mut Vec<CaretSpan>,
        ) -> Child {
            match node {
                Node::Leaf => {
                    *next_leaf += 1;
                    Child::Leaf(*next_leaf - 1)
                }
                Node::Caret(children) => {
                    let id = out.len();
                    out.push(CaretSpan {
                        word: Word {
                            arity,
                            letters: word.clone(),
                        },
                        parent,
                        children: Vec::new(),
                        first: *next_leaf,
                        starts: Vec::new(),
                        end: 0,
                    });
                    for (i, c) in children.iter().enumerate() {
                        out[id].starts.push(*next_leaf);
                        word.push(i as u32);
                        let child = walk(c, word, arity, Some(id), next_leaf, out);
                        word.pop();
                        out[id].children.push(child);
                    }
                    out[id].end = *next_leaf;
                    Child::Caret(id)
                }
            }
        }
        let mut out = Vec::new();
        walk(&self.root, &mut Vec::new(), self.arity, None, &mut 0, &mut out);
        out
    }

    /// First-leaf indices of carets whose children are all leaves.
    pub fn exposed_carets(&self) -> Vec<usize> {
        fn walk(node: &Node, next: &mut usize, out: &mut Vec<usize>) {
            match node {
                Node::Leaf => *next += 1,
                Node::Caret(children) => {
                    if children.iter().all(Node::is_leaf) {
                        out.push(*next);
                        *next += children.len();
                    } else {
                        for c in children {
                            walk(c, next, out);
                        }
                    }
                }
            }
        }
        let mut out = Vec::new();
        walk(&self.root, &mut 0, &mut out);
        out
    }

    /// Removes the exposed caret whose first leaf is `first_leaf`.
    pub(crate) fn contract(&self, first_leaf: usize) -> Option<Self> {
        fn walk(node: &Node, target: usize, next: &mut usize, done: &mut bool) -> Node {
            match node {
                Node::Leaf => {
                    *next += 1;
                    Node::Leaf
                }
                Node::Caret(children) => {
                    if !*done && *next == target && children.iter().all(Node::is_leaf) {
                        *done = true;
                        *next += children.len();
                        return Node::Leaf;
                    }
                    Node::Caret(children.iter().map(|c| walk(c, target, next, done)).collect())
                }
            }
        }
        let mut done = false;
        let root = walk(&self.root, first_leaf, &mut 0, &mut done);
        done.then_some(NaryTree {
            arity: self.arity,
            root,
        })
    }

    /// Parses the bracket grammar. `default_arity` applies when the text has no
    /// caret to infer the arity from.
    pub fn parse(text: &str, default_arity: u32) -> Result<Self> {
        let bytes: Vec<(usize, char)> = text
            .char_indices()
            .filter(|(_, c)| !c.is_whitespace())
            .collect();
        let mut pos = 0;
        let mut arity: Option<u32> = None;

        fn node(
            bytes: &[(usize, char)],
            pos: &mut usize,
            arity: &mut Option<u32>,
            end: usize,
        ) -> Result<Node> {
            let Some(&(at, c)) = bytes.get(*pos) else {
                return Err(Error::parse(end, "unexpected end of tree"));
            };
            match c {
                '.' => {
                    *pos += 1;
                    Ok(Node::Leaf)
                }
                '(' => {
                    *pos += 1;
                    let mut children = Vec::new();
                    loop {
                        match bytes.get(*pos) {
                            Some(&(_, ')')) => {
                                *pos += 1;
                                break;
                            }
                            Some(_) => children.push(node(bytes, pos, arity, end)?),
                            None => return Err(Error::parse(end, "unclosed '('")),
                        }
                    }
                    let n = children.len() as u32;
                    match *arity {
                        None if n >= 2 => *arity = Some(n),
                        None => return Err(Error::parse(at, "a node needs at least two children")),
                        Some(a) if a != n => {
                            return Err(Error::parse(
                                at,
                                format!("node has {n} children, expected {a}"),
                            ))
                        }
                        Some(_) => {}
                    }
                    Ok(Node::Caret(children))
                }
                other => Err(Error::parse(at, format!("unexpected {other:?}"))),
            }
        }

        let root = node(&bytes, &mut pos, &mut arity, text.len())?;
        if let Some(&(at, c)) = bytes.get(pos) {
            return Err(Error::parse(at, format!("trailing {c:?} after tree")));
        }
        let arity = arity.unwrap_or(default_arity);
        check_arity(arity)?;
        Ok(NaryTree { arity, root })
    }
}

impl fmt::Display for NaryTree {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut s = String::new();
        self.root.write(&mut s);
        f.write_str(&s)
    }
}
