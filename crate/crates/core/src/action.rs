//! The right action of `F` on `W^q`, binary words modulo trailing blocks of
//! `q` zeros.
//!
//! A word `u` is acted on by a diagram `(T_+, T_-)` by padding `u` with
//! `q`-blocks of zeros until some domain leaf `l_+` is a prefix, writing
//! `u = l_+ v`, and returning the class of `l_- v`. The classes whose length is a
//! multiple of `q` and whose `rho` is `i (mod p)` form the set `S_i`; `F_p` is
//! the stabilizer of these sets, and members preserve the residue of every
//! word pointwise.

use std::fmt;

use crate::error::{Error, Result};
use crate::fp::ord2;
use crate::group::TreeDiagram;
use crate::trees::{Node, Word};

/// A class `[u]` in `W^q`, stored by its shortest representative.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct WordClass {
    q: u32,
    rep: Word,
}

impl WordClass {
    /// The class of `w`; fails for words of the form `0^i`.
    pub fn canonical(w: &Word, q: u32) -> Result<Self> {
        if w.arity() != 2 {
            return Err(Error::ArityMismatch {
                left: w.arity(),
                right: 2,
            });
        }
        if q == 0 {
            return Err(Error::Precondition("block length must be positive".into()));
        }
        if w.is_all_zero() {
            return Err(Error::AllZeroWord);
        }
        let mut len = w.len();
        let q = q as usize;
        while len >= q && w.letters()[len - q..len].iter().all(|&l| l == 0) {
            len -= q;
        }
        Ok(WordClass {
            q: q as u32,
            rep: w.prefix(len),
        })
    }

    pub fn parse(s: &str, q: u32) -> Result<Self> {
        WordClass::canonical(&Word::binary(s)?, q)
    }

    pub fn q(&self) -> u32 {
        self.q
    }

    pub fn representative(&self) -> &Word {
        &self.rep
    }

    /// `[self] . d`.
    pub fn act(&self, d: &TreeDiagram) -> Result<WordClass> {
        if d.arity() != 2 {
            return Err(Error::ArityMismatch {
                left: d.arity(),
                right: 2,
            });
        }
        let mut u = self.rep.letters().to_vec();
        let mut node = d.domain().root();
        let mut depth = 0;
        let mut leaf_index = 0;
        while let Node::Caret(children) = node {
            if depth == u.len() {
                u.extend(std::iter::repeat(0).take(self.q as usize));
            }
            let letter = u[depth] as usize;
            leaf_index += children[..letter]
                .iter()
                .map(leaf_count)
                .sum::<usize>();
            node = &children[letter];
            depth += 1;
        }
        let image = d.range().leaf_words()[leaf_index].concat(&Word::new(2, u[depth..].to_vec())?);
        WordClass::canonical(&image, self.q)
    }

    /// Membership in `S_i`: length a multiple of `q` and `rho = i (mod p)`.
    pub fn in_s(&self, i: u64, p: u64) -> Result<bool> {
        let q = ord2(p)?;
        if q != self.q {
            return Err(Error::BlockMismatch {
                class_q: self.q,
                modulus_q: q,
            });
        }
        Ok(self.rep.len() % q as usize == 0 && self.rep.rho_mod(p)? == i % p)
    }
}

fn leaf_count(n: &Node) -> usize {
    match n {
        Node::Leaf => 1,
        Node::Caret(c) => c.iter().map(leaf_count).sum(),
    }
}

impl fmt::Display for WordClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{}]", self.rep)
    }
}

/// Checks pointwise residue preservation on every word `u` with
/// `|u| <= max_len`, `|u| = 0 (mod q)` and at least one letter 1.
pub fn stabilizes_sample(d: &TreeDiagram, p: u64, max_len: usize) -> Result<bool> {
    let q = ord2(p)?;
    for len in (q as usize..=max_len).step_by(q as usize) {
        for bits in 1u64..(1u64 << len) {
            let letters = (0..len).rev().map(|i| ((bits >> i) & 1) as u32).collect();
            let c = WordClass::canonical(&Word::new(2, letters)?, q)?;
            let residue = c.representative().rho_mod(p)?;
            let image = c.act(d)?;
            if image.representative().len() % q as usize != 0
                || image.representative().rho_mod(p)? != residue
            {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

/// For a non-member, a class `[l_+ 0^j]` whose residue changes under `d`;
/// `None` for members.
pub fn non_membership_witness(d: &TreeDiagram, p: u64) -> Result<Option<WordClass>> {
    let q = ord2(p)?;
    let r = d.reduce();
    let dom = r.domain().leaf_words();
    let ran = r.range().leaf_words();
    for (lp, lm) in dom.iter().zip(&ran) {
        if lp.is_all_zero() || lp.rho_mod(p)? == lm.rho_mod(p)? {
            continue;
        }
        let pad = (q as usize - lp.len() % q as usize) % q as usize;
        let u = lp.concat(&Word::zeros(2, pad));
        return WordClass::canonical(&u, q).map(Some);
    }
    Ok(None)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::group::{generator, phi_q};

    fn c(s: &str, q: u32) -> WordClass {
        WordClass::parse(s, q).unwrap()
    }

    #[test]
    fn canonical_examples() {
        assert_eq!(c("1000", 2).representative().to_string(), "10");
        assert_eq!(c("1", 3).representative().to_string(), "1");
        assert_eq!(c("0100", 2).representative().to_string(), "01");
        assert_eq!(c("0100", 3).representative().to_string(), "0100");
        assert_eq!(WordClass::parse("000", 2), Err(Error::AllZeroWord));
        assert_eq!(WordClass::parse("", 2), Err(Error::AllZeroWord));
    }

    #[test]
    fn action_of_x0_inverse() {
        let x0i = generator(2, 0).unwrap().inverse();
        for q in 2..=4 {
            assert_eq!(c("01", q).act(&x0i).unwrap(), c("001", q));
            let expected = format!("01{}", "0".repeat(q as usize - 1));
            assert_eq!(c("1", q).act(&x0i).unwrap(), c(&expected, q));
            assert_eq!(c("1", q).act(&TreeDiagram::identity(2)).unwrap(), c("1", q));
        }
    }

    #[test]
    fn membership_in_s() {
        assert!(c("10", 2).in_s(2, 3).unwrap());
        for i in 0..3 {
            assert!(!c("1", 2).in_s(i, 3).unwrap());
        }
        assert!(c("01", 2).in_s(1, 3).unwrap());
        assert_eq!(
            c("01", 3).in_s(1, 3),
            Err(Error::BlockMismatch {
                class_q: 3,
                modulus_q: 2
            })
        );
    }

    #[test]
    fn stabilizer_samples() {
        assert!(stabilizes_sample(&TreeDiagram::identity(2), 3, 8).unwrap());
        let ex3 = TreeDiagram::from_binary_words(
            &["00", "0100", "0101", "011", "1"],
            &["00", "01", "10", "110", "111"],
        )
        .unwrap();
        assert!(stabilizes_sample(&ex3, 3, 8).unwrap());
        assert!(!stabilizes_sample(&generator(2, 0).unwrap(), 3, 8).unwrap());
    }

    #[test]
    fn witnesses() {
        let x0 = generator(2, 0).unwrap();
        let w = non_membership_witness(&x0, 3).unwrap().unwrap();
        assert_eq!(w, c("01", 2));
        assert!(w.in_s(1, 3).unwrap());
        let image = w.act(&x0).unwrap();
        assert_eq!(image, c("10", 2));
        assert!(image.in_s(2, 3).unwrap());
        let member = phi_q(&generator(4, 0).unwrap(), 2).unwrap();
        assert_eq!(non_membership_witness(&member, 3).unwrap(), None);
        assert_eq!(
            non_membership_witness(&TreeDiagram::identity(2), 7).unwrap(),
            None
        );
    }
}
