//! Seeded random trees, diagrams and subgroup members.

use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::error::Result;
use crate::fp::ord2;
use crate::group::{generator, phi_q, TreeDiagram};
use crate::trees::NaryTree;

/// Independent generator for sample `index` of a run seeded with `seed`.
pub fn sample_rng(seed: u64, index: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(index);
    rng
}

/// A tree grown by attaching `carets` carets at uniformly chosen leaves.
pub fn random_tree<R: Rng>(rng: &mut R, arity: u32, carets: usize) -> NaryTree {
    let caret = NaryTree::caret(arity);
    let mut t = NaryTree::leaf(arity);
    for _ in 0..carets {
        let i = rng.gen_range(0..t.leaf_count());
        t = t.attach(i, &caret).expect("leaf index in range");
    }
    t
}

/// A pair of random trees with `carets` carets each, reduced.
pub fn random_diagram<R: Rng>(rng: &mut R, arity: u32, carets: usize) -> TreeDiagram {
    TreeDiagram::new(
        random_tree(rng, arity, carets),
        random_tree(rng, arity, carets),
    )
    .expect("equal sizes")
    .reduce()
}

/// The images `phi_q(x_0), ..., phi_q(x_{2^q - 1})`, reduced; they generate `F_p`.
pub fn member_generators(q: u32) -> Result<Vec<TreeDiagram>> {
    let n = 1u32 << q;
    (0..n)
        .map(|i| Ok(phi_q(&generator(n, i)?, q)?.reduce()))
        .collect()
}

/// A random word of length `1..=max_len` in the given generators and their
/// inverses, evaluated.
pub fn random_word_element<R: Rng>(
    rng: &mut R,
    gens: &[TreeDiagram],
    max_len: usize,
) -> Result<TreeDiagram> {
    let len = rng.gen_range(1..=max_len.max(1));
    let mut acc = TreeDiagram::identity(gens[0].arity());
    for _ in 0..len {
        let g = &gens[rng.gen_range(0..gens.len())];
        acc = if rng.gen_bool(0.5) {
            acc.multiply(g)?
        } else {
            acc.multiply(&g.inverse())?
        };
    }
    Ok(acc)
}

/// Samples non-trivial members of `F_p` as short words in its generators.
pub struct MemberSampler {
    gens: Vec<TreeDiagram>,
    max_len: usize,
}

impl MemberSampler {
    pub fn new(p: u64, max_len: usize) -> Result<Self> {
        Ok(MemberSampler {
            gens: member_generators(ord2(p)?)?,
            max_len,
        })
    }

    pub fn sample<R: Rng>(&self, rng: &mut R) -> Result<TreeDiagram> {
        loop {
            let d = random_word_element(rng, &self.gens, self.max_len)?;
            if d.size() > 0 {
                return Ok(d);
            }
        }
    }
}
