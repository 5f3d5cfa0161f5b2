//! Dehn p-colorings of link diagrams.
//!
//! A Dehn p-coloring labels the faces of a diagram by residues mod `p` so that
//! the unbounded face is 0 and, at each crossing, the two faces on one side of
//! the under strand add up to the same value as the two faces on the other
//! side. A coloring is trivial when every white face of the checkerboard is 0
//! and every black face has one common value.
//!
//! Solutions are counted from Smith forms over `Z/l^e` for each prime power
//! `l^e` dividing `p`, which stays correct for composite `p`. The count from
//! the Smith form over the integers is available for cross-checking.

use std::collections::VecDeque;

use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_traits::{One, Zero};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::fp::is_member;
use crate::group::TreeDiagram;
use crate::dyadic::mul_mod;
use crate::links::{jones_graph, Convention, Faces, LinkDiagram};
use crate::snf::{
    abs_determinant, from_i64, inverse_mod, local_smith, prime_power_factors, smith_normal_form,
    Matrix,
};

/// Face colors of a diagram: `true` for black.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Checkerboard {
    pub black: Vec<bool>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct DehnColoring {
    pub p: u64,
    /// Residue of every face, indexed by face id.
    pub faces: Vec<u64>,
}

/// All Dehn p-colorings of a diagram, counted, with a nontrivial one if any.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DehnSolutions {
    pub count: BigUint,
    pub nontrivial: Option<DehnColoring>,
}

fn check_modulus(p: u64) -> Result<()> {
    if p >= 2 {
        Ok(())
    } else {
        Err(Error::InvalidModulus(p))
    }
}

fn no_split_circles(l: &LinkDiagram) -> Result<()> {
    if l.crossing_count() > 0 && l.free_loops() > 0 {
        return Err(Error::Precondition(
            "diagrams mixing crossings with crossingless circles are not supported".into(),
        ));
    }
    Ok(())
}

/// The unique checkerboard coloring with a white unbounded face.
pub fn checkerboard(l: &LinkDiagram) -> Result<Checkerboard> {
    if l.crossing_count() == 0 {
        let mut black = vec![true; l.free_loops() + 1];
        black[0] = false;
        return Ok(Checkerboard { black });
    }
    let map = l.map();
    let faces = l.faces();
    let mut adjacent = vec![Vec::new(); faces.count()];
    for x in 0..map.dart_count() {
        let (a, b) = map.faces_beside(&faces, x);
        if a == b {
            return Err(Error::MalformedDiagram(format!(
                "face {a} lies on both sides of an edge"
            )));
        }
        adjacent[a].push(b);
    }
    let start = l.unbounded_face(&faces);
    let mut color: Vec<Option<bool>> = vec![None; faces.count()];
    color[start] = Some(false);
    let mut queue = VecDeque::from([start]);
    while let Some(f) = queue.pop_front() {
        let c = color[f].expect("queued faces are colored");
        for &g in &adjacent[f] {
            match color[g] {
                None => {
                    color[g] = Some(!c);
                    queue.push_back(g);
                }
                Some(x) if x == c => {
                    return Err(Error::MalformedDiagram(
                        "face adjacency is not bipartite".into(),
                    ))
                }
                Some(_) => {}
            }
        }
    }
    Ok(Checkerboard {
        black: color
            .into_iter()
            .map(|c| c.ok_or_else(|| Error::MalformedDiagram("disconnected faces".into())))
            .collect::<Result<_>>()?,
    })
}

/// One row per crossing plus a row pinning the unbounded face; columns are faces.
pub fn dehn_system(l: &LinkDiagram) -> Vec<Vec<i64>> {
    let faces = l.faces();
    let mut rows = Vec::with_capacity(l.crossing_count() + 1);
    for c in 0..l.crossing_count() {
        let mut row = vec![0; faces.count()];
        let (u, _) = l.under_slots(c);
        for (i, sign) in [(0, 1), (1, 1), (2, -1), (3, -1)] {
            row[faces.face_of[4 * c + (u + i) % 4]] += sign;
        }
        rows.push(row);
    }
    let mut pin = vec![0; faces.count()];
    pin[l.unbounded_face(&faces)] = 1;
    rows.push(pin);
    rows
}

pub fn is_trivial(c: &DehnColoring, cb: &Checkerboard) -> Result<bool> {
    if c.faces.len() != cb.black.len() {
        return Err(Error::MalformedDiagram(
            "coloring and checkerboard belong to different diagrams".into(),
        ));
    }
    let mut black_value = None;
    for (&v, &black) in c.faces.iter().zip(&cb.black) {
        if !black {
            if v != 0 {
                return Ok(false);
            }
        } else if *black_value.get_or_insert(v) != v {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Checks the crossing relations and the unbounded pin.
pub fn is_valid(l: &LinkDiagram, c: &DehnColoring) -> bool {
    if l.crossing_count() == 0 {
        return c.faces.first() == Some(&0);
    }
    let faces = l.faces();
    if c.faces.len() != faces.count() {
        return false;
    }
    let p = c.p;
    let f = |dart: usize| c.faces[faces.face_of[dart]];
    c.faces[l.unbounded_face(&faces)] == 0
        && (0..l.crossing_count()).all(|x| {
            let (u, _) = l.under_slots(x);
            let at = |i: usize| f(4 * x + (u + i) % 4);
            (at(0) + at(1)) % p == (at(2) + at(3)) % p
        })
}

pub fn dehn_colorings(l: &LinkDiagram, p: u64) -> Result<DehnSolutions> {
    check_modulus(p)?;
    no_split_circles(l)?;
    if l.crossing_count() == 0 {
        let m = l.free_loops();
        let nontrivial = (m >= 2).then(|| {
            let mut faces = vec![0; m + 1];
            faces[1] = 1;
            DehnColoring { p, faces }
        });
        return Ok(DehnSolutions {
            count: BigUint::from(p).pow(m as u32),
            nontrivial,
        });
    }
    let cb = checkerboard(l)?;
    let system = dehn_system(l);
    let mut count = BigUint::one();
    let mut nontrivial = None;
    // Solutions mod p split into solutions mod each prime power; a solution
    // mod l^e lifts to one mod p that vanishes mod the other factors.
    for (l_, e, m) in prime_power_factors(p) {
        let local = local_smith(&system, l_, e);
        count *= local.solution_count();
        if nontrivial.is_some() {
            continue;
        }
        let cofactor = p / m;
        let lift = cofactor * inverse_mod(cofactor % m, m).unwrap_or(1) % p;
        for g in local.solution_generators() {
            let faces = g.iter().map(|&x| mul_mod(x, lift, p)).collect();
            let c = DehnColoring { p, faces };
            if !is_trivial(&c, &cb)? {
                nontrivial = Some(c);
                break;
            }
        }
    }
    Ok(DehnSolutions { count, nontrivial })
}

/// The solution count from the Smith form of the system over the integers.
pub fn dehn_count_integer_smith(l: &LinkDiagram, p: u64) -> Result<BigUint> {
    check_modulus(p)?;
    no_split_circles(l)?;
    if l.crossing_count() == 0 {
        return Ok(BigUint::from(p).pow(l.free_loops() as u32));
    }
    let system = from_i64(&dehn_system(l));
    let n = system[0].len();
    let inv = smith_normal_form(&system).invariants();
    let bp = BigInt::from(p);
    let mut count = BigUint::from(p).pow((n - inv.len()) as u32);
    for d in &inv {
        count *= d.gcd(&bp).magnitude();
    }
    Ok(count)
}

/// The coloring read off the strip coloring of a member of `F_p`. For a gap
/// `s` with strip color `b`, the face left of the gap edge gets `b - 1` and the
/// face right of it `1 - b`; the face enclosed left of the strip gets 1.
pub fn coloring_from_strip(d: &TreeDiagram, p: u64) -> Result<DehnColoring> {
    if !is_member(d, p)? {
        return Err(Error::NotInSubgroup(format!("element is not in F_{p}")));
    }
    if !d.is_reduced() {
        return Err(Error::MustReduce);
    }
    let g = jones_graph(d, false)?;
    let faces: Faces = g.map.faces();
    let k = g.size();
    let leaves = d.domain().leaf_words();
    let mut value = vec![None; faces.count()];
    let mut set = |sector: usize, v: u64| -> Result<()> {
        let f = faces.face_of[sector];
        match value[f] {
            Some(old) if old != v => Err(Error::MalformedDiagram(format!(
                "face {f} receives two strip values"
            ))),
            _ => {
                value[f] = Some(v);
                Ok(())
            }
        }
    };
    set(g.unbounded_sector(), 0)?;
    set(g.left_sector(), 1 % p)?;
    for s in 1..=k {
        let b = leaves[s].rho_mod(p)?;
        let caret = g.plus_caret_at_gap(s).expect("every gap has a caret");
        let v = g.vertex(false, caret);
        set(4 * v + 2, (b + p - 1) % p)?;
        set(4 * v + 1, (p + 1 - b) % p)?;
    }
    let faces = value
        .into_iter()
        .map(|v| v.ok_or_else(|| Error::MalformedDiagram("face left uncolored".into())))
        .collect::<Result<Vec<_>>>()?;
    Ok(DehnColoring { p, faces })
}

/// Largest crossing count accepted by [`fox_colorings_bruteforce`].
pub const FOX_LIMIT: usize = 24;

/// Counts Fox p-colorings (arc labels with `2 * over = under_1 + under_2` at each
/// crossing) by exhaustive search with forward propagation.
pub fn fox_colorings_bruteforce(l: &LinkDiagram, p: u64) -> Result<BigUint> {
    check_modulus(p)?;
    no_split_circles(l)?;
    if l.crossing_count() > FOX_LIMIT {
        return Err(Error::SizeLimit {
            size: l.crossing_count(),
            limit: FOX_LIMIT,
        });
    }
    if l.crossing_count() == 0 {
        return Ok(BigUint::from(p).pow(l.free_loops() as u32));
    }
    let (arc_of, arcs) = l.arcs();
    let relations: Vec<[usize; 3]> = (0..l.crossing_count())
        .map(|c| {
            let (u, w) = l.under_slots(c);
            [arc_of[4 * c + (u + 1) % 4], arc_of[4 * c + u], arc_of[4 * c + w]]
        })
        .collect();
    let mut touching = vec![Vec::new(); arcs];
    for (i, r) in relations.iter().enumerate() {
        for &a in r {
            touching[a].push(i);
        }
    }
    let ctx = Fox {
        p,
        relations,
        touching,
    };
    let mut colors = vec![None; arcs];
    Ok(ctx.count(&mut colors))
}

struct Fox {
    p: u64,
    relations: Vec<[usize; 3]>,
    touching: Vec<Vec<usize>>,
}

impl Fox {
    fn holds(&self, o: u64, a: u64, b: u64) -> bool {
        (2 * o) % self.p == (a + b) % self.p
    }

    /// Assigns `arc = value` and everything it forces. Returns the arcs set,
    /// or `None` on a contradiction (after undoing its own assignments).
    fn assign(&self, colors: &mut [Option<u64>], arc: usize, value: u64) -> Option<Vec<usize>> {
        let p = self.p;
        let mut set = vec![arc];
        colors[arc] = Some(value);
        let mut queue = vec![arc];
        while let Some(a) = queue.pop() {
            for &r in &self.touching[a] {
                let [o, u1, u2] = self.relations[r];
                let forced = match (colors[o], colors[u1], colors[u2]) {
                    (Some(x), Some(y), Some(z)) => {
                        if self.holds(x, y, z) {
                            continue;
                        }
                        None
                    }
                    (Some(x), Some(y), None) => Some((u2, (2 * x + 2 * p - y) % p)),
                    (Some(x), None, Some(z)) => Some((u1, (2 * x + 2 * p - z) % p)),
                    (None, Some(y), Some(z)) if p % 2 == 1 => {
                        Some((o, ((y + z) % p) * ((p + 1) / 2) % p))
                    }
                    _ => continue,
                };
                match forced {
                    Some((arc, v)) => {
                        colors[arc] = Some(v);
                        set.push(arc);
                        queue.push(arc);
                    }
                    None => {
                        for &s in &set {
                            colors[s] = None;
                        }
                        return None;
                    }
                }
            }
        }
        Some(set)
    }

    fn count(&self, colors: &mut [Option<u64>]) -> BigUint {
        let Some(free) = colors.iter().position(Option::is_none) else {
            let ok = self.relations.iter().all(|&[o, a, b]| {
                self.holds(colors[o].unwrap(), colors[a].unwrap(), colors[b].unwrap())
            });
            return if ok { BigUint::one() } else { BigUint::zero() };
        };
        let mut total = BigUint::zero();
        for v in 0..self.p {
            if let Some(set) = self.assign(colors, free, v) {
                total += self.count(colors);
                for s in set {
                    colors[s] = None;
                }
            }
        }
        total
    }
}

/// `|det|` of the reduced Goeritz matrix built on the white faces.
pub fn determinant(l: &LinkDiagram) -> Result<BigUint> {
    no_split_circles(l)?;
    if l.crossing_count() == 0 {
        return Ok(if l.free_loops() <= 1 {
            BigUint::one()
        } else {
            BigUint::zero()
        });
    }
    let cb = checkerboard(l)?;
    let faces = l.faces();
    let white: Vec<usize> = (0..faces.count()).filter(|&f| !cb.black[f]).collect();
    let index = |f: usize| white.iter().position(|&w| w == f);
    let n = white.len();
    let mut g = vec![vec![BigInt::zero(); n]; n];
    for c in 0..l.crossing_count() {
        let first_white = if cb.black[faces.face_of[4 * c]] { 1 } else { 0 };
        let a = index(faces.face_of[4 * c + first_white]).expect("white face");
        let b = index(faces.face_of[4 * c + first_white + 2]).expect("white face");
        if a == b {
            continue;
        }
        let eta: i64 = if l.over_is_even(c) == (first_white == 0) { 1 } else { -1 };
        g[a][b] -= eta;
        g[b][a] -= eta;
        g[a][a] += eta;
        g[b][b] += eta;
    }
    let outer = index(l.unbounded_face(&faces)).expect("unbounded face is white");
    let reduced: Matrix = (0..n)
        .filter(|&i| i != outer)
        .map(|i| (0..n).filter(|&j| j != outer).map(|j| g[i][j].clone()).collect())
        .collect();
    Ok(abs_determinant(&reduced).magnitude().clone())
}

/// `|det|` of the Fox matrix with one row and one column removed. Defined
/// when the diagram has as many arcs as crossings.
pub fn fox_minor_determinant(l: &LinkDiagram) -> Result<BigUint> {
    no_split_circles(l)?;
    let n = l.crossing_count();
    if n == 0 {
        return determinant(l);
    }
    let (arc_of, arcs) = l.arcs();
    if arcs != n {
        return Err(Error::Precondition(format!(
            "{arcs} arcs for {n} crossings"
        )));
    }
    let mut m = vec![vec![BigInt::zero(); n]; n];
    for (c, row) in m.iter_mut().enumerate() {
        let (u, w) = l.under_slots(c);
        row[arc_of[4 * c + (u + 1) % 4]] += 2;
        row[arc_of[4 * c + u]] -= 1;
        row[arc_of[4 * c + w]] -= 1;
    }
    let minor: Matrix = m[..n - 1].iter().map(|r| r[..n - 1].to_vec()).collect();
    Ok(abs_determinant(&minor).magnitude().clone())
}

/// The link of an element under the standard convention.
pub fn element_link(d: &TreeDiagram) -> Result<LinkDiagram> {
    crate::links::link_of(d, Convention::STANDARD, false)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::group::generator;

    const FIG8: &str = "PD[X[4,2,5,1],X[8,6,1,5],X[6,3,7,4],X[2,7,3,8]]";

    fn ex3() -> TreeDiagram {
        TreeDiagram::from_binary_words(
            &["00", "0100", "0101", "011", "1"],
            &["00", "01", "10", "110", "111"],
        )
        .unwrap()
    }

    fn ex7() -> TreeDiagram {
        TreeDiagram::from_binary_words(
            &[
                "00", "01000", "01001", "010100", "010101", "010110", "010111", "011", "1",
            ],
            &[
                "00", "01", "10", "110", "111000", "111001", "111010", "111011", "1111",
            ],
        )
        .unwrap()
    }

    fn big(n: u64) -> BigUint {
        BigUint::from(n)
    }

    #[test]
    fn checkerboards() {
        let cb = checkerboard(&LinkDiagram::unlink(1)).unwrap();
        assert_eq!(cb.black, [false, true]);
        let l = element_link(&ex3()).unwrap();
        assert_eq!(checkerboard(&l).unwrap().black.len(), 10);
        let fig8 = LinkDiagram::parse_pd(FIG8).unwrap();
        let cb = checkerboard(&fig8).unwrap();
        assert_eq!(cb.black.len(), 6);
        assert_eq!(cb.black.iter().filter(|&&b| b).count(), 3);
    }

    #[test]
    fn trivial_colorings() {
        let cb = Checkerboard {
            black: vec![false, true, true, false],
        };
        let c = |faces: Vec<u64>| DehnColoring { p: 5, faces };
        assert!(is_trivial(&c(vec![0; 4]), &cb).unwrap());
        assert!(is_trivial(&c(vec![0, 2, 2, 0]), &cb).unwrap());
        assert!(!is_trivial(&c(vec![0, 2, 3, 0]), &cb).unwrap());
        assert!(!is_trivial(&c(vec![1, 2, 2, 0]), &cb).unwrap());
        assert!(is_trivial(&c(vec![0; 3]), &cb).is_err());
    }

    #[test]
    fn solver_examples() {
        let l3 = element_link(&ex3()).unwrap();
        let s = dehn_colorings(&l3, 3).unwrap();
        assert_eq!(s.count, big(9));
        let c = s.nontrivial.unwrap();
        assert!(is_valid(&l3, &c));
        let fig8 = LinkDiagram::parse_pd(FIG8).unwrap();
        let s5 = dehn_colorings(&fig8, 5).unwrap();
        assert_eq!(s5.count, big(25));
        assert!(is_valid(&fig8, s5.nontrivial.as_ref().unwrap()));
        let s3 = dehn_colorings(&fig8, 3).unwrap();
        assert_eq!(s3.count, big(3));
        assert!(s3.nontrivial.is_none());
        for p in [3, 5, 7, 9, 15] {
            for l in [&l3, &fig8] {
                assert_eq!(
                    dehn_colorings(l, p).unwrap().count,
                    dehn_count_integer_smith(l, p).unwrap()
                );
            }
        }
        let unknot = dehn_colorings(&LinkDiagram::unlink(1), 7).unwrap();
        assert_eq!(unknot.count, big(7));
        assert!(unknot.nontrivial.is_none());
    }

    #[test]
    fn strip_colorings_are_dehn_colorings() {
        let l3 = element_link(&ex3()).unwrap();
        let c = coloring_from_strip(&ex3(), 3).unwrap();
        assert!(is_valid(&l3, &c));
        assert!(!is_trivial(&c, &checkerboard(&l3).unwrap()).unwrap());
        let l7 = element_link(&ex7()).unwrap();
        let c = coloring_from_strip(&ex7(), 7).unwrap();
        assert!(is_valid(&l7, &c));
        assert!(!is_trivial(&c, &checkerboard(&l7).unwrap()).unwrap());
        assert!(matches!(
            coloring_from_strip(&generator(2, 0).unwrap(), 3),
            Err(Error::NotInSubgroup(_))
        ));
        assert_eq!(
            coloring_from_strip(&TreeDiagram::identity(2), 3),
            Err(Error::TrivialElement)
        );
    }

    #[test]
    fn fox_counts() {
        assert_eq!(fox_colorings_bruteforce(&LinkDiagram::unlink(1), 5).unwrap(), big(5));
        let l3 = element_link(&ex3()).unwrap();
        assert_eq!(fox_colorings_bruteforce(&l3, 3).unwrap(), big(9));
        let fig8 = LinkDiagram::parse_pd(FIG8).unwrap();
        assert_eq!(fox_colorings_bruteforce(&fig8, 5).unwrap(), big(25));
        assert_eq!(fox_colorings_bruteforce(&fig8, 3).unwrap(), big(3));
        let l7 = element_link(&ex7()).unwrap();
        assert_eq!(fox_colorings_bruteforce(&l7, 7).unwrap(), big(49));
    }

    #[test]
    fn determinants() {
        assert_eq!(determinant(&LinkDiagram::unlink(1)).unwrap(), big(1));
        let l3 = element_link(&ex3()).unwrap();
        assert_eq!(determinant(&l3).unwrap(), big(3));
        assert_eq!(fox_minor_determinant(&l3).unwrap(), big(3));
        let l7 = element_link(&ex7()).unwrap();
        assert_eq!(determinant(&l7).unwrap(), big(7));
        assert_eq!(fox_minor_determinant(&l7).unwrap(), big(7));
        let fig8 = LinkDiagram::parse_pd(FIG8).unwrap();
        assert_eq!(determinant(&fig8).unwrap(), big(5));
        assert_eq!(determinant(&fig8.mirror()).unwrap(), big(5));
    }
}
