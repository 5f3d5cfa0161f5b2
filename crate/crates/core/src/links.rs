//! Link diagrams from tree diagrams.
//!
//! For a reduced binary diagram of size `k` the plane graph `B(T_+, T_-)` has
//! one 4-valent vertex per caret: T_+ carets are vertices `0..k` (preorder)
//! and T_- carets are `k..2k`. Its edges are the internal tree edges, one edge
//! per leaf joining the leaf's parents in the two trees, one edge per gap
//! between consecutive leaves joining the two carets that split there, and one
//! edge joining the roots around the left of the strip.
//!
//! Darts are numbered `4 * vertex + slot`, with slots in clockwise order:
//!
//! * T_+ caret: parent (or the root edge), right child, gap edge, left child;
//! * T_- caret: parent (or the root edge), left child, gap edge, right child.
//!
//! Every vertex becomes a crossing whose two strands are slots `{0, 2}` and
//! `{1, 3}`. Sector `i` of a vertex is the corner between slots `i` and
//! `i + 1`; it is identified with dart `4 * vertex + i`.

use std::collections::HashMap;
use std::fmt::Write as _;

use crate::error::{Error, Result};
use crate::group::{generator, phi_q, TreeDiagram};
use crate::trees::{CaretSpan, Child};

/// A combinatorial map with every vertex of degree 4.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PlanarMap {
    alpha: Vec<usize>,
}

/// Faces of a [`PlanarMap`], each a cycle of sectors.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Faces {
    pub face_of: Vec<usize>,
    pub cycles: Vec<Vec<usize>>,
}

impl Faces {
    pub fn count(&self) -> usize {
        self.cycles.len()
    }
}

impl PlanarMap {
    /// Builds a map from the edge involution on darts.
    pub fn new(alpha: Vec<usize>) -> Result<Self> {
        if alpha.len() % 4 != 0 {
            return Err(Error::MalformedDiagram("dart count is not a multiple of 4".into()));
        }
        for (x, &y) in alpha.iter().enumerate() {
            if y >= alpha.len() || alpha[y] != x || y == x {
                return Err(Error::MalformedDiagram(format!("dart {x} is not paired")));
            }
        }
        Ok(PlanarMap { alpha })
    }

    pub fn vertex_count(&self) -> usize {
        self.alpha.len() / 4
    }

    pub fn edge_count(&self) -> usize {
        self.alpha.len() / 2
    }

    pub fn dart_count(&self) -> usize {
        self.alpha.len()
    }

    pub fn alpha(&self, dart: usize) -> usize {
        self.alpha[dart]
    }

    /// Next dart clockwise around the same vertex.
    pub fn sigma(&self, dart: usize) -> usize {
        dart - dart % 4 + (dart + 1) % 4
    }

    pub fn sigma_inv(&self, dart: usize) -> usize {
        dart - dart % 4 + (dart + 3) % 4
    }

    /// Face tracing: orbits of `alpha . sigma` on sectors.
    pub fn faces(&self) -> Faces {
        let n = self.alpha.len();
        let mut face_of = vec![usize::MAX; n];
        let mut cycles = Vec::new();
        for start in 0..n {
            if face_of[start] != usize::MAX {
                continue;
            }
            let id = cycles.len();
            let mut cycle = Vec::new();
            let mut x = start;
            while face_of[x] == usize::MAX {
                face_of[x] = id;
                cycle.push(x);
                x = self.alpha[self.sigma(x)];
            }
            cycles.push(cycle);
        }
        Faces { face_of, cycles }
    }

    /// `V - E + F`.
    pub fn euler_characteristic(&self) -> i64 {
        self.vertex_count() as i64 - self.edge_count() as i64 + self.faces().count() as i64
    }

    /// The two faces on either side of the edge through `dart`.
    pub fn faces_beside(&self, faces: &Faces, dart: usize) -> (usize, usize) {
        (faces.face_of[dart], faces.face_of[self.sigma_inv(dart)])
    }
}

/// Which strand passes over at the carets of each tree.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct Convention {
    pub plus_child_over: bool,
    pub minus_child_over: bool,
}

impl Convention {
    /// The child strand passes over at every caret of both trees.
    pub const STANDARD: Convention = Convention {
        plus_child_over: true,
        minus_child_over: true,
    };

    pub fn mirror(self) -> Convention {
        Convention {
            plus_child_over: !self.plus_child_over,
            minus_child_over: !self.minus_child_over,
        }
    }
}

impl Default for Convention {
    fn default() -> Self {
        Convention::STANDARD
    }
}

pub(crate) const PARENT: usize = 0;
pub(crate) const GAP: usize = 2;

/// `B(T_+, T_-)` with the caret data needed to read colors off the strip.
#[derive(Clone, Debug)]
pub struct JonesGraph {
    pub map: PlanarMap,
    pub plus: Vec<CaretSpan>,
    pub minus: Vec<CaretSpan>,
}

impl JonesGraph {
    pub fn size(&self) -> usize {
        self.plus.len()
    }

    /// Vertex of the `j`-th caret of T_+ or T_-.
    pub fn vertex(&self, minus: bool, j: usize) -> usize {
        if minus {
            self.plus.len() + j
        } else {
            j
        }
    }

    /// A sector of the unbounded face: right of the root edge, above T_+.
    pub fn unbounded_sector(&self) -> usize {
        0
    }

    /// The sector of the face enclosed by the root edge left of the strip.
    pub fn left_sector(&self) -> usize {
        3
    }

    /// The T_+ caret whose children meet at gap `s` (between leaves `s-1` and `s`).
    pub fn plus_caret_at_gap(&self, s: usize) -> Option<usize> {
        self.plus.iter().position(|c| c.split() == s)
    }

    pub fn link_diagram(&self, convention: Convention) -> LinkDiagram {
        let k = self.size();
        let over_even = (0..2 * k)
            .map(|v| {
                let child_over = if v < k {
                    convention.plus_child_over
                } else {
                    convention.minus_child_over
                };
                !child_over
            })
            .collect();
        LinkDiagram {
            map: self.map.clone(),
            over_even,
            unbounded: self.unbounded_sector(),
            free_loops: 0,
        }
    }
}

pub(crate) fn child_slot(minus: bool, side: usize) -> usize {
    match (minus, side) {
        (false, 0) => 3,
        (false, _) => 1,
        (true, 0) => 1,
        (true, _) => 3,
    }
}

/// Builds `B(T_+, T_-)`. Non-reduced diagrams are rejected unless
/// `allow_nonreduced` is set.
pub fn jones_graph(d: &TreeDiagram, allow_nonreduced: bool) -> Result<JonesGraph> {
    if d.arity() != 2 {
        return Err(Error::ArityMismatch {
            left: d.arity(),
            right: 2,
        });
    }
    if !allow_nonreduced && !d.is_reduced() {
        return Err(Error::MustReduce);
    }
    if d.size() == 0 {
        return Err(Error::TrivialElement);
    }
    let plus = d.domain().caret_spans();
    let minus = d.range().caret_spans();
    let k = plus.len();
    let mut alpha = vec![usize::MAX; 8 * k];
    let mut join = |a: usize, b: usize| {
        alpha[a] = b;
        alpha[b] = a;
    };
    let mut leaf_darts = vec![[usize::MAX; 2]; k + 1];
    for (t, spans) in [&plus, &minus].into_iter().enumerate() {
        let minus_tree = t == 1;
        let base = if minus_tree { k } else { 0 };
        for (j, span) in spans.iter().enumerate() {
            for (side, child) in span.children.iter().enumerate() {
                let dart = 4 * (base + j) + child_slot(minus_tree, side);
                match *child {
                    Child::Caret(c) => join(dart, 4 * (base + c) + PARENT),
                    Child::Leaf(i) => leaf_darts[i][t] = dart,
                }
            }
        }
    }
    for [a, b] in leaf_darts {
        join(a, b);
    }
    for (j, span) in plus.iter().enumerate() {
        let m = minus
            .iter()
            .position(|c| c.split() == span.split())
            .expect("each gap is split by exactly one caret of each tree");
        join(4 * j + GAP, 4 * (k + m) + GAP);
    }
    join(PARENT, 4 * k + PARENT);
    Ok(JonesGraph {
        map: PlanarMap::new(alpha)?,
        plus,
        minus,
    })
}

/// A link diagram: a 4-valent plane map whose vertices are crossings, plus any
/// number of crossingless unknotted circles.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LinkDiagram {
    map: PlanarMap,
    /// Per crossing: whether the over strand is slots `{0, 2}`.
    over_even: Vec<bool>,
    /// A sector in the unbounded face.
    unbounded: usize,
    free_loops: usize,
}

impl LinkDiagram {
    pub fn new(map: PlanarMap, over_even: Vec<bool>, unbounded: usize) -> Result<Self> {
        if over_even.len() != map.vertex_count() {
            return Err(Error::MalformedDiagram("one over/under flag per crossing".into()));
        }
        if unbounded >= map.dart_count() {
            return Err(Error::MalformedDiagram("unbounded sector out of range".into()));
        }
        Ok(LinkDiagram {
            map,
            over_even,
            unbounded,
            free_loops: 0,
        })
    }

    /// The crossingless diagram of `loops` disjoint circles.
    pub fn unlink(loops: usize) -> Self {
        LinkDiagram {
            map: PlanarMap { alpha: Vec::new() },
            over_even: Vec::new(),
            unbounded: 0,
            free_loops: loops,
        }
    }

    pub fn map(&self) -> &PlanarMap {
        &self.map
    }

    pub fn crossing_count(&self) -> usize {
        self.over_even.len()
    }

    pub fn free_loops(&self) -> usize {
        self.free_loops
    }

    pub fn over_is_even(&self, crossing: usize) -> bool {
        self.over_even[crossing]
    }

    /// The slots `(u, u + 2)` of the under strand.
    pub fn under_slots(&self, crossing: usize) -> (usize, usize) {
        if self.over_even[crossing] {
            (1, 3)
        } else {
            (0, 2)
        }
    }

    pub fn is_over(&self, dart: usize) -> bool {
        (dart % 2 == 0) == self.over_even[dart / 4]
    }

    pub fn unbounded_sector(&self) -> usize {
        self.unbounded
    }

    /// Faces of the diagram. A crossingless diagram has `free_loops + 1` faces,
    /// which are not represented by sectors.
    pub fn faces(&self) -> Faces {
        self.map.faces()
    }

    pub fn unbounded_face(&self, faces: &Faces) -> usize {
        faces.face_of[self.unbounded]
    }

    pub fn mirror(&self) -> Self {
        LinkDiagram {
            over_even: self.over_even.iter().map(|b| !b).collect(),
            ..self.clone()
        }
    }

    /// The dart across the crossing from `dart` along the same strand.
    pub fn opposite(dart: usize) -> usize {
        dart - dart % 4 + (dart + 2) % 4
    }

    /// Strand traversal: arrive through `dart`, leave through the opposite
    /// dart, arrive at the far end of that edge.
    fn next_arrival(&self, dart: usize) -> usize {
        self.map.alpha(LinkDiagram::opposite(dart))
    }

    /// Arrival-dart cycles, one per oriented component.
    fn oriented_cycles(&self) -> Vec<Vec<usize>> {
        let n = self.map.dart_count();
        let mut seen = vec![false; n];
        let mut out = Vec::new();
        for start in 0..n {
            if seen[start] {
                continue;
            }
            let mut cycle = Vec::new();
            let mut x = start;
            while !seen[x] {
                seen[x] = true;
                cycle.push(x);
                x = self.next_arrival(x);
            }
            out.push(cycle);
        }
        out
    }

    /// Number of link components.
    pub fn components(&self) -> usize {
        self.oriented_cycles().len() / 2 + self.free_loops
    }

    /// Arcs: maximal pieces of strand running from one undercrossing to the
    /// next. Returns the arc of every dart and the arc count.
    pub fn arcs(&self) -> (Vec<usize>, usize) {
        let n = self.map.dart_count();
        let mut parent: Vec<usize> = (0..n).collect();
        fn find(p: &mut [usize], x: usize) -> usize {
            let mut r = x;
            while p[r] != r {
                r = p[r];
            }
            let mut y = x;
            while p[y] != r {
                let next = p[y];
                p[y] = r;
                y = next;
            }
            r
        }
        let union = |a: usize, b: usize, p: &mut Vec<usize>| {
            let (ra, rb) = (find(p, a), find(p, b));
            p[ra.max(rb)] = ra.min(rb);
        };
        for x in 0..n {
            union(x, self.map.alpha(x), &mut parent);
            if self.is_over(x) {
                union(x, LinkDiagram::opposite(x), &mut parent);
            }
        }
        let mut ids = HashMap::new();
        let arc_of: Vec<usize> = (0..n)
            .map(|x| {
                let r = find(&mut parent, x);
                let next = ids.len();
                *ids.entry(r).or_insert(next)
            })
            .collect();
        (arc_of, ids.len() + self.free_loops)
    }

    /// Edge labels for the PD code, numbering edges along each oriented
    /// component. Returns the label of every dart and whether each dart is an
    /// arrival in the chosen orientation.
    fn pd_labels(&self) -> (Vec<usize>, Vec<bool>) {
        let n = self.map.dart_count();
        let mut label = vec![0usize; n];
        let mut arrival = vec![false; n];
        let mut next = 1;
        let mut run = |start: usize, label: &mut Vec<usize>, arrival: &mut Vec<bool>| {
            let mut x = start;
            loop {
                label[x] = next;
                label[self.map.alpha(x)] = next;
                arrival[x] = true;
                next += 1;
                x = self.next_arrival(x);
                if x == start {
                    break;
                }
            }
        };
        for c in 0..self.crossing_count() {
            let (u, _) = self.under_slots(c);
            if label[4 * c + u] == 0 {
                run(4 * c + u, &mut label, &mut arrival);
            }
            let incoming = if arrival[4 * c + u] { u } else { u + 2 };
            let b = 4 * c + (incoming + 3) % 4;
            if label[b] == 0 {
                run(b, &mut label, &mut arrival);
            }
        }
        (label, arrival)
    }

    /// Planar-diagram code with a versioned header recording the component count.
    pub fn pd_code(&self) -> String {
        let (label, arrival) = self.pd_labels();
        let mut s = format!("# thomp-pd v1 components={}\nPD[", self.components());
        for c in 0..self.crossing_count() {
            let (u, _) = self.under_slots(c);
            let incoming = if arrival[4 * c + u] { u } else { u + 2 };
            if c > 0 {
                s.push(',');
            }
            let l: Vec<usize> = (0..4)
                .map(|i| label[4 * c + (incoming + 4 - i) % 4])
                .collect();
            let _ = write!(s, "X[{},{},{},{}]", l[0], l[1], l[2], l[3]);
        }
        s.push(']');
        s
    }

    /// Parses PD text. The optional header sets the component count, which
    /// adds crossingless circles beyond those traced. The unbounded face is
    /// taken to be the face with the most sectors (lowest id on ties).
    pub fn parse_pd(text: &str) -> Result<Self> {
        let mut components = None;
        let mut body = String::new();
        let mut offset = 0;
        let mut body_start = None;
        for line in text.lines() {
            let trimmed = line.trim();
            if let Some(rest) = trimmed.strip_prefix('#') {
                for token in rest.split_whitespace() {
                    if let Some(v) = token.strip_prefix("components=") {
                        components = Some(v.parse::<usize>().map_err(|_| {
                            Error::parse(offset, format!("bad component count {v:?}"))
                        })?);
                    }
                }
            } else {
                body_start.get_or_insert(offset);
                body.push_str(line);
                body.push('\n');
            }
            offset += line.len() + 1;
        }
        let base = body_start.unwrap_or(0);
        let crossings = parse_pd_body(&body).map_err(|e| match e {
            Error::Parse { pos, msg } => Error::parse(pos + base, msg),
            other => other,
        })?;
        let n = crossings.len();
        let mut alpha = vec![usize::MAX; 4 * n];
        let mut seen: HashMap<u64, usize> = HashMap::new();
        for (c, x) in crossings.iter().enumerate() {
            // Counterclockwise a, b, c, d becomes clockwise slots a, d, c, b.
            for (slot, &lab) in [x[0], x[3], x[2], x[1]].iter().enumerate() {
                let dart = 4 * c + slot;
                match seen.remove(&lab) {
                    Some(other) => {
                        alpha[dart] = other;
                        alpha[other] = dart;
                    }
                    None => {
                        seen.insert(lab, dart);
                    }
                }
            }
        }
        if let Some(lab) = seen.keys().min() {
            return Err(Error::MalformedDiagram(format!(
                "edge label {lab} appears only once"
            )));
        }
        if n == 0 {
            return Ok(LinkDiagram::unlink(components.unwrap_or(1)));
        }
        let map = PlanarMap::new(alpha)?;
        if map.euler_characteristic() != 2 {
            return Err(Error::MalformedDiagram("PD code is not planar and connected".into()));
        }
        let faces = map.faces();
        let outer = (0..faces.count())
            .max_by_key(|&f| (faces.cycles[f].len(), std::cmp::Reverse(f)))
            .expect("faces exist");
        let mut d = LinkDiagram::new(map, vec![false; n], faces.cycles[outer][0])?;
        let traced = d.components();
        if let Some(total) = components {
            if total < traced {
                return Err(Error::MalformedDiagram(format!(
                    "header claims {total} components but {traced} are present"
                )));
            }
            d.free_loops = total - traced;
        }
        Ok(d)
    }
}

fn parse_pd_body(text: &str) -> Result<Vec<[u64; 4]>> {
    let t = text.trim_end();
    let lead = text.len() - text.trim_start().len();
    let t = t.trim_start();
    let inner = t
        .strip_prefix("PD[")
        .ok_or_else(|| Error::parse(lead, "expected \"PD[\""))?
        .strip_suffix(']')
        .ok_or_else(|| Error::parse(lead + t.len(), "expected closing ']'"))?;
    let mut out = Vec::new();
    let mut rest = inner;
    let mut pos = lead + 3;
    loop {
        let skip = rest.len() - rest.trim_start().len();
        rest = &rest[skip..];
        pos += skip;
        if rest.is_empty() {
            break;
        }
        let body = rest
            .strip_prefix("X[")
            .ok_or_else(|| Error::parse(pos, "expected \"X[\""))?;
        let close = body
            .find(']')
            .ok_or_else(|| Error::parse(pos, "unclosed crossing"))?;
        let labels: Vec<u64> = body[..close]
            .split(',')
            .map(|s| s.trim().parse::<u64>())
            .collect::<std::result::Result<_, _>>()
            .map_err(|_| Error::parse(pos + 2, "crossing labels must be positive integers"))?;
        if labels.len() != 4 || labels.contains(&0) {
            return Err(Error::parse(pos + 2, "a crossing needs four positive labels"));
        }
        out.push([labels[0], labels[1], labels[2], labels[3]]);
        let used = 2 + close + 1;
        rest = &body[close + 1..];
        pos += used;
        let skip = rest.len() - rest.trim_start().len();
        rest = &rest[skip..];
        pos += skip;
        if let Some(r) = rest.strip_prefix(',') {
            rest = r;
            pos += 1;
        } else if !rest.is_empty() {
            return Err(Error::parse(pos, "expected ',' between crossings"));
        }
    }
    Ok(out)
}

/// `L(T_+, T_-)` for an element; the identity gives the one-circle unknot.
pub fn link_of(d: &TreeDiagram, convention: Convention, allow_nonreduced: bool) -> Result<LinkDiagram> {
    if d.arity() == 2 && d.size() == 0 {
        return Ok(LinkDiagram::unlink(1));
    }
    Ok(jones_graph(d, allow_nonreduced)?.link_diagram(convention))
}

/// `phi_q(x_0)` of `F(2^q)`, reduced.
pub fn spine_element(q: u32) -> Result<TreeDiagram> {
    if q < 2 {
        return Err(Error::Precondition("q must be at least 2".into()));
    }
    Ok(phi_q(&generator(1 << q, 0)?, q)?.reduce())
}
