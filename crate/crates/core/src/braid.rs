//! The braid-group action on rack tuples.
//!
//! `B_n` acts on `X^n` from the right by the Hurwitz moves
//!
//! ```text
//! (.., t_i, t_{i+1}, ..)^(sigma_i) = (.., t_{i+1}, t_i^{t_{i+1}}, ..)
//! ```
//!
//! [`orbit`] enumerates the orbit of a seed tuple by BFS, tracking for each
//! member the image in `S_n` of an access word from the seed. Schreier's
//! lemma then turns the orbit graph into generators for the image in `S_n`
//! of the stabilizer of the seed — the monodromy group that governs
//! factorization statistics downstream.

use std::collections::HashMap;

use num_bigint::BigUint;

use crate::error::{Error, Result};
use crate::perm::{classify_in_product, BlockStructure, Classification, Perm, PermGroup};
use crate::rack::{Elem, Rack};

/// Default ceiling on orbit sizes before a resource error is raised.
pub const DEFAULT_ORBIT_CAP: usize = 50_000_000;

/// A point of `X^n`: a fixed-length tuple of rack-element indices.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Debug)]
pub struct Tuple(pub Vec<Elem>);

impl Tuple {
    pub fn new(entries: Vec<usize>) -> Self {
        Tuple(entries.into_iter().map(|e| e as Elem).collect())
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn entries(&self) -> impl Iterator<Item = usize> + '_ {
        self.0.iter().map(|&e| e as usize)
    }

    pub fn as_slice(&self) -> &[Elem] {
        &self.0
    }

    /// Parses a comma-separated list of element indices.
    pub fn parse(text: &str) -> Result<Self> {
        let entries = text
            .split(',')
            .map(|tok| {
                tok.trim()
                    .parse::<usize>()
                    .map_err(|_| Error::structural(format!("bad tuple entry {tok:?}")))
            })
            .collect::<Result<Vec<usize>>>()?;
        Ok(Tuple::new(entries))
    }

    pub fn check_against(&self, rack: &Rack) -> Result<()> {
        for e in self.entries() {
            rack.check_elem(e)?;
        }
        Ok(())
    }
}

impl std::fmt::Display for Tuple {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let parts: Vec<String> = self.entries().map(|e| e.to_string()).collect();
        write!(f, "{}", parts.join(","))
    }
}

/// A braid word: signed generator letters, `+i` for `sigma_i` and `-i` for
/// its inverse, with `1 <= i <= n-1` for the ambient strand count.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct BraidWord {
    letters: Vec<i32>,
}

impl BraidWord {
    pub fn new(letters: Vec<i32>) -> Result<Self> {
        if letters.iter().any(|&l| l == 0) {
            return Err(Error::structural("braid letter 0 is not a generator"));
        }
        Ok(BraidWord { letters })
    }

    pub fn empty() -> Self {
        BraidWord {
            letters: Vec::new(),
        }
    }

    /// Parses a comma-separated list of signed letters, e.g. `"2,1,-2"`.
    pub fn parse(text: &str) -> Result<Self> {
        if text.trim().is_empty() {
            return Ok(BraidWord::empty());
        }
        let letters = text
            .split(',')
            .map(|tok| {
                tok.trim()
                    .parse::<i32>()
                    .map_err(|_| Error::structural(format!("bad braid letter {tok:?}")))
            })
            .collect::<Result<Vec<i32>>>()?;
        BraidWord::new(letters)
    }

    pub fn letters(&self) -> &[i32] {
        &self.letters
    }

    pub fn len(&self) -> usize {
        self.letters.len()
    }

    pub fn is_empty(&self) -> bool {
        self.letters.is_empty()
    }

    pub fn inverse(&self) -> Self {
        BraidWord {
            letters: self.letters.iter().rev().map(|&l| -l).collect(),
        }
    }

    pub fn check_strands(&self, n: usize) -> Result<()> {
        for &l in &self.letters {
            let i = l.unsigned_abs() as usize;
            if i < 1 || i >= n {
                return Err(Error::precondition(format!(
                    "letter {l} out of range for {n} strands"
                )));
            }
        }
        Ok(())
    }

    /// The image in `S_n` under `sigma_i -> (i i+1)`, composed in word
    /// order under the right-action convention.
    pub fn to_perm(&self, n: usize) -> Result<Perm> {
        self.check_strands(n)?;
        let mut acc = Perm::identity(n);
        for &l in &self.letters {
            let i = l.unsigned_abs() as usize;
            acc = acc.then(&Perm::transposition(n, i - 1, i)?);
        }
        Ok(acc)
    }
}

impl std::fmt::Display for BraidWord {
    /// `s2 s1 s2'` with a trailing apostrophe marking inverses.
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        if self.letters.is_empty() {
            return write!(f, "1");
        }
        let parts: Vec<String> = self
            .letters
            .iter()
            .map(|&l| {
                if l > 0 {
                    format!("s{l}")
                } else {
                    format!("s{}'", -l)
                }
            })
            .collect();
        write!(f, "{}", parts.join(" "))
    }
}

/// Applies `sigma_i` (or its inverse) to a tuple; `i` is 1-based.
pub fn apply_generator(rack: &Rack, t: &Tuple, i: usize, inverse: bool) -> Result<Tuple> {
    let n = t.len();
    if i < 1 || i >= n {
        return Err(Error::precondition(format!(
            "generator index {i} out of range for n = {n}"
        )));
    }
    t.check_against(rack)?;
    let mut out = t.clone();
    apply_generator_in_place(rack, &mut out.0, i, inverse);
    Ok(out)
}

#[inline]
pub(crate) fn apply_generator_in_place(rack: &Rack, t: &mut [Elem], i: usize, inverse: bool) {
    let a = t[i - 1] as usize;
    let b = t[i] as usize;
    if !inverse {
        t[i - 1] = b as Elem;
        t[i] = rack.op(a, b) as Elem;
    } else {
        // (a, b) <- (c, a) with c^a = b undoes sigma_i
        t[i - 1] = rack.op_inv(b, a) as Elem;
        t[i] = a as Elem;
    }
}

/// Applies a whole braid word, left to right.
pub fn apply_word(rack: &Rack, t: &Tuple, word: &BraidWord) -> Result<Tuple> {
    word.check_strands(t.len())?;
    t.check_against(rack)?;
    let mut out = t.clone();
    for &l in word.letters() {
        apply_generator_in_place(rack, &mut out.0, l.unsigned_abs() as usize, l < 0);
    }
    Ok(out)
}

/// The band word `R_{a,b} = s_{b-1} .. s_{a+1} s_a s_{a+1}' .. s_{b-1}'`
/// whose permutation image is the transposition `(a b)` (1-based) and which
/// fixes every quandle tuple with equal entries at `a` and `b`.
pub fn transposition_word(alpha: usize, beta: usize, n: usize) -> Result<BraidWord> {
    transposition_word_pow(alpha, beta, n, 1)
}

/// `R_{a,b}` with the middle letter raised to `power`; `power = 3` is the
/// variant whose cube fixes tuples of transpositions with intersecting
/// supports.
pub fn transposition_word_pow(
    alpha: usize,
    beta: usize,
    n: usize,
    power: usize,
) -> Result<BraidWord> {
    if alpha == 0 || alpha >= beta || beta > n {
        return Err(Error::precondition(format!(
            "need 1 <= alpha < beta <= n, got alpha={alpha}, beta={beta}, n={n}"
        )));
    }
    if power == 0 {
        return Err(Error::precondition("power must be positive"));
    }
    let mut letters = Vec::new();
    for i in ((alpha + 1)..beta).rev() {
        letters.push(i as i32);
    }
    for _ in 0..power {
        letters.push(alpha as i32);
    }
    for i in (alpha + 1)..beta {
        letters.push(-(i as i32));
    }
    BraidWord::new(letters)
}

/// Packs a tuple for visited-set keys: one byte per entry for racks of at
/// most 256 elements (always the case at desk scale), two otherwise.
fn pack(t: &[Elem], wide: bool) -> Box<[u8]> {
    if wide {
        let mut out = Vec::with_capacity(t.len() * 2);
        for &e in t {
            out.extend_from_slice(&e.to_le_bytes());
        }
        out.into_boxed_slice()
    } else {
        t.iter().map(|&e| e as u8).collect()
    }
}

/// The orbit of a seed tuple under `B_n` (or, when `colored`, under the
/// colored braid group acting on the component-pattern fiber of the seed).
///
/// Members are numbered in BFS order with the fixed expansion order
/// `sigma_1, .., sigma_{n-1}` followed by their inverses, so numbering is
/// deterministic. Each member carries the `S_n`-image of its access word:
/// `access[seed] = id` and `access[t^g] = access[t] * pi(g)` along every
/// traversed edge.
pub struct OrbitGraph {
    rack: Rack,
    seed: Tuple,
    colored: bool,
    cap: usize,
    members: Vec<Tuple>,
    access: Vec<Perm>,
    tree: OrbitTree,
    /// `edges[m * 2(n-1) + s]`: target of `sigma_{s+1}` from member `m`
    /// (slots `n-1..` hold the inverses); `u32::MAX` marks a move leaving
    /// the colored pattern fiber.
    edges: Vec<u32>,
}

enum OrbitTree {
    /// (parent member, signed letter) that discovered each non-seed member
    Bfs(Vec<(u32, i32)>),
    /// explicit access words, used by colored graphs whose members were
    /// discovered through tuples outside the fiber
    Explicit(Vec<Vec<i32>>),
}

const NO_EDGE: u32 = u32::MAX;

/// BFS closure of `seed` under the braid generators and their inverses.
///
/// For `colored`, the graph is restricted to the component-pattern fiber of
/// the seed. The fiber is a block, so its intersection with the full `B_n`
/// orbit is a single colored-braid-group orbit; it is obtained by filtering
/// the members of the full orbit, since a colored word may leave the fiber
/// transiently even when its endpoints lie inside it.
pub fn orbit(rack: &Rack, seed: &Tuple, colored: bool, cap: usize) -> Result<OrbitGraph> {
    seed.check_against(rack)?;
    if seed.is_empty() {
        return Err(Error::precondition("empty tuple has no braid action"));
    }
    let n = seed.len();
    let slots = 2 * (n - 1);
    let wide = rack.size() > 256;

    let mut index: HashMap<Box<[u8]>, u32> = HashMap::new();
    let mut members = vec![seed.clone()];
    let mut access = vec![Perm::identity(n)];
    let mut parents: Vec<(u32, i32)> = vec![(0, 0)];
    let mut edges: Vec<u32> = Vec::new();
    index.insert(pack(seed.as_slice(), wide), 0);

    let transpositions: Vec<Perm> = (1..n)
        .map(|i| Perm::transposition(n, i - 1, i).expect("adjacent transposition"))
        .collect();

    let mut head = 0usize;
    while head < members.len() {
        let current = members[head].clone();
        let current_access = access[head].clone();
        edges.resize(edges.len() + slots, NO_EDGE);
        for slot in 0..slots {
            let (i, inverse) = if slot < n - 1 {
                (slot + 1, false)
            } else {
                (slot - (n - 1) + 1, true)
            };
            let mut next = current.0.clone();
            apply_generator_in_place(rack, &mut next, i, inverse);
            let key = pack(&next, wide);
            let target = match index.get(&key) {
                Some(&t) => t,
                None => {
                    let t = members.len() as u32;
                    if members.len() >= cap {
                        return Err(Error::resource(format!(
                            "orbit cap {cap} exceeded; frontier size {}",
                            members.len() - head
                        )));
                    }
                    index.insert(key, t);
                    members.push(Tuple(next));
                    access.push(current_access.then(&transpositions[i - 1]));
                    let letter = if inverse { -(i as i32) } else { i as i32 };
                    parents.push((head as u32, letter));
                    t
                }
            };
            edges[head * slots + slot] = target;
        }
        head += 1;
    }

    let mut graph = OrbitGraph {
        rack: rack.clone(),
        seed: seed.clone(),
        colored: false,
        cap,
        members,
        access,
        tree: OrbitTree::Bfs(parents),
        edges,
    };
    debug_assert!(graph.check_access_coherence());
    if colored {
        graph = graph.restrict_to_pattern_fiber();
    }
    Ok(graph)
}

impl OrbitGraph {
    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn is_colored(&self) -> bool {
        self.colored
    }

    pub fn seed(&self) -> &Tuple {
        &self.seed
    }

    pub fn rack(&self) -> &Rack {
        &self.rack
    }

    pub fn members(&self) -> &[Tuple] {
        &self.members
    }

    pub fn access(&self, member: usize) -> &Perm {
        &self.access[member]
    }

    /// Target of `sigma_i^(+-1)` from a member, if within the graph.
    pub fn edge(&self, member: usize, i: usize, inverse: bool) -> Option<usize> {
        let n = self.seed.len();
        let slot = if inverse { n - 1 + i - 1 } else { i - 1 };
        let t = self.edges[member * 2 * (n - 1) + slot];
        (t != NO_EDGE).then_some(t as usize)
    }

    pub fn member_index(&self, t: &Tuple) -> Option<usize> {
        self.members.iter().position(|m| m == t)
    }

    /// Lexicographically least member: the canonical orbit representative.
    pub fn canonical_representative(&self) -> &Tuple {
        self.members.iter().min().expect("orbit is nonempty")
    }

    /// A braid word mapping the seed to a member; its permutation image is
    /// `access(member)`.
    pub fn witness_word(&self, member: usize) -> BraidWord {
        match &self.tree {
            OrbitTree::Bfs(parents) => {
                let mut letters = Vec::new();
                let mut m = member;
                while m != 0 {
                    let (parent, letter) = parents[m];
                    letters.push(letter);
                    m = parent as usize;
                }
                letters.reverse();
                BraidWord { letters }
            }
            OrbitTree::Explicit(words) => BraidWord {
                letters: words[member].clone(),
            },
        }
    }

    /// `access[seed] = id` and `access[t^g] = access[t] * pi(g)` along
    /// every tree edge of the BFS.
    fn check_access_coherence(&self) -> bool {
        let n = self.seed.len();
        if !self.access[0].is_identity() {
            return false;
        }
        match &self.tree {
            OrbitTree::Bfs(parents) => {
                for m in 1..self.len() {
                    let (parent, letter) = parents[m];
                    let i = letter.unsigned_abs() as usize;
                    let tau = Perm::transposition(n, i - 1, i).unwrap();
                    if self.access[parent as usize].then(&tau) != self.access[m] {
                        return false;
                    }
                }
            }
            OrbitTree::Explicit(words) => {
                for m in 0..self.len() {
                    let word = BraidWord {
                        letters: words[m].clone(),
                    };
                    match word.to_perm(n) {
                        Ok(p) if p == self.access[m] => {}
                        _ => return false,
                    }
                }
            }
        }
        true
    }

    /// Keeps only the members whose per-position component labels match the
    /// seed; the fiber of the component pattern is a block, so this is the
    /// colored-braid-group orbit of the seed.
    fn restrict_to_pattern_fiber(self) -> OrbitGraph {
        let comps = self.rack.components();
        let pattern: Vec<usize> = self.seed.entries().map(|e| comps.label(e)).collect();
        let n = self.seed.len();
        let slots = 2 * (n - 1);

        let mut new_of_old: Vec<u32> = vec![NO_EDGE; self.len()];
        let mut kept: Vec<usize> = Vec::new();
        for (m, member) in self.members.iter().enumerate() {
            let matches = member
                .entries()
                .zip(&pattern)
                .all(|(e, &want)| comps.label(e) == want);
            if matches {
                new_of_old[m] = kept.len() as u32;
                kept.push(m);
            }
        }

        let members: Vec<Tuple> = kept.iter().map(|&m| self.members[m].clone()).collect();
        let access: Vec<Perm> = kept.iter().map(|&m| self.access[m].clone()).collect();
        let words: Vec<Vec<i32>> = kept
            .iter()
            .map(|&m| self.witness_word(m).letters)
            .collect();
        let mut edges = vec![NO_EDGE; kept.len() * slots];
        for (new, &old) in kept.iter().enumerate() {
            for slot in 0..slots {
                let target = self.edges[old * slots + slot];
                if target != NO_EDGE {
                    edges[new * slots + slot] = new_of_old[target as usize];
                }
            }
        }

        let graph = OrbitGraph {
            rack: self.rack,
            seed: self.seed,
            colored: true,
            cap: self.cap,
            members,
            access,
            tree: OrbitTree::Explicit(words),
            edges,
        };
        debug_assert!(graph.check_access_coherence());
        graph
    }

    /// The image in `S_n` of the stabilizer of the seed, generated by the
    /// Schreier-generator images `access[t] * pi(g) * access[t^g]^{-1}`.
    ///
    /// For a colored graph the accepted edges alone do not generate the
    /// colored braid group, so the full orbit of the seed is enumerated
    /// internally; the stabilizer (and hence its image) is the same group
    /// either way because the component pattern fiber is a block.
    pub fn stabilizer_image(&self) -> Result<PermGroup> {
        if self.colored {
            let full = orbit(&self.rack, &self.seed, false, self.cap)?;
            return full.stabilizer_image();
        }
        let n = self.seed.len();
        let transpositions: Vec<Perm> = (1..n)
            .map(|i| Perm::transposition(n, i - 1, i).expect("adjacent transposition"))
            .collect();
        let mut gens: Vec<Perm> = Vec::new();
        let mut seen: std::collections::HashSet<Vec<usize>> = std::collections::HashSet::new();
        for m in 0..self.len() {
            for i in 1..n {
                let target = self
                    .edge(m, i, false)
                    .expect("full orbit graphs have all edges");
                let s = self.access[m]
                    .then(&transpositions[i - 1])
                    .then(&self.access[target].inverse());
                if s.is_identity() {
                    continue;
                }
                if seen.insert(s.images().collect()) {
                    gens.push(s);
                }
            }
        }
        PermGroup::from_generators(n, &gens)
    }
}

/// Lightweight full-orbit BFS that only tracks membership: calls `visit` on
/// every member once and returns the lexicographically least member. Used
/// for canonicalization where access permutations are not needed.
pub fn orbit_scan(
    rack: &Rack,
    seed: &[Elem],
    cap: usize,
    mut visit: impl FnMut(&[Elem]),
) -> Result<Vec<Elem>> {
    if seed.is_empty() {
        return Err(Error::precondition("empty tuple has no braid action"));
    }
    let n = seed.len();
    let wide = rack.size() > 256;
    let mut visited: std::collections::HashSet<Box<[u8]>> = std::collections::HashSet::new();
    visited.insert(pack(seed, wide));
    let mut queue: std::collections::VecDeque<Vec<Elem>> = std::collections::VecDeque::new();
    queue.push_back(seed.to_vec());
    let mut least = seed.to_vec();
    while let Some(current) = queue.pop_front() {
        visit(&current);
        if current < least {
            least = current.clone();
        }
        for i in 1..n {
            for inverse in [false, true] {
                let mut next = current.clone();
                apply_generator_in_place(rack, &mut next, i, inverse);
                let key = pack(&next, wide);
                if !visited.contains(&key) {
                    if visited.len() >= cap {
                        return Err(Error::resource(format!(
                            "orbit cap {cap} exceeded during canonicalization"
                        )));
                    }
                    visited.insert(key);
                    queue.push_back(next);
                }
            }
        }
    }
    Ok(least)
}

/// Everything the monodromy pipeline produces for one seed.
#[derive(Debug)]
pub struct MonodromyReport {
    /// entries of the seed per rack component (full component list)
    pub component_counts: Vec<usize>,
    /// do the seed entries generate the rack?
    pub generates: bool,
    pub orbit_size: usize,
    pub image_order: BigUint,
    pub classification: Classification,
    /// sizes of the nonempty blocks, in component order
    pub block_sizes: Vec<usize>,
    pub image: PermGroup,
}

/// Runs components -> orbit -> stabilizer image -> product classification.
pub fn classify_monodromy(rack: &Rack, seed: &Tuple, cap: usize) -> Result<MonodromyReport> {
    seed.check_against(rack)?;
    let comps = rack.components();
    let mut component_counts = vec![0usize; comps.count()];
    for e in seed.entries() {
        component_counts[comps.label(e)] += 1;
    }
    let entries: Vec<usize> = seed.entries().collect();
    let generates = rack.generates(&entries)?;

    let graph = orbit(rack, seed, false, cap)?;
    let image = graph.stabilizer_image()?;

    let mut blocks: Vec<Vec<usize>> = Vec::new();
    for j in 0..comps.count() {
        let block: Vec<usize> = (0..seed.len())
            .filter(|&pos| comps.label(seed.entries().nth(pos).unwrap()) == j)
            .collect();
        if !block.is_empty() {
            blocks.push(block);
        }
    }
    let structure = BlockStructure::new(seed.len(), blocks)?;
    let classification = classify_in_product(&image, &structure)?;

    Ok(MonodromyReport {
        component_counts,
        generates,
        orbit_size: graph.len(),
        image_order: image.order().clone(),
        classification,
        block_sizes: structure.sizes(),
        image,
    })
}
