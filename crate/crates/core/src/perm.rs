//! Exact permutation-group algebra on small degrees.
//!
//! Everything acts on the right: a permutation maps point `p` to
//! `images()[p]`, and `p.then(q)` means "apply `p`, then `q`". This matches
//! the right action of braid groups on tuples, so no convention conversion
//! happens at the braid boundary.
//!
//! [`PermGroup`] carries a base and strong generating set built by a
//! deterministic (non-randomized) Schreier–Sims run; group orders are exact
//! [`BigUint`]s since products of factorials overflow machine words quickly.

use std::collections::HashSet;
use std::fmt;

use num_bigint::BigUint;
use num_traits::One;
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};

/// A permutation of `{0, .., n-1}` stored as its image array.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Perm {
    images: Vec<u16>,
}

impl Perm {
    pub fn identity(degree: usize) -> Self {
        Perm {
            images: (0..degree as u16).collect(),
        }
    }

    /// Builds a permutation from its image array, checking bijectivity.
    pub fn from_images(images: &[usize]) -> Result<Self> {
        let n = images.len();
        if n > u16::MAX as usize {
            return Err(Error::structural(format!("degree {n} too large")));
        }
        let mut seen = vec![false; n];
        for &x in images {
            if x >= n || seen[x] {
                return Err(Error::structural(format!(
                    "image array {images:?} is not a permutation"
                )));
            }
            seen[x] = true;
        }
        Ok(Perm {
            images: images.iter().map(|&x| x as u16).collect(),
        })
    }

    /// The transposition `(a b)` on `degree` points.
    pub fn transposition(degree: usize, a: usize, b: usize) -> Result<Self> {
        if a >= degree || b >= degree || a == b {
            return Err(Error::precondition(format!(
                "transposition ({a} {b}) invalid at degree {degree}"
            )));
        }
        let mut p = Perm::identity(degree);
        p.images.swap(a, b);
        Ok(p)
    }

    /// Builds a permutation from disjoint cycles over 0-based points.
    pub fn from_cycles(degree: usize, cycles: &[Vec<usize>]) -> Result<Self> {
        let mut p = Perm::identity(degree);
        let mut touched = vec![false; degree];
        for cyc in cycles {
            for w in 0..cyc.len() {
                let from = cyc[w];
                let to = cyc[(w + 1) % cyc.len()];
                if from >= degree || touched[from] {
                    return Err(Error::structural(format!(
                        "bad cycle {cyc:?} at degree {degree}"
                    )));
                }
                touched[from] = true;
                p.images[from] = to as u16;
            }
        }
        // the writes above may not form a permutation if cycles overlap
        Perm::from_images(&p.images.iter().map(|&x| x as usize).collect::<Vec<_>>())
    }

    /// Parses cycle notation, 1-based in text: `"(1 2)(3 4 5)"`.
    /// `"()"`, `"e"` and `"id"` denote the identity.
    pub fn parse_cycles(text: &str, degree: usize) -> Result<Self> {
        let t = text.trim();
        if t == "()" || t == "e" || t == "id" || t.is_empty() {
            return Ok(Perm::identity(degree));
        }
        let mut cycles = Vec::new();
        let mut rest = t;
        while !rest.is_empty() {
            let open = rest
                .find('(')
                .ok_or_else(|| Error::structural(format!("expected '(' in {text:?}")))?;
            let close = rest
                .find(')')
                .ok_or_else(|| Error::structural(format!("unbalanced ')' in {text:?}")))?;
            let body = &rest[open + 1..close];
            let mut cyc = Vec::new();
            for tok in body.split(|c: char| c == ',' || c.is_whitespace()) {
                if tok.is_empty() {
                    continue;
                }
                let v: usize = tok
                    .parse()
                    .map_err(|_| Error::structural(format!("bad point {tok:?} in {text:?}")))?;
                if v == 0 || v > degree {
                    return Err(Error::structural(format!(
                        "point {v} out of range 1..={degree}"
                    )));
                }
                cyc.push(v - 1);
            }
            if !cyc.is_empty() {
                cycles.push(cyc);
            }
            rest = &rest[close + 1..];
        }
        Perm::from_cycles(degree, &cycles)
    }

    pub fn degree(&self) -> usize {
        self.images.len()
    }

    #[inline]
    pub fn apply(&self, p: usize) -> usize {
        self.images[p] as usize
    }

    pub fn images(&self) -> impl Iterator<Item = usize> + '_ {
        self.images.iter().map(|&x| x as usize)
    }

    pub fn is_identity(&self) -> bool {
        self.images.iter().enumerate().all(|(i, &x)| i as u16 == x)
    }

    /// Right composition: apply `self`, then `other`.
    pub fn then(&self, other: &Perm) -> Perm {
        debug_assert_eq!(self.degree(), other.degree());
        Perm {
            images: self
                .images
                .iter()
                .map(|&x| other.images[x as usize])
                .collect(),
        }
    }

    pub fn inverse(&self) -> Perm {
        let mut inv = vec![0u16; self.images.len()];
        for (i, &x) in self.images.iter().enumerate() {
            inv[x as usize] = i as u16;
        }
        Perm { images: inv }
    }

    /// Conjugate `self` by `c` (relabels points through `c`).
    pub fn conjugate_by(&self, c: &Perm) -> Perm {
        c.inverse().then(self).then(c)
    }

    /// Nontrivial cycles, each starting at its least point, sorted by it.
    pub fn cycles(&self) -> Vec<Vec<usize>> {
        let n = self.degree();
        let mut seen = vec![false; n];
        let mut out = Vec::new();
        for start in 0..n {
            if seen[start] || self.apply(start) == start {
                seen[start] = true;
                continue;
            }
            let mut cyc = vec![start];
            seen[start] = true;
            let mut p = self.apply(start);
            while p != start {
                seen[p] = true;
                cyc.push(p);
                p = self.apply(p);
            }
            out.push(cyc);
        }
        out
    }

    /// Multiset of cycle lengths including fixed points, ascending.
    pub fn cycle_type(&self) -> Vec<usize> {
        let mut lens: Vec<usize> = self.cycles().iter().map(|c| c.len()).collect();
        let moved: usize = lens.iter().sum();
        lens.extend(std::iter::repeat(1).take(self.degree() - moved));
        lens.sort_unstable();
        lens
    }

    pub fn is_even(&self) -> bool {
        // parity = (moved points - number of nontrivial cycles) mod 2
        let cycles = self.cycles();
        let moved: usize = cycles.iter().map(|c| c.len()).sum();
        (moved - cycles.len()) % 2 == 0
    }

    /// Restriction to a union of cycles contained in `points`; `points` must
    /// be setwise invariant.
    pub fn restrict_to(&self, points: &[usize]) -> Result<Perm> {
        let mut pos = vec![usize::MAX; self.degree()];
        for (slot, &p) in points.iter().enumerate() {
            pos[p] = slot;
        }
        let mut images = Vec::with_capacity(points.len());
        for &p in points {
            let q = self.apply(p);
            if q >= self.degree() || pos[q] == usize::MAX {
                return Err(Error::precondition(format!(
                    "point set not invariant under {self}"
                )));
            }
            images.push(pos[q]);
        }
        Perm::from_images(&images)
    }

    pub fn order(&self) -> u64 {
        self.cycle_type()
            .iter()
            .fold(1u64, |acc, &l| num_integer::lcm(acc, l as u64))
    }
}

impl fmt::Display for Perm {
    /// Cycle notation, 1-based, `()` for the identity.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let cycles = self.cycles();
        if cycles.is_empty() {
            return write!(f, "()");
        }
        for cyc in cycles {
            write!(f, "(")?;
            for (i, p) in cyc.iter().enumerate() {
                if i > 0 {
                    write!(f, " ")?;
                }
                write!(f, "{}", p + 1)?;
            }
            write!(f, ")")?;
        }
        Ok(())
    }
}

impl fmt::Debug for Perm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Perm[{}]", self)
    }
}

struct Level {
    point: usize,
    /// indices into the strong generator list of generators fixing every
    /// earlier base point
    gen_ids: Vec<usize>,
    /// transversal[p] = Some(u) with point^u = p
    transversal: Vec<Option<Perm>>,
    /// fundamental orbit in BFS discovery order
    orbit: Vec<usize>,
}

/// A permutation group with exact order and fast membership, built from a
/// base and strong generating set.
pub struct PermGroup {
    degree: usize,
    generators: Vec<Perm>,
    base: Vec<usize>,
    strong: Vec<Perm>,
    levels: Vec<Level>,
    order: BigUint,
}

impl PermGroup {
    pub fn trivial(degree: usize) -> Self {
        PermGroup::from_generators(degree, &[]).expect("trivial group")
    }

    /// Deterministic Schreier–Sims over the given generators.
    ///
    /// All generators must share `degree`; the resulting stabilizer chain
    /// gives the exact order and `O(n^2)`-per-query membership.
    pub fn from_generators(degree: usize, generators: &[Perm]) -> Result<Self> {
        for g in generators {
            if g.degree() != degree {
                return Err(Error::precondition(format!(
                    "generator degree {} does not match {}",
                    g.degree(),
                    degree
                )));
            }
        }
        let mut gens: Vec<Perm> = Vec::new();
        let mut seen = HashSet::new();
        for g in generators {
            if !g.is_identity() && seen.insert(g.images.clone()) {
                gens.push(g.clone());
            }
        }

        let mut group = PermGroup {
            degree,
            generators: gens.clone(),
            base: Vec::new(),
            strong: Vec::new(),
            levels: Vec::new(),
            order: BigUint::one(),
        };
        for g in gens {
            group.insert_strong(g);
        }
        group.schreier_sims();
        group.order = group
            .levels
            .iter()
            .map(|l| BigUint::from(l.orbit.len()))
            .product();
        Ok(group)
    }

    /// The full symmetric group on `degree` points.
    pub fn symmetric(degree: usize) -> Self {
        let mut gens = Vec::new();
        if degree >= 2 {
            gens.push(Perm::transposition(degree, 0, 1).unwrap());
        }
        if degree >= 3 {
            let cycle: Vec<usize> = (1..degree).chain(std::iter::once(0)).collect();
            gens.push(Perm::from_images(&cycle).unwrap());
        }
        PermGroup::from_generators(degree, &gens).unwrap()
    }

    /// The alternating group on `degree` points.
    pub fn alternating(degree: usize) -> Self {
        let mut gens = Vec::new();
        if degree >= 3 {
            for i in 2..degree {
                gens.push(Perm::from_cycles(degree, &[vec![0, 1, i]]).unwrap());
            }
        }
        PermGroup::from_generators(degree, &gens).unwrap()
    }

    fn insert_strong(&mut self, g: Perm) {
        if g.is_identity() {
            return;
        }
        // make sure some base point is moved by g
        if self.base.iter().all(|&b| g.apply(b) == b) {
            let moved = (0..self.degree)
                .find(|&p| g.apply(p) != p)
                .expect("non-identity permutation moves a point");
            self.base.push(moved);
            self.levels.push(Level {
                point: moved,
                gen_ids: Vec::new(),
                transversal: Vec::new(),
                orbit: Vec::new(),
            });
        }
        let id = self.strong.len();
        self.strong.push(g);
        for (i, level) in self.levels.iter_mut().enumerate() {
            let fixes_prefix = self.base[..i]
                .iter()
                .all(|&b| self.strong[id].apply(b) == b);
            if fixes_prefix {
                level.gen_ids.push(id);
            }
        }
    }

    fn recompute_level(&mut self, i: usize) {
        let point = self.levels[i].point;
        let mut transversal: Vec<Option<Perm>> = vec![None; self.degree];
        let mut orbit = vec![point];
        transversal[point] = Some(Perm::identity(self.degree));
        let mut head = 0;
        while head < orbit.len() {
            let p = orbit[head];
            head += 1;
            let u = transversal[p].clone().unwrap();
            for &gid in &self.levels[i].gen_ids {
                let g = &self.strong[gid];
                let q = g.apply(p);
                if transversal[q].is_none() {
                    transversal[q] = Some(u.then(g));
                    orbit.push(q);
                }
            }
        }
        self.levels[i].transversal = transversal;
        self.levels[i].orbit = orbit;
    }

    /// Sift `h` through levels `from..`; returns the residue and the first
    /// level index at which sifting stopped (`levels.len()` if it ran out).
    fn sift_from(&self, from: usize, h: &Perm) -> (Perm, usize) {
        let mut h = h.clone();
        for i in from..self.levels.len() {
            let p = h.apply(self.levels[i].point);
            match &self.levels[i].transversal[p] {
                Some(u) => h = h.then(&u.inverse()),
                None => return (h, i),
            }
        }
        (h, self.levels.len())
    }

    fn schreier_sims(&mut self) {
        for i in 0..self.levels.len() {
            self.recompute_level(i);
        }
        if self.levels.is_empty() {
            return;
        }
        let mut i = self.levels.len() - 1;
        'outer: loop {
            // verify level i: every Schreier generator must sift below
            let orbit = self.levels[i].orbit.clone();
            let gen_ids = self.levels[i].gen_ids.clone();
            for &p in &orbit {
                let u = self.levels[i].transversal[p].clone().unwrap();
                for &gid in &gen_ids {
                    let g = self.strong[gid].clone();
                    let q = g.apply(p);
                    let uq = self.levels[i].transversal[q].clone().unwrap();
                    let s = u.then(&g).then(&uq.inverse());
                    if s.is_identity() {
                        continue;
                    }
                    let (residue, j) = self.sift_from(i + 1, &s);
                    if !residue.is_identity() {
                        self.insert_strong(residue);
                        let j = j.min(self.levels.len() - 1);
                        for l in i + 1..=j {
                            self.recompute_level(l);
                        }
                        i = j;
                        continue 'outer;
                    }
                }
            }
            if i == 0 {
                break;
            }
            i -= 1;
        }
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn order(&self) -> &BigUint {
        &self.order
    }

    /// The generators the group was built from (deduplicated, identities
    /// dropped).
    pub fn generators(&self) -> &[Perm] {
        &self.generators
    }

    pub fn base(&self) -> &[usize] {
        &self.base
    }

    /// Exact membership via sifting.
    pub fn contains(&self, p: &Perm) -> Result<bool> {
        if p.degree() != self.degree {
            return Err(Error::precondition(format!(
                "degree mismatch: {} vs {}",
                p.degree(),
                self.degree
            )));
        }
        let (residue, _) = self.sift_from(0, p);
        Ok(residue.is_identity())
    }

    pub fn is_symmetric_group(&self) -> bool {
        self.order == factorial(self.degree)
    }

    pub fn is_alternating_group(&self) -> bool {
        if self.degree < 2 {
            return false;
        }
        // the unique index-2 subgroup of S_n is A_n
        self.order.clone() * 2u32 == factorial(self.degree)
            && self.generators.iter().all(|g| g.is_even())
    }

    /// Visits every element exactly once, in the deterministic order given
    /// by the stabilizer-chain transversals.
    ///
    /// Sifting factors every element as u^(m-1) then .. then u^(0), so the
    /// walk starts at the deepest level.
    pub fn for_each_element<F: FnMut(&Perm)>(&self, mut f: F) {
        fn rec<F: FnMut(&Perm)>(group: &PermGroup, level: usize, acc: Perm, f: &mut F) {
            if level == 0 {
                f(&acc);
                return;
            }
            let level = level - 1;
            for &p in &group.levels[level].orbit {
                let u = group.levels[level].transversal[p].as_ref().unwrap();
                rec(group, level, acc.then(u), f);
            }
        }
        rec(self, self.levels.len(), Perm::identity(self.degree), &mut f);
    }

    /// Uniformly random element (independent uniform transversal choices).
    pub fn random_element(&self, rng: &mut ChaCha8Rng) -> Perm {
        let mut acc = Perm::identity(self.degree);
        for level in (0..self.levels.len()).rev() {
            let p = self.levels[level].orbit[rng.gen_range(0..self.levels[level].orbit.len())];
            let u = self.levels[level].transversal[p].as_ref().unwrap();
            acc = acc.then(u);
        }
        acc
    }
}

impl fmt::Debug for PermGroup {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "PermGroup(degree={}, order={}, base={:?})",
            self.degree, self.order, self.base
        )
    }
}

pub fn factorial(n: usize) -> BigUint {
    (1..=n as u64).map(BigUint::from).product()
}

/// An ordered partition of `{0, .., n-1}` into blocks `D_1, .., D_k`.
#[derive(Clone, Debug)]
pub struct BlockStructure {
    degree: usize,
    blocks: Vec<Vec<usize>>,
    /// block index of each point
    assignment: Vec<usize>,
}

impl BlockStructure {
    pub fn new(degree: usize, blocks: Vec<Vec<usize>>) -> Result<Self> {
        let mut assignment = vec![usize::MAX; degree];
        for (j, block) in blocks.iter().enumerate() {
            for &p in block {
                if p >= degree {
                    return Err(Error::structural(format!("block point {p} out of range")));
                }
                if assignment[p] != usize::MAX {
                    return Err(Error::structural(format!("blocks overlap at point {p}")));
                }
                assignment[p] = j;
            }
        }
        if assignment.contains(&usize::MAX) {
            return Err(Error::structural("blocks do not cover all points"));
        }
        Ok(BlockStructure {
            degree,
            blocks,
            assignment,
        })
    }

    /// Consecutive blocks of the given sizes: `D_1 = {0..n_1}`, etc.
    pub fn contiguous(sizes: &[usize]) -> Self {
        let mut blocks = Vec::with_capacity(sizes.len());
        let mut next = 0;
        for &s in sizes {
            blocks.push((next..next + s).collect());
            next += s;
        }
        BlockStructure::new(next, blocks).expect("contiguous blocks are a partition")
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn sizes(&self) -> Vec<usize> {
        self.blocks.iter().map(|b| b.len()).collect()
    }

    pub fn blocks(&self) -> &[Vec<usize>] {
        &self.blocks
    }

    pub fn block_of(&self, point: usize) -> usize {
        self.assignment[point]
    }
}

/// How a subgroup sits inside `S_{n_1} x .. x S_{n_k}`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Classification {
    /// every generator maps each block to itself
    pub respects_blocks: bool,
    /// the group is all of `S_{n_1} x .. x S_{n_k}`
    pub is_full_product: bool,
    /// the group contains `A_{n_1} x .. x A_{n_k}`
    pub contains_alt_product: bool,
    /// every generator is an even permutation of the full point set
    pub inside_even_part: bool,
    /// GF(2)-rank of the per-block sign vectors of the generators; `None`
    /// when the blocks are not respected (no per-block sign is defined)
    pub sign_image_rank: Option<usize>,
}

/// Classifies `h` against the product of symmetric groups on `blocks`.
pub fn classify_in_product(h: &PermGroup, blocks: &BlockStructure) -> Result<Classification> {
    if h.degree() != blocks.degree() {
        return Err(Error::precondition(format!(
            "group degree {} does not match block degree {}",
            h.degree(),
            blocks.degree()
        )));
    }
    let respects_blocks = h.generators().iter().all(|g| {
        (0..h.degree()).all(|p| blocks.block_of(g.apply(p)) == blocks.block_of(p))
    });
    let inside_even_part = h.generators().iter().all(|g| g.is_even());

    let product_order: BigUint = blocks.sizes().iter().map(|&s| factorial(s)).product();
    let is_full_product = respects_blocks && *h.order() == product_order;

    let mut contains_alt_product = true;
    'blocks: for block in blocks.blocks() {
        if block.len() < 3 {
            continue;
        }
        // (b0 b1 bi) for i >= 2 generate the alternating group on the block
        for i in 2..block.len() {
            let c = Perm::from_cycles(h.degree(), &[vec![block[0], block[1], block[i]]])?;
            if !h.contains(&c)? {
                contains_alt_product = false;
                break 'blocks;
            }
        }
    }

    let sign_image_rank = if respects_blocks {
        let mut rows: Vec<u64> = Vec::new();
        for g in h.generators() {
            let mut row = 0u64;
            for (j, block) in blocks.blocks().iter().enumerate() {
                let restricted = g.restrict_to(block)?;
                if !restricted.is_even() {
                    row |= 1 << j;
                }
            }
            rows.push(row);
        }
        Some(gf2_rank(&mut rows))
    } else {
        None
    };

    // cheap internal consistency: full product => contains the alternating
    // product => order at least prod(n_j!)/2^k
    if is_full_product {
        assert!(
            contains_alt_product,
            "full product must contain the alternating product"
        );
    }
    if contains_alt_product {
        let k = blocks.blocks().len() as u32;
        let lower = product_order.clone() / BigUint::from(2u32).pow(k);
        assert!(
            *h.order() >= lower,
            "group containing the alternating product is too small"
        );
    }

    Ok(Classification {
        respects_blocks,
        is_full_product,
        contains_alt_product,
        inside_even_part,
        sign_image_rank,
    })
}

fn gf2_rank(rows: &mut [u64]) -> usize {
    let mut rank = 0;
    for bit in 0..64 {
        let Some(pivot) = (rank..rows.len()).find(|&r| rows[r] >> bit & 1 == 1) else {
            continue;
        };
        rows.swap(rank, pivot);
        for r in 0..rows.len() {
            if r != rank && rows[r] >> bit & 1 == 1 {
                rows[r] ^= rows[rank];
            }
        }
        rank += 1;
    }
    rank
}

fn binomial(n: usize, k: usize) -> u128 {
    let k = k.min(n - k);
    let mut acc: u128 = 1;
    for i in 0..k {
        acc = acc * (n - i) as u128 / (i + 1) as u128;
    }
    acc
}

/// Is `h` transitive on `k`-element subsets of its point set?
///
/// Decided by enumerating the orbit of `{0, .., k-1}` and comparing with
/// `C(n, k)`.
pub fn k_homogeneous(h: &PermGroup, k: usize) -> Result<bool> {
    let n = h.degree();
    if k > n {
        return Err(Error::precondition(format!("k={k} out of range 0..={n}")));
    }
    if n > 64 {
        return Err(Error::resource("k-subset orbits supported up to degree 64"));
    }
    if k == 0 || k == n {
        return Ok(true);
    }
    let target = binomial(n, k);
    let seed: u64 = (1u64 << k) - 1;
    let mut seen: HashSet<u64> = HashSet::new();
    let mut stack = vec![seed];
    seen.insert(seed);
    while let Some(mask) = stack.pop() {
        for g in h.generators() {
            let mut image = 0u64;
            for p in 0..n {
                if mask >> p & 1 == 1 {
                    image |= 1 << g.apply(p);
                }
            }
            if seen.insert(image) {
                stack.push(image);
            }
        }
    }
    Ok(seen.len() as u128 == target)
}

/// Instance report for the homogeneity dichotomy: a `floor(n/2)`-homogeneous
/// subgroup of `S_n` should be `A_n` or `S_n`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HomogeneityVerdict {
    pub half_homogeneous: bool,
    pub is_symmetric: bool,
    pub is_alternating: bool,
    /// homogeneity implies the dichotomy on this instance
    pub consistent: bool,
}

pub fn check_homogeneity_dichotomy(h: &PermGroup) -> Result<HomogeneityVerdict> {
    let n = h.degree();
    let half_homogeneous = k_homogeneous(h, n / 2)?;
    let is_symmetric = h.is_symmetric_group();
    let is_alternating = h.is_alternating_group();
    Ok(HomogeneityVerdict {
        half_homogeneous,
        is_symmetric,
        is_alternating,
        consistent: !half_homogeneous || is_symmetric || is_alternating,
    })
}

/// How [`invariably_generates`] explores conjugator tuples.
#[derive(Clone, Copy, Debug)]
pub enum InvariableMode {
    /// All conjugator tuples; refused above `max_degree` (default 8).
    Exhaustive { max_degree: usize },
    /// `samples` seeded random conjugator tuples.
    Sampled { samples: usize, seed: u64 },
}

impl Default for InvariableMode {
    fn default() -> Self {
        InvariableMode::Exhaustive { max_degree: 8 }
    }
}

/// Do the given subgroups invariably generate the full symmetric group?
///
/// True iff for every tuple of conjugators (one per subgroup, the first
/// fixed to the identity without loss of generality) the conjugated
/// subgroups together generate `S_n`, checked by order.
pub fn invariably_generates(subgroups: &[Vec<Perm>], mode: InvariableMode) -> Result<bool> {
    if subgroups.is_empty() {
        return Err(Error::precondition("no subgroups given"));
    }
    let degree = subgroups[0]
        .first()
        .map(|g| g.degree())
        .ok_or_else(|| Error::precondition("subgroup without generators"))?;
    for sub in subgroups {
        for g in sub {
            if g.degree() != degree {
                return Err(Error::precondition("mixed degrees among subgroups"));
            }
        }
    }
    let full = factorial(degree);
    let generates = |conjugators: &[Perm]| -> bool {
        let mut gens: Vec<Perm> = subgroups[0].clone();
        for (sub, c) in subgroups[1..].iter().zip(conjugators) {
            gens.extend(sub.iter().map(|g| g.conjugate_by(c)));
        }
        let group = PermGroup::from_generators(degree, &gens).expect("degrees checked");
        *group.order() == full
    };

    match mode {
        InvariableMode::Exhaustive { max_degree } => {
            if degree > max_degree {
                return Err(Error::resource(format!(
                    "exhaustive invariable generation capped at degree {max_degree}, got {degree}"
                )));
            }
            if subgroups.len() == 1 {
                return Ok(generates(&[]));
            }
            let all: Vec<Perm> = {
                let mut v = Vec::new();
                PermGroup::symmetric(degree).for_each_element(|p| v.push(p.clone()));
                v.sort_by(|a, b| a.images.cmp(&b.images));
                v
            };
            let slots = subgroups.len() - 1;
            let mut indices = vec![0usize; slots];
            loop {
                let conjugators: Vec<Perm> = indices.iter().map(|&i| all[i].clone()).collect();
                if !generates(&conjugators) {
                    return Ok(false);
                }
                // odometer increment
                let mut slot = 0;
                loop {
                    if slot == slots {
                        return Ok(true);
                    }
                    indices[slot] += 1;
                    if indices[slot] < all.len() {
                        break;
                    }
                    indices[slot] = 0;
                    slot += 1;
                }
            }
        }
        InvariableMode::Sampled { samples, seed } => {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let sym = PermGroup::symmetric(degree);
            for _ in 0..samples {
                let conjugators: Vec<Perm> = (1..subgroups.len())
                    .map(|_| sym.random_element(&mut rng))
                    .collect();
                if !generates(&conjugators) {
                    return Ok(false);
                }
            }
            Ok(true)
        }
    }
}
