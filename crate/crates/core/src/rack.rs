//! Finite braided sets, racks, and quandles as explicit operation tables.
//!
//! A rack is a set with a binary operation `x^y` such that every column
//! `x -> x^y` is a bijection and `(z^x)^y = (z^y)^(x^y)` holds for all
//! triples. Racks are exactly the self-distributive solutions of the
//! set-theoretic Yang–Baxter equation via `R(x, y) = (y, x^y)`, and both
//! encodings are supported with an exhaustive validator.
//!
//! Elements are dense indices `0..size` and all tables are row-major flat
//! arrays, which keeps the orbit BFS hot loops cache-friendly.

use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::group::FiniteGroupTable;
use crate::perm::{Perm, PermGroup};

/// Rack element index; racks are capped at 2^16 elements.
pub type Elem = u16;

/// A finite rack: operation table, precomputed inverse columns, and the
/// quandle flag (`x^x = x` everywhere).
#[derive(Clone, PartialEq, Eq)]
pub struct Rack {
    size: usize,
    /// op[x * size + y] = x^y
    op: Vec<Elem>,
    /// inv[x * size + y] = the z with z^y = x
    inv: Vec<Elem>,
    quandle: bool,
    name: Option<String>,
}

#[derive(Serialize, Deserialize)]
struct RackFile {
    size: usize,
    op: Vec<Vec<usize>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    name: Option<String>,
}

impl Rack {
    /// Builds a rack from `rows[x][y] = x^y`, checking the rack laws.
    pub fn new(rows: Vec<Vec<usize>>) -> Result<Self> {
        let size = rows.len();
        if size == 0 || size > Elem::MAX as usize {
            return Err(Error::structural(format!("unsupported rack size {size}")));
        }
        let mut op = vec![0 as Elem; size * size];
        for (x, row) in rows.iter().enumerate() {
            if row.len() != size {
                return Err(Error::structural("rack table is not square"));
            }
            for (y, &v) in row.iter().enumerate() {
                if v >= size {
                    return Err(Error::structural(format!(
                        "entry {v} out of range at ({x},{y})"
                    )));
                }
                op[x * size + y] = v as Elem;
            }
        }
        // each column x -> x^y must be a bijection
        let mut inv = vec![Elem::MAX; size * size];
        for y in 0..size {
            for x in 0..size {
                let v = op[x * size + y] as usize;
                if inv[v * size + y] != Elem::MAX {
                    return Err(Error::structural(format!(
                        "column {y} is not a bijection"
                    )));
                }
                inv[v * size + y] = x as Elem;
            }
        }
        // self-distributivity on all triples
        for z in 0..size {
            for x in 0..size {
                for y in 0..size {
                    let lhs = op[op[z * size + x] as usize * size + y];
                    let xy = op[x * size + y] as usize;
                    let rhs = op[op[z * size + y] as usize * size + xy];
                    if lhs != rhs {
                        return Err(Error::structural(format!(
                            "self-distributivity fails at ({z},{x},{y})"
                        )));
                    }
                }
            }
        }
        let quandle = (0..size).all(|x| op[x * size + x] == x as Elem);
        Ok(Rack {
            size,
            op,
            inv,
            quandle,
            name: None,
        })
    }

    pub fn with_name(mut self, name: impl Into<String>) -> Self {
        self.name = Some(name.into());
        self
    }

    /// The trivial rack on `k` elements: `x^y = x`.
    pub fn trivial(k: usize) -> Self {
        let rows = (0..k).map(|x| vec![x; k]).collect();
        Rack::new(rows)
            .expect("trivial rack")
            .with_name(format!("t{k}"))
    }

    /// The unique nontrivial rack on two elements: both columns swap.
    pub fn two_element_nontrivial() -> Self {
        Rack::new(vec![vec![1, 1], vec![0, 0]])
            .expect("nontrivial 2-element rack")
            .with_name("n")
    }

    /// `x^y = sigma(x)` for every `y`; a rack for any permutation `sigma`.
    pub fn permutation_rack(sigma: &Perm) -> Self {
        let k = sigma.degree();
        let rows = (0..k).map(|x| vec![sigma.apply(x); k]).collect();
        Rack::new(rows).expect("permutation rack")
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let file: RackFile =
            serde_json::from_str(text).map_err(|e| Error::structural(format!("rack JSON: {e}")))?;
        if file.op.len() != file.size {
            return Err(Error::structural("declared size does not match table"));
        }
        let mut rack = Rack::new(file.op)?;
        rack.name = file.name;
        Ok(rack)
    }

    pub fn to_json(&self) -> String {
        let rows = (0..self.size)
            .map(|x| (0..self.size).map(|y| self.op(x, y)).collect())
            .collect();
        serde_json::to_string(&RackFile {
            size: self.size,
            op: rows,
            name: self.name.clone(),
        })
        .expect("rack serialization")
    }

    pub fn size(&self) -> usize {
        self.size
    }

    pub fn is_quandle(&self) -> bool {
        self.quandle
    }

    pub fn name(&self) -> Option<&str> {
        self.name.as_deref()
    }

    /// `x^y`
    #[inline]
    pub fn op(&self, x: usize, y: usize) -> usize {
        self.op[x * self.size + y] as usize
    }

    /// The `z` with `z^y = x`.
    #[inline]
    pub fn op_inv(&self, x: usize, y: usize) -> usize {
        self.inv[x * self.size + y] as usize
    }

    pub fn check_elem(&self, e: usize) -> Result<()> {
        if e >= self.size {
            return Err(Error::precondition(format!(
                "element {e} out of range for rack of size {}",
                self.size
            )));
        }
        Ok(())
    }

    /// The rack encoded as a braided set via `R(x, y) = (y, x^y)`.
    pub fn to_braided(&self) -> BraidedSet {
        let mut r = Vec::with_capacity(self.size * self.size);
        for x in 0..self.size {
            for y in 0..self.size {
                r.push((y as Elem, self.op[x * self.size + y]));
            }
        }
        BraidedSet {
            size: self.size,
            r,
        }
    }

    /// Reads a rack back out of a self-distributive braided set.
    pub fn from_braided(b: &BraidedSet) -> Result<Self> {
        let report = b.validate();
        if !report.is_braided || !report.is_self_distributive {
            return Err(Error::structural(
                "braided set is not a self-distributive solution",
            ));
        }
        let rows = (0..b.size)
            .map(|x| (0..b.size).map(|y| b.r(x, y).1 as usize).collect())
            .collect();
        Rack::new(rows)
    }

    /// Product rack on pairs, `(a, b)^(c, d) = (a^c, b^d)`; the pair
    /// `(a, b)` gets index `a * |Y| + b`.
    pub fn product(x: &Rack, y: &Rack) -> Result<Rack> {
        let n = x.size * y.size;
        if n > Elem::MAX as usize {
            return Err(Error::resource(format!("product rack size {n} too large")));
        }
        let rows = (0..n)
            .map(|p| {
                let (a, b) = (p / y.size, p % y.size);
                (0..n)
                    .map(|q| {
                        let (c, d) = (q / y.size, q % y.size);
                        x.op(a, c) * y.size + y.op(b, d)
                    })
                    .collect()
            })
            .collect();
        Rack::new(rows)
    }

    /// Connected components: the weakly connected components of the
    /// Schreier graph with edges `(x, x^y)`, which are also the fibers of
    /// the trivialization.
    pub fn components(&self) -> ComponentLabeling {
        let mut parent: Vec<usize> = (0..self.size).collect();
        fn find(parent: &mut [usize], mut x: usize) -> usize {
            while parent[x] != x {
                parent[x] = parent[parent[x]];
                x = parent[x];
            }
            x
        }
        for x in 0..self.size {
            for y in 0..self.size {
                let a = find(&mut parent, x);
                let b = find(&mut parent, self.op(x, y));
                if a != b {
                    parent[a.max(b)] = a.min(b);
                }
            }
        }
        // canonical labels in order of first appearance
        let mut label_of_root = vec![usize::MAX; self.size];
        let mut labels = vec![0usize; self.size];
        let mut sizes = Vec::new();
        for x in 0..self.size {
            let root = find(&mut parent, x);
            if label_of_root[root] == usize::MAX {
                label_of_root[root] = sizes.len();
                sizes.push(0);
            }
            labels[x] = label_of_root[root];
            sizes[labels[x]] += 1;
        }
        ComponentLabeling { labels, sizes }
    }

    pub fn is_connected(&self) -> bool {
        self.components().count() == 1
    }

    /// The inner permutation `x -> x^y` of column `y`.
    pub fn inner_perm(&self, y: usize) -> Perm {
        let images: Vec<usize> = (0..self.size).map(|x| self.op(x, y)).collect();
        Perm::from_images(&images).expect("rack columns are bijections")
    }

    /// The group generated by all inner permutations, acting on the rack
    /// elements from the right.
    pub fn inner_group(&self) -> PermGroup {
        let gens: Vec<Perm> = (0..self.size).map(|y| self.inner_perm(y)).collect();
        PermGroup::from_generators(self.size, &gens).expect("matching degrees")
    }

    /// Multiplicative order `m_e` of the inner permutation of `e`.
    pub fn element_inn_order(&self, e: usize) -> Result<usize> {
        self.check_elem(e)?;
        Ok(self.inner_perm(e).order() as usize)
    }

    /// The central word: each element `e` repeated `m_e` times, in
    /// ascending element order. Any reordering represents the same central
    /// element of the structure semigroup, so a fixed order is chosen for
    /// reproducibility.
    pub fn central_word(&self) -> Vec<Elem> {
        let mut word = Vec::new();
        for e in 0..self.size {
            let m = self.element_inn_order(e).expect("element in range");
            word.extend(std::iter::repeat(e as Elem).take(m));
        }
        word
    }

    /// Subrack generated by `seed`, sorted. Closure under the forward
    /// operation suffices: on a finite rack each column restricted to a
    /// forward-closed set is a bijection of it.
    pub fn subrack_closure(&self, seed: &[usize]) -> Result<Vec<usize>> {
        let mut seen = vec![false; self.size];
        let mut elems = Vec::new();
        for &s in seed {
            self.check_elem(s)?;
            if !seen[s] {
                seen[s] = true;
                elems.push(s);
            }
        }
        let mut head = 0;
        while head < elems.len() {
            let a = elems[head];
            head += 1;
            for i in 0..elems.len() {
                let b = elems[i];
                for v in [self.op(a, b), self.op(b, a)] {
                    if !seen[v] {
                        seen[v] = true;
                        elems.push(v);
                    }
                }
            }
        }
        elems.sort_unstable();
        Ok(elems)
    }

    /// Do the given elements generate the rack? The empty set generates
    /// nothing by convention.
    pub fn generates(&self, seed: &[usize]) -> Result<bool> {
        if seed.is_empty() {
            return Ok(false);
        }
        Ok(self.subrack_closure(seed)?.len() == self.size)
    }
}

impl std::fmt::Debug for Rack {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(
            f,
            "Rack(size={}, quandle={}{})",
            self.size,
            self.quandle,
            self.name
                .as_deref()
                .map(|n| format!(", name={n}"))
                .unwrap_or_default()
        )
    }
}

/// Conjugation rack on the union of the conjugacy classes of the given
/// seeds: elements are group elements, `x^y = y^{-1} x y`. Returns the rack
/// together with the embedding rack index -> group element index.
pub fn conjugation_rack(
    group: &FiniteGroupTable,
    class_seeds: &[usize],
    allow_identity: bool,
) -> Result<(Rack, Vec<usize>)> {
    let mut elems: Vec<usize> = Vec::new();
    for &s in class_seeds {
        if s >= group.order() {
            return Err(Error::precondition(format!("seed {s} out of range")));
        }
        if s == group.identity() && !allow_identity {
            return Err(Error::precondition(
                "identity seed rejected (pass allow_identity to opt in)",
            ));
        }
        elems.extend(group.conjugacy_class(s));
    }
    elems.sort_unstable();
    elems.dedup();
    let index_of: std::collections::HashMap<usize, usize> =
        elems.iter().enumerate().map(|(i, &g)| (g, i)).collect();
    let rows = elems
        .iter()
        .map(|&x| {
            elems
                .iter()
                .map(|&y| index_of[&group.conj(x, y)])
                .collect()
        })
        .collect();
    let rack = Rack::new(rows)?;
    debug_assert!(rack.is_quandle());
    Ok((rack, elems))
}

/// Component labels of a rack, constant exactly on the Inn-orbits.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ComponentLabeling {
    labels: Vec<usize>,
    sizes: Vec<usize>,
}

impl ComponentLabeling {
    pub fn count(&self) -> usize {
        self.sizes.len()
    }

    pub fn label(&self, x: usize) -> usize {
        self.labels[x]
    }

    pub fn labels(&self) -> &[usize] {
        &self.labels
    }

    pub fn sizes(&self) -> &[usize] {
        &self.sizes
    }

    /// The trivialization quotient: a trivial rack with one element per
    /// component.
    pub fn quotient(&self) -> Rack {
        Rack::trivial(self.count())
    }
}

/// A braided-set candidate: a table `R: X x X -> X x X` with in-range
/// entries. The defining laws are checked by [`BraidedSet::validate`], not
/// at construction.
#[derive(Clone, PartialEq, Eq)]
pub struct BraidedSet {
    size: usize,
    /// r[x * size + y] = R(x, y)
    r: Vec<(Elem, Elem)>,
}

#[derive(Serialize, Deserialize)]
struct BraidedFile {
    size: usize,
    r: Vec<Vec<[usize; 2]>>,
}

/// Exhaustive truth values of the braided-set laws for one table.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct ValidationReport {
    /// the table is a bijection of pairs and satisfies the Yang–Baxter
    /// equation on all triples
    pub is_braided: bool,
    /// both partial maps are bijections on every fiber
    pub is_nondegenerate: bool,
    /// the first output coordinate is always `y` (rack encoding)
    pub is_self_distributive: bool,
    /// `R(x, x) = (x, x)` for all `x`
    pub is_squarefree: bool,
}

impl BraidedSet {
    pub fn from_table(size: usize, table: Vec<Vec<(usize, usize)>>) -> Result<Self> {
        if size == 0 || size > Elem::MAX as usize {
            return Err(Error::structural(format!("unsupported size {size}")));
        }
        if table.len() != size {
            return Err(Error::structural("braided table is not square"));
        }
        let mut r = Vec::with_capacity(size * size);
        for row in &table {
            if row.len() != size {
                return Err(Error::structural("braided table is not square"));
            }
            for &(a, b) in row {
                if a >= size || b >= size {
                    return Err(Error::structural(format!(
                        "pair ({a},{b}) out of range"
                    )));
                }
                r.push((a as Elem, b as Elem));
            }
        }
        Ok(BraidedSet { size, r })
    }

    /// The trivial braided set `R(x, y) = (y, x)`.
    pub fn trivial(k: usize) -> Self {
        let table = (0..k)
            .map(|x| (0..k).map(|y| (y, x)).collect())
            .collect();
        BraidedSet::from_table(k, table).expect("trivial braided set")
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let file: BraidedFile = serde_json::from_str(text)
            .map_err(|e| Error::structural(format!("braided JSON: {e}")))?;
        let table = file
            .r
            .into_iter()
            .map(|row| row.into_iter().map(|[a, b]| (a, b)).collect())
            .collect();
        BraidedSet::from_table(file.size, table)
    }

    pub fn to_json(&self) -> String {
        let rows: Vec<Vec<[usize; 2]>> = (0..self.size)
            .map(|x| {
                (0..self.size)
                    .map(|y| {
                        let (a, b) = self.r(x, y);
                        [a as usize, b as usize]
                    })
                    .collect()
            })
            .collect();
        serde_json::to_string(&BraidedFile {
            size: self.size,
            r: rows,
        })
        .expect("braided serialization")
    }

    pub fn size(&self) -> usize {
        self.size
    }

    #[inline]
    pub fn r(&self, x: usize, y: usize) -> (Elem, Elem) {
        self.r[x * self.size + y]
    }

    /// Computes every flag exhaustively over all pairs and triples.
    pub fn validate(&self) -> ValidationReport {
        let n = self.size;
        let mut seen_pairs = vec![false; n * n];
        let mut bijective = true;
        for &(a, b) in &self.r {
            let idx = a as usize * n + b as usize;
            if seen_pairs[idx] {
                bijective = false;
                break;
            }
            seen_pairs[idx] = true;
        }

        let mut yang_baxter = true;
        'yb: for x in 0..n {
            for y in 0..n {
                for z in 0..n {
                    if self.yb_left(x, y, z) != self.yb_right(x, y, z) {
                        yang_baxter = false;
                        break 'yb;
                    }
                }
            }
        }

        let mut nondegenerate = true;
        for fixed in 0..n {
            let mut seen = vec![false; n];
            for x in 0..n {
                let v = self.r(x, fixed).1 as usize;
                if seen[v] {
                    nondegenerate = false;
                }
                seen[v] = true;
            }
            let mut seen = vec![false; n];
            for y in 0..n {
                let v = self.r(fixed, y).0 as usize;
                if seen[v] {
                    nondegenerate = false;
                }
                seen[v] = true;
            }
        }

        let self_distributive = (0..n)
            .all(|x| (0..n).all(|y| self.r(x, y).0 as usize == y));
        let squarefree = (0..n).all(|x| self.r(x, x) == (x as Elem, x as Elem));

        ValidationReport {
            is_braided: bijective && yang_baxter,
            is_nondegenerate: nondegenerate,
            is_self_distributive: self_distributive,
            is_squarefree: squarefree,
        }
    }

    /// (R x id) then (id x R) then (R x id), reading composition right to
    /// left as usual.
    fn yb_left(&self, x: usize, y: usize, z: usize) -> (usize, usize, usize) {
        let (a, b) = self.r(x, y);
        let (c, d) = self.r(b as usize, z);
        let (e, f) = self.r(a as usize, c as usize);
        (e as usize, f as usize, d as usize)
    }

    fn yb_right(&self, x: usize, y: usize, z: usize) -> (usize, usize, usize) {
        let (a, b) = self.r(y, z);
        let (c, d) = self.r(x, a as usize);
        let (e, f) = self.r(d as usize, b as usize);
        (c as usize, e as usize, f as usize)
    }
}

/// Computes every validation flag for a braided-set table.
pub fn validate_braided_set(b: &BraidedSet) -> ValidationReport {
    b.validate()
}

/// All racks on `{0..size}` as labeled operation tables, by exhausting
/// column-permutation assignments and filtering for self-distributivity.
pub fn enumerate_all(size: usize) -> Result<Vec<Rack>> {
    if size == 0 || size > 4 {
        return Err(Error::resource(
            "exhaustive rack enumeration supported for sizes 1..=4",
        ));
    }
    let perms: Vec<Vec<usize>> = permutations_of(size);
    let mut racks = Vec::new();
    let mut choice = vec![0usize; size];
    loop {
        let rows: Vec<Vec<usize>> = (0..size)
            .map(|x| (0..size).map(|y| perms[choice[y]][x]).collect())
            .collect();
        if let Ok(rack) = Rack::new(rows) {
            racks.push(rack);
        }
        let mut slot = 0;
        loop {
            if slot == size {
                return Ok(racks);
            }
            choice[slot] += 1;
            if choice[slot] < perms.len() {
                break;
            }
            choice[slot] = 0;
            slot += 1;
        }
    }
}

fn permutations_of(n: usize) -> Vec<Vec<usize>> {
    use itertools::Itertools;
    (0..n).permutations(n).collect()
}

/// Seeded sample of valid racks of size at most `max_size`, drawn from
/// permutation racks, conjugation racks of small groups, and products.
pub fn sample_racks(seed: u64, count: usize, max_size: usize) -> Vec<Rack> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut pool: Vec<Rack> = vec![Rack::two_element_nontrivial(), Rack::trivial(2)];
    let small_groups: Vec<FiniteGroupTable> = vec![
        FiniteGroupTable::symmetric(3).unwrap(),
        FiniteGroupTable::symmetric(4).unwrap(),
        FiniteGroupTable::alternating(4).unwrap(),
    ];
    let mut out = Vec::new();
    while out.len() < count {
        match rng.gen_range(0..3u8) {
            0 => {
                let k = rng.gen_range(2..=max_size);
                let mut images: Vec<usize> = (0..k).collect();
                for i in (1..k).rev() {
                    images.swap(i, rng.gen_range(0..=i));
                }
                let sigma = Perm::from_images(&images).unwrap();
                out.push(Rack::permutation_rack(&sigma));
            }
            1 => {
                let g = &small_groups[rng.gen_range(0..small_groups.len())];
                let s = rng.gen_range(1..g.order());
                if let Ok((rack, _)) = conjugation_rack(g, &[s], false) {
                    if rack.size() <= max_size {
                        out.push(rack);
                    }
                }
            }
            _ => {
                let a = &pool[rng.gen_range(0..pool.len())];
                let b = &pool[rng.gen_range(0..pool.len())];
                if a.size() * b.size() <= max_size {
                    out.push(Rack::product(a, b).unwrap());
                }
            }
        }
        if let Some(last) = out.last() {
            if last.size() <= max_size / 2 && pool.len() < 8 {
                pool.push(last.clone());
            }
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_bigint::BigUint;

    fn transposition_rack_s3() -> (Rack, Vec<usize>) {
        let s3 = FiniteGroupTable::symmetric(3).unwrap();
        let t = (0..6).find(|&x| s3.element_order(x) == 2).unwrap();
        conjugation_rack(&s3, &[t], false).unwrap()
    }

    #[test]
    fn trivial_braided_set_flags() {
        let t2 = BraidedSet::trivial(2);
        let report = t2.validate();
        assert!(report.is_braided);
        assert!(report.is_nondegenerate);
        assert!(report.is_self_distributive);
        assert!(report.is_squarefree);
    }

    #[test]
    fn n_rack_flags() {
        let n = Rack::two_element_nontrivial();
        let report = n.to_braided().validate();
        assert!(report.is_braided);
        assert!(report.is_self_distributive);
        assert!(!report.is_squarefree);
        assert!(!n.is_quandle());
    }

    #[test]
    fn repeated_pair_is_not_braided() {
        // constant table: R(x, y) = (0, 0)
        let table = vec![vec![(0, 0); 2]; 2];
        let b = BraidedSet::from_table(2, table).unwrap();
        assert!(!b.validate().is_braided);
    }

    #[test]
    fn malformed_table_is_structural_error() {
        let table = vec![vec![(0, 5); 2]; 2];
        assert!(matches!(
            BraidedSet::from_table(2, table),
            Err(Error::Structural(_))
        ));
    }

    #[test]
    fn rack_braided_roundtrip() {
        // every valid rack is a self-distributive braided solution, and back
        for rack in enumerate_all(3).unwrap() {
            let b = rack.to_braided();
            let report = b.validate();
            assert!(report.is_braided && report.is_self_distributive);
            let back = Rack::from_braided(&b).unwrap();
            assert_eq!(back.op, rack.op);
            assert_eq!(report.is_squarefree, rack.is_quandle());
        }
    }

    #[test]
    fn exactly_two_racks_of_size_two() {
        let racks = enumerate_all(2).unwrap();
        assert_eq!(racks.len(), 2);
    }

    #[test]
    fn conjugation_rack_s3() {
        let (rack, embedding) = transposition_rack_s3();
        assert_eq!(rack.size(), 3);
        assert!(rack.is_quandle());
        assert!(rack.is_connected());
        assert_eq!(embedding.len(), 3);

        // two classes: transpositions and 3-cycles
        let s3 = FiniteGroupTable::symmetric(3).unwrap();
        let t = (0..6).find(|&x| s3.element_order(x) == 2).unwrap();
        let c = (0..6).find(|&x| s3.element_order(x) == 3).unwrap();
        let (both, _) = conjugation_rack(&s3, &[t, c], false).unwrap();
        assert_eq!(both.size(), 5);
        let comps = both.components();
        assert_eq!(comps.count(), 2);
        let mut sizes = comps.sizes().to_vec();
        sizes.sort_unstable();
        assert_eq!(sizes, vec![2, 3]);
    }

    #[test]
    fn abelian_conjugation_is_trivial() {
        let z6 = FiniteGroupTable::cyclic(6).unwrap();
        let (rack, _) = conjugation_rack(&z6, &[1], false).unwrap();
        for x in 0..rack.size() {
            for y in 0..rack.size() {
                assert_eq!(rack.op(x, y), x);
            }
        }
    }

    #[test]
    fn identity_seed_needs_opt_in() {
        let s3 = FiniteGroupTable::symmetric(3).unwrap();
        assert!(conjugation_rack(&s3, &[0], false).is_err());
        let (rack, _) = conjugation_rack(&s3, &[0], true).unwrap();
        assert_eq!(rack.size(), 1);
    }

    #[test]
    fn product_rack_examples() {
        let (x, _) = transposition_rack_s3();
        // X x T_1 is an isomorphic copy of X
        let p = Rack::product(&x, &Rack::trivial(1)).unwrap();
        assert_eq!(p.size(), x.size());
        for a in 0..x.size() {
            for b in 0..x.size() {
                assert_eq!(p.op(a, b), x.op(a, b));
            }
        }
        // T_2 x T_2 is the trivial rack of size 4
        let t = Rack::product(&Rack::trivial(2), &Rack::trivial(2)).unwrap();
        for a in 0..4 {
            for b in 0..4 {
                assert_eq!(t.op(a, b), a);
            }
        }
        // N x T_2: size 4, not squarefree, 2 components
        let n = Rack::product(&Rack::two_element_nontrivial(), &Rack::trivial(2)).unwrap();
        assert_eq!(n.size(), 4);
        assert!(!n.is_quandle());
        assert_eq!(n.components().count(), 2);
    }

    #[test]
    fn component_examples() {
        let (x, _) = transposition_rack_s3();
        assert_eq!(x.components().count(), 1);
        let t4 = Rack::trivial(4);
        assert_eq!(t4.components().count(), 4);
        assert_eq!(t4.components().quotient().size(), 4);
    }

    #[test]
    fn components_partition_and_match_inn_orbits() {
        let s3 = FiniteGroupTable::symmetric(3).unwrap();
        let t = (0..6).find(|&x| s3.element_order(x) == 2).unwrap();
        let c = (0..6).find(|&x| s3.element_order(x) == 3).unwrap();
        let racks = vec![
            transposition_rack_s3().0,
            conjugation_rack(&s3, &[t, c], false).unwrap().0,
            Rack::two_element_nontrivial(),
            Rack::trivial(3),
        ];
        for rack in &racks {
            let comps = rack.components();
            assert_eq!(comps.sizes().iter().sum::<usize>(), rack.size());
            // Inn-orbits coincide with components
            let inn = rack.inner_group();
            for x in 0..rack.size() {
                // orbit of x under the inner group generators
                let mut seen = vec![false; rack.size()];
                seen[x] = true;
                let mut stack = vec![x];
                while let Some(p) = stack.pop() {
                    for g in inn.generators() {
                        let q = g.apply(p);
                        if !seen[q] {
                            seen[q] = true;
                            stack.push(q);
                        }
                    }
                }
                for y in 0..rack.size() {
                    assert_eq!(
                        seen[y],
                        comps.label(x) == comps.label(y),
                        "rack {rack:?} elements {x},{y}"
                    );
                }
            }
        }
    }

    #[test]
    fn inner_group_examples() {
        assert_eq!(*Rack::trivial(5).inner_group().order(), BigUint::from(1u8));
        let (x, _) = transposition_rack_s3();
        assert_eq!(*x.inner_group().order(), BigUint::from(6u8));
        let n = Rack::two_element_nontrivial();
        assert_eq!(*n.inner_group().order(), BigUint::from(2u8));
    }

    #[test]
    fn inner_orders_and_central_word() {
        let t2 = Rack::trivial(2);
        assert_eq!(t2.element_inn_order(0).unwrap(), 1);
        assert_eq!(t2.central_word(), vec![0, 1]);

        let n = Rack::two_element_nontrivial();
        assert_eq!(n.element_inn_order(0).unwrap(), 2);
        assert_eq!(n.central_word(), vec![0, 0, 1, 1]);

        let (x, _) = transposition_rack_s3();
        for e in 0..3 {
            assert_eq!(x.element_inn_order(e).unwrap(), 2);
        }
        assert_eq!(x.central_word().len(), 6);
    }

    #[test]
    fn central_word_acts_trivially() {
        // applying the inner permutations of z in word order fixes every
        // element
        let s3 = FiniteGroupTable::symmetric(3).unwrap();
        let t = (0..6).find(|&x| s3.element_order(x) == 2).unwrap();
        let c = (0..6).find(|&x| s3.element_order(x) == 3).unwrap();
        let racks = vec![
            transposition_rack_s3().0,
            conjugation_rack(&s3, &[t, c], false).unwrap().0,
            Rack::two_element_nontrivial(),
            Rack::trivial(3),
            Rack::product(&Rack::two_element_nontrivial(), &Rack::trivial(2)).unwrap(),
        ];
        for rack in &racks {
            let z = rack.central_word();
            for y in 0..rack.size() {
                let mut p = y;
                for &w in &z {
                    p = rack.op(p, w as usize);
                }
                assert_eq!(p, y, "central word moved {y} in {rack:?}");
            }
        }
    }

    #[test]
    fn quandle_inner_perms_fix_own_index() {
        let (x, _) = transposition_rack_s3();
        assert!(x.is_quandle());
        for y in 0..x.size() {
            assert_eq!(x.inner_perm(y).apply(y), y);
        }
    }

    #[test]
    fn generation_examples() {
        let (x, _) = transposition_rack_s3();
        let all: Vec<usize> = (0..3).collect();
        assert!(x.generates(&all).unwrap());
        // a single transposition closes onto itself
        assert!(!x.generates(&[0]).unwrap());
        assert_eq!(x.subrack_closure(&[0]).unwrap(), vec![0]);
        // two distinct transpositions reach the third
        assert!(x.generates(&[0, 1]).unwrap());
        assert!(!x.generates(&[]).unwrap());
    }

    #[test]
    fn json_roundtrip() {
        let (x, _) = transposition_rack_s3();
        let text = x.to_json();
        let back = Rack::from_json(&text).unwrap();
        assert_eq!(back.op, x.op);
        // non-square tables rejected
        assert!(Rack::from_json(r#"{"size":2,"op":[[0,0]]}"#).is_err());
    }

    #[test]
    fn sampled_racks_are_valid() {
        let racks = sample_racks(7, 20, 6);
        assert_eq!(racks.len(), 20);
        for r in &racks {
            assert!(r.size() <= 6);
            // Rack::new validated the laws; revalidate via the braided view
            let report = r.to_braided().validate();
            assert!(report.is_braided && report.is_self_distributive);
        }
    }
}
