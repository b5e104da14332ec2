//! Finite groups as explicit multiplication tables.
//!
//! Groups here are small (desk scale, order a few hundred), so everything
//! is done by exhaustive table walks: conjugacy classes by closure under
//! conjugation, abelianizations by commutator closure, and the subgroup
//! criterion for direct products by literal enumeration of the subgroup.

use std::collections::{HashMap, HashSet};

use itertools::Itertools;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::perm::Perm;

/// A finite group given by its full multiplication table over element
/// indices `0..order`.
#[derive(Clone)]
pub struct FiniteGroupTable {
    order: usize,
    /// row-major: mul[g * order + h] = g·h
    mul: Vec<u16>,
    identity: usize,
    inv: Vec<u16>,
    name: Option<String>,
}

#[derive(Serialize, Deserialize)]
struct GroupFile {
    order: usize,
    mul: Vec<Vec<usize>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    name: Option<String>,
}

impl FiniteGroupTable {
    /// Validates associativity, identity, and inverses on the whole table.
    pub fn new(mul_rows: Vec<Vec<usize>>) -> Result<Self> {
        let order = mul_rows.len();
        if order == 0 || order > u16::MAX as usize {
            return Err(Error::structural(format!("unsupported group order {order}")));
        }
        let mut mul = vec![0u16; order * order];
        for (g, row) in mul_rows.iter().enumerate() {
            if row.len() != order {
                return Err(Error::structural("multiplication table is not square"));
            }
            for (h, &v) in row.iter().enumerate() {
                if v >= order {
                    return Err(Error::structural(format!(
                        "product index {v} out of range at ({g},{h})"
                    )));
                }
                mul[g * order + h] = v as u16;
            }
        }
        let identity = (0..order)
            .find(|&e| {
                (0..order).all(|x| {
                    mul[e * order + x] == x as u16 && mul[x * order + e] == x as u16
                })
            })
            .ok_or_else(|| Error::structural("no identity element"))?;
        let mut inv = vec![u16::MAX; order];
        for x in 0..order {
            let y = (0..order).find(|&y| {
                mul[x * order + y] == identity as u16 && mul[y * order + x] == identity as u16
            });
            match y {
                Some(y) => inv[x] = y as u16,
                None => {
                    return Err(Error::structural(format!("element {x} has no inverse")));
                }
            }
        }
        for a in 0..order {
            for b in 0..order {
                let ab = mul[a * order + b] as usize;
                for c in 0..order {
                    let bc = mul[b * order + c] as usize;
                    if mul[ab * order + c] != mul[a * order + bc] {
                        return Err(Error::structural(format!(
                            "associativity fails at ({a},{b},{c})"
                        )));
                    }
                }
            }
        }
        Ok(FiniteGroupTable {
            order,
            mul,
            identity,
            inv,
            name: None,
        })
    }

    pub fn with_name(mut self, name: impl Into<String>) -> Self {
        self.name = Some(name.into());
        self
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let file: GroupFile =
            serde_json::from_str(text).map_err(|e| Error::structural(format!("group JSON: {e}")))?;
        if file.mul.len() != file.order {
            return Err(Error::structural("declared order does not match table size"));
        }
        let mut g = FiniteGroupTable::new(file.mul)?;
        g.name = file.name;
        Ok(g)
    }

    pub fn to_json(&self) -> String {
        let rows: Vec<Vec<usize>> = (0..self.order)
            .map(|g| (0..self.order).map(|h| self.mul(g, h)).collect())
            .collect();
        serde_json::to_string(&GroupFile {
            order: self.order,
            mul: rows,
            name: self.name.clone(),
        })
        .expect("group serialization")
    }

    /// Builds the group table of a closed set of permutations; the element
    /// indexing follows the given order.
    pub fn from_perms(perms: &[Perm]) -> Result<Self> {
        let index: HashMap<Vec<usize>, usize> = perms
            .iter()
            .enumerate()
            .map(|(i, p)| (p.images().collect(), i))
            .collect();
        if index.len() != perms.len() {
            return Err(Error::structural("duplicate permutations"));
        }
        let mut rows = vec![vec![0usize; perms.len()]; perms.len()];
        for (i, p) in perms.iter().enumerate() {
            for (j, q) in perms.iter().enumerate() {
                let prod: Vec<usize> = p.then(q).images().collect();
                let k = *index
                    .get(&prod)
                    .ok_or_else(|| Error::structural("permutation set is not closed"))?;
                rows[i][j] = k;
            }
        }
        FiniteGroupTable::new(rows)
    }

    /// The symmetric group S_m, elements indexed in lexicographic order of
    /// their image arrays (index 0 is the identity).
    pub fn symmetric(m: usize) -> Result<Self> {
        if m == 0 || m > 7 {
            return Err(Error::resource(format!(
                "symmetric group table supported for 1 <= m <= 7, got {m}"
            )));
        }
        let perms: Vec<Perm> = (0..m)
            .permutations(m)
            .map(|im| Perm::from_images(&im).unwrap())
            .collect();
        Ok(FiniteGroupTable::from_perms(&perms)?.with_name(format!("s{m}")))
    }

    /// The alternating group A_m, even permutations in lexicographic order.
    pub fn alternating(m: usize) -> Result<Self> {
        if m == 0 || m > 7 {
            return Err(Error::resource(format!(
                "alternating group table supported for 1 <= m <= 7, got {m}"
            )));
        }
        let perms: Vec<Perm> = (0..m)
            .permutations(m)
            .map(|im| Perm::from_images(&im).unwrap())
            .filter(|p| p.is_even())
            .collect();
        Ok(FiniteGroupTable::from_perms(&perms)?.with_name(format!("a{m}")))
    }

    pub fn cyclic(k: usize) -> Result<Self> {
        if k == 0 {
            return Err(Error::structural("cyclic group of order 0"));
        }
        let rows = (0..k)
            .map(|a| (0..k).map(|b| (a + b) % k).collect())
            .collect();
        Ok(FiniteGroupTable::new(rows)?.with_name(format!("z{k}")))
    }

    /// Direct product; element `(x, y)` gets index `x * |B| + y`.
    pub fn direct_product(a: &FiniteGroupTable, b: &FiniteGroupTable) -> Result<Self> {
        let n = a.order * b.order;
        if n > u16::MAX as usize {
            return Err(Error::resource(format!("product order {n} too large")));
        }
        let rows = (0..n)
            .map(|g| {
                let (gx, gy) = (g / b.order, g % b.order);
                (0..n)
                    .map(|h| {
                        let (hx, hy) = (h / b.order, h % b.order);
                        a.mul(gx, hx) * b.order + b.mul(gy, hy)
                    })
                    .collect()
            })
            .collect();
        FiniteGroupTable::new(rows)
    }

    pub fn order(&self) -> usize {
        self.order
    }

    pub fn identity(&self) -> usize {
        self.identity
    }

    pub fn name(&self) -> Option<&str> {
        self.name.as_deref()
    }

    #[inline]
    pub fn mul(&self, g: usize, h: usize) -> usize {
        self.mul[g * self.order + h] as usize
    }

    #[inline]
    pub fn inv(&self, g: usize) -> usize {
        self.inv[g] as usize
    }

    /// `x^g = g^{-1} x g`
    #[inline]
    pub fn conj(&self, x: usize, g: usize) -> usize {
        self.mul(self.mul(self.inv(g), x), g)
    }

    pub fn element_order(&self, x: usize) -> usize {
        let mut acc = x;
        let mut n = 1;
        while acc != self.identity {
            acc = self.mul(acc, x);
            n += 1;
        }
        n
    }

    pub fn is_abelian(&self) -> bool {
        (0..self.order).all(|a| (a..self.order).all(|b| self.mul(a, b) == self.mul(b, a)))
    }

    /// Conjugacy class of `x`, sorted, computed by closure under
    /// conjugation by all group elements.
    pub fn conjugacy_class(&self, x: usize) -> Vec<usize> {
        let mut seen = vec![false; self.order];
        seen[x] = true;
        let mut class = vec![x];
        let mut head = 0;
        while head < class.len() {
            let y = class[head];
            head += 1;
            for g in 0..self.order {
                let z = self.conj(y, g);
                if !seen[z] {
                    seen[z] = true;
                    class.push(z);
                }
            }
        }
        class.sort_unstable();
        class
    }

    /// Subgroup generated by `seed`, sorted.
    pub fn subgroup_closure(&self, seed: &[usize]) -> Vec<usize> {
        let mut seen = vec![false; self.order];
        seen[self.identity] = true;
        let mut elems = vec![self.identity];
        let mut head = 0;
        for &s in seed {
            if !seen[s] {
                seen[s] = true;
                elems.push(s);
            }
        }
        while head < elems.len() {
            let a = elems[head];
            head += 1;
            for i in 0..elems.len() {
                for prod in [self.mul(a, elems[i]), self.mul(elems[i], a)] {
                    if !seen[prod] {
                        seen[prod] = true;
                        elems.push(prod);
                    }
                }
            }
        }
        elems.sort_unstable();
        elems
    }

    pub fn generates(&self, seed: &[usize]) -> bool {
        self.subgroup_closure(seed).len() == self.order
    }

    /// The commutator subgroup, sorted.
    pub fn commutator_subgroup(&self) -> Vec<usize> {
        let mut commutators = Vec::new();
        for a in 0..self.order {
            for b in 0..self.order {
                let c = self.mul(
                    self.mul(self.inv(a), self.inv(b)),
                    self.mul(a, b),
                );
                commutators.push(c);
            }
        }
        commutators.sort_unstable();
        commutators.dedup();
        self.subgroup_closure(&commutators)
    }

    /// The abelianization as a coset map: `coset_of[x]` is a canonical
    /// label for `x·[G,G]`, together with the quotient multiplication.
    pub fn abelianization(&self) -> AbelianQuotient {
        let derived = self.commutator_subgroup();
        let mut coset_of = vec![usize::MAX; self.order];
        let mut reps = Vec::new();
        for x in 0..self.order {
            if coset_of[x] != usize::MAX {
                continue;
            }
            let label = reps.len();
            reps.push(x);
            for &d in &derived {
                coset_of[self.mul(x, d)] = label;
            }
        }
        debug_assert!(coset_of.iter().all(|&c| c != usize::MAX));
        AbelianQuotient {
            group: self.clone(),
            coset_of,
            reps,
        }
    }
}

/// A finite abelian quotient `G/[G,G]` presented through coset labels.
pub struct AbelianQuotient {
    group: FiniteGroupTable,
    coset_of: Vec<usize>,
    reps: Vec<usize>,
}

impl AbelianQuotient {
    pub fn size(&self) -> usize {
        self.reps.len()
    }

    pub fn coset_of(&self, x: usize) -> usize {
        self.coset_of[x]
    }

    pub fn mul(&self, a: usize, b: usize) -> usize {
        self.coset_of[self.group.mul(self.reps[a], self.reps[b])]
    }

    /// Minimal size of a generating set: the maximum over primes `p` of the
    /// p-rank, read off from the size of the p-torsion subgroup.
    pub fn min_generators(&self) -> usize {
        let n = self.size();
        if n == 1 {
            return 0;
        }
        let mut best = 1;
        let mut m = n;
        let mut p = 2;
        while p * p <= m {
            if m % p == 0 {
                while m % p == 0 {
                    m /= p;
                }
                best = best.max(self.p_rank(p));
            }
            p += 1;
        }
        if m > 1 {
            best = best.max(self.p_rank(m));
        }
        best
    }

    fn p_rank(&self, p: usize) -> usize {
        // |A[p]| = p^rank
        let identity = self.coset_of[self.group.identity];
        let torsion = (0..self.size())
            .filter(|&a| {
                let mut acc = identity;
                for _ in 0..p {
                    acc = self.mul(acc, a);
                }
                acc == identity
            })
            .count();
        let mut rank = 0;
        let mut t = torsion;
        while t > 1 {
            debug_assert_eq!(t % p, 0);
            t /= p;
            rank += 1;
        }
        rank
    }
}

/// Checks the subgroup-of-a-direct-product criterion on one instance.
///
/// `gens` lists generators of `H <= G_1 x .. x G_m`, each given as one
/// element index per factor. The verdict records the three conditions
/// (abelianization surjectivity, projection onto every factor, projection
/// onto every pair of isomorphic factors), whether `H` is the full product,
/// and whether the implication `conditions => equality` holds here.
#[derive(Clone, Debug)]
pub struct ProductVerdict {
    pub ab_surjective: bool,
    pub projects_onto_factors: Vec<bool>,
    /// (i, j, projects onto G_i x G_j) for each unordered isomorphic pair
    pub projects_onto_pairs: Vec<(usize, usize, bool)>,
    pub equals_product: bool,
    pub consistent: bool,
    pub subgroup_order: usize,
}

pub fn product_criterion(
    factors: &[FiniteGroupTable],
    gens: &[Vec<usize>],
    cap: usize,
) -> Result<ProductVerdict> {
    if factors.is_empty() {
        return Err(Error::precondition("empty factor list"));
    }
    for g in gens {
        if g.len() != factors.len() {
            return Err(Error::precondition(
                "generator arity does not match factor count",
            ));
        }
        for (x, f) in g.iter().zip(factors) {
            if *x >= f.order() {
                return Err(Error::structural(format!("element {x} out of range")));
            }
        }
    }

    // enumerate H by closure
    let identity: Vec<usize> = factors.iter().map(|f| f.identity()).collect();
    let mut seen: HashSet<Vec<usize>> = HashSet::new();
    seen.insert(identity.clone());
    let mut elems = vec![identity];
    for g in gens {
        if seen.insert(g.clone()) {
            elems.push(g.clone());
        }
    }
    let mut head = 0;
    while head < elems.len() {
        let a = elems[head].clone();
        head += 1;
        for g in gens {
            let prod: Vec<usize> = a
                .iter()
                .zip(g.iter())
                .zip(factors)
                .map(|((&x, &y), f)| f.mul(x, y))
                .collect();
            if seen.insert(prod.clone()) {
                elems.push(prod);
            }
            if elems.len() > cap {
                return Err(Error::resource(format!(
                    "subgroup enumeration exceeded cap {cap}"
                )));
            }
        }
    }

    // condition 1: surjectivity onto the product of abelianizations
    let quotients: Vec<AbelianQuotient> = factors.iter().map(|f| f.abelianization()).collect();
    let ab_total: usize = quotients.iter().map(|q| q.size().max(1)).product();
    let ab_image: HashSet<Vec<usize>> = elems
        .iter()
        .map(|e| {
            e.iter()
                .zip(&quotients)
                .map(|(&x, q)| q.coset_of(x))
                .collect()
        })
        .collect();
    let ab_surjective = ab_image.len() == ab_total;

    // condition 2: projection onto each factor
    let projects_onto_factors: Vec<bool> = (0..factors.len())
        .map(|i| {
            let image: HashSet<usize> = elems.iter().map(|e| e[i]).collect();
            image.len() == factors[i].order()
        })
        .collect();

    // condition 3: projection onto pairs of isomorphic factors
    let mut projects_onto_pairs = Vec::new();
    for i in 0..factors.len() {
        for j in i + 1..factors.len() {
            if !are_isomorphic(&factors[i], &factors[j]) {
                continue;
            }
            let image: HashSet<(usize, usize)> =
                elems.iter().map(|e| (e[i], e[j])).collect();
            let full = image.len() == factors[i].order() * factors[j].order();
            projects_onto_pairs.push((i, j, full));
        }
    }

    let product_order: usize = factors.iter().map(|f| f.order()).product();
    let equals_product = elems.len() == product_order;
    let all_conditions = ab_surjective
        && projects_onto_factors.iter().all(|&b| b)
        && projects_onto_pairs.iter().all(|&(_, _, b)| b);
    Ok(ProductVerdict {
        ab_surjective,
        projects_onto_factors,
        projects_onto_pairs,
        equals_product,
        consistent: !all_conditions || equals_product,
        subgroup_order: elems.len(),
    })
}

/// Backtracking isomorphism test; adequate for desk-scale orders.
pub fn are_isomorphic(a: &FiniteGroupTable, b: &FiniteGroupTable) -> bool {
    if a.order() != b.order() {
        return false;
    }
    // cheap invariant: element order multisets must agree
    let orders = |g: &FiniteGroupTable| {
        let mut v: Vec<usize> = (0..g.order()).map(|x| g.element_order(x)).collect();
        v.sort_unstable();
        v
    };
    let a_orders = orders(a);
    if a_orders != orders(b) {
        return false;
    }
    if a.order() == 1 {
        return true;
    }
    // identical tables are isomorphic via the identity map
    if a.mul == b.mul {
        return true;
    }

    // greedy generating sequence of a
    let mut gens = Vec::new();
    let mut have = a.subgroup_closure(&[]);
    while have.len() < a.order() {
        let next = (0..a.order())
            .find(|x| have.binary_search(x).is_err())
            .expect("proper subgroup misses an element");
        gens.push(next);
        have = a.subgroup_closure(&gens);
    }

    fn extend(
        a: &FiniteGroupTable,
        b: &FiniteGroupTable,
        gens: &[usize],
        chosen: &mut Vec<usize>,
    ) -> bool {
        if chosen.len() == gens.len() {
            return check_hom(a, b, gens, chosen);
        }
        let g = gens[chosen.len()];
        let want = a.element_order(g);
        for h in 0..b.order() {
            if b.element_order(h) != want {
                continue;
            }
            chosen.push(h);
            if extend(a, b, gens, chosen) {
                return true;
            }
            chosen.pop();
        }
        false
    }

    fn check_hom(
        a: &FiniteGroupTable,
        b: &FiniteGroupTable,
        gens: &[usize],
        images: &[usize],
    ) -> bool {
        // propagate phi over the Cayley graph of a; any inconsistency or
        // non-bijectivity kills this image choice
        let mut phi = vec![usize::MAX; a.order()];
        phi[a.identity()] = b.identity();
        let mut frontier = vec![a.identity()];
        while let Some(x) = frontier.pop() {
            for (&g, &h) in gens.iter().zip(images) {
                let xg = a.mul(x, g);
                let img = b.mul(phi[x], h);
                if phi[xg] == usize::MAX {
                    phi[xg] = img;
                    frontier.push(xg);
                } else if phi[xg] != img {
                    return false;
                }
            }
        }
        if phi.contains(&usize::MAX) {
            return false;
        }
        let image: HashSet<usize> = phi.iter().copied().collect();
        if image.len() != b.order() {
            return false;
        }
        (0..a.order()).all(|x| (0..a.order()).all(|y| phi[a.mul(x, y)] == b.mul(phi[x], phi[y])))
    }

    extend(a, b, &gens, &mut Vec::new())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn symmetric_table_basics() {
        let s3 = FiniteGroupTable::symmetric(3).unwrap();
        assert_eq!(s3.order(), 6);
        assert_eq!(s3.identity(), 0);
        assert!(!s3.is_abelian());
        // conjugacy class of a transposition has size 3
        let t = (0..6)
            .find(|&x| s3.element_order(x) == 2)
            .unwrap();
        assert_eq!(s3.conjugacy_class(t).len(), 3);
    }

    #[test]
    fn rejects_non_groups() {
        // a 2x2 table that is not associative / lacks structure
        assert!(FiniteGroupTable::new(vec![vec![0, 0], vec![0, 0]]).is_err());
        assert!(FiniteGroupTable::new(vec![vec![0, 1], vec![1, 1]]).is_err());
        // ragged
        assert!(FiniteGroupTable::new(vec![vec![0, 1], vec![1]]).is_err());
    }

    #[test]
    fn json_roundtrip() {
        let z4 = FiniteGroupTable::cyclic(4).unwrap();
        let text = z4.to_json();
        let back = FiniteGroupTable::from_json(&text).unwrap();
        assert_eq!(back.order(), 4);
        assert_eq!(back.mul(1, 3), 0);
    }

    #[test]
    fn abelianization_sizes() {
        let s3 = FiniteGroupTable::symmetric(3).unwrap();
        assert_eq!(s3.abelianization().size(), 2);
        let a4 = FiniteGroupTable::alternating(4).unwrap();
        assert_eq!(a4.abelianization().size(), 3);
        let a5 = FiniteGroupTable::alternating(5).unwrap();
        assert_eq!(a5.abelianization().size(), 1);
        let klein = FiniteGroupTable::direct_product(
            &FiniteGroupTable::cyclic(2).unwrap(),
            &FiniteGroupTable::cyclic(2).unwrap(),
        )
        .unwrap();
        assert_eq!(klein.abelianization().size(), 4);
        assert_eq!(klein.abelianization().min_generators(), 2);
    }

    #[test]
    fn isomorphism_search() {
        let z6 = FiniteGroupTable::cyclic(6).unwrap();
        let z2z3 = FiniteGroupTable::direct_product(
            &FiniteGroupTable::cyclic(2).unwrap(),
            &FiniteGroupTable::cyclic(3).unwrap(),
        )
        .unwrap();
        assert!(are_isomorphic(&z6, &z2z3));
        let s3 = FiniteGroupTable::symmetric(3).unwrap();
        assert!(!are_isomorphic(&z6, &s3));
        assert!(are_isomorphic(&s3, &FiniteGroupTable::symmetric(3).unwrap()));
    }

    #[test]
    fn product_criterion_diagonal_a5() {
        let a5 = FiniteGroupTable::alternating(5).unwrap();
        // generators of A_5: two elements of orders 3 and 5
        let g3 = (0..60).find(|&x| a5.element_order(x) == 3).unwrap();
        let g5 = (0..60).find(|&x| a5.element_order(x) == 5).unwrap();
        assert!(a5.generates(&[g3, g5]));
        let factors = vec![a5.clone(), a5.clone()];
        let verdict =
            product_criterion(&factors, &[vec![g3, g3], vec![g5, g5]], 1 << 20).unwrap();
        assert_eq!(verdict.subgroup_order, 60);
        assert!(verdict.ab_surjective); // A_5 x A_5 is perfect
        assert!(verdict.projects_onto_factors.iter().all(|&b| b));
        assert_eq!(verdict.projects_onto_pairs, vec![(0, 1, false)]);
        assert!(!verdict.equals_product);
        assert!(verdict.consistent);
    }

    #[test]
    fn product_criterion_full_product() {
        let s3 = FiniteGroupTable::symmetric(3).unwrap();
        let s4 = FiniteGroupTable::symmetric(4).unwrap();
        let s3_gens = {
            let t = (0..6).find(|&x| s3.element_order(x) == 2).unwrap();
            let c = (0..6).find(|&x| s3.element_order(x) == 3).unwrap();
            (t, c)
        };
        let s4_gens = {
            let t = (0..24).find(|&x| s4.element_order(x) == 2).unwrap();
            let c = (0..24).find(|&x| s4.element_order(x) == 4).unwrap();
            (t, c)
        };
        assert!(s4.generates(&[s4_gens.0, s4_gens.1]));
        let gens = vec![
            vec![s3_gens.0, s4.identity()],
            vec![s3_gens.1, s4.identity()],
            vec![s3.identity(), s4_gens.0],
            vec![s3.identity(), s4_gens.1],
        ];
        let verdict = product_criterion(&[s3, s4], &gens, 1 << 20).unwrap();
        assert!(verdict.ab_surjective);
        assert!(verdict.projects_onto_factors.iter().all(|&b| b));
        assert!(verdict.projects_onto_pairs.is_empty()); // S_3 and S_4 not isomorphic
        assert!(verdict.equals_product);
        assert!(verdict.consistent);
    }

    #[test]
    fn product_criterion_joint_sign_kernel() {
        // H = kernel of the joint sign in S_3 x S_3: index 2, so the
        // abelianization condition fails and the verdict stays consistent
        let s3 = FiniteGroupTable::symmetric(3).unwrap();
        let t = (0..6).find(|&x| s3.element_order(x) == 2).unwrap();
        let c = (0..6).find(|&x| s3.element_order(x) == 3).unwrap();
        let e = s3.identity();
        let gens = vec![vec![t, t], vec![c, e], vec![e, c]];
        let verdict = product_criterion(&[s3.clone(), s3], &gens, 1 << 20).unwrap();
        assert_eq!(verdict.subgroup_order, 18);
        assert!(!verdict.ab_surjective);
        assert!(verdict.projects_onto_factors.iter().all(|&b| b));
        assert!(!verdict.equals_product);
        assert!(verdict.consistent);
    }
}
