//! Finite posets, distributive lattices, and lattice congruences.
//!
//! Everything here is generic over element indices 0..N-1; domain modules
//! attach meaning to the indices. The congruence machinery follows the
//! join-irreducible description: a congruence of a finite distributive
//! lattice is determined by the set of join irreducibles it does not
//! contract, and x == y holds exactly when J(x) and J(y) have the same
//! uncontracted part.

use std::collections::BTreeMap;

use crate::util::Bitset;
use crate::{Error, Result};

/// Default element bound for lower-set enumeration.
pub const LOWER_SET_BOUND: usize = 64;

/// A finite poset on indices 0..len-1, stored as the full reflexive
/// transitive relation, one up-set and one down-set bitset per element.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct FinitePoset {
    up: Vec<Bitset>,
    down: Vec<Bitset>,
}

impl FinitePoset {
    /// Builds from a comparator, checking reflexivity, antisymmetry, and
    /// transitivity.
    pub fn from_leq(n: usize, leq: impl Fn(usize, usize) -> bool) -> Result<Self> {
        let mut up = vec![Bitset::new(n); n];
        let mut down = vec![Bitset::new(n); n];
        for i in 0..n {
            for j in 0..n {
                if leq(i, j) {
                    up[i].set(j, true);
                    down[j].set(i, true);
                }
            }
        }
        let p = Self { up, down };
        p.validate()?;
        Ok(p)
    }

    /// Builds from cover (or any generating) relations by transitive closure.
    pub fn from_covers(n: usize, covers: &[(usize, usize)]) -> Result<Self> {
        let mut adj = vec![Vec::new(); n];
        for &(a, b) in covers {
            adj[a].push(b);
        }
        let mut up = vec![Bitset::new(n); n];
        for i in 0..n {
            // DFS from i
            let mut stack = vec![i];
            while let Some(v) = stack.pop() {
                if up[i].get(v) {
                    continue;
                }
                up[i].set(v, true);
                stack.extend(adj[v].iter().copied());
            }
        }
        let mut down = vec![Bitset::new(n); n];
        for i in 0..n {
            for j in up[i].iter_ones().collect::<Vec<_>>() {
                down[j].set(i, true);
            }
        }
        let p = Self { up, down };
        p.validate()?;
        Ok(p)
    }

    fn validate(&self) -> Result<()> {
        let n = self.len();
        for i in 0..n {
            if !self.up[i].get(i) {
                return Err(Error::Invalid {
                    kind: "poset",
                    index: (i, i),
                    reason: "relation is not reflexive".into(),
                });
            }
            for j in self.up[i].iter_ones() {
                if i != j && self.up[j].get(i) {
                    return Err(Error::Invalid {
                        kind: "poset",
                        index: (i, j),
                        reason: "relation is not antisymmetric".into(),
                    });
                }
                if !self.up[j].is_subset(&self.up[i]) {
                    return Err(Error::Invalid {
                        kind: "poset",
                        index: (i, j),
                        reason: "relation is not transitive".into(),
                    });
                }
            }
        }
        Ok(())
    }

    pub fn len(&self) -> usize {
        self.up.len()
    }

    pub fn is_empty(&self) -> bool {
        self.up.is_empty()
    }

    pub fn leq(&self, i: usize, j: usize) -> bool {
        self.up[i].get(j)
    }

    pub fn lt(&self, i: usize, j: usize) -> bool {
        i != j && self.leq(i, j)
    }

    pub fn up_set(&self, i: usize) -> &Bitset {
        &self.up[i]
    }

    pub fn down_set(&self, i: usize) -> &Bitset {
        &self.down[i]
    }

    pub fn minimal_elements(&self) -> Vec<usize> {
        (0..self.len()).filter(|&i| self.down[i].count_ones() == 1).collect()
    }

    pub fn maximal_elements(&self) -> Vec<usize> {
        (0..self.len()).filter(|&i| self.up[i].count_ones() == 1).collect()
    }

    /// Cover pairs (i, j) with i covered by j, i.e. the transitive reduction.
    pub fn covers(&self) -> Vec<(usize, usize)> {
        let mut out = Vec::new();
        for i in 0..self.len() {
            for j in self.up[i].iter_ones() {
                if i == j {
                    continue;
                }
                let mut between = self.up[i].clone();
                between.intersect_with(&self.down[j]);
                if between.count_ones() == 2 {
                    out.push((i, j));
                }
            }
        }
        out
    }

    pub fn lower_covers_of(&self, j: usize) -> Vec<usize> {
        self.down[j]
            .iter_ones()
            .filter(|&i| {
                if i == j {
                    return false;
                }
                let mut between = self.up[i].clone();
                between.intersect_with(&self.down[j]);
                between.count_ones() == 2
            })
            .collect()
    }

    pub fn upper_covers_of(&self, i: usize) -> Vec<usize> {
        self.up[i]
            .iter_ones()
            .filter(|&j| {
                if i == j {
                    return false;
                }
                let mut between = self.up[i].clone();
                between.intersect_with(&self.down[j]);
                between.count_ones() == 2
            })
            .collect()
    }

    /// A deterministic linear extension: repeatedly take the smallest-index
    /// minimal element.
    pub fn linear_extension(&self) -> Vec<usize> {
        let n = self.len();
        let mut remaining: Vec<usize> = (0..n).map(|i| self.down[i].count_ones() - 1).collect();
        let mut placed = vec![false; n];
        let mut out = Vec::with_capacity(n);
        for _ in 0..n {
            let next = (0..n)
                .find(|&i| !placed[i] && remaining[i] == 0)
                .expect("acyclic relation always has a minimal element");
            placed[next] = true;
            out.push(next);
            for j in self.up[next].iter_ones() {
                if j != next {
                    remaining[j] -= 1;
                }
            }
        }
        out
    }

    /// The induced subposet on `elems`; element k of the result is elems[k].
    pub fn induced(&self, elems: &[usize]) -> FinitePoset {
        let m = elems.len();
        let mut up = vec![Bitset::new(m); m];
        let mut down = vec![Bitset::new(m); m];
        for a in 0..m {
            for b in 0..m {
                if self.leq(elems[a], elems[b]) {
                    up[a].set(b, true);
                    down[b].set(a, true);
                }
            }
        }
        FinitePoset { up, down }
    }

    /// All lower sets, sorted by (size, bit order), under the default bound.
    pub fn lower_sets(&self) -> Result<Vec<Bitset>> {
        self.lower_sets_bounded(LOWER_SET_BOUND)
    }

    pub fn lower_sets_bounded(&self, bound: usize) -> Result<Vec<Bitset>> {
        let n = self.len();
        if n > bound {
            return Err(Error::BoundExceeded {
                what: "poset elements for lower-set enumeration",
                needed: n,
                bound,
            });
        }
        let topo = self.linear_extension();
        let mut out = Vec::new();
        let mut current = Bitset::new(n);
        // decide membership in topo order; including e requires its strict
        // down-set, already decided, to be present
        fn rec(
            p: &FinitePoset,
            topo: &[usize],
            k: usize,
            current: &mut Bitset,
            out: &mut Vec<Bitset>,
        ) {
            if k == topo.len() {
                out.push(current.clone());
                return;
            }
            let e = topo[k];
            rec(p, topo, k + 1, current, out);
            let mut need = p.down[e].clone();
            need.set(e, false);
            if need.is_subset(current) {
                current.set(e, true);
                rec(p, topo, k + 1, current, out);
                current.set(e, false);
            }
        }
        rec(self, &topo, 0, &mut current, &mut out);
        out.sort_by_key(|b| (b.count_ones(), b.clone()));
        Ok(out)
    }
}

/// Iterative color refinement, used to prune isomorphism search. Colors are
/// stable under one more round when returned.
fn refine_colors(p: &FinitePoset) -> Vec<usize> {
    let n = p.len();
    let mut colors: Vec<usize> = (0..n)
        .map(|i| {
            let d = p.down_set(i).count_ones();
            let u = p.up_set(i).count_ones();
            d * (n + 1) + u
        })
        .collect();
    loop {
        let mut sig: Vec<(usize, Vec<usize>, Vec<usize>)> = Vec::with_capacity(n);
        for i in 0..n {
            let mut lower: Vec<usize> = p.down_set(i).iter_ones().map(|j| colors[j]).collect();
            let mut upper: Vec<usize> = p.up_set(i).iter_ones().map(|j| colors[j]).collect();
            lower.sort_unstable();
            upper.sort_unstable();
            sig.push((colors[i], lower, upper));
        }
        // canonical ids: rank of the signature among sorted distinct ones, so
        // colors are comparable between different posets
        let mut palette: BTreeMap<&(usize, Vec<usize>, Vec<usize>), usize> = BTreeMap::new();
        for s in &sig {
            palette.insert(s, 0);
        }
        for (rank, (_, v)) in palette.iter_mut().enumerate() {
            *v = rank;
        }
        let old_distinct = {
            let mut c = colors.clone();
            c.sort_unstable();
            c.dedup();
            c.len()
        };
        let new_colors: Vec<usize> = sig.iter().map(|s| palette[s]).collect();
        let splitting = palette.len() > old_distinct;
        colors = new_colors;
        // the old color is part of the signature, so classes only split;
        // equal counts mean the partition is stable
        if !splitting {
            return colors;
        }
    }
}

/// Searches for an order isomorphism P -> Q; returns the image vector
/// (element i of P maps to result[i]) or None.
pub fn poset_isomorphism(p: &FinitePoset, q: &FinitePoset) -> Option<Vec<usize>> {
    if p.len() != q.len() {
        return None;
    }
    let n = p.len();
    if n == 0 {
        return Some(Vec::new());
    }
    let pc = refine_colors(p);
    let qc = refine_colors(q);
    let mut p_hist: BTreeMap<usize, usize> = BTreeMap::new();
    let mut q_hist: BTreeMap<usize, usize> = BTreeMap::new();
    for &c in &pc {
        *p_hist.entry(c).or_insert(0) += 1;
    }
    for &c in &qc {
        *q_hist.entry(c).or_insert(0) += 1;
    }
    if p_hist != q_hist {
        return None;
    }
    // assign rarest colors first
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by_key(|&i| (p_hist[&pc[i]], pc[i], i));
    let mut image = vec![usize::MAX; n];
    let mut used = vec![false; n];
    fn rec(
        p: &FinitePoset,
        q: &FinitePoset,
        pc: &[usize],
        qc: &[usize],
        order: &[usize],
        k: usize,
        image: &mut Vec<usize>,
        used: &mut Vec<bool>,
    ) -> bool {
        if k == order.len() {
            return true;
        }
        let x = order[k];
        for y in 0..q.len() {
            if used[y] || qc[y] != pc[x] {
                continue;
            }
            let consistent = order[..k].iter().all(|&x2| {
                let y2 = image[x2];
                p.leq(x, x2) == q.leq(y, y2) && p.leq(x2, x) == q.leq(y2, y)
            });
            if consistent {
                image[x] = y;
                used[y] = true;
                if rec(p, q, pc, qc, order, k + 1, image, used) {
                    return true;
                }
                image[x] = usize::MAX;
                used[y] = false;
            }
        }
        false
    }
    if rec(p, q, &pc, &qc, &order, 0, &mut image, &mut used) {
        Some(image)
    } else {
        None
    }
}

/// A finite lattice: a poset in which every pair has a join and a meet.
///
/// Join and meet are computed through up-set and down-set intersections,
/// using a linear extension so the first hit is the extremum; totality is
/// verified at construction.
#[derive(Clone, Debug)]
pub struct Lattice {
    poset: FinitePoset,
    topo: Vec<usize>,
    join_irr: Vec<usize>,
    meet_irr: Vec<usize>,
    /// j_sets[x] = bitset over positions into join_irr of those below x.
    j_sets: Vec<Bitset>,
}

impl Lattice {
    pub fn new(poset: FinitePoset) -> Result<Self> {
        let n = poset.len();
        if n == 0 {
            return Err(Error::Invalid {
                kind: "lattice",
                index: (0, 0),
                reason: "empty".into(),
            });
        }
        let topo = poset.linear_extension();
        // totality check: every pair needs a least upper and greatest lower
        // bound
        for i in 0..n {
            for j in i + 1..n {
                let mut common = poset.up[i].clone();
                common.intersect_with(&poset.up[j]);
                let first = topo
                    .iter()
                    .copied()
                    .find(|&e| common.get(e))
                    .ok_or(Error::NotALattice(i, j, "no common upper bound"))?;
                if !common.is_subset(&poset.up[first]) {
                    return Err(Error::NotALattice(i, j, "no least upper bound"));
                }
                let mut common = poset.down[i].clone();
                common.intersect_with(&poset.down[j]);
                let last = topo
                    .iter()
                    .rev()
                    .copied()
                    .find(|&e| common.get(e))
                    .ok_or(Error::NotALattice(i, j, "no common lower bound"))?;
                if !common.is_subset(&poset.down[last]) {
                    return Err(Error::NotALattice(i, j, "no greatest lower bound"));
                }
            }
        }
        let join_irr: Vec<usize> =
            (0..n).filter(|&x| poset.lower_covers_of(x).len() == 1).collect();
        let meet_irr: Vec<usize> =
            (0..n).filter(|&x| poset.upper_covers_of(x).len() == 1).collect();
        let j_sets: Vec<Bitset> = (0..n)
            .map(|x| {
                let mut b = Bitset::new(join_irr.len());
                for (p, &j) in join_irr.iter().enumerate() {
                    if poset.leq(j, x) {
                        b.set(p, true);
                    }
                }
                b
            })
            .collect();
        Ok(Self { poset, topo, join_irr, meet_irr, j_sets })
    }

    pub fn poset(&self) -> &FinitePoset {
        &self.poset
    }

    pub fn len(&self) -> usize {
        self.poset.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn leq(&self, i: usize, j: usize) -> bool {
        self.poset.leq(i, j)
    }

    pub fn bottom(&self) -> usize {
        self.topo[0]
    }

    pub fn top(&self) -> usize {
        self.topo[self.len() - 1]
    }

    pub fn join(&self, i: usize, j: usize) -> usize {
        let mut common = self.poset.up[i].clone();
        common.intersect_with(&self.poset.up[j]);
        self.topo
            .iter()
            .copied()
            .find(|&e| common.get(e))
            .expect("verified lattice has all joins")
    }

    pub fn meet(&self, i: usize, j: usize) -> usize {
        let mut common = self.poset.down[i].clone();
        common.intersect_with(&self.poset.down[j]);
        self.topo
            .iter()
            .rev()
            .copied()
            .find(|&e| common.get(e))
            .expect("verified lattice has all meets")
    }

    /// Elements with exactly one lower cover, in index order.
    pub fn join_irreducibles(&self) -> &[usize] {
        &self.join_irr
    }

    /// Elements with exactly one upper cover, in index order.
    pub fn meet_irreducibles(&self) -> &[usize] {
        &self.meet_irr
    }

    /// J(x) as a bitset over positions into `join_irreducibles`.
    pub fn j_set(&self, x: usize) -> &Bitset {
        &self.j_sets[x]
    }

    /// The unique lower cover of a join irreducible.
    pub fn ji_star(&self, j: usize) -> usize {
        let lc = self.poset.lower_covers_of(j);
        assert_eq!(lc.len(), 1, "element {j} is not join irreducible");
        lc[0]
    }

    /// kappa(j) = join of all x with x meet j = j_star. Lands on a meet
    /// irreducible and is an order isomorphism J(L) -> M(L).
    pub fn kappa(&self, j: usize) -> usize {
        let jstar = self.ji_star(j);
        let mut acc = self.bottom();
        for x in 0..self.len() {
            if self.meet(x, j) == jstar {
                acc = self.join(acc, x);
            }
        }
        acc
    }

    /// Birkhoff test: a finite lattice is distributive iff it has as many
    /// elements as the join-irreducible subposet has lower sets.
    pub fn is_distributive(&self) -> Result<bool> {
        let sub = self.poset.induced(&self.join_irr);
        Ok(sub.lower_sets()?.len() == self.len())
    }

    /// The congruence that keeps exactly the join irreducibles at the given
    /// positions uncontracted. Positions index into `join_irreducibles`.
    pub fn congruence(&self, uncontracted: &Bitset) -> Congruence {
        assert_eq!(uncontracted.len(), self.join_irr.len());
        let n = self.len();
        let mut id_to_class: BTreeMap<Bitset, usize> = BTreeMap::new();
        let mut ids: Vec<Bitset> = Vec::new();
        for x in 0..n {
            let mut id = self.j_sets[x].clone();
            id.intersect_with(uncontracted);
            if !id_to_class.contains_key(&id) {
                id_to_class.insert(id.clone(), 0);
                ids.push(id);
            }
        }
        ids.sort();
        for (k, id) in ids.iter().enumerate() {
            *id_to_class.get_mut(id).unwrap() = k;
        }
        let mut elem_class = Vec::with_capacity(n);
        for x in 0..n {
            let mut id = self.j_sets[x].clone();
            id.intersect_with(uncontracted);
            elem_class.push(id_to_class[&id]);
        }
        // each class of a lattice congruence is an interval; fold for extrema
        let k = ids.len();
        let mut class_min = vec![usize::MAX; k];
        let mut class_max = vec![usize::MAX; k];
        for x in 0..n {
            let c = elem_class[x];
            class_min[c] = if class_min[c] == usize::MAX {
                x
            } else {
                self.meet(class_min[c], x)
            };
            class_max[c] = if class_max[c] == usize::MAX {
                x
            } else {
                self.join(class_max[c], x)
            };
        }
        let quotient = FinitePoset::from_leq(k, |a, b| ids[a].is_subset(&ids[b]))
            .expect("subset order is a partial order");
        Congruence {
            uncontracted: uncontracted.clone(),
            elem_class,
            class_ids: ids,
            class_min,
            class_max,
            quotient,
        }
    }

    /// Exhaustive congruence test for an arbitrary partition, given as an
    /// element -> part map: parts must respect joins and meets.
    pub fn is_lattice_congruence(&self, elem_part: &[usize]) -> bool {
        assert_eq!(elem_part.len(), self.len());
        let n = self.len();
        for x in 0..n {
            for x2 in x + 1..n {
                if elem_part[x] != elem_part[x2] {
                    continue;
                }
                for y in 0..n {
                    if elem_part[self.join(x, y)] != elem_part[self.join(x2, y)] {
                        return false;
                    }
                    if elem_part[self.meet(x, y)] != elem_part[self.meet(x2, y)] {
                        return false;
                    }
                }
            }
        }
        true
    }
}

/// A lattice congruence described by its uncontracted join irreducibles,
/// with classes fully materialized.
#[derive(Clone, Debug)]
pub struct Congruence {
    uncontracted: Bitset,
    elem_class: Vec<usize>,
    class_ids: Vec<Bitset>,
    class_min: Vec<usize>,
    class_max: Vec<usize>,
    quotient: FinitePoset,
}

impl Congruence {
    pub fn uncontracted(&self) -> &Bitset {
        &self.uncontracted
    }

    pub fn num_classes(&self) -> usize {
        self.class_ids.len()
    }

    pub fn class_of(&self, x: usize) -> usize {
        self.elem_class[x]
    }

    /// Canonical id: the uncontracted part of J(x), as a bitset over
    /// join-irreducible positions. Classes are sorted by this id.
    pub fn class_id(&self, class: usize) -> &Bitset {
        &self.class_ids[class]
    }

    pub fn class_min(&self, class: usize) -> usize {
        self.class_min[class]
    }

    pub fn class_max(&self, class: usize) -> usize {
        self.class_max[class]
    }

    pub fn members(&self, class: usize) -> Vec<usize> {
        (0..self.elem_class.len()).filter(|&x| self.elem_class[x] == class).collect()
    }

    /// The quotient lattice order: inclusion of class ids.
    pub fn quotient(&self) -> &FinitePoset {
        &self.quotient
    }
}
