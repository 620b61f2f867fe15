//! The triangle poset D_n, the tetrahedron poset T_n, and the dictionary
//! between ASMs and lower sets of T_n.
//!
//! Points of T_n are quadruples of nonnegative integers summing to n-2; the
//! point x corresponds to the bigrassmannian permutation matrix j(x), and
//! these matrices are exactly the join irreducibles of the ASM lattice. An
//! ASM is recovered from its lower set by joining height matrices.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::asm_core::{Asm, Hfm};
use crate::birkhoff::FinitePoset;
use crate::perms::Permutation;
use crate::{Error, Result};

/// Largest supported order for mask-based lower sets: |T_9| = 120 <= 128.
pub const MAX_MASK_ORDER: usize = 9;

/// A point (y1, y2, y3) of the triangle poset D_n, y1+y2+y3 = n-2.
#[derive(Copy, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Debug, Serialize, Deserialize)]
pub struct TriPoint(pub i32, pub i32, pub i32);

/// A point (x1, x2, x3, x4) of the tetrahedron poset T_n, sum n-2.
#[derive(Copy, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Debug, Serialize, Deserialize)]
pub struct TetraPoint(pub i32, pub i32, pub i32, pub i32);

impl TriPoint {
    /// Order of the ambient poset: n = y1+y2+y3+2.
    pub fn order(&self) -> usize {
        (self.0 + self.1 + self.2) as usize + 2
    }

    pub fn rank(&self) -> i32 {
        self.1
    }

    /// D_n order: y <= z iff y1+y2 <= z1+z2 and y2+y3 <= z2+z3.
    pub fn leq(&self, other: &TriPoint) -> bool {
        self.0 + self.1 <= other.0 + other.1 && self.1 + self.2 <= other.1 + other.2
    }
}

impl TetraPoint {
    pub fn order(&self) -> usize {
        (self.0 + self.1 + self.2 + self.3) as usize + 2
    }

    pub fn rank(&self) -> i32 {
        self.1 + self.2
    }

    /// T_n order: x <= y iff x1 >= y1, x2 <= y2, x3 <= y3, x4 >= y4.
    pub fn leq(&self, other: &TetraPoint) -> bool {
        self.0 >= other.0 && self.1 <= other.1 && self.2 <= other.2 && self.3 >= other.3
    }

    /// Horizontal projection onto D_n: (x1, x2+x3, x4).
    pub fn projection(&self) -> TriPoint {
        TriPoint(self.0, self.1 + self.2, self.3)
    }
}

/// The bigrassmannian permutation j(x): identity blocks I_{x1} and I_{x4}
/// around two swapped increasing runs of lengths x2+1 and x3+1.
pub fn bigrassmannian(x: &TetraPoint) -> Permutation {
    let (x1, x2, x3) = (x.0 as usize, x.1 as usize, x.2 as usize);
    let n = x.order();
    let mut s: Vec<usize> = (1..=n).collect();
    for i in 1..=x2 + 1 {
        s[x1 + i - 1] = x1 + x3 + 1 + i;
    }
    for i in 1..=x3 + 1 {
        s[x1 + x2 + i] = x1 + i;
    }
    Permutation::new(s).expect("block formula yields a bijection")
}

/// The anti-bigrassmannian permutation m(x) = kappa(j(x)): four decreasing
/// blocks.
pub fn anti_bigrassmannian(x: &TetraPoint) -> Permutation {
    let (x1, x2, x3, x4) = (x.0 as usize, x.1 as usize, x.2 as usize, x.3 as usize);
    let n = x.order();
    let mut s = vec![0usize; n];
    for i in 1..=x2 {
        s[i - 1] = n + 1 - i;
    }
    for i in 1..=x1 + 1 {
        s[x2 + i - 1] = x3 + x1 + 2 - i;
    }
    for i in 1..=x4 + 1 {
        s[x2 + x1 + i] = x3 + x1 + 1 + x4 + 2 - i;
    }
    for i in 1..=x3 {
        s[n - x3 + i - 1] = x3 + 1 - i;
    }
    Permutation::new(s).expect("block formula yields a bijection")
}

/// The points of D_n in canonical order (y2 ascending, then y1), with the
/// triangle order.
#[derive(Clone, Debug)]
pub struct TriSpace {
    n: usize,
    points: Vec<TriPoint>,
    index: BTreeMap<TriPoint, usize>,
}

impl TriSpace {
    pub fn new(n: usize) -> Result<Self> {
        if n < 2 {
            return Err(Error::OrderOutOfRange { n, min: 2, max: usize::MAX });
        }
        let m = (n - 2) as i32;
        let mut points = Vec::new();
        for y2 in 0..=m {
            for y1 in 0..=m - y2 {
                points.push(TriPoint(y1, y2, m - y1 - y2));
            }
        }
        let index = points.iter().enumerate().map(|(i, &p)| (p, i)).collect();
        Ok(Self { n, points, index })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn points(&self) -> &[TriPoint] {
        &self.points
    }

    pub fn index_of(&self, p: &TriPoint) -> Option<usize> {
        self.index.get(p).copied()
    }

    pub fn poset(&self) -> FinitePoset {
        FinitePoset::from_leq(self.points.len(), |a, b| self.points[a].leq(&self.points[b]))
            .expect("the triangle order is a partial order")
    }
}

/// The points of T_n in canonical order (rank, x1, x2), with the tetra
/// order, mask-based lower sets, and the ASM dictionary.
#[derive(Clone, Debug)]
pub struct TetraSpace {
    n: usize,
    points: Vec<TetraPoint>,
    index: BTreeMap<TetraPoint, usize>,
    hfms: Vec<Hfm>,
    down_masks: Vec<u128>,
    up_masks: Vec<u128>,
}

impl TetraSpace {
    pub fn new(n: usize) -> Result<Self> {
        if !(2..=MAX_MASK_ORDER).contains(&n) {
            return Err(Error::OrderOutOfRange { n, min: 2, max: MAX_MASK_ORDER });
        }
        let m = (n - 2) as i32;
        let mut points = Vec::new();
        for rank in 0..=m {
            for x1 in 0..=m - rank {
                for x2 in 0..=rank {
                    let x3 = rank - x2;
                    points.push(TetraPoint(x1, x2, x3, m - x1 - rank));
                }
            }
        }
        debug_assert!(points.len() <= 128);
        let index: BTreeMap<TetraPoint, usize> =
            points.iter().enumerate().map(|(i, &p)| (p, i)).collect();
        let hfms: Vec<Hfm> = points
            .iter()
            .map(|x| Asm::permutation(&bigrassmannian(x)).hfm())
            .collect();
        let len = points.len();
        let mut down_masks = vec![0u128; len];
        let mut up_masks = vec![0u128; len];
        for a in 0..len {
            for b in 0..len {
                if points[a].leq(&points[b]) {
                    up_masks[a] |= 1 << b;
                    down_masks[b] |= 1 << a;
                }
            }
        }
        Ok(Self { n, points, index, hfms, down_masks, up_masks })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn points(&self) -> &[TetraPoint] {
        &self.points
    }

    pub fn point(&self, i: usize) -> TetraPoint {
        self.points[i]
    }

    pub fn index_of(&self, p: &TetraPoint) -> Option<usize> {
        self.index.get(p).copied()
    }

    pub fn full_mask(&self) -> u128 {
        if self.points.len() == 128 {
            u128::MAX
        } else {
            (1u128 << self.points.len()) - 1
        }
    }

    pub fn poset(&self) -> FinitePoset {
        FinitePoset::from_leq(self.points.len(), |a, b| self.points[a].leq(&self.points[b]))
            .expect("the tetrahedron order is a partial order")
    }

    /// Mask of points below point i, inclusive.
    pub fn down_mask(&self, i: usize) -> u128 {
        self.down_masks[i]
    }

    /// Mask of points above point i, inclusive.
    pub fn up_mask(&self, i: usize) -> u128 {
        self.up_masks[i]
    }

    /// The lower set J(A), through the fiber-height test
    /// x in J(A) iff H[x1+x2+1][x1+x3+1] >= x2+x3+2.
    pub fn j_mask(&self, a: &Asm) -> u128 {
        assert_eq!(a.n(), self.n);
        let h = a.hfm();
        self.j_mask_of_hfm(&h)
    }

    pub fn j_mask_of_hfm(&self, h: &Hfm) -> u128 {
        assert_eq!(h.n(), self.n);
        let mut mask = 0u128;
        for (i, x) in self.points.iter().enumerate() {
            let row = (x.0 + x.1 + 1) as usize;
            let col = (x.0 + x.2 + 1) as usize;
            if h.get(row, col) >= x.1 + x.2 + 2 {
                mask |= 1 << i;
            }
        }
        mask
    }

    /// Defining membership test: j(x) below A in the lattice order. Kept as
    /// the oracle for `j_mask`.
    pub fn j_mask_definitional(&self, a: &Asm) -> u128 {
        assert_eq!(a.n(), self.n);
        let h = a.hfm();
        let mut mask = 0u128;
        for i in 0..self.points.len() {
            if self.hfms[i].leq(&h).unwrap() {
                mask |= 1 << i;
            }
        }
        mask
    }

    pub fn is_lower_set(&self, mask: u128) -> bool {
        let mut rest = mask;
        while rest != 0 {
            let i = rest.trailing_zeros() as usize;
            rest &= rest - 1;
            if self.down_masks[i] & !mask != 0 {
                return false;
            }
        }
        true
    }

    pub fn lower_closure(&self, mask: u128) -> u128 {
        let mut out = 0u128;
        let mut rest = mask;
        while rest != 0 {
            let i = rest.trailing_zeros() as usize;
            rest &= rest - 1;
            out |= self.down_masks[i];
        }
        out
    }

    /// Rebuilds the ASM from a lower set: entrywise join of the j(x) height
    /// matrices over the base |i-j|.
    pub fn asm_of_mask(&self, mask: u128) -> Result<Asm> {
        if !self.is_lower_set(mask) {
            return Err(Error::Precondition(format!(
                "mask {mask:#x} is not a lower set of T_{}",
                self.n
            )));
        }
        let mut h = Asm::identity(self.n).hfm();
        let mut rest = mask;
        while rest != 0 {
            let i = rest.trailing_zeros() as usize;
            rest &= rest - 1;
            h = h.join(&self.hfms[i])?;
        }
        Ok(h.asm())
    }

    /// Maximal points of J(A): the removable ones, sitting under the
    /// descent corners of A.
    pub fn removable(&self, a: &Asm) -> u128 {
        let j = self.j_mask(a);
        let mut out = 0u128;
        let mut rest = j;
        while rest != 0 {
            let i = rest.trailing_zeros() as usize;
            rest &= rest - 1;
            if self.up_masks[i] & j == 1 << i {
                out |= 1 << i;
            }
        }
        out
    }

    /// Points addable to J(A) keeping it a lower set: under the ascent
    /// corners of A.
    pub fn addable(&self, a: &Asm) -> u128 {
        let j = self.j_mask(a);
        let mut out = 0u128;
        for i in 0..self.points.len() {
            if j & (1 << i) == 0 && self.down_masks[i] & !j == 1 << i {
                out |= 1 << i;
            }
        }
        out
    }

    /// All lower-set masks, ordered by (size, mask value).
    pub fn all_lower_masks(&self) -> Vec<u128> {
        // decide membership in canonical order, which extends the partial
        // order, so each point's strict down-set is already decided
        fn rec(space: &TetraSpace, k: usize, current: &mut u128, out: &mut Vec<u128>) {
            if k == space.points.len() {
                out.push(*current);
                return;
            }
            rec(space, k + 1, current, out);
            let down = space.down_masks[k] & !(1 << k);
            if down & !*current == 0 {
                *current |= 1 << k;
                rec(space, k + 1, current, out);
                *current &= !(1 << k);
            }
        }
        let mut out = Vec::new();
        let mut current = 0u128;
        rec(self, 0, &mut current, &mut out);
        out.sort_by_key(|&m| (m.count_ones(), m));
        out
    }

    /// The points of a mask in canonical order.
    pub fn mask_points(&self, mask: u128) -> Vec<TetraPoint> {
        (0..self.points.len()).filter(|i| mask >> i & 1 == 1).map(|i| self.points[i]).collect()
    }
}

/// The triangle poset D_n as a generic poset.
pub fn triangle_poset(n: usize) -> Result<FinitePoset> {
    Ok(TriSpace::new(n)?.poset())
}

/// The tetrahedron poset T_n as a generic poset.
pub fn tetra_poset(n: usize) -> Result<FinitePoset> {
    Ok(TetraSpace::new(n)?.poset())
}
