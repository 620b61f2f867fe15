//! Extremal structure of congruence classes: canonical meetands and joinands
//! of an ASM, depth antichains and the covexillary dictionary, essential
//! points of a permutation, nappes with their contingency invariants, minimal
//! permutations of classes, and the counting layer for removed-nappe sets and
//! permutational-extrema congruences.
//!
//! Everything here works from the height-function matrix directly, so the
//! operations are not limited by the bitmask order bound of [`TetraSpace`];
//! meet decompositions at order 10 and nappe removals at order 15 are fine.
//!
//! [`TetraSpace`]: crate::tetra::TetraSpace

use std::collections::{BTreeMap, BTreeSet, HashMap, HashSet};

use num_bigint::BigUint;
use num_traits::Zero;
use serde::{Deserialize, Serialize};

use crate::asm_core::{Asm, Hfm};
use crate::catalan_congruence::{CatalanCongruence, DepthTriangle};
use crate::perms::Permutation;
use crate::tetra::{anti_bigrassmannian, bigrassmannian, TetraPoint, TriPoint};
use crate::util::{binomial, factorial_big};
use crate::{Error, Result};

/// All fiber points of order n, lexicographically ascending.
fn tetra_points(n: usize) -> Vec<TetraPoint> {
    let m = n as i32 - 2;
    let mut out = Vec::new();
    for x1 in 0..=m {
        for x2 in 0..=m - x1 {
            for x3 in 0..=m - x1 - x2 {
                out.push(TetraPoint(x1, x2, x3, m - x1 - x2 - x3));
            }
        }
    }
    out
}

/// Membership of a fiber point in the lower set J(A), read off the height
/// function: x is in J(A) iff H[x1+x2+1][x1+x3+1] >= x2+x3+2.
pub fn lower_set_contains(h: &Hfm, x: &TetraPoint) -> bool {
    h.get((x.0 + x.1 + 1) as usize, (x.0 + x.2 + 1) as usize) >= x.1 + x.2 + 2
}

/// Elements covered by x: lower a rank coordinate, raise a complementary one.
fn lower_covers(x: &TetraPoint) -> Vec<TetraPoint> {
    let mut out = Vec::new();
    if x.1 > 0 {
        out.push(TetraPoint(x.0 + 1, x.1 - 1, x.2, x.3));
        out.push(TetraPoint(x.0, x.1 - 1, x.2, x.3 + 1));
    }
    if x.2 > 0 {
        out.push(TetraPoint(x.0 + 1, x.1, x.2 - 1, x.3));
        out.push(TetraPoint(x.0, x.1, x.2 - 1, x.3 + 1));
    }
    out
}

fn upper_covers(x: &TetraPoint) -> Vec<TetraPoint> {
    let mut out = Vec::new();
    if x.0 > 0 {
        out.push(TetraPoint(x.0 - 1, x.1 + 1, x.2, x.3));
        out.push(TetraPoint(x.0 - 1, x.1, x.2 + 1, x.3));
    }
    if x.3 > 0 {
        out.push(TetraPoint(x.0, x.1 + 1, x.2, x.3 - 1));
        out.push(TetraPoint(x.0, x.1, x.2 + 1, x.3 - 1));
    }
    out
}

/// Canonical meetands of A: the minimal fiber points outside J(A). A is the
/// meet of the anti-bigrassmannians at these points, and their grid
/// projections (x1+x2+1, x1+x3+1) are exactly the ascent positions of A.
pub fn m_set(a: &Asm) -> Vec<TetraPoint> {
    let h = a.hfm();
    tetra_points(a.n())
        .into_iter()
        .filter(|x| {
            !lower_set_contains(&h, x)
                && lower_covers(x).iter().all(|y| lower_set_contains(&h, y))
        })
        .collect()
}

/// Canonical joinands of A: the maximal fiber points of J(A). A is the join
/// of the bigrassmannians at these points.
pub fn j_set(a: &Asm) -> Vec<TetraPoint> {
    let h = a.hfm();
    tetra_points(a.n())
        .into_iter()
        .filter(|x| {
            lower_set_contains(&h, x)
                && upper_covers(x).iter().all(|y| !lower_set_contains(&h, y))
        })
        .collect()
}

fn check_fiber_points(n: usize, xs: &[TetraPoint]) -> Result<()> {
    for x in xs {
        if x.0 < 0 || x.1 < 0 || x.2 < 0 || x.3 < 0 || x.0 + x.1 + x.2 + x.3 != n as i32 - 2 {
            return Err(Error::Precondition(format!("{x:?} is not a fiber point of order {n}")));
        }
    }
    Ok(())
}

/// Meet of the anti-bigrassmannian permutation matrices at the given fiber
/// points; the empty meet is the top element w0.
pub fn meet_of_meetands(n: usize, xs: &[TetraPoint]) -> Result<Asm> {
    check_fiber_points(n, xs)?;
    let mut h = Asm::w0(n).hfm();
    for x in xs {
        let other = Asm::permutation(&anti_bigrassmannian(x)).hfm();
        h = h.meet(&other).expect("orders match");
    }
    Ok(h.asm())
}

/// Join of the bigrassmannian permutation matrices at the given fiber points;
/// the empty join is the identity.
pub fn join_of_joinands(n: usize, xs: &[TetraPoint]) -> Result<Asm> {
    check_fiber_points(n, xs)?;
    let mut h = Asm::identity(n).hfm();
    for x in xs {
        let other = Asm::permutation(&bigrassmannian(x)).hfm();
        h = h.join(&other).expect("orders match");
    }
    Ok(h.asm())
}

/// The depth triangle of the congruence generated by prescribing depth v at
/// the single triangle point z: the pointwise largest depth triangle with
/// value v at z, namely min(y2, v + |y1-z1| + |y3-z3|).
pub fn singleton_depth(z: TriPoint, v: i32) -> Result<DepthTriangle> {
    if z.0 < 0 || z.1 < 0 || z.2 < 0 {
        return Err(Error::Precondition(format!("{z:?} has negative coordinates")));
    }
    if v.abs() > z.1 || (v - z.1).rem_euclid(2) != 0 {
        return Err(Error::Precondition(format!(
            "depth {v} at {z:?} must satisfy |v| <= {} and v = {} mod 2",
            z.1,
            z.1.rem_euclid(2)
        )));
    }
    let n = (z.0 + z.1 + z.2) as usize + 2;
    DepthTriangle::from_fn(n, |y| y.1.min(v + (y.0 - z.0).abs() + (y.2 - z.2).abs()))
}

/// A partial depth assignment on a triangle antichain: pairwise incomparable
/// points with per-point admissible values that obey the Lipschitz bound
/// |v - w| <= |y1 - z1| + |y3 - z3|. Each extends to a full depth triangle
/// (pointwise minimum of the singleton extensions), and these objects are in
/// bijection with the covexillary permutations of the same order.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(try_from = "AntichainRepr", into = "AntichainRepr")]
pub struct DepthAntichain {
    n: usize,
    entries: BTreeMap<TriPoint, i32>,
}

#[derive(Serialize, Deserialize)]
struct AntichainRepr {
    order: usize,
    entries: Vec<(TriPoint, i32)>,
}

impl From<DepthAntichain> for AntichainRepr {
    fn from(a: DepthAntichain) -> Self {
        AntichainRepr { order: a.n, entries: a.entries.into_iter().collect() }
    }
}

impl TryFrom<AntichainRepr> for DepthAntichain {
    type Error = Error;
    fn try_from(r: AntichainRepr) -> Result<Self> {
        DepthAntichain::new(r.order, r.entries)
    }
}

impl DepthAntichain {
    pub fn new(n: usize, entries: impl IntoIterator<Item = (TriPoint, i32)>) -> Result<Self> {
        if n < 2 {
            return Err(Error::Precondition(format!("order {n} must be at least 2")));
        }
        let mut map = BTreeMap::new();
        for (y, v) in entries {
            if y.0 < 0 || y.1 < 0 || y.2 < 0 || (y.0 + y.1 + y.2) as usize != n - 2 {
                return Err(Error::Precondition(format!(
                    "{y:?} is not a triangle point of order {n}"
                )));
            }
            if v.abs() > y.1 || (v - y.1).rem_euclid(2) != 0 {
                return Err(Error::Precondition(format!(
                    "depth {v} at {y:?} is out of range or has the wrong parity"
                )));
            }
            if map.insert(y, v).is_some() {
                return Err(Error::Precondition(format!("duplicate point {y:?}")));
            }
        }
        let pts: Vec<(TriPoint, i32)> = map.iter().map(|(&y, &v)| (y, v)).collect();
        for (i, &(y, v)) in pts.iter().enumerate() {
            for &(z, w) in &pts[i + 1..] {
                if y.leq(&z) || z.leq(&y) {
                    return Err(Error::Precondition(format!("{y:?} and {z:?} are comparable")));
                }
                if (v - w).abs() > (y.0 - z.0).abs() + (y.2 - z.2).abs() {
                    return Err(Error::Precondition(format!(
                        "depths at {y:?} and {z:?} violate the Lipschitz bound"
                    )));
                }
            }
        }
        Ok(DepthAntichain { n, entries: map })
    }

    pub fn empty(n: usize) -> Self {
        DepthAntichain { n, entries: BTreeMap::new() }
    }

    pub fn order(&self) -> usize {
        self.n
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn entries(&self) -> &BTreeMap<TriPoint, i32> {
        &self.entries
    }

    /// The pointwise largest depth triangle restricting to this assignment:
    /// the minimum of the singleton extensions, or the maximal triangle for
    /// the empty antichain.
    pub fn extend(&self) -> DepthTriangle {
        if self.entries.is_empty() {
            return DepthTriangle::maximal(self.n).expect("order validated on construction");
        }
        DepthTriangle::from_fn(self.n, |y| {
            self.entries
                .iter()
                .map(|(z, v)| y.1.min(v + (y.0 - z.0).abs() + (y.2 - z.2).abs()))
                .min()
                .expect("nonempty")
        })
        .expect("pointwise minima of singleton depths form a depth triangle")
    }

    /// The covexillary permutation matrix with this antichain as its meetand
    /// projection: the meet of the anti-bigrassmannians at the points
    /// (y1, (y2-v)/2, (y2+v)/2, y3). The empty antichain gives w0.
    pub fn asm(&self) -> Asm {
        let meetands: Vec<TetraPoint> = self
            .entries
            .iter()
            .map(|(y, v)| TetraPoint(y.0, (y.1 - v) / 2, (y.1 + v) / 2, y.2))
            .collect();
        meet_of_meetands(self.n, &meetands).expect("antichain entries are valid meetands")
    }
}

/// All depth antichains of order n, enumerated as bare antichains first and
/// value assignments second. Exponential in n; intended for small orders.
pub fn all_depth_antichains(n: usize) -> Vec<DepthAntichain> {
    let m = n as i32 - 2;
    let mut pts = Vec::new();
    for y1 in 0..=m {
        for y2 in 0..=m - y1 {
            pts.push(TriPoint(y1, y2, m - y1 - y2));
        }
    }

    fn rec_points(pts: &[TriPoint], i: usize, cur: &mut Vec<TriPoint>, out: &mut Vec<Vec<TriPoint>>) {
        out.push(cur.clone());
        for k in i..pts.len() {
            let y = pts[k];
            if cur.iter().all(|z| !y.leq(z) && !z.leq(&y)) {
                cur.push(y);
                rec_points(pts, k + 1, cur, out);
                cur.pop();
            }
        }
    }

    fn rec_values(
        n: usize,
        ac: &[TriPoint],
        idx: usize,
        assign: &mut Vec<(TriPoint, i32)>,
        out: &mut Vec<DepthAntichain>,
    ) {
        if idx == ac.len() {
            out.push(DepthAntichain { n, entries: assign.iter().copied().collect() });
            return;
        }
        let y = ac[idx];
        let mut v = -y.1;
        while v <= y.1 {
            if assign
                .iter()
                .all(|&(z, w)| (v - w).abs() <= (y.0 - z.0).abs() + (y.2 - z.2).abs())
            {
                assign.push((y, v));
                rec_values(n, ac, idx + 1, assign, out);
                assign.pop();
            }
            v += 2;
        }
    }

    let mut antichains = Vec::new();
    rec_points(&pts, 0, &mut Vec::new(), &mut antichains);
    let mut out = Vec::new();
    for ac in &antichains {
        rec_values(n, ac, 0, &mut Vec::new(), &mut out);
    }
    out
}

/// The depth antichain of a covexillary permutation matrix: project each
/// canonical meetand x to the triangle point (x1, x2+x3, x4) with value
/// x3 - x2. Fails with [`Error::NotCovexillary`] when two meetands share a
/// fiber or the projection is not a depth antichain, which happens exactly
/// for the ASMs that are not covexillary permutation matrices.
pub fn depth_antichain_of(a: &Asm) -> Result<DepthAntichain> {
    let mut proj: BTreeMap<TriPoint, TetraPoint> = BTreeMap::new();
    for x in m_set(a) {
        let key = TriPoint(x.0, x.1 + x.2, x.3);
        if let Some(prev) = proj.get(&key) {
            return Err(Error::NotCovexillary(format!(
                "meetands {prev:?} and {x:?} lie in the same fiber"
            )));
        }
        proj.insert(key, x);
    }
    DepthAntichain::new(a.n(), proj.into_iter().map(|(y, x)| (y, x.2 - x.1))).map_err(|_| {
        Error::NotCovexillary("the meetand projection is not a depth antichain".into())
    })
}

/// Extremal data of the congruence generated by a depth triangle, per class
/// in class-mask order (by size, then mask). Classes are intervals in the
/// lattice: the tops are 3412-avoiding permutation matrices, while the
/// bottoms are ASMs that frequently carry -1 entries. The Bruhat-least
/// permutation inside each class is 321-avoiding and is listed separately.
#[derive(Clone, Debug)]
pub struct ClassExtremaReport {
    pub order: usize,
    pub classes: usize,
    /// Interval bottoms per class.
    pub minima: Vec<Asm>,
    /// Interval tops per class.
    pub maxima: Vec<Asm>,
    /// The unique 321-avoiding permutation of each class, its Bruhat minimum.
    pub minimal_permutations: Vec<Permutation>,
    /// True iff every interval bottom is a permutation matrix. False for
    /// most walls: a class can bottom out below its least permutation.
    pub minima_permutational: bool,
    /// True iff every interval top is a 3412-avoiding permutation matrix.
    pub maxima_covexillary: bool,
}

pub fn class_extrema(depth: &DepthTriangle) -> Result<ClassExtremaReport> {
    let cong = CatalanCongruence::new(depth)?;
    let masks = cong.all_class_masks();
    let p321 = Permutation::from_slice(&[3, 2, 1]).expect("pattern");
    let p3412 = Permutation::from_slice(&[3, 4, 1, 2]).expect("pattern");
    let mut reps: HashMap<u128, Permutation> = HashMap::new();
    for s in Permutation::all(depth.order()) {
        if s.avoids(&p321) {
            let prev = reps.insert(cong.class_mask(&s.matrix()), s);
            assert!(prev.is_none(), "two 321-avoiders in one congruence class");
        }
    }
    let mut minima = Vec::with_capacity(masks.len());
    let mut maxima = Vec::with_capacity(masks.len());
    let mut minimal_permutations = Vec::with_capacity(masks.len());
    let mut minima_permutational = true;
    let mut maxima_covexillary = true;
    for &mask in &masks {
        let lo = cong.class_min(mask)?;
        let hi = cong.class_max(mask)?;
        minima_permutational &= lo.is_permutational().is_some();
        maxima_covexillary &=
            hi.is_permutational().map(|s| s.avoids(&p3412)).unwrap_or(false);
        minimal_permutations.push(
            reps.remove(&mask).expect("every congruence class has a 321-avoiding member"),
        );
        minima.push(lo);
        maxima.push(hi);
    }
    Ok(ClassExtremaReport {
        order: depth.order(),
        classes: masks.len(),
        minima,
        maxima,
        minimal_permutations,
        minima_permutational,
        maxima_covexillary,
    })
}

/// The green cells of the inversion diagram of sigma, 1-based with a guard
/// ring: (i, j) is green iff i > sigma^{-1}(j) and j < sigma(i).
fn green_grid(sigma: &Permutation) -> Vec<Vec<bool>> {
    let n = sigma.n();
    let inv = sigma.inverse();
    let mut g = vec![vec![false; n + 2]; n + 2];
    for i in 1..=n {
        for j in 1..=n {
            g[i][j] = i > inv.image(j) && j < sigma.image(i);
        }
    }
    g
}

/// Green cells with no green neighbor above or to the right, in row-major
/// order. These carry the full meet decomposition of a covexillary
/// permutation.
pub fn essential_cells(sigma: &Permutation) -> Vec<(usize, usize)> {
    let n = sigma.n();
    let g = green_grid(sigma);
    let mut out = Vec::new();
    for i in 1..=n {
        for j in 1..=n {
            if g[i][j] && !g[i - 1][j] && !g[i][j + 1] {
                out.push((i, j));
            }
        }
    }
    out
}

/// The statistics quadruple of a cell of sigma's diagram, in display order:
/// greens below in the column, earlier rows with image beyond j, non-greens
/// to the left in the row, greens to the left in the row.
pub fn cell_quadruple(sigma: &Permutation, i: usize, j: usize) -> TetraPoint {
    let n = sigma.n();
    let g = green_grid(sigma);
    let x1 = (i + 1..=n).filter(|&i2| g[i2][j]).count() as i32;
    let x2 = (1..i).filter(|&k| sigma.image(k) > j).count() as i32;
    let x3 = (1..j).filter(|&j2| !g[i][j2]).count() as i32;
    let x4 = (1..j).filter(|&j2| g[i][j2]).count() as i32;
    TetraPoint(x1, x2, x3, x4)
}

/// Essential cells with their display quadruples.
pub fn essential_points(sigma: &Permutation) -> Vec<((usize, usize), TetraPoint)> {
    essential_cells(sigma).into_iter().map(|(i, j)| ((i, j), cell_quadruple(sigma, i, j))).collect()
}

/// Swap the first and last components: display quadruples and canonical
/// meetand coordinates differ by this relabeling.
fn display_swap(x: &TetraPoint) -> TetraPoint {
    TetraPoint(x.3, x.1, x.2, x.0)
}

/// The meet-irreducible permutation named by a display quadruple: the
/// anti-bigrassmannian at (x4, x2, x3, x1).
pub fn quadruple_meetand(x: &TetraPoint) -> Permutation {
    anti_bigrassmannian(&display_swap(x))
}

/// The display quadruples of the essential cells of a covexillary
/// permutation, in row-major cell order. The meet of [`quadruple_meetand`]
/// over them reproduces the permutation matrix, and their
/// [`display_swap`]-images are exactly its canonical meetands.
///
/// [`display_swap`]: quadruple_meetand
pub fn covexillary_meet_decomposition(sigma: &Permutation) -> Result<Vec<TetraPoint>> {
    let pat = Permutation::from_slice(&[3, 4, 1, 2]).expect("pattern");
    if sigma.contains_pattern(&pat) {
        return Err(Error::NotCovexillary(format!("{sigma} contains the pattern 3412")));
    }
    Ok(essential_points(sigma).into_iter().map(|(_, q)| q).collect())
}

/// The nappe of an ASM: over each occupied cell of the height-function grid,
/// the fiber-maximal point of J(A) (the one with minimal first coordinate).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Nappe {
    n: usize,
    points: BTreeMap<(i32, i32), TetraPoint>,
}

impl Nappe {
    pub fn of(a: &Asm) -> Nappe {
        let h = a.hfm();
        let mut points: BTreeMap<(i32, i32), TetraPoint> = BTreeMap::new();
        for x in tetra_points(a.n()) {
            if !lower_set_contains(&h, &x) {
                continue;
            }
            let key = (x.0 + x.1, x.0 + x.2);
            match points.get(&key) {
                Some(prev) if prev.0 <= x.0 => {}
                _ => {
                    points.insert(key, x);
                }
            }
        }
        Nappe { n: a.n(), points }
    }

    pub fn order(&self) -> usize {
        self.n
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn points(&self) -> Vec<TetraPoint> {
        self.points.values().copied().collect()
    }

    pub fn contains(&self, x: &TetraPoint) -> bool {
        self.points.get(&(x.0 + x.1, x.0 + x.2)) == Some(x)
    }

    /// The nappe point over interior grid cell (i, j), 1-based: the fiber
    /// maximum at positions x1+x2+1 = i, x1+x3+1 = j, if the cell is covered.
    pub fn at_cell(&self, i: usize, j: usize) -> Option<TetraPoint> {
        self.points.get(&(i as i32 - 1, j as i32 - 1)).copied()
    }
}

fn check_inversion_pair(sigma: &Permutation, i: usize, j: usize) -> Result<()> {
    let n = sigma.n();
    if !(1 <= i && i < j && j <= n) {
        return Err(Error::Precondition(format!("positions ({i}, {j}) out of range for order {n}")));
    }
    if sigma.image(i) <= sigma.image(j) {
        return Err(Error::Precondition(format!("({i}, {j}) is not an inversion of {sigma}")));
    }
    Ok(())
}

/// The fiber points deleted from the lower set when the inversion (i, j) of
/// sigma is unswapped: J(P_sigma) minus J(P_{sigma(i j)}).
pub fn nappe_removed(sigma: &Permutation, i: usize, j: usize) -> Result<BTreeSet<TetraPoint>> {
    check_inversion_pair(sigma, i, j)?;
    let t = sigma.swap_positions(i, j);
    let hs = Asm::permutation(sigma).hfm();
    let ht = Asm::permutation(&t).hfm();
    Ok(tetra_points(sigma.n())
        .into_iter()
        .filter(|x| lower_set_contains(&hs, x) && !lower_set_contains(&ht, x))
        .collect())
}

/// The removed set computed without the swap: the nappe points of P_sigma in
/// the grid rectangle i <= x1+x2+1 < j, sigma(j) <= x1+x3+1 < sigma(i).
pub fn nappe_rectangle(sigma: &Permutation, i: usize, j: usize) -> Result<BTreeSet<TetraPoint>> {
    check_inversion_pair(sigma, i, j)?;
    let (si, sj) = (sigma.image(i) as i32, sigma.image(j) as i32);
    let (lo, hi) = (i as i32, j as i32);
    Ok(Nappe::of(&Asm::permutation(sigma))
        .points()
        .into_iter()
        .filter(|x| {
            lo <= x.0 + x.1 + 1 && x.0 + x.1 + 1 < hi && sj <= x.0 + x.2 + 1 && x.0 + x.2 + 1 < si
        })
        .collect())
}

/// A contingency table of a permutation against an inversion (i, j): row
/// groups are the prefix before i, singleton rows i..=j, and the suffix after
/// j; column groups likewise around sigma(j)..=sigma(i). Together with
/// (i, j), it determines the removed-nappe set.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct ContingencyMatrix {
    rows: Vec<Vec<u32>>,
}

impl ContingencyMatrix {
    pub fn rows(&self) -> &[Vec<u32>] {
        &self.rows
    }

    pub fn dims(&self) -> (usize, usize) {
        (self.rows.len(), self.rows.first().map_or(0, Vec::len))
    }
}

impl std::fmt::Display for ContingencyMatrix {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        for (r, row) in self.rows.iter().enumerate() {
            if r > 0 {
                writeln!(f)?;
            }
            for (c, v) in row.iter().enumerate() {
                if c > 0 {
                    write!(f, " ")?;
                }
                write!(f, "{v}")?;
            }
        }
        Ok(())
    }
}

/// The (j-i+3) x (sigma(i)-sigma(j)+3) contingency table of sigma at the
/// inversion (i, j).
pub fn contingency(sigma: &Permutation, i: usize, j: usize) -> Result<ContingencyMatrix> {
    check_inversion_pair(sigma, i, j)?;
    let n = sigma.n();
    let (si, sj) = (sigma.image(i), sigma.image(j));
    let row_group = |p: usize| {
        if p < i {
            0
        } else if p <= j {
            p - i + 1
        } else {
            j - i + 2
        }
    };
    let col_group = |v: usize| {
        if v < sj {
            0
        } else if v <= si {
            v - sj + 1
        } else {
            si - sj + 2
        }
    };
    let mut rows = vec![vec![0u32; si - sj + 3]; j - i + 3];
    for p in 1..=n {
        rows[row_group(p)][col_group(sigma.image(p))] += 1;
    }
    Ok(ContingencyMatrix { rows })
}

/// True iff (i, j) is an inversion of sigma with no intermediate value at an
/// intermediate position, i.e. the transposition is a Bruhat cover.
pub fn is_cover_inversion(sigma: &Permutation, i: usize, j: usize) -> Result<bool> {
    let n = sigma.n();
    if !(1 <= i && i < j && j <= n) {
        return Err(Error::Precondition(format!("positions ({i}, {j}) out of range for order {n}")));
    }
    let (si, sj) = (sigma.image(i), sigma.image(j));
    if si <= sj {
        return Ok(false);
    }
    Ok(!(i + 1..j).any(|k| sj < sigma.image(k) && sigma.image(k) < si))
}

/// Number of distinct removed-nappe sets over all inversions of all
/// permutations of order n, and over Bruhat-cover inversions only. Counted
/// through the (i, j, contingency) keys that classify the sets.
pub fn count_nappe_sets(n: usize) -> Result<(u64, u64)> {
    if !(2..=8).contains(&n) {
        return Err(Error::BoundExceeded { what: "removed-nappe census", needed: n, bound: 8 });
    }
    let mut all: HashSet<(usize, usize, ContingencyMatrix)> = HashSet::new();
    let mut covers: HashSet<(usize, usize, ContingencyMatrix)> = HashSet::new();
    for sigma in Permutation::all(n) {
        for i in 1..=n {
            for j in i + 1..=n {
                if sigma.image(i) <= sigma.image(j) {
                    continue;
                }
                let key = (i, j, contingency(&sigma, i, j)?);
                if is_cover_inversion(&sigma, i, j)? {
                    covers.insert(key.clone());
                }
                all.insert(key);
            }
        }
    }
    Ok((all.len() as u64, covers.len() as u64))
}

/// Closed-form counting series for removed-nappe sets: coefficients 0..=max_n
/// of x^2/(1-x)^4 * F(x) with F the two-multinomial series for all
/// inversions, and of x^2/((1-x)^4 (1-2x)^2) for cover inversions.
pub fn removed_nappe_series(max_n: usize) -> (Vec<BigUint>, Vec<BigUint>) {
    let mut f = vec![BigUint::zero(); max_n + 1];
    for a in 0..=max_n {
        for b in 0..=max_n - a {
            for c in 0..=max_n - a - b {
                for d in 0..=max_n - a - b - c {
                    for e in 0..=max_n - a - b - c - d {
                        let k = a + b + c + d + e;
                        let num = factorial_big(a + b + c) * factorial_big(a + d + e);
                        let den = factorial_big(a)
                            * factorial_big(b)
                            * factorial_big(c)
                            * factorial_big(d)
                            * factorial_big(e);
                        f[k] += num / den;
                    }
                }
            }
        }
    }
    let mut all = vec![BigUint::zero(); max_n + 1];
    let mut covers = vec![BigUint::zero(); max_n + 1];
    for n in 2..=max_n.max(1) {
        if n > max_n {
            break;
        }
        for k in 0..=n - 2 {
            all[n] += &f[k] * BigUint::from(binomial(n - 2 - k + 3, 3));
        }
        for p in 0..=n - 2 {
            let q = n - 2 - p;
            covers[n] +=
                BigUint::from(binomial(p + 3, 3)) * BigUint::from((q as u64 + 1) << q);
        }
    }
    (all, covers)
}

/// Position triples (i, j, k), i < j < k, carrying a 321 pattern of sigma.
pub fn patterns_321(sigma: &Permutation) -> Vec<(usize, usize, usize)> {
    let n = sigma.n();
    let mut out = Vec::new();
    for i in 1..=n {
        for j in i + 1..=n {
            if sigma.image(i) <= sigma.image(j) {
                continue;
            }
            for k in j + 1..=n {
                if sigma.image(j) > sigma.image(k) {
                    out.push((i, j, k));
                }
            }
        }
    }
    out
}

/// Class-preserving descents of sigma: for each 321 pattern (i, j, k), the
/// swaps at (i, j) and (j, k) that stay in sigma's congruence class. At
/// least one of the two always qualifies while a 321 pattern exists.
pub fn descent_moves(cong: &CatalanCongruence, sigma: &Permutation) -> Result<Vec<Permutation>> {
    if cong.space().n() != sigma.n() {
        return Err(Error::SizeMismatch { left: cong.space().n(), right: sigma.n() });
    }
    let cid = cong.class_mask(&sigma.matrix());
    let mut moves = Vec::new();
    for (i, j, k) in patterns_321(sigma) {
        for (a, b) in [(i, j), (j, k)] {
            let t = sigma.swap_positions(a, b);
            if cong.class_mask(&t.matrix()) == cid {
                moves.push(t);
            }
        }
    }
    Ok(moves)
}

/// Descend from sigma through class-preserving swaps until no 321 pattern
/// remains; the result is the unique 321-avoiding permutation of the class,
/// its Bruhat minimum. `choose` picks the next move by index and may be
/// stateful; every choice reaches the same endpoint.
pub fn minimal_permutation_by(
    cong: &CatalanCongruence,
    sigma: &Permutation,
    mut choose: impl FnMut(&[Permutation]) -> usize,
) -> Result<Permutation> {
    let mut cur = sigma.clone();
    loop {
        let moves = descent_moves(cong, &cur)?;
        if moves.is_empty() {
            debug_assert!(patterns_321(&cur).is_empty());
            return Ok(cur);
        }
        cur = moves[choose(&moves)].clone();
    }
}

/// [`minimal_permutation_by`] with the first available move.
pub fn minimal_permutation(cong: &CatalanCongruence, sigma: &Permutation) -> Result<Permutation> {
    minimal_permutation_by(cong, sigma, |_| 0)
}

fn nonperm_pair_graph(n: usize, joins: bool) -> Result<(Vec<TetraPoint>, Vec<u64>)> {
    let pts = tetra_points(n);
    if pts.len() > 64 {
        return Err(Error::BoundExceeded {
            what: "non-permutational pair graph",
            needed: pts.len(),
            bound: 64,
        });
    }
    let hfms: Vec<Hfm> = pts
        .iter()
        .map(|x| {
            let p = if joins { bigrassmannian(x) } else { anti_bigrassmannian(x) };
            Asm::permutation(&p).hfm()
        })
        .collect();
    let mut adj = vec![0u64; pts.len()];
    for a in 0..pts.len() {
        for b in a + 1..pts.len() {
            let h = if joins { hfms[a].join(&hfms[b]) } else { hfms[a].meet(&hfms[b]) }
                .expect("orders match");
            if h.asm().is_permutational().is_none() {
                adj[a] |= 1 << b;
                adj[b] |= 1 << a;
            }
        }
    }
    Ok((pts, adj))
}

/// Fiber points of order n with adjacency masks joining the pairs whose
/// bigrassmannian join is not a permutation matrix. A congruence has every
/// class minimum permutational iff its uncontracted set is independent here.
pub fn nonperm_join_graph(n: usize) -> Result<(Vec<TetraPoint>, Vec<u64>)> {
    nonperm_pair_graph(n, true)
}

/// Dual graph: pairs whose anti-bigrassmannian meet is not a permutation
/// matrix, governing permutational class maxima.
pub fn nonperm_meet_graph(n: usize) -> Result<(Vec<TetraPoint>, Vec<u64>)> {
    nonperm_pair_graph(n, false)
}

fn mask_components(mask: u64, nb: &[u64]) -> Vec<u64> {
    let mut out = Vec::new();
    let mut rem = mask;
    while rem != 0 {
        let seed = rem & rem.wrapping_neg();
        let mut comp = seed;
        let mut front = seed;
        while front != 0 {
            let mut grown = 0u64;
            let mut m = front;
            while m != 0 {
                let vb = m & m.wrapping_neg();
                m ^= vb;
                grown |= nb[vb.trailing_zeros() as usize] & mask;
            }
            front = grown & !comp;
            comp |= front;
        }
        out.push(comp);
        rem &= !comp;
    }
    out
}

fn independent_rec(mask: u64, nb: &[u64], memo: &mut HashMap<u64, u128>) -> u128 {
    if mask == 0 {
        return 1;
    }
    if let Some(&v) = memo.get(&mask) {
        return v;
    }
    let comps = mask_components(mask, nb);
    let r = if comps.len() > 1 {
        comps.iter().map(|&c| independent_rec(c, nb, memo)).product()
    } else {
        // branch on a maximum-degree vertex: excluded, or included with its
        // closed neighborhood removed
        let mut best = 0u64;
        let mut best_deg = -1i64;
        let mut m = mask;
        while m != 0 {
            let vb = m & m.wrapping_neg();
            m ^= vb;
            let d = (nb[vb.trailing_zeros() as usize] & mask).count_ones() as i64;
            if d > best_deg {
                best_deg = d;
                best = vb;
            }
        }
        let rest = mask & !best;
        independent_rec(rest, nb, memo)
            + independent_rec(rest & !nb[best.trailing_zeros() as usize], nb, memo)
    };
    memo.insert(mask, r);
    r
}

/// Number of independent vertex sets of a graph given as adjacency masks
/// (component factorization with memoized max-degree branching).
pub fn count_independent_sets(adjacency: &[u64]) -> u128 {
    assert!(adjacency.len() <= 64, "adjacency masks limit the graph to 64 vertices");
    let full =
        if adjacency.len() == 64 { u64::MAX } else { (1u64 << adjacency.len()) - 1 };
    independent_rec(full, adjacency, &mut HashMap::new())
}

/// Total number of congruences of order n: every subset of the fiber poset
/// generates one, so this is 2^|T_n|.
pub fn count_all_congruences(n: usize) -> Result<u128> {
    let len = tetra_points(n).len();
    if len > 127 {
        return Err(Error::BoundExceeded { what: "congruence census", needed: len, bound: 127 });
    }
    Ok(1u128 << len)
}

/// Number of congruences of order n whose class minima are all permutation
/// matrices: the independent sets of the non-permutational join graph.
pub fn count_min_permutational(n: usize) -> Result<u128> {
    let (_, adj) = nonperm_join_graph(n)?;
    Ok(count_independent_sets(&adj))
}

/// Number of congruences whose class minima and maxima are all permutation
/// matrices: independent sets of the union of the join and meet graphs.
pub fn count_min_max_permutational(n: usize) -> Result<u128> {
    let (_, adj_j) = nonperm_join_graph(n)?;
    let (_, adj_m) = nonperm_meet_graph(n)?;
    let union: Vec<u64> = adj_j.iter().zip(&adj_m).map(|(a, b)| a | b).collect();
    Ok(count_independent_sets(&union))
}

/// True iff the congruence generated by the given uncontracted fiber points
/// has every class minimum permutational: no two of them (with multiplicity
/// ignored) join to a non-permutation.
pub fn is_min_permutational(n: usize, uncontracted: &[TetraPoint]) -> Result<bool> {
    let (pts, adj) = nonperm_join_graph(n)?;
    let mut mask = 0u64;
    for x in uncontracted {
        let i = pts
            .binary_search(x)
            .map_err(|_| Error::Precondition(format!("{x:?} is not a fiber point of order {n}")))?;
        mask |= 1 << i;
    }
    let mut m = mask;
    while m != 0 {
        let vb = m & m.wrapping_neg();
        m ^= vb;
        if adj[vb.trailing_zeros() as usize] & mask != 0 {
            return Ok(false);
        }
    }
    Ok(true)
}

/// For a non-permutation ASM, a joinand pair certifying a -1 entry: maximal
/// elements J, J' of the lower set whose bigrassmannian join is a
/// non-permutation ASM below A with a -1 at the returned 1-based cell.
pub fn reduced_nonperm_certificate(
    a: &Asm,
) -> Result<(TetraPoint, TetraPoint, (usize, usize))> {
    if a.is_permutational().is_some() {
        return Err(Error::Permutational);
    }
    let h = a.hfm();
    let joinands = j_set(a);
    let m = a.n() as i32 - 3;
    for x1 in 0..=m {
        for x2 in 0..=m - x1 {
            for x3 in 0..=m - x1 - x2 {
                let x4 = m - x1 - x2 - x3;
                let j1 = TetraPoint(x1 + 1, x2, x3, x4);
                let j2 = TetraPoint(x1, x2 + 1, x3, x4);
                let j3 = TetraPoint(x1, x2, x3 + 1, x4);
                let j4 = TetraPoint(x1, x2, x3, x4 + 1);
                if !(lower_set_contains(&h, &j1)
                    && lower_set_contains(&h, &j4)
                    && !lower_set_contains(&h, &j2)
                    && !lower_set_contains(&h, &j3))
                {
                    continue;
                }
                for jc in &joinands {
                    for jc2 in &joinands {
                        if j1.leq(jc)
                            && j4.leq(jc2)
                            && !j2.leq(jc)
                            && !j3.leq(jc)
                            && !j2.leq(jc2)
                            && !j3.leq(jc2)
                        {
                            return Ok((
                                *jc,
                                *jc2,
                                ((x1 + x2 + 2) as usize, (x1 + x3 + 2) as usize),
                            ));
                        }
                    }
                }
            }
        }
    }
    unreachable!("every non-permutational ASM has a -1 witness covered by joinands")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catalan_congruence::all_depth_triangles;
    use crate::tetra::TetraSpace;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn perm(v: &[usize]) -> Permutation {
        Permutation::from_slice(v).unwrap()
    }

    #[test]
    fn meetands_and_joinands_reconstruct() {
        for n in 2..=5 {
            for a in Asm::all(n) {
                let ms = m_set(&a);
                let js = j_set(&a);
                assert_eq!(meet_of_meetands(n, &ms).unwrap(), a);
                assert_eq!(join_of_joinands(n, &js).unwrap(), a);
                let corners: BTreeSet<(usize, usize)> = ms
                    .iter()
                    .map(|x| ((x.0 + x.1 + 1) as usize, (x.0 + x.2 + 1) as usize))
                    .collect();
                assert_eq!(corners, a.ascents());
            }
        }
        // cross-check against the bitmask machinery at order 4
        let space = TetraSpace::new(4).unwrap();
        for a in Asm::all(4) {
            let ms: BTreeSet<TetraPoint> = m_set(&a).into_iter().collect();
            let js: BTreeSet<TetraPoint> = j_set(&a).into_iter().collect();
            let add: BTreeSet<TetraPoint> =
                space.mask_points(space.addable(&a)).into_iter().collect();
            let rem: BTreeSet<TetraPoint> =
                space.mask_points(space.removable(&a)).into_iter().collect();
            assert_eq!(ms, add);
            assert_eq!(js, rem);
        }
        assert!(m_set(&Asm::w0(4)).is_empty());
        assert!(j_set(&Asm::identity(4)).is_empty());
    }

    #[test]
    fn singleton_depth_goldens() {
        for n in 3..=6 {
            let m = n as i32 - 2;
            let apex = TriPoint(0, m, 0);
            assert_eq!(
                singleton_depth(apex, m).unwrap(),
                DepthTriangle::maximal(n).unwrap()
            );
            assert_eq!(
                singleton_depth(apex, -m).unwrap(),
                DepthTriangle::minimal(n).unwrap()
            );
        }
        assert_eq!(
            singleton_depth(TriPoint(0, 1, 0), -1).unwrap(),
            DepthTriangle::excedance(3).unwrap()
        );
        // prescribed value is attained at the prescribed point
        for (z, v) in [(TriPoint(1, 2, 0), 0), (TriPoint(0, 3, 0), -1), (TriPoint(2, 1, 0), 1)] {
            assert_eq!(singleton_depth(z, v).unwrap().get(z), v);
        }
        assert!(singleton_depth(TriPoint(0, 1, 0), 0).is_err());
        assert!(singleton_depth(TriPoint(1, 0, 1), 2).is_err());
        assert!(singleton_depth(TriPoint(-1, 2, 1), 0).is_err());
    }

    #[test]
    fn depth_antichain_validation() {
        assert!(DepthAntichain::new(4, [(TriPoint(0, 0, 2), 0), (TriPoint(1, 1, 0), 1)]).is_ok());
        // comparable pair
        assert!(DepthAntichain::new(4, [(TriPoint(0, 0, 2), 0), (TriPoint(0, 1, 1), 1)]).is_err());
        // Lipschitz violation: distance 2 in (y1, y3), depth gap 4
        assert!(DepthAntichain::new(5, [(TriPoint(0, 2, 1), 2), (TriPoint(1, 2, 0), -2)]).is_err());
        // value out of range, bad parity, duplicate point, wrong order
        assert!(DepthAntichain::new(4, [(TriPoint(0, 1, 1), 3)]).is_err());
        assert!(DepthAntichain::new(4, [(TriPoint(0, 1, 1), 0)]).is_err());
        assert!(DepthAntichain::new(4, [(TriPoint(0, 1, 1), 1), (TriPoint(0, 1, 1), -1)]).is_err());
        assert!(DepthAntichain::new(4, [(TriPoint(0, 1, 0), 1)]).is_err());
    }

    #[test]
    fn depth_antichain_counts_and_golden() {
        let mut golden: Vec<DepthAntichain> = vec![DepthAntichain::empty(4)];
        let mut add = |entries: Vec<(TriPoint, i32)>| {
            golden.push(DepthAntichain::new(4, entries).unwrap());
        };
        add(vec![(TriPoint(0, 0, 2), 0)]);
        add(vec![(TriPoint(1, 0, 1), 0)]);
        add(vec![(TriPoint(2, 0, 0), 0)]);
        for v in [1, -1] {
            add(vec![(TriPoint(0, 1, 1), v)]);
            add(vec![(TriPoint(1, 1, 0), v)]);
        }
        for v in [2, 0, -2] {
            add(vec![(TriPoint(0, 2, 0), v)]);
        }
        add(vec![(TriPoint(0, 0, 2), 0), (TriPoint(1, 0, 1), 0)]);
        for v in [1, -1] {
            add(vec![(TriPoint(0, 0, 2), 0), (TriPoint(1, 1, 0), v)]);
        }
        add(vec![(TriPoint(0, 0, 2), 0), (TriPoint(2, 0, 0), 0)]);
        add(vec![(TriPoint(0, 0, 2), 0), (TriPoint(1, 0, 1), 0), (TriPoint(2, 0, 0), 0)]);
        add(vec![(TriPoint(1, 0, 1), 0), (TriPoint(2, 0, 0), 0)]);
        for v in [1, -1] {
            add(vec![(TriPoint(0, 1, 1), v), (TriPoint(2, 0, 0), 0)]);
        }
        for u in [1, -1] {
            for v in [1, -1] {
                add(vec![(TriPoint(0, 1, 1), u), (TriPoint(1, 1, 0), v)]);
            }
        }
        assert_eq!(golden.len(), 23);

        let enumerated = all_depth_antichains(4);
        assert_eq!(enumerated.len(), 23);
        let got: BTreeSet<DepthAntichain> = enumerated.into_iter().collect();
        let want: BTreeSet<DepthAntichain> = golden.into_iter().collect();
        assert_eq!(got, want);

        assert_eq!(all_depth_antichains(5).len(), 103);
        assert_eq!(all_depth_antichains(6).len(), 513);
    }

    #[test]
    fn antichain_extension_restricts_and_round_trips() {
        for n in 4..=5 {
            for e in all_depth_antichains(n) {
                let d = e.extend();
                for (&y, &v) in e.entries() {
                    assert_eq!(d.get(y), v);
                }
                let a = e.asm();
                let s = a.is_permutational().expect("antichain ASMs are permutational");
                assert!(s.avoids(&perm(&[3, 4, 1, 2])));
                assert_eq!(depth_antichain_of(&a).unwrap(), e);
            }
        }
        assert_eq!(depth_antichain_of(&Asm::w0(4)).unwrap(), DepthAntichain::empty(4));
        assert_eq!(DepthAntichain::empty(4).asm(), Asm::w0(4));
        assert_eq!(
            depth_antichain_of(&Asm::identity(4)).unwrap(),
            DepthAntichain::new(
                4,
                [(TriPoint(0, 0, 2), 0), (TriPoint(1, 0, 1), 0), (TriPoint(2, 0, 0), 0)]
            )
            .unwrap()
        );
    }

    #[test]
    fn covexillary_antichain_bijection() {
        let pat = perm(&[3, 4, 1, 2]);
        for n in 4..=5 {
            let all: BTreeSet<DepthAntichain> = all_depth_antichains(n).into_iter().collect();
            let mut seen = BTreeSet::new();
            for s in Permutation::all(n) {
                let a = Asm::permutation(&s);
                if s.avoids(&pat) {
                    let e = depth_antichain_of(&a).unwrap();
                    assert_eq!(e.asm(), a);
                    seen.insert(e);
                } else {
                    assert!(matches!(depth_antichain_of(&a), Err(Error::NotCovexillary(_))));
                }
            }
            assert_eq!(seen, all);
        }
        let covex6 = Permutation::all(6).into_iter().filter(|s| s.avoids(&pat)).count();
        assert_eq!(covex6, 513);
    }

    #[test]
    fn six_way_covexillary_equivalence() {
        let pat = perm(&[3, 4, 1, 2]);
        for n in 4..=5 {
            let walls: Vec<BTreeSet<TetraPoint>> = all_depth_triangles(n)
                .unwrap()
                .iter()
                .map(|d| d.wall().points().iter().copied().collect())
                .collect();
            let congs: Vec<CatalanCongruence> = all_depth_triangles(n)
                .unwrap()
                .iter()
                .map(|d| CatalanCongruence::new(d).unwrap())
                .collect();
            let maxima: Vec<BTreeMap<u128, Asm>> = congs
                .iter()
                .map(|c| {
                    c.all_class_masks()
                        .into_iter()
                        .map(|mask| (mask, c.class_max(mask).unwrap()))
                        .collect()
                })
                .collect();
            for a in Asm::all(n) {
                let s = a.is_permutational();
                let c1 = s.as_ref().map(|p| p.avoids(&pat)).unwrap_or(false);
                let asc: Vec<(usize, usize)> = a.ascents().into_iter().collect();
                let crossing = asc
                    .iter()
                    .any(|&(i, j)| asc.iter().any(|&(k, l)| i < k && j > l));
                let c2 = s.is_some() && !crossing;
                let c3 = depth_antichain_of(&a).is_ok();
                let ms: BTreeSet<TetraPoint> = m_set(&a).into_iter().collect();
                let c5 = walls.iter().any(|w| ms.is_subset(w));
                let c6 = congs
                    .iter()
                    .zip(&maxima)
                    .any(|(c, mx)| mx[&c.class_mask(&a)] == a);
                assert_eq!(c1, c2, "{a}");
                assert_eq!(c1, c3, "{a}");
                assert_eq!(c1, c5, "{a}");
                assert_eq!(c1, c6, "{a}");
            }
        }
    }

    #[test]
    fn class_extrema_pattern_characterizations() {
        for n in 3..=5 {
            for (d, pat) in [
                (DepthTriangle::minimal(n).unwrap(), perm(&[2, 3, 1])),
                (DepthTriangle::maximal(n).unwrap(), perm(&[3, 1, 2])),
            ] {
                let report = class_extrema(&d).unwrap();
                assert!(report.maxima_covexillary);
                let maxima: BTreeSet<Asm> = report.maxima.into_iter().collect();
                let avoiders: BTreeSet<Asm> = Permutation::all(n)
                    .into_iter()
                    .filter(|s| s.avoids(&pat))
                    .map(|s| Asm::permutation(&s))
                    .collect();
                assert_eq!(maxima, avoiders);
            }
        }
        // every congruence of order 4: 14 interval classes, covexillary
        // tops, and the minimal permutations are exactly the 321-avoiders
        // and Bruhat-least in their classes
        let p321 = perm(&[3, 2, 1]);
        let avoiders: BTreeSet<Permutation> =
            Permutation::all(4).into_iter().filter(|s| s.avoids(&p321)).collect();
        for d in all_depth_triangles(4).unwrap() {
            let report = class_extrema(&d).unwrap();
            assert!(report.maxima_covexillary);
            assert_eq!(report.classes, 14);
            let mins: BTreeSet<Permutation> =
                report.minimal_permutations.iter().cloned().collect();
            assert_eq!(mins, avoiders);

            let cong = CatalanCongruence::new(&d).unwrap();
            let rep_of: BTreeMap<u128, &Permutation> = cong
                .all_class_masks()
                .into_iter()
                .zip(&report.minimal_permutations)
                .collect();
            for s in Permutation::all(4) {
                let rep = rep_of[&cong.class_mask(&s.matrix())];
                assert!(rep.bruhat_leq(&s).unwrap());
            }
            // the named interval structure: bottom <= least permutation <= top
            for ((lo, hi), rep) in
                report.minima.iter().zip(&report.maxima).zip(&report.minimal_permutations)
            {
                assert!(lo.leq(&rep.matrix()).unwrap());
                assert!(rep.matrix().leq(hi).unwrap());
            }
        }
        // interval bottoms are genuinely non-permutational in general: the
        // order-3 excedance class of 312 bottoms out at the -1 matrix
        let report = class_extrema(&DepthTriangle::excedance(3).unwrap()).unwrap();
        assert!(!report.minima_permutational);
        assert_eq!(report.classes, 5);
        let diamond =
            Asm::try_from_rows(&[vec![0, 1, 0], vec![1, -1, 1], vec![0, 1, 0]]).unwrap();
        let pos = report.minima.iter().position(|lo| *lo == diamond).unwrap();
        assert_eq!(report.minimal_permutations[pos], perm(&[3, 1, 2]));
        assert_eq!(report.maxima[pos], Asm::permutation(&perm(&[3, 1, 2])));
    }

    #[test]
    fn essential_points_match_meetands() {
        let pat = perm(&[3, 4, 1, 2]);
        for n in 3..=5 {
            for s in Permutation::all(n) {
                let ep = essential_points(&s);
                let cells: Vec<(usize, usize)> = ep.iter().map(|&(c, _)| c).collect();
                let ne = cells
                    .iter()
                    .any(|&(i, j)| cells.iter().any(|&(k, l)| i < k && j > l));
                assert_eq!(s.avoids(&pat), !ne, "{s}");
                // x3 counts non-green cells to the left and below alike
                let g = green_grid(&s);
                for &((i, j), q) in &ep {
                    let below = (i + 1..=n).filter(|&i2| !g[i2][j]).count() as i32;
                    assert_eq!(q.2, below);
                }
                if s.avoids(&pat) {
                    let quads = covexillary_meet_decomposition(&s).unwrap();
                    let swapped: BTreeSet<TetraPoint> =
                        quads.iter().map(display_swap).collect();
                    let ms: BTreeSet<TetraPoint> =
                        m_set(&Asm::permutation(&s)).into_iter().collect();
                    assert_eq!(swapped, ms, "{s}");
                    let mut h = Asm::w0(n).hfm();
                    for q in &quads {
                        h = h.meet(&Asm::permutation(&quadruple_meetand(q)).hfm()).unwrap();
                    }
                    assert_eq!(h.asm(), Asm::permutation(&s));
                } else {
                    assert!(covexillary_meet_decomposition(&s).is_err());
                }
            }
            // meetand statistics of the one-sided avoidance classes
            for s in Permutation::all(n) {
                if s.avoids(&perm(&[2, 3, 1])) {
                    assert!(essential_points(&s).iter().all(|(_, q)| q.2 == 0));
                }
                if s.avoids(&perm(&[3, 1, 2])) {
                    assert!(essential_points(&s).iter().all(|(_, q)| q.1 == 0));
                }
            }
        }
    }

    #[test]
    fn large_covexillary_decomposition_golden() {
        let s = perm(&[3, 10, 2, 6, 4, 7, 9, 8, 5, 1]);
        let ep = essential_points(&s);
        let cells: Vec<(usize, usize)> = ep.iter().map(|&(c, _)| c).collect();
        assert_eq!(cells, vec![(2, 3), (4, 3), (6, 4), (6, 6), (7, 7)]);
        let quads: BTreeSet<TetraPoint> = ep.iter().map(|&(_, q)| q).collect();
        let printed: BTreeSet<TetraPoint> = [
            TetraPoint(6, 0, 2, 0),
            TetraPoint(5, 1, 1, 1),
            TetraPoint(3, 2, 1, 2),
            TetraPoint(2, 1, 2, 3),
            TetraPoint(1, 1, 2, 4),
        ]
        .into_iter()
        .collect();
        assert_eq!(quads, printed);

        let ms: BTreeSet<TetraPoint> = m_set(&Asm::permutation(&s)).into_iter().collect();
        let swapped: BTreeSet<TetraPoint> = printed.iter().map(display_swap).collect();
        assert_eq!(ms, swapped);

        let meet = meet_of_meetands(10, &swapped.iter().copied().collect::<Vec<_>>()).unwrap();
        assert_eq!(meet, Asm::permutation(&s));
        assert!(depth_antichain_of(&Asm::permutation(&s)).is_ok());
    }

    #[test]
    fn nappe_rectangle_matches_removed() {
        for s in Permutation::all(4) {
            for i in 1..=4 {
                for j in i + 1..=4 {
                    if s.image(i) <= s.image(j) {
                        assert!(nappe_removed(&s, i, j).is_err());
                        continue;
                    }
                    let removed = nappe_removed(&s, i, j).unwrap();
                    assert_eq!(removed, nappe_rectangle(&s, i, j).unwrap());
                    let t = s.swap_positions(i, j);
                    assert!(t.bruhat_leq(&s).unwrap());
                }
            }
        }
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        for _ in 0..200 {
            let n = if rng.gen_bool(0.5) { 5 } else { 6 };
            let s = Permutation::random(n, &mut rng);
            let pairs: Vec<(usize, usize)> = (1..=n)
                .flat_map(|i| (i + 1..=n).map(move |j| (i, j)))
                .filter(|&(i, j)| s.image(i) > s.image(j))
                .collect();
            if pairs.is_empty() {
                continue;
            }
            let (i, j) = pairs[rng.gen_range(0..pairs.len())];
            assert_eq!(nappe_removed(&s, i, j).unwrap(), nappe_rectangle(&s, i, j).unwrap());
        }
    }

    #[test]
    fn nappe_hourglass_exclusion() {
        for n in 3..=5 {
            for a in Asm::all(n) {
                let pts = Nappe::of(&a).points();
                for x in &pts {
                    for y in &pts {
                        let q = [x.3 - y.3, x.0 - y.0, y.2 - x.2, y.1 - x.1];
                        assert!(!q.iter().all(|&v| v > 0), "{a}");
                        assert!(!q.iter().all(|&v| v < 0), "{a}");
                    }
                }
            }
        }
    }

    #[test]
    fn wall_nappe_interaction() {
        // frozen counterexample to sign alignment: both points lie on the
        // minimal wall and the nappe of 4231 yet the four comparison
        // quantities have mixed signs
        let a = Asm::permutation(&perm(&[4, 2, 3, 1]));
        let nappe = Nappe::of(&a);
        let wall: BTreeSet<TetraPoint> =
            DepthTriangle::minimal(4).unwrap().wall().points().iter().copied().collect();
        let cx = TetraPoint(0, 2, 0, 0);
        let cy = TetraPoint(1, 0, 0, 1);
        assert!(nappe.contains(&cx) && nappe.contains(&cy));
        assert!(wall.contains(&cx) && wall.contains(&cy));
        let qq = [
            cx.0 + cx.1 - cy.0 - cy.1,
            cx.0 + cx.2 - cy.0 - cy.2,
            cy.3 - cx.3,
            cx.0 - cy.0,
        ];
        assert_eq!(qq, [1, -1, 1, -1]);

        // the operative statement: a transposition leaves the class iff the
        // wall misses the removed rectangle
        for d in all_depth_triangles(4).unwrap() {
            let cong = CatalanCongruence::new(&d).unwrap();
            let wall: BTreeSet<TetraPoint> = d.wall().points().iter().copied().collect();
            for s in Permutation::all(4) {
                for i in 1..=4 {
                    for j in i + 1..=4 {
                        if s.image(i) <= s.image(j) {
                            continue;
                        }
                        let t = s.swap_positions(i, j);
                        let same =
                            cong.equivalent(&Asm::permutation(&s), &Asm::permutation(&t));
                        let rect = nappe_rectangle(&s, i, j).unwrap();
                        assert_eq!(same, rect.is_disjoint(&wall), "{s} ({i},{j})");
                    }
                }
            }
        }
    }

    #[test]
    fn contingency_large_golden() {
        // the designated inversion of the order-15 example; the variant with
        // images 5 and 12 exchanged is not an inversion at (5, 10)
        let bad = perm(&[2, 9, 4, 1, 5, 10, 6, 14, 7, 12, 13, 8, 11, 3, 15]);
        assert!(matches!(contingency(&bad, 5, 10), Err(Error::Precondition(_))));

        let s = perm(&[2, 9, 4, 1, 12, 10, 6, 14, 7, 5, 13, 8, 11, 3, 15]);
        let cm = contingency(&s, 5, 10).unwrap();
        assert_eq!(cm.dims(), (8, 10));
        let expected: Vec<Vec<u32>> = vec![
            vec![3, 0, 0, 0, 0, 1, 0, 0, 0, 0],
            vec![0, 0, 0, 0, 0, 0, 0, 0, 1, 0],
            vec![0, 0, 0, 0, 0, 0, 1, 0, 0, 0],
            vec![0, 0, 1, 0, 0, 0, 0, 0, 0, 0],
            vec![0, 0, 0, 0, 0, 0, 0, 0, 0, 1],
            vec![0, 0, 0, 1, 0, 0, 0, 0, 0, 0],
            vec![0, 1, 0, 0, 0, 0, 0, 0, 0, 0],
            vec![1, 0, 0, 0, 1, 0, 0, 1, 0, 2],
        ];
        assert_eq!(cm.rows(), expected.as_slice());
        for r in 1..=6 {
            assert_eq!(cm.rows()[r].iter().sum::<u32>(), 1);
        }
        for c in 1..=8 {
            assert_eq!(cm.rows().iter().map(|row| row[c]).sum::<u32>(), 1);
        }

        let removed = nappe_removed(&s, 5, 10).unwrap();
        assert_eq!(removed.len(), 35);
        assert_eq!(removed, nappe_rectangle(&s, 5, 10).unwrap());

        let json = serde_json::to_string(&cm).unwrap();
        assert_eq!(serde_json::from_str::<ContingencyMatrix>(&json).unwrap(), cm);
        assert!(cm.to_string().starts_with("3 0 0 0 0 1 0 0 0 0\n"));
    }

    #[test]
    fn contingency_keys_classify_removed_sets() {
        for n in 3..=5 {
            let mut by_key: HashMap<(usize, usize, ContingencyMatrix), BTreeSet<TetraPoint>> =
                HashMap::new();
            let mut by_set: HashMap<BTreeSet<TetraPoint>, (usize, usize, ContingencyMatrix)> =
                HashMap::new();
            for s in Permutation::all(n) {
                for i in 1..=n {
                    for j in i + 1..=n {
                        if s.image(i) <= s.image(j) {
                            continue;
                        }
                        let key = (i, j, contingency(&s, i, j).unwrap());
                        let removed = nappe_removed(&s, i, j).unwrap();
                        if let Some(prev) = by_key.get(&key) {
                            assert_eq!(*prev, removed, "key must determine the set");
                        } else {
                            by_key.insert(key.clone(), removed.clone());
                        }
                        if let Some(prev) = by_set.get(&removed) {
                            assert_eq!(*prev, key, "set must determine the key");
                        } else {
                            by_set.insert(removed, key);
                        }
                    }
                }
            }
            assert_eq!(by_key.len(), by_set.len());
        }
    }

    #[test]
    fn removed_nappe_census_matches_series() {
        let (all, covers) = removed_nappe_series(10);
        let want_all = [0u64, 0, 1, 9, 52, 260, 1291, 6915, 41814, 289758, 2291381];
        let want_covers = [0u64, 0, 1, 8, 38, 140, 443, 1268, 3384, 8584, 20965];
        for n in 0..=10 {
            assert_eq!(all[n], BigUint::from(want_all[n]), "n={n}");
            assert_eq!(covers[n], BigUint::from(want_covers[n]), "n={n}");
        }
        for n in 2..=7 {
            let (got_all, got_covers) = count_nappe_sets(n).unwrap();
            assert_eq!(got_all, want_all[n], "n={n}");
            assert_eq!(got_covers, want_covers[n], "n={n}");
        }
        assert!(count_nappe_sets(9).is_err());
    }

    #[test]
    fn minimal_permutation_reaches_unique_class_minimum() {
        let p321 = perm(&[3, 2, 1]);
        for n in 3..=4 {
            for d in all_depth_triangles(n).unwrap() {
                let cong = CatalanCongruence::new(&d).unwrap();
                let perms = Permutation::all(n);
                let mut by_class: BTreeMap<u128, Vec<Permutation>> = BTreeMap::new();
                for s in &perms {
                    by_class.entry(cong.class_mask(&s.matrix())).or_default().push(s.clone());
                }
                let avoiders = perms.iter().filter(|s| s.avoids(&p321)).count();
                assert_eq!(by_class.len(), avoiders);
                for members in by_class.values() {
                    let avs: Vec<&Permutation> =
                        members.iter().filter(|s| s.avoids(&p321)).collect();
                    assert_eq!(avs.len(), 1, "one 321-avoider per class");
                    let target = avs[0];
                    for s in members {
                        assert!(target.bruhat_leq(s).unwrap());
                    }
                }
                let mut rng = ChaCha8Rng::seed_from_u64(7);
                for s in &perms {
                    let want =
                        minimal_permutation(&cong, s).unwrap();
                    assert!(want.avoids(&p321));
                    assert!(cong.equivalent(&want.matrix(), &s.matrix()));
                    let last = minimal_permutation_by(&cong, s, |ms| ms.len() - 1).unwrap();
                    assert_eq!(last, want);
                    for _ in 0..3 {
                        let random =
                            minimal_permutation_by(&cong, s, |ms| rng.gen_range(0..ms.len()))
                                .unwrap();
                        assert_eq!(random, want);
                    }
                }
                // descent dichotomy: one of the two inner swaps of every 321
                // pattern preserves the class; both only if the outer one does
                for s in &perms {
                    let cid = cong.class_mask(&s.matrix());
                    for (i, j, k) in patterns_321(s) {
                        let a = cong.class_mask(&s.swap_positions(i, j).matrix()) == cid;
                        let b = cong.class_mask(&s.swap_positions(j, k).matrix()) == cid;
                        assert!(a || b);
                        if a && b {
                            assert_eq!(
                                cong.class_mask(&s.swap_positions(i, k).matrix()),
                                cid
                            );
                        }
                    }
                }
            }
        }
        let exc = CatalanCongruence::excedance(3).unwrap();
        assert_eq!(minimal_permutation(&exc, &perm(&[3, 2, 1])).unwrap(), perm(&[2, 3, 1]));
    }

    #[test]
    fn nonperm_graph_structure_order3() {
        let (pts, adj_j) = nonperm_join_graph(3).unwrap();
        assert_eq!(pts.len(), 4);
        let idx = |x: TetraPoint| pts.iter().position(|&p| p == x).unwrap();
        let a = idx(TetraPoint(1, 0, 0, 0));
        let b = idx(TetraPoint(0, 0, 0, 1));
        // the only non-permutational join at order 3 is 132 v 213
        let edges_j: usize = adj_j.iter().map(|m| m.count_ones() as usize).sum::<usize>() / 2;
        assert_eq!(edges_j, 1);
        assert_ne!(adj_j[a] & (1 << b), 0);

        let (_, adj_m) = nonperm_meet_graph(3).unwrap();
        let c = idx(TetraPoint(0, 1, 0, 0));
        let d = idx(TetraPoint(0, 0, 1, 0));
        let edges_m: usize = adj_m.iter().map(|m| m.count_ones() as usize).sum::<usize>() / 2;
        assert_eq!(edges_m, 1);
        assert_ne!(adj_m[c] & (1 << d), 0);
    }

    #[test]
    fn permutational_extrema_censuses() {
        assert_eq!(
            (2..=7).map(|n| count_all_congruences(n).unwrap()).collect::<Vec<_>>(),
            vec![2, 16, 1024, 1048576, 34359738368, 72057594037927936]
        );
        assert_eq!(
            (2..=6).map(|n| count_min_permutational(n).unwrap()).collect::<Vec<_>>(),
            vec![2, 12, 216, 10480, 1344096]
        );
        assert_eq!(
            (2..=6).map(|n| count_min_max_permutational(n).unwrap()).collect::<Vec<_>>(),
            vec![2, 9, 69, 716, 8986]
        );
        // spot certificates: singletons are independent, the 2134/1324 pair
        // joins to a -1 matrix, and catalan walls at order 4 always carry
        // such a pair
        assert!(is_min_permutational(4, &[]).unwrap());
        assert!(is_min_permutational(4, &[TetraPoint(0, 0, 0, 2)]).unwrap());
        assert!(
            !is_min_permutational(4, &[TetraPoint(0, 0, 0, 2), TetraPoint(1, 0, 0, 1)]).unwrap()
        );
        assert!(!is_min_permutational(4, &tetra_points(4)).unwrap());
        for d in all_depth_triangles(4).unwrap() {
            assert!(!is_min_permutational(4, d.wall().points()).unwrap());
        }
        assert!(is_min_permutational(4, &[TetraPoint(0, 0, 0, 0)]).is_err());
    }

    /// Class minima and maxima of the congruence generated by an arbitrary
    /// uncontracted mask, straight from the bitmask machinery.
    fn direct_extrema_permutational(space: &TetraSpace, k_mask: u128) -> (bool, bool) {
        let classes: BTreeSet<u128> =
            Asm::all(space.n()).iter().map(|a| space.j_mask(a) & k_mask).collect();
        let mut min_ok = true;
        let mut max_ok = true;
        for cid in classes {
            let lo = space.asm_of_mask(space.lower_closure(cid)).unwrap();
            min_ok &= lo.is_permutational().is_some();
            let mut up = 0u128;
            let mut rest = k_mask & !cid;
            while rest != 0 {
                let i = rest.trailing_zeros() as usize;
                rest &= rest - 1;
                up |= space.up_mask(i);
            }
            let hi = space.asm_of_mask(space.full_mask() & !up).unwrap();
            max_ok &= hi.is_permutational().is_some();
        }
        (min_ok, max_ok)
    }

    /// Membership mask of a point list over the lexicographic point order.
    fn graph_mask(pts: &[TetraPoint], xs: &[TetraPoint]) -> u64 {
        xs.iter().fold(0u64, |m, x| m | 1 << pts.binary_search(x).unwrap())
    }

    #[test]
    fn census_criteria_agree_with_direct_quotients() {
        // order 3: all 16 subsets, direct quotient vs transversal and
        // pairwise criteria (masks in graph order, translated for the space)
        let space = TetraSpace::new(3).unwrap();
        let nonperm: Vec<Asm> =
            Asm::all(3).into_iter().filter(|a| a.is_permutational().is_none()).collect();
        let (pts3, adj3j) = nonperm_join_graph(3).unwrap();
        let (_, adj3m) = nonperm_meet_graph(3).unwrap();
        let js3: Vec<u64> = nonperm.iter().map(|a| graph_mask(&pts3, &j_set(a))).collect();
        let ms3: Vec<u64> = nonperm.iter().map(|a| graph_mask(&pts3, &m_set(a))).collect();
        let pairwise_free = |k_mask: u64, adj: &[u64]| {
            !(0..adj.len())
                .any(|a| k_mask >> a & 1 == 1 && adj[a] & k_mask != 0)
        };
        let mut count_min = 0u32;
        let mut count_both = 0u32;
        for k_mask in 0u64..16 {
            let selected: Vec<TetraPoint> =
                (0..pts3.len()).filter(|&i| k_mask >> i & 1 == 1).map(|i| pts3[i]).collect();
            let s_mask: u128 = selected
                .iter()
                .fold(0u128, |m, x| m | 1 << space.index_of(x).unwrap());
            let (min_ok, max_ok) = direct_extrema_permutational(&space, s_mask);
            assert_eq!(min_ok, !js3.iter().any(|&j| j & !k_mask == 0));
            assert_eq!(max_ok, !ms3.iter().any(|&m| m & !k_mask == 0));
            assert_eq!(min_ok, pairwise_free(k_mask, &adj3j));
            assert_eq!(max_ok, pairwise_free(k_mask, &adj3m));
            assert_eq!(min_ok, is_min_permutational(3, &selected).unwrap());
            count_min += min_ok as u32;
            count_both += (min_ok && max_ok) as u32;
        }
        assert_eq!((count_min, count_both), (12, 9));

        // order 4: pair criterion vs joinand/meetand transversal criterion on
        // all 1024 subsets, plus seeded direct spot checks
        let space4 = TetraSpace::new(4).unwrap();
        let nonperm4: Vec<Asm> =
            Asm::all(4).into_iter().filter(|a| a.is_permutational().is_none()).collect();
        let (pts4, adj4j) = nonperm_join_graph(4).unwrap();
        let (_, adj4m) = nonperm_meet_graph(4).unwrap();
        let js4: Vec<u64> = nonperm4.iter().map(|a| graph_mask(&pts4, &j_set(a))).collect();
        let ms4: Vec<u64> = nonperm4.iter().map(|a| graph_mask(&pts4, &m_set(a))).collect();
        let mut count_min = 0u32;
        let mut count_both = 0u32;
        for k_mask in 0u64..1024 {
            let mn = !js4.iter().any(|&j| j & !k_mask == 0);
            let mx = !ms4.iter().any(|&m| m & !k_mask == 0);
            assert_eq!(mn, pairwise_free(k_mask, &adj4j));
            assert_eq!(mx, pairwise_free(k_mask, &adj4m));
            count_min += mn as u32;
            count_both += (mn && mx) as u32;
        }
        assert_eq!((count_min, count_both), (216, 69));

        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for _ in 0..40 {
            let k_mask = rng.gen_range(0u64..1024);
            let s_mask: u128 = (0..pts4.len())
                .filter(|&i| k_mask >> i & 1 == 1)
                .fold(0u128, |m, i| m | 1 << space4.index_of(&pts4[i]).unwrap());
            let (min_ok, max_ok) = direct_extrema_permutational(&space4, s_mask);
            assert_eq!(min_ok, !js4.iter().any(|&j| j & !k_mask == 0));
            assert_eq!(max_ok, !ms4.iter().any(|&m| m & !k_mask == 0));
        }
    }

    #[test]
    fn reduced_certificate_properties() {
        let diamond =
            Asm::try_from_rows(&[vec![0, 1, 0], vec![1, -1, 1], vec![0, 1, 0]]).unwrap();
        assert_eq!(
            reduced_nonperm_certificate(&diamond).unwrap(),
            (TetraPoint(1, 0, 0, 0), TetraPoint(0, 0, 0, 1), (2, 2))
        );
        assert!(matches!(
            reduced_nonperm_certificate(&Asm::identity(4)),
            Err(Error::Permutational)
        ));

        for n in 3..=5 {
            for a in Asm::all(n) {
                if a.is_permutational().is_some() {
                    assert!(reduced_nonperm_certificate(&a).is_err());
                    continue;
                }
                let (jc, jc2, (r, c)) = reduced_nonperm_certificate(&a).unwrap();
                let joined = join_of_joinands(n, &[jc, jc2]).unwrap();
                assert!(joined.is_permutational().is_none());
                assert!(joined.leq(&a).unwrap());
                assert_eq!(joined.get(r - 1, c - 1), -1);
                assert_eq!(a.get(r - 1, c - 1), -1);
            }
        }
    }

    #[test]
    fn negative_entries_match_fiber_witnesses() {
        for n in 3..=5 {
            for a in Asm::all(n) {
                let h = a.hfm();
                let m = n as i32 - 3;
                let mut witnessed: BTreeSet<(usize, usize)> = BTreeSet::new();
                for x1 in 0..=m {
                    for x2 in 0..=m - x1 {
                        for x3 in 0..=m - x1 - x2 {
                            let x4 = m - x1 - x2 - x3;
                            let j1 = TetraPoint(x1 + 1, x2, x3, x4);
                            let j2 = TetraPoint(x1, x2 + 1, x3, x4);
                            let j3 = TetraPoint(x1, x2, x3 + 1, x4);
                            let j4 = TetraPoint(x1, x2, x3, x4 + 1);
                            if lower_set_contains(&h, &j1)
                                && lower_set_contains(&h, &j4)
                                && !lower_set_contains(&h, &j2)
                                && !lower_set_contains(&h, &j3)
                            {
                                witnessed
                                    .insert(((x1 + x2 + 1) as usize, (x1 + x3 + 1) as usize));
                            }
                        }
                    }
                }
                let negatives: BTreeSet<(usize, usize)> = (0..n)
                    .flat_map(|r| (0..n).map(move |c| (r, c)))
                    .filter(|&(r, c)| a.get(r, c) == -1)
                    .collect();
                assert_eq!(witnessed, negatives, "{a}");
            }
        }
    }

    #[test]
    fn depth_antichain_serde() {
        let e = DepthAntichain::new(4, [(TriPoint(0, 0, 2), 0), (TriPoint(1, 1, 0), 1)]).unwrap();
        let json = serde_json::to_string(&e).unwrap();
        assert_eq!(json, r#"{"order":4,"entries":[[[0,0,2],0],[[1,1,0],1]]}"#);
        assert_eq!(serde_json::from_str::<DepthAntichain>(&json).unwrap(), e);

        let empty = DepthAntichain::empty(6);
        let json = serde_json::to_string(&empty).unwrap();
        assert_eq!(serde_json::from_str::<DepthAntichain>(&json).unwrap(), empty);

        // invalid payloads are rejected on deserialization
        assert!(serde_json::from_str::<DepthAntichain>(
            r#"{"order":4,"entries":[[[0,1,1],0]]}"#
        )
        .is_err());
    }
}
