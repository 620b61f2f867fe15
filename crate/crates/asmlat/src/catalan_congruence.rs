//! Catalan congruences of the ASM lattice and their interchangeable
//! encodings: walls in T_n, depth triangles, catalan triangles, and
//! bicolored pipe dreams.
//!
//! A catalan congruence contracts the join irreducibles outside a wall; its
//! quotient is the Stanley lattice of Dyck paths. The four encodings are
//! carried by mutually inverse conversions, and the counting layer covers
//! bipartite pipe dreams, the Boolean-triangle 2-enumeration, and the EGF
//! identities relating the three count families.

use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::asm_core::Asm;
use crate::birkhoff::FinitePoset;
use crate::perms::DyckPath;
use crate::tetra::{TetraPoint, TetraSpace, TriPoint};
use crate::{Error, Result};

/// Largest order accepted by the triangle enumerations.
pub const MAX_ENUM_ORDER: usize = 10;

/// Largest pipe count accepted by the exhaustive tile-filling and
/// Boolean-triangle enumerations (2^C(pipes+1,2) cases).
pub const MAX_PIPES: usize = 6;

fn tri_point_count(n: usize) -> usize {
    n * (n - 1) / 2
}

/// Canonical index of (y1, y2) within a triangle of order n: rows by y2
/// ascending, entries by y1.
fn tri_index(n: usize, y1: i32, y2: i32) -> usize {
    let (y1, y2) = (y1 as usize, y2 as usize);
    y2 * (2 * (n - 1) - y2 + 1) / 2 + y1
}

fn check_order(n: usize) -> Result<()> {
    if !(2..=MAX_ENUM_ORDER).contains(&n) {
        return Err(Error::OrderOutOfRange { n, min: 2, max: MAX_ENUM_ORDER });
    }
    Ok(())
}

/// Converts top-down display rows (row r has r+1 entries) into canonical
/// bottom-up storage.
fn vals_of_rows(kind: &'static str, rows: &[Vec<i32>]) -> Result<(usize, Vec<i32>)> {
    let n = rows.len() + 1;
    if rows.is_empty() {
        return Err(Error::Invalid {
            kind,
            index: (0, 0),
            reason: "no rows".into(),
        });
    }
    let mut vals = vec![0i32; tri_point_count(n)];
    for (r, row) in rows.iter().enumerate() {
        if row.len() != r + 1 {
            return Err(Error::Invalid {
                kind,
                index: (r, row.len()),
                reason: format!("row {r} must have {} entries, found {}", r + 1, row.len()),
            });
        }
        let y2 = (n - 2 - r) as i32;
        for (y1, &v) in row.iter().enumerate() {
            vals[tri_index(n, y1 as i32, y2)] = v;
        }
    }
    Ok((n, vals))
}

fn rows_of_vals(n: usize, vals: &[i32]) -> Vec<Vec<i32>> {
    (0..n - 1)
        .map(|r| {
            let y2 = (n - 2 - r) as i32;
            (0..=r).map(|y1| vals[tri_index(n, y1 as i32, y2)]).collect()
        })
        .collect()
}

fn display_rows(f: &mut fmt::Formatter<'_>, rows: &[Vec<i32>]) -> fmt::Result {
    for (r, row) in rows.iter().enumerate() {
        if r > 0 {
            write!(f, " / ")?;
        }
        for (i, v) in row.iter().enumerate() {
            if i > 0 {
                write!(f, " ")?;
            }
            write!(f, "{v}")?;
        }
    }
    Ok(())
}

/// A depth triangle of order n: an integer labeling of D_n with zero bottom
/// row in which every entry differs by exactly 1 from each of its two
/// children.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Debug, Serialize, Deserialize)]
#[serde(into = "Vec<Vec<i32>>", try_from = "Vec<Vec<i32>>")]
pub struct DepthTriangle {
    n: usize,
    vals: Vec<i32>,
}

impl DepthTriangle {
    pub fn from_rows(rows: &[Vec<i32>]) -> Result<Self> {
        let (n, vals) = vals_of_rows("depth triangle", rows)?;
        Self::from_vals(n, vals)
    }

    fn from_vals(n: usize, vals: Vec<i32>) -> Result<Self> {
        for y1 in 0..n - 1 {
            if vals[tri_index(n, y1 as i32, 0)] != 0 {
                return Err(Error::Invalid {
                    kind: "depth triangle",
                    index: (y1, 0),
                    reason: "bottom row must be zero".into(),
                });
            }
        }
        for y2 in 1..(n - 1) as i32 {
            for y1 in 0..(n - 1) as i32 - y2 {
                let v = vals[tri_index(n, y1, y2)];
                let lc = vals[tri_index(n, y1, y2 - 1)];
                let rc = vals[tri_index(n, y1 + 1, y2 - 1)];
                if (v - lc).abs() != 1 || (v - rc).abs() != 1 {
                    return Err(Error::Invalid {
                        kind: "depth triangle",
                        index: (y1 as usize, y2 as usize),
                        reason: format!(
                            "entry {v} must differ by 1 from both children {lc} and {rc}"
                        ),
                    });
                }
            }
        }
        Ok(Self { n, vals })
    }

    /// Builds and validates the triangle with entries f(y).
    pub fn from_fn(n: usize, f: impl Fn(TriPoint) -> i32) -> Result<Self> {
        if n < 2 {
            return Err(Error::OrderOutOfRange { n, min: 2, max: usize::MAX });
        }
        let m = (n - 2) as i32;
        let mut vals = vec![0i32; tri_point_count(n)];
        for y2 in 0..=m {
            for y1 in 0..=m - y2 {
                vals[tri_index(n, y1, y2)] = f(TriPoint(y1, y2, m - y1 - y2));
            }
        }
        Self::from_vals(n, vals)
    }

    /// The minimal depth triangle, delta(y) = -y2.
    pub fn minimal(n: usize) -> Result<Self> {
        Self::from_fn(n, |y| -y.1)
    }

    /// The maximal depth triangle, delta(y) = y2.
    pub fn maximal(n: usize) -> Result<Self> {
        Self::from_fn(n, |y| y.1)
    }

    /// The excedance depth triangle, delta(y) = -(y2 mod 2).
    pub fn excedance(n: usize) -> Result<Self> {
        Self::from_fn(n, |y| -(y.1 % 2))
    }

    pub fn order(&self) -> usize {
        self.n
    }

    pub fn get(&self, y: TriPoint) -> i32 {
        assert_eq!(y.order(), self.n, "point order mismatch");
        self.vals[tri_index(self.n, y.0, y.1)]
    }

    /// Display rows, top row (y2 = n-2) first.
    pub fn rows(&self) -> Vec<Vec<i32>> {
        rows_of_vals(self.n, &self.vals)
    }

    /// The wall {(y1, (y2-d)/2, (y2+d)/2, y3)} of this triangle.
    pub fn wall(&self) -> Wall {
        let m = (self.n - 2) as i32;
        let mut points = Vec::with_capacity(self.vals.len());
        for y2 in 0..=m {
            for y1 in 0..=m - y2 {
                let d = self.vals[tri_index(self.n, y1, y2)];
                points.push(TetraPoint(y1, (y2 - d) / 2, (y2 + d) / 2, m - y1 - y2));
            }
        }
        let wall = Wall { n: self.n, points };
        debug_assert!(Wall::new(wall.points.clone()).is_ok());
        wall
    }

    /// The catalan triangle gamma(y) = (delta(y) + y2)/2 + y1 + 1.
    pub fn catalan(&self) -> CatalanTriangle {
        let m = (self.n - 2) as i32;
        let mut vals = vec![0i32; self.vals.len()];
        for y2 in 0..=m {
            for y1 in 0..=m - y2 {
                let i = tri_index(self.n, y1, y2);
                vals[i] = (self.vals[i] + y2) / 2 + y1 + 1;
            }
        }
        CatalanTriangle { n: self.n, vals }
    }

    /// The bicolored pipe dream of this triangle: contacts where both
    /// diamond diagonals agree, pipes colored red where depth drops toward
    /// the parent.
    pub fn pipe_dream(&self) -> BicoloredPipeDream {
        let tiles: Vec<Tile> = diamonds(self.n)
            .iter()
            .map(|d| {
                if self.get(d.nw) == self.get(d.ne) && self.get(d.top) == self.get(d.bottom) {
                    Tile::Contact
                } else {
                    Tile::Crossing
                }
            })
            .collect();
        let trace = trace_pipes(self.n, &tiles);
        assert_eq!(trace.loop_count, 0, "depth-derived pipe dreams have no loops");
        let colors: Vec<PipeColor> = trace
            .pipes
            .iter()
            .map(|path| {
                let mut color = None;
                for &(p, c) in path {
                    let bc = if self.get(p) < self.get(c) { PipeColor::Red } else { PipeColor::Blue };
                    match color {
                        None => color = Some(bc),
                        Some(prev) => assert_eq!(prev, bc, "pipes are monochromatic"),
                    }
                }
                color.expect("pipes are nonempty")
            })
            .collect();
        BicoloredPipeDream::new(self.n, tiles, colors)
            .expect("depth-derived pipe dream is valid")
    }

    /// Number of bicolored crossings: diamonds whose two strands have
    /// different colors, i.e. whose side entries differ.
    pub fn bicolored_crossings(&self) -> usize {
        diamonds(self.n).iter().filter(|d| self.get(d.nw) != self.get(d.ne)).count()
    }
}

impl fmt::Display for DepthTriangle {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        display_rows(f, &self.rows())
    }
}

impl From<DepthTriangle> for Vec<Vec<i32>> {
    fn from(t: DepthTriangle) -> Self {
        t.rows()
    }
}

impl TryFrom<Vec<Vec<i32>>> for DepthTriangle {
    type Error = Error;
    fn try_from(rows: Vec<Vec<i32>>) -> Result<Self> {
        Self::from_rows(&rows)
    }
}

/// A catalan triangle: doubly gapless Gelfand-Tsetlin pattern with bottom
/// row 1..n-1. Equivalent to a depth triangle by an affine change of entry.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Debug, Serialize, Deserialize)]
#[serde(into = "Vec<Vec<i32>>", try_from = "Vec<Vec<i32>>")]
pub struct CatalanTriangle {
    n: usize,
    vals: Vec<i32>,
}

impl CatalanTriangle {
    pub fn from_rows(rows: &[Vec<i32>]) -> Result<Self> {
        let (n, vals) = vals_of_rows("catalan triangle", rows)?;
        Self::from_vals(n, vals)
    }

    fn from_vals(n: usize, vals: Vec<i32>) -> Result<Self> {
        for y1 in 0..n - 1 {
            if vals[tri_index(n, y1 as i32, 0)] != y1 as i32 + 1 {
                return Err(Error::Invalid {
                    kind: "catalan triangle",
                    index: (y1, 0),
                    reason: format!("bottom row must be 1..{}", n - 1),
                });
            }
        }
        for y2 in 1..(n - 1) as i32 {
            for y1 in 0..(n - 1) as i32 - y2 {
                let v = vals[tri_index(n, y1, y2)];
                let lc = vals[tri_index(n, y1, y2 - 1)];
                let rc = vals[tri_index(n, y1 + 1, y2 - 1)];
                if !(v == lc || v == lc + 1) || !(rc == v || rc == v + 1) {
                    return Err(Error::Invalid {
                        kind: "catalan triangle",
                        index: (y1 as usize, y2 as usize),
                        reason: format!(
                            "entry {v} must interlace children {lc}, {rc} with gaps at most 1"
                        ),
                    });
                }
            }
        }
        Ok(Self { n, vals })
    }

    pub fn order(&self) -> usize {
        self.n
    }

    pub fn get(&self, y: TriPoint) -> i32 {
        assert_eq!(y.order(), self.n, "point order mismatch");
        self.vals[tri_index(self.n, y.0, y.1)]
    }

    pub fn rows(&self) -> Vec<Vec<i32>> {
        rows_of_vals(self.n, &self.vals)
    }

    /// Inverse of `DepthTriangle::catalan`.
    pub fn depth_triangle(&self) -> DepthTriangle {
        let m = (self.n - 2) as i32;
        let mut vals = vec![0i32; self.vals.len()];
        for y2 in 0..=m {
            for y1 in 0..=m - y2 {
                let i = tri_index(self.n, y1, y2);
                vals[i] = 2 * self.vals[i] - 2 * y1 - y2 - 2;
            }
        }
        DepthTriangle::from_vals(self.n, vals).expect("affine image of a catalan triangle")
    }

    /// Coordinatewise comparison (the lattice order on catalan triangles).
    pub fn leq(&self, other: &Self) -> Result<bool> {
        if self.n != other.n {
            return Err(Error::SizeMismatch { left: self.n, right: other.n });
        }
        Ok(self.vals.iter().zip(&other.vals).all(|(a, b)| a <= b))
    }

    pub fn join(&self, other: &Self) -> Result<Self> {
        if self.n != other.n {
            return Err(Error::SizeMismatch { left: self.n, right: other.n });
        }
        let vals = self.vals.iter().zip(&other.vals).map(|(a, b)| *a.max(b)).collect();
        Ok(Self::from_vals(self.n, vals).expect("catalan triangles are closed under max"))
    }

    pub fn meet(&self, other: &Self) -> Result<Self> {
        if self.n != other.n {
            return Err(Error::SizeMismatch { left: self.n, right: other.n });
        }
        let vals = self.vals.iter().zip(&other.vals).map(|(a, b)| *a.min(b)).collect();
        Ok(Self::from_vals(self.n, vals).expect("catalan triangles are closed under min"))
    }

    /// Matrix view X(i,j) = gamma(j-1, n-1-i, i-j) for 1 <= j <= i <= n-1.
    fn x(&self, i: i32, j: i32) -> i32 {
        let n = self.n as i32;
        self.vals[tri_index(self.n, j - 1, n - 1 - i)]
    }

    fn from_x(n: usize, x: impl Fn(i32, i32) -> i32) -> Self {
        let ni = n as i32;
        let mut vals = vec![0i32; tri_point_count(n)];
        for i in 1..ni {
            for j in 1..=i {
                vals[tri_index(n, j - 1, ni - 1 - i)] = x(i, j);
            }
        }
        Self::from_vals(n, vals).expect("image of a catalan triangle symmetry")
    }

    /// Mirror image: X(i,j) -> X(i, i-j+1) - i + 2j - 1. Corresponds to
    /// reflecting the bicolored pipe dream.
    pub fn reflected(&self) -> Self {
        Self::from_x(self.n, |i, j| self.x(i, i - j + 1) - i + 2 * j - 1)
    }

    /// Dual triangle: X(i,j) -> n - X(i, i-j+1).
    pub fn dual(&self) -> Self {
        let n = self.n as i32;
        Self::from_x(self.n, |i, j| n - self.x(i, i - j + 1))
    }

    pub fn is_symmetric(&self) -> bool {
        *self == self.reflected()
    }

    pub fn is_self_dual(&self) -> bool {
        *self == self.dual()
    }
}

impl fmt::Display for CatalanTriangle {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        display_rows(f, &self.rows())
    }
}

impl From<CatalanTriangle> for Vec<Vec<i32>> {
    fn from(t: CatalanTriangle) -> Self {
        t.rows()
    }
}

impl TryFrom<Vec<Vec<i32>>> for CatalanTriangle {
    type Error = Error;
    fn try_from(rows: Vec<Vec<i32>>) -> Result<Self> {
        Self::from_rows(&rows)
    }
}

/// A wall: a transversal of the fibers of T_n -> D_n whose per-fiber depths
/// x3 - x2 form a depth triangle. Walls are the subposets of T_n isomorphic
/// to D_n that encode catalan congruences.
#[derive(Clone, PartialEq, Eq, Hash, Debug, Serialize, Deserialize)]
#[serde(into = "Vec<TetraPoint>", try_from = "Vec<TetraPoint>")]
pub struct Wall {
    n: usize,
    /// One point per fiber, in canonical fiber order (y2, then y1).
    points: Vec<TetraPoint>,
}

impl Wall {
    pub fn new(points: Vec<TetraPoint>) -> Result<Self> {
        let first = points.first().ok_or_else(|| {
            Error::Precondition("a wall needs at least one point".into())
        })?;
        let n = first.order();
        check_order(n)?;
        let mut by_fiber: BTreeMap<(i32, i32), TetraPoint> = BTreeMap::new();
        for &p in &points {
            if p.0 < 0 || p.1 < 0 || p.2 < 0 || p.3 < 0 || p.order() != n {
                return Err(Error::Precondition(format!(
                    "point {p:?} does not lie in T_{n}"
                )));
            }
            let y = p.projection();
            if by_fiber.insert((y.1, y.0), p).is_some() {
                return Err(Error::Precondition(format!(
                    "two wall points over the fiber {y:?}"
                )));
            }
        }
        if by_fiber.len() != tri_point_count(n) {
            return Err(Error::Precondition(format!(
                "a wall of order {n} selects one point in each of the {} fibers",
                tri_point_count(n)
            )));
        }
        let points: Vec<TetraPoint> = by_fiber.into_values().collect();
        // per-fiber depths must form a depth triangle
        let depth: BTreeMap<TriPoint, i32> =
            points.iter().map(|p| (p.projection(), p.2 - p.1)).collect();
        DepthTriangle::from_fn(n, |y| depth[&y])
            .map_err(|e| Error::Precondition(format!("point set is not a wall: {e}")))?;
        Ok(Self { n, points })
    }

    pub fn order(&self) -> usize {
        self.n
    }

    /// Points in canonical fiber order (y2 ascending, then y1).
    pub fn points(&self) -> &[TetraPoint] {
        &self.points
    }

    /// Per-fiber depth x3 - x2, the inverse of `DepthTriangle::wall`.
    pub fn depth_triangle(&self) -> DepthTriangle {
        let depth: BTreeMap<TriPoint, i32> =
            self.points.iter().map(|p| (p.projection(), p.2 - p.1)).collect();
        DepthTriangle::from_fn(self.n, |y| depth[&y]).expect("walls carry valid depths")
    }

    /// Membership mask over the canonical point order of `space`.
    pub fn mask(&self, space: &TetraSpace) -> u128 {
        assert_eq!(space.n(), self.n, "order mismatch");
        let mut mask = 0u128;
        for p in &self.points {
            mask |= 1 << space.index_of(p).expect("wall points lie in T_n");
        }
        mask
    }
}

impl From<Wall> for Vec<TetraPoint> {
    fn from(w: Wall) -> Self {
        w.points
    }
}

impl TryFrom<Vec<TetraPoint>> for Wall {
    type Error = Error;
    fn try_from(points: Vec<TetraPoint>) -> Result<Self> {
        Self::new(points)
    }
}

/// One diamond tile of the triangular shape, named by its four corner
/// points.
#[derive(Copy, Clone, PartialEq, Eq, Debug)]
pub struct Diamond {
    pub bottom: TriPoint,
    pub nw: TriPoint,
    pub ne: TriPoint,
    pub top: TriPoint,
}

/// The diamond tiles of order n, row-major from the top left.
pub fn diamonds(n: usize) -> Vec<Diamond> {
    let m = (n - 2) as i32;
    let mut out = Vec::new();
    for x2 in (0..=m - 2).rev() {
        for x1 in 1..=m - 1 - x2 {
            let x3 = m - x1 - x2;
            out.push(Diamond {
                bottom: TriPoint(x1, x2, x3),
                nw: TriPoint(x1 - 1, x2 + 1, x3),
                ne: TriPoint(x1, x2 + 1, x3 - 1),
                top: TriPoint(x1 - 1, x2 + 2, x3 - 1),
            });
        }
    }
    out
}

#[derive(Copy, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Debug)]
pub enum Tile {
    Crossing,
    Contact,
}

impl Tile {
    fn as_char(self) -> char {
        match self {
            Tile::Crossing => 'X',
            Tile::Contact => 'C',
        }
    }

    fn from_char(c: char) -> Result<Self> {
        match c {
            'X' => Ok(Tile::Crossing),
            'C' => Ok(Tile::Contact),
            _ => Err(Error::Parse(format!("unknown tile {c:?}, expected X or C"))),
        }
    }
}

#[derive(Copy, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Debug)]
pub enum PipeColor {
    Red,
    Blue,
}

impl PipeColor {
    fn as_char(self) -> char {
        match self {
            PipeColor::Red => 'R',
            PipeColor::Blue => 'B',
        }
    }

    fn from_char(c: char) -> Result<Self> {
        match c {
            'R' => Ok(PipeColor::Red),
            'B' => Ok(PipeColor::Blue),
            _ => Err(Error::Parse(format!("unknown color {c:?}, expected R or B"))),
        }
    }
}

/// A bond between a point and one of its children, keyed (parent, child).
type Bond = (TriPoint, TriPoint);

struct Trace {
    /// Pipes as bond paths, left-edge entry first, ordered top to bottom.
    pipes: Vec<Vec<Bond>>,
    pipe_of: BTreeMap<Bond, usize>,
    loop_count: usize,
    /// Per contact tile: one bond of the lower strand, one of the upper.
    contacts: Vec<(Bond, Bond)>,
    /// Per crossing tile: one bond of each strand.
    crossings: Vec<(Bond, Bond)>,
}

fn trace_pipes(n: usize, tiles: &[Tile]) -> Trace {
    let ds = diamonds(n);
    assert_eq!(ds.len(), tiles.len());
    let mut adj: BTreeMap<Bond, Vec<Bond>> = BTreeMap::new();
    let pair = |a: Bond, b: Bond, adj: &mut BTreeMap<Bond, Vec<Bond>>| {
        adj.entry(a).or_default().push(b);
        adj.entry(b).or_default().push(a);
    };
    let mut contacts = Vec::new();
    let mut crossings = Vec::new();
    for (d, &tile) in ds.iter().zip(tiles) {
        let bnw = (d.nw, d.bottom);
        let bne = (d.ne, d.bottom);
        let nwt = (d.top, d.nw);
        let net = (d.top, d.ne);
        match tile {
            Tile::Contact => {
                pair(bnw, bne, &mut adj);
                pair(nwt, net, &mut adj);
                contacts.push((bnw, nwt));
            }
            Tile::Crossing => {
                pair(bnw, net, &mut adj);
                pair(bne, nwt, &mut adj);
                crossings.push((bnw, bne));
            }
        }
    }
    let m = (n - 2) as i32;
    for y1 in 0..m {
        let p = TriPoint(y1, 1, m - 1 - y1);
        let el = (p, TriPoint(y1, 0, m - y1));
        let er = (p, TriPoint(y1 + 1, 0, m - 1 - y1));
        pair(el, er, &mut adj);
    }

    let mut seen: BTreeMap<Bond, bool> = adj.keys().map(|&b| (b, false)).collect();
    let walk = |start: Bond, seen: &mut BTreeMap<Bond, bool>, adj: &BTreeMap<Bond, Vec<Bond>>| {
        let mut path = vec![start];
        seen.insert(start, true);
        let (mut prev, mut cur) = (None, start);
        loop {
            let next = adj[&cur].iter().copied().find(|&f| Some(f) != prev && !seen[&f]);
            match next {
                Some(f) => {
                    seen.insert(f, true);
                    prev = Some(cur);
                    cur = f;
                    path.push(f);
                }
                None => break,
            }
        }
        path
    };

    let ends: Vec<Bond> = adj.iter().filter(|(_, ps)| ps.len() == 1).map(|(&b, _)| b).collect();
    let mut paths = Vec::new();
    for &e in &ends {
        if !seen[&e] {
            paths.push(walk(e, &mut seen, &adj));
        }
    }
    let mut loop_count = 0;
    let leftover: Vec<Bond> = seen.iter().filter(|&(_, &v)| !v).map(|(&b, _)| b).collect();
    for b in leftover {
        if !seen[&b] {
            walk(b, &mut seen, &adj);
            loop_count += 1;
        }
    }

    let is_left_entry = |&(p, c): &Bond| p.0 == 0 && c.0 == 0;
    let mut pipes: Vec<Vec<Bond>> = paths
        .into_iter()
        .map(|mut path| {
            if !is_left_entry(&path[0]) && is_left_entry(path.last().unwrap()) {
                path.reverse();
            }
            path
        })
        .collect();
    pipes.sort_by_key(|path| {
        let (_, c) = path[0];
        -c.1
    });
    let mut pipe_of = BTreeMap::new();
    for (i, path) in pipes.iter().enumerate() {
        for &b in path {
            pipe_of.insert(b, i);
        }
    }
    Trace { pipes, pipe_of, loop_count, contacts, crossings }
}

#[derive(Serialize, Deserialize)]
struct BpdRepr {
    order: usize,
    tiles: String,
    colors: String,
}

/// A bicolored pipe dream: a triangular tiling by crossings and contacts
/// together with a pipe coloring making every contact bichromatic.
///
/// Tiles are listed row-major from the top left; colors by left-edge entry
/// point, top to bottom. Order n has n-2 pipes.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Debug, Serialize, Deserialize)]
#[serde(into = "BpdRepr", try_from = "BpdRepr")]
pub struct BicoloredPipeDream {
    n: usize,
    tiles: Vec<Tile>,
    colors: Vec<PipeColor>,
}

impl BicoloredPipeDream {
    pub fn new(n: usize, tiles: Vec<Tile>, colors: Vec<PipeColor>) -> Result<Self> {
        check_order(n)?;
        let expected = diamonds(n).len();
        if tiles.len() != expected {
            return Err(Error::SizeMismatch { left: tiles.len(), right: expected });
        }
        if colors.len() != n - 2 {
            return Err(Error::SizeMismatch { left: colors.len(), right: n - 2 });
        }
        let trace = trace_pipes(n, &tiles);
        if trace.loop_count > 0 {
            return Err(Error::Precondition(format!(
                "tiling closes {} loop(s), so it is not a pipe dream",
                trace.loop_count
            )));
        }
        if trace.pipes.len() != n - 2
            || trace.pipes.iter().any(|p| {
                let (q, c) = p[0];
                q.0 != 0 || c.0 != 0
            })
        {
            return Err(Error::Precondition(
                "strands do not form left-to-right pipes".into(),
            ));
        }
        for &(cup, cap) in &trace.contacts {
            if colors[trace.pipe_of[&cup]] == colors[trace.pipe_of[&cap]] {
                return Err(Error::Precondition(format!(
                    "monochromatic contact between pipes {} and {}",
                    trace.pipe_of[&cup], trace.pipe_of[&cap]
                )));
            }
        }
        Ok(Self { n, tiles, colors })
    }

    pub fn order(&self) -> usize {
        self.n
    }

    pub fn pipe_count(&self) -> usize {
        self.n - 2
    }

    pub fn tiles(&self) -> &[Tile] {
        &self.tiles
    }

    pub fn colors(&self) -> &[PipeColor] {
        &self.colors
    }

    /// Number of crossings whose two strands have different colors.
    pub fn bicolored_crossings(&self) -> usize {
        let trace = trace_pipes(self.n, &self.tiles);
        trace
            .crossings
            .iter()
            .filter(|(a, b)| self.colors[trace.pipe_of[a]] != self.colors[trace.pipe_of[b]])
            .count()
    }

    /// Inverse of `DepthTriangle::pipe_dream`: rebuilds depths upward from
    /// the zero bottom row, moving by -1 along red bonds and +1 along blue.
    pub fn depth_triangle(&self) -> DepthTriangle {
        let trace = trace_pipes(self.n, &self.tiles);
        let color_of = |b: &Bond| self.colors[trace.pipe_of[b]];
        let n = self.n;
        let m = (n - 2) as i32;
        let mut vals = vec![0i32; tri_point_count(n)];
        for y2 in 1..=m {
            for y1 in 0..=m - y2 {
                let p = TriPoint(y1, y2, m - y1 - y2);
                let lc = TriPoint(y1, y2 - 1, m - y1 - y2 + 1);
                let rc = TriPoint(y1 + 1, y2 - 1, m - y1 - y2);
                let step = |c: PipeColor| if c == PipeColor::Red { -1 } else { 1 };
                let v1 = vals[tri_index(n, lc.0, lc.1)] + step(color_of(&(p, lc)));
                let v2 = vals[tri_index(n, rc.0, rc.1)] + step(color_of(&(p, rc)));
                assert_eq!(v1, v2, "validated pipe dreams have consistent depths");
                vals[tri_index(n, y1, y2)] = v1;
            }
        }
        DepthTriangle::from_vals(n, vals).expect("pipe dream depths are valid")
    }

    fn tiles_string(&self) -> String {
        self.tiles.iter().map(|t| t.as_char()).collect()
    }

    fn colors_string(&self) -> String {
        self.colors.iter().map(|c| c.as_char()).collect()
    }
}

impl fmt::Display for BicoloredPipeDream {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}|{}", self.tiles_string(), self.colors_string())
    }
}

impl From<BicoloredPipeDream> for BpdRepr {
    fn from(p: BicoloredPipeDream) -> Self {
        BpdRepr { order: p.n, tiles: p.tiles_string(), colors: p.colors_string() }
    }
}

impl TryFrom<BpdRepr> for BicoloredPipeDream {
    type Error = Error;
    fn try_from(r: BpdRepr) -> Result<Self> {
        let tiles = r.tiles.chars().map(Tile::from_char).collect::<Result<Vec<_>>>()?;
        let colors = r.colors.chars().map(PipeColor::from_char).collect::<Result<Vec<_>>>()?;
        Self::new(r.order, tiles, colors)
    }
}

/// Streams every depth triangle of order n, growing rows upward. Each entry
/// is the average of its two children when they differ by 2, and one of the
/// two adjacent values when they agree.
pub fn enumerate_depth_triangles(n: usize, mut f: impl FnMut(&DepthTriangle)) -> Result<()> {
    check_order(n)?;
    let m = (n - 1) as i32;
    fn rec(n: usize, m: i32, y1: i32, y2: i32, vals: &mut Vec<i32>, f: &mut impl FnMut(&DepthTriangle)) {
        if y2 == m {
            let t = DepthTriangle { n, vals: vals.clone() };
            debug_assert!(DepthTriangle::from_vals(n, vals.clone()).is_ok());
            f(&t);
            return;
        }
        let (ny1, ny2) = if y1 + 1 < m - y2 { (y1 + 1, y2) } else { (0, y2 + 1) };
        let lc = vals[tri_index(n, y1, y2 - 1)];
        let rc = vals[tri_index(n, y1 + 1, y2 - 1)];
        let i = tri_index(n, y1, y2);
        if lc == rc {
            for v in [lc - 1, lc + 1] {
                vals[i] = v;
                rec(n, m, ny1, ny2, vals, f);
            }
        } else {
            debug_assert_eq!((lc - rc).abs(), 2);
            vals[i] = (lc + rc) / 2;
            rec(n, m, ny1, ny2, vals, f);
        }
    }
    let mut vals = vec![0i32; tri_point_count(n)];
    if n == 2 {
        f(&DepthTriangle { n, vals });
        return Ok(());
    }
    rec(n, m, 0, 1, &mut vals, &mut f);
    Ok(())
}

pub fn count_depth_triangles(n: usize) -> Result<u64> {
    let mut count = 0u64;
    enumerate_depth_triangles(n, |_| count += 1)?;
    Ok(count)
}

pub fn all_depth_triangles(n: usize) -> Result<Vec<DepthTriangle>> {
    let mut out = Vec::new();
    enumerate_depth_triangles(n, |t| out.push(t.clone()))?;
    Ok(out)
}

/// Exhaustive counts of pipe dreams with the given number of pipes, over all
/// 2^#tiles crossing/contact fillings.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct PipeDreamCounts {
    pub pipes: usize,
    /// Fillings whose contact graph is 2-colorable.
    pub bipartite: u64,
    /// Bipartite fillings with connected contact graph.
    pub connected: u64,
    /// Total proper 2-colorings, i.e. bicolored pipe dreams.
    pub bicolored: u128,
}

pub fn count_pipe_dreams(pipes: usize) -> Result<PipeDreamCounts> {
    if pipes > MAX_PIPES {
        return Err(Error::BoundExceeded { what: "pipes", needed: pipes, bound: MAX_PIPES });
    }
    let n = pipes + 2;
    let ds = diamonds(n);
    let mut counts = PipeDreamCounts { pipes, bipartite: 0, connected: 0, bicolored: 0 };
    for filling in 0u32..1 << ds.len() {
        let tiles: Vec<Tile> = (0..ds.len())
            .map(|i| if filling >> i & 1 == 1 { Tile::Contact } else { Tile::Crossing })
            .collect();
        let trace = trace_pipes(n, &tiles);
        if trace.loop_count > 0 {
            continue;
        }
        // 2-color the contact graph over pipes
        let mut color = vec![-1i8; pipes];
        let mut adj = vec![Vec::new(); pipes];
        for (cup, cap) in &trace.contacts {
            let (a, b) = (trace.pipe_of[cup], trace.pipe_of[cap]);
            adj[a].push(b);
            adj[b].push(a);
        }
        let mut components = 0u32;
        let mut bipartite = true;
        'outer: for s in 0..pipes {
            if color[s] >= 0 {
                continue;
            }
            components += 1;
            color[s] = 0;
            let mut stack = vec![s];
            while let Some(u) = stack.pop() {
                for &v in &adj[u] {
                    if color[v] < 0 {
                        color[v] = 1 - color[u];
                        stack.push(v);
                    } else if color[v] == color[u] {
                        bipartite = false;
                        break 'outer;
                    }
                }
            }
        }
        if bipartite {
            counts.bipartite += 1;
            counts.bicolored += 1u128 << components;
            if components == 1 {
                counts.connected += 1;
            }
        }
    }
    Ok(counts)
}

/// Cells of the Boolean triangle with the given number of pipes: one bit per
/// first-row elbow and one per diamond.
pub fn boolean_cell_count(pipes: usize) -> usize {
    pipes + pipes * (pipes.max(1) - 1) / 2
}

/// The sweep procedure turning a Boolean triangle into a depth triangle.
/// `elbows[y1]` colors the first-row bonds (false = red); `interior`,
/// indexed like `diamonds`, chooses contact (true) or crossing (false)
/// whenever the diamond side entries agree, and is ignored on forced
/// crossings.
pub fn boolean_sweep(elbows: &[bool], interior: &[bool]) -> Result<DepthTriangle> {
    let pipes = elbows.len();
    let n = pipes + 2;
    check_order(n)?;
    let ds = diamonds(n);
    if interior.len() != ds.len() {
        return Err(Error::SizeMismatch { left: interior.len(), right: ds.len() });
    }
    let mut vals = vec![0i32; tri_point_count(n)];
    for (y1, &bit) in elbows.iter().enumerate() {
        vals[tri_index(n, y1 as i32, 1)] = if bit { 1 } else { -1 };
    }
    let mut order: Vec<usize> = (0..ds.len()).collect();
    order.sort_by_key(|&i| (ds[i].bottom.1, ds[i].bottom.0));
    for i in order {
        let d = ds[i];
        let nw = vals[tri_index(n, d.nw.0, d.nw.1)];
        let ne = vals[tri_index(n, d.ne.0, d.ne.1)];
        let b = vals[tri_index(n, d.bottom.0, d.bottom.1)];
        let t = if nw != ne || interior[i] { b } else { 2 * nw - b };
        vals[tri_index(n, d.top.0, d.top.1)] = t;
    }
    Ok(DepthTriangle::from_vals(n, vals).expect("the sweep yields a valid depth triangle"))
}

/// Sum of 2^bcc(P) over every bicolored pipe dream with the given number of
/// pipes. Equals 2^#Boolean cells.
pub fn two_enumeration(pipes: usize) -> Result<u128> {
    let n = pipes + 2;
    let mut total = 0u128;
    enumerate_depth_triangles(n, |t| total += 1u128 << t.bicolored_crossings())?;
    Ok(total)
}

/// Runs the sweep over every Boolean triangle and tallies how often each
/// depth triangle arises. Each one arises 2^bcc times.
pub fn boolean_multiplicities(pipes: usize) -> Result<BTreeMap<DepthTriangle, u64>> {
    if pipes > MAX_PIPES {
        return Err(Error::BoundExceeded { what: "pipes", needed: pipes, bound: MAX_PIPES });
    }
    let n = pipes + 2;
    let tile_count = diamonds(n).len();
    let cells = pipes + tile_count;
    let mut tally: BTreeMap<DepthTriangle, u64> = BTreeMap::new();
    for bits in 0u64..1 << cells {
        let elbows: Vec<bool> = (0..pipes).map(|i| bits >> i & 1 == 1).collect();
        let interior: Vec<bool> = (0..tile_count).map(|i| bits >> (pipes + i) & 1 == 1).collect();
        let t = boolean_sweep(&elbows, &interior)?;
        *tally.entry(t).or_insert(0) += 1;
    }
    Ok(tally)
}

/// The poset of quadruples summing to n-2 under the four partial-sum
/// inequalities; isomorphic to the join-irreducible poset of the lattice of
/// catalan triangles of order n+1.
pub fn catalan_lattice_join_irreducibles(n: usize) -> Result<(Vec<TetraPoint>, FinitePoset)> {
    let space = TetraSpace::new(n)?;
    let points: Vec<TetraPoint> = space.points().to_vec();
    let leq = |x: &TetraPoint, y: &TetraPoint| {
        x.1 + x.2 + x.3 <= y.1 + y.2 + y.3
            && x.1 + x.3 <= y.1 + y.3
            && x.2 + x.3 <= y.2 + y.3
            && x.3 <= y.3
    };
    let poset = FinitePoset::from_leq(points.len(), |a, b| leq(&points[a], &points[b]))
        .expect("the quadruple order is a partial order");
    Ok((points, poset))
}

/// A catalan congruence of ASM_n, presented by its wall: two ASMs are
/// equivalent when their lower sets meet the wall in the same subset.
/// Classes are intervals; the quotient is the Stanley lattice Dyck_n.
#[derive(Clone, Debug)]
pub struct CatalanCongruence {
    space: TetraSpace,
    depth: DepthTriangle,
    wall: Wall,
    wall_mask: u128,
    wall_indices: Vec<usize>,
}

impl CatalanCongruence {
    pub fn new(depth: &DepthTriangle) -> Result<Self> {
        let space = TetraSpace::new(depth.order())?;
        let wall = depth.wall();
        let wall_mask = wall.mask(&space);
        let wall_indices: Vec<usize> = wall
            .points()
            .iter()
            .map(|p| space.index_of(p).expect("wall points lie in T_n"))
            .collect();
        Ok(Self { space, depth: depth.clone(), wall, wall_mask, wall_indices })
    }

    /// The congruence of the excedance relation.
    pub fn excedance(n: usize) -> Result<Self> {
        Self::new(&DepthTriangle::excedance(n)?)
    }

    pub fn n(&self) -> usize {
        self.depth.order()
    }

    pub fn depth(&self) -> &DepthTriangle {
        &self.depth
    }

    pub fn wall(&self) -> &Wall {
        &self.wall
    }

    pub fn space(&self) -> &TetraSpace {
        &self.space
    }

    pub fn wall_mask(&self) -> u128 {
        self.wall_mask
    }

    /// The class of A: the trace of its lower set on the wall.
    pub fn class_mask(&self, a: &Asm) -> u128 {
        self.space.j_mask(a) & self.wall_mask
    }

    pub fn equivalent(&self, a: &Asm, b: &Asm) -> bool {
        self.class_mask(a) == self.class_mask(b)
    }

    fn check_class(&self, class: u128) -> Result<()> {
        if class & !self.wall_mask != 0 {
            return Err(Error::Precondition("class mask contains non-wall points".into()));
        }
        let mut rest = class;
        while rest != 0 {
            let i = rest.trailing_zeros() as usize;
            rest &= rest - 1;
            if self.space.down_mask(i) & self.wall_mask & !class != 0 {
                return Err(Error::Precondition(
                    "class mask is not a lower set of the wall".into(),
                ));
            }
        }
        Ok(())
    }

    /// Smallest member of a class: the lower closure of the class trace.
    pub fn class_min(&self, class: u128) -> Result<Asm> {
        self.check_class(class)?;
        let j = self.space.lower_closure(class);
        self.space.asm_of_mask(j)
    }

    /// Largest member: everything not above an uncontracted point outside
    /// the class.
    pub fn class_max(&self, class: u128) -> Result<Asm> {
        self.check_class(class)?;
        let mut up = 0u128;
        let mut rest = self.wall_mask & !class;
        while rest != 0 {
            let i = rest.trailing_zeros() as usize;
            rest &= rest - 1;
            up |= self.space.up_mask(i);
        }
        self.space.asm_of_mask(self.space.full_mask() & !up)
    }

    /// All class masks, i.e. the lower sets of the wall subposet, sorted by
    /// (size, mask).
    pub fn all_class_masks(&self) -> Vec<u128> {
        fn rec(
            cong: &CatalanCongruence,
            k: usize,
            current: &mut u128,
            out: &mut Vec<u128>,
        ) {
            if k == cong.wall_indices.len() {
                out.push(*current);
                return;
            }
            rec(cong, k + 1, current, out);
            let i = cong.wall_indices[k];
            let down = cong.space.down_mask(i) & cong.wall_mask & !(1 << i);
            if down & !*current == 0 {
                *current |= 1 << i;
                rec(cong, k + 1, current, out);
                *current &= !(1 << i);
            }
        }
        // wall_indices follow fiber order (y2, y1), a linear extension of
        // the wall subposet, so down-sets are already decided
        let mut out = Vec::new();
        let mut current = 0u128;
        rec(self, 0, &mut current, &mut out);
        out.sort_by_key(|&m| (m.count_ones(), m));
        out
    }

    /// The quotient, as the inclusion order on class masks (in the order
    /// returned by `all_class_masks`).
    pub fn quotient(&self) -> FinitePoset {
        let masks = self.all_class_masks();
        FinitePoset::from_leq(masks.len(), |a, b| masks[a] & !masks[b] == 0)
            .expect("inclusion is a partial order")
    }

    /// The Dyck path of a class: height at least y2+2 at position
    /// 2*y1+y2+2 for each selected fiber.
    pub fn dyck_of_class(&self, class: u128) -> Result<DyckPath> {
        self.check_class(class)?;
        let n = self.n();
        let mut heights: Vec<i32> = (0..=2 * n).map(|j| (j % 2) as i32).collect();
        let mut rest = class;
        while rest != 0 {
            let i = rest.trailing_zeros() as usize;
            rest &= rest - 1;
            let y = self.space.point(i).projection();
            let p = 2 * y.0 + y.1 + 2;
            let v = y.1 + 2;
            for (j, h) in heights.iter_mut().enumerate() {
                *h = (*h).max(v - (j as i32 - p).abs());
            }
        }
        DyckPath::from_heights(&heights)
    }

    /// Inverse of `dyck_of_class`.
    pub fn class_of_dyck(&self, path: &DyckPath) -> Result<u128> {
        if path.semilength() != self.n() {
            return Err(Error::SizeMismatch { left: path.semilength(), right: self.n() });
        }
        let heights = path.heights();
        let mut class = 0u128;
        for &i in &self.wall_indices {
            let y = self.space.point(i).projection();
            if heights[(2 * y.0 + y.1 + 2) as usize] >= y.1 + 2 {
                class |= 1 << i;
            }
        }
        Ok(class)
    }
}

/// EGF coefficient checks relating the three families of Table-style counts.
#[derive(Clone, Debug, Serialize)]
pub struct EgfReport {
    pub max_pipes: usize,
    pub catalan_triangles: Vec<u64>,
    pub bipartite: Vec<u64>,
    pub connected: Vec<u64>,
    /// CT = exp(2 BCPD) coefficientwise.
    pub exp_identity: bool,
    /// CT = BPD^2 coefficientwise.
    pub square_identity: bool,
}

/// Verifies CT = exp(2 BCPD) = BPD^2 as EGF identities in exact rational
/// arithmetic, with all three sequences recomputed from scratch.
pub fn egf_identity_check(max_pipes: usize) -> Result<EgfReport> {
    if max_pipes > MAX_PIPES {
        return Err(Error::BoundExceeded { what: "pipes", needed: max_pipes, bound: MAX_PIPES });
    }
    let mut ct = Vec::new();
    let mut bpd = Vec::new();
    let mut bcpd = Vec::new();
    for k in 0..=max_pipes {
        ct.push(count_depth_triangles(k + 2)?);
        let counts = count_pipe_dreams(k)?;
        bpd.push(counts.bipartite);
        bcpd.push(counts.connected);
    }
    let rat = |v: u64| BigRational::from_integer(BigInt::from(v));
    let fact = |k: usize| {
        let mut f = BigRational::one();
        for i in 1..=k {
            f *= rat(i as u64);
        }
        f
    };
    // EGF coefficients a_k = value_k / k!
    let coeffs = |vals: &[u64]| -> Vec<BigRational> {
        vals.iter().enumerate().map(|(k, &v)| rat(v) / fact(k)).collect()
    };
    let ct_egf = coeffs(&ct);
    let bpd_egf = coeffs(&bpd);
    let bcpd_egf = coeffs(&bcpd);

    let mul = |a: &[BigRational], b: &[BigRational]| -> Vec<BigRational> {
        let mut out = vec![BigRational::zero(); max_pipes + 1];
        for i in 0..=max_pipes {
            for j in 0..=max_pipes - i {
                out[i + j] += &a[i] * &b[j];
            }
        }
        out
    };
    let square = mul(&bpd_egf, &bpd_egf);
    let square_identity = square == ct_egf;

    let two_bcpd: Vec<BigRational> = bcpd_egf.iter().map(|c| c * rat(2)).collect();
    let mut exp = vec![BigRational::zero(); max_pipes + 1];
    exp[0] = BigRational::one();
    let mut power = exp.clone();
    for j in 1..=max_pipes {
        power = mul(&power, &two_bcpd);
        for (e, p) in exp.iter_mut().zip(&power) {
            *e += p / fact(j);
        }
    }
    let exp_identity = exp == ct_egf;

    Ok(EgfReport {
        max_pipes,
        catalan_triangles: ct,
        bipartite: bpd,
        connected: bcpd,
        exp_identity,
        square_identity,
    })
}
