//! Permutations, Dyck paths, and noncrossing partitions.
//!
//! Everything is 1-indexed: a permutation of [n] is stored in one-line
//! notation, Dyck paths have steps 1..2n, noncrossing partitions live on the
//! points 1..n.

use std::collections::BTreeSet;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::asm_core::Asm;
use crate::{Error, Result};

/// A permutation of [n] in one-line notation.
///
/// The derived `Ord` is the lexicographic order on one-line notation (the
/// canonical container order); Bruhat comparisons go through [`bruhat_leq`].
///
/// [`bruhat_leq`]: Permutation::bruhat_leq
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
#[serde(transparent)]
pub struct Permutation {
    one_line: Vec<usize>,
}

impl<'de> Deserialize<'de> for Permutation {
    fn deserialize<D: serde::Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        let images = Vec::<usize>::deserialize(deserializer)?;
        Permutation::new(images).map_err(serde::de::Error::custom)
    }
}

impl Permutation {
    /// Validates one-line notation: a bijection of {1, ..., n}, n >= 1.
    pub fn new(one_line: Vec<usize>) -> Result<Self> {
        let n = one_line.len();
        if n == 0 {
            return Err(Error::Invalid {
                kind: "permutation",
                index: (0, 0),
                reason: "empty one-line notation".into(),
            });
        }
        let mut seen = vec![false; n + 1];
        for (i, &v) in one_line.iter().enumerate() {
            if v == 0 || v > n {
                return Err(Error::Invalid {
                    kind: "permutation",
                    index: (i + 1, 0),
                    reason: format!("image {v} out of range 1..={n}"),
                });
            }
            if seen[v] {
                return Err(Error::Invalid {
                    kind: "permutation",
                    index: (i + 1, 0),
                    reason: format!("image {v} repeated"),
                });
            }
            seen[v] = true;
        }
        Ok(Self { one_line })
    }

    /// Convenience constructor from a slice, for literals in code and tests.
    pub fn from_slice(images: &[usize]) -> Result<Self> {
        Self::new(images.to_vec())
    }

    pub fn identity(n: usize) -> Self {
        assert!(n >= 1);
        Self { one_line: (1..=n).collect() }
    }

    /// The longest element n, n-1, ..., 1.
    pub fn w0(n: usize) -> Self {
        assert!(n >= 1);
        Self { one_line: (1..=n).rev().collect() }
    }

    pub fn n(&self) -> usize {
        self.one_line.len()
    }

    /// Image of position `i` (1-indexed).
    pub fn image(&self, i: usize) -> usize {
        self.one_line[i - 1]
    }

    pub fn one_line(&self) -> &[usize] {
        &self.one_line
    }

    pub fn inverse(&self) -> Self {
        let n = self.n();
        let mut t = vec![0; n];
        for (i, &v) in self.one_line.iter().enumerate() {
            t[v - 1] = i + 1;
        }
        Self { one_line: t }
    }

    /// Composition acting on the right argument first: (self * other)(i) = self(other(i)).
    pub fn compose(&self, other: &Self) -> Result<Self> {
        if self.n() != other.n() {
            return Err(Error::SizeMismatch { left: self.n(), right: other.n() });
        }
        Ok(Self {
            one_line: other.one_line.iter().map(|&v| self.one_line[v - 1]).collect(),
        })
    }

    /// Right multiplication by the transposition (i j): exchanges the images
    /// at positions i and j.
    pub fn swap_positions(&self, i: usize, j: usize) -> Self {
        let mut t = self.one_line.clone();
        t.swap(i - 1, j - 1);
        Self { one_line: t }
    }

    /// Right multiplication by the 3-cycle sending a -> b -> c -> a, so the
    /// new images at positions a, b, c are the old ones at b, c, a.
    pub fn cycle3(&self, a: usize, b: usize, c: usize) -> Self {
        let mut t = self.one_line.clone();
        t[a - 1] = self.one_line[b - 1];
        t[b - 1] = self.one_line[c - 1];
        t[c - 1] = self.one_line[a - 1];
        Self { one_line: t }
    }

    /// Number of inversions, i.e. the Coxeter length.
    pub fn inversions(&self) -> usize {
        let s = &self.one_line;
        let mut count = 0;
        for i in 0..s.len() {
            for j in i + 1..s.len() {
                if s[i] > s[j] {
                    count += 1;
                }
            }
        }
        count
    }

    /// All permutations of [n] in lexicographic order.
    pub fn all(n: usize) -> Vec<Self> {
        assert!(n >= 1);
        let mut out = Vec::new();
        let mut cur = Vec::with_capacity(n);
        let mut used = vec![false; n + 1];
        fn rec(n: usize, cur: &mut Vec<usize>, used: &mut [bool], out: &mut Vec<Permutation>) {
            if cur.len() == n {
                out.push(Permutation { one_line: cur.clone() });
                return;
            }
            for v in 1..=n {
                if !used[v] {
                    used[v] = true;
                    cur.push(v);
                    rec(n, cur, used, out);
                    cur.pop();
                    used[v] = false;
                }
            }
        }
        rec(n, &mut cur, &mut used, &mut out);
        out
    }

    /// True iff some subsequence of `self` is order-isomorphic to `p`.
    pub fn contains_pattern(&self, p: &Permutation) -> bool {
        let s = &self.one_line;
        let q = &p.one_line;
        if q.len() > s.len() {
            return false;
        }
        fn rec(s: &[usize], q: &[usize], chosen: &mut Vec<usize>, start: usize) -> bool {
            let d = chosen.len();
            if d == q.len() {
                return true;
            }
            for i in start..s.len() {
                if s.len() - i < q.len() - d {
                    break;
                }
                let consistent = chosen
                    .iter()
                    .enumerate()
                    .all(|(e, &j)| (s[j] < s[i]) == (q[e] < q[d]));
                if consistent {
                    chosen.push(i);
                    if rec(s, q, chosen, i + 1) {
                        return true;
                    }
                    chosen.pop();
                }
            }
            false
        }
        rec(s, q, &mut Vec::with_capacity(q.len()), 0)
    }

    pub fn avoids(&self, p: &Permutation) -> bool {
        !self.contains_pattern(p)
    }

    /// Weak excedance positions and values: Epos = {i : σ_i >= i},
    /// Eval = {σ_i : σ_i >= i}.
    pub fn excedance_data(&self) -> (BTreeSet<usize>, BTreeSet<usize>) {
        let mut epos = BTreeSet::new();
        let mut eval = BTreeSet::new();
        for (i, &v) in self.one_line.iter().enumerate() {
            if v >= i + 1 {
                epos.insert(i + 1);
                eval.insert(v);
            }
        }
        (epos, eval)
    }

    /// The permutation matrix as an ASM.
    pub fn matrix(&self) -> Asm {
        Asm::permutation(self)
    }

    /// Bruhat order, tested as entrywise comparison of height-function
    /// matrices (the restriction of the ASM lattice order).
    pub fn bruhat_leq(&self, other: &Permutation) -> Result<bool> {
        if self.n() != other.n() {
            return Err(Error::SizeMismatch { left: self.n(), right: other.n() });
        }
        self.matrix().hfm().leq(&other.matrix().hfm())
    }

    /// Uniform random permutation by Fisher-Yates.
    pub fn random<R: rand::Rng>(n: usize, rng: &mut R) -> Self {
        assert!(n >= 1);
        let mut t: Vec<usize> = (1..=n).collect();
        for i in (1..n).rev() {
            let j = rng.gen_range(0..=i);
            t.swap(i, j);
        }
        Self { one_line: t }
    }
}

impl fmt::Display for Permutation {
    /// Compact digit string for n <= 9 (X = 10 when n = 10), bracketed list
    /// beyond that.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.n() <= 10 {
            for &v in &self.one_line {
                if v == 10 {
                    write!(f, "X")?;
                } else {
                    write!(f, "{v}")?;
                }
            }
            Ok(())
        } else {
            write!(f, "[")?;
            for (i, &v) in self.one_line.iter().enumerate() {
                if i > 0 {
                    write!(f, ",")?;
                }
                write!(f, "{v}")?;
            }
            write!(f, "]")
        }
    }
}

impl fmt::Debug for Permutation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl FromStr for Permutation {
    type Err = Error;

    /// Accepts either a bracketed integer list `[3,1,2]` or a compact digit
    /// string `312` (with X standing for 10).
    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        if s.starts_with('[') {
            let images: Vec<usize> = serde_json::from_str(s)
                .map_err(|e| Error::Parse(format!("permutation list: {e}")))?;
            return Self::new(images);
        }
        let mut images = Vec::with_capacity(s.len());
        for ch in s.chars() {
            match ch {
                '1'..='9' => images.push(ch as usize - '0' as usize),
                'X' | 'x' => images.push(10),
                c if c.is_whitespace() => {}
                c => return Err(Error::Parse(format!("unexpected character {c:?} in permutation"))),
            }
        }
        Self::new(images)
    }
}

/// One step of a Dyck path.
#[derive(Copy, Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Step {
    Up,
    Down,
}

/// A Dyck path of semilength n: 2n steps, balanced, never below the axis.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct DyckPath {
    steps: Vec<Step>,
}

impl DyckPath {
    pub fn new(steps: Vec<Step>) -> Result<Self> {
        if steps.len() % 2 != 0 {
            return Err(Error::Invalid {
                kind: "dyck path",
                index: (steps.len(), 0),
                reason: "odd number of steps".into(),
            });
        }
        let mut h: i32 = 0;
        for (k, &s) in steps.iter().enumerate() {
            h += if s == Step::Up { 1 } else { -1 };
            if h < 0 {
                return Err(Error::Invalid {
                    kind: "dyck path",
                    index: (k + 1, 0),
                    reason: "prefix dips below the axis".into(),
                });
            }
        }
        if h != 0 {
            return Err(Error::Invalid {
                kind: "dyck path",
                index: (steps.len(), 0),
                reason: format!("unbalanced: final height {h}"),
            });
        }
        Ok(Self { steps })
    }

    pub fn semilength(&self) -> usize {
        self.steps.len() / 2
    }

    pub fn steps(&self) -> &[Step] {
        &self.steps
    }

    /// The 2n+1 heights visited, starting and ending at 0.
    pub fn heights(&self) -> Vec<i32> {
        let mut h = Vec::with_capacity(self.steps.len() + 1);
        h.push(0);
        for &s in &self.steps {
            h.push(h.last().unwrap() + if s == Step::Up { 1 } else { -1 });
        }
        h
    }

    pub fn from_heights(heights: &[i32]) -> Result<Self> {
        if heights.len() % 2 == 0 || heights.is_empty() {
            return Err(Error::Invalid {
                kind: "dyck path",
                index: (heights.len(), 0),
                reason: "height sequence must have odd length 2n+1".into(),
            });
        }
        if heights[0] != 0 {
            return Err(Error::Invalid {
                kind: "dyck path",
                index: (1, 0),
                reason: format!("must start at height 0, got {}", heights[0]),
            });
        }
        let mut steps = Vec::with_capacity(heights.len() - 1);
        for (k, w) in heights.windows(2).enumerate() {
            match w[1] - w[0] {
                1 => steps.push(Step::Up),
                -1 => steps.push(Step::Down),
                d => {
                    return Err(Error::Invalid {
                        kind: "dyck path",
                        index: (k + 2, 0),
                        reason: format!("height step {d}, expected +-1"),
                    })
                }
            }
        }
        Self::new(steps)
    }

    /// Stanley order: true iff `self` stays weakly below `other`.
    pub fn leq(&self, other: &DyckPath) -> Result<bool> {
        if self.semilength() != other.semilength() {
            return Err(Error::SizeMismatch {
                left: self.semilength(),
                right: other.semilength(),
            });
        }
        Ok(self
            .heights()
            .iter()
            .zip(other.heights())
            .all(|(&a, b)| a <= b))
    }

    /// All Dyck paths of semilength n, in the order produced by extending
    /// with Up before Down.
    pub fn all(n: usize) -> Vec<Self> {
        let mut out = Vec::new();
        let mut steps = Vec::with_capacity(2 * n);
        fn rec(n: usize, h: i32, steps: &mut Vec<Step>, out: &mut Vec<DyckPath>) {
            if steps.len() == 2 * n {
                out.push(DyckPath { steps: steps.clone() });
                return;
            }
            let remaining = (2 * n - steps.len()) as i32;
            if h + 1 <= remaining - 1 {
                steps.push(Step::Up);
                rec(n, h + 1, steps, out);
                steps.pop();
            }
            if h > 0 {
                steps.push(Step::Down);
                rec(n, h - 1, steps, out);
                steps.pop();
            }
        }
        rec(n, 0, &mut steps, &mut out);
        out
    }
}

impl fmt::Display for DyckPath {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for &s in &self.steps {
            write!(f, "{}", if s == Step::Up { 'U' } else { 'D' })?;
        }
        Ok(())
    }
}

impl fmt::Debug for DyckPath {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl FromStr for DyckPath {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let mut steps = Vec::with_capacity(s.len());
        for ch in s.trim().chars() {
            match ch {
                'U' | 'u' => steps.push(Step::Up),
                'D' | 'd' => steps.push(Step::Down),
                c if c.is_whitespace() => {}
                c => return Err(Error::Parse(format!("unexpected character {c:?} in Dyck path"))),
            }
        }
        Self::new(steps)
    }
}

impl Serialize for DyckPath {
    fn serialize<S: serde::Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        serializer.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for DyckPath {
    fn deserialize<D: serde::Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(deserializer)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

/// A noncrossing partition of [n], recorded by its arcs (i, j) with i < j.
///
/// Left endpoints are pairwise distinct, right endpoints are pairwise
/// distinct, and no two arcs (i,j), (k,l) satisfy i <= k < j <= l.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct NoncrossingPartition {
    n: usize,
    arcs: BTreeSet<(usize, usize)>,
}

impl NoncrossingPartition {
    pub fn new(n: usize, arcs: impl IntoIterator<Item = (usize, usize)>) -> Result<Self> {
        let arcs: BTreeSet<(usize, usize)> = arcs.into_iter().collect();
        for &(i, j) in &arcs {
            if i < 1 || j > n || i >= j {
                return Err(Error::Invalid {
                    kind: "noncrossing partition",
                    index: (i, j),
                    reason: format!("arc ({i},{j}) out of range for n={n}"),
                });
            }
        }
        for &(i, j) in &arcs {
            for &(k, l) in &arcs {
                if (i, j) != (k, l) && i <= k && k < j && j <= l {
                    return Err(Error::Invalid {
                        kind: "noncrossing partition",
                        index: (i, j),
                        reason: format!("arcs ({i},{j}) and ({k},{l}) cross or share an endpoint"),
                    });
                }
            }
        }
        Ok(Self { n, arcs })
    }

    pub fn empty(n: usize) -> Self {
        Self { n, arcs: BTreeSet::new() }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn arcs(&self) -> &BTreeSet<(usize, usize)> {
        &self.arcs
    }

    /// All noncrossing partitions of [n], via the Dyck path bijection.
    pub fn all(n: usize) -> Vec<Self> {
        DyckPath::all(n).iter().map(dyck_ncp).collect()
    }
}

impl fmt::Display for NoncrossingPartition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{")?;
        for (k, &(i, j)) in self.arcs.iter().enumerate() {
            if k > 0 {
                write!(f, ",")?;
            }
            write!(f, "({i},{j})")?;
        }
        write!(f, "}}")
    }
}

impl fmt::Debug for NoncrossingPartition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} on [{}]", self, self.n)
    }
}

impl Serialize for NoncrossingPartition {
    fn serialize<S: serde::Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        serializer.collect_seq(self.arcs.iter())
    }
}

/// The standard bijection Dyck paths -> noncrossing partitions.
///
/// Point k owns the step pair (2k-1, 2k). Scanning k = 1..n with a stack of
/// open points: UU pushes k; DD closes the top point i with an arc (i,k);
/// UD with a nonempty stack closes the top point and reopens k; UD with an
/// empty stack makes k a singleton; DU skips k.
pub fn dyck_ncp(path: &DyckPath) -> NoncrossingPartition {
    let n = path.semilength();
    let steps = path.steps();
    let mut stack: Vec<usize> = Vec::new();
    let mut arcs = BTreeSet::new();
    for k in 1..=n {
        match (steps[2 * k - 2], steps[2 * k - 1]) {
            (Step::Up, Step::Up) => stack.push(k),
            (Step::Down, Step::Down) => {
                // a DD pair sits at height >= 2, so some point is open
                let i = stack.pop().expect("open point at a DD pair");
                arcs.insert((i, k));
            }
            (Step::Up, Step::Down) => {
                if let Some(i) = stack.pop() {
                    arcs.insert((i, k));
                    stack.push(k);
                }
            }
            (Step::Down, Step::Up) => {}
        }
    }
    debug_assert!(stack.is_empty());
    NoncrossingPartition { n, arcs }
}

/// Inverse of [`dyck_ncp`].
pub fn ncp_dyck(lambda: &NoncrossingPartition) -> DyckPath {
    let n = lambda.n;
    let lminus: BTreeSet<usize> = lambda.arcs.iter().map(|&(a, _)| a).collect();
    let lplus: BTreeSet<usize> = lambda.arcs.iter().map(|&(_, b)| b).collect();
    let mut steps = Vec::with_capacity(2 * n);
    for k in 1..=n {
        let nested = lambda.arcs.iter().any(|&(a, b)| a < k && k < b);
        if lminus.contains(&k) || (!lplus.contains(&k) && !nested) {
            steps.push(Step::Up);
        } else {
            steps.push(Step::Down);
        }
        if lplus.contains(&k) || (!lminus.contains(&k) && !nested) {
            steps.push(Step::Down);
        } else {
            steps.push(Step::Up);
        }
    }
    DyckPath::new(steps).expect("arc systems of an NCP encode balanced paths")
}

/// The noncrossing partition read off a permutation's excedance sets, via
/// the same step pairs as [`dyck_ncp`]: step 2k-1 is Up iff k is a weak
/// excedance position, step 2k is Down iff k is a weak excedance value.
pub fn ncp_of_perm(sigma: &Permutation) -> NoncrossingPartition {
    let n = sigma.n();
    let (epos, eval) = sigma.excedance_data();
    let mut steps = Vec::with_capacity(2 * n);
    for k in 1..=n {
        steps.push(if epos.contains(&k) { Step::Up } else { Step::Down });
        steps.push(if eval.contains(&k) { Step::Down } else { Step::Up });
    }
    let path = DyckPath::new(steps).expect("excedance steps of a permutation balance");
    dyck_ncp(&path)
}

/// The unique 321-avoiding permutation with excedance partition λ: the r-th
/// element of λ⁻ maps to the r-th element of λ⁺, and the r-th element of
/// [n] ∖ λ⁻ maps to the r-th element of [n] ∖ λ⁺.
pub fn sigma_lambda(lambda: &NoncrossingPartition) -> Permutation {
    let n = lambda.n;
    let lminus: BTreeSet<usize> = lambda.arcs.iter().map(|&(a, _)| a).collect();
    let lplus: BTreeSet<usize> = lambda.arcs.iter().map(|&(_, b)| b).collect();
    let cminus: Vec<usize> = (1..=n).filter(|k| !lminus.contains(k)).collect();
    let cplus: Vec<usize> = (1..=n).filter(|k| !lplus.contains(k)).collect();
    let mut s = vec![0; n];
    for (&a, &b) in lminus.iter().zip(&lplus) {
        s[a - 1] = b;
    }
    for (&a, &b) in cminus.iter().zip(&cplus) {
        s[a - 1] = b;
    }
    Permutation::new(s).expect("block-increasing images form a bijection")
}

/// The Bruhat-maximal permutation of the excedance class indexed by λ,
/// computed as the maximum of the class of P_{σ_λ}: the meet of the
/// anti-bigrassmannians at the excedance-wall points outside the class.
pub fn tau_lambda(lambda: &NoncrossingPartition) -> Permutation {
    use crate::tetra::{anti_bigrassmannian, TetraPoint};
    let n = lambda.n;
    let h = Asm::permutation(&sigma_lambda(lambda)).hfm();
    let mut top = Asm::w0(n).hfm();
    let m = n as i32 - 2;
    for y2 in 0..=m {
        for y1 in 0..=m - y2 {
            let x = TetraPoint(y1, (y2 + 1) / 2, y2 / 2, m - y1 - y2);
            let in_class =
                h.get((x.0 + x.1 + 1) as usize, (x.0 + x.2 + 1) as usize) >= x.1 + x.2 + 2;
            if !in_class {
                let meetand = Asm::permutation(&anti_bigrassmannian(&x)).hfm();
                top = top.meet(&meetand).expect("orders match");
            }
        }
    }
    top.asm()
        .is_permutational()
        .expect("excedance class maxima are permutation matrices")
}
