//! Alternating sign matrices and their two height encodings.
//!
//! An ASM of order n is an n x n matrix over {-1, 0, 1} whose rows and
//! columns sum to 1 with signs alternating along each line. Its corner-sum
//! matrix C and height-function matrix H are (n+1) x (n+1), indexed 0..n:
//!
//! ```text
//!   C[i][j] = sum of A over the top-left i x j corner
//!   H[i][j] = i + j - 2 C[i][j]
//! ```
//!
//! Entrywise comparison of height-function matrices is the lattice order on
//! ASMs; join and meet are the entrywise max and min.

use std::collections::BTreeSet;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::perms::{dyck_ncp, DyckPath, NoncrossingPartition, Permutation};
use crate::{Error, Result};

/// An alternating sign matrix, stored dense, row-major.
///
/// The derived `Ord` is the row-major entry order (the canonical container
/// order); the lattice order is [`Asm::leq`].
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Asm {
    n: usize,
    a: Vec<i8>,
}

/// A corner-sum matrix, (n+1) x (n+1) for an order-n ASM.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Csm {
    n: usize,
    c: Vec<i32>,
}

/// A height-function matrix, (n+1) x (n+1) for an order-n ASM.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Hfm {
    n: usize,
    h: Vec<i32>,
}

impl Asm {
    /// Validates and wraps row-major entries. The error names the first
    /// offending position in row-major order, 1-indexed.
    pub fn new(n: usize, a: Vec<i8>) -> Result<Self> {
        if n == 0 || a.len() != n * n {
            return Err(Error::Invalid {
                kind: "asm",
                index: (0, 0),
                reason: format!("expected {n}x{n} entries, got {}", a.len()),
            });
        }
        for i in 0..n {
            let mut partial = 0i32;
            for j in 0..n {
                let v = a[i * n + j];
                if !(-1..=1).contains(&v) {
                    return Err(Error::Invalid {
                        kind: "asm",
                        index: (i + 1, j + 1),
                        reason: format!("entry {v} not in {{-1,0,1}}"),
                    });
                }
                partial += v as i32;
                if partial != 0 && partial != 1 {
                    return Err(Error::Invalid {
                        kind: "asm",
                        index: (i + 1, j + 1),
                        reason: format!("row partial sum {partial}"),
                    });
                }
            }
            if partial != 1 {
                return Err(Error::Invalid {
                    kind: "asm",
                    index: (i + 1, n),
                    reason: "row sum is not 1".into(),
                });
            }
        }
        for j in 0..n {
            let mut partial = 0i32;
            for i in 0..n {
                partial += a[i * n + j] as i32;
                if partial != 0 && partial != 1 {
                    return Err(Error::Invalid {
                        kind: "asm",
                        index: (i + 1, j + 1),
                        reason: format!("column partial sum {partial}"),
                    });
                }
            }
            if partial != 1 {
                return Err(Error::Invalid {
                    kind: "asm",
                    index: (n, j + 1),
                    reason: "column sum is not 1".into(),
                });
            }
        }
        Ok(Self { n, a })
    }

    /// Builds from nested rows of arbitrary integers, validating everything.
    pub fn try_from_rows(rows: &[Vec<i64>]) -> Result<Self> {
        let n = rows.len();
        let mut a = Vec::with_capacity(n * n);
        for (i, row) in rows.iter().enumerate() {
            if row.len() != n {
                return Err(Error::Invalid {
                    kind: "asm",
                    index: (i + 1, 0),
                    reason: format!("row has {} entries, expected {n}", row.len()),
                });
            }
            for (j, &v) in row.iter().enumerate() {
                if !(-1..=1).contains(&v) {
                    return Err(Error::Invalid {
                        kind: "asm",
                        index: (i + 1, j + 1),
                        reason: format!("entry {v} not in {{-1,0,1}}"),
                    });
                }
                a.push(v as i8);
            }
        }
        Self::new(n, a)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    /// Entry at 0-indexed position (i, j).
    pub fn get(&self, i: usize, j: usize) -> i8 {
        self.a[i * self.n + j]
    }

    pub fn rows(&self) -> Vec<Vec<i8>> {
        (0..self.n)
            .map(|i| self.a[i * self.n..(i + 1) * self.n].to_vec())
            .collect()
    }

    pub fn identity(n: usize) -> Self {
        Asm::permutation(&Permutation::identity(n))
    }

    pub fn w0(n: usize) -> Self {
        Asm::permutation(&Permutation::w0(n))
    }

    pub fn permutation(sigma: &Permutation) -> Self {
        let n = sigma.n();
        let mut a = vec![0i8; n * n];
        for i in 1..=n {
            a[(i - 1) * n + (sigma.image(i) - 1)] = 1;
        }
        Self { n, a }
    }

    /// Returns σ iff the matrix has no -1, i.e. is a permutation matrix.
    pub fn is_permutational(&self) -> Option<Permutation> {
        if self.a.iter().any(|&v| v < 0) {
            return None;
        }
        let mut images = Vec::with_capacity(self.n);
        for i in 0..self.n {
            let j = (0..self.n).find(|&j| self.get(i, j) == 1)?;
            images.push(j + 1);
        }
        Some(Permutation::new(images).expect("rows of a 0/1 ASM select distinct columns"))
    }

    pub fn transpose(&self) -> Self {
        let n = self.n;
        let mut a = vec![0i8; n * n];
        for i in 0..n {
            for j in 0..n {
                a[j * n + i] = self.get(i, j);
            }
        }
        Self { n, a }
    }

    pub fn csm(&self) -> Csm {
        let n = self.n;
        let side = n + 1;
        let mut c = vec![0i32; side * side];
        for i in 1..=n {
            for j in 1..=n {
                c[i * side + j] = self.get(i - 1, j - 1) as i32 + c[(i - 1) * side + j]
                    + c[i * side + j - 1]
                    - c[(i - 1) * side + j - 1];
            }
        }
        Csm::new(n, c).expect("corner sums of a valid ASM form a valid CSM")
    }

    pub fn hfm(&self) -> Hfm {
        self.csm().hfm()
    }

    /// Lattice order: entrywise comparison of height-function matrices.
    pub fn leq(&self, other: &Asm) -> Result<bool> {
        self.hfm().leq(&other.hfm())
    }

    pub fn join(&self, other: &Asm) -> Result<Asm> {
        Ok(self.hfm().join(&other.hfm())?.asm())
    }

    pub fn meet(&self, other: &Asm) -> Result<Asm> {
        Ok(self.hfm().meet(&other.hfm())?.asm())
    }

    /// Interior positions (i, j), 0 < i, j < n, where H is a strict local
    /// minimum of its four grid neighbors, i.e. where H can be raised by 2.
    pub fn ascents(&self) -> BTreeSet<(usize, usize)> {
        self.hfm().local_extrema(true)
    }

    /// Strict local maxima of H in the interior, where H can drop by 2.
    pub fn descents(&self) -> BTreeSet<(usize, usize)> {
        self.hfm().local_extrema(false)
    }

    /// Elements covering `self`: raise H by 2 at each ascent.
    pub fn upper_covers(&self) -> Vec<Asm> {
        let h = self.hfm();
        self.ascents().iter().map(|&(i, j)| h.bumped(i, j, 2).asm()).collect()
    }

    /// Elements covered by `self`: lower H by 2 at each descent.
    pub fn lower_covers(&self) -> Vec<Asm> {
        let h = self.hfm();
        self.descents().iter().map(|&(i, j)| h.bumped(i, j, -2).asm()).collect()
    }

    /// Heights along the main diagonal and first subdiagonal:
    /// H[0][0], H[1][0], H[1][1], ..., H[n][n-1], H[n][n].
    pub fn height_seq(&self) -> Vec<i32> {
        self.hfm().height_seq()
    }

    /// The height sequence read as a Dyck path.
    pub fn dyck_path(&self) -> DyckPath {
        DyckPath::from_heights(&self.height_seq())
            .expect("the height sequence of an ASM is a Dyck height sequence")
    }

    /// The noncrossing partition λ(A) encoding the excedance class.
    pub fn lambda(&self) -> NoncrossingPartition {
        dyck_ncp(&self.dyck_path())
    }

    /// True iff both matrices have the same diagonal and subdiagonal
    /// heights, i.e. lie in the same excedance class.
    pub fn excedance_equiv(&self, other: &Asm) -> Result<bool> {
        self.hfm().excedance_equiv(&other.hfm())
    }

    /// All ASMs of order n, enumerated through height-function rows.
    pub fn all(n: usize) -> Vec<Asm> {
        assert!(n >= 1);
        let mut out = Vec::new();
        let mut rows: Vec<Vec<i32>> = vec![(0..=n as i32).collect()];
        fn rec(n: usize, rows: &mut Vec<Vec<i32>>, out: &mut Vec<Asm>) {
            let i = rows.len();
            if i == n + 1 {
                let side = n + 1;
                let mut h = Vec::with_capacity(side * side);
                for row in rows.iter() {
                    h.extend_from_slice(row);
                }
                out.push(Hfm { n, h }.asm());
                return;
            }
            // row i starts at i, ends at n-i, steps +-1, differs +-1 from the
            // row above
            let mut row = Vec::with_capacity(n + 1);
            row.push(i as i32);
            fn build(
                n: usize,
                i: usize,
                row: &mut Vec<i32>,
                rows: &mut Vec<Vec<i32>>,
                out: &mut Vec<Asm>,
            ) {
                let j = row.len();
                if j == n + 1 {
                    if *row.last().unwrap() == (n - i) as i32 {
                        rows.push(row.clone());
                        rec(n, rows, out);
                        rows.pop();
                    }
                    return;
                }
                let prev = rows.last().unwrap()[j];
                for d in [1, -1] {
                    let v = row[j - 1] + d;
                    if (v - prev).abs() == 1 && v >= 0 {
                        row.push(v);
                        build(n, i, row, rows, out);
                        row.pop();
                    }
                }
            }
            build(n, i, &mut row, rows, out);
        }
        rec(n, &mut rows, &mut out);
        out
    }
}

impl Csm {
    /// Validates the corner-sum invariants: zero first row and column, 0..n
    /// along the last row and column, and unit-or-zero steps.
    pub fn new(n: usize, c: Vec<i32>) -> Result<Self> {
        let side = n + 1;
        if n == 0 || c.len() != side * side {
            return Err(Error::Invalid {
                kind: "csm",
                index: (0, 0),
                reason: format!("expected {side}x{side} entries, got {}", c.len()),
            });
        }
        let at = |i: usize, j: usize| c[i * side + j];
        for j in 0..=n {
            if at(0, j) != 0 {
                return Err(Error::Invalid {
                    kind: "csm",
                    index: (0, j),
                    reason: format!("first row must be 0, got {}", at(0, j)),
                });
            }
            if at(n, j) != j as i32 {
                return Err(Error::Invalid {
                    kind: "csm",
                    index: (n, j),
                    reason: format!("last row must increase 0..{n}, got {}", at(n, j)),
                });
            }
        }
        for i in 0..=n {
            if at(i, 0) != 0 {
                return Err(Error::Invalid {
                    kind: "csm",
                    index: (i, 0),
                    reason: format!("first column must be 0, got {}", at(i, 0)),
                });
            }
            if at(i, n) != i as i32 {
                return Err(Error::Invalid {
                    kind: "csm",
                    index: (i, n),
                    reason: format!("last column must increase 0..{n}, got {}", at(i, n)),
                });
            }
        }
        for i in 0..=n {
            for j in 1..=n {
                let d = at(i, j) - at(i, j - 1);
                if d != 0 && d != 1 {
                    return Err(Error::Invalid {
                        kind: "csm",
                        index: (i, j),
                        reason: format!("row step {d}, expected 0 or 1"),
                    });
                }
            }
        }
        for j in 0..=n {
            for i in 1..=n {
                let d = at(i, j) - at(i - 1, j);
                if d != 0 && d != 1 {
                    return Err(Error::Invalid {
                        kind: "csm",
                        index: (i, j),
                        reason: format!("column step {d}, expected 0 or 1"),
                    });
                }
            }
        }
        Ok(Self { n, c })
    }

    pub fn try_from_rows(rows: &[Vec<i64>]) -> Result<Self> {
        let side = rows.len();
        if side == 0 {
            return Err(Error::Invalid {
                kind: "csm",
                index: (0, 0),
                reason: "empty matrix".into(),
            });
        }
        let n = side - 1;
        let mut c = Vec::with_capacity(side * side);
        for (i, row) in rows.iter().enumerate() {
            if row.len() != side {
                return Err(Error::Invalid {
                    kind: "csm",
                    index: (i, 0),
                    reason: format!("row has {} entries, expected {side}", row.len()),
                });
            }
            c.extend(row.iter().map(|&v| v as i32));
        }
        Self::new(n, c)
    }

    /// Order of the underlying ASM; the matrix itself is (n+1) x (n+1).
    pub fn n(&self) -> usize {
        self.n
    }

    pub fn get(&self, i: usize, j: usize) -> i32 {
        self.c[i * (self.n + 1) + j]
    }

    pub fn rows(&self) -> Vec<Vec<i32>> {
        let side = self.n + 1;
        (0..side).map(|i| self.c[i * side..(i + 1) * side].to_vec()).collect()
    }

    pub fn asm(&self) -> Asm {
        let n = self.n;
        let mut a = Vec::with_capacity(n * n);
        for i in 1..=n {
            for j in 1..=n {
                let v = self.get(i, j) - self.get(i - 1, j) - self.get(i, j - 1)
                    + self.get(i - 1, j - 1);
                a.push(v as i8);
            }
        }
        Asm::new(n, a).expect("a valid CSM differences to a valid ASM")
    }

    pub fn hfm(&self) -> Hfm {
        let n = self.n;
        let side = n + 1;
        let mut h = Vec::with_capacity(side * side);
        for i in 0..=n {
            for j in 0..=n {
                h.push((i + j) as i32 - 2 * self.get(i, j));
            }
        }
        Hfm::new(n, h).expect("a valid CSM transforms to a valid HFM")
    }
}

impl Hfm {
    /// Validates the height invariants: border heights |i-j| style (first
    /// row and column 0..n, last row and column n..0), unit steps, and
    /// nonnegativity.
    pub fn new(n: usize, h: Vec<i32>) -> Result<Self> {
        let side = n + 1;
        if n == 0 || h.len() != side * side {
            return Err(Error::Invalid {
                kind: "hfm",
                index: (0, 0),
                reason: format!("expected {side}x{side} entries, got {}", h.len()),
            });
        }
        let at = |i: usize, j: usize| h[i * side + j];
        for j in 0..=n {
            if at(0, j) != j as i32 {
                return Err(Error::Invalid {
                    kind: "hfm",
                    index: (0, j),
                    reason: format!("first row must be 0..{n}, got {}", at(0, j)),
                });
            }
            if at(n, j) != (n - j) as i32 {
                return Err(Error::Invalid {
                    kind: "hfm",
                    index: (n, j),
                    reason: format!("last row must be {n}..0, got {}", at(n, j)),
                });
            }
        }
        for i in 0..=n {
            if at(i, 0) != i as i32 {
                return Err(Error::Invalid {
                    kind: "hfm",
                    index: (i, 0),
                    reason: format!("first column must be 0..{n}, got {}", at(i, 0)),
                });
            }
            if at(i, n) != (n - i) as i32 {
                return Err(Error::Invalid {
                    kind: "hfm",
                    index: (i, n),
                    reason: format!("last column must be {n}..0, got {}", at(i, n)),
                });
            }
        }
        for i in 0..=n {
            for j in 0..=n {
                if at(i, j) < 0 {
                    return Err(Error::Invalid {
                        kind: "hfm",
                        index: (i, j),
                        reason: format!("negative height {}", at(i, j)),
                    });
                }
                if j > 0 && (at(i, j) - at(i, j - 1)).abs() != 1 {
                    return Err(Error::Invalid {
                        kind: "hfm",
                        index: (i, j),
                        reason: "row neighbors must differ by 1".into(),
                    });
                }
                if i > 0 && (at(i, j) - at(i - 1, j)).abs() != 1 {
                    return Err(Error::Invalid {
                        kind: "hfm",
                        index: (i, j),
                        reason: "column neighbors must differ by 1".into(),
                    });
                }
            }
        }
        Ok(Self { n, h })
    }

    pub fn try_from_rows(rows: &[Vec<i64>]) -> Result<Self> {
        let side = rows.len();
        if side == 0 {
            return Err(Error::Invalid {
                kind: "hfm",
                index: (0, 0),
                reason: "empty matrix".into(),
            });
        }
        let n = side - 1;
        let mut h = Vec::with_capacity(side * side);
        for (i, row) in rows.iter().enumerate() {
            if row.len() != side {
                return Err(Error::Invalid {
                    kind: "hfm",
                    index: (i, 0),
                    reason: format!("row has {} entries, expected {side}", row.len()),
                });
            }
            h.extend(row.iter().map(|&v| v as i32));
        }
        Self::new(n, h)
    }

    /// Order of the underlying ASM; the matrix itself is (n+1) x (n+1).
    pub fn n(&self) -> usize {
        self.n
    }

    pub fn get(&self, i: usize, j: usize) -> i32 {
        self.h[i * (self.n + 1) + j]
    }

    pub fn rows(&self) -> Vec<Vec<i32>> {
        let side = self.n + 1;
        (0..side).map(|i| self.h[i * side..(i + 1) * side].to_vec()).collect()
    }

    pub fn csm(&self) -> Csm {
        let n = self.n;
        let side = n + 1;
        let mut c = Vec::with_capacity(side * side);
        for i in 0..=n {
            for j in 0..=n {
                // parity of H guarantees exact division
                c.push(((i + j) as i32 - self.get(i, j)) / 2);
            }
        }
        Csm::new(n, c).expect("a valid HFM transforms to a valid CSM")
    }

    pub fn asm(&self) -> Asm {
        let n = self.n;
        let mut a = Vec::with_capacity(n * n);
        for i in 1..=n {
            for j in 1..=n {
                let v = self.get(i - 1, j) + self.get(i, j - 1)
                    - self.get(i, j)
                    - self.get(i - 1, j - 1);
                a.push((v / 2) as i8);
            }
        }
        Asm::new(n, a).expect("a valid HFM differences to a valid ASM")
    }

    pub fn leq(&self, other: &Hfm) -> Result<bool> {
        if self.n != other.n {
            return Err(Error::SizeMismatch { left: self.n, right: other.n });
        }
        Ok(self.h.iter().zip(&other.h).all(|(a, b)| a <= b))
    }

    pub fn join(&self, other: &Hfm) -> Result<Hfm> {
        if self.n != other.n {
            return Err(Error::SizeMismatch { left: self.n, right: other.n });
        }
        let h: Vec<i32> = self.h.iter().zip(&other.h).map(|(&a, &b)| a.max(b)).collect();
        Hfm::new(self.n, h)
    }

    pub fn meet(&self, other: &Hfm) -> Result<Hfm> {
        if self.n != other.n {
            return Err(Error::SizeMismatch { left: self.n, right: other.n });
        }
        let h: Vec<i32> = self.h.iter().zip(&other.h).map(|(&a, &b)| a.min(b)).collect();
        Hfm::new(self.n, h)
    }

    fn local_extrema(&self, minima: bool) -> BTreeSet<(usize, usize)> {
        let n = self.n;
        let mut out = BTreeSet::new();
        for i in 1..n {
            for j in 1..n {
                let v = self.get(i, j);
                let strict = [(i - 1, j), (i + 1, j), (i, j - 1), (i, j + 1)]
                    .iter()
                    .all(|&(a, b)| if minima { v < self.get(a, b) } else { v > self.get(a, b) });
                if strict {
                    out.insert((i, j));
                }
            }
        }
        out
    }

    /// Copy with H[i][j] shifted by `delta`; only valid at an ascent
    /// (delta = 2) or descent (delta = -2).
    fn bumped(&self, i: usize, j: usize, delta: i32) -> Hfm {
        let mut h = self.h.clone();
        h[i * (self.n + 1) + j] += delta;
        Hfm::new(self.n, h).expect("bumping at a strict local extremum stays valid")
    }

    /// H[0][0], H[1][0], H[1][1], ..., H[n][n-1], H[n][n].
    pub fn height_seq(&self) -> Vec<i32> {
        let mut seq = Vec::with_capacity(2 * self.n + 1);
        seq.push(self.get(0, 0));
        for i in 1..=self.n {
            seq.push(self.get(i, i - 1));
            seq.push(self.get(i, i));
        }
        seq
    }

    /// True iff the diagonal and subdiagonal heights agree.
    pub fn excedance_equiv(&self, other: &Hfm) -> Result<bool> {
        if self.n != other.n {
            return Err(Error::SizeMismatch { left: self.n, right: other.n });
        }
        Ok(self.height_seq() == other.height_seq())
    }
}

impl fmt::Display for Asm {
    /// Token text: `+` for 1, `-` for -1, `.` for 0, one line per row.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for i in 0..self.n {
            if i > 0 {
                writeln!(f)?;
            }
            for j in 0..self.n {
                let ch = match self.get(i, j) {
                    1 => '+',
                    -1 => '-',
                    _ => '.',
                };
                write!(f, "{ch}")?;
            }
        }
        Ok(())
    }
}

impl fmt::Debug for Asm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "Asm(order {})", self.n)?;
        fmt::Display::fmt(self, f)
    }
}

impl FromStr for Asm {
    type Err = Error;

    /// Parses the `+`/`-`/`.` token text, one row per line. Spaces inside
    /// rows are ignored; `0`, `1` are accepted as aliases for `.`, `+`.
    fn from_str(s: &str) -> Result<Self> {
        let mut rows: Vec<Vec<i64>> = Vec::new();
        for line in s.lines() {
            let mut row = Vec::new();
            for ch in line.chars() {
                match ch {
                    '+' | '1' => row.push(1),
                    '-' => row.push(-1),
                    '.' | '0' => row.push(0),
                    c if c.is_whitespace() => {}
                    c => return Err(Error::Parse(format!("unexpected character {c:?} in ASM text"))),
                }
            }
            if !row.is_empty() {
                rows.push(row);
            }
        }
        Self::try_from_rows(&rows)
    }
}

impl Serialize for Asm {
    fn serialize<S: serde::Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        serializer.collect_seq(self.rows())
    }
}

impl<'de> Deserialize<'de> for Asm {
    fn deserialize<D: serde::Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        let rows = Vec::<Vec<i64>>::deserialize(deserializer)?;
        Asm::try_from_rows(&rows).map_err(serde::de::Error::custom)
    }
}

impl Serialize for Csm {
    fn serialize<S: serde::Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        serializer.collect_seq(self.rows())
    }
}

impl<'de> Deserialize<'de> for Csm {
    fn deserialize<D: serde::Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        let rows = Vec::<Vec<i64>>::deserialize(deserializer)?;
        Csm::try_from_rows(&rows).map_err(serde::de::Error::custom)
    }
}

impl Serialize for Hfm {
    fn serialize<S: serde::Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        serializer.collect_seq(self.rows())
    }
}

impl<'de> Deserialize<'de> for Hfm {
    fn deserialize<D: serde::Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        let rows = Vec::<Vec<i64>>::deserialize(deserializer)?;
        Hfm::try_from_rows(&rows).map_err(serde::de::Error::custom)
    }
}

impl fmt::Debug for Csm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Csm(order {}) {:?}", self.n, self.rows())
    }
}

impl fmt::Debug for Hfm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Hfm(order {}) {:?}", self.n, self.rows())
    }
}
