//! Staircase semistandard tableaux and the structures built on them.
//!
//! The lattice `M_n` consists of all semistandard Young tableaux of
//! staircase shape `(n-2, n-3, ..., 1)` with entries at most `n-1`, ordered
//! entrywise; its join and meet are entrywise maximum and minimum.  `K_n` is
//! the subposet of tableaux with the maximum possible number of reducible
//! entries.  Members of `K_n` factor through [`split`] into a left half
//! (columns up to the middle) and a right half, glue back together with
//! [`glue`], and the left halves biject with a smaller `M` lattice through
//! the difference transform [`theta`].
//!
//! Throughout, `(a, b)` indexes row `a`, column `b`, both 1-based, with the
//! virtual boundary convention `T[a][0] = a`, `T[0][b] = 0` (see
//! [`Tableau::entry_or_boundary`]).  All inequalities from the membership
//! predicates are written against that accessor so they read exactly like
//! the defining conditions.

mod kn;
mod mn;
mod theta;
mod un;

pub use kn::{
    canonical_min_right, corner_label, enumerate_knl, enumerate_knr, glue, in_an, in_kn, in_knl,
    in_knr, kn_members, kn_members_filter, max_reducible_stats, right_iso, right_iso_inv, split,
    MaxReducibleStats, RightIsoVariant,
};
pub use mn::{
    add, enumerate_mn, for_each_mn, in_mn, join, meet, minimal_tableau, reducible_entries, scan_mn,
    MnScan,
};
pub use theta::{enumerate_an, in_apn, in_appn, theta, theta1, theta2};
pub use un::{classify_un, UClass, UnClassifier};

use serde::{Deserialize, Serialize};

use crate::{Error, Result};

/// Young-diagram shape, stored as weakly decreasing row lengths.
#[derive(Clone, PartialEq, Eq, Hash, Debug, Serialize, Deserialize)]
#[serde(try_from = "Vec<usize>", into = "Vec<usize>")]
pub struct Shape {
    rows: Vec<usize>,
}

impl Shape {
    /// Builds a shape from row lengths; trailing zero rows are dropped.
    pub fn new(rows: Vec<usize>) -> Result<Self> {
        let mut rows = rows;
        while rows.last() == Some(&0) {
            rows.pop();
        }
        if rows.windows(2).any(|w| w[0] < w[1]) || rows.last() == Some(&0) {
            return Err(Error::BadShape(rows));
        }
        Ok(Shape { rows })
    }

    pub fn empty() -> Self {
        Shape { rows: Vec::new() }
    }

    /// Staircase `(m-1, m-2, ..., 1)`; empty for `m <= 1`.
    pub fn staircase(m: usize) -> Self {
        Shape {
            rows: (1..m).rev().collect(),
        }
    }

    /// Left half of the staircase with `n-2` rows, middle column included:
    /// the conjugate of `(n-2, n-3, ..., floor(n/2))`.
    pub fn left_staircase(n: u32) -> Self {
        let n = n as usize;
        if n < 3 {
            return Shape::empty();
        }
        let mid = (n - 1) / 2;
        Shape {
            rows: (1..=n - 2).map(|a| mid.min(n - 1 - a)).collect(),
        }
    }

    pub fn rectangle(num_rows: usize, num_cols: usize) -> Self {
        if num_rows == 0 || num_cols == 0 {
            return Shape::empty();
        }
        Shape {
            rows: vec![num_cols; num_rows],
        }
    }

    pub fn rows(&self) -> &[usize] {
        &self.rows
    }

    pub fn num_rows(&self) -> usize {
        self.rows.len()
    }

    pub fn num_cols(&self) -> usize {
        self.rows.first().copied().unwrap_or(0)
    }

    /// Length of row `a` (1-based); zero when the row does not exist.
    pub fn row_len(&self, a: usize) -> usize {
        if a == 0 {
            return 0;
        }
        self.rows.get(a - 1).copied().unwrap_or(0)
    }

    /// Height of column `b` (1-based); zero when the column does not exist.
    pub fn col_height(&self, b: usize) -> usize {
        if b == 0 {
            return 0;
        }
        self.rows.iter().take_while(|&&len| len >= b).count()
    }

    pub fn contains(&self, a: usize, b: usize) -> bool {
        a >= 1 && b >= 1 && b <= self.row_len(a)
    }

    pub fn num_cells(&self) -> usize {
        self.rows.iter().sum()
    }

    pub fn is_empty(&self) -> bool {
        self.rows.is_empty()
    }

    pub fn conjugate(&self) -> Shape {
        Shape {
            rows: (1..=self.num_cols()).map(|b| self.col_height(b)).collect(),
        }
    }

    /// Cell coordinates in row-major order.
    pub fn cells(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        self.rows
            .iter()
            .enumerate()
            .flat_map(|(a0, &len)| (1..=len).map(move |b| (a0 + 1, b)))
    }
}

impl TryFrom<Vec<usize>> for Shape {
    type Error = Error;

    fn try_from(rows: Vec<usize>) -> Result<Self> {
        Shape::new(rows)
    }
}

impl From<Shape> for Vec<usize> {
    fn from(shape: Shape) -> Vec<usize> {
        shape.rows
    }
}

/// A filling of a [`Shape`] with nonnegative integer entries.
///
/// Construction validates that rows fit the shape exactly; which *family* a
/// tableau belongs to (`M_n`, `K_n`, a half family, ...) is checked by the
/// dedicated membership predicates, not by the type.
///
/// Serialized form: `{"shape": [2, 1], "rows": [[1, 1], [2]]}`.
#[derive(Clone, PartialEq, Eq, Hash, Debug, Serialize, Deserialize)]
#[serde(try_from = "TableauDto", into = "TableauDto")]
pub struct Tableau {
    shape: Shape,
    rows: Vec<Vec<u32>>,
}

#[derive(Serialize, Deserialize)]
struct TableauDto {
    shape: Vec<usize>,
    rows: Vec<Vec<u32>>,
}

impl Tableau {
    pub fn new(shape: Shape, rows: Vec<Vec<u32>>) -> Result<Self> {
        let got: Vec<usize> = rows.iter().map(Vec::len).collect();
        if got != shape.rows {
            return Err(Error::ShapeMismatch {
                expected: shape.rows.clone(),
                got,
            });
        }
        Ok(Tableau { shape, rows })
    }

    /// Builds a tableau whose shape is read off from the row lengths.
    pub fn from_rows(rows: Vec<Vec<u32>>) -> Result<Self> {
        let shape = Shape::new(rows.iter().map(Vec::len).collect())?;
        if rows.len() != shape.num_rows() {
            // A trailing empty row was trimmed by the shape; reject rather
            // than silently dropping entries the caller passed.
            return Err(Error::ShapeMismatch {
                expected: shape.rows.clone(),
                got: rows.iter().map(Vec::len).collect(),
            });
        }
        Ok(Tableau { shape, rows })
    }

    pub fn empty() -> Self {
        Tableau {
            shape: Shape::empty(),
            rows: Vec::new(),
        }
    }

    pub fn shape(&self) -> &Shape {
        &self.shape
    }

    pub fn rows(&self) -> &[Vec<u32>] {
        &self.rows
    }

    /// Entry at row `a`, column `b` (1-based). Panics off the shape.
    pub fn entry(&self, a: usize, b: usize) -> u32 {
        self.rows[a - 1][b - 1]
    }

    pub fn get(&self, a: usize, b: usize) -> Option<u32> {
        self.rows.get(a.checked_sub(1)?)?.get(b.checked_sub(1)?).copied()
    }

    /// Entry extended by the virtual boundary: `T[a][0] = a`, `T[0][b] = 0`.
    ///
    /// Panics when `(a, b)` is neither on the shape nor on the boundary.
    pub fn entry_or_boundary(&self, a: usize, b: usize) -> u32 {
        if a == 0 {
            0
        } else if b == 0 {
            a as u32
        } else {
            self.entry(a, b)
        }
    }

    /// Entrywise order used by every lattice in this crate.
    ///
    /// Callers must compare tableaux of equal shape.
    pub fn le(&self, other: &Tableau) -> bool {
        debug_assert_eq!(self.shape, other.shape);
        self.rows
            .iter()
            .zip(&other.rows)
            .all(|(r, s)| r.iter().zip(s).all(|(x, y)| x <= y))
    }

    pub fn entry_sum(&self) -> u64 {
        self.rows
            .iter()
            .map(|r| r.iter().map(|&x| u64::from(x)).sum::<u64>())
            .sum()
    }

    /// Copy with one entry replaced; errors off the shape.
    pub fn with_entry(&self, a: usize, b: usize, value: u32) -> Result<Tableau> {
        if !self.shape.contains(a, b) {
            return Err(Error::OutsideShape(a, b));
        }
        let mut out = self.clone();
        out.rows[a - 1][b - 1] = value;
        Ok(out)
    }

    /// One-line rendering, e.g. `[1,1],[2]`; used for poset labels.
    pub fn compact(&self) -> String {
        if self.rows.is_empty() {
            return "[]".to_string();
        }
        self.rows
            .iter()
            .map(|r| {
                let mut s = String::from("[");
                for (idx, x) in r.iter().enumerate() {
                    if idx > 0 {
                        s.push(',');
                    }
                    s.push_str(&x.to_string());
                }
                s.push(']');
                s
            })
            .collect::<Vec<_>>()
            .join(",")
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("tableau serialization cannot fail")
    }

    pub fn from_json(s: &str) -> Result<Self> {
        serde_json::from_str(s).map_err(|e| Error::Parse(e.to_string()))
    }
}

impl TryFrom<TableauDto> for Tableau {
    type Error = Error;

    fn try_from(dto: TableauDto) -> Result<Self> {
        Tableau::new(Shape::new(dto.shape)?, dto.rows)
    }
}

impl From<Tableau> for TableauDto {
    fn from(t: Tableau) -> TableauDto {
        TableauDto {
            shape: t.shape.rows,
            rows: t.rows,
        }
    }
}

/// English notation: row 1 (the longest) on top, entries column-aligned.
impl std::fmt::Display for Tableau {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        if self.rows.is_empty() {
            return write!(f, "(empty)");
        }
        let width = self
            .rows
            .iter()
            .flat_map(|r| r.iter())
            .map(|x| x.to_string().len())
            .max()
            .unwrap_or(1);
        for (idx, row) in self.rows.iter().enumerate() {
            if idx > 0 {
                writeln!(f)?;
            }
            for (jdx, x) in row.iter().enumerate() {
                if jdx > 0 {
                    write!(f, " ")?;
                }
                write!(f, "{x:>width$}")?;
            }
        }
        Ok(())
    }
}

/// Last entry of the first row of a left-half tableau; always 1 or 2.
///
/// The label decides which right halves a left half can be glued to.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub enum CornerLabel {
    One,
    Two,
}

impl CornerLabel {
    pub fn value(self) -> u32 {
        match self {
            CornerLabel::One => 1,
            CornerLabel::Two => 2,
        }
    }

    pub fn from_value(v: u32) -> Result<Self> {
        match v {
            1 => Ok(CornerLabel::One),
            2 => Ok(CornerLabel::Two),
            _ => Err(Error::Parse(format!("corner label must be 1 or 2, got {v}"))),
        }
    }
}

impl std::fmt::Display for CornerLabel {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{}", self.value())
    }
}
