//! The distributive lattice `M_n` of staircase tableaux.
//!
//! Members are semistandard fillings of the staircase with `n-2` rows whose
//! entries stay at most `n-1`; the order is entrywise.  Enumeration is
//! column-major with propagated interval bounds, so every generated filling
//! is a member and nothing is filtered away afterwards.

use rayon::prelude::*;

use super::{kn, Shape, Tableau};
use crate::poset::RankPolynomial;
use crate::{Error, Result};

/// Minimum of `M_n`: the tableau whose `(a, b)` entry is `a`.
pub fn minimal_tableau(n: u32) -> Result<Tableau> {
    if n < 2 {
        return Err(Error::TooSmall("the staircase tableau family", 2));
    }
    let shape = Shape::staircase(n as usize - 1);
    let rows = shape
        .rows()
        .iter()
        .enumerate()
        .map(|(a0, &len)| vec![a0 as u32 + 1; len])
        .collect();
    Ok(Tableau::new(shape, rows).expect("constant rows match the shape"))
}

/// Adds `k` to every entry at position `(a', b')` with `a' >= a`, `b' >= b`.
pub fn add(t: &Tableau, a: usize, b: usize, k: u32) -> Result<Tableau> {
    if !t.shape().contains(a, b) {
        return Err(Error::OutsideShape(a, b));
    }
    let mut rows = t.rows().to_vec();
    for (a0, row) in rows.iter_mut().enumerate().skip(a - 1) {
        debug_assert!(a0 + 1 >= a);
        for x in row.iter_mut().skip(b - 1) {
            *x += k;
        }
    }
    Tableau::new(t.shape().clone(), rows)
}

/// Membership in `M_n`: semistandard rows/columns plus the `n-1` entry cap.
///
/// Errors when the shape is not the staircase with `n-2` rows.
pub fn in_mn(t: &Tableau, n: u32) -> Result<bool> {
    if n < 2 {
        return Err(Error::TooSmall("the staircase tableau family", 2));
    }
    let expected = Shape::staircase(n as usize - 1);
    if t.shape() != &expected {
        return Err(Error::ShapeMismatch {
            expected: expected.rows().to_vec(),
            got: t.shape().rows().to_vec(),
        });
    }
    for (a, b) in t.shape().cells() {
        let x = t.entry(a, b);
        if x < t.entry_or_boundary(a, b - 1) || x < t.entry_or_boundary(a - 1, b) + 1 {
            return Ok(false);
        }
    }
    // Entry cap: only column bottoms need checking thanks to column strictness.
    for b in 1..=t.shape().num_cols() {
        if t.entry(t.shape().col_height(b), b) > n - 1 {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Positions whose entry can be lowered by one without leaving `M_n`.
///
/// These biject with the elements covered by `t` in the lattice.
pub fn reducible_entries(t: &Tableau, n: u32) -> Result<Vec<(usize, usize)>> {
    if !in_mn(t, n)? {
        return Err(Error::NotInMn(n));
    }
    Ok(t.shape()
        .cells()
        .filter(|&(a, b)| is_reducible(t, a, b))
        .collect())
}

/// Reducibility criterion at one cell, virtual boundary included.
pub(crate) fn is_reducible(t: &Tableau, a: usize, b: usize) -> bool {
    let x = t.entry(a, b);
    x >= t.entry_or_boundary(a, b - 1) + 1 && x >= t.entry_or_boundary(a - 1, b) + 2
}

/// Entrywise maximum; the lattice join of `M_n` (and of `K_n`).
pub fn join(t1: &Tableau, t2: &Tableau) -> Result<Tableau> {
    zip_entries(t1, t2, u32::max)
}

/// Entrywise minimum; the lattice meet of `M_n` (and of `K_n`).
pub fn meet(t1: &Tableau, t2: &Tableau) -> Result<Tableau> {
    zip_entries(t1, t2, u32::min)
}

fn zip_entries(t1: &Tableau, t2: &Tableau, f: impl Fn(u32, u32) -> u32) -> Result<Tableau> {
    if t1.shape() != t2.shape() {
        return Err(Error::ShapeMismatch {
            expected: t1.shape().rows().to_vec(),
            got: t2.shape().rows().to_vec(),
        });
    }
    let rows = t1
        .rows()
        .iter()
        .zip(t2.rows())
        .map(|(r, s)| r.iter().zip(s).map(|(&x, &y)| f(x, y)).collect())
        .collect();
    Tableau::new(t1.shape().clone(), rows)
}

/// Streams every member of `M_n` once, in column-major lexicographic order.
pub fn for_each_mn<F: FnMut(&Tableau)>(n: u32, mut f: F) -> Result<()> {
    let mut cols = empty_columns(n)?;
    fill_columns(n, &mut cols, 0, 0, &mut |cols| f(&columns_to_tableau(cols)));
    Ok(())
}

/// Materializes `M_n`.  With a budget, refuses runs predicted to exceed it.
pub fn enumerate_mn(n: u32, budget: Option<u128>) -> Result<Vec<Tableau>> {
    if let Some(budget) = budget {
        let predicted = predicted_mn_count(n);
        if predicted > budget {
            return Err(Error::Budget {
                what: "staircase tableau enumeration".to_string(),
                predicted,
                budget,
            });
        }
    }
    let mut out = Vec::new();
    for_each_mn(n, |t| out.push(t.clone()))?;
    Ok(out)
}

/// `2^C(n-1, 2)`, saturating; used only for resource guards.
pub(crate) fn predicted_mn_count(n: u32) -> u128 {
    let n = n as u128;
    if n < 2 {
        return 1;
    }
    let exp = (n - 1) * (n - 2) / 2;
    if exp >= 128 {
        u128::MAX
    } else {
        1u128 << exp
    }
}

/// Aggregate statistics from one full pass over `M_n`.
///
/// A single sweep feeds several verification comparisons at once: counting,
/// the rank histogram, the reducibility histogram with its maximizers, and
/// the members passing the structural `K_n` characterization.
#[derive(Clone, Debug)]
pub struct MnScan {
    pub n: u32,
    pub count: u128,
    /// `rank_histogram[r]` counts members of entry sum `C(n,3) + r`.
    pub rank_histogram: Vec<u64>,
    /// `reducible_histogram[c]` counts members with exactly `c` reducible entries.
    pub reducible_histogram: Vec<u64>,
    /// Largest reducible-entry count seen.
    pub max_reducible: usize,
    /// Members attaining `max_reducible`, in generation order.
    pub max_reducible_members: Vec<Tableau>,
    /// Members passing the structural characterization ([`super::in_kn`]).
    pub char_members: Vec<Tableau>,
    /// Members with exactly one reducible entry (the join-irreducibles).
    pub join_irreducible_members: Vec<Tableau>,
    /// Members where some column `b` exceeds `min(b, n-1-b)` reducible
    /// entries; provably always zero, counted rather than assumed.
    pub column_bound_violations: u64,
}

impl MnScan {
    pub fn rank_polynomial(&self) -> RankPolynomial {
        RankPolynomial::from_coeffs(self.rank_histogram.iter().map(|&c| c as u128).collect())
    }
}

/// Full parallel sweep over `M_n`; work splits on first-column choices.
pub fn scan_mn(n: u32) -> Result<MnScan> {
    let cols = empty_columns(n)?;
    if cols.is_empty() {
        // n = 2: the single empty tableau.
        let mut acc = ScanAccumulator::new(n);
        acc.visit(&cols);
        return Ok(acc.finish());
    }

    // All strictly increasing first columns; each is an independent subtree.
    let mut prefixes: Vec
        <Vec<u32>> = Vec::new();
    {
        let mut cols = cols.clone();
        fill_columns_range(n, &mut cols, 0, 0, 1, &mut |cols: &[Vec<u32>]| {
            prefixes.push(cols[0].clone())
        });
    }

    let partials: Vec<ScanAccumulator> = prefixes
        .into_par_iter()
        .map(|first| {
            let mut cols = empty_columns(n).expect("validated above");
            cols[0] = first;
            let mut acc = ScanAccumulator::new(n);
            if cols.len() == 1 {
                acc.visit(&cols);
            } else {
                fill_columns(n, &mut cols, 1, 0, &mut |cols| acc.visit(cols));
            }
            acc
        })
        .collect();

    let mut merged = ScanAccumulator::new(n);
    for p in partials {
        merged.merge(p);
    }
    Ok(merged.finish())
}

struct ScanAccumulator {
    n: u32,
    min_sum: u64,
    count: u128,
    rank_histogram: Vec<u64>,
    reducible_histogram: Vec<u64>,
    max_reducible: usize,
    max_reducible_members: Vec<Tableau>,
    char_members: Vec<Tableau>,
    join_irreducible_members: Vec<Tableau>,
    column_bound_violations: u64,
    col_counts: Vec<usize>,
}

impl ScanAccumulator {
    fn new(n: u32) -> Self {
        let min_sum = minimal_tableau(n).map(|t| t.entry_sum()).unwrap_or(0);
        ScanAccumulator {
            n,
            min_sum,
            count: 0,
            rank_histogram: Vec::new(),
            reducible_histogram: Vec::new(),
            max_reducible: 0,
            max_reducible_members: Vec::new(),
            char_members: Vec::new(),
            join_irreducible_members: Vec::new(),
            column_bound_violations: 0,
            col_counts: Vec::new(),
        }
    }

    fn visit(&mut self, cols: &[Vec<u32>]) {
        let n = self.n as usize;
        self.count += 1;

        let sum: u64 = cols
            .iter()
            .flat_map(|c| c.iter())
            .map(|&x| u64::from(x))
            .sum();
        let rank = (sum - self.min_sum) as usize;
        bump(&mut self.rank_histogram, rank);

        // Reducible entries straight off the column representation.
        self.col_counts.clear();
        let mut total = 0usize;
        let mut bound_violation = false;
        for (b0, col) in cols.iter().enumerate() {
            let b = b0 + 1;
            let mut here = 0usize;
            for (a0, &x) in col.iter().enumerate() {
                let left = if b0 == 0 {
                    a0 as u32 + 1
                } else {
                    cols[b0 - 1][a0]
                };
                let above = if a0 == 0 { 0 } else { col[a0 - 1] };
                if x >= left + 1 && x >= above + 2 {
                    here += 1;
                }
            }
            if here > b.min(n - 1 - b) {
                bound_violation = true;
            }
            total += here;
            self.col_counts.push(here);
        }
        bump(&mut self.reducible_histogram, total);
        if bound_violation {
            self.column_bound_violations += 1;
        }

        if total > self.max_reducible {
            self.max_reducible = total;
            self.max_reducible_members.clear();
        }
        if total == self.max_reducible && !(total == 0 && self.count > 1 && cols.is_empty()) {
            self.max_reducible_members.push(columns_to_tableau(cols));
        }
        if total == 1 {
            self.join_irreducible_members.push(columns_to_tableau(cols));
        }
        if kn::in_kn_columns(self.n, cols) {
            self.char_members.push(columns_to_tableau(cols));
        }
    }

    fn merge(&mut self, other: ScanAccumulator) {
        self.count += other.count;
        merge_histogram(&mut self.rank_histogram, &other.rank_histogram);
        merge_histogram(&mut self.reducible_histogram, &other.reducible_histogram);
        self.column_bound_violations += other.column_bound_violations;
        self.char_members.extend(other.char_members);
        self.join_irreducible_members
            .extend(other.join_irreducible_members);
        use std::cmp::Ordering;
        match other.max_reducible.cmp(&self.max_reducible) {
            Ordering::Greater => {
                self.max_reducible = other.max_reducible;
                self.max_reducible_members = other.max_reducible_members;
            }
            Ordering::Equal => self
                .max_reducible_members
                .extend(other.max_reducible_members),
            Ordering::Less => {}
        }
    }

    fn finish(self) -> MnScan {
        MnScan {
            n: self.n,
            count: self.count,
            rank_histogram: self.rank_histogram,
            reducible_histogram: self.reducible_histogram,
            max_reducible: self.max_reducible,
            max_reducible_members: self.max_reducible_members,
            char_members: self.char_members,
            join_irreducible_members: self.join_irreducible_members,
            column_bound_violations: self.column_bound_violations,
        }
    }
}

fn bump(hist: &mut Vec<u64>, idx: usize) {
    if hist.len() <= idx {
        hist.resize(idx + 1, 0);
    }
    hist[idx] += 1;
}

fn merge_histogram(into: &mut Vec<u64>, from: &[u64]) {
    if into.len() < from.len() {
        into.resize(from.len(), 0);
    }
    for (x, y) in into.iter_mut().zip(from) {
        *x += y;
    }
}

/// Column vectors for the staircase with `n-2` rows, all entries zeroed.
pub(crate) fn empty_columns(n: u32) -> Result<Vec<Vec<u32>>> {
    if n < 2 {
        return Err(Error::TooSmall("the staircase tableau family", 2));
    }
    let n = n as usize;
    Ok((1..=n.saturating_sub(2))
        .map(|b| vec![0u32; n - 1 - b])
        .collect())
}

pub(crate) fn columns_to_tableau(cols: &[Vec<u32>]) -> Tableau {
    let num_rows = cols.first().map_or(0, Vec::len);
    let rows: Vec<Vec<u32>> = (0..num_rows)
        .map(|a0| {
            cols.iter()
                .take_while(|col| col.len() > a0)
                .map(|col| col[a0])
                .collect()
        })
        .collect();
    Tableau::from_rows(rows).expect("columns of a valid shape transpose cleanly")
}

/// Fills cell `(a0, b0)` onward (0-based, column-major) with every value in
/// the propagated interval, recursing; calls `f` at complete fillings.
pub(crate) fn fill_columns<F: FnMut(&[Vec<u32>])>(
    n: u32,
    cols: &mut Vec<Vec<u32>>,
    b0: usize,
    a0: usize,
    f: &mut F,
) {
    let stop = cols.len();
    fill_columns_range(n, cols, b0, a0, stop, f)
}

/// As [`fill_columns`] but stopping after column index `b_stop` (exclusive);
/// used to split enumeration into independent prefix subtrees.
pub(crate) fn fill_columns_range<F: FnMut(&[Vec<u32>])>(
    n: u32,
    cols: &mut Vec<Vec<u32>>,
    b0: usize,
    a0: usize,
    b_stop: usize,
    f: &mut F,
) {
    if b0 >= b_stop {
        f(cols);
        return;
    }
    let height = cols[b0].len();
    if a0 == height {
        fill_columns_range(n, cols, b0 + 1, 0, b_stop, f);
        return;
    }
    let left = if b0 == 0 {
        a0 as u32 + 1
    } else {
        cols[b0 - 1][a0]
    };
    let above = if a0 == 0 { 0 } else { cols[b0][a0 - 1] };
    let lo = left.max(above + 1);
    // Leave room for the strict increase below this cell; the column bottom
    // must still fit under n-1.
    let hi = (n - 1) - (height - 1 - a0) as u32;
    for v in lo..=hi {
        cols[b0][a0] = v;
        fill_columns_range(n, cols, b0, a0 + 1, b_stop, f);
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::formulas;

    fn t(rows: &[&[u32]]) -> Tableau {
        Tableau::from_rows(rows.iter().map(|r| r.to_vec()).collect()).unwrap()
    }

    #[test]
    fn minimal_tableau_small() {
        assert_eq!(minimal_tableau(4).unwrap(), t(&[&[1, 1], &[2]]));
        assert_eq!(minimal_tableau(3).unwrap(), t(&[&[1]]));
        assert_eq!(minimal_tableau(2).unwrap(), Tableau::empty());
        assert!(minimal_tableau(1).is_err());
    }

    #[test]
    fn minimal_entry_sum_is_tetrahedral() {
        for n in 2..=9u32 {
            let expected = u64::from(n) * u64::from(n - 1) * u64::from(n - 2) / 6;
            assert_eq!(minimal_tableau(n).unwrap().entry_sum(), expected);
        }
    }

    #[test]
    fn add_examples() {
        let t0 = minimal_tableau(4).unwrap();
        assert_eq!(add(&t0, 1, 1, 1).unwrap(), t(&[&[2, 2], &[3]]));
        assert_eq!(add(&t0, 1, 2, 2).unwrap(), t(&[&[1, 3], &[2]]));
        assert_eq!(add(&t0, 2, 1, 5).unwrap(), t(&[&[1, 1], &[7]]));
        assert_eq!(add(&t0, 1, 1, 0).unwrap(), t0);
        assert!(add(&t0, 2, 2, 1).is_err());
    }

    #[test]
    fn add_is_additive() {
        let base = t(&[&[1, 2, 2], &[2, 3], &[4]]);
        for (a, b) in base.shape().cells().collect::<Vec<_>>() {
            let twice = add(&add(&base, a, b, 1).unwrap(), a, b, 1).unwrap();
            assert_eq!(twice, add(&base, a, b, 2).unwrap());
        }
    }

    #[test]
    fn membership() {
        assert!(in_mn(&minimal_tableau(4).unwrap(), 4).unwrap());
        assert!(in_mn(&t(&[&[1, 3], &[2]]), 4).unwrap());
        assert!(!in_mn(&t(&[&[1, 1], &[1]]), 4).unwrap());
        assert!(!in_mn(&t(&[&[2, 1], &[3]]), 4).unwrap());
        assert!(!in_mn(&t(&[&[1, 1], &[4]]), 4).unwrap());
        assert!(!in_mn(&t(&[&[0, 1], &[1]]), 4).unwrap());
        assert!(in_mn(&t(&[&[1]]), 4).is_err());
        assert!(in_mn(&Tableau::empty(), 2).unwrap());
    }

    #[test]
    fn enumerate_m4_exact() {
        let all = enumerate_mn(4, None).unwrap();
        let expected: Vec<Tableau> = [
            [1, 1, 2],
            [1, 2, 2],
            [1, 3, 2],
            [1, 1, 3],
            [1, 2, 3],
            [1, 3, 3],
            [2, 2, 3],
            [2, 3, 3],
        ]
        .iter()
        .map(|&[t11, t12, t21]| t(&[&[t11, t12], &[t21]]))
        .collect();
        assert_eq!(all, expected);
    }

    #[test]
    fn counts_match_closed_form() {
        for n in 2..=7u32 {
            let mut count = 0u128;
            for_each_mn(n, |tab| {
                debug_assert!(in_mn(tab, n).unwrap());
                count += 1;
            })
            .unwrap();
            assert_eq!(count, formulas::f_closed(n));
        }
    }

    #[test]
    fn budget_guard() {
        let err = enumerate_mn(8, Some(100)).unwrap_err();
        assert!(matches!(err, Error::Budget { predicted: 2_097_152, .. }));
        assert_eq!(enumerate_mn(4, Some(8)).unwrap().len(), 8);
    }

    #[test]
    fn join_meet_basics() {
        let a = t(&[&[1, 3], &[2]]);
        let b = t(&[&[2, 2], &[3]]);
        assert_eq!(join(&a, &b).unwrap(), t(&[&[2, 3], &[3]]));
        assert_eq!(meet(&a, &b).unwrap(), t(&[&[1, 2], &[2]]));
        assert_eq!(join(&a, &a).unwrap(), a);
        assert!(join(&a, &t(&[&[1]])).is_err());

        let bottom = minimal_tableau(4).unwrap();
        for m in enumerate_mn(4, None).unwrap() {
            assert_eq!(join(&bottom, &m).unwrap(), m);
            assert_eq!(meet(&bottom, &m).unwrap(), bottom);
        }
    }

    #[test]
    fn lattice_laws_exhaustive_m5() {
        let all = enumerate_mn(5, None).unwrap();
        for x in &all {
            for y in &all {
                let j = join(x, y).unwrap();
                let m = meet(x, y).unwrap();
                assert!(in_mn(&j, 5).unwrap());
                assert!(in_mn(&m, 5).unwrap());
                assert_eq!(j, join(y, x).unwrap());
                assert_eq!(m, meet(y, x).unwrap());
                assert_eq!(join(x, &m).unwrap(), *x);
                assert_eq!(meet(x, &j).unwrap(), *x);
                // Order agrees with the algebra.
                assert_eq!(x.le(y), j == *y);
            }
        }
        for x in &all {
            for y in &all {
                for z in &all {
                    let a = join(x, &meet(y, z).unwrap()).unwrap();
                    let b = meet(&join(x, y).unwrap(), &join(x, z).unwrap()).unwrap();
                    assert_eq!(a, b);
                }
            }
        }
    }

    #[test]
    fn reducible_entries_examples() {
        let t0 = minimal_tableau(4).unwrap();
        assert!(reducible_entries(&t0, 4).unwrap().is_empty());
        assert_eq!(reducible_entries(&t(&[&[1, 3], &[2]]), 4).unwrap(), vec![(1, 2)]);
        assert_eq!(
            reducible_entries(&t(&[&[2, 3], &[3]]), 4).unwrap(),
            vec![(1, 1), (1, 2)]
        );
        assert!(matches!(
            reducible_entries(&t(&[&[1, 1], &[1]]), 4),
            Err(Error::NotInMn(4))
        ));
    }

    #[test]
    fn reducible_means_decrementable() {
        for n in [4u32, 5] {
            for tab in enumerate_mn(n, None).unwrap() {
                let red = reducible_entries(&tab, n).unwrap();
                for (a, b) in tab.shape().cells().collect::<Vec<_>>() {
                    let x = tab.entry(a, b);
                    let lowered_in_mn = x > 0
                        && in_mn(&tab.with_entry(a, b, x - 1).unwrap(), n).unwrap();
                    assert_eq!(lowered_in_mn, red.contains(&(a, b)), "n={n} cell ({a},{b})");
                }
            }
        }
    }

    #[test]
    fn scan_matches_direct_enumeration() {
        for n in 2..=6u32 {
            let scan = scan_mn(n).unwrap();
            let all = enumerate_mn(n, None).unwrap();
            assert_eq!(scan.count, all.len() as u128);
            assert_eq!(scan.column_bound_violations, 0);

            let mut max_r = 0;
            let mut max_members = Vec::new();
            let mut ji = Vec::new();
            for tab in &all {
                let r = reducible_entries(tab, n).unwrap().len();
                use std::cmp::Ordering;
                match r.cmp(&max_r) {
                    Ordering::Greater => {
                        max_r = r;
                        max_members = vec![tab.clone()];
                    }
                    Ordering::Equal => max_members.push(tab.clone()),
                    Ordering::Less => {}
                }
                if r == 1 {
                    ji.push(tab.clone());
                }
            }
            assert_eq!(scan.max_reducible, max_r);
            assert_eq!(scan.max_reducible_members, max_members);
            assert_eq!(scan.join_irreducible_members, ji);
        }
    }

    #[test]
    fn scan_m4_frozen() {
        let scan = scan_mn(4).unwrap();
        assert_eq!(scan.count, 8);
        assert_eq!(scan.rank_histogram, vec![1, 2, 2, 2, 1]);
        assert_eq!(scan.max_reducible, 2);
        assert_eq!(scan.max_reducible_members.len(), 3);
        assert_eq!(scan.char_members, scan.max_reducible_members);
        assert_eq!(scan.join_irreducible_members.len(), 4);
        assert_eq!(scan.rank_polynomial().to_string(), "1 + 2q + 2q^2 + 2q^3 + q^4");
    }

    #[test]
    fn scan_m2_degenerate() {
        let scan = scan_mn(2).unwrap();
        assert_eq!(scan.count, 1);
        assert_eq!(scan.rank_histogram, vec![1]);
        assert_eq!(scan.max_reducible, 0);
        assert_eq!(scan.max_reducible_members, vec![Tableau::empty()]);
        assert_eq!(scan.char_members, vec![Tableau::empty()]);
    }
}
