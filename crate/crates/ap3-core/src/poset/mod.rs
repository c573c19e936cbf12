//! Finite posets as dense bit matrices.
//!
//! `FinitePoset` stores the full order relation as packed up-set and down-set
//! rows, which keeps comparability queries, cover extraction, lattice checks,
//! and ideal enumeration simple word-level loops.  This caps practical sizes
//! at roughly 10^4 elements, which is all the lattices materialized here ever
//! need; the larger lattices (millions of elements) are handled by streaming
//! enumeration elsewhere and never become `FinitePoset` values.

mod ideals;
mod iso;
mod rank;

pub use ideals::IdealFamily;
pub use iso::{are_isomorphic, are_isomorphic_with_budget, IsoOutcome};
pub use rank::RankPolynomial;

use serde::{Deserialize, Serialize};

use crate::{Error, Result};

pub(crate) fn words_for(size: usize) -> usize {
    size.div_ceil(64)
}

pub(crate) fn get_bit(row: &[u64], i: usize) -> bool {
    row[i / 64] >> (i % 64) & 1 == 1
}

pub(crate) fn set_bit(row: &mut [u64], i: usize) {
    row[i / 64] |= 1 << (i % 64);
}

pub(crate) fn clear_bit(row: &mut [u64], i: usize) {
    row[i / 64] &= !(1 << (i % 64));
}

pub(crate) fn is_empty(row: &[u64]) -> bool {
    row.iter().all(|&w| w == 0)
}

pub(crate) fn first_bit(row: &[u64]) -> Option<usize> {
    for (wi, &w) in row.iter().enumerate() {
        if w != 0 {
            return Some(wi * 64 + w.trailing_zeros() as usize);
        }
    }
    None
}

pub(crate) fn iter_bits(row: &[u64]) -> impl Iterator<Item = usize> + '_ {
    row.iter().enumerate().flat_map(|(wi, &w)| {
        let mut rem = w;
        std::iter::from_fn(move || {
            if rem == 0 {
                None
            } else {
                let b = rem.trailing_zeros() as usize;
                rem &= rem - 1;
                Some(wi * 64 + b)
            }
        })
    })
}

pub(crate) fn count_bits(row: &[u64]) -> usize {
    row.iter().map(|w| w.count_ones() as usize).sum()
}

/// `a` and `b` intersect.
pub(crate) fn intersects(a: &[u64], b: &[u64]) -> bool {
    a.iter().zip(b).any(|(x, y)| x & y != 0)
}

/// `a` is a subset of `b`.
pub(crate) fn subset(a: &[u64], b: &[u64]) -> bool {
    a.iter().zip(b).all(|(x, y)| x & !y == 0)
}

/// A finite partially ordered set on elements `0..size`.
///
/// The order is stored explicitly: `up[i]` is the bit row of all `j` with
/// `i <= j` (including `i` itself) and `down[i]` its transpose.  Cover pairs
/// are extracted once at construction.  Optional labels are carried along for
/// export only; they never influence the order.
#[derive(Clone)]
pub struct FinitePoset {
    size: usize,
    words: usize,
    up: Vec<u64>,
    down: Vec<u64>,
    covers: Vec<(usize, usize)>,
    labels: Option<Vec<String>>,
}

#[derive(Serialize, Deserialize)]
struct PosetDto {
    size: usize,
    covers: Vec<(usize, usize)>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    labels: Option<Vec<String>>,
}

impl FinitePoset {
    /// Builds a poset from an arbitrary comparability predicate and validates
    /// that it really is one: reflexive, antisymmetric, transitive.
    pub fn from_leq<F: FnMut(usize, usize) -> bool>(size: usize, mut leq: F) -> Result<Self> {
        let words = words_for(size);
        let mut up = vec![0u64; size * words];
        for i in 0..size {
            for j in 0..size {
                if leq(i, j) {
                    set_bit(&mut up[i * words..(i + 1) * words], j);
                }
            }
        }
        Self::from_up_matrix(size, up, true)
    }

    /// Same as [`FinitePoset::from_leq`] but skips the partial-order axioms.
    /// For relations that are orders by construction (componentwise orders,
    /// inclusion orders).
    pub(crate) fn from_leq_unchecked<F: FnMut(usize, usize) -> bool>(
        size: usize,
        mut leq: F,
    ) -> Self {
        let words = words_for(size);
        let mut up = vec![0u64; size * words];
        for i in 0..size {
            for j in 0..size {
                if leq(i, j) {
                    set_bit(&mut up[i * words..(i + 1) * words], j);
                }
            }
        }
        Self::from_up_matrix(size, up, false).expect("unchecked construction cannot fail")
    }

    fn from_up_matrix(size: usize, up: Vec<u64>, validate: bool) -> Result<Self> {
        let words = words_for(size);
        if validate {
            for i in 0..size {
                if !get_bit(&up[i * words..], i) {
                    return Err(Error::NotAPartialOrder(format!("{i} is not <= itself")));
                }
            }
            for i in 0..size {
                let row_i = &up[i * words..(i + 1) * words];
                for j in iter_bits(row_i) {
                    if j != i && get_bit(&up[j * words..], i) {
                        return Err(Error::NotAPartialOrder(format!(
                            "{i} <= {j} and {j} <= {i} for distinct elements"
                        )));
                    }
                    // transitivity: everything above j must be above i
                    if !subset(&up[j * words..(j + 1) * words], row_i) {
                        return Err(Error::NotAPartialOrder(format!(
                            "{i} <= {j} but up({j}) is not contained in up({i})"
                        )));
                    }
                }
            }
        }

        let mut down = vec![0u64; size * words];
        for i in 0..size {
            for j in iter_bits(&up[i * words..(i + 1) * words]) {
                set_bit(&mut down[j * words..(j + 1) * words], i);
            }
        }

        let covers = Self::extract_covers(size, words, &up, &down);
        Ok(FinitePoset {
            size,
            words,
            up,
            down,
            covers,
            labels: None,
        })
    }

    /// `j` covers `i` iff `i < j` with nothing strictly between.
    fn extract_covers(
        size: usize,
        words: usize,
        up: &[u64],
        down: &[u64],
    ) -> Vec<(usize, usize)> {
        let mut covers = Vec::new();
        let mut strict = vec![0u64; words];
        for i in 0..size {
            strict.copy_from_slice(&up[i * words..(i + 1) * words]);
            clear_bit(&mut strict, i);
            for j in iter_bits(&strict) {
                let dj = &down[j * words..(j + 1) * words];
                // strictly-between element: in strict up(i) and strictly below j
                let between = strict
                    .iter()
                    .zip(dj)
                    .enumerate()
                    .any(|(wi, (s, d))| {
                        let mut w = s & d;
                        if j / 64 == wi {
                            w &= !(1 << (j % 64));
                        }
                        w != 0
                    });
                if !between {
                    covers.push((i, j));
                }
            }
        }
        covers.sort_unstable();
        covers
    }

    /// Builds the poset whose order is the reflexive-transitive closure of the
    /// given cover (or generally: implication) pairs `(lower, upper)`.
    /// Errors if a pair is out of range or the pairs contain a cycle.
    pub fn from_covers(size: usize, pairs: &[(usize, usize)]) -> Result<Self> {
        for &(a, b) in pairs {
            if a >= size {
                return Err(Error::IndexOutOfRange(a, size));
            }
            if b >= size {
                return Err(Error::IndexOutOfRange(b, size));
            }
            if a == b {
                return Err(Error::CyclicCovers(a));
            }
        }
        let mut above: Vec<Vec<usize>> = vec![Vec::new(); size];
        let mut indeg = vec![0usize; size];
        for &(a, b) in pairs {
            above[a].push(b);
            indeg[b] += 1;
        }
        // Kahn's algorithm; smallest-index-first keeps the order deterministic.
        let mut heap: std::collections::BinaryHeap<std::cmp::Reverse<usize>> = (0..size)
            .filter(|&i| indeg[i] == 0)
            .map(std::cmp::Reverse)
            .collect();
        let mut topo = Vec::with_capacity(size);
        while let Some(std::cmp::Reverse(i)) = heap.pop() {
            topo.push(i);
            for &j in &above[i] {
                indeg[j] -= 1;
                if indeg[j] == 0 {
                    heap.push(std::cmp::Reverse(j));
                }
            }
        }
        if topo.len() < size {
            let stuck = (0..size).find(|&i| indeg[i] > 0).unwrap();
            return Err(Error::CyclicCovers(stuck));
        }

        let words = words_for(size);
        let mut up = vec![0u64; size * words];
        let mut tmp = vec![0u64; words];
        for &i in topo.iter().rev() {
            set_bit(&mut up[i * words..(i + 1) * words], i);
            for &j in &above[i] {
                tmp.copy_from_slice(&up[j * words..(j + 1) * words]);
                for (w, r) in up[i * words..(i + 1) * words].iter_mut().zip(&tmp) {
                    *w |= r;
                }
            }
        }
        Self::from_up_matrix(size, up, false)
    }

    /// An antichain: no two distinct elements comparable.
    pub fn antichain(size: usize) -> Self {
        Self::from_leq_unchecked(size, |a, b| a == b)
    }

    /// A chain `0 < 1 < ... < size-1`.
    pub fn chain(size: usize) -> Self {
        Self::from_leq_unchecked(size, |a, b| a <= b)
    }

    pub fn size(&self) -> usize {
        self.size
    }

    pub(crate) fn words(&self) -> usize {
        self.words
    }

    pub fn leq(&self, a: usize, b: usize) -> bool {
        assert!(a < self.size && b < self.size);
        get_bit(self.up_row(a), b)
    }

    pub fn lt(&self, a: usize, b: usize) -> bool {
        a != b && self.leq(a, b)
    }

    pub(crate) fn up_row(&self, i: usize) -> &[u64] {
        &self.up[i * self.words..(i + 1) * self.words]
    }

    pub(crate) fn down_row(&self, i: usize) -> &[u64] {
        &self.down[i * self.words..(i + 1) * self.words]
    }

    /// All elements `>= i`.
    pub fn up_set(&self, i: usize) -> Vec<usize> {
        iter_bits(self.up_row(i)).collect()
    }

    /// All elements `<= i`.
    pub fn down_set(&self, i: usize) -> Vec<usize> {
        iter_bits(self.down_row(i)).collect()
    }

    /// Cover pairs `(lower, upper)`, sorted.
    pub fn covers(&self) -> &[(usize, usize)] {
        &self.covers
    }

    pub fn lower_cover_counts(&self) -> Vec<usize> {
        let mut counts = vec![0usize; self.size];
        for &(_, b) in &self.covers {
            counts[b] += 1;
        }
        counts
    }

    pub fn upper_cover_counts(&self) -> Vec<usize> {
        let mut counts = vec![0usize; self.size];
        for &(a, _) in &self.covers {
            counts[a] += 1;
        }
        counts
    }

    pub fn labels(&self) -> Option<&[String]> {
        self.labels.as_deref()
    }

    pub fn with_labels(mut self, labels: Vec<String>) -> Result<Self> {
        if labels.len() != self.size {
            return Err(Error::IndexOutOfRange(labels.len(), self.size));
        }
        self.labels = Some(labels);
        Ok(self)
    }

    /// Indices ordered so that `a < b` in the poset implies `a` comes first.
    /// Ties broken by down-set size, then index, so the result is canonical.
    pub fn linear_extension(&self) -> Vec<usize> {
        let mut order: Vec<usize> = (0..self.size).collect();
        let key: Vec<usize> = (0..self.size)
            .map(|i| count_bits(self.down_row(i)))
            .collect();
        order.sort_by_key(|&i| (key[i], i));
        order
    }

    /// Unique minimal element, if any.
    pub fn bottom(&self) -> Option<usize> {
        let minimals: Vec<usize> = (0..self.size)
            .filter(|&i| count_bits(self.down_row(i)) == 1)
            .collect();
        match minimals.as_slice() {
            [b] => Some(*b),
            _ => None,
        }
    }

    /// Unique maximal element, if any.
    pub fn top(&self) -> Option<usize> {
        let maximals: Vec<usize> = (0..self.size)
            .filter(|&i| count_bits(self.up_row(i)) == 1)
            .collect();
        match maximals.as_slice() {
            [t] => Some(*t),
            _ => None,
        }
    }

    /// Least upper bound of `a` and `b`, or an error if it does not exist or
    /// is not unique.
    pub fn join(&self, a: usize, b: usize) -> Result<usize> {
        self.bound(a, b, true)
    }

    /// Greatest lower bound of `a` and `b`.
    pub fn meet(&self, a: usize, b: usize) -> Result<usize> {
        self.bound(a, b, false)
    }

    fn bound(&self, a: usize, b: usize, upper: bool) -> Result<usize> {
        if a >= self.size {
            return Err(Error::IndexOutOfRange(a, self.size));
        }
        if b >= self.size {
            return Err(Error::IndexOutOfRange(b, self.size));
        }
        let (rows, opp): (&Vec<u64>, &Vec<u64>) = if upper {
            (&self.up, &self.down)
        } else {
            (&self.down, &self.up)
        };
        let w = self.words;
        let common: Vec<u64> = rows[a * w..(a + 1) * w]
            .iter()
            .zip(&rows[b * w..(b + 1) * w])
            .map(|(x, y)| x & y)
            .collect();
        let mut extremal = None;
        for u in iter_bits(&common) {
            // u is minimal (resp. maximal) in the common-bound set iff no
            // other common bound lies strictly on its near side
            let near = &opp[u * w..(u + 1) * w];
            let alone = common.iter().zip(near).enumerate().all(|(wi, (c, n))| {
                let mut x = c & n;
                if u / 64 == wi {
                    x &= !(1 << (u % 64));
                }
                x == 0
            });
            if alone {
                if extremal.is_some() {
                    return Err(Error::NotALattice(a, b, if upper { "join" } else { "meet" }));
                }
                extremal = Some(u);
            }
        }
        extremal.ok_or(Error::NotALattice(a, b, if upper { "join" } else { "meet" }))
    }

    /// Checks that every pair of elements has a unique join and meet.
    ///
    /// Works on a copy whose storage order is a linear extension, where the
    /// first common upper bound is automatically minimal; `x` is then the
    /// least upper bound iff every common upper bound lies above `x`.  That
    /// makes the whole check quadratic in the size (times words per row).
    pub fn is_lattice(&self) -> Result<()> {
        if self.size == 0 {
            // empty poset has no pairs to violate anything; treated as a
            // (degenerate) lattice by convention of its ideal family
            return Ok(());
        }
        let ext = self.linear_extension();
        let w = self.words;
        let mut perm_up = vec![0u64; self.size * w];
        let mut perm_down = vec![0u64; self.size * w];
        let mut pos = vec![0usize; self.size];
        for (p, &i) in ext.iter().enumerate() {
            pos[i] = p;
        }
        for (p, &i) in ext.iter().enumerate() {
            for j in iter_bits(self.up_row(i)) {
                set_bit(&mut perm_up[p * w..(p + 1) * w], pos[j]);
            }
            for j in iter_bits(self.down_row(i)) {
                set_bit(&mut perm_down[p * w..(p + 1) * w], pos[j]);
            }
        }
        let mut common = vec![0u64; w];
        for a in 0..self.size {
            for b in a + 1..self.size {
                for (wi, c) in common.iter_mut().enumerate() {
                    *c = perm_up[a * w + wi] & perm_up[b * w + wi];
                }
                match first_bit(&common) {
                    None => return Err(Error::NotALattice(ext[a], ext[b], "join")),
                    Some(u) => {
                        if !subset(&common, &perm_up[u * w..(u + 1) * w]) {
                            return Err(Error::NotALattice(ext[a], ext[b], "join"));
                        }
                    }
                }
                for (wi, c) in common.iter_mut().enumerate() {
                    *c = perm_down[a * w + wi] & perm_down[b * w + wi];
                }
                // scan from the top: the last element in extension order that
                // is a common lower bound must be the greatest one
                let mut last = None;
                for wi in (0..w).rev() {
                    if common[wi] != 0 {
                        last = Some(wi * 64 + 63 - common[wi].leading_zeros() as usize);
                        break;
                    }
                }
                match last {
                    None => return Err(Error::NotALattice(ext[a], ext[b], "meet")),
                    Some(u) => {
                        if !subset(&common, &perm_down[u * w..(u + 1) * w]) {
                            return Err(Error::NotALattice(ext[a], ext[b], "meet"));
                        }
                    }
                }
            }
        }
        Ok(())
    }

    /// Elements with exactly one lower cover, as the induced subposet.
    /// Errors if the input is not a lattice.
    pub fn join_irreducibles(&self) -> Result<FinitePoset> {
        self.is_lattice()?;
        let idx = self.join_irreducible_indices();
        Ok(self.induced(&idx))
    }

    /// Indices of elements covering exactly one element.  Meaningful for
    /// lattices; no lattice validation here.
    pub fn join_irreducible_indices(&self) -> Vec<usize> {
        self.lower_cover_counts()
            .iter()
            .enumerate()
            .filter(|&(_, &c)| c == 1)
            .map(|(i, _)| i)
            .collect()
    }

    /// Subposet induced on the given (distinct, in-range) indices, in the
    /// given order.  Labels are carried over when present.
    pub fn induced(&self, indices: &[usize]) -> FinitePoset {
        for &i in indices {
            assert!(i < self.size, "induced index {i} out of range");
        }
        let mut sub = Self::from_leq_unchecked(indices.len(), |a, b| {
            self.leq(indices[a], indices[b])
        });
        if let Some(labels) = &self.labels {
            sub.labels = Some(indices.iter().map(|&i| labels[i].clone()).collect());
        }
        sub
    }

    /// Disjoint union; the second poset's elements are shifted by
    /// `self.size()` and the two parts are incomparable.
    pub fn disjoint_sum(&self, other: &FinitePoset) -> FinitePoset {
        let n1 = self.size;
        let mut sum = Self::from_leq_unchecked(n1 + other.size, |a, b| {
            if a < n1 && b < n1 {
                self.leq(a, b)
            } else if a >= n1 && b >= n1 {
                other.leq(a - n1, b - n1)
            } else {
                false
            }
        });
        if let (Some(l1), Some(l2)) = (&self.labels, &other.labels) {
            sum.labels = Some(l1.iter().chain(l2.iter()).cloned().collect());
        }
        sum
    }

    /// Componentwise order on pairs; `(a, b)` is encoded as
    /// `a * other.size() + b`.
    pub fn direct_product(&self, other: &FinitePoset) -> FinitePoset {
        let n2 = other.size;
        let mut prod = Self::from_leq_unchecked(self.size * n2, |x, y| {
            self.leq(x / n2, y / n2) && other.leq(x % n2, y % n2)
        });
        if let (Some(l1), Some(l2)) = (&self.labels, &other.labels) {
            prod.labels = Some(
                (0..self.size * n2)
                    .map(|x| format!("({},{})", l1[x / n2], l2[x % n2]))
                    .collect(),
            );
        }
        prod
    }

    /// Longest-path height of each element above the minimal elements.
    pub fn heights(&self) -> Vec<usize> {
        let mut h = vec![0usize; self.size];
        for &i in &self.linear_extension() {
            for j in iter_bits(self.down_row(i)) {
                if j != i {
                    h[i] = h[i].max(h[j] + 1);
                }
            }
        }
        h
    }

    /// Hasse diagram in Graphviz DOT format, layered by height.
    pub fn to_dot(&self, name: &str) -> String {
        use std::fmt::Write;
        let mut out = String::new();
        writeln!(out, "digraph \"{}\" {{", name.replace('"', "'")).unwrap();
        writeln!(out, "  rankdir=BT;").unwrap();
        writeln!(out, "  node [shape=box, fontname=\"monospace\"];").unwrap();
        for i in 0..self.size {
            let label = match &self.labels {
                Some(l) => l[i].replace('\\', "\\\\").replace('"', "\\\""),
                None => i.to_string(),
            };
            writeln!(out, "  n{i} [label=\"{label}\"];").unwrap();
        }
        let heights = self.heights();
        let max_h = heights.iter().copied().max().unwrap_or(0);
        for level in 0..=max_h {
            let at: Vec<String> = (0..self.size)
                .filter(|&i| heights[i] == level)
                .map(|i| format!("n{i};"))
                .collect();
            if !at.is_empty() && self.size > 0 {
                writeln!(out, "  {{ rank=same; {} }}", at.join(" ")).unwrap();
            }
        }
        for &(a, b) in &self.covers {
            writeln!(out, "  n{a} -> n{b};").unwrap();
        }
        writeln!(out, "}}").unwrap();
        out
    }

    /// JSON export: size, cover pairs, optional labels.
    pub fn to_json(&self) -> String {
        let dto = PosetDto {
            size: self.size,
            covers: self.covers.clone(),
            labels: self.labels.clone(),
        };
        serde_json::to_string(&dto).expect("poset serialization cannot fail")
    }

    /// Inverse of [`FinitePoset::to_json`]; the order is rebuilt as the
    /// transitive closure of the cover pairs.
    pub fn from_json(s: &str) -> Result<Self> {
        let dto: PosetDto =
            serde_json::from_str(s).map_err(|e| Error::Parse(e.to_string()))?;
        let mut p = Self::from_covers(dto.size, &dto.covers)?;
        if let Some(labels) = dto.labels {
            p = p.with_labels(labels)?;
        }
        Ok(p)
    }
}

impl std::fmt::Debug for FinitePoset {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(
            f,
            "FinitePoset(size={}, covers={:?})",
            self.size, self.covers
        )
    }
}
