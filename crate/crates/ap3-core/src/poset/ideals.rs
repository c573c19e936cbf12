//! Order ideals, antichains, and the bijection between them.
//!
//! Ideals are streamed by the standard two-way branching on a minimal
//! remaining element: include it, or exclude it together with everything
//! above it.  Each ideal is produced exactly once and the whole run does no
//! per-node allocation, so counting the ~2 million ideals of the largest
//! posets handled here takes well under a second.

use std::ops::ControlFlow;

use super::{clear_bit, count_bits, first_bit, iter_bits, set_bit, subset, FinitePoset};
use crate::{Error, Result};

/// A poset re-indexed along one of its linear extensions.
///
/// In extension coordinates the first set bit of any up-closed "remaining"
/// mask is minimal in it, which is what both the ideal stream and the lattice
/// checks rely on.
pub(crate) struct PermutedView {
    pub size: usize,
    pub words: usize,
    /// `ext[p]` is the original index stored at permuted position `p`.
    pub ext: Vec<usize>,
    up: Vec<u64>,
}

impl PermutedView {
    pub fn up_row(&self, p: usize) -> &[u64] {
        &self.up[p * self.words..(p + 1) * self.words]
    }

    /// Visits every ideal as a bit mask in permuted coordinates.
    pub fn try_for_each_ideal<F: FnMut(&[u64]) -> ControlFlow<()>>(
        &self,
        mut visit: F,
    ) -> ControlFlow<()> {
        let mut ideal = vec![0u64; self.words];
        let mut remaining = vec![0u64; self.words];
        for p in 0..self.size {
            set_bit(&mut remaining, p);
        }
        // one scratch row per recursion depth, allocated up front
        let mut scratch = vec![vec![0u64; self.words]; self.size + 1];
        self.rec(&mut ideal, &mut remaining, &mut scratch, &mut visit)
    }

    fn rec<F: FnMut(&[u64]) -> ControlFlow<()>>(
        &self,
        ideal: &mut Vec<u64>,
        remaining: &mut Vec<u64>,
        scratch: &mut [Vec<u64>],
        visit: &mut F,
    ) -> ControlFlow<()> {
        let m = match first_bit(remaining) {
            None => return visit(ideal),
            Some(m) => m,
        };
        // branch 1: take m (minimal in remaining, so the result is an ideal)
        set_bit(ideal, m);
        clear_bit(remaining, m);
        self.rec(ideal, remaining, scratch, visit)?;
        clear_bit(ideal, m);
        // branch 2: reject m, which forces out everything above it
        let (removed, rest) = scratch.split_first_mut().expect("scratch depth exhausted");
        let up_m = self.up_row(m);
        for ((rem, rm), u) in remaining.iter_mut().zip(removed.iter_mut()).zip(up_m) {
            *rm = *rem & u;
            *rem &= !u;
        }
        self.rec(ideal, remaining, rest, visit)?;
        for (rem, rm) in remaining.iter_mut().zip(removed.iter()) {
            *rem |= rm;
        }
        set_bit(remaining, m);
        ControlFlow::Continue(())
    }

    /// Number of maximal elements of an ideal given in permuted coordinates;
    /// equals the size of the corresponding antichain and the number of
    /// elements the ideal covers in the ideal lattice.
    pub fn maximal_count(&self, mask: &[u64]) -> usize {
        iter_bits(mask)
            .filter(|&p| !self.has_strictly_above_in(p, mask))
            .count()
    }

    fn has_strictly_above_in(&self, p: usize, mask: &[u64]) -> bool {
        self.up_row(p)
            .iter()
            .zip(mask)
            .enumerate()
            .any(|(wi, (u, m))| {
                let mut w = u & m;
                if p / 64 == wi {
                    w &= !(1 << (p % 64));
                }
                w != 0
            })
    }

    /// Rewrites a permuted-coordinate mask into original coordinates.
    pub fn to_original(&self, mask: &[u64], out: &mut [u64]) {
        out.fill(0);
        for p in iter_bits(mask) {
            set_bit(out, self.ext[p]);
        }
    }
}

/// The set of all order ideals of a poset, each as a bit mask over the base
/// poset's elements, sorted by (size, mask) so the vector order is a linear
/// extension of inclusion.
pub struct IdealFamily<'a> {
    base: &'a FinitePoset,
    ideals: Vec<Vec<u64>>,
}

impl<'a> IdealFamily<'a> {
    pub fn base(&self) -> &'a FinitePoset {
        self.base
    }

    pub fn len(&self) -> usize {
        self.ideals.len()
    }

    pub fn is_empty(&self) -> bool {
        self.ideals.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = &[u64]> {
        self.ideals.iter().map(|v| v.as_slice())
    }

    pub fn masks(&self) -> &[Vec<u64>] {
        &self.ideals
    }

    /// The ideals ordered by inclusion: the distributive lattice J(P).
    pub fn to_lattice(&self) -> FinitePoset {
        FinitePoset::from_leq_unchecked(self.ideals.len(), |a, b| {
            subset(&self.ideals[a], &self.ideals[b])
        })
    }
}

impl FinitePoset {
    pub(crate) fn permuted_view(&self) -> PermutedView {
        let ext = self.linear_extension();
        let words = self.words();
        let mut pos = vec![0usize; self.size()];
        for (p, &i) in ext.iter().enumerate() {
            pos[i] = p;
        }
        let mut up = vec![0u64; self.size() * words];
        for (p, &i) in ext.iter().enumerate() {
            for j in iter_bits(self.up_row(i)) {
                set_bit(&mut up[p * words..(p + 1) * words], pos[j]);
            }
        }
        PermutedView {
            size: self.size(),
            words,
            ext,
            up,
        }
    }

    /// Streams every order ideal exactly once, as a bit mask in original
    /// element coordinates.
    pub fn for_each_ideal<F: FnMut(&[u64])>(&self, mut visit: F) {
        let view = self.permuted_view();
        let mut original = vec![0u64; self.words()];
        view.try_for_each_ideal(|mask| {
            view.to_original(mask, &mut original);
            visit(&original);
            ControlFlow::Continue(())
        });
    }

    /// Counts order ideals, aborting with [`Error::Budget`] as soon as the
    /// count passes `budget` (the total cannot be known in advance).
    pub fn count_ideals(&self, budget: Option<u128>) -> Result<u128> {
        let view = self.permuted_view();
        let mut count: u128 = 0;
        let limit = budget.unwrap_or(u128::MAX);
        let outcome = view.try_for_each_ideal(|_| {
            count += 1;
            if count > limit {
                ControlFlow::Break(())
            } else {
                ControlFlow::Continue(())
            }
        });
        match outcome {
            ControlFlow::Continue(()) => Ok(count),
            ControlFlow::Break(()) => Err(Error::Budget {
                what: "order ideal enumeration".into(),
                predicted: count,
                budget: limit,
            }),
        }
    }

    /// Materializes all order ideals, refusing to collect more than `budget`.
    pub fn order_ideals(&self, budget: Option<u128>) -> Result<IdealFamily<'_>> {
        let view = self.permuted_view();
        let limit = budget.unwrap_or(u128::MAX);
        let mut ideals: Vec<Vec<u64>> = Vec::new();
        let outcome = view.try_for_each_ideal(|mask| {
            if ideals.len() as u128 >= limit {
                return ControlFlow::Break(());
            }
            let mut original = vec![0u64; self.words()];
            view.to_original(mask, &mut original);
            ideals.push(original);
            ControlFlow::Continue(())
        });
        if let ControlFlow::Break(()) = outcome {
            return Err(Error::Budget {
                what: "order ideal materialization".into(),
                predicted: ideals.len() as u128 + 1,
                budget: limit,
            });
        }
        ideals.sort_unstable_by(|a, b| {
            count_bits(a)
                .cmp(&count_bits(b))
                .then_with(|| a.cmp(b))
        });
        Ok(IdealFamily { base: self, ideals })
    }

    /// True iff the mask is down-closed.
    pub fn is_ideal(&self, mask: &[u64]) -> bool {
        mask.len() == self.words()
            && iter_bits(mask).all(|i| i < self.size() && subset(self.down_row(i), mask))
    }

    /// Maximal elements of an arbitrary subset mask, ascending.
    pub fn maximal_elements(&self, mask: &[u64]) -> Vec<usize> {
        iter_bits(mask)
            .filter(|&i| {
                !self
                    .up_row(i)
                    .iter()
                    .zip(mask)
                    .enumerate()
                    .any(|(wi, (u, m))| {
                        let mut w = u & m;
                        if i / 64 == wi {
                            w &= !(1 << (i % 64));
                        }
                        w != 0
                    })
            })
            .collect()
    }

    /// The antichain of maximal elements of an ideal.  Errors if the mask is
    /// not down-closed.
    pub fn ideal_to_antichain(&self, mask: &[u64]) -> Result<Vec<usize>> {
        if !self.is_ideal(mask) {
            let witness = iter_bits(mask)
                .find(|&i| i >= self.size() || !subset(self.down_row(i), mask))
                .unwrap_or(0);
            return Err(Error::NotAPartialOrder(format!(
                "mask is not an order ideal (element {witness} has a missing lower element)"
            )));
        }
        Ok(self.maximal_elements(mask))
    }

    /// Down-closure of an antichain.  Errors if two of the given elements are
    /// comparable or an index is out of range.
    pub fn antichain_to_ideal(&self, antichain: &[usize]) -> Result<Vec<u64>> {
        for &i in antichain {
            if i >= self.size() {
                return Err(Error::IndexOutOfRange(i, self.size()));
            }
        }
        for (x, &a) in antichain.iter().enumerate() {
            for &b in &antichain[x + 1..] {
                if a == b || self.leq(a, b) || self.leq(b, a) {
                    return Err(Error::NotAnAntichain(a, b));
                }
            }
        }
        let mut mask = vec![0u64; self.words()];
        for &i in antichain {
            for (w, d) in mask.iter_mut().zip(self.down_row(i)) {
                *w |= d;
            }
        }
        Ok(mask)
    }

    /// Number of elements the ideal covers inside the ideal lattice J(P);
    /// equals the number of its maximal elements.
    pub fn covered_count(&self, mask: &[u64]) -> Result<usize> {
        Ok(self.ideal_to_antichain(mask)?.len())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn masks_as_sets(p: &FinitePoset) -> Vec<Vec<usize>> {
        let mut out = Vec::new();
        p.for_each_ideal(|mask| out.push(iter_bits(mask).collect()));
        out.sort();
        out
    }

    #[test]
    fn chain_ideals_are_prefixes() {
        let p = FinitePoset::chain(3);
        assert_eq!(
            masks_as_sets(&p),
            vec![vec![], vec![0], vec![0, 1], vec![0, 1, 2]]
        );
        assert_eq!(p.count_ideals(None).unwrap(), 4);
    }

    #[test]
    fn antichain_ideals_are_all_subsets() {
        let p = FinitePoset::antichain(4);
        assert_eq!(p.count_ideals(None).unwrap(), 16);
    }

    #[test]
    fn empty_poset_has_one_ideal() {
        let p = FinitePoset::antichain(0);
        assert_eq!(p.count_ideals(None).unwrap(), 1);
        let fam = p.order_ideals(None).unwrap();
        assert_eq!(fam.len(), 1);
    }

    #[test]
    fn budget_aborts_enumeration() {
        let p = FinitePoset::antichain(5);
        assert!(matches!(
            p.count_ideals(Some(10)),
            Err(Error::Budget { .. })
        ));
        assert_eq!(p.count_ideals(Some(32)).unwrap(), 32);
    }

    #[test]
    fn ideal_antichain_round_trip() {
        let p = FinitePoset::from_covers(4, &[(0, 1), (0, 2), (1, 3), (2, 3)]).unwrap();
        let fam = p.order_ideals(None).unwrap();
        for mask in fam.iter() {
            let antichain = p.ideal_to_antichain(mask).unwrap();
            let back = p.antichain_to_ideal(&antichain).unwrap();
            assert_eq!(back, mask);
        }
    }

    #[test]
    fn non_ideal_rejected() {
        let p = FinitePoset::chain(2);
        let mut mask = vec![0u64; 1];
        set_bit(&mut mask, 1);
        assert!(p.ideal_to_antichain(&mask).is_err());
        assert!(!p.is_ideal(&mask));
    }

    #[test]
    fn comparable_elements_are_not_an_antichain() {
        let p = FinitePoset::chain(2);
        assert!(matches!(
            p.antichain_to_ideal(&[0, 1]),
            Err(Error::NotAnAntichain(..))
        ));
    }

    #[test]
    fn covered_count_equals_antichain_size() {
        let p = FinitePoset::from_covers(5, &[(0, 2), (1, 2), (1, 3), (4, 3)]).unwrap();
        let fam = p.order_ideals(None).unwrap();
        let lattice = fam.to_lattice();
        let lower = lattice.lower_cover_counts();
        for (idx, mask) in fam.iter().enumerate() {
            assert_eq!(p.covered_count(mask).unwrap(), lower[idx]);
        }
    }

    #[test]
    fn ideal_lattice_of_two_antichain_is_diamond() {
        let p = FinitePoset::antichain(2);
        let fam = p.order_ideals(None).unwrap();
        let l = fam.to_lattice();
        assert_eq!(l.size(), 4);
        l.is_lattice().unwrap();
        assert_eq!(l.join_irreducible_indices().len(), 2);
    }
}
