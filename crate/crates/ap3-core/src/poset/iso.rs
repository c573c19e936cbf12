//! Order-isomorphism testing: color refinement plus backtracking search.

use std::collections::HashMap;

use super::{count_bits, FinitePoset};

/// Result of an isomorphism search.  `Undecided` means the step budget ran
/// out before the search space was exhausted; it is *not* a "no".
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum IsoOutcome {
    /// Witness map: `map[i]` is the image in the second poset of element `i`
    /// of the first.
    Isomorphic(Vec<usize>),
    NonIsomorphic,
    Undecided,
}

impl IsoOutcome {
    pub fn is_isomorphic(&self) -> bool {
        matches!(self, IsoOutcome::Isomorphic(_))
    }
}

const DEFAULT_BUDGET: u64 = 5_000_000;

pub fn are_isomorphic(a: &FinitePoset, b: &FinitePoset) -> IsoOutcome {
    are_isomorphic_with_budget(a, b, DEFAULT_BUDGET)
}

/// `max_steps` bounds the number of candidate assignments tried in the
/// backtracking phase.
pub fn are_isomorphic_with_budget(a: &FinitePoset, b: &FinitePoset, max_steps: u64) -> IsoOutcome {
    if a.size() != b.size() {
        return IsoOutcome::NonIsomorphic;
    }
    if a.covers().len() != b.covers().len() {
        return IsoOutcome::NonIsomorphic;
    }
    let n = a.size();
    if n == 0 {
        return IsoOutcome::Isomorphic(Vec::new());
    }

    let (colors_a, colors_b) = match refine_colors(a, b) {
        Some(c) => c,
        None => return IsoOutcome::NonIsomorphic,
    };

    // candidate pool per element of `a`: same refined color in `b`
    let mut by_color: HashMap<u32, Vec<usize>> = HashMap::new();
    for (j, &c) in colors_b.iter().enumerate() {
        by_color.entry(c).or_default().push(j);
    }
    let candidates: Vec<&[usize]> = colors_a
        .iter()
        .map(|c| by_color.get(c).map(|v| v.as_slice()).unwrap_or(&[]))
        .collect();

    // most-constrained-first: small candidate pools early
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by_key(|&i| (candidates[i].len(), i));

    let mut map = vec![usize::MAX; n];
    let mut used = vec![false; n];
    let mut steps = 0u64;
    match search(a, b, &order, &candidates, 0, &mut map, &mut used, &mut steps, max_steps) {
        SearchResult::Found => {
            debug_assert!(verify_map(a, b, &map));
            IsoOutcome::Isomorphic(map)
        }
        SearchResult::Exhausted => IsoOutcome::NonIsomorphic,
        SearchResult::OutOfBudget => IsoOutcome::Undecided,
    }
}

enum SearchResult {
    Found,
    Exhausted,
    OutOfBudget,
}

#[allow(clippy::too_many_arguments)]
fn search(
    a: &FinitePoset,
    b: &FinitePoset,
    order: &[usize],
    candidates: &[&[usize]],
    depth: usize,
    map: &mut [usize],
    used: &mut [bool],
    steps: &mut u64,
    max_steps: u64,
) -> SearchResult {
    if depth == order.len() {
        return SearchResult::Found;
    }
    let i = order[depth];
    let mut ran_dry = false;
    for &j in candidates[i] {
        if used[j] {
            continue;
        }
        *steps += 1;
        if *steps > max_steps {
            ran_dry = true;
            break;
        }
        let consistent = order[..depth].iter().all(|&i2| {
            let j2 = map[i2];
            a.leq(i, i2) == b.leq(j, j2) && a.leq(i2, i) == b.leq(j2, j)
        });
        if !consistent {
            continue;
        }
        map[i] = j;
        used[j] = true;
        match search(a, b, order, candidates, depth + 1, map, used, steps, max_steps) {
            SearchResult::Found => return SearchResult::Found,
            SearchResult::OutOfBudget => ran_dry = true,
            SearchResult::Exhausted => {}
        }
        map[i] = usize::MAX;
        used[j] = false;
        if ran_dry {
            break;
        }
    }
    if ran_dry {
        SearchResult::OutOfBudget
    } else {
        SearchResult::Exhausted
    }
}

/// Joint color refinement on the two posets.  Starts from local degree data
/// and repeatedly hashes in the multiset of neighbor colors along cover
/// edges.  Returns `None` as soon as the color histograms diverge, which
/// proves non-isomorphism.
fn refine_colors(a: &FinitePoset, b: &FinitePoset) -> Option<(Vec<u32>, Vec<u32>)> {
    type Key = (u32, Vec<u32>, Vec<u32>);
    let n = a.size();

    let initial = |p: &FinitePoset| -> Vec<Key> {
        let lower = p.lower_cover_counts();
        let upper = p.upper_cover_counts();
        (0..n)
            .map(|i| {
                (
                    0,
                    vec![
                        count_bits(p.down_row(i)) as u32,
                        count_bits(p.up_row(i)) as u32,
                        lower[i] as u32,
                        upper[i] as u32,
                    ],
                    Vec::new(),
                )
            })
            .collect()
    };

    let mut keys_a = initial(a);
    let mut keys_b = initial(b);
    let mut colors_a = vec![0u32; n];
    let mut colors_b = vec![0u32; n];
    let mut num_colors = 0usize;

    loop {
        let mut dict: HashMap<Key, u32> = HashMap::new();
        for (keys, colors) in [(&keys_a, &mut colors_a), (&keys_b, &mut colors_b)] {
            for (i, key) in keys.iter().enumerate() {
                let next = dict.len() as u32;
                colors[i] = *dict.entry(key.clone()).or_insert(next);
            }
        }
        let mut hist_a: HashMap<u32, u32> = HashMap::new();
        let mut hist_b: HashMap<u32, u32> = HashMap::new();
        for &c in &colors_a {
            *hist_a.entry(c).or_insert(0) += 1;
        }
        for &c in &colors_b {
            *hist_b.entry(c).or_insert(0) += 1;
        }
        if hist_a != hist_b {
            return None;
        }
        if dict.len() == num_colors {
            return Some((colors_a, colors_b));
        }
        num_colors = dict.len();

        let next_keys = |p: &FinitePoset, colors: &[u32]| -> Vec<Key> {
            let mut down_nbrs: Vec<Vec<u32>> = vec![Vec::new(); n];
            let mut up_nbrs: Vec<Vec<u32>> = vec![Vec::new(); n];
            for &(lo, hi) in p.covers() {
                down_nbrs[hi].push(colors[lo]);
                up_nbrs[lo].push(colors[hi]);
            }
            (0..n)
                .map(|i| {
                    down_nbrs[i].sort_unstable();
                    up_nbrs[i].sort_unstable();
                    (
                        colors[i],
                        std::mem::take(&mut down_nbrs[i]),
                        std::mem::take(&mut up_nbrs[i]),
                    )
                })
                .collect()
        };
        keys_a = next_keys(a, &colors_a);
        keys_b = next_keys(b, &colors_b);
    }
}

fn verify_map(a: &FinitePoset, b: &FinitePoset, map: &[usize]) -> bool {
    let n = a.size();
    (0..n).all(|i| (0..n).all(|j| a.leq(i, j) == b.leq(map[i], map[j])))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn chain_is_isomorphic_to_itself_uniquely() {
        let p = FinitePoset::chain(5);
        match are_isomorphic(&p, &p) {
            IsoOutcome::Isomorphic(map) => assert_eq!(map, vec![0, 1, 2, 3, 4]),
            other => panic!("expected isomorphism, got {other:?}"),
        }
    }

    #[test]
    fn chain_vs_antichain() {
        let c = FinitePoset::chain(3);
        let a = FinitePoset::antichain(3);
        assert_eq!(are_isomorphic(&c, &a), IsoOutcome::NonIsomorphic);
    }

    #[test]
    fn relabeled_diamond() {
        let p = FinitePoset::from_covers(4, &[(0, 1), (0, 2), (1, 3), (2, 3)]).unwrap();
        let q = FinitePoset::from_covers(4, &[(3, 2), (3, 0), (2, 1), (0, 1)]).unwrap();
        let outcome = are_isomorphic(&p, &q);
        match outcome {
            IsoOutcome::Isomorphic(map) => {
                assert_eq!(map[0], 3);
                assert_eq!(map[3], 1);
            }
            other => panic!("expected isomorphism, got {other:?}"),
        }
    }

    #[test]
    fn same_size_same_covers_but_different_shape() {
        // chain of 3 plus isolated point vs. two chains of 2
        let p = FinitePoset::from_covers(4, &[(0, 1), (1, 2)]).unwrap();
        let q = FinitePoset::from_covers(4, &[(0, 1), (2, 3)]).unwrap();
        assert_eq!(are_isomorphic(&p, &q), IsoOutcome::NonIsomorphic);
    }

    #[test]
    fn budget_exhaustion_reports_undecided() {
        // antichains have n! automorphisms; a tiny budget cannot finish
        let p = FinitePoset::antichain(12);
        assert_eq!(are_isomorphic_with_budget(&p, &p, 5), IsoOutcome::Undecided);
    }

    #[test]
    fn empty_posets_are_isomorphic() {
        let p = FinitePoset::antichain(0);
        assert!(are_isomorphic(&p, &p).is_isomorphic());
    }
}
