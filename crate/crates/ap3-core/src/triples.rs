//! Position patterns of 3-term arithmetic progressions and their valid
//! families.
//!
//! A triple `(i, j, k)` with `1 <= i < j < k <= n` is the *pattern* of the
//! progression constraint `x_i + x_k = 2 x_j` on a strictly increasing
//! integer sequence `x_1 < ... < x_n`.  A set of patterns is *valid* if one
//! sequence satisfies all of them at once.  Validity reduces to a pairwise
//! test: two distinct patterns clash exactly when one is componentwise
//! sandwiched by the other in the alternating sense checked by
//! [`is_consistent`], and a set is valid iff it is pairwise consistent.  The
//! reduction is not rederived here; instead [`realize`] gives an exact
//! feasibility oracle, and the test suites compare the pairwise criterion
//! against the oracle wholesale.

use serde::{Deserialize, Serialize};

use crate::ap_posets::PnElement;
use crate::feasibility::LinearSystem;
use crate::{Error, Result};

/// Pattern of one 3-term progression constraint inside `[1, n]`.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub struct Triple {
    n: u32,
    i: u32,
    j: u32,
    k: u32,
}

impl Triple {
    pub fn new(n: u32, i: u32, j: u32, k: u32) -> Result<Self> {
        if 1 <= i && i < j && j < k && k <= n {
            Ok(Triple { n, i, j, k })
        } else {
            Err(Error::InvalidTriple { i, j, k, n })
        }
    }

    pub fn n(&self) -> u32 {
        self.n
    }

    pub fn i(&self) -> u32 {
        self.i
    }

    pub fn j(&self) -> u32 {
        self.j
    }

    pub fn k(&self) -> u32 {
        self.k
    }

    /// All triples for a given `n` in lexicographic order.
    pub fn all(n: u32) -> Vec<Triple> {
        let mut out = Vec::new();
        for i in 1..=n.saturating_sub(2) {
            for j in i + 1..n {
                for k in j + 1..=n {
                    out.push(Triple { n, i, j, k });
                }
            }
        }
        out
    }

    /// Coordinate change `(i, j, k) -> (i, n+1-j, k)` into the index poset
    /// `P_n`; valid families correspond to antichains under it.
    pub fn propp_map(&self) -> PnElement {
        PnElement::new(self.n, self.i, self.n + 1 - self.j, self.k)
            .expect("triple image always lands in the index poset")
    }

    /// Inverse of [`Triple::propp_map`].
    pub fn from_propp(p: &PnElement) -> Triple {
        Triple::new(p.n, p.i, p.n + 1 - p.j, p.k)
            .expect("index poset point always comes from a triple")
    }
}

impl std::fmt::Display for Triple {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{},{},{}", self.i, self.j, self.k)
    }
}

/// Pairwise consistency test for two patterns over the same `n`.
///
/// Distinct patterns are inconsistent precisely when one weaves the other:
/// `i <= i'`, `j >= j'`, `k <= k'` or the mirror image.  A pattern is
/// consistent with itself.
pub fn is_consistent(a: &Triple, b: &Triple) -> Result<bool> {
    if a.n != b.n {
        return Err(Error::AmbientMismatch(a.n, b.n));
    }
    if a == b {
        return Ok(true);
    }
    let forward = a.i <= b.i && a.j >= b.j && a.k <= b.k;
    let backward = a.i >= b.i && a.j <= b.j && a.k >= b.k;
    Ok(!(forward || backward))
}

/// A finite set of patterns over a common `n`, kept sorted and deduplicated.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct TripleSystem {
    n: u32,
    triples: Vec<Triple>,
}

#[derive(Serialize, Deserialize)]
struct TripleSystemDto {
    n: u32,
    triples: Vec<(u32, u32, u32)>,
}

impl TripleSystem {
    pub fn new<I: IntoIterator<Item = Triple>>(n: u32, triples: I) -> Result<Self> {
        let mut v: Vec<Triple> = Vec::new();
        for t in triples {
            if t.n != n {
                return Err(Error::AmbientMismatch(n, t.n));
            }
            v.push(t);
        }
        v.sort_unstable();
        v.dedup();
        Ok(TripleSystem { n, triples: v })
    }

    pub fn empty(n: u32) -> Self {
        TripleSystem { n, triples: Vec::new() }
    }

    pub fn n(&self) -> u32 {
        self.n
    }

    pub fn triples(&self) -> &[Triple] {
        &self.triples
    }

    pub fn len(&self) -> usize {
        self.triples.len()
    }

    pub fn is_empty(&self) -> bool {
        self.triples.is_empty()
    }

    /// Parses `"1,2,3;1,3,4"`; the empty (or blank) string is the empty
    /// system.
    pub fn parse(s: &str, n: u32) -> Result<Self> {
        let s = s.trim();
        if s.is_empty() {
            return Ok(Self::empty(n));
        }
        let mut triples = Vec::new();
        for part in s.split(';') {
            let nums: Vec<&str> = part.trim().split(',').collect();
            if nums.len() != 3 {
                return Err(Error::Parse(format!(
                    "expected \"i,j,k\" but got {part:?}"
                )));
            }
            let parse_num = |t: &str| -> Result<u32> {
                t.trim()
                    .parse::<u32>()
                    .map_err(|e| Error::Parse(format!("bad number {t:?}: {e}")))
            };
            let (i, j, k) = (parse_num(nums[0])?, parse_num(nums[1])?, parse_num(nums[2])?);
            triples.push(Triple::new(n, i, j, k)?);
        }
        Self::new(n, triples)
    }

    pub fn to_json(&self) -> String {
        let dto = TripleSystemDto {
            n: self.n,
            triples: self.triples.iter().map(|t| (t.i, t.j, t.k)).collect(),
        };
        serde_json::to_string(&dto).expect("triple system serialization cannot fail")
    }

    pub fn from_json(s: &str) -> Result<Self> {
        let dto: TripleSystemDto =
            serde_json::from_str(s).map_err(|e| Error::Parse(e.to_string()))?;
        let triples: Result<Vec<Triple>> = dto
            .triples
            .iter()
            .map(|&(i, j, k)| Triple::new(dto.n, i, j, k))
            .collect();
        Self::new(dto.n, triples?)
    }
}

impl std::fmt::Display for TripleSystem {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let parts: Vec<String> = self.triples.iter().map(|t| t.to_string()).collect();
        write!(f, "{}", parts.join(";"))
    }
}

/// A strictly increasing integer sequence witnessing a valid system.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct Realization {
    x: Vec<i64>,
}

impl Realization {
    pub fn values(&self) -> &[i64] {
        &self.x
    }

    /// Checks strict growth and every progression constraint of `s`.
    pub fn realizes(&self, s: &TripleSystem) -> bool {
        if self.x.len() != s.n as usize {
            return false;
        }
        if !self.x.windows(2).all(|w| w[0] < w[1]) {
            return false;
        }
        s.triples.iter().all(|t| {
            let (i, j, k) = (t.i as usize - 1, t.j as usize - 1, t.k as usize - 1);
            self.x[i] + self.x[k] == 2 * self.x[j]
        })
    }
}

impl std::fmt::Display for Realization {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let parts: Vec<String> = self.x.iter().map(|v| v.to_string()).collect();
        write!(f, "{}", parts.join(" "))
    }
}

/// Exact feasibility oracle: finds an increasing integer sequence realizing
/// every pattern of `s`, or `None` if no sequence exists.
///
/// The rational relaxation (gaps `>= 1` instead of integrality) is decided by
/// Fourier-Motzkin; scaling a rational solution by the lcm of denominators
/// keeps the equalities and only widens the gaps, so integer feasibility and
/// rational feasibility coincide.  The returned witness is re-verified before
/// being handed out.
pub fn realize(s: &TripleSystem) -> Option<Realization> {
    let n = s.n as usize;
    if n == 0 {
        return Some(Realization { x: Vec::new() });
    }
    let mut sys = LinearSystem::new(n);
    // x_1 >= 1 pins the shift-invariant family to positive witnesses
    let mut first = vec![0i64; n];
    first[0] = 1;
    sys.push_geq(&first, 1);
    for t in 1..n {
        let mut gap = vec![0i64; n];
        gap[t] = 1;
        gap[t - 1] = -1;
        sys.push_geq(&gap, 1);
    }
    for t in &s.triples {
        let mut eq = vec![0i64; n];
        eq[t.i as usize - 1] += 1;
        eq[t.k as usize - 1] += 1;
        eq[t.j as usize - 1] -= 2;
        sys.push_eq(&eq, 0);
    }
    let point = sys.solve()?;

    let lcm = point
        .iter()
        .map(|r| r.denom().clone())
        .fold(num::BigInt::from(1), |acc, d| num::integer::lcm(acc, d));
    let x: Vec<i64> = point
        .iter()
        .map(|r| {
            let v = r.numer() * &lcm / r.denom();
            i64::try_from(&v).expect("witness entry exceeds i64")
        })
        .collect();
    let witness = Realization { x };
    assert!(witness.realizes(s), "oracle produced an invalid witness");
    Some(witness)
}

/// True iff some increasing sequence realizes every pattern in `s`.
pub fn is_valid(s: &TripleSystem) -> bool {
    realize(s).is_some()
}

/// True iff every pair of patterns in `s` passes [`is_consistent`].
pub fn is_pairwise_consistent(s: &TripleSystem) -> bool {
    let ts = &s.triples;
    ts.iter().enumerate().all(|(x, a)| {
        ts[x + 1..]
            .iter()
            .all(|b| is_consistent(a, b).expect("same system, same n"))
    })
}

/// Streams every pairwise-consistent set of patterns, as index sets into
/// `Triple::all(n)`, in lexicographic order starting with the empty set.
fn for_each_consistent_set<F: FnMut(&[usize])>(n: u32, mut visit: F) {
    let all = Triple::all(n);
    let m = all.len();
    let words = m.div_ceil(64).max(1);
    // adjacency masks of the pairwise-consistency graph
    let mut adj = vec![0u64; m * words];
    for x in 0..m {
        for y in x + 1..m {
            if is_consistent(&all[x], &all[y]).unwrap() {
                adj[x * words + y / 64] |= 1 << (y % 64);
                adj[y * words + x / 64] |= 1 << (x % 64);
            }
        }
    }
    let mut chosen: Vec<usize> = Vec::new();
    // candidate masks per depth, preallocated; each level holds candidates
    // compatible with everything chosen so far and larger than the last pick
    let mut cand = vec![0u64; (m + 1) * words];
    for t in 0..m {
        cand[t / 64] |= 1 << (t % 64);
    }
    fn rec<F: FnMut(&[usize])>(
        adj: &[u64],
        words: usize,
        cand: &mut [u64],
        chosen: &mut Vec<usize>,
        visit: &mut F,
    ) {
        visit(chosen);
        let (cur, rest) = cand.split_at_mut(words);
        for t in crate::poset::iter_bits(cur) {
            // candidates after picking t: still-compatible triples beyond t
            for w in 0..words {
                rest[w] = if w < t / 64 {
                    0
                } else if w == t / 64 {
                    cur[w] & adj[t * words + w] & !((1u64 << (t % 64)) | ((1u64 << (t % 64)) - 1))
                } else {
                    cur[w] & adj[t * words + w]
                };
            }
            chosen.push(t);
            rec(adj, words, rest, chosen, visit);
            chosen.pop();
        }
    }
    rec(&adj, words, &mut cand, &mut chosen, &mut visit);
}

/// Predicted number of pairwise-consistent sets, saturating at `u128::MAX`.
fn predicted_valid_count(n: u32) -> u128 {
    let e = if n >= 1 { (n - 1) * n.saturating_sub(2) / 2 } else { 0 };
    if e >= 128 {
        u128::MAX
    } else {
        1u128 << e
    }
}

/// Enumerates every valid system for `n` in lexicographic order.  Refuses to
/// start if the predicted count `2^C(n-1,2)` exceeds `budget`.
pub fn enumerate_valid(n: u32, budget: Option<u128>) -> Result<Vec<TripleSystem>> {
    if let Some(b) = budget {
        let predicted = predicted_valid_count(n);
        if predicted > b {
            return Err(Error::Budget {
                what: format!("valid-family enumeration for n={n}"),
                predicted,
                budget: b,
            });
        }
    }
    let all = Triple::all(n);
    let mut out = Vec::new();
    for_each_consistent_set(n, |idx| {
        let triples: Vec<Triple> = idx.iter().map(|&t| all[t]).collect();
        out.push(TripleSystem { n, triples });
    });
    Ok(out)
}

/// Counts valid systems without materializing them.
pub fn count_valid(n: u32, budget: Option<u128>) -> Result<u128> {
    if let Some(b) = budget {
        let predicted = predicted_valid_count(n);
        if predicted > b {
            return Err(Error::Budget {
                what: format!("valid-family count for n={n}"),
                predicted,
                budget: b,
            });
        }
    }
    let mut count = 0u128;
    for_each_consistent_set(n, |_| count += 1);
    Ok(count)
}

/// `(sigma, g)`: the largest size of a valid system for `n`, and how many
/// valid systems attain it.
pub fn max_valid_stats(n: u32, budget: Option<u128>) -> Result<(usize, u128)> {
    if let Some(b) = budget {
        let predicted = predicted_valid_count(n);
        if predicted > b {
            return Err(Error::Budget {
                what: format!("valid-family statistics for n={n}"),
                predicted,
                budget: b,
            });
        }
    }
    let mut best = 0usize;
    let mut count = 0u128;
    for_each_consistent_set(n, |idx| {
        use std::cmp::Ordering;
        match idx.len().cmp(&best) {
            Ordering::Greater => {
                best = idx.len();
                count = 1;
            }
            Ordering::Equal => count += 1,
            Ordering::Less => {}
        }
    });
    Ok((best, count))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn t(n: u32, i: u32, j: u32, k: u32) -> Triple {
        Triple::new(n, i, j, k).unwrap()
    }

    #[test]
    fn constructor_validates_bounds() {
        assert!(Triple::new(4, 1, 2, 3).is_ok());
        assert!(matches!(
            Triple::new(4, 2, 2, 3),
            Err(Error::InvalidTriple { .. })
        ));
        assert!(Triple::new(4, 1, 2, 5).is_err());
        assert!(Triple::new(2, 1, 2, 3).is_err());
    }

    #[test]
    fn all_triples_count_is_n_choose_3() {
        assert_eq!(Triple::all(3).len(), 1);
        assert_eq!(Triple::all(4).len(), 4);
        assert_eq!(Triple::all(8).len(), 56);
        assert!(Triple::all(2).is_empty());
        // lexicographic order
        let all4: Vec<String> = Triple::all(4).iter().map(|t| t.to_string()).collect();
        assert_eq!(all4, vec!["1,2,3", "1,2,4", "1,3,4", "2,3,4"]);
    }

    #[test]
    fn consistency_examples() {
        // (1,2,3) and (1,3,4) coexist, e.g. in 1,2,3,5
        assert!(is_consistent(&t(4, 1, 2, 3), &t(4, 1, 3, 4)).unwrap());
        // (1,3,4) is sandwiched by (2,3,4): sharing j,k with i on one side
        assert!(!is_consistent(&t(4, 1, 3, 4), &t(4, 2, 3, 4)).unwrap());
        // (1,2,5) vs (1,4,5): same endpoints, different midpoint
        assert!(!is_consistent(&t(5, 1, 2, 5), &t(5, 1, 4, 5)).unwrap());
        // (1,2,3) vs (2,3,4) chain into a 4-term progression, so they coexist
        assert!(is_consistent(&t(5, 1, 2, 3), &t(5, 2, 3, 4)).unwrap());
        // self-consistency by convention
        let a = t(4, 1, 2, 3);
        assert!(is_consistent(&a, &a).unwrap());
        // mismatched ambient size is an error, not a verdict
        assert!(matches!(
            is_consistent(&t(4, 1, 2, 3), &t(5, 1, 2, 3)),
            Err(Error::AmbientMismatch(4, 5))
        ));
    }

    #[test]
    fn consistency_is_symmetric_for_all_pairs_n6() {
        let all = Triple::all(6);
        for a in &all {
            for b in &all {
                assert_eq!(
                    is_consistent(a, b).unwrap(),
                    is_consistent(b, a).unwrap()
                );
            }
        }
    }

    #[test]
    fn realize_feasible_pair() {
        let s = TripleSystem::parse("1,2,3;1,3,4", 4).unwrap();
        let w = realize(&s).expect("pair is realizable");
        assert!(w.realizes(&s));
    }

    #[test]
    fn realize_rejects_weaving_pair() {
        let s = TripleSystem::parse("1,3,4;2,3,4", 4).unwrap();
        assert!(realize(&s).is_none());
        assert!(!is_valid(&s));
    }

    #[test]
    fn empty_system_is_valid() {
        let s = TripleSystem::empty(4);
        let w = realize(&s).unwrap();
        assert!(w.realizes(&s));
        assert_eq!(w.values().len(), 4);
    }

    #[test]
    fn validity_matches_pairwise_consistency_up_to_n5() {
        // every subset of patterns, both verdicts, no exceptions
        for n in 2..=5u32 {
            let all = Triple::all(n);
            for mask in 0u32..1 << all.len() {
                let sel: Vec<Triple> = all
                    .iter()
                    .enumerate()
                    .filter(|(x, _)| mask >> x & 1 == 1)
                    .map(|(_, t)| *t)
                    .collect();
                let s = TripleSystem::new(n, sel).unwrap();
                assert_eq!(
                    is_valid(&s),
                    is_pairwise_consistent(&s),
                    "disagreement at n={n}, mask={mask:b}"
                );
            }
        }
    }

    #[test]
    fn enumerate_valid_n4_exact() {
        let fams = enumerate_valid(4, None).unwrap();
        let rendered: Vec<String> = fams.iter().map(|s| s.to_string()).collect();
        assert_eq!(
            rendered,
            vec![
                "",
                "1,2,3",
                "1,2,3;1,3,4",
                "1,2,3;2,3,4",
                "1,2,4",
                "1,2,4;2,3,4",
                "1,3,4",
                "2,3,4",
            ]
        );
        // cross-check against the oracle: enumerated sets are exactly the
        // realizable ones
        for s in &fams {
            assert!(is_valid(s));
        }
        assert!(!is_valid(&TripleSystem::parse("1,2,3;1,2,4", 4).unwrap()));
    }

    #[test]
    fn enumerate_valid_counts() {
        assert_eq!(enumerate_valid(2, None).unwrap().len(), 1);
        assert_eq!(enumerate_valid(3, None).unwrap().len(), 2);
        assert_eq!(enumerate_valid(5, None).unwrap().len(), 64);
        assert_eq!(count_valid(6, None).unwrap(), 1 << 10);
    }

    #[test]
    fn budget_refusal() {
        assert!(matches!(
            enumerate_valid(8, Some(1000)),
            Err(Error::Budget { .. })
        ));
        assert!(count_valid(8, Some(1 << 21)).is_ok());
    }

    #[test]
    fn max_valid_stats_small() {
        assert_eq!(max_valid_stats(2, None).unwrap(), (0, 1));
        assert_eq!(max_valid_stats(4, None).unwrap(), (2, 3));
        assert_eq!(max_valid_stats(6, None).unwrap(), (6, 28));
    }

    #[test]
    fn propp_round_trip_preserves_everything() {
        for n in 2..=8 {
            for t in Triple::all(n) {
                let p = t.propp_map();
                assert_eq!(Triple::from_propp(&p), t);
            }
        }
    }

    #[test]
    fn propp_map_example() {
        let p = t(4, 1, 2, 4).propp_map();
        assert_eq!((p.i, p.j, p.k), (1, 3, 4));
    }

    #[test]
    fn parse_display_round_trip() {
        let s = TripleSystem::parse("1,3,4;1,2,3", 4).unwrap();
        assert_eq!(s.to_string(), "1,2,3;1,3,4"); // sorted
        let back = TripleSystem::parse(&s.to_string(), 4).unwrap();
        assert_eq!(back, s);
        assert_eq!(TripleSystem::parse("", 5).unwrap().len(), 0);
        assert!(TripleSystem::parse("1,2", 4).is_err());
        assert!(TripleSystem::parse("1,2,9", 4).is_err());
    }

    #[test]
    fn json_round_trip() {
        let s = TripleSystem::parse("1,2,3;1,3,4", 4).unwrap();
        let j = s.to_json();
        assert_eq!(j, r#"{"n":4,"triples":[[1,2,3],[1,3,4]]}"#);
        assert_eq!(TripleSystem::from_json(&j).unwrap(), s);
        assert!(TripleSystem::from_json(r#"{"n":4,"triples":[[1,1,2]]}"#).is_err());
    }

    #[test]
    fn subsets_of_valid_systems_are_valid() {
        // monotonicity: validity is closed under taking subsets
        let fams = enumerate_valid(5, None).unwrap();
        for s in &fams {
            for drop in 0..s.len() {
                let mut triples = s.triples().to_vec();
                triples.remove(drop);
                let sub = TripleSystem::new(5, triples).unwrap();
                assert!(is_pairwise_consistent(&sub));
            }
        }
    }
}
