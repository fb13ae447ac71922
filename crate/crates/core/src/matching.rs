//! Random pairing of agents.

use crate::error::{Error, Result};
use crate::rng::RandomStream;

/// Disjoint agent pairs for one trading round, plus the agent left out when
/// the population is odd.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct Matching {
    pub pairs: Vec<(usize, usize)>,
    pub idle: Option<usize>,
}

impl Matching {
    pub fn len(&self) -> usize {
        self.pairs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.pairs.is_empty()
    }
}

/// How many pairs trade in one round.
#[derive(Debug, Clone, Copy, PartialEq, Eq, serde::Serialize, serde::Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum MatchingMode {
    /// One uniformly drawn pair per round.
    SinglePair,
    /// A uniform random perfect matching of the whole population per round.
    FullMatching,
}

/// Draw one unordered pair uniformly from the `n (n - 1) / 2` possible pairs.
/// The smaller index comes first.
pub fn sample_single_pair(stream: &mut RandomStream, n: usize) -> Result<(usize, usize)> {
    if n < 2 {
        return Err(Error::InvalidPopulation(n));
    }
    let i = stream.index(n);
    let mut j = stream.index(n - 1);
    if j >= i {
        j += 1;
    }
    Ok(if i < j { (i, j) } else { (j, i) })
}

/// Reusable buffer for drawing full matchings without reallocating.
#[derive(Debug, Clone)]
pub struct MatchingBuffer {
    order: Vec<usize>,
}

impl MatchingBuffer {
    pub fn new(n: usize) -> Self {
        Self {
            order: (0..n).collect(),
        }
    }

    /// Shuffle the population and pair consecutive entries. With odd `n`
    /// the last entry of the permutation (uniform over agents) sits out.
    pub fn draw(&mut self, stream: &mut RandomStream) -> (&[usize], Option<usize>) {
        for (k, slot) in self.order.iter_mut().enumerate() {
            *slot = k;
        }
        stream.shuffle(&mut self.order);
        let n = self.order.len();
        let paired = n - n % 2;
        let idle = (n % 2 == 1).then(|| self.order[n - 1]);
        (&self.order[..paired], idle)
    }
}

/// Uniform random perfect matching: a random permutation paired
/// consecutively. Odd populations leave one uniformly chosen agent idle.
pub fn sample_full_matching(stream: &mut RandomStream, n: usize) -> Result<Matching> {
    if n < 2 {
        return Err(Error::InvalidPopulation(n));
    }
    let mut buffer = MatchingBuffer::new(n);
    let (order, idle) = buffer.draw(stream);
    let pairs = order.chunks_exact(2).map(|c| (c[0], c[1])).collect();
    Ok(Matching { pairs, idle })
}

/// Number of flagged agents for fraction `p` of `n`, rounding half up.
pub fn flagged_count(n: usize, p: f64) -> usize {
    ((p * n as f64) + 0.5).floor().min(n as f64) as usize
}

/// Flag exactly `round(p * n)` agents, chosen uniformly without replacement.
///
/// Used both for monopolist roles and for the damped-preference class.
pub fn partition_agents(stream: &mut RandomStream, n: usize, p: f64) -> Result<Vec<bool>> {
    if !(0.0..=1.0).contains(&p) {
        return Err(Error::Config(format!("fraction must lie in [0, 1], got {p}")));
    }
    let k = flagged_count(n, p);
    let mut order: Vec<usize> = (0..n).collect();
    // Partial Fisher-Yates: the first k slots end up a uniform k-subset.
    for i in 0..k {
        let j = i + stream.index(n - i);
        order.swap(i, j);
    }
    let mut flags = vec![false; n];
    for &agent in &order[..k] {
        flags[agent] = true;
    }
    Ok(flags)
}

/// Monopolist roles, fixed for a whole run.
pub fn partition_monopolists(stream: &mut RandomStream, n: usize, p_m: f64) -> Result<Vec<bool>> {
    partition_agents(stream, n, p_m)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rng::StreamLabel;
    use std::collections::HashMap;

    fn stream(seed: u64) -> RandomStream {
        RandomStream::new(seed, StreamLabel::Matching)
    }

    #[test]
    fn two_agents_always_pair_up() {
        let mut s = stream(1);
        for _ in 0..100 {
            assert_eq!(sample_single_pair(&mut s, 2).unwrap(), (0, 1));
        }
    }

    #[test]
    fn single_pair_rejects_tiny_population() {
        let mut s = stream(1);
        assert!(matches!(sample_single_pair(&mut s, 1), Err(Error::InvalidPopulation(1))));
        assert!(matches!(sample_single_pair(&mut s, 0), Err(Error::InvalidPopulation(0))));
    }

    #[test]
    fn three_agent_pairs_are_equiprobable() {
        let mut s = stream(11);
        let draws = 300_000;
        let mut counts: HashMap<(usize, usize), usize> = HashMap::new();
        for _ in 0..draws {
            *counts.entry(sample_single_pair(&mut s, 3).unwrap()).or_default() += 1;
        }
        assert_eq!(counts.len(), 3);
        for (pair, c) in counts {
            let freq = c as f64 / draws as f64;
            assert!((freq - 1.0 / 3.0).abs() < 0.01, "{pair:?}: {freq}");
        }
    }

    #[test]
    fn large_population_pairs_are_distinct_and_in_range() {
        let mut s = stream(5);
        for _ in 0..10_000 {
            let (i, j) = sample_single_pair(&mut s, 10_000).unwrap();
            assert!(i < j && j < 10_000);
        }
    }

    #[test]
    fn full_matching_of_two() {
        let mut s = stream(2);
        let m = sample_full_matching(&mut s, 2).unwrap();
        assert_eq!(m.len(), 1);
        let (a, b) = m.pairs[0];
        assert_eq!((a.min(b), a.max(b)), (0, 1));
        assert_eq!(m.idle, None);
    }

    fn canonical(m: &Matching) -> Vec<(usize, usize)> {
        let mut v: Vec<_> = m.pairs.iter().map(|&(a, b)| (a.min(b), a.max(b))).collect();
        v.sort_unstable();
        v
    }

    #[test]
    fn four_agent_matchings_are_equiprobable() {
        let mut s = stream(21);
        let draws = 100_000;
        let mut counts: HashMap<Vec<(usize, usize)>, usize> = HashMap::new();
        for _ in 0..draws {
            let m = sample_full_matching(&mut s, 4).unwrap();
            *counts.entry(canonical(&m)).or_default() += 1;
        }
        assert_eq!(counts.len(), 3);
        for c in counts.values() {
            assert!((*c as f64 / draws as f64 - 1.0 / 3.0).abs() < 0.01);
        }
    }

    #[test]
    fn odd_population_idles_a_uniform_agent() {
        let mut s = stream(33);
        let draws = 100_000;
        let mut idle = [0usize; 5];
        for _ in 0..draws {
            let m = sample_full_matching(&mut s, 5).unwrap();
            assert_eq!(m.len(), 2);
            let mut seen: Vec<usize> = m.pairs.iter().flat_map(|&(a, b)| [a, b]).collect();
            let out = m.idle.unwrap();
            seen.push(out);
            seen.sort_unstable();
            assert_eq!(seen, vec![0, 1, 2, 3, 4]);
            idle[out] += 1;
        }
        for c in idle {
            assert!((c as f64 / draws as f64 - 0.2).abs() < 0.01);
        }
    }

    #[test]
    fn monopolist_partition_counts() {
        let mut s = RandomStream::new(4, StreamLabel::Roles);
        assert!(partition_monopolists(&mut s, 100, 0.0).unwrap().iter().all(|f| !f));
        assert!(partition_monopolists(&mut s, 100, 1.0).unwrap().iter().all(|f| *f));
        let flags = partition_monopolists(&mut s, 10_000, 0.4).unwrap();
        assert_eq!(flags.iter().filter(|f| **f).count(), 4000);
    }

    #[test]
    fn partition_rounds_half_up() {
        assert_eq!(flagged_count(5, 0.5), 3);
        assert_eq!(flagged_count(5, 0.1), 1);
        assert_eq!(flagged_count(3, 0.49), 1);
    }

    #[test]
    fn partition_rejects_out_of_range() {
        let mut s = RandomStream::new(4, StreamLabel::Roles);
        assert!(matches!(partition_monopolists(&mut s, 10, 1.5), Err(Error::Config(_))));
        assert!(matches!(partition_monopolists(&mut s, 10, -0.1), Err(Error::Config(_))));
    }

    #[test]
    fn partition_selects_uniformly() {
        let mut s = RandomStream::new(8, StreamLabel::Roles);
        let mut hits = [0usize; 10];
        let draws = 50_000;
        for _ in 0..draws {
            for (k, f) in partition_agents(&mut s, 10, 0.3).unwrap().into_iter().enumerate() {
                hits[k] += f as usize;
            }
        }
        for h in hits {
            assert!((h as f64 / draws as f64 - 0.3).abs() < 0.01);
        }
    }
}
