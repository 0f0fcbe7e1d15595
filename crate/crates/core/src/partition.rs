//! Hopcroft-style partition refinement for deterministic total transition
//! structures with state outputs.

use std::collections::{BTreeMap, HashMap, HashSet, VecDeque};

/// Coarsest partition of `0..n` that refines the partition by `output` and
/// is stable under every letter, i.e. the greatest bisimulation.
///
/// `succ[q * letters + a]` is the `a`-successor of `q`. Blocks are numbered
/// by the first state (in index order) they contain.
pub fn coarsest_partition<K>(n: usize, letters: usize, succ: &[usize], output: &[K]) -> Vec<usize>
where
    K: Eq + std::hash::Hash,
{
    assert_eq!(succ.len(), n * letters);
    assert_eq!(output.len(), n);

    let mut inv: Vec<Vec<Vec<usize>>> = vec![vec![Vec::new(); n]; letters];
    for q in 0..n {
        for a in 0..letters {
            inv[a][succ[q * letters + a]].push(q);
        }
    }

    let mut blocks: Vec<Vec<usize>> = Vec::new();
    let mut block_of = vec![0usize; n];
    let mut by_output: HashMap<&K, usize> = HashMap::new();
    for q in 0..n {
        let b = *by_output.entry(&output[q]).or_insert_with(|| {
            blocks.push(Vec::new());
            blocks.len() - 1
        });
        blocks[b].push(q);
        block_of[q] = b;
    }

    let mut work: VecDeque<(usize, usize)> = VecDeque::new();
    let mut pending: HashSet<(usize, usize)> = HashSet::new();
    for b in 0..blocks.len() {
        for a in 0..letters {
            work.push_back((b, a));
            pending.insert((b, a));
        }
    }

    while let Some((splitter, a)) = work.pop_front() {
        pending.remove(&(splitter, a));
        // every state has exactly one a-successor, so predecessors are distinct
        let mut touched: BTreeMap<usize, Vec<usize>> = BTreeMap::new();
        for &t in &blocks[splitter] {
            for &p in &inv[a][t] {
                touched.entry(block_of[p]).or_default().push(p);
            }
        }
        for (y, hit) in touched {
            if hit.len() == blocks[y].len() {
                continue;
            }
            let z = blocks.len();
            let hit_set: HashSet<usize> = hit.iter().copied().collect();
            blocks[y].retain(|q| !hit_set.contains(q));
            for &q in &hit {
                block_of[q] = z;
            }
            blocks.push(hit);
            for b in 0..letters {
                if pending.contains(&(y, b)) {
                    work.push_back((z, b));
                    pending.insert((z, b));
                } else {
                    let smaller = if blocks[z].len() < blocks[y].len() { z } else { y };
                    work.push_back((smaller, b));
                    pending.insert((smaller, b));
                }
            }
        }
    }

    let mut renumber: HashMap<usize, usize> = HashMap::new();
    block_of
        .iter()
        .map(|b| {
            let next = renumber.len();
            *renumber.entry(*b).or_insert(next)
        })
        .collect()
}
