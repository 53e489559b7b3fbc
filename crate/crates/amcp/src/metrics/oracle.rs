//! Breadth-first MoJo oracle.
//!
//! Searches the space of all partitions of a small module set, one Move or
//! Join per edge, and reports the length of the shortest path. Shares no
//! code with the tag-matching algorithm in [`super::mojo`].

use std::collections::{HashMap, VecDeque};

use super::mojo::MojoMode;
use crate::error::{Error, Result};
use crate::partition::Partition;

/// Largest module count the oracle accepts (Bell(6) = 203 states).
pub const ORACLE_MAX_N: usize = 6;

type State = Vec<u8>;

fn canonical(labels: &[u8]) -> State {
    let mut map = [u8::MAX; 16];
    let mut next = 0;
    labels
        .iter()
        .map(|&l| {
            if map[l as usize] == u8::MAX {
                map[l as usize] = next;
                next += 1;
            }
            map[l as usize]
        })
        .collect()
}

fn successors(state: &State) -> Vec<State> {
    let k = state.iter().copied().max().map_or(0, |m| m + 1);
    let mut sizes = vec![0usize; k as usize];
    for &c in state {
        sizes[c as usize] += 1;
    }
    let mut out = Vec::new();
    // Move one element to another existing cluster or to a fresh one.
    for e in 0..state.len() {
        for target in 0..=k {
            if target == state[e] || (target == k && sizes[state[e] as usize] == 1) {
                continue;
            }
            let mut s = state.clone();
            s[e] = target;
            out.push(canonical(&s));
        }
    }
    // Join two clusters.
    for i in 0..k {
        for j in i + 1..k {
            let s: Vec<u8> = state.iter().map(|&c| if c == j { i } else { c }).collect();
            out.push(canonical(&s));
        }
    }
    out
}

fn bfs(from: &Partition, to: &Partition) -> u64 {
    let start = canonical(&from.assignment().iter().map(|&c| c as u8).collect::<Vec<_>>());
    let goal = canonical(&to.assignment().iter().map(|&c| c as u8).collect::<Vec<_>>());
    let mut dist: HashMap<State, u64> = HashMap::new();
    let mut queue = VecDeque::new();
    dist.insert(start.clone(), 0);
    queue.push_back(start);
    while let Some(s) = queue.pop_front() {
        let d = dist[&s];
        if s == goal {
            return d;
        }
        for next in successors(&s) {
            if !dist.contains_key(&next) {
                dist.insert(next.clone(), d + 1);
                queue.push_back(next);
            }
        }
    }
    unreachable!("every partition is reachable by moves")
}

/// Shortest Move/Join edit sequence, found by exhaustive search.
pub fn mojo_bruteforce(a: &Partition, b: &Partition) -> Result<u64> {
    mojo_bruteforce_with(a, b, MojoMode::Symmetric)
}

pub fn mojo_bruteforce_with(a: &Partition, b: &Partition, mode: MojoMode) -> Result<u64> {
    if a.len() != b.len() {
        return Err(Error::ModuleSetMismatch);
    }
    if a.len() > ORACLE_MAX_N {
        return Err(Error::OracleLimit(a.len()));
    }
    Ok(match mode {
        MojoMode::Forward => bfs(a, b),
        MojoMode::Backward => bfs(b, a),
        MojoMode::Symmetric => bfs(a, b).min(bfs(b, a)),
    })
}

/// Every canonical partition of `n` modules, in lexicographic order of
/// restricted-growth strings.
pub fn all_partitions(n: usize) -> Vec<Partition> {
    fn rec(prefix: &mut Vec<usize>, max: usize, n: usize, out: &mut Vec<Partition>) {
        if prefix.len() == n {
            out.push(Partition::from_labels(prefix.clone()));
            return;
        }
        let limit = if prefix.is_empty() { 0 } else { max + 1 };
        for c in 0..=limit {
            prefix.push(c);
            rec(prefix, max.max(c), n, out);
            prefix.pop();
        }
    }
    let mut out = Vec::new();
    rec(&mut Vec::with_capacity(n), 0, n, &mut out);
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn bell_numbers() {
        let sizes: Vec<usize> = (1..=6).map(|n| all_partitions(n).len()).collect();
        assert_eq!(sizes, vec![1, 2, 5, 15, 52, 203]);
    }

    #[test]
    fn small_cases() {
        let p = Partition::from_labels([0, 1]);
        assert_eq!(mojo_bruteforce(&p, &p).unwrap(), 0);
        assert_eq!(mojo_bruteforce(&p, &Partition::single_cluster(2)).unwrap(), 1);
    }

    #[test]
    fn limit() {
        let p = Partition::singletons(7);
        assert_eq!(mojo_bruteforce(&p, &p), Err(Error::OracleLimit(7)));
        assert!(Error::OracleLimit(7).to_string().starts_with("oracle limit"));
    }
}
