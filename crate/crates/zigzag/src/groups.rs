//! The groups `G_n(Q)` defined by oriented `n`-cycles, and the distinguished words of `G^d_s`.

use std::collections::BTreeSet;

use crate::quiver::{Quiver, VertexLabel};
use crate::typea::{binomial_coefficient, compositions};

/// A word in the generators `s_v`, one index per letter.
pub type Word = Vec<usize>;

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Witness {
    /// An ordered subsequence (as vertex indices) of the given oriented cycle.
    Cycle { cycle: Vec<usize>, subsequence: Vec<usize> },
    Commutation { first: usize, second: usize },
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Relation {
    pub left: Word,
    pub right: Word,
    pub witness: Witness,
}

#[derive(Clone, Debug)]
pub struct GroupPresentation {
    pub generators: Vec<VertexLabel>,
    pub relations: Vec<Relation>,
    /// `commutes[a][b]` for distinct generators not on a common cycle.
    pub commutes: Vec<Vec<bool>>,
}

fn ordered_subsequences(cycle: &[usize]) -> Vec<Vec<usize>> {
    let n = cycle.len();
    let mut out = Vec::new();
    for start in 0..n {
        let rotated: Vec<usize> = (0..n).map(|k| cycle[(start + k) % n]).collect();
        // Subsequences beginning with the rotation's first vertex.
        for mask in 0u32..(1 << (n - 1)) {
            let mut sub = vec![rotated[0]];
            for (k, &v) in rotated[1..].iter().enumerate() {
                if mask & (1 << k) != 0 {
                    sub.push(v);
                }
            }
            if sub.len() >= 2 {
                out.push(sub);
            }
        }
    }
    out
}

pub fn group_presentation(q: &Quiver, n: usize) -> GroupPresentation {
    let nv = q.num_vertices();
    let cycles = q.oriented_cycles(n);
    let mut on_common = vec![vec![false; nv]; nv];
    let mut relations = Vec::new();
    let mut seen: BTreeSet<(Word, Word)> = BTreeSet::new();
    for cycle in &cycles {
        for &a in cycle {
            for &b in cycle {
                on_common[a][b] = true;
            }
        }
        for sub in ordered_subsequences(cycle) {
            let mut left = sub.clone();
            left.push(sub[0]);
            let mut right: Word = sub[1..].to_vec();
            right.push(sub[0]);
            right.push(sub[1]);
            let key = if left <= right { (left.clone(), right.clone()) } else { (right.clone(), left.clone()) };
            if seen.insert(key) {
                relations.push(Relation { left, right, witness: Witness::Cycle { cycle: cycle.clone(), subsequence: sub } });
            }
        }
    }
    let mut commutes = vec![vec![false; nv]; nv];
    for a in 0..nv {
        for b in a + 1..nv {
            if !on_common[a][b] {
                commutes[a][b] = true;
                commutes[b][a] = true;
                relations.push(Relation { left: vec![a, b], right: vec![b, a], witness: Witness::Commutation { first: a, second: b } });
            }
        }
    }
    GroupPresentation { generators: q.vertices().to_vec(), relations, commutes }
}

impl GroupPresentation {
    /// The lexicographically least word equivalent to `w` under the commutation relations.
    pub fn commutation_normal_form(&self, w: &[usize]) -> Word {
        let mut rest: Vec<usize> = w.to_vec();
        let mut out = Vec::with_capacity(w.len());
        while !rest.is_empty() {
            let mut best: Option<usize> = None;
            for k in 0..rest.len() {
                if rest[..k].iter().all(|&p| p != rest[k] && self.commutes[p][rest[k]])
                    && best.is_none_or(|b| rest[k] < rest[b]) {
                        best = Some(k);
                    }
            }
            let k = best.expect("the first letter is always movable");
            out.push(rest.remove(k));
        }
        out
    }

    pub fn word_labels(&self, w: &[usize]) -> Vec<String> {
        w.iter().map(|&g| self.generators[g].compact()).collect()
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Side {
    Left,
    Right,
}

/// `ι^ℓ` adds `(1,0,…,0)`, `ι^r` adds `(0,…,0,1)` to every label.
pub fn embed_label(y: &[u32], side: Side) -> Vec<u32> {
    let mut z = y.to_vec();
    match side {
        Side::Left => z[0] += 1,
        Side::Right => *z.last_mut().expect("nonempty label") += 1,
    }
    z
}

/// Vertex labels of `Q^d_s` in index order.
pub fn labels(d: usize, s: usize) -> Vec<Vec<u32>> {
    compositions((s - 1) as u32, d + 1)
}

fn index_of(d: usize, s: usize, y: &[u32]) -> usize {
    labels(d, s).iter().position(|z| z == y).expect("label of Q^d_s")
}

pub fn embed(word: &[usize], side: Side, d: usize, s: usize) -> Word {
    let from = labels(d, s);
    let to = labels(d, s + 1);
    word.iter()
        .map(|&g| {
            let z = embed_label(&from[g], side);
            to.iter().position(|t| *t == z).expect("embedded label")
        })
        .collect()
}

/// Vertices ordered by `(y_d, …, y_1)`, which is compatible with the arrows `f_1, …, f_d`.
pub fn coxeter_word(d: usize, s: usize) -> Word {
    let ls = labels(d, s);
    let mut order: Vec<usize> = (0..ls.len()).collect();
    order.sort_by_key(|&g| ls[g][1..].iter().rev().copied().collect::<Vec<u32>>());
    order
}

/// `w_1 = c_1` and `w_s = ι^r(w_{s−1}) c_s`.
pub fn longest_word(d: usize, s: usize) -> Word {
    let mut w = coxeter_word(d, 1);
    for t in 2..=s {
        w = embed(&w, Side::Right, d, t - 1);
        w.extend(coxeter_word(d, t));
    }
    w
}

pub fn longest_word_length(d: usize, s: usize) -> u64 {
    binomial_coefficient((d + s) as u64, (d + 1) as u64)
}

/// A random topological order of the vertices along the arrows in directions `1..d`.
pub fn linear_extension(d: usize, s: usize, mut pick: impl FnMut(usize) -> usize) -> Word {
    let ls = labels(d, s);
    let n = ls.len();
    let mut indeg = vec![0usize; n];
    let mut succ: Vec<Vec<usize>> = vec![Vec::new(); n];
    for (v, y) in ls.iter().enumerate() {
        for i in 1..=d {
            if let Some(z) = crate::typea::step_y(y, i) {
                let w = index_of(d, s, &z);
                succ[v].push(w);
                indeg[w] += 1;
            }
        }
    }
    let mut ready: Vec<usize> = (0..n).filter(|&v| indeg[v] == 0).collect();
    let mut out = Vec::with_capacity(n);
    while !ready.is_empty() {
        let v = ready.remove(pick(ready.len()));
        out.push(v);
        for &w in &succ[v] {
            indeg[w] -= 1;
            if indeg[w] == 0 {
                ready.push(w);
            }
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::Field;
    use crate::typea::zigzag_presentation;

    fn group(d: usize, s: usize) -> GroupPresentation {
        let z = zigzag_presentation(d, s, Field::Rationals).unwrap();
        group_presentation(&z.presentation.quiver, d + 1)
    }

    fn word(g: &GroupPresentation, names: &[&str]) -> Word {
        names.iter().map(|n| g.generators.iter().position(|l| l.compact() == *n).unwrap()).collect()
    }

    #[test]
    fn braid_group_for_d_one() {
        let g = group(1, 5);
        let braids = g.relations.iter().filter(|r| matches!(r.witness, Witness::Cycle { .. })).count();
        let comms = g.relations.len() - braids;
        assert_eq!((braids, comms), (4, 6));
    }

    #[test]
    fn cycle_relations_s_two() {
        let g = group(2, 2);
        let long: Vec<&Relation> = g.relations.iter().filter(|r| r.left.len() == 4).collect();
        assert_eq!(g.relations.iter().filter(|r| r.left.len() == 3).count(), 3);
        let target = (word(&g, &["100", "010", "001", "100"]), word(&g, &["010", "001", "100", "010"]));
        assert!(long.iter().any(|r| (r.left.clone(), r.right.clone()) == target));
    }

    #[test]
    fn braid_without_arrow() {
        let g = group(3, 3);
        let target = word(&g, &["1100", "0110", "1100"]);
        assert!(g.relations.iter().any(|r| r.left == target || r.right == target));
        let a = word(&g, &["1100"])[0];
        let b = word(&g, &["0002"])[0];
        assert!(g.commutes[a][b]);
    }

    #[test]
    fn words() {
        let g = group(2, 3);
        assert_eq!(g.word_labels(&coxeter_word(2, 3)), ["200", "110", "020", "101", "011", "002"]);
        assert_eq!(
            g.word_labels(&longest_word(2, 3)),
            ["002", "101", "011", "002", "200", "110", "020", "101", "011", "002"]
        );
        let g2 = group(2, 2);
        assert_eq!(g2.word_labels(&coxeter_word(2, 2)), ["100", "010", "001"]);
        assert_eq!(longest_word(1, 1).len(), 1);
    }

    #[test]
    fn embeddings_commute() {
        for y in labels(2, 3) {
            assert_eq!(embed_label(&embed_label(&y, Side::Left), Side::Right), embed_label(&embed_label(&y, Side::Right), Side::Left));
        }
        let g = group(2, 3);
        assert_eq!(g.word_labels(&embed(&embed(&coxeter_word(2, 1), Side::Right, 2, 1), Side::Right, 2, 2)), ["002"]);
    }
}
