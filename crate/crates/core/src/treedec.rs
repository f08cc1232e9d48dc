//! Greedy min-fill tree decompositions of small pattern graphs.
//!
//! Patterns stay tiny (~10 vertices), so decomposition quality only affects
//! runtime, never correctness: the hom DP is exact for any valid
//! decomposition.

use crate::graph::Graph;

#[derive(Debug, Clone)]
pub(crate) struct TdNode {
    pub bag: Vec<usize>,
    pub children: Vec<usize>,
    /// Intersection of this bag with the parent bag (empty at the root).
    pub separator: Vec<usize>,
}

#[derive(Debug, Clone)]
pub(crate) struct TreeDecomposition {
    pub nodes: Vec<TdNode>,
    pub root: usize,
    pub width: usize,
}

/// Builds a rooted tree decomposition of `g` from a greedy min-fill
/// elimination order (ties: min degree, then lowest index).
///
/// `g` must be connected and nonempty; callers split patterns into
/// components first.
pub(crate) fn decompose(g: &Graph) -> TreeDecomposition {
    let n = g.vertex_count();
    assert!(n >= 1);

    // Working adjacency as bit rows; patterns have <= 64 vertices by far.
    assert!(n <= 64, "pattern too large for tree decomposition");
    let mut adj: Vec<u64> = vec![0; n];
    for &(u, v) in g.edges() {
        adj[u] |= 1 << v;
        adj[v] |= 1 << u;
    }
    let mut alive: u64 = if n == 64 { !0 } else { (1u64 << n) - 1 };

    let mut order = Vec::with_capacity(n);
    let mut bags: Vec<Vec<usize>> = Vec::with_capacity(n);
    while alive != 0 {
        let mut best: Option<(usize, usize, usize)> = None; // (fill, degree, vertex)
        let mut m = alive;
        while m != 0 {
            let v = m.trailing_zeros() as usize;
            m &= m - 1;
            let nbrs = adj[v] & alive;
            let deg = nbrs.count_ones() as usize;
            let mut fill = 0usize;
            let mut rest = nbrs;
            while rest != 0 {
                let a = rest.trailing_zeros() as usize;
                rest &= rest - 1;
                fill += (nbrs & !adj[a] & !(1 << a)).count_ones() as usize;
            }
            fill /= 2;
            let cand = (fill, deg, v);
            if best.map_or(true, |b| cand < b) {
                best = Some(cand);
            }
        }
        let (_, _, v) = best.unwrap();
        let nbrs = adj[v] & alive & !(1 << v);
        let mut bag: Vec<usize> = std::iter::once(v)
            .chain(BitIter(nbrs))
            .collect();
        bag.sort_unstable();
        // Make the neighborhood a clique (fill edges).
        let mut rest = nbrs;
        while rest != 0 {
            let a = rest.trailing_zeros() as usize;
            rest &= rest - 1;
            adj[a] |= nbrs & !(1 << a);
        }
        order.push(v);
        bags.push(bag);
        alive &= !(1 << v);
    }

    // Standard elimination-order tree: the parent of bag(v) is the bag of
    // the earliest-eliminated member of bag(v) \ {v}; lone bags attach to
    // the last bag (the whole pattern is connected).
    let pos: Vec<usize> = {
        let mut p = vec![0; n];
        for (i, &v) in order.iter().enumerate() {
            p[v] = i;
        }
        p
    };
    let last = bags.len() - 1;
    let mut nodes: Vec<TdNode> = bags
        .iter()
        .map(|bag| TdNode {
            bag: bag.clone(),
            children: Vec::new(),
            separator: Vec::new(),
        })
        .collect();
    for i in 0..nodes.len() {
        if i == last {
            continue;
        }
        let v = order[i];
        let parent = nodes[i]
            .bag
            .iter()
            .filter(|&&u| u != v)
            .map(|&u| pos[u])
            .min()
            .unwrap_or(last);
        nodes[parent].children.push(i);
        let sep: Vec<usize> = nodes[i]
            .bag
            .iter()
            .copied()
            .filter(|u| nodes[parent].bag.contains(u))
            .collect();
        nodes[i].separator = sep;
    }
    let width = nodes.iter().map(|nd| nd.bag.len()).max().unwrap() - 1;
    TreeDecomposition {
        nodes,
        root: last,
        width,
    }
}

struct BitIter(u64);

impl Iterator for BitIter {
    type Item = usize;
    fn next(&mut self) -> Option<usize> {
        if self.0 == 0 {
            None
        } else {
            let v = self.0.trailing_zeros() as usize;
            self.0 &= self.0 - 1;
            Some(v)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn is_valid_td(g: &Graph, td: &TreeDecomposition) {
        let n = g.vertex_count();
        // Every vertex in some bag.
        for v in 0..n {
            assert!(td.nodes.iter().any(|nd| nd.bag.contains(&v)));
        }
        // Every edge in some bag.
        for &(u, v) in g.edges() {
            assert!(
                td.nodes
                    .iter()
                    .any(|nd| nd.bag.contains(&u) && nd.bag.contains(&v)),
                "edge ({u},{v}) not covered"
            );
        }
        // Connectivity: bags containing v form a subtree. Check by walking
        // from the root and ensuring each vertex's bag set is contiguous.
        for v in 0..n {
            let mut seen_boundary = 0;
            let mut stack = vec![(td.root, false)];
            while let Some((i, parent_has)) = stack.pop() {
                let has = td.nodes[i].bag.contains(&v);
                if has && !parent_has {
                    seen_boundary += 1;
                }
                for &c in &td.nodes[i].children {
                    stack.push((c, has));
                }
            }
            assert!(seen_boundary <= 1, "vertex {v} appears in disjoint subtrees");
        }
    }

    #[test]
    fn c4_has_width_two() {
        let g = Graph::cycle(4);
        let td = decompose(&g);
        assert_eq!(td.width, 2);
        is_valid_td(&g, &td);
    }

    #[test]
    fn complete_graph_width() {
        let g = Graph::complete(5).unwrap();
        let td = decompose(&g);
        assert_eq!(td.width, 4);
        is_valid_td(&g, &td);
    }

    #[test]
    fn path_has_width_one() {
        let g = Graph::path(5);
        let td = decompose(&g);
        assert_eq!(td.width, 1);
        is_valid_td(&g, &td);
    }

    #[test]
    fn single_vertex() {
        let g = Graph::edgeless(1);
        let td = decompose(&g);
        assert_eq!(td.nodes.len(), 1);
        assert_eq!(td.width, 0);
    }

    #[test]
    fn random_patterns_are_valid() {
        // Deterministic xorshift corpus.
        let mut state = 0x243F6A8885A308D3u64;
        let mut next = move || {
            state ^= state << 13;
            state ^= state >> 7;
            state ^= state << 17;
            state
        };
        for n in 2..=9usize {
            for _ in 0..20 {
                let mut edges = Vec::new();
                for u in 0..n {
                    for v in (u + 1)..n {
                        if next() % 2 == 0 {
                            edges.push((u, v));
                        }
                    }
                }
                // Keep it connected by chaining.
                for u in 1..n {
                    if !edges.contains(&(u - 1, u)) {
                        edges.push((u - 1, u));
                    }
                }
                let g = Graph::new(n, edges).unwrap();
                is_valid_td(&g, &decompose(&g));
            }
        }
    }
}
