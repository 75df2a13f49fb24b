//! Hopcroft–Karp maximum bipartite matching.

use std::collections::VecDeque;

/// Maximum matching in a bipartite graph with `left` vertices on one side
/// and `right` on the other. `adj[u]` lists the right vertices adjacent to
/// left vertex `u`.
///
/// Returns `pair[u] = Some(v)` for every matched left vertex.
pub fn maximum_matching(adj: &[Vec<usize>], right: usize) -> Vec<Option<usize>> {
    let left = adj.len();
    let mut pair_left: Vec<Option<usize>> = vec![None; left];
    let mut pair_right: Vec<Option<usize>> = vec![None; right];
    let mut layer = vec![u32::MAX; left];

    while bfs_layers(adj, &pair_left, &pair_right, &mut layer) {
        for u in 0..left {
            if pair_left[u].is_none() {
                augment(u, adj, &mut pair_left, &mut pair_right, &mut layer);
            }
        }
    }
    pair_left
}

fn bfs_layers(
    adj: &[Vec<usize>],
    pair_left: &[Option<usize>],
    pair_right: &[Option<usize>],
    layer: &mut [u32],
) -> bool {
    let mut queue = VecDeque::new();
    for (u, p) in pair_left.iter().enumerate() {
        if p.is_none() {
            layer[u] = 0;
            queue.push_back(u);
        } else {
            layer[u] = u32::MAX;
        }
    }
    let mut found = false;
    while let Some(u) = queue.pop_front() {
        for &v in &adj[u] {
            match pair_right[v] {
                None => found = true,
                Some(w) if layer[w] == u32::MAX => {
                    layer[w] = layer[u] + 1;
                    queue.push_back(w);
                }
                Some(_) => {}
            }
        }
    }
    found
}

fn augment(
    u: usize,
    adj: &[Vec<usize>],
    pair_left: &mut [Option<usize>],
    pair_right: &mut [Option<usize>],
    layer: &mut [u32],
) -> bool {
    for &v in &adj[u] {
        let next = pair_right[v];
        let ok = match next {
            None => true,
            Some(w) => {
                layer[w] == layer[u] + 1 && augment(w, adj, pair_left, pair_right, layer)
            }
        };
        if ok {
            pair_left[u] = Some(v);
            pair_right[v] = Some(u);
            return true;
        }
    }
    layer[u] = u32::MAX;
    false
}
