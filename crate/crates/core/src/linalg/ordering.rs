use std::collections::VecDeque;

/// Reverse Cuthill–McKee ordering of an undirected graph.
///
/// Returns `perm` with `perm[new] = old`. Disconnected components are ordered
/// one after another, each started from a minimum-degree vertex.
pub fn reverse_cuthill_mckee(adjacency: &[Vec<usize>]) -> Vec<usize> {
    let n = adjacency.len();
    let degree: Vec<usize> = adjacency.iter().map(|a| a.len()).collect();
    let mut visited = vec![false; n];
    let mut order = Vec::with_capacity(n);
    let mut by_degree: Vec<usize> = (0..n).collect();
    by_degree.sort_by_key(|&v| (degree[v], v));
    for &start in &by_degree {
        if visited[start] {
            continue;
        }
        let root = pseudo_peripheral(adjacency, start);
        let mut queue = VecDeque::new();
        visited[root] = true;
        queue.push_back(root);
        while let Some(v) = queue.pop_front() {
            order.push(v);
            let mut nbrs: Vec<usize> = adjacency[v].iter().copied().filter(|&w| !visited[w]).collect();
            nbrs.sort_by_key(|&w| (degree[w], w));
            nbrs.dedup();
            for w in nbrs {
                if !visited[w] {
                    visited[w] = true;
                    queue.push_back(w);
                }
            }
        }
    }
    order.reverse();
    order
}

fn levels(adjacency: &[Vec<usize>], root: usize) -> (usize, Vec<usize>) {
    let mut dist = vec![usize::MAX; adjacency.len()];
    let mut queue = VecDeque::from([root]);
    dist[root] = 0;
    let mut last_level = vec![root];
    let mut depth = 0;
    while let Some(v) = queue.pop_front() {
        for &w in &adjacency[v] {
            if dist[w] == usize::MAX {
                dist[w] = dist[v] + 1;
                if dist[w] > depth {
                    depth = dist[w];
                    last_level.clear();
                }
                last_level.push(w);
                queue.push_back(w);
            }
        }
    }
    (depth, last_level)
}

fn pseudo_peripheral(adjacency: &[Vec<usize>], start: usize) -> usize {
    let mut root = start;
    let (mut depth, mut last) = levels(adjacency, root);
    for _ in 0..8 {
        let cand = *last.iter().min_by_key(|&&v| (adjacency[v].len(), v)).unwrap();
        let (d, l) = levels(adjacency, cand);
        if d <= depth {
            break;
        }
        root = cand;
        depth = d;
        last = l;
    }
    root
}
