use std::cmp::Reverse;
use std::collections::BinaryHeap;

use super::{HexCoord, Map};

/// A* over enabled cells with unit step cost and the hex-distance heuristic.
///
/// `blocked(index)` marks cells that may not be entered; the goal cell is
/// always enterable. Returns the steps after `from`, ending at `to`; an empty
/// path when `from == to`. Among equal-cost frontier entries the smallest
/// `(q, r)` is expanded first.
pub fn astar(map: &Map, from: HexCoord, to: HexCoord, blocked: impl Fn(usize) -> bool) -> Option<Vec<HexCoord>> {
    let start = map.index(from)?;
    let goal = map.index(to)?;
    if !map.is_enabled(to) {
        return None;
    }
    if start == goal {
        return Some(Vec::new());
    }
    let n = map.cell_count();
    let mut g = vec![u32::MAX; n];
    let mut parent = vec![usize::MAX; n];
    let mut closed = vec![false; n];
    let mut open = BinaryHeap::new();
    g[start] = 0;
    open.push(Reverse((from.distance(to), from, start)));
    while let Some(Reverse((_, cell, idx))) = open.pop() {
        if closed[idx] {
            continue;
        }
        if idx == goal {
            let mut path = Vec::new();
            let mut cur = goal;
            while cur != start {
                path.push(map.coord(cur));
                cur = parent[cur];
            }
            path.reverse();
            return Some(path);
        }
        closed[idx] = true;
        for next in map.enabled_neighbors(cell) {
            let ni = map.index(next).expect("enabled cells are in bounds");
            if closed[ni] || (ni != goal && blocked(ni)) {
                continue;
            }
            let cost = g[idx] + 1;
            if cost < g[ni] {
                g[ni] = cost;
                parent[ni] = idx;
                open.push(Reverse((cost + next.distance(to), next, ni)));
            }
        }
    }
    None
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::collections::VecDeque;

    fn corridor() -> Map {
        // three enabled cells in a row, everything else disabled
        let mut text = String::from("3 3\nC red 0 1\nC green 2 1\n");
        for r in [0, 2] {
            for q in 0..3 {
                text.push_str(&format!("D {q} {r}\n"));
            }
        }
        Map::parse(&text).unwrap()
    }

    fn bfs_len(map: &Map, from: HexCoord, to: HexCoord, blocked: &[bool]) -> Option<usize> {
        let mut dist = vec![usize::MAX; map.cell_count()];
        let s = map.index(from).unwrap();
        let t = map.index(to).unwrap();
        dist[s] = 0;
        let mut q = VecDeque::from([from]);
        while let Some(c) = q.pop_front() {
            let d = dist[map.index(c).unwrap()];
            for n in map.enabled_neighbors(c) {
                let ni = map.index(n).unwrap();
                if dist[ni] == usize::MAX && (ni == t || !blocked[ni]) {
                    dist[ni] = d + 1;
                    q.push_back(n);
                }
            }
        }
        (dist[t] != usize::MAX).then_some(dist[t])
    }

    #[test]
    fn identity_path_is_empty() {
        let m = corridor();
        assert_eq!(astar(&m, HexCoord::new(0, 1), HexCoord::new(0, 1), |_| false), Some(vec![]));
    }

    #[test]
    fn corridor_path_has_two_steps() {
        let m = corridor();
        let p = astar(&m, HexCoord::new(0, 1), HexCoord::new(2, 1), |_| false).unwrap();
        assert_eq!(p, vec![HexCoord::new(1, 1), HexCoord::new(2, 1)]);
    }

    #[test]
    fn blocked_corridor_is_unreachable() {
        let m = corridor();
        let mid = m.index(HexCoord::new(1, 1)).unwrap();
        assert_eq!(astar(&m, HexCoord::new(0, 1), HexCoord::new(2, 1), |i| i == mid), None);
    }

    #[test]
    fn matches_bfs_on_default_map_with_obstacles() {
        let m = Map::default_map();
        let mut blocked = vec![false; m.cell_count()];
        for c in [HexCoord::new(7, 2), HexCoord::new(6, 5), HexCoord::new(9, 4)] {
            blocked[m.index(c).unwrap()] = true;
        }
        let cells: Vec<HexCoord> = m.enabled_cells().collect();
        for (i, &a) in cells.iter().enumerate().step_by(7) {
            for &b in cells.iter().skip(i % 5).step_by(11) {
                let got = astar(&m, a, b, |k| blocked[k]).map(|p| p.len());
                assert_eq!(got, bfs_len(&m, a, b, &blocked), "{a} -> {b}");
            }
        }
    }
}
