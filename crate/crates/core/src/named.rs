//! Fixture graphs.
//!
//! `bell`, `triangle`, `ring5` and `wheel7` are fixed by definition. `ame6`
//! and `fano7` were found by [`discover`] and are frozen in `fixtures/`;
//! [`discover`] re-derives all six so the frozen files can be checked.

use crate::error::{Error, Result};
use crate::graph::Graph;
use crate::search::{find_ame_graph, lc_orbit};

pub const NAMES: [&str; 6] = ["bell", "triangle", "ring5", "ame6", "wheel7", "fano7"];

const FIXTURES: [(&str, &str); 6] = [
    ("bell", include_str!("../fixtures/bell.graph")),
    ("triangle", include_str!("../fixtures/triangle.graph")),
    ("ring5", include_str!("../fixtures/ring5.graph")),
    ("ame6", include_str!("../fixtures/ame6.graph")),
    ("wheel7", include_str!("../fixtures/wheel7.graph")),
    ("fano7", include_str!("../fixtures/fano7.graph")),
];

/// Frozen fixture text for `name`, as stored in `fixtures/<name>.graph`.
pub fn fixture_text(name: &str) -> Result<&'static str> {
    FIXTURES
        .iter()
        .find(|(n, _)| *n == name)
        .map(|(_, t)| *t)
        .ok_or_else(|| Error::UnknownGraph(name.to_string()))
}

pub fn named_graph(name: &str) -> Result<Graph> {
    Graph::parse(fixture_text(name)?)
}

fn cycle(n: usize) -> Vec<(usize, usize)> {
    (0..n).map(|i| (i, (i + 1) % n)).collect()
}

/// Hub `0` joined to the 6-cycle `1-2-3-4-5-6-1`.
pub fn wheel7() -> Graph {
    let mut edges: Vec<(usize, usize)> = (1..7).map(|i| (0, i)).collect();
    edges.extend((1..7).map(|i| (i, i % 6 + 1)));
    Graph::from_edges(7, &edges).expect("valid wheel")
}

/// The usual drawing of the Fano plane read as a graph: corners 0, 1, 2,
/// side midpoints 3 (of 1–2), 4 (of 2–0), 5 (of 0–1), centre 6, with an edge
/// for every drawn segment between adjacent points (sides, medians, circle).
pub fn fano_drawing() -> Graph {
    let edges = [
        (0, 5), (5, 1), (1, 3), (3, 2), (2, 4), (4, 0),
        (0, 6), (6, 3), (1, 6), (6, 4), (2, 6), (6, 5),
        (3, 4), (4, 5), (5, 3),
    ];
    Graph::from_edges(7, &edges).expect("valid Fano drawing")
}

fn next_permutation(p: &mut [usize]) -> bool {
    let Some(i) = (1..p.len()).rev().find(|&i| p[i - 1] < p[i]) else {
        return false;
    };
    let j = (i..p.len()).rev().find(|&j| p[j] > p[i - 1]).expect("pivot exists");
    p.swap(i - 1, j);
    p[i..].reverse();
    true
}

/// First relabeling (in lexicographic permutation order) of the Fano drawing
/// that lies in the local-complementation orbit of [`wheel7`].
pub fn discover_fano7() -> Option<Graph> {
    let orbit = lc_orbit(&wheel7(), 1 << 16);
    let base = fano_drawing();
    let mut perm: Vec<usize> = (0..7).collect();
    loop {
        let g = base.relabeled(&perm).expect("permutation of 7 vertices");
        if orbit.graphs.contains(&g) {
            return Some(g);
        }
        if !next_permutation(&mut perm) {
            return None;
        }
    }
}

/// Re-derives a fixture from its defining property.
pub fn discover(name: &str) -> Result<Graph> {
    match name {
        "bell" => Graph::from_edges(2, &[(0, 1)]),
        "triangle" => Graph::from_edges(3, &cycle(3)),
        "ring5" => Graph::from_edges(5, &cycle(5)),
        "wheel7" => Ok(wheel7()),
        "ame6" => find_ame_graph(6)?
            .ok_or_else(|| Error::InvalidArgument("no AME graph on 6 vertices found".into())),
        "fano7" => discover_fano7()
            .ok_or_else(|| Error::InvalidArgument("no Fano relabeling in the wheel orbit".into())),
        other => Err(Error::UnknownGraph(other.to_string())),
    }
}
