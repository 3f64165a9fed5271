//! Edge construction: `{u, v}` is an edge iff `distance(u, v) ≤ R`.
//!
//! [`build_naive`] tests all pairs and is the reference. [`build_bucketed`]
//! produces the identical edge set by splitting the disk into radial bands,
//! keeping each band sorted by angle, and only testing vertices inside the
//! angular window `θ_{r_u}(b)` for the band's inner radius `b`. Since
//! `θ_r(y)` is non-increasing in `y`, that window contains every possible
//! neighbor in the band. Candidates are confirmed with the same
//! [`connects`] predicate the naive builder uses.

use std::f64::consts::{PI, TAU};

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::geometry::{angle_threshold_for_radius, connects, Params, PolarPoint};

/// Largest vertex count [`build_naive`] accepts by default.
pub const DEFAULT_NAIVE_CAP: usize = 50_000;

/// Radial width of a band, in hyperbolic units.
pub const BAND_WIDTH: f64 = 1.0;

// Relative and absolute slack on the pruning window. Only widens the
// candidate set; membership is always decided by the exact predicate.
const WINDOW_REL_SLACK: f64 = 1e-9;
const WINDOW_ABS_SLACK: f64 = 1e-12;

/// Undirected simple graph in compressed sparse row form. Neighbor lists are
/// sorted ascending.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Adjacency {
    offsets: Vec<usize>,
    targets: Vec<usize>,
}

impl Adjacency {
    /// Builds from an undirected edge list. Rejects self-loops, duplicate
    /// edges and ids `≥ n`.
    pub fn from_edges(n: usize, edges: &[(usize, usize)]) -> Result<Self> {
        let mut lists = vec![Vec::new(); n];
        for &(u, v) in edges {
            if u >= n || v >= n {
                return Err(Error::InvalidInput(format!(
                    "edge ({u}, {v}) references a vertex outside 0..{n}"
                )));
            }
            if u == v {
                return Err(Error::InvalidInput(format!("self-loop at vertex {u}")));
            }
            lists[u].push(v);
            lists[v].push(u);
        }
        for (u, list) in lists.iter_mut().enumerate() {
            list.sort_unstable();
            if let Some(w) = list.windows(2).find(|w| w[0] == w[1]) {
                return Err(Error::InvalidInput(format!(
                    "duplicate edge ({}, {})",
                    u.min(w[0]),
                    u.max(w[0])
                )));
            }
        }
        Ok(Self::from_sorted_lists(lists))
    }

    /// Lists must already be sorted and symmetric.
    fn from_sorted_lists(lists: Vec<Vec<usize>>) -> Self {
        let mut offsets = Vec::with_capacity(lists.len() + 1);
        offsets.push(0);
        let total = lists.iter().map(Vec::len).sum();
        let mut targets = Vec::with_capacity(total);
        for list in lists {
            targets.extend_from_slice(&list);
            offsets.push(targets.len());
        }
        Adjacency { offsets, targets }
    }

    pub fn n(&self) -> usize {
        self.offsets.len() - 1
    }

    pub fn edge_count(&self) -> usize {
        self.targets.len() / 2
    }

    #[inline]
    pub fn neighbors(&self, v: usize) -> &[usize] {
        &self.targets[self.offsets[v]..self.offsets[v + 1]]
    }

    #[inline]
    pub fn degree(&self, v: usize) -> usize {
        self.offsets[v + 1] - self.offsets[v]
    }

    pub fn degrees(&self) -> impl Iterator<Item = usize> + '_ {
        self.offsets.windows(2).map(|w| w[1] - w[0])
    }

    pub fn has_edge(&self, u: usize, v: usize) -> bool {
        self.neighbors(u).binary_search(&v).is_ok()
    }

    /// Edges `(u, v)` with `u < v`, in lexicographic order.
    pub fn edges(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        (0..self.n()).flat_map(move |u| {
            let list = self.neighbors(u);
            let start = list.partition_point(|&v| v <= u);
            list[start..].iter().map(move |&v| (u, v))
        })
    }
}

impl AsRef<Adjacency> for Adjacency {
    fn as_ref(&self) -> &Adjacency {
        self
    }
}

/// A sampled instance: parameters, coordinates and the induced edge set.
#[derive(Debug, Clone, PartialEq)]
pub struct Graph {
    params: Params,
    coords: Vec<PolarPoint>,
    adjacency: Adjacency,
}

impl Graph {
    /// Assembles a graph from parts, checking that the sizes agree.
    pub fn from_parts(params: Params, coords: Vec<PolarPoint>, adjacency: Adjacency) -> Result<Self> {
        check_len(&coords, &params)?;
        if adjacency.n() != coords.len() {
            return Err(Error::InvalidInput(format!(
                "adjacency has {} vertices but {} coordinates were given",
                adjacency.n(),
                coords.len()
            )));
        }
        Ok(Graph {
            params,
            coords,
            adjacency,
        })
    }

    pub fn params(&self) -> &Params {
        &self.params
    }

    pub fn coords(&self) -> &[PolarPoint] {
        &self.coords
    }

    pub fn adjacency(&self) -> &Adjacency {
        &self.adjacency
    }

    pub fn n(&self) -> usize {
        self.adjacency.n()
    }

    pub fn edge_count(&self) -> usize {
        self.adjacency.edge_count()
    }

    pub fn neighbors(&self, v: usize) -> &[usize] {
        self.adjacency.neighbors(v)
    }
}

impl AsRef<Adjacency> for Graph {
    fn as_ref(&self) -> &Adjacency {
        &self.adjacency
    }
}

fn check_len(coords: &[PolarPoint], params: &Params) -> Result<()> {
    if coords.len() != params.n() {
        return Err(Error::InvalidInput(format!(
            "expected {} coordinates, got {}",
            params.n(),
            coords.len()
        )));
    }
    Ok(())
}

/// All-pairs reference construction, capped at [`DEFAULT_NAIVE_CAP`] vertices.
pub fn build_naive(coords: Vec<PolarPoint>, params: Params) -> Result<Graph> {
    build_naive_with_cap(coords, params, DEFAULT_NAIVE_CAP)
}

pub fn build_naive_with_cap(coords: Vec<PolarPoint>, params: Params, cap: usize) -> Result<Graph> {
    check_len(&coords, &params)?;
    let n = coords.len();
    if n > cap {
        return Err(Error::CapExceeded { n, cap });
    }
    let lists: Vec<Vec<usize>> = (0..n)
        .into_par_iter()
        .map(|u| {
            let p = &coords[u];
            (0..n)
                .filter(|&v| v != u && connects(p, &coords[v], &params))
                .collect()
        })
        .collect();
    Ok(Graph {
        params,
        coords,
        adjacency: Adjacency::from_sorted_lists(lists),
    })
}

/// Vertices of one radial band, sorted by `(θ, id)`.
struct Band {
    inner: f64,
    outer: f64,
    thetas: Vec<f64>,
    ids: Vec<usize>,
}

impl Band {
    fn range(&self, lo: f64, hi: f64) -> std::ops::Range<usize> {
        let start = self.thetas.partition_point(|&t| t < lo);
        let end = self.thetas.partition_point(|&t| t <= hi);
        start..end.max(start)
    }
}

/// Inner radii of the bands: `0` followed by `R − j·w` for `j = ⌊R/w⌋, …, 1`.
fn band_bounds(radius: f64, width: f64) -> Vec<f64> {
    let mut bounds = vec![0.0];
    let steps = (radius / width).floor() as usize;
    for j in (1..=steps).rev() {
        let b = radius - j as f64 * width;
        if b > 0.0 {
            bounds.push(b);
        }
    }
    bounds
}

fn make_bands(coords: &[PolarPoint], radius: f64) -> Vec<Band> {
    let bounds = band_bounds(radius, BAND_WIDTH);
    let mut members: Vec<Vec<(f64, usize)>> = vec![Vec::new(); bounds.len()];
    for (id, p) in coords.iter().enumerate() {
        let b = bounds.partition_point(|&lo| lo <= p.r).saturating_sub(1);
        members[b].push((p.theta, id));
    }
    members
        .into_iter()
        .enumerate()
        .map(|(i, mut m)| {
            m.sort_unstable_by(|a, b| a.0.total_cmp(&b.0).then(a.1.cmp(&b.1)));
            let outer = bounds.get(i + 1).copied().unwrap_or(radius);
            Band {
                inner: bounds[i],
                outer,
                thetas: m.iter().map(|e| e.0).collect(),
                ids: m.iter().map(|e| e.1).collect(),
            }
        })
        .collect()
}

/// Band-pruned construction; output is identical to [`build_naive`].
pub fn build_bucketed(coords: Vec<PolarPoint>, params: Params) -> Result<Graph> {
    check_len(&coords, &params)?;
    let radius = params.radius();
    let bands = make_bands(&coords, radius);

    let lists: Vec<Vec<usize>> = (0..coords.len())
        .into_par_iter()
        .map(|u| neighbors_of(u, &coords, &bands, &params))
        .collect();

    Ok(Graph {
        params,
        coords,
        adjacency: Adjacency::from_sorted_lists(lists),
    })
}

fn neighbors_of(u: usize, coords: &[PolarPoint], bands: &[Band], params: &Params) -> Vec<usize> {
    let p = &coords[u];
    let radius = params.radius();
    let mut out = Vec::new();
    let mut scan = |band: &Band, range: std::ops::Range<usize>| {
        for &v in &band.ids[range] {
            if v != u && connects(p, &coords[v], params) {
                out.push(v);
            }
        }
    };

    for band in bands.iter().filter(|b| !b.ids.is_empty()) {
        let window = angle_threshold_for_radius(p.r, band.inner, radius);
        debug_assert!(
            window >= angle_threshold_for_radius(p.r, band.outer, radius),
            "pruning window must bound the whole band"
        );
        let window = window * (1.0 + WINDOW_REL_SLACK) + WINDOW_ABS_SLACK;
        if window >= PI {
            scan(band, 0..band.ids.len());
            continue;
        }
        let lo = p.theta - window;
        let hi = p.theta + window;
        scan(band, band.range(lo.max(-PI), hi.min(PI)));
        if lo < -PI {
            scan(band, band.range(lo + TAU, PI));
        }
        if hi > PI {
            scan(band, band.range(-PI, hi - TAU));
        }
    }
    out.sort_unstable();
    out
}
