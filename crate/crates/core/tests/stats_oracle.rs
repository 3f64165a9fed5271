use std::collections::BTreeMap;

use proptest::prelude::*;
use rhg_core::geometry::measure_ball_origin;
use rhg_core::stats::{
    degree_histogram, global_clustering, local_clustering, local_clustering_all, partition_stats,
    tail_counts, DegreeHistogram,
};
use rhg_core::{build_bucketed, sample_coordinates, Graph, Params, SeededStream};

fn graph(alpha: f64, c: f64, n: usize, seed: u64) -> Graph {
    let params = Params::new(alpha, c, n).unwrap();
    build_bucketed(sample_coordinates(&params, &mut SeededStream::new(seed)), params).unwrap()
}

#[test]
fn histogram_matches_recount_from_edge_list() {
    let g = graph(0.75, 0.0, 500, 31);
    let mut degree = vec![0usize; g.n()];
    for (u, v) in g.adjacency().edges() {
        degree[u] += 1;
        degree[v] += 1;
    }
    let mut recount = BTreeMap::new();
    for d in degree {
        *recount.entry(d).or_insert(0usize) += 1;
    }
    let hist = degree_histogram(&g);
    assert_eq!(hist.counts, recount);
    assert_eq!(hist.n, 500);
    let weighted: usize = hist.counts.iter().map(|(k, c)| k * c).sum();
    assert_eq!(weighted, 2 * g.edge_count());
}

#[test]
fn clustering_matches_neighbor_pair_double_loop() {
    let g = graph(0.75, 0.0, 300, 12);
    let n = g.n();
    let mut matrix = vec![vec![false; n]; n];
    for (u, v) in g.adjacency().edges() {
        matrix[u][v] = true;
        matrix[v][u] = true;
    }
    let all = local_clustering_all(&g);
    let mut total = 0.0;
    for v in 0..n {
        let nb: Vec<usize> = (0..n).filter(|&u| matrix[v][u]).collect();
        let expected = if nb.len() < 2 {
            0.0
        } else {
            let mut links = 0;
            for i in 0..nb.len() {
                for j in i + 1..nb.len() {
                    if matrix[nb[i]][nb[j]] {
                        links += 1;
                    }
                }
            }
            links as f64 / (nb.len() * (nb.len() - 1) / 2) as f64
        };
        assert!((local_clustering(&g, v) - expected).abs() < 1e-15, "vertex {v}");
        assert_eq!(all[v], local_clustering(&g, v));
        total += expected;
    }
    let global = global_clustering(&g);
    assert!((global - total / n as f64).abs() < 1e-12);
    assert!((0.0..=1.0).contains(&global));
}

#[test]
fn partition_invariants_and_extremes() {
    let g = graph(0.75, 0.0, 5000, 3);
    let hist = degree_histogram(&g);
    for beta in [0.3, 0.6, 0.8, 0.95] {
        let ps = partition_stats(&g, beta).unwrap();
        assert_eq!(ps.inner_count + ps.outer_count, g.n());
        assert_eq!(ps.restricted_degrees.values().sum::<usize>(), ps.outer_count);
    }
    let min_r = g.coords().iter().map(|p| p.r).fold(f64::INFINITY, f64::min);
    let low = 0.5 * min_r / g.params().radius();
    let ps = partition_stats(&g, low).unwrap();
    assert_eq!(ps.inner_count, 0);
    assert_eq!(ps.restricted_degrees, hist.counts);

    let max_r = g.coords().iter().map(|p| p.r).fold(0.0, f64::max);
    let high = 0.5 * (1.0 + max_r / g.params().radius());
    let ps = partition_stats(&g, high).unwrap();
    assert_eq!(ps.outer_count, 0);
    assert_eq!(ps.crossing_edges, 0);
    assert!(partition_stats(&g, 0.0).is_err());
}

#[test]
fn inner_count_within_factor_three_of_expectation() {
    let params = Params::new(0.75, 0.0, 10_000).unwrap();
    let expected = 10_000.0 * measure_ball_origin(0.8 * params.radius(), &params).unwrap();
    let counts: Vec<f64> = (0..20)
        .map(|seed| partition_stats(&graph(0.75, 0.0, 10_000, 500 + seed), 0.8).unwrap().inner_count as f64)
        .collect();
    let mean = counts.iter().sum::<f64>() / counts.len() as f64;
    assert!(mean <= 3.0 * expected && mean >= expected / 3.0, "{mean} vs {expected}");
}

proptest! {
    #[test]
    fn tail_counts_difference_is_histogram(degrees in proptest::collection::vec(0usize..40, 0..300)) {
        let hist = DegreeHistogram::from_degrees(degrees.iter().copied());
        let tail = tail_counts(&hist);
        prop_assert_eq!(tail[0], degrees.len());
        prop_assert_eq!(*tail.last().unwrap(), 0);
        for k in 0..tail.len() - 1 {
            prop_assert_eq!(tail[k] - tail[k + 1], hist.count(k));
        }
    }
}
