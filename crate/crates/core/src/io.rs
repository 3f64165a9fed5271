//! Plain-text file formats.
//!
//! Edge list: one `u v` pair per line with `u < v`, 0-indexed decimal ids,
//! LF endings, sorted lexicographically.
//!
//! Coordinates: CSV with header `vertex_id,r,theta`; floats are written with
//! 17 significant digits so they parse back to the same bits.

use std::io::{BufRead, Write};

use crate::error::{Error, Result};
use crate::generator::Adjacency;
use crate::geometry::PolarPoint;

pub const COORDINATE_HEADER: &str = "vertex_id,r,theta";

pub fn write_edge_list<W: Write>(mut out: W, adjacency: &Adjacency) -> Result<()> {
    for (u, v) in adjacency.edges() {
        writeln!(out, "{u} {v}")?;
    }
    out.flush()?;
    Ok(())
}

/// Parses an edge list. Blank lines are skipped; anything else must be two
/// non-negative integers. Returns the edges in file order.
pub fn read_edge_list<R: BufRead>(input: R) -> Result<Vec<(usize, usize)>> {
    let mut edges = Vec::new();
    for (i, line) in input.lines().enumerate() {
        let line = line?;
        let trimmed = line.trim();
        if trimmed.is_empty() {
            continue;
        }
        let fields: Vec<&str> = trimmed.split_whitespace().collect();
        let parse = |s: &str| {
            s.parse::<usize>().map_err(|_| Error::Parse {
                line: i + 1,
                message: format!("expected a vertex id, found {s:?}"),
            })
        };
        match fields.as_slice() {
            [u, v] => edges.push((parse(u)?, parse(v)?)),
            _ => {
                return Err(Error::Parse {
                    line: i + 1,
                    message: format!("expected two vertex ids, found {trimmed:?}"),
                })
            }
        }
    }
    Ok(edges)
}

pub fn write_coordinates<W: Write>(mut out: W, coords: &[PolarPoint]) -> Result<()> {
    writeln!(out, "{COORDINATE_HEADER}")?;
    for (i, p) in coords.iter().enumerate() {
        writeln!(out, "{i},{:.16e},{:.16e}", p.r, p.theta)?;
    }
    out.flush()?;
    Ok(())
}

/// Parses a coordinate CSV. Vertex ids must run `0, 1, 2, …` in order.
pub fn read_coordinates<R: BufRead>(input: R) -> Result<Vec<PolarPoint>> {
    let mut coords = Vec::new();
    for (i, line) in input.lines().enumerate() {
        let line = line?;
        let lineno = i + 1;
        let trimmed = line.trim();
        if i == 0 && trimmed == COORDINATE_HEADER {
            continue;
        }
        if trimmed.is_empty() {
            continue;
        }
        let err = |message: String| Error::Parse {
            line: lineno,
            message,
        };
        let fields: Vec<&str> = trimmed.split(',').collect();
        let [id, r, theta] = fields.as_slice() else {
            return Err(err(format!("expected vertex_id,r,theta, found {trimmed:?}")));
        };
        let id: usize = id
            .trim()
            .parse()
            .map_err(|_| err(format!("bad vertex id {id:?}")))?;
        if id != coords.len() {
            return Err(err(format!("expected vertex id {}, found {id}", coords.len())));
        }
        let r: f64 = r.trim().parse().map_err(|_| err(format!("bad radius {r:?}")))?;
        let theta: f64 = theta
            .trim()
            .parse()
            .map_err(|_| err(format!("bad angle {theta:?}")))?;
        coords.push(PolarPoint::new(r, theta).map_err(|e| err(e.to_string()))?);
    }
    Ok(coords)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn edge_list_format() {
        let adj = Adjacency::from_edges(4, &[(3, 1), (0, 2), (1, 0)]).unwrap();
        let mut buf = Vec::new();
        write_edge_list(&mut buf, &adj).unwrap();
        assert_eq!(String::from_utf8(buf.clone()).unwrap(), "0 1\n0 2\n1 3\n");
        let edges = read_edge_list(buf.as_slice()).unwrap();
        assert_eq!(edges, vec![(0, 1), (0, 2), (1, 3)]);
    }

    #[test]
    fn malformed_edge_line_names_line() {
        let err = read_edge_list("0 1\n\na b c\n".as_bytes()).unwrap_err();
        let msg = err.to_string();
        assert!(msg.starts_with("line 3:"), "{msg}");
        let err = read_edge_list("0 x\n".as_bytes()).unwrap_err();
        assert!(matches!(err, Error::Parse { line: 1, .. }));
    }

    #[test]
    fn coordinate_errors() {
        let bad = "vertex_id,r,theta\n0,1.0,0.5\n2,1.0,0.5\n";
        assert!(matches!(
            read_coordinates(bad.as_bytes()),
            Err(Error::Parse { line: 3, .. })
        ));
        assert!(read_coordinates("0,-1.0,0.0\n".as_bytes()).is_err());
        assert!(read_coordinates("0,1.0\n".as_bytes()).is_err());
    }

    proptest! {
        #[test]
        fn coordinates_round_trip_bit_exact(
            pts in proptest::collection::vec((0.0f64..40.0, -3.14159f64..3.14159), 0..50)
        ) {
            let coords: Vec<PolarPoint> =
                pts.iter().map(|&(r, t)| PolarPoint::new(r, t).unwrap()).collect();
            let mut buf = Vec::new();
            write_coordinates(&mut buf, &coords).unwrap();
            let back = read_coordinates(buf.as_slice()).unwrap();
            prop_assert_eq!(back.len(), coords.len());
            for (a, b) in coords.iter().zip(&back) {
                prop_assert_eq!(a.r.to_bits(), b.r.to_bits());
                prop_assert_eq!(a.theta.to_bits(), b.theta.to_bits());
            }
        }
    }
}
