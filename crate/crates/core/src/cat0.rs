//! The metric presentation 2-complex for the regular-value surfaces: n
//! Garside pieces (three right Euclidean triangles sharing a long edge d)
//! plus one unit square per geometrically disjoint pair of edges from
//! distinct triangles, and the exact link-girth check. All corner angles are
//! integer multiples of pi/4, so everything is integer arithmetic.

use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum EdgeLen {
    One,
    Sqrt2,
}

/// A generator of the one-vertex presentation: a loop edge with a length.
#[derive(Clone, Debug)]
pub struct Generator {
    pub name: String,
    pub len: EdgeLen,
}

/// One oriented boundary letter of a 2-cell.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct BoundaryLetter {
    pub gen: usize,
    pub inverse: bool,
}

/// A Euclidean 2-cell: boundary word plus per-corner angles in units of
/// pi/4. Corner k sits between letters k and k+1 (cyclically).
#[derive(Clone, Debug)]
pub struct Cell {
    pub word: Vec<BoundaryLetter>,
    pub corners: Vec<u32>,
}

#[derive(Clone, Debug)]
pub struct MetricComplex {
    pub n: u32,
    pub generators: Vec<Generator>,
    pub cells: Vec<Cell>,
    pub squares: usize,
}

fn letter(gen: usize, inverse: bool) -> BoundaryLetter {
    BoundaryLetter { gen, inverse }
}

/// Edges of the graph on the 3n-th roots of unity joining pairs whose ratio
/// is a primitive cube root of unity: vertex k joins k+n and k+2n (mod 3n).
/// Triangle j consists of the edges {j, j+n}, {j+n, j+2n}, {j+2n, j}.
fn triangle_edges(n: u32) -> Vec<[(u32, u32); 3]> {
    (0..n)
        .map(|j| [(j, j + n), (j + n, j + 2 * n), (j + 2 * n, j)])
        .collect()
}

/// Chord test on the circle of 3n-th roots: two edges are disjoint iff they
/// share no endpoint and do not link.
fn edges_disjoint(a: (u32, u32), b: (u32, u32), m: u32) -> bool {
    let (a0, a1) = (a.0 % m, a.1 % m);
    let (b0, b1) = (b.0 % m, b.1 % m);
    if a0 == b0 || a0 == b1 || a1 == b0 || a1 == b1 {
        return false;
    }
    let inside = |x: u32, lo: u32, hi: u32| -> bool {
        // x strictly inside the ccw arc (lo, hi)
        (x + m - lo) % m > 0 && (x + m - lo) % m < (hi + m - lo) % m
    };
    let linked = inside(b0, a0, a1) != inside(b1, a0, a1);
    !linked
}

/// Build the complex: 3n edge generators of length 1, one sqrt(2) generator
/// per triangle, three right triangles per Garside piece, and one unit
/// square for each disjoint pair of edges from distinct triangles.
pub fn build_complex(n: u32) -> Result<MetricComplex> {
    if n < 1 {
        return Err(Error::DegenerateParameter("n must be >= 1".into()));
    }
    let tris = triangle_edges(n);
    let mut generators = Vec::new();
    let mut edge_id = vec![[0usize; 3]; n as usize];
    for (j, t) in tris.iter().enumerate() {
        for (k, e) in t.iter().enumerate() {
            edge_id[j][k] = generators.len();
            generators.push(Generator {
                name: format!("e{}_{}", e.0, e.1),
                len: EdgeLen::One,
            });
        }
    }
    let mut d_id = vec![0usize; n as usize];
    for j in 0..n as usize {
        d_id[j] = generators.len();
        generators.push(Generator { name: format!("d{j}"), len: EdgeLen::Sqrt2 });
    }

    let mut cells = Vec::new();
    // Garside piece per triangle: ab d^-1, bc d^-1, ca d^-1, right angles at
    // the corner between the two short sides
    for j in 0..n as usize {
        let [a, b, c] = edge_id[j];
        let d = d_id[j];
        for (x, y) in [(a, b), (b, c), (c, a)] {
            cells.push(Cell {
                word: vec![letter(x, false), letter(y, false), letter(d, true)],
                corners: vec![2, 1, 1],
            });
        }
    }
    // commutation squares for geometrically disjoint edges of distinct
    // triangles
    let m = 3 * n;
    let mut squares = 0usize;
    for j in 0..n as usize {
        for k in (j + 1)..n as usize {
            for (ei, &e) in tris[j].iter().enumerate() {
                for (fi, &f) in tris[k].iter().enumerate() {
                    if edges_disjoint(e, f, m) {
                        let ge = edge_id[j][ei];
                        let gf = edge_id[k][fi];
                        cells.push(Cell {
                            word: vec![
                                letter(ge, false),
                                letter(gf, false),
                                letter(ge, true),
                                letter(gf, true),
                            ],
                            corners: vec![2, 2, 2, 2],
                        });
                        squares += 1;
                    }
                }
            }
        }
    }
    // Euclidean shape check: corners sum to (sides - 2) * pi
    for cell in &cells {
        let sum: u32 = cell.corners.iter().sum();
        if sum != 4 * (cell.word.len() as u32 - 2) {
            return Err(Error::InternalAssertion("non-Euclidean cell".into()));
        }
    }
    Ok(MetricComplex { n, generators, cells, squares })
}

/// The link of the unique vertex: one vertex per edge-direction germ, one
/// weighted edge per 2-cell corner.
#[derive(Clone, Debug)]
pub struct LinkGraph {
    /// 2g vertices: germ 2g = start of generator g, 2g+1 = end of g.
    pub vertices: usize,
    /// (u, v, weight in pi/4 units)
    pub edges: Vec<(usize, usize, u32)>,
}

pub fn vertex_link(complex: &MetricComplex) -> Result<LinkGraph> {
    // all generators are loops at the single vertex by construction
    let vertices = complex.generators.len() * 2;
    let start = |g: usize| 2 * g;
    let end = |g: usize| 2 * g + 1;
    let arrive = |l: &BoundaryLetter| if l.inverse { start(l.gen) } else { end(l.gen) };
    let depart = |l: &BoundaryLetter| if l.inverse { end(l.gen) } else { start(l.gen) };
    let mut edges = Vec::new();
    for cell in &complex.cells {
        let k = cell.word.len();
        for i in 0..k {
            let x = &cell.word[i];
            let y = &cell.word[(i + 1) % k];
            edges.push((arrive(x), depart(y), cell.corners[i]));
        }
    }
    Ok(LinkGraph { vertices, edges })
}

/// Exact girth in units of pi/4: the shortest cycle through each edge via
/// integer Dijkstra with that edge removed.
pub fn girth(link: &LinkGraph) -> Result<u32> {
    if link.edges.is_empty() {
        return Err(Error::DegenerateParameter("empty link".into()));
    }
    let mut adj: Vec<Vec<(usize, u32, usize)>> = vec![Vec::new(); link.vertices];
    for (i, &(u, v, w)) in link.edges.iter().enumerate() {
        adj[u].push((v, w, i));
        adj[v].push((u, w, i));
    }
    let mut best = u32::MAX;
    for (i, &(u, v, w)) in link.edges.iter().enumerate() {
        if u == v {
            best = best.min(w);
            continue;
        }
        // shortest u -> v path avoiding edge i
        let dist = dijkstra_avoiding(&adj, u, v, i, link.vertices);
        if let Some(d) = dist {
            best = best.min(d + w);
        }
    }
    if best == u32::MAX {
        return Err(Error::DegenerateParameter("link graph is a forest".into()));
    }
    Ok(best)
}

fn dijkstra_avoiding(
    adj: &[Vec<(usize, u32, usize)>],
    from: usize,
    to: usize,
    skip: usize,
    n: usize,
) -> Option<u32> {
    use std::cmp::Reverse;
    use std::collections::BinaryHeap;
    let mut dist = vec![u32::MAX; n];
    dist[from] = 0;
    let mut heap = BinaryHeap::new();
    heap.push(Reverse((0u32, from)));
    while let Some(Reverse((d, u))) = heap.pop() {
        if d > dist[u] {
            continue;
        }
        if u == to {
            return Some(d);
        }
        for &(v, w, e) in &adj[u] {
            if e == skip {
                continue;
            }
            let nd = d + w;
            if nd < dist[v] {
                dist[v] = nd;
                heap.push(Reverse((nd, v)));
            }
        }
    }
    None
}

/// Girth of the complex for the regular-value surface with n marked values.
pub fn check(n: u32) -> Result<(MetricComplex, u32)> {
    let complex = build_complex(n)?;
    let link = vertex_link(&complex)?;
    let g = girth(&link)?;
    Ok((complex, g))
}

/// |x| values where two marked-value trefoils cross: |x| =
/// (|zeta^j - zeta^k|/2)^(2/3) over distinct pairs of n-th roots of unity.
pub fn crossing_radii(n: u32) -> Result<Vec<f64>> {
    if n < 2 {
        return Err(Error::DegenerateParameter("n must be >= 2".into()));
    }
    let mut out = Vec::new();
    for m in 1..=(n / 2) {
        let half_dist = (std::f64::consts::PI * m as f64 / n as f64).sin();
        out.push(half_dist.powf(2.0 / 3.0));
    }
    out.sort_by(|a, b| a.partial_cmp(b).unwrap());
    out.dedup_by(|a, b| (*a - *b).abs() < 1e-12);
    Ok(out)
}

/// Negative control: pair edges of distinct triangles by index instead of by
/// geometric disjointness. The girth of the resulting complex is reported by
/// the caller, not asserted.
pub fn build_complex_naive_pairing(n: u32) -> Result<MetricComplex> {
    let mut complex = build_complex(n)?;
    complex.cells.retain(|c| c.word.len() == 3);
    let mut squares = 0usize;
    let per_tri = 3usize;
    let edge_id = |j: usize, k: usize| j * per_tri + k;
    for j in 0..n as usize {
        for k in (j + 1)..n as usize {
            for e in 0..per_tri {
                let ge = edge_id(j, e);
                let gf = edge_id(k, e);
                complex.cells.push(Cell {
                    word: vec![
                        letter(ge, false),
                        letter(gf, false),
                        letter(ge, true),
                        letter(gf, true),
                    ],
                    corners: vec![2, 2, 2, 2],
                });
                squares += 1;
            }
        }
    }
    complex.squares = squares;
    Ok(complex)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn complex_counts() {
        let k = build_complex(1).unwrap();
        assert_eq!(k.generators.len(), 4);
        assert_eq!(k.cells.len(), 3);
        assert_eq!(k.squares, 0);

        let k2 = build_complex(2).unwrap();
        assert_eq!(k2.generators.len(), 8);
        assert_eq!(k2.squares, 3);

        let k3 = build_complex(3).unwrap();
        assert_eq!(k3.squares, 9);
    }

    #[test]
    fn theta_graph_link_for_n1() {
        let k = build_complex(1).unwrap();
        let link = vertex_link(&k).unwrap();
        assert_eq!(link.vertices, 8);
        assert_eq!(link.edges.len(), 9);
        // the two d-germ vertices have degree 3, everything else degree <= 2
        let d_start = 2 * 3;
        let d_end = 2 * 3 + 1;
        let deg = |v: usize| {
            link.edges.iter().filter(|&&(a, b, _)| a == v || b == v).count()
        };
        assert_eq!(deg(d_start), 3);
        assert_eq!(deg(d_end), 3);
        // three paths of length pi between the d-germs
        assert_eq!(girth(&link).unwrap(), 8);
    }

    #[test]
    fn single_square_link_is_flat_torus() {
        let complex = MetricComplex {
            n: 0,
            generators: vec![
                Generator { name: "e".into(), len: EdgeLen::One },
                Generator { name: "f".into(), len: EdgeLen::One },
            ],
            cells: vec![Cell {
                word: vec![
                    letter(0, false),
                    letter(1, false),
                    letter(0, true),
                    letter(1, true),
                ],
                corners: vec![2, 2, 2, 2],
            }],
            squares: 1,
        };
        let link = vertex_link(&complex).unwrap();
        assert_eq!(girth(&link).unwrap(), 8);
    }

    #[test]
    fn girth_is_at_least_two_pi_up_to_n6() {
        for n in 1..=6 {
            let (_, g) = check(n).unwrap();
            assert!(g >= 8, "girth {g} at n = {n}");
            if n == 1 {
                assert_eq!(g, 8);
            }
        }
    }

    #[test]
    fn every_link_vertex_has_degree_at_least_two() {
        for n in 1..=4 {
            let k = build_complex(n).unwrap();
            let link = vertex_link(&k).unwrap();
            let mut deg = vec![0usize; link.vertices];
            for &(a, b, _) in &link.edges {
                deg[a] += 1;
                deg[b] += 1;
            }
            assert!(deg.iter().all(|&d| d >= 2), "n = {n}: {deg:?}");
        }
    }

    #[test]
    fn crossing_radii_examples() {
        let r2 = crossing_radii(2).unwrap();
        assert_eq!(r2.len(), 1);
        assert!((r2[0] - 1.0).abs() < 1e-12);

        // |1 - zeta_3| = sqrt(3), so |x| = (sqrt(3)/2)^(2/3) ~ 0.9086
        let r3 = crossing_radii(3).unwrap();
        assert_eq!(r3.len(), 1);
        assert!((r3[0] - (3.0f64.sqrt() / 2.0).powf(2.0 / 3.0)).abs() < 1e-12);
        assert!((r3[0] - 0.9086).abs() < 1e-4);

        let r4 = crossing_radii(4).unwrap();
        assert_eq!(r4.len(), 2);
        assert!((r4[0] - (0.5f64.sqrt()).powf(2.0 / 3.0)).abs() < 1e-12);
        assert!((r4[1] - 1.0).abs() < 1e-12);
    }

    #[test]
    fn naive_pairing_changes_the_girth_or_not_reported() {
        // exploratory control: just make sure it builds and has a girth
        let k = build_complex_naive_pairing(3).unwrap();
        let link = vertex_link(&k).unwrap();
        let g = girth(&link).unwrap();
        let (_, g_geom) = check(3).unwrap();
        // report-style: both values computable; no assertion on the naive one
        eprintln!("naive pairing girth = {g}, geometric pairing girth = {g_geom}");
    }
}
