//! Voronoi, Delaunay and centered dual complexes of a finite point set.
//!
//! The Voronoi cell of a site `p_i` is the intersection of the half-planes
//! `{x : ⟨x, p_i − p_j⟩ ≥ 0}`; in hyperboloid coordinates each is a linear
//! half-space through the origin, so a cell is clipped exactly like a convex
//! polygon with vertices stored as vectors. Only a finite piece of a (possibly
//! infinite) site set is ever available, all of it inside a clip ball. A
//! Voronoi vertex is certified (interior) when its empty disk lies inside the
//! ball, since then no unknown site can invalidate it; an edge is interior
//! when both its ends are. Cells are additionally checked against the
//! *security radius* criterion: a cell whose farthest vertex lies at distance
//! `ρ` from its site is final once every site within `2ρ` is known, and cells
//! that fail it are flagged peripheral.
//!
//! The Delaunay complex is read off the interior Voronoi vertices (one cyclic
//! vertex polygon per vertex) and interior Voronoi edges (one geometric dual
//! per edge). An edge is *centered* when its dual's midpoint lies in the open
//! Voronoi edge. Non-centered edges, oriented away from their duals, form a
//! forest; the centered dual decomposition merges the vertex polygons of each
//! tree into a single cell.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use std::collections::{BTreeMap, BTreeSet, HashMap};

use crate::cyclic::{self, CyclicTuple};
use crate::error::{Error, Result};
use crate::hypgeo::{self, bearing, circumcenter, dist, midpoint, mink, HIsometry, HPoint};

/// Vertices of one cell closer than this are merged.
pub const MERGE_TOL: f64 = 1e-8;
/// Band around the endpoints of a Voronoi edge inside which a dual midpoint
/// counts as lying on the endpoint (and the edge as non-centered).
pub const CENTERED_DEAD_BAND: f64 = 1e-10;
/// Circumradius of the polygon each cell is clipped from, capped by the
/// clip radius.
const INITIAL_CELL_RADIUS: f64 = 10.0;
/// Sides of the polygon each cell is clipped from.
const INITIAL_CELL_SIDES: usize = 24;

/// Label of a cell edge that still comes from the initial bounding polygon.
const BOUNDARY: usize = usize::MAX;

/// A Voronoi vertex.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct VoronoiVertex {
    pub position: HPoint,
    /// Common distance `J_v` to the incident sites.
    pub radius: f64,
    /// Incident sites, sorted by index.
    pub sites: Vec<usize>,
    /// Every incident cell is final.
    pub interior: bool,
}

/// A Voronoi edge: the common boundary of two cells.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct VoronoiEdge {
    pub sites: (usize, usize),
    pub vertices: (usize, usize),
    pub interior: bool,
}

/// The Voronoi cell of one site.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct VoronoiCell {
    pub site: usize,
    /// Vertex indices in counter-clockwise order.
    pub vertices: Vec<usize>,
    /// `neighbors[k]` is the site across the edge from `vertices[k]` to
    /// `vertices[k+1]` (`None` for a clip-polygon edge).
    pub neighbors: Vec<Option<usize>>,
    /// Unit outward normals of the bounding bisector planes, one per edge
    /// (`None` for clip-polygon edges).
    pub normals: Vec<Option<[f64; 3]>>,
    pub peripheral: bool,
}

/// The Voronoi tessellation of a finite site set, clipped to a ball.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct VoronoiComplex {
    pub sites: Vec<HPoint>,
    pub cells: Vec<VoronoiCell>,
    pub vertices: Vec<VoronoiVertex>,
    pub edges: Vec<VoronoiEdge>,
    pub clip_radius: f64,
    pub basepoint: HPoint,
}

/// One cell polygon under construction: vertex vectors and, for each
/// `k`, the label of the edge from vertex `k` to vertex `k+1`.
struct Poly {
    pts: Vec<[f64; 3]>,
    labels: Vec<usize>,
}

fn clip(poly: &Poly, normal: &[f64; 3], label: usize) -> Poly {
    let n = poly.pts.len();
    let vals: Vec<f64> = poly.pts.iter().map(|p| mink(p, normal)).collect();
    let scale = poly.pts.iter().map(|p| p[0]).fold(1.0, f64::max) * normal.iter().map(|v| v.abs()).fold(0.0, f64::max);
    let eps = 1e-14 * scale;
    let inside = |v: f64| v >= -eps;
    if vals.iter().all(|&v| inside(v)) {
        return Poly { pts: poly.pts.clone(), labels: poly.labels.clone() };
    }
    let mut out = Poly { pts: Vec::with_capacity(n + 1), labels: Vec::with_capacity(n + 1) };
    for k in 0..n {
        let (p, q) = (&poly.pts[k], &poly.pts[(k + 1) % n]);
        let (a, b) = (vals[k], vals[(k + 1) % n]);
        if inside(a) {
            out.pts.push(*p);
            out.labels.push(poly.labels[k]);
            if !inside(b) && a > eps {
                let t = a / (a - b);
                out.pts.push(lerp(p, q, t));
                out.labels.push(label);
            } else if !inside(b) {
                // p lies on the clipping line: the next kept edge runs along it.
                *out.labels.last_mut().unwrap() = label;
            }
        } else if inside(b) && b > eps {
            let t = a / (a - b);
            out.pts.push(lerp(p, q, t));
            out.labels.push(poly.labels[k]);
        }
    }
    out
}

fn lerp(p: &[f64; 3], q: &[f64; 3], t: f64) -> [f64; 3] {
    let v = [p[0] + t * (q[0] - p[0]), p[1] + t * (q[1] - p[1]), p[2] + t * (q[2] - p[2])];
    HPoint::normalized(v).coords()
}

/// Result of clipping one cell.
struct RawCell {
    pts: Vec<HPoint>,
    labels: Vec<usize>,
    peripheral: bool,
}

fn build_cell(i: usize, sites: &[HPoint], clip_radius: f64, basepoint: &HPoint, merge_tol: f64) -> RawCell {
    let p = sites[i];
    let r0 = INITIAL_CELL_RADIUS.min(clip_radius.max(1.0));
    let to_site = HIsometry::translation(&p);
    let mut poly = Poly {
        pts: (0..INITIAL_CELL_SIDES)
            .map(|k| {
                let a = 2.0 * std::f64::consts::PI * k as f64 / INITIAL_CELL_SIDES as f64;
                to_site.apply(&HPoint::from_polar(r0, a)).coords()
            })
            .collect(),
        labels: vec![BOUNDARY; INITIAL_CELL_SIDES],
    };
    let mut order: Vec<(f64, usize)> =
        sites.iter().enumerate().filter(|(j, _)| *j != i).map(|(j, q)| (dist(&p, q), j)).collect();
    order.sort_by(|a, b| a.0.total_cmp(&b.0));
    let pc = p.coords();
    let far = |poly: &Poly| {
        poly.pts.iter().map(|v| (-mink(v, &pc)).max(1.0).acosh()).fold(0.0, f64::max)
    };
    let mut rho = far(&poly);
    for (d, j) in order {
        if d > 2.0 * rho + 1e-9 {
            break;
        }
        let qc = sites[j].coords();
        let normal = [pc[0] - qc[0], pc[1] - qc[1], pc[2] - qc[2]];
        poly = clip(&poly, &normal, j);
        rho = far(&poly);
    }
    // Drop degenerate edges produced by (near-)cocircular sites.
    let mut pts: Vec<HPoint> = Vec::new();
    let mut labels: Vec<usize> = Vec::new();
    for (v, l) in poly.pts.iter().zip(&poly.labels) {
        let h = HPoint::normalized(*v);
        if let Some(last) = pts.last() {
            if dist(last, &h) < merge_tol {
                *labels.last_mut().unwrap() = *l;
                continue;
            }
        }
        pts.push(h);
        labels.push(*l);
    }
    while pts.len() > 1 && dist(&pts[0], pts.last().unwrap()) < merge_tol {
        pts.pop();
        labels.pop();
    }
    let touches_clip = labels.contains(&BOUNDARY);
    let peripheral = touches_clip || dist(&p, basepoint) + 2.0 * rho > clip_radius;
    RawCell { pts, labels, peripheral }
}

/// Builds the Voronoi complex of `sites`.
///
/// The caller guarantees that `sites` contains every site of the (possibly
/// infinite) configuration within `clip_radius` of `basepoint`. A vertex is
/// interior when its empty disk lies inside that ball, which certifies it as
/// a vertex of the full configuration; cells that cannot be certified final
/// are flagged peripheral.
pub fn voronoi(sites: &[HPoint], clip_radius: f64, basepoint: &HPoint) -> Result<VoronoiComplex> {
    voronoi_with_tolerance(sites, clip_radius, basepoint, MERGE_TOL)
}

/// [`voronoi`] with an explicit distance below which cell corners are
/// identified. Configurations computed with accumulated rounding (such as
/// long products of isometries) need a looser value than [`MERGE_TOL`].
pub fn voronoi_with_tolerance(
    sites: &[HPoint],
    clip_radius: f64,
    basepoint: &HPoint,
    merge_tol: f64,
) -> Result<VoronoiComplex> {
    if sites.len() < 4 {
        return Err(Error::Degenerate(format!("need at least 4 sites, got {}", sites.len())));
    }
    check_distinct(sites)?;
    let raw: Vec<RawCell> =
        (0..sites.len()).into_par_iter().map(|i| build_cell(i, sites, clip_radius, basepoint, merge_tol)).collect();

    // Merge cell vertices across cells by position.
    struct Corner {
        pos: HPoint,
        cell: usize,
        slot: usize,
    }
    let mut corners: Vec<Corner> = Vec::new();
    for (i, c) in raw.iter().enumerate() {
        for (k, p) in c.pts.iter().enumerate() {
            corners.push(Corner { pos: *p, cell: i, slot: k });
        }
    }
    let groups = cluster(&corners.iter().map(|c| c.pos).collect::<Vec<_>>(), merge_tol);
    let mut vertex_of: HashMap<(usize, usize), usize> = HashMap::new();
    let mut vertices = Vec::with_capacity(groups.len());
    for g in &groups {
        let mut inc: BTreeSet<usize> = BTreeSet::new();
        for &ci in g {
            inc.insert(corners[ci].cell);
        }
        let sites_v: Vec<usize> = inc.into_iter().collect();
        let approx = corners[g[0]].pos;
        let position = if sites_v.len() >= 3 {
            refine_center(&approx, &sites_v, sites, merge_tol)
        } else {
            approx
        };
        let radius = sites_v.iter().map(|&s| dist(&position, &sites[s])).sum::<f64>() / sites_v.len() as f64;
        let interior = sites_v.len() >= 3 && dist(&position, basepoint) + radius <= clip_radius;
        let id = vertices.len();
        for &ci in g {
            vertex_of.insert((corners[ci].cell, corners[ci].slot), id);
        }
        vertices.push(VoronoiVertex { position, radius, sites: sites_v, interior });
    }

    let mut cells = Vec::with_capacity(sites.len());
    let mut edge_index: BTreeMap<(usize, usize), usize> = BTreeMap::new();
    let mut edges: Vec<VoronoiEdge> = Vec::new();
    for (i, c) in raw.iter().enumerate() {
        let vids: Vec<usize> = (0..c.pts.len()).map(|k| vertex_of[&(i, k)]).collect();
        let neighbors: Vec<Option<usize>> =
            c.labels.iter().map(|&l| if l == BOUNDARY { None } else { Some(l) }).collect();
        let pc = sites[i].coords();
        let normals = neighbors
            .iter()
            .map(|nb| {
                nb.map(|j| {
                    let q = sites[j].coords();
                    let n = [pc[0] - q[0], pc[1] - q[1], pc[2] - q[2]];
                    let len = mink(&n, &n).sqrt();
                    [n[0] / len, n[1] / len, n[2] / len]
                })
            })
            .collect();
        for (k, nb) in neighbors.iter().enumerate() {
            let Some(j) = *nb else { continue };
            let (a, b) = (vids[k], vids[(k + 1) % vids.len()]);
            if a == b {
                continue;
            }
            let key = (i.min(j), i.max(j));
            if let Some(&e) = edge_index.get(&key) {
                let (x, y) = edges[e].vertices;
                let same = (x == a && y == b) || (x == b && y == a);
                if !same && !raw[i].peripheral && !raw[j].peripheral {
                    return Err(Error::Malformed(format!(
                        "cells {i} and {j} disagree on their common edge"
                    )));
                }
            } else {
                edge_index.insert(key, edges.len());
                edges.push(VoronoiEdge {
                    sites: key,
                    vertices: (a, b),
                    interior: vertices[a].interior && vertices[b].interior,
                });
            }
        }
        cells.push(VoronoiCell { site: i, vertices: vids, neighbors, normals, peripheral: c.peripheral });
    }
    Ok(VoronoiComplex {
        sites: sites.to_vec(),
        cells,
        vertices,
        edges,
        clip_radius,
        basepoint: *basepoint,
    })
}

fn check_distinct(sites: &[HPoint]) -> Result<()> {
    let groups = cluster(sites, 1e-6);
    if let Some(g) = groups.iter().find(|g| g.len() > 1) {
        return Err(Error::Degenerate(format!("sites {:?} coincide (closer than 1e-6)", g)));
    }
    Ok(())
}

/// Groups points into clusters of mutual distance below `tol`
/// (single linkage), returning index lists.
pub(crate) fn cluster(pts: &[HPoint], tol: f64) -> Vec<Vec<usize>> {
    let mut order: Vec<usize> = (0..pts.len()).collect();
    let key = |i: usize| pts[i].to_poincare().0;
    order.sort_by(|&a, &b| key(a).total_cmp(&key(b)));
    let mut parent: Vec<usize> = (0..pts.len()).collect();
    fn find(p: &mut [usize], mut x: usize) -> usize {
        while p[x] != x {
            p[x] = p[p[x]];
            x = p[x];
        }
        x
    }
    // Poincaré coordinates contract hyperbolic distance, so |Δu| < tol is a
    // safe window.
    for a in 0..order.len() {
        let ia = order[a];
        for &ib in &order[a + 1..] {
            if key(ib) - key(ia) > tol {
                break;
            }
            if dist(&pts[ia], &pts[ib]) < tol {
                let (ra, rb) = (find(&mut parent, ia), find(&mut parent, ib));
                if ra != rb {
                    parent[ra.max(rb)] = ra.min(rb);
                }
            }
        }
    }
    let mut groups: BTreeMap<usize, Vec<usize>> = BTreeMap::new();
    for i in 0..pts.len() {
        let r = find(&mut parent, i);
        groups.entry(r).or_default().push(i);
    }
    groups.into_values().collect()
}

/// Recomputes a Voronoi vertex as the circumcenter of its incident sites,
/// choosing the best-conditioned triple (widest spread of bearings).
fn refine_center(approx: &HPoint, inc: &[usize], sites: &[HPoint], merge_tol: f64) -> HPoint {
    let mut by_angle: Vec<(f64, usize)> = inc.iter().map(|&s| (bearing(approx, &sites[s]), s)).collect();
    by_angle.sort_by(|a, b| a.0.total_cmp(&b.0));
    let n = by_angle.len();
    let pick = [by_angle[0].1, by_angle[n / 3].1, by_angle[(2 * n) / 3].1];
    match circumcenter(&sites[pick[0]], &sites[pick[1]], &sites[pick[2]]) {
        Ok(Some(c)) if dist(&c, approx) < 1e-6f64.max(10.0 * merge_tol) => c,
        _ => *approx,
    }
}

impl VoronoiComplex {
    /// Indices of the Voronoi edges incident to each vertex.
    pub fn vertex_edges(&self) -> Vec<Vec<usize>> {
        let mut out = vec![Vec::new(); self.vertices.len()];
        for (e, edge) in self.edges.iter().enumerate() {
            out[edge.vertices.0].push(e);
            out[edge.vertices.1].push(e);
        }
        out
    }

    /// Index of the nearest site to `x` (brute force).
    pub fn nearest_site(&self, x: &HPoint) -> usize {
        nearest(&self.sites, x)
    }

    /// Whether `x` lies in the closed cell of `site` according to the cell's
    /// bounding bisector planes.
    pub fn cell_contains(&self, site: usize, x: &HPoint) -> bool {
        let c = &self.cells[site];
        let xc = x.coords();
        c.normals.iter().flatten().all(|n| mink(&xc, n) >= -1e-12 * xc[0])
            && c.neighbors.iter().all(|n| n.is_some())
    }
}

pub(crate) fn nearest(sites: &[HPoint], x: &HPoint) -> usize {
    let mut best = (f64::INFINITY, 0);
    for (i, s) in sites.iter().enumerate() {
        let c = -mink(&s.coords(), &x.coords());
        if c < best.0 {
            best = (c, i);
        }
    }
    best.1
}

/// A Delaunay edge: the geodesic dual of an interior Voronoi edge.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct DelaunayEdge {
    pub sites: (usize, usize),
    /// Index of the dual Voronoi edge.
    pub voronoi_edge: usize,
    pub length: f64,
    pub centered: bool,
    /// For non-centered edges, the Voronoi edge oriented away from the dual:
    /// `(initial, terminal)` vertex indices.
    pub oriented: Option<(usize, usize)>,
}

/// A Delaunay face: the vertex polygon of an interior Voronoi vertex.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct DelaunayFace {
    pub voronoi_vertex: usize,
    /// Incident sites in counter-clockwise order about the vertex.
    pub sites: Vec<usize>,
    /// `sides[k]` is the distance from `sites[k]` to `sites[k+1]`.
    pub sides: Vec<f64>,
    pub tuple: CyclicTuple,
}

/// The Delaunay tessellation dual to the interior of a Voronoi complex.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct DelaunayComplex {
    pub voronoi: VoronoiComplex,
    pub edges: Vec<DelaunayEdge>,
    pub faces: Vec<DelaunayFace>,
    /// `face_of_vertex[v]` is the face of Voronoi vertex `v`, if interior.
    pub face_of_vertex: Vec<Option<usize>>,
    /// `edge_of_voronoi[e]` is the Delaunay edge dual to Voronoi edge `e`.
    pub edge_of_voronoi: Vec<Option<usize>>,
}

/// Builds the Delaunay complex and centeredness flags from a Voronoi complex.
pub fn delaunay(v: &VoronoiComplex) -> Result<DelaunayComplex> {
    let mut faces = Vec::new();
    let mut face_of_vertex = vec![None; v.vertices.len()];
    for (vi, vert) in v.vertices.iter().enumerate() {
        if !vert.interior {
            continue;
        }
        if vert.sites.len() < 3 {
            return Err(Error::Malformed(format!("vertex {vi} has fewer than 3 incident sites")));
        }
        let mut ring: Vec<(f64, usize)> =
            vert.sites.iter().map(|&s| (bearing(&vert.position, &v.sites[s]), s)).collect();
        ring.sort_by(|a, b| a.0.total_cmp(&b.0));
        let order: Vec<usize> = ring.iter().map(|r| r.1).collect();
        let n = order.len();
        let sides: Vec<f64> = (0..n).map(|k| dist(&v.sites[order[k]], &v.sites[order[(k + 1) % n]])).collect();
        let tuple = cyclic::classify(&sides)?;
        face_of_vertex[vi] = Some(faces.len());
        faces.push(DelaunayFace { voronoi_vertex: vi, sites: order, sides, tuple });
    }
    let mut edges = Vec::new();
    let mut edge_of_voronoi = vec![None; v.edges.len()];
    for (ei, e) in v.edges.iter().enumerate() {
        if !e.interior {
            continue;
        }
        let (p, q) = (v.sites[e.sites.0], v.sites[e.sites.1]);
        let (a, b) = e.vertices;
        let (pa, pb) = (v.vertices[a].position, v.vertices[b].position);
        let m = midpoint(&p, &q);
        // Position of the dual midpoint along the bisector, in arclength from a.
        let len = dist(&pa, &pb);
        let mm = HIsometry::frame(&pa, &pb).apply(&m).coords();
        let s = (mm[1] / mm[0]).atanh();
        let centered = s > CENTERED_DEAD_BAND && s < len - CENTERED_DEAD_BAND;
        let oriented = if centered {
            None
        } else if (s - 0.0).abs() <= (s - len).abs() {
            Some((a, b))
        } else {
            Some((b, a))
        };
        edge_of_voronoi[ei] = Some(edges.len());
        edges.push(DelaunayEdge { sites: e.sites, voronoi_edge: ei, length: dist(&p, &q), centered, oriented });
    }
    Ok(DelaunayComplex { voronoi: v.clone(), edges, faces, face_of_vertex, edge_of_voronoi })
}

/// A rooted tree of non-centered Voronoi edges.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct NonCenteredTree {
    /// Voronoi vertex indices.
    pub vertices: Vec<usize>,
    /// Oriented Voronoi edges `(voronoi edge, initial vertex, terminal vertex)`.
    pub edges: Vec<(usize, usize, usize)>,
    pub root: usize,
    /// Voronoi edges incident to the tree but not in it.
    pub frontier: Vec<usize>,
}

/// A 2-cell of the centered dual decomposition.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct DualCell {
    /// Voronoi vertices whose vertex polygons make up the cell.
    pub members: Vec<usize>,
    /// Delaunay edge indices on the cell boundary.
    pub boundary: Vec<usize>,
    pub tree: Option<NonCenteredTree>,
}

/// The centered dual decomposition of the interior of a Delaunay complex.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct CenteredDual {
    pub cells: Vec<DualCell>,
    /// Trees of non-centered edges (the non-trivial cells), by cell index.
    pub forest: Vec<usize>,
    /// Number of vertices whose cell could not be certified because it
    /// reaches the peripheral zone.
    pub unresolved_vertices: usize,
}

/// Groups vertex polygons into the cells of the centered dual decomposition.
pub fn centered_dual(d: &DelaunayComplex) -> Result<CenteredDual> {
    let v = &d.voronoi;
    let inc = v.vertex_edges();
    let nv = v.vertices.len();
    // Components of the non-centered subgraph (all edges with an unknown
    // status count as potentially non-centered).
    let mut parent: Vec<usize> = (0..nv).collect();
    fn find(p: &mut [usize], mut x: usize) -> usize {
        while p[x] != x {
            p[x] = p[p[x]];
            x = p[x];
        }
        x
    }
    let non_centered = |e: usize| match d.edge_of_voronoi[e] {
        Some(de) => !d.edges[de].centered,
        None => true,
    };
    for (e, edge) in v.edges.iter().enumerate() {
        if non_centered(e) {
            let (a, b) = (find(&mut parent, edge.vertices.0), find(&mut parent, edge.vertices.1));
            if a != b {
                parent[a.max(b)] = a.min(b);
            }
        }
    }
    let mut comps: BTreeMap<usize, Vec<usize>> = BTreeMap::new();
    for x in 0..nv {
        let r = find(&mut parent, x);
        comps.entry(r).or_default().push(x);
    }
    let mut cells = Vec::new();
    let mut forest = Vec::new();
    let mut unresolved = 0;
    for members in comps.into_values() {
        // A component is resolved when every member vertex is interior and
        // every incident edge is interior (so its status is known).
        let resolved = members.iter().all(|&x| {
            v.vertices[x].interior && inc[x].iter().all(|&e| d.edge_of_voronoi[e].is_some())
        });
        if !resolved {
            unresolved += members.len();
            continue;
        }
        let member_set: BTreeSet<usize> = members.iter().cloned().collect();
        let mut tree_edges = Vec::new();
        let mut frontier = Vec::new();
        let mut seen = BTreeSet::new();
        for &x in &members {
            for &e in &inc[x] {
                if !seen.insert(e) {
                    continue;
                }
                let de = d.edge_of_voronoi[e].unwrap();
                match d.edges[de].oriented {
                    Some((a, b)) if member_set.contains(&a) && member_set.contains(&b) => {
                        tree_edges.push((e, a, b));
                    }
                    _ => frontier.push(e),
                }
            }
        }
        let boundary: Vec<usize> = frontier.iter().map(|&e| d.edge_of_voronoi[e].unwrap()).collect();
        let tree = if tree_edges.is_empty() {
            None
        } else {
            if tree_edges.len() + 1 != members.len() {
                return Err(Error::Malformed("non-centered component is not a tree".into()));
            }
            let mut outgoing: BTreeMap<usize, usize> = BTreeMap::new();
            for &(_, a, b) in &tree_edges {
                if v.vertices[a].radius >= v.vertices[b].radius {
                    return Err(Error::Malformed(format!(
                        "non-centered edge {a}→{b} does not increase the vertex radius"
                    )));
                }
                if outgoing.insert(a, b).is_some() {
                    return Err(Error::Malformed(format!("vertex {a} starts two non-centered edges")));
                }
            }
            let roots: Vec<usize> = members.iter().cloned().filter(|x| !outgoing.contains_key(x)).collect();
            if roots.len() != 1 {
                return Err(Error::Malformed("non-centered tree has no unique root".into()));
            }
            let root = roots[0];
            if members.iter().any(|&x| x != root && v.vertices[x].radius >= v.vertices[root].radius) {
                return Err(Error::Malformed("tree root does not have the largest radius".into()));
            }
            if frontier.len() < tree_edges.len() + 3 {
                return Err(Error::Malformed("tree frontier smaller than |E| + 3".into()));
            }
            forest.push(cells.len());
            Some(NonCenteredTree { vertices: members.clone(), edges: tree_edges, root, frontier })
        };
        cells.push(DualCell { members, boundary, tree });
    }
    Ok(CenteredDual { cells, forest, unresolved_vertices: unresolved })
}

/// Radius-`r` defect of a centered dual cell: the sum of the defects of its
/// vertex polygons.
pub fn cell_defect(cell: &DualCell, d: &DelaunayComplex, r: f64) -> Result<f64> {
    let mut total = 0.0;
    for &m in &cell.members {
        let f = d.face_of_vertex[m].ok_or_else(|| Error::Malformed(format!("vertex {m} has no face")))?;
        let face = &d.faces[f];
        let min = face.sides.iter().cloned().fold(f64::INFINITY, f64::min);
        if r > min / 2.0 * (1.0 + 1e-12) {
            return Err(Error::RadiusOutOfRange { radius: r, max: min / 2.0 });
        }
        total += cyclic::defect(&face.tuple, r)?;
    }
    Ok(total)
}

impl DualCell {
    /// The cell's boundary as a counter-clockwise cycle of site indices.
    pub fn boundary_cycle(&self, d: &DelaunayComplex) -> Result<Vec<usize>> {
        let mut adj: BTreeMap<usize, Vec<usize>> = BTreeMap::new();
        for &e in &self.boundary {
            let (a, b) = d.edges[e].sites;
            adj.entry(a).or_default().push(b);
            adj.entry(b).or_default().push(a);
        }
        if adj.values().any(|n| n.len() != 2) {
            return Err(Error::Malformed("cell boundary is not a simple cycle".into()));
        }
        let start = *adj.keys().next().ok_or_else(|| Error::Malformed("empty cell".into()))?;
        let mut cycle = vec![start];
        let mut prev = start;
        let mut cur = adj[&start][0];
        while cur != start {
            cycle.push(cur);
            let nb = &adj[&cur];
            let next = if nb[0] == prev { nb[1] } else { nb[0] };
            prev = cur;
            cur = next;
        }
        if cycle.len() != self.boundary.len() {
            return Err(Error::Malformed("cell boundary has several components".into()));
        }
        // Orient counter-clockwise about the first member vertex, which lies
        // inside the (convex-at-each-polygon) union.
        let inner = d.voronoi.vertices[self.members[0]].position;
        let s = &d.voronoi.sites;
        let turn = hypgeo::orientation(&s[cycle[0]], &s[cycle[1]], &inner);
        if turn < 0.0 {
            cycle.reverse();
        }
        Ok(cycle)
    }
}

/// Checks the empty-circumdisk property for every face: no site lies
/// strictly inside the disk of radius `J_v` about the face's Voronoi vertex.
/// Returns the largest violation (`J_v − distance`), or a non-positive value.
pub fn empty_circumdisk_violation(d: &DelaunayComplex) -> f64 {
    let v = &d.voronoi;
    d.faces
        .par_iter()
        .map(|f| {
            let c = &v.vertices[f.voronoi_vertex];
            v.sites
                .iter()
                .map(|s| c.radius - dist(&c.position, s))
                .filter(|x| x.is_finite())
                .fold(f64::NEG_INFINITY, f64::max)
        })
        .reduce(|| f64::NEG_INFINITY, f64::max)
        .min(f64::INFINITY)
}

/// Half the minimum pairwise distance among `sites`.
pub fn half_min_distance(sites: &[HPoint]) -> f64 {
    let m = (0..sites.len())
        .into_par_iter()
        .map(|i| {
            (i + 1..sites.len()).map(|j| dist(&sites[i], &sites[j])).fold(f64::INFINITY, f64::min)
        })
        .reduce(|| f64::INFINITY, f64::min);
    m / 2.0
}

/// JSON point-set input.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct PointSet {
    pub model: String,
    pub points: Vec<[f64; 3]>,
}

impl PointSet {
    /// Parses and validates a point set.
    pub fn from_json(text: &str) -> Result<Vec<HPoint>> {
        let ps: PointSet = serde_json::from_str(text)?;
        if ps.model != "hyperboloid" {
            return Err(Error::Json(format!("unsupported model {:?}", ps.model)));
        }
        ps.points.iter().map(|c| HPoint::new(c[0], c[1], c[2])).collect()
    }

    pub fn to_json(sites: &[HPoint]) -> Result<String> {
        let ps = PointSet { model: "hyperboloid".into(), points: sites.iter().map(|p| p.coords()).collect() };
        Ok(serde_json::to_string_pretty(&ps)?)
    }
}

/// Flat JSON view of all three complexes.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ComplexReport {
    pub sites: Vec<[f64; 3]>,
    pub vertices: Vec<VertexRecord>,
    pub edges: Vec<EdgeRecord>,
    pub faces: Vec<FaceRecord>,
    pub cells: Vec<CellRecord>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct VertexRecord {
    pub position: [f64; 3],
    pub radius: f64,
    pub sites: Vec<usize>,
    pub interior: bool,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct EdgeRecord {
    pub sites: (usize, usize),
    pub voronoi_vertices: (usize, usize),
    pub interior: bool,
    pub length: Option<f64>,
    pub centered: Option<bool>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct FaceRecord {
    pub voronoi_vertex: usize,
    pub sites: Vec<usize>,
    pub sides: Vec<f64>,
    pub class: cyclic::CyclicClass,
    pub radius: f64,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct CellRecord {
    pub members: Vec<usize>,
    pub boundary_edges: Vec<(usize, usize)>,
    pub tree_edges: Vec<(usize, usize)>,
    pub root: Option<usize>,
}

impl ComplexReport {
    pub fn new(d: &DelaunayComplex, c: &CenteredDual) -> Self {
        let v = &d.voronoi;
        ComplexReport {
            sites: v.sites.iter().map(|p| p.coords()).collect(),
            vertices: v
                .vertices
                .iter()
                .map(|x| VertexRecord {
                    position: x.position.coords(),
                    radius: x.radius,
                    sites: x.sites.clone(),
                    interior: x.interior,
                })
                .collect(),
            edges: v
                .edges
                .iter()
                .enumerate()
                .map(|(i, e)| {
                    let de = d.edge_of_voronoi[i].map(|k| &d.edges[k]);
                    EdgeRecord {
                        sites: e.sites,
                        voronoi_vertices: e.vertices,
                        interior: e.interior,
                        length: de.map(|x| x.length),
                        centered: de.map(|x| x.centered),
                    }
                })
                .collect(),
            faces: d
                .faces
                .iter()
                .map(|f| FaceRecord {
                    voronoi_vertex: f.voronoi_vertex,
                    sites: f.sites.clone(),
                    sides: f.sides.clone(),
                    class: f.tuple.class,
                    radius: f.tuple.radius,
                })
                .collect(),
            cells: c
                .cells
                .iter()
                .map(|cell| CellRecord {
                    members: cell.members.clone(),
                    boundary_edges: cell.boundary.iter().map(|&e| d.edges[e].sites).collect(),
                    tree_edges: cell
                        .tree
                        .as_ref()
                        .map(|t| t.edges.iter().map(|&(_, a, b)| (a, b)).collect())
                        .unwrap_or_default(),
                    root: cell.tree.as_ref().map(|t| t.root),
                })
                .collect(),
        }
    }
}
