//! Octagonal fundamental domains glued from six triangles, their side
//! pairings, and the lift of the vertex orbit to the plane.

use serde::{Deserialize, Serialize};
use std::collections::{HashMap, VecDeque};
use std::f64::consts::PI;

use super::constants::{constants, solve_d1_of_t};
use crate::cyclic::{self, b0};
use crate::error::{Error, Result};
use crate::hypgeo::{
    circumcenter, dist, orientation, segment_pairing_isometry, triangle_angle, GeodesicSegment, HIsometry,
    HPoint,
};
use crate::tessellation::{self, CenteredDual, DelaunayComplex};

/// Number of triangle sides in a six-triangle octagon.
pub const SIDES: usize = 18;
/// Maximum generator word length explored while lifting.
pub const MAX_WORD: usize = 12;
/// Maximum number of lifted sites.
pub const MAX_POINTS: usize = 100_000;
/// Distance below which two lifted sites (or tile centers) are identified.
///
/// Lifted points are images under words of up to [`MAX_WORD`] generators,
/// and the rounding in those products grows roughly like `e^{2D}` with the
/// distance `D` from the octagon (about `1e-6` at `D = 7`). Distinct points
/// of one orbit are at least twice the injectivity radius apart, so a loose
/// value is safe.
pub const LIFT_MERGE_TOL: f64 = 1e-4;
/// Corner merge tolerance used when tessellating a lift, for the same reason.
pub const LIFT_VERTEX_MERGE_TOL: f64 = 1e-6;
/// Margin added to the lift radius beyond the farthest certified vertex disk.
const LIFT_MARGIN: f64 = 0.3;

/// The side following `i` counter-clockwise in its triangle.
pub fn next_in_triangle(i: usize) -> usize {
    3 * (i / 3) + (i % 3 + 1) % 3
}

/// The side preceding `i` counter-clockwise in its triangle.
pub fn prev_in_triangle(i: usize) -> usize {
    3 * (i / 3) + (i % 3 + 2) % 3
}

/// A fixed-point-free involution of the 18 triangle sides.
///
/// Side `γ_i` runs from corner `x_{i−1}` to corner `x_i` (indices within the
/// triangle); pairing `i` with `ι(i)` identifies `x_{i−1}` with `x_{ι(i)}`
/// and `x_i` with `x_{ι(i)−1}`, reversing the direction so the glued surface
/// is orientable.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct EdgePairing {
    pub involution: Vec<usize>,
}

impl EdgePairing {
    pub fn new(involution: Vec<usize>) -> Result<Self> {
        if involution.len() != SIDES {
            return Err(Error::Malformed(format!("pairing has {} entries, expected {SIDES}", involution.len())));
        }
        for (i, &k) in involution.iter().enumerate() {
            if k >= SIDES || k == i || involution[k] != i {
                return Err(Error::Malformed(format!("side {i} is not properly paired")));
            }
        }
        Ok(EdgePairing { involution })
    }

    /// Builds the involution from a list of disjoint pairs covering all sides.
    pub fn from_pairs(pairs: &[(usize, usize)]) -> Result<Self> {
        let mut inv = vec![usize::MAX; SIDES];
        for &(a, b) in pairs {
            if a >= SIDES || b >= SIDES || inv[a] != usize::MAX || inv[b] != usize::MAX {
                return Err(Error::Malformed(format!("bad pair ({a}, {b})")));
            }
            inv[a] = b;
            inv[b] = a;
        }
        EdgePairing::new(inv)
    }

    /// Number of corner classes after gluing.
    pub fn vertex_classes(&self) -> usize {
        let mut parent: Vec<usize> = (0..SIDES).collect();
        fn find(p: &mut [usize], mut x: usize) -> usize {
            while p[x] != x {
                p[x] = p[p[x]];
                x = p[x];
            }
            x
        }
        let mut union = |a: usize, b: usize| {
            let (ra, rb) = (find(&mut parent, a), find(&mut parent, b));
            if ra != rb {
                parent[ra.max(rb)] = ra.min(rb);
            }
        };
        for (i, &k) in self.involution.iter().enumerate() {
            union(prev_in_triangle(i), k);
            union(i, prev_in_triangle(k));
        }
        (0..SIDES).filter(|&x| find(&mut parent, x) == x).count()
    }

    /// All 18 corners are glued to a single point.
    pub fn one_vertex(&self) -> bool {
        self.vertex_classes() == 1
    }

    /// The nine side classes, each listed as its smaller index.
    pub fn classes(&self) -> Vec<(usize, usize)> {
        (0..SIDES).filter(|&i| i < self.involution[i]).map(|i| (i, self.involution[i])).collect()
    }
}

/// The surfaces that can be built.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", content = "t")]
pub enum Model {
    FAlpha,
    FBeta,
    /// The deformation `F_t`, with `t` the change of the common side.
    FT(f64),
}

/// A genus-2 surface presented as a triangulated octagon with side pairings.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct OctagonSurface {
    pub model: Model,
    /// Length of side `γ_i`.
    pub lengths: Vec<f64>,
    pub pairing: EdgePairing,
    /// Pairs glued inside the octagon (a spanning tree of the six triangles).
    pub interior_pairs: Vec<(usize, usize)>,
    /// The eight boundary sides in counter-clockwise order.
    pub boundary: Vec<usize>,
    /// Position of corner `x_i`.
    pub corners: Vec<HPoint>,
    /// Side-pairing transformations: `generators[j]` maps side
    /// `generator_sides[j].1` onto side `generator_sides[j].0`.
    pub generators: Vec<HIsometry>,
    pub generator_sides: Vec<(usize, usize)>,
    /// Sum of all 18 corner angles.
    pub vertex_angle_sum: f64,
    pub area: f64,
    /// Point near the middle of the octagon, used as lift center.
    pub basepoint: HPoint,
    /// Largest distance from the basepoint to an octagon vertex.
    pub outer_radius: f64,
}

fn model_layout(model: Model) -> Result<(Vec<f64>, Vec<(usize, usize)>)> {
    let c = constants();
    match model {
        Model::FAlpha => {
            // A fan of six triangles about the common corner x_{3j}.
            let pairs = (0..5).map(|j| (3 * j + 1, 3 * j + 3)).collect();
            Ok((vec![c.d_alpha; SIDES], pairs))
        }
        Model::FBeta => layout_beta(c.d_beta, c.d_beta),
        Model::FT(t) => {
            let d1 = solve_d1_of_t(t)?;
            layout_beta(c.d_beta + t, d1)
        }
    }
}

/// Triangles 0 and 1 share the diagonal `b`; triangle 0 carries triangles 3
/// and 4, triangle 1 carries triangle 2 (across the side `d1`) and triangle 5.
fn layout_beta(d: f64, d1: f64) -> Result<(Vec<f64>, Vec<(usize, usize)>)> {
    let b = b0(&[d, d])?;
    let mut lengths = vec![d; SIDES];
    lengths[0] = b;
    lengths[3] = b;
    lengths[4] = d1;
    lengths[6] = d1;
    Ok((lengths, vec![(0, 3), (1, 9), (2, 12), (4, 6), (5, 15)]))
}

/// The point `c` to the left of the directed segment `a → b` with the given
/// distances to `a` and `b`.
fn place_third(a: &HPoint, b: &HPoint, dac: f64, dbc: f64) -> Result<HPoint> {
    let dab = dist(a, b);
    let alpha = triangle_angle(dbc, dab, dac)?;
    let f = HIsometry::frame(a, b);
    Ok(f.inverse().apply(&HPoint::from_polar(dac, alpha)))
}

/// Builds and validates one of the explicit surfaces.
pub fn build_surface(model: Model) -> Result<OctagonSurface> {
    let (lengths, interior_pairs) = model_layout(model)?;
    OctagonSurface::from_layout(model, lengths, interior_pairs)
}

impl OctagonSurface {
    /// Places the triangles, derives the boundary pairing and generators, and
    /// checks that the result is a one-vertex surface of angle `2π`.
    pub fn from_layout(model: Model, lengths: Vec<f64>, interior_pairs: Vec<(usize, usize)>) -> Result<Self> {
        if lengths.len() != SIDES || lengths.iter().any(|&l| !(l > 0.0 && l.is_finite())) {
            return Err(Error::InvalidSides("need 18 positive side lengths".into()));
        }
        if interior_pairs.len() != 5 {
            return Err(Error::Malformed("the interior gluing must be a tree of 5 pairs".into()));
        }
        let mut corners: Vec<Option<HPoint>> = vec![None; SIDES];
        // Triangle 0 first, with its circumcenter at the origin and x_0 on the
        // positive axis.
        {
            let a = HPoint::origin();
            let b = HPoint::from_polar(lengths[0], 0.0);
            let c = place_third(&a, &b, lengths[2], lengths[1])?;
            let center = circumcenter(&a, &b, &c)?
                .ok_or_else(|| Error::Degenerate("first triangle is not inscribed".into()))?;
            let g = HIsometry::translation(&center).inverse();
            let x0 = g.apply(&b).coords();
            let g = HIsometry::rotation(-x0[2].atan2(x0[1])).compose(&g);
            corners[2] = Some(g.apply(&a));
            corners[0] = Some(g.apply(&b));
            corners[1] = Some(g.apply(&c));
        }
        let mut placed = [false; 6];
        placed[0] = true;
        let mut pending = interior_pairs.clone();
        while !pending.is_empty() {
            let pos = pending
                .iter()
                .position(|&(i, k)| placed[i / 3] != placed[k / 3])
                .ok_or_else(|| Error::Malformed("interior gluing is not a spanning tree".into()))?;
            let (i, k) = pending.swap_remove(pos);
            let (i, k) = if placed[i / 3] { (i, k) } else { (k, i) };
            if (lengths[i] - lengths[k]).abs() >= 1e-9 {
                return Err(Error::LengthMismatch(lengths[i], lengths[k]));
            }
            let a = corners[i].unwrap();
            let b = corners[prev_in_triangle(i)].unwrap();
            let c = place_third(&a, &b, lengths[prev_in_triangle(k)], lengths[next_in_triangle(k)])?;
            corners[prev_in_triangle(k)] = Some(a);
            corners[k] = Some(b);
            corners[next_in_triangle(k)] = Some(c);
            placed[k / 3] = true;
        }
        let corners: Vec<HPoint> = corners.into_iter().map(|c| c.unwrap()).collect();
        // Recenter so the octagon sits around the origin: generators built
        // from frames near the origin are much better conditioned, which
        // matters once they are multiplied into long words.
        let corners = {
            let mut sum = [0.0; 3];
            for c in &corners {
                for (s, x) in sum.iter_mut().zip(c.coords()) {
                    *s += x;
                }
            }
            let g = HIsometry::translation(&HPoint::normalized(sum)).inverse();
            corners.iter().map(|c| g.apply(c)).collect::<Vec<_>>()
        };

        // Boundary sides, chained counter-clockwise by matching endpoints.
        let mut is_interior = [false; SIDES];
        for &(i, k) in &interior_pairs {
            is_interior[i] = true;
            is_interior[k] = true;
        }
        let free: Vec<usize> = (0..SIDES).filter(|&i| !is_interior[i]).collect();
        if free.len() != 8 {
            return Err(Error::Malformed("octagon must have 8 boundary sides".into()));
        }
        let mut boundary = vec![free[0]];
        while boundary.len() < 8 {
            let last = *boundary.last().unwrap();
            let end = corners[last];
            let next = free
                .iter()
                .cloned()
                .find(|&j| !boundary.contains(&j) && dist(&corners[prev_in_triangle(j)], &end) < 1e-9)
                .ok_or_else(|| Error::Malformed("boundary sides do not form a cycle".into()))?;
            boundary.push(next);
        }
        if dist(&corners[*boundary.last().unwrap()], &corners[prev_in_triangle(boundary[0])]) >= 1e-9 {
            return Err(Error::Malformed("boundary does not close up".into()));
        }
        // Surface word a b a⁻¹ b⁻¹ c d c⁻¹ d⁻¹ along the boundary.
        let word = [(0, 2), (1, 3), (4, 6), (5, 7)];
        let mut pairs = interior_pairs.clone();
        pairs.extend(word.iter().map(|&(p, q)| (boundary[p], boundary[q])));
        let pairing = EdgePairing::from_pairs(&pairs)?;
        if !pairing.one_vertex() {
            return Err(Error::Malformed("gluing does not give a one-vertex surface".into()));
        }
        let mut generators = Vec::new();
        let mut generator_sides = Vec::new();
        for &(p, q) in &word {
            let (i, k) = (boundary[p], boundary[q]);
            let src = GeodesicSegment::new(corners[prev_in_triangle(k)], corners[k]);
            let dst = GeodesicSegment::new(corners[i], corners[prev_in_triangle(i)]);
            generators.push(segment_pairing_isometry(&src, &dst, false)?);
            generator_sides.push((i, k));
        }

        let mut angle_sum = 0.0;
        let mut area = 0.0;
        for j in 0..6 {
            let mut tri = 0.0;
            for i in 3 * j..3 * j + 3 {
                tri += triangle_angle(lengths[prev_in_triangle(i)], lengths[i], lengths[next_in_triangle(i)])?;
            }
            angle_sum += tri;
            area += PI - tri;
        }
        if (angle_sum - 2.0 * PI).abs() > 1e-8 {
            return Err(Error::Malformed(format!("vertex angle sum {angle_sum} differs from 2π")));
        }

        let verts: Vec<HPoint> = boundary.iter().map(|&i| corners[i]).collect();
        let basepoint = HPoint::origin();
        let outer_radius = verts.iter().map(|v| dist(&basepoint, v)).fold(0.0, f64::max);
        Ok(OctagonSurface {
            model,
            lengths,
            pairing,
            interior_pairs,
            boundary,
            corners,
            generators,
            generator_sides,
            vertex_angle_sum: angle_sum,
            area,
            basepoint,
            outer_radius,
        })
    }

    /// Corners of triangle `j` in counter-clockwise order.
    pub fn triangle(&self, j: usize) -> [HPoint; 3] {
        [self.corners[3 * j + 2], self.corners[3 * j], self.corners[3 * j + 1]]
    }

    /// Side lengths of triangle `j`, `(γ_{3j}, γ_{3j+1}, γ_{3j+2})`.
    pub fn triangle_sides(&self, j: usize) -> [f64; 3] {
        [self.lengths[3 * j], self.lengths[3 * j + 1], self.lengths[3 * j + 2]]
    }

    /// The eight octagon vertices, counter-clockwise.
    pub fn octagon_vertices(&self) -> Vec<HPoint> {
        self.boundary.iter().map(|&i| self.corners[prev_in_triangle(i)]).collect()
    }

    /// Whether `x` lies in the closed octagon, up to `tol` in the
    /// side-of-geodesic test.
    pub fn contains(&self, x: &HPoint, tol: f64) -> bool {
        (0..6).any(|j| {
            let t = self.triangle(j);
            (0..3).all(|k| {
                let (p, q) = (&t[k], &t[(k + 1) % 3]);
                let scale = p.coords()[0] * q.coords()[0] * x.coords()[0];
                orientation(p, q, x) >= -tol * scale
            })
        })
    }

    /// Largest circumradius among the six triangles.
    pub fn max_triangle_radius(&self) -> Result<f64> {
        let mut m: f64 = 0.0;
        for j in 0..6 {
            let t = cyclic::classify(&self.triangle_sides(j))?;
            m = m.max(t.radius);
        }
        Ok(m)
    }

    /// Default lift radius: the circumdisks of the triangles in the octagon
    /// and of the triangles across each of their sides must lie in the
    /// ball, so every Voronoi vertex and edge a dual cell of the octagon can
    /// use is certified.
    pub fn default_ball_radius(&self) -> Result<f64> {
        let mut centers = Vec::new();
        for j in 0..6 {
            let t = self.triangle(j);
            let c = circumcenter(&t[0], &t[1], &t[2])?
                .ok_or_else(|| Error::Degenerate(format!("triangle {j} is not inscribed")))?;
            centers.push((c, cyclic::classify(&self.triangle_sides(j))?.radius));
        }
        let mut need = centers.iter().map(|(c, r)| dist(c, &self.basepoint) + r).fold(0.0, f64::max);
        for (g, &(i, k)) in self.generators.iter().zip(&self.generator_sides) {
            // Across side i lies g(triangle of k); across side k, g⁻¹(triangle of i).
            let (ci, ri) = centers[i / 3];
            let (ck, rk) = centers[k / 3];
            need = need.max(dist(&g.apply(&ck), &self.basepoint) + rk);
            need = need.max(dist(&g.inverse().apply(&ci), &self.basepoint) + ri);
        }
        Ok(need + LIFT_MARGIN)
    }

    /// Serializes the surface descriptor.
    pub fn to_json(&self) -> Result<String> {
        Ok(serde_json::to_string_pretty(self)?)
    }

    /// Lifts, tessellates and extracts one representative of every face,
    /// cell and non-centered edge.
    pub fn tessellate(&self) -> Result<SurfaceTessellation> {
        let ball = self.default_ball_radius()?;
        let lift = lift_sites(self, ball)?;
        let vor = tessellation::voronoi_with_tolerance(&lift.sites, ball, &self.basepoint, LIFT_VERTEX_MERGE_TOL)?;
        let delaunay = tessellation::delaunay(&vor)?;
        let dual = tessellation::centered_dual(&delaunay)?;
        let orbit = |p: &HPoint, q: &HPoint| lift.tiles.iter().any(|g| dist(&g.apply(p), q) < 1e-6);
        let tol = 1e-9;
        let pick = |candidates: Vec<(usize, HPoint)>| -> Vec<usize> {
            let mut out: Vec<(usize, HPoint)> = Vec::new();
            for (i, p) in candidates {
                if self.contains(&p, tol) && !out.iter().any(|(_, q)| orbit(&p, q)) {
                    out.push((i, p));
                }
            }
            out.into_iter().map(|x| x.0).collect()
        };
        let vpos = |v: usize| delaunay.voronoi.vertices[v].position;
        let faces = pick(delaunay.faces.iter().enumerate().map(|(i, f)| (i, vpos(f.voronoi_vertex))).collect());
        let mut cell_of_vertex = vec![None; delaunay.voronoi.vertices.len()];
        for (ci, c) in dual.cells.iter().enumerate() {
            for &m in &c.members {
                cell_of_vertex[m] = Some(ci);
            }
        }
        for &f in &faces {
            if cell_of_vertex[delaunay.faces[f].voronoi_vertex].is_none() {
                return Err(Error::Peripheral("a face of the octagon lies in an unresolved cell".into()));
            }
        }
        let cells = pick(
            dual.cells
                .iter()
                .enumerate()
                .map(|(i, c)| (i, vpos(c.tree.as_ref().map_or(c.members[0], |t| t.root))))
                .collect(),
        );
        let noncentered_edges = pick(
            delaunay
                .edges
                .iter()
                .enumerate()
                .filter(|(_, e)| !e.centered)
                .map(|(i, e)| {
                    let (a, b) = delaunay.voronoi.edges[e.voronoi_edge].vertices;
                    (i, crate::hypgeo::midpoint(&vpos(a), &vpos(b)))
                })
                .collect(),
        );
        Ok(SurfaceTessellation { lift, delaunay, dual, faces, cells, noncentered_edges })
    }
}

/// The orbit of the surface vertex inside a ball, with the tiles used.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct Lift {
    pub sites: Vec<HPoint>,
    /// Deck transformations whose octagon meets the ball.
    pub tiles: Vec<HIsometry>,
    pub ball_radius: f64,
    pub basepoint: HPoint,
}

/// Spatial hash on Poincaré-disk coordinates for merging nearby points. The
/// disk model contracts distances, so a point within hyperbolic distance
/// `tol ≪ cell` of another always falls in a neighboring bucket.
struct PointIndex {
    cell: f64,
    map: HashMap<(i64, i64), Vec<usize>>,
    points: Vec<HPoint>,
}

impl PointIndex {
    fn new(cell: f64) -> Self {
        PointIndex { cell, map: HashMap::new(), points: Vec::new() }
    }

    fn key(&self, p: &HPoint) -> (i64, i64) {
        let (u, v) = p.to_poincare();
        ((u / self.cell).floor() as i64, (v / self.cell).floor() as i64)
    }

    /// Inserts `p` unless a point within `tol` is present; returns whether it
    /// was new.
    fn insert(&mut self, p: HPoint, tol: f64) -> bool {
        let (kx, ky) = self.key(&p);
        for dx in -1..=1 {
            for dy in -1..=1 {
                if let Some(ids) = self.map.get(&(kx + dx, ky + dy)) {
                    if ids.iter().any(|&i| dist(&self.points[i], &p) < tol) {
                        return false;
                    }
                }
            }
        }
        self.map.entry((kx, ky)).or_default().push(self.points.len());
        self.points.push(p);
        true
    }
}

/// Collects the images of the octagon vertices within `ball_radius` of the
/// basepoint by a breadth-first search over tiles `g·O`, extending words by
/// the generators and their inverses.
pub fn lift_sites(s: &OctagonSurface, ball_radius: f64) -> Result<Lift> {
    if !(ball_radius > 0.0 && ball_radius.is_finite()) {
        return Err(Error::OutOfRange(format!("ball radius {ball_radius}")));
    }
    let mut gens = s.generators.clone();
    gens.extend(s.generators.iter().map(|g| g.inverse()));
    let verts = s.octagon_vertices();
    let reach = ball_radius + s.outer_radius;
    // Orbit points are far apart, so a coarse hash suffices.
    let mut centers = PointIndex::new(1e-3);
    let mut sites = PointIndex::new(1e-3);
    let mut tiles = Vec::new();
    let mut queue = VecDeque::from([(HIsometry::identity(), 0usize)]);
    centers.insert(s.basepoint, LIFT_MERGE_TOL);
    while let Some((g, depth)) = queue.pop_front() {
        tiles.push(g);
        for v in &verts {
            let p = g.apply(v);
            if dist(&p, &s.basepoint) <= ball_radius {
                sites.insert(p, LIFT_MERGE_TOL);
                if sites.points.len() > MAX_POINTS {
                    return Err(Error::OutOfRange(format!("lift exceeds {MAX_POINTS} points")));
                }
            }
        }
        for h in &gens {
            let gh = g.compose(h);
            let c = gh.apply(&s.basepoint);
            if dist(&c, &s.basepoint) > reach || !centers.insert(c, LIFT_MERGE_TOL) {
                continue;
            }
            if depth + 1 > MAX_WORD {
                return Err(Error::OutOfRange(format!("lift needs words longer than {MAX_WORD}")));
            }
            queue.push_back((gh, depth + 1));
        }
    }
    Ok(Lift { sites: sites.points, tiles, ball_radius, basepoint: s.basepoint })
}

/// Injectivity radius at the vertex: half the shortest distance between
/// lifted sites.
pub fn injectivity_radius(lift: &Lift) -> f64 {
    tessellation::half_min_distance(&lift.sites)
}

/// The Delaunay data of a lifted surface together with one representative
/// of every face, dual cell and non-centered edge of the surface.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct SurfaceTessellation {
    pub lift: Lift,
    pub delaunay: DelaunayComplex,
    pub dual: CenteredDual,
    /// Delaunay face indices, one per face of the surface.
    pub faces: Vec<usize>,
    /// Dual cell indices, one per cell of the surface.
    pub cells: Vec<usize>,
    /// Delaunay edge indices, one per non-centered edge of the surface.
    pub noncentered_edges: Vec<usize>,
}

/// Covering radius at the vertex: the largest Voronoi-vertex radius among
/// the surface's faces.
pub fn covering_radius_geometric(t: &SurfaceTessellation) -> f64 {
    t.faces
        .iter()
        .map(|&f| t.delaunay.voronoi.vertices[t.delaunay.faces[f].voronoi_vertex].radius)
        .fold(0.0, f64::max)
}
