//! Admissible spaces of rooted trees and certified lower bounds for the
//! defects of non-centered dual cells.
//!
//! A non-centered cell of the centered dual decomposition is the union of
//! the vertex polygons `P_v` over a rooted tree `T` of non-centered Voronoi
//! edges. Every tree edge `e` and every frontier edge (an edge of the
//! Voronoi graph touching `T` but not in it) has a dual length `d_e`; the
//! polygon at `v` has one side per edge at `v`. The lengths `d_E` on tree
//! edges are *admissible* for frontier lengths `d_F` when
//!
//! 1. every non-root polygon is non-centered (or boundary-centered) with its
//!    longest side on the edge `e_v` leading towards the root,
//! 2. the root polygon is centered, and
//! 3. radii increase towards the root.
//!
//! Working from the leaves inwards, `b_e(d_F)` and `h_e(d_F)` are the tree
//! edge lengths making every non-root polygon boundary-centered or
//! horocyclic; admissible lengths satisfy `b_e ≤ d_e < h_e`.
//!
//! The bound algorithms turn lower bounds `b_F ≤ d_F` into a lower bound for
//! `Σ_v D_R(P_v)` over the closure of the admissible set: the *basic* bound
//! holds for any tree, and for trees with one or two edges the minimum is
//! located in one of a few boundary configurations (Cases 1, 2A, 2B, 3),
//! each bounded separately.

use serde::{Deserialize, Serialize, Serializer};
use std::collections::BTreeMap;

use crate::cyclic::{self, b0, formal_horocyclic_defect, h0, CyclicClass};
use crate::error::{Error, Result};
use crate::roots::bisect;
use crate::tessellation::{DelaunayComplex, DualCell};

/// Relative slack used when comparing computed radii and lengths in the
/// closure tests.
const CLOSURE_SLACK: f64 = 1e-10;

/// A rooted tree together with the frontier edges attached to it.
///
/// Vertices are numbered `0..n` internally; `ids` keeps the caller's labels.
/// Tree edge `k` joins `edges[k].0` to its parent `edges[k].1`, so it is the
/// edge `e_v` of its child.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RootedTree {
    pub ids: Vec<usize>,
    pub root: usize,
    pub edges: Vec<(usize, usize)>,
    /// The vertex each frontier edge is attached to.
    pub frontier: Vec<usize>,
    /// Vertices with every parent listed before its children.
    order: Vec<usize>,
    /// `parent_edge[v]` is the index of `e_v` (none for the root).
    parent_edge: Vec<Option<usize>>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
struct VertexSpec {
    id: usize,
    #[serde(default)]
    root: bool,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
struct FrontierSpec {
    vertex: usize,
    bound: f64,
}

/// JSON form of a tree with frontier bounds.
#[derive(Debug, Clone, Serialize, Deserialize)]
struct TreeSpec {
    vertices: Vec<VertexSpec>,
    edges: Vec<[usize; 2]>,
    frontier: Vec<FrontierSpec>,
}

impl RootedTree {
    /// Builds a tree on vertices labelled `ids` from undirected edges and
    /// frontier attachments (all given by label), validating that it is a
    /// tree with every valence at least three and `|F| ≥ |E| + 3`.
    pub fn new(ids: Vec<usize>, root_id: usize, edges: &[(usize, usize)], frontier: &[usize]) -> Result<Self> {
        let index: BTreeMap<usize, usize> = ids.iter().enumerate().map(|(i, &id)| (id, i)).collect();
        if index.len() != ids.len() {
            return Err(Error::Malformed("duplicate vertex id".into()));
        }
        let look = |id: usize| index.get(&id).copied().ok_or_else(|| Error::Malformed(format!("unknown vertex id {id}")));
        let n = ids.len();
        let root = look(root_id)?;
        if edges.len() + 1 != n {
            return Err(Error::Malformed(format!("{} edges cannot form a tree on {n} vertices", edges.len())));
        }
        let mut adj: Vec<Vec<(usize, usize)>> = vec![Vec::new(); n];
        for (k, &(a, b)) in edges.iter().enumerate() {
            let (a, b) = (look(a)?, look(b)?);
            if a == b {
                return Err(Error::Malformed("loop edge".into()));
            }
            adj[a].push((k, b));
            adj[b].push((k, a));
        }
        let mut oriented = vec![(usize::MAX, usize::MAX); edges.len()];
        let mut parent_edge = vec![None; n];
        let mut seen = vec![false; n];
        let mut order = vec![root];
        seen[root] = true;
        let mut head = 0;
        while head < order.len() {
            let v = order[head];
            head += 1;
            for &(k, w) in &adj[v] {
                if !seen[w] {
                    seen[w] = true;
                    oriented[k] = (w, v);
                    parent_edge[w] = Some(k);
                    order.push(w);
                }
            }
        }
        if order.len() != n {
            return Err(Error::Malformed("tree is not connected".into()));
        }
        let frontier: Vec<usize> = frontier.iter().map(|&id| look(id)).collect::<Result<_>>()?;
        let t = RootedTree { ids, root, edges: oriented, frontier, order, parent_edge };
        for v in 0..n {
            if t.valence(v) < 3 {
                return Err(Error::Malformed(format!("vertex {} has valence {} < 3", t.ids[v], t.valence(v))));
            }
        }
        if t.frontier.len() < t.edges.len() + 3 {
            return Err(Error::Malformed(format!(
                "{} frontier edges is fewer than |E| + 3 = {}",
                t.frontier.len(),
                t.edges.len() + 3
            )));
        }
        Ok(t)
    }

    /// A path whose `k`-th vertex has the given valence, rooted at
    /// `valences[root]`; the remaining valence of each vertex is made up of
    /// frontier edges.
    pub fn chain(valences: &[usize], root: usize) -> Result<Self> {
        let n = valences.len();
        if n == 0 || root >= n {
            return Err(Error::Malformed("chain needs a vertex and a root among them".into()));
        }
        let edges: Vec<(usize, usize)> = (1..n).map(|i| (i - 1, i)).collect();
        let mut frontier = Vec::new();
        for (i, &val) in valences.iter().enumerate() {
            let tree_degree = usize::from(i > 0) + usize::from(i + 1 < n);
            if val < tree_degree {
                return Err(Error::Malformed(format!("valence {val} below tree degree at vertex {i}")));
            }
            frontier.extend(std::iter::repeat_n(i, val - tree_degree));
        }
        RootedTree::new((0..n).collect(), root, &edges, &frontier)
    }

    /// Parses `{"vertices":[{"id","root"}],"edges":[[u,v]],"frontier":[{"vertex","bound"}]}`,
    /// returning the tree and the frontier bounds in frontier order.
    pub fn from_json(text: &str) -> Result<(Self, FrontierLengths)> {
        let spec: TreeSpec = serde_json::from_str(text)?;
        let roots: Vec<usize> = spec.vertices.iter().filter(|v| v.root).map(|v| v.id).collect();
        if roots.len() != 1 {
            return Err(Error::Malformed(format!("expected exactly one root, found {}", roots.len())));
        }
        let ids = spec.vertices.iter().map(|v| v.id).collect();
        let edges: Vec<(usize, usize)> = spec.edges.iter().map(|e| (e[0], e[1])).collect();
        let attach: Vec<usize> = spec.frontier.iter().map(|f| f.vertex).collect();
        let t = RootedTree::new(ids, roots[0], &edges, &attach)?;
        let bounds = FrontierLengths::new(spec.frontier.iter().map(|f| f.bound).collect())?;
        Ok((t, bounds))
    }

    /// Serializes the tree with the given frontier values as bounds.
    pub fn to_json(&self, bounds: &FrontierLengths) -> Result<String> {
        self.check_frontier(bounds)?;
        let spec = TreeSpec {
            vertices: (0..self.len()).map(|v| VertexSpec { id: self.ids[v], root: v == self.root }).collect(),
            edges: self.edges.iter().map(|&(a, b)| [self.ids[a], self.ids[b]]).collect(),
            frontier: self
                .frontier
                .iter()
                .zip(&bounds.0)
                .map(|(&v, &bound)| FrontierSpec { vertex: self.ids[v], bound })
                .collect(),
        };
        Ok(serde_json::to_string_pretty(&spec)?)
    }

    /// Number of vertices.
    pub fn len(&self) -> usize {
        self.ids.len()
    }

    /// Always false: a tree has at least its root.
    pub fn is_empty(&self) -> bool {
        self.ids.is_empty()
    }

    /// Number of tree edges and frontier edges at `v`.
    pub fn valence(&self, v: usize) -> usize {
        self.edges.iter().filter(|&&(a, b)| a == v || b == v).count()
            + self.frontier.iter().filter(|&&w| w == v).count()
    }

    /// The index of `e_v`, the edge from `v` towards the root.
    pub fn parent_edge(&self, v: usize) -> Option<usize> {
        self.parent_edge[v]
    }

    /// Vertices ordered so that every parent precedes its children.
    pub fn order(&self) -> &[usize] {
        &self.order
    }

    /// Values of the edges at `v` other than `e_v`: tree edges to children
    /// take `edge_values`, frontier edges take `frontier_values`.
    fn inputs(&self, v: usize, edge_values: &[f64], frontier_values: &[f64]) -> Vec<f64> {
        let mut out: Vec<f64> = self
            .edges
            .iter()
            .enumerate()
            .filter(|(_, &(_, p))| p == v)
            .map(|(k, _)| edge_values[k])
            .collect();
        out.extend(self.frontier.iter().zip(frontier_values).filter(|(&w, _)| w == v).map(|(_, &x)| x));
        out
    }

    /// The side-length tuple `P_v(d)`, longest first for non-root vertices
    /// when admissible; the order is otherwise immaterial because defects
    /// and radii depend only on the multiset of sides.
    pub fn vertex_tuple(&self, v: usize, d_e: &[f64], d_f: &FrontierLengths) -> Vec<f64> {
        let mut out = Vec::with_capacity(self.valence(v));
        if let Some(k) = self.parent_edge[v] {
            out.push(d_e[k]);
        }
        out.extend(self.inputs(v, d_e, &d_f.0));
        out
    }

    fn check_frontier(&self, d_f: &FrontierLengths) -> Result<()> {
        if d_f.0.len() != self.frontier.len() {
            return Err(Error::Malformed(format!(
                "{} frontier values for {} frontier edges",
                d_f.0.len(),
                self.frontier.len()
            )));
        }
        Ok(())
    }

    fn check_edges(&self, d_e: &[f64]) -> Result<()> {
        if d_e.len() != self.edges.len() {
            return Err(Error::Malformed(format!("{} edge values for {} tree edges", d_e.len(), self.edges.len())));
        }
        if let Some(x) = d_e.iter().find(|x| !(x.is_finite() && **x > 0.0)) {
            return Err(Error::InvalidSides(format!("tree edge length {x} is not positive")));
        }
        Ok(())
    }
}

/// Positive lengths (or length bounds) on the frontier edges, in the tree's
/// frontier order.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FrontierLengths(pub Vec<f64>);

impl FrontierLengths {
    pub fn new(values: Vec<f64>) -> Result<Self> {
        if let Some(x) = values.iter().find(|x| !(x.is_finite() && **x > 0.0)) {
            return Err(Error::InvalidSides(format!("frontier length {x} is not positive")));
        }
        Ok(FrontierLengths(values))
    }

    /// The same value on `n` frontier edges.
    pub fn uniform(value: f64, n: usize) -> Result<Self> {
        FrontierLengths::new(vec![value; n])
    }

    pub fn min(&self) -> f64 {
        self.0.iter().copied().fold(f64::INFINITY, f64::min)
    }
}

/// A non-centered cell read off a Delaunay complex: its tree, the dual
/// lengths of the tree edges and the frontier lengths.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct CellTree {
    pub tree: RootedTree,
    pub d_e: Vec<f64>,
    pub d_f: FrontierLengths,
}

impl CellTree {
    /// Extracts the tree data of a non-centered cell. Vertex ids are the
    /// Voronoi vertex indices.
    pub fn from_cell(cell: &DualCell, d: &DelaunayComplex) -> Result<Self> {
        let nc = cell.tree.as_ref().ok_or_else(|| Error::Malformed("cell has no non-centered tree".into()))?;
        let dual_length = |e: usize| -> Result<f64> {
            let de = d.edge_of_voronoi[e].ok_or_else(|| Error::Malformed(format!("edge {e} has no dual")))?;
            Ok(d.edges[de].length)
        };
        let members: Vec<usize> = nc.vertices.clone();
        let mut attach = Vec::with_capacity(nc.frontier.len());
        let mut d_f = Vec::with_capacity(nc.frontier.len());
        for &e in &nc.frontier {
            let (a, b) = d.voronoi.edges[e].vertices;
            let v = match (members.contains(&a), members.contains(&b)) {
                (true, false) => a,
                (false, true) => b,
                _ => return Err(Error::Malformed(format!("frontier edge {e} does not leave the tree"))),
            };
            attach.push(v);
            d_f.push(dual_length(e)?);
        }
        let edges: Vec<(usize, usize)> = nc.edges.iter().map(|&(_, a, b)| (a, b)).collect();
        let tree = RootedTree::new(members, nc.root, &edges, &attach)?;
        // The constructor orients edges from the root; match lengths by endpoints.
        let mut d_e = vec![0.0; tree.edges.len()];
        for (k, &(c, p)) in tree.edges.iter().enumerate() {
            let (cid, pid) = (tree.ids[c], tree.ids[p]);
            let &(e, _, _) = nc
                .edges
                .iter()
                .find(|&&(_, a, b)| (a, b) == (cid, pid) || (a, b) == (pid, cid))
                .ok_or_else(|| Error::Malformed("tree edge lost in orientation".into()))?;
            d_e[k] = dual_length(e)?;
        }
        Ok(CellTree { tree, d_e, d_f: FrontierLengths::new(d_f)? })
    }
}

/// `b_e(d_F)` for every tree edge: the lengths making every non-root vertex
/// polygon boundary-centered with longest side `e_v`, computed from the
/// leaves inwards.
pub fn frontier_b(t: &RootedTree, d_f: &FrontierLengths) -> Result<Vec<f64>> {
    solve_outside_in(t, d_f, b0)
}

/// `h_e(d_F)` for every tree edge: the lengths making every non-root vertex
/// polygon horocyclic.
pub fn frontier_h(t: &RootedTree, d_f: &FrontierLengths) -> Result<Vec<f64>> {
    solve_outside_in(t, d_f, h0)
}

fn solve_outside_in(t: &RootedTree, d_f: &FrontierLengths, solve: fn(&[f64]) -> Result<f64>) -> Result<Vec<f64>> {
    t.check_frontier(d_f)?;
    let mut vals = vec![0.0; t.edges.len()];
    for &v in t.order.iter().rev() {
        if let Some(k) = t.parent_edge[v] {
            vals[k] = solve(&t.inputs(v, &vals, &d_f.0))?;
        }
    }
    Ok(vals)
}

/// Whether `d_E` lies in the admissible set `Ad(d_F)`.
pub fn ad_membership(t: &RootedTree, d_e: &[f64], d_f: &FrontierLengths) -> bool {
    admissible_check(t, d_e, d_f, false).unwrap_or(false)
}

/// Whether `d_E` lies in the closure of `Ad(d_F)`: non-root polygons may be
/// boundary-centered, the root polygon may be boundary-centered, and radii
/// need only be non-decreasing towards the root.
pub fn in_admissible_closure(t: &RootedTree, d_e: &[f64], d_f: &FrontierLengths) -> bool {
    admissible_check(t, d_e, d_f, true).unwrap_or(false)
}

fn admissible_check(t: &RootedTree, d_e: &[f64], d_f: &FrontierLengths, closed: bool) -> Result<bool> {
    t.check_edges(d_e)?;
    t.check_frontier(d_f)?;
    let mut radius = vec![0.0; t.len()];
    #[allow(clippy::needless_range_loop)] // `v` also indexes the tree
    for v in 0..t.len() {
        let sides = t.vertex_tuple(v, d_e, d_f);
        let c = cyclic::classify(&sides)?;
        radius[v] = c.radius;
        let ok = if v == t.root {
            c.class == CyclicClass::Centered || (closed && c.class == CyclicClass::BoundaryCentered)
        } else {
            // The boundary-centered locus belongs to AC − C itself.
            let longest = sides[1..].iter().all(|&x| x <= sides[0] * (1.0 + CLOSURE_SLACK));
            longest && matches!(c.class, CyclicClass::NonCentered | CyclicClass::BoundaryCentered)
        };
        if !ok {
            return Ok(false);
        }
    }
    Ok(t.edges.iter().all(|&(child, parent)| {
        if closed {
            radius[parent] >= radius[child] * (1.0 - CLOSURE_SLACK)
        } else {
            radius[parent] > radius[child]
        }
    }))
}

/// The tree defect `D_R(T, d) = Σ_v D_R(P_v(d))` for `d_E` in the closure
/// of `Ad(d_F)` and `R ≤ min(d_F)/2`.
pub fn tree_defect(t: &RootedTree, d_e: &[f64], d_f: &FrontierLengths, r: f64) -> Result<f64> {
    if !in_admissible_closure(t, d_e, d_f) {
        return Err(Error::OutOfRange("edge lengths are outside the closed admissible set".into()));
    }
    if r > d_f.min() / 2.0 * (1.0 + 1e-12) {
        return Err(Error::RadiusOutOfRange { radius: r, max: d_f.min() / 2.0 });
    }
    (0..t.len()).map(|v| cyclic::defect_of(&t.vertex_tuple(v, d_e, d_f), r)).sum()
}

/// Defect of the tuple `(longest, others)`.
fn defect_with(longest: f64, others: &[f64], r: f64) -> Result<f64> {
    let mut s = Vec::with_capacity(others.len() + 1);
    s.push(longest);
    s.extend_from_slice(others);
    formal(&s, r)
}

/// Defect expression used by the bound algorithms (see
/// [`cyclic::formal_defect`]).
fn formal(sides: &[f64], r: f64) -> Result<f64> {
    cyclic::formal_defect(&cyclic::classify(sides)?, r)
}

/// Lower bound for the defect of a trivalent polygon whose longest side is
/// at least `big` and whose other sides are at least `others`, where `big`
/// exceeds `b₀(others)`: the smaller of the two boundary-centered triangles
/// obtained by lengthening one short side until `big` is its `b₀`.
fn trivalent_boundary_bound(big: f64, others: &[f64], r: f64) -> Result<f64> {
    let [b1, b2] = others else {
        return Err(Error::Malformed("trivalent bound needs two short sides".into()));
    };
    let stretch = |keep: f64| (big.cosh() - keep.cosh() + 1.0).acosh();
    let first = formal(&[big, *b1, stretch(*b1)], r)?;
    let second = formal(&[big, stretch(*b2), *b2], r)?;
    Ok(first.min(second))
}

/// Splits off the largest entry.
fn split_max(values: &[f64]) -> (f64, Vec<f64>) {
    let k = (0..values.len()).fold(0, |k, i| if values[i] > values[k] { i } else { k });
    let mut rest = values.to_vec();
    let m = rest.remove(k);
    (m, rest)
}

/// Lower bound `M_R` for the root polygon's defect, given lower bounds on
/// all of its sides: if the largest bound exceeds `b₀` of the rest, the
/// root polygon is bounded by a boundary-centered one (refined for
/// trivalent roots); otherwise the bounds themselves form a centered
/// polygon whose defect is the bound.
fn root_defect_bound(root_inputs: &[f64], r: f64) -> Result<f64> {
    let (big, rest) = split_max(root_inputs);
    let cap = b0(&rest)?;
    if big > cap {
        if rest.len() == 2 {
            trivalent_boundary_bound(big, &rest, r)
        } else {
            defect_with(cap, &rest, r)
        }
    } else {
        defect_with(big, &rest, r)
    }
}

/// Every bound produced for one rooted tree and frontier lower bounds.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct BoundReport {
    #[serde(rename = "Basic")]
    pub basic: f64,
    #[serde(rename = "Case 1", serialize_with = "na_or_value")]
    pub case1: Option<f64>,
    #[serde(rename = "Case 2A", serialize_with = "na_or_value")]
    pub case2a: Option<f64>,
    #[serde(rename = "Case 2B", serialize_with = "na_or_value")]
    pub case2b: Option<f64>,
    #[serde(rename = "Case 3", serialize_with = "na_or_value")]
    pub case3: Option<f64>,
    pub best: f64,
    /// Set when a one-edge tree's admissible interval is empty at the
    /// bounds themselves (the bounds then hold vacuously there).
    pub possibly_empty: bool,
    pub intermediates: BoundIntermediates,
}

/// Intermediate quantities of the bound computation.
#[derive(Debug, Clone, Default, Serialize, Deserialize)]
pub struct BoundIntermediates {
    /// `b_e(b_F)` per tree edge.
    pub b_e: Vec<f64>,
    /// `h_e(b_F)` per tree edge.
    pub h_e: Vec<f64>,
    /// Root defect bound `M_R`.
    pub root_bound: f64,
    /// Horocyclic defect bound per vertex (absent at the root).
    pub horocyclic_terms: Vec<Option<f64>>,
    /// Boundary-centered defect per vertex (absent at the root).
    pub boundary_terms: Vec<Option<f64>>,
    /// Case 2A value for each root frontier edge taken as longest side.
    pub case2a_candidates: Vec<f64>,
    /// Case 2B value for each root tree edge taken as longest side.
    pub case2b_candidates: Vec<f64>,
}

fn na_or_value<S: Serializer>(v: &Option<f64>, s: S) -> std::result::Result<S::Ok, S::Error> {
    match v {
        Some(x) => s.serialize_f64(*x),
        None => s.serialize_str("N/A"),
    }
}

/// Shared inputs of all bound computations.
struct BoundSetup<'a> {
    t: &'a RootedTree,
    b_e: Vec<f64>,
    /// `L(v)`: lower bounds for the sides at `v` other than `e_v`.
    inputs: Vec<Vec<f64>>,
    horocyclic: Vec<Option<f64>>,
}

impl<'a> BoundSetup<'a> {
    fn new(t: &'a RootedTree, b_f: &FrontierLengths, r: f64) -> Result<Self> {
        if !(r >= 0.0 && r.is_finite()) {
            return Err(Error::RadiusOutOfRange { radius: r, max: f64::INFINITY });
        }
        let b_e = frontier_b(t, b_f)?;
        let inputs: Vec<Vec<f64>> = (0..t.len()).map(|v| t.inputs(v, &b_e, &b_f.0)).collect();
        let horocyclic = (0..t.len())
            .map(|v| if v == t.root { Ok(None) } else { formal_horocyclic_defect(&inputs[v], r).map(Some) })
            .collect::<Result<_>>()?;
        Ok(BoundSetup { t, b_e, inputs, horocyclic })
    }

    fn horocyclic_sum_except(&self, skip: Option<usize>) -> f64 {
        self.horocyclic.iter().enumerate().filter(|(v, _)| Some(*v) != skip).filter_map(|(_, x)| *x).sum()
    }

    fn trivalent(&self, v: usize) -> bool {
        self.t.valence(v) == 3
    }
}

/// The basic bound `M_R + Σ_{v ≠ root} D_R(P_v^h(b_F))`, valid for any
/// tree: each non-root polygon is bounded below by the horocyclic polygon on
/// the lower bounds of its other sides.
///
/// The bound is meaningful as an area bound for `R ≤ min(b_F)/2`; larger
/// `R` is accepted and evaluated formally, which still bounds the defect at
/// every smaller radius from below.
pub fn basic_bound(t: &RootedTree, b_f: &FrontierLengths, r: f64) -> Result<f64> {
    let s = BoundSetup::new(t, b_f, r)?;
    Ok(root_defect_bound(&s.inputs[t.root], r)? + s.horocyclic_sum_except(None))
}

/// Basic bound plus, for trees with at most two edges, the case bounds
/// locating the minimum; `best = max(basic, min(cases))`.
pub fn case_bounds(t: &RootedTree, b_f: &FrontierLengths, r: f64) -> Result<BoundReport> {
    if t.edges.len() > 2 {
        return Err(Error::OutOfRange(format!(
            "case bounds need a tree with at most two edges, got {}",
            t.edges.len()
        )));
    }
    bound_report(t, b_f, r)
}

/// Like [`case_bounds`], but for trees with more than two edges only the
/// basic bound is reported.
pub fn bound_report(t: &RootedTree, b_f: &FrontierLengths, r: f64) -> Result<BoundReport> {
    let s = BoundSetup::new(t, b_f, r)?;
    let root = t.root;
    let root_in = &s.inputs[root];
    let root_bound = root_defect_bound(root_in, r)?;
    let basic = root_bound + s.horocyclic_sum_except(None);
    let mut im = BoundIntermediates {
        b_e: s.b_e.clone(),
        h_e: frontier_h(t, b_f)?,
        root_bound,
        horocyclic_terms: s.horocyclic.clone(),
        ..Default::default()
    };
    im.boundary_terms = (0..t.len())
        .map(|v| match t.parent_edge[v] {
            Some(k) => defect_with(s.b_e[k], &s.inputs[v], r).map(Some),
            None => Ok(None),
        })
        .collect::<Result<_>>()?;
    if t.edges.len() > 2 || t.edges.is_empty() {
        return Ok(BoundReport {
            basic,
            case1: None,
            case2a: None,
            case2b: None,
            case3: None,
            best: basic,
            possibly_empty: false,
            intermediates: im,
        });
    }

    // Case 1: every non-root polygon boundary-centered.
    let case1 = root_bound + im.boundary_terms.iter().filter_map(|x| *x).sum::<f64>();

    // Case 2A: root boundary-centered with a frontier edge as longest side.
    let root_frontier: Vec<usize> = (0..t.frontier.len()).filter(|&i| t.frontier[i] == root).collect();
    let root_children: Vec<usize> = (0..t.edges.len()).filter(|&k| t.edges[k].1 == root).collect();
    for &fi in &root_frontier {
        let bf = b_f.0[fi];
        let mut others: Vec<f64> = root_children.iter().map(|&k| s.b_e[k]).collect();
        others.extend(root_frontier.iter().filter(|&&j| j != fi).map(|&j| b_f.0[j]));
        let cap = b0(&others)?;
        let root_term = if bf > cap && s.trivalent(root) {
            trivalent_boundary_bound(bf, &others, r)?
        } else {
            defect_with(cap, &others, r)?
        };
        im.case2a_candidates.push(root_term + s.horocyclic_sum_except(None));
    }
    let case2a = im.case2a_candidates.iter().copied().reduce(f64::min);

    let (mut case2b, mut case3) = (None, None);
    if t.edges.len() == 2 {
        // Case 2B: root boundary-centered with a tree edge as longest side.
        for &k in &root_children {
            let child = t.edges[k].0;
            let bk = s.b_e[k];
            let mut others: Vec<f64> = root_children.iter().filter(|&&j| j != k).map(|&j| s.b_e[j]).collect();
            others.extend(root_frontier.iter().map(|&j| b_f.0[j]));
            let cap = b0(&others)?;
            let root_term = if bk > cap && s.trivalent(root) {
                trivalent_boundary_bound(bk, &others, r)?
            } else {
                defect_with(cap, &others, r)?
            };
            let child_term = if bk < cap {
                if s.trivalent(child) {
                    trivalent_boundary_bound(cap, &s.inputs[child], r)?
                } else {
                    s.horocyclic[child].unwrap_or(0.0)
                }
            } else {
                defect_with(bk, &s.inputs[child], r)?
            };
            im.case2b_candidates.push(root_term + child_term + s.horocyclic_sum_except(Some(child)));
        }
        case2b = im.case2b_candidates.iter().copied().reduce(f64::min);

        // Case 3: all radii equal; the cell is bounded by the merged cyclic
        // polygon on the frontier values.
        let (big, rest) = split_max(&b_f.0);
        let cap = b0(&rest)?;
        case3 = Some(defect_with(if big > cap { cap } else { big }, &rest, r)?);
    }

    let cases_min = [Some(case1), case2a, case2b, case3].into_iter().flatten().reduce(f64::min);
    let best = cases_min.map_or(basic, |m| basic.max(m));
    let possibly_empty = t.edges.len() == 1 && admissible_interval(t, b_f)?.empty;
    Ok(BoundReport {
        basic,
        case1: Some(case1),
        case2a,
        case2b,
        case3,
        best,
        possibly_empty,
        intermediates: im,
    })
}

/// Relative distance from a closed left end within which an edge length is
/// taken to be that end.
pub const LEFT_END_SLACK: f64 = 1e-12;

/// The admissible set of a one-edge tree: an interval `(d⁻, d⁺)` or
/// `[d⁻, d⁺)` of values for the tree edge.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct AdmissibleInterval {
    pub lower: f64,
    pub upper: f64,
    pub closed_left: bool,
    pub empty: bool,
    /// `[b_e, h_e)`: non-centeredness of the initial vertex's polygon.
    pub b_e: f64,
    pub h_e: f64,
    /// `(D⁻, D⁺)`: centeredness of the root polygon in the edge length.
    pub centered_window: (f64, f64),
}

impl AdmissibleInterval {
    /// Whether `d` lies in the interval. A closed left end is the
    /// boundary-centered length `b_e`, which classification recognizes
    /// within its dead band; lengths within [`LEFT_END_SLACK`] (relative) of
    /// it count as the end point, matching [`ad_membership`].
    pub fn contains(&self, d: f64) -> bool {
        let at_left_end = self.closed_left && (d - self.lower).abs() <= LEFT_END_SLACK * self.lower;
        !self.empty && d < self.upper && (d > self.lower || at_left_end)
    }
}

/// Computes `Ad(d_F) = [b_e, h_e) ∩ (D⁻, D⁺) ∩ {J(root) > J(v)}` for a
/// one-edge tree. The radius difference decreases along the first two
/// intervals' intersection, so the result is an interval sharing its left
/// end.
pub fn admissible_interval(t: &RootedTree, d_f: &FrontierLengths) -> Result<AdmissibleInterval> {
    if t.edges.len() != 1 {
        return Err(Error::OutOfRange("admissible intervals are defined for one-edge trees".into()));
    }
    let b = frontier_b(t, d_f)?[0];
    let h = frontier_h(t, d_f)?[0];
    let root_others = t.inputs(t.root, &[0.0], &d_f.0);
    let root_others: Vec<f64> = root_others[1..].to_vec();
    // Above the largest root side M the root polygon stays centered until
    // the edge reaches b₀ of the others; below it, until the central angle
    // sum at J = M/2 drops to 2π, i.e. sinh(d/2) = sinh(M/2)·cos(Σ_{rest} θ).
    let d_plus = b0(&root_others)?;
    let (m, rest) = split_max(&root_others);
    let sm = (m / 2.0).sinh();
    let rest_angle: f64 = rest.iter().map(|&x| ((x / 2.0).sinh() / sm).min(1.0).asin()).sum();
    let d_minus = if rest_angle >= std::f64::consts::FRAC_PI_2 {
        0.0
    } else {
        2.0 * (sm * rest_angle.cos()).asinh()
    };
    let lower = b.max(d_minus);
    let closed_left = b > d_minus;
    let window_top = h.min(d_plus);
    let radius_gap = |d: f64| -> f64 {
        let root = cyclic::classify(&t.vertex_tuple(t.root, &[d], d_f)).map(|c| c.radius);
        let leaf_vertex = t.edges[0].0;
        let leaf = cyclic::classify(&t.vertex_tuple(leaf_vertex, &[d], d_f)).map(|c| c.radius);
        match (root, leaf) {
            (Ok(a), Ok(b)) if b.is_finite() => a - b,
            _ => -1e300,
        }
    };
    let empty_at = |lo: f64| AdmissibleInterval {
        lower: lo,
        upper: lo,
        closed_left: false,
        empty: true,
        b_e: b,
        h_e: h,
        centered_window: (d_minus, d_plus),
    };
    if lower >= window_top {
        return Ok(empty_at(lower));
    }
    // Probe just inside an open left end.
    let probe = if closed_left { lower } else { lower + (window_top - lower) * 1e-12 };
    if radius_gap(probe) <= 0.0 {
        return Ok(empty_at(lower));
    }
    let top_gap = radius_gap(window_top);
    let upper = if top_gap < 0.0 { bisect(radius_gap, probe, window_top)? } else { window_top };
    Ok(AdmissibleInterval {
        lower,
        upper,
        closed_left,
        empty: false,
        b_e: b,
        h_e: h,
        centered_window: (d_minus, d_plus),
    })
}
