//! Genus-2 surfaces built from six triangles, their lifts to the plane, and
//! the comparison between injectivity and covering radius at the vertex.
//!
//! Three explicit surfaces are provided:
//!
//! * `F_α` — six equilateral triangles with angle `π/9`, so the single vertex
//!   has angle `18·π/9 = 2π`;
//! * `F_β` — four equilateral triangles and a square, all with side `d_β`,
//!   the square cut along a diagonal of length `b_β = b₀(d_β, d_β)`;
//! * `F_t` — a one-parameter deformation of `F_β` in which the square becomes
//!   a pair of triangles `(b_t, d_t, d_t)` and `(b_t, d_t, d₁(t))`, one of
//!   which is boundary-centered, producing a non-centered Delaunay edge for
//!   `t < 0`.

mod constants;
mod moduli;
mod octagon;

pub use constants::{b0_cap, constants, d1_of_r, solve_d1_of_t, Constants, TABLE_COSH_D1, TABLE_COSH_D2, TABLE_COSH_R1, TABLE_COSH_R2};
pub use moduli::{
    covering_radius, verify_inj_to_cov, GridReport, PIotaPoint, InjToCovReport, EXCEPTIONAL_DEAD_BAND,
};
pub use octagon::{
    build_surface, covering_radius_geometric, injectivity_radius, lift_sites, next_in_triangle,
    prev_in_triangle, EdgePairing, Model, OctagonSurface, SurfaceTessellation, Lift,
};
