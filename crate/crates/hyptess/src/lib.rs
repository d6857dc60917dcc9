//! Hyperbolic Voronoi/Delaunay tessellations, cyclic-polygon geometry and
//! certified lower bounds for radius-`R` defects of centered dual cells.
//!
//! The crate is organised bottom-up:
//!
//! * [`hypgeo`] — points, distances and isometries in the hyperboloid model;
//! * [`cyclic`] — classification, circumradius and defect of cyclic polygons;
//! * [`tessellation`] — Voronoi, Delaunay and centered dual complexes of a
//!   finite point set;
//! * [`surfaces`] — edge-paired octagons realising genus-2 surfaces, their
//!   lifts to the plane, and the injectivity/covering radius comparison;
//! * [`admissible`] — admissible spaces of rooted trees and the defect
//!   lower-bound algorithms;
//! * [`reference`] — reproductions of published values and numeric gates;
//! * [`svg`] — Poincaré-disk drawings of complexes.

pub mod admissible;
pub mod cyclic;
pub mod error;
pub mod hypgeo;
pub mod reference;
pub mod roots;
pub mod surfaces;
pub mod svg;
pub mod tessellation;

pub use error::{Error, Result};
