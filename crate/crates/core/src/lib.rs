//! Covering a convex polygon with two congruent disks.
//!
//! [`decision::decide`] answers whether two disks of a given radius cover a
//! convex polygon in linear time, [`optimizer::solve`] finds the smallest such
//! radius, and [`oracle`] holds slow reference implementations used to check
//! both.

pub mod decision;
pub mod geom;
pub mod hull;
pub mod io;
pub mod mec;
pub mod optimizer;
pub mod oracle;
