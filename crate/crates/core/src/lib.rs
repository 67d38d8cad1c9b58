//! Geometry, mobility, channel and analytic kernels for air-to-ground CoMP
//! networks in which each ground user is served jointly by the three UAVs at
//! the corners of a Poisson-Delaunay triangle.
//!
//! The crate is `no_std` (it needs `alloc`). Everything here is a pure
//! function of its inputs and of an explicit random stream, so the
//! Monte-Carlo harness in the companion crate can run trials on any number of
//! threads and still reproduce results bit for bit.
//!
//! All quantities are SI: metres, seconds, metres per second and points per
//! square metre.

#![no_std]

extern crate alloc;

pub mod analytic;
pub mod channel;
mod error;
pub mod geometry;
mod math;
pub mod mobility;
pub mod point_process;
pub mod special;
pub mod triangulation;

pub use error::{Error, Result};
pub use geometry::Point;
