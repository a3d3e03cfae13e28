//! Disk patterns with prescribed dihedral angles: realization, layout,
//! resistor networks, vertex extremal length, and uniformization experiments.
//!
//! A disk pattern is a collection of closed disks whose contact combinatorics
//! follow the one-skeleton of a disk triangulation and whose pairwise
//! intersection angles match a prescribed function `theta` on the edges, with
//! `0 <= theta <= pi/2` (0 = tangency, pi/2 = orthogonality). This crate
//! realizes finite patterns in the euclidean and hyperbolic planes, lays them
//! out, derives the associated conductance networks and harmonic machinery,
//! classifies triangulation graphs as parabolic or hyperbolic through vertex
//! extremal length, and runs a finite-depth deformation-rigidity experiment.

pub mod complex;
pub mod generators;
pub mod geom;
pub mod layout;
pub mod linalg;
pub mod network;
pub mod solver;
pub mod specfile;
pub mod svg;
pub mod uniformize;
pub mod vel;
