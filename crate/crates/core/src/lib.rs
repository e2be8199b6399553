pub mod error;
pub mod linalg;
pub mod point;
pub mod polytope;
pub mod simplex;
pub mod mesh;
mod frame;
mod refine;
pub mod polyhedron;
pub mod triangulation;
pub mod zmap;
pub mod mv;
pub mod squeeze;
pub mod cover;
pub mod chain;
pub mod json;
