pub mod geom;
pub mod catalog;
pub mod relax;
pub mod render;
pub mod spanning;
pub mod symmetry;
pub mod topology;
pub mod triangulation;
