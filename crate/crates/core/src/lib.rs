pub mod geom;
pub mod mesh;
pub mod xsection;
pub mod halfplane_det;
pub mod raysweep2d;
pub mod oracles;
pub mod halfplane_rand;
pub mod generators;
pub mod carve3d;
pub mod report;
pub mod svg;
pub mod cli;
