pub mod arith;
pub mod error;
pub mod logcombo;
pub mod padic;
pub mod cmfield;
pub mod quadfield;
pub mod tmatrix;
pub mod localdensity;
pub mod bm;
pub mod sweep;
pub mod applications;
pub mod cache;
pub mod selfcheck;
pub mod cli;
