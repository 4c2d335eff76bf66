pub mod fields;
pub mod linalg;
pub mod quaternion;
pub mod multilinear;
pub mod solvers;
pub mod oracle;
pub mod suite;
pub mod cli;
