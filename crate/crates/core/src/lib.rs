pub mod classes;
pub mod conformal;
pub mod connection;
pub mod error;
pub mod fundamental;
pub mod linalg;
pub mod nijenhuis;
pub mod report;
pub mod scene;
pub mod structure;
pub mod tensor;
pub mod torsion_class;
pub mod validation;
