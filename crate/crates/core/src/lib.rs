//! Rank-k graph modeling and truncated operator verification.
//!
//! The crate has two halves. The combinatorial half models higher-rank
//! graphs: a colored skeleton, a factorization table pairing bicolored
//! paths, normal forms and path rewriting, and a text file format. The
//! analytic half builds finite truncations of the operators attached to a
//! specific rank-2 graph with six vertices and verifies the defining
//! relations, the Cuntz-Krieger relations, and the parameter limit that
//! connects the deformed generators to the graph operators.

pub mod ckverify;
pub mod degree;
pub mod error;
pub mod factorization;
pub mod graded;
pub mod path;
pub mod qdeform;
pub mod report;
pub mod skeleton;
pub mod sparse;
pub mod su3;
pub mod textfmt;

pub use ckverify::{
    check_action_oracle, check_ck, check_gauge, check_hat_identities, check_incidence,
    check_relation_list, check_wold, default_ck_degrees, edge_operators, su3_verify,
    vertex_projections, wold_basis, CKAssignment, HatMap, WoldIndex,
};
pub use degree::DegreeVector;
pub use error::{KgError, Result};
pub use factorization::{FactorizationSquare, FactorizationTable, KGraph};
pub use graded::{elementary, ElementaryOps, GradedOperator, TruncationParams};
pub use path::{check_confluence, enumerate_paths, Path};
pub use qdeform::{
    c_gen, frt_residuals, hat_ops, lambda_c_gen, lambda_rep, limit_letter, limit_rate,
    series_check, xi, GeneratorTable, LimitFit,
};
pub use report::{Check, ReportEnvelope, Status, VerificationReport};
pub use skeleton::{Edge, IntMatrix, Skeleton, VertexId};
pub use sparse::SparseMatrix;
