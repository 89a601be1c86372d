//! Circles `g . P^1(Q_p)` and their interaction with the limit set, measured
//! at finite depth. Non-membership comes with an exit edge; membership only
//! holds to the stated depth.

mod census;
mod circle;
mod hausdorff;
mod projection;
mod stabilizer;
mod thickness;

pub use census::{
    circle_limit_census, circle_limit_census_at, frontier_size, max_census_depth, rf_membership, Census, ExitEdge, Ray, RfMembership, Verdict,
    CENSUS_LEAF_CAP, RAY_RECORD_CAP,
};
pub use circle::{in_h, Circle};
pub use hausdorff::{hausdorff_circle_distance, HausdorffDistance, DEFAULT_FRONTIER_CAP};
pub use projection::{project_subtree, Projection};
pub use stabilizer::{classify_orbit, gamma_c_v, stabilizer_search, OrbitCase, OrbitReport, EVIDENCE_NOTE};
pub use thickness::{polybound_property, thickness_sample, unipotent, PolyBound, ShellWitness, ThicknessWitness};
