//! Fidelity distances between circuit outputs and what is built on them.

mod ari;
mod distance;
mod kmedoids;
mod mds;

pub use ari::adjusted_rand_index;
pub use distance::{
    distance_matrix_exact, distance_matrix_shots, ground_state_fidelity, shot_fidelity,
    DistanceMatrix,
};
pub use kmedoids::{kmedoids, ClusteringResult, Trial, MAX_SWEEPS};
pub use mds::{mds_embed, Embedding};
