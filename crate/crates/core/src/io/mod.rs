//! File formats: JSON group definitions and orbit records, CSV exports.

mod csv;
mod group_file;
mod orbit_record;

pub use csv::{history_csv, parse_trajectory_csv, trajectory_csv};
pub use group_file::{BoundaryGenerators, GroupFile, SpatialGenerator, DEFAULT_CLOSURE_CAP};
pub use orbit_record::{GroupRef, OrbitRecord};
