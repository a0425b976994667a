//! Hierarchical topometric area-graph maps (osmAG).
//!
//! An osmAG map is an OpenStreetMap XML file whose closed ways are *areas*
//! (rooms, corridors, floors, buildings) arranged in a parent/child tree and
//! whose open ways are *passages* (doors, stairs, lifts) between two leaf
//! areas. This crate parses, validates and rewrites such maps, rasterizes
//! areas to measure true walking costs, plans routes over the passage graph
//! and merges independently surveyed maps.
//!
//! ```
//! use osmag::model::{validate, MapModel};
//! use osmag::synth::MapBuilder;
//!
//! let doc = MapBuilder::new().two_room_document();
//! let model = MapModel::build(&doc).unwrap();
//! assert!(validate(&model).iter().all(|d| !d.is_error()));
//! assert_eq!(model.passages().len(), 1);
//! ```

pub mod cost;
pub mod geo;
pub mod io;
pub mod merge;
pub mod model;
pub mod planner;
pub mod raster;
pub mod render;
pub mod synth;

use thiserror::Error;

/// Any failure while loading a map.
#[derive(Debug, Error)]
pub enum Error {
    #[error(transparent)]
    Parse(#[from] io::ParseError),
    #[error(transparent)]
    Model(#[from] model::ModelError),
}
