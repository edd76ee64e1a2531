//! Synthetic gesture generation, previous-segmentation corruption and
//! RICE / NoG evaluation for interactive image segmentation.

pub mod corruption;
pub mod geometry;
pub mod gestures;
pub mod harness;
pub mod maskops;
pub mod metrics;
pub mod pipeline;
pub mod rng;
pub mod sample;
mod scalar;

pub use scalar::Scalar;

/// Default scalar precision.
pub type Real = f64;

pub type Point = geometry::Point<f64>;
pub type PointF32 = geometry::Point<f32>;
pub type DistanceMap = maskops::DistanceMap<f64>;
pub type DistanceMapF32 = maskops::DistanceMap<f32>;
pub type EvalRecord = metrics::EvalRecord<f64>;
pub type EvalRecordF32 = metrics::EvalRecord<f32>;
