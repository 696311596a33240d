pub mod analysis;
pub mod fracsolver;
pub mod model;
