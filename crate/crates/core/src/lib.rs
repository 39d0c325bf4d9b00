pub mod acs;
pub mod cohomology;
pub mod covering;
pub mod exactla;
pub mod extension;
pub mod faces;
pub mod graph;
pub mod models;
pub mod pipeline;
