pub mod fcl;
pub mod linguistic;
pub mod partition_builder;
pub mod nlu;
pub mod alerts;
pub mod cli;
