pub mod build;
pub mod cells;
pub mod degree;
pub mod univariate;

pub use build::{
    build_partition, build_partition_with, round_ratio, BuildOptions, PartitionPolynomial,
    DEFAULT_BUDGET, MAX_ROUNDS,
};
pub use cells::{cell_census, classify, crossing_census, max_open_population, CellLabel};
pub use degree::{plan_degree, plan_degree_default, round_degree, DegreePlan, Regime};
