//! Structure analysis and data exports: cycle decompositions, subgroup
//! lattices, semiprime/totient tables, ray plot data, key-pair lattices,
//! and the instrumented ray benchmarks.

pub mod bench;
pub mod cycles;
pub mod subgroups;
pub mod tables;

pub use bench::{bench_ray, linear_fit, parse_cases_csv, write_bench_csv, BenchCase, BenchRecord, ScalingFit};
pub use cycles::{cycle_decomposition, CycleDecomposition, CycleStructure};
pub use subgroups::{subgroup_enumeration, Subgroup, SubgroupSet};
pub use tables::{
    lattice_export, ray_plot_export, semiprime_table, write_lattice_csv, write_rays_csv,
    write_scatter_csv, write_semiprime_table_csv, RayPlotData, SemiprimeRow,
    DEFAULT_RAY_PRIMES,
};
