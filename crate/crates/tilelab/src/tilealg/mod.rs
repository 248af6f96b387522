//! Tile classification and selection: the cluster/separated/zero split, the
//! F-mass and mass gradings, maximal trees with their star-foliation, and
//! the set-resolution families tying tiles to the regularization of F.

mod resolution;
mod trees;
mod universe;

pub use resolution::{coverage_gap, set_resolution, KFamilies, SetResolution};
pub use trees::{
    foliate_universe, star_foliation, top_overlap, total_length, tree_decompose,
    tree_min_adjoint_cells, TreeFamily,
};
pub use universe::{
    classify_tiles, cluster_constant, f_mass_partition, f_mass_predicate, mass, mass_class,
    mass_partition, TileClass, TileInfo, TileUniverse, UniverseOpts,
};
