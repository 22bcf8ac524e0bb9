//! Instance generators: complete trees, the chunk family, the layered
//! lower-bound trees with their adversarial schedules, and the skeleton and
//! ruling-set utilities.

mod chunks;
mod complete;
mod lower_bound;
mod schedule;
mod skeleton;
mod subsets;
mod tree;

pub use chunks::{
    build_chunk_instance, build_chunk_instance_unchecked, chunk_choice_count, chunk_node_count,
    enumerate_choices, ChunkChoice, ChunkInstance, ChunkLayout,
};
pub use complete::{complete_tree, CompleteKind};
pub use lower_bound::{build_lb_rooted, build_lb_unrooted, lb_rooted_count, lb_unrooted_count};
pub(crate) use schedule::sample_with;
pub use schedule::{sample_schedule, sample_schedule_rooted, sample_schedule_unrooted, Schedule};
pub use skeleton::{path_ruling_set, skeleton_tree, RulingSet};
pub use subsets::{node_subsets, NodeSubsets};
pub use tree::{
    Annotations, CorePath, Layer, LowerBoundMeta, Tree, TreeError, TreeKind,
};
