//! Instances shipped with the crate.

use crate::geometry::{Instance, Mode};
use crate::io::{parse_instance, parse_layout, LayoutFile};

/// Ten fixed-orientation pieces in a box of at most 9 x 9.
pub const TABLE1_JSON: &str = include_str!("../fixtures/table1.json");
/// Four pieces with rotation and mirroring in a box of at most 10 x 10.
pub const TABLE2_JSON: &str = include_str!("../fixtures/table2.json");

/// Exhaustive-search optimum for [`table1`], with its witness layout.
pub const TABLE1_OPTIMUM_JSON: &str = include_str!("../fixtures/table1.optimum.json");
/// Exhaustive-search optimum for [`table2`], with its witness layout.
pub const TABLE2_OPTIMUM_JSON: &str = include_str!("../fixtures/table2.optimum.json");

pub fn table1() -> Instance {
    parse_instance(TABLE1_JSON).expect("shipped fixture parses")
}

pub fn table2() -> Instance {
    parse_instance(TABLE2_JSON).expect("shipped fixture parses")
}

pub fn table1_optimum() -> LayoutFile {
    parse_layout(TABLE1_OPTIMUM_JSON).expect("shipped fixture parses")
}

pub fn table2_optimum() -> LayoutFile {
    parse_layout(TABLE2_OPTIMUM_JSON).expect("shipped fixture parses")
}

/// Benchmark family: the first `n` pieces of both tables concatenated,
/// in rotation mode with 10 x 10 caps. `None` when `n` exceeds the family.
pub fn bench_family(n: usize) -> Option<Instance> {
    let mut sizes: Vec<[i32; 4]> = table1().pieces.iter().map(|p| p.sizes()).collect();
    sizes.extend(table2().pieces.iter().map(|p| p.sizes()));
    if n == 0 || n > sizes.len() {
        return None;
    }
    Some(Instance::new(&sizes[..n], 10, 10, Mode::RotMirror).expect("fixture sizes are valid"))
}

pub fn bench_family_len() -> usize {
    table1().pieces.len() + table2().pieces.len()
}
