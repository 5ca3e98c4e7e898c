//! Small hand-built instances.

use crate::graph::{parse_str, WeightMode, WeightedGraph};

/// Nine vertices, twenty edges, `w(v_i) = 10 i` except `w(v_3) = 3`.
///
/// Strong configuration checking started from `v2` cycles between
/// `{v2, v3, v7, v9}` and `{v1, v3, v8, v9}` (both weigh 183) and never
/// reaches the optimum `{v3, v5, v6, v8}` (193).
pub const DEAD_LOOP_WCLQ: &str = "\
c cycling example for configuration checking
p edge 9 20
v 1 10
v 2 20
v 3 3
v 4 40
v 5 50
v 6 60
v 7 70
v 8 80
v 9 90
e 3 4
e 3 1
e 2 3
e 3 6
e 3 8
e 3 9
e 9 8
e 4 7
e 4 5
e 7 5
e 3 5
e 5 8
e 1 8
e 6 8
e 2 9
e 2 7
e 1 9
e 6 5
e 7 9
e 3 7
";

pub fn dead_loop() -> WeightedGraph {
    parse_str(DEAD_LOOP_WCLQ, WeightMode::FromFile)
        .expect("fixture parses")
        .0
}
