//! Bundled example graphs and scripts.

use crate::graph::{ProofGraph, Vertex};

/// The 17-step field-theory proof in `.apg` form.
pub const FIG6_APG: &str = include_str!("../fixtures/fig6.apg");
/// The six-step example with one doubly-flagged arc family, renumbered 1..6.
pub const FIG2_APG: &str = include_str!("../fixtures/fig2.apg");
/// The 17-step proof as written originally.
pub const FIG5_MIZ: &str = include_str!("../fixtures/fig5.miz-lite");
/// The same proof relinearized to maximize `then` steps.
pub const FIG8_MIZ: &str = include_str!("../fixtures/fig8.miz-lite");
/// Seven-step graph used to illustrate script generation.
pub const FIG11_APG: &str = include_str!("../fixtures/fig11.apg");
/// The listing the generator is expected to produce for [`FIG11_APG`].
pub const FIG11_LISTING: &str = include_str!("../fixtures/fig11.miz-lite");

/// The order of the relinearized 17-step proof.
pub const TAU_FIG8: [Vertex; 17] = [1, 3, 5, 7, 9, 11, 13, 6, 2, 10, 15, 4, 8, 12, 14, 16, 17];

pub const FIG6_REFS: [(Vertex, Vertex); 18] = [
    (3, 5),
    (5, 7),
    (7, 9),
    (9, 11),
    (11, 13),
    (13, 15),
    (15, 17),
    (16, 17),
    (14, 16),
    (12, 14),
    (8, 12),
    (4, 8),
    (10, 15),
    (6, 10),
    (2, 10),
    (2, 12),
    (2, 15),
    (2, 16),
];

pub fn fig6() -> ProofGraph {
    let vars: Vec<_> = (2..=16).map(|k| (1, k)).collect();
    ProofGraph::build(17, &FIG6_REFS, &vars).expect("fixture is a DAG")
}

pub fn fig2() -> ProofGraph {
    ProofGraph::build(
        6,
        &[(1, 5), (2, 5), (3, 4), (4, 6), (5, 6)],
        &[(1, 2), (1, 3), (1, 4), (1, 5)],
    )
    .expect("fixture is a DAG")
}

/// Vertices a..g as 1..7, identity order.
pub fn fig11() -> ProofGraph {
    ProofGraph::build(
        7,
        &[
            (1, 4),
            (3, 5),
            (3, 6),
            (3, 7),
            (5, 6),
            (4, 6),
            (6, 7),
            (4, 7),
        ],
        &[(1, 6), (2, 4), (2, 5)],
    )
    .expect("fixture is a DAG")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::frontend::apg;

    #[test]
    fn files_match_builders() {
        assert_eq!(apg::parse_apg(FIG6_APG).unwrap(), fig6());
        assert_eq!(apg::parse_apg(FIG2_APG).unwrap(), fig2());
        assert_eq!(apg::parse_apg(FIG11_APG).unwrap(), fig11());
    }

    #[test]
    fn canonical_files_are_byte_stable() {
        assert_eq!(apg::emit_apg(&fig6()), FIG6_APG);
        assert_eq!(apg::emit_apg(&fig2()), FIG2_APG);
    }
}
