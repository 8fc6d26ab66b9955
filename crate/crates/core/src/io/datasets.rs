//! Case-study inputs compiled into the binary.

/// ATM model: 21 classes, 27 relations.
pub const ATM_MODEL: &str = include_str!("../../data/atm.model");
/// Reference list of 28 ATM cycles.
pub const ATM_CYCLES: &str = include_str!("../../data/atm.cycles");
/// Reference ATM edge weights.
pub const ATM_WEIGHTS: &str = include_str!("../../data/atm.weights");
/// 21-class dependency matrix.
pub const BRIAND_MATRIX: &str = include_str!("../../data/briand.matrix");
/// Coupling measures for the matrix's strongly connected block.
pub const BRIAND_COUPLING: &str = include_str!("../../data/briand.coupling");
/// Reference weights for the six cost functions (`w1`..`w6`).
pub const BRIAND_WEIGHTS: &str = include_str!("../../data/briand.weights");

/// `(name, contents)` for every embedded file.
pub const ALL: [(&str, &str); 6] = [
    ("atm.model", ATM_MODEL),
    ("atm.cycles", ATM_CYCLES),
    ("atm.weights", ATM_WEIGHTS),
    ("briand.matrix", BRIAND_MATRIX),
    ("briand.coupling", BRIAND_COUPLING),
    ("briand.weights", BRIAND_WEIGHTS),
];

pub fn by_name(name: &str) -> Option<&'static str> {
    ALL.iter().find(|(n, _)| *n == name).map(|(_, text)| *text)
}
