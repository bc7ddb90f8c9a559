mod common;

use common::{row_reduction_preserves_rank, rs};

#[test]
fn reduction_preserves_rank_symbolic() {
    for t in ["A2", "A3", "B2", "G2"] {
        let checked = row_reduction_preserves_rank(&rs(t), 10, 7, true).unwrap();
        assert!(checked >= 5, "{t}: only {checked} usable samples");
    }
}

#[test]
fn reduction_preserves_rank_integer_points() {
    for t in ["B3", "C3", "A4", "D4", "B4", "F4"] {
        row_reduction_preserves_rank(&rs(t), 20, 13, false).unwrap();
    }
}
