//! Named triples used by the examples, tests and benchmarks.

use crate::triple::HadamardTriple;

fn build(r: &[Vec<i64>], b: &[[i64; 2]], l: &[[i64; 2]]) -> HadamardTriple {
    HadamardTriple::from_rows(r, b.iter().map(|v| v.to_vec()).collect(), l.iter().map(|v| v.to_vec()).collect())
        .expect("preset triple is well formed")
}

fn build_1d(r: i64, b: &[i64], l: &[i64]) -> HadamardTriple {
    HadamardTriple::from_rows(&[vec![r]], b.iter().map(|&v| vec![v]).collect(), l.iter().map(|&v| vec![v]).collect())
        .expect("preset triple is well formed")
}

/// `R = [[4,0],[1,4]]`, `B = {0,1} x {0,3}`, `L = {0,2} x {0,2}`.
pub fn planar_example() -> HadamardTriple {
    build(
        &[vec![4, 0], vec![1, 4]],
        &[[0, 0], [0, 3], [1, 0], [1, 3]],
        &[[0, 0], [2, 0], [0, 2], [2, 2]],
    )
}

/// Same digits with the diagonal matrix `4 I`; the measure is a product.
pub fn product_system() -> HadamardTriple {
    build(
        &[vec![4, 0], vec![0, 4]],
        &[[0, 0], [0, 3], [1, 0], [1, 3]],
        &[[0, 0], [2, 0], [0, 2], [2, 2]],
    )
}

/// `R = 4`, `B = {0,1}`, `L = {0,2}`.
pub fn quarter_cantor() -> HadamardTriple {
    build_1d(4, &[0, 1], &[0, 2])
}

/// `R = 4`, `B = {0,3}`, `L = {0,2}`.
pub fn three_quarter_cantor() -> HadamardTriple {
    build_1d(4, &[0, 3], &[0, 2])
}

/// `R = 3`, `B = {0,2}`, `L = {0,1}`: not a Hadamard triple.
pub fn ternary_control() -> HadamardTriple {
    build_1d(3, &[0, 2], &[0, 1])
}

/// Looks a preset up by name.
pub fn by_name(name: &str) -> Option<HadamardTriple> {
    Some(match name {
        "planar_example" => planar_example(),
        "product_system" => product_system(),
        "quarter_cantor" => quarter_cantor(),
        "three_quarter_cantor" => three_quarter_cantor(),
        "ternary_control" => ternary_control(),
        _ => return None,
    })
}

pub const NAMES: [&str; 5] = [
    "planar_example",
    "product_system",
    "quarter_cantor",
    "three_quarter_cantor",
    "ternary_control",
];

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn validity() {
        for name in NAMES {
            let t = by_name(name).unwrap();
            assert_eq!(t.is_valid(), name != "ternary_control", "{name}");
        }
        assert!(by_name("nope").is_none());
    }
}
