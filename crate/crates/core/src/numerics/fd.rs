//! Five-point central finite differences on uniformly sampled complex data.

use crate::C64;

/// First derivative at index i (2 <= i < n-2), spacing h, O(h^4).
pub fn fd5_first(vals: &[C64], i: usize, h: f64) -> C64 {
    (vals[i - 2] - vals[i - 1] * 8.0 + vals[i + 1] * 8.0 - vals[i + 2]) / (12.0 * h)
}

/// Second derivative at index i (2 <= i < n-2), spacing h, O(h^4).
pub fn fd5_second(vals: &[C64], i: usize, h: f64) -> C64 {
    (-vals[i - 2] + vals[i - 1] * 16.0 - vals[i] * 30.0 + vals[i + 1] * 16.0 - vals[i + 2])
        / (12.0 * h * h)
}

/// Derivatives along a straight complex path with direction `dir` per unit of
/// the real sampling parameter: d/dzeta = (1/dir) d/ds.
pub fn fd5_path(vals: &[C64], i: usize, h: f64, dir: C64) -> (C64, C64) {
    let d1 = fd5_first(vals, i, h) / dir;
    let d2 = fd5_second(vals, i, h) / (dir * dir);
    (d1, d2)
}
