//! Built-in qubit code families.

use super::{parse_code_file, CodeError, StabilizerCode};
use crate::ffield::Field;
use crate::pauli::{parse_pauli, PauliString};

const STEANE_H: [[u8; 7]; 3] = [[1, 1, 0, 1, 1, 0, 0], [0, 1, 1, 0, 1, 1, 0], [0, 0, 0, 1, 1, 1, 1]];

const CODETABLE_20_3_6: &str = include_str!("../../codes/codetable_20_3_6.txt");
const CODETABLE_20_4_6: &str = include_str!("../../codes/codetable_20_4_6.txt");
const CODETABLE_20_10_4: &str = include_str!("../../codes/codetable_20_10_4.txt");
const CODETABLE_20_13_3: &str = include_str!("../../codes/codetable_20_13_3.txt");

/// Names accepted by [`builtin`]. Families taking a distance are marked `(d)`.
pub fn builtin_names() -> &'static [&'static str] {
    &[
        "five_one_one",
        "five_one_three",
        "steane",
        "steane_level2",
        "rotated_surface(d)",
        "color_666(d)",
        "color_488(d)",
        "codetable_20_3_6",
        "codetable_20_4_6",
        "codetable_20_10_4",
        "codetable_20_13_3",
    ]
}

/// Looks up a built-in code. `distance` is required by the distance families
/// and ignored otherwise.
pub fn builtin(name: &str, distance: Option<usize>) -> Result<StabilizerCode, CodeError> {
    let need_d = || distance.ok_or(CodeError::InvalidDistance(0));
    match name {
        "five_one_one" => paulis(&["ZXIII", "XZXII", "IXZXI", "IIXZX"]),
        "five_one_three" => paulis(&["XZZXI", "IXZZX", "XIXZZ", "ZXIXZ"]),
        "steane" => css_from_faces(7, &faces_of(&STEANE_H), &faces_of(&STEANE_H)),
        "steane_level2" => steane_level2(),
        "rotated_surface" => rotated_surface(need_d()?),
        "color_666" => color_666(need_d()?),
        "color_488" => color_488(need_d()?),
        "codetable_20_3_6" => parse_code_file(CODETABLE_20_3_6),
        "codetable_20_4_6" => parse_code_file(CODETABLE_20_4_6),
        "codetable_20_10_4" => parse_code_file(CODETABLE_20_10_4),
        "codetable_20_13_3" => parse_code_file(CODETABLE_20_13_3),
        other => Err(CodeError::UnknownCode(other.to_string())),
    }
}

fn paulis(rows: &[&str]) -> Result<StabilizerCode, CodeError> {
    let gens = rows.iter().map(|s| parse_pauli(Field::binary(), s)).collect::<Result<Vec<_>, _>>()?;
    StabilizerCode::new(gens, None)
}

fn faces_of<const N: usize>(h: &[[u8; N]]) -> Vec<Vec<usize>> {
    h.iter().map(|row| (0..N).filter(|&j| row[j] == 1).collect()).collect()
}

fn support_string(n: usize, support: &[usize], z: bool) -> PauliString {
    let mut v = vec![0u8; n];
    for &q in support {
        v[q] = 1;
    }
    let zero = vec![0u8; n];
    if z {
        PauliString::from_exponents(Field::binary(), zero, v).unwrap()
    } else {
        PauliString::from_exponents(Field::binary(), v, zero).unwrap()
    }
}

/// CSS code with X-checks on `x_faces` followed by Z-checks on `z_faces` (0-based supports).
fn css_from_faces(n: usize, x_faces: &[Vec<usize>], z_faces: &[Vec<usize>]) -> Result<StabilizerCode, CodeError> {
    let mut gens: Vec<PauliString> = x_faces.iter().map(|f| support_string(n, f, false)).collect();
    gens.extend(z_faces.iter().map(|f| support_string(n, f, true)));
    StabilizerCode::new(gens, None)
}

fn check_distance(d: usize) -> Result<(), CodeError> {
    if d < 3 || d % 2 == 0 {
        return Err(CodeError::InvalidDistance(d));
    }
    Ok(())
}

/// Supports of the level-2 concatenated Steane checks on 49 qubits, qubit
/// `7·block + inner`: first the 21 inner checks `I ⊗ H`, then the three outer
/// checks `H ⊗ 1⃗`.
pub fn steane_level2_parts() -> (Vec<Vec<usize>>, Vec<Vec<usize>>) {
    let h = faces_of(&STEANE_H);
    let inner = (0..7).flat_map(|b| h.iter().map(move |f| f.iter().map(|&j| 7 * b + j).collect())).collect();
    let outer = h.iter().map(|f| f.iter().flat_map(|&b| (0..7).map(move |j| 7 * b + j)).collect()).collect();
    (inner, outer)
}

fn steane_level2() -> Result<StabilizerCode, CodeError> {
    let (inner, outer) = steane_level2_parts();
    let mut faces = inner;
    faces.extend(outer);
    css_from_faces(49, &faces, &faces)
}

/// Rotated surface code `[[d², 1, d]]`.
///
/// Qubit `(x, y)` on the `d × d` grid (origin bottom-left) gets label
/// `d·(d−1−y) + x + 1`, so labels run row by row from the top-left corner.
/// The plaquette with lower-left corner `(fx, fy)` is Z-type when `fx + fy` is
/// even. Weight-two plaquettes are kept on the left and right edges when
/// Z-type and on the top and bottom edges when X-type.
pub fn rotated_surface(d: usize) -> Result<StabilizerCode, CodeError> {
    check_distance(d)?;
    let di = d as i64;
    let label = |x: i64, y: i64| (di * (di - 1 - y) + x) as usize;
    let mut xf = Vec::new();
    let mut zf = Vec::new();
    for fx in -1..di {
        for fy in -1..di {
            let mut qs: Vec<usize> = [(fx, fy), (fx + 1, fy), (fx, fy + 1), (fx + 1, fy + 1)]
                .iter()
                .filter(|(x, y)| (0..di).contains(x) && (0..di).contains(y))
                .map(|&(x, y)| label(x, y))
                .collect();
            qs.sort_unstable();
            let z = (fx + fy).rem_euclid(2) == 0;
            let inner_x = (0..di - 1).contains(&fx);
            let inner_y = (0..di - 1).contains(&fy);
            let keep = (inner_x && inner_y)
                || (inner_y && (fx == -1 || fx == di - 1) && z)
                || (inner_x && (fy == -1 || fy == di - 1) && !z);
            if keep {
                if z { &mut zf } else { &mut xf }.push(qs);
            }
        }
    }
    xf.sort();
    zf.sort();
    css_from_faces(d * d, &xf, &zf)
}

/// Faces of the triangular 6.6.6 color code of distance `d`, with `(3d²+1)/4` qubits.
fn color_666_faces(d: usize) -> (usize, Vec<Vec<usize>>) {
    // Points (a, b) of a triangular patch; those with a − b ≡ 1 (mod 3) are
    // face centres, the rest are qubits numbered in scan order.
    let l = 3 * (d as i64 - 1) / 2;
    let pts: Vec<(i64, i64)> = (0..=l).flat_map(|a| (0..=l - a).map(move |b| (a, b))).collect();
    let is_centre = |&(a, b): &(i64, i64)| (a - b).rem_euclid(3) == 1;
    let qubits: Vec<(i64, i64)> = pts.iter().copied().filter(|p| !is_centre(p)).collect();
    let index = |p: (i64, i64)| qubits.iter().position(|&q| q == p);
    let faces = pts
        .iter()
        .filter(|p| is_centre(p))
        .map(|&(a, b)| {
            let mut f: Vec<usize> = [(1, 0), (-1, 0), (0, 1), (0, -1), (1, -1), (-1, 1)]
                .iter()
                .filter_map(|&(da, db)| index((a + da, b + db)))
                .collect();
            f.sort_unstable();
            f
        })
        .collect();
    (qubits.len(), faces)
}

/// Triangular 6.6.6 color code `[[(3d²+1)/4, 1, d]]` in scan order.
pub fn color_666(d: usize) -> Result<StabilizerCode, CodeError> {
    check_distance(d)?;
    let (n, faces) = color_666_faces(d);
    css_from_faces(n, &faces, &faces)
}

/// Triangular 4.8.8 color code `[[(d²−1)/2 + d, 1, d]]` in scan order.
pub fn color_488(d: usize) -> Result<StabilizerCode, CodeError> {
    check_distance(d)?;
    let (n, faces) = color_488_faces(d);
    css_from_faces(n, &faces, &faces)
}

/// Faces of the triangular 4.8.8 patch of distance `d`.
///
/// Qubits sit on even points of a `(4d−4) × (2d−2)` half-grid cut by the lines
/// `y = x` and `x + y = 4d − 2`; faces are centred on odd points. A centre
/// with a diagonal neighbour is a square, otherwise an octagon (halved on the
/// bottom row). Qubits are numbered bottom row first, left to right.
fn color_488_faces(d: usize) -> (usize, Vec<Vec<usize>>) {
    let d = d as i64;
    let (w, h) = (4 * d - 4, 2 * d - 2);
    let mut qubits = Vec::new();
    for y in (0..=h).step_by(2) {
        for x in (y..=w.min(4 * d - 2 - y)).step_by(2) {
            if ((x / 2) % 4 >= 2) == matches!((y / 2) % 4, 1 | 2) {
                qubits.push((x, y));
            }
        }
    }
    let index = |p: (i64, i64)| qubits.iter().position(|&q| q == p);
    let mut faces = Vec::new();
    for y in 0..=h {
        for x in 0..=w {
            let inside = (y <= x && x + y <= 4 * d - 2) || (y == x + 2 && y % 8 == 3) || (x + y == 4 * d && y % 8 == 7);
            let centre = (x % 4 == 1 && y % 4 == 3) || (y == 0 && x % 8 == 5);
            if !inside || !centre {
                continue;
            }
            let square: Vec<usize> = [(-1, 1), (1, 1), (-1, -1), (1, -1)]
                .iter()
                .filter_map(|&(dx, dy)| index((x + dx, y + dy)))
                .collect();
            let mut f = if !square.is_empty() {
                square
            } else if y == 0 {
                [(-1, 2), (1, 2), (-3, 0), (3, 0)].iter().filter_map(|&(dx, dy)| index((x + dx, dy))).collect()
            } else {
                [(-1, 3), (1, 3), (-3, 1), (3, 1), (-3, -1), (3, -1), (-1, -3), (1, -3)]
                    .iter()
                    .filter_map(|&(dx, dy)| index((x + dx, y + dy)))
                    .collect()
            };
            f.sort_unstable();
            if !f.is_empty() {
                faces.push(f);
            }
        }
    }
    faces.sort();
    (qubits.len(), faces)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn unknown_names_and_bad_distances() {
        assert_eq!(builtin("toric", None), Err(CodeError::UnknownCode("toric".into())));
        assert_eq!(rotated_surface(4), Err(CodeError::InvalidDistance(4)));
        assert_eq!(color_666(1), Err(CodeError::InvalidDistance(1)));
    }

    #[test]
    fn rotated_surface_d3_layout() {
        let c = rotated_surface(3).unwrap();
        assert_eq!((c.n(), c.k()), (9, 1));
        let x = c.stabilizers().iter().filter(|s| s.is_x_type()).count();
        assert_eq!(x, 4);
        assert_eq!(c.stabilizers().len() - x, 4);
    }

    #[test]
    fn rotated_surface_d5_boundary_checks() {
        let c = rotated_surface(5).unwrap();
        let has = |s: &str| c.stabilizers().iter().any(|g| g.to_string() == s);
        // X on qubits 2,3 and Z on qubits 1,6.
        assert!(has("IXXIIIIIIIIIIIIIIIIIIIIII"));
        assert!(has("ZIIIIZIIIIIIIIIIIIIIIIIII"));
    }

    #[test]
    fn sizes_of_color_codes() {
        for (d, n) in [(3, 7), (5, 19), (7, 37)] {
            let c = color_666(d).unwrap();
            assert_eq!((c.n(), c.k()), (n, 1));
        }
        for (d, n, octagons) in [(3, 7, 0), (5, 17, 1), (7, 31, 3), (9, 49, 6)] {
            let c = color_488(d).unwrap();
            assert_eq!((c.n(), c.k()), (n, 1));
            let weights: Vec<usize> = c.stabilizers().iter().map(|s| s.weight()).collect();
            assert!(weights.iter().all(|&w| w == 4 || w == 8));
            assert_eq!(weights.iter().filter(|&&w| w == 8).count(), 2 * octagons);
        }
    }

    #[test]
    fn level2_steane_parameters() {
        let c = builtin("steane_level2", None).unwrap();
        assert_eq!((c.n(), c.k()), (49, 1));
        assert!(c.is_css());
    }

    #[test]
    fn codetable_codes_parse() {
        for (name, k, m) in [
            ("codetable_20_3_6", 3, 17),
            ("codetable_20_4_6", 4, 16),
            ("codetable_20_10_4", 10, 10),
            ("codetable_20_13_3", 13, 7),
        ] {
            let c = builtin(name, None).unwrap();
            assert_eq!((c.n(), c.k(), c.stabilizers().len()), (20, k, m), "{name}");
        }
    }
}
