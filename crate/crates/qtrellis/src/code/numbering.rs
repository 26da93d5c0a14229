//! Greedy qudit ordering to shrink the trellis.

use super::StabilizerCode;
use crate::ffield::FpMatrix;
use rayon::prelude::*;

/// `log_p |V|` at a cut between `placed` and the remaining qudits:
/// `rank(S|A) + rank(S|Aᶜ) − (n−k)`.
fn cut_exponent(code: &StabilizerCode, placed: &[bool]) -> usize {
    let f = code.field();
    let restrict = |side: bool| {
        let cols: Vec<usize> = (0..code.n()).filter(|&q| placed[q] == side).collect();
        let rows: Vec<Vec<u8>> = code
            .stabilizers()
            .iter()
            .map(|s| {
                let mut r: Vec<u8> = cols.iter().map(|&q| s.x_exps()[q]).collect();
                r.extend(cols.iter().map(|&q| s.z_exps()[q]));
                r
            })
            .collect();
        FpMatrix::from_residue_rows(f, 2 * cols.len(), &rows).rank()
    };
    restrict(true) + restrict(false) - code.stabilizers().len()
}

fn greedy_from(code: &StabilizerCode, supports: &[Vec<usize>], seed: usize) -> Vec<usize> {
    let n = code.n();
    let mut placed = vec![false; n];
    // Per generator: number of its qudits already placed.
    let mut touched = vec![0usize; supports.len()];
    let mut member: Vec<Vec<usize>> = vec![Vec::new(); n];
    for (g, s) in supports.iter().enumerate() {
        for &q in s {
            member[q].push(g);
        }
    }
    let mut order = Vec::with_capacity(n);
    let place = |q: usize, placed: &mut Vec<bool>, touched: &mut Vec<usize>, order: &mut Vec<usize>| {
        placed[q] = true;
        for &g in &member[q] {
            touched[g] += 1;
        }
        order.push(q);
    };
    place(seed, &mut placed, &mut touched, &mut order);
    while order.len() < n {
        let score = |q: usize| {
            member[q]
                .iter()
                .map(|&g| {
                    if touched[g] == 0 {
                        1i64
                    } else if touched[g] + 1 == supports[g].len() {
                        -1
                    } else {
                        0
                    }
                })
                .sum::<i64>()
        };
        let free: Vec<usize> = (0..n).filter(|&q| !placed[q]).collect();
        let best = free.iter().map(|&q| score(q)).min().unwrap();
        let tied: Vec<usize> = free.into_iter().filter(|&q| score(q) == best).collect();
        let pick = if tied.len() == 1 {
            tied[0]
        } else {
            *tied
                .iter()
                .min_by_key(|&&q| {
                    placed[q] = true;
                    let e = cut_exponent(code, &placed);
                    placed[q] = false;
                    (e, q)
                })
                .unwrap()
        };
        place(pick, &mut placed, &mut touched, &mut order);
    }
    order
}

/// Greedy qudit order (1-based), never worse than the current order in total edges.
///
/// From every seed qudit, the order grows by appending the qudit that
/// activates the fewest stabilizer generators net of those it completes,
/// breaking ties by the smallest resulting layer. The seed with the fewest
/// trellis edges wins.
pub fn greedy_numbering(code: &StabilizerCode) -> Vec<usize> {
    let supports: Vec<Vec<usize>> = code
        .stabilizers()
        .iter()
        .map(|s| (0..code.n()).filter(|&q| !s.site(q).is_identity()).collect())
        .collect();
    let identity: Vec<usize> = (1..=code.n()).collect();
    let edges = |order: &[usize]| {
        let c = code.permuted(order).expect("valid permutation");
        c.profile(super::Split::Full).expect("full profile").total_edges()
    };
    let base = edges(&identity);
    let best = (0..code.n())
        .into_par_iter()
        .map(|seed| {
            let order: Vec<usize> = greedy_from(code, &supports, seed).into_iter().map(|q| q + 1).collect();
            (edges(&order), seed, order)
        })
        .min_by_key(|(e, seed, _)| (*e, *seed));
    match best {
        Some((e, _, order)) if e < base => order,
        _ => identity,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::code::{builtin, color_488, Split};

    fn full_edges(code: &StabilizerCode) -> u128 {
        code.profile(Split::Full).unwrap().total_edges()
    }

    #[test]
    fn order_is_a_permutation_and_never_worse() {
        for code in [builtin("steane", None).unwrap(), builtin("codetable_20_10_4", None).unwrap()] {
            let order = greedy_numbering(&code);
            let mut sorted = order.clone();
            sorted.sort_unstable();
            assert_eq!(sorted, (1..=code.n()).collect::<Vec<_>>());
            assert!(full_edges(&code.permuted(&order).unwrap()) <= full_edges(&code));
        }
    }

    #[test]
    fn square_octagon_d5_stays_below_the_scan_order() {
        let code = color_488(5).unwrap();
        let e = full_edges(&code.permuted(&greedy_numbering(&code)).unwrap());
        assert!(e < 9000, "{e}");
    }
}
