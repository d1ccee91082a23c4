//! Fractional upper bound for set packing.
//!
//! Solves `max sum x_j  s.t.  sum_{j : i in S_j} x_j <= 1,  x >= 0` with a dense
//! primal simplex and turns the final dual into a certified bound: dual
//! values `y` are rescaled until every set is covered, so the reported value
//! is a valid upper bound even when floating-point error leaves the dual
//! slightly infeasible.

/// Returns an upper bound on the maximum number of pairwise disjoint sets,
/// or `None` if the simplex did not converge within `max_pivots`.
///
/// `sets` index into `0..universe`; empty sets are not allowed.
pub fn packing_upper_bound(sets: &[&[usize]], universe: usize, max_pivots: usize) -> Option<f64> {
    if sets.is_empty() {
        return Some(0.0);
    }
    // Compact the universe to elements that occur.
    let mut row_of = vec![usize::MAX; universe];
    let mut rows = 0;
    for s in sets {
        for &e in *s {
            if row_of[e] == usize::MAX {
                row_of[e] = rows;
                rows += 1;
            }
        }
    }
    let cols = sets.len();
    let width = cols + rows + 1; // structural, slack, rhs
    let mut tab = vec![0.0f64; rows * width];
    for (j, s) in sets.iter().enumerate() {
        for &e in *s {
            tab[row_of[e] * width + j] = 1.0;
        }
    }
    for r in 0..rows {
        tab[r * width + cols + r] = 1.0;
        tab[r * width + width - 1] = 1.0;
    }
    // Reduced-cost row for maximization: z - sum x_j = 0.
    let mut obj = vec![0.0f64; width];
    for v in obj.iter_mut().take(cols) {
        *v = -1.0;
    }
    let mut basis: Vec<usize> = (cols..cols + rows).collect();
    const EPS: f64 = 1e-9;
    let mut degenerate_streak = 0usize;

    let mut pivots = 0usize;
    loop {
        let bland = degenerate_streak > 50;
        let entering = if bland {
            (0..width - 1).find(|&j| obj[j] < -EPS)
        } else {
            let mut best = None;
            let mut best_val = -EPS;
            for (j, &v) in obj.iter().enumerate().take(width - 1) {
                if v < best_val {
                    best_val = v;
                    best = Some(j);
                }
            }
            best
        };
        let Some(entering) = entering else { break };
        // Ratio test.
        let mut leaving = None;
        let mut best_ratio = f64::INFINITY;
        for r in 0..rows {
            let a = tab[r * width + entering];
            if a > EPS {
                let ratio = tab[r * width + width - 1] / a;
                let better = ratio < best_ratio - EPS
                    || (ratio < best_ratio + EPS && leaving.is_some_and(|l: usize| basis[r] < basis[l]));
                if better {
                    best_ratio = ratio;
                    leaving = Some(r);
                }
            }
        }
        // Bounded: every column has a positive entry, so this cannot happen.
        let leaving = leaving?;
        if best_ratio < EPS {
            degenerate_streak += 1;
        } else {
            degenerate_streak = 0;
        }
        pivot(&mut tab, &mut obj, width, leaving, entering);
        basis[leaving] = entering;
        pivots += 1;
        if pivots > max_pivots {
            return None;
        }
    }

    // Dual values sit under the slack columns of the objective row.
    let y: Vec<f64> = (0..rows).map(|r| obj[cols + r].max(0.0)).collect();
    let mut min_cover = f64::INFINITY;
    for s in sets {
        let cover: f64 = s.iter().map(|&e| y[row_of[e]]).sum();
        min_cover = min_cover.min(cover);
    }
    if min_cover <= 1e-6 {
        return None;
    }
    let total: f64 = y.iter().sum();
    Some(total / min_cover.min(1.0))
}

fn pivot(tab: &mut [f64], obj: &mut [f64], width: usize, pr: usize, pc: usize) {
    let pv = tab[pr * width + pc];
    for j in 0..width {
        tab[pr * width + j] /= pv;
    }
    let (before, rest) = tab.split_at_mut(pr * width);
    let (prow, after) = rest.split_at_mut(width);
    let eliminate = |row: &mut [f64]| {
        let f = row[pc];
        if f != 0.0 {
            for (x, &p) in row.iter_mut().zip(prow.iter()) {
                *x -= f * p;
            }
        }
    };
    for row in before.chunks_mut(width) {
        eliminate(row);
    }
    for row in after.chunks_mut(width) {
        eliminate(row);
    }
    eliminate(obj);
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn triangle_of_pairs_has_fractional_value_three_halves() {
        let sets: Vec<&[usize]> = vec![&[0, 1], &[1, 2], &[0, 2]];
        let b = packing_upper_bound(&sets, 3, 1000).unwrap();
        assert!((b - 1.5).abs() < 1e-9, "{b}");
    }

    #[test]
    fn disjoint_sets_bound_is_their_count() {
        let sets: Vec<&[usize]> = vec![&[0, 1, 2], &[3, 4, 5], &[6, 7, 8]];
        let b = packing_upper_bound(&sets, 9, 1000).unwrap();
        assert!((b - 3.0).abs() < 1e-9);
    }

    #[test]
    fn all_triangles_of_k6_bound_is_two() {
        let mut tri = Vec::new();
        for a in 0..6 {
            for b in a + 1..6 {
                for c in b + 1..6 {
                    tri.push(vec![a, b, c]);
                }
            }
        }
        let sets: Vec<&[usize]> = tri.iter().map(Vec::as_slice).collect();
        let b = packing_upper_bound(&sets, 6, 1000).unwrap();
        assert!((b - 2.0).abs() < 1e-9, "{b}");
    }
}
