//! Link determinant from the Goeritz matrix of a checkerboard colouring.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use crate::grid::GridDiagram;

fn find(parent: &mut [usize], mut x: usize) -> usize {
    while parent[x] != x {
        parent[x] = parent[parent[x]];
        x = parent[x];
    }
    x
}

fn union(parent: &mut [usize], a: usize, b: usize) {
    let (ra, rb) = (find(parent, a), find(parent, b));
    if ra != rb {
        parent[ra] = rb;
    }
}

/// |det| of the link: 1 for the crossingless unknot, 0 for split diagrams.
pub fn determinant(g: &GridDiagram) -> BigInt {
    let n = g.n();
    let crossings = g.crossings();
    let comps = g.component_count();
    if crossings.is_empty() {
        return if comps == 1 { BigInt::one() } else { BigInt::zero() };
    }
    if comps > 1 && !diagram_connected(g, &crossings) {
        return BigInt::zero();
    }

    // Unit squares (r, s), 0 ≤ r, s ≤ n, sit between cell-centre lines
    // r..r+1 and s..s+1; they merge into faces across uncovered edges.
    let m = n + 1;
    let sq = |r: usize, s: usize| r * m + s;
    let mut parent: Vec<usize> = (0..m * m).collect();
    let col_covers = |col: usize, r: usize| {
        // Column `col` covers the vertical edge between centre rows r and r+1.
        if col == 0 || col > n || r == 0 || r >= n {
            return false;
        }
        let (a, b) = g.col_span(col);
        a <= r && r < b
    };
    let row_covers = |row: usize, s: usize| {
        if row == 0 || row > n || s == 0 || s >= n {
            return false;
        }
        let (a, b) = g.row_span(row);
        a <= s && s < b
    };
    for r in 0..m {
        for s in 0..m {
            if s + 1 < m && !col_covers(s + 1, r) {
                union(&mut parent, sq(r, s), sq(r, s + 1));
            }
            if r + 1 < m && !row_covers(r + 1, s) {
                union(&mut parent, sq(r, s), sq(r + 1, s));
            }
        }
    }
    // Shade by winding-number parity: count column segments to the right.
    let shaded = |r: usize, s: usize| (s + 1..=n).filter(|&col| col_covers(col, r)).count() % 2 == 1;

    let mut region_index = vec![usize::MAX; m * m];
    let mut regions = 0;
    let mut entries: Vec<(usize, usize, i64)> = Vec::new();
    for c in &crossings {
        let (i, j) = (c.row, c.col);
        let (pair, eta) =
            if shaded(i - 1, j - 1) { ((sq(i - 1, j - 1), sq(i, j)), 1) } else { ((sq(i - 1, j), sq(i, j - 1)), -1) };
        let mut ids = [0; 2];
        for (slot, cell) in [pair.0, pair.1].into_iter().enumerate() {
            let root = find(&mut parent, cell);
            if region_index[root] == usize::MAX {
                region_index[root] = regions;
                regions += 1;
            }
            ids[slot] = region_index[root];
        }
        entries.push((ids[0], ids[1], eta));
    }
    // Shaded faces touched by no crossing only add zero rows, which are
    // dropped with the reference face.
    let size = regions;
    let mut mat = vec![vec![0i64; size]; size];
    for (a, b, eta) in entries {
        if a == b {
            continue;
        }
        mat[a][b] -= eta;
        mat[b][a] -= eta;
        mat[a][a] += eta;
        mat[b][b] += eta;
    }
    if size <= 1 {
        return BigInt::one();
    }
    let reduced: Vec<Vec<i64>> = mat[..size - 1].iter().map(|row| row[..size - 1].to_vec()).collect();
    bareiss_det(reduced).abs()
}

fn diagram_connected(g: &GridDiagram, crossings: &[crate::grid::GridCrossing]) -> bool {
    let n = g.n();
    let comps = g.trace_components();
    let mut owner = vec![0; n + 1];
    for (k, cycle) in comps.cycles.iter().enumerate() {
        for m in cycle {
            owner[m.row] = k;
        }
    }
    // Column `col` belongs to the component of the row holding its X.
    let mut parent: Vec<usize> = (0..comps.count()).collect();
    for c in crossings {
        union(&mut parent, owner[c.row], owner[g.x_row(c.col)]);
    }
    let root = find(&mut parent, 0);
    (1..comps.count()).all(|k| find(&mut parent, k) == root)
}

/// Fraction-free Gaussian elimination; i128 fast path with a big-integer
/// fallback on overflow.
pub fn bareiss_det(m: Vec<Vec<i64>>) -> BigInt {
    let wide: Vec<Vec<i128>> = m.iter().map(|r| r.iter().map(|&v| i128::from(v)).collect()).collect();
    match bareiss_i128(wide) {
        Some(d) => BigInt::from(d),
        None => bareiss_big(m.iter().map(|r| r.iter().map(|&v| BigInt::from(v)).collect()).collect()),
    }
}

fn bareiss_i128(mut a: Vec<Vec<i128>>) -> Option<i128> {
    let n = a.len();
    if n == 0 {
        return Some(1);
    }
    let mut sign = 1i128;
    let mut prev = 1i128;
    for k in 0..n - 1 {
        if a[k][k] == 0 {
            let swap = (k + 1..n).find(|&i| a[i][k] != 0)?;
            a.swap(k, swap);
            sign = -sign;
        }
        for i in k + 1..n {
            for j in k + 1..n {
                let v = a[i][j].checked_mul(a[k][k])?.checked_sub(a[i][k].checked_mul(a[k][j])?)?;
                a[i][j] = v / prev;
            }
        }
        prev = a[k][k];
    }
    Some(sign * a[n - 1][n - 1])
}

fn bareiss_big(mut a: Vec<Vec<BigInt>>) -> BigInt {
    let n = a.len();
    if n == 0 {
        return BigInt::one();
    }
    let mut sign = BigInt::one();
    let mut prev = BigInt::one();
    for k in 0..n - 1 {
        if a[k][k].is_zero() {
            match (k + 1..n).find(|&i| !a[i][k].is_zero()) {
                Some(s) => {
                    a.swap(k, s);
                    sign = -sign;
                }
                None => return BigInt::zero(),
            }
        }
        for i in k + 1..n {
            for j in k + 1..n {
                let v = &a[i][j] * &a[k][k] - &a[i][k] * &a[k][j];
                a[i][j] = v.div_floor(&prev);
            }
        }
        prev = a[k][k].clone();
    }
    sign * &a[n - 1][n - 1]
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn small_determinants() {
        let u = GridDiagram::new(vec![2, 1], vec![1, 2]).unwrap();
        assert_eq!(determinant(&u), BigInt::one());
        let t = GridDiagram::new(vec![2, 3, 4, 5, 1], vec![5, 1, 2, 3, 4]).unwrap();
        assert_eq!(determinant(&t), BigInt::from(3));
        let hopf = GridDiagram::new(vec![2, 3, 4, 1], vec![4, 1, 2, 3]).unwrap();
        assert_eq!(determinant(&hopf), BigInt::from(2));
        // Two separate rectangles: split unlink.
        let split = GridDiagram::new(vec![2, 1, 4, 3], vec![1, 2, 3, 4]).unwrap();
        assert_eq!(determinant(&split), BigInt::zero());
    }

    #[test]
    fn bareiss_matches_cofactor() {
        let m = vec![vec![2, -1, 0], vec![-1, 2, -1], vec![0, -1, 2]];
        assert_eq!(bareiss_det(m), BigInt::from(4));
        let singular = vec![vec![1, 2], vec![2, 4]];
        assert_eq!(bareiss_det(singular), BigInt::zero());
        let needs_pivot = vec![vec![0, 1], vec![1, 0]];
        assert_eq!(bareiss_det(needs_pivot), BigInt::from(-1));
        let big = vec![vec![i64::MAX, 1], vec![1, i64::MAX]];
        let expected = BigInt::from(i64::MAX) * BigInt::from(i64::MAX) - 1;
        assert_eq!(bareiss_det(big), expected);
    }
}
