//! Shared test support: a small dense simplex solver used as an
//! independent oracle for the grant optimization, kept apart from the
//! production code path it checks.

/// Maximize c.x subject to A x <= b, x >= 0, assuming b >= 0 so the
/// slack basis is feasible. Dense tableau with Bland's rule; intended
/// for desk-scale instances only.
pub fn simplex_max(c: &[f64], a: &[Vec<f64>], b: &[f64]) -> f64 {
    let n = c.len();
    let m = b.len();
    assert!(a.len() == m && a.iter().all(|row| row.len() == n));
    assert!(b.iter().all(|v| *v >= 0.0));

    // Tableau: m rows of [A | I | b], objective row [-c | 0 | 0].
    let width = n + m + 1;
    let mut t = vec![vec![0.0; width]; m + 1];
    for i in 0..m {
        t[i][..n].copy_from_slice(&a[i]);
        t[i][n + i] = 1.0;
        t[i][width - 1] = b[i];
    }
    for j in 0..n {
        t[m][j] = -c[j];
    }
    let mut basis: Vec<usize> = (n..n + m).collect();

    for _ in 0..10_000 {
        // Entering column: first with a negative reduced cost (Bland).
        let Some(pivot_col) = (0..n + m).find(|j| t[m][*j] < -1e-9) else {
            break;
        };
        // Leaving row: minimum ratio, ties to the smallest basis index.
        let mut pivot_row = None;
        let mut best = f64::INFINITY;
        for i in 0..m {
            if t[i][pivot_col] > 1e-9 {
                let ratio = t[i][width - 1] / t[i][pivot_col];
                if ratio < best - 1e-12
                    || (ratio < best + 1e-12
                        && pivot_row.is_some_and(|r: usize| basis[i] < basis[r]))
                {
                    best = ratio;
                    pivot_row = Some(i);
                }
            }
        }
        let Some(r) = pivot_row else {
            panic!("unbounded LP in test oracle");
        };
        let pv = t[r][pivot_col];
        for v in t[r].iter_mut() {
            *v /= pv;
        }
        for i in 0..m + 1 {
            if i != r {
                let factor = t[i][pivot_col];
                if factor != 0.0 {
                    for j in 0..width {
                        t[i][j] -= factor * t[r][j];
                    }
                }
            }
        }
        basis[r] = pivot_col;
    }
    t[m][width - 1]
}

#[allow(dead_code)]
/// Optimal objective of one operator column of the grant LP:
/// maximize sum G_s with 0 <= G_s <= R_s and G_s <= budget * R_s / |R|_1.
pub fn column_lp_optimum(requests: &[f64], budget: f64) -> f64 {
    let n = requests.len();
    let total: f64 = requests.iter().sum();
    let mut a = Vec::new();
    let mut b = Vec::new();
    for (s, &r) in requests.iter().enumerate() {
        let mut row = vec![0.0; n];
        row[s] = 1.0;
        a.push(row.clone());
        b.push(r);
        if total > 0.0 {
            a.push(row);
            b.push(budget * r / total);
        }
    }
    simplex_max(&vec![1.0; n], &a, &b)
}
