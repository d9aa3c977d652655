//! Dense direct solve for the small Gram and Newton systems
//! ((m+3)-dimensional, m ≤ 64).

use alloc::vec::Vec;

#[allow(unused_imports)]
use num_traits::Float;

use crate::error::{Error, Result};

/// Solves the n×n system `a`·x = `b` in place by Gaussian elimination with
/// partial pivoting; on return `b` holds x. `a` is row-major and is
/// destroyed. `context` names the failing system in the error.
pub(crate) fn solve_dense(
    n: usize,
    a: &mut [f64],
    b: &mut [f64],
    context: &'static str,
) -> Result<()> {
    debug_assert_eq!(a.len(), n * n);
    debug_assert_eq!(b.len(), n);
    let scale = a.iter().fold(0.0_f64, |m, &v| m.max(v.abs()));
    if scale == 0.0 {
        return Err(Error::Singular(context));
    }
    let tiny = 1e-14 * scale;
    let mut perm: Vec<usize> = (0..n).collect();
    for col in 0..n {
        let mut pivot_row = col;
        let mut pivot_val = a[perm[col] * n + col].abs();
        for (row, &p) in perm.iter().enumerate().skip(col + 1) {
            let v = a[p * n + col].abs();
            if v > pivot_val {
                pivot_val = v;
                pivot_row = row;
            }
        }
        if pivot_val <= tiny {
            return Err(Error::Singular(context));
        }
        perm.swap(col, pivot_row);
        let p = perm[col];
        let inv = 1.0 / a[p * n + col];
        for &r in perm.iter().skip(col + 1) {
            let factor = a[r * n + col] * inv;
            if factor == 0.0 {
                continue;
            }
            a[r * n + col] = 0.0;
            for c in col + 1..n {
                a[r * n + c] -= factor * a[p * n + c];
            }
            b[r] -= factor * b[p];
        }
    }
    // back substitution into a scratch vector, then write out in order
    let mut x = alloc::vec![0.0; n];
    for col in (0..n).rev() {
        let p = perm[col];
        let mut acc = b[p];
        for c in col + 1..n {
            acc -= a[p * n + c] * x[c];
        }
        x[col] = acc / a[p * n + col];
    }
    b.copy_from_slice(&x);
    Ok(())
}
