//! Gaussian elimination over F_p.
//!
//! Rows are anything that derefs to a mutable slice of residues, so the same
//! routines serve fixed-size coordinate arrays and dynamic matrices.

use crate::ffield::{PrimeField, Scalar};

/// Reduces `rows` in place to reduced row-echelon form and returns the pivot
/// columns. Zero rows are moved to the bottom; the caller may truncate to
/// `pivots.len()`. Pivot search is the first nonzero entry from the top.
pub fn rref<R>(f: &PrimeField, rows: &mut [R], ncols: usize) -> Vec<usize>
where
    R: AsRef<[Scalar]> + AsMut<[Scalar]>,
{
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..ncols {
        if r == rows.len() {
            break;
        }
        let Some(k) = (r..rows.len()).find(|&k| rows[k].as_ref()[c] != 0) else {
            continue;
        };
        rows.swap(r, k);
        let inv = f.inv(rows[r].as_ref()[c]).expect("pivot is nonzero");
        for x in rows[r].as_mut()[c..ncols].iter_mut() {
            *x = f.mul(*x, inv);
        }
        for k in 0..rows.len() {
            if k == r {
                continue;
            }
            let factor = rows[k].as_ref()[c];
            if factor == 0 {
                continue;
            }
            let (pivot_row, other) = if k < r {
                let (a, b) = rows.split_at_mut(r);
                (b[0].as_ref(), a[k].as_mut())
            } else {
                let (a, b) = rows.split_at_mut(k);
                (a[r].as_ref(), b[0].as_mut())
            };
            for j in c..ncols {
                other[j] = f.sub(other[j], f.mul(factor, pivot_row[j]));
            }
        }
        pivots.push(c);
        r += 1;
    }
    pivots
}

pub fn rank<R>(f: &PrimeField, rows: &[R], ncols: usize) -> usize
where
    R: AsRef<[Scalar]>,
{
    let mut m: Vec<Vec<Scalar>> = rows.iter().map(|r| r.as_ref().to_vec()).collect();
    rref(f, &mut m, ncols).len()
}

/// A basis of the right kernel `{x : rows · x = 0}` in deterministic order:
/// one vector per free column, ascending, with a 1 in that column.
pub fn kernel<R>(f: &PrimeField, rows: &[R], ncols: usize) -> Vec<Vec<Scalar>>
where
    R: AsRef<[Scalar]>,
{
    let mut m: Vec<Vec<Scalar>> = rows.iter().map(|r| r.as_ref().to_vec()).collect();
    let pivots = rref(f, &mut m, ncols);
    let mut basis = Vec::new();
    let mut pi = 0;
    for c in 0..ncols {
        if pi < pivots.len() && pivots[pi] == c {
            pi += 1;
            continue;
        }
        let mut v = vec![0; ncols];
        v[c] = 1;
        for (row, &pc) in m.iter().zip(&pivots) {
            v[pc] = f.neg(row[c]);
        }
        basis.push(v);
    }
    basis
}

/// Kernel for fixed-width rows, returned as arrays.
pub fn kernel_arr<const N: usize>(f: &PrimeField, rows: &[[Scalar; N]]) -> Vec<[Scalar; N]> {
    kernel(f, rows, N)
        .into_iter()
        .map(|v| v.try_into().expect("kernel vector has N entries"))
        .collect()
}

pub fn det3(f: &PrimeField, m: &[[Scalar; 3]; 3]) -> Scalar {
    let t = |a, b| f.mul(a, b);
    let a = t(m[0][0], f.sub(t(m[1][1], m[2][2]), t(m[1][2], m[2][1])));
    let b = t(m[0][1], f.sub(t(m[1][0], m[2][2]), t(m[1][2], m[2][0])));
    let c = t(m[0][2], f.sub(t(m[1][0], m[2][1]), t(m[1][1], m[2][0])));
    f.add(f.sub(a, b), c)
}
