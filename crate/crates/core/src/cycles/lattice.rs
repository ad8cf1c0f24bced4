//! Integer matrix reductions: Smith normal form with the column transform,
//! integer kernels and lattice bases. Pivoting is deterministic.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

pub type Matrix = Vec<Vec<BigInt>>;

pub fn to_big(rows: &[Vec<i64>]) -> Matrix {
    rows.iter().map(|r| r.iter().map(|&x| BigInt::from(x)).collect()).collect()
}

fn identity(n: usize) -> Matrix {
    (0..n)
        .map(|i| (0..n).map(|j| if i == j { BigInt::one() } else { BigInt::zero() }).collect())
        .collect()
}

/// `U A V = diag(d_1, ..., d_r, 0, ...)` with `d_i | d_(i+1)`, `d_i > 0`.
pub struct Smith {
    pub diag: Vec<BigInt>,
    /// The column transform `V` (`ncols x ncols`, unimodular).
    pub col: Matrix,
    pub ncols: usize,
}

fn col_op(a: &mut Matrix, v: &mut Matrix, dst: usize, src: usize, k: &BigInt) {
    // column dst -= k * column src
    for row in a.iter_mut() {
        let t = &row[src] * k;
        row[dst] -= t;
    }
    for row in v.iter_mut() {
        let t = &row[src] * k;
        row[dst] -= t;
    }
}

fn swap_cols(a: &mut Matrix, v: &mut Matrix, i: usize, j: usize) {
    for row in a.iter_mut() {
        row.swap(i, j);
    }
    for row in v.iter_mut() {
        row.swap(i, j);
    }
}

pub fn smith(rows: &Matrix, ncols: usize) -> Smith {
    let mut a: Matrix = rows.clone();
    let mut v = identity(ncols);
    let nrows = a.len();
    let mut diag = Vec::new();
    let mut t = 0;
    while t < nrows.min(ncols) {
        // Pivot: smallest nonzero absolute value in the remaining block.
        let mut best: Option<(usize, usize)> = None;
        for i in t..nrows {
            for j in t..ncols {
                if !a[i][j].is_zero() && best.map_or(true, |(bi, bj)| a[i][j].abs() < a[bi][bj].abs()) {
                    best = Some((i, j));
                }
            }
        }
        let Some((pi, pj)) = best else { break };
        a.swap(t, pi);
        swap_cols(&mut a, &mut v, t, pj);
        loop {
            let mut changed = false;
            for i in t + 1..nrows {
                if !a[i][t].is_zero() {
                    let q = a[i][t].div_floor(&a[t][t]);
                    for j in t..ncols {
                        let x = &a[t][j] * &q;
                        a[i][j] -= x;
                    }
                    if !a[i][t].is_zero() {
                        a.swap(t, i);
                        changed = true;
                    }
                }
            }
            for j in t + 1..ncols {
                if !a[t][j].is_zero() {
                    let q = a[t][j].div_floor(&a[t][t]);
                    col_op(&mut a, &mut v, j, t, &q);
                    if !a[t][j].is_zero() {
                        swap_cols(&mut a, &mut v, t, j);
                        changed = true;
                    }
                }
            }
            if changed {
                continue;
            }
            // Divisibility of the remaining block.
            let mut fix = None;
            'outer: for i in t + 1..nrows {
                for j in t + 1..ncols {
                    if !(&a[i][j] % &a[t][t]).is_zero() {
                        fix = Some(i);
                        break 'outer;
                    }
                }
            }
            match fix {
                Some(i) => {
                    for j in t..ncols {
                        let x = a[i][j].clone();
                        a[t][j] += x;
                    }
                }
                None => break,
            }
        }
        if a[t][t].is_negative() {
            for j in t..ncols {
                a[t][j] = -a[t][j].clone();
            }
        }
        diag.push(a[t][t].clone());
        t += 1;
    }
    Smith { diag, col: v, ncols }
}

/// Basis (as rows) of `{x : A x = 0}` for `A` with `ncols` columns.
pub fn kernel(rows: &Matrix, ncols: usize) -> Matrix {
    let mut a = rows.clone();
    let mut w = identity(ncols);
    let mut pc = 0;
    for i in 0..a.len() {
        if pc >= ncols {
            break;
        }
        loop {
            let nz: Vec<usize> = (pc..ncols).filter(|&j| !a[i][j].is_zero()).collect();
            if nz.is_empty() {
                break;
            }
            let m = *nz.iter().min_by_key(|&&j| a[i][j].abs()).unwrap();
            swap_cols(&mut a, &mut w, pc, m);
            let mut done = true;
            for j in pc + 1..ncols {
                if !a[i][j].is_zero() {
                    let q = a[i][j].div_floor(&a[i][pc]);
                    col_op(&mut a, &mut w, j, pc, &q);
                    if !a[i][j].is_zero() {
                        done = false;
                    }
                }
            }
            if done {
                pc += 1;
                break;
            }
        }
    }
    (pc..ncols).map(|j| w.iter().map(|row| row[j].clone()).collect()).collect()
}

/// Row echelon basis of the lattice spanned by `rows`.
pub fn echelon_basis(rows: &Matrix, ncols: usize) -> Matrix {
    let mut a: Matrix = rows.iter().filter(|r| r.iter().any(|x| !x.is_zero())).cloned().collect();
    let mut r = 0;
    for c in 0..ncols {
        loop {
            let nz: Vec<usize> = (r..a.len()).filter(|&i| !a[i][c].is_zero()).collect();
            if nz.is_empty() {
                break;
            }
            let m = *nz.iter().min_by_key(|&&i| a[i][c].abs()).unwrap();
            a.swap(r, m);
            let mut done = true;
            for i in r + 1..a.len() {
                if !a[i][c].is_zero() {
                    let q = a[i][c].div_floor(&a[r][c]);
                    for j in c..ncols {
                        let x = &a[r][j] * &q;
                        a[i][j] -= x;
                    }
                    if !a[i][c].is_zero() {
                        done = false;
                    }
                }
            }
            if done {
                if a[r][c].is_negative() {
                    for j in c..ncols {
                        a[r][j] = -a[r][j].clone();
                    }
                }
                r += 1;
                break;
            }
        }
        if r == a.len() {
            break;
        }
    }
    a.truncate(r);
    a
}

/// Coordinates of `v` in an echelon basis, if it lies in the lattice.
pub fn coordinates(basis: &Matrix, v: &[BigInt]) -> Option<Vec<BigInt>> {
    let mut rest: Vec<BigInt> = v.to_vec();
    let mut out = Vec::with_capacity(basis.len());
    for b in basis {
        let c = b.iter().position(|x| !x.is_zero())?;
        let (q, r) = rest[c].div_rem(&b[c]);
        if !r.is_zero() {
            return None;
        }
        for (x, y) in rest.iter_mut().zip(b) {
            *x -= &q * y;
        }
        out.push(q);
    }
    if rest.iter().all(Zero::is_zero) {
        Some(out)
    } else {
        None
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn smith_of_small_matrix() {
        // Z^2 / <(2,4), (6,8)> = Z/2 + Z/4.
        let s = smith(&to_big(&[vec![2, 4], vec![6, 8]]), 2);
        assert_eq!(s.diag, vec![BigInt::from(2), BigInt::from(4)]);
    }

    #[test]
    fn kernel_of_row() {
        let k = kernel(&to_big(&[vec![2, 3, 5]]), 3);
        assert_eq!(k.len(), 2);
        for row in &k {
            let dot: BigInt = row[0].clone() * 2 + row[1].clone() * 3 + row[2].clone() * 5;
            assert!(dot.is_zero());
        }
    }

    #[test]
    fn coordinates_in_echelon_basis() {
        let b = echelon_basis(&to_big(&[vec![2, 0], vec![4, 2], vec![0, 4]]), 2);
        assert_eq!(b.len(), 2);
        assert!(coordinates(&b, &[BigInt::from(6), BigInt::from(2)]).is_some());
        assert!(coordinates(&b, &[BigInt::from(1), BigInt::from(0)]).is_none());
    }
}
