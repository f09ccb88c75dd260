//! Dense linear algebra over an exact field and over the integers.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use crate::exactfield::Field;

/// Reduced row echelon form; returns the reduced rows and pivot columns.
pub fn rref<F: Field>(rows: &[Vec<F>], ncols: usize) -> (Vec<Vec<F>>, Vec<usize>) {
    let mut m: Vec<Vec<F>> = rows.to_vec();
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..ncols {
        let Some(p) = (r..m.len()).find(|&i| !m[i][c].is_zero()) else {
            continue;
        };
        m.swap(r, p);
        let inv = m[r][c].inv();
        for j in c..ncols {
            m[r][j] = m[r][j].mul(&inv);
        }
        for i in 0..m.len() {
            if i == r || m[i][c].is_zero() {
                continue;
            }
            let f = m[i][c].clone();
            for j in c..ncols {
                let v = m[i][j].sub(&f.mul(&m[r][j]));
                m[i][j] = v;
            }
        }
        pivots.push(c);
        r += 1;
        if r == m.len() {
            break;
        }
    }
    m.truncate(r);
    (m, pivots)
}

pub fn rank<F: Field>(rows: &[Vec<F>], ncols: usize) -> usize {
    rref(rows, ncols).1.len()
}

/// Basis of the right kernel `{x : rows * x = 0}`.
pub fn kernel<F: Field>(rows: &[Vec<F>], ncols: usize) -> Vec<Vec<F>> {
    let (red, pivots) = rref(rows, ncols);
    let free: Vec<usize> = (0..ncols).filter(|c| !pivots.contains(c)).collect();
    free.iter()
        .map(|&f| {
            let mut v = vec![F::zero(); ncols];
            v[f] = F::one();
            for (row, &p) in red.iter().zip(pivots.iter()) {
                v[p] = row[f].neg();
            }
            v
        })
        .collect()
}

pub type IntMatrix = Vec<Vec<BigInt>>;

/// Smith normal form `D = U * A * V` with unimodular `U`, `V`.
#[derive(Clone, Debug)]
pub struct Smith {
    pub diagonal: Vec<BigInt>,
    pub u: IntMatrix,
    pub v: IntMatrix,
    pub rank: usize,
}

fn identity(n: usize) -> IntMatrix {
    (0..n)
        .map(|i| (0..n).map(|j| if i == j { BigInt::one() } else { BigInt::zero() }).collect())
        .collect()
}

pub fn smith_normal_form(a: &IntMatrix, ncols: usize) -> Smith {
    let nrows = a.len();
    let mut d = a.clone();
    let mut u = identity(nrows);
    let mut v = identity(ncols);

    let row_op = |m: &mut IntMatrix, target: usize, src: usize, k: &BigInt| {
        let src_row = m[src].clone();
        for (x, y) in m[target].iter_mut().zip(src_row.iter()) {
            *x -= k * y;
        }
    };
    let col_op = |m: &mut IntMatrix, target: usize, src: usize, k: &BigInt| {
        for row in m.iter_mut() {
            let y = row[src].clone();
            row[target] -= k * y;
        }
    };
    let swap_cols = |m: &mut IntMatrix, i: usize, j: usize| {
        for row in m.iter_mut() {
            row.swap(i, j);
        }
    };

    let mut t = 0;
    while t < nrows.min(ncols) {
        // smallest nonzero entry in the remaining block becomes the pivot
        let mut best: Option<(usize, usize)> = None;
        for i in t..nrows {
            for j in t..ncols {
                if d[i][j].is_zero() {
                    continue;
                }
                if best.is_none_or(|(bi, bj)| d[i][j].abs() < d[bi][bj].abs()) {
                    best = Some((i, j));
                }
            }
        }
        let Some((pi, pj)) = best else { break };
        d.swap(t, pi);
        u.swap(t, pi);
        swap_cols(&mut d, t, pj);
        swap_cols(&mut v, t, pj);

        let mut done = true;
        for i in t + 1..nrows {
            if d[i][t].is_zero() {
                continue;
            }
            let k = d[i][t].div_floor(&d[t][t]);
            row_op(&mut d, i, t, &k);
            row_op(&mut u, i, t, &k);
            if !d[i][t].is_zero() {
                done = false;
            }
        }
        for j in t + 1..ncols {
            if d[t][j].is_zero() {
                continue;
            }
            let k = d[t][j].div_floor(&d[t][t]);
            col_op(&mut d, j, t, &k);
            col_op(&mut v, j, t, &k);
            if !d[t][j].is_zero() {
                done = false;
            }
        }
        if !done {
            continue;
        }
        // divisibility condition on the rest of the block
        let mut fixed = true;
        'scan: for i in t + 1..nrows {
            for j in t + 1..ncols {
                if !(&d[i][j] % &d[t][t]).is_zero() {
                    let src = d[i].clone();
                    for (x, y) in d[t].iter_mut().zip(src.iter()) {
                        *x += y;
                    }
                    let usrc = u[i].clone();
                    for (x, y) in u[t].iter_mut().zip(usrc.iter()) {
                        *x += y;
                    }
                    fixed = false;
                    break 'scan;
                }
            }
        }
        if !fixed {
            continue;
        }
        if d[t][t].is_negative() {
            for x in d[t].iter_mut() {
                *x = -x.clone();
            }
            for x in u[t].iter_mut() {
                *x = -x.clone();
            }
        }
        t += 1;
    }
    let diagonal: Vec<BigInt> = (0..nrows.min(ncols)).map(|i| d[i][i].clone()).collect();
    let rank = diagonal.iter().filter(|x| !x.is_zero()).count();
    Smith {
        diagonal,
        u,
        v,
        rank,
    }
}

/// Basis of the integer lattice `{x in Z^n : A x = 0}` (always saturated).
pub fn integer_kernel(a: &IntMatrix, ncols: usize) -> IntMatrix {
    if a.is_empty() {
        return identity(ncols);
    }
    let s = smith_normal_form(a, ncols);
    (s.rank..ncols)
        .map(|j| s.v.iter().map(|row| row[j].clone()).collect())
        .collect()
}

pub fn integer_rank(a: &IntMatrix, ncols: usize) -> usize {
    if a.is_empty() {
        return 0;
    }
    smith_normal_form(a, ncols).rank
}

/// Whether the row lattice of `a` is saturated, i.e. every nonzero
/// elementary divisor is a unit.
pub fn is_saturated(a: &IntMatrix, ncols: usize) -> bool {
    if a.is_empty() {
        return true;
    }
    smith_normal_form(a, ncols)
        .diagonal
        .iter()
        .all(|x| x.is_zero() || x.is_one())
}

/// Integer right inverse `S` with `A S = I` for a full-row-rank saturated `A`.
pub fn integer_right_inverse(a: &IntMatrix, ncols: usize) -> Option<IntMatrix> {
    let r = a.len();
    let s = smith_normal_form(a, ncols);
    if s.rank != r || !s.diagonal.iter().all(|x| x.is_one()) {
        return None;
    }
    // A = U^-1 [I 0] V^-1  =>  S = V [I;0] U
    let mut out = vec![vec![BigInt::zero(); r]; ncols];
    for (i, row) in out.iter_mut().enumerate() {
        for (j, cell) in row.iter_mut().enumerate() {
            let mut acc = BigInt::zero();
            for k in 0..r {
                acc += &s.v[i][k] * &s.u[k][j];
            }
            *cell = acc;
        }
    }
    Some(out)
}

/// Row Hermite normal form: echelon rows with positive pivots and entries
/// above each pivot reduced into `[0, pivot)`. Zero rows are dropped, so the
/// result is a canonical basis of the row lattice.
pub fn hermite_normal_form(a: &IntMatrix, ncols: usize) -> IntMatrix {
    let mut m: IntMatrix = a.clone();
    let mut r = 0;
    for c in 0..ncols {
        if r == m.len() {
            break;
        }
        loop {
            // Euclid on column c among rows r..
            let Some(p) = (r..m.len())
                .filter(|&i| !m[i][c].is_zero())
                .min_by(|&i, &j| m[i][c].abs().cmp(&m[j][c].abs()))
            else {
                break;
            };
            m.swap(r, p);
            let mut clean = true;
            for i in r + 1..m.len() {
                if m[i][c].is_zero() {
                    continue;
                }
                let k = m[i][c].div_floor(&m[r][c]);
                let src = m[r].clone();
                for (x, y) in m[i].iter_mut().zip(src.iter()) {
                    *x -= &k * y;
                }
                if !m[i][c].is_zero() {
                    clean = false;
                }
            }
            if clean {
                break;
            }
        }
        if r < m.len() && !m[r][c].is_zero() {
            if m[r][c].is_negative() {
                for x in m[r].iter_mut() {
                    *x = -x.clone();
                }
            }
            for i in 0..r {
                let k = m[i][c].div_floor(&m[r][c]);
                if k.is_zero() {
                    continue;
                }
                let src = m[r].clone();
                for (x, y) in m[i].iter_mut().zip(src.iter()) {
                    *x -= &k * y;
                }
            }
            r += 1;
        }
    }
    m.truncate(r);
    m
}

pub fn int_matrix(rows: &[Vec<i64>]) -> IntMatrix {
    rows.iter()
        .map(|r| r.iter().map(|&x| BigInt::from(x)).collect())
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactfield::{q, Q};

    fn mat_mul(a: &IntMatrix, b: &IntMatrix) -> IntMatrix {
        let n = b.first().map_or(0, |r| r.len());
        a.iter()
            .map(|row| {
                (0..n)
                    .map(|j| row.iter().zip(b.iter()).map(|(x, br)| x * &br[j]).sum())
                    .collect()
            })
            .collect()
    }

    #[test]
    fn smith_of_mu2_relation() {
        let s = smith_normal_form(&int_matrix(&[vec![2]]), 1);
        assert_eq!(s.diagonal, vec![BigInt::from(2)]);
        assert!(!is_saturated(&int_matrix(&[vec![2]]), 1));
    }

    #[test]
    fn smith_decomposition_holds() {
        let a = int_matrix(&[vec![2, 4, 4], vec![-6, 6, 12], vec![10, -4, -16]]);
        let s = smith_normal_form(&a, 3);
        let d = mat_mul(&mat_mul(&s.u, &a), &s.v);
        for (i, row) in d.iter().enumerate() {
            for (j, x) in row.iter().enumerate() {
                if i != j {
                    assert!(x.is_zero());
                }
            }
        }
        let diag: Vec<i64> = s.diagonal.iter().map(|x| x.try_into().unwrap()).collect();
        assert_eq!(diag, vec![2, 6, 12]);
    }

    #[test]
    fn kernel_lattice_of_diagonal_relation() {
        let k = integer_kernel(&int_matrix(&[vec![1, -1]]), 2);
        assert_eq!(k.len(), 1);
        assert_eq!(k[0][0], k[0][1]);
    }

    #[test]
    fn hermite_form_is_canonical() {
        let a = int_matrix(&[vec![-2, 1], vec![4, -2]]);
        assert_eq!(hermite_normal_form(&a, 2), int_matrix(&[vec![2, -1]]));
        let b = int_matrix(&[vec![3, 1], vec![1, 1]]);
        assert_eq!(hermite_normal_form(&b, 2), int_matrix(&[vec![1, 1], vec![0, 2]]));
    }

    #[test]
    fn right_inverse() {
        let a = int_matrix(&[vec![2, 3]]);
        let s = integer_right_inverse(&a, 2).unwrap();
        assert_eq!(mat_mul(&a, &s), int_matrix(&[vec![1]]));
    }

    #[test]
    fn rational_kernel() {
        let rows: Vec<Vec<Q>> = vec![vec![q(1), q(2), q(3)], vec![q(2), q(4), q(6)]];
        let k = kernel(&rows, 3);
        assert_eq!(k.len(), 2);
        for v in &k {
            let dot: Q = rows[0].iter().zip(v).map(|(a, b)| a * b).sum();
            assert!(Field::is_zero(&dot));
        }
    }
}
