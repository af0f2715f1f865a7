use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{Signed, Zero};

pub(super) fn reduce(free_rank: u32, torsion: &[u64], mut v: Vec<i64>) -> Vec<i64> {
    let r = free_rank as usize;
    for (c, &t) in v[r..].iter_mut().zip(torsion) {
        *c = c.rem_euclid(t as i64);
    }
    v
}

pub(super) fn add(free_rank: u32, torsion: &[u64], a: &[i64], b: &[i64]) -> Vec<i64> {
    reduce(free_rank, torsion, a.iter().zip(b).map(|(x, y)| x + y).collect())
}

pub(super) fn neg(free_rank: u32, torsion: &[u64], a: &[i64]) -> Vec<i64> {
    reduce(free_rank, torsion, a.iter().map(|x| -x).collect())
}

/// Canonical basis (row Hermite normal form) of the lattice of integer
/// relations `x` with `Σ x_i g_i = 0` in `Z^free_rank × Π Z/t_j`, where
/// `coords[i]` are the coordinates of `g_i`.
pub fn relation_lattice(free_rank: u32, torsion: &[u64], coords: &[Vec<i64>]) -> Vec<Vec<BigInt>> {
    let n = coords.len();
    let r = free_rank as usize;
    let m = r + torsion.len();
    let cols = n + torsion.len();
    let mut a = vec![vec![BigInt::zero(); cols]; m];
    for (i, g) in coords.iter().enumerate() {
        for (row, &c) in g.iter().enumerate() {
            a[row][i] = BigInt::from(c);
        }
    }
    for (j, &t) in torsion.iter().enumerate() {
        a[r + j][n + j] = BigInt::from(t);
    }
    let mut u: Vec<Vec<BigInt>> =
        (0..cols).map(|i| (0..cols).map(|j| BigInt::from((i == j) as i64)).collect()).collect();
    // Column echelon reduction of `a`, tracking the unimodular transform in `u`
    // (stored column-major: u[c] is column c).
    let mut pc = 0;
    for row in 0..m {
        loop {
            let pivot = (pc..cols).filter(|&c| !a[row][c].is_zero()).min_by_key(|&c| a[row][c].abs());
            let Some(p) = pivot else { break };
            swap_cols(&mut a, &mut u, p, pc);
            let mut done = true;
            for c in pc + 1..cols {
                if a[row][c].is_zero() {
                    continue;
                }
                let q = a[row][c].div_floor(&a[row][pc]);
                for rr in a.iter_mut() {
                    let d = &q * &rr[pc];
                    rr[c] -= d;
                }
                let col_pc = u[pc].clone();
                for (x, y) in u[c].iter_mut().zip(&col_pc) {
                    *x -= &q * y;
                }
                if !a[row][c].is_zero() {
                    done = false;
                }
            }
            if done {
                pc += 1;
                break;
            }
        }
        if pc == cols {
            break;
        }
    }
    let kernel: Vec<Vec<BigInt>> = u[pc..].iter().map(|col| col[..n].to_vec()).collect();
    hermite(kernel, n)
}

fn swap_cols(a: &mut [Vec<BigInt>], u: &mut [Vec<BigInt>], i: usize, j: usize) {
    if i != j {
        for row in a.iter_mut() {
            row.swap(i, j);
        }
        u.swap(i, j);
    }
}

/// Row Hermite normal form: positive pivots, entries above each pivot in
/// `0..pivot`, zero rows dropped.
pub(super) fn hermite(mut rows: Vec<Vec<BigInt>>, n: usize) -> Vec<Vec<BigInt>> {
    let mut r = 0;
    for col in 0..n {
        if r == rows.len() {
            break;
        }
        loop {
            let pivot = (r..rows.len()).filter(|&i| !rows[i][col].is_zero()).min_by_key(|&i| rows[i][col].abs());
            let Some(p) = pivot else { break };
            rows.swap(p, r);
            let mut done = true;
            for i in r + 1..rows.len() {
                if rows[i][col].is_zero() {
                    continue;
                }
                let q = rows[i][col].div_floor(&rows[r][col]);
                let pivot_row = rows[r].clone();
                for (x, y) in rows[i].iter_mut().zip(&pivot_row) {
                    *x -= &q * y;
                }
                if !rows[i][col].is_zero() {
                    done = false;
                }
            }
            if done {
                break;
            }
        }
        if r < rows.len() && !rows[r][col].is_zero() {
            if rows[r][col].is_negative() {
                for x in rows[r].iter_mut() {
                    *x = -x.clone();
                }
            }
            let pivot_row = rows[r].clone();
            for row in rows.iter_mut().take(r) {
                let q = row[col].div_floor(&pivot_row[col]);
                if !q.is_zero() {
                    for (x, y) in row.iter_mut().zip(&pivot_row) {
                        *x -= &q * y;
                    }
                }
            }
            r += 1;
        }
    }
    rows.truncate(r);
    rows
}
