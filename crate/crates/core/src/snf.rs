//! Smith normal form over the integers.

use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

pub type Matrix = Vec<Vec<BigInt>>;

/// `u * m * v = d` with `u`, `v` unimodular and `d` diagonal, each diagonal
/// entry dividing the next.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Smith {
    pub u: Matrix,
    pub d: Matrix,
    pub v: Matrix,
}

impl Smith {
    /// The nonzero diagonal entries, in order.
    pub fn invariants(&self) -> Vec<BigInt> {
        (0..self.d.len().min(self.d.first().map_or(0, Vec::len)))
            .map(|i| self.d[i][i].clone())
            .take_while(|x| !x.is_zero())
            .collect()
    }

    pub fn rank(&self) -> usize {
        self.invariants().len()
    }
}

pub fn identity(n: usize) -> Matrix {
    (0..n)
        .map(|i| {
            (0..n)
                .map(|j| if i == j { BigInt::one() } else { BigInt::zero() })
                .collect()
        })
        .collect()
}

pub fn from_i64(rows: &[Vec<i64>]) -> Matrix {
    rows.iter()
        .map(|r| r.iter().map(|&x| BigInt::from(x)).collect())
        .collect()
}

pub fn multiply(a: &Matrix, b: &Matrix) -> Matrix {
    let inner = b.len();
    let cols = b.first().map_or(0, Vec::len);
    a.iter()
        .map(|row| {
            (0..cols)
                .map(|j| (0..inner).map(|k| &row[k] * &b[k][j]).sum())
                .collect()
        })
        .collect()
}

fn add_row_multiple(m: &mut Matrix, target: usize, source: usize, factor: &BigInt) {
    if factor.is_zero() {
        return;
    }
    let src = m[source].clone();
    for (t, s) in m[target].iter_mut().zip(&src) {
        *t += factor * s;
    }
}

fn add_col_multiple(m: &mut Matrix, target: usize, source: usize, factor: &BigInt) {
    if factor.is_zero() {
        return;
    }
    for row in m.iter_mut() {
        let s = row[source].clone();
        row[target] += factor * s;
    }
}

fn swap_cols(m: &mut Matrix, a: usize, b: usize) {
    for row in m.iter_mut() {
        row.swap(a, b);
    }
}

pub fn smith_normal_form(m: &Matrix) -> Smith {
    let rows = m.len();
    let cols = m.first().map_or(0, Vec::len);
    let mut d = m.clone();
    let mut u = identity(rows);
    let mut v = identity(cols);
    for t in 0..rows.min(cols) {
        loop {
            let pivot = (t..rows)
                .flat_map(|i| (t..cols).map(move |j| (i, j)))
                .filter(|&(i, j)| !d[i][j].is_zero())
                .min_by(|&(a, b), &(c, e)| d[a][b].abs().cmp(&d[c][e].abs()));
            let Some((pi, pj)) = pivot else {
                return Smith { u, d, v };
            };
            d.swap(t, pi);
            u.swap(t, pi);
            swap_cols(&mut d, t, pj);
            swap_cols(&mut v, t, pj);

            let mut clean = true;
            for i in t + 1..rows {
                let q = -(&d[i][t] / &d[t][t]);
                add_row_multiple(&mut d, i, t, &q);
                add_row_multiple(&mut u, i, t, &q);
                clean &= d[i][t].is_zero();
            }
            for j in t + 1..cols {
                let q = -(&d[t][j] / &d[t][t]);
                add_col_multiple(&mut d, j, t, &q);
                add_col_multiple(&mut v, j, t, &q);
                clean &= d[t][j].is_zero();
            }
            if !clean {
                continue;
            }
            let bad = (t + 1..rows).find(|&i| (t + 1..cols).any(|j| !d[i][j].is_multiple_of(&d[t][t])));
            match bad {
                Some(i) => {
                    add_row_multiple(&mut d, t, i, &BigInt::one());
                    add_row_multiple(&mut u, t, i, &BigInt::one());
                }
                None => break,
            }
        }
        if d[t][t].is_negative() {
            for x in d[t].iter_mut() {
                *x = -&*x;
            }
            for x in u[t].iter_mut() {
                *x = -&*x;
            }
        }
    }
    Smith { u, d, v }
}

/// `|det m|` for a square matrix, by fraction-free (Bareiss) elimination.
pub fn abs_determinant(m: &Matrix) -> BigInt {
    let n = m.len();
    let mut a = m.clone();
    let mut prev = BigInt::one();
    for k in 0..n {
        let Some(p) = (k..n).find(|&i| !a[i][k].is_zero()) else {
            return BigInt::zero();
        };
        a.swap(p, k);
        for i in k + 1..n {
            for j in k + 1..n {
                let x = &a[i][j] * &a[k][k] - &a[i][k] * &a[k][j];
                a[i][j] = x / &prev;
            }
            a[i][k] = BigInt::zero();
        }
        prev = a[k][k].clone();
    }
    if n == 0 {
        BigInt::one()
    } else {
        a[n - 1][n - 1].abs()
    }
}

/// Prime-power factors `(l, e, l^e)` of `n >= 2`.
pub fn prime_power_factors(mut n: u64) -> Vec<(u64, u32, u64)> {
    let mut out = Vec::new();
    let mut l = 2;
    while l * l <= n {
        if n % l == 0 {
            let (mut e, mut m) = (0, 1);
            while n % l == 0 {
                n /= l;
                e += 1;
                m *= l;
            }
            out.push((l, e, m));
        }
        l += 1;
    }
    if n > 1 {
        out.push((n, 1, n));
    }
    out
}

fn mul_mod(a: u64, b: u64, m: u64) -> u64 {
    ((a as u128 * b as u128) % m as u128) as u64
}

/// Inverse of a unit modulo `m`.
pub fn inverse_mod(a: u64, m: u64) -> Option<u64> {
    let (mut r0, mut r1) = (m as i128, (a % m) as i128);
    let (mut t0, mut t1) = (0i128, 1i128);
    while r1 != 0 {
        let q = r0 / r1;
        (r0, r1) = (r1, r0 - q * r1);
        (t0, t1) = (t1, t0 - q * t1);
    }
    (r0 == 1).then(|| t0.rem_euclid(m as i128) as u64)
}

/// Smith form over the local ring `Z/l^e`: the diagonal is `l^(v_i)`, with
/// `v_i = e` standing for 0. Column operations are logged so that solution
/// vectors can be mapped back without storing the full transform.
#[derive(Clone, Debug)]
pub struct LocalSmith {
    pub l: u64,
    pub e: u32,
    pub modulus: u64,
    pub columns: usize,
    /// Valuations of the diagonal entries, one per pivot found.
    pub valuations: Vec<u32>,
    ops: Vec<ColumnOp>,
}

#[derive(Clone, Copy, Debug)]
enum ColumnOp {
    Swap(usize, usize),
    /// `col[target] -= factor * col[source]`.
    Sub { target: usize, source: usize, factor: u64 },
}

impl LocalSmith {
    /// Number of solutions of `m x = 0` over `Z/l^e`.
    pub fn solution_count(&self) -> BigUint {
        let mut count = BigUint::from(self.modulus).pow((self.columns - self.valuations.len()) as u32);
        for &v in &self.valuations {
            count *= BigUint::from(self.l).pow(v.min(self.e));
        }
        count
    }

    /// Generators of the solution module, as vectors over `Z/l^e`.
    pub fn solution_generators(&self) -> impl Iterator<Item = Vec<u64>> + '_ {
        (0..self.columns).filter_map(move |i| {
            let scale = match self.valuations.get(i) {
                Some(&v) if v == 0 => return None,
                Some(&v) => self.l.pow(self.e - v.min(self.e)),
                None => 1,
            };
            let mut y = vec![0u64; self.columns];
            y[i] = scale % self.modulus;
            Some(self.apply_transform(y))
        })
    }

    /// `x = V y`.
    fn apply_transform(&self, mut y: Vec<u64>) -> Vec<u64> {
        let m = self.modulus;
        for op in self.ops.iter().rev() {
            match *op {
                ColumnOp::Swap(a, b) => y.swap(a, b),
                ColumnOp::Sub { target, source, factor } => {
                    let t = mul_mod(factor, y[target], m);
                    y[source] = (y[source] + m - t) % m;
                }
            }
        }
        y
    }
}

fn valuation(x: u64, l: u64, e: u32) -> u32 {
    if x == 0 {
        return e;
    }
    let (mut x, mut v) = (x, 0);
    while x % l == 0 {
        x /= l;
        v += 1;
    }
    v
}

pub fn local_smith(m: &[Vec<i64>], l: u64, e: u32) -> LocalSmith {
    let modulus = l.pow(e);
    let rows = m.len();
    let cols = m.first().map_or(0, Vec::len);
    let mut d: Vec<Vec<u64>> = m
        .iter()
        .map(|r| r.iter().map(|&x| x.rem_euclid(modulus as i64) as u64).collect())
        .collect();
    let mut valuations = Vec::new();
    let mut ops = Vec::new();
    for t in 0..rows.min(cols) {
        let mut best: Option<(u32, usize, usize)> = None;
        'search: for (i, row) in d.iter().enumerate().skip(t) {
            for (j, &x) in row.iter().enumerate().skip(t) {
                if x == 0 {
                    continue;
                }
                let v = valuation(x, l, e);
                if best.map_or(true, |b| v < b.0) {
                    best = Some((v, i, j));
                    if v == 0 {
                        break 'search;
                    }
                }
            }
        }
        let Some((v, pi, pj)) = best else { break };
        d.swap(t, pi);
        if pj != t {
            for row in d.iter_mut() {
                row.swap(t, pj);
            }
            ops.push(ColumnOp::Swap(t, pj));
        }
        let lv = l.pow(v);
        let unit_inv = inverse_mod(d[t][t] / lv, modulus).expect("unit");
        for x in d[t].iter_mut() {
            *x = mul_mod(*x, unit_inv, modulus);
        }
        let pivot_row = d[t].clone();
        for row in d.iter_mut().skip(t + 1) {
            if row[t] == 0 {
                continue;
            }
            let f = row[t] / lv;
            for (x, &pr) in row.iter_mut().zip(&pivot_row).skip(t) {
                if pr != 0 {
                    *x = (*x + modulus - mul_mod(f, pr, modulus)) % modulus;
                }
            }
        }
        for j in t + 1..cols {
            if pivot_row[j] != 0 {
                ops.push(ColumnOp::Sub {
                    target: j,
                    source: t,
                    factor: pivot_row[j] / lv,
                });
                d[t][j] = 0;
            }
        }
        valuations.push(v);
    }
    LocalSmith {
        l,
        e,
        modulus,
        columns: cols,
        valuations,
        ops,
    }
}
