//! Exact rational matrices and certified nullspace computation.
//!
//! Small systems go through fraction-free Bareiss elimination. Large
//! condition matrices (hundreds of rows, ~200 columns) use a multi-modular
//! reduced-echelon computation with rational reconstruction. Either way the
//! result is certified over Q: every returned vector is verified against
//! every row exactly, and since nullity mod p can only overshoot, exact
//! verification of nullity-mod-p independent vectors pins the dimension.
//!
//! Both paths canonicalize to the same basis: for each free column f the
//! vector with 1 in position f, the negated reduced-echelon entries in the
//! pivot positions, and 0 in the other free columns, scaled to a primitive
//! integer vector.

use num_bigint::BigInt;
use num_traits::{One, Zero};

use super::fp::{inv_mod, is_prime_u64, mul_mod};
use super::rational::{primitive_integer_vector, rational_reconstruct, Rat};
use super::AlgError;

#[derive(Clone, PartialEq, Eq, Debug)]
pub struct RatMatrix {
    rows: usize,
    cols: usize,
    data: Vec<Rat>,
}

impl RatMatrix {
    pub fn new(rows: usize, cols: usize) -> Self {
        RatMatrix { rows, cols, data: vec![Rat::zero(); rows * cols] }
    }

    pub fn from_rows(rows: Vec<Vec<Rat>>) -> Result<Self, AlgError> {
        let r = rows.len();
        let c = rows.first().map(|x| x.len()).unwrap_or(0);
        if rows.iter().any(|x| x.len() != c) {
            return Err(AlgError::ShapeMismatch);
        }
        Ok(RatMatrix { rows: r, cols: c, data: rows.into_iter().flatten().collect() })
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::new(n, n);
        for i in 0..n {
            m[(i, i)] = Rat::one();
        }
        m
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn row(&self, i: usize) -> &[Rat] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn transpose(&self) -> RatMatrix {
        let mut t = RatMatrix::new(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                t[(j, i)] = self[(i, j)].clone();
            }
        }
        t
    }

    pub fn mul(&self, other: &RatMatrix) -> Result<RatMatrix, AlgError> {
        if self.cols != other.rows {
            return Err(AlgError::ShapeMismatch);
        }
        let mut out = RatMatrix::new(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                if self[(i, k)].is_zero() {
                    continue;
                }
                for j in 0..other.cols {
                    let t = &self[(i, k)] * &other[(k, j)];
                    out[(i, j)] += t;
                }
            }
        }
        Ok(out)
    }

    pub fn mul_vec(&self, v: &[Rat]) -> Result<Vec<Rat>, AlgError> {
        if v.len() != self.cols {
            return Err(AlgError::ShapeMismatch);
        }
        Ok((0..self.rows)
            .map(|i| self.row(i).iter().zip(v).map(|(a, b)| a * b).sum())
            .collect())
    }

    pub fn is_symmetric(&self) -> bool {
        self.rows == self.cols
            && (0..self.rows).all(|i| (0..i).all(|j| self[(i, j)] == self[(j, i)]))
    }

    /// Basis of the right null space, canonical and certified.
    pub fn nullspace(&self) -> Vec<Vec<Rat>> {
        if self.rows == 0 || self.cols == 0 {
            return (0..self.cols)
                .map(|f| {
                    let mut v = vec![Rat::zero(); self.cols];
                    v[f] = Rat::one();
                    v
                })
                .collect();
        }
        let int_rows = self.primitive_int_rows();
        let basis = if self.rows * self.cols <= 4096 {
            bareiss_nullspace(&int_rows, self.cols)
        } else {
            modular_nullspace(&int_rows, self.cols)
        };
        // exact certification: every vector annihilates every row
        for v in &basis {
            for row in &int_rows {
                let dot: BigInt = row.iter().zip(v).map(|(a, b)| a * b.numer()).sum();
                assert!(dot.is_zero(), "nullspace certification failed");
            }
        }
        basis
    }

    /// Certified rank via the nullspace dimension.
    pub fn rank(&self) -> usize {
        self.cols - self.nullspace().len()
    }

    /// Solve M x = b exactly; None when inconsistent. When the system is
    /// underdetermined an arbitrary (canonical) solution is returned.
    pub fn solve(&self, b: &[Rat]) -> Option<Vec<Rat>> {
        assert_eq!(b.len(), self.rows);
        // nullspace of [M | -b]: solutions with last coordinate  != 0
        let mut aug = RatMatrix::new(self.rows, self.cols + 1);
        for i in 0..self.rows {
            for j in 0..self.cols {
                aug[(i, j)] = self[(i, j)].clone();
            }
            aug[(i, self.cols)] = -b[i].clone();
        }
        let ns = aug.nullspace();
        for v in ns {
            if !v[self.cols].is_zero() {
                let t = v[self.cols].clone();
                return Some(v[..self.cols].iter().map(|x| x / &t).collect());
            }
        }
        None
    }

    pub fn det(&self) -> Result<Rat, AlgError> {
        if self.rows != self.cols {
            return Err(AlgError::ShapeMismatch);
        }
        let n = self.rows;
        if n == 0 {
            return Ok(Rat::one());
        }
        // small sizes only (pencil work); cofactor expansion is fine
        if n == 1 {
            return Ok(self[(0, 0)].clone());
        }
        let mut acc = Rat::zero();
        for j in 0..n {
            if self[(0, j)].is_zero() {
                continue;
            }
            let mut sub = RatMatrix::new(n - 1, n - 1);
            for i in 1..n {
                let mut cc = 0;
                for k in 0..n {
                    if k == j {
                        continue;
                    }
                    sub[(i - 1, cc)] = self[(i, k)].clone();
                    cc += 1;
                }
            }
            let term = &self[(0, j)] * sub.det()?;
            if j % 2 == 0 {
                acc += term;
            } else {
                acc -= term;
            }
        }
        Ok(acc)
    }

    fn primitive_int_rows(&self) -> Vec<Vec<BigInt>> {
        let mut out = Vec::with_capacity(self.rows);
        let mut seen = std::collections::BTreeSet::new();
        for i in 0..self.rows {
            let prim = primitive_integer_vector(self.row(i));
            let ints: Vec<BigInt> = prim.iter().map(|c| c.numer().clone()).collect();
            if ints.iter().all(|c| c.is_zero()) {
                continue;
            }
            let key = ints.iter().map(|c| c.to_string()).collect::<Vec<_>>().join(",");
            if seen.insert(key) {
                out.push(ints);
            }
        }
        out
    }
}

impl std::ops::Index<(usize, usize)> for RatMatrix {
    type Output = Rat;
    fn index(&self, (i, j): (usize, usize)) -> &Rat {
        &self.data[i * self.cols + j]
    }
}

impl std::ops::IndexMut<(usize, usize)> for RatMatrix {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut Rat {
        &mut self.data[i * self.cols + j]
    }
}

/// Canonical nullspace from a reduced echelon description.
fn nullspace_from_rref(
    pivot_cols: &[usize],
    rref_rows: &[Vec<Rat>],
    cols: usize,
) -> Vec<Vec<Rat>> {
    let pivot_set: std::collections::BTreeSet<usize> = pivot_cols.iter().copied().collect();
    let mut basis = vec![];
    for f in 0..cols {
        if pivot_set.contains(&f) {
            continue;
        }
        let mut v = vec![Rat::zero(); cols];
        v[f] = Rat::one();
        for (r, &pc) in pivot_cols.iter().enumerate() {
            v[pc] = -rref_rows[r][f].clone();
        }
        basis.push(primitive_integer_vector(&v));
    }
    basis
}

/// Fraction-free Bareiss elimination to echelon form, then exact reduced
/// echelon extraction. Leftmost-nonzero pivoting with first-available rows.
fn bareiss_nullspace(int_rows: &[Vec<BigInt>], cols: usize) -> Vec<Vec<Rat>> {
    let mut m: Vec<Vec<BigInt>> = int_rows.to_vec();
    let rows = m.len();
    let mut pivot_cols = vec![];
    let mut prev = BigInt::one();
    let mut r = 0usize;
    for c in 0..cols {
        let Some(pr) = (r..rows).find(|&i| !m[i][c].is_zero()) else { continue };
        m.swap(r, pr);
        for i in 0..rows {
            if i == r {
                continue;
            }
            // Bareiss one-step update keeps entries integral
            for j in 0..cols {
                if j == c {
                    continue;
                }
                let t = &m[r][c] * &m[i][j] - &m[i][c] * &m[r][j];
                m[i][j] = &t / &prev;
            }
            m[i][c] = BigInt::zero();
        }
        prev = m[r][c].clone();
        pivot_cols.push(c);
        r += 1;
        if r == rows {
            break;
        }
    }
    // rows 0..r now diagonal on pivot columns; divide out pivots
    let rref: Vec<Vec<Rat>> = (0..r)
        .map(|i| {
            let p = m[i][pivot_cols[i]].clone();
            (0..cols)
                .map(|j| Rat::new(m[i][j].clone(), p.clone()))
                .collect()
        })
        .collect();
    nullspace_from_rref(&pivot_cols, &rref, cols)
}

/// Fixed deterministic sequence of 62-bit primes.
fn prime_sequence() -> impl Iterator<Item = u64> {
    let mut cand = (1u64 << 62) - 1;
    std::iter::from_fn(move || {
        loop {
            cand -= 1;
            if is_prime_u64(cand) {
                return Some(cand);
            }
        }
    })
}

struct ModularRref {
    p: u64,
    pivot_cols: Vec<usize>,
    /// reduced rows restricted to free columns, pivot-row major
    rows: Vec<Vec<u64>>,
}

fn rref_mod_p(int_rows: &[Vec<BigInt>], cols: usize, p: u64) -> ModularRref {
    let pb = BigInt::from(p);
    let mut pivot_cols: Vec<usize> = vec![];
    // maintained in reduced form; each entry is (pivot col, full row)
    let mut rref: Vec<Vec<u64>> = vec![];
    for row in int_rows {
        use num_integer::Integer;
        let mut v: Vec<u64> = row
            .iter()
            .map(|c| c.mod_floor(&pb).to_string().parse::<u64>().unwrap())
            .collect();
        // reduce against existing pivots
        for (r, &pc) in pivot_cols.iter().enumerate() {
            let f = v[pc];
            if f != 0 {
                for j in 0..cols {
                    v[j] = (v[j] + p - mul_mod(f, rref[r][j], p)) % p;
                }
            }
        }
        let Some(c) = v.iter().position(|&x| x != 0) else { continue };
        let inv = inv_mod(v[c], p);
        for x in &mut v {
            *x = mul_mod(*x, inv, p);
        }
        // reduce previous rows by the new one
        for (r, _) in pivot_cols.iter().enumerate() {
            let f = rref[r][c];
            if f != 0 {
                for j in 0..cols {
                    rref[r][j] = (rref[r][j] + p - mul_mod(f, v[j], p)) % p;
                }
            }
        }
        // insert keeping pivot columns sorted
        let pos = pivot_cols.partition_point(|&x| x < c);
        pivot_cols.insert(pos, c);
        rref.insert(pos, v);
    }
    ModularRref { p, pivot_cols, rows: rref }
}

fn modular_nullspace(int_rows: &[Vec<BigInt>], cols: usize) -> Vec<Vec<Rat>> {
    let mut primes = prime_sequence();
    let mut images: Vec<ModularRref> = vec![];
    let max_rounds = 40;
    for _ in 0..max_rounds {
        images.push(rref_mod_p(int_rows, cols, primes.next().unwrap()));
        // keep only images agreeing with the best (lowest-rank is wrong;
        // over Q pivots move left / rank can only drop mod p, so the best
        // candidates have maximal rank, then lexicographically largest
        // pivot set is impossible -- use majority of max-rank images)
        let max_rank = images.iter().map(|im| im.pivot_cols.len()).max().unwrap();
        let good: Vec<&ModularRref> =
            images.iter().filter(|im| im.pivot_cols.len() == max_rank).collect();
        let pivot_cols = good[0].pivot_cols.clone();
        if !good.iter().all(|im| im.pivot_cols == pivot_cols) {
            continue;
        }
        if good.len() < 2 && images.len() < 3 {
            continue;
        }
        // CRT-combine RREF entries and reconstruct
        let mut modulus = BigInt::one();
        for im in &good {
            modulus *= BigInt::from(im.p);
        }
        let mut ok = true;
        let mut rref_rows: Vec<Vec<Rat>> = vec![];
        'rows: for r in 0..pivot_cols.len() {
            let mut row = Vec::with_capacity(cols);
            for j in 0..cols {
                let mut acc = BigInt::zero();
                let mut m_acc = BigInt::one();
                for im in &good {
                    let pi = BigInt::from(im.p);
                    // CRT step
                    use num_integer::Integer;
                    let cur = acc.mod_floor(&pi);
                    let target = BigInt::from(im.rows[r][j]);
                    let diff = (target - cur).mod_floor(&pi);
                    let m_inv = mod_inverse(&m_acc, &pi);
                    let t = (diff * m_inv).mod_floor(&pi);
                    acc += &m_acc * t;
                    m_acc *= &pi;
                }
                match rational_reconstruct(&acc, &modulus) {
                    Some(q) => row.push(q),
                    None => {
                        ok = false;
                        break 'rows;
                    }
                }
            }
            rref_rows.push(row);
        }
        if !ok {
            continue;
        }
        let basis = nullspace_from_rref(&pivot_cols, &rref_rows, cols);
        // verify exactly; certification makes the dimension rigorous
        let verified = basis.iter().all(|v| {
            int_rows
                .iter()
                .all(|row| row.iter().zip(v).map(|(a, b)| a * b.numer()).sum::<BigInt>().is_zero())
        });
        if verified {
            return basis;
        }
    }
    panic!("modular nullspace did not stabilize within {max_rounds} primes");
}

fn mod_inverse(a: &BigInt, m: &BigInt) -> BigInt {
    use num_integer::Integer;
    let e = a.extended_gcd(m);
    assert!(e.gcd.is_one(), "non-invertible CRT modulus");
    e.x.mod_floor(m)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactalg::rational::{rat_frac, rat_i64};

    fn m(rows: &[&[i64]]) -> RatMatrix {
        RatMatrix::from_rows(
            rows.iter().map(|r| r.iter().map(|&x| rat_i64(x)).collect()).collect(),
        )
        .unwrap()
    }

    #[test]
    fn nullspace_examples() {
        // identity 3x3 -> empty
        assert!(RatMatrix::identity(3).nullspace().is_empty());
        // zero 2x3 -> dimension 3
        let z = RatMatrix::new(2, 3);
        assert_eq!(z.nullspace().len(), 3);
        // a rank-1 system
        let a = m(&[&[1, 2, 3], &[2, 4, 6]]);
        let ns = a.nullspace();
        assert_eq!(ns.len(), 2);
        for v in &ns {
            assert!(a.mul_vec(v).unwrap().iter().all(|x| x.is_zero()));
        }
    }

    #[test]
    fn modular_path_matches_bareiss() {
        // force both paths on the same matrix and compare
        let rows: Vec<Vec<BigInt>> = (0..6)
            .map(|i: i64| (0..5).map(|j: i64| BigInt::from((i * 7 + j * j * 3) % 11 - 5)).collect())
            .collect();
        let b = bareiss_nullspace(&rows, 5);
        let mm = modular_nullspace(&rows, 5);
        assert_eq!(b, mm);
    }

    #[test]
    fn rank_and_solve() {
        let a = m(&[&[2, 0], &[0, 3], &[2, 3]]);
        assert_eq!(a.rank(), 2);
        let sol = a.solve(&[rat_i64(4), rat_i64(6), rat_i64(10)]).unwrap();
        assert_eq!(sol, vec![rat_i64(2), rat_i64(2)]);
        assert!(a.solve(&[rat_i64(4), rat_i64(6), rat_i64(11)]).is_none());
    }

    #[test]
    fn det_small() {
        let a = m(&[&[1, 2], &[3, 4]]);
        assert_eq!(a.det().unwrap(), rat_i64(-2));
        let b = RatMatrix::from_rows(vec![
            vec![rat_frac(1, 2), rat_i64(0)],
            vec![rat_i64(0), rat_frac(2, 3)],
        ])
        .unwrap();
        assert_eq!(b.det().unwrap(), rat_frac(1, 3));
    }
}
