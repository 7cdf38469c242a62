//! Prime-field scalars and dense univariate polynomials over F_p.
//!
//! Elements carry their modulus so mixed-modulus arithmetic is caught as a
//! ring mismatch instead of silently producing garbage. The univariate type
//! is the workhorse of the finite-field oracles (resultant sampling, root
//! scans), so it stays dense and allocation-light.

use super::AlgError;

pub fn mul_mod(a: u64, b: u64, p: u64) -> u64 {
    ((a as u128 * b as u128) % p as u128) as u64
}

pub fn pow_mod(mut a: u64, mut e: u64, p: u64) -> u64 {
    let mut acc = 1u64;
    a %= p;
    while e > 0 {
        if e & 1 == 1 {
            acc = mul_mod(acc, a, p);
        }
        a = mul_mod(a, a, p);
        e >>= 1;
    }
    acc
}

/// Inverse mod a prime. Panics on zero: callers check first.
pub fn inv_mod(a: u64, p: u64) -> u64 {
    assert!(a % p != 0, "inverse of zero mod {p}");
    pow_mod(a, p - 2, p)
}

pub fn is_prime_u64(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    for q in [2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31] {
        if n % q == 0 {
            return n == q;
        }
    }
    // deterministic Miller-Rabin for u64
    let d = (n - 1) >> (n - 1).trailing_zeros();
    'witness: for a in [2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        let mut x = pow_mod(a, d, n);
        if x == 1 || x == n - 1 {
            continue;
        }
        let mut r = d;
        while r != n - 1 {
            x = mul_mod(x, x, n);
            r <<= 1;
            if x == n - 1 {
                continue 'witness;
            }
        }
        return false;
    }
    true
}

/// Dense univariate polynomial over F_p, coefficients low-to-high.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FpPoly {
    pub p: u64,
    pub coeffs: Vec<u64>,
}

impl FpPoly {
    pub fn new(p: u64, mut coeffs: Vec<u64>) -> Self {
        for c in &mut coeffs {
            *c %= p;
        }
        let mut f = FpPoly { p, coeffs };
        f.trim();
        f
    }

    pub fn zero(p: u64) -> Self {
        FpPoly { p, coeffs: vec![] }
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn degree(&self) -> Option<usize> {
        if self.is_zero() {
            None
        } else {
            Some(self.coeffs.len() - 1)
        }
    }

    fn trim(&mut self) {
        while self.coeffs.last() == Some(&0) {
            self.coeffs.pop();
        }
    }

    pub fn eval(&self, x: u64) -> u64 {
        let mut acc = 0u64;
        for &c in self.coeffs.iter().rev() {
            acc = (mul_mod(acc, x, self.p) + c) % self.p;
        }
        acc
    }

    pub fn mul(&self, other: &FpPoly) -> FpPoly {
        assert_eq!(self.p, other.p);
        if self.is_zero() || other.is_zero() {
            return FpPoly::zero(self.p);
        }
        let mut out = vec![0u64; self.coeffs.len() + other.coeffs.len() - 1];
        for (i, &a) in self.coeffs.iter().enumerate() {
            if a == 0 {
                continue;
            }
            for (j, &b) in other.coeffs.iter().enumerate() {
                out[i + j] = (out[i + j] + mul_mod(a, b, self.p)) % self.p;
            }
        }
        FpPoly::new(self.p, out)
    }

    pub fn derivative(&self) -> FpPoly {
        let p = self.p;
        let coeffs = self
            .coeffs
            .iter()
            .enumerate()
            .skip(1)
            .map(|(i, &c)| mul_mod(c, (i as u64) % p, p))
            .collect();
        FpPoly::new(p, coeffs)
    }

    /// Remainder of self by other (other nonzero).
    pub fn rem(&self, other: &FpPoly) -> FpPoly {
        assert_eq!(self.p, other.p);
        let p = self.p;
        let dly = other.degree().expect("division by zero polynomial");
        let lead_inv = inv_mod(other.coeffs[dly], p);
        let mut r = self.coeffs.clone();
        while r.len() > dly {
            let k = r.len() - 1;
            let c = r[k] % p;
            if c != 0 {
                let f = mul_mod(c, lead_inv, p);
                for (i, &b) in other.coeffs.iter().enumerate() {
                    let idx = k - dly + i;
                    r[idx] = (r[idx] + p - mul_mod(f, b, p)) % p;
                }
            }
            r.pop();
        }
        FpPoly::new(p, r)
    }

    pub fn gcd(&self, other: &FpPoly) -> FpPoly {
        let mut a = self.clone();
        let mut b = other.clone();
        while !b.is_zero() {
            let r = a.rem(&b);
            a = b;
            b = r;
        }
        if let Some(d) = a.degree() {
            let inv = inv_mod(a.coeffs[d], a.p);
            let p = a.p;
            for c in &mut a.coeffs {
                *c = mul_mod(*c, inv, p);
            }
        }
        a
    }

    pub fn is_squarefree(&self) -> bool {
        match self.degree() {
            None => false,
            Some(0) => true,
            Some(_) => self.gcd(&self.derivative()).degree() == Some(0),
        }
    }

    /// All roots in F_p by full scan; p is small enough (~10^4) for this.
    pub fn roots(&self) -> Vec<u64> {
        let mut out = vec![];
        if self.is_zero() {
            return out;
        }
        for x in 0..self.p {
            if self.eval(x) == 0 {
                out.push(x);
            }
        }
        out
    }

    /// Strip every factor shared with `other`, returning the cofactor.
    pub fn strip_common_factors(&self, other: &FpPoly) -> FpPoly {
        let mut f = self.clone();
        loop {
            let g = f.gcd(other);
            if g.degree().map(|d| d == 0).unwrap_or(true) {
                return f;
            }
            f = f.div_exact(&g);
        }
    }

    pub fn div_exact(&self, other: &FpPoly) -> FpPoly {
        assert_eq!(self.p, other.p);
        let p = self.p;
        let dly = other.degree().expect("division by zero polynomial");
        let lead_inv = inv_mod(other.coeffs[dly], p);
        let mut r = self.coeffs.clone();
        let mut q = vec![0u64; r.len().saturating_sub(dly)];
        while r.len() > dly {
            let k = r.len() - 1;
            let c = r[k] % p;
            if c != 0 {
                let f = mul_mod(c, lead_inv, p);
                q[k - dly] = f;
                for (i, &b) in other.coeffs.iter().enumerate() {
                    let idx = k - dly + i;
                    r[idx] = (r[idx] + p - mul_mod(f, b, p)) % p;
                }
            }
            r.pop();
        }
        let rem = FpPoly::new(p, r);
        assert!(rem.is_zero(), "div_exact called on a non-divisor");
        FpPoly::new(p, q)
    }
}

/// Lagrange interpolation through (xs[i], ys[i]) with distinct xs.
pub fn interpolate(p: u64, xs: &[u64], ys: &[u64]) -> FpPoly {
    let n = xs.len();
    let mut acc = FpPoly::zero(p);
    for i in 0..n {
        // numerator polynomial prod_{j != i} (x - xs[j]), scaled
        let mut num = FpPoly::new(p, vec![1]);
        let mut denom = 1u64;
        for j in 0..n {
            if i == j {
                continue;
            }
            num = num.mul(&FpPoly::new(p, vec![(p - xs[j]) % p, 1]));
            denom = mul_mod(denom, (xs[i] + p - xs[j]) % p, p);
        }
        let scale = mul_mod(ys[i], inv_mod(denom, p), p);
        let term: Vec<u64> = num.coeffs.iter().map(|&c| mul_mod(c, scale, p)).collect();
        let term = FpPoly::new(p, term);
        let mut coeffs = vec![0u64; acc.coeffs.len().max(term.coeffs.len())];
        for (k, &c) in acc.coeffs.iter().enumerate() {
            coeffs[k] = c;
        }
        for (k, &c) in term.coeffs.iter().enumerate() {
            coeffs[k] = (coeffs[k] + c) % p;
        }
        acc = FpPoly::new(p, coeffs);
    }
    acc
}

pub fn check_prime(p: u64) -> Result<(), AlgError> {
    if is_prime_u64(p) {
        Ok(())
    } else {
        Err(AlgError::BadPrime(format!("{p} is not prime")))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn arithmetic_and_roots() {
        let p = 10007;
        // (x-3)(x-5) = x^2 -8x + 15
        let f = FpPoly::new(p, vec![15, p - 8, 1]);
        assert_eq!(f.roots(), vec![3, 5]);
        assert!(f.is_squarefree());
        let g = f.mul(&f);
        assert!(!g.is_squarefree());
        assert_eq!(g.strip_common_factors(&f).degree(), Some(0));
    }

    #[test]
    fn interpolation_roundtrip() {
        let p = 101;
        let f = FpPoly::new(p, vec![7, 0, 3, 9]);
        let xs: Vec<u64> = (0..4).collect();
        let ys: Vec<u64> = xs.iter().map(|&x| f.eval(x)).collect();
        assert_eq!(interpolate(p, &xs, &ys), f);
    }

    #[test]
    fn primality() {
        for p in [10007u64, 10009, 10037, 10039] {
            assert!(is_prime_u64(p));
        }
        assert!(!is_prime_u64(10011));
    }
}
