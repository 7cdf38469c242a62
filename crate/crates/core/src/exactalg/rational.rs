//! Helpers for arbitrary-precision rationals.
//!
//! Coefficients are `num_rational::BigRational`, which keeps the invariants
//! gcd(|num|, den) = 1 and den > 0 for us. Fixtures and JSON carry rationals
//! as decimal-free strings `"p"` or `"p/q"`.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use super::AlgError;

pub type Rat = BigRational;

pub fn rat_i64(n: i64) -> Rat {
    Rat::from_integer(BigInt::from(n))
}

pub fn rat_frac(n: i64, d: i64) -> Rat {
    Rat::new(BigInt::from(n), BigInt::from(d))
}

/// Parse `"p"` or `"p/q"` with optional sign and surrounding whitespace.
pub fn parse_rat(s: &str) -> Result<Rat, AlgError> {
    let s = s.trim();
    let bad = || AlgError::ParseError(format!("invalid rational literal `{s}`"));
    if let Some((n, d)) = s.split_once('/') {
        let num: BigInt = n.trim().parse().map_err(|_| bad())?;
        let den: BigInt = d.trim().parse().map_err(|_| bad())?;
        if den.is_zero() {
            return Err(AlgError::ParseError(format!("zero denominator in `{s}`")));
        }
        Ok(Rat::new(num, den))
    } else {
        let num: BigInt = s.parse().map_err(|_| bad())?;
        Ok(Rat::from_integer(num))
    }
}

/// Display as `p` or `p/q`, matching the fixture grammar.
pub fn rat_to_string(r: &Rat) -> String {
    if r.denom().is_one() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

/// Reduce a rational vector to a primitive integer vector with positive
/// leading sign. Used to canonicalize nullspace output and projective points.
pub fn primitive_integer_vector(v: &[Rat]) -> Vec<Rat> {
    use num_integer::Integer;
    if v.iter().all(|x| x.is_zero()) {
        return v.to_vec();
    }
    let mut lcm_den = BigInt::one();
    for x in v {
        lcm_den = lcm_den.lcm(x.denom());
    }
    let ints: Vec<BigInt> = v.iter().map(|x| x.numer() * (&lcm_den / x.denom())).collect();
    let mut g = BigInt::zero();
    for n in &ints {
        g = g.gcd(n);
    }
    let lead_neg = ints.iter().find(|n| !n.is_zero()).map(|n| n.is_negative()).unwrap_or(false);
    if lead_neg {
        g = -g;
    }
    ints.into_iter().map(|n| Rat::from_integer(n / &g)).collect()
}

/// Rational reconstruction of `a mod m`: find n/d with |n|, d <= sqrt(m/2),
/// d coprime to m. Returns None when no such representative exists.
pub fn rational_reconstruct(a: &BigInt, m: &BigInt) -> Option<Rat> {
    let bound = (m / 2u32).sqrt();
    let (mut r0, mut r1) = (m.clone(), a.mod_floor_ref(m));
    let (mut t0, mut t1) = (BigInt::zero(), BigInt::one());
    while r1 > bound {
        let q = &r0 / &r1;
        let r2 = &r0 - &q * &r1;
        let t2 = &t0 - &q * &t1;
        r0 = r1;
        r1 = r2;
        t0 = t1;
        t1 = t2;
    }
    if t1.is_zero() || t1.abs() > bound {
        return None;
    }
    use num_integer::Integer;
    if r1.gcd(&t1) != BigInt::one() && !r1.is_zero() {
        return None;
    }
    if t1.is_negative() {
        Some(Rat::new(-r1, -t1))
    } else {
        Some(Rat::new(r1, t1))
    }
}

trait ModFloorRef {
    fn mod_floor_ref(&self, m: &BigInt) -> BigInt;
}

impl ModFloorRef for BigInt {
    fn mod_floor_ref(&self, m: &BigInt) -> BigInt {
        use num_integer::Integer;
        self.mod_floor(m)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parse_and_print() {
        assert_eq!(parse_rat("3/6").unwrap(), rat_frac(1, 2));
        assert_eq!(parse_rat("-4/2").unwrap(), rat_i64(-2));
        assert_eq!(rat_to_string(&rat_frac(-1, 3)), "-1/3");
        assert_eq!(rat_to_string(&rat_i64(7)), "7");
        assert!(parse_rat("1/0").is_err());
        assert!(parse_rat("x").is_err());
    }

    #[test]
    fn primitive_vector() {
        let v = vec![rat_frac(-1, 2), rat_i64(0), rat_frac(3, 4)];
        let p = primitive_integer_vector(&v);
        assert_eq!(p, vec![rat_i64(2), rat_i64(0), rat_i64(-3)]);
        // leading sign positive when the first nonzero entry is positive
        let v = vec![rat_i64(0), rat_frac(2, 3), rat_i64(-4)];
        assert_eq!(primitive_integer_vector(&v), vec![rat_i64(0), rat_i64(1), rat_i64(-6)]);
    }

    #[test]
    fn reconstruct_small_fraction() {
        // 1/3 mod 10007: 3^-1 = 3336
        let m = BigInt::from(10007 * 10009i64);
        let inv3 = {
            // 1/3 mod m via extended gcd
            let mut t = BigInt::zero();
            let mut new_t = BigInt::one();
            let mut r = m.clone();
            let mut new_r = BigInt::from(3);
            while !new_r.is_zero() {
                let q = &r / &new_r;
                let tmp_t = &t - &q * &new_t;
                t = std::mem::replace(&mut new_t, tmp_t);
                let tmp_r = &r - &q * &new_r;
                r = std::mem::replace(&mut new_r, tmp_r);
            }
            use num_integer::Integer;
            t.mod_floor(&m)
        };
        let rec = rational_reconstruct(&inv3, &m).unwrap();
        assert_eq!(rec, rat_frac(1, 3));
    }
}
