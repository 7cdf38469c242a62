//! Sparse multivariate polynomials over the rationals or a prime field.
//!
//! Terms live in a BTreeMap keyed by graded reverse-lexicographic monomial
//! order, so equal polynomials iterate, print and serialize identically.
//! Stored coefficients are never zero.
//!
//! Literal grammar (fixtures, JSON, Display):
//!
//! ```text
//! poly  := ['-'] term (('+'|'-') term)*
//! term  := coeff | mono | coeff '*' mono
//! coeff := int | int '/' posint          (decimal-free)
//! mono  := var ('*' var)*
//! var   := 'x' index ('^' exponent)?
//! ```

use std::collections::BTreeMap;
use std::fmt;

use num_traits::{One, Signed, Zero};

use super::fp::{inv_mod, mul_mod};
use super::rational::{parse_rat, rat_to_string, Rat};
use super::AlgError;

/// Coefficient ring tag.
#[derive(Clone, Copy, PartialEq, Eq, Debug, Hash)]
pub enum Ring {
    Rationals,
    PrimeField(u64),
}

impl fmt::Display for Ring {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Ring::Rationals => write!(f, "Q"),
            Ring::PrimeField(p) => write!(f, "F_{p}"),
        }
    }
}

/// A coefficient in one of the supported rings.
#[derive(Clone, PartialEq, Eq, Debug)]
pub enum Coeff {
    Q(Rat),
    Fp(u64),
}

impl Coeff {
    pub fn is_zero(&self) -> bool {
        match self {
            Coeff::Q(r) => r.is_zero(),
            Coeff::Fp(v) => *v == 0,
        }
    }

    pub fn as_rat(&self) -> Option<&Rat> {
        match self {
            Coeff::Q(r) => Some(r),
            Coeff::Fp(_) => None,
        }
    }
}

/// Exponent vector with grevlex `Ord`.
#[derive(Clone, PartialEq, Eq, Debug, Hash)]
pub struct Mono(pub Vec<u16>);

impl Mono {
    pub fn degree(&self) -> u32 {
        self.0.iter().map(|&e| e as u32).sum()
    }

    fn checked_add(&self, other: &Mono) -> Mono {
        Mono(self.0.iter().zip(&other.0).map(|(a, b)| a + b).collect())
    }
}

impl Ord for Mono {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        use std::cmp::Ordering;
        match self.degree().cmp(&other.degree()) {
            Ordering::Equal => {}
            ord => return ord,
        }
        // grevlex tie-break: larger exponent on the latest differing
        // variable means the *smaller* monomial
        for i in (0..self.0.len()).rev() {
            match self.0[i].cmp(&other.0[i]) {
                Ordering::Equal => {}
                Ordering::Less => return Ordering::Greater,
                Ordering::Greater => return Ordering::Less,
            }
        }
        Ordering::Equal
    }
}

impl PartialOrd for Mono {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}

/// Sparse multivariate polynomial.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct MultiPoly {
    ring: Ring,
    nvars: usize,
    terms: BTreeMap<Mono, Coeff>,
}

impl MultiPoly {
    pub fn zero(ring: Ring, nvars: usize) -> Self {
        MultiPoly { ring, nvars, terms: BTreeMap::new() }
    }

    pub fn constant(ring: Ring, nvars: usize, c: Coeff) -> Self {
        let mut p = Self::zero(ring, nvars);
        if !c.is_zero() {
            p.terms.insert(Mono(vec![0; nvars]), c);
        }
        p
    }

    pub fn one(ring: Ring, nvars: usize) -> Self {
        let c = match ring {
            Ring::Rationals => Coeff::Q(Rat::one()),
            Ring::PrimeField(_) => Coeff::Fp(1),
        };
        Self::constant(ring, nvars, c)
    }

    pub fn var(ring: Ring, nvars: usize, i: usize) -> Self {
        assert!(i < nvars);
        let mut e = vec![0u16; nvars];
        e[i] = 1;
        let c = match ring {
            Ring::Rationals => Coeff::Q(Rat::one()),
            Ring::PrimeField(_) => Coeff::Fp(1),
        };
        let mut p = Self::zero(ring, nvars);
        p.terms.insert(Mono(e), c);
        p
    }

    pub fn from_monomial(ring: Ring, nvars: usize, exps: &[u16], c: Coeff) -> Self {
        assert_eq!(exps.len(), nvars);
        let mut p = Self::zero(ring, nvars);
        p.add_term(Mono(exps.to_vec()), c);
        p
    }

    /// Build over Q from (exponents, coefficient) pairs.
    pub fn from_terms(nvars: usize, terms: &[(&[u16], Rat)]) -> Self {
        let mut p = Self::zero(Ring::Rationals, nvars);
        for (exps, c) in terms {
            assert_eq!(exps.len(), nvars);
            p.add_term(Mono(exps.to_vec()), Coeff::Q(c.clone()));
        }
        p
    }

    pub fn ring(&self) -> Ring {
        self.ring
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    /// Iterate terms in ascending grevlex order.
    pub fn terms(&self) -> impl Iterator<Item = (&Mono, &Coeff)> {
        self.terms.iter()
    }

    pub fn coeff(&self, m: &Mono) -> Coeff {
        self.terms.get(m).cloned().unwrap_or(match self.ring {
            Ring::Rationals => Coeff::Q(Rat::zero()),
            Ring::PrimeField(_) => Coeff::Fp(0),
        })
    }

    /// Total degree; None for the zero polynomial.
    pub fn degree(&self) -> Option<u32> {
        self.terms.keys().map(|m| m.degree()).max()
    }

    pub fn is_homogeneous(&self) -> bool {
        let mut degs = self.terms.keys().map(|m| m.degree());
        match degs.next() {
            None => true,
            Some(d) => degs.all(|e| e == d),
        }
    }

    /// Leading term in grevlex (largest monomial).
    pub fn leading(&self) -> Option<(&Mono, &Coeff)> {
        self.terms.iter().next_back()
    }

    fn coeff_add(&self, a: &Coeff, b: &Coeff) -> Result<Coeff, AlgError> {
        match (a, b, self.ring) {
            (Coeff::Q(x), Coeff::Q(y), Ring::Rationals) => Ok(Coeff::Q(x + y)),
            (Coeff::Fp(x), Coeff::Fp(y), Ring::PrimeField(p)) => Ok(Coeff::Fp((x + y) % p)),
            _ => Err(AlgError::RingMismatch),
        }
    }

    fn coeff_mul(&self, a: &Coeff, b: &Coeff) -> Result<Coeff, AlgError> {
        match (a, b, self.ring) {
            (Coeff::Q(x), Coeff::Q(y), Ring::Rationals) => Ok(Coeff::Q(x * y)),
            (Coeff::Fp(x), Coeff::Fp(y), Ring::PrimeField(p)) => Ok(Coeff::Fp(mul_mod(*x, *y, p))),
            _ => Err(AlgError::RingMismatch),
        }
    }

    fn add_term(&mut self, m: Mono, c: Coeff) {
        if c.is_zero() {
            return;
        }
        match self.terms.remove(&m) {
            None => {
                self.terms.insert(m, c);
            }
            Some(old) => {
                let sum = self.coeff_add(&old, &c).expect("term ring invariant");
                if !sum.is_zero() {
                    self.terms.insert(m, sum);
                }
            }
        }
    }

    fn compatible(&self, other: &MultiPoly) -> Result<(), AlgError> {
        if self.ring != other.ring {
            return Err(AlgError::RingMismatch);
        }
        if self.nvars != other.nvars {
            return Err(AlgError::ArityMismatch);
        }
        Ok(())
    }

    pub fn add(&self, other: &MultiPoly) -> Result<MultiPoly, AlgError> {
        self.compatible(other)?;
        let mut out = self.clone();
        for (m, c) in &other.terms {
            out.add_term(m.clone(), c.clone());
        }
        Ok(out)
    }

    pub fn neg(&self) -> MultiPoly {
        let mut out = self.clone();
        for c in out.terms.values_mut() {
            *c = match (&*c, self.ring) {
                (Coeff::Q(x), _) => Coeff::Q(-x),
                (Coeff::Fp(x), Ring::PrimeField(p)) => Coeff::Fp((p - x) % p),
                _ => unreachable!(),
            };
        }
        out
    }

    pub fn sub(&self, other: &MultiPoly) -> Result<MultiPoly, AlgError> {
        self.add(&other.neg())
    }

    pub fn mul(&self, other: &MultiPoly) -> Result<MultiPoly, AlgError> {
        self.compatible(other)?;
        let mut out = MultiPoly::zero(self.ring, self.nvars);
        for (ma, ca) in &self.terms {
            for (mb, cb) in &other.terms {
                out.add_term(ma.checked_add(mb), self.coeff_mul(ca, cb)?);
            }
        }
        Ok(out)
    }

    pub fn scale(&self, c: &Coeff) -> MultiPoly {
        if c.is_zero() {
            return MultiPoly::zero(self.ring, self.nvars);
        }
        let mut out = MultiPoly::zero(self.ring, self.nvars);
        for (m, a) in &self.terms {
            out.terms.insert(m.clone(), self.coeff_mul(a, c).expect("scale ring"));
        }
        out
    }

    pub fn pow(&self, k: u32) -> Result<MultiPoly, AlgError> {
        let mut acc = MultiPoly::one(self.ring, self.nvars);
        for _ in 0..k {
            acc = acc.mul(self)?;
        }
        Ok(acc)
    }

    /// Exact division; `NotDivisible` when a nonzero remainder survives.
    pub fn exact_div(&self, divisor: &MultiPoly) -> Result<MultiPoly, AlgError> {
        self.compatible(divisor)?;
        if divisor.is_zero() {
            return Err(AlgError::ZeroDivisor);
        }
        let (dm, dc) = divisor.leading().expect("nonzero divisor");
        let dc_inv = match (dc, self.ring) {
            (Coeff::Q(x), _) => Coeff::Q(x.recip()),
            (Coeff::Fp(x), Ring::PrimeField(p)) => Coeff::Fp(inv_mod(*x, p)),
            _ => unreachable!(),
        };
        let mut rem = self.clone();
        let mut quo = MultiPoly::zero(self.ring, self.nvars);
        while let Some((rm, rc)) = rem.leading() {
            let mut step = Vec::with_capacity(self.nvars);
            for (a, b) in rm.0.iter().zip(&dm.0) {
                if a < b {
                    return Err(AlgError::NotDivisible);
                }
                step.push(a - b);
            }
            let c = self.coeff_mul(rc, &dc_inv)?;
            let step = Mono(step);
            let mut t = MultiPoly::zero(self.ring, self.nvars);
            t.terms.insert(step.clone(), c.clone());
            rem = rem.sub(&t.mul(divisor)?)?;
            quo.add_term(step, c);
        }
        Ok(quo)
    }

    pub fn divides(&self, other: &MultiPoly) -> bool {
        other.exact_div(self).is_ok()
    }

    /// Normal form modulo a single divisor: the unique remainder whose terms
    /// are not divisible by the divisor's leading monomial. Linear in self
    /// for a fixed divisor, and zero exactly when the divisor divides self.
    pub fn rem(&self, divisor: &MultiPoly) -> Result<MultiPoly, AlgError> {
        self.compatible(divisor)?;
        if divisor.is_zero() {
            return Err(AlgError::ZeroDivisor);
        }
        let (dm, dc) = divisor.leading().expect("nonzero divisor");
        let dm = dm.clone();
        let dc_inv = match (dc, self.ring) {
            (Coeff::Q(x), _) => Coeff::Q(x.recip()),
            (Coeff::Fp(x), Ring::PrimeField(p)) => Coeff::Fp(inv_mod(*x, p)),
            _ => unreachable!(),
        };
        let mut work = self.clone();
        let mut out = MultiPoly::zero(self.ring, self.nvars);
        while let Some((wm, wc)) = work.leading().map(|(m, c)| (m.clone(), c.clone())) {
            let divisible = wm.0.iter().zip(&dm.0).all(|(a, b)| a >= b);
            if divisible {
                let step = Mono(wm.0.iter().zip(&dm.0).map(|(a, b)| a - b).collect());
                let c = self.coeff_mul(&wc, &dc_inv)?;
                let mut t = MultiPoly::zero(self.ring, self.nvars);
                t.terms.insert(step, c);
                work = work.sub(&t.mul(divisor)?)?;
            } else {
                // move the leading term to the output
                work.terms.remove(&wm);
                out.terms.insert(wm, wc);
            }
        }
        Ok(out)
    }

    /// Formal partial derivative.
    pub fn differentiate(&self, var: usize) -> Result<MultiPoly, AlgError> {
        if var >= self.nvars {
            return Err(AlgError::IndexOutOfRange);
        }
        let mut out = MultiPoly::zero(self.ring, self.nvars);
        for (m, c) in &self.terms {
            let e = m.0[var];
            if e == 0 {
                continue;
            }
            let mut exps = m.0.clone();
            exps[var] = e - 1;
            let factor = match self.ring {
                Ring::Rationals => Coeff::Q(Rat::from_integer((e as i64).into())),
                Ring::PrimeField(p) => Coeff::Fp(e as u64 % p),
            };
            out.add_term(Mono(exps), self.coeff_mul(c, &factor)?);
        }
        Ok(out)
    }

    /// Iterated partials per the multi-index `alpha`.
    pub fn differentiate_multi(&self, alpha: &[u16]) -> Result<MultiPoly, AlgError> {
        let mut out = self.clone();
        for (v, &k) in alpha.iter().enumerate() {
            for _ in 0..k {
                out = out.differentiate(v)?;
            }
        }
        Ok(out)
    }

    /// Substitution f(images[0], ..., images[n-1]).
    pub fn compose(&self, images: &[MultiPoly]) -> Result<MultiPoly, AlgError> {
        if images.len() != self.nvars {
            return Err(AlgError::ArityMismatch);
        }
        let (tring, tvars) = match images.first() {
            Some(g) => (g.ring, g.nvars),
            None => (self.ring, 0),
        };
        for g in images {
            if g.ring != tring {
                return Err(AlgError::RingMismatch);
            }
            if g.nvars != tvars {
                return Err(AlgError::ArityMismatch);
            }
        }
        if tring != self.ring {
            return Err(AlgError::RingMismatch);
        }
        // cache powers per image
        let max_e: Vec<u16> = (0..self.nvars)
            .map(|v| self.terms.keys().map(|m| m.0[v]).max().unwrap_or(0))
            .collect();
        let mut powers: Vec<Vec<MultiPoly>> = Vec::with_capacity(self.nvars);
        for (v, g) in images.iter().enumerate() {
            let mut ps = vec![MultiPoly::one(tring, tvars)];
            for k in 1..=max_e[v] as usize {
                let next = ps[k - 1].mul(g)?;
                ps.push(next);
            }
            powers.push(ps);
        }
        let mut out = MultiPoly::zero(tring, tvars);
        for (m, c) in &self.terms {
            let mut t = MultiPoly::constant(tring, tvars, c.clone());
            for (v, &e) in m.0.iter().enumerate() {
                if e > 0 {
                    t = t.mul(&powers[v][e as usize])?;
                }
            }
            out = out.add(&t)?;
        }
        Ok(out)
    }

    pub fn eval_rat(&self, point: &[Rat]) -> Result<Rat, AlgError> {
        if point.len() != self.nvars {
            return Err(AlgError::ArityMismatch);
        }
        if self.ring != Ring::Rationals {
            return Err(AlgError::RingMismatch);
        }
        let mut acc = Rat::zero();
        for (m, c) in &self.terms {
            let mut t = match c {
                Coeff::Q(r) => r.clone(),
                _ => unreachable!(),
            };
            for (v, &e) in m.0.iter().enumerate() {
                for _ in 0..e {
                    t *= &point[v];
                }
            }
            acc += t;
        }
        Ok(acc)
    }

    pub fn eval_fp(&self, point: &[u64]) -> Result<u64, AlgError> {
        if point.len() != self.nvars {
            return Err(AlgError::ArityMismatch);
        }
        let p = match self.ring {
            Ring::PrimeField(p) => p,
            _ => return Err(AlgError::RingMismatch),
        };
        let mut acc = 0u64;
        for (m, c) in &self.terms {
            let mut t = match c {
                Coeff::Fp(v) => *v,
                _ => unreachable!(),
            };
            for (v, &e) in m.0.iter().enumerate() {
                t = mul_mod(t, super::fp::pow_mod(point[v] % p, e as u64, p), p);
            }
            acc = (acc + t) % p;
        }
        Ok(acc)
    }

    /// Coefficient-wise reduction to F_p.
    pub fn mod_p(&self, p: u64) -> Result<MultiPoly, AlgError> {
        super::fp::check_prime(p)?;
        if self.ring != Ring::Rationals {
            return Err(AlgError::RingMismatch);
        }
        let mut out = MultiPoly::zero(Ring::PrimeField(p), self.nvars);
        let pb = num_bigint::BigInt::from(p);
        for (m, c) in &self.terms {
            let r = c.as_rat().unwrap();
            use num_integer::Integer;
            let den = r.denom().mod_floor(&pb);
            if den.is_zero() {
                return Err(AlgError::BadPrime(format!(
                    "denominator of {} divisible by {p}",
                    rat_to_string(r)
                )));
            }
            let num = r.numer().mod_floor(&pb);
            let num_u = num.to_string().parse::<u64>().unwrap();
            let den_u = den.to_string().parse::<u64>().unwrap();
            out.add_term(m.clone(), Coeff::Fp(mul_mod(num_u, inv_mod(den_u, p), p)));
        }
        Ok(out)
    }

    /// Rename into a larger variable set: variable i becomes mapping[i].
    pub fn embed(&self, new_nvars: usize, mapping: &[usize]) -> MultiPoly {
        assert_eq!(mapping.len(), self.nvars);
        let mut out = MultiPoly::zero(self.ring, new_nvars);
        for (m, c) in &self.terms {
            let mut exps = vec![0u16; new_nvars];
            for (v, &e) in m.0.iter().enumerate() {
                exps[mapping[v]] += e;
            }
            out.add_term(Mono(exps), c.clone());
        }
        out
    }

    /// Content: gcd of integer numerators over lcm of denominators (Q only).
    pub fn primitive_part(&self) -> MultiPoly {
        if self.is_zero() || self.ring != Ring::Rationals {
            return self.clone();
        }
        let coeffs: Vec<Rat> = self.terms.values().map(|c| c.as_rat().unwrap().clone()).collect();
        let prim = super::rational::primitive_integer_vector(&coeffs);
        let mut out = MultiPoly::zero(self.ring, self.nvars);
        for ((m, _), c) in self.terms.iter().zip(prim) {
            out.terms.insert(m.clone(), Coeff::Q(c));
        }
        out
    }

    /// Parse from the literal grammar, over Q.
    pub fn parse(s: &str, nvars: usize) -> Result<MultiPoly, AlgError> {
        let mut out = MultiPoly::zero(Ring::Rationals, nvars);
        let s = s.trim();
        if s.is_empty() || s == "0" {
            return Ok(out);
        }
        // split into signed terms
        let mut terms: Vec<(i32, String)> = vec![];
        let mut cur = String::new();
        let mut sign = 1;
        let mut first = true;
        for ch in s.chars() {
            match ch {
                '+' | '-' => {
                    if !cur.trim().is_empty() {
                        terms.push((sign, cur.trim().to_string()));
                    } else if !first && cur.trim().is_empty() {
                        return Err(AlgError::ParseError(format!("dangling sign in `{s}`")));
                    }
                    sign = if ch == '-' { -1 } else { 1 };
                    cur = String::new();
                    first = false;
                }
                _ => {
                    cur.push(ch);
                    first = false;
                }
            }
        }
        if cur.trim().is_empty() {
            return Err(AlgError::ParseError(format!("trailing sign in `{s}`")));
        }
        terms.push((sign, cur.trim().to_string()));

        for (sign, term) in terms {
            let mut coeff = Rat::one();
            let mut exps = vec![0u16; nvars];
            for factor in term.split('*') {
                let factor = factor.trim();
                if factor.is_empty() {
                    return Err(AlgError::ParseError(format!("empty factor in `{term}`")));
                }
                if let Some(rest) = factor.strip_prefix('x') {
                    let (idx, exp) = match rest.split_once('^') {
                        Some((i, e)) => (i, e),
                        None => (rest, "1"),
                    };
                    let idx: usize = idx
                        .trim()
                        .parse()
                        .map_err(|_| AlgError::ParseError(format!("bad variable `{factor}`")))?;
                    let exp: u16 = exp
                        .trim()
                        .parse()
                        .map_err(|_| AlgError::ParseError(format!("bad exponent `{factor}`")))?;
                    if idx >= nvars {
                        return Err(AlgError::ParseError(format!(
                            "variable x{idx} out of range for {nvars} variables"
                        )));
                    }
                    exps[idx] += exp;
                } else {
                    coeff *= parse_rat(factor)?;
                }
            }
            if sign < 0 {
                coeff = -coeff;
            }
            out.add_term(Mono(exps), Coeff::Q(coeff));
        }
        Ok(out)
    }
}

impl fmt::Display for MultiPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (m, c) in self.terms.iter().rev() {
            let (neg, mag) = match c {
                Coeff::Q(r) => (r.is_negative(), rat_to_string(&r.abs())),
                Coeff::Fp(v) => (false, v.to_string()),
            };
            if first {
                if neg {
                    write!(f, "-")?;
                }
                first = false;
            } else if neg {
                write!(f, " - ")?;
            } else {
                write!(f, " + ")?;
            }
            let is_const = m.degree() == 0;
            let unit_coeff = mag == "1";
            if is_const || !unit_coeff {
                write!(f, "{mag}")?;
            }
            let mut need_star = is_const || !unit_coeff;
            for (v, &e) in m.0.iter().enumerate() {
                if e == 0 {
                    continue;
                }
                if need_star {
                    write!(f, "*")?;
                }
                need_star = true;
                if e == 1 {
                    write!(f, "x{v}")?;
                } else {
                    write!(f, "x{v}^{e}")?;
                }
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactalg::rational::rat_i64;

    fn q(s: &str, n: usize) -> MultiPoly {
        MultiPoly::parse(s, n).unwrap()
    }

    #[test]
    fn grevlex_order() {
        // in 3 vars with deg 2: x0^2 > x0x1 > x1^2 > x0x2 > x1x2 > x2^2
        let ms = [
            Mono(vec![2, 0, 0]),
            Mono(vec![1, 1, 0]),
            Mono(vec![0, 2, 0]),
            Mono(vec![1, 0, 1]),
            Mono(vec![0, 1, 1]),
            Mono(vec![0, 0, 2]),
        ];
        for w in ms.windows(2) {
            assert!(w[0] > w[1], "{:?} should exceed {:?}", w[0], w[1]);
        }
    }

    #[test]
    fn ring_ops_examples() {
        let a = q("x0 + x1", 4);
        let b = q("x0 - x1", 4);
        assert_eq!(a.mul(&b).unwrap(), q("x0^2 - x1^2", 4));
        assert_eq!(q("x0^2 - x1^2", 4).exact_div(&b).unwrap(), a);
        assert!(matches!(
            q("x0^2 + x1^2", 4).exact_div(&b),
            Err(AlgError::NotDivisible)
        ));
        assert!(matches!(a.exact_div(&MultiPoly::zero(Ring::Rationals, 4)), Err(AlgError::ZeroDivisor)));
    }

    #[test]
    fn differentiate_examples() {
        let f = q("x0^2*x2", 4);
        assert_eq!(f.differentiate(0).unwrap(), q("2*x0*x2", 4));
        assert!(f.differentiate(3).unwrap().is_zero());
        // cubic-case surface x0^2*x2 + x1^2*x3
        let v = q("x0^2*x2 + x1^2*x3", 4);
        assert_eq!(v.differentiate(1).unwrap(), q("2*x1*x3", 4));
        assert!(matches!(f.differentiate(7), Err(AlgError::IndexOutOfRange)));
    }

    #[test]
    fn compose_identity_and_cayley() {
        let f = q("x0", 4);
        let ids: Vec<MultiPoly> = (0..4).map(|i| MultiPoly::var(Ring::Rationals, 4, i)).collect();
        assert_eq!(f.compose(&ids).unwrap(), q("x0", 4));

        // Cayley's ruled cubic vanishes on its parametrization
        let cayley = q("x0^2*x3 + x0*x1*x2 + x1^3", 4);
        let images = [
            q("x2^2", 3),
            q("x1*x2", 3),
            q("x0*x2 - x1^2", 3),
            q("-1*x0*x1", 3),
        ];
        assert!(cayley.compose(&images).unwrap().is_zero());
    }

    #[test]
    fn homogeneous_composition_degree() {
        let f = q("x0*x3 + x1*x2", 4);
        let imgs = [q("x0^2", 3), q("x0*x1", 3), q("x0*x2", 3), q("x1*x2", 3)];
        let g = f.compose(&imgs).unwrap();
        assert!(g.is_homogeneous());
        assert_eq!(g.degree(), Some(4));
    }

    #[test]
    fn mod_p_examples() {
        let f = q("1/2*x0", 4);
        let g = f.mod_p(7).unwrap();
        assert_eq!(g, {
            let mut h = MultiPoly::zero(Ring::PrimeField(7), 4);
            h.add_term(Mono(vec![1, 0, 0, 0]), Coeff::Fp(4));
            h
        });
        let f = q("x0^2 - x1^2", 4);
        let g = f.mod_p(5).unwrap();
        assert_eq!(g.coeff(&Mono(vec![0, 2, 0, 0])), Coeff::Fp(4));
        assert!(matches!(q("1/5*x0", 4).mod_p(5), Err(AlgError::BadPrime(_))));
    }

    #[test]
    fn display_and_parse_roundtrip() {
        let f = q("3*x0^2*x1 - 1/2*x2 + 4", 3);
        let s = f.to_string();
        assert_eq!(MultiPoly::parse(&s, 3).unwrap(), f);
        assert_eq!(s, "3*x0^2*x1 - 1/2*x2 + 4");
    }

    #[test]
    fn eval_points() {
        let f = q("x0*x3 - x1*x2", 4);
        let pt = [rat_i64(1), rat_i64(2), rat_i64(3), rat_i64(6)];
        assert!(f.eval_rat(&pt).unwrap().is_zero());
    }
}
