//! Binary forms in (λ, μ) and their factorization over Q.
//!
//! The Segre machinery only ever factors determinants of pencils on P^3, so
//! complete factorization is implemented for degree <= 4 and rejects larger
//! inputs. The root (1:0) is handled by tracking the μ-content of the form
//! and dehomogenizing the rest at μ = 1.

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

use super::poly::{Coeff, Mono, MultiPoly, Ring};
use super::rational::{rat_i64, Rat};
use super::AlgError;

/// Homogeneous polynomial in two variables (λ = x0, μ = x1).
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct BinaryForm {
    poly: MultiPoly,
    degree: u32,
}

impl BinaryForm {
    pub fn new(poly: MultiPoly) -> Result<Self, AlgError> {
        if poly.nvars() != 2 {
            return Err(AlgError::ArityMismatch);
        }
        if poly.is_zero() {
            return Err(AlgError::ZeroForm);
        }
        if !poly.is_homogeneous() {
            return Err(AlgError::NotHomogeneous);
        }
        let degree = poly.degree().unwrap();
        Ok(BinaryForm { poly, degree })
    }

    /// Coefficients c_k of sum c_k λ^k μ^(d-k), k = 0..=d.
    pub fn from_coeffs(coeffs: &[Rat]) -> Result<Self, AlgError> {
        let d = coeffs.len().checked_sub(1).ok_or(AlgError::ZeroForm)? as u16;
        let mut p = MultiPoly::zero(Ring::Rationals, 2);
        let terms: Vec<(Vec<u16>, Rat)> = coeffs
            .iter()
            .enumerate()
            .filter(|(_, c)| !c.is_zero())
            .map(|(k, c)| (vec![k as u16, d - k as u16], c.clone()))
            .collect();
        for (e, c) in &terms {
            p = p
                .add(&MultiPoly::from_terms(2, &[(e.as_slice(), c.clone())]))
                .unwrap();
        }
        BinaryForm::new(p)
    }

    pub fn parse(s: &str) -> Result<Self, AlgError> {
        BinaryForm::new(MultiPoly::parse(s, 2)?)
    }

    pub fn poly(&self) -> &MultiPoly {
        &self.poly
    }

    pub fn degree(&self) -> u32 {
        self.degree
    }

    pub fn coeff_of_lambda(&self, k: u32) -> Rat {
        let m = Mono(vec![k as u16, (self.degree - k) as u16]);
        match self.poly.coeff(&m) {
            Coeff::Q(r) => r,
            _ => unreachable!("binary forms are rational"),
        }
    }

    /// Exponent of μ dividing the form.
    pub fn mu_content(&self) -> u32 {
        let max_lambda = self
            .poly
            .terms()
            .map(|(m, _)| m.0[0] as u32)
            .max()
            .unwrap();
        self.degree - max_lambda
    }

    /// Dehomogenize at μ = 1 after stripping μ-content; low-to-high in λ.
    fn dehom(&self) -> Vec<Rat> {
        let mu = self.mu_content();
        let top = (self.degree - mu) as usize;
        let mut out = vec![Rat::zero(); top + 1];
        for k in 0..=top as u32 {
            out[k as usize] = self.coeff_of_lambda(k);
        }
        out
    }

    fn rehom(coeffs: &[Rat], mu_exp: u32) -> BinaryForm {
        let d = (coeffs.len() - 1) as u16 + mu_exp as u16;
        let mut terms: Vec<(Vec<u16>, Rat)> = vec![];
        for (k, c) in coeffs.iter().enumerate() {
            if !c.is_zero() {
                terms.push((vec![k as u16, d - k as u16], c.clone()));
            }
        }
        let refs: Vec<(&[u16], Rat)> = terms.iter().map(|(e, c)| (e.as_slice(), c.clone())).collect();
        BinaryForm::new(MultiPoly::from_terms(2, &refs)).unwrap()
    }

    /// Monic in the λ-leading coefficient (of the μ-content-free part).
    pub fn monic(&self) -> BinaryForm {
        let lead = self.coeff_of_lambda(self.degree - self.mu_content());
        BinaryForm::new(self.poly.scale(&Coeff::Q(lead.recip()))).unwrap()
    }

    /// Primitive integer coefficients, positive λ-leading sign.
    pub fn primitive(&self) -> BinaryForm {
        let p = BinaryForm::new(self.poly.primitive_part()).unwrap();
        let lead = p.coeff_of_lambda(p.degree - p.mu_content());
        if lead.is_negative() {
            BinaryForm::new(p.poly.neg()).unwrap()
        } else {
            p
        }
    }

    pub fn mul(&self, other: &BinaryForm) -> BinaryForm {
        BinaryForm::new(self.poly.mul(&other.poly).unwrap()).unwrap()
    }

    pub fn pow(&self, k: u32) -> BinaryForm {
        BinaryForm::new(self.poly.pow(k).unwrap()).unwrap()
    }

    pub fn try_div(&self, other: &BinaryForm) -> Option<BinaryForm> {
        self.poly.exact_div(&other.poly).ok().and_then(|q| BinaryForm::new(q).ok())
    }

    /// Multiplicity of `factor` in `self`.
    pub fn multiplicity_of(&self, factor: &BinaryForm) -> u32 {
        let mut m = 0;
        let mut cur = self.clone();
        while let Some(q) = cur.try_div(factor) {
            m += 1;
            cur = q;
        }
        m
    }
}

impl std::fmt::Display for BinaryForm {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{}", self.poly)
    }
}

// ---- univariate helpers over Q (dense, low-to-high) ----

fn deg(u: &[Rat]) -> usize {
    u.iter().rposition(|c| !c.is_zero()).unwrap_or(0)
}

fn trim(mut u: Vec<Rat>) -> Vec<Rat> {
    while u.len() > 1 && u.last().map(|c| c.is_zero()).unwrap_or(false) {
        u.pop();
    }
    u
}

fn is_zero_poly(u: &[Rat]) -> bool {
    u.iter().all(|c| c.is_zero())
}

fn poly_divmod(a: &[Rat], b: &[Rat]) -> (Vec<Rat>, Vec<Rat>) {
    let db = deg(b);
    assert!(!is_zero_poly(b));
    let mut r = a.to_vec();
    let mut q = vec![Rat::zero(); a.len().saturating_sub(db)];
    while !is_zero_poly(&r) && deg(&r) >= db {
        let dr = deg(&r);
        let f = &r[dr] / &b[db];
        q[dr - db] = f.clone();
        for i in 0..=db {
            let t = &f * &b[i];
            r[dr - db + i] -= t;
        }
        r = trim(r);
        if dr == 0 {
            break;
        }
    }
    (trim(q), trim(r))
}

fn poly_gcd(a: &[Rat], b: &[Rat]) -> Vec<Rat> {
    let mut x = trim(a.to_vec());
    let mut y = trim(b.to_vec());
    while !is_zero_poly(&y) {
        let (_, r) = poly_divmod(&x, &y);
        x = y;
        y = r;
    }
    if !is_zero_poly(&x) {
        let lead = x[deg(&x)].clone();
        for c in &mut x {
            *c /= &lead;
        }
    }
    x
}

fn poly_derivative(a: &[Rat]) -> Vec<Rat> {
    if a.len() <= 1 {
        return vec![Rat::zero()];
    }
    trim(a.iter().enumerate().skip(1).map(|(i, c)| c * rat_i64(i as i64)).collect())
}

/// Yun's squarefree decomposition: returns (factor, multiplicity) pairs with
/// squarefree pairwise-coprime factors, product of factor^mult = input up to
/// a rational unit.
fn yun_squarefree(u: &[Rat]) -> Vec<(Vec<Rat>, u32)> {
    let mut out = vec![];
    if deg(u) == 0 {
        return out;
    }
    let du = poly_derivative(u);
    let mut g = poly_gcd(u, &du);
    let mut w = poly_divmod(u, &g).0;
    let mut y = poly_divmod(&du, &g).0;
    let mut i = 1u32;
    loop {
        let wd = poly_derivative(&w);
        let z = trim(y.iter().map(|c| c.clone()).collect::<Vec<_>>());
        let mut z = z;
        // z = y - w'
        for (k, c) in wd.iter().enumerate() {
            if k < z.len() {
                z[k] -= c;
            } else {
                z.push(-c.clone());
            }
        }
        let z = trim(z);
        if is_zero_poly(&z) {
            if deg(&w) > 0 {
                out.push((w, i));
            }
            break;
        }
        let f = poly_gcd(&w, &z);
        if deg(&f) > 0 {
            out.push((f.clone(), i));
        }
        w = poly_divmod(&w, &f).0;
        y = poly_divmod(&z, &f).0;
        i += 1;
        let _ = &mut g;
        if deg(&w) == 0 {
            break;
        }
    }
    out
}

fn to_primitive_int(u: &[Rat]) -> Vec<BigInt> {
    let prim = super::rational::primitive_integer_vector(u);
    prim.iter().map(|c| c.numer().clone()).collect()
}

fn divisors_of(n: &BigInt) -> Result<Vec<BigInt>, AlgError> {
    let n = n.abs();
    if n.is_zero() {
        return Ok(vec![]);
    }
    let small: u128 = n
        .to_string()
        .parse()
        .map_err(|_| AlgError::Unsupported("constant term too large for root search".into()))?;
    let mut divs = vec![];
    let mut d = 1u128;
    while d * d <= small {
        if small % d == 0 {
            divs.push(BigInt::from(d));
            divs.push(BigInt::from(small / d));
        }
        d += 1;
    }
    Ok(divs)
}

/// Rational roots of a squarefree polynomial (primitive integer input).
fn rational_roots(u: &[Rat]) -> Result<Vec<Rat>, AlgError> {
    let ints = to_primitive_int(u);
    let d = deg(u);
    let a0 = ints.iter().find(|c| !c.is_zero()).unwrap().clone();
    let an = ints[d].clone();
    let mut roots = vec![];
    // x = 0 root
    if ints[0].is_zero() {
        roots.push(Rat::zero());
    }
    let eval = |x: &Rat| -> Rat {
        let mut acc = Rat::zero();
        for c in ints.iter().rev() {
            acc = acc * x + Rat::from_integer(c.clone());
        }
        acc
    };
    for p in divisors_of(&a0)? {
        for q in divisors_of(&an)? {
            for sign in [1i64, -1] {
                let cand = Rat::new(&p * BigInt::from(sign), q.clone());
                if eval(&cand).is_zero() && !roots.contains(&cand) {
                    roots.push(cand);
                }
            }
        }
    }
    roots.sort();
    Ok(roots)
}

fn is_perfect_square(n: &BigInt) -> Option<BigInt> {
    if n.is_negative() {
        return None;
    }
    let r = n.sqrt();
    if &(&r * &r) == n {
        Some(r)
    } else {
        None
    }
}

/// Factor a squarefree monic-able polynomial of degree <= 4 into irreducibles.
fn factor_squarefree(u: &[Rat]) -> Result<Vec<Vec<Rat>>, AlgError> {
    let d = deg(u);
    match d {
        0 => Ok(vec![]),
        1 => Ok(vec![u.to_vec()]),
        2 => {
            let (a, b, c) = (u[2].clone(), u[1].clone(), u[0].clone());
            let disc = &b * &b - rat_i64(4) * &a * &c;
            // disc is a square iff num and den are both squares (den > 0)
            let sq = is_perfect_square(disc.numer())
                .zip(is_perfect_square(disc.denom()))
                .map(|(n, q)| Rat::new(n, q));
            match sq {
                None => Ok(vec![u.to_vec()]),
                Some(s) => {
                    let two_a = rat_i64(2) * &a;
                    let r1 = (-&b + &s) / &two_a;
                    let r2 = (-&b - &s) / &two_a;
                    Ok(vec![vec![-r1, Rat::one()], vec![-r2, Rat::one()]])
                }
            }
        }
        3 => {
            let roots = rational_roots(u)?;
            match roots.first() {
                None => Ok(vec![u.to_vec()]),
                Some(r) => {
                    let lin = vec![-r.clone(), Rat::one()];
                    let (q, rem) = poly_divmod(u, &lin);
                    debug_assert!(is_zero_poly(&rem));
                    let mut out = vec![lin];
                    out.extend(factor_squarefree(&q)?);
                    Ok(out)
                }
            }
        }
        4 => {
            let roots = rational_roots(u)?;
            if let Some(r) = roots.first() {
                let lin = vec![-r.clone(), Rat::one()];
                let (q, rem) = poly_divmod(u, &lin);
                debug_assert!(is_zero_poly(&rem));
                let mut out = vec![lin];
                out.extend(factor_squarefree(&q)?);
                return Ok(out);
            }
            // no rational roots: monic-normalize and try quadratic splits
            // x^4 + p x^3 + q x^2 + r x + s = (x^2+ax+b)(x^2+cx+d)
            let lead = u[4].clone();
            let m: Vec<Rat> = u.iter().map(|c| c / &lead).collect();
            let (p, q, r, s) = (m[3].clone(), m[2].clone(), m[1].clone(), m[0].clone());
            // resolvent cubic in y = b + d:
            // y^3 - q y^2 + (pr - 4s) y - (p^2 s - 4 q s + r^2) = 0
            let resolvent = vec![
                -(&p * &p * &s - rat_i64(4) * &q * &s + &r * &r),
                &p * &r - rat_i64(4) * &s,
                -q.clone(),
                Rat::one(),
            ];
            for y in rational_roots(&resolvent)? {
                // a + c = p, a c = q - y
                let disc = &p * &p - rat_i64(4) * (&q - &y);
                let sq = is_perfect_square(disc.numer())
                    .zip(is_perfect_square(disc.denom()))
                    .map(|(n, dd)| Rat::new(n, dd));
                let Some(sqv) = sq else { continue };
                let a = (&p + &sqv) / rat_i64(2);
                let c = (&p - &sqv) / rat_i64(2);
                // b + d = y; a d + b c = r
                let (b, dd) = if a != c {
                    let dval = (&r - &c * &y) / (&a - &c);
                    let bval = &y - &dval;
                    (bval, dval)
                } else {
                    // b, d roots of z^2 - y z + s
                    let disc2 = &y * &y - rat_i64(4) * &s;
                    let sq2 = is_perfect_square(disc2.numer())
                        .zip(is_perfect_square(disc2.denom()))
                        .map(|(n, dn)| Rat::new(n, dn));
                    let Some(s2) = sq2 else { continue };
                    ((&y + &s2) / rat_i64(2), (&y - &s2) / rat_i64(2))
                };
                if &b * &dd != s || &a * &dd + &b * &c != r {
                    continue;
                }
                let f1 = vec![b, a, Rat::one()];
                let f2 = vec![dd, c, Rat::one()];
                let mut out = factor_squarefree(&f1)?;
                out.extend(factor_squarefree(&f2)?);
                return Ok(out);
            }
            Ok(vec![u.to_vec()])
        }
        _ => Err(AlgError::DegreeTooLarge(d as u32)),
    }
}

/// GCD of a nonempty family of binary forms, monic-normalized.
pub fn binary_gcd(forms: &[BinaryForm]) -> Result<BinaryForm, AlgError> {
    if forms.is_empty() {
        return Err(AlgError::AllZero);
    }
    let mu = forms.iter().map(|f| f.mu_content()).min().unwrap();
    let mut acc = forms[0].dehom();
    for f in &forms[1..] {
        acc = poly_gcd(&acc, &f.dehom());
        if deg(&acc) == 0 && mu == 0 {
            break;
        }
    }
    Ok(BinaryForm::rehom(&acc, mu).monic())
}

/// Complete factorization over Q into irreducible binary forms.
///
/// Degree is capped at 4: the Segre engine never needs more, and the cap is
/// enforced rather than shipping a general factorizer.
pub fn binary_factor(f: &BinaryForm) -> Result<Vec<(BinaryForm, u32)>, AlgError> {
    if f.degree() > 4 {
        return Err(AlgError::DegreeTooLarge(f.degree()));
    }
    let mut out: Vec<(BinaryForm, u32)> = vec![];
    let mu = f.mu_content();
    if mu > 0 {
        out.push((BinaryForm::parse("x1").unwrap(), mu));
    }
    let u = f.dehom();
    if deg(&u) == 0 {
        return Ok(out);
    }
    for (sf, mult) in yun_squarefree(&u) {
        for irr in factor_squarefree(&sf)? {
            let form = BinaryForm::rehom(&irr, 0).primitive();
            out.push((form, mult));
        }
    }
    // canonical order: by degree, then by coefficient sequence
    out.sort_by(|a, b| {
        a.0.degree()
            .cmp(&b.0.degree())
            .then_with(|| format!("{}", a.0).cmp(&format!("{}", b.0)))
    });
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn bf(s: &str) -> BinaryForm {
        BinaryForm::parse(s).unwrap()
    }

    #[test]
    fn gcd_examples() {
        // gcd(λ^2 μ, λ μ^2) = λμ
        let g = binary_gcd(&[bf("x0^2*x1"), bf("x0*x1^2")]).unwrap();
        assert_eq!(g, bf("x0*x1"));
        // gcd(λ^4, λ^2 μ^2) = λ^2
        let g = binary_gcd(&[bf("x0^4"), bf("x0^2*x1^2")]).unwrap();
        assert_eq!(g, bf("x0^2"));
        // coprime forms
        let g = binary_gcd(&[bf("x0"), bf("x1")]).unwrap();
        assert_eq!(g.degree(), 0);
    }

    #[test]
    fn factor_examples() {
        // λ^2 μ^2 -> [(μ,2),(λ,2)]
        let fs = binary_factor(&bf("x0^2*x1^2")).unwrap();
        assert_eq!(fs.len(), 2);
        assert!(fs.contains(&(bf("x0"), 2)));
        assert!(fs.contains(&(bf("x1"), 2)));
        // (λ^2+μ^2)^2 irreducible squared
        let f = bf("x0^2 + x1^2").pow(2);
        let fs = binary_factor(&f).unwrap();
        assert_eq!(fs, vec![(bf("x0^2 + x1^2"), 2)]);
        // λ^4 - μ^4
        let fs = binary_factor(&bf("x0^4 - x1^4")).unwrap();
        assert_eq!(fs.len(), 3);
        assert!(fs.iter().all(|(_, m)| *m == 1));
        assert!(fs.contains(&(bf("x0 - x1"), 1)));
        assert!(fs.contains(&(bf("x0 + x1"), 1)));
        assert!(fs.contains(&(bf("x0^2 + x1^2"), 1)));
    }

    #[test]
    fn factor_reconstructs_input() {
        for s in [
            "x0^4 - x1^4",
            "x0^3*x1 + x0*x1^3",
            "2*x0^4 + 3*x0^3*x1 + x0^2*x1^2",
            "x0^2 - 5*x0*x1 + 6*x1^2",
            "3*x1^4",
            "x0^4 + x0^3*x1 + x0^2*x1^2 + x0*x1^3 + x1^4",
        ] {
            let f = bf(s);
            let mut prod = BinaryForm::new(MultiPoly::parse("1", 2).unwrap()).unwrap();
            for (g, m) in binary_factor(&f).unwrap() {
                prod = prod.mul(&g.pow(m));
            }
            // equal up to rational scalar
            assert!(f.try_div(&prod).map(|q| q.degree() == 0).unwrap_or(false), "failed on {s}");
        }
    }

    #[test]
    fn degree_cap() {
        assert!(matches!(binary_factor(&bf("x0^5")), Err(AlgError::DegreeTooLarge(5))));
    }

    #[test]
    fn quartic_two_irreducible_quadratics() {
        // (λ^2 + μ^2)(λ^2 + 2μ^2) has no rational roots
        let f = bf("x0^2 + x1^2").mul(&bf("x0^2 + 2*x1^2"));
        let fs = binary_factor(&f).unwrap();
        assert_eq!(fs.len(), 2);
        assert!(fs.contains(&(bf("x0^2 + x1^2"), 1)));
        assert!(fs.contains(&(bf("x0^2 + 2*x1^2"), 1)));
    }

    #[test]
    fn multiplicity_query() {
        let f = bf("x0^2*x1");
        assert_eq!(f.multiplicity_of(&bf("x0")), 2);
        assert_eq!(f.multiplicity_of(&bf("x1")), 1);
        assert_eq!(f.multiplicity_of(&bf("x0 + x1")), 0);
    }
}
