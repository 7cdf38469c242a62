//! Rational maps, tangential projections, birationality certificates,
//! finite-field oracles, tangent-cone analysis, and the de Jonquières
//! Cremona transformation.
//!
//! Birationality is verified as "π∘σ = G · (invertible linear map)" rather
//! than by constructing an inverse symbolically: the linear part is fitted
//! from six deterministic sample evaluations and then certified by exact
//! divisibility, which is a complete check.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha20Rng;
use thiserror::Error;

use crate::exactalg::{
    fp::{interpolate, mul_mod, FpPoly},
    poly::{Coeff, MultiPoly, Ring},
    rational::{primitive_integer_vector, Rat},
    AlgError, RatMatrix,
};
use crate::linsys::{canonical_span_basis, coeffs_of_form, LinearSystem, LinsysError};
use num_traits::{One, Zero};

#[derive(Error, Debug, Clone, PartialEq, Eq)]
pub enum MapError {
    #[error("point lies in the base locus of the map")]
    Indeterminate,
    #[error("Jacobian rank {0} < 4 at the chosen point")]
    RankDrop(usize),
    #[error("no invertible linear factor fits the composite")]
    NoLinearFit,
    #[error("the subsystem with the extra vanishing order is empty")]
    SubsystemEmpty,
    #[error("the moving part does not satisfy exactly one quadric relation ({0} found)")]
    NotAQuadric(usize),
    #[error("unexpected system dimension {0}")]
    DimensionUnexpected(usize),
    #[error("finite-field oracle did not reach modal agreement")]
    OracleUnstable,
    #[error(transparent)]
    Alg(#[from] AlgError),
    #[error(transparent)]
    Linsys(#[from] LinsysError),
}

/// A rational map P^(srcVars-1) -> P^(forms.len()-1) by equidegree forms.
#[derive(Clone, Debug)]
pub struct RationalMap {
    pub src_vars: usize,
    pub forms: Vec<MultiPoly>,
    pub degree: u32,
}

impl RationalMap {
    pub fn new(forms: Vec<MultiPoly>) -> Result<Self, MapError> {
        let src_vars = forms.first().map(|f| f.nvars()).unwrap_or(0);
        let mut degree = None;
        for f in &forms {
            if f.nvars() != src_vars {
                return Err(MapError::Alg(AlgError::ArityMismatch));
            }
            if f.is_zero() {
                continue;
            }
            if !f.is_homogeneous() {
                return Err(MapError::Alg(AlgError::NotHomogeneous));
            }
            match (degree, f.degree()) {
                (None, d) => degree = d,
                (Some(a), Some(b)) if a == b => {}
                _ => return Err(MapError::Alg(AlgError::NotHomogeneous)),
            }
        }
        let degree = degree.ok_or(MapError::Alg(AlgError::AllZero))?;
        Ok(RationalMap { src_vars, forms, degree })
    }

    pub fn from_system(system: &LinearSystem) -> Result<Self, MapError> {
        RationalMap::new(system.basis.clone())
    }

    /// Remove common polynomial factors, checked against a caller-supplied
    /// candidate list (no general multivariate gcd is attempted).
    pub fn normalize(mut forms: Vec<MultiPoly>, candidates: &[MultiPoly]) -> Result<Self, MapError> {
        loop {
            let mut divided = false;
            for c in candidates {
                if forms
                    .iter()
                    .filter(|f| !f.is_zero())
                    .all(|f| c.divides(f))
                    && forms.iter().any(|f| !f.is_zero())
                {
                    forms = forms
                        .iter()
                        .map(|f| {
                            if f.is_zero() {
                                Ok(f.clone())
                            } else {
                                f.exact_div(c)
                            }
                        })
                        .collect::<Result<Vec<_>, _>>()?;
                    divided = true;
                }
            }
            if !divided {
                break;
            }
        }
        RationalMap::new(forms)
    }

    pub fn target_dim(&self) -> usize {
        self.forms.len() - 1
    }

    pub fn evaluate(&self, q: &[Rat]) -> Result<Vec<Rat>, MapError> {
        let vals: Vec<Rat> = self
            .forms
            .iter()
            .map(|f| f.eval_rat(q))
            .collect::<Result<_, _>>()
            .map_err(MapError::Alg)?;
        if vals.iter().all(|v| v.is_zero()) {
            return Err(MapError::Indeterminate);
        }
        Ok(primitive_integer_vector(&vals))
    }

    /// Jacobian matrix (target coordinates x source variables) at q.
    pub fn jacobian_at(&self, q: &[Rat]) -> Result<RatMatrix, MapError> {
        let mut m = RatMatrix::new(self.forms.len(), self.src_vars);
        for (i, f) in self.forms.iter().enumerate() {
            for j in 0..self.src_vars {
                m[(i, j)] = f.differentiate(j)?.eval_rat(q)?;
            }
        }
        Ok(m)
    }

    /// Compose a linear map (rows of `m` are target linear forms) with self.
    pub fn compose_linear(&self, m: &RatMatrix) -> Result<Vec<MultiPoly>, MapError> {
        assert_eq!(m.cols(), self.forms.len());
        let mut out = vec![];
        for i in 0..m.rows() {
            let mut acc = MultiPoly::zero(Ring::Rationals, self.src_vars);
            for (j, f) in self.forms.iter().enumerate() {
                if !m[(i, j)].is_zero() {
                    acc = acc.add(&f.scale(&Coeff::Q(m[(i, j)].clone())))?;
                }
            }
            out.push(acc);
        }
        Ok(out)
    }
}

/// The embedded tangent space of the image threefold at a point, given by
/// spanning points and by the linear forms cutting it.
#[derive(Clone, Debug)]
pub struct TangentSpaceP7 {
    pub basis_points: Vec<Vec<Rat>>,
    /// rows are the 4 independent linear forms on the target vanishing on it
    pub normal_forms: RatMatrix,
}

/// Tangent space at the smooth image point σ(q0) from the Jacobian.
pub fn tangent_space_at(map: &RationalMap, q0: &[Rat]) -> Result<TangentSpaceP7, MapError> {
    map.evaluate(q0)?; // Indeterminate check
    let jac = map.jacobian_at(q0)?;
    // column space: transpose rows = columns of J
    let cols: Vec<Vec<Rat>> = (0..map.src_vars)
        .map(|j| (0..map.forms.len()).map(|i| jac[(i, j)].clone()).collect())
        .collect();
    let basis_points = canonical_span_basis(&cols);
    if basis_points.len() < 4 {
        return Err(MapError::RankDrop(basis_points.len()));
    }
    let normals = RatMatrix::from_rows(basis_points.clone())
        .map_err(MapError::Alg)?
        .nullspace();
    let normal_forms = RatMatrix::from_rows(normals).map_err(MapError::Alg)?;
    Ok(TangentSpaceP7 { basis_points, normal_forms })
}

/// The linear projection from the tangent space: its four normal forms.
pub fn tangential_projection(map: &RationalMap, q0: &[Rat]) -> Result<RatMatrix, MapError> {
    Ok(tangent_space_at(map, q0)?.normal_forms)
}

/// Tangent space at the contraction point x = σ(V).
///
/// σ degenerates along the contracted surface (the Jacobian drops rank
/// there), so T_xX is computed from the divisibility characterization
/// instead: hyperplanes through T_xX are exactly the members of the system
/// divisible by the square of the surface equation.
pub fn contraction_tangent_space(
    system: &LinearSystem,
    v_equation: &MultiPoly,
) -> Result<TangentSpaceP7, MapError> {
    let v2 = v_equation.pow(2)?;
    let rems: Vec<MultiPoly> = system
        .basis
        .iter()
        .map(|f| f.rem(&v2))
        .collect::<Result<_, _>>()?;
    // lambda with sum lambda_i rem_i = 0
    let deg = system.degree;
    let rows: Vec<Vec<Rat>> = {
        let cols: Vec<Vec<Rat>> = rems.iter().map(|r| coeffs_of_form(r, deg)).collect();
        // transpose: one row per monomial
        let n = cols.len();
        let m = cols[0].len();
        (0..m).map(|j| (0..n).map(|i| cols[i][j].clone()).collect()).collect()
    };
    let lambdas = RatMatrix::from_rows(rows).map_err(MapError::Alg)?.nullspace();
    if lambdas.len() != 4 {
        return Err(MapError::RankDrop(lambdas.len()));
    }
    let normal_forms = RatMatrix::from_rows(lambdas).map_err(MapError::Alg)?;
    let basis_points = normal_forms.nullspace();
    Ok(TangentSpaceP7 { normal_forms, basis_points: basis_points.into_iter().collect() })
}

/// Deterministic small-height sample points in P^3.
pub fn sample_points_p3() -> Vec<Vec<Rat>> {
    [
        [1i64, 2, 3, 5],
        [1, 1, 2, 3],
        [2, 1, 1, 3],
        [1, 3, 2, 1],
        [3, 2, 5, 1],
        [1, 1, 1, 2],
        [2, 3, 1, 1],
        [5, 1, 2, 1],
        [1, 2, 1, 4],
        [2, 5, 3, 1],
        [1, 4, 2, 3],
        [3, 1, 4, 2],
    ]
    .iter()
    .map(|p| p.iter().map(|&x| Rat::from_integer(x.into())).collect())
    .collect()
}

/// Decide whether F_i = G * (M x)_i for an invertible M and a single form
/// G, returning the certificate. The linear part is fitted from sample
/// evaluations and then checked by exact division.
pub fn fit_linear_factor(forms: &[MultiPoly]) -> Result<(MultiPoly, RatMatrix), MapError> {
    assert_eq!(forms.len(), 4);
    let nv = forms[0].nvars();
    assert_eq!(nv, 4);
    let samples = sample_points_p3();
    let mut rows: Vec<Vec<Rat>> = vec![];
    let mut used = 0;
    for q in &samples {
        let vals: Vec<Rat> = forms
            .iter()
            .map(|f| f.eval_rat(q))
            .collect::<Result<_, _>>()
            .map_err(MapError::Alg)?;
        if vals.iter().all(|v| v.is_zero()) {
            continue;
        }
        // F(q) parallel to M q: cross conditions F_a (Mq)_b = F_b (Mq)_a
        for a in 0..4 {
            for b in (a + 1)..4 {
                let mut row = vec![Rat::zero(); 16];
                for j in 0..4 {
                    row[b * 4 + j] = &vals[a] * &q[j];
                    row[a * 4 + j] = -(&vals[b] * &q[j]);
                }
                rows.push(row);
            }
        }
        used += 1;
        if used == 6 {
            break;
        }
    }
    if used < 6 {
        return Err(MapError::NoLinearFit);
    }
    let ns = RatMatrix::from_rows(rows).map_err(MapError::Alg)?.nullspace();
    if ns.len() != 1 {
        return Err(MapError::NoLinearFit);
    }
    let mut m = RatMatrix::new(4, 4);
    for i in 0..4 {
        for j in 0..4 {
            m[(i, j)] = ns[0][i * 4 + j].clone();
        }
    }
    if m.det().map_err(MapError::Alg)?.is_zero() {
        return Err(MapError::NoLinearFit);
    }
    // linear forms L_i = (M x)_i
    let lin: Vec<MultiPoly> = (0..4)
        .map(|i| {
            let mut acc = MultiPoly::zero(Ring::Rationals, 4);
            for j in 0..4 {
                if !m[(i, j)].is_zero() {
                    let mut e = vec![0u16; 4];
                    e[j] = 1;
                    acc = acc
                        .add(&MultiPoly::from_monomial(Ring::Rationals, 4, &e, Coeff::Q(m[(i, j)].clone())))
                        .unwrap();
                }
            }
            acc
        })
        .collect();
    let pivot = forms.iter().position(|f| !f.is_zero()).ok_or(MapError::NoLinearFit)?;
    let g = forms[pivot]
        .exact_div(&lin[pivot])
        .map_err(|_| MapError::NoLinearFit)?;
    for i in 0..4 {
        let prod = g.mul(&lin[i]).map_err(MapError::Alg)?;
        if &prod != &forms[i] {
            return Err(MapError::NoLinearFit);
        }
    }
    Ok((g, m))
}

/// Bronowski round trip: compose the linear projection π with σ and verify
/// π∘σ = G·(invertible linear map).
pub fn verify_linear_roundtrip(
    sigma: &RationalMap,
    pi: &RatMatrix,
) -> Result<(MultiPoly, RatMatrix), MapError> {
    let composite = sigma.compose_linear(pi)?;
    fit_linear_factor(&composite)
}

/// Basis of symmetric matrices Q with Q(f0..f3) = 0 (or divisible by the
/// modulus when one is supplied), by exact linear algebra on the 10
/// coefficients.
pub fn quadric_relation(
    forms: &[MultiPoly],
    modulus: Option<&MultiPoly>,
) -> Result<Vec<RatMatrix>, MapError> {
    assert_eq!(forms.len(), 4);
    let pairs: Vec<(usize, usize)> =
        (0..4).flat_map(|a| (a..4).map(move |b| (a, b))).collect();
    let mut cols: Vec<MultiPoly> = vec![];
    for &(a, b) in &pairs {
        let mut prod = forms[a].mul(&forms[b])?;
        if let Some(m) = modulus {
            prod = prod.rem(m)?;
        }
        cols.push(prod);
    }
    let deg = cols
        .iter()
        .filter_map(|c| c.degree())
        .max()
        .unwrap_or(0);
    // rows indexed by monomials of the products
    let vectors: Vec<Vec<Rat>> = cols
        .iter()
        .map(|c| {
            // pad to common degree via coeffs over all monomials <= deg:
            // products are homogeneous of equal degree unless reduced by a
            // non-homogeneous modulus; collect coefficients monomial-wise
            all_coeffs(c, deg, forms[0].nvars())
        })
        .collect();
    let n = vectors[0].len();
    let rows: Vec<Vec<Rat>> = (0..n)
        .map(|j| vectors.iter().map(|v| v[j].clone()).collect())
        .collect();
    let ns = RatMatrix::from_rows(rows).map_err(MapError::Alg)?.nullspace();
    let mut out = vec![];
    for v in ns {
        let mut q = RatMatrix::new(4, 4);
        for (k, &(a, b)) in pairs.iter().enumerate() {
            if a == b {
                q[(a, a)] = v[k].clone();
            } else {
                let half = &v[k] / Rat::from_integer(2.into());
                q[(a, b)] = half.clone();
                q[(b, a)] = half;
            }
        }
        out.push(q);
    }
    Ok(out)
}

/// Coefficients over all monomials of degree <= bound (for possibly
/// inhomogeneous normal forms).
fn all_coeffs(f: &MultiPoly, bound: u32, nvars: usize) -> Vec<Rat> {
    let mut out = vec![];
    for d in 0..=bound {
        for e in crate::linsys::monomials(d, nvars) {
            match f.coeff(&crate::exactalg::Mono(e)) {
                Coeff::Q(r) => out.push(r),
                _ => panic!("rational forms expected"),
            }
        }
    }
    out
}

/// The de Jonquières map: cubic surfaces containing the base curve of the
/// pencil (g, g') with a double point at p.
pub fn cremona_dejonquieres(
    g: &MultiPoly,
    gp: &MultiPoly,
    p: &[Rat],
) -> Result<(RationalMap, LinearSystem), MapError> {
    use crate::linsys::{build_system, BaseCondition};
    let conds = [
        BaseCondition::CIPowerCurve { g: g.clone(), gp: gp.clone(), m: 1 },
        BaseCondition::PointMult { point: p.to_vec(), m: 2 },
    ];
    let system = build_system(3, 4, &conds)?;
    if system.dim() != 4 {
        return Err(MapError::DimensionUnexpected(system.dim()));
    }
    Ok((RationalMap::from_system(&system)?, system))
}

// ---------- finite-field oracles ----------

/// Loci excluded from slice-point counts: isolated source points and curves
/// given as pairs of ternary forms whose common zeros cut the locus.
#[derive(Clone, Debug, Default)]
pub struct ExcludedBase {
    pub points: Vec<Vec<Rat>>,
    pub curve_pairs: Vec<(MultiPoly, MultiPoly)>,
}

fn bivariate_coeffs_in_t1(f: &MultiPoly, p: u64) -> Vec<FpPoly> {
    // f ternary over F_p; substitute t2 = 1 and collect coefficients of t1^k
    let d = f.degree().unwrap_or(0) as usize;
    let mut out = vec![vec![0u64; d + 1]; d + 1];
    for (m, c) in f.terms() {
        let (i, k) = (m.0[0] as usize, m.0[1] as usize);
        let v = match c {
            Coeff::Fp(v) => *v,
            _ => unreachable!(),
        };
        out[k][i] = (out[k][i] + v) % p;
    }
    let mut polys: Vec<FpPoly> = out.into_iter().map(|cs| FpPoly::new(p, cs)).collect();
    while polys.len() > 1 && polys.last().map(|f| f.is_zero()).unwrap_or(false) {
        polys.pop();
    }
    polys
}

/// Formal Sylvester resultant in t1 of two ternary forms restricted to the
/// chart t2 = 1, as a univariate polynomial in t0 over F_p, computed by
/// evaluation and interpolation.
fn fp_resultant_t1(a: &MultiPoly, b: &MultiPoly, p: u64) -> Option<FpPoly> {
    let ac = bivariate_coeffs_in_t1(a, p);
    let bc = bivariate_coeffs_in_t1(b, p);
    let da = ac.len() - 1;
    let db = bc.len() - 1;
    if da == 0 || db == 0 {
        return None;
    }
    let n = da + db;
    let bound = (a.degree().unwrap_or(0) * b.degree().unwrap_or(0)) as usize + 1;
    let xs: Vec<u64> = (0..bound as u64).collect();
    let mut ys = Vec::with_capacity(bound);
    for &x in &xs {
        // Sylvester matrix with entries evaluated at t0 = x
        let mut m = vec![vec![0u64; n]; n];
        for r in 0..db {
            for (k, cpoly) in ac.iter().rev().enumerate() {
                m[r][r + k] = cpoly.eval(x);
            }
        }
        for r in 0..da {
            for (k, cpoly) in bc.iter().rev().enumerate() {
                m[db + r][r + k] = cpoly.eval(x);
            }
        }
        ys.push(fp_det(&mut m, p));
    }
    Some(interpolate(p, &xs, &ys))
}

fn fp_det(m: &mut [Vec<u64>], p: u64) -> u64 {
    let n = m.len();
    let mut det = 1u64;
    for c in 0..n {
        let Some(r) = (c..n).find(|&i| m[i][c] != 0) else { return 0 };
        if r != c {
            m.swap(r, c);
            det = (p - det) % p;
        }
        let inv = crate::exactalg::fp::inv_mod(m[c][c], p);
        det = mul_mod(det, m[c][c], p);
        for i in (c + 1)..n {
            if m[i][c] == 0 {
                continue;
            }
            let f = mul_mod(m[i][c], inv, p);
            for j in c..n {
                m[i][j] = (m[i][j] + p - mul_mod(f, m[c][j], p)) % p;
            }
        }
    }
    det
}

struct TrialSetup {
    p: u64,
    forms: Vec<MultiPoly>,
    excluded_pairs: Vec<(MultiPoly, MultiPoly)>,
    excluded_points: Vec<Vec<u64>>,
}

fn random_invertible_3x3(rng: &mut ChaCha20Rng, p: u64) -> Vec<Vec<u64>> {
    loop {
        let m: Vec<Vec<u64>> = (0..3).map(|_| (0..3).map(|_| rng.gen_range(0..p)).collect()).collect();
        let det = (mul_mod(m[0][0], (mul_mod(m[1][1], m[2][2], p) + p - mul_mod(m[1][2], m[2][1], p)) % p, p)
            + p
            - mul_mod(m[0][1], (mul_mod(m[1][0], m[2][2], p) + p - mul_mod(m[1][2], m[2][0], p)) % p, p)
            + mul_mod(m[0][2], (mul_mod(m[1][0], m[2][1], p) + p - mul_mod(m[1][1], m[2][0], p)) % p, p))
            % p;
        if det != 0 {
            return m;
        }
    }
}

fn apply_source_change(f: &MultiPoly, m: &[Vec<u64>], p: u64) -> MultiPoly {
    let images: Vec<MultiPoly> = (0..3)
        .map(|i| {
            let mut acc = MultiPoly::zero(Ring::PrimeField(p), 3);
            for k in 0..3 {
                if m[i][k] != 0 {
                    let mut e = vec![0u16; 3];
                    e[k] = 1;
                    acc = acc
                        .add(&MultiPoly::from_monomial(Ring::PrimeField(p), 3, &e, Coeff::Fp(m[i][k])))
                        .unwrap();
                }
            }
            acc
        })
        .collect();
    f.compose(&images).unwrap()
}

fn change_point(pt: &[u64], m: &[Vec<u64>], p: u64) -> Option<Vec<u64>> {
    // source change substitutes x = M u, so points transform by M^{-1};
    // solve M u = pt by elimination
    let mut aug: Vec<Vec<u64>> = (0..3)
        .map(|i| {
            let mut row: Vec<u64> = m[i].clone();
            row.push(pt[i] % p);
            row
        })
        .collect();
    for c in 0..3 {
        let r = (c..3).find(|&i| aug[i][c] != 0)?;
        aug.swap(r, c);
        let inv = crate::exactalg::fp::inv_mod(aug[c][c], p);
        for j in c..4 {
            aug[c][j] = mul_mod(aug[c][j], inv, p);
        }
        for i in 0..3 {
            if i != c && aug[i][c] != 0 {
                let f = aug[i][c];
                for j in c..4 {
                    aug[i][j] = (aug[i][j] + p - mul_mod(f, aug[c][j], p)) % p;
                }
            }
        }
    }
    Some((0..3).map(|i| aug[i][3]).collect())
}

/// One slice count: returns the number of distinct non-excluded
/// intersection points of two random slice pullbacks, or None when the
/// slice is degenerate and must be retried.
fn slice_count(
    setup: &TrialSetup,
    rng: &mut ChaCha20Rng,
    through: Option<&[u64]>,
) -> Option<u32> {
    let p = setup.p;
    let n = setup.forms.len();
    // random source coordinate change, pushing special loci off infinity
    let chg = random_invertible_3x3(rng, p);
    let forms: Vec<MultiPoly> = setup.forms.iter().map(|f| apply_source_change(f, &chg, p)).collect();
    let pairs: Vec<(MultiPoly, MultiPoly)> = setup
        .excluded_pairs
        .iter()
        .map(|(a, b)| (apply_source_change(a, &chg, p), apply_source_change(b, &chg, p)))
        .collect();
    let points: Vec<Vec<u64>> = setup
        .excluded_points
        .iter()
        .filter_map(|pt| change_point(pt, &chg, p))
        .collect();

    let draw_slice = |rng: &mut ChaCha20Rng, through: Option<&[u64]>| -> Vec<u64> {
        loop {
            let l: Vec<u64> = (0..n).map(|_| rng.gen_range(0..p)).collect();
            match through {
                None => {
                    if l.iter().any(|&x| x != 0) {
                        return l;
                    }
                }
                Some(x) => {
                    // force l . x = 0 by correcting the last coordinate with
                    // nonzero x-entry
                    let dot: u64 = l.iter().zip(x).fold(0, |acc, (&a, &b)| (acc + mul_mod(a, b, p)) % p);
                    if dot == 0 && l.iter().any(|&v| v != 0) {
                        return l;
                    }
                    if let Some(k) = (0..n).rev().find(|&k| x[k] % p != 0) {
                        let mut l2 = l.clone();
                        let corr = mul_mod(dot, crate::exactalg::fp::inv_mod(x[k] % p, p), p);
                        l2[k] = (l2[k] + p - corr) % p;
                        let dot2: u64 =
                            l2.iter().zip(x).fold(0, |acc, (&a, &b)| (acc + mul_mod(a, b, p)) % p);
                        if dot2 == 0 && l2.iter().any(|&v| v != 0) {
                            return l2;
                        }
                    }
                }
            }
        }
    };

    let combine = |l: &[u64]| -> MultiPoly {
        let mut acc = MultiPoly::zero(Ring::PrimeField(p), 3);
        for (c, f) in l.iter().zip(&forms) {
            if *c != 0 {
                acc = acc.add(&f.scale(&Coeff::Fp(*c))).unwrap();
            }
        }
        acc
    };

    let a = combine(&draw_slice(rng, through));
    let b = combine(&draw_slice(rng, through));
    if a.is_zero() || b.is_zero() {
        return None;
    }
    // no common zeros on the line at infinity t2 = 0
    let at_infinity = |f: &MultiPoly| -> FpPoly {
        let mut coeffs = vec![0u64; f.degree().unwrap_or(0) as usize + 1];
        for (m, c) in f.terms() {
            if m.0[2] == 0 {
                if let Coeff::Fp(v) = c {
                    coeffs[m.0[0] as usize] = (coeffs[m.0[0] as usize] + v) % p;
                }
            }
        }
        FpPoly::new(p, coeffs)
    };
    let ga = at_infinity(&a);
    let gb = at_infinity(&b);
    if ga.is_zero() || gb.is_zero() || ga.gcd(&gb).degree() != Some(0) {
        return None;
    }

    let mut r = fp_resultant_t1(&a, &b, p)?;
    if r.is_zero() {
        return None;
    }
    // strip excluded curve abscissas; a pair whose eliminant vanishes
    // identically (shared factor) carries no point information, so use the
    // first informative pair per excluded locus group
    let mut stripped_any = pairs.is_empty();
    for (c1, c2) in &pairs {
        let Some(t) = fp_resultant_t1(c1, c2, p) else { continue };
        if t.is_zero() {
            continue;
        }
        r = r.strip_common_factors(&t);
        stripped_any = true;
    }
    if !stripped_any {
        return None;
    }
    // strip excluded points by abscissa (affine only; points at infinity
    // after a random change do not occur)
    for pt in &points {
        if pt[2] % p == 0 {
            continue;
        }
        let alpha = mul_mod(pt[0] % p, crate::exactalg::fp::inv_mod(pt[2] % p, p), p);
        let lin = FpPoly::new(p, vec![(p - alpha) % p, 1]);
        r = r.strip_common_factors(&lin);
    }
    if r.degree().is_none() {
        return Some(0);
    }
    if !r.is_squarefree() {
        return None;
    }
    Some(r.degree().unwrap() as u32)
}

/// Dev-only instrumentation of one slice count.
pub fn debug_slice(plane_map: &[MultiPoly], excluded: &ExcludedBase, p: u64, seed: u64) {
    let setup = make_setup(plane_map, excluded, p).unwrap();
    for trial in 0..3 {
        let mut rng = oracle_rng(seed, p, trial, 0);
        let n = setup.forms.len();
        let chg = random_invertible_3x3(&mut rng, p);
        let forms: Vec<MultiPoly> = setup.forms.iter().map(|f| apply_source_change(f, &chg, p)).collect();
        let pairs: Vec<(MultiPoly, MultiPoly)> = setup
            .excluded_pairs
            .iter()
            .map(|(a, b)| (apply_source_change(a, &chg, p), apply_source_change(b, &chg, p)))
            .collect();
        let draw = |rng: &mut ChaCha20Rng| -> Vec<u64> {
            (0..n).map(|_| rng.gen_range(0..p)).collect()
        };
        let combine = |l: &[u64]| -> MultiPoly {
            let mut acc = MultiPoly::zero(Ring::PrimeField(p), 3);
            for (c, f) in l.iter().zip(&forms) {
                if *c != 0 {
                    acc = acc.add(&f.scale(&Coeff::Fp(*c))).unwrap();
                }
            }
            acc
        };
        let a = combine(&draw(&mut rng));
        let b = combine(&draw(&mut rng));
        let r = fp_resultant_t1(&a, &b, p).unwrap();
        println!("trial {trial}: deg R_total = {:?}", r.degree());
        let mut rr = r.clone();
        for (k, (c1, c2)) in pairs.iter().enumerate() {
            if let Some(t) = fp_resultant_t1(c1, c2, p) {
                if t.is_zero() { println!("  pair {k}: eliminant zero"); continue; }
                let before = rr.degree();
                rr = rr.strip_common_factors(&t);
                println!("  pair {k}: eliminant deg {:?}, R {:?} -> {:?}", t.degree(), before, rr.degree());
            }
        }
        println!("  final deg {:?}, squarefree {}", rr.degree(), rr.is_squarefree());
    }
}

/// Dev-only: degree of gcd of the first two excluded-pair eliminants.
pub fn debug_base_gcd(plane_map: &[MultiPoly], excluded: &ExcludedBase, p: u64) {
    let setup = make_setup(plane_map, excluded, p).unwrap();
    let t1 = fp_resultant_t1(&setup.excluded_pairs[0].0, &setup.excluded_pairs[0].1, p).unwrap();
    let t2 = fp_resultant_t1(&setup.excluded_pairs[1].0, &setup.excluded_pairs[1].1, p).unwrap();
    let g = t1.gcd(&t2);
    println!("eliminant degrees {:?} {:?}, gcd degree {:?}", t1.degree(), t2.degree(), g.degree());
    // multiplicity profile of the gcd
    let mut gg = g.clone();
    let mut sq = vec![];
    loop {
        let d = gg.derivative();
        let c = gg.gcd(&d);
        sq.push(gg.degree().unwrap() - c.degree().unwrap_or(0));
        if c.degree() == Some(0) { break; }
        gg = c;
    }
    println!("gcd squarefree tower (distinct roots at each level): {:?}", sq);
}

fn modal(counts: &[u32], needed: usize) -> Option<u32> {
    use std::collections::BTreeMap;
    let mut freq: BTreeMap<u32, usize> = BTreeMap::new();
    for &c in counts {
        *freq.entry(c).or_insert(0) += 1;
    }
    freq.into_iter()
        .max_by_key(|&(_, n)| n)
        .filter(|&(_, n)| n >= needed)
        .map(|(v, _)| v)
}

/// Degree of the image surface of a plane restriction, counted over F_p by
/// random codimension-2 slices; the modal count across trials is returned.
pub fn fp_degree_of_image_surface(
    plane_map: &[MultiPoly],
    excluded: &ExcludedBase,
    p: u64,
    trials: u32,
    seed: u64,
) -> Result<u32, MapError> {
    let setup = make_setup(plane_map, excluded, p)?;
    let mut counts = vec![];
    for trial in 0..trials {
        let mut rng = oracle_rng(seed, p, trial, 0);
        let mut found = None;
        for retry in 0..24 {
            let mut r2 = oracle_rng(seed, p, trial, retry + 1);
            if let Some(c) = slice_count(&setup, if retry == 0 { &mut rng } else { &mut r2 }, None) {
                found = Some(c);
                break;
            }
        }
        counts.push(found.ok_or(MapError::OracleUnstable)?);
    }
    let needed = (2 * trials as usize).div_ceil(3);
    modal(&counts, needed).ok_or(MapError::OracleUnstable)
}

/// Multiplicity of the image surface at a supplied point: degree minus the
/// modal count of slice points for slices through that point, with the
/// preimage cluster of the point excluded from the count.
pub fn fp_multiplicity_at(
    plane_map: &[MultiPoly],
    excluded: &ExcludedBase,
    preimage_cluster: &[Vec<Rat>],
    target: &[Rat],
    p: u64,
    trials: u32,
    seed: u64,
) -> Result<u32, MapError> {
    let deg = fp_degree_of_image_surface(plane_map, excluded, p, trials, seed)?;
    let mut excluded = excluded.clone();
    excluded.points.extend(preimage_cluster.iter().cloned());
    let setup = make_setup(plane_map, &excluded, p)?;
    let target_fp: Vec<u64> = target
        .iter()
        .map(|r| rat_mod_p(r, p))
        .collect::<Result<_, _>>()?;
    if target_fp.iter().all(|&x| x == 0) {
        return Err(MapError::Indeterminate);
    }
    let mut counts = vec![];
    for trial in 0..trials {
        let mut found = None;
        for retry in 0..24 {
            let mut rng = oracle_rng(seed ^ 0x9e3779b97f4a7c15, p, trial, retry);
            if let Some(c) = slice_count(&setup, &mut rng, Some(&target_fp)) {
                found = Some(c);
                break;
            }
        }
        counts.push(found.ok_or(MapError::OracleUnstable)?);
    }
    let needed = (2 * trials as usize).div_ceil(3);
    let through = modal(&counts, needed).ok_or(MapError::OracleUnstable)?;
    if through > deg {
        return Err(MapError::OracleUnstable);
    }
    Ok(deg - through)
}

fn make_setup(plane_map: &[MultiPoly], excluded: &ExcludedBase, p: u64) -> Result<TrialSetup, MapError> {
    crate::exactalg::fp::check_prime(p).map_err(MapError::Alg)?;
    if p < 1000 {
        return Err(MapError::Alg(AlgError::BadPrime(format!("{p} too small for the oracle"))));
    }
    let forms = plane_map
        .iter()
        .map(|f| f.mod_p(p))
        .collect::<Result<Vec<_>, _>>()
        .map_err(MapError::Alg)?;
    let excluded_pairs = excluded
        .curve_pairs
        .iter()
        .map(|(a, b)| Ok::<_, AlgError>((a.mod_p(p)?, b.mod_p(p)?)))
        .collect::<Result<Vec<_>, _>>()
        .map_err(MapError::Alg)?;
    let excluded_points = excluded
        .points
        .iter()
        .map(|pt| pt.iter().map(|r| rat_mod_p(r, p)).collect::<Result<Vec<_>, _>>())
        .collect::<Result<Vec<_>, _>>()?;
    Ok(TrialSetup { p, forms, excluded_pairs, excluded_points })
}

fn rat_mod_p(r: &Rat, p: u64) -> Result<u64, MapError> {
    use num_integer::Integer;
    let pb = num_bigint::BigInt::from(p);
    let den = r.denom().mod_floor(&pb);
    if den.is_zero() {
        return Err(MapError::Alg(AlgError::BadPrime("denominator divisible by p".into())));
    }
    let num: u64 = r.numer().mod_floor(&pb).to_string().parse().unwrap();
    let den: u64 = den.to_string().parse().unwrap();
    Ok(mul_mod(num, crate::exactalg::fp::inv_mod(den, p), p))
}

fn oracle_rng(seed: u64, p: u64, trial: u32, retry: u32) -> ChaCha20Rng {
    let mut s = [0u8; 32];
    s[..8].copy_from_slice(&seed.to_le_bytes());
    s[8..16].copy_from_slice(&p.to_le_bytes());
    s[16..20].copy_from_slice(&trial.to_le_bytes());
    s[20..24].copy_from_slice(&retry.to_le_bytes());
    ChaCha20Rng::from_seed(s)
}

// ---------- tangent cones via leading forms ----------

/// Leading forms of the system members at a point: the affine frame sends
/// the point to the origin of the chart x0 = 1.
pub struct LeadingFormData {
    /// multiplicity of the generic member at the point
    pub mult: u32,
    /// degree-`mult` leading parts of the basis in direction coordinates
    pub leading: Vec<MultiPoly>,
    /// the affine frame used (point moved to (1:0:0:0))
    pub frame: RatMatrix,
}

/// Frame moving `q` to (1:0:0:0), deterministic completion.
pub fn frame_at_point(q: &[Rat]) -> RatMatrix {
    // rows of the INVERSE change: columns are q and unit vectors chosen by
    // deterministic pivoting; change = inverse of that
    let pivot = q.iter().position(|x| !x.is_zero()).expect("nonzero point");
    let mut cols: Vec<Vec<Rat>> = vec![q.to_vec()];
    for i in 0..4 {
        if i != pivot {
            let mut e = vec![Rat::zero(); 4];
            e[i] = Rat::one();
            cols.push(e);
        }
    }
    let mut minv = RatMatrix::new(4, 4);
    for (j, col) in cols.iter().enumerate() {
        for i in 0..4 {
            minv[(i, j)] = col[i].clone();
        }
    }
    invert(&minv)
}

fn invert(m: &RatMatrix) -> RatMatrix {
    let n = m.rows();
    let mut inv = RatMatrix::new(n, n);
    for j in 0..n {
        let mut e = vec![Rat::zero(); n];
        e[j] = Rat::one();
        let col = m.solve(&e).expect("invertible frame");
        for i in 0..n {
            inv[(i, j)] = col[i].clone();
        }
    }
    inv
}

/// Expand all members around q and return their degree-`order` parts in the
/// direction coordinates (u1, u2, u3) of the exceptional plane.
pub fn leading_forms_at(
    system: &LinearSystem,
    q: &[Rat],
    order: u32,
) -> Result<LeadingFormData, MapError> {
    let frame = frame_at_point(q);
    let cinv = invert(&frame);
    let images: Vec<MultiPoly> = (0..4)
        .map(|i| {
            let mut f = MultiPoly::zero(Ring::Rationals, 4);
            for k in 0..4 {
                if !cinv[(i, k)].is_zero() {
                    let mut e = vec![0u16; 4];
                    e[k] = 1;
                    f = f
                        .add(&MultiPoly::from_monomial(Ring::Rationals, 4, &e, Coeff::Q(cinv[(i, k)].clone())))
                        .unwrap();
                }
            }
            f
        })
        .collect();
    let mut mult = u32::MAX;
    let mut parts = vec![];
    for f in &system.basis {
        let fv = f.compose(&images).map_err(MapError::Alg)?;
        // dehomogenize at v0 = 1; order in (v1, v2, v3)
        let mut by_order: std::collections::BTreeMap<u32, MultiPoly> = Default::default();
        for (m, c) in fv.terms() {
            let o = (m.0[1] + m.0[2] + m.0[3]) as u32;
            let mono = MultiPoly::from_monomial(
                Ring::Rationals,
                3,
                &[m.0[1], m.0[2], m.0[3]],
                c.clone(),
            );
            let e = by_order.entry(o).or_insert_with(|| MultiPoly::zero(Ring::Rationals, 3));
            *e = e.add(&mono).unwrap();
        }
        let o = by_order
            .iter()
            .find(|(_, p)| !p.is_zero())
            .map(|(&o, _)| o)
            .unwrap_or(u32::MAX);
        mult = mult.min(o);
        parts.push(by_order);
    }
    let leading = parts
        .into_iter()
        .map(|mut by_order| {
            by_order
                .remove(&order)
                .unwrap_or_else(|| MultiPoly::zero(Ring::Rationals, 3))
        })
        .collect();
    Ok(LeadingFormData { mult, leading, frame })
}

/// The point of P^N a contracted exceptional plane maps to: all leading
/// forms must be proportional to a single form; returns the ratio vector.
pub fn point_image_from_leading(data: &LeadingFormData) -> Result<Vec<Rat>, MapError> {
    let res = crate::linsys::contraction_point(&data.leading).map_err(|_| MapError::Indeterminate)?;
    Ok(res)
}

/// The subsystem with one extra vanishing order at q, its fixed part on the
/// exceptional plane, and the moving part as a map.
pub struct LeadingSubsystem {
    pub fixed_part: MultiPoly,
    pub moving: Vec<MultiPoly>,
    pub subsystem_dim: usize,
}

pub fn leading_form_subsystem(
    system: &LinearSystem,
    q: &[Rat],
    m_plus: u32,
    fixed_candidates: &[MultiPoly],
) -> Result<LeadingSubsystem, MapError> {
    let data = leading_forms_at(system, q, m_plus)?;
    if data.mult + 1 != m_plus {
        return Err(MapError::DimensionUnexpected(data.mult as usize));
    }
    // members with multiplicity >= m_plus: kill all parts of degree < m_plus
    let low = leading_forms_at(system, q, data.mult)?;
    let rows: Vec<Vec<Rat>> = {
        // conditions: sum lambda_i * low_i = 0 coefficientwise
        let vecs: Vec<Vec<Rat>> = low
            .leading
            .iter()
            .map(|f| crate::linsys::coeffs_of_form(f, data.mult))
            .collect();
        let n = vecs.len();
        let m = vecs[0].len();
        (0..m).map(|j| (0..n).map(|i| vecs[i][j].clone()).collect()).collect()
    };
    let lambdas = RatMatrix::from_rows(rows).map_err(MapError::Alg)?.nullspace();
    if lambdas.is_empty() {
        return Err(MapError::SubsystemEmpty);
    }
    // leading degree-(m_plus) forms of the subsystem members
    let mut forms: Vec<MultiPoly> = vec![];
    for l in &lambdas {
        let mut acc = MultiPoly::zero(Ring::Rationals, 3);
        for (i, c) in l.iter().enumerate() {
            if !c.is_zero() {
                acc = acc.add(&data.leading[i].scale(&Coeff::Q(c.clone()))).map_err(MapError::Alg)?;
            }
        }
        if !acc.is_zero() {
            forms.push(acc);
        }
    }
    if forms.is_empty() {
        return Err(MapError::SubsystemEmpty);
    }
    // split off the fixed part from the supplied candidates
    let mut fixed = MultiPoly::one(Ring::Rationals, 3);
    loop {
        let mut divided = false;
        for c in fixed_candidates {
            if forms.iter().all(|f| c.divides(f)) {
                forms = forms.iter().map(|f| f.exact_div(c)).collect::<Result<_, _>>().map_err(MapError::Alg)?;
                fixed = fixed.mul(c).map_err(MapError::Alg)?;
                divided = true;
            }
        }
        if !divided {
            break;
        }
    }
    let coeff_vecs: Vec<Vec<Rat>> = forms
        .iter()
        .map(|f| crate::linsys::coeffs_of_form(f, f.degree().unwrap()))
        .collect();
    let canon = canonical_span_basis(&coeff_vecs);
    let deg = forms[0].degree().unwrap();
    let moving: Vec<MultiPoly> = canon
        .iter()
        .map(|v| crate::linsys::form_from_coeffs(deg, 3, v))
        .collect();
    Ok(LeadingSubsystem { fixed_part: fixed, moving, subsystem_dim: lambdas.len() })
}

/// Rank of the quadric the moving conics map onto; exactly one relation
/// must exist.
pub fn tangent_cone_rank(moving: &[MultiPoly]) -> Result<u32, MapError> {
    if moving.len() != 4 {
        return Err(MapError::NotAQuadric(moving.len()));
    }
    let rels = quadric_relation(moving, None)?;
    if rels.len() != 1 {
        return Err(MapError::NotAQuadric(rels.len()));
    }
    Ok(rels[0].rank() as u32)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactalg::rational::rat_i64;

    fn q(s: &str, n: usize) -> MultiPoly {
        MultiPoly::parse(s, n).unwrap()
    }

    fn pt(v: [i64; 4]) -> Vec<Rat> {
        v.iter().map(|&x| rat_i64(x)).collect()
    }

    #[test]
    fn evaluate_identity() {
        let id = RationalMap::new((0..4).map(|i| MultiPoly::var(Ring::Rationals, 4, i)).collect()).unwrap();
        assert_eq!(id.evaluate(&pt([1, 2, 3, 4])).unwrap(), pt([1, 2, 3, 4]));
    }

    #[test]
    fn linear_embedding_tangent_space() {
        // P^3 -> P^7, x -> (x : 0): tangent space is the embedded P^3
        let mut forms: Vec<MultiPoly> = (0..4).map(|i| MultiPoly::var(Ring::Rationals, 4, i)).collect();
        forms.extend((0..4).map(|_| MultiPoly::zero(Ring::Rationals, 4)));
        let map = RationalMap::new(forms).unwrap();
        let t = tangent_space_at(&map, &pt([1, 2, 3, 4])).unwrap();
        assert_eq!(t.basis_points.len(), 4);
        assert_eq!(t.normal_forms.rows(), 4);
        // normal forms kill the basis points
        for b in &t.basis_points {
            for r in 0..4 {
                let dot: Rat = t.normal_forms.row(r).iter().zip(b).map(|(a, x)| a * x).sum();
                assert!(dot.is_zero());
            }
        }
    }

    #[test]
    fn veronese_tangent_space_matches_hand_jacobian() {
        // quadratic Veronese-style map on P^3 (10 quadrics); at (1:0:0:0)
        // the Jacobian columns span <x0^2, x0x1, x0x2, x0x3>
        let monos = crate::linsys::monomials(2, 4);
        let forms: Vec<MultiPoly> = monos
            .iter()
            .map(|e| MultiPoly::from_monomial(Ring::Rationals, 4, e, Coeff::Q(Rat::one())))
            .collect();
        let map = RationalMap::new(forms).unwrap();
        let t = tangent_space_at(&map, &pt([1, 0, 0, 0])).unwrap();
        assert_eq!(t.basis_points.len(), 4);
        // the image point (x0^2 leading) must lie in the span
        let img = map.evaluate(&pt([1, 0, 0, 0])).unwrap();
        for r in 0..t.normal_forms.rows() {
            let dot: Rat = t.normal_forms.row(r).iter().zip(&img).map(|(a, x)| a * x).sum();
            assert!(dot.is_zero());
        }
    }

    #[test]
    fn identity_roundtrip() {
        let id = RationalMap::new((0..4).map(|i| MultiPoly::var(Ring::Rationals, 4, i)).collect()).unwrap();
        let (g, m) = verify_linear_roundtrip(&id, &RatMatrix::identity(4)).unwrap();
        assert_eq!(g, MultiPoly::parse("1", 4).unwrap());
        assert!(!m.det().unwrap().is_zero());
    }

    #[test]
    fn quadric_relation_veronese_conic() {
        // (u0^2, u0 u1, u1^2, u2^2): relation z0 z2 = z1^2, rank 3
        let forms = vec![q("x0^2", 3), q("x0*x1", 3), q("x1^2", 3), q("x2^2", 3)];
        let rels = quadric_relation(&forms, None).unwrap();
        assert_eq!(rels.len(), 1);
        assert_eq!(rels[0].rank(), 3);
        // random cubics satisfy no quadric relation
        let forms = vec![
            q("x0^3 + x1*x2^2", 3),
            q("x0^2*x1 - x2^3 + x1^3", 3),
            q("x0*x1*x2 + x0^3 - 2*x1^3", 3),
            q("x2^3 + x0*x1^2 + 3*x0^2*x2", 3),
        ];
        let rels = quadric_relation(&forms, None).unwrap();
        assert!(rels.is_empty());
    }

    #[test]
    fn conics_through_two_points_give_rank_four() {
        // conics through (1:0:0) and (0:1:0): x0x1, x0x2, x1x2, x2^2
        let forms = vec![q("x0*x1", 3), q("x0*x2", 3), q("x1*x2", 3), q("x2^2", 3)];
        assert_eq!(tangent_cone_rank(&forms).unwrap(), 4);
        // conics through an infinitely near pair: base point (1:0:0) with
        // direction x2 = 0: x0x2, x1^2, x1x2, x2^2 -> rank 3 cone
        let forms = vec![q("x0*x2", 3), q("x1^2", 3), q("x1*x2", 3), q("x2^2", 3)];
        assert_eq!(tangent_cone_rank(&forms).unwrap(), 3);
    }

    #[test]
    fn fp_degree_linear_and_veronese() {
        // linear embedding of P^2 has image degree 1
        let lin = vec![q("x0", 3), q("x1", 3), q("x2", 3)];
        let d = fp_degree_of_image_surface(&lin, &ExcludedBase::default(), 10007, 5, 42).unwrap();
        assert_eq!(d, 1);
        // Veronese P^2 -> P^5 has degree 4, confirmed at two primes
        let monos = crate::linsys::monomials(2, 3);
        let ver: Vec<MultiPoly> = monos
            .iter()
            .map(|e| MultiPoly::from_monomial(Ring::Rationals, 3, e, Coeff::Q(Rat::one())))
            .collect();
        for p in [10007u64, 10009] {
            let d = fp_degree_of_image_surface(&ver, &ExcludedBase::default(), p, 5, 42).unwrap();
            assert_eq!(d, 4);
        }
    }

    #[test]
    fn fp_multiplicity_smooth_point() {
        // smooth point on the Veronese surface has multiplicity 1
        let monos = crate::linsys::monomials(2, 3);
        let ver: Vec<MultiPoly> = monos
            .iter()
            .map(|e| MultiPoly::from_monomial(Ring::Rationals, 3, e, Coeff::Q(Rat::one())))
            .collect();
        let src = [rat_i64(1), rat_i64(2), rat_i64(3)];
        let target: Vec<Rat> = ver.iter().map(|f| f.eval_rat(&src).unwrap()).collect();
        let cluster = vec![src.to_vec()];
        let m =
            fp_multiplicity_at(&ver, &ExcludedBase::default(), &cluster, &target, 10007, 5, 7)
                .unwrap();
        assert_eq!(m, 1);
    }
}
