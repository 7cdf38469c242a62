//! Pencils of quadrics and their Segre symbols.
//!
//! A pencil λA1 + μA2 of symmetric matrices on P^(n-1) is classified by the
//! multiplicities with which each root of det(λA1 + μA2) divides the gcds of
//! the k×k minors. Root classes are irreducible Q-factors of the
//! determinant rather than individual complex roots: Galois-conjugate roots
//! share all multiplicity data, so no algebraic-number arithmetic is needed.
//! Pencils of cones (det identically zero) are classified through a general
//! plane section, printed with doubled brackets.

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::exactalg::{
    binary::{binary_factor, binary_gcd},
    poly::{Coeff, MultiPoly, Ring},
    rational::{parse_rat, rat_to_string, Rat},
    AlgError, BinaryForm, RatMatrix,
};
use num_traits::Zero;

#[derive(Error, Debug, Clone, PartialEq, Eq)]
pub enum PencilError {
    #[error("degenerate pencil: {0}")]
    DegeneratePencil(String),
    #[error("degenerate plane section: restricted determinant vanishes identically")]
    DegenerateSection,
    #[error(transparent)]
    Alg(#[from] AlgError),
}

/// A pencil of quadrics given by two symmetric matrices.
#[derive(Clone, Debug)]
pub struct SymmetricPencil {
    n: usize,
    a1: RatMatrix,
    a2: RatMatrix,
}

/// One group of the Segre symbol: the multiplicity jumps (e_0 .. e_k) for a
/// single irreducible root class of the determinant.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SymbolGroup {
    pub entries: Vec<u32>,
    pub root_class: BinaryForm,
    pub field_degree: u32,
}

/// The Segre symbol: canonically ordered groups, one per root class.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SegreSymbol {
    pub groups: Vec<SymbolGroup>,
    /// true when the symbol was computed from a plane section of a cone
    /// pencil; printed with doubled brackets
    pub section: bool,
}

/// A singular member of the pencil.
#[derive(Clone, Debug)]
pub struct SingularMember {
    pub root_class: BinaryForm,
    pub corank: u32,
    pub det_multiplicity: u32,
}

impl SymmetricPencil {
    pub fn new(a1: RatMatrix, a2: RatMatrix) -> Result<Self, PencilError> {
        let n = a1.rows();
        if a1.cols() != n || a2.rows() != n || a2.cols() != n {
            return Err(PencilError::Alg(AlgError::ShapeMismatch));
        }
        if !a1.is_symmetric() || !a2.is_symmetric() {
            return Err(PencilError::DegeneratePencil("matrices must be symmetric".into()));
        }
        if proportional(&a1, &a2) {
            return Err(PencilError::DegeneratePencil("generators are proportional".into()));
        }
        Ok(SymmetricPencil { n, a1, a2 })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn a1(&self) -> &RatMatrix {
        &self.a1
    }

    pub fn a2(&self) -> &RatMatrix {
        &self.a2
    }

    /// The member λ0·A1 + μ0·A2.
    pub fn member(&self, lambda: &Rat, mu: &Rat) -> RatMatrix {
        let mut m = RatMatrix::new(self.n, self.n);
        for i in 0..self.n {
            for j in 0..self.n {
                m[(i, j)] = lambda * &self.a1[(i, j)] + mu * &self.a2[(i, j)];
            }
        }
        m
    }

    /// Entry (i, j) as the linear binary form λ a1[i,j] + μ a2[i,j].
    fn entry_form(&self, i: usize, j: usize) -> MultiPoly {
        let mut p = MultiPoly::zero(Ring::Rationals, 2);
        let a = &self.a1[(i, j)];
        let b = &self.a2[(i, j)];
        if !a.is_zero() {
            p = p
                .add(&MultiPoly::from_monomial(Ring::Rationals, 2, &[1, 0], Coeff::Q(a.clone())))
                .unwrap();
        }
        if !b.is_zero() {
            p = p
                .add(&MultiPoly::from_monomial(Ring::Rationals, 2, &[0, 1], Coeff::Q(b.clone())))
                .unwrap();
        }
        p
    }

    fn minor_det(&self, rows: &[usize], cols: &[usize]) -> MultiPoly {
        let k = rows.len();
        if k == 0 {
            return MultiPoly::one(Ring::Rationals, 2);
        }
        let mut acc = MultiPoly::zero(Ring::Rationals, 2);
        // cofactor expansion along the first row
        for (jj, &c) in cols.iter().enumerate() {
            let e = self.entry_form(rows[0], c);
            if e.is_zero() {
                continue;
            }
            let sub_cols: Vec<usize> = cols.iter().copied().filter(|&x| x != c).collect();
            let term = e.mul(&self.minor_det(&rows[1..], &sub_cols)).unwrap();
            acc = if jj % 2 == 0 { acc.add(&term).unwrap() } else { acc.sub(&term).unwrap() };
        }
        acc
    }

    /// Exact determinant of λA1 + μA2 as a binary form (None when it
    /// vanishes identically, i.e. the pencil has no nondegenerate member).
    pub fn det_form(&self) -> Option<BinaryForm> {
        let all: Vec<usize> = (0..self.n).collect();
        let d = self.minor_det(&all, &all);
        BinaryForm::new(d).ok()
    }
}

fn proportional(a: &RatMatrix, b: &RatMatrix) -> bool {
    let n = a.rows();
    for i in 0..n {
        for j in 0..n {
            for k in 0..n {
                for l in 0..n {
                    if &a[(i, j)] * &b[(k, l)] != &a[(k, l)] * &b[(i, j)] {
                        return false;
                    }
                }
            }
        }
    }
    true
}

fn subsets(n: usize, k: usize) -> Vec<Vec<usize>> {
    let mut out = vec![];
    let mut cur = vec![];
    fn rec(start: usize, n: usize, k: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == k {
            out.push(cur.clone());
            return;
        }
        for i in start..n {
            cur.push(i);
            rec(i + 1, n, k, cur, out);
            cur.pop();
        }
    }
    rec(0, n, k, &mut cur, &mut out);
    out
}

/// Determinant plus the gcds of all (n-i)×(n-i) minors for i = 0..n-1.
///
/// `gcds[0]` is the determinant up to normalization. An entry is None when
/// every minor of that order vanishes identically, which the classification
/// excludes; segre_symbol reports such pencils as degenerate.
pub fn pencil_det_and_minor_gcds(
    pencil: &SymmetricPencil,
) -> Result<(BinaryForm, Vec<Option<BinaryForm>>), PencilError> {
    let n = pencil.n;
    let det = pencil
        .det_form()
        .ok_or_else(|| PencilError::DegeneratePencil("determinant vanishes identically".into()))?;
    let mut gcds = vec![];
    for i in 0..n {
        let k = n - i;
        let mut minors = vec![];
        for rows in subsets(n, k) {
            for cols in subsets(n, k) {
                let m = pencil.minor_det(&rows, &cols);
                if !m.is_zero() {
                    minors.push(BinaryForm::new(m).unwrap());
                }
            }
        }
        if minors.is_empty() {
            gcds.push(None);
        } else {
            gcds.push(Some(binary_gcd(&minors)?));
        }
    }
    Ok((det, gcds))
}

/// The Segre symbol of a pencil with a nondegenerate member.
pub fn segre_symbol(pencil: &SymmetricPencil) -> Result<SegreSymbol, PencilError> {
    let (det, gcds) = pencil_det_and_minor_gcds(pencil)?;
    let factors = binary_factor(&det)?;
    let mut groups = vec![];
    for (f, det_mult) in factors {
        // l_i = multiplicity of f in the gcd of (n-i)-minors
        let mut ls = vec![det_mult];
        for g in gcds.iter().skip(1) {
            let l = match g {
                Some(form) => form.multiplicity_of(&f),
                None => {
                    return Err(PencilError::DegeneratePencil(
                        "all minors of some order vanish identically".into(),
                    ))
                }
            };
            if l == 0 {
                break;
            }
            ls.push(l);
        }
        let entries: Vec<u32> = (0..ls.len())
            .map(|i| ls[i] - if i + 1 < ls.len() { ls[i + 1] } else { 0 })
            .collect();
        let field_degree = f.degree();
        groups.push(SymbolGroup { entries, root_class: f, field_degree });
    }
    let mut sym = SegreSymbol { groups, section: false };
    sym.canonicalize();
    Ok(sym)
}

/// Segre symbol of the pencil of conics cut on a plane, for pencils of
/// cones. Double-bracket notation in display.
pub fn conic_section_symbol(
    pencil: &SymmetricPencil,
    plane: &[Rat; 4],
) -> Result<SegreSymbol, PencilError> {
    if pencil.n != 4 {
        return Err(PencilError::Alg(AlgError::ShapeMismatch));
    }
    // parametrize the plane: three independent points of {sum c_i x_i = 0}
    let prows = RatMatrix::from_rows(vec![plane.to_vec()]).unwrap();
    let basis = prows.nullspace();
    debug_assert_eq!(basis.len(), 3);
    let mut pmat = RatMatrix::new(4, 3);
    for (j, v) in basis.iter().enumerate() {
        for i in 0..4 {
            pmat[(i, j)] = v[i].clone();
        }
    }
    let restrict = |a: &RatMatrix| -> RatMatrix {
        pmat.transpose().mul(&a.mul(&pmat).unwrap()).unwrap()
    };
    let b1 = restrict(&pencil.a1);
    let b2 = restrict(&pencil.a2);
    let section = SymmetricPencil::new(b1, b2)
        .map_err(|_| PencilError::DegenerateSection)?;
    if section.det_form().is_none() {
        return Err(PencilError::DegenerateSection);
    }
    let mut sym = segre_symbol(&section).map_err(|e| match e {
        PencilError::DegeneratePencil(_) => PencilError::DegenerateSection,
        other => other,
    })?;
    sym.section = true;
    Ok(sym)
}

/// One entry per irreducible determinant factor: corank of the member at
/// that root and the multiplicity of the root in the determinant.
pub fn singular_members(pencil: &SymmetricPencil) -> Result<Vec<SingularMember>, PencilError> {
    let sym = segre_symbol(pencil)?;
    Ok(sym
        .groups
        .iter()
        .map(|g| SingularMember {
            root_class: g.root_class.clone(),
            corank: g.entries.len() as u32,
            det_multiplicity: g.entries.iter().sum(),
        })
        .collect())
}

impl SegreSymbol {
    fn canonicalize(&mut self) {
        // descending by group length, then entry sum, then entries, then the
        // printed root class (full determinism)
        self.groups.sort_by(|a, b| {
            b.entries
                .len()
                .cmp(&a.entries.len())
                .then_with(|| b.entries.iter().sum::<u32>().cmp(&a.entries.iter().sum()))
                .then_with(|| b.entries.cmp(&a.entries))
                .then_with(|| format!("{}", a.root_class).cmp(&format!("{}", b.root_class)))
        });
    }

    /// Sum of all entries weighted by the Q-degree of each root class.
    pub fn weighted_sum(&self) -> u32 {
        self.groups
            .iter()
            .map(|g| g.entries.iter().sum::<u32>() * g.field_degree)
            .sum()
    }

    /// Bracket string exactly as in the classification table, e.g.
    /// "[(11),2]" or "[[3]]". A root class of Q-degree 2 with all-rational
    /// conjugate data prints its group twice so the complex-root count is
    /// explicit; this only happens away from the catalog fixtures.
    pub fn bracket_string(&self) -> String {
        let mut parts = vec![];
        for g in &self.groups {
            let inner: String = g.entries.iter().map(|e| e.to_string()).collect();
            let s = if g.entries.len() == 1 {
                inner
            } else {
                format!("({inner})")
            };
            for _ in 0..g.field_degree {
                parts.push(s.clone());
            }
        }
        if self.section {
            format!("[[{}]]", parts.join(","))
        } else {
            format!("[{}]", parts.join(","))
        }
    }
}

impl std::fmt::Display for SegreSymbol {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{}", self.bracket_string())
    }
}

// ---- JSON wire format ----

/// JSON schema for pencils: {"n":4, "A1": [["..rational strings.."]], "A2": [[..]]}
#[derive(Serialize, Deserialize)]
pub struct PencilJson {
    pub n: usize,
    #[serde(rename = "A1")]
    pub a1: Vec<Vec<String>>,
    #[serde(rename = "A2")]
    pub a2: Vec<Vec<String>>,
}

impl PencilJson {
    pub fn to_pencil(&self) -> Result<SymmetricPencil, PencilError> {
        let parse_mat = |m: &Vec<Vec<String>>| -> Result<RatMatrix, PencilError> {
            let rows: Result<Vec<Vec<Rat>>, AlgError> = m
                .iter()
                .map(|r| r.iter().map(|s| parse_rat(s)).collect())
                .collect();
            Ok(RatMatrix::from_rows(rows?)?)
        };
        SymmetricPencil::new(parse_mat(&self.a1)?, parse_mat(&self.a2)?)
    }

    pub fn from_pencil(p: &SymmetricPencil) -> Self {
        let dump = |m: &RatMatrix| {
            (0..m.rows())
                .map(|i| (0..m.cols()).map(|j| rat_to_string(&m[(i, j)])).collect())
                .collect()
        };
        PencilJson { n: p.n, a1: dump(&p.a1), a2: dump(&p.a2) }
    }
}

/// Convenience: pencil from two quadratic forms in 4 variables.
pub fn pencil_from_quadrics(g1: &MultiPoly, g2: &MultiPoly) -> Result<SymmetricPencil, PencilError> {
    Ok(SymmetricPencil::new(quadric_matrix(g1)?, quadric_matrix(g2)?)?)
}

/// Symmetric matrix of a quadratic form (B[i][j] = coefficient/2 off the
/// diagonal), any number of variables.
pub fn quadric_matrix(g: &MultiPoly) -> Result<RatMatrix, AlgError> {
    let n = g.nvars();
    let mut m = RatMatrix::new(n, n);
    for (mono, c) in g.terms() {
        if mono.degree() != 2 {
            return Err(AlgError::NotHomogeneous);
        }
        let c = c.as_rat().ok_or(AlgError::RingMismatch)?;
        let idx: Vec<usize> = (0..n).filter(|&v| mono.0[v] > 0).collect();
        match idx.len() {
            1 => {
                let i = idx[0];
                m[(i, i)] = c.clone();
            }
            2 => {
                let (i, j) = (idx[0], idx[1]);
                let half = c / crate::exactalg::rational::rat_i64(2);
                m[(i, j)] = half.clone();
                m[(j, i)] = half;
            }
            _ => unreachable!(),
        }
    }
    Ok(m)
}

/// Quadratic form of a symmetric matrix.
pub fn matrix_quadric(m: &RatMatrix) -> MultiPoly {
    let n = m.rows();
    let mut g = MultiPoly::zero(Ring::Rationals, n);
    for i in 0..n {
        for j in i..n {
            let c = if i == j { m[(i, j)].clone() } else { &m[(i, j)] + &m[(j, i)] };
            if c.is_zero() {
                continue;
            }
            let mut e = vec![0u16; n];
            e[i] += 1;
            e[j] += 1;
            g = g.add(&MultiPoly::from_monomial(Ring::Rationals, n, &e, Coeff::Q(c))).unwrap();
        }
    }
    g
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactalg::rational::rat_i64;

    fn diag(entries: &[i64]) -> RatMatrix {
        let n = entries.len();
        let mut m = RatMatrix::new(n, n);
        for (i, &e) in entries.iter().enumerate() {
            m[(i, i)] = rat_i64(e);
        }
        m
    }

    fn quad(s: &str) -> MultiPoly {
        MultiPoly::parse(s, 4).unwrap()
    }

    #[test]
    fn diagonal_pencil_symbol() {
        let p = SymmetricPencil::new(diag(&[1, 1, 1, 1]), diag(&[1, 2, 3, 4])).unwrap();
        let (det, gcds) = pencil_det_and_minor_gcds(&p).unwrap();
        assert_eq!(det.degree(), 4);
        // simple roots: 3x3 minors share nothing
        assert_eq!(gcds[1].as_ref().unwrap().degree(), 0);
        let sym = segre_symbol(&p).unwrap();
        assert_eq!(sym.bracket_string(), "[1,1,1,1]");
        assert_eq!(sym.weighted_sum(), 4);
        let members = singular_members(&p).unwrap();
        assert_eq!(members.len(), 4);
        assert!(members.iter().all(|m| m.corank == 1));
    }

    #[test]
    fn split_pairs_pencil() {
        // pencil of x0x1 and x2x3: det = λ^2 μ^2 / 16, minor gcd λμ
        let p = pencil_from_quadrics(&quad("x0*x1"), &quad("x2*x3")).unwrap();
        let (det, gcds) = pencil_det_and_minor_gcds(&p).unwrap();
        assert_eq!(det.multiplicity_of(&BinaryForm::parse("x0").unwrap()), 2);
        assert_eq!(det.multiplicity_of(&BinaryForm::parse("x1").unwrap()), 2);
        let g1 = gcds[1].as_ref().unwrap();
        assert_eq!(g1.multiplicity_of(&BinaryForm::parse("x0").unwrap()), 1);
        assert_eq!(g1.multiplicity_of(&BinaryForm::parse("x1").unwrap()), 1);
        let sym = segre_symbol(&p).unwrap();
        assert_eq!(sym.bracket_string(), "[(11),(11)]");
        let members = singular_members(&p).unwrap();
        assert!(members.iter().all(|m| m.corank == 2));
    }

    #[test]
    fn triple_plus_simple() {
        // diag pencil with a triple root of corank 3: symbol [(111),1]
        let p = SymmetricPencil::new(diag(&[1, 1, 1, 1]), diag(&[1, 1, 1, 2])).unwrap();
        let sym = segre_symbol(&p).unwrap();
        assert_eq!(sym.bracket_string(), "[(111),1]");
        let members = singular_members(&p).unwrap();
        let coranks: Vec<u32> = members.iter().map(|m| m.corank).collect();
        assert!(coranks.contains(&3) && coranks.contains(&1));
    }

    #[test]
    fn degenerate_inputs() {
        let a = diag(&[1, 2, 3, 4]);
        let b = diag(&[2, 4, 6, 8]);
        assert!(matches!(
            SymmetricPencil::new(a, b),
            Err(PencilError::DegeneratePencil(_))
        ));
        // cone pencil: det identically zero
        let p = pencil_from_quadrics(&quad("x0*x1"), &quad("x0*x2")).unwrap();
        assert!(matches!(
            segre_symbol(&p),
            Err(PencilError::DegeneratePencil(_))
        ));
    }

    #[test]
    fn conic_section_of_cone_pencil() {
        // x1^2 + x2^2 + x3^2 and x2^2 + 2 x3^2, both singular at (1:0:0:0),
        // sectioned by x0 = x1 + x2 + x3: three distinct conic-pencil roots
        let p = pencil_from_quadrics(&quad("x1^2 + x2^2 + x3^2"), &quad("x2^2 + 2*x3^2")).unwrap();
        let plane = [rat_i64(1), rat_i64(-1), rat_i64(-1), rat_i64(-1)];
        let sym = conic_section_symbol(&p, &plane).unwrap();
        assert_eq!(sym.bracket_string(), "[[1,1,1]]");
        // plane through the common vertex degenerates
        let through_vertex = [rat_i64(0), rat_i64(1), rat_i64(1), rat_i64(1)];
        assert!(matches!(
            conic_section_symbol(&p, &through_vertex),
            Err(PencilError::DegenerateSection)
        ));
    }

    #[test]
    fn quadric_matrix_roundtrip() {
        let g = quad("x0^2 + 3*x0*x1 - 2*x2*x3 + x3^2");
        let m = quadric_matrix(&g).unwrap();
        assert!(m.is_symmetric());
        assert_eq!(matrix_quadric(&m), g);
    }
}
