//! Dev tool: construct pencil fixtures for each classification symbol.
//!
//! Builds symmetric pencils from Jordan-type blocks with chosen rational
//! eigenvalues, then searches pencil bases and rational points until the
//! distinguished member V is smooth with a rational point p whose tangent
//! section splits into two rational lines, and the marked point avoids the
//! base curve. Prints fixture-ready data as JSON-ish lines.

use oadp_core::exactalg::poly::MultiPoly;
use oadp_core::exactalg::rational::{rat_i64, Rat};
use oadp_core::exactalg::RatMatrix;
use oadp_core::pencils::{matrix_quadric, segre_symbol, SymmetricPencil};
use num_traits::Zero;

fn block_pair(size: usize, r: i64) -> (Vec<Vec<i64>>, Vec<Vec<i64>>) {
    // A-block: antidiagonal ones; B-block: r*A + antidiagonal shifted ones
    let mut a = vec![vec![0i64; size]; size];
    let mut b = vec![vec![0i64; size]; size];
    for i in 0..size {
        a[i][size - 1 - i] = 1;
        b[i][size - 1 - i] = r;
    }
    for i in 0..size {
        for j in 0..size {
            if i + j == size {
                b[i][j] += 1;
            }
        }
    }
    (a, b)
}

fn assemble(blocks: &[(usize, i64)], scales: &[i64]) -> (RatMatrix, RatMatrix) {
    let n: usize = blocks.iter().map(|(s, _)| s).sum();
    let mut a = RatMatrix::new(n, n);
    let mut b = RatMatrix::new(n, n);
    let mut off = 0;
    for (bi, &(s, r)) in blocks.iter().enumerate() {
        let (ab, bb) = block_pair(s, r);
        for i in 0..s {
            for j in 0..s {
                a[(off + i, off + j)] = rat_i64(ab[i][j] * scales[bi]);
                b[(off + i, off + j)] = rat_i64(bb[i][j] * scales[bi]);
            }
        }
        off += s;
    }
    (a, b)
}

fn is_square(r: &Rat) -> bool {
    use num_traits::Signed;
    if r.is_negative() {
        return false;
    }
    let ns = r.numer().sqrt();
    let ds = r.denom().sqrt();
    &(&ns * &ns) == r.numer() && &(&ds * &ds) == r.denom()
}

fn member(a: &RatMatrix, b: &RatMatrix, la: i64, mu: i64) -> RatMatrix {
    let n = a.rows();
    let mut m = RatMatrix::new(n, n);
    for i in 0..n {
        for j in 0..n {
            m[(i, j)] = rat_i64(la) * &a[(i, j)] + rat_i64(mu) * &b[(i, j)];
        }
    }
    m
}

fn rational_points(g: &MultiPoly, n: usize, bound: i64) -> Vec<Vec<Rat>> {
    let mut out = vec![];
    let mut coords = vec![0i64; n];
    fn rec(
        pos: usize,
        bound: i64,
        coords: &mut Vec<i64>,
        g: &MultiPoly,
        out: &mut Vec<Vec<Rat>>,
    ) {
        if pos == coords.len() {
            if coords.iter().all(|&c| c == 0) {
                return;
            }
            let pt: Vec<Rat> = coords.iter().map(|&c| rat_i64(c)).collect();
            if g.eval_rat(&pt).unwrap().is_zero() {
                out.push(pt);
            }
            return;
        }
        for c in -bound..=bound {
            coords[pos] = c;
            rec(pos + 1, bound, coords, g, out);
        }
    }
    rec(0, bound, &mut coords, g, &mut out);
    out
}

/// Try to split the tangent section of V at p into two rational lines;
/// returns the two cutting-plane pairs on success.
fn split_tangent_lines(g: &MultiPoly, p: &[Rat]) -> Option<(Vec<Rat>, Vec<Rat>, Vec<Rat>)> {
    use num_traits::Signed;
    // gradient = tangent plane coefficients
    let grad: Vec<Rat> = (0..4).map(|v| g.differentiate(v).unwrap().eval_rat(p).unwrap()).collect();
    if grad.iter().all(|x| x.is_zero()) {
        return None;
    }
    // parametrize the tangent plane
    let basis = RatMatrix::from_rows(vec![grad.clone()]).unwrap().nullspace();
    let mut pm = RatMatrix::new(4, 3);
    for (j, v) in basis.iter().enumerate() {
        for i in 0..4 {
            pm[(i, j)] = v[i].clone();
        }
    }
    let a = oadp_core::pencils::quadric_matrix(g).unwrap();
    let q3 = pm.transpose().mul(&a.mul(&pm).unwrap()).unwrap();
    // q3 should be rank 2 and split; find its kernel and factor the rest
    let ker = q3.nullspace();
    if ker.len() != 1 {
        return None;
    }
    // complete kernel to a basis of the 3-space, diagonalize on complement
    let kv = &ker[0];
    let piv = kv.iter().position(|x| !x.is_zero()).unwrap();
    let others: Vec<usize> = (0..3).filter(|&i| i != piv).collect();
    let (i1, i2) = (others[0], others[1]);
    // binary quadratic a u^2 + b uv + c v^2 on complement coords
    let qa = q3[(i1, i1)].clone();
    let qb = &q3[(i1, i2)] + &q3[(i2, i1)];
    let qc = q3[(i2, i2)].clone();
    let disc = &qb * &qb - rat_i64(4) * &qa * &qc;
    if disc.is_negative() {
        return None;
    }
    let num_s = disc.numer().sqrt();
    let den_s = disc.denom().sqrt();
    if &(&num_s * &num_s) != disc.numer() || &(&den_s * &den_s) != disc.denom() {
        return None;
    }
    let s = Rat::new(num_s, den_s);
    // roots of the binary form: directions of the two lines in plane coords
    let dirs = if qa.is_zero() {
        // u*(b v) form: u = 0 and b u + c v = 0
        vec![
            (Rat::zero() + rat_i64(1), Rat::zero()),
            (-&qc, qb.clone()),
        ]
    } else {
        let two_a = rat_i64(2) * &qa;
        vec![
            ((-&qb + &s) / &two_a, rat_i64(1)),
            ((-&qb - &s) / &two_a, rat_i64(1)),
        ]
    };
    let mut lines = vec![];
    for (u, v) in dirs {
        // plane coords: u * e_{i1} + v * e_{i2} (+ 0 * kernel)
        let mut w = vec![Rat::zero(); 3];
        w[i1] = u;
        w[i2] = v;
        let dir: Vec<Rat> = (0..4)
            .map(|i| (0..3).map(|j| &pm[(i, j)] * &w[j]).sum())
            .collect();
        if dir.iter().all(|x| x.is_zero()) {
            return None;
        }
        lines.push(dir);
    }
    if lines.len() != 2 {
        return None;
    }
    Some((grad, lines.remove(0), lines.remove(0)))
}

fn fmt_pt(p: &[Rat]) -> String {
    let v: Vec<String> = p.iter().map(oadp_core::exactalg::rational::rat_to_string).collect();
    format!("[{}]", v.join(", "))
}

fn conic_targets() -> Vec<(&'static str, Vec<(usize, i64)>, &'static str)> {
    vec![
        ("E15", vec![(1, 0), (1, 1), (1, -1)], "[1,1,1]"),
        ("E16", vec![(2, 0), (1, 1)], "[2,1]"),
        ("E17", vec![(1, 0), (1, 0), (1, 1)], "[(11),1]"),
        ("E18", vec![(3, 0)], "[3]"),
        ("E19", vec![(2, 0), (1, 0)], "[(21)]"),
    ]
}

fn search_conics() {
    let scale_choices = [1i64, -1, 2, -2];
    for (label, blocks, want) in conic_targets() {
        let nb = blocks.len();
        let mut scale_sets: Vec<Vec<i64>> = vec![vec![]];
        for _ in 0..nb {
            scale_sets = scale_sets
                .into_iter()
                .flat_map(|s| {
                    scale_choices.iter().map(move |&c| {
                        let mut t = s.clone();
                        t.push(c);
                        t
                    })
                })
                .collect();
        }
        let mut found = false;
        'scales: for scales in &scale_sets {
            let (a, b) = assemble(&blocks, scales);
            for (la, mu) in [
                (1i64, 0i64), (0, 1), (1, 1), (1, -1), (1, 2), (2, 1), (1, -2), (2, -1),
                (1, 3), (3, 1), (3, -1), (1, -3), (2, 3), (3, 2),
            ] {
                let gm = member(&a, &b, la, mu);
                if gm.det().unwrap().is_zero() {
                    continue;
                }
                let g3 = matrix_quadric(&gm);
                let pts = rational_points(&g3, 3, 5);
                if pts.is_empty() {
                    continue;
                }
                for (la2, mu2) in [(0i64, 1i64), (1, 0), (1, 1), (1, -1)] {
                    if la * mu2 - mu * la2 == 0 {
                        continue;
                    }
                    let gpm = member(&a, &b, la2, mu2);
                    let pencil = match SymmetricPencil::new(gm.clone(), gpm.clone()) {
                        Ok(p) => p,
                        Err(_) => continue,
                    };
                    let sym = match segre_symbol(&pencil) {
                        Ok(s) => s,
                        Err(_) => continue,
                    };
                    if sym.bracket_string() != want {
                        continue;
                    }
                    let gp3 = matrix_quadric(&gpm);
                    for p in &pts {
                        if !MultiPoly::eval_rat(&gp3, p).unwrap().is_zero() {
                            println!(
                                "{label}: conic symbol {want}\n  g3  = {g3}\n  g3' = {gp3}\n  p   = {}",
                                fmt_pt(p)
                            );
                            found = true;
                            break 'scales;
                        }
                    }
                }
            }
        }
        if !found {
            println!("{label}: NOT FOUND for conic symbol {want}");
        }
    }
}

fn main() {
    search_conics();
    // target symbols with block data: (label, blocks, expected symbol)
    let targets: Vec<(&str, Vec<(usize, i64)>, &str)> = vec![
        ("E1", vec![(1, 0), (1, 1), (1, -1), (1, 2)], "[1,1,1,1]"),
        ("E2", vec![(2, 0), (1, 1), (1, -1)], "[2,1,1]"),
        ("E3", vec![(3, 0), (1, 1)], "[3,1]"),
        ("E4", vec![(2, 0), (2, 1)], "[2,2]"),
        ("E5", vec![(4, 0)], "[4]"),
        ("E6", vec![(1, 0), (1, 0), (1, 1), (1, -1)], "[(11),1,1]"),
        ("E7", vec![(2, 0), (1, 0), (1, 1)], "[(21),1]"),
        ("E8", vec![(1, 0), (1, 0), (2, 1)], "[(11),2]"),
        ("E9", vec![(3, 0), (1, 0)], "[(31)]"),
        ("E10", vec![(1, 0), (1, 0), (1, 1), (1, 1)], "[(11),(11)]"),
        ("E11", vec![(2, 0), (2, 0)], "[(22)]"),
        ("E12", vec![(2, 0), (1, 0), (1, 0)], "[(211)]"),
        ("E13", vec![(1, 0), (1, 0), (1, 0), (1, 1)], "[(111),1]"),
    ];

    let scale_choices = [1i64, -1, 2, -2];
    for (label, blocks, want) in targets {
        let nb = blocks.len();
        let mut found = false;
        let mut scale_sets: Vec<Vec<i64>> = vec![vec![]];
        for _ in 0..nb {
            scale_sets = scale_sets
                .into_iter()
                .flat_map(|s| {
                    scale_choices.iter().map(move |&c| {
                        let mut t = s.clone();
                        t.push(c);
                        t
                    })
                })
                .collect();
        }
        'scales: for scales in &scale_sets {
            let (a, b) = assemble(&blocks, scales);
            for (la, mu) in [
                (1i64, 0i64), (0, 1), (1, 1), (1, -1), (1, 2), (2, 1), (1, -2), (2, -1),
                (1, 3), (3, 1), (3, -1), (1, -3), (2, 3), (3, 2), (5, 3), (3, 5), (5, -3), (3, -5),
                (1, 4), (4, 1), (1, -4), (4, -1), (2, -3), (3, -2), (5, 1), (1, 5), (5, -1), (1, -5),
            ] {
                let gm = member(&a, &b, la, mu);
                let det = gm.det().unwrap();
                if det.is_zero() || !is_square(&det) {
                    continue;
                }
                let g = matrix_quadric(&gm);
                let pts = rational_points(&g, 4, 4);
                if pts.is_empty() {
                    continue;
                }
                for (la2, mu2) in [(0i64, 1i64), (1, 0), (1, 1), (1, -1), (1, 2)] {
                    if la * mu2 - mu * la2 == 0 {
                        continue;
                    }
                    let gpm = member(&a, &b, la2, mu2);
                    let gp = matrix_quadric(&gpm);
                    let pencil = match SymmetricPencil::new(gm.clone(), gpm.clone()) {
                        Ok(p) => p,
                        Err(_) => continue,
                    };
                    let sym = match segre_symbol(&pencil) {
                        Ok(s) => s,
                        Err(_) => continue,
                    };
                    if sym.bracket_string() != want {
                        continue;
                    }
                    for p in &pts {
                        if !MultiPoly::eval_rat(&gp, p).unwrap().is_zero() {
                            if let Some((grad, l1, l2)) = split_tangent_lines(&g, p) {
                                println!(
                                    "{label}: symbol {want}\n  g  = {g}\n  g' = {gp}\n  p  = {}\n  grad = {}\n  dir1 = {}\n  dir2 = {}",
                                    fmt_pt(p), fmt_pt(&grad), fmt_pt(&l1), fmt_pt(&l2)
                                );
                                found = true;
                                break 'scales;
                            }
                        }
                    }
                }
            }
        }
        if !found {
            println!("{label}: NOT FOUND for symbol {want}");
        }
    }
}
