//! Chapter-3 builders: the cubic fundamental surface (a projection of the
//! cubic scroll with a double line).
//!
//! V = {x0^2 x2 + x1^2 x3 = 0} with double line s = {x0 = x1 = 0}, skew
//! line r = {x2 = x3 = 0}, parametrized from P^2 by
//! (t0 t1 : t1 t2 : t2^2 : -t0^2). The system of septics has multiplicity
//! four along s, two along the sextic C6 and one along r.

use super::{BuiltEntry, CatalogError, EntryId, FixtureJson, SingularCheck};
use crate::exactalg::rational::{parse_rat, rat_i64, Rat};
use crate::exactalg::{MultiPoly, RatMatrix};
use crate::linsys::{build_system, BaseCondition, ChartChain, ChartLevel, CurveParam};
use crate::ratmaps::RationalMap;
use num_traits::Zero;

fn err(id: EntryId, reason: impl Into<String>) -> CatalogError {
    CatalogError::FixtureInvalid { id: id.name(), reason: reason.into() }
}

fn parse_binary(s: &str) -> Result<MultiPoly, CatalogError> {
    Ok(MultiPoly::parse(s, 2)?)
}

/// Ruling line of V with parameter (a:b): (a sigma : b sigma : b^2 tau : -a^2 tau).
fn ruling_line(a: i64, b: i64) -> CurveParam {
    let f = |s: &str| MultiPoly::parse(s, 2).unwrap();
    CurveParam::new(vec![
        f(&format!("{a}*x0")),
        f(&format!("{b}*x0")),
        f(&format!("{}*x1", b * b)),
        f(&format!("{}*x1", -a * a)),
    ])
    .unwrap()
}

/// Source-side equation of the ruling line with parameter (a:b).
fn ruling_line_source(a: i64, b: i64) -> MultiPoly {
    // the line in the source plane joining p-hat and the s-hat point (a:b):
    // b*t0 - a*t2 = 0
    MultiPoly::parse(&format!("{b}*x0 - {a}*x2"), 3).unwrap()
}

pub fn build(id: EntryId, fixture: FixtureJson) -> Result<BuiltEntry, CatalogError> {
    let g = MultiPoly::parse(&fixture.g, 4)?;
    let v_param: Vec<MultiPoly> = fixture
        .v_param
        .as_ref()
        .ok_or_else(|| err(id, "chapter-3 fixture missing v_param"))?
        .iter()
        .map(|s| MultiPoly::parse(s, 3))
        .collect::<Result<_, _>>()?;
    if !g.compose(&v_param)?.is_zero() {
        return Err(err(id, "v_param does not parametrize V"));
    }
    let q0 = super::parse_point(&fixture.q0)?;
    if g.eval_rat(&q0)?.is_zero() {
        return Err(err(id, "q0 lies on V"));
    }

    let s_line = CurveParam::parse(&["0", "0", "x0", "x1"])?;
    let r_line = CurveParam::parse(&["x0", "x1", "0", "0"])?;

    match id {
        EntryId::SlGeneric => {
            let (a_s, b_s) = fixture
                .sl_curve
                .as_ref()
                .ok_or_else(|| err(id, "SL_GENERIC fixture missing sl_curve"))?;
            let a = parse_binary(a_s)?;
            let b = parse_binary(b_s)?;
            if a.degree() != Some(4) || b.degree() != Some(5) {
                return Err(err(id, "sl_curve must be (degree 4, degree 5) binary forms"));
            }
            // C6 parametrization (λB : μB : -μ^2 A : λ^2 A)
            let lam = MultiPoly::var(crate::exactalg::Ring::Rationals, 2, 0);
            let mu = MultiPoly::var(crate::exactalg::Ring::Rationals, 2, 1);
            let c6 = CurveParam::new(vec![
                lam.mul(&b)?,
                mu.mul(&b)?,
                mu.pow(2)?.mul(&a)?.neg(),
                lam.pow(2)?.mul(&a)?,
            ])?;
            // the parametrized curve lies on V
            for f in [&g] {
                if !f.compose(&c6.forms)?.is_zero() {
                    return Err(err(id, "C6 parametrization does not lie on V"));
                }
            }
            let conds = vec![
                BaseCondition::RationalCurveMult { param: s_line, m: 4 },
                BaseCondition::RationalCurveMult { param: c6, m: 2 },
                BaseCondition::RationalCurveMult { param: r_line, m: 1 },
            ];
            let system = build_system(7, 4, &conds)?;
            let sigma = RationalMap::from_system(&system)?;
            // fixed divisor: t1^4 * (t1 A(t0,t2) + B(t0,t2))^2
            let a3 = a.embed(3, &[0, 2]);
            let b3 = b.embed(3, &[0, 2]);
            let t1 = MultiPoly::var(crate::exactalg::Ring::Rationals, 3, 1);
            let c_hat = t1.mul(&a3)?.add(&b3)?;
            let fixed = t1.pow(4)?.mul(&c_hat.pow(2)?)?;
            Ok(BuiltEntry {
                id,
                fixture,
                system,
                sigma,
                v_equation: g,
                v_param,
                fixed_divisor: fixed,
                p: vec![],
                q0,
                plane_mults: vec![(4, 1), (2, 6), (1, 1)],
                singular_checks: vec![],
                g_prime: None,
                lines: vec![],
                oracle_points: vec![],
            })
        }
        EntryId::SlExample => {
            // the worked singular configuration: C6 = C + l1 + l2 + 2 l3,
            // with l1 = (1:-1), l2 = (1:1), l3 = (2:1) ruling lines, the
            // conic C through the s-point of l1 and l2
            let l1 = ruling_line(1, -1);
            let l2 = ruling_line(1, 1);
            // C: image of the source line t0 + t2 = t1
            let conic = CurveParam::new(vec![
                parse_binary("x0^2 + x0*x1")?,
                parse_binary("x0*x1 + x1^2")?,
                parse_binary("x1^2")?,
                parse_binary("-1*x0^2")?,
            ])?;
            if !g.compose(&conic.forms)?.is_zero() {
                return Err(err(id, "conic parametrization does not lie on V"));
            }
            // the double ruling line l3 itself
            let l3 = ruling_line(2, 1);
            if !g.compose(&l3.forms)?.is_zero() {
                return Err(err(id, "l3 does not lie on V"));
            }
            // chart condition for the line infinitely near to l3: the line
            // is {x0 - 2 x1 = 0, 4 x2 + x3 = 0}; on its exceptional divisor
            // the strict transform of V cuts w = -4 v1 / v0
            let change = RatMatrix::from_rows(vec![
                vec![rat_i64(0), rat_i64(1), rat_i64(0), rat_i64(0)],
                vec![rat_i64(0), rat_i64(0), rat_i64(1), rat_i64(0)],
                vec![rat_i64(1), rat_i64(-2), rat_i64(0), rat_i64(0)],
                vec![rat_i64(0), rat_i64(0), rat_i64(4), rat_i64(1)],
            ])
            .unwrap();
            let chain = ChartChain {
                change,
                divider: 2,
                levels: vec![ChartLevel { center_mult: 2, recenter: Rat::zero() }],
                section_num: parse_binary("-4*x1")?,
                section_den: parse_binary("x0")?,
            };
            let conds = vec![
                BaseCondition::RationalCurveMult { param: s_line, m: 4 },
                BaseCondition::RationalCurveMult { param: conic, m: 2 },
                BaseCondition::RationalCurveMult { param: l1, m: 2 },
                BaseCondition::RationalCurveMult { param: l2, m: 2 },
                BaseCondition::ChartCondition { chain, m: 2 },
                BaseCondition::RationalCurveMult { param: r_line, m: 1 },
            ];
            let system = build_system(7, 4, &conds)?;
            let sigma = RationalMap::from_system(&system)?;
            // fixed divisor: t1^4 (t0+t2-t1)^2 (t0+t2)^2 (t0-t2)^2 (t0-2t2)^4
            let t = |s: &str| MultiPoly::parse(s, 3).unwrap();
            let fixed = t("x1")
                .pow(4)?
                .mul(&t("x0 + x2 - x1").pow(2)?)?
                .mul(&t("x0 + x2").pow(2)?)?
                .mul(&t("x0 - x2").pow(2)?)?
                .mul(&ruling_line_source(2, 1).pow(4)?)?;
            // designated singular points: the triple point over q1 and the
            // double point over q2
            let q1: Vec<Rat> = ["0", "0", "1", "-1"].iter().map(|s| parse_rat(s).unwrap()).collect();
            let q2: Vec<Rat> = ["2", "2", "1", "-1"].iter().map(|s| parse_rat(s).unwrap()).collect();
            if !g.eval_rat(&q1)?.is_zero() || !g.eval_rat(&q2)?.is_zero() {
                return Err(err(id, "designated singular points do not lie on V"));
            }
            let singular_checks = vec![
                SingularCheck {
                    point: q1,
                    multiplicity: 3,
                    cone_rank: None,
                    system_mult: 4,
                    fixed_candidates: vec![],
                },
                SingularCheck {
                    point: q2,
                    multiplicity: 2,
                    cone_rank: Some(4),
                    system_mult: 2,
                    fixed_candidates: vec![],
                },
            ];
            Ok(BuiltEntry {
                id,
                fixture,
                system,
                sigma,
                v_equation: g,
                v_param,
                fixed_divisor: fixed,
                p: vec![],
                q0,
                plane_mults: vec![(4, 1), (2, 6), (1, 1)],
                singular_checks,
                g_prime: None,
                lines: vec![],
                oracle_points: vec![],
            })
        }
        _ => Err(err(id, "not a chapter-3 entry")),
    }
}
