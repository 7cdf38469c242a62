use oadp_core::exactalg::rational::rat_i64;
use oadp_core::exactalg::{MultiPoly, RatMatrix, Ring};
use oadp_core::linsys::*;

fn main() {
    let p: Vec<_> = [1i64, 1, -1, 0].iter().map(|&x| rat_i64(x)).collect();
    let conic = CurveParam::parse(&["x0^2", "x0*x1", "-1*x1^2", "-1*x1^2"]).unwrap();
    let r_line = CurveParam::parse(&["0", "0", "x0", "x1"]).unwrap();
    let ell = CurveParam::parse(&["x0", "x0", "-1*x0", "x1"]).unwrap();
    let r_chain = ChartChain {
        change: RatMatrix::from_rows(vec![
            vec![rat_i64(0), rat_i64(0), rat_i64(1), rat_i64(0)],
            vec![rat_i64(0), rat_i64(0), rat_i64(0), rat_i64(1)],
            vec![rat_i64(1), rat_i64(0), rat_i64(0), rat_i64(0)],
            vec![rat_i64(0), rat_i64(1), rat_i64(0), rat_i64(0)],
        ]).unwrap(),
        divider: 3,
        levels: vec![ChartLevel { center_mult: 2, recenter: rat_i64(0) }],
        section_num: MultiPoly::zero(Ring::Rationals, 2),
        section_den: MultiPoly::parse("x0", 2).unwrap(),
    };
    let base = vec![
        BaseCondition::PointMult { point: p.clone(), m: 2 },
        BaseCondition::RationalCurveMult { param: conic, m: 2 },
        BaseCondition::RationalCurveMult { param: r_line, m: 2 },
        BaseCondition::ChartCondition { chain: r_chain, m: 2 },
    ];
    let v1 = build_system(5, 4, &base).unwrap();
    println!("V1 (no line conditions): dim {}", v1.dim());
    let mut v2c = base.clone();
    v2c.push(BaseCondition::RationalCurveMult { param: ell.clone(), m: 1 });
    let v2 = build_system(5, 4, &v2c).unwrap();
    println!("V2 (+ l): dim {}", v2.dim());
}
