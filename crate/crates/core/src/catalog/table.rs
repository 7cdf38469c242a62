//! The expected classification table: the nineteen quadric-case rows plus
//! the chapter-3 and chapter-4 summary rows.

use serde::{Deserialize, Serialize};

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct TableRow {
    pub id: String,
    pub configuration: String,
    pub symbol: String,
    pub singularities: String,
}

pub fn expected_table() -> Vec<TableRow> {
    let row = |id: &str, configuration: &str, symbol: &str, singularities: &str| TableRow {
        id: id.into(),
        configuration: configuration.into(),
        symbol: symbol.into(),
        singularities: singularities.into(),
    };
    vec![
        row("E1", "smooth quartic", "[1,1,1,1]", "none"),
        row("E2", "nodal quartic", "[2,1,1]", "one point"),
        row("E3", "cuspidal quartic", "[3,1]", "one point"),
        row("E4", "twisted cubic and a transversal line", "[2,2]", "two points"),
        row("E5", "twisted cubic and a tangent line", "[4]", "two infinitely near points"),
        row("E6", "two transversal conics", "[(11),1,1]", "two points"),
        row("E7", "two tangent conics", "[(21),1]", "two infinitely near points"),
        row("E8", "one conic and two lines intersecting it in two points", "[(11),2]", "three points"),
        row("E9", "one conic and two lines intersecting it in one point", "[(31)]", "one point and three infinitely near to it"),
        row("E10", "four lines", "[(11),(11)]", "four points"),
        row("E11", "one double and two simple lines", "[(22)]", "one line"),
        row("E12", "two double lines", "[(211)]", "two lines"),
        row("E13", "one double conic", "[(111),1]", "one conic"),
        row("E14", "a double line and a conic", "--", "one conic"),
        row("E15", "four lines", "[[1,1,1]]", "one line"),
        row("E16", "one double and two simple lines", "[[2,1]]", "two lines"),
        row("E17", "two double lines", "[[(11),1]]", "three lines"),
        row("E18", "one triple and one simple lines", "[[3]]", "three lines: L, R < R'"),
        row("E19", "one line with multiplicity four", "[[(21)]]", "four lines: L, R < R' < R''"),
        row(
            "SL_GENERIC",
            "general sextic base curve on the cubic scroll projection",
            "--",
            "none (smooth scroll of degree eight)",
        ),
        row(
            "SL_EXAMPLE",
            "conic plus four lines, one double",
            "--",
            "one double line, one triple point and one double point",
        ),
        row(
            "SC_GENERIC",
            "smooth sextic on the Roman surface",
            "--",
            "one point of multiplicity four",
        ),
        row("SC_II", "sextic on the first degenerate Steiner quartic", "--", "multiplicity-four point and a double line"),
        row("SC_III", "sextic on the second degenerate Steiner quartic", "--", "multiplicity-four point and two infinitely near double lines"),
    ]
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn table_rows() {
        let t = expected_table();
        assert_eq!(t.len(), 24);
        let e8 = t.iter().find(|r| r.id == "E8").unwrap();
        assert_eq!(e8.symbol, "[(11),2]");
        assert_eq!(e8.singularities, "three points");
        let e13 = t.iter().find(|r| r.id == "E13").unwrap();
        assert_eq!(e13.symbol, "[(111),1]");
        assert_eq!(e13.singularities, "one conic");
        let e19 = t.iter().find(|r| r.id == "E19").unwrap();
        assert_eq!(e19.symbol, "[[(21)]]");
    }
}
