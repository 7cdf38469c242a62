//! The catalog of named classification cases: concrete rational fixtures,
//! builders that reconstruct each linear system and tangential-projection
//! inverse, and the verification pipeline comparing computed invariants to
//! the expected table.

mod checks;
mod cubic;
mod quadric;
mod quartic;
mod table;

pub use checks::{run_checks, CheckResult, RunSettings, VerificationReport};
pub use table::{expected_table, TableRow};

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::exactalg::rational::{parse_rat, Rat};
use crate::exactalg::{AlgError, MultiPoly};
use crate::linsys::{CurveParam, LinearSystem, LinsysError};
use crate::pencils::PencilError;
use crate::ratmaps::{ExcludedBase, MapError, RationalMap};

#[derive(Error, Debug)]
pub enum CatalogError {
    #[error("unknown entry id `{0}`")]
    UnknownEntry(String),
    #[error("fixture invalid for {id}: {reason}")]
    FixtureInvalid { id: String, reason: String },
    #[error("fixture file problem: {0}")]
    FixtureIo(String),
    #[error(transparent)]
    Alg(#[from] AlgError),
    #[error(transparent)]
    Pencil(#[from] PencilError),
    #[error(transparent)]
    Linsys(#[from] LinsysError),
    #[error(transparent)]
    Map(#[from] MapError),
}

#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Debug)]
pub enum EntryId {
    E(u8),
    SlGeneric,
    SlExample,
    ScGeneric,
    ScII,
    ScIII,
}

impl EntryId {
    pub fn all() -> Vec<EntryId> {
        let mut v: Vec<EntryId> = (1..=19).map(EntryId::E).collect();
        v.extend([EntryId::SlGeneric, EntryId::SlExample, EntryId::ScGeneric, EntryId::ScII, EntryId::ScIII]);
        v
    }

    pub fn parse(s: &str) -> Result<EntryId, CatalogError> {
        let up = s.to_ascii_uppercase();
        if let Some(n) = up.strip_prefix('E') {
            if let Ok(k) = n.parse::<u8>() {
                if (1..=19).contains(&k) {
                    return Ok(EntryId::E(k));
                }
            }
        }
        match up.as_str() {
            "SL_GENERIC" => Ok(EntryId::SlGeneric),
            "SL_EXAMPLE" => Ok(EntryId::SlExample),
            "SC_GENERIC" => Ok(EntryId::ScGeneric),
            "SC_II" => Ok(EntryId::ScII),
            "SC_III" => Ok(EntryId::ScIII),
            _ => Err(CatalogError::UnknownEntry(s.to_string())),
        }
    }

    pub fn name(&self) -> String {
        match self {
            EntryId::E(k) => format!("E{k}"),
            EntryId::SlGeneric => "SL_GENERIC".into(),
            EntryId::SlExample => "SL_EXAMPLE".into(),
            EntryId::ScGeneric => "SC_GENERIC".into(),
            EntryId::ScII => "SC_II".into(),
            EntryId::ScIII => "SC_III".into(),
        }
    }

    pub fn chapter(&self) -> u8 {
        match self {
            EntryId::E(_) => 2,
            EntryId::SlGeneric | EntryId::SlExample => 3,
            _ => 4,
        }
    }
}

/// Expected invariants carried by a fixture.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct Expected {
    /// bracket string, absent for E14 and the chapter-3/4 entries
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub symbol: Option<String>,
    pub dim: usize,
    pub plane_degree: u32,
    pub singularities: String,
}

/// On-disk fixture schema; chapter-specific fields are optional.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct FixtureJson {
    pub version: u32,
    pub id: String,
    pub chapter: u8,
    /// equation of the fundamental surface V
    pub g: String,
    /// second pencil generator (chapter 2)
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub g_prime: Option<String>,
    /// marked point (chapter 2: double point p of the system on V;
    /// chapter 4: the triple point of V)
    pub p: Vec<String>,
    /// roundtrip base point off V
    pub q0: Vec<String>,
    /// explicit parametrization of V (chapters 3 and 4, and cones)
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub v_param: Option<Vec<String>>,
    /// chapter-3 curve data: binary forms A (deg 4) and B (deg 5)
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub sl_curve: Option<(String, String)>,
    /// chapter-4 curve data: the source cubic parametrization (3 binary cubics)
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub sc_curve: Option<Vec<String>>,
    pub expected: Expected,
}

/// A built entry: everything downstream checks need.
pub struct BuiltEntry {
    pub id: EntryId,
    pub fixture: FixtureJson,
    /// the linear system defining the inverse tangential projection
    pub system: LinearSystem,
    pub sigma: RationalMap,
    /// equation of V
    pub v_equation: MultiPoly,
    /// parametrization of V from P^2 (three source variables)
    pub v_param: Vec<MultiPoly>,
    /// prescribed fixed divisor of the pullback of the system to the source
    pub fixed_divisor: MultiPoly,
    /// marked point p (when the chapter uses one)
    pub p: Vec<Rat>,
    pub q0: Vec<Rat>,
    /// base-point multiplicity data of a general plane restriction,
    /// (multiplicity, count) pairs for the degree formula
    pub plane_mults: Vec<(u32, u32)>,
    /// designated singular point in P^3 with expected multiplicity and
    /// expected tangent-cone data, when the entry carries a check
    pub singular_checks: Vec<SingularCheck>,
    /// second pencil generator for chapter 2
    pub g_prime: Option<MultiPoly>,
    /// lines of V through p as (point, direction) spans, chapter 2
    pub lines: Vec<CurveParam>,
    /// extra excluded point loci for the plane-restriction oracle
    pub oracle_points: Vec<Vec<Rat>>,
}

/// A designated singular-point check.
#[derive(Clone, Debug)]
pub struct SingularCheck {
    pub point: Vec<Rat>,
    /// expected multiplicity of X at the image point
    pub multiplicity: u32,
    /// expected rank of the quadric tangent cone, when it is one
    pub cone_rank: Option<u32>,
    /// multiplicity of the system at the point (the m of the m+1 trick)
    pub system_mult: u32,
    /// candidate fixed factors of the leading subsystem (ternary forms)
    pub fixed_candidates: Vec<MultiPoly>,
}

pub fn parse_point(strs: &[String]) -> Result<Vec<Rat>, CatalogError> {
    Ok(strs
        .iter()
        .map(|s| parse_rat(s))
        .collect::<Result<Vec<_>, _>>()?)
}

/// Load a fixture: from OADP_FIXTURES/<id>.json when the env var is set,
/// otherwise from the embedded defaults.
pub fn load_fixture(id: EntryId) -> Result<FixtureJson, CatalogError> {
    let name = id.name();
    if let Ok(dir) = std::env::var("OADP_FIXTURES") {
        let path = std::path::Path::new(&dir).join(format!("{name}.json"));
        let text = std::fs::read_to_string(&path)
            .map_err(|e| CatalogError::FixtureIo(format!("{}: {e}", path.display())))?;
        return serde_json::from_str(&text)
            .map_err(|e| CatalogError::FixtureIo(format!("{}: {e}", path.display())));
    }
    let text = embedded_fixture(&name)
        .ok_or_else(|| CatalogError::FixtureIo(format!("no embedded fixture for {name}")))?;
    serde_json::from_str(text).map_err(|e| CatalogError::FixtureIo(format!("{name}: {e}")))
}

macro_rules! fixtures {
    ($($name:literal),* $(,)?) => {
        fn embedded_fixture(name: &str) -> Option<&'static str> {
            match name {
                $($name => Some(include_str!(concat!("../../../../fixtures/entries/", $name, ".json"))),)*
                _ => None,
            }
        }
    };
}

fixtures!(
    "E1", "E2", "E3", "E4", "E5", "E6", "E7", "E8", "E9", "E10", "E11", "E12", "E13",
    "E14", "E15", "E16", "E17", "E18", "E19",
    "SL_GENERIC", "SL_EXAMPLE", "SC_GENERIC", "SC_II", "SC_III",
);

/// Build the named entry: the linear system, the map, and the check data.
pub fn build_entry(id: EntryId) -> Result<BuiltEntry, CatalogError> {
    let fixture = load_fixture(id)?;
    match id.chapter() {
        2 => quadric::build(id, fixture),
        3 => cubic::build(id, fixture),
        4 => quartic::build(id, fixture),
        _ => unreachable!(),
    }
}

/// Run the verification pipeline for one entry.
pub fn verify_entry(id: EntryId, settings: &RunSettings) -> Result<VerificationReport, CatalogError> {
    let built = build_entry(id)?;
    Ok(run_checks(&built, settings))
}

/// Common oracle exclusion set for a plane restriction: the base locus is
/// covered by the common zeros of any two restricted basis members, plus
/// the designated point loci.
pub fn oracle_excluded(restricted: &[MultiPoly], extra_points: &[Vec<Rat>]) -> ExcludedBase {
    // the base locus is cut by any two generic members; individual basis
    // members can share polynomial factors (identically-zero eliminants the
    // oracle skips), so deterministic generic combinations are used as well
    let combo = |w: i64| -> MultiPoly {
        let mut acc = MultiPoly::zero(restricted[0].ring(), restricted[0].nvars());
        let mut c = crate::exactalg::rational::rat_i64(1);
        for f in restricted {
            acc = acc.add(&f.scale(&crate::exactalg::Coeff::Q(c.clone()))).unwrap();
            c *= crate::exactalg::rational::rat_i64(w);
        }
        acc
    };
    let mut pairs = vec![(combo(2), combo(3)), (combo(5), combo(7))];
    if restricted.len() >= 2 {
        pairs.push((restricted[0].clone(), restricted[1].clone()));
    }
    ExcludedBase { points: extra_points.to_vec(), curve_pairs: pairs }
}
