//! The thirteen mathematical fields and the MSC-code classification that
//! assigns a paper to one of them.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::InputError;

/// One of the thirteen top-level fields.
///
/// The discriminant doubles as the canonical index in `[0, 13)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum FieldId {
    Algebra = 0,
    AlgGeom,
    DiffGeom,
    Topology,
    Analysis,
    Pde,
    DynSys,
    Physics,
    Probability,
    Optimization,
    NumericalAnalysis,
    Statistics,
    Others,
}

pub const FIELD_COUNT: usize = 13;

impl FieldId {
    pub const ALL: [FieldId; FIELD_COUNT] = [
        FieldId::Algebra,
        FieldId::AlgGeom,
        FieldId::DiffGeom,
        FieldId::Topology,
        FieldId::Analysis,
        FieldId::Pde,
        FieldId::DynSys,
        FieldId::Physics,
        FieldId::Probability,
        FieldId::Optimization,
        FieldId::NumericalAnalysis,
        FieldId::Statistics,
        FieldId::Others,
    ];

    pub fn index(self) -> usize {
        self as usize
    }

    pub fn from_index(index: usize) -> Option<FieldId> {
        Self::ALL.get(index).copied()
    }

    pub fn name(self) -> &'static str {
        match self {
            FieldId::Algebra => "Algebra",
            FieldId::AlgGeom => "AlgGeom",
            FieldId::DiffGeom => "DiffGeom",
            FieldId::Topology => "Topology",
            FieldId::Analysis => "Analysis",
            FieldId::Pde => "PDE",
            FieldId::DynSys => "DynSys",
            FieldId::Physics => "Physics",
            FieldId::Probability => "Probability",
            FieldId::Optimization => "Optimization",
            FieldId::NumericalAnalysis => "NumericalAnalysis",
            FieldId::Statistics => "Statistics",
            FieldId::Others => "Others",
        }
    }

    /// The two-digit MSC codes listed for this field. Empty for `Others`,
    /// which absorbs every unlisted code.
    pub fn msc_codes(self) -> &'static [&'static str] {
        match self {
            FieldId::Algebra => &["06", "08", "15", "16", "17", "18", "20"],
            FieldId::AlgGeom => &["11", "12", "13", "14"],
            FieldId::DiffGeom => &["32", "51", "52", "53", "58"],
            FieldId::Topology => &["19", "22", "54", "55", "57"],
            FieldId::Analysis => &[
                "26", "28", "30", "33", "34", "39", "40", "41", "42", "43", "46", "47",
            ],
            FieldId::Pde => &["31", "35", "44", "45", "49"],
            FieldId::DynSys => &["37"],
            FieldId::Physics => &["70", "74", "76", "78", "80", "81", "82", "83", "85", "86"],
            FieldId::Probability => &["60"],
            FieldId::Optimization => &["90"],
            FieldId::NumericalAnalysis => &["65"],
            FieldId::Statistics => &["62"],
            FieldId::Others => &[],
        }
    }
}

impl fmt::Display for FieldId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for FieldId {
    type Err = InputError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        FieldId::ALL
            .iter()
            .copied()
            .find(|field| field.name() == s)
            .ok_or_else(|| InputError::UnknownField(s.to_string()))
    }
}

/// Checks that `code` is exactly two ASCII alphanumeric characters.
pub fn check_msc_code(code: &str) -> Result<(), InputError> {
    let well_formed = code.len() == 2 && code.bytes().all(|b| b.is_ascii_alphanumeric());
    if well_formed {
        Ok(())
    } else {
        Err(InputError::MalformedMsc(code.to_string()))
    }
}

/// Maps a primary two-digit MSC code to its field. Codes not listed under
/// any named field map to [`FieldId::Others`].
///
/// Codes are compared as strings so the leading zero of e.g. `"06"` matters.
pub fn msc_to_field(code: &str) -> Result<FieldId, InputError> {
    check_msc_code(code)?;
    let field = FieldId::ALL
        .iter()
        .copied()
        .find(|field| field.msc_codes().contains(&code))
        .unwrap_or(FieldId::Others);
    Ok(field)
}
