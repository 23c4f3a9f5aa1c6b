//! JSON wire formats.
//!
//! Field elements are written as a single integer over prime fields and as a
//! coefficient array (low degree first) over extension fields. Readers accept
//! either form: an integer over an extension field is the base-`p` encoding
//! used throughout the crate.

use serde::{Deserialize, Serialize};

use crate::broadcast::{BroadcastCertificate, Verdict};
use crate::error::{Error, Result};
use crate::field::{Fe, FieldSpec};
use crate::linalg::{Matrix, Vector};
use crate::measurement::{Effect, Measurement};
use crate::subspace::{DiamondTriple, Subspace};

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum EntryJson {
    Int(u64),
    Coeffs(Vec<u64>),
}

pub fn encode_entry(field: &FieldSpec, a: Fe) -> EntryJson {
    if field.is_prime_field() {
        EntryJson::Int(a.0)
    } else {
        EntryJson::Coeffs(field.digits(a))
    }
}

pub fn decode_entry(field: &FieldSpec, e: &EntryJson) -> Result<Fe> {
    match e {
        EntryJson::Int(v) => field.element(*v),
        EntryJson::Coeffs(c) => field.from_digits(c),
    }
}

fn encode_row(field: &FieldSpec, row: &[Fe]) -> Vec<EntryJson> {
    row.iter().map(|&a| encode_entry(field, a)).collect()
}

fn decode_row(field: &FieldSpec, row: &[EntryJson]) -> Result<Vec<Fe>> {
    row.iter().map(|e| decode_entry(field, e)).collect()
}

fn encode_rows(m: &Matrix) -> Vec<Vec<EntryJson>> {
    m.row_iter().map(|r| encode_row(m.field(), r)).collect()
}

fn decode_rows(field: &FieldSpec, cols: usize, rows: &[Vec<EntryJson>]) -> Result<Matrix> {
    let rows = rows.iter().map(|r| decode_row(field, r)).collect::<Result<Vec<_>>>()?;
    Matrix::from_rows(field, cols, &rows)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct VectorJson {
    pub field: String,
    pub entries: Vec<EntryJson>,
}

impl VectorJson {
    pub fn encode(v: &Vector) -> Self {
        VectorJson {
            field: v.field().to_string(),
            entries: encode_row(v.field(), v.entries()),
        }
    }

    pub fn decode(&self) -> Result<Vector> {
        let field = FieldSpec::parse(&self.field)?;
        Vector::new(&field, decode_row(&field, &self.entries)?)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct MatrixJson {
    pub field: String,
    pub cols: usize,
    pub rows: Vec<Vec<EntryJson>>,
}

impl MatrixJson {
    pub fn encode(m: &Matrix) -> Self {
        MatrixJson {
            field: m.field().to_string(),
            cols: m.cols(),
            rows: encode_rows(m),
        }
    }

    pub fn decode(&self) -> Result<Matrix> {
        let field = FieldSpec::parse(&self.field)?;
        decode_rows(&field, self.cols, &self.rows)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SubspaceJson {
    pub ambient: usize,
    pub field: String,
    pub basis: Vec<Vec<EntryJson>>,
}

/// A parsed subspace. `non_canonical` is set when the supplied basis was not
/// already the RREF basis and had to be re-canonicalized.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DecodedSubspace {
    pub subspace: Subspace,
    pub non_canonical: bool,
}

impl SubspaceJson {
    pub fn encode(s: &Subspace) -> Self {
        SubspaceJson {
            ambient: s.ambient(),
            field: s.field().to_string(),
            basis: encode_rows(s.basis()),
        }
    }

    pub fn decode(&self) -> Result<DecodedSubspace> {
        let field = FieldSpec::parse(&self.field)?;
        self.decode_in(&field)
    }

    /// Decodes with `field` instead of the embedded field string, which must
    /// still name the same field.
    pub fn decode_in(&self, field: &FieldSpec) -> Result<DecodedSubspace> {
        if FieldSpec::parse(&self.field)? != *field {
            return Err(Error::Parse(format!(
                "subspace is over GF({}), expected GF({field})",
                self.field
            )));
        }
        let m = decode_rows(field, self.ambient, &self.basis)?;
        let subspace = Subspace::row_space(&m);
        let non_canonical = subspace.basis() != &m;
        Ok(DecodedSubspace {
            subspace,
            non_canonical,
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct EffectJson {
    pub label: String,
    pub dual_basis: Vec<Vec<EntryJson>>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct MeasurementJson {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub field: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub ambient: Option<usize>,
    pub effects: Vec<EffectJson>,
}

impl MeasurementJson {
    pub fn encode(m: &Measurement) -> Self {
        let field = m.effects()[0].dual.field().to_string();
        MeasurementJson {
            field: Some(field),
            ambient: Some(m.ambient()),
            effects: m
                .effects()
                .iter()
                .map(|e| EffectJson {
                    label: e.label.clone(),
                    dual_basis: encode_rows(e.dual.basis()),
                })
                .collect(),
        }
    }

    /// Builds the measurement, checking completeness. `field` and `ambient`
    /// are used when the document does not carry its own.
    pub fn decode(&self, field: &FieldSpec, ambient: usize) -> Result<Measurement> {
        let field = match &self.field {
            Some(s) => FieldSpec::parse(s)?,
            None => field.clone(),
        };
        let ambient = self.ambient.unwrap_or(ambient);
        let effects = self
            .effects
            .iter()
            .map(|e| {
                Ok(Effect::new(
                    e.label.clone(),
                    Subspace::row_space(&decode_rows(&field, ambient, &e.dual_basis)?),
                ))
            })
            .collect::<Result<Vec<_>>>()?;
        Measurement::new(effects)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct DiamondJson {
    pub a: Vec<Vec<EntryJson>>,
    pub b: Vec<Vec<EntryJson>>,
    pub c: Vec<Vec<EntryJson>>,
    pub top: Vec<Vec<EntryJson>>,
    pub bottom: Vec<Vec<EntryJson>>,
    pub dim: usize,
}

impl DiamondJson {
    pub fn encode(d: &DiamondTriple) -> Self {
        DiamondJson {
            a: encode_rows(d.a.basis()),
            b: encode_rows(d.b.basis()),
            c: encode_rows(d.c.basis()),
            top: encode_rows(d.top.basis()),
            bottom: encode_rows(d.bottom.basis()),
            dim: d.dim(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct WitnessJson {
    pub candidate: Vec<Vec<EntryJson>>,
    pub functional: Vec<EntryJson>,
    pub vector: Vec<EntryJson>,
    pub pairing: EntryJson,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CandidateCountsJson {
    pub a: usize,
    pub b: usize,
    pub c: usize,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CertificateJson {
    pub verdict: String,
    pub field: String,
    pub ambient: usize,
    pub diamond: DiamondJson,
    pub candidate_counts: CandidateCountsJson,
    pub candidates_checked: u64,
    pub discriminator: Vec<Vec<EntryJson>>,
    pub cross_term_vectors_checked: u64,
    pub witnesses: Vec<WitnessJson>,
    pub broadcast_states: Vec<Vec<Vec<EntryJson>>>,
}

impl CertificateJson {
    pub fn encode(cert: &BroadcastCertificate) -> Self {
        let d = &cert.diamond;
        let f = d.field();
        CertificateJson {
            verdict: cert.verdict.as_str().to_string(),
            field: f.to_string(),
            ambient: d.ambient(),
            diamond: DiamondJson::encode(d),
            candidate_counts: CandidateCountsJson {
                a: cert.candidate_counts[0],
                b: cert.candidate_counts[1],
                c: cert.candidate_counts[2],
            },
            candidates_checked: cert.candidates_checked,
            discriminator: encode_rows(cert.discriminator.basis()),
            cross_term_vectors_checked: cert.cross_term_vectors_checked,
            witnesses: cert
                .witnesses
                .iter()
                .map(|w| WitnessJson {
                    candidate: encode_rows(w.candidate.basis()),
                    functional: encode_row(f, w.functional.entries()),
                    vector: encode_row(f, w.vector.entries()),
                    pairing: encode_entry(f, w.pairing),
                })
                .collect(),
            broadcast_states: cert
                .broadcast_states
                .iter()
                .map(|m| encode_rows(m.state.basis()))
                .collect(),
        }
    }

    pub fn verdict(&self) -> Result<Verdict> {
        match self.verdict.as_str() {
            "possible" => Ok(Verdict::Possible),
            "impossible" => Ok(Verdict::Impossible),
            other => Err(Error::Parse(format!("unknown verdict {other:?}"))),
        }
    }
}
