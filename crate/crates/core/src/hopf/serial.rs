//! Canonical JSON forms of algebras, smash products and morphisms. Field
//! elements are written as coefficient vectors; sparse tables as
//! lexicographically sorted `(row, column, coefficient)` triples.

use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::field_linalg::{Elem, Field, FieldDesc};

use super::algebra::{AlgebraData, HopfData, StructuredAlgebra};
use super::morphism::AlgebraMorphism;
use super::smash::{Algebra, LazySmash};
use super::sparse::{SparseTable, SparseVec};

pub type Triple = (u32, u32, Vec<u32>);
pub type Entry = (u32, Vec<u32>);

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct HopfFile {
    pub coproduct: Vec<Triple>,
    pub counit: Vec<Entry>,
    pub antipode: Vec<Triple>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct AlgebraFile {
    pub name: String,
    pub field: FieldDesc,
    pub labels: Vec<String>,
    pub mult: Vec<Triple>,
    pub unit: Vec<Entry>,
    pub augmentation: Vec<Entry>,
    pub generators: Vec<usize>,
    pub hopf: Option<HopfFile>,
    pub group_coproduct: Option<Vec<Triple>>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SmashFile {
    pub name: String,
    pub b: AlgebraFile,
    pub h: AlgebraFile,
    pub action: Vec<Triple>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct MorphismFile {
    pub name: String,
    pub source: String,
    pub target: String,
    pub images: Vec<Triple>,
}

fn table_triples(f: &Field, t: &SparseTable) -> Vec<Triple> {
    let mut out: Vec<Triple> = (0..t.len())
        .flat_map(|r| t.row(r).map(move |(c, v)| (r as u32, c as u32, f.coeffs(v))).collect::<Vec<_>>())
        .collect();
    out.sort();
    out
}

fn rows_triples(f: &Field, rows: &[SparseVec]) -> Vec<Triple> {
    let mut out: Vec<Triple> = rows
        .iter()
        .enumerate()
        .flat_map(|(r, row)| row.iter().filter(|e| e.1 != 0).map(move |&(c, v)| (r as u32, c, f.coeffs(v))))
        .collect();
    out.sort();
    out
}

fn entries(f: &Field, v: &[Elem]) -> Vec<Entry> {
    v.iter()
        .enumerate()
        .filter(|(_, &x)| x != 0)
        .map(|(i, &x)| (i as u32, f.coeffs(x)))
        .collect()
}

fn triples_rows(f: &Field, t: &[Triple], rows: usize) -> Result<Vec<SparseVec>> {
    let mut out = vec![Vec::new(); rows];
    for (r, c, x) in t {
        let row = out
            .get_mut(*r as usize)
            .ok_or_else(|| Error::Shape(format!("row {r} out of range {rows}")))?;
        row.push((*c, f.from_coeffs(x)?));
    }
    Ok(out)
}

fn dense(f: &Field, e: &[Entry], dim: usize) -> Result<Vec<Elem>> {
    let mut v = vec![0; dim];
    for (i, x) in e {
        *v.get_mut(*i as usize)
            .ok_or_else(|| Error::Shape(format!("index {i} out of range {dim}")))? = f.from_coeffs(x)?;
    }
    Ok(v)
}

impl AlgebraFile {
    pub fn from_algebra(a: &StructuredAlgebra) -> Self {
        let f = a.field();
        AlgebraFile {
            name: a.name().to_string(),
            field: f.desc().clone(),
            labels: a.labels().to_vec(),
            mult: table_triples(f, a.mult_table()),
            unit: entries(f, a.unit()),
            augmentation: entries(f, a.augmentation()),
            generators: a.generators().to_vec(),
            hopf: a.hopf().map(|h| HopfFile {
                coproduct: table_triples(f, &h.coproduct),
                counit: entries(f, &h.counit),
                antipode: table_triples(f, &h.antipode),
            }),
            group_coproduct: a.group_coproduct().map(|t| table_triples(f, t)),
        }
    }

    pub fn load(&self) -> Result<StructuredAlgebra> {
        let f = Field::from_desc(self.field.clone())?;
        let d = self.labels.len();
        let mut a = StructuredAlgebra::new(
            &f,
            AlgebraData {
                name: self.name.clone(),
                labels: self.labels.clone(),
                mult: triples_rows(&f, &self.mult, d * d)?,
                unit: dense(&f, &self.unit, d)?,
                augmentation: dense(&f, &self.augmentation, d)?,
                generators: self.generators.clone(),
            },
        )?;
        if let Some(h) = &self.hopf {
            a = a.with_hopf(HopfData {
                coproduct: SparseTable::from_rows(triples_rows(&f, &h.coproduct, d)?),
                counit: dense(&f, &h.counit, d)?,
                antipode: SparseTable::from_rows(triples_rows(&f, &h.antipode, d)?),
            })?;
        }
        if let Some(g) = &self.group_coproduct {
            a = a.with_group_coproduct(SparseTable::from_rows(triples_rows(&f, g, d)?))?;
        }
        Ok(a)
    }
}

impl SmashFile {
    pub fn from_smash(s: &LazySmash) -> Self {
        SmashFile {
            name: s.name().to_string(),
            b: AlgebraFile::from_algebra(s.b()),
            h: AlgebraFile::from_algebra(s.h()),
            action: table_triples(s.field(), s.action_table()),
        }
    }

    /// Rebuilds the smash product, rechecking the module-algebra axioms.
    pub fn load(&self) -> Result<LazySmash> {
        let b = Arc::new(self.b.load()?);
        let h = Arc::new(self.h.load()?);
        let action = triples_rows(b.field(), &self.action, b.dim() * h.dim())?;
        LazySmash::new(&self.name, b, h, action)
    }
}

impl MorphismFile {
    pub fn from_morphism(m: &AlgebraMorphism) -> Self {
        MorphismFile {
            name: m.name().to_string(),
            source: m.source().name().to_string(),
            target: m.target().name().to_string(),
            images: rows_triples(m.target().field(), m.images()),
        }
    }

    pub fn load(&self, source: &Algebra, target: &Algebra) -> Result<AlgebraMorphism> {
        if self.source != source.name() || self.target != target.name() {
            return Err(Error::Invalid(format!(
                "morphism {} -> {} loaded against {} -> {}",
                self.source,
                self.target,
                source.name(),
                target.name()
            )));
        }
        let images = triples_rows(target.field(), &self.images, source.dim())?;
        AlgebraMorphism::new(&self.name, source.clone(), target.clone(), images)
    }
}

/// Pretty JSON with sorted keys and a trailing newline.
pub fn canonical_json<T: Serialize>(x: &T) -> Result<String> {
    let v = serde_json::to_value(x)?;
    Ok(serde_json::to_string_pretty(&v)? + "\n")
}
