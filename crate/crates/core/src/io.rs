//! JSON file schemas for families, vectors, matrices and representations.
//!
//! Scalars are decimal strings (`"-3"`, `"2/5"`); plain JSON integers are
//! accepted on input. Coordinate maps use keys like `"1,4"` with `""` for the
//! empty set, are written in colex order and omit zero coordinates.

use std::fmt;

use serde::de::{MapAccess, Visitor};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{input_err, Error, Result};
use crate::exactalg::{Matrix, PartialField, Ring, Scalar, SkewMatrix, UnitGroup};
use crate::groundset::{format_key, parse_key, GroundSet, Subset};
use crate::matroid::BasisFamily;
use crate::plucker::PluckerVector;
use crate::wick::{WickRepresentation, WickVector};

/// Ring declaration, once per file.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind")]
pub enum RingSpec {
    #[serde(rename = "gfp")]
    Gfp { p: u64 },
    #[serde(rename = "q")]
    Q,
    #[serde(rename = "z")]
    Z,
    #[serde(rename = "regular")]
    Regular,
}

impl RingSpec {
    pub fn ring(&self) -> Result<Ring> {
        Ok(match *self {
            RingSpec::Gfp { p } => Ring::prime_field(p)?,
            RingSpec::Q => Ring::Rationals,
            RingSpec::Z | RingSpec::Regular => Ring::Integers,
        })
    }

    /// The partial field whose elements the coordinates must be. The only
    /// unit subgroup of `Z` containing `-1` is `{±1}`, so `z` and `regular`
    /// agree here.
    pub fn partial_field(&self) -> Result<PartialField> {
        match *self {
            RingSpec::Gfp { p } => PartialField::gf(p),
            RingSpec::Q => Ok(PartialField::rationals()),
            RingSpec::Z | RingSpec::Regular => Ok(PartialField::regular()),
        }
    }

    pub fn from_partial_field(pf: &PartialField) -> Self {
        match (pf.ring(), pf.units()) {
            (Ring::PrimeField(p), _) => RingSpec::Gfp { p },
            (Ring::Rationals, _) => RingSpec::Q,
            (Ring::Integers, UnitGroup::PlusMinusOne) => RingSpec::Regular,
            (Ring::Integers, UnitGroup::AllNonzero) => RingSpec::Z,
        }
    }
}

/// A scalar as it appears in a file.
#[derive(Clone, Debug, PartialEq, Eq, Deserialize)]
#[serde(untagged)]
pub enum ValueText {
    Text(String),
    Int(i64),
}

impl ValueText {
    pub fn parse(&self, ring: Ring) -> Result<Scalar> {
        match self {
            ValueText::Text(s) => ring.parse(s),
            ValueText::Int(v) => Ok(ring.from_i64(*v)),
        }
    }
}

impl Serialize for ValueText {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        match self {
            ValueText::Text(t) => s.serialize_str(t),
            ValueText::Int(v) => s.serialize_str(&v.to_string()),
        }
    }
}

impl From<&Scalar> for ValueText {
    fn from(v: &Scalar) -> Self {
        ValueText::Text(v.to_string())
    }
}

/// Ordered coordinate map. Serialization keeps insertion order; duplicate
/// keys on input are kept and rejected later.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Coords(pub Vec<(String, ValueText)>);

impl Serialize for Coords {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        use serde::ser::SerializeMap;
        let mut map = s.serialize_map(Some(self.0.len()))?;
        for (k, v) in &self.0 {
            map.serialize_entry(k, v)?;
        }
        map.end()
    }
}

impl<'de> Deserialize<'de> for Coords {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        struct CoordsVisitor;
        impl<'de> Visitor<'de> for CoordsVisitor {
            type Value = Coords;
            fn expecting(&self, f: &mut fmt::Formatter) -> fmt::Result {
                write!(f, "a map from subset keys to values")
            }
            fn visit_map<A: MapAccess<'de>>(self, mut access: A) -> std::result::Result<Coords, A::Error> {
                let mut out = Vec::new();
                while let Some((k, v)) = access.next_entry::<String, ValueText>()? {
                    out.push((k, v));
                }
                Ok(Coords(out))
            }
        }
        d.deserialize_map(CoordsVisitor)
    }
}

fn coords_of(ground: GroundSet, ring: Ring, coords: &Coords) -> Result<Vec<(Subset, Scalar)>> {
    coords
        .0
        .iter()
        .map(|(k, v)| Ok((parse_key(ground, k)?, v.parse(ring)?)))
        .collect()
}

fn coords_to_file<'a>(entries: impl Iterator<Item = (u32, &'a Scalar)>) -> Coords {
    Coords(entries.filter(|(_, v)| !v.is_zero()).map(|(m, v)| (format_key(m), v.into())).collect())
}

/// `{"n":4, "bases":[[],[1,2],[1,4],[2,4]]}`
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FamilyFile {
    pub n: usize,
    pub bases: Vec<Vec<usize>>,
}

impl FamilyFile {
    pub fn to_family(&self) -> Result<BasisFamily> {
        let ground = GroundSet::new(self.n)?;
        let subsets = self.bases.iter().map(|b| ground.subset_of(b)).collect::<Result<Vec<_>>>()?;
        BasisFamily::new(ground, subsets)
    }

    pub fn from_family(f: &BasisFamily) -> Self {
        FamilyFile { n: f.ground().size(), bases: f.bases().map(|b| b.elements()).collect() }
    }
}

/// `{"n":4, "r":2, "ring":{...}, "coords":{"1,2":"1", ...}}`
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PluckerFile {
    pub n: usize,
    pub r: usize,
    pub ring: RingSpec,
    pub coords: Coords,
}

impl PluckerFile {
    pub fn to_vector(&self) -> Result<PluckerVector> {
        let ground = GroundSet::new(self.n)?;
        let pf = self.ring.partial_field()?;
        PluckerVector::from_entries(ground, self.r, pf, coords_of(ground, pf.ring(), &self.coords)?)
    }

    pub fn from_vector(p: &PluckerVector, ring: RingSpec) -> Self {
        PluckerFile { n: p.ground().size(), r: p.rank(), ring, coords: coords_to_file(p.nonzero()) }
    }
}

/// `{"n":4, "ring":{...}, "coords":{"":"1", "1,2":"-3", ...}}`
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct WickFile {
    pub n: usize,
    pub ring: RingSpec,
    pub coords: Coords,
}

impl WickFile {
    pub fn to_vector(&self) -> Result<WickVector> {
        let ground = GroundSet::new(self.n)?;
        let pf = self.ring.partial_field()?;
        WickVector::from_entries(ground, pf, coords_of(ground, pf.ring(), &self.coords)?)
    }

    pub fn from_vector(p: &WickVector, ring: RingSpec) -> Self {
        let entries = p.coords().iter().enumerate().map(|(m, v)| (m as u32, v));
        WickFile { n: p.ground().size(), ring, coords: coords_to_file(entries) }
    }
}

fn parse_rows(ring: Ring, rows: &[Vec<ValueText>], cols: usize) -> Result<Matrix> {
    let mut entries = Vec::with_capacity(rows.len() * cols);
    for (i, row) in rows.iter().enumerate() {
        if row.len() != cols {
            return input_err(format!("row {} has {} entries, {cols} expected", i + 1, row.len()));
        }
        for v in row {
            entries.push(v.parse(ring)?);
        }
    }
    Matrix::new(ring, rows.len(), cols, entries)
}

fn rows_of(m: &Matrix) -> Vec<Vec<ValueText>> {
    (0..m.rows()).map(|i| m.row(i).iter().map(ValueText::from).collect()).collect()
}

/// An `r × n` matrix: `{"n":4, "r":2, "ring":{...}, "matrix":[["1","0","1","1"], ...]}`.
/// `r` may be omitted and is then the row count.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MatrixFile {
    pub n: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub r: Option<usize>,
    pub ring: RingSpec,
    pub matrix: Vec<Vec<ValueText>>,
}

impl MatrixFile {
    pub fn to_matrix(&self) -> Result<Matrix> {
        if let Some(r) = self.r {
            if r != self.matrix.len() {
                return input_err(format!("r = {r} but the matrix has {} rows", self.matrix.len()));
            }
        }
        GroundSet::new(self.n)?;
        parse_rows(self.ring.ring()?, &self.matrix, self.n)
    }

    pub fn from_matrix(m: &Matrix, ring: RingSpec) -> Self {
        MatrixFile { n: m.cols(), r: Some(m.rows()), ring, matrix: rows_of(m) }
    }
}

/// `{"n":4, "ring":{...}, "matrix":[[...], ...], "twist":[3]}`
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RepresentationFile {
    pub n: usize,
    pub ring: RingSpec,
    pub matrix: Vec<Vec<ValueText>>,
    #[serde(default)]
    pub twist: Vec<usize>,
}

impl RepresentationFile {
    pub fn to_representation(&self) -> Result<WickRepresentation> {
        let ground = GroundSet::new(self.n)?;
        if self.matrix.len() != self.n {
            return input_err(format!("{} rows for a skew matrix of size {}", self.matrix.len(), self.n));
        }
        let m = parse_rows(self.ring.ring()?, &self.matrix, self.n)?;
        Ok(WickRepresentation { matrix: SkewMatrix::new(m)?, twist: ground.subset_of(&self.twist)? })
    }

    pub fn from_representation(rep: &WickRepresentation, ring: RingSpec) -> Self {
        RepresentationFile {
            n: rep.matrix.size(),
            ring,
            matrix: rows_of(rep.matrix.matrix()),
            twist: rep.twist.elements(),
        }
    }
}

/// Parses JSON text, reporting failures as input errors.
pub fn from_json<T: for<'de> Deserialize<'de>>(text: &str) -> Result<T> {
    serde_json::from_str(text).map_err(|e| Error::Input(format!("malformed JSON: {e}")))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::wick::wick_support;

    const EXAMPLE: &str = r#"{"n":4,"ring":{"kind":"q"},"coords":{"":"1","1,2":"-3","1,4":"1","2,4":"6"}}"#;

    #[test]
    fn wick_file_round_trip() {
        let file: WickFile = from_json(EXAMPLE).unwrap();
        let p = file.to_vector().unwrap();
        assert_eq!(wick_support(&p).len(), 4);
        let back = WickFile::from_vector(&p, RingSpec::Q);
        assert_eq!(serde_json::to_string(&back).unwrap(), EXAMPLE);
    }

    #[test]
    fn ring_specs() {
        let parse = |s: &str| from_json::<RingSpec>(s).unwrap();
        assert_eq!(parse(r#"{"kind":"gfp","p":7}"#), RingSpec::Gfp { p: 7 });
        assert_eq!(parse(r#"{"kind":"regular"}"#).partial_field().unwrap(), PartialField::regular());
        assert_eq!(parse(r#"{"kind":"z"}"#).ring().unwrap(), Ring::Integers);
        assert!(from_json::<RingSpec>(r#"{"kind":"r"}"#).is_err());
        assert!(parse(r#"{"kind":"gfp","p":8}"#).partial_field().is_err());
        for spec in [RingSpec::Gfp { p: 5 }, RingSpec::Q, RingSpec::Regular] {
            assert_eq!(RingSpec::from_partial_field(&spec.partial_field().unwrap()), spec);
        }
    }

    #[test]
    fn bad_vector_files() {
        let regular = r#"{"n":2,"ring":{"kind":"regular"},"coords":{"":"1","1,2":"2"}}"#;
        let err = from_json::<WickFile>(regular).unwrap().to_vector().unwrap_err();
        assert_eq!(err, Error::NotElement { key: "1,2".into(), value: "2".into() });
        let zeros = r#"{"n":2,"ring":{"kind":"q"},"coords":{"":"0"}}"#;
        assert_eq!(from_json::<WickFile>(zeros).unwrap().to_vector().unwrap_err(), Error::ZeroVector);
        let dup = r#"{"n":2,"ring":{"kind":"q"},"coords":{"1":"1","1":"2"}}"#;
        assert!(from_json::<WickFile>(dup).unwrap().to_vector().is_err());
        let ints = r#"{"n":2,"r":1,"ring":{"kind":"gfp","p":3},"coords":{"1":1,"2":-1}}"#;
        let p = from_json::<PluckerFile>(ints).unwrap().to_vector().unwrap();
        assert_eq!(p.coords()[1].to_string(), "2");
        assert!(from_json::<WickFile>("{").is_err());
    }

    #[test]
    fn matrix_files() {
        let text = r#"{"n":4,"r":2,"ring":{"kind":"q"},"matrix":[["1","0","1","1"],["0","1","1","2"]]}"#;
        let m = from_json::<MatrixFile>(text).unwrap().to_matrix().unwrap();
        assert_eq!(serde_json::to_string(&MatrixFile::from_matrix(&m, RingSpec::Q)).unwrap(), text);
        let ragged = r#"{"n":4,"ring":{"kind":"q"},"matrix":[["1","0","1"]]}"#;
        assert!(from_json::<MatrixFile>(ragged).unwrap().to_matrix().is_err());
        let rep = r#"{"n":2,"ring":{"kind":"z"},"matrix":[["0","1"],["1","0"]],"twist":[]}"#;
        assert!(from_json::<RepresentationFile>(rep).unwrap().to_representation().is_err());
    }
}
