//! Exhaustive enumeration of labeled orthogonal matroids on small ground sets,
//! representability census over small fields, and the counting-bound check.

mod bounds;
mod realizable;

use std::collections::{BTreeMap, HashMap};
use std::fs::{File, OpenOptions};
use std::io::{BufRead, BufReader, Write};
use std::path::Path;
use std::time::Instant;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

pub use bounds::{verify_nelson_chain, BoundCheck, ChainStep, StepStatus, MAX_PRECISION};
pub use realizable::{realizable_sets_demo, RealizableSets, MAX_DEMO_N};

use crate::error::{input_err, Error, Result};
use crate::exactalg::{principal_pfaffians, Ring, Scalar, SkewMatrix};
use crate::groundset::{GroundSet, Subset};
use crate::io::FamilyFile;
use crate::matroid::{is_matroid, is_orthogonal, BasisFamily};
use crate::wick::WickRepresentation;
use realizable::{family_from_indicator, skew_from_index, support_indicator};

/// Largest ground set for family enumeration.
pub const MAX_ENUM_N: usize = 5;

/// Families per chunk written to the record stream.
pub const CHUNK_SIZE: usize = 4096;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Parity {
    Even,
    Odd,
    Both,
}

/// Where representing matrices are searched.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Domain {
    Gf2,
    Gf3,
    /// Integer matrices with entries in `{0, ±1}` whose principal Pfaffians
    /// all lie in `{0, ±1}`.
    Regular,
}

impl Domain {
    pub fn key(&self) -> &'static str {
        match self {
            Domain::Gf2 => "gf2",
            Domain::Gf3 => "gf3",
            Domain::Regular => "regular",
        }
    }

    pub fn parse(s: &str) -> Result<Domain> {
        match s {
            "gf2" => Ok(Domain::Gf2),
            "gf3" => Ok(Domain::Gf3),
            "regular" => Ok(Domain::Regular),
            _ => input_err(format!("unknown census field {s:?}; expected gf2, gf3 or regular")),
        }
    }

    /// Largest `n` searched exhaustively.
    pub fn max_n(&self) -> usize {
        match self {
            Domain::Gf2 => 5,
            Domain::Gf3 | Domain::Regular => 4,
        }
    }

    pub fn ring(&self) -> Ring {
        match self {
            Domain::Gf2 => Ring::PrimeField(2),
            Domain::Gf3 => Ring::PrimeField(3),
            Domain::Regular => Ring::Integers,
        }
    }
}

fn check_enum_n(n: usize) -> Result<GroundSet> {
    if n > MAX_ENUM_N {
        return Err(Error::Capability(format!("family enumeration supports n <= {MAX_ENUM_N}, got {n}")));
    }
    GroundSet::new(n)
}

fn parity_masks(n: usize, odd: bool) -> Vec<u32> {
    (0u32..1 << n).filter(|m| (m.count_ones() % 2 == 1) == odd).collect()
}

/// Indicators (bit `J` set iff `J` is a member) of every nonempty family of
/// subsets sharing one parity, ascending. Ascending indicator order is colex
/// order on families.
fn family_indicators(n: usize, parity: Parity) -> Vec<u64> {
    let mut out = Vec::new();
    let classes: &[bool] = match parity {
        Parity::Even => &[false],
        Parity::Odd => &[true],
        Parity::Both => &[false, true],
    };
    for &odd in classes {
        let masks = parity_masks(n, odd);
        for index in 1u64..1 << masks.len() {
            let ind = masks
                .iter()
                .enumerate()
                .filter(|(k, _)| index >> k & 1 == 1)
                .fold(0u64, |acc, (_, &m)| acc | 1 << m);
            out.push(ind);
        }
    }
    out.sort_unstable();
    out
}

/// All labeled orthogonal matroids on `[n]` of the given parity, in colex
/// order of families.
pub fn enumerate_orthogonal(n: usize, parity: Parity) -> Result<Vec<BasisFamily>> {
    let ground = check_enum_n(n)?;
    Ok(family_indicators(n, parity)
        .into_par_iter()
        .map(|ind| family_from_indicator(ground, ind))
        .filter(|f| is_orthogonal(f).holds())
        .collect())
}

/// `{B Δ T : B ∈ F}` as an indicator.
fn twist_indicator(ind: u64, t: u32) -> u64 {
    (0..64u32).filter(|&b| ind >> b & 1 == 1).fold(0u64, |acc, b| acc | 1 << (b ^ t))
}

/// Pfaffian supports of every skew matrix in a domain, each with the least
/// matrix index producing it.
#[derive(Clone, Debug)]
pub struct RepresentationTable {
    domain: Domain,
    n: usize,
    supports: HashMap<u64, u64>,
}

impl RepresentationTable {
    pub fn build(domain: Domain, n: usize) -> Result<Self> {
        if n > domain.max_n() {
            return Err(Error::Capability(format!(
                "{} representability search supports n <= {}, got {n}",
                domain.key(),
                domain.max_n()
            )));
        }
        let count = Self::space(domain, n);
        let indicators: Vec<Option<u64>> = (0..count)
            .into_par_iter()
            .map(|i| {
                let a = Self::matrix(domain, n, i);
                let pfs = principal_pfaffians(&a);
                if domain == Domain::Regular && !pfs.iter().all(|v| v.is_zero() || v.is_sign()) {
                    return None;
                }
                Some(support_indicator(&a))
            })
            .collect();
        let mut supports = HashMap::new();
        for (i, ind) in indicators.into_iter().enumerate() {
            if let Some(ind) = ind {
                supports.entry(ind).or_insert(i as u64);
            }
        }
        Ok(RepresentationTable { domain, n, supports })
    }

    fn space(domain: Domain, n: usize) -> u64 {
        let q: u64 = if domain == Domain::Gf2 { 2 } else { 3 };
        q.pow((n * n.saturating_sub(1) / 2) as u32)
    }

    fn matrix(domain: Domain, n: usize, index: u64) -> SkewMatrix {
        match domain {
            Domain::Gf2 => skew_from_index(domain.ring(), 2, n, index),
            Domain::Gf3 => skew_from_index(domain.ring(), 3, n, index),
            Domain::Regular => {
                // digits 0, 1, 2 stand for 0, 1, -1
                let mut index = index;
                let upper: Vec<Scalar> = (0..n * n.saturating_sub(1) / 2)
                    .map(|_| {
                        let v = [0, 1, -1][(index % 3) as usize];
                        index /= 3;
                        Ring::Integers.from_i64(v)
                    })
                    .collect();
                SkewMatrix::from_upper(Ring::Integers, n, &upper).expect("sizes agree")
            }
        }
    }

    pub fn domain(&self) -> Domain {
        self.domain
    }

    /// Number of distinct supports, that is normal representable families.
    pub fn len(&self) -> usize {
        self.supports.len()
    }

    pub fn is_empty(&self) -> bool {
        self.supports.is_empty()
    }

    fn find_indicator(&self, ind: u64) -> Option<(u32, u64)> {
        (0..1u32 << self.n)
            .filter(|&t| ind >> t & 1 == 1)
            .find_map(|t| self.supports.get(&twist_indicator(ind, t)).map(|&i| (t, i)))
    }

    /// A representation `(A, T)` of `f` with `T` the colex-least member that
    /// works and `A` the least matrix index for that support.
    pub fn find(&self, f: &BasisFamily) -> Option<WickRepresentation> {
        if f.ground().size() != self.n {
            return None;
        }
        let ind = f.masks().iter().fold(0u64, |acc, &m| acc | 1 << m);
        self.find_indicator(ind).map(|(t, i)| WickRepresentation {
            matrix: Self::matrix(self.domain, self.n, i),
            twist: Subset::from_bits(f.ground(), t).expect("t is a member of f"),
        })
    }
}

/// One line of the census record stream.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FamilyRecord {
    pub bases: Vec<Vec<usize>>,
    pub orthogonal: bool,
    pub representable: BTreeMap<String, bool>,
}

/// Aggregated census counts. All counts are of labeled families.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct CensusReport {
    pub n: usize,
    pub fields: Vec<String>,
    pub labeled: bool,
    pub total_families_checked: u64,
    pub orthogonal_count: u64,
    pub matroid_count: u64,
    /// Whether every family passing the exchange axiom also passed the
    /// symmetric exchange axiom in this run.
    pub matroids_are_orthogonal: bool,
    pub representable_counts: BTreeMap<String, u64>,
    pub workers: usize,
    pub chunk_size: usize,
    pub resumed_records: u64,
    pub runtime_seconds: f64,
    pub note: String,
}

const GAP_NOTE: &str = "Counts are labeled families on [n], not isomorphism classes. \
Asymptotic non-representability is not observable at this size; the exact upper-bound \
side is checked by verify-bounds. Reading matroid counts as orthogonal matroid counts \
relies on every matroid being an orthogonal matroid, which this run checks only at this n.";

#[derive(Default)]
struct Tally {
    total: u64,
    orthogonal: u64,
    matroid: u64,
    matroid_not_orthogonal: u64,
    representable: BTreeMap<String, u64>,
}

impl Tally {
    fn add(&mut self, r: &FamilyRecord, is_matroid: bool) {
        self.total += 1;
        self.orthogonal += r.orthogonal as u64;
        self.matroid += is_matroid as u64;
        self.matroid_not_orthogonal += (is_matroid && !r.orthogonal) as u64;
        for (k, &v) in &r.representable {
            *self.representable.entry(k.clone()).or_default() += v as u64;
        }
    }
}

fn evaluate(ground: GroundSet, ind: u64, tables: &[RepresentationTable]) -> (FamilyRecord, bool) {
    let f = family_from_indicator(ground, ind);
    let orthogonal = is_orthogonal(&f).holds();
    let matroid = is_matroid(&f).holds();
    let representable = tables
        .iter()
        .map(|t| (t.domain.key().to_string(), orthogonal && t.find_indicator(ind).is_some()))
        .collect();
    (FamilyRecord { bases: FamilyFile::from_family(&f).bases, orthogonal, representable }, matroid)
}

/// Reads the complete records of an earlier run, truncating a torn final line.
fn resume(path: &Path, ground: GroundSet, expected: &[u64], keys: &[String], tally: &mut Tally) -> Result<usize> {
    let file = match File::open(path) {
        Ok(f) => f,
        Err(e) if e.kind() == std::io::ErrorKind::NotFound => return Ok(0),
        Err(e) => return input_err(format!("cannot read {}: {e}", path.display())),
    };
    let mut done = 0usize;
    let mut good_bytes = 0u64;
    let mut reader = BufReader::new(file);
    let mut line = String::new();
    loop {
        line.clear();
        let read = reader.read_line(&mut line).map_err(|e| Error::Input(format!("cannot read {}: {e}", path.display())))?;
        if read == 0 || !line.ends_with('\n') {
            break;
        }
        let Ok(rec) = serde_json::from_str::<FamilyRecord>(line.trim_end()) else { break };
        let Some(&ind) = expected.get(done) else {
            return input_err(format!("{} has more records than families", path.display()));
        };
        let f = family_from_indicator(ground, ind);
        let rec_keys: Vec<&String> = rec.representable.keys().collect();
        if rec.bases != FamilyFile::from_family(&f).bases || rec_keys != keys.iter().collect::<Vec<_>>() {
            return input_err(format!("{} line {} does not belong to this census", path.display(), done + 1));
        }
        tally.add(&rec, is_matroid(&f).holds());
        done += 1;
        good_bytes += read as u64;
    }
    let file = OpenOptions::new().write(true).open(path).map_err(|e| Error::Input(format!("cannot open {}: {e}", path.display())))?;
    file.set_len(good_bytes).map_err(|e| Error::Input(format!("cannot truncate {}: {e}", path.display())))?;
    Ok(done)
}

/// Exhaustive census of all same-parity families on `[n]`. Each family is
/// checked for the symmetric exchange axiom and, if it passes, searched for a
/// representation over each domain. With `out`, one JSON line per family is
/// appended in colex order, and an existing stream is resumed.
pub fn representability_census(
    n: usize,
    domains: &[Domain],
    workers: usize,
    out: Option<&Path>,
) -> Result<CensusReport> {
    let start = Instant::now();
    let ground = check_enum_n(n)?;
    if workers == 0 {
        return input_err("workers must be at least 1");
    }
    let mut domains = domains.to_vec();
    domains.sort();
    domains.dedup();
    if domains.is_empty() {
        return input_err("at least one census field is required");
    }
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(workers)
        .build()
        .map_err(|e| Error::Input(format!("cannot start {workers} workers: {e}")))?;
    let tables = pool.install(|| domains.iter().map(|&d| RepresentationTable::build(d, n)).collect::<Result<Vec<_>>>())?;
    let keys: Vec<String> = domains.iter().map(|d| d.key().to_string()).collect();
    let indicators = family_indicators(n, Parity::Both);

    let mut tally = Tally::default();
    for k in &keys {
        tally.representable.insert(k.clone(), 0);
    }
    let mut done = 0;
    let mut sink = None;
    if let Some(path) = out {
        done = resume(path, ground, &indicators, &keys, &mut tally)?;
        let file = OpenOptions::new()
            .create(true)
            .append(true)
            .open(path)
            .map_err(|e| Error::Input(format!("cannot open {}: {e}", path.display())))?;
        sink = Some(std::io::BufWriter::new(file));
    }
    let resumed = done as u64;

    for chunk in indicators[done..].chunks(CHUNK_SIZE) {
        let results: Vec<(FamilyRecord, bool)> =
            pool.install(|| chunk.par_iter().map(|&ind| evaluate(ground, ind, &tables)).collect());
        for (rec, matroid) in &results {
            tally.add(rec, *matroid);
        }
        if let Some(w) = sink.as_mut() {
            let io_err = |e: std::io::Error| Error::Input(format!("cannot write census records: {e}"));
            for (rec, _) in &results {
                let line = serde_json::to_string(rec).expect("record serializes");
                writeln!(w, "{line}").map_err(io_err)?;
            }
            w.flush().map_err(io_err)?;
        }
    }

    Ok(CensusReport {
        n,
        fields: keys,
        labeled: true,
        total_families_checked: tally.total,
        orthogonal_count: tally.orthogonal,
        matroid_count: tally.matroid,
        matroids_are_orthogonal: tally.matroid_not_orthogonal == 0,
        representable_counts: tally.representable,
        workers,
        chunk_size: CHUNK_SIZE,
        resumed_records: resumed,
        runtime_seconds: start.elapsed().as_secs_f64(),
        note: GAP_NOTE.into(),
    })
}

/// Principal Pfaffians of `a` as a map from subset to value, skipping zeros.
pub fn pfaffian_support(a: &SkewMatrix) -> Vec<(u32, Scalar)> {
    principal_pfaffians(a)
        .into_iter()
        .enumerate()
        .filter(|(_, v)| !v.is_zero())
        .map(|(j, v)| (j as u32, v))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::matroid::is_orthogonal_strong;
    use crate::wick::{reconstruct_wick, wick_from_representation, wick_support};
    use crate::exactalg::PartialField;

    fn family(n: usize, bases: &[&[usize]]) -> BasisFamily {
        let g = GroundSet::new(n).unwrap();
        BasisFamily::new(g, bases.iter().map(|b| g.subset_of(b).unwrap())).unwrap()
    }

    #[test]
    fn enumeration_examples() {
        assert_eq!(enumerate_orthogonal(1, Parity::Both).unwrap().len(), 2);
        let even2 = enumerate_orthogonal(2, Parity::Even).unwrap();
        assert_eq!(even2, vec![family(2, &[&[]]), family(2, &[&[1, 2]]), family(2, &[&[], &[1, 2]])]);
        let four = enumerate_orthogonal(4, Parity::Even).unwrap();
        assert!(four.contains(&family(4, &[&[], &[1, 2], &[1, 4], &[2, 4]])));
        assert!(!four.contains(&family(4, &[&[], &[1, 2, 3, 4]])));
        assert!(enumerate_orthogonal(6, Parity::Even).is_err());
    }

    #[test]
    fn enumeration_is_colex_and_complete() {
        let both = enumerate_orthogonal(3, Parity::Both).unwrap();
        let mut even = enumerate_orthogonal(3, Parity::Even).unwrap();
        even.extend(enumerate_orthogonal(3, Parity::Odd).unwrap());
        assert_eq!(both.len(), even.len());
        let key = |f: &BasisFamily| f.masks().iter().fold(0u64, |a, &m| a | 1 << m);
        assert!(both.windows(2).all(|w| key(&w[0]) < key(&w[1])));
    }

    #[test]
    fn strong_enumeration_agrees() {
        for n in 0..=4 {
            for f in family_indicators(n, Parity::Both) {
                let f = family_from_indicator(GroundSet::new(n).unwrap(), f);
                assert_eq!(is_orthogonal(&f).holds(), is_orthogonal_strong(&f).holds(), "{:?}", f.masks());
            }
        }
    }

    #[test]
    fn counts_increase() {
        let counts: Vec<usize> = (0..=4).map(|n| enumerate_orthogonal(n, Parity::Both).unwrap().len()).collect();
        assert!(counts.windows(2).all(|w| w[0] < w[1]), "{counts:?}");
    }

    #[test]
    fn census_invariants() {
        let report = representability_census(3, &[Domain::Gf2, Domain::Gf3], 2, None).unwrap();
        assert_eq!(report.total_families_checked, 2 * 15);
        assert!(report.matroid_count <= report.orthogonal_count);
        assert!(report.matroids_are_orthogonal);
        for v in report.representable_counts.values() {
            assert!(*v <= report.orthogonal_count);
        }
        assert!(report.labeled);
    }

    #[test]
    fn caps() {
        assert!(matches!(representability_census(6, &[Domain::Gf2], 1, None), Err(Error::Capability(_))));
        assert!(matches!(representability_census(5, &[Domain::Gf3], 1, None), Err(Error::Capability(_))));
        assert!(representability_census(3, &[Domain::Gf2], 0, None).is_err());
    }

    #[test]
    fn found_representations_round_trip() {
        for domain in [Domain::Gf2, Domain::Gf3, Domain::Regular] {
            let table = RepresentationTable::build(domain, 4).unwrap();
            let pf = match domain {
                Domain::Regular => PartialField::regular(),
                _ => PartialField::field(domain.ring()).unwrap(),
            };
            for f in enumerate_orthogonal(4, Parity::Both).unwrap() {
                let Some(rep) = table.find(&f) else { continue };
                let p = wick_from_representation(&rep, pf).unwrap();
                assert_eq!(wick_support(&p), f);
                let again = wick_from_representation(&reconstruct_wick(&p).unwrap(), pf).unwrap();
                assert_eq!(wick_support(&again), f);
            }
        }
    }

    #[test]
    fn example_family_over_gf2() {
        let table = RepresentationTable::build(Domain::Gf2, 4).unwrap();
        let f = family(4, &[&[], &[1, 2], &[1, 4], &[2, 4]]);
        let rep = table.find(&f).unwrap();
        assert!(rep.twist.is_empty());
    }

    #[test]
    fn record_stream_resumes() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("census.jsonl");
        let full = representability_census(3, &[Domain::Gf2], 1, Some(&path)).unwrap();
        let text = std::fs::read_to_string(&path).unwrap();
        let lines: Vec<&str> = text.lines().collect();
        assert_eq!(lines.len() as u64, full.total_families_checked);
        let first: FamilyRecord = serde_json::from_str(lines[0]).unwrap();
        assert_eq!(first.bases, vec![Vec::<usize>::new()]);

        // keep 7 lines and a torn eighth
        let mut partial: String = lines[..7].iter().map(|l| format!("{l}\n")).collect();
        partial.push_str(&lines[7][..5]);
        std::fs::write(&path, partial).unwrap();
        let resumed = representability_census(3, &[Domain::Gf2], 3, Some(&path)).unwrap();
        assert_eq!(resumed.resumed_records, 7);
        assert_eq!(std::fs::read_to_string(&path).unwrap(), text);
        assert_eq!(resumed.orthogonal_count, full.orthogonal_count);
        assert_eq!(resumed.representable_counts, full.representable_counts);

        let mismatch = representability_census(3, &[Domain::Gf3], 1, Some(&path));
        assert!(mismatch.is_err());
    }
}
