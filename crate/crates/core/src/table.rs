//! Subject records, feature tables, and their CSV forms.
//!
//! The feature-table file is plain CSV: header `subject_id,<feature...>`,
//! one row per subject, floats serialized with shortest-round-trip
//! formatting so write/read is lossless. Lines starting with `#` ahead of
//! the header are treated as annotations (the pipeline stores its config
//! fingerprint there) and ignored by the reader.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::io::{BufRead, BufReader, Write};
use std::path::Path;
use std::str::FromStr;

use crate::error::{Error, Result};

/// Surgical resection status as provided with the cohort.
#[derive(Debug, Clone, Copy, PartialEq, Eq, serde::Serialize, serde::Deserialize)]
pub enum ResectionStatus {
    Gtr,
    Str,
    Na,
}

impl ResectionStatus {
    /// Single-column numeric encoding used in the feature table: NA is the
    /// reference level, larger means more extensive resection.
    pub fn encoded(self) -> f64 {
        match self {
            ResectionStatus::Na => 0.0,
            ResectionStatus::Str => 1.0,
            ResectionStatus::Gtr => 2.0,
        }
    }
}

impl FromStr for ResectionStatus {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim() {
            "GTR" => Ok(ResectionStatus::Gtr),
            "STR" => Ok(ResectionStatus::Str),
            "NA" | "" => Ok(ResectionStatus::Na),
            other => Err(Error::CohortCsv(format!(
                "unknown resection status {other:?}"
            ))),
        }
    }
}

impl fmt::Display for ResectionStatus {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            ResectionStatus::Gtr => "GTR",
            ResectionStatus::Str => "STR",
            ResectionStatus::Na => "NA",
        };
        f.write_str(s)
    }
}

/// One cohort subject: id, age, resection status, and (for training data)
/// overall survival in days.
#[derive(Debug, Clone, PartialEq)]
pub struct SubjectRecord {
    pub id: String,
    pub age: f64,
    pub resection: ResectionStatus,
    pub survival_days: Option<f64>,
}

/// Read a cohort CSV with columns `id, age, survival_days, resection_status`
/// (any column order; survival may be blank for inference-only subjects).
pub fn read_cohort_csv(path: impl AsRef<Path>) -> Result<Vec<SubjectRecord>> {
    let path = path.as_ref();
    let mut reader = csv::ReaderBuilder::new()
        .trim(csv::Trim::All)
        .from_path(path)
        .map_err(|e| Error::CohortCsv(format!("{}: {e}", path.display())))?;
    let headers = reader
        .headers()
        .map_err(|e| Error::CohortCsv(e.to_string()))?
        .clone();
    let col = |name: &str| -> Result<usize> {
        headers
            .iter()
            .position(|h| h == name)
            .ok_or_else(|| Error::CohortCsv(format!("missing required column {name:?}")))
    };
    let id_col = col("id")?;
    let age_col = col("age")?;
    let surv_col = col("survival_days")?;
    let res_col = col("resection_status")?;

    let mut records = Vec::new();
    let mut seen = BTreeSet::new();
    for (line, row) in reader.records().enumerate() {
        let row = row.map_err(|e| Error::CohortCsv(e.to_string()))?;
        let id = row.get(id_col).unwrap_or("").to_string();
        if id.is_empty() {
            return Err(Error::CohortCsv(format!("row {}: empty id", line + 2)));
        }
        if !seen.insert(id.clone()) {
            return Err(Error::CohortCsv(format!("duplicate subject id {id:?}")));
        }
        let age: f64 = row
            .get(age_col)
            .unwrap_or("")
            .parse()
            .map_err(|_| Error::CohortCsv(format!("{id}: unparsable age")))?;
        if !(age > 0.0) {
            return Err(Error::CohortCsv(format!("{id}: age must be positive")));
        }
        let surv_raw = row.get(surv_col).unwrap_or("");
        let survival_days = if surv_raw.is_empty() {
            None
        } else {
            let d: f64 = surv_raw
                .parse()
                .map_err(|_| Error::CohortCsv(format!("{id}: unparsable survival_days")))?;
            if d < 0.0 {
                return Err(Error::CohortCsv(format!("{id}: negative survival_days")));
            }
            Some(d)
        };
        let resection: ResectionStatus = row.get(res_col).unwrap_or("NA").parse()?;
        records.push(SubjectRecord {
            id,
            age,
            resection,
            survival_days,
        });
    }
    Ok(records)
}

/// Write a cohort CSV in the schema `read_cohort_csv` expects.
pub fn write_cohort_csv(records: &[SubjectRecord], path: impl AsRef<Path>) -> Result<()> {
    let path = path.as_ref();
    let mut w = csv::Writer::from_path(path)
        .map_err(|e| Error::CohortCsv(format!("{}: {e}", path.display())))?;
    w.write_record(["id", "age", "survival_days", "resection_status"])
        .map_err(|e| Error::CohortCsv(e.to_string()))?;
    for r in records {
        let surv = r.survival_days.map(|d| format!("{d}")).unwrap_or_default();
        w.write_record([
            r.id.as_str(),
            &format!("{}", r.age),
            &surv,
            &r.resection.to_string(),
        ])
        .map_err(|e| Error::CohortCsv(e.to_string()))?;
    }
    w.flush().map_err(|e| Error::io(path.display().to_string(), e))
}

/// Broad feature families, derived from the feature-name schema.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FeatureProvenance {
    Intensity,
    Shape,
    Rim,
    Atlas,
    Clinical,
    External,
}

/// Classify a feature name by its schema prefix/family token.
pub fn classify_feature_name(name: &str) -> FeatureProvenance {
    if name.starts_with("clinical_") {
        return FeatureProvenance::Clinical;
    }
    if name.starts_with("atlas_") {
        return FeatureProvenance::Atlas;
    }
    // the 7 compartment-volume ratios belong to the custom rim/ratio block
    if name.starts_with("ratio_") {
        return FeatureProvenance::Rim;
    }
    let mut parts = name.split('_');
    let _comp = parts.next();
    match parts.next() {
        Some("shape") => FeatureProvenance::Shape,
        Some("rim") => FeatureProvenance::Rim,
        Some("T1") | Some("T1c") | Some("T2") | Some("FLAIR") => FeatureProvenance::Intensity,
        _ => FeatureProvenance::External,
    }
}

/// Subject-by-feature matrix with stable string feature identifiers.
#[derive(Debug, Clone, PartialEq)]
pub struct FeatureTable {
    subject_ids: Vec<String>,
    feature_names: Vec<String>,
    /// Row-major: `values[row * n_features + col]`.
    values: Vec<f64>,
}

impl FeatureTable {
    pub fn new(
        subject_ids: Vec<String>,
        feature_names: Vec<String>,
        values: Vec<f64>,
    ) -> Result<Self> {
        let mut ids = BTreeSet::new();
        for id in &subject_ids {
            if !ids.insert(id) {
                return Err(Error::FeatureTable(format!("duplicate subject id {id:?}")));
            }
        }
        let mut names = BTreeSet::new();
        for n in &feature_names {
            if !names.insert(n) {
                return Err(Error::FeatureTable(format!("duplicate feature name {n:?}")));
            }
        }
        if values.len() != subject_ids.len() * feature_names.len() {
            return Err(Error::FeatureTable(format!(
                "value matrix has {} entries, expected {}x{}",
                values.len(),
                subject_ids.len(),
                feature_names.len()
            )));
        }
        if let Some(bad) = values.iter().find(|v| !v.is_finite()) {
            return Err(Error::FeatureTable(format!(
                "non-finite value {bad} in table"
            )));
        }
        Ok(FeatureTable {
            subject_ids,
            feature_names,
            values,
        })
    }

    pub fn empty() -> Self {
        FeatureTable {
            subject_ids: Vec::new(),
            feature_names: Vec::new(),
            values: Vec::new(),
        }
    }

    pub fn n_subjects(&self) -> usize {
        self.subject_ids.len()
    }

    pub fn n_features(&self) -> usize {
        self.feature_names.len()
    }

    pub fn subject_ids(&self) -> &[String] {
        &self.subject_ids
    }

    pub fn feature_names(&self) -> &[String] {
        &self.feature_names
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn row(&self, r: usize) -> &[f64] {
        let p = self.n_features();
        &self.values[r * p..(r + 1) * p]
    }

    pub fn get(&self, row: usize, col: usize) -> f64 {
        self.values[row * self.n_features() + col]
    }

    pub fn feature_index(&self, name: &str) -> Option<usize> {
        self.feature_names.iter().position(|n| n == name)
    }

    pub fn subject_index(&self, id: &str) -> Option<usize> {
        self.subject_ids.iter().position(|s| s == id)
    }

    pub fn column(&self, col: usize) -> Vec<f64> {
        (0..self.n_subjects()).map(|r| self.get(r, col)).collect()
    }

    pub fn provenance(&self) -> Vec<FeatureProvenance> {
        self.feature_names
            .iter()
            .map(|n| classify_feature_name(n))
            .collect()
    }

    /// New table with only the named columns, in the given order.
    pub fn project(&self, names: &[String]) -> Result<FeatureTable> {
        let cols: Vec<usize> = names
            .iter()
            .map(|n| {
                self.feature_index(n)
                    .ok_or_else(|| Error::FeatureTable(format!("missing feature column {n:?}")))
            })
            .collect::<Result<_>>()?;
        let mut values = Vec::with_capacity(self.n_subjects() * cols.len());
        for r in 0..self.n_subjects() {
            for &c in &cols {
                values.push(self.get(r, c));
            }
        }
        FeatureTable::new(self.subject_ids.clone(), names.to_vec(), values)
    }

    /// New table with only the given rows, in the given order.
    pub fn select_rows(&self, rows: &[usize]) -> FeatureTable {
        let p = self.n_features();
        let mut values = Vec::with_capacity(rows.len() * p);
        let mut ids = Vec::with_capacity(rows.len());
        for &r in rows {
            ids.push(self.subject_ids[r].clone());
            values.extend_from_slice(self.row(r));
        }
        FeatureTable {
            subject_ids: ids,
            feature_names: self.feature_names.clone(),
            values,
        }
    }
}

/// Column-wise concatenation of two tables over the same subject set.
/// Row order follows `a`; `b`'s rows are matched by id.
pub fn merge_feature_tables(a: &FeatureTable, b: &FeatureTable) -> Result<FeatureTable> {
    if b.n_features() == 0 && b.n_subjects() == 0 {
        return Ok(a.clone());
    }
    let a_ids: BTreeSet<&String> = a.subject_ids.iter().collect();
    let b_ids: BTreeSet<&String> = b.subject_ids.iter().collect();
    if a_ids != b_ids {
        let only_a: Vec<_> = a_ids.difference(&b_ids).take(3).collect();
        let only_b: Vec<_> = b_ids.difference(&a_ids).take(3).collect();
        return Err(Error::FeatureTable(format!(
            "subject sets differ (a-only: {only_a:?}, b-only: {only_b:?})"
        )));
    }
    for n in &b.feature_names {
        if a.feature_names.contains(n) {
            return Err(Error::FeatureTable(format!(
                "duplicate feature name {n:?} in merge"
            )));
        }
    }
    let b_row: BTreeMap<&String, usize> = b
        .subject_ids
        .iter()
        .enumerate()
        .map(|(i, id)| (id, i))
        .collect();
    let mut names = a.feature_names.clone();
    names.extend(b.feature_names.iter().cloned());
    let mut values = Vec::with_capacity(a.n_subjects() * names.len());
    for (ra, id) in a.subject_ids.iter().enumerate() {
        values.extend_from_slice(a.row(ra));
        values.extend_from_slice(b.row(b_row[id]));
    }
    FeatureTable::new(a.subject_ids.clone(), names, values)
}

/// Write a feature table as CSV. Extra leading `# key=value` annotation
/// lines may be supplied (the pipeline writes its config fingerprint).
pub fn write_feature_table_annotated(
    table: &FeatureTable,
    path: impl AsRef<Path>,
    annotations: &[(String, String)],
) -> Result<()> {
    let path = path.as_ref();
    let file =
        std::fs::File::create(path).map_err(|e| Error::io(path.display().to_string(), e))?;
    let mut w = std::io::BufWriter::new(file);
    let io_err = |e: std::io::Error| Error::io(path.display().to_string(), e);
    for (k, v) in annotations {
        writeln!(w, "# {k}={v}").map_err(io_err)?;
    }
    write!(w, "subject_id").map_err(io_err)?;
    for n in table.feature_names() {
        write!(w, ",{n}").map_err(io_err)?;
    }
    writeln!(w).map_err(io_err)?;
    for r in 0..table.n_subjects() {
        write!(w, "{}", table.subject_ids()[r]).map_err(io_err)?;
        for v in table.row(r) {
            write!(w, ",{v}").map_err(io_err)?;
        }
        writeln!(w).map_err(io_err)?;
    }
    w.flush().map_err(io_err)
}

pub fn write_feature_table(table: &FeatureTable, path: impl AsRef<Path>) -> Result<()> {
    write_feature_table_annotated(table, path, &[])
}

/// Read a feature table written by `write_feature_table`, returning the
/// table and any `# key=value` annotations.
pub fn read_feature_table_annotated(
    path: impl AsRef<Path>,
) -> Result<(FeatureTable, BTreeMap<String, String>)> {
    let path = path.as_ref();
    let file = std::fs::File::open(path).map_err(|e| Error::io(path.display().to_string(), e))?;
    let reader = BufReader::new(file);
    let mut annotations = BTreeMap::new();
    let mut header: Option<Vec<String>> = None;
    let mut subject_ids = Vec::new();
    let mut values = Vec::new();
    for (lineno, line) in reader.lines().enumerate() {
        let line = line.map_err(|e| Error::io(path.display().to_string(), e))?;
        if line.is_empty() {
            continue;
        }
        if let Some(rest) = line.strip_prefix('#') {
            if let Some((k, v)) = rest.trim().split_once('=') {
                annotations.insert(k.trim().to_string(), v.trim().to_string());
            }
            continue;
        }
        let fields: Vec<&str> = line.split(',').collect();
        match &header {
            None => {
                if fields.first() != Some(&"subject_id") {
                    return Err(Error::FeatureTable(format!(
                        "{}: first column must be subject_id",
                        path.display()
                    )));
                }
                header = Some(fields[1..].iter().map(|s| s.to_string()).collect());
            }
            Some(names) => {
                if fields.len() != names.len() + 1 {
                    return Err(Error::FeatureTable(format!(
                        "{}: line {} has {} fields, expected {}",
                        path.display(),
                        lineno + 1,
                        fields.len(),
                        names.len() + 1
                    )));
                }
                subject_ids.push(fields[0].to_string());
                for f in &fields[1..] {
                    let v: f64 = f.parse().map_err(|_| {
                        Error::FeatureTable(format!(
                            "{}: line {}: bad float {f:?}",
                            path.display(),
                            lineno + 1
                        ))
                    })?;
                    values.push(v);
                }
            }
        }
    }
    let names = header.ok_or_else(|| {
        Error::FeatureTable(format!("{}: missing header row", path.display()))
    })?;
    let table = FeatureTable::new(subject_ids, names, values)?;
    Ok((table, annotations))
}

pub fn read_feature_table(path: impl AsRef<Path>) -> Result<FeatureTable> {
    read_feature_table_annotated(path).map(|(t, _)| t)
}

#[cfg(test)]
mod tests {
    use super::*;
    use tempfile::tempdir;

    fn small_table() -> FeatureTable {
        FeatureTable::new(
            vec!["s1".into(), "s2".into()],
            vec!["clinical_Age".into(), "ED_shape_Sphericity".into()],
            vec![61.2, 0.53, 70.0, 0.91],
        )
        .unwrap()
    }

    #[test]
    fn cohort_csv_parses_fields() {
        let dir = tempdir().unwrap();
        let path = dir.path().join("cohort.csv");
        std::fs::write(
            &path,
            "id,age,survival_days,resection_status\ns1,61.2,382,GTR\ns2,70.0,,NA\n",
        )
        .unwrap();
        let records = read_cohort_csv(&path).unwrap();
        assert_eq!(records.len(), 2);
        assert_eq!(records[0].id, "s1");
        assert_eq!(records[0].survival_days, Some(382.0));
        assert_eq!(records[0].resection, ResectionStatus::Gtr);
        assert_eq!(records[1].survival_days, None);
        assert_eq!(records[1].resection, ResectionStatus::Na);
    }

    #[test]
    fn cohort_csv_large_roundtrip() {
        let dir = tempdir().unwrap();
        let path = dir.path().join("cohort.csv");
        let records: Vec<SubjectRecord> = (0..163)
            .map(|i| SubjectRecord {
                id: format!("s{i:03}"),
                age: 40.0 + i as f64 * 0.2,
                resection: ResectionStatus::Gtr,
                survival_days: Some(100.0 + i as f64),
            })
            .collect();
        write_cohort_csv(&records, &path).unwrap();
        let back = read_cohort_csv(&path).unwrap();
        assert_eq!(back.len(), 163);
        assert_eq!(back, records);
    }

    #[test]
    fn cohort_csv_errors() {
        let dir = tempdir().unwrap();
        let path = dir.path().join("bad.csv");
        std::fs::write(&path, "id,age,resection_status\ns1,61.2,GTR\n").unwrap();
        assert!(matches!(read_cohort_csv(&path), Err(Error::CohortCsv(_))));
        std::fs::write(
            &path,
            "id,age,survival_days,resection_status\ns1,old,382,GTR\n",
        )
        .unwrap();
        assert!(matches!(read_cohort_csv(&path), Err(Error::CohortCsv(_))));
    }

    #[test]
    fn merge_concatenates_columns() {
        let a = small_table();
        let b = FeatureTable::new(
            vec!["s2".into(), "s1".into()],
            vec!["deep_0".into()],
            vec![9.0, 3.0],
        )
        .unwrap();
        let m = merge_feature_tables(&a, &b).unwrap();
        assert_eq!(m.n_features(), 3);
        assert_eq!(m.subject_ids(), a.subject_ids());
        // b's rows matched by id, not position
        assert_eq!(m.get(0, 2), 3.0);
        assert_eq!(m.get(1, 2), 9.0);
        // projection back onto a's names equals a
        let proj = m.project(&a.feature_names().to_vec()).unwrap();
        assert_eq!(proj, a);
    }

    #[test]
    fn merge_rejects_mismatch_and_duplicates() {
        let a = small_table();
        let b = FeatureTable::new(vec!["s1".into(), "sX".into()], vec!["f".into()], vec![1.0, 2.0])
            .unwrap();
        assert!(merge_feature_tables(&a, &b).is_err());
        let c = FeatureTable::new(
            vec!["s1".into(), "s2".into()],
            vec!["clinical_Age".into()],
            vec![1.0, 2.0],
        )
        .unwrap();
        assert!(merge_feature_tables(&a, &c).is_err());
    }

    #[test]
    fn merge_with_empty_is_identity() {
        let a = small_table();
        let m = merge_feature_tables(&a, &FeatureTable::empty()).unwrap();
        assert_eq!(m, a);
    }

    #[test]
    fn table_roundtrip_is_lossless() {
        let dir = tempdir().unwrap();
        let path = dir.path().join("t.csv");
        let t = FeatureTable::new(
            vec!["a".into(), "b".into()],
            vec!["f1".into(), "f2".into(), "f3".into()],
            vec![
                1.0 / 3.0,
                -2.5e-17,
                std::f64::consts::PI,
                1e300,
                -0.0,
                42.424242424242424,
            ],
        )
        .unwrap();
        write_feature_table(&t, &path).unwrap();
        let back = read_feature_table(&path).unwrap();
        for (x, y) in back.values().iter().zip(t.values()) {
            assert_eq!(x.to_bits(), y.to_bits());
        }
    }

    #[test]
    fn table_rejects_duplicate_column_on_read() {
        let dir = tempdir().unwrap();
        let path = dir.path().join("dup.csv");
        std::fs::write(&path, "subject_id,f,f\ns1,1,2\n").unwrap();
        assert!(read_feature_table(&path).is_err());
    }

    #[test]
    fn empty_table_roundtrip() {
        let dir = tempdir().unwrap();
        let path = dir.path().join("empty.csv");
        let t = FeatureTable::new(vec![], vec!["f1".into()], vec![]).unwrap();
        write_feature_table(&t, &path).unwrap();
        let back = read_feature_table(&path).unwrap();
        assert_eq!(back.n_subjects(), 0);
        assert_eq!(back.feature_names(), t.feature_names());
    }

    #[test]
    fn annotations_roundtrip() {
        let dir = tempdir().unwrap();
        let path = dir.path().join("ann.csv");
        let t = small_table();
        write_feature_table_annotated(
            &t,
            &path,
            &[("config_fingerprint".into(), "abc123".into())],
        )
        .unwrap();
        let (back, ann) = read_feature_table_annotated(&path).unwrap();
        assert_eq!(back, t);
        assert_eq!(ann.get("config_fingerprint").map(String::as_str), Some("abc123"));
    }

    #[test]
    fn non_finite_rejected() {
        assert!(FeatureTable::new(vec!["s".into()], vec!["f".into()], vec![f64::NAN]).is_err());
    }

    #[test]
    fn provenance_classification() {
        assert_eq!(
            classify_feature_name("clinical_Age"),
            FeatureProvenance::Clinical
        );
        assert_eq!(
            classify_feature_name("atlas_Region07"),
            FeatureProvenance::Atlas
        );
        assert_eq!(
            classify_feature_name("ED_T2_glszm_SmallAreaLowGrayLevelEmphasis"),
            FeatureProvenance::Intensity
        );
        assert_eq!(
            classify_feature_name("ET_shape_Sphericity"),
            FeatureProvenance::Shape
        );
        assert_eq!(
            classify_feature_name("ET_rim_MeanWidth"),
            FeatureProvenance::Rim
        );
        assert_eq!(classify_feature_name("deep_17"), FeatureProvenance::External);
    }
}
