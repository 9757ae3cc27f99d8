//! Loading, saving, and splitting multi-label text datasets.
//!
//! The interchange format is jsonl with fields `{id, text, labels: [string]}`;
//! csv uses the same columns with a `|`-delimited labels field.

use std::collections::{BTreeMap, BTreeSet, HashSet};
use std::fs::File;
use std::io::{BufRead, BufReader, BufWriter, Write};
use std::path::Path;
use std::str::FromStr;

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// One text with its set of category labels.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Record {
    pub id: String,
    pub text: String,
    pub labels: BTreeSet<String>,
}

/// An ordered collection of records plus free-form provenance.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct Dataset {
    pub records: Vec<Record>,
    pub source_meta: BTreeMap<String, String>,
}

impl Dataset {
    pub fn len(&self) -> usize {
        self.records.len()
    }

    pub fn is_empty(&self) -> bool {
        self.records.is_empty()
    }
}

/// Fraction and seed for a deterministic train/test split.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SplitSpec {
    pub train_fraction: f64,
    pub seed: u64,
}

/// On-disk dataset format.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum DataFormat {
    Jsonl,
    Csv,
}

impl FromStr for DataFormat {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "jsonl" => Ok(DataFormat::Jsonl),
            "csv" => Ok(DataFormat::Csv),
            other => Err(Error::config(format!("unknown data format {other:?}"))),
        }
    }
}

impl std::fmt::Display for DataFormat {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            DataFormat::Jsonl => write!(f, "jsonl"),
            DataFormat::Csv => write!(f, "csv"),
        }
    }
}

#[derive(Debug, Serialize, Deserialize)]
struct JsonRow {
    id: String,
    text: String,
    labels: Vec<String>,
}

fn validate_row(
    path: &Path,
    row: usize,
    id: String,
    text: String,
    labels: Vec<String>,
    seen: &mut HashSet<String>,
) -> Result<Record> {
    if id.trim().is_empty() {
        return Err(Error::MalformedRow {
            path: path.to_path_buf(),
            row,
            reason: "empty id".into(),
        });
    }
    if !seen.insert(id.clone()) {
        return Err(Error::DuplicateId { id, row });
    }
    if text.trim().is_empty() {
        return Err(Error::EmptyText { id });
    }
    let mut set = BTreeSet::new();
    for label in labels {
        if label.trim().is_empty() {
            return Err(Error::MalformedRow {
                path: path.to_path_buf(),
                row,
                reason: format!("record {id:?} has an empty label name"),
            });
        }
        set.insert(label);
    }
    if set.is_empty() {
        return Err(Error::EmptyLabels { id });
    }
    Ok(Record {
        id,
        text,
        labels: set,
    })
}

/// Load a dataset from `path`, preserving file order and deduplicating each
/// record's labels.
pub fn load_dataset(path: impl AsRef<Path>, format: DataFormat) -> Result<Dataset> {
    let path = path.as_ref();
    let file = File::open(path).map_err(|e| Error::io(path, e))?;
    let reader = BufReader::new(file);
    let mut records = Vec::new();
    let mut seen = HashSet::new();

    match format {
        DataFormat::Jsonl => {
            for (i, line) in reader.lines().enumerate() {
                let row = i + 1;
                let line = line.map_err(|e| Error::io(path, e))?;
                if line.trim().is_empty() {
                    continue;
                }
                let parsed: JsonRow =
                    serde_json::from_str(&line).map_err(|e| Error::MalformedRow {
                        path: path.to_path_buf(),
                        row,
                        reason: e.to_string(),
                    })?;
                records.push(validate_row(
                    path,
                    row,
                    parsed.id,
                    parsed.text,
                    parsed.labels,
                    &mut seen,
                )?);
            }
        }
        DataFormat::Csv => {
            let mut rdr = csv::Reader::from_reader(reader);
            for (i, result) in rdr.deserialize::<CsvRow>().enumerate() {
                let row = i + 2; // header is row 1
                let parsed = result.map_err(|e| Error::MalformedRow {
                    path: path.to_path_buf(),
                    row,
                    reason: e.to_string(),
                })?;
                let labels = parsed
                    .labels
                    .split('|')
                    .filter(|s| !s.is_empty())
                    .map(str::to_string)
                    .collect();
                records.push(validate_row(path, row, parsed.id, parsed.text, labels, &mut seen)?);
            }
        }
    }

    let mut source_meta = BTreeMap::new();
    source_meta.insert("path".into(), path.display().to_string());
    source_meta.insert("format".into(), format.to_string());
    Ok(Dataset {
        records,
        source_meta,
    })
}

#[derive(Debug, Serialize, Deserialize)]
struct CsvRow {
    id: String,
    text: String,
    labels: String,
}

/// Save a dataset to `path` in the given format, preserving record order.
pub fn save_dataset(dataset: &Dataset, path: impl AsRef<Path>, format: DataFormat) -> Result<()> {
    let path = path.as_ref();
    let file = File::create(path).map_err(|e| Error::io(path, e))?;
    let mut writer = BufWriter::new(file);

    match format {
        DataFormat::Jsonl => {
            for record in &dataset.records {
                let row = JsonRow {
                    id: record.id.clone(),
                    text: record.text.clone(),
                    labels: record.labels.iter().cloned().collect(),
                };
                serde_json::to_writer(&mut writer, &row)?;
                writer.write_all(b"\n").map_err(|e| Error::io(path, e))?;
            }
            writer.flush().map_err(|e| Error::io(path, e))?;
        }
        DataFormat::Csv => {
            for record in &dataset.records {
                for label in &record.labels {
                    if label.contains('|') {
                        return Err(Error::LabelDelimiter {
                            label: label.clone(),
                        });
                    }
                }
            }
            let mut wtr = csv::Writer::from_writer(writer);
            for record in &dataset.records {
                wtr.serialize(CsvRow {
                    id: record.id.clone(),
                    text: record.text.clone(),
                    labels: record.labels.iter().cloned().collect::<Vec<_>>().join("|"),
                })?;
            }
            wtr.flush().map_err(|e| Error::io(path, e))?;
        }
    }
    Ok(())
}

/// Split a dataset into disjoint train/test parts.
///
/// The train side gets `round(train_fraction * N)` records chosen by a seeded
/// shuffle; relative record order within each side follows the input.
pub fn split_dataset(dataset: &Dataset, spec: &SplitSpec) -> Result<(Dataset, Dataset)> {
    let n = dataset.records.len();
    if n < 2 {
        return Err(Error::TooFewRecords { n });
    }
    if !(spec.train_fraction > 0.0 && spec.train_fraction < 1.0) {
        return Err(Error::config(format!(
            "train_fraction must be in (0,1), got {}",
            spec.train_fraction
        )));
    }
    let train_n = (spec.train_fraction * n as f64).round() as usize;
    if train_n == 0 {
        return Err(Error::EmptySplit {
            fraction: spec.train_fraction,
            side: "train",
        });
    }
    if train_n == n {
        return Err(Error::EmptySplit {
            fraction: spec.train_fraction,
            side: "test",
        });
    }

    let mut indices: Vec<usize> = (0..n).collect();
    let mut rng = ChaCha8Rng::seed_from_u64(spec.seed);
    indices.shuffle(&mut rng);

    let mut train_idx: Vec<usize> = indices[..train_n].to_vec();
    let mut test_idx: Vec<usize> = indices[train_n..].to_vec();
    train_idx.sort_unstable();
    test_idx.sort_unstable();

    let side = |idx: &[usize], name: &str| {
        let mut meta = dataset.source_meta.clone();
        meta.insert("split".into(), name.to_string());
        meta.insert("split_seed".into(), spec.seed.to_string());
        meta.insert("train_fraction".into(), spec.train_fraction.to_string());
        Dataset {
            records: idx.iter().map(|&i| dataset.records[i].clone()).collect(),
            source_meta: meta,
        }
    };
    Ok((side(&train_idx, "train"), side(&test_idx, "test")))
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::io::Write as _;

    fn write_temp(content: &str, ext: &str) -> tempfile::NamedTempFile {
        let mut f = tempfile::Builder::new().suffix(ext).tempfile().unwrap();
        f.write_all(content.as_bytes()).unwrap();
        f
    }

    fn record(id: &str, labels: &[&str]) -> Record {
        Record {
            id: id.into(),
            text: format!("text for {id}"),
            labels: labels.iter().map(|s| s.to_string()).collect(),
        }
    }

    #[test]
    fn jsonl_preserves_order() {
        let f = write_temp(
            concat!(
                "{\"id\":\"a\",\"text\":\"first one\",\"labels\":[\"X\"]}\n",
                "{\"id\":\"b\",\"text\":\"second one\",\"labels\":[\"Y\"]}\n",
                "{\"id\":\"c\",\"text\":\"third one\",\"labels\":[\"X\",\"Y\"]}\n",
            ),
            ".jsonl",
        );
        let d = load_dataset(f.path(), DataFormat::Jsonl).unwrap();
        let ids: Vec<_> = d.records.iter().map(|r| r.id.as_str()).collect();
        assert_eq!(ids, ["a", "b", "c"]);
    }

    #[test]
    fn duplicate_labels_collapse_to_set() {
        let f = write_temp(
            "{\"id\":\"a\",\"text\":\"t\",\"labels\":[\"Health\",\"Health\"]}\n",
            ".jsonl",
        );
        let d = load_dataset(f.path(), DataFormat::Jsonl).unwrap();
        assert_eq!(d.records[0].labels.len(), 1);
        assert!(d.records[0].labels.contains("Health"));
    }

    #[test]
    fn duplicate_id_is_rejected() {
        let f = write_temp(
            concat!(
                "{\"id\":\"a\",\"text\":\"t\",\"labels\":[\"X\"]}\n",
                "{\"id\":\"a\",\"text\":\"u\",\"labels\":[\"Y\"]}\n",
            ),
            ".jsonl",
        );
        let err = load_dataset(f.path(), DataFormat::Jsonl).unwrap_err();
        assert!(matches!(err, Error::DuplicateId { row: 2, .. }));
    }

    #[test]
    fn empty_label_list_is_rejected() {
        let f = write_temp("{\"id\":\"a\",\"text\":\"t\",\"labels\":[]}\n", ".jsonl");
        let err = load_dataset(f.path(), DataFormat::Jsonl).unwrap_err();
        assert!(matches!(err, Error::EmptyLabels { .. }));
    }

    #[test]
    fn malformed_row_reports_row_number() {
        let f = write_temp(
            concat!(
                "{\"id\":\"a\",\"text\":\"t\",\"labels\":[\"X\"]}\n",
                "{not json}\n",
            ),
            ".jsonl",
        );
        let err = load_dataset(f.path(), DataFormat::Jsonl).unwrap_err();
        assert!(matches!(err, Error::MalformedRow { row: 2, .. }));
    }

    #[test]
    fn missing_file_is_io_error() {
        let err = load_dataset("/nonexistent/nope.jsonl", DataFormat::Jsonl).unwrap_err();
        assert!(matches!(err, Error::Io { .. }));
    }

    #[test]
    fn csv_round_trip_is_identity() {
        let dataset = Dataset {
            records: vec![
                record("a", &["Health", "Recipes"]),
                record("b", &["Travel"]),
            ],
            source_meta: BTreeMap::new(),
        };
        let f = tempfile::Builder::new().suffix(".csv").tempfile().unwrap();
        save_dataset(&dataset, f.path(), DataFormat::Csv).unwrap();
        let loaded = load_dataset(f.path(), DataFormat::Csv).unwrap();
        assert_eq!(loaded.records, dataset.records);
    }

    #[test]
    fn jsonl_round_trip_is_identity() {
        let dataset = Dataset {
            records: vec![
                record("a", &["Health"]),
                record("b", &["Travel", "Music"]),
            ],
            source_meta: BTreeMap::new(),
        };
        let f = tempfile::Builder::new().suffix(".jsonl").tempfile().unwrap();
        save_dataset(&dataset, f.path(), DataFormat::Jsonl).unwrap();
        let loaded = load_dataset(f.path(), DataFormat::Jsonl).unwrap();
        assert_eq!(loaded.records, dataset.records);
    }

    fn toy_dataset(n: usize) -> Dataset {
        Dataset {
            records: (0..n).map(|i| record(&format!("r{i}"), &["X"])).collect(),
            source_meta: BTreeMap::new(),
        }
    }

    #[test]
    fn split_sizes_follow_rounding() {
        let d = toy_dataset(10);
        let (train, test) = split_dataset(
            &d,
            &SplitSpec {
                train_fraction: 0.8,
                seed: 7,
            },
        )
        .unwrap();
        assert_eq!((train.len(), test.len()), (8, 2));
    }

    #[test]
    fn split_is_deterministic_for_a_seed() {
        let d = toy_dataset(31);
        let spec = SplitSpec {
            train_fraction: 0.7,
            seed: 99,
        };
        let (a_train, a_test) = split_dataset(&d, &spec).unwrap();
        let (b_train, b_test) = split_dataset(&d, &spec).unwrap();
        assert_eq!(a_train.records, b_train.records);
        assert_eq!(a_test.records, b_test.records);
    }

    #[test]
    fn different_seeds_partition_differently_but_exhaustively() {
        let d = toy_dataset(60);
        let split = |seed| {
            split_dataset(
                &d,
                &SplitSpec {
                    train_fraction: 0.8,
                    seed,
                },
            )
            .unwrap()
        };
        let (t1, s1) = split(1);
        let (t2, _s2) = split(2);
        assert_ne!(
            t1.records.iter().map(|r| &r.id).collect::<Vec<_>>(),
            t2.records.iter().map(|r| &r.id).collect::<Vec<_>>()
        );
        let mut union: Vec<_> = t1.records.iter().chain(s1.records.iter()).cloned().collect();
        union.sort_by(|a, b| a.id.cmp(&b.id));
        let mut input = d.records.clone();
        input.sort_by(|a, b| a.id.cmp(&b.id));
        assert_eq!(union, input);
    }

    #[test]
    fn split_partitions_for_many_seeds() {
        let d = toy_dataset(23);
        for seed in 0..100 {
            let (train, test) = split_dataset(
                &d,
                &SplitSpec {
                    train_fraction: 0.6,
                    seed,
                },
            )
            .unwrap();
            let train_ids: HashSet<_> = train.records.iter().map(|r| r.id.clone()).collect();
            let test_ids: HashSet<_> = test.records.iter().map(|r| r.id.clone()).collect();
            assert!(train_ids.is_disjoint(&test_ids));
            assert_eq!(train_ids.len() + test_ids.len(), d.len());
        }
    }

    #[test]
    fn split_rejects_degenerate_inputs() {
        assert!(matches!(
            split_dataset(
                &toy_dataset(1),
                &SplitSpec {
                    train_fraction: 0.5,
                    seed: 0
                }
            ),
            Err(Error::TooFewRecords { n: 1 })
        ));
        // A fraction that rounds to all records leaves the test side empty.
        assert!(matches!(
            split_dataset(
                &toy_dataset(3),
                &SplitSpec {
                    train_fraction: 0.95,
                    seed: 0
                }
            ),
            Err(Error::EmptySplit { side: "test", .. })
        ));
    }
}
