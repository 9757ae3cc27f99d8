//! Label selection and binary label encoding.
//!
//! Labels are scored as `count / threshold`; labels scoring at least 1 (i.e.
//! with at least `threshold` observations) form the vocabulary. Records are
//! relabeled to the selected set and binary-encoded against the vocabulary
//! index.

use std::collections::{BTreeMap, BTreeSet, HashMap};

use crate::corpus::{Dataset, Record};
use crate::error::{Error, Result};

/// Observation count per label: the number of records carrying each label.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LabelStats {
    pub counts: BTreeMap<String, usize>,
}

/// The ordered list of selected labels with its index map.
///
/// Order is descending observation count with lexicographic tie-breaks, so
/// vocabulary indices are reproducible for a given dataset and threshold.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LabelVocabulary {
    labels: Vec<String>,
    index: HashMap<String, usize>,
    pub threshold: usize,
}

impl LabelVocabulary {
    pub fn from_ordered_labels(labels: Vec<String>, threshold: usize) -> Self {
        let index = labels
            .iter()
            .enumerate()
            .map(|(i, l)| (l.clone(), i))
            .collect();
        LabelVocabulary {
            labels,
            index,
            threshold,
        }
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn len(&self) -> usize {
        self.labels.len()
    }

    pub fn is_empty(&self) -> bool {
        self.labels.is_empty()
    }

    pub fn index_of(&self, label: &str) -> Option<usize> {
        self.index.get(label).copied()
    }

    pub fn contains(&self, label: &str) -> bool {
        self.index.contains_key(label)
    }
}

/// A label set encoded as fixed-length 0/1 bits indexed by the vocabulary.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LabelVector {
    bits: Vec<u8>,
}

impl LabelVector {
    pub fn new(bits: Vec<u8>) -> Result<Self> {
        if bits.iter().any(|&b| b > 1) {
            return Err(Error::config("label vector bits must be 0 or 1"));
        }
        Ok(LabelVector { bits })
    }

    pub fn bits(&self) -> &[u8] {
        &self.bits
    }

    pub fn len(&self) -> usize {
        self.bits.len()
    }

    pub fn is_empty(&self) -> bool {
        self.bits.is_empty()
    }
}

/// Result of running the full data-preparation pass over a dataset.
#[derive(Debug, Clone)]
pub struct PreparedDataset {
    pub dataset: Dataset,
    pub vocabulary: LabelVocabulary,
    /// Records dropped because none of their labels survived selection.
    pub removed_records: usize,
}

/// Count, per label, how many records carry it.
pub fn count_labels(dataset: &Dataset) -> Result<LabelStats> {
    if dataset.is_empty() {
        return Err(Error::EmptyDataset);
    }
    let mut counts: BTreeMap<String, usize> = BTreeMap::new();
    for record in &dataset.records {
        for label in &record.labels {
            *counts.entry(label.clone()).or_insert(0) += 1;
        }
    }
    Ok(LabelStats { counts })
}

/// Select every label whose selection score `count / threshold` is >= 1,
/// ordered by descending count with lexicographic tie-breaks.
pub fn select_labels(stats: &LabelStats, threshold: usize) -> Result<LabelVocabulary> {
    if threshold < 1 {
        return Err(Error::config("threshold must be at least 1"));
    }
    let mut selected: Vec<(&String, usize)> = stats
        .counts
        .iter()
        .filter(|&(_, &count)| count >= threshold)
        .map(|(label, &count)| (label, count))
        .collect();
    if selected.is_empty() {
        return Err(Error::NoLabelSelected { threshold });
    }
    selected.sort_by(|a, b| b.1.cmp(&a.1).then_with(|| a.0.cmp(b.0)));
    Ok(LabelVocabulary::from_ordered_labels(
        selected.into_iter().map(|(l, _)| l.clone()).collect(),
        threshold,
    ))
}

/// Keep only the record's labels present in the vocabulary; id and text are
/// unchanged. The result may have an empty label set.
pub fn filter_record_labels(record: &Record, vocabulary: &LabelVocabulary) -> Record {
    Record {
        id: record.id.clone(),
        text: record.text.clone(),
        labels: record
            .labels
            .iter()
            .filter(|l| vocabulary.contains(l))
            .cloned()
            .collect(),
    }
}

/// Full preparation pass: count labels, select the vocabulary, relabel every
/// record, and drop records left with no selected label.
pub fn prepare_dataset(dataset: &Dataset, threshold: usize) -> Result<PreparedDataset> {
    let stats = count_labels(dataset)?;
    let vocabulary = select_labels(&stats, threshold)?;

    let mut records = Vec::with_capacity(dataset.records.len());
    let mut removed = 0usize;
    for record in &dataset.records {
        let filtered = filter_record_labels(record, &vocabulary);
        if filtered.labels.is_empty() {
            removed += 1;
        } else {
            records.push(filtered);
        }
    }
    if records.is_empty() {
        return Err(Error::AllRecordsRemoved { threshold });
    }

    let mut source_meta = dataset.source_meta.clone();
    source_meta.insert("label_threshold".into(), threshold.to_string());
    source_meta.insert("removed_records".into(), removed.to_string());
    Ok(PreparedDataset {
        dataset: Dataset {
            records,
            source_meta,
        },
        vocabulary,
        removed_records: removed,
    })
}

/// Encode a label set as a 0/1 vector over the vocabulary index.
pub fn encode_labels(labels: &BTreeSet<String>, vocabulary: &LabelVocabulary) -> Result<LabelVector> {
    let mut bits = vec![0u8; vocabulary.len()];
    for label in labels {
        let idx = vocabulary
            .index_of(label)
            .ok_or_else(|| Error::UnknownLabel {
                label: label.clone(),
            })?;
        bits[idx] = 1;
    }
    Ok(LabelVector { bits })
}

/// Exact inverse of [`encode_labels`].
pub fn decode_labels(vector: &LabelVector, vocabulary: &LabelVocabulary) -> Result<BTreeSet<String>> {
    if vector.len() != vocabulary.len() {
        return Err(Error::LengthMismatch {
            expected: vocabulary.len(),
            actual: vector.len(),
        });
    }
    Ok(vector
        .bits
        .iter()
        .enumerate()
        .filter(|&(_, &b)| b == 1)
        .map(|(i, _)| vocabulary.labels()[i].clone())
        .collect())
}
