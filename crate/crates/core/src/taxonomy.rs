//! Three-level fallacy taxonomy.
//!
//! ```text
//! Level 0   fallacy
//! Level 1   emotion | logic | credibility
//! Level 2   23 fine-grained labels, each under exactly one level-1 category
//! ```
//!
//! The inventory is loaded from a JSON file (one record per label). The default
//! inventory ships with the crate and is available through [`Taxonomy::default`].

use std::fmt;
use std::path::Path;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::TaxonomyError;

const DEFAULT_INVENTORY: &str = include_str!("../data/taxonomy.json");

/// Tag every label collapses to at level 0.
pub const LEVEL0_TAG: &str = "fallacy";

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Level1Category {
    Emotion,
    Logic,
    Credibility,
}

impl Level1Category {
    pub const ALL: [Level1Category; 3] = [Self::Emotion, Self::Logic, Self::Credibility];

    pub fn as_str(self) -> &'static str {
        match self {
            Self::Emotion => "emotion",
            Self::Logic => "logic",
            Self::Credibility => "credibility",
        }
    }
}

impl fmt::Display for Level1Category {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum TaxonomyLevel {
    /// Binary: fallacious or not.
    L0,
    /// Level-1 categories.
    L1,
    /// Fine-grained labels.
    L2,
}

impl TaxonomyLevel {
    pub const ALL: [TaxonomyLevel; 3] = [Self::L0, Self::L1, Self::L2];

    pub fn index(self) -> u8 {
        match self {
            Self::L0 => 0,
            Self::L1 => 1,
            Self::L2 => 2,
        }
    }
}

impl fmt::Display for TaxonomyLevel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.index())
    }
}

impl FromStr for TaxonomyLevel {
    type Err = TaxonomyError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.trim().to_ascii_lowercase().as_str() {
            "0" | "l0" => Ok(Self::L0),
            "1" | "l1" => Ok(Self::L1),
            "2" | "l2" => Ok(Self::L2),
            other => Err(TaxonomyError::UnknownLevel(other.to_string())),
        }
    }
}

/// A level-2 label from the inventory.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct FallacyLabel {
    pub canonical_name: String,
    pub level1: Level1Category,
    #[serde(default)]
    pub aliases: Vec<String>,
}

impl FallacyLabel {
    pub fn name(&self) -> &str {
        &self.canonical_name
    }
}

impl fmt::Display for FallacyLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.canonical_name)
    }
}

/// A label projected to some level of the taxonomy.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum ExtrapolatedLabel {
    Fallacy(FallacyLabel),
    Category(Level1Category),
    Fallacious,
}

impl fmt::Display for ExtrapolatedLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Self::Fallacy(label) => label.fmt(f),
            Self::Category(category) => category.fmt(f),
            Self::Fallacious => f.write_str(LEVEL0_TAG),
        }
    }
}

pub fn parent_category(label: &FallacyLabel) -> Level1Category {
    label.level1
}

pub fn to_level(label: &FallacyLabel, level: TaxonomyLevel) -> ExtrapolatedLabel {
    match level {
        TaxonomyLevel::L2 => ExtrapolatedLabel::Fallacy(label.clone()),
        TaxonomyLevel::L1 => ExtrapolatedLabel::Category(parent_category(label)),
        TaxonomyLevel::L0 => ExtrapolatedLabel::Fallacious,
    }
}

/// Lower-cases, replaces every non-alphanumeric character with a space and
/// collapses runs of whitespace.
pub fn normalize_text(text: &str) -> String {
    let mut out = String::with_capacity(text.len());
    for word in text
        .chars()
        .map(|c| if c.is_alphanumeric() { c } else { ' ' })
        .collect::<String>()
        .split_whitespace()
    {
        if !out.is_empty() {
            out.push(' ');
        }
        out.extend(word.chars().flat_map(char::to_lowercase));
    }
    out
}

/// `true` if `needle` occurs in `haystack` on word boundaries. Both sides
/// must already be normalized.
pub(crate) fn contains_phrase(haystack: &str, needle: &str) -> bool {
    if needle.is_empty() {
        return false;
    }
    haystack
        .match_indices(needle)
        .any(|(start, _)| {
            let end = start + needle.len();
            let left_ok = start == 0 || haystack.as_bytes()[start - 1] == b' ';
            let right_ok = end == haystack.len() || haystack.as_bytes()[end] == b' ';
            left_ok && right_ok
        })
}

#[derive(Debug, Clone)]
struct NameEntry {
    normalized: String,
    label_index: usize,
}

/// The label inventory plus a lookup table over normalized names and aliases.
///
/// Immutable once built; share it by reference across threads.
#[derive(Debug, Clone)]
pub struct Taxonomy {
    labels: Vec<FallacyLabel>,
    names: Vec<NameEntry>,
}

impl Taxonomy {
    pub fn from_labels(labels: Vec<FallacyLabel>) -> Result<Self, TaxonomyError> {
        if labels.is_empty() {
            return Err(TaxonomyError::Empty);
        }
        let mut labels = labels;
        let mut names: Vec<NameEntry> = Vec::new();
        for (label_index, label) in labels.iter_mut().enumerate() {
            label.canonical_name = label.canonical_name.trim().to_lowercase();
            for alias in label.aliases.iter_mut() {
                *alias = alias.trim().to_lowercase();
            }
            let candidates =
                std::iter::once(label.canonical_name.as_str()).chain(label.aliases.iter().map(String::as_str));
            for name in candidates {
                let normalized = normalize_text(name);
                if normalized.is_empty() {
                    return Err(TaxonomyError::EmptyName(label.canonical_name.clone()));
                }
                if let Some(existing) = names.iter().find(|e| e.normalized == normalized) {
                    if existing.label_index != label_index {
                        return Err(TaxonomyError::DuplicateName(normalized));
                    }
                    continue;
                }
                names.push(NameEntry { normalized, label_index });
            }
        }
        Ok(Self { labels, names })
    }

    pub fn from_json(json: &str) -> Result<Self, TaxonomyError> {
        let labels: Vec<FallacyLabel> = serde_json::from_str(json)?;
        Self::from_labels(labels)
    }

    pub fn from_path(path: impl AsRef<Path>) -> Result<Self, TaxonomyError> {
        let json = std::fs::read_to_string(path)?;
        Self::from_json(&json)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(&self.labels).expect("labels serialize")
    }

    pub fn labels(&self) -> &[FallacyLabel] {
        &self.labels
    }

    pub fn len(&self) -> usize {
        self.labels.len()
    }

    pub fn is_empty(&self) -> bool {
        self.labels.is_empty()
    }

    pub fn children(&self, category: Level1Category) -> impl Iterator<Item = &FallacyLabel> {
        self.labels.iter().filter(move |l| l.level1 == category)
    }

    /// Exact lookup by canonical name or alias, after normalization.
    pub fn get(&self, name: &str) -> Option<&FallacyLabel> {
        let normalized = normalize_text(name);
        self.names
            .iter()
            .find(|e| e.normalized == normalized)
            .map(|e| &self.labels[e.label_index])
    }

    /// Finds the label named in free-form model output.
    ///
    /// A name (canonical or alias) matches when its normalized form occurs as
    /// a whole-word phrase in the normalized output. The longest matching name
    /// wins; ties go to the label that comes first in the inventory.
    pub fn match_label_text(&self, free_text: &str) -> Option<&FallacyLabel> {
        let normalized = normalize_text(free_text);
        self.match_entries(&normalized)
            .max_by(|a, b| {
                a.normalized
                    .len()
                    .cmp(&b.normalized.len())
                    .then(b.label_index.cmp(&a.label_index))
            })
            .map(|e| &self.labels[e.label_index])
    }

    /// Every distinct label named in the output, ordered by first occurrence.
    pub fn match_all_labels(&self, free_text: &str) -> Vec<&FallacyLabel> {
        let normalized = normalize_text(free_text);
        let mut hits: Vec<(usize, usize)> = Vec::new();
        for entry in self.match_entries(&normalized) {
            let pos = normalized.find(&entry.normalized).unwrap_or(usize::MAX);
            match hits.iter_mut().find(|(idx, _)| *idx == entry.label_index) {
                Some(hit) => hit.1 = hit.1.min(pos),
                None => hits.push((entry.label_index, pos)),
            }
        }
        // A shorter name nested in a longer match ("ad hominem" inside
        // "abusive ad hominem") maps to the same label, so nothing to drop.
        hits.sort_by_key(|&(idx, pos)| (pos, idx));
        hits.into_iter().map(|(idx, _)| &self.labels[idx]).collect()
    }

    fn match_entries<'a>(&'a self, normalized: &'a str) -> impl Iterator<Item = &'a NameEntry> + 'a {
        self.names
            .iter()
            .filter(move |e| contains_phrase(normalized, &e.normalized))
    }
}

impl Default for Taxonomy {
    fn default() -> Self {
        Self::from_json(DEFAULT_INVENTORY).expect("bundled taxonomy is valid")
    }
}
