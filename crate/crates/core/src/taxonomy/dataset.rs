//! The algorithm catalogue: entries, lookup by name or alias, and listing
//! by path prefix.
//!
//! File format (`data/taxonomy.json` is the bundled instance):
//!
//! ```json
//! {
//!   "version": 1,
//!   "entries": [
//!     {
//!       "name": "Genetic Algorithm",
//!       "aliases": ["GA"],
//!       "paths": ["Biology/Reproduction/Evolution", "Biology/Survival/Self"],
//!       "implemented": true,
//!       "traditional": "evolutionary",
//!       "note": "optional free text"
//!     }
//!   ]
//! }
//! ```
//!
//! The first path is the canonical one. `traditional` and `note` may be
//! omitted.

use std::collections::HashMap;
use std::path::Path;

use serde::{Deserialize, Serialize};

use super::{PathPrefix, TaxonomyError, TaxonomyPath};

pub const BUNDLED_TAXONOMY: &str = include_str!("../../data/taxonomy.json");

pub const FORMAT_VERSION: u32 = 1;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TaxonomyEntry {
    pub name: String,
    pub aliases: Vec<String>,
    pub paths: Vec<TaxonomyPath>,
    pub implemented: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub traditional: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub note: Option<String>,
}

impl TaxonomyEntry {
    /// The canonical path.
    pub fn path(&self) -> &TaxonomyPath {
        &self.paths[0]
    }

    pub fn is_under(&self, prefix: &PathPrefix) -> bool {
        self.paths.iter().any(|p| prefix.contains(p))
    }

    /// Name and aliases, canonical name first.
    pub fn names(&self) -> impl Iterator<Item = &str> {
        std::iter::once(self.name.as_str()).chain(self.aliases.iter().map(String::as_str))
    }
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawEntry {
    name: String,
    #[serde(default)]
    aliases: Vec<String>,
    paths: Vec<String>,
    #[serde(default)]
    implemented: bool,
    #[serde(default)]
    traditional: Option<String>,
    #[serde(default)]
    note: Option<String>,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawFile {
    version: u32,
    entries: Vec<RawEntry>,
}

#[derive(Serialize)]
struct FileRef<'a> {
    version: u32,
    entries: &'a [TaxonomyEntry],
}

/// Case-folded, whitespace-collapsed lookup key.
pub fn name_key(s: &str) -> String {
    s.split_whitespace()
        .map(str::to_lowercase)
        .collect::<Vec<_>>()
        .join(" ")
}

/// Immutable after construction.
#[derive(Debug, Clone)]
pub struct Taxonomy {
    entries: Vec<TaxonomyEntry>,
    index: HashMap<String, usize>,
}

impl Taxonomy {
    pub fn bundled() -> Self {
        Self::from_json_str(BUNDLED_TAXONOMY).expect("bundled taxonomy is valid")
    }

    pub fn from_json_str(text: &str) -> Result<Self, TaxonomyError> {
        let raw: RawFile =
            serde_json::from_str(text).map_err(|e| TaxonomyError::Schema(e.to_string()))?;
        if raw.version != FORMAT_VERSION {
            return Err(TaxonomyError::Schema(format!(
                "unsupported version {}, expected {FORMAT_VERSION}",
                raw.version
            )));
        }
        let mut entries = Vec::with_capacity(raw.entries.len());
        for r in raw.entries {
            if r.name.trim().is_empty() {
                return Err(TaxonomyError::Schema("entry with empty name".into()));
            }
            if r.paths.is_empty() {
                return Err(TaxonomyError::Schema(format!("'{}' has no paths", r.name)));
            }
            let paths = r
                .paths
                .iter()
                .map(|p| {
                    p.parse::<TaxonomyPath>().map_err(|e| match e {
                        TaxonomyError::IllegalPath(msg) => {
                            TaxonomyError::IllegalPath(format!("{}: {msg}", r.name))
                        }
                        other => other,
                    })
                })
                .collect::<Result<Vec<_>, _>>()?;
            entries.push(TaxonomyEntry {
                name: r.name,
                aliases: r.aliases,
                paths,
                implemented: r.implemented,
                traditional: r.traditional,
                note: r.note,
            });
        }
        Self::from_entries(entries)
    }

    pub fn from_entries(entries: Vec<TaxonomyEntry>) -> Result<Self, TaxonomyError> {
        let mut index: HashMap<String, usize> = HashMap::new();
        for (i, entry) in entries.iter().enumerate() {
            if entry.paths.is_empty() {
                return Err(TaxonomyError::Schema(format!("'{}' has no paths", entry.name)));
            }
            for p in &entry.paths {
                TaxonomyPath::try_from(p.prefix())?;
            }
            for name in entry.names() {
                let key = name_key(name);
                if key.is_empty() {
                    return Err(TaxonomyError::Schema(format!(
                        "'{}' has an empty alias",
                        entry.name
                    )));
                }
                if let Some(&j) = index.get(&key) {
                    if j != i {
                        return Err(TaxonomyError::Schema(format!(
                            "'{name}' names both '{}' and '{}'",
                            entries[j].name, entry.name
                        )));
                    }
                }
                index.insert(key, i);
            }
        }
        Ok(Self { entries, index })
    }

    pub fn entries(&self) -> &[TaxonomyEntry] {
        &self.entries
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    /// Case-insensitive, alias-aware lookup.
    pub fn lookup(&self, name_or_alias: &str) -> Result<&TaxonomyEntry, TaxonomyError> {
        self.index
            .get(&name_key(name_or_alias))
            .map(|&i| &self.entries[i])
            .ok_or_else(|| TaxonomyError::NotFound(name_or_alias.to_string()))
    }

    /// Entries with any path at or below `prefix`, sorted by name.
    pub fn children(&self, prefix: &PathPrefix) -> Result<Vec<&TaxonomyEntry>, TaxonomyError> {
        prefix.validate()?;
        let mut out: Vec<&TaxonomyEntry> =
            self.entries.iter().filter(|e| e.is_under(prefix)).collect();
        out.sort_by(|a, b| {
            name_key(&a.name)
                .cmp(&name_key(&b.name))
                .then_with(|| a.name.cmp(&b.name))
        });
        Ok(out)
    }

    /// Pretty JSON in the documented file format.
    pub fn to_json(&self) -> String {
        let file = FileRef {
            version: FORMAT_VERSION,
            entries: &self.entries,
        };
        let mut s = serde_json::to_string_pretty(&file).expect("taxonomy serializes");
        s.push('\n');
        s
    }
}

pub fn load_taxonomy(path: &Path) -> Result<Taxonomy, TaxonomyError> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| TaxonomyError::Schema(format!("{}: {e}", path.display())))?;
    Taxonomy::from_json_str(&text)
}
