//! Problem-to-algorithm recommender.
//!
//! 1. Normalize the descriptor's tags.
//! 2. Fire every rule whose conditions the descriptor satisfies; the path of
//!    the heaviest fired rule is the conceptual goal.
//! 3. Collect the entries under each fired rule's path.
//! 4. Score each entry as `weight * (1 + 0.25 * implemented) / 1.25`, keeping
//!    the best rule per entry, and rank by score then name.
//!
//! Rule file format (`data/triz_rules.json` is the bundled instance):
//!
//! ```json
//! {
//!   "version": 1,
//!   "rules": [
//!     {
//!       "id": "route-team",
//!       "description": "route finding by a cooperating population",
//!       "goals": ["route-finding"],
//!       "modality": ["combinatorial-permutation"],
//!       "cooperation": ["team-search", "population"],
//!       "maps_to": "Biology/ResourceSeeking/FoodSeeking/HerdBehavior",
//!       "weight": 0.95
//!     }
//!   ]
//! }
//! ```
//!
//! A rule fires when the descriptor has at least one of its `goals` and, for
//! each of `modality`, `cooperation` and `data_regime` the rule lists, the
//! descriptor's value is among them. An omitted condition always holds.

use std::collections::{BTreeSet, HashSet};
use std::fmt;
use std::path::Path;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use super::{PathPrefix, Taxonomy, TaxonomyEntry, TaxonomyError, TaxonomyPath};

pub const BUNDLED_RULES: &str = include_str!("../../data/triz_rules.json");

/// Multiplier applied to implemented entries before normalization.
pub const IMPLEMENTED_BOOST: f64 = 0.25;

macro_rules! vocab {
    ($(#[$meta:meta])* $name:ident { $($variant:ident = $tag:literal),+ $(,)? }) => {
        $(#[$meta])*
        #[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
        pub enum $name {
            $(#[serde(rename = $tag)] $variant),+
        }

        impl $name {
            pub const ALL: &'static [$name] = &[$($name::$variant),+];

            pub fn as_str(self) -> &'static str {
                match self {
                    $($name::$variant => $tag),+
                }
            }

            fn from_normalized(tag: &str) -> Option<Self> {
                match tag {
                    $($tag => Some($name::$variant),)+
                    _ => None,
                }
            }
        }

        impl fmt::Display for $name {
            fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
                f.write_str(self.as_str())
            }
        }

        impl FromStr for $name {
            type Err = TaxonomyError;

            fn from_str(s: &str) -> Result<Self, Self::Err> {
                Self::from_normalized(&normalize_tag(s)).ok_or_else(|| {
                    TaxonomyError::InvalidDescriptor(format!("'{s}' is not a {} tag", stringify!($name)))
                })
            }
        }
    };
}

vocab! {
    GoalTag {
        ParameterSearch = "parameter-search",
        RouteFinding = "route-finding",
        Packing = "packing",
        StructureSelection = "structure-selection",
        SurvivalFiltering = "survival-filtering",
        Scheduling = "scheduling",
        ForecastingFit = "forecasting-fit",
        ResourceAllocation = "resource-allocation",
    }
}

vocab! {
    Modality {
        Continuous = "continuous",
        CombinatorialPermutation = "combinatorial-permutation",
        CombinatorialSubset = "combinatorial-subset",
        Mixed = "mixed",
    }
}

vocab! {
    Cooperation {
        SingleAgent = "single-agent",
        Population = "population",
        TeamSearch = "team-search",
    }
}

vocab! {
    DataRegime {
        DataRich = "data-rich",
        DataScarce = "data-scarce",
    }
}

/// Lowercase, trimmed, with runs of spaces or underscores turned into `-`.
pub fn normalize_tag(tag: &str) -> String {
    tag.trim()
        .to_lowercase()
        .split(|c: char| c.is_whitespace() || c == '_' || c == '-')
        .filter(|s| !s.is_empty())
        .collect::<Vec<_>>()
        .join("-")
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ProblemDescriptor {
    pub goal_tags: BTreeSet<GoalTag>,
    pub modality: Modality,
    pub cooperation: Option<Cooperation>,
    pub data_regime: Option<DataRegime>,
}

impl ProblemDescriptor {
    pub fn new(goal_tags: impl IntoIterator<Item = GoalTag>, modality: Modality) -> Self {
        Self {
            goal_tags: goal_tags.into_iter().collect(),
            modality,
            cooperation: None,
            data_regime: None,
        }
    }

    pub fn with_cooperation(mut self, c: Cooperation) -> Self {
        self.cooperation = Some(c);
        self
    }

    pub fn with_data_regime(mut self, d: DataRegime) -> Self {
        self.data_regime = Some(d);
        self
    }

    /// Sorts a flat tag list into the four fields. Needs at least one goal
    /// tag and exactly one modality; at most one cooperation and one data
    /// regime tag.
    pub fn from_tags<S: AsRef<str>>(tags: &[S]) -> Result<Self, TaxonomyError> {
        let bad = |msg: String| Err(TaxonomyError::InvalidDescriptor(msg));
        let mut goals = BTreeSet::new();
        let mut modality = None;
        let mut cooperation = None;
        let mut data_regime = None;
        for raw in tags {
            let raw = raw.as_ref();
            let tag = normalize_tag(raw);
            if tag.is_empty() {
                continue;
            }
            if let Some(g) = GoalTag::from_normalized(&tag) {
                goals.insert(g);
            } else if let Some(m) = Modality::from_normalized(&tag) {
                if modality.replace(m).is_some_and(|old| old != m) {
                    return bad(format!("more than one modality tag (second: '{raw}')"));
                }
            } else if let Some(c) = Cooperation::from_normalized(&tag) {
                if cooperation.replace(c).is_some_and(|old| old != c) {
                    return bad(format!("more than one cooperation tag (second: '{raw}')"));
                }
            } else if let Some(d) = DataRegime::from_normalized(&tag) {
                if data_regime.replace(d).is_some_and(|old| old != d) {
                    return bad(format!("more than one data-regime tag (second: '{raw}')"));
                }
            } else {
                return bad(format!("unknown tag '{raw}'"));
            }
        }
        let Some(modality) = modality else {
            return bad("a modality tag is required".into());
        };
        let d = Self {
            goal_tags: goals,
            modality,
            cooperation,
            data_regime,
        };
        d.validate()?;
        Ok(d)
    }

    pub fn validate(&self) -> Result<(), TaxonomyError> {
        if self.goal_tags.is_empty() {
            return Err(TaxonomyError::InvalidDescriptor(
                "at least one goal tag is required".into(),
            ));
        }
        Ok(())
    }

    /// All tags in canonical spelling.
    pub fn tags(&self) -> Vec<&'static str> {
        let mut out: Vec<&'static str> = self.goal_tags.iter().map(|g| g.as_str()).collect();
        out.push(self.modality.as_str());
        out.extend(self.cooperation.map(Cooperation::as_str));
        out.extend(self.data_regime.map(DataRegime::as_str));
        out
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TrizRule {
    pub id: String,
    pub description: String,
    pub goals: Vec<GoalTag>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub modality: Option<Vec<Modality>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub cooperation: Option<Vec<Cooperation>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub data_regime: Option<Vec<DataRegime>>,
    pub maps_to: RuleTarget,
    pub weight: f64,
}

/// A rule target: a full path or a prefix of one, written as a string.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "String", into = "String")]
pub struct RuleTarget(pub PathPrefix);

impl TryFrom<String> for RuleTarget {
    type Error = TaxonomyError;

    fn try_from(s: String) -> Result<Self, Self::Error> {
        let p: PathPrefix = s.parse()?;
        if p.depth() < 2 {
            return Err(TaxonomyError::IllegalPath(format!(
                "rule target '{s}' needs at least two levels"
            )));
        }
        Ok(Self(p))
    }
}

impl From<RuleTarget> for String {
    fn from(p: RuleTarget) -> String {
        p.0.to_string()
    }
}

impl TrizRule {
    /// Number of conditions the descriptor satisfies, out of four.
    fn satisfied(&self, d: &ProblemDescriptor) -> (usize, bool) {
        let goal = self.goals.iter().any(|g| d.goal_tags.contains(g));
        let modality = self.modality.as_ref().is_none_or(|m| m.contains(&d.modality));
        let cooperation = self
            .cooperation
            .as_ref()
            .is_none_or(|c| d.cooperation.is_some_and(|x| c.contains(&x)));
        let data = self
            .data_regime
            .as_ref()
            .is_none_or(|r| d.data_regime.is_some_and(|x| r.contains(&x)));
        let conds = [goal, modality, cooperation, data];
        let n = conds.iter().filter(|c| **c).count();
        (n, n == conds.len())
    }

    pub fn matches(&self, d: &ProblemDescriptor) -> bool {
        self.satisfied(d).1
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RuleTable {
    pub version: u32,
    pub rules: Vec<TrizRule>,
}

impl RuleTable {
    pub fn bundled() -> Self {
        Self::from_json_str(BUNDLED_RULES).expect("bundled rules are valid")
    }

    pub fn from_json_str(text: &str) -> Result<Self, TaxonomyError> {
        let table: RuleTable =
            serde_json::from_str(text).map_err(|e| TaxonomyError::Schema(e.to_string()))?;
        table.validate()?;
        Ok(table)
    }

    pub fn load(path: &Path) -> Result<Self, TaxonomyError> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| TaxonomyError::Schema(format!("{}: {e}", path.display())))?;
        Self::from_json_str(&text)
    }

    pub fn validate(&self) -> Result<(), TaxonomyError> {
        let schema = |msg: String| Err(TaxonomyError::Schema(msg));
        if self.version != 1 {
            return schema(format!("unsupported rule table version {}", self.version));
        }
        let mut ids = HashSet::new();
        for r in &self.rules {
            if !ids.insert(r.id.as_str()) {
                return schema(format!("duplicate rule id '{}'", r.id));
            }
            if r.goals.is_empty() {
                return schema(format!("rule '{}' lists no goals", r.id));
            }
            if !(r.weight > 0.0 && r.weight <= 1.0) {
                return schema(format!("rule '{}' weight {} is outside (0, 1]", r.id, r.weight));
            }
        }
        Ok(())
    }

    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("rules serialize");
        s.push('\n');
        s
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RankedEntry {
    pub entry: TaxonomyEntry,
    pub matched_path: TaxonomyPath,
    pub score: f64,
    pub rule_id: String,
    pub rationale: String,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Recommendation {
    pub conceptual_goal: PathPrefix,
    pub ranked: Vec<RankedEntry>,
}

impl Recommendation {
    pub fn top(&self, k: usize) -> &[RankedEntry] {
        &self.ranked[..k.min(self.ranked.len())]
    }

    /// 1-based rank of the entry with this name, if present.
    pub fn rank_of(&self, name: &str) -> Option<usize> {
        self.ranked.iter().position(|r| r.entry.name == name).map(|i| i + 1)
    }
}

fn score(weight: f64, implemented: bool) -> f64 {
    let boost = if implemented { 1.0 + IMPLEMENTED_BOOST } else { 1.0 };
    weight * boost / (1.0 + IMPLEMENTED_BOOST)
}

/// Maps a descriptor to ranked algorithms. Errors with
/// `UnmappedDescriptor` (naming the closest rules) when nothing fires.
pub fn triz_map(
    taxonomy: &Taxonomy,
    rules: &RuleTable,
    descriptor: &ProblemDescriptor,
) -> Result<Recommendation, TaxonomyError> {
    descriptor.validate()?;
    let fired: Vec<&TrizRule> = rules.rules.iter().filter(|r| r.matches(descriptor)).collect();
    let Some(goal_rule) = fired
        .iter()
        .copied()
        .reduce(|best, r| if r.weight > best.weight { r } else { best })
    else {
        let mut near: Vec<(usize, &TrizRule)> = rules
            .rules
            .iter()
            .map(|r| (r.satisfied(descriptor).0, r))
            .collect();
        near.sort_by(|a, b| b.0.cmp(&a.0).then(b.1.weight.total_cmp(&a.1.weight)));
        return Err(TaxonomyError::UnmappedDescriptor {
            tags: descriptor.tags().join(", "),
            nearest: near.iter().take(3).map(|(_, r)| r.id.clone()).collect(),
        });
    };

    let mut ranked: Vec<RankedEntry> = Vec::new();
    for rule in &fired {
        let prefix = rule.maps_to.0;
        for entry in taxonomy.children(&prefix)? {
            let s = score(rule.weight, entry.implemented);
            let matched_path = *entry
                .paths
                .iter()
                .find(|p| prefix.contains(p))
                .expect("children are under the prefix");
            let mut rationale = format!(
                "rule '{}' ({}) maps to {prefix} with weight {}",
                rule.id, rule.description, rule.weight
            );
            if entry.implemented {
                rationale.push_str("; implemented solver boost");
            }
            let candidate = RankedEntry {
                entry: entry.clone(),
                matched_path,
                score: s,
                rule_id: rule.id.clone(),
                rationale,
            };
            match ranked.iter_mut().find(|r| r.entry.name == entry.name) {
                Some(existing) if existing.score < s => *existing = candidate,
                Some(_) => {}
                None => ranked.push(candidate),
            }
        }
    }
    ranked.sort_by(|a, b| {
        b.score
            .total_cmp(&a.score)
            .then_with(|| a.entry.name.to_lowercase().cmp(&b.entry.name.to_lowercase()))
    });
    Ok(Recommendation {
        conceptual_goal: goal_rule.maps_to.0,
        ranked,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn map(tags: &[&str]) -> Result<Recommendation, TaxonomyError> {
        let d = ProblemDescriptor::from_tags(tags)?;
        triz_map(&Taxonomy::bundled(), &RuleTable::bundled(), &d)
    }

    fn top3(rec: &Recommendation) -> Vec<&str> {
        rec.top(3).iter().map(|r| r.entry.name.as_str()).collect()
    }

    #[test]
    fn tag_normalization() {
        assert_eq!(normalize_tag("  Parameter_Search "), "parameter-search");
        assert_eq!(normalize_tag("team  search"), "team-search");
        let d = ProblemDescriptor::from_tags(&["Route Finding", "COMBINATORIAL_permutation"]).unwrap();
        assert_eq!(d.goal_tags.iter().next(), Some(&GoalTag::RouteFinding));
        assert_eq!(d.modality, Modality::CombinatorialPermutation);
    }

    #[test]
    fn descriptor_errors() {
        for tags in [
            vec!["continuous"],
            vec!["packing"],
            vec!["packing", "continuous", "mixed"],
            vec!["packing", "continuous", "telepathy"],
        ] {
            assert!(
                matches!(ProblemDescriptor::from_tags(&tags), Err(TaxonomyError::InvalidDescriptor(_))),
                "{tags:?}"
            );
        }
    }

    #[test]
    fn forecasting_parameters_go_to_fruit_fly() {
        let rec = map(&["parameter-search", "continuous", "team-search", "data-scarce"]).unwrap();
        assert_eq!(
            rec.conceptual_goal.to_string(),
            "Biology/ResourceSeeking/FoodSeeking/HerdBehavior"
        );
        assert!(top3(&rec).contains(&"Fruit fly optimization algorithm"), "{:?}", top3(&rec));
    }

    #[test]
    fn routes_go_to_ant_colony() {
        let rec = map(&["route-finding", "combinatorial-permutation", "team-search"]).unwrap();
        assert_eq!(
            rec.conceptual_goal.to_string(),
            "Biology/ResourceSeeking/FoodSeeking/HerdBehavior"
        );
        let first_impl = rec.ranked.iter().find(|r| r.entry.implemented).unwrap();
        assert_eq!(first_impl.entry.name, "Ant Colony optimization");
        assert!(top3(&rec).contains(&"Ant Colony optimization"));
    }

    #[test]
    fn packing_goes_to_evolution() {
        let rec = map(&["packing", "combinatorial-subset"]).unwrap();
        assert_eq!(rec.conceptual_goal.to_string(), "Biology/Reproduction/Evolution");
        assert!(top3(&rec).contains(&"Genetic Algorithm"));
    }

    #[test]
    fn ranking_invariants() {
        let rec = map(&["structure-selection", "mixed", "population"]).unwrap();
        assert!(!rec.ranked.is_empty());
        for w in rec.ranked.windows(2) {
            assert!(w[0].score >= w[1].score);
        }
        for r in &rec.ranked {
            assert!((0.0..=1.0).contains(&r.score));
            assert!(r.rationale.contains(&format!("rule '{}'", r.rule_id)));
        }
        let names: HashSet<&str> = rec.ranked.iter().map(|r| r.entry.name.as_str()).collect();
        assert_eq!(names.len(), rec.ranked.len());
    }

    #[test]
    fn unmapped_lists_nearest_rules() {
        let rules = RuleTable::from_json_str(
            r#"{"version":1,"rules":[
                {"id":"a","description":"a","goals":["packing"],"modality":["combinatorial-subset"],
                 "maps_to":"Biology/Reproduction/Evolution","weight":0.5}]}"#,
        )
        .unwrap();
        let d = ProblemDescriptor::new([GoalTag::Scheduling], Modality::Continuous);
        match triz_map(&Taxonomy::bundled(), &rules, &d) {
            Err(TaxonomyError::UnmappedDescriptor { nearest, .. }) => assert_eq!(nearest, ["a"]),
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn every_goal_tag_is_covered() {
        let t = Taxonomy::bundled();
        let rules = RuleTable::bundled();
        for &g in GoalTag::ALL {
            for &m in Modality::ALL {
                let d = ProblemDescriptor::new([g], m);
                let rec = triz_map(&t, &rules, &d);
                assert!(rec.is_ok_and(|r| !r.ranked.is_empty()), "{g} {m}");
            }
        }
    }

    #[test]
    fn rule_table_checks() {
        for text in [
            r#"{"version":1,"rules":[{"id":"a","description":"","goals":[],"maps_to":"NonBiology/Gravity","weight":0.5}]}"#,
            r#"{"version":1,"rules":[{"id":"a","description":"","goals":["packing"],"maps_to":"NonBiology/Gravity","weight":1.5}]}"#,
            r#"{"version":1,"rules":[{"id":"a","description":"","goals":["packing"],"maps_to":"NonBiology/Gravity","weight":0.5},
                                     {"id":"a","description":"","goals":["packing"],"maps_to":"NonBiology/Gravity","weight":0.5}]}"#,
            r#"{"version":1,"rules":[{"id":"a","description":"","goals":["packing"],"maps_to":"Biology","weight":0.5}]}"#,
        ] {
            assert!(RuleTable::from_json_str(text).is_err(), "{text}");
        }
        let bundled = RuleTable::bundled();
        let back: serde_json::Value = serde_json::from_str(&bundled.to_json()).unwrap();
        let file: serde_json::Value = serde_json::from_str(BUNDLED_RULES).unwrap();
        assert_eq!(back, file);
    }
}
