//! Classification levels and the legal parent/child structure between them.
//!
//! ```text
//! Biology
//!   ResourceSeeking  FoodSeeking     Hunting | Migration | HerdBehavior
//!                    HabitatSeeking  HerdBehavior
//!   Survival         Self | Offspring | Dependant
//!   Reproduction     MatingSearching | Evolution | Pollination
//! NonBiology
//!   Gravity | EntropyReduction | LawOfEquilibrium
//! ```
//!
//! Paths print and parse as `/`-separated segments, e.g.
//! `Biology/ResourceSeeking/FoodSeeking/Hunting`. Parsing ignores case,
//! spaces, hyphens and underscores.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use super::TaxonomyError;

fn fold(s: &str) -> String {
    s.chars()
        .filter(|c| !matches!(c, ' ' | '-' | '_'))
        .flat_map(char::to_lowercase)
        .collect()
}

macro_rules! level_enum {
    ($(#[$meta:meta])* $name:ident { $($variant:ident = $label:literal => [$($alias:literal),*]),+ $(,)? }) => {
        $(#[$meta])*
        #[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
        pub enum $name {
            $($variant),+
        }

        impl $name {
            pub const ALL: &'static [$name] = &[$($name::$variant),+];

            pub fn as_str(self) -> &'static str {
                match self {
                    $($name::$variant => $label),+
                }
            }

            fn parse_segment(s: &str) -> Option<Self> {
                let f = fold(s);
                $(
                    if f == $label.to_lowercase() $(|| f == $alias)* {
                        return Some($name::$variant);
                    }
                )+
                None
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
                Self::parse_segment(s).ok_or_else(|| {
                    TaxonomyError::IllegalPath(format!(
                        "unknown {} '{s}'",
                        stringify!($name)
                    ))
                })
            }
        }
    };
}

level_enum! {
    /// Level 1.
    Level1 {
        Biology = "Biology" => [],
        NonBiology = "NonBiology" => [],
    }
}

level_enum! {
    /// Level 2.
    PrimaryGoal {
        ResourceSeeking = "ResourceSeeking" => [],
        Survival = "Survival" => [],
        Reproduction = "Reproduction" => [],
        Gravity = "Gravity" => [],
        EntropyReduction = "EntropyReduction" => [],
        LawOfEquilibrium = "LawOfEquilibrium" => [],
    }
}

level_enum! {
    /// Level 3.
    SubGoal {
        FoodSeeking = "FoodSeeking" => [],
        HabitatSeeking = "HabitatSeeking" => [],
        Self_ = "Self" => [],
        Offspring = "Offspring" => [],
        Dependant = "Dependant" => ["dependent"],
        MatingSearching = "MatingSearching" => [],
        Evolution = "Evolution" => [],
        Pollination = "Pollination" => ["pollinstion"],
    }
}

level_enum! {
    /// Level 4.
    Behavior {
        Hunting = "Hunting" => [],
        Migration = "Migration" => [],
        HerdBehavior = "HerdBehavior" => ["herdbehaviour"],
    }
}

impl PrimaryGoal {
    pub fn parent(self) -> Level1 {
        match self {
            PrimaryGoal::ResourceSeeking | PrimaryGoal::Survival | PrimaryGoal::Reproduction => {
                Level1::Biology
            }
            _ => Level1::NonBiology,
        }
    }

    pub fn children(self) -> &'static [SubGoal] {
        use SubGoal::*;
        match self {
            PrimaryGoal::ResourceSeeking => &[FoodSeeking, HabitatSeeking],
            PrimaryGoal::Survival => &[Self_, Offspring, Dependant],
            PrimaryGoal::Reproduction => &[MatingSearching, Evolution, Pollination],
            _ => &[],
        }
    }
}

impl SubGoal {
    pub fn children(self) -> &'static [Behavior] {
        use Behavior::*;
        match self {
            SubGoal::FoodSeeking => &[Hunting, Migration, HerdBehavior],
            SubGoal::HabitatSeeking => &[HerdBehavior],
            _ => &[],
        }
    }
}

/// A possibly partial classification path. Levels are filled from the top
/// with no gaps; every level is a legal child of the one above.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default)]
pub struct PathPrefix {
    pub level1: Option<Level1>,
    pub level2: Option<PrimaryGoal>,
    pub level3: Option<SubGoal>,
    pub level4: Option<Behavior>,
}

impl PathPrefix {
    /// The empty prefix, matching every path.
    pub fn root() -> Self {
        Self::default()
    }

    pub fn depth(&self) -> usize {
        [
            self.level1.is_some(),
            self.level2.is_some(),
            self.level3.is_some(),
            self.level4.is_some(),
        ]
        .iter()
        .filter(|b| **b)
        .count()
    }

    pub fn validate(&self) -> Result<(), TaxonomyError> {
        let illegal = |msg: String| Err(TaxonomyError::IllegalPath(msg));
        let gaps = (self.level1.is_none() && self.level2.is_some())
            || (self.level2.is_none() && self.level3.is_some())
            || (self.level3.is_none() && self.level4.is_some());
        if gaps {
            return illegal(format!("path levels must be filled from the top: {self:?}"));
        }
        if let (Some(l1), Some(l2)) = (self.level1, self.level2) {
            if l2.parent() != l1 {
                return illegal(format!("{l2} is not a primary goal under {l1}"));
            }
        }
        if let (Some(l2), Some(l3)) = (self.level2, self.level3) {
            if !l2.children().contains(&l3) {
                return illegal(format!("{} is not a sub-goal under {l2}", l3));
            }
        }
        if let (Some(l3), Some(l4)) = (self.level3, self.level4) {
            if !l3.children().contains(&l4) {
                return illegal(format!("{l4} is not a behavior under {}", l3));
            }
        }
        Ok(())
    }

    /// True if `path` lies at or below this prefix.
    pub fn contains(&self, path: &TaxonomyPath) -> bool {
        self.level1.is_none_or(|l| l == path.level1)
            && self.level2.is_none_or(|l| l == path.level2)
            && self.level3.is_none_or(|l| Some(l) == path.level3)
            && self.level4.is_none_or(|l| Some(l) == path.level4)
    }
}

impl fmt::Display for PathPrefix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut parts: Vec<&str> = Vec::with_capacity(4);
        parts.extend(self.level1.map(Level1::as_str));
        parts.extend(self.level2.map(PrimaryGoal::as_str));
        parts.extend(self.level3.map(SubGoal::as_str));
        parts.extend(self.level4.map(Behavior::as_str));
        f.write_str(&parts.join("/"))
    }
}

impl Serialize for PathPrefix {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

impl FromStr for PathPrefix {
    type Err = TaxonomyError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let segments: Vec<&str> = s
            .split('/')
            .map(str::trim)
            .filter(|seg| !seg.is_empty())
            .collect();
        if segments.len() > 4 {
            return Err(TaxonomyError::IllegalPath(format!(
                "'{s}' has more than four levels"
            )));
        }
        let mut prefix = PathPrefix::root();
        let mut it = segments.into_iter();
        if let Some(seg) = it.next() {
            prefix.level1 = Some(seg.parse()?);
        }
        if let Some(seg) = it.next() {
            prefix.level2 = Some(seg.parse()?);
        }
        if let Some(seg) = it.next() {
            prefix.level3 = Some(seg.parse()?);
        }
        if let Some(seg) = it.next() {
            prefix.level4 = Some(seg.parse()?);
        }
        prefix.validate()?;
        Ok(prefix)
    }
}

/// A complete-enough classification: levels 1 and 2 always, levels 3 and 4
/// when the primary goal has children.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "String", into = "String")]
pub struct TaxonomyPath {
    pub level1: Level1,
    pub level2: PrimaryGoal,
    pub level3: Option<SubGoal>,
    pub level4: Option<Behavior>,
}

impl TaxonomyPath {
    pub fn new(
        level2: PrimaryGoal,
        level3: Option<SubGoal>,
        level4: Option<Behavior>,
    ) -> Result<Self, TaxonomyError> {
        TaxonomyPath::try_from(PathPrefix {
            level1: Some(level2.parent()),
            level2: Some(level2),
            level3,
            level4,
        })
    }

    pub fn prefix(&self) -> PathPrefix {
        PathPrefix {
            level1: Some(self.level1),
            level2: Some(self.level2),
            level3: self.level3,
            level4: self.level4,
        }
    }
}

impl TryFrom<PathPrefix> for TaxonomyPath {
    type Error = TaxonomyError;

    fn try_from(p: PathPrefix) -> Result<Self, Self::Error> {
        p.validate()?;
        let (Some(level1), Some(level2)) = (p.level1, p.level2) else {
            return Err(TaxonomyError::IllegalPath(format!(
                "'{p}' needs at least a level-1 and level-2 value"
            )));
        };
        if p.level3.is_none() && !level2.children().is_empty() {
            return Err(TaxonomyError::IllegalPath(format!("'{p}' is missing its sub-goal")));
        }
        if let Some(l3) = p.level3 {
            if p.level4.is_none() && !l3.children().is_empty() {
                return Err(TaxonomyError::IllegalPath(format!("'{p}' is missing its behavior")));
            }
        }
        Ok(TaxonomyPath {
            level1,
            level2,
            level3: p.level3,
            level4: p.level4,
        })
    }
}

impl fmt::Display for TaxonomyPath {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.prefix().fmt(f)
    }
}

impl FromStr for TaxonomyPath {
    type Err = TaxonomyError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        TaxonomyPath::try_from(s.parse::<PathPrefix>()?)
    }
}

impl TryFrom<String> for TaxonomyPath {
    type Error = TaxonomyError;

    fn try_from(s: String) -> Result<Self, Self::Error> {
        s.parse()
    }
}

impl From<TaxonomyPath> for String {
    fn from(p: TaxonomyPath) -> String {
        p.to_string()
    }
}
