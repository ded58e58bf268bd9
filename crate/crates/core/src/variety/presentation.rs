use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use super::IdentityScheme;
use crate::error::{Error, Result};

/// The built-in varieties.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Builtin {
    AllLinear,
    Commutative,
    Anticommutative,
    Lie,
    Jordan,
    Alternative,
    PowerAssociative,
}

impl Builtin {
    pub const ALL: [Builtin; 7] = [
        Builtin::AllLinear,
        Builtin::Commutative,
        Builtin::Anticommutative,
        Builtin::Lie,
        Builtin::Jordan,
        Builtin::Alternative,
        Builtin::PowerAssociative,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Builtin::AllLinear => "all_linear",
            Builtin::Commutative => "commutative",
            Builtin::Anticommutative => "anticommutative",
            Builtin::Lie => "lie",
            Builtin::Jordan => "jordan",
            Builtin::Alternative => "alternative",
            Builtin::PowerAssociative => "power_associative",
        }
    }

    fn identity_texts(self) -> &'static [&'static str] {
        const COMM: &str = "(y1 y2) - (y2 y1)";
        const ANTI: &str = "(y1 y2) + (y2 y1)";
        match self {
            Builtin::AllLinear => &[],
            Builtin::Commutative => &[COMM],
            Builtin::Anticommutative => &[ANTI],
            Builtin::Lie => &[ANTI, "((y1 y2) y3) + ((y2 y3) y1) + ((y3 y1) y2)"],
            Builtin::Jordan => &[COMM, "(((y1 y1) y2) y1) - ((y1 y1) (y2 y1))"],
            Builtin::Alternative => &["((y1 y1) y2) - (y1 (y1 y2))", "(y2 (y1 y1)) - ((y2 y1) y1)"],
            Builtin::PowerAssociative => &["(y1 (y1 y1)) - ((y1 y1) y1)", "((y1 y1) (y1 y1)) - ((y1 (y1 y1)) y1)"],
        }
    }
}

impl FromStr for Builtin {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let norm = s.to_ascii_lowercase().replace(['-', ' '], "_");
        Ok(match norm.as_str() {
            "all_linear" | "alllinear" | "linear" | "free" => Builtin::AllLinear,
            "commutative" => Builtin::Commutative,
            "anticommutative" => Builtin::Anticommutative,
            "lie" => Builtin::Lie,
            "jordan" => Builtin::Jordan,
            "alternative" => Builtin::Alternative,
            "power_associative" | "powerassociative" => Builtin::PowerAssociative,
            _ => return Err(Error::Variety(format!("unknown variety `{s}`"))),
        })
    }
}

impl fmt::Display for Builtin {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// Structural facts used by the scaling lemmas.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Tag {
    Commutative,
    Anticommutative,
}

/// A variety given by finitely many identities.
#[derive(Clone, Debug, PartialEq)]
pub struct VarietyPresentation {
    name: String,
    identities: Vec<IdentityScheme>,
    tags: Vec<Tag>,
    builtin: Option<Builtin>,
}

/// JSON form: `{"name": ..., "identities": [...], "builtin": ...}`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct VarietyJson {
    #[serde(default)]
    pub name: Option<String>,
    #[serde(default)]
    pub identities: Vec<String>,
    #[serde(default)]
    pub builtin: Option<String>,
}

impl VarietyPresentation {
    pub fn builtin(b: Builtin) -> Self {
        let identities = b
            .identity_texts()
            .iter()
            .map(|s| IdentityScheme::parse(s).expect("built-in identity parses"))
            .collect();
        let tags = match b {
            Builtin::Commutative | Builtin::Jordan => vec![Tag::Commutative],
            Builtin::Anticommutative | Builtin::Lie => vec![Tag::Anticommutative],
            _ => vec![],
        };
        VarietyPresentation {
            name: b.name().to_string(),
            identities,
            tags,
            builtin: Some(b),
        }
    }

    pub fn all_linear() -> Self {
        Self::builtin(Builtin::AllLinear)
    }
    pub fn commutative() -> Self {
        Self::builtin(Builtin::Commutative)
    }
    pub fn lie() -> Self {
        Self::builtin(Builtin::Lie)
    }
    pub fn jordan() -> Self {
        Self::builtin(Builtin::Jordan)
    }
    pub fn alternative() -> Self {
        Self::builtin(Builtin::Alternative)
    }
    pub fn power_associative() -> Self {
        Self::builtin(Builtin::PowerAssociative)
    }

    /// The anticommutative subvariety cut out by extra identities.
    pub fn anticommutative_with(name: &str, extra: Vec<IdentityScheme>) -> Self {
        let mut p = Self::builtin(Builtin::Anticommutative);
        p.name = name.to_string();
        p.builtin = None;
        p.identities.extend(extra);
        p
    }

    pub fn custom(name: &str, identities: Vec<IdentityScheme>, tags: Vec<Tag>) -> Self {
        VarietyPresentation {
            name: name.to_string(),
            identities,
            tags,
            builtin: None,
        }
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn identities(&self) -> &[IdentityScheme] {
        &self.identities
    }

    pub fn tags(&self) -> &[Tag] {
        &self.tags
    }

    pub fn builtin_kind(&self) -> Option<Builtin> {
        self.builtin
    }

    pub fn has_tag(&self, t: Tag) -> bool {
        self.tags.contains(&t)
    }

    pub fn max_arity(&self) -> usize {
        self.identities.iter().map(|s| s.arity()).max().unwrap_or(0)
    }

    pub fn max_identity_degree(&self) -> usize {
        self.identities.iter().map(|s| s.degree()).max().unwrap_or(0)
    }

    pub fn from_json(j: &VarietyJson) -> Result<Self> {
        let extra = j
            .identities
            .iter()
            .map(|s| IdentityScheme::parse(s))
            .collect::<Result<Vec<_>>>()?;
        match &j.builtin {
            Some(b) => {
                let mut p = Self::builtin(b.parse()?);
                if !extra.is_empty() {
                    p.identities.extend(extra);
                    p.builtin = None;
                }
                if let Some(n) = &j.name {
                    p.name = n.clone();
                }
                Ok(p)
            }
            None => Ok(Self::custom(j.name.as_deref().unwrap_or("custom"), extra, vec![])),
        }
    }

    pub fn to_json(&self) -> VarietyJson {
        match self.builtin {
            Some(b) => VarietyJson {
                name: Some(self.name.clone()),
                identities: vec![],
                builtin: Some(b.name().to_string()),
            },
            None => VarietyJson {
                name: Some(self.name.clone()),
                identities: self.identities.iter().map(|s| s.to_text()).collect(),
                builtin: None,
            },
        }
    }
}

impl FromStr for VarietyPresentation {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Ok(Self::builtin(s.parse()?))
    }
}
