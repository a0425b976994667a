//! Capability profiles: per-robot cost rules over area and passage tags.
//!
//! A profile is an ordered rule list. For each element the first rule whose
//! selector matches decides the effect; elements no rule matches keep their
//! base cost. Profiles load from TOML:
//!
//! ```toml
//! name = "wheeled"
//! vertical_cost_per_meter = 1.0
//!
//! [[rules]]
//! key = "highway"
//! value = "steps"
//! effect = "blocked"
//!
//! [[rules]]
//! key = "kerb:height"
//! above = 0.04
//! effect = "blocked"
//!
//! [[rules]]
//! key = "surface"
//! value = "grass"
//! applies_to = "area"
//! effect = "multiplier"
//! factor = 2.0
//! ```
//!
//! `value` may be `"*"` (any value). `above`/`below` compare the tag as a
//! number (a trailing `m` is allowed); non-numeric values never match.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::cost::Cost;

pub const DEFAULT_VERTICAL_COST_PER_METER: f64 = 1.0;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum ProfileError {
    #[error("profile file: {0}")]
    Syntax(String),
    #[error("rule {index}: {message}")]
    InvalidRule { index: usize, message: String },
    #[error("vertical_cost_per_meter must be finite and >= 0, got {0}")]
    InvalidVerticalCost(f64),
    #[error("unknown built-in profile `{0}` (known: default, wheeled, legged)")]
    UnknownBuiltin(String),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Scope {
    Area,
    Passage,
    Any,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub enum ValueMatch {
    Any,
    Equals(String),
    Above(f64),
    Below(f64),
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Selector {
    pub key: String,
    pub value: ValueMatch,
    pub scope: Scope,
}

impl Selector {
    pub fn matches(&self, is_area: bool, tags: &BTreeMap<String, String>) -> bool {
        let in_scope = match self.scope {
            Scope::Any => true,
            Scope::Area => is_area,
            Scope::Passage => !is_area,
        };
        if !in_scope {
            return false;
        }
        let Some(v) = tags.get(&self.key) else {
            return false;
        };
        match &self.value {
            ValueMatch::Any => true,
            ValueMatch::Equals(want) => v == want,
            ValueMatch::Above(t) => numeric(v).is_some_and(|x| x > *t),
            ValueMatch::Below(t) => numeric(v).is_some_and(|x| x < *t),
        }
    }
}

fn numeric(v: &str) -> Option<f64> {
    v.trim().trim_end_matches('m').trim().parse::<f64>().ok().filter(|x| x.is_finite())
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub enum Effect {
    Blocked,
    /// Factor >= 0.
    Multiplier(f64),
    /// Meters >= 0 added to the base cost.
    AddCost(f64),
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Rule {
    pub selector: Selector,
    pub effect: Effect,
}

impl Rule {
    pub fn new(key: &str, value: ValueMatch, effect: Effect) -> Self {
        Rule { selector: Selector { key: key.to_string(), value, scope: Scope::Any }, effect }
    }

    pub fn scoped(mut self, scope: Scope) -> Self {
        self.selector.scope = scope;
        self
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CapabilityProfile {
    pub name: String,
    pub rules: Vec<Rule>,
    pub vertical_cost_per_meter: f64,
}

impl Default for CapabilityProfile {
    fn default() -> Self {
        CapabilityProfile {
            name: "default".into(),
            rules: Vec::new(),
            vertical_cost_per_meter: DEFAULT_VERTICAL_COST_PER_METER,
        }
    }
}

impl CapabilityProfile {
    pub fn new(name: &str, rules: Vec<Rule>) -> Self {
        CapabilityProfile { name: name.to_string(), rules, ..Default::default() }
    }

    /// No stairs, no kerbs above 4 cm.
    pub fn wheeled() -> Self {
        Self::new(
            "wheeled",
            vec![
                Rule::new("highway", ValueMatch::Equals("steps".into()), Effect::Blocked),
                Rule::new("kerb:height", ValueMatch::Above(0.04), Effect::Blocked),
            ],
        )
    }

    /// Stairs are fine but slower.
    pub fn legged() -> Self {
        Self::new("legged", vec![Rule::new("highway", ValueMatch::Equals("steps".into()), Effect::Multiplier(1.5))])
    }

    pub fn builtin(name: &str) -> Result<Self, ProfileError> {
        match name {
            "default" => Ok(Self::default()),
            "wheeled" => Ok(Self::wheeled()),
            "legged" => Ok(Self::legged()),
            other => Err(ProfileError::UnknownBuiltin(other.to_string())),
        }
    }

    pub fn from_toml(text: &str) -> Result<Self, ProfileError> {
        let spec: ProfileSpec = toml::from_str(text).map_err(|e| ProfileError::Syntax(e.to_string()))?;
        let vertical = spec.vertical_cost_per_meter.unwrap_or(DEFAULT_VERTICAL_COST_PER_METER);
        if !(vertical >= 0.0 && vertical.is_finite()) {
            return Err(ProfileError::InvalidVerticalCost(vertical));
        }
        let rules = spec.rules.into_iter().enumerate().map(|(i, r)| r.into_rule(i)).collect::<Result<_, _>>()?;
        Ok(CapabilityProfile { name: spec.name, rules, vertical_cost_per_meter: vertical })
    }

    /// The effect of the first matching rule, if any.
    pub fn effect_for(&self, is_area: bool, tags: &BTreeMap<String, String>) -> Option<Effect> {
        self.rules.iter().find(|r| r.selector.matches(is_area, tags)).map(|r| r.effect)
    }

    /// Smallest factor any element can be scaled by; keeps the A*
    /// heuristic admissible.
    pub fn min_multiplier(&self) -> f64 {
        self.rules
            .iter()
            .filter_map(|r| match r.effect {
                Effect::Multiplier(k) => Some(k),
                _ => None,
            })
            .fold(1.0, f64::min)
    }
}

/// Applies the first matching rule of `profile` to `base`; `None` means
/// blocked.
pub fn apply_profile(
    profile: &CapabilityProfile,
    is_area: bool,
    tags: &BTreeMap<String, String>,
    base: Cost,
) -> Option<Cost> {
    apply_effect(profile.effect_for(is_area, tags), base)
}

pub fn apply_effect(effect: Option<Effect>, base: Cost) -> Option<Cost> {
    match effect {
        None => Some(base),
        Some(Effect::Blocked) => None,
        Some(Effect::Multiplier(k)) => Some(base.scale(k)),
        Some(Effect::AddCost(m)) => Some(base + Cost::from_meters(m)),
    }
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct ProfileSpec {
    name: String,
    vertical_cost_per_meter: Option<f64>,
    #[serde(default)]
    rules: Vec<RuleSpec>,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RuleSpec {
    key: String,
    value: Option<String>,
    above: Option<f64>,
    below: Option<f64>,
    applies_to: Option<Scope>,
    effect: String,
    factor: Option<f64>,
    meters: Option<f64>,
}

impl RuleSpec {
    fn into_rule(self, index: usize) -> Result<Rule, ProfileError> {
        let bad = |message: &str| ProfileError::InvalidRule { index, message: message.to_string() };
        let value = match (self.value, self.above, self.below) {
            (Some(v), None, None) if v == "*" => ValueMatch::Any,
            (Some(v), None, None) => ValueMatch::Equals(v),
            (None, Some(t), None) => ValueMatch::Above(t),
            (None, None, Some(t)) => ValueMatch::Below(t),
            (None, None, None) => ValueMatch::Any,
            _ => return Err(bad("use only one of `value`, `above`, `below`")),
        };
        let effect = match (self.effect.as_str(), self.factor, self.meters) {
            ("blocked", None, None) => Effect::Blocked,
            ("multiplier", Some(k), None) if k >= 0.0 && k.is_finite() => Effect::Multiplier(k),
            ("multiplier", Some(_), None) => return Err(bad("factor must be finite and >= 0")),
            ("multiplier", ..) => return Err(bad("multiplier needs `factor` only")),
            ("add", None, Some(m)) if m >= 0.0 && m.is_finite() => Effect::AddCost(m),
            ("add", None, Some(_)) => return Err(bad("meters must be finite and >= 0")),
            ("add", ..) => return Err(bad("add needs `meters` only")),
            ("blocked", ..) => return Err(bad("blocked takes no parameters")),
            (other, ..) => return Err(bad(&format!("unknown effect `{other}`"))),
        };
        Ok(Rule { selector: Selector { key: self.key, value, scope: self.applies_to.unwrap_or(Scope::Any) }, effect })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn tags(pairs: &[(&str, &str)]) -> BTreeMap<String, String> {
        pairs.iter().map(|(k, v)| (k.to_string(), v.to_string())).collect()
    }

    #[test]
    fn empty_profile_is_identity() {
        let c = Cost::from_meters(12.5);
        assert_eq!(apply_profile(&CapabilityProfile::default(), true, &tags(&[]), c), Some(c));
    }

    #[test]
    fn wheeled_blocks_steps_and_kerbs() {
        let w = CapabilityProfile::wheeled();
        let base = Cost::from_meters(3.0);
        assert_eq!(apply_profile(&w, false, &tags(&[("highway", "steps")]), base), None);
        assert_eq!(apply_profile(&w, false, &tags(&[("kerb:height", "0.06")]), base), None);
        assert_eq!(apply_profile(&w, false, &tags(&[("kerb:height", "0.02")]), base), Some(base));
        assert_eq!(apply_profile(&w, false, &tags(&[("kerb:height", "tall")]), base), Some(base));
    }

    #[test]
    fn grass_multiplier() {
        let p = CapabilityProfile::new(
            "p",
            vec![Rule::new("surface", ValueMatch::Equals("grass".into()), Effect::Multiplier(2.0))],
        );
        let out = apply_profile(&p, true, &tags(&[("surface", "grass")]), Cost::from_meters(10.0));
        assert_eq!(out, Some(Cost::from_meters(20.0)));
    }

    #[test]
    fn first_match_wins() {
        let p = CapabilityProfile::new(
            "p",
            vec![
                Rule::new("door", ValueMatch::Any, Effect::AddCost(1.0)),
                Rule::new("door", ValueMatch::Equals("pull".into()), Effect::Blocked),
            ],
        );
        let out = apply_profile(&p, false, &tags(&[("door", "pull")]), Cost::ZERO);
        assert_eq!(out, Some(Cost::from_meters(1.0)));
    }

    #[test]
    fn scope_restricts() {
        let r = Rule::new("surface", ValueMatch::Any, Effect::Blocked).scoped(Scope::Area);
        let p = CapabilityProfile::new("p", vec![r]);
        assert_eq!(p.effect_for(false, &tags(&[("surface", "grass")])), None);
        assert_eq!(p.effect_for(true, &tags(&[("surface", "grass")])), Some(Effect::Blocked));
    }

    #[test]
    fn toml_round() {
        let p = CapabilityProfile::from_toml(
            r#"
name = "wheeled"
[[rules]]
key = "highway"
value = "steps"
effect = "blocked"

[[rules]]
key = "kerb:height"
above = 0.04
effect = "blocked"
"#,
        )
        .unwrap();
        assert_eq!(p, CapabilityProfile::wheeled());
    }

    #[test]
    fn toml_errors() {
        let e = CapabilityProfile::from_toml("name = \"x\"\n[[rules]]\nkey = \"a\"\neffect = \"multiplier\"\n");
        assert!(matches!(e, Err(ProfileError::InvalidRule { index: 0, .. })));
        let e = CapabilityProfile::from_toml("name = \"x\"\n[[rules]]\nkey = \"a\"\neffect = \"add\"\nmeters = -1\n");
        assert!(matches!(e, Err(ProfileError::InvalidRule { .. })));
        assert!(matches!(CapabilityProfile::from_toml("nope"), Err(ProfileError::Syntax(_))));
        assert!(matches!(
            CapabilityProfile::from_toml("name = \"x\"\nvertical_cost_per_meter = -2.0\n"),
            Err(ProfileError::InvalidVerticalCost(_))
        ));
    }

    #[test]
    fn min_multiplier() {
        let p = CapabilityProfile::new("p", vec![Rule::new("a", ValueMatch::Any, Effect::Multiplier(0.25))]);
        assert_eq!(p.min_multiplier(), 0.25);
        assert_eq!(CapabilityProfile::legged().min_multiplier(), 1.0);
    }
}
