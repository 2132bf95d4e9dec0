//! Scenario-driven bias recommendation.
//!
//! Six binary criteria describe the task and scene; additive voting rules
//! turn them into relative levels on three axes (bandwidth, sensitivity,
//! refractory period), and a level-to-tweak table turns those into
//! concrete bias tweaks. The rules live in a plain-text data file so the
//! weights can be edited without touching code; the built-in copy is
//! compiled in.

use alloc::format;
use alloc::string::{String, ToString};
use alloc::vec::Vec;
use core::fmt;

use crate::bias::BiasConfig;
use crate::params::PixelParams;

/// Built-in voting rules, compiled in from the data file.
pub const BUILTIN_RULES: &str = include_str!("../data/recommend_rules.txt");

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum DataPriority {
    HighFidelity,
    Sparse,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum SensorMotion {
    Static,
    Moving,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum BackgroundIllumination {
    Bright,
    Dim,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum ObjectSize {
    Large,
    Small,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum ObjectContrast {
    High,
    Low,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum ObjectSpeed {
    Fast,
    Slow,
}

/// One task/scene description; 64 combinations in total.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct ScenarioCriteria {
    pub data_priority: DataPriority,
    pub sensor_motion: SensorMotion,
    pub background_illumination: BackgroundIllumination,
    pub object_size: ObjectSize,
    pub object_contrast: ObjectContrast,
    pub object_speed: ObjectSpeed,
}

impl ScenarioCriteria {
    /// The six (criterion, option) name pairs this scenario selects, in
    /// rule-file vocabulary.
    pub fn selections(&self) -> [(&'static str, &'static str); 6] {
        [
            (
                "data_priority",
                match self.data_priority {
                    DataPriority::HighFidelity => "high_fidelity",
                    DataPriority::Sparse => "sparse",
                },
            ),
            (
                "sensor_motion",
                match self.sensor_motion {
                    SensorMotion::Static => "static",
                    SensorMotion::Moving => "moving",
                },
            ),
            (
                "background_illumination",
                match self.background_illumination {
                    BackgroundIllumination::Bright => "bright",
                    BackgroundIllumination::Dim => "dim",
                },
            ),
            (
                "object_size",
                match self.object_size {
                    ObjectSize::Large => "large",
                    ObjectSize::Small => "small",
                },
            ),
            (
                "object_contrast",
                match self.object_contrast {
                    ObjectContrast::High => "high",
                    ObjectContrast::Low => "low",
                },
            ),
            (
                "object_speed",
                match self.object_speed {
                    ObjectSpeed::Fast => "fast",
                    ObjectSpeed::Slow => "slow",
                },
            ),
        ]
    }

    /// Every combination, in a fixed enumeration order.
    pub fn all() -> Vec<ScenarioCriteria> {
        let mut out = Vec::with_capacity(64);
        for &data_priority in &[DataPriority::HighFidelity, DataPriority::Sparse] {
            for &sensor_motion in &[SensorMotion::Static, SensorMotion::Moving] {
                for &background_illumination in
                    &[BackgroundIllumination::Bright, BackgroundIllumination::Dim]
                {
                    for &object_size in &[ObjectSize::Large, ObjectSize::Small] {
                        for &object_contrast in &[ObjectContrast::High, ObjectContrast::Low] {
                            for &object_speed in &[ObjectSpeed::Fast, ObjectSpeed::Slow] {
                                out.push(ScenarioCriteria {
                                    data_priority,
                                    sensor_motion,
                                    background_illumination,
                                    object_size,
                                    object_contrast,
                                    object_speed,
                                });
                            }
                        }
                    }
                }
            }
        }
        out
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum BandwidthLevel {
    Slow,
    Mid,
    Fast,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum SensitivityLevel {
    Low,
    Mid,
    High,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum RefractoryLevel {
    Long,
    Mid,
    Short,
}

impl BandwidthLevel {
    pub fn name(self) -> &'static str {
        match self {
            BandwidthLevel::Slow => "slow",
            BandwidthLevel::Mid => "mid",
            BandwidthLevel::Fast => "fast",
        }
    }
}

impl SensitivityLevel {
    pub fn name(self) -> &'static str {
        match self {
            SensitivityLevel::Low => "low",
            SensitivityLevel::Mid => "mid",
            SensitivityLevel::High => "high",
        }
    }
}

impl RefractoryLevel {
    pub fn name(self) -> &'static str {
        match self {
            RefractoryLevel::Long => "long",
            RefractoryLevel::Mid => "mid",
            RefractoryLevel::Short => "short",
        }
    }
}

/// Recommended relative levels plus the reasons they came out this way.
#[derive(Debug, Clone, PartialEq)]
pub struct BiasRecommendation {
    pub bandwidth: BandwidthLevel,
    pub sensitivity: SensitivityLevel,
    pub refractory: RefractoryLevel,
    /// One entry per selected option that actually pulled an axis.
    pub rationale: Vec<String>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum RuleError {
    Parse { line: usize, reason: String },
    DuplicateRule { criterion: String, option: String },
    MissingRule { criterion: &'static str, option: &'static str },
}

impl fmt::Display for RuleError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            RuleError::Parse { line, reason } => write!(f, "rules line {line}: {reason}"),
            RuleError::DuplicateRule { criterion, option } => {
                write!(f, "duplicate rule for {criterion}={option}")
            }
            RuleError::MissingRule { criterion, option } => {
                write!(f, "no rule for {criterion}={option}")
            }
        }
    }
}

impl core::error::Error for RuleError {}

#[derive(Debug, Clone, PartialEq)]
struct Rule {
    criterion: String,
    option: String,
    /// Votes on (bandwidth, sensitivity, refractory).
    votes: [i32; 3],
    rationale: String,
}

/// A parsed, validated set of voting rules.
#[derive(Debug, Clone, PartialEq)]
pub struct RuleSet {
    rules: Vec<Rule>,
}

const AXES: [&str; 3] = ["bandwidth", "sensitivity", "refractory"];

/// (criterion, [options]) vocabulary the rule file must cover exactly.
const VOCABULARY: [(&str, [&str; 2]); 6] = [
    ("data_priority", ["high_fidelity", "sparse"]),
    ("sensor_motion", ["static", "moving"]),
    ("background_illumination", ["bright", "dim"]),
    ("object_size", ["large", "small"]),
    ("object_contrast", ["high", "low"]),
    ("object_speed", ["fast", "slow"]),
];

impl RuleSet {
    /// Parses rule text; see the data file header for the line format.
    pub fn parse(text: &str) -> Result<RuleSet, RuleError> {
        let mut rules: Vec<Rule> = Vec::new();
        for (idx, raw) in text.lines().enumerate() {
            let line = idx + 1;
            let trimmed = raw.trim();
            if trimmed.is_empty() || trimmed.starts_with('#') {
                continue;
            }
            let (lhs, rest) = trimmed.split_once("->").ok_or_else(|| RuleError::Parse {
                line,
                reason: "expected `criterion=option -> votes ; reason`".to_string(),
            })?;
            let (criterion, option) =
                lhs.trim().split_once('=').ok_or_else(|| RuleError::Parse {
                    line,
                    reason: "left side must be `criterion=option`".to_string(),
                })?;
            let criterion = criterion.trim();
            let option = option.trim();
            let known = VOCABULARY
                .iter()
                .any(|(c, opts)| *c == criterion && opts.contains(&option));
            if !known {
                return Err(RuleError::Parse {
                    line,
                    reason: format!("unknown criterion or option `{criterion}={option}`"),
                });
            }
            if rules.iter().any(|r| r.criterion == criterion && r.option == option) {
                return Err(RuleError::DuplicateRule {
                    criterion: criterion.to_string(),
                    option: option.to_string(),
                });
            }
            let (votes_part, rationale) =
                rest.split_once(';').ok_or_else(|| RuleError::Parse {
                    line,
                    reason: "missing `; reason` after the votes".to_string(),
                })?;
            let rationale = rationale.trim();
            if rationale.is_empty() {
                return Err(RuleError::Parse { line, reason: "empty reason".to_string() });
            }
            let mut votes = [None::<i32>; 3];
            for piece in votes_part.split(',') {
                let mut it = piece.split_whitespace();
                let (axis, value) = match (it.next(), it.next(), it.next()) {
                    (Some(a), Some(v), None) => (a, v),
                    _ => {
                        return Err(RuleError::Parse {
                            line,
                            reason: format!("vote `{}` is not `axis value`", piece.trim()),
                        })
                    }
                };
                let slot = AXES.iter().position(|&a| a == axis).ok_or_else(|| {
                    RuleError::Parse { line, reason: format!("unknown axis `{axis}`") }
                })?;
                let value: i32 = value.parse().map_err(|_| RuleError::Parse {
                    line,
                    reason: format!("vote value `{value}` is not an integer"),
                })?;
                if value.abs() > 2 {
                    return Err(RuleError::Parse {
                        line,
                        reason: format!("vote {value} out of the -2..=2 range"),
                    });
                }
                if votes[slot].replace(value).is_some() {
                    return Err(RuleError::Parse {
                        line,
                        reason: format!("axis `{axis}` voted twice"),
                    });
                }
            }
            let votes = match votes {
                [Some(b), Some(s), Some(r)] => [b, s, r],
                _ => {
                    return Err(RuleError::Parse {
                        line,
                        reason: "every line must vote on all three axes".to_string(),
                    })
                }
            };
            rules.push(Rule {
                criterion: criterion.to_string(),
                option: option.to_string(),
                votes,
                rationale: rationale.to_string(),
            });
        }
        for (criterion, options) in VOCABULARY {
            for option in options {
                if !rules.iter().any(|r| r.criterion == criterion && r.option == option) {
                    return Err(RuleError::MissingRule { criterion, option });
                }
            }
        }
        Ok(RuleSet { rules })
    }

    fn rule(&self, criterion: &str, option: &str) -> &Rule {
        self.rules
            .iter()
            .find(|r| r.criterion == criterion && r.option == option)
            .expect("parse() guarantees full coverage")
    }

    /// Deterministic recommendation: sum the six selected options' votes
    /// per axis, bucket to a level, and collect the non-neutral reasons.
    pub fn recommend(&self, criteria: &ScenarioCriteria) -> BiasRecommendation {
        let mut sums = [0i32; 3];
        let mut rationale = Vec::new();
        for (criterion, option) in criteria.selections() {
            let rule = self.rule(criterion, option);
            for (sum, vote) in sums.iter_mut().zip(rule.votes) {
                *sum += vote;
            }
            if rule.votes.iter().any(|&v| v != 0) {
                rationale.push(format!("{criterion}={option}: {}", rule.rationale));
            }
        }
        if rationale.is_empty() {
            rationale.push("all selected criteria are neutral; staying at mid".to_string());
        }
        BiasRecommendation {
            bandwidth: match bucket(sums[0]) {
                -1 => BandwidthLevel::Slow,
                0 => BandwidthLevel::Mid,
                _ => BandwidthLevel::Fast,
            },
            sensitivity: match bucket(sums[1]) {
                -1 => SensitivityLevel::Low,
                0 => SensitivityLevel::Mid,
                _ => SensitivityLevel::High,
            },
            refractory: match bucket(sums[2]) {
                -1 => RefractoryLevel::Long,
                0 => RefractoryLevel::Mid,
                _ => RefractoryLevel::Short,
            },
            rationale,
        }
    }
}

/// Vote sums bucket symmetrically: the middle band is -1..=+1.
fn bucket(sum: i32) -> i32 {
    if sum <= -2 {
        -1
    } else if sum >= 2 {
        1
    } else {
        0
    }
}

/// Recommendation from the built-in rules.
pub fn recommend(criteria: &ScenarioCriteria) -> BiasRecommendation {
    RuleSet::parse(BUILTIN_RULES).expect("built-in rules are valid").recommend(criteria)
}

/// Level-to-tweak table; `None` marks an uncovered level.
#[derive(Debug, Clone, PartialEq)]
pub struct TweakMapping {
    /// Indexed by [`SensitivityLevel`] in Low, Mid, High order.
    pub sensitivity_to_threshold_tweak: [Option<f64>; 3],
    /// Indexed by [`RefractoryLevel`] in Long, Mid, Short order.
    pub refractory_to_mfr_tweak: [Option<f64>; 3],
    /// Indexed by [`BandwidthLevel`] in Slow, Mid, Fast order.
    pub bandwidth_to_isf_scale: [Option<f64>; 3],
}

impl Default for TweakMapping {
    fn default() -> TweakMapping {
        TweakMapping {
            // more sensitive = lower threshold = negative tweak
            sensitivity_to_threshold_tweak: [Some(0.5), Some(0.0), Some(-0.5)],
            refractory_to_mfr_tweak: [Some(-0.5), Some(0.0), Some(0.5)],
            bandwidth_to_isf_scale: [Some(0.25), Some(1.0), Some(4.0)],
        }
    }
}

/// Concrete tweaks realizing a recommendation.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RecommendedTweaks {
    pub threshold_tweak: f64,
    /// Multiplier on the nominal source-follower bias.
    pub bandwidth_scale: f64,
    pub max_firing_rate_tweak: f64,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum RecommendError {
    IncompleteMapping { axis: &'static str, level: &'static str },
}

impl fmt::Display for RecommendError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            RecommendError::IncompleteMapping { axis, level } => {
                write!(f, "tweak mapping does not cover {axis} level `{level}`")
            }
        }
    }
}

impl core::error::Error for RecommendError {}

/// Maps recommendation levels to tweaks through the given table.
pub fn to_tweaks(
    rec: &BiasRecommendation,
    mapping: &TweakMapping,
) -> Result<RecommendedTweaks, RecommendError> {
    let threshold_tweak = mapping.sensitivity_to_threshold_tweak[rec.sensitivity as usize]
        .ok_or(RecommendError::IncompleteMapping {
            axis: "sensitivity",
            level: rec.sensitivity.name(),
        })?;
    let max_firing_rate_tweak = mapping.refractory_to_mfr_tweak[rec.refractory as usize]
        .ok_or(RecommendError::IncompleteMapping {
            axis: "refractory",
            level: rec.refractory.name(),
        })?;
    let bandwidth_scale = mapping.bandwidth_to_isf_scale[rec.bandwidth as usize].ok_or(
        RecommendError::IncompleteMapping { axis: "bandwidth", level: rec.bandwidth.name() },
    )?;
    Ok(RecommendedTweaks { threshold_tweak, bandwidth_scale, max_firing_rate_tweak })
}

/// A full bias point realizing the tweaks: nominal currents with the
/// source follower rescaled and the photoreceptor left strong, since a
/// strong photoreceptor bias keeps its noise out of the signal band.
pub fn to_bias_config(tweaks: &RecommendedTweaks, params: &PixelParams) -> BiasConfig {
    let mut bias = BiasConfig::nominal(params);
    bias.i_sf *= tweaks.bandwidth_scale;
    bias.threshold_tweak = tweaks.threshold_tweak;
    bias.max_firing_rate_tweak = tweaks.max_firing_rate_tweak;
    bias
}
