//! Fugacity values and schedules.

use std::fmt;
use std::path::Path;
use std::str::FromStr;
use std::sync::Arc;

use fixedbitset::FixedBitSet;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// A fugacity `λ ∈ [1, ∞]`.
#[derive(Debug, Clone, Copy, PartialEq, PartialOrd, Serialize, Deserialize)]
#[serde(try_from = "f64", into = "f64")]
pub struct Fugacity(f64);

impl Fugacity {
    pub const INFINITE: Fugacity = Fugacity(f64::INFINITY);

    pub fn new(lambda: f64) -> Result<Fugacity> {
        // NaN fails the comparison as well.
        if lambda >= 1.0 {
            Ok(Fugacity(lambda))
        } else {
            Err(Error::InvalidFugacity(lambda))
        }
    }

    pub fn value(self) -> f64 {
        self.0
    }

    pub fn is_infinite(self) -> bool {
        self.0.is_infinite()
    }

    /// Probability that a proposed removal is accepted.
    pub fn removal_probability(self) -> f64 {
        if self.is_infinite() {
            0.0
        } else {
            1.0 / self.0
        }
    }

    #[inline]
    pub fn accepts_removal(self, zeta: f64) -> bool {
        !self.0.is_infinite() && zeta <= 1.0 / self.0
    }
}

impl TryFrom<f64> for Fugacity {
    type Error = Error;
    fn try_from(x: f64) -> Result<Fugacity> {
        Fugacity::new(x)
    }
}

impl From<Fugacity> for f64 {
    fn from(f: Fugacity) -> f64 {
        f.0
    }
}

impl fmt::Display for Fugacity {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_infinite() {
            f.write_str("inf")
        } else {
            write!(f, "{}", self.0)
        }
    }
}

/// What an adaptive rule may look at before step `t`: the clock, the size
/// history digest and the occupancy vector. The random stream is never
/// exposed, so adaptive runs replay exactly.
#[derive(Debug, Clone, Copy)]
pub struct HistoryView<'a> {
    /// Index of the step about to be taken, starting at 1.
    pub t: u64,
    /// `|I_{t-1}|`.
    pub size: usize,
    pub max_size: usize,
    /// Step at which `max_size` was first reached.
    pub last_improvement: u64,
    pub occupied: &'a FixedBitSet,
}

/// Named adaptive rules.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "rule", rename_all = "kebab-case")]
pub enum AdaptiveRule {
    /// `cold` while records keep coming; `hot` once no record has been set
    /// for more than `patience` steps.
    StallReheat { cold: f64, hot: f64, patience: u64 },
    /// `λ_t = max(1, scale · |I_{t-1}|)`: the bigger the set, the harder
    /// it is to remove anything.
    SizeTracking { scale: f64 },
}

impl AdaptiveRule {
    pub fn name(&self) -> &'static str {
        match self {
            AdaptiveRule::StallReheat { .. } => "stall-reheat",
            AdaptiveRule::SizeTracking { .. } => "size-tracking",
        }
    }

    pub fn lambda(&self, h: &HistoryView<'_>) -> f64 {
        match *self {
            AdaptiveRule::StallReheat { cold, hot, patience } => {
                if h.t.saturating_sub(h.last_improvement) > patience {
                    hot
                } else {
                    cold
                }
            }
            AdaptiveRule::SizeTracking { scale } => (scale * h.size as f64).max(1.0),
        }
    }

    fn from_spec(name: &str, args: &str) -> Result<AdaptiveRule> {
        let mut rule = match name {
            "stall-reheat" => AdaptiveRule::StallReheat { cold: 64.0, hot: 1.0, patience: 10_000 },
            "size-tracking" => AdaptiveRule::SizeTracking { scale: 1.0 },
            other => return Err(Error::Config(format!("unknown adaptive rule `{other}`"))),
        };
        for kv in args.split(',').filter(|s| !s.is_empty()) {
            let (k, v) = kv
                .split_once('=')
                .ok_or_else(|| Error::Config(format!("expected key=value, got `{kv}`")))?;
            let bad = || Error::Config(format!("bad value `{v}` for `{k}`"));
            match (&mut rule, k) {
                (AdaptiveRule::StallReheat { cold, .. }, "cold") => *cold = v.parse().map_err(|_| bad())?,
                (AdaptiveRule::StallReheat { hot, .. }, "hot") => *hot = v.parse().map_err(|_| bad())?,
                (AdaptiveRule::StallReheat { patience, .. }, "patience") => {
                    *patience = v.parse().map_err(|_| bad())?
                }
                (AdaptiveRule::SizeTracking { scale }, "scale") => *scale = v.parse().map_err(|_| bad())?,
                _ => return Err(Error::Config(format!("rule `{name}` has no parameter `{k}`"))),
            }
        }
        rule.validate()?;
        Ok(rule)
    }

    fn validate(&self) -> Result<()> {
        match *self {
            AdaptiveRule::StallReheat { cold, hot, .. } => {
                Fugacity::new(cold)?;
                Fugacity::new(hot)?;
            }
            AdaptiveRule::SizeTracking { scale } => {
                if !(scale > 0.0) {
                    return Err(Error::Config(format!("scale must be positive, got {scale}")));
                }
            }
        }
        Ok(())
    }
}

/// Predetermined (simulated annealing) sequences.
#[derive(Debug, Clone, PartialEq)]
pub enum Sequence {
    /// `λ_t = values[t - 1]`; the last value is held after the end.
    Explicit(Arc<[f64]>),
    /// `λ_t = min(cap, start · factor^⌊(t-1)/period⌋)`.
    Geometric { start: f64, factor: f64, period: u64, cap: f64 },
}

/// The fugacity schedule `{λ_t}` driving a run.
#[derive(Debug, Clone, PartialEq)]
pub enum FugacitySchedule {
    Fixed(Fugacity),
    Infinite,
    Sequence(Sequence),
    Adaptive(AdaptiveRule),
}

impl FugacitySchedule {
    pub fn fixed(lambda: f64) -> Result<Self> {
        Ok(FugacitySchedule::Fixed(Fugacity::new(lambda)?))
    }

    pub fn explicit(values: Vec<f64>) -> Result<Self> {
        if values.is_empty() {
            return Err(Error::Config("empty fugacity sequence".into()));
        }
        for &x in &values {
            Fugacity::new(x)?;
        }
        Ok(FugacitySchedule::Sequence(Sequence::Explicit(values.into())))
    }

    pub fn geometric(start: f64, factor: f64, period: u64, cap: f64) -> Result<Self> {
        Fugacity::new(start)?;
        if !(factor >= 1.0) || period == 0 || !(cap >= start) {
            return Err(Error::Config(format!(
                "geometric schedule needs factor >= 1, period >= 1, cap >= start (got {factor}, {period}, {cap})"
            )));
        }
        Ok(FugacitySchedule::Sequence(Sequence::Geometric { start, factor, period, cap }))
    }

    pub fn adaptive(rule: AdaptiveRule) -> Result<Self> {
        rule.validate()?;
        Ok(FugacitySchedule::Adaptive(rule))
    }

    pub fn is_adaptive(&self) -> bool {
        matches!(self, FugacitySchedule::Adaptive(_))
    }

    /// `λ_t` evaluated without a cursor. Fine for tests and one-off queries;
    /// runs use [`FugacitySchedule::cursor`].
    pub fn lambda_at(&self, h: &HistoryView<'_>) -> Result<Fugacity> {
        self.cursor().next(h)
    }

    pub(crate) fn cursor(&self) -> Cursor<'_> {
        Cursor { sched: self, level: 0.0, level_until: 0 }
    }

    /// Parses `fixed:λ`, `greedy` (or `infinite`), `seq:FILE`, `list:λ1,λ2,...`,
    /// `geom:start:factor:period[:cap]` and `adaptive:NAME[:k=v,...]`.
    pub fn parse(spec: &str) -> Result<Self> {
        let spec = spec.trim();
        let (head, rest) = spec.split_once(':').unwrap_or((spec, ""));
        let num = |s: &str| -> Result<f64> {
            match s.trim() {
                "inf" | "infinity" => Ok(f64::INFINITY),
                t => t.parse().map_err(|_| Error::Config(format!("bad number `{t}` in `{spec}`"))),
            }
        };
        match head {
            "greedy" | "infinite" if rest.is_empty() => Ok(FugacitySchedule::Infinite),
            "fixed" => {
                let lambda = num(rest)?;
                if lambda.is_infinite() {
                    Ok(FugacitySchedule::Infinite)
                } else {
                    FugacitySchedule::fixed(lambda)
                }
            }
            "seq" => FugacitySchedule::explicit(read_sequence(Path::new(rest))?),
            "list" => FugacitySchedule::explicit(rest.split(',').map(num).collect::<Result<Vec<f64>>>()?),
            "geom" => {
                let parts: Vec<&str> = rest.split(':').collect();
                if parts.len() != 3 && parts.len() != 4 {
                    return Err(Error::Config(format!("expected geom:start:factor:period[:cap], got `{spec}`")));
                }
                let period = parts[2]
                    .trim()
                    .parse()
                    .map_err(|_| Error::Config(format!("bad period in `{spec}`")))?;
                let cap = parts.get(3).map(|c| num(c)).transpose()?.unwrap_or(f64::INFINITY);
                FugacitySchedule::geometric(num(parts[0])?, num(parts[1])?, period, cap)
            }
            "adaptive" => {
                let (name, args) = rest.split_once(':').unwrap_or((rest, ""));
                Ok(FugacitySchedule::Adaptive(AdaptiveRule::from_spec(name, args)?))
            }
            _ => Err(Error::Config(format!("unknown schedule `{spec}`"))),
        }
    }
}

fn read_sequence(path: &Path) -> Result<Vec<f64>> {
    let text = std::fs::read_to_string(path)?;
    let mut out = Vec::new();
    for (i, line) in text.lines().enumerate() {
        let line = line.split('#').next().unwrap_or("");
        for tok in line.split(|c: char| c.is_whitespace() || c == ',').filter(|t| !t.is_empty()) {
            let x = if tok == "inf" {
                f64::INFINITY
            } else {
                tok.parse().map_err(|_| Error::Parse { line: i + 1, msg: format!("bad fugacity `{tok}`") })?
            };
            out.push(x);
        }
    }
    Ok(out)
}

impl fmt::Display for FugacitySchedule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            FugacitySchedule::Fixed(l) => write!(f, "fixed:{l}"),
            FugacitySchedule::Infinite => f.write_str("greedy"),
            FugacitySchedule::Sequence(Sequence::Explicit(v)) => {
                f.write_str("list:")?;
                for (i, x) in v.iter().enumerate() {
                    if i > 0 {
                        f.write_str(",")?;
                    }
                    write!(f, "{}", Fugacity(*x))?;
                }
                Ok(())
            }
            FugacitySchedule::Sequence(Sequence::Geometric { start, factor, period, cap }) => {
                write!(f, "geom:{start}:{factor}:{period}")?;
                if cap.is_finite() {
                    write!(f, ":{cap}")?;
                }
                Ok(())
            }
            FugacitySchedule::Adaptive(rule) => {
                write!(f, "adaptive:{}", rule.name())?;
                match *rule {
                    AdaptiveRule::StallReheat { cold, hot, patience } => {
                        write!(f, ":cold={cold},hot={hot},patience={patience}")
                    }
                    AdaptiveRule::SizeTracking { scale } => write!(f, ":scale={scale}"),
                }
            }
        }
    }
}

impl FromStr for FugacitySchedule {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        FugacitySchedule::parse(s)
    }
}

impl Serialize for FugacitySchedule {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for FugacitySchedule {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        FugacitySchedule::parse(&s).map_err(serde::de::Error::custom)
    }
}

/// Stateful evaluator that avoids recomputing powers for geometric
/// schedules. Steps must be visited in increasing order.
pub(crate) struct Cursor<'a> {
    sched: &'a FugacitySchedule,
    level: f64,
    level_until: u64,
}

impl Cursor<'_> {
    #[inline]
    pub(crate) fn next(&mut self, h: &HistoryView<'_>) -> Result<Fugacity> {
        let raw = match self.sched {
            FugacitySchedule::Fixed(l) => return Ok(*l),
            FugacitySchedule::Infinite => return Ok(Fugacity::INFINITE),
            FugacitySchedule::Sequence(Sequence::Explicit(v)) => {
                let i = (h.t.max(1) - 1).min(v.len() as u64 - 1) as usize;
                v[i]
            }
            FugacitySchedule::Sequence(Sequence::Geometric { start, factor, period, cap }) => {
                if h.t > self.level_until || self.level_until == 0 {
                    let epoch = (h.t.max(1) - 1) / period;
                    self.level = (start * factor.powf(epoch as f64)).min(*cap);
                    self.level_until = (epoch + 1) * period;
                }
                self.level
            }
            FugacitySchedule::Adaptive(rule) => rule.lambda(h),
        };
        Fugacity::new(raw)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn view(t: u64, occ: &FixedBitSet) -> HistoryView<'_> {
        HistoryView { t, size: 3, max_size: 5, last_improvement: 10, occupied: occ }
    }

    #[test]
    fn fugacity_domain() {
        assert!(Fugacity::new(1.0).is_ok());
        assert!(Fugacity::new(f64::INFINITY).is_ok());
        assert!(matches!(Fugacity::new(0.5), Err(Error::InvalidFugacity(_))));
        assert!(Fugacity::new(f64::NAN).is_err());
        assert!(!Fugacity::INFINITE.accepts_removal(0.0));
        assert!(Fugacity::new(2.0).unwrap().accepts_removal(0.5));
        assert!(!Fugacity::new(2.0).unwrap().accepts_removal(0.5000001));
    }

    #[test]
    fn geometric_levels() {
        let s = FugacitySchedule::geometric(1.0, 2.0, 3, 8.0).unwrap();
        let occ = FixedBitSet::new();
        let mut c = s.cursor();
        let got: Vec<f64> = (1..=13).map(|t| c.next(&view(t, &occ)).unwrap().value()).collect();
        assert_eq!(got, [1., 1., 1., 2., 2., 2., 4., 4., 4., 8., 8., 8., 8.]);
        assert_eq!(s.lambda_at(&view(7, &occ)).unwrap().value(), 4.0);
    }

    #[test]
    fn explicit_holds_last_value() {
        let s = FugacitySchedule::explicit(vec![1.0, 3.0]).unwrap();
        let occ = FixedBitSet::new();
        assert_eq!(s.lambda_at(&view(1, &occ)).unwrap().value(), 1.0);
        assert_eq!(s.lambda_at(&view(9, &occ)).unwrap().value(), 3.0);
        assert!(FugacitySchedule::explicit(vec![2.0, 0.9]).is_err());
    }

    #[test]
    fn adaptive_rules() {
        let occ = FixedBitSet::new();
        let r = AdaptiveRule::StallReheat { cold: 50.0, hot: 1.0, patience: 5 };
        assert_eq!(r.lambda(&view(15, &occ)), 50.0);
        assert_eq!(r.lambda(&view(16, &occ)), 1.0);
        let r = AdaptiveRule::SizeTracking { scale: 0.25 };
        assert_eq!(r.lambda(&view(1, &occ)), 1.0);
    }

    #[test]
    fn parse_and_display() {
        for spec in ["fixed:2", "greedy", "geom:1:2:100", "geom:1:1.5:10:4096", "adaptive:size-tracking:scale=2", "list:1,2.5,inf"] {
            let s = FugacitySchedule::parse(spec).unwrap();
            assert_eq!(FugacitySchedule::parse(&s.to_string()).unwrap(), s, "{spec}");
        }
        assert_eq!(FugacitySchedule::parse("fixed:inf").unwrap(), FugacitySchedule::Infinite);
        assert!(FugacitySchedule::parse("fixed:0.5").is_err());
        assert!(FugacitySchedule::parse("adaptive:nope").is_err());
        assert!(FugacitySchedule::parse("adaptive:stall-reheat:cold=0.1").is_err());
        let s = FugacitySchedule::parse("adaptive:stall-reheat:patience=7").unwrap();
        assert_eq!(s, FugacitySchedule::Adaptive(AdaptiveRule::StallReheat { cold: 64.0, hot: 1.0, patience: 7 }));
    }

    #[test]
    fn sequence_file() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("s.txt");
        std::fs::write(&path, "# warmup\n1 1.5\n2,4\n").unwrap();
        let s = FugacitySchedule::parse(&format!("seq:{}", path.display())).unwrap();
        assert_eq!(s, FugacitySchedule::explicit(vec![1.0, 1.5, 2.0, 4.0]).unwrap());
    }
}
