use std::collections::BTreeMap;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use crate::model::{HostConfig, HostId, Resource, ResourceVector};
use crate::sched::{SchedulerConfig, SchedulerKind, SortOrder};
use crate::workload::GeneratorConfig;

use super::ExperimentError;

/// Default fleet size when the instance source does not provide hosts.
pub const DEFAULT_HOSTS: usize = 5000;

/// Where the VMs of an experiment come from.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum InstanceSource {
    Generator(GeneratorConfig),
    Swf(PathBuf),
    Json(PathBuf),
}

/// Capacity and power figures replicated across the fleet.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct HostTemplate {
    pub capacity: ResourceVector,
    pub p_idle: u64,
    pub p_max: u64,
}

impl Default for HostTemplate {
    fn default() -> Self {
        let r = HostConfig::reference(0);
        Self {
            capacity: r.capacity,
            p_idle: r.p_idle,
            p_max: r.p_max,
        }
    }
}

impl HostTemplate {
    pub fn fleet(&self, count: usize) -> Vec<HostConfig> {
        (0..count)
            .map(|i| HostConfig {
                id: HostId(i as u32),
                capacity: self.capacity,
                p_idle: self.p_idle,
                p_max: self.p_max,
            })
            .collect()
    }
}

/// One scheduler run within an experiment.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct SchedulerEntry {
    /// Scheduler slug, e.g. `emintre-lft` or `tian-mffde`.
    pub name: String,
    /// Row label; defaults to the scheduler's display name.
    pub label: Option<String>,
    /// EMinTRE-LFT time weight.
    pub weight_time: Option<f64>,
    /// Per-resource weights, keyed by resource name. Used by EMinTRE-LFT
    /// and VBP-Norm-L2.
    pub weights: BTreeMap<String, f64>,
    /// EMinTRE-LFT VM order (`lft` or `ldtf`).
    pub sort: Option<String>,
}

impl SchedulerEntry {
    pub fn named(name: &str) -> Self {
        Self {
            name: name.to_string(),
            ..Default::default()
        }
    }

    pub fn emintre(weight_time: f64) -> Self {
        Self {
            weight_time: Some(weight_time),
            ..Self::named("emintre-lft")
        }
    }

    pub fn build(&self) -> Result<(String, SchedulerKind), ExperimentError> {
        let mut kind = SchedulerKind::from_slug(&self.name)?;
        let mut resource_weights = [None; 5];
        for (key, &w) in &self.weights {
            if !(w.is_finite() && w >= 0.0) {
                return Err(ExperimentError::InvalidSpec(format!(
                    "weight {key}={w} must be non-negative"
                )));
            }
            let r: Resource = key
                .parse()
                .map_err(|_| ExperimentError::InvalidSpec(format!("unknown resource weight `{key}`")))?;
            resource_weights[r.index()] = Some(w);
        }
        match &mut kind {
            SchedulerKind::EMinTreLft(cfg) => {
                *cfg = emintre_config(self, &resource_weights)?;
            }
            SchedulerKind::VbpNormL2(weights) if resource_weights.iter().any(Option::is_some) => {
                let mut w = [1.0; 5];
                for (slot, given) in w.iter_mut().zip(resource_weights) {
                    if let Some(g) = given {
                        *slot = g;
                    }
                }
                *weights = Some(w);
            }
            _ => {}
        }
        let label = self.label.clone().unwrap_or_else(|| kind.to_string());
        Ok((label, kind))
    }
}

fn emintre_config(entry: &SchedulerEntry, weights: &[Option<f64>; 5]) -> Result<SchedulerConfig<f64>, ExperimentError> {
    let mut cfg = SchedulerConfig::<f64>::default();
    if let Some(w) = entry.weight_time {
        if !(w.is_finite() && w >= 0.0) {
            return Err(ExperimentError::InvalidSpec(format!(
                "time weight {w} must be non-negative"
            )));
        }
        cfg.weight_time = w;
    }
    for (slot, given) in cfg.weight_resources.iter_mut().zip(weights) {
        if let Some(g) = given {
            *slot = *g;
        }
    }
    if let Some(order) = &entry.sort {
        cfg.sort_order = order.parse()?;
    }
    Ok(cfg)
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(default)]
pub struct OutputPaths {
    pub csv: Option<PathBuf>,
    pub json: Option<PathBuf>,
}

/// A complete benchmark description, usually read from a JSON file.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ExperimentSpec {
    pub instance: InstanceSource,
    /// Fleet size. Defaults to the hosts of a JSON instance, or
    /// [`DEFAULT_HOSTS`] otherwise.
    #[serde(default)]
    pub hosts: Option<usize>,
    #[serde(default)]
    pub host: HostTemplate,
    pub schedulers: Vec<SchedulerEntry>,
    /// Slug or label of the scheduler every row is normalized against.
    pub baseline: String,
    #[serde(default)]
    pub output: OutputPaths,
    /// Upper bound on concurrently running schedulers.
    #[serde(default)]
    pub threads: Option<usize>,
    /// Fill the `wall_ms` column. Off by default so reports are
    /// reproducible byte for byte.
    #[serde(default)]
    pub record_wall_time: bool,
}

impl ExperimentSpec {
    /// The standard comparison: four baselines plus EMinTRE-LFT at three
    /// time weights, normalized against Tian-MFFDE.
    pub fn standard(instance: InstanceSource) -> Self {
        Self {
            instance,
            hosts: None,
            host: HostTemplate::default(),
            schedulers: vec![
                SchedulerEntry::named("pabfd"),
                SchedulerEntry::named("vbp-norm-l2"),
                SchedulerEntry::named("mindft-ldtf"),
                SchedulerEntry::named("tian-mffde"),
                SchedulerEntry::emintre(1.0),
                SchedulerEntry::emintre(0.01),
                SchedulerEntry::emintre(0.001),
            ],
            baseline: "tian-mffde".to_string(),
            output: OutputPaths::default(),
            threads: None,
            record_wall_time: false,
        }
    }

    /// Reads a spec; relative paths inside it are resolved against the
    /// spec file's directory.
    pub fn load(path: &Path) -> Result<Self, ExperimentError> {
        let text =
            std::fs::read_to_string(path).map_err(|e| ExperimentError::Io(format!("{}: {e}", path.display())))?;
        let mut spec: ExperimentSpec = serde_json::from_str(&text)
            .map_err(|e| ExperimentError::InvalidSpec(format!("{}: {e}", path.display())))?;
        let base = path.parent().unwrap_or(Path::new(""));
        let resolve = |p: &mut PathBuf| {
            if p.is_relative() {
                *p = base.join(&*p);
            }
        };
        match &mut spec.instance {
            InstanceSource::Swf(p) | InstanceSource::Json(p) => resolve(p),
            InstanceSource::Generator(_) => {}
        }
        if let Some(p) = &mut spec.output.csv {
            resolve(p);
        }
        if let Some(p) = &mut spec.output.json {
            resolve(p);
        }
        Ok(spec)
    }

    /// Applies `time=..,cores=..` style overrides to every EMinTRE-LFT entry.
    pub fn apply_weight_overrides(&mut self, overrides: &WeightOverrides) {
        for entry in self.schedulers.iter_mut().filter(|e| is_emintre(&e.name)) {
            if let Some(w) = overrides.time {
                entry.weight_time = Some(w);
            }
            for (k, v) in &overrides.resources {
                entry.weights.insert(k.name().to_string(), *v);
            }
        }
    }

    pub fn apply_sort_override(&mut self, order: SortOrder) {
        for entry in self.schedulers.iter_mut().filter(|e| is_emintre(&e.name)) {
            entry.sort = Some(order.short_name().to_string());
        }
    }
}

fn is_emintre(name: &str) -> bool {
    matches!(SchedulerKind::from_slug(name), Ok(SchedulerKind::EMinTreLft(_)))
}

/// Parsed `--weights` argument.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct WeightOverrides {
    pub time: Option<f64>,
    pub resources: Vec<(Resource, f64)>,
}

/// Parses `time=0.01,cores=1,ram=0.5`.
pub fn parse_weights(text: &str) -> Result<WeightOverrides, ExperimentError> {
    let mut out = WeightOverrides::default();
    for part in text.split(',').map(str::trim).filter(|p| !p.is_empty()) {
        let (key, value) = part
            .split_once('=')
            .ok_or_else(|| ExperimentError::InvalidSpec(format!("weight `{part}` is not key=value")))?;
        let value: f64 = value
            .trim()
            .parse()
            .map_err(|_| ExperimentError::InvalidSpec(format!("weight `{part}` is not a number")))?;
        if !(value.is_finite() && value >= 0.0) {
            return Err(ExperimentError::InvalidSpec(format!(
                "weight `{part}` must be non-negative"
            )));
        }
        match key.trim() {
            "time" => out.time = Some(value),
            other => {
                let r: Resource = other
                    .parse()
                    .map_err(|_| ExperimentError::InvalidSpec(format!("unknown weight `{other}`")))?;
                out.resources.push((r, value));
            }
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn weights_parse() {
        let w = parse_weights("time=0.01, cores=1,ram=0.5").unwrap();
        assert_eq!(w.time, Some(0.01));
        assert_eq!(w.resources, vec![(Resource::Cores, 1.0), (Resource::Ram, 0.5)]);
        assert!(parse_weights("time").is_err());
        assert!(parse_weights("io=1").is_err());
        assert!(parse_weights("time=-1").is_err());
        assert!(parse_weights("time=abc").is_err());
    }

    #[test]
    fn entry_builds_configured_emintre() {
        let mut entry = SchedulerEntry::emintre(0.01);
        entry.weights.insert("ram".into(), 0.0);
        entry.sort = Some("ldtf".into());
        let (label, kind) = entry.build().unwrap();
        assert_eq!(label, "EMinTRE-LFT wt0.01 (ldtf)");
        let SchedulerKind::EMinTreLft(cfg) = kind else { panic!() };
        assert_eq!(cfg.weight_time, 0.01);
        assert_eq!(cfg.weight(Resource::Ram), 0.0);
        assert_eq!(cfg.weight(Resource::Cores), 1.0);
        assert_eq!(cfg.sort_order, SortOrder::LongestDurationFirst);
    }

    #[test]
    fn bad_entries_rejected() {
        assert!(SchedulerEntry::named("nope").build().is_err());
        let mut e = SchedulerEntry::emintre(1.0);
        e.weights.insert("io".into(), 1.0);
        assert!(e.build().is_err());
        let mut e = SchedulerEntry::emintre(1.0);
        e.sort = Some("random".into());
        assert!(e.build().is_err());
    }

    #[test]
    fn overrides_touch_only_emintre() {
        let mut spec = ExperimentSpec::standard(InstanceSource::Generator(GeneratorConfig::default()));
        spec.apply_weight_overrides(&parse_weights("time=0.5,netbw=2").unwrap());
        spec.apply_sort_override(SortOrder::LongestDurationFirst);
        for e in &spec.schedulers {
            if e.name == "emintre-lft" {
                assert_eq!(e.weight_time, Some(0.5));
                assert_eq!(e.weights.get("netbw"), Some(&2.0));
                assert_eq!(e.sort.as_deref(), Some("ldtf"));
            } else {
                assert!(e.weights.is_empty() && e.sort.is_none());
            }
        }
    }

    #[test]
    fn spec_json_shape() {
        let json = r#"{
            "instance": {"generator": {"seed": 3, "jobs": 10}},
            "hosts": 20,
            "schedulers": [{"name": "tian-mffde"}, {"name": "emintre-lft", "weight_time": 0.01}],
            "baseline": "tian-mffde",
            "output": {"csv": "out.csv"}
        }"#;
        let spec: ExperimentSpec = serde_json::from_str(json).unwrap();
        let InstanceSource::Generator(g) = &spec.instance else {
            panic!()
        };
        assert_eq!((g.seed, g.jobs), (3, 10));
        assert_eq!(g.max_processors, GeneratorConfig::default().max_processors);
        assert_eq!(spec.host, HostTemplate::default());
        assert!(!spec.record_wall_time);
    }
}
