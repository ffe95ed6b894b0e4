//! Study configuration: presets, `key=value` files and flag overrides.
//!
//! Resolution order is preset, then config file, then command-line flags.
//! Config files hold one `key = value` per line (`#` starts a comment);
//! keys mirror the long flag names:
//!
//! ```text
//! qubits = 4,8,12
//! infidelity = 0.03,0.1
//! circuits = 50
//! shots = 10000
//! seed = 7
//! out = results.csv
//! threads = 4
//! depth-factor = 3
//! mean-weight = 2
//! cycles = 16
//! sigma1 = 0.008
//! sigma2 = 0.054
//! paper-scale = false
//! ```

use std::fmt;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use anyhow::{bail, Context, Result};

/// Largest register simulated by the harness.
pub const DESK_MAX_QUBITS: usize = 24;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum StudyKind {
    IqpHadamard,
    IqpComputational,
    Random,
    Supremacy,
}

impl StudyKind {
    pub const ALL: [StudyKind; 4] = [Self::IqpHadamard, Self::IqpComputational, Self::Random, Self::Supremacy];

    pub fn name(self) -> &'static str {
        match self {
            Self::IqpHadamard => "iqp-hadamard",
            Self::IqpComputational => "iqp-computational",
            Self::Random => "random",
            Self::Supremacy => "supremacy",
        }
    }

    /// Both IQP studies share a family so they run on the same circuits.
    pub(crate) fn family(self) -> u64 {
        match self {
            Self::IqpHadamard | Self::IqpComputational => 0,
            Self::Random => 1,
            Self::Supremacy => 2,
        }
    }

    /// Whether rows are indexed by a prescribed infidelity.
    pub fn has_infidelity_targets(self) -> bool {
        self != Self::Supremacy
    }
}

impl fmt::Display for StudyKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for StudyKind {
    type Err = anyhow::Error;

    fn from_str(s: &str) -> Result<Self> {
        Self::ALL
            .into_iter()
            .find(|k| k.name() == s)
            .with_context(|| format!("unknown study {s:?}; expected one of iqp-hadamard, iqp-computational, random, supremacy"))
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct StudyConfig {
    pub kind: StudyKind,
    pub qubits: Vec<usize>,
    /// Circuit depth is `depth_factor · n` (IQP rotations, random-circuit gates).
    pub depth_factor: usize,
    /// Mean number of qubits per IQP rotation.
    pub mean_weight: f64,
    /// Supremacy cycles.
    pub cycles: usize,
    /// Prescribed infidelities; unused by the supremacy study.
    pub infidelities: Vec<f64>,
    pub circuits: usize,
    pub shots: usize,
    pub seed: u64,
    pub out: Option<PathBuf>,
    /// Worker threads; 0 lets the pool decide.
    pub threads: usize,
    /// Supremacy gate-noise strengths; calibrated when absent.
    pub sigma1: Option<f64>,
    pub sigma2: Option<f64>,
}

pub const DEFAULT_INFIDELITIES: [f64; 4] = [0.01, 0.03, 0.1, 0.3];

impl StudyConfig {
    /// Desk-scale defaults, or the full grids when `paper_scale` is set.
    pub fn preset(kind: StudyKind, paper_scale: bool) -> Self {
        let (qubits, circuits): (Vec<usize>, usize) = match (kind, paper_scale) {
            (StudyKind::IqpHadamard | StudyKind::IqpComputational, false) => (vec![4, 8, 12, 16], 50),
            (StudyKind::IqpHadamard | StudyKind::IqpComputational, true) => ((4..=20).step_by(2).collect(), 400),
            (StudyKind::Random, false) => (vec![2, 4, 8, 12], 50),
            (StudyKind::Random, true) => ((2..=20).step_by(2).collect(), 300),
            (StudyKind::Supremacy, false) => (vec![4, 9, 12], 20),
            (StudyKind::Supremacy, true) => (vec![4, 9, 12, 16, 20], 100),
        };
        Self {
            kind,
            qubits,
            depth_factor: 3,
            mean_weight: 2.0,
            cycles: 16,
            infidelities: DEFAULT_INFIDELITIES.to_vec(),
            circuits,
            shots: 10_000,
            seed: 1,
            out: None,
            threads: 0,
            sigma1: None,
            sigma2: None,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.qubits.is_empty() || self.circuits == 0 || self.shots < 2 || self.depth_factor == 0 || self.cycles == 0 {
            bail!("qubits, circuits, depth-factor and cycles must be positive and shots at least 2");
        }
        if let Some(&n) = self.qubits.iter().find(|&&n| n == 0 || n > DESK_MAX_QUBITS) {
            bail!("qubit count {n} outside 1..={DESK_MAX_QUBITS}");
        }
        if self.kind.has_infidelity_targets() {
            if self.infidelities.is_empty() {
                bail!("at least one infidelity is required");
            }
            if let Some(i) = self.infidelities.iter().find(|&&i| !(i > 0.0 && i < 1.0)) {
                bail!("infidelity {i} outside (0, 1)");
            }
        }
        match self.kind {
            StudyKind::IqpHadamard | StudyKind::IqpComputational => {
                if let Some(&n) = self.qubits.iter().find(|&&n| !(self.mean_weight > 0.0 && self.mean_weight <= n as f64)) {
                    bail!("mean-weight {} outside (0, {n}]", self.mean_weight);
                }
            }
            StudyKind::Random => {
                if self.qubits.contains(&1) {
                    bail!("random circuits need at least two qubits");
                }
            }
            StudyKind::Supremacy => {
                for &n in &self.qubits {
                    evaqs_core::circuits::grid_shape(n)?;
                }
            }
        }
        for s in [self.sigma1, self.sigma2].into_iter().flatten() {
            if !(s >= 0.0) {
                bail!("noise strengths must be nonnegative");
            }
        }
        Ok(())
    }

    pub fn apply(&mut self, o: &Overrides) {
        macro_rules! set {
            ($($f:ident),*) => {$(if let Some(v) = &o.$f { self.$f = v.clone(); })*};
        }
        set!(qubits, depth_factor, mean_weight, cycles, infidelities, circuits, shots, seed, threads);
        if let Some(p) = &o.out {
            self.out = Some(p.clone());
        }
        if o.sigma1.is_some() {
            self.sigma1 = o.sigma1;
        }
        if o.sigma2.is_some() {
            self.sigma2 = o.sigma2;
        }
    }

    /// Preset for `kind`, then `file`, then `flags`.
    pub fn resolve(kind: StudyKind, file: Option<&Overrides>, flags: &Overrides) -> Result<Self> {
        let paper_scale = flags.paper_scale.or(file.and_then(|f| f.paper_scale)).unwrap_or(false);
        let mut cfg = Self::preset(kind, paper_scale);
        if let Some(f) = file {
            cfg.apply(f);
        }
        cfg.apply(flags);
        cfg.validate()?;
        Ok(cfg)
    }
}

/// Partial configuration from a file or from flags.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct Overrides {
    pub qubits: Option<Vec<usize>>,
    pub depth_factor: Option<usize>,
    pub mean_weight: Option<f64>,
    pub cycles: Option<usize>,
    pub infidelities: Option<Vec<f64>>,
    pub circuits: Option<usize>,
    pub shots: Option<usize>,
    pub seed: Option<u64>,
    pub out: Option<PathBuf>,
    pub threads: Option<usize>,
    pub sigma1: Option<f64>,
    pub sigma2: Option<f64>,
    pub paper_scale: Option<bool>,
}

pub fn parse_list<T: FromStr>(s: &str) -> Result<Vec<T>>
where
    T::Err: std::error::Error + Send + Sync + 'static,
{
    s.split(',')
        .map(str::trim)
        .filter(|t| !t.is_empty())
        .map(|t| t.parse::<T>().with_context(|| format!("bad list element {t:?}")))
        .collect()
}

impl Overrides {
    pub fn parse(text: &str) -> Result<Self> {
        let mut o = Self::default();
        for (i, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let (key, value) = line.split_once('=').with_context(|| format!("line {}: expected key = value", i + 1))?;
            let (key, value) = (key.trim(), value.trim());
            let ctx = || format!("line {}: bad value for {key}", i + 1);
            match key {
                "qubits" => o.qubits = Some(parse_list(value).with_context(ctx)?),
                "infidelity" => o.infidelities = Some(parse_list(value).with_context(ctx)?),
                "depth-factor" => o.depth_factor = Some(value.parse().with_context(ctx)?),
                "mean-weight" => o.mean_weight = Some(value.parse().with_context(ctx)?),
                "cycles" => o.cycles = Some(value.parse().with_context(ctx)?),
                "circuits" => o.circuits = Some(value.parse().with_context(ctx)?),
                "shots" => o.shots = Some(value.parse().with_context(ctx)?),
                "seed" => o.seed = Some(value.parse().with_context(ctx)?),
                "out" => o.out = Some(PathBuf::from(value)),
                "threads" => o.threads = Some(value.parse().with_context(ctx)?),
                "sigma1" => o.sigma1 = Some(value.parse().with_context(ctx)?),
                "sigma2" => o.sigma2 = Some(value.parse().with_context(ctx)?),
                "paper-scale" => o.paper_scale = Some(value.parse().with_context(ctx)?),
                _ => bail!("line {}: unknown key {key:?}", i + 1),
            }
        }
        Ok(o)
    }

    pub fn from_file(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
        Self::parse(&text).with_context(|| format!("in {}", path.display()))
    }
}
