//! Declarative topology comparisons.
//!
//! An [`ExperimentSpec`] names one reference graph (normally LPS), a list of
//! competitor families with seed counts and an optional sweep. The runner
//! builds every graph, evaluates the requested metrics and reduces them to
//! best/mean/worst envelopes per family plus the ratios
//!
//! * `ψ = S_c(ref) / S_c(X)` (detection convergence speed),
//! * `ν = γ(ref) / γ(X)`,
//! * `η = λ₂(ref) / λ₂(X)`.
//!
//! Specs are written in TOML:
//!
//! ```toml
//! master_seed = 2024
//! metrics = ["gamma", "lambda2", "gamma2", "s_c"]
//!
//! [baseline]
//! family = "lps2"
//! p = 5
//! q = 41
//!
//! [[competitors]]
//! family = "er"
//! n = 42
//! k = 6
//! seeds = 200
//!
//! [sweep]
//! parameter = "n"
//! values = [42, 62, 102]
//!
//! [detection]
//! mu = 1.0
//! sigma2 = 1.0
//! max_iterations = 2000
//! ```
//!
//! Sweeping `n` moves the LPS reference to the matching `q`; sweeping `pw`
//! only touches WS-I competitors and sweeping `swaps` only R3L ones.

use std::collections::BTreeSet;
use std::fmt::Write as _;
use std::fs;
use std::path::Path;
use std::sync::atomic::{AtomicBool, Ordering};

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::detection::{convergence_speed, detection_convergence_time, DetectionModel};
use crate::error::{Error, Result};
use crate::generators::{generate, Family, GeneratorParams};
use crate::numtheory::is_prime;
use crate::rng::derive_seed;
use crate::spectral::{spectral_summary_with, EigenStrategy};

pub const SCHEMA_VERSION: u32 = 1;

/// Draws per seed before a family that keeps producing disconnected graphs
/// is reported as an error.
pub const MAX_DRAWS_PER_SEED: usize = 1000;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Metric {
    Gamma,
    Lambda2,
    Gamma2,
    SC,
}

impl Metric {
    pub const ALL: [Metric; 4] = [Metric::Gamma, Metric::Lambda2, Metric::Gamma2, Metric::SC];

    pub fn name(&self) -> &'static str {
        match self {
            Metric::Gamma => "gamma",
            Metric::Lambda2 => "lambda2",
            Metric::Gamma2 => "gamma2",
            Metric::SC => "s_c",
        }
    }

    /// Every metric is better when larger except `γ₂`.
    pub fn maximized(&self) -> bool {
        *self != Metric::Gamma2
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum SweepParameter {
    N,
    Pw,
    Swaps,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Sweep {
    pub parameter: SweepParameter,
    pub values: Vec<f64>,
}

/// Noiseless detection settings used for `S_c`. The sensor count follows
/// the graph.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DetectionSettings {
    pub mu: f64,
    pub sigma2: f64,
    #[serde(default = "default_detection_budget")]
    pub max_iterations: usize,
}

fn default_detection_budget() -> usize {
    5000
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Competitor {
    #[serde(flatten)]
    pub params: GeneratorParams,
    #[serde(default = "one")]
    pub seeds: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub label: Option<String>,
}

fn one() -> usize {
    1
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ExperimentSpec {
    #[serde(default)]
    pub master_seed: u64,
    pub metrics: Vec<Metric>,
    pub baseline: GeneratorParams,
    #[serde(default)]
    pub competitors: Vec<Competitor>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub sweep: Option<Sweep>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub detection: Option<DetectionSettings>,
}

impl ExperimentSpec {
    pub fn from_toml(text: &str) -> Result<Self> {
        toml::from_str(text).map_err(|e| Error::invalid(format!("experiment spec: {e}")))
    }

    pub fn read(path: &Path) -> Result<Self> {
        let text = fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
        toml::from_str(&text).map_err(|e| Error::Format {
            path: path.to_path_buf(),
            message: e.to_string(),
        })
    }

    fn labels(&self) -> Vec<String> {
        let mut seen = BTreeSet::new();
        self.competitors
            .iter()
            .enumerate()
            .map(|(i, c)| {
                let base = c.label.clone().unwrap_or_else(|| c.params.family.to_string());
                if seen.insert(base.clone()) {
                    base
                } else {
                    format!("{base}-{}", i + 1)
                }
            })
            .collect()
    }

    /// Parameters at every sweep point: `(value, baseline, competitors)`.
    fn points(&self) -> Result<Vec<(Option<f64>, GeneratorParams, Vec<GeneratorParams>)>> {
        let Some(sweep) = &self.sweep else {
            let comps = self.competitors.iter().map(|c| c.params.clone()).collect();
            return Ok(vec![(None, self.baseline.clone(), comps)]);
        };
        sweep
            .values
            .iter()
            .map(|&v| {
                let base = apply_sweep(&self.baseline, sweep.parameter, v, true)?;
                let comps = self
                    .competitors
                    .iter()
                    .map(|c| apply_sweep(&c.params, sweep.parameter, v, false))
                    .collect::<Result<_>>()?;
                Ok((Some(v), base, comps))
            })
            .collect()
    }

    /// Checks everything that can be checked without building a graph.
    pub fn validate(&self) -> Result<()> {
        if self.metrics.is_empty() {
            return Err(Error::invalid("no metrics requested"));
        }
        if self.metrics.contains(&Metric::SC) {
            let d = self
                .detection
                .ok_or_else(|| Error::invalid("metric s_c needs a [detection] section"))?;
            DetectionModel::noiseless(d.mu, d.sigma2, 1)?;
        }
        for (c, label) in self.competitors.iter().zip(self.labels()) {
            if c.seeds == 0 {
                return Err(Error::invalid(format!("competitor {label}: seeds must be >= 1")));
            }
        }
        if let Some(sweep) = &self.sweep {
            if sweep.values.is_empty() {
                return Err(Error::invalid("sweep has no values"));
            }
            if sweep.values.windows(2).any(|w| !(w[0] < w[1])) {
                return Err(Error::invalid("sweep values must be strictly increasing"));
            }
        }
        let labels = self.labels();
        for (value, base, comps) in self.points()? {
            base.validate()?;
            let (n, k) = base.vertex_count_and_degree()?;
            for (c, label) in comps.iter().zip(&labels) {
                c.validate()
                    .map_err(|e| Error::invalid(format!("competitor {label}: {e}")))?;
                let (cn, ck) = c.vertex_count_and_degree()?;
                if (cn, ck) != (n, k) {
                    let at = value.map(|v| format!(" at sweep value {v}")).unwrap_or_default();
                    return Err(Error::invalid(format!(
                        "competitor {label} has (N, k) = ({cn}, {ck}) but the baseline has ({n}, {k}){at}"
                    )));
                }
            }
        }
        Ok(())
    }
}

fn as_count(v: f64, what: &str) -> Result<usize> {
    if v >= 0.0 && v.fract() == 0.0 && v <= usize::MAX as f64 {
        Ok(v as usize)
    } else {
        Err(Error::invalid(format!("sweep value {v} is not a valid {what}")))
    }
}

/// The LPS prime `q` giving `n` vertices, if any.
fn lps_q_for(family: Family, n: usize) -> Option<u64> {
    let q = match family {
        Family::Lps2 => n.checked_sub(1)? as u64,
        Family::Lps1 => {
            let mut q = 2u64;
            while q * (q * q - 1) / 2 < n as u64 {
                q += 1;
            }
            if q * (q * q - 1) / 2 != n as u64 {
                return None;
            }
            q
        }
        _ => return None,
    };
    is_prime(q).then_some(q)
}

fn apply_sweep(
    params: &GeneratorParams,
    parameter: SweepParameter,
    v: f64,
    is_baseline: bool,
) -> Result<GeneratorParams> {
    let mut out = params.clone();
    match (parameter, params.family) {
        (SweepParameter::N, Family::Lps1 | Family::Lps2) => {
            let n = as_count(v, "vertex count")?;
            out.q = Some(lps_q_for(params.family, n).ok_or_else(|| {
                Error::invalid(format!("no {} graph has {n} vertices", params.family))
            })?);
        }
        (SweepParameter::N, _) => out.n = Some(as_count(v, "vertex count")?),
        (SweepParameter::Pw, Family::Ws1) if !is_baseline => out.pw = Some(v),
        (SweepParameter::Swaps, Family::R3l) if !is_baseline => {
            out.swaps = Some(as_count(v, "swap count")?)
        }
        _ => {}
    }
    Ok(out)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Envelope {
    pub best: f64,
    pub mean: f64,
    pub worst: f64,
    /// Seeds that produced a value (`S_c` is undefined when the budget runs out).
    pub samples: usize,
}

impl Envelope {
    fn from_values(values: &[f64], maximized: bool) -> Option<Envelope> {
        if values.is_empty() {
            return None;
        }
        let max = values.iter().copied().fold(f64::NEG_INFINITY, f64::max);
        let min = values.iter().copied().fold(f64::INFINITY, f64::min);
        let mean = values.iter().sum::<f64>() / values.len() as f64;
        let (best, worst) = if maximized { (max, min) } else { (min, max) };
        Some(Envelope {
            best,
            mean,
            worst,
            samples: values.len(),
        })
    }

    pub fn get(&self, which: EnvelopeKind) -> f64 {
        match which {
            EnvelopeKind::Best => self.best,
            EnvelopeKind::Mean => self.mean,
            EnvelopeKind::Worst => self.worst,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum EnvelopeKind {
    Best,
    Mean,
    Worst,
}

impl EnvelopeKind {
    pub const ALL: [EnvelopeKind; 3] = [EnvelopeKind::Best, EnvelopeKind::Mean, EnvelopeKind::Worst];

    pub fn name(&self) -> &'static str {
        match self {
            EnvelopeKind::Best => "best",
            EnvelopeKind::Mean => "mean",
            EnvelopeKind::Worst => "worst",
        }
    }
}

/// Baseline value over each envelope of a competitor.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RatioEnvelope {
    pub best: Option<f64>,
    pub mean: Option<f64>,
    pub worst: Option<f64>,
}

impl RatioEnvelope {
    fn new(base: Option<&Envelope>, comp: Option<&Envelope>) -> Option<RatioEnvelope> {
        let b = base?.mean;
        let c = comp?;
        let r = |x: f64| (x != 0.0).then(|| b / x);
        Some(RatioEnvelope {
            best: r(c.best),
            mean: r(c.mean),
            worst: r(c.worst),
        })
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Ratios {
    pub psi: Option<RatioEnvelope>,
    pub nu: Option<RatioEnvelope>,
    pub eta: Option<RatioEnvelope>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FamilyResult {
    pub label: String,
    pub params: GeneratorParams,
    pub n_vertices: usize,
    pub seeds: usize,
    pub rejected_disconnected: usize,
    pub gamma: Option<Envelope>,
    pub lambda2: Option<Envelope>,
    pub gamma2: Option<Envelope>,
    pub s_c: Option<Envelope>,
    /// Absent on the baseline row.
    pub ratios: Option<Ratios>,
}

impl FamilyResult {
    pub fn envelope(&self, m: Metric) -> Option<&Envelope> {
        match m {
            Metric::Gamma => self.gamma.as_ref(),
            Metric::Lambda2 => self.lambda2.as_ref(),
            Metric::Gamma2 => self.gamma2.as_ref(),
            Metric::SC => self.s_c.as_ref(),
        }
    }

    fn envelope_mut(&mut self, m: Metric) -> &mut Option<Envelope> {
        match m {
            Metric::Gamma => &mut self.gamma,
            Metric::Lambda2 => &mut self.lambda2,
            Metric::Gamma2 => &mut self.gamma2,
            Metric::SC => &mut self.s_c,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepPoint {
    pub value: Option<f64>,
    pub baseline: FamilyResult,
    pub competitors: Vec<FamilyResult>,
}

impl SweepPoint {
    pub fn families(&self) -> impl Iterator<Item = &FamilyResult> {
        std::iter::once(&self.baseline).chain(&self.competitors)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ExperimentResult {
    pub schema_version: u32,
    pub master_seed: u64,
    pub metrics: Vec<Metric>,
    pub sweep_parameter: Option<SweepParameter>,
    pub points: Vec<SweepPoint>,
}

/// Metric values of one built graph; `S_c` is `None` when not requested or
/// undefined.
#[derive(Debug, Clone, Copy)]
struct Sample {
    gamma: f64,
    lambda2: f64,
    gamma2: f64,
    s_c: Option<f64>,
}

impl Sample {
    fn get(&self, m: Metric) -> Option<f64> {
        match m {
            Metric::Gamma => Some(self.gamma),
            Metric::Lambda2 => Some(self.lambda2),
            Metric::Gamma2 => Some(self.gamma2),
            Metric::SC => self.s_c,
        }
    }
}

struct Task {
    point: usize,
    /// `None` for the baseline.
    competitor: Option<usize>,
    seed_index: usize,
}

pub fn run_experiment(spec: &ExperimentSpec) -> Result<ExperimentResult> {
    run_experiment_with_cancel(spec, &AtomicBool::new(false))
}

/// Like [`run_experiment`], but checks `cancel` before every graph build
/// and returns [`Error::Cancelled`] once it is set.
pub fn run_experiment_with_cancel(
    spec: &ExperimentSpec,
    cancel: &AtomicBool,
) -> Result<ExperimentResult> {
    spec.validate()?;
    let points = spec.points()?;
    let labels = spec.labels();
    let want_sc = spec.metrics.contains(&Metric::SC);

    let mut tasks = Vec::new();
    for p in 0..points.len() {
        tasks.push(Task { point: p, competitor: None, seed_index: 0 });
        for (c, comp) in spec.competitors.iter().enumerate() {
            for s in 0..comp.seeds {
                tasks.push(Task { point: p, competitor: Some(c), seed_index: s });
            }
        }
    }

    let outcomes: Vec<Result<(Sample, usize)>> = tasks
        .par_iter()
        .map(|t| {
            if cancel.load(Ordering::Relaxed) {
                return Err(Error::Cancelled);
            }
            let (_, base, comps) = &points[t.point];
            match t.competitor {
                None => evaluate(base, spec, want_sc, None),
                // Seeds ignore the sweep point so that every point sees the
                // same random draws.
                Some(c) => evaluate(&comps[c], spec, want_sc, Some((c, t.seed_index))),
            }
        })
        .collect();

    let mut samples: Vec<Vec<Vec<Sample>>> =
        vec![vec![Vec::new(); spec.competitors.len() + 1]; points.len()];
    let mut rejected = vec![vec![0usize; spec.competitors.len() + 1]; points.len()];
    for (t, outcome) in tasks.iter().zip(outcomes) {
        let (sample, rej) = outcome?;
        let slot = t.competitor.map_or(0, |c| c + 1);
        samples[t.point][slot].push(sample);
        rejected[t.point][slot] += rej;
    }

    let mut out_points = Vec::with_capacity(points.len());
    for (p, (value, base, comps)) in points.into_iter().enumerate() {
        let family = |slot: usize, label: String, params: GeneratorParams, seeds: usize| {
            let mut fr = FamilyResult {
                label,
                n_vertices: params.vertex_count_and_degree().map(|(n, _)| n).unwrap_or(0),
                params,
                seeds,
                rejected_disconnected: rejected[p][slot],
                gamma: None,
                lambda2: None,
                gamma2: None,
                s_c: None,
                ratios: None,
            };
            for &m in &spec.metrics {
                let vals: Vec<f64> = samples[p][slot].iter().filter_map(|s| s.get(m)).collect();
                *fr.envelope_mut(m) = Envelope::from_values(&vals, m.maximized());
            }
            fr
        };
        let baseline = family(0, "baseline".to_string(), base, 1);
        let competitors = comps
            .into_iter()
            .enumerate()
            .map(|(c, params)| {
                let mut fr = family(c + 1, labels[c].clone(), params, spec.competitors[c].seeds);
                fr.ratios = Some(Ratios {
                    psi: RatioEnvelope::new(baseline.s_c.as_ref(), fr.s_c.as_ref()),
                    nu: RatioEnvelope::new(baseline.gamma.as_ref(), fr.gamma.as_ref()),
                    eta: RatioEnvelope::new(baseline.lambda2.as_ref(), fr.lambda2.as_ref()),
                });
                fr
            })
            .collect();
        out_points.push(SweepPoint {
            value,
            baseline,
            competitors,
        });
    }

    Ok(ExperimentResult {
        schema_version: SCHEMA_VERSION,
        master_seed: spec.master_seed,
        metrics: spec.metrics.clone(),
        sweep_parameter: spec.sweep.as_ref().map(|s| s.parameter),
        points: out_points,
    })
}

/// Builds one graph, redrawing disconnected random ones, and measures it.
/// Returns the sample and the number of rejected draws.
fn evaluate(
    params: &GeneratorParams,
    spec: &ExperimentSpec,
    want_sc: bool,
    seed_path: Option<(usize, usize)>,
) -> Result<(Sample, usize)> {
    let mut rejected = 0;
    let graph = loop {
        let mut p = params.clone();
        if let Some((c, s)) = seed_path {
            if params.family.is_random() {
                p.seed = derive_seed(spec.master_seed, &[c as u64, s as u64, rejected as u64]);
            }
        }
        let g = generate(&p)?.graph;
        if g.is_connected() {
            break g;
        }
        if !params.family.is_random() {
            return Err(Error::Disconnected);
        }
        rejected += 1;
        if rejected >= MAX_DRAWS_PER_SEED {
            return Err(Error::invalid(format!(
                "{} produced {rejected} disconnected graphs in a row",
                params.family
            )));
        }
    };
    let summary = spectral_summary_with(&graph, EigenStrategy::Auto)?;
    let s_c = match (want_sc, spec.detection) {
        (true, Some(d)) => {
            let model = DetectionModel::noiseless(d.mu, d.sigma2, graph.n_vertices())?;
            convergence_speed(detection_convergence_time(&graph, &model, d.max_iterations)?)
        }
        _ => None,
    };
    Ok((
        Sample {
            gamma: summary.gamma,
            lambda2: summary.lambda2,
            gamma2: summary.gamma2,
            s_c,
        },
        rejected,
    ))
}

fn fmt_opt(v: Option<f64>) -> String {
    v.map(|x| format!("{x:e}")).unwrap_or_default()
}

impl ExperimentResult {
    pub fn to_json(&self) -> Result<String> {
        serde_json::to_string_pretty(self).map_err(|e| Error::invalid(e.to_string()))
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let r: Self = serde_json::from_str(text).map_err(|e| Error::invalid(e.to_string()))?;
        if r.schema_version != SCHEMA_VERSION {
            return Err(Error::invalid(format!(
                "unsupported schema_version {} (expected {SCHEMA_VERSION})",
                r.schema_version
            )));
        }
        Ok(r)
    }

    /// Columns `point,sweep_value,family,envelope,value,samples,ratio`, one
    /// row per sweep point, family and envelope. `ratio` is the baseline
    /// mean over the row value (empty on the baseline rows).
    pub fn metric_csv(&self, m: Metric) -> String {
        let mut out = String::from("point,sweep_value,family,envelope,value,samples,ratio\n");
        for (p, point) in self.points.iter().enumerate() {
            let base = point.baseline.envelope(m).map(|e| e.mean);
            for (f, fam) in point.families().enumerate() {
                for kind in EnvelopeKind::ALL {
                    let env = fam.envelope(m);
                    let value = env.map(|e| e.get(kind));
                    let ratio = match (f, base, value) {
                        (0, _, _) => None,
                        (_, Some(b), Some(v)) if v != 0.0 => Some(b / v),
                        _ => None,
                    };
                    let _ = writeln!(
                        out,
                        "{p},{},{},{},{},{},{}",
                        fmt_opt(point.value),
                        fam.label,
                        kind.name(),
                        fmt_opt(value),
                        env.map_or(0, |e| e.samples),
                        fmt_opt(ratio)
                    );
                }
            }
        }
        out
    }

    /// Whitespace-separated `x best mean worst` per family, for gnuplot.
    /// `x` is the sweep value, or the point index without a sweep.
    pub fn plot_data(&self, m: Metric, family: usize) -> String {
        let label = self
            .points
            .first()
            .and_then(|p| p.families().nth(family))
            .map_or("", |f| f.label.as_str());
        let mut out = format!("# {} {label}\n# x best mean worst\n", m.name());
        for (p, point) in self.points.iter().enumerate() {
            let x = point.value.unwrap_or(p as f64);
            match point.families().nth(family).and_then(|f| f.envelope(m)) {
                Some(e) => {
                    let _ = writeln!(out, "{x:e} {:e} {:e} {:e}", e.best, e.mean, e.worst);
                }
                None => {
                    let _ = writeln!(out, "{x:e} NaN NaN NaN");
                }
            }
        }
        out
    }

    /// Writes `result.json`, one `<metric>.csv` per metric and
    /// `plots/<metric>_<family>.dat` into `dir`.
    pub fn write(&self, dir: &Path) -> Result<()> {
        let plots = dir.join("plots");
        fs::create_dir_all(&plots).map_err(|e| Error::io(&plots, e))?;
        write_file(&dir.join("result.json"), &(self.to_json()? + "\n"))?;
        for &m in &self.metrics {
            write_file(&dir.join(format!("{}.csv", m.name())), &self.metric_csv(m))?;
            if let Some(first) = self.points.first() {
                for (f, fam) in first.families().enumerate() {
                    let name = format!("{}_{}.dat", m.name(), sanitize(&fam.label));
                    write_file(&plots.join(name), &self.plot_data(m, f))?;
                }
            }
        }
        Ok(())
    }
}

fn sanitize(label: &str) -> String {
    label
        .chars()
        .map(|c| if c.is_ascii_alphanumeric() || c == '-' || c == '_' { c } else { '_' })
        .collect()
}

fn write_file(path: &Path, contents: &str) -> Result<()> {
    fs::write(path, contents).map_err(|e| Error::io(path, e))
}

/// Writes `res` into `dir`; see [`ExperimentResult::write`].
pub fn serialize_result(res: &ExperimentResult, dir: &Path) -> Result<()> {
    res.write(dir)
}

/// Reads `result.json` from `path`, which may be the file or its directory.
pub fn read_result(path: &Path) -> Result<ExperimentResult> {
    let file = if path.is_dir() { path.join("result.json") } else { path.to_path_buf() };
    let text = fs::read_to_string(&file).map_err(|e| Error::io(&file, e))?;
    ExperimentResult::from_json(&text).map_err(|e| Error::Format {
        path: file,
        message: e.to_string(),
    })
}
