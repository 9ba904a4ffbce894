//! Scenario generation, seeded Monte-Carlo sweeps and result emission.
//!
//! Sources and destinations land uniformly at random inside the network area
//! at their configured heights; IRS panels sit evenly spaced along the
//! perimeter walls, facing inward. Per-trial seeds derive from the master
//! seed by counter, so a sweep is reproducible point by point and identical
//! no matter how many workers execute it. The same trial index reuses the
//! same seed at every swept value, which keeps per-trial comparisons across
//! values meaningful.

use std::path::Path;
use std::time::Instant;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::association;
use crate::baselines::{self, Algorithm, BaselineResult};
use crate::error::{Error, Result};
use crate::propagation::{self, AtmosphereConfig, IrsPanel, RadioConfig, Vec3};
use crate::scenario::Scenario;
use crate::sinr::{self, SinrContext};

/// Node placement rule. Only uniform-random interior nodes with
/// perimeter-mounted IRSs are implemented.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Placement {
    #[default]
    Uniform,
}

/// Declarative description of one scenario family.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct ScenarioSpec {
    /// Number of sources K.
    pub k: usize,
    /// Number of IRS panels N.
    pub n: usize,
    /// Number of destinations L.
    pub l: usize,
    pub area_width_m: f64,
    pub area_depth_m: f64,
    pub source_height_m: f64,
    pub dest_height_m: f64,
    pub irs_height_m: f64,
    /// Elements per IRS; must be a perfect square (square grid).
    pub elements_per_irs: usize,
    pub placement: Placement,
    pub radio: RadioConfig,
    pub atmosphere: AtmosphereConfig,
    pub idle_irs_reflect: bool,
    /// Master seed; sweeps derive per-trial seeds from it by counter.
    pub seed: u64,
    /// Refusal threshold for exhaustive-search candidates.
    pub es_candidate_cap: u64,
}

impl Default for ScenarioSpec {
    fn default() -> Self {
        Self {
            k: 3,
            n: 4,
            l: 3,
            area_width_m: 20.0,
            area_depth_m: 20.0,
            source_height_m: 1.5,
            dest_height_m: 1.5,
            irs_height_m: 2.5,
            elements_per_irs: 256,
            placement: Placement::Uniform,
            radio: RadioConfig::default(),
            atmosphere: AtmosphereConfig::default(),
            idle_irs_reflect: true,
            seed: 1,
            es_candidate_cap: baselines::DEFAULT_CANDIDATE_CAP as u64,
        }
    }
}

impl ScenarioSpec {
    pub fn validate(&self) -> Result<()> {
        if self.k == 0 {
            return Err(Error::InvalidConfig("k must be >= 1".into()));
        }
        if self.k != self.l {
            return Err(Error::Infeasible(format!(
                "k and l must be equal, got k={} l={}",
                self.k, self.l
            )));
        }
        if self.k > self.n {
            return Err(Error::Infeasible(format!(
                "k must not exceed n, got k={} n={}",
                self.k, self.n
            )));
        }
        if !self.area_width_m.is_finite()
            || self.area_width_m <= 0.0
            || !self.area_depth_m.is_finite()
            || self.area_depth_m <= 0.0
        {
            return Err(Error::InvalidConfig("area dimensions must be > 0".into()));
        }
        for (name, h) in [
            ("source_height_m", self.source_height_m),
            ("dest_height_m", self.dest_height_m),
            ("irs_height_m", self.irs_height_m),
        ] {
            if !h.is_finite() || h < 0.0 {
                return Err(Error::InvalidConfig(format!(
                    "{name} must be finite and >= 0"
                )));
            }
        }
        if self.elements_per_irs == 0 || !is_perfect_square(self.elements_per_irs) {
            return Err(Error::InvalidConfig(format!(
                "elements_per_irs must be a positive perfect square, got {}",
                self.elements_per_irs
            )));
        }
        self.radio
            .validate()
            .map_err(|e| Error::InvalidConfig(e.to_string()))?;
        self.atmosphere
            .validate()
            .map_err(|e| Error::InvalidConfig(e.to_string()))?;
        Ok(())
    }
}

fn is_perfect_square(x: usize) -> bool {
    let r = (x as f64).sqrt().round() as usize;
    r * r == x
}

/// Which scenario parameter a sweep varies.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SweepVariable {
    /// Transmit power in dBm.
    TxPower,
    /// Elements per IRS (values must be perfect squares).
    ElementsPerIrs,
}

impl SweepVariable {
    pub fn as_str(&self) -> &'static str {
        match self {
            SweepVariable::TxPower => "tx_power",
            SweepVariable::ElementsPerIrs => "elements_per_irs",
        }
    }
}

/// One sweep: a variable, its values, trials per point and the algorithms to
/// compare.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct SweepSpec {
    pub variable: SweepVariable,
    pub values: Vec<f64>,
    pub trials: u32,
    pub algorithms: Vec<Algorithm>,
}

impl Default for SweepSpec {
    fn default() -> Self {
        Self {
            variable: SweepVariable::TxPower,
            values: vec![5.0, 10.0, 15.0, 20.0, 25.0],
            trials: 100,
            algorithms: Algorithm::ALL.to_vec(),
        }
    }
}

impl SweepSpec {
    pub fn validate(&self) -> Result<()> {
        if self.values.is_empty() {
            return Err(Error::InvalidConfig(
                "sweep needs at least one value".into(),
            ));
        }
        if self.trials == 0 {
            return Err(Error::InvalidConfig("trials must be >= 1".into()));
        }
        for (i, &v) in self.values.iter().enumerate() {
            if v.is_nan() {
                return Err(Error::InvalidConfig("sweep values must be numbers".into()));
            }
            if self.values[..i].contains(&v) {
                return Err(Error::InvalidConfig(format!("duplicate sweep value {v}")));
            }
        }
        if self.algorithms.is_empty() {
            return Err(Error::InvalidConfig(
                "sweep needs at least one algorithm".into(),
            ));
        }
        for (i, &a) in self.algorithms.iter().enumerate() {
            if self.algorithms[..i].contains(&a) {
                return Err(Error::InvalidConfig(format!("duplicate algorithm {a}")));
            }
        }
        if self.variable == SweepVariable::ElementsPerIrs {
            for &v in &self.values {
                let elems = v.round();
                if v.is_nan()
                    || v <= 0.0
                    || (v - elems).abs() > 1e-9
                    || !is_perfect_square(elems as usize)
                {
                    return Err(Error::InvalidConfig(format!(
                        "element sweep values must be positive perfect squares, got {v}"
                    )));
                }
            }
        }
        Ok(())
    }

    fn apply(&self, base: &ScenarioSpec, value: f64, seed: u64) -> ScenarioSpec {
        let mut spec = base.clone();
        spec.seed = seed;
        match self.variable {
            SweepVariable::TxPower => spec.radio.tx_power_dbm = value,
            SweepVariable::ElementsPerIrs => spec.elements_per_irs = value.round() as usize,
        }
        spec
    }
}

/// SplitMix64 step; small, stable seed-derivation primitive.
fn splitmix64(mut x: u64) -> u64 {
    x = x.wrapping_add(0x9E37_79B9_7F4A_7C15);
    x = (x ^ (x >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    x = (x ^ (x >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    x ^ (x >> 31)
}

/// Per-trial seed from the master seed and the trial counter.
pub fn derive_trial_seed(master: u64, counter: u64) -> u64 {
    splitmix64(master ^ splitmix64(counter))
}

fn algorithm_salt(algo: Algorithm) -> u64 {
    match algo {
        Algorithm::Proposed => 0x50524f50,
        Algorithm::Es => 0x4553,
        Algorithm::Pes => 0x504553,
        Algorithm::Gs => 0x4753,
        Algorithm::Ra => 0x5241,
        Algorithm::Pra => 0x505241,
    }
}

/// Place one node uniformly in the area at the given height.
fn draw_node(rng: &mut ChaCha8Rng, spec: &ScenarioSpec, height: f64) -> Vec3 {
    let x = rng.gen_range(0.0..spec.area_width_m);
    let y = rng.gen_range(0.0..spec.area_depth_m);
    Vec3::new(x, y, height)
}

/// Panel center and inward normal at arclength `t` along the perimeter,
/// walking south, east, north, west from the origin corner.
fn perimeter_point(t: f64, width: f64, depth: f64) -> (f64, f64, Vec3) {
    if t < width {
        (t, 0.0, Vec3::new(0.0, 1.0, 0.0))
    } else if t < width + depth {
        (width, t - width, Vec3::new(-1.0, 0.0, 0.0))
    } else if t < 2.0 * width + depth {
        (
            width - (t - width - depth),
            depth,
            Vec3::new(0.0, -1.0, 0.0),
        )
    } else {
        (
            0.0,
            depth - (t - 2.0 * width - depth),
            Vec3::new(1.0, 0.0, 0.0),
        )
    }
}

/// Materialize one scenario: random interior sources/destinations, evenly
/// spaced wall-mounted panels with inward normals, all driven by the spec
/// seed. The same spec yields the same scenario bit for bit.
pub fn generate_scenario(spec: &ScenarioSpec) -> Result<Scenario> {
    spec.validate()?;
    let mut rng = ChaCha8Rng::seed_from_u64(spec.seed);

    let sources: Vec<Vec3> = (0..spec.k)
        .map(|_| draw_node(&mut rng, spec, spec.source_height_m))
        .collect();
    let destinations: Vec<Vec3> = (0..spec.l)
        .map(|_| draw_node(&mut rng, spec, spec.dest_height_m))
        .collect();

    let lambda = propagation::wavelength(spec.radio.carrier_frequency_hz)?;
    let pitch = 0.4 * lambda;
    let side = (spec.elements_per_irs as f64).sqrt().round() as usize;
    let perimeter = 2.0 * (spec.area_width_m + spec.area_depth_m);
    let mut panels = Vec::with_capacity(spec.n);
    for i in 0..spec.n {
        let t = (i as f64 + 0.5) * perimeter / spec.n as f64;
        let (x, y, normal) = perimeter_point(t, spec.area_width_m, spec.area_depth_m);
        let z_axis = Vec3::new(0.0, 0.0, 1.0);
        let u_axis = z_axis.cross(normal);
        panels.push(IrsPanel::new(
            i,
            Vec3::new(x, y, spec.irs_height_m),
            normal,
            u_axis,
            z_axis,
            side,
            side,
            pitch,
        )?);
    }

    Ok(Scenario {
        sources,
        destinations,
        panels,
        radio: spec.radio.clone(),
        atmosphere: spec.atmosphere.clone(),
        idle_irs_reflect: spec.idle_irs_reflect,
    })
}

/// Result payload for one (trial, algorithm) cell.
#[derive(Debug, Clone, PartialEq)]
pub struct AlgoMetrics {
    pub sum_rate_bps_hz: f64,
    pub throughput_bps: f64,
    pub proposals: u64,
    pub candidates: u64,
    pub wall_ms: f64,
}

/// One algorithm's outcome; failures are recorded, not fatal.
#[derive(Debug, Clone)]
pub struct AlgoOutcome {
    pub algorithm: Algorithm,
    pub result: std::result::Result<AlgoMetrics, String>,
}

/// All requested algorithms run on one seeded scenario.
#[derive(Debug, Clone)]
pub struct TrialResult {
    pub seed: u64,
    pub swept_var: SweepVariable,
    pub swept_value: f64,
    pub outcomes: Vec<AlgoOutcome>,
}

/// Dispatch one algorithm on a prepared scenario/context.
pub fn run_algorithm(
    algo: Algorithm,
    scenario: &Scenario,
    ctx: &SinrContext<'_>,
    trial_seed: u64,
    es_cap: u128,
) -> Result<BaselineResult> {
    let mut rng = ChaCha8Rng::seed_from_u64(splitmix64(trial_seed ^ algorithm_salt(algo)));
    match algo {
        Algorithm::Proposed => {
            let solution = association::solve_two_phase(scenario, ctx)?;
            let sum_rate = sinr::sum_rate(ctx, &solution.assignment)?;
            Ok(BaselineResult {
                algorithm: Algorithm::Proposed,
                assignment: solution.assignment,
                sum_rate,
                proposals: solution.p1_proposals + solution.p2_proposals,
                candidates: 1,
            })
        }
        Algorithm::Es => baselines::exhaustive_search(scenario, ctx, es_cap),
        Algorithm::Pes => baselines::partial_exhaustive(scenario, ctx, es_cap),
        Algorithm::Gs => baselines::greedy(scenario, ctx, &mut rng),
        Algorithm::Ra => baselines::random_assignment(scenario, ctx, &mut rng),
        Algorithm::Pra => baselines::partial_random(scenario, ctx, &mut rng),
    }
}

/// Run every requested algorithm on one scenario, sharing a single channel
/// tensor. Individual algorithm failures land in the outcome list.
pub fn run_trial(
    scenario: &Scenario,
    algorithms: &[Algorithm],
    trial_seed: u64,
    es_cap: u128,
    swept_var: SweepVariable,
    swept_value: f64,
) -> Result<TrialResult> {
    let tensor = sinr::build_channel_tensor(scenario)?;
    let ctx = SinrContext::new(scenario, &tensor);
    let outcomes = algorithms
        .iter()
        .map(|&algo| {
            let start = Instant::now();
            let result = run_algorithm(algo, scenario, &ctx, trial_seed, es_cap)
                .map(|r| AlgoMetrics {
                    sum_rate_bps_hz: r.sum_rate.bps_hz,
                    throughput_bps: r.sum_rate.throughput_bps,
                    proposals: r.proposals,
                    candidates: r.candidates,
                    wall_ms: start.elapsed().as_secs_f64() * 1e3,
                })
                .map_err(|e| e.to_string());
            AlgoOutcome {
                algorithm: algo,
                result,
            }
        })
        .collect();
    Ok(TrialResult {
        seed: trial_seed,
        swept_var,
        swept_value,
        outcomes,
    })
}

/// Mean and standard error of one algorithm at one swept value.
#[derive(Debug, Clone, PartialEq)]
pub struct SummaryPoint {
    pub variable: SweepVariable,
    pub value: f64,
    pub algorithm: Algorithm,
    pub mean_bps_hz: f64,
    pub stderr_bps_hz: f64,
    pub trials_ok: u64,
}

/// Complete sweep output: raw trials plus per-point aggregates.
#[derive(Debug, Clone)]
pub struct SweepOutcome {
    pub trials: Vec<TrialResult>,
    pub summary: Vec<SummaryPoint>,
    /// (trial, algorithm) cells that failed and were skipped in aggregates.
    pub failures: u64,
}

/// Run a full sweep: every value × every trial seed, each trial running the
/// requested algorithms on an identical scenario. Trials execute in parallel
/// when the `parallel` feature is on; results are ordered and identical to a
/// sequential run regardless of worker count.
pub fn sweep(base: &ScenarioSpec, sweep_spec: &SweepSpec) -> Result<SweepOutcome> {
    base.validate()?;
    sweep_spec.validate()?;

    let mut jobs = Vec::new();
    for &value in &sweep_spec.values {
        for trial in 0..sweep_spec.trials {
            let seed = derive_trial_seed(base.seed, trial as u64);
            jobs.push((value, seed));
        }
    }

    let run_one = |&(value, seed): &(f64, u64)| -> Result<TrialResult> {
        let spec = sweep_spec.apply(base, value, seed);
        let scenario = generate_scenario(&spec)?;
        run_trial(
            &scenario,
            &sweep_spec.algorithms,
            seed,
            spec.es_candidate_cap as u128,
            sweep_spec.variable,
            value,
        )
    };

    #[cfg(feature = "parallel")]
    let trials: Result<Vec<TrialResult>> = {
        use rayon::prelude::*;
        jobs.par_iter().map(run_one).collect()
    };
    #[cfg(not(feature = "parallel"))]
    let trials: Result<Vec<TrialResult>> = jobs.iter().map(run_one).collect();
    let trials = trials?;

    let mut failures = 0u64;
    let mut summary = Vec::new();
    for &value in &sweep_spec.values {
        for &algo in &sweep_spec.algorithms {
            let rates: Vec<f64> = trials
                .iter()
                .filter(|t| t.swept_value == value)
                .filter_map(|t| {
                    t.outcomes
                        .iter()
                        .find(|o| o.algorithm == algo)
                        .and_then(|o| o.result.as_ref().ok())
                        .map(|m| m.sum_rate_bps_hz)
                })
                .collect();
            let expected = sweep_spec.trials as usize;
            failures += (expected - rates.len()) as u64;
            let mean = if rates.is_empty() {
                f64::NAN
            } else {
                rates.iter().sum::<f64>() / rates.len() as f64
            };
            let stderr = if rates.len() < 2 {
                0.0
            } else {
                let var = rates.iter().map(|r| (r - mean).powi(2)).sum::<f64>()
                    / (rates.len() - 1) as f64;
                (var / rates.len() as f64).sqrt()
            };
            summary.push(SummaryPoint {
                variable: sweep_spec.variable,
                value,
                algorithm: algo,
                mean_bps_hz: mean,
                stderr_bps_hz: stderr,
                trials_ok: rates.len() as u64,
            });
        }
    }

    Ok(SweepOutcome {
        trials,
        summary,
        failures,
    })
}

/// Exact CSV header, one column per schema field.
pub const CSV_HEADER: &str =
    "seed,swept_var,swept_value,algorithm,sum_rate_bps_hz,throughput_bps,proposals,candidates,wall_ms";

/// Render trial results as CSV text, one row per successful
/// (trial, algorithm) cell, ordered by (seed, algorithm tag, swept value).
pub fn render_csv(trials: &[TrialResult]) -> String {
    let mut rows: Vec<(u64, &'static str, f64, String)> = Vec::new();
    for trial in trials {
        for outcome in &trial.outcomes {
            if let Ok(m) = &outcome.result {
                let line = format!(
                    "{},{},{},{},{},{},{},{},{:.3}",
                    trial.seed,
                    trial.swept_var.as_str(),
                    trial.swept_value,
                    outcome.algorithm.tag(),
                    m.sum_rate_bps_hz,
                    m.throughput_bps,
                    m.proposals,
                    m.candidates,
                    m.wall_ms,
                );
                rows.push((trial.seed, outcome.algorithm.tag(), trial.swept_value, line));
            }
        }
    }
    rows.sort_by(|a, b| {
        a.0.cmp(&b.0)
            .then(a.1.cmp(b.1))
            .then(a.2.partial_cmp(&b.2).unwrap())
    });
    let mut out = String::from(CSV_HEADER);
    out.push('\n');
    for (_, _, _, line) in rows {
        out.push_str(&line);
        out.push('\n');
    }
    out
}

/// Write trial rows to a CSV file.
pub fn emit_csv(trials: &[TrialResult], path: &Path) -> Result<()> {
    if trials.is_empty() {
        return Err(Error::invalid_input("no trial results to emit"));
    }
    std::fs::write(path, render_csv(trials)).map_err(|e| Error::io(path, e))
}

/// Write the sweep summary as a static SVG line chart: one series per
/// algorithm, mean ± standard-error bars.
pub fn emit_plot(summary: &[SummaryPoint], path: &Path) -> Result<()> {
    if summary.is_empty() {
        return Err(Error::invalid_input("no summary points to plot"));
    }
    std::fs::write(path, render_svg(summary)).map_err(|e| Error::io(path, e))
}

const SERIES_COLORS: [(&str, &str); 6] = [
    ("proposed", "#1f77b4"),
    ("es", "#d62728"),
    ("pes", "#9467bd"),
    ("gs", "#2ca02c"),
    ("ra", "#ff7f0e"),
    ("pra", "#8c564b"),
];

fn series_color(algo: Algorithm) -> &'static str {
    SERIES_COLORS
        .iter()
        .find(|(tag, _)| *tag == algo.tag())
        .map(|(_, c)| *c)
        .unwrap_or("#333333")
}

/// Deterministic SVG rendering of the summary (fixed canvas, fixed float
/// formatting), so identical results produce identical bytes.
pub fn render_svg(summary: &[SummaryPoint]) -> String {
    use std::fmt::Write as _;

    const W: f64 = 760.0;
    const H: f64 = 460.0;
    const ML: f64 = 70.0; // left margin
    const MR: f64 = 20.0;
    const MT: f64 = 30.0;
    const MB: f64 = 55.0;

    let variable = summary[0].variable;
    let mut xs: Vec<f64> = summary.iter().map(|p| p.value).collect();
    xs.sort_by(|a, b| a.partial_cmp(b).unwrap());
    xs.dedup();

    let mut algos: Vec<Algorithm> = Vec::new();
    for algo in Algorithm::ALL {
        if summary.iter().any(|p| p.algorithm == algo) {
            algos.push(algo);
        }
    }

    let (mut y_min, mut y_max) = (f64::INFINITY, f64::NEG_INFINITY);
    for p in summary {
        if p.mean_bps_hz.is_finite() {
            y_min = y_min.min(p.mean_bps_hz - p.stderr_bps_hz);
            y_max = y_max.max(p.mean_bps_hz + p.stderr_bps_hz);
        }
    }
    if !y_min.is_finite() || !y_max.is_finite() {
        y_min = 0.0;
        y_max = 1.0;
    }
    if y_max - y_min < 1e-12 {
        y_max = y_min + 1.0;
    }
    let pad = 0.06 * (y_max - y_min);
    y_min -= pad;
    y_max += pad;

    let x_min = xs[0];
    let x_max = *xs.last().unwrap();
    let x_span = if x_max > x_min { x_max - x_min } else { 1.0 };
    let to_x = |v: f64| ML + (v - x_min) / x_span * (W - ML - MR);
    let to_y = |v: f64| H - MB - (v - y_min) / (y_max - y_min) * (H - MT - MB);

    let mut svg = String::new();
    let _ = writeln!(
        svg,
        "<svg xmlns=\"http://www.w3.org/2000/svg\" viewBox=\"0 0 {W} {H}\" \
         font-family=\"sans-serif\" font-size=\"12\">"
    );
    let _ = writeln!(svg, "<rect width=\"{W}\" height=\"{H}\" fill=\"white\"/>");

    // Axes.
    let _ = writeln!(
        svg,
        "<line x1=\"{ML}\" y1=\"{MT}\" x2=\"{ML}\" y2=\"{:.2}\" stroke=\"black\"/>",
        H - MB
    );
    let _ = writeln!(
        svg,
        "<line x1=\"{ML}\" y1=\"{:.2}\" x2=\"{:.2}\" y2=\"{:.2}\" stroke=\"black\"/>",
        H - MB,
        W - MR,
        H - MB
    );

    // X ticks at each swept value.
    for &x in &xs {
        let px = to_x(x);
        let _ = writeln!(
            svg,
            "<line x1=\"{px:.2}\" y1=\"{:.2}\" x2=\"{px:.2}\" y2=\"{:.2}\" stroke=\"black\"/>",
            H - MB,
            H - MB + 5.0
        );
        let _ = writeln!(
            svg,
            "<text x=\"{px:.2}\" y=\"{:.2}\" text-anchor=\"middle\">{x}</text>",
            H - MB + 20.0
        );
    }
    // Y ticks: five even divisions.
    for i in 0..=4 {
        let v = y_min + (y_max - y_min) * i as f64 / 4.0;
        let py = to_y(v);
        let _ = writeln!(
            svg,
            "<line x1=\"{:.2}\" y1=\"{py:.2}\" x2=\"{ML}\" y2=\"{py:.2}\" stroke=\"black\"/>",
            ML - 5.0
        );
        let _ = writeln!(
            svg,
            "<text x=\"{:.2}\" y=\"{:.2}\" text-anchor=\"end\">{v:.2}</text>",
            ML - 9.0,
            py + 4.0
        );
    }

    // Axis labels.
    let x_label = match variable {
        SweepVariable::TxPower => "transmit power (dBm)",
        SweepVariable::ElementsPerIrs => "elements per IRS",
    };
    let _ = writeln!(
        svg,
        "<text x=\"{:.2}\" y=\"{:.2}\" text-anchor=\"middle\">{x_label}</text>",
        (ML + W - MR) / 2.0,
        H - 12.0
    );
    let _ = writeln!(
        svg,
        "<text x=\"16\" y=\"{:.2}\" text-anchor=\"middle\" transform=\"rotate(-90 16 {:.2})\">sum rate (bits/s/Hz)</text>",
        (MT + H - MB) / 2.0,
        (MT + H - MB) / 2.0
    );

    // Series with error bars.
    for algo in &algos {
        let color = series_color(*algo);
        let mut points = Vec::new();
        for &x in &xs {
            if let Some(p) = summary
                .iter()
                .find(|p| p.algorithm == *algo && p.value == x && p.mean_bps_hz.is_finite())
            {
                points.push((to_x(x), to_y(p.mean_bps_hz), p));
            }
        }
        let path: Vec<String> = points
            .iter()
            .map(|(px, py, _)| format!("{px:.2},{py:.2}"))
            .collect();
        let _ = writeln!(
            svg,
            "<polyline fill=\"none\" stroke=\"{color}\" stroke-width=\"1.8\" points=\"{}\"/>",
            path.join(" ")
        );
        for (px, py, p) in &points {
            let lo = to_y(p.mean_bps_hz - p.stderr_bps_hz);
            let hi = to_y(p.mean_bps_hz + p.stderr_bps_hz);
            let _ = writeln!(
                svg,
                "<line x1=\"{px:.2}\" y1=\"{lo:.2}\" x2=\"{px:.2}\" y2=\"{hi:.2}\" stroke=\"{color}\"/>"
            );
            let _ = writeln!(
                svg,
                "<circle cx=\"{px:.2}\" cy=\"{py:.2}\" r=\"3\" fill=\"{color}\"/>"
            );
        }
    }

    // Legend, top-left inside the plot.
    for (i, algo) in algos.iter().enumerate() {
        let y = MT + 8.0 + i as f64 * 16.0;
        let color = series_color(*algo);
        let _ = writeln!(
            svg,
            "<line x1=\"{:.2}\" y1=\"{y:.2}\" x2=\"{:.2}\" y2=\"{y:.2}\" stroke=\"{color}\" stroke-width=\"1.8\"/>",
            ML + 10.0,
            ML + 34.0
        );
        let _ = writeln!(
            svg,
            "<text x=\"{:.2}\" y=\"{:.2}\">{}</text>",
            ML + 40.0,
            y + 4.0,
            algo.tag()
        );
    }

    svg.push_str("</svg>\n");
    svg
}
