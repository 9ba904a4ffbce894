//! Cascaded channel coefficients, IRS phase configuration and end-to-end
//! SINR / rate evaluation.
//!
//! The channel tensor stores, for every (source, IRS, element, destination)
//! combination, the pathloss amplitude `√ℓ` and the propagation phase
//! `(2π/λ)(d₁+d₂)`. A destination's SINR is the coherent desired sum over its
//! serving IRS's elements against the coherent interference sum over all
//! other sources and every reflecting IRS, plus thermal noise:
//!
//! ```text
//! Γ = P |Σ_m κ a e^{j(θ−φ)}|² / (|Σ_{j≠k} Σ_i Σ_m √P κ a e^{j(θ−φ)}|² + σ²)
//! ```
//!
//! All evaluation is pure over immutable inputs; independent links and
//! scenarios may be evaluated concurrently.

use num_complex::Complex64;

use crate::association::Association3D;
use crate::error::{Error, Result};
use crate::propagation::{self, dbm_to_watts};
use crate::scenario::Scenario;

/// Amplitude (√pathloss) and propagation phase of one element path.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ChannelEntry {
    pub amplitude: f64,
    /// Total propagation phase in [0, 2π).
    pub phase: f64,
}

/// Per-(source, IRS, element, destination) cascaded channel coefficients.
///
/// Immutable after construction. Indexing is `[source][panel][destination]`
/// with a per-panel element slice, so panels may differ in element count.
#[derive(Debug, Clone)]
pub struct ChannelTensor {
    num_sources: usize,
    num_panels: usize,
    num_destinations: usize,
    elements_per_panel: Vec<usize>,
    entries: Vec<Vec<Vec<Vec<ChannelEntry>>>>,
}

impl ChannelTensor {
    /// Wrap precomputed entries, checking dimensional consistency.
    pub fn from_entries(entries: Vec<Vec<Vec<Vec<ChannelEntry>>>>) -> Result<Self> {
        let num_sources = entries.len();
        if num_sources == 0 {
            return Err(Error::invalid_input("tensor needs at least one source"));
        }
        let num_panels = entries[0].len();
        if num_panels == 0 {
            return Err(Error::invalid_input("tensor needs at least one panel"));
        }
        let num_destinations = entries[0].first().map(|d| d.len()).unwrap_or(0);
        let mut elements_per_panel = vec![0usize; num_panels];
        for (n, per_dest) in entries[0].iter().enumerate() {
            elements_per_panel[n] = per_dest.first().map(|e| e.len()).unwrap_or(0);
        }
        for per_panel in &entries {
            if per_panel.len() != num_panels {
                return Err(Error::invalid_input("ragged panel dimension"));
            }
            for (n, per_dest) in per_panel.iter().enumerate() {
                if per_dest.len() != num_destinations {
                    return Err(Error::invalid_input("ragged destination dimension"));
                }
                for per_elem in per_dest {
                    if per_elem.len() != elements_per_panel[n] {
                        return Err(Error::invalid_input("ragged element dimension"));
                    }
                    for e in per_elem {
                        if !e.amplitude.is_finite() || e.amplitude < 0.0 {
                            return Err(Error::invalid_input(
                                "amplitudes must be finite and nonnegative",
                            ));
                        }
                    }
                }
            }
        }
        Ok(Self {
            num_sources,
            num_panels,
            num_destinations,
            elements_per_panel,
            entries,
        })
    }

    pub fn num_sources(&self) -> usize {
        self.num_sources
    }

    pub fn num_panels(&self) -> usize {
        self.num_panels
    }

    pub fn num_destinations(&self) -> usize {
        self.num_destinations
    }

    pub fn elements(&self, panel: usize) -> usize {
        self.elements_per_panel[panel]
    }

    /// All element entries of the (source k, panel n, destination l) link.
    pub fn link(&self, k: usize, n: usize, l: usize) -> &[ChannelEntry] {
        &self.entries[k][n][l]
    }
}

/// Assemble the channel tensor for a scenario from the propagation model.
pub fn build_channel_tensor(scenario: &Scenario) -> Result<ChannelTensor> {
    scenario.validate()?;
    let lambda = propagation::wavelength(scenario.radio.carrier_frequency_hz)?;
    let mut entries = Vec::with_capacity(scenario.num_sources());
    for src in &scenario.sources {
        let mut per_panel = Vec::with_capacity(scenario.num_panels());
        for panel in &scenario.panels {
            let mut per_dest = Vec::with_capacity(scenario.num_destinations());
            for dst in &scenario.destinations {
                let mut per_elem = Vec::with_capacity(panel.element_count());
                for m in 0..panel.element_count() {
                    let loss =
                        propagation::element_pathloss(*src, panel, m, *dst, &scenario.radio)?;
                    let center = panel.element_center(m)?;
                    let d1 = src.sub(center).norm();
                    let d2 = dst.sub(center).norm();
                    per_elem.push(ChannelEntry {
                        amplitude: loss.sqrt(),
                        phase: propagation::propagation_phase(d1, d2, lambda),
                    });
                }
                per_dest.push(per_elem);
            }
            per_panel.push(per_dest);
        }
        entries.push(per_panel);
    }
    ChannelTensor::from_entries(entries)
}

/// AWGN noise power at each destination.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct NoiseModel {
    /// σ² in watts.
    pub power_w: f64,
}

impl NoiseModel {
    pub fn from_radio(radio: &propagation::RadioConfig) -> Self {
        Self {
            power_w: noise_power(radio),
        }
    }
}

/// σ² = dBm→W(noise_density + 10 log₁₀(bandwidth) + noise_figure).
pub fn noise_power(radio: &propagation::RadioConfig) -> f64 {
    let dbm =
        radio.noise_density_dbm_hz + 10.0 * radio.bandwidth_hz.log10() + radio.noise_figure_db;
    dbm_to_watts(dbm)
}

/// Reflection phase θ and amplitude κ per (IRS, element).
#[derive(Debug, Clone, PartialEq)]
pub struct PhaseConfig {
    theta: Vec<Vec<f64>>,
    kappa: Vec<Vec<f64>>,
}

impl PhaseConfig {
    /// All-zero phases, unit amplitudes.
    pub fn zeros(elements_per_panel: &[usize]) -> Self {
        Self {
            theta: elements_per_panel.iter().map(|&m| vec![0.0; m]).collect(),
            kappa: elements_per_panel.iter().map(|&m| vec![1.0; m]).collect(),
        }
    }

    pub fn theta(&self, panel: usize, element: usize) -> f64 {
        self.theta[panel][element]
    }

    pub fn kappa(&self, panel: usize, element: usize) -> f64 {
        self.kappa[panel][element]
    }

    pub fn set_theta(&mut self, panel: usize, element: usize, theta: f64) {
        self.theta[panel][element] = theta.rem_euclid(std::f64::consts::TAU);
    }

    /// Set a reflection amplitude; κ must lie in (0, 1].
    pub fn set_kappa(&mut self, panel: usize, element: usize, kappa: f64) -> Result<()> {
        if kappa.is_nan() || kappa <= 0.0 || kappa > 1.0 {
            return Err(Error::invalid_input(format!(
                "reflection amplitude must be in (0, 1], got {kappa}"
            )));
        }
        self.kappa[panel][element] = kappa;
        Ok(())
    }

    pub fn num_panels(&self) -> usize {
        self.theta.len()
    }
}

/// Align each matched IRS with its own (source, destination) pair: every
/// element's reflection phase cancels that path's propagation phase, so the
/// desired terms sum with zero relative phase. Unmatched IRSs keep θ = 0; all
/// amplitudes are 1.
pub fn cophase(assignment: &Association3D, tensor: &ChannelTensor) -> PhaseConfig {
    let dims: Vec<usize> = (0..tensor.num_panels())
        .map(|n| tensor.elements(n))
        .collect();
    let mut phases = PhaseConfig::zeros(&dims);
    for &(k, n, l) in assignment.triples() {
        for (m, entry) in tensor.link(k, n, l).iter().enumerate() {
            phases.set_theta(n, m, entry.phase);
        }
    }
    phases
}

/// Everything needed to evaluate SINRs on one scenario.
#[derive(Debug, Clone, Copy)]
pub struct SinrContext<'a> {
    pub tensor: &'a ChannelTensor,
    pub noise: NoiseModel,
    /// Per-source transmit power, watts (single configured value).
    pub tx_power_w: f64,
    pub bandwidth_hz: f64,
    pub idle_irs_reflect: bool,
}

impl<'a> SinrContext<'a> {
    pub fn new(scenario: &Scenario, tensor: &'a ChannelTensor) -> Self {
        Self {
            tensor,
            noise: NoiseModel::from_radio(&scenario.radio),
            tx_power_w: scenario.radio.tx_power_w(),
            bandwidth_hz: scenario.radio.bandwidth_hz,
            idle_irs_reflect: scenario.idle_irs_reflect,
        }
    }

    /// Coherent sum of one link's element phasors under `phases`.
    fn link_sum(&self, k: usize, n: usize, l: usize, phases: &PhaseConfig) -> Complex64 {
        self.tensor
            .link(k, n, l)
            .iter()
            .enumerate()
            .map(|(m, e)| {
                Complex64::from_polar(
                    phases.kappa(n, m) * e.amplitude,
                    phases.theta(n, m) - e.phase,
                )
            })
            .sum()
    }

    /// Desired coherent signal power of triple (k, n, l) under `phases`.
    pub fn desired_power(&self, k: usize, n: usize, l: usize, phases: &PhaseConfig) -> f64 {
        self.tx_power_w * self.link_sum(k, n, l, phases).norm_sqr()
    }

    /// SINR of (k, n, l) with an explicit set of active interfering sources
    /// and reflecting panels. Used both for final-assignment evaluation and
    /// for the phase-2 pseudo rates.
    pub(crate) fn sinr_filtered(
        &self,
        k: usize,
        n: usize,
        l: usize,
        phases: &PhaseConfig,
        active_sources: &[usize],
        reflecting: &[bool],
    ) -> f64 {
        let desired = self.desired_power(k, n, l, phases);
        let sqrt_p = self.tx_power_w.sqrt();
        let mut interference = Complex64::new(0.0, 0.0);
        for &j in active_sources {
            if j == k {
                continue;
            }
            for (i, &on) in reflecting.iter().enumerate() {
                if on {
                    interference += self.link_sum(j, i, l, phases);
                }
            }
        }
        let interference_power = (sqrt_p * interference.norm()).powi(2);
        desired / (interference_power + self.noise.power_w)
    }
}

/// End-to-end SINR of a matched triple under the given phase configuration.
///
/// Interference sums coherently over every other matched source and all
/// reflecting IRSs (matched ones always; idle ones when the scenario says
/// they reflect).
pub fn sinr(
    ctx: &SinrContext<'_>,
    k: usize,
    n: usize,
    l: usize,
    assignment: &Association3D,
    phases: &PhaseConfig,
) -> Result<f64> {
    if !assignment.contains(k, n, l) {
        return Err(Error::ContractViolation(format!(
            "triple ({k}, {n}, {l}) is not part of the assignment"
        )));
    }
    let active: Vec<usize> = assignment.triples().iter().map(|t| t.0).collect();
    let reflecting: Vec<bool> = (0..ctx.tensor.num_panels())
        .map(|i| ctx.idle_irs_reflect || assignment.irs_in_use(i))
        .collect();
    Ok(ctx.sinr_filtered(k, n, l, phases, &active, &reflecting))
}

/// Shannon spectral efficiency log₂(1 + Γ), bits/s/Hz.
pub fn rate(gamma: f64) -> Result<f64> {
    if gamma.is_nan() || gamma < 0.0 {
        return Err(Error::invalid_input(format!(
            "SINR must be >= 0, got {gamma}"
        )));
    }
    Ok((1.0 + gamma).log2())
}

/// Network sum rate in spectral and bandwidth-scaled form.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SumRate {
    pub bps_hz: f64,
    pub throughput_bps: f64,
}

/// Sum of matched-triple rates under co-phased reflection.
pub fn sum_rate(ctx: &SinrContext<'_>, assignment: &Association3D) -> Result<SumRate> {
    let report = assignment.validate(
        ctx.tensor.num_sources(),
        ctx.tensor.num_panels(),
        ctx.tensor.num_destinations(),
    );
    if !report.is_valid() {
        return Err(Error::ContractViolation(format!(
            "assignment violates matching constraints: {}",
            report.violations().join("; ")
        )));
    }
    let phases = cophase(assignment, ctx.tensor);
    let mut total = 0.0;
    for &(k, n, l) in assignment.triples() {
        total += rate(sinr(ctx, k, n, l, assignment, &phases)?)?;
    }
    Ok(SumRate {
        bps_hz: total,
        throughput_bps: total * ctx.bandwidth_hz,
    })
}
