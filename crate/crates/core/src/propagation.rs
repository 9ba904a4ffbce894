//! Geometry, atmosphere and the per-element cascaded gain/pathloss model.
//!
//! A cascaded link runs source → IRS element → destination. Each element of a
//! panel reflects with an angle-dependent gain
//!
//! ```text
//! G(ψ_i, ψ_s, φ_s) = (4πA/λ² · η)²,
//! η = sqrt(cos²ψ_i (cos²φ_s cos²ψ_s + sin²φ_s))
//! ```
//!
//! and the two-hop pathloss combines antenna gains, the element gain, free
//! spreading over both hops and exponential molecular absorption. All
//! distances and angles are computed exactly per element; no far-field
//! shared-angle shortcut is taken.
//!
//! Everything in this module is a pure function of its inputs and safe to
//! call from any number of threads.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Speed of light in vacuum, m/s.
pub const SPEED_OF_LIGHT: f64 = 299_792_458.0;

/// Temperature (K) at which the saturation-pressure exponent blows up.
pub const SATURATION_SINGULARITY_K: f64 = 32.18;

/// A point or direction in 3D cartesian space, meters.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Vec3 {
    pub x: f64,
    pub y: f64,
    pub z: f64,
}

impl Vec3 {
    pub const fn new(x: f64, y: f64, z: f64) -> Self {
        Self { x, y, z }
    }

    pub const fn zero() -> Self {
        Self::new(0.0, 0.0, 0.0)
    }

    pub fn is_finite(&self) -> bool {
        self.x.is_finite() && self.y.is_finite() && self.z.is_finite()
    }

    pub fn add(&self, other: Vec3) -> Vec3 {
        Vec3::new(self.x + other.x, self.y + other.y, self.z + other.z)
    }

    pub fn sub(&self, other: Vec3) -> Vec3 {
        Vec3::new(self.x - other.x, self.y - other.y, self.z - other.z)
    }

    pub fn scale(&self, s: f64) -> Vec3 {
        Vec3::new(self.x * s, self.y * s, self.z * s)
    }

    pub fn dot(&self, other: Vec3) -> f64 {
        self.x * other.x + self.y * other.y + self.z * other.z
    }

    pub fn cross(&self, other: Vec3) -> Vec3 {
        Vec3::new(
            self.y * other.z - self.z * other.y,
            self.z * other.x - self.x * other.z,
            self.x * other.y - self.y * other.x,
        )
    }

    pub fn norm(&self) -> f64 {
        self.dot(*self).sqrt()
    }
}

/// Carrier, bandwidth, absorption and power/noise figures for one network.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct RadioConfig {
    /// Carrier frequency f_c, Hz.
    pub carrier_frequency_hz: f64,
    /// Signal bandwidth, Hz.
    pub bandwidth_hz: f64,
    /// Molecular absorption coefficient κ_abs, 1/m.
    pub absorption_coeff_per_m: f64,
    /// Thermal noise density, dBm/Hz.
    pub noise_density_dbm_hz: f64,
    /// Receiver noise figure, dB.
    pub noise_figure_db: f64,
    /// Per-source transmit power, dBm.
    pub tx_power_dbm: f64,
    /// Source antenna gain, linear.
    pub source_gain: f64,
    /// Destination antenna gain, linear.
    pub dest_gain: f64,
}

impl Default for RadioConfig {
    fn default() -> Self {
        Self {
            carrier_frequency_hz: 300e9,
            bandwidth_hz: 10e9,
            absorption_coeff_per_m: 0.0033,
            noise_density_dbm_hz: -174.0,
            noise_figure_db: 10.0,
            tx_power_dbm: 25.0,
            source_gain: 1.0,
            dest_gain: 1.0,
        }
    }
}

impl RadioConfig {
    pub fn validate(&self) -> Result<()> {
        if !self.carrier_frequency_hz.is_finite() || self.carrier_frequency_hz <= 0.0 {
            return Err(Error::invalid_input("carrier_frequency_hz must be > 0"));
        }
        if !self.bandwidth_hz.is_finite() || self.bandwidth_hz <= 0.0 {
            return Err(Error::invalid_input("bandwidth_hz must be > 0"));
        }
        if !self.absorption_coeff_per_m.is_finite() || self.absorption_coeff_per_m < 0.0 {
            return Err(Error::invalid_input("absorption_coeff_per_m must be >= 0"));
        }
        if !self.source_gain.is_finite()
            || self.source_gain < 0.0
            || !self.dest_gain.is_finite()
            || self.dest_gain < 0.0
        {
            return Err(Error::invalid_input("antenna gains must be >= 0"));
        }
        if !self.tx_power_dbm.is_finite()
            || !self.noise_density_dbm_hz.is_finite()
            || !self.noise_figure_db.is_finite()
        {
            return Err(Error::invalid_input("power/noise figures must be finite"));
        }
        Ok(())
    }

    /// Per-source transmit power in watts.
    pub fn tx_power_w(&self) -> f64 {
        dbm_to_watts(self.tx_power_dbm)
    }
}

pub fn dbm_to_watts(dbm: f64) -> f64 {
    10f64.powf((dbm - 30.0) / 10.0)
}

pub fn watts_to_dbm(w: f64) -> f64 {
    10.0 * w.log10() + 30.0
}

/// Ambient conditions entering the water-vapor mixing ratio.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct AtmosphereConfig {
    /// Temperature T, K.
    pub temperature_k: f64,
    /// Total pressure p, hPa.
    pub pressure_hpa: f64,
    /// Relative humidity φ, percent in [0, 100].
    pub relative_humidity: f64,
}

impl Default for AtmosphereConfig {
    fn default() -> Self {
        // Standard atmospheric condition.
        Self {
            temperature_k: 296.0,
            pressure_hpa: 1013.25,
            relative_humidity: 50.0,
        }
    }
}

impl AtmosphereConfig {
    pub fn validate(&self) -> Result<()> {
        if !self.temperature_k.is_finite() || self.temperature_k <= SATURATION_SINGULARITY_K {
            return Err(Error::invalid_input(format!(
                "temperature_k must exceed {SATURATION_SINGULARITY_K} K"
            )));
        }
        if !self.pressure_hpa.is_finite() || self.pressure_hpa < 0.0 {
            return Err(Error::invalid_input("pressure_hpa must be >= 0"));
        }
        if !(0.0..=100.0).contains(&self.relative_humidity) {
            return Err(Error::invalid_input(
                "relative_humidity must be in [0, 100]",
            ));
        }
        Ok(())
    }
}

/// Hook for frequency-dependent absorption models.
///
/// The channel model itself consumes the scalar
/// [`RadioConfig::absorption_coeff_per_m`]; callers with a line-by-line
/// absorption database can implement this trait, evaluate it at the carrier
/// and write the result into the config. No default implementation ships.
pub trait AbsorptionModel {
    /// κ_abs in 1/m at frequency `f_hz` for water-vapor mixing ratio `mu_h2o`.
    fn kappa_abs(&self, f_hz: f64, mu_h2o: f64) -> f64;
}

/// Resolve the absorption coefficient: an explicit model wins over the
/// configured constant.
pub fn effective_absorption(
    radio: &RadioConfig,
    atmosphere: &AtmosphereConfig,
    model: Option<&dyn AbsorptionModel>,
) -> Result<f64> {
    match model {
        Some(m) => {
            let mu = mixing_ratio(atmosphere)?;
            Ok(m.kappa_abs(radio.carrier_frequency_hz, mu))
        }
        None => Ok(radio.absorption_coeff_per_m),
    }
}

/// One rectangular IRS panel: an orthonormal local frame plus a uniform
/// element grid.
///
/// `normal` faces the illuminated half-space; `u_axis` and `v_axis` span the
/// panel plane. Element centers tile the plane contiguously with pitch equal
/// to the element side, centered on `center`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct IrsPanel {
    pub id: usize,
    pub center: Vec3,
    pub normal: Vec3,
    pub u_axis: Vec3,
    pub v_axis: Vec3,
    pub rows: usize,
    pub cols: usize,
    /// Element side length (and grid pitch), meters.
    pub element_pitch: f64,
}

const TRIAD_TOL: f64 = 1e-9;

impl IrsPanel {
    #[allow(clippy::too_many_arguments)]
    pub fn new(
        id: usize,
        center: Vec3,
        normal: Vec3,
        u_axis: Vec3,
        v_axis: Vec3,
        rows: usize,
        cols: usize,
        element_pitch: f64,
    ) -> Result<Self> {
        if !center.is_finite() {
            return Err(Error::invalid_input("panel center must be finite"));
        }
        for (name, v) in [("normal", normal), ("u_axis", u_axis), ("v_axis", v_axis)] {
            if !v.is_finite() || (v.norm() - 1.0).abs() > TRIAD_TOL {
                return Err(Error::invalid_input(format!(
                    "panel {name} must be a unit vector"
                )));
            }
        }
        for (a, b) in [(normal, u_axis), (normal, v_axis), (u_axis, v_axis)] {
            if a.dot(b).abs() > TRIAD_TOL {
                return Err(Error::invalid_input("panel triad must be orthogonal"));
            }
        }
        if rows == 0 || cols == 0 {
            return Err(Error::invalid_input("panel must have at least one element"));
        }
        if !element_pitch.is_finite() || element_pitch <= 0.0 {
            return Err(Error::invalid_input("element_pitch must be > 0"));
        }
        Ok(Self {
            id,
            center,
            normal,
            u_axis,
            v_axis,
            rows,
            cols,
            element_pitch,
        })
    }

    pub fn element_count(&self) -> usize {
        self.rows * self.cols
    }

    /// Element area A = pitch², m² (contiguous tiling, side = pitch).
    pub fn element_area(&self) -> f64 {
        self.element_pitch * self.element_pitch
    }

    /// Center of element `m` (row-major index).
    pub fn element_center(&self, m: usize) -> Result<Vec3> {
        if m >= self.element_count() {
            return Err(Error::invalid_input(format!(
                "element index {m} out of range for {}x{} panel",
                self.rows, self.cols
            )));
        }
        let row = m / self.cols;
        let col = m % self.cols;
        let du = (col as f64 - (self.cols as f64 - 1.0) / 2.0) * self.element_pitch;
        let dv = (row as f64 - (self.rows as f64 - 1.0) / 2.0) * self.element_pitch;
        Ok(self
            .center
            .add(self.u_axis.scale(du))
            .add(self.v_axis.scale(dv)))
    }
}

/// Local incidence/scatter angles at one element.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ScatterAngles {
    /// Incidence elevation ψ⁽ⁱ⁾, rad in [0, π/2].
    pub psi_i: f64,
    /// Scatter elevation ψ⁽ˢ⁾, rad in [0, π/2].
    pub psi_s: f64,
    /// Scatter azimuth φ⁽ˢ⁾, rad in [−π, π].
    pub phi_s: f64,
}

/// Wavelength λ = c / f.
pub fn wavelength(frequency_hz: f64) -> Result<f64> {
    if !frequency_hz.is_finite() || frequency_hz <= 0.0 {
        return Err(Error::invalid_input("frequency must be > 0"));
    }
    Ok(SPEED_OF_LIGHT / frequency_hz)
}

/// Buck-style saturation pressure of water vapor, hPa.
///
/// `p*_w(T, p) = 6.1121 (1.0007 + 3.46·10⁻⁶ p) exp(17.502 (T − 273.15) / (T − 32.18))`
pub fn saturation_pressure(temperature_k: f64, pressure_hpa: f64) -> Result<f64> {
    if !temperature_k.is_finite() || temperature_k <= SATURATION_SINGULARITY_K {
        return Err(Error::Singularity(format!(
            "saturation pressure undefined for T <= {SATURATION_SINGULARITY_K} K (got {temperature_k})"
        )));
    }
    let enhancement = 1.0007 + 3.46e-6 * pressure_hpa;
    let exponent = 17.502 * (temperature_k - 273.15) / (temperature_k - SATURATION_SINGULARITY_K);
    Ok(6.1121 * enhancement * exponent.exp())
}

/// Volume mixing ratio of water vapor, μ = (φ/100) · p*_w(T, p) / p.
pub fn mixing_ratio(atmosphere: &AtmosphereConfig) -> Result<f64> {
    atmosphere.validate()?;
    if atmosphere.pressure_hpa == 0.0 {
        return Err(Error::invalid_input(
            "mixing ratio undefined at zero pressure",
        ));
    }
    let psat = saturation_pressure(atmosphere.temperature_k, atmosphere.pressure_hpa)?;
    Ok(atmosphere.relative_humidity / 100.0 * psat / atmosphere.pressure_hpa)
}

/// Map global geometry to the local angles of one element.
///
/// ψ⁽ⁱ⁾ is measured between the panel normal and the direction to `src`;
/// (ψ⁽ˢ⁾, φ⁽ˢ⁾) are the elevation/azimuth of the direction to `dst` in the
/// panel's (u, v, normal) frame. Both endpoints must lie on or in front of
/// the panel plane.
pub fn element_angles(
    panel: &IrsPanel,
    element_index: usize,
    src: Vec3,
    dst: Vec3,
) -> Result<ScatterAngles> {
    let origin = panel.element_center(element_index)?;
    let to_src = src.sub(origin);
    let to_dst = dst.sub(origin);
    let d_src = to_src.norm();
    let d_dst = to_dst.norm();
    if d_src == 0.0 || d_dst == 0.0 {
        return Err(Error::geometry("endpoint coincides with element center"));
    }
    let cos_i = to_src.dot(panel.normal) / d_src;
    let cos_s = to_dst.dot(panel.normal) / d_dst;
    if cos_i < 0.0 {
        return Err(Error::geometry(format!("source behind panel {}", panel.id)));
    }
    if cos_s < 0.0 {
        return Err(Error::geometry(format!(
            "destination behind panel {}",
            panel.id
        )));
    }
    let psi_i = cos_i.clamp(-1.0, 1.0).acos();
    let psi_s = cos_s.clamp(-1.0, 1.0).acos();
    let phi_s = to_dst.dot(panel.v_axis).atan2(to_dst.dot(panel.u_axis));
    Ok(ScatterAngles {
        psi_i,
        psi_s,
        phi_s,
    })
}

/// Cascaded (incident × scatter) gain of one element:
/// `(4πA/λ² · η)²` with `η = sqrt(cos²ψ_i (cos²φ_s cos²ψ_s + sin²φ_s))`.
pub fn element_gain(angles: &ScatterAngles, area_m2: f64, lambda_m: f64) -> f64 {
    debug_assert!(area_m2 > 0.0 && lambda_m > 0.0);
    let cos_i = angles.psi_i.cos();
    let cos_s = angles.psi_s.cos();
    let (sin_phi, cos_phi) = angles.phi_s.sin_cos();
    let eta_sq = cos_i * cos_i * (cos_phi * cos_phi * cos_s * cos_s + sin_phi * sin_phi);
    let aperture = 4.0 * std::f64::consts::PI * area_m2 / (lambda_m * lambda_m);
    aperture * aperture * eta_sq
}

/// Two-hop cascaded pathloss through one element:
///
/// `ℓ = G_S G_D (λ/4π)⁴ G_elem e^{−κ(d₁+d₂)} / (d₁² d₂²)`
pub fn element_pathloss(
    src: Vec3,
    panel: &IrsPanel,
    element_index: usize,
    dst: Vec3,
    radio: &RadioConfig,
) -> Result<f64> {
    let origin = panel.element_center(element_index)?;
    let d1 = src.sub(origin).norm();
    let d2 = dst.sub(origin).norm();
    if d1 == 0.0 || d2 == 0.0 {
        return Err(Error::geometry("zero-length hop in cascaded link"));
    }
    let angles = element_angles(panel, element_index, src, dst)?;
    let lambda = wavelength(radio.carrier_frequency_hz)?;
    let gain = element_gain(&angles, panel.element_area(), lambda);
    let aperture = lambda / (4.0 * std::f64::consts::PI);
    let spreading = aperture.powi(4) / (d1 * d1 * d2 * d2);
    let absorption = (-radio.absorption_coeff_per_m * (d1 + d2)).exp();
    Ok(radio.source_gain * radio.dest_gain * gain * spreading * absorption)
}

/// Total propagation phase (2π/λ)(d₁+d₂) reduced to [0, 2π).
pub fn propagation_phase(d1_m: f64, d2_m: f64, lambda_m: f64) -> f64 {
    debug_assert!(lambda_m > 0.0);
    // Reduce in units of cycles before scaling by 2π to keep precision over
    // paths spanning many thousands of wavelengths.
    let cycles = (d1_m + d2_m) / lambda_m;
    let frac = cycles - cycles.floor();
    let phase = frac * std::f64::consts::TAU;
    if phase >= std::f64::consts::TAU {
        0.0
    } else {
        phase
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn boresight_panel(pitch: f64) -> IrsPanel {
        // Panel at origin, normal +x, u along +y, v along +z.
        IrsPanel::new(
            0,
            Vec3::zero(),
            Vec3::new(1.0, 0.0, 0.0),
            Vec3::new(0.0, 1.0, 0.0),
            Vec3::new(0.0, 0.0, 1.0),
            1,
            1,
            pitch,
        )
        .unwrap()
    }

    #[test]
    fn wavelength_known_values() {
        // c/f evaluated independently.
        assert!((wavelength(300e9).unwrap() - 9.993081933333333e-4).abs() < 1e-18);
        assert_eq!(wavelength(SPEED_OF_LIGHT).unwrap(), 1.0);
        let w300 = wavelength(300e9).unwrap();
        let w150 = wavelength(150e9).unwrap();
        assert_eq!(w150, 2.0 * w300);
    }

    #[test]
    fn wavelength_rejects_nonpositive() {
        assert!(wavelength(0.0).is_err());
        assert!(wavelength(-1.0).is_err());
    }

    #[test]
    fn saturation_pressure_reference_point() {
        // Independently evaluated with 40-digit arithmetic.
        let p = saturation_pressure(296.0, 1013.25).unwrap();
        assert!((p - 27.94818142675077).abs() < 1e-10, "psat = {p}");
    }

    #[test]
    fn saturation_pressure_zero_exponent() {
        // At T = 273.15 the exponent vanishes exactly.
        let p = saturation_pressure(273.15, 0.0).unwrap();
        assert!((p - 6.1121 * 1.0007).abs() < 1e-12);
    }

    #[test]
    fn saturation_pressure_linear_in_pressure_factor() {
        let hi = saturation_pressure(296.0, 1013.25).unwrap();
        let lo = saturation_pressure(296.0, 0.0).unwrap();
        let expected = (1.0007 + 3.46e-6 * 1013.25) / 1.0007;
        assert!((hi / lo - expected).abs() < 1e-12);
    }

    #[test]
    fn saturation_pressure_singularity() {
        assert!(matches!(
            saturation_pressure(32.18, 1000.0),
            Err(Error::Singularity(_))
        ));
        assert!(saturation_pressure(30.0, 1000.0).is_err());
    }

    #[test]
    fn mixing_ratio_examples() {
        let dry = AtmosphereConfig {
            relative_humidity: 0.0,
            ..Default::default()
        };
        assert_eq!(mixing_ratio(&dry).unwrap(), 0.0);

        let std_atm = AtmosphereConfig::default();
        let mu = mixing_ratio(&std_atm).unwrap();
        assert!((mu - 0.013791355256230332).abs() < 1e-12, "mu = {mu}");

        let humid = AtmosphereConfig {
            relative_humidity: 100.0,
            ..Default::default()
        };
        assert!((mixing_ratio(&humid).unwrap() - 2.0 * mu).abs() < 1e-15);
    }

    #[test]
    fn mixing_ratio_zero_pressure_rejected() {
        let atm = AtmosphereConfig {
            pressure_hpa: 0.0,
            ..Default::default()
        };
        assert!(mixing_ratio(&atm).is_err());
    }

    #[test]
    fn element_angles_boresight() {
        let panel = boresight_panel(1e-3);
        let src = Vec3::new(3.0, 0.0, 0.0);
        let dst = Vec3::new(7.0, 0.0, 0.0);
        let a = element_angles(&panel, 0, src, dst).unwrap();
        assert!(a.psi_i.abs() < 1e-12);
        assert!(a.psi_s.abs() < 1e-12);
    }

    #[test]
    fn element_angles_grazing_incidence() {
        let panel = boresight_panel(1e-3);
        let src = Vec3::new(0.0, 2.0, 0.0); // in the panel plane
        let dst = Vec3::new(5.0, 0.0, 0.0);
        let a = element_angles(&panel, 0, src, dst).unwrap();
        assert!((a.psi_i - std::f64::consts::FRAC_PI_2).abs() < 1e-12);
    }

    #[test]
    fn element_angles_rejects_behind() {
        let panel = boresight_panel(1e-3);
        let behind = Vec3::new(-1.0, 0.0, 0.0);
        let front = Vec3::new(1.0, 0.0, 0.0);
        assert!(matches!(
            element_angles(&panel, 0, behind, front),
            Err(Error::Geometry(_))
        ));
        assert!(matches!(
            element_angles(&panel, 0, front, behind),
            Err(Error::Geometry(_))
        ));
    }

    #[test]
    fn element_gain_boresight_reference() {
        // A = (0.4λ)² ⇒ 4πA/λ² = 0.64π; gain = (0.64π)².
        let lambda = 1e-3;
        let area = 0.16 * lambda * lambda;
        let angles = ScatterAngles {
            psi_i: 0.0,
            psi_s: 0.0,
            phi_s: 0.0,
        };
        let g = element_gain(&angles, area, lambda);
        assert!((g - 4.042589962686201).abs() < 1e-9, "g = {g}");
    }

    #[test]
    fn element_gain_vanishes_at_grazing() {
        let angles = ScatterAngles {
            psi_i: std::f64::consts::FRAC_PI_2,
            psi_s: 0.3,
            phi_s: 0.7,
        };
        let g = element_gain(&angles, 1e-7, 1e-3);
        assert!(g < 1e-25);
    }

    #[test]
    fn element_gain_azimuth_quadrature_drops_psi_s() {
        // φ_s = π/2 ⇒ η = |cos ψ_i| independent of ψ_s.
        let lambda = 1e-3;
        let area = 0.16 * lambda * lambda;
        let psi_i = 0.4;
        let g1 = element_gain(
            &ScatterAngles {
                psi_i,
                psi_s: 0.1,
                phi_s: std::f64::consts::FRAC_PI_2,
            },
            area,
            lambda,
        );
        let g2 = element_gain(
            &ScatterAngles {
                psi_i,
                psi_s: 1.2,
                phi_s: std::f64::consts::FRAC_PI_2,
            },
            area,
            lambda,
        );
        assert!((g1 - g2).abs() < 1e-12 * g1.max(g2));
        let aperture = 4.0 * std::f64::consts::PI * area / (lambda * lambda);
        let expected = (aperture * psi_i.cos()).powi(2);
        assert!((g1 - expected).abs() < 1e-12 * expected);
    }

    #[test]
    fn element_pathloss_reference_point() {
        // Unit gains, boresight, d1 = d2 = 1 m, κ = 0, λ = 1 mm, A = 0.16λ².
        // Closed form (0.64π)²(λ/4π)⁴ evaluated independently.
        let lambda = 1e-3;
        let radio = RadioConfig {
            carrier_frequency_hz: SPEED_OF_LIGHT / lambda,
            absorption_coeff_per_m: 0.0,
            source_gain: 1.0,
            dest_gain: 1.0,
            ..Default::default()
        };
        let panel = boresight_panel(0.4 * lambda);
        let src = Vec3::new(1.0, 0.0, 0.0);
        let dst = Vec3::new(1.0, 0.0, 0.0);
        let l = element_pathloss(src, &panel, 0, dst, &radio).unwrap();
        assert!((l - 1.6211389382774043e-16).abs() < 1e-27, "l = {l:e}");
    }

    #[test]
    fn element_pathloss_absorption_factor() {
        // κ = 0.0033 over d1+d2 = 10 m attenuates by exactly e^{-0.033}.
        let lambda = 1e-3;
        let mut radio = RadioConfig {
            carrier_frequency_hz: SPEED_OF_LIGHT / lambda,
            absorption_coeff_per_m: 0.0,
            ..Default::default()
        };
        let panel = boresight_panel(0.4 * lambda);
        let src = Vec3::new(4.0, 0.0, 0.0);
        let dst = Vec3::new(6.0, 0.0, 0.0);
        let clear = element_pathloss(src, &panel, 0, dst, &radio).unwrap();
        radio.absorption_coeff_per_m = 0.0033;
        let absorbed = element_pathloss(src, &panel, 0, dst, &radio).unwrap();
        let ratio = absorbed / clear;
        assert!((ratio - 0.967538559589032).abs() < 1e-12, "ratio = {ratio}");
    }

    #[test]
    fn element_pathloss_quartic_distance_scaling() {
        let lambda = 1e-3;
        let radio = RadioConfig {
            carrier_frequency_hz: SPEED_OF_LIGHT / lambda,
            absorption_coeff_per_m: 0.0,
            ..Default::default()
        };
        let panel = boresight_panel(0.4 * lambda);
        let near = element_pathloss(
            Vec3::new(1.0, 0.0, 0.0),
            &panel,
            0,
            Vec3::new(2.0, 0.0, 0.0),
            &radio,
        )
        .unwrap();
        let far = element_pathloss(
            Vec3::new(2.0, 0.0, 0.0),
            &panel,
            0,
            Vec3::new(4.0, 0.0, 0.0),
            &radio,
        )
        .unwrap();
        assert!((near / far - 16.0).abs() < 1e-9);
    }

    #[test]
    fn element_pathloss_zero_distance_rejected() {
        let panel = boresight_panel(1e-3);
        let radio = RadioConfig::default();
        let err = element_pathloss(Vec3::zero(), &panel, 0, Vec3::new(1.0, 0.0, 0.0), &radio);
        assert!(matches!(err, Err(Error::Geometry(_))));
    }

    #[test]
    fn propagation_phase_simple_fractions() {
        let lambda = 1e-3;
        let p = propagation_phase(lambda / 2.0, lambda / 2.0, lambda);
        assert!(p.abs() < 1e-12);
        let p = propagation_phase(lambda / 4.0, lambda / 4.0, lambda);
        assert!((p - std::f64::consts::PI).abs() < 1e-9);
    }

    #[test]
    fn propagation_phase_in_range() {
        for i in 0..1000 {
            let d = 0.01 + i as f64 * 0.0137;
            let p = propagation_phase(d, d * 0.7, 1e-3);
            assert!((0.0..std::f64::consts::TAU).contains(&p));
        }
    }

    #[test]
    fn panel_constructor_validates_triad() {
        let bad = IrsPanel::new(
            0,
            Vec3::zero(),
            Vec3::new(1.0, 0.0, 0.0),
            Vec3::new(0.1, 1.0, 0.0), // not orthogonal to normal
            Vec3::new(0.0, 0.0, 1.0),
            1,
            1,
            1e-3,
        );
        assert!(bad.is_err());
        let not_unit = IrsPanel::new(
            0,
            Vec3::zero(),
            Vec3::new(2.0, 0.0, 0.0),
            Vec3::new(0.0, 1.0, 0.0),
            Vec3::new(0.0, 0.0, 1.0),
            1,
            1,
            1e-3,
        );
        assert!(not_unit.is_err());
    }

    #[test]
    fn element_grid_is_centered() {
        let mut panel = boresight_panel(2.0);
        panel.rows = 2;
        panel.cols = 2;
        let centers: Vec<Vec3> = (0..4).map(|m| panel.element_center(m).unwrap()).collect();
        let mean = centers
            .iter()
            .fold(Vec3::zero(), |acc, c| acc.add(*c))
            .scale(0.25);
        assert!(mean.sub(panel.center).norm() < 1e-12);
        // Pitch respected between adjacent elements.
        assert!((centers[1].sub(centers[0]).norm() - 2.0).abs() < 1e-12);
    }

    #[test]
    fn effective_absorption_prefers_model() {
        struct Fixed(f64);
        impl AbsorptionModel for Fixed {
            fn kappa_abs(&self, _f: f64, _mu: f64) -> f64 {
                self.0
            }
        }
        let radio = RadioConfig::default();
        let atm = AtmosphereConfig::default();
        assert_eq!(effective_absorption(&radio, &atm, None).unwrap(), 0.0033);
        assert_eq!(
            effective_absorption(&radio, &atm, Some(&Fixed(0.01))).unwrap(),
            0.01
        );
    }
}
