//! Independent oracles shared by the integration suites.
//!
//! Everything here is written from scratch against the closed-form channel
//! and SINR expressions, deliberately not calling into the crate's
//! propagation or sinr code paths, so that agreement between the two is
//! meaningful. Complex arithmetic is hand-rolled on (re, im) pairs.

#![allow(dead_code)]

use thz_irs_core::propagation::Vec3;
use thz_irs_core::scenario::Scenario;

pub const C: f64 = 299_792_458.0;

fn sub(a: Vec3, b: Vec3) -> [f64; 3] {
    [a.x - b.x, a.y - b.y, a.z - b.z]
}

fn dot3(a: [f64; 3], b: [f64; 3]) -> f64 {
    a[0] * b[0] + a[1] * b[1] + a[2] * b[2]
}

fn norm3(a: [f64; 3]) -> f64 {
    dot3(a, a).sqrt()
}

fn unit(a: [f64; 3]) -> [f64; 3] {
    let n = norm3(a);
    [a[0] / n, a[1] / n, a[2] / n]
}

/// Element centers of a row-major uniform grid, recomputed with explicit
/// loops over rows/columns.
pub fn oracle_element_centers(
    center: Vec3,
    u_axis: Vec3,
    v_axis: Vec3,
    rows: usize,
    cols: usize,
    pitch: f64,
) -> Vec<Vec3> {
    let mut out = Vec::new();
    for r in 0..rows {
        for c in 0..cols {
            let du = pitch * (c as f64 - 0.5 * (cols as f64 - 1.0));
            let dv = pitch * (r as f64 - 0.5 * (rows as f64 - 1.0));
            out.push(Vec3::new(
                center.x + du * u_axis.x + dv * v_axis.x,
                center.y + du * u_axis.y + dv * v_axis.y,
                center.z + du * u_axis.z + dv * v_axis.z,
            ));
        }
    }
    out
}

/// Amplitude (√pathloss) and propagation phase (rad, mod 2π) of one element
/// path, evaluated straight from the closed forms using the F(x, y, z)
/// trigonometric factor.
#[allow(clippy::too_many_arguments)]
pub fn oracle_amp_phase(
    src: Vec3,
    elem: Vec3,
    dst: Vec3,
    normal: Vec3,
    u_axis: Vec3,
    v_axis: Vec3,
    area: f64,
    lambda: f64,
    kappa_abs: f64,
    g_src: f64,
    g_dst: f64,
) -> (f64, f64) {
    let to_src = sub(src, elem);
    let to_dst = sub(dst, elem);
    let d1 = norm3(to_src);
    let d2 = norm3(to_dst);
    let n = [normal.x, normal.y, normal.z];
    let u = [u_axis.x, u_axis.y, u_axis.z];
    let v = [v_axis.x, v_axis.y, v_axis.z];

    // Local frame via explicit rotation-matrix multiplication.
    let sl = unit(to_src);
    let tl = unit(to_dst);
    let src_local = [dot3(sl, u), dot3(sl, v), dot3(sl, n)];
    let dst_local = [dot3(tl, u), dot3(tl, v), dot3(tl, n)];
    let psi_i = src_local[2].clamp(-1.0, 1.0).acos();
    let psi_s = dst_local[2].clamp(-1.0, 1.0).acos();
    let phi_s = dst_local[1].atan2(dst_local[0]);

    // F(x, y, z) = cos²x (cos²y cos²z + sin²y)
    let f = psi_i.cos().powi(2) * (phi_s.cos().powi(2) * psi_s.cos().powi(2) + phi_s.sin().powi(2));
    let gain = (4.0 * std::f64::consts::PI * area / (lambda * lambda)).powi(2) * f;

    let pi4 = 4.0 * std::f64::consts::PI;
    let loss = g_src * g_dst * (lambda / pi4).powi(4) * gain * (-kappa_abs * (d1 + d2)).exp()
        / (d1 * d1 * d2 * d2);

    let cycles = (d1 + d2) / lambda;
    let phase = (cycles - cycles.floor()) * std::f64::consts::TAU;
    (loss.sqrt(), phase)
}

/// Oracle geometry bundle for one (source, panel, destination) link.
pub fn oracle_link(scenario: &Scenario, k: usize, n: usize, l: usize) -> Vec<(f64, f64)> {
    let panel = &scenario.panels[n];
    let lambda = C / scenario.radio.carrier_frequency_hz;
    let area = panel.element_pitch * panel.element_pitch;
    oracle_element_centers(
        panel.center,
        panel.u_axis,
        panel.v_axis,
        panel.rows,
        panel.cols,
        panel.element_pitch,
    )
    .into_iter()
    .map(|elem| {
        oracle_amp_phase(
            scenario.sources[k],
            elem,
            scenario.destinations[l],
            panel.normal,
            panel.u_axis,
            panel.v_axis,
            area,
            lambda,
            scenario.radio.absorption_coeff_per_m,
            scenario.radio.source_gain,
            scenario.radio.dest_gain,
        )
    })
    .collect()
}

/// Noise power in watts from the radio config, dB arithmetic inlined.
pub fn oracle_noise_w(scenario: &Scenario) -> f64 {
    let dbm = scenario.radio.noise_density_dbm_hz
        + 10.0 * scenario.radio.bandwidth_hz.log10()
        + scenario.radio.noise_figure_db;
    10f64.powf((dbm - 30.0) / 10.0)
}

/// Brute-force end-to-end SINR of triple (k, n, l) under co-phasing, straight
/// complex arithmetic on (re, im) pairs.
pub fn oracle_sinr(
    scenario: &Scenario,
    triples: &[(usize, usize, usize)],
    k: usize,
    n: usize,
    l: usize,
) -> f64 {
    let power_w = 10f64.powf((scenario.radio.tx_power_dbm - 30.0) / 10.0);
    let num_panels = scenario.panels.len();

    // Reflection phases: each matched IRS cancels its own pair's propagation
    // phase; unmatched panels sit at zero.
    let mut thetas: Vec<Vec<f64>> = (0..num_panels)
        .map(|i| vec![0.0; scenario.panels[i].element_count()])
        .collect();
    for &(tk, tn, tl) in triples {
        for (m, (_, phase)) in oracle_link(scenario, tk, tn, tl).iter().enumerate() {
            thetas[tn][m] = *phase;
        }
    }

    // Desired coherent sum.
    let (mut re, mut im) = (0.0f64, 0.0f64);
    for (m, (amp, phase)) in oracle_link(scenario, k, n, l).iter().enumerate() {
        let ang = thetas[n][m] - phase;
        re += amp * ang.cos();
        im += amp * ang.sin();
    }
    let desired = power_w * (re * re + im * im);

    // Interference: all other matched sources through every reflecting panel.
    let reflecting: Vec<bool> = (0..num_panels)
        .map(|i| scenario.idle_irs_reflect || triples.iter().any(|t| t.1 == i))
        .collect();
    let (mut ire, mut iim) = (0.0f64, 0.0f64);
    for &(j, _, _) in triples {
        if j == k {
            continue;
        }
        for (i, &on) in reflecting.iter().enumerate() {
            if !on {
                continue;
            }
            for (m, (amp, phase)) in oracle_link(scenario, j, i, l).iter().enumerate() {
                let ang = thetas[i][m] - phase;
                ire += power_w.sqrt() * amp * ang.cos();
                iim += power_w.sqrt() * amp * ang.sin();
            }
        }
    }
    let interference = ire * ire + iim * iim;

    desired / (interference + oracle_noise_w(scenario))
}

/// Brute-force sum rate of a full assignment.
pub fn oracle_sum_rate(scenario: &Scenario, triples: &[(usize, usize, usize)]) -> f64 {
    triples
        .iter()
        .map(|&(k, n, l)| (1.0 + oracle_sinr(scenario, triples, k, n, l)).log2())
        .sum()
}

/// Rank of counterpart `c` in `row` under descending score with
/// ascending-index tie-break, computed by counting instead of sorting.
pub fn oracle_rank(row: &[f64], c: usize) -> usize {
    row.iter()
        .enumerate()
        .filter(|&(other, &s)| s > row[c] || (s == row[c] && other < c))
        .count()
}

/// Independent blocking-pair audit over raw score rows.
/// `assignment[p]` is the responder of proposer p, if any.
pub fn oracle_is_stable(
    assignment: &[Option<usize>],
    scores_p: &[Vec<f64>],
    scores_r: &[Vec<f64>],
) -> bool {
    let num_p = scores_p.len();
    let num_r = scores_r.len();
    let mut responder_partner: Vec<Option<usize>> = vec![None; num_r];
    for (p, r) in assignment.iter().enumerate() {
        if let Some(r) = *r {
            responder_partner[r] = Some(p);
        }
    }
    for p in 0..num_p {
        for r in 0..num_r {
            if assignment[p] == Some(r) {
                continue;
            }
            let p_prefers = match assignment[p] {
                Some(cur) => oracle_rank(&scores_p[p], r) < oracle_rank(&scores_p[p], cur),
                None => true,
            };
            let r_prefers = match responder_partner[r] {
                Some(cur) => oracle_rank(&scores_r[r], p) < oracle_rank(&scores_r[r], cur),
                None => true,
            };
            if p_prefers && r_prefers {
                return false;
            }
        }
    }
    true
}
