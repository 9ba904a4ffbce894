//! Built-in oracle suites for `thz-irs selftest`: quick end-to-end checks of
//! the channel golden values, matching stability, co-phasing and pipeline
//! determinism. Each check prints one PASS/FAIL line.

use std::process::ExitCode;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use thz_irs_core::association::Association3D;
use thz_irs_core::association::{assemble, solve_p1, solve_p2, validate};
use thz_irs_core::baselines::Algorithm;
use thz_irs_core::experiments::{
    generate_scenario, render_csv, sweep, ScenarioSpec, SweepSpec, SweepVariable,
};
use thz_irs_core::matching::{
    build_priorities, deferred_acceptance, is_stable, proposal_bound_check, ScoreMatrix,
};
use thz_irs_core::propagation::{element_gain, saturation_pressure, RadioConfig, ScatterAngles};
use thz_irs_core::sinr::{build_channel_tensor, cophase, noise_power, PhaseConfig, SinrContext};

type Check = fn() -> Result<(), String>;

pub fn run() -> ExitCode {
    let checks: [(&str, Check); 6] = [
        ("channel golden values", check_golden_values),
        ("deferred acceptance stability", check_stability),
        ("proposal bound", check_proposal_bound),
        ("co-phasing optimality", check_cophase),
        ("association validity", check_association),
        ("sweep determinism", check_determinism),
    ];
    let mut failed = 0;
    for (name, check) in checks {
        match check() {
            Ok(()) => println!("[selftest] {name}: PASS"),
            Err(msg) => {
                println!("[selftest] {name}: FAIL ({msg})");
                failed += 1;
            }
        }
    }
    if failed == 0 {
        println!("[selftest] all checks passed");
        ExitCode::SUCCESS
    } else {
        println!("[selftest] {failed} check(s) failed");
        ExitCode::from(1)
    }
}

fn ensure(cond: bool, msg: &str) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg.to_string())
    }
}

fn check_golden_values() -> Result<(), String> {
    let lambda = 1e-3;
    let gain = element_gain(
        &ScatterAngles {
            psi_i: 0.0,
            psi_s: 0.0,
            phi_s: 0.0,
        },
        0.16 * lambda * lambda,
        lambda,
    );
    ensure(
        (gain - 4.042589962686201).abs() < 1e-9,
        "boresight element gain",
    )?;

    let psat = saturation_pressure(296.0, 1013.25).map_err(|e| e.to_string())?;
    ensure(
        (psat - 27.94818142675077).abs() < 0.005 * 27.948,
        "saturation pressure",
    )?;

    let radio = RadioConfig {
        noise_density_dbm_hz: -174.0,
        bandwidth_hz: 10e9,
        noise_figure_db: 10.0,
        ..Default::default()
    };
    ensure(
        (noise_power(&radio) - 3.9810717055349725e-10).abs() < 0.001 * 3.981e-10,
        "noise power",
    )
}

fn random_scores(rng: &mut ChaCha8Rng, rows: usize, cols: usize) -> ScoreMatrix {
    ScoreMatrix::new(
        rows,
        cols,
        (0..rows * cols).map(|_| rng.gen_range(-5.0..5.0)).collect(),
    )
    .unwrap()
}

fn check_stability() -> Result<(), String> {
    let mut rng = ChaCha8Rng::seed_from_u64(101);
    for _ in 0..200 {
        let p = rng.gen_range(1..=5);
        let r = rng.gen_range(1..=6);
        let scores_p = random_scores(&mut rng, p, r);
        let scores_r = random_scores(&mut rng, r, p);
        let m = deferred_acceptance(&build_priorities(&scores_p), &build_priorities(&scores_r))
            .map_err(|e| e.to_string())?;
        let (stable, _) = is_stable(&m, &scores_p, &scores_r);
        ensure(stable, "blocking pair found")?;
    }
    Ok(())
}

fn check_proposal_bound() -> Result<(), String> {
    let mut rng = ChaCha8Rng::seed_from_u64(202);
    for _ in 0..200 {
        let p = rng.gen_range(1..=5);
        let r = rng.gen_range(1..=6);
        let scores_p = random_scores(&mut rng, p, r);
        let scores_r = random_scores(&mut rng, r, p);
        let m = deferred_acceptance(&build_priorities(&scores_p), &build_priorities(&scores_r))
            .map_err(|e| e.to_string())?;
        ensure(proposal_bound_check(&m, p, r), "proposal bound exceeded")?;
    }
    Ok(())
}

fn check_cophase() -> Result<(), String> {
    let spec = ScenarioSpec {
        k: 1,
        n: 1,
        l: 1,
        elements_per_irs: 16,
        seed: 5,
        ..Default::default()
    };
    let scenario = generate_scenario(&spec).map_err(|e| e.to_string())?;
    let tensor = build_channel_tensor(&scenario).map_err(|e| e.to_string())?;
    let ctx = SinrContext::new(&scenario, &tensor);
    let assignment =
        Association3D::from_triples(vec![(0, 0, 0)], 1, 1, 1).map_err(|e| e.to_string())?;
    let best = ctx.desired_power(0, 0, 0, &cophase(&assignment, &tensor));
    let mut rng = ChaCha8Rng::seed_from_u64(303);
    for _ in 0..200 {
        let mut phases = PhaseConfig::zeros(&[16]);
        for m in 0..16 {
            phases.set_theta(0, m, rng.gen_range(0.0..std::f64::consts::TAU));
        }
        ensure(
            ctx.desired_power(0, 0, 0, &phases) <= best * (1.0 + 1e-12),
            "random phases beat co-phasing",
        )?;
    }
    Ok(())
}

fn check_association() -> Result<(), String> {
    let mut rng = ChaCha8Rng::seed_from_u64(404);
    for _ in 0..100 {
        let k = rng.gen_range(1..=4usize);
        let n = rng.gen_range(k..=6usize);
        let si = random_scores(&mut rng, k, n);
        let p1 = solve_p1(&si).map_err(|e| e.to_string())?;
        let id = random_scores(&mut rng, k, k);
        let p2 = solve_p2(&id, &p1).map_err(|e| e.to_string())?;
        let a = assemble(&p1, &p2, k, n, k).map_err(|e| e.to_string())?;
        let (ok, violations) = validate(&a, k, n, k);
        ensure(
            ok,
            &format!("assembled association invalid: {violations:?}"),
        )?;
    }
    Ok(())
}

fn check_determinism() -> Result<(), String> {
    let spec = ScenarioSpec {
        k: 2,
        n: 3,
        l: 2,
        elements_per_irs: 16,
        seed: 17,
        ..Default::default()
    };
    let sweep_spec = SweepSpec {
        variable: SweepVariable::TxPower,
        values: vec![15.0, 25.0],
        trials: 3,
        algorithms: vec![Algorithm::Proposed, Algorithm::Gs, Algorithm::Ra],
    };
    let strip = |csv: &str| -> String {
        csv.lines()
            .map(|l| l.rsplit_once(',').map(|(h, _)| h).unwrap_or(l))
            .collect::<Vec<_>>()
            .join("\n")
    };
    let a = sweep(&spec, &sweep_spec).map_err(|e| e.to_string())?;
    let b = sweep(&spec, &sweep_spec).map_err(|e| e.to_string())?;
    ensure(
        strip(&render_csv(&a.trials)) == strip(&render_csv(&b.trials)),
        "repeated sweep differed",
    )
}
