//! Acceptance suite: one PASS/FAIL line per criterion, non-zero exit if any fail.

use std::process::ExitCode;
use std::time::{Duration, Instant};

use fracmal::analysis::{
    classify_endemic, cubic_discriminant, dfe_eigenvalues, jacobian_dfe, jacobian_endemic,
    matignon_stable, next_generation, reduced_rhs, spectrum_verdict, Complex64, CubicCoefficients,
    DfeVerdict, PropositionBranch,
};
use fracmal::fracsolver::{
    corrector_weight, predictor_weight, solve, FnSystem, FractionalOrder, TimeGrid, Trajectory,
};
use fracmal::model::{
    basic_reproduction_number, endemic_equilibrium, rhs_powered, simplex_defect, EpiState,
    MalariaSystem, ModelParams,
};
use fracmal_cli::{run_sweep, ScenarioConfig};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

type Outcome = Result<String, String>;

fn order(a: f64) -> FractionalOrder {
    FractionalOrder::new(a).unwrap()
}

fn within(limit: Duration, started: Instant) -> Result<Duration, String> {
    let took = started.elapsed();
    if took <= limit {
        Ok(took)
    } else {
        Err(format!("took {took:.2?}, limit {limit:?}"))
    }
}

fn random_params(rng: &mut impl Rng) -> ModelParams {
    ModelParams {
        a: rng.gen_range(0.1..2.0),
        b: rng.gen_range(0.05..1.0),
        c: rng.gen_range(0.05..1.0),
        m: rng.gen_range(0.5..20.0),
        nu: rng.gen_range(0.005..0.5),
        gamma: rng.gen_range(0.001..0.5),
        r: rng.gen_range(0.005..0.5),
        delta: rng.gen_range(0.0..0.2),
        lambda_h: rng.gen_range(0.001..0.1),
        lambda_v: rng.gen_range(0.05..2.0),
    }
}

fn rk4(p: &ModelParams, y0: [f64; 5], h: f64, n: usize) -> Vec<[f64; 5]> {
    let q = p.powered(FractionalOrder::CLASSICAL);
    let step = |y: &[f64; 5], k: &[f64; 5], s: f64| -> [f64; 5] {
        std::array::from_fn(|i| y[i] + s * k[i])
    };
    let mut y = y0;
    let mut out = Vec::with_capacity(n + 1);
    out.push(y);
    for _ in 0..n {
        let k1 = rhs_powered(&y, &q);
        let k2 = rhs_powered(&step(&y, &k1, h / 2.0), &q);
        let k3 = rhs_powered(&step(&y, &k2, h / 2.0), &q);
        let k4 = rhs_powered(&step(&y, &k3, h), &q);
        y = std::array::from_fn(|i| y[i] + h / 6.0 * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]));
        out.push(y);
    }
    out
}

fn classical_limit() -> Outcome {
    let started = Instant::now();
    let p = ModelParams::REFERENCE;
    let y0 = EpiState::REFERENCE_INITIAL.to_array();
    let grid = TimeGrid::new(0.01, 5000).unwrap();
    let traj = solve(
        &MalariaSystem::new(&p, FractionalOrder::CLASSICAL),
        &y0,
        FractionalOrder::CLASSICAL,
        grid,
    )
    .map_err(|e| e.to_string())?;
    let reference = rk4(&p, y0, 0.01, 5000);
    let mut worst = 0.0f64;
    for (k, r) in reference.iter().enumerate() {
        for (a, b) in traj.state(k).iter().zip(r) {
            worst = worst.max((a - b).abs());
        }
    }
    let took = within(Duration::from_secs(10), started)?;
    if worst <= 1e-4 {
        Ok(format!("max deviation from RK4 {worst:.2e} in {took:.2?}"))
    } else {
        Err(format!("max deviation from RK4 {worst:.2e} > 1e-4"))
    }
}

fn weight_reductions() -> Outcome {
    let one = FractionalOrder::CLASSICAL;
    let h = 0.01;
    let rel = |got: f64, want: f64| ((got - want) / want).abs();
    let mut worst = 0.0f64;
    let mut checked = 0u64;
    // every k up to 200, then every 97th k up to 10^4, all j
    let ks = (0..=200).chain((201..=10_000).step_by(97)).chain([10_000]);
    for k in ks {
        for j in 0..=k {
            worst = worst.max(rel(
                predictor_weight(j, k, one, h).map_err(|e| e.to_string())?,
                h,
            ));
        }
        for j in 0..=k + 1 {
            let want = if j == 0 || j == k + 1 { h / 2.0 } else { h };
            worst = worst.max(rel(
                corrector_weight(j, k, one, h).map_err(|e| e.to_string())?,
                want,
            ));
        }
        checked += 2 * k as u64 + 3;
    }
    if worst <= 1e-15 {
        Ok(format!("{checked} weights, max relative error {worst:.1e}"))
    } else {
        Err(format!("max relative error {worst:.1e} > 1e-15"))
    }
}

fn decay_final(alpha: f64, h: f64) -> f64 {
    let sys = FnSystem::new(1, |_t, y: &[f64], dy: &mut [f64]| dy[0] = -y[0]);
    let grid = TimeGrid::new(h, (1.0 / h).round() as usize).unwrap();
    solve(&sys, &[1.0], order(alpha), grid)
        .unwrap()
        .final_state()[0]
}

fn convergence_order() -> Outcome {
    let started = Instant::now();
    let mut notes = Vec::new();
    let mut ok = true;
    for alpha in [0.5, 0.9] {
        let y: Vec<f64> = [0.02, 0.01, 0.005]
            .iter()
            .map(|&h| decay_final(alpha, h))
            .collect();
        let observed = ((y[0] - y[1]) / (y[1] - y[2])).abs().log2();
        ok &= observed >= 1.0 + alpha - 0.2;
        notes.push(format!(
            "alpha {alpha}: {observed:.3} (need {:.1})",
            1.0 + alpha - 0.2
        ));
    }
    let took = within(Duration::from_secs(5), started)?;
    let msg = format!("{} in {took:.2?}", notes.join(", "));
    if ok {
        Ok(msg)
    } else {
        Err(msg)
    }
}

fn simplex_conservation(traj: &Trajectory) -> Outcome {
    let mut defect = 0.0f64;
    let mut lowest = f64::INFINITY;
    for (_, y) in traj.iter() {
        let (dh, dv) = simplex_defect(&EpiState::from_slice(y));
        defect = defect.max(dh.abs()).max(dv.abs());
        lowest = y.iter().copied().fold(lowest, f64::min);
    }
    let msg = format!(
        "{} steps, max simplex defect {defect:.1e}, min component {lowest:.3e}",
        traj.len() - 1
    );
    if defect <= 1e-6 && lowest >= -1e-9 && traj.len() > 20_000 {
        Ok(msg)
    } else {
        Err(msg)
    }
}

fn r0_agreement() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(2024);
    let mut worst = 0.0f64;
    for _ in 0..1000 {
        let p = random_params(&mut rng);
        for a in [0.5, 0.7, 0.9, 1.0] {
            let closed = basic_reproduction_number(&p, order(a));
            let radius = next_generation(&p, order(a)).spectral_radius;
            worst = worst.max(((closed - radius) / closed).abs());
        }
    }
    let reference = basic_reproduction_number(&ModelParams::REFERENCE, FractionalOrder::CLASSICAL);
    let msg = format!("4000 cases, max relative gap {worst:.1e}; reference R0 = {reference}");
    if worst <= 1e-12 && (reference - 1.5).abs() <= 1e-12 {
        Ok(msg)
    } else {
        Err(msg)
    }
}

fn threshold_flip() -> Outcome {
    let mut notes = Vec::new();
    for a in [0.9, 1.0] {
        let o = order(a);
        let base = ModelParams::REFERENCE;
        let r0_base = basic_reproduction_number(&base, o);
        let mut last: Option<(f64, DfeVerdict)> = None;
        let mut flips = Vec::new();
        for i in 0..41 {
            let target = 0.5 + 0.025 * i as f64;
            // R0 scales as a^alpha
            let p = ModelParams {
                a: base.a * (target / r0_base).powf(1.0 / a),
                ..base
            };
            let r0 = basic_reproduction_number(&p, o);
            let v = spectrum_verdict(&dfe_eigenvalues(&p, o), o);
            let expected = if r0 < 1.0 - 1e-9 {
                Some(DfeVerdict::Stable)
            } else if r0 > 1.0 + 1e-9 {
                Some(DfeVerdict::Unstable)
            } else {
                None
            };
            match expected {
                Some(e) if e != v => return Err(format!("alpha {a}: R0 = {r0} gave {v:?}")),
                None if v == DfeVerdict::Stable => {
                    return Err(format!("alpha {a}: R0 = {r0} reported stable"))
                }
                _ => {}
            }
            if v == DfeVerdict::Marginal {
                continue;
            }
            if let Some((r_prev, v_prev)) = last {
                if v_prev != v {
                    flips.push((r_prev, r0));
                }
            }
            last = Some((r0, v));
        }
        match flips.as_slice() {
            [(lo, hi)] if *lo < 1.0 && *hi > 1.0 => {
                notes.push(format!("alpha {a}: flip in ({lo:.3}, {hi:.3})"))
            }
            other => return Err(format!("alpha {a}: flips {other:?}")),
        }
    }
    Ok(notes.join(", "))
}

fn endemic_point(classical: &Trajectory) -> Outcome {
    let e = endemic_equilibrium(&ModelParams::REFERENCE, FractionalOrder::CLASSICAL)
        .map_err(|e| e.to_string())?
        .ok_or("no endemic point")?;
    let dist: Vec<f64> = classical
        .iter()
        .map(|(_, y)| EpiState::from_slice(y).max_distance(&e.state))
        .collect();
    let last = *dist.last().unwrap();
    let rises = dist.windows(2).filter(|w| w[1] > w[0]).count();
    let msg = format!(
        "residual {:.1e}, final distance {last:.2e}, {rises} rising steps",
        e.residual
    );
    if e.residual <= 1e-10 && last <= 1e-2 && rises > 0 {
        Ok(msg)
    } else {
        Err(msg)
    }
}

fn worst_entry_error(analytic: &[f64], fd: &[f64]) -> f64 {
    let scale = analytic.iter().fold(0.0f64, |m, v| m.max(v.abs()));
    analytic
        .iter()
        .zip(fd)
        .map(|(x, y)| (x - y).abs() / x.abs().max(1e-3 * scale))
        .fold(0.0, f64::max)
}

fn jacobian_fidelity() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(99);
    let h = 1e-6;
    let (mut dfe_worst, mut end_worst) = (0.0f64, 0.0f64);
    let mut sets = 0;
    while sets < 100 {
        let p = random_params(&mut rng);
        let o = order(rng.gen_range(0.5..=1.0));
        if basic_reproduction_number(&p, o) <= 1.05 {
            continue;
        }
        let e = match endemic_equilibrium(&p, o).map_err(|e| e.to_string())? {
            Some(e) => e,
            None => continue,
        };
        sets += 1;

        let q = p.powered(o);
        let y = [1.0, 0.0, 0.0, 1.0, 0.0];
        let j5 = jacobian_dfe(&p, o);
        let mut fd5 = [0.0; 25];
        for col in 0..5 {
            let (mut up, mut down) = (y, y);
            up[col] += h;
            down[col] -= h;
            let (fu, fdn) = (rhs_powered(&up, &q), rhs_powered(&down, &q));
            for row in 0..5 {
                fd5[row + 5 * col] = (fu[row] - fdn[row]) / (2.0 * h);
            }
        }
        dfe_worst = dfe_worst.max(worst_entry_error(j5.as_slice(), &fd5));

        let x = [e.state.s_h, e.state.i_h, e.state.i_v];
        let j3 = jacobian_endemic(&p, o, &e.state);
        let mut fd3 = [0.0; 9];
        for col in 0..3 {
            let (mut up, mut down) = (x, x);
            up[col] += h;
            down[col] -= h;
            let (fu, fdn) = (reduced_rhs(&p, o, up), reduced_rhs(&p, o, down));
            for row in 0..3 {
                fd3[row + 3 * col] = (fu[row] - fdn[row]) / (2.0 * h);
            }
        }
        end_worst = end_worst.max(worst_entry_error(j3.as_slice(), &fd3));
    }
    let msg =
        format!("100 sets, worst relative error DFE {dfe_worst:.1e}, endemic {end_worst:.1e}");
    if dfe_worst <= 1e-5 && end_worst <= 1e-5 {
        Ok(msg)
    } else {
        Err(msg)
    }
}

/// Random cubic with known roots on a 1/64 grid, so the coefficients are exact.
fn random_cubic(rng: &mut impl Rng) -> (CubicCoefficients, [Complex64; 3]) {
    let mut dyadic = |lo: i32, hi: i32| rng.gen_range(lo * 64..=hi * 64) as f64 / 64.0;
    let roots = if dyadic(0, 1) < 0.5 {
        [0, 1, 2].map(|_| Complex64::new(dyadic(-5, 5), 0.0))
    } else {
        let (r, u, v) = (dyadic(-5, 5), dyadic(-5, 5), dyadic(0, 5).max(1.0 / 64.0));
        [
            Complex64::new(r, 0.0),
            Complex64::new(u, v),
            Complex64::new(u, -v),
        ]
    };
    (CubicCoefficients::from_roots(roots), roots)
}

fn discriminant_and_classifier() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    let mut worst = 0.0f64;
    for _ in 0..1000 {
        let (c, r) = random_cubic(&mut rng);
        let oracle = ((r[0] - r[1]) * (r[0] - r[2]) * (r[1] - r[2])).powi(2).re;
        let d = cubic_discriminant(&c);
        let err = if oracle == 0.0 {
            d.abs()
        } else {
            ((d - oracle) / oracle).abs()
        };
        worst = worst.max(err);
    }

    let mut fired = 0;
    for _ in 0..5000 {
        let (c, roots) = random_cubic(&mut rng);
        let o = order(rng.gen_range(0.05..=1.0));
        let class = classify_endemic(&c, cubic_discriminant(&c), o);
        if class.branch == PropositionBranch::I {
            fired += 1;
            if !roots.iter().all(|&z| matignon_stable(z, o)) {
                return Err(format!("branch (i) fired on {c:?} with roots {roots:?}"));
            }
        }
    }
    let msg = format!(
        "1000 cubics, max relative error {worst:.1e}; branch (i) fired {fired} times, all coherent"
    );
    if worst <= 1e-8 && fired > 0 {
        Ok(msg)
    } else {
        Err(msg)
    }
}

fn sweep_ordering(trajs: &[Trajectory]) -> Outcome {
    let dev: Vec<f64> = trajs[1..]
        .iter()
        .map(|t| t.max_deviation(&trajs[0]))
        .collect();
    let msg = format!(
        "deviation from alpha 1: 0.99 -> {:.4}, 0.95 -> {:.4}, 0.90 -> {:.4}",
        dev[0], dev[1], dev[2]
    );
    if dev[0] < dev[1] && dev[1] < dev[2] {
        Ok(msg)
    } else {
        Err(msg)
    }
}

fn main() -> ExitCode {
    let scenario = ScenarioConfig::default()
        .validate()
        .expect("default scenario is valid");
    let sweep = run_sweep(&scenario);
    let sweep_err = |e: &fracmal_cli::CliError| Err(format!("sweep failed: {e}"));
    let alpha_of = |t: &Trajectory| t.order().value();

    let results: Vec<(&str, Outcome)> = vec![
        ("1 classical limit vs RK4", classical_limit()),
        ("2 weight reductions at alpha = 1", weight_reductions()),
        ("3 convergence order", convergence_order()),
        (
            "4 simplex conservation",
            match &sweep {
                Ok(t) => simplex_conservation(t.iter().find(|t| alpha_of(t) == 0.9).unwrap()),
                Err(e) => sweep_err(e),
            },
        ),
        ("5 R0 agreement", r0_agreement()),
        ("6 threshold flip", threshold_flip()),
        (
            "7 endemic equilibrium",
            match &sweep {
                Ok(t) => endemic_point(&t[0]),
                Err(e) => sweep_err(e),
            },
        ),
        ("8 Jacobian fidelity", jacobian_fidelity()),
        (
            "9 discriminant and classifier",
            discriminant_and_classifier(),
        ),
        (
            "10 alpha sweep ordering",
            match &sweep {
                Ok(t) => sweep_ordering(t),
                Err(e) => sweep_err(e),
            },
        ),
    ];

    let mut failed = 0;
    for (name, outcome) in &results {
        match outcome {
            Ok(detail) => println!("PASS criterion {name}: {detail}"),
            Err(detail) => {
                failed += 1;
                println!("FAIL criterion {name}: {detail}");
            }
        }
    }
    println!(
        "{} of {} criteria passed",
        results.len() - failed,
        results.len()
    );
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
