//! Acceptance suite: one test per criterion, each printing a PASS or FAIL
//! line (run with `--nocapture` to see them on success).
//!
//! The tests pin every tolerance in code and compare against independent
//! oracles: analytic 1D solutions, long fixed-λ reference solves, a
//! circulant-spectrum oracle for operator norms, and brute-force grid
//! search for the prox.

use std::time::Instant;

use fpc_cli::experiment::{build_deblur, standard_schedules, wide_range_schedule, ExperimentConfig};
use fpc_cli::spec::GridSpec;
use fpc_core::{
    adjoint_residual, compose, operator_norm_sq, path_vs_curve, rate_bound_check, reference_curve,
    slope_check, solve_continuation, CompositeProblem, Conv2dPeriodic, ConvKernel, DenseMatrix,
    DetRng, Dwt2d, HalfSquaredDistance, L1Norm, LambdaSchedule, LeastSquares, ProxTerm,
    SmoothTerm, SolverConfig, Vector,
};

fn report(criterion: &str, pass: bool, details: &str) {
    println!(
        "ACCEPTANCE {criterion}: {} ({details})",
        if pass { "PASS" } else { "FAIL" }
    );
}

/// min ½(u−2)² + λ|u| with analytic minimizer û = 2 − λ (for λ < 2).
fn one_d_problem(lambda: f64) -> CompositeProblem<HalfSquaredDistance, L1Norm> {
    CompositeProblem::new(
        HalfSquaredDistance::new(Vector::new(vec![2.0])),
        L1Norm,
        lambda,
    )
    .unwrap()
}

/// Seeded 8-dimensional least-squares + ℓ1 instance. The matrix is a random
/// perturbation of the identity so its smallest singular value stays well
/// away from zero and fixed-λ solves converge linearly.
fn eight_dim_problem(lambda: f64) -> CompositeProblem<LeastSquares<DenseMatrix>, L1Norm> {
    let mut rng = DetRng::new(2024);
    let dim = 8;
    let mut entries = vec![0.0f64; dim * dim];
    for (k, e) in entries.iter_mut().enumerate() {
        let diag = if k % (dim + 1) == 0 { 1.0 } else { 0.0 };
        *e = diag + 0.35 * rng.next_symmetric();
    }
    let matrix = DenseMatrix::new(dim, dim, entries).unwrap();
    let target = Vector::new((0..dim).map(|_| rng.next_range(-1.0, 1.0)).collect());
    let smooth = LeastSquares::new(matrix, target).unwrap();
    CompositeProblem::new(smooth, L1Norm, lambda).unwrap()
}

/// High-accuracy reference minimizer by a long fixed-λ solve.
fn reference_minimizer<F: SmoothTerm, G: ProxTerm>(
    p: &CompositeProblem<F, G>,
    u0: &Vector,
) -> Vector {
    let mut cfg = SolverConfig::new(1.0 / p.f.lipschitz());
    cfg.max_iter = 1_000_000;
    cfg.step_tol = 1e-12;
    cfg.record_every = Some(100_000);
    let res = solve_continuation(p, &LambdaSchedule::Constant { target: p.lambda }, u0, &cfg)
        .expect("reference solve");
    assert!(res.converged, "reference solve did not reach tol 1e-12");
    res.u_hat
}

// ---------------------------------------------------------------------------
// Criterion 1: iterate convergence under every summable schedule and step
// size, against analytic/reference minimizers.
// ---------------------------------------------------------------------------
fn run_schedule_step_combos<F: SmoothTerm, G: ProxTerm>(
    label: &str,
    p: &CompositeProblem<F, G>,
    u0: &Vector,
    u_ref: &Vector,
    tol: f64,
    max_iter: usize,
    failures: &mut Vec<String>,
) {
    for (kind, schedule) in standard_schedules(p.lambda) {
        for frac in [0.5, 1.0, 1.9] {
            let mut cfg = SolverConfig::new(frac / p.f.lipschitz());
            cfg.max_iter = max_iter;
            cfg.step_tol = 1e-12;
            cfg.record_every = Some(max_iter);
            let res = solve_continuation(p, &schedule, u0, &cfg).expect("solve");
            let err = res.u_hat.dist(u_ref);
            if !(err <= tol) {
                failures.push(format!(
                    "{label}/{kind}/alpha={frac}/L: error {err:.3e} after {} iterations",
                    res.iterations
                ));
            }
        }
    }
}

#[test]
fn criterion_1_convergence_to_minimizer() {
    let started = Instant::now();
    let tol = 1e-7;
    let max_iter = 10_000;
    let mut failures: Vec<String> = Vec::new();

    let p1 = one_d_problem(0.5);
    let u_ref1 = Vector::new(vec![1.5]);
    run_schedule_step_combos("1d", &p1, &Vector::zeros(1), &u_ref1, tol, max_iter, &mut failures);

    let p8 = eight_dim_problem(0.5);
    let u0 = Vector::zeros(8);
    let u_ref8 = reference_minimizer(&p8, &u0);
    assert!(
        u_ref8.norm() > 1e-3,
        "degenerate 8-dim instance: reference minimizer is zero"
    );
    run_schedule_step_combos("8d", &p8, &u0, &u_ref8, tol, max_iter, &mut failures);

    let elapsed = started.elapsed().as_secs_f64();
    let runtime_ok = elapsed < 5.0;
    let pass = failures.is_empty() && runtime_ok;
    report(
        "1 (iterate convergence)",
        pass,
        &format!(
            "{} of 18 schedule/step combinations within 1e-7, runtime {elapsed:.2}s",
            18 - failures.len()
        ),
    );
    assert!(
        runtime_ok,
        "criterion 1 exceeded its 5 s budget: {elapsed:.2}s"
    );
    assert!(
        failures.is_empty(),
        "criterion 1 failures:\n  {}",
        failures.join("\n  ")
    );
}

/// Companion evidence for the power-schedule rows of criterion 1: the
/// λ(1 + β/(n+1)^θ) schedule with θ = 1.01 has |λ_n − λ| = βλ/(n+1)^1.01,
/// so driving the iterate error to 1e-7 needs (βλ/1e-7)^(1/1.01) ≈ 3.8e7
/// iterations — far beyond the 1e4 budget above, for any implementation.
/// Given that budget, the same solver does reach 1e-7.
#[test]
fn criterion_1_supplement_power_schedule_needs_its_full_horizon() {
    let lambda = 0.5;
    let p = one_d_problem(lambda);
    let schedule = LambdaSchedule::Power {
        target: lambda,
        beta: 9.0,
        theta: 1.01,
    };
    let budget = 38_000_000usize;
    let mut cfg = SolverConfig::new(1.0); // α = 1/L
    cfg.max_iter = budget;
    cfg.step_tol = 0.0;
    cfg.record_every = Some(budget);
    let res = solve_continuation(&p, &schedule, &Vector::zeros(1), &cfg).expect("solve");
    let err = (res.u_hat[0] - 1.5).abs();
    // with α = 1/L the iterate tracks the schedule exactly: u_N = 2 − λ_{N−1}
    let predicted = schedule.eval(budget - 1) - lambda;
    report(
        "1-supplement (power schedule, extended budget)",
        err <= 1e-7,
        &format!("error {err:.3e} after {budget} iterations (tracking floor {predicted:.3e})"),
    );
    assert!(
        (err - predicted).abs() <= 1e-12,
        "iterate should track the schedule exactly: err {err:.3e}, predicted {predicted:.3e}"
    );
    assert!(err <= 1e-7, "error {err:.3e} after {budget} iterations");
}

// ---------------------------------------------------------------------------
// Criterion 7: constant-schedule continuation is bitwise-level identical to
// a plain hand-rolled ISTA loop.
// ---------------------------------------------------------------------------
#[test]
fn criterion_7_baseline_equivalence_with_plain_ista() {
    let p = eight_dim_problem(0.5);
    let alpha = 0.8 / p.f.lipschitz();
    let iters = 1000;
    let mut cfg = SolverConfig::new(alpha);
    cfg.max_iter = iters;
    cfg.step_tol = -1.0; // never stop on step size: compare all 1000 iterates
    cfg.store_iterates = true;
    cfg.record_every = Some(iters);
    let res = solve_continuation(
        &p,
        &LambdaSchedule::Constant { target: p.lambda },
        &Vector::zeros(8),
        &cfg,
    )
    .expect("solve");
    assert_eq!(res.iterations, iters);
    assert_eq!(res.iterates.len(), iters);

    // independently coded plain ISTA recursion
    let mut u = Vector::zeros(8);
    let mut max_dev = 0.0f64;
    for k in 0..iters {
        let grad = p.f.gradient(&u);
        let mut fwd = u.clone();
        fwd.add_scaled(-alpha, &grad);
        u = p.g.prox(&fwd, alpha * p.lambda);
        max_dev = max_dev.max(res.iterates[k].dist(&u));
    }
    report(
        "7 (baseline ISTA equivalence)",
        max_dev <= 1e-14,
        &format!("max iterate deviation {max_dev:.3e} over {iters} iterations"),
    );
    assert!(max_dev <= 1e-14, "deviation {max_dev:.3e}");
}

// ---------------------------------------------------------------------------
// Criterion 3: ε-certificate dominates the measured proximal suboptimality
// at every iteration of a monitored geometric-offset run.
// ---------------------------------------------------------------------------
#[test]
fn criterion_3_epsilon_certificate_dominates_gap() {
    let mut worst_slack = f64::NEG_INFINITY;
    let mut checked = 0usize;

    // 1d instance
    let p = one_d_problem(0.5);
    let schedule = LambdaSchedule::GeometricOffset {
        target: 0.5,
        beta: 0.9,
        mu: 9.0,
    };
    let mut cfg = SolverConfig::new(0.9 / p.f.lipschitz());
    cfg.max_iter = 3000;
    cfg.step_tol = 1e-13;
    cfg.epsilon_certificate = true;
    let res = solve_continuation(&p, &schedule, &Vector::zeros(1), &cfg).expect("solve");
    for t in &res.trace {
        let (gap, eps) = (t.gap_n.unwrap(), t.eps_n.unwrap());
        assert!(
            gap <= eps + 1e-12,
            "1d n={}: gap {gap:.3e} > eps {eps:.3e}",
            t.n
        );
        assert!(gap >= -1e-12, "1d n={}: negative gap {gap:.3e}", t.n);
        worst_slack = worst_slack.max(gap - eps);
        checked += 1;
    }

    // 8-dim instance
    let p = eight_dim_problem(0.5);
    let schedule = LambdaSchedule::GeometricOffset {
        target: 0.5,
        beta: 0.9,
        mu: 9.0,
    };
    let mut cfg = SolverConfig::new(0.9 / p.f.lipschitz());
    cfg.max_iter = 5000;
    cfg.step_tol = 1e-13;
    cfg.epsilon_certificate = true;
    let res = solve_continuation(&p, &schedule, &Vector::zeros(8), &cfg).expect("solve");
    let mut saw_positive = false;
    for t in &res.trace {
        let (gap, eps) = (t.gap_n.unwrap(), t.eps_n.unwrap());
        assert!(
            gap <= eps + 1e-12,
            "8d n={}: gap {gap:.3e} > eps {eps:.3e}",
            t.n
        );
        assert!(gap >= -1e-12, "8d n={}: negative gap {gap:.3e}", t.n);
        if gap > 0.0 {
            saw_positive = true;
        }
        worst_slack = worst_slack.max(gap - eps);
        checked += 1;
    }
    assert!(saw_positive, "certificate never exercised on the 8-dim run");
    report(
        "3 (epsilon-certificate)",
        true,
        &format!("gap <= eps + 1e-12 at all {checked} iterations, worst gap - eps = {worst_slack:.3e}"),
    );
}

// ---------------------------------------------------------------------------
// Criterion 2: ergodic rate bound holds at every recorded iteration on the
// 8-dim instance and a 32x32 deblurring instance, alpha = 0.9/L.
// ---------------------------------------------------------------------------
#[test]
fn criterion_2_rate_bound_holds() {
    let mut details = Vec::new();

    // 8-dim instance, constant schedule (classical ergodic bound) and a
    // geometric-offset schedule (perturbed bound with lambda_bar > 0)
    let p = eight_dim_problem(0.5);
    let u0 = Vector::zeros(8);
    let u_ref = reference_minimizer(&p, &u0);
    let alpha = 0.9 / p.f.lipschitz();
    for schedule in [
        LambdaSchedule::Constant { target: 0.5 },
        LambdaSchedule::GeometricOffset {
            target: 0.5,
            beta: 0.9,
            mu: 9.0,
        },
    ] {
        let mut cfg = SolverConfig::new(alpha);
        cfg.max_iter = 10_000;
        cfg.step_tol = 1e-13;
        cfg.rate_monitor = true;
        let res = solve_continuation(&p, &schedule, &u0, &cfg).expect("solve");
        assert!(!res.ergodic.is_empty());
        let m = res.m_for_reference(p.g.value(&u_ref));
        let rep = rate_bound_check(
            &p,
            &res.ergodic,
            &u0,
            &u_ref,
            alpha,
            schedule.summability(),
            m,
        )
        .expect("rate bound check");
        assert!(
            rep.ok,
            "8d/{}: min margin {:.3e}",
            schedule.kind_name(),
            rep.min_margin
        );
        details.push(format!(
            "8d/{} margin {:.2e} over {} points",
            schedule.kind_name(),
            rep.min_margin,
            rep.entries.len()
        ));
    }

    // 32x32 deblur instance with a wide-range schedule rescaled to target
    // 1e-2, alpha = 0.9/L
    let cfg_exp = ExperimentConfig {
        image_size: 32,
        ..ExperimentConfig::default()
    };
    let setup = build_deblur(&cfg_exp).unwrap();
    let lambda = 1e-2;
    let problem = setup.problem(lambda).unwrap();
    let alpha = 0.9 / setup.lipschitz;
    let schedule = wide_range_schedule(lambda, 1e-1);

    let mut ref_cfg = SolverConfig::new(1.0 / setup.lipschitz);
    ref_cfg.max_iter = 1_000_000;
    ref_cfg.step_tol = 1e-12;
    ref_cfg.record_every = Some(100_000);
    let reference = solve_continuation(
        &problem,
        &LambdaSchedule::Constant { target: lambda },
        &setup.start,
        &ref_cfg,
    )
    .expect("deblur reference solve");
    assert!(reference.converged, "deblur reference did not converge");

    let mut cfg = SolverConfig::new(alpha);
    cfg.max_iter = 4000;
    cfg.step_tol = 1e-12;
    cfg.rate_monitor = true;
    let res = solve_continuation(&problem, &schedule, &setup.start, &cfg).expect("solve");
    let m = res.m_for_reference(problem.g.value(&reference.u_hat));
    let rep = rate_bound_check(
        &problem,
        &res.ergodic,
        &setup.start,
        &reference.u_hat,
        alpha,
        schedule.summability(),
        m,
    )
    .expect("rate bound check");
    assert!(
        rep.ok,
        "deblur 32: min margin {:.3e} (first entries: {:?})",
        rep.min_margin,
        &rep.entries[..rep.entries.len().min(3)]
    );
    details.push(format!(
        "deblur32 margin {:.2e} over {} points",
        rep.min_margin,
        rep.entries.len()
    ));

    report("2 (ergodic rate bound)", true, &details.join("; "));
}

// ---------------------------------------------------------------------------
// Criterion 6: operator suite against oracles.
// ---------------------------------------------------------------------------

/// Circulant-spectrum oracle: the eigenvalues of periodic convolution are
/// the 2D DFT of the kernel embedded (centered) on the grid; the squared
/// operator norm is the largest squared magnitude.
fn circulant_norm_sq_oracle(kernel: &ConvKernel, h: usize, w: usize) -> f64 {
    let side = kernel.side() as isize;
    let c = side / 2;
    let mut embedded = vec![0.0f64; h * w];
    for a in 0..side {
        for b in 0..side {
            let r = (a - c).rem_euclid(h as isize) as usize;
            let col = (b - c).rem_euclid(w as isize) as usize;
            embedded[r * w + col] += kernel.taps()[(a * side + b) as usize];
        }
    }
    let mut max_sq = 0.0f64;
    for p in 0..h {
        for q in 0..w {
            let (mut re, mut im) = (0.0f64, 0.0f64);
            for i in 0..h {
                for j in 0..w {
                    let phase = -2.0 * std::f64::consts::PI
                        * (p as f64 * i as f64 / h as f64 + q as f64 * j as f64 / w as f64);
                    re += embedded[i * w + j] * phase.cos();
                    im += embedded[i * w + j] * phase.sin();
                }
            }
            max_sq = max_sq.max(re * re + im * im);
        }
    }
    max_sq
}

/// Brute-force 1D prox oracle: coarse grid pass then a fine pass around the
/// best coarse cell; pure enumeration of ½(p−a)² + t|p|.
fn prox_oracle_1d(a: f64, t: f64) -> f64 {
    let eval = |p: f64| 0.5 * (p - a) * (p - a) + t * p.abs();
    let (lo, hi) = (-4.0f64, 4.0f64);
    let coarse = 1e-3;
    let mut best = lo;
    let mut best_val = eval(lo);
    let mut p = lo;
    while p <= hi {
        let v = eval(p);
        if v < best_val {
            best_val = v;
            best = p;
        }
        p += coarse;
    }
    let fine = 1e-7;
    let mut refined = best;
    let mut refined_val = best_val;
    let mut p = best - coarse;
    while p <= best + coarse {
        let v = eval(p);
        if v < refined_val {
            refined_val = v;
            refined = p;
        }
        p += fine;
    }
    refined
}

#[test]
fn criterion_6_operator_suite() {
    let mut rng = DetRng::new(606);
    let mut details = Vec::new();

    // adjoint consistency on 100 seeded pairs each
    let kernel = ConvKernel::new((0..25).map(|_| rng.next_symmetric()).collect(), 5).unwrap();
    let conv = Conv2dPeriodic::new(kernel.clone(), 16, 16).unwrap();
    let dwt = Dwt2d::new(16, 16, 3).unwrap();
    let composed = compose(conv.clone(), dwt.synthesis()).unwrap();
    let mut max_adj = 0.0f64;
    for _ in 0..100 {
        let x = Vector::random_symmetric(256, &mut rng);
        let y = Vector::random_symmetric(256, &mut rng);
        max_adj = max_adj.max(adjoint_residual(&conv, &x, &y));
        max_adj = max_adj.max(adjoint_residual(&dwt, &x, &y));
        max_adj = max_adj.max(adjoint_residual(&composed, &x, &y));
    }
    assert!(max_adj <= 1e-10, "adjoint residual {max_adj:.3e}");
    details.push(format!("adjoint {max_adj:.1e}"));

    // wavelet roundtrip
    let mut max_rt = 0.0f64;
    for _ in 0..50 {
        let v = Vector::random_symmetric(256, &mut rng);
        let rt = dwt.inverse(&dwt.forward(&v)).dist(&v) / v.norm().max(1.0);
        max_rt = max_rt.max(rt);
    }
    assert!(max_rt <= 1e-10, "roundtrip error {max_rt:.3e}");
    details.push(format!("roundtrip {max_rt:.1e}"));

    // power iteration vs circulant-spectrum oracle on 16x16 grids
    let mut max_norm_dev = 0.0f64;
    for seed in [1u64, 2, 3] {
        let mut krng = DetRng::new(seed);
        let k = if seed == 1 {
            ConvKernel::gaussian(5, 1.0).unwrap()
        } else {
            ConvKernel::new((0..25).map(|_| krng.next_symmetric()).collect(), 5).unwrap()
        };
        let op = Conv2dPeriodic::new(k.clone(), 16, 16).unwrap();
        let est = operator_norm_sq(&op, 1e-12, 50_000, 42).unwrap();
        let oracle = circulant_norm_sq_oracle(&k, 16, 16);
        let rel = (est - oracle).abs() / oracle;
        max_norm_dev = max_norm_dev.max(rel);
        assert!(
            rel <= 1e-6,
            "norm estimate {est} vs oracle {oracle}: rel {rel:.3e}"
        );
    }
    details.push(format!("norm vs spectrum {max_norm_dev:.1e}"));

    // soft-threshold prox against the brute-force oracle at 1000 points
    let l1 = L1Norm;
    let mut max_prox_dev = 0.0f64;
    for _ in 0..1000 {
        let a = rng.next_range(-3.0, 3.0);
        let t = rng.next_range(0.01, 1.2);
        let got = l1.prox(&Vector::new(vec![a]), t)[0];
        let want = prox_oracle_1d(a, t);
        max_prox_dev = max_prox_dev.max((got - want).abs());
    }
    assert!(max_prox_dev <= 1e-5, "prox deviation {max_prox_dev:.3e}");
    details.push(format!("prox {max_prox_dev:.1e}"));

    report("6 (operator suite)", true, &details.join(", "));
}

// ---------------------------------------------------------------------------
// Criterion 4: trade-off-curve properties on the 32x32 deblur problem and
// exact slopes on the 1D analytic problem.
// ---------------------------------------------------------------------------
#[test]
fn criterion_4_curve_properties() {
    // 1D analytic problem: φ(τ) = ½(2−τ)² is quadratic, so centered slopes
    // on the symmetric grid equal −λ exactly
    let f = HalfSquaredDistance::new(Vector::new(vec![2.0]));
    let g = L1Norm;
    let mut cfg = SolverConfig::new(1.0);
    cfg.step_tol = 1e-13;
    cfg.max_iter = 10_000;
    let analytic = reference_curve(&f, &g, &[1.5, 1.0, 0.5], &Vector::zeros(1), &cfg, true)
        .expect("1d curve");
    let slopes = slope_check(&analytic).expect("slope check");
    assert_eq!(slopes.entries.len(), 1);
    let dev_1d = slopes.entries[0].rel_deviation;
    assert!(dev_1d <= 1e-12, "1d slope deviation {dev_1d:.3e}");

    // 32x32 deblur reference curve: 30 log-spaced λ in [1e-3, 1e-1]
    let cfg_exp = ExperimentConfig {
        image_size: 32,
        ..ExperimentConfig::default()
    };
    let setup = build_deblur(&cfg_exp).unwrap();
    let grid = GridSpec {
        min: 1e-3,
        max: 1e-1,
        count: 30,
    }
    .descending();
    let mut gcfg = setup.solver_config(60_000);
    gcfg.step_tol = 1e-11;
    gcfg.record_every = Some(60_000);
    let curve = reference_curve(
        &setup.smooth,
        &setup.penalty,
        &grid,
        &setup.start,
        &gcfg,
        true,
    )
    .expect("deblur curve");
    assert_eq!(curve.points.len(), 30);
    let unconverged = curve.points.iter().filter(|p| !p.converged).count();

    let mut worst_mono = f64::NEG_INFINITY;
    for pair in curve.points.windows(2) {
        worst_mono = worst_mono.max(pair[1].f_val - pair[0].f_val);
    }
    let seg_slopes: Vec<f64> = curve
        .points
        .windows(2)
        .map(|p| (p[1].f_val - p[0].f_val) / (p[1].tau - p[0].tau))
        .collect();
    let mut worst_convex = f64::NEG_INFINITY;
    for pair in seg_slopes.windows(2) {
        worst_convex = worst_convex.max(pair[0] - pair[1]);
    }
    let mono_ok = worst_mono <= 1e-10;
    let convex_ok = worst_convex <= 1e-8;
    report(
        "4 (trade-off curve properties)",
        mono_ok && convex_ok,
        &format!(
            "1d slope dev {dev_1d:.1e}; 32x32: worst f increase {worst_mono:.2e}, \
             worst slope drop {worst_convex:.2e}, {unconverged} unconverged grid solves"
        ),
    );
    assert!(mono_ok, "curve not non-increasing: worst {worst_mono:.3e}");
    assert!(
        convex_ok,
        "curve not discretely convex: worst slope drop {worst_convex:.3e}"
    );
}

// ---------------------------------------------------------------------------
// Criterion 5: qualitative reproduction at 64x64 — the three standard
// schedules stop at the same point of the curve, and the wide-range path
// stays close to the reference curve.
// ---------------------------------------------------------------------------
#[test]
fn criterion_5_qualitative_reproduction_64() {
    let started = Instant::now();
    let cfg_exp = ExperimentConfig {
        image_size: 64,
        ..ExperimentConfig::default()
    };
    let setup = build_deblur(&cfg_exp).unwrap();

    // reference curve and corner pick
    let grid = GridSpec {
        min: 1e-3,
        max: 1e-1,
        count: 30,
    }
    .descending();
    let mut gcfg = setup.solver_config(8000);
    gcfg.step_tol = 1e-10;
    gcfg.record_every = Some(8000);
    let curve = reference_curve(
        &setup.smooth,
        &setup.penalty,
        &grid,
        &setup.start,
        &gcfg,
        true,
    )
    .expect("curve");
    let lambda = fpc_cli::experiment::lcurve_corner(&curve).unwrap().lambda;

    // the three standard schedules; the power schedule's λ_n settles
    // polynomially, so it gets a longer budget than the geometric pair
    let budgets = [200_000usize, 20_000, 20_000];
    let mut finals: Vec<(String, f64, f64)> = Vec::new();
    for ((label, schedule), budget) in standard_schedules(lambda).into_iter().zip(budgets) {
        let problem = setup.problem(lambda).unwrap();
        let mut cfg = setup.solver_config(budget);
        cfg.step_tol = 1e-11;
        cfg.record_every = Some(budget);
        let res = solve_continuation(&problem, &schedule, &setup.start, &cfg).expect("solve");
        let last = res.final_trace().unwrap();
        finals.push((label.to_string(), last.g, last.f));
    }
    let scale = (finals[0].1 * finals[0].1 + finals[0].2 * finals[0].2).sqrt();
    let mut max_pair_dist = 0.0f64;
    for i in 0..finals.len() {
        for j in i + 1..finals.len() {
            let d = ((finals[i].1 - finals[j].1).powi(2) + (finals[i].2 - finals[j].2).powi(2))
                .sqrt()
                / scale;
            max_pair_dist = max_pair_dist.max(d);
        }
    }
    let same_point_ok = max_pair_dist <= 1e-4;

    // wide-range path against the curve
    let wide = wide_range_schedule(1e-3, 1e-1);
    let problem = setup.problem(1e-3).unwrap();
    let mut cfg = setup.solver_config(5000);
    cfg.step_tol = 1e-11;
    let res = solve_continuation(&problem, &wide, &setup.start, &cfg).expect("solve");
    let path = path_vs_curve(&res.trace, &curve).expect("path comparison");
    let max_excess = path.max_rel_excess.unwrap_or(f64::INFINITY);
    let over = path
        .entries
        .iter()
        .filter(|e| e.rel_excess > 0.05)
        .count();
    let excess_ok = max_excess < 0.05;

    let elapsed = started.elapsed().as_secs_f64();
    let runtime_ok = elapsed < 300.0;
    report(
        "5 (qualitative reproduction, 64x64)",
        same_point_ok && excess_ok && runtime_ok,
        &format!(
            "endpoint distance {max_pair_dist:.2e} (<=1e-4), wide-path max excess {max_excess:.4} \
             ({over} of {} points over 5%, {} clipped), runtime {elapsed:.0}s",
            path.entries.len(),
            path.clipped
        ),
    );
    assert!(runtime_ok, "criterion 5 exceeded 5 min: {elapsed:.0}s");
    assert!(
        same_point_ok,
        "schedules do not stop at the same point: {max_pair_dist:.3e}"
    );
    assert!(
        excess_ok,
        "wide-range path excess {max_excess:.4} exceeds 5%"
    );
}
