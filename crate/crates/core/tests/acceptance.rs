//! End-to-end acceptance checks. Prints one PASS/FAIL line per criterion
//! and exits non-zero if any criterion fails.

use std::time::{Duration, Instant};

use hemispec::fem::{assemble, convergence_study, fem_index, mesh_flat_half_torus, solve_lowest};
use hemispec::spectra::{index_scan, jacobi_spectrum, radius_grid, strong_index, summarize_window, weak_index, Cutoff};
use hemispec::verify::{
    alencar_equality_witnesses, alencar_random_suite, alpha_h, cmc_family_scan, kato_random_suite,
    lambda1_bound_minimal, p_h, run_suite, CurvatureReading, Suite, SuiteOptions,
};
use hemispec::{HalvedFactor, ModelHypersurface};

type Check = Result<String, String>;

fn ensure(ok: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if ok {
        Ok(())
    } else {
        Err(msg())
    }
}

fn err(e: hemispec::Error) -> String {
    e.to_string()
}

const HALVINGS: [HalvedFactor; 2] = [HalvedFactor::First, HalvedFactor::Second];

fn equator_spectra() -> Check {
    for n in 2..=6 {
        let m = ModelHypersurface::equator(n).map_err(err)?;
        let s = jacobi_spectrum(&m, Cutoff::Lowest(2)).map_err(err)?;
        let (l1, l2) = (&s.lines[0], &s.lines[1]);
        ensure(l1.value == -(n as f64) && l1.multiplicity == 1, || format!("n={n}: lambda1 line {l1:?}"))?;
        ensure(l2.value == 0.0, || format!("n={n}: lambda2 = {}", l2.value))?;
        let idx = strong_index(&m).map_err(err)?.strong_index;
        ensure(idx == 1, || format!("n={n}: strong index {idx}"))?;
    }
    Ok("n = 2..6: lambda1 = -n simple, lambda2 = 0, index 1".into())
}

fn clifford_lambda1() -> Check {
    let mut worst: f64 = 0.0;
    let mut count = 0;
    for n in 2..=6 {
        for k in 1..n {
            for h in HALVINGS {
                let m = ModelHypersurface::minimal_clifford_half(n, k).map_err(err)?.with_halved(h);
                let rep = lambda1_bound_minimal(&m).map_err(err)?;
                ensure(rep.lambda1 == -2.0 * n as f64, || format!("{m}: lambda1 = {}", rep.lambda1))?;
                ensure(rep.equality && rep.pass, || format!("{m}: {rep:?}"))?;
                worst = worst.max(rep.slack.abs());
                count += 1;
            }
        }
    }
    ensure(worst < 1e-12, || format!("max |slack| = {worst:e}"))?;
    Ok(format!("{count} models, lambda1 = -2n, max |slack| = {worst:e}"))
}

fn index_adjudication() -> Check {
    let m = ModelHypersurface::minimal_clifford_half(2, 1).map_err(err)?;
    let r = fem_index(&m, 6).map_err(err)?;
    ensure(r.eigen.dof == 128 * 65, || format!("dof = {}", r.eigen.dof))?;
    ensure(r.engine_strong_index == 4 && r.strong_index == 4, || {
        format!("engine {} vs fem {}", r.engine_strong_index, r.strong_index)
    })?;
    ensure(r.max_negative_rel_error < 0.01, || format!("max rel error {}", r.max_negative_rel_error))?;
    ensure(r.paper_claim == Some(3) && r.discrepancy_flag, || format!("claim {:?}, flag {}", r.paper_claim, r.discrepancy_flag))?;
    Ok(format!(
        "engine = fem = 4 on {} dof, max rel error {:.2e}, stated 3 flagged",
        r.eigen.dof, r.max_negative_rel_error
    ))
}

fn cap_weak_stability() -> Check {
    for n in 2..=4 {
        for r in [0.3, 0.5, 0.8] {
            let m = ModelHypersurface::umbilical_cap(n, r).map_err(err)?;
            let w = weak_index(&m).map_err(err)?;
            let exact = -(n as f64) / (r * r);
            ensure(w.weak_index == 0, || format!("{m}: weak index {}", w.weak_index))?;
            ensure(w.lambda1_weak.abs() <= 1e-12, || format!("{m}: weak lambda1 {}", w.lambda1_weak))?;
            ensure((w.lambda1 - exact).abs() <= 1e-12, || format!("{m}: lambda1 {} vs {exact}", w.lambda1))?;
        }
    }
    Ok("9 caps: weak index 0, weak lambda1 = 0, lambda1 = -n/r^2".into())
}

fn htorus_window() -> Check {
    const STEP: f64 = 1e-3;
    let grid = radius_grid(STEP, 1.0 - STEP, STEP).map_err(err)?;
    let mut worst: f64 = 0.0;
    for (n, k) in [(2, 1), (3, 1), (3, 2), (4, 2)] {
        for h in HALVINGS {
            let rows = index_scan(n, k, h, &grid).map_err(err)?;
            let w = summarize_window(n, k, &rows).map_err(err)?;
            let dev = w.max_endpoint_deviation.ok_or_else(|| format!("({n},{k}): no window found"))?;
            ensure(!w.fragmented && dev <= STEP + 1e-12, || format!("({n},{k},{h:?}): {w:?}"))?;
            worst = worst.max(dev);
        }
    }
    Ok(format!("4 windows x 2 halvings, max endpoint deviation {worst:.1e} (step {STEP:e})"))
}

fn cmc_bound() -> Check {
    let scan = cmc_family_scan(2..=6, 0.01, CurvatureReading::Squared).map_err(err)?;
    ensure(!scan.is_empty(), || "empty scan".into())?;
    let mut min_off: f64 = f64::INFINITY;
    let mut max_on: f64 = 0.0;
    for rep in &scan {
        let m = &rep.family_params;
        let on = m.k() == Some(m.n() - 1);
        ensure(rep.slack >= -1e-9, || format!("{m}: slack {}", rep.slack))?;
        ensure((rep.slack.abs() < 1e-9) == on, || format!("{m}: equality {} off its family", rep.slack))?;
        let g = m.geometric_data();
        let ph = p_h(m.n(), g.h, g.norm_a0()).abs();
        if on {
            max_on = max_on.max(ph);
        } else {
            min_off = min_off.min(ph);
        }
    }
    ensure(max_on < 1e-9 && min_off > 1e-3, || format!("|P_H| on family {max_on:e}, off family {min_off:e}"))?;
    Ok(format!("{} points, |P_H| <= {max_on:.1e} on k = n-1, >= {min_off:.2e} elsewhere", scan.len()))
}

fn alpha_root() -> Check {
    let mut worst: f64 = 0.0;
    let mut count = 0;
    for n in 3..=12 {
        for j in 0..10 {
            let h = 0.5 * j as f64;
            worst = worst.max(p_h(n, h, alpha_h(n, h)).abs());
            count += 1;
        }
    }
    ensure(count == 100 && worst <= 1e-12, || format!("max |P_H(alpha_H)| = {worst:e}"))?;
    let mut zero: f64 = 0.0;
    for n in 2..=12 {
        zero = zero.max((alpha_h(n, 0.0) - (n as f64).sqrt()).abs());
    }
    ensure(zero <= 1e-14, || format!("max |alpha_H(n,0) - sqrt n| = {zero:e}"))?;
    Ok(format!("{count} grid points, max |P_H(alpha_H)| = {worst:.1e}, alpha_H(n,0) error {zero:.1e}"))
}

fn identity_suite() -> Check {
    let opts = SuiteOptions::default();
    let mut reports = run_suite(Suite::Identities, &opts).map_err(err)?;
    reports.extend(run_suite(Suite::Algebra, &opts).map_err(err)?);
    let (mut fd, mut alg): (f64, f64) = (0.0, 0.0);
    for r in &reports {
        let hemispec::report::Report::Identity(r) = r else { continue };
        let finite_difference = ["position_identities", "boundary_identities"].iter().any(|p| r.name.starts_with(p));
        if r.name.starts_with("position_identities") {
            ensure(r.samples == 1000, || format!("{}: {} samples", r.name, r.samples))?;
        }
        let tol = if finite_difference { 1e-5 } else { 1e-10 };
        ensure(r.max_residual <= tol, || format!("{}: {:e} > {tol:e}", r.name, r.max_residual))?;
        if finite_difference {
            fd = fd.max(r.max_residual);
        } else {
            alg = alg.max(r.max_residual);
        }
    }
    Ok(format!("{} reports, max FD residual {fd:.1e}, max algebraic {alg:.1e}", reports.len()))
}

fn inequality_suites() -> Check {
    let reports = alencar_random_suite(8, 100_000, 42);
    ensure(reports.len() == 7, || format!("{} alencar reports", reports.len()))?;
    for r in &reports {
        ensure(r.samples == 100_000 && r.max_residual <= 1e-12, || format!("{}: {:e}", r.name, r.max_residual))?;
    }
    let w = alencar_equality_witnesses(8);
    ensure(w.max_residual <= 1e-12, || format!("witnesses: {:e}", w.max_residual))?;
    let k = kato_random_suite(100, 3, 8, 42);
    ensure(k.max_residual <= 1e-10, || format!("kato: {:e}; {}", k.max_residual, k.notes))?;
    Ok(format!("alencar 7 x 1e5 clean, witnesses {:.1e}, kato 100 fields clean", w.max_residual))
}

fn fem_convergence() -> Check {
    let rows = convergence_study(&ModelHypersurface::equator(2).map_err(err)?, &[3, 4, 5, 6]).map_err(err)?;
    let mut orders = Vec::new();
    for pair in rows.windows(2) {
        let (p, c) = (&pair[0], &pair[1]);
        ensure(c.lambda2_error < p.lambda2_error, || format!("error grew at refine {}", c.refine))?;
        let o = c.order_lambda2.ok_or("missing order")?;
        ensure((1.7..=2.3).contains(&o), || format!("refine {}: order {o}", c.refine))?;
        orders.push(format!("{o:.3}"));
    }
    ensure(rows.iter().all(|r| r.lambda1_error < 1e-9), || "constant mode not reproduced".into())?;
    let s = 0.5f64.sqrt();
    let a = assemble(&mesh_flat_half_torus(s, s, 128, 64).map_err(err)?).map_err(err)?;
    let r = solve_lowest(&a.stiffness, &a.mass, 10).map_err(err)?;
    let mut exact: Vec<f64> = (-4i64..=4).flat_map(|p| (0..=4i64).map(move |q| (2 * p * p + 2 * q * q) as f64)).collect();
    exact.sort_by(f64::total_cmp);
    let mut worst: f64 = r.eigenvalues[0].abs();
    for (f, e) in r.eigenvalues.iter().zip(&exact).skip(1) {
        let rel = (f - e).abs() / e;
        ensure(rel < 0.01, || format!("torus mode {f} vs {e}"))?;
        worst = worst.max(rel);
    }
    Ok(format!("hemisphere orders [{}], torus modes within {:.2}%", orders.join(", "), 100.0 * worst))
}

fn main() {
    let criteria: [(&str, fn() -> Check, Duration); 10] = [
        ("equator spectra", equator_spectra, Duration::from_secs(1)),
        ("half Clifford lambda1", clifford_lambda1, Duration::from_secs(1)),
        ("index adjudication", index_adjudication, Duration::from_secs(30)),
        ("cap weak stability", cap_weak_stability, Duration::from_secs(1)),
        ("H-torus radius window", htorus_window, Duration::from_secs(10)),
        ("CMC lambda1 bound", cmc_bound, Duration::from_secs(10)),
        ("alpha_H and P_H", alpha_root, Duration::from_secs(1)),
        ("identity suite", identity_suite, Duration::from_secs(60)),
        ("inequality suites", inequality_suites, Duration::from_secs(30)),
        ("FEM convergence", fem_convergence, Duration::from_secs(60)),
    ];
    let mut failed = 0;
    for (i, (name, check, budget)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let result = check();
        let elapsed = start.elapsed();
        let (ok, detail) = match result {
            Ok(d) if elapsed <= *budget => (true, d),
            Ok(d) => (false, format!("{d}; over budget {budget:?}")),
            Err(e) => (false, e),
        };
        failed += usize::from(!ok);
        println!(
            "criterion {:>2} {}: {name}: {detail} [{:.2} s]",
            i + 1,
            if ok { "PASS" } else { "FAIL" },
            elapsed.as_secs_f64()
        );
    }
    if failed > 0 {
        println!("{failed} criteria failed");
        std::process::exit(1);
    }
}
