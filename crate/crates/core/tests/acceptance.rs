//! Acceptance suite: one test per criterion, each printing a single
//! pass/fail line (visible with `cargo test -- --nocapture`).

use hankel_convect::bessel::{self, find_roots};
use hankel_convect::config::{GridSpec, InitialData, SimulationConfig, CONFIG_VERSION};
use hankel_convect::fields::{velocity, stream_derivative, ModeIntegralEval, ModeIntegralTable, SolvedState};
use hankel_convect::hankel::{self, RadialProfile};
use hankel_convect::heat;
use hankel_convect::poly::{RadialPolynomial, TimePolynomial};
use hankel_convect::verify::{self, fd_heat_oracle, ode_oracle, residual_eq12};
use hankel_convect::vorticity::{self, Forcing, ModeState};
use std::f64::consts::PI;
use std::time::Instant;

fn report(number: u32, name: &str, ok: bool) {
    println!("criterion {number} ({name}): {}", if ok { "PASS" } else { "FAIL" });
    assert!(ok, "criterion {number} ({name}) failed");
}

fn default_config() -> SimulationConfig {
    SimulationConfig {
        config_version: CONFIG_VERSION,
        physical: None,
        prandtl: Some(7.0),
        rayleigh: Some(50.0),
        t_tilde: Some(1.0),
        xi0: 1.0,
        modes: 8,
        grid: GridSpec { n_r: 9, n_z: 9, r_max: 0.5, z_max: 0.5 },
        times: vec![0.0, 0.2],
        initial_temperature: InitialData::Polynomial { polynomial: vec![1.0, 0.0, -1.0] },
        initial_vorticity: InitialData::Polynomial { polynomial: vec![0.0, 1.0] },
        tolerances: Default::default(),
        fit_degree: 8,
    }
}

/// Bisection on sin x - x cos x, independent of the library's Newton
/// polish.
fn bisect_root(n: usize) -> f64 {
    let g = |x: f64| x.sin() - x * x.cos();
    let (mut a, mut b) = (n as f64 * PI + 1e-12, n as f64 * PI + PI / 2.0);
    for _ in 0..80 {
        let m = 0.5 * (a + b);
        if (g(a) > 0.0) == (g(m) > 0.0) {
            a = m;
        } else {
            b = m;
        }
    }
    0.5 * (a + b)
}

#[test]
fn criterion_1_root_accuracy() {
    let start = Instant::now();
    let table = find_roots(1.0, 100).unwrap();
    let mut ok = table.len() == 100;
    for (i, &mu) in table.roots().iter().enumerate() {
        let n = (i + 1) as f64;
        ok &= bessel::j_three_half(mu).unwrap().abs() < 1e-10;
        ok &= mu > n * PI && mu < n * PI + PI / 2.0;
    }
    for n in 1..=3 {
        ok &= (table.roots()[n - 1] - bisect_root(n)).abs() < 1e-6;
    }
    ok &= (table.roots()[0] - 4.493409).abs() < 1e-6;
    ok &= (table.roots()[1] - 7.725252).abs() < 1e-6;
    ok &= (table.roots()[2] - 10.904122).abs() < 1e-6;
    ok &= start.elapsed().as_secs_f64() < 1.0;
    report(1, "root accuracy", ok);
}

#[test]
fn criterion_2_orthogonality() {
    let start = Instant::now();
    let table = find_roots(1.0, 10).unwrap();
    let mut ok = true;
    for n in 0..10 {
        for m in 0..10 {
            let mu_n = table.roots()[n];
            let mu_m = table.roots()[m];
            let breaks: Vec<f64> = (0..m).map(|j| table.roots()[j] / mu_m).collect();
            let v = hankel_convect::quad::integrate_with_breakpoints(
                |xi| {
                    xi * bessel::j_three_half(mu_n * xi).unwrap()
                        * bessel::j_three_half(mu_m * xi).unwrap()
                },
                0.0,
                1.0,
                &breaks,
                1e-12,
            )
            .unwrap();
            if n == m {
                let dj = table.deriv_at_root()[n];
                let diag = 0.5 * dj * dj;
                ok &= ((v - diag) / diag).abs() < 1e-8;
            } else {
                ok &= v.abs() < 1e-8;
            }
        }
    }
    ok &= start.elapsed().as_secs_f64() < 5.0;
    report(2, "orthogonality", ok);
}

#[test]
fn criterion_3_hankel_roundtrip() {
    let start = Instant::now();
    let f = RadialProfile::from_fn(1.0, |xi| xi.powf(1.5) * (1.0 - xi)).unwrap();
    let rel_l2 = |n_modes: usize| {
        let roots = find_roots(1.0, n_modes).unwrap();
        let coeffs = hankel::forward(&f, &roots, 1e-10).unwrap();
        let samples = 181;
        let (mut num, mut den) = (0.0, 0.0);
        for i in 0..samples {
            let xi = 0.05 + 0.9 * i as f64 / (samples - 1) as f64;
            let exact = f.eval(xi);
            let approx = hankel::inverse(&coeffs, xi).unwrap();
            num += (approx - exact) * (approx - exact);
            den += exact * exact;
        }
        (num / den).sqrt()
    };
    let errs: Vec<f64> = [5, 10, 20, 50].iter().map(|&n| rel_l2(n)).collect();
    let mut ok = errs[3] <= 1e-3;
    ok &= errs.windows(2).all(|w| w[1] <= w[0]);
    ok &= start.elapsed().as_secs_f64() < 10.0;
    report(3, "hankel roundtrip", ok);
}

#[test]
fn criterion_4_heat_oracle() {
    let start = Instant::now();
    let p0 = RadialPolynomial::new(vec![0.0, 0.0, 0.0, 1.0, 0.0, -1.0], 1.0).unwrap();
    let max_err = |h: f64, dt: f64| {
        let fd = fd_heat_oracle(&p0, 0.1, h, dt).unwrap();
        let exact = heat::evolve(&p0, 0.1).unwrap();
        fd.xi
            .iter()
            .zip(&fd.values)
            .map(|(x, v)| (v - exact.evolved().eval(*x)).abs())
            .fold(0.0, f64::max)
    };
    let coarse = max_err(1.0 / 200.0, 1e-4);
    let fine = max_err(1.0 / 400.0, 5e-5);
    let ratio = coarse / fine;
    let mut ok = coarse <= 5e-3;
    ok &= ratio > 2.5 && ratio < 6.0;

    // exact cases
    let zero = heat::evolve(&RadialPolynomial::zero(1.0), 0.37).unwrap();
    let unit = heat::evolve(&RadialPolynomial::new(vec![0.0, 1.0], 1.0).unwrap(), 0.37).unwrap();
    for i in 1..=20 {
        let xi = i as f64 / 20.0;
        ok &= (heat::temperature(&zero, xi).unwrap() - 0.37).abs() < 1e-14;
        ok &= (heat::temperature(&unit, xi).unwrap() - 1.37).abs() < 1e-14;
    }
    ok &= start.elapsed().as_secs_f64() < 10.0;
    report(4, "heat series vs finite differences", ok);
}

#[test]
fn criterion_5_mode_ode() {
    let start = Instant::now();
    let table = find_roots(1.0, 10).unwrap();
    let prandtl = 7.0;
    let poly_forcing = TimePolynomial::new(vec![0.4, 0.9, -0.3]);
    let mut ok = true;

    for n in 1..=10 {
        let mode = ModeState::new(&table, n, 1.0, prandtl, 50.0).unwrap();
        for forcing_poly in [None, Some(&poly_forcing)] {
            let forcing = match forcing_poly {
                None => Forcing::Zero,
                Some(p) => Forcing::Polynomial(p),
            };
            let rule = |tau: f64| forcing_poly.map_or(0.0, |p| p.eval(tau));
            // relative to the solution scale over the window (the decayed
            // tail of high modes is below resolvable relative error)
            let mut scale = mode.phi0.abs();
            let mut diffs = Vec::new();
            for step in 1..=10 {
                let t = step as f64 * 0.1;
                let analytic = vorticity::phi_bar(&mode, &forcing, t).unwrap();
                let rk4 = ode_oracle(&mode, rule, t, 1e-4).unwrap();
                scale = scale.max(analytic.abs());
                diffs.push((analytic - rk4).abs());
            }
            ok &= diffs.iter().all(|d| d / scale < 1e-6);
        }

        // unforced decay slope over a mode-scaled window
        let a = prandtl * mode.mu * mode.mu;
        let window = 0.5 / a;
        let mut sxx = 0.0;
        let mut sxy = 0.0;
        let mut sx = 0.0;
        let mut sy = 0.0;
        let k = 9.0;
        for i in 1..=9 {
            let t = window * i as f64 / 9.0;
            let y = vorticity::phi_bar(&mode, &Forcing::Zero, t).unwrap().ln();
            sx += t;
            sy += y;
            sxx += t * t;
            sxy += t * y;
        }
        let slope = (k * sxy - sx * sy) / (k * sxx - sx * sx);
        ok &= ((slope + a) / a).abs() < 1e-6;
    }
    ok &= start.elapsed().as_secs_f64() < 5.0;
    report(5, "mode ODE vs RK4", ok);
}

#[test]
fn criterion_6_field_identities() {
    let start = Instant::now();
    let mut cfg = default_config();
    cfg.modes = 50;
    let state = SolvedState::from_config(&cfg, std::path::Path::new(".")).unwrap();
    let vfield = state.vorticity_at(0.2).unwrap();
    let table = ModeIntegralTable::build(&vfield, 512, state.quad_tol).unwrap();
    let src = ModeIntegralEval::Table(&table);

    let mut ok = true;
    let n = 50;
    for i in 1..=n {
        for j in 1..=n {
            // interior lattice inside the hemisphere
            let r = 0.9 * i as f64 / (n + 1) as f64 / 2.0f64.sqrt();
            let z = 0.9 * j as f64 / (n + 1) as f64 / 2.0f64.sqrt();
            let xi = (r * r + z * z).sqrt();
            let (u, v) = velocity(&src, r, z).unwrap();
            let dpsi = stream_derivative(&src, r, xi).unwrap();
            ok &= (u * r + z / xi * dpsi).abs() < 1e-12;
            ok &= (v * r - r / xi * dpsi).abs() < 1e-12;
        }
    }
    for j in 0..=n {
        let z = 0.9 * j as f64 / n as f64;
        let (u, v) = velocity(&src, 0.0, z).unwrap();
        ok &= u == 0.0 && v == 0.0;
    }
    ok &= start.elapsed().as_secs_f64() < 30.0;
    report(6, "field identities", ok);
}

#[test]
fn criterion_7_eq12_residual() {
    let zero_forcing = |modes: usize| -> SolvedState {
        let roots = find_roots(1.0, modes).unwrap();
        let mut phi0 = vec![0.0; modes];
        phi0[0] = 1.0;
        SolvedState {
            forcing: vec![TimePolynomial::new(vec![0.0]); modes],
            heat_p0: RadialPolynomial::zero(1.0),
            prandtl: 1.0,
            rayleigh: 0.0,
            t_tilde: 0.0,
            quad_tol: 1e-10,
            fit_residual: None,
            phi0,
            roots,
        }
    };
    let coarse = residual_eq12(&zero_forcing(1), 40, 0.05, 4e-3).unwrap();
    let mid = residual_eq12(&zero_forcing(2), 80, 0.05, 2e-3).unwrap();
    let fine = residual_eq12(&zero_forcing(4), 160, 0.05, 1e-3).unwrap();
    let mut ok = mid.l2 < coarse.l2 && fine.l2 < mid.l2;
    // machine-readable report
    let json = serde_json::to_string(&fine).unwrap();
    let parsed: serde_json::Value = serde_json::from_str(&json).unwrap();
    ok &= parsed["name"] == "eq12_residual";
    ok &= parsed["l2"].as_f64().is_some();
    report(7, "vorticity equation residual", ok);
}

#[test]
fn criterion_8_determinism() {
    let dir = std::env::temp_dir().join(format!("hankel-acc-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let cfg_path = dir.join("run.toml");
    let cfg = default_config();
    std::fs::write(&cfg_path, toml::to_string(&cfg).unwrap()).unwrap();

    let run = |out: &str| {
        let out_dir = dir.join(out);
        let status = std::process::Command::new(env!("CARGO_BIN_EXE_hankel-convect"))
            .args(["solve", "--config"])
            .arg(&cfg_path)
            .arg("--out-dir")
            .arg(&out_dir)
            .status()
            .unwrap();
        assert!(status.success());
        out_dir
    };
    let a = run("a");
    let b = run("b");
    let mut ok = true;
    for name in ["fields_t0.csv", "fields_t0.2.csv", "run_meta.json"] {
        let xa = std::fs::read(a.join(name)).unwrap();
        let xb = std::fs::read(b.join(name)).unwrap();
        ok &= xa == xb && !xa.is_empty();
    }
    std::fs::remove_dir_all(&dir).ok();
    report(8, "end-to-end determinism", ok);
}

#[test]
fn criterion_9_verify_suite_runtime() {
    let start = Instant::now();
    let cfg = default_config();
    let reports = verify::run_suite(&cfg, std::path::Path::new(".")).unwrap();
    let mut ok = reports.iter().all(|r| r.pass.unwrap_or(true));
    ok &= start.elapsed().as_secs_f64() < 120.0;
    report(9, "verification suite", ok);
}
