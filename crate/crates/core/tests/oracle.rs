use bubble_core::analysis::{dominant_frequency, power_spectrum_padded, Window};
use bubble_core::physics::{
    dimensionless_groups, natural_frequency, BubbleConfig, DimensionlessSet, DriveConfig, FluidProperties,
};
use bubble_core::solver::{
    default_dtau, linear_oracle, linear_step_response, rk4_step, simulate, step_pulse, BubbleState, OracleForm,
    SolverOptions,
};
use bubble_core::study::linear_oracle_error;

fn groups(alpha: f64) -> DimensionlessSet<f64> {
    dimensionless_groups(
        &FluidProperties::water_20c(),
        &BubbleConfig::air_1mm(),
        &DriveConfig::new(alpha, 100.0),
    )
    .unwrap()
}

#[test]
fn weak_step_matches_linear_closed_form() {
    let g = groups(1e-5 * 1e5);
    let err = linear_oracle_error(&g, default_dtau(&g, 100.0), 5.0).unwrap();
    assert!(err < 1e-3, "{err}");
}

#[test]
fn oracle_mismatch_is_proportional_to_amplitude() {
    // The residual is the leading nonlinear correction, linear in alpha.
    let errs: Vec<f64> = [1e-3, 1e-4]
        .iter()
        .map(|a| {
            let g = groups(a * 1e5);
            linear_oracle_error(&g, default_dtau(&g, 100.0), 5.0).unwrap()
        })
        .collect();
    let ratio = errs[0] / errs[1];
    assert!((ratio / 10.0 - 1.0).abs() < 0.1, "{errs:?}");
}

#[test]
fn rk4_is_fourth_order_on_the_linearised_system() {
    let g = groups(1e-3 * 1e5);
    let p = linear_oracle(&g, OracleForm::Exact).unwrap();
    let w02 = p.omega0 * p.omega0;
    let run = |dtau: f64| -> f64 {
        let n = (5.0 * p.tau0 / dtau).round() as usize;
        let mut y = [0.0, 0.0];
        let mut err = 0.0f64;
        for i in 0..n {
            y = rk4_step(y, dtau, |[x, v]| Ok([v, -v / p.quality - w02 * x - p.lambda])).unwrap();
            let exact = linear_step_response(&p, (i + 1) as f64 * dtau).unwrap();
            err = err.max((y[0] - exact).abs());
        }
        err
    };
    let base = default_dtau(&g, 40.0);
    let ratio = run(base) / run(base / 2.0);
    assert!((12.0..=20.0).contains(&ratio), "{ratio}");
}

#[test]
fn keller_miksis_self_convergence() {
    let g = groups(0.2e5);
    let tau_end = 10.0;
    let final_r = |dtau: f64| {
        let forcing = step_pulse(
            1.0,
            g.to_seconds(tau_end + dtau),
            g.to_seconds(tau_end + dtau),
            g.to_seconds(dtau),
        )
        .unwrap();
        let opts = SolverOptions {
            dtau,
            tau_end,
            ..SolverOptions::for_groups(&g, tau_end)
        };
        *simulate(&BubbleState::equilibrium(), Some(&forcing), &g, &opts)
            .unwrap()
            .r
            .last()
            .unwrap()
    };
    // Steps that divide tau_end exactly.
    let n = (tau_end / default_dtau(&g, 40.0)).ceil();
    let (a, b, c) = (
        final_r(tau_end / n),
        final_r(tau_end / (2.0 * n)),
        final_r(tau_end / (4.0 * n)),
    );
    let ratio = (a - b) / (b - c);
    assert!((12.0..=20.0).contains(&ratio), "{ratio}");
}

#[test]
fn free_decay_rings_at_minnaert_frequency() {
    let g = groups(0.0);
    let p = linear_oracle(&g, OracleForm::Exact).unwrap();
    let opts = SolverOptions::for_groups(&g, 4.0 * p.tau0);
    let traj = simulate(&BubbleState::displaced(1.0 + 1e-4), None, &g, &opts).unwrap();
    let x: Vec<f64> = traj.r.iter().map(|r| r - 1.0).collect();
    let spec = power_spectrum_padded(&x, traj.dt_seconds(), Window::Hann, 8 * x.len()).unwrap();
    let f = dominant_frequency(&spec, 1000.0, 10_000.0).unwrap();
    let approx_hz = g.angular_to_hz((g.polytropic * g.elastic0).sqrt() / g.omega);
    assert!((f / approx_hz - 1.0).abs() < 0.02, "{f} vs {approx_hz}");
    let f0: f64 = natural_frequency(&FluidProperties::water_20c(), &BubbleConfig::air_1mm()).unwrap();
    assert!((f / f0 - 1.0).abs() < 0.02);
}

#[test]
fn single_and_double_precision_agree() {
    let g64 = groups(0.1e5);
    let g32 = dimensionless_groups(
        &FluidProperties::<f32>::water_20c(),
        &BubbleConfig::air_1mm(),
        &DriveConfig::new(0.1e5, 100.0),
    )
    .unwrap();
    let e64 = linear_oracle_error(&g64, default_dtau(&g64, 60.0), 3.0).unwrap();
    let e32 = linear_oracle_error(&g32, default_dtau(&g32, 60.0), 3.0).unwrap() as f64;
    assert!((e32 / e64 - 1.0).abs() < 0.05, "{e32} vs {e64}");
}
