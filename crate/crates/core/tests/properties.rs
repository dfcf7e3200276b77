//! Property tests for the special-function kernel, channel data and bound
//! states.

use abcone::bound::{energy_bg, energy_ks, energy_ks_oracle, extension_param};
use abcone::channel::{bound_existence, classify, effective_channel, modified_channels, ChannelParams, Scenario};
use abcone::specfun::{bessel_k, gamma_ratio_sym, kummer_m, ln_gamma_signed, SeriesControl};
use abcone::Error;
use proptest::prelude::*;

fn rel(a: f64, b: f64) -> f64 {
    ((a - b) / b).abs()
}

proptest! {
    #[test]
    fn gamma_reflection(x in 0.001f64..0.999) {
        let a = ln_gamma_signed(x).unwrap();
        let b = ln_gamma_signed(1.0 - x).unwrap();
        let prod = (a.log_abs + b.log_abs).exp() * f64::from(a.sign * b.sign);
        let want = std::f64::consts::PI / (std::f64::consts::PI * x).sin();
        prop_assert!(rel(prod, want) < 1e-12);
    }

    #[test]
    fn gamma_ratio_two_paths(nu in 0.001f64..0.999) {
        let via_log = (ln_gamma_signed(1.0 + nu).unwrap().log_abs - ln_gamma_signed(1.0 - nu).unwrap().log_abs).exp();
        prop_assert!(rel(gamma_ratio_sym(nu).unwrap(), via_log) < 1e-13);
    }

    #[test]
    fn kummer_derivative(a in -3.0f64..3.0, b in 0.3f64..3.0, z in -10.0f64..10.0) {
        let ctl = SeriesControl::default();
        let h = 1e-5;
        let fd = (kummer_m(a, b, z + h, ctl).unwrap() - kummer_m(a, b, z - h, ctl).unwrap()) / (2.0 * h);
        let exact = a / b * kummer_m(a + 1.0, b + 1.0, z, ctl).unwrap();
        let scale = kummer_m(a, b, z, ctl).unwrap().abs().max(exact.abs()).max(1e-3);
        prop_assert!((fd - exact).abs() < 1e-6 * scale, "{} vs {}", fd, exact);
    }

    #[test]
    fn bessel_ode(nu in 0.01f64..0.99, x in 0.05f64..60.0) {
        let h = 1e-4 * x.min(1.0);
        let k = |t: f64| bessel_k(nu, t).unwrap();
        let (m, c, p) = (k(x - h), k(x), k(x + h));
        let d2 = (p - 2.0 * c + m) / (h * h);
        let d1 = (p - m) / (2.0 * h);
        let res = x * x * d2 + x * d1 - (x * x + nu * nu) * c;
        let scale = (x * x * d2).abs() + (x * d1).abs() + ((x * x + nu * nu) * c).abs();
        prop_assert!(res.abs() <= 1e-6 * scale);
    }

    #[test]
    fn gauge_shift(alpha in 0.05f64..=1.0, phi in -5.0f64..5.0, m in -6i64..6, s in prop::sample::select(vec![-1i8, 1])) {
        let a = effective_channel(&ChannelParams { alpha, phi, s, m });
        let b = effective_channel(&ChannelParams { alpha, phi: phi + 1.0, s, m: m - 1 });
        prop_assert!((a.j - b.j).abs() < 1e-12);
        prop_assert!((a.nu - b.nu).abs() < 1e-12 / alpha);
    }

    #[test]
    fn modified_set_is_exact(alpha in 0.05f64..=1.0, phi in -5.0f64..5.0) {
        let set = modified_channels(alpha, phi);
        prop_assert!(set.len() <= (2.0 * alpha).ceil() as usize + 1);
        prop_assert!(set.windows(2).all(|w| w[0] < w[1]));
        let (lo, hi) = (set.first().copied().unwrap_or(0) - 5, set.last().copied().unwrap_or(0) + 5);
        for m in lo..=hi {
            let nu = effective_channel(&ChannelParams { alpha, phi, s: 1, m }).nu;
            if set.contains(&m) {
                prop_assert!(nu > 0.0 && nu < 1.0);
            } else {
                prop_assert!(!(1e-12..=1.0 - 1e-12).contains(&nu));
            }
        }
    }

    #[test]
    fn scenario_follows_sign(alpha in 0.05f64..=1.0, phi in -5.0f64..5.0, m in -3i64..3, s in prop::sample::select(vec![-1i8, 1])) {
        let p = ChannelParams { alpha, phi, s, m };
        let expected = match (phi * f64::from(s)).partial_cmp(&0.0).unwrap() {
            std::cmp::Ordering::Greater => Scenario::ScatteringOnly,
            std::cmp::Ordering::Less => Scenario::BoundAndScattering,
            std::cmp::Ordering::Equal => Scenario::Degenerate,
        };
        prop_assert_eq!(classify(&p), expected);
    }

    #[test]
    fn realness_gate(alpha in 0.2f64..=1.0, phi_s in -4.0f64..1.0, s in prop::sample::select(vec![-1i8, 1]), pick in 0usize..4) {
        let phi = phi_s * f64::from(s);
        let set = modified_channels(alpha, phi);
        prop_assume!(!set.is_empty());
        let p = ChannelParams { alpha, phi, s, m: set[pick % set.len()] };
        match energy_ks(1.0, 1.0, &p) {
            Ok(state) => {
                prop_assert!(bound_existence(&p));
                prop_assert!(state.energy < 0.0);
            }
            Err(Error::NoBoundState { .. }) => prop_assert!(!bound_existence(&p)),
            Err(e) => prop_assert!(false, "unexpected error {}", e),
        }
    }
}

fn bound_case() -> impl Strategy<Value = ChannelParams<f64>> {
    (
        0.2f64..=1.0,
        -4.0f64..=-1.0,
        prop::sample::select(vec![-1i8, 1]),
        0usize..4,
    )
        .prop_filter_map("bound channel with nu >= 0.1", |(alpha, phi_s, s, pick)| {
            let phi = phi_s * f64::from(s);
            let set = modified_channels(alpha, phi);
            if set.is_empty() {
                return None;
            }
            let p = ChannelParams {
                alpha,
                phi,
                s,
                m: set[pick % set.len()],
            };
            let e = energy_ks(1.0, 1.0, &p).ok()?.energy;
            (effective_channel(&p).nu >= 0.1 && e > -1e6 && e < -1e-10).then_some(p)
        })
}

proptest! {
    #[test]
    fn bridge_identity(p in bound_case(), mass in 0.1f64..10.0, r0 in 1e-3f64..1.0) {
        let ks = energy_ks(mass, r0, &p).unwrap().energy;
        let bg = energy_bg(mass, &extension_param(r0, &p).unwrap()).unwrap().energy;
        prop_assert!(rel(bg, ks) < 1e-13);
        prop_assert!(extension_param(r0, &p).unwrap().lambda.finite().unwrap() < 0.0);
    }

    #[test]
    fn oracle_matches(p in bound_case(), mass in 0.1f64..10.0, r0 in 1e-3f64..1.0) {
        let ks = energy_ks(mass, r0, &p).unwrap().energy;
        let or = energy_ks_oracle(mass, r0, &p).unwrap().energy;
        prop_assert!(rel(or, ks) < 1e-9);
    }

    #[test]
    fn scaling_law(p in bound_case()) {
        let reference = energy_ks(1.0, 1.0, &p).unwrap().energy;
        for mass in [0.5, 1.0, 2.0, 10.0] {
            for r0 in [1e-3, 1e-1, 1.0] {
                let e = energy_ks(mass, r0, &p).unwrap().energy;
                prop_assert!(rel(e * mass * r0 * r0, reference) < 1e-13);
            }
        }
    }
}

#[test]
fn bg_energy_limits() {
    use abcone::bound::{ExtensionParam, Lambda};
    let e = |l: f64| {
        energy_bg(1.0, &ExtensionParam::user(Lambda::Finite(l), 0.4).unwrap())
            .unwrap()
            .energy
    };
    assert!(e(-1e-8) < -1e10);
    assert!(e(-1e8) > -1e-10 && e(-1e8) < 0.0);
    let mut prev = f64::NEG_INFINITY;
    for i in 0..40 {
        let v = e(-(10f64).powf(-4.0 + 0.2 * i as f64));
        assert!(v > prev);
        prev = v;
    }
}

#[test]
fn single_precision_path() {
    let p = ChannelParams::<f32>::new(1.0, -1.5, 1, 1).unwrap();
    let e = energy_ks(1.0f32, 1.0, &p).unwrap().energy;
    assert!((e + 0.125).abs() < 1e-6);
    let k = bessel_k(0.5f32, 1.0).unwrap();
    let want = (std::f32::consts::PI / 2.0).sqrt() * (-1.0f32).exp();
    assert!((k - want).abs() < 1e-5);
}
