//! Bound states of the flux tube: closed-form energies from the zero-energy
//! matching at `r0` and from an explicit extension parameter, a numerical
//! root solve of the matching relation, and the normalized wavefunction.

use crate::channel::{
    bound_existence, coupling_ratio, effective_channel, is_modified_order, ChannelParams, EffectiveChannel,
};
use crate::error::{Error, Result};
use crate::quad::{integrate, integrate_to_infinity, QuadControl};
use crate::roots::{bisect, Bisection};
use crate::scalar::{Real, POLE_TOLERANCE};
use crate::specfun::{bessel_k, gamma_ratio_sym, ln_gamma_signed};

/// Self-adjoint extension parameter. `Infinite` is the pure irregular
/// boundary condition and has closed forms of its own.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Lambda<T> {
    Finite(T),
    Infinite,
}

impl<T: Real> Lambda<T> {
    /// `1/λ`, zero for `Infinite`.
    pub fn recip(&self) -> T {
        match *self {
            Lambda::Finite(l) => l.recip(),
            Lambda::Infinite => T::zero(),
        }
    }

    pub fn finite(&self) -> Option<T> {
        match *self {
            Lambda::Finite(l) => Some(l),
            Lambda::Infinite => None,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Provenance<T> {
    /// Derived from a flux tube of radius `r0`; `coupling_ratio` is
    /// `(φs+|j|)/(φs−|j|)`.
    Physical {
        r0: T,
        coupling_ratio: T,
    },
    UserSupplied,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ExtensionParam<T> {
    pub lambda: Lambda<T>,
    pub nu: T,
    pub provenance: Provenance<T>,
}

impl<T: Real> ExtensionParam<T> {
    /// A user-chosen `λ` for a channel of order `nu ∈ (0, 1)`.
    pub fn user(lambda: Lambda<T>, nu: T) -> Result<Self> {
        if !is_modified_order(nu) {
            return Err(Error::RegularChannel { nu: nu.as_f64() });
        }
        if let Lambda::Finite(l) = lambda {
            if !l.is_finite() {
                return Err(Error::Domain {
                    function: "ExtensionParam",
                    detail: "use Lambda::Infinite for an infinite extension parameter".into(),
                });
            }
        }
        Ok(ExtensionParam {
            lambda,
            nu,
            provenance: Provenance::UserSupplied,
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Method {
    KsClosedForm,
    BgClosedForm,
    NumericalOracle,
}

impl Method {
    pub fn name(&self) -> &'static str {
        match self {
            Method::KsClosedForm => "ks_closed_form",
            Method::BgClosedForm => "bg_closed_form",
            Method::NumericalOracle => "numerical_oracle",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BoundState<T> {
    pub nu: T,
    /// Present when the state was computed from channel parameters.
    pub channel: Option<EffectiveChannel<T>>,
    pub energy: T,
    pub method: Method,
}

/// Radius of the regularized flux tube.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RegularizedFlux<T> {
    pub r0: T,
}

impl<T: Real> RegularizedFlux<T> {
    pub fn new(r0: T) -> Result<Self> {
        positive("r0", r0)?;
        Ok(RegularizedFlux { r0 })
    }
}

pub(crate) fn positive<T: Real>(name: &'static str, x: T) -> Result<()> {
    if x > T::zero() && x.is_finite() {
        Ok(())
    } else {
        Err(Error::Domain {
            function: name,
            detail: format!("{name} = {} must be positive", x.as_f64()),
        })
    }
}

fn modified_channel<T: Real>(p: &ChannelParams<T>) -> Result<EffectiveChannel<T>> {
    p.validate()?;
    let ch = effective_channel(p);
    if !ch.needs_extension() {
        return Err(Error::RegularChannel { nu: ch.nu.as_f64() });
    }
    Ok(ch)
}

/// Bound-state energy from the radius of the flux tube:
/// `E = −2/(M r0²) · (R Γ(1+ν)/Γ(1−ν))^{1/ν}`.
pub fn energy_ks<T: Real>(mass: T, r0: T, p: &ChannelParams<T>) -> Result<BoundState<T>> {
    positive("mass", mass)?;
    positive("r0", r0)?;
    p.validate()?;
    if p.phi_s() > -T::one() + T::lit(POLE_TOLERANCE) {
        return Err(Error::NoBoundState {
            reason: format!("phi*s = {} exceeds -1", p.phi_s().as_f64()),
        });
    }
    let ratio = coupling_ratio(p)?;
    let ch = modified_channel(p)?;
    if !bound_existence(p) {
        return Err(Error::NoBoundState {
            reason: format!("phi*s = {} with coupling ratio {}", p.phi_s().as_f64(), ratio.as_f64()),
        });
    }
    let base = ratio * gamma_ratio_sym(ch.nu)?;
    let energy = -T::lit(2.0) / (mass * r0 * r0) * base.powf(ch.nu.recip());
    Ok(BoundState {
        nu: ch.nu,
        channel: Some(ch),
        energy,
        method: Method::KsClosedForm,
    })
}

/// `λ` fixed by the flux tube: `1/λ = −R / r0^{2ν}`.
pub fn extension_param<T: Real>(r0: T, p: &ChannelParams<T>) -> Result<ExtensionParam<T>> {
    positive("r0", r0)?;
    let ch = modified_channel(p)?;
    let ratio = coupling_ratio(p)?;
    let inv = -ratio / r0.powf(T::lit(2.0) * ch.nu);
    let lambda = if inv == T::zero() {
        Lambda::Infinite
    } else {
        Lambda::Finite(inv.recip())
    };
    Ok(ExtensionParam {
        lambda,
        nu: ch.nu,
        provenance: Provenance::Physical {
            r0,
            coupling_ratio: ratio,
        },
    })
}

/// Bound-state energy for a given `λ < 0`:
/// `E = −(2/M) · (−Γ(1+ν)/(λ Γ(1−ν)))^{1/ν}`.
pub fn energy_bg<T: Real>(mass: T, ext: &ExtensionParam<T>) -> Result<BoundState<T>> {
    positive("mass", mass)?;
    if !is_modified_order(ext.nu) {
        return Err(Error::RegularChannel { nu: ext.nu.as_f64() });
    }
    let lambda = match ext.lambda {
        Lambda::Finite(l) if l < T::zero() => l,
        _ => {
            return Err(Error::NoBoundState {
                reason: "extension parameter is not negative".into(),
            })
        }
    };
    let base = -gamma_ratio_sym(ext.nu)? / lambda;
    let energy = -T::lit(2.0) / mass * base.powf(ext.nu.recip());
    Ok(BoundState {
        nu: ext.nu,
        channel: None,
        energy,
        method: Method::BgClosedForm,
    })
}

/// Lower and upper ends of `−E·M·r0²` searched by [`energy_ks_oracle`].
pub const ORACLE_WINDOW: (f64, f64) = (1e-12, 1e8);

/// Solves the matching relation at `r0` for the bound-state energy by
/// bisection in `ln(−E)`, without inverting it in closed form.
///
/// With `X = r0^{2ν} Γ(1−ν) (−ME)^ν` and `B = 2^ν Γ(1+ν)` the relation reads
/// `(ν − g) X + (ν + g) B = 0`.
pub fn energy_ks_oracle<T: Real>(mass: T, r0: T, p: &ChannelParams<T>) -> Result<BoundState<T>> {
    positive("mass", mass)?;
    positive("r0", r0)?;
    let ch = modified_channel(p)?;
    let nu = ch.nu;
    let g = ch.g;
    let two = T::lit(2.0);
    let ln_b = nu * two.ln() + ln_gamma_signed(T::one() + nu)?.log_abs;
    let ln_x0 = two * nu * r0.ln() + ln_gamma_signed(T::one() - nu)?.log_abs;
    let scale = mass * r0 * r0;
    let ln_m = mass.ln();
    // F/B as a function of t = ln(−E)
    let f = |t: T| {
        let ratio = (ln_x0 + nu * (ln_m + t) - ln_b).exp();
        (nu - g) * ratio + (nu + g)
    };
    let lo = (T::lit(ORACLE_WINDOW.0) / scale).ln();
    let hi = (T::lit(ORACLE_WINDOW.1) / scale).ln();
    let ctl = Bisection {
        rel_tol: T::lit(1e-14),
        max_iter: 200,
    };
    let root = bisect(f, lo, hi, ctl).map_err(|_| Error::Bracket {
        lo: -(ORACLE_WINDOW.1 / scale.as_f64()),
        hi: -(ORACLE_WINDOW.0 / scale.as_f64()),
    })?;
    Ok(BoundState {
        nu,
        channel: Some(ch),
        energy: -root.x.exp(),
        method: Method::NumericalOracle,
    })
}

/// Normalized radial bound-state wavefunction `N K_ν(κ r)`.
#[derive(Debug, Clone, Copy)]
pub struct BoundWavefunction<T> {
    pub nu: T,
    pub kappa: T,
    pub norm: T,
}

impl<T: Real> BoundWavefunction<T> {
    pub fn value(&self, r: T) -> Result<T> {
        Ok(self.norm * bessel_k(self.nu, self.kappa * r)?)
    }
}

/// `∫₀^∞ x K_ν(x)² dx` by quadrature.
pub fn bessel_k_norm_integral<T: Real>(nu: T) -> Result<T> {
    if !(nu > T::zero() && nu < T::one()) {
        return Err(Error::Domain {
            function: "bessel_k_norm_integral",
            detail: format!("nu = {} not in (0, 1)", nu.as_f64()),
        });
    }
    let ctl = QuadControl::with_rel_tol(T::lit(1e-12));
    let failure = std::cell::RefCell::new(None);
    // x = u^p with p = 1/(1−ν) makes the integrand near the origin linear in u
    let p = (T::one() - nu).recip();
    let small_x_coef = {
        let g = ln_gamma_signed(nu)?.value() * T::lit(2.0).powf(nu - T::one());
        g * g
    };
    let inner = integrate(
        |u: T| {
            if u == T::zero() {
                return T::zero();
            }
            let x = u.powf(p);
            let jac = p * u.powf(p - T::one());
            if x < T::lit(1e-200) {
                return jac * small_x_coef * x.powf(T::one() - T::lit(2.0) * nu);
            }
            match bessel_k(nu, x) {
                Ok(k) => jac * x * k * k,
                Err(e) => {
                    failure.borrow_mut().get_or_insert(e);
                    T::zero()
                }
            }
        },
        T::zero(),
        T::one(),
        ctl,
    );
    let outer = integrate_to_infinity(
        |x: T| match bessel_k(nu, x) {
            Ok(k) => x * k * k,
            Err(_) => T::zero(),
        },
        T::one(),
        ctl,
    );
    if let Some(e) = failure.into_inner() {
        return Err(e);
    }
    if !(inner.converged && outer.converged) {
        return Err(Error::Convergence {
            function: "bessel_k_norm_integral",
            terms: ctl.max_intervals,
        });
    }
    Ok(inner.value + outer.value)
}

/// Wavefunction of `state`, normalized so that `∫₀^∞ f² r dr = 1`.
pub fn bound_wavefunction<T: Real>(state: &BoundState<T>, mass: T) -> Result<BoundWavefunction<T>> {
    positive("mass", mass)?;
    if !(state.energy < T::zero()) {
        return Err(Error::NoBoundState {
            reason: "energy is not negative".into(),
        });
    }
    let kappa = (-T::lit(2.0) * mass * state.energy).sqrt();
    let integral = bessel_k_norm_integral(state.nu)?;
    Ok(BoundWavefunction {
        nu: state.nu,
        kappa,
        norm: kappa / integral.sqrt(),
    })
}

/// `E·M·r0²` for a bound channel; independent of `M` and `r0`.
pub fn dimensionless_energy<T: Real>(p: &ChannelParams<T>) -> Result<T> {
    energy_ks(T::one(), T::one(), p).map(|s| s.energy)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn worked() -> ChannelParams<f64> {
        ChannelParams::new(1.0, -1.5, 1, 1).unwrap()
    }

    #[test]
    fn worked_channel() {
        let ks = energy_ks(1.0, 1.0, &worked()).unwrap();
        assert!((ks.energy + 0.125).abs() < 1e-15);
        let ext = extension_param(1.0, &worked()).unwrap();
        assert_eq!(ext.lambda, Lambda::Finite(-2.0));
        let bg = energy_bg(1.0, &ext).unwrap();
        assert!((bg.energy + 0.125).abs() < 1e-15);
        let oracle = energy_ks_oracle(1.0, 1.0, &worked()).unwrap();
        assert!((oracle.energy + 0.125).abs() < 1e-12);
    }

    #[test]
    fn scaling() {
        let e = energy_ks(2.0, 3.0, &worked()).unwrap().energy;
        assert!((e * 2.0 * 9.0 + 0.125).abs() < 1e-15);
    }

    #[test]
    fn bg_hand_value() {
        let ext = ExtensionParam::user(Lambda::Finite(-1.0_f64), 0.5).unwrap();
        assert!((energy_bg(1.0, &ext).unwrap().energy + 0.5).abs() < 1e-15);
        let ext = ExtensionParam::user(Lambda::Finite(1.0_f64), 0.5).unwrap();
        assert!(matches!(energy_bg(1.0, &ext), Err(Error::NoBoundState { .. })));
        let ext = ExtensionParam::<f64>::user(Lambda::Infinite, 0.5).unwrap();
        assert!(matches!(energy_bg(1.0, &ext), Err(Error::NoBoundState { .. })));
    }

    #[test]
    fn failures() {
        let p = ChannelParams::new(1.0, 0.5, 1, 0).unwrap();
        assert!(matches!(energy_ks(1.0, 1.0, &p), Err(Error::NoBoundState { .. })));
        let p = ChannelParams::new(1.0, 0.5, 1, -1).unwrap();
        assert!(matches!(extension_param(1.0, &p), Err(Error::SingularCoupling { .. })));
        let p = ChannelParams::new(1.0, -1.0, 1, 1).unwrap();
        assert!(matches!(energy_ks(1.0, 1.0, &p), Err(Error::RegularChannel { .. })));
        // repulsive channel: the matching relation has no root
        let p = ChannelParams::new(1.0, 0.3, 1, 0).unwrap();
        assert!(matches!(energy_ks_oracle(1.0, 1.0, &p), Err(Error::Bracket { .. })));
    }

    #[test]
    fn lambda_scaling() {
        let l1 = extension_param(1.0, &worked()).unwrap().lambda.finite().unwrap();
        let l2 = extension_param(0.01, &worked()).unwrap().lambda.finite().unwrap();
        assert!((l2 - l1 * 0.01_f64.powf(1.0)).abs() < 1e-15);
    }

    #[test]
    fn norm_integral_closed_form() {
        for nu in [0.05, 0.3, 0.5, 0.9, 0.97] {
            let want = std::f64::consts::PI * nu / (2.0 * (std::f64::consts::PI * nu).sin());
            let got = bessel_k_norm_integral(nu).unwrap();
            assert!(((got - want) / want).abs() < 1e-10, "nu = {nu}: {got} vs {want}");
        }
    }

    #[test]
    fn wavefunction_decays() {
        let state = energy_ks(1.0, 1.0, &worked()).unwrap();
        let wf = bound_wavefunction(&state, 1.0).unwrap();
        let mut prev = f64::INFINITY;
        for i in 1..50 {
            let v = wf.value(0.2 * i as f64).unwrap();
            assert!(v < prev && v > 0.0);
            prev = v;
        }
    }
}
