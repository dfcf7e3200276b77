//! Per-channel data: effective angular momentum, Bessel order and delta
//! coupling, plus the enumeration of channels that need a self-adjoint
//! extension.

use crate::error::{Error, Result};
use crate::scalar::{Real, POLE_TOLERANCE};

/// Raw inputs of one partial wave.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ChannelParams<T> {
    /// Cone parameter, `α ∈ (0, 1]`.
    pub alpha: T,
    /// Flux in units of the flux quantum.
    pub phi: T,
    /// Twice the spin projection, `±1`.
    pub s: i8,
    /// Orbital index.
    pub m: i64,
}

impl<T: Real> ChannelParams<T> {
    pub fn new(alpha: T, phi: T, s: i8, m: i64) -> Result<Self> {
        let p = ChannelParams { alpha, phi, s, m };
        p.validate()?;
        Ok(p)
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.alpha > T::zero() && self.alpha <= T::one()) {
            return Err(Error::Domain {
                function: "ChannelParams",
                detail: format!("alpha = {} not in (0, 1]", self.alpha.as_f64()),
            });
        }
        if self.s != 1 && self.s != -1 {
            return Err(Error::Domain {
                function: "ChannelParams",
                detail: format!("s = {} not in {{-1, +1}}", self.s),
            });
        }
        if !self.phi.is_finite() {
            return Err(Error::Domain {
                function: "ChannelParams",
                detail: "phi is not finite".into(),
            });
        }
        Ok(())
    }

    /// `φ·s`.
    pub fn phi_s(&self) -> T {
        self.phi * T::int(self.s as i64)
    }

    pub fn with_m(&self, m: i64) -> Self {
        ChannelParams { m, ..*self }
    }
}

/// Derived channel quantities.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EffectiveChannel<T> {
    /// `m + φ + (1−α)/2`.
    pub j: T,
    /// `|j|/α`.
    pub nu: T,
    /// `φs/α`.
    pub g: T,
}

impl<T: Real> EffectiveChannel<T> {
    /// True when `0 < ν < 1` with boundary ties resolved to the regular side.
    pub fn needs_extension(&self) -> bool {
        is_modified_order(self.nu)
    }
}

/// Sign class of the delta coupling.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Scenario {
    ScatteringOnly,
    BoundAndScattering,
    Degenerate,
}

impl Scenario {
    pub fn name(&self) -> &'static str {
        match self {
            Scenario::ScatteringOnly => "scattering_only",
            Scenario::BoundAndScattering => "bound_and_scattering",
            Scenario::Degenerate => "degenerate",
        }
    }
}

pub(crate) fn is_modified_order<T: Real>(nu: T) -> bool {
    let tol = T::lit(POLE_TOLERANCE);
    nu > tol && nu < T::one() - tol
}

pub fn effective_channel<T: Real>(p: &ChannelParams<T>) -> EffectiveChannel<T> {
    let half = T::lit(0.5);
    let j = T::int(p.m) + p.phi + (T::one() - p.alpha) * half;
    EffectiveChannel {
        j,
        nu: j.abs() / p.alpha,
        g: p.phi_s() / p.alpha,
    }
}

pub fn classify<T: Real>(p: &ChannelParams<T>) -> Scenario {
    let g = p.phi_s() / p.alpha;
    if g > T::zero() {
        Scenario::ScatteringOnly
    } else if g < T::zero() {
        Scenario::BoundAndScattering
    } else {
        Scenario::Degenerate
    }
}

/// Orbital indices with `0 < ν < 1`, ascending.
pub fn modified_channels<T: Real>(alpha: T, phi: T) -> Vec<i64> {
    // ν < 1 ⇔ −α < m + c < α
    let c = phi + (T::one() - alpha) * T::lit(0.5);
    let lo = (-alpha - c).floor().to_i64().unwrap_or(0) - 1;
    let hi = (alpha - c).ceil().to_i64().unwrap_or(0) + 1;
    (lo..=hi)
        .filter(|&m| {
            let nu = (T::int(m) + c).abs() / alpha;
            is_modified_order(nu)
        })
        .collect()
}

/// `(φs + |j|)/(φs − |j|)`.
pub fn coupling_ratio<T: Real>(p: &ChannelParams<T>) -> Result<T> {
    let ch = effective_channel(p);
    let ps = p.phi_s();
    let den = ps - ch.j.abs();
    if den.abs() <= T::lit(POLE_TOLERANCE) * (T::one() + ps.abs()) {
        return Err(Error::SingularCoupling {
            j_abs: ch.j.abs().as_f64(),
        });
    }
    Ok((ps + ch.j.abs()) / den)
}

/// Whether the channel carries a bound state: `φs ≤ −1` and a positive
/// product of coupling ratio and `Γ(1+ν)/Γ(1−ν)`.
pub fn bound_existence<T: Real>(p: &ChannelParams<T>) -> bool {
    if p.phi_s() > -T::one() + T::lit(POLE_TOLERANCE) {
        return false;
    }
    let ch = effective_channel(p);
    let ratio = match coupling_ratio(p) {
        Ok(r) => r,
        Err(_) => return false,
    };
    let num = crate::specfun::ln_gamma_signed(T::one() + ch.nu);
    let den = crate::specfun::ln_gamma_signed(T::one() - ch.nu);
    match (num, den) {
        (Ok(a), Ok(b)) => {
            let sign = a.sign * b.sign;
            ratio != T::zero() && (ratio > T::zero()) == (sign > 0)
        }
        _ => false,
    }
}
