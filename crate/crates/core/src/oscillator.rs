//! Flux tube on a cone with an added isotropic harmonic oscillator.
//!
//! Spectra come from `L(E) = Γ(1/2 + ν/2 − E/2ω) / Γ(1/2 − ν/2 − E/2ω) = C`,
//! where `C` encodes the boundary condition at the origin. `L` has zeros at
//! `(2n+1−ν)ω` and poles at `(2n+1+ν)ω` and decreases from `+∞` to `−∞`
//! between consecutive poles, so each such interval holds exactly one level.

use crate::bound::{positive, ExtensionParam, Lambda, Provenance};
use crate::channel::{coupling_ratio, effective_channel, ChannelParams, EffectiveChannel};
use crate::error::{Error, Result};
use crate::quad::{integrate, integrate_to_infinity, QuadControl};
use crate::roots::{bisect_with_signs, Bisection};
use crate::scalar::Real;
use crate::specfun::{gamma, gamma_ratio_sym, kummer_m, ln_gamma_signed, recip_gamma, tricomi_u, SeriesControl};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct HoParams<T> {
    pub omega: T,
    pub mass: T,
    pub r0: T,
    pub channel: ChannelParams<T>,
}

impl<T: Real> HoParams<T> {
    pub fn new(omega: T, mass: T, r0: T, channel: ChannelParams<T>) -> Result<Self> {
        positive("omega", omega)?;
        positive("mass", mass)?;
        positive("r0", r0)?;
        channel.validate()?;
        Ok(HoParams {
            omega,
            mass,
            r0,
            channel,
        })
    }
}

/// Small-`r` behaviour of a level: `r^{+ν}`, `r^{−ν}`, or a combination.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Branch {
    Regular,
    Irregular,
    Mixed,
}

impl Branch {
    pub fn name(&self) -> &'static str {
        match self {
            Branch::Regular => "regular",
            Branch::Irregular => "irregular",
            Branch::Mixed => "mixed",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct HoLevel<T> {
    /// Index of the pole interval holding the level.
    pub n: usize,
    pub energy: T,
    pub energy_over_omega: T,
    pub branch: Branch,
}

/// `(2n+1±ν)ω`: `+` for [`Branch::Regular`], `−` for [`Branch::Irregular`].
pub fn ho_limit_spectrum<T: Real>(n: usize, nu: T, omega: T, branch: Branch) -> Result<T> {
    let base = T::int(2 * n as i64 + 1);
    match branch {
        Branch::Regular if nu >= T::zero() => Ok((base + nu) * omega),
        Branch::Irregular if nu > T::zero() && nu < T::one() => Ok((base - nu) * omega),
        _ => Err(Error::Domain {
            function: "ho_limit_spectrum",
            detail: format!(
                "no limiting level for nu = {} on the {} branch",
                nu.as_f64(),
                branch.name()
            ),
        }),
    }
}

/// `L(E)` together with the ladder points closest to `E`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SpectralValue<T> {
    pub value: T,
    pub nearest_pole: T,
    pub nearest_zero: T,
}

fn nearest_rung<T: Real>(e: T, offset: T, omega: T) -> T {
    let n = ((e / omega - T::one() - offset) / T::lit(2.0)).round().max(T::zero());
    (T::lit(2.0) * n + T::one() + offset) * omega
}

fn lhs_value<T: Real>(e: T, nu: T, omega: T) -> Result<T> {
    let half = T::lit(0.5);
    let x = e / (T::lit(2.0) * omega);
    let num = ln_gamma_signed(half + half * nu - x)?;
    let den = match ln_gamma_signed(half - half * nu - x) {
        Ok(v) => v,
        Err(Error::Pole { .. }) => return Ok(T::zero()),
        Err(e) => return Err(e),
    };
    let v = (num.log_abs - den.log_abs).exp();
    Ok(if num.sign * den.sign < 0 { -v } else { v })
}

pub fn spectral_lhs<T: Real>(e: T, nu: T, omega: T) -> Result<SpectralValue<T>> {
    positive("omega", omega)?;
    Ok(SpectralValue {
        value: lhs_value(e, nu, omega)?,
        nearest_pole: nearest_rung(e, nu, omega),
        nearest_zero: nearest_rung(e, -nu, omega),
    })
}

fn bisection<T: Real>() -> Bisection<T> {
    Bisection {
        rel_tol: T::lit(1e-11),
        max_iter: 300,
    }
}

/// The first `levels` solutions of `L(E) = rhs`, one per pole interval.
pub fn solve_spectral<T: Real>(rhs: T, nu: T, omega: T, levels: usize) -> Result<Vec<HoLevel<T>>> {
    positive("omega", omega)?;
    if !(nu > T::zero() && nu < T::one()) {
        return Err(Error::RegularChannel { nu: nu.as_f64() });
    }
    if !rhs.is_finite() {
        return Err(Error::Domain {
            function: "solve_spectral",
            detail: "right-hand side is not finite".into(),
        });
    }
    let f = |e: T| match lhs_value(e, nu, omega) {
        Ok(v) => v - rhs,
        // only reachable when a midpoint lands exactly on a pole
        Err(_) => T::nan(),
    };
    let mut out = Vec::with_capacity(levels);
    for n in 0..levels {
        let zero = (T::int(2 * n as i64 + 1) - nu) * omega;
        let energy = if rhs == T::zero() {
            zero
        } else if rhs > T::zero() {
            let lo = if n == 0 {
                lower_bound(&f, zero, omega)?
            } else {
                (T::int(2 * n as i64 - 1) + nu) * omega
            };
            bisect_with_signs(f, lo, zero, true, bisection())?.x
        } else {
            let pole = (T::int(2 * n as i64 + 1) + nu) * omega;
            bisect_with_signs(f, zero, pole, true, bisection())?.x
        };
        out.push(HoLevel {
            n,
            energy,
            energy_over_omega: energy / omega,
            branch: Branch::Mixed,
        });
    }
    Ok(out)
}

/// An energy below the lowest zero where `L − rhs > 0`.
fn lower_bound<T: Real, F: Fn(T) -> T>(f: &F, zero: T, omega: T) -> Result<T> {
    let mut d = omega;
    for _ in 0..2100 {
        let lo = zero - d;
        if !lo.is_finite() {
            break;
        }
        if f(lo) > T::zero() {
            return Ok(lo);
        }
        d = d * T::lit(2.0);
    }
    Err(Error::Bracket {
        lo: f64::NEG_INFINITY,
        hi: zero.as_f64(),
    })
}

fn modified<T: Real>(p: &ChannelParams<T>) -> Result<EffectiveChannel<T>> {
    p.validate()?;
    let ch = effective_channel(p);
    if !ch.needs_extension() {
        return Err(Error::RegularChannel { nu: ch.nu.as_f64() });
    }
    Ok(ch)
}

/// Right-hand side fixed by the flux-tube radius:
/// `R Γ(1+ν)/Γ(1−ν) / ((Mω)^ν r0^{2ν})`.
pub fn ks_rhs<T: Real>(h: &HoParams<T>) -> Result<T> {
    let ch = modified(&h.channel)?;
    let ratio = coupling_ratio(&h.channel)?;
    let nu = ch.nu;
    Ok(ratio * gamma_ratio_sym(nu)? / ((h.mass * h.omega).powf(nu) * h.r0.powf(T::lit(2.0) * nu)))
}

/// Levels of the flux tube of radius `r0` in the oscillator.
pub fn solve_ho_ks<T: Real>(h: &HoParams<T>, levels: usize) -> Result<Vec<HoLevel<T>>> {
    positive("omega", h.omega)?;
    positive("mass", h.mass)?;
    positive("r0", h.r0)?;
    let nu = modified(&h.channel)?.nu;
    solve_spectral(ks_rhs(h)?, nu, h.omega, levels)
}

/// Levels for an explicit extension parameter, right-hand side
/// `−Γ(1+ν)/Γ(1−ν) / (λ (Mω)^ν)`. `λ = 0` gives the regular ladder and
/// `λ = ∞` the irregular one, both exactly.
pub fn solve_ho_bg<T: Real>(h: &HoParams<T>, ext: &ExtensionParam<T>, levels: usize) -> Result<Vec<HoLevel<T>>> {
    positive("omega", h.omega)?;
    positive("mass", h.mass)?;
    let nu = ext.nu;
    let ladder = |branch: Branch| -> Result<Vec<HoLevel<T>>> {
        (0..levels)
            .map(|n| {
                let energy = ho_limit_spectrum(n, nu, h.omega, branch)?;
                Ok(HoLevel {
                    n,
                    energy,
                    energy_over_omega: energy / h.omega,
                    branch,
                })
            })
            .collect()
    };
    match ext.lambda {
        Lambda::Infinite => ladder(Branch::Irregular),
        Lambda::Finite(l) if l == T::zero() => ladder(Branch::Regular),
        Lambda::Finite(l) => {
            let rhs = -gamma_ratio_sym(nu)? / (l * (h.mass * h.omega).powf(nu));
            solve_spectral(rhs, nu, h.omega, levels)
        }
    }
}

/// Extension parameter paired with the oscillator problem:
/// `1/λ = 2R / r0^{2ν}`.
pub fn extension_param_ho<T: Real>(r0: T, p: &ChannelParams<T>) -> Result<ExtensionParam<T>> {
    positive("r0", r0)?;
    let ch = modified(p)?;
    let ratio = coupling_ratio(p)?;
    let inv = T::lit(2.0) * ratio / r0.powf(T::lit(2.0) * ch.nu);
    Ok(ExtensionParam {
        lambda: if inv == T::zero() {
            Lambda::Infinite
        } else {
            Lambda::Finite(inv.recip())
        },
        nu: ch.nu,
        provenance: Provenance::Physical {
            r0,
            coupling_ratio: ratio,
        },
    })
}

/// `(1/λ_ho) / (1/λ)` for the same channel and radius.
pub fn extension_ratio_ho_to_ab<T: Real>(r0: T, p: &ChannelParams<T>) -> Result<T> {
    let ho = extension_param_ho(r0, p)?.lambda.recip();
    let ab = crate::bound::extension_param(r0, p)?.lambda.recip();
    if ab == T::zero() {
        return Err(Error::SingularCoupling {
            j_abs: effective_channel(p).j.abs().as_f64(),
        });
    }
    Ok(ho / ab)
}

/// Normalized radial function of an oscillator level.
///
/// With `x = r √(Mω)`: regular levels use `x^ν e^{−x²/2} M(−n, 1+ν, x²)`,
/// the others `x^ν e^{−x²/2} U(d, 1+ν, x²)` with `d = (1+ν)/2 − E/2ω`.
#[derive(Debug, Clone, Copy)]
pub struct HoWavefunction<T> {
    pub nu: T,
    pub energy: T,
    pub branch: Branch,
    pub n: usize,
    /// `√(Mω)`.
    pub inv_length: T,
    pub norm: T,
    d: T,
    /// `Γ(ν)/Γ(d)` and `Γ(−ν)/Γ(d−ν)`, the small-`x` coefficients of `U` form.
    small_x: (T, T),
}

/// Below this `x` the U-based form is replaced by its two leading terms.
const SMALL_X: f64 = 1e-6;

impl<T: Real> HoWavefunction<T> {
    fn shape(&self, x: T) -> Result<T> {
        let ctl = SeriesControl::default();
        let z = x * x;
        let envelope = x.powf(self.nu) * (-z / T::lit(2.0)).exp();
        match self.branch {
            Branch::Regular => Ok(envelope * kummer_m(-T::int(self.n as i64), T::one() + self.nu, z, ctl)?),
            _ => {
                if x < T::lit(SMALL_X) {
                    return Ok(self.small_x.0 * x.powf(-self.nu) + self.small_x.1 * x.powf(self.nu));
                }
                let u = tricomi_u(self.d, T::one() + self.nu, z, ctl)?;
                let v = envelope * u;
                if !v.is_finite() && x > T::lit(10.0) {
                    return Ok(T::zero());
                }
                Ok(v)
            }
        }
    }

    /// `x^ν · shape(x)` near the origin, finite for every branch.
    fn scaled_shape(&self, x: T) -> Result<T> {
        if self.branch != Branch::Regular && x < T::lit(SMALL_X) {
            return Ok(self.small_x.0 + self.small_x.1 * x.powf(T::lit(2.0) * self.nu));
        }
        Ok(x.powf(self.nu) * self.shape(x)?)
    }

    pub fn value(&self, r: T) -> Result<T> {
        Ok(self.norm * self.shape(r * self.inv_length)?)
    }
}

/// Wavefunction of `level` normalized so that `∫₀^∞ χ² r dr = 1`.
pub fn ho_wavefunction<T: Real>(level: &HoLevel<T>, h: &HoParams<T>) -> Result<HoWavefunction<T>> {
    positive("omega", h.omega)?;
    positive("mass", h.mass)?;
    let nu = effective_channel(&h.channel).nu;
    if level.branch != Branch::Regular && !(nu > T::zero() && nu < T::one()) {
        return Err(Error::RegularChannel { nu: nu.as_f64() });
    }
    let half = T::lit(0.5);
    let d = half * (T::one() + nu) - level.energy / (T::lit(2.0) * h.omega);
    let small_x = if level.branch == Branch::Regular {
        (T::zero(), T::zero())
    } else {
        (gamma(nu)? * recip_gamma(d), gamma(-nu)? * recip_gamma(d - nu))
    };
    let mut wf = HoWavefunction {
        nu,
        energy: level.energy,
        branch: level.branch,
        n: level.n,
        inv_length: (h.mass * h.omega).sqrt(),
        norm: T::one(),
        d,
        small_x,
    };
    let integral = shape_norm_integral(&wf)?;
    // ∫ χ² r dr = ∫ shape(x)² x dx / (Mω)
    wf.norm = wf.inv_length / integral.sqrt();
    Ok(wf)
}

fn shape_norm_integral<T: Real>(wf: &HoWavefunction<T>) -> Result<T> {
    let ctl = QuadControl::with_rel_tol(T::lit(1e-12));
    let failure = std::cell::RefCell::new(None);
    let record = |r: Result<T>| match r {
        Ok(v) => v,
        Err(e) => {
            failure.borrow_mut().get_or_insert(e);
            T::zero()
        }
    };
    let regular = wf.branch == Branch::Regular;
    // x = u^p: the integrand x·shape² behaves like u near the origin. Regular
    // levels vanish there already and any ν is allowed, so they skip it.
    let p = if regular { T::one() } else { (T::one() - wf.nu).recip() };
    let inner = integrate(
        |u: T| {
            if regular {
                let s = record(wf.shape(u));
                return u * s * s;
            }
            if u == T::zero() {
                return T::zero();
            }
            let x = u.powf(p);
            let s = record(wf.scaled_shape(x));
            // p u^{p−1} · x · shape² = p u^{p−1} x^{1−2ν} (x^ν shape)²
            p * u.powf(p - T::one()) * x.powf(T::one() - T::lit(2.0) * wf.nu) * s * s
        },
        T::zero(),
        T::one(),
        ctl,
    );
    let outer = integrate_to_infinity(
        |x: T| {
            let s = record(wf.shape(x));
            x * s * s
        },
        T::one(),
        ctl,
    );
    if let Some(e) = failure.into_inner() {
        return Err(e);
    }
    if !(inner.converged && outer.converged) {
        return Err(Error::Convergence {
            function: "ho_wavefunction normalization",
            terms: ctl.max_intervals,
        });
    }
    Ok(inner.value + outer.value)
}
