//! Phase shifts, S-matrix elements, S-matrix poles and the partial-wave
//! scattering amplitude.

use std::collections::BTreeMap;

use num_complex::Complex;

use crate::bound::{positive, ExtensionParam, Lambda};
use crate::channel::{effective_channel, modified_channels, ChannelParams, EffectiveChannel};
use crate::error::{Error, Result};
use crate::roots::{bisect, Bisection};
use crate::scalar::{cos_pi, sin_pi, Real};
use crate::specfun::gamma;

/// Relative size of the `μ` denominator below which it counts as zero.
pub const POLE_AT_K_TOLERANCE: f64 = 1e-14;

/// Plain Aharonov–Bohm phase `(π/2)(|m| − |m+φ|)`.
pub fn ab_phase<T: Real>(m: i64, phi: T) -> T {
    let mf = T::int(m);
    T::FRAC_PI_2() * (mf.abs() - (mf + phi).abs())
}

/// `A = λ k^{2ν} Γ(1−ν)` and `B = 4^ν Γ(1+ν)` for finite `λ`.
fn ab_coefficients<T: Real>(lambda: T, nu: T, k: T) -> Result<(T, T)> {
    let two = T::lit(2.0);
    let a = lambda * k.powf(two * nu) * gamma(T::one() - nu)?;
    let b = T::lit(4.0).powf(nu) * gamma(T::one() + nu)?;
    Ok((a, b))
}

fn check_k<T: Real>(k: T) -> Result<()> {
    positive("k", k)
}

/// `μ = A sin πν / (A cos πν + B)`, so that `e^{2i arctan μ}` is the ratio
/// in [`s_element`]; `tan πν` for infinite `λ`.
pub fn mu<T: Real>(ext: &ExtensionParam<T>, k: T) -> Result<T> {
    check_k(k)?;
    let (s, c) = (sin_pi(ext.nu), cos_pi(ext.nu));
    match ext.lambda {
        Lambda::Infinite => {
            if c == T::zero() {
                Err(Error::PoleAtK { k: k.as_f64() })
            } else {
                Ok(s / c)
            }
        }
        Lambda::Finite(l) => {
            let (a, b) = ab_coefficients(l, ext.nu, k)?;
            let den = a * c + b;
            if den.abs() < T::lit(POLE_AT_K_TOLERANCE) * a.abs().max(b.abs()) {
                return Err(Error::PoleAtK { k: k.as_f64() });
            }
            Ok(a * s / den)
        }
    }
}

/// `δ = Δ_AB + arctan μ` on the principal branch.
pub fn phase_shift<T: Real>(ext: &ExtensionParam<T>, p: &ChannelParams<T>, k: T) -> Result<T> {
    Ok(ab_phase(p.m, p.phi) + mu(ext, k)?.atan())
}

/// S-matrix element `e^{2iΔ}(A e^{iπν} + B)/(A e^{−iπν} + B)`.
///
/// Finite for every real input, including wavenumbers where `μ` diverges.
pub fn s_element<T: Real>(ext: &ExtensionParam<T>, p: &ChannelParams<T>, k: T) -> Result<Complex<T>> {
    check_k(k)?;
    let two_delta = T::lit(2.0) * ab_phase(p.m, p.phi);
    let nu = ext.nu;
    match ext.lambda {
        Lambda::Infinite => Ok(Complex::from_polar(T::one(), two_delta + T::lit(2.0) * T::PI() * nu)),
        Lambda::Finite(l) if l == T::zero() => Ok(Complex::from_polar(T::one(), two_delta)),
        Lambda::Finite(l) => {
            let (a, b) = ab_coefficients(l, nu, k)?;
            let (s, c) = (sin_pi(nu), cos_pi(nu));
            let num = Complex::new(a * c + b, a * s);
            let den = Complex::new(a * c + b, -a * s);
            Ok(Complex::from_polar(T::one(), two_delta) * num / den)
        }
    }
}

/// The same element written through `μ`: `e^{2iΔ}(1+iμ)/(1−iμ)`.
pub fn s_element_mu_form<T: Real>(ext: &ExtensionParam<T>, p: &ChannelParams<T>, k: T) -> Result<Complex<T>> {
    let mu = mu(ext, k)?;
    let two_delta = T::lit(2.0) * ab_phase(p.m, p.phi);
    let num = Complex::new(T::one(), mu);
    let den = Complex::new(T::one(), -mu);
    Ok(Complex::from_polar(T::one(), two_delta) * num / den)
}

/// One scattering evaluation. `mu` is `None` at a pole of `μ`, where the
/// phase shift is continued across the jump by [`phase_shift_sweep`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ScatterRecord<T> {
    pub k: T,
    pub m: i64,
    pub channel: EffectiveChannel<T>,
    pub mu: Option<T>,
    pub delta: Option<T>,
    pub s_element: Complex<T>,
    pub pole_at_k: bool,
}

pub fn scatter_record<T: Real>(ext: &ExtensionParam<T>, p: &ChannelParams<T>, k: T) -> Result<ScatterRecord<T>> {
    let s = s_element(ext, p, k)?;
    let (mu, pole) = match mu(ext, k) {
        Ok(v) => (Some(v), false),
        Err(Error::PoleAtK { .. }) => (None, true),
        Err(e) => return Err(e),
    };
    Ok(ScatterRecord {
        k,
        m: p.m,
        channel: effective_channel(p),
        mu,
        delta: mu.map(|v| ab_phase(p.m, p.phi) + v.atan()),
        s_element: s,
        pole_at_k: pole,
    })
}

/// Phase shifts over ascending `ks`, shifted by multiples of `π` so that `δ`
/// is continuous. A record whose predecessor sits on the other side of a
/// `μ` pole gets `pole_at_k` set; a record exactly on a pole keeps
/// `delta = None`.
pub fn phase_shift_sweep<T: Real>(
    ext: &ExtensionParam<T>,
    p: &ChannelParams<T>,
    ks: &[T],
) -> Result<Vec<ScatterRecord<T>>> {
    let mut out = Vec::with_capacity(ks.len());
    let mut prev: Option<T> = None;
    let mut offset = T::zero();
    let pi = T::PI();
    for &k in ks {
        let mut rec = scatter_record(ext, p, k)?;
        if let Some(d) = rec.delta {
            let mut d = d + offset;
            if let Some(pd) = prev {
                let jumps = ((pd - d) / pi).round();
                if jumps != T::zero() {
                    offset = offset + jumps * pi;
                    d = d + jumps * pi;
                    rec.pole_at_k = true;
                }
            }
            rec.delta = Some(d);
            prev = Some(d);
        }
        out.push(rec);
    }
    Ok(out)
}

/// Energies `−κ²/(2M)` of the S-matrix poles on the positive imaginary
/// `k` axis with `κ ≤ kappa_max`.
///
/// At `k = iκ` the denominator `λ (iκ)^{2ν} Γ(1−ν) e^{−iπν} + B` is real and
/// equals `λ κ^{2ν} Γ(1−ν) + B`; its sign changes are located on a
/// logarithmic grid and refined by bisection in `ln κ`.
pub fn s_pole_energies<T: Real>(ext: &ExtensionParam<T>, mass: T, kappa_max: T) -> Result<Vec<T>> {
    positive("mass", mass)?;
    positive("kappa_max", kappa_max)?;
    let lambda = match ext.lambda {
        Lambda::Finite(l) if l < T::zero() => l,
        _ => return Ok(Vec::new()),
    };
    let nu = ext.nu;
    let g_minus = gamma(T::one() - nu)?;
    let b = T::lit(4.0).powf(nu) * gamma(T::one() + nu)?;
    let denominator = |t: T| {
        let kappa = t.exp();
        // (iκ)^{2ν} e^{−iπν} = κ^{2ν}; the imaginary part cancels
        let ik = Complex::new(T::zero(), kappa).powf(T::lit(2.0) * nu);
        let val = ik * Complex::from_polar(lambda * g_minus, -T::PI() * nu) + Complex::new(b, T::zero());
        val.re
    };
    let hi = kappa_max.ln();
    let lo = hi - T::lit(30.0) * T::LN_10();
    let steps = 600;
    let h = (hi - lo) / T::int(steps);
    let ctl = Bisection {
        rel_tol: T::lit(1e-15),
        max_iter: 200,
    };
    let mut energies = Vec::new();
    let mut t0 = lo;
    let mut f0 = denominator(t0);
    for i in 1..=steps {
        let t1 = lo + h * T::int(i);
        let f1 = denominator(t1);
        if f0 == T::zero() || (f0 > T::zero()) != (f1 > T::zero()) {
            let root = if f0 == T::zero() {
                t0
            } else {
                bisect(denominator, t0, t1, ctl)?.x
            };
            let kappa = root.exp();
            energies.push(-kappa * kappa / (T::lit(2.0) * mass));
        }
        t0 = t1;
        f0 = f1;
    }
    Ok(energies)
}

/// Scattering geometry shared by all partial waves.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Geometry<T> {
    pub alpha: T,
    pub phi: T,
    pub s: i8,
}

impl<T: Real> Geometry<T> {
    pub fn channel(&self, m: i64) -> ChannelParams<T> {
        ChannelParams {
            alpha: self.alpha,
            phi: self.phi,
            s: self.s,
            m,
        }
    }
}

/// Default Abel smoothing factor.
pub const DEFAULT_SMOOTHING: f64 = 1.0 - 1e-4;

/// Scattering angles closer than this to the forward direction are flagged.
pub const FORWARD_ANGLE: f64 = 0.05;

/// Relative size of the outermost ring that triggers a truncation warning.
pub const TRUNCATION_THRESHOLD: f64 = 1e-6;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AmplitudeRequest<T> {
    pub k: T,
    pub theta: T,
    pub m_max: u64,
    /// Abel factor `t` in `(0, 1]`, applied as `t^{|m|}` to regular channels.
    pub smoothing: T,
}

impl<T: Real> AmplitudeRequest<T> {
    /// Request with the default smoothing and a truncation of
    /// `⌈20/(1−t)⌉` rings, so that `t^{m_max} ≈ e^{−20}`.
    pub fn new(k: T, theta: T) -> Self {
        let smoothing = T::lit(DEFAULT_SMOOTHING);
        AmplitudeRequest {
            k,
            theta,
            m_max: default_m_max(smoothing),
            smoothing,
        }
    }
}

pub fn default_m_max<T: Real>(smoothing: T) -> u64 {
    if smoothing < T::one() {
        (T::lit(20.0) / (T::one() - smoothing))
            .ceil()
            .to_u64()
            .unwrap_or(u64::MAX)
            .min(1 << 40)
    } else {
        2000
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum AmplitudeWarning {
    /// The ring `|m| = m_max` contributes more than [`TRUNCATION_THRESHOLD`] of `|f|`.
    Truncation { last_ring: f64 },
    /// `|θ| <` [`FORWARD_ANGLE`]: the partial-wave series does not converge there.
    ForwardAngle,
}

impl AmplitudeWarning {
    pub fn name(&self) -> &'static str {
        match self {
            AmplitudeWarning::Truncation { .. } => "TruncationWarning",
            AmplitudeWarning::ForwardAngle => "ForwardAngleWarning",
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Amplitude<T> {
    pub value: Complex<T>,
    pub warnings: Vec<AmplitudeWarning>,
}

impl<T: Real> Amplitude<T> {
    pub fn cross_section(&self) -> T {
        self.value.norm_sqr()
    }
}

/// Extension parameters of every modified channel for a flux tube of radius `r0`.
pub fn physical_extensions<T: Real>(geometry: &Geometry<T>, r0: T) -> Result<BTreeMap<i64, ExtensionParam<T>>> {
    modified_channels(geometry.alpha, geometry.phi)
        .into_iter()
        .map(|m| Ok((m, crate::bound::extension_param(r0, &geometry.channel(m))?)))
        .collect()
}

/// Partial-wave amplitude
/// `f = (2πik)^{−1/2} [Σ_regular (e^{2iΔ}−1) t^{|m|} e^{imθ} + Σ_modified (S_m − 1) e^{imθ}]`.
///
/// Beyond `|m| = ⌊|φ|⌋ + 2` the regular term `e^{2iΔ} − 1` no longer depends
/// on `m`, so the truncated tail is summed in closed form as a geometric
/// series.
pub fn amplitude<T: Real>(
    req: &AmplitudeRequest<T>,
    geometry: &Geometry<T>,
    ext_map: &BTreeMap<i64, ExtensionParam<T>>,
) -> Result<Amplitude<T>> {
    check_k(req.k)?;
    geometry.channel(0).validate()?;
    let t = req.smoothing;
    if !(t > T::zero() && t <= T::one()) {
        return Err(Error::Domain {
            function: "amplitude",
            detail: format!("smoothing = {} not in (0, 1]", t.as_f64()),
        });
    }
    let modified = modified_channels(geometry.alpha, geometry.phi);
    let largest = modified.iter().map(|m| m.unsigned_abs()).max().unwrap_or(0);
    if req.m_max < largest + 5 {
        return Err(Error::Domain {
            function: "amplitude",
            detail: format!("m_max = {} below {}", req.m_max, largest + 5),
        });
    }
    let one = Complex::new(T::one(), T::zero());
    let phase = |m: i64| Complex::from_polar(T::one(), T::int(m) * req.theta);
    let ab_term = |m: i64| Complex::from_polar(T::one(), T::lit(2.0) * ab_phase(m, geometry.phi)) - one;

    let mut sum = Complex::new(T::zero(), T::zero());
    for &m in &modified {
        let ext = ext_map.get(&m).ok_or_else(|| Error::Domain {
            function: "amplitude",
            detail: format!("no extension parameter for channel m = {m}"),
        })?;
        let s = s_element(ext, &geometry.channel(m), req.k)?;
        sum = sum + (s - one) * phase(m);
    }

    let m_max = req.m_max as i64;
    let m0 = (geometry.phi.abs().floor().to_i64().unwrap_or(0) + 2).min(m_max + 1);
    for m in -(m0 - 1)..m0 {
        if m.unsigned_abs() > req.m_max || modified.contains(&m) {
            continue;
        }
        sum = sum + ab_term(m) * t.powi(m.unsigned_abs() as i32) * phase(m);
    }
    // rings m0..=m_max on both sides
    let mut last_ring = T::zero();
    if m0 <= m_max {
        let count = (m_max - m0 + 1) as u64;
        for sign in [1_i64, -1] {
            let c = ab_term(sign * m0);
            if c == Complex::new(T::zero(), T::zero()) {
                continue;
            }
            let z = Complex::from_polar(t, T::int(sign) * req.theta);
            sum = sum + c * geometric(z, m0 as u64, count);
            last_ring = last_ring + c.norm() * t.powf(T::int(m_max));
        }
    }

    let prefactor = Complex::from_polar((T::lit(2.0) * T::PI() * req.k).sqrt().recip(), -T::FRAC_PI_4());
    let value = prefactor * sum;
    let mut warnings = Vec::new();
    let last_ring = last_ring * prefactor.norm();
    if last_ring > T::lit(TRUNCATION_THRESHOLD) * value.norm() {
        warnings.push(AmplitudeWarning::Truncation {
            last_ring: last_ring.as_f64(),
        });
    }
    if req.theta.abs() < T::lit(FORWARD_ANGLE) {
        warnings.push(AmplitudeWarning::ForwardAngle);
    }
    Ok(Amplitude { value, warnings })
}

/// `Σ_{n=start}^{start+count−1} z^n`.
fn geometric<T: Real>(z: Complex<T>, start: u64, count: u64) -> Complex<T> {
    let one = Complex::new(T::one(), T::zero());
    let first = z.powf(T::int(start as i64));
    let diff = one - z;
    if diff.norm() < T::lit(1e-8) {
        // t = 1 and θ ≈ 0: sum term by term would be exact but unbounded in
        // length, the closed form 1−z^N over 1−z loses all digits
        let n = T::int(count as i64);
        return first * n;
    }
    first * (one - z.powf(T::int(count as i64))) / diff
}

/// `|f|²`.
pub fn diff_cross_section<T: Real>(
    req: &AmplitudeRequest<T>,
    geometry: &Geometry<T>,
    ext_map: &BTreeMap<i64, ExtensionParam<T>>,
) -> Result<T> {
    amplitude(req, geometry, ext_map).map(|a| a.cross_section())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bound::{energy_bg, Provenance};

    fn ext(lambda: f64, nu: f64) -> ExtensionParam<f64> {
        ExtensionParam::user(Lambda::Finite(lambda), nu).unwrap()
    }

    #[test]
    fn ab_phase_values() {
        assert_eq!(ab_phase(0, 0.0), 0.0);
        assert_eq!(ab_phase(0, 0.5), -std::f64::consts::FRAC_PI_4);
        assert_eq!(ab_phase(-1, 0.5), std::f64::consts::FRAC_PI_4);
    }

    #[test]
    fn mu_values() {
        assert_eq!(mu(&ext(0.0, 0.3), 2.0).unwrap(), 0.0);
        // ν = 1/2: μ = λk
        assert!((mu(&ext(-2.0, 0.5), 0.5).unwrap() + 1.0).abs() < 1e-14);
        assert!((mu(&ext(3.0, 0.5), 0.7).unwrap() - 2.1).abs() < 1e-14);
        let inf = ExtensionParam::user(Lambda::Infinite, 0.3).unwrap();
        assert!((mu(&inf, 1.0).unwrap() - (0.3 * std::f64::consts::PI).tan()).abs() < 1e-14);
        let big = mu(&ext(1e12, 0.3), 1.0).unwrap();
        assert!((big - (0.3 * std::f64::consts::PI).tan()).abs() < 1e-10);
    }

    #[test]
    fn phase_shift_values() {
        let p = ChannelParams::new(1.0, -1.5, 1, 1).unwrap();
        let d = phase_shift(&ext(-2.0, 0.5), &p, 0.5).unwrap();
        assert!((d - (ab_phase(1, -1.5) - std::f64::consts::FRAC_PI_4)).abs() < 1e-15);
        assert_eq!(phase_shift(&ext(0.0, 0.5), &p, 0.5).unwrap(), ab_phase(1, -1.5));
    }

    #[test]
    fn pole_of_mu() {
        // ν = 0.7: cos πν < 0, so A cos πν + B vanishes for some λ > 0
        let nu = 0.7;
        let k = 1.0;
        let a_unit = gamma(1.0 - nu).unwrap();
        let b = 4f64.powf(nu) * gamma(1.0 + nu).unwrap();
        let lambda = -b / (a_unit * (std::f64::consts::PI * nu).cos());
        assert!(matches!(mu(&ext(lambda, nu), k), Err(Error::PoleAtK { .. })));
        let p = ChannelParams::new(1.0, -0.7, 1, 0).unwrap();
        let s = s_element(&ext(lambda, nu), &p, k).unwrap();
        assert!((s.norm() - 1.0).abs() < 1e-14);
    }

    #[test]
    fn sweep_is_continuous_across_pole() {
        let nu = 0.7;
        let p = ChannelParams::new(1.0, -0.7, 1, 0).unwrap();
        let e = ext(2.0, nu);
        let ks: Vec<f64> = (0..400).map(|i| 0.01 * 1.03_f64.powi(i)).collect();
        let recs = phase_shift_sweep(&e, &p, &ks).unwrap();
        assert!(recs.iter().any(|r| r.pole_at_k));
        for w in recs.windows(2) {
            let (a, b) = (w[0].delta.unwrap(), w[1].delta.unwrap());
            assert!((a - b).abs() < 0.5, "jump between {a} and {b}");
        }
    }

    #[test]
    fn pole_energy_matches_bound_state() {
        let e = ext(-1.0, 0.5);
        let poles = s_pole_energies(&e, 1.0, 100.0).unwrap();
        assert_eq!(poles.len(), 1);
        assert!((poles[0] + 0.5).abs() < 1e-12);
        assert!(s_pole_energies(&ext(1.0, 0.5), 1.0, 100.0).unwrap().is_empty());
        let bg = energy_bg(1.0, &e).unwrap().energy;
        assert!(((poles[0] - bg) / bg).abs() < 1e-12);
    }

    #[test]
    fn flat_fluxless_amplitude_vanishes() {
        let g = Geometry {
            alpha: 1.0,
            phi: 0.0,
            s: 1,
        };
        for theta in [0.3, 1.0, 3.0] {
            let a = amplitude(&AmplitudeRequest::new(1.0, theta), &g, &BTreeMap::new()).unwrap();
            assert_eq!(a.value, Complex::new(0.0, 0.0));
            assert!(a.warnings.is_empty());
        }
    }

    #[test]
    fn geometric_tail_matches_direct_sum() {
        let g = Geometry {
            alpha: 0.8,
            phi: 0.37,
            s: -1,
        };
        let exts = physical_extensions(&g, 0.1).unwrap();
        let req = AmplitudeRequest {
            k: 1.3,
            theta: 2.0,
            m_max: 300,
            smoothing: 0.98,
        };
        let fast = amplitude(&req, &g, &exts).unwrap().value;
        let modified = modified_channels(g.alpha, g.phi);
        let mut direct = Complex::new(0.0, 0.0);
        for m in -300_i64..=300 {
            let term = if modified.contains(&m) {
                s_element(&exts[&m], &g.channel(m), req.k).unwrap() - 1.0
            } else {
                (Complex::from_polar(1.0, 2.0 * ab_phase(m, g.phi)) - 1.0) * 0.98_f64.powi(m.abs() as i32)
            };
            direct += term * Complex::from_polar(1.0, m as f64 * req.theta);
        }
        direct *= Complex::from_polar(
            1.0 / (2.0 * std::f64::consts::PI * req.k).sqrt(),
            -std::f64::consts::FRAC_PI_4,
        );
        assert!((fast - direct).norm() < 1e-12 * direct.norm());
    }

    #[test]
    fn missing_extension_is_an_error() {
        let g = Geometry {
            alpha: 1.0,
            phi: 0.5,
            s: 1,
        };
        assert!(amplitude(&AmplitudeRequest::new(1.0, 1.0), &g, &BTreeMap::new()).is_err());
    }

    #[test]
    fn provenance_is_physical() {
        let g = Geometry {
            alpha: 1.0,
            phi: -1.5,
            s: 1,
        };
        let exts = physical_extensions(&g, 1.0).unwrap();
        assert!(matches!(exts[&1].provenance, Provenance::Physical { .. }));
    }
}
