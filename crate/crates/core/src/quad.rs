//! Globally adaptive Gauss–Kronrod (7/15) quadrature.

use crate::scalar::Real;

const XGK: [f64; 8] = [
    0.991_455_371_120_812_639_206_854_697_526_329,
    0.949_107_912_342_758_524_526_189_684_047_851,
    0.864_864_423_359_769_072_789_712_788_640_926,
    0.741_531_185_599_394_439_863_864_773_280_788,
    0.586_087_235_467_691_130_294_144_845_693_013,
    0.405_845_151_377_397_166_906_606_412_076_961,
    0.207_784_955_007_898_467_600_689_403_773_245,
    0.0,
];

const WGK: [f64; 8] = [
    0.022_935_322_010_529_224_963_732_008_058_970,
    0.063_092_092_629_978_553_290_700_663_189_204,
    0.104_790_010_322_250_183_839_876_322_541_518,
    0.140_653_259_715_525_918_745_189_590_510_238,
    0.169_004_726_639_267_902_826_583_426_598_550,
    0.190_350_578_064_785_409_913_256_402_421_014,
    0.204_432_940_075_298_892_414_161_999_234_649,
    0.209_482_141_084_727_828_012_999_174_891_714,
];

// Gauss weights for XGK[1], XGK[3], XGK[5], XGK[7]
const WG: [f64; 4] = [
    0.129_484_966_168_869_693_270_611_432_679_082,
    0.279_705_391_489_276_667_901_467_771_423_780,
    0.381_830_050_505_118_944_950_369_775_488_975,
    0.417_959_183_673_469_387_755_102_040_816_327,
];

#[derive(Debug, Clone, Copy)]
pub struct QuadControl<T> {
    pub rel_tol: T,
    pub abs_tol: T,
    pub max_intervals: usize,
}

impl<T: Real> Default for QuadControl<T> {
    fn default() -> Self {
        Self {
            rel_tol: T::lit(1e-12).max(T::epsilon() * T::lit(50.0)),
            abs_tol: T::zero(),
            max_intervals: 2000,
        }
    }
}

impl<T: Real> QuadControl<T> {
    pub fn with_rel_tol(rel_tol: T) -> Self {
        Self {
            rel_tol,
            ..Self::default()
        }
    }
}

#[derive(Debug, Clone, Copy)]
pub struct Quadrature<T> {
    pub value: T,
    pub abs_error: T,
    pub converged: bool,
}

#[derive(Clone, Copy)]
struct Segment<T> {
    a: T,
    b: T,
    value: T,
    error: T,
}

fn kronrod<T: Real, F: Fn(T) -> T>(f: &F, a: T, b: T) -> Segment<T> {
    let half = T::lit(0.5);
    let center = half * (a + b);
    let half_len = half * (b - a);
    let fc = f(center);
    let mut resk = fc * T::lit(WGK[7]);
    let mut resg = fc * T::lit(WG[3]);
    for j in 0..7 {
        let dx = half_len * T::lit(XGK[j]);
        let pair = f(center - dx) + f(center + dx);
        resk = resk + T::lit(WGK[j]) * pair;
        if j % 2 == 1 {
            resg = resg + T::lit(WG[j / 2]) * pair;
        }
    }
    Segment {
        a,
        b,
        value: resk * half_len,
        error: ((resk - resg) * half_len).abs(),
    }
}

/// Integrates `f` over `[a, b]`, bisecting the segment with the largest
/// error estimate until the requested tolerance is met.
pub fn integrate<T: Real, F: Fn(T) -> T>(f: F, a: T, b: T, ctl: QuadControl<T>) -> Quadrature<T> {
    let mut segments = vec![kronrod(&f, a, b)];
    loop {
        let value: T = segments.iter().map(|s| s.value).sum();
        let error: T = segments.iter().map(|s| s.error).sum();
        let target = ctl.abs_tol.max(ctl.rel_tol * value.abs());
        if error <= target || !error.is_finite() {
            return Quadrature {
                value,
                abs_error: error,
                converged: error.is_finite(),
            };
        }
        if segments.len() >= ctl.max_intervals {
            return Quadrature {
                value,
                abs_error: error,
                converged: false,
            };
        }
        let (worst, _) =
            segments.iter().enumerate().fold(
                (0, T::neg_infinity()),
                |acc, (i, s)| if s.error > acc.1 { (i, s.error) } else { acc },
            );
        let seg = segments.swap_remove(worst);
        let mid = T::lit(0.5) * (seg.a + seg.b);
        if mid <= seg.a || mid >= seg.b {
            // segment cannot be split further in this precision
            segments.push(Segment {
                error: T::zero(),
                ..seg
            });
            continue;
        }
        segments.push(kronrod(&f, seg.a, mid));
        segments.push(kronrod(&f, mid, seg.b));
    }
}

/// Integrates `f` over `[a, ∞)` through the map `t = a + s/(1−s)`.
pub fn integrate_to_infinity<T: Real, F: Fn(T) -> T>(f: F, a: T, ctl: QuadControl<T>) -> Quadrature<T> {
    let one = T::one();
    let g = |s: T| {
        let w = one - s;
        if w <= T::zero() {
            return T::zero();
        }
        let v = f(a + s / w) / (w * w);
        if v.is_finite() {
            v
        } else {
            T::zero()
        }
    };
    integrate(g, T::zero(), one, ctl)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn polynomial_is_exact_on_one_segment() {
        let q = integrate(|x: f64| x.powi(20), 0.0, 1.0, QuadControl::default());
        assert!((q.value - 1.0 / 21.0).abs() < 1e-15);
        assert!(q.converged);
    }

    #[test]
    fn smooth_and_singular_integrands() {
        let q = integrate(|x: f64| x.exp(), 0.0, 2.0, QuadControl::default());
        assert!((q.value - (2.0_f64.exp() - 1.0)).abs() < 1e-13);

        // integrable endpoint singularity
        let q = integrate(|x: f64| x.powf(-0.5), 0.0, 1.0, QuadControl::with_rel_tol(1e-10));
        assert!((q.value - 2.0).abs() < 1e-9, "{}", q.value);

        let q = integrate_to_infinity(|x: f64| (-x).exp(), 0.0, QuadControl::default());
        assert!((q.value - 1.0).abs() < 1e-12);
        let q = integrate_to_infinity(|x: f64| 1.0 / (1.0 + x * x), 0.0, QuadControl::default());
        assert!((q.value - std::f64::consts::FRAC_PI_2).abs() < 1e-11);
    }
}
