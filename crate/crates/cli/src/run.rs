//! One function per subcommand, each turning a parameter point into records.

use std::collections::BTreeMap;
use std::f64::consts::PI;

use abcone::bound::{energy_bg, energy_ks, energy_ks_oracle, extension_param, ExtensionParam, Lambda, Provenance};
use abcone::channel::{
    bound_existence, classify, coupling_ratio, effective_channel, modified_channels, ChannelParams, EffectiveChannel,
};
use abcone::oscillator::{
    extension_param_ho, extension_ratio_ho_to_ab, ho_limit_spectrum, solve_ho_bg, solve_ho_ks, spectral_lhs, Branch,
    HoLevel, HoParams,
};
use abcone::scatter::{amplitude, default_m_max, physical_extensions, scatter_record, AmplitudeRequest, Geometry};
use abcone::verify::CriterionReport;
use abcone::Error;

use crate::args::{LambdaMode, Params};
use crate::record::Record;

pub const CHANNELS: &[&str] = &["alpha", "phi", "s", "m", "j", "nu", "g", "scenario", "bound_state"];
pub const BOUND: &[&str] = &[
    "alpha",
    "phi",
    "s",
    "m",
    "mass",
    "r0",
    "lambda_mode",
    "nu",
    "lambda",
    "energy_ks",
    "energy_bg",
    "energy_oracle",
    "agreement",
];
pub const SCATTER: &[&str] = &[
    "alpha",
    "phi",
    "s",
    "m",
    "r0",
    "k",
    "lambda_mode",
    "j",
    "nu",
    "lambda",
    "mu",
    "delta",
    "s_re",
    "s_im",
    "pole_at_k",
];
pub const AMPLITUDE: &[&str] = &[
    "alpha",
    "phi",
    "s",
    "r0",
    "k",
    "theta",
    "lambda_mode",
    "smoothing",
    "m_max",
    "f_re",
    "f_im",
    "dsigma",
];
pub const HO: &[&str] = &[
    "alpha",
    "phi",
    "s",
    "m",
    "mass",
    "r0",
    "omega",
    "lambda_mode",
    "nu",
    "n",
    "branch",
    "energy",
    "energy_over_omega",
    "rung_regular",
    "rung_irregular",
    "nearest_pole",
    "nearest_zero",
    "lambda",
    "lambda_ho",
    "lambda_ratio",
    "free_energy",
];
pub const VERIFY: &[&str] = &["id", "name", "passed", "detail", "elapsed_s"];

pub fn schema_help(schema: &[&str]) -> String {
    format!(
        "CSV columns, in order: {}\nJSON records carry the same keys, one object per line.",
        Record::csv_header(schema)
    )
}

/// Records of one parameter point and whether the point as a whole failed.
pub struct Point {
    pub records: Vec<Record>,
    pub failed: bool,
}

fn channel(p: &Params) -> ChannelParams<f64> {
    ChannelParams {
        alpha: p.alpha,
        phi: p.phi,
        s: p.spin as i8,
        m: p.m,
    }
}

fn echo_channel(r: &mut Record, c: &ChannelParams<f64>) {
    r.num("alpha", c.alpha)
        .num("phi", c.phi)
        .int("s", c.s as i64)
        .int("m", c.m);
}

fn put_lambda(r: &mut Record, name: &str, l: Lambda<f64>) {
    match l {
        Lambda::Finite(v) => {
            r.num(name, v);
        }
        Lambda::Infinite => {
            r.missing(name, "infinite");
        }
    }
}

/// Extension parameter of a modified channel under the chosen mode.
fn extension(mode: LambdaMode, r0: f64, c: &ChannelParams<f64>, nu: f64) -> Result<ExtensionParam<f64>, Error> {
    match mode {
        LambdaMode::Physical => extension_param(r0, c),
        LambdaMode::Manual(v) => ExtensionParam::user(Lambda::Finite(v), nu),
        LambdaMode::Dirichlet => ExtensionParam::user(Lambda::Finite(0.0), nu),
        LambdaMode::Infinite => ExtensionParam::user(Lambda::Infinite, nu),
    }
}

pub fn channels(p: &Params) -> Point {
    let records = modified_channels(p.alpha, p.phi)
        .into_iter()
        .map(|m| {
            let c = ChannelParams { m, ..channel(p) };
            let ch = effective_channel(&c);
            let mut r = Record::new(CHANNELS);
            echo_channel(&mut r, &c);
            r.num("j", ch.j)
                .num("nu", ch.nu)
                .num("g", ch.g)
                .text("scenario", classify(&c).name())
                .flag("bound_state", bound_existence(&c));
            if let Err(e) = coupling_ratio(&c) {
                r.warnings.push(format!("coupling: {e}"));
            }
            r
        })
        .collect();
    Point { records, failed: false }
}

fn rel(a: f64, b: f64) -> f64 {
    (a - b).abs() / b.abs()
}

pub fn bound(p: &Params) -> Point {
    let c = channel(p);
    let ch = effective_channel(&c);
    let mut r = Record::new(BOUND);
    echo_channel(&mut r, &c);
    r.num("mass", p.mass)
        .num("r0", p.r0)
        .text("lambda_mode", p.lambda_mode.name())
        .num("nu", ch.nu);

    let mut energies = Vec::new();
    match energy_ks(p.mass, p.r0, &c) {
        Ok(s) => {
            r.num("energy_ks", s.energy);
            energies.push(s.energy);
        }
        Err(e) => {
            r.fail("energy_ks", &e);
        }
    }
    match energy_ks_oracle(p.mass, p.r0, &c) {
        Ok(s) => {
            r.num("energy_oracle", s.energy);
            energies.push(s.energy);
        }
        Err(e) => {
            r.fail("energy_oracle", &e);
        }
    }
    match extension(p.lambda_mode, p.r0, &c, ch.nu) {
        Ok(ext) => {
            put_lambda(&mut r, "lambda", ext.lambda);
            match energy_bg(p.mass, &ext) {
                Ok(s) => {
                    r.num("energy_bg", s.energy);
                    energies.push(s.energy);
                }
                Err(e) => {
                    r.fail("energy_bg", &e);
                }
            }
        }
        Err(e) => {
            r.fail("lambda", &e);
            r.missing("energy_bg", "no extension parameter");
        }
    }
    if energies.len() >= 2 {
        let worst = energies
            .iter()
            .flat_map(|a| energies.iter().map(move |b| rel(*a, *b)))
            .fold(0.0, f64::max);
        r.num("agreement", worst);
    } else {
        r.missing("agreement", "fewer than two energies");
    }
    let failed = energies.is_empty();
    Point {
        records: vec![r],
        failed,
    }
}

pub fn scatter(p: &Params) -> Point {
    let c = channel(p);
    let ch = effective_channel(&c);
    let mut r = Record::new(SCATTER);
    echo_channel(&mut r, &c);
    r.num("r0", p.r0)
        .num("k", p.k)
        .text("lambda_mode", p.lambda_mode.name())
        .num("j", ch.j)
        .num("nu", ch.nu);
    let ext = if ch.needs_extension() {
        extension(p.lambda_mode, p.r0, &c, ch.nu)
    } else {
        // the regular solution is the only one; λ = 0 reproduces it
        r.warnings.push("regular channel: no extension parameter".into());
        Ok(ExtensionParam {
            lambda: Lambda::Finite(0.0),
            nu: ch.nu,
            provenance: Provenance::UserSupplied,
        })
    };
    let outcome = ext.and_then(|ext| Ok((ext, scatter_record(&ext, &c, p.k)?)));
    let failed = match outcome {
        Ok((ext, rec)) => {
            if ch.needs_extension() {
                put_lambda(&mut r, "lambda", ext.lambda);
            } else {
                r.missing("lambda", "regular channel");
            }
            match rec.mu {
                Some(v) => {
                    r.num("mu", v);
                }
                None => {
                    r.missing("mu", "pole at this k");
                }
            }
            match rec.delta {
                Some(v) => {
                    r.num("delta", v);
                }
                None => {
                    r.missing("delta", "pole at this k");
                }
            }
            r.num("s_re", rec.s_element.re)
                .num("s_im", rec.s_element.im)
                .flag("pole_at_k", rec.pole_at_k);
            false
        }
        Err(e) => {
            r.fail("s_re", &e);
            r.missing("s_im", "no S-matrix element");
            true
        }
    };
    Point {
        records: vec![r],
        failed,
    }
}

fn extensions(p: &Params, g: &Geometry<f64>) -> Result<BTreeMap<i64, ExtensionParam<f64>>, Error> {
    if p.lambda_mode == LambdaMode::Physical {
        return physical_extensions(g, p.r0);
    }
    modified_channels(g.alpha, g.phi)
        .into_iter()
        .map(|m| {
            let nu = effective_channel(&g.channel(m)).nu;
            Ok((m, extension(p.lambda_mode, p.r0, &g.channel(m), nu)?))
        })
        .collect()
}

pub const DEFAULT_ANGLES: usize = 35;

pub fn amplitude_rows(p: &Params) -> Point {
    let g = Geometry {
        alpha: p.alpha,
        phi: p.phi,
        s: p.spin as i8,
    };
    let angles: Vec<f64> = match p.theta {
        Some(t) => vec![t],
        None => (1..=DEFAULT_ANGLES).map(|i| i as f64 * PI / 18.0).collect(),
    };
    let m_max = p.m_max.unwrap_or_else(|| default_m_max(p.smoothing));
    let exts = extensions(p, &g);
    let mut failed = false;
    let records = angles
        .into_iter()
        .map(|theta| {
            let mut r = Record::new(AMPLITUDE);
            r.num("alpha", p.alpha)
                .num("phi", p.phi)
                .int("s", p.spin)
                .num("r0", p.r0)
                .num("k", p.k)
                .num("theta", theta)
                .text("lambda_mode", p.lambda_mode.name())
                .num("smoothing", p.smoothing)
                .int("m_max", m_max as i64);
            let req = AmplitudeRequest {
                k: p.k,
                theta,
                m_max,
                smoothing: p.smoothing,
            };
            match exts.as_ref().map_err(Clone::clone).and_then(|e| amplitude(&req, &g, e)) {
                Ok(a) => {
                    r.num("f_re", a.value.re)
                        .num("f_im", a.value.im)
                        .num("dsigma", a.cross_section());
                    r.warnings.extend(a.warnings.iter().map(|w| w.name().to_string()));
                }
                Err(e) => {
                    failed = true;
                    r.fail("f_re", &e)
                        .missing("f_im", "no amplitude")
                        .missing("dsigma", "no amplitude");
                }
            }
            r
        })
        .collect();
    Point { records, failed }
}

fn regular_ladder(nu: f64, omega: f64, levels: usize) -> Result<Vec<HoLevel<f64>>, Error> {
    (0..levels)
        .map(|n| {
            let energy = ho_limit_spectrum(n, nu, omega, Branch::Regular)?;
            Ok(HoLevel {
                n,
                energy,
                energy_over_omega: energy / omega,
                branch: Branch::Regular,
            })
        })
        .collect()
}

fn ho_levels(p: &Params, h: &HoParams<f64>, ch: &EffectiveChannel<f64>) -> Result<Vec<HoLevel<f64>>, Error> {
    if !ch.needs_extension() {
        return regular_ladder(ch.nu, p.omega, p.levels);
    }
    match p.lambda_mode {
        LambdaMode::Physical => solve_ho_ks(h, p.levels),
        mode => solve_ho_bg(h, &extension(mode, p.r0, &h.channel, ch.nu)?, p.levels),
    }
}

pub fn ho(p: &Params) -> Point {
    let c = channel(p);
    let ch = effective_channel(&c);
    let base = |r: &mut Record| {
        echo_channel(r, &c);
        r.num("mass", p.mass)
            .num("r0", p.r0)
            .num("omega", p.omega)
            .text("lambda_mode", p.lambda_mode.name())
            .num("nu", ch.nu);
    };
    let h = HoParams {
        omega: p.omega,
        mass: p.mass,
        r0: p.r0,
        channel: c,
    };
    let levels = match ho_levels(p, &h, &ch) {
        Ok(l) => l,
        Err(e) => {
            let mut r = Record::new(HO);
            base(&mut r);
            r.fail("energy", &e);
            return Point {
                records: vec![r],
                failed: true,
            };
        }
    };
    // per-channel diagnostics shared by every level
    let mut shared = Record::new(HO);
    base(&mut shared);
    if ch.needs_extension() {
        match extension(p.lambda_mode, p.r0, &c, ch.nu) {
            Ok(ext) => put_lambda(&mut shared, "lambda", ext.lambda),
            Err(e) => {
                shared.missing("lambda", e);
            }
        }
        match extension_param_ho(p.r0, &c) {
            Ok(ext) => put_lambda(&mut shared, "lambda_ho", ext.lambda),
            Err(e) => {
                shared.missing("lambda_ho", e);
            }
        }
        match extension_ratio_ho_to_ab(p.r0, &c) {
            Ok(v) => {
                shared.num("lambda_ratio", v);
            }
            Err(e) => {
                shared.missing("lambda_ratio", e);
            }
        }
    } else {
        shared
            .warnings
            .push("regular channel: levels from the regular ladder".into());
        for name in ["lambda", "lambda_ho", "lambda_ratio"] {
            shared.missing(name, "regular channel");
        }
    }
    match energy_ks(p.mass, p.r0, &c) {
        Ok(s) => {
            shared.num("free_energy", s.energy);
        }
        Err(e) => {
            shared.missing("free_energy", e);
        }
    }
    let records = levels
        .iter()
        .map(|l| {
            let mut r = shared.clone();
            r.int("n", l.n as i64)
                .text("branch", l.branch.name())
                .num("energy", l.energy)
                .num("energy_over_omega", l.energy_over_omega);
            match ho_limit_spectrum(l.n, ch.nu, p.omega, Branch::Regular) {
                Ok(v) => r.num("rung_regular", v),
                Err(e) => r.missing("rung_regular", e),
            };
            match ho_limit_spectrum(l.n, ch.nu, p.omega, Branch::Irregular) {
                Ok(v) => r.num("rung_irregular", v),
                Err(_) => r.missing("rung_irregular", "regular channel"),
            };
            if ch.needs_extension() {
                match spectral_lhs(l.energy, ch.nu, p.omega) {
                    Ok(s) => {
                        r.num("nearest_pole", s.nearest_pole)
                            .num("nearest_zero", s.nearest_zero);
                    }
                    Err(e) => {
                        r.missing("nearest_pole", &e).missing("nearest_zero", e);
                    }
                }
            } else {
                r.missing("nearest_pole", "regular channel")
                    .missing("nearest_zero", "regular channel");
            }
            r
        })
        .collect();
    Point { records, failed: false }
}

pub fn verify_record(c: &CriterionReport) -> Record {
    let mut r = Record::new(VERIFY);
    r.int("id", c.id as i64)
        .text("name", c.name)
        .flag("passed", c.passed)
        .text("detail", c.detail.clone())
        .num("elapsed_s", c.elapsed.as_secs_f64());
    if !c.passed {
        r.error = Some("CriterionFailed".into());
    }
    r
}
