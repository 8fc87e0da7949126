//! Run configuration: TOML parsing, defaults and validation.

use std::path::PathBuf;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::amplitudes::{Tails, Window, DEFAULT_PAD_FRACTION};
use crate::entanglement::InitialAmplitudes;
use crate::error::{Error, Result};
use crate::fieldstate::FieldState;
use crate::worldline::WorldlineSpec;

pub const DEFAULT_MODE_K: f64 = 1.0;
pub const DEFAULT_COUPLING: f64 = 0.01;
pub const DEFAULT_GAP_POINTS: usize = 400;
pub const DEFAULT_TEMPERATURE_POINTS: usize = 100;
pub const DEFAULT_PRECISION: usize = 12;
pub const DEFAULT_SEARCH_POINTS: usize = 64;
pub const DEFAULT_WINDOW_TOLERANCE: f64 = 0.01;

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawConfig {
    worldline: RawWorldline,
    field: Option<FieldState>,
    detector: Option<RawDetector>,
    window: Option<RawWindow>,
    sweep: RawSweep,
    initial: Option<RawInitial>,
    gap_search: Option<RawGapSearch>,
    output: Option<RawOutput>,
}

#[derive(Debug, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case", deny_unknown_fields)]
enum RawWorldline {
    Eternal {
        a: f64,
    },
    PhaseSlope {
        v0: f64,
        v1: f64,
        v2: Option<f64>,
        t1: f64,
        t2: f64,
    },
}

#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawDetector {
    mode_k: Option<f64>,
    coupling: Option<f64>,
}

#[derive(Debug, Clone, Copy, Default, Deserialize)]
#[serde(rename_all = "kebab-case")]
enum TailKind {
    Sharp,
    CosineRamp,
    #[default]
    Adiabatic,
}

#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawWindow {
    pad_fraction: Option<f64>,
    tau_min: Option<f64>,
    tau_max: Option<f64>,
    tails: Option<TailKind>,
    ramp_width: Option<f64>,
}

#[derive(Debug, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case", deny_unknown_fields)]
enum RawSweep {
    Gap {
        lo: f64,
        hi: f64,
        n: Option<usize>,
        log_spaced: Option<bool>,
    },
    Temperature {
        beta_lo: f64,
        beta_hi: f64,
        n: Option<usize>,
        omega: f64,
    },
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawInitial {
    c_ge: [f64; 2],
    c_eg: [f64; 2],
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawGapSearch {
    lo: f64,
    hi: f64,
    grid_n: Option<usize>,
    window_tolerance: Option<f64>,
}

#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawOutput {
    csv: Option<PathBuf>,
    svg: Option<PathBuf>,
    precision: Option<usize>,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum Sweep {
    Gap {
        lo: f64,
        hi: f64,
        n: usize,
        log_spaced: bool,
    },
    /// Rows run over temperature `T = 1/β`, linearly spaced between
    /// `1/beta_hi` and `1/beta_lo`.
    Temperature {
        beta_lo: f64,
        beta_hi: f64,
        n: usize,
        omega: f64,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct GapSearch {
    pub lo: f64,
    pub hi: f64,
    pub grid_n: usize,
    pub window_tolerance: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Outputs {
    pub csv_path: Option<PathBuf>,
    pub svg_path: Option<PathBuf>,
    pub precision: usize,
}

#[derive(Debug, Clone, PartialEq)]
pub struct RunConfig {
    pub worldline: WorldlineSpec,
    pub field: FieldState,
    pub mode_k: f64,
    pub lambda: f64,
    pub window: Window,
    pub sweep: Sweep,
    pub init_state: InitialAmplitudes,
    pub gap_search: Option<GapSearch>,
    pub outputs: Outputs,
    /// Human-readable notes for every default that was filled in.
    pub defaults_applied: Vec<String>,
}

// Everything that influences the numbers in the CSV.
#[derive(Serialize)]
struct HashView<'a> {
    mode_k: f64,
    lambda: f64,
    c_ge: [f64; 2],
    c_eg: [f64; 2],
    precision: usize,
    worldline: &'a WorldlineSpec,
    field: &'a FieldState,
    window: &'a Window,
    sweep: &'a Sweep,
}

impl RunConfig {
    /// First 16 hex digits of the SHA-256 of the resolved configuration.
    /// Output paths and thread counts are excluded.
    pub fn config_hash(&self) -> String {
        let view = HashView {
            mode_k: self.mode_k,
            lambda: self.lambda,
            c_ge: [self.init_state.c_ge.re, self.init_state.c_ge.im],
            c_eg: [self.init_state.c_eg.re, self.init_state.c_eg.im],
            precision: self.outputs.precision,
            worldline: &self.worldline,
            field: &self.field,
            window: &self.window,
            sweep: &self.sweep,
        };
        let text = toml::to_string(&view).expect("config view serialises");
        let digest = Sha256::digest(text.as_bytes());
        digest[..8].iter().map(|b| format!("{b:02x}")).collect()
    }
}

fn require(ok: bool, key: &str, reason: impl FnOnce() -> String) -> Result<()> {
    if ok {
        Ok(())
    } else {
        Err(Error::config(key, reason()))
    }
}

/// Parses and validates a TOML run configuration.
pub fn parse_config(text: &str) -> Result<RunConfig> {
    let de = toml::Deserializer::new(text);
    let raw: RawConfig = serde_path_to_error::deserialize(de).map_err(|e| {
        let path = e.path().to_string();
        let key = if path == "." { "<document>".to_string() } else { path };
        Error::config(key, e.into_inner().message().trim().to_string())
    })?;
    let mut defaults = Vec::new();

    let worldline =
        match raw.worldline {
            RawWorldline::Eternal { a } => return Err(Error::config(
                "worldline.kind",
                format!(
                    "eternal acceleration (a = {a}) is covered by `unruh-check`; sweeps need a phase-slope worldline"
                ),
            )),
            RawWorldline::PhaseSlope { v0, v1, v2, t1, t2 } => {
                let v2 = v2.unwrap_or_else(|| {
                    defaults.push(format!("worldline.v2 = {v0} (v0)"));
                    v0
                });
                for (key, v) in [("worldline.v0", v0), ("worldline.v1", v1), ("worldline.v2", v2)] {
                    require(v.is_finite(), key, || format!("{v} is not finite"))?;
                }
                require(t1 > 0.0 && t1.is_finite(), "worldline.t1", || {
                    format!("t1 = {t1} must be positive")
                })?;
                require(t2 > t1 && t2.is_finite(), "worldline.t2", || {
                    format!("t2 = {t2} must exceed t1 = {t1}")
                })?;
                let spec = WorldlineSpec::PhaseSlope { v0, v1, v2, t1, t2 };
                spec.validate().map_err(|e| Error::config("worldline", e.to_string()))?;
                spec
            }
        };

    // Temperature sweeps set the background per row.
    let per_row_field = matches!(raw.sweep, RawSweep::Temperature { .. });
    let field = raw.field.unwrap_or_else(|| {
        if !per_row_field {
            defaults.push("field = vacuum".into());
        }
        FieldState::Vacuum
    });
    if let FieldState::Thermal { beta } = field {
        require(beta > 0.0 && beta.is_finite(), "field.beta", || {
            format!("beta = {beta} must be positive")
        })?;
    }

    let det = raw.detector.unwrap_or_default();
    let mode_k = det.mode_k.unwrap_or_else(|| {
        defaults.push(format!("detector.mode_k = {DEFAULT_MODE_K}"));
        DEFAULT_MODE_K
    });
    require(mode_k > 0.0 && mode_k.is_finite(), "detector.mode_k", || {
        format!("{mode_k} must be positive")
    })?;
    let lambda = det.coupling.unwrap_or_else(|| {
        defaults.push(format!("detector.coupling = {DEFAULT_COUPLING}"));
        DEFAULT_COUPLING
    });
    require(lambda >= 0.0 && lambda.is_finite(), "detector.coupling", || {
        format!("{lambda} must be >= 0")
    })?;

    let window = resolve_window(raw.window.unwrap_or_default(), &worldline, &mut defaults)?;

    let sweep = match raw.sweep {
        RawSweep::Gap { lo, hi, n, log_spaced } => {
            let n = n.unwrap_or_else(|| {
                defaults.push(format!("sweep.n = {DEFAULT_GAP_POINTS}"));
                DEFAULT_GAP_POINTS
            });
            let log_spaced = log_spaced.unwrap_or_else(|| {
                defaults.push("sweep.log_spaced = true".into());
                true
            });
            require(lo > 0.0 && lo.is_finite(), "sweep.lo", || {
                format!("lo = {lo} must be positive")
            })?;
            require(hi > lo && hi.is_finite(), "sweep.hi", || {
                format!("hi = {hi} must exceed lo = {lo}")
            })?;
            require(n >= 2, "sweep.n", || format!("n = {n} must be at least 2"))?;
            Sweep::Gap { lo, hi, n, log_spaced }
        }
        RawSweep::Temperature {
            beta_lo,
            beta_hi,
            n,
            omega,
        } => {
            let n = n.unwrap_or_else(|| {
                defaults.push(format!("sweep.n = {DEFAULT_TEMPERATURE_POINTS}"));
                DEFAULT_TEMPERATURE_POINTS
            });
            require(beta_lo > 0.0 && beta_lo.is_finite(), "sweep.beta_lo", || {
                format!("{beta_lo} must be positive")
            })?;
            require(beta_hi > beta_lo && beta_hi.is_finite(), "sweep.beta_hi", || {
                format!("beta_hi = {beta_hi} must exceed beta_lo = {beta_lo}")
            })?;
            require(n >= 2, "sweep.n", || format!("n = {n} must be at least 2"))?;
            require(omega > 0.0 && omega.is_finite(), "sweep.omega", || {
                format!("{omega} must be positive")
            })?;
            Sweep::Temperature {
                beta_lo,
                beta_hi,
                n,
                omega,
            }
        }
    };

    let init_state = match raw.initial {
        Some(RawInitial { c_ge, c_eg }) => {
            InitialAmplitudes::new(Complex64::new(c_ge[0], c_ge[1]), Complex64::new(c_eg[0], c_eg[1])).map_err(|e| {
                match e {
                    Error::InvalidInput(msg) => Error::config("initial", msg),
                    other => other,
                }
            })?
        }
        None => {
            defaults.push("initial = (|ge> + |eg>)/sqrt(2)".into());
            InitialAmplitudes::bell()
        }
    };

    let gap_search = match raw.gap_search {
        Some(g) => {
            let grid_n = g.grid_n.unwrap_or(DEFAULT_SEARCH_POINTS);
            let window_tolerance = g.window_tolerance.unwrap_or(DEFAULT_WINDOW_TOLERANCE);
            require(g.lo > 0.0 && g.lo.is_finite(), "gap_search.lo", || {
                format!("{} must be positive", g.lo)
            })?;
            require(g.hi > g.lo && g.hi.is_finite(), "gap_search.hi", || {
                format!("{} must exceed lo", g.hi)
            })?;
            require(grid_n >= 16, "gap_search.grid_n", || {
                format!("{grid_n} must be at least 16")
            })?;
            require(window_tolerance > 0.0, "gap_search.window_tolerance", || {
                "must be positive".into()
            })?;
            Some(GapSearch {
                lo: g.lo,
                hi: g.hi,
                grid_n,
                window_tolerance,
            })
        }
        None => None,
    };

    let out = raw.output.unwrap_or_default();
    let precision = out.precision.unwrap_or_else(|| {
        defaults.push(format!("output.precision = {DEFAULT_PRECISION}"));
        DEFAULT_PRECISION
    });
    require((6..=17).contains(&precision), "output.precision", || {
        format!("{precision} must lie in [6, 17]")
    })?;

    Ok(RunConfig {
        worldline,
        field,
        mode_k,
        lambda,
        window,
        sweep,
        init_state,
        gap_search,
        outputs: Outputs {
            csv_path: out.csv,
            svg_path: out.svg,
            precision,
        },
        defaults_applied: defaults,
    })
}

fn resolve_window(raw: RawWindow, spec: &WorldlineSpec, defaults: &mut Vec<String>) -> Result<Window> {
    let kind = raw.tails.unwrap_or_else(|| {
        defaults.push("window.tails = adiabatic".into());
        TailKind::Adiabatic
    });
    let tails = match kind {
        TailKind::Sharp => Tails::Sharp,
        TailKind::Adiabatic => Tails::Adiabatic,
        TailKind::CosineRamp => {
            let width = raw
                .ramp_width
                .ok_or_else(|| Error::config("window.ramp_width", "required for cosine-ramp tails"))?;
            Tails::CosineRamp { width }
        }
    };
    if raw.ramp_width.is_some() && !matches!(tails, Tails::CosineRamp { .. }) {
        return Err(Error::config("window.ramp_width", "only valid with cosine-ramp tails"));
    }
    let t2 = spec.accelerated_end().expect("phase-slope spec");
    let window = match (raw.tau_min, raw.tau_max) {
        (Some(lo), Some(hi)) => {
            if raw.pad_fraction.is_some() {
                return Err(Error::config(
                    "window.pad_fraction",
                    "cannot be combined with tau_min/tau_max",
                ));
            }
            require(lo <= 0.0, "window.tau_min", || {
                format!("{lo} must be <= 0 to cover the acceleration")
            })?;
            require(hi >= t2, "window.tau_max", || format!("{hi} must be >= t2 = {t2}"))?;
            Window::new(lo, hi, tails)
        }
        (None, None) => {
            let frac = raw.pad_fraction.unwrap_or_else(|| {
                defaults.push(format!("window.pad_fraction = {DEFAULT_PAD_FRACTION}"));
                DEFAULT_PAD_FRACTION
            });
            require(frac > 0.0 && frac.is_finite(), "window.pad_fraction", || {
                format!("{frac} must be positive")
            })?;
            Window::padded(spec, frac, tails)
        }
        (Some(_), None) => return Err(Error::config("window.tau_max", "required together with tau_min")),
        (None, Some(_)) => return Err(Error::config("window.tau_min", "required together with tau_max")),
    };
    window.map_err(|e| Error::config("window", e.to_string()))
}
