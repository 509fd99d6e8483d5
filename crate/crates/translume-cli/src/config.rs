//! Run configuration: one structured text file (TOML: `key = value` with
//! nested sections) holding the grating parameters under `[grating]` and one
//! optional block per subcommand.  Key names follow the symbols used
//! throughout the library (`alpha`, `g`, `Omega`, `d`, `eps_b`, `c0`,
//! `k_tilde`, `n`).

use std::path::Path;

use serde::{Deserialize, Serialize};
use translume_core::GratingConfig;

use crate::error::{CliError, CliResult};

/// Complete description of a batch run, parsed from a single config file.
///
/// Serializing and re-parsing a `RunConfig` reproduces it exactly (covered
/// by tests); all physical invariants are enforced at load time with
/// field-precise messages.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    pub grating: GratingConfig,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub rays: Option<RaysSection>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub spectrum: Option<SpectrumSection>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub vacuum: Option<VacuumSection>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub stimulated: Option<StimulatedSection>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub sweep: Option<SweepSection>,
    #[serde(default)]
    pub output: OutputSection,
}

/// Ray-tracing block: how many characteristics to launch and for how long.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RaysSection {
    /// Number of rays to launch.
    #[serde(default = "default_ray_count")]
    pub count: usize,
    /// Integration end time; defaults to five grating periods (temporal if
    /// Ω > 0, else spatial transit times).
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub t_end: Option<f64>,
    /// Launch pattern: evenly over one period, or offset around the
    /// horizons (transluminal configurations only).
    #[serde(default)]
    pub anchor: RayAnchor,
    /// Half-span of the horizon-relative launch offsets, as a fraction of
    /// the spatial period.
    #[serde(default = "default_ray_spread")]
    pub spread: f64,
}

impl Default for RaysSection {
    fn default() -> Self {
        RaysSection {
            count: default_ray_count(),
            t_end: None,
            anchor: RayAnchor::default(),
            spread: default_ray_spread(),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum RayAnchor {
    /// Launch positions spread evenly across one spatial period.
    #[default]
    Period,
    /// Launch positions offset around each horizon.
    Horizons,
}

fn default_ray_count() -> usize {
    12
}

fn default_ray_spread() -> f64 {
    0.25
}

/// Spectral-amplitude block: fixed input labels and output-order range.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SpectrumSection {
    pub k_tilde: f64,
    pub n: i64,
    #[serde(default = "default_n_prime_min")]
    pub n_prime_min: i64,
    #[serde(default = "default_n_prime_max")]
    pub n_prime_max: i64,
}

fn default_n_prime_min() -> i64 {
    -40
}

fn default_n_prime_max() -> i64 {
    -1
}

/// Vacuum-emission block: output grid shape and an optional window-length
/// sweep (one spectrum file per `d`).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct VacuumSection {
    /// Number of grid points, placed half-step offset so no point lands on
    /// a multiple of Ω.
    #[serde(default = "default_vacuum_points")]
    pub points: usize,
    /// Grid extent in units of Ω: the grid covers (0, omega_span·Ω).
    #[serde(default = "default_vacuum_span")]
    pub omega_span: f64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub d_sweep: Option<Vec<f64>>,
}

impl Default for VacuumSection {
    fn default() -> Self {
        VacuumSection {
            points: default_vacuum_points(),
            omega_span: default_vacuum_span(),
            d_sweep: None,
        }
    }
}

fn default_vacuum_points() -> usize {
    512
}

fn default_vacuum_span() -> f64 {
    3.0
}

/// Stimulated-conversion block: the input pulse labels.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct StimulatedSection {
    pub k_tilde: f64,
    pub n: i64,
}

/// Parameter-sweep block: which command to repeat and the value lists to
/// take the cartesian product over.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SweepSection {
    pub command: SweepCommand,
    #[serde(default)]
    pub lists: SweepLists,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SweepCommand {
    Stimulated,
    Vacuum,
}

/// Per-parameter value lists; any subset may be given, and parameters
/// without a list keep their `[grating]` (or section) value.
#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SweepLists {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub alpha: Option<Vec<f64>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub g: Option<Vec<f64>>,
    #[serde(
        default,
        rename = "Omega",
        skip_serializing_if = "Option::is_none"
    )]
    pub omega: Option<Vec<f64>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub d: Option<Vec<f64>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub eps_b: Option<Vec<f64>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub c0: Option<Vec<f64>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub k_tilde: Option<Vec<f64>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub n: Option<Vec<i64>>,
}

/// Output destination and format defaults; command-line flags override.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct OutputSection {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub dir: Option<String>,
    #[serde(default)]
    pub format: OutputFormat,
    /// Outputs are always seedless and deterministic; the flag is accepted
    /// for config round-trip completeness.
    #[serde(default = "default_true")]
    pub deterministic: bool,
}

impl Default for OutputSection {
    fn default() -> Self {
        OutputSection {
            dir: None,
            format: OutputFormat::default(),
            deterministic: true,
        }
    }
}

fn default_true() -> bool {
    true
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum OutputFormat {
    #[default]
    Csv,
    Json,
}

impl RunConfig {
    /// Reads and validates a run configuration from `path`.
    pub fn load(path: &Path) -> CliResult<Self> {
        let text = std::fs::read_to_string(path).map_err(|e| {
            CliError::Config(format!("cannot read config {}: {e}", path.display()))
        })?;
        let cfg: RunConfig = toml::from_str(&text)
            .map_err(|e| CliError::Config(format!("{}: {e}", path.display())))?;
        cfg.validate()?;
        Ok(cfg)
    }

    /// Structural checks beyond what deserialization can express, each
    /// reported with the offending section and key.
    pub fn validate(&self) -> CliResult<()> {
        self.grating
            .validate()
            .map_err(|e| CliError::Config(format!("[grating]: {e}")))?;
        if let Some(rays) = &self.rays {
            if rays.count == 0 {
                return Err(CliError::Config("[rays]: count must be at least 1".into()));
            }
            if let Some(t_end) = rays.t_end {
                if !(t_end > 0.0) || !t_end.is_finite() {
                    return Err(CliError::Config(format!(
                        "[rays]: t_end must be a positive finite time, got {t_end}"
                    )));
                }
            }
            if !(rays.spread > 0.0 && rays.spread <= 0.5) {
                return Err(CliError::Config(format!(
                    "[rays]: spread must lie in (0, 0.5], got {}",
                    rays.spread
                )));
            }
        }
        if let Some(spectrum) = &self.spectrum {
            if !spectrum.k_tilde.is_finite() {
                return Err(CliError::Config(
                    "[spectrum]: k_tilde must be finite".into(),
                ));
            }
            if spectrum.n_prime_min > spectrum.n_prime_max {
                return Err(CliError::Config(format!(
                    "[spectrum]: n_prime_min = {} exceeds n_prime_max = {}",
                    spectrum.n_prime_min, spectrum.n_prime_max
                )));
            }
        }
        if let Some(vacuum) = &self.vacuum {
            if vacuum.points < 2 {
                return Err(CliError::Config(format!(
                    "[vacuum]: points must be at least 2, got {}",
                    vacuum.points
                )));
            }
            if !(vacuum.omega_span > 0.0) || !vacuum.omega_span.is_finite() {
                return Err(CliError::Config(format!(
                    "[vacuum]: omega_span must be a positive finite multiple of Omega, got {}",
                    vacuum.omega_span
                )));
            }
            if let Some(ds) = &vacuum.d_sweep {
                if ds.is_empty() {
                    return Err(CliError::Config(
                        "[vacuum]: d_sweep must list at least one window length".into(),
                    ));
                }
                for &d in ds {
                    if !(d >= 0.0) || !d.is_finite() {
                        return Err(CliError::Config(format!(
                            "[vacuum]: d_sweep entries must be non-negative and finite, got {d}"
                        )));
                    }
                }
            }
        }
        if let Some(stimulated) = &self.stimulated {
            if !stimulated.k_tilde.is_finite() {
                return Err(CliError::Config(
                    "[stimulated]: k_tilde must be finite".into(),
                ));
            }
        }
        if let Some(sweep) = &self.sweep {
            let lists = &sweep.lists;
            let lengths = [
                lists.alpha.as_ref().map(Vec::len),
                lists.g.as_ref().map(Vec::len),
                lists.omega.as_ref().map(Vec::len),
                lists.d.as_ref().map(Vec::len),
                lists.eps_b.as_ref().map(Vec::len),
                lists.c0.as_ref().map(Vec::len),
                lists.k_tilde.as_ref().map(Vec::len),
                lists.n.as_ref().map(Vec::len),
            ];
            if lengths.iter().all(Option::is_none) {
                return Err(CliError::Config(
                    "[sweep.lists]: declare at least one parameter list \
                     (alpha, g, Omega, d, eps_b, c0, k_tilde, n), e.g. `d = [20.0, 40.0]`"
                        .into(),
                ));
            }
            if lengths.iter().flatten().any(|&len| len == 0) {
                return Err(CliError::Config(
                    "[sweep.lists]: parameter lists must not be empty".into(),
                ));
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    const MINIMAL: &str = "\
[grating]
alpha = 0.05
g = 1.0
Omega = 1.0
d = 20.0
eps_b = 1.0
c0 = 1.0
";

    fn parse(text: &str) -> CliResult<RunConfig> {
        let cfg: RunConfig =
            toml::from_str(text).map_err(|e| CliError::Config(e.to_string()))?;
        cfg.validate()?;
        Ok(cfg)
    }

    #[test]
    fn minimal_config_parses_with_defaults() {
        let cfg = parse(MINIMAL).unwrap();
        assert_eq!(cfg.grating.alpha, 0.05);
        assert_eq!(cfg.grating.hbar, 1.0);
        assert_eq!(cfg.output.format, OutputFormat::Csv);
        assert!(cfg.output.deterministic);
        assert!(cfg.rays.is_none());
    }

    #[test]
    fn integer_literals_coerce_to_floats() {
        let text = MINIMAL.replace("d = 20.0", "d = 20");
        let cfg = parse(&text).unwrap();
        assert_eq!(cfg.grating.d, 20.0);
    }

    #[test]
    fn unknown_keys_are_rejected_by_name() {
        let text = format!("{MINIMAL}alpha_typo = 1.0\n");
        let err = parse(&text).unwrap_err().to_string();
        assert!(err.contains("alpha_typo"), "message was: {err}");
    }

    #[test]
    fn missing_fields_are_reported_by_name() {
        let text = MINIMAL.replace("alpha = 0.05\n", "");
        let err = parse(&text).unwrap_err().to_string();
        assert!(err.contains("alpha"), "message was: {err}");
    }

    #[test]
    fn physical_invariants_are_enforced() {
        let text = MINIMAL.replace("alpha = 0.05", "alpha = -0.1");
        let err = parse(&text).unwrap_err().to_string();
        assert!(err.contains("alpha"), "message was: {err}");
    }

    #[test]
    fn empty_sweep_lists_are_rejected() {
        let text = format!("{MINIMAL}\n[sweep]\ncommand = \"stimulated\"\n");
        let err = parse(&text).unwrap_err().to_string();
        assert!(err.contains("sweep.lists"), "message was: {err}");

        let text = format!(
            "{MINIMAL}\n[sweep]\ncommand = \"stimulated\"\n[sweep.lists]\nd = []\n"
        );
        let err = parse(&text).unwrap_err().to_string();
        assert!(err.contains("must not be empty"), "message was: {err}");
    }

    #[test]
    fn round_trip_is_identity() {
        let text = format!(
            "{MINIMAL}\n[vacuum]\npoints = 64\nomega_span = 3.0\nd_sweep = [18.0, 31.0]\n\
             \n[stimulated]\nk_tilde = 0.75\nn = 1\n\
             \n[sweep]\ncommand = \"stimulated\"\n[sweep.lists]\nd = [20.0, 40.0]\n\
             \n[output]\ndir = \"out\"\nformat = \"json\"\n"
        );
        let cfg = parse(&text).unwrap();
        let serialized = toml::to_string(&cfg).unwrap();
        let reparsed: RunConfig = toml::from_str(&serialized).unwrap();
        assert_eq!(cfg, reparsed);
    }
}
