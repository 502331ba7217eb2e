//! Result records and their CSV/JSON encodings.

use crate::config::{Format, Route};
use crate::error::CliError;
use serde::Serialize;
use std::io::Write;
use thermalink::operators::{triplet_singlet_transform, ModelParams};
use thermalink::QubitState;

#[derive(Clone, Debug, Default, PartialEq, Serialize)]
pub struct Populations {
    pub rho_00: f64,
    pub rho_t: f64,
    pub rho_s: f64,
    pub rho_11: f64,
}

impl From<[f64; 4]> for Populations {
    fn from(p: [f64; 4]) -> Self {
        Populations { rho_00: p[0], rho_t: p[1], rho_s: p[2], rho_11: p[3] }
    }
}

impl Populations {
    pub fn to_array(&self) -> [f64; 4] {
        [self.rho_00, self.rho_t, self.rho_s, self.rho_11]
    }
}

/// Real parts of the off-diagonal elements in the triplet–singlet basis.
#[derive(Clone, Debug, Default, PartialEq, Serialize)]
pub struct Coherences {
    pub chi_st: f64,
    pub chi_0s: f64,
    pub chi_0t: f64,
}

#[derive(Clone, Debug, Default, PartialEq, Serialize)]
pub struct RecordDiagnostics {
    #[serde(skip_serializing_if = "Option::is_none")]
    pub residual: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub subspace_dim: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub cutoff: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub n_max: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub converged: Option<bool>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub population_shift: Option<f64>,
    /// Monte-Carlo standard errors of the populations.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub stderr: Option<Populations>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub trace_defect: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub dt: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub approximation: Option<String>,
}

/// One row of output: inputs, the reduced state and solver diagnostics.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Record {
    #[serde(skip_serializing_if = "Option::is_none")]
    pub series: Option<String>,
    pub route: Route,
    pub params: ModelParams,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub trajectories: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub r0: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub t: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub populations: Option<Populations>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub concurrence: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub coherences: Option<Coherences>,
    /// ⟨σ⁺σ⁻⟩ of qubit 1 and qubit 2.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub excitations: Option<[f64; 2]>,
    /// Sampled field amplitude (Re α, Im α).
    #[serde(skip_serializing_if = "Option::is_none")]
    pub alpha: Option<[f64; 2]>,
    pub diagnostics: RecordDiagnostics,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub error: Option<String>,
}

impl Record {
    pub fn new(route: Route, params: ModelParams) -> Self {
        Record {
            series: None,
            route,
            params,
            seed: None,
            trajectories: None,
            r0: None,
            t: None,
            populations: None,
            concurrence: None,
            coherences: None,
            excitations: None,
            alpha: None,
            diagnostics: RecordDiagnostics::default(),
            error: None,
        }
    }

    /// Fills populations, concurrence, coherences and excitations from a full state.
    pub fn with_state(mut self, s: &QubitState) -> Self {
        let ts = triplet_singlet_transform(s);
        self.populations = Some(ts.populations().into());
        self.concurrence = Some(s.concurrence());
        self.coherences = Some(Coherences { chi_st: ts.chi_st, chi_0s: ts.chi_0s, chi_0t: ts.chi_0t });
        self.excitations = Some(s.excitations());
        self
    }

    /// Diagonal prediction without coherences.
    pub fn with_populations(mut self, p: [f64; 4], concurrence: f64) -> Self {
        self.populations = Some(p.into());
        self.concurrence = Some(concurrence);
        self.excitations = Some([p[3] + 0.5 * (p[1] + p[2]), p[3] + 0.5 * (p[1] + p[2])]);
        self
    }

    pub fn failed(route: Route, params: ModelParams, err: &CliError) -> Self {
        let mut r = Record::new(route, params);
        r.error = Some(err.to_string());
        r
    }

    pub fn series(mut self, label: impl Into<String>) -> Self {
        self.series = Some(label.into());
        self
    }
}

/// Column key, symbol and unit.
pub struct Column {
    pub key: &'static str,
    pub symbol: &'static str,
    pub unit: &'static str,
}

const fn col(key: &'static str, symbol: &'static str, unit: &'static str) -> Column {
    Column { key, symbol, unit }
}

/// Inputs, populations, concurrence, then diagnostics.
pub const COLUMNS: &[Column] = &[
    col("series", "label", "-"),
    col("route", "route", "-"),
    col("gamma1", "γ₁", "rate"),
    col("gamma2", "γ₂", "rate"),
    col("kappa", "κ", "rate"),
    col("n_th", "n_th", "quanta"),
    col("delta1", "Δ₁", "rate"),
    col("delta2", "Δ₂", "rate"),
    col("gamma_phi", "γ_φ", "rate"),
    col("p_loss", "p_loss", "1"),
    col("fock_cutoff", "N", "levels"),
    col("k0z1", "k₀z₁", "rad"),
    col("k0z2", "k₀z₂", "rad"),
    col("seed", "seed", "-"),
    col("trajectories", "N_traj", "-"),
    col("r0", "r₀", "√quanta"),
    col("t", "t", "1/rate"),
    col("rho_00", "ρ₀₀", "1"),
    col("rho_t", "ρ_T", "1"),
    col("rho_s", "ρ_S", "1"),
    col("rho_11", "ρ₁₁", "1"),
    col("concurrence", "C", "1"),
    col("chi_st", "Re ρ_ST", "1"),
    col("chi_0s", "Re ρ_0S", "1"),
    col("chi_0t", "Re ρ_0T", "1"),
    col("p1", "⟨σ₁⁺σ₁⁻⟩", "1"),
    col("p2", "⟨σ₂⁺σ₂⁻⟩", "1"),
    col("alpha_re", "Re α", "√quanta"),
    col("alpha_im", "Im α", "√quanta"),
    col("se_rho_00", "SE ρ₀₀", "1"),
    col("se_rho_t", "SE ρ_T", "1"),
    col("se_rho_s", "SE ρ_S", "1"),
    col("se_rho_11", "SE ρ₁₁", "1"),
    col("residual", "‖𝓛ρ‖", "rate"),
    col("subspace_dim", "dim", "-"),
    col("cutoff", "N_used", "levels"),
    col("n_max", "n_max", "modes"),
    col("converged", "converged", "bool"),
    col("population_shift", "δρ", "1"),
    col("trace_defect", "|Tr ρ − 1|", "1"),
    col("dt", "Δt", "1/rate"),
    col("approximation", "approximation", "-"),
    col("engine_version", "version", "-"),
    col("error", "error", "-"),
];

pub fn header() -> Vec<String> {
    COLUMNS.iter().map(|c| format!("{} ({}) [{}]", c.key, c.symbol, c.unit)).collect()
}

/// 17 significant digits, round-trip exact.
pub fn fmt_f64(x: f64) -> String {
    if x.is_nan() {
        "NaN".into()
    } else if x.is_infinite() {
        if x > 0.0 {
            "inf".into()
        } else {
            "-inf".into()
        }
    } else {
        format!("{x:.16e}")
    }
}

fn opt<T>(v: Option<T>, f: impl Fn(T) -> String) -> String {
    v.map(f).unwrap_or_default()
}

pub fn row(r: &Record) -> Vec<String> {
    let p = &r.params;
    let f = |x: Option<f64>| opt(x, fmt_f64);
    let pops = r.populations.as_ref().map(Populations::to_array);
    let se = r.diagnostics.stderr.as_ref().map(Populations::to_array);
    let d = &r.diagnostics;
    vec![
        r.series.clone().unwrap_or_default(),
        r.route.to_string(),
        fmt_f64(p.gamma1),
        fmt_f64(p.gamma2),
        fmt_f64(p.kappa),
        fmt_f64(p.n_th),
        fmt_f64(p.delta1),
        fmt_f64(p.delta2),
        fmt_f64(p.gamma_phi),
        fmt_f64(p.p_loss),
        opt(p.fock_cutoff, |n| n.to_string()),
        f(p.positions.map(|z| z[0])),
        f(p.positions.map(|z| z[1])),
        opt(r.seed, |s| s.to_string()),
        opt(r.trajectories, |n| n.to_string()),
        f(r.r0),
        f(r.t),
        f(pops.map(|v| v[0])),
        f(pops.map(|v| v[1])),
        f(pops.map(|v| v[2])),
        f(pops.map(|v| v[3])),
        f(r.concurrence),
        f(r.coherences.as_ref().map(|c| c.chi_st)),
        f(r.coherences.as_ref().map(|c| c.chi_0s)),
        f(r.coherences.as_ref().map(|c| c.chi_0t)),
        f(r.excitations.map(|e| e[0])),
        f(r.excitations.map(|e| e[1])),
        f(r.alpha.map(|a| a[0])),
        f(r.alpha.map(|a| a[1])),
        f(se.map(|v| v[0])),
        f(se.map(|v| v[1])),
        f(se.map(|v| v[2])),
        f(se.map(|v| v[3])),
        f(d.residual),
        opt(d.subspace_dim, |n| n.to_string()),
        opt(d.cutoff, |n| n.to_string()),
        opt(d.n_max, |n| n.to_string()),
        opt(d.converged, |b| b.to_string()),
        f(d.population_shift),
        f(d.trace_defect),
        f(d.dt),
        d.approximation.clone().unwrap_or_default(),
        thermalink::VERSION.to_string(),
        r.error.clone().unwrap_or_default(),
    ]
}

pub fn write_csv<W: Write>(records: &[Record], out: W) -> Result<(), CliError> {
    let mut w = csv::WriterBuilder::new().terminator(csv::Terminator::Any(b'\n')).from_writer(out);
    w.write_record(header())?;
    for r in records {
        w.write_record(row(r))?;
    }
    w.flush()?;
    Ok(())
}

#[derive(Serialize)]
struct Document<'a> {
    schema_version: u32,
    engine_version: &'static str,
    /// Seconds since the Unix epoch; `SOURCE_DATE_EPOCH` pins it.
    generated_unix: u64,
    records: &'a [Record],
}

fn timestamp() -> u64 {
    if let Some(t) = std::env::var("SOURCE_DATE_EPOCH").ok().and_then(|s| s.parse().ok()) {
        return t;
    }
    std::time::SystemTime::now().duration_since(std::time::UNIX_EPOCH).map(|d| d.as_secs()).unwrap_or(0)
}

pub fn write_json<W: Write>(records: &[Record], mut out: W) -> Result<(), CliError> {
    let doc = Document {
        schema_version: crate::config::SCHEMA_VERSION,
        engine_version: thermalink::VERSION,
        generated_unix: timestamp(),
        records,
    };
    serde_json::to_writer_pretty(&mut out, &doc)?;
    out.write_all(b"\n")?;
    Ok(())
}

pub fn write_records<W: Write>(records: &[Record], format: Format, out: W) -> Result<(), CliError> {
    match format {
        Format::Csv => write_csv(records, out),
        Format::Json => write_json(records, out),
    }
}
