//! Report envelopes and rendering. JSON reports embed the tool version and
//! the fully resolved configuration; identical configurations produce byte
//! identical output.

use std::io::Write;

use loopext::autlift::{Gl2zEntry, LiftCertificate, ScalarAction};
use loopext::descent::{DescentReport, StabilityReport};
use loopext::extension::CocycleReport;
use loopext::lie::AlgebraReport;

use crate::{Common, Format};

#[derive(serde::Serialize)]
pub struct Envelope<C: serde::Serialize, R: serde::Serialize> {
    pub version: &'static str,
    pub command: &'static str,
    pub config: C,
    pub report: R,
}

impl<C: serde::Serialize, R: serde::Serialize> Envelope<C, R> {
    pub fn new(command: &'static str, config: C, report: R) -> Self {
        Envelope { version: env!("CARGO_PKG_VERSION"), command, config, report }
    }
}

#[derive(serde::Serialize)]
pub struct VerifyAlgebraConfig {
    pub algebra: String,
    pub seed: u64,
    pub format: Format,
}

#[derive(serde::Serialize)]
pub struct CocycleConfig {
    pub kind: String,
    pub algebra: String,
    pub nvars: usize,
    pub window: i64,
    pub seed: u64,
    pub format: Format,
}

#[derive(serde::Serialize)]
pub struct Gl2zConfig {
    pub zeta: String,
    pub bound: i64,
    pub seed: u64,
    pub format: Format,
}

#[derive(serde::Serialize)]
pub struct Gl2zReport {
    pub zeta: String,
    pub bound: i64,
    pub count: usize,
    pub entries: Vec<Gl2zEntry>,
}

#[derive(serde::Serialize)]
pub struct DescendConfig {
    pub algebra: String,
    pub orders: Vec<u32>,
    pub window: i64,
    pub seed: u64,
    pub format: Format,
}

#[derive(serde::Serialize)]
pub struct DescendBody {
    pub extension: DescentReport,
    pub stability: StabilityReport,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub bases: Option<crate::datum::BasesDump>,
}

#[derive(serde::Serialize)]
pub struct LiftConfig {
    pub theta: String,
    pub cocycle: String,
    pub algebra: String,
    pub nvars: usize,
    pub window: i64,
    pub seed: u64,
    pub format: Format,
}

#[derive(serde::Serialize)]
pub struct LiftBody {
    pub status: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub mu: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub centre_action: Option<String>,
    pub gamma_support: Vec<(String, String)>,
    pub residual_checked: u64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub witness: Option<(String, String)>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub detail: Option<String>,
}

impl LiftBody {
    pub fn from_certificate(cert: &LiftCertificate, centre: &ScalarAction) -> Self {
        LiftBody {
            status: "lifted".into(),
            mu: Some(cert.mu.describe()),
            centre_action: Some(match centre {
                ScalarAction::Scalar(l) => format!("lambda = {l}"),
                ScalarAction::NotScalar { witness, image } => {
                    format!("not scalar: {witness} -> {image}")
                }
            }),
            gamma_support: cert.gamma_support(),
            residual_checked: cert.residual_checked,
            witness: None,
            detail: None,
        }
    }

    pub fn no_lift(witness_x: &str, witness_y: &str, detail: &str) -> Self {
        LiftBody {
            status: "no_lift".into(),
            mu: None,
            centre_action: None,
            gamma_support: Vec::new(),
            residual_checked: 0,
            witness: Some((witness_x.to_string(), witness_y.to_string())),
            detail: Some(detail.to_string()),
        }
    }
}

/// Writes the report to stdout or the requested file.
pub fn emit<T: serde::Serialize>(common: &Common, envelope: &T, text: String) -> anyhow::Result<()> {
    let body = match common.format {
        Format::Json => {
            let mut s = serde_json::to_string_pretty(envelope)?;
            s.push('\n');
            s
        }
        Format::Text => text,
    };
    match &common.out {
        Some(path) => std::fs::write(path, body)?,
        None => std::io::stdout().write_all(body.as_bytes())?,
    }
    Ok(())
}

pub fn render_verify_algebra(e: &Envelope<VerifyAlgebraConfig, AlgebraReport>) -> String {
    let r = &e.report;
    let mut out = format!(
        "verify-algebra {} (dim {})\n  antisymmetry pairs checked: {}\n  Jacobi triples checked: {}\n  Killing pairs checked: {}\n  invariance triples checked: {}\n  status: {:?}\n",
        r.algebra, r.dim, r.antisymmetry_pairs, r.jacobi_triples, r.killing_pairs,
        r.invariance_triples, r.status
    );
    if let Some(w) = &r.witness {
        out.push_str(&format!("  witness: {w}\n"));
    }
    out
}

pub fn render_cocycle(e: &Envelope<CocycleConfig, CocycleReport>) -> String {
    let r = &e.report;
    let mut out = format!(
        "cocycle {} on {} (n = {}, window D = {})\n  checks run: {}\n  status: {:?}\n",
        r.cocycle, r.algebra, r.nvars, r.window, r.checks_run, r.status
    );
    if let Some(w) = &r.witness {
        out.push_str(&format!(
            "  witness ({}): [{}] -> {}\n",
            w.check,
            w.elements.join(", "),
            w.value
        ));
    }
    out
}

pub fn render_gl2z(e: &Envelope<Gl2zConfig, Gl2zReport>) -> String {
    let r = &e.report;
    let mut out = format!("gl2z zeta = {}, bound = {}: {} matrices\n", r.zeta, r.bound, r.count);
    for entry in &r.entries {
        out.push_str(&format!(
            "  [[{}, {}], [{}, {}]]  mu = {}\n",
            entry.matrix[0][0],
            entry.matrix[0][1],
            entry.matrix[1][0],
            entry.matrix[1][1],
            entry.mu
        ));
    }
    out
}

pub fn render_descend(e: &Envelope<DescendConfig, DescendBody>) -> String {
    let r = &e.report.extension;
    let mut out = format!(
        "descend {} with orders {:?} (window D = {})\n",
        r.algebra, r.orders, r.window
    );
    for c in &r.checks {
        out.push_str(&format!(
            "  [{}] {}: {}\n",
            if c.passed { "pass" } else { "FAIL" },
            c.name,
            c.detail
        ));
    }
    let s = &e.report.stability;
    out.push_str(&format!(
        "  [{}] stability: u-hat stabilizes L_u on the window\n",
        if s.stable { "pass" } else { "FAIL" }
    ));
    out.push_str(&format!(
        "  [{}] decomposition: dim L_u-hat = dim L_u + dim kernel per degree\n",
        if s.decomposition_holds { "pass" } else { "FAIL" }
    ));
    out.push_str("  kernel dims per degree:");
    for (deg, d) in &r.kernel_dims {
        out.push_str(&format!(" {deg}:{d}"));
    }
    out.push('\n');
    if let Some(bases) = &e.report.bases {
        out.push_str("  graded bases:\n");
        for (deg, elems) in &bases.loop_basis {
            out.push_str(&format!("    L_u {deg}: {}\n", elems.join(" ; ")));
        }
        for (deg, elems) in &bases.kernel_basis {
            if !elems.is_empty() {
                out.push_str(&format!("    kernel {deg}: {}\n", elems.join(" ; ")));
            }
        }
    }
    out.push_str(&format!(
        "  status: {:?}\n",
        if e.report.extension.passed() && s.stable && s.decomposition_holds {
            loopext::lie::CheckStatus::Pass
        } else {
            loopext::lie::CheckStatus::Fail
        }
    ));
    out
}

pub fn render_lift(e: &Envelope<LiftConfig, LiftBody>) -> String {
    let c = &e.config;
    let b = &e.report;
    let mut out = format!(
        "lift theta = {} over cocycle {} on {} (window D = {})\n  status: {}\n",
        c.theta, c.cocycle, c.algebra, c.window, b.status
    );
    if let Some(mu) = &b.mu {
        out.push_str(&format!("  mu: {mu}\n"));
    }
    if let Some(ca) = &b.centre_action {
        out.push_str(&format!("  centre action: {ca}\n"));
    }
    if b.gamma_support.is_empty() {
        if b.status == "lifted" {
            out.push_str("  gamma: 0\n");
        }
    } else {
        out.push_str("  gamma support:\n");
        for (k, v) in &b.gamma_support {
            out.push_str(&format!("    {k} -> {v}\n"));
        }
    }
    if b.status == "lifted" {
        out.push_str(&format!("  residual pairs checked: {}\n", b.residual_checked));
    }
    if let Some((x, y)) = &b.witness {
        out.push_str(&format!("  witness pair: ({x}, {y})\n"));
    }
    if let Some(d) = &b.detail {
        out.push_str(&format!("  detail: {d}\n"));
    }
    out
}
