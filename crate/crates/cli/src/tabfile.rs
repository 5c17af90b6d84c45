//! Tabulated cocycle files (versioned JSON): a finitely supported table of
//! central values on (basis, exponent) pairs over an explicit domain.

use std::collections::BTreeMap;
use std::path::Path;

use loopext::extension::{CentralSpace, CentralValue, Cocycle};
use loopext::kahler::{bar, OneForm};
use loopext::lie::{build_split_simple, SeriesRank, StructureTable};
use loopext::scalars::{parse_scalar, Exponent, LaurentPoly};
use loopext::window::Window;

#[derive(serde::Serialize, serde::Deserialize)]
struct TabFile {
    version: u32,
    algebra: String,
    nvars: usize,
    /// "line" or "differentials"
    space: String,
    domain: i64,
    entries: Vec<TabEntry>,
}

#[derive(serde::Serialize, serde::Deserialize)]
struct TabEntry {
    i: usize,
    m: Vec<i64>,
    j: usize,
    n: Vec<i64>,
    value: TabValue,
}

#[derive(serde::Serialize, serde::Deserialize)]
#[serde(untagged)]
enum TabValue {
    /// coefficient of the line generator, canonical scalar syntax
    Line(String),
    /// graded components of a differential class
    Class(Vec<ClassComponent>),
}

#[derive(serde::Serialize, serde::Deserialize)]
struct ClassComponent {
    degree: Vec<i64>,
    coeffs: Vec<String>,
}

pub fn read(path: &Path) -> anyhow::Result<(StructureTable, Cocycle)> {
    let text = std::fs::read_to_string(path)?;
    let file: TabFile = serde_json::from_str(&text)?;
    anyhow::ensure!(file.version == 1, "unsupported cocycle file version {}", file.version);
    let sr = SeriesRank::parse(&file.algebra).map_err(|e| anyhow::anyhow!("{e}"))?;
    let table = build_split_simple(sr.series, sr.rank).map_err(|e| anyhow::anyhow!("{e}"))?;
    let space = match file.space.as_str() {
        "line" => CentralSpace::line_c(),
        "differentials" => CentralSpace::Differentials { nvars: file.nvars },
        other => anyhow::bail!("unknown central space {other:?}"),
    };
    let mut entries = BTreeMap::new();
    for e in file.entries {
        anyhow::ensure!(e.i < table.dim() && e.j < table.dim(), "basis index out of range");
        let value = match (&space, e.value) {
            (CentralSpace::Line { .. }, TabValue::Line(s)) => {
                CentralValue::Line(parse_scalar(&s).map_err(|er| anyhow::anyhow!("{er}"))?)
            }
            (CentralSpace::Differentials { nvars }, TabValue::Class(comps)) => {
                let mut form = OneForm::zero(*nvars);
                for c in comps {
                    anyhow::ensure!(c.coeffs.len() == *nvars, "component length mismatch");
                    for (i, coeff) in c.coeffs.iter().enumerate() {
                        let v = parse_scalar(coeff).map_err(|er| anyhow::anyhow!("{er}"))?;
                        if !v.is_zero() {
                            form = form.add(&OneForm::dlog(
                                i,
                                LaurentPoly::monomial(Exponent::new(c.degree.clone()), v),
                            ));
                        }
                    }
                }
                CentralValue::Class(bar(&form))
            }
            _ => anyhow::bail!("entry value does not match the declared space"),
        };
        entries.insert((e.i, Exponent::new(e.m), e.j, Exponent::new(e.n)), value);
    }
    let cocycle = Cocycle::Tabulated {
        nvars: file.nvars,
        space,
        domain: Window::new(file.nvars, file.domain),
        entries,
    };
    Ok((table, cocycle))
}

pub fn write(path: &Path, table: &StructureTable, cocycle: &Cocycle) -> anyhow::Result<()> {
    let Cocycle::Tabulated { nvars, space, domain, entries } = cocycle else {
        anyhow::bail!("only tabulated cocycles can be written");
    };
    let file = TabFile {
        version: 1,
        algebra: table.name().to_string(),
        nvars: *nvars,
        space: match space {
            CentralSpace::Line { .. } => "line".into(),
            CentralSpace::Differentials { .. } => "differentials".into(),
        },
        domain: domain.radius,
        entries: entries
            .iter()
            .map(|((i, m, j, n), v)| TabEntry {
                i: *i,
                m: m.iter().collect(),
                j: *j,
                n: n.iter().collect(),
                value: match v {
                    CentralValue::Line(c) => TabValue::Line(c.to_string()),
                    CentralValue::Class(z) => TabValue::Class(
                        z.graded()
                            .map(|(deg, coeffs)| ClassComponent {
                                degree: deg.iter().collect(),
                                coeffs: coeffs.iter().map(|c| c.to_string()).collect(),
                            })
                            .collect(),
                    ),
                },
            })
            .collect(),
    };
    let mut text = serde_json::to_string_pretty(&file)?;
    text.push('\n');
    std::fs::write(path, text)?;
    Ok(())
}
