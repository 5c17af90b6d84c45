//! Descent datum description files (versioned TOML) and the flag-based
//! shortcuts for the shipped twists.

use std::path::Path;

use loopext::descent::DescentDatum;
use loopext::lie::{build_split_simple, diagram_aut, GAut, SeriesRank, StructureTable};
use loopext::linalg::Mat;
use loopext::scalars::parse_scalar;
use loopext::window::Window;

#[derive(serde::Deserialize)]
struct DatumFile {
    version: u32,
    algebra: String,
    orders: Vec<u32>,
    #[serde(default)]
    generators: Vec<GeneratorSpec>,
}

#[derive(serde::Deserialize)]
struct GeneratorSpec {
    /// Named automorphism: `identity`, `diagram:swap`, `diagram:triality`,
    /// or `diagram:perm:2,1,...` (1-based node images).
    #[serde(default)]
    aut: Option<String>,
    /// Explicit matrix on the Chevalley basis, rows of exact scalars.
    #[serde(default)]
    matrix: Option<Vec<Vec<String>>>,
}

pub fn read(path: &Path) -> anyhow::Result<DescentDatum> {
    let text = std::fs::read_to_string(path)?;
    let file: DatumFile = toml::from_str(&text)?;
    anyhow::ensure!(file.version == 1, "unsupported datum file version {}", file.version);
    let table = load(&file.algebra)?;
    anyhow::ensure!(
        file.generators.len() == file.orders.len(),
        "need one generator per order"
    );
    let gens = file
        .generators
        .iter()
        .map(|g| build_generator(&table, g))
        .collect::<anyhow::Result<Vec<GAut>>>()?;
    DescentDatum::multiloop(table, file.orders, gens).map_err(|e| anyhow::anyhow!("{e}"))
}

fn load(name: &str) -> anyhow::Result<StructureTable> {
    let sr = SeriesRank::parse(name).map_err(|e| anyhow::anyhow!("{e}"))?;
    build_split_simple(sr.series, sr.rank).map_err(|e| anyhow::anyhow!("{e}"))
}

fn build_generator(table: &StructureTable, spec: &GeneratorSpec) -> anyhow::Result<GAut> {
    match (&spec.aut, &spec.matrix) {
        (Some(name), None) => named_aut(table, name),
        (None, Some(rows)) => {
            let dim = table.dim();
            anyhow::ensure!(
                rows.len() == dim && rows.iter().all(|r| r.len() == dim),
                "matrix must be {dim} x {dim}"
            );
            let mut m = Mat::zero(dim, dim);
            for (r, row) in rows.iter().enumerate() {
                for (c, cell) in row.iter().enumerate() {
                    *m.at_mut(r, c) = parse_scalar(cell).map_err(|e| anyhow::anyhow!("{e}"))?;
                }
            }
            let g = GAut::from_matrix(m);
            if let Some(w) = g.bracket_violation(table, loopext::exec::ExecMode::default()) {
                anyhow::bail!("matrix is not an automorphism: {w}");
            }
            Ok(g)
        }
        _ => anyhow::bail!("each generator needs exactly one of `aut` or `matrix`"),
    }
}

pub fn named_aut(table: &StructureTable, name: &str) -> anyhow::Result<GAut> {
    let rank = table.rank();
    let perm: Vec<usize> = match name {
        "identity" => (0..rank).collect(),
        // reversal of the diagram; for A2 this is the swap of the two nodes
        "diagram:swap" | "diagram-swap" | "diagram:rev" => (0..rank).rev().collect(),
        "diagram:triality" | "triality" => {
            anyhow::ensure!(rank == 4, "triality needs D4");
            vec![2, 1, 3, 0]
        }
        other => {
            let Some(rest) = other.strip_prefix("diagram:perm:") else {
                anyhow::bail!("unknown automorphism name {other:?}");
            };
            let images: Vec<usize> = rest
                .split(',')
                .map(|c| c.trim().parse::<usize>())
                .collect::<Result<_, _>>()
                .map_err(|e| anyhow::anyhow!("bad permutation: {e}"))?;
            anyhow::ensure!(
                images.len() == rank && images.iter().all(|&i| i >= 1 && i <= rank),
                "permutation must list images of 1..{rank}"
            );
            images.into_iter().map(|i| i - 1).collect()
        }
    };
    diagram_aut(table, &perm).map_err(|e| anyhow::anyhow!("{e}"))
}

pub fn from_flags(
    algebra: Option<&str>,
    aut: Option<&str>,
    order: Option<u32>,
    trivial: bool,
    n: Option<usize>,
) -> anyhow::Result<DescentDatum> {
    let table = load(algebra.unwrap_or("A1"))?;
    if trivial {
        let nvars = n.unwrap_or(1);
        return DescentDatum::trivial(table, nvars).map_err(|e| anyhow::anyhow!("{e}"));
    }
    let aut = aut.ok_or_else(|| anyhow::anyhow!("--aut or --trivial is required"))?;
    let order = order.ok_or_else(|| anyhow::anyhow!("--order is required with --aut"))?;
    let g = named_aut(&table, aut)?;
    DescentDatum::multiloop(table, vec![order], vec![g]).map_err(|e| anyhow::anyhow!("{e}"))
}

#[derive(serde::Serialize)]
pub struct BasesDump {
    pub loop_basis: Vec<(String, Vec<String>)>,
    pub kernel_basis: Vec<(String, Vec<String>)>,
}

pub fn dump_bases(datum: &DescentDatum, window: &Window) -> anyhow::Result<BasesDump> {
    let loops = datum.fixed_loop(window).map_err(|e| anyhow::anyhow!("{e}"))?;
    let classes = datum.fixed_classes_graded(window).map_err(|e| anyhow::anyhow!("{e}"))?;
    Ok(BasesDump {
        loop_basis: loops
            .iter()
            .map(|(deg, elems)| {
                (
                    deg.to_string(),
                    elems.iter().map(|x| x.display_with(datum.table())).collect(),
                )
            })
            .collect(),
        kernel_basis: classes
            .iter()
            .map(|(deg, elems)| {
                (deg.to_string(), elems.iter().map(|z| z.to_string()).collect())
            })
            .collect(),
    })
}
