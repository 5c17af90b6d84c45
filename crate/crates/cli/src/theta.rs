//! Parser for automorphism descriptions on the command line. Compositions
//! are written with `;` and apply right to left, matching function
//! composition order.

use loopext::autlift::LoopAut;
use loopext::lie::{torus_aut, weyl_reflection, StructureTable};
use loopext::scalars::{parse_laurent, parse_scalar, CycScalar, RingAut};

pub fn parse(table: &StructureTable, src: &str, nvars: usize) -> anyhow::Result<LoopAut> {
    let mut parts: Vec<LoopAut> = Vec::new();
    for piece in src.split(';') {
        parts.push(parse_one(table, piece.trim(), nvars)?);
    }
    let mut acc = parts.pop().expect("split yields at least one piece");
    while let Some(outer) = parts.pop() {
        acc = outer.compose(&acc);
    }
    Ok(acc)
}

fn parse_one(table: &StructureTable, src: &str, nvars: usize) -> anyhow::Result<LoopAut> {
    if src == "id" {
        return Ok(LoopAut::identity(table, nvars));
    }
    if let Some(rest) = src.strip_prefix("weyl:") {
        // `weyl:e,f` is the rank-one reflection word; `weyl:K` reflects in
        // the K-th simple root (1-based).
        let i = if rest == "e,f" {
            0
        } else {
            let k: usize = rest.parse().map_err(|_| anyhow::anyhow!("bad weyl index {rest:?}"))?;
            anyhow::ensure!(k >= 1 && k <= table.rank(), "weyl index out of range");
            k - 1
        };
        let g = weyl_reflection(table, i).map_err(|e| anyhow::anyhow!("{e}"))?;
        return Ok(LoopAut::from_gaut(table, g, format!("weyl:{}", i + 1), nvars));
    }
    if let Some(rest) = src.strip_prefix("torus:") {
        let scales = parse_scalars(rest, table.rank())?;
        let g = torus_aut(table, &scales).map_err(|e| anyhow::anyhow!("{e}"))?;
        return Ok(LoopAut::from_gaut(table, g, format!("torus:{rest}"), nvars));
    }
    if let Some(rest) = src.strip_prefix("mtorus:") {
        // one monomial (unit of S) per simple root
        let mut data = Vec::new();
        for part in rest.split(',') {
            let p = parse_laurent(part.trim(), nvars).map_err(|e| anyhow::anyhow!("{e}"))?;
            let mut terms = p.terms();
            let (exp, coeff) = match (terms.next(), terms.next()) {
                (Some((e, c)), None) => (e.clone(), c.clone()),
                _ => anyhow::bail!("mtorus entries must be single monomials: {part:?}"),
            };
            data.push((coeff, exp));
        }
        anyhow::ensure!(data.len() == table.rank(), "one mtorus entry per simple root");
        return LoopAut::monomial_torus(table, &data).map_err(|e| anyhow::anyhow!("{e}"));
    }
    if let Some(rest) = src.strip_prefix("base:scale:") {
        let scales = parse_scalars(rest, nvars)?;
        let theta = RingAut::diagonal(scales).map_err(|e| anyhow::anyhow!("{e}"))?;
        return Ok(LoopAut::base(table, theta));
    }
    if let Some(rest) = src.strip_prefix("base:mat:") {
        // row-major 2x2 in the convention theta(t_i) = t^(row_i)
        let cells: Vec<i64> = rest
            .split(',')
            .map(|c| c.trim().parse::<i64>())
            .collect::<Result<_, _>>()
            .map_err(|e| anyhow::anyhow!("bad matrix entry: {e}"))?;
        anyhow::ensure!(cells.len() == 4, "base:mat takes four integers");
        anyhow::ensure!(nvars == 2, "base:mat needs two variables");
        // columns of the RingAut matrix are images, so transpose the rows
        let matrix = vec![vec![cells[0], cells[2]], vec![cells[1], cells[3]]];
        let theta = RingAut::new(matrix, vec![CycScalar::one(); 2])
            .map_err(|e| anyhow::anyhow!("{e}"))?;
        return Ok(LoopAut::base(table, theta));
    }
    anyhow::bail!("unsupported automorphism shape: {src:?}")
}

fn parse_scalars(src: &str, expected: usize) -> anyhow::Result<Vec<CycScalar>> {
    let scales: Vec<CycScalar> = src
        .split(',')
        .map(|c| parse_scalar(c.trim()))
        .collect::<Result<_, _>>()
        .map_err(|e| anyhow::anyhow!("{e}"))?;
    anyhow::ensure!(scales.len() == expected, "expected {expected} scalars, got {}", scales.len());
    Ok(scales)
}
