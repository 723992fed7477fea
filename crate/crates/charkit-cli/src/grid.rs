//! Sweep-parameter parsing for the command line.

use anyhow::{bail, Context};

/// Parse `start:end:step` (inclusive of the endpoint within a half-step
/// tolerance) or a comma-separated list into a value grid.
pub fn parse_value_grid(s: &str) -> anyhow::Result<Vec<f64>> {
    if s.contains(':') {
        let parts: Vec<&str> = s.split(':').collect();
        if parts.len() != 3 {
            bail!("expected start:end:step, got `{s}`");
        }
        let start: f64 = parts[0].parse().context("bad grid start")?;
        let end: f64 = parts[1].parse().context("bad grid end")?;
        let step: f64 = parts[2].parse().context("bad grid step")?;
        if !(step > 0.0) || end < start {
            bail!("grid `{s}` must have positive step and end >= start");
        }
        let mut grid = Vec::new();
        let mut k = 0usize;
        loop {
            let v = start + step * k as f64;
            if v > end + step * 1e-9 {
                break;
            }
            grid.push(v);
            k += 1;
        }
        Ok(grid)
    } else {
        s.split(',')
            .map(|t| t.trim().parse::<f64>().with_context(|| format!("bad grid value `{t}`")))
            .collect()
    }
}

/// Parse seeds: a single integer N is shorthand for the N seeds `0..N`, a
/// comma-separated list is taken verbatim.
pub fn parse_seeds(s: &str) -> anyhow::Result<Vec<u64>> {
    if s.contains(',') {
        return s
            .split(',')
            .map(|t| t.trim().parse::<u64>().with_context(|| format!("bad seed `{t}`")))
            .collect();
    }
    let n: u64 = s.parse().context("bad seed count")?;
    if n == 0 {
        bail!("need at least one seed");
    }
    Ok((0..n).collect())
}

/// Parse a comma-separated layer-size list.
pub fn parse_layers(s: &str) -> anyhow::Result<Vec<usize>> {
    let layers: Vec<usize> = s
        .split(',')
        .map(|t| t.trim().parse::<usize>().with_context(|| format!("bad layer size `{t}`")))
        .collect::<anyhow::Result<_>>()?;
    if layers.len() < 2 {
        bail!("need at least two layers");
    }
    Ok(layers)
}

/// Parse an inclusive integer range `lo:hi` (or a single value).
pub fn parse_range(s: &str) -> anyhow::Result<(usize, usize)> {
    match s.split_once(':') {
        Some((lo, hi)) => {
            let lo = lo.trim().parse().context("bad range start")?;
            let hi = hi.trim().parse().context("bad range end")?;
            if lo > hi {
                bail!("range `{s}` is reversed");
            }
            Ok((lo, hi))
        }
        None => {
            let v = s.trim().parse().context("bad range value")?;
            Ok((v, v))
        }
    }
}

/// Parse `RxC` grid dimensions.
pub fn parse_grid_dims(s: &str) -> anyhow::Result<(usize, usize)> {
    let (r, c) = s
        .split_once(['x', 'X'])
        .with_context(|| format!("expected RxC, got `{s}`"))?;
    Ok((
        r.trim().parse().context("bad grid rows")?,
        c.trim().parse().context("bad grid cols")?,
    ))
}
