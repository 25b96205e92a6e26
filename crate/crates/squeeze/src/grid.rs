//! Evaluation points from `--ray`, `--grid` or `--points`.

use std::fs;
use std::path::Path;

use anyhow::{anyhow, bail, Context, Result};
use num_complex::Complex64;
use squeeze_core::CVector;

use crate::args::GridArgs;

/// `lo:hi:count` into `count` equispaced values (both ends included).
fn linspace(text: &str) -> Result<Vec<f64>> {
    let parts: Vec<&str> = text.split(':').collect();
    let [lo, hi, count] = parts[..] else {
        bail!("expected lo:hi:count, got {text:?}");
    };
    let lo: f64 = lo
        .trim()
        .parse()
        .with_context(|| format!("bad lower end in {text:?}"))?;
    let hi: f64 = hi
        .trim()
        .parse()
        .with_context(|| format!("bad upper end in {text:?}"))?;
    let count: usize = count.trim().parse().with_context(|| format!("bad count in {text:?}"))?;
    if count == 0 || !lo.is_finite() || !hi.is_finite() {
        bail!("range {text:?} must be finite with a positive count");
    }
    if count == 1 {
        return Ok(vec![lo]);
    }
    let step = (hi - lo) / (count - 1) as f64;
    Ok((0..count)
        .map(|k| if k + 1 == count { hi } else { lo + step * k as f64 })
        .collect())
}

fn parse_reals(text: &str) -> Result<Vec<f64>> {
    text.split(',')
        .map(|s| s.trim().parse::<f64>().with_context(|| format!("bad number {s:?}")))
        .collect()
}

/// `re1`, `im2`, ... into a real-coordinate index `2 (k - 1) + {0, 1}`.
fn axis_index(name: &str, n: usize) -> Result<usize> {
    let (part, rest) = if let Some(rest) = name.strip_prefix("re") {
        (0, rest)
    } else if let Some(rest) = name.strip_prefix("im") {
        (1, rest)
    } else {
        bail!("axis {name:?} must be re<k> or im<k>");
    };
    let k: usize = rest.parse().with_context(|| format!("bad axis {name:?}"))?;
    if k == 0 || k > n {
        bail!("axis {name:?} outside 1..={n}");
    }
    Ok(2 * (k - 1) + part)
}

fn ray(text: &str, dir: Option<&str>, n: usize) -> Result<Vec<CVector>> {
    let ts = linspace(text)?;
    let u = match dir {
        None => CVector::basis(n, 0),
        Some(d) => {
            let xs = parse_reals(d)?;
            if xs.len() != 2 * n {
                bail!(
                    "--dir needs {} numbers (re, im per coordinate), got {}",
                    2 * n,
                    xs.len()
                );
            }
            let u = CVector::from_re_im(&xs)?;
            let len = u.norm();
            if len == 0.0 {
                bail!("--dir must be nonzero");
            }
            u.scale_real(1.0 / len)
        }
    };
    Ok(ts.into_iter().map(|t| u.scale_real(t)).collect())
}

fn product_grid(specs: &[String], n: usize) -> Result<Vec<CVector>> {
    let mut axes: Vec<(usize, Vec<f64>)> = Vec::new();
    for spec in specs {
        let (name, range) = spec
            .split_once('=')
            .ok_or_else(|| anyhow!("grid axis {spec:?} must look like re1=lo:hi:count"))?;
        let idx = axis_index(name.trim(), n)?;
        if axes.iter().any(|(i, _)| *i == idx) {
            bail!("axis {name:?} given twice");
        }
        axes.push((idx, linspace(range)?));
    }
    let mut points = vec![vec![0.0; 2 * n]];
    for (idx, values) in &axes {
        points = points
            .iter()
            .flat_map(|p| {
                values.iter().map(move |&v| {
                    let mut q = p.clone();
                    q[*idx] = v;
                    q
                })
            })
            .collect();
    }
    points.iter().map(|xs| Ok(CVector::from_re_im(xs)?)).collect()
}

fn points_file(path: &Path, n: usize) -> Result<Vec<CVector>> {
    let text = fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    let points: Vec<CVector> = if path.extension().is_some_and(|e| e == "json") {
        let raw: Vec<Vec<[f64; 2]>> =
            serde_json::from_str(&text).context("points JSON must be a list of [[re, im], ...]")?;
        raw.into_iter()
            .map(|p| {
                Ok(CVector::new(
                    p.into_iter().map(|[a, b]| Complex64::new(a, b)).collect(),
                )?)
            })
            .collect::<Result<_>>()?
    } else {
        let mut reader = csv::Reader::from_reader(text.as_bytes());
        let headers = reader.headers()?.clone();
        let mut cols = Vec::with_capacity(2 * n);
        for k in 1..=n {
            for part in ["re", "im"] {
                let name = format!("z{k}_{part}");
                let pos = headers
                    .iter()
                    .position(|h| h == name)
                    .ok_or_else(|| anyhow!("points CSV lacks column {name}"))?;
                cols.push(pos);
            }
        }
        let mut out = Vec::new();
        for record in reader.records() {
            let record = record?;
            let xs = cols
                .iter()
                .map(|&c| {
                    record[c]
                        .trim()
                        .parse::<f64>()
                        .with_context(|| format!("bad number {:?}", &record[c]))
                })
                .collect::<Result<Vec<_>>>()?;
            out.push(CVector::from_re_im(&xs)?);
        }
        out
    };
    if let Some(p) = points.iter().find(|p| p.dim() != n) {
        bail!("point of dimension {} in a dimension-{n} run", p.dim());
    }
    Ok(points)
}

/// The evaluation points for dimension `n`.
pub fn points(args: &GridArgs, n: usize) -> Result<Vec<CVector>> {
    if n == 0 {
        bail!("dimension must be positive");
    }
    if let Some(r) = &args.ray {
        ray(r, args.dir.as_deref(), n)
    } else if !args.grid.is_empty() {
        product_grid(&args.grid, n)
    } else if let Some(p) = &args.points {
        points_file(p, n)
    } else {
        bail!("no evaluation points: give --ray, --grid or --points")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn linspace_includes_both_ends() {
        let v = linspace("0.3:0.99:100").unwrap();
        assert_eq!(v.len(), 100);
        assert_eq!(v[0], 0.3);
        assert_eq!(v[99], 0.99);
        assert!(linspace("0:1").is_err());
        assert!(linspace("0:1:0").is_err());
        assert_eq!(linspace("0.5:0.9:1").unwrap(), vec![0.5]);
    }

    #[test]
    fn ray_follows_direction() {
        let pts = ray("0:1:3", Some("0,1,0,0"), 2).unwrap();
        assert_eq!(pts[2][0], Complex64::new(0.0, 1.0));
        assert!(ray("0:1:3", Some("1,0"), 2).is_err());
    }

    #[test]
    fn product_grid_orders_first_axis_slowest() {
        let pts = product_grid(&["re1=0:1:2".into(), "im2=0:1:3".into()], 2).unwrap();
        assert_eq!(pts.len(), 6);
        assert_eq!(pts[1][1], Complex64::new(0.0, 0.5));
        assert_eq!(pts[3][0], Complex64::new(1.0, 0.0));
        assert!(product_grid(&["re3=0:1:2".into()], 2).is_err());
        assert!(product_grid(&["x1=0:1:2".into()], 2).is_err());
    }
}
