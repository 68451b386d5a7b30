//! JSON manifests and CSV exports.

use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};

use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use serde_json::{Map, Value};
use tomo_core::linalg::CMatrix;
use tomo_core::spin::{BetaNodes, Half};
use tomo_core::{
    Array2, DensityKernel, Grid1D, OpticalSamples, PhaseDensity, SpinState, SpinTomogram, Validate, WignerGrid,
};

use crate::descriptor::parse_spin;
use crate::error::{CliError, CliResult};

pub const SCHEMA: u32 = 1;
pub const UNITS: &str = "hbar=1";

/// One axis of a sampled field.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum Axis {
    /// `n_points` equally spaced nodes from `min` to `max` inclusive.
    Uniform { min: f64, max: f64, n_points: usize },
    /// Polar angles `acos` of the `n_points` Gauss-Legendre nodes, ascending.
    GaussLegendreCos { n_points: usize },
    /// Spin projections `+j, j-1, ..., -j`.
    Projections { j: String },
}

impl Axis {
    pub fn uniform(g: &Grid1D) -> Self {
        Self::Uniform { min: g.min(), max: g.max(), n_points: g.len() }
    }

    pub fn beta(b: &BetaNodes) -> Self {
        match b {
            BetaNodes::Uniform(g) => Self::uniform(g),
            BetaNodes::GaussLegendre(n) => Self::GaussLegendreCos { n_points: *n },
        }
    }

    pub fn grid(&self) -> CliResult<Grid1D> {
        match *self {
            Self::Uniform { min, max, n_points } => {
                Grid1D::new(min, max, n_points).map_err(|e| CliError::input(format!("axis: {e}")))
            }
            _ => Err(CliError::input("expected a uniform axis")),
        }
    }

    pub fn beta_nodes(&self) -> CliResult<BetaNodes> {
        match self {
            Self::GaussLegendreCos { n_points } if *n_points > 0 => Ok(BetaNodes::GaussLegendre(*n_points)),
            Self::Uniform { .. } => Ok(BetaNodes::Uniform(self.grid()?)),
            _ => Err(CliError::input("invalid beta axis")),
        }
    }

    pub fn spin(&self) -> CliResult<Half> {
        match self {
            Self::Projections { j } => parse_spin(j).ok_or_else(|| CliError::input(format!("invalid spin '{j}'"))),
            _ => Err(CliError::input("expected a projection axis")),
        }
    }

    pub fn nodes(&self) -> CliResult<Vec<f64>> {
        Ok(match self {
            Self::Uniform { .. } => self.grid()?.to_vec(),
            Self::GaussLegendreCos { .. } => self.beta_nodes()?.angles(),
            Self::Projections { .. } => self.spin()?.projections().map(|m| m.value()).collect(),
        })
    }
}

/// Row-major samples, real or complex.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum Values {
    Real(Vec<f64>),
    Complex(Vec<[f64; 2]>),
}

impl Values {
    fn complex(v: &[Complex64]) -> Self {
        Self::Complex(v.iter().map(|z| [z.re, z.im]).collect())
    }

    pub fn len(&self) -> usize {
        match self {
            Self::Real(v) => v.len(),
            Self::Complex(v) => v.len(),
        }
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn real(&self) -> CliResult<&[f64]> {
        match self {
            Self::Real(v) => Ok(v),
            Self::Complex(_) => Err(CliError::input("expected real values")),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Meta {
    pub units: String,
    /// Axis names in row-major order.
    #[serde(default)]
    pub axes: Vec<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
    #[serde(flatten)]
    pub extra: Map<String, Value>,
}

/// Self-describing sampled field.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Manifest {
    #[serde(rename = "type")]
    pub kind: String,
    pub grids: BTreeMap<String, Axis>,
    pub values: Values,
    pub meta: Meta,
    pub schema: u32,
}

impl Manifest {
    fn new(kind: &str, axes: Vec<(&str, Axis)>, values: Values) -> Self {
        Self {
            kind: kind.into(),
            meta: Meta {
                units: UNITS.into(),
                axes: axes.iter().map(|(n, _)| n.to_string()).collect(),
                seed: None,
                extra: Map::new(),
            },
            grids: axes.into_iter().map(|(n, a)| (n.to_string(), a)).collect(),
            values,
            schema: SCHEMA,
        }
    }

    pub fn with_seed(mut self, seed: u64) -> Self {
        self.meta.seed = Some(seed);
        self
    }

    pub fn with(mut self, key: &str, value: impl Serialize) -> Self {
        let v = serde_json::to_value(value).expect("meta values serialize");
        self.meta.extra.insert(key.into(), v);
        self
    }

    pub fn optical(t: &OpticalSamples) -> Self {
        Self::new(
            "OpticalSamples",
            vec![("phi", Axis::uniform(t.phi_grid())), ("X", Axis::uniform(t.x_grid()))],
            Values::Real(t.values().as_slice().to_vec()),
        )
    }

    pub fn wigner(w: &WignerGrid) -> Self {
        Self::new(
            "WignerGrid",
            vec![("q", Axis::uniform(w.q_grid())), ("p", Axis::uniform(w.p_grid()))],
            Values::Real(w.values().as_slice().to_vec()),
        )
    }

    pub fn phase_density(f: &PhaseDensity) -> Self {
        Self::new(
            "PhaseDensity",
            vec![("q", Axis::uniform(f.q_grid())), ("p", Axis::uniform(f.p_grid()))],
            Values::Real(f.values().as_slice().to_vec()),
        )
    }

    pub fn density(rho: &DensityKernel) -> Self {
        let g = Axis::uniform(rho.x_grid());
        Self::new("DensityKernel", vec![("X", g.clone()), ("X_prime", g)], Values::complex(rho.values().as_slice()))
    }

    pub fn spin_tomogram(t: &SpinTomogram) -> Self {
        Self::new(
            "SpinTomogram",
            vec![
                ("m", Axis::Projections { j: t.j().to_string() }),
                ("alpha", Axis::uniform(t.alpha_grid())),
                ("beta", Axis::beta(t.beta())),
            ],
            Values::Real(t.values().to_vec()),
        )
    }

    pub fn spin_state(s: &SpinState) -> Self {
        let m = Axis::Projections { j: s.j().to_string() };
        Self::new("SpinState", vec![("m", m.clone()), ("m_prime", m)], Values::complex(s.rho().as_slice()))
    }

    fn expect(&self, kind: &str) -> CliResult<()> {
        if self.schema != SCHEMA {
            return Err(CliError::input(format!("unsupported schema {}", self.schema)));
        }
        if self.kind != kind {
            return Err(CliError::input(format!("expected a {kind} manifest, found {}", self.kind)));
        }
        Ok(())
    }

    fn axis(&self, name: &str) -> CliResult<&Axis> {
        self.grids.get(name).ok_or_else(|| CliError::input(format!("manifest lacks the '{name}' axis")))
    }

    pub fn to_optical(&self) -> CliResult<OpticalSamples> {
        self.expect("OpticalSamples")?;
        let (phi, x) = (self.axis("phi")?.grid()?, self.axis("X")?.grid()?);
        let values = Array2::from_vec(phi.len(), x.len(), self.values.real()?.to_vec())
            .map_err(|e| CliError::input(e.to_string()))?;
        OpticalSamples::new(x, phi, values).map_err(|e| CliError::input(e.to_string()))
    }

    pub fn to_spin_tomogram(&self) -> CliResult<SpinTomogram> {
        self.expect("SpinTomogram")?;
        let j = self.axis("m")?.spin()?;
        let alpha = self.axis("alpha")?.grid()?;
        let beta = self.axis("beta")?.beta_nodes()?;
        SpinTomogram::new(j, alpha, beta, self.values.real()?.to_vec()).map_err(|e| CliError::input(e.to_string()))
    }

    /// CSV rendering: `# columns: <axes...>,value`, one row per sample.
    pub fn to_csv(&self) -> CliResult<String> {
        let axes: Vec<Vec<f64>> =
            self.meta.axes.iter().map(|a| self.axis(a).and_then(Axis::nodes)).collect::<CliResult<_>>()?;
        let value_cols = match self.values {
            Values::Real(_) => "value",
            Values::Complex(_) => "re,im",
        };
        let mut out = format!("# columns: {},{value_cols}\n", self.meta.axes.join(","));
        let total: usize = axes.iter().map(Vec::len).product();
        if total != self.values.len() {
            return Err(CliError::input(format!("{} values for {total} grid nodes", self.values.len())));
        }
        let mut idx = vec![0usize; axes.len()];
        for k in 0..total {
            for (a, i) in axes.iter().zip(&idx) {
                write!(out, "{},", number(a[*i])).unwrap();
            }
            match &self.values {
                Values::Real(v) => writeln!(out, "{}", number(v[k])).unwrap(),
                Values::Complex(v) => writeln!(out, "{},{}", number(v[k][0]), number(v[k][1])).unwrap(),
            }
            for d in (0..idx.len()).rev() {
                idx[d] += 1;
                if idx[d] < axes[d].len() {
                    break;
                }
                idx[d] = 0;
            }
        }
        Ok(out)
    }
}

/// Shortest text that parses back to `v`, in exponent form outside
/// `[1e-4, 1e15)`.
pub fn number(v: f64) -> String {
    let a = v.abs();
    if a == 0.0 || (1e-4..1e15).contains(&a) || !a.is_finite() {
        format!("{v}")
    } else {
        format!("{v:e}")
    }
}

fn read_text(path: &Path) -> CliResult<String> {
    let text = fs::read_to_string(path).map_err(|e| CliError::Io(format!("{}: {e}", path.display())))?;
    if text.trim().is_empty() {
        return Err(CliError::input(format!("{} is empty", path.display())));
    }
    Ok(text)
}

pub fn read_manifest(path: &Path) -> CliResult<Manifest> {
    serde_json::from_str(&read_text(path)?).map_err(|e| CliError::input(format!("{}: {e}", path.display())))
}

/// Uniform grid through `nodes`, which must be equally spaced.
fn grid_through(nodes: &[f64]) -> CliResult<Grid1D> {
    let g = Grid1D::new(nodes[0], nodes[nodes.len() - 1], nodes.len())
        .map_err(|e| CliError::input(format!("csv axis: {e}")))?;
    let scale = g.max().abs().max(g.min().abs()).max(1.0);
    if nodes.iter().enumerate().any(|(i, x)| (x - g.point(i)).abs() > 1e-9 * scale) {
        return Err(CliError::input("csv axis is not uniformly spaced"));
    }
    Ok(g)
}

/// Optical tomogram from a `# columns: phi,X,value` CSV export.
pub fn optical_from_csv(text: &str) -> CliResult<OpticalSamples> {
    let mut lines = text.lines().filter(|l| !l.trim().is_empty());
    let header = lines.next().unwrap_or_default();
    let cols = header.strip_prefix("# columns:").ok_or_else(|| CliError::input("csv lacks the '# columns:' header"))?;
    let cols: Vec<&str> = cols.split(',').map(str::trim).collect();
    if cols != ["phi", "X", "value"] {
        return Err(CliError::input(format!("expected columns phi,X,value, found {}", cols.join(","))));
    }
    let mut rows = Vec::new();
    for (k, line) in lines.enumerate() {
        let r: Vec<f64> = line
            .split(',')
            .map(|t| t.trim().parse::<f64>())
            .collect::<Result<_, _>>()
            .map_err(|e| CliError::input(format!("csv row {}: {e}", k + 1)))?;
        if r.len() != 3 {
            return Err(CliError::input(format!("csv row {} has {} fields", k + 1, r.len())));
        }
        rows.push([r[0], r[1], r[2]]);
    }
    if rows.is_empty() {
        return Err(CliError::input("csv has no samples"));
    }
    let nx = rows.iter().take_while(|r| r[0] == rows[0][0]).count();
    if rows.len() % nx != 0 {
        return Err(CliError::input("csv rows do not form a full phi x X lattice"));
    }
    let nphi = rows.len() / nx;
    let phis: Vec<f64> = (0..nphi).map(|i| rows[i * nx][0]).collect();
    let xs: Vec<f64> = rows[..nx].iter().map(|r| r[1]).collect();
    for (k, r) in rows.iter().enumerate() {
        if r[0] != phis[k / nx] || r[1] != xs[k % nx] {
            return Err(CliError::input(format!("csv row {} breaks the lattice order", k + 1)));
        }
    }
    if nphi < 2 || nx < 2 {
        return Err(CliError::input("csv needs at least two angles and two X nodes"));
    }
    let (phi, x) = (grid_through(&phis)?, grid_through(&xs)?);
    let values =
        Array2::from_vec(nphi, nx, rows.iter().map(|r| r[2]).collect()).map_err(|e| CliError::input(e.to_string()))?;
    OpticalSamples::new(x, phi, values).map_err(|e| CliError::input(e.to_string()))
}

/// Optical tomogram from a manifest or CSV file; the input must pass the
/// tomogram invariants.
pub fn read_optical(path: &Path) -> CliResult<OpticalSamples> {
    let t = if path.extension().is_some_and(|e| e.eq_ignore_ascii_case("csv")) {
        optical_from_csv(&read_text(path)?)?
    } else {
        read_manifest(path)?.to_optical()?
    };
    admissible(&t)?;
    Ok(t)
}

pub fn read_spin_tomogram(path: &Path) -> CliResult<SpinTomogram> {
    let t = read_manifest(path)?.to_spin_tomogram()?;
    admissible(&t)?;
    Ok(t)
}

pub fn admissible(v: &impl Validate) -> CliResult<()> {
    let violations = v.validate();
    if violations.is_empty() {
        return Ok(());
    }
    let list: Vec<String> = violations.iter().map(ToString::to_string).collect();
    Err(CliError::input(list.join("; ")))
}

#[derive(Deserialize)]
#[serde(untagged)]
enum Entry {
    Real(f64),
    Complex([f64; 2]),
}

#[derive(Deserialize)]
#[serde(untagged)]
enum MatrixFile {
    Bare(Vec<Vec<Entry>>),
    Wrapped { rho: Vec<Vec<Entry>> },
}

/// Spin density matrix from JSON: a row-major array of rows (or an object
/// with a `rho` field) whose entries are numbers or `[re, im]` pairs, rows
/// ordered `m = +j, ..., -j`.
pub fn read_spin_matrix(path: &Path, j: Half) -> CliResult<SpinState> {
    let file: MatrixFile =
        serde_json::from_str(&read_text(path)?).map_err(|e| CliError::input(format!("{}: {e}", path.display())))?;
    let rows = match file {
        MatrixFile::Bare(r) | MatrixFile::Wrapped { rho: r } => r,
    };
    let rows: Vec<Vec<Complex64>> = rows
        .into_iter()
        .map(|r| {
            r.into_iter()
                .map(|e| match e {
                    Entry::Real(x) => Complex64::new(x, 0.0),
                    Entry::Complex([re, im]) => Complex64::new(re, im),
                })
                .collect()
        })
        .collect();
    let rho: CMatrix = Array2::from_rows(rows).map_err(|e| CliError::input(e.to_string()))?;
    let state = SpinState::new(j, rho).map_err(|e| CliError::input(e.to_string()))?;
    admissible(&state)?;
    Ok(state)
}

/// Writes `<stem>.json` and `<stem>.csv` under `dir`.
pub fn write_outputs(dir: &Path, stem: &str, manifest: &Manifest) -> CliResult<Vec<PathBuf>> {
    fs::create_dir_all(dir).map_err(|e| CliError::Io(format!("{}: {e}", dir.display())))?;
    let json = dir.join(format!("{stem}.json"));
    let csv = dir.join(format!("{stem}.csv"));
    let mut text = serde_json::to_string_pretty(manifest).expect("manifest serializes");
    text.push('\n');
    fs::write(&json, text).map_err(|e| CliError::Io(format!("{}: {e}", json.display())))?;
    fs::write(&csv, manifest.to_csv()?).map_err(|e| CliError::Io(format!("{}: {e}", csv.display())))?;
    Ok(vec![json, csv])
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;
    use tomo_core::analytic::{fock_tomogram, FockLabel};

    fn sample() -> OpticalSamples {
        let x = Grid1D::new(-8.0, 7.75, 64).unwrap();
        let phi = Grid1D::periodic(0.0, PI, 8).unwrap();
        fock_tomogram(FockLabel::new(1).unwrap()).sample(&x, &phi)
    }

    #[test]
    fn manifest_round_trip() {
        let t = sample();
        let m = Manifest::optical(&t).with_seed(42);
        let text = serde_json::to_string(&m).unwrap();
        assert!(text.starts_with(r#"{"type":"OpticalSamples","grids""#));
        assert!(text.contains(r#""meta":{"units":"hbar=1","axes":["phi","X"],"seed":42}"#));
        assert!(text.ends_with(r#""schema":1}"#));
        let back: Manifest = serde_json::from_str(&text).unwrap();
        assert_eq!(back.to_optical().unwrap(), t);
    }

    #[test]
    fn csv_round_trip() {
        let t = sample();
        let csv = Manifest::optical(&t).to_csv().unwrap();
        assert!(csv.starts_with("# columns: phi,X,value\n0,-8,"));
        assert_eq!(csv.lines().count(), 1 + 8 * 64);
        assert_eq!(optical_from_csv(&csv).unwrap(), t);
    }

    #[test]
    fn complex_fields_have_two_value_columns() {
        let s = SpinState::maximally_mixed(Half::from_twice(1));
        let csv = Manifest::spin_state(&s).to_csv().unwrap();
        let lines: Vec<&str> = csv.lines().collect();
        assert_eq!(lines[0], "# columns: m,m_prime,re,im");
        assert_eq!(lines[1], "0.5,0.5,0.5,0");
        assert_eq!(lines[2], "0.5,-0.5,0,0");
    }

    #[test]
    fn numbers_round_trip() {
        for v in [0.0, -0.0, 1e-4, 9.048533984279921e-29, 0.5641895835477563, -3.25, 2e20, f64::MIN_POSITIVE] {
            assert_eq!(number(v).parse::<f64>().unwrap().to_bits(), v.to_bits(), "{v}");
        }
        assert_eq!(number(9.048533984279921e-29), "9.048533984279921e-29");
        assert_eq!(number(0.25), "0.25");
    }

    #[test]
    fn malformed_csv_is_rejected() {
        assert!(optical_from_csv("").is_err());
        assert!(optical_from_csv("# columns: q,p,value\n0,0,1\n").is_err());
        assert!(optical_from_csv("# columns: phi,X,value\n0,0,1\n0,1,x\n").is_err());
        assert!(optical_from_csv("# columns: phi,X,value\n0,0,1\n0,1,1\n1,0,1\n").is_err());
    }
}
