use std::fmt;
use std::path::PathBuf;
use std::str::FromStr;

use num_complex::Complex64;
use tomo_core::analytic::{classical_point_tomogram, coherent_tomogram, fock_tomogram, CoherentLabel, FockLabel};
use tomo_core::spin::Half;
use tomo_core::AnalyticTomogram;

use crate::error::{CliError, CliResult};

/// A library state named on the command line.
#[derive(Debug, Clone, PartialEq)]
pub enum StateDescriptor {
    /// `fock:n`
    Fock(FockLabel),
    /// `coherent:re,im`
    Coherent(CoherentLabel),
    /// `classical-point:x0,p0[,eps]`
    ClassicalPoint { x0: f64, p0: f64, eps: Option<f64> },
    /// `spin:j:matrix-file`
    Spin { j: Half, matrix: PathBuf },
}

fn unknown(s: &str, why: impl fmt::Display) -> CliError {
    CliError::UnknownState(format!("'{s}': {why}"))
}

fn numbers(s: &str, body: &str) -> CliResult<Vec<f64>> {
    body.split(',')
        .map(|t| {
            let v: f64 = t.trim().parse().map_err(|_| unknown(s, format!("'{t}' is not a number")))?;
            if v.is_finite() {
                Ok(v)
            } else {
                Err(unknown(s, "parameters must be finite"))
            }
        })
        .collect()
}

/// Parses `1/2`, `3/2`, `1`, `0.5`, ...
pub fn parse_spin(s: &str) -> Option<Half> {
    let twice = if let Some((num, den)) = s.split_once('/') {
        if den.trim() != "2" {
            return None;
        }
        num.trim().parse::<i32>().ok()?
    } else {
        let v: f64 = s.trim().parse().ok()?;
        let t = 2.0 * v;
        if t.fract() != 0.0 || !(0.0..=1e6).contains(&t) {
            return None;
        }
        t as i32
    };
    (twice >= 0).then(|| Half::from_twice(twice))
}

impl FromStr for StateDescriptor {
    type Err = CliError;

    fn from_str(s: &str) -> CliResult<Self> {
        let (kind, body) = s.split_once(':').ok_or_else(|| unknown(s, "expected <kind>:<parameters>"))?;
        match kind {
            "fock" => {
                let n: u32 = body.trim().parse().map_err(|_| unknown(s, "n must be a non-negative integer"))?;
                Ok(Self::Fock(FockLabel::new(n).map_err(|e| unknown(s, e))?))
            }
            "coherent" => match numbers(s, body)?.as_slice() {
                &[re, im] => Ok(Self::Coherent(CoherentLabel::new(Complex64::new(re, im)).map_err(|e| unknown(s, e))?)),
                _ => Err(unknown(s, "expected coherent:re,im")),
            },
            "classical-point" => match *numbers(s, body)?.as_slice() {
                [x0, p0] => Ok(Self::ClassicalPoint { x0, p0, eps: None }),
                [x0, p0, eps] if eps > 0.0 => Ok(Self::ClassicalPoint { x0, p0, eps: Some(eps) }),
                [_, _, _] => Err(unknown(s, "eps must be positive")),
                _ => Err(unknown(s, "expected classical-point:x0,p0[,eps]")),
            },
            "spin" => {
                let (j, path) = body.split_once(':').ok_or_else(|| unknown(s, "expected spin:j:matrix-file"))?;
                let j = parse_spin(j).ok_or_else(|| unknown(s, "j must be a non-negative multiple of 1/2"))?;
                if path.is_empty() {
                    return Err(unknown(s, "missing matrix file"));
                }
                Ok(Self::Spin { j, matrix: PathBuf::from(path) })
            }
            _ => Err(unknown(s, format!("unknown kind '{kind}'"))),
        }
    }
}

impl fmt::Display for StateDescriptor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Self::Fock(n) => write!(f, "fock:{}", n.n()),
            Self::Coherent(a) => write!(f, "coherent:{},{}", a.alpha().re, a.alpha().im),
            Self::ClassicalPoint { x0, p0, eps: None } => write!(f, "classical-point:{x0},{p0}"),
            Self::ClassicalPoint { x0, p0, eps: Some(e) } => write!(f, "classical-point:{x0},{p0},{e}"),
            Self::Spin { j, matrix } => write!(f, "spin:{j}:{}", matrix.display()),
        }
    }
}

impl StateDescriptor {
    /// Closed-form tomogram of a continuous-variable state.
    pub fn analytic(&self, point_width: f64) -> CliResult<AnalyticTomogram> {
        match *self {
            Self::Fock(n) => Ok(fock_tomogram(n)),
            Self::Coherent(a) => Ok(coherent_tomogram(a)),
            Self::ClassicalPoint { x0, p0, eps } => {
                classical_point_tomogram(x0, p0, eps.unwrap_or(point_width)).map_err(|e| unknown(&self.to_string(), e))
            }
            Self::Spin { .. } => Err(CliError::input("spin states have no phase-space tomogram")),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_library_states() {
        assert_eq!("fock:3".parse::<StateDescriptor>().unwrap(), StateDescriptor::Fock(FockLabel::new(3).unwrap()));
        let c: StateDescriptor = "coherent:1,-0.5".parse().unwrap();
        assert_eq!(c.to_string(), "coherent:1,-0.5");
        assert!(matches!(
            "classical-point:1,2".parse(),
            Ok(StateDescriptor::ClassicalPoint { x0, p0, eps: None }) if x0 == 1.0 && p0 == 2.0
        ));
        match "spin:3/2:rho.json".parse().unwrap() {
            StateDescriptor::Spin { j, matrix } => {
                assert_eq!(j, Half::from_twice(3));
                assert_eq!(matrix, PathBuf::from("rho.json"));
            }
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn rejects_unknown_states() {
        for bad in [
            "fock:-1",
            "fock:x",
            "fock:1000",
            "coherent:1",
            "squeezed:1",
            "classical-point:0,0,0",
            "spin:1/3:a",
            "fock",
        ] {
            assert!(matches!(bad.parse::<StateDescriptor>(), Err(CliError::UnknownState(_))), "{bad}");
        }
    }

    #[test]
    fn spin_values() {
        assert_eq!(parse_spin("1/2"), Some(Half::from_twice(1)));
        assert_eq!(parse_spin("1.5"), Some(Half::from_twice(3)));
        assert_eq!(parse_spin("2"), Some(Half::from_twice(4)));
        assert_eq!(parse_spin("0.3"), None);
        assert_eq!(parse_spin("-1/2"), None);
    }
}
