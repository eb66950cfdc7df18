use std::fs;
use std::path::Path;

use lowesa::{Error, PauliString};

use crate::CliError;

/// `sum_j w_j P_j`.
#[derive(Debug, Clone, PartialEq)]
pub struct Observable {
    pub terms: Vec<(f64, PauliString)>,
}

impl Observable {
    pub fn single(p: PauliString) -> Self {
        Observable { terms: vec![(1.0, p)] }
    }

    /// Lines of `weight pauli`; blank lines and `#` comments are skipped.
    pub fn parse_sum(text: &str) -> Result<Self, Error> {
        let mut terms = Vec::new();
        for (idx, raw) in text.lines().enumerate() {
            let line = raw.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let bad = |msg: String| Error::Parse { line: idx + 1, msg };
            let mut toks = line.split_whitespace();
            let (Some(w), Some(p), None) = (toks.next(), toks.next(), toks.next()) else {
                return Err(bad("expected `weight pauli`".into()));
            };
            let w: f64 = w.parse().map_err(|_| bad(format!("invalid weight {w:?}")))?;
            let p: PauliString = p.parse().map_err(|e: Error| bad(e.to_string()))?;
            terms.push((w, p));
        }
        if terms.is_empty() {
            return Err(Error::Parse { line: 1, msg: "observable file has no terms".into() });
        }
        Ok(Observable { terms })
    }

    /// `sum_j |w_j|`, the factor by which single-Pauli error bounds scale.
    pub fn weight_norm(&self) -> f64 {
        self.terms.iter().map(|(w, _)| w.abs()).sum()
    }

    pub fn describe(&self) -> String {
        match self.terms.as_slice() {
            [(w, p)] if *w == 1.0 => p.to_string(),
            terms => terms.iter().map(|(w, p)| format!("{w} {p}")).collect::<Vec<_>>().join("; "),
        }
    }
}

pub fn read(path: &Path) -> Result<String, CliError> {
    fs::read_to_string(path).map_err(|e| CliError::input(format!("cannot read {}: {e}", path.display())))
}

pub fn observable(inline: Option<&str>, file: Option<&Path>) -> Result<Observable, CliError> {
    match (inline, file) {
        (Some(p), None) => Ok(Observable::single(p.parse()?)),
        (None, Some(path)) => Ok(Observable::parse_sum(&read(path)?)?),
        _ => Err(CliError::input("give exactly one of --obs or --obs-file".into())),
    }
}

/// Reals separated by commas and/or whitespace.
pub fn reals(text: &str) -> Result<Vec<f64>, CliError> {
    text.split(|c: char| c == ',' || c.is_whitespace())
        .filter(|t| !t.is_empty())
        .map(|t| t.parse().map_err(|_| CliError::input(format!("invalid number {t:?}"))))
        .collect()
}

pub fn theta(inline: Option<&str>, file: Option<&Path>) -> Result<Vec<f64>, CliError> {
    match (inline, file) {
        (Some(t), None) => reals(t),
        (None, Some(path)) => reals(&read(path)?),
        (None, None) => Ok(Vec::new()),
        _ => Err(CliError::input("give at most one of --theta or --theta-file".into())),
    }
}

pub fn indices(text: &str) -> Result<Vec<usize>, CliError> {
    text.split(',')
        .map(|t| t.trim().parse().map_err(|_| CliError::input(format!("invalid index {t:?}"))))
        .collect()
}

/// `a,b,c` or an inclusive range `a:b`.
pub fn list(text: &str) -> Result<Vec<usize>, CliError> {
    match text.split_once(':') {
        Some((a, b)) => {
            let (a, b) = (indices(a)?, indices(b)?);
            match (a.as_slice(), b.as_slice()) {
                ([a], [b]) if a <= b => Ok((*a..=*b).collect()),
                _ => Err(CliError::input(format!("invalid range {text:?}"))),
            }
        }
        None => indices(text),
    }
}

/// `slot=angle` pairs separated by commas.
pub fn fixed(text: &str) -> Result<Vec<(usize, f64)>, CliError> {
    text.split(',')
        .map(|pair| {
            let bad = || CliError::input(format!("invalid binding {pair:?}, expected slot=angle"));
            let (s, a) = pair.split_once('=').ok_or_else(bad)?;
            Ok((s.trim().parse().map_err(|_| bad())?, a.trim().parse().map_err(|_| bad())?))
        })
        .collect()
}
