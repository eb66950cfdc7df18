//! Coefficient files.
//!
//! ```text
//! N 1
//! M 2
//! CUTOFF 2
//! PARAMS 2
//! OBS +Z
//! omega 0:+1 1:+1 coeff 7.6729999999999998e-1
//! omega 0:-1 1:-1 coeff -7.6729999999999998e-1
//! ```
//!
//! A `SLOTS s_0 ... s_{M-1}` header line is written when the rotation to
//! slot map is not the identity. Coefficients carry 17 significant digits,
//! enough to round-trip every `f64`.

use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::str::FromStr;

use super::{SeriesMeta, SurrogateSeries};
use crate::engine::FrequencyVector;
use crate::error::{Error, Result};

impl SurrogateSeries {
    pub fn to_text(&self) -> String {
        let m = &self.meta;
        let mut out = String::new();
        let _ = writeln!(out, "N {}", m.n);
        let _ = writeln!(out, "M {}", m.m);
        let _ = writeln!(out, "CUTOFF {}", m.cutoff);
        let _ = writeln!(out, "PARAMS {}", m.num_params);
        let _ = writeln!(out, "OBS {}", m.observable);
        if m.slots.iter().enumerate().any(|(i, &s)| i != s) {
            let slots: Vec<String> = m.slots.iter().map(usize::to_string).collect();
            let _ = writeln!(out, "SLOTS {}", slots.join(" "));
        }
        for (omega, d) in &self.terms {
            let _ = writeln!(out, "omega {omega} coeff {d:.16e}");
        }
        out
    }
}

impl FromStr for SurrogateSeries {
    type Err = Error;

    fn from_str(text: &str) -> Result<Self> {
        let mut n = None;
        let mut m = None;
        let mut cutoff = None;
        let mut params = None;
        let mut obs = None;
        let mut slots: Option<Vec<usize>> = None;
        let mut terms = BTreeMap::new();
        let mut last_line = 0;

        fn set<T>(slot: &mut Option<T>, v: T, line: usize, key: &str) -> Result<()> {
            if slot.replace(v).is_some() {
                return Err(Error::parse(line, format!("duplicate {key} header")));
            }
            Ok(())
        }
        let int = |v: &str, line: usize, key: &str| -> Result<usize> {
            v.trim()
                .parse()
                .map_err(|_| Error::parse(line, format!("invalid {key} value {v:?}")))
        };

        for (idx, raw) in text.lines().enumerate() {
            let line = idx + 1;
            last_line = line;
            let content = raw.trim();
            if content.is_empty() || content.starts_with('#') {
                continue;
            }
            let (key, rest) = content.split_once(char::is_whitespace).unwrap_or((content, ""));
            match key {
                "N" => set(&mut n, int(rest, line, key)?, line, key)?,
                "M" => set(&mut m, int(rest, line, key)?, line, key)?,
                "CUTOFF" => set(&mut cutoff, int(rest, line, key)?, line, key)?,
                "PARAMS" => set(&mut params, int(rest, line, key)?, line, key)?,
                "OBS" => set(&mut obs, rest.trim().to_string(), line, key)?,
                "SLOTS" => {
                    let v = rest
                        .split_whitespace()
                        .map(|t| int(t, line, key))
                        .collect::<Result<Vec<_>>>()?;
                    set(&mut slots, v, line, key)?
                }
                "omega" => {
                    let (omega, coeff) = rest
                        .rsplit_once("coeff")
                        .ok_or_else(|| Error::parse(line, "term line needs `coeff <value>`"))?;
                    let omega: FrequencyVector = omega.parse().map_err(|e: Error| match e {
                        Error::Parse { msg, .. } => Error::parse(line, msg),
                        other => Error::parse(line, other.to_string()),
                    })?;
                    let d: f64 = coeff
                        .trim()
                        .parse()
                        .map_err(|_| Error::parse(line, format!("invalid coefficient {:?}", coeff.trim())))?;
                    if terms.insert(omega.clone(), d).is_some() {
                        return Err(Error::parse(line, format!("duplicate frequency vector {omega}")));
                    }
                }
                other => return Err(Error::parse(line, format!("unknown key {other:?}"))),
            }
        }

        let end = last_line.max(1);
        let need = |v: Option<usize>, key: &str| v.ok_or_else(|| Error::parse(end, format!("missing {key} header")));
        let m_val = need(m, "M")?;
        let meta = SeriesMeta {
            n: need(n, "N")?,
            m: m_val,
            cutoff: need(cutoff, "CUTOFF")?,
            num_params: need(params, "PARAMS")?,
            observable: obs.ok_or_else(|| Error::parse(end, "missing OBS header"))?,
            slots: slots.unwrap_or_else(|| (0..m_val).collect()),
        };
        SurrogateSeries::new(meta, terms).map_err(|e| Error::parse(end, e.to_string()))
    }
}
