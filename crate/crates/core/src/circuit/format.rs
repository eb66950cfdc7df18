//! Line-oriented circuit files.
//!
//! ```text
//! QUBITS 2
//! NOISE_DEFAULT ROT 0.01 0.01 0.01
//! CLIFF H 0
//! RZ 0 theta0
//! CHANNEL DEPOL 1 0.02
//! CLIFF CX 0 1
//! RZ 1 theta0 0 0 0.1
//! ```
//!
//! `RZ q name [px py pz]` overrides the default noise for one rotation.
//! Channels: `DEPOL q eta`, `DEPHASE q p`, `PAULI q qx qy qz` (eigenvalues),
//! `PAULI2 a b <16 eigenvalues>`.

use std::fmt::Write as _;
use std::str::FromStr;

use super::{ChannelPosition, CircuitBuilder, NoisyCircuit, Segment};
use crate::clifford::{CliffordGate, GateKind};
use crate::error::{Error, Result};
use crate::pauli::{ChannelEigenvalueMap, ChannelFactor, LocalPauliNoise};

fn num<T: FromStr>(tok: Option<&str>, line: usize, what: &str) -> Result<T> {
    let tok = tok.ok_or_else(|| Error::parse(line, format!("missing {what}")))?;
    tok.parse()
        .map_err(|_| Error::parse(line, format!("invalid {what} {tok:?}")))
}

fn at_line<T>(r: Result<T>, line: usize) -> Result<T> {
    r.map_err(|e| match e {
        Error::Parse { msg, .. } => Error::parse(line, msg),
        other => Error::parse(line, other.to_string()),
    })
}

fn no_more<'a>(mut toks: impl Iterator<Item = &'a str>, line: usize) -> Result<()> {
    match toks.next() {
        Some(t) => Err(Error::parse(line, format!("unexpected trailing token {t:?}"))),
        None => Ok(()),
    }
}

impl FromStr for NoisyCircuit {
    type Err = Error;

    fn from_str(text: &str) -> Result<Self> {
        let mut builder: Option<CircuitBuilder> = None;
        let mut default_noise: Option<LocalPauliNoise> = None;
        // rotation index -> explicit noise given on its RZ line
        let mut explicit = Vec::new();

        for (idx, raw) in text.lines().enumerate() {
            let line = idx + 1;
            let content = raw.split('#').next().unwrap_or("").trim();
            if content.is_empty() {
                continue;
            }
            let mut toks = content.split_whitespace();
            let keyword = toks.next().unwrap_or_default().to_ascii_uppercase();
            if keyword == "QUBITS" {
                if builder.is_some() {
                    return Err(Error::parse(line, "duplicate QUBITS"));
                }
                let n: usize = num(toks.next(), line, "qubit count")?;
                if n == 0 {
                    return Err(Error::parse(line, "QUBITS must be positive"));
                }
                no_more(toks, line)?;
                builder = Some(CircuitBuilder::new(n));
                continue;
            }
            if keyword == "NOISE_DEFAULT" {
                if default_noise.is_some() {
                    return Err(Error::parse(line, "duplicate NOISE_DEFAULT"));
                }
                match toks.next().map(str::to_ascii_uppercase).as_deref() {
                    Some("ROT") => {}
                    other => return Err(Error::parse(line, format!("expected ROT after NOISE_DEFAULT, got {other:?}"))),
                }
                let px = num(toks.next(), line, "p_x")?;
                let py = num(toks.next(), line, "p_y")?;
                let pz = num(toks.next(), line, "p_z")?;
                no_more(toks, line)?;
                default_noise = Some(at_line(LocalPauliNoise::new(px, py, pz), line)?);
                continue;
            }
            let b = builder
                .as_mut()
                .ok_or_else(|| Error::parse(line, "QUBITS must precede circuit operations"))?;
            match keyword.as_str() {
                "CLIFF" => {
                    let kind: GateKind = at_line(num::<String>(toks.next(), line, "gate")?.parse(), line)?;
                    let qubits = (0..kind.arity())
                        .map(|_| num(toks.next(), line, "qubit"))
                        .collect::<Result<Vec<usize>>>()?;
                    no_more(toks, line)?;
                    let gate = at_line(CliffordGate::new(kind, &qubits), line)?;
                    at_line(b.gate(gate), line)?;
                }
                "RZ" => {
                    let q: usize = num(toks.next(), line, "qubit")?;
                    let name: String = num(toks.next(), line, "parameter name")?;
                    let rest: Vec<&str> = toks.collect();
                    let noise = match rest.as_slice() {
                        [] => None,
                        [px, py, pz] => {
                            let p = |t: &str, w| num::<f64>(Some(t), line, w);
                            Some(at_line(LocalPauliNoise::new(p(px, "p_x")?, p(py, "p_y")?, p(pz, "p_z")?), line)?)
                        }
                        _ => return Err(Error::parse(line, "RZ takes a qubit, a name and optionally three probabilities")),
                    };
                    explicit.push(noise);
                    at_line(b.rz_named(q, &name, LocalPauliNoise::noiseless()), line)?;
                }
                "CHANNEL" => {
                    let kind = num::<String>(toks.next(), line, "channel kind")?.to_ascii_uppercase();
                    let map = match kind.as_str() {
                        "DEPOL" => {
                            let q = num(toks.next(), line, "qubit")?;
                            let eta = num(toks.next(), line, "rate")?;
                            at_line(ChannelEigenvalueMap::depolarizing(q, eta), line)?
                        }
                        "DEPHASE" => {
                            let q = num(toks.next(), line, "qubit")?;
                            let p = num(toks.next(), line, "probability")?;
                            at_line(ChannelEigenvalueMap::dephasing(q, p), line)?
                        }
                        "PAULI" => {
                            let q = num(toks.next(), line, "qubit")?;
                            let mut eig = [1.0; 4];
                            for e in &mut eig[1..] {
                                *e = num(toks.next(), line, "eigenvalue")?;
                            }
                            ChannelEigenvalueMap::new(vec![at_line(ChannelFactor::single(q, eig), line)?])
                        }
                        "PAULI2" => {
                            let a = num(toks.next(), line, "qubit")?;
                            let bq = num(toks.next(), line, "qubit")?;
                            let mut eig = [0.0; 16];
                            for e in &mut eig {
                                *e = num(toks.next(), line, "eigenvalue")?;
                            }
                            ChannelEigenvalueMap::new(vec![at_line(ChannelFactor::pair(a, bq, eig), line)?])
                        }
                        other => return Err(Error::parse(line, format!("unknown channel kind {other:?}"))),
                    };
                    no_more(toks, line)?;
                    at_line(b.channel(map), line)?;
                }
                other => return Err(Error::parse(line, format!("unknown keyword {other:?}"))),
            }
        }

        let mut builder = builder.ok_or_else(|| Error::parse(1, "missing QUBITS line"))?;
        let fallback = default_noise.unwrap_or_default();
        for (step, noise) in builder.steps.iter_mut().zip(explicit) {
            step.rotation.noise = noise.unwrap_or(fallback);
        }
        builder.build()
    }
}

fn write_channel(out: &mut String, map: &ChannelEigenvalueMap) {
    for f in map.factors() {
        match f {
            ChannelFactor::Single { qubit, eig } => {
                let _ = writeln!(out, "CHANNEL PAULI {qubit} {} {} {}", eig[1], eig[2], eig[3]);
            }
            ChannelFactor::Pair { qubits: (a, b), eig } => {
                let vals: Vec<String> = eig.iter().map(f64::to_string).collect();
                let _ = writeln!(out, "CHANNEL PAULI2 {a} {b} {}", vals.join(" "));
            }
        }
    }
}

fn write_segment(out: &mut String, seg: &Segment) {
    let before = seg.position == ChannelPosition::Before;
    if let (Some(ch), true) = (&seg.channel, before) {
        write_channel(out, ch);
    }
    for g in seg.layer.gates() {
        let _ = writeln!(out, "CLIFF {g}");
    }
    if let (Some(ch), false) = (&seg.channel, before) {
        write_channel(out, ch);
    }
}

impl NoisyCircuit {
    /// Serializes to the circuit file format; `parse(to_text())` reproduces
    /// the circuit exactly.
    pub fn to_text(&self) -> String {
        let mut out = String::new();
        let _ = writeln!(out, "QUBITS {}", self.n);
        write_segment(&mut out, &self.prologue);
        for s in &self.steps {
            let r = &s.rotation;
            let name = &self.slot_names[r.slot];
            if r.noise.is_noiseless() {
                let _ = writeln!(out, "RZ {} {name}", r.qubit);
            } else {
                let (px, py, pz) = r.noise.probabilities();
                let _ = writeln!(out, "RZ {} {name} {px} {py} {pz}", r.qubit);
            }
            write_segment(&mut out, &s.segment);
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    const SAMPLE: &str = "\
QUBITS 10
NOISE_DEFAULT ROT 0.01 0.01 0.01     # p_x p_y p_z applied to every rotation
CLIFF H 0
RZ 0 theta0                          # qubit, parameter name
CHANNEL DEPOL 1 0.02                 # single-qubit depolarizing factor
CLIFF CX 0 1
RZ 1 theta0                          # shared slot example
";

    #[test]
    fn parses_reference_example() {
        let c: NoisyCircuit = SAMPLE.parse().unwrap();
        assert_eq!(c.num_qubits(), 10);
        assert_eq!(c.num_rotations(), 2);
        assert_eq!(c.num_params(), 1);
        assert_eq!(c.prologue().layer.gates().len(), 1);
        let s0 = &c.steps()[0].segment;
        assert_eq!(s0.position, ChannelPosition::Before);
        assert_eq!(s0.layer.gates()[0].to_string(), "CX 0 1");
        let (qx, _, _) = c.steps()[1].rotation.noise.eigenvalues();
        assert!((qx - 0.96).abs() < 1e-15);
        assert!(!c.validate().unwrap().injective);
    }

    #[test]
    fn default_noise_applies_to_earlier_rotations_too() {
        let c: NoisyCircuit = "QUBITS 1\nRZ 0 a\nRZ 0 b 0 0 0.2\nNOISE_DEFAULT ROT 0 0 0.1\n"
            .parse()
            .unwrap();
        assert_eq!(c.steps()[0].rotation.noise.probabilities(), (0.0, 0.0, 0.1));
        assert_eq!(c.steps()[1].rotation.noise.probabilities(), (0.0, 0.0, 0.2));
    }

    #[test]
    fn two_qubit_factor() {
        let vals = (0..16).map(|i| if i == 0 { "1".to_string() } else { "0.9".into() });
        let text = format!("QUBITS 2\nCLIFF H 0\nCHANNEL PAULI2 0 1 {}\n", vals.collect::<Vec<_>>().join(" "));
        let c: NoisyCircuit = text.parse().unwrap();
        assert_eq!(c.prologue().position, ChannelPosition::After);
    }

    #[test]
    fn errors_carry_line_numbers() {
        let cases = [
            ("RZ 0 a\n", 1),
            ("QUBITS 2\nRZ 3 a\n", 2),
            ("QUBITS 2\n\nCLIFF T 0\n", 3),
            ("QUBITS 2\nCLIFF CX 0\n", 2),
            ("QUBITS 2\nNOISE_DEFAULT ROT 0.6 0.6 0\n", 2),
            ("QUBITS 2\nCHANNEL PAULI 0 1.5 1 1\n", 2),
            ("QUBITS 2\nCHANNEL FOO 0\n", 2),
            ("QUBITS 2\nCLIFF H 0 1\n", 2),
            ("QUBITS 2\nRZ 0 a 0.1\n", 2),
            ("QUBITS 1\nQUBITS 1\n", 2),
            ("", 1),
        ];
        for (text, want) in cases {
            match text.parse::<NoisyCircuit>() {
                Err(Error::Parse { line, .. }) => assert_eq!(line, want, "{text:?}"),
                other => panic!("{text:?}: expected parse error, got {other:?}"),
            }
        }
    }

    #[test]
    fn text_round_trip() {
        let mut text = String::from(SAMPLE);
        text.push_str("CHANNEL PAULI 3 0.5 -0.25 1\nCLIFF SWAP 2 3\nRZ 4 phi 0.1 0 0.05\nCLIFF SDG 4\n");
        let c: NoisyCircuit = text.parse().unwrap();
        let again: NoisyCircuit = c.to_text().parse().unwrap();
        assert_eq!(again, c);
        assert_eq!(again.to_text(), c.to_text());
    }
}
