//! Primitive Clifford gates and their Pauli conjugation lookup tables.
//!
//! Tables are generated once from the explicit gate unitaries: for every
//! local Pauli `P` the conjugate `U^dag P U` (adjoint) and `U P U^dag`
//! (forward) are expanded in the Pauli basis and must come out as a single
//! Pauli with coefficient ±1.

use std::fmt;
use std::str::FromStr;
use std::sync::LazyLock;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::pauli::{LocalPauli, PauliString};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum GateKind {
    H,
    S,
    Sdg,
    X,
    Y,
    Z,
    CX,
    CZ,
    Swap,
}

impl GateKind {
    pub const ALL: [GateKind; 9] = [
        GateKind::H,
        GateKind::S,
        GateKind::Sdg,
        GateKind::X,
        GateKind::Y,
        GateKind::Z,
        GateKind::CX,
        GateKind::CZ,
        GateKind::Swap,
    ];

    pub fn arity(self) -> usize {
        match self {
            GateKind::CX | GateKind::CZ | GateKind::Swap => 2,
            _ => 1,
        }
    }

    pub fn mnemonic(self) -> &'static str {
        match self {
            GateKind::H => "H",
            GateKind::S => "S",
            GateKind::Sdg => "SDG",
            GateKind::X => "X",
            GateKind::Y => "Y",
            GateKind::Z => "Z",
            GateKind::CX => "CX",
            GateKind::CZ => "CZ",
            GateKind::Swap => "SWAP",
        }
    }

    fn index(self) -> usize {
        self as usize
    }

    /// Unitary in the computational basis; for two-qubit kinds the first
    /// target is the high-order bit (CX control = first target).
    fn unitary(self) -> Matrix {
        let c = |re: f64, im: f64| Complex64::new(re, im);
        let r = std::f64::consts::FRAC_1_SQRT_2;
        let o = c(0.0, 0.0);
        let l = c(1.0, 0.0);
        let rows: Vec<Vec<Complex64>> = match self {
            GateKind::H => vec![vec![c(r, 0.0), c(r, 0.0)], vec![c(r, 0.0), c(-r, 0.0)]],
            GateKind::S => vec![vec![l, o], vec![o, c(0.0, 1.0)]],
            GateKind::Sdg => vec![vec![l, o], vec![o, c(0.0, -1.0)]],
            GateKind::X => pauli_matrix(LocalPauli::X).rows(),
            GateKind::Y => pauli_matrix(LocalPauli::Y).rows(),
            GateKind::Z => pauli_matrix(LocalPauli::Z).rows(),
            GateKind::CX => vec![
                vec![l, o, o, o],
                vec![o, l, o, o],
                vec![o, o, o, l],
                vec![o, o, l, o],
            ],
            GateKind::CZ => vec![
                vec![l, o, o, o],
                vec![o, l, o, o],
                vec![o, o, l, o],
                vec![o, o, o, c(-1.0, 0.0)],
            ],
            GateKind::Swap => vec![
                vec![l, o, o, o],
                vec![o, o, l, o],
                vec![o, l, o, o],
                vec![o, o, o, l],
            ],
        };
        Matrix::from_rows(rows)
    }
}

impl FromStr for GateKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        GateKind::ALL
            .into_iter()
            .find(|k| k.mnemonic().eq_ignore_ascii_case(s))
            .ok_or_else(|| Error::parse(0, format!("unknown Clifford gate {s:?}")))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct CliffordGate {
    kind: GateKind,
    targets: [usize; 2],
}

impl CliffordGate {
    pub fn single(kind: GateKind, q: usize) -> Result<Self> {
        if kind.arity() != 1 {
            return Err(Error::InvalidArgument(format!(
                "{} takes two qubits",
                kind.mnemonic()
            )));
        }
        Ok(CliffordGate {
            kind,
            targets: [q, q],
        })
    }

    pub fn two(kind: GateKind, a: usize, b: usize) -> Result<Self> {
        if kind.arity() != 2 {
            return Err(Error::InvalidArgument(format!(
                "{} takes one qubit",
                kind.mnemonic()
            )));
        }
        if a == b {
            return Err(Error::RepeatedQubit(a));
        }
        Ok(CliffordGate {
            kind,
            targets: [a, b],
        })
    }

    pub fn new(kind: GateKind, qubits: &[usize]) -> Result<Self> {
        match (kind.arity(), qubits) {
            (1, [q]) => Self::single(kind, *q),
            (2, [a, b]) => Self::two(kind, *a, *b),
            _ => Err(Error::InvalidArgument(format!(
                "{} expects {} qubit(s), got {}",
                kind.mnemonic(),
                kind.arity(),
                qubits.len()
            ))),
        }
    }

    pub fn h(q: usize) -> Self {
        CliffordGate {
            kind: GateKind::H,
            targets: [q, q],
        }
    }

    pub fn x(q: usize) -> Self {
        CliffordGate {
            kind: GateKind::X,
            targets: [q, q],
        }
    }

    pub fn cx(control: usize, target: usize) -> Result<Self> {
        Self::two(GateKind::CX, control, target)
    }

    pub fn kind(&self) -> GateKind {
        self.kind
    }

    pub fn qubits(&self) -> &[usize] {
        &self.targets[..self.kind.arity()]
    }

    pub fn max_qubit(&self) -> usize {
        self.targets[0].max(self.targets[1])
    }

    #[inline]
    fn apply(&self, p: &mut PauliString, table: &Table) {
        match self.kind.arity() {
            1 => {
                let q = self.targets[0];
                let (img, neg) = table[p.get(q).code()];
                p.set(q, LocalPauli::from_code(img as usize));
                if neg {
                    p.flip_sign();
                }
            }
            _ => {
                let [a, b] = self.targets;
                let idx = 4 * p.get(a).code() + p.get(b).code();
                let (img, neg) = table[idx];
                p.set(a, LocalPauli::from_code((img >> 2) as usize));
                p.set(b, LocalPauli::from_code((img & 3) as usize));
                if neg {
                    p.flip_sign();
                }
            }
        }
    }
}

impl fmt::Display for CliffordGate {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.kind.mnemonic())?;
        for q in self.qubits() {
            write!(f, " {q}")?;
        }
        Ok(())
    }
}

/// Ordered list of primitive gates, applied first to last in time.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct CliffordLayer {
    gates: Vec<CliffordGate>,
}

impl CliffordLayer {
    pub fn new(gates: Vec<CliffordGate>) -> Self {
        CliffordLayer { gates }
    }

    pub fn gates(&self) -> &[CliffordGate] {
        &self.gates
    }

    pub fn push(&mut self, gate: CliffordGate) {
        self.gates.push(gate);
    }

    pub fn is_empty(&self) -> bool {
        self.gates.is_empty()
    }

    pub fn max_qubit(&self) -> Option<usize> {
        self.gates.iter().map(CliffordGate::max_qubit).max()
    }

    /// `C^dag P C` for the whole layer: gates are undone last to first.
    pub fn conjugate_adjoint(&self, p: &mut PauliString) {
        let t = tables();
        for g in self.gates.iter().rev() {
            g.apply(p, &t.adjoint[g.kind.index()]);
        }
    }

    /// `C P C^dag`, the Schrödinger-picture image of `P`.
    pub fn conjugate(&self, p: &mut PauliString) {
        let t = tables();
        for g in &self.gates {
            g.apply(p, &t.forward[g.kind.index()]);
        }
    }
}

/// Entry `i` holds the image label and whether the sign flips. Two-qubit
/// labels are `4 * first + second`.
pub type Table = Vec<(u8, bool)>;

#[derive(Debug, Clone, PartialEq)]
pub struct ConjugationTables {
    pub adjoint: Vec<Table>,
    pub forward: Vec<Table>,
}

impl ConjugationTables {
    pub fn adjoint_table(&self, kind: GateKind) -> &Table {
        &self.adjoint[kind.index()]
    }

    pub fn forward_table(&self, kind: GateKind) -> &Table {
        &self.forward[kind.index()]
    }
}

static TABLES: LazyLock<ConjugationTables> = LazyLock::new(build_lookup_tables);

pub fn tables() -> &'static ConjugationTables {
    &TABLES
}

/// Computes every table entry by explicit matrix conjugation.
///
/// Panics if a gate does not map Paulis to signed Paulis, which cannot
/// happen for the fixed Clifford alphabet.
pub fn build_lookup_tables() -> ConjugationTables {
    let mut adjoint = Vec::with_capacity(GateKind::ALL.len());
    let mut forward = Vec::with_capacity(GateKind::ALL.len());
    for kind in GateKind::ALL {
        let u = kind.unitary();
        let ud = u.dagger();
        let labels = 4usize.pow(kind.arity() as u32);
        let basis: Vec<Matrix> = (0..labels).map(|l| pauli_label_matrix(l, kind.arity())).collect();
        let decompose = |m: &Matrix| -> (u8, bool) {
            let dim = m.dim as f64;
            for (label, q) in basis.iter().enumerate() {
                let c = q.mul(m).trace() / dim;
                if (c.re.abs() - 1.0).abs() < 1e-12 && c.im.abs() < 1e-12 {
                    return (label as u8, c.re < 0.0);
                }
            }
            panic!("{} does not conjugate Paulis to Paulis", kind.mnemonic());
        };
        adjoint.push(basis.iter().map(|p| decompose(&ud.mul(p).mul(&u))).collect());
        forward.push(basis.iter().map(|p| decompose(&u.mul(p).mul(&ud))).collect());
    }
    ConjugationTables { adjoint, forward }
}

#[derive(Debug, Clone, PartialEq)]
pub(crate) struct Matrix {
    pub(crate) dim: usize,
    data: Vec<Complex64>,
}

impl Matrix {
    fn from_rows(rows: Vec<Vec<Complex64>>) -> Self {
        let dim = rows.len();
        Matrix {
            dim,
            data: rows.into_iter().flatten().collect(),
        }
    }

    fn rows(&self) -> Vec<Vec<Complex64>> {
        self.data.chunks(self.dim).map(<[_]>::to_vec).collect()
    }

    pub(crate) fn at(&self, r: usize, c: usize) -> Complex64 {
        self.data[r * self.dim + c]
    }

    pub(crate) fn mul(&self, other: &Matrix) -> Matrix {
        let d = self.dim;
        let mut data = vec![Complex64::new(0.0, 0.0); d * d];
        for r in 0..d {
            for k in 0..d {
                let a = self.at(r, k);
                for c in 0..d {
                    data[r * d + c] += a * other.at(k, c);
                }
            }
        }
        Matrix { dim: d, data }
    }

    pub(crate) fn dagger(&self) -> Matrix {
        let d = self.dim;
        let mut data = vec![Complex64::new(0.0, 0.0); d * d];
        for r in 0..d {
            for c in 0..d {
                data[c * d + r] = self.at(r, c).conj();
            }
        }
        Matrix { dim: d, data }
    }

    pub(crate) fn trace(&self) -> Complex64 {
        (0..self.dim).map(|i| self.at(i, i)).sum()
    }

    pub(crate) fn kron(&self, other: &Matrix) -> Matrix {
        let (a, b) = (self.dim, other.dim);
        let d = a * b;
        let mut data = vec![Complex64::new(0.0, 0.0); d * d];
        for r1 in 0..a {
            for c1 in 0..a {
                for r2 in 0..b {
                    for c2 in 0..b {
                        data[(r1 * b + r2) * d + c1 * b + c2] = self.at(r1, c1) * other.at(r2, c2);
                    }
                }
            }
        }
        Matrix { dim: d, data }
    }
}

pub(crate) fn pauli_matrix(p: LocalPauli) -> Matrix {
    let c = |re: f64, im: f64| Complex64::new(re, im);
    let rows = match p {
        LocalPauli::I => vec![vec![c(1.0, 0.0), c(0.0, 0.0)], vec![c(0.0, 0.0), c(1.0, 0.0)]],
        LocalPauli::X => vec![vec![c(0.0, 0.0), c(1.0, 0.0)], vec![c(1.0, 0.0), c(0.0, 0.0)]],
        LocalPauli::Y => vec![vec![c(0.0, 0.0), c(0.0, -1.0)], vec![c(0.0, 1.0), c(0.0, 0.0)]],
        LocalPauli::Z => vec![vec![c(1.0, 0.0), c(0.0, 0.0)], vec![c(0.0, 0.0), c(-1.0, 0.0)]],
    };
    Matrix::from_rows(rows)
}

fn pauli_label_matrix(label: usize, arity: usize) -> Matrix {
    match arity {
        1 => pauli_matrix(LocalPauli::from_code(label)),
        _ => pauli_matrix(LocalPauli::from_code(label >> 2))
            .kron(&pauli_matrix(LocalPauli::from_code(label & 3))),
    }
}
