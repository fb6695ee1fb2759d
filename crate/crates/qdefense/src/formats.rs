//! Interchange formats: MDP and Θ documents (JSON), training traces and the
//! other experiment tables (CSV or JSON), and the plain-text state dump.

use std::fmt::Write as _;

use qdefense_core::mdp::{Mdp, MdpError};
use qdefense_core::qrl::TrainingTrace;
use qdefense_core::qsim::{Complex64, QsimError, StateVector};
use qdefense_core::vqc::{CircuitSpec, Theta, ThetaStack, VqcError};
use serde::{Deserialize, Serialize};

#[derive(Debug, thiserror::Error)]
pub enum FormatError {
    #[error("invalid JSON: {0}")]
    Json(#[from] serde_json::Error),
    #[error(transparent)]
    Mdp(#[from] MdpError),
    #[error(transparent)]
    Circuit(#[from] VqcError),
    #[error(transparent)]
    State(#[from] QsimError),
    #[error("{0}")]
    Shape(String),
    #[error("line {line}: {message}")]
    Line { line: usize, message: String },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, clap::ValueEnum)]
pub enum Format {
    #[default]
    Csv,
    Json,
}

/// One `(s, a) → s'` entry of an [`MdpDocument`].
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TransitionEntry {
    pub s: usize,
    pub a: usize,
    #[serde(rename = "s'")]
    pub next: usize,
    pub p: f64,
    pub r: f64,
}

/// `{states, actions, transitions: [{s, a, s', p, r}], gamma, terminal}`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MdpDocument {
    pub states: usize,
    pub actions: usize,
    pub transitions: Vec<TransitionEntry>,
    pub gamma: f64,
    #[serde(default)]
    pub terminal: Vec<usize>,
}

impl MdpDocument {
    pub fn from_mdp(mdp: &Mdp) -> Self {
        Self {
            states: mdp.num_states(),
            actions: mdp.num_actions(),
            transitions: mdp
                .transitions()
                .map(|(s, a, o)| TransitionEntry {
                    s,
                    a,
                    next: o.next,
                    p: o.probability,
                    r: o.reward,
                })
                .collect(),
            gamma: mdp.discount(),
            terminal: mdp.terminal_states().collect(),
        }
    }

    /// Builds and validates the MDP; probability groups must sum to 1 within 1e-9.
    pub fn to_mdp(&self) -> Result<Mdp, MdpError> {
        let mut b = Mdp::builder(self.states, self.actions, self.gamma);
        for t in &self.transitions {
            b = b.transition(t.s, t.a, t.next, t.p, t.r);
        }
        for &s in &self.terminal {
            b = b.terminal(s);
        }
        b.build()
    }
}

pub fn read_mdp_json(text: &str) -> Result<Mdp, FormatError> {
    let doc: MdpDocument = serde_json::from_str(text)?;
    Ok(doc.to_mdp()?)
}

pub fn write_mdp_json(mdp: &Mdp) -> Vec<u8> {
    json_bytes(&MdpDocument::from_mdp(mdp))
}

/// `{num_qubits, num_layers, angles: [[x, y, z], ...]}`, rows layer by layer.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ThetaDocument {
    pub num_qubits: usize,
    pub num_layers: usize,
    pub angles: Vec<[f64; 3]>,
}

impl ThetaDocument {
    pub fn from_stack(stack: &ThetaStack) -> Self {
        let layers = stack.layers();
        Self {
            num_qubits: layers.first().map_or(0, Theta::num_qubits),
            num_layers: layers.len(),
            angles: layers.iter().flat_map(|t| t.rows().iter().copied()).collect(),
        }
    }

    pub fn to_stack(&self) -> Result<(CircuitSpec, ThetaStack), FormatError> {
        if self.angles.len() != self.num_qubits * self.num_layers {
            return Err(FormatError::Shape(format!(
                "{} angle rows for {} qubits x {} layers",
                self.angles.len(),
                self.num_qubits,
                self.num_layers
            )));
        }
        let spec = if self.num_qubits == 1 {
            CircuitSpec::new(1, self.num_layers, false)?
        } else {
            CircuitSpec::layered(self.num_qubits, self.num_layers)?
        };
        let stack = ThetaStack::new(
            self.angles
                .chunks(self.num_qubits)
                .map(|rows| Theta::new(rows.to_vec()))
                .collect(),
        );
        stack.validate(&spec)?;
        Ok((spec, stack))
    }
}

pub fn read_theta_json(text: &str) -> Result<(CircuitSpec, ThetaStack), FormatError> {
    serde_json::from_str::<ThetaDocument>(text)?.to_stack()
}

pub fn write_theta_json(stack: &ThetaStack) -> Vec<u8> {
    json_bytes(&ThetaDocument::from_stack(stack))
}

pub(crate) fn json_bytes<T: Serialize + ?Sized>(value: &T) -> Vec<u8> {
    let mut out = serde_json::to_vec_pretty(value).expect("plain data serializes");
    out.push(b'\n');
    out
}

/// Shortest representation that reads back to the same `f64`.
pub fn num(x: f64) -> String {
    format!("{x:?}")
}

/// A header plus string rows, written as LF-terminated CSV.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct Table {
    pub header: Vec<String>,
    pub rows: Vec<Vec<String>>,
}

impl Table {
    pub fn new<S: Into<String>>(header: impl IntoIterator<Item = S>) -> Self {
        Self {
            header: header.into_iter().map(Into::into).collect(),
            rows: Vec::new(),
        }
    }

    pub fn push(&mut self, row: Vec<String>) {
        debug_assert_eq!(row.len(), self.header.len());
        self.rows.push(row);
    }

    pub fn to_csv(&self) -> Vec<u8> {
        let mut w = csv::WriterBuilder::new()
            .terminator(csv::Terminator::Any(b'\n'))
            .from_writer(Vec::new());
        w.write_record(&self.header).expect("in-memory write");
        for row in &self.rows {
            w.write_record(row).expect("in-memory write");
        }
        w.into_inner().expect("in-memory flush")
    }
}

#[derive(Serialize)]
struct TraceRow<'a> {
    epoch: usize,
    state: usize,
    action: usize,
    reward: f64,
    distance: Option<f64>,
    v0: f64,
    probabilities: &'a [f64],
}

/// `epoch,state,action,reward,distance,v0,p_action0,p_action1[,...]`; the
/// distance cell is empty when the environment has no such observable.
pub fn trace_table(trace: &TrainingTrace, num_actions: usize) -> Table {
    let mut table = Table::new(
        ["epoch", "state", "action", "reward", "distance", "v0"]
            .into_iter()
            .map(String::from)
            .chain((0..num_actions).map(|a| format!("p_action{a}"))),
    );
    for r in &trace.records {
        let mut row = vec![
            r.epoch.to_string(),
            r.state.to_string(),
            r.action.to_string(),
            num(r.reward),
            r.distance.map(num).unwrap_or_default(),
            num(r.v0),
        ];
        row.extend(r.probabilities.iter().map(|&p| num(p)));
        table.push(row);
    }
    table
}

pub fn write_trace(trace: &TrainingTrace, num_actions: usize, format: Format) -> Vec<u8> {
    match format {
        Format::Csv => trace_table(trace, num_actions).to_csv(),
        Format::Json => json_bytes(
            &trace
                .records
                .iter()
                .map(|r| TraceRow {
                    epoch: r.epoch,
                    state: r.state,
                    action: r.action,
                    reward: r.reward,
                    distance: r.distance,
                    v0: r.v0,
                    probabilities: &r.probabilities,
                })
                .collect::<Vec<_>>(),
        ),
    }
}

/// One `index real imag` line per amplitude, 17 significant digits.
pub fn state_dump(state: &StateVector) -> String {
    let mut out = String::new();
    for (i, a) in state.amplitudes().iter().enumerate() {
        writeln!(out, "{i} {:.16e} {:.16e}", a.re, a.im).expect("string write");
    }
    out
}

pub fn parse_state_dump(text: &str) -> Result<StateVector, FormatError> {
    let mut amplitudes = Vec::new();
    for (n, line) in text.lines().enumerate().filter(|(_, l)| !l.trim().is_empty()) {
        let bad = |message: &str| FormatError::Line {
            line: n + 1,
            message: message.to_string(),
        };
        let fields: Vec<&str> = line.split_whitespace().collect();
        let [index, re, im] = fields[..] else {
            return Err(bad("expected `index real imag`"));
        };
        if index.parse::<usize>().ok() != Some(amplitudes.len()) {
            return Err(bad("indices must count up from 0"));
        }
        let re: f64 = re.parse().map_err(|_| bad("real part is not a number"))?;
        let im: f64 = im.parse().map_err(|_| bad("imaginary part is not a number"))?;
        amplitudes.push(Complex64::new(re, im));
    }
    Ok(StateVector::from_amplitudes(amplitudes)?)
}
