//! Subprocess evaluator protocol: line-delimited JSON over stdin/stdout.
//!
//! This lets any external program (a real generation + reward pipeline in
//! any language) serve as the black box. The parent speaks first:
//!
//! ```text
//! parent -> child   {"type":"hello","version":"trs/1","dim":M}
//! child  -> parent  {"type":"hello","version":"trs/1"}
//! parent -> child   {"type":"eval","id":0,"batch":[[f64; M], ...]}
//! child  -> parent  {"type":"result","id":0,"rewards":[f64, ...]}
//! ```
//!
//! One request is in flight at a time; ids increase strictly from 0. Floats
//! travel as shortest round-trip decimals, so rewards cross the boundary
//! bit-exactly and an external evaluator is indistinguishable from an
//! in-process objective.

use std::io::{BufRead, BufReader, Write};
use std::path::Path;
use std::process::{Child, ChildStdin, Command, Stdio};
use std::sync::mpsc;
use std::time::Duration;

use serde::{Deserialize, Serialize};

use crate::error::{EvalError, ProtocolError};
use crate::noise::NoiseVector;
use crate::objectives::BatchObjective;

pub const PROTOCOL_VERSION: &str = "trs/1";

/// Messages sent by the optimizer side.
#[derive(Debug, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "snake_case")]
pub enum ParentMessage {
    Hello { version: String, dim: usize },
    Eval { id: u64, batch: Vec<Vec<f64>> },
}

/// Messages sent by the evaluator side.
#[derive(Debug, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "snake_case")]
pub enum ChildMessage {
    Hello { version: String },
    Result { id: u64, rewards: Vec<f64> },
}

#[derive(Clone, Copy, Debug)]
pub struct EvaluatorOptions {
    pub handshake_timeout: Duration,
    pub batch_timeout: Duration,
}

impl Default for EvaluatorOptions {
    fn default() -> Self {
        Self {
            handshake_timeout: Duration::from_secs(30),
            batch_timeout: Duration::from_secs(600),
        }
    }
}

/// A spawned external evaluator, handshake completed.
///
/// The handle owns the child exclusively; it is killed and reaped on drop.
pub struct EvaluatorHandle {
    child: Child,
    stdin: ChildStdin,
    lines: mpsc::Receiver<std::io::Result<String>>,
    next_id: u64,
    dim: usize,
    options: EvaluatorOptions,
    evaluations: usize,
}

impl EvaluatorHandle {
    /// Spawns `command args...` and performs the hello exchange.
    pub fn spawn(
        command: &str,
        args: &[String],
        dim: usize,
        options: EvaluatorOptions,
    ) -> Result<Self, ProtocolError> {
        let mut child = Command::new(command)
            .args(args)
            .stdin(Stdio::piped())
            .stdout(Stdio::piped())
            .spawn()
            .map_err(|source| ProtocolError::Spawn {
                command: command.to_string(),
                source,
            })?;
        let stdin = child.stdin.take().expect("stdin was piped");
        let stdout = child.stdout.take().expect("stdout was piped");

        // a reader thread decouples blocking reads from our timeouts; it
        // ends when the child closes its stdout
        let (tx, rx) = mpsc::channel();
        std::thread::spawn(move || {
            let mut reader = BufReader::new(stdout);
            loop {
                let mut line = String::new();
                match reader.read_line(&mut line) {
                    Ok(0) => break,
                    Ok(_) => {
                        if tx.send(Ok(line)).is_err() {
                            break;
                        }
                    }
                    Err(err) => {
                        let _ = tx.send(Err(err));
                        break;
                    }
                }
            }
        });

        let mut handle = Self {
            child,
            stdin,
            lines: rx,
            next_id: 0,
            dim,
            options,
            evaluations: 0,
        };
        handle.handshake()?;
        Ok(handle)
    }

    fn handshake(&mut self) -> Result<(), ProtocolError> {
        self.send(&ParentMessage::Hello {
            version: PROTOCOL_VERSION.to_string(),
            dim: self.dim,
        })?;
        let timeout = self.options.handshake_timeout;
        match self.receive(timeout, true)? {
            ChildMessage::Hello { version } => {
                if version != PROTOCOL_VERSION {
                    return Err(ProtocolError::VersionMismatch {
                        expected: PROTOCOL_VERSION.to_string(),
                        got: version,
                    });
                }
                Ok(())
            }
            other => Err(ProtocolError::UnexpectedMessage {
                expected: "hello",
                got: format!("{other:?}"),
            }),
        }
    }

    fn send(&mut self, message: &ParentMessage) -> Result<(), ProtocolError> {
        let mut line = serde_json::to_string(message)
            .map_err(|e| ProtocolError::Parse(e.to_string()))?;
        line.push('\n');
        self.stdin.write_all(line.as_bytes())?;
        self.stdin.flush()?;
        Ok(())
    }

    fn receive(
        &mut self,
        timeout: Duration,
        handshaking: bool,
    ) -> Result<ChildMessage, ProtocolError> {
        let line = match self.lines.recv_timeout(timeout) {
            Ok(Ok(line)) => line,
            Ok(Err(err)) => return Err(ProtocolError::Io(err)),
            Err(mpsc::RecvTimeoutError::Timeout) => {
                return Err(if handshaking {
                    ProtocolError::HandshakeTimeout(timeout)
                } else {
                    ProtocolError::BatchTimeout(timeout)
                });
            }
            Err(mpsc::RecvTimeoutError::Disconnected) => {
                return Err(ProtocolError::ChildExited);
            }
        };
        serde_json::from_str(&line).map_err(|_| ProtocolError::Parse(line.trim().to_string()))
    }

    /// Sends one batch and blocks for its matching result.
    pub fn evaluate_batch(&mut self, batch: &[NoiseVector]) -> Result<Vec<f64>, ProtocolError> {
        if batch.is_empty() {
            return Err(ProtocolError::EmptyBatch);
        }
        let id = self.next_id;
        self.next_id += 1;
        self.send(&ParentMessage::Eval {
            id,
            batch: batch.iter().map(|c| c.values().to_vec()).collect(),
        })?;
        let timeout = self.options.batch_timeout;
        match self.receive(timeout, false)? {
            ChildMessage::Result { id: got, rewards } => {
                if got != id {
                    return Err(ProtocolError::IdMismatch { expected: id, got });
                }
                if rewards.len() != batch.len() {
                    return Err(ProtocolError::LengthMismatch {
                        expected: batch.len(),
                        got: rewards.len(),
                    });
                }
                if let Some(position) = rewards.iter().position(|r| !r.is_finite()) {
                    return Err(ProtocolError::NonFiniteReward { position });
                }
                self.evaluations += batch.len();
                Ok(rewards)
            }
            other => Err(ProtocolError::UnexpectedMessage {
                expected: "result",
                got: format!("{other:?}"),
            }),
        }
    }
}

impl std::fmt::Debug for EvaluatorHandle {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("EvaluatorHandle")
            .field("dim", &self.dim)
            .field("next_id", &self.next_id)
            .field("evaluations", &self.evaluations)
            .finish()
    }
}

impl BatchObjective for EvaluatorHandle {
    fn dim(&self) -> usize {
        self.dim
    }

    fn evaluate(&mut self, batch: &[NoiseVector]) -> Result<Vec<f64>, EvalError> {
        Ok(self.evaluate_batch(batch)?)
    }

    fn eval_count(&self) -> usize {
        self.evaluations
    }
}

impl Drop for EvaluatorHandle {
    fn drop(&mut self) {
        let _ = self.child.kill();
        let _ = self.child.wait();
    }
}

/// Serves an object behind the evaluator protocol on the given streams.
///
/// This is the child-side loop used by the reference mock evaluator; the
/// objective is constructed lazily from the hello's dimension.
pub fn serve<R, W, F, O>(
    input: R,
    mut output: W,
    make: F,
) -> Result<(), ProtocolError>
where
    R: std::io::Read,
    W: Write,
    F: FnOnce(usize) -> Result<O, ProtocolError>,
    O: BatchObjective,
{
    let reader = BufReader::new(input);
    let mut lines = reader.lines();

    let first = match lines.next() {
        Some(line) => line?,
        None => return Err(ProtocolError::ChildExited),
    };
    let hello: ParentMessage =
        serde_json::from_str(&first).map_err(|_| ProtocolError::Parse(first.trim().into()))?;
    let dim = match hello {
        ParentMessage::Hello { version, dim } => {
            if version != PROTOCOL_VERSION {
                return Err(ProtocolError::VersionMismatch {
                    expected: PROTOCOL_VERSION.to_string(),
                    got: version,
                });
            }
            dim
        }
        other => {
            return Err(ProtocolError::UnexpectedMessage {
                expected: "hello",
                got: format!("{other:?}"),
            })
        }
    };
    let mut objective = make(dim)?;
    write_message(
        &mut output,
        &ChildMessage::Hello {
            version: PROTOCOL_VERSION.to_string(),
        },
    )?;

    for line in lines {
        let line = line?;
        if line.trim().is_empty() {
            continue;
        }
        let message: ParentMessage =
            serde_json::from_str(&line).map_err(|_| ProtocolError::Parse(line.trim().into()))?;
        match message {
            ParentMessage::Eval { id, batch } => {
                let candidates: Result<Vec<NoiseVector>, _> =
                    batch.into_iter().map(NoiseVector::new).collect();
                let candidates =
                    candidates.map_err(|e| ProtocolError::Parse(e.to_string()))?;
                let rewards = objective
                    .evaluate(&candidates)
                    .map_err(|e| ProtocolError::Parse(e.to_string()))?;
                write_message(&mut output, &ChildMessage::Result { id, rewards })?;
            }
            other => {
                return Err(ProtocolError::UnexpectedMessage {
                    expected: "eval",
                    got: format!("{other:?}"),
                })
            }
        }
    }
    Ok(())
}

fn write_message<W: Write>(output: &mut W, message: &ChildMessage) -> Result<(), ProtocolError> {
    let mut line =
        serde_json::to_string(message).map_err(|e| ProtocolError::Parse(e.to_string()))?;
    line.push('\n');
    output.write_all(line.as_bytes())?;
    output.flush()?;
    Ok(())
}

/// Convenience constructor for handles driven from experiment configs.
pub fn spawn_evaluator(
    command: &str,
    args: &[String],
    dim: usize,
) -> Result<EvaluatorHandle, ProtocolError> {
    let _ = Path::new(command);
    EvaluatorHandle::spawn(command, args, dim, EvaluatorOptions::default())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn wire_format_is_stable() {
        let hello = ParentMessage::Hello {
            version: PROTOCOL_VERSION.into(),
            dim: 3,
        };
        assert_eq!(
            serde_json::to_string(&hello).unwrap(),
            r#"{"type":"hello","version":"trs/1","dim":3}"#
        );
        let eval = ParentMessage::Eval {
            id: 7,
            batch: vec![vec![0.1, -2.0]],
        };
        assert_eq!(
            serde_json::to_string(&eval).unwrap(),
            r#"{"type":"eval","id":7,"batch":[[0.1,-2.0]]}"#
        );
        let result: ChildMessage =
            serde_json::from_str(r#"{"type":"result","id":7,"rewards":[1.5]}"#).unwrap();
        match result {
            ChildMessage::Result { id, rewards } => {
                assert_eq!(id, 7);
                assert_eq!(rewards, vec![1.5]);
            }
            _ => panic!("parsed wrong variant"),
        }
    }

    #[test]
    fn floats_round_trip_exactly() {
        let values = vec![0.1, 1.0 / 3.0, f64::MIN_POSITIVE, -1.2345678901234567e300];
        let json = serde_json::to_string(&values).unwrap();
        let back: Vec<f64> = serde_json::from_str(&json).unwrap();
        for (a, b) in values.iter().zip(back.iter()) {
            assert_eq!(a.to_bits(), b.to_bits());
        }
    }
}
