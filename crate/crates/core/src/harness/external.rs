use std::io::{BufRead, BufReader, Write};
use std::process::{Child, ChildStdin, Command, Stdio};
use std::sync::mpsc::{self, Receiver, RecvTimeoutError};
use std::sync::{Arc, Mutex};
use std::time::Duration;

use super::protocol::{Handshake, SegmentorResponse, PROTOCOL_VERSION};
use super::{Prediction, Query, Segmentor, SegmentorError};
use crate::maskops::decode_rle;

pub const DEFAULT_TIMEOUT: Duration = Duration::from_secs(60);

/// Every line exchanged with the child, prefixed with `> ` (sent) or `< `
/// (received).
pub type Transcript = Arc<Mutex<Vec<String>>>;

struct Running {
    child: Child,
    stdin: ChildStdin,
    lines: Receiver<std::io::Result<String>>,
}

impl Drop for Running {
    fn drop(&mut self) {
        let _ = self.child.kill();
        let _ = self.child.wait();
    }
}

/// A model running as a child process speaking `dig/1`. The process is
/// started on first use and restarted after any failure, so one bad
/// sample does not poison the next.
pub struct ExternalSegmentor {
    command: String,
    name: Option<String>,
    timeout: Duration,
    running: Option<Running>,
    transcript: Option<Transcript>,
}

impl ExternalSegmentor {
    /// `command` is run through `sh -c`.
    pub fn new(command: impl Into<String>, timeout: Duration) -> Self {
        Self {
            command: command.into(),
            name: None,
            timeout,
            running: None,
            transcript: None,
        }
    }

    /// Method name used in records instead of the command line.
    pub fn with_name(mut self, name: impl Into<String>) -> Self {
        self.name = Some(name.into());
        self
    }

    pub fn with_transcript(mut self, transcript: Transcript) -> Self {
        self.transcript = Some(transcript);
        self
    }

    fn log(&self, dir: &str, line: &str) {
        if let Some(t) = &self.transcript {
            t.lock().expect("transcript lock").push(format!("{dir} {line}"));
        }
    }

    fn spawn(&self) -> Result<Running, SegmentorError> {
        let mut child = Command::new("sh")
            .arg("-c")
            .arg(&self.command)
            .stdin(Stdio::piped())
            .stdout(Stdio::piped())
            .stderr(Stdio::inherit())
            .spawn()
            .map_err(|e| SegmentorError::Spawn(format!("{}: {e}", self.command)))?;
        let stdin = child.stdin.take().expect("piped stdin");
        let stdout = child.stdout.take().expect("piped stdout");
        let (tx, rx) = mpsc::channel();
        std::thread::spawn(move || {
            for line in BufReader::new(stdout).lines() {
                if tx.send(line).is_err() {
                    break;
                }
            }
        });
        Ok(Running { child, stdin, lines: rx })
    }

    fn send(&mut self, line: &str) -> Result<(), SegmentorError> {
        self.log(">", line);
        let running = self.running.as_mut().expect("running child");
        let result = writeln!(running.stdin, "{line}").and_then(|_| running.stdin.flush());
        result.map_err(|e| match e.kind() {
            std::io::ErrorKind::BrokenPipe => SegmentorError::PrematureExit,
            _ => SegmentorError::Io(e),
        })
    }

    fn recv(&mut self) -> Result<String, SegmentorError> {
        let running = self.running.as_mut().expect("running child");
        let line = match running.lines.recv_timeout(self.timeout) {
            Ok(Ok(line)) => line,
            Ok(Err(e)) => return Err(SegmentorError::Io(e)),
            Err(RecvTimeoutError::Timeout) => return Err(SegmentorError::Timeout(self.timeout)),
            Err(RecvTimeoutError::Disconnected) => return Err(SegmentorError::PrematureExit),
        };
        self.log("<", &line);
        Ok(line)
    }

    fn ensure_running(&mut self) -> Result<(), SegmentorError> {
        if self.running.is_some() {
            return Ok(());
        }
        self.running = Some(self.spawn()?);
        let hello = serde_json::to_string(&Handshake::current()).expect("serializable");
        self.send(&hello)?;
        let reply = self.recv()?;
        let theirs: Handshake = serde_json::from_str(&reply)
            .map_err(|e| SegmentorError::Malformed(format!("handshake {reply:?}: {e}")))?;
        if theirs.protocol != PROTOCOL_VERSION {
            return Err(SegmentorError::VersionMismatch(theirs.protocol));
        }
        Ok(())
    }

    fn exchange(&mut self, query: &Query<'_>) -> Result<Prediction, SegmentorError> {
        self.ensure_running()?;
        let request = serde_json::to_string(&query.to_request()?).expect("serializable");
        self.send(&request)?;
        let reply = self.recv()?;
        let response: SegmentorResponse = serde_json::from_str(&reply)
            .map_err(|e| SegmentorError::Malformed(format!("{}: {e}", truncate(&reply))))?;
        match response {
            SegmentorResponse::Mask { mask } => Ok(Prediction::Mask(decode_rle(&mask)?)),
            SegmentorResponse::Prob { prob_ref } => Prediction::load_probabilities(prob_ref.as_ref()),
            SegmentorResponse::Error { error } => Err(SegmentorError::Remote(error)),
        }
    }
}

fn truncate(s: &str) -> String {
    s.chars().take(80).collect()
}

impl Segmentor for ExternalSegmentor {
    fn name(&self) -> String {
        self.name.clone().unwrap_or_else(|| self.command.clone())
    }

    fn predict(&mut self, query: &Query<'_>) -> Result<Prediction, SegmentorError> {
        let result = self.exchange(query);
        if let Err(e) = &result {
            log::warn!("model {:?} failed: {e}; restarting it for the next query", self.command);
            self.running = None;
        }
        result
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gestures::click_at;
    use crate::harness::QueryOptions;
    use crate::maskops::BinaryMask;

    /// Shell model echoing the previous segmentation back.
    pub(crate) const SHELL_ECHO: &str = r#"read -r hello; echo '{"protocol":"dig/1"}'; while IFS= read -r line; do printf '%s\n' "$line" | sed -E 's/.*"prev_seg":(\{[^}]*\}).*/{"mask":\1}/'; done"#;

    fn query_parts() -> (BinaryMask, crate::gestures::GestureAnnotation, QueryOptions) {
        let prev = BinaryMask::from_fn(12, 9, |r, c| r > 2 && c > 4);
        (prev, click_at((4, 4), 12, 9, 0), QueryOptions::default())
    }

    fn ask(s: &mut ExternalSegmentor) -> Result<Prediction, SegmentorError> {
        let (prev, g, opts) = query_parts();
        s.predict(&Query { image_ref: None, prev_seg: &prev, gesture: &g, options: &opts, ground_truth: None })
    }

    #[test]
    fn echo_round_trip() {
        let t = Transcript::default();
        let mut s = ExternalSegmentor::new(SHELL_ECHO, Duration::from_secs(10)).with_transcript(t.clone());
        let (prev, _, _) = query_parts();
        for _ in 0..3 {
            assert_eq!(ask(&mut s).unwrap(), Prediction::Mask(prev.clone()));
        }
        let lines = t.lock().unwrap();
        assert_eq!(lines.len(), 8);
        assert_eq!(lines[1], r#"< {"protocol":"dig/1"}"#);
        assert!(lines.iter().all(|l| !l.contains("\"intent\"") && !l.contains("\"gesture_type\"")));
    }

    #[test]
    fn distinct_error_kinds() {
        let cases = [
            (r#"read -r h; echo '{"protocol":"dig/0"}'; cat >/dev/null"#, "version_mismatch"),
            (r#"read -r h; echo '{"protocol":"dig/1"}'; read -r l; echo 'not json'; cat >/dev/null"#, "malformed"),
            (r#"read -r h; echo '{"protocol":"dig/1"}'; read -r l; exit 0"#, "premature_exit"),
            (r#"read -r h; echo '{"protocol":"dig/1"}'; read -r l; sleep 5"#, "timeout"),
            (r#"read -r h; echo '{"protocol":"dig/1"}'; read -r l; echo '{"error":"oom"}'; cat >/dev/null"#, "remote"),
        ];
        for (cmd, kind) in cases {
            let mut s = ExternalSegmentor::new(cmd, Duration::from_millis(500));
            let err = ask(&mut s).unwrap_err();
            assert_eq!(err.kind(), kind, "{cmd}: {err}");
        }
        let mut missing = ExternalSegmentor::new("exit 3", Duration::from_millis(500));
        assert_eq!(ask(&mut missing).unwrap_err().kind(), "premature_exit");
    }

    #[test]
    fn restarts_after_failure() {
        // Answers one request, then dies on the next.
        let cmd = r#"read -r h; echo '{"protocol":"dig/1"}'; read -r l; printf '%s\n' "$l" | sed -E 's/.*"prev_seg":(\{[^}]*\}).*/{"mask":\1}/'; read -r l; exit 1"#;
        let mut s = ExternalSegmentor::new(cmd, Duration::from_secs(10));
        assert!(ask(&mut s).is_ok());
        assert_eq!(ask(&mut s).unwrap_err().kind(), "premature_exit");
        assert!(ask(&mut s).is_ok());
    }
}
