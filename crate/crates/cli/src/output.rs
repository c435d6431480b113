use std::io::{self, Write};
use std::process::ExitCode;

use serde_json::ser::Formatter;
use serde_json::{json, Value};

/// Exit status for malformed literals.
pub const EXIT_PARSE: u8 = 2;
/// Exit status for violated mathematical preconditions.
pub const EXIT_MATH: u8 = 3;
/// Exit status for command-line usage errors.
pub const EXIT_USAGE: u8 = 64;
/// Cap on the failure count reported by `verify-all`.
pub const MAX_FAILURES: usize = 100;

/// A failed command: what went wrong and which argument it concerns.
#[derive(Debug)]
pub enum Failure {
    Parse {
        argument: &'static str,
        position: usize,
        message: String,
    },
    Math(String),
}

impl Failure {
    pub fn of(argument: &'static str, e: jetform::Error) -> Self {
        match e {
            jetform::Error::Parse { pos, message } => Failure::Parse {
                argument,
                position: pos,
                message,
            },
            other => Failure::Math(other.to_string()),
        }
    }

    fn to_json(&self) -> Value {
        match self {
            Failure::Parse {
                argument,
                position,
                message,
            } => json!({"error": {
                "kind": "parse",
                "argument": argument,
                "position": position,
                "message": message,
            }}),
            Failure::Math(message) => json!({"error": {"kind": "math", "message": message}}),
        }
    }

    fn exit_code(&self) -> u8 {
        match self {
            Failure::Parse { .. } => EXIT_PARSE,
            Failure::Math(_) => EXIT_MATH,
        }
    }

    fn describe(&self) -> String {
        match self {
            Failure::Parse {
                argument,
                position,
                message,
            } => format!("parse error in {argument} at position {position}: {message}"),
            Failure::Math(message) => message.clone(),
        }
    }
}

impl From<jetform::Error> for Failure {
    fn from(e: jetform::Error) -> Self {
        Failure::of("input", e)
    }
}

/// Compact single-line JSON with a space after `:` and `,`.
struct Spaced;

impl Formatter for Spaced {
    fn begin_array_value<W: ?Sized + Write>(&mut self, writer: &mut W, first: bool) -> io::Result<()> {
        if first {
            Ok(())
        } else {
            writer.write_all(b", ")
        }
    }

    fn begin_object_key<W: ?Sized + Write>(&mut self, writer: &mut W, first: bool) -> io::Result<()> {
        if first {
            Ok(())
        } else {
            writer.write_all(b", ")
        }
    }

    fn begin_object_value<W: ?Sized + Write>(&mut self, writer: &mut W) -> io::Result<()> {
        writer.write_all(b": ")
    }
}

pub fn render(value: &Value, pretty: bool) -> String {
    if pretty {
        serde_json::to_string_pretty(value).expect("JSON values serialize")
    } else {
        let mut buf = Vec::new();
        let mut ser = serde_json::Serializer::with_formatter(&mut buf, Spaced);
        serde::Serialize::serialize(value, &mut ser).expect("JSON values serialize");
        String::from_utf8(buf).expect("JSON is UTF-8")
    }
}

/// Prints the result and maps it to an exit status.
pub fn finish(result: Result<(Value, u8), Failure>, pretty: bool) -> ExitCode {
    match result {
        Ok((value, code)) => {
            emit(&render(&value, pretty));
            ExitCode::from(code)
        }
        Err(failure) => {
            emit(&render(&failure.to_json(), pretty));
            eprintln!("jetform: {}", failure.describe());
            ExitCode::from(failure.exit_code())
        }
    }
}

/// Writes one line to stdout; a closed pipe is not an error.
fn emit(line: &str) {
    let mut out = io::stdout().lock();
    let _ = writeln!(out, "{line}").and_then(|()| out.flush());
}
