//! Reading interchange documents from files or stdin.

use std::fmt;
use std::io::Read;
use std::sync::atomic::{AtomicBool, Ordering};

use serde::de::DeserializeOwned;
use serde_json::{json, Value};

use schemoid::admissible::AdmissibleError;
use schemoid::{
    AlgebraError, BridgeError, CategoryError, ExtensionError, FunctorError, SchemeError,
    SchemoidError, ThickenError,
};

static STDIN_TAKEN: AtomicBool = AtomicBool::new(false);

/// A failure that ends the command: usage problems exit 2, everything else 1.
#[derive(Debug)]
pub struct Failure {
    pub kind: &'static str,
    pub message: String,
    pub file: Option<String>,
    pub line: Option<usize>,
    pub column: Option<usize>,
}

impl Failure {
    pub fn new(kind: &'static str, message: impl fmt::Display) -> Self {
        Failure {
            kind,
            message: message.to_string(),
            file: None,
            line: None,
            column: None,
        }
    }

    pub fn usage(message: impl fmt::Display) -> Self {
        Self::new("usage", message)
    }

    pub fn exit_code(&self) -> u8 {
        if self.kind == "usage" {
            2
        } else {
            1
        }
    }

    pub fn to_json(&self) -> Value {
        json!({
            "schema_version": crate::SCHEMA_VERSION,
            "error": {
                "kind": self.kind,
                "message": self.message,
                "file": self.file,
                "line": self.line,
                "column": self.column,
            }
        })
    }
}

impl fmt::Display for Failure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "error[{}]", self.kind)?;
        if let Some(file) = &self.file {
            write!(f, " {file}")?;
            if let (Some(l), Some(c)) = (self.line, self.column) {
                write!(f, ":{l}:{c}")?;
            }
        }
        write!(f, ": {}", self.message)
    }
}

macro_rules! domain_error {
    ($($ty:ty => $kind:literal),* $(,)?) => {
        $(impl From<$ty> for Failure {
            fn from(e: $ty) -> Self {
                Failure::new($kind, e)
            }
        })*
    };
}

domain_error! {
    CategoryError => "category",
    FunctorError => "functor",
    SchemoidError => "schemoid",
    SchemeError => "scheme",
    BridgeError => "bridge",
    AlgebraError => "algebra",
    AdmissibleError => "admissible",
    ExtensionError => "extension",
    ThickenError => "thicken",
}

/// The text of an input argument together with a label for diagnostics.
pub struct Document {
    pub label: String,
    pub text: String,
    pub value: Value,
}

impl Document {
    pub fn has(&self, key: &str) -> bool {
        self.value.get(key).is_some()
    }

    /// Deserializes the whole document, keeping line positions on failure.
    pub fn parse<T: DeserializeOwned>(&self, what: &str) -> Result<T, Failure> {
        serde_json::from_str(&self.text).map_err(|e| self.located(what, e))
    }

    /// Deserializes one field of the document.
    pub fn field<T: DeserializeOwned>(&self, key: &str) -> Result<T, Failure> {
        let v = self
            .value
            .get(key)
            .ok_or_else(|| self.failure("parse", format!("missing field `{key}`")))?;
        T::deserialize(v).map_err(|e| self.failure("parse", format!("field `{key}`: {e}")))
    }

    pub fn failure(&self, kind: &'static str, message: impl fmt::Display) -> Failure {
        Failure {
            file: Some(self.label.clone()),
            ..Failure::new(kind, message)
        }
    }

    fn located(&self, what: &str, e: serde_json::Error) -> Failure {
        Failure {
            line: Some(e.line()),
            column: Some(e.column()),
            ..self.failure("parse", format!("not a valid {what}: {e}"))
        }
    }
}

/// Reads a path, or stdin for `-`. Stdin can be consumed only once per run.
pub fn read(path: &str) -> Result<Document, Failure> {
    let (label, text) = if path == "-" {
        if STDIN_TAKEN.swap(true, Ordering::SeqCst) {
            return Err(Failure::usage("stdin (`-`) may be given only once"));
        }
        let mut text = String::new();
        std::io::stdin()
            .read_to_string(&mut text)
            .map_err(|e| Failure::new("io", format!("reading stdin: {e}")))?;
        ("<stdin>".to_string(), text)
    } else {
        let text = std::fs::read_to_string(path).map_err(|e| Failure {
            file: Some(path.to_string()),
            ..Failure::new("io", e)
        })?;
        (path.to_string(), text)
    };
    let value = serde_json::from_str(&text).map_err(|e| Failure {
        file: Some(label.clone()),
        line: Some(e.line()),
        column: Some(e.column()),
        ..Failure::new("parse", format!("invalid JSON: {e}"))
    })?;
    Ok(Document { label, text, value })
}

/// Inline JSON when the argument looks like JSON, otherwise a path or `-`.
pub fn read_inline(arg: &str) -> Result<Document, Failure> {
    let trimmed = arg.trim_start();
    if trimmed.starts_with('[') || trimmed.starts_with('{') {
        let value = serde_json::from_str(arg).map_err(|e| Failure {
            file: Some("<argument>".into()),
            line: Some(e.line()),
            column: Some(e.column()),
            ..Failure::new("parse", format!("invalid JSON: {e}"))
        })?;
        Ok(Document {
            label: "<argument>".into(),
            text: arg.to_string(),
            value,
        })
    } else {
        read(arg)
    }
}
