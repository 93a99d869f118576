use std::fmt;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ErrorKind {
    ParseError,
    UndeclaredName,
    NotHomogeneous,
    /// A declaration the engine rejects (bad degrees, invalid action, ...).
    Invalid,
}

#[derive(Clone, Debug, PartialEq, Eq, thiserror::Error)]
#[error("{kind:?} at {line}:{col}: {message}")]
pub struct ScriptError {
    pub kind: ErrorKind,
    pub line: usize,
    pub col: usize,
    pub message: String,
}

/// Process exit codes.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub enum Exit {
    Ok = 0,
    CertificateNotFound = 2,
    Mismatch = 3,
    InputError = 4,
}

impl Exit {
    pub fn code(self) -> i32 {
        self as i32
    }
}

/// An error that stops a command before any report is produced.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CommandError {
    pub exit: Exit,
    pub message: String,
}

impl CommandError {
    pub fn input(message: impl Into<String>) -> Self {
        CommandError { exit: Exit::InputError, message: message.into() }
    }
}

impl fmt::Display for CommandError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.message)
    }
}

impl std::error::Error for CommandError {}

impl From<ScriptError> for CommandError {
    fn from(e: ScriptError) -> Self {
        CommandError::input(e.to_string())
    }
}
