use std::fmt;

use cubic_kuramoto::Error;

/// A failed command, carrying the exit code class.
#[derive(Debug)]
pub enum Failure {
    Usage(anyhow::Error),
    Input(anyhow::Error),
    Numerical(anyhow::Error),
}

impl Failure {
    pub fn exit_code(&self) -> i32 {
        match self {
            Failure::Usage(_) => 1,
            Failure::Input(_) => 2,
            Failure::Numerical(_) => 3,
        }
    }

    pub fn usage(msg: impl fmt::Display) -> Self {
        Failure::Usage(anyhow::anyhow!("{msg}"))
    }

    pub fn input(msg: impl fmt::Display) -> Self {
        Failure::Input(anyhow::anyhow!("{msg}"))
    }

    pub fn numerical(msg: impl fmt::Display) -> Self {
        Failure::Numerical(anyhow::anyhow!("{msg}"))
    }
}

impl fmt::Display for Failure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let e = match self {
            Failure::Usage(e) | Failure::Input(e) | Failure::Numerical(e) => e,
        };
        write!(f, "{e:#}")
    }
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        match e {
            Error::Graph6ByteRange { .. }
            | Error::Graph6Truncated { .. }
            | Error::Graph6TrailingBytes { .. }
            | Error::Graph6Padding
            | Error::Graph6LongHeader
            | Error::Graph6Empty
            | Error::NotCubic(_)
            | Error::Disconnected
            | Error::VertexOutOfRange { .. }
            | Error::LengthMismatch { .. }
            | Error::NotACycle
            | Error::DuplicateGraphId(_)
            | Error::HomotopyMismatch(_) => Failure::Input(e.into()),
            Error::Domain { .. } => Failure::Usage(e.into()),
            _ => Failure::Numerical(e.into()),
        }
    }
}

impl From<std::io::Error> for Failure {
    fn from(e: std::io::Error) -> Self {
        Failure::Input(e.into())
    }
}

impl From<serde_json::Error> for Failure {
    fn from(e: serde_json::Error) -> Self {
        Failure::Input(e.into())
    }
}

impl From<csv::Error> for Failure {
    fn from(e: csv::Error) -> Self {
        Failure::Input(e.into())
    }
}

pub type CmdResult<T = ()> = std::result::Result<T, Failure>;
