use thiserror::Error;

#[derive(Debug, Error)]
pub enum SimError {
    #[error("invalid parameter {name}: {reason}")]
    InvalidParameter { name: &'static str, reason: String },

    #[error("unknown radio type '{0}'")]
    CatalogMiss(String),

    #[error("placement exhausted after {attempts} attempts: {constraint}")]
    PlacementExhausted { attempts: usize, constraint: String },

    #[error("carrier {0:.3} GHz outside the 0.5-100 GHz model range")]
    ModelDomain(f64),

    #[error("dimension mismatch: channel has {channel} elements, codeword has {codeword}")]
    ShapeMismatch { channel: usize, codeword: usize },

    #[error("no coverage: empty measurement set for UE {0}")]
    NoCoverage(u32),

    #[error("unknown scenario '{name}'; valid names: {valid}")]
    UnknownScenario { name: String, valid: String },

    #[error("scenario '{scenario}': {source}")]
    Scenario {
        scenario: String,
        #[source]
        source: Box<SimError>,
    },

    #[error("i/o error on {path}: {source}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },

    #[error("config error: {0}")]
    Config(String),
}

pub type Result<T> = std::result::Result<T, SimError>;
