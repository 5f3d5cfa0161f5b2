use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("invalid modulus {0}: expected an odd integer >= 3")]
    InvalidModulus(u64),

    #[error("invalid arity {0}: expected an integer >= 2")]
    InvalidArity(u32),

    #[error("arity mismatch: {left} vs {right}")]
    ArityMismatch { left: u32, right: u32 },

    #[error("letter {letter} is out of range for arity {arity}")]
    LetterOutOfRange { letter: u32, arity: u32 },

    #[error("leaf index {index} out of range for a tree with {leaves} leaves")]
    LeafIndexOutOfRange { index: usize, leaves: usize },

    #[error("trees have different sizes ({left} vs {right} leaves)")]
    SizeMismatch { left: usize, right: usize },

    #[error("invalid partition: {0}")]
    InvalidPartition(String),

    #[error("not in the subgroup: {0}")]
    NotInSubgroup(String),

    #[error("the tree diagram is not reduced; reducing it changes the link (pass allow_nonreduced to build anyway)")]
    MustReduce,

    #[error("the identity element has no associated knot diagram here")]
    TrivialElement,

    #[error("word consists only of zeros")]
    AllZeroWord,

    #[error("block length mismatch: class uses q={class_q}, modulus requires q={modulus_q}")]
    BlockMismatch { class_q: u32, modulus_q: u32 },

    #[error("precondition violated: {0}")]
    Precondition(String),

    #[error("size limit exceeded: {size} > {limit}")]
    SizeLimit { size: usize, limit: usize },

    #[error("malformed diagram: {0}")]
    MalformedDiagram(String),

    #[error("parse error at position {pos}: {msg}")]
    Parse { pos: usize, msg: String },
}

impl Error {
    pub(crate) fn parse(pos: usize, msg: impl Into<String>) -> Self {
        Error::Parse {
            pos,
            msg: msg.into(),
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
