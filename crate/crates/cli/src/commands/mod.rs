pub mod phases;
pub mod riemann;
pub mod simulate;
pub mod steady;
pub mod validate;

/// How a command finished when it did not fail outright.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Status {
    Success,
    ChecksFailed,
    NotConverged,
}
