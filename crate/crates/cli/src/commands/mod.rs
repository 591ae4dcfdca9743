pub mod analyze;
pub mod build;
pub mod census;
pub mod correlate;
pub mod figures;
pub mod mixing;
pub mod sieve;
pub mod verify;
