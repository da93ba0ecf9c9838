pub mod finite;
pub mod hull;
pub mod kms;
pub mod ktheory;
pub mod monoid;
pub mod rational;
