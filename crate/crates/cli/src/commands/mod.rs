pub mod bench;
pub mod compare;
pub mod dict;
pub mod import;
pub mod series;
pub mod text;
