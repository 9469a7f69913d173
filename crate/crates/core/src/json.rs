//! Serde helpers: every number is written as a decimal string.

use std::fmt::Display;

use serde::Serializer;

pub(crate) fn dec<T: Display, S: Serializer>(v: &T, s: S) -> Result<S::Ok, S::Error> {
    s.collect_str(v)
}

#[allow(clippy::ptr_arg)]
pub(crate) fn dec_seq<T: Display, S: Serializer>(v: &Vec<T>, s: S) -> Result<S::Ok, S::Error> {
    s.collect_seq(v.iter().map(ToString::to_string))
}

#[allow(clippy::ptr_arg)]
pub(crate) fn dec_table<T: Display, S: Serializer>(v: &Vec<Vec<T>>, s: S) -> Result<S::Ok, S::Error> {
    s.collect_seq(v.iter().map(|row| row.iter().map(ToString::to_string).collect::<Vec<_>>()))
}
