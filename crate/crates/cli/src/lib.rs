//! Library half of the `tld` binary: the JSON document formats. Kept as a
//! lib so integration tests can parse and assemble the same documents the
//! binary reads and writes.

pub mod docs;
