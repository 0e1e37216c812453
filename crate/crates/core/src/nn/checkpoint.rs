//! Plain-text parameter checkpoints.
//!
//! ```text
//! pmrckpt 1
//! param <name> <rows> <cols>
//! <cols floats>        (repeated <rows> times)
//! ...
//! ```
//!
//! Floats use Rust's shortest round-trip formatting, so save → load → save
//! reproduces the file byte for byte.

use std::fmt::Write as _;
use std::fs;
use std::path::Path;

use super::matrix::{Matrix, ParamStore};
use crate::error::{Error, Result};

const MAGIC: &str = "pmrckpt 1";

pub fn to_text(store: &ParamStore) -> String {
    let mut out = String::new();
    out.push_str(MAGIC);
    out.push('\n');
    for id in store.ids() {
        let m = store.value(id);
        let _ = writeln!(out, "param {} {} {}", store.name(id), m.rows(), m.cols());
        for r in 0..m.rows() {
            let mut first = true;
            for v in m.row(r) {
                if !first {
                    out.push(' ');
                }
                first = false;
                let _ = write!(out, "{v:?}");
            }
            out.push('\n');
        }
    }
    out
}

pub fn from_text(text: &str) -> Result<ParamStore> {
    let mut lines = text.lines().enumerate().map(|(i, l)| (i + 1, l));
    let bad = |line: usize, msg: &str| Error::CorruptCheckpoint {
        line,
        msg: msg.to_string(),
    };
    match lines.next() {
        Some((_, MAGIC)) => {}
        Some((n, _)) => return Err(bad(n, "missing `pmrckpt 1` header")),
        None => return Err(bad(1, "empty checkpoint")),
    }
    let mut store = ParamStore::new();
    while let Some((n, header)) = lines.next() {
        let parts: Vec<&str> = header.split(' ').collect();
        let (name, rows, cols) = match parts.as_slice() {
            ["param", name, rows, cols] => (
                *name,
                rows.parse::<usize>().map_err(|_| bad(n, "bad row count"))?,
                cols.parse::<usize>()
                    .map_err(|_| bad(n, "bad column count"))?,
            ),
            _ => return Err(bad(n, "expected `param <name> <rows> <cols>`")),
        };
        if store.id(name).is_some() {
            return Err(bad(n, "duplicate parameter"));
        }
        let mut data = Vec::with_capacity(rows * cols);
        for _ in 0..rows {
            let (n, row) = lines.next().ok_or_else(|| bad(n, "truncated matrix"))?;
            let before = data.len();
            for tok in row.split(' ') {
                let v: f64 = tok.parse().map_err(|_| bad(n, "bad float"))?;
                if !v.is_finite() {
                    return Err(bad(n, "non-finite value"));
                }
                data.push(v);
            }
            if data.len() - before != cols {
                return Err(bad(n, "wrong number of columns"));
            }
        }
        let m = Matrix::new(rows, cols, data).map_err(|e| bad(n, &e.to_string()))?;
        store.add(name, m);
    }
    Ok(store)
}

pub fn save(store: &ParamStore, path: &Path) -> Result<()> {
    if let Some(dir) = path.parent().filter(|d| !d.as_os_str().is_empty()) {
        fs::create_dir_all(dir).map_err(|e| Error::io(dir, e))?;
    }
    fs::write(path, to_text(store)).map_err(|e| Error::io(path, e))
}

pub fn load(path: &Path) -> Result<ParamStore> {
    let text = fs::read_to_string(path).map_err(|e| match e.kind() {
        std::io::ErrorKind::NotFound => Error::MissingCheckpoint(path.to_path_buf()),
        _ => Error::io(path, e),
    })?;
    from_text(&text)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn store_from(values: &[f64], cols: usize) -> ParamStore {
        let mut s = ParamStore::new();
        s.add(
            "w",
            Matrix::new(values.len() / cols, cols, values.to_vec()).unwrap(),
        );
        s.add("b", Matrix::new(1, 1, vec![values[0] / -3.0]).unwrap());
        s
    }

    proptest! {
        #[test]
        fn save_load_save_is_byte_identical(
            values in prop::collection::vec(prop::num::f64::NORMAL | prop::num::f64::ZERO, 6),
        ) {
            let s = store_from(&values, 3);
            let text = to_text(&s);
            let back = from_text(&text).unwrap();
            prop_assert!(back.same_values(&s));
            prop_assert_eq!(to_text(&back), text);
        }
    }

    #[test]
    fn header_format() {
        let s = store_from(&[1.0, 0.5, -2.0, 1e-300], 2);
        let text = to_text(&s);
        assert!(text.starts_with("pmrckpt 1\nparam w 2 2\n1.0 0.5\n-2.0 1e-300\nparam b 1 1\n"));
    }

    #[test]
    fn rejects_garbage() {
        assert!(from_text("").is_err());
        assert!(from_text("pmrckpt 2\n").is_err());
        assert!(from_text("pmrckpt 1\nparam w 1 2\n1.0\n").is_err());
        assert!(from_text("pmrckpt 1\nparam w 2 1\n1.0\n").is_err());
        assert!(from_text("pmrckpt 1\nparam w 1 1\nNaN\n").is_err());
    }
}
