//! Real/imaginary split used by every JSON matrix document.

use crate::error::{Error, Result};
use crate::matcore::{c, CMatrix};

pub type Rows = Vec<Vec<f64>>;

pub fn split_parts(m: &CMatrix) -> (Rows, Rows) {
    let re = m
        .row_iter()
        .map(|r| r.iter().map(|z| z.re).collect())
        .collect();
    let im = m
        .row_iter()
        .map(|r| r.iter().map(|z| z.im).collect())
        .collect();
    (re, im)
}

/// Joins row-major real and imaginary parts; `field` names the document
/// field in error messages.
pub fn join_parts(re: &Rows, im: &Rows, field: &str) -> Result<CMatrix> {
    let rows = re.len();
    if rows == 0 {
        return Err(Error::Malformed(format!("`{field}.re` is empty")));
    }
    let cols = re[0].len();
    if cols == 0 {
        return Err(Error::Malformed(format!("`{field}.re` has empty rows")));
    }
    if im.len() != rows {
        return Err(Error::Malformed(format!(
            "`{field}.im` has {} rows but `{field}.re` has {rows}",
            im.len()
        )));
    }
    for (i, (r, s)) in re.iter().zip(im).enumerate() {
        if r.len() != cols || s.len() != cols {
            return Err(Error::Malformed(format!(
                "row {i} of `{field}` does not have {cols} columns"
            )));
        }
    }
    Ok(CMatrix::from_fn(rows, cols, |i, j| c(re[i][j], im[i][j])))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn ragged_rows_rejected() {
        let re = vec![vec![1.0, 0.0], vec![0.0]];
        let im = vec![vec![0.0, 0.0], vec![0.0, 0.0]];
        let err = join_parts(&re, &im, "mat").unwrap_err();
        assert!(err.to_string().contains("row 1"));
        assert!(join_parts(&vec![], &vec![], "mat").is_err());
    }

    #[test]
    fn split_join_identity() {
        let m = CMatrix::from_fn(2, 3, |i, j| c(i as f64, j as f64 * 0.5));
        let (re, im) = split_parts(&m);
        assert_eq!(join_parts(&re, &im, "m").unwrap(), m);
    }
}
