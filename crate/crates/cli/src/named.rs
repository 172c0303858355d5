//! Resolution of named forms and input files.
//!
//! Built-in names: `u`, `v`, `delta`, `j`, `G<k>`, `E<k>`, and canonical
//! basis elements `f_<m>@<k>` (or `f_<m>` with the weight taken from the
//! command). Anything else is treated as a path; files may hold either the
//! text or the JSON encoding.

use crate::formats;
use mfdr_core::cohomology::dr_basis;
use mfdr_core::error::{Error, Result};
use mfdr_core::ring::{from_series, AlgForm};
use mfdr_core::series::{eisenstein_e, eisenstein_g, QSeries};
use std::fs;
use std::io::Read;

/// A resolved input: either algebraic or a bare series.
pub enum FormInput {
    Alg(AlgForm),
    Series(QSeries),
}

impl FormInput {
    /// The series view at window `n`.
    pub fn series(&self, n: i64) -> Result<QSeries> {
        match self {
            FormInput::Alg(f) => f.expand(n),
            FormInput::Series(s) => Ok(s.clone()),
        }
    }

    /// The algebraic view, certifying series inputs at the given weight.
    pub fn algebraic(&self, weight: i64) -> Result<AlgForm> {
        match self {
            FormInput::Alg(f) => {
                if !f.is_zero() && f.weight() != weight {
                    return Err(Error::Domain(format!(
                        "form has weight {}, expected {weight}",
                        f.weight()
                    )));
                }
                Ok(f.clone())
            }
            FormInput::Series(s) => from_series(s, weight),
        }
    }
}

fn read_source(path: &str) -> Result<String> {
    if path == "-" {
        let mut buf = String::new();
        std::io::stdin()
            .read_to_string(&mut buf)
            .map_err(|e| Error::Domain(format!("reading stdin: {e}")))?;
        return Ok(buf);
    }
    fs::read_to_string(path).map_err(|e| Error::Domain(format!("reading '{path}': {e}")))
}

fn parse_series_file(text: &str) -> Result<QSeries> {
    let trimmed = text.trim_start();
    if trimmed.starts_with('{') {
        let v: serde_json::Value =
            serde_json::from_str(trimmed).map_err(|e| Error::Domain(format!("bad JSON: {e}")))?;
        formats::series_from_json(&v).map_err(|e| Error::Domain(e.to_string()))
    } else {
        formats::series_from_text(text).map_err(|e| Error::Domain(e.to_string()))
    }
}

fn parse_alg_file(text: &str) -> Result<AlgForm> {
    let trimmed = text.trim_start();
    if trimmed.starts_with('{') {
        let v: serde_json::Value =
            serde_json::from_str(trimmed).map_err(|e| Error::Domain(format!("bad JSON: {e}")))?;
        formats::alg_from_json(&v).map_err(|e| Error::Domain(e.to_string()))
    } else {
        formats::alg_from_text(text).map_err(|e| Error::Domain(e.to_string()))
    }
}

/// Canonical basis element `f_m` of the given weight.
pub fn basis_element(m: i64, weight: i64, order: i64) -> Result<FormInput> {
    let basis = dr_basis(weight, order)?;
    let ell = ((basis.len() - 1) / 2) as i64;
    if m < -ell || m > ell {
        return Err(Error::Domain(format!(
            "f_{m} does not exist at weight {weight}: the index range is [{}, {ell}]",
            -ell
        )));
    }
    Ok(FormInput::Series(basis[(m + ell) as usize].rep().clone()))
}

/// Resolves a name or path. `weight_hint` supplies the weight for a bare
/// `f_<m>`; `order` sizes any series construction.
pub fn resolve(name: &str, weight_hint: Option<i64>, order: i64) -> Result<FormInput> {
    match name {
        "u" => return Ok(FormInput::Alg(AlgForm::u())),
        "v" => return Ok(FormInput::Alg(AlgForm::v())),
        "delta" => return Ok(FormInput::Alg(AlgForm::delta())),
        "j" => return Ok(FormInput::Alg(AlgForm::j_function())),
        _ => {}
    }
    if let Some(k) = name.strip_prefix('G').and_then(|k| k.parse::<u32>().ok()) {
        return Ok(FormInput::Series(eisenstein_g(k, order)?));
    }
    if let Some(k) = name.strip_prefix('E').and_then(|k| k.parse::<u32>().ok()) {
        return Ok(FormInput::Series(eisenstein_e(k, order)?));
    }
    if let Some(rest) = name.strip_prefix("f_") {
        let (m_str, weight) = match rest.split_once('@') {
            Some((m, k)) => {
                let k: i64 = k
                    .parse()
                    .map_err(|e| Error::Domain(format!("bad weight in '{name}': {e}")))?;
                (m, k)
            }
            None => {
                let k = weight_hint.ok_or_else(|| {
                    Error::Domain(format!("'{name}' needs an explicit weight: use f_<m>@<k> or --weight"))
                })?;
                (rest, k)
            }
        };
        let m: i64 = m_str
            .parse()
            .map_err(|e| Error::Domain(format!("bad index in '{name}': {e}")))?;
        return basis_element(m, weight, order);
    }
    // everything else is a file path (or '-' for stdin)
    let text = read_source(name)?;
    let trimmed = text.trim_start();
    if trimmed.starts_with("weight=") || trimmed.contains("\"denom_pow\"") {
        Ok(FormInput::Alg(parse_alg_file(&text)?))
    } else {
        Ok(FormInput::Series(parse_series_file(&text)?))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use mfdr_core::rat::rat;

    #[test]
    fn builtins_resolve() {
        assert!(matches!(resolve("u", None, 10).unwrap(), FormInput::Alg(_)));
        assert!(matches!(resolve("delta", None, 10).unwrap(), FormInput::Alg(_)));
        let g12 = resolve("G12", None, 6).unwrap().series(6).unwrap();
        assert_eq!(g12.coeff(0).unwrap(), rat(691, 65520));
        let e2 = resolve("E2", None, 4).unwrap().series(4).unwrap();
        assert_eq!(e2.coeff(1).unwrap(), rat(-24, 1));
    }

    #[test]
    fn basis_names_resolve() {
        let f = resolve("f_-1@12", None, 12).unwrap().series(12).unwrap();
        assert_eq!(f.coeff(-1).unwrap(), rat(1, 1));
        assert_eq!(f.coeff(2).unwrap(), rat(47709536, 1));
        let with_hint = resolve("f_1", Some(12), 12).unwrap().series(12).unwrap();
        assert_eq!(with_hint.coeff(1).unwrap(), rat(1, 1));
        assert!(resolve("f_2@12", None, 12).is_err());
        assert!(resolve("f_1", None, 12).is_err());
    }

    #[test]
    fn missing_file_is_domain_error() {
        assert!(matches!(
            resolve("/nonexistent/path.series", None, 10),
            Err(Error::Domain(_))
        ));
    }
}
