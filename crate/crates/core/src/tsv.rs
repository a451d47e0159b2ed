//! `key<TAB>value` data files with `#` comments.

use crate::error::{Error, Result};

/// Parses non-blank, non-comment lines into key/value pairs, keeping order.
pub fn parse_pairs(text: &str, source: &str) -> Result<Vec<(String, String)>> {
    Ok(parse_numbered(text, source)?
        .into_iter()
        .map(|(_, k, v)| (k, v))
        .collect())
}

/// Like [`parse_pairs`] but keeps 1-based line numbers.
pub fn parse_numbered(text: &str, source: &str) -> Result<Vec<(usize, String, String)>> {
    let mut out = Vec::new();
    for (i, raw) in text.lines().enumerate() {
        let line = raw.trim_end_matches('\r');
        if line.trim().is_empty() || line.starts_with('#') {
            continue;
        }
        let Some((key, value)) = line.split_once('\t') else {
            return Err(Error::Load {
                path: source.to_owned(),
                line: i + 1,
                message: "expected key<TAB>value".into(),
            });
        };
        if key.is_empty() || value.is_empty() || value.contains('\t') {
            return Err(Error::Load {
                path: source.to_owned(),
                line: i + 1,
                message: "expected exactly one non-empty key and value".into(),
            });
        }
        out.push((i + 1, key.to_owned(), value.to_owned()));
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn comments_and_blanks_skipped() {
        let pairs = parse_pairs("# header\n\ngo\twent\r\nsee\tsaw\n", "t").unwrap();
        assert_eq!(
            pairs,
            [("go".into(), "went".into()), ("see".into(), "saw".into())]
        );
    }

    #[test]
    fn missing_tab_reports_line() {
        let err = parse_pairs("go\twent\nbroken\n", "lex.tsv").unwrap_err();
        assert_eq!(err.to_string(), "lex.tsv:2: expected key<TAB>value");
    }
}
