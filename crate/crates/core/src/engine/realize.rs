//! Detokenization of the rewritten token sequence.

use crate::error::{Error, Result};

/// Tokens written without a space before them.
const ATTACH_LEFT: &[&str] = &[
    ",", ".", "'", "'s", "’s", "%", ")", ";", ":", "!", "n't", "'re", "'ve", "'ll", "'d", "'m",
];
/// Tokens written without a space after them.
const ATTACH_RIGHT: &[&str] = &["("];

/// Joins tokens into a declarative sentence: single spaces except around
/// clitics and brackets, first letter capitalised, terminal period, and no
/// question marks.
pub fn realize<S: AsRef<str>>(tokens: &[S]) -> Result<String> {
    let cleaned: Vec<String> = tokens
        .iter()
        .map(|t| t.as_ref().replace('?', ""))
        .filter(|t| !t.trim().is_empty())
        .collect();
    if cleaned.is_empty() {
        return Err(Error::Argument("nothing to realize".into()));
    }
    let mut out = String::new();
    let mut glue_next = true;
    for tok in &cleaned {
        let lower = tok.to_lowercase();
        if !glue_next && !ATTACH_LEFT.contains(&lower.as_str()) {
            out.push(' ');
        }
        out.push_str(tok.trim());
        glue_next = ATTACH_RIGHT.contains(&tok.as_str());
    }
    // Drop trailing separators the answer span may have carried.
    while out.ends_with([',', ';', ':', ' ']) {
        out.pop();
    }
    if !out.ends_with('.') {
        out.push('.');
    }
    Ok(capitalize_first(&out))
}

fn capitalize_first(s: &str) -> String {
    let mut chars = s.chars();
    match chars.next() {
        Some(c) if c.is_lowercase() => c.to_uppercase().chain(chars).collect(),
        _ => s.to_owned(),
    }
}
