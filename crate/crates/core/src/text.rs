//! Shared tokenizer for the line-based file formats.

use crate::error::{Error, Result};

/// Non-blank, comment-stripped lines as `(1-based line number, tokens)`.
pub(crate) fn token_lines(text: &str) -> impl Iterator<Item = (usize, Vec<&str>)> {
    text.lines().enumerate().filter_map(|(i, raw)| {
        let line = match raw.find('#') {
            Some(pos) => &raw[..pos],
            None => raw,
        };
        let toks: Vec<&str> = line.split_whitespace().collect();
        (!toks.is_empty()).then_some((i + 1, toks))
    })
}

pub(crate) fn is_name(s: &str) -> bool {
    !s.is_empty() && s.bytes().all(|b| b.is_ascii_alphanumeric() || b == b'_')
}

pub(crate) fn parse_err(line: usize, msg: impl Into<String>) -> Error {
    Error::Parse { line, msg: msg.into() }
}

pub(crate) fn check_name(line: usize, s: &str) -> Result<()> {
    if is_name(s) {
        Ok(())
    } else {
        Err(parse_err(line, format!("`{s}` is not a valid name")))
    }
}

/// Expects the first significant line to be exactly `header`.
pub(crate) fn expect_header<'a, I>(lines: &mut I, header: &str) -> Result<()>
where
    I: Iterator<Item = (usize, Vec<&'a str>)>,
{
    match lines.next() {
        Some((_, toks)) if toks == [header] => Ok(()),
        Some((n, _)) => Err(parse_err(n, format!("expected header `{header}`"))),
        None => Err(parse_err(1, format!("empty input, expected header `{header}`"))),
    }
}
