//! Helpers shared by the line-oriented fixture formats.

/// Non-blank lines with `#` comments stripped, paired with 1-based line numbers.
pub(crate) fn lines(text: &str) -> impl Iterator<Item = (usize, &str)> {
    text.lines().enumerate().filter_map(|(i, raw)| {
        let line = raw.split('#').next().unwrap_or("").trim();
        (!line.is_empty()).then_some((i + 1, line))
    })
}

/// Splits `keyword rest...` at the first run of whitespace.
pub(crate) fn directive(line: &str) -> (&str, &str) {
    match line.split_once(char::is_whitespace) {
        Some((k, rest)) => (k, rest.trim()),
        None => (line, ""),
    }
}

/// Splits `name: body` at the first colon.
pub(crate) fn named(rest: &str) -> Option<(&str, &str)> {
    let (name, body) = rest.split_once(':')?;
    let name = name.trim();
    (!name.is_empty()).then_some((name, body.trim()))
}
