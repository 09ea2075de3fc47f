//! Output assembly helpers.

/// Joins a header and rows into CSV text with a trailing newline.
pub fn csv_text(header: &str, rows: &[String]) -> Vec<u8> {
    let mut text = String::with_capacity(header.len() + rows.iter().map(|r| r.len() + 1).sum::<usize>() + 1);
    text.push_str(header);
    text.push('\n');
    for row in rows {
        text.push_str(row);
        text.push('\n');
    }
    text.into_bytes()
}

/// Pretty JSON bytes with a trailing newline.
pub fn json_text<T: serde::Serialize>(value: &T) -> Vec<u8> {
    let mut bytes = serde_json::to_vec_pretty(value).expect("serializable");
    bytes.push(b'\n');
    bytes
}
