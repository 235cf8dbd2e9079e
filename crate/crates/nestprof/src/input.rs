use std::io::{self, Read};

use nestprof_core::json_model::{DocumentCollection, JsonValue, NotAnObject};

#[derive(Clone, Copy, Debug, PartialEq, Eq, clap::ValueEnum)]
pub enum Format {
    /// One object per line (any whitespace between objects is accepted).
    JsonLines,
    /// A single top-level array of objects.
    JsonArray,
}

#[derive(Debug, thiserror::Error)]
pub enum InputError {
    #[error("cannot read input: {0}")]
    Io(#[from] io::Error),
    #[error("input is not valid UTF-8")]
    Utf8,
    #[error("document {document}: line {line}, column {column}: {message}")]
    Parse {
        document: usize,
        line: usize,
        column: usize,
        message: String,
    },
    #[error("document {0} is not a JSON object")]
    NotAnObject(usize),
    #[error("a json-array input must be a single top-level array")]
    NotAnArray,
}

impl From<NotAnObject> for InputError {
    fn from(e: NotAnObject) -> Self {
        InputError::NotAnObject(e.index)
    }
}

fn parse_error(document: usize, e: serde_json::Error) -> InputError {
    // serde_json appends its own position; keep only the message.
    let message = e.to_string();
    let message = match message.rfind(" at line ") {
        Some(i) => message[..i].to_string(),
        None => message,
    };
    InputError::Parse {
        document,
        line: e.line(),
        column: e.column(),
        message,
    }
}

/// Reads a whole collection. Documents get ids `1..=n` in input order.
pub fn parse_collection<R: Read>(mut input: R, format: Format) -> Result<DocumentCollection, InputError> {
    let mut bytes = Vec::new();
    input.read_to_end(&mut bytes)?;
    let text = std::str::from_utf8(&bytes).map_err(|_| InputError::Utf8)?;
    parse_str(text, format)
}

pub fn parse_str(text: &str, format: Format) -> Result<DocumentCollection, InputError> {
    match format {
        Format::JsonLines => {
            let mut values = Vec::new();
            for (i, v) in serde_json::Deserializer::from_str(text).into_iter::<JsonValue>().enumerate() {
                values.push(v.map_err(|e| parse_error(i + 1, e))?);
            }
            Ok(DocumentCollection::from_values(values)?)
        }
        Format::JsonArray => match serde_json::from_str::<JsonValue>(text).map_err(|e| parse_error(1, e))? {
            JsonValue::Array(items) => Ok(DocumentCollection::from_values(items)?),
            _ => Err(InputError::NotAnArray),
        },
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn json_lines_in_order() {
        let c = parse_str("{\"a\":[\"X\"]}\n{\"a\":[\"X\",\"Y\"]}\n", Format::JsonLines).unwrap();
        assert_eq!(c.len(), 2);
        assert_eq!(c.documents()[1].id.0, 2);
    }

    #[test]
    fn truncated_second_document() {
        match parse_str("{\"a\":1}{", Format::JsonLines).unwrap_err() {
            InputError::Parse { document, line, .. } => assert_eq!((document, line), (2, 1)),
            e => panic!("{e}"),
        }
    }

    #[test]
    fn reports_line_of_bad_document() {
        let err = parse_str("{\"a\":1}\n{\"a\":1}\n{\"a\":}\n", Format::JsonLines).unwrap_err();
        assert_eq!(err.to_string().split(':').next(), Some("document 3"));
        assert!(matches!(err, InputError::Parse { line: 3, .. }));
    }

    #[test]
    fn duplicate_keys_rejected() {
        assert!(matches!(
            parse_str("{\"a\":1,\"a\":2}", Format::JsonLines),
            Err(InputError::Parse { document: 1, .. })
        ));
    }

    #[test]
    fn structural_errors() {
        assert!(matches!(parse_str("{\"a\":1}\n[1]", Format::JsonLines), Err(InputError::NotAnObject(2))));
        assert!(matches!(parse_str("{\"a\":1}", Format::JsonArray), Err(InputError::NotAnArray)));
        assert!(matches!(parse_str("[{\"a\":1}, 3]", Format::JsonArray), Err(InputError::NotAnObject(2))));
        assert!(matches!(parse_str(&String::from_utf8_lossy(b"\xff"), Format::JsonLines), Err(InputError::Parse { .. })));
        assert!(matches!(parse_collection(&b"\xff"[..], Format::JsonLines), Err(InputError::Utf8)));
    }

    #[test]
    fn empty_input_is_empty_collection() {
        assert!(parse_str("", Format::JsonLines).unwrap().is_empty());
        assert!(parse_str(" \n", Format::JsonLines).unwrap().is_empty());
    }
}
