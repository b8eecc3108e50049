//! `score,label` line parsing.

use std::io::BufRead;

use dynroc_core::{DataPoint, Label};

use crate::error::CliError;

/// Label tokens for the two classes.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LabelMap {
    class1: String,
    class2: String,
}

impl Default for LabelMap {
    fn default() -> Self {
        LabelMap {
            class1: "1".into(),
            class2: "2".into(),
        }
    }
}

impl LabelMap {
    pub fn new(class1: &str, class2: &str) -> Result<LabelMap, String> {
        let (c1, c2) = (class1.trim(), class2.trim());
        if c1.is_empty() || c2.is_empty() {
            return Err("label tokens must be non-empty".into());
        }
        if c1 == c2 {
            return Err(format!("both classes map to the same token `{c1}`"));
        }
        if c1.contains(',') || c2.contains(',') {
            return Err("label tokens cannot contain the delimiter".into());
        }
        Ok(LabelMap {
            class1: c1.into(),
            class2: c2.into(),
        })
    }

    /// Parses `1=TOKEN,2=TOKEN` (either order).
    pub fn parse(spec: &str) -> Result<LabelMap, String> {
        let mut c1 = None;
        let mut c2 = None;
        for part in spec.split(',') {
            let (class, token) = part
                .split_once('=')
                .ok_or_else(|| format!("label map entry `{part}` is not CLASS=TOKEN"))?;
            let slot = match class.trim() {
                "1" => &mut c1,
                "2" => &mut c2,
                other => return Err(format!("unknown class `{other}` in label map (use 1 or 2)")),
            };
            if slot.replace(token.to_string()).is_some() {
                return Err(format!("class {} mapped twice", class.trim()));
            }
        }
        match (c1, c2) {
            (Some(a), Some(b)) => LabelMap::new(&a, &b),
            _ => Err("label map must assign both classes 1 and 2".into()),
        }
    }

    pub fn label(&self, token: &str) -> Option<Label> {
        if token == self.class1 {
            Some(Label::Class1)
        } else if token == self.class2 {
            Some(Label::Class2)
        } else {
            None
        }
    }
}

/// A malformed line, before the line number is attached.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LineError {
    pub field: &'static str,
    pub message: String,
}

/// Parses one `score,label` record.
pub fn parse_line(text: &str, labels: &LabelMap) -> Result<DataPoint, LineError> {
    let text = text.trim_end_matches(['\r', '\n']);
    let mut fields = text.split(',');
    let (Some(score), Some(label), None) = (fields.next(), fields.next(), fields.next()) else {
        return Err(LineError {
            field: "line",
            message: format!("expected `score,label`, got `{text}`"),
        });
    };
    let (score, label) = (score.trim(), label.trim());
    let value: f64 = score.parse().map_err(|_| LineError {
        field: "score",
        message: format!("`{score}` is not a number"),
    })?;
    if !value.is_finite() {
        return Err(LineError {
            field: "score",
            message: format!("`{score}` is not finite"),
        });
    }
    let label = labels.label(label).ok_or_else(|| LineError {
        field: "label",
        message: format!("unknown label `{label}`"),
    })?;
    Ok(DataPoint {
        score: value + 0.0,
        label,
    })
}

/// Iterator over the data points of a stream. Blank lines are skipped and the
/// first line is dropped when `has_header` is set.
pub struct Records<R> {
    reader: R,
    labels: LabelMap,
    line: usize,
    skip_header: bool,
    buf: Vec<u8>,
}

impl<R: BufRead> Records<R> {
    pub fn new(reader: R, labels: LabelMap, has_header: bool) -> Self {
        Records {
            reader,
            labels,
            line: 0,
            skip_header: has_header,
            buf: Vec::new(),
        }
    }
}

impl<R: BufRead> Iterator for Records<R> {
    type Item = Result<DataPoint, CliError>;

    fn next(&mut self) -> Option<Self::Item> {
        loop {
            self.buf.clear();
            match self.reader.read_until(b'\n', &mut self.buf) {
                Ok(0) => return None,
                Ok(_) => {}
                Err(e) => return Some(Err(CliError::io("reading input", e))),
            }
            self.line += 1;
            if std::mem::take(&mut self.skip_header) {
                continue;
            }
            let text = match std::str::from_utf8(&self.buf) {
                Ok(t) => t,
                Err(_) => {
                    return Some(Err(CliError::Parse {
                        line: self.line,
                        field: "line",
                        message: "input is not valid UTF-8".into(),
                    }))
                }
            };
            if text.trim().is_empty() {
                continue;
            }
            return Some(parse_line(text, &self.labels).map_err(|e| CliError::Parse {
                line: self.line,
                field: e.field,
                message: e.message,
            }));
        }
    }
}
