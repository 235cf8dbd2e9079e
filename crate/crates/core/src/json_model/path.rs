use alloc::string::String;
use alloc::vec::Vec;
use core::fmt;
use core::str::FromStr;

#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Step {
    Key(String),
    Wildcard,
    /// Only meaningful for user-supplied paths; mining never produces it.
    Index(usize),
}

/// A restricted JSONPath: `$` followed by key, `[*]` and `[n]` steps.
#[derive(Clone, Debug, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Path {
    steps: Vec<Step>,
}

#[derive(Clone, Debug, PartialEq, Eq, thiserror::Error)]
pub enum PathError {
    #[error("path must start with `$`")]
    MissingRoot,
    #[error("unexpected character `{found}` at offset {offset}")]
    Unexpected { offset: usize, found: char },
    #[error("unterminated bracket starting at offset {0}")]
    Unterminated(usize),
    #[error("invalid array index at offset {0}")]
    BadIndex(usize),
}

impl Path {
    pub fn root() -> Self {
        Path::default()
    }

    pub fn from_steps(steps: Vec<Step>) -> Self {
        Path { steps }
    }

    pub fn steps(&self) -> &[Step] {
        &self.steps
    }

    pub fn push(&mut self, step: Step) {
        self.steps.push(step);
    }

    pub fn pop(&mut self) -> Option<Step> {
        self.steps.pop()
    }

    pub fn child(&self, step: Step) -> Path {
        let mut p = self.clone();
        p.push(step);
        p
    }

    pub fn key(&self, name: &str) -> Path {
        self.child(Step::Key(name.into()))
    }

    pub fn wildcard(&self) -> Path {
        self.child(Step::Wildcard)
    }

    /// True when the path only has key and wildcard steps.
    pub fn is_mineable(&self) -> bool {
        !self.steps.iter().any(|s| matches!(s, Step::Index(_)))
    }

    /// Replaces every index step by a wildcard.
    pub fn canonical(&self) -> Path {
        Path {
            steps: self
                .steps
                .iter()
                .map(|s| match s {
                    Step::Index(_) => Step::Wildcard,
                    other => other.clone(),
                })
                .collect(),
        }
    }
}

fn needs_quoting(name: &str) -> bool {
    name.is_empty() || name.contains(['.', '[', ']', '$'])
}

impl fmt::Display for Path {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("$")?;
        for step in &self.steps {
            match step {
                Step::Key(name) if needs_quoting(name) => {
                    f.write_str("['")?;
                    for c in name.chars() {
                        if c == '\'' || c == '\\' {
                            f.write_str("\\")?;
                        }
                        write!(f, "{c}")?;
                    }
                    f.write_str("']")?;
                }
                Step::Key(name) => write!(f, ".{name}")?,
                Step::Wildcard => f.write_str("[*]")?,
                Step::Index(n) => write!(f, "[{n}]")?,
            }
        }
        Ok(())
    }
}

impl FromStr for Path {
    type Err = PathError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let s = s.trim();
        let rest = s.strip_prefix('$').ok_or(PathError::MissingRoot)?;
        let chars: Vec<(usize, char)> = rest.char_indices().map(|(i, c)| (i + 1, c)).collect();
        let mut steps = Vec::new();
        let mut pos = 0;
        while pos < chars.len() {
            let (offset, c) = chars[pos];
            match c {
                '.' => {
                    pos += 1;
                    let mut name = String::new();
                    while pos < chars.len() && !matches!(chars[pos].1, '.' | '[') {
                        name.push(chars[pos].1);
                        pos += 1;
                    }
                    if name.is_empty() {
                        return Err(PathError::Unexpected {
                            offset,
                            found: '.',
                        });
                    }
                    steps.push(Step::Key(name));
                }
                '[' => {
                    pos += 1;
                    match chars.get(pos).map(|&(_, c)| c) {
                        Some('*') => {
                            pos += 1;
                            expect_close(&chars, pos, offset)?;
                            pos += 1;
                            steps.push(Step::Wildcard);
                        }
                        Some('\'') => {
                            pos += 1;
                            let mut name = String::new();
                            loop {
                                match chars.get(pos).map(|&(_, c)| c) {
                                    None => return Err(PathError::Unterminated(offset)),
                                    Some('\\') => {
                                        let escaped = chars
                                            .get(pos + 1)
                                            .ok_or(PathError::Unterminated(offset))?;
                                        name.push(escaped.1);
                                        pos += 2;
                                    }
                                    Some('\'') => {
                                        pos += 1;
                                        break;
                                    }
                                    Some(c) => {
                                        name.push(c);
                                        pos += 1;
                                    }
                                }
                            }
                            expect_close(&chars, pos, offset)?;
                            pos += 1;
                            steps.push(Step::Key(name));
                        }
                        Some(c) if c.is_ascii_digit() => {
                            let start = pos;
                            while pos < chars.len() && chars[pos].1.is_ascii_digit() {
                                pos += 1;
                            }
                            let digits: String = chars[start..pos].iter().map(|&(_, c)| c).collect();
                            let n = digits.parse().map_err(|_| PathError::BadIndex(offset))?;
                            expect_close(&chars, pos, offset)?;
                            pos += 1;
                            steps.push(Step::Index(n));
                        }
                        Some(_) => return Err(PathError::BadIndex(offset)),
                        None => return Err(PathError::Unterminated(offset)),
                    }
                }
                other => {
                    return Err(PathError::Unexpected {
                        offset,
                        found: other,
                    })
                }
            }
        }
        Ok(Path { steps })
    }
}

fn expect_close(chars: &[(usize, char)], pos: usize, open: usize) -> Result<(), PathError> {
    match chars.get(pos) {
        Some(&(_, ']')) => Ok(()),
        Some(&(offset, found)) => Err(PathError::Unexpected { offset, found }),
        None => Err(PathError::Unterminated(open)),
    }
}
