use std::fmt::{self, Display};

/// Line-oriented `key value` output.
#[derive(Debug, Default, Clone, PartialEq, Eq)]
pub struct Report {
    lines: Vec<(String, String)>,
}

impl Report {
    pub fn new() -> Self {
        Report::default()
    }

    pub fn put(&mut self, key: &str, value: impl Display) {
        self.lines.push((key.to_string(), value.to_string()));
    }

    pub fn flag(&mut self, key: &str, value: bool) {
        self.put(key, if value { "yes" } else { "no" });
    }

    pub fn list(&mut self, key: &str, items: impl IntoIterator<Item = usize>) {
        let joined: Vec<String> = items.into_iter().map(|x| x.to_string()).collect();
        self.put(key, joined.join(" "));
    }
}

impl Display for Report {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (k, v) in &self.lines {
            if v.is_empty() {
                writeln!(f, "{k}")?;
            } else {
                writeln!(f, "{k} {v}")?;
            }
        }
        Ok(())
    }
}
