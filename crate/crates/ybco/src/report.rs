//! Structured pass/fail reports for operator verification: one line per
//! checked equation, with a short residual note on failure.

use std::fmt;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CheckStatus {
    Pass,
    Fail,
    /// Recorded but not required (e.g. an equivalent form that only applies
    /// when an auxiliary map is invertible).
    Skip,
}

#[derive(Debug, Clone)]
pub struct CheckLine {
    pub label: String,
    pub status: CheckStatus,
    pub detail: Option<String>,
}

#[derive(Debug, Clone)]
pub struct Report {
    title: String,
    lines: Vec<CheckLine>,
}

impl Report {
    pub fn new(title: &str) -> Self {
        Report { title: title.to_string(), lines: Vec::new() }
    }

    pub fn title(&self) -> &str {
        &self.title
    }

    pub fn pass(&mut self, label: &str) {
        self.lines.push(CheckLine { label: label.to_string(), status: CheckStatus::Pass, detail: None });
    }

    pub fn fail(&mut self, label: &str, detail: impl Into<String>) {
        self.lines.push(CheckLine {
            label: label.to_string(),
            status: CheckStatus::Fail,
            detail: Some(detail.into()),
        });
    }

    pub fn skip(&mut self, label: &str, why: impl Into<String>) {
        self.lines.push(CheckLine {
            label: label.to_string(),
            status: CheckStatus::Skip,
            detail: Some(why.into()),
        });
    }

    /// Record a zero-residual check: passes exactly when `zero` holds.
    pub fn residual(&mut self, label: &str, zero: bool, detail_on_fail: impl Into<String>) {
        if zero {
            self.pass(label);
        } else {
            self.fail(label, detail_on_fail);
        }
    }

    /// Append every line of another report, prefixing its labels.
    pub fn absorb(&mut self, other: Report, prefix: &str) {
        for mut line in other.lines {
            if !prefix.is_empty() {
                line.label = format!("{prefix}{}", line.label);
            }
            self.lines.push(line);
        }
    }

    pub fn lines(&self) -> &[CheckLine] {
        &self.lines
    }

    pub fn all_pass(&self) -> bool {
        self.lines.iter().all(|l| l.status != CheckStatus::Fail)
    }

    pub fn failure_count(&self) -> usize {
        self.lines.iter().filter(|l| l.status == CheckStatus::Fail).count()
    }

    pub fn render(&self) -> String {
        let mut out = format!("== {} ==\n", self.title);
        for line in &self.lines {
            let tag = match line.status {
                CheckStatus::Pass => "PASS",
                CheckStatus::Fail => "FAIL",
                CheckStatus::Skip => "SKIP",
            };
            match &line.detail {
                Some(d) => out.push_str(&format!("{tag} {}: {d}\n", line.label)),
                None => out.push_str(&format!("{tag} {}\n", line.label)),
            }
        }
        out
    }
}

impl fmt::Display for Report {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.render())
    }
}
