use std::fmt;
use std::str::FromStr;

use regex::{Regex, RegexBuilder};

/// What a textual marker points at.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum ReferenceKind {
    TableRef,
    FigureRef,
    FootnoteRef,
}

impl FromStr for ReferenceKind {
    type Err = PatternError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.trim().to_ascii_lowercase().as_str() {
            "table" | "tableref" => Ok(ReferenceKind::TableRef),
            "figure" | "figureref" | "picture" => Ok(ReferenceKind::FigureRef),
            "footnote" | "footnoteref" => Ok(ReferenceKind::FootnoteRef),
            other => Err(PatternError::UnknownKind(other.to_owned())),
        }
    }
}

impl fmt::Display for ReferenceKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            ReferenceKind::TableRef => "table",
            ReferenceKind::FigureRef => "figure",
            ReferenceKind::FootnoteRef => "footnote",
        })
    }
}

#[derive(Debug, thiserror::Error)]
pub enum PatternError {
    #[error("unknown reference kind {0:?} (expected table, figure or footnote)")]
    UnknownKind(String),
    #[error("line {line}: expected \"kind<TAB>pattern\"")]
    MissingTab { line: usize },
    #[error("line {line}: {source}")]
    Regex {
        line: usize,
        #[source]
        source: regex::Error,
    },
    #[error("pattern {pattern:?} has no capture group {group}")]
    MissingGroup { pattern: String, group: usize },
    #[error("no reference patterns given")]
    Empty,
}

/// A compiled, case-insensitive marker pattern. Capture group `group` holds
/// the ordinal (a positive integer) for table/figure markers, or the marker
/// token for footnote markers.
#[derive(Debug, Clone)]
pub struct ReferencePattern {
    pub kind: ReferenceKind,
    pub group: usize,
    regex: Regex,
}

/// A marker found in a text.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MarkerMatch {
    pub kind: ReferenceKind,
    pub token: String,
    pub start: usize,
    pub end: usize,
}

impl ReferencePattern {
    pub fn new(kind: ReferenceKind, pattern: &str) -> Result<Self, PatternError> {
        Self::with_group(kind, pattern, 1)
    }

    pub fn with_group(kind: ReferenceKind, pattern: &str, group: usize) -> Result<Self, PatternError> {
        let regex = RegexBuilder::new(pattern)
            .case_insensitive(true)
            .build()
            .map_err(|source| PatternError::Regex { line: 0, source })?;
        if regex.captures_len() <= group {
            return Err(PatternError::MissingGroup { pattern: pattern.to_owned(), group });
        }
        Ok(Self { kind, group, regex })
    }

    pub fn pattern(&self) -> &str {
        self.regex.as_str()
    }

    /// Every match in `text`. Table and figure matches whose ordinal is not a
    /// positive integer are dropped.
    pub fn find_all<'t>(&'t self, text: &'t str) -> impl Iterator<Item = MarkerMatch> + 't {
        self.regex.captures_iter(text).filter_map(move |caps| {
            let whole = caps.get(0)?;
            let token = caps.get(self.group)?.as_str();
            let token = match self.kind {
                ReferenceKind::FootnoteRef => normalize_footnote_token(token)?,
                _ => token.parse::<u32>().ok().filter(|n| *n > 0)?.to_string(),
            };
            Some(MarkerMatch { kind: self.kind, token, start: whole.start(), end: whole.end() })
        })
    }
}

/// Numeric footnote tokens compare by value; symbols compare literally.
pub(crate) fn normalize_footnote_token(token: &str) -> Option<String> {
    let token = token.trim();
    if token.is_empty() {
        return None;
    }
    if token.bytes().all(|b| b.is_ascii_digit()) {
        return token.parse::<u32>().ok().map(|n| n.to_string());
    }
    Some(token.to_owned())
}

/// The full set of marker patterns used for reference extraction.
#[derive(Debug, Clone)]
pub struct ReferencePatterns {
    patterns: Vec<ReferencePattern>,
}

const DEFAULT_PATTERNS: &[(ReferenceKind, &str)] = &[
    (ReferenceKind::TableRef, r"Table\s*(\d+)"),
    (ReferenceKind::TableRef, r"Tab\.\s*(\d+)"),
    (ReferenceKind::FigureRef, r"Figure\s*(\d+)"),
    (ReferenceKind::FigureRef, r"Fig\.\s*(\d+)"),
    // A marker glued to the preceding word or punctuation, the plain-text
    // trace of a superscript.
    (ReferenceKind::FootnoteRef, r"[\p{L}\)\]\.,;:]([0-9]+|[*†‡])"),
];

impl Default for ReferencePatterns {
    fn default() -> Self {
        let patterns = DEFAULT_PATTERNS
            .iter()
            .map(|&(kind, p)| ReferencePattern::new(kind, p).expect("default pattern compiles"))
            .collect();
        Self { patterns }
    }
}

impl ReferencePatterns {
    pub fn new(patterns: Vec<ReferencePattern>) -> Result<Self, PatternError> {
        if patterns.is_empty() {
            return Err(PatternError::Empty);
        }
        Ok(Self { patterns })
    }

    /// Parse a pattern file: one `kind<TAB>pattern` per line; blank lines and
    /// lines starting with `#` are skipped.
    pub fn parse(source: &str) -> Result<Self, PatternError> {
        let mut patterns = Vec::new();
        for (idx, raw) in source.lines().enumerate() {
            let line = idx + 1;
            if raw.trim().is_empty() || raw.trim_start().starts_with('#') {
                continue;
            }
            let (kind, pattern) = raw.split_once('\t').ok_or(PatternError::MissingTab { line })?;
            let kind: ReferenceKind = kind.parse()?;
            let compiled = ReferencePattern::new(kind, pattern).map_err(|e| match e {
                PatternError::Regex { source, .. } => PatternError::Regex { line, source },
                other => other,
            })?;
            patterns.push(compiled);
        }
        Self::new(patterns)
    }

    pub fn iter(&self) -> impl Iterator<Item = &ReferencePattern> {
        self.patterns.iter()
    }

    /// All matches of one kind, ordered by position in the text.
    pub fn find(&self, kind: ReferenceKind, text: &str) -> Vec<MarkerMatch> {
        let mut found: Vec<MarkerMatch> =
            self.patterns.iter().filter(|p| p.kind == kind).flat_map(|p| p.find_all(text)).collect();
        found.sort_by_key(|m| (m.start, m.end));
        found.dedup();
        found
    }
}
