use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// A contiguous block of integer indices `start, start + 1, ..., start + len - 1`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Window {
    pub start: i64,
    pub len: usize,
}

impl Window {
    pub fn new(start: i64, len: usize) -> Self {
        Window { start, len }
    }

    /// Indices `lo..=hi`; empty when `hi < lo`.
    pub fn inclusive(lo: i64, hi: i64) -> Self {
        let len = if hi < lo { 0 } else { (hi - lo + 1) as usize };
        Window { start: lo, len }
    }

    /// `[-half, half]`.
    pub fn symmetric(half: i64) -> Self {
        Window::inclusive(-half, half)
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    /// One past the last index.
    pub fn end(&self) -> i64 {
        self.start + self.len as i64
    }

    pub fn last(&self) -> Option<i64> {
        (self.len > 0).then(|| self.end() - 1)
    }

    pub fn contains(&self, n: i64) -> bool {
        n >= self.start && n < self.end()
    }

    pub fn indices(&self) -> std::ops::Range<i64> {
        self.start..self.end()
    }

    pub fn pad(&self, margin: usize) -> Self {
        Window {
            start: self.start - margin as i64,
            len: self.len + 2 * margin,
        }
    }

    /// Smallest window covering both; an empty window is absorbed.
    pub fn hull(&self, other: &Window) -> Self {
        if self.is_empty() {
            return *other;
        }
        if other.is_empty() {
            return *self;
        }
        let start = self.start.min(other.start);
        let end = self.end().max(other.end());
        Window::new(start, (end - start) as usize)
    }

    pub fn require_nonempty(self) -> Result<Self> {
        if self.is_empty() {
            Err(Error::EmptyWindow)
        } else {
            Ok(self)
        }
    }
}
