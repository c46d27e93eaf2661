//! Hierarchical content names.

use std::fmt;
use std::str::FromStr;
use std::sync::Arc;

use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum NameError {
    #[error("malformed name {text:?}: {reason}")]
    Malformed { text: String, reason: &'static str },
}

/// A `/`-separated content identifier such as `/Sea/item042`.
///
/// Components are shared behind an `Arc`, so clones are cheap; names travel
/// inside every packet and key every table.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct ContentName(Arc<[String]>);

impl ContentName {
    /// Builds a name from components, rejecting empty lists, empty segments
    /// and segments that contain `/`.
    pub fn from_components<I, S>(components: I) -> Result<Self, NameError>
    where
        I: IntoIterator<Item = S>,
        S: Into<String>,
    {
        let parts: Vec<String> = components.into_iter().map(Into::into).collect();
        let text = || format!("/{}", parts.join("/"));
        if parts.is_empty() {
            return Err(NameError::Malformed {
                text: String::new(),
                reason: "no components",
            });
        }
        if parts.iter().any(|p| p.is_empty()) {
            return Err(NameError::Malformed {
                text: text(),
                reason: "empty component",
            });
        }
        if parts.iter().any(|p| p.contains('/')) {
            return Err(NameError::Malformed {
                text: text(),
                reason: "component contains '/'",
            });
        }
        Ok(ContentName(parts.into()))
    }

    pub fn components(&self) -> &[String] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    /// Always false for a valid name; present for API symmetry with `len`.
    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    /// True iff `self` is a leading sublist of `other` (reflexive).
    pub fn is_prefix_of(&self, other: &ContentName) -> bool {
        self.0.len() <= other.0.len() && self.0.iter().zip(other.0.iter()).all(|(a, b)| a == b)
    }

    /// The first `len` components, or `None` when `len` is zero or too long.
    pub fn prefix(&self, len: usize) -> Option<ContentName> {
        if len == 0 || len > self.0.len() {
            return None;
        }
        if len == self.0.len() {
            return Some(self.clone());
        }
        Some(ContentName(self.0[..len].to_vec().into()))
    }

    /// Appends one component.
    pub fn child(&self, component: &str) -> Result<ContentName, NameError> {
        let mut parts = self.0.to_vec();
        parts.push(component.to_string());
        ContentName::from_components(parts)
    }
}

/// Parses the `/a/b/c` text form.
pub fn parse_name(text: &str) -> Result<ContentName, NameError> {
    let malformed = |reason| NameError::Malformed {
        text: text.to_string(),
        reason,
    };
    if text.is_empty() {
        return Err(malformed("empty text"));
    }
    let Some(rest) = text.strip_prefix('/') else {
        return Err(malformed("missing leading '/'"));
    };
    if rest.is_empty() {
        return Err(malformed("no components"));
    }
    let parts: Vec<&str> = rest.split('/').collect();
    if parts.iter().any(|p| p.is_empty()) {
        return Err(malformed("empty component"));
    }
    Ok(ContentName(parts.into_iter().map(str::to_string).collect::<Vec<_>>().into()))
}

impl FromStr for ContentName {
    type Err = NameError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        parse_name(s)
    }
}

impl fmt::Display for ContentName {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for c in self.0.iter() {
            write!(f, "/{c}")?;
        }
        Ok(())
    }
}

impl fmt::Debug for ContentName {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "ContentName({self})")
    }
}
