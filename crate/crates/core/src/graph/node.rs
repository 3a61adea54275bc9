//! Structured node identities.
//!
//! Lifted graphs name their nodes after the nodes they were built from, so a
//! node of a max lift is a [`NodeId::Subset`] of original nodes, a node of a
//! composition lift is a [`NodeId::Comp`] pair, and so on. Equality and
//! ordering are structural on the canonical form.
//!
//! String syntax (used by the JSON formats):
//!
//! | variant  | example   |
//! |----------|-----------|
//! | atom     | `a`       |
//! | multiset | `[a,a]`   |
//! | subset   | `{a,b}`   |
//! | comp     | `a∘1`     |
//! | word     | `(1,2)`   |

use std::fmt;
use std::str::FromStr;

use crate::error::Error;

/// A mode of the switching system, 1-based.
pub type Label = u32;

const COMP: char = '∘';
const RESERVED: &[char] = &['{', '}', '[', ']', '(', ')', ',', COMP];

#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum NodeId {
    Atom(String),
    Multiset(Vec<NodeId>),
    Subset(Vec<NodeId>),
    Comp(Box<NodeId>, Label),
    Word(Vec<Label>),
}

impl NodeId {
    pub fn atom(name: impl Into<String>) -> Self {
        NodeId::Atom(name.into())
    }

    /// Multiset with children sorted.
    pub fn multiset(mut members: Vec<NodeId>) -> Self {
        members.sort();
        NodeId::Multiset(members)
    }

    /// Subset with children sorted and deduplicated.
    pub fn subset(mut members: Vec<NodeId>) -> Self {
        members.sort();
        members.dedup();
        NodeId::Subset(members)
    }

    pub fn comp(inner: NodeId, label: Label) -> Self {
        NodeId::Comp(Box::new(inner), label)
    }

    pub fn word(letters: Vec<Label>) -> Self {
        NodeId::Word(letters)
    }
}

impl From<&str> for NodeId {
    fn from(s: &str) -> Self {
        NodeId::atom(s)
    }
}

impl fmt::Display for NodeId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fn list<T: fmt::Display>(f: &mut fmt::Formatter<'_>, items: &[T]) -> fmt::Result {
            for (k, item) in items.iter().enumerate() {
                if k > 0 {
                    f.write_str(",")?;
                }
                write!(f, "{item}")?;
            }
            Ok(())
        }
        match self {
            NodeId::Atom(name) => f.write_str(name),
            NodeId::Multiset(members) => {
                f.write_str("[")?;
                list(f, members)?;
                f.write_str("]")
            }
            NodeId::Subset(members) => {
                f.write_str("{")?;
                list(f, members)?;
                f.write_str("}")
            }
            NodeId::Comp(inner, label) => write!(f, "{inner}{COMP}{label}"),
            NodeId::Word(letters) => {
                f.write_str("(")?;
                list(f, letters)?;
                f.write_str(")")
            }
        }
    }
}

impl FromStr for NodeId {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let mut parser = Parser { chars: s.chars().collect(), pos: 0, src: s };
        let node = parser.node()?;
        if parser.pos != parser.chars.len() {
            return Err(parser.error("trailing characters"));
        }
        Ok(node)
    }
}

struct Parser<'a> {
    chars: Vec<char>,
    pos: usize,
    src: &'a str,
}

impl Parser<'_> {
    fn error(&self, what: &str) -> Error {
        Error::Parse(format!("node `{}`: {what} at offset {}", self.src, self.pos))
    }

    fn peek(&self) -> Option<char> {
        self.chars.get(self.pos).copied()
    }

    fn expect(&mut self, c: char) -> Result<(), Error> {
        if self.peek() == Some(c) {
            self.pos += 1;
            Ok(())
        } else {
            Err(self.error(&format!("expected `{c}`")))
        }
    }

    fn node(&mut self) -> Result<NodeId, Error> {
        let mut node = self.primary()?;
        while self.peek() == Some(COMP) {
            self.pos += 1;
            let label = self.label()?;
            node = NodeId::comp(node, label);
        }
        Ok(node)
    }

    fn primary(&mut self) -> Result<NodeId, Error> {
        match self.peek() {
            Some('{') => Ok(NodeId::subset(self.members('{', '}')?)),
            Some('[') => Ok(NodeId::multiset(self.members('[', ']')?)),
            Some('(') => {
                self.pos += 1;
                let mut letters = Vec::new();
                if self.peek() != Some(')') {
                    letters.push(self.label()?);
                    while self.peek() == Some(',') {
                        self.pos += 1;
                        letters.push(self.label()?);
                    }
                }
                self.expect(')')?;
                Ok(NodeId::word(letters))
            }
            _ => {
                let start = self.pos;
                while let Some(c) = self.peek() {
                    if RESERVED.contains(&c) || c.is_whitespace() {
                        break;
                    }
                    self.pos += 1;
                }
                if self.pos == start {
                    return Err(self.error("expected a node name"));
                }
                Ok(NodeId::Atom(self.chars[start..self.pos].iter().collect()))
            }
        }
    }

    fn members(&mut self, open: char, close: char) -> Result<Vec<NodeId>, Error> {
        self.expect(open)?;
        let mut out = vec![self.node()?];
        while self.peek() == Some(',') {
            self.pos += 1;
            out.push(self.node()?);
        }
        self.expect(close)?;
        Ok(out)
    }

    fn label(&mut self) -> Result<Label, Error> {
        let start = self.pos;
        while matches!(self.peek(), Some(c) if c.is_ascii_digit()) {
            self.pos += 1;
        }
        let digits: String = self.chars[start..self.pos].iter().collect();
        digits.parse().map_err(|_| self.error("expected a label"))
    }
}
