use std::cmp::Ordering;
use std::fmt;
use std::hash::{Hash, Hasher};

use crate::error::Error;

const NAME_CAPACITY: usize = 15;

/// Inline ASCII name of a field family, e.g. `u`, `phi`, `b`.
///
/// Names are at most 15 bytes of ASCII letters or underscores, which keeps
/// [`Generator`] `Copy` and makes monomial comparisons allocation free.
#[derive(Clone, Copy)]
struct Name {
    len: u8,
    bytes: [u8; NAME_CAPACITY],
}

impl Name {
    fn new(s: &str) -> Option<Self> {
        if s.is_empty() || s.len() > NAME_CAPACITY {
            return None;
        }
        if !s.bytes().all(|b| b.is_ascii_alphabetic() || b == b'_') {
            return None;
        }
        let mut bytes = [0u8; NAME_CAPACITY];
        bytes[..s.len()].copy_from_slice(s.as_bytes());
        Some(Name {
            len: s.len() as u8,
            bytes,
        })
    }

    fn as_str(&self) -> &str {
        // Only ASCII is ever stored.
        std::str::from_utf8(&self.bytes[..self.len as usize]).unwrap()
    }
}

impl PartialEq for Name {
    fn eq(&self, other: &Self) -> bool {
        self.as_str() == other.as_str()
    }
}

impl Eq for Name {}

impl Hash for Name {
    fn hash<H: Hasher>(&self, state: &mut H) {
        self.as_str().hash(state)
    }
}

impl PartialOrd for Name {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Name {
    fn cmp(&self, other: &Self) -> Ordering {
        self.as_str().cmp(other.as_str())
    }
}

/// A differential generator: a field such as `u`, `u3` or `phi1`.
///
/// Generators depend implicitly on the single independent variable `x`;
/// `(name, index)` identifies the generator.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Generator {
    name: Name,
    index: Option<u32>,
}

impl Generator {
    pub fn try_new(name: &str, index: Option<u32>) -> Result<Self, Error> {
        let name = Name::new(name).ok_or_else(|| Error::InvalidGenerator(name.to_string()))?;
        Ok(Generator { name, index })
    }

    /// Panics if `name` is not 1 to 15 ASCII letters or underscores.
    pub fn new(name: &str, index: Option<u32>) -> Self {
        Self::try_new(name, index).unwrap_or_else(|e| panic!("{e}"))
    }

    pub fn plain(name: &str) -> Self {
        Self::new(name, None)
    }

    pub fn indexed(name: &str, index: u32) -> Self {
        Self::new(name, Some(index))
    }

    pub fn name(&self) -> &str {
        self.name.as_str()
    }

    pub fn index(&self) -> Option<u32> {
        self.index
    }

    /// Parses the printed form (`u`, `u12`, `phi1`).
    pub fn parse(s: &str) -> Result<Self, Error> {
        let split = s
            .find(|c: char| c.is_ascii_digit())
            .unwrap_or(s.len());
        let (name, digits) = s.split_at(split);
        let index = if digits.is_empty() {
            None
        } else {
            if !digits.bytes().all(|b| b.is_ascii_digit()) {
                return Err(Error::InvalidGenerator(s.to_string()));
            }
            Some(
                digits
                    .parse::<u32>()
                    .map_err(|_| Error::InvalidGenerator(s.to_string()))?,
            )
        };
        Self::try_new(name, index)
    }

    /// Generators whose name starts with `_` are reserved for probes and
    /// cannot be written in the input language.
    pub fn is_internal(&self) -> bool {
        self.name().starts_with('_')
    }
}

impl fmt::Display for Generator {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.index {
            Some(i) => write!(f, "{}{}", self.name(), i),
            None => f.write_str(self.name()),
        }
    }
}

impl fmt::Debug for Generator {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

/// A jet variable `g^(k)`: the `k`-th total derivative of a generator.
///
/// The derived ordering is `(generator, order)`, used for printing.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Var {
    pub gen: Generator,
    pub order: u32,
}

impl Var {
    pub fn new(gen: Generator, order: u32) -> Self {
        Var { gen, order }
    }

    pub fn raised(self) -> Self {
        Var {
            gen: self.gen,
            order: self.order + 1,
        }
    }

    /// Ordering by derivative order first, then generator.
    pub(crate) fn cmp_by_order(&self, other: &Self) -> Ordering {
        self.order
            .cmp(&other.order)
            .then_with(|| self.gen.cmp(&other.gen))
    }
}

impl fmt::Display for Var {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.gen)?;
        for _ in 0..self.order {
            f.write_str("'")?;
        }
        Ok(())
    }
}

impl fmt::Debug for Var {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parse_round_trip() {
        for s in ["u", "u2", "phi1", "psi12", "b"] {
            assert_eq!(Generator::parse(s).unwrap().to_string(), s);
        }
        assert_eq!(Generator::parse("u2").unwrap().index(), Some(2));
        assert!(Generator::parse("2u").is_err());
        assert!(Generator::parse("u2x").is_err());
        assert!(Generator::parse("averyveryverylongname").is_err());
    }

    #[test]
    fn ordering_is_name_then_index() {
        let a = Generator::plain("a");
        let u1 = Generator::indexed("u", 1);
        let u2 = Generator::indexed("u", 2);
        assert!(a < u1 && u1 < u2);
        assert!(Generator::plain("u") < u1);
    }
}
