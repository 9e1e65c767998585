use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use crate::diffalg::{DiffPoly, Generator};
use crate::error::{Error, Result};
use crate::psido::{Operator, Rule};

/// The shape of a consistent Lax operator `L = ∂ⁿ + Σᵢ uᵢ ∂ⁿ⁻ⁱ`.
///
/// Slot `i` holds the field multiplying `∂ⁿ⁻ⁱ`, or nothing if that
/// coefficient is frozen at zero. Differential (n-KdV) shapes have exactly
/// `n` slots; pseudo-differential (n-KP) shapes carry a floor and as many
/// slots as fit above it.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct LaxShape {
    order: i32,
    floor: Option<i32>,
    slots: BTreeMap<u32, Generator>,
    reduced: bool,
}

impl LaxShape {
    /// A general shape; `fields[i − 1]` is the field in slot `i`.
    pub fn new(order: i32, floor: Option<i32>, fields: Vec<Option<Generator>>) -> Result<Self> {
        if order == 0 {
            return Err(Error::InvalidShape("order-0 Lax operators are not supported".into()));
        }
        let count = match floor {
            None if order < 0 => {
                return Err(Error::InvalidShape(
                    "a differential Lax operator needs positive order".into(),
                ))
            }
            None => order,
            Some(f) if f >= order => {
                return Err(Error::InvalidShape(format!(
                    "floor {f} must lie below the order {order}"
                )))
            }
            Some(f) => order - f,
        };
        if fields.len() != count as usize {
            return Err(Error::InvalidShape(format!(
                "expected {count} field slots, got {}",
                fields.len()
            )));
        }
        let mut slots = BTreeMap::new();
        let mut seen = BTreeSet::new();
        for (i, g) in fields.into_iter().enumerate() {
            if let Some(g) = g {
                if !seen.insert(g) {
                    return Err(Error::InvalidShape(format!("field {g} appears twice")));
                }
                slots.insert(i as u32 + 1, g);
            }
        }
        Ok(LaxShape {
            order,
            floor,
            slots,
            reduced: false,
        })
    }

    /// `∂ⁿ + Σ familyᵢ ∂ⁿ⁻ⁱ` for `i = 1..n`.
    pub fn kdv(n: i32, family: &str) -> Result<Self> {
        let fields = (1..=n.max(0)).map(|i| Generator::try_new(family, Some(i as u32)).map(Some)).collect::<Result<_>>()?;
        Self::new(n, None, fields)
    }

    /// `∂ⁿ + Σ familyᵢ ∂ⁿ⁻ⁱ` with every slot down to `floor`.
    pub fn kp(n: i32, floor: i32, family: &str) -> Result<Self> {
        let count = (n - floor).max(0);
        let fields = (1..=count).map(|i| Generator::try_new(family, Some(i as u32)).map(Some)).collect::<Result<_>>()?;
        Self::new(n, Some(floor), fields)
    }

    /// Reads the shape off a monic operator whose lower coefficients are
    /// distinct bare fields or zero.
    pub fn from_operator<R: Rule>(op: &Operator<R>) -> Result<Self> {
        let Some((n, lead)) = op.leading() else {
            return Err(Error::InvalidShape("the zero operator is not a Lax operator".into()));
        };
        if !lead.is_one() {
            return Err(Error::NotMonic {
                leading: lead.to_string(),
            });
        }
        let count = match op.floor() {
            None => n,
            Some(f) => n - f,
        };
        let mut fields = Vec::new();
        for i in 1..=count.max(0) {
            let c = op.coeff(n - i)?;
            if c.is_zero() {
                fields.push(None);
            } else if let Some(g) = c.as_generator() {
                fields.push(Some(g));
            } else {
                return Err(Error::InvalidShape(format!(
                    "coefficient {c} of {}^{} is not a bare field",
                    R::SYMBOL,
                    n - i
                )));
            }
        }
        Self::new(n, op.floor(), fields)
    }

    /// The same shape with the first field set to zero and removed.
    pub fn reduced(&self) -> Result<Self> {
        if self.count() < 2 {
            return Err(Error::InvalidShape(
                "the reduction needs at least two field slots".into(),
            ));
        }
        let mut out = self.clone();
        out.slots.remove(&1);
        out.reduced = true;
        Ok(out)
    }

    pub fn order(&self) -> i32 {
        self.order
    }

    /// `None` for differential shapes.
    pub fn floor(&self) -> Option<i32> {
        self.floor
    }

    pub fn is_differential(&self) -> bool {
        self.floor.is_none()
    }

    pub fn is_reduced(&self) -> bool {
        self.reduced
    }

    /// Number of slots, filled or not.
    pub fn count(&self) -> u32 {
        match self.floor {
            None => self.order as u32,
            Some(f) => (self.order - f) as u32,
        }
    }

    pub fn field(&self, slot: u32) -> Option<Generator> {
        self.slots.get(&slot).copied()
    }

    pub fn fields(&self) -> impl Iterator<Item = (u32, Generator)> + '_ {
        self.slots.iter().map(|(&i, &g)| (i, g))
    }

    pub fn generators(&self) -> BTreeSet<Generator> {
        self.slots.values().copied().collect()
    }

    pub fn slot_of(&self, g: Generator) -> Option<u32> {
        self.slots.iter().find(|(_, &h)| h == g).map(|(&i, _)| i)
    }

    /// Whether `{uᵢ, uⱼ}` is determined by the fields above the floor. For a
    /// tail truncated after `N` fields this holds exactly when `i + j ≤ N + 1`.
    pub fn certified(&self, i: u32, j: u32) -> bool {
        self.floor.is_none() || i + j <= self.count() + 1
    }

    /// Largest `m` such that every pair among the first `m` slots is certified.
    pub fn certified_depth(&self) -> u32 {
        match self.floor {
            None => self.count(),
            Some(_) => self.count().div_ceil(2),
        }
    }

    /// The Lax operator itself.
    pub fn lax<R: Rule>(&self) -> Operator<R> {
        let n = self.order;
        let mut coeffs = vec![(n, DiffPoly::one())];
        for (&i, &g) in &self.slots {
            coeffs.push((n - i as i32, DiffPoly::gen(g)));
        }
        Operator::from_coeffs(coeffs, self.floor)
    }

    /// Checks that `g` is not a field of this family lying outside the window.
    pub(crate) fn check_window(&self, gens: &BTreeSet<Generator>) -> Result<()> {
        let families: BTreeSet<&str> = self.slots.values().map(|g| g.name()).collect();
        for g in gens {
            if self.slot_of(*g).is_none() && families.contains(g.name()) && g.index().is_some() {
                return Err(Error::OutOfWindow {
                    field: g.to_string(),
                });
            }
        }
        Ok(())
    }

    /// Floor to which a one-form with top power `top` is expanded so that
    /// both Adler products and the trace pairing stay certified.
    pub(crate) fn one_form_floor(&self, top: i32) -> i32 {
        let n = self.order;
        match self.floor {
            None => -n - 1,
            Some(f) => (-n - 1).min(f - n + top),
        }
    }
}

impl fmt::Display for LaxShape {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.floor {
            None => write!(f, "{}-KdV", self.order)?,
            Some(fl) => write!(f, "{}-KP to floor {fl}", self.order)?,
        }
        let names: Vec<String> = self.slots.values().map(|g| g.to_string()).collect();
        write!(f, " [{}]", names.join(", "))?;
        if self.reduced {
            f.write_str(" reduced")?;
        }
        Ok(())
    }
}

impl fmt::Debug for LaxShape {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}
