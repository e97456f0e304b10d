//! Classical three-valued semantics for conventional programs.
//!
//! These share the parser and grounder with the rest of the crate but use
//! their own Kleene logic and their own body evaluator.

use std::fmt;
use std::sync::Arc;

use thiserror::Error;

use crate::bilattice::TruthValue;
use crate::grounder::{AtomId, Base, GroundBody, GroundProgram};
use crate::syntax::BinOp;
use crate::valuation::Valuation;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum OracleError {
    #[error("program is not conventional: {0}")]
    NonConventional(String),
    #[error("base has {atoms} atoms; enumeration is capped at {cap}")]
    CapExceeded { atoms: usize, cap: usize },
    #[error("{operation} did not converge within {bound} steps")]
    IterationBound {
        operation: &'static str,
        bound: usize,
    },
    #[error("valuation is over a different base")]
    BaseMismatch,
}

/// Kleene truth values ordered `False < Unknown < True`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum ThreeValue {
    False,
    Unknown,
    True,
}

impl ThreeValue {
    pub const ALL: [ThreeValue; 3] = [ThreeValue::False, ThreeValue::Unknown, ThreeValue::True];

    pub fn negate(self) -> Self {
        match self {
            ThreeValue::False => ThreeValue::True,
            ThreeValue::Unknown => ThreeValue::Unknown,
            ThreeValue::True => ThreeValue::False,
        }
    }

    pub fn and(self, other: Self) -> Self {
        self.min(other)
    }

    pub fn or(self, other: Self) -> Self {
        self.max(other)
    }

    /// Information ordering: `Unknown` lies below both classical values.
    pub fn leq_k(self, other: Self) -> bool {
        self == other || self == ThreeValue::Unknown
    }

    pub fn to_four(self) -> TruthValue {
        match self {
            ThreeValue::False => TruthValue::False,
            ThreeValue::Unknown => TruthValue::Unknown,
            ThreeValue::True => TruthValue::True,
        }
    }

    pub fn from_four(v: TruthValue) -> Option<Self> {
        match v {
            TruthValue::False => Some(ThreeValue::False),
            TruthValue::Unknown => Some(ThreeValue::Unknown),
            TruthValue::True => Some(ThreeValue::True),
            TruthValue::Inconsistent => None,
        }
    }
}

impl fmt::Display for ThreeValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            ThreeValue::False => "F",
            ThreeValue::Unknown => "U",
            ThreeValue::True => "T",
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ThreeValuation {
    base: Arc<Base>,
    values: Vec<ThreeValue>,
}

impl ThreeValuation {
    pub fn constant(base: &Arc<Base>, value: ThreeValue) -> Self {
        Self {
            base: Arc::clone(base),
            values: vec![value; base.len()],
        }
    }

    pub fn base(&self) -> &Arc<Base> {
        &self.base
    }

    pub fn values(&self) -> &[ThreeValue] {
        &self.values
    }

    pub fn get(&self, atom: AtomId) -> ThreeValue {
        self.values[atom]
    }

    pub fn get_by_name(&self, name: &str) -> Option<ThreeValue> {
        self.base.id_by_name(name).map(|a| self.values[a])
    }

    pub fn leq_k(&self, other: &Self) -> bool {
        self.values.len() == other.values.len()
            && self
                .values
                .iter()
                .zip(&other.values)
                .all(|(a, b)| a.leq_k(*b))
    }

    /// The same valuation viewed in FOUR.
    pub fn to_valuation(&self) -> Valuation {
        Valuation::from_values(
            &self.base,
            self.values.iter().map(|v| v.to_four()).collect(),
        )
        .expect("lengths agree by construction")
    }

    /// Fails if `v` assigns `I` anywhere.
    pub fn from_valuation(v: &Valuation) -> Option<Self> {
        let values = v
            .values()
            .iter()
            .map(|&x| ThreeValue::from_four(x))
            .collect::<Option<_>>()?;
        Some(Self {
            base: Arc::clone(v.base()),
            values,
        })
    }
}

impl fmt::Display for ThreeValuation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (atom, v) in self.base.atoms().iter().zip(&self.values) {
            writeln!(f, "{atom}\t{v}")?;
        }
        Ok(())
    }
}

fn check_body(body: &GroundBody) -> Result<(), String> {
    match body {
        GroundBody::Atom(_) | GroundBody::NegAtom(_) => Ok(()),
        GroundBody::Const(TruthValue::True | TruthValue::False) => Ok(()),
        GroundBody::Const(c) => Err(format!("truth constant {c} in a body")),
        GroundBody::Binary(op @ (BinOp::Consensus | BinOp::Gullibility), _, _) => {
            Err(format!("operator {} in a body", op.token()))
        }
        GroundBody::Binary(_, l, r) => check_body(l).and_then(|_| check_body(r)),
    }
}

fn require_conventional(gp: &GroundProgram) -> Result<(), OracleError> {
    if !gp.is_conventional() {
        return Err(OracleError::NonConventional(
            "source uses a non-classical construct".into(),
        ));
    }
    for atom in gp.base().ids() {
        for body in gp.instances(atom) {
            check_body(body).map_err(OracleError::NonConventional)?;
        }
    }
    Ok(())
}

/// Kleene value of `body`, reading positive atoms from `pos` and negated ones
/// through `negated`.
fn kleene(
    body: &GroundBody,
    pos: &[ThreeValue],
    negated: &impl Fn(AtomId) -> ThreeValue,
) -> ThreeValue {
    match body {
        GroundBody::Atom(a) => pos[*a],
        GroundBody::NegAtom(a) => negated(*a),
        GroundBody::Const(TruthValue::True) => ThreeValue::True,
        GroundBody::Const(_) => ThreeValue::False,
        GroundBody::Binary(BinOp::Or, l, r) => kleene(l, pos, negated).or(kleene(r, pos, negated)),
        GroundBody::Binary(_, l, r) => kleene(l, pos, negated).and(kleene(r, pos, negated)),
    }
}

fn fixpoint(
    start: Vec<ThreeValue>,
    operation: &'static str,
    mut step: impl FnMut(&[ThreeValue]) -> Result<Vec<ThreeValue>, OracleError>,
) -> Result<Vec<ThreeValue>, OracleError> {
    let bound = 2 * start.len() + 1;
    let mut current = start;
    for _ in 0..bound {
        let next = step(&current)?;
        if next == current {
            return Ok(current);
        }
        current = next;
    }
    Err(OracleError::IterationBound { operation, bound })
}

fn gl_raw(gp: &GroundProgram, v: &[ThreeValue]) -> Result<Vec<ThreeValue>, OracleError> {
    let reduct = |a: AtomId| v[a].negate();
    let start = vec![ThreeValue::False; v.len()];
    fixpoint(start, "gl_transform", |x| {
        Ok(gp
            .base()
            .ids()
            .map(|a| {
                gp.instances(a)
                    .iter()
                    .map(|b| kleene(b, x, &reduct))
                    .fold(ThreeValue::False, ThreeValue::or)
            })
            .collect())
    })
}

fn check_base(gp: &GroundProgram, v: &ThreeValuation) -> Result<(), OracleError> {
    if **gp.base() == *v.base {
        Ok(())
    } else {
        Err(OracleError::BaseMismatch)
    }
}

/// Replaces negated atoms by their value under `v` and returns the least
/// model of the resulting positive program.
pub fn gl_transform(gp: &GroundProgram, v: &ThreeValuation) -> Result<ThreeValuation, OracleError> {
    require_conventional(gp)?;
    check_base(gp, v)?;
    Ok(ThreeValuation {
        base: Arc::clone(gp.base()),
        values: gl_raw(gp, &v.values)?,
    })
}

/// The knowledge-least fixpoint of [`gl_transform`].
pub fn well_founded(gp: &GroundProgram) -> Result<ThreeValuation, OracleError> {
    require_conventional(gp)?;
    let start = vec![ThreeValue::Unknown; gp.base().len()];
    let values = fixpoint(start, "well_founded", |v| gl_raw(gp, v))?;
    Ok(ThreeValuation {
        base: Arc::clone(gp.base()),
        values,
    })
}

/// Iterates the Kripke–Kleene operator from the all-unknown valuation.
pub fn kripke_kleene(gp: &GroundProgram) -> Result<ThreeValuation, OracleError> {
    require_conventional(gp)?;
    let start = vec![ThreeValue::Unknown; gp.base().len()];
    let values = fixpoint(start, "kripke_kleene", |v| {
        let negated = |a: AtomId| v[a].negate();
        Ok(gp
            .base()
            .ids()
            .map(|a| {
                let bodies: Vec<ThreeValue> = gp
                    .instances(a)
                    .iter()
                    .map(|b| kleene(b, v, &negated))
                    .collect();
                if bodies.contains(&ThreeValue::True) {
                    ThreeValue::True
                } else if !bodies.is_empty() && bodies.iter().all(|&b| b == ThreeValue::False) {
                    ThreeValue::False
                } else {
                    ThreeValue::Unknown
                }
            })
            .collect())
    })?;
    Ok(ThreeValuation {
        base: Arc::clone(gp.base()),
        values,
    })
}

pub const DEFAULT_ENUMERATION_CAP: usize = 10;

/// Every three-valued stable model, by exhaustive search over `3^n`
/// valuations. Results are sorted.
pub fn enumerate_stable_models(
    gp: &GroundProgram,
    cap: usize,
) -> Result<Vec<ThreeValuation>, OracleError> {
    require_conventional(gp)?;
    let n = gp.base().len();
    if n > cap {
        return Err(OracleError::CapExceeded { atoms: n, cap });
    }
    let mut models = Vec::new();
    let mut v = vec![ThreeValue::False; n];
    loop {
        if gl_raw(gp, &v)? == v {
            models.push(ThreeValuation {
                base: Arc::clone(gp.base()),
                values: v.clone(),
            });
        }
        // odometer increment
        let mut i = 0;
        loop {
            if i == n {
                models.sort_by(|a, b| a.values.cmp(&b.values));
                return Ok(models);
            }
            v[i] = match v[i] {
                ThreeValue::False => ThreeValue::Unknown,
                ThreeValue::Unknown => ThreeValue::True,
                ThreeValue::True => ThreeValue::False,
            };
            if v[i] != ThreeValue::False {
                break;
            }
            i += 1;
        }
    }
}
