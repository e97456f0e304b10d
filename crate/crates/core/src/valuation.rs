//! Valuations over FOUR, contrajoin evaluation and the set-pair encodings.

use std::collections::BTreeSet;
use std::fmt;
use std::sync::Arc;

use serde_json::{Map, Value};
use thiserror::Error;

use crate::bilattice::TruthValue;
use crate::grounder::{AtomId, Base, GroundBody};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ValuationError {
    #[error("valuations are over different bases")]
    BaseMismatch,
    #[error("atom id {0} is outside the base")]
    AtomOutOfRange(AtomId),
    #[error("expected {expected} values, got {found}")]
    LengthMismatch { expected: usize, found: usize },
    #[error("line {line}: unknown atom `{atom}`")]
    UnknownAtom { line: usize, atom: String },
    #[error("missing value for atom `{0}`")]
    MissingAtom(String),
    #[error("line {line}: atom `{atom}` given twice")]
    DuplicateAtom { line: usize, atom: String },
    #[error("line {line}: bad truth value {value:?} (expected F, T, U or I)")]
    BadValue { line: usize, value: String },
    #[error("line {line}: expected `atom<TAB>value`")]
    Malformed { line: usize },
    #[error("invalid JSON valuation: {0}")]
    Json(String),
}

/// A total map from the atoms of a base to FOUR.
#[derive(Debug, Clone)]
pub struct Valuation {
    base: Arc<Base>,
    values: Vec<TruthValue>,
}

impl PartialEq for Valuation {
    fn eq(&self, other: &Self) -> bool {
        same_base(&self.base, &other.base) && self.values == other.values
    }
}

impl Eq for Valuation {}

fn same_base(a: &Arc<Base>, b: &Arc<Base>) -> bool {
    Arc::ptr_eq(a, b) || a == b
}

impl Valuation {
    /// Every atom of `base` mapped to `alpha`.
    pub fn constant(base: &Arc<Base>, alpha: TruthValue) -> Self {
        Self {
            base: Arc::clone(base),
            values: vec![alpha; base.len()],
        }
    }

    pub fn from_values(base: &Arc<Base>, values: Vec<TruthValue>) -> Result<Self, ValuationError> {
        if values.len() != base.len() {
            return Err(ValuationError::LengthMismatch {
                expected: base.len(),
                found: values.len(),
            });
        }
        Ok(Self {
            base: Arc::clone(base),
            values,
        })
    }

    pub fn base(&self) -> &Arc<Base> {
        &self.base
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn values(&self) -> &[TruthValue] {
        &self.values
    }

    /// # Panics
    /// If `atom` is outside the base.
    pub fn get(&self, atom: AtomId) -> TruthValue {
        self.values[atom]
    }

    /// Value of the atom rendered as `name`, e.g. `p(a)`.
    pub fn get_by_name(&self, name: &str) -> Option<TruthValue> {
        self.base.id_by_name(name).map(|i| self.values[i])
    }

    pub fn set(&mut self, atom: AtomId, value: TruthValue) {
        self.values[atom] = value;
    }

    pub fn iter(&self) -> impl Iterator<Item = (&crate::grounder::GroundAtom, TruthValue)> {
        self.base.atoms().iter().zip(self.values.iter().copied())
    }

    fn check(&self, other: &Self) -> Result<(), ValuationError> {
        if same_base(&self.base, &other.base) {
            Ok(())
        } else {
            Err(ValuationError::BaseMismatch)
        }
    }

    fn all(
        &self,
        other: &Self,
        f: impl Fn(TruthValue, TruthValue) -> bool,
    ) -> Result<bool, ValuationError> {
        self.check(other)?;
        Ok(self
            .values
            .iter()
            .zip(&other.values)
            .all(|(&a, &b)| f(a, b)))
    }

    fn zip(
        &self,
        other: &Self,
        f: impl Fn(TruthValue, TruthValue) -> TruthValue,
    ) -> Result<Self, ValuationError> {
        self.check(other)?;
        Ok(Self {
            base: Arc::clone(&self.base),
            values: self
                .values
                .iter()
                .zip(&other.values)
                .map(|(&a, &b)| f(a, b))
                .collect(),
        })
    }

    fn map(&self, f: impl Fn(TruthValue) -> TruthValue) -> Self {
        Self {
            base: Arc::clone(&self.base),
            values: self.values.iter().map(|&a| f(a)).collect(),
        }
    }

    pub fn leq_t(&self, other: &Self) -> Result<bool, ValuationError> {
        self.all(other, TruthValue::leq_t)
    }

    pub fn leq_k(&self, other: &Self) -> Result<bool, ValuationError> {
        self.all(other, TruthValue::leq_k)
    }

    pub fn and(&self, other: &Self) -> Result<Self, ValuationError> {
        self.zip(other, TruthValue::and)
    }

    pub fn or(&self, other: &Self) -> Result<Self, ValuationError> {
        self.zip(other, TruthValue::or)
    }

    pub fn consensus(&self, other: &Self) -> Result<Self, ValuationError> {
        self.zip(other, TruthValue::consensus)
    }

    pub fn gullibility(&self, other: &Self) -> Result<Self, ValuationError> {
        self.zip(other, TruthValue::gullibility)
    }

    pub fn negate(&self) -> Self {
        self.map(TruthValue::negate)
    }

    pub fn conflate(&self) -> Self {
        self.map(TruthValue::conflate)
    }

    /// One `atom<TAB>value` line per atom, in base order.
    pub fn to_tsv(&self) -> String {
        let mut out = String::new();
        for (atom, v) in self.iter() {
            out.push_str(&format!("{atom}\t{v}\n"));
        }
        out
    }

    /// Flat JSON object from atom text to a one-character value.
    pub fn to_json(&self) -> Value {
        let map: Map<String, Value> = self
            .iter()
            .map(|(a, v)| (a.to_string(), Value::String(v.to_string())))
            .collect();
        Value::Object(map)
    }

    /// Reads the TSV form. Blank lines and `%` comments are skipped, and any
    /// run of whitespace is accepted as the separator.
    pub fn parse_tsv(base: &Arc<Base>, text: &str) -> Result<Self, ValuationError> {
        let mut values: Vec<Option<TruthValue>> = vec![None; base.len()];
        for (i, raw) in text.lines().enumerate() {
            let line = i + 1;
            let content = raw.split('%').next().unwrap_or("").trim();
            if content.is_empty() {
                continue;
            }
            let mut fields = content.split_whitespace();
            let (Some(atom), Some(value), None) = (fields.next(), fields.next(), fields.next())
            else {
                return Err(ValuationError::Malformed { line });
            };
            let id = base
                .id_by_name(atom)
                .ok_or_else(|| ValuationError::UnknownAtom {
                    line,
                    atom: atom.into(),
                })?;
            let v = value
                .parse::<TruthValue>()
                .map_err(|_| ValuationError::BadValue {
                    line,
                    value: value.into(),
                })?;
            if values[id].replace(v).is_some() {
                return Err(ValuationError::DuplicateAtom {
                    line,
                    atom: atom.into(),
                });
            }
        }
        Self::complete(base, values)
    }

    pub fn from_json(base: &Arc<Base>, text: &str) -> Result<Self, ValuationError> {
        let value: Value =
            serde_json::from_str(text).map_err(|e| ValuationError::Json(e.to_string()))?;
        let Value::Object(map) = value else {
            return Err(ValuationError::Json("expected an object".into()));
        };
        let mut values: Vec<Option<TruthValue>> = vec![None; base.len()];
        for (atom, v) in map {
            let id = base
                .id_by_name(&atom)
                .ok_or_else(|| ValuationError::UnknownAtom {
                    line: 0,
                    atom: atom.clone(),
                })?;
            let s = v.as_str().unwrap_or_default();
            values[id] = Some(s.parse().map_err(|_| ValuationError::BadValue {
                line: 0,
                value: v.to_string(),
            })?);
        }
        Self::complete(base, values)
    }

    fn complete(base: &Arc<Base>, values: Vec<Option<TruthValue>>) -> Result<Self, ValuationError> {
        let values = values
            .into_iter()
            .enumerate()
            .map(|(i, v)| v.ok_or_else(|| ValuationError::MissingAtom(base.atom(i).to_string())))
            .collect::<Result<_, _>>()?;
        Ok(Self {
            base: Arc::clone(base),
            values,
        })
    }
}

impl fmt::Display for Valuation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("{")?;
        for (i, (a, v)) in self.iter().enumerate() {
            if i > 0 {
                f.write_str(", ")?;
            }
            write!(f, "{a}={v}")?;
        }
        f.write_str("}")
    }
}

/// Evaluates `body` under the contrajoin `v △ w`: positive atoms are read
/// from `v`, negated atoms as `¬w(atom)`.
pub fn contrajoin_eval(
    v: &Valuation,
    w: &Valuation,
    body: &GroundBody,
) -> Result<TruthValue, ValuationError> {
    v.check(w)?;
    check_atoms(body, v.len())?;
    Ok(contrajoin(&v.values, &w.values, body))
}

/// Single-valuation evaluation; negated atoms read from `v` itself.
pub fn eval(v: &Valuation, body: &GroundBody) -> Result<TruthValue, ValuationError> {
    contrajoin_eval(v, v, body)
}

fn check_atoms(body: &GroundBody, len: usize) -> Result<(), ValuationError> {
    match body {
        GroundBody::Atom(a) | GroundBody::NegAtom(a) if *a >= len => {
            Err(ValuationError::AtomOutOfRange(*a))
        }
        GroundBody::Binary(_, l, r) => {
            check_atoms(l, len)?;
            check_atoms(r, len)
        }
        _ => Ok(()),
    }
}

/// Hot path for the engine: bounds are the caller's responsibility.
pub(crate) fn contrajoin(v: &[TruthValue], w: &[TruthValue], body: &GroundBody) -> TruthValue {
    match body {
        GroundBody::Atom(a) => v[*a],
        GroundBody::NegAtom(a) => w[*a].negate(),
        GroundBody::Const(c) => *c,
        GroundBody::Binary(op, l, r) => op.apply(contrajoin(v, w, l), contrajoin(v, w, r)),
    }
}

/// A pair of atom sets: membership in `true_set` means "told true",
/// membership in `false_set` means "told false".
#[derive(Debug, Clone, Default, PartialEq, Eq, Hash)]
pub struct Interpretation {
    pub true_set: BTreeSet<AtomId>,
    pub false_set: BTreeSet<AtomId>,
}

impl Interpretation {
    pub fn new(true_set: BTreeSet<AtomId>, false_set: BTreeSet<AtomId>) -> Self {
        Self {
            true_set,
            false_set,
        }
    }

    pub fn value(&self, atom: AtomId) -> TruthValue {
        match (
            self.true_set.contains(&atom),
            self.false_set.contains(&atom),
        ) {
            (true, false) => TruthValue::True,
            (false, true) => TruthValue::False,
            (false, false) => TruthValue::Unknown,
            (true, true) => TruthValue::Inconsistent,
        }
    }
}

pub fn to_interpretation(v: &Valuation) -> Interpretation {
    let mut out = Interpretation::default();
    for (i, &x) in v.values.iter().enumerate() {
        if matches!(x, TruthValue::True | TruthValue::Inconsistent) {
            out.true_set.insert(i);
        }
        if matches!(x, TruthValue::False | TruthValue::Inconsistent) {
            out.false_set.insert(i);
        }
    }
    out
}

pub fn from_interpretation(
    base: &Arc<Base>,
    i: &Interpretation,
) -> Result<Valuation, ValuationError> {
    if let Some(&bad) = i
        .true_set
        .iter()
        .chain(&i.false_set)
        .find(|&&a| a >= base.len())
    {
        return Err(ValuationError::AtomOutOfRange(bad));
    }
    Ok(Valuation {
        base: Arc::clone(base),
        values: base.ids().map(|a| i.value(a)).collect(),
    })
}

/// `(T, F, T', F')`: positive literals read from `pos`, negated ones from `neg`.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct PseudoInterpretation {
    pub pos: Interpretation,
    pub neg: Interpretation,
}

/// Value of a ground body under a pseudo-interpretation, read straight off
/// the sets.
pub fn pseudo_eval(j: &PseudoInterpretation, body: &GroundBody) -> TruthValue {
    match body {
        GroundBody::Atom(a) => j.pos.value(*a),
        GroundBody::NegAtom(a) => j.neg.value(*a).negate(),
        GroundBody::Const(c) => *c,
        GroundBody::Binary(op, l, r) => op.apply(pseudo_eval(j, l), pseudo_eval(j, r)),
    }
}
