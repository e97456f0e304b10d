//! Belnap's four-valued logic and finite product bilattices.
//!
//! [`TruthValue`] is the hot-path carrier used by the evaluation engine. It is
//! encoded as a pair of "told true" / "told false" bits, which makes every
//! operator a couple of bit operations:
//!
//! | value | told true | told false |
//! |-------|-----------|------------|
//! | `U`   | 0         | 0          |
//! | `T`   | 1         | 0          |
//! | `F`   | 0         | 1          |
//! | `I`   | 1         | 1          |
//!
//! The [`Bilattice`] trait abstracts over carriers so the law checker in
//! [`check_bilattice_laws`] can exhaustively test both FOUR and any
//! [`ProductBilattice`] built from two finite lattices.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Deserializer, Serialize, Serializer};
use thiserror::Error;

/// An element of FOUR.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum TruthValue {
    False,
    True,
    Unknown,
    Inconsistent,
}

use TruthValue::{False as F, Inconsistent as I, True as T, Unknown as U};

impl TruthValue {
    /// All four values, in `F, T, U, I` order.
    pub const ALL: [TruthValue; 4] = [F, T, U, I];

    #[inline]
    const fn bits(self) -> (bool, bool) {
        match self {
            U => (false, false),
            T => (true, false),
            F => (false, true),
            I => (true, true),
        }
    }

    #[inline]
    const fn from_bits(told_true: bool, told_false: bool) -> Self {
        match (told_true, told_false) {
            (false, false) => U,
            (true, false) => T,
            (false, true) => F,
            (true, true) => I,
        }
    }

    /// `≤t`: more true means more "told true" and less "told false".
    #[inline]
    pub fn leq_t(self, other: Self) -> bool {
        let (t1, f1) = self.bits();
        let (t2, f2) = other.bits();
        (!t1 || t2) && (!f2 || f1)
    }

    /// `≤k`: set inclusion on the classical values each side was told.
    #[inline]
    pub fn leq_k(self, other: Self) -> bool {
        let (t1, f1) = self.bits();
        let (t2, f2) = other.bits();
        (!t1 || t2) && (!f1 || f2)
    }

    /// Truth meet `∧`.
    #[inline]
    pub fn and(self, other: Self) -> Self {
        let (t1, f1) = self.bits();
        let (t2, f2) = other.bits();
        Self::from_bits(t1 && t2, f1 || f2)
    }

    /// Truth join `∨`.
    #[inline]
    pub fn or(self, other: Self) -> Self {
        let (t1, f1) = self.bits();
        let (t2, f2) = other.bits();
        Self::from_bits(t1 || t2, f1 && f2)
    }

    /// Knowledge meet `⊗`: what both sides agree on.
    #[inline]
    pub fn consensus(self, other: Self) -> Self {
        let (t1, f1) = self.bits();
        let (t2, f2) = other.bits();
        Self::from_bits(t1 && t2, f1 && f2)
    }

    /// Knowledge join `⊕`: everything either side was told.
    #[inline]
    pub fn gullibility(self, other: Self) -> Self {
        let (t1, f1) = self.bits();
        let (t2, f2) = other.bits();
        Self::from_bits(t1 || t2, f1 || f2)
    }

    /// Truth negation: swaps `T` and `F`, fixes `U` and `I`.
    #[inline]
    pub fn negate(self) -> Self {
        let (t, f) = self.bits();
        Self::from_bits(f, t)
    }

    /// Conflation: swaps `U` and `I`, fixes `T` and `F`.
    #[inline]
    pub fn conflate(self) -> Self {
        let (t, f) = self.bits();
        Self::from_bits(!f, !t)
    }

    /// `⋁`; the empty join is `F`.
    pub fn big_or<It: IntoIterator<Item = Self>>(values: It) -> Self {
        values.into_iter().fold(F, Self::or)
    }

    /// `⋀`; the empty meet is `T`.
    pub fn big_and<It: IntoIterator<Item = Self>>(values: It) -> Self {
        values.into_iter().fold(T, Self::and)
    }

    /// `⨁`; the empty join is `U`.
    pub fn big_gullibility<It: IntoIterator<Item = Self>>(values: It) -> Self {
        values.into_iter().fold(U, Self::gullibility)
    }

    /// `⨂`; the empty meet is `I`.
    pub fn big_consensus<It: IntoIterator<Item = Self>>(values: It) -> Self {
        values.into_iter().fold(I, Self::consensus)
    }

    /// Single-character rendering: `F`, `T`, `U` or `I`.
    pub const fn as_char(self) -> char {
        match self {
            F => 'F',
            T => 'T',
            U => 'U',
            I => 'I',
        }
    }

    pub fn from_char(c: char) -> Option<Self> {
        match c {
            'F' => Some(F),
            'T' => Some(T),
            'U' => Some(U),
            'I' => Some(I),
            _ => None,
        }
    }
}

impl std::ops::Not for TruthValue {
    type Output = Self;

    fn not(self) -> Self {
        self.negate()
    }
}

impl std::ops::BitAnd for TruthValue {
    type Output = Self;

    fn bitand(self, rhs: Self) -> Self {
        self.and(rhs)
    }
}

impl std::ops::BitOr for TruthValue {
    type Output = Self;

    fn bitor(self, rhs: Self) -> Self {
        self.or(rhs)
    }
}

impl fmt::Display for TruthValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.as_char())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("invalid truth value {0:?}: expected one of F, T, U, I")]
pub struct ParseTruthValueError(pub String);

impl FromStr for TruthValue {
    type Err = ParseTruthValueError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let mut chars = s.chars();
        match (chars.next(), chars.next()) {
            (Some(c), None) => Self::from_char(c).ok_or_else(|| ParseTruthValueError(s.into())),
            _ => Err(ParseTruthValueError(s.into())),
        }
    }
}

impl Serialize for TruthValue {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        let mut buf = [0u8; 4];
        serializer.serialize_str(self.as_char().encode_utf8(&mut buf))
    }
}

impl<'de> Deserialize<'de> for TruthValue {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        let s = String::deserialize(deserializer)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

/// A finite carrier with a truth ordering and a knowledge ordering, each a
/// bounded lattice.
pub trait Bilattice {
    type Elem: Copy + Eq + fmt::Debug;

    fn elements(&self) -> Vec<Self::Elem>;
    fn leq_t(&self, a: Self::Elem, b: Self::Elem) -> bool;
    fn leq_k(&self, a: Self::Elem, b: Self::Elem) -> bool;
    fn meet_t(&self, a: Self::Elem, b: Self::Elem) -> Self::Elem;
    fn join_t(&self, a: Self::Elem, b: Self::Elem) -> Self::Elem;
    fn meet_k(&self, a: Self::Elem, b: Self::Elem) -> Self::Elem;
    fn join_k(&self, a: Self::Elem, b: Self::Elem) -> Self::Elem;
}

/// FOUR as a [`Bilattice`].
#[derive(Debug, Clone, Copy, Default)]
pub struct Four;

impl Bilattice for Four {
    type Elem = TruthValue;

    fn elements(&self) -> Vec<TruthValue> {
        TruthValue::ALL.to_vec()
    }
    fn leq_t(&self, a: TruthValue, b: TruthValue) -> bool {
        a.leq_t(b)
    }
    fn leq_k(&self, a: TruthValue, b: TruthValue) -> bool {
        a.leq_k(b)
    }
    fn meet_t(&self, a: TruthValue, b: TruthValue) -> TruthValue {
        a.and(b)
    }
    fn join_t(&self, a: TruthValue, b: TruthValue) -> TruthValue {
        a.or(b)
    }
    fn meet_k(&self, a: TruthValue, b: TruthValue) -> TruthValue {
        a.consensus(b)
    }
    fn join_k(&self, a: TruthValue, b: TruthValue) -> TruthValue {
        a.gullibility(b)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum LatticeError {
    #[error("a lattice needs at least one element")]
    Empty,
    #[error("order matrix must be {0}x{0}")]
    BadShape(usize),
    #[error("order is not reflexive at element {0}")]
    NotReflexive(usize),
    #[error("order is not antisymmetric on elements {0} and {1}")]
    NotAntisymmetric(usize, usize),
    #[error("order is not transitive on elements {0}, {1}, {2}")]
    NotTransitive(usize, usize, usize),
    #[error("elements {0} and {1} have no greatest lower bound")]
    NoMeet(usize, usize),
    #[error("elements {0} and {1} have no least upper bound")]
    NoJoin(usize, usize),
}

/// A finite lattice over the elements `0..len`, given by its order relation.
///
/// Meet and join tables are derived once at construction; a relation that is
/// not a lattice order is rejected.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FiniteLattice {
    len: usize,
    leq: Vec<bool>,
    meet: Vec<usize>,
    join: Vec<usize>,
    bottom: usize,
    top: usize,
}

impl FiniteLattice {
    /// Builds a lattice from a row-major `len × len` order matrix.
    pub fn from_matrix(leq: Vec<Vec<bool>>) -> Result<Self, LatticeError> {
        let len = leq.len();
        if len == 0 {
            return Err(LatticeError::Empty);
        }
        if leq.iter().any(|row| row.len() != len) {
            return Err(LatticeError::BadShape(len));
        }
        Self::new(len, |a, b| leq[a][b])
    }

    /// Builds a lattice on `0..len` from an order predicate.
    pub fn new(len: usize, leq: impl Fn(usize, usize) -> bool) -> Result<Self, LatticeError> {
        if len == 0 {
            return Err(LatticeError::Empty);
        }
        let table: Vec<bool> = (0..len * len).map(|i| leq(i / len, i % len)).collect();
        let le = |a: usize, b: usize| table[a * len + b];

        for a in 0..len {
            if !le(a, a) {
                return Err(LatticeError::NotReflexive(a));
            }
            for b in 0..len {
                if a != b && le(a, b) && le(b, a) {
                    return Err(LatticeError::NotAntisymmetric(a, b));
                }
                for c in 0..len {
                    if le(a, b) && le(b, c) && !le(a, c) {
                        return Err(LatticeError::NotTransitive(a, b, c));
                    }
                }
            }
        }

        let mut meet = vec![0; len * len];
        let mut join = vec![0; len * len];
        for a in 0..len {
            for b in 0..len {
                let lower: Vec<usize> = (0..len).filter(|&x| le(x, a) && le(x, b)).collect();
                let glb = lower
                    .iter()
                    .copied()
                    .find(|&x| lower.iter().all(|&y| le(y, x)))
                    .ok_or(LatticeError::NoMeet(a, b))?;
                let upper: Vec<usize> = (0..len).filter(|&x| le(a, x) && le(b, x)).collect();
                let lub = upper
                    .iter()
                    .copied()
                    .find(|&x| upper.iter().all(|&y| le(x, y)))
                    .ok_or(LatticeError::NoJoin(a, b))?;
                meet[a * len + b] = glb;
                join[a * len + b] = lub;
            }
        }

        // Pairwise meets/joins exist on a finite non-empty carrier, so folding
        // them yields the bounds.
        let bottom = (0..len).fold(0, |acc, x| meet[acc * len + x]);
        let top = (0..len).fold(0, |acc, x| join[acc * len + x]);

        Ok(Self {
            len,
            leq: table,
            meet,
            join,
            bottom,
            top,
        })
    }

    /// The chain `0 < 1 < ... < len-1`.
    pub fn chain(len: usize) -> Result<Self, LatticeError> {
        Self::new(len, |a, b| a <= b)
    }

    pub fn len(&self) -> usize {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    pub fn leq(&self, a: usize, b: usize) -> bool {
        self.leq[a * self.len + b]
    }

    pub fn meet(&self, a: usize, b: usize) -> usize {
        self.meet[a * self.len + b]
    }

    pub fn join(&self, a: usize, b: usize) -> usize {
        self.join[a * self.len + b]
    }

    pub fn bottom(&self) -> usize {
        self.bottom
    }

    pub fn top(&self) -> usize {
        self.top
    }
}

/// Ginsberg's product `L1 × L2`: the left factor measures belief, the right
/// factor doubt.
///
/// `⟨x,y⟩ ≤t ⟨z,w⟩` iff `x ≤ z` and `w ≤ y`; `⟨x,y⟩ ≤k ⟨z,w⟩` iff `x ≤ z`
/// and `y ≤ w`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ProductBilattice {
    left: FiniteLattice,
    right: FiniteLattice,
}

impl ProductBilattice {
    pub fn new(left: FiniteLattice, right: FiniteLattice) -> Self {
        Self { left, right }
    }

    pub fn left(&self) -> &FiniteLattice {
        &self.left
    }

    pub fn right(&self) -> &FiniteLattice {
        &self.right
    }

    pub fn len(&self) -> usize {
        self.left.len() * self.right.len()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    /// `⟨top, bot⟩`, the truth-top.
    pub fn top_t(&self) -> (usize, usize) {
        (self.left.top(), self.right.bottom())
    }

    /// `⟨bot, top⟩`, the truth-bottom.
    pub fn bottom_t(&self) -> (usize, usize) {
        (self.left.bottom(), self.right.top())
    }

    /// `⟨bot, bot⟩`, the knowledge-bottom.
    pub fn bottom_k(&self) -> (usize, usize) {
        (self.left.bottom(), self.right.bottom())
    }

    /// `⟨top, top⟩`, the knowledge-top.
    pub fn top_k(&self) -> (usize, usize) {
        (self.left.top(), self.right.top())
    }
}

/// Builds the product bilattice of two finite lattices.
///
/// [`FiniteLattice`] can only be constructed from a valid lattice order, so
/// the factors are already checked; see [`FiniteLattice::new`] for the
/// rejection of bad inputs.
pub fn make_product(left: FiniteLattice, right: FiniteLattice) -> ProductBilattice {
    ProductBilattice::new(left, right)
}

impl Bilattice for ProductBilattice {
    type Elem = (usize, usize);

    fn elements(&self) -> Vec<(usize, usize)> {
        let mut out = Vec::with_capacity(self.len());
        for x in 0..self.left.len() {
            for y in 0..self.right.len() {
                out.push((x, y));
            }
        }
        out
    }
    fn leq_t(&self, (x, y): (usize, usize), (z, w): (usize, usize)) -> bool {
        self.left.leq(x, z) && self.right.leq(w, y)
    }
    fn leq_k(&self, (x, y): (usize, usize), (z, w): (usize, usize)) -> bool {
        self.left.leq(x, z) && self.right.leq(y, w)
    }
    fn meet_t(&self, (x, y): (usize, usize), (z, w): (usize, usize)) -> (usize, usize) {
        (self.left.meet(x, z), self.right.join(y, w))
    }
    fn join_t(&self, (x, y): (usize, usize), (z, w): (usize, usize)) -> (usize, usize) {
        (self.left.join(x, z), self.right.meet(y, w))
    }
    fn meet_k(&self, (x, y): (usize, usize), (z, w): (usize, usize)) -> (usize, usize) {
        (self.left.meet(x, z), self.right.meet(y, w))
    }
    fn join_k(&self, (x, y): (usize, usize), (z, w): (usize, usize)) -> (usize, usize) {
        (self.left.join(x, z), self.right.join(y, w))
    }
}

/// Outcome of one law in a [`LawReport`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LawCheck {
    pub name: String,
    pub passed: bool,
    /// Rendered witness for the first failure found.
    pub counterexample: Option<String>,
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct LawReport {
    pub checks: Vec<LawCheck>,
}

impl LawReport {
    pub fn all_passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }

    pub fn failures(&self) -> impl Iterator<Item = &LawCheck> {
        self.checks.iter().filter(|c| !c.passed)
    }

    pub fn get(&self, name: &str) -> Option<&LawCheck> {
        self.checks.iter().find(|c| c.name == name)
    }

    fn push(&mut self, name: impl Into<String>, counterexample: Option<String>) {
        self.checks.push(LawCheck {
            name: name.into(),
            passed: counterexample.is_none(),
            counterexample,
        });
    }
}

impl fmt::Display for LawReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for c in &self.checks {
            let status = if c.passed { "pass" } else { "FAIL" };
            write!(f, "{status}  {}", c.name)?;
            if let Some(w) = &c.counterexample {
                write!(f, "  [{w}]")?;
            }
            writeln!(f)?;
        }
        Ok(())
    }
}

/// Binary operators of a bilattice, used to name laws.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum LatticeOp {
    MeetT,
    JoinT,
    MeetK,
    JoinK,
}

impl LatticeOp {
    pub const ALL: [LatticeOp; 4] = [
        LatticeOp::MeetT,
        LatticeOp::JoinT,
        LatticeOp::MeetK,
        LatticeOp::JoinK,
    ];

    pub fn symbol(self) -> &'static str {
        match self {
            LatticeOp::MeetT => "∧",
            LatticeOp::JoinT => "∨",
            LatticeOp::MeetK => "⊗",
            LatticeOp::JoinK => "⊕",
        }
    }

    pub fn apply<B: Bilattice>(self, b: &B, x: B::Elem, y: B::Elem) -> B::Elem {
        match self {
            LatticeOp::MeetT => b.meet_t(x, y),
            LatticeOp::JoinT => b.join_t(x, y),
            LatticeOp::MeetK => b.meet_k(x, y),
            LatticeOp::JoinK => b.join_k(x, y),
        }
    }
}

/// Name of the distributive law `x o (y p z) = (x o y) p (x o z)`.
pub fn distributive_law_name(outer: LatticeOp, inner: LatticeOp) -> String {
    let (o, p) = (outer.symbol(), inner.symbol());
    format!("distributive: x {o} (y {p} z) = (x {o} y) {p} (x {o} z)")
}

/// Name of the interlacing condition for `op` under one ordering (`"t"` or `"k"`).
pub fn interlacing_law_name(op: LatticeOp, ordering: &str) -> String {
    format!("interlacing: {} monotone under ≤{ordering}", op.symbol())
}

type OrderFn<B> = fn(&B, <B as Bilattice>::Elem, <B as Bilattice>::Elem) -> bool;

/// Exhaustively checks the bilattice axioms, the 12 distributive laws and the
/// 8 interlacing conditions on a finite carrier.
pub fn check_bilattice_laws<B: Bilattice>(b: &B) -> LawReport {
    let elems = b.elements();
    let mut report = LawReport::default();

    let orders: [(&str, OrderFn<B>); 2] = [("t", B::leq_t), ("k", B::leq_k)];

    for (name, le) in orders {
        report.push(
            format!("≤{name} is a partial order"),
            partial_order_witness(b, &elems, le),
        );
        report.push(
            format!("≤{name} has a bottom and a top"),
            bounds_witness(b, &elems, le),
        );
    }

    let bounds: [(LatticeOp, OrderFn<B>, bool); 4] = [
        (LatticeOp::MeetT, B::leq_t, true),
        (LatticeOp::JoinT, B::leq_t, false),
        (LatticeOp::MeetK, B::leq_k, true),
        (LatticeOp::JoinK, B::leq_k, false),
    ];
    for (op, le, is_meet) in bounds {
        let kind = if is_meet {
            "greatest lower"
        } else {
            "least upper"
        };
        let witness = pairs(&elems).find_map(|(x, y)| {
            let r = op.apply(b, x, y);
            let bound = if is_meet {
                le(b, r, x) && le(b, r, y)
            } else {
                le(b, x, r) && le(b, y, r)
            };
            let extremal = elems.iter().all(|&z| {
                if is_meet {
                    !(le(b, z, x) && le(b, z, y)) || le(b, z, r)
                } else {
                    !(le(b, x, z) && le(b, y, z)) || le(b, r, z)
                }
            });
            (!(bound && extremal)).then(|| format!("x={x:?}, y={y:?}, got {r:?}"))
        });
        report.push(format!("{} is the {kind} bound", op.symbol()), witness);
    }

    for outer in LatticeOp::ALL {
        for inner in LatticeOp::ALL {
            if outer == inner {
                continue;
            }
            let witness = triples(&elems).find_map(|(x, y, z)| {
                let lhs = outer.apply(b, x, inner.apply(b, y, z));
                let rhs = inner.apply(b, outer.apply(b, x, y), outer.apply(b, x, z));
                (lhs != rhs).then(|| format!("x={x:?}, y={y:?}, z={z:?}: {lhs:?} ≠ {rhs:?}"))
            });
            report.push(distributive_law_name(outer, inner), witness);
        }
    }

    for op in LatticeOp::ALL {
        for (name, le) in orders {
            let witness = pairs(&elems)
                .filter(|&(x1, y1)| le(b, x1, y1))
                .flat_map(|(x1, y1)| pairs(&elems).map(move |(x2, y2)| (x1, y1, x2, y2)))
                .find_map(|(x1, y1, x2, y2)| {
                    if !le(b, x2, y2) {
                        return None;
                    }
                    let (l, r) = (op.apply(b, x1, x2), op.apply(b, y1, y2));
                    (!le(b, l, r))
                        .then(|| format!("{x1:?} ≤ {y1:?}, {x2:?} ≤ {y2:?} but {l:?} ≰ {r:?}"))
                });
            report.push(interlacing_law_name(op, name), witness);
        }
    }

    report
}

fn pairs<E: Copy>(elems: &[E]) -> impl Iterator<Item = (E, E)> + '_ {
    elems
        .iter()
        .flat_map(move |&x| elems.iter().map(move |&y| (x, y)))
}

fn triples<E: Copy>(elems: &[E]) -> impl Iterator<Item = (E, E, E)> + '_ {
    pairs(elems).flat_map(move |(x, y)| elems.iter().map(move |&z| (x, y, z)))
}

fn partial_order_witness<B: Bilattice>(
    b: &B,
    elems: &[B::Elem],
    le: fn(&B, B::Elem, B::Elem) -> bool,
) -> Option<String> {
    if let Some(&x) = elems.iter().find(|&&x| !le(b, x, x)) {
        return Some(format!("not reflexive at {x:?}"));
    }
    if let Some((x, y)) = pairs(elems).find(|&(x, y)| x != y && le(b, x, y) && le(b, y, x)) {
        return Some(format!("not antisymmetric on {x:?}, {y:?}"));
    }
    triples(elems)
        .find(|&(x, y, z)| le(b, x, y) && le(b, y, z) && !le(b, x, z))
        .map(|(x, y, z)| format!("not transitive on {x:?}, {y:?}, {z:?}"))
}

fn bounds_witness<B: Bilattice>(
    b: &B,
    elems: &[B::Elem],
    le: fn(&B, B::Elem, B::Elem) -> bool,
) -> Option<String> {
    let has_bottom = elems.iter().any(|&x| elems.iter().all(|&y| le(b, x, y)));
    let has_top = elems.iter().any(|&x| elems.iter().all(|&y| le(b, y, x)));
    match (has_bottom, has_top) {
        (true, true) => None,
        (false, _) => Some("no bottom".into()),
        (_, false) => Some("no top".into()),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    /// ≤k and ≤t written out as the cover relations of the double Hasse
    /// diagram, closed reflexively and transitively by hand.
    fn hasse_leq_k(a: TruthValue, b: TruthValue) -> bool {
        a == b || a == U || b == I
    }

    fn hasse_leq_t(a: TruthValue, b: TruthValue) -> bool {
        a == b || a == F || b == T
    }

    #[test]
    fn orderings_match_hasse_diagram() {
        for a in TruthValue::ALL {
            for b in TruthValue::ALL {
                assert_eq!(a.leq_k(b), hasse_leq_k(a, b), "≤k {a} {b}");
                assert_eq!(a.leq_t(b), hasse_leq_t(a, b), "≤t {a} {b}");
            }
        }
        assert!(U.leq_k(I));
        assert!(!U.leq_t(I) && !I.leq_t(U));
        assert!(!F.leq_k(T) && !T.leq_k(F));
    }

    #[test]
    fn quoted_operator_facts() {
        assert_eq!(U.and(I), F);
        assert_eq!(U.or(I), T);
        assert_eq!(F.consensus(T), U);
        assert_eq!(F.gullibility(T), I);
        assert_eq!(T.negate(), F);
        assert_eq!(F.negate(), T);
        assert_eq!(U.negate(), U);
        assert_eq!(I.negate(), I);
        assert_eq!(U.conflate(), I);
        assert_eq!(I.conflate(), U);
        assert_eq!(F.conflate(), F);
        assert_eq!(T.conflate(), T);
    }

    #[test]
    fn binary_ops_are_lattice_ops() {
        for x in TruthValue::ALL {
            assert_eq!(x.and(x), x);
            assert_eq!(x.or(x), x);
            assert_eq!(x.consensus(x), x);
            assert_eq!(x.gullibility(x), x);
            for y in TruthValue::ALL {
                assert_eq!(x.and(y), y.and(x));
                assert_eq!(x.consensus(y), y.consensus(x));
                for z in TruthValue::ALL {
                    assert_eq!(x.and(y).and(z), x.and(y.and(z)));
                    assert_eq!(x.or(y).or(z), x.or(y.or(z)));
                    assert_eq!(
                        x.gullibility(y).gullibility(z),
                        x.gullibility(y.gullibility(z))
                    );
                }
            }
        }
    }

    #[test]
    fn negation_and_conflation() {
        for x in TruthValue::ALL {
            assert_eq!(x.negate().negate(), x);
            assert_eq!(x.conflate().conflate(), x);
            for y in TruthValue::ALL {
                if x.leq_t(y) {
                    assert!(y.negate().leq_t(x.negate()));
                    assert!(x.conflate().leq_t(y.conflate()));
                }
                if x.leq_k(y) {
                    assert!(x.negate().leq_k(y.negate()));
                    assert!(y.conflate().leq_k(x.conflate()));
                }
            }
        }
    }

    #[test]
    fn big_ops() {
        assert_eq!(TruthValue::big_or([F, U]), U);
        assert_eq!(TruthValue::big_or([]), F);
        assert_eq!(TruthValue::big_and([]), T);
        assert_eq!(TruthValue::big_gullibility([]), U);
        assert_eq!(TruthValue::big_consensus([]), I);
        assert_eq!(TruthValue::big_consensus([F, T, I]), U);
    }

    #[test]
    fn big_consensus_is_brute_force_glb() {
        // every subset of FOUR, glb found by scanning lower bounds
        for mask in 0u8..16 {
            let set: Vec<_> = TruthValue::ALL
                .iter()
                .enumerate()
                .filter(|(i, _)| mask & (1 << i) != 0)
                .map(|(_, &v)| v)
                .collect();
            let lower: Vec<_> = TruthValue::ALL
                .into_iter()
                .filter(|&x| set.iter().all(|&s| x.leq_k(s)))
                .collect();
            let glb = *lower
                .iter()
                .find(|&&x| lower.iter().all(|&y| y.leq_k(x)))
                .unwrap();
            assert_eq!(TruthValue::big_consensus(set.iter().copied()), glb);
        }
    }

    #[test]
    fn parse_and_render() {
        for v in TruthValue::ALL {
            assert_eq!(v.to_string().parse::<TruthValue>().unwrap(), v);
            assert_eq!(serde_json::to_string(&v).unwrap(), format!("\"{v}\""));
        }
        assert!("X".parse::<TruthValue>().is_err());
        assert!("TT".parse::<TruthValue>().is_err());
        assert!("".parse::<TruthValue>().is_err());
    }

    #[test]
    fn four_passes_all_laws() {
        let report = check_bilattice_laws(&Four);
        assert!(report.all_passed(), "{report}");
        assert_eq!(
            report
                .checks
                .iter()
                .filter(|c| c.name.starts_with("distributive"))
                .count(),
            12
        );
        assert_eq!(
            report
                .checks
                .iter()
                .filter(|c| c.name.starts_with("interlacing"))
                .count(),
            8
        );
    }

    #[test]
    fn lattice_rejects_bad_orders() {
        assert_eq!(FiniteLattice::new(0, |_, _| true), Err(LatticeError::Empty));
        assert_eq!(
            FiniteLattice::new(2, |a, b| a < b),
            Err(LatticeError::NotReflexive(0))
        );
        assert!(matches!(
            FiniteLattice::new(2, |_, _| true),
            Err(LatticeError::NotAntisymmetric(0, 1))
        ));
        // two incomparable atoms, no bottom or top
        assert!(matches!(
            FiniteLattice::new(2, |a, b| a == b),
            Err(LatticeError::NoMeet(0, 1))
        ));
        assert_eq!(
            FiniteLattice::from_matrix(vec![vec![true], vec![true]]),
            Err(LatticeError::BadShape(2))
        );
    }

    #[test]
    fn two_by_two_product_is_four() {
        let c2 = FiniteLattice::chain(2).unwrap();
        let p = make_product(c2.clone(), c2);
        let iso = |v: TruthValue| match v {
            T => p.top_t(),
            F => p.bottom_t(),
            U => p.bottom_k(),
            I => p.top_k(),
        };
        for a in TruthValue::ALL {
            for b in TruthValue::ALL {
                assert_eq!(p.leq_t(iso(a), iso(b)), a.leq_t(b));
                assert_eq!(p.leq_k(iso(a), iso(b)), a.leq_k(b));
                assert_eq!(p.meet_t(iso(a), iso(b)), iso(a.and(b)));
                assert_eq!(p.join_t(iso(a), iso(b)), iso(a.or(b)));
                assert_eq!(p.meet_k(iso(a), iso(b)), iso(a.consensus(b)));
                assert_eq!(p.join_k(iso(a), iso(b)), iso(a.gullibility(b)));
            }
        }
    }

    #[test]
    fn singleton_product_is_degenerate() {
        let c1 = FiniteLattice::chain(1).unwrap();
        let p = make_product(c1.clone(), c1);
        assert_eq!(p.elements(), vec![(0, 0)]);
        assert_eq!(p.top_t(), p.bottom_t());
        assert!(check_bilattice_laws(&p).all_passed());
    }

    #[test]
    fn three_chain_product_is_distributive() {
        let c3 = FiniteLattice::chain(3).unwrap();
        let p = make_product(c3.clone(), c3);
        assert_eq!(p.len(), 9);
        let report = check_bilattice_laws(&p);
        assert!(report.all_passed(), "{report}");
    }

    #[test]
    fn diamond_product_interlaces_but_is_not_distributive() {
        // M3: bottom 0, atoms 1 2 3, top 4
        let m3 = FiniteLattice::new(5, |a, b| a == b || a == 0 || b == 4).unwrap();
        let c2 = FiniteLattice::chain(2).unwrap();
        let p = make_product(m3, c2);
        let report = check_bilattice_laws(&p);
        assert!(report
            .failures()
            .any(|c| c.name == distributive_law_name(LatticeOp::MeetT, LatticeOp::JoinK)));
        assert!(report
            .checks
            .iter()
            .filter(|c| c.name.starts_with("interlacing"))
            .all(|c| c.passed));
    }
}
