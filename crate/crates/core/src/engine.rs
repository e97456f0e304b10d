//! The parameterized consequence operators and their extremal fixpoints.
//!
//! `psi(v, w)` gives every rule head the contrajoin value of its body under
//! `v △ w` and every other atom the default `alpha`. `psi_prime(w)` closes
//! `psi(·, w)` starting from the constant `alpha` valuation. The α-fixed
//! models are the fixpoints of `psi_prime`; this module computes the
//! knowledge-least and -greatest of them (`fix_u`, `fix_i`) and the two
//! extreme oscillation points under the truth ordering (`fix_f`, `fix_t`).
//!
//! Every iteration runs over a finite base on a four-element lattice along a
//! monotone chain, so each loop is bounded by `2·|base| + 1` steps. Hitting
//! the bound is reported as [`EngineError::IterationBound`] and means the
//! operator was not monotone, which is a bug.

use std::fmt;

use thiserror::Error;

use crate::bilattice::TruthValue;
use crate::grounder::GroundProgram;
use crate::valuation::{contrajoin, Valuation, ValuationError};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum EngineError {
    #[error(transparent)]
    Valuation(#[from] ValuationError),
    #[error("{operation} did not converge within {bound} steps")]
    IterationBound {
        operation: &'static str,
        bound: usize,
    },
    #[error("internal invariant violated: {0}")]
    Invariant(String),
}

type Values = Vec<TruthValue>;

fn check_base(gp: &GroundProgram, v: &Valuation) -> Result<(), EngineError> {
    if **gp.base() == **v.base() {
        Ok(())
    } else {
        Err(ValuationError::BaseMismatch.into())
    }
}

fn to_valuation(gp: &GroundProgram, values: Values) -> Valuation {
    Valuation::from_values(gp.base(), values).expect("engine keeps one value per base atom")
}

fn iteration_bound(gp: &GroundProgram) -> usize {
    2 * gp.base().len() + 1
}

fn psi_raw(gp: &GroundProgram, alpha: TruthValue, v: &[TruthValue], w: &[TruthValue]) -> Values {
    gp.base()
        .ids()
        .map(|a| match gp.rule(a) {
            Some(body) => contrajoin(v, w, body),
            None => alpha,
        })
        .collect()
}

/// Repeats `step` from `start` until it returns its input.
fn iterate(
    start: Values,
    bound: usize,
    operation: &'static str,
    steps: &mut usize,
    mut step: impl FnMut(&[TruthValue]) -> Result<Values, EngineError>,
) -> Result<Values, EngineError> {
    let mut current = start;
    for _ in 0..bound {
        *steps += 1;
        let next = step(&current)?;
        if next == current {
            return Ok(current);
        }
        current = next;
    }
    Err(EngineError::IterationBound { operation, bound })
}

fn psi_prime_raw(
    gp: &GroundProgram,
    alpha: TruthValue,
    w: &[TruthValue],
    steps: &mut usize,
) -> Result<Values, EngineError> {
    let start = vec![alpha; gp.base().len()];
    iterate(start, iteration_bound(gp), "psi_prime", steps, |a| {
        Ok(psi_raw(gp, alpha, a, w))
    })
}

/// One application of the two-argument operator.
pub fn psi(
    gp: &GroundProgram,
    alpha: TruthValue,
    v: &Valuation,
    w: &Valuation,
) -> Result<Valuation, EngineError> {
    check_base(gp, v)?;
    check_base(gp, w)?;
    Ok(to_valuation(gp, psi_raw(gp, alpha, v.values(), w.values())))
}

/// The fixpoint of `x ↦ psi(x, w)` reached from the constant `alpha`
/// valuation: least under ≤t for `F`, greatest under ≤t for `T`, least under
/// ≤k for `U`, greatest under ≤k for `I`.
pub fn psi_prime(
    gp: &GroundProgram,
    alpha: TruthValue,
    w: &Valuation,
) -> Result<Valuation, EngineError> {
    check_base(gp, w)?;
    let mut steps = 0;
    Ok(to_valuation(
        gp,
        psi_prime_raw(gp, alpha, w.values(), &mut steps)?,
    ))
}

/// Step tallies collected while computing a [`SemanticsResult`].
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct IterationCounts {
    pub fix_u_outer: usize,
    pub fix_i_outer: usize,
    pub fix_f_outer: usize,
    pub fix_t_outer: usize,
    /// `psi` applications across every inner `psi_prime` closure.
    pub inner: usize,
}

struct Solver<'a> {
    gp: &'a GroundProgram,
    alpha: TruthValue,
    counts: IterationCounts,
}

impl<'a> Solver<'a> {
    fn new(gp: &'a GroundProgram, alpha: TruthValue) -> Self {
        Self {
            gp,
            alpha,
            counts: IterationCounts::default(),
        }
    }

    fn psi_prime(&mut self, w: &[TruthValue]) -> Result<Values, EngineError> {
        psi_prime_raw(self.gp, self.alpha, w, &mut self.counts.inner)
    }

    fn knowledge_extreme(&mut self, start: TruthValue) -> Result<(Values, usize), EngineError> {
        let mut outer = 0;
        let bound = iteration_bound(self.gp);
        let init = vec![start; self.gp.base().len()];
        let op = if start == TruthValue::Unknown {
            "fix_u"
        } else {
            "fix_i"
        };
        let v = iterate(init, bound, op, &mut outer, |v| self.psi_prime(v))?;
        Ok((v, outer))
    }

    fn fix_u(&mut self) -> Result<Values, EngineError> {
        let (v, n) = self.knowledge_extreme(TruthValue::Unknown)?;
        self.counts.fix_u_outer = n;
        Ok(v)
    }

    fn fix_i(&mut self) -> Result<Values, EngineError> {
        let (v, n) = self.knowledge_extreme(TruthValue::Inconsistent)?;
        self.counts.fix_i_outer = n;
        Ok(v)
    }

    /// Extreme fixpoints of `psi_prime ∘ psi_prime` under ≤t, then a check
    /// that `psi_prime` swaps them.
    fn fix_f_t(&mut self) -> Result<(Values, Values), EngineError> {
        let bound = iteration_bound(self.gp);
        let n = self.gp.base().len();
        let mut outer = 0;
        let low = iterate(
            vec![TruthValue::False; n],
            bound,
            "fix_f",
            &mut outer,
            |v| {
                let once = self.psi_prime(v)?;
                self.psi_prime(&once)
            },
        )?;
        self.counts.fix_f_outer = outer;
        outer = 0;
        let high = iterate(vec![TruthValue::True; n], bound, "fix_t", &mut outer, |v| {
            let once = self.psi_prime(v)?;
            self.psi_prime(&once)
        })?;
        self.counts.fix_t_outer = outer;

        if self.psi_prime(&low)? != high || self.psi_prime(&high)? != low {
            return Err(EngineError::Invariant(format!(
                "psi_prime does not oscillate between fix_f and fix_t for alpha={}",
                self.alpha
            )));
        }
        Ok((low, high))
    }
}

/// The knowledge-least α-fixed model: the α-fixed semantics.
pub fn fix_u(gp: &GroundProgram, alpha: TruthValue) -> Result<Valuation, EngineError> {
    Ok(to_valuation(gp, Solver::new(gp, alpha).fix_u()?))
}

/// The knowledge-greatest α-fixed model.
pub fn fix_i(gp: &GroundProgram, alpha: TruthValue) -> Result<Valuation, EngineError> {
    Ok(to_valuation(gp, Solver::new(gp, alpha).fix_i()?))
}

/// The truth-least and truth-greatest oscillation points of `psi_prime`.
pub fn fix_f_t(
    gp: &GroundProgram,
    alpha: TruthValue,
) -> Result<(Valuation, Valuation), EngineError> {
    let (f, t) = Solver::new(gp, alpha).fix_f_t()?;
    Ok((to_valuation(gp, f), to_valuation(gp, t)))
}

/// True iff `v` is a fixpoint of `psi_prime`.
pub fn is_alpha_fixed_model(
    gp: &GroundProgram,
    alpha: TruthValue,
    v: &Valuation,
) -> Result<bool, EngineError> {
    Ok(psi_prime(gp, alpha, v)? == *v)
}

/// True iff `psi(v, v) = v`.
pub fn satisfies_psi(
    gp: &GroundProgram,
    alpha: TruthValue,
    v: &Valuation,
) -> Result<bool, EngineError> {
    Ok(psi(gp, alpha, v, v)? == *v)
}

/// Orientation of the rule-wise model inequality.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ModelOrientation {
    /// `v(A) ≤t v(B)` for every rule `A <- B`.
    HeadBelowBody,
    /// `v(B) ≤t v(A)` for every rule `A <- B`.
    BodyBelowHead,
}

/// Checks the model inequality on every merged rule, evaluating bodies under
/// `v` alone.
pub fn is_model(
    gp: &GroundProgram,
    v: &Valuation,
    orientation: ModelOrientation,
) -> Result<bool, EngineError> {
    check_base(gp, v)?;
    Ok(gp.rules().all(|(head, body)| {
        let (h, b) = (v.get(head), contrajoin(v.values(), v.values(), body));
        match orientation {
            ModelOrientation::HeadBelowBody => h.leq_t(b),
            ModelOrientation::BodyBelowHead => b.leq_t(h),
        }
    }))
}

/// All four extremal fixpoints for one `alpha`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SemanticsResult {
    pub alpha: TruthValue,
    pub fix_u: Valuation,
    pub fix_i: Valuation,
    pub fix_f: Valuation,
    pub fix_t: Valuation,
    pub counts: IterationCounts,
}

impl SemanticsResult {
    /// Computes all four fixpoints and verifies the identities tying them
    /// together; any violation is returned as [`EngineError::Invariant`].
    pub fn compute(gp: &GroundProgram, alpha: TruthValue) -> Result<Self, EngineError> {
        let mut solver = Solver::new(gp, alpha);
        let fix_u = solver.fix_u()?;
        let fix_i = solver.fix_i()?;
        let (fix_f, fix_t) = solver.fix_f_t()?;
        let result = Self {
            alpha,
            fix_u: to_valuation(gp, fix_u),
            fix_i: to_valuation(gp, fix_i),
            fix_f: to_valuation(gp, fix_f),
            fix_t: to_valuation(gp, fix_t),
            counts: solver.counts,
        };
        let violations = result.violations();
        if violations.is_empty() {
            Ok(result)
        } else {
            Err(EngineError::Invariant(violations.join("; ")))
        }
    }

    /// Which of the ordering and identity checks fail, by name.
    pub fn violations(&self) -> Vec<String> {
        let mut out = Vec::new();
        let mut require = |ok: Result<bool, ValuationError>, what: &str| {
            if ok != Ok(true) {
                out.push(format!("{what} (alpha={})", self.alpha));
            }
        };
        require(self.fix_u.leq_k(&self.fix_i), "fix_u ≤k fix_i");
        require(self.fix_f.leq_t(&self.fix_t), "fix_f ≤t fix_t");
        require(
            self.fix_f.consensus(&self.fix_t).map(|x| x == self.fix_u),
            "fix_u = fix_f ⊗ fix_t",
        );
        require(
            self.fix_f.gullibility(&self.fix_t).map(|x| x == self.fix_i),
            "fix_i = fix_f ⊕ fix_t",
        );
        require(
            self.fix_u.and(&self.fix_i).map(|x| x == self.fix_f),
            "fix_f = fix_u ∧ fix_i",
        );
        require(
            self.fix_u.or(&self.fix_i).map(|x| x == self.fix_t),
            "fix_t = fix_u ∨ fix_i",
        );
        out
    }
}

/// `fix_u(F) ⊗ fix_u(T)` together with its model status.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ConsensusReport {
    pub valuation: Valuation,
    pub fixed_under_false: bool,
    pub fixed_under_true: bool,
    pub model_head_below_body: bool,
    pub model_body_below_head: bool,
}

pub fn consensus_semantics(gp: &GroundProgram) -> Result<ConsensusReport, EngineError> {
    let pessimistic = fix_u(gp, TruthValue::False)?;
    let optimistic = fix_u(gp, TruthValue::True)?;
    let valuation = pessimistic.consensus(&optimistic)?;
    Ok(ConsensusReport {
        fixed_under_false: is_alpha_fixed_model(gp, TruthValue::False, &valuation)?,
        fixed_under_true: is_alpha_fixed_model(gp, TruthValue::True, &valuation)?,
        model_head_below_body: is_model(gp, &valuation, ModelOrientation::HeadBelowBody)?,
        model_body_below_head: is_model(gp, &valuation, ModelOrientation::BodyBelowHead)?,
        valuation,
    })
}

/// A semantics compared by [`compare_semantics`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum SemanticsLabel {
    FixU(TruthValue),
    Consensus,
}

impl fmt::Display for SemanticsLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SemanticsLabel::FixU(a) => write!(f, "fixU^{a}"),
            SemanticsLabel::Consensus => f.write_str("consensus"),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Ordering {
    Truth,
    Knowledge,
}

impl fmt::Display for Ordering {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Ordering::Truth => "≤t",
            Ordering::Knowledge => "≤k",
        })
    }
}

/// `lower ordering upper` holds between two compared semantics.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Relation {
    pub lower: SemanticsLabel,
    pub ordering: Ordering,
    pub upper: SemanticsLabel,
}

impl fmt::Display for Relation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} {} {}", self.lower, self.ordering, self.upper)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ComparisonReport {
    /// One full result per alpha, in `F, T, U, I` order.
    pub per_alpha: Vec<SemanticsResult>,
    pub consensus: ConsensusReport,
    /// Every ordered pair of distinct labels whose valuations are related.
    pub relations: Vec<Relation>,
    /// `fixU^U ≤k fixU^F` and `fixU^U ≤k fixU^T`.
    pub skeptical_below_both: bool,
    /// `fixU^U ≤k fixU^F ⊗ fixU^T`.
    pub skeptical_below_consensus: bool,
    /// `fixU^U = fixU^F ⊗ fixU^T`; expected whenever the program is positive.
    pub skeptical_equals_consensus: bool,
}

impl ComparisonReport {
    pub fn fix_u(&self, alpha: TruthValue) -> &Valuation {
        &self
            .per_alpha
            .iter()
            .find(|r| r.alpha == alpha)
            .expect("all four alphas are computed")
            .fix_u
    }

    pub fn valuation(&self, label: SemanticsLabel) -> &Valuation {
        match label {
            SemanticsLabel::FixU(a) => self.fix_u(a),
            SemanticsLabel::Consensus => &self.consensus.valuation,
        }
    }

    pub fn holds(&self, lower: SemanticsLabel, ordering: Ordering, upper: SemanticsLabel) -> bool {
        self.relations.contains(&Relation {
            lower,
            ordering,
            upper,
        })
    }
}

/// Computes `fix_u` under every alpha plus the consensus semantics and
/// relates them. Fails with [`EngineError::Invariant`] if the skeptical
/// semantics is not knowledge-below the pessimistic, optimistic and
/// consensus semantics, or if a positive program breaks the consensus
/// equality.
pub fn compare_semantics(gp: &GroundProgram) -> Result<ComparisonReport, EngineError> {
    let per_alpha = std::thread::scope(|s| {
        let handles: Vec<_> = TruthValue::ALL
            .iter()
            .map(|&alpha| s.spawn(move || SemanticsResult::compute(gp, alpha)))
            .collect();
        handles
            .into_iter()
            .map(|h| h.join().expect("semantics worker panicked"))
            .collect::<Result<Vec<_>, _>>()
    })?;
    let consensus = consensus_semantics(gp)?;

    let mut report = ComparisonReport {
        per_alpha,
        consensus,
        relations: Vec::new(),
        skeptical_below_both: false,
        skeptical_below_consensus: false,
        skeptical_equals_consensus: false,
    };

    let labels: Vec<SemanticsLabel> = TruthValue::ALL
        .iter()
        .map(|&a| SemanticsLabel::FixU(a))
        .chain([SemanticsLabel::Consensus])
        .collect();
    let mut relations = Vec::new();
    for &lower in &labels {
        for &upper in &labels {
            if lower == upper {
                continue;
            }
            let (l, u) = (report.valuation(lower), report.valuation(upper));
            if l.leq_k(u)? {
                relations.push(Relation {
                    lower,
                    ordering: Ordering::Knowledge,
                    upper,
                });
            }
            if l.leq_t(u)? {
                relations.push(Relation {
                    lower,
                    ordering: Ordering::Truth,
                    upper,
                });
            }
        }
    }
    report.relations = relations;

    let skeptical = SemanticsLabel::FixU(TruthValue::Unknown);
    report.skeptical_below_both = report.holds(
        skeptical,
        Ordering::Knowledge,
        SemanticsLabel::FixU(TruthValue::False),
    ) && report.holds(
        skeptical,
        Ordering::Knowledge,
        SemanticsLabel::FixU(TruthValue::True),
    );
    report.skeptical_below_consensus =
        report.holds(skeptical, Ordering::Knowledge, SemanticsLabel::Consensus);
    report.skeptical_equals_consensus =
        *report.fix_u(TruthValue::Unknown) == report.consensus.valuation;

    let mut violations = Vec::new();
    if !report.skeptical_below_both {
        violations.push("fixU^U is not ≤k both fixU^F and fixU^T");
    }
    if !report.skeptical_below_consensus {
        violations.push("fixU^U is not ≤k fixU^F ⊗ fixU^T");
    }
    if gp.is_positive() && !report.skeptical_equals_consensus {
        violations.push("positive program with fixU^U ≠ fixU^F ⊗ fixU^T");
    }
    if violations.is_empty() {
        Ok(report)
    } else {
        Err(EngineError::Invariant(violations.join("; ")))
    }
}
