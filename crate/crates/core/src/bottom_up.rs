//! The α-fixed semantics computed on pairs of atom sets.
//!
//! This is a second, deliberately separate route to `fix_u`: it never builds
//! a [`Valuation`](crate::valuation::Valuation) and evaluates bodies through
//! [`pseudo_eval`] on `(Iter_True, Iter_False, Res_True, Res_False)`.

use std::collections::BTreeSet;

use crate::bilattice::TruthValue;
use crate::grounder::{AtomId, GroundProgram};
use crate::valuation::{pseudo_eval, Interpretation, PseudoInterpretation};

type Set = BTreeSet<AtomId>;

/// Initial iteration sets and the sets forced on non-head atoms.
struct Seeds {
    init_true: Set,
    init_false: Set,
    not_head_true: Set,
    not_head_false: Set,
}

fn seeds(gp: &GroundProgram, alpha: TruthValue) -> Seeds {
    let base: Set = gp.base().ids().collect();
    let not_head: Set = gp.not_heads().into_iter().collect();
    let (t, f) = match alpha {
        TruthValue::True => (true, false),
        TruthValue::False => (false, true),
        TruthValue::Inconsistent => (true, true),
        TruthValue::Unknown => (false, false),
    };
    let pick = |on: bool, s: &Set| if on { s.clone() } else { Set::new() };
    Seeds {
        init_true: pick(t, &base),
        init_false: pick(f, &base),
        not_head_true: pick(t, &not_head),
        not_head_false: pick(f, &not_head),
    }
}

/// The α-fixed semantics of `gp` as a pair `(true atoms, false atoms)`.
pub fn alpha_fixed_semantics(gp: &GroundProgram, alpha: TruthValue) -> Interpretation {
    let s = seeds(gp, alpha);
    let mut res = Interpretation::default();
    let mut tmp_res: Option<Interpretation> = None;

    while tmp_res.as_ref() != Some(&res) {
        tmp_res = Some(res.clone());
        let mut iter = Interpretation::new(s.init_true.clone(), s.init_false.clone());
        let mut tmp_iter: Option<Interpretation> = None;

        while tmp_iter.as_ref() != Some(&iter) {
            tmp_iter = Some(iter.clone());
            let j = PseudoInterpretation {
                pos: iter.clone(),
                neg: res.clone(),
            };
            let (mut im_true, mut im_false, mut im_both) = (Set::new(), Set::new(), Set::new());
            for (head, body) in gp.rules() {
                match pseudo_eval(&j, body) {
                    TruthValue::True => im_true.insert(head),
                    TruthValue::False => im_false.insert(head),
                    TruthValue::Inconsistent => im_both.insert(head),
                    TruthValue::Unknown => false,
                };
            }
            iter.true_set = &(&im_true | &im_both) | &s.not_head_true;
            iter.false_set = &(&im_false | &im_both) | &s.not_head_false;
        }

        res.true_set.extend(iter.true_set);
        res.false_set.extend(iter.false_set);
    }
    res
}
