//! Instantiation of programs over their Herbrand universe.
//!
//! Grounding substitutes every constant for every head variable, expands `∃`
//! and `∀` into `∨`/`∧` folds over the domain, resolves equalities and
//! negated guards to truth constants, and merges all rule instances sharing a
//! head into a single body with `∨`.

use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::fmt;
use std::sync::Arc;

use crate::bilattice::TruthValue;
use crate::syntax::{self, BinOp, Formula, Program, Quantifier, Term};

#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct GroundAtom {
    pub predicate: String,
    pub args: Vec<String>,
}

impl GroundAtom {
    pub fn new(predicate: impl Into<String>, args: Vec<String>) -> Self {
        Self {
            predicate: predicate.into(),
            args,
        }
    }

    pub fn prop(predicate: impl Into<String>) -> Self {
        Self::new(predicate, Vec::new())
    }
}

impl fmt::Display for GroundAtom {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.predicate)?;
        if !self.args.is_empty() {
            write!(f, "({})", self.args.join(","))?;
        }
        Ok(())
    }
}

/// Index of an atom within a [`Base`].
pub type AtomId = usize;

/// A finite set of ground atoms, ordered by their rendered text.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Base {
    atoms: Vec<GroundAtom>,
    index: HashMap<GroundAtom, AtomId>,
}

impl Base {
    pub fn new(atoms: impl IntoIterator<Item = GroundAtom>) -> Self {
        let set: BTreeSet<GroundAtom> = atoms.into_iter().collect();
        let mut atoms: Vec<GroundAtom> = set.into_iter().collect();
        atoms.sort_by_cached_key(|a| a.to_string());
        let index = atoms
            .iter()
            .cloned()
            .enumerate()
            .map(|(i, a)| (a, i))
            .collect();
        Self { atoms, index }
    }

    pub fn len(&self) -> usize {
        self.atoms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.atoms.is_empty()
    }

    pub fn atom(&self, id: AtomId) -> &GroundAtom {
        &self.atoms[id]
    }

    pub fn id(&self, atom: &GroundAtom) -> Option<AtomId> {
        self.index.get(atom).copied()
    }

    /// Looks an atom up by its rendered form, e.g. `p(a,b)`.
    pub fn id_by_name(&self, name: &str) -> Option<AtomId> {
        self.atoms.iter().position(|a| a.to_string() == name)
    }

    pub fn atoms(&self) -> &[GroundAtom] {
        &self.atoms
    }

    pub fn ids(&self) -> std::ops::Range<AtomId> {
        0..self.atoms.len()
    }
}

/// A variable-free body: literals over base atoms, truth constants and the
/// four bilattice connectives.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum GroundBody {
    Atom(AtomId),
    NegAtom(AtomId),
    Const(TruthValue),
    Binary(BinOp, Box<GroundBody>, Box<GroundBody>),
}

impl GroundBody {
    pub fn binary(op: BinOp, l: GroundBody, r: GroundBody) -> Self {
        GroundBody::Binary(op, Box::new(l), Box::new(r))
    }

    /// Left-nested fold with `op`; `None` for an empty input.
    pub fn fold(op: BinOp, parts: impl IntoIterator<Item = GroundBody>) -> Option<GroundBody> {
        parts
            .into_iter()
            .reduce(|acc, b| GroundBody::binary(op, acc, b))
    }

    /// Value of an atom-free body.
    pub fn static_value(&self) -> Option<TruthValue> {
        match self {
            GroundBody::Atom(_) | GroundBody::NegAtom(_) => None,
            GroundBody::Const(v) => Some(*v),
            GroundBody::Binary(op, l, r) => Some(op.apply(l.static_value()?, r.static_value()?)),
        }
    }

    pub fn has_negation(&self) -> bool {
        match self {
            GroundBody::NegAtom(_) => true,
            GroundBody::Atom(_) | GroundBody::Const(_) => false,
            GroundBody::Binary(_, l, r) => l.has_negation() || r.has_negation(),
        }
    }

    /// Every atom id mentioned, positively or negatively.
    pub fn atoms(&self, out: &mut BTreeSet<AtomId>) {
        match self {
            GroundBody::Atom(a) | GroundBody::NegAtom(a) => {
                out.insert(*a);
            }
            GroundBody::Const(_) => {}
            GroundBody::Binary(_, l, r) => {
                l.atoms(out);
                r.atoms(out);
            }
        }
    }

    fn remap(self, map: &[AtomId]) -> GroundBody {
        match self {
            GroundBody::Atom(a) => GroundBody::Atom(map[a]),
            GroundBody::NegAtom(a) => GroundBody::NegAtom(map[a]),
            GroundBody::Const(v) => GroundBody::Const(v),
            GroundBody::Binary(op, l, r) => GroundBody::binary(op, l.remap(map), r.remap(map)),
        }
    }

    /// Renders the body in program syntax, resolving atom ids through `base`.
    pub fn display<'a>(&'a self, base: &'a Base) -> impl fmt::Display + 'a {
        DisplayBody { body: self, base }
    }

    /// Converts back to a source-level formula.
    pub fn to_formula(&self, base: &Base) -> Formula {
        let atom = |id: AtomId| {
            let g = base.atom(id);
            syntax::Atom::new(
                g.predicate.clone(),
                g.args.iter().map(|c| Term::Const(c.clone())).collect(),
            )
        };
        match self {
            GroundBody::Atom(a) => Formula::Atom(atom(*a)),
            GroundBody::NegAtom(a) => Formula::NegAtom(atom(*a)),
            GroundBody::Const(v) => Formula::Truth(*v),
            GroundBody::Binary(op, l, r) => {
                Formula::binary(*op, l.to_formula(base), r.to_formula(base))
            }
        }
    }
}

struct DisplayBody<'a> {
    body: &'a GroundBody,
    base: &'a Base,
}

impl fmt::Display for DisplayBody<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.body.to_formula(self.base))
    }
}

/// Which atoms make up the Herbrand base.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub enum BaseMode {
    /// Every predicate applied to every tuple of domain constants.
    Full,
    /// Only atoms occurring in some ground rule instance.
    #[default]
    Occurring,
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct GroundOptions {
    pub base: BaseMode,
    /// Added to the constants occurring in the program.
    pub extra_constants: Vec<String>,
}

/// Inst-P with one merged body per head atom.
#[derive(Debug, Clone)]
pub struct GroundProgram {
    base: Arc<Base>,
    rules: Vec<Option<GroundBody>>,
    instances: Vec<Vec<GroundBody>>,
    conventional: bool,
}

impl GroundProgram {
    /// Builds a ground program directly from per-atom rule instances.
    ///
    /// `instances[i]` holds the bodies of every rule with head `base.atom(i)`;
    /// atoms with no instances are not heads. `conventional` records whether
    /// the source avoided `⊗`, `⊕`, `∀`, `U` and `I`.
    pub fn from_instances(base: Base, instances: Vec<Vec<GroundBody>>, conventional: bool) -> Self {
        assert_eq!(
            base.len(),
            instances.len(),
            "one instance list per base atom"
        );
        let rules = instances
            .iter()
            .map(|bodies| GroundBody::fold(BinOp::Or, bodies.iter().cloned()))
            .collect();
        Self {
            base: Arc::new(base),
            rules,
            instances,
            conventional,
        }
    }

    pub fn base(&self) -> &Arc<Base> {
        &self.base
    }

    /// The merged body for `atom`, or `None` if it heads no rule.
    pub fn rule(&self, atom: AtomId) -> Option<&GroundBody> {
        self.rules[atom].as_ref()
    }

    /// The individual rule instances for `atom`, before merging.
    pub fn instances(&self, atom: AtomId) -> &[GroundBody] {
        &self.instances[atom]
    }

    /// Heads with their merged bodies, in base order.
    pub fn rules(&self) -> impl Iterator<Item = (AtomId, &GroundBody)> {
        self.rules
            .iter()
            .enumerate()
            .filter_map(|(i, r)| r.as_ref().map(|b| (i, b)))
    }

    pub fn is_head(&self, atom: AtomId) -> bool {
        self.rules[atom].is_some()
    }

    /// Base atoms that head no rule.
    pub fn not_heads(&self) -> Vec<AtomId> {
        self.base.ids().filter(|&a| !self.is_head(a)).collect()
    }

    pub fn is_conventional(&self) -> bool {
        self.conventional
    }

    /// True if no rule body contains a negated atom.
    pub fn is_positive(&self) -> bool {
        self.rules().all(|(_, b)| !b.has_negation())
    }

    /// Program text with one clause per head atom.
    pub fn render(&self) -> String {
        let mut out = String::new();
        for (head, body) in self.rules() {
            let head = self.base.atom(head);
            if *body == GroundBody::Const(TruthValue::True) {
                out.push_str(&format!("{head}.\n"));
            } else {
                out.push_str(&format!("{head} <- {}.\n", body.display(&self.base)));
            }
        }
        out
    }
}

/// All predicate/constant combinations at each predicate's arity.
pub fn herbrand_base(p: &Program, extra_constants: &[String]) -> BTreeSet<GroundAtom> {
    let domain = domain(p, extra_constants);
    let mut out = BTreeSet::new();
    for (pred, arity) in p.predicates() {
        for args in tuples(&domain, arity) {
            out.insert(GroundAtom::new(pred.clone(), args));
        }
    }
    out
}

/// Grounds with the default options: occurring base, program constants only.
pub fn ground(p: &Program) -> GroundProgram {
    ground_with(p, &GroundOptions::default())
}

pub fn ground_with(p: &Program, opts: &GroundOptions) -> GroundProgram {
    let domain = domain(p, &opts.extra_constants);
    let mut g = Grounder {
        domain: &domain,
        ids: BTreeMap::new(),
        atoms: Vec::new(),
    };

    let mut heads: Vec<(AtomId, GroundBody)> = Vec::new();
    for clause in &p.clauses {
        let mut vars: Vec<&str> = Vec::new();
        for t in &clause.head.args {
            if let Term::Var(v) = t {
                if !vars.contains(&v.as_str()) {
                    vars.push(v);
                }
            }
        }
        for assignment in tuples(&domain, vars.len()) {
            let mut env: Vec<(String, String)> =
                vars.iter().map(|v| v.to_string()).zip(assignment).collect();
            let head = g.intern(&clause.head, &env);
            let body = g.body(&clause.body, &mut env);
            heads.push((head, body));
        }
    }

    if opts.base == BaseMode::Full {
        for atom in herbrand_base(p, &opts.extra_constants) {
            g.intern_ground(atom);
        }
    }

    let base = Base::new(g.atoms.iter().cloned());
    let remap: Vec<AtomId> = g
        .atoms
        .iter()
        .map(|a| base.id(a).expect("interned atom"))
        .collect();
    let mut instances = vec![Vec::new(); base.len()];
    for (head, body) in heads {
        instances[remap[head]].push(body.remap(&remap));
    }
    GroundProgram::from_instances(base, instances, syntax::is_conventional(p, false))
}

fn domain(p: &Program, extra: &[String]) -> Vec<String> {
    let mut d = p.constants();
    d.extend(extra.iter().cloned());
    d.into_iter().collect()
}

/// Every `arity`-tuple over `domain`, in lexicographic order.
fn tuples(domain: &[String], arity: usize) -> Vec<Vec<String>> {
    let mut out = vec![Vec::new()];
    for _ in 0..arity {
        out = out
            .into_iter()
            .flat_map(|prefix| {
                domain.iter().map(move |c| {
                    let mut t = prefix.clone();
                    t.push(c.clone());
                    t
                })
            })
            .collect();
    }
    out
}

struct Grounder<'d> {
    domain: &'d [String],
    ids: BTreeMap<GroundAtom, AtomId>,
    atoms: Vec<GroundAtom>,
}

impl Grounder<'_> {
    fn intern_ground(&mut self, atom: GroundAtom) -> AtomId {
        if let Some(&id) = self.ids.get(&atom) {
            return id;
        }
        let id = self.atoms.len();
        self.ids.insert(atom.clone(), id);
        self.atoms.push(atom);
        id
    }

    fn intern(&mut self, atom: &syntax::Atom, env: &[(String, String)]) -> AtomId {
        let args = atom
            .args
            .iter()
            .map(|t| resolve(t, env).to_string())
            .collect();
        self.intern_ground(GroundAtom::new(atom.predicate.clone(), args))
    }

    fn body(&mut self, f: &Formula, env: &mut Vec<(String, String)>) -> GroundBody {
        match f {
            Formula::Atom(a) => GroundBody::Atom(self.intern(a, env)),
            Formula::NegAtom(a) => GroundBody::NegAtom(self.intern(a, env)),
            Formula::Truth(v) => GroundBody::Const(*v),
            Formula::Equal(l, r) => GroundBody::Const(if resolve(l, env) == resolve(r, env) {
                TruthValue::True
            } else {
                TruthValue::False
            }),
            Formula::NegGuard(g) => {
                let v = self
                    .body(g, env)
                    .static_value()
                    .expect("parser admits only atom-free guards under negation");
                GroundBody::Const(v.negate())
            }
            Formula::Binary(op, l, r) => {
                let l = self.body(l, env);
                GroundBody::binary(*op, l, self.body(r, env))
            }
            Formula::Quantified(q, var, body) => {
                let (op, empty) = match q {
                    Quantifier::Exists => (BinOp::Or, TruthValue::False),
                    Quantifier::Forall => (BinOp::And, TruthValue::True),
                };
                let mut parts = Vec::with_capacity(self.domain.len());
                for c in self.domain {
                    env.push((var.clone(), c.clone()));
                    parts.push(self.body(body, env));
                    env.pop();
                }
                GroundBody::fold(op, parts).unwrap_or(GroundBody::Const(empty))
            }
        }
    }
}

fn resolve<'a>(t: &'a Term, env: &'a [(String, String)]) -> &'a str {
    match t {
        Term::Const(c) => c,
        Term::Var(v) => env
            .iter()
            .rev()
            .find(|(name, _)| name == v)
            .map(|(_, c)| c.as_str())
            .expect("parser rejects free variables"),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::syntax::parse_program;

    const SUSPECT: &str = "
        charge(X) <- ~innocent(X) & suspect(X).
        free(X) <- innocent(X) & suspect(X).
        innocent(X) <- free(X).
        suspect(john).
    ";

    fn names(gp: &GroundProgram, ids: &[AtomId]) -> Vec<String> {
        ids.iter().map(|&i| gp.base().atom(i).to_string()).collect()
    }

    #[test]
    fn suspect_program_every_atom_is_a_head() {
        let gp = ground(&parse_program(SUSPECT).unwrap());
        assert_eq!(gp.base().len(), 4);
        assert_eq!(gp.rules().count(), 4);
        assert!(gp.not_heads().is_empty());
        assert_eq!(
            names(&gp, &gp.base().ids().collect::<Vec<_>>()),
            [
                "charge(john)",
                "free(john)",
                "innocent(john)",
                "suspect(john)"
            ]
        );
    }

    #[test]
    fn propositional_rule() {
        let gp = ground(&parse_program("a <- b.").unwrap());
        let a = gp.base().id_by_name("a").unwrap();
        let b = gp.base().id_by_name("b").unwrap();
        assert_eq!(gp.base().len(), 2);
        assert_eq!(gp.rule(a), Some(&GroundBody::Atom(b)));
        assert_eq!(gp.not_heads(), vec![b]);
    }

    #[test]
    fn exists_expands_to_disjunction() {
        let gp = ground_with(
            &parse_program("p <- exists X: q(X).").unwrap(),
            &GroundOptions {
                extra_constants: vec!["c1".into(), "c2".into()],
                ..Default::default()
            },
        );
        let base = gp.base();
        let p = base.id_by_name("p").unwrap();
        let q1 = base.id_by_name("q(c1)").unwrap();
        let q2 = base.id_by_name("q(c2)").unwrap();
        assert_eq!(
            gp.rule(p),
            Some(&GroundBody::binary(
                BinOp::Or,
                GroundBody::Atom(q1),
                GroundBody::Atom(q2)
            ))
        );
    }

    #[test]
    fn empty_domain_quantifiers_are_fold_identities() {
        let gp = ground(&parse_program("p <- exists X: q(X). r <- forall X: q(X).").unwrap());
        let base = gp.base();
        assert_eq!(base.len(), 2);
        assert_eq!(
            gp.rule(base.id_by_name("p").unwrap()),
            Some(&GroundBody::Const(TruthValue::False))
        );
        assert_eq!(
            gp.rule(base.id_by_name("r").unwrap()),
            Some(&GroundBody::Const(TruthValue::True))
        );
    }

    #[test]
    fn variable_clause_without_constants_grounds_away() {
        let gp = ground(&parse_program("p(X) <- q(X). r.").unwrap());
        assert_eq!(names(&gp, &gp.base().ids().collect::<Vec<_>>()), ["r"]);
    }

    #[test]
    fn equality_resolved_at_ground_time() {
        let gp = ground(&parse_program("p(X) <- X = a. p(b) <- ~(b = a).").unwrap());
        let base = gp.base();
        let pa = base.id_by_name("p(a)").unwrap();
        let pb = base.id_by_name("p(b)").unwrap();
        assert_eq!(gp.rule(pa), Some(&GroundBody::Const(TruthValue::True)));
        // p(b): instance from the first clause (#f) merged with the guard (#t)
        assert_eq!(
            gp.rule(pb),
            Some(&GroundBody::binary(
                BinOp::Or,
                GroundBody::Const(TruthValue::False),
                GroundBody::Const(TruthValue::True)
            ))
        );
        assert_eq!(gp.instances(pb).len(), 2);
    }

    #[test]
    fn quantifier_shadows_head_variable() {
        let gp = ground(&parse_program("p(X) <- exists X: q(X). q(a). q(b).").unwrap());
        let base = gp.base();
        let pa = base.id_by_name("p(a)").unwrap();
        let qa = base.id_by_name("q(a)").unwrap();
        let qb = base.id_by_name("q(b)").unwrap();
        assert_eq!(
            gp.rule(pa),
            Some(&GroundBody::binary(
                BinOp::Or,
                GroundBody::Atom(qa),
                GroundBody::Atom(qb)
            ))
        );
    }

    #[test]
    fn herbrand_base_sizes() {
        let colleague = parse_program(
            "colleague(X,Y) <- colleague(Y,X). colleague(a,b). colleague(a,c) <- #f.",
        )
        .unwrap();
        assert_eq!(herbrand_base(&colleague, &[]).len(), 9);
        let prop = parse_program("a <- b & ~c.").unwrap();
        let base: Vec<_> = herbrand_base(&prop, &[])
            .into_iter()
            .map(|a| a.to_string())
            .collect();
        assert_eq!(base, ["a", "b", "c"]);
        assert!(herbrand_base(&Program::default(), &[]).is_empty());
    }

    #[test]
    fn full_versus_occurring_base() {
        let p = parse_program("p(a) <- q(b).").unwrap();
        assert_eq!(ground(&p).base().len(), 2);
        let full = ground_with(
            &p,
            &GroundOptions {
                base: BaseMode::Full,
                ..Default::default()
            },
        );
        assert_eq!(full.base().len(), 4);
        assert_eq!(full.not_heads().len(), 3);
    }

    #[test]
    fn render_is_parseable_and_stable() {
        let gp = ground(&parse_program(SUSPECT).unwrap());
        let text = gp.render();
        assert!(text.contains("charge(john) <- ~innocent(john) & suspect(john).\n"));
        assert!(text.contains("suspect(john).\n"));
        let again = ground(&parse_program(&text).unwrap());
        assert_eq!(again.render(), text);
    }
}
