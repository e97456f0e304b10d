#![allow(dead_code)]

use alphafix::grounder::{Base, GroundAtom, GroundBody, GroundProgram};
use alphafix::syntax::BinOp;
use alphafix::{ground, parse_program, TruthValue};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub const SUSPECT: &str = "
charge(X) <- ~innocent(X) & suspect(X).
free(X) <- innocent(X) & suspect(X).
innocent(X) <- free(X).
suspect(john).
";

pub const SUSPECT_ATOMS: [&str; 4] = [
    "suspect(john)",
    "innocent(john)",
    "free(john)",
    "charge(john)",
];

pub const FOUR_CLAUSE: &str = "
a <- b & c.
d <- ~b + #t.
e <- a * ~d.
b <- #t.
";

pub const EXCLUDED_MIDDLE: &str = "a <- b | ~b.";

pub const EVEN_LOOP: &str = "a <- ~b. b <- ~a.";

pub const COLLEAGUE: &str = "
colleague(X,Y) <- (colleague(Y,X) & ~(X=a & Y=c) & ~(Y=a & X=c)) | (X=a & Y=b) | (X=b & Y=a).
";

pub const COLLEAGUE_RAW: &str = "
colleague(X,Y) <- colleague(Y,X).
colleague(a,b).
colleague(a,c) <- #f.
";

pub const COLLEAGUE_COLUMNS: [&str; 6] = [
    "colleague(a,b)",
    "colleague(b,a)",
    "colleague(a,c)",
    "colleague(c,a)",
    "colleague(b,c)",
    "colleague(c,b)",
];

pub fn program(src: &str) -> GroundProgram {
    ground(&parse_program(src).expect("test program parses"))
}

pub fn row(v: &alphafix::Valuation, atoms: &[&str]) -> Vec<TruthValue> {
    atoms
        .iter()
        .map(|a| {
            v.get_by_name(a)
                .unwrap_or_else(|| panic!("{a} missing from base"))
        })
        .collect()
}

pub fn worked_examples() -> Vec<(&'static str, GroundProgram)> {
    [
        ("suspect", SUSPECT),
        ("four-clause", FOUR_CLAUSE),
        ("excluded-middle", EXCLUDED_MIDDLE),
        ("even-loop", EVEN_LOOP),
        ("colleague", COLLEAGUE),
        ("colleague-raw", COLLEAGUE_RAW),
    ]
    .into_iter()
    .map(|(name, src)| (name, program(src)))
    .collect()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Flavor {
    /// Every connective and truth constant.
    Full,
    /// `&`, `|`, literals, `#t` and `#f` only.
    Conventional,
    /// Like `Full` but without negated atoms.
    NegationFree,
}

fn random_body(rng: &mut ChaCha8Rng, n: usize, depth: u32, flavor: Flavor) -> GroundBody {
    let leaf = depth == 0 || n == 0 || rng.gen_bool(0.4);
    if leaf {
        let roll: f64 = rng.gen();
        if n > 0 && roll < 0.45 {
            return GroundBody::Atom(rng.gen_range(0..n));
        }
        if n > 0 && roll < 0.8 && flavor != Flavor::NegationFree {
            return GroundBody::NegAtom(rng.gen_range(0..n));
        }
        let consts: &[TruthValue] = match flavor {
            Flavor::Conventional => &[TruthValue::True, TruthValue::False],
            _ => &TruthValue::ALL,
        };
        return GroundBody::Const(consts[rng.gen_range(0..consts.len())]);
    }
    let ops: &[BinOp] = match flavor {
        Flavor::Conventional => &[BinOp::And, BinOp::Or],
        _ => &[BinOp::And, BinOp::Or, BinOp::Consensus, BinOp::Gullibility],
    };
    let op = ops[rng.gen_range(0..ops.len())];
    let l = random_body(rng, n, depth - 1, flavor);
    let r = random_body(rng, n, depth - 1, flavor);
    GroundBody::binary(op, l, r)
}

/// A random propositional ground program over at most `max_atoms` atoms.
pub fn random_program(rng: &mut ChaCha8Rng, max_atoms: usize, flavor: Flavor) -> GroundProgram {
    let n = rng.gen_range(0..=max_atoms);
    let base = Base::new((0..n).map(|i| GroundAtom::prop(format!("p{i}"))));
    let instances = (0..n)
        .map(|_| {
            let count = if rng.gen_bool(0.25) {
                0
            } else {
                rng.gen_range(1..=2)
            };
            (0..count).map(|_| random_body(rng, n, 3, flavor)).collect()
        })
        .collect();
    GroundProgram::from_instances(base, instances, flavor == Flavor::Conventional)
}

pub fn corpus(seed: u64, count: usize, max_atoms: usize, flavor: Flavor) -> Vec<GroundProgram> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..count)
        .map(|_| random_program(&mut rng, max_atoms, flavor))
        .collect()
}

/// Four-valued logic on `(told_true, told_false)` pairs, kept separate from
/// the library's tables.
pub mod bits {
    use alphafix::TruthValue;

    pub type B = (bool, bool);

    pub fn of(v: TruthValue) -> B {
        match v {
            TruthValue::True => (true, false),
            TruthValue::False => (false, true),
            TruthValue::Unknown => (false, false),
            TruthValue::Inconsistent => (true, true),
        }
    }

    pub fn to(b: B) -> TruthValue {
        match b {
            (true, false) => TruthValue::True,
            (false, true) => TruthValue::False,
            (false, false) => TruthValue::Unknown,
            (true, true) => TruthValue::Inconsistent,
        }
    }

    pub fn and(a: B, b: B) -> B {
        (a.0 && b.0, a.1 || b.1)
    }
    pub fn or(a: B, b: B) -> B {
        (a.0 || b.0, a.1 && b.1)
    }
    pub fn consensus(a: B, b: B) -> B {
        (a.0 && b.0, a.1 && b.1)
    }
    pub fn gullibility(a: B, b: B) -> B {
        (a.0 || b.0, a.1 || b.1)
    }
    pub fn neg(a: B) -> B {
        (a.1, a.0)
    }
    pub fn leq_t(a: B, b: B) -> bool {
        (!a.0 || b.0) && (!b.1 || a.1)
    }
    pub fn leq_k(a: B, b: B) -> bool {
        (!a.0 || b.0) && (!a.1 || b.1)
    }
}

/// Independent reference for the fixpoint structure of small programs: every
/// quantity is found by scanning all `4^n` valuations.
pub mod brute {
    use super::bits::{self, B};
    use alphafix::grounder::{GroundBody, GroundProgram};
    use alphafix::syntax::BinOp;
    use alphafix::TruthValue;

    pub type Val = Vec<B>;

    fn eval(body: &GroundBody, v: &[B], w: &[B]) -> B {
        match body {
            GroundBody::Atom(a) => v[*a],
            GroundBody::NegAtom(a) => bits::neg(w[*a]),
            GroundBody::Const(c) => bits::of(*c),
            GroundBody::Binary(op, l, r) => {
                let (x, y) = (eval(l, v, w), eval(r, v, w));
                match op {
                    BinOp::And => bits::and(x, y),
                    BinOp::Or => bits::or(x, y),
                    BinOp::Consensus => bits::consensus(x, y),
                    BinOp::Gullibility => bits::gullibility(x, y),
                }
            }
        }
    }

    pub fn leq_t(a: &[B], b: &[B]) -> bool {
        a.iter().zip(b).all(|(x, y)| bits::leq_t(*x, *y))
    }

    pub fn leq_k(a: &[B], b: &[B]) -> bool {
        a.iter().zip(b).all(|(x, y)| bits::leq_k(*x, *y))
    }

    pub fn all_valuations(n: usize) -> Vec<Val> {
        const VALUES: [B; 4] = [(false, false), (true, false), (false, true), (true, true)];
        (0..4usize.pow(n as u32))
            .map(|mut code| {
                (0..n)
                    .map(|_| {
                        let b = VALUES[code % 4];
                        code /= 4;
                        b
                    })
                    .collect()
            })
            .collect()
    }

    /// The unique element of `set` below every other one, if there is one.
    pub fn least(set: &[Val], leq: fn(&[B], &[B]) -> bool) -> Option<&Val> {
        set.iter().find(|c| set.iter().all(|o| leq(c, o)))
    }

    pub fn greatest(set: &[Val], leq: fn(&[B], &[B]) -> bool) -> Option<&Val> {
        set.iter().find(|c| set.iter().all(|o| leq(o, c)))
    }

    pub struct Oracle {
        pub n: usize,
        pub all: Vec<Val>,
        heads: Vec<Option<Vec<GroundBody>>>,
    }

    impl Oracle {
        pub fn new(gp: &GroundProgram) -> Self {
            let n = gp.base().len();
            let heads = gp
                .base()
                .ids()
                .map(|a| {
                    let inst = gp.instances(a);
                    (!inst.is_empty()).then(|| inst.to_vec())
                })
                .collect();
            Self {
                n,
                all: all_valuations(n),
                heads,
            }
        }

        /// `Ψ(v, w)` with rule instances joined by `∨`.
        pub fn psi(&self, alpha: TruthValue, v: &[B], w: &[B]) -> Val {
            self.heads
                .iter()
                .map(|h| match h {
                    None => bits::of(alpha),
                    Some(bodies) => bodies
                        .iter()
                        .map(|b| eval(b, v, w))
                        .reduce(bits::or)
                        .expect("heads have at least one instance"),
                })
                .collect()
        }

        fn head_fixed(&self, v: &[B], w: &[B]) -> bool {
            self.heads.iter().enumerate().all(|(a, h)| match h {
                None => true,
                Some(bodies) => bodies.iter().map(|b| eval(b, v, w)).reduce(bits::or) == Some(v[a]),
            })
        }

        /// `Ψ′(w)` as the appropriate extreme fixpoint of `Ψ(·, w)`, found
        /// by scanning rather than iterating. Returned in `F, T, U, I` order.
        pub fn psi_prime_all(&self, w: &[B]) -> [Val; 4] {
            let candidates: Vec<&Val> = self.all.iter().filter(|v| self.head_fixed(v, w)).collect();
            TruthValue::ALL.map(|alpha| {
                let a = bits::of(alpha);
                let fixed: Vec<Val> = candidates
                    .iter()
                    .filter(|v| {
                        self.heads
                            .iter()
                            .zip(v.iter())
                            .all(|(h, x)| h.is_some() || *x == a)
                    })
                    .map(|v| (*v).clone())
                    .collect();
                let pick = match alpha {
                    TruthValue::False => least(&fixed, leq_t),
                    TruthValue::True => greatest(&fixed, leq_t),
                    TruthValue::Unknown => least(&fixed, leq_k),
                    TruthValue::Inconsistent => greatest(&fixed, leq_k),
                };
                pick.expect("fixpoints of a monotone map form a complete lattice")
                    .clone()
            })
        }

        pub fn psi_prime(&self, alpha: TruthValue, w: &[B]) -> Val {
            let i = TruthValue::ALL.iter().position(|&x| x == alpha).unwrap();
            self.psi_prime_all(w)[i].clone()
        }

        /// `Ψ′` tabulated on every valuation, indexed like `all`, one table
        /// per alpha in `F, T, U, I` order.
        pub fn psi_prime_tables(&self) -> [Vec<Val>; 4] {
            let mut out: [Vec<Val>; 4] = Default::default();
            for w in &self.all {
                for (table, v) in out.iter_mut().zip(self.psi_prime_all(w)) {
                    table.push(v);
                }
            }
            out
        }
    }

    pub fn to_values(v: &[B]) -> Vec<TruthValue> {
        v.iter().map(|b| bits::to(*b)).collect()
    }

    pub fn from_values(v: &[TruthValue]) -> Val {
        v.iter().map(|x| bits::of(*x)).collect()
    }
}
