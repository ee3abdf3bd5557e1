//! Clocked, atomic and classical rewrite rules, strategies and head reduction.

use std::fmt;
use std::str::FromStr;

use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

use crate::term::{
    alpha_eq, app, substitute, Annotation, Mode, Path, PosLetter, Position, Term,
};

/// Rewrite rules.
///
/// ClockedBeta/TauLift act in plain mode, AtomicBeta/AtomicLift in atomic
/// mode; ClassicBeta is the unwitnessed beta rule and TauErase removes one
/// plain tau.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum RuleId {
    ClockedBeta,
    TauLift,
    AtomicBeta,
    AtomicLift,
    ClassicBeta,
    TauErase,
}

impl fmt::Display for RuleId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            RuleId::ClockedBeta => "ClockedBeta",
            RuleId::TauLift => "TauLift",
            RuleId::AtomicBeta => "AtomicBeta",
            RuleId::AtomicLift => "AtomicLift",
            RuleId::ClassicBeta => "ClassicBeta",
            RuleId::TauErase => "TauErase",
        };
        write!(f, "{s}")
    }
}

#[derive(Error, Debug, PartialEq, Eq)]
pub enum StepError {
    #[error("no subterm at path {0}")]
    BadPath(Path),
    #[error("rule {rule} does not match the subterm at {path}")]
    RuleMismatch { rule: RuleId, path: Path },
    #[error("rule {rule} does not apply to a {found}-mode tau at {path}")]
    ModeMismatch { rule: RuleId, path: Path, found: &'static str },
}

/// Reduction strategies for [`reduce_strategy`] and [`classic_beta_reduce`].
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum Strategy {
    LeftmostOutermost,
    RightmostInnermost,
    Random(u64),
}

impl FromStr for Strategy {
    type Err = String;

    fn from_str(s: &str) -> Result<Strategy, String> {
        match s {
            "leftmost-outermost" | "lo" => Ok(Strategy::LeftmostOutermost),
            "rightmost-innermost" | "ri" => Ok(Strategy::RightmostInnermost),
            "random" => Ok(Strategy::Random(0)),
            _ => Err(format!(
                "unknown strategy '{s}' (expected leftmost-outermost, rightmost-innermost or random)"
            )),
        }
    }
}

/// One recorded rewrite step.
#[derive(Clone, Debug, PartialEq)]
pub struct TraceStep {
    pub rule: RuleId,
    pub path: Path,
    pub contractum: Term,
}

/// A replayable sequence of rule applications starting from `start`.
#[derive(Clone, Debug, PartialEq)]
pub struct ReductionTrace {
    pub start: Term,
    pub steps: Vec<TraceStep>,
}

impl ReductionTrace {
    pub fn final_term(&self) -> &Term {
        self.steps.last().map(|s| &s.contractum).unwrap_or(&self.start)
    }

    pub fn len(&self) -> usize {
        self.steps.len()
    }

    pub fn is_empty(&self) -> bool {
        self.steps.is_empty()
    }

    /// Re-apply every step from `start`; true iff each contractum is
    /// reproduced exactly (up to alpha).
    pub fn replays(&self) -> bool {
        let mut cur = self.start.clone();
        for step in &self.steps {
            match step_at(&cur, &step.path, step.rule) {
                Ok(next) => {
                    if !alpha_eq(&next, &step.contractum) {
                        return false;
                    }
                    cur = next;
                }
                Err(_) => return false,
            }
        }
        true
    }

    /// Line-oriented text form: one step per line, `ruleId @ path : term`.
    pub fn render(&self) -> String {
        let mut out = String::new();
        for step in &self.steps {
            out.push_str(&format!(
                "{} @ {} : {}\n",
                step.rule, step.path, step.contractum
            ));
        }
        out
    }
}

pub fn subterm_at<'a>(t: &'a Term, path: &Path) -> Option<&'a Term> {
    let mut cur = t;
    for &i in &path.0 {
        cur = match (cur, i) {
            (Term::Lam(_, b), 0) => b,
            (Term::Tau(_, b), 0) => b,
            (Term::App(f, _), 0) => f,
            (Term::App(_, a), 1) => a,
            _ => return None,
        };
    }
    Some(cur)
}

pub fn replace_at(t: &Term, path: &Path, new: Term) -> Option<Term> {
    fn go(t: &Term, rest: &[usize], new: Term) -> Option<Term> {
        let Some((&i, rest)) = rest.split_first() else {
            return Some(new);
        };
        match (t, i) {
            (Term::Lam(x, b), 0) => Some(Term::Lam(x.clone(), Box::new(go(b, rest, new)?))),
            (Term::Tau(a, b), 0) => Some(Term::Tau(a.clone(), Box::new(go(b, rest, new)?))),
            (Term::App(f, a), 0) => Some(app(go(f, rest, new)?, a.as_ref().clone())),
            (Term::App(f, a), 1) => Some(app(f.as_ref().clone(), go(a, rest, new)?)),
            _ => None,
        }
    }
    go(t, &path.0, new)
}

fn contract(t: &Term, rule: RuleId, path: &Path) -> Result<Term, StepError> {
    let mismatch = || StepError::RuleMismatch { rule, path: path.clone() };
    match rule {
        RuleId::ClockedBeta | RuleId::AtomicBeta | RuleId::ClassicBeta => {
            let Term::App(f, a) = t else { return Err(mismatch()) };
            let Term::Lam(x, body) = f.as_ref() else { return Err(mismatch()) };
            let reduct = substitute(body, x, a);
            Ok(match rule {
                RuleId::ClockedBeta => Term::Tau(Annotation::Plain, Box::new(reduct)),
                RuleId::AtomicBeta => {
                    Term::Tau(Annotation::Atomic(Position::empty()), Box::new(reduct))
                }
                _ => reduct,
            })
        }
        RuleId::TauLift => {
            let Term::App(f, a) = t else { return Err(mismatch()) };
            match f.as_ref() {
                Term::Tau(Annotation::Plain, m) => Ok(Term::Tau(
                    Annotation::Plain,
                    Box::new(app(m.as_ref().clone(), a.as_ref().clone())),
                )),
                Term::Tau(Annotation::Atomic(_), _) => Err(StepError::ModeMismatch {
                    rule,
                    path: path.clone(),
                    found: "atomic",
                }),
                _ => Err(mismatch()),
            }
        }
        RuleId::AtomicLift => {
            let Term::App(f, a) = t else { return Err(mismatch()) };
            match f.as_ref() {
                Term::Tau(Annotation::Atomic(p), m) => Ok(Term::Tau(
                    Annotation::Atomic(p.prefixed(PosLetter::Left)),
                    Box::new(app(m.as_ref().clone(), a.as_ref().clone())),
                )),
                Term::Tau(Annotation::Plain, _) => Err(StepError::ModeMismatch {
                    rule,
                    path: path.clone(),
                    found: "plain",
                }),
                _ => Err(mismatch()),
            }
        }
        RuleId::TauErase => match t {
            Term::Tau(Annotation::Plain, b) => Ok(b.as_ref().clone()),
            Term::Tau(Annotation::Atomic(_), _) => Err(StepError::ModeMismatch {
                rule,
                path: path.clone(),
                found: "atomic",
            }),
            _ => Err(mismatch()),
        },
    }
}

/// Apply `rule` to the redex at `path` inside `t`.
pub fn step_at(t: &Term, path: &Path, rule: RuleId) -> Result<Term, StepError> {
    let sub = subterm_at(t, path).ok_or_else(|| StepError::BadPath(path.clone()))?;
    let contractum = contract(sub, rule, path)?;
    replace_at(t, path, contractum).ok_or_else(|| StepError::BadPath(path.clone()))
}

/// All clocked-rule redexes of `t` for the given mode, in preorder.
pub fn redexes(t: &Term, mode: Mode) -> Vec<(Path, RuleId)> {
    fn go(t: &Term, mode: Mode, path: &Path, out: &mut Vec<(Path, RuleId)>) {
        match t {
            Term::Var(_) => {}
            Term::Lam(_, b) => go(b, mode, &path.child(0), out),
            Term::Tau(_, b) => go(b, mode, &path.child(0), out),
            Term::App(f, a) => {
                match (f.as_ref(), mode) {
                    (Term::Lam(_, _), Mode::Plain) => {
                        out.push((path.clone(), RuleId::ClockedBeta))
                    }
                    (Term::Lam(_, _), Mode::Atomic) => {
                        out.push((path.clone(), RuleId::AtomicBeta))
                    }
                    (Term::Tau(Annotation::Plain, _), Mode::Plain) => {
                        out.push((path.clone(), RuleId::TauLift))
                    }
                    (Term::Tau(Annotation::Atomic(_), _), Mode::Atomic) => {
                        out.push((path.clone(), RuleId::AtomicLift))
                    }
                    _ => {}
                }
                go(f, mode, &path.child(0), out);
                go(a, mode, &path.child(1), out);
            }
        }
    }
    let mut out = Vec::new();
    go(t, mode, &Path::root(), &mut out);
    out
}

/// All classical beta redex paths of `t`, in preorder.
pub fn classic_redexes(t: &Term) -> Vec<Path> {
    fn go(t: &Term, path: &Path, out: &mut Vec<Path>) {
        match t {
            Term::Var(_) => {}
            Term::Lam(_, b) | Term::Tau(_, b) => go(b, &path.child(0), out),
            Term::App(f, a) => {
                if matches!(f.as_ref(), Term::Lam(_, _)) {
                    out.push(path.clone());
                }
                go(f, &path.child(0), out);
                go(a, &path.child(1), out);
            }
        }
    }
    let mut out = Vec::new();
    go(t, &Path::root(), &mut out);
    out
}

// Path order: lexicographic with prefixes first, so min = leftmost-outermost
// and max = rightmost-innermost.
fn pick<'a, T>(cands: &'a [T], strategy: Strategy, rng: &mut Option<ChaCha8Rng>) -> &'a T {
    match strategy {
        Strategy::LeftmostOutermost => &cands[0],
        Strategy::RightmostInnermost => &cands[cands.len() - 1],
        Strategy::Random(_) => {
            let rng = rng.as_mut().expect("rng initialised for random strategy");
            &cands[rng.gen_range(0..cands.len())]
        }
    }
}

/// Reduce with the clocked rules of `mode` until no redex remains or
/// `max_steps` is reached.
pub fn reduce_strategy(
    t: &Term,
    mode: Mode,
    strategy: Strategy,
    max_steps: usize,
) -> ReductionTrace {
    let mut rng = match strategy {
        Strategy::Random(seed) => Some(ChaCha8Rng::seed_from_u64(seed)),
        _ => None,
    };
    let mut trace = ReductionTrace { start: t.clone(), steps: Vec::new() };
    let mut cur = t.clone();
    for _ in 0..max_steps {
        let cands = redexes(&cur, mode);
        if cands.is_empty() {
            break;
        }
        let (path, rule) = pick(&cands, strategy, &mut rng).clone();
        cur = step_at(&cur, &path, rule).expect("redex enumeration matches rules");
        trace.steps.push(TraceStep { rule, path, contractum: cur.clone() });
    }
    trace
}

/// Classical beta reduction (no witnesses), for cross-checks and for
/// generating reducts. Expects a tau-free term.
pub fn classic_beta_reduce(t: &Term, strategy: Strategy, max_steps: usize) -> ReductionTrace {
    let mut rng = match strategy {
        Strategy::Random(seed) => Some(ChaCha8Rng::seed_from_u64(seed)),
        _ => None,
    };
    let mut trace = ReductionTrace { start: t.clone(), steps: Vec::new() };
    let mut cur = t.clone();
    for _ in 0..max_steps {
        let cands = classic_redexes(&cur);
        if cands.is_empty() {
            break;
        }
        let path = pick(&cands, strategy, &mut rng).clone();
        cur = step_at(&cur, &path, RuleId::ClassicBeta).expect("redex enumeration matches rule");
        trace.steps.push(TraceStep { rule: RuleId::ClassicBeta, path, contractum: cur.clone() });
    }
    trace
}

/// Remove every tau node. Plain taus are erased, atomic taus drop their
/// annotation; the result is a classical lambda term.
pub fn tau_erase(t: &Term) -> Term {
    match t {
        Term::Var(_) => t.clone(),
        Term::Lam(x, b) => Term::Lam(x.clone(), Box::new(tau_erase(b))),
        Term::App(f, a) => app(tau_erase(f), tau_erase(a)),
        Term::Tau(_, b) => tau_erase(b),
    }
}

/// Outcome of head reduction to weak head normal form.
#[derive(Clone, Debug, PartialEq)]
pub enum WhnfResult {
    /// Whnf reached: `term` is an abstraction or a variable-headed spine.
    /// `tau_count` counts the plain taus stripped at the head; `atomic_anns`
    /// lists stripped atomic positions, outermost first (empty in plain mode).
    Whnf {
        tau_count: usize,
        atomic_anns: Vec<Position>,
        term: Term,
    },
    /// An alpha-equal term recurred in the head sequence; the term has no whnf.
    HeadCycle(Term),
    /// Fuel ran out before a whnf or a cycle was found.
    FuelExhausted(Term),
}

impl WhnfResult {
    pub fn whnf_term(&self) -> Option<&Term> {
        match self {
            WhnfResult::Whnf { term, .. } => Some(term),
            _ => None,
        }
    }
}

// Strip the taus on top of `t` into the counters, leaving a tau-free head.
fn strip_top(t: &mut Term, count: &mut usize, anns: &mut Vec<Position>) {
    loop {
        match t {
            Term::Tau(Annotation::Plain, b) => {
                *count += 1;
                *t = b.as_ref().clone();
            }
            Term::Tau(Annotation::Atomic(p), b) => {
                anns.push(p.clone());
                *t = b.as_ref().clone();
            }
            _ => break,
        }
    }
}

// One head step on a term without top-level taus, or None when it is a whnf.
// Lifting takes priority over beta when the function position of the head
// spine is a tau.
fn head_step(t: &Term, mode: Mode) -> Option<(Path, RuleId)> {
    let mut path = Path::root();
    let mut cur = t;
    loop {
        match cur {
            Term::App(f, _) => match f.as_ref() {
                Term::Tau(Annotation::Plain, _) => return Some((path, RuleId::TauLift)),
                Term::Tau(Annotation::Atomic(_), _) => return Some((path, RuleId::AtomicLift)),
                Term::Lam(_, _) => {
                    let rule = match mode {
                        Mode::Plain => RuleId::ClockedBeta,
                        Mode::Atomic => RuleId::AtomicBeta,
                    };
                    return Some((path, rule));
                }
                Term::App(_, _) => {
                    path = path.child(0);
                    cur = f;
                }
                Term::Var(_) => return None,
            },
            _ => return None,
        }
    }
}

/// Head reduction to whnf with tau accounting.
///
/// Cycle detection compares the current head state (after stripping the
/// accumulated top taus) with every previous state up to alpha; a recurring
/// state certifies that no whnf exists.
pub fn head_reduce_to_whnf(t: &Term, mode: Mode, fuel: usize) -> WhnfResult {
    let mut cur = t.clone();
    let mut count = 0usize;
    let mut anns: Vec<Position> = Vec::new();
    let mut seen: Vec<Term> = Vec::new();
    let mut fuel = fuel;
    loop {
        strip_top(&mut cur, &mut count, &mut anns);
        let Some((path, rule)) = head_step(&cur, mode) else {
            return WhnfResult::Whnf { tau_count: count, atomic_anns: anns, term: cur };
        };
        if seen.iter().any(|s| alpha_eq(s, &cur)) {
            return WhnfResult::HeadCycle(cur);
        }
        if fuel == 0 {
            return WhnfResult::FuelExhausted(cur);
        }
        seen.push(cur.clone());
        cur = step_at(&cur, &path, rule).expect("head step matches its rule");
        fuel -= 1;
    }
}
