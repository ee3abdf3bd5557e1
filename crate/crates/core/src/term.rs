//! Lambda terms extended with tau witness nodes.

use std::collections::HashSet;
use std::fmt;

use thiserror::Error;

/// One letter of an atomic clock position, drawn from {λ, L, R, τ}.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug, PartialOrd, Ord)]
pub enum PosLetter {
    Lambda,
    Left,
    Right,
    Tau,
}

impl PosLetter {
    pub fn from_char(c: char) -> Option<PosLetter> {
        match c {
            'l' => Some(PosLetter::Lambda),
            'L' => Some(PosLetter::Left),
            'R' => Some(PosLetter::Right),
            't' => Some(PosLetter::Tau),
            _ => None,
        }
    }

    pub fn as_char(self) -> char {
        match self {
            PosLetter::Lambda => 'l',
            PosLetter::Left => 'L',
            PosLetter::Right => 'R',
            PosLetter::Tau => 't',
        }
    }
}

/// A finite word over {λ, L, R, τ}; the empty word is the position ε.
#[derive(Clone, PartialEq, Eq, Hash, Debug, Default)]
pub struct Position(pub Vec<PosLetter>);

impl Position {
    pub fn empty() -> Position {
        Position(Vec::new())
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    /// `letter · self`, as in the atomic lift rule ⟨p⟩(M) N → ⟨Lp⟩(M N).
    pub fn prefixed(&self, letter: PosLetter) -> Position {
        let mut v = Vec::with_capacity(self.0.len() + 1);
        v.push(letter);
        v.extend_from_slice(&self.0);
        Position(v)
    }
}

impl fmt::Display for Position {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for l in &self.0 {
            write!(f, "{}", l.as_char())?;
        }
        Ok(())
    }
}

/// Tau annotation: a bare witness (plain mode) or a position word (atomic mode).
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub enum Annotation {
    Plain,
    Atomic(Position),
}

/// Annotation mode of a term. Plain and atomic annotations never mix.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum Mode {
    Plain,
    Atomic,
}

#[derive(Error, Debug, PartialEq, Eq)]
pub enum TermError {
    #[error("term mixes plain and atomic tau annotations")]
    MixedMode,
}

/// Lambda term with tau witness nodes.
///
/// Binders are named; alpha equality is [`alpha_eq`] and capture-avoiding
/// substitution is [`substitute`]. Each tau is one node; printing collapses
/// runs of plain taus into `#^n`.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub enum Term {
    Var(String),
    Lam(String, Box<Term>),
    App(Box<Term>, Box<Term>),
    Tau(Annotation, Box<Term>),
}

pub fn var(name: &str) -> Term {
    Term::Var(name.to_string())
}

pub fn lam(binder: &str, body: Term) -> Term {
    Term::Lam(binder.to_string(), Box::new(body))
}

pub fn app(fun: Term, arg: Term) -> Term {
    Term::App(Box::new(fun), Box::new(arg))
}

/// Left-associated application `fun a1 a2 ...`.
pub fn apps(fun: Term, args: impl IntoIterator<Item = Term>) -> Term {
    args.into_iter().fold(fun, app)
}

pub fn tau(body: Term) -> Term {
    Term::Tau(Annotation::Plain, Box::new(body))
}

/// `n` nested plain taus around `body`.
pub fn tau_n(n: usize, body: Term) -> Term {
    (0..n).fold(body, |t, _| tau(t))
}

pub fn tau_at(pos: Position, body: Term) -> Term {
    Term::Tau(Annotation::Atomic(pos), Box::new(body))
}

impl Term {
    pub fn free_vars(&self) -> HashSet<String> {
        fn go(t: &Term, bound: &mut Vec<String>, out: &mut HashSet<String>) {
            match t {
                Term::Var(v) => {
                    if !bound.iter().any(|b| b == v) {
                        out.insert(v.clone());
                    }
                }
                Term::Lam(x, b) => {
                    bound.push(x.clone());
                    go(b, bound, out);
                    bound.pop();
                }
                Term::App(f, a) => {
                    go(f, bound, out);
                    go(a, bound, out);
                }
                Term::Tau(_, b) => go(b, bound, out),
            }
        }
        let mut out = HashSet::new();
        go(self, &mut Vec::new(), &mut out);
        out
    }

    pub fn is_closed(&self) -> bool {
        self.free_vars().is_empty()
    }

    /// Number of tau nodes (any annotation) in the term.
    pub fn tau_node_count(&self) -> usize {
        match self {
            Term::Var(_) => 0,
            Term::Lam(_, b) => b.tau_node_count(),
            Term::App(f, a) => f.tau_node_count() + a.tau_node_count(),
            Term::Tau(_, b) => 1 + b.tau_node_count(),
        }
    }

    pub fn is_tau_free(&self) -> bool {
        self.tau_node_count() == 0
    }

    /// The annotation mode of the term, if it contains any taus.
    /// Errors when plain and atomic annotations occur in one term.
    pub fn ann_mode(&self) -> Result<Option<Mode>, TermError> {
        fn merge(a: Option<Mode>, b: Option<Mode>) -> Result<Option<Mode>, TermError> {
            match (a, b) {
                (None, m) | (m, None) => Ok(m),
                (Some(x), Some(y)) if x == y => Ok(Some(x)),
                _ => Err(TermError::MixedMode),
            }
        }
        match self {
            Term::Var(_) => Ok(None),
            Term::Lam(_, b) => b.ann_mode(),
            Term::App(f, a) => merge(f.ann_mode()?, a.ann_mode()?),
            Term::Tau(ann, b) => {
                let own = match ann {
                    Annotation::Plain => Mode::Plain,
                    Annotation::Atomic(_) => Mode::Atomic,
                };
                merge(Some(own), b.ann_mode()?)
            }
        }
    }

    /// Decompose an application spine: `f a1 ... an` yields `(f, [a1..an])`.
    pub fn spine(&self) -> (&Term, Vec<&Term>) {
        let mut head = self;
        let mut args = Vec::new();
        while let Term::App(f, a) = head {
            args.push(a.as_ref());
            head = f.as_ref();
        }
        args.reverse();
        (head, args)
    }
}

/// Number of free occurrences of `name` in `t`.
pub fn occurrences(t: &Term, name: &str) -> usize {
    match t {
        Term::Var(v) => usize::from(v == name),
        Term::Lam(x, b) => {
            if x == name {
                0
            } else {
                occurrences(b, name)
            }
        }
        Term::App(f, a) => occurrences(f, name) + occurrences(a, name),
        Term::Tau(_, b) => occurrences(b, name),
    }
}

/// Deterministic fresh name: strips any `_<digits>` suffix from `base` and
/// appends the smallest `_<k>` not in `avoid`, so renamings are reproducible.
pub fn fresh_name(base: &str, avoid: &HashSet<String>) -> String {
    let stem = match base.rfind('_') {
        Some(i) if base[i + 1..].chars().all(|c| c.is_ascii_digit()) && i + 1 < base.len() => {
            &base[..i]
        }
        _ => base,
    };
    for k in 1.. {
        let cand = format!("{stem}_{k}");
        if cand != base && !avoid.contains(&cand) {
            return cand;
        }
    }
    unreachable!()
}

/// Capture-avoiding substitution `t[name := value]`. Binders that would
/// capture a free variable of `value` are renamed with [`fresh_name`].
pub fn substitute(t: &Term, name: &str, value: &Term) -> Term {
    match t {
        Term::Var(v) => {
            if v == name {
                value.clone()
            } else {
                t.clone()
            }
        }
        Term::App(f, a) => app(substitute(f, name, value), substitute(a, name, value)),
        Term::Tau(ann, b) => Term::Tau(ann.clone(), Box::new(substitute(b, name, value))),
        Term::Lam(x, b) => {
            if x == name || occurrences(b, name) == 0 {
                t.clone()
            } else if value.free_vars().contains(x) {
                let mut avoid = value.free_vars();
                avoid.extend(b.free_vars());
                avoid.insert(name.to_string());
                avoid.insert(x.clone());
                let x2 = fresh_name(x, &avoid);
                let renamed = substitute(b, x, &Term::Var(x2.clone()));
                Term::Lam(x2, Box::new(substitute(&renamed, name, value)))
            } else {
                Term::Lam(x.clone(), Box::new(substitute(b, name, value)))
            }
        }
    }
}

/// Alpha equality: equal up to consistent binder renaming.
/// Tau annotations compare exactly.
pub fn alpha_eq(a: &Term, b: &Term) -> bool {
    fn go(a: &Term, b: &Term, env: &mut Vec<(String, String)>) -> bool {
        match (a, b) {
            (Term::Var(x), Term::Var(y)) => {
                for (bx, by) in env.iter().rev() {
                    let hit_x = bx == x;
                    let hit_y = by == y;
                    if hit_x || hit_y {
                        return hit_x && hit_y;
                    }
                }
                x == y
            }
            (Term::Lam(x, ba), Term::Lam(y, bb)) => {
                env.push((x.clone(), y.clone()));
                let r = go(ba, bb, env);
                env.pop();
                r
            }
            (Term::App(f1, a1), Term::App(f2, a2)) => go(f1, f2, env) && go(a1, a2, env),
            (Term::Tau(n1, b1), Term::Tau(n2, b2)) => n1 == n2 && go(b1, b2, env),
            _ => false,
        }
    }
    go(a, b, &mut Vec::new())
}

/// Path into a term tree: child indices, fun = 0 / arg = 1 for applications,
/// body = 0 for lambdas and taus. Printed dot-separated, the empty path as ε.
#[derive(Clone, PartialEq, Eq, Hash, Debug, Default, PartialOrd, Ord)]
pub struct Path(pub Vec<usize>);

impl Path {
    pub fn root() -> Path {
        Path(Vec::new())
    }

    pub fn child(&self, i: usize) -> Path {
        let mut v = self.0.clone();
        v.push(i);
        Path(v)
    }
}

impl fmt::Display for Path {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_empty() {
            return write!(f, "ε");
        }
        let parts: Vec<String> = self.0.iter().map(|i| i.to_string()).collect();
        write!(f, "{}", parts.join("."))
    }
}

// Pretty printer. Application is left-associative, lambda bodies extend
// maximally, runs of plain taus print as #^n, atomic taus as <p>(body).
impl fmt::Display for Term {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write_term(self, f)
    }
}

fn write_term(t: &Term, f: &mut fmt::Formatter<'_>) -> fmt::Result {
    match t {
        Term::Lam(_, _) => {
            write!(f, "\\")?;
            let mut cur = t;
            let mut first = true;
            while let Term::Lam(x, b) = cur {
                if !first {
                    write!(f, " ")?;
                }
                write!(f, "{x}")?;
                first = false;
                cur = b;
            }
            write!(f, ". ")?;
            write_term(cur, f)
        }
        Term::App(fun, arg) => {
            match fun.as_ref() {
                Term::App(_, _) => write_term(fun, f)?,
                other => write_atom(other, f)?,
            }
            write!(f, " ")?;
            write_atom(arg, f)
        }
        other => write_atom(other, f),
    }
}

fn write_atom(t: &Term, f: &mut fmt::Formatter<'_>) -> fmt::Result {
    match t {
        Term::Var(v) => write!(f, "{v}"),
        Term::Tau(Annotation::Plain, _) => {
            let mut n = 0usize;
            let mut cur = t;
            while let Term::Tau(Annotation::Plain, b) = cur {
                n += 1;
                cur = b;
            }
            if n == 1 {
                write!(f, "# ")?;
            } else {
                write!(f, "#^{n} ")?;
            }
            write_atom_arg(cur, f)
        }
        Term::Tau(Annotation::Atomic(p), b) => {
            write!(f, "<{p}>(")?;
            write_term(b, f)?;
            write!(f, ")")
        }
        other => {
            write!(f, "(")?;
            write_term(other, f)?;
            write!(f, ")")
        }
    }
}

fn write_atom_arg(t: &Term, f: &mut fmt::Formatter<'_>) -> fmt::Result {
    match t {
        Term::Var(v) => write!(f, "{v}"),
        other => write_atom(other, f),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn x() -> Term {
        var("x")
    }

    #[test]
    fn substitute_var() {
        assert_eq!(substitute(&x(), "x", &var("y")), var("y"));
    }

    #[test]
    fn substitute_capture_avoidance_renames() {
        // (\y. x y)[x := y] must not capture: binder is renamed.
        let t = lam("y", app(var("x"), var("y")));
        let r = substitute(&t, "x", &var("y"));
        let expected = lam("y_1", app(var("y"), var("y_1")));
        assert!(alpha_eq(&r, &expected));
        // the free y really is free afterwards
        assert!(r.free_vars().contains("y"));
    }

    #[test]
    fn substitute_omega_step() {
        // (x x)[x := \x. x x] = (\x. x x)(\x. x x)
        let w = lam("x", app(x(), x()));
        let r = substitute(&app(x(), x()), "x", &w);
        assert_eq!(r, app(w.clone(), w));
    }

    #[test]
    fn alpha_eq_basics() {
        assert!(alpha_eq(&lam("x", x()), &lam("y", var("y"))));
        assert!(!alpha_eq(&tau(x()), &x()));
        assert!(!alpha_eq(
            &tau_at(Position::empty(), x()),
            &tau_at(Position(vec![PosLetter::Left]), x())
        ));
        // shadowing
        let a = lam("x", lam("x", x()));
        let b = lam("y", lam("z", var("z")));
        assert!(alpha_eq(&a, &b));
        let c = lam("y", lam("z", var("y")));
        assert!(!alpha_eq(&a, &c));
    }

    #[test]
    fn occurrences_counts_free_only() {
        assert_eq!(occurrences(&app(x(), x()), "x"), 2);
        assert_eq!(occurrences(&lam("x", x()), "x"), 0);
        // f (x x)
        let t = app(var("f"), app(x(), x()));
        assert_eq!(occurrences(&t, "x"), 2);
    }

    #[test]
    fn occurrences_after_substitution_zero() {
        let m = app(x(), lam("y", app(x(), var("y"))));
        let r = substitute(&m, "x", &var("z"));
        assert_eq!(occurrences(&r, "x"), 0);
    }

    #[test]
    fn print_y0() {
        let omega_f = lam("x", app(var("f"), app(x(), x())));
        let y0 = lam("f", app(omega_f.clone(), omega_f));
        assert_eq!(y0.to_string(), "\\f. (\\x. f (x x)) (\\x. f (x x))");
    }

    #[test]
    fn print_tau_runs() {
        assert_eq!(tau_n(2, x()).to_string(), "#^2 x");
        assert_eq!(tau(var("y")).to_string(), "# y");
        assert_eq!(
            tau_at(Position(vec![PosLetter::Left]), app(x(), var("y"))).to_string(),
            "<L>(x y)"
        );
        assert_eq!(tau_at(Position::empty(), var("y")).to_string(), "<>(y)");
    }

    #[test]
    fn mixed_mode_detected() {
        let t = tau(tau_at(Position::empty(), x()));
        assert_eq!(t.ann_mode(), Err(TermError::MixedMode));
        assert_eq!(tau(x()).ann_mode(), Ok(Some(Mode::Plain)));
        assert_eq!(x().ann_mode(), Ok(None));
    }

    #[test]
    fn fresh_name_strips_numeric_suffix() {
        let avoid: HashSet<String> = ["x_1".to_string()].into_iter().collect();
        assert_eq!(fresh_name("x", &avoid), "x_2");
        assert_eq!(fresh_name("x_1", &avoid), "x_2");
    }
}
