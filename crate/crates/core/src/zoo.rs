//! Named combinators: identity, Omega, S, delta, eta, the Bohm sequence of
//! fixed point combinators Y0, Y1, ..., and the gadget family Y^<n1,...,nk>.

use thiserror::Error;

use crate::parser::{parse, ParseError};
use crate::term::{app, apps, lam, substitute, var, Term};

#[derive(Error, Debug, PartialEq, Eq)]
pub enum ZooError {
    #[error("unknown zoo name '{0}'")]
    UnknownName(String),
    #[error("bad arity for '{name}': expected {expected}, got {got}")]
    BadArity { name: String, expected: &'static str, got: usize },
    #[error("{0}")]
    Parse(#[from] ParseError),
}

/// `I = \x. x`
pub fn identity() -> Term {
    lam("x", var("x"))
}

/// `Omega = (\x. x x)(\x. x x)`
pub fn omega_loop() -> Term {
    let w = lam("x", app(var("x"), var("x")));
    app(w.clone(), w)
}

/// `S = \a b c. a c (b c)`
pub fn s_comb() -> Term {
    lam("a", lam("b", lam("c", app(app(var("a"), var("c")), app(var("b"), var("c"))))))
}

/// `delta = \a b. b (a b)`; every fixed point combinator is a fixed point of it.
pub fn delta() -> Term {
    lam("a", lam("b", app(var("b"), app(var("a"), var("b")))))
}

/// `eta = \x f. f (x x f)`, the half of Turing's fixed point combinator.
pub fn eta() -> Term {
    lam("x", lam("f", app(var("f"), app(app(var("x"), var("x")), var("f")))))
}

/// `omega_f = \x. f (x x)` with the head variable free.
pub fn omega_f() -> Term {
    lam("x", app(var("f"), app(var("x"), var("x"))))
}

/// Left iteration: `M N^~0 = M`, `M N^~(n+1) = (M N) N^~n`.
pub fn left_iter(m: Term, n: &Term, k: usize) -> Term {
    (0..k).fold(m, |acc, _| app(acc, n.clone()))
}

/// The Bohm sequence: `Y0 = \f. omega_f omega_f` (Curry), and for n >= 1
/// `Yn = (eta eta) delta^~(n-1)` (so Y1 = eta eta is Turing's).
pub fn bohm_y(n: usize) -> Term {
    if n == 0 {
        lam("f", app(omega_f(), omega_f()))
    } else {
        left_iter(app(eta(), eta()), &delta(), n - 1)
    }
}

/// Gadget `G_n[X] = (X (S S)) S^~n I`.
pub fn gadget(x: Term, n: usize) -> Term {
    let s = s_comb();
    app(left_iter(app(x, app(s.clone(), s.clone())), &s, n), identity())
}

/// `Y^<n1,...,nk> = G_nk[... G_n1[Y0] ...]`: a family of fixed point
/// combinators sharing one Levy-Longo tree but with distinct atomic clocks.
pub fn y_vec(ns: &[usize]) -> Term {
    ns.iter().fold(bohm_y(0), |acc, &n| gadget(acc, n))
}

/// `mu x. M = Y (\x. M)` for a given fixed point combinator `y`.
pub fn mu(binder: &str, body: Term, y: &Term) -> Term {
    app(y.clone(), lam(binder, body))
}

/// A named zoo term.
pub struct ZooEntry {
    pub name: &'static str,
    pub term: Term,
    pub description: &'static str,
}

/// All fixed, parameterless zoo entries.
pub fn entries() -> Vec<ZooEntry> {
    vec![
        ZooEntry { name: "I", term: identity(), description: "identity combinator" },
        ZooEntry { name: "Omega", term: omega_loop(), description: "the looping term (\\x. x x)(\\x. x x)" },
        ZooEntry { name: "S", term: s_comb(), description: "S combinator" },
        ZooEntry { name: "delta", term: delta(), description: "\\a b. b (a b); fpcs are its fixed points" },
        ZooEntry { name: "eta", term: eta(), description: "\\x f. f (x x f)" },
        ZooEntry { name: "Y0", term: bohm_y(0), description: "Curry's fixed point combinator" },
        ZooEntry { name: "Y1", term: bohm_y(1), description: "Turing's fixed point combinator (eta eta)" },
        ZooEntry { name: "Y2", term: bohm_y(2), description: "Bohm sequence Y2 = Y1 delta" },
        ZooEntry { name: "Y3", term: bohm_y(3), description: "Bohm sequence Y3 = Y2 delta" },
        ZooEntry { name: "Y4", term: bohm_y(4), description: "Bohm sequence Y4 = Y3 delta" },
    ]
}

/// Parameterized family names accepted by [`zoo`].
pub const FAMILIES: [(&str, &str); 2] = [
    ("bohmY", "bohmY n: the Bohm sequence fixed point combinator Yn"),
    ("yVec", "yVec n1 .. nk: the gadget family Y^<n1,...,nk>"),
];

/// Look up a zoo term by name, with optional integer parameters.
pub fn zoo(name: &str, params: &[usize]) -> Result<Term, ZooError> {
    match name {
        "bohmY" => {
            if params.len() != 1 {
                return Err(ZooError::BadArity {
                    name: name.to_string(),
                    expected: "1 natural number",
                    got: params.len(),
                });
            }
            Ok(bohm_y(params[0]))
        }
        "yVec" => Ok(y_vec(params)),
        _ => {
            if !params.is_empty() {
                return Err(ZooError::BadArity {
                    name: name.to_string(),
                    expected: "0 parameters",
                    got: params.len(),
                });
            }
            entries()
                .into_iter()
                .find(|e| e.name == name)
                .map(|e| e.term)
                .ok_or_else(|| ZooError::UnknownName(name.to_string()))
        }
    }
}

/// The fixed point combinators of the zoo, for property and acceptance suites.
pub fn fpcs() -> Vec<(String, Term)> {
    let mut out: Vec<(String, Term)> = (0..=4)
        .map(|n| (format!("bohmY {n}"), bohm_y(n)))
        .collect();
    for ns in [vec![0], vec![1], vec![0, 0]] {
        let label = format!(
            "yVec {}",
            ns.iter().map(|n| n.to_string()).collect::<Vec<_>>().join(" ")
        );
        out.push((label, y_vec(&ns)));
    }
    out
}

/// Parse a CLI term: `name args @ extra-applications` expands the zoo call
/// and applies it to the atoms on the right of `@`; otherwise the source is
/// parsed by the grammar and free variables naming parameterless zoo entries
/// are replaced by their terms.
pub fn parse_with_zoo(src: &str) -> Result<Term, ZooError> {
    if let Some((left, right)) = src.split_once('@') {
        let mut toks = left.split_whitespace();
        let name = toks.next().ok_or_else(|| ZooError::UnknownName(String::new()))?;
        let params: Vec<usize> = toks
            .map(|t| {
                t.parse::<usize>().map_err(|_| ZooError::Parse(ParseError {
                    message: format!("zoo parameter '{t}' is not a natural number"),
                    line: 1,
                    col: 1,
                }))
            })
            .collect::<Result<_, _>>()?;
        let head = zoo(name, &params)?;
        let rest = parse_with_zoo(right.trim())?;
        // fold the right-hand application spine onto the zoo term
        let mut args = Vec::new();
        let mut cur = rest;
        while let Term::App(f, a) = cur {
            args.push(*a);
            cur = *f;
        }
        args.push(cur);
        args.reverse();
        Ok(apps(head, args))
    } else if let Some(t) = parse_zoo_call(src)? {
        Ok(t)
    } else {
        let t = parse(src)?;
        Ok(expand_names(&t))
    }
}

// `name n1 .. nk` as a bare zoo call (e.g. `bohmY 2`); None if the source
// does not look like one, so the grammar gets its turn.
fn parse_zoo_call(src: &str) -> Result<Option<Term>, ZooError> {
    let mut toks = src.split_whitespace();
    let Some(name) = toks.next() else { return Ok(None) };
    let known = FAMILIES.iter().any(|(n, _)| *n == name)
        || entries().iter().any(|e| e.name == name);
    if !known {
        return Ok(None);
    }
    let mut params = Vec::new();
    for t in toks {
        match t.parse::<usize>() {
            Ok(n) => params.push(n),
            Err(_) => return Ok(None),
        }
    }
    zoo(name, &params).map(Some)
}

/// Replace free occurrences of parameterless zoo names by their terms.
pub fn expand_names(t: &Term) -> Term {
    let mut out = t.clone();
    for e in entries() {
        if out.free_vars().contains(e.name) {
            out = substitute(&out, e.name, &e.term);
        }
    }
    out
}
