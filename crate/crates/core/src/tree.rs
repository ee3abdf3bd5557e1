//! Depth-bounded clocked Levy-Longo tree approximants and the tau-deletion
//! and tau-equivalence comparisons on them.

use serde_json::{json, Value};

use crate::reduce::{head_reduce_to_whnf, WhnfResult};
use crate::term::{Mode, Path, Position, Term};

/// Per-node tau record: a witness count in plain mode, a list of positions
/// (outermost first) in atomic mode.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum TauAnn {
    Plain(usize),
    Atomic(Vec<Position>),
}

impl TauAnn {
    fn empty(mode: Mode) -> TauAnn {
        match mode {
            Mode::Plain => TauAnn::Plain(0),
            Mode::Atomic => TauAnn::Atomic(Vec::new()),
        }
    }

    pub fn render(&self) -> String {
        match self {
            TauAnn::Plain(n) => format!("τ^{n}"),
            TauAnn::Atomic(ps) => {
                let parts: Vec<String> = ps
                    .iter()
                    .map(|p| if p.is_empty() { "ε".to_string() } else { p.to_string() })
                    .collect();
                format!("τ⟨{}⟩", parts.join(","))
            }
        }
    }

    fn json(&self) -> Value {
        match self {
            TauAnn::Plain(n) => json!(n),
            TauAnn::Atomic(ps) => json!(ps.iter().map(|p| p.to_string()).collect::<Vec<_>>()),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum TreeNode {
    /// Whnf was an abstraction; one binder peeled per node.
    Abs(String, Box<CLTree>),
    /// Whnf was a variable-headed spine `y M1 ... Mm`.
    HeadApp(String, Vec<CLTree>),
    /// No whnf: certified by a head cycle, or uncertified (fuel ran out).
    Bottom { certified: bool },
    /// Depth bound reached; nothing below was computed.
    Cut,
}

/// A clocked Levy-Longo tree approximant.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CLTree {
    pub ann: TauAnn,
    pub node: TreeNode,
}

impl CLTree {
    pub fn depth(&self) -> usize {
        match &self.node {
            TreeNode::Abs(_, c) => 1 + c.depth(),
            TreeNode::HeadApp(_, cs) => 1 + cs.iter().map(|c| c.depth()).max().unwrap_or(0),
            TreeNode::Bottom { .. } => 1,
            TreeNode::Cut => 0,
        }
    }

    /// True if the approximant contains an uncertified bottom anywhere.
    pub fn has_uncertified_bottom(&self) -> bool {
        match &self.node {
            TreeNode::Bottom { certified } => !certified,
            TreeNode::Abs(_, c) => c.has_uncertified_bottom(),
            TreeNode::HeadApp(_, cs) => cs.iter().any(|c| c.has_uncertified_bottom()),
            TreeNode::Cut => false,
        }
    }

    /// Indented text rendering: `τ^n λx`, `τ^n y/k`, `τ^n ⊥`, `…` for cuts.
    pub fn render_text(&self) -> String {
        fn go(t: &CLTree, indent: usize, out: &mut String) {
            for _ in 0..indent {
                out.push_str("  ");
            }
            match &t.node {
                TreeNode::Cut => out.push_str("…\n"),
                TreeNode::Bottom { certified } => {
                    out.push_str(&t.ann.render());
                    out.push_str(if *certified { " ⊥\n" } else { " ⊥?\n" });
                }
                TreeNode::Abs(x, c) => {
                    out.push_str(&format!("{} λ{}\n", t.ann.render(), x));
                    go(c, indent + 1, out);
                }
                TreeNode::HeadApp(y, cs) => {
                    out.push_str(&format!("{} {}/{}\n", t.ann.render(), y, cs.len()));
                    for c in cs {
                        go(c, indent + 1, out);
                    }
                }
            }
        }
        let mut out = String::new();
        go(self, 0, &mut out);
        out
    }

    /// JSON export mirroring the tree fields.
    pub fn to_json(&self) -> Value {
        match &self.node {
            TreeNode::Cut => json!({ "ann": self.ann.json(), "kind": "cut", "children": [] }),
            TreeNode::Bottom { certified } => json!({
                "ann": self.ann.json(),
                "kind": "bottom",
                "certified": certified,
                "children": [],
            }),
            TreeNode::Abs(x, c) => json!({
                "ann": self.ann.json(),
                "kind": "abs",
                "binder": x,
                "children": [c.to_json()],
            }),
            TreeNode::HeadApp(y, cs) => json!({
                "ann": self.ann.json(),
                "kind": "head",
                "var": y,
                "children": cs.iter().map(|c| c.to_json()).collect::<Vec<_>>(),
            }),
        }
    }
}

/// Build the depth-bounded clocked Levy-Longo tree approximant of `t`.
/// Fuel is per node: each whnf search starts with the full budget.
pub fn clocked_tree(t: &Term, mode: Mode, depth: usize, fuel: usize) -> CLTree {
    if depth == 0 {
        return CLTree { ann: TauAnn::empty(mode), node: TreeNode::Cut };
    }
    match head_reduce_to_whnf(t, mode, fuel) {
        WhnfResult::HeadCycle(_) => CLTree {
            ann: TauAnn::empty(mode),
            node: TreeNode::Bottom { certified: true },
        },
        WhnfResult::FuelExhausted(_) => CLTree {
            ann: TauAnn::empty(mode),
            node: TreeNode::Bottom { certified: false },
        },
        WhnfResult::Whnf { tau_count, atomic_anns, term } => {
            let ann = match mode {
                Mode::Plain => TauAnn::Plain(tau_count),
                Mode::Atomic => TauAnn::Atomic(atomic_anns),
            };
            let node = match &term {
                Term::Lam(x, body) => TreeNode::Abs(
                    x.clone(),
                    Box::new(clocked_tree(body, mode, depth - 1, fuel)),
                ),
                _ => {
                    let (head, args) = term.spine();
                    let Term::Var(y) = head else {
                        unreachable!("whnf head is a variable or abstraction")
                    };
                    TreeNode::HeadApp(
                        y.clone(),
                        args.iter()
                            .map(|a| clocked_tree(a, mode, depth - 1, fuel))
                            .collect(),
                    )
                }
            };
            CLTree { ann, node }
        }
    }
}

/// Marker attached to each entry of [`tree_tau_counts`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum NodeKind {
    Abs,
    Head,
    Bottom { certified: bool },
    Cut,
}

/// Preorder flattening: one `(path, annotation, kind)` entry per node.
pub fn tree_tau_counts(t: &CLTree) -> Vec<(Path, TauAnn, NodeKind)> {
    fn go(t: &CLTree, path: &Path, out: &mut Vec<(Path, TauAnn, NodeKind)>) {
        let kind = match &t.node {
            TreeNode::Abs(_, _) => NodeKind::Abs,
            TreeNode::HeadApp(_, _) => NodeKind::Head,
            TreeNode::Bottom { certified } => NodeKind::Bottom { certified: *certified },
            TreeNode::Cut => NodeKind::Cut,
        };
        out.push((path.clone(), t.ann.clone(), kind));
        match &t.node {
            TreeNode::Abs(_, c) => go(c, &path.child(0), out),
            TreeNode::HeadApp(_, cs) => {
                for (i, c) in cs.iter().enumerate() {
                    go(c, &path.child(i), out);
                }
            }
            _ => {}
        }
    }
    let mut out = Vec::new();
    go(t, &Path::root(), &mut out);
    out
}

/// Plain annotation counts of the whnf nodes (Abs/HeadApp) in preorder.
/// Convenient for spine-shaped trees.
pub fn spine_plain_counts(t: &CLTree) -> Vec<usize> {
    tree_tau_counts(t)
        .into_iter()
        .filter_map(|(_, ann, kind)| match (ann, kind) {
            (TauAnn::Plain(n), NodeKind::Abs | NodeKind::Head) => Some(n),
            _ => None,
        })
        .collect()
}

/// Three-valued skeleton comparison used by the discrimination verdicts.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum SkelCmp {
    Agree,
    /// Definite structural disagreement at the given path.
    Disagree(Path),
    /// Cannot decide: an uncertified bottom faces a different node shape.
    Unknown(Path),
}

// Structure comparison ignoring annotations. Cut is a wildcard; bottoms match
// bottoms; binders are compared up to alpha via the environment.
fn skeleton_cmp_env(
    a: &CLTree,
    b: &CLTree,
    path: &Path,
    env: &mut Vec<(String, String)>,
) -> SkelCmp {
    use TreeNode::*;
    match (&a.node, &b.node) {
        (Cut, _) | (_, Cut) => SkelCmp::Agree,
        (Bottom { .. }, Bottom { .. }) => SkelCmp::Agree,
        (Bottom { certified: false }, _) | (_, Bottom { certified: false }) => {
            SkelCmp::Unknown(path.clone())
        }
        (Bottom { certified: true }, _) | (_, Bottom { certified: true }) => {
            SkelCmp::Disagree(path.clone())
        }
        (Abs(x, ca), Abs(y, cb)) => {
            env.push((x.clone(), y.clone()));
            let r = skeleton_cmp_env(ca, cb, &path.child(0), env);
            env.pop();
            r
        }
        (HeadApp(x, ca), HeadApp(y, cb)) => {
            let vars_match = env
                .iter()
                .rev()
                .find(|(bx, by)| bx == x || by == y)
                .map(|(bx, by)| bx == x && by == y)
                .unwrap_or(x == y);
            if !vars_match || ca.len() != cb.len() {
                return SkelCmp::Disagree(path.clone());
            }
            for (i, (c1, c2)) in ca.iter().zip(cb).enumerate() {
                match skeleton_cmp_env(c1, c2, &path.child(i), env) {
                    SkelCmp::Agree => {}
                    other => return other,
                }
            }
            SkelCmp::Agree
        }
        _ => SkelCmp::Disagree(path.clone()),
    }
}

pub fn skeleton_cmp(a: &CLTree, b: &CLTree) -> SkelCmp {
    skeleton_cmp_env(a, b, &Path::root(), &mut Vec::new())
}

/// True iff the trees agree after discarding annotations, with Cut matching
/// anything and bottoms matching only bottoms.
pub fn same_skeleton(a: &CLTree, b: &CLTree) -> bool {
    fn go(a: &CLTree, b: &CLTree, env: &mut Vec<(String, String)>) -> bool {
        use TreeNode::*;
        match (&a.node, &b.node) {
            (Cut, _) | (_, Cut) => true,
            (Bottom { .. }, Bottom { .. }) => true,
            (Abs(x, ca), Abs(y, cb)) => {
                env.push((x.clone(), y.clone()));
                let r = go(ca, cb, env);
                env.pop();
                r
            }
            (HeadApp(x, ca), HeadApp(y, cb)) => {
                let vars_match = env
                    .iter()
                    .rev()
                    .find(|(bx, by)| bx == x || by == y)
                    .map(|(bx, by)| bx == x && by == y)
                    .unwrap_or(x == y);
                vars_match
                    && ca.len() == cb.len()
                    && ca.iter().zip(cb).all(|(c1, c2)| go(c1, c2, env))
            }
            _ => false,
        }
    }
    go(a, b, &mut Vec::new())
}

/// Outcome of the tau-deletion comparison `a ⇢τ b`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Deletion {
    Holds,
    Fails(Path),
    Unknown(String),
}

fn is_subsequence(needle: &[Position], hay: &[Position]) -> bool {
    let mut it = hay.iter();
    needle.iter().all(|n| it.any(|h| h == n))
}

// Annotation-level deletion check at one node: can a's taus delete to b's?
fn ann_deletes_to(a: &TauAnn, b: &TauAnn) -> bool {
    match (a, b) {
        (TauAnn::Plain(na), TauAnn::Plain(nb)) => na >= nb,
        (TauAnn::Atomic(pa), TauAnn::Atomic(pb)) => is_subsequence(pb, pa),
        _ => false,
    }
}

/// Does deleting taus from `a` yield `b`? Requires equal skeletons; in plain
/// mode per-node counts of `a` dominate `b`, in atomic mode `b`'s position
/// sequence is a subsequence of `a`'s at every node. Uncertified bottoms make
/// the outcome unknown.
pub fn tau_deletion_leq(a: &CLTree, b: &CLTree) -> Deletion {
    fn go(
        a: &CLTree,
        b: &CLTree,
        path: &Path,
        fail: &mut Option<Path>,
        unknown: &mut bool,
    ) {
        use TreeNode::*;
        if fail.is_some() {
            return;
        }
        match (&a.node, &b.node) {
            (Cut, _) | (_, Cut) => {}
            (Bottom { certified: ca }, Bottom { certified: cb }) => {
                // tau^ω on both sides; the finite prefix counts are not
                // semantically meaningful, so no annotation check here.
                if !ca || !cb {
                    *unknown = true;
                }
            }
            (Bottom { certified: false }, _) | (_, Bottom { certified: false }) => {
                *unknown = true;
            }
            _ => {
                let same_shape = match (&a.node, &b.node) {
                    (Abs(_, _), Abs(_, _)) => true,
                    (HeadApp(x, ca), HeadApp(y, cb)) => x == y && ca.len() == cb.len(),
                    _ => false,
                };
                if !same_shape || !ann_deletes_to(&a.ann, &b.ann) {
                    *fail = Some(path.clone());
                    return;
                }
                match (&a.node, &b.node) {
                    (Abs(_, ca), Abs(_, cb)) => go(ca, cb, &path.child(0), fail, unknown),
                    (HeadApp(_, ca), HeadApp(_, cb)) => {
                        for (i, (c1, c2)) in ca.iter().zip(cb).enumerate() {
                            go(c1, c2, &path.child(i), fail, unknown);
                        }
                    }
                    _ => unreachable!(),
                }
            }
        }
    }
    // Binder names along matching skeletons are compared nominally here;
    // callers compare trees of the same term family, and skeleton_cmp is the
    // alpha-aware structural check.
    let mut fail = None;
    let mut unknown = false;
    go(a, b, &Path::root(), &mut fail, &mut unknown);
    match (fail, unknown) {
        (Some(p), _) => Deletion::Fails(p),
        (None, true) => Deletion::Unknown("uncertified bottom in an approximant".to_string()),
        (None, false) => Deletion::Holds,
    }
}

/// Finite-depth tau-equivalence report: where and how often the annotations
/// of two equal-skeleton approximants differ.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TauEqReport {
    pub skeleton: SkelCmp,
    pub mismatch_count: usize,
    pub mismatch_paths: Vec<Path>,
}

pub fn tau_eq_finite(a: &CLTree, b: &CLTree) -> TauEqReport {
    let skeleton = skeleton_cmp(a, b);
    let mut report = TauEqReport { skeleton, mismatch_count: 0, mismatch_paths: Vec::new() };
    if report.skeleton != SkelCmp::Agree {
        return report;
    }
    fn go(a: &CLTree, b: &CLTree, path: &Path, report: &mut TauEqReport) {
        use TreeNode::*;
        match (&a.node, &b.node) {
            (Cut, _) | (_, Cut) | (Bottom { .. }, Bottom { .. }) => {}
            _ => {
                if a.ann != b.ann {
                    report.mismatch_count += 1;
                    report.mismatch_paths.push(path.clone());
                }
                match (&a.node, &b.node) {
                    (Abs(_, ca), Abs(_, cb)) => go(ca, cb, &path.child(0), report),
                    (HeadApp(_, ca), HeadApp(_, cb)) => {
                        for (i, (c1, c2)) in ca.iter().zip(cb).enumerate() {
                            go(c1, c2, &path.child(i), report);
                        }
                    }
                    _ => {}
                }
            }
        }
    }
    go(a, b, &Path::root(), &mut report);
    report
}

/// Replace everything below depth `d` with Cut, for monotonicity checks.
pub fn truncate(t: &CLTree, d: usize, mode: Mode) -> CLTree {
    if d == 0 {
        return CLTree { ann: TauAnn::empty(mode), node: TreeNode::Cut };
    }
    let node = match &t.node {
        TreeNode::Abs(x, c) => TreeNode::Abs(x.clone(), Box::new(truncate(c, d - 1, mode))),
        TreeNode::HeadApp(y, cs) => {
            TreeNode::HeadApp(y.clone(), cs.iter().map(|c| truncate(c, d - 1, mode)).collect())
        }
        other => other.clone(),
    };
    CLTree { ann: t.ann.clone(), node }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::parser::parse;
    use crate::term::{app, var};
    use crate::zoo;

    fn tree_of(src: &str, depth: usize, fuel: usize) -> CLTree {
        clocked_tree(&parse(src).unwrap(), Mode::Plain, depth, fuel)
    }

    #[test]
    fn y0_f_tree_spine() {
        let t = app(zoo::bohm_y(0), var("f"));
        let tree = clocked_tree(&t, Mode::Plain, 4, 100);
        assert_eq!(spine_plain_counts(&tree), vec![2, 1, 1, 1]);
    }

    #[test]
    fn y1_f_tree_spine() {
        let t = app(zoo::bohm_y(1), var("f"));
        let tree = clocked_tree(&t, Mode::Plain, 4, 100);
        assert_eq!(spine_plain_counts(&tree), vec![2, 2, 2, 2]);
    }

    #[test]
    fn omega_tree_certified_bottom() {
        let tree = tree_of("(\\x. x x)(\\x. x x)", 3, 100);
        assert_eq!(tree.node, TreeNode::Bottom { certified: true });
    }

    #[test]
    fn depth_zero_is_cut() {
        let tree = tree_of("x", 0, 10);
        assert_eq!(tree.node, TreeNode::Cut);
        let counts = tree_tau_counts(&tree);
        assert_eq!(counts.len(), 1);
        assert_eq!(counts[0].2, NodeKind::Cut);
    }

    #[test]
    fn skeletons_y0_y1_agree() {
        let a = clocked_tree(&app(zoo::bohm_y(0), var("f")), Mode::Plain, 4, 100);
        let b = clocked_tree(&app(zoo::bohm_y(1), var("f")), Mode::Plain, 4, 100);
        assert!(same_skeleton(&a, &b));
        assert_eq!(skeleton_cmp(&a, &b), SkelCmp::Agree);
    }

    #[test]
    fn skeleton_omega_vs_identity_differs() {
        let a = tree_of("(\\x. x x)(\\x. x x)", 3, 100);
        let b = tree_of("\\x. x", 3, 100);
        assert!(!same_skeleton(&a, &b));
        assert!(matches!(skeleton_cmp(&a, &b), SkelCmp::Disagree(_)));
    }

    #[test]
    fn cut_matches_anything() {
        let cut = CLTree { ann: TauAnn::Plain(0), node: TreeNode::Cut };
        let b = tree_of("\\x. x", 3, 100);
        assert!(same_skeleton(&b, &cut));
    }

    #[test]
    fn deletion_y1_to_y0_holds_converse_fails() {
        let a = clocked_tree(&app(zoo::bohm_y(1), var("f")), Mode::Plain, 6, 200);
        let b = clocked_tree(&app(zoo::bohm_y(0), var("f")), Mode::Plain, 6, 200);
        assert_eq!(tau_deletion_leq(&a, &b), Deletion::Holds);
        match tau_deletion_leq(&b, &a) {
            // first violation below the root: 1 >= 2 is false
            Deletion::Fails(p) => assert_ne!(p, Path::root()),
            other => panic!("expected failure, got {other:?}"),
        }
    }

    #[test]
    fn deletion_reflexive() {
        let t = clocked_tree(&app(zoo::bohm_y(1), var("f")), Mode::Plain, 5, 200);
        assert_eq!(tau_deletion_leq(&t, &t), Deletion::Holds);
    }

    #[test]
    fn tau_eq_y0_y1_mismatch_below_root() {
        let a = clocked_tree(&app(zoo::bohm_y(0), var("f")), Mode::Plain, 5, 200);
        let b = clocked_tree(&app(zoo::bohm_y(1), var("f")), Mode::Plain, 5, 200);
        let rep = tau_eq_finite(&a, &b);
        assert_eq!(rep.skeleton, SkelCmp::Agree);
        // spine [2,1,1,1,1] vs [2,2,2,2,2]: every level below the root
        assert_eq!(rep.mismatch_count, 4);
    }

    #[test]
    fn tau_eq_identical_no_mismatch() {
        let t = clocked_tree(&app(zoo::bohm_y(2), var("x")), Mode::Plain, 5, 500);
        let rep = tau_eq_finite(&t, &t);
        assert_eq!(rep.mismatch_count, 0);
    }

    #[test]
    fn tau_eq_y2_y3_every_node() {
        let a = clocked_tree(&app(zoo::bohm_y(2), var("x")), Mode::Plain, 5, 500);
        let b = clocked_tree(&app(zoo::bohm_y(3), var("x")), Mode::Plain, 5, 500);
        assert_eq!(spine_plain_counts(&a), vec![4, 4, 4, 4, 4]);
        assert_eq!(spine_plain_counts(&b), vec![6, 6, 6, 6, 6]);
        let rep = tau_eq_finite(&a, &b);
        assert_eq!(rep.mismatch_count, 5);
    }

    #[test]
    fn approximant_monotonicity() {
        let t = app(zoo::bohm_y(1), var("f"));
        let d4 = clocked_tree(&t, Mode::Plain, 4, 200);
        let d5 = clocked_tree(&t, Mode::Plain, 5, 200);
        assert_eq!(truncate(&d5, 4, Mode::Plain), d4);
    }

    #[test]
    fn render_and_json_stable() {
        let t = app(zoo::bohm_y(0), var("f"));
        let tree = clocked_tree(&t, Mode::Plain, 3, 100);
        let text = tree.render_text();
        assert!(text.starts_with("τ^2 f/1\n"));
        assert!(text.contains("…"));
        let v = tree.to_json();
        assert_eq!(v["kind"], "head");
        assert_eq!(v["ann"], 2);
    }
}
