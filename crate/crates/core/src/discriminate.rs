//! The discrimination method: simplicity checking, global improvement,
//! clock acceleration and beta-inconvertibility verdicts.

use serde_json::{json, Value};
use sha2::{Digest, Sha256};
use thiserror::Error;

use crate::reduce::{
    classic_beta_reduce, classic_redexes, step_at, tau_erase, ReductionTrace, RuleId, Strategy,
};
use crate::term::{alpha_eq, app, lam, Mode, Path, Term};
use crate::tree::{clocked_tree, tau_deletion_leq, tau_eq_finite, CLTree, Deletion, SkelCmp};

/// Classification of a beta redex `(\x. M) N`.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum RedexClass {
    /// x occurs at most once in M.
    Linear,
    /// N is a (classical) normal form.
    CallByValue,
    Both,
    /// Duplicates a redex: neither linear nor call-by-value.
    Neither,
}

impl RedexClass {
    /// A redex is simple iff it is linear or call-by-value.
    pub fn is_simple(self) -> bool {
        self != RedexClass::Neither
    }
}

#[derive(Error, Debug, PartialEq, Eq)]
#[error("term is not a beta redex")]
pub struct NotARedex;

/// No classical beta redex in the tau-erased term.
pub fn is_beta_normal(t: &Term) -> bool {
    classic_redexes(&tau_erase(t)).is_empty()
}

pub fn classify_redex(t: &Term) -> Result<RedexClass, NotARedex> {
    let Term::App(f, a) = t else { return Err(NotARedex) };
    let Term::Lam(x, body) = f.as_ref() else { return Err(NotARedex) };
    let linear = crate::term::occurrences(body, x) <= 1;
    let cbv = is_beta_normal(a);
    Ok(match (linear, cbv) {
        (true, true) => RedexClass::Both,
        (true, false) => RedexClass::Linear,
        (false, true) => RedexClass::CallByValue,
        (false, false) => RedexClass::Neither,
    })
}

/// Simplicity status of a term, unrolled to a depth.
#[derive(Clone, Debug, PartialEq)]
pub enum Simplicity {
    Simple,
    /// First head redex that is neither linear nor call-by-value.
    NotSimple { path: Path, redex: Term },
    /// Fuel ran out before the whnf of some node was settled.
    Unknown(String),
}

#[derive(Clone, Debug, PartialEq)]
pub struct SimplicityReport {
    pub status: Simplicity,
    pub checked_depth: usize,
    pub fuel: usize,
}

impl SimplicityReport {
    pub fn is_simple(&self) -> bool {
        matches!(self.status, Simplicity::Simple)
    }
}

// Head redex path of a classical term: the application whose function
// position (following the spine) is an abstraction.
fn head_redex_path(t: &Term) -> Option<Path> {
    let mut path = Path::root();
    let mut cur = t;
    loop {
        match cur {
            Term::App(f, _) => match f.as_ref() {
                Term::Lam(_, _) => return Some(path),
                Term::App(_, _) => {
                    path = path.child(0);
                    cur = f;
                }
                _ => return None,
            },
            _ => return None,
        }
    }
}

/// Check the coinductive simplicity definition, unrolled to `depth` levels
/// of the Levy-Longo structure. At every node the classical head reduction
/// to whnf is replayed and each contracted head redex must be linear or
/// call-by-value; a head cycle certifies the no-whnf clause. `Simple` means
/// every checked node passed.
pub fn check_simple(t: &Term, depth: usize, fuel: usize) -> SimplicityReport {
    fn node(t: &Term, depth: usize, fuel: usize) -> Simplicity {
        if depth == 0 {
            return Simplicity::Simple; // unchecked below the depth bound
        }
        let mut cur = t.clone();
        let mut seen: Vec<Term> = Vec::new();
        let mut budget = fuel;
        loop {
            let Some(path) = head_redex_path(&cur) else {
                // whnf reached
                break;
            };
            if seen.iter().any(|s| alpha_eq(s, &cur)) {
                // no whnf: clause (a) holds at this node
                return Simplicity::Simple;
            }
            if budget == 0 {
                return Simplicity::Unknown(format!(
                    "fuel exhausted while head-reducing {cur}"
                ));
            }
            seen.push(cur.clone());
            let redex = crate::reduce::subterm_at(&cur, &path)
                .expect("head redex path is valid")
                .clone();
            match classify_redex(&redex) {
                Ok(c) if c.is_simple() => {}
                Ok(_) => return Simplicity::NotSimple { path, redex },
                Err(_) => unreachable!("head redex path points at a redex"),
            }
            cur = step_at(&cur, &path, RuleId::ClassicBeta).expect("head redex contracts");
            budget -= 1;
        }
        match &cur {
            Term::Lam(_, body) => node(body, depth - 1, fuel),
            _ => {
                let (_, args) = cur.spine();
                for a in args {
                    match node(a, depth - 1, fuel) {
                        Simplicity::Simple => {}
                        other => return other,
                    }
                }
                Simplicity::Simple
            }
        }
    }
    SimplicityReport {
        status: node(&tau_erase(t), depth, fuel),
        checked_depth: depth,
        fuel,
    }
}

/// Is `m` globally improved by `n`, i.e. does deleting taus from the tree of
/// `m` yield the tree of `n`, at the given approximant depth?
pub fn globally_improves(m: &Term, n: &Term, mode: Mode, depth: usize, fuel: usize) -> Deletion {
    tau_deletion_leq(
        &clocked_tree(m, mode, depth, fuel),
        &clocked_tree(n, mode, depth, fuel),
    )
}

#[derive(Clone, Debug, PartialEq)]
pub enum AccelOutcome {
    Holds,
    Fails(ReductionTrace),
    Unknown(String),
}

/// Clock acceleration: reduce `m` (classically) for `steps` steps and check
/// that the reduct improves `m` globally. Holds for correct implementations.
pub fn acceleration_check(
    m: &Term,
    steps: usize,
    strategy: Strategy,
    mode: Mode,
    depth: usize,
    fuel: usize,
) -> AccelOutcome {
    let trace = classic_beta_reduce(m, strategy, steps);
    match globally_improves(m, trace.final_term(), mode, depth, fuel) {
        Deletion::Holds => AccelOutcome::Holds,
        Deletion::Fails(_) => AccelOutcome::Fails(trace),
        Deletion::Unknown(r) => AccelOutcome::Unknown(r),
    }
}

/// The evidence standard under which a NotConvertible verdict was issued.
/// Verdicts are evidence at finite depth, not formal proofs.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum EvidenceStandard {
    /// The Levy-Longo skeletons definitely disagree.
    SkeletonDisagreement,
    /// Both terms certified simple and the mismatch counts strictly
    /// increase over at least three depths.
    SimpleTermsIncreasingMismatch,
    /// Mismatch counts strictly increase and no reduct of one side within
    /// the step bound improves the other side globally.
    BoundedReductImprovement { steps: usize, reducts: usize },
}

impl EvidenceStandard {
    pub fn label(&self) -> String {
        match self {
            EvidenceStandard::SkeletonDisagreement => "skeleton-disagreement".to_string(),
            EvidenceStandard::SimpleTermsIncreasingMismatch => {
                "simple-terms-increasing-mismatch".to_string()
            }
            EvidenceStandard::BoundedReductImprovement { steps, reducts } => {
                format!("bounded-reduct-improvement(steps={steps},reducts={reducts})")
            }
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct Evidence {
    pub depths: Vec<usize>,
    pub mismatch_counts: Vec<usize>,
    /// Mismatch paths at the deepest compared depth.
    pub mismatch_paths: Vec<Path>,
    pub simple_left: SimplicityReport,
    pub simple_right: SimplicityReport,
    /// The deepest pair of tree approximants.
    pub trees: (CLTree, CLTree),
    pub standard: Option<EvidenceStandard>,
}

#[derive(Clone, Debug, PartialEq)]
pub enum Verdict {
    NotConvertible(Evidence),
    Inconclusive { reason: String, evidence: Evidence },
}

impl Verdict {
    pub fn is_not_convertible(&self) -> bool {
        matches!(self, Verdict::NotConvertible(_))
    }

    pub fn evidence(&self) -> &Evidence {
        match self {
            Verdict::NotConvertible(e) => e,
            Verdict::Inconclusive { evidence, .. } => evidence,
        }
    }
}

// All classical reducts of `t` within `steps` beta steps, deduplicated up to
// alpha, capped.
fn reducts_within(t: &Term, steps: usize, cap: usize) -> Vec<Term> {
    let mut all: Vec<Term> = vec![t.clone()];
    let mut frontier: Vec<Term> = vec![t.clone()];
    for _ in 0..steps {
        let mut next = Vec::new();
        for m in &frontier {
            for path in classic_redexes(m) {
                let r = step_at(m, &path, RuleId::ClassicBeta).expect("enumerated redex");
                if !all.iter().any(|s| alpha_eq(s, &r)) {
                    all.push(r.clone());
                    next.push(r);
                    if all.len() >= cap {
                        return all;
                    }
                }
            }
        }
        if next.is_empty() {
            break;
        }
        frontier = next;
    }
    all
}

// Evidence for the general discrimination theorem at a step bound: true iff
// every enumerated reduct m' of m definitely fails to improve n globally
// (tau-deletion from the tree of n to the tree of m' fails).
fn no_reduct_improves(
    m: &Term,
    n_tree: &CLTree,
    mode: Mode,
    depth: usize,
    fuel: usize,
    steps: usize,
    cap: usize,
) -> Option<usize> {
    let reducts = reducts_within(m, steps, cap);
    if reducts.len() >= cap {
        return None; // enumeration truncated; not established
    }
    for m2 in &reducts {
        let t2 = clocked_tree(m2, mode, depth, fuel);
        match tau_deletion_leq(n_tree, &t2) {
            Deletion::Fails(_) => {}
            _ => return None,
        }
    }
    Some(reducts.len())
}

/// Step bound for the bounded general-theorem evidence route.
const GENERAL_ROUTE_STEPS: usize = 2;
const GENERAL_ROUTE_CAP: usize = 128;

/// Discrimination verdict for two tau-free closed terms, comparing clocked
/// tree approximants over the given ascending depths.
///
/// NotConvertible is returned when (i) the skeletons definitely disagree,
/// or (ii) the skeletons agree, the per-depth mismatch counts strictly
/// increase over at least three depths (evidence of infinitely many tau
/// differences) and either both terms are certified simple, or no bounded
/// reduct of one side improves the other globally. Anything weaker is
/// Inconclusive; the evidence standard is recorded in the verdict.
pub fn discriminate(m: &Term, n: &Term, mode: Mode, depths: &[usize], fuel: usize) -> Verdict {
    let max_depth = depths.iter().copied().max().unwrap_or(0);
    let simple_left = check_simple(m, max_depth, fuel);
    let simple_right = check_simple(n, max_depth, fuel);

    let mut mismatch_counts = Vec::new();
    let mut deepest_paths = Vec::new();
    let mut deepest_trees: Option<(CLTree, CLTree)> = None;
    let mut disagreement: Option<Path> = None;
    let mut skeleton_unknown = false;
    for &d in depths {
        let ta = clocked_tree(m, mode, d, fuel);
        let tb = clocked_tree(n, mode, d, fuel);
        let rep = tau_eq_finite(&ta, &tb);
        match &rep.skeleton {
            SkelCmp::Agree => {}
            SkelCmp::Disagree(p) => disagreement = disagreement.or(Some(p.clone())),
            SkelCmp::Unknown(_) => skeleton_unknown = true,
        }
        mismatch_counts.push(rep.mismatch_count);
        deepest_paths = rep.mismatch_paths;
        deepest_trees = Some((ta, tb));
    }
    let trees = deepest_trees.unwrap_or_else(|| {
        let t = clocked_tree(m, mode, 0, fuel);
        (t.clone(), t)
    });
    let mut evidence = Evidence {
        depths: depths.to_vec(),
        mismatch_counts: mismatch_counts.clone(),
        mismatch_paths: deepest_paths,
        simple_left,
        simple_right,
        trees,
        standard: None,
    };

    if disagreement.is_some() {
        evidence.standard = Some(EvidenceStandard::SkeletonDisagreement);
        return Verdict::NotConvertible(evidence);
    }
    if skeleton_unknown {
        return Verdict::Inconclusive {
            reason: "skeleton comparison inconclusive (fuel exhausted or cut)".to_string(),
            evidence,
        };
    }
    let strictly_increasing = depths.len() >= 3
        && mismatch_counts.windows(2).all(|w| w[0] < w[1]);
    if !strictly_increasing {
        let reason = if mismatch_counts.iter().all(|&c| c == 0) {
            "trees eventually match: 0 mismatches".to_string()
        } else {
            format!(
                "mismatch counts not strictly increasing over depths: {mismatch_counts:?}"
            )
        };
        return Verdict::Inconclusive { reason, evidence };
    }
    if evidence.simple_left.is_simple() && evidence.simple_right.is_simple() {
        evidence.standard = Some(EvidenceStandard::SimpleTermsIncreasingMismatch);
        return Verdict::NotConvertible(evidence);
    }
    if matches!(evidence.simple_left.status, Simplicity::Unknown(_))
        || matches!(evidence.simple_right.status, Simplicity::Unknown(_))
    {
        return Verdict::Inconclusive {
            reason: "simplicity of a term could not be settled (fuel/depth)".to_string(),
            evidence,
        };
    }
    // Not both simple: fall back to bounded evidence for the general
    // theorem: no enumerated reduct of one side improves the other.
    let max_d = max_depth;
    let tree_m = &evidence.trees.0;
    let tree_n = &evidence.trees.1;
    if let Some(k) =
        no_reduct_improves(m, tree_n, mode, max_d, fuel, GENERAL_ROUTE_STEPS, GENERAL_ROUTE_CAP)
    {
        evidence.standard = Some(EvidenceStandard::BoundedReductImprovement {
            steps: GENERAL_ROUTE_STEPS,
            reducts: k,
        });
        return Verdict::NotConvertible(evidence);
    }
    if let Some(k) =
        no_reduct_improves(n, tree_m, mode, max_d, fuel, GENERAL_ROUTE_STEPS, GENERAL_ROUTE_CAP)
    {
        evidence.standard = Some(EvidenceStandard::BoundedReductImprovement {
            steps: GENERAL_ROUTE_STEPS,
            reducts: k,
        });
        return Verdict::NotConvertible(evidence);
    }
    Verdict::Inconclusive {
        reason: "terms are not certified simple and bounded reduct search found a possible \
                 improvement"
            .to_string(),
        evidence,
    }
}

/// Build the Selinger-Plotkin pair `A_Y = Y (\z. f z z)` and
/// `B_Y = Y (\x. Y (\y. f x y))` for a fixed point combinator `y` and return
/// both clocked trees. Their skeletons both solve `T = f T T`.
pub fn plotkin_trees(y: &Term, depth: usize, fuel: usize) -> (CLTree, CLTree) {
    let f = crate::term::var("f");
    let a = app(y.clone(), lam("z", app(app(f.clone(), crate::term::var("z")), crate::term::var("z"))));
    let inner = app(
        y.clone(),
        lam("y", app(app(f.clone(), crate::term::var("x")), crate::term::var("y"))),
    );
    let b = app(y.clone(), lam("x", inner));
    (
        clocked_tree(&a, Mode::Plain, depth, fuel),
        clocked_tree(&b, Mode::Plain, depth, fuel),
    )
}

fn tree_digest(t: &CLTree) -> String {
    let mut h = Sha256::new();
    h.update(t.render_text().as_bytes());
    let out = h.finalize();
    out.iter().take(8).map(|b| format!("{b:02x}")).collect()
}

fn simplicity_json(r: &SimplicityReport) -> Value {
    match &r.status {
        Simplicity::Simple => json!({
            "status": "simple",
            "checkedDepth": r.checked_depth,
            "fuel": r.fuel,
        }),
        Simplicity::NotSimple { path, redex } => json!({
            "status": "not-simple",
            "witnessPath": path.to_string(),
            "witnessRedex": redex.to_string(),
            "checkedDepth": r.checked_depth,
            "fuel": r.fuel,
        }),
        Simplicity::Unknown(reason) => json!({
            "status": "unknown",
            "reason": reason,
            "checkedDepth": r.checked_depth,
            "fuel": r.fuel,
        }),
    }
}

/// JSON evidence report for a verdict.
pub fn verdict_json(v: &Verdict) -> Value {
    let e = v.evidence();
    let mut obj = json!({
        "verdict": if v.is_not_convertible() { "not-convertible" } else { "inconclusive" },
        "evidenceStandard": e.standard.as_ref().map(|s| s.label()),
        "depths": e.depths,
        "mismatchCounts": e.mismatch_counts,
        "mismatchPaths": e.mismatch_paths.iter().map(|p| p.to_string()).collect::<Vec<_>>(),
        "simplicity": {
            "m": simplicity_json(&e.simple_left),
            "n": simplicity_json(&e.simple_right),
        },
        "treeDigests": {
            "m": tree_digest(&e.trees.0),
            "n": tree_digest(&e.trees.1),
        },
    });
    if let Verdict::Inconclusive { reason, .. } = v {
        obj["reason"] = json!(reason);
    }
    obj
}

/// Human-readable rendering of a verdict.
pub fn verdict_text(v: &Verdict) -> String {
    let e = v.evidence();
    let mut out = String::new();
    match v {
        Verdict::NotConvertible(_) => {
            out.push_str("verdict: NOT beta-convertible\n");
            if let Some(s) = &e.standard {
                out.push_str(&format!("evidence standard: {}\n", s.label()));
            }
        }
        Verdict::Inconclusive { reason, .. } => {
            out.push_str(&format!("verdict: inconclusive ({reason})\n"));
        }
    }
    out.push_str("note: verdicts are finite-depth evidence, not formal proofs\n");
    out.push_str(&format!("depths:          {:?}\n", e.depths));
    out.push_str(&format!("mismatch counts: {:?}\n", e.mismatch_counts));
    let simple = |r: &SimplicityReport| match &r.status {
        Simplicity::Simple => "simple".to_string(),
        Simplicity::NotSimple { path, redex } => format!("not simple (redex {redex} at {path})"),
        Simplicity::Unknown(reason) => format!("unknown ({reason})"),
    };
    out.push_str(&format!("simplicity (left):  {}\n", simple(&e.simple_left)));
    out.push_str(&format!("simplicity (right): {}\n", simple(&e.simple_right)));
    out
}
