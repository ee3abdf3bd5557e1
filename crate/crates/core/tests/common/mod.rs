//! Shared helpers for the integration suites: a seeded generator of random
//! closed lambda terms and the per-step witness accounting check.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use clocked_lambda::reduce::{subterm_at, ReductionTrace, RuleId};
use clocked_lambda::term::{app, lam, occurrences, var, Term};

/// Deterministic random closed term of at most `max_size` non-tau nodes.
pub fn random_closed_term(seed: u64, max_size: usize) -> Term {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let size = rng.gen_range(1..=max_size);
    gen(&mut rng, &mut Vec::new(), size)
}

fn gen(rng: &mut ChaCha8Rng, env: &mut Vec<String>, size: usize) -> Term {
    if size <= 1 {
        return if env.is_empty() {
            lam("v0", var("v0"))
        } else {
            var(&env[rng.gen_range(0..env.len())])
        };
    }
    // bias towards applications so the corpus actually contains redexes
    let choice = if env.is_empty() { 1 } else { rng.gen_range(0..8) };
    match choice {
        0 => var(&env[rng.gen_range(0..env.len())]),
        1 | 2 | 3 => {
            let x = format!("v{}", env.len());
            env.push(x.clone());
            let body = gen(rng, env, size - 1);
            env.pop();
            lam(&x, body)
        }
        _ => {
            let left = rng.gen_range(1..size);
            let f = gen(rng, env, left);
            let a = gen(rng, env, size - left);
            app(f, a)
        }
    }
}

/// Per-step witness accounting for a plain-mode clocked trace: a ClockedBeta
/// contracting (\x.M)N creates one tau and copies (or drops) N's taus with
/// each substituted occurrence of x; TauLift moves taus without changing the
/// count.
pub fn witness_conserving(trace: &ReductionTrace) -> bool {
    let mut cur = trace.start.clone();
    for step in &trace.steps {
        let before = cur.tau_node_count() as i64;
        let expected = match step.rule {
            RuleId::ClockedBeta => {
                let Some(Term::App(f, a)) = subterm_at(&cur, &step.path) else {
                    return false;
                };
                let Term::Lam(x, body) = f.as_ref() else { return false };
                let occ = occurrences(body, x) as i64;
                let arg_taus = a.tau_node_count() as i64;
                before + 1 + (occ - 1) * arg_taus
            }
            RuleId::TauLift => before,
            _ => return false,
        };
        if step.contractum.tau_node_count() as i64 != expected {
            return false;
        }
        cur = step.contractum.clone();
    }
    true
}
