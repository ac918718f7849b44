use std::collections::{BTreeSet, HashMap};

use super::rule::AtomicSystem;
use crate::syntax::Atom;

/// Derivability by brute force: enumerate every context reachable from
/// `ctx` by adding rule hypothesis sets, then iterate the defining clauses
/// over all of them at once until nothing changes. Limited to 64 atoms.
pub fn brute_force_derives(sys: &AtomicSystem, ctx: &BTreeSet<Atom>, goal: &Atom) -> bool {
    let mut ids: HashMap<&Atom, u32> = HashMap::new();
    for a in sys.rules().iter().flat_map(|r| r.atoms()).chain(ctx.iter()).chain(std::iter::once(goal)) {
        let n = ids.len() as u32;
        ids.entry(a).or_insert(n);
    }
    assert!(ids.len() <= 64, "oracle supports at most 64 atoms");
    let mask = |atoms: &BTreeSet<Atom>| atoms.iter().fold(0u64, |m, a| m | 1 << ids[a]);
    let rules: Vec<(Vec<(u64, u32)>, u32)> = sys
        .rules()
        .iter()
        .map(|r| (r.premises.iter().map(|p| (mask(&p.hyps), ids[&p.conclusion])).collect(), ids[&r.conclusion]))
        .collect();

    let start = mask(ctx);
    let mut contexts = vec![start];
    let mut index: HashMap<u64, usize> = HashMap::from([(start, 0)]);
    let mut i = 0;
    while i < contexts.len() {
        let c = contexts[i];
        for (prems, _) in &rules {
            for (h, _) in prems {
                let d = c | h;
                if let std::collections::hash_map::Entry::Vacant(e) = index.entry(d) {
                    e.insert(contexts.len());
                    contexts.push(d);
                }
            }
        }
        i += 1;
    }

    let mut derived: Vec<u64> = contexts.clone();
    loop {
        let next: Vec<u64> = contexts
            .iter()
            .zip(&derived)
            .map(|(&c, &d)| {
                rules.iter().fold(d, |acc, (prems, concl)| {
                    let ok = prems.iter().all(|(h, p)| derived[index[&(c | h)]] >> p & 1 == 1);
                    if ok {
                        acc | 1 << concl
                    } else {
                        acc
                    }
                })
            })
            .collect();
        if next == derived {
            break;
        }
        derived = next;
    }
    derived[0] >> ids[goal] & 1 == 1
}
