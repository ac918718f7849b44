use std::collections::{BTreeSet, HashMap};

use fixedbitset::FixedBitSet;

use super::rule::{AtomicSystem, BaseDerivation, Step};
use crate::syntax::Atom;

#[derive(Clone, Copy, PartialEq, Eq)]
enum Kind {
    /// Premise context equals the current context.
    Same,
    /// Premise conclusion is among the premise hypotheses or the context.
    Trivial,
    /// Premise needs a strictly larger context.
    Hard,
}

#[derive(Clone, Copy)]
enum How {
    Same,
    Ref,
    Weak,
    Sub(usize),
}

enum Reason {
    Ref,
    Rule(usize, Vec<How>),
}

struct CompiledPremise {
    hyps: FixedBitSet,
    hyp_list: Vec<usize>,
    conclusion: usize,
}

struct CompiledRule {
    premises: Vec<CompiledPremise>,
    conclusion: usize,
    /// Offset of this rule's premises in the flat premise arrays.
    first: usize,
}

struct Context {
    set: FixedBitSet,
    der: FixedBitSet,
    reasons: Vec<Option<Reason>>,
}

/// Decides derivability in a finite atomic system. Each context is saturated
/// once and memoized; a premise `H => P` that needs the larger context
/// `ctx + H` triggers saturation of that context, which can never depend back
/// on a smaller one, so the recursion is well founded.
pub struct Engine {
    atoms: Vec<Atom>,
    ids: HashMap<Atom, usize>,
    rules: Vec<CompiledRule>,
    /// For each atom, the (rule, premise) pairs whose premise concludes it.
    watchers: Vec<Vec<(usize, usize)>>,
    contexts: Vec<Context>,
    ctx_ids: HashMap<FixedBitSet, usize>,
    /// Rules with a premise that has hypotheses; only these are classified
    /// per context.
    open: Vec<usize>,
    /// Premise counts per rule, the starting value of `waiting`.
    arity: Vec<usize>,
    premise_count: usize,
}

impl Engine {
    pub fn new(sys: &AtomicSystem) -> Self {
        let mut atoms = Vec::new();
        let mut ids = HashMap::new();
        for r in sys.rules() {
            for a in r.atoms() {
                if !ids.contains_key(a) {
                    ids.insert(a.clone(), atoms.len());
                    atoms.push(a.clone());
                }
            }
        }
        let n = atoms.len();
        let mut watchers = vec![Vec::new(); n];
        let mut first = 0;
        let rules: Vec<CompiledRule> = sys
            .rules()
            .iter()
            .enumerate()
            .map(|(ri, r)| {
                let rule = CompiledRule {
                    premises: r
                        .premises
                        .iter()
                        .enumerate()
                        .map(|(pi, p)| {
                            let hyp_list: Vec<usize> = p.hyps.iter().map(|h| ids[h]).collect();
                            let mut hyps = FixedBitSet::with_capacity(n);
                            hyps.extend(hyp_list.iter().copied());
                            let conclusion = ids[&p.conclusion];
                            watchers[conclusion].push((ri, pi));
                            CompiledPremise { hyps, hyp_list, conclusion }
                        })
                        .collect(),
                    conclusion: ids[&r.conclusion],
                    first,
                };
                first += rule.premises.len();
                rule
            })
            .collect();
        let open = (0..rules.len()).filter(|&r| rules[r].premises.iter().any(|p| !p.hyp_list.is_empty())).collect();
        let arity = rules.iter().map(|r| r.premises.len()).collect();
        Engine {
            atoms,
            ids,
            rules,
            watchers,
            contexts: Vec::new(),
            ctx_ids: HashMap::new(),
            open,
            arity,
            premise_count: first,
        }
    }

    /// Number of contexts saturated so far.
    pub fn contexts_explored(&self) -> usize {
        self.contexts.len()
    }

    fn split(&self, ctx: &BTreeSet<Atom>) -> (FixedBitSet, BTreeSet<Atom>) {
        let mut set = FixedBitSet::with_capacity(self.atoms.len());
        let mut foreign = BTreeSet::new();
        for a in ctx {
            match self.ids.get(a) {
                Some(&i) => set.insert(i),
                None => {
                    foreign.insert(a.clone());
                }
            }
        }
        (set, foreign)
    }

    pub fn derivable(&mut self, ctx: &BTreeSet<Atom>, goal: &Atom) -> bool {
        if ctx.contains(goal) {
            return true;
        }
        let Some(&g) = self.ids.get(goal) else { return false };
        let (set, _) = self.split(ctx);
        let id = self.saturate(set);
        self.contexts[id].der.contains(g)
    }

    /// A derivation of `ctx |- goal`, if there is one.
    pub fn derive(&mut self, ctx: &BTreeSet<Atom>, goal: &Atom) -> Option<BaseDerivation> {
        if !self.derivable(ctx, goal) {
            return None;
        }
        let (set, foreign) = self.split(ctx);
        let Some(&g) = self.ids.get(goal) else {
            return Some(BaseDerivation { context: ctx.clone(), conclusion: goal.clone(), step: Step::Ref });
        };
        let id = self.saturate(set);
        let d = self.build(id, g);
        Some(if foreign.is_empty() { d } else { d.weaken(&foreign) })
    }

    /// Every atom derivable from `ctx`, including `ctx` itself.
    pub fn consequences(&mut self, ctx: &BTreeSet<Atom>) -> BTreeSet<Atom> {
        let (set, foreign) = self.split(ctx);
        let id = self.saturate(set);
        let mut out: BTreeSet<Atom> = self.contexts[id].der.ones().map(|i| self.atoms[i].clone()).collect();
        out.extend(foreign);
        out
    }

    fn saturate(&mut self, set: FixedBitSet) -> usize {
        if let Some(&id) = self.ctx_ids.get(&set) {
            return id;
        }
        let n = self.atoms.len();
        let mut der = set.clone();
        let mut reasons: Vec<Option<Reason>> = (0..n).map(|_| None).collect();
        let mut queue: Vec<usize> = set.ones().collect();
        for &a in &queue {
            reasons[a] = Some(Reason::Ref);
        }

        // Premises without hypotheses are always same-context.
        let mut kinds: Vec<Kind> = vec![Kind::Same; self.premise_count];
        let mut waiting: Vec<usize> = self.arity.clone();
        let mut hard_ready: Vec<usize> = Vec::new();

        for &r in &self.open {
            let rule = &self.rules[r];
            for (pi, p) in rule.premises.iter().enumerate() {
                if p.hyp_list.iter().all(|&h| set.contains(h)) {
                    continue;
                }
                waiting[r] -= 1;
                kinds[rule.first + pi] = if set.contains(p.conclusion) || p.hyps.contains(p.conclusion) {
                    Kind::Trivial
                } else {
                    Kind::Hard
                };
            }
        }
        // Same-context premises already satisfied by the context itself.
        for a in set.ones() {
            for &(r, p) in &self.watchers[a] {
                if kinds[self.rules[r].first + p] == Kind::Same {
                    waiting[r] -= 1;
                }
            }
        }
        queue.clear();
        for (ri, &w) in waiting.iter().enumerate() {
            if w == 0 {
                let ks = self.kinds_of(&kinds, ri);
                if ks.contains(&Kind::Hard) {
                    hard_ready.push(ri);
                } else {
                    let hows = self.simple_hows(ks);
                    fire(ri, hows, &mut der, &mut reasons, &mut queue, &self.rules);
                }
            }
        }

        let mut sub_cache: HashMap<(usize, usize), usize> = HashMap::new();
        loop {
            while let Some(a) = queue.pop() {
                for &(r, p) in &self.watchers[a] {
                    if kinds[self.rules[r].first + p] != Kind::Same {
                        continue;
                    }
                    waiting[r] -= 1;
                    if waiting[r] == 0 {
                        let ks = self.kinds_of(&kinds, r);
                        if ks.contains(&Kind::Hard) {
                            hard_ready.push(r);
                        } else {
                            let hows = self.simple_hows(ks);
                            fire(r, hows, &mut der, &mut reasons, &mut queue, &self.rules);
                        }
                    }
                }
            }
            let mut progress = false;
            let candidates = std::mem::take(&mut hard_ready);
            for r in candidates {
                if der.contains(self.rules[r].conclusion) {
                    continue;
                }
                let ks = self.kinds_of(&kinds, r);
                let mut hows = Vec::with_capacity(ks.len());
                let mut ok = true;
                for (pi, k) in ks.iter().enumerate() {
                    let pc = self.rules[r].premises[pi].conclusion;
                    let how = match k {
                        Kind::Same => How::Same,
                        Kind::Trivial => How::Ref,
                        Kind::Hard if der.contains(pc) => How::Weak,
                        Kind::Hard => {
                            let sub = match sub_cache.get(&(r, pi)) {
                                Some(&s) => s,
                                None => {
                                    let mut bigger = set.clone();
                                    bigger.union_with(&self.rules[r].premises[pi].hyps);
                                    let s = self.saturate(bigger);
                                    sub_cache.insert((r, pi), s);
                                    s
                                }
                            };
                            if self.contexts[sub].der.contains(pc) {
                                How::Sub(sub)
                            } else {
                                ok = false;
                                break;
                            }
                        }
                    };
                    hows.push(how);
                }
                if ok {
                    fire(r, hows, &mut der, &mut reasons, &mut queue, &self.rules);
                    progress = true;
                } else {
                    hard_ready.push(r);
                }
            }
            if !progress && queue.is_empty() {
                break;
            }
        }

        let id = self.contexts.len();
        self.contexts.push(Context { set: set.clone(), der, reasons });
        self.ctx_ids.insert(set, id);
        id
    }

    fn kinds_of<'k>(&self, kinds: &'k [Kind], r: usize) -> &'k [Kind] {
        let first = self.rules[r].first;
        &kinds[first..first + self.rules[r].premises.len()]
    }

    fn simple_hows(&self, kinds: &[Kind]) -> Vec<How> {
        kinds.iter().map(|k| if *k == Kind::Same { How::Same } else { How::Ref }).collect()
    }

    fn atom_set(&self, bits: &FixedBitSet) -> BTreeSet<Atom> {
        bits.ones().map(|i| self.atoms[i].clone()).collect()
    }

    fn build(&self, id: usize, atom: usize) -> BaseDerivation {
        let ctx = &self.contexts[id];
        let context = self.atom_set(&ctx.set);
        let conclusion = self.atoms[atom].clone();
        match ctx.reasons[atom].as_ref().expect("derived atom has a reason") {
            Reason::Ref => BaseDerivation { context, conclusion, step: Step::Ref },
            Reason::Rule(r, hows) => {
                let premises = self.rules[*r]
                    .premises
                    .iter()
                    .zip(hows)
                    .map(|(p, how)| match how {
                        How::Same => self.build(id, p.conclusion),
                        How::Ref => {
                            let mut bits = ctx.set.clone();
                            bits.union_with(&p.hyps);
                            BaseDerivation {
                                context: self.atom_set(&bits),
                                conclusion: self.atoms[p.conclusion].clone(),
                                step: Step::Ref,
                            }
                        }
                        How::Weak => self.build(id, p.conclusion).weaken(&self.atom_set(&p.hyps)),
                        How::Sub(s) => self.build(*s, p.conclusion),
                    })
                    .collect();
                BaseDerivation { context, conclusion, step: Step::App { rule: *r, premises } }
            }
        }
    }
}

fn fire(r: usize, hows: Vec<How>, der: &mut FixedBitSet, reasons: &mut [Option<Reason>], queue: &mut Vec<usize>, rules: &[CompiledRule]) {
    let c = rules[r].conclusion;
    if !der.contains(c) {
        der.insert(c);
        reasons[c] = Some(Reason::Rule(r, hows));
        queue.push(c);
    }
}

/// A derivation of `ctx |- goal` in `sys`, if one exists.
pub fn derives(sys: &AtomicSystem, ctx: &BTreeSet<Atom>, goal: &Atom) -> Option<BaseDerivation> {
    Engine::new(sys).derive(ctx, goal)
}

pub fn is_derivable(sys: &AtomicSystem, ctx: &BTreeSet<Atom>, goal: &Atom) -> bool {
    Engine::new(sys).derivable(ctx, goal)
}

pub fn consequences(sys: &AtomicSystem, ctx: &BTreeSet<Atom>) -> BTreeSet<Atom> {
    Engine::new(sys).consequences(ctx)
}
