//! The machine model: a cost ledger charging the model's prices, concurrent
//! write arbitration, seeded randomness keyed by call path, and the charged
//! primitives (compaction, padded sort, dedup, budgeted instance boosting).
//!
//! Everything here is a *cost model*, not an execution model: the simulator
//! runs sequentially but charges the round/work prices a synchronous
//! ARBITRARY CRCW PRAM would pay.

use std::cell::RefCell;
use std::collections::HashMap;
use std::rc::Rc;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::graph::ParentForest;
use crate::profile::{clog2, logstar, Profile};

/// Fast non-cryptographic hasher for hot-path maps (the default SipHash
/// dominates the simulator's runtime otherwise).
#[derive(Default, Clone)]
pub struct FxHasher {
    hash: u64,
}

impl std::hash::Hasher for FxHasher {
    fn finish(&self) -> u64 {
        self.hash
    }
    fn write(&mut self, bytes: &[u8]) {
        for &b in bytes {
            self.write_u64(b as u64);
        }
    }
    fn write_u64(&mut self, w: u64) {
        self.hash = (self.hash.rotate_left(5) ^ w).wrapping_mul(0x517cc1b727220a95);
    }
    fn write_u32(&mut self, w: u32) {
        self.write_u64(w as u64);
    }
    fn write_usize(&mut self, w: usize) {
        self.write_u64(w as u64);
    }
}

pub type FxBuild = std::hash::BuildHasherDefault<FxHasher>;
pub type FxHashMap<K, V> = HashMap<K, V, FxBuild>;
pub type FxHashSet<K> = std::collections::HashSet<K, FxBuild>;

pub const FNV_OFFSET: u64 = 0xcbf29ce484222325;
pub const FNV_PRIME: u64 = 0x100000001b3;

pub fn fnv1a64(bytes: &[u8]) -> u64 {
    let mut h = FNV_OFFSET;
    for &b in bytes {
        h ^= b as u64;
        h = h.wrapping_mul(FNV_PRIME);
    }
    h
}

fn fnv_words(words: &[u64]) -> u64 {
    let mut h = FNV_OFFSET;
    for w in words {
        for b in w.to_le_bytes() {
            h ^= b as u64;
            h = h.wrapping_mul(FNV_PRIME);
        }
    }
    h
}

/// Child seed for a call path, derived from the master seed.
pub fn child_seed(master: u64, path: &str) -> u64 {
    let mut h = fnv1a64(&master.to_le_bytes());
    for &b in path.as_bytes() {
        h ^= b as u64;
        h = h.wrapping_mul(FNV_PRIME);
    }
    h
}

// ---------------------------------------------------------------------------
// Cost ledger

#[derive(Clone, Debug, Serialize, Deserialize, PartialEq, Eq)]
pub struct PhaseCost {
    pub label: String,
    pub rounds: u64,
    pub work: u64,
}

/// Round/work totals with a per-label breakdown. The breakdown always sums
/// to the totals: every charge lands in exactly one label.
#[derive(Clone, Debug, Default, Serialize, Deserialize, PartialEq, Eq)]
pub struct CostLedger {
    pub rounds: u64,
    pub work: u64,
    pub phases: Vec<PhaseCost>,
    #[serde(skip)]
    index: HashMap<String, usize>,
}

impl CostLedger {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn charge_labeled(&mut self, label: &str, rounds: u64, work: u64) {
        self.rounds += rounds;
        self.work += work;
        let i = match self.index.get(label) {
            Some(&i) => i,
            None => {
                self.phases.push(PhaseCost {
                    label: label.to_string(),
                    rounds: 0,
                    work: 0,
                });
                self.index.insert(label.to_string(), self.phases.len() - 1);
                self.phases.len() - 1
            }
        };
        self.phases[i].rounds += rounds;
        self.phases[i].work += work;
    }

    pub fn phase(&self, label: &str) -> Option<&PhaseCost> {
        self.index.get(label).map(|&i| &self.phases[i])
    }

    /// Fold boosted instance ledgers into this one: work is summed across all
    /// instances (they all ran); rounds come from the slowest instance, since
    /// the copies run side by side.
    pub fn absorb_boosted(&mut self, instances: &[CostLedger]) {
        if instances.is_empty() {
            return;
        }
        let slowest = instances
            .iter()
            .enumerate()
            .max_by_key(|(i, l)| (l.rounds, usize::MAX - i))
            .map(|(i, _)| i)
            .unwrap();
        for (i, inst) in instances.iter().enumerate() {
            for p in &inst.phases {
                let r = if i == slowest { p.rounds } else { 0 };
                self.charge_labeled(&p.label, r, p.work);
            }
        }
    }
}

// ---------------------------------------------------------------------------
// Write arbitration

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Policy {
    First,
    Last,
    Random,
}

impl std::fmt::Display for Policy {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Policy::First => write!(f, "first"),
            Policy::Last => write!(f, "last"),
            Policy::Random => write!(f, "random"),
        }
    }
}

impl std::str::FromStr for Policy {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "first" => Ok(Policy::First),
            "last" => Ok(Policy::Last),
            "random" => Ok(Policy::Random),
            other => Err(format!("unknown policy: {other} (expected first|last|random)")),
        }
    }
}

#[derive(Clone, Copy, Debug)]
pub struct Write {
    pub cell: u64,
    pub value: u64,
    pub writer: u64,
}

/// One concurrent write a cell has accepted so far.
#[derive(Clone, Copy, Debug)]
pub struct CellWrite {
    pub value: u64,
    pub writer: u64,
}

/// Does `new` displace `old` on `cell`? First/last-writer depend on the
/// (deterministic) submission order; the seeded-random policy scores each
/// write by a hash so the winner is independent of submission order.
pub fn displaces(policy: Policy, seed: u64, cell: u64, old: CellWrite, new: CellWrite) -> bool {
    match policy {
        Policy::First => false,
        Policy::Last => true,
        Policy::Random => {
            let so = fnv_words(&[seed, cell, old.writer, old.value]);
            let sn = fnv_words(&[seed, cell, new.writer, new.value]);
            (sn, new.writer, new.value) > (so, old.writer, old.value)
        }
    }
}

/// Arbitrated concurrent writes into vertex-indexed cells: a dense-key
/// variant of `crcw_round` with identical semantics, for hot paths. Callers
/// charge the round/work themselves.
pub struct VertexCells {
    slot: FxHashMap<u32, CellWrite>,
    policy: Policy,
    seed: u64,
}

impl VertexCells {
    pub fn new(policy: Policy, seed: u64) -> Self {
        VertexCells { slot: FxHashMap::default(), policy, seed }
    }

    pub fn for_ctx(ctx: &Ctx) -> Self {
        Self::new(ctx.policy, ctx.policy_seed())
    }

    pub fn write(&mut self, cell: u32, value: u64, writer: u64) {
        let cand = CellWrite { value, writer };
        match self.slot.get(&cell) {
            None => {
                self.slot.insert(cell, cand);
            }
            Some(&old) => {
                if displaces(self.policy, self.seed, cell as u64, old, cand) {
                    self.slot.insert(cell, cand);
                }
            }
        }
    }

    pub fn contains(&self, cell: u32) -> bool {
        self.slot.contains_key(&cell)
    }

    /// Surviving (cell, value) pairs in deterministic (sorted) order.
    pub fn into_sorted(self) -> Vec<(u32, u64)> {
        let mut out: Vec<(u32, u64)> = self.slot.into_iter().map(|(c, w)| (c, w.value)).collect();
        out.sort_unstable();
        out
    }
}

// ---------------------------------------------------------------------------
// Execution context

#[derive(Clone, Copy, Debug)]
pub struct InstanceBudget {
    pub rounds: u64,
    pub work: u64,
    /// Block pool capacity, in simulated cells, if the instance allocates blocks.
    pub pool: Option<u64>,
}

#[derive(Debug, Error)]
pub enum InstanceFail {
    #[error("instance exceeded its round/work budget")]
    Halted,
    #[error("instance exhausted its block pool")]
    PoolExhausted,
}

#[derive(Debug, Clone, Serialize)]
pub struct InstanceDiag {
    pub path: String,
    pub seed: u64,
    pub rounds: u64,
    pub work: u64,
    pub outcome: String,
}

#[derive(Debug, Error)]
#[error("all {} boosted instances failed: {diagnostics:?}", diagnostics.len())]
pub struct RetryExhausted {
    pub diagnostics: Vec<InstanceDiag>,
}

/// Boundary instrumentation: (subroutine name, forest, vertices the
/// subroutine claims are flat at this point).
pub type BoundaryHook = Rc<RefCell<dyn FnMut(&str, &ParentForest, &[u32])>>;

/// Carries the ledger, arbitration policy, profile, and the seed tree through
/// the pipeline. Child randomness is keyed by the call path so every
/// subroutine draws from its own stream.
pub struct Ctx {
    pub ledger: CostLedger,
    pub policy: Policy,
    pub profile: Profile,
    pub master_seed: u64,
    policy_seed: u64,
    path: String,
    labels: Vec<String>,
    phase: Option<String>,
    budget: Option<InstanceBudget>,
    pool_used: u64,
    /// (protected prefix, xor) — perturbs every derived seed whose path does
    /// not start with the prefix. Used to test randomness isolation.
    pub perturb_outside: Option<(String, u64)>,
    /// Invoked at subroutine boundaries when instrumentation is on.
    pub boundary: Option<BoundaryHook>,
}

impl Ctx {
    pub fn new(profile: Profile, policy: Policy, master_seed: u64) -> Self {
        Ctx {
            ledger: CostLedger::new(),
            policy,
            profile,
            master_seed,
            policy_seed: child_seed(master_seed, "policy"),
            path: String::new(),
            labels: Vec::new(),
            phase: None,
            budget: None,
            pool_used: 0,
            perturb_outside: None,
            boundary: None,
        }
    }

    pub fn policy_seed(&self) -> u64 {
        self.policy_seed
    }

    pub fn path(&self) -> &str {
        &self.path
    }

    /// Extend the call path for the duration of `f`.
    pub fn scoped<T>(&mut self, seg: &str, f: impl FnOnce(&mut Ctx) -> T) -> T {
        let save = self.path.len();
        if !self.path.is_empty() {
            self.path.push('/');
        }
        self.path.push_str(seg);
        let out = f(self);
        self.path.truncate(save);
        out
    }

    /// Attribute charges to `label` for the duration of `f`.
    pub fn labeled<T>(&mut self, label: &str, f: impl FnOnce(&mut Ctx) -> T) -> T {
        self.labels.push(label.to_string());
        let out = f(self);
        self.labels.pop();
        out
    }

    /// Mark all charges made during `f` as belonging to the named phase; the
    /// phase tag prefixes the innermost label so the per-label breakdown
    /// stays disjoint while per-phase totals remain recoverable by prefix.
    pub fn phased<T>(&mut self, tag: &str, f: impl FnOnce(&mut Ctx) -> T) -> T {
        let save = self.phase.replace(tag.to_string());
        let out = f(self);
        self.phase = save;
        out
    }

    pub fn charge(&mut self, rounds: u64, work: u64) {
        let base = self.labels.last().map(String::as_str).unwrap_or("unlabeled");
        let label = match &self.phase {
            Some(p) => format!("{p}/{base}"),
            None => base.to_string(),
        };
        self.ledger.charge_labeled(&label, rounds, work);
    }

    /// Seed for the stream named `tag` under the current call path.
    pub fn seed_for(&self, tag: &str) -> u64 {
        let full = if self.path.is_empty() {
            tag.to_string()
        } else {
            format!("{}/{}", self.path, tag)
        };
        let mut s = child_seed(self.master_seed, &full);
        if let Some((prefix, x)) = &self.perturb_outside {
            if !full.starts_with(prefix.as_str()) {
                s ^= x;
            }
        }
        s
    }

    pub fn rng(&self, tag: &str) -> ChaCha8Rng {
        ChaCha8Rng::seed_from_u64(self.seed_for(tag))
    }

    pub fn over_budget(&self) -> bool {
        match self.budget {
            Some(b) => self.ledger.rounds > b.rounds || self.ledger.work > b.work,
            None => false,
        }
    }

    /// Check the budget, to be called at loop heads inside budgeted instances.
    pub fn guard(&self) -> Result<(), InstanceFail> {
        if self.over_budget() {
            Err(InstanceFail::Halted)
        } else {
            Ok(())
        }
    }

    /// Simulated block allocation from the instance pool.
    pub fn alloc_block(&mut self, cells: u64) -> Result<(), InstanceFail> {
        self.pool_used = self.pool_used.saturating_add(cells);
        if let Some(b) = self.budget {
            if let Some(cap) = b.pool {
                if self.pool_used > cap {
                    return Err(InstanceFail::PoolExhausted);
                }
            }
        }
        Ok(())
    }

    pub fn check_boundary(&mut self, name: &str, forest: &ParentForest, claimed_flat: &[u32]) {
        if let Some(hook) = &self.boundary {
            let hook = hook.clone();
            (hook.borrow_mut())(name, forest, claimed_flat);
        }
    }

    fn child(&self, seg: &str, budget: InstanceBudget) -> Ctx {
        let path = if self.path.is_empty() {
            seg.to_string()
        } else {
            format!("{}/{}", self.path, seg)
        };
        Ctx {
            ledger: CostLedger::new(),
            policy: self.policy,
            profile: self.profile,
            master_seed: self.master_seed,
            policy_seed: self.policy_seed,
            path,
            labels: self.labels.clone(),
            phase: self.phase.clone(),
            budget: Some(budget),
            pool_used: 0,
            perturb_outside: self.perturb_outside.clone(),
            boundary: self.boundary.clone(),
        }
    }
}

// ---------------------------------------------------------------------------
// Charged primitives

/// One synchronous concurrent-write round over arbitrary cells. Charges one
/// round and one unit of work per write. Returns the surviving value per cell.
pub fn crcw_round(ctx: &mut Ctx, writes: &[Write]) -> HashMap<u64, u64> {
    ctx.charge(1, writes.len() as u64);
    let mut cells: HashMap<u64, CellWrite> = HashMap::new();
    for w in writes {
        let cand = CellWrite {
            value: w.value,
            writer: w.writer,
        };
        match cells.get(&w.cell) {
            None => {
                cells.insert(w.cell, cand);
            }
            Some(&old) => {
                if displaces(ctx.policy, ctx.policy_seed(), w.cell, old, cand) {
                    cells.insert(w.cell, cand);
                }
            }
        }
    }
    cells.into_iter().map(|(c, w)| (c, w.value)).collect()
}

/// Move the k occupied cells to the front of an array of length <= max(2k, 1).
/// Charged ceil(log* n) rounds and |array| work.
pub fn approximate_compaction<T: Clone>(
    ctx: &mut Ctx,
    n_universe: usize,
    arr: &[Option<T>],
) -> Vec<Option<T>> {
    ctx.charge(logstar(n_universe) as u64, arr.len() as u64);
    let items: Vec<T> = arr.iter().filter_map(|c| c.clone()).collect();
    let k = items.len();
    let out_len = (2 * k).max(1).min(arr.len().max(1));
    let mut out: Vec<Option<T>> = vec![None; out_len];
    for (i, it) in items.into_iter().enumerate() {
        out[i] = Some(it);
    }
    out
}

/// Stable sort of m keyed items into a padded array of length 2m (item i at
/// cell 2i). Charged ceil(log log m) rounds and m work.
pub fn padded_sort<T: Clone>(ctx: &mut Ctx, items: &[(u64, T)]) -> Vec<Option<(u64, T)>> {
    let m = items.len();
    let rounds = clog2(clog2(m.max(2)) as usize).max(1) as u64;
    ctx.charge(rounds, m as u64);
    let mut sorted: Vec<(u64, T)> = items.to_vec();
    sorted.sort_by_key(|(k, _)| *k);
    let mut out: Vec<Option<(u64, T)>> = vec![None; 2 * m.max(1)];
    for (i, it) in sorted.into_iter().enumerate() {
        out[2 * i] = Some(it);
    }
    out
}

/// Distinct non-loop unordered pairs, first occurrence kept (with its payload).
/// Charged ceil(log* n) rounds and |edges| work.
pub fn perfect_hash_dedup<T: Clone>(
    ctx: &mut Ctx,
    n_universe: usize,
    edges: &[(u32, u32, T)],
) -> Vec<(u32, u32, T)> {
    ctx.charge(logstar(n_universe) as u64, edges.len() as u64);
    let mut seen = std::collections::HashSet::new();
    let mut out = Vec::new();
    for (u, v, t) in edges {
        if u == v {
            continue;
        }
        let key = (*u.min(v), *u.max(v));
        if seen.insert(key) {
            out.push((*u, *v, t.clone()));
        }
    }
    out
}

/// Run `copies` seeded instances of a budgeted computation side by side.
/// Every copy is charged (work summed, rounds from the slowest); the first
/// copy in seed order that finishes within budget and validates wins.
pub fn budgeted_instances<T>(
    ctx: &mut Ctx,
    tag: &str,
    copies: u32,
    budget: InstanceBudget,
    mut run: impl FnMut(&mut Ctx, u32) -> Result<T, InstanceFail>,
    mut valid: impl FnMut(&T) -> bool,
) -> Result<T, RetryExhausted> {
    let mut ledgers = Vec::new();
    let mut winner: Option<T> = None;
    let mut diags = Vec::new();
    for j in 0..copies.max(1) {
        let mut child = ctx.child(&format!("{tag}/instance{j}"), budget);
        let res = run(&mut child, j);
        let outcome = match &res {
            Ok(out) if winner.is_none() && valid(out) => "valid".to_string(),
            Ok(_) => "finished".to_string(),
            Err(e) => format!("failed: {e}"),
        };
        diags.push(InstanceDiag {
            path: child.path.clone(),
            seed: child.seed_for("instance"),
            rounds: child.ledger.rounds,
            work: child.ledger.work,
            outcome: outcome.clone(),
        });
        if outcome == "valid" {
            winner = res.ok();
        }
        ledgers.push(child.ledger);
    }
    ctx.ledger.absorb_boosted(&ledgers);
    winner.ok_or(RetryExhausted { diagnostics: diags })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ctx() -> Ctx {
        Ctx::new(Profile::desk(), Policy::Random, 7)
    }

    #[test]
    fn seeds_are_path_stable_and_distinct() {
        let c = ctx();
        assert_eq!(c.seed_for("a"), c.seed_for("a"));
        assert_ne!(c.seed_for("a"), c.seed_for("b"));
        let mut c2 = Ctx::new(Profile::desk(), Policy::Random, 7);
        let outer = c2.seed_for("a");
        let inner = c2.scoped("sub", |c| c.seed_for("a"));
        assert_ne!(outer, inner);
    }

    #[test]
    fn perturb_respects_protected_prefix() {
        let mut c = ctx();
        let h1 = c.scoped("h1", |c| c.seed_for("draw"));
        let other = c.scoped("elsewhere", |c| c.seed_for("draw"));
        c.perturb_outside = Some(("h1".to_string(), 0xdead));
        let h1b = c.scoped("h1", |c| c.seed_for("draw"));
        let otherb = c.scoped("elsewhere", |c| c.seed_for("draw"));
        assert_eq!(h1, h1b);
        assert_eq!(other ^ 0xdead, otherb);
    }

    #[test]
    fn ledger_breakdown_sums_to_totals() {
        let mut c = ctx();
        c.labeled("a", |c| c.charge(2, 10));
        c.labeled("b", |c| {
            c.charge(1, 5);
            c.labeled("c", |c| c.charge(3, 7));
        });
        c.charge(1, 1);
        let l = &c.ledger;
        let (sr, sw) = l
            .phases
            .iter()
            .fold((0, 0), |(r, w), p| (r + p.rounds, w + p.work));
        assert_eq!((sr, sw), (l.rounds, l.work));
        assert_eq!(l.phase("a").unwrap().work, 10);
        assert_eq!(l.phase("c").unwrap().rounds, 3);
    }

    #[test]
    fn crcw_first_last_policies() {
        let writes = [
            Write { cell: 1, value: 10, writer: 0 },
            Write { cell: 1, value: 20, writer: 1 },
            Write { cell: 2, value: 5, writer: 2 },
        ];
        let mut cf = Ctx::new(Profile::desk(), Policy::First, 1);
        let rf = crcw_round(&mut cf, &writes);
        assert_eq!(rf[&1], 10);
        assert_eq!(rf[&2], 5);
        let mut cl = Ctx::new(Profile::desk(), Policy::Last, 1);
        let rl = crcw_round(&mut cl, &writes);
        assert_eq!(rl[&1], 20);
        assert_eq!(cf.ledger.rounds, 1);
        assert_eq!(cf.ledger.work, 3);
    }

    #[test]
    fn crcw_random_is_order_independent() {
        let mut writes: Vec<Write> = (0..9)
            .map(|i| Write { cell: i % 3, value: 100 + i, writer: i })
            .collect();
        let mut c1 = ctx();
        let r1 = crcw_round(&mut c1, &writes);
        writes.reverse();
        let mut c2 = ctx();
        let r2 = crcw_round(&mut c2, &writes);
        assert_eq!(r1, r2);
    }

    #[test]
    fn compaction_contract() {
        let mut c = ctx();
        let arr: Vec<Option<u32>> = (0..16).map(|i| if i % 5 == 0 { Some(i) } else { None }).collect();
        let out = approximate_compaction(&mut c, 1 << 16, &arr);
        let k = 4; // 0, 5, 10, 15
        assert!(out.len() <= 2 * k);
        let front: Vec<u32> = out.iter().filter_map(|x| *x).collect();
        assert_eq!(front, vec![0, 5, 10, 15]);
        assert_eq!(c.ledger.rounds, logstar(1 << 16) as u64);
        assert_eq!(c.ledger.work, 16);
    }

    #[test]
    fn padded_sort_is_stable_and_padded() {
        let mut c = ctx();
        let items: Vec<(u64, u32)> = vec![(3, 0), (1, 1), (3, 2), (1, 3), (2, 4)];
        let out = padded_sort(&mut c, &items);
        assert_eq!(out.len(), 10);
        let seq: Vec<(u64, u32)> = out.iter().filter_map(|x| *x).collect();
        assert_eq!(seq, vec![(1, 1), (1, 3), (2, 4), (3, 0), (3, 2)]);
        assert_eq!(c.ledger.work, 5);
    }

    #[test]
    fn dedup_contract() {
        let mut c = ctx();
        let edges = vec![(1, 2, 0usize), (2, 1, 1), (3, 3, 2), (2, 3, 3), (1, 2, 4)];
        let out = perfect_hash_dedup(&mut c, 100, &edges);
        let pairs: Vec<(u32, u32)> = out.iter().map(|&(u, v, _)| (u, v)).collect();
        assert_eq!(pairs, vec![(1, 2), (2, 3)]);
        assert_eq!(out[0].2, 0); // first occurrence retained
    }

    #[test]
    fn boosting_picks_first_valid_and_charges_all() {
        let mut c = ctx();
        let budget = InstanceBudget { rounds: 10, work: 100, pool: None };
        let out = budgeted_instances(
            &mut c,
            "boost",
            3,
            budget,
            |child, j| {
                child.charge(j as u64 + 1, 10);
                if j == 0 {
                    Err(InstanceFail::Halted)
                } else {
                    Ok(j)
                }
            },
            |_| true,
        )
        .unwrap();
        assert_eq!(out, 1); // first valid in seed order
        assert_eq!(c.ledger.work, 30); // all copies charged
        assert_eq!(c.ledger.rounds, 3); // slowest instance
    }

    #[test]
    fn boosting_reports_diagnostics_on_exhaustion() {
        let mut c = ctx();
        let budget = InstanceBudget { rounds: 1, work: 1, pool: None };
        let err = budgeted_instances(
            &mut c,
            "boost",
            2,
            budget,
            |child, _| -> Result<(), InstanceFail> {
                child.charge(5, 5);
                child.guard()?;
                Ok(())
            },
            |_| true,
        )
        .unwrap_err();
        assert_eq!(err.diagnostics.len(), 2);
        assert!(err.diagnostics[0].outcome.contains("budget"));
    }

    #[test]
    fn pool_exhaustion_signals() {
        let c = ctx();
        let budget = InstanceBudget { rounds: 100, work: 100, pool: Some(10) };
        let mut child = c.child("alloc", budget);
        assert!(child.alloc_block(8).is_ok());
        assert!(matches!(child.alloc_block(8), Err(InstanceFail::PoolExhausted)));
    }
}
