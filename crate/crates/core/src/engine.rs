//! Fixpoint propagation of interval facts over an expression.
//!
//! Every subexpression becomes a node carrying intervals for g4, τ, s and
//! the r-shake genera for the queried twists, a Pareto-maximal set of
//! Legendrian witnesses, the best suitability certificate and the Arf
//! invariant. Rules only ever narrow intervals or add dominating witnesses,
//! so the fixpoint does not depend on the order rules fire in.
//!
//! Satellites whose pattern is a twist or an admissible composition are
//! unfolded into iterated satellites of registry patterns before
//! propagation, so `(sat (compose (twist P 0) P) :r 5 K)` shares nodes with
//! `(sat P :r 5 (sat P :r 5 K))`.

use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::fmt;

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::alexander::{alexander, arf, Arf};
use crate::expr::{KnotExpr, PatternRef};
use crate::interval::{ceil_half, floor_half, Bound, Interval};
use crate::legendrian::{
    connect_sum_witness, destabilize_to, reachable, reverse_witness, satellite_witness, wh_witness, LegWitness,
};
use crate::normalize::{collapse_allowed, normalize};
use crate::pattern::{PatternDatum, Registry};
use crate::suitability::suitability_genus_floor;
use crate::trace::{Caveats, TraceArena, TraceId};
use crate::Error;

pub type NodeId = usize;

/// Which invariant an interval bounds.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Inv {
    G4,
    Tau,
    S,
    Gsh(i64),
}

impl fmt::Display for Inv {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Inv::G4 => f.write_str("g4"),
            Inv::Tau => f.write_str("tau"),
            Inv::S => f.write_str("s"),
            Inv::Gsh(r) => write!(f, "gsh^{r}"),
        }
    }
}

#[derive(Clone, Debug)]
pub enum Kind {
    Unknot,
    Torus { p: i64, q: i64 },
    Mirror(NodeId),
    Reverse(NodeId),
    Sum(Vec<NodeId>),
    Wh(NodeId),
    Sat { pattern: PatternDatum, r: i64, child: NodeId },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct Witness {
    pub leg: LegWitness,
    pub trace: TraceId,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct Cert {
    pub r: i64,
    pub trace: TraceId,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct ArfVal {
    pub value: Arf,
    pub trace: Option<TraceId>,
}

#[derive(Clone, Debug)]
pub struct Facts {
    pub g4: Interval,
    pub tau: Interval,
    pub s: Interval,
    pub gsh: BTreeMap<i64, Interval>,
    pub arf: ArfVal,
    pub witnesses: Vec<Witness>,
    pub cert: Option<Cert>,
}

impl Facts {
    pub fn get(&self, inv: Inv) -> Option<&Interval> {
        match inv {
            Inv::G4 => Some(&self.g4),
            Inv::Tau => Some(&self.tau),
            Inv::S => Some(&self.s),
            Inv::Gsh(r) => self.gsh.get(&r),
        }
    }

    fn get_mut(&mut self, inv: Inv) -> Option<&mut Interval> {
        match inv {
            Inv::G4 => Some(&mut self.g4),
            Inv::Tau => Some(&mut self.tau),
            Inv::S => Some(&mut self.s),
            Inv::Gsh(r) => self.gsh.get_mut(&r),
        }
    }

    /// Largest Thurston–Bennequin number among the witnesses.
    pub fn tb_lo(&self) -> Option<&Witness> {
        self.witnesses.iter().max_by_key(|w| (w.leg.tb, std::cmp::Reverse(w.trace)))
    }
}

#[derive(Clone, Debug)]
pub struct Node {
    pub expr: KnotExpr,
    pub kind: Kind,
    pub facts: Facts,
}

/// A fact supplied by the user rather than derived.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ExternalFact {
    Slice(KnotExpr),
    Suitable(KnotExpr, i64),
    Witness(KnotExpr, LegWitness),
    /// `g_sh^r <= 0`, optionally valid only modulo SPC4.
    ShakeSlice { expr: KnotExpr, r: i64, spc4: bool },
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum Order {
    #[default]
    Fixed,
    /// Rules and nodes visited in a fresh random order every sweep.
    Shuffled(u64),
}

#[derive(Clone, Debug, Default)]
pub struct Query {
    /// Twists whose shake genus is tracked; closed under negation
    /// internally, and the twists of all satellites are added.
    pub rs: Vec<i64>,
    pub externals: Vec<ExternalFact>,
    /// Further expressions to propagate alongside the root.
    pub extra: Vec<KnotExpr>,
    pub order: Order,
}

impl Query {
    pub fn at(rs: impl IntoIterator<Item = i64>) -> Self {
        Query {
            rs: rs.into_iter().collect(),
            ..Query::default()
        }
    }
}

/// Two rules disagree: an interval became empty.
#[derive(Clone, Debug)]
pub struct Contradiction {
    pub subject: String,
    pub invariant: String,
    pub lo: i64,
    pub hi: i64,
    pub lo_trace: TraceId,
    pub hi_trace: TraceId,
    /// Rule names anywhere in the lower- and upper-bound derivations.
    pub lo_rules: Vec<&'static str>,
    pub hi_rules: Vec<&'static str>,
    pub explanation: String,
}

impl fmt::Display for Contradiction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "contradiction: {} of {} has lower bound {} (#{} {}) above upper bound {} (#{} {})",
            self.invariant,
            self.subject,
            self.lo,
            self.lo_trace,
            self.lo_rules.first().copied().unwrap_or("?"),
            self.hi,
            self.hi_trace,
            self.hi_rules.first().copied().unwrap_or("?"),
        )
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
enum Rule {
    Axioms,
    GenusTauS,
    SliceBennequin,
    ShakeBennequin,
    TbShake,
    ShakeBelowGenus,
    SuitabilityConsequences,
    SuitableByDefinition,
    ShakeEqualsGenus,
    ArfObstruction,
    TauObstruction,
    Sum,
    Whitehead,
    Satellite,
    Transfer,
}

const RULES: [Rule; 15] = [
    Rule::Axioms,
    Rule::GenusTauS,
    Rule::SliceBennequin,
    Rule::ShakeBennequin,
    Rule::TbShake,
    Rule::ShakeBelowGenus,
    Rule::SuitabilityConsequences,
    Rule::SuitableByDefinition,
    Rule::ShakeEqualsGenus,
    Rule::ArfObstruction,
    Rule::TauObstruction,
    Rule::Sum,
    Rule::Whitehead,
    Rule::Satellite,
    Rule::Transfer,
];

/// Completed propagation state.
#[derive(Clone, Debug)]
pub struct FactStore {
    nodes: Vec<Node>,
    index: HashMap<KnotExpr, NodeId>,
    pub trace: TraceArena,
    rs: Vec<i64>,
    roots: Vec<NodeId>,
    sweeps: usize,
    nonneg: TraceId,
}

/// Interval endpoints only, for comparing stores.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct NodeValues {
    pub expr: String,
    pub intervals: Vec<(Inv, Option<i64>, Option<i64>)>,
    pub arf: Arf,
    pub witnesses: Vec<LegWitness>,
    pub cert: Option<i64>,
}

/// Rewrite satellites so every pattern is a registry name or a composition
/// that the collapse criterion does not allow to be split.
pub fn unfold(e: &KnotExpr, registry: &Registry) -> Result<KnotExpr, Error> {
    Ok(match e {
        KnotExpr::Unknot | KnotExpr::Torus { .. } => e.clone(),
        KnotExpr::Mirror(k) => KnotExpr::Mirror(Box::new(unfold(k, registry)?)),
        KnotExpr::Reverse(k) => KnotExpr::Reverse(Box::new(unfold(k, registry)?)),
        KnotExpr::Wh(k) => KnotExpr::Wh(Box::new(unfold(k, registry)?)),
        KnotExpr::Sum(xs) => KnotExpr::Sum(xs.iter().map(|x| unfold(x, registry)).collect::<Result<_, _>>()?),
        KnotExpr::Sat {
            pattern,
            r,
            companion,
        } => unfold_sat(pattern, *r, unfold(companion, registry)?, registry)?,
    })
}

fn unfold_sat(p: &PatternRef, q: i64, k: KnotExpr, registry: &Registry) -> Result<KnotExpr, Error> {
    match p {
        PatternRef::Named(_) => {
            registry.resolve(p)?;
            Ok(KnotExpr::sat(p.clone(), q, k))
        }
        PatternRef::Twist(x, t) => unfold_sat(x, q + t, k, registry),
        PatternRef::Compose(x, y) => {
            if collapse_allowed(registry.winding(y)?, q) {
                let inner = unfold_sat(y, q, k, registry)?;
                unfold_sat(x, q, inner, registry)
            } else {
                registry.resolve(p)?;
                Ok(KnotExpr::sat(p.clone(), q, k))
            }
        }
    }
}

fn collect_twists(e: &KnotExpr, out: &mut BTreeSet<i64>) {
    if let KnotExpr::Sat { r, .. } = e {
        out.insert(*r);
    }
    for c in e.children() {
        collect_twists(c, out);
    }
}

/// Propagate facts about `e` (normalized first) to a fixpoint.
pub fn propagate(e: &KnotExpr, registry: &Registry, query: &Query) -> Result<FactStore, Error> {
    let root = normalize(e, registry);
    let mut exprs = vec![root];
    exprs.extend(query.extra.iter().map(|x| normalize(x, registry)));
    for f in &query.externals {
        let x = match f {
            ExternalFact::Slice(x) | ExternalFact::Suitable(x, _) | ExternalFact::Witness(x, _) => x,
            ExternalFact::ShakeSlice { expr, .. } => expr,
        };
        exprs.push(normalize(x, registry));
    }
    let mut unfolded = Vec::with_capacity(exprs.len());
    for x in &exprs {
        unfolded.push(unfold(x, registry)?);
    }
    let mut rs: BTreeSet<i64> = query.rs.iter().copied().collect();
    for f in &query.externals {
        if let ExternalFact::ShakeSlice { r, .. } = f {
            rs.insert(*r);
        }
    }
    for x in &unfolded {
        collect_twists(x, &mut rs);
    }
    let rs: Vec<i64> = rs
        .iter()
        .flat_map(|&r| [r, -r])
        .collect::<BTreeSet<_>>()
        .into_iter()
        .collect();

    let mut trace = TraceArena::new();
    let nonneg = trace.add("genus-nonnegative", "genera are non-negative".into(), vec![], Caveats::NONE);
    let mut st = FactStore {
        nodes: Vec::new(),
        index: HashMap::new(),
        trace,
        rs,
        roots: Vec::new(),
        sweeps: 0,
        nonneg,
    };
    for (x, u) in exprs.iter().zip(&unfolded) {
        let id = st.intern(u, registry)?;
        st.index.entry(x.clone()).or_insert(id);
        st.roots.push(id);
    }
    let n_ext = query.externals.len();
    let ext_roots: Vec<NodeId> = st.roots[st.roots.len() - n_ext..].to_vec();
    for (f, &id) in query.externals.iter().zip(&ext_roots) {
        st.apply_external(f, id)?;
    }
    st.run(query.order)?;
    Ok(st)
}

impl FactStore {
    fn intern(&mut self, e: &KnotExpr, registry: &Registry) -> Result<NodeId, Error> {
        if let Some(&id) = self.index.get(e) {
            return Ok(id);
        }
        let kind = match e {
            KnotExpr::Unknot => Kind::Unknot,
            KnotExpr::Torus { p, q } => Kind::Torus { p: *p, q: *q },
            KnotExpr::Mirror(k) => Kind::Mirror(self.intern(k, registry)?),
            KnotExpr::Reverse(k) => Kind::Reverse(self.intern(k, registry)?),
            KnotExpr::Wh(k) => Kind::Wh(self.intern(k, registry)?),
            KnotExpr::Sum(xs) => {
                let mut ids = Vec::with_capacity(xs.len());
                for x in xs {
                    ids.push(self.intern(x, registry)?);
                }
                Kind::Sum(ids)
            }
            KnotExpr::Sat {
                pattern,
                r,
                companion,
            } => Kind::Sat {
                pattern: registry.resolve(pattern)?,
                r: *r,
                child: self.intern(companion, registry)?,
            },
        };
        let arf = self.arf_fact(e, registry);
        let nonneg = Some(Bound {
            value: 0,
            trace: self.nonneg,
        });
        let facts = Facts {
            g4: Interval { lo: nonneg, hi: None },
            tau: Interval::unbounded(),
            s: Interval::unbounded(),
            gsh: self.rs.iter().map(|&r| (r, Interval { lo: nonneg, hi: None })).collect(),
            arf,
            witnesses: Vec::new(),
            cert: None,
        };
        let id = self.nodes.len();
        self.nodes.push(Node {
            expr: e.clone(),
            kind,
            facts,
        });
        self.index.insert(e.clone(), id);
        Ok(id)
    }

    fn arf_fact(&mut self, e: &KnotExpr, registry: &Registry) -> ArfVal {
        if let Some(delta) = alexander(e, registry) {
            let value = crate::alexander::arf_from_alexander(&delta);
            let detail = format!("Δ = {delta}, Δ(-1) = {}", delta.eval(-1));
            let t = self.trace.add("arf-from-alexander", detail, vec![], Caveats::NONE);
            return ArfVal { value, trace: Some(t) };
        }
        match arf(e, registry) {
            Arf::Unknown => ArfVal {
                value: Arf::Unknown,
                trace: None,
            },
            v => {
                let t = self
                    .trace
                    .add("arf-additivity", format!("Arf({e}) = {} mod 2", v.bit().unwrap()), vec![], Caveats::NONE);
                ArfVal { value: v, trace: Some(t) }
            }
        }
    }

    fn apply_external(&mut self, f: &ExternalFact, id: NodeId) -> Result<(), Error> {
        let e = self.nodes[id].expr.to_string();
        match f {
            ExternalFact::Slice(_) => {
                self.lower(id, Inv::G4, 0, "external-slice", &[], Caveats::EXTERNAL, || format!("{e} is slice (supplied)"))?;
            }
            ExternalFact::Suitable(_, r) => {
                self.add_cert(id, *r, "external-suitable", &[], Caveats::EXTERNAL, || {
                    format!("{e} is {r}-suitable (supplied)")
                });
            }
            ExternalFact::Witness(_, w) => {
                let w = LegWitness::new(w.tb, w.rot)?;
                self.add_witness(id, w, "external-legendrian", &[], Caveats::EXTERNAL, || {
                    format!("{e} has a Legendrian representative {w} (supplied)")
                });
            }
            ExternalFact::ShakeSlice { r, spc4, .. } => {
                let own = if *spc4 { Caveats::EXTERNAL.union(Caveats::SPC4) } else { Caveats::EXTERNAL };
                self.lower(id, Inv::Gsh(*r), 0, "external-shake-slice", &[], own, || {
                    format!("{e} is {r}-shake slice (supplied)")
                })?;
            }
        }
        Ok(())
    }

    fn run(&mut self, order: Order) -> Result<(), Error> {
        let mut rng = match order {
            Order::Fixed => None,
            Order::Shuffled(seed) => Some(ChaCha8Rng::seed_from_u64(seed)),
        };
        let mut rules = RULES.to_vec();
        let mut ids: Vec<NodeId> = (0..self.nodes.len()).collect();
        let limit = 10_000 + 100 * self.nodes.len();
        loop {
            if let Some(rng) = rng.as_mut() {
                rules.shuffle(rng);
                ids.shuffle(rng);
            }
            self.sweeps += 1;
            let mut changed = false;
            for &rule in &rules {
                for &n in &ids {
                    changed |= self.apply(rule, n)?;
                }
            }
            if !changed {
                return Ok(());
            }
            assert!(self.sweeps < limit, "internal error: propagation did not terminate");
        }
    }

    // ---- accessors ----

    pub fn nodes(&self) -> &[Node] {
        &self.nodes
    }

    pub fn node(&self, id: NodeId) -> &Node {
        &self.nodes[id]
    }

    pub fn root(&self) -> NodeId {
        self.roots[0]
    }

    pub fn roots(&self) -> &[NodeId] {
        &self.roots
    }

    pub fn rs(&self) -> &[i64] {
        &self.rs
    }

    /// Sweeps over all rules and nodes, including the final one that
    /// changed nothing.
    pub fn sweeps(&self) -> usize {
        self.sweeps
    }

    /// Sweeps that narrowed something.
    pub fn iterations(&self) -> usize {
        self.sweeps.saturating_sub(1)
    }

    /// `(number of nodes) · (widest finite slice-genus bound + 2)`.
    pub fn iteration_bound(&self) -> usize {
        let width = self
            .nodes
            .iter()
            .filter_map(|n| n.facts.g4.hi())
            .max()
            .unwrap_or(0)
            .max(0) as usize;
        self.nodes.len() * (width + 2)
    }

    /// Node for an expression as given, or after normalization.
    pub fn lookup(&self, e: &KnotExpr, registry: &Registry) -> Option<NodeId> {
        if let Some(&id) = self.index.get(e) {
            return Some(id);
        }
        let n = normalize(e, registry);
        if let Some(&id) = self.index.get(&n) {
            return Some(id);
        }
        unfold(&n, registry).ok().and_then(|u| self.index.get(&u).copied())
    }

    pub fn facts(&self, id: NodeId) -> &Facts {
        &self.nodes[id].facts
    }

    pub fn interval(&self, id: NodeId, inv: Inv) -> Option<Interval> {
        self.nodes[id].facts.get(inv).copied()
    }

    pub fn caveats(&self, b: Option<Bound>) -> Caveats {
        b.map_or(Caveats::NONE, |b| self.trace.get(b.trace).map_or(Caveats::NONE, |t| t.caveats))
    }

    pub fn interval_caveats(&self, iv: &Interval) -> Caveats {
        self.caveats(iv.lo).union(self.caveats(iv.hi))
    }

    pub fn values(&self) -> Vec<NodeValues> {
        self.nodes
            .iter()
            .map(|n| {
                let f = &n.facts;
                let mut intervals = vec![
                    (Inv::G4, f.g4.lo(), f.g4.hi()),
                    (Inv::Tau, f.tau.lo(), f.tau.hi()),
                    (Inv::S, f.s.lo(), f.s.hi()),
                ];
                intervals.extend(f.gsh.iter().map(|(&r, iv)| (Inv::Gsh(r), iv.lo(), iv.hi())));
                NodeValues {
                    expr: n.expr.to_string(),
                    intervals,
                    arf: f.arf.value,
                    witnesses: f.witnesses.iter().map(|w| w.leg).collect(),
                    cert: f.cert.map(|c| c.r),
                }
            })
            .collect()
    }

    // ---- narrowing primitives ----

    fn better(&self, current: Option<Bound>, v: i64, premises: &[TraceId], own: Caveats, is_lo: bool) -> bool {
        match current {
            None => true,
            Some(b) if b.value == v => self
                .trace
                .caveats_of(premises)
                .union(own)
                .weaker_than(self.caveats(Some(b))),
            Some(b) => {
                if is_lo {
                    v > b.value
                } else {
                    v < b.value
                }
            }
        }
    }

    #[allow(clippy::too_many_arguments)]
    fn narrow(
        &mut self,
        n: NodeId,
        inv: Inv,
        v: i64,
        is_lo: bool,
        rule: &'static str,
        premises: &[TraceId],
        own: Caveats,
        detail: impl FnOnce() -> String,
    ) -> Result<bool, Error> {
        let Some(iv) = self.nodes[n].facts.get(inv).copied() else {
            return Ok(false);
        };
        let current = if is_lo { iv.lo } else { iv.hi };
        if !self.better(current, v, premises, own, is_lo) {
            return Ok(false);
        }
        let rel = if is_lo { ">=" } else { "<=" };
        let text = format!("{inv}({}) {rel} {v}: {}", self.nodes[n].expr, detail());
        let id = self.trace.add(rule, text, premises.to_vec(), own);
        let b = Some(Bound { value: v, trace: id });
        let slot = self.nodes[n].facts.get_mut(inv).expect("checked above");
        if is_lo {
            slot.lo = b;
        } else {
            slot.hi = b;
        }
        let iv = *slot;
        if iv.is_empty() {
            let (lo, hi) = (iv.lo.unwrap(), iv.hi.unwrap());
            let explanation = format!(
                "lower bound:\n{}upper bound:\n{}",
                self.trace.explain(lo.trace).unwrap_or_default(),
                self.trace.explain(hi.trace).unwrap_or_default()
            );
            return Err(Error::Contradiction(Box::new(Contradiction {
                subject: self.nodes[n].expr.to_string(),
                invariant: inv.to_string(),
                lo: lo.value,
                hi: hi.value,
                lo_trace: lo.trace,
                hi_trace: hi.trace,
                lo_rules: self.trace.rules_below(lo.trace),
                hi_rules: self.trace.rules_below(hi.trace),
                explanation,
            })));
        }
        Ok(true)
    }

    #[allow(clippy::too_many_arguments)]
    fn raise(
        &mut self,
        n: NodeId,
        inv: Inv,
        v: i64,
        rule: &'static str,
        premises: &[TraceId],
        own: Caveats,
        detail: impl FnOnce() -> String,
    ) -> Result<bool, Error> {
        self.narrow(n, inv, v, true, rule, premises, own, detail)
    }

    #[allow(clippy::too_many_arguments)]
    fn lower(
        &mut self,
        n: NodeId,
        inv: Inv,
        v: i64,
        rule: &'static str,
        premises: &[TraceId],
        own: Caveats,
        detail: impl FnOnce() -> String,
    ) -> Result<bool, Error> {
        self.narrow(n, inv, v, false, rule, premises, own, detail)
    }

    fn add_witness(
        &mut self,
        n: NodeId,
        leg: LegWitness,
        rule: &'static str,
        premises: &[TraceId],
        own: Caveats,
        detail: impl FnOnce() -> String,
    ) -> bool {
        let ws = &self.nodes[n].facts.witnesses;
        if ws.iter().any(|w| reachable(w.leg, (leg.tb, leg.rot))) {
            return false;
        }
        let text = format!("{} has a Legendrian representative {leg}: {}", self.nodes[n].expr, detail());
        let trace = self.trace.add(rule, text, premises.to_vec(), own);
        let ws = &mut self.nodes[n].facts.witnesses;
        ws.retain(|w| !reachable(leg, (w.leg.tb, w.leg.rot)));
        ws.push(Witness { leg, trace });
        ws.sort_by_key(|w| w.leg);
        true
    }

    fn add_cert(
        &mut self,
        n: NodeId,
        r: i64,
        rule: &'static str,
        premises: &[TraceId],
        own: Caveats,
        detail: impl FnOnce() -> String,
    ) -> bool {
        if let Some(c) = self.nodes[n].facts.cert {
            let weaker = self.trace.caveats_of(premises).union(own).weaker_than(self.caveats_of_trace(c.trace));
            if c.r > r || (c.r == r && !weaker) {
                return false;
            }
        }
        let text = format!("{} is {r}-suitable: {}", self.nodes[n].expr, detail());
        let trace = self.trace.add(rule, text, premises.to_vec(), own);
        self.nodes[n].facts.cert = Some(Cert { r, trace });
        true
    }

    fn caveats_of_trace(&self, t: TraceId) -> Caveats {
        self.trace.get(t).map_or(Caveats::NONE, |n| n.caveats)
    }

    /// `a ⊆ sign · b` in both directions: a's bounds come from b's and vice
    /// versa.
    #[allow(clippy::too_many_arguments)]
    fn link(&mut self, a: NodeId, ia: Inv, b: NodeId, ib: Inv, negate: bool, rule: &'static str) -> Result<bool, Error> {
        let mut changed = false;
        for (x, ix, y, iy) in [(a, ia, b, ib), (b, ib, a, ia)] {
            let (Some(src), Some(_)) = (self.interval(y, iy), self.interval(x, ix)) else {
                return Ok(false);
            };
            let (lo, hi) = if negate {
                (src.hi.map(|h| (-h.value, h.trace)), src.lo.map(|l| (-l.value, l.trace)))
            } else {
                (src.lo.map(|l| (l.value, l.trace)), src.hi.map(|h| (h.value, h.trace)))
            };
            let how = if negate { "negated" } else { "equal" };
            if let Some((v, t)) = lo {
                changed |= self.raise(x, ix, v, rule, &[t], Caveats::NONE, || format!("{how} to {iy} of node {y}"))?;
            }
            if let Some((v, t)) = hi {
                changed |= self.lower(x, ix, v, rule, &[t], Caveats::NONE, || format!("{how} to {iy} of node {y}"))?;
            }
        }
        Ok(changed)
    }

    // ---- rules ----

    fn apply(&mut self, rule: Rule, n: NodeId) -> Result<bool, Error> {
        match rule {
            Rule::Axioms => self.axioms(n),
            Rule::GenusTauS => self.genus_tau_s(n),
            Rule::SliceBennequin => self.slice_bennequin(n),
            Rule::ShakeBennequin => self.shake_bennequin(n),
            Rule::TbShake => self.tb_shake(n),
            Rule::ShakeBelowGenus => self.shake_below_genus(n),
            Rule::SuitabilityConsequences => self.suitability_consequences(n),
            Rule::SuitableByDefinition => Ok(self.suitable_by_definition(n)),
            Rule::ShakeEqualsGenus => self.shake_equals_genus(n),
            Rule::ArfObstruction => self.arf_obstruction(n),
            Rule::TauObstruction => self.tau_obstruction(n),
            Rule::Sum => self.sum_rules(n),
            Rule::Whitehead => Ok(self.whitehead_rules(n)),
            Rule::Satellite => self.satellite_rules(n),
            Rule::Transfer => self.transfer(n),
        }
    }

    fn axioms(&mut self, n: NodeId) -> Result<bool, Error> {
        let mut changed = false;
        match self.nodes[n].kind {
            Kind::Unknot => {
                changed |= self.lower(n, Inv::G4, 0, "unknot-slice", &[], Caveats::NONE, || "the unknot bounds a disk".into())?;
                changed |= self.add_witness(n, LegWitness::unknot(), "unknot-legendrian", &[], Caveats::NONE, || {
                    "standard Legendrian unknot".into()
                });
                changed |= self.add_cert(n, -1, "unknot-suitable", &[], Caveats::NONE, || {
                    "the standard unknot has tb = -1, rot = 0".into()
                });
            }
            Kind::Torus { p, q } => {
                let g = (p - 1) * (q - 1) / 2;
                let why = || format!("positive torus knot T({p},{q}) has slice genus (p-1)(q-1)/2");
                changed |= self.raise(n, Inv::G4, g, "torus-slice-genus", &[], Caveats::NONE, why)?;
                changed |= self.lower(n, Inv::G4, g, "torus-slice-genus", &[], Caveats::NONE, why)?;
                let leg = LegWitness::derived(2 * g - 1, 0);
                changed |= self.add_witness(n, leg, "torus-legendrian", &[], Caveats::NONE, || {
                    "positive braid closure front".into()
                });
                changed |= self.add_cert(n, 2 * g - 1, "torus-suitable", &[], Caveats::NONE, || {
                    "positive braid closures are (2g-1)-suitable".into()
                });
            }
            Kind::Wh(_) => {
                changed |= self.lower(n, Inv::G4, 1, "whitehead-genus-one", &[], Caveats::NONE, || {
                    "one crossing change unknots a Whitehead double".into()
                })?;
            }
            _ => {}
        }
        Ok(changed)
    }

    fn genus_tau_s(&mut self, n: NodeId) -> Result<bool, Error> {
        const R: &str = "tau-s-genus-bounds";
        let f = self.nodes[n].facts.clone();
        let mut c = false;
        if let Some(h) = f.g4.hi {
            c |= self.lower(n, Inv::Tau, h.value, R, &[h.trace], Caveats::NONE, || "|tau| <= g4".into())?;
            c |= self.raise(n, Inv::Tau, -h.value, R, &[h.trace], Caveats::NONE, || "|tau| <= g4".into())?;
            c |= self.lower(n, Inv::S, 2 * h.value, R, &[h.trace], Caveats::NONE, || "|s| <= 2 g4".into())?;
            c |= self.raise(n, Inv::S, -2 * h.value, R, &[h.trace], Caveats::NONE, || "|s| <= 2 g4".into())?;
        }
        if let Some(l) = f.tau.lo {
            c |= self.raise(n, Inv::G4, l.value, R, &[l.trace], Caveats::NONE, || "tau <= g4".into())?;
        }
        if let Some(h) = f.tau.hi {
            c |= self.raise(n, Inv::G4, -h.value, R, &[h.trace], Caveats::NONE, || "-tau <= g4".into())?;
        }
        if let Some(l) = f.s.lo {
            c |= self.raise(n, Inv::G4, ceil_half(l.value), R, &[l.trace], Caveats::NONE, || "s <= 2 g4".into())?;
        }
        if let Some(h) = f.s.hi {
            c |= self.raise(n, Inv::G4, ceil_half(-h.value), R, &[h.trace], Caveats::NONE, || "-s <= 2 g4".into())?;
        }
        Ok(c)
    }

    fn slice_bennequin(&mut self, n: NodeId) -> Result<bool, Error> {
        let Some(w) = self.nodes[n].facts.witnesses.iter().max_by_key(|w| (w.leg.bennequin(), w.leg)).copied() else {
            return Ok(false);
        };
        let b = w.leg.bennequin() + 1;
        let why = || format!("witness {} gives tb + |rot| + 1 = {b}", w.leg);
        let mut c = self.raise(n, Inv::Tau, b / 2, "slice-bennequin", &[w.trace], Caveats::NONE, why)?;
        c |= self.raise(n, Inv::S, b, "slice-bennequin", &[w.trace], Caveats::NONE, why)?;
        Ok(c)
    }

    fn shake_bennequin(&mut self, n: NodeId) -> Result<bool, Error> {
        let mut c = false;
        for r in self.rs.clone() {
            let best = self.nodes[n]
                .facts
                .witnesses
                .iter()
                .filter(|w| w.leg.tb > r)
                .max_by_key(|w| (w.leg.bennequin(), w.leg))
                .copied();
            if let Some(w) = best {
                let b = w.leg.bennequin() + 1;
                c |= self.raise(n, Inv::Gsh(r), b / 2, "shake-slice-bennequin", &[w.trace], Caveats::NONE, || {
                    format!("witness {} has tb - 1 >= {r}", w.leg)
                })?;
            }
        }
        Ok(c)
    }

    fn tb_shake(&mut self, n: NodeId) -> Result<bool, Error> {
        let Some(w) = self.nodes[n].facts.tb_lo().copied() else {
            return Ok(false);
        };
        let tb = w.leg.tb;
        if tb < 1 {
            return Ok(false);
        }
        let mut c = false;
        for r in self.rs.clone() {
            if r < tb {
                c |= self.raise(n, Inv::Gsh(r), ceil_half(tb + 1), "tb-shake-bound", &[w.trace], Caveats::NONE, || {
                    format!("TB >= {tb} >= 1 and r < TB")
                })?;
            }
        }
        Ok(c)
    }

    fn shake_below_genus(&mut self, n: NodeId) -> Result<bool, Error> {
        const R: &str = "shake-genus-at-most-slice-genus";
        let mut c = false;
        for r in self.rs.clone() {
            let f = &self.nodes[n].facts;
            let (g4, gsh) = (f.g4, f.gsh[&r]);
            if let Some(h) = g4.hi {
                c |= self.lower(n, Inv::Gsh(r), h.value, R, &[h.trace], Caveats::NONE, || "gsh^r <= g4".into())?;
            }
            if let Some(l) = gsh.lo {
                c |= self.raise(n, Inv::G4, l.value, R, &[l.trace], Caveats::NONE, || format!("gsh^{r} <= g4"))?;
            }
        }
        Ok(c)
    }

    fn suitability_consequences(&mut self, n: NodeId) -> Result<bool, Error> {
        let Some(cert) = self.nodes[n].facts.cert else {
            return Ok(false);
        };
        let r = cert.r;
        let mut c = self.raise(
            n,
            Inv::G4,
            suitability_genus_floor(r),
            "suitability-genus-bound",
            &[cert.trace],
            Caveats::NONE,
            || format!("{r}-suitable forces r <= 2 g4 - 1"),
        )?;
        const L: &str = "suitability-tau-s-genus";
        let f = self.nodes[n].facts.clone();
        let why = || format!("{r}-suitable forces 2 tau = s = 2 g4");
        for (iv, scale) in [(f.g4, 1), (f.g4, 2)] {
            let inv = if scale == 1 { Inv::Tau } else { Inv::S };
            if let Some(l) = iv.lo {
                c |= self.raise(n, inv, scale * l.value, L, &[cert.trace, l.trace], Caveats::NONE, why)?;
            }
            if let Some(h) = iv.hi {
                c |= self.lower(n, inv, scale * h.value, L, &[cert.trace, h.trace], Caveats::NONE, why)?;
            }
        }
        if let Some(h) = f.tau.hi {
            c |= self.lower(n, Inv::G4, h.value, L, &[cert.trace, h.trace], Caveats::NONE, why)?;
        }
        if let Some(h) = f.s.hi {
            c |= self.lower(n, Inv::G4, floor_half(h.value), L, &[cert.trace, h.trace], Caveats::NONE, why)?;
        }
        let g4 = self.nodes[n].facts.g4;
        if let Some(g) = g4.exact() {
            let leg = LegWitness::derived(r, 2 * g - 1 - r);
            let premises = [cert.trace, g4.lo.unwrap().trace, g4.hi.unwrap().trace];
            c |= self.add_witness(n, leg, "suitability-witness", &premises, Caveats::NONE, || {
                format!("{r}-suitable with g4 = {g}")
            });
        }
        Ok(c)
    }

    fn suitable_by_definition(&mut self, n: NodeId) -> bool {
        let f = &self.nodes[n].facts;
        let Some(g) = f.g4.exact() else {
            return false;
        };
        let (lo, hi) = (f.g4.lo.unwrap().trace, f.g4.hi.unwrap().trace);
        let best = f
            .witnesses
            .iter()
            .filter(|w| w.leg.tb + w.leg.rot == 2 * g - 1)
            .max_by_key(|w| w.leg.tb)
            .copied();
        match best {
            Some(w) => self.add_cert(n, w.leg.tb, "suitable-by-definition", &[w.trace, lo, hi], Caveats::NONE, || {
                format!("witness {} has rot = 2 g4 - 1 - tb with g4 = {g}", w.leg)
            }),
            None => false,
        }
    }

    fn shake_equals_genus(&mut self, n: NodeId) -> Result<bool, Error> {
        const R: &str = "shake-genus-equals-slice-genus";
        let Some(cert) = self.nodes[n].facts.cert else {
            return Ok(false);
        };
        let mut c = false;
        for r in self.rs.clone() {
            if r + 1 > cert.r {
                continue;
            }
            let f = &self.nodes[n].facts;
            let (g4, gsh) = (f.g4, f.gsh[&r]);
            let why = || format!("{}-suitable, so gsh^{r} = g4", cert.r);
            if let Some(l) = g4.lo {
                c |= self.raise(n, Inv::Gsh(r), l.value, R, &[cert.trace, l.trace], Caveats::NONE, why)?;
            }
            if let Some(h) = gsh.hi {
                c |= self.lower(n, Inv::G4, h.value, R, &[cert.trace, h.trace], Caveats::NONE, why)?;
            }
        }
        Ok(c)
    }

    fn arf_obstruction(&mut self, n: NodeId) -> Result<bool, Error> {
        let arf = self.nodes[n].facts.arf;
        let (Arf::One, Some(t)) = (arf.value, arf.trace) else {
            return Ok(false);
        };
        let mut c = false;
        for r in self.rs.clone() {
            c |= self.raise(n, Inv::Gsh(r), 1, "arf-obstruction", &[t], Caveats::NONE, || {
                "r-shake slice knots have Arf = 0".into()
            })?;
        }
        Ok(c)
    }

    fn tau_obstruction(&mut self, n: NodeId) -> Result<bool, Error> {
        if !self.rs.contains(&0) {
            return Ok(false);
        }
        let tau = self.nodes[n].facts.tau;
        let t = match (tau.lo, tau.hi) {
            (Some(l), _) if l.value >= 1 => l.trace,
            (_, Some(h)) if h.value <= -1 => h.trace,
            _ => return Ok(false),
        };
        self.raise(n, Inv::Gsh(0), 1, "tau-obstruction", &[t], Caveats::NONE, || {
            "0-shake slice knots have tau = 0".into()
        })
    }

    fn sum_rules(&mut self, n: NodeId) -> Result<bool, Error> {
        let Kind::Sum(children) = self.nodes[n].kind.clone() else {
            return Ok(false);
        };
        let mut c = false;

        let g4_his: Option<Vec<Bound>> = children.iter().map(|&k| self.nodes[k].facts.g4.hi).collect();
        if let Some(his) = g4_his {
            let total = his.iter().map(|b| b.value).sum();
            let ts: Vec<TraceId> = his.iter().map(|b| b.trace).collect();
            c |= self.lower(n, Inv::G4, total, "sum-genus-subadditive", &ts, Caveats::NONE, || {
                "g4(K # J) <= g4(K) + g4(J)".into()
            })?;
        }
        let tau_los: Option<Vec<Bound>> = children.iter().map(|&k| self.nodes[k].facts.tau.lo).collect();
        if let Some(los) = tau_los {
            let ts: Vec<TraceId> = los.iter().map(|b| b.trace).collect();
            c |= self.raise(n, Inv::Tau, los.iter().map(|b| b.value).sum(), "sum-tau-additive", &ts, Caveats::NONE, || {
                "tau(K # J) = tau(K) + tau(J)".into()
            })?;
        }
        let tau_his: Option<Vec<Bound>> = children.iter().map(|&k| self.nodes[k].facts.tau.hi).collect();
        if let Some(his) = tau_his {
            let ts: Vec<TraceId> = his.iter().map(|b| b.trace).collect();
            c |= self.lower(n, Inv::Tau, his.iter().map(|b| b.value).sum(), "sum-tau-additive", &ts, Caveats::NONE, || {
                "tau(K # J) = tau(K) + tau(J)".into()
            })?;
        }

        // connected sums of witnesses, pruned after each factor
        let mut acc: Vec<(LegWitness, Vec<TraceId>)> = vec![(LegWitness::unknot(), vec![])];
        for &k in &children {
            let ws = &self.nodes[k].facts.witnesses;
            if ws.is_empty() {
                acc.clear();
                break;
            }
            let mut next = Vec::with_capacity(acc.len() * ws.len());
            for (a, ta) in &acc {
                for w in ws {
                    let mut t = ta.clone();
                    t.push(w.trace);
                    next.push((connect_sum_witness(*a, w.leg), t));
                }
            }
            acc = prune_tagged(next);
        }
        for (leg, ts) in acc {
            c |= self.add_witness(n, leg, "sum-legendrian", &ts, Caveats::NONE, || {
                "tb adds plus one, rot adds under connected sum".into()
            });
        }

        let certs: Option<Vec<Cert>> = children.iter().map(|&k| self.nodes[k].facts.cert).collect();
        if let Some(certs) = certs {
            let r = certs.iter().map(|x| x.r).sum::<i64>() + certs.len() as i64 - 1;
            let ts: Vec<TraceId> = certs.iter().map(|x| x.trace).collect();
            c |= self.add_cert(n, r, "sum-suitable", &ts, Caveats::NONE, || {
                "r-suitable # k-suitable is (r+k+1)-suitable".into()
            });
        }
        Ok(c)
    }

    fn whitehead_rules(&mut self, n: NodeId) -> bool {
        let Kind::Wh(k) = self.nodes[n].kind else {
            return false;
        };
        let mut c = false;
        if let Some(cert) = self.nodes[k].facts.cert.filter(|x| x.r >= 0) {
            c |= self.add_cert(n, 1, "whitehead-suitable", &[cert.trace], Caveats::NONE, || {
                format!("companion is {}-suitable with r >= 0", cert.r)
            });
        }
        let legs: Vec<LegWitness> = self.nodes[k].facts.witnesses.iter().map(|w| w.leg).collect();
        if let Some(leg) = wh_witness(&legs) {
            let src = self.nodes[k].facts.witnesses.iter().find(|w| w.leg.tb >= 0).unwrap().trace;
            c |= self.add_witness(n, leg, "whitehead-legendrian", &[src], Caveats::NONE, || {
                "companion destabilizes to tb = 0".into()
            });
        }
        c
    }

    fn satellite_rules(&mut self, n: NodeId) -> Result<bool, Error> {
        let Kind::Sat { pattern, r, child } = self.nodes[n].kind.clone() else {
            return Ok(false);
        };
        let mut c = false;
        let name = pattern.name.clone();
        let kf = self.nodes[child].facts.clone();

        if pattern.w.abs() == 1 {
            if let (Some(ph), Some(kh)) = (pattern.g4_hi, kf.g4.hi) {
                c |= self.lower(n, Inv::G4, kh.value + ph, "satellite-genus-bound", &[kh.trace], Caveats::NONE, || {
                    format!("g4(P_r(K)) <= g4(K) + g4({name}) with g4({name}) <= {ph}")
                })?;
            }
        }
        if pattern.w != 1 {
            return Ok(c);
        }
        let tilde_slice = pattern.tilde_slice == Some(true) || pattern.tilde_ribbon == Some(true);

        if tilde_slice && self.rs.contains(&r) {
            let own = self.nodes[n].facts.gsh[&r];
            let why = || format!("winding one pattern {name} with slice P(U): gsh^{r}(K) <= gsh^{r}(P_r(K))");
            if let Some(l) = kf.gsh[&r].lo {
                c |= self.raise(n, Inv::Gsh(r), l.value, "satellite-shake-monotone", &[l.trace], Caveats::NONE, why)?;
            }
            if let Some(h) = own.hi {
                c |= self.lower(child, Inv::Gsh(r), h.value, "satellite-shake-monotone", &[h.trace], Caveats::NONE, why)?;
            }
        }

        if tilde_slice && pattern.meridian_ng == Some(true) && matches!(self.nodes[child].kind, Kind::Unknot) {
            c |= self.lower(n, Inv::Gsh(r), 0, "spc4-shake-slice", &[], Caveats::SPC4, || {
                format!("{name} has slice P(U) and meridian normally generated: P_r(U) is r-shake slice")
            })?;
        }

        if let (Some(cert), Some(plo), Some(phi)) = (kf.cert, pattern.g4_lo, pattern.g4_hi) {
            if plo > 0 {
                let best = pattern
                    .leg_pairs
                    .iter()
                    .filter(|&&(m, rho)| m >= 0 && 2 * phi <= m + rho && cert.r >= r + m)
                    .max_by_key(|&&(m, rho)| (m, rho))
                    .copied();
                if let Some((m, rho)) = best {
                    let why = || format!("{name} diagram (tb={m}, rot={rho}), 0 < g4({name}) <= (m+rot)/2, companion {}-suitable", cert.r);
                    c |= self.add_cert(n, r + m, "satellite-suitable", &[cert.trace], Caveats::NONE, why);
                    if let Some(l) = kf.g4.lo {
                        c |= self.raise(n, Inv::G4, l.value + plo, "satellite-suitable", &[cert.trace, l.trace], Caveats::NONE, why)?;
                    }
                    if let Some(h) = kf.g4.hi {
                        c |= self.lower(n, Inv::G4, h.value + phi, "satellite-suitable", &[cert.trace, h.trace], Caveats::NONE, why)?;
                    }
                }
            }
        }

        let mut candidates = Vec::new();
        for &(tb_p, rot_p) in &pattern.leg_pairs {
            for w in kf.witnesses.iter().filter(|w| w.leg.tb >= r) {
                for k in destabilize_to(w.leg, r) {
                    let leg = satellite_witness((tb_p, rot_p), pattern.w, k)?;
                    candidates.push((leg, w.trace, (tb_p, rot_p), k));
                }
            }
        }
        for (leg, t, (tb_p, rot_p), k) in candidates {
            c |= self.add_witness(n, leg, "satellite-legendrian", &[t], Caveats::NONE, || {
                format!("{name} diagram (tb={tb_p}, rot={rot_p}) on companion representative {k}")
            });
        }
        Ok(c)
    }

    fn transfer(&mut self, n: NodeId) -> Result<bool, Error> {
        let mut c = false;
        match self.nodes[n].kind {
            Kind::Reverse(k) => {
                const R: &str = "reverse-invariance";
                c |= self.link(n, Inv::G4, k, Inv::G4, false, R)?;
                c |= self.link(n, Inv::Tau, k, Inv::Tau, false, R)?;
                c |= self.link(n, Inv::S, k, Inv::S, false, R)?;
                for r in self.rs.clone() {
                    c |= self.link(n, Inv::Gsh(r), k, Inv::Gsh(r), false, R)?;
                }
                let ws = self.nodes[k].facts.witnesses.clone();
                for w in ws {
                    c |= self.add_witness(n, reverse_witness(w.leg), "reverse-legendrian", &[w.trace], Caveats::NONE, || {
                        "reversal negates rot".into()
                    });
                }
                let back = self.nodes[n].facts.witnesses.clone();
                for w in back {
                    c |= self.add_witness(k, reverse_witness(w.leg), "reverse-legendrian", &[w.trace], Caveats::NONE, || {
                        "reversal negates rot".into()
                    });
                }
            }
            Kind::Mirror(k) => {
                const R: &str = "mirror-transfer";
                c |= self.link(n, Inv::G4, k, Inv::G4, false, R)?;
                c |= self.link(n, Inv::Tau, k, Inv::Tau, true, R)?;
                c |= self.link(n, Inv::S, k, Inv::S, true, R)?;
                for r in self.rs.clone() {
                    c |= self.link(n, Inv::Gsh(r), k, Inv::Gsh(-r), false, R)?;
                }
            }
            _ => {}
        }
        Ok(c)
    }
}

/// Keep only witnesses not reachable from another, first payload wins.
fn prune_tagged<T>(mut items: Vec<(LegWitness, T)>) -> Vec<(LegWitness, T)> {
    items.sort_by_key(|(w, _)| std::cmp::Reverse((w.tb, w.rot)));
    let mut out: Vec<(LegWitness, T)> = Vec::new();
    for (w, t) in items {
        if out.iter().any(|(v, _)| reachable(*v, (w.tb, w.rot))) {
            continue;
        }
        out.push((w, t));
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::parse::parse_expr;

    fn run(text: &str, rs: &[i64]) -> (FactStore, NodeId) {
        let reg = Registry::builtin();
        let e = parse_expr(text, &reg).unwrap();
        let st = propagate(&e, &reg, &Query::at(rs.iter().copied())).unwrap();
        let root = st.root();
        (st, root)
    }

    fn exact(st: &FactStore, id: NodeId, inv: Inv) -> Option<i64> {
        st.interval(id, inv).and_then(|i| i.exact())
    }

    #[test]
    fn torus_two_five() {
        let (st, n) = run("(torus 2 5)", &[0]);
        assert_eq!(exact(&st, n, Inv::Gsh(0)), Some(2));
        assert_eq!(exact(&st, n, Inv::G4), Some(2));
        assert_eq!(exact(&st, n, Inv::Tau), Some(2));
        assert_eq!(exact(&st, n, Inv::S), Some(4));
    }

    #[test]
    fn torus_three_four() {
        let (st, n) = run("(torus 3 4)", &[3]);
        assert_eq!(exact(&st, n, Inv::Gsh(3)), Some(3));
    }

    #[test]
    fn whitehead_double() {
        let (st, n) = run("(wh (torus 2 3))", &[0]);
        assert_eq!(exact(&st, n, Inv::G4), Some(1));
        assert_eq!(exact(&st, n, Inv::Tau), Some(1));
        assert_eq!(exact(&st, n, Inv::S), Some(2));
        assert_eq!(exact(&st, n, Inv::Gsh(0)), Some(1));
        assert_eq!(st.facts(n).cert.map(|c| c.r), Some(1));
    }

    #[test]
    fn unknot_is_trivial() {
        let (st, n) = run("unknot", &[0, 3]);
        for inv in [Inv::G4, Inv::Tau, Inv::S, Inv::Gsh(0), Inv::Gsh(3), Inv::Gsh(-3)] {
            assert_eq!(exact(&st, n, inv), Some(0), "{inv}");
        }
        assert_eq!(st.facts(n).arf.value, Arf::Zero);
    }

    #[test]
    fn mirror_transfers_and_negates() {
        let (st, n) = run("(mirror (torus 2 5))", &[1]);
        assert_eq!(exact(&st, n, Inv::G4), Some(2));
        assert_eq!(exact(&st, n, Inv::Tau), Some(-2));
        assert_eq!(exact(&st, n, Inv::S), Some(-4));
        // gsh^{-1}(mirror T) = gsh^{1}(T) = 2
        assert_eq!(exact(&st, n, Inv::Gsh(-1)), Some(2));
        assert!(st.facts(n).witnesses.is_empty());
    }

    #[test]
    fn mazur_iterates() {
        for i in 0..4 {
            let reg = Registry::builtin();
            let e = KnotExpr::rht().wh().iterate("mazur", 0, i);
            let st = propagate(&e, &reg, &Query::at([0])).unwrap();
            let n = st.root();
            let g = 1 + i as i64;
            assert_eq!(exact(&st, n, Inv::G4), Some(g), "i={i}");
            assert_eq!(exact(&st, n, Inv::Tau), Some(g));
            assert_eq!(exact(&st, n, Inv::S), Some(2 * g));
            assert_eq!(exact(&st, n, Inv::Gsh(0)), Some(g));
        }
    }

    #[test]
    fn sums_of_trefoils() {
        let (st, n) = run("(sum (torus 2 3) (torus 2 3))", &[0]);
        assert_eq!(exact(&st, n, Inv::G4), Some(2));
        assert_eq!(st.facts(n).cert.map(|c| c.r), Some(3));
        assert_eq!(st.facts(n).arf.value, Arf::Zero);
        assert_eq!(exact(&st, n, Inv::Gsh(0)), Some(2));
    }

    #[test]
    fn spc4_family() {
        let (st, n) = run("(sat r1 :r 3 unknot)", &[3]);
        let iv = st.interval(n, Inv::Gsh(3)).unwrap();
        assert_eq!(iv.exact(), Some(0));
        assert!(st.caveats(iv.hi).spc4);
    }

    #[test]
    fn false_suitability_contradicts() {
        let reg = Registry::builtin();
        let q = Query {
            externals: vec![ExternalFact::Suitable(KnotExpr::Unknot, 1)],
            ..Query::default()
        };
        match propagate(&KnotExpr::Unknot, &reg, &q) {
            Err(Error::Contradiction(c)) => {
                assert!(c.lo_rules.contains(&"suitability-genus-bound"), "{c}");
                assert_eq!(c.invariant, "g4");
            }
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn composite_unfolds() {
        let reg = Registry::builtin();
        let e = parse_expr("(sat (compose (twist mazur 0) mazur) :r 5 (torus 2 3))", &reg).unwrap();
        let u = unfold(&e, &reg).unwrap();
        assert_eq!(u, KnotExpr::rht().iterate("mazur", 5, 2));
    }

    #[test]
    fn shuffled_orders_agree() {
        let reg = Registry::builtin();
        let e = parse_expr("(sum (sat mazur :r 0 (wh (torus 2 3))) (mirror (torus 2 5)) (rev (wh (torus 2 5))))", &reg).unwrap();
        let base = propagate(&e, &reg, &Query::at([0, 1])).unwrap().values();
        for seed in 0..10 {
            let q = Query {
                rs: vec![0, 1],
                order: Order::Shuffled(seed),
                ..Query::default()
            };
            assert_eq!(propagate(&e, &reg, &q).unwrap().values(), base, "seed {seed}");
        }
    }
}
