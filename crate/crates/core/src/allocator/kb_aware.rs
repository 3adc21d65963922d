//! Knowledge-aware association and bandwidth allocation.
//!
//! Stage A associates endpoints greedily by their estimated marginal
//! contribution to network message throughput, assuming each base station
//! splits its budget evenly, then runs improvement passes that move single
//! endpoints while the estimate strictly grows. Stage B water-fills each base
//! station's budget with weights `accuracy / message_length`, frozen at the
//! Stage-A operating point of each pair.

use crate::channel::{bit_rate, to_db};
use crate::error::Result;
use crate::model::NetworkSnapshot;
use crate::semantics::SemanticModel;

use super::{bandwidth_waterfill, AllocationDecision, Strategy};

pub const MAX_IMPROVEMENT_PASSES: usize = 20;

/// Relative gain a move must exceed to count as an improvement.
const MOVE_TOL: f64 = 1e-12;

#[derive(Debug, Clone, PartialEq)]
pub struct KbAwareTrace {
    /// Estimated throughput after the greedy stage, then after every pass.
    pub pass_estimates: Vec<f64>,
    pub moves: usize,
}

struct Estimator {
    model: SemanticModel,
    budgets: Vec<f64>,
    /// Per endpoint: owning pair.
    pair_of: Vec<usize>,
    /// Per pair: endpoint indices (one or two).
    hops_of: Vec<Vec<usize>>,
    /// Per endpoint: the other hop of a two-hop pair.
    partner: Vec<Option<usize>>,
    tau: Vec<f64>,
    coding: Vec<f64>,
    /// `q[e * n_bs + b]`
    q: Vec<f64>,
    n_bs: usize,
}

/// Association state plus per-station caches of how the estimated total
/// changes when a station gains or loses one member.
#[derive(Clone)]
struct State {
    assoc: Vec<Option<usize>>,
    counts: Vec<usize>,
    members: Vec<Vec<usize>>,
    pair_est: Vec<f64>,
    /// Per pair, per station it occupies: (station, change if that station
    /// gains a member, change if it loses one).
    pair_terms: Vec<Vec<(usize, f64, f64)>>,
    gain_if_add: Vec<f64>,
    gain_if_remove: Vec<f64>,
}

#[derive(Clone, Copy)]
struct Move {
    ep: usize,
    from: Option<usize>,
    to: usize,
}

impl Estimator {
    fn new(snapshot: &NetworkSnapshot) -> Self {
        let endpoints = snapshot.endpoints();
        let n_bs = snapshot.n_bs();
        let mut hops_of = vec![Vec::new(); snapshot.pairs.len()];
        let mut q = Vec::with_capacity(endpoints.len() * n_bs);
        for (i, ep) in endpoints.iter().enumerate() {
            hops_of[ep.pair].push(i);
            for b in 0..n_bs {
                q.push(snapshot.endpoint_q(*ep, b));
            }
        }
        let partner = endpoints
            .iter()
            .enumerate()
            .map(|(i, ep)| hops_of[ep.pair].iter().copied().find(|&x| x != i))
            .collect();
        Estimator {
            partner,
            model: SemanticModel::from_config(&snapshot.config),
            budgets: snapshot.base_stations.iter().map(|b| b.bw_budget).collect(),
            pair_of: endpoints.iter().map(|e| e.pair).collect(),
            hops_of,
            tau: snapshot.pairs.iter().map(|p| p.tau).collect(),
            coding: snapshot
                .pairs
                .iter()
                .map(|p| snapshot.pair_coding_ability(p))
                .collect(),
            q,
            n_bs,
        }
    }

    fn q(&self, ep: usize, bs: usize) -> f64 {
        self.q[ep * self.n_bs + bs]
    }

    /// (SINR, bit rate) of an endpoint holding an even share at `bs`.
    fn hop(&self, ep: usize, bs: usize, count: usize) -> (f64, f64) {
        let share = self.budgets[bs] / count as f64;
        let s = self.q(ep, bs) / share;
        (s, bit_rate(share, s))
    }

    /// Estimated message rate of a pair. `bs_of` gives each hop's station
    /// (or `None`), `count_of` the member count used for a station.
    fn estimate_with(
        &self,
        pair: usize,
        bs_of: impl Fn(usize) -> Option<usize>,
        count_of: impl Fn(usize) -> usize,
    ) -> f64 {
        let mut sinr = f64::INFINITY;
        let mut rate = f64::INFINITY;
        let mut any = false;
        for &ep in &self.hops_of[pair] {
            let Some(bs) = bs_of(ep) else { continue };
            let (s, r) = self.hop(ep, bs, count_of(bs));
            sinr = sinr.min(s);
            rate = rate.min(r);
            any = true;
        }
        if !any {
            return 0.0;
        }
        self.model
            .pair_rate(self.tau[pair], self.coding[pair], to_db(sinr), rate)
    }

    /// Estimated message rate of a pair with `mv` applied.
    fn moved_estimate(&self, state: &State, pair: usize, mv: Move) -> f64 {
        self.estimate_with(
            pair,
            |ep| if ep == mv.ep { Some(mv.to) } else { state.assoc[ep] },
            |bs| {
                let mut c = state.counts[bs];
                if bs == mv.to {
                    c += 1;
                }
                if mv.from == Some(bs) {
                    c -= 1;
                }
                c
            },
        )
    }

    fn term(state: &State, pair: usize, bs: usize) -> Option<(f64, f64)> {
        state.pair_terms[pair]
            .iter()
            .find(|t| t.0 == bs)
            .map(|t| (t.1, t.2))
    }

    /// Change of the estimated total when `mv` is applied.
    ///
    /// Every pair at the target (source) station sees one more (fewer)
    /// co-member, which the cached sums already account for. Pairs the
    /// cache gets wrong are recomputed exactly: the moving pair itself and
    /// two-hop pairs straddling source and target.
    fn delta(&self, state: &State, mv: Move) -> f64 {
        let moving = self.pair_of[mv.ep];
        let mut d = state.gain_if_add[mv.to];
        if let Some(from) = mv.from {
            d += state.gain_if_remove[from];
        }
        let mut fix = |p: usize| {
            let mut cached = 0.0;
            if let Some((add, _)) = Self::term(state, p, mv.to) {
                cached += add;
            }
            if let Some(from) = mv.from {
                if let Some((_, rem)) = Self::term(state, p, from) {
                    cached += rem;
                }
            }
            d += self.moved_estimate(state, p, mv) - state.pair_est[p] - cached;
        };
        fix(moving);
        if let Some(from) = mv.from {
            for &e in &state.members[from] {
                // each straddling pair is seen once, from its hop at `from`
                if let Some(other) = self.partner[e] {
                    if state.assoc[other] == Some(mv.to) && self.pair_of[e] != moving {
                        fix(self.pair_of[e]);
                    }
                }
            }
        }
        d
    }

    /// Recomputes one pair's estimate and cached terms.
    fn refresh_pair(&self, state: &mut State, p: usize) {
        let assoc = &state.assoc;
        let counts = &state.counts;
        let current = self.estimate_with(p, |ep| assoc[ep], |bs| counts[bs]);
        let mut stations: Vec<usize> = self.hops_of[p].iter().filter_map(|&e| assoc[e]).collect();
        stations.sort_unstable();
        stations.dedup();
        let terms = stations
            .into_iter()
            .map(|x| {
                let add = self.estimate_with(p, |ep| assoc[ep], |bs| counts[bs] + usize::from(bs == x))
                    - current;
                let rem = if counts[x] > 1 {
                    self.estimate_with(p, |ep| assoc[ep], |bs| counts[bs] - usize::from(bs == x))
                        - current
                } else {
                    0.0
                };
                (x, add, rem)
            })
            .collect();
        state.pair_est[p] = current;
        state.pair_terms[p] = terms;
    }

    /// Re-sums a station's cached gains over the pairs it serves.
    fn refresh_station(&self, state: &mut State, x: usize) {
        let mut pairs: Vec<usize> = state.members[x].iter().map(|&e| self.pair_of[e]).collect();
        pairs.sort_unstable();
        pairs.dedup();
        let (mut add, mut rem) = (0.0, 0.0);
        for p in pairs {
            if let Some((a, r)) = Self::term(state, p, x) {
                add += a;
                rem += r;
            }
        }
        state.gain_if_add[x] = add;
        state.gain_if_remove[x] = rem;
    }

    fn apply(&self, state: &mut State, mv: Move) {
        if let Some(from) = mv.from {
            state.members[from].retain(|&e| e != mv.ep);
            state.counts[from] -= 1;
        }
        state.members[mv.to].push(mv.ep);
        state.members[mv.to].sort_unstable();
        state.counts[mv.to] += 1;
        state.assoc[mv.ep] = Some(mv.to);

        let mut pairs: Vec<usize> = state.members[mv.to]
            .iter()
            .chain(mv.from.map_or(&[][..], |f| &state.members[f][..]))
            .map(|&e| self.pair_of[e])
            .collect();
        pairs.sort_unstable();
        pairs.dedup();
        let mut stations = vec![mv.to];
        stations.extend(mv.from);
        for &p in &pairs {
            self.refresh_pair(state, p);
            stations.extend(self.hops_of[p].iter().filter_map(|&e| state.assoc[e]));
        }
        stations.sort_unstable();
        stations.dedup();
        for x in stations {
            self.refresh_station(state, x);
        }
    }

    /// Best message rate an endpoint's pair could reach through this hop
    /// alone, holding a whole base station.
    fn solo_rate(&self, ep: usize) -> f64 {
        let pair = self.pair_of[ep];
        (0..self.n_bs)
            .map(|b| {
                let (s, r) = self.hop(ep, b, 1);
                self.model
                    .pair_rate(self.tau[pair], self.coding[pair], to_db(s), r)
            })
            .fold(0.0, f64::max)
    }
}

/// Runs the knowledge-aware strategy.
pub fn allocate_kb_aware(snapshot: &NetworkSnapshot) -> Result<AllocationDecision> {
    allocate_kb_aware_traced(snapshot).map(|(d, _)| d)
}

/// Same as [`allocate_kb_aware`], also returning the Stage-A estimate history.
pub fn allocate_kb_aware_traced(
    snapshot: &NetworkSnapshot,
) -> Result<(AllocationDecision, KbAwareTrace)> {
    let est = Estimator::new(snapshot);
    let n_ep = est.pair_of.len();
    let n_bs = est.n_bs;
    let mut state = State {
        assoc: vec![None; n_ep],
        counts: vec![0; n_bs],
        members: vec![Vec::new(); n_bs],
        pair_est: vec![0.0; snapshot.pairs.len()],
        pair_terms: vec![Vec::new(); snapshot.pairs.len()],
        gain_if_add: vec![0.0; n_bs],
        gain_if_remove: vec![0.0; n_bs],
    };

    let solo: Vec<f64> = (0..n_ep).map(|e| est.solo_rate(e)).collect();
    let mut order: Vec<usize> = (0..n_ep).collect();
    order.sort_by(|&a, &b| solo[b].total_cmp(&solo[a]).then(a.cmp(&b)));

    for &e in &order {
        let mut best = (0usize, f64::NEG_INFINITY);
        for b in 0..n_bs {
            let d = est.delta(&state, Move { ep: e, from: None, to: b });
            if d > best.1 {
                best = (b, d);
            }
        }
        est.apply(&mut state, Move { ep: e, from: None, to: best.0 });
    }

    let total = |s: &State| s.pair_est.iter().sum::<f64>();
    let mut trace = KbAwareTrace {
        pass_estimates: vec![total(&state)],
        moves: 0,
    };

    for _ in 0..MAX_IMPROVEMENT_PASSES {
        let mut moved = false;
        for &e in &order {
            let from = state.assoc[e];
            let threshold = MOVE_TOL * total(&state).abs();
            let mut best: Option<(usize, f64)> = None;
            for b in 0..n_bs {
                if Some(b) == from {
                    continue;
                }
                let d = est.delta(&state, Move { ep: e, from, to: b });
                if d > threshold && best.is_none_or(|(_, bd)| d > bd) {
                    best = Some((b, d));
                }
            }
            if let Some((b, _)) = best {
                est.apply(&mut state, Move { ep: e, from, to: b });
                trace.moves += 1;
                moved = true;
            }
        }
        trace.pass_estimates.push(total(&state));
        if !moved {
            break;
        }
    }

    let assoc: Vec<usize> = state
        .assoc
        .iter()
        .map(|a| a.expect("every endpoint associated"))
        .collect();

    // Stage B: weights from each pair's operating point at the even-share probe.
    let mut weights = vec![0.0; n_ep];
    for (pair, hops) in est.hops_of.iter().enumerate() {
        let sinr = hops
            .iter()
            .map(|&e| est.hop(e, assoc[e], state.counts[assoc[e]]).0)
            .fold(f64::INFINITY, f64::min);
        let (_, acc, len) = est
            .model
            .operating_point(est.tau[pair], est.coding[pair], to_db(sinr));
        for &e in hops {
            weights[e] = acc / len;
        }
    }
    let bw = bandwidth_waterfill(snapshot, &assoc, &weights)?;
    Ok((
        AllocationDecision::from_parts(snapshot, &assoc, &bw, Strategy::KbAware),
        trace,
    ))
}
