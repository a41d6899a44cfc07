use super::LabelState;
use crate::error::{Error, Result};
use crate::graph::{BlockId, Graph, NodeId, Partition, Weight};

/// Moves nodes out of overloaded blocks until every block respects `l_max`.
///
/// Each step takes the node of an overloaded block whose move increases the
/// cut the least. Its target is the lightest adjacent block with room for
/// it, or the globally lightest block with room if no adjacent one has any.
/// A feasible input is returned unchanged.
pub fn rebalance(g: &Graph, p: &Partition) -> Result<Partition> {
    let mut state = LabelState::from_partition(p);
    rebalance_state(g, &mut state, &vec![p.l_max(); p.k()])?;
    Ok(Partition::from_parts(
        state.labels,
        state.block_weights,
        p.k(),
        p.l_max(),
    ))
}

struct Candidate {
    increase: i64,
    node: NodeId,
}

pub(crate) fn rebalance_state(g: &Graph, state: &mut LabelState, bounds: &[Weight]) -> Result<()> {
    let k = bounds.len();
    let overloaded = |state: &LabelState| (0..k).any(|b| state.block_weights[b] > bounds[b]);
    if !overloaded(state) {
        return Ok(());
    }
    let widest = bounds.iter().copied().max().unwrap_or(0);
    let l_max = bounds.iter().copied().min().unwrap_or(0);
    if g.max_node_weight() > widest {
        return Err(Error::Infeasible {
            l_max,
            reason: format!(
                "node weight {} exceeds every block limit",
                g.max_node_weight()
            ),
        });
    }

    let mut conn: Vec<Weight> = vec![0; k];
    let mut touched: Vec<BlockId> = Vec::new();
    // Target for `v` together with the connection to its own block and to the target.
    let mut choose = |v: NodeId, state: &LabelState| -> Option<(BlockId, Weight, Weight)> {
        let own = state.labels[v as usize];
        let w = g.node_weight(v);
        for (u, ew) in g.neighbors(v) {
            let b = state.labels[u as usize];
            if conn[b as usize] == 0 {
                touched.push(b);
            }
            conn[b as usize] += ew;
        }
        let fits = |t: BlockId| t != own && state.block_weights[t as usize] + w <= bounds[t as usize];
        let adjacent = touched
            .iter()
            .copied()
            .filter(|&t| fits(t))
            .min_by_key(|&t| (state.block_weights[t as usize], t));
        let target = adjacent.or_else(|| {
            (0..k as BlockId)
                .filter(|&t| fits(t))
                .min_by_key(|&t| (state.block_weights[t as usize], t))
        });
        let result = target.map(|t| (t, conn[own as usize], conn[t as usize]));
        for &t in touched.iter() {
            conn[t as usize] = 0;
        }
        touched.clear();
        result
    };

    while overloaded(state) {
        let mut candidates = Vec::new();
        for v in 0..g.num_nodes() as NodeId {
            let b = state.labels[v as usize] as usize;
            if state.block_weights[b] <= bounds[b] || g.node_weight(v) == 0 {
                continue;
            }
            if let Some((_, own_conn, target_conn)) = choose(v, state) {
                candidates.push(Candidate {
                    increase: own_conn as i64 - target_conn as i64,
                    node: v,
                });
            }
        }
        candidates.sort_by_key(|c| (c.increase, c.node));

        let mut progress = false;
        for c in candidates {
            let v = c.node;
            let from = state.labels[v as usize];
            if state.block_weights[from as usize] <= bounds[from as usize] {
                continue;
            }
            let Some((to, _, _)) = choose(v, state) else {
                continue;
            };
            let w = g.node_weight(v);
            state.block_weights[from as usize] -= w;
            state.block_weights[to as usize] += w;
            state.labels[v as usize] = to;
            progress = true;
        }
        if !progress {
            return Err(Error::Infeasible {
                l_max,
                reason: "no block can absorb a node of an overloaded block".into(),
            });
        }
    }
    Ok(())
}
