//! Exact-weight knapsack minimizing total share, with every stage retained.

use crate::set::AgentSet;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DpItem {
    pub agent: usize,
    /// Discretized reward in grid units.
    pub weight: u64,
    pub share: f64,
}

/// Reachable weight `y` at some stage, with the least total share `value` and a set attaining it.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DpEntry {
    pub y: u64,
    pub value: f64,
    pub set: AgentSet,
}

/// `V[k][y]` and `D[k][y]` stored sparsely: row `k` lists the reachable weights after
/// the first `k` items, ascending. Absent weights have `V = +inf` and `D = ∅`.
#[derive(Debug, Clone, PartialEq)]
pub struct DpTable {
    stages: Vec<Vec<DpEntry>>,
}

impl DpTable {
    /// Seeds stage 0 with the forced items (all of `seed` together), then adds
    /// `items` one per stage. An item replaces the stored entry only on a strictly
    /// smaller total share. Weights above `cap` are dropped.
    pub fn build(seed: &[DpItem], items: &[DpItem], cap: u64) -> DpTable {
        let y0: u64 = seed.iter().map(|s| s.weight).sum();
        let first = if y0 <= cap {
            vec![DpEntry {
                y: y0,
                value: seed.iter().map(|s| s.share).sum(),
                set: seed.iter().map(|s| s.agent).collect(),
            }]
        } else {
            Vec::new()
        };
        let mut stages = Vec::with_capacity(items.len() + 1);
        stages.push(first);
        for item in items {
            let prev = stages.last().expect("stage 0 exists");
            stages.push(Self::advance(prev, item, cap));
        }
        DpTable { stages }
    }

    fn advance(prev: &[DpEntry], item: &DpItem, cap: u64) -> Vec<DpEntry> {
        let shifted = prev.iter().filter(|e| e.y.saturating_add(item.weight) <= cap).map(|e| DpEntry {
            y: e.y + item.weight,
            value: e.value + item.share,
            set: e.set.with(item.agent),
        });
        let mut out = Vec::with_capacity(prev.len() * 2);
        let mut old = prev.iter().copied().peekable();
        let mut new = shifted.peekable();
        loop {
            match (old.peek(), new.peek()) {
                (Some(a), Some(b)) if a.y == b.y => {
                    out.push(if b.value < a.value { *b } else { *a });
                    old.next();
                    new.next();
                }
                (Some(a), Some(b)) => {
                    if a.y < b.y {
                        out.push(*a);
                        old.next();
                    } else {
                        out.push(*b);
                        new.next();
                    }
                }
                (Some(a), None) => {
                    out.push(*a);
                    old.next();
                }
                (None, Some(b)) => {
                    out.push(*b);
                    new.next();
                }
                (None, None) => break,
            }
        }
        out
    }

    /// Number of stages, one more than the number of items.
    pub fn stages(&self) -> usize {
        self.stages.len()
    }

    pub fn row(&self, k: usize) -> &[DpEntry] {
        &self.stages[k]
    }

    pub fn entry(&self, k: usize, y: u64) -> Option<DpEntry> {
        let row = &self.stages[k];
        row.binary_search_by_key(&y, |e| e.y).ok().map(|p| row[p])
    }

    pub fn value(&self, k: usize, y: u64) -> f64 {
        self.entry(k, y).map_or(f64::INFINITY, |e| e.value)
    }

    pub fn witness(&self, k: usize, y: u64) -> AgentSet {
        self.entry(k, y).map_or(AgentSet::EMPTY, |e| e.set)
    }

    pub fn last(&self, y: u64) -> Option<DpEntry> {
        self.entry(self.stages.len() - 1, y)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn item(agent: usize, weight: u64, share: f64) -> DpItem {
        DpItem { agent, weight, share }
    }

    #[test]
    fn seed_only() {
        let t = DpTable::build(&[item(0, 3, 0.1), item(1, 2, 0.2)], &[], 10);
        assert_eq!(t.stages(), 1);
        assert_eq!(t.last(5).unwrap().set, [0, 1].into_iter().collect());
        assert!((t.value(0, 5) - 0.3).abs() < 1e-15);
        assert!(t.last(4).is_none());
    }

    #[test]
    fn prefers_cheaper_combination() {
        let seed = [item(0, 4, 0.1)];
        let items = [item(1, 2, 0.5), item(2, 1, 0.1), item(3, 1, 0.1)];
        let t = DpTable::build(&seed, &items, 6);
        let best = t.last(6).unwrap();
        assert_eq!(best.set, [0, 2, 3].into_iter().collect());
        assert!((best.value - 0.3).abs() < 1e-15);
        assert_eq!(t.value(1, 6), 0.6);
        assert_eq!(t.value(0, 6), f64::INFINITY);
        assert!(t.row(3).iter().all(|e| e.y <= 6));
    }

    #[test]
    fn equal_value_keeps_stored_set() {
        let seed = [item(0, 1, 0.1)];
        let items = [item(1, 1, 0.2), item(2, 1, 0.2)];
        let t = DpTable::build(&seed, &items, 5);
        assert_eq!(t.witness(2, 2), [0, 1].into_iter().collect());
    }
}
