#[derive(Copy, Clone, Debug, PartialEq, Eq)]
pub enum Status {
    Success,
    Failure,
}

impl Status {
    pub fn from_bool(ok: bool) -> Self {
        if ok {
            Status::Success
        } else {
            Status::Failure
        }
    }

    pub fn is_success(self) -> bool {
        self == Status::Success
    }
}

/// Source of the current time for time selectors.
pub trait Clock {
    fn now(&self) -> f64;
}

/// Executable leaf over a tick context `C`.
pub trait Leaf<C> {
    fn tick(&self, ctx: &mut C) -> Status;
}

/// A concrete behavior tree with leaves of type `L`.
#[derive(Clone, Debug, PartialEq)]
pub enum Node<L> {
    /// Ticks children in order until one succeeds.
    Selector(Vec<Node<L>>),
    /// Ticks children in order until one fails.
    Sequence(Vec<Node<L>>),
    /// Ticks the child whose phase contains the current time. `intervals[i]`
    /// is the length of phase `i`; the last child covers everything after.
    TimeSelector {
        intervals: Vec<f64>,
        children: Vec<Node<L>>,
    },
    /// Ticks the child chosen by `selected` (1-based).
    Switch {
        selected: usize,
        children: Vec<Node<L>>,
    },
    Leaf(L),
}

/// Index of the active phase at time `t`: the smallest `i` with
/// `t < intervals[0] + .. + intervals[i]`, otherwise the last child.
pub fn select_time_phase(intervals: &[f64], children: usize, t: f64) -> usize {
    let mut end = 0.0;
    for (i, len) in intervals.iter().take(children.saturating_sub(1)).enumerate() {
        end += len;
        if t < end {
            return i;
        }
    }
    children - 1
}

impl<L> Node<L> {
    pub fn tick<C: Clock>(&self, ctx: &mut C) -> Status
    where
        L: Leaf<C>,
    {
        match self {
            Node::Selector(children) => {
                for c in children {
                    if c.tick(ctx).is_success() {
                        return Status::Success;
                    }
                }
                Status::Failure
            }
            Node::Sequence(children) => {
                for c in children {
                    if !c.tick(ctx).is_success() {
                        return Status::Failure;
                    }
                }
                Status::Success
            }
            Node::TimeSelector { intervals, children } => {
                let i = select_time_phase(intervals, children.len(), ctx.now());
                children[i].tick(ctx)
            }
            Node::Switch { selected, children } => children[selected - 1].tick(ctx),
            Node::Leaf(leaf) => leaf.tick(ctx),
        }
    }

    pub fn children(&self) -> &[Node<L>] {
        match self {
            Node::Selector(c) | Node::Sequence(c) => c,
            Node::TimeSelector { children, .. } | Node::Switch { children, .. } => children,
            Node::Leaf(_) => &[],
        }
    }

    /// Leaves in depth-first order.
    pub fn leaves(&self) -> Vec<&L> {
        let mut out = Vec::new();
        self.collect_leaves(&mut out);
        out
    }

    fn collect_leaves<'a>(&'a self, out: &mut Vec<&'a L>) {
        match self {
            Node::Leaf(l) => out.push(l),
            other => other.children().iter().for_each(|c| c.collect_leaves(out)),
        }
    }

    pub fn node_count(&self) -> usize {
        1 + self.children().iter().map(Node::node_count).sum::<usize>()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    struct Ctx {
        t: f64,
        log: Vec<u32>,
    }

    impl Clock for Ctx {
        fn now(&self) -> f64 {
            self.t
        }
    }

    /// Logs its id and returns the given status.
    struct Probe(u32, Status);

    impl Leaf<Ctx> for Probe {
        fn tick(&self, ctx: &mut Ctx) -> Status {
            ctx.log.push(self.0);
            self.1
        }
    }

    fn ok(id: u32) -> Node<Probe> {
        Node::Leaf(Probe(id, Status::Success))
    }

    fn fail(id: u32) -> Node<Probe> {
        Node::Leaf(Probe(id, Status::Failure))
    }

    fn run(node: &Node<Probe>, t: f64) -> (Status, Vec<u32>) {
        let mut ctx = Ctx { t, log: vec![] };
        let s = node.tick(&mut ctx);
        (s, ctx.log)
    }

    #[test]
    fn selector_stops_at_first_success() {
        let n = Node::Selector(vec![fail(1), ok(2), ok(3)]);
        assert_eq!(run(&n, 0.0), (Status::Success, vec![1, 2]));
        let all_fail = Node::Selector(vec![fail(1), fail(2)]);
        assert_eq!(run(&all_fail, 0.0), (Status::Failure, vec![1, 2]));
    }

    #[test]
    fn sequence_stops_at_first_failure() {
        let n = Node::Sequence(vec![ok(1), fail(2), ok(3)]);
        assert_eq!(run(&n, 0.0), (Status::Failure, vec![1, 2]));
        let all_ok = Node::Sequence(vec![ok(1), ok(2)]);
        assert_eq!(run(&all_ok, 0.0), (Status::Success, vec![1, 2]));
    }

    #[test]
    fn time_phase_boundaries() {
        let iv = [1.0, 2.0];
        assert_eq!(select_time_phase(&iv, 3, 0.0), 0);
        assert_eq!(select_time_phase(&iv, 3, 0.999), 0);
        assert_eq!(select_time_phase(&iv, 3, 1.0), 1);
        assert_eq!(select_time_phase(&iv, 3, 2.999), 1);
        assert_eq!(select_time_phase(&iv, 3, 3.0), 2);
        assert_eq!(select_time_phase(&iv, 3, 1e9), 2);
        // zero-length phases are skipped
        assert_eq!(select_time_phase(&[0.0, 0.0, 5.0], 4, 0.0), 2);
    }

    #[test]
    fn time_selector_ticks_active_phase_only() {
        let n = Node::TimeSelector { intervals: vec![10.0, 10.0], children: vec![ok(1), fail(2), ok(3)] };
        assert_eq!(run(&n, 5.0), (Status::Success, vec![1]));
        assert_eq!(run(&n, 15.0), (Status::Failure, vec![2]));
        assert_eq!(run(&n, 25.0), (Status::Success, vec![3]));
    }

    #[test]
    fn switch_is_one_based() {
        let n = Node::Switch { selected: 2, children: vec![ok(1), fail(2)] };
        assert_eq!(run(&n, 0.0), (Status::Failure, vec![2]));
    }

    #[test]
    fn structure_queries() {
        let n = Node::Sequence(vec![ok(1), Node::Selector(vec![fail(2), ok(3)])]);
        assert_eq!(n.node_count(), 5);
        assert_eq!(n.leaves().iter().map(|p| p.0).collect::<Vec<_>>(), vec![1, 2, 3]);
    }
}
