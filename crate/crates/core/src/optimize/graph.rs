use std::collections::VecDeque;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use super::operators::{crossover_uniform, mutate, roulette_select, shuffle, SaChain, SaConfig};
use super::{derive_seed, CachedEvaluator, EvalError, Evaluator, Solution};

/// Population transformation performed by one graph node.
#[derive(Clone, Debug, PartialEq)]
pub enum Task {
    Pass,
    /// Best `k` by fitness, ties in input order.
    SelectBest(usize),
    /// `k` roulette draws with replacement.
    Roulette(usize),
    Shuffle,
    /// Two children from each consecutive pair; an odd last solution passes.
    Crossover,
    /// Copies with each slot resampled at the mutation rate.
    Mutate,
    /// One annealing run per solution, replaced by the best it visited.
    Improve,
}

#[derive(Clone, Debug, PartialEq)]
pub struct GraphNode {
    pub name: String,
    pub task: Task,
    pub preds: Vec<usize>,
}

#[derive(Debug, thiserror::Error, PartialEq)]
pub enum GraphError {
    #[error("node {node} has unknown predecessor {pred}")]
    UnknownPredecessor { node: usize, pred: usize },
    #[error("graph has a cycle")]
    Cycle,
    #[error("graph needs exactly one sink, found {0}")]
    Sinks(usize),
    #[error("graph is empty")]
    Empty,
}

#[derive(Debug, thiserror::Error)]
pub enum OptimizeError {
    #[error(transparent)]
    Graph(#[from] GraphError),
    #[error(transparent)]
    Eval(#[from] EvalError),
}

/// Population sizes seen by one node during one execution.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct NodeTrace {
    pub node: usize,
    pub input: usize,
    pub output: usize,
}

/// Knobs and shared state a graph run needs.
pub struct TaskContext<'a, E> {
    pub evaluator: &'a CachedEvaluator<E>,
    pub mutation_prob: f64,
    pub sa: &'a SaConfig,
    pub seed: u64,
    pub iteration: u64,
}

/// A DAG of population tasks. Source nodes read the initial population,
/// every other node reads its predecessors' outputs concatenated in edge
/// order, and the single sink's output is the result.
#[derive(Clone, Debug, PartialEq)]
pub struct TaskGraph {
    nodes: Vec<GraphNode>,
    order: Vec<usize>,
    sink: usize,
}

impl TaskGraph {
    pub fn new(nodes: Vec<GraphNode>) -> Result<Self, GraphError> {
        if nodes.is_empty() {
            return Err(GraphError::Empty);
        }
        let n = nodes.len();
        let mut indegree = vec![0usize; n];
        let mut succs = vec![Vec::new(); n];
        for (i, node) in nodes.iter().enumerate() {
            for &p in &node.preds {
                if p >= n {
                    return Err(GraphError::UnknownPredecessor { node: i, pred: p });
                }
                indegree[i] += 1;
                succs[p].push(i);
            }
        }
        let sinks: Vec<usize> = (0..n).filter(|&i| succs[i].is_empty()).collect();
        let mut queue: VecDeque<usize> = (0..n).filter(|&i| indegree[i] == 0).collect();
        let mut order = Vec::with_capacity(n);
        while let Some(i) = queue.pop_front() {
            order.push(i);
            for &s in &succs[i] {
                indegree[s] -= 1;
                if indegree[s] == 0 {
                    queue.push_back(s);
                }
            }
        }
        if order.len() < n {
            return Err(GraphError::Cycle);
        }
        if sinks.len() != 1 {
            return Err(GraphError::Sinks(sinks.len()));
        }
        Ok(Self { nodes, order, sink: sinks[0] })
    }

    /// The memetic iteration for population size `m`:
    ///
    /// ```text
    /// 1 pass ─┬─ 2 best 5 ──────┬─ 4 shuffle ─ 5 crossover ─ 6 mutate ─ 7 improve ─┐
    ///         ├─ 3 roulette 2m-5┘                                                 ├─ 8 best m
    ///         └───────────────────────────────────────────────────────────────────┘
    /// ```
    ///
    /// For `m < 5` node 2 keeps all `m` and node 3 draws `m`.
    pub fn memetic(m: usize) -> Self {
        let elite = m.min(5);
        let node = |name: &str, task, preds: &[usize]| GraphNode { name: name.into(), task, preds: preds.to_vec() };
        Self::new(vec![
            node("pass", Task::Pass, &[]),
            node("best", Task::SelectBest(elite), &[0]),
            node("roulette", Task::Roulette(2 * m - elite), &[0]),
            node("shuffle", Task::Shuffle, &[1, 2]),
            node("crossover", Task::Crossover, &[3]),
            node("mutate", Task::Mutate, &[4]),
            node("improve", Task::Improve, &[5]),
            node("survivors", Task::SelectBest(m), &[0, 6]),
        ])
        .expect("memetic graph is a DAG")
    }

    pub fn nodes(&self) -> &[GraphNode] {
        &self.nodes
    }

    pub fn order(&self) -> &[usize] {
        &self.order
    }

    pub fn execute<E: Evaluator>(
        &self,
        initial: Vec<Solution>,
        ctx: &TaskContext<'_, E>,
    ) -> Result<(Vec<Solution>, Vec<NodeTrace>), OptimizeError> {
        let mut outputs: Vec<Option<Vec<Solution>>> = vec![None; self.nodes.len()];
        let mut traces = Vec::with_capacity(self.nodes.len());
        for &i in &self.order {
            let node = &self.nodes[i];
            let input = if node.preds.is_empty() {
                initial.clone()
            } else {
                node.preds.iter().flat_map(|&p| outputs[p].clone().expect("topological order")).collect()
            };
            let in_len = input.len();
            let out = run_task(&node.task, input, ctx, i)?;
            traces.push(NodeTrace { node: i, input: in_len, output: out.len() });
            outputs[i] = Some(out);
        }
        Ok((outputs[self.sink].take().expect("sink ran"), traces))
    }
}

fn node_rng(ctx_seed: u64, iteration: u64, node: usize, index: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(derive_seed(&[ctx_seed, iteration, node as u64, index]))
}

/// Fills in missing evaluations through one cache batch.
pub fn evaluate_all<E: Evaluator>(pop: &mut [Solution], evaluator: &CachedEvaluator<E>) -> Result<(), EvalError> {
    let todo: Vec<usize> = (0..pop.len()).filter(|&i| pop[i].eval.is_none()).collect();
    if todo.is_empty() {
        return Ok(());
    }
    let ps: Vec<_> = todo.iter().map(|&i| pop[i].p.clone()).collect();
    for (i, e) in todo.into_iter().zip(evaluator.evaluate_batch(&ps)?) {
        pop[i].eval = Some(e);
    }
    Ok(())
}

/// Stable sort by descending fitness.
pub fn sort_best_first(pop: &mut [Solution]) {
    pop.sort_by(|a, b| b.fitness().expect("evaluated").total_cmp(&a.fitness().expect("evaluated")));
}

fn run_task<E: Evaluator>(
    task: &Task,
    mut pop: Vec<Solution>,
    ctx: &TaskContext<'_, E>,
    node: usize,
) -> Result<Vec<Solution>, EvalError> {
    let mut rng = node_rng(ctx.seed, ctx.iteration, node, 0);
    Ok(match task {
        Task::Pass => pop,
        Task::SelectBest(k) => {
            evaluate_all(&mut pop, ctx.evaluator)?;
            sort_best_first(&mut pop);
            pop.truncate(*k);
            pop
        }
        Task::Roulette(k) => {
            if pop.is_empty() {
                return Ok(pop);
            }
            evaluate_all(&mut pop, ctx.evaluator)?;
            roulette_select(&pop, *k, &mut rng)
        }
        Task::Shuffle => {
            shuffle(&mut pop, &mut rng);
            pop
        }
        Task::Crossover => {
            let mut out = Vec::with_capacity(pop.len());
            for pair in pop.chunks(2) {
                match pair {
                    [a, b] => {
                        let (x, y) = crossover_uniform(&a.p, &b.p, &mut rng);
                        out.push(Solution::new(x));
                        out.push(Solution::new(y));
                    }
                    [a] => out.push(a.clone()),
                    _ => unreachable!("chunks of two"),
                }
            }
            out
        }
        Task::Mutate => pop
            .into_iter()
            .map(|s| {
                let q = mutate(&s.p, ctx.evaluator.domain(), ctx.mutation_prob, &mut rng);
                if q == s.p {
                    s
                } else {
                    Solution::new(q)
                }
            })
            .collect(),
        Task::Improve => improve(pop, ctx, node)?,
    })
}

/// Anneals every solution. The chains advance in lockstep so each step's
/// proposals form one evaluation batch.
fn improve<E: Evaluator>(
    mut pop: Vec<Solution>,
    ctx: &TaskContext<'_, E>,
    node: usize,
) -> Result<Vec<Solution>, EvalError> {
    evaluate_all(&mut pop, ctx.evaluator)?;
    let mut chains: Vec<SaChain> = pop
        .into_iter()
        .enumerate()
        .map(|(i, s)| SaChain::new(s, ctx.sa.tau0, node_rng(ctx.seed, ctx.iteration, node, i as u64 + 1)))
        .collect();
    for _ in 0..ctx.sa.i_max {
        let domain = ctx.evaluator.domain();
        let proposals: Vec<_> = chains.iter_mut().map(|c| c.propose(domain, ctx.sa)).collect();
        let evals = ctx.evaluator.evaluate_batch(&proposals)?;
        for ((chain, p), e) in chains.iter_mut().zip(proposals).zip(evals) {
            chain.advance(Solution { p, eval: Some(e) }, ctx.sa);
        }
    }
    Ok(chains.into_iter().map(|c| c.best).collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::btree::{ParameterDescriptor, ParameterDomain, ParameterVector, SlotDomain};
    use crate::optimize::Evaluation;

    struct Neg {
        domain: ParameterDomain,
    }

    impl Evaluator for Neg {
        fn domain(&self) -> &ParameterDomain {
            &self.domain
        }

        fn evaluate(&self, p: &ParameterVector) -> Result<Evaluation, EvalError> {
            Ok(Evaluation::new(-p.values().iter().map(|v| v * v).sum::<f64>(), 0.0, true, 1))
        }
    }

    fn evaluator() -> CachedEvaluator<Neg> {
        CachedEvaluator::new(Neg {
            domain: ParameterDomain::new(vec![
                ParameterDescriptor::new("x", SlotDomain::continuous(-1.0, 1.0)),
                ParameterDescriptor::new("y", SlotDomain::continuous(-1.0, 1.0)),
            ]),
        })
    }

    fn node(task: Task, preds: &[usize]) -> GraphNode {
        GraphNode { name: String::new(), task, preds: preds.to_vec() }
    }

    #[test]
    fn rejects_cycles_and_bad_shapes() {
        assert_eq!(TaskGraph::new(vec![]), Err(GraphError::Empty));
        let cycle = vec![node(Task::Pass, &[]), node(Task::Pass, &[0, 2]), node(Task::Pass, &[1])];
        assert_eq!(TaskGraph::new(cycle), Err(GraphError::Cycle));
        let two_sinks = vec![node(Task::Pass, &[]), node(Task::Pass, &[0]), node(Task::Pass, &[0])];
        assert_eq!(TaskGraph::new(two_sinks), Err(GraphError::Sinks(2)));
        let dangling = vec![node(Task::Pass, &[3])];
        assert!(matches!(TaskGraph::new(dangling), Err(GraphError::UnknownPredecessor { .. })));
    }

    #[test]
    fn single_pass_is_identity() {
        let e = evaluator();
        let g = TaskGraph::new(vec![node(Task::Pass, &[])]).unwrap();
        let sa = SaConfig::default();
        let ctx = TaskContext { evaluator: &e, mutation_prob: 0.05, sa: &sa, seed: 1, iteration: 0 };
        let pop = vec![Solution::new(ParameterVector(vec![0.1, 0.2]))];
        let (out, _) = g.execute(pop.clone(), &ctx).unwrap();
        assert_eq!(out, pop);
        assert_eq!(e.cache().evaluations(), 0);
    }

    #[test]
    fn memetic_order_is_topological() {
        let g = TaskGraph::memetic(12);
        assert_eq!(g.order(), &[0, 1, 2, 3, 4, 5, 6, 7]);
    }

    #[test]
    fn select_best_keeps_ties_in_order() {
        let e = evaluator();
        let sa = SaConfig::default();
        let ctx = TaskContext { evaluator: &e, mutation_prob: 0.0, sa: &sa, seed: 1, iteration: 0 };
        let pop: Vec<Solution> =
            [0.5, -0.5, 0.1, 0.9].iter().map(|&x| Solution::new(ParameterVector(vec![x, 0.0]))).collect();
        let out = run_task(&Task::SelectBest(3), pop, &ctx, 0).unwrap();
        let xs: Vec<f64> = out.iter().map(|s| s.p.get(0)).collect();
        assert_eq!(xs, [0.1, 0.5, -0.5]);
    }
}
