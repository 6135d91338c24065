use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use super::{DomainError, Node, ParameterDescriptor, ParameterDomain, ParameterVector, SlotDomain};

/// A numeric argument in a template: fixed, or read from a named slot.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub enum ParamExpr {
    Const(f64),
    Slot(String),
}

/// Tree shape with parameter slots. Serialized as RON.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub enum TemplateNode {
    Selector(Vec<TemplateNode>),
    Sequence(Vec<TemplateNode>),
    TimeSelector { intervals: Vec<ParamExpr>, children: Vec<TemplateNode> },
    Switch { selected: ParamExpr, children: Vec<TemplateNode> },
    Leaf { kind: String, args: Vec<(String, ParamExpr)> },
}

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum TemplateError {
    #[error("template format: {0}")]
    Format(String),
    #[error("{0} node without children")]
    NoChildren(&'static str),
    #[error("time selector with {children} children needs {expected} intervals, got {got}")]
    Intervals { children: usize, expected: usize, got: usize },
    #[error("slot `{slot}`: {reason}")]
    Slot { slot: String, reason: String },
    #[error("slot `{0}` has no domain")]
    MissingDomain(String),
    #[error("domain entry `{0}` is not used by the template")]
    UnusedDomain(String),
    #[error("domain slot order differs from template order at position {0}")]
    Order(usize),
}

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum BindError {
    #[error(transparent)]
    Domain(#[from] DomainError),
    #[error("leaf `{kind}`: {message}")]
    Leaf { kind: String, message: String },
}

/// Arguments handed to a [`LeafFactory`], in template order.
#[derive(Clone, Debug, PartialEq)]
pub struct LeafArgs(pub Vec<(String, f64)>);

impl LeafArgs {
    pub fn get(&self, name: &str) -> Option<f64> {
        self.0.iter().find(|(n, _)| n == name).map(|&(_, v)| v)
    }

    pub fn require(&self, name: &str) -> Result<f64, String> {
        self.get(name).ok_or_else(|| format!("missing argument `{name}`"))
    }

    pub fn get_or(&self, name: &str, default: f64) -> f64 {
        self.get(name).unwrap_or(default)
    }
}

/// Turns a leaf kind plus bound arguments into an executable leaf.
pub trait LeafFactory {
    type Leaf;
    fn build(&self, kind: &str, args: &LeafArgs) -> Result<Self::Leaf, String>;
}

/// Use of a slot inside the template.
#[derive(Copy, Clone, Debug, PartialEq)]
enum SlotUse {
    Interval,
    Switch { children: usize },
    Argument,
}

impl TemplateNode {
    pub fn from_ron(text: &str) -> Result<Self, TemplateError> {
        ron::from_str(text).map_err(|e| TemplateError::Format(e.to_string()))
    }

    pub fn to_ron(&self) -> String {
        ron::ser::to_string_pretty(self, ron::ser::PrettyConfig::default()).expect("template serializes")
    }

    /// Slot names in depth-first order of first appearance.
    pub fn slot_names(&self) -> Vec<String> {
        let mut uses = Vec::new();
        self.visit_slots(&mut uses);
        let mut seen = Vec::<String>::new();
        for (name, _) in uses {
            if !seen.contains(&name) {
                seen.push(name);
            }
        }
        seen
    }

    fn visit_slots(&self, out: &mut Vec<(String, SlotUse)>) {
        let mut note = |e: &ParamExpr, usage| {
            if let ParamExpr::Slot(s) = e {
                out.push((s.clone(), usage));
            }
        };
        match self {
            TemplateNode::Selector(c) | TemplateNode::Sequence(c) => {
                c.iter().for_each(|n| n.visit_slots(out));
            }
            TemplateNode::TimeSelector { intervals, children } => {
                intervals.iter().for_each(|e| note(e, SlotUse::Interval));
                children.iter().for_each(|n| n.visit_slots(out));
            }
            TemplateNode::Switch { selected, children } => {
                note(selected, SlotUse::Switch { children: children.len() });
                children.iter().for_each(|n| n.visit_slots(out));
            }
            TemplateNode::Leaf { args, .. } => {
                args.iter().for_each(|(_, e)| note(e, SlotUse::Argument));
            }
        }
    }

    fn check_structure(&self) -> Result<(), TemplateError> {
        let bad_const = |reason: String| TemplateError::Slot { slot: "<const>".into(), reason };
        match self {
            TemplateNode::Selector(c) if c.is_empty() => Err(TemplateError::NoChildren("selector")),
            TemplateNode::Sequence(c) if c.is_empty() => Err(TemplateError::NoChildren("sequence")),
            TemplateNode::Selector(c) | TemplateNode::Sequence(c) => {
                c.iter().try_for_each(TemplateNode::check_structure)
            }
            TemplateNode::TimeSelector { intervals, children } => {
                if children.is_empty() {
                    return Err(TemplateError::NoChildren("time selector"));
                }
                if intervals.len() + 1 != children.len() {
                    return Err(TemplateError::Intervals {
                        children: children.len(),
                        expected: children.len() - 1,
                        got: intervals.len(),
                    });
                }
                for e in intervals {
                    if let ParamExpr::Const(v) = e {
                        if v.is_nan() || *v < 0.0 {
                            return Err(bad_const(format!("negative phase length {v}")));
                        }
                    }
                }
                children.iter().try_for_each(TemplateNode::check_structure)
            }
            TemplateNode::Switch { selected, children } => {
                if children.is_empty() {
                    return Err(TemplateError::NoChildren("switch"));
                }
                if let ParamExpr::Const(v) = selected {
                    if !valid_choice(*v, children.len()) {
                        return Err(bad_const(format!("switch choice {v} outside 1..={}", children.len())));
                    }
                }
                children.iter().try_for_each(TemplateNode::check_structure)
            }
            TemplateNode::Leaf { .. } => Ok(()),
        }
    }

    fn bind<F: LeafFactory>(&self, values: &BTreeMap<&str, f64>, factory: &F) -> Result<Node<F::Leaf>, BindError> {
        let eval = |e: &ParamExpr| match e {
            ParamExpr::Const(v) => *v,
            ParamExpr::Slot(s) => values[s.as_str()],
        };
        let bind_all =
            |c: &[TemplateNode]| -> Result<Vec<_>, BindError> { c.iter().map(|n| n.bind(values, factory)).collect() };
        Ok(match self {
            TemplateNode::Selector(c) => Node::Selector(bind_all(c)?),
            TemplateNode::Sequence(c) => Node::Sequence(bind_all(c)?),
            TemplateNode::TimeSelector { intervals, children } => {
                Node::TimeSelector { intervals: intervals.iter().map(eval).collect(), children: bind_all(children)? }
            }
            TemplateNode::Switch { selected, children } => {
                Node::Switch { selected: eval(selected) as usize, children: bind_all(children)? }
            }
            TemplateNode::Leaf { kind, args } => {
                let args = LeafArgs(args.iter().map(|(n, e)| (n.clone(), eval(e))).collect());
                let leaf =
                    factory.build(kind, &args).map_err(|message| BindError::Leaf { kind: kind.clone(), message })?;
                Node::Leaf(leaf)
            }
        })
    }
}

fn valid_choice(v: f64, children: usize) -> bool {
    v.fract() == 0.0 && v >= 1.0 && v <= children as f64
}

/// A template together with the domain of each of its slots. Slot `i` of
/// the domain is the `i`-th distinct slot met in a depth-first walk.
#[derive(Clone, Debug, PartialEq)]
pub struct AdaptiveTree {
    template: TemplateNode,
    domain: ParameterDomain,
}

impl AdaptiveTree {
    /// Checks the tree shape, that the domain lists exactly the template's
    /// slots in depth-first order, and that each slot's domain suits every
    /// place the slot is used.
    pub fn new(template: TemplateNode, domain: ParameterDomain) -> Result<Self, TemplateError> {
        template.check_structure()?;
        let names = template.slot_names();
        for (i, name) in names.iter().enumerate() {
            match domain.slots().get(i) {
                Some(d) if &d.name == name => {}
                Some(_) if domain.index_of(name).is_some() => return Err(TemplateError::Order(i)),
                _ => return Err(TemplateError::MissingDomain(name.clone())),
            }
        }
        if let Some(extra) = domain.slots().get(names.len()) {
            return Err(TemplateError::UnusedDomain(extra.name.clone()));
        }
        let mut uses = Vec::new();
        template.visit_slots(&mut uses);
        for (name, usage) in uses {
            let d = &domain.slot(domain.index_of(&name).expect("checked")).domain;
            check_use(&name, d, usage)?;
        }
        Ok(Self { template, domain })
    }

    /// Like [`AdaptiveTree::new`] but accepts descriptors in any order and
    /// arranges them to match the template.
    pub fn from_descriptors(
        template: TemplateNode,
        descriptors: Vec<ParameterDescriptor>,
    ) -> Result<Self, TemplateError> {
        let names = template.slot_names();
        let mut by_name: BTreeMap<String, ParameterDescriptor> =
            descriptors.into_iter().map(|d| (d.name.clone(), d)).collect();
        let mut ordered = Vec::with_capacity(names.len());
        for n in &names {
            ordered.push(by_name.remove(n).ok_or_else(|| TemplateError::MissingDomain(n.clone()))?);
        }
        if let Some(extra) = by_name.into_keys().next() {
            return Err(TemplateError::UnusedDomain(extra));
        }
        Self::new(template, ParameterDomain::new(ordered))
    }

    pub fn template(&self) -> &TemplateNode {
        &self.template
    }

    pub fn domain(&self) -> &ParameterDomain {
        &self.domain
    }

    /// Same template over a narrower domain. Each replacement slot domain
    /// must be usable where the slot appears.
    pub fn with_domain(&self, domain: ParameterDomain) -> Result<Self, TemplateError> {
        Self::new(self.template.clone(), domain)
    }

    /// Concrete tree with every slot replaced by its value in `p`.
    pub fn bind<F: LeafFactory>(&self, p: &ParameterVector, factory: &F) -> Result<Node<F::Leaf>, BindError> {
        self.domain.validate(p)?;
        let values: BTreeMap<&str, f64> =
            self.domain.slots().iter().map(|s| s.name.as_str()).zip(p.values().iter().copied()).collect();
        self.template.bind(&values, factory)
    }
}

fn check_use(name: &str, d: &SlotDomain, usage: SlotUse) -> Result<(), TemplateError> {
    let fail = |reason: String| Err(TemplateError::Slot { slot: name.into(), reason });
    match usage {
        SlotUse::Interval if d.bounds().0 < 0.0 => fail("phase length domain reaches below 0".into()),
        SlotUse::Switch { children } => match d {
            SlotDomain::Discrete { values } if values.iter().all(|&v| valid_choice(v, children)) => Ok(()),
            _ => fail(format!("switch domain must be a subset of 1..={children}")),
        },
        _ => Ok(()),
    }
}
